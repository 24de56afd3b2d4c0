//! Coloured signatures over a finite colour set, the substitution tensor, the
//! unit, reindexing along colour maps, and the action on slice objects.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finset::FinMap;
use crate::operads::TermTree;

pub type Colour = usize;

/// The finite ordered set of colour names `O`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Colours(Arc<[String]>);

impl Colours {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::Input(format!("duplicate colour name {n:?}")));
            }
        }
        Ok(Colours(names.into()))
    }

    /// The one-colour set `{*}`.
    pub fn single() -> Self {
        Colours(vec!["*".to_string()].into())
    }

    /// Colours named `c0, c1, ...`; `numbered(1)` is [`Colours::single`].
    pub fn numbered(n: usize) -> Self {
        if n == 1 {
            return Colours::single();
        }
        Colours((0..n).map(|i| format!("c{i}")).collect::<Vec<_>>().into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, c: Colour) -> &str {
        &self.0[c]
    }

    pub fn index_of(&self, name: &str) -> Option<Colour> {
        self.0.iter().position(|n| n == name)
    }

    pub fn all(&self) -> std::ops::Range<Colour> {
        0..self.0.len()
    }

    pub fn check(&self, c: Colour) -> Result<()> {
        if c < self.0.len() {
            Ok(())
        } else {
            Err(Error::Input(format!(
                "colour index {c} outside a set of {} colours",
                self.0.len()
            )))
        }
    }
}

impl fmt::Debug for Colours {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// The structured name of an operation. Composite constructions build their
/// operations from the operations of their inputs, so every construction can
/// be inverted on elements.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Atom(Arc<str>),
    /// The identity operation `i_o` of the unit signature.
    Unit,
    /// A tensor element `(a; b_1, ..., b_n)`.
    Pair(Arc<Op>, Arc<[Op]>),
    /// A decorated operation `(a, xi, beta)`; `beta` is the word of inputs of
    /// the enclosing [`Op`].
    Dec(Arc<Op>, FinMap),
    /// An operation `b` over another colour set, retyped along a colour map.
    /// The string is the name of `b` in its own colour set.
    Prone(Arc<Op>, Arc<str>),
    /// An operation pushed forward along a colour map, keeping its name.
    Supine(Arc<Op>, Arc<str>),
    /// A term tree.
    Tree(Arc<TermTree>),
    /// A class of a quotient, named by its representative.
    Class(Arc<Op>),
}

/// A typed operation: a label, an output colour and a word of input colours.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Op {
    pub label: Label,
    pub out: Colour,
    pub ins: Vec<Colour>,
}

impl Op {
    pub fn atom(name: &str, out: Colour, ins: Vec<Colour>) -> Op {
        Op {
            label: Label::Atom(name.into()),
            out,
            ins,
        }
    }

    pub fn unit(c: Colour) -> Op {
        Op {
            label: Label::Unit,
            out: c,
            ins: vec![c],
        }
    }

    pub fn arity(&self) -> usize {
        self.ins.len()
    }

    /// The tensor element `(a; bs)`, checking that the colours match.
    pub fn pair(a: &Op, bs: Vec<Op>) -> Result<Op> {
        if bs.len() != a.arity() {
            return Err(Error::Compose(format!(
                "operation {a:?} of arity {} given {} arguments",
                a.arity(),
                bs.len()
            )));
        }
        let mut ins = Vec::new();
        for (i, b) in bs.iter().enumerate() {
            if b.out != a.ins[i] {
                return Err(Error::ColourMismatch(format!(
                    "argument {} of {a:?} has colour {} but {b:?} outputs {}",
                    i + 1,
                    a.ins[i],
                    b.out
                )));
            }
            ins.extend_from_slice(&b.ins);
        }
        Ok(Op {
            label: Label::Pair(Arc::new(a.clone()), bs.into()),
            out: a.out,
            ins,
        })
    }

    pub fn class(rep: &Op) -> Op {
        Op {
            label: Label::Class(Arc::new(rep.clone())),
            out: rep.out,
            ins: rep.ins.clone(),
        }
    }

    pub fn as_pair(&self) -> Option<(&Op, &[Op])> {
        match &self.label {
            Label::Pair(a, bs) => Some((a, bs)),
            _ => None,
        }
    }

    pub fn expect_pair(&self) -> Result<(&Op, &[Op])> {
        self.as_pair()
            .ok_or_else(|| Error::Input(format!("{self:?} is not a tensor element")))
    }

    pub fn as_dec(&self) -> Option<(&Op, &FinMap)> {
        match &self.label {
            Label::Dec(a, xi) => Some((a, xi)),
            _ => None,
        }
    }

    pub fn expect_dec(&self) -> Result<(&Op, &FinMap)> {
        self.as_dec()
            .ok_or_else(|| Error::Input(format!("{self:?} is not a decorated operation")))
    }

    pub fn as_class(&self) -> Option<&Op> {
        match &self.label {
            Label::Class(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_tree(&self) -> Option<&TermTree> {
        match &self.label {
            Label::Tree(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.label, Label::Unit)
    }

    /// Canonical name, with colour names taken from `colours`.
    pub fn name(&self, colours: &Colours) -> String {
        let mut s = String::new();
        self.write_name(&mut s, Some(colours));
        s
    }

    pub(crate) fn write_name(&self, s: &mut String, colours: Option<&Colours>) {
        let cname = |c: Colour| match colours {
            Some(cs) if c < cs.len() => cs.name(c).to_string(),
            _ => c.to_string(),
        };
        let many = colours.is_none_or(|cs| cs.len() > 1);
        match &self.label {
            Label::Atom(n) => s.push_str(n),
            Label::Unit => {
                s.push('i');
                if many {
                    s.push('@');
                    s.push_str(&cname(self.out));
                }
            }
            Label::Pair(a, bs) => {
                s.push('(');
                a.write_name(s, colours);
                s.push(';');
                for (i, b) in bs.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    b.write_name(s, colours);
                }
                s.push(')');
            }
            Label::Dec(a, xi) => {
                s.push('<');
                a.write_name(s, colours);
                s.push('|');
                s.push_str(&xi.to_string());
                if many && !xi.is_surjection() {
                    s.push('|');
                    let cs: Vec<String> = self.ins.iter().map(|&c| cname(c)).collect();
                    s.push_str(&cs.join(","));
                }
                s.push('>');
            }
            Label::Prone(_, inner) => {
                s.push_str(inner);
                s.push('{');
                s.push_str(&cname(self.out));
                s.push('|');
                let cs: Vec<String> = self.ins.iter().map(|&c| cname(c)).collect();
                s.push_str(&cs.join(","));
                s.push('}');
            }
            Label::Supine(_, inner) => s.push_str(inner),
            Label::Tree(t) => t.write_name(s, colours),
            Label::Class(r) => {
                s.push('[');
                r.write_name(s, colours);
                s.push(']');
            }
        }
    }
}

impl fmt::Debug for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_name(&mut s, None);
        write!(f, "{s}:{:?}->{}", self.ins, self.out)
    }
}

/// A finite typed signature over a colour set.
#[derive(Clone)]
pub struct Signature {
    colours: Colours,
    ops: Vec<Op>,
}

impl Signature {
    /// Build a signature, checking colours and that no operation repeats.
    pub fn new(colours: Colours, ops: Vec<Op>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(ops.len());
        for op in &ops {
            colours.check(op.out)?;
            for &c in &op.ins {
                colours.check(c)?;
            }
            if !seen.insert(op) {
                return Err(Error::Input(format!(
                    "operation {} listed twice",
                    op.name(&colours)
                )));
            }
        }
        Ok(Signature { colours, ops })
    }

    /// Build a signature from operations known to be distinct and well coloured.
    pub(crate) fn from_distinct(colours: Colours, ops: Vec<Op>) -> Self {
        debug_assert!(Signature::new(colours.clone(), ops.clone()).is_ok());
        Signature { colours, ops }
    }

    pub fn empty(colours: Colours) -> Self {
        Signature {
            colours,
            ops: Vec::new(),
        }
    }

    pub fn colours(&self) -> &Colours {
        &self.colours
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn index(&self) -> HashMap<&Op, usize> {
        self.ops.iter().enumerate().map(|(i, o)| (o, i)).collect()
    }

    pub fn find(&self, name: &str) -> Option<&Op> {
        self.ops.iter().find(|o| o.name(&self.colours) == name)
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(Op::arity).max().unwrap_or(0)
    }

    /// Operations grouped by output colour.
    pub fn by_output(&self) -> Vec<Vec<&Op>> {
        let mut out = vec![Vec::new(); self.colours.len()];
        for op in &self.ops {
            out[op.out].push(op);
        }
        out
    }

    /// Number of operations of each arity.
    pub fn arity_counts(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for op in &self.ops {
            *m.entry(op.arity()).or_insert(0) += 1;
        }
        m
    }

    /// Keep only operations of arity at most `max`.
    pub fn truncate(&self, max: usize) -> Signature {
        Signature {
            colours: self.colours.clone(),
            ops: self
                .ops
                .iter()
                .filter(|o| o.arity() <= max)
                .cloned()
                .collect(),
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.ops.iter().map(|o| o.name(&self.colours)).collect()
    }

    fn sorted_ops(&self) -> Vec<&Op> {
        let mut v: Vec<&Op> = self.ops.iter().collect();
        v.sort();
        v
    }
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.colours == other.colours && self.sorted_ops() == other.sorted_ops()
    }
}

impl Eq for Signature {}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Signature{:?}{{", self.colours)?;
        for (i, op) in self.ops.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", op.name(&self.colours))?;
        }
        write!(f, "}}")
    }
}

fn same_colours(a: &Colours, b: &Colours, what: &str) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ColourMismatch(format!("{what}: {a:?} vs {b:?}")))
    }
}

/// The unit signature: one unary operation `o -> o` per colour.
pub fn unit(colours: &Colours) -> Signature {
    Signature {
        colours: colours.clone(),
        ops: colours.all().map(Op::unit).collect(),
    }
}

/// The substitution tensor `A ⊗ B`.
pub fn tensor(a: &Signature, b: &Signature) -> Result<Signature> {
    tensor_bounded(a, b, None)
}

/// `A ⊗ B` restricted to elements of arity at most `max_arity`.
pub fn tensor_bounded(a: &Signature, b: &Signature, max_arity: Option<usize>) -> Result<Signature> {
    same_colours(a.colours(), b.colours(), "tensor")?;
    let by_out = b.by_output();
    let mut ops = Vec::new();
    for top in a.ops() {
        let mut chosen = Vec::with_capacity(top.arity());
        extend_tensor(top, &by_out, max_arity, 0, &mut chosen, &mut ops);
    }
    Ok(Signature {
        colours: a.colours.clone(),
        ops,
    })
}

fn extend_tensor(
    top: &Op,
    by_out: &[Vec<&Op>],
    max_arity: Option<usize>,
    arity_so_far: usize,
    chosen: &mut Vec<Op>,
    out: &mut Vec<Op>,
) {
    let i = chosen.len();
    if i == top.arity() {
        out.push(Op::pair(top, chosen.clone()).expect("colours matched during enumeration"));
        return;
    }
    for b in &by_out[top.ins[i]] {
        let ar = arity_so_far + b.arity();
        if max_arity.is_some_and(|m| ar > m) {
            continue;
        }
        chosen.push((*b).clone());
        extend_tensor(top, by_out, max_arity, ar, chosen, out);
        chosen.pop();
    }
}

/// Which structural isomorphism of the tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coherence {
    /// `A ⊗ (B ⊗ C) -> (A ⊗ B) ⊗ C`
    Alpha,
    /// `I ⊗ A -> A`
    Lambda,
    /// `A ⊗ I -> A`
    Rho,
}

/// `alpha: (a; (b_i; c_i)_i) |-> ((a; b); c_1 ... c_n)`.
pub fn alpha(e: &Op) -> Result<Op> {
    let (a, bcs) = e.expect_pair()?;
    let mut bs = Vec::with_capacity(bcs.len());
    let mut cs = Vec::new();
    for bc in bcs {
        let (b, c) = bc.expect_pair()?;
        bs.push(b.clone());
        cs.extend_from_slice(c);
    }
    Op::pair(&Op::pair(a, bs)?, cs)
}

/// Inverse of [`alpha`].
pub fn alpha_inv(e: &Op) -> Result<Op> {
    let (ab, cs) = e.expect_pair()?;
    let (a, bs) = ab.expect_pair()?;
    let mut rest = cs;
    let mut bcs = Vec::with_capacity(bs.len());
    for b in bs {
        let (now, later) = rest.split_at(b.arity());
        bcs.push(Op::pair(b, now.to_vec())?);
        rest = later;
    }
    Op::pair(a, bcs)
}

/// `lambda: (i; a) |-> a`.
pub fn lambda(e: &Op) -> Result<Op> {
    match e.expect_pair()? {
        (i, [a]) if i.is_unit() => Ok(a.clone()),
        _ => Err(Error::Input(format!("{e:?} is not in I ⊗ A"))),
    }
}

pub fn lambda_inv(a: &Op) -> Result<Op> {
    Op::pair(&Op::unit(a.out), vec![a.clone()])
}

/// `rho: (a; i, ..., i) |-> a`.
pub fn rho(e: &Op) -> Result<Op> {
    let (a, units) = e.expect_pair()?;
    if units.iter().all(Op::is_unit) {
        Ok(a.clone())
    } else {
        Err(Error::Input(format!("{e:?} is not in A ⊗ I")))
    }
}

pub fn rho_inv(a: &Op) -> Result<Op> {
    Op::pair(a, a.ins.iter().map(|&c| Op::unit(c)).collect())
}

/// `f ⊗ g` on a tensor element: `(a; b_i) |-> (f(a); g(b_i))`.
pub fn tensor_map(
    e: &Op,
    f: &dyn Fn(&Op) -> Result<Op>,
    g: &dyn Fn(&Op) -> Result<Op>,
) -> Result<Op> {
    let (a, bs) = e.expect_pair()?;
    let bs = bs.iter().map(g).collect::<Result<Vec<_>>>()?;
    Op::pair(&f(a)?, bs)
}

/// A bijection between two finite sets of operations, as explicit pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bijection<T> {
    pub pairs: Vec<(T, T)>,
}

impl<T: Clone + Eq + std::hash::Hash + fmt::Debug> Bijection<T> {
    /// Tabulate `f` on `source` and check it is a bijection onto `target`.
    pub fn tabulate(source: &[T], target: &[T], f: impl Fn(&T) -> Result<T>) -> Result<Self> {
        if source.len() != target.len() {
            return Err(Error::Validation(format!(
                "sizes differ: {} source elements, {} target elements",
                source.len(),
                target.len()
            )));
        }
        let targets: HashSet<&T> = target.iter().collect();
        let mut hit = HashSet::with_capacity(source.len());
        let mut pairs = Vec::with_capacity(source.len());
        for x in source {
            let y = f(x)?;
            if !targets.contains(&y) {
                return Err(Error::Validation(format!(
                    "{x:?} maps to {y:?} outside the target"
                )));
            }
            if !hit.insert(y.clone()) {
                return Err(Error::Validation(format!("{y:?} is hit twice")));
            }
            pairs.push((x.clone(), y));
        }
        Ok(Bijection { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// The explicit bijection realizing one of the coherence isomorphisms.
///
/// `args` lists `A, B, C` for `Alpha` and `A` for the unitors.
pub fn coherence_iso(which: Coherence, args: &[&Signature]) -> Result<Bijection<Op>> {
    match (which, args) {
        (Coherence::Alpha, [a, b, c]) => {
            let src = tensor(a, &tensor(b, c)?)?;
            let tgt = tensor(&tensor(a, b)?, c)?;
            Bijection::tabulate(src.ops(), tgt.ops(), alpha)
        }
        (Coherence::Lambda, [a]) => {
            let src = tensor(&unit(a.colours()), a)?;
            Bijection::tabulate(src.ops(), a.ops(), lambda)
        }
        (Coherence::Rho, [a]) => {
            let src = tensor(a, &unit(a.colours()))?;
            Bijection::tabulate(src.ops(), a.ops(), rho)
        }
        _ => Err(Error::Input(format!(
            "{which:?} given {} signatures",
            args.len()
        ))),
    }
}

/// A map of colour sets `u: O -> Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColourMap {
    source: Colours,
    target: Colours,
    values: Vec<Colour>,
}

impl ColourMap {
    pub fn new(source: Colours, target: Colours, values: Vec<Colour>) -> Result<Self> {
        if values.len() != source.len() {
            return Err(Error::Input(format!(
                "colour map has {} values for {} colours",
                values.len(),
                source.len()
            )));
        }
        for &v in &values {
            target.check(v)?;
        }
        Ok(ColourMap {
            source,
            target,
            values,
        })
    }

    pub fn identity(colours: &Colours) -> Self {
        ColourMap {
            source: colours.clone(),
            target: colours.clone(),
            values: colours.all().collect(),
        }
    }

    pub fn source(&self) -> &Colours {
        &self.source
    }

    pub fn target(&self) -> &Colours {
        &self.target
    }

    pub fn apply(&self, c: Colour) -> Colour {
        self.values[c]
    }

    pub fn values(&self) -> &[Colour] {
        &self.values
    }

    pub fn apply_word(&self, w: &[Colour]) -> Vec<Colour> {
        w.iter().map(|&c| self.values[c]).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }
}

/// Prone reindexing `u*(B)`: the operations `(b, beta)` where `beta` is a
/// typing over `O` lifting the typing of `b` along `u`.
pub fn reindex_prone(u: &ColourMap, b: &Signature) -> Result<Signature> {
    same_colours(u.target(), b.colours(), "prone reindexing")?;
    let mut fibre: Vec<Vec<Colour>> = vec![Vec::new(); u.target().len()];
    for o in u.source().all() {
        fibre[u.apply(o)].push(o);
    }
    let mut ops = Vec::new();
    for op in b.ops() {
        let inner: Arc<str> = op.name(b.colours()).into();
        let base = Arc::new(op.clone());
        let slots: Vec<&Vec<Colour>> = std::iter::once(op.out)
            .chain(op.ins.iter().copied())
            .map(|q| &fibre[q])
            .collect();
        for typing in product(&slots) {
            ops.push(Op {
                label: Label::Prone(base.clone(), inner.clone()),
                out: typing[0],
                ins: typing[1..].to_vec(),
            });
        }
    }
    Ok(Signature {
        colours: u.source().clone(),
        ops,
    })
}

/// Supine reindexing `u_!(A)`: the same operations with typing composed with `u`.
pub fn reindex_supine(u: &ColourMap, a: &Signature) -> Result<Signature> {
    same_colours(u.source(), a.colours(), "supine reindexing")?;
    let ops = a
        .ops()
        .iter()
        .map(|op| supine_op(u, a.colours(), op))
        .collect();
    Ok(Signature {
        colours: u.target().clone(),
        ops,
    })
}

fn supine_op(u: &ColourMap, colours: &Colours, op: &Op) -> Op {
    Op {
        label: Label::Supine(Arc::new(op.clone()), op.name(colours).into()),
        out: u.apply(op.out),
        ins: u.apply_word(&op.ins),
    }
}

/// The counit `u_! u*(B) -> B`, sending `(b, beta)` back to `b`.
pub fn supine_prone_counit(op: &Op) -> Result<Op> {
    match &op.label {
        Label::Supine(inner, _) => match &inner.label {
            Label::Prone(b, _) => Ok((**b).clone()),
            _ => Err(Error::Input(format!(
                "{op:?} is not in the image of prone reindexing"
            ))),
        },
        _ => Err(Error::Input(format!("{op:?} is not a supine image"))),
    }
}

/// Cartesian product of a list of finite lists, last coordinate fastest.
pub fn product<T: Clone>(lists: &[&Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::with_capacity(lists.len())];
    for list in lists {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for x in list.iter() {
                let mut p = prefix.clone();
                p.push(x.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// The label of an element of a slice object.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElemLabel {
    Atom(Arc<str>),
    /// `<a, x_1, ..., x_n>` in `A ⋆ X`.
    Tuple(Arc<Op>, Arc<[Elem]>),
    /// An element of `u*(Y)`: the element `y` placed over a colour of `O`.
    Reindexed(Arc<Elem>),
    /// A class of a quotient, named by its representative.
    Class(Arc<Elem>),
}

/// An element of a slice object `X -> O`: a label with a colour.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    pub label: ElemLabel,
    pub colour: Colour,
}

impl Elem {
    pub fn atom(name: &str, colour: Colour) -> Elem {
        Elem {
            label: ElemLabel::Atom(name.into()),
            colour,
        }
    }

    pub fn tuple(a: &Op, xs: Vec<Elem>) -> Result<Elem> {
        if xs.len() != a.arity() || xs.iter().zip(&a.ins).any(|(x, &c)| x.colour != c) {
            return Err(Error::ColourMismatch(format!(
                "arguments {xs:?} do not fit {a:?}"
            )));
        }
        Ok(Elem {
            label: ElemLabel::Tuple(Arc::new(a.clone()), xs.into()),
            colour: a.out,
        })
    }

    pub fn as_tuple(&self) -> Option<(&Op, &[Elem])> {
        match &self.label {
            ElemLabel::Tuple(a, xs) => Some((a, xs)),
            _ => None,
        }
    }

    pub fn expect_tuple(&self) -> Result<(&Op, &[Elem])> {
        self.as_tuple()
            .ok_or_else(|| Error::Input(format!("{self:?} is not an element of an action")))
    }

    pub fn class(rep: &Elem) -> Elem {
        Elem {
            label: ElemLabel::Class(Arc::new(rep.clone())),
            colour: rep.colour,
        }
    }

    pub fn name(&self, colours: &Colours) -> String {
        let mut s = String::new();
        self.write_name(&mut s, Some(colours));
        s
    }

    fn write_name(&self, s: &mut String, colours: Option<&Colours>) {
        match &self.label {
            ElemLabel::Atom(n) => s.push_str(n),
            ElemLabel::Tuple(a, xs) => {
                a.write_name(s, colours);
                s.push('(');
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    x.write_name(s, colours);
                }
                s.push(')');
            }
            ElemLabel::Reindexed(y) => {
                y.write_name(s, None);
                s.push('{');
                match colours {
                    Some(cs) if self.colour < cs.len() => s.push_str(cs.name(self.colour)),
                    _ => s.push_str(&self.colour.to_string()),
                }
                s.push('}');
            }
            ElemLabel::Class(r) => {
                s.push('[');
                r.write_name(s, colours);
                s.push(']');
            }
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_name(&mut s, None);
        write!(f, "{s}:{}", self.colour)
    }
}

/// A finite slice object `X -> O`.
#[derive(Clone)]
pub struct Slice {
    colours: Colours,
    elems: Vec<Elem>,
}

impl Slice {
    pub fn new(colours: Colours, elems: Vec<Elem>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(elems.len());
        for e in &elems {
            colours.check(e.colour)?;
            if !seen.insert(e) {
                return Err(Error::Input(format!(
                    "element {} listed twice",
                    e.name(&colours)
                )));
            }
        }
        Ok(Slice { colours, elems })
    }

    /// `sizes[c]` elements of each colour `c`, named `x1, x2, ...`.
    pub fn with_sizes(colours: &Colours, sizes: &[usize]) -> Self {
        let mut elems = Vec::new();
        for (c, &n) in sizes.iter().enumerate() {
            for _ in 0..n {
                elems.push(Elem::atom(&format!("x{}", elems.len() + 1), c));
            }
        }
        Slice {
            colours: colours.clone(),
            elems,
        }
    }

    pub fn colours(&self) -> &Colours {
        &self.colours
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn fibres(&self) -> Vec<Vec<&Elem>> {
        let mut out = vec![Vec::new(); self.colours.len()];
        for e in &self.elems {
            out[e.colour].push(e);
        }
        out
    }

    pub fn fibre_sizes(&self) -> Vec<usize> {
        self.fibres().iter().map(Vec::len).collect()
    }

    pub fn index(&self) -> HashMap<&Elem, usize> {
        self.elems.iter().enumerate().map(|(i, e)| (e, i)).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.elems.iter().map(|e| e.name(&self.colours)).collect()
    }
}

impl PartialEq for Slice {
    fn eq(&self, other: &Self) -> bool {
        let mut a: Vec<&Elem> = self.elems.iter().collect();
        let mut b: Vec<&Elem> = other.elems.iter().collect();
        a.sort();
        b.sort();
        self.colours == other.colours && a == b
    }
}

impl Eq for Slice {}

impl fmt::Debug for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Slice{:?}{:?}", self.colours, self.names())
    }
}

/// A colour-preserving map of slice objects, as an index table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceMap {
    pub source: Slice,
    pub target: Slice,
    pub values: Vec<usize>,
}

impl SliceMap {
    pub fn new(source: Slice, target: Slice, values: Vec<usize>) -> Result<Self> {
        same_colours(source.colours(), target.colours(), "slice map")?;
        if values.len() != source.len() {
            return Err(Error::Input(format!(
                "slice map has {} values for {} elements",
                values.len(),
                source.len()
            )));
        }
        for (i, &v) in values.iter().enumerate() {
            let t = target
                .elems()
                .get(v)
                .ok_or_else(|| Error::Input(format!("slice map value {v} out of range")))?;
            if t.colour != source.elems()[i].colour {
                return Err(Error::ColourMismatch(format!(
                    "{:?} sent to {:?} of another colour",
                    source.elems()[i],
                    t
                )));
            }
        }
        Ok(SliceMap {
            source,
            target,
            values,
        })
    }

    pub fn identity(x: &Slice) -> Self {
        SliceMap {
            source: x.clone(),
            target: x.clone(),
            values: (0..x.len()).collect(),
        }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = HashSet::new();
        self.values.iter().all(|v| seen.insert(*v))
    }

    pub fn is_surjective(&self) -> bool {
        let hit: HashSet<usize> = self.values.iter().copied().collect();
        hit.len() == self.target.len()
    }

    pub fn image_size(&self) -> usize {
        self.values.iter().copied().collect::<HashSet<_>>().len()
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &SliceMap) -> Result<SliceMap> {
        if self.target != then.source {
            return Err(Error::Compose("slice maps do not compose".into()));
        }
        Ok(SliceMap {
            source: self.source.clone(),
            target: then.target.clone(),
            values: self.values.iter().map(|&v| then.values[v]).collect(),
        })
    }

    /// All colour-preserving maps between two slices.
    pub fn enumerate(source: &Slice, target: &Slice) -> Vec<SliceMap> {
        let fibres = target.fibres();
        let idx = target.index();
        let choices: Vec<Vec<usize>> = source
            .elems()
            .iter()
            .map(|e| fibres[e.colour].iter().map(|t| idx[*t]).collect())
            .collect();
        let refs: Vec<&Vec<usize>> = choices.iter().collect();
        product(&refs)
            .into_iter()
            .map(|values| SliceMap {
                source: source.clone(),
                target: target.clone(),
                values,
            })
            .collect()
    }
}

/// The action `A ⋆ X = {<a, x_1..x_n> | d(x_i) = ins(a)_i}`.
pub fn act(a: &Signature, x: &Slice) -> Result<Slice> {
    same_colours(a.colours(), x.colours(), "action")?;
    let fibres = x.fibres();
    let mut elems = Vec::new();
    for op in a.ops() {
        let slots: Vec<Vec<Elem>> = op
            .ins
            .iter()
            .map(|&c| fibres[c].iter().map(|e| (*e).clone()).collect())
            .collect();
        let refs: Vec<&Vec<Elem>> = slots.iter().collect();
        let shared = Arc::new(op.clone());
        for xs in product(&refs) {
            elems.push(Elem {
                label: ElemLabel::Tuple(shared.clone(), xs.into()),
                colour: op.out,
            });
        }
    }
    Ok(Slice {
        colours: a.colours().clone(),
        elems,
    })
}

/// `r(A)(h)`: `<a, x> |-> <a, h(x)>` as a map `A ⋆ X -> A ⋆ Y`.
pub fn act_on_morphism(a: &Signature, h: &SliceMap) -> Result<SliceMap> {
    let ax = act(a, &h.source)?;
    let ay = act(a, &h.target)?;
    let src_idx = h.source.index();
    let tgt_idx = ay.index();
    let mut values = Vec::with_capacity(ax.len());
    for e in ax.elems() {
        let (op, xs) = e.expect_tuple()?;
        let ys: Vec<Elem> = xs
            .iter()
            .map(|x| h.target.elems()[h.apply(src_idx[x])].clone())
            .collect();
        let img = Elem::tuple(op, ys)?;
        values.push(tgt_idx[&img]);
    }
    SliceMap::new(ax, ay, values)
}

/// Apply a function elementwise inside `<a, x_1..x_n>`.
pub fn act_elem_map(e: &Elem, h: &dyn Fn(&Elem) -> Result<Elem>) -> Result<Elem> {
    let (op, xs) = e.expect_tuple()?;
    Elem::tuple(op, xs.iter().map(h).collect::<Result<Vec<_>>>()?)
}

/// Pullback `u*(Y)` of a slice over `Q` along `u: O -> Q`.
pub fn pullback_slice(u: &ColourMap, y: &Slice) -> Result<Slice> {
    same_colours(u.target(), y.colours(), "slice pullback")?;
    let mut elems = Vec::new();
    for o in u.source().all() {
        for e in y.elems() {
            if e.colour == u.apply(o) {
                elems.push(Elem {
                    label: ElemLabel::Reindexed(Arc::new(e.clone())),
                    colour: o,
                });
            }
        }
    }
    Ok(Slice {
        colours: u.source().clone(),
        elems,
    })
}

/// Pushforward `u_!(X)`: the same elements recoloured along `u`.
pub fn pushforward_slice(u: &ColourMap, x: &Slice) -> Result<Slice> {
    same_colours(u.source(), x.colours(), "slice pushforward")?;
    let elems = x
        .elems()
        .iter()
        .map(|e| Elem {
            label: e.label.clone(),
            colour: u.apply(e.colour),
        })
        .collect();
    Ok(Slice {
        colours: u.target().clone(),
        elems,
    })
}

/// Outcome of [`check_frobenius`].
#[derive(Clone, Debug)]
pub struct FrobeniusWitness {
    /// `u_!(A ⋆ u*(Y))`
    pub left: Slice,
    /// `u_!(A) ⋆ Y`
    pub right: Slice,
    pub bijection: Bijection<Elem>,
}

/// Build the canonical map `u_!(A ⋆ u*(Y)) -> u_!(A) ⋆ Y`,
/// `<a, (y_i over o_i)> |-> <a, y_i>`, and check it is a colour-preserving
/// bijection.
pub fn check_frobenius(u: &ColourMap, a: &Signature, y: &Slice) -> Result<FrobeniusWitness> {
    let left = pushforward_slice(u, &act(a, &pullback_slice(u, y)?)?)?;
    let right = act(&reindex_supine(u, a)?, y)?;
    let canonical = |e: &Elem| -> Result<Elem> {
        let (op, xs) = e.expect_tuple()?;
        let ys = xs
            .iter()
            .map(|x| match &x.label {
                ElemLabel::Reindexed(y) => Ok((**y).clone()),
                _ => Err(Error::Input(format!("{x:?} is not in a pullback"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let img = Elem::tuple(&supine_op(u, a.colours(), op), ys)?;
        if img.colour != e.colour {
            return Err(Error::Validation(format!("{e:?} changes colour")));
        }
        Ok(img)
    };
    let bijection = Bijection::tabulate(left.elems(), right.elems(), canonical)?;
    Ok(FrobeniusWitness {
        left,
        right,
        bijection,
    })
}

/// Bounds for the families of small signatures and slices used by law suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyBounds {
    pub max_ops: usize,
    pub max_arity: usize,
    pub max_colours: usize,
}

impl Default for FamilyBounds {
    fn default() -> Self {
        FamilyBounds {
            max_ops: 2,
            max_arity: 3,
            max_colours: 2,
        }
    }
}

/// All operation typings `(out, ins)` over `n` colours with arity at most `max_arity`.
pub fn typings(colours: usize, max_arity: usize) -> Vec<(Colour, Vec<Colour>)> {
    let all: Vec<Colour> = (0..colours).collect();
    let mut out = Vec::new();
    for arity in 0..=max_arity {
        let slots: Vec<&Vec<Colour>> = std::iter::repeat_n(&all, arity + 1).collect();
        for t in product(&slots) {
            out.push((t[0], t[1..].to_vec()));
        }
    }
    out
}

/// Every signature with at most `max_ops` operations, each of arity at most
/// `max_arity`, over `1..=max_colours` colours, up to renaming operations.
/// Operations are named `a, b, c, ...`.
pub fn signature_family(bounds: FamilyBounds) -> Vec<Signature> {
    let mut out = Vec::new();
    for nc in 1..=bounds.max_colours {
        let colours = Colours::numbered(nc);
        let types = typings(nc, bounds.max_arity);
        for k in 0..=bounds.max_ops {
            if k == 0 && nc > 1 {
                continue;
            }
            for choice in multisets(types.len(), k) {
                let ops = choice
                    .iter()
                    .enumerate()
                    .map(|(i, &t)| Op::atom(&op_letter(i), types[t].0, types[t].1.clone()))
                    .collect();
                out.push(Signature {
                    colours: colours.clone(),
                    ops,
                });
            }
        }
    }
    out
}

pub(crate) fn op_letter(i: usize) -> String {
    const LETTERS: &[u8] = b"abcdefghjklmnpqrstuvw";
    if i < LETTERS.len() {
        (LETTERS[i] as char).to_string()
    } else {
        format!("o{i}")
    }
}

/// Non-decreasing sequences of length `k` over `0..n`.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Every slice over `colours` with at most `max_size` elements, up to isomorphism.
pub fn slice_family(colours: &Colours, max_size: usize) -> Vec<Slice> {
    let mut out = Vec::new();
    let nc = colours.len();
    let mut sizes = vec![0; nc];
    loop {
        if sizes.iter().sum::<usize>() <= max_size {
            out.push(Slice::with_sizes(colours, &sizes));
        }
        let mut pos = 0;
        loop {
            if pos == nc {
                return out;
            }
            sizes[pos] += 1;
            if sizes[pos] <= max_size {
                break;
            }
            sizes[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Colours {
        Colours::single()
    }

    fn m_sig() -> Signature {
        Signature::new(one(), vec![Op::atom("m", 0, vec![0, 0])]).unwrap()
    }

    fn ab() -> Colours {
        Colours::new(["a", "b"]).unwrap()
    }

    #[test]
    fn tensor_of_binary_with_itself() {
        let t = tensor(&m_sig(), &m_sig()).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.ops()[0].arity(), 4);
        assert_eq!(t.names(), vec!["(m;m,m)"]);
    }

    #[test]
    fn tensor_with_unit_keeps_arities() {
        let a = Signature::new(
            one(),
            vec![
                Op::atom("m", 0, vec![0, 0]),
                Op::atom("e", 0, vec![]),
                Op::atom("t", 0, vec![0; 3]),
            ],
        )
        .unwrap();
        let t = tensor(&a, &unit(&one())).unwrap();
        assert_eq!(t.arity_counts(), a.arity_counts());
        assert_eq!(t.names()[0], "(m;i,i)");
    }

    #[test]
    fn typed_tensor_matches_colours() {
        let a = Signature::new(ab(), vec![Op::atom("f", 0, vec![0, 1])]).unwrap();
        let b = Signature::new(
            ab(),
            vec![Op::atom("g", 0, vec![1]), Op::atom("h", 1, vec![0])],
        )
        .unwrap();
        let t = tensor(&a, &b).unwrap();
        assert_eq!(t.names(), vec!["(f;g,h)"]);
        assert_eq!(t.ops()[0].ins, vec![1, 0]);
        assert_eq!(t.ops()[0].out, 0);
    }

    #[test]
    fn tensor_rejects_other_colours() {
        let a = Signature::empty(one());
        let b = Signature::empty(ab());
        assert!(matches!(tensor(&a, &b), Err(Error::ColourMismatch(_))));
    }

    #[test]
    fn units() {
        assert_eq!(unit(&one()).len(), 1);
        let u = unit(&ab());
        assert_eq!(u.names(), vec!["i@a", "i@b"]);
        assert!(unit(&Colours::new(Vec::<String>::new()).unwrap()).is_empty());
    }

    #[test]
    fn coherence_examples() {
        let a = m_sig();
        let r = coherence_iso(Coherence::Rho, &[&a]).unwrap();
        assert_eq!(r.pairs[0].0.name(&one()), "(m;i,i)");
        assert_eq!(r.pairs[0].1.name(&one()), "m");
        let l = coherence_iso(Coherence::Lambda, &[&a]).unwrap();
        assert_eq!(l.pairs[0].0.name(&one()), "(i;m)");
        let al = coherence_iso(Coherence::Alpha, &[&a, &a, &a]).unwrap();
        assert_eq!(al.len(), 1);
        assert_eq!(al.pairs[0].0.arity(), 8);
        assert_eq!(alpha_inv(&al.pairs[0].1).unwrap(), al.pairs[0].0);
    }

    #[test]
    fn prone_reindexing_collapse() {
        let q = one();
        let u = ColourMap::new(ab(), q.clone(), vec![0, 0]).unwrap();
        let b = m_sig();
        let r = reindex_prone(&u, &b).unwrap();
        assert_eq!(r.len(), 8);
        let id = ColourMap::identity(&q);
        assert_eq!(reindex_prone(&id, &b).unwrap().len(), 1);
        assert!(reindex_prone(&u, &Signature::empty(q)).unwrap().is_empty());
    }

    #[test]
    fn supine_reindexing() {
        let u = ColourMap::new(ab(), one(), vec![0, 0]).unwrap();
        let a = Signature::new(ab(), vec![Op::atom("f", 0, vec![0, 1])]).unwrap();
        let s = reindex_supine(&u, &a).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.ops()[0].ins, vec![0, 0]);
        assert_eq!(s.names(), vec!["f"]);
    }

    #[test]
    fn action_counts() {
        let x = Slice::with_sizes(&one(), &[3]);
        assert_eq!(act(&m_sig(), &x).unwrap().len(), 9);
        assert_eq!(act(&unit(&one()), &x).unwrap().len(), 3);
        let a = Signature::new(ab(), vec![Op::atom("f", 0, vec![0, 1])]).unwrap();
        let x = Slice::with_sizes(&ab(), &[2, 1]);
        let ax = act(&a, &x).unwrap();
        assert_eq!(ax.len(), 2);
        assert!(ax.elems().iter().all(|e| e.colour == 0));
    }

    #[test]
    fn action_on_constant_map() {
        let x = Slice::with_sizes(&one(), &[2]);
        let y = Slice::with_sizes(&one(), &[2]);
        let h = SliceMap::new(x, y, vec![0, 0]).unwrap();
        let ah = act_on_morphism(&m_sig(), &h).unwrap();
        assert_eq!(ah.source.len(), 4);
        assert_eq!(ah.image_size(), 1);
    }

    #[test]
    fn frobenius_collapse() {
        let u = ColourMap::new(ab(), one(), vec![0, 0]).unwrap();
        let a = Signature::new(ab(), vec![Op::atom("f", 0, vec![0, 1])]).unwrap();
        let y = Slice::with_sizes(&one(), &[2]);
        let w = check_frobenius(&u, &a, &y).unwrap();
        assert_eq!(w.left.len(), 4);
        assert_eq!(w.right.len(), 4);
    }

    #[test]
    fn family_sizes() {
        let fam = signature_family(FamilyBounds {
            max_ops: 2,
            max_arity: 1,
            max_colours: 1,
        });
        // typings: arity 0 and 1 → 2 types; multisets of size ≤ 2: 1 + 2 + 3
        assert_eq!(fam.len(), 6);
        assert_eq!(slice_family(&ab(), 2).len(), 6);
    }
}
