//! Monoids for the three tensors: multicategories in plain signatures, rigid
//! operads in the Kleisli category of S, and symmetric operads in species.
//! Also term trees, the free constructions, combing of decorated trees, and
//! algebras for operads.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::em::{em_eval, Algebra, Evaluation};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::finset::{permutations, FinMap, Quotient, QuotientBuilder};
use crate::laws::Violation;
use crate::monads::{apply_monad, decorate, eta, mu, phi, tmap, Bounds, MonadTag};
use crate::signatures::{
    act, product, tensor_bounded, Colour, Colours, Elem, Label, Op, Signature, Slice, SliceMap,
};

/// A planar term tree: leaves are variables of a colour, nodes carry operations.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum TermTree {
    Leaf(Colour),
    Node(Arc<Op>, Arc<[TermTree]>),
}

impl TermTree {
    /// A node, checking that the children's output colours fit the operation.
    pub fn node(op: &Op, children: Vec<TermTree>) -> Result<TermTree> {
        if children.len() != op.arity() {
            return Err(Error::Compose(format!(
                "{op:?} given {} children",
                children.len()
            )));
        }
        for (i, (c, &want)) in children.iter().zip(&op.ins).enumerate() {
            if c.out() != want {
                return Err(Error::ColourMismatch(format!(
                    "child {} of {op:?} has colour {} but slot wants {want}",
                    i + 1,
                    c.out()
                )));
            }
        }
        Ok(TermTree::Node(Arc::new(op.clone()), children.into()))
    }

    /// The tree with a single node and one leaf per input.
    pub fn corolla(op: &Op) -> TermTree {
        TermTree::Node(
            Arc::new(op.clone()),
            op.ins.iter().map(|&c| TermTree::Leaf(c)).collect(),
        )
    }

    pub fn out(&self) -> Colour {
        match self {
            TermTree::Leaf(c) => *c,
            TermTree::Node(op, _) => op.out,
        }
    }

    /// Leaf colours, left to right.
    pub fn leaves(&self) -> Vec<Colour> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Colour>) {
        match self {
            TermTree::Leaf(c) => out.push(*c),
            TermTree::Node(_, ch) => ch.iter().for_each(|t| t.collect_leaves(out)),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TermTree::Leaf(_) => 1,
            TermTree::Node(_, ch) => ch.iter().map(TermTree::leaf_count).sum(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            TermTree::Leaf(_) => 0,
            TermTree::Node(_, ch) => 1 + ch.iter().map(TermTree::node_count).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TermTree::Leaf(_) => 0,
            TermTree::Node(_, ch) => 1 + ch.iter().map(TermTree::depth).max().unwrap_or(0),
        }
    }

    /// Substitute `args[k]` for the `k`-th leaf.
    pub fn graft(&self, args: &[TermTree]) -> Result<TermTree> {
        if args.len() != self.leaf_count() {
            return Err(Error::Compose(format!(
                "grafting {} trees onto {} leaves",
                args.len(),
                self.leaf_count()
            )));
        }
        let mut it = args.iter();
        self.graft_from(&mut it)
    }

    fn graft_from<'a>(&self, it: &mut impl Iterator<Item = &'a TermTree>) -> Result<TermTree> {
        match self {
            TermTree::Leaf(c) => {
                let t = it.next().expect("argument count checked");
                if t.out() != *c {
                    return Err(Error::ColourMismatch(format!(
                        "grafting a tree of colour {} onto a leaf of colour {c}",
                        t.out()
                    )));
                }
                Ok(t.clone())
            }
            TermTree::Node(op, ch) => {
                let ch = ch
                    .iter()
                    .map(|t| t.graft_from(it))
                    .collect::<Result<Vec<_>>>()?;
                Ok(TermTree::Node(op.clone(), ch.into()))
            }
        }
    }

    /// Relabel every node.
    pub fn map_nodes(&self, f: &dyn Fn(&Op) -> Result<Op>) -> Result<TermTree> {
        match self {
            TermTree::Leaf(c) => Ok(TermTree::Leaf(*c)),
            TermTree::Node(op, ch) => {
                let ch = ch
                    .iter()
                    .map(|t| t.map_nodes(f))
                    .collect::<Result<Vec<_>>>()?;
                TermTree::node(&f(op)?, ch)
            }
        }
    }

    /// The tree as an operation from its leaf word to its root colour.
    pub fn to_op(&self) -> Op {
        Op {
            label: Label::Tree(Arc::new(self.clone())),
            out: self.out(),
            ins: self.leaves(),
        }
    }

    pub fn from_op(op: &Op) -> Result<&TermTree> {
        op.as_tree()
            .ok_or_else(|| Error::Input(format!("{op:?} is not a term tree")))
    }

    /// Substitute node labels that are themselves trees: the multiplication
    /// of the free-multicategory monad.
    pub fn flatten(&self) -> Result<TermTree> {
        match self {
            TermTree::Leaf(c) => Ok(TermTree::Leaf(*c)),
            TermTree::Node(op, ch) => {
                let inner = TermTree::from_op(op)?;
                let ch = ch
                    .iter()
                    .map(TermTree::flatten)
                    .collect::<Result<Vec<_>>>()?;
                inner.graft(&ch)
            }
        }
    }

    /// Evaluate with `interp` at the nodes and `args` at the leaves.
    pub fn eval<V: Clone>(&self, interp: &dyn Fn(&Op, &[V]) -> Result<V>, args: &[V]) -> Result<V> {
        if args.len() != self.leaf_count() {
            return Err(Error::Input(format!(
                "{} arguments for {} leaves",
                args.len(),
                self.leaf_count()
            )));
        }
        let mut it = args.iter();
        self.eval_from(interp, &mut it)
    }

    fn eval_from<'a, V: Clone + 'a>(
        &self,
        interp: &dyn Fn(&Op, &[V]) -> Result<V>,
        it: &mut impl Iterator<Item = &'a V>,
    ) -> Result<V> {
        match self {
            TermTree::Leaf(_) => Ok(it.next().expect("argument count checked").clone()),
            TermTree::Node(op, ch) => {
                let ys = ch
                    .iter()
                    .map(|t| t.eval_from(interp, it))
                    .collect::<Result<Vec<_>>>()?;
                interp(op, &ys)
            }
        }
    }

    pub(crate) fn write_name(&self, s: &mut String, colours: Option<&Colours>) {
        match self {
            TermTree::Leaf(c) => {
                s.push('@');
                if let Some(cs) = colours.filter(|cs| cs.len() > 1) {
                    s.push_str(cs.name(*c));
                }
            }
            TermTree::Node(op, ch) => {
                op.write_name(s, colours);
                if !ch.is_empty() {
                    s.push('(');
                    for (i, t) in ch.iter().enumerate() {
                        if i > 0 {
                            s.push(',');
                        }
                        t.write_name(s, colours);
                    }
                    s.push(')');
                }
            }
        }
    }

    pub fn name(&self, colours: &Colours) -> String {
        let mut s = String::new();
        self.write_name(&mut s, Some(colours));
        s
    }
}

/// Budgets for enumerating trees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeBounds {
    pub max_leaves: usize,
    pub max_depth: usize,
    pub max_nodes: usize,
}

impl TreeBounds {
    pub fn new(max_leaves: usize, max_depth: usize) -> Self {
        TreeBounds {
            max_leaves,
            max_depth,
            max_nodes: usize::MAX,
        }
    }

    pub fn with_nodes(self, max_nodes: usize) -> Self {
        TreeBounds { max_nodes, ..self }
    }

    pub fn admits(&self, t: &TermTree) -> bool {
        t.leaf_count() <= self.max_leaves
            && t.depth() <= self.max_depth
            && t.node_count() <= self.max_nodes
    }
}

impl Default for TreeBounds {
    fn default() -> Self {
        TreeBounds::new(3, 3)
    }
}

type TreeMemo = HashMap<(Colour, usize, usize, usize), Arc<Vec<(TermTree, usize, usize)>>>;

/// Every tree over `a` within the bounds, each node costing `weight(op)`
/// against the node budget. Deterministic order: by root colour, leaf
/// first, then by operation order and children lexicographically.
pub fn enumerate_trees_weighted(
    a: &Signature,
    bounds: TreeBounds,
    weight: &dyn Fn(&Op) -> usize,
) -> Vec<TermTree> {
    let by_out = a.by_output();
    let mut memo = TreeMemo::new();
    let mut out = Vec::new();
    for c in a.colours().all() {
        let found = trees_of(
            &by_out,
            weight,
            &mut memo,
            c,
            bounds.max_depth,
            bounds.max_nodes,
            bounds.max_leaves,
        );
        out.extend(found.iter().map(|(t, _, _)| t.clone()));
    }
    out
}

pub fn enumerate_trees(a: &Signature, bounds: TreeBounds) -> Vec<TermTree> {
    enumerate_trees_weighted(a, bounds, &|_| 1)
}

fn trees_of(
    by_out: &[Vec<&Op>],
    weight: &dyn Fn(&Op) -> usize,
    memo: &mut TreeMemo,
    c: Colour,
    depth: usize,
    nodes: usize,
    leaves: usize,
) -> Arc<Vec<(TermTree, usize, usize)>> {
    let key = (c, depth, nodes, leaves);
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let mut out = Vec::new();
    if leaves >= 1 {
        out.push((TermTree::Leaf(c), 0, 1));
    }
    if depth > 0 {
        for op in &by_out[c] {
            let w = weight(op);
            if w > nodes {
                continue;
            }
            let mut partial: Vec<(Vec<TermTree>, usize, usize)> = vec![(Vec::new(), w, 0)];
            for &ci in &op.ins {
                let mut next = Vec::new();
                for (ch, n, l) in &partial {
                    let subs = trees_of(by_out, weight, memo, ci, depth - 1, nodes - n, leaves - l);
                    for (t, tn, tl) in subs.iter() {
                        let mut ch2 = ch.clone();
                        ch2.push(t.clone());
                        next.push((ch2, n + tn, l + tl));
                    }
                }
                partial = next;
            }
            for (ch, n, l) in partial {
                out.push((TermTree::Node(Arc::new((*op).clone()), ch.into()), n, l));
            }
        }
    }
    let out = Arc::new(out);
    memo.insert(key, out.clone());
    out
}

/// Bounded argument lists for a word of colours: one operation per slot,
/// total arity at most `budget`.
fn arguments(by_out: &[Vec<&Op>], word: &[Colour], budget: usize) -> Vec<Vec<Op>> {
    let mut partial: Vec<(Vec<Op>, usize)> = vec![(Vec::new(), 0)];
    for &c in word {
        let mut next = Vec::new();
        for (args, used) in &partial {
            for b in &by_out[c] {
                if used + b.arity() <= budget {
                    let mut a2 = args.clone();
                    a2.push((*b).clone());
                    next.push((a2, used + b.arity()));
                }
            }
        }
        partial = next;
    }
    partial.into_iter().map(|(a, _)| a).collect()
}

/// A multicategory: a signature with a composition `γ: M ⊗ M -> M` and an
/// identity per colour. Within bounds `γ` may be partial: composites whose
/// result is not an operation of `M` are absent, and the laws are checked on
/// every instance whose composites are all present.
#[derive(Clone)]
pub struct Multicategory {
    name: String,
    ops: Signature,
    max_arity: usize,
    index: HashMap<Op, usize>,
    compose: HashMap<Op, usize>,
    entries: Vec<(Op, usize)>,
    identities: Vec<usize>,
}

impl fmt::Debug for Multicategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} ops, {} composites)",
            self.name,
            self.ops.len(),
            self.entries.len()
        )
    }
}

impl Multicategory {
    /// Tabulate `γ` on every element of `M ⊗ M` of arity at most
    /// `max_arity`. `gamma` returns `None` where the composite lies outside
    /// the bounds.
    pub fn from_fn(
        name: &str,
        ops: Signature,
        max_arity: usize,
        identities: Vec<Op>,
        gamma: impl Fn(&Op, &[Op]) -> Option<Op> + Sync,
    ) -> Result<Self> {
        let index: HashMap<Op, usize> = ops
            .ops()
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), i))
            .collect();
        if identities.len() != ops.colours().len() {
            return Err(Error::Input("one identity per colour is required".into()));
        }
        let mut ids = Vec::new();
        for (c, e) in identities.iter().enumerate() {
            if e.out != c || e.ins != [c] {
                return Err(Error::ColourMismatch(format!(
                    "identity {e:?} is not unary at colour {c}"
                )));
            }
            ids.push(
                *index
                    .get(e)
                    .ok_or_else(|| Error::Input(format!("identity {e:?} is not an operation")))?,
            );
        }
        let domain = tensor_bounded(&ops, &ops, Some(max_arity))?;
        let results = exec::map(Strategy::Parallel, domain.ops(), |z| {
            let (a, bs) = z.expect_pair().expect("tensor elements are pairs");
            gamma(a, bs)
        });
        let mut compose = HashMap::new();
        let mut entries = Vec::new();
        for (z, r) in domain.ops().iter().zip(results) {
            let Some(r) = r else { continue };
            let Some(&i) = index.get(&r) else { continue };
            if r.out != z.out || r.ins != z.ins {
                return Err(Error::ColourMismatch(format!(
                    "composite {z:?} typed as {r:?}"
                )));
            }
            compose.insert(z.clone(), i);
            entries.push((z.clone(), i));
        }
        Ok(Multicategory {
            name: name.into(),
            ops,
            max_arity,
            index,
            compose,
            entries,
            identities: ids,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ops(&self) -> &Signature {
        &self.ops
    }

    pub fn colours(&self) -> &Colours {
        self.ops.colours()
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn contains(&self, op: &Op) -> bool {
        self.index.contains_key(op)
    }

    pub fn identity(&self, c: Colour) -> &Op {
        &self.ops.ops()[self.identities[c]]
    }

    /// `γ(a; bs)` if present.
    pub fn compose(&self, a: &Op, bs: &[Op]) -> Option<&Op> {
        let z = Op::pair(a, bs.to_vec()).ok()?;
        self.compose.get(&z).map(|&i| &self.ops.ops()[i])
    }

    /// Every present composite `((a; bs), γ(a; bs))`.
    pub fn entries(&self) -> impl Iterator<Item = (&Op, &Op)> + '_ {
        self.entries.iter().map(|(z, i)| (z, &self.ops.ops()[*i]))
    }

    /// A copy with one composite replaced, bypassing the laws.
    pub fn with_entry(&self, a: &Op, bs: &[Op], result: &Op) -> Result<Self> {
        let z = Op::pair(a, bs.to_vec())?;
        let &i = self
            .index
            .get(result)
            .ok_or_else(|| Error::Input(format!("{result:?} is not an operation")))?;
        let mut out = self.clone();
        if out.compose.insert(z.clone(), i).is_none() {
            return Err(Error::Input(format!("{z:?} has no composite to replace")));
        }
        for e in &mut out.entries {
            if e.0 == z {
                e.1 = i;
            }
        }
        out.name = format!("{} (modified)", self.name);
        Ok(out)
    }

    pub fn show(&self, op: &Op) -> String {
        op.name(self.colours())
    }

    fn violation(
        &self,
        diagram: &str,
        element: String,
        lhs: Option<&Op>,
        rhs: Option<&Op>,
    ) -> Violation {
        let show = |o: Option<&Op>| o.map_or_else(|| "undefined".to_string(), |o| self.show(o));
        Violation {
            diagram: diagram.into(),
            instance: self.name.clone(),
            element,
            lhs: show(lhs),
            rhs: show(rhs),
        }
    }
}

/// Check the unit and associativity laws of a multicategory.
pub fn validate_multicategory(m: &Multicategory) -> Result<(), Violation> {
    for a in m.ops.ops() {
        let left = m.compose(m.identity(a.out), std::slice::from_ref(a));
        if left != Some(a) {
            return Err(m.violation("left unit law", m.show(a), left, Some(a)));
        }
        let ids: Vec<Op> = a.ins.iter().map(|&c| m.identity(c).clone()).collect();
        let right = m.compose(a, &ids);
        if right != Some(a) {
            return Err(m.violation("right unit law", m.show(a), right, Some(a)));
        }
    }
    let by_out = m.ops.by_output();
    let found = exec::find_map_first(Strategy::Parallel, &m.entries, |(z, ab)| {
        let (a, bs) = z.expect_pair().expect("entries are pairs");
        let ab = &m.ops.ops()[*ab];
        for cs in arguments(&by_out, &ab.ins, m.max_arity) {
            let Some(lhs) = m.compose(ab, &cs) else {
                continue;
            };
            let mut rest = cs.as_slice();
            let mut bcs = Vec::with_capacity(bs.len());
            let mut complete = true;
            for b in bs {
                let (now, later) = rest.split_at(b.arity());
                rest = later;
                match m.compose(b, now) {
                    Some(bc) => bcs.push(bc.clone()),
                    None => {
                        complete = false;
                        break;
                    }
                }
            }
            if !complete {
                continue;
            }
            let rhs = m.compose(a, &bcs);
            if rhs != Some(lhs) {
                let elem = format!(
                    "{}; {}",
                    m.show(z),
                    cs.iter().map(|c| m.show(c)).collect::<Vec<_>>().join(",")
                );
                return Some(m.violation("multicategory associativity", elem, Some(lhs), rhs));
            }
        }
        None
    });
    found.map_or(Ok(()), Err)
}

/// Whether `f` (given on operations) is a map of multicategories, on every
/// present composite of `m`.
pub fn is_multicategory_map(
    m: &Multicategory,
    n: &Multicategory,
    f: &dyn Fn(&Op) -> Option<Op>,
) -> bool {
    let ok_ids = m
        .colours()
        .all()
        .all(|c| f(m.identity(c)).as_ref() == Some(n.identity(c)));
    ok_ids
        && m.entries().all(|(z, r)| {
            let (a, bs) = z.expect_pair().expect("pairs");
            let fbs: Option<Vec<Op>> = bs.iter().map(f).collect();
            match (f(a), fbs, f(r)) {
                (Some(fa), Some(fbs), Some(fr)) => n.compose(&fa, &fbs).is_none_or(|x| *x == fr),
                _ => false,
            }
        })
}

/// The one-colour multicategory with a single operation `t<n>` per arity
/// `n <= max_arity`.
pub fn terminal_multicategory(max_arity: usize) -> Multicategory {
    let ops: Vec<Op> = (0..=max_arity)
        .map(|n| Op::atom(&format!("t{n}"), 0, vec![0; n]))
        .collect();
    let sig = Signature::new(Colours::single(), ops.clone()).expect("distinct names");
    Multicategory::from_fn("terminal", sig, max_arity, vec![ops[1].clone()], |_, bs| {
        let n: usize = bs.iter().map(Op::arity).sum();
        ops.get(n).cloned()
    })
    .expect("terminal composition is typed")
}

/// Name of the function `2^n -> 2` with the given truth table (inputs in
/// lexicographic order, first argument most significant).
fn truth_table_name(n: usize, table: &[bool]) -> String {
    let bits: String = table.iter().map(|&b| if b { '1' } else { '0' }).collect();
    format!("f{n}:{bits}")
}

/// Evaluate a truth-table operation named by [`truth_table_name`].
pub fn eval_boolean(op: &Op, xs: &[bool]) -> Result<bool> {
    let name = match &op.label {
        Label::Atom(n) => n.clone(),
        _ => return Err(Error::Input(format!("{op:?} is not a truth table"))),
    };
    let bits = name
        .split(':')
        .nth(1)
        .ok_or_else(|| Error::Input(format!("{name} is not a truth table")))?;
    let idx = xs.iter().fold(0usize, |acc, &x| acc * 2 + usize::from(x));
    bits.as_bytes()
        .get(idx)
        .map(|&b| b == b'1')
        .ok_or_else(|| Error::Input(format!("{name} has no entry {idx}")))
}

/// The endomorphism multicategory of `{0, 1}`: every function `2^n -> 2`
/// for `n <= max_arity`, composed by substitution.
pub fn endomorphism_multicategory(max_arity: usize) -> Multicategory {
    let mut ops = Vec::new();
    for n in 0..=max_arity {
        let rows = 1usize << n;
        for code in 0..(1usize << rows) {
            let table: Vec<bool> = (0..rows).map(|r| code >> (rows - 1 - r) & 1 == 1).collect();
            ops.push(Op::atom(&truth_table_name(n, &table), 0, vec![0; n]));
        }
    }
    let sig = Signature::new(Colours::single(), ops).expect("distinct tables");
    let id = Op::atom(&truth_table_name(1, &[false, true]), 0, vec![0]);
    Multicategory::from_fn(
        "endomorphisms of {0,1}",
        sig,
        max_arity,
        vec![id],
        |a, bs| {
            let n: usize = bs.iter().map(Op::arity).sum();
            let table = (0..1usize << n)
                .map(|code| {
                    let xs: Vec<bool> = (0..n).map(|k| code >> (n - 1 - k) & 1 == 1).collect();
                    let mut rest = xs.as_slice();
                    let ys = bs
                        .iter()
                        .map(|b| {
                            let (now, later) = rest.split_at(b.arity());
                            rest = later;
                            eval_boolean(b, now)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    eval_boolean(a, &ys)
                })
                .collect::<Result<Vec<_>>>()
                .ok()?;
            Some(Op::atom(&truth_table_name(n, &table), 0, vec![0; n]))
        },
    )
    .expect("substitution is typed")
}

/// The free multicategory on `a`: term trees within the bounds, composed by
/// grafting, with single-leaf trees as identities.
pub fn free_multicategory(a: &Signature, bounds: TreeBounds) -> Result<Multicategory> {
    let trees = enumerate_trees(a, bounds);
    let ops = Signature::new(
        a.colours().clone(),
        trees.iter().map(TermTree::to_op).collect(),
    )?;
    let ids = a
        .colours()
        .all()
        .map(|c| TermTree::Leaf(c).to_op())
        .collect();
    Multicategory::from_fn(
        "free multicategory",
        ops,
        bounds.max_leaves,
        ids,
        |t, ss| {
            let t = TermTree::from_op(t).ok()?;
            let ss = ss
                .iter()
                .map(|s| TermTree::from_op(s).cloned())
                .collect::<Result<Vec<_>>>()
                .ok()?;
            let g = t.graft(&ss).ok()?;
            bounds.admits(&g).then(|| g.to_op())
        },
    )
}

/// The extension of `h: A -> ops(M)` along corollas to a map out of the free
/// multicategory: leaves go to identities, nodes to composites.
pub fn extend_to_free(
    m: &Multicategory,
    h: &dyn Fn(&Op) -> Option<Op>,
    t: &TermTree,
) -> Option<Op> {
    match t {
        TermTree::Leaf(c) => Some(m.identity(*c).clone()),
        TermTree::Node(a, ch) => {
            let top = h(a)?;
            let args = ch
                .iter()
                .map(|s| extend_to_free(m, h, s))
                .collect::<Option<Vec<_>>>()?;
            m.compose(&top, &args).cloned()
        }
    }
}

/// The universal property of the free multicategory against `m`: every
/// colour-preserving map `A -> ops(M)` extends to a multicategory map, and
/// it is the only map agreeing with it on corollas. Returns the number of
/// signature maps checked.
pub fn check_free_universal_property(
    a: &Signature,
    bounds: TreeBounds,
    m: &Multicategory,
) -> Result<usize> {
    let free = free_multicategory(a, bounds)?;
    let choices: Vec<Vec<Op>> = a
        .ops()
        .iter()
        .map(|x| {
            m.ops()
                .ops()
                .iter()
                .filter(|y| y.out == x.out && y.ins == x.ins)
                .cloned()
                .collect()
        })
        .collect();
    let refs: Vec<&Vec<Op>> = choices.iter().collect();
    let maps = product(&refs);
    for values in &maps {
        let table: HashMap<&Op, &Op> = a.ops().iter().zip(values).collect();
        let h = |x: &Op| table.get(x).map(|y| (*y).clone());
        let ext: HashMap<Op, Option<Op>> = free
            .ops()
            .ops()
            .iter()
            .map(|t| {
                (
                    t.clone(),
                    extend_to_free(m, &h, TermTree::from_op(t).expect("tree")),
                )
            })
            .collect();
        let f = |t: &Op| ext.get(t).cloned().flatten();
        if !is_multicategory_map(&free, m, &f) {
            return Err(Error::Validation(
                "the extension is not a multicategory map".into(),
            ));
        }
        for x in a.ops() {
            if TermTree::corolla(x).leaf_count() <= bounds.max_leaves
                && f(&TermTree::corolla(x).to_op()) != h(x)
            {
                return Err(Error::Validation(format!(
                    "the extension does not restrict to h at {x:?}"
                )));
            }
        }
        // uniqueness: a map agreeing on corollas is determined on every tree
        // by decomposing it as a corolla grafted with its subtrees
        for t in free.ops().ops() {
            if let TermTree::Node(x, ch) = TermTree::from_op(t).expect("tree") {
                let subs: Vec<Op> = ch.iter().map(TermTree::to_op).collect();
                let top = TermTree::corolla(x).to_op();
                if free.compose(&top, &subs) != Some(t) {
                    return Err(Error::Validation(format!("{t:?} is not a grafted corolla")));
                }
            }
        }
    }
    Ok(maps.len())
}

/// A rigid operad: a monoid in the Kleisli category of S, with composites
/// given as decorated operations.
#[derive(Clone, Debug)]
pub struct RigidOperad {
    ops: Signature,
    max_arity: usize,
    compose: HashMap<Op, Op>,
    identities: Vec<Op>,
}

impl RigidOperad {
    pub fn from_fn(
        ops: Signature,
        max_arity: usize,
        identities: Vec<Op>,
        gamma: impl Fn(&Op, &[Op]) -> Option<Op> + Sync,
    ) -> Result<Self> {
        let domain = tensor_bounded(&ops, &ops, Some(max_arity))?;
        let index = ops.index();
        let mut compose = HashMap::new();
        for z in domain.ops() {
            let (a, bs) = z.expect_pair()?;
            let Some(d) = gamma(a, bs) else { continue };
            let (base, xi) = d.expect_dec()?;
            if !index.contains_key(base) {
                continue;
            }
            if !xi.is_bijection() || d.out != z.out || d.ins != z.ins {
                return Err(Error::ColourMismatch(format!("composite {z:?} is {d:?}")));
            }
            compose.insert(z.clone(), d);
        }
        Ok(RigidOperad {
            ops,
            max_arity,
            compose,
            identities,
        })
    }

    pub fn ops(&self) -> &Signature {
        &self.ops
    }

    /// The Kleisli composite `m(a; bs)` in `S(A)`.
    pub fn compose(&self, a: &Op, bs: &[Op]) -> Option<&Op> {
        self.compose.get(&Op::pair(a, bs.to_vec()).ok()?)
    }

    fn extend(&self, d: &Op) -> Option<Op> {
        let lifted = tmap(
            d,
            &|z| {
                self.compose
                    .get(z)
                    .cloned()
                    .ok_or_else(|| Error::Truncation("composite outside the bounds".into()))
            },
            None,
        )
        .ok()?;
        mu(&lifted).ok()
    }
}

/// Unit and associativity of a rigid operad, comparing decorated results.
pub fn validate_rigid_operad(r: &RigidOperad) -> Result<(), Violation> {
    let cs = r.ops.colours();
    let v = |diagram: &str, elem: String, l: Option<Op>, rr: Option<Op>| Violation {
        diagram: diagram.into(),
        instance: "rigid operad".into(),
        element: elem,
        lhs: l.map_or("undefined".into(), |o| o.name(cs)),
        rhs: rr.map_or("undefined".into(), |o| o.name(cs)),
    };
    for a in r.ops.ops() {
        let left = phi(&Op::pair(&eta(&r.identities[a.out]), vec![eta(a)]).expect("typed"))
            .ok()
            .and_then(|z| r.extend(&z));
        if left.as_ref() != Some(&eta(a)) {
            return Err(v("left unit law", a.name(cs), left, Some(eta(a))));
        }
        let ids = a.ins.iter().map(|&c| eta(&r.identities[c])).collect();
        let right = phi(&Op::pair(&eta(a), ids).expect("typed"))
            .ok()
            .and_then(|z| r.extend(&z));
        if right.as_ref() != Some(&eta(a)) {
            return Err(v("right unit law", a.name(cs), right, Some(eta(a))));
        }
    }
    let by_out = r.ops.by_output();
    for a in r.ops.ops() {
        for bs in arguments(&by_out, &a.ins, r.max_arity) {
            let ab_ins: Vec<Colour> = bs.iter().flat_map(|b| b.ins.clone()).collect();
            for cs_all in arguments(&by_out, &ab_ins, r.max_arity) {
                let Some(ab) = r.compose(a, &bs) else {
                    continue;
                };
                let lhs = phi(&Op::pair(ab, cs_all.iter().map(eta).collect()).expect("typed"))
                    .ok()
                    .and_then(|z| r.extend(&z));
                let mut rest = cs_all.as_slice();
                let mut bcs = Vec::new();
                for b in &bs {
                    let (now, later) = rest.split_at(b.arity());
                    rest = later;
                    bcs.push(r.compose(b, now).cloned());
                }
                let Some(bcs) = bcs.into_iter().collect::<Option<Vec<_>>>() else {
                    continue;
                };
                let rhs = phi(&Op::pair(&eta(a), bcs).expect("typed"))
                    .ok()
                    .and_then(|z| r.extend(&z));
                if lhs.is_some() && rhs.is_some() && lhs != rhs {
                    let elem = format!(
                        "{}; {}; {}",
                        a.name(cs),
                        bs.iter().map(|b| b.name(cs)).collect::<Vec<_>>().join(","),
                        cs_all
                            .iter()
                            .map(|c| c.name(cs))
                            .collect::<Vec<_>>()
                            .join(",")
                    );
                    return Err(v("rigid operad associativity", elem, lhs, rhs));
                }
            }
        }
    }
    Ok(())
}

/// The free rigid operad on `a`: plain trees, composed by grafting followed
/// by the identity decoration.
pub fn free_rigid_operad(a: &Signature, bounds: TreeBounds) -> Result<RigidOperad> {
    let trees = enumerate_trees(a, bounds);
    let ops = Signature::new(
        a.colours().clone(),
        trees.iter().map(TermTree::to_op).collect(),
    )?;
    let ids = a
        .colours()
        .all()
        .map(|c| TermTree::Leaf(c).to_op())
        .collect();
    RigidOperad::from_fn(ops, bounds.max_leaves, ids, |t, ss| {
        let t = TermTree::from_op(t).ok()?;
        let ss = ss
            .iter()
            .map(|s| TermTree::from_op(s).cloned())
            .collect::<Result<Vec<_>>>()
            .ok()?;
        let g = t.graft(&ss).ok()?;
        bounds.admits(&g).then(|| eta(&g.to_op()))
    })
}

/// A symmetric operad: a species with a multicategory structure on its
/// carrier whose composition is compatible with the action.
#[derive(Clone, Debug)]
pub struct SymmetricOperad {
    pub algebra: Algebra,
    pub multicategory: Multicategory,
}

impl SymmetricOperad {
    pub fn new(algebra: Algebra, multicategory: Multicategory) -> Result<Self> {
        if algebra.tag() != MonadTag::S {
            return Err(Error::Input("a symmetric operad needs an S-algebra".into()));
        }
        if algebra.carrier() != multicategory.ops() {
            return Err(Error::Input(
                "species and multicategory have different carriers".into(),
            ));
        }
        Ok(SymmetricOperad {
            algebra,
            multicategory,
        })
    }

    /// `γ̂(Dec(z, ξ)) = a(Dec(γ(z), ξ))` on `T(X ⊗ X)`.
    fn compose_decorated(&self, d: &Op) -> Option<Op> {
        let (z, xi) = d.expect_dec().ok()?;
        let (a, bs) = z.expect_pair().ok()?;
        let c = self.multicategory.compose(a, bs)?;
        self.algebra
            .act(&decorate(c, xi.clone(), d.ins.clone()).ok()?)
            .ok()
            .cloned()
    }
}

/// Check a symmetric operad: the species is an algebra, the composition is
/// a multicategory, and the composition descends to the Linton tensor. The
/// last condition is checked on `eta`-images of `T(X) ⊗ T(X)`; outer
/// decorations follow from the algebra laws.
pub fn validate_symmetric_operad(s: &SymmetricOperad) -> Result<(), Violation> {
    s.algebra.validate()?;
    validate_multicategory(&s.multicategory)?;
    let x = &s.algebra;
    let bounds = x.bounds();
    let tx = apply_monad(MonadTag::S, x.carrier(), bounds);
    let pairs = match tensor_bounded(&tx, &tx, Some(s.multicategory.max_arity())) {
        Ok(p) => p,
        Err(e) => {
            return Err(Violation {
                diagram: "equivariance".into(),
                instance: s.multicategory.name().into(),
                element: String::new(),
                lhs: e.to_string(),
                rhs: String::new(),
            })
        }
    };
    let found = exec::find_map_first(Strategy::Parallel, pairs.ops(), |w| {
        let lhs = phi(w).ok().and_then(|d| s.compose_decorated(&d));
        let acted =
            crate::signatures::tensor_map(w, &|d| x.act(d).cloned(), &|d| x.act(d).cloned())
                .ok()?;
        let (a, bs) = acted.expect_pair().ok()?;
        let rhs = s.multicategory.compose(a, bs).cloned();
        match (&lhs, &rhs) {
            (Some(l), Some(r)) if l != r => Some(Violation {
                diagram: "equivariance of composition".into(),
                instance: s.multicategory.name().into(),
                element: x.show(w),
                lhs: x.show(l),
                rhs: x.show(r),
            }),
            _ => None,
        }
    });
    found.map_or(Ok(()), Err)
}

/// The commutative operad: one operation `c<n>` per arity `1 <= n <= max_arity`
/// with trivial action.
pub fn comm_operad(max_arity: usize) -> Result<SymmetricOperad> {
    let ops: Vec<Op> = (1..=max_arity)
        .map(|n| Op::atom(&format!("c{n}"), 0, vec![0; n]))
        .collect();
    let sig = Signature::new(Colours::single(), ops.clone())?;
    let algebra = Algebra::from_fn(MonadTag::S, sig.clone(), Bounds::new(max_arity), |d| {
        Ok(d.expect_dec()?.0.clone())
    })?;
    let m = Multicategory::from_fn("Comm", sig, max_arity, vec![ops[0].clone()], |_, bs| {
        let n: usize = bs.iter().map(Op::arity).sum();
        n.checked_sub(1).and_then(|k| ops.get(k).cloned())
    })?;
    SymmetricOperad::new(algebra, m)
}

/// `T̃(M)`: the monad applied to a multicategory, with composition
/// `T(γ) ∘ phi` and identities `eta(e)`.
pub fn lift_monad_to_monoids(
    tag: MonadTag,
    m: &Multicategory,
    bounds: Bounds,
) -> Result<Multicategory> {
    let ops = apply_monad(tag, m.ops(), bounds);
    let ids = m.colours().all().map(|c| eta(m.identity(c))).collect();
    Multicategory::from_fn(
        &format!("{tag}({})", m.name()),
        ops,
        bounds.max_arity.min(m.max_arity()),
        ids,
        |d, ds| {
            let z = phi(&Op::pair(d, ds.to_vec()).ok()?).ok()?;
            tmap(
                &z,
                &|p| {
                    let (a, bs) = p.expect_pair()?;
                    m.compose(a, bs)
                        .cloned()
                        .ok_or_else(|| Error::Truncation("composite outside the bounds".into()))
                },
                None,
            )
            .ok()
        },
    )
}

/// Combing: push every node decoration of a tree over `S(A)` to the leaves.
/// Returns the plain tree and the decoration `λ` sending each leaf position
/// of the plain tree to the argument index of the original tree.
pub fn comb(t: &TermTree) -> Result<(TermTree, FinMap)> {
    match t {
        TermTree::Leaf(c) => Ok((TermTree::Leaf(*c), FinMap::identity(1))),
        TermTree::Node(d, ch) => {
            let (a, xi) = d.expect_dec()?;
            if !xi.is_bijection() {
                return Err(Error::Input(format!(
                    "node {d:?} is not decorated by a bijection"
                )));
            }
            let combed = ch.iter().map(comb).collect::<Result<Vec<_>>>()?;
            let children = xi.values().iter().map(|&j| combed[j].0.clone()).collect();
            let blocks: Vec<FinMap> = combed.into_iter().map(|(_, l)| l).collect();
            Ok((TermTree::node(a, children)?, xi.block_map(&blocks)?))
        }
    }
}

/// `comb` as an element of `S(T(A))`.
pub fn comb_op(t: &TermTree) -> Result<Op> {
    let (plain, lambda) = comb(t)?;
    decorate(&plain.to_op(), lambda, t.leaves())
}

/// Interpret a decorated node: `(a, ξ)(ys) = a(ys ∘ ξ)`.
pub fn decorated_interp<'a, V: Clone>(
    interp: &'a dyn Fn(&Op, &[V]) -> Result<V>,
) -> impl Fn(&Op, &[V]) -> Result<V> + 'a {
    move |d, ys| match d.as_dec() {
        Some((a, xi)) => interp(a, &xi.pull(ys)),
        None => interp(d, ys),
    }
}

/// The outcome of the distributive-law suite: counts of instances checked
/// per axiom.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CombReport {
    pub unit_plain: usize,
    pub unit_corolla: usize,
    pub mult_symmetric: usize,
    pub mult_tree: usize,
    pub evaluations: usize,
}

fn comb_violation(diagram: &str, cs: &Colours, t: &TermTree, l: String, r: String) -> Violation {
    Violation {
        diagram: diagram.into(),
        instance: "comb".into(),
        element: t.name(cs),
        lhs: l,
        rhs: r,
    }
}

fn show_result(r: &Result<Op>, cs: &Colours) -> String {
    match r {
        Ok(o) => o.name(cs),
        Err(e) => e.to_string(),
    }
}

/// The two unit and two multiplication axioms of combing as a distributive
/// law, and evaluation coherence, on every tree over `a` within `bounds`.
pub fn check_distributive_law(a: &Signature, bounds: TreeBounds) -> Result<CombReport, Violation> {
    let cs = a.colours().clone();
    let sb = Bounds::new(bounds.max_leaves.max(a.max_arity()));
    let sa = apply_monad(MonadTag::S, a, sb);
    let ssa = apply_monad(MonadTag::S, &sa, sb);
    let mut report = CombReport::default();

    // comb ∘ T(eta) = eta
    for t in enumerate_trees(a, bounds) {
        let lifted = t.map_nodes(&|x| Ok(eta(x))).expect("eta is typed");
        let got = comb_op(&lifted);
        let want = eta(&t.to_op());
        if got.as_ref().ok() != Some(&want) {
            return Err(comb_violation(
                "comb unit (symmetrization)",
                &cs,
                &t,
                show_result(&got, &cs),
                want.name(&cs),
            ));
        }
        report.unit_plain += 1;
    }
    // comb ∘ corolla = S(corolla)
    for d in sa.ops() {
        let (x, xi) = d.expect_dec().expect("decorated");
        let t = TermTree::corolla(d);
        let got = comb_op(&t);
        let want =
            decorate(&TermTree::corolla(x).to_op(), xi.clone(), d.ins.clone()).expect("typed");
        if got.as_ref().ok() != Some(&want) {
            return Err(comb_violation(
                "comb unit (trees)",
                &cs,
                &t,
                show_result(&got, &cs),
                want.name(&cs),
            ));
        }
        report.unit_corolla += 1;
    }
    // comb ∘ T(mu) = mu ∘ S(comb) ∘ comb
    for t in enumerate_trees(&ssa, bounds) {
        let lhs = t.map_nodes(&mu).and_then(|u| comb_op(&u));
        let rhs = (|| {
            let (outer, l1) = comb(&t)?;
            let (plain, l2) = comb(&outer)?;
            decorate(&plain.to_op(), l2.then(&l1)?, t.leaves())
        })();
        if lhs.as_ref().ok() != rhs.as_ref().ok() || lhs.is_err() {
            return Err(comb_violation(
                "comb multiplication (symmetrization)",
                &cs,
                &t,
                show_result(&lhs, &cs),
                show_result(&rhs, &cs),
            ));
        }
        report.mult_symmetric += 1;
    }
    // comb ∘ flatten = S(flatten) ∘ comb ∘ T(comb)
    let inner = enumerate_trees(&sa, bounds);
    let labels = Signature::new(cs.clone(), inner.iter().map(TermTree::to_op).collect())
        .expect("distinct trees");
    let weight = |op: &Op| op.as_tree().map_or(1, |t| t.node_count().max(1));
    for t in enumerate_trees_weighted(&labels, bounds, &weight) {
        let Ok(flat) = t.flatten() else { continue };
        if !bounds.admits(&flat) {
            continue;
        }
        let lhs = comb_op(&flat);
        let rhs = (|| {
            let relabelled = t.map_nodes(&|op| comb_op(TermTree::from_op(op)?))?;
            let (outer, l) = comb(&relabelled)?;
            decorate(&outer.flatten()?.to_op(), l, t.leaves())
        })();
        if lhs.as_ref().ok() != rhs.as_ref().ok() || lhs.is_err() {
            return Err(comb_violation(
                "comb multiplication (trees)",
                &cs,
                &t,
                show_result(&lhs, &cs),
                show_result(&rhs, &cs),
            ));
        }
        report.mult_tree += 1;
    }
    report.evaluations = check_evaluation_coherence(a, bounds)?;
    Ok(report)
}

/// Evaluating a decorated tree agrees with evaluating its combed tree at the
/// arguments permuted by `λ`. Checked symbolically (into the free term
/// algebra) and in every interpretation of `a` over `{0, 1}`.
pub fn check_evaluation_coherence(a: &Signature, bounds: TreeBounds) -> Result<usize, Violation> {
    let cs = a.colours().clone();
    let sa = apply_monad(
        MonadTag::S,
        a,
        Bounds::new(bounds.max_leaves.max(a.max_arity())),
    );
    let trees = enumerate_trees(&sa, bounds);
    let symbolic = |op: &Op, ys: &[String]| -> Result<String> {
        Ok(format!("{}({})", op.name(&cs), ys.join(",")))
    };
    let sym_dec = decorated_interp(&symbolic);
    let mut count = 0;
    for t in &trees {
        let (plain, lambda) =
            comb(t).map_err(|e| comb_violation("comb", &cs, t, e.to_string(), String::new()))?;
        let args: Vec<String> = (1..=t.leaf_count()).map(|i| format!("x{i}")).collect();
        let lhs = t.eval(&sym_dec, &args).expect("symbolic evaluation");
        let rhs = plain
            .eval(&symbolic, &lambda.pull(&args))
            .expect("symbolic evaluation");
        if lhs != rhs {
            return Err(comb_violation("evaluation coherence", &cs, t, lhs, rhs));
        }
        count += 1;
    }
    // every interpretation of the operations of `a` as boolean functions
    let tables: Vec<Vec<Vec<bool>>> = a
        .ops()
        .iter()
        .map(|op| {
            let rows = 1usize << op.arity();
            (0..1usize << rows)
                .map(|code| (0..rows).map(|r| code >> r & 1 == 1).collect())
                .collect()
        })
        .collect();
    let refs: Vec<&Vec<Vec<bool>>> = tables.iter().collect();
    let index = a.index();
    for interp_tables in product(&refs) {
        let interp = |op: &Op, ys: &[bool]| -> Result<bool> {
            let i = index[op];
            Ok(interp_tables[i][ys.iter().fold(0, |acc, &y| acc * 2 + usize::from(y))])
        };
        let dec = decorated_interp(&interp);
        for t in &trees {
            let (plain, lambda) = comb(t).expect("checked above");
            let n = t.leaf_count();
            for code in 0..1usize << n {
                let xs: Vec<bool> = (0..n).map(|k| code >> k & 1 == 1).collect();
                let lhs = t.eval(&dec, &xs).expect("total");
                let rhs = plain.eval(&interp, &lambda.pull(&xs)).expect("total");
                if lhs != rhs {
                    return Err(comb_violation(
                        "evaluation coherence",
                        &cs,
                        t,
                        lhs.to_string(),
                        rhs.to_string(),
                    ));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

/// A free symmetric operad with its quotient map from decorated trees.
#[derive(Clone, Debug)]
pub struct FreeSymmetricOperad {
    pub operad: SymmetricOperad,
    quotient: Quotient<Op>,
}

impl FreeSymmetricOperad {
    /// The class of a decorated tree.
    pub fn class_of(&self, d: &Op) -> Option<&Op> {
        self.quotient
            .class_of(d)
            .map(|c| &self.operad.multicategory.ops().ops()[c])
    }

    /// The enumerated decorated trees.
    pub fn ground(&self) -> &[Op] {
        self.quotient.elements()
    }
}

/// The free symmetric operad on a species `x`: decorated trees over the
/// carrier, modulo pushing the action at each node into the decoration.
pub fn free_symmetric_operad(x: &Algebra, bounds: TreeBounds) -> Result<FreeSymmetricOperad> {
    if x.tag() != MonadTag::S {
        return Err(Error::Input(
            "free symmetric operads need an S-algebra".into(),
        ));
    }
    let a = x.carrier();
    let cs = a.colours().clone();
    let sb = Bounds::new(bounds.max_leaves);
    let trees = enumerate_trees(a, bounds);
    let tree_sig = Signature::new(cs.clone(), trees.iter().map(TermTree::to_op).collect())?;
    let ground = apply_monad(MonadTag::S, &tree_sig, sb);
    let mut qb = QuotientBuilder::new(ground.ops().to_vec());
    let sa = apply_monad(MonadTag::S, a, Bounds::new(a.max_arity()));
    for dt in enumerate_trees(&sa, bounds) {
        let acted = dt.map_nodes(&|d| x.act(d).cloned())?.to_op();
        let (plain, lambda) = comb(&dt)?;
        let leaves = dt.leaves();
        let n = leaves.len();
        for sigma in permutations(n) {
            let inv = sigma.inverse()?;
            let ins: Vec<Colour> = (0..n).map(|j| leaves[inv.apply(j)]).collect();
            let left = decorate(&acted, sigma.clone(), ins)?;
            let right = decorate(&plain.to_op(), lambda.then(&sigma)?, left.ins.clone())?;
            qb.identify(&left, &right)?;
        }
    }
    let q = qb.finish();
    let classes: Vec<Op> = (0..q.class_count())
        .map(|c| Op::class(q.representative(c)))
        .collect();
    let members: Vec<Vec<Op>> = q
        .classes()
        .into_iter()
        .map(|c| c.into_iter().cloned().collect())
        .collect();
    let pos: HashMap<&Op, usize> = classes.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let carrier = Signature::new(cs.clone(), classes.clone())?;
    let class_of = |d: &Op| q.class_of(d).map(|c| classes[c].clone());
    let algebra = Algebra::from_fn(MonadTag::S, carrier.clone(), sb, |d| {
        let (c, xi) = d.expect_dec()?;
        let mut out: Option<Op> = None;
        for m in &members[pos[c]] {
            let img = mu(&decorate(m, xi.clone(), d.ins.clone())?)?;
            let cls = class_of(&img)
                .ok_or_else(|| Error::Truncation(format!("{img:?} outside the ground set")))?;
            match &out {
                None => out = Some(cls),
                Some(prev) if *prev != cls => {
                    return Err(Error::IllDefined(format!(
                        "action on the class of {c:?} depends on the representative"
                    )))
                }
                _ => {}
            }
        }
        Ok(out.expect("classes are non-empty"))
    })?;
    let graft_dec = |d: &Op, ds: &[Op]| -> Option<Op> {
        let z = phi(&Op::pair(d, ds.to_vec()).ok()?).ok()?;
        let g = tmap(
            &z,
            &|p| {
                let (t, ss) = p.expect_pair()?;
                let ss = ss
                    .iter()
                    .map(|s| TermTree::from_op(s).cloned())
                    .collect::<Result<Vec<_>>>()?;
                let g = TermTree::from_op(t)?.graft(&ss)?;
                if bounds.admits(&g) {
                    Ok(g.to_op())
                } else {
                    Err(Error::Truncation("graft outside the bounds".into()))
                }
            },
            None,
        )
        .ok()?;
        class_of(&g)
    };
    let ill = std::sync::Mutex::new(None::<String>);
    let ids = cs
        .all()
        .map(|c| class_of(&eta(&TermTree::Leaf(c).to_op())).expect("leaf trees are enumerated"))
        .collect();
    let multicategory = Multicategory::from_fn(
        "free symmetric operad",
        carrier,
        bounds.max_leaves,
        ids,
        |top, args| {
            let reps = |o: &Op| members[pos[o]].clone();
            let base_args: Vec<Op> = args
                .iter()
                .map(|o| o.as_class().expect("class").clone())
                .collect();
            let top_rep = top.as_class().expect("class").clone();
            let result = graft_dec(&top_rep, &base_args);
            for alt in reps(top) {
                if graft_dec(&alt, &base_args) != result {
                    *ill.lock().expect("lock") = Some(format!(
                        "composite at {top:?} depends on the representative"
                    ));
                }
            }
            for (k, o) in args.iter().enumerate() {
                for alt in reps(o) {
                    let mut changed = base_args.clone();
                    changed[k] = alt;
                    if graft_dec(&top_rep, &changed) != result {
                        *ill.lock().expect("lock") = Some(format!(
                            "composite at argument {} of {top:?} depends on the representative",
                            k + 1
                        ));
                    }
                }
            }
            result
        },
    )?;
    if let Some(msg) = ill.into_inner().expect("lock") {
        return Err(Error::IllDefined(msg));
    }
    Ok(FreeSymmetricOperad {
        operad: SymmetricOperad::new(algebra, multicategory)?,
        quotient: q,
    })
}

/// Compare the free symmetric operad on `F(A)` with `S̃` of the free
/// multicategory on `A` via `Dec(t, σ) |-> [Dec(t, σ)]`. Returns the number of
/// operations matched.
pub fn check_symmetrization_comparison(a: &Signature, bounds: TreeBounds) -> Result<usize> {
    let sb = Bounds::new(bounds.max_leaves);
    let fa = crate::em::free_algebra(MonadTag::S, a, Bounds::new(a.max_arity()));
    let sym = free_symmetric_operad(&fa, bounds)?;
    let lifted = lift_monad_to_monoids(MonadTag::S, &free_multicategory(a, bounds)?, sb)?;
    let to_sym = |d: &Op| -> Option<Op> {
        let (t, sigma) = d.expect_dec().ok()?;
        let t = TermTree::from_op(t).ok()?.map_nodes(&|x| Ok(eta(x))).ok()?;
        sym.class_of(&decorate(&t.to_op(), sigma.clone(), d.ins.clone()).ok()?)
            .cloned()
    };
    let mut seen = std::collections::HashSet::new();
    for d in lifted.ops().ops() {
        let c = to_sym(d).ok_or_else(|| Error::Validation(format!("{d:?} has no class")))?;
        if !seen.insert(c) {
            return Err(Error::Validation(format!(
                "comparison is not injective at {d:?}"
            )));
        }
    }
    if seen.len() != sym.operad.multicategory.ops().len() {
        return Err(Error::Validation(format!(
            "comparison hits {} of {} classes",
            seen.len(),
            sym.operad.multicategory.ops().len()
        )));
    }
    if !is_multicategory_map(&lifted, &sym.operad.multicategory, &to_sym) {
        return Err(Error::Validation(
            "comparison does not preserve composition".into(),
        ));
    }
    Ok(seen.len())
}

/// An action of a multicategory on a slice object: `M ⋆ V -> V`.
#[derive(Clone, Debug)]
pub struct OperadAction {
    pub v: Slice,
    pub ground: Slice,
    pub map: SliceMap,
    index: HashMap<Elem, usize>,
}

impl OperadAction {
    /// `a(xs)`.
    pub fn apply(&self, a: &Op, xs: &[Elem]) -> Result<&Elem> {
        let e = Elem::tuple(a, xs.to_vec())?;
        let &i = self
            .index
            .get(&e)
            .ok_or_else(|| Error::Input(format!("{e:?} is not in M ⋆ V")))?;
        Ok(&self.v.elems()[self.map.apply(i)])
    }

    /// A copy with one value replaced, bypassing the laws.
    pub fn with_value(&self, a: &Op, xs: &[Elem], value: &Elem) -> Result<Self> {
        let e = Elem::tuple(a, xs.to_vec())?;
        let &i = self
            .index
            .get(&e)
            .ok_or_else(|| Error::Input(format!("{e:?} is not in M ⋆ V")))?;
        let j = self.v.index()[value];
        let mut values: Vec<usize> = (0..self.ground.len()).map(|k| self.map.apply(k)).collect();
        values[i] = j;
        Ok(OperadAction {
            map: SliceMap::new(self.ground.clone(), self.v.clone(), values)?,
            ..self.clone()
        })
    }
}

/// Tabulate an action of `m` on `v` given by `f`.
pub fn operad_algebra(
    m: &Multicategory,
    v: &Slice,
    f: &dyn Fn(&Op, &[Elem]) -> Result<Elem>,
) -> Result<OperadAction> {
    let ground = act(m.ops(), v)?;
    let vi = v.index();
    let values = ground
        .elems()
        .iter()
        .map(|e| {
            let (a, xs) = e.expect_tuple()?;
            let r = f(a, xs)?;
            vi.get(&r)
                .copied()
                .ok_or_else(|| Error::Input(format!("{r:?} is not an element of V")))
        })
        .collect::<Result<Vec<_>>>()?;
    let index = ground
        .elems()
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    let map = SliceMap::new(ground.clone(), v.clone(), values)?;
    Ok(OperadAction {
        v: v.clone(),
        ground,
        map,
        index,
    })
}

/// The unit and associativity axioms of an action.
pub fn validate_operad_action(m: &Multicategory, action: &OperadAction) -> Result<(), Violation> {
    let cs = m.colours();
    let v = |diagram: &str, e: String, l: String, r: String| Violation {
        diagram: diagram.into(),
        instance: format!("action of {}", m.name()),
        element: e,
        lhs: l,
        rhs: r,
    };
    for x in action.v.elems() {
        let got = action
            .apply(m.identity(x.colour), std::slice::from_ref(x))
            .map_err(|e| v("action unit", x.name(cs), e.to_string(), String::new()))?;
        if got != x {
            return Err(v("action unit", x.name(cs), got.name(cs), x.name(cs)));
        }
    }
    let fibres = action.v.fibres();
    let entries: Vec<(&Op, &Op)> = m.entries().collect();
    let found = exec::find_map_first(Strategy::Parallel, &entries, |(z, ab)| {
        let (a, bs) = z.expect_pair().expect("pairs");
        let slots: Vec<Vec<Elem>> = z
            .ins
            .iter()
            .map(|&c| fibres[c].iter().map(|e| (*e).clone()).collect())
            .collect();
        let refs: Vec<&Vec<Elem>> = slots.iter().collect();
        for xs in product(&refs) {
            let lhs = action.apply(ab, &xs).ok()?.clone();
            let mut rest = xs.as_slice();
            let mut ys = Vec::new();
            for b in bs {
                let (now, later) = rest.split_at(b.arity());
                rest = later;
                ys.push(action.apply(b, now).ok()?.clone());
            }
            let rhs = action.apply(a, &ys).ok()?.clone();
            if lhs != rhs {
                let e = format!(
                    "{} at {}",
                    m.show(z),
                    xs.iter().map(|x| x.name(cs)).collect::<Vec<_>>().join(",")
                );
                return Some(v("action associativity", e, lhs.name(cs), rhs.name(cs)));
            }
        }
        None
    });
    found.map_or(Ok(()), Err)
}

/// For a symmetric operad, additionally require the action to be
/// equivariant: `(a·σ)(xs) = a(xs ∘ σ)`, so that it factors through `em_eval`.
pub fn validate_symmetric_action(
    s: &SymmetricOperad,
    action: &OperadAction,
) -> Result<(), Violation> {
    validate_operad_action(&s.multicategory, action)?;
    let cs = s.algebra.colours();
    let fibres = action.v.fibres();
    for (d, b) in s.algebra.rows() {
        let (a, xi) = d.expect_dec().expect("rows are decorated");
        let slots: Vec<Vec<Elem>> = d
            .ins
            .iter()
            .map(|&c| fibres[c].iter().map(|e| (*e).clone()).collect())
            .collect();
        let refs: Vec<&Vec<Elem>> = slots.iter().collect();
        for xs in product(&refs) {
            let lhs = action.apply(&b, &xs);
            let rhs = action.apply(a, &xi.pull(&xs));
            if lhs.as_ref().ok() != rhs.as_ref().ok() {
                return Err(Violation {
                    diagram: "action equivariance".into(),
                    instance: format!("action of {}", s.multicategory.name()),
                    element: format!(
                        "{} at {}",
                        s.algebra.show(&d),
                        xs.iter().map(|x| x.name(cs)).collect::<Vec<_>>().join(",")
                    ),
                    lhs: lhs.map_or_else(|e| e.to_string(), |x| x.name(cs)),
                    rhs: rhs.map_or_else(|e| e.to_string(), |x| x.name(cs)),
                });
            }
        }
    }
    Ok(())
}

/// Transport an action of a symmetric operad to an algebra for its
/// evaluation monad: the structure map `X ⋆̈ V -> V` on classes.
pub fn algebra_transport(
    s: &SymmetricOperad,
    action: &OperadAction,
) -> Result<(Evaluation, SliceMap)> {
    let ev = em_eval(&s.algebra, &action.v)?;
    let vi = action.v.index();
    let mut values = vec![None; ev.len()];
    for e in ev.ground.elems() {
        let (a, xs) = e.expect_tuple()?;
        let r = vi[action.apply(a, xs)?];
        let c = ev.quotient.class_of(e).expect("ground element");
        match values[c] {
            None => values[c] = Some(r),
            Some(prev) if prev != r => {
                return Err(Error::IllDefined(format!(
                    "the action is not constant on the class of {e:?}"
                )))
            }
            _ => {}
        }
    }
    let values = values
        .into_iter()
        .map(|v| v.expect("classes are non-empty"))
        .collect();
    let h = SliceMap::new(ev.classes.clone(), action.v.clone(), values)?;
    Ok((ev, h))
}

/// The inverse transport: an action from a structure map on classes.
pub fn algebra_transport_back(
    s: &SymmetricOperad,
    ev: &Evaluation,
    h: &SliceMap,
) -> Result<OperadAction> {
    let v = h.target.clone();
    operad_algebra(&s.multicategory, &v, &|a, xs| {
        let c = ev.class_of(&Elem::tuple(a, xs.to_vec())?)?;
        let i = ev.classes.index()[&c];
        Ok(v.elems()[h.apply(i)].clone())
    })
}

/// The action of `T̃(M)` induced by an action of `M`: `(a, ξ)(xs) = a(xs ∘ ξ)`.
pub fn induced_monoid_action(
    tag: MonadTag,
    m: &Multicategory,
    action: &OperadAction,
    bounds: Bounds,
) -> Result<(Multicategory, OperadAction)> {
    let lifted = lift_monad_to_monoids(tag, m, bounds)?;
    let induced = operad_algebra(&lifted, &action.v, &|d, xs| {
        let (a, xi) = d.expect_dec()?;
        action.apply(a, &xi.pull(xs)).cloned()
    })?;
    Ok((lifted, induced))
}

/// The slice `{0, 1}` over one colour.
pub fn boolean_slice() -> Slice {
    Slice::new(
        Colours::single(),
        vec![Elem::atom("0", 0), Elem::atom("1", 0)],
    )
    .expect("two elements")
}

/// The tautological action of the endomorphism multicategory on `{0, 1}`.
pub fn tautological_action(m: &Multicategory) -> Result<OperadAction> {
    let v = boolean_slice();
    operad_algebra(m, &v, &|a, xs| {
        let bits: Vec<bool> = xs.iter().map(|x| x == &v.elems()[1]).collect();
        Ok(v.elems()[usize::from(eval_boolean(a, &bits)?)].clone())
    })
}

/// `Comm` acting on the two-element meet-semilattice `{0 < 1}` by meets.
pub fn semilattice_action(s: &SymmetricOperad) -> Result<OperadAction> {
    let v = boolean_slice();
    operad_algebra(&s.multicategory, &v, &|_, xs| {
        Ok(xs.iter().min().expect("positive arity").clone())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::em::trivial_species;

    fn one() -> Colours {
        Colours::single()
    }

    fn m_sig() -> Signature {
        Signature::new(one(), vec![Op::atom("m", 0, vec![0, 0])]).unwrap()
    }

    fn meu_sig() -> Signature {
        Signature::new(
            one(),
            vec![
                Op::atom("m", 0, vec![0, 0]),
                Op::atom("u", 0, vec![0]),
                Op::atom("e", 0, vec![]),
            ],
        )
        .unwrap()
    }

    fn counts(m: &Multicategory) -> Vec<usize> {
        let ac = m.ops().arity_counts();
        (0..=3).map(|n| ac.get(&n).copied().unwrap_or(0)).collect()
    }

    #[test]
    fn catalan_counts() {
        let f = free_multicategory(&m_sig(), TreeBounds::new(3, 3)).unwrap();
        assert_eq!(counts(&f)[1..], [1, 1, 2]);
        assert!(validate_multicategory(&f).is_ok());
        let f4 = free_multicategory(&m_sig(), TreeBounds::new(4, 4)).unwrap();
        assert_eq!(f4.ops().arity_counts().get(&4), Some(&5));
    }

    #[test]
    fn empty_signature_gives_leaves() {
        let f = free_multicategory(&Signature::empty(one()), TreeBounds::default()).unwrap();
        assert_eq!(f.ops().len(), 1);
        assert_eq!(f.show(&f.ops().ops()[0]), "@");
    }

    #[test]
    fn tree_names() {
        let m = &m_sig().ops()[0].clone();
        let t = TermTree::node(m, vec![TermTree::Leaf(0), TermTree::corolla(m)]).unwrap();
        assert_eq!(t.name(&one()), "m(@,m(@,@))");
        assert_eq!(t.leaf_count(), 3);
        assert_eq!(t.depth(), 2);
    }

    #[test]
    fn terminal_and_endomorphisms_validate() {
        assert!(validate_multicategory(&terminal_multicategory(3)).is_ok());
        let e = endomorphism_multicategory(2);
        assert_eq!(e.ops().len(), 2 + 4 + 16);
        assert!(validate_multicategory(&e).is_ok());
    }

    #[test]
    fn mutated_endomorphism_fails_associativity() {
        let e = endomorphism_multicategory(2);
        let and = Op::atom("f2:0001", 0, vec![0, 0]);
        let or = Op::atom("f2:0111", 0, vec![0, 0]);
        let id = e.identity(0).clone();
        let not = Op::atom("f1:10", 0, vec![0]);
        let bad = e.with_entry(&and, &[not.clone(), id.clone()], &or).unwrap();
        let v = validate_multicategory(&bad).unwrap_err();
        assert_eq!(v.diagram, "multicategory associativity");
    }

    #[test]
    fn comb_of_nested_swaps() {
        let m = &m_sig().ops()[0].clone();
        let swap = decorate(m, FinMap::swap2(), vec![0, 0]).unwrap();
        let sub = TermTree::corolla(&eta(m));
        let t = TermTree::node(&swap, vec![sub, TermTree::Leaf(0)]).unwrap();
        let (plain, lambda) = comb(&t).unwrap();
        assert_eq!(plain.name(&one()), "m(@,m(@,@))");
        assert_eq!(lambda, FinMap::new(3, vec![2, 0, 1]).unwrap());
    }

    #[test]
    fn identity_decorations_comb_trivially() {
        for t in enumerate_trees(&m_sig(), TreeBounds::default()) {
            let lifted = t.map_nodes(&|x| Ok(eta(x))).unwrap();
            let (plain, lambda) = comb(&lifted).unwrap();
            assert_eq!(plain, t);
            assert!(lambda.is_identity());
        }
    }

    #[test]
    fn distributive_law_axioms() {
        let r = check_distributive_law(&meu_sig(), TreeBounds::new(3, 3).with_nodes(3)).unwrap();
        assert!(r.mult_tree > 0 && r.mult_symmetric > 0 && r.evaluations > 0);
    }

    #[test]
    fn free_rigid_matches_free_multicategory() {
        let b = TreeBounds::default();
        let r = free_rigid_operad(&m_sig(), b).unwrap();
        let f = free_multicategory(&m_sig(), b).unwrap();
        assert_eq!(r.ops(), f.ops());
        assert!(validate_rigid_operad(&r).is_ok());
    }

    #[test]
    fn lifted_endomorphisms_validate() {
        let e = endomorphism_multicategory(2);
        let s = lift_monad_to_monoids(MonadTag::S, &e, Bounds::new(2)).unwrap();
        assert!(validate_multicategory(&s).is_ok());
        let t =
            lift_monad_to_monoids(MonadTag::S, &terminal_multicategory(3), Bounds::new(3)).unwrap();
        assert!(validate_multicategory(&t).is_ok());
    }

    #[test]
    fn comm_on_semilattice() {
        let c = comm_operad(3).unwrap();
        assert!(validate_symmetric_operad(&c).is_ok());
        let act = semilattice_action(&c).unwrap();
        assert!(validate_symmetric_action(&c, &act).is_ok());
        let (ev, h) = algebra_transport(&c, &act).unwrap();
        // nonempty multisets of size <= 3 over two elements
        assert_eq!(ev.len(), 2 + 3 + 4);
        let back = algebra_transport_back(&c, &ev, &h).unwrap();
        assert_eq!(back.map, act.map);
    }

    #[test]
    fn tautological_action_and_mutation() {
        let e = endomorphism_multicategory(2);
        let act = tautological_action(&e).unwrap();
        assert!(validate_operad_action(&e, &act).is_ok());
        let v = boolean_slice();
        let and = Op::atom("f2:0001", 0, vec![0, 0]);
        let bad = act
            .with_value(
                &and,
                &[v.elems()[1].clone(), v.elems()[1].clone()],
                &v.elems()[0],
            )
            .unwrap();
        let err = validate_operad_action(&e, &bad).unwrap_err();
        assert_eq!(err.diagram, "action associativity");
        let (lifted, induced) =
            induced_monoid_action(MonadTag::S, &e, &act, Bounds::new(2)).unwrap();
        assert!(validate_operad_action(&lifted, &induced).is_ok());
    }

    #[test]
    fn free_symmetric_operad_on_commutative_binary() {
        let e = trivial_species(2, "e");
        let s = free_symmetric_operad(&e, TreeBounds::new(3, 3))
            .unwrap()
            .operad;
        assert_eq!(s.multicategory.ops().arity_counts().get(&3), Some(&3));
        assert!(validate_symmetric_operad(&s).is_ok());
        let empty = Algebra::from_fn(MonadTag::S, Signature::empty(one()), Bounds::new(3), |d| {
            Ok(d.clone())
        })
        .unwrap();
        let s0 = free_symmetric_operad(&empty, TreeBounds::default())
            .unwrap()
            .operad;
        assert_eq!(s0.multicategory.ops().len(), 1);
    }

    #[test]
    fn symmetrize_free_agrees_with_free_symmetrize() {
        let n = check_symmetrization_comparison(&m_sig(), TreeBounds::new(3, 3)).unwrap();
        assert_eq!(n, 1 + 2 + 2 * 6);
    }
}
