//! Coloured signatures over a finite category: finite categories, presheaves,
//! two-sided tables `O^op × M(O) -> Set` truncated at a word length, and the
//! coends that define their tensor, action, symmetrization and left Kan
//! extension. Every coend is a quotient of an enumerated ground set, and
//! every comparison produces an explicit bijection witness.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::em::Algebra;
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::finset::{enumerate_homs, permutations, FinMap, HomKind, Quotient, QuotientBuilder};
use crate::monads::decorate;
use crate::signatures::{act, product, tensor_bounded, Colours, Elem, Op, Signature, Slice};

/// A word of objects.
pub type Word = Vec<usize>;

/// A structured element name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Name(Arc<str>),
    Tuple(Arc<[Token]>),
    /// A class of a coend, named by its representative.
    Class(Arc<Token>),
}

impl Token {
    pub fn name(s: &str) -> Token {
        Token::Name(s.into())
    }

    pub fn tuple(parts: Vec<Token>) -> Token {
        Token::Tuple(parts.into())
    }

    pub fn class(rep: Token) -> Token {
        Token::Class(Arc::new(rep))
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Name(s) => write!(f, "{s}"),
            Token::Tuple(ts) => {
                write!(f, "(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Token::Class(t) => write!(f, "[{t}]"),
        }
    }
}

impl fmt::Debug for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite category with a full composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    /// `table[f][g]` is `g ∘ f` when `f` and `g` are composable.
    table: Vec<Vec<Option<usize>>>,
    homs: Vec<Vec<Vec<usize>>>,
}

impl FinCat {
    /// `then(f, g)` gives `g ∘ f` for every composable pair; the laws are
    /// checked.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        then: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self> {
        let n = objects.len();
        distinct(objects.iter(), "object")?;
        distinct(morphisms.iter().map(|m| &m.name), "morphism")?;
        for m in &morphisms {
            if m.source >= n || m.target >= n {
                return Err(Error::Input(format!(
                    "morphism {} has an unknown end",
                    m.name
                )));
            }
        }
        if identities.len() != n {
            return Err(Error::Input(format!(
                "{} identities for {n} objects",
                identities.len()
            )));
        }
        for (o, &i) in identities.iter().enumerate() {
            let m = morphisms
                .get(i)
                .ok_or_else(|| Error::Input(format!("identity {i} out of range")))?;
            if m.source != o || m.target != o {
                return Err(Error::Input(format!(
                    "identity {} is not an endomorphism of {}",
                    m.name, objects[o]
                )));
            }
        }
        let mut table = vec![vec![None; morphisms.len()]; morphisms.len()];
        for (f, mf) in morphisms.iter().enumerate() {
            for (g, mg) in morphisms.iter().enumerate() {
                if mf.target != mg.source {
                    continue;
                }
                let h = then(f, g).ok_or_else(|| {
                    Error::Input(format!("no composite for {} then {}", mf.name, mg.name))
                })?;
                let mh = morphisms
                    .get(h)
                    .ok_or_else(|| Error::Input(format!("composite {h} out of range")))?;
                if mh.source != mf.source || mh.target != mg.target {
                    return Err(Error::Validation(format!(
                        "{} then {} is {}, which has the wrong ends",
                        mf.name, mg.name, mh.name
                    )));
                }
                table[f][g] = Some(h);
            }
        }
        let mut homs = vec![vec![Vec::new(); n]; n];
        for (f, m) in morphisms.iter().enumerate() {
            homs[m.source][m.target].push(f);
        }
        let cat = FinCat {
            objects,
            morphisms,
            identities,
            table,
            homs,
        };
        cat.check_laws()?;
        Ok(cat)
    }

    fn check_laws(&self) -> Result<()> {
        for (f, m) in self.morphisms.iter().enumerate() {
            if self.seq(self.identities[m.source], f) != f
                || self.seq(f, self.identities[m.target]) != f
            {
                return Err(Error::Validation(format!("unit law fails at {}", m.name)));
            }
        }
        for f in 0..self.morphisms.len() {
            for &g in self.homs[self.morphisms[f].target].iter().flatten() {
                for &h in self.homs[self.morphisms[g].target].iter().flatten() {
                    if self.seq(self.seq(f, g), h) != self.seq(f, self.seq(g, h)) {
                        return Err(Error::Validation(format!(
                            "associativity fails at {}, {}, {}",
                            self.morphisms[f].name, self.morphisms[g].name, self.morphisms[h].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The discrete category on the given objects.
    pub fn discrete<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let objects: Vec<String> = names.into_iter().map(Into::into).collect();
        let morphisms = objects
            .iter()
            .enumerate()
            .map(|(o, name)| Morphism {
                name: format!("1_{name}"),
                source: o,
                target: o,
            })
            .collect();
        let identities = (0..objects.len()).collect();
        FinCat::new(objects, morphisms, identities, |f, _| Some(f))
    }

    pub fn terminal() -> Self {
        FinCat::discrete(["*"]).expect("one object")
    }

    /// Two objects `j`, `k` and one arrow `u: j -> k`.
    pub fn walking_arrow() -> Self {
        let morphisms = vec![
            Morphism {
                name: "1_j".into(),
                source: 0,
                target: 0,
            },
            Morphism {
                name: "1_k".into(),
                source: 1,
                target: 1,
            },
            Morphism {
                name: "u".into(),
                source: 0,
                target: 1,
            },
        ];
        FinCat::new(
            vec!["j".into(), "k".into()],
            morphisms,
            vec![0, 1],
            |f, g| match (f, g) {
                (0, g) => Some(g),
                (f, 1) => Some(f),
                _ => None,
            },
        )
        .expect("walking arrow")
    }

    /// The one-object category of a finite monoid given by its table.
    pub fn monoid(names: &[&str], unit: usize, mul: &[Vec<usize>]) -> Result<Self> {
        let morphisms = names
            .iter()
            .map(|n| Morphism {
                name: (*n).into(),
                source: 0,
                target: 0,
            })
            .collect();
        FinCat::new(vec!["*".into()], morphisms, vec![unit], |f, g| {
            mul.get(g).and_then(|r| r.get(f)).copied()
        })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, f: usize) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.morphisms[f].source] == f
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a][b]
    }

    /// `g ∘ f`, if composable.
    pub fn then(&self, f: usize, g: usize) -> Option<usize> {
        self.table.get(f).and_then(|r| r.get(g)).copied().flatten()
    }

    fn seq(&self, f: usize, g: usize) -> usize {
        self.table[f][g].expect("composable morphisms")
    }

    pub fn non_identities(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphisms.len()).filter(|&f| !self.is_identity(f))
    }

    fn word_token(&self, w: &[usize]) -> Token {
        Token::tuple(w.iter().map(|&o| Token::name(&self.objects[o])).collect())
    }

    fn mor_token(&self, f: usize) -> Token {
        Token::name(&self.morphisms[f].name)
    }

    /// All words of length at most `max_len`, shortest first.
    pub fn words(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        let mut layer: Vec<Word> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for o in 0..self.object_count() {
                    let mut v = w.clone();
                    v.push(o);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// Componentwise morphism tuples `w_i -> v_i`.
    fn hom_tuples(&self, from: &[usize], to: &[usize]) -> Vec<Vec<usize>> {
        let lists: Vec<Vec<usize>> = from
            .iter()
            .zip(to)
            .map(|(&a, &b)| self.homs[a][b].clone())
            .collect();
        product(&lists.iter().collect::<Vec<_>>())
    }
}

fn distinct<'a>(names: impl Iterator<Item = &'a String>, what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::Input(format!("{what} name {n} repeated")));
        }
    }
    Ok(())
}

/// The word `σ·w` with `(σ·w)[σ(i)] = w[i]`.
pub fn permute_word<T: Clone>(sigma: &FinMap, w: &[T]) -> Vec<T> {
    let mut out = w.to_vec();
    for (i, x) in w.iter().enumerate() {
        out[sigma.apply(i)] = x.clone();
    }
    out
}

/// A presheaf `O^op -> FinSet`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    base: Arc<FinCat>,
    sets: Vec<Vec<Token>>,
    /// Per morphism `f: a -> b`, the restriction `X(b) -> X(a)`.
    restrict: Vec<Vec<usize>>,
}

impl Presheaf {
    /// Checks typing and functoriality.
    pub fn new(
        base: Arc<FinCat>,
        sets: Vec<Vec<Token>>,
        restrict: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if sets.len() != base.object_count() || restrict.len() != base.morphisms().len() {
            return Err(Error::Input(
                "presheaf data does not match the category".into(),
            ));
        }
        for s in &sets {
            let uniq: HashSet<&Token> = s.iter().collect();
            if uniq.len() != s.len() {
                return Err(Error::Input("presheaf set lists an element twice".into()));
            }
        }
        for (f, m) in base.morphisms().iter().enumerate() {
            let r = &restrict[f];
            if r.len() != sets[m.target].len() || r.iter().any(|&i| i >= sets[m.source].len()) {
                return Err(Error::Input(format!(
                    "restriction along {} is mistyped",
                    m.name
                )));
            }
            if base.is_identity(f) && r.iter().enumerate().any(|(i, &j)| i != j) {
                return Err(Error::Validation(format!(
                    "restriction along {} is not the identity",
                    m.name
                )));
            }
        }
        for f in 0..base.morphisms().len() {
            for &g in base.homs[base.morphism(f).target].iter().flatten() {
                let h = base.seq(f, g);
                for i in 0..sets[base.morphism(g).target].len() {
                    if restrict[h][i] != restrict[f][restrict[g][i]] {
                        return Err(Error::Validation(format!(
                            "restriction is not functorial at {} then {}",
                            base.morphism(f).name,
                            base.morphism(g).name
                        )));
                    }
                }
            }
        }
        Ok(Presheaf {
            base,
            sets,
            restrict,
        })
    }

    /// The representable `Hom(-, m)`.
    pub fn representable(base: &Arc<FinCat>, m: usize) -> Self {
        let homs: Vec<Vec<usize>> = (0..base.object_count())
            .map(|a| base.hom(a, m).to_vec())
            .collect();
        let sets = homs
            .iter()
            .map(|h| h.iter().map(|&f| base.mor_token(f)).collect())
            .collect();
        let restrict = base
            .morphisms()
            .iter()
            .enumerate()
            .map(|(f, mf)| {
                homs[mf.target]
                    .iter()
                    .map(|&h| {
                        let c = base.seq(f, h);
                        homs[mf.source]
                            .iter()
                            .position(|&x| x == c)
                            .expect("composite in hom set")
                    })
                    .collect()
            })
            .collect();
        Presheaf::new(base.clone(), sets, restrict).expect("representables are functorial")
    }

    pub fn terminal(base: &Arc<FinCat>) -> Self {
        let sets = vec![vec![Token::name("*")]; base.object_count()];
        let restrict = vec![vec![0]; base.morphisms().len()];
        Presheaf::new(base.clone(), sets, restrict).expect("terminal presheaf")
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn set(&self, o: usize) -> &[Token] {
        &self.sets[o]
    }

    pub fn size(&self, o: usize) -> usize {
        self.sets[o].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    pub fn restrict(&self, f: usize, i: usize) -> usize {
        self.restrict[f][i]
    }

    /// `X^w = Π X(w_i)` as index tuples.
    pub fn tuples(&self, w: &[usize]) -> Vec<Vec<usize>> {
        let lists: Vec<Vec<usize>> = w
            .iter()
            .map(|&o| (0..self.sets[o].len()).collect())
            .collect();
        product(&lists.iter().collect::<Vec<_>>())
    }
}

fn same_base(a: &FinCat, b: &FinCat, what: &str) -> Result<()> {
    if a != b {
        return Err(Error::ColourMismatch(format!(
            "{what}: the two sides live over different categories"
        )));
    }
    Ok(())
}

/// A presheaf computed as a quotient, keeping the ground keys.
#[derive(Clone, Debug)]
pub struct CoendPresheaf<K: Clone + Eq + Hash> {
    pub presheaf: Presheaf,
    quotients: Vec<Quotient<K>>,
}

impl<K: Clone + Eq + Hash + fmt::Debug> CoendPresheaf<K> {
    pub fn class_of(&self, o: usize, key: &K) -> Result<usize> {
        self.quotients[o]
            .class_of(key)
            .ok_or_else(|| Error::Truncation(format!("{key:?} is outside the computed ground set")))
    }

    pub fn quotient(&self, o: usize) -> &Quotient<K> {
        &self.quotients[o]
    }
}

fn coend_presheaf<K: Clone + Eq + Hash + fmt::Debug>(
    base: &Arc<FinCat>,
    quotients: Vec<Quotient<K>>,
    name: impl Fn(usize, &K) -> Token,
    restrict: impl Fn(usize, &K) -> Result<K>,
) -> Result<CoendPresheaf<K>> {
    let sets: Vec<Vec<Token>> = quotients
        .iter()
        .enumerate()
        .map(|(o, q)| {
            (0..q.class_count())
                .map(|c| Token::class(name(o, q.representative(c))))
                .collect()
        })
        .collect();
    let mut maps = Vec::with_capacity(base.morphisms().len());
    for (f, m) in base.morphisms().iter().enumerate() {
        if base.is_identity(f) {
            maps.push((0..quotients[m.target].class_count()).collect());
            continue;
        }
        maps.push(induced(
            &quotients[m.target],
            &quotients[m.source],
            |k| restrict(f, k),
            &m.name,
        )?);
    }
    Ok(CoendPresheaf {
        presheaf: Presheaf::new(base.clone(), sets, maps)?,
        quotients,
    })
}

/// The map on classes induced by a map on keys, checked on every member.
fn induced<K: Clone + Eq + Hash + fmt::Debug, L: Clone + Eq + Hash + fmt::Debug>(
    from: &Quotient<K>,
    to: &Quotient<L>,
    f: impl Fn(&K) -> Result<L>,
    what: &str,
) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(from.class_count());
    for c in 0..from.class_count() {
        let mut image = None;
        for k in from.members(c) {
            let l = f(k)?;
            let d = to.class_of(&l).ok_or_else(|| {
                Error::Truncation(format!("{what}: {l:?} is outside the target ground set"))
            })?;
            match image {
                None => image = Some(d),
                Some(e) if e != d => {
                    return Err(Error::IllDefined(format!(
                        "{what} sends members of one class apart at {k:?}"
                    )))
                }
                _ => {}
            }
        }
        out.push(image.ok_or_else(|| Error::Validation("empty class".into()))?);
    }
    Ok(out)
}

/// A two-sided table `O^op × M(O) -> FinSet` on words of length at most
/// `max_len`. A symmetric table also carries the action of the permutations,
/// that is a functor on `sM(O)` in the second variable.
#[derive(Clone, Debug)]
pub struct Table {
    base: Arc<FinCat>,
    max_len: usize,
    symmetric: bool,
    words: Vec<Word>,
    cells: BTreeMap<(usize, Word), Vec<Token>>,
    /// `(f, w)` for `f: a -> b`: the map `T(b; w) -> T(a; w)`.
    left: HashMap<(usize, Word), Vec<usize>>,
    /// `(o, w, pos, g)` for `g: w[pos] -> t`.
    right: HashMap<(usize, Word, usize, usize), Vec<usize>>,
    /// `(o, w, σ)`: the map `T(o; w) -> T(o; σ·w)`.
    perm: HashMap<(usize, Word, FinMap), Vec<usize>>,
}

impl Table {
    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn cell(&self, o: usize, w: &[usize]) -> &[Token] {
        self.cells
            .get(&(o, w.to_vec()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn cells(&self) -> impl Iterator<Item = (&(usize, Word), &Vec<Token>)> {
        self.cells.iter()
    }

    pub fn total(&self) -> usize {
        self.cells.values().map(Vec::len).sum()
    }

    /// Restriction along `f: a -> b` of an element of `T(b; w)`.
    pub fn apply_left(&self, f: usize, w: &[usize], i: usize) -> usize {
        if self.base.is_identity(f) {
            return i;
        }
        self.left[&(f, w.to_vec())][i]
    }

    /// Extension along `g: w[pos] -> t` of an element of `T(o; w)`.
    pub fn apply_right(
        &self,
        o: usize,
        w: &[usize],
        pos: usize,
        g: usize,
        i: usize,
    ) -> (Word, usize) {
        let mut w2 = w.to_vec();
        w2[pos] = self.base.morphism(g).target;
        if self.base.is_identity(g) {
            return (w2, i);
        }
        (w2, self.right[&(o, w.to_vec(), pos, g)][i])
    }

    /// Extension along the componentwise tuple `gs_k: w_k -> t_k`.
    pub fn apply_componentwise(
        &self,
        o: usize,
        w: &[usize],
        gs: &[usize],
        i: usize,
    ) -> (Word, usize) {
        let mut cur = (w.to_vec(), i);
        for (pos, &g) in gs.iter().enumerate() {
            cur = self.apply_right(o, &cur.0, pos, g, cur.1);
        }
        cur
    }

    /// The permutation action `T(o; w) -> T(o; σ·w)`.
    pub fn apply_perm(
        &self,
        o: usize,
        w: &[usize],
        sigma: &FinMap,
        i: usize,
    ) -> Result<(Word, usize)> {
        if sigma.is_identity() {
            return Ok((w.to_vec(), i));
        }
        if !self.symmetric {
            return Err(Error::Input(
                "permutation action on a table without one".into(),
            ));
        }
        Ok((
            permute_word(sigma, w),
            self.perm[&(o, w.to_vec(), sigma.clone())][i],
        ))
    }

    /// The action of the `sM(O)` morphism `(σ, v)` with `v_i: w_i -> t_σ(i)`.
    pub fn apply_sm(
        &self,
        o: usize,
        w: &[usize],
        sigma: &FinMap,
        vs: &[usize],
        i: usize,
    ) -> Result<(Word, usize)> {
        let (u, j) = self.apply_componentwise(o, w, vs, i);
        self.apply_perm(o, &u, sigma, j)
    }

    fn right_generators(&self) -> Vec<(Word, usize, usize)> {
        right_generators(&self.base, &self.words)
    }

    /// Functoriality in both variables and compatibility of the actions.
    pub fn validate(&self) -> Result<()> {
        let cat = &self.base;
        let fail = |what: String| {
            Err(Error::Validation(format!(
                "table is not functorial: {what}"
            )))
        };
        let gens = self.right_generators();
        for f in cat.non_identities() {
            for g in cat.non_identities() {
                let Some(h) = cat.then(f, g) else { continue };
                let c = cat.morphism(g).target;
                for w in &self.words {
                    for i in 0..self.cell(c, w).len() {
                        if self.apply_left(f, w, self.apply_left(g, w, i))
                            != self.apply_left(h, w, i)
                        {
                            return fail(format!(
                                "left action at {}, {}",
                                cat.morphism(f).name,
                                cat.morphism(g).name
                            ));
                        }
                    }
                }
            }
        }
        for o in 0..cat.object_count() {
            for (w, pos, g) in &gens {
                for i in 0..self.cell(o, w).len() {
                    let (w2, j) = self.apply_right(o, w, *pos, *g, i);
                    for h in cat.non_identities() {
                        let Some(gh) = cat.then(*g, h) else { continue };
                        if self.apply_right(o, &w2, *pos, h, j)
                            != self.apply_right(o, w, *pos, gh, i)
                        {
                            return fail(format!("right action at position {pos}"));
                        }
                    }
                    for (p2, g2) in gens
                        .iter()
                        .filter(|(v, p, _)| v == w && p > pos)
                        .map(|(_, p, g)| (*p, *g))
                    {
                        let (w3, k) = self.apply_right(o, &w2, p2, g2, j);
                        let (w4, l) = self.apply_right(o, w, p2, g2, i);
                        if (w3, k) != self.apply_right(o, &w4, *pos, *g, l) {
                            return fail(format!("positions {pos} and {p2} do not commute"));
                        }
                    }
                    for f in cat
                        .non_identities()
                        .filter(|&f| cat.morphism(f).target == o)
                    {
                        let a = cat.morphism(f).source;
                        let lhs = self.apply_left(f, &w2, j);
                        let (_, rhs) = self.apply_right(a, w, *pos, *g, self.apply_left(f, w, i));
                        if lhs != rhs {
                            return fail(format!(
                                "left and right actions at {}",
                                cat.morphism(f).name
                            ));
                        }
                    }
                }
            }
        }
        if !self.symmetric {
            return Ok(());
        }
        for o in 0..cat.object_count() {
            for w in &self.words {
                let perms = permutations(w.len());
                for i in 0..self.cell(o, w).len() {
                    for s in &perms {
                        let (sw, j) = self.apply_perm(o, w, s, i)?;
                        for t in &perms {
                            let (_, k) = self.apply_perm(o, &sw, t, j)?;
                            if (permute_word(t, &sw), k) != self.apply_perm(o, w, &s.then(t)?, i)? {
                                return fail(format!("permutations {s} and {t}"));
                            }
                        }
                        for (pos, g) in gens
                            .iter()
                            .filter(|(v, _, _)| v == w)
                            .map(|(_, p, g)| (*p, *g))
                        {
                            let (u, a) = self.apply_right(o, w, pos, g, i);
                            let lhs = self.apply_perm(o, &u, s, a)?;
                            let rhs = self.apply_right(o, &sw, s.apply(pos), g, j);
                            if lhs != rhs {
                                return fail(format!("permutation {s} against position {pos}"));
                            }
                        }
                        for f in cat
                            .non_identities()
                            .filter(|&f| cat.morphism(f).target == o)
                        {
                            let a = cat.morphism(f).source;
                            let lhs = self.apply_left(f, &sw, j);
                            let (_, rhs) = self.apply_perm(a, w, s, self.apply_left(f, w, i))?;
                            if lhs != rhs {
                                return fail(format!(
                                    "permutation {s} against {}",
                                    cat.morphism(f).name
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn right_generators(cat: &FinCat, words: &[Word]) -> Vec<(Word, usize, usize)> {
    let mut out = Vec::new();
    for w in words {
        for (pos, &o) in w.iter().enumerate() {
            for g in cat
                .non_identities()
                .filter(|&g| cat.morphism(g).source == o)
            {
                out.push((w.clone(), pos, g));
            }
        }
    }
    out
}

/// A table computed as a quotient in each cell, keeping the ground keys.
#[derive(Clone, Debug)]
pub struct CoendTable<K: Clone + Eq + Hash> {
    pub table: Table,
    quotients: BTreeMap<(usize, Word), Quotient<K>>,
}

impl<K: Clone + Eq + Hash + fmt::Debug> CoendTable<K> {
    pub fn quotient(&self, o: usize, w: &[usize]) -> &Quotient<K> {
        &self.quotients[&(o, w.to_vec())]
    }

    pub fn class_of(&self, o: usize, w: &[usize], key: &K) -> Result<usize> {
        self.quotients
            .get(&(o, w.to_vec()))
            .and_then(|q| q.class_of(key))
            .ok_or_else(|| Error::Truncation(format!("{key:?} is outside the computed cell")))
    }

    /// The representative key of class `c` in cell `(o; w)`.
    pub fn key(&self, o: usize, w: &[usize], c: usize) -> &K {
        self.quotient(o, w).representative(c)
    }
}

type LeftFn<'a, K> = &'a dyn Fn(usize, &[usize], &K) -> Result<K>;
type RightFn<'a, K> = &'a dyn Fn(usize, &[usize], usize, usize, &K) -> Result<K>;
type PermFn<'a, K> = &'a dyn Fn(usize, &[usize], &FinMap, &K) -> Result<K>;
type RelationsFn<'a, K> = &'a dyn Fn(usize, &[usize]) -> Result<Vec<(K, K)>>;

/// Ingredients of a table presented cell by cell as quotients.
struct Presentation<'a, K> {
    ground: &'a dyn Fn(usize, &[usize]) -> Vec<K>,
    relations: RelationsFn<'a, K>,
    name: &'a dyn Fn(usize, &[usize], &K) -> Token,
    left: LeftFn<'a, K>,
    right: RightFn<'a, K>,
    perm: Option<PermFn<'a, K>>,
}

fn build_table<K: Clone + Eq + Hash + fmt::Debug>(
    base: &Arc<FinCat>,
    max_len: usize,
    p: Presentation<'_, K>,
) -> Result<CoendTable<K>> {
    let words = base.words(max_len);
    let mut quotients = BTreeMap::new();
    let mut cells = BTreeMap::new();
    for o in 0..base.object_count() {
        for w in &words {
            let mut qb = QuotientBuilder::new((p.ground)(o, w));
            for (x, y) in (p.relations)(o, w)? {
                qb.identify(&x, &y)?;
            }
            let q = qb.finish();
            let names: Vec<Token> = (0..q.class_count())
                .map(|c| (p.name)(o, w, q.representative(c)))
                .collect();
            if names.iter().collect::<HashSet<_>>().len() != names.len() {
                return Err(Error::Validation(format!(
                    "two classes share a name in cell {o} {w:?}"
                )));
            }
            cells.insert((o, w.clone()), names);
            quotients.insert((o, w.clone()), q);
        }
    }
    let mut left = HashMap::new();
    for f in base.non_identities() {
        let (a, b) = (base.morphism(f).source, base.morphism(f).target);
        for w in &words {
            let m = induced(
                &quotients[&(b, w.clone())],
                &quotients[&(a, w.clone())],
                |k| (p.left)(f, w, k),
                "left action",
            )?;
            left.insert((f, w.clone()), m);
        }
    }
    let mut right = HashMap::new();
    for o in 0..base.object_count() {
        for (w, pos, g) in right_generators(base, &words) {
            let mut w2 = w.clone();
            w2[pos] = base.morphism(g).target;
            let m = induced(
                &quotients[&(o, w.clone())],
                &quotients[&(o, w2)],
                |k| (p.right)(o, &w, pos, g, k),
                "right action",
            )?;
            right.insert((o, w, pos, g), m);
        }
    }
    let mut perm = HashMap::new();
    if let Some(act) = p.perm {
        for o in 0..base.object_count() {
            for w in &words {
                for s in permutations(w.len())
                    .into_iter()
                    .filter(|s| !s.is_identity())
                {
                    let sw = permute_word(&s, w);
                    let m = induced(
                        &quotients[&(o, w.clone())],
                        &quotients[&(o, sw)],
                        |k| act(o, w, &s, k),
                        "permutation action",
                    )?;
                    perm.insert((o, w.clone(), s), m);
                }
            }
        }
    }
    let table = Table {
        base: base.clone(),
        max_len,
        symmetric: p.perm.is_some(),
        words,
        cells,
        left,
        right,
        perm,
    };
    table.validate()?;
    Ok(CoendTable { table, quotients })
}

/// Compositions of `m` into `n` ordered non-negative parts.
fn splits(m: usize, n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if m == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=m {
        for mut rest in splits(m - first, n - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn blocks(w: &[usize], lens: &[usize]) -> Vec<Word> {
    let mut out = Vec::with_capacity(lens.len());
    let mut at = 0;
    for &l in lens {
        out.push(w[at..at + l].to_vec());
        at += l;
    }
    out
}

fn cell_range(t: &Table, o: usize, w: &[usize]) -> Vec<usize> {
    (0..t.cell(o, w).len()).collect()
}

/// The unit table `I(o; (o')) = Hom(o, o')`.
pub fn unit_table(base: &Arc<FinCat>, max_len: usize) -> Result<CoendTable<usize>> {
    let cat = base.clone();
    build_table(
        base,
        max_len,
        Presentation {
            ground: &|o, w| {
                if w.len() == 1 {
                    cat.hom(o, w[0]).to_vec()
                } else {
                    Vec::new()
                }
            },
            relations: &|_, _| Ok(Vec::new()),
            name: &|_, _, &h| cat.mor_token(h),
            left: &|f, _, &h| Ok(cat.seq(f, h)),
            right: &|_, _, _, g, &h| Ok(cat.seq(h, g)),
            perm: Some(&|_, _, _, &h| Ok(h)),
        },
    )
}

/// Key of a generated table: generator, `f: o' -> o`, and `g_i: w_i -> w'_i`.
pub type GenKey = (usize, usize, Vec<usize>);

/// The table freely generated by elements of the given types `(o; w)`.
pub fn generated_table(
    base: &Arc<FinCat>,
    max_len: usize,
    gens: &[(usize, Word)],
) -> Result<CoendTable<GenKey>> {
    let cat = base.clone();
    build_table(
        base,
        max_len,
        Presentation {
            ground: &|o2, w2| {
                let mut out = Vec::new();
                for (k, (o, w)) in gens.iter().enumerate() {
                    if w.len() != w2.len() {
                        continue;
                    }
                    for &f in cat.hom(o2, *o) {
                        for gs in cat.hom_tuples(w, w2) {
                            out.push((k, f, gs));
                        }
                    }
                }
                out
            },
            relations: &|_, _| Ok(Vec::new()),
            name: &|_, _, (k, f, gs)| {
                let mut parts = vec![Token::name(&format!("g{}", k + 1)), cat.mor_token(*f)];
                parts.extend(gs.iter().map(|&g| cat.mor_token(g)));
                Token::tuple(parts)
            },
            left: &|h, _, (k, f, gs)| Ok((*k, cat.seq(h, *f), gs.clone())),
            right: &|_, _, pos, g, (k, f, gs)| {
                let mut gs = gs.clone();
                gs[pos] = cat.seq(gs[pos], g);
                Ok((*k, *f, gs))
            },
            perm: None,
        },
    )
}

/// Key of a tensor cell: inner word `p`, `a ∈ A(o; p)`, block lengths, and
/// `b_i ∈ B(p_i; w_i)`.
pub type TensorKey = (Word, usize, Vec<usize>, Vec<usize>);

/// `(A ⊗ B)(o; w) = ∫^p A(o; p) × M(B)(p; w)`, on the common truncation.
pub fn tensor_cat(a: &Table, b: &Table) -> Result<CoendTable<TensorKey>> {
    same_base(a.base(), b.base(), "tensor")?;
    let cat = a.base().clone();
    let max_len = a.max_len().min(b.max_len());
    let inner = cat.words(max_len);
    let gens = right_generators(&cat, &inner);
    let b_tuples = |p: &[usize], ws: &[Word]| -> Vec<Vec<usize>> {
        let lists: Vec<Vec<usize>> = p
            .iter()
            .zip(ws)
            .map(|(&pi, wi)| cell_range(b, pi, wi))
            .collect();
        product(&lists.iter().collect::<Vec<_>>())
    };
    build_table(
        &cat,
        max_len,
        Presentation {
            ground: &|o, w| {
                let mut out = Vec::new();
                for p in &inner {
                    for lens in splits(w.len(), p.len()) {
                        let ws = blocks(w, &lens);
                        for ai in cell_range(a, o, p) {
                            for bs in b_tuples(p, &ws) {
                                out.push((p.clone(), ai, lens.clone(), bs));
                            }
                        }
                    }
                }
                out
            },
            relations: &|o, w| {
                let mut out = Vec::new();
                for (p, i, g) in &gens {
                    for ai in cell_range(a, o, p) {
                        let (p2, a2) = a.apply_right(o, p, *i, *g, ai);
                        for lens in splits(w.len(), p.len()) {
                            let ws = blocks(w, &lens);
                            for bs2 in b_tuples(&p2, &ws) {
                                let mut bs = bs2.clone();
                                bs[*i] = b.apply_left(*g, &ws[*i], bs2[*i]);
                                out.push((
                                    (p2.clone(), a2, lens.clone(), bs2),
                                    (p.clone(), ai, lens.clone(), bs),
                                ));
                            }
                        }
                    }
                }
                Ok(out)
            },
            name: &|o, w, (p, ai, lens, bs)| {
                let ws = blocks(w, lens);
                let mut parts = vec![cat.word_token(p), a.cell(o, p)[*ai].clone()];
                parts.extend(
                    bs.iter()
                        .enumerate()
                        .map(|(i, &bi)| b.cell(p[i], &ws[i])[bi].clone()),
                );
                Token::class(Token::tuple(parts))
            },
            left: &|f, _, (p, ai, lens, bs)| {
                Ok((p.clone(), a.apply_left(f, p, *ai), lens.clone(), bs.clone()))
            },
            right: &|_, w, k, g, (p, ai, lens, bs)| {
                let ws = blocks(w, lens);
                let mut at = 0;
                let mut bs = bs.clone();
                for (i, wi) in ws.iter().enumerate() {
                    if k < at + wi.len() {
                        bs[i] = b.apply_right(p[i], wi, k - at, g, bs[i]).1;
                        break;
                    }
                    at += wi.len();
                }
                Ok((p.clone(), *ai, lens.clone(), bs))
            },
            perm: None,
        },
    )
}

/// Key of a decorated cell: inner word `q`, `a ∈ A(o; q)`, a map `ξ` of
/// positions, and morphisms `v_i: q_i -> w_ξ(i)`.
pub type DecKey = (Word, usize, FinMap, Vec<usize>);

fn decorated_table(a: &Table, kind: HomKind) -> Result<CoendTable<DecKey>> {
    let cat = a.base().clone();
    let inner = cat.words(a.max_len());
    let gens = right_generators(&cat, &inner);
    let admissible = |q: &[usize], w: &[usize]| -> Vec<FinMap> {
        if kind == HomKind::Bijections && q.len() != w.len() {
            return Vec::new();
        }
        enumerate_homs(kind, q.len(), w.len())
    };
    let targets = |xi: &FinMap, w: &[usize]| -> Word {
        (0..xi.source_size()).map(|i| w[xi.apply(i)]).collect()
    };
    build_table(
        &cat,
        a.max_len(),
        Presentation {
            ground: &|o, w| {
                let mut out = Vec::new();
                for q in &inner {
                    for xi in admissible(q, w) {
                        let vss = cat.hom_tuples(q, &targets(&xi, w));
                        for ai in cell_range(a, o, q) {
                            for vs in &vss {
                                out.push((q.clone(), ai, xi.clone(), vs.clone()));
                            }
                        }
                    }
                }
                out
            },
            relations: &|o, w| {
                let mut out = Vec::new();
                for (q, i, g) in &gens {
                    for xi in admissible(q, w) {
                        let mut q2 = q.clone();
                        q2[*i] = cat.morphism(*g).target;
                        let vss = cat.hom_tuples(&q2, &targets(&xi, w));
                        for ai in cell_range(a, o, q) {
                            let (_, a2) = a.apply_right(o, q, *i, *g, ai);
                            for vs2 in &vss {
                                let mut vs = vs2.clone();
                                vs[*i] = cat.seq(*g, vs2[*i]);
                                out.push((
                                    (q2.clone(), a2, xi.clone(), vs2.clone()),
                                    (q.clone(), ai, xi.clone(), vs),
                                ));
                            }
                        }
                    }
                }
                Ok(out)
            },
            name: &|o, _, (q, ai, xi, vs)| {
                let mut parts = vec![
                    cat.word_token(q),
                    a.cell(o, q)[*ai].clone(),
                    Token::name(&xi.to_string()),
                ];
                parts.extend(vs.iter().map(|&v| cat.mor_token(v)));
                Token::class(Token::tuple(parts))
            },
            left: &|f, _, (q, ai, xi, vs)| {
                Ok((q.clone(), a.apply_left(f, q, *ai), xi.clone(), vs.clone()))
            },
            right: &|_, _, k, g, (q, ai, xi, vs)| {
                let vs = vs
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| if xi.apply(i) == k { cat.seq(v, g) } else { v })
                    .collect();
                Ok((q.clone(), *ai, xi.clone(), vs))
            },
            perm: Some(&|_, _, tau, (q, ai, xi, vs)| {
                Ok((q.clone(), *ai, xi.then(tau)?, vs.clone()))
            }),
        },
    )
}

/// `S(A)(o; w) = ∫^q A(o; q) × sM(O)(q, w)`, with its permutation action.
pub fn symmetrize_cat(a: &Table) -> Result<CoendTable<DecKey>> {
    decorated_table(a, HomKind::Bijections)
}

/// `F(A)(o; w) = ∫^q A(o; q) × Ô(ι(q), ι(w))`: decorations by arbitrary maps.
pub fn free_cat(a: &Table) -> Result<CoendTable<DecKey>> {
    decorated_table(a, HomKind::All)
}

/// Key of an action element: word `w`, `a ∈ A(o; w)`, `x ∈ X^w`.
pub type ActKey = (Word, usize, Vec<usize>);

fn act_ground(a: &Table, x: &Presheaf, o: usize) -> Vec<ActKey> {
    let mut out = Vec::new();
    for w in a.words() {
        let xs = x.tuples(w);
        for ai in cell_range(a, o, w) {
            for t in &xs {
                out.push((w.clone(), ai, t.clone()));
            }
        }
    }
    out
}

fn act_relations(
    a: &Table,
    x: &Presheaf,
    o: usize,
    qb: &mut QuotientBuilder<ActKey>,
) -> Result<()> {
    for (w, pos, g) in a.right_generators() {
        for ai in cell_range(a, o, &w) {
            let (w2, a2) = a.apply_right(o, &w, pos, g, ai);
            for xs2 in x.tuples(&w2) {
                let mut xs = xs2.clone();
                xs[pos] = x.restrict(g, xs2[pos]);
                qb.identify(&(w2.clone(), a2, xs2), &(w.clone(), ai, xs))?;
            }
        }
    }
    Ok(())
}

fn act_presheaf(
    a: &Table,
    x: &Presheaf,
    extra: impl Fn(usize, &mut QuotientBuilder<ActKey>) -> Result<()>,
) -> Result<CoendPresheaf<ActKey>> {
    same_base(a.base(), x.base(), "action")?;
    let cat = a.base().clone();
    let mut quotients = Vec::with_capacity(cat.object_count());
    for o in 0..cat.object_count() {
        let mut qb = QuotientBuilder::new(act_ground(a, x, o));
        act_relations(a, x, o, &mut qb)?;
        extra(o, &mut qb)?;
        quotients.push(qb.finish());
    }
    coend_presheaf(
        &cat,
        quotients,
        |o, (w, ai, xs)| {
            let xt = xs
                .iter()
                .enumerate()
                .map(|(i, &xi)| x.set(w[i])[xi].clone());
            Token::tuple(vec![
                cat.word_token(w),
                a.cell(o, w)[*ai].clone(),
                Token::tuple(xt.collect()),
            ])
        },
        |f, (w, ai, xs)| Ok((w.clone(), a.apply_left(f, w, *ai), xs.clone())),
    )
}

/// `(A ⋆ X)(o) = ∫^w A(o; w) × X^w`.
pub fn act_cat(a: &Table, x: &Presheaf) -> Result<CoendPresheaf<ActKey>> {
    act_presheaf(a, x, |_, _| Ok(()))
}

/// `Lan(F)(X)(o) = ∫^{w ∈ sM(O)} F(o; w) × X^w` for a symmetric table.
pub fn lan_iota(f: &Table, x: &Presheaf) -> Result<CoendPresheaf<ActKey>> {
    if !f.is_symmetric() {
        return Err(Error::Input(
            "left Kan extension needs a symmetric table".into(),
        ));
    }
    act_presheaf(f, x, |o, qb| {
        for w in f.words() {
            for s in permutations(w.len())
                .into_iter()
                .filter(|s| !s.is_identity())
            {
                let sw = permute_word(&s, w);
                for ai in cell_range(f, o, w) {
                    let (_, a2) = f.apply_perm(o, w, &s, ai)?;
                    for xs2 in x.tuples(&sw) {
                        let xs = s.pull(&xs2);
                        qb.identify(&(sw.clone(), a2, xs2), &(w.clone(), ai, xs))?;
                    }
                }
            }
        }
        Ok(())
    })
}

/// The analytic evaluation of an S-algebra table: the coequalizer of
/// `S(A) ⋆ X ⇉ A ⋆ X`, one map through the algebra structure and one through
/// `F(A) ⋆ X -> A ⋆ X`.
pub fn analytic_eval_cat(a: &Table, x: &Presheaf) -> Result<CoendPresheaf<ActKey>> {
    if !a.is_symmetric() {
        return Err(Error::Input(
            "analytic evaluation needs a symmetric table".into(),
        ));
    }
    let cat = a.base().clone();
    act_presheaf(a, x, |o, qb| {
        for p in a.words() {
            let xss = x.tuples(p);
            for q in a.words().iter().filter(|q| q.len() == p.len()) {
                for s in permutations(p.len()) {
                    let targets: Word = (0..q.len()).map(|i| p[s.apply(i)]).collect();
                    for vs in cat.hom_tuples(q, &targets) {
                        for ai in cell_range(a, o, q) {
                            let (p2, a2) = a.apply_sm(o, q, &s, &vs, ai)?;
                            debug_assert_eq!(&p2, p);
                            for xs in &xss {
                                let ys: Vec<usize> = (0..q.len())
                                    .map(|i| x.restrict(vs[i], xs[s.apply(i)]))
                                    .collect();
                                qb.identify(&(p.clone(), a2, xs.clone()), &(q.clone(), ai, ys))?;
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    })
}

/// A bijection between two families of classes, given as a relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// `map[i]` is the class matched with source class `i`.
    pub map: Vec<usize>,
}

/// Check that `pairs` is the graph of a bijection `[0, left) -> [0, right)`.
pub fn bijection_witness(
    pairs: impl IntoIterator<Item = (usize, usize)>,
    left: usize,
    right: usize,
    what: &str,
) -> Result<Witness> {
    let mut map = vec![None; left];
    let mut back = vec![None; right];
    for (i, j) in pairs {
        if i >= left || j >= right {
            return Err(Error::Validation(format!(
                "{what}: pair ({i}, {j}) out of range"
            )));
        }
        if map[i].is_some_and(|k| k != j) {
            return Err(Error::IllDefined(format!(
                "{what}: class {i} has two images"
            )));
        }
        if back[j].is_some_and(|k| k != i) {
            return Err(Error::Validation(format!("{what}: classes meet at {j}")));
        }
        map[i] = Some(j);
        back[j] = Some(i);
    }
    if let Some(j) = back.iter().position(Option::is_none) {
        return Err(Error::Validation(format!(
            "{what}: class {j} of the target is missed"
        )));
    }
    let map = map
        .into_iter()
        .enumerate()
        .map(|(i, j)| j.ok_or_else(|| Error::Validation(format!("{what}: class {i} has no image"))))
        .collect::<Result<_>>()?;
    Ok(Witness { map })
}

/// Both sides of the analytic comparison for one S-algebra table and one
/// presheaf, with a bijection per object.
#[derive(Clone, Debug)]
pub struct AnalyticWitness {
    pub sizes: Vec<usize>,
    pub bijections: Vec<Witness>,
}

/// The coequalizer presentation against the left Kan extension along
/// `ι: sM(O) -> Ô`, matched on the common ground `(w, a, x)`.
pub fn check_analytic_equivalence(a: &Table, x: &Presheaf) -> Result<AnalyticWitness> {
    let ev = analytic_eval_cat(a, x)?;
    let lan = lan_iota(a, x)?;
    let mut sizes = Vec::new();
    let mut bijections = Vec::new();
    for o in 0..a.base().object_count() {
        let (qe, ql) = (ev.quotient(o), lan.quotient(o));
        let pairs = qe
            .elements()
            .iter()
            .map(|k| Ok((qe.class_of(k).expect("ground"), lan.class_of(o, k)?)));
        let pairs: Vec<(usize, usize)> = pairs.collect::<Result<_>>()?;
        let wit = bijection_witness(
            pairs,
            qe.class_count(),
            ql.class_count(),
            "analytic comparison",
        )?;
        sizes.push(qe.class_count());
        bijections.push(wit);
    }
    Ok(AnalyticWitness { sizes, bijections })
}

fn discrete_base(colours: &Colours) -> Arc<FinCat> {
    Arc::new(FinCat::discrete(colours.names().iter().cloned()).expect("colour names are distinct"))
}

/// A signature as a table over its discrete colour category; keys index
/// the operations.
pub fn table_from_signature(sig: &Signature, max_len: usize) -> Result<CoendTable<usize>> {
    let base = discrete_base(sig.colours());
    build_table(
        &base,
        max_len,
        Presentation {
            ground: &|o, w| {
                (0..sig.len())
                    .filter(|&i| sig.ops()[i].out == o && sig.ops()[i].ins == w)
                    .collect()
            },
            relations: &|_, _| Ok(Vec::new()),
            name: &|_, _, &i| Token::name(&sig.ops()[i].name(sig.colours())),
            left: &|_, _, &i| Ok(i),
            right: &|_, _, _, _, &i| Ok(i),
            perm: None,
        },
    )
}

/// An S-algebra as a symmetric table over its discrete colour category.
pub fn table_from_species(alg: &Algebra) -> Result<CoendTable<usize>> {
    let sig = alg.carrier();
    let base = discrete_base(sig.colours());
    let index: HashMap<&Op, usize> = sig.index();
    build_table(
        &base,
        sig.max_arity(),
        Presentation {
            ground: &|o, w| {
                (0..sig.len())
                    .filter(|&i| sig.ops()[i].out == o && sig.ops()[i].ins == w)
                    .collect()
            },
            relations: &|_, _| Ok(Vec::new()),
            name: &|_, _, &i| Token::name(&sig.ops()[i].name(sig.colours())),
            left: &|_, _, &i| Ok(i),
            right: &|_, _, _, _, &i| Ok(i),
            perm: Some(&|_, w, s, &i| {
                let d = decorate(&sig.ops()[i], s.clone(), permute_word(s, w))?;
                Ok(index[alg.act(&d)?])
            }),
        },
    )
}

/// A slice object as a presheaf over its discrete colour category.
pub fn presheaf_from_slice(x: &Slice) -> Presheaf {
    let base = discrete_base(x.colours());
    let names = x.names();
    let mut sets = vec![Vec::new(); x.colours().len()];
    for (e, n) in x.elems().iter().zip(&names) {
        sets[e.colour].push(Token::name(n));
    }
    let restrict = sets.iter().map(|s| (0..s.len()).collect()).collect();
    Presheaf::new(base, sets, restrict).expect("discrete presheaf")
}

/// Over a discrete base the tensor table agrees with the tensor of
/// signatures, restricted to elements whose inner word fits the truncation.
pub fn check_discrete_tensor(a: &Signature, b: &Signature, max_len: usize) -> Result<usize> {
    let ta = table_from_signature(a, max_len)?;
    let tb = table_from_signature(b, max_len)?;
    let t = tensor_cat(&ta.table, &tb.table)?;
    let expected = tensor_bounded(a, b, Some(max_len))?;
    let wanted: Vec<&Op> = expected
        .ops()
        .iter()
        .filter(|e| e.expect_pair().is_ok_and(|(x, _)| x.arity() <= max_len))
        .collect();
    let index: HashMap<&Op, usize> = wanted.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut pairs = Vec::new();
    let mut n = 0;
    for ((o, w), _) in t.table.cells() {
        let q = t.quotient(*o, w);
        for c in 0..q.class_count() {
            if q.members(c).count() != 1 {
                return Err(Error::Validation(
                    "a discrete tensor cell identified two elements".into(),
                ));
            }
            let (p, ai, lens, bs) = q.representative(c);
            let ws = blocks(w, lens);
            let aop = &a.ops()[*ta.key(*o, p, *ai)];
            let bops = bs
                .iter()
                .enumerate()
                .map(|(i, &bi)| b.ops()[*tb.key(p[i], &ws[i], bi)].clone())
                .collect();
            let e = Op::pair(aop, bops)?;
            let j = *index.get(&e).ok_or_else(|| {
                Error::Validation(format!("{e:?} is not in the tensor signature"))
            })?;
            pairs.push((n, j));
            n += 1;
        }
    }
    bijection_witness(pairs, n, wanted.len(), "discrete tensor").map(|w| w.map.len())
}

/// Over a discrete base the action coend agrees with `A ⋆ X` on slices.
pub fn check_discrete_act(a: &Signature, x: &Slice, max_len: usize) -> Result<usize> {
    let ta = table_from_signature(a, max_len)?;
    let px = presheaf_from_slice(x);
    let ax = act_cat(&ta.table, &px)?;
    let expected = act(&a.truncate(max_len), x)?;
    let index = expected.index();
    let fibres = x.fibres();
    let mut pairs = Vec::new();
    let mut n = 0;
    for o in 0..x.colours().len() {
        let q = ax.quotient(o);
        for c in 0..q.class_count() {
            let (w, ai, xs) = q.representative(c);
            let op = &a.ops()[*ta.key(o, w, *ai)];
            let elems = xs
                .iter()
                .enumerate()
                .map(|(i, &xi)| fibres[w[i]][xi].clone())
                .collect();
            let e = Elem::tuple(op, elems)?;
            let j = *index
                .get(&e)
                .ok_or_else(|| Error::Validation(format!("{e:?} is not in A ⋆ X")))?;
            pairs.push((n, j));
            n += 1;
        }
    }
    bijection_witness(pairs, n, expected.len(), "discrete action").map(|w| w.map.len())
}

/// Over a discrete base the left Kan extension of a species table agrees
/// with its Eilenberg-Moore evaluation.
pub fn check_discrete_lan(alg: &Algebra, v: &Slice) -> Result<usize> {
    let t = table_from_species(alg)?;
    let pv = presheaf_from_slice(v);
    let lan = lan_iota(&t.table, &pv)?;
    let ev = crate::em::em_eval(alg, v)?;
    let classes = ev.classes.index();
    let fibres = v.fibres();
    let sig = alg.carrier();
    let mut pairs = Vec::new();
    let mut offset = 0;
    for o in 0..v.colours().len() {
        let q = lan.quotient(o);
        for k in q.elements() {
            let (w, ai, xs) = k;
            let op = &sig.ops()[*t.key(o, w, *ai)];
            let elems = xs
                .iter()
                .enumerate()
                .map(|(i, &xi)| fibres[w[i]][xi].clone())
                .collect();
            let c = ev.class_of(&Elem::tuple(op, elems)?)?;
            pairs.push((offset + q.class_of(k).expect("ground"), classes[&c]));
        }
        offset += q.class_count();
    }
    bijection_witness(pairs, offset, ev.len(), "discrete left Kan extension").map(|w| w.map.len())
}

/// The presheaf `ι(w) = Σ_j Hom(-, w_j)`, with elements `(j, v)`.
#[derive(Clone, Debug)]
pub struct Iota {
    pub presheaf: Presheaf,
    elems: Vec<Vec<(usize, usize)>>,
    index: Vec<HashMap<(usize, usize), usize>>,
}

impl Iota {
    pub fn new(base: &Arc<FinCat>, w: &[usize]) -> Self {
        let n = base.object_count();
        let elems: Vec<Vec<(usize, usize)>> = (0..n)
            .map(|q| {
                w.iter()
                    .enumerate()
                    .flat_map(|(j, &o)| base.hom(q, o).iter().map(move |&v| (j, v)))
                    .collect()
            })
            .collect();
        let index: Vec<HashMap<(usize, usize), usize>> = elems
            .iter()
            .map(|es| es.iter().enumerate().map(|(i, &e)| (e, i)).collect())
            .collect();
        let sets = elems
            .iter()
            .map(|es| {
                es.iter()
                    .map(|&(j, v)| {
                        Token::tuple(vec![Token::name(&(j + 1).to_string()), base.mor_token(v)])
                    })
                    .collect()
            })
            .collect();
        let restrict = base
            .morphisms()
            .iter()
            .enumerate()
            .map(|(f, m)| {
                elems[m.target]
                    .iter()
                    .map(|&(j, v)| index[m.source][&(j, base.seq(f, v))])
                    .collect()
            })
            .collect();
        let presheaf = Presheaf::new(base.clone(), sets, restrict).expect("sums of representables");
        Iota {
            presheaf,
            elems,
            index,
        }
    }

    pub fn elem(&self, q: usize, i: usize) -> (usize, usize) {
        self.elems[q][i]
    }

    pub fn index_of(&self, q: usize, j: usize, v: usize) -> usize {
        self.index[q][&(j, v)]
    }
}

/// `U(r(A))`: the table `(o; w) |-> (A ⋆ ι(w))(o)`, with its symmetric action.
#[derive(Clone, Debug)]
pub struct URep {
    pub table: Table,
    pub iotas: BTreeMap<Word, Iota>,
    pub acts: BTreeMap<Word, CoendPresheaf<ActKey>>,
}

pub fn u_rep_table(a: &Table) -> Result<URep> {
    let cat = a.base().clone();
    let mut iotas = BTreeMap::new();
    let mut acts = BTreeMap::new();
    for w in a.words() {
        let iota = Iota::new(&cat, w);
        acts.insert(w.clone(), act_cat(a, &iota.presheaf)?);
        iotas.insert(w.clone(), iota);
    }
    // Along a map of ι-presheaves given on elements (j, v).
    let along = |o: usize,
                 w: &[usize],
                 w2: &[usize],
                 c: usize,
                 h: &dyn Fn(usize, usize) -> (usize, usize)| {
        let (src, tgt) = (&acts[w], &acts[w2]);
        let (is, it) = (&iotas[w], &iotas[w2]);
        let (q, ai, ys) = src.quotient(o).representative(c).clone();
        let zs = ys
            .iter()
            .enumerate()
            .map(|(k, &y)| {
                let (j, v) = is.elem(q[k], y);
                let (j2, v2) = h(j, v);
                it.index_of(q[k], j2, v2)
            })
            .collect();
        tgt.class_of(o, &(q, ai, zs))
    };
    let t = build_table(
        &cat,
        a.max_len(),
        Presentation {
            ground: &|o, w| (0..acts[w].quotient(o).class_count()).collect(),
            relations: &|_, _| Ok(Vec::new()),
            name: &|o, w, &c| acts[w].presheaf.set(o)[c].clone(),
            left: &|f, w, &c| Ok(acts[w].presheaf.restrict(f, c)),
            right: &|o, w, pos, g, &c| {
                let mut w2 = w.to_vec();
                w2[pos] = cat.morphism(g).target;
                along(o, w, &w2, c, &|j, v| {
                    if j == pos {
                        (j, cat.seq(v, g))
                    } else {
                        (j, v)
                    }
                })
            },
            perm: Some(&|o, w, s, &c| along(o, w, &permute_word(s, w), c, &|j, v| (s.apply(j), v))),
        },
    )?;
    Ok(URep {
        table: t.table,
        iotas,
        acts,
    })
}

/// `U(r(A)) ≅ F(A)`: the free table matched cell by cell with the table
/// recovered from the action functor. Returns the number of elements.
pub fn check_u_representation(a: &Table) -> Result<usize> {
    let fa = free_cat(a)?;
    let cat = a.base().clone();
    let mut total = 0;
    for w in a.words() {
        let iota = Iota::new(&cat, w);
        let acts = act_cat(a, &iota.presheaf)?;
        for o in 0..cat.object_count() {
            let q = fa.quotient(o, w);
            let mut pairs = Vec::new();
            for k in q.elements() {
                let (inner, ai, xi, vs) = k;
                let xs = (0..inner.len())
                    .map(|i| iota.index_of(inner[i], xi.apply(i), vs[i]))
                    .collect();
                pairs.push((
                    q.class_of(k).expect("ground"),
                    acts.class_of(o, &(inner.clone(), *ai, xs))?,
                ));
            }
            total += bijection_witness(
                pairs,
                q.class_count(),
                acts.quotient(o).class_count(),
                "U-representation",
            )?
            .map
            .len();
        }
    }
    Ok(total)
}

/// The counit `ε: r(U(r(A)))(X) -> r(A)(X)`, `[h, x] |-> r(A)(x)(h)`.
fn counit(
    ur: &URep,
    x: &Presheaf,
    ax: &CoendPresheaf<ActKey>,
    urx: &CoendPresheaf<ActKey>,
    o: usize,
    c: usize,
) -> Result<usize> {
    let mut image = None;
    for (p, h, xs) in urx.quotient(o).members(c) {
        let iota = &ur.iotas[p];
        for (q, ai, ys) in ur.acts[p].quotient(o).members(*h) {
            let zs = ys
                .iter()
                .enumerate()
                .map(|(k, &y)| {
                    let (j, v) = iota.elem(q[k], y);
                    x.restrict(v, xs[j])
                })
                .collect();
            let d = ax.class_of(o, &(q.clone(), *ai, zs))?;
            if image.is_some_and(|e| e != d) {
                return Err(Error::IllDefined(
                    "counit sends members of one class apart".into(),
                ));
            }
            image = Some(d);
        }
    }
    image.ok_or_else(|| Error::Validation("empty class".into()))
}

fn unit_of(ur: &URep, o: usize, p: &[usize], ai: usize) -> Result<usize> {
    let iota = &ur.iotas[p];
    let ids = p
        .iter()
        .enumerate()
        .map(|(i, &pi)| iota.index_of(pi, i, ur.table.base().identity(pi)))
        .collect();
    ur.acts[p].class_of(o, &(p.to_vec(), ai, ids))
}

/// Both triangle identities of the adjunction between tables and their
/// action functors: at `X` for `ε_{r(A)} ∘ r(η_A)`, and at every `ι(w)` for
/// `U(ε) ∘ η_U`. Returns the number of elements checked.
pub fn check_triangles(a: &Table, x: &Presheaf) -> Result<usize> {
    let ur = u_rep_table(a)?;
    let ax = act_cat(a, x)?;
    let urx = act_cat(&ur.table, x)?;
    let mut checked = 0;
    for o in 0..a.base().object_count() {
        let q = ax.quotient(o);
        for k in q.elements() {
            let (p, ai, xs) = k;
            let h = unit_of(&ur, o, p, *ai)?;
            let c = urx.class_of(o, &(p.clone(), h, xs.clone()))?;
            if counit(&ur, x, &ax, &urx, o, c)? != q.class_of(k).expect("ground") {
                return Err(Error::Validation(format!("first triangle fails at {k:?}")));
            }
            checked += 1;
        }
    }
    for w in a.words() {
        let iota = &ur.iotas[w];
        let uri = act_cat(&ur.table, &iota.presheaf)?;
        let acts = &ur.acts[w];
        for o in 0..a.base().object_count() {
            for h in 0..acts.quotient(o).class_count() {
                let eta = unit_of_table(&ur.table, iota, o, w, h);
                let c = uri.class_of(o, &eta)?;
                if counit(&ur, &iota.presheaf, acts, &uri, o, c)? != h {
                    return Err(Error::Validation(format!("second triangle fails at {w:?}")));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

fn unit_of_table(t: &Table, iota: &Iota, _o: usize, w: &[usize], h: usize) -> ActKey {
    let ids = w
        .iter()
        .enumerate()
        .map(|(i, &wi)| iota.index_of(wi, i, t.base().identity(wi)))
        .collect();
    (w.to_vec(), h, ids)
}

/// A functor between finite categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatFunctor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    objects: Vec<usize>,
    morphisms: Vec<usize>,
}

impl CatFunctor {
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        objects: Vec<usize>,
        morphisms: Vec<usize>,
    ) -> Result<Self> {
        if objects.len() != source.object_count() || morphisms.len() != source.morphisms().len() {
            return Err(Error::Input(
                "functor data does not match the source".into(),
            ));
        }
        for (f, m) in source.morphisms().iter().enumerate() {
            let uf = target
                .morphisms()
                .get(morphisms[f])
                .ok_or_else(|| Error::Input(format!("image of {} out of range", m.name)))?;
            if uf.source != objects[m.source] || uf.target != objects[m.target] {
                return Err(Error::Validation(format!("functor mistypes {}", m.name)));
            }
            if source.is_identity(f) && !target.is_identity(morphisms[f]) {
                return Err(Error::Validation(format!(
                    "functor moves the identity {}",
                    m.name
                )));
            }
        }
        for f in 0..source.morphisms().len() {
            for &g in source.homs[source.morphism(f).target].iter().flatten() {
                if morphisms[source.seq(f, g)] != target.seq(morphisms[f], morphisms[g]) {
                    return Err(Error::Validation(
                        "functor does not preserve composition".into(),
                    ));
                }
            }
        }
        Ok(CatFunctor {
            source,
            target,
            objects,
            morphisms,
        })
    }

    pub fn identity(cat: &Arc<FinCat>) -> Self {
        let n = cat.object_count();
        let m = cat.morphisms().len();
        CatFunctor::new(cat.clone(), cat.clone(), (0..n).collect(), (0..m).collect())
            .expect("identity functor")
    }

    /// The unique functor to the terminal category.
    pub fn collapse(cat: &Arc<FinCat>) -> Self {
        let t = Arc::new(FinCat::terminal());
        CatFunctor::new(
            cat.clone(),
            t,
            vec![0; cat.object_count()],
            vec![0; cat.morphisms().len()],
        )
        .expect("collapse")
    }

    /// Every functor between two finite categories.
    pub fn enumerate(source: &Arc<FinCat>, target: &Arc<FinCat>) -> Vec<CatFunctor> {
        let objs: Vec<Vec<usize>> =
            vec![(0..target.object_count()).collect(); source.object_count()];
        let mut out = Vec::new();
        for ob in product(&objs.iter().collect::<Vec<_>>()) {
            let lists: Vec<Vec<usize>> = source
                .morphisms()
                .iter()
                .map(|m| target.hom(ob[m.source], ob[m.target]).to_vec())
                .collect();
            for ms in product(&lists.iter().collect::<Vec<_>>()) {
                if let Ok(u) = CatFunctor::new(source.clone(), target.clone(), ob.clone(), ms) {
                    out.push(u);
                }
            }
        }
        out
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn on_object(&self, o: usize) -> usize {
        self.objects[o]
    }

    pub fn on_morphism(&self, f: usize) -> usize {
        self.morphisms[f]
    }

    pub fn on_word(&self, w: &[usize]) -> Word {
        w.iter().map(|&o| self.objects[o]).collect()
    }
}

/// `u^*(Y) = Y ∘ u`.
pub fn pullback_presheaf(u: &CatFunctor, y: &Presheaf) -> Result<Presheaf> {
    same_base(u.target(), y.base(), "pullback")?;
    let sets = (0..u.source().object_count())
        .map(|o| y.set(u.on_object(o)).to_vec())
        .collect();
    let restrict = (0..u.source().morphisms().len())
        .map(|f| y.restrict[u.on_morphism(f)].clone())
        .collect();
    Presheaf::new(u.source().clone(), sets, restrict)
}

/// `u_!(X)(q) = ∫^p X(p) × Q(q, u(p))`, keyed by `(p, x, v)`.
pub fn pushforward_presheaf(
    u: &CatFunctor,
    x: &Presheaf,
) -> Result<CoendPresheaf<(usize, usize, usize)>> {
    same_base(u.source(), x.base(), "pushforward")?;
    let (o_cat, q_cat) = (u.source(), u.target());
    let mut quotients = Vec::new();
    for q in 0..q_cat.object_count() {
        let mut ground = Vec::new();
        for p in 0..o_cat.object_count() {
            for xi in 0..x.size(p) {
                for &v in q_cat.hom(q, u.on_object(p)) {
                    ground.push((p, xi, v));
                }
            }
        }
        let mut qb = QuotientBuilder::new(ground);
        for f in o_cat.non_identities() {
            let (p1, p2) = (o_cat.morphism(f).source, o_cat.morphism(f).target);
            for x2 in 0..x.size(p2) {
                for &v in q_cat.hom(q, u.on_object(p1)) {
                    qb.identify(
                        &(p1, x.restrict(f, x2), v),
                        &(p2, x2, q_cat.seq(v, u.on_morphism(f))),
                    )?;
                }
            }
        }
        quotients.push(qb.finish());
    }
    coend_presheaf(
        q_cat,
        quotients,
        |_, (p, xi, v)| {
            Token::tuple(vec![
                Token::name(o_cat.object(*p)),
                x.set(*p)[*xi].clone(),
                q_cat.mor_token(*v),
            ])
        },
        |h, (p, xi, v)| Ok((*p, *xi, q_cat.seq(h, *v))),
    )
}

/// `u^*(B)(o; w) = B(u(o); u(w))`.
pub fn pullback_table(u: &CatFunctor, b: &Table) -> Result<CoendTable<usize>> {
    same_base(u.target(), b.base(), "pullback")?;
    let perm = |o: usize, w: &[usize], s: &FinMap, &i: &usize| {
        Ok(b.apply_perm(u.on_object(o), &u.on_word(w), s, i)?.1)
    };
    build_table(
        u.source(),
        b.max_len(),
        Presentation {
            ground: &|o, w| cell_range(b, u.on_object(o), &u.on_word(w)),
            relations: &|_, _| Ok(Vec::new()),
            name: &|o, w, &i| b.cell(u.on_object(o), &u.on_word(w))[i].clone(),
            left: &|f, w, &i| Ok(b.apply_left(u.on_morphism(f), &u.on_word(w), i)),
            right: &|o, w, pos, g, &i| {
                Ok(
                    b.apply_right(u.on_object(o), &u.on_word(w), pos, u.on_morphism(g), i)
                        .1,
                )
            },
            perm: if b.is_symmetric() { Some(&perm) } else { None },
        },
    )
}

/// Key of a pushed-forward cell: `p`, `p⃗`, `a ∈ A(p; p⃗)`, `v: q -> u(p)`,
/// and `v_i: u(p_i) -> w_i`.
pub type PushKey = (usize, Word, usize, usize, Vec<usize>);

/// `u_!(A)(q; w) = ∫^{p, p⃗} A(p; p⃗) × Q(q, u(p)) × M(Q)(u(p⃗), w)`.
pub fn pushforward_table(u: &CatFunctor, a: &Table) -> Result<CoendTable<PushKey>> {
    same_base(u.source(), a.base(), "pushforward")?;
    let (o_cat, q_cat) = (u.source().clone(), u.target().clone());
    let inner = o_cat.words(a.max_len());
    let gens = right_generators(&o_cat, &inner);
    build_table(
        &q_cat,
        a.max_len(),
        Presentation {
            ground: &|q, w| {
                let mut out = Vec::new();
                for p in 0..o_cat.object_count() {
                    for pw in inner.iter().filter(|pw| pw.len() == w.len()) {
                        let vss = q_cat.hom_tuples(&u.on_word(pw), w);
                        for ai in cell_range(a, p, pw) {
                            for &v in q_cat.hom(q, u.on_object(p)) {
                                for vs in &vss {
                                    out.push((p, pw.clone(), ai, v, vs.clone()));
                                }
                            }
                        }
                    }
                }
                out
            },
            relations: &|q, w| {
                let mut out = Vec::new();
                for f in o_cat.non_identities() {
                    let (p1, p2) = (o_cat.morphism(f).source, o_cat.morphism(f).target);
                    for pw in inner.iter().filter(|pw| pw.len() == w.len()) {
                        let vss = q_cat.hom_tuples(&u.on_word(pw), w);
                        for ai in cell_range(a, p2, pw) {
                            for &v in q_cat.hom(q, u.on_object(p1)) {
                                for vs in &vss {
                                    out.push((
                                        (p1, pw.clone(), a.apply_left(f, pw, ai), v, vs.clone()),
                                        (
                                            p2,
                                            pw.clone(),
                                            ai,
                                            q_cat.seq(v, u.on_morphism(f)),
                                            vs.clone(),
                                        ),
                                    ));
                                }
                            }
                        }
                    }
                }
                for (pw, i, g) in gens.iter().filter(|(pw, _, _)| pw.len() == w.len()) {
                    let mut pw2 = pw.clone();
                    pw2[*i] = o_cat.morphism(*g).target;
                    let vss = q_cat.hom_tuples(&u.on_word(&pw2), w);
                    for p in 0..o_cat.object_count() {
                        for ai in cell_range(a, p, pw) {
                            let (_, a2) = a.apply_right(p, pw, *i, *g, ai);
                            for &v in q_cat.hom(q, u.on_object(p)) {
                                for vs2 in &vss {
                                    let mut vs = vs2.clone();
                                    vs[*i] = q_cat.seq(u.on_morphism(*g), vs2[*i]);
                                    out.push((
                                        (p, pw2.clone(), a2, v, vs2.clone()),
                                        (p, pw.clone(), ai, v, vs),
                                    ));
                                }
                            }
                        }
                    }
                }
                Ok(out)
            },
            name: &|_, _, (p, pw, ai, v, vs)| {
                let mut parts = vec![a.cell(*p, pw)[*ai].clone(), q_cat.mor_token(*v)];
                parts.extend(vs.iter().map(|&x| q_cat.mor_token(x)));
                Token::class(Token::tuple(parts))
            },
            left: &|h, _, (p, pw, ai, v, vs)| {
                Ok((*p, pw.clone(), *ai, q_cat.seq(h, *v), vs.clone()))
            },
            right: &|_, _, k, g, (p, pw, ai, v, vs)| {
                let mut vs = vs.clone();
                vs[k] = q_cat.seq(vs[k], g);
                Ok((*p, pw.clone(), *ai, *v, vs))
            },
            perm: None,
        },
    )
}

/// `(u_!(A) ⋆ X)(q) ≅ u_!(A ⋆ u^*(X))(q)` by `(a, v, v⃗, x) |-> (a, v, v⃗^*(x))`.
/// Returns the number of matched classes.
pub fn check_supine(u: &CatFunctor, a: &Table, x: &Presheaf) -> Result<usize> {
    let ua = pushforward_table(u, a)?;
    let lhs = act_cat(&ua.table, x)?;
    let ux = pullback_presheaf(u, x)?;
    let inner = act_cat(a, &ux)?;
    let rhs = pushforward_presheaf(u, &inner.presheaf)?;
    let mut total = 0;
    for q in 0..u.target().object_count() {
        let lq = lhs.quotient(q);
        let mut pairs = Vec::new();
        for k in lq.elements() {
            let (w, c, xs) = k;
            for (p, pw, ai, v, vs) in ua.quotient(q, w).members(*c) {
                let zs = xs
                    .iter()
                    .zip(vs)
                    .map(|(&xi, &vi)| x.restrict(vi, xi))
                    .collect();
                let y = inner.class_of(*p, &(pw.clone(), *ai, zs))?;
                pairs.push((
                    lq.class_of(k).expect("ground"),
                    rhs.class_of(q, &(*p, y, *v))?,
                ));
            }
        }
        total += bijection_witness(
            pairs,
            lq.class_count(),
            rhs.quotient(q).class_count(),
            "supine comparison",
        )?
        .map
        .len();
    }
    Ok(total)
}

/// `(u^*(B) ⋆ u^*(Y))(o) ≅ (B ⋆ u_! u^*(Y))(u(o))` by inserting identities.
/// Returns the number of matched classes.
pub fn check_prone(u: &CatFunctor, b: &Table, y: &Presheaf) -> Result<usize> {
    let ub = pullback_table(u, b)?;
    let uy = pullback_presheaf(u, y)?;
    let lhs = act_cat(&ub.table, &uy)?;
    let puy = pushforward_presheaf(u, &uy)?;
    let rhs = act_cat(b, &puy.presheaf)?;
    let q_cat = u.target();
    let mut total = 0;
    for o in 0..u.source().object_count() {
        let lq = lhs.quotient(o);
        let uo = u.on_object(o);
        let mut pairs = Vec::new();
        for k in lq.elements() {
            let (w, bi, ys) = k;
            let uw = u.on_word(w);
            let zs = ys
                .iter()
                .enumerate()
                .map(|(i, &yi)| puy.class_of(uw[i], &(w[i], yi, q_cat.identity(uw[i]))))
                .collect::<Result<Vec<_>>>()?;
            pairs.push((
                lq.class_of(k).expect("ground"),
                rhs.class_of(uo, &(uw, *ub.key(o, w, *bi), zs))?,
            ));
        }
        total += bijection_witness(
            pairs,
            lq.class_count(),
            rhs.quotient(uo).class_count(),
            "prone comparison",
        )?
        .map
        .len();
    }
    Ok(total)
}

/// `I ⊗ B ≅ B ≅ B ⊗ I` by restriction and extension along the unit's
/// morphisms. Returns the number of matched elements.
pub fn check_tensor_unit(b: &Table) -> Result<usize> {
    let unit = unit_table(b.base(), b.max_len())?;
    let left = tensor_cat(&unit.table, b)?;
    let right = tensor_cat(b, &unit.table)?;
    let mut total = 0;
    for ((o, w), cell) in b.cells() {
        let lq = left.quotient(*o, w);
        let pairs: Vec<(usize, usize)> = lq
            .elements()
            .iter()
            .map(|k| {
                let (p, hi, _, bs) = k;
                let h = *unit.key(*o, p, *hi);
                (lq.class_of(k).expect("ground"), b.apply_left(h, w, bs[0]))
            })
            .collect();
        total += bijection_witness(pairs, lq.class_count(), cell.len(), "left unitor")?
            .map
            .len();
        let rq = right.quotient(*o, w);
        let pairs: Vec<(usize, usize)> = rq
            .elements()
            .iter()
            .map(|k| {
                let (p, ai, _, hs) = k;
                let gs: Vec<usize> = hs
                    .iter()
                    .enumerate()
                    .map(|(i, &hi)| *unit.key(p[i], &w[i..=i], hi))
                    .collect();
                (
                    rq.class_of(k).expect("ground"),
                    b.apply_componentwise(*o, p, &gs, *ai).1,
                )
            })
            .collect();
        total += bijection_witness(pairs, rq.class_count(), cell.len(), "right unitor")?
            .map
            .len();
    }
    Ok(total)
}

/// `(A ⊗ B) ⊗ C ≅ A ⊗ (B ⊗ C)` by regrouping blocks. Under truncation the
/// right side is restricted to classes whose total middle word fits.
pub fn check_tensor_assoc(a: &Table, b: &Table, c: &Table) -> Result<usize> {
    let ab = tensor_cat(a, b)?;
    let l = tensor_cat(&ab.table, c)?;
    let bc = tensor_cat(b, c)?;
    let r = tensor_cat(a, &bc.table)?;
    let max_len = l.table.max_len();
    let mut total = 0;
    for ((o, w), _) in l.table.cells() {
        let lq = l.quotient(*o, w);
        let rq = r.quotient(*o, w);
        let middle = |k: &TensorKey| -> usize {
            let (p, _, lens, bcs) = k;
            let ws = blocks(w, lens);
            bcs.iter()
                .enumerate()
                .map(|(i, &x)| bc.key(p[i], &ws[i], x).0.len())
                .sum()
        };
        let kept: Vec<usize> = (0..rq.class_count())
            .filter(|&cl| middle(rq.representative(cl)) <= max_len)
            .collect();
        let slot: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &cl)| (cl, i)).collect();
        let mut pairs = Vec::new();
        for k in lq.elements() {
            let (rw, abi, lens2, cs) = k;
            let ws = blocks(w, lens2);
            for (p, ai, lens1, bs) in ab.quotient(*o, rw).members(*abi) {
                let mut at = 0;
                let mut new_lens = Vec::new();
                let mut bcs = Vec::new();
                for (i, &len) in lens1.iter().enumerate() {
                    let segment: Word = ws[at..at + len].concat();
                    let inner_lens: Vec<usize> = ws[at..at + len].iter().map(Vec::len).collect();
                    let key = (
                        rw[at..at + len].to_vec(),
                        bs[i],
                        inner_lens,
                        cs[at..at + len].to_vec(),
                    );
                    bcs.push(bc.class_of(p[i], &segment, &key)?);
                    new_lens.push(segment.len());
                    at += len;
                }
                let cl = r.class_of(*o, w, &(p.clone(), *ai, new_lens, bcs))?;
                let j = *slot
                    .get(&cl)
                    .ok_or_else(|| Error::Validation("associator leaves the truncation".into()))?;
                pairs.push((lq.class_of(k).expect("ground"), j));
            }
        }
        total += bijection_witness(pairs, lq.class_count(), kept.len(), "associator")?
            .map
            .len();
    }
    Ok(total)
}

/// `r(A ⊗ B)(X) ≅ r(A)(r(B)(X))` and `r(I)(X) ≅ X`. Under truncation the
/// right side is restricted to classes whose total word fits.
pub fn check_rep_monoidal(a: &Table, b: &Table, x: &Presheaf) -> Result<usize> {
    let ab = tensor_cat(a, b)?;
    let lhs = act_cat(&ab.table, x)?;
    let bx = act_cat(b, x)?;
    let rhs = act_cat(a, &bx.presheaf)?;
    let max_len = ab.table.max_len();
    let cat = a.base().clone();
    let mut total = 0;
    for o in 0..cat.object_count() {
        let lq = lhs.quotient(o);
        let rq = rhs.quotient(o);
        let inner_len = |k: &ActKey| -> usize {
            let (p, _, ys) = k;
            ys.iter()
                .enumerate()
                .map(|(i, &y)| bx.quotient(p[i]).representative(y).0.len())
                .sum()
        };
        let kept: Vec<usize> = (0..rq.class_count())
            .filter(|&cl| inner_len(rq.representative(cl)) <= max_len)
            .collect();
        let slot: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &cl)| (cl, i)).collect();
        let mut pairs = Vec::new();
        for k in lq.elements() {
            let (w, abi, xs) = k;
            for (p, ai, lens, bs) in ab.quotient(o, w).members(*abi) {
                let ws = blocks(w, lens);
                let xss = blocks(xs, lens);
                let ys = (0..p.len())
                    .map(|i| bx.class_of(p[i], &(ws[i].clone(), bs[i], xss[i].clone())))
                    .collect::<Result<Vec<_>>>()?;
                let cl = rhs.class_of(o, &(p.clone(), *ai, ys))?;
                let j = *slot
                    .get(&cl)
                    .ok_or_else(|| Error::Validation("comparison leaves the truncation".into()))?;
                pairs.push((lq.class_of(k).expect("ground"), j));
            }
        }
        total += bijection_witness(pairs, lq.class_count(), kept.len(), "monoidal comparison")?
            .map
            .len();
    }
    let unit = unit_table(&cat, a.max_len())?;
    let ix = act_cat(&unit.table, x)?;
    for o in 0..cat.object_count() {
        let q = ix.quotient(o);
        let pairs: Vec<(usize, usize)> = q
            .elements()
            .iter()
            .map(|k| {
                let (w, hi, xs) = k;
                (
                    q.class_of(k).expect("ground"),
                    x.restrict(*unit.key(o, w, *hi), xs[0]),
                )
            })
            .collect();
        total += bijection_witness(pairs, q.class_count(), x.size(o), "unit comparison")?
            .map
            .len();
    }
    Ok(total)
}

/// `∫^j T(j, j)` for a bifunctor `T: J^op × J -> FinSet` given by its sets
/// and its two actions; elements are keyed by `(j, t)`.
pub fn coend(
    cat: &FinCat,
    elems: &dyn Fn(usize, usize) -> Vec<Token>,
    left: &dyn Fn(usize, usize, &Token) -> Token,
    right: &dyn Fn(usize, usize, &Token) -> Token,
) -> Result<Quotient<(usize, Token)>> {
    let ground: Vec<(usize, Token)> = (0..cat.object_count())
        .flat_map(|j| elems(j, j).into_iter().map(move |t| (j, t)))
        .collect();
    let mut qb = QuotientBuilder::new(ground);
    for f in cat.non_identities() {
        let (a, b) = (cat.morphism(f).source, cat.morphism(f).target);
        for t in elems(b, a) {
            qb.identify(&(a, left(f, a, &t)), &(b, right(b, f, &t)))?;
        }
    }
    Ok(qb.finish())
}

/// The co-Yoneda isomorphisms `∫^j Hom(j, k) × X(j) ≅ X(k)` for every
/// representable and the terminal covariant `X`, and `∫^j X(j) × Hom(k, j)
/// ≅ X(k)` for every representable presheaf. Returns the number checked.
pub fn check_co_yoneda(cat: &FinCat) -> Result<usize> {
    let n = cat.object_count();
    let idx = |t: &Token| -> usize {
        match t {
            Token::Name(s) => cat.morphism_index(s).expect("morphism name"),
            _ => unreachable!("morphism tokens are names"),
        }
    };
    let parts = |t: &Token| -> (Token, Token) {
        match t {
            Token::Tuple(ps) => (ps[0].clone(), ps[1].clone()),
            _ => unreachable!("pairs are tuples"),
        }
    };
    let pair = |a: Token, b: Token| Token::tuple(vec![a, b]);
    let mut checked = 0;
    for k in 0..n {
        // Covariant X: Hom(m, -) for each m, then the terminal functor.
        for m in 0..=n {
            let xs = |j: usize| -> Vec<Token> {
                if m == n {
                    vec![Token::name("*")]
                } else {
                    cat.hom(m, j).iter().map(|&f| cat.mor_token(f)).collect()
                }
            };
            let xmap = |g: usize, t: &Token| -> Token {
                if m == n {
                    t.clone()
                } else {
                    cat.mor_token(cat.seq(idx(t), g))
                }
            };
            let q = coend(
                cat,
                &|j, j2| {
                    let mut out = Vec::new();
                    for &f in cat.hom(j, k) {
                        for x in xs(j2) {
                            out.push(pair(cat.mor_token(f), x));
                        }
                    }
                    out
                },
                &|f, _, t| {
                    let (h, x) = parts(t);
                    pair(cat.mor_token(cat.seq(f, idx(&h))), x)
                },
                &|_, g, t| {
                    let (h, x) = parts(t);
                    pair(h, xmap(g, &x))
                },
            )?;
            let target = xs(k);
            let pairs = (0..q.elements().len()).map(|i| {
                let (_, t) = &q.elements()[i];
                let (f, x) = parts(t);
                let image = xmap(idx(&f), &x);
                (
                    q.class_of_index(i),
                    target
                        .iter()
                        .position(|y| *y == image)
                        .expect("image in X(k)"),
                )
            });
            checked += bijection_witness(
                pairs.collect::<Vec<_>>(),
                q.class_count(),
                target.len(),
                "co-Yoneda",
            )?
            .map
            .len();
        }
        // Contravariant X = Hom(-, m).
        for m in 0..n {
            let q = coend(
                cat,
                &|j, j2| {
                    let mut out = Vec::new();
                    for &x in cat.hom(j, m) {
                        for &f in cat.hom(k, j2) {
                            out.push(pair(cat.mor_token(x), cat.mor_token(f)));
                        }
                    }
                    out
                },
                &|f, _, t| {
                    let (x, h) = parts(t);
                    pair(cat.mor_token(cat.seq(f, idx(&x))), h)
                },
                &|_, g, t| {
                    let (x, h) = parts(t);
                    pair(x, cat.mor_token(cat.seq(idx(&h), g)))
                },
            )?;
            let target = cat.hom(k, m);
            let pairs = (0..q.elements().len()).map(|i| {
                let (_, t) = &q.elements()[i];
                let (x, f) = parts(t);
                let image = cat.seq(idx(&f), idx(&x));
                (
                    q.class_of_index(i),
                    target
                        .iter()
                        .position(|&y| y == image)
                        .expect("image in Hom(k, m)"),
                )
            });
            checked += bijection_witness(
                pairs.collect::<Vec<_>>(),
                q.class_count(),
                target.len(),
                "co-Yoneda",
            )?
            .map
            .len();
        }
    }
    Ok(checked)
}

/// Hom-set size matrices up to relabelling objects, with at most `extra`
/// non-identity morphisms in total.
fn hom_count_matrices(n: usize, extra: usize) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    let mut cur = vec![0; n * n];
    fn go(i: usize, left: usize, cur: &mut Vec<usize>, all: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            all.push(cur.clone());
            return;
        }
        for c in 0..=left {
            cur[i] = c;
            go(i + 1, left - c, cur, all);
        }
        cur[i] = 0;
    }
    go(0, extra, &mut cur, &mut all);
    let perms = permutations(n);
    all.into_iter()
        .filter(|m| {
            perms.iter().all(|p| {
                let relabelled: Vec<usize> = (0..n * n)
                    .map(|ij| m[p.apply(ij / n) * n + p.apply(ij % n)])
                    .collect();
                *m <= relabelled
            })
        })
        .collect()
}

const UNSET: usize = usize::MAX;

/// Backtracking search over composition tables with fixed hom-set sizes.
struct TableSearch {
    m: usize,
    /// The first `n` morphisms are the identities.
    n: usize,
    /// Per morphism, the previous non-identity in the same hom set.
    previous: Vec<Option<usize>>,
    /// `t[f * m + g]` is `g ∘ f`, or `UNSET`.
    t: Vec<usize>,
    cells: Vec<(usize, usize)>,
    candidates: Vec<Vec<usize>>,
}

impl TableSearch {
    fn get(&self, f: usize, g: usize) -> usize {
        self.t[f * self.m + g]
    }

    fn lookup(&self, f: usize, g: usize) -> usize {
        if f == UNSET || g == UNSET {
            UNSET
        } else {
            self.get(f, g)
        }
    }

    /// An isomorphism invariant of an endomorphism: idempotent, involution,
    /// or neither.
    fn square_code(&self, f: usize) -> usize {
        match self.get(f, f) {
            s if s == f => 0,
            s if s < self.n => 1,
            _ => 2,
        }
    }

    /// Associativity on every triple that involves the cell `(f, g)`, and
    /// labels within a hom set sorted by their square code.
    fn consistent_at(&self, f: usize, g: usize) -> bool {
        let m = self.m;
        let h = self.get(f, g);
        if f == g {
            if let Some(e) = self.previous[f] {
                if self.square_code(e) > self.square_code(f) {
                    return false;
                }
            }
        }
        let agree = |l: usize, r: usize| l == UNSET || r == UNSET || l == r;
        for z in 0..m {
            // (f g) z against f (g z).
            if !agree(self.lookup(h, z), self.lookup(f, self.lookup(g, z))) {
                return false;
            }
        }
        for x in 0..m {
            // (x f) g against x (f g).
            if !agree(self.lookup(self.lookup(x, f), g), self.lookup(x, h)) {
                return false;
            }
            for y in 0..m {
                // (x y) g with x y = f, against x (y g).
                if self.get(x, y) == f && !agree(h, self.lookup(x, self.lookup(y, g))) {
                    return false;
                }
                // f (x y) with x y = g, against (f x) y.
                if self.get(x, y) == g && !agree(self.lookup(self.lookup(f, x), y), h) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, i: usize, emit: &mut dyn FnMut(&[usize])) {
        if i == self.cells.len() {
            emit(&self.t);
            return;
        }
        let (f, g) = self.cells[i];
        for k in 0..self.candidates[i].len() {
            self.t[f * self.m + g] = self.candidates[i][k];
            if self.consistent_at(f, g) {
                self.run(i + 1, emit);
            }
        }
        self.t[f * self.m + g] = UNSET;
    }
}

/// Relabellings of a category shape: object permutations fixing the hom
/// sizes, combined with bijections inside each hom set that fix identities.
fn relabellings(n: usize, morphisms: &[Morphism]) -> Vec<Vec<usize>> {
    let m = morphisms.len();
    let mut homs = vec![vec![Vec::new(); n]; n];
    for (f, mm) in morphisms.iter().enumerate() {
        homs[mm.source][mm.target].push(f);
    }
    let mut out = Vec::new();
    for pi in permutations(n) {
        if (0..n).any(|a| (0..n).any(|b| homs[a][b].len() != homs[pi.apply(a)][pi.apply(b)].len()))
        {
            continue;
        }
        let mut partial = vec![vec![UNSET; m]];
        for a in 0..n {
            for b in 0..n {
                let (from, to) = (&homs[a][b], &homs[pi.apply(a)][pi.apply(b)]);
                let mut next = Vec::new();
                for rho in &partial {
                    for s in permutations(from.len()) {
                        let mut r = rho.clone();
                        let mut ok = true;
                        for (k, &f) in from.iter().enumerate() {
                            r[f] = to[s.apply(k)];
                            ok &= f >= n || r[f] == pi.apply(f);
                        }
                        if ok {
                            next.push(r);
                        }
                    }
                }
                partial = next;
            }
        }
        out.extend(partial);
    }
    out
}

/// The least relabelled table, compared entry by entry so that most
/// relabellings are rejected after a few entries.
fn canonical_key(t: &[usize], m: usize, relabellings: &[(Vec<usize>, Vec<usize>)]) -> Vec<usize> {
    let entry = |(rho, inv): &(Vec<usize>, Vec<usize>), p: usize| {
        let h = t[inv[p / m] * m + inv[p % m]];
        if h == UNSET {
            UNSET
        } else {
            rho[h]
        }
    };
    let mut best: Vec<usize> = (0..m * m).map(|p| entry(&relabellings[0], p)).collect();
    for r in &relabellings[1..] {
        for p in 0..m * m {
            let e = entry(r, p);
            if e > best[p] {
                break;
            }
            if e < best[p] {
                best[p] = e;
                for (q, slot) in best.iter_mut().enumerate().skip(p + 1) {
                    *slot = entry(r, q);
                }
                break;
            }
        }
    }
    best
}

/// Every composition table on the given hom-set sizes, one per
/// isomorphism class.
fn categories_with_counts(n: usize, counts: &[usize]) -> Vec<FinCat> {
    let names = ["a", "b", "c", "d", "e", "f"];
    let objects: Vec<String> = (0..n).map(|o| names[o % names.len()].to_string()).collect();
    let mut morphisms: Vec<Morphism> = objects
        .iter()
        .enumerate()
        .map(|(o, s)| Morphism {
            name: format!("1_{s}"),
            source: o,
            target: o,
        })
        .collect();
    for a in 0..n {
        for b in 0..n {
            for _ in 0..counts[a * n + b] {
                let k = morphisms.len() - n + 1;
                morphisms.push(Morphism {
                    name: format!("m{k}"),
                    source: a,
                    target: b,
                });
            }
        }
    }
    let m = morphisms.len();
    let mut t = vec![UNSET; m * m];
    let mut cells = Vec::new();
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    for f in 0..m {
        for g in 0..m {
            if morphisms[f].target != morphisms[g].source {
                continue;
            }
            if f < n {
                t[f * m + g] = g;
            } else if g < n {
                t[f * m + g] = f;
            } else {
                cells.push((f, g));
                let (a, c) = (morphisms[f].source, morphisms[g].target);
                candidates.push(
                    (0..m)
                        .filter(|&h| morphisms[h].source == a && morphisms[h].target == c)
                        .collect(),
                );
            }
        }
    }
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by_key(|&i| (cells[i].0.max(cells[i].1), cells[i]));
    let cells: Vec<(usize, usize)> = order.iter().map(|&i| cells[i]).collect();
    let candidates: Vec<Vec<usize>> = order.iter().map(|&i| candidates[i].clone()).collect();
    let relabel: Vec<(Vec<usize>, Vec<usize>)> = relabellings(n, &morphisms)
        .into_iter()
        .map(|rho| {
            let mut inv = vec![0; m];
            for (f, &r) in rho.iter().enumerate() {
                inv[r] = f;
            }
            (rho, inv)
        })
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let previous = (0..m)
        .map(|f| {
            (f > n
                && morphisms[f - 1].source == morphisms[f].source
                && morphisms[f - 1].target == morphisms[f].target)
                .then(|| f - 1)
        })
        .collect();
    let mut search = TableSearch {
        m,
        n,
        previous,
        t,
        cells,
        candidates,
    };
    search.run(0, &mut |t| {
        if seen.insert(canonical_key(t, m, &relabel)) {
            let cat = FinCat::new(
                objects.clone(),
                morphisms.clone(),
                (0..n).collect(),
                |f, g| {
                    let h = t[f * m + g];
                    (h != UNSET).then_some(h)
                },
            )
            .expect("the search keeps the category laws");
            out.push(cat);
        }
    });
    out
}

/// Every category with at least one and at most `max_objects` objects and
/// at most `max_morphisms` morphisms, one per isomorphism class.
pub fn enumerate_categories(max_objects: usize, max_morphisms: usize) -> Vec<FinCat> {
    let shapes: Vec<(usize, Vec<usize>)> = (1..=max_objects.min(max_morphisms))
        .flat_map(|n| {
            hom_count_matrices(n, max_morphisms - n)
                .into_iter()
                .map(move |c| (n, c))
        })
        .collect();
    exec::map(Strategy::Parallel, &shapes, |(n, c)| {
        categories_with_counts(*n, c)
    })
    .into_iter()
    .flatten()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::em::{free_algebra, trivial_species};
    use crate::monads::{Bounds, MonadTag};

    fn arrow() -> Arc<FinCat> {
        Arc::new(FinCat::walking_arrow())
    }

    #[test]
    fn rejects_non_associative_tables() {
        // mul[g][f] is g ∘ f; the first table is the monoid {1, e, f} with xy = x for x ≠ 1.
        let mul = vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]];
        assert!(FinCat::monoid(&["1", "e", "f"], 0, &mul).is_ok());
        let bad = vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 1, 1]];
        assert!(FinCat::monoid(&["1", "e", "f"], 0, &bad).is_err());
    }

    #[test]
    fn monoids_up_to_isomorphism() {
        // Numbers of monoids of order 1..5 up to isomorphism: 1, 2, 7, 35, 228.
        let mut by_size = BTreeMap::new();
        for c in enumerate_categories(1, 5) {
            *by_size.entry(c.morphisms().len()).or_insert(0) += 1;
        }
        assert_eq!(
            by_size.into_values().collect::<Vec<usize>>(),
            vec![1, 2, 7, 35, 228]
        );
    }

    #[test]
    fn two_object_shapes() {
        // Two objects, at most three morphisms: discrete, the walking arrow, and one
        // extra endomorphism e with e∘e = 1 or e∘e = e.
        let cats = enumerate_categories(2, 3);
        assert_eq!(cats.iter().filter(|c| c.object_count() == 2).count(), 4);
    }

    #[test]
    fn coend_over_walking_arrow_glues_the_two_points() {
        let cat = FinCat::walking_arrow();
        let q = coend(
            &cat,
            &|_, _| vec![Token::name("*")],
            &|_, _, t| t.clone(),
            &|_, _, t| t.clone(),
        )
        .unwrap();
        assert_eq!(q.elements().len(), 2);
        assert_eq!(q.class_count(), 1);
        assert!(check_co_yoneda(&cat).unwrap() > 0);
    }

    #[test]
    fn trivial_species_over_the_terminal_category() {
        let t = table_from_species(&trivial_species(2, "e")).unwrap();
        let v = presheaf_from_slice(&Slice::with_sizes(&Colours::single(), &[3]));
        let wit = check_analytic_equivalence(&t.table, &v).unwrap();
        assert_eq!(wit.sizes, vec![6]);
    }

    #[test]
    fn walking_arrow_one_generator() {
        let cat = arrow();
        let g = generated_table(&cat, 2, &[(1, vec![0, 1])]).unwrap();
        let s = symmetrize_cat(&g.table).unwrap();
        for x in [
            Presheaf::representable(&cat, 0),
            Presheaf::representable(&cat, 1),
            Presheaf::terminal(&cat),
        ] {
            let wit = check_analytic_equivalence(&s.table, &x).unwrap();
            let plain = act_cat(&g.table, &x).unwrap();
            assert_eq!(wit.sizes, plain.presheaf.sizes());
        }
    }

    #[test]
    fn discrete_comparisons() {
        let c = Colours::single();
        let a = Signature::new(
            c.clone(),
            vec![Op::atom("m", 0, vec![0, 0]), Op::atom("e", 0, vec![])],
        )
        .unwrap();
        assert!(check_discrete_tensor(&a, &a, 3).unwrap() > 0);
        let x = Slice::with_sizes(&c, &[2]);
        assert_eq!(check_discrete_act(&a, &x, 2).unwrap(), 5);
        let fa = free_algebra(MonadTag::S, &a, Bounds::new(2));
        assert!(check_discrete_lan(&fa, &x).unwrap() > 0);
    }

    #[test]
    fn monoidal_structure_on_the_walking_arrow() {
        let cat = arrow();
        let a = generated_table(&cat, 2, &[(1, vec![0])]).unwrap();
        let b = generated_table(&cat, 2, &[(0, vec![1, 1]), (1, vec![])]).unwrap();
        assert!(check_tensor_unit(&a.table).unwrap() > 0);
        assert!(check_tensor_unit(&b.table).unwrap() > 0);
        assert!(check_tensor_assoc(&a.table, &b.table, &a.table).unwrap() > 0);
        for x in [Presheaf::representable(&cat, 0), Presheaf::terminal(&cat)] {
            assert!(check_rep_monoidal(&a.table, &b.table, &x).unwrap() > 0);
            assert!(check_triangles(&b.table, &x).unwrap() > 0);
        }
        assert!(check_u_representation(&b.table).unwrap() > 0);
    }

    #[test]
    fn supine_and_prone_along_all_functors() {
        let cat = arrow();
        let disc = Arc::new(FinCat::discrete(["p", "q"]).unwrap());
        let a_disc = generated_table(&disc, 2, &[(0, vec![1])]).unwrap();
        let b = generated_table(&cat, 2, &[(1, vec![0]), (0, vec![])]).unwrap();
        for u in CatFunctor::enumerate(&disc, &cat) {
            for x in [
                Presheaf::representable(&cat, 0),
                Presheaf::representable(&cat, 1),
            ] {
                check_supine(&u, &a_disc.table, &x).unwrap();
                check_prone(&u, &b.table, &x).unwrap();
            }
        }
        let u = CatFunctor::collapse(&cat);
        let t = u.target().clone();
        let bt = generated_table(&t, 2, &[(0, vec![0])]).unwrap();
        check_supine(&u, &b.table, &Presheaf::terminal(&t)).unwrap();
        check_prone(&u, &bt.table, &Presheaf::terminal(&t)).unwrap();
    }
}
