//! The decoration monads F (all index maps), R (surjections) and S
//! (bijections) on coloured signatures: unit, multiplication, the lax
//! monoidal structure and the inclusions S -> R -> F.
//!
//! A decorated operation `(a, xi, beta)` is an [`Op`] with label
//! `Dec(a, xi)`, output `out(a)` and input word `beta`, where
//! `xi: (m] -> (n]`, `m = arity(a)` and `beta ∘ xi = ins(a)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{enumerate_homs, FinMap, HomKind};
use crate::signatures::{product, Colour, ColourMap, Label, Op, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MonadTag {
    F,
    S,
    R,
}

impl MonadTag {
    pub const ALL: [MonadTag; 3] = [MonadTag::F, MonadTag::S, MonadTag::R];

    /// The index maps allowed as decorations.
    pub fn kind(self) -> HomKind {
        match self {
            MonadTag::F => HomKind::All,
            MonadTag::S => HomKind::Bijections,
            MonadTag::R => HomKind::Surjections,
        }
    }

    /// Whether `self` is a submonad of `other`.
    pub fn is_submonad_of(self, other: MonadTag) -> bool {
        matches!(
            (self, other),
            (MonadTag::S, _)
                | (MonadTag::R, MonadTag::R)
                | (MonadTag::R, MonadTag::F)
                | (MonadTag::F, MonadTag::F)
        )
    }
}

impl fmt::Display for MonadTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MonadTag::F => "F",
            MonadTag::S => "S",
            MonadTag::R => "R",
        };
        f.write_str(s)
    }
}

impl FromStr for MonadTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F" | "f" => Ok(MonadTag::F),
            "S" | "s" => Ok(MonadTag::S),
            "R" | "r" => Ok(MonadTag::R),
            _ => Err(Error::Input(format!(
                "unknown monad {s:?}; expected F, S or R"
            ))),
        }
    }
}

/// Enumeration bound: decorated operations are only enumerated up to this
/// target arity. The monads S and R never raise arity above that of the base
/// operation, so for them the bound only matters when base arities exceed it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_arity: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_arity: 4 }
    }
}

impl Bounds {
    pub fn new(max_arity: usize) -> Self {
        Bounds { max_arity }
    }
}

/// The decorated operation `(base, xi, target_in)`, checking typing.
pub fn decorate(base: &Op, xi: FinMap, target_in: Vec<Colour>) -> Result<Op> {
    if xi.source_size() != base.arity() || xi.target_size() != target_in.len() {
        return Err(Error::Input(format!(
            "decoration {xi:?} does not fit {base:?} with target word {target_in:?}"
        )));
    }
    if xi.pull(&target_in) != base.ins {
        return Err(Error::ColourMismatch(format!(
            "target word {target_in:?} composed with {xi:?} is not the input word of {base:?}"
        )));
    }
    Ok(dec_unchecked(base, xi, target_in))
}

fn dec_unchecked(base: &Op, xi: FinMap, ins: Vec<Colour>) -> Op {
    Op {
        label: Label::Dec(std::sync::Arc::new(base.clone()), xi),
        out: base.out,
        ins,
    }
}

/// Whether `d` is a decorated operation allowed by `tag`.
pub fn admits(tag: MonadTag, d: &Op) -> bool {
    d.as_dec().is_some_and(|(_, xi)| xi.is_kind(tag.kind()))
}

/// All decorations of `base` allowed by `tag` within `bounds`, over
/// `colours` colours; for F the slots outside the image of `xi` get every
/// colour.
pub fn decorations(tag: MonadTag, base: &Op, colours: usize, bounds: Bounds) -> Vec<Op> {
    let m = base.arity();
    let targets: Vec<usize> = match tag {
        MonadTag::S => vec![m],
        MonadTag::R => (0..=m).collect(),
        MonadTag::F => (0..=bounds.max_arity).collect(),
    };
    let all: Vec<Colour> = (0..colours).collect();
    let mut out = Vec::new();
    for n in targets.into_iter().filter(|&n| n <= bounds.max_arity) {
        for xi in enumerate_homs(tag.kind(), m, n) {
            let mut forced: Vec<Option<Colour>> = vec![None; n];
            let mut ok = true;
            for (i, &c) in base.ins.iter().enumerate() {
                match forced[xi.apply(i)] {
                    Some(d) if d != c => {
                        ok = false;
                        break;
                    }
                    _ => forced[xi.apply(i)] = Some(c),
                }
            }
            if !ok {
                continue;
            }
            let singles: Vec<Vec<Colour>> = forced
                .iter()
                .map(|f| f.map_or_else(|| all.clone(), |c| vec![c]))
                .collect();
            let refs: Vec<&Vec<Colour>> = singles.iter().collect();
            for word in product(&refs) {
                out.push(dec_unchecked(base, xi.clone(), word));
            }
        }
    }
    out
}

/// `T(A)`, truncated at `bounds.max_arity`.
pub fn apply_monad(tag: MonadTag, a: &Signature, bounds: Bounds) -> Signature {
    let n = a.colours().len();
    let ops = a
        .ops()
        .iter()
        .flat_map(|op| decorations(tag, op, n, bounds))
        .collect();
    Signature::from_distinct(a.colours().clone(), ops)
}

/// `eta(a) = (a, id, ins(a))`.
pub fn eta(a: &Op) -> Op {
    dec_unchecked(a, FinMap::identity(a.arity()), a.ins.clone())
}

/// `mu((a, xi, beta), zeta, gamma) = (a, zeta ∘ xi, gamma)`.
pub fn mu(d: &Op) -> Result<Op> {
    let (inner, zeta) = d.expect_dec()?;
    let (a, xi) = inner.expect_dec()?;
    Ok(dec_unchecked(a, xi.then(zeta)?, d.ins.clone()))
}

/// `T(f)(a, xi, beta) = (f(a), xi, u ∘ beta)` for a signature morphism `f`
/// over the colour map `u` (identity when `None`).
pub fn tmap(d: &Op, f: &dyn Fn(&Op) -> Result<Op>, u: Option<&ColourMap>) -> Result<Op> {
    let (a, xi) = d.expect_dec()?;
    let ins = match u {
        Some(u) => u.apply_word(&d.ins),
        None => d.ins.clone(),
    };
    decorate(&f(a)?, xi.clone(), ins)
}

/// `phi: T(A) ⊗ T(B) -> T(A ⊗ B)`:
/// `((a, xi, beta); (b_j, zeta_j, gamma_j)_j) |-> ((a; b_xi(1), ..., b_xi(m)), xi', gamma)`
/// where `xi'` is the block map of `xi` over the `zeta_j`.
pub fn phi(z: &Op) -> Result<Op> {
    let (top, children) = z.expect_pair()?;
    let (a, xi) = top.expect_dec()?;
    let mut bases = Vec::with_capacity(children.len());
    let mut blocks = Vec::with_capacity(children.len());
    for c in children {
        let (b, zeta) = c.expect_dec()?;
        bases.push(b);
        blocks.push(zeta.clone());
    }
    let picked: Vec<Op> = xi.values().iter().map(|&j| bases[j].clone()).collect();
    let inner = Op::pair(a, picked)?;
    let xi2 = xi.block_map(&blocks)?;
    decorate(&inner, xi2, z.ins.clone())
}

/// `phi0: I -> T(I)`, the unit of the lax structure; it is `eta` on `I`.
pub fn phi0(i: &Op) -> Result<Op> {
    if !i.is_unit() {
        return Err(Error::Input(format!("{i:?} is not a unit operation")));
    }
    Ok(eta(i))
}

/// The inclusion `from(A) -> to(A)` of decorated operations.
pub fn submonad_inclusion(from: MonadTag, to: MonadTag, d: &Op) -> Result<Op> {
    if from == to || !from.is_submonad_of(to) {
        return Err(Error::Input(format!(
            "{from} is not a proper submonad of {to}"
        )));
    }
    if !admits(from, d) {
        return Err(Error::Input(format!(
            "{d:?} is not an element of {from}(A)"
        )));
    }
    Ok(d.clone())
}

/// The evaluation `T(A) ⋆ X -> A ⋆ X`, `<(a, xi, beta), x> |-> <a, x ∘ xi>`.
pub fn evaluate(e: &crate::signatures::Elem) -> Result<crate::signatures::Elem> {
    let (d, xs) = e.expect_tuple()?;
    let (a, xi) = d.expect_dec()?;
    crate::signatures::Elem::tuple(a, xi.pull(xs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::permutations;
    use crate::signatures::{tensor, Colours};

    fn m_sig() -> Signature {
        Signature::new(Colours::single(), vec![Op::atom("m", 0, vec![0, 0])]).unwrap()
    }

    fn at_arity(s: &Signature, n: usize) -> usize {
        s.ops().iter().filter(|o| o.arity() == n).count()
    }

    #[test]
    fn monad_sizes_on_binary() {
        let b = Bounds::new(3);
        let f = apply_monad(MonadTag::F, &m_sig(), b);
        assert_eq!(at_arity(&f, 3), 9);
        let s = apply_monad(MonadTag::S, &m_sig(), b);
        assert_eq!(at_arity(&s, 2), 2);
        assert_eq!(s.len(), 2);
        let r = apply_monad(MonadTag::R, &m_sig(), b);
        assert_eq!(at_arity(&r, 1), 1);
        assert_eq!(at_arity(&r, 2), 2);
    }

    #[test]
    fn typed_f_colours_free_slots() {
        let cs = Colours::new(["a", "b"]).unwrap();
        let u = Op::atom("u", 0, vec![0]);
        let ds = decorations(MonadTag::F, &u, 2, Bounds::new(2));
        // n=1: 1 map; n=2: 2 maps, each leaving one slot free (2 colours)
        assert_eq!(ds.len(), 1 + 2 * 2);
        for d in &ds {
            let (_, xi) = d.as_dec().unwrap();
            assert_eq!(xi.pull(&d.ins), u.ins);
        }
        let names: Vec<String> = ds.iter().map(|d| d.name(&cs)).collect();
        assert!(names.contains(&"<u|1|a,b>".to_string()));
    }

    #[test]
    fn mu_examples() {
        let m = Op::atom("m", 0, vec![0, 0]);
        let d = eta(&m);
        assert_eq!(mu(&eta(&d)).unwrap(), d);
        let sw = decorate(&m, FinMap::swap2(), vec![0, 0]).unwrap();
        let sw2 = decorate(&sw, FinMap::swap2(), vec![0, 0]).unwrap();
        assert_eq!(mu(&sw2).unwrap(), d);
    }

    #[test]
    fn mu_on_s_is_group_multiplication() {
        let t = Op::atom("t", 0, vec![0; 3]);
        for s in permutations(3) {
            for z in permutations(3) {
                let inner = decorate(&t, s.clone(), vec![0; 3]).unwrap();
                let outer = decorate(&inner, z.clone(), vec![0; 3]).unwrap();
                let (_, xi) = mu(&outer)
                    .unwrap()
                    .as_dec()
                    .map(|(a, x)| (a.clone(), x.clone()))
                    .unwrap();
                assert_eq!(xi, crate::finset::compose(&s, &z).unwrap());
            }
        }
    }

    #[test]
    fn phi_with_identities_is_identity_decoration() {
        let m = Op::atom("m", 0, vec![0, 0]);
        let z = Op::pair(&eta(&m), vec![eta(&m), eta(&m)]).unwrap();
        let p = phi(&z).unwrap();
        let (base, xi) = p.as_dec().unwrap();
        assert!(xi.is_identity());
        assert_eq!(base, &Op::pair(&m, vec![m.clone(), m.clone()]).unwrap());
    }

    #[test]
    fn phi_swap_over_units() {
        let m = Op::atom("m", 0, vec![0, 0]);
        let i = Op::atom("i", 0, vec![0]);
        let top = decorate(&m, FinMap::swap2(), vec![0, 0]).unwrap();
        let z = Op::pair(&top, vec![eta(&i), eta(&i)]).unwrap();
        let (_, xi) = phi(&z)
            .unwrap()
            .as_dec()
            .map(|(a, x)| (a.clone(), x.clone()))
            .unwrap();
        assert_eq!(xi, FinMap::swap2());
    }

    #[test]
    fn phi_lands_in_tensor_of_monad_images() {
        let a = m_sig();
        let b = Bounds::new(4);
        let ta = apply_monad(MonadTag::S, &a, b);
        let src = tensor(&ta, &ta).unwrap();
        let tgt = apply_monad(MonadTag::S, &tensor(&a, &a).unwrap(), b);
        let idx = tgt.index();
        for z in src.ops() {
            assert!(idx.contains_key(&phi(z).unwrap()));
        }
    }

    #[test]
    fn inclusions() {
        let a = m_sig();
        let b = Bounds::new(2);
        let f = apply_monad(MonadTag::F, &a, b);
        let s = apply_monad(MonadTag::S, &a, b);
        assert_eq!(at_arity(&f, 2), 4);
        let img: Vec<Op> = s
            .ops()
            .iter()
            .map(|d| submonad_inclusion(MonadTag::S, MonadTag::F, d).unwrap())
            .collect();
        assert_eq!(img.len(), 2);
        assert!(img.iter().all(|d| f.ops().contains(d)));
        assert!(submonad_inclusion(MonadTag::F, MonadTag::S, &eta(&a.ops()[0])).is_err());
        assert!(apply_monad(MonadTag::S, &Signature::empty(Colours::single()), b).is_empty());
    }
}
