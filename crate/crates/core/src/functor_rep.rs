//! Polynomial and analytic functors evaluated on finite slice objects, the
//! natural transformations induced by Kleisli and algebra morphisms, and
//! pullback tests on their naturality squares.

use std::collections::HashMap;

use crate::em::{em_eval, Algebra, AlgebraMorphism, Evaluation};
use crate::error::{Error, Result};
use crate::kleisli::KleisliMorphism;
use crate::monads::evaluate;
use crate::signatures::{
    act, act_on_morphism, slice_family, Colours, Elem, Signature, Slice, SliceMap,
};

/// `A ⋆ X`.
pub fn eval_polynomial(a: &Signature, x: &Slice) -> Result<Slice> {
    act(a, x)
}

/// `A ⋆ h`.
pub fn eval_polynomial_on_morphism(a: &Signature, h: &SliceMap) -> Result<SliceMap> {
    act_on_morphism(a, h)
}

/// `X ⋆̈ V`.
pub fn eval_analytic(x: &Algebra, v: &Slice) -> Result<Slice> {
    Ok(em_eval(x, v)?.classes)
}

fn class_map(
    source: &Evaluation,
    target: &Evaluation,
    f: &dyn Fn(&Elem) -> Result<Elem>,
) -> Result<SliceMap> {
    let tgt = target.classes.index();
    let mut values = vec![None; source.len()];
    for e in source.ground.elems() {
        let c = source.quotient.class_of(e).expect("ground element");
        let img = tgt[&target.class_of(&f(e)?)?];
        match values[c] {
            None => values[c] = Some(img),
            Some(prev) if prev != img => {
                return Err(Error::IllDefined(format!(
                    "the class map depends on the representative at {e:?}"
                )))
            }
            _ => {}
        }
    }
    SliceMap::new(
        source.classes.clone(),
        target.classes.clone(),
        values
            .into_iter()
            .map(|v| v.expect("classes are non-empty"))
            .collect(),
    )
}

fn map_tuple(h: &SliceMap, e: &Elem) -> Result<Elem> {
    let idx = h.source.index();
    let (op, xs) = e.expect_tuple()?;
    let ys = xs
        .iter()
        .map(|x| h.target.elems()[h.apply(idx[x])].clone())
        .collect();
    Elem::tuple(op, ys)
}

/// `X ⋆̈ h` on classes.
pub fn eval_analytic_on_morphism(x: &Algebra, h: &SliceMap) -> Result<SliceMap> {
    let s = em_eval(x, &h.source)?;
    let t = em_eval(x, &h.target)?;
    class_map(&s, &t, &|e| map_tuple(h, e))
}

/// The component at `x` of the transformation `A ⋆ - => B ⋆ -` induced by a
/// Kleisli morphism over the identity colour map:
/// `<a, xs> |-> <b, xs ∘ ξ>` where `f(a) = (b, ξ)`.
pub fn nat_from_kleisli(f: &KleisliMorphism, x: &Slice) -> Result<SliceMap> {
    if !f.colour_map().is_identity() {
        return Err(Error::Input(
            "induced transformations need the identity colour map".into(),
        ));
    }
    let ax = act(f.source(), x)?;
    let bx = act(f.target(), x)?;
    let idx = bx.index();
    let values = ax
        .elems()
        .iter()
        .map(|e| {
            let (a, xs) = e.expect_tuple()?;
            let img = evaluate(&Elem::tuple(f.apply(a)?, xs.to_vec())?)?;
            idx.get(&img)
                .copied()
                .ok_or_else(|| Error::Input(format!("{img:?} is not in B ⋆ X")))
        })
        .collect::<Result<Vec<_>>>()?;
    SliceMap::new(ax, bx, values)
}

/// The component at `v` of the transformation `X ⋆̈ - => Y ⋆̈ -` induced by an
/// algebra morphism: `[<a, vs>] |-> [<h(a), vs>]`.
pub fn nat_from_em(h: &AlgebraMorphism, v: &Slice) -> Result<SliceMap> {
    let s = em_eval(&h.source, v)?;
    let t = em_eval(&h.target, v)?;
    class_map(&s, &t, &|e| {
        let (a, xs) = e.expect_tuple()?;
        Elem::tuple(h.apply(a)?, xs.to_vec())
    })
}

/// A naturality square at a test morphism `g: X -> Y`:
///
/// ```text
/// F(X) --top--> G(X)
///  |left         |right
/// F(Y) --bottom-> G(Y)
/// ```
#[derive(Clone, Debug)]
pub struct NatSquare {
    pub top: SliceMap,
    pub left: SliceMap,
    pub right: SliceMap,
    pub bottom: SliceMap,
}

impl NatSquare {
    /// Check that the maps fit together and the square commutes.
    pub fn new(top: SliceMap, left: SliceMap, right: SliceMap, bottom: SliceMap) -> Result<Self> {
        let a = top.then(&right)?;
        let b = left.then(&bottom)?;
        if a.values != b.values {
            return Err(Error::Validation("the square does not commute".into()));
        }
        Ok(NatSquare {
            top,
            left,
            right,
            bottom,
        })
    }

    /// The fibre product `F(Y) ×_{G(Y)} G(X)` as index pairs.
    pub fn fibre_product(&self) -> Vec<(usize, usize)> {
        let mut by_image: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, &v) in self.right.values.iter().enumerate() {
            by_image.entry(v).or_default().push(i);
        }
        let mut out = Vec::new();
        for (fy, &gy) in self.bottom.values.iter().enumerate() {
            for &gx in by_image.get(&gy).map(Vec::as_slice).unwrap_or(&[]) {
                out.push((fy, gx));
            }
        }
        out
    }

    /// Classify the comparison map `F(X) -> F(Y) ×_{G(Y)} G(X)`.
    pub fn classify(&self) -> PullbackReport {
        let fp = self.fibre_product();
        let mut preimages: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for i in 0..self.top.source.len() {
            preimages
                .entry((self.left.apply(i), self.top.apply(i)))
                .or_default()
                .push(i);
        }
        let name = |s: &Slice, i: usize| s.elems()[i].name(s.colours());
        for &(fy, gx) in &fp {
            match preimages.get(&(fy, gx)).map(Vec::len).unwrap_or(0) {
                0 => {
                    return PullbackReport::NotWeak {
                        witness: (name(&self.bottom.source, fy), name(&self.right.source, gx)),
                    }
                }
                1 => {}
                _ => {}
            }
        }
        for (&(fy, gx), pre) in &preimages {
            if pre.len() > 1 {
                return PullbackReport::WeakOnly {
                    witness: (name(&self.bottom.source, fy), name(&self.right.source, gx)),
                    preimages: pre.iter().map(|&i| name(&self.top.source, i)).collect(),
                };
            }
        }
        PullbackReport::Pullback
    }
}

/// How a commuting square relates to the pullback of its lower corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PullbackReport {
    Pullback,
    /// Every element of the fibre product is hit, one of them more than once.
    WeakOnly {
        witness: (String, String),
        preimages: Vec<String>,
    },
    /// An element of the fibre product that is not hit.
    NotWeak {
        witness: (String, String),
    },
}

pub fn is_cartesian(sq: &NatSquare) -> bool {
    sq.classify() == PullbackReport::Pullback
}

pub fn is_weak_pullback(sq: &NatSquare) -> bool {
    !matches!(sq.classify(), PullbackReport::NotWeak { .. })
}

/// Every test morphism between slice objects of at most `max_size` elements.
pub fn test_morphisms(colours: &Colours, max_size: usize) -> Vec<SliceMap> {
    let family = slice_family(colours, max_size);
    let mut out = Vec::new();
    for x in &family {
        for y in &family {
            out.extend(SliceMap::enumerate(x, y));
        }
    }
    out
}

/// The naturality square of a Kleisli-induced transformation at `g`.
pub fn kleisli_square(f: &KleisliMorphism, g: &SliceMap) -> Result<NatSquare> {
    NatSquare::new(
        nat_from_kleisli(f, &g.source)?,
        act_on_morphism(f.source(), g)?,
        act_on_morphism(f.target(), g)?,
        nat_from_kleisli(f, &g.target)?,
    )
}

/// The naturality square of an algebra-induced transformation at `g`.
pub fn em_square(h: &AlgebraMorphism, g: &SliceMap) -> Result<NatSquare> {
    NatSquare::new(
        nat_from_em(h, &g.source)?,
        eval_analytic_on_morphism(&h.source, g)?,
        eval_analytic_on_morphism(&h.target, g)?,
        nat_from_em(h, &g.target)?,
    )
}

/// Check every naturality square of `f` at the test morphisms is a
/// pullback. Returns the number of squares.
pub fn check_kleisli_cartesian(f: &KleisliMorphism, tests: &[SliceMap]) -> Result<usize> {
    for g in tests {
        let sq = kleisli_square(f, g)?;
        if let report @ (PullbackReport::WeakOnly { .. } | PullbackReport::NotWeak { .. }) =
            sq.classify()
        {
            return Err(Error::Validation(format!(
                "square at {:?} is not a pullback: {report:?}",
                g.values
            )));
        }
    }
    Ok(tests.len())
}

/// Check every naturality square of `h` at the test morphisms is a weak
/// pullback. Returns the number of squares that are not pullbacks.
pub fn check_em_weakly_cartesian(h: &AlgebraMorphism, tests: &[SliceMap]) -> Result<usize> {
    let mut strict = 0;
    for g in tests {
        match em_square(h, g)?.classify() {
            PullbackReport::Pullback => {}
            PullbackReport::WeakOnly { .. } => strict += 1,
            report @ PullbackReport::NotWeak { .. } => {
                return Err(Error::Validation(format!(
                    "square at {:?} is not a weak pullback: {report:?}",
                    g.values
                )))
            }
        }
    }
    Ok(strict)
}

/// Whether two Kleisli morphisms induce different transformations at some
/// test object.
pub fn kleisli_distinguished(
    f: &KleisliMorphism,
    g: &KleisliMorphism,
    objects: &[Slice],
) -> Result<bool> {
    for x in objects {
        if nat_from_kleisli(f, x)?.values != nat_from_kleisli(g, x)?.values {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether two algebra morphisms induce different transformations at some
/// test object.
pub fn em_distinguished(
    f: &AlgebraMorphism,
    g: &AlgebraMorphism,
    objects: &[Slice],
) -> Result<bool> {
    for v in objects {
        if nat_from_em(f, v)?.values != nat_from_em(g, v)?.values {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::em::{free_algebra, trivial_species};
    use crate::finset::FinMap;
    use crate::monads::{decorate, Bounds, MonadTag};
    use crate::signatures::{ColourMap, Op};

    fn one() -> Colours {
        Colours::single()
    }

    fn m_sig() -> Signature {
        Signature::new(one(), vec![Op::atom("m", 0, vec![0, 0])]).unwrap()
    }

    fn swap_endo() -> KleisliMorphism {
        let a = m_sig();
        let d = decorate(&a.ops()[0], FinMap::swap2(), vec![0, 0]).unwrap();
        KleisliMorphism::new(
            MonadTag::S,
            a.clone(),
            a.clone(),
            ColourMap::identity(a.colours()),
            vec![d],
        )
        .unwrap()
    }

    fn orbit_projection() -> AlgebraMorphism {
        let y = free_algebra(MonadTag::S, &m_sig(), Bounds::default());
        AlgebraMorphism::new(y, trivial_species(2, "e"), vec![0, 0]).unwrap()
    }

    #[test]
    fn polynomial_values() {
        let x = Slice::with_sizes(&one(), &[3]);
        assert_eq!(eval_polynomial(&m_sig(), &x).unwrap().len(), 9);
        let id = eval_polynomial_on_morphism(&m_sig(), &SliceMap::identity(&x)).unwrap();
        assert!(id.values.iter().enumerate().all(|(i, &v)| i == v));
    }

    #[test]
    fn analytic_values() {
        let v = Slice::with_sizes(&one(), &[3]);
        assert_eq!(
            eval_analytic(&trivial_species(2, "e"), &v).unwrap().len(),
            6
        );
        let empty = Algebra::from_fn(
            MonadTag::S,
            Signature::empty(one()),
            Bounds::default(),
            |d| Ok(d.clone()),
        )
        .unwrap();
        assert!(eval_analytic(&empty, &v).unwrap().is_empty());
    }

    #[test]
    fn swap_component_is_pair_swap() {
        let x = Slice::with_sizes(&one(), &[2]);
        let c = nat_from_kleisli(&swap_endo(), &x).unwrap();
        // tuples in order (x1,x1), (x1,x2), (x2,x1), (x2,x2)
        assert_eq!(c.values, vec![0, 2, 1, 3]);
        let id = KleisliMorphism::identity(MonadTag::S, &m_sig());
        assert_eq!(nat_from_kleisli(&id, &x).unwrap().values, vec![0, 1, 2, 3]);
    }

    #[test]
    fn orbit_projection_separates() {
        let h = orbit_projection();
        let v = Slice::with_sizes(&one(), &[2]);
        let w = Slice::with_sizes(&one(), &[1]);
        let g = SliceMap::new(v, w, vec![0, 0]).unwrap();
        let sq = em_square(&h, &g).unwrap();
        assert!(is_weak_pullback(&sq));
        assert!(!is_cartesian(&sq));
        assert_eq!(sq.fibre_product().len(), 3);
    }

    #[test]
    fn kleisli_squares_are_pullbacks() {
        let tests = test_morphisms(&one(), 3);
        assert!(check_kleisli_cartesian(&swap_endo(), &tests).is_ok());
        assert!(check_em_weakly_cartesian(&orbit_projection(), &tests).unwrap() > 0);
    }

    #[test]
    fn collapsing_square_is_not_weak() {
        let x = Slice::with_sizes(&one(), &[1]);
        let y = Slice::with_sizes(&one(), &[2]);
        let g = SliceMap::new(x.clone(), y.clone(), vec![0]).unwrap();
        let pt = Slice::with_sizes(&one(), &[1]);
        let fx = act(&m_sig(), &x).unwrap();
        let fy = act(&m_sig(), &y).unwrap();
        let top = SliceMap::new(fx.clone(), pt.clone(), vec![0; fx.len()]).unwrap();
        let bottom = SliceMap::new(fy.clone(), pt.clone(), vec![0; fy.len()]).unwrap();
        let sq = NatSquare::new(
            top,
            act_on_morphism(&m_sig(), &g).unwrap(),
            SliceMap::identity(&pt),
            bottom,
        )
        .unwrap();
        assert!(matches!(sq.classify(), PullbackReport::NotWeak { .. }));
    }
}
