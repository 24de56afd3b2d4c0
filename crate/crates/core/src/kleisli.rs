//! Kleisli categories of the decoration monads: signature morphisms with
//! amalgamation, their composition, the tensor of Kleisli morphisms, and the
//! free and forgetful functors.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::monads::{self, apply_monad, decorate, eta, Bounds, MonadTag};
use crate::signatures::{product, tensor, ColourMap, Op, Signature};

/// A morphism `A -> T(B)`: one decorated operation of `B` per operation of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KleisliMorphism {
    tag: MonadTag,
    source: Signature,
    target: Signature,
    colour_map: ColourMap,
    assign: Vec<Op>,
    index: HashMap<Op, usize>,
}

impl KleisliMorphism {
    pub fn new(
        tag: MonadTag,
        source: Signature,
        target: Signature,
        colour_map: ColourMap,
        assign: Vec<Op>,
    ) -> Result<Self> {
        if colour_map.source() != source.colours() || colour_map.target() != target.colours() {
            return Err(Error::ColourMismatch(
                "colour map does not match the signatures".into(),
            ));
        }
        if assign.len() != source.len() {
            return Err(Error::Input(format!(
                "{} assignments for {} operations",
                assign.len(),
                source.len()
            )));
        }
        let targets = target.index();
        for (a, d) in source.ops().iter().zip(&assign) {
            let (b, xi) = d.expect_dec()?;
            if !targets.contains_key(b) {
                return Err(Error::Input(format!(
                    "{b:?} is not an operation of the target"
                )));
            }
            if !xi.is_kind(tag.kind()) {
                return Err(Error::Input(format!(
                    "decoration {xi:?} is not allowed for {tag}"
                )));
            }
            decorate(b, xi.clone(), d.ins.clone())?;
            if d.ins != colour_map.apply_word(&a.ins) || d.out != colour_map.apply(a.out) {
                return Err(Error::ColourMismatch(format!(
                    "{d:?} is not typed like the image of {a:?}"
                )));
            }
        }
        let index = source
            .ops()
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), i))
            .collect();
        Ok(KleisliMorphism {
            tag,
            source,
            target,
            colour_map,
            assign,
            index,
        })
    }

    /// The identity `a |-> eta(a)`.
    pub fn identity(tag: MonadTag, a: &Signature) -> Self {
        let assign = a.ops().iter().map(eta).collect();
        KleisliMorphism::new(
            tag,
            a.clone(),
            a.clone(),
            ColourMap::identity(a.colours()),
            assign,
        )
        .expect("eta is a valid assignment")
    }

    pub fn tag(&self) -> MonadTag {
        self.tag
    }

    pub fn source(&self) -> &Signature {
        &self.source
    }

    pub fn target(&self) -> &Signature {
        &self.target
    }

    pub fn colour_map(&self) -> &ColourMap {
        &self.colour_map
    }

    pub fn assignments(&self) -> &[Op] {
        &self.assign
    }

    /// The decorated operation assigned to `a`.
    pub fn apply(&self, a: &Op) -> Result<&Op> {
        self.index
            .get(a)
            .map(|&i| &self.assign[i])
            .ok_or_else(|| Error::Input(format!("{a:?} is not an operation of the source")))
    }

    /// The Kleisli extension `mu ∘ T(f)`, applied to a decorated operation of the source.
    pub fn extend(&self, d: &Op) -> Result<Op> {
        monads::mu(&monads::tmap(
            d,
            &|a| self.apply(a).cloned(),
            Some(&self.colour_map),
        )?)
    }
}

/// `g ∘ f = mu ∘ T(g) ∘ f`.
pub fn kleisli_compose(g: &KleisliMorphism, f: &KleisliMorphism) -> Result<KleisliMorphism> {
    if g.tag != f.tag {
        return Err(Error::Compose(format!(
            "Kleisli morphisms for {} and {}",
            f.tag, g.tag
        )));
    }
    if f.target != g.source {
        return Err(Error::Compose(
            "target of the first is not the source of the second".into(),
        ));
    }
    let assign = f
        .assign
        .iter()
        .map(|d| g.extend(d))
        .collect::<Result<Vec<_>>>()?;
    let u = ColourMap::new(
        f.colour_map.source().clone(),
        g.colour_map.target().clone(),
        f.colour_map
            .values()
            .iter()
            .map(|&c| g.colour_map.apply(c))
            .collect(),
    )?;
    KleisliMorphism::new(f.tag, f.source.clone(), g.target.clone(), u, assign)
}

/// The Kleisli tensor `f ⊗̇ g = phi ∘ (f ⊗ g)`.
pub fn kleisli_tensor(f: &KleisliMorphism, g: &KleisliMorphism) -> Result<KleisliMorphism> {
    if f.tag != g.tag {
        return Err(Error::Compose(format!(
            "Kleisli morphisms for {} and {}",
            f.tag, g.tag
        )));
    }
    if f.colour_map != g.colour_map {
        return Err(Error::ColourMismatch(
            "Kleisli tensor needs a common colour map".into(),
        ));
    }
    let source = tensor(&f.source, &g.source)?;
    let target = tensor(&f.target, &g.target)?;
    let assign = source
        .ops()
        .iter()
        .map(|e| {
            let (a, bs) = e.expect_pair()?;
            let top = f.apply(a)?.clone();
            let children = bs
                .iter()
                .map(|b| g.apply(b).cloned())
                .collect::<Result<Vec<_>>>()?;
            monads::phi(&Op::pair(&top, children)?)
        })
        .collect::<Result<Vec<_>>>()?;
    KleisliMorphism::new(f.tag, source, target, f.colour_map.clone(), assign)
}

/// `F_T(h)` for a plain colour-preserving signature morphism `h`, given on operations.
pub fn kleisli_free(
    tag: MonadTag,
    source: &Signature,
    target: &Signature,
    h: &dyn Fn(&Op) -> Result<Op>,
) -> Result<KleisliMorphism> {
    let assign = source
        .ops()
        .iter()
        .map(|a| h(a).map(|b| eta(&b)))
        .collect::<Result<Vec<_>>>()?;
    KleisliMorphism::new(
        tag,
        source.clone(),
        target.clone(),
        ColourMap::identity(source.colours()),
        assign,
    )
}

/// `U_T(f): T(A) -> T(B)` tabulated on `T(A)` within `bounds`.
pub fn kleisli_forget(f: &KleisliMorphism, bounds: Bounds) -> Result<Vec<(Op, Op)>> {
    apply_monad(f.tag, &f.source, bounds)
        .ops()
        .iter()
        .map(|d| Ok((d.clone(), f.extend(d)?)))
        .collect()
}

/// Every Kleisli morphism `A -> B` over the identity colour map.
pub fn enumerate_kleisli(
    tag: MonadTag,
    source: &Signature,
    target: &Signature,
    bounds: Bounds,
) -> Result<Vec<KleisliMorphism>> {
    let tb = apply_monad(tag, target, bounds);
    let choices: Vec<Vec<Op>> = source
        .ops()
        .iter()
        .map(|a| {
            tb.ops()
                .iter()
                .filter(|d| d.out == a.out && d.ins == a.ins)
                .cloned()
                .collect()
        })
        .collect();
    let refs: Vec<&Vec<Op>> = choices.iter().collect();
    product(&refs)
        .into_iter()
        .map(|assign| {
            KleisliMorphism::new(
                tag,
                source.clone(),
                target.clone(),
                ColourMap::identity(source.colours()),
                assign,
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::FinMap;
    use crate::signatures::{Colours, Op};

    fn m_sig() -> Signature {
        Signature::new(Colours::single(), vec![Op::atom("m", 0, vec![0, 0])]).unwrap()
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

    #[test]
    fn identity_is_neutral() {
        let f = swap_endo();
        let id = KleisliMorphism::identity(MonadTag::S, &m_sig());
        assert_eq!(kleisli_compose(&id, &f).unwrap(), f);
        assert_eq!(kleisli_compose(&f, &id).unwrap(), f);
    }

    #[test]
    fn swaps_compose_to_identity() {
        let f = swap_endo();
        let ff = kleisli_compose(&f, &f).unwrap();
        assert_eq!(ff, KleisliMorphism::identity(MonadTag::S, &m_sig()));
    }

    #[test]
    fn forget_of_swap() {
        let f = swap_endo();
        let table = kleisli_forget(&f, Bounds::default()).unwrap();
        let m = &m_sig().ops()[0].clone();
        let row = table.iter().find(|(d, _)| *d == eta(m)).unwrap();
        assert_eq!(row.1, decorate(m, FinMap::swap2(), vec![0, 0]).unwrap());
        let id = KleisliMorphism::identity(MonadTag::S, &m_sig());
        assert!(kleisli_forget(&id, Bounds::default())
            .unwrap()
            .iter()
            .all(|(d, e)| d == e));
    }

    #[test]
    fn tensor_of_swap_with_units() {
        let i = Signature::new(Colours::single(), vec![Op::atom("i", 0, vec![0])]).unwrap();
        let f = swap_endo();
        let g = KleisliMorphism::identity(MonadTag::S, &i);
        let fg = kleisli_tensor(&f, &g).unwrap();
        assert_eq!(fg.assignments().len(), 1);
        let (_, xi) = fg.assignments()[0].as_dec().unwrap();
        assert_eq!(xi, &FinMap::swap2());
        let id = KleisliMorphism::identity(MonadTag::S, &m_sig());
        let idid = kleisli_tensor(&id, &id).unwrap();
        let tt = tensor(&m_sig(), &m_sig()).unwrap();
        assert_eq!(idid, KleisliMorphism::identity(MonadTag::S, &tt));
    }

    #[test]
    fn enumeration_counts() {
        let a = m_sig();
        assert_eq!(
            enumerate_kleisli(MonadTag::S, &a, &a, Bounds::default())
                .unwrap()
                .len(),
            2
        );
        // F: decorations of m into arity 2: all 4 maps (2] -> (2]
        assert_eq!(
            enumerate_kleisli(MonadTag::F, &a, &a, Bounds::default())
                .unwrap()
                .len(),
            4
        );
    }
}
