//! Eilenberg-Moore algebras of the decoration monads (for S: coloured
//! species), their morphisms, the Linton tensor with its coherence maps,
//! analytic evaluation, and coequalizers of split pairs.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::finset::{permutations, FinMap, Quotient, QuotientBuilder};
use crate::laws::Violation;
use crate::monads::{self, apply_monad, decorate, eta, mu, phi, tmap, Bounds, MonadTag};
use crate::signatures::{
    act, lambda, product, rho, tensor_bounded, tensor_map, unit, Colours, Elem, Op, Signature,
    Slice,
};

/// An algebra `(A, a: T(A) -> A)`, with the action tabulated on every
/// decorated operation within the bounds.
#[derive(Clone)]
pub struct Algebra {
    tag: MonadTag,
    bounds: Bounds,
    carrier: Signature,
    index: HashMap<Op, usize>,
    action: HashMap<Op, usize>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-algebra on {:?}", self.tag, self.carrier)
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag
            && self.carrier == other.carrier
            && self.action.len() == other.action.len()
            && self.action.iter().all(|(d, &r)| {
                other
                    .action
                    .get(d)
                    .is_some_and(|&s| other.carrier.ops()[s] == self.carrier.ops()[r])
            })
    }
}

impl Algebra {
    /// Tabulate an action given as a function on decorated operations.
    pub fn from_fn(
        tag: MonadTag,
        carrier: Signature,
        bounds: Bounds,
        f: impl Fn(&Op) -> Result<Op> + Sync,
    ) -> Result<Self> {
        let index: HashMap<Op, usize> = carrier
            .ops()
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), i))
            .collect();
        let decs = apply_monad(tag, &carrier, bounds);
        let results = exec::map(Strategy::Parallel, decs.ops(), |d| f(d));
        let mut action = HashMap::with_capacity(decs.len());
        for (d, r) in decs.ops().iter().zip(results) {
            let r = r?;
            let &i = index
                .get(&r)
                .ok_or_else(|| Error::Input(format!("action value {r:?} is not in the carrier")))?;
            if r.out != d.out || r.ins != d.ins {
                return Err(Error::ColourMismatch(format!(
                    "{d:?} acts to {r:?} of another type"
                )));
            }
            action.insert(d.clone(), i);
        }
        Ok(Algebra {
            tag,
            bounds,
            carrier,
            index,
            action,
        })
    }

    /// Build from explicit rows `(decorated operation, result)`. Rows for
    /// identity decorations may be omitted; every other row must be present.
    pub fn from_rows(
        tag: MonadTag,
        carrier: Signature,
        bounds: Bounds,
        rows: impl IntoIterator<Item = (Op, Op)>,
    ) -> Result<Self> {
        let mut table: HashMap<Op, Op> = HashMap::new();
        for (d, r) in rows {
            if !monads::admits(tag, &d) {
                return Err(Error::Input(format!(
                    "row {d:?} is not a decoration for {tag}"
                )));
            }
            if let Some(prev) = table.insert(d.clone(), r.clone()) {
                if prev != r {
                    return Err(Error::Input(format!("conflicting rows for {d:?}")));
                }
            }
        }
        Algebra::from_fn(tag, carrier, bounds, |d| {
            if let Some(r) = table.get(d) {
                return Ok(r.clone());
            }
            let (a, xi) = d.expect_dec()?;
            if xi.is_identity() {
                Ok(a.clone())
            } else {
                Err(Error::Input(format!("no action row for {d:?}")))
            }
        })
    }

    pub fn tag(&self) -> MonadTag {
        self.tag
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn carrier(&self) -> &Signature {
        &self.carrier
    }

    pub fn colours(&self) -> &Colours {
        self.carrier.colours()
    }

    pub fn index_of(&self, op: &Op) -> Option<usize> {
        self.index.get(op).copied()
    }

    pub fn contains(&self, op: &Op) -> bool {
        self.index.contains_key(op)
    }

    /// The action `a(d)` of a decorated carrier operation.
    pub fn act(&self, d: &Op) -> Result<&Op> {
        self.action
            .get(d)
            .map(|&i| &self.carrier.ops()[i])
            .ok_or_else(|| {
                Error::Truncation(format!(
                    "no action recorded for {d:?} (outside the bounds?)"
                ))
            })
    }

    /// All rows `(decorated operation, result)` in enumeration order.
    pub fn rows(&self) -> Vec<(Op, Op)> {
        apply_monad(self.tag, &self.carrier, self.bounds)
            .ops()
            .iter()
            .map(|d| (d.clone(), self.carrier.ops()[self.action[d]].clone()))
            .collect()
    }

    /// A copy with one action row replaced, bypassing the laws.
    pub fn with_row(&self, d: &Op, result: &Op) -> Result<Self> {
        let mut out = self.clone();
        let &i = self
            .index
            .get(result)
            .ok_or_else(|| Error::Input(format!("{result:?} is not in the carrier")))?;
        if !out.action.contains_key(d) {
            return Err(Error::Input(format!("{d:?} is not a row of this algebra")));
        }
        out.action.insert(d.clone(), i);
        Ok(out)
    }

    /// Check the unit law `a(eta(x)) = x` and multiplicativity
    /// `a(T(a)(dd)) = a(mu(dd))` on every element within the bounds.
    pub fn validate(&self) -> Result<(), Violation> {
        let name = format!("{self:?}");
        for x in self.carrier.ops() {
            let got = self
                .act(&eta(x))
                .map_err(|e| self.violation("unit law", x, &e))?;
            if got != x {
                return Err(Violation {
                    diagram: "algebra unit law".into(),
                    instance: name,
                    element: self.show(&eta(x)),
                    lhs: self.show(got),
                    rhs: self.show(x),
                });
            }
        }
        let tt = apply_monad(
            self.tag,
            &apply_monad(self.tag, &self.carrier, self.bounds),
            self.bounds,
        );
        let found = exec::find_map_first(Strategy::Parallel, tt.ops(), |dd| {
            let lhs = tmap(dd, &|d| self.act(d).cloned(), None).and_then(|d| self.act(&d).cloned());
            let rhs = mu(dd).and_then(|d| self.act(&d).cloned());
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if l == r => None,
                (l, r) => Some(Violation {
                    diagram: "algebra multiplicativity".into(),
                    instance: name.clone(),
                    element: self.show(dd),
                    lhs: l.map_or_else(|e| e.to_string(), |o| self.show(&o)),
                    rhs: r.map_or_else(|e| e.to_string(), |o| self.show(&o)),
                }),
            }
        });
        found.map_or(Ok(()), Err)
    }

    fn violation(&self, law: &str, x: &Op, e: &Error) -> Violation {
        Violation {
            diagram: law.into(),
            instance: format!("{self:?}"),
            element: self.show(x),
            lhs: e.to_string(),
            rhs: String::new(),
        }
    }

    pub fn show(&self, op: &Op) -> String {
        op.name(self.colours())
    }
}

/// The free algebra `(T(A), mu)`.
pub fn free_algebra(tag: MonadTag, a: &Signature, bounds: Bounds) -> Algebra {
    Algebra::from_fn(tag, apply_monad(tag, a, bounds), bounds, mu)
        .expect("mu maps T(T(A)) into T(A) within the bounds")
}

/// The unit algebra `F^T(I)`.
pub fn unit_algebra(tag: MonadTag, colours: &Colours, bounds: Bounds) -> Algebra {
    free_algebra(tag, &unit(colours), bounds)
}

/// A morphism of algebras, as an index table on carriers.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    pub source: Algebra,
    pub target: Algebra,
    pub values: Vec<usize>,
}

impl AlgebraMorphism {
    /// Check typing and equivariance `h(a(d)) = b(T(h)(d))`.
    pub fn new(source: Algebra, target: Algebra, values: Vec<usize>) -> Result<Self> {
        let m = AlgebraMorphism {
            source,
            target,
            values,
        };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        if self.source.tag != self.target.tag || self.source.colours() != self.target.colours() {
            return Err(Error::ColourMismatch(
                "algebras of different monads or colours".into(),
            ));
        }
        if self.values.len() != self.source.carrier.len() {
            return Err(Error::Input("morphism table has the wrong length".into()));
        }
        for (x, &v) in self.source.carrier.ops().iter().zip(&self.values) {
            let y = self
                .target
                .carrier
                .ops()
                .get(v)
                .ok_or_else(|| Error::Input(format!("value {v} out of range")))?;
            if x.out != y.out || x.ins != y.ins {
                return Err(Error::ColourMismatch(format!(
                    "{x:?} sent to {y:?} of another type"
                )));
            }
        }
        for (d, &r) in &self.source.action {
            let lhs = &self.target.carrier.ops()[self.values[r]];
            let rhs = self
                .target
                .act(&tmap(d, &|x| self.apply(x).cloned(), None)?)?;
            if lhs != rhs {
                return Err(Error::Validation(format!(
                    "not equivariant at {}: {} != {}",
                    self.source.show(d),
                    self.target.show(lhs),
                    self.target.show(rhs)
                )));
            }
        }
        Ok(())
    }

    pub fn apply(&self, x: &Op) -> Result<&Op> {
        let i = self
            .source
            .index_of(x)
            .ok_or_else(|| Error::Input(format!("{x:?} is not in the source carrier")))?;
        Ok(&self.target.carrier.ops()[self.values[i]])
    }

    pub fn identity(x: &Algebra) -> Self {
        AlgebraMorphism {
            source: x.clone(),
            target: x.clone(),
            values: (0..x.carrier.len()).collect(),
        }
    }

    pub fn then(&self, next: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        if self.target != next.source {
            return Err(Error::Compose("algebra morphisms do not compose".into()));
        }
        Ok(AlgebraMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            values: self.values.iter().map(|&v| next.values[v]).collect(),
        })
    }
}

/// Every algebra morphism `X -> Y`.
pub fn enumerate_algebra_morphisms(x: &Algebra, y: &Algebra) -> Vec<AlgebraMorphism> {
    if x.tag != y.tag || x.colours() != y.colours() {
        return Vec::new();
    }
    let choices: Vec<Vec<usize>> = x
        .carrier
        .ops()
        .iter()
        .map(|a| {
            y.carrier
                .ops()
                .iter()
                .enumerate()
                .filter(|(_, b)| b.out == a.out && b.ins == a.ins)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let refs: Vec<&Vec<usize>> = choices.iter().collect();
    product(&refs)
        .into_iter()
        .filter_map(|values| AlgebraMorphism::new(x.clone(), y.clone(), values).ok())
        .collect()
}

/// The result of analytic evaluation `X ⋆̈ V`.
#[derive(Clone, Debug)]
pub struct Evaluation {
    /// `A ⋆ V` for the carrier `A`.
    pub ground: Slice,
    pub quotient: Quotient<Elem>,
    /// The classes, each named by its representative.
    pub classes: Slice,
}

impl Evaluation {
    /// The quotient map `A ⋆ V -> X ⋆̈ V`.
    pub fn class_of(&self, e: &Elem) -> Result<Elem> {
        let c = self
            .quotient
            .class_of(e)
            .ok_or_else(|| Error::Input(format!("{e:?} is not in the ground set")))?;
        Ok(self.classes.elems()[c].clone())
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// `X ⋆̈ V`: the quotient of `A ⋆ V` by `<a(a', xi), v> ~ <a', v ∘ xi>`.
pub fn em_eval(x: &Algebra, v: &Slice) -> Result<Evaluation> {
    let ground = act(&x.carrier, v)?;
    let fibres = v.fibres();
    let mut qb = QuotientBuilder::new(ground.elems().to_vec());
    let decs: Vec<(&Op, usize)> = x.action.iter().map(|(d, &r)| (d, r)).collect();
    let pairs: Vec<Vec<(Elem, Elem)>> = exec::map(Strategy::Parallel, &decs, |&(d, r)| {
        let (a, xi) = d.expect_dec().expect("action rows are decorated");
        let b = &x.carrier.ops()[r];
        let slots: Vec<Vec<Elem>> = d
            .ins
            .iter()
            .map(|&c| fibres[c].iter().map(|e| (*e).clone()).collect())
            .collect();
        let refs: Vec<&Vec<Elem>> = slots.iter().collect();
        product(&refs)
            .into_iter()
            .map(|vs| {
                let lhs = Elem::tuple(b, vs.clone()).expect("typed by the action");
                let rhs = Elem::tuple(a, xi.pull(&vs)).expect("typed by the decoration");
                (lhs, rhs)
            })
            .collect()
    });
    for (l, r) in pairs.iter().flatten() {
        qb.identify(l, r)?;
    }
    let quotient = qb.finish();
    let classes = Slice::new(
        v.colours().clone(),
        (0..quotient.class_count())
            .map(|c| Elem::class(quotient.representative(c)))
            .collect(),
    )?;
    Ok(Evaluation {
        ground,
        quotient,
        classes,
    })
}

/// The Linton tensor `X ⊗̈ Y` with its quotient map `q: T(X ⊗ Y) -> X ⊗̈ Y`.
#[derive(Clone, Debug)]
pub struct LintonTensor {
    pub left: Algebra,
    pub right: Algebra,
    pub algebra: Algebra,
    quotient: Quotient<Op>,
}

/// Arity bound on the plain tensor `X ⊗ Y` underlying the ground set. For S
/// the outer and inner arities agree; for R the inner tensor is finite and is
/// taken whole; for F it is truncated at the outer bound.
fn inner_limit(tag: MonadTag, bounds: Bounds) -> Option<usize> {
    match tag {
        MonadTag::R => None,
        _ => Some(bounds.max_arity),
    }
}

fn inner_bounds(tag: MonadTag, bounds: Bounds) -> Bounds {
    match inner_limit(tag, bounds) {
        Some(n) => Bounds::new(n),
        None => Bounds::new(usize::MAX),
    }
}

/// `X ⊗̈ Y`: classes of `T(X ⊗ Y)` under `mu ∘ T(phi) ~ T(a ⊗ b)` on
/// `T(T(X) ⊗ T(Y))`, with the action induced by `mu`. Classes are only built
/// up to `bounds.max_arity`; the relation preserves arity, so every class of
/// arity within the bound is exact for S and R.
pub fn linton_tensor(x: &Algebra, y: &Algebra, bounds: Bounds) -> Result<LintonTensor> {
    if x.tag != y.tag {
        return Err(Error::Input(format!(
            "Linton tensor of {}- and {}-algebras",
            x.tag, y.tag
        )));
    }
    if x.colours() != y.colours() {
        return Err(Error::ColourMismatch(
            "Linton tensor over different colours".into(),
        ));
    }
    let tag = x.tag;
    let limit = inner_limit(tag, bounds);
    let z = tensor_bounded(&x.carrier, &y.carrier, limit)?;
    let tz = apply_monad(tag, &z, bounds);
    let ib = inner_bounds(tag, bounds);
    let tx = apply_monad(tag, &x.carrier, ib);
    let ty = apply_monad(tag, &y.carrier, ib);
    let w = tensor_bounded(&tx, &ty, limit)?;
    let tw = apply_monad(tag, &w, bounds);
    let act_pair = |w0: &Op| tensor_map(w0, &|d| x.act(d).cloned(), &|d| y.act(d).cloned());
    let pairs = exec::map(Strategy::Parallel, tw.ops(), |ww| -> Result<(Op, Op)> {
        let left = mu(&tmap(ww, &phi, None)?)?;
        let right = tmap(ww, &act_pair, None)?;
        Ok((left, right))
    });
    let mut qb = QuotientBuilder::new(tz.ops().to_vec());
    for p in pairs {
        let (l, r) = p?;
        for e in [&l, &r] {
            if !qb.contains(e) {
                return Err(Error::Truncation(format!(
                    "{e:?} falls outside the enumerated T(X ⊗ Y); raise the bound"
                )));
            }
        }
        qb.identify(&l, &r)?;
    }
    let quotient = qb.finish();
    let class_ops: Vec<Op> = (0..quotient.class_count())
        .map(|c| Op::class(quotient.representative(c)))
        .collect();
    let members: Vec<Vec<Op>> = quotient
        .classes()
        .into_iter()
        .map(|c| c.into_iter().cloned().collect())
        .collect();
    let carrier = Signature::new(x.colours().clone(), class_ops.clone())?;
    let class_pos: HashMap<&Op, usize> =
        class_ops.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let algebra = Algebra::from_fn(tag, carrier, bounds, |d| {
        let (c, xi) = d.expect_dec()?;
        let k = class_pos[c];
        let mut result: Option<usize> = None;
        for m in &members[k] {
            let img = mu(&decorate(m, xi.clone(), d.ins.clone())?)?;
            let cls = quotient.class_of(&img).ok_or_else(|| {
                Error::Truncation(format!("{img:?} falls outside the enumerated T(X ⊗ Y)"))
            })?;
            match result {
                None => result = Some(cls),
                Some(prev) if prev != cls => {
                    return Err(Error::IllDefined(format!(
                        "action of {xi:?} on the class of {c:?} depends on the representative"
                    )))
                }
                _ => {}
            }
        }
        Ok(class_ops[result.expect("classes are non-empty")].clone())
    })?;
    Ok(LintonTensor {
        left: x.clone(),
        right: y.clone(),
        algebra,
        quotient,
    })
}

impl LintonTensor {
    /// `q: T(X ⊗ Y) -> X ⊗̈ Y`.
    pub fn q(&self, d: &Op) -> Result<Op> {
        let c = self
            .quotient
            .class_of(d)
            .ok_or_else(|| Error::Truncation(format!("{d:?} is not in the enumerated T(X ⊗ Y)")))?;
        Ok(self.algebra.carrier.ops()[c].clone())
    }

    /// `ü_{X,Y} = q ∘ eta: X ⊗ Y -> U(X ⊗̈ Y)`.
    pub fn u_ddot(&self, z: &Op) -> Result<Op> {
        self.q(&eta(z))
    }

    /// The enumerated ground set `T(X ⊗ Y)`.
    pub fn ground(&self) -> &[Op] {
        self.quotient.elements()
    }

    /// Members of the class named by a carrier operation.
    pub fn members(&self, class: &Op) -> Result<Vec<&Op>> {
        let i = self
            .algebra
            .index_of(class)
            .ok_or_else(|| Error::Input(format!("{class:?} is not a class")))?;
        Ok(self.quotient.members(i).collect())
    }

    /// Apply `f` to every member of a class and check the results agree.
    pub fn on_class(&self, class: &Op, f: impl Fn(&Op) -> Result<Op>) -> Result<Op> {
        let mut out: Option<Op> = None;
        for m in self.members(class)? {
            let v = f(m)?;
            match &out {
                None => out = Some(v),
                Some(prev) if *prev != v => {
                    return Err(Error::IllDefined(format!(
                        "map on the class of {class:?} depends on the representative: {prev:?} vs {v:?}"
                    )))
                }
                _ => {}
            }
        }
        out.ok_or_else(|| Error::Input("empty class".into()))
    }

    pub fn arity_counts(&self) -> std::collections::BTreeMap<usize, usize> {
        self.algebra.carrier().arity_counts()
    }
}

fn rep_of(class: &Op) -> Result<&Op> {
    class
        .as_class()
        .ok_or_else(|| Error::Input(format!("{class:?} is not a class of a Linton tensor")))
}

/// The associator `α̈: X ⊗̈ (Y ⊗̈ Z) -> (X ⊗̈ Y) ⊗̈ Z` on an element of
/// `T(X ⊗ U(Y ⊗̈ Z))`: lift the inner classes to representatives, combine with
/// `phi`, reassociate, and collapse `X ⊗ Y` with `ü`.
pub fn alpha_ddot_on(xy: &LintonTensor, target: &LintonTensor, d: &Op) -> Result<Op> {
    let (z0, sigma) = d.expect_dec()?;
    let (x, cs) = z0.expect_pair()?;
    let reps = cs
        .iter()
        .map(|c| rep_of(c).cloned())
        .collect::<Result<Vec<_>>>()?;
    let e = phi(&Op::pair(&eta(x), reps)?)?;
    let e = tmap(&e, &crate::signatures::alpha, None)?;
    let e = tmap(
        &e,
        &|w| tensor_map(w, &|p| xy.u_ddot(p), &|c| Ok(c.clone())),
        None,
    )?;
    let base = target.q(&e)?;
    target
        .algebra
        .act(&decorate(&base, sigma.clone(), d.ins.clone())?)
        .cloned()
}

/// `α̈` on a class, checked to be independent of the representative.
pub fn alpha_ddot(
    src: &LintonTensor,
    xy: &LintonTensor,
    target: &LintonTensor,
    c: &Op,
) -> Result<Op> {
    src.on_class(c, |d| alpha_ddot_on(xy, target, d))
}

/// `λ̈: Ï ⊗̈ X -> X`, `a ∘ mu ∘ T²(λ) ∘ T(phi) ∘ T(1 ⊗ eta)`.
pub fn lambda_ddot_on(src: &LintonTensor, d: &Op) -> Result<Op> {
    let x = &src.right;
    let step = |w: &Op| -> Result<Op> {
        let lifted = tensor_map(w, &|i| Ok(i.clone()), &|a| Ok(eta(a)))?;
        tmap(&phi(&lifted)?, &lambda, None)
    };
    x.act(&mu(&tmap(d, &step, None)?)?).cloned()
}

pub fn lambda_ddot(src: &LintonTensor, c: &Op) -> Result<Op> {
    src.on_class(c, |d| lambda_ddot_on(src, d))
}

/// `ρ̈: X ⊗̈ Ï -> X`, the mirror of `λ̈`.
pub fn rho_ddot_on(src: &LintonTensor, d: &Op) -> Result<Op> {
    let x = &src.left;
    let step = |w: &Op| -> Result<Op> {
        let lifted = tensor_map(w, &|a| Ok(eta(a)), &|i| Ok(i.clone()))?;
        tmap(&phi(&lifted)?, &rho, None)
    };
    x.act(&mu(&tmap(d, &step, None)?)?).cloned()
}

pub fn rho_ddot(src: &LintonTensor, c: &Op) -> Result<Op> {
    src.on_class(c, |d| rho_ddot_on(src, d))
}

/// `v̈: F(A) ⊗̈ F(B) -> F(A ⊗ B)`, induced by `mu ∘ T(phi)` on classes.
pub fn v_ddot(src: &LintonTensor, c: &Op) -> Result<Op> {
    src.on_class(c, |d| mu(&tmap(d, &phi, None)?))
}

/// The comparison `w̄ = q ∘ T(eta ⊗ eta): T(A ⊗ B) -> F(A) ⊗̈ F(B)`.
pub fn comparison(src: &LintonTensor, d: &Op) -> Result<Op> {
    src.q(&tmap(
        d,
        &|z| tensor_map(z, &|a| Ok(eta(a)), &|b| Ok(eta(b))),
        None,
    )?)
}

/// Witness that `F(A) ⊗̈ F(B) ≅ F(A ⊗ B)`.
#[derive(Clone, Debug)]
pub struct FreeTensorWitness {
    pub linton: LintonTensor,
    pub free: Algebra,
    /// `(d, w̄(d))` for every `d` in `T(A ⊗ B)`.
    pub pairs: Vec<(Op, Op)>,
}

/// Build `F(A) ⊗̈ F(B)` and `F(A ⊗ B)`, check that the comparison is a
/// bijection with inverse `v̈`, and compare arity-indexed sizes.
pub fn free_tensor_comparison(
    tag: MonadTag,
    a: &Signature,
    b: &Signature,
    bounds: Bounds,
) -> Result<FreeTensorWitness> {
    let fa = free_algebra(tag, a, inner_bounds(tag, bounds));
    let fb = free_algebra(tag, b, inner_bounds(tag, bounds));
    let linton = linton_tensor(&fa, &fb, bounds)?;
    let ab = tensor_bounded(a, b, inner_limit(tag, bounds))?;
    let free = free_algebra(tag, &ab, bounds);
    if linton.arity_counts() != free.carrier().arity_counts() {
        return Err(Error::Validation(format!(
            "arity counts differ: {:?} vs {:?}",
            linton.arity_counts(),
            free.carrier().arity_counts()
        )));
    }
    let mut pairs = Vec::with_capacity(free.carrier().len());
    let mut hit = HashSet::new();
    for d in free.carrier().ops() {
        let c = comparison(&linton, d)?;
        if v_ddot(&linton, &c)? != *d {
            return Err(Error::Validation(format!(
                "v̈ ∘ w̄ is not the identity at {d:?}"
            )));
        }
        if !hit.insert(c.clone()) {
            return Err(Error::Validation(format!(
                "comparison is not injective at {d:?}"
            )));
        }
        pairs.push((d.clone(), c));
    }
    if hit.len() != linton.algebra.carrier().len() {
        return Err(Error::Validation("comparison is not surjective".into()));
    }
    Ok(FreeTensorWitness {
        linton,
        free,
        pairs,
    })
}

/// A parallel pair `f, g: X -> Y` of algebra morphisms with a map
/// `t: U(Y) -> U(X)` splitting it.
#[derive(Clone, Debug)]
pub struct SplitPair {
    pub f: AlgebraMorphism,
    pub g: AlgebraMorphism,
    pub t: Vec<usize>,
}

/// Outcome of [`split_pair_coequalizer_check`].
#[derive(Clone, Debug)]
pub struct SplitCoequalizer {
    pub quotient: Algebra,
    pub h: AlgebraMorphism,
    /// The section `s: U(Z) -> U(Y)`.
    pub s: Vec<usize>,
    /// Number of cocones checked to factor uniquely.
    pub cocones: usize,
}

/// Coequalize a split pair in signatures, lift the quotient to an algebra,
/// and check it is a coequalizer of algebras against every cocone into each
/// of the `tests` algebras.
pub fn split_pair_coequalizer_check(
    pair: &SplitPair,
    tests: &[Algebra],
) -> Result<SplitCoequalizer> {
    let (f, g) = (&pair.f, &pair.g);
    let (x, y) = (&f.source, &f.target);
    if g.source != *x || g.target != *y {
        return Err(Error::Input("the pair is not parallel".into()));
    }
    let ny = y.carrier.len();
    if pair.t.len() != ny || pair.t.iter().any(|&i| i >= x.carrier.len()) {
        return Err(Error::Input("splitting t has the wrong shape".into()));
    }
    for (j, &i) in pair.t.iter().enumerate() {
        if f.values[i] != j {
            return Err(Error::Validation(format!(
                "f ∘ t is not the identity at {}",
                y.show(&y.carrier.ops()[j])
            )));
        }
    }
    let mut qb = QuotientBuilder::new((0..ny).collect::<Vec<usize>>());
    for i in 0..x.carrier.len() {
        qb.identify_indices(f.values[i], g.values[i]);
    }
    let q = qb.finish();
    let h_of: Vec<usize> = (0..ny).map(|j| q.class_of_index(j)).collect();
    let mut s: Vec<Option<usize>> = vec![None; q.class_count()];
    for j in 0..ny {
        let sj = g.values[pair.t[j]];
        match s[h_of[j]] {
            None => s[h_of[j]] = Some(sj),
            Some(prev) if prev != sj => {
                return Err(Error::Validation(
                    "g ∘ t does not factor through the coequalizer".into(),
                ))
            }
            _ => {}
        }
    }
    let s: Vec<usize> = s
        .into_iter()
        .map(|v| v.expect("every class has a member"))
        .collect();
    for (c, &sj) in s.iter().enumerate() {
        if h_of[sj] != c {
            return Err(Error::Validation("h ∘ s is not the identity".into()));
        }
    }
    let class_ops: Vec<Op> = (0..q.class_count())
        .map(|c| Op::class(&y.carrier.ops()[*q.representative(c)]))
        .collect();
    let pos: HashMap<&Op, usize> = class_ops.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let carrier = Signature::new(y.colours().clone(), class_ops.clone())?;
    let quotient = Algebra::from_fn(y.tag, carrier, y.bounds, |d| {
        let (c, xi) = d.expect_dec()?;
        let k = pos[c];
        let mut out = None;
        for &j in q.members(k) {
            let img = y.act(&decorate(&y.carrier.ops()[j], xi.clone(), d.ins.clone())?)?;
            let cls = h_of[y.index_of(img).expect("carrier element")];
            match out {
                None => out = Some(cls),
                Some(prev) if prev != cls => {
                    return Err(Error::IllDefined(format!(
                        "quotient action at {c:?} depends on the representative"
                    )))
                }
                _ => {}
            }
        }
        Ok(class_ops[out.expect("non-empty class")].clone())
    })?;
    let h = AlgebraMorphism::new(y.clone(), quotient.clone(), h_of.clone())?;
    let mut cocones = 0;
    for w in tests {
        for k in enumerate_algebra_morphisms(y, w) {
            if (0..x.carrier.len()).any(|i| k.values[f.values[i]] != k.values[g.values[i]]) {
                continue;
            }
            let mediating: Vec<usize> = s.iter().map(|&j| k.values[j]).collect();
            let m = AlgebraMorphism::new(quotient.clone(), w.clone(), mediating)?;
            if (0..ny).any(|j| m.values[h_of[j]] != k.values[j]) {
                return Err(Error::Validation(
                    "mediating map does not factor the cocone".into(),
                ));
            }
            cocones += 1;
        }
    }
    Ok(SplitCoequalizer {
        quotient,
        h,
        s,
        cocones,
    })
}

/// The canonical presentation `mu, T(a): F(T(A)) ⇉ F(A)` of an algebra, split by
/// `t = eta_{T(A)}`.
pub fn epsilon_presentation(x: &Algebra) -> Result<SplitPair> {
    let bounds = x.bounds;
    let ta = apply_monad(x.tag, &x.carrier, bounds);
    let ftta = free_algebra(x.tag, &ta, bounds);
    let fta = free_algebra(x.tag, &x.carrier, bounds);
    let table = |h: &dyn Fn(&Op) -> Result<Op>| -> Result<Vec<usize>> {
        ftta.carrier
            .ops()
            .iter()
            .map(|dd| {
                let v = h(dd)?;
                fta.index_of(&v)
                    .ok_or_else(|| Error::Truncation(format!("{v:?} outside T(A)")))
            })
            .collect()
    };
    let fv = table(&mu)?;
    let gv = table(&|dd| tmap(dd, &|d| x.act(d).cloned(), None))?;
    let t = fta
        .carrier
        .ops()
        .iter()
        .map(|d| {
            ftta.index_of(&eta(d))
                .ok_or_else(|| Error::Truncation("eta outside T(T(A))".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SplitPair {
        f: AlgebraMorphism::new(ftta.clone(), fta.clone(), fv)?,
        g: AlgebraMorphism::new(ftta, fta, gv)?,
        t,
    })
}

/// The kernel pair of an algebra morphism `k: Y -> W` with its projections,
/// split by `y |-> (y, s(k(y)))` for a chosen section `s` of `k` on its image.
pub fn kernel_pair_split(k: &AlgebraMorphism) -> Result<SplitPair> {
    let y = &k.source;
    let ops = y.carrier.ops();
    let mut pairs = Vec::new();
    for (i, a) in ops.iter().enumerate() {
        for (j, b) in ops.iter().enumerate() {
            if a.out == b.out && a.ins == b.ins && k.values[i] == k.values[j] {
                pairs.push((i, j));
            }
        }
    }
    let name = |(i, j): (usize, usize)| {
        Op::atom(
            &format!("{}&{}", y.show(&ops[i]), y.show(&ops[j])),
            ops[i].out,
            ops[i].ins.clone(),
        )
    };
    let carrier = Signature::new(
        y.colours().clone(),
        pairs.iter().map(|&p| name(p)).collect(),
    )?;
    let pos: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(n, &p)| (p, n)).collect();
    let kp = Algebra::from_fn(y.tag, carrier.clone(), y.bounds, |d| {
        let (c, xi) = d.expect_dec()?;
        let n = carrier
            .ops()
            .iter()
            .position(|o| o == c)
            .expect("carrier op");
        let (i, j) = pairs[n];
        let ai = y.act(&decorate(&ops[i], xi.clone(), d.ins.clone())?)?;
        let aj = y.act(&decorate(&ops[j], xi.clone(), d.ins.clone())?)?;
        let key = (
            y.index_of(ai).expect("carrier"),
            y.index_of(aj).expect("carrier"),
        );
        pos.get(&key)
            .map(|&m| carrier.ops()[m].clone())
            .ok_or_else(|| Error::Validation("kernel pair not closed under the action".into()))
    })?;
    let f = AlgebraMorphism::new(kp.clone(), y.clone(), pairs.iter().map(|p| p.0).collect())?;
    let g = AlgebraMorphism::new(kp, y.clone(), pairs.iter().map(|p| p.1).collect())?;
    let mut section: HashMap<usize, usize> = HashMap::new();
    for (i, &v) in k.values.iter().enumerate() {
        section.entry(v).or_insert(i);
    }
    let t = (0..ops.len())
        .map(|i| pos[&(i, section[&k.values[i]])])
        .collect();
    Ok(SplitPair { f, g, t })
}

/// Orbit count of a one-colour species evaluated at a set of size `v`, by
/// counting fixed points: `(1/n!) Σ_σ |Fix(σ)| · v^cycles(σ)` per arity.
pub fn burnside_count(x: &Algebra, v: usize) -> Result<usize> {
    if x.tag != MonadTag::S || x.colours().len() != 1 {
        return Err(Error::Input(
            "orbit counting needs a one-colour species".into(),
        ));
    }
    let mut by_arity: HashMap<usize, Vec<&Op>> = HashMap::new();
    for a in x.carrier.ops() {
        by_arity.entry(a.arity()).or_default().push(a);
    }
    let mut total = 0;
    for (n, ops) in by_arity {
        let mut sum = 0usize;
        let perms = permutations(n);
        for s in &perms {
            let fixed = ops
                .iter()
                .filter(|a| {
                    x.act(&decorate(a, s.clone(), vec![0; n]).expect("typed"))
                        .ok()
                        == Some(**a)
                })
                .count();
            sum += fixed * v.pow(s.cycle_count() as u32);
        }
        if !sum.is_multiple_of(perms.len()) {
            return Err(Error::Validation(format!(
                "fixed-point sum {sum} not divisible by {n}!"
            )));
        }
        total += sum / perms.len();
    }
    Ok(total)
}

/// A random one-colour species: for each arity up to `max_arity`, up to
/// `max_orbits` transitive pieces `S_n / H` for random subgroups `H`.
pub fn random_species<R: Rng>(rng: &mut R, max_arity: usize, max_orbits: usize) -> Algebra {
    let colours = Colours::single();
    let mut ops = Vec::new();
    let mut orbit_of: Vec<(usize, Arc<Vec<FinMap>>, Vec<FinMap>)> = Vec::new();
    for n in 0..=max_arity {
        let perms = permutations(n);
        for k in 0..rng.gen_range(0..=max_orbits) {
            let gens: Vec<FinMap> = (0..rng.gen_range(0..=2))
                .map(|_| perms.choose(rng).expect("non-empty").clone())
                .collect();
            let h = Arc::new(subgroup_closure(n, &gens));
            let mut cosets: Vec<Vec<FinMap>> = Vec::new();
            for g in &perms {
                let mut c: Vec<FinMap> = h.iter().map(|x| x.then(g).expect("same size")).collect();
                c.sort();
                if !cosets.contains(&c) {
                    cosets.push(c);
                }
            }
            for (ci, c) in cosets.iter().enumerate() {
                ops.push(Op::atom(&format!("e{n}_{k}_{ci}"), 0, vec![0; n]));
                orbit_of.push((n, h.clone(), c.clone()));
            }
        }
    }
    let carrier = Signature::new(colours, ops.clone()).expect("distinct names");
    Algebra::from_fn(MonadTag::S, carrier, Bounds::new(max_arity), |d| {
        let (a, sigma) = d.expect_dec()?;
        let i = ops.iter().position(|o| o == a).expect("carrier op");
        let (_, h, coset) = &orbit_of[i];
        let g = &coset[0];
        let mut moved: Vec<FinMap> = h
            .iter()
            .map(|x| x.then(g).and_then(|y| y.then(sigma)))
            .collect::<Result<_>>()?;
        moved.sort();
        let j = orbit_of
            .iter()
            .position(|(_, h2, c)| Arc::ptr_eq(h2, h) && *c == moved)
            .expect("cosets are permuted");
        Ok(ops[j].clone())
    })
    .expect("coset actions are well typed")
}

/// The subgroup of `S_n` generated by `gens`.
pub fn subgroup_closure(n: usize, gens: &[FinMap]) -> Vec<FinMap> {
    let mut group = vec![FinMap::identity(n)];
    let mut seen: HashSet<FinMap> = group.iter().cloned().collect();
    let mut i = 0;
    while i < group.len() {
        let g = group[i].clone();
        for s in gens {
            let p = g.then(s).expect("same size");
            if seen.insert(p.clone()) {
                group.push(p);
            }
        }
        i += 1;
    }
    group.sort();
    group
}

/// The species with one operation of arity `n` and trivial action.
pub fn trivial_species(n: usize, name: &str) -> Algebra {
    let carrier =
        Signature::new(Colours::single(), vec![Op::atom(name, 0, vec![0; n])]).expect("one op");
    let only = carrier.ops()[0].clone();
    Algebra::from_fn(MonadTag::S, carrier, Bounds::new(n.max(1)), |_| {
        Ok(only.clone())
    })
    .expect("trivial action is typed")
}

/// Two evaluation routes for a free algebra: `F(A) ⋆̈ V` against `A ⋆ V`,
/// related by `<a, v> |-> [<eta(a), v>]`. Returns the bijection size.
pub fn check_free_evaluation(
    tag: MonadTag,
    a: &Signature,
    v: &Slice,
    bounds: Bounds,
) -> Result<usize> {
    let fa = free_algebra(tag, a, bounds);
    let ev = em_eval(&fa, v)?;
    let av = act(a, v)?;
    let mut hit = HashSet::new();
    for e in av.elems() {
        let (op, xs) = e.expect_tuple()?;
        let c = ev.class_of(&Elem::tuple(&eta(op), xs.to_vec())?)?;
        if !hit.insert(c) {
            return Err(Error::Validation(format!(
                "two elements of A ⋆ V meet at {e:?}"
            )));
        }
    }
    if hit.len() != ev.len() {
        return Err(Error::Validation(
            "F(A) ⋆̈ V has classes outside the image of A ⋆ V".into(),
        ));
    }
    Ok(hit.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one() -> Colours {
        Colours::single()
    }

    fn m_sig() -> Signature {
        Signature::new(one(), vec![Op::atom("m", 0, vec![0, 0])]).unwrap()
    }

    fn swap_pair(good: bool) -> Result<Algebra> {
        let e = Op::atom("e", 0, vec![0, 0]);
        let e2 = Op::atom("e'", 0, vec![0, 0]);
        let carrier = Signature::new(one(), vec![e.clone(), e2.clone()]).unwrap();
        let sw = |a: &Op| decorate(a, FinMap::swap2(), vec![0, 0]).unwrap();
        let rows = vec![
            (sw(&e), e2.clone()),
            (sw(&e2), if good { e.clone() } else { e2.clone() }),
        ];
        Algebra::from_rows(MonadTag::S, carrier, Bounds::default(), rows)
    }

    #[test]
    fn free_algebras_validate() {
        for tag in MonadTag::ALL {
            let fa = free_algebra(tag, &m_sig(), Bounds::new(3));
            assert!(fa.validate().is_ok(), "{tag}");
        }
        assert!(
            free_algebra(MonadTag::F, &Signature::empty(one()), Bounds::new(3))
                .carrier()
                .is_empty()
        );
    }

    #[test]
    fn free_s_algebra_is_s2() {
        let fa = free_algebra(MonadTag::S, &m_sig(), Bounds::default());
        assert_eq!(fa.carrier().len(), 2);
        let m = &m_sig().ops()[0].clone();
        let id = eta(m);
        let sw = decorate(m, FinMap::swap2(), vec![0, 0]).unwrap();
        assert_eq!(
            fa.act(&decorate(&id, FinMap::swap2(), vec![0, 0]).unwrap())
                .unwrap(),
            &sw
        );
        assert_eq!(
            fa.act(&decorate(&sw, FinMap::swap2(), vec![0, 0]).unwrap())
                .unwrap(),
            &id
        );
        assert_eq!(fa.act(&eta(&id)).unwrap(), &id);
    }

    #[test]
    fn swap_involution_validates_and_mutant_fails() {
        assert!(swap_pair(true).unwrap().validate().is_ok());
        let bad = swap_pair(false).unwrap().validate().unwrap_err();
        assert!(bad.diagram.contains("multiplicativity"), "{bad}");
    }

    #[test]
    fn trivial_species_evaluates_to_multisets() {
        let e = trivial_species(2, "e");
        let v = Slice::with_sizes(&one(), &[3]);
        assert_eq!(em_eval(&e, &v).unwrap().len(), 6);
        assert_eq!(burnside_count(&e, 3).unwrap(), 6);
        let empty = Slice::with_sizes(&one(), &[0]);
        assert_eq!(em_eval(&e, &empty).unwrap().len(), 0);
    }

    #[test]
    fn free_evaluation_routes_agree() {
        let v = Slice::with_sizes(&one(), &[2]);
        for tag in MonadTag::ALL {
            assert_eq!(
                check_free_evaluation(tag, &m_sig(), &v, Bounds::new(3)).unwrap(),
                4
            );
        }
    }

    #[test]
    fn free_tensor_sizes_match() {
        for tag in [MonadTag::S, MonadTag::R] {
            let w = free_tensor_comparison(tag, &m_sig(), &m_sig(), Bounds::new(4)).unwrap();
            assert_eq!(w.pairs.len(), w.free.carrier().len());
        }
    }

    #[test]
    fn unit_tensor_is_identity() {
        let b = Bounds::new(4);
        let y = free_algebra(MonadTag::S, &m_sig(), b);
        let i = unit_algebra(MonadTag::S, &one(), b);
        let iy = linton_tensor(&i, &y, b).unwrap();
        assert_eq!(iy.arity_counts(), y.carrier().arity_counts());
        for c in iy.algebra.carrier().ops() {
            assert!(y.contains(&lambda_ddot(&iy, c).unwrap()));
        }
        let ii = linton_tensor(&i, &i, b).unwrap();
        for c in ii.algebra.carrier().ops() {
            let l = lambda_ddot(&ii, c).unwrap();
            let r = rho_ddot(&ii, c).unwrap();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn trivial_species_tensor_square() {
        let e = trivial_species(2, "e");
        let ee = linton_tensor(&e, &e, Bounds::new(4)).unwrap();
        // pairings of four points into two unordered pairs
        assert_eq!(ee.arity_counts().get(&4), Some(&3));
    }

    #[test]
    fn epsilon_presentation_coequalizes() {
        let x = swap_pair(true).unwrap();
        let pair = epsilon_presentation(&x).unwrap();
        let report = split_pair_coequalizer_check(&pair, std::slice::from_ref(&x)).unwrap();
        assert_eq!(report.quotient.carrier().len(), x.carrier().len());
        assert!(report.cocones >= 1);
    }

    #[test]
    fn equal_pair_has_identity_quotient() {
        let y = free_algebra(MonadTag::S, &m_sig(), Bounds::default());
        let id = AlgebraMorphism::identity(&y);
        let pair = SplitPair {
            f: id.clone(),
            g: id,
            t: (0..y.carrier().len()).collect(),
        };
        let r = split_pair_coequalizer_check(&pair, std::slice::from_ref(&y)).unwrap();
        assert_eq!(r.quotient.carrier().len(), y.carrier().len());
    }

    #[test]
    fn random_species_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let x = random_species(&mut rng, 3, 2);
            assert!(x.validate().is_ok());
        }
    }

    #[test]
    fn kernel_pair_of_orbit_projection() {
        let y = free_algebra(MonadTag::S, &m_sig(), Bounds::default());
        let w = trivial_species(2, "e");
        let k = AlgebraMorphism::new(y.clone(), w.clone(), vec![0, 0]).unwrap();
        let pair = kernel_pair_split(&k).unwrap();
        let r = split_pair_coequalizer_check(&pair, &[w, y]).unwrap();
        assert_eq!(r.quotient.carrier().len(), 1);
    }
}
