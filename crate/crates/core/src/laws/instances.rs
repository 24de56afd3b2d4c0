//! Finite instances for the diagram checkers: the substitution tensor, the
//! decoration monads as lax monoidal monads, Kleisli and Eilenberg-Moore
//! tensors, and the action of signatures on slices.

use std::collections::HashMap;

use super::dsl::{Obj, Prim, Side, Step, StepKind};
use super::{Env, FiniteInstance};
use crate::em::{
    alpha_ddot, lambda_ddot, linton_tensor, rho_ddot, unit_algebra, Algebra, LintonTensor,
};
use crate::error::{Error, Result};
use crate::monads::{
    apply_monad, eta, evaluate, mu, phi, phi0, submonad_inclusion, tmap, Bounds, MonadTag,
};
use crate::signatures::{
    alpha, lambda, product, rho, tensor_bounded, tensor_map, unit, Colours, Elem, Op, Signature,
    Slice,
};

fn unsupported(step: &Step) -> Error {
    Error::Input(format!("step {step} is not interpreted by this instance"))
}

fn common_colours<'a>(mut all: impl Iterator<Item = &'a Colours>) -> Result<Colours> {
    let first = all
        .next()
        .ok_or_else(|| Error::Input("empty object family".into()))?
        .clone();
    if all.any(|c| *c != first) {
        return Err(Error::ColourMismatch(
            "object family over different colour sets".into(),
        ));
    }
    Ok(first)
}

fn bounded_tensor(l: &Signature, r: &Signature, bounds: Bounds) -> Result<Signature> {
    tensor_bounded(l, r, Some(bounds.max_arity))
}

/// Evaluate the steps that only use the plain tensor structure: identities,
/// `α`, `λ`, `ρ` and tensors of steps. `None` if `step` is of another kind.
fn structural(step: &Step, x: &Op, rec: &dyn Fn(&Step, &Op) -> Result<Op>) -> Option<Result<Op>> {
    Some(match &step.kind {
        StepKind::Id => Ok(x.clone()),
        StepKind::Prim(Prim::Alpha(_)) => alpha(x),
        StepKind::Prim(Prim::Lambda(_)) => lambda(x),
        StepKind::Prim(Prim::Rho(_)) => rho(x),
        StepKind::Tensor(_, f, g) => tensor_map(x, &|a| rec(f, a), &|b| rec(g, b)),
        _ => return None,
    })
}

/// `(Sig_O, ⊗, I)` with its associator and unitors, chased on every element
/// of arity at most the bound. Optionally the associator has two of its
/// values swapped.
#[derive(Clone, Debug)]
pub struct TensorInstance {
    family: Vec<Signature>,
    colours: Colours,
    bounds: Bounds,
    swap: Option<(Op, Op)>,
}

impl TensorInstance {
    pub fn new(family: Vec<Signature>, bounds: Bounds) -> Result<Self> {
        let colours = common_colours(family.iter().map(Signature::colours))?;
        Ok(TensorInstance {
            family,
            colours,
            bounds,
            swap: None,
        })
    }

    /// The same instance with `α(x)` and `α(y)` exchanged.
    pub fn with_swapped_alpha(mut self, x: Op, y: Op) -> Self {
        self.swap = Some((x, y));
        self
    }

    /// Two elements of some `A ⊗ (B ⊗ C)` with the same typing and distinct
    /// associator images, from the first triple of the family that has them.
    pub fn swap_candidates(&self) -> Option<(Op, Op)> {
        let fam: Vec<&Signature> = self.family.iter().collect();
        let lists = [&fam, &fam, &fam];
        for t in product(&lists) {
            let bc = bounded_tensor(t[1], t[2], self.bounds).ok()?;
            let abc = bounded_tensor(t[0], &bc, self.bounds).ok()?;
            let mut seen: HashMap<(usize, Vec<usize>), &Op> = HashMap::new();
            for e in abc.ops() {
                if let Some(prev) = seen.insert((e.out, e.ins.clone()), e) {
                    if alpha(prev).ok() != alpha(e).ok() {
                        return Some((prev.clone(), e.clone()));
                    }
                }
            }
        }
        None
    }

    fn eval(&self, step: &Step, x: &Op) -> Result<Op> {
        if let (StepKind::Prim(Prim::Alpha(_)), Some((p, q))) = (&step.kind, &self.swap) {
            if x == p {
                return alpha(q);
            }
            if x == q {
                return alpha(p);
            }
        }
        structural(step, x, &|s, y| self.eval(s, y)).unwrap_or_else(|| Err(unsupported(step)))
    }
}

fn plain_realise<I>(
    obj: &Obj,
    env: &Env<'_, I>,
    colours: &Colours,
    bounds: Bounds,
    sig: impl Fn(&I::Carrier) -> Result<Signature>,
    var: impl Fn(&I::Object) -> Result<Signature>,
) -> Result<Signature>
where
    I: FiniteInstance + ?Sized,
{
    match obj {
        Obj::Var(v) => var(env.object(*v)?),
        Obj::Unit(_) => Ok(unit(colours)),
        Obj::Tensor(_, l, r) => {
            bounded_tensor(&sig(&*env.carrier(l)?)?, &sig(&*env.carrier(r)?)?, bounds)
        }
        _ => Err(Error::Input(format!(
            "{obj} is not a plain signature expression"
        ))),
    }
}

impl FiniteInstance for TensorInstance {
    type Object = Signature;
    type Carrier = Signature;
    type Elem = Op;

    fn name(&self) -> String {
        let tag = if self.swap.is_some() {
            " with a swapped associator entry"
        } else {
            ""
        };
        format!("substitution tensor over {:?}{tag}", self.colours)
    }

    fn family(&self, _var: char) -> &[Signature] {
        &self.family
    }

    fn object_name(&self, s: &Signature) -> String {
        format!("{s:?}")
    }

    fn realise(&self, obj: &Obj, env: &Env<'_, Self>) -> Result<Signature> {
        plain_realise(
            obj,
            env,
            &self.colours,
            self.bounds,
            |c| Ok(c.clone()),
            |s| Ok(s.clone()),
        )
    }

    fn elements(&self, c: &Signature) -> Vec<Op> {
        c.ops().to_vec()
    }

    fn apply(&self, step: &Step, x: &Op, _env: &Env<'_, Self>) -> Result<Op> {
        self.eval(step, x)
    }

    fn show(&self, x: &Op) -> String {
        x.name(&self.colours)
    }
}

/// How a functor letter is interpreted on signatures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Id,
    Once(MonadTag),
    Twice(MonadTag),
}

impl Role {
    fn on_signature(self, a: &Signature, bounds: Bounds) -> Signature {
        match self {
            Role::Id => a.clone(),
            Role::Once(t) => apply_monad(t, a, bounds),
            Role::Twice(t) => apply_monad(t, &apply_monad(t, a, bounds), bounds),
        }
    }

    fn on_map(self, x: &Op, f: &dyn Fn(&Op) -> Result<Op>) -> Result<Op> {
        match self {
            Role::Id => f(x),
            Role::Once(_) => tmap(x, f, None),
            Role::Twice(_) => tmap(x, &|y| tmap(y, f, None), None),
        }
    }

    /// The lax structure: identity, `phi`, or `T(phi) ∘ phi`.
    fn phi(self, x: &Op) -> Result<Op> {
        match self {
            Role::Id => Ok(x.clone()),
            Role::Once(_) => phi(x),
            Role::Twice(_) => tmap(&phi(x)?, &phi, None),
        }
    }

    fn phi0(self, x: &Op) -> Result<Op> {
        match self {
            Role::Id => Ok(x.clone()),
            Role::Once(_) => phi0(x),
            Role::Twice(_) => tmap(&phi0(x)?, &phi0, None),
        }
    }
}

/// The component interpreting `τ` or `θ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Eta,
    Mu,
    Inclusion(MonadTag, MonadTag),
}

impl Component {
    fn apply(self, x: &Op) -> Result<Op> {
        match self {
            Component::Eta => Ok(eta(x)),
            Component::Mu => mu(x),
            Component::Inclusion(s, t) if s == t => Ok(x.clone()),
            Component::Inclusion(s, t) => submonad_inclusion(s, t, x),
        }
    }
}

/// A decoration monad on `(Sig_O, ⊗)`, with functor letters interpreted by
/// [`Role`]s and `τ`/`θ` by a [`Component`].
#[derive(Clone, Debug)]
pub struct DecorationInstance {
    label: String,
    family: Vec<Signature>,
    colours: Colours,
    bounds: Bounds,
    roles: Vec<(char, Role)>,
    component: Option<Component>,
}

impl DecorationInstance {
    fn build(
        label: String,
        family: Vec<Signature>,
        bounds: Bounds,
        roles: Vec<(char, Role)>,
        component: Option<Component>,
    ) -> Result<Self> {
        let colours = common_colours(family.iter().map(Signature::colours))?;
        Ok(DecorationInstance {
            label,
            family,
            colours,
            bounds,
            roles,
            component,
        })
    }

    /// `(T, phi, phi0)` as the lax monoidal functor `F`.
    pub fn lax_functor(tag: MonadTag, family: Vec<Signature>, bounds: Bounds) -> Result<Self> {
        Self::build(
            format!("({tag}, φ, φ0)"),
            family,
            bounds,
            vec![('F', Role::Once(tag))],
            None,
        )
    }

    /// `η: 1 -> T` as a monoidal transformation.
    pub fn unit_transformation(
        tag: MonadTag,
        family: Vec<Signature>,
        bounds: Bounds,
    ) -> Result<Self> {
        let roles = vec![('F', Role::Id), ('G', Role::Once(tag))];
        Self::build(
            format!("η: 1 -> {tag}"),
            family,
            bounds,
            roles,
            Some(Component::Eta),
        )
    }

    /// `μ: TT -> T` as a monoidal transformation.
    pub fn multiplication_transformation(
        tag: MonadTag,
        family: Vec<Signature>,
        bounds: Bounds,
    ) -> Result<Self> {
        let roles = vec![('F', Role::Twice(tag)), ('G', Role::Once(tag))];
        Self::build(
            format!("μ: {tag}{tag} -> {tag}"),
            family,
            bounds,
            roles,
            Some(Component::Mu),
        )
    }

    /// `(T, η, μ)` as the monad `T`.
    pub fn monad(tag: MonadTag, family: Vec<Signature>, bounds: Bounds) -> Result<Self> {
        Self::build(
            format!("monad {tag}"),
            family,
            bounds,
            vec![('T', Role::Once(tag))],
            None,
        )
    }

    /// The inclusion `θ: S -> T` of decoration monads.
    pub fn inclusion(
        sub: MonadTag,
        sup: MonadTag,
        family: Vec<Signature>,
        bounds: Bounds,
    ) -> Result<Self> {
        let roles = vec![('S', Role::Once(sub)), ('T', Role::Once(sup))];
        let c = Some(Component::Inclusion(sub, sup));
        Self::build(
            format!("inclusion {sub} -> {sup}"),
            family,
            bounds,
            roles,
            c,
        )
    }

    /// Replace the interpretation of `τ` or `θ`.
    pub fn with_component(mut self, c: Component) -> Self {
        self.component = Some(c);
        self
    }

    fn role(&self, f: char) -> Result<Role> {
        self.roles
            .iter()
            .find(|(g, _)| *g == f)
            .map(|(_, r)| *r)
            .ok_or_else(|| Error::Input(format!("functor {f} is not interpreted")))
    }

    fn component(&self) -> Result<Component> {
        self.component
            .ok_or_else(|| Error::Input("no transformation component".into()))
    }

    fn eval(&self, step: &Step, x: &Op) -> Result<Op> {
        if let Some(r) = structural(step, x, &|s, y| self.eval(s, y)) {
            return r;
        }
        match &step.kind {
            StepKind::Ap(f, inner) => self.role(*f)?.on_map(x, &|y| self.eval(inner, y)),
            StepKind::Prim(Prim::Phi(f)) => self.role(*f)?.phi(x),
            StepKind::Prim(Prim::Phi0(f)) => self.role(*f)?.phi0(x),
            StepKind::Prim(Prim::Tau | Prim::Theta) => self.component()?.apply(x),
            StepKind::Prim(Prim::Eta(_)) => Ok(eta(x)),
            StepKind::Prim(Prim::Mu(_)) => mu(x),
            _ => Err(unsupported(step)),
        }
    }
}

impl FiniteInstance for DecorationInstance {
    type Object = Signature;
    type Carrier = Signature;
    type Elem = Op;

    fn name(&self) -> String {
        format!("{} over {:?}", self.label, self.colours)
    }

    fn family(&self, _var: char) -> &[Signature] {
        &self.family
    }

    fn object_name(&self, s: &Signature) -> String {
        format!("{s:?}")
    }

    fn realise(&self, obj: &Obj, env: &Env<'_, Self>) -> Result<Signature> {
        match obj {
            Obj::Ap(f, x) => Ok(self.role(*f)?.on_signature(&*env.carrier(x)?, self.bounds)),
            _ => plain_realise(
                obj,
                env,
                &self.colours,
                self.bounds,
                |c| Ok(c.clone()),
                |s| Ok(s.clone()),
            ),
        }
    }

    fn elements(&self, c: &Signature) -> Vec<Op> {
        c.ops().to_vec()
    }

    fn apply(&self, step: &Step, x: &Op, _env: &Env<'_, Self>) -> Result<Op> {
        self.eval(step, x)
    }

    fn show(&self, x: &Op) -> String {
        x.name(&self.colours)
    }
}

/// Which part of the Kleisli structure is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KleisliView {
    /// `(Kl(T), ⊗̇)` with `F_T`-images of the coherences, chased on all of `T(source)`.
    Coherence,
    /// `(U_T, u̇): (Kl(T), ⊗̇) -> (Sig_O, ⊗)` as the lax functor `F`.
    Forgetful,
}

#[derive(Clone, Debug)]
pub struct KleisliInstance {
    tag: MonadTag,
    family: Vec<Signature>,
    colours: Colours,
    bounds: Bounds,
    view: KleisliView,
}

impl KleisliInstance {
    pub fn new(
        tag: MonadTag,
        view: KleisliView,
        family: Vec<Signature>,
        bounds: Bounds,
    ) -> Result<Self> {
        let colours = common_colours(family.iter().map(Signature::colours))?;
        Ok(KleisliInstance {
            tag,
            family,
            colours,
            bounds,
            view,
        })
    }

    /// The Kleisli map of a step of the domain: `z |-> T(target)`.
    fn kleisli(&self, step: &Step, z: &Op) -> Result<Op> {
        match &step.kind {
            StepKind::Id => Ok(eta(z)),
            StepKind::Prim(Prim::Alpha(Side::Dom)) => Ok(eta(&alpha(z)?)),
            StepKind::Prim(Prim::Lambda(Side::Dom)) => Ok(eta(&lambda(z)?)),
            StepKind::Prim(Prim::Rho(Side::Dom)) => Ok(eta(&rho(z)?)),
            StepKind::Tensor(Side::Dom, f, g) => {
                let (a, bs) = z.expect_pair()?;
                let top = self.kleisli(f, a)?;
                let children = bs
                    .iter()
                    .map(|b| self.kleisli(g, b))
                    .collect::<Result<Vec<_>>>()?;
                phi(&Op::pair(&top, children)?)
            }
            _ => Err(unsupported(step)),
        }
    }

    /// The Kleisli extension `mu ∘ T(k)` of a domain step.
    fn extend(&self, step: &Step, d: &Op) -> Result<Op> {
        mu(&tmap(d, &|z| self.kleisli(step, z), None)?)
    }

    fn eval_plain(&self, step: &Step, x: &Op) -> Result<Op> {
        if let Some(r) = structural(step, x, &|s, y| self.eval_plain(s, y)) {
            return r;
        }
        match &step.kind {
            StepKind::Prim(Prim::Phi('F')) => phi(x),
            StepKind::Prim(Prim::Phi0('F')) => phi0(x),
            StepKind::Ap('F', inner) => self.extend(inner, x),
            _ => Err(unsupported(step)),
        }
    }
}

impl FiniteInstance for KleisliInstance {
    type Object = Signature;
    type Carrier = Signature;
    type Elem = Op;

    fn name(&self) -> String {
        let what = match self.view {
            KleisliView::Coherence => "Kleisli tensor",
            KleisliView::Forgetful => "(U_T, u̇)",
        };
        format!("{what} for {} over {:?}", self.tag, self.colours)
    }

    fn family(&self, _var: char) -> &[Signature] {
        &self.family
    }

    fn object_name(&self, s: &Signature) -> String {
        format!("{s:?}")
    }

    fn realise(&self, obj: &Obj, env: &Env<'_, Self>) -> Result<Signature> {
        match obj {
            Obj::Ap('F', x) => Ok(apply_monad(self.tag, &*env.carrier(x)?, self.bounds)),
            _ => plain_realise(
                obj,
                env,
                &self.colours,
                self.bounds,
                |c| Ok(c.clone()),
                |s| Ok(s.clone()),
            ),
        }
    }

    fn elements(&self, c: &Signature) -> Vec<Op> {
        match self.view {
            KleisliView::Coherence => apply_monad(self.tag, c, self.bounds).ops().to_vec(),
            KleisliView::Forgetful => c.ops().to_vec(),
        }
    }

    fn apply(&self, step: &Step, x: &Op, _env: &Env<'_, Self>) -> Result<Op> {
        match self.view {
            KleisliView::Coherence => self.extend(step, x),
            KleisliView::Forgetful => self.eval_plain(step, x),
        }
    }

    fn show(&self, x: &Op) -> String {
        x.name(&self.colours)
    }
}

/// Which part of the Eilenberg-Moore structure is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LintonView {
    /// `(Sig_O^T, ⊗̈, Ï)` with `α̈, λ̈, ρ̈`.
    Coherence,
    /// `(U^T, ü, ǖ)` as the lax functor `F`; `drop_q` replaces `ü = q ∘ η` by `η`.
    Forgetful { drop_q: bool },
    /// `β: (T U^T, T(ü) ∘ φ, T(ǖ) ∘ φ0) -> (U^T, ü, ǖ)` as `τ: F -> G`.
    Beta,
}

#[derive(Clone, Debug)]
pub enum LintonCarrier {
    Algebra(Algebra),
    Linton(Box<LintonTensor>),
    Plain(Signature),
}

impl LintonCarrier {
    fn algebra(&self) -> Result<&Algebra> {
        match self {
            LintonCarrier::Algebra(a) => Ok(a),
            LintonCarrier::Linton(l) => Ok(&l.algebra),
            LintonCarrier::Plain(_) => Err(Error::Input("expected an algebra".into())),
        }
    }

    fn linton(&self) -> Result<&LintonTensor> {
        match self {
            LintonCarrier::Linton(l) => Ok(l),
            _ => Err(Error::Input("expected a Linton tensor".into())),
        }
    }

    fn signature(&self) -> &Signature {
        match self {
            LintonCarrier::Algebra(a) => a.carrier(),
            LintonCarrier::Linton(l) => l.algebra.carrier(),
            LintonCarrier::Plain(s) => s,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LintonInstance {
    tag: MonadTag,
    family: Vec<Algebra>,
    colours: Colours,
    bounds: Bounds,
    view: LintonView,
    max_heavy: Option<usize>,
}

impl LintonInstance {
    pub fn new(
        tag: MonadTag,
        view: LintonView,
        family: Vec<Algebra>,
        bounds: Bounds,
    ) -> Result<Self> {
        let colours = common_colours(family.iter().map(Algebra::colours))?;
        if family.iter().any(|a| a.tag() != tag) {
            return Err(Error::Input(format!(
                "family contains algebras for another monad than {tag}"
            )));
        }
        Ok(LintonInstance {
            tag,
            family,
            colours,
            bounds,
            view,
            max_heavy: None,
        })
    }

    /// Only check tuples with at most `n` algebras having an operation of
    /// arity two or more.
    pub fn with_max_heavy(mut self, n: usize) -> Self {
        self.max_heavy = Some(n);
        self
    }

    /// The Linton tensor named by the argument of a `φ` step's target `F(X ⊗ Y)`.
    fn tensor_under(
        &self,
        target: &Obj,
        env: &Env<'_, Self>,
    ) -> Result<std::sync::Arc<LintonCarrier>> {
        match target {
            Obj::Ap(_, inner) => env.carrier(inner),
            _ => Err(Error::Input(format!("{target} is not a functor image"))),
        }
    }

    fn u_ddot(&self, step: &Step, x: &Op, env: &Env<'_, Self>) -> Result<Op> {
        if self.view == (LintonView::Forgetful { drop_q: true }) {
            return Ok(eta(x));
        }
        self.tensor_under(&step.target, env)?.linton()?.u_ddot(x)
    }

    fn eval(&self, step: &Step, x: &Op, env: &Env<'_, Self>) -> Result<Op> {
        let beta = self.view == LintonView::Beta;
        match &step.kind {
            StepKind::Prim(Prim::Alpha(Side::Dom)) => {
                let src = env.carrier(&step.source)?;
                let (a, b) = match &step.source {
                    Obj::Tensor(_, a, bc) => match &**bc {
                        Obj::Tensor(_, b, _) => ((**a).clone(), (**b).clone()),
                        _ => return Err(unsupported(step)),
                    },
                    _ => return Err(unsupported(step)),
                };
                let xy = env.carrier(&Obj::tensor(Side::Dom, a, b))?;
                let tgt = env.carrier(&step.target)?;
                alpha_ddot(src.linton()?, xy.linton()?, tgt.linton()?, x)
            }
            StepKind::Prim(Prim::Lambda(Side::Dom)) => {
                lambda_ddot(env.carrier(&step.source)?.linton()?, x)
            }
            StepKind::Prim(Prim::Rho(Side::Dom)) => {
                rho_ddot(env.carrier(&step.source)?.linton()?, x)
            }
            StepKind::Tensor(Side::Dom, f, g) => {
                let src = env.carrier(&step.source)?;
                let tgt = env.carrier(&step.target)?;
                let tgt = tgt.linton()?;
                let on_pair =
                    |z: &Op| tensor_map(z, &|a| self.eval(f, a, env), &|b| self.eval(g, b, env));
                src.linton()?
                    .on_class(x, |d| tgt.q(&tmap(d, &on_pair, None)?))
            }
            StepKind::Ap('F', inner) if beta => tmap(x, &|y| self.eval(inner, y, env), None),
            StepKind::Ap(_, inner) => self.eval(inner, x, env),
            StepKind::Prim(Prim::Phi('F')) if beta => {
                let l = self.tensor_under(&step.target, env)?;
                let l = l.linton()?;
                tmap(&phi(x)?, &|w| l.u_ddot(w), None)
            }
            StepKind::Prim(Prim::Phi(_)) => self.u_ddot(step, x, env),
            StepKind::Prim(Prim::Phi0('F')) if beta => tmap(&phi0(x)?, &phi0, None),
            StepKind::Prim(Prim::Phi0(_)) => phi0(x),
            StepKind::Prim(Prim::Tau) if beta => {
                let inner = match &step.source {
                    Obj::Ap(_, i) => env.carrier(i)?,
                    _ => return Err(unsupported(step)),
                };
                inner.algebra()?.act(x).cloned()
            }
            _ => structural(step, x, &|s, y| self.eval(s, y, env))
                .unwrap_or_else(|| Err(unsupported(step))),
        }
    }
}

impl FiniteInstance for LintonInstance {
    type Object = Algebra;
    type Carrier = LintonCarrier;
    type Elem = Op;

    fn name(&self) -> String {
        let what = match self.view {
            LintonView::Coherence => "Linton tensor".to_string(),
            LintonView::Forgetful { drop_q: false } => "(U^T, ü)".to_string(),
            LintonView::Forgetful { drop_q: true } => "(U^T, η) without q".to_string(),
            LintonView::Beta => "β: T U^T -> U^T".to_string(),
        };
        format!("{what} for {} over {:?}", self.tag, self.colours)
    }

    fn family(&self, _var: char) -> &[Algebra] {
        &self.family
    }

    fn object_name(&self, a: &Algebra) -> String {
        format!("{a:?}")
    }

    fn admits(&self, tuple: &[&Algebra]) -> bool {
        let heavy = tuple
            .iter()
            .filter(|a| a.carrier().max_arity() >= 2)
            .count();
        self.max_heavy.is_none_or(|n| heavy <= n)
    }

    fn realise(&self, obj: &Obj, env: &Env<'_, Self>) -> Result<LintonCarrier> {
        Ok(match obj {
            Obj::Var(v) => LintonCarrier::Algebra(env.object(*v)?.clone()),
            Obj::Unit(Side::Dom) => {
                LintonCarrier::Algebra(unit_algebra(self.tag, &self.colours, self.bounds))
            }
            Obj::Tensor(Side::Dom, x, y) => {
                let (x, y) = (env.carrier(x)?, env.carrier(y)?);
                LintonCarrier::Linton(Box::new(linton_tensor(
                    x.algebra()?,
                    y.algebra()?,
                    self.bounds,
                )?))
            }
            Obj::Unit(Side::Cod) => LintonCarrier::Plain(unit(&self.colours)),
            Obj::Tensor(Side::Cod, x, y) => {
                let (x, y) = (env.carrier(x)?, env.carrier(y)?);
                LintonCarrier::Plain(bounded_tensor(x.signature(), y.signature(), self.bounds)?)
            }
            Obj::Ap('F', x) if self.view == LintonView::Beta => LintonCarrier::Plain(apply_monad(
                self.tag,
                env.carrier(x)?.signature(),
                self.bounds,
            )),
            Obj::Ap(_, x) => LintonCarrier::Plain(env.carrier(x)?.signature().clone()),
            Obj::Act(..) => {
                return Err(Error::Input(format!("{obj} is not an algebra expression")))
            }
        })
    }

    fn elements(&self, c: &LintonCarrier) -> Vec<Op> {
        c.signature().ops().to_vec()
    }

    fn apply(&self, step: &Step, x: &Op, env: &Env<'_, Self>) -> Result<Op> {
        self.eval(step, x, env)
    }

    fn show(&self, x: &Op) -> String {
        x.name(&self.colours)
    }
}

/// Objects of the action instance: signatures act on slices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionObject {
    Signature(Signature),
    Slice(Slice),
}

/// Elements chased through action diagrams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Op(Op),
    Elem(Elem),
}

/// A realised object: a signature, or slice elements with their leaf counts.
#[derive(Clone, Debug)]
pub enum ActionCarrier {
    Signature(Signature),
    Elems(Vec<(Elem, usize)>),
}

/// `⋆` restricted to elements with at most `max` leaves, where a leaf is an
/// element of the innermost slice.
fn act_weighted(a: &Signature, xs: &[(Elem, usize)], max: usize) -> Result<Vec<(Elem, usize)>> {
    fn go(
        op: &Op,
        slot: usize,
        left: usize,
        xs: &[(Elem, usize)],
        cur: &mut Vec<Elem>,
        weight: usize,
        out: &mut Vec<(Elem, usize)>,
    ) -> Result<()> {
        if slot == op.arity() {
            out.push((Elem::tuple(op, cur.clone())?, weight));
            return Ok(());
        }
        for (x, w) in xs {
            if x.colour == op.ins[slot] && *w <= left {
                cur.push(x.clone());
                go(op, slot + 1, left - w, xs, cur, weight + w, out)?;
                cur.pop();
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    for op in a.ops() {
        go(op, 0, max, xs, &mut Vec::new(), 0, &mut out)?;
    }
    Ok(out)
}

/// `(Sig_O, ⊗)` acting on slices by `⋆`, and morphisms of such actions
/// `(F, H, ξ)` with `H` the identity and `ξ` the evaluation.
#[derive(Clone, Debug)]
pub struct ActionInstance {
    label: String,
    signatures: Vec<ActionObject>,
    slices: Vec<ActionObject>,
    colours: Colours,
    bounds: Bounds,
    roles: Vec<(char, Role)>,
    component: Option<Component>,
}

impl ActionInstance {
    fn build(
        label: String,
        signatures: Vec<Signature>,
        slices: Vec<Slice>,
        bounds: Bounds,
        roles: Vec<(char, Role)>,
        component: Option<Component>,
    ) -> Result<Self> {
        let colours = common_colours(
            signatures
                .iter()
                .map(Signature::colours)
                .chain(slices.iter().map(Slice::colours)),
        )?;
        Ok(ActionInstance {
            label,
            signatures: signatures
                .into_iter()
                .map(ActionObject::Signature)
                .collect(),
            slices: slices.into_iter().map(ActionObject::Slice).collect(),
            colours,
            bounds,
            roles,
            component,
        })
    }

    /// The action `⋆` with `ψ` and `ψ0`.
    pub fn action(signatures: Vec<Signature>, slices: Vec<Slice>, bounds: Bounds) -> Result<Self> {
        Self::build("action ⋆".into(), signatures, slices, bounds, vec![], None)
    }

    /// `(T, 1, ev)` with `ev: T(A) ⋆ X -> A ⋆ X`.
    pub fn evaluation(
        tag: MonadTag,
        signatures: Vec<Signature>,
        slices: Vec<Slice>,
        bounds: Bounds,
    ) -> Result<Self> {
        let roles = vec![('F', Role::Once(tag))];
        Self::build(
            format!("evaluation for {tag}"),
            signatures,
            slices,
            bounds,
            roles,
            None,
        )
    }

    /// `η` as a transformation from `(1, 1, id)` to `(T, 1, ev)`.
    pub fn unit_transformation(
        tag: MonadTag,
        signatures: Vec<Signature>,
        slices: Vec<Slice>,
        bounds: Bounds,
    ) -> Result<Self> {
        let roles = vec![('F', Role::Id), ('G', Role::Once(tag))];
        let label = format!("η into the evaluation for {tag}");
        Self::build(
            label,
            signatures,
            slices,
            bounds,
            roles,
            Some(Component::Eta),
        )
    }

    fn role(&self, f: char) -> Result<Role> {
        if f == 'H' {
            return Ok(Role::Id);
        }
        self.roles
            .iter()
            .find(|(g, _)| *g == f)
            .map(|(_, r)| *r)
            .ok_or_else(|| Error::Input(format!("functor {f} is not interpreted")))
    }

    fn eval_op(&self, step: &Step, x: &Op) -> Result<Op> {
        if let Some(r) = structural(step, x, &|s, y| self.eval_op(s, y)) {
            return r;
        }
        match &step.kind {
            StepKind::Ap(f, inner) => self.role(*f)?.on_map(x, &|y| self.eval_op(inner, y)),
            StepKind::Prim(Prim::Phi(f)) => self.role(*f)?.phi(x),
            StepKind::Prim(Prim::Phi0(f)) => self.role(*f)?.phi0(x),
            StepKind::Prim(Prim::Tau) => self
                .component
                .ok_or_else(|| Error::Input("no transformation component".into()))?
                .apply(x),
            _ => Err(unsupported(step)),
        }
    }

    fn eval_elem(&self, step: &Step, x: &Elem) -> Result<Elem> {
        match &step.kind {
            StepKind::Id => Ok(x.clone()),
            StepKind::Prim(Prim::Psi(_)) => {
                let (a, ys) = x.expect_tuple()?;
                let mut bs = Vec::with_capacity(ys.len());
                let mut leaves = Vec::new();
                for y in ys {
                    let (b, zs) = y.expect_tuple()?;
                    bs.push(b.clone());
                    leaves.extend_from_slice(zs);
                }
                Elem::tuple(&Op::pair(a, bs)?, leaves)
            }
            StepKind::Prim(Prim::Psi0(_)) => Elem::tuple(&Op::unit(x.colour), vec![x.clone()]),
            StepKind::Act(_, f, g) => {
                let (a, ys) = x.expect_tuple()?;
                let a = self.eval_op(f, a)?;
                let ys = ys
                    .iter()
                    .map(|y| self.eval_elem(g, y))
                    .collect::<Result<Vec<_>>>()?;
                Elem::tuple(&a, ys)
            }
            StepKind::Prim(Prim::Xi(f)) => match self.role(*f)? {
                Role::Id => Ok(x.clone()),
                Role::Once(_) => evaluate(x),
                Role::Twice(_) => Err(unsupported(step)),
            },
            StepKind::Ap('H', inner) => self.eval_elem(inner, x),
            _ => Err(unsupported(step)),
        }
    }
}

impl FiniteInstance for ActionInstance {
    type Object = ActionObject;
    type Carrier = ActionCarrier;
    type Elem = Value;

    fn name(&self) -> String {
        format!("{} over {:?}", self.label, self.colours)
    }

    fn family(&self, var: char) -> &[ActionObject] {
        if "XYZ".contains(var) {
            &self.slices
        } else {
            &self.signatures
        }
    }

    fn object_name(&self, o: &ActionObject) -> String {
        match o {
            ActionObject::Signature(s) => format!("{s:?}"),
            ActionObject::Slice(x) => format!("{x:?}"),
        }
    }

    fn realise(&self, obj: &Obj, env: &Env<'_, Self>) -> Result<ActionCarrier> {
        let sig = |o: &Obj| -> Result<Signature> {
            match &*env.carrier(o)? {
                ActionCarrier::Signature(s) => Ok(s.clone()),
                ActionCarrier::Elems(_) => Err(Error::Input(format!("{o} is not a signature"))),
            }
        };
        Ok(match obj {
            Obj::Var(v) => match env.object(*v)? {
                ActionObject::Signature(s) => ActionCarrier::Signature(s.clone()),
                ActionObject::Slice(x) => {
                    ActionCarrier::Elems(x.elems().iter().map(|e| (e.clone(), 1)).collect())
                }
            },
            Obj::Unit(_) => ActionCarrier::Signature(unit(&self.colours)),
            Obj::Tensor(_, l, r) => {
                ActionCarrier::Signature(bounded_tensor(&sig(l)?, &sig(r)?, self.bounds)?)
            }
            Obj::Ap('H', x) => (*env.carrier(x)?).clone(),
            Obj::Ap(f, x) => {
                ActionCarrier::Signature(self.role(*f)?.on_signature(&sig(x)?, self.bounds))
            }
            Obj::Act(_, a, x) => {
                let xs = match &*env.carrier(x)? {
                    ActionCarrier::Elems(xs) => xs.clone(),
                    ActionCarrier::Signature(_) => {
                        return Err(Error::Input(format!("{x} is not a slice")))
                    }
                };
                ActionCarrier::Elems(act_weighted(&sig(a)?, &xs, self.bounds.max_arity)?)
            }
        })
    }

    fn elements(&self, c: &ActionCarrier) -> Vec<Value> {
        match c {
            ActionCarrier::Signature(s) => s.ops().iter().cloned().map(Value::Op).collect(),
            ActionCarrier::Elems(xs) => xs.iter().map(|(e, _)| Value::Elem(e.clone())).collect(),
        }
    }

    fn apply(&self, step: &Step, x: &Value, _env: &Env<'_, Self>) -> Result<Value> {
        match x {
            Value::Op(o) => self.eval_op(step, o).map(Value::Op),
            Value::Elem(e) => self.eval_elem(step, e).map(Value::Elem),
        }
    }

    fn show(&self, x: &Value) -> String {
        match x {
            Value::Op(o) => o.name(&self.colours),
            Value::Elem(e) => e.name(&self.colours),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::{
        check_ma, check_maf_mat, check_mc, check_mf, check_monad, check_mt, ActionCheck,
    };

    fn one() -> Colours {
        Colours::single()
    }

    fn small_family() -> Vec<Signature> {
        vec![
            Signature::new(one(), vec![Op::atom("e", 0, vec![])]).unwrap(),
            Signature::new(
                one(),
                vec![Op::atom("m", 0, vec![0, 0]), Op::atom("e", 0, vec![])],
            )
            .unwrap(),
            Signature::new(one(), vec![Op::atom("s", 0, vec![0])]).unwrap(),
        ]
    }

    #[test]
    fn tensor_is_coherent_and_a_swap_is_caught() {
        let inst = TensorInstance::new(small_family(), Bounds::new(3)).unwrap();
        let r = check_mc(&inst);
        assert!(r.passed(), "{r}");
        let (x, y) = inst.swap_candidates().unwrap();
        let bad = inst.with_swapped_alpha(x, y);
        let r = check_mc(&bad);
        let f = r.failure.as_ref().expect("corrupted α must fail");
        assert_eq!(f.diagram, "MC1");
        assert_eq!(f.lhs.len(), 2);
        assert_eq!(f.rhs.len(), 3);
    }

    #[test]
    fn decoration_monads_are_lax_monoidal_monads() {
        for tag in [MonadTag::F, MonadTag::S, MonadTag::R] {
            let b = Bounds::new(2);
            let fam = small_family();
            assert!(check_monad(&DecorationInstance::monad(tag, fam.clone(), b).unwrap()).passed());
            assert!(
                check_mf(&DecorationInstance::lax_functor(tag, fam.clone(), b).unwrap()).passed()
            );
            let r =
                check_mt(&DecorationInstance::unit_transformation(tag, fam.clone(), b).unwrap());
            assert!(r.passed(), "{r}");
            let r =
                check_mt(&DecorationInstance::multiplication_transformation(tag, fam, b).unwrap());
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn kleisli_tensor_is_coherent_and_forgetful_is_lax() {
        let b = Bounds::new(2);
        for tag in [MonadTag::S, MonadTag::R] {
            let inst =
                KleisliInstance::new(tag, KleisliView::Coherence, small_family(), b).unwrap();
            let r = check_mc(&inst);
            assert!(r.passed(), "{r}");
            let inst =
                KleisliInstance::new(tag, KleisliView::Forgetful, small_family(), b).unwrap();
            let r = check_mf(&inst);
            assert!(r.passed(), "{r}");
        }
    }

    fn free_family(tag: MonadTag, b: Bounds) -> Vec<Algebra> {
        let mut fam: Vec<Algebra> = small_family()
            .iter()
            .map(|s| crate::em::free_algebra(tag, s, b))
            .collect();
        fam.push(unit_algebra(tag, &one(), b));
        fam
    }

    #[test]
    fn linton_structure_passes_and_dropping_q_fails_mf1() {
        let b = Bounds::new(2);
        let fam = free_family(MonadTag::S, b);
        let inst = |view| LintonInstance::new(MonadTag::S, view, fam.clone(), b).unwrap();
        let r = check_mc(&inst(LintonView::Coherence));
        assert!(r.passed(), "{r}");
        assert!(r.elements() > r.skipped());
        let r = check_mf(&inst(LintonView::Forgetful { drop_q: false }));
        assert!(r.passed(), "{r}");
        let r = check_mt(&inst(LintonView::Beta));
        assert!(r.passed(), "{r}");
        let r = check_mf(&inst(LintonView::Forgetful { drop_q: true }));
        let f = r.failure.as_ref().expect("ü without q must fail");
        assert_eq!(f.diagram, "MF1");
    }

    #[test]
    fn heavy_tuples_can_be_excluded() {
        let b = Bounds::new(2);
        let inst = LintonInstance::new(
            MonadTag::R,
            LintonView::Forgetful { drop_q: false },
            free_family(MonadTag::R, b),
            b,
        )
        .unwrap()
        .with_max_heavy(1);
        let r = check_mf(&inst);
        assert!(r.passed(), "{r}");
        // one heavy algebra (on {m, e}) among four: 3 + 3*9 tuples with at most one
        assert_eq!(r.outcomes[0].tuples, 27 + 27);
    }

    #[test]
    fn a_wrong_transformation_component_fails() {
        let inst =
            DecorationInstance::unit_transformation(MonadTag::S, small_family(), Bounds::new(3))
                .unwrap()
                .with_component(Component::Mu);
        assert!(!check_mt(&inst).passed());
    }

    #[test]
    fn action_laws_and_evaluation() {
        let sl = vec![Slice::with_sizes(&one(), &[2])];
        let b = Bounds::new(3);
        let r = check_ma(&ActionInstance::action(small_family(), sl.clone(), b).unwrap());
        assert!(r.passed(), "{r}");
        let r = check_maf_mat(
            &ActionInstance::evaluation(MonadTag::S, small_family(), sl.clone(), b).unwrap(),
            ActionCheck::Morphism,
        );
        assert!(r.passed(), "{r}");
        let r = check_maf_mat(
            &ActionInstance::unit_transformation(MonadTag::S, small_family(), sl, b).unwrap(),
            ActionCheck::Transformation,
        );
        assert!(r.passed(), "{r}");
        assert!(r.elements() > 0);
    }
}
