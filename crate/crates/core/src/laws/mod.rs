//! Executable coherence diagrams. Each named diagram is a pair of composite
//! paths over the language in [`dsl`]; a [`FiniteInstance`] supplies the
//! object families, realises object expressions and evaluates single steps,
//! and [`check`] chases every element of every tuple of objects.

pub mod dsl;
pub mod instances;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::signatures::product;
use dsl::{Diagram, Obj, Step, TypedDiagram};

/// A located failure of a law: the diagram, the instance it was evaluated
/// on, the element chased, and the two composite values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub diagram: String,
    pub instance: String,
    pub element: String,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails on {} at {}: {} != {}",
            self.diagram, self.instance, self.element, self.lhs, self.rhs
        )
    }
}

/// Finite data against which diagrams are evaluated: a family of objects per
/// variable, a way to realise object expressions, and the action of each
/// typed step on elements.
pub trait FiniteInstance: Sync {
    type Object: Sync;
    /// A realised object expression.
    type Carrier: Send + Sync;
    type Elem: Clone + PartialEq + Send + Sync;

    fn name(&self) -> String;
    /// The objects a diagram variable ranges over.
    fn family(&self, var: char) -> &[Self::Object];
    fn object_name(&self, object: &Self::Object) -> String;
    /// Whether a tuple of objects, in variable order, is checked at all.
    fn admits(&self, _tuple: &[&Self::Object]) -> bool {
        true
    }
    /// Build the carrier of `obj`; sub-expressions are available through `env`.
    fn realise(&self, obj: &Obj, env: &Env<'_, Self>) -> Result<Self::Carrier>;
    /// The elements chased from a source carrier.
    fn elements(&self, carrier: &Self::Carrier) -> Vec<Self::Elem>;
    /// Apply one typed step to an element of its source.
    fn apply(&self, step: &Step, x: &Self::Elem, env: &Env<'_, Self>) -> Result<Self::Elem>;
    fn show(&self, x: &Self::Elem) -> String;
}

/// Variable bindings for one tuple, with a cache of realised carriers.
pub struct Env<'a, I: FiniteInstance + ?Sized> {
    instance: &'a I,
    bindings: Vec<(char, &'a I::Object)>,
    cache: Mutex<HashMap<Obj, Arc<I::Carrier>>>,
}

impl<'a, I: FiniteInstance + ?Sized> Env<'a, I> {
    pub fn new(instance: &'a I, bindings: Vec<(char, &'a I::Object)>) -> Self {
        Env {
            instance,
            bindings,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn object(&self, var: char) -> Result<&'a I::Object> {
        self.bindings
            .iter()
            .find(|(v, _)| *v == var)
            .map(|(_, o)| *o)
            .ok_or_else(|| Error::Input(format!("variable {var} is unbound")))
    }

    /// The carrier of `obj`, realised once per tuple.
    pub fn carrier(&self, obj: &Obj) -> Result<Arc<I::Carrier>> {
        if let Some(c) = self.cache.lock().expect("cache lock").get(obj) {
            return Ok(c.clone());
        }
        let c = Arc::new(self.instance.realise(obj, self)?);
        self.cache
            .lock()
            .expect("cache lock")
            .insert(obj.clone(), c.clone());
        Ok(c)
    }

    fn describe(&self) -> Vec<Binding> {
        self.bindings
            .iter()
            .map(|(v, o)| Binding {
                var: v.to_string(),
                object: self.instance.object_name(o),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub var: String,
    pub object: String,
}

/// One step of an element chase.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: String,
    pub object: String,
    pub value: String,
}

/// The first failing element of a diagram, with both chases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub diagram: String,
    pub tuple: Vec<Binding>,
    pub element: String,
    pub lhs: Vec<TraceStep>,
    pub rhs: Vec<TraceStep>,
    /// Set when the diagram could not be evaluated at all.
    pub error: Option<String>,
}

/// How much of one diagram was chased.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub diagram: String,
    pub tuples: usize,
    pub elements: usize,
    /// Elements whose chase left the bounded carriers on either side.
    pub skipped: usize,
    pub passed: bool,
}

/// Result of checking a list of diagrams against one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub instance: String,
    pub outcomes: Vec<Outcome>,
    pub failure: Option<Failure>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn elements(&self) -> usize {
        self.outcomes.iter().map(|o| o.elements).sum()
    }

    pub fn skipped(&self) -> usize {
        self.outcomes.iter().map(|o| o.skipped).sum()
    }

    /// The failure as a flat violation record.
    pub fn violation(&self) -> Option<Violation> {
        let f = self.failure.as_ref()?;
        let last = |t: &[TraceStep]| t.last().map(|s| s.value.clone()).unwrap_or_default();
        Some(Violation {
            diagram: f.diagram.clone(),
            instance: self.instance.clone(),
            element: f.element.clone(),
            lhs: last(&f.lhs),
            rhs: last(&f.rhs),
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            let verdict = if o.passed { "pass" } else { "FAIL" };
            write!(
                f,
                "{verdict} {} on {}: {} tuples, {} elements",
                o.diagram, self.instance, o.tuples, o.elements
            )?;
            if o.skipped > 0 {
                write!(f, " ({} beyond the bound)", o.skipped)?;
            }
            writeln!(f)?;
        }
        if let Some(fl) = &self.failure {
            writeln!(f, "first failure: {}", fl.diagram)?;
            for b in &fl.tuple {
                writeln!(f, "  {} = {}", b.var, b.object)?;
            }
            if let Some(e) = &fl.error {
                writeln!(f, "  error: {e}")?;
            }
            writeln!(f, "  element: {}", fl.element)?;
            for (side, trace) in [("lhs", &fl.lhs), ("rhs", &fl.rhs)] {
                writeln!(f, "  {side}:")?;
                for s in trace {
                    writeln!(f, "    {} : {} = {}", s.step, s.object, s.value)?;
                }
            }
        }
        Ok(())
    }
}

/// Where a chase ended.
enum Chased<E> {
    Value(E),
    /// The composite needed data beyond the enumerated carriers.
    Beyond,
    Failed,
}

fn chase<I: FiniteInstance + ?Sized>(
    inst: &I,
    path: &[Step],
    x: &I::Elem,
    env: &Env<'_, I>,
) -> (Chased<I::Elem>, Vec<TraceStep>) {
    let mut cur = x.clone();
    let mut trace = Vec::with_capacity(path.len());
    for s in path {
        match inst.apply(s, &cur, env) {
            Ok(v) => {
                trace.push(TraceStep {
                    step: s.to_string(),
                    object: s.target.to_string(),
                    value: inst.show(&v),
                });
                cur = v;
            }
            Err(e) => {
                trace.push(TraceStep {
                    step: s.to_string(),
                    object: s.target.to_string(),
                    value: format!("error: {e}"),
                });
                let end = match e {
                    Error::Truncation(_) => Chased::Beyond,
                    _ => Chased::Failed,
                };
                return (end, trace);
            }
        }
    }
    (Chased::Value(cur), trace)
}

fn check_tuple<I: FiniteInstance + ?Sized>(
    inst: &I,
    d: &TypedDiagram,
    env: &Env<'_, I>,
) -> (usize, usize, Option<Failure>) {
    let fail = |element: String, lhs, rhs, error| Failure {
        diagram: d.name.to_string(),
        tuple: env.describe(),
        element,
        lhs,
        rhs,
        error,
    };
    let source = match env.carrier(&d.source) {
        Ok(c) => c,
        Err(e) => {
            return (
                0,
                0,
                Some(fail(String::new(), vec![], vec![], Some(e.to_string()))),
            )
        }
    };
    let elems = inst.elements(&source);
    let mut skipped = 0;
    for (n, x) in elems.iter().enumerate() {
        let (l, lt) = chase(inst, &d.lhs, x, env);
        let (r, rt) = chase(inst, &d.rhs, x, env);
        match (&l, &r) {
            (Chased::Value(a), Chased::Value(b)) if a == b => {}
            (Chased::Failed, _) | (_, Chased::Failed) | (Chased::Value(_), Chased::Value(_)) => {
                return (n + 1, skipped, Some(fail(inst.show(x), lt, rt, None)));
            }
            _ => skipped += 1,
        }
    }
    (elems.len(), skipped, None)
}

/// Check every diagram on every tuple drawn from the instance's families.
/// Tuples are chased in parallel under `strategy`; the reported failure is the
/// first in diagram order and then tuple order. An element whose chase hits a
/// truncation overflow on either side is counted as skipped, not as a failure.
pub fn check_with<I: FiniteInstance>(inst: &I, diagrams: &[Diagram], strategy: Strategy) -> Report {
    let mut outcomes = Vec::with_capacity(diagrams.len());
    let mut failure = None;
    for d in diagrams {
        let typed = match d.typed() {
            Ok(t) => t,
            Err(e) => {
                outcomes.push(Outcome {
                    diagram: d.name.into(),
                    tuples: 0,
                    elements: 0,
                    skipped: 0,
                    passed: false,
                });
                failure.get_or_insert(Failure {
                    diagram: d.name.into(),
                    tuple: vec![],
                    element: String::new(),
                    lhs: vec![],
                    rhs: vec![],
                    error: Some(e.to_string()),
                });
                continue;
            }
        };
        let vars = typed.source.vars();
        let families: Vec<Vec<&I::Object>> = vars
            .iter()
            .map(|&v| inst.family(v).iter().collect())
            .collect();
        let refs: Vec<&Vec<&I::Object>> = families.iter().collect();
        let tuples: Vec<_> = product(&refs)
            .into_iter()
            .filter(|t| inst.admits(t))
            .collect();
        let results = exec::map(strategy, &tuples, |t| {
            let env = Env::new(inst, vars.iter().copied().zip(t.iter().copied()).collect());
            check_tuple(inst, &typed, &env)
        });
        let elements = results.iter().map(|(n, _, _)| n).sum();
        let skipped = results.iter().map(|(_, s, _)| s).sum();
        let first = results.into_iter().find_map(|(_, _, f)| f);
        outcomes.push(Outcome {
            diagram: d.name.into(),
            tuples: tuples.len(),
            elements,
            skipped,
            passed: first.is_none(),
        });
        if failure.is_none() {
            failure = first;
        }
    }
    Report {
        instance: inst.name(),
        outcomes,
        failure,
    }
}

pub fn check<I: FiniteInstance>(inst: &I, diagrams: &[Diagram]) -> Report {
    check_with(inst, diagrams, Strategy::default())
}

/// Pentagon and triangle.
pub fn check_mc<I: FiniteInstance>(inst: &I) -> Report {
    check(inst, dsl::MC)
}

/// Lax monoidal functor laws for the functor `F`.
pub fn check_mf<I: FiniteInstance>(inst: &I) -> Report {
    check(inst, dsl::MF)
}

/// Monoidal transformation laws for `τ: F -> G`.
pub fn check_mt<I: FiniteInstance>(inst: &I) -> Report {
    check(inst, dsl::MT)
}

/// Action laws.
pub fn check_ma<I: FiniteInstance>(inst: &I) -> Report {
    check(inst, dsl::MA)
}

/// What a morphism-of-actions check covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionCheck {
    /// `(F, H, ξ)` is a morphism of actions.
    Morphism,
    /// `τ: F -> G` is a transformation between two morphisms of actions.
    Transformation,
}

pub fn check_maf_mat<I: FiniteInstance>(inst: &I, which: ActionCheck) -> Report {
    match which {
        ActionCheck::Morphism => check(inst, dsl::MAF),
        ActionCheck::Transformation => check(inst, dsl::MAT_DIAGRAMS),
    }
}

/// Unit and associativity laws of the monad `T`.
pub fn check_monad<I: FiniteInstance>(inst: &I) -> Report {
    check(inst, dsl::MONAD)
}

/// `θ: S -> T` commutes with units and multiplications.
pub fn check_monad_morphism<I: FiniteInstance>(inst: &I) -> Report {
    check(inst, dsl::MONAD_MORPHISM)
}
