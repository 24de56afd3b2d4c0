//! Named check suites over bounded families. Each suite returns one line per
//! check; the command line and the acceptance tests run the same suites.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::em::{
    burnside_count, em_eval, enumerate_algebra_morphisms, epsilon_presentation, free_algebra,
    free_tensor_comparison, kernel_pair_split, random_species, split_pair_coequalizer_check,
    trivial_species, unit_algebra, Algebra, AlgebraMorphism,
};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::functor_rep::{
    check_em_weakly_cartesian, check_kleisli_cartesian, em_square, is_cartesian, is_weak_pullback,
    test_morphisms,
};
use crate::kleisli::{
    enumerate_kleisli, kleisli_compose, kleisli_free, kleisli_tensor, KleisliMorphism,
};
use crate::laws::instances::{
    DecorationInstance, KleisliInstance, KleisliView, LintonInstance, LintonView,
};
use crate::laws::{self, Failure, FiniteInstance, Report};
use crate::monads::{Bounds, MonadTag};
use crate::operads::{check_distributive_law, TreeBounds};
use crate::presheaf_cat::{
    check_analytic_equivalence, check_co_yoneda, check_discrete_act, check_discrete_lan,
    check_discrete_tensor, enumerate_categories, generated_table, presheaf_from_slice,
    symmetrize_cat, table_from_species, FinCat, Presheaf,
};
use crate::signatures::{
    check_frobenius, op_letter, product, signature_family, slice_family, typings, ColourMap,
    Colours, FamilyBounds, Op, Signature, Slice, SliceMap,
};

/// Seed of the randomized checks when none is given.
pub const DEFAULT_SEED: u64 = 20_240_613;

/// Suite names in the order `all` runs them.
pub const SUITES: [&str; 11] = [
    "monad",
    "lax",
    "kleisli",
    "linton",
    "split",
    "evaluation",
    "comb",
    "cartesian",
    "coend",
    "analytic",
    "frobenius",
];

/// Knobs shared by every suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    /// Arity bound for enumerated operations; every family is derived from it.
    pub max_arity: usize,
    pub seed: u64,
    pub strategy: Strategy,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            max_arity: 3,
            seed: DEFAULT_SEED,
            strategy: Strategy::default(),
        }
    }
}

impl Settings {
    /// The bound for families where arity 3 is beyond the time budget.
    fn small(&self) -> usize {
        self.max_arity.min(2)
    }
}

/// One check of a suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// The first failing diagram instance of a law check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckLine>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        writeln!(f, "suite {}: {verdict}", self.suite)?;
        for c in &self.checks {
            let v = if c.passed { "pass" } else { "FAIL" };
            writeln!(f, "  {v} {}: {}", c.name, c.detail)?;
            if let Some(fl) = &c.failure {
                let r = Report {
                    instance: c.name.clone(),
                    outcomes: vec![],
                    failure: Some(fl.clone()),
                };
                for line in r.to_string().lines() {
                    writeln!(f, "    {line}")?;
                }
            }
        }
        Ok(())
    }
}

/// Run the suite called `name`.
pub fn run(name: &str, settings: &Settings) -> Result<SuiteReport> {
    let checks = match name {
        "monad" => monad_suite(settings),
        "lax" => lax_suite(settings),
        "kleisli" => kleisli_suite(settings),
        "linton" => linton_suite(settings),
        "split" => split_suite(settings),
        "evaluation" => evaluation_suite(settings),
        "comb" => comb_suite(settings),
        "cartesian" => cartesian_suite(settings),
        "coend" => coend_suite(settings),
        "analytic" => analytic_suite(settings),
        "frobenius" => frobenius_suite(settings),
        _ => {
            return Err(Error::Input(format!(
                "unknown suite {name}; expected one of {} or all",
                SUITES.join(", ")
            )))
        }
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        checks,
    })
}

/// Every suite, in [`SUITES`] order.
pub fn run_all(settings: &Settings) -> Vec<SuiteReport> {
    SUITES
        .iter()
        .map(|s| run(s, settings).expect("listed suites exist"))
        .collect()
}

fn line(name: impl Into<String>, outcome: Result<String>) -> CheckLine {
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    CheckLine {
        name: name.into(),
        passed,
        detail,
        failure: None,
    }
}

fn law_line(report: Report) -> CheckLine {
    let diagrams: Vec<&str> = report.outcomes.iter().map(|o| o.diagram.as_str()).collect();
    let tuples: usize = report.outcomes.iter().map(|o| o.tuples).sum();
    let mut detail = format!(
        "{} on {tuples} tuples, {} elements",
        diagrams.join(" "),
        report.elements()
    );
    if report.skipped() > 0 {
        detail.push_str(&format!(", {} beyond the bound", report.skipped()));
    }
    CheckLine {
        name: report.instance.clone(),
        passed: report.passed(),
        detail,
        failure: report.failure,
    }
}

fn law<I: FiniteInstance>(
    inst: Result<I>,
    family: &str,
    diagrams: &[laws::dsl::Diagram],
    strategy: Strategy,
) -> CheckLine {
    match inst {
        Ok(i) => {
            let mut l = law_line(laws::check_with(&i, diagrams, strategy));
            l.name = format!("{}; {family}", l.name);
            l
        }
        Err(e) => line(family, Err(e)),
    }
}

/// One signature per operation typing over `colours` colours.
pub fn single_op_family(colours: usize, max_arity: usize) -> Vec<Signature> {
    typings(colours, max_arity)
        .into_iter()
        .map(|(out, ins)| {
            Signature::new(Colours::numbered(colours), vec![Op::atom("a", out, ins)])
                .expect("one operation")
        })
        .collect()
}

/// One operation of every typing over `colours` colours.
pub fn all_typings_signature(colours: usize, max_arity: usize) -> Signature {
    let ops = typings(colours, max_arity)
        .into_iter()
        .enumerate()
        .map(|(i, (out, ins))| Op::atom(&op_letter(i), out, ins))
        .collect();
    Signature::new(Colours::numbered(colours), ops).expect("distinct names")
}

/// Families of signatures for multi-variable diagrams, each with a label
/// and its bound.
fn law_families(tag: MonadTag, s: &Settings) -> Vec<(String, Vec<Signature>, Bounds)> {
    let wide = match tag {
        MonadTag::F => s.small(),
        _ => s.max_arity,
    };
    let small = s.small();
    vec![
        (
            format!("single operations, arity ≤ {wide}"),
            single_op_family(1, wide),
            Bounds::new(wide),
        ),
        (
            format!("all typings in one signature, arity ≤ {small}"),
            vec![all_typings_signature(1, small)],
            Bounds::new(small),
        ),
        (
            format!("single operations, arity ≤ {small}"),
            single_op_family(2, small),
            Bounds::new(small),
        ),
    ]
}

fn monad_suite(s: &Settings) -> Vec<CheckLine> {
    let mut out = Vec::new();
    let all = FamilyBounds {
        max_arity: s.max_arity,
        ..FamilyBounds::default()
    };
    for tag in [MonadTag::S, MonadTag::R] {
        for colours in 1..=all.max_colours {
            let fam: Vec<Signature> = signature_family(all)
                .into_iter()
                .filter(|a| a.colours().len() == colours)
                .collect();
            out.push(law(
                DecorationInstance::monad(tag, fam, Bounds::new(s.max_arity)),
                &format!(
                    "every signature with ≤ {} operations, arity ≤ {}",
                    all.max_ops, s.max_arity
                ),
                laws::dsl::MONAD,
                s.strategy,
            ));
        }
    }
    // T preserves coproducts and each monad law has one variable, so single
    // operations cover every signature; F is checked that way alone.
    for tag in [MonadTag::F] {
        for colours in 1..=2 {
            let fam = single_op_family(colours, s.max_arity);
            out.push(law(
                DecorationInstance::monad(tag, fam, Bounds::new(s.max_arity)),
                &format!("single operations, arity ≤ {}", s.max_arity),
                laws::dsl::MONAD,
                s.strategy,
            ));
        }
    }
    out
}

fn lax_suite(s: &Settings) -> Vec<CheckLine> {
    let mut out = Vec::new();
    for tag in MonadTag::ALL {
        for (label, fam, b) in law_families(tag, s) {
            out.push(law(
                DecorationInstance::lax_functor(tag, fam.clone(), b),
                &label,
                laws::dsl::MF,
                s.strategy,
            ));
            out.push(law(
                DecorationInstance::unit_transformation(tag, fam.clone(), b),
                &label,
                laws::dsl::MT,
                s.strategy,
            ));
            out.push(law(
                DecorationInstance::multiplication_transformation(tag, fam, b),
                &label,
                laws::dsl::MT,
                s.strategy,
            ));
        }
    }
    for (sub, sup) in [
        (MonadTag::S, MonadTag::R),
        (MonadTag::R, MonadTag::F),
        (MonadTag::S, MonadTag::F),
    ] {
        for (label, fam, b) in law_families(sup, s) {
            out.push(law(
                DecorationInstance::inclusion(sub, sup, fam, b),
                &label,
                laws::dsl::MONAD_MORPHISM,
                s.strategy,
            ));
        }
    }
    out
}

/// Every plain colour-preserving map `a -> b`, as images of the operations.
fn plain_maps(a: &Signature, b: &Signature) -> Vec<Vec<Op>> {
    let choices: Vec<Vec<Op>> = a
        .ops()
        .iter()
        .map(|x| {
            b.ops()
                .iter()
                .filter(|y| y.out == x.out && y.ins == x.ins)
                .cloned()
                .collect()
        })
        .collect();
    let refs: Vec<&Vec<Op>> = choices.iter().collect();
    product(&refs)
}

fn free_of(tag: MonadTag, a: &Signature, b: &Signature, images: &[Op]) -> Result<KleisliMorphism> {
    kleisli_free(tag, a, b, &|x| {
        let i = a.ops().iter().position(|y| y == x).expect("source op");
        Ok(images[i].clone())
    })
}

/// `F_T(h) ⊗̇ F_T(k) = F_T(h ⊗ k)` and `F_T(h') ∘ F_T(h) = F_T(h' ∘ h)` on
/// every pair of plain maps between the given signatures.
fn check_free_strictness(tag: MonadTag, family: &[Signature]) -> Result<String> {
    let mut maps = Vec::new();
    for a in family {
        for b in family {
            for images in plain_maps(a, b) {
                maps.push((a, b, images));
            }
        }
    }
    let mut tensors = 0;
    let mut composites = 0;
    for (a, b, h) in &maps {
        let fh = free_of(tag, a, b, h)?;
        for (c, d, k) in &maps {
            let fk = free_of(tag, c, d, k)?;
            let lhs = kleisli_tensor(&fh, &fk)?;
            let ac = crate::signatures::tensor(a, c)?;
            let bd = crate::signatures::tensor(b, d)?;
            let on = |x: &Op| -> Result<Op> {
                let (top, children) = x.expect_pair()?;
                let i = a.ops().iter().position(|y| y == top).expect("source op");
                let kids = children
                    .iter()
                    .map(|ch| {
                        let j = c.ops().iter().position(|y| y == ch).expect("source op");
                        k[j].clone()
                    })
                    .collect();
                Op::pair(&h[i], kids)
            };
            let rhs = kleisli_free(tag, &ac, &bd, &on)?;
            if lhs != rhs {
                return Err(Error::Validation(format!(
                    "F(h) ⊗̇ F(k) differs from F(h ⊗ k) for {a:?} -> {b:?} and {c:?} -> {d:?}"
                )));
            }
            tensors += 1;
            if b == c {
                let composite: Vec<Op> = h
                    .iter()
                    .map(|x| {
                        let j = c.ops().iter().position(|y| y == x).expect("target op");
                        k[j].clone()
                    })
                    .collect();
                let lhs = kleisli_compose(&fk, &fh)?;
                if lhs != free_of(tag, a, d, &composite)? {
                    return Err(Error::Validation(format!(
                        "F(k) ∘ F(h) differs from F(k ∘ h) for {a:?} -> {b:?} -> {d:?}"
                    )));
                }
                composites += 1;
            }
        }
    }
    Ok(format!(
        "{} free maps, {tensors} tensors, {composites} composites",
        maps.len()
    ))
}

fn kleisli_suite(s: &Settings) -> Vec<CheckLine> {
    let mut out = Vec::new();
    let family = signature_family(FamilyBounds {
        max_ops: 2,
        max_arity: s.small(),
        max_colours: 1,
    });
    for tag in MonadTag::ALL {
        out.push(line(
            format!("⊗̇ strict on η-images for {tag}"),
            check_free_strictness(tag, &family),
        ));
        for (label, fam, b) in law_families(tag, s) {
            out.push(law(
                KleisliInstance::new(tag, KleisliView::Coherence, fam.clone(), b),
                &label,
                laws::dsl::MC,
                s.strategy,
            ));
            out.push(law(
                KleisliInstance::new(tag, KleisliView::Forgetful, fam, b),
                &label,
                laws::dsl::MF,
                s.strategy,
            ));
        }
    }
    out
}

/// Free algebras on single-operation signatures, plus the unit algebra.
fn free_family(tag: MonadTag, colours: usize, b: Bounds) -> Vec<Algebra> {
    let mut fam: Vec<Algebra> = single_op_family(colours, b.max_arity)
        .iter()
        .map(|a| free_algebra(tag, a, b))
        .collect();
    fam.push(unit_algebra(tag, &Colours::numbered(colours), b));
    fam
}

/// Algebra families for the Linton suite, with a cap on heavy tuples.
fn linton_families(s: &Settings) -> Vec<(MonadTag, Vec<Algebra>, Bounds, Option<usize>)> {
    let (wide, small) = (Bounds::new(s.max_arity), Bounds::new(s.small()));
    vec![
        (MonadTag::S, free_family(MonadTag::S, 1, wide), wide, None),
        (MonadTag::S, free_family(MonadTag::S, 2, small), small, None),
        (
            MonadTag::R,
            free_family(MonadTag::R, 1, small),
            small,
            Some(2),
        ),
    ]
}

fn linton_label(b: Bounds, heavy: Option<usize>) -> String {
    let base = format!(
        "free on single operations and unit, arity ≤ {}",
        b.max_arity
    );
    match heavy {
        Some(h) => format!("{base}, ≤ {h} with binary operations"),
        None => base,
    }
}

fn linton_suite(s: &Settings) -> Vec<CheckLine> {
    let mut out = Vec::new();
    for (tag, fam, b, heavy) in linton_families(s) {
        for (view, diagrams) in [
            (LintonView::Coherence, laws::dsl::MC),
            (LintonView::Forgetful { drop_q: false }, laws::dsl::MF),
            (LintonView::Beta, laws::dsl::MT),
        ] {
            let inst = LintonInstance::new(tag, view, fam.clone(), b)
                .map(|i| heavy.map_or(i.clone(), |h| i.with_max_heavy(h)));
            out.push(law(inst, &linton_label(b, heavy), diagrams, s.strategy));
        }
    }
    for (tag, colours) in [(MonadTag::S, 1), (MonadTag::S, 2), (MonadTag::R, 1)] {
        let b = if colours == 1 && tag == MonadTag::S {
            Bounds::new(s.max_arity)
        } else {
            Bounds::new(s.small())
        };
        let fam = single_op_family(colours, b.max_arity);
        out.push(line(
            format!("v̈ bijective for {tag} on {colours} colour(s)"),
            free_pairs(tag, &fam, b, s.strategy),
        ));
    }
    out
}

/// `F(A) ⊗̈ F(B) ≅ F(A ⊗ B)` with matching arity counts for every pair.
fn free_pairs(
    tag: MonadTag,
    family: &[Signature],
    b: Bounds,
    strategy: Strategy,
) -> Result<String> {
    let pairs: Vec<(&Signature, &Signature)> = family
        .iter()
        .flat_map(|x| family.iter().map(move |y| (x, y)))
        .collect();
    let results = exec::map(strategy, &pairs, |(x, y)| {
        free_tensor_comparison(tag, x, y, b).map(|w| w.pairs.len())
    });
    let mut classes = 0;
    for r in results {
        classes += r?;
    }
    Ok(format!("{} pairs, {classes} classes matched", pairs.len()))
}

fn split_suite(s: &Settings) -> Vec<CheckLine> {
    let mut out = Vec::new();
    let small = s.small();
    let family = signature_family(FamilyBounds {
        max_ops: 2,
        max_arity: small,
        max_colours: 1,
    });
    for tag in [MonadTag::S, MonadTag::R] {
        out.push(line(
            format!("free(A) ⊗̈ free(B) ≅ free(A ⊗ B) for {tag}"),
            free_pairs(tag, &family, Bounds::new(small), s.strategy),
        ));
    }
    out.push(line("split coequalizers of presentations", {
        let b = Bounds::new(small);
        let mut algebras: Vec<Algebra> = single_op_family(1, small)
            .iter()
            .map(|a| free_algebra(MonadTag::S, a, b))
            .collect();
        algebras.push(trivial_species(2, "e"));
        (|| {
            let mut cocones = 0;
            for x in &algebras {
                let pair = epsilon_presentation(x)?;
                let r = split_pair_coequalizer_check(&pair, std::slice::from_ref(x))?;
                if r.quotient.carrier().len() != x.carrier().len() {
                    return Err(Error::Validation(format!(
                        "presentation of {x:?} does not coequalize to it"
                    )));
                }
                cocones += r.cocones;
            }
            let k = orbit_projection()?;
            let r = split_pair_coequalizer_check(
                &kernel_pair_split(&k)?,
                &[k.target.clone(), k.source.clone()],
            )?;
            cocones += r.cocones;
            Ok(format!(
                "{} presentations and one kernel pair, {cocones} cocones",
                algebras.len()
            ))
        })()
    }));
    out
}

fn one() -> Colours {
    Colours::single()
}

fn binary() -> Signature {
    Signature::new(one(), vec![Op::atom("m", 0, vec![0, 0])]).expect("one op")
}

/// The orbit projection from the free species on a binary operation onto
/// the binary species with trivial action.
pub fn orbit_projection() -> Result<AlgebraMorphism> {
    let y = free_algebra(MonadTag::S, &binary(), Bounds::new(2));
    AlgebraMorphism::new(y, trivial_species(2, "e"), vec![0, 0])
}

fn evaluation_suite(s: &Settings) -> Vec<CheckLine> {
    let v3 = Slice::with_sizes(&one(), &[3]);
    let mut out = vec![line(
        "trivial binary species at |V| = 3",
        em_eval(&trivial_species(2, "e"), &v3).and_then(|e| match e.classes.len() {
            6 => Ok("6 classes".to_string()),
            n => Err(Error::Validation(format!("{n} classes, expected 6"))),
        }),
    )];
    out.push(line(format!("20 random species, seed {}", s.seed), {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        (|| {
            let mut total = 0;
            for k in 0..20 {
                let x = random_species(&mut rng, s.max_arity, 2);
                for n in 0..=3 {
                    let v = Slice::with_sizes(&one(), &[n]);
                    let got = em_eval(&x, &v)?.classes.len();
                    let want = burnside_count(&x, n)?;
                    if got != want {
                        return Err(Error::Validation(format!(
                            "species {k} at |V| = {n}: {got} classes, {want} orbits"
                        )));
                    }
                    total += got;
                }
            }
            Ok(format!("80 evaluations, {total} classes in all"))
        })()
    }));
    out
}

fn comb_suite(s: &Settings) -> Vec<CheckLine> {
    let bounds = TreeBounds::new(s.max_arity, 3).with_nodes(3);
    let two = Colours::numbered(2);
    let mut sigs = vec![all_typings_signature(1, s.small())];
    if s.max_arity >= 3 {
        sigs.push(
            Signature::new(
                one(),
                vec![Op::atom("t", 0, vec![0; 3]), Op::atom("e", 0, vec![])],
            )
            .expect("distinct names"),
        );
    }
    sigs.push(
        Signature::new(
            two,
            vec![
                Op::atom("m", 0, vec![0, 1]),
                Op::atom("u", 1, vec![1]),
                Op::atom("e", 1, vec![]),
                Op::atom("p", 0, vec![1, 1]),
            ],
        )
        .expect("distinct names"),
    );
    sigs.iter()
        .map(|a| {
            line(
                format!("combing over {a:?}"),
                check_distributive_law(a, bounds)
                    .map(|r| {
                        format!(
                            "unit {} + {}, multiplication {} + {}, {} evaluations",
                            r.unit_plain,
                            r.unit_corolla,
                            r.mult_symmetric,
                            r.mult_tree,
                            r.evaluations
                        )
                    })
                    .map_err(|v| Error::Validation(v.to_string())),
            )
        })
        .collect()
}

/// S-algebras used for the weak-pullback checks.
fn em_test_algebras(b: Bounds) -> Vec<Algebra> {
    let mut out: Vec<Algebra> = single_op_family(1, 2)
        .iter()
        .map(|a| free_algebra(MonadTag::S, a, b))
        .collect();
    out.push(trivial_species(2, "e"));
    out.push(trivial_species(0, "p"));
    out
}

fn cartesian_suite(s: &Settings) -> Vec<CheckLine> {
    let tests: Vec<SliceMap> = test_morphisms(&one(), 3);
    let b = Bounds::new(s.small());
    let family = signature_family(FamilyBounds {
        max_ops: 2,
        max_arity: s.small(),
        max_colours: 1,
    });
    let kleisli = line(
        format!(
            "Kleisli-induced transformations for S at {} squares each",
            tests.len()
        ),
        (|| {
            let mut morphisms = 0;
            for a in &family {
                for t in &family {
                    for f in enumerate_kleisli(MonadTag::S, a, t, b)? {
                        check_kleisli_cartesian(&f, &tests)?;
                        morphisms += 1;
                    }
                }
            }
            Ok(format!("{morphisms} morphisms, all squares pullbacks"))
        })(),
    );
    let em = line(
        "EM-induced transformations",
        (|| {
            let algebras = em_test_algebras(b);
            let mut morphisms = 0;
            let mut strict = 0;
            for x in &algebras {
                for y in &algebras {
                    for h in enumerate_algebra_morphisms(x, y) {
                        strict += check_em_weakly_cartesian(&h, &tests)?;
                        morphisms += 1;
                    }
                }
            }
            Ok(format!(
                "{morphisms} morphisms, all squares weak pullbacks, {strict} not pullbacks"
            ))
        })(),
    );
    let witness = line(
        "separating witness",
        (|| {
            let h = orbit_projection()?;
            separating_square(&h, &tests)
        })(),
    );
    vec![kleisli, em, witness]
}

/// Find a test square of `h` that is a weak pullback but not a pullback,
/// having checked every square is a weak pullback.
pub fn separating_square(h: &AlgebraMorphism, tests: &[SliceMap]) -> Result<String> {
    let mut found = None;
    for g in tests {
        let sq = em_square(h, g)?;
        if !is_weak_pullback(&sq) {
            return Err(Error::Validation(format!(
                "square at {:?} is not a weak pullback",
                g.values
            )));
        }
        if found.is_none() && !is_cartesian(&sq) {
            found = Some(g.values.clone());
        }
    }
    match found {
        Some(v) => Ok(format!("weak pullback, not a pullback, at {v:?}")),
        None => Err(Error::Validation("every square is a pullback".into())),
    }
}

fn coend_suite(s: &Settings) -> Vec<CheckLine> {
    let yoneda = line(
        "co-Yoneda on categories with ≤ 3 objects, ≤ 6 morphisms",
        {
            let cats = enumerate_categories(3, 6);
            let results = exec::map(s.strategy, &cats, check_co_yoneda);
            results
                .into_iter()
                .collect::<Result<Vec<usize>>>()
                .map(|ns| {
                    format!(
                        "{} categories, {} isomorphisms",
                        cats.len(),
                        ns.iter().sum::<usize>()
                    )
                })
        },
    );
    let len = s.small();
    let discrete = line(
        format!("discrete base, word length ≤ {len}"),
        (|| {
            let mut family = signature_family(FamilyBounds {
                max_ops: 2,
                max_arity: len,
                max_colours: 1,
            });
            family.extend(single_op_family(2, len));
            let mut matched = 0;
            for a in &family {
                for b in family.iter().filter(|b| b.colours() == a.colours()) {
                    matched += check_discrete_tensor(a, b, len)?;
                }
                for x in slice_family(a.colours(), 3) {
                    matched += check_discrete_act(a, &x, len)?;
                }
            }
            for x in em_test_algebras(Bounds::new(len)) {
                for v in slice_family(&one(), 3) {
                    matched += check_discrete_lan(&x, &v)?;
                }
            }
            Ok(format!(
                "{} signatures, {matched} elements matched",
                family.len()
            ))
        })(),
    );
    vec![yoneda, discrete]
}

fn analytic_suite(s: &Settings) -> Vec<CheckLine> {
    let terminal = line(
        "trivial binary species over the terminal category",
        (|| {
            let t = table_from_species(&trivial_species(2, "e"))?;
            let v = presheaf_from_slice(&Slice::with_sizes(&one(), &[3]));
            let w = check_analytic_equivalence(&t.table, &v)?;
            match w.sizes.as_slice() {
                [6] => Ok("6 classes".to_string()),
                other => Err(Error::Validation(format!("sizes {other:?}, expected [6]"))),
            }
        })(),
    );
    let species = line(
        format!("random species, seed {}", s.seed),
        (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            let mut checked = 0;
            for _ in 0..10 {
                let x = random_species(&mut rng, s.max_arity, 2);
                let t = table_from_species(&x)?;
                for n in 0..=3 {
                    let v = Slice::with_sizes(&one(), &[n]);
                    let w = check_analytic_equivalence(&t.table, &presheaf_from_slice(&v))?;
                    let want = em_eval(&x, &v)?.classes.len();
                    if w.sizes != [want] {
                        return Err(Error::Validation(format!(
                            "sizes {:?} against {want} from the evaluation",
                            w.sizes
                        )));
                    }
                    checked += 1;
                }
            }
            Ok(format!("{checked} evaluations agree"))
        })(),
    );
    let arrow = line(
        "symmetrized tables over the walking arrow",
        (|| {
            let cat = Arc::new(FinCat::walking_arrow());
            let gens: [&[(usize, Vec<usize>)]; 3] = [
                &[(1, vec![0, 1])],
                &[(0, vec![1, 1]), (1, vec![])],
                &[(1, vec![0]), (0, vec![0, 0])],
            ];
            let mut checked = 0;
            for g in gens {
                let table = symmetrize_cat(&generated_table(&cat, 2, g)?.table)?;
                for x in [
                    Presheaf::representable(&cat, 0),
                    Presheaf::representable(&cat, 1),
                    Presheaf::terminal(&cat),
                ] {
                    check_analytic_equivalence(&table.table, &x)?;
                    checked += 1;
                }
            }
            Ok(format!("{checked} table-presheaf pairs"))
        })(),
    );
    vec![terminal, species, arrow]
}

fn frobenius_suite(s: &Settings) -> Vec<CheckLine> {
    let arity = s.small();
    vec![line(
        format!("all colour maps between ≤ 2 colours, arity ≤ {arity}"),
        (|| {
            let mut witnesses = 0;
            let mut elements = 0;
            for m in 1..=2 {
                for n in 1..=2 {
                    let (src, tgt) = (Colours::numbered(m), Colours::numbered(n));
                    let maps: Vec<Vec<usize>> = {
                        let all: Vec<usize> = (0..n).collect();
                        let slots: Vec<&Vec<usize>> = std::iter::repeat_n(&all, m).collect();
                        product(&slots)
                    };
                    for values in maps {
                        let u = ColourMap::new(src.clone(), tgt.clone(), values)?;
                        let mut sigs = single_op_family(m, arity);
                        sigs.push(all_typings_signature(m, arity));
                        for a in &sigs {
                            for y in slice_family(&tgt, 3) {
                                let w = check_frobenius(&u, a, &y)?;
                                elements += w.bijection.len();
                                witnesses += 1;
                            }
                        }
                    }
                }
            }
            Ok(format!("{witnesses} bijections, {elements} elements"))
        })(),
    )]
}
