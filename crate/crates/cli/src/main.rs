//! Command-line front end: build, transform, evaluate and law-check
//! signatures, algebras, trees and tables stored as JSON documents.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use polyana::em::{em_eval, linton_tensor};
use polyana::exec::Strategy;
use polyana::functor_rep::eval_polynomial;
use polyana::io::{self, render};
use polyana::kleisli::kleisli_compose;
use polyana::monads::{apply_monad, Bounds, MonadTag};
use polyana::operads::{comb, enumerate_trees, free_symmetric_operad, TreeBounds};
use polyana::presheaf_cat::{act_cat, lan_iota, symmetrize_cat};
use polyana::signatures::{tensor, unit, Signature, Slice};
use polyana::suites::{self, Settings, SuiteReport, DEFAULT_SEED, SUITES};
use polyana::Error;

mod fixtures;

/// Arity bound; `default` is 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Bound(usize);

impl FromStr for Bound {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "default" => Ok(Bound(Settings::default().max_arity)),
            _ => s
                .parse()
                .map(Bound)
                .map_err(|_| format!("expected a number or \"default\", got {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(
    name = "polyana",
    version,
    about = "Coloured signatures, decoration monads and their algebras over finite data"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Arity bound for enumerations, or "default".
    #[arg(long, global = true, default_value = "default")]
    bound: Bound,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Substitution tensor A ⊗ B of two signatures.
    Tensor { a: PathBuf, b: PathBuf },
    /// The unit signature on the colours of a signature.
    Unit { a: PathBuf },
    /// T(A) for a monad F, S or R, up to the arity bound.
    Monad { tag: MonadTag, a: PathBuf },
    /// Symmetrization of a table over a finite category.
    Symmetrize { table: PathBuf },
    /// The Kleisli composite g ∘ f.
    KleisliCompose { g: PathBuf, f: PathBuf },
    /// Linton tensor of two algebras, up to the arity bound.
    LintonTensor { x: PathBuf, y: PathBuf },
    /// The polynomial functor of a signature at a slice object.
    Eval { a: PathBuf, x: PathBuf },
    /// The analytic functor of an algebra at a slice object.
    EmEval { x: PathBuf, v: PathBuf },
    /// Term trees of the free multicategory, with leaves and depth up to the bound.
    FreeMulticat { a: PathBuf },
    /// Comb a tree decorated by permutations into a plain tree and one leaf permutation.
    Comb { tree: PathBuf },
    /// Operations of the free symmetric operad on a species.
    FreeSymop { x: PathBuf },
    /// The action coend of a table on a presheaf.
    Coend { table: PathBuf, x: PathBuf },
    /// Left Kan extension of a symmetric table applied to a presheaf.
    Lan { table: PathBuf, x: PathBuf },
    /// Run law suites.
    Check {
        /// A suite name or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        /// Also round-trip every document in this directory.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

/// The serialized result and whether every law held.
struct Outcome {
    text: String,
    passed: bool,
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    io::parse(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn signature(path: &Path) -> Result<Signature, Error> {
    io::signature_from_doc(&read(path)?)
}

fn slice(path: &Path) -> Result<Slice, Error> {
    io::slice_from_doc(&read(path)?)
}

fn emit<T: Serialize>(format: Format, doc: &T, text: impl FnOnce(&T) -> String) -> Outcome {
    let text = match format {
        Format::Json => render(doc),
        Format::Text => text(doc),
    };
    Outcome { text, passed: true }
}

fn signature_text(doc: &io::SignatureDoc) -> String {
    let mut s = format!("colours: {}\n", doc.colours.join(" "));
    for o in &doc.ops {
        let _ = writeln!(s, "{} : {} -> {}", o.name, o.ins.join(" "), o.out);
    }
    s
}

fn slice_text(doc: &io::SliceDoc) -> String {
    let mut s = format!("colours: {}\n", doc.colours.join(" "));
    for e in &doc.elems {
        let _ = writeln!(s, "{} : {}", e.name, e.colour);
    }
    s
}

fn algebra_text(doc: &io::AlgebraDoc) -> String {
    let mut s = format!("{}-algebra, arity ≤ {}\n", doc.monad, doc.max_arity);
    s.push_str(&signature_text(&doc.carrier));
    for r in &doc.action {
        let _ = writeln!(
            s,
            "{} {:?} {} => {}",
            r.op,
            r.xi,
            r.target_in.join(" "),
            r.result
        );
    }
    s
}

fn kleisli_text(doc: &io::KleisliDoc) -> String {
    let mut s = format!(
        "{}-Kleisli morphism, colours to {}\n",
        doc.monad,
        doc.colour_map.join(" ")
    );
    for r in &doc.assign {
        let _ = writeln!(
            s,
            "{} => {} {:?} {}",
            r.src,
            r.dec.base,
            r.dec.xi,
            r.dec.target_in.join(" ")
        );
    }
    s
}

fn tree_text(node: &io::TreeNodeDoc) -> String {
    match node {
        io::TreeNodeDoc::Leaf { var } => format!("_{var}"),
        io::TreeNodeDoc::Node { op, dec, children } => {
            let head = match dec {
                Some(xi) => format!("{op}{xi:?}"),
                None => op.clone(),
            };
            let ch: Vec<String> = children.iter().map(tree_text).collect();
            format!("{head}({})", ch.join(","))
        }
    }
}

fn presheaf_text(doc: &io::PresheafDoc) -> String {
    let mut s = String::new();
    for f in &doc.sets {
        let _ = writeln!(s, "{}: {}", f.object, f.elems.join(" "));
    }
    s
}

fn table_text(doc: &io::TableCellsDoc) -> String {
    let mut s = String::new();
    for c in &doc.cells {
        let _ = writeln!(
            s,
            "{}; {}: {}",
            c.object,
            c.word.join(" "),
            c.elems.join(" ")
        );
    }
    s
}

#[derive(Serialize)]
struct TreesDoc {
    signature: io::SignatureDoc,
    trees: Vec<io::TreeNodeDoc>,
}

#[derive(Serialize)]
struct CombDoc {
    tree: io::TreeDoc,
    /// For each leaf of the plain tree, the argument position it came from.
    leaves: Vec<usize>,
}

#[derive(Serialize)]
struct CheckDoc<'a> {
    seed: u64,
    max_arity: usize,
    passed: bool,
    suites: &'a [SuiteReport],
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let bounds = Bounds::new(cli.bound.0);
    let trees = TreeBounds::new(cli.bound.0, cli.bound.0);
    let f = cli.format;
    Ok(match &cli.verb {
        Verb::Tensor { a, b } => {
            let doc = io::signature_doc(&tensor(&signature(a)?, &signature(b)?)?);
            emit(f, &doc, signature_text)
        }
        Verb::Unit { a } => {
            let doc = io::signature_doc(&unit(signature(a)?.colours()));
            emit(f, &doc, signature_text)
        }
        Verb::Monad { tag, a } => {
            let doc = io::signature_doc(&apply_monad(*tag, &signature(a)?, bounds));
            emit(f, &doc, signature_text)
        }
        Verb::Symmetrize { table } => {
            let t = io::table_from_spec(&read(table)?)?;
            let doc = io::table_cells_doc(&symmetrize_cat(&t)?.table);
            emit(f, &doc, table_text)
        }
        Verb::KleisliCompose { g, f: first } => {
            let g = io::kleisli_from_doc(&read(g)?)?;
            let first = io::kleisli_from_doc(&read(first)?)?;
            let doc = io::kleisli_doc(&kleisli_compose(&g, &first)?)?;
            emit(f, &doc, kleisli_text)
        }
        Verb::LintonTensor { x, y } => {
            let x = io::algebra_from_doc(&read(x)?)?;
            let y = io::algebra_from_doc(&read(y)?)?;
            let doc = io::algebra_doc(&linton_tensor(&x, &y, bounds)?.algebra)?;
            emit(f, &doc, algebra_text)
        }
        Verb::Eval { a, x } => {
            let doc = io::slice_doc(&eval_polynomial(&signature(a)?, &slice(x)?)?);
            emit(f, &doc, slice_text)
        }
        Verb::EmEval { x, v } => {
            let x = io::algebra_from_doc(&read(x)?)?;
            let doc = io::slice_doc(&em_eval(&x, &slice(v)?)?.classes);
            emit(f, &doc, slice_text)
        }
        Verb::FreeMulticat { a } => {
            let a = signature(a)?;
            let doc = TreesDoc {
                signature: io::signature_doc(&a),
                trees: enumerate_trees(&a, trees)
                    .iter()
                    .map(|t| io::tree_node_doc(t, a.colours()))
                    .collect(),
            };
            emit(f, &doc, |d| {
                d.trees.iter().map(|t| tree_text(t) + "\n").collect()
            })
        }
        Verb::Comb { tree } => {
            let (a, t) = io::tree_from_doc(&read(tree)?)?;
            let (plain, leaves) = comb(&t)?;
            let doc = CombDoc {
                tree: io::tree_doc(&a, &plain),
                leaves: leaves.values().to_vec(),
            };
            emit(f, &doc, |d| {
                format!("{} {:?}\n", tree_text(&d.tree.tree), d.leaves)
            })
        }
        Verb::FreeSymop { x } => {
            let x = io::algebra_from_doc(&read(x)?)?;
            let free = free_symmetric_operad(&x, trees)?;
            let doc = io::signature_doc(free.operad.multicategory.ops());
            emit(f, &doc, signature_text)
        }
        Verb::Coend { table, x } => {
            let t = io::table_from_spec(&read(table)?)?;
            let x = io::presheaf_from_doc(&read(x)?)?;
            let doc = io::presheaf_doc(&act_cat(&t, &x)?.presheaf);
            emit(f, &doc, presheaf_text)
        }
        Verb::Lan { table, x } => {
            let t = io::table_from_spec(&read(table)?)?;
            let x = io::presheaf_from_doc(&read(x)?)?;
            let doc = io::presheaf_doc(&lan_iota(&t, &x)?.presheaf);
            emit(f, &doc, presheaf_text)
        }
        Verb::Check { suite, fixtures } => {
            let settings = Settings {
                max_arity: cli.bound.0,
                seed: cli.seed,
                strategy: if cli.sequential {
                    Strategy::Sequential
                } else {
                    Strategy::Parallel
                },
            };
            let mut reports = if suite == "all" {
                suites::run_all(&settings)
            } else {
                vec![suites::run(suite, &settings)?]
            };
            if let Some(dir) = fixtures {
                reports.push(fixtures::check_dir(dir)?);
            }
            let passed = reports.iter().all(SuiteReport::passed);
            let text = match f {
                Format::Json => render(&CheckDoc {
                    seed: cli.seed,
                    max_arity: cli.bound.0,
                    passed,
                    suites: &reports,
                }),
                Format::Text => {
                    let mut s = format!("seed: {}\nbound: {}\n", cli.seed, cli.bound.0);
                    for r in &reports {
                        s.push_str(&r.to_string());
                    }
                    let verdict = if passed { "pass" } else { "FAIL" };
                    let _ = writeln!(s, "overall: {verdict}");
                    s
                }
            };
            Outcome { text, passed }
        }
    })
}

fn exit_status(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Verb::Check { suite, .. } = &cli.verb {
        if suite != "all" && !SUITES.contains(&suite.as_str()) {
            eprintln!(
                "error: unknown suite {suite}; expected all or one of {}",
                SUITES.join(", ")
            );
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(p) => fs::write(p, &out.text),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(3);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_status(&e))
        }
    }
}
