//! Round-trip checks over a directory of documents.

use std::fs;
use std::path::Path;

use polyana::functor_rep::test_morphisms;
use polyana::io::{self, render};
use polyana::signatures::Colours;
use polyana::suites::{separating_square, CheckLine, SuiteReport};
use polyana::{Error, Result};

/// Parse `text` as some document type, rebuild the value, and re-serialize.
/// Returns the document kind and whether the bytes were reproduced.
fn round_trip(text: &str) -> Result<(&'static str, String)> {
    macro_rules! attempt {
        ($kind:literal, $doc:ty, $from:expr, $to:expr) => {
            if let Ok(doc) = io::parse::<$doc>(text) {
                let value = $from(&doc)?;
                return Ok(($kind, render(&$to(&value)?)));
            }
        };
    }
    attempt!("signature", io::SignatureDoc, io::signature_from_doc, |v| {
        Ok::<_, Error>(io::signature_doc(v))
    });
    attempt!(
        "slice",
        io::SliceDoc,
        io::slice_from_doc,
        |v| Ok::<_, Error>(io::slice_doc(v))
    );
    attempt!(
        "kleisli morphism",
        io::KleisliDoc,
        io::kleisli_from_doc,
        io::kleisli_doc
    );
    attempt!(
        "algebra",
        io::AlgebraDoc,
        io::algebra_from_doc,
        io::algebra_doc
    );
    attempt!(
        "algebra morphism",
        io::AlgebraMorphismDoc,
        io::algebra_morphism_from_doc,
        io::algebra_morphism_doc
    );
    attempt!("tree", io::TreeDoc, io::tree_from_doc, |v: &(_, _)| Ok::<
        _,
        Error,
    >(
        io::tree_doc(&v.0, &v.1)
    ));
    attempt!("category", io::FinCatDoc, io::fincat_from_doc, |v| Ok::<
        _,
        Error,
    >(
        io::fincat_doc(v)
    ));
    attempt!(
        "presheaf",
        io::PresheafDoc,
        io::presheaf_from_doc,
        |v| Ok::<_, Error>(io::presheaf_doc(v))
    );
    if let Ok(doc) = io::parse::<io::TableSpecDoc>(text) {
        io::table_from_spec(&doc)?;
        return Ok(("table", render(&doc)));
    }
    Err(Error::Parse("not a recognised document".into()))
}

/// One line per `*.json` file, in name order; algebra morphisms over one
/// colour are also tested for weak pullbacks that are not pullbacks.
pub fn check_dir(dir: &Path) -> Result<SuiteReport> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut checks = Vec::new();
    for p in paths {
        let name = p
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .to_string();
        let text = fs::read_to_string(&p)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display())))?;
        let (passed, detail) = match round_trip(&text) {
            Ok((kind, again)) if again == text => (true, format!("{kind}, round trip exact")),
            Ok((kind, _)) => (false, format!("{kind}, round trip differs")),
            Err(e) => (false, e.to_string()),
        };
        checks.push(CheckLine {
            name: name.clone(),
            passed,
            detail,
            failure: None,
        });
        if let Ok(doc) = io::parse::<io::AlgebraMorphismDoc>(&text) {
            let one = Colours::single();
            let outcome = io::algebra_morphism_from_doc(&doc).and_then(|h| {
                if h.source.colours() != &one {
                    return Err(Error::Input("separation is tested over one colour".into()));
                }
                separating_square(&h, &test_morphisms(&one, 3))
            });
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(e) => (false, e.to_string()),
            };
            checks.push(CheckLine {
                name: format!("{name} separates"),
                passed,
                detail,
                failure: None,
            });
        }
    }
    Ok(SuiteReport {
        suite: "fixtures".into(),
        checks,
    })
}
