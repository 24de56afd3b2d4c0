//! Write the shipped fixture documents into a directory.
//!
//! `cargo run -p polyana --example fixtures -- fixtures`

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use polyana::em::{free_algebra, trivial_species};
use polyana::finset::FinMap;
use polyana::io::{self, render};
use polyana::kleisli::KleisliMorphism;
use polyana::monads::{decorate, Bounds, MonadTag};
use polyana::operads::TermTree;
use polyana::presheaf_cat::{FinCat, Presheaf};
use polyana::signatures::{ColourMap, Colours, Op, Signature, Slice};
use polyana::suites::orbit_projection;
use polyana::Result;

fn main() -> Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    fs::create_dir_all(&dir).expect("fixture directory");
    let write = |name: &str, text: String| fs::write(dir.join(name), text).expect("write fixture");

    let one = Colours::single();
    let m = Op::atom("m", 0, vec![0, 0]);
    let binary = Signature::new(one.clone(), vec![m.clone()])?;
    write("A.json", render(&io::signature_doc(&binary)));
    write("B.json", render(&io::signature_doc(&binary)));
    write(
        "V3.json",
        render(&io::slice_doc(&Slice::with_sizes(&one, &[3]))),
    );
    write(
        "species_E.json",
        render(&io::algebra_doc(&trivial_species(2, "e"))?),
    );
    let free = free_algebra(MonadTag::S, &binary, Bounds::new(2));
    write("free_S_m.json", render(&io::algebra_doc(&free)?));
    write(
        "orbit_projection.json",
        render(&io::algebra_morphism_doc(&orbit_projection()?)?),
    );

    let swap = decorate(&m, FinMap::swap2(), vec![0, 0])?;
    let id = ColourMap::identity(&one);
    let twist = KleisliMorphism::new(
        MonadTag::S,
        binary.clone(),
        binary.clone(),
        id,
        vec![swap.clone()],
    )?;
    write("kleisli_twist.json", render(&io::kleisli_doc(&twist)?));
    let ident = KleisliMorphism::identity(MonadTag::S, &binary);
    write("kleisli_identity.json", render(&io::kleisli_doc(&ident)?));

    let inner = TermTree::node(&swap, vec![TermTree::Leaf(0), TermTree::Leaf(0)])?;
    let tree = TermTree::node(&swap, vec![inner, TermTree::Leaf(0)])?;
    write("tree_twisted.json", render(&io::tree_doc(&binary, &tree)));

    let arrow = FinCat::walking_arrow();
    write("walking_arrow.json", render(&io::fincat_doc(&arrow)));
    let arrow = Arc::new(arrow);
    let hom_k = Presheaf::representable(&arrow, 1);
    write("hom_k.json", render(&io::presheaf_doc(&hom_k)));
    for (name, symmetrize) in [("table_k_kk.json", false), ("table_k_kk_sym.json", true)] {
        let spec = io::TableSpecDoc {
            category: io::fincat_doc(&arrow),
            max_len: 2,
            generators: vec![io::GeneratorDoc {
                object: "k".into(),
                word: vec!["k".into(), "k".into()],
            }],
            symmetrize,
        };
        io::table_from_spec(&spec)?;
        write(name, render(&spec));
    }
    Ok(())
}
