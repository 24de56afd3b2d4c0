//! JSON documents for signatures, slices, decorated operations, Kleisli
//! morphisms, algebras and their morphisms, term trees, finite categories,
//! presheaves and tables. Each document type pairs a `*_doc` serializer with
//! a parser; documents written by the serializer parse back to the same
//! value and re-serialize to the same bytes.

use std::collections::HashMap;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::em::{Algebra, AlgebraMorphism};
use crate::error::{Error, Result};
use crate::finset::FinMap;
use crate::kleisli::KleisliMorphism;
use crate::monads::{decorate, Bounds, MonadTag};
use crate::operads::TermTree;
use crate::presheaf_cat::{
    generated_table, symmetrize_cat, FinCat, Morphism, Presheaf, Table, Token,
};
use crate::signatures::{Colour, ColourMap, Colours, Elem, Op, Signature, Slice};

/// Pretty-printed JSON with a trailing newline.
pub fn render<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn colour_of(colours: &Colours, name: &str) -> Result<Colour> {
    colours
        .index_of(name)
        .ok_or_else(|| Error::Input(format!("unknown colour {name:?}")))
}

fn colour_word(colours: &Colours, names: &[String]) -> Result<Vec<Colour>> {
    names.iter().map(|n| colour_of(colours, n)).collect()
}

fn colour_names(colours: &Colours, word: &[Colour]) -> Vec<String> {
    word.iter().map(|&c| colours.name(c).to_string()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpDoc {
    pub name: String,
    pub out: String,
    #[serde(rename = "in")]
    pub ins: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignatureDoc {
    pub colours: Vec<String>,
    pub ops: Vec<OpDoc>,
}

/// Operations are written under their canonical names; parsing yields atoms.
pub fn signature_doc(a: &Signature) -> SignatureDoc {
    let cs = a.colours();
    SignatureDoc {
        colours: cs.names().to_vec(),
        ops: a
            .ops()
            .iter()
            .map(|o| OpDoc {
                name: o.name(cs),
                out: cs.name(o.out).to_string(),
                ins: colour_names(cs, &o.ins),
            })
            .collect(),
    }
}

pub fn signature_from_doc(doc: &SignatureDoc) -> Result<Signature> {
    let cs = Colours::new(doc.colours.iter().cloned())?;
    let ops = doc
        .ops
        .iter()
        .map(|o| {
            Ok(Op::atom(
                &o.name,
                colour_of(&cs, &o.out)?,
                colour_word(&cs, &o.ins)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Signature::new(cs, ops)
}

/// Lookup of operations by canonical name.
struct OpNames<'a> {
    sig: &'a Signature,
    by_name: HashMap<String, Option<usize>>,
}

impl<'a> OpNames<'a> {
    fn new(sig: &'a Signature) -> Self {
        let mut by_name = HashMap::new();
        for (i, o) in sig.ops().iter().enumerate() {
            by_name
                .entry(o.name(sig.colours()))
                .and_modify(|e| *e = None)
                .or_insert(Some(i));
        }
        OpNames { sig, by_name }
    }

    fn index(&self, name: &str) -> Result<usize> {
        match self.by_name.get(name) {
            Some(Some(i)) => Ok(*i),
            Some(None) => Err(Error::Input(format!(
                "operation name {name:?} is ambiguous"
            ))),
            None => Err(Error::Input(format!("unknown operation {name:?}"))),
        }
    }

    fn get(&self, name: &str) -> Result<&'a Op> {
        Ok(&self.sig.ops()[self.index(name)?])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElemDoc {
    pub name: String,
    pub colour: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceDoc {
    pub colours: Vec<String>,
    pub elems: Vec<ElemDoc>,
}

pub fn slice_doc(x: &Slice) -> SliceDoc {
    let cs = x.colours();
    SliceDoc {
        colours: cs.names().to_vec(),
        elems: x
            .elems()
            .iter()
            .map(|e| ElemDoc {
                name: e.name(cs),
                colour: cs.name(e.colour).to_string(),
            })
            .collect(),
    }
}

pub fn slice_from_doc(doc: &SliceDoc) -> Result<Slice> {
    let cs = Colours::new(doc.colours.iter().cloned())?;
    let elems = doc
        .elems
        .iter()
        .map(|e| Ok(Elem::atom(&e.name, colour_of(&cs, &e.colour)?)))
        .collect::<Result<Vec<_>>>()?;
    Slice::new(cs, elems)
}

/// A decorated operation `(base, xi, target_in)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecDoc {
    pub base: String,
    pub xi: Vec<usize>,
    pub target_in: Vec<String>,
}

pub fn dec_doc(d: &Op, colours: &Colours) -> Result<DecDoc> {
    let (base, xi) = d.expect_dec()?;
    Ok(DecDoc {
        base: base.name(colours),
        xi: xi.values().to_vec(),
        target_in: colour_names(colours, &d.ins),
    })
}

fn dec_from_doc(doc: &DecDoc, names: &OpNames) -> Result<Op> {
    let cs = names.sig.colours();
    let target_in = colour_word(cs, &doc.target_in)?;
    let xi = FinMap::new(target_in.len(), doc.xi.clone())?;
    decorate(names.get(&doc.base)?, xi, target_in)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignDoc {
    pub src: String,
    pub dec: DecDoc,
}

/// A Kleisli morphism `A -> T(B)`; `colour_map` names the image of each
/// source colour.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KleisliDoc {
    pub monad: String,
    pub source: SignatureDoc,
    pub target: SignatureDoc,
    pub colour_map: Vec<String>,
    pub assign: Vec<AssignDoc>,
}

pub fn kleisli_doc(f: &KleisliMorphism) -> Result<KleisliDoc> {
    let (src, tgt) = (f.source(), f.target());
    Ok(KleisliDoc {
        monad: f.tag().to_string(),
        source: signature_doc(src),
        target: signature_doc(tgt),
        colour_map: colour_names(tgt.colours(), f.colour_map().values()),
        assign: src
            .ops()
            .iter()
            .zip(f.assignments())
            .map(|(a, d)| {
                Ok(AssignDoc {
                    src: a.name(src.colours()),
                    dec: dec_doc(d, tgt.colours())?,
                })
            })
            .collect::<Result<_>>()?,
    })
}

pub fn kleisli_from_doc(doc: &KleisliDoc) -> Result<KleisliMorphism> {
    let tag: MonadTag = doc.monad.parse()?;
    let source = signature_from_doc(&doc.source)?;
    let target = signature_from_doc(&doc.target)?;
    let colour_map = ColourMap::new(
        source.colours().clone(),
        target.colours().clone(),
        colour_word(target.colours(), &doc.colour_map)?,
    )?;
    let (src_names, tgt_names) = (OpNames::new(&source), OpNames::new(&target));
    let mut assign: Vec<Option<Op>> = vec![None; source.len()];
    for row in &doc.assign {
        let i = src_names.index(&row.src)?;
        if assign[i].is_some() {
            return Err(Error::Input(format!("{:?} is assigned twice", row.src)));
        }
        assign[i] = Some(dec_from_doc(&row.dec, &tgt_names)?);
    }
    let assign = assign
        .into_iter()
        .zip(source.ops())
        .map(|(d, a)| d.ok_or_else(|| Error::Input(format!("{a:?} is not assigned"))))
        .collect::<Result<Vec<_>>>()?;
    KleisliMorphism::new(tag, source, target, colour_map, assign)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionRowDoc {
    pub op: String,
    pub xi: Vec<usize>,
    pub target_in: Vec<String>,
    pub result: String,
}

/// An algebra: its carrier and every action row except identity
/// decorations acting trivially. `max_arity` bounds the tabulated
/// decorations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub monad: String,
    pub max_arity: usize,
    pub carrier: SignatureDoc,
    pub action: Vec<ActionRowDoc>,
}

pub fn algebra_doc(x: &Algebra) -> Result<AlgebraDoc> {
    let cs = x.colours();
    let mut action = Vec::new();
    for (d, r) in x.rows() {
        let (base, xi) = d.expect_dec()?;
        if xi.is_identity() && *base == r {
            continue;
        }
        action.push(ActionRowDoc {
            op: base.name(cs),
            xi: xi.values().to_vec(),
            target_in: colour_names(cs, &d.ins),
            result: r.name(cs),
        });
    }
    Ok(AlgebraDoc {
        monad: x.tag().to_string(),
        max_arity: x.bounds().max_arity,
        carrier: signature_doc(x.carrier()),
        action,
    })
}

pub fn algebra_from_doc(doc: &AlgebraDoc) -> Result<Algebra> {
    let tag: MonadTag = doc.monad.parse()?;
    let carrier = signature_from_doc(&doc.carrier)?;
    let names = OpNames::new(&carrier);
    let rows = doc
        .action
        .iter()
        .map(|row| {
            let d = dec_from_doc(
                &DecDoc {
                    base: row.op.clone(),
                    xi: row.xi.clone(),
                    target_in: row.target_in.clone(),
                },
                &names,
            )?;
            Ok((d, names.get(&row.result)?.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let x = Algebra::from_rows(tag, carrier.clone(), Bounds::new(doc.max_arity), rows)?;
    x.validate()
        .map_err(|v| Error::Validation(format!("not an algebra: {v}")))?;
    Ok(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapsToDoc {
    pub src: String,
    pub dst: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraMorphismDoc {
    pub source: AlgebraDoc,
    pub target: AlgebraDoc,
    pub map: Vec<MapsToDoc>,
}

pub fn algebra_morphism_doc(h: &AlgebraMorphism) -> Result<AlgebraMorphismDoc> {
    let (s, t) = (h.source.carrier(), h.target.carrier());
    Ok(AlgebraMorphismDoc {
        source: algebra_doc(&h.source)?,
        target: algebra_doc(&h.target)?,
        map: s
            .ops()
            .iter()
            .zip(&h.values)
            .map(|(x, &v)| MapsToDoc {
                src: x.name(s.colours()),
                dst: t.ops()[v].name(t.colours()),
            })
            .collect(),
    })
}

pub fn algebra_morphism_from_doc(doc: &AlgebraMorphismDoc) -> Result<AlgebraMorphism> {
    let source = algebra_from_doc(&doc.source)?;
    let target = algebra_from_doc(&doc.target)?;
    let (sn, tn) = (
        OpNames::new(source.carrier()),
        OpNames::new(target.carrier()),
    );
    let mut values: Vec<Option<usize>> = vec![None; source.carrier().len()];
    for row in &doc.map {
        let i = sn.index(&row.src)?;
        if values[i].replace(tn.index(&row.dst)?).is_some() {
            return Err(Error::Input(format!("{:?} is mapped twice", row.src)));
        }
    }
    let values = values
        .into_iter()
        .map(|v| v.ok_or_else(|| Error::Input("morphism table is incomplete".into())))
        .collect::<Result<Vec<_>>>()?;
    AlgebraMorphism::new(source, target, values)
}

/// A term tree: leaves `{"var": colour}`, nodes carrying an operation and,
/// for decorated nodes, the decoration `dec`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeNodeDoc {
    Leaf {
        var: String,
    },
    Node {
        op: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dec: Option<Vec<usize>>,
        children: Vec<TreeNodeDoc>,
    },
}

pub fn tree_node_doc(t: &TermTree, colours: &Colours) -> TreeNodeDoc {
    match t {
        TermTree::Leaf(c) => TreeNodeDoc::Leaf {
            var: colours.name(*c).to_string(),
        },
        TermTree::Node(op, ch) => {
            let (base, dec) = match op.as_dec() {
                Some((a, xi)) => (a, Some(xi.values().to_vec())),
                None => (&**op, None),
            };
            TreeNodeDoc::Node {
                op: base.name(colours),
                dec,
                children: ch.iter().map(|c| tree_node_doc(c, colours)).collect(),
            }
        }
    }
}

fn tree_from_node(doc: &TreeNodeDoc, names: &OpNames) -> Result<TermTree> {
    match doc {
        TreeNodeDoc::Leaf { var } => Ok(TermTree::Leaf(colour_of(names.sig.colours(), var)?)),
        TreeNodeDoc::Node { op, dec, children } => {
            let children = children
                .iter()
                .map(|c| tree_from_node(c, names))
                .collect::<Result<Vec<_>>>()?;
            let base = names.get(op)?;
            let node = match dec {
                None => base.clone(),
                Some(xi) => {
                    let target_in: Vec<Colour> = children.iter().map(TermTree::out).collect();
                    decorate(base, FinMap::new(target_in.len(), xi.clone())?, target_in)?
                }
            };
            TermTree::node(&node, children)
        }
    }
}

/// A tree together with the signature naming its operations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDoc {
    pub signature: SignatureDoc,
    pub tree: TreeNodeDoc,
}

pub fn tree_doc(a: &Signature, t: &TermTree) -> TreeDoc {
    TreeDoc {
        signature: signature_doc(a),
        tree: tree_node_doc(t, a.colours()),
    }
}

pub fn tree_from_doc(doc: &TreeDoc) -> Result<(Signature, TermTree)> {
    let a = signature_from_doc(&doc.signature)?;
    let t = tree_from_node(&doc.tree, &OpNames::new(&a))?;
    Ok((a, t))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// `then` followed by `first` is `result`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositeDoc {
    pub first: String,
    pub then: String,
    pub result: String,
}

/// A finite category with its full composition table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinCatDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    pub identities: Vec<String>,
    pub compose: Vec<CompositeDoc>,
}

pub fn fincat_doc(cat: &FinCat) -> FinCatDoc {
    let ms = cat.morphisms();
    let mut compose = Vec::new();
    for f in 0..ms.len() {
        for g in 0..ms.len() {
            if let Some(h) = cat.then(f, g) {
                compose.push(CompositeDoc {
                    first: ms[f].name.clone(),
                    then: ms[g].name.clone(),
                    result: ms[h].name.clone(),
                });
            }
        }
    }
    FinCatDoc {
        objects: cat.objects().to_vec(),
        morphisms: ms
            .iter()
            .map(|m| MorphismDoc {
                name: m.name.clone(),
                source: cat.object(m.source).to_string(),
                target: cat.object(m.target).to_string(),
            })
            .collect(),
        identities: (0..cat.object_count())
            .map(|o| ms[cat.identity(o)].name.clone())
            .collect(),
        compose,
    }
}

fn index_in(names: &[String], name: &str, what: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| Error::Input(format!("unknown {what} {name:?}")))
}

pub fn fincat_from_doc(doc: &FinCatDoc) -> Result<FinCat> {
    let obj = |n: &str| index_in(&doc.objects, n, "object");
    let morphisms = doc
        .morphisms
        .iter()
        .map(|m| {
            Ok(Morphism {
                name: m.name.clone(),
                source: obj(&m.source)?,
                target: obj(&m.target)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mnames: Vec<String> = morphisms.iter().map(|m| m.name.clone()).collect();
    let mor = |n: &str| index_in(&mnames, n, "morphism");
    let identities = doc
        .identities
        .iter()
        .map(|n| mor(n))
        .collect::<Result<Vec<_>>>()?;
    let mut table = HashMap::new();
    for c in &doc.compose {
        let key = (mor(&c.first)?, mor(&c.then)?);
        if table.insert(key, mor(&c.result)?).is_some() {
            return Err(Error::Input(format!(
                "composite of {} then {} listed twice",
                c.first, c.then
            )));
        }
    }
    FinCat::new(doc.objects.clone(), morphisms, identities, |f, g| {
        table.get(&(f, g)).copied()
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibreDoc {
    pub object: String,
    pub elems: Vec<String>,
}

/// Restriction along `morphism: a -> b`: for each element of `X(b)`, the
/// index of its image in `X(a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionDoc {
    pub morphism: String,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafDoc {
    pub category: FinCatDoc,
    pub sets: Vec<FibreDoc>,
    pub restrict: Vec<RestrictionDoc>,
}

pub fn presheaf_doc(x: &Presheaf) -> PresheafDoc {
    let cat = x.base();
    PresheafDoc {
        category: fincat_doc(cat),
        sets: (0..cat.object_count())
            .map(|o| FibreDoc {
                object: cat.object(o).to_string(),
                elems: x.set(o).iter().map(Token::to_string).collect(),
            })
            .collect(),
        restrict: cat
            .morphisms()
            .iter()
            .enumerate()
            .map(|(f, m)| RestrictionDoc {
                morphism: m.name.clone(),
                map: (0..x.size(m.target)).map(|i| x.restrict(f, i)).collect(),
            })
            .collect(),
    }
}

pub fn presheaf_from_doc(doc: &PresheafDoc) -> Result<Presheaf> {
    let cat = Arc::new(fincat_from_doc(&doc.category)?);
    let mut sets: Vec<Option<Vec<Token>>> = vec![None; cat.object_count()];
    for fibre in &doc.sets {
        let o = index_in(cat.objects(), &fibre.object, "object")?;
        let toks = fibre.elems.iter().map(|e| Token::name(e)).collect();
        if sets[o].replace(toks).is_some() {
            return Err(Error::Input(format!(
                "object {} listed twice",
                fibre.object
            )));
        }
    }
    let mnames: Vec<String> = cat.morphisms().iter().map(|m| m.name.clone()).collect();
    let mut restrict: Vec<Option<Vec<usize>>> = vec![None; mnames.len()];
    for r in &doc.restrict {
        let f = index_in(&mnames, &r.morphism, "morphism")?;
        if restrict[f].replace(r.map.clone()).is_some() {
            return Err(Error::Input(format!(
                "morphism {} listed twice",
                r.morphism
            )));
        }
    }
    let sets = sets
        .into_iter()
        .map(|s| s.ok_or_else(|| Error::Input("a set is missing".into())))
        .collect::<Result<Vec<_>>>()?;
    let restrict = restrict
        .into_iter()
        .map(|r| r.ok_or_else(|| Error::Input("a restriction is missing".into())))
        .collect::<Result<Vec<_>>>()?;
    Presheaf::new(cat, sets, restrict)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub object: String,
    pub word: Vec<String>,
}

/// A table freely generated by elements of the listed types `(o; w)`,
/// optionally symmetrized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpecDoc {
    pub category: FinCatDoc,
    pub max_len: usize,
    pub generators: Vec<GeneratorDoc>,
    #[serde(default)]
    pub symmetrize: bool,
}

pub fn table_from_spec(doc: &TableSpecDoc) -> Result<Table> {
    let cat = Arc::new(fincat_from_doc(&doc.category)?);
    let gens = doc
        .generators
        .iter()
        .map(|g| {
            let o = index_in(cat.objects(), &g.object, "object")?;
            let w = g
                .word
                .iter()
                .map(|n| index_in(cat.objects(), n, "object"))
                .collect::<Result<Vec<_>>>()?;
            Ok((o, w))
        })
        .collect::<Result<Vec<_>>>()?;
    let table = generated_table(&cat, doc.max_len, &gens)?.table;
    if doc.symmetrize {
        Ok(symmetrize_cat(&table)?.table)
    } else {
        Ok(table)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub object: String,
    pub word: Vec<String>,
    pub elems: Vec<String>,
}

/// The cells of a table; the actions are not written.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableCellsDoc {
    pub objects: Vec<String>,
    pub max_len: usize,
    pub symmetric: bool,
    pub cells: Vec<CellDoc>,
}

pub fn table_cells_doc(t: &Table) -> TableCellsDoc {
    let cat = t.base();
    TableCellsDoc {
        objects: cat.objects().to_vec(),
        max_len: t.max_len(),
        symmetric: t.is_symmetric(),
        cells: t
            .cells()
            .map(|((o, w), elems)| CellDoc {
                object: cat.object(*o).to_string(),
                word: w.iter().map(|&q| cat.object(q).to_string()).collect(),
                elems: elems.iter().map(Token::to_string).collect(),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::em::{free_algebra, trivial_species};
    use crate::signatures::{signature_family, FamilyBounds};

    fn roundtrip<T, V>(doc: &T, from: impl Fn(&T) -> Result<V>, to: impl Fn(&V) -> T)
    where
        T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug,
    {
        let text = render(doc);
        let back: T = parse(&text).unwrap();
        assert_eq!(&back, doc);
        let again = to(&from(&back).unwrap());
        assert_eq!(render(&again), text);
    }

    #[test]
    fn signatures_of_the_family_round_trip() {
        for a in signature_family(FamilyBounds {
            max_colours: 2,
            max_ops: 2,
            max_arity: 2,
        }) {
            roundtrip(&signature_doc(&a), signature_from_doc, signature_doc);
        }
    }

    #[test]
    fn species_round_trip_bit_exact() {
        let x = trivial_species(2, "e");
        let doc = algebra_doc(&x).unwrap();
        roundtrip(&doc, algebra_from_doc, |x| algebra_doc(x).unwrap());
        assert_eq!(algebra_from_doc(&doc).unwrap(), x);
    }

    #[test]
    fn free_algebra_round_trips() {
        let a = Signature::new(Colours::single(), vec![Op::atom("m", 0, vec![0, 0])]).unwrap();
        let x = free_algebra(MonadTag::S, &a, Bounds::new(2));
        let doc = algebra_doc(&x).unwrap();
        roundtrip(&doc, algebra_from_doc, |x| algebra_doc(x).unwrap());
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(parse::<SignatureDoc>("{"), Err(Error::Parse(_))));
        assert!(matches!(
            parse::<SignatureDoc>(r#"{"colours":[],"ops":[],"extra":1}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn unknown_colour_is_an_input_error() {
        let doc: SignatureDoc =
            parse(r#"{"colours":["*"],"ops":[{"name":"m","out":"x","in":[]}]}"#).unwrap();
        assert!(matches!(signature_from_doc(&doc), Err(Error::Input(_))));
    }

    #[test]
    fn walking_arrow_round_trips() {
        let cat = FinCat::walking_arrow();
        roundtrip(&fincat_doc(&cat), fincat_from_doc, fincat_doc);
        let x = Presheaf::representable(&Arc::new(cat), 1);
        roundtrip(&presheaf_doc(&x), presheaf_from_doc, presheaf_doc);
    }
}
