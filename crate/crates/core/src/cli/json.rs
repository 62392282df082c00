//! JSON descriptors for groups, automorphism triples and verdicts.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use super::CliError;
use crate::charsphere::CharClass;
use crate::fixpoint::{AutTriple, OpaqueFix, PsiSpec};
use crate::grouprep::{
    CenterInfo, FinitenessBound, GroupDesc, LabeledGraph, SubgroupEmbedding, TableGroup, Word,
};
use crate::sigma::{Described, Sigma1Description, Verdict, Witness};
use crate::zlattice::{FgAbelian, IntMatrix};

pub const SCHEMA: u64 = 1;

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| bad(format!("missing field '{key}'")))
}

fn opt<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.get(key).filter(|x| !x.is_null())
}

fn string(v: &Value, key: &str) -> Result<String, CliError> {
    field(v, key)?
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| bad(format!("'{key}' must be a string")))
}

fn usize_of(v: &Value, key: &str) -> Result<usize, CliError> {
    field(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| bad(format!("'{key}' must be a non-negative integer")))
}

fn strings(v: &Value, key: &str) -> Result<Vec<String>, CliError> {
    field(v, key)?
        .as_array()
        .ok_or_else(|| bad(format!("'{key}' must be an array")))?
        .iter()
        .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad(format!("'{key}' entries must be strings"))))
        .collect()
}

/// An integer given as a JSON number or a decimal string.
pub fn int(v: &Value) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| bad(format!("{n} is not an integer"))),
        Value::String(s) => s.trim().parse().map_err(|_| bad(format!("'{s}' is not an integer"))),
        other => Err(bad(format!("expected an integer, found {other}"))),
    }
}

pub fn int_value(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(i) => json!(i),
        Err(_) => json!(x.to_string()),
    }
}

pub fn vector(v: &Value) -> Result<Vec<BigInt>, CliError> {
    v.as_array().ok_or_else(|| bad("expected an array of integers"))?.iter().map(int).collect()
}

pub fn vector_value(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_value).collect())
}

/// A matrix as an array of rows; `cols` fixes the width of an empty matrix.
pub fn matrix(v: &Value, cols: usize) -> Result<IntMatrix, CliError> {
    let rows = v
        .as_array()
        .ok_or_else(|| bad("expected a matrix (array of rows)"))?
        .iter()
        .map(vector)
        .collect::<Result<Vec<_>, _>>()?;
    let width = rows.first().map_or(cols, Vec::len);
    Ok(IntMatrix::from_rows(rows, width)?)
}

pub fn matrix_value(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vector_value(r)).collect())
}

pub fn abelian(v: &Value) -> Result<FgAbelian, CliError> {
    let torsion = match opt(v, "torsion") {
        Some(t) => vector(t)?,
        None => vec![],
    };
    Ok(FgAbelian::new(usize_of(v, "free")?, torsion)?)
}

pub fn abelian_value(a: &FgAbelian) -> Value {
    json!({ "free": a.free_rank(), "torsion": vector_value(a.torsion()) })
}

fn words(v: &Value, key: &str, ambient: &[String]) -> Result<Vec<Word>, CliError> {
    strings(v, key)?
        .iter()
        .map(|w| Word::parse(w, ambient).map_err(CliError::from))
        .collect()
}

pub fn group(v: &Value) -> Result<GroupDesc, CliError> {
    let kind = string(v, "kind")?;
    Ok(match kind.as_str() {
        "free" => match opt(v, "names") {
            Some(_) => GroupDesc::free_named(strings(v, "names")?)?,
            None => GroupDesc::free(usize_of(v, "rank")?),
        },
        "abelian" => GroupDesc::Abelian(abelian(v)?),
        "artin" => {
            let vertices = strings(v, "vertices")?;
            let edges = field(v, "edges")?
                .as_array()
                .ok_or_else(|| bad("'edges' must be an array"))?
                .iter()
                .map(|e| {
                    let a = e.as_array().filter(|a| a.len() == 3).ok_or_else(|| bad("edges are [u, v, m]"))?;
                    let name = |x: &Value| x.as_str().map(str::to_string).ok_or_else(|| bad("edge endpoints are names"));
                    let m = a[2].as_u64().ok_or_else(|| bad("edge labels are integers"))?;
                    Ok((name(&a[0])?, name(&a[1])?, m as u32))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            GroupDesc::Artin(LabeledGraph::new(vertices, edges)?)
        }
        "directProduct" => GroupDesc::product(group(field(v, "left")?)?, group(field(v, "right")?)?),
        "finiteIndexOver" => GroupDesc::finite_index_over(
            group(field(v, "inner")?)?,
            opt(v, "indexNote").and_then(Value::as_str).unwrap_or("finite index"),
        ),
        "tableBacked" => GroupDesc::table(table(v)?)?,
        other => return Err(bad(format!("unknown group kind '{other}'"))),
    })
}

fn table(v: &Value) -> Result<TableGroup, CliError> {
    let generators = strings(v, "generators")?;
    let abelianization = abelian(field(v, "abelianization")?)?;
    let generator_images = matrix(field(v, "generatorImages")?, generators.len())?;
    let sigma1_complement = match opt(v, "sigma1Complement") {
        Some(list) => Some(
            list.as_array()
                .ok_or_else(|| bad("'sigma1Complement' must be an array of classes"))?
                .iter()
                .map(|c| Ok(CharClass::from_vector(vector(c)?)?))
                .collect::<Result<Vec<_>, CliError>>()?,
        ),
        None => None,
    };
    let center = match opt(v, "center") {
        Some(c) => Some(CenterInfo {
            group: abelian(c)?,
            words: match opt(c, "words") {
                Some(_) => words(c, "words", &generators)?,
                None => vec![],
            },
        }),
        None => None,
    };
    let finite_index_subgroup = match opt(v, "finiteIndexSubgroup") {
        Some(e) => Some(SubgroupEmbedding::new(group(field(e, "group")?)?, words(e, "words", &generators)?)?),
        None => None,
    };
    let finiteness = match opt(v, "finiteness") {
        None => None,
        Some(Value::String(s)) if s == "inf" => Some(FinitenessBound::Infinity),
        Some(Value::Number(n)) => Some(FinitenessBound::Upto(
            n.as_u64().ok_or_else(|| bad("'finiteness' must be \"inf\" or a degree"))? as u32,
        )),
        Some(_) => return Err(bad("'finiteness' must be \"inf\" or a degree")),
    };
    Ok(TableGroup {
        name: string(v, "name")?,
        generators,
        abelianization,
        generator_images,
        sigma1_complement,
        provenance: string(v, "provenance")?,
        center,
        finite_index_subgroup,
        finiteness,
    })
}

pub fn group_value(g: &GroupDesc) -> Value {
    match g {
        GroupDesc::Free { rank, names } => json!({ "kind": "free", "rank": rank, "names": names }),
        GroupDesc::Abelian(a) => {
            let mut v = abelian_value(a);
            v["kind"] = json!("abelian");
            v
        }
        GroupDesc::Artin(gr) => {
            let edges: Vec<Value> = gr
                .edges()
                .iter()
                .map(|e| json!([gr.vertices()[e.u], gr.vertices()[e.v], e.label]))
                .collect();
            json!({ "kind": "artin", "vertices": gr.vertices(), "edges": edges })
        }
        GroupDesc::DirectProduct(l, r) => {
            json!({ "kind": "directProduct", "left": group_value(l), "right": group_value(r) })
        }
        GroupDesc::FiniteIndexOver { inner, index_note } => {
            json!({ "kind": "finiteIndexOver", "inner": group_value(inner), "indexNote": index_note })
        }
        GroupDesc::TableBacked(t) => {
            let show = |w: &Word| w.display(&t.generators).to_string();
            let mut m = Map::new();
            m.insert("kind".into(), json!("tableBacked"));
            m.insert("name".into(), json!(t.name));
            m.insert("generators".into(), json!(t.generators));
            m.insert("abelianization".into(), abelian_value(&t.abelianization));
            m.insert("generatorImages".into(), matrix_value(&t.generator_images));
            if let Some(c) = &t.sigma1_complement {
                m.insert(
                    "sigma1Complement".into(),
                    Value::Array(c.iter().map(|c| vector_value(c.coords())).collect()),
                );
            }
            m.insert("provenance".into(), json!(t.provenance));
            if let Some(c) = &t.center {
                let mut cv = abelian_value(&c.group);
                cv["words"] = json!(c.words.iter().map(show).collect::<Vec<_>>());
                m.insert("center".into(), cv);
            }
            if let Some(e) = &t.finite_index_subgroup {
                m.insert(
                    "finiteIndexSubgroup".into(),
                    json!({ "group": group_value(&e.sub), "words": e.words.iter().map(show).collect::<Vec<_>>() }),
                );
            }
            if let Some(f) = t.finiteness {
                m.insert(
                    "finiteness".into(),
                    match f {
                        FinitenessBound::Infinity => json!("inf"),
                        FinitenessBound::Upto(n) => json!(n),
                    },
                );
            }
            Value::Object(m)
        }
    }
}

pub fn psi(v: &Value, h: &GroupDesc) -> Result<PsiSpec, CliError> {
    let kind = string(v, "kind")?;
    let names = h.generators();
    Ok(match kind.as_str() {
        "identity" => PsiSpec::Identity,
        "graphAut" => {
            let map = field(v, "map")?.as_object().ok_or_else(|| bad("'map' must be an object"))?;
            let index = |s: &str| {
                names.iter().position(|n| n == s).ok_or_else(|| bad(format!("'{s}' is not a generator of H")))
            };
            let mut perm: Vec<usize> = (0..names.len()).collect();
            for (from, to) in map {
                let to = to.as_str().ok_or_else(|| bad("'map' values must be vertex names"))?;
                perm[index(from)?] = index(to)?;
            }
            PsiSpec::GraphAut(perm)
        }
        "conjugation" => PsiSpec::Conjugation(h.parse_word(&string(v, "word")?)?),
        "opaque" => {
            let sub = group(field(v, "fix")?)?;
            let fix = SubgroupEmbedding::new(sub, words(v, "words", &names)?)?;
            let order = opt(v, "order").and_then(Value::as_u64);
            let abelian_action = match opt(v, "abelianAction") {
                Some(m) => Some(matrix(m, 0)?),
                None => None,
            };
            PsiSpec::Opaque(OpaqueFix {
                fix,
                provenance: opt(v, "provenance").and_then(Value::as_str).unwrap_or("").to_string(),
                order,
                abelian_action,
            })
        }
        other => return Err(bad(format!("unknown ψ kind '{other}'"))),
    })
}

pub fn aut_triple(v: &Value) -> Result<AutTriple, CliError> {
    let h = group(field(v, "h")?)?;
    let a = abelian(field(v, "a")?)?;
    let alpha = matrix(field(v, "alpha")?, 0)?;
    let gamma = matrix(field(v, "gamma")?, a.cover_dim())?;
    let psi = psi(field(v, "psi")?, &h)?;
    Ok(AutTriple::new(h, a, alpha, gamma, psi)?)
}

pub fn check_schema(v: &Value) -> Result<(), CliError> {
    match v.get("schema").and_then(Value::as_u64) {
        Some(SCHEMA) | None => Ok(()),
        Some(s) => Err(bad(format!("unsupported schema version {s}"))),
    }
}

fn witness_value(w: &Witness) -> Value {
    json!({
        "psi": w.psi,
        "character": w.character.as_deref().map(vector_value),
        "restricted": w.restricted.as_deref().map(vector_value),
        "class": w.class.as_ref().map(|c| vector_value(c.coords())),
        "words": w.words,
        "note": w.note,
    })
}

pub fn verdict_value(v: &Verdict) -> Value {
    json!({
        "answer": v.answer.to_string(),
        "n": v.n,
        "flavor": v.flavor.name(),
        "reason": v.reason,
        "trace": v.trace,
        "witness": v.witness.as_ref().map(witness_value),
        "assumptions": v.assumptions,
    })
}

pub fn described_value(d: &Described) -> Value {
    let classes = |cs: &[CharClass]| Value::Array(cs.iter().map(|c| vector_value(c.coords())).collect());
    let (kind, extra) = match &d.description {
        Sigma1Description::WholeSphere => ("wholeSphere", Value::Null),
        Sigma1Description::EmptySet => ("empty", Value::Null),
        Sigma1Description::SphereMinusFiniteSet(c) => ("sphereMinus", classes(c)),
        Sigma1Description::FiniteSet(c) => ("finiteSet", classes(c)),
        Sigma1Description::ByPredicate(_) => ("livingSubgraph", Value::Null),
        Sigma1Description::Unknown(r) => ("unknown", json!(r)),
    };
    json!({
        "description": kind,
        "classes": extra,
        "rank": d.rank,
        "n": d.n,
        "flavor": d.flavor.name(),
        "text": d.to_string().lines().next().unwrap_or(""),
        "trace": d.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_round_trip() {
        let v = json!({
            "kind": "directProduct",
            "left": {"kind": "artin", "vertices": ["a", "b"], "edges": [["a", "b", 4]]},
            "right": {"kind": "free", "rank": 2}
        });
        let g = group(&v).unwrap();
        assert_eq!(group(&group_value(&g)).unwrap(), g);
    }

    #[test]
    fn big_integers_as_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(int(&int_value(&big)).unwrap(), big);
        assert_eq!(int_value(&BigInt::from(-3)), json!(-3));
    }
}
