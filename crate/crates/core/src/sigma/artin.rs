use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::SigmaError;
use crate::charsphere::CharClass;
use crate::grouprep::LabeledGraph;
use crate::zlattice::fmt_vector;

/// Values of a character class on the vertices of an Artin graph, read off
/// through the odd-component coordinates.
pub fn vertex_values(graph: &LabeledGraph, cls: &CharClass) -> Result<Vec<BigInt>, SigmaError> {
    let comps = graph.odd_components().len();
    if cls.dim() != comps {
        return Err(SigmaError::MismatchedGroups(format!(
            "class {cls} has {} coordinates, the graph has {comps} odd components",
            cls.dim()
        )));
    }
    Ok(graph
        .odd_component_map()
        .into_iter()
        .map(|c| cls.coords()[c].clone())
        .collect())
}

fn dead(label: u32, x: &BigInt, y: &BigInt) -> bool {
    label % 2 == 0 && !x.is_zero() && *x == -y
}

/// Deletes the vertices where χ vanishes and the χ-dead edges (even label,
/// `χ(v) = -χ(w) ≠ 0`).
pub fn living_subgraph(graph: &LabeledGraph, values: &[BigInt]) -> Result<LabeledGraph, SigmaError> {
    if values.len() != graph.vertex_count() {
        return Err(SigmaError::MismatchedGroups(format!(
            "{} vertex values for {} vertices",
            values.len(),
            graph.vertex_count()
        )));
    }
    if graph
        .edges()
        .iter()
        .any(|e| e.label % 2 == 1 && values[e.u] != values[e.v])
    {
        return Err(SigmaError::CharacterInconsistentWithAbelianization {
            values: fmt_vector(values),
        });
    }
    let keep: Vec<bool> = values.iter().map(|x| !x.is_zero()).collect();
    Ok(graph.subgraph(&keep, |e| !dead(e.label, &values[e.u], &values[e.v])))
}

/// `sub` is nonempty and connected, and every vertex of `ambient` lies in
/// `sub` or is adjacent in `ambient` to a vertex of `sub`.
pub fn is_connected_and_dominant(sub: &LabeledGraph, ambient: &LabeledGraph) -> bool {
    if sub.vertex_count() == 0 || !sub.is_connected() {
        return false;
    }
    let inside: HashSet<usize> = sub
        .vertices()
        .iter()
        .filter_map(|name| ambient.vertex_index(name))
        .collect();
    (0..ambient.vertex_count())
        .all(|v| inside.contains(&v) || ambient.neighbors(v).any(|w| inside.contains(&w)))
}

/// Closed form for a single edge with label `m >= 3`: `[χ] ∉ Σ¹` iff `m` is
/// even and `χ(v) = -χ(w) ≠ 0`.
pub fn dihedral_member(m: u32, x: &BigInt, y: &BigInt) -> bool {
    !dead(m, x, y)
}

pub(super) fn sign_pattern(values: &[BigInt]) -> String {
    values
        .iter()
        .map(|x| {
            if x.is_zero() {
                '0'
            } else if x.is_positive() {
                '+'
            } else {
                '-'
            }
        })
        .collect()
}
