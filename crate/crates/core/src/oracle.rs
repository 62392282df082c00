//! Brute-force referees for the symbolic rules. Nothing here calls the
//! rule it checks: free-group Σ¹ is tested on the Cayley tree, Meier's
//! dihedral theorem against the living-subgraph decider, abelianization
//! against a hand-built relation matrix.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::grouprep::{GroupDesc, LabeledGraph};
use crate::sigma::{is_connected_and_dominant, living_subgraph};
use crate::zlattice::{cokernel, FgAbelian, IntMatrix};

/// A freely reduced word in `Free(r)`: letters `(generator, ±1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TreeVertex(Vec<(usize, i8)>);

impl TreeVertex {
    pub fn identity() -> Self {
        TreeVertex(vec![])
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self · x`, if that product is reduced (no cancellation).
    fn extend(&self, x: (usize, i8)) -> Option<TreeVertex> {
        if self.0.last() == Some(&(x.0, -x.1)) {
            return None;
        }
        let mut v = self.0.clone();
        v.push(x);
        Some(TreeVertex(v))
    }

    fn value(letters: &[(usize, i8)], chi: &[i64]) -> i64 {
        letters.iter().map(|&(g, s)| chi[g] * s as i64).sum()
    }

    pub fn chi(&self, chi: &[i64]) -> i64 {
        Self::value(&self.0, chi)
    }

    /// Vertices of the unique path from `self` to `other` in the tree.
    pub fn geodesic(&self, other: &TreeVertex) -> Vec<TreeVertex> {
        let p = self.0.iter().zip(&other.0).take_while(|(a, b)| a == b).count();
        let mut path: Vec<TreeVertex> = (p..=self.len()).rev().map(|k| TreeVertex(self.0[..k].to_vec())).collect();
        path.extend((p + 1..=other.len()).map(|k| TreeVertex(other.0[..k].to_vec())));
        path
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for &(g, s) in &self.0 {
            let c = (b'a' + g as u8) as char;
            if s > 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}⁻¹")?;
            }
        }
        Ok(())
    }
}

/// Two vertices of `Cay(F_r)_χ` not joined inside it: `χ(u), χ(v) ≥ 0`
/// but the geodesic between them passes through `dip` with `χ(dip) < 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DipCertificate {
    pub u: TreeVertex,
    pub v: TreeVertex,
    pub dip: TreeVertex,
    pub dip_value: i64,
}

impl DipCertificate {
    pub fn check(&self, chi: &[i64]) -> bool {
        self.u.chi(chi) >= 0
            && self.v.chi(chi) >= 0
            && self.dip.chi(chi) == self.dip_value
            && self.dip_value < 0
            && self.u.geodesic(&self.v).contains(&self.dip)
    }
}

impl fmt::Display for DipCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u = {}, v = {}: geodesic passes {} with χ = {}", self.u, self.v, self.dip, self.dip_value)
    }
}

/// Searches the ball of radius `radius` in `F_r` for a [`DipCertificate`].
/// Returns `None` for `r = 1`, for trivial `χ`, or when the ball is too
/// small.
pub fn free_sigma1_witness(r: usize, chi: &[i64], radius: usize) -> Option<DipCertificate> {
    if r < 2 || chi.len() != r || chi.iter().all(|&x| x == 0) {
        return None;
    }
    let letters: Vec<(usize, i8)> = (0..r).flat_map(|g| [(g, 1), (g, -1)]).collect();
    let mut seen: Vec<TreeVertex> = vec![TreeVertex::identity()];
    let mut level = vec![TreeVertex::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &level {
            for &x in &letters {
                let Some(v) = w.extend(x) else { continue };
                if v.chi(chi) >= 0 {
                    for u in seen.iter().filter(|u| u.chi(chi) >= 0) {
                        if let Some(dip) = u.geodesic(&v).into_iter().find(|p| p.chi(chi) < 0) {
                            let dip_value = dip.chi(chi);
                            return Some(DipCertificate { u: u.clone(), v, dip, dip_value });
                        }
                    }
                }
                next.push(v);
            }
        }
        seen.extend(next.iter().cloned());
        level = next;
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DihedralReport {
    pub m: u32,
    pub checked: usize,
    /// Characters where the living-subgraph decider disagrees with the
    /// closed form.
    pub mismatches: Vec<(i64, i64)>,
    /// Normalized classes found outside Σ¹.
    pub complement: Vec<Vec<i64>>,
}

impl fmt::Display for DihedralReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self
            .complement
            .iter()
            .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(
            f,
            "m = {}: {} characters, {} mismatches, complement {{{}}}",
            self.m,
            self.checked,
            self.mismatches.len(),
            c.join(", ")
        )
    }
}

const DIHEDRAL_BOX: i64 = 3;

/// Runs the living-subgraph decider on every character of the dihedral
/// Artin group `⟨a, b | prod(a,b;m) = prod(b,a;m)⟩` with values in
/// `[-3, 3]` and compares with Meier's closed form.
pub fn dihedral_exhaust(m: u32) -> Option<DihedralReport> {
    if !(3..=12).contains(&m) {
        return None;
    }
    let graph = LabeledGraph::from_indices(vec!["a".into(), "b".into()], vec![(0, 1, m)]).ok()?;
    let mut checked = 0;
    let mut mismatches = Vec::new();
    let mut complement: Vec<Vec<i64>> = Vec::new();
    for x in -DIHEDRAL_BOX..=DIHEDRAL_BOX {
        for y in -DIHEDRAL_BOX..=DIHEDRAL_BOX {
            if (x, y) == (0, 0) || (m % 2 == 1 && x != y) {
                continue;
            }
            checked += 1;
            let vals = [BigInt::from(x), BigInt::from(y)];
            let l = living_subgraph(&graph, &vals).ok()?;
            let decided = is_connected_and_dominant(&l, &graph);
            let closed = !(m % 2 == 0 && x == -y);
            if decided != closed {
                mismatches.push((x, y));
            }
            if !decided {
                let g = num_integer::gcd(x.abs(), y.abs());
                let class = vec![x / g, y / g];
                if !complement.contains(&class) {
                    complement.push(class);
                }
            }
        }
    }
    complement.sort();
    Some(DihedralReport { m, checked, mismatches, complement })
}

/// Abelianization of a free or Artin group from its relation matrix:
/// an odd edge `{a, b}` contributes `a - b`, even edges contribute nothing.
pub fn abelianization_row_reduce(g: &GroupDesc) -> Option<FgAbelian> {
    match g {
        GroupDesc::Free { rank, .. } => Some(FgAbelian::free(*rank)),
        GroupDesc::Artin(graph) => {
            let n = graph.vertex_count();
            let odd: Vec<_> = graph.edges().iter().filter(|e| e.label % 2 == 1).collect();
            let mut rel = IntMatrix::zeros(n, odd.len());
            for (j, e) in odd.iter().enumerate() {
                rel.set(e.u, j, BigInt::from(1));
                rel.set(e.v, j, BigInt::from(-1));
            }
            Some(cokernel(&rel))
        }
        _ => None,
    }
}
