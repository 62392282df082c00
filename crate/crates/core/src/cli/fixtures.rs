//! Worked-example descriptors shipped with the binary, and the generated
//! families used to cross-check decision paths.

use serde_json::Value;

use super::json;
use crate::fixpoint::{AutTriple, PsiSpec};
use crate::grouprep::{GroupDesc, LabeledGraph};
use crate::zlattice::{FgAbelian, IntMatrix};

pub const FREE2: &str = include_str!("../../fixtures/free2.json");
pub const TRIANGLE: &str = include_str!("../../fixtures/triangle.json");
pub const DIHEDRAL4: &str = include_str!("../../fixtures/dihedral4.json");
pub const Z: &str = include_str!("../../fixtures/z.json");
pub const P2K: &str = include_str!("../../fixtures/p2k.json");
pub const WREATH: &str = include_str!("../../fixtures/wreath.json");
pub const TRIANGLE_SWAP: &str = include_str!("../../fixtures/triangle_swap.psi.json");
pub const WREATH_SWAP: &str = include_str!("../../fixtures/wreath_swap.psi.json");
pub const INTRO: &str = include_str!("../../fixtures/intro.aut.json");
pub const EXA: &str = include_str!("../../fixtures/exa.aut.json");
pub const INVERSION: &str = include_str!("../../fixtures/inversion.aut.json");
pub const TRIANGLE_Z: &str = include_str!("../../fixtures/triangle_z.aut.json");

fn parse(src: &str) -> Value {
    serde_json::from_str(src).expect("shipped fixture is valid JSON")
}

pub fn group(src: &str) -> GroupDesc {
    json::group(&parse(src)).expect("shipped fixture is a valid group")
}

pub fn psi(src: &str, h: &GroupDesc) -> PsiSpec {
    json::psi(&parse(src), h).expect("shipped fixture is a valid ψ")
}

pub fn aut(src: &str) -> AutTriple {
    json::aut_triple(&parse(src)).expect("shipped fixture is a valid automorphism")
}

pub fn abelian(src: &str) -> FgAbelian {
    match group(src) {
        GroupDesc::Abelian(a) => a,
        _ => panic!("fixture is not abelian"),
    }
}

fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64(rows)
}

fn triangle_graph() -> LabeledGraph {
    match group(TRIANGLE) {
        GroupDesc::Artin(g) => g,
        _ => unreachable!(),
    }
}

/// Automorphisms with `γ - Id` of finite cokernel, so that `Fix γ` is
/// finite.
pub fn finite_cokernel_family() -> Vec<AutTriple> {
    let f2 = GroupDesc::free(2);
    let f3 = GroupDesc::free(3);
    let tri = GroupDesc::Artin(triangle_graph());
    let swap = PsiSpec::GraphAut(vec![1, 0, 2]);
    let z = FgAbelian::free;
    let z_2 = FgAbelian::new(1, vec![2.into()]).expect("valid");
    let z3 = FgAbelian::new(0, vec![3.into()]).expect("valid");
    let gammas: Vec<(FgAbelian, IntMatrix)> = vec![
        (z(1), m(&[&[-1]])),
        (z(2), m(&[&[-1, 0], &[0, -1]])),
        (z(2), m(&[&[0, -1], &[1, 0]])),
        (z(2), m(&[&[2, 1], &[1, 1]])),
        (z(2), m(&[&[0, 1], &[-1, -1]])),
        (z_2.clone(), m(&[&[-1, 0], &[0, 1]])),
        (z3.clone(), m(&[&[2]])),
    ];
    let alpha = |a: &FgAbelian, r: usize, seed: i64| {
        let rows: Vec<Vec<i64>> = (0..a.cover_dim())
            .map(|i| (0..r).map(|j| (seed + i as i64 * 2 + j as i64 * 3) % 4 - 1).collect())
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        m(&refs)
    };
    let mut out = Vec::new();
    for (k, (a, g)) in gammas.iter().enumerate() {
        for (h, psi) in [(&f2, PsiSpec::Identity), (&f3, PsiSpec::Identity), (&tri, swap.clone())] {
            if out.len() == 20 {
                break;
            }
            let r = if matches!(h, GroupDesc::Artin(_)) { 1 } else { h.generator_count() };
            let t = AutTriple::new(h.clone(), a.clone(), alpha(a, r, k as i64), g.clone(), psi)
                .expect("family member is valid");
            out.push(t);
        }
    }
    out
}

/// Automorphisms of finite order with `γ ≠ Id` and `A/I_φ` infinite, so the
/// order rule is the one that applies.
pub fn finite_order_family() -> Vec<AutTriple> {
    let f2 = GroupDesc::free(2);
    let f3 = GroupDesc::free(3);
    let tri = GroupDesc::Artin(triangle_graph());
    let swap = PsiSpec::GraphAut(vec![1, 0, 2]);
    let z = FgAbelian::free;
    let flip = m(&[&[1, 0], &[0, -1]]);
    let exchange = m(&[&[0, 1], &[1, 0]]);
    let t = |h: &GroupDesc, a: FgAbelian, alpha: IntMatrix, gamma: IntMatrix, psi: PsiSpec| {
        AutTriple::new(h.clone(), a, alpha, gamma, psi).expect("family member is valid")
    };
    vec![
        t(&f2, z(2), m(&[&[0, 0], &[1, 0]]), flip.clone(), PsiSpec::Identity),
        t(&f2, z(2), m(&[&[0, 0], &[1, 1]]), flip.clone(), PsiSpec::Identity),
        t(&f2, z(2), m(&[&[0, 0], &[0, 0]]), flip.clone(), PsiSpec::Identity),
        t(&f3, z(2), m(&[&[0, 0, 0], &[2, -1, 0]]), flip.clone(), PsiSpec::Identity),
        t(&f2, z(2), m(&[&[1, 0], &[-1, 0]]), exchange.clone(), PsiSpec::Identity),
        t(&f3, z(2), m(&[&[1, 2, 0], &[-1, -2, 0]]), exchange.clone(), PsiSpec::Identity),
        t(&tri, z(2), m(&[&[0], &[1]]), flip.clone(), swap.clone()),
        t(&tri, z(2), m(&[&[0], &[0]]), flip.clone(), swap.clone()),
        t(
            &f2,
            z(3),
            m(&[&[0, 0], &[1, 0], &[0, 1]]),
            m(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]]),
            PsiSpec::Identity,
        ),
        t(&tri, z(2), m(&[&[1], &[-1]]), exchange, swap),
    ]
}
