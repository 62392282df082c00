use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

use sigmafix::charsphere::CharClass;
use sigmafix::fixpoint::{self, AutTriple, FixPath, Order, PsiSpec};
use sigmafix::grouprep::{abelianize, GroupDesc, LabeledGraph};
use sigmafix::oracle;
use sigmafix::sigma::{self, Answer, Config, Flavor};
use sigmafix::zlattice::{smith, FgAbelian, IntMatrix};

const F: Flavor = Flavor::Homotopical;

fn matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(-12i64..=12, r * c)
            .prop_map(move |d| IntMatrix::new(r, c, d.into_iter().map(BigInt::from).collect()).unwrap())
    })
}

fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64(rows)
}

/// Unimodular 2×2 matrices with `γ - Id` invertible over Q.
fn finite_fix_gamma() -> impl Strategy<Value = IntMatrix> {
    prop_oneof![
        Just(m(&[&[-1, 0], &[0, -1]])),
        Just(m(&[&[0, -1], &[1, 0]])),
        Just(m(&[&[2, 1], &[1, 1]])),
        Just(m(&[&[0, 1], &[-1, -1]])),
        Just(m(&[&[1, 1], &[1, 0]])),
    ]
}

fn order_two_gamma() -> impl Strategy<Value = IntMatrix> {
    prop_oneof![Just(m(&[&[1, 0], &[0, -1]])), Just(m(&[&[0, 1], &[1, 0]])), Just(m(&[&[-1, 0], &[0, 1]]))]
}

/// Projects `α` into `ker(Id + γ)` so that `φ² = Id` when `γ² = Id`.
fn order_two_alpha(gamma: &IntMatrix, rank: usize, alpha: &mut [i64]) {
    let (top, bottom) = alpha.split_at_mut(rank);
    let bottom = &mut bottom[..rank];
    if *gamma == m(&[&[1, 0], &[0, -1]]) {
        top.fill(0);
    } else if *gamma == m(&[&[-1, 0], &[0, 1]]) {
        bottom.fill(0);
    } else {
        bottom.iter_mut().zip(top.iter()).for_each(|(b, t)| *b = -t);
    }
}

fn free_triple(gamma: IntMatrix, rank: usize, alpha: Vec<i64>) -> AutTriple {
    let k = gamma.rows();
    let rows: Vec<&[i64]> = alpha.chunks(rank).take(k).collect();
    AutTriple::new(GroupDesc::free(rank), FgAbelian::free(k), m(&rows), gamma, PsiSpec::Identity).unwrap()
}

/// Equal real spans: an integral character can factor through `ε_φ` only
/// after scaling, so the integer lattices may differ by finite index.
fn same_span(a: &IntMatrix, b: &IntMatrix) -> bool {
    let both = a.hstack(b).unwrap();
    let r = smith(&both).rank();
    r == smith(a).rank() && r == smith(b).rank()
}

fn artin_graph() -> impl Strategy<Value = LabeledGraph> {
    (1usize..=7).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        prop::collection::vec(prop_oneof![Just(0u32), 2u32..=6], pairs.len()).prop_map(move |labels| {
            let edges = pairs.iter().zip(labels).filter(|(_, l)| *l > 0).map(|(&(u, v), l)| (u, v, l)).collect();
            let names = (0..n).map(|i| format!("v{i}")).collect();
            LabeledGraph::from_indices(names, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn smith_reconstructs(mat in matrix(5)) {
        let s = smith(&mat);
        prop_assert_eq!(s.left.mul(&mat).unwrap().mul(&s.right).unwrap(), s.diagonal_matrix());
        prop_assert!(s.left.is_unimodular() && s.right.is_unimodular());
        prop_assert!(s.diag.iter().all(|d| d >= &BigInt::zero()));
        for w in s.diag.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            prop_assert!(divides);
        }
        prop_assert_eq!(s.rank(), s.diag.iter().filter(|d| !d.is_zero()).count());
    }

    #[test]
    fn smith_of_transpose_has_same_diagonal(mat in matrix(4)) {
        prop_assert_eq!(smith(&mat).diag, smith(&mat.transpose()).diag);
    }

    #[test]
    fn epsilon_factoring_equals_vanishing(
        gamma in prop_oneof![finite_fix_gamma(), order_two_gamma()],
        rank in 2usize..=3,
        alpha in prop::collection::vec(-3i64..=3, 6),
    ) {
        let t = free_triple(gamma, rank, alpha);
        let fix = fixpoint::fix_of_psi(&t.h, &t.psi).unwrap();
        let d = fixpoint::displacement(&t, &fix).unwrap();
        prop_assert!(same_span(&d.vanishing, &d.factoring));
    }

    #[test]
    fn finite_fix_gamma_shortcut_agrees(
        gamma in finite_fix_gamma(),
        rank in 2usize..=3,
        alpha in prop::collection::vec(-3i64..=3, 6),
    ) {
        let t = free_triple(gamma, rank, alpha);
        let cfg = Config::default();
        let a = fixpoint::fix_type_with(&t, 1, F, &cfg, FixPath::Auto).unwrap();
        let g = fixpoint::fix_type_with(&t, 1, F, &cfg, FixPath::General).unwrap();
        prop_assert!(a.citations().contains(&"Cor 5.5"));
        prop_assert_eq!(a.answer, g.answer);
    }

    #[test]
    fn finite_order_shortcut_agrees(
        gamma in order_two_gamma(),
        rank in 2usize..=3,
        mut alpha in prop::collection::vec(-3i64..=3, 6),
    ) {
        order_two_alpha(&gamma, rank, &mut alpha);
        let t = free_triple(gamma, rank, alpha);
        let cfg = Config::default();
        let a = fixpoint::fix_type_with(&t, 1, F, &cfg, FixPath::Auto).unwrap();
        let g = fixpoint::fix_type_with(&t, 1, F, &cfg, FixPath::General).unwrap();
        prop_assert_eq!(a.answer, g.answer);
        let Order::Finite(ord) = fixpoint::finite_order(&t).unwrap() else {
            return Err(TestCaseError::fail("order-two γ with ψ = Id must have finite order"));
        };
        let fix = fixpoint::fix_of_psi(&t.h, &t.psi).unwrap();
        let d = fixpoint::displacement(&t, &fix).unwrap();
        prop_assert!(d.im_epsilon.is_finite());
        prop_assert!(BigInt::from(ord).is_multiple_of(&d.im_epsilon.exponent()));
    }

    #[test]
    fn identity_gamma_is_kernel_type(rank in 2usize..=3, alpha in prop::collection::vec(-3i64..=3, 3)) {
        let t = free_triple(m(&[&[1]]), rank, alpha.clone());
        let cfg = Config::default();
        let v = fixpoint::fix_type_direct_product(&t, 1, F, &cfg).unwrap();
        prop_assert_eq!(v.citations().first().copied(), Some("Cor 5.3"));
        let expected = match CharClass::from_i64(&alpha[..rank]) {
            Ok(c) => sigma::kernel_type(&t.h, &c, 1, F, &cfg).unwrap(),
            Err(_) => sigma::group_type(&t.h, 1, F, &cfg).unwrap(),
        };
        prop_assert_eq!(v.answer, expected.answer);
    }

    #[test]
    fn abelianization_oracle_agrees(g in artin_graph()) {
        let g = GroupDesc::Artin(g);
        prop_assert_eq!(Some(abelianize(&g).unwrap().group), oracle::abelianization_row_reduce(&g));
    }

    #[test]
    fn dihedral_closed_form(m in 3u32..=24, x in -6i64..=6, y in -6i64..=6) {
        prop_assume!((x, y) != (0, 0));
        let g = GroupDesc::Artin(LabeledGraph::from_indices(vec!["a".into(), "b".into()], vec![(0, 1, m)]).unwrap());
        let (c, expected) = if m % 2 == 1 {
            prop_assume!(x != 0);
            (CharClass::from_i64(&[x]).unwrap(), true)
        } else {
            (CharClass::from_i64(&[x, y]).unwrap(), x != -y)
        };
        let v = sigma::membership(&g, &c, &Config::default()).unwrap();
        prop_assert_eq!(v.answer == Answer::Yes, expected);
    }

    #[test]
    fn free_witness_certificates(r in 2usize..=4, raw in prop::collection::vec(-6i64..=6, 4)) {
        let chi = &raw[..r];
        prop_assume!(chi.iter().fold(0i64, |a, &x| a.gcd(&x)) == 1);
        let cert = oracle::free_sigma1_witness(r, chi, 8);
        prop_assert!(cert.is_some_and(|c| c.check(chi)));
    }
}
