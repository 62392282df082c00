//! Fixed subgroups of automorphisms `φ = (ψ, α, γ)` of `H × A` with `H`
//! centerless and `A` finitely generated abelian.
//!
//! The deciders here reduce "is `Fix φ` of type `F_n`" to Σ-invariant
//! questions about `Fix ψ`, which [`crate::sigma`] answers.

mod decide;
mod fnfpa;
mod jones_vaskou;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::charsphere::CharError;
use crate::grouprep::{char_space, GroupDesc, GroupError, SubgroupEmbedding, Word};
use crate::sigma::{RuleApplication, SigmaError};
use crate::zlattice::{image_lattice, kernel, quotient, relation_lattice, FgAbelian, IntMatrix, Lattice, LatticeError};

pub use decide::{displacement, fix_type_direct_product, fix_type_with, Displacement, FixPath};
pub use fnfpa::{
    fgfpa_witness_search, fnfpa_necessary_check, subgroup_above_commutator_type, theorem_c, NData,
};
pub use jones_vaskou::{fix_of_psi, garside_word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixError {
    #[error("invalid automorphism: {0}")]
    InvalidTriple(String),
    #[error("unsupported ψ: {0}")]
    UnsupportedPsi(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Sigma(#[from] SigmaError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `Fix ψ` supplied by the caller, with the source of the claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpaqueFix {
    pub fix: SubgroupEmbedding,
    pub provenance: String,
    /// Order of ψ, if known.
    pub order: Option<u64>,
    /// Action of ψ on the free part of `H_ab` (`r_H x r_H`), if known.
    pub abelian_action: Option<IntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsiSpec {
    Identity,
    /// Label-preserving graph automorphism: vertex `i` goes to `perm[i]`.
    GraphAut(Vec<usize>),
    /// Conjugation by a word. Declared so it can be named; its fixed
    /// subgroup has to be supplied as [`PsiSpec::Opaque`].
    Conjugation(Word),
    Opaque(OpaqueFix),
}

impl PsiSpec {
    /// Short human name, e.g. `(a b)` for a transposition.
    pub fn describe(&self, h: &GroupDesc) -> String {
        match self {
            PsiSpec::Identity => "id".into(),
            PsiSpec::GraphAut(perm) => cycle_notation(perm, &h.generators()),
            PsiSpec::Conjugation(w) => format!("conj({})", h.show_word(w)),
            PsiSpec::Opaque(o) => format!("opaque({})", o.fix.sub),
        }
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            PsiSpec::Identity => Some(1),
            PsiSpec::GraphAut(perm) => Some(perm_order(perm)),
            PsiSpec::Conjugation(_) => None,
            PsiSpec::Opaque(o) => o.order,
        }
    }
}

fn cycle_notation(perm: &[usize], names: &[String]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut cycles = Vec::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cyc.push(names.get(x).cloned().unwrap_or_else(|| x.to_string()));
            x = perm[x];
        }
        cycles.push(format!("({})", cyc.join(" ")));
    }
    if cycles.is_empty() {
        "id".into()
    } else {
        cycles.concat()
    }
}

fn perm_order(perm: &[usize]) -> u64 {
    let mut seen = vec![false; perm.len()];
    let mut order = 1u64;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        order = order.lcm(&len);
    }
    order
}

/// `φ(h, v) = (ψ(h), α(h) + γ(v))` on `H × A`.
///
/// `alpha` is `cover(A) x r_H`, acting on the free coordinates of `H_ab`.
/// `gamma` acts on the free cover of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutTriple {
    pub h: GroupDesc,
    pub a: FgAbelian,
    pub alpha: IntMatrix,
    pub gamma: IntMatrix,
    pub psi: PsiSpec,
}

impl AutTriple {
    pub fn new(h: GroupDesc, a: FgAbelian, alpha: IntMatrix, gamma: IntMatrix, psi: PsiSpec) -> Result<Self, FixError> {
        let t = AutTriple { h, a, alpha, gamma, psi };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), FixError> {
        let bad = |s: String| Err(FixError::InvalidTriple(s));
        let d = self.a.cover_dim();
        let f = self.a.free_rank();
        let r_h = char_space(&self.h)?.rank;
        if self.alpha.rows() != d || self.alpha.cols() != r_h {
            return bad(format!(
                "alpha is {}x{}, expected {d}x{r_h} (cover of A by free rank of H_ab)",
                self.alpha.rows(),
                self.alpha.cols()
            ));
        }
        if self.gamma.rows() != d || self.gamma.cols() != d {
            return bad(format!("gamma must be {d}x{d}"));
        }
        for i in 0..f {
            for j in f..d {
                if !self.gamma.get(i, j).is_zero() {
                    return bad("gamma must send torsion to torsion".into());
                }
            }
        }
        let free_block = self.gamma.select_rows(0..f).select_columns(&(0..f).collect::<Vec<_>>());
        if f > 0 && !free_block.is_unimodular() {
            return bad(format!("free block of gamma {free_block} is not invertible over Z"));
        }
        let rel = relation_lattice(&self.a);
        for v in rel.basis() {
            if !rel.contains(&self.gamma.apply(v)?)? {
                return bad("gamma does not preserve the torsion relations of A".into());
            }
        }
        if image_lattice(&self.gamma).sum(&rel)? != Lattice::full(d) {
            return bad("gamma is not surjective on A".into());
        }
        if let PsiSpec::GraphAut(perm) = &self.psi {
            match &self.h {
                GroupDesc::Artin(g) if g.is_automorphism(perm) => {}
                GroupDesc::Artin(_) => return bad("permutation is not a label-preserving graph automorphism".into()),
                _ => return bad("graph automorphisms need an Artin group H".into()),
            }
        }
        if let PsiSpec::Opaque(o) = &self.psi {
            o.fix.check_against(&self.h)?;
            if let Some(m) = &o.abelian_action {
                if m.rows() != r_h || m.cols() != r_h {
                    return bad(format!("abelian action of ψ must be {r_h}x{r_h}"));
                }
            }
        }
        Ok(())
    }

    /// Action of ψ on the free coordinates of `H_ab`, when determined.
    pub fn psi_abelian_action(&self) -> Result<Option<IntMatrix>, FixError> {
        let r = char_space(&self.h)?.rank;
        Ok(match &self.psi {
            PsiSpec::Identity => Some(IntMatrix::identity(r)),
            PsiSpec::GraphAut(perm) => {
                let GroupDesc::Artin(g) = &self.h else {
                    return Ok(None);
                };
                let comp = g.odd_component_map();
                let mut m = IntMatrix::zeros(r, r);
                for (v, &c) in comp.iter().enumerate() {
                    m.set(comp[perm[v]], c, BigInt::one());
                }
                Some(m)
            }
            PsiSpec::Conjugation(_) => Some(IntMatrix::identity(r)),
            PsiSpec::Opaque(o) => o.abelian_action.clone(),
        })
    }

    pub fn gamma_minus_identity(&self) -> IntMatrix {
        self.gamma
            .sub(&IntMatrix::identity(self.gamma.rows()))
            .expect("gamma is square")
    }

    /// `γ` acts as the identity on `A` (modulo torsion relations).
    pub fn gamma_is_identity(&self) -> bool {
        acts_trivially(&self.gamma_minus_identity(), &self.a)
    }

    pub fn gamma_is_inversion(&self) -> bool {
        let plus = self
            .gamma
            .add(&IntMatrix::identity(self.gamma.rows()))
            .expect("gamma is square");
        acts_trivially(&plus, &self.a)
    }
}

fn acts_trivially(m: &IntMatrix, a: &FgAbelian) -> bool {
    let rel = relation_lattice(a);
    m.columns().iter().all(|c| rel.contains(c).unwrap_or(false))
}

/// `I_φ = (γ - Id)(A)` with the quotient `A / I_φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IPhiData {
    /// Column span of `γ - Id` in the free cover.
    pub lattice: Lattice,
    /// `lattice` plus the torsion relations of `A`.
    pub with_relations: Lattice,
    pub quotient: FgAbelian,
}

impl fmt::Display for IPhiData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I_φ = {}, A/I_φ = {}", lattice_str(&self.lattice), self.quotient)
    }
}

pub(crate) fn lattice_str(l: &Lattice) -> String {
    if l.rank() == 0 {
        return "0".into();
    }
    let gens: Vec<String> = l.basis().iter().map(|v| crate::zlattice::fmt_vector(v)).collect();
    format!("<{}>", gens.join(", "))
}

pub fn i_phi(t: &AutTriple) -> Result<IPhiData, FixError> {
    let lattice = image_lattice(&t.gamma_minus_identity());
    let with_relations = lattice.sum(&relation_lattice(&t.a))?;
    let quotient = quotient(&t.a, &lattice)?;
    Ok(IPhiData {
        lattice,
        with_relations,
        quotient,
    })
}

/// `Fix γ` as a lattice in the cover (relations included) and as a group.
pub fn fix_gamma(t: &AutTriple) -> Result<(Lattice, FgAbelian), FixError> {
    let d = t.a.cover_dim();
    let rel = relation_lattice(&t.a);
    let gm = t.gamma_minus_identity();
    let lat = if rel.rank() == 0 {
        image_lattice(&kernel(&gm))
    } else {
        let stacked = gm.hstack(&rel.basis_matrix().scale(&BigInt::from(-1)))?;
        let k = kernel(&stacked);
        Lattice::from_generators(d, k.columns().into_iter().map(|c| c[..d].to_vec()).collect())?.sum(&rel)?
    };
    let group = lat.quotient_of(&rel)?;
    Ok((lat, group))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
    Unknown(String),
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Infinite => f.write_str("infinite"),
            Order::Unknown(r) => write!(f, "unknown ({r})"),
        }
    }
}

const GAMMA_ORDER_CAP: u64 = 5040;

/// Order of `γ` on `A`, searched up to a cap.
pub fn gamma_order(t: &AutTriple) -> Option<u64> {
    let d = t.gamma.rows();
    let id = IntMatrix::identity(d);
    let mut p = t.gamma.clone();
    for k in 1..=GAMMA_ORDER_CAP {
        if acts_trivially(&p.sub(&id).expect("square"), &t.a) {
            return Some(k);
        }
        p = p.mul(&t.gamma).expect("square");
    }
    None
}

/// Order of φ. With `L = lcm(ord ψ, ord γ)`,
/// `φ^L(h, v) = (h, S_L(h) + v)` where `S_L = Σ γ^(L-1-i) α Ψ^i`.
pub fn finite_order(t: &AutTriple) -> Result<Order, FixError> {
    let Some(op) = t.psi.order() else {
        return Ok(Order::Unknown("order of ψ not known".into()));
    };
    let Some(psi_ab) = t.psi_abelian_action()? else {
        return Ok(Order::Unknown("action of ψ on H_ab not known".into()));
    };
    let Some(og) = gamma_order(t) else {
        return Ok(Order::Infinite);
    };
    let l = op.lcm(&og);
    let mut s = IntMatrix::zeros(t.alpha.rows(), t.alpha.cols());
    // Horner: S_(k+1) = γ S_k + α Ψ^k
    let mut psi_pow = IntMatrix::identity(psi_ab.rows());
    for _ in 0..l {
        s = t.gamma.mul(&s)?.add(&t.alpha.mul(&psi_pow)?)?;
        psi_pow = psi_pow.mul(&psi_ab)?;
    }
    let f = t.a.free_rank();
    if (0..f).any(|i| s.row(i).iter().any(|x| !x.is_zero())) {
        return Ok(Order::Infinite);
    }
    let rel = relation_lattice(&t.a);
    let e = t.a.exponent();
    let mut j = BigInt::one();
    while j <= e {
        if s.scale(&j).columns().iter().all(|c| rel.contains(c).unwrap_or(false)) {
            let j: u64 = j.try_into().unwrap_or(u64::MAX);
            return Ok(Order::Finite(l.saturating_mul(j)));
        }
        j += 1;
    }
    Ok(Order::Infinite)
}

/// `Fix ψ` as a descriptor with its inclusion into `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixDescription {
    pub group: GroupDesc,
    pub embedding: SubgroupEmbedding,
    pub trace: Vec<RuleApplication>,
}

impl FixDescription {
    /// `Fix ψ = <w1, w2, ...>` with words in the generators of `h`.
    pub fn summary(&self, h: &GroupDesc) -> String {
        let words: Vec<String> = self.embedding.words.iter().map(|w| h.show_word(w)).collect();
        format!("Fix ψ = {} via <{}>", self.group, words.join(", "))
    }
}
