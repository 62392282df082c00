use num_bigint::BigInt;
use num_traits::Zero;

use super::{finite_order, fix_gamma, fix_of_psi, i_phi, AutTriple, FixDescription, FixError, IPhiData, Order};
use crate::charsphere::{restriction_matrix, saturated_basis, CharClass, Subsphere};
use crate::grouprep::{center_info, char_space, evaluate_word, GroupDesc, SubgroupEmbedding, Word};
use crate::sigma::{
    describe, kernel_type_into, span_complement, type_of, Config, Ctx, Flavor, Outcome, Rule, RuleApplication,
    SigmaError, SpanComplement, Verdict, Witness,
};
use crate::zlattice::{kernel, FgAbelian, IntMatrix, Lattice};

/// Which decision path [`fix_type_with`] may take.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FixPath {
    /// Shortcuts first (finite `Fix γ`, `γ = Id`, finite order), then the
    /// general path.
    #[default]
    Auto,
    /// Only the general path through `P_φ`.
    General,
}

/// `I_φ`, `ε_φ` and `P_φ` data for a triple, restricted to `Fix ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Displacement {
    pub i_phi: IPhiData,
    pub fix_gamma: FgAbelian,
    pub fix_gamma_lattice: Lattice,
    /// `α₁` on the generators of `Fix ψ`, in the free cover of `A`.
    pub alpha_values: IntMatrix,
    pub im_epsilon: FgAbelian,
    /// Characters of `Fix ψ` vanishing on `P_φ` (columns).
    pub vanishing: IntMatrix,
    /// Characters of `Fix ψ` factoring through `ε_φ` (columns).
    pub factoring: IntMatrix,
    /// `α(P_φ) = 0`, so `Fix φ = P_φ × Fix γ`.
    pub split: bool,
}

impl Displacement {
    pub fn structure(&self) -> String {
        let mut lines = vec![
            format!("Fix γ = {} ≅ {}", super::lattice_str(&self.fix_gamma_lattice), self.fix_gamma),
            self.i_phi.to_string(),
            format!("im ε_φ = {}", self.im_epsilon),
        ];
        let p = match self.vanishing.cols() {
            0 => "a finite-index subgroup of Fix ψ".to_string(),
            1 => format!(
                "ker [{}] up to finite index",
                crate::zlattice::fmt_vector(&self.vanishing.column(0))
            ),
            w => format!("the kernel of a rank {w} map to im ε_φ"),
        };
        lines.push(format!("P_φ = {p}"));
        if self.split {
            let fg = if self.fix_gamma.is_trivial() {
                "1".to_string()
            } else {
                super::lattice_str(&self.fix_gamma_lattice)
            };
            lines.push(format!("α(P_φ) = 0, so Fix φ = P_φ × {fg}"));
        }
        lines.join("\n")
    }
}

/// Coordinates of the `Fix ψ` generators in the free part of `H_ab`.
fn generator_coords(h: &GroupDesc, emb: &SubgroupEmbedding) -> Result<IntMatrix, FixError> {
    let space = char_space(h)?;
    let cols = emb
        .words
        .iter()
        .map(|w| evaluate_word(&space.images, w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntMatrix::from_columns(&cols, space.rank)?)
}

/// Exponent vectors `e` over the generators with `vals · e ∈ j`.
fn preimage_exponents(vals: &IntMatrix, j: &Lattice) -> Result<Vec<Vec<BigInt>>, FixError> {
    let g = vals.cols();
    if g == 0 {
        return Ok(vec![]);
    }
    let k = if j.rank() == 0 {
        kernel(vals)
    } else {
        kernel(&vals.hstack(&j.basis_matrix().scale(&BigInt::from(-1)))?)
    };
    Ok(k.columns().into_iter().map(|c| c[..g].to_vec()).filter(|c| c.iter().any(|x| !x.is_zero())).collect())
}

/// Characters of `f` (columns) vanishing on the elements whose exponent
/// vectors lie in `lambda`.
pub(crate) fn vanishing_on(f: &GroupDesc, lambda: &[Vec<BigInt>]) -> Result<IntMatrix, FixError> {
    let space = char_space(f)?;
    let r = space.rank;
    if lambda.is_empty() {
        return Ok(IntMatrix::identity(r));
    }
    let l = IntMatrix::from_columns(lambda, space.images.cols())?;
    let m = space.images.mul(&l)?;
    Ok(saturated_basis(&kernel(&m.transpose()), r))
}

/// Characters of `f` vanishing on the kernel of `vals` modulo `j`.
pub(crate) fn vanishing_on_preimage(f: &GroupDesc, vals: &IntMatrix, j: &Lattice) -> Result<IntMatrix, FixError> {
    vanishing_on(f, &preimage_exponents(vals, j)?)
}

pub fn displacement(t: &AutTriple, fix: &FixDescription) -> Result<Displacement, FixError> {
    let ip = i_phi(t)?;
    let (fix_gamma_lattice, fix_gamma) = fix_gamma(t)?;
    let x = generator_coords(&t.h, &fix.embedding)?;
    let alpha_values = t.alpha.mul(&x)?;
    let j = &ip.with_relations;
    let d = t.a.cover_dim();
    let image = Lattice::from_generators(d, alpha_values.columns())?.sum(j)?;
    let im_epsilon = image.quotient_of(j)?;
    let lambda = preimage_exponents(&alpha_values, j)?;
    let vanishing = vanishing_on(&fix.group, &lambda)?;

    let f = t.a.free_rank();
    let r_f = char_space(&fix.group)?.rank;
    let factoring = if f == 0 {
        IntMatrix::zeros(r_f, 0)
    } else {
        let idx: Vec<usize> = (0..f).collect();
        let gm = t.gamma_minus_identity().select_rows(0..f).select_columns(&idx);
        let mu = kernel(&gm.transpose());
        let rm = restriction_matrix(&t.h, &fix.embedding)?;
        let alpha_free = t.alpha.select_rows(0..f);
        saturated_basis(&rm.mul(&alpha_free.transpose())?.mul(&mu)?, r_f)
    };

    let rel = crate::zlattice::relation_lattice(&t.a);
    let mut split = true;
    for e in &lambda {
        if !rel.contains(&alpha_values.apply(e)?)? {
            split = false;
            break;
        }
    }
    Ok(Displacement {
        i_phi: ip,
        fix_gamma,
        fix_gamma_lattice,
        alpha_values,
        im_epsilon,
        vanishing,
        factoring,
        split,
    })
}

/// Checks the standing hypotheses on `H`: trivial center and type `F_n`.
pub(crate) fn check_h(h: &GroupDesc, ctx: Ctx, assumptions: &mut Vec<String>) -> Result<(), FixError> {
    match center_info(h) {
        Some(z) if !z.group.is_trivial() => {
            return Err(FixError::Precondition(format!(
                "Z(H) = {} is nontrivial; H must be centerless",
                z.group
            )))
        }
        Some(_) => {}
        None => assumptions.push(format!("Z({h}) = 1 assumed")),
    }
    let mut scratch = Vec::new();
    match type_of(h, ctx, &mut scratch)? {
        Outcome::Yes => Ok(()),
        Outcome::No => Err(FixError::Precondition(format!("H = {h} is not of type {}", ctx.flavor.property(ctx.n)))),
        Outcome::Unknown(_) => {
            assumptions.push(format!("H = {h} assumed of type {}", ctx.flavor.property(ctx.n)));
            Ok(())
        }
    }
}

pub(crate) fn class_values(f: &GroupDesc, c: &CharClass) -> Result<Vec<BigInt>, FixError> {
    let space = char_space(f)?;
    Ok(space.images.apply_left(c.coords())?)
}

pub fn fix_type_direct_product(t: &AutTriple, n: u32, flavor: Flavor, cfg: &Config) -> Result<Verdict, FixError> {
    fix_type_with(t, n, flavor, cfg, FixPath::Auto)
}

pub fn fix_type_with(
    t: &AutTriple,
    n: u32,
    flavor: Flavor,
    cfg: &Config,
    path: FixPath,
) -> Result<Verdict, FixError> {
    if n == 0 {
        return Err(SigmaError::InvalidDegree.into());
    }
    t.validate()?;
    let ctx = Ctx { n, flavor, cfg };
    let mut assumptions = Vec::new();
    check_h(&t.h, ctx, &mut assumptions)?;
    let fix = fix_of_psi(&t.h, &t.psi)?;
    let d = displacement(t, &fix)?;
    let f = &fix.group;
    let psi_name = t.psi.describe(&t.h);
    let mut trace = fix.trace.clone();
    let mut witness = None;
    let auto = path == FixPath::Auto;
    let order = if auto { finite_order(t)? } else { Order::Unknown("not consulted".into()) };

    let out = if auto && d.i_phi.quotient.is_finite() {
        if t.gamma_is_inversion() {
            trace.push(Rule::GammaInversion.apply("γ = -Id, so every element of Fix γ has order at most 2"));
        }
        trace.push(Rule::FixGammaFinite.apply(format!(
            "Fix γ = {} is finite ({})",
            d.fix_gamma, d.i_phi
        )));
        type_of(f, ctx, &mut trace)?
    } else if auto && t.gamma_is_identity() {
        trace.push(Rule::GammaIdentity.apply(format!(
            "α₁ = α|Fix ψ is {} on the generators of Fix ψ = {f}",
            d.alpha_values
        )));
        p_phi_type(f, &d, &psi_name, ctx, &mut trace, &mut assumptions, &mut witness)?
    } else if let Order::Finite(m) = order {
        let e = d.im_epsilon.exponent();
        let exp_ok = d.im_epsilon.is_finite() && (BigInt::from(m) % &e).is_zero();
        if exp_ok {
            trace.push(Rule::FiniteOrder.apply(format!(
                "φ has order {m}; im ε_φ = {} is finite of exponent {e}, dividing {m}",
                d.im_epsilon
            )));
            type_of(f, ctx, &mut trace)?
        } else {
            Outcome::Unknown(format!(
                "φ has order {m} but im ε_φ = {} does not have exponent dividing it",
                d.im_epsilon
            ))
        }
    } else {
        general(f, &d, &psi_name, ctx, &mut trace, &mut assumptions, &mut witness)?
    };

    let mut v = out.into_verdict(trace, n, flavor, cfg);
    v.assumptions.extend(assumptions);
    if v.answer == crate::sigma::Answer::No {
        v.witness = witness;
    }
    Ok(v)
}

fn general(
    f: &GroupDesc,
    d: &Displacement,
    psi_name: &str,
    ctx: Ctx,
    trace: &mut Vec<RuleApplication>,
    assumptions: &mut Vec<String>,
    witness: &mut Option<Witness>,
) -> Result<Outcome, FixError> {
    trace.push(Rule::DirectFactor.apply(format!("P_φ = α₁⁻¹(I_φ) inside Fix ψ = {f}")));
    trace.push(Rule::DisplacementData.apply(format!("{}, im ε_φ = {}", d.i_phi, d.im_epsilon)));
    if d.split {
        trace.push(Rule::SplitFix.apply(format!(
            "α(P_φ) = 0, so Fix φ = P_φ × {} with Fix γ ≅ {}",
            super::lattice_str(&d.fix_gamma_lattice),
            d.fix_gamma
        )));
    }
    let mut tt = Vec::new();
    let ft = type_of(f, ctx, &mut tt)?;
    if ft == Outcome::No {
        trace.extend(tt);
        return Ok(Outcome::No);
    }
    let p = p_phi_type(f, d, psi_name, ctx, trace, assumptions, witness)?;
    Ok(match (ft, p) {
        (Outcome::Yes, p) => p,
        (_, Outcome::No) => Outcome::No,
        (Outcome::Unknown(r), _) => Outcome::Unknown(r),
        (Outcome::No, _) => unreachable!(),
    })
}

fn class_witness(f: &GroupDesc, psi_name: &str, c: &CharClass, note: String) -> Result<Witness, FixError> {
    Ok(Witness {
        psi: Some(psi_name.to_string()),
        restricted: Some(class_values(f, c)?),
        class: Some(c.clone()),
        note,
        ..Witness::default()
    })
}

/// Type of `P_φ`, given the characters of `Fix ψ` vanishing on it.
fn p_phi_type(
    f: &GroupDesc,
    d: &Displacement,
    psi_name: &str,
    ctx: Ctx,
    trace: &mut Vec<RuleApplication>,
    assumptions: &mut Vec<String>,
    witness: &mut Option<Witness>,
) -> Result<Outcome, FixError> {
    let b = &d.vanishing;
    let w = b.cols();
    let rf = b.rows();
    if w == 0 {
        trace.push(Rule::TypeFiniteIndex.apply(format!(
            "im ε_φ = {} is finite, so P_φ has finite index in Fix ψ",
            d.im_epsilon
        )));
        return Ok(type_of(f, ctx, trace)?);
    }
    if w == 1 {
        let c = CharClass::from_vector(b.column(0))?;
        let out = kernel_type_into(f, &c, ctx, trace, assumptions)?;
        if out == Outcome::No {
            *witness = Some(class_witness(f, psi_name, &c, format!("P_φ is commensurable with ker {c}"))?);
        }
        return Ok(out);
    }
    trace.push(Rule::AboveCommutator.apply(format!(
        "P_φ ⊇ (Fix ψ)′ and S(Fix ψ, P_φ) spans a subsphere of dimension {w}"
    )));
    let mut tl = Vec::new();
    let desc = describe(f, ctx, &mut tl)?;
    if let Some(list) = desc.finite_complement(rf) {
        trace.extend(tl);
        let sub = Subsphere {
            ambient_rank: rf,
            basis: b.clone(),
        };
        for c in &list {
            if sub.contains(c) {
                trace.push(Rule::Witness.apply(format!("{c} lies outside Σ and vanishes on P_φ")));
                *witness = Some(class_witness(f, psi_name, c, "no h ∈ P_φ with χ(h) ≠ 0".into())?);
                return Ok(Outcome::No);
            }
            let note = match box_witness(f, d, c, ctx.cfg.witness_bound)? {
                Some((word, val)) => format!("{c}: h = {word} has χ(h) = {val} ≠ 0 and α(h) ∈ I_φ"),
                None => format!(
                    "{c}: no h within exponent bound {}, but {c} does not vanish on P_φ so one exists",
                    ctx.cfg.witness_bound
                ),
            };
            trace.push(Rule::Witness.apply(note));
        }
        return Ok(Outcome::Yes);
    }
    Ok(match span_complement(f, b, ctx, trace)? {
        SpanComplement::Exact(l) if l.is_empty() => Outcome::Yes,
        SpanComplement::Unknown(r) => Outcome::Unknown(r),
        other => {
            let t = other.sample().expect("nonempty").to_vec();
            let c = CharClass::from_vector(b.apply(&t)?)?;
            trace.push(Rule::Witness.apply(format!("{c} vanishes on P_φ and lies outside Σ(Fix ψ)")));
            *witness = Some(class_witness(f, psi_name, &c, "no h ∈ P_φ with χ(h) ≠ 0".into())?);
            Outcome::No
        }
    })
}

const BOX_LIMIT: usize = 20_000;

/// An element `h` of `Fix ψ`, written as a product of generator powers with
/// exponents in `[-bound, bound]`, with `χ(h) ≠ 0` and `α(h) ∈ I_φ`.
fn box_witness(
    f: &GroupDesc,
    d: &Displacement,
    c: &CharClass,
    bound: i64,
) -> Result<Option<(String, BigInt)>, FixError> {
    let g = d.alpha_values.cols();
    let side = (2 * bound + 1) as usize;
    let total = (0..g).try_fold(1usize, |acc, _| acc.checked_mul(side).filter(|x| *x <= BOX_LIMIT));
    let Some(total) = total else {
        return Ok(None);
    };
    let chi = class_values(f, c)?;
    let j = &d.i_phi.with_relations;
    let mut e = vec![-bound; g];
    for _ in 0..total {
        let ev: Vec<BigInt> = e.iter().map(|&x| BigInt::from(x)).collect();
        let val: BigInt = chi.iter().zip(&ev).map(|(a, b)| a * b).sum();
        if !val.is_zero() && j.contains(&d.alpha_values.apply(&ev)?)? {
            let word = Word::new(e.iter().enumerate().map(|(i, &x)| (i, x)));
            return Ok(Some((f.show_word(&word), val)));
        }
        for k in 0..g {
            if e[k] < bound {
                e[k] += 1;
                break;
            }
            e[k] = -bound;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixpoint::PsiSpec;
    use crate::sigma::Answer;

    fn intro() -> AutTriple {
        AutTriple::new(
            GroupDesc::free(2),
            FgAbelian::free(1),
            IntMatrix::from_i64(&[&[1, 1]]),
            IntMatrix::identity(1),
            PsiSpec::Identity,
        )
        .unwrap()
    }

    #[test]
    fn intro_example() {
        let v = fix_type_direct_product(&intro(), 1, Flavor::Homotopical, &Config::default()).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.citations(), vec!["Cor 5.3", "Thm 2.2(5)", "Thm 2.2(2)"]);
        let g = fix_type_with(&intro(), 1, Flavor::Homotopical, &Config::default(), FixPath::General).unwrap();
        assert_eq!(g.answer, Answer::No);
    }

    #[test]
    fn ex_a_structure() {
        let t = AutTriple::new(
            GroupDesc::free(2),
            FgAbelian::free(2),
            IntMatrix::from_i64(&[&[1, 1], &[0, 0]]),
            IntMatrix::from_i64(&[&[1, 0], &[0, -1]]),
            PsiSpec::Identity,
        )
        .unwrap();
        let fix = fix_of_psi(&t.h, &t.psi).unwrap();
        let d = displacement(&t, &fix).unwrap();
        assert!(d.split);
        assert_eq!(d.vanishing, IntMatrix::from_i64(&[&[1], &[1]]));
        assert_eq!(
            Lattice::from_generators(2, d.vanishing.columns()).unwrap(),
            Lattice::from_generators(2, d.factoring.columns()).unwrap()
        );
        assert_eq!(d.im_epsilon, FgAbelian::free(1));
        let v = fix_type_direct_product(&t, 1, Flavor::Homotopical, &Config::default()).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.citations(), vec!["Cor 5.2", "Thm A", "Ex.a", "Thm 2.2(5)", "Thm 2.2(2)"]);
    }

    #[test]
    fn inversion_follows_fix_psi() {
        let t = AutTriple {
            gamma: IntMatrix::from_i64(&[&[-1]]),
            ..intro()
        };
        let v = fix_type_direct_product(&t, 1, Flavor::Homotopical, &Config::default()).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert_eq!(v.citations()[..2], ["Cor 5.6", "Cor 5.5"]);
        let g = fix_type_with(&t, 1, Flavor::Homotopical, &Config::default(), FixPath::General).unwrap();
        assert_eq!(g.answer, Answer::Yes);
    }

    #[test]
    fn centered_h_rejected() {
        let t = AutTriple::new(
            GroupDesc::Abelian(FgAbelian::free(2)),
            FgAbelian::free(1),
            IntMatrix::from_i64(&[&[0, 0]]),
            IntMatrix::identity(1),
            PsiSpec::Identity,
        )
        .unwrap();
        assert!(matches!(
            fix_type_direct_product(&t, 1, Flavor::Homotopical, &Config::default()),
            Err(FixError::Precondition(_))
        ));
    }
}
