//! Negative certificates for FnFPa and the subgroup-above-commutator test.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::decide::{check_h, vanishing_on_preimage};
use super::{fix_of_psi, FixError, PsiSpec};
use crate::charsphere::{restriction_matrix, saturated_basis, vanishing_subsphere, CharClass};
use crate::grouprep::{center_info, char_space, GroupDesc, Word};
use crate::sigma::{
    describe, span_complement, type_of, Answer, Config, Ctx, Flavor, Outcome, Rule, RuleApplication, SigmaError,
    SpanComplement, Verdict, Witness,
};
use crate::zlattice::{fmt_vector, kernel, rank, FgAbelian, IntMatrix, Lattice};

/// A subgroup `N ⊇ G′`, given either by generating words or as the common
/// kernel of characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NData {
    Words(Vec<Word>),
    /// Rows are characters in the coordinates of the character space.
    CommonKernel(IntMatrix),
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |a, x| num_integer::Integer::gcd(&a, x));
    if !g.is_zero() {
        v.iter_mut().for_each(|x| *x = &*x / &g);
    }
    v
}

/// Outcome of "is `N` of type `F_n`" for `N ⊇ G′` with `S(G,N)` spanned by
/// `basis`, plus a class of `S(G,N)` outside `Σⁿ(G)` when the answer is No.
fn above_commutator(
    g: &GroupDesc,
    basis: &IntMatrix,
    preferred: &[CharClass],
    ctx: Ctx,
    trace: &mut Vec<RuleApplication>,
) -> Result<(Outcome, Option<CharClass>), FixError> {
    let w = basis.cols();
    let mut tg = Vec::new();
    let gt = type_of(g, ctx, &mut tg)?;
    if w == 0 {
        trace.push(Rule::AboveCommutator.apply("S(G,N) = ∅: N has finite index in G"));
        trace.extend(tg);
        return Ok((gt, None));
    }
    if gt != Outcome::Yes {
        return Ok((
            Outcome::Unknown(format!("{g} is not known to be of type {}", ctx.flavor.property(ctx.n))),
            None,
        ));
    }
    trace.push(Rule::AboveCommutator.apply(format!("S(G,N) spans a subsphere of dimension {w}")));
    Ok(match span_complement(g, basis, ctx, trace)? {
        SpanComplement::Exact(l) if l.is_empty() => (Outcome::Yes, None),
        SpanComplement::Unknown(r) => (Outcome::Unknown(r), None),
        other => {
            let sub = crate::charsphere::Subsphere {
                ambient_rank: basis.rows(),
                basis: basis.clone(),
            };
            let listed: Vec<CharClass> = match &other {
                SpanComplement::Exact(l) => l
                    .iter()
                    .map(|t| CharClass::from_vector(basis.apply(t)?).map_err(FixError::from))
                    .collect::<Result<_, _>>()?,
                _ => vec![],
            };
            let pick = preferred
                .iter()
                .flat_map(|c| [c.clone(), c.neg()])
                .find(|c| sub.contains(c) && listed.contains(c));
            let c = match pick {
                Some(c) => c,
                None => CharClass::from_vector(basis.apply(other.sample().expect("nonempty"))?)?,
            };
            (Outcome::No, Some(c))
        }
    })
}

fn ndata_basis(g: &GroupDesc, ndata: &NData) -> Result<(IntMatrix, Vec<CharClass>, usize), FixError> {
    let space = char_space(g)?;
    let r = space.rank;
    Ok(match ndata {
        NData::Words(ws) => {
            let s = vanishing_subsphere(g, ws)?;
            let quotient_rank = s.dim();
            (s.basis, vec![], quotient_rank)
        }
        NData::CommonKernel(m) => {
            if m.cols() != r {
                return Err(FixError::Precondition(format!(
                    "characters have {} coordinates, {g} has character rank {r}",
                    m.cols()
                )));
            }
            let preferred = m
                .to_rows()
                .into_iter()
                .filter(|v| v.iter().any(|x| !x.is_zero()))
                .map(|v| CharClass::from_vector(v).map_err(FixError::from))
                .collect::<Result<Vec<_>, _>>()?;
            (saturated_basis(&m.transpose(), r), preferred, rank(m))
        }
    })
}

pub fn subgroup_above_commutator_type(
    g: &GroupDesc,
    ndata: &NData,
    n: u32,
    flavor: Flavor,
    cfg: &Config,
) -> Result<Verdict, FixError> {
    if n == 0 {
        return Err(SigmaError::InvalidDegree.into());
    }
    let ctx = Ctx { n, flavor, cfg };
    let (basis, preferred, _) = ndata_basis(g, ndata)?;
    let mut trace = Vec::new();
    let (out, cls) = above_commutator(g, &basis, &preferred, ctx, &mut trace)?;
    let mut v = out.into_verdict(trace, n, flavor, cfg);
    if let Some(c) = cls {
        v.witness = Some(Witness {
            note: format!("{c} vanishes on N and lies outside {}", flavor.invariant(n)),
            class: Some(c),
            ..Witness::default()
        });
    }
    Ok(v)
}

/// If `N ⊇ G′` with `rk G/N ≤ rk Z(G)` is provably not of type `F_n`, then
/// `G` does not have FnFPa. Answers No in that case and Unknown otherwise.
pub fn fnfpa_necessary_check(
    g: &GroupDesc,
    ndata: &NData,
    n: u32,
    flavor: Flavor,
    cfg: &Config,
) -> Result<Verdict, FixError> {
    if n == 0 {
        return Err(SigmaError::InvalidDegree.into());
    }
    let ctx = Ctx { n, flavor, cfg };
    let (basis, preferred, quotient_rank) = ndata_basis(g, ndata)?;
    let Some(z) = center_info(g) else {
        return Ok(Verdict::unknown("inconclusive: the center of G is not known", vec![], n, flavor));
    };
    let rz = z.group.free_rank();
    if quotient_rank > rz {
        return Ok(Verdict::unknown(
            format!("inconclusive: rk G/N = {quotient_rank} exceeds rk Z(G) = {rz}"),
            vec![],
            n,
            flavor,
        ));
    }
    let mut trace = Vec::new();
    let (out, cls) = above_commutator(g, &basis, &preferred, ctx, &mut trace)?;
    let prop = flavor.property(n);
    Ok(match out {
        Outcome::No => {
            let c = cls.expect("No carries a class");
            trace.push(Rule::AboveCommutatorRank.apply(format!(
                "rk G/N = {quotient_rank} ≤ rk Z(G) = {rz} and N ∉ {prop}: G does not have {}",
                fpa_name(n, flavor)
            )));
            Verdict::new(Answer::No, trace, n, flavor).with_witness(Witness {
                note: format!("{c} ∈ S(G,N) lies outside {}", flavor.invariant(n)),
                class: Some(c),
                ..Witness::default()
            })
        }
        Outcome::Yes => Verdict::unknown(format!("inconclusive: N is of type {prop}"), trace, n, flavor),
        Outcome::Unknown(r) => Verdict::unknown(format!("inconclusive: {r}"), trace, n, flavor),
    })
}

fn fpa_name(n: u32, flavor: Flavor) -> String {
    match (n, flavor) {
        (1, _) => "FGFPa".to_string(),
        (n, Flavor::Homotopical) => format!("F{n}FPa"),
        (n, Flavor::Homological) => format!("FP{n}FPa"),
    }
}

/// Searches the supplied automorphisms of `H` for a character `χ` of `H`
/// whose restriction to `Fix ψ` has a kernel not of type `F_n`, which
/// shows that `H × A` lacks FnFPa.
pub fn fgfpa_witness_search(
    h: &GroupDesc,
    a: &FgAbelian,
    psis: &[PsiSpec],
    n: u32,
    flavor: Flavor,
    exhaustive: bool,
    cfg: &Config,
) -> Result<Verdict, FixError> {
    if n == 0 {
        return Err(SigmaError::InvalidDegree.into());
    }
    let ctx = Ctx { n, flavor, cfg };
    let mut assumptions = Vec::new();
    match center_info(h) {
        Some(z) if !z.group.is_trivial() => {
            return Err(FixError::Precondition(format!("Z(H) = {} is nontrivial; H must be centerless", z.group)))
        }
        _ => {}
    }
    check_h(h, ctx, &mut assumptions)?;
    let mut trace = Vec::new();
    let d = describe(h, ctx, &mut trace)?;
    let r_h = char_space(h)?.rank;
    let whole = d.finite_complement(r_h).is_some_and(|l| l.is_empty());
    if whole {
        trace.push(Rule::AboveCommutator.apply(format!(
            "S(H,H′) = S(H) ⊆ {}: H′ is of type {}",
            flavor.invariant(n),
            flavor.property(n)
        )));
    }
    let mut h_fpa = false;
    if let GroupDesc::Artin(gr) = h {
        if n == 1 && gr.is_large_type() && gr.is_complete() {
            trace.push(Rule::LargeTypeFgfpa.apply(format!("{h} is of large type with a complete graph")));
            h_fpa = true;
        }
    }
    if psis.is_empty() {
        return Ok(finish(Outcome::Unknown("no automorphisms supplied".into()), trace, assumptions, ctx));
    }
    let fpa = fpa_name(n, flavor);
    let mut unknown: Option<String> = None;
    for psi in psis {
        let fix = fix_of_psi(h, psi)?;
        let psi_name = psi.describe(h);
        let f = &fix.group;
        trace.extend(fix.trace.iter().cloned());
        let mut tf = Vec::new();
        match type_of(f, ctx, &mut tf)? {
            Outcome::No => {
                trace.extend(tf);
                trace.push(Rule::TheoremD.apply(format!(
                    "Fix ψ = {f} is not of type {} (ψ = {psi_name}, χ = 0): H × {a} does not have {fpa}",
                    flavor.property(n)
                )));
                let v = Verdict::new(Answer::No, trace, n, flavor).with_witness(Witness {
                    psi: Some(psi_name),
                    note: "trivial character".into(),
                    ..Witness::default()
                });
                return Ok(with_assumptions(v, assumptions));
            }
            Outcome::Unknown(r) => {
                unknown.get_or_insert(r);
                continue;
            }
            Outcome::Yes => {}
        }
        if a.free_rank() == 0 {
            continue;
        }
        let rm = restriction_matrix(h, &fix.embedding)?;
        let r_f = rm.rows();
        let basis = saturated_basis(&rm, r_f);
        let mut ts = Vec::new();
        let sc = span_complement(f, &basis, ctx, &mut ts)?;
        let Some(t) = sc.sample().map(<[BigInt]>::to_vec) else {
            match sc {
                SpanComplement::Unknown(r) => {
                    unknown.get_or_insert(r);
                }
                _ => trace.extend(ts),
            }
            continue;
        };
        trace.extend(ts);
        let c_f = basis.apply(&t)?;
        let Some(chi) = lift(&rm, &c_f)? else {
            return Err(FixError::Precondition("restricted class does not lift".into()));
        };
        let images_h = char_space(h)?.images;
        let on_gens = images_h.apply_left(&chi)?;
        let restricted_char = rm.apply(&chi)?;
        let cls_f = CharClass::from_vector(restricted_char.clone())?;
        let restricted = char_space(f)?.images.apply_left(&restricted_char)?;
        let words: Vec<String> = fix.embedding.words.iter().map(|w| h.show_word(w)).collect();
        let chi_s = fmt_vector(&on_gens);
        trace.push(Rule::Witness.apply(format!(
            "χ = {chi_s} on the generators of H restricts to {} ≠ 0 on Fix ψ = <{}>",
            fmt_vector(&restricted),
            words.join(", ")
        )));
        trace.push(Rule::KernelDiscrete.apply(format!(
            "[χ|Fix ψ] = {cls_f} lies outside {}(Fix ψ), so ker(χ|Fix ψ) is not of type {}",
            flavor.invariant(n),
            flavor.property(n)
        )));
        trace.push(Rule::TheoremD.apply(format!(
            "rk im χ = 1 ≤ rk A = {}: H × {a} does not have {fpa}",
            a.free_rank()
        )));
        let v = Verdict::new(Answer::No, trace, n, flavor).with_witness(Witness {
            psi: Some(psi_name),
            character: Some(on_gens),
            restricted: Some(restricted),
            class: Some(cls_f),
            words,
            note: format!("ker(χ|Fix ψ) is not of type {}", flavor.property(n)),
        });
        return Ok(with_assumptions(v, assumptions));
    }
    if let Some(r) = unknown {
        return Ok(finish(Outcome::Unknown(r), trace, assumptions, ctx));
    }
    if !exhaustive {
        return Ok(finish(
            Outcome::Unknown("no witness among the supplied automorphisms; the list is not declared exhaustive".into()),
            trace,
            assumptions,
            ctx,
        ));
    }
    trace.push(Rule::Assumption.apply("the supplied automorphisms exhaust the relevant classes in Out(H)"));
    assumptions.push("automorphism list exhaustive".into());
    if !h_fpa {
        assumptions.push(format!("H = {h} has {fpa}"));
    }
    trace.push(Rule::TheoremD.apply(format!("no restricted kernel fails: H × {a} has {fpa}")));
    Ok(finish(Outcome::Yes, trace, assumptions, ctx))
}

/// A primitive character `x` of `H` with `R x` a positive multiple of `c`.
fn lift(rm: &IntMatrix, c: &[BigInt]) -> Result<Option<Vec<BigInt>>, FixError> {
    let neg: Vec<BigInt> = c.iter().map(|x| -x).collect();
    let m = rm.hstack(&IntMatrix::column_vector(&neg))?;
    let k = kernel(&m);
    let r = rm.cols();
    for j in 0..k.cols() {
        let col = k.column(j);
        if col[r].is_zero() {
            continue;
        }
        let mut x = col[..r].to_vec();
        if col[r].is_negative() {
            x.iter_mut().for_each(|v| *v = -&*v);
        }
        return Ok(Some(primitive(x)));
    }
    Ok(None)
}

fn with_assumptions(mut v: Verdict, assumptions: Vec<String>) -> Verdict {
    v.assumptions.extend(assumptions);
    v
}

fn finish(out: Outcome, trace: Vec<RuleApplication>, assumptions: Vec<String>, ctx: Ctx) -> Verdict {
    with_assumptions(out.into_verdict(trace, ctx.n, ctx.flavor, ctx.cfg), assumptions)
}

/// Kernel criterion on abelianized data: `Fix φ̄` is `fix`, `θ = ε + ν`
/// is given by its values on the generators of `fix` in the free cover of
/// `Z = z`, and `γ` is the action on `Z`. Decides whether `ker θ`, the
/// subgroup of elements with `θ ∈ im(γ - Id)`, is of type `F_n`.
#[allow(clippy::too_many_arguments)]
pub fn theorem_c(
    fix: &GroupDesc,
    z: &FgAbelian,
    gamma: &IntMatrix,
    epsilon: &IntMatrix,
    nu: &IntMatrix,
    n: u32,
    flavor: Flavor,
    cfg: &Config,
) -> Result<Verdict, FixError> {
    if n == 0 {
        return Err(SigmaError::InvalidDegree.into());
    }
    let d = z.cover_dim();
    let g = fix.generator_count();
    for (name, m) in [("ε", epsilon), ("ν", nu)] {
        if m.rows() != d || m.cols() != g {
            return Err(FixError::InvalidTriple(format!(
                "{name} must be {d} x {g}, got {} x {}",
                m.rows(),
                m.cols()
            )));
        }
    }
    if gamma.rows() != d || gamma.cols() != d {
        return Err(FixError::InvalidTriple(format!("γ must be {d} x {d}")));
    }
    let theta = epsilon.add(nu)?;
    let moved = gamma.sub(&IntMatrix::identity(d))?;
    let j = Lattice::from_generators(d, moved.columns())?.sum(&crate::zlattice::relation_lattice(z))?;
    let basis = vanishing_on_preimage(fix, &theta, &j)?;
    let ctx = Ctx { n, flavor, cfg };
    let mut trace = vec![Rule::TheoremC.apply(format!(
        "θ = ε + ν is {theta} on the generators of Fix φ̄ = {fix}; ker θ has S(Fix φ̄, ker θ) of dimension {}",
        basis.cols()
    ))];
    let (out, cls) = above_commutator(fix, &basis, &[], ctx, &mut trace)?;
    let mut v = out.into_verdict(trace, n, flavor, cfg);
    if let Some(c) = cls {
        v.witness = Some(Witness {
            note: format!("{c} vanishes on ker θ and lies outside {}", flavor.invariant(n)),
            class: Some(c),
            ..Witness::default()
        });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprep::LabeledGraph;

    fn triangle() -> GroupDesc {
        GroupDesc::Artin(
            LabeledGraph::new(
                vec!["a".into(), "b".into(), "c".into()],
                vec![("a".into(), "b".into(), 4), ("b".into(), "c".into(), 3), ("c".into(), "a".into(), 3)],
            )
            .unwrap(),
        )
    }

    #[test]
    fn triangle_lacks_fgfpa() {
        let h = triangle();
        let v = fgfpa_witness_search(
            &h,
            &FgAbelian::free(1),
            &[PsiSpec::GraphAut(vec![1, 0, 2])],
            1,
            Flavor::Homotopical,
            false,
            &Config::default(),
        )
        .unwrap();
        assert_eq!(v.answer, Answer::No);
        let w = v.witness.unwrap();
        assert_eq!(w.character.unwrap(), vec![BigInt::from(1); 3]);
        assert_eq!(w.restricted.unwrap(), vec![BigInt::from(1), BigInt::from(4)]);
        let cites = v.trace.iter().map(|t| t.label().to_string()).collect::<Vec<_>>();
        for c in ["Living subgraph thm", "Thm 2.2(1)", "Jones–Vaskou", "Garside", "Thm D"] {
            assert!(cites.iter().any(|x| x == c), "{c} missing from {cites:?}");
        }
    }

    #[test]
    fn empty_list_is_unknown() {
        let v = fgfpa_witness_search(&triangle(), &FgAbelian::free(1), &[], 1, Flavor::Homotopical, true, &Config::default())
            .unwrap();
        assert_eq!(v.answer, Answer::Unknown);
    }

    #[test]
    fn identity_only_on_free_group() {
        let v = fgfpa_witness_search(
            &GroupDesc::free(2),
            &FgAbelian::free(1),
            &[PsiSpec::Identity],
            1,
            Flavor::Homotopical,
            false,
            &Config::default(),
        )
        .unwrap();
        assert_eq!(v.answer, Answer::No);
    }

    #[test]
    fn above_commutator_cases() {
        let cfg = Config::default();
        let h = triangle();
        let all = NData::Words(vec![Word::generator(0), Word::generator(1)]);
        let v = subgroup_above_commutator_type(&h, &all, 1, Flavor::Homotopical, &cfg).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        let comm = NData::CommonKernel(IntMatrix::from_i64(&[&[1]]));
        let v = subgroup_above_commutator_type(&h, &comm, 1, Flavor::Homotopical, &cfg).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        let f = GroupDesc::free(2);
        let v = subgroup_above_commutator_type(&f, &NData::CommonKernel(IntMatrix::from_i64(&[&[1, 1]])), 1, Flavor::Homotopical, &cfg)
            .unwrap();
        assert_eq!(v.answer, Answer::No);
    }

    #[test]
    fn necessary_check_inconclusive() {
        let cfg = Config::default();
        let z2 = GroupDesc::Abelian(FgAbelian::free(2));
        let v = fnfpa_necessary_check(&z2, &NData::CommonKernel(IntMatrix::from_i64(&[&[1, 0]])), 1, Flavor::Homotopical, &cfg)
            .unwrap();
        assert_eq!(v.answer, Answer::Unknown);
        let v = fnfpa_necessary_check(&triangle(), &NData::CommonKernel(IntMatrix::from_i64(&[&[1]])), 1, Flavor::Homotopical, &cfg)
            .unwrap();
        assert_eq!(v.answer, Answer::Unknown);
        assert!(v.reason.unwrap().starts_with("inconclusive"));
    }

    #[test]
    fn theorem_c_on_free_group() {
        // θ = (1,1) into Z with γ = Id: ker θ is not finitely generated
        let v = theorem_c(
            &GroupDesc::free(2),
            &FgAbelian::free(1),
            &IntMatrix::identity(1),
            &IntMatrix::from_i64(&[&[1, 0]]),
            &IntMatrix::from_i64(&[&[0, 1]]),
            1,
            Flavor::Homotopical,
            &Config::default(),
        )
        .unwrap();
        assert_eq!(v.answer, Answer::No);
        // γ = -Id: im(γ - Id) has finite index, ker θ has finite index
        let v = theorem_c(
            &GroupDesc::free(2),
            &FgAbelian::free(1),
            &IntMatrix::from_i64(&[&[-1]]),
            &IntMatrix::from_i64(&[&[1, 0]]),
            &IntMatrix::from_i64(&[&[0, 1]]),
            1,
            Flavor::Homotopical,
            &Config::default(),
        )
        .unwrap();
        assert_eq!(v.answer, Answer::Yes);
    }
}
