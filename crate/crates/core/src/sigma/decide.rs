use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::artin::{dihedral_member, is_connected_and_dominant, living_subgraph, sign_pattern, vertex_values};
use super::{
    Answer, Config, Described, Flavor, Rule, RuleApplication, Sigma1Description, SigmaError, Verdict,
};
use crate::charsphere::{restriction_matrix, CharClass};
use crate::grouprep::{center_info, char_space, evaluate_word, GroupDesc, LabeledGraph, TableGroup};
use crate::zlattice::{fmt_vector, kernel, rank, IntMatrix};

#[derive(Clone, Copy, Debug)]
pub(crate) struct Ctx<'a> {
    pub n: u32,
    pub flavor: Flavor,
    pub cfg: &'a Config,
}

impl Ctx<'_> {
    fn inv(&self) -> String {
        self.flavor.invariant(self.n)
    }

    fn prop(&self) -> String {
        self.flavor.property(self.n)
    }

    fn with_n(&self, n: u32) -> Self {
        Ctx { n, ..*self }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Yes,
    No,
    Unknown(String),
}

impl Outcome {
    pub fn answer(&self) -> Answer {
        match self {
            Outcome::Yes => Answer::Yes,
            Outcome::No => Answer::No,
            Outcome::Unknown(_) => Answer::Unknown,
        }
    }

    pub fn into_verdict(self, trace: Vec<RuleApplication>, n: u32, flavor: Flavor, cfg: &Config) -> Verdict {
        let mut v = match self {
            Outcome::Unknown(r) => Verdict::unknown(r, trace, n, flavor),
            o => Verdict::new(o.answer(), trace, n, flavor),
        };
        if cfg.assume_artin_conjecture && v.trace.iter().any(|t| t.rule_id == Rule::ArtinConjecture.id()) {
            v.assumptions
                .push("living subgraph criterion assumed outside circuit rank 1".into());
        }
        v
    }
}

fn b(x: i64) -> BigInt {
    BigInt::from(x)
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    match CharClass::from_vector(v.clone()) {
        Ok(c) => c.coords().to_vec(),
        Err(_) => v,
    }
}

fn classes_str(cs: &[CharClass]) -> String {
    cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn membership(g: &GroupDesc, cls: &CharClass, cfg: &Config) -> Result<Verdict, SigmaError> {
    membership_n(g, cls, 1, Flavor::Homotopical, cfg)
}

pub fn membership_n(
    g: &GroupDesc,
    cls: &CharClass,
    n: u32,
    flavor: Flavor,
    cfg: &Config,
) -> Result<Verdict, SigmaError> {
    if n == 0 {
        return Err(SigmaError::InvalidDegree);
    }
    check_class(g, cls)?;
    let ctx = Ctx { n, flavor, cfg };
    let mut trace = Vec::new();
    let out = member(g, cls, ctx, &mut trace)?;
    Ok(out.into_verdict(trace, n, flavor, cfg))
}

fn check_class(g: &GroupDesc, cls: &CharClass) -> Result<usize, SigmaError> {
    let r = char_space(g)?.rank;
    if cls.dim() != r {
        return Err(SigmaError::MismatchedGroups(format!(
            "class {cls} has {} coordinates but {g} has character rank {r}",
            cls.dim()
        )));
    }
    Ok(r)
}

pub(crate) fn member(
    g: &GroupDesc,
    c: &CharClass,
    ctx: Ctx,
    trace: &mut Vec<RuleApplication>,
) -> Result<Outcome, SigmaError> {
    match g {
        GroupDesc::Free { rank, .. } if *rank >= 2 => {
            trace.push(Rule::FreeEmpty.apply(format!("G = F{rank}, so {c} ∉ {}(G)", ctx.inv())));
            Ok(Outcome::No)
        }
        GroupDesc::Free { .. } | GroupDesc::Abelian(_) => {
            trace.push(Rule::Center.apply(format!("G = {g} is abelian, so Z(G) = G and χ(Z(G)) ≠ 0")));
            Ok(Outcome::Yes)
        }
        GroupDesc::Artin(graph) => artin_member(g, graph, c, ctx, trace),
        GroupDesc::DirectProduct(l, r) => product_member(g, l, r, c, ctx, trace),
        GroupDesc::FiniteIndexOver { inner, index_note } => {
            trace.push(Rule::FiniteIndex.apply(format!(
                "{inner} has finite index ({index_note}); decide {c} there"
            )));
            member(inner, c, ctx, trace)
        }
        GroupDesc::TableBacked(t) => table_member(g, t, c, ctx, trace),
    }
}

fn center_rule(
    g: &GroupDesc,
    c: &CharClass,
    trace: &mut Vec<RuleApplication>,
) -> Result<Option<Outcome>, SigmaError> {
    let Some(z) = center_info(g) else {
        return Ok(None);
    };
    let space = char_space(g)?;
    for w in &z.words {
        let img = evaluate_word(&space.images, w)?;
        let val: BigInt = img.iter().zip(c.coords()).map(|(x, y)| x * y).sum();
        if !val.is_zero() {
            trace.push(Rule::Center.apply(format!(
                "{} is central and χ({}) = {val} ≠ 0 for χ = {c}",
                g.show_word(w),
                g.show_word(w)
            )));
            return Ok(Some(Outcome::Yes));
        }
    }
    Ok(None)
}

fn monotone(
    g: &GroupDesc,
    c: &CharClass,
    ctx: Ctx,
    trace: &mut Vec<RuleApplication>,
) -> Result<Outcome, SigmaError> {
    let mut t1 = Vec::new();
    if member(g, c, ctx.with_n(1), &mut t1)? == Outcome::No {
        trace.extend(t1);
        trace.push(Rule::Monotone.apply(format!("{c} ∉ Σ^1(G), hence {c} ∉ {}(G)", ctx.inv())));
        return Ok(Outcome::No);
    }
    Ok(Outcome::Unknown(format!(
        "no rule decides {}(G) for G = {g} beyond Σ^1",
        ctx.inv()
    )))
}

fn artin_member(
    g: &GroupDesc,
    graph: &LabeledGraph,
    c: &CharClass,
    ctx: Ctx,
    trace: &mut Vec<RuleApplication>,
) -> Result<Outcome, SigmaError> {
    let vals = vertex_values(graph, c)?;
    let nv = graph.vertex_count();
    if graph.edges().is_empty() && nv >= 2 {
        trace.push(Rule::FreeEmpty.apply(format!("edgeless graph, A_Γ = F{nv}, so {c} ∉ {}(G)", ctx.inv())));
        return Ok(Outcome::No);
    }
    if ctx.n == 1 && nv == 2 && graph.edges()[0].label >= 3 {
        let e = graph.edges()[0];
        let inside = dihedral_member(e.label, &vals[e.u], &vals[e.v]);
        trace.push(Rule::Dihedral.apply(format!(
            "m = {}, χ({}) = {}, χ({}) = {}: {c} {} Σ^1",
            e.label,
            graph.vertices()[e.u],
            vals[e.u],
            graph.vertices()[e.v],
            vals[e.v],
            if inside { "∈" } else { "∉" }
        )));
        return Ok(if inside { Outcome::Yes } else { Outcome::No });
    }
    if let Some(o) = center_rule(g, c, trace)? {
        return Ok(o);
    }
    if ctx.n == 1 {
        let proven = graph.is_connected() && graph.circuit_rank() == 1;
        if proven || ctx.cfg.assume_artin_conjecture {
            let rule = if proven { Rule::LivingSubgraph } else { Rule::ArtinConjecture };
            let l = living_subgraph(graph, &vals)?;
            let ok = is_connected_and_dominant(&l, graph);
            trace.push(rule.apply(format!(
                "χ on vertices {} (signs {}): L(χ) has vertices {{{}}} and {} edges, {}",
                fmt_vector(&vals),
                sign_pattern(&vals),
                l.vertices().join(","),
                l.edges().len(),
                if ok { "connected and dominant" } else { "not connected and dominant" }
            )));
            return Ok(if ok { Outcome::Yes } else { Outcome::No });
        }
        return Ok(Outcome::Unknown(format!(
            "no Σ^1 rule covers this Artin graph (circuit rank {}, {} components)",
            graph.circuit_rank(),
            graph.components().len()
        )));
    }
    monotone(g, c, ctx, trace)
}

fn product_member(
    g: &GroupDesc,
    l: &GroupDesc,
    r: &GroupDesc,
    c: &CharClass,
    ctx: Ctx,
    trace: &mut Vec<RuleApplication>,
) -> Result<Outcome, SigmaError> {
    if ctx.n >= 2 {
        if let Some(o) = center_rule(g, c, trace)? {
            return Ok(o);
        }
        return monotone(g, c, ctx, trace);
    }
    let r1 = char_space(l)?.rank;
    let (c1, c2) = c.coords().split_at(r1);
    let z1 = c1.iter().all(Zero::is_zero);
    let z2 = c2.iter().all(Zero::is_zero);
    match (z1, z2) {
        (false, false) => {
            trace.push(Rule::ProductFormula.apply(format!(
                "third branch: χ|G1 = {} ≠ 0 and χ|G2 = {} ≠ 0",
                fmt_vector(c1),
                fmt_vector(c2)
            )));
            Ok(Outcome::Yes)
        }
        (false, true) => {
            let c1 = CharClass::from_vector(c1.to_vec())?;
            trace.push(Rule::ProductFormula.apply(format!(
                "χ|G2 = 0, only the first branch can hold: decide {c1} on G1 = {l}"
            )));
            member(l, &c1, ctx, trace)
        }
        (true, false) => {
            let c2 = CharClass::from_vector(c2.to_vec())?;
            trace.push(Rule::ProductFormula.apply(format!(
                "χ|G1 = 0, only the second branch can hold: decide {c2} on G2 = {r}"
            )));
            member(r, &c2, ctx, trace)
        }
        (true, true) => unreachable!("classes are nonzero"),
    }
}

fn table_member(
    g: &GroupDesc,
    t: &TableGroup,
    c: &CharClass,
    ctx: Ctx,
    trace: &mut Vec<RuleApplication>,
) -> Result<Outcome, SigmaError> {
    if ctx.n == 1 {
        if let Some(list) = &t.sigma1_complement {
            let out = list.contains(c);
            trace.push(Rule::Table.apply(format!(
                "{}: Σ^1 complement = {{{}}} ({}); {c} {} Σ^1",
                t.name,
                classes_str(list),
                t.provenance,
                if out { "∉" } else { "∈" }
            )));
            return Ok(if out { Outcome::No } else { Outcome::Yes });
        }
    }
    if let Some(emb) = &t.finite_index_subgroup {
        let rm = restriction_matrix(g, emb)?;
        let rc = rm.apply(c.coords())?;
        let Ok(cr) = CharClass::from_vector(rc) else {
            return Ok(Outcome::Unknown(format!(
                "{c} vanishes on the declared finite-index subgroup, which is impossible for finite index"
            )));
        };
        trace.push(Rule::FiniteIndex.apply(format!(
            "N = {} has finite index in {}; {c} restricts to {cr}",
            emb.sub, t.name
        )));
        return member(&emb.sub, &cr, ctx, trace);
    }
    if let Some(o) = center_rule(g, c, trace)? {
        return Ok(o);
    }
    if ctx.n >= 2 {
        return monotone(g, c, ctx, trace);
    }
    Ok(Outcome::Unknown(format!("no table entry or rule decides Σ^1({})", t.name)))
}

pub fn sigma1(g: &GroupDesc, cfg: &Config) -> Result<Described, SigmaError> {
    sigma_n(g, 1, Flavor::Homotopical, cfg)
}

pub fn sigma_n(g: &GroupDesc, n: u32, flavor: Flavor, cfg: &Config) -> Result<Described, SigmaError> {
    if n == 0 {
        return Err(SigmaError::InvalidDegree);
    }
    let ctx = Ctx { n, flavor, cfg };
    let mut trace = Vec::new();
    let description = describe(g, ctx, &mut trace)?;
    Ok(Described {
        description,
        trace,
        rank: char_space(g)?.rank,
        n,
        flavor,
    })
}

fn from_complement(mut list: Vec<CharClass>, rank: usize) -> Sigma1Description {
    list.sort();
    list.dedup();
    if list.is_empty() {
        Sigma1Description::WholeSphere
    } else if rank == 1 && list.len() == 2 {
        Sigma1Description::EmptySet
    } else {
        Sigma1Description::SphereMinusFiniteSet(list)
    }
}

fn center_covers(g: &GroupDesc, trace: &mut Vec<RuleApplication>) -> Result<bool, SigmaError> {
    let Some(z) = center_info(g) else {
        return Ok(false);
    };
    let space = char_space(g)?;
    if z.words.is_empty() {
        return Ok(false);
    }
    let cols: Vec<Vec<BigInt>> = z
        .words
        .iter()
        .map(|w| evaluate_word(&space.images, w))
        .collect::<Result<_, _>>()?;
    let m = IntMatrix::from_columns(&cols, space.rank)?;
    if rank(&m) == space.rank {
        let words: Vec<String> = z.words.iter().map(|w| g.show_word(w)).collect();
        trace.push(Rule::Center.apply(format!(
            "Z(G) ⊇ <{}> has full rank in G_ab ⊗ Q, so χ(Z(G)) ≠ 0 for every χ ≠ 0",
            words.join(", ")
        )));
        return Ok(true);
    }
    Ok(false)
}

pub(crate) fn describe(
    g: &GroupDesc,
    ctx: Ctx,
    trace: &mut Vec<RuleApplication>,
) -> Result<Sigma1Description, SigmaError> {
    let space = char_space(g)?;
    if space.rank == 0 {
        trace.push(Rule::SphereEmpty.apply(format!("{g} has finite abelianization")));
        return Ok(Sigma1Description::EmptySet);
    }
    match g {
        GroupDesc::Free { rank, .. } if *rank >= 2 => {
            trace.push(Rule::FreeEmpty.apply(format!("G = F{rank}")));
            Ok(Sigma1Description::EmptySet)
        }
        GroupDesc::Free { .. } | GroupDesc::Abelian(_) => {
            trace.push(Rule::Center.apply(format!("G = {g} is abelian, so Z(G) = G")));
            Ok(Sigma1Description::WholeSphere)
        }
        GroupDesc::Artin(graph) => artin_describe(g, graph, space.rank, ctx, trace),
        GroupDesc::DirectProduct(..) => {
            if ctx.n >= 2 {
                if center_covers(g, trace)? {
                    return Ok(Sigma1Description::WholeSphere);
                }
                return Ok(Sigma1Description::Unknown(format!(
                    "no rule describes {} of a direct product beyond Σ^1",
                    ctx.inv()
                )));
            }
            let id = IntMatrix::identity(space.rank);
            Ok(match span_complement(g, &id, ctx, trace)? {
                SpanComplement::Exact(list) => from_complement(classes_of(&list), space.rank),
                SpanComplement::NonEmpty(sample) => Sigma1Description::Unknown(format!(
                    "the complement is infinite (it contains [{}]); classes are decided pointwise",
                    fmt_vector(&sample)
                )),
                SpanComplement::Unknown(r) => Sigma1Description::Unknown(r),
            })
        }
        GroupDesc::FiniteIndexOver { inner, index_note } => {
            trace.push(Rule::FiniteIndex.apply(format!(
                "{inner} has finite index ({index_note}); classes are read on it"
            )));
            describe(inner, ctx, trace)
        }
        GroupDesc::TableBacked(t) => {
            if ctx.n == 1 {
                if let Some(list) = &t.sigma1_complement {
                    trace.push(Rule::Table.apply(format!(
                        "{}: Σ^1 complement = {{{}}} ({})",
                        t.name,
                        classes_str(list),
                        t.provenance
                    )));
                    return Ok(from_complement(list.clone(), space.rank));
                }
            }
            if let Some(emb) = &t.finite_index_subgroup {
                let rm = restriction_matrix(g, emb)?;
                trace.push(Rule::FiniteIndex.apply(format!(
                    "N = {} has finite index in {}; restriction {}",
                    emb.sub, t.name, rm
                )));
                return Ok(match span_complement(&emb.sub, &rm, ctx, trace)? {
                    SpanComplement::Exact(list) => from_complement(classes_of(&list), space.rank),
                    SpanComplement::NonEmpty(sample) => Sigma1Description::Unknown(format!(
                        "the complement is infinite (it contains [{}])",
                        fmt_vector(&sample)
                    )),
                    SpanComplement::Unknown(r) => Sigma1Description::Unknown(r),
                });
            }
            if center_covers(g, trace)? {
                return Ok(Sigma1Description::WholeSphere);
            }
            Ok(Sigma1Description::Unknown(format!(
                "no table entry or rule describes {}({})",
                ctx.inv(),
                t.name
            )))
        }
    }
}

fn classes_of(list: &[Vec<BigInt>]) -> Vec<CharClass> {
    list.iter()
        .filter_map(|v| CharClass::from_vector(v.clone()).ok())
        .collect()
}

fn artin_describe(
    g: &GroupDesc,
    graph: &LabeledGraph,
    r: usize,
    ctx: Ctx,
    trace: &mut Vec<RuleApplication>,
) -> Result<Sigma1Description, SigmaError> {
    let nv = graph.vertex_count();
    if graph.edges().is_empty() && nv >= 2 {
        trace.push(Rule::FreeEmpty.apply(format!("edgeless graph, A_Γ = F{nv}")));
        return Ok(Sigma1Description::EmptySet);
    }
    if ctx.n == 1 && nv == 2 && graph.edges()[0].label >= 3 {
        let m = graph.edges()[0].label;
        if m % 2 == 0 {
            let out = vec![CharClass::from_i64(&[1, -1])?, CharClass::from_i64(&[-1, 1])?];
            trace.push(Rule::Dihedral.apply(format!("m = {m} even: S(A_e) = S^1, two classes removed")));
            return Ok(Sigma1Description::SphereMinusFiniteSet(out));
        }
        trace.push(Rule::Dihedral.apply(format!("m = {m} odd: Σ^1 = S(A_e) = {{±1}}")));
        return Ok(Sigma1Description::WholeSphere);
    }
    if center_covers(g, trace)? {
        return Ok(Sigma1Description::WholeSphere);
    }
    if ctx.n == 1 {
        let proven = graph.is_connected() && graph.circuit_rank() == 1;
        if proven || ctx.cfg.assume_artin_conjecture {
            let rule = if proven { Rule::LivingSubgraph } else { Rule::ArtinConjecture };
            if r == 1 {
                let mut out = Vec::new();
                let mut notes = Vec::new();
                for s in [1i64, -1] {
                    let c = CharClass::from_i64(&[s])?;
                    let vals = vertex_values(graph, &c)?;
                    let l = living_subgraph(graph, &vals)?;
                    let ok = is_connected_and_dominant(&l, graph);
                    notes.push(format!(
                        "χ = {} on vertices: L(χ) {}",
                        fmt_vector(&vals),
                        if ok { "connected and dominant" } else { "fails" }
                    ));
                    if !ok {
                        out.push(c);
                    }
                }
                trace.push(rule.apply(notes.join("; ")));
                return Ok(from_complement(out, r));
            }
            trace.push(rule.apply("membership is decided by the living subgraph of each class"));
            return Ok(Sigma1Description::ByPredicate(graph.clone()));
        }
    }
    Ok(Sigma1Description::Unknown(format!(
        "no rule describes {}(A_Γ) for this graph (circuit rank {}, {} components)",
        ctx.inv(),
        graph.circuit_rank(),
        graph.components().len()
    )))
}

/// The part of `Σ^n(G)^c` inside the rational span of the columns of a
/// basis `B` (`r x w`, independent columns), in coordinates `t` with
/// `χ = B t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpanComplement {
    /// Exactly these primitive `t` (possibly none).
    Exact(Vec<Vec<BigInt>>),
    /// Nonempty, not enumerated; one sample `t`.
    NonEmpty(Vec<BigInt>),
    Unknown(String),
}

impl SpanComplement {
    pub fn is_empty(&self) -> Option<bool> {
        match self {
            SpanComplement::Exact(l) => Some(l.is_empty()),
            SpanComplement::NonEmpty(_) => Some(false),
            SpanComplement::Unknown(_) => None,
        }
    }

    /// A sample element, if nonempty.
    pub fn sample(&self) -> Option<&[BigInt]> {
        match self {
            SpanComplement::Exact(l) => l.first().map(Vec::as_slice),
            SpanComplement::NonEmpty(s) => Some(s),
            SpanComplement::Unknown(_) => None,
        }
    }
}

pub fn complement_in_span(
    g: &GroupDesc,
    basis: &IntMatrix,
    n: u32,
    flavor: Flavor,
    cfg: &Config,
    trace: &mut Vec<RuleApplication>,
) -> Result<SpanComplement, SigmaError> {
    if n == 0 {
        return Err(SigmaError::InvalidDegree);
    }
    span_complement(g, basis, Ctx { n, flavor, cfg }, trace)
}

pub(crate) fn span_complement(
    g: &GroupDesc,
    basis: &IntMatrix,
    ctx: Ctx,
    trace: &mut Vec<RuleApplication>,
) -> Result<SpanComplement, SigmaError> {
    let r = char_space(g)?.rank;
    if basis.rows() != r {
        return Err(SigmaError::MismatchedGroups(format!(
            "span basis has {} rows, {g} has character rank {r}",
            basis.rows()
        )));
    }
    let w = basis.cols();
    if w == 0 {
        return Ok(SpanComplement::Exact(vec![]));
    }
    match g {
        GroupDesc::DirectProduct(l, rt) if ctx.n == 1 => {
            let r1 = char_space(l)?.rank;
            let b1 = basis.select_rows(0..r1);
            let b2 = basis.select_rows(r1..r);
            let vanishes_somewhere = |other: &IntMatrix| other.rows() == 0 || kernel(other).cols() > 0;
            let note = if !vanishes_somewhere(&b1) && !vanishes_somewhere(&b2) {
                format!(
                    "third branch on a span of dimension {w}: every class is nonzero on both factors, \
                     so all of them lie in Σ^1"
                )
            } else {
                format!(
                    "on a span of dimension {w}: the complement consists of classes vanishing on one factor \
                     whose restriction to the other factor lies outside its Σ^1"
                )
            };
            trace.push(Rule::ProductFormula.apply(note));
            let p1 = product_part(&b2, &b1, l, ctx, trace)?;
            let p2 = product_part(&b1, &b2, rt, ctx, trace)?;
            Ok(combine(p1, p2))
        }
        GroupDesc::FiniteIndexOver { inner, index_note } => {
            trace.push(Rule::FiniteIndex.apply(format!(
                "{inner} has finite index ({index_note}); classes are read on it"
            )));
            span_complement(inner, basis, ctx, trace)
        }
        GroupDesc::TableBacked(t)
            if t.finite_index_subgroup.is_some() && !(ctx.n == 1 && t.sigma1_complement.is_some()) =>
        {
            let emb = t.finite_index_subgroup.as_ref().expect("checked");
            let rm = restriction_matrix(g, emb)?;
            trace.push(Rule::FiniteIndex.apply(format!(
                "N = {} has finite index in {}; pull classes back along restriction {}",
                emb.sub, t.name, rm
            )));
            let moved = rm.mul(basis)?;
            span_complement(&emb.sub, &moved, ctx, trace)
        }
        _ => pull_back(g, basis, r, ctx, trace),
    }
}

fn product_part(
    other: &IntMatrix,
    this: &IntMatrix,
    factor: &GroupDesc,
    ctx: Ctx,
    trace: &mut Vec<RuleApplication>,
) -> Result<SpanComplement, SigmaError> {
    let w = other.cols();
    let k = if other.rows() == 0 { IntMatrix::identity(w) } else { kernel(other) };
    if k.cols() == 0 {
        return Ok(SpanComplement::Exact(vec![]));
    }
    let sub = span_complement(factor, &this.mul(&k)?, ctx, trace)?;
    let lift = |s: &[BigInt]| -> Result<Vec<BigInt>, SigmaError> { Ok(primitive(k.apply(s)?)) };
    Ok(match sub {
        SpanComplement::Exact(list) => {
            SpanComplement::Exact(list.iter().map(|s| lift(s)).collect::<Result<_, _>>()?)
        }
        SpanComplement::NonEmpty(s) => SpanComplement::NonEmpty(lift(&s)?),
        u => u,
    })
}

fn combine(a: SpanComplement, b: SpanComplement) -> SpanComplement {
    match (a, b) {
        (SpanComplement::Exact(mut x), SpanComplement::Exact(y)) => {
            for v in y {
                if !x.contains(&v) {
                    x.push(v);
                }
            }
            x.sort();
            SpanComplement::Exact(x)
        }
        (SpanComplement::NonEmpty(s), _) | (_, SpanComplement::NonEmpty(s)) => SpanComplement::NonEmpty(s),
        (SpanComplement::Exact(x), SpanComplement::Unknown(r)) | (SpanComplement::Unknown(r), SpanComplement::Exact(x)) => {
            match x.into_iter().next() {
                Some(s) => SpanComplement::NonEmpty(s),
                None => SpanComplement::Unknown(r),
            }
        }
        (SpanComplement::Unknown(r), SpanComplement::Unknown(_)) => SpanComplement::Unknown(r),
    }
}

/// `t` with `B t` a positive multiple of `c`, if `c` lies in the span.
fn pull_class(basis: &IntMatrix, c: &CharClass) -> Result<Option<Vec<BigInt>>, SigmaError> {
    let neg: Vec<BigInt> = c.coords().iter().map(|x| -x).collect();
    let m = basis.hstack(&IntMatrix::column_vector(&neg))?;
    let k = kernel(&m);
    let w = basis.cols();
    for j in 0..k.cols() {
        let col = k.column(j);
        if col[w].is_zero() {
            continue;
        }
        let mut t = col[..w].to_vec();
        if col[w].is_negative() {
            t.iter_mut().for_each(|x| *x = -&*x);
        }
        return Ok(Some(primitive(t)));
    }
    Ok(None)
}

fn pull_back(
    g: &GroupDesc,
    basis: &IntMatrix,
    r: usize,
    ctx: Ctx,
    trace: &mut Vec<RuleApplication>,
) -> Result<SpanComplement, SigmaError> {
    let w = basis.cols();
    let mut t = Vec::new();
    let d = describe(g, ctx, &mut t)?;
    if let Some(list) = d.finite_complement(r) {
        trace.extend(t);
        let mut out = Vec::new();
        for c in &list {
            if let Some(v) = pull_class(basis, c)? {
                out.push(v);
            }
        }
        out.sort();
        return Ok(SpanComplement::Exact(out));
    }
    match d {
        Sigma1Description::EmptySet => {
            trace.extend(t);
            if w == 1 {
                return Ok(SpanComplement::Exact(vec![vec![b(1)], vec![b(-1)]]));
            }
            let mut e1 = vec![b(0); w];
            e1[0] = b(1);
            Ok(SpanComplement::NonEmpty(e1))
        }
        Sigma1Description::FiniteSet(inside) => {
            trace.extend(t);
            let mut candidates = Vec::new();
            for i in 0..w {
                for s in [1i64, -1] {
                    let mut v = vec![b(0); w];
                    v[i] = b(s);
                    candidates.push(v);
                }
            }
            let mut outside = Vec::new();
            for v in candidates {
                let img = CharClass::from_vector(basis.apply(&v)?)?;
                if !inside.contains(&img) {
                    outside.push(v);
                }
            }
            if w == 1 {
                return Ok(SpanComplement::Exact(outside));
            }
            Ok(match outside.into_iter().next() {
                Some(v) => SpanComplement::NonEmpty(v),
                None => SpanComplement::Unknown("finite Σ^1 covers every sampled class".into()),
            })
        }
        other if w == 1 => {
            // decide the two classes of the line pointwise
            let mut out = Vec::new();
            let mut local = Vec::new();
            for s in [1i64, -1] {
                let c = CharClass::from_vector(basis.column(0).iter().map(|x| x * b(s)).collect())?;
                match member(g, &c, ctx, &mut local)? {
                    Outcome::No => out.push(vec![b(s)]),
                    Outcome::Yes => {}
                    Outcome::Unknown(reason) => {
                        return Ok(SpanComplement::Unknown(match other {
                            Sigma1Description::Unknown(r) => format!("{r}; {reason}"),
                            _ => reason,
                        }))
                    }
                }
            }
            trace.extend(local);
            Ok(SpanComplement::Exact(out))
        }
        Sigma1Description::ByPredicate(_) => Ok(SpanComplement::Unknown(format!(
            "living subgraph description over a span of dimension {w} is not enumerated"
        ))),
        Sigma1Description::Unknown(r) => Ok(SpanComplement::Unknown(r)),
        _ => unreachable!("finite complements handled above"),
    }
}

/// Thm 2.2(2) for a discrete class: `ker χ` is of type `F_n` iff both `χ`
/// and `-χ` lie in `Σ^n`.
pub fn kernel_type(
    g: &GroupDesc,
    cls: &CharClass,
    n: u32,
    flavor: Flavor,
    cfg: &Config,
) -> Result<Verdict, SigmaError> {
    if n == 0 {
        return Err(SigmaError::InvalidDegree);
    }
    check_class(g, cls)?;
    let ctx = Ctx { n, flavor, cfg };
    let mut trace = Vec::new();
    let mut assumptions = Vec::new();
    let out = kernel_type_into(g, cls, ctx, &mut trace, &mut assumptions)?;
    let mut v = out.into_verdict(trace, n, flavor, cfg);
    v.assumptions.extend(assumptions);
    Ok(v)
}

pub(crate) fn kernel_type_into(
    g: &GroupDesc,
    c: &CharClass,
    ctx: Ctx,
    trace: &mut Vec<RuleApplication>,
    assumptions: &mut Vec<String>,
) -> Result<Outcome, SigmaError> {
    let mut tt = Vec::new();
    match type_of(g, ctx, &mut tt)? {
        Outcome::Yes => {}
        Outcome::No => {
            trace.extend(tt);
            return Ok(Outcome::Unknown(format!(
                "{g} is not of type {}, which the kernel criterion needs",
                ctx.prop()
            )));
        }
        Outcome::Unknown(_) => assumptions.push(format!("{g} assumed of type {}", ctx.prop())),
    }
    let plus = member(g, c, ctx, trace)?;
    if plus == Outcome::No {
        trace.push(Rule::KernelDiscrete.apply(format!(
            "{c} ∉ {}(G), so ker χ is not of type {}",
            ctx.inv(),
            ctx.prop()
        )));
        return Ok(Outcome::No);
    }
    let neg = c.neg();
    let minus = member(g, &neg, ctx, trace)?;
    Ok(match (plus, minus) {
        (_, Outcome::No) => {
            trace.push(Rule::KernelDiscrete.apply(format!(
                "{neg} ∉ {}(G), so ker χ is not of type {}",
                ctx.inv(),
                ctx.prop()
            )));
            Outcome::No
        }
        (Outcome::Yes, Outcome::Yes) => {
            trace.push(Rule::KernelDiscrete.apply(format!(
                "{{{c}, {neg}}} ⊂ {}(G), so ker χ is of type {}",
                ctx.inv(),
                ctx.prop()
            )));
            Outcome::Yes
        }
        (Outcome::Unknown(r), _) | (_, Outcome::Unknown(r)) => Outcome::Unknown(r),
        _ => unreachable!(),
    })
}

pub fn group_type(g: &GroupDesc, n: u32, flavor: Flavor, cfg: &Config) -> Result<Verdict, SigmaError> {
    if n == 0 {
        return Err(SigmaError::InvalidDegree);
    }
    let ctx = Ctx { n, flavor, cfg };
    let mut trace = Vec::new();
    let out = type_of(g, ctx, &mut trace)?;
    Ok(out.into_verdict(trace, n, flavor, cfg))
}

pub(crate) fn type_of(g: &GroupDesc, ctx: Ctx, trace: &mut Vec<RuleApplication>) -> Result<Outcome, SigmaError> {
    let prop = ctx.prop();
    if ctx.n == 0 {
        return Ok(Outcome::Yes);
    }
    match g {
        GroupDesc::Free { .. } | GroupDesc::Abelian(_) => {
            trace.push(Rule::TypeFreeAbelian.apply(format!("{g} is of type {prop}")));
            Ok(Outcome::Yes)
        }
        GroupDesc::Artin(graph) => {
            if graph.edges().is_empty() {
                trace.push(Rule::TypeFreeAbelian.apply(format!("edgeless graph: A_Γ is free, of type {prop}")));
                return Ok(Outcome::Yes);
            }
            if graph.is_complete() && graph.edges().iter().all(|e| e.label == 2) {
                trace.push(Rule::TypeFreeAbelian.apply(format!("complete graph labelled 2: A_Γ is free abelian")));
                return Ok(Outcome::Yes);
            }
            if ctx.n <= 2 {
                trace.push(Rule::TypeFinitePresentation.apply(format!("A_Γ is finitely presented, so of type {prop}")));
                return Ok(Outcome::Yes);
            }
            Ok(Outcome::Unknown(format!("no rule gives type {prop} for this Artin group")))
        }
        GroupDesc::DirectProduct(l, r) => {
            let mut tl = Vec::new();
            let mut tr = Vec::new();
            let ol = type_of(l, ctx, &mut tl)?;
            let or = type_of(r, ctx, &mut tr)?;
            match (&ol, &or) {
                (Outcome::Yes, Outcome::Yes) => {
                    trace.extend(tl);
                    trace.extend(tr);
                    trace.push(Rule::TypeProduct.apply(format!("1 → G1 → G1×G2 → G2 → 1 with both factors {prop}")));
                    Ok(Outcome::Yes)
                }
                (Outcome::No, _) | (_, Outcome::No) => {
                    let (bad, good, tbad) = if ol == Outcome::No { (l, r, tl) } else { (r, l, tr) };
                    let mut tg = Vec::new();
                    if type_of(good, ctx.with_n(ctx.n - 1), &mut tg)? == Outcome::Yes {
                        trace.extend(tbad);
                        trace.extend(tg);
                        trace.push(Rule::TypeProductQuotient.apply(format!(
                            "{good} is of type {}; if G1×G2 were {prop} then so would be {bad}",
                            ctx.flavor.property(ctx.n - 1)
                        )));
                        return Ok(Outcome::No);
                    }
                    Ok(Outcome::Unknown(format!("a factor fails {prop} but the other factor's type is unknown")))
                }
                (Outcome::Unknown(x), _) | (_, Outcome::Unknown(x)) => Ok(Outcome::Unknown(x.clone())),
            }
        }
        GroupDesc::FiniteIndexOver { inner, index_note } => {
            let o = type_of(inner, ctx, trace)?;
            if !matches!(o, Outcome::Unknown(_)) {
                trace.push(Rule::TypeFiniteIndex.apply(format!("{inner} has finite index ({index_note})")));
            }
            Ok(o)
        }
        GroupDesc::TableBacked(t) => {
            if let Some(f) = t.finiteness {
                if f.covers(ctx.n) {
                    trace.push(Rule::TypeTable.apply(format!("{} is of type {prop} ({})", t.name, t.provenance)));
                    return Ok(Outcome::Yes);
                }
            }
            if let Some(emb) = &t.finite_index_subgroup {
                let o = type_of(&emb.sub, ctx, trace)?;
                if !matches!(o, Outcome::Unknown(_)) {
                    trace.push(Rule::TypeFiniteIndex.apply(format!("{} has finite index in {}", emb.sub, t.name)));
                }
                return Ok(o);
            }
            Ok(Outcome::Unknown(format!("no finiteness data for {}", t.name)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprep::LabeledGraph;
    use crate::zlattice::FgAbelian;

    fn cfg() -> Config {
        Config::default()
    }

    fn artin(vs: &[&str], es: &[(&str, &str, u32)]) -> GroupDesc {
        GroupDesc::Artin(
            LabeledGraph::new(
                vs.iter().map(|s| s.to_string()).collect(),
                es.iter().map(|(a, b, m)| (a.to_string(), b.to_string(), *m)).collect(),
            )
            .unwrap(),
        )
    }

    fn cls(v: &[i64]) -> CharClass {
        CharClass::from_i64(v).unwrap()
    }

    #[test]
    fn basic_descriptions() {
        let f2 = sigma1(&GroupDesc::free(2), &cfg()).unwrap();
        assert_eq!(f2.description, Sigma1Description::EmptySet);
        assert_eq!(f2.trace[0].label(), "Thm 2.2(5)");
        let z2 = sigma1(&GroupDesc::Abelian(FgAbelian::free(2)), &cfg()).unwrap();
        assert_eq!(z2.description, Sigma1Description::WholeSphere);
        let d4 = sigma1(&artin(&["a", "b"], &[("a", "b", 4)]), &cfg()).unwrap();
        assert_eq!(
            d4.description,
            Sigma1Description::SphereMinusFiniteSet(vec![cls(&[1, -1]), cls(&[-1, 1])])
        );
        let tri = artin(&["a", "b", "c"], &[("a", "b", 4), ("b", "c", 3), ("c", "a", 3)]);
        assert_eq!(sigma1(&tri, &cfg()).unwrap().description, Sigma1Description::WholeSphere);
        assert!(!sigma_n(&tri, 2, Flavor::Homotopical, &cfg()).unwrap().description.is_known());
        assert_eq!(
            sigma_n(&GroupDesc::free(2), 3, Flavor::Homotopical, &cfg()).unwrap().description,
            Sigma1Description::EmptySet
        );
        assert_eq!(
            sigma_n(&GroupDesc::Abelian(FgAbelian::free(3)), 5, Flavor::Homological, &cfg())
                .unwrap()
                .description,
            Sigma1Description::WholeSphere
        );
    }

    #[test]
    fn product_membership() {
        let g = GroupDesc::product(GroupDesc::free(2), GroupDesc::free(2));
        let yes = membership(&g, &cls(&[1, 0, 0, 1]), &cfg()).unwrap();
        assert_eq!(yes.answer, Answer::Yes);
        let no = membership(&g, &cls(&[1, 2, 0, 0]), &cfg()).unwrap();
        assert_eq!(no.answer, Answer::No);
        assert_eq!(no.citations(), vec!["Thm 6.1", "Thm 2.2(5)"]);
        assert!(!sigma1(&g, &cfg()).unwrap().description.is_known());
    }

    #[test]
    fn product_description_with_finite_complements() {
        let d4 = artin(&["a", "b"], &[("a", "b", 4)]);
        let g = GroupDesc::product(d4, GroupDesc::Abelian(FgAbelian::free(1)));
        let d = sigma1(&g, &cfg()).unwrap();
        assert_eq!(
            d.description,
            Sigma1Description::SphereMinusFiniteSet(vec![cls(&[-1, 1, 0]), cls(&[1, -1, 0])])
        );
    }

    #[test]
    fn span_pullback() {
        let mut trace = Vec::new();
        let g = GroupDesc::product(GroupDesc::free(2), GroupDesc::free(2));
        // diagonal characters (u, v, u, v) avoid the complement
        let diag = IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[1, 0], &[0, 1]]);
        let out = complement_in_span(&g, &diag, 1, Flavor::Homotopical, &cfg(), &mut trace).unwrap();
        assert_eq!(out, SpanComplement::Exact(vec![]));
        let first = IntMatrix::from_i64(&[&[1], &[1], &[0], &[0]]);
        let out = complement_in_span(&g, &first, 1, Flavor::Homotopical, &cfg(), &mut trace).unwrap();
        assert_eq!(out.is_empty(), Some(false));
    }

    #[test]
    fn kernel_types() {
        let f2 = GroupDesc::free(2);
        let v = kernel_type(&f2, &cls(&[1, 1]), 1, Flavor::Homotopical, &cfg()).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.citations(), vec!["Thm 2.2(5)", "Thm 2.2(2)"]);
        let z2 = GroupDesc::Abelian(FgAbelian::free(2));
        assert_eq!(
            kernel_type(&z2, &cls(&[3, 1]), 4, Flavor::Homotopical, &cfg()).unwrap().answer,
            Answer::Yes
        );
        let d4 = artin(&["a", "b"], &[("a", "b", 4)]);
        assert_eq!(
            kernel_type(&d4, &cls(&[1, -1]), 1, Flavor::Homotopical, &cfg()).unwrap().answer,
            Answer::No
        );
        assert_eq!(
            kernel_type(&d4, &cls(&[1, 0]), 1, Flavor::Homotopical, &cfg()).unwrap().answer,
            Answer::Yes
        );
    }

    #[test]
    fn conjecture_flag_taints() {
        let g = artin(
            &["a", "b", "c", "d"],
            &[("a", "b", 4), ("b", "c", 4), ("c", "d", 4), ("d", "a", 4), ("a", "c", 4)],
        );
        let c = cls(&[1, 1, 1, 1]);
        let plain = membership(&g, &c, &cfg()).unwrap();
        assert_eq!(plain.answer, Answer::Unknown);
        let flagged = Config {
            assume_artin_conjecture: true,
            ..cfg()
        };
        let v = membership(&g, &c, &flagged).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert_eq!(v.assumptions.len(), 1);
    }

    #[test]
    fn group_types() {
        let g = GroupDesc::product(GroupDesc::free(2), GroupDesc::Abelian(FgAbelian::free(1)));
        assert_eq!(group_type(&g, 5, Flavor::Homotopical, &cfg()).unwrap().answer, Answer::Yes);
        let tri = artin(&["a", "b", "c"], &[("a", "b", 4), ("b", "c", 3), ("c", "a", 3)]);
        assert_eq!(group_type(&tri, 2, Flavor::Homotopical, &cfg()).unwrap().answer, Answer::Yes);
        assert_eq!(group_type(&tri, 3, Flavor::Homotopical, &cfg()).unwrap().answer, Answer::Unknown);
    }

    #[test]
    fn sign_patterns() {
        assert_eq!(sign_pattern(&[b(1), b(0), b(-2)]), "+0-");
    }
}
