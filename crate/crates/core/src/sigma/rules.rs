use std::fmt;

use serde::Serialize;

/// One step of a decision: which rule fired, where the rule comes from and
/// what it was applied to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RuleApplication {
    pub rule_id: String,
    pub citation: String,
    pub note: String,
}

impl RuleApplication {
    /// The short label of the citation, before the first colon.
    pub fn label(&self) -> &str {
        self.citation.split(':').next().unwrap_or("").trim()
    }
}

impl fmt::Display for RuleApplication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} — {}", self.rule_id, self.citation, self.note)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    SphereEmpty,
    FreeEmpty,
    Center,
    FiniteIndex,
    KernelDiscrete,
    AboveCommutator,
    ProductFormula,
    Dihedral,
    LivingSubgraph,
    ArtinConjecture,
    Table,
    Monotone,
    TypeFreeAbelian,
    TypeFinitePresentation,
    TypeProduct,
    TypeProductQuotient,
    TypeFiniteIndex,
    TypeTable,
    AutTriple,
    DirectFactor,
    GammaIdentity,
    FixGammaFinite,
    GammaInversion,
    FiniteOrder,
    DisplacementData,
    SplitFix,
    JonesVaskou,
    Garside,
    OpaqueFix,
    IdentityFix,
    TheoremD,
    TheoremC,
    AboveCommutatorRank,
    LargeTypeFgfpa,
    Witness,
    Assumption,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::SphereEmpty => "sphere-empty",
            Rule::FreeEmpty => "free-empty",
            Rule::Center => "center",
            Rule::FiniteIndex => "finite-index",
            Rule::KernelDiscrete => "kernel-discrete",
            Rule::AboveCommutator => "above-commutator",
            Rule::ProductFormula => "product-formula",
            Rule::Dihedral => "dihedral",
            Rule::LivingSubgraph => "living-subgraph",
            Rule::ArtinConjecture => "artin-conjecture",
            Rule::Table => "table",
            Rule::Monotone => "monotone",
            Rule::TypeFreeAbelian => "type-free-abelian",
            Rule::TypeFinitePresentation => "type-finitely-presented",
            Rule::TypeProduct => "type-extension",
            Rule::TypeProductQuotient => "type-quotient",
            Rule::TypeFiniteIndex => "type-finite-index",
            Rule::TypeTable => "type-table",
            Rule::AutTriple => "aut-triple",
            Rule::DirectFactor => "direct-factor",
            Rule::GammaIdentity => "gamma-identity",
            Rule::FixGammaFinite => "fix-gamma-finite",
            Rule::GammaInversion => "gamma-inversion",
            Rule::FiniteOrder => "finite-order",
            Rule::DisplacementData => "displacement",
            Rule::SplitFix => "split-fix",
            Rule::JonesVaskou => "jones-vaskou",
            Rule::Garside => "garside",
            Rule::OpaqueFix => "opaque-fix",
            Rule::IdentityFix => "identity-fix",
            Rule::TheoremD => "fnfpa-direct-factor",
            Rule::TheoremC => "fnfpa-kernel",
            Rule::AboveCommutatorRank => "fnfpa-rank",
            Rule::LargeTypeFgfpa => "large-type-fgfpa",
            Rule::Witness => "witness",
            Rule::Assumption => "assumption",
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            Rule::SphereEmpty => "S(G): S(G) = ∅ when G_ab is finite",
            Rule::FreeEmpty => "Thm 2.2(5): Σ^n(F_r) = ∅ for r ≥ 2",
            Rule::Center => "Thm 2.2(4): χ(Z(G)) ≠ 0 ⇒ [χ] ∈ Σ^n(G)",
            Rule::FiniteIndex => "Thm 2.2(3): [G:H] < ∞ ⇒ ([χ|H] ∈ Σ^n(H) ⇔ [χ] ∈ Σ^n(G))",
            Rule::KernelDiscrete => "Thm 2.2(2): χ discrete ⇒ (ker χ ∈ F_n ⇔ {χ, -χ} ⊂ Σ^n(G))",
            Rule::AboveCommutator => "Thm 2.2(1): G' ≤ N ⇒ (N ∈ F_n ⇔ S(G,N) ⊂ Σ^n(G))",
            Rule::ProductFormula => "Thm 6.1: [χ] ∈ Σ^1(G1×G2) ⇔ [χ|G1] ∈ Σ^1(G1) or [χ|G2] ∈ Σ^1(G2) or (χ|G1 ≠ 0 and χ|G2 ≠ 0)",
            Rule::Dihedral => "Meier: Σ^1(A_e)^c = {[(1,-1)], [(-1,1)]} for m even, ∅ for m odd",
            Rule::LivingSubgraph => "Living subgraph thm: circuit rank 1 ⇒ ([χ] ∈ Σ^1 ⇔ L(χ) connected and dominant)",
            Rule::ArtinConjecture => "ASSUMED living subgraph criterion beyond circuit rank 1",
            Rule::Table => "Table: imported invariant",
            Rule::Monotone => "Σ^n(G) ⊆ Σ^1(G) for n ≥ 1",
            Rule::TypeFreeAbelian => "F_∞: finitely generated free and abelian groups",
            Rule::TypeFinitePresentation => "F_2: finitely presented groups",
            Rule::TypeProduct => "Prop 2.1(1): A, C ∈ F_n ⇒ B ∈ F_n for 1 → A → B → C → 1",
            Rule::TypeProductQuotient => "Prop 2.1(2): A ∈ F_(n-1), B ∈ F_n ⇒ C ∈ F_n",
            Rule::TypeFiniteIndex => "Finite index: F_n passes to and from finite-index subgroups",
            Rule::TypeTable => "Table: imported finiteness type",
            Rule::AutTriple => "Lemma 5.1: φ(h,v) = (ψ(h), α(h) + γ(v))",
            Rule::DirectFactor => "Cor 5.2: Fix φ ∈ F_n ⇔ Fix ψ ∈ F_n and P_φ ∈ F_n",
            Rule::GammaIdentity => "Cor 5.3: γ = Id ⇒ Fix φ = ker α₁ × A",
            Rule::FixGammaFinite => "Cor 5.5: Fix γ finite ⇒ (Fix φ ∈ F_n ⇔ Fix ψ ∈ F_n)",
            Rule::GammaInversion => "Cor 5.6: γ = -Id ⇒ (Fix φ ∈ F_n ⇔ Fix ψ ∈ F_n)",
            Rule::FiniteOrder => "Cor B: φ of finite order ⇒ (Fix φ ∈ F_n ⇔ Fix φ̄ ∈ F_n)",
            Rule::DisplacementData => "Thm A: I_φ = {z⁻¹φ(z)}, P_φ = ker ε_φ",
            Rule::SplitFix => "Ex.a: α(P_φ) = 0 ⇒ Fix φ = P_φ × Fix γ",
            Rule::JonesVaskou => "Jones–Vaskou: Fix ψ = A_(Fix σ) * F(Δ_e : σ transposes e)",
            Rule::Garside => "Garside: Δ_e = aba⋯ (m letters)",
            Rule::OpaqueFix => "Opaque: user-supplied Fix ψ",
            Rule::IdentityFix => "ψ = Id ⇒ Fix ψ = H",
            Rule::TheoremD => "Thm D: H×A ∈ FnFPa ⇔ H ∈ FnFPa and ker(χ|Fix ψ) ∈ F_n for rk im χ ≤ rk A",
            Rule::TheoremC => "Thm C: G ∈ FnFPa ⇔ ker θ ∈ F_n, θ = ε_φ + π∘ν",
            Rule::AboveCommutatorRank => "Cor C: G ∈ FnFPa, G' ≤ N, rk G/N ≤ rk Z(G) ⇒ N ∈ F_n",
            Rule::LargeTypeFgfpa => "Jones–Vaskou: large type, free of infinity ⇒ FGFPa",
            Rule::Witness => "Search: bounded witness enumeration",
            Rule::Assumption => "Assumption: supplied by the caller",
        }
    }

    pub fn apply(self, note: impl Into<String>) -> RuleApplication {
        RuleApplication {
            rule_id: self.id().to_string(),
            citation: self.citation().to_string(),
            note: note.into(),
        }
    }
}
