//! Σ¹ and rule-limited Σⁿ deciders with three-valued verdicts.
//!
//! Every answer other than `Unknown` is backed by a trace of rule
//! applications. Nothing here extrapolates a rule beyond its hypotheses
//! unless the caller opts in through [`Config::assume_artin_conjecture`].

mod artin;
mod decide;
mod rules;

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::charsphere::{CharClass, CharError};
use crate::grouprep::{GroupError, LabeledGraph};
use crate::zlattice::{fmt_vector, LatticeError};

pub use artin::{dihedral_member, is_connected_and_dominant, living_subgraph, vertex_values};
pub use decide::{
    complement_in_span, group_type, kernel_type, membership, membership_n, sigma1, sigma_n,
    SpanComplement,
};
pub use rules::{Rule, RuleApplication};

pub(crate) use decide::{describe, kernel_type_into, span_complement, type_of, Ctx, Outcome};

pub const DEFAULT_WITNESS_BOUND: i64 = 3;
pub const DEFAULT_ORACLE_RADIUS: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SigmaError {
    #[error("mismatched groups: {0}")]
    MismatchedGroups(String),
    #[error("n must be at least 1")]
    InvalidDegree,
    #[error("character values {values} do not respect the odd-edge identifications of the graph")]
    CharacterInconsistentWithAbelianization { values: String },
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "Yes",
            Answer::No => "No",
            Answer::Unknown => "Unknown",
        })
    }
}

/// Homotopical (`F_n`, `Σ^n(G)`) or homological (`FP_n`, `Σ^n(G,Z)`).
/// Every implemented rule holds for both, so the flavor is only recorded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Flavor {
    #[default]
    Homotopical,
    Homological,
}

impl Flavor {
    pub fn property(self, n: u32) -> String {
        match self {
            Flavor::Homotopical => format!("F_{n}"),
            Flavor::Homological => format!("FP_{n}"),
        }
    }

    pub fn invariant(self, n: u32) -> String {
        match self {
            Flavor::Homotopical => format!("Σ^{n}"),
            Flavor::Homological => format!("Σ^{n}(-,Z)"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Flavor::Homotopical => "homotopical",
            Flavor::Homological => "homological",
        }
    }

    pub fn parse(s: &str) -> Option<Flavor> {
        match s {
            "homotopical" | "F" => Some(Flavor::Homotopical),
            "homological" | "FP" => Some(Flavor::Homological),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub assume_artin_conjecture: bool,
    /// Exponent bound `B` for witness enumeration.
    pub witness_bound: i64,
    /// Ball radius for the free-group oracle.
    pub oracle_radius: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            assume_artin_conjecture: false,
            witness_bound: DEFAULT_WITNESS_BOUND,
            oracle_radius: DEFAULT_ORACLE_RADIUS,
        }
    }
}

impl Config {
    /// Defaults, with `SIGMAFIX_WITNESS_BOUND` overriding the witness bound.
    pub fn from_env() -> Self {
        let mut c = Config::default();
        if let Some(b) = std::env::var("SIGMAFIX_WITNESS_BOUND")
            .ok()
            .and_then(|v| v.trim().parse::<i64>().ok())
            .filter(|b| *b >= 0)
        {
            c.witness_bound = b;
        }
        c
    }
}

/// Certificate attached to a `No` (or, for searches, a found object).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness {
    pub psi: Option<String>,
    /// A character of the ambient group, by its values on generators.
    pub character: Option<Vec<BigInt>>,
    /// Values of the restricted character on the generators of Fix ψ.
    pub restricted: Option<Vec<BigInt>>,
    pub class: Option<CharClass>,
    pub words: Vec<String>,
    pub note: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(p) = &self.psi {
            parts.push(format!("ψ={p}"));
        }
        if let Some(c) = &self.character {
            parts.push(format!("χ={}", fmt_vector(c)));
        }
        if let Some(r) = &self.restricted {
            parts.push(format!("χ|Fix ψ={}", fmt_vector(r)));
        }
        if let Some(c) = &self.class {
            parts.push(format!("class {c}"));
        }
        if !self.words.is_empty() {
            parts.push(format!("words {}", self.words.join(", ")));
        }
        if !self.note.is_empty() {
            parts.push(self.note.clone());
        }
        write!(f, "{}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    pub trace: Vec<RuleApplication>,
    pub reason: Option<String>,
    pub witness: Option<Witness>,
    pub n: u32,
    pub flavor: Flavor,
    pub assumptions: Vec<String>,
}

impl Verdict {
    pub fn new(answer: Answer, trace: Vec<RuleApplication>, n: u32, flavor: Flavor) -> Self {
        Verdict {
            answer,
            trace,
            reason: None,
            witness: None,
            n,
            flavor,
            assumptions: vec![],
        }
    }

    pub fn unknown(reason: impl Into<String>, trace: Vec<RuleApplication>, n: u32, flavor: Flavor) -> Self {
        Verdict {
            reason: Some(reason.into()),
            ..Verdict::new(Answer::Unknown, trace, n, flavor)
        }
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    /// Citation labels in trace order.
    pub fn citations(&self) -> Vec<&str> {
        self.trace.iter().map(RuleApplication::label).collect()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n={}, {})", self.answer, self.n, self.flavor.name())?;
        if let Some(r) = &self.reason {
            write!(f, ": {r}")?;
        }
        for t in &self.trace {
            write!(f, "\n  {t}")?;
        }
        if let Some(w) = &self.witness {
            write!(f, "\n  witness: {w}")?;
        }
        for a in &self.assumptions {
            write!(f, "\n  assumption: {a}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sigma1Description {
    WholeSphere,
    EmptySet,
    /// The invariant is the sphere minus these classes.
    SphereMinusFiniteSet(Vec<CharClass>),
    /// The invariant is exactly these classes.
    FiniteSet(Vec<CharClass>),
    /// Membership is decided by the living subgraph of this graph.
    ByPredicate(LabeledGraph),
    Unknown(String),
}

impl Sigma1Description {
    pub fn is_known(&self) -> bool {
        !matches!(self, Sigma1Description::Unknown(_))
    }

    /// The complement as a finite list, when the description gives one.
    pub fn finite_complement(&self, rank: usize) -> Option<Vec<CharClass>> {
        match self {
            Sigma1Description::WholeSphere => Some(vec![]),
            Sigma1Description::SphereMinusFiniteSet(c) => Some(c.clone()),
            Sigma1Description::EmptySet if rank == 0 => Some(vec![]),
            Sigma1Description::EmptySet | Sigma1Description::FiniteSet(_) if rank == 1 => {
                let all = [CharClass::from_i64(&[1]).unwrap(), CharClass::from_i64(&[-1]).unwrap()];
                let inside: Vec<CharClass> = match self {
                    Sigma1Description::FiniteSet(s) => s.clone(),
                    _ => vec![],
                };
                Some(all.into_iter().filter(|c| !inside.contains(c)).collect())
            }
            _ => None,
        }
    }
}

/// A Σ-invariant description with the trace that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Described {
    pub description: Sigma1Description,
    pub trace: Vec<RuleApplication>,
    pub rank: usize,
    pub n: u32,
    pub flavor: Flavor,
}

impl fmt::Display for Described {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = self.flavor.invariant(self.n);
        let list = |cs: &[CharClass]| cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ");
        match &self.description {
            Sigma1Description::WholeSphere if self.rank == 1 => write!(f, "{inv} = whole sphere {{±1}}")?,
            Sigma1Description::WholeSphere => write!(f, "{inv} = whole sphere S^{}", self.rank.saturating_sub(1))?,
            Sigma1Description::EmptySet => write!(f, "{inv} = empty")?,
            Sigma1Description::SphereMinusFiniteSet(c) => write!(f, "{inv} = S(G) minus {{{}}}", list(c))?,
            Sigma1Description::FiniteSet(c) => write!(f, "{inv} = {{{}}}", list(c))?,
            Sigma1Description::ByPredicate(_) => {
                write!(f, "{inv} = {{[χ] : living subgraph L(χ) connected and dominant}}")?
            }
            Sigma1Description::Unknown(r) => write!(f, "{inv} = Unknown: {r}")?,
        }
        for t in &self.trace {
            write!(f, "\n  {t}")?;
        }
        Ok(())
    }
}
