//! The `sigmafix` command line.
//!
//! Every command reads JSON descriptors (see `fixtures/`), prints a human
//! summary by default and a versioned JSON document with `--json`.
//! Exit codes: 0 ok, 1 usage or bad input, 2 Unknown verdict, 3 internal.

pub mod fixtures;
pub mod json;
mod reproduce;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::charsphere::{CharClass, CharError};
use crate::fixpoint::{self, FixError, FixPath, NData};
use crate::grouprep::{abelianize, GroupDesc, GroupError};
use crate::oracle;
use crate::sigma::{self, Answer, Config, Flavor, SigmaError, Verdict};
use crate::zlattice::{fmt_vector, IntMatrix, LatticeError};

pub use reproduce::{reproduce, CaseResult};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("bad input: {0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 1,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CharError> for CliError {
    fn from(e: CharError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SigmaError> for CliError {
    fn from(e: SigmaError) -> Self {
        match e {
            SigmaError::Group(g) => g.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<FixError> for CliError {
    fn from(e: FixError) -> Self {
        match e {
            FixError::InvalidTriple(_) | FixError::UnsupportedPsi(_) | FixError::Precondition(_) => {
                CliError::Input(e.to_string())
            }
            FixError::Sigma(s) => s.into(),
            FixError::Group(g) => g.into(),
            FixError::Char(c) => c.into(),
            FixError::Lattice(l) => l.into(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "sigmafix", version, about = "Σ-invariant decisions for fixed subgroups of automorphisms")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Omit the generatedAt field from JSON output.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Degree {
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// homotopical (F_n) or homological (FP_n)
    #[arg(long, default_value = "homotopical", value_parser = parse_flavor)]
    pub flavor: Flavor,
    /// Apply the living-subgraph criterion beyond circuit rank 1.
    #[arg(long)]
    pub assume_artin_conjecture: bool,
}

fn parse_flavor(s: &str) -> Result<Flavor, String> {
    Flavor::parse(s).ok_or_else(|| format!("unknown flavor '{s}' (homotopical or homological)"))
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Subgroup {
    /// Generating words of N (comma separated); N must contain G′.
    #[arg(long, value_delimiter = ',')]
    pub words: Option<Vec<String>>,
    /// N as the common kernel of characters, rows separated by ';'.
    #[arg(long)]
    pub kernel: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Abelianization and generator images.
    Abelianize { file: PathBuf },
    /// Σ-invariant description, or membership of one class.
    Sigma1 {
        file: PathBuf,
        /// Character coordinates, e.g. "1,-1".
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
        #[command(flatten)]
        degree: Degree,
    },
    /// Finiteness type of Fix φ for an automorphism (ψ, α, γ) of H × A.
    FixType {
        file: PathBuf,
        #[command(flatten)]
        degree: Degree,
        /// Skip the shortcut rules and use the general path only.
        #[arg(long)]
        general: bool,
    },
    /// Witness search for H × A lacking FnFPa.
    Fgfpa {
        hfile: PathBuf,
        afile: PathBuf,
        /// ψ descriptor file; repeat for several.
        #[arg(long = "psi")]
        psis: Vec<PathBuf>,
        /// Declare the ψ list exhaustive.
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        degree: Degree,
    },
    /// Type of the kernel of a discrete character.
    KernelType {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[command(flatten)]
        degree: Degree,
    },
    /// Type of a subgroup containing the commutator subgroup.
    AboveCommutator {
        file: PathBuf,
        #[command(flatten)]
        subgroup: Subgroup,
        #[command(flatten)]
        degree: Degree,
    },
    /// Necessary condition for FnFPa through a subgroup above G′.
    FnfpaCheck {
        file: PathBuf,
        #[command(flatten)]
        subgroup: Subgroup,
        #[command(flatten)]
        degree: Degree,
    },
    /// Kernel criterion on abelianized data supplied by the caller.
    TheoremC {
        file: PathBuf,
        #[command(flatten)]
        degree: Degree,
    },
    /// Brute-force referees.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Recompute the worked examples and compare with the golden files.
    ReproducePaper {
        /// Write fresh golden files to this directory instead of comparing.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Disconnection certificate for a character of a free group.
    FreeWitness {
        #[arg(long)]
        rank: usize,
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
        #[arg(long, default_value_t = sigma::DEFAULT_ORACLE_RADIUS)]
        radius: usize,
    },
    /// Living-subgraph decider against the closed form on dihedral groups.
    Dihedral {
        /// Single label; all of 3..=12 when omitted.
        #[arg(long)]
        m: Option<u32>,
    },
    /// Abelianization from the relation matrix.
    Abelianization { file: PathBuf },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok((code, body)) => Output { code, stdout: body, stderr: String::new() },
        Err(e) => Output {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    json::check_schema(&v)?;
    Ok(v)
}

fn read_group(path: &Path) -> Result<GroupDesc, CliError> {
    json::group(&read_json(path)?)
}

pub fn parse_class(s: &str) -> Result<CharClass, CliError> {
    Ok(CharClass::from_vector(parse_vector(s)?)?)
}

fn parse_vector(s: &str) -> Result<Vec<num_bigint::BigInt>, CliError> {
    s.trim()
        .trim_start_matches(['(', '['])
        .trim_end_matches([')', ']'])
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| CliError::Usage(format!("'{x}' is not an integer"))))
        .collect()
}

fn parse_rows(s: &str) -> Result<IntMatrix, CliError> {
    let rows = s.split(';').map(parse_vector).collect::<Result<Vec<_>, _>>()?;
    let w = rows.first().map_or(0, Vec::len);
    Ok(IntMatrix::from_rows(rows, w)?)
}

fn config(d: &Degree) -> Config {
    let mut c = Config::from_env();
    c.assume_artin_conjecture = d.assume_artin_conjecture;
    c
}

fn ndata(g: &GroupDesc, s: &Subgroup) -> Result<NData, CliError> {
    if let Some(ws) = &s.words {
        return Ok(NData::Words(ws.iter().map(|w| g.parse_word(w)).collect::<Result<_, _>>()?));
    }
    Ok(NData::CommonKernel(parse_rows(s.kernel.as_deref().unwrap_or_default())?))
}

fn verdict_code(v: &Verdict) -> i32 {
    if v.answer == Answer::Unknown {
        2
    } else {
        0
    }
}

struct Emit<'a> {
    cli: &'a Cli,
    command: &'static str,
}

impl Emit<'_> {
    fn finish(&self, text: String, mut value: Value) -> String {
        if !self.cli.json {
            return if text.ends_with('\n') { text } else { text + "\n" };
        }
        let obj = value.as_object_mut().expect("object output");
        obj.insert("schema".into(), json!(json::SCHEMA));
        obj.insert("command".into(), json!(self.command));
        if !self.cli.no_timestamp {
            obj.insert("generatedAt".into(), json!(chrono::Utc::now().to_rfc3339()));
        }
        serde_json::to_string_pretty(&value).expect("serializable") + "\n"
    }
}

fn execute(cli: &Cli) -> Result<(i32, String), CliError> {
    let emit = |command| Emit { cli, command };
    match &cli.command {
        Command::Abelianize { file } => {
            let g = read_group(file)?;
            let ab = abelianize(&g)?;
            let (text, value) = abelianization_report(&g, &ab);
            Ok((0, emit("abelianize").finish(text, value)))
        }
        Command::Sigma1 { file, class, degree } => {
            let g = read_group(file)?;
            let cfg = config(degree);
            match class {
                Some(c) => {
                    let c = parse_class(c)?;
                    let v = sigma::membership_n(&g, &c, degree.n, degree.flavor, &cfg)?;
                    Ok((verdict_code(&v), emit("sigma1").finish(v.to_string(), json::verdict_value(&v))))
                }
                None => {
                    let d = sigma::sigma_n(&g, degree.n, degree.flavor, &cfg)?;
                    let code = if d.description.is_known() { 0 } else { 2 };
                    Ok((code, emit("sigma1").finish(d.to_string(), json::described_value(&d))))
                }
            }
        }
        Command::FixType { file, degree, general } => {
            let t = json::aut_triple(&read_json(file)?)?;
            let cfg = config(degree);
            let path = if *general { FixPath::General } else { FixPath::Auto };
            let v = fixpoint::fix_type_with(&t, degree.n, degree.flavor, &cfg, path)?;
            let fix = fixpoint::fix_of_psi(&t.h, &t.psi)?;
            let d = fixpoint::displacement(&t, &fix)?;
            let summary = fix.summary(&t.h);
            let structure = d.structure();
            let text = format!("{summary}\n{structure}\n{v}");
            let mut value = json::verdict_value(&v);
            value["fix"] = json!(summary);
            value["structure"] = json!(structure.lines().collect::<Vec<_>>());
            Ok((verdict_code(&v), emit("fix-type").finish(text, value)))
        }
        Command::Fgfpa { hfile, afile, psis, exhaustive, degree } => {
            let h = read_group(hfile)?;
            let a = match json::group(&read_json(afile)?)? {
                GroupDesc::Abelian(a) => a,
                other => return Err(CliError::Input(format!("A must be abelian, got {}", other.kind()))),
            };
            let psis = psis
                .iter()
                .map(|p| json::psi(&read_json(p)?, &h))
                .collect::<Result<Vec<_>, _>>()?;
            let v = fixpoint::fgfpa_witness_search(&h, &a, &psis, degree.n, degree.flavor, *exhaustive, &config(degree))?;
            Ok((verdict_code(&v), emit("fgfpa").finish(v.to_string(), json::verdict_value(&v))))
        }
        Command::KernelType { file, class, degree } => {
            let g = read_group(file)?;
            let v = sigma::kernel_type(&g, &parse_class(class)?, degree.n, degree.flavor, &config(degree))?;
            Ok((verdict_code(&v), emit("kernel-type").finish(v.to_string(), json::verdict_value(&v))))
        }
        Command::AboveCommutator { file, subgroup, degree } => {
            let g = read_group(file)?;
            let nd = ndata(&g, subgroup)?;
            let v = fixpoint::subgroup_above_commutator_type(&g, &nd, degree.n, degree.flavor, &config(degree))?;
            Ok((verdict_code(&v), emit("above-commutator").finish(v.to_string(), json::verdict_value(&v))))
        }
        Command::FnfpaCheck { file, subgroup, degree } => {
            let g = read_group(file)?;
            let nd = ndata(&g, subgroup)?;
            let v = fixpoint::fnfpa_necessary_check(&g, &nd, degree.n, degree.flavor, &config(degree))?;
            Ok((verdict_code(&v), emit("fnfpa-check").finish(v.to_string(), json::verdict_value(&v))))
        }
        Command::TheoremC { file, degree } => {
            let v = read_json(file)?;
            let fix = json::group(v.get("fix").ok_or_else(|| CliError::Input("missing field 'fix'".into()))?)?;
            let z = json::abelian(v.get("z").ok_or_else(|| CliError::Input("missing field 'z'".into()))?)?;
            let g = fix.generator_count();
            let get = |k: &str, cols: usize| -> Result<IntMatrix, CliError> {
                json::matrix(v.get(k).ok_or_else(|| CliError::Input(format!("missing field '{k}'")))?, cols)
            };
            let verdict = fixpoint::theorem_c(
                &fix,
                &z,
                &get("gamma", z.cover_dim())?,
                &get("epsilon", g)?,
                &get("nu", g)?,
                degree.n,
                degree.flavor,
                &config(degree),
            )?;
            let text = format!("operating on the supplied Fix φ̄ descriptor\n{verdict}");
            Ok((verdict_code(&verdict), emit("theorem-c").finish(text, json::verdict_value(&verdict))))
        }
        Command::Oracle { which } => oracle_command(which, emit("oracle")),
        Command::ReproducePaper { dump } => {
            if let Some(dir) = dump {
                let written = reproduce::dump(dir)?;
                return Ok((0, emit("reproduce-paper").finish(
                    format!("wrote {} golden files to {}", written, dir.display()),
                    json!({ "written": written }),
                )));
            }
            let results = reproduce()?;
            let ok = results.iter().all(|r| r.pass);
            let text = results
                .iter()
                .map(|r| format!("{} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.summary))
                .collect::<Vec<_>>()
                .join("\n");
            let value = json!({
                "cases": results.iter().map(|r| json!({ "name": r.name, "pass": r.pass, "summary": r.summary })).collect::<Vec<_>>(),
                "pass": ok,
            });
            Ok((if ok { 0 } else { 3 }, emit("reproduce-paper").finish(text, value)))
        }
    }
}

pub fn abelianization_report(g: &GroupDesc, ab: &crate::grouprep::Abelianization) -> (String, Value) {
    let names = g.generators();
    let images: Vec<String> = ab
        .images
        .columns()
        .iter()
        .zip(&names)
        .map(|(c, n)| {
            let img = if c.len() == 1 { c[0].to_string() } else { fmt_vector(c) };
            format!("{n}↦{img}")
        })
        .collect();
    let text = format!("{}, {}", ab.group, images.join(" "));
    let value = json!({
        "group": ab.group.to_string(),
        "abelianization": json::abelian_value(&ab.group),
        "generators": names,
        "images": json::matrix_value(&ab.images),
    });
    (text, value)
}

fn oracle_command(which: &OracleCommand, emit: Emit) -> Result<(i32, String), CliError> {
    match which {
        OracleCommand::FreeWitness { rank, chi, radius } => {
            let chi: Vec<i64> = parse_vector(chi)?
                .iter()
                .map(|x| i64::try_from(x).map_err(|_| CliError::Usage("character value too large".into())))
                .collect::<Result<_, _>>()?;
            if chi.len() != *rank {
                return Err(CliError::Usage(format!("χ has {} values, rank is {rank}", chi.len())));
            }
            let cert = oracle::free_sigma1_witness(*rank, &chi, *radius);
            let (code, text) = match &cert {
                Some(c) => (0, format!("[χ] ∉ Σ¹(F{rank}): {c}")),
                None => (2, format!("no certificate within radius {radius}")),
            };
            let value = json!({ "certificate": cert, "verified": cert.as_ref().map(|c| c.check(&chi)) });
            Ok((code, emit.finish(text, value)))
        }
        OracleCommand::Dihedral { m } => {
            let labels: Vec<u32> = match m {
                Some(m) => vec![*m],
                None => (3..=12).collect(),
            };
            let reports = labels
                .iter()
                .map(|&m| oracle::dihedral_exhaust(m).ok_or_else(|| CliError::Usage(format!("m = {m} is outside 3..=12"))))
                .collect::<Result<Vec<_>, _>>()?;
            let bad = reports.iter().any(|r| !r.mismatches.is_empty());
            let text = reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
            Ok((if bad { 3 } else { 0 }, emit.finish(text, json!({ "reports": reports }))))
        }
        OracleCommand::Abelianization { file } => {
            let g = read_group(file)?;
            let Some(a) = oracle::abelianization_row_reduce(&g) else {
                return Err(CliError::Usage("the relation-matrix oracle handles free and Artin groups".into()));
            };
            let engine = abelianize(&g)?.group;
            let agree = engine == a;
            let text = format!("{a} (engine: {engine}, {})", if agree { "agree" } else { "DISAGREE" });
            Ok((
                if agree { 0 } else { 3 },
                emit.finish(text, json!({ "oracle": json::abelian_value(&a), "engine": json::abelian_value(&engine), "agree": agree })),
            ))
        }
    }
}
