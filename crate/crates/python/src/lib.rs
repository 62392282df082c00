//! Python bindings. Descriptors cross the boundary as JSON text in the same
//! format the command line reads.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

use sigmafix::cli::{self, json as js, CliError};
use sigmafix::charsphere::CharClass;
use sigmafix::fixpoint::{self, AutTriple, FixPath};
use sigmafix::grouprep::{self, GroupDesc};
use sigmafix::oracle;
use sigmafix::sigma::{self, Config, Flavor};
use sigmafix::zlattice::FgAbelian;

fn err(e: impl Into<CliError>) -> PyErr {
    PyValueError::new_err(e.into().to_string())
}

fn parse(text: &str) -> PyResult<Value> {
    serde_json::from_str(text).map_err(|e| PyValueError::new_err(format!("invalid JSON: {e}")))
}

fn flavor(name: &str) -> PyResult<Flavor> {
    Flavor::parse(name).ok_or_else(|| PyValueError::new_err(format!("unknown flavor {name:?}")))
}

fn config(assume_artin_conjecture: bool) -> Config {
    Config { assume_artin_conjecture, ..Config::default() }
}

fn class(values: Vec<i64>) -> PyResult<CharClass> {
    CharClass::from_i64(&values).map_err(err)
}

/// Outcome of a decision with its rule trace.
#[pyclass(module = "sigmafix", frozen)]
pub struct Verdict {
    inner: sigma::Verdict,
}

#[pymethods]
impl Verdict {
    /// "Yes", "No" or "Unknown".
    #[getter]
    fn answer(&self) -> String {
        self.inner.answer.to_string()
    }

    #[getter]
    fn citations(&self) -> Vec<String> {
        self.inner.citations().into_iter().map(str::to_string).collect()
    }

    #[getter]
    fn trace(&self) -> Vec<String> {
        self.inner.trace.iter().map(ToString::to_string).collect()
    }

    #[getter]
    fn reason(&self) -> Option<String> {
        self.inner.reason.clone()
    }

    fn to_json(&self) -> String {
        js::verdict_value(&self.inner).to_string()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Verdict({})", self.inner.answer)
    }
}

fn verdict(inner: sigma::Verdict) -> Verdict {
    Verdict { inner }
}

/// A group descriptor: free, abelian, Artin, direct product, finite-index
/// extension or table-backed.
#[pyclass(module = "sigmafix", frozen)]
pub struct Group {
    inner: GroupDesc,
}

#[pymethods]
impl Group {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Group { inner: js::group(&parse(text)?).map_err(err)? })
    }

    #[staticmethod]
    fn free(rank: usize) -> Self {
        Group { inner: GroupDesc::free(rank) }
    }

    #[getter]
    fn generator_count(&self) -> usize {
        self.inner.generator_count()
    }

    /// Abelianization as (free rank, torsion invariants).
    fn abelianize(&self) -> PyResult<(usize, Vec<String>)> {
        let a = grouprep::abelianize(&self.inner).map_err(err)?;
        Ok((a.group.free_rank(), a.group.torsion().iter().map(ToString::to_string).collect()))
    }

    /// Human-readable description of Σ¹ with its trace.
    fn sigma1(&self) -> PyResult<String> {
        Ok(sigma::sigma1(&self.inner, &Config::default()).map_err(err)?.to_string())
    }

    #[pyo3(signature = (character, n=1, flavor="homotopical", assume_artin_conjecture=false))]
    fn membership(&self, character: Vec<i64>, n: u32, flavor: &str, assume_artin_conjecture: bool) -> PyResult<Verdict> {
        let v = sigma::membership_n(&self.inner, &class(character)?, n, self::flavor(flavor)?, &config(assume_artin_conjecture))
            .map_err(err)?;
        Ok(verdict(v))
    }

    #[pyo3(signature = (character, n=1, flavor="homotopical", assume_artin_conjecture=false))]
    fn kernel_type(&self, character: Vec<i64>, n: u32, flavor: &str, assume_artin_conjecture: bool) -> PyResult<Verdict> {
        let v = sigma::kernel_type(&self.inner, &class(character)?, n, self::flavor(flavor)?, &config(assume_artin_conjecture))
            .map_err(err)?;
        Ok(verdict(v))
    }

    #[pyo3(signature = (n=1, flavor="homotopical"))]
    fn group_type(&self, n: u32, flavor: &str) -> PyResult<Verdict> {
        Ok(verdict(sigma::group_type(&self.inner, n, self::flavor(flavor)?, &Config::default()).map_err(err)?))
    }

    /// Witness search for `self × A` lacking FnFPa, over the given ψ
    /// descriptors.
    #[pyo3(signature = (a, psis, n=1, flavor="homotopical", exhaustive=false))]
    fn fgfpa(&self, a: &str, psis: Vec<String>, n: u32, flavor: &str, exhaustive: bool) -> PyResult<Verdict> {
        let a: FgAbelian = js::abelian(&parse(a)?).map_err(err)?;
        let psis = psis
            .iter()
            .map(|p| js::psi(&parse(p)?, &self.inner).map_err(err))
            .collect::<PyResult<Vec<_>>>()?;
        let v = fixpoint::fgfpa_witness_search(&self.inner, &a, &psis, n, self::flavor(flavor)?, exhaustive, &Config::default())
            .map_err(err)?;
        Ok(verdict(v))
    }

    fn to_json(&self) -> String {
        js::group_value(&self.inner).to_string()
    }

    fn __repr__(&self) -> String {
        format!("Group({})", self.inner)
    }
}

/// An automorphism `(h, v) ↦ (ψ(h), α(h) + γ(v))` of `H × A`.
#[pyclass(module = "sigmafix", frozen)]
pub struct Automorphism {
    inner: AutTriple,
}

#[pymethods]
impl Automorphism {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Automorphism { inner: js::aut_triple(&parse(text)?).map_err(err)? })
    }

    /// Finiteness type of the fixed subgroup.
    #[pyo3(signature = (n=1, flavor="homotopical", general=false))]
    fn fix_type(&self, n: u32, flavor: &str, general: bool) -> PyResult<Verdict> {
        let path = if general { FixPath::General } else { FixPath::Auto };
        let v = fixpoint::fix_type_with(&self.inner, n, self::flavor(flavor)?, &Config::default(), path).map_err(err)?;
        Ok(verdict(v))
    }

    /// Lines describing `Fix γ`, `I_φ`, `im ε_φ` and `P_φ`.
    fn structure(&self) -> PyResult<Vec<String>> {
        let fix = fixpoint::fix_of_psi(&self.inner.h, &self.inner.psi).map_err(err)?;
        let d = fixpoint::displacement(&self.inner, &fix).map_err(err)?;
        Ok(d.structure().lines().map(str::to_string).collect())
    }

    fn __repr__(&self) -> String {
        format!("Automorphism(H = {})", self.inner.h)
    }
}

/// Certificate that `[χ]` lies outside Σ¹ of a free group, as its text form.
#[pyfunction]
#[pyo3(signature = (rank, character, radius=8))]
fn free_witness(rank: usize, character: Vec<i64>, radius: usize) -> Option<String> {
    oracle::free_sigma1_witness(rank, &character, radius).map(|c| c.to_string())
}

/// Brute-force check of the two-generator Artin group with label `m`:
/// returns (characters checked, mismatches).
#[pyfunction]
fn dihedral_exhaust(m: u32) -> PyResult<(usize, usize)> {
    let r = oracle::dihedral_exhaust(m).ok_or_else(|| PyValueError::new_err(format!("label {m} out of range")))?;
    Ok((r.checked, r.mismatches.len()))
}

/// Recomputes the worked examples: list of (name, passed, summary).
#[pyfunction]
fn reproduce() -> PyResult<Vec<(String, bool, String)>> {
    let cases = cli::reproduce().map_err(err)?;
    Ok(cases.into_iter().map(|c| (c.name.to_string(), c.pass, c.summary)).collect())
}

/// Runs the command line in-process: (exit code, stdout, stderr).
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    let out = cli::run(std::iter::once("sigmafix".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
#[pyo3(name = "sigmafix")]
pub fn sigmafix_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Verdict>()?;
    m.add_class::<Group>()?;
    m.add_class::<Automorphism>()?;
    m.add_function(wrap_pyfunction!(free_witness, m)?)?;
    m.add_function(wrap_pyfunction!(dihedral_exhaust, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
