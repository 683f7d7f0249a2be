//! Python bindings: arrow words, Grothendieck-group operations, the
//! verification suites and the JSON/figure exports, driven in-process.

use mwcalc_core::groth;
use mwcalc_core::jacquet;
use mwcalc_core::render;
use mwcalc_core::segment::{
    junction_compose, ArrowWord, CuspidalDatum, JunctionPart, ProductSide,
};
use mwcalc_core::sheaf;
use mwcalc_core::spectral::{self, LocalCase, TableFunctor};
use mwcalc_core::twist::rational_str;
use mwcalc_core::verify::{run_suite, Status, Suite};
use mwcalc_core::CalcError;
use num_rational::BigRational;
use num_traits::Zero;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: CalcError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_dir(dir: &str) -> PyResult<ProductSide> {
    match dir {
        "right" | ">" => Ok(ProductSide::Right),
        "left" | "<" => Ok(ProductSide::Left),
        other => Err(PyValueError::new_err(format!("unknown direction {other:?}"))),
    }
}

/// A canonical arrow word over a cuspidal datum.
#[pyclass(frozen, name = "Word", skip_from_py_object)]
#[derive(Clone)]
struct PyWord {
    inner: ArrowWord,
}

#[pymethods]
impl PyWord {
    /// Parse the canonical textual form, e.g. `pi(0) <3 >1`.
    #[new]
    #[pyo3(signature = (text, rank = 1, dual_label = None))]
    fn new(text: &str, rank: u32, dual_label: Option<&str>) -> PyResult<Self> {
        let label = text.split('(').next().unwrap_or("pi");
        let base = CuspidalDatum::new(rank, label, dual_label.unwrap_or(label)).map_err(err)?;
        Ok(PyWord {
            inner: ArrowWord::parse(&base, text).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (s, rank = 1, label = "pi"))]
    fn steinberg(s: u32, rank: u32, label: &str) -> PyResult<Self> {
        let base = CuspidalDatum::self_dual(rank, label);
        Ok(PyWord {
            inner: ArrowWord::steinberg(&base, s, BigRational::zero()),
        })
    }

    #[staticmethod]
    #[pyo3(signature = (s, rank = 1, label = "pi"))]
    fn speh(s: u32, rank: u32, label: &str) -> PyResult<Self> {
        let base = CuspidalDatum::self_dual(rank, label);
        Ok(PyWord {
            inner: ArrowWord::speh(&base, s, BigRational::zero()),
        })
    }

    fn text(&self) -> String {
        self.inner.text()
    }

    fn points(&self) -> u32 {
        self.inner.points()
    }

    fn center(&self) -> String {
        rational_str(self.inner.center())
    }

    fn runs(&self) -> String {
        self.inner.runs_text()
    }

    fn is_steinberg(&self) -> bool {
        self.inner.is_steinberg()
    }

    fn is_speh(&self) -> bool {
        self.inner.is_speh()
    }

    fn dual(&self) -> Self {
        PyWord {
            inner: self.inner.dual(),
        }
    }

    fn zelevinsky_involution(&self) -> Self {
        PyWord {
            inner: self.inner.zelevinsky_involution(),
        }
    }

    /// Shift the center by `n/2`.
    fn shifted_half(&self, n: i64) -> Self {
        PyWord {
            inner: self.inner.shifted_half(n),
        }
    }

    /// The support exponents, lowest first.
    fn support(&self) -> Vec<String> {
        self.inner.support().iter().map(rational_str).collect()
    }

    fn __repr__(&self) -> String {
        format!("Word({:?})", self.inner.text())
    }

    fn __eq__(&self, other: &PyWord) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }
}

fn rep_to_py(v: &groth::VirtualRep) -> Vec<(String, String, String)> {
    v.terms()
        .map(|((w, t), c)| (w.text(), t.to_string(), c.to_string()))
        .collect()
}

/// The requested part of `a ⃗× b` / `a ⃖× b` as `(word text, twist, coeff)`
/// triples.
#[pyfunction]
#[pyo3(signature = (a, b, dir = "right", part = "full"))]
fn junction(a: &PyWord, b: &PyWord, dir: &str, part: &str) -> PyResult<Vec<(String, String, String)>> {
    let part = match part {
        "socle" => JunctionPart::Socle,
        "cosocle" => JunctionPart::Cosocle,
        "full" => JunctionPart::Full,
        other => return Err(PyValueError::new_err(format!("unknown part {other:?}"))),
    };
    let v = junction_compose(&a.inner, &b.inner, parse_dir(dir)?, part).map_err(err)?;
    Ok(rep_to_py(&v))
}

/// Grothendieck-group expansion of the product (always length two).
#[pyfunction]
#[pyo3(signature = (a, b, dir = "right"))]
fn expand_product(a: &PyWord, b: &PyWord, dir: &str) -> PyResult<Vec<(String, String, String)>> {
    let v = groth::expand_product(&a.inner, &b.inner, parse_dir(dir)?).map_err(err)?;
    Ok(rep_to_py(&v))
}

/// All value sequences of the full Jacquet module of the word.
#[pyfunction]
fn linear_extensions(word: &PyWord) -> Vec<Vec<u32>> {
    jacquet::linear_extensions(&word.inner)
        .entries()
        .map(|(s, _)| s.clone())
        .collect()
}

/// Classify a permutation of `0..s` back to its word.
#[pyfunction]
#[pyo3(signature = (seq, rank = 1, label = "pi"))]
fn word_of_permutation(seq: Vec<u32>, rank: u32, label: &str) -> PyResult<PyWord> {
    let base = CuspidalDatum::self_dual(rank, label);
    Ok(PyWord {
        inner: jacquet::word_of_permutation(&base, BigRational::zero(), &seq).map_err(err)?,
    })
}

/// The class of the full induced representation: all `2^{s-1}` words.
#[pyfunction]
#[pyo3(signature = (s, rank = 1, label = "pi"))]
fn standard_module(s: u32, rank: u32, label: &str) -> PyResult<Vec<String>> {
    let base = CuspidalDatum::self_dual(rank, label);
    let v = groth::standard_module(&base, s, BigRational::zero()).map_err(err)?;
    Ok(v.terms().map(|((w, _), _)| w.text()).collect())
}

/// The alternating telescope; collapses to the single Steinberg word.
#[pyfunction]
#[pyo3(signature = (t, i, rank = 1, label = "pi"))]
fn telescope(t: u32, i: u32, rank: u32, label: &str) -> PyResult<Vec<(String, String, String)>> {
    let base = CuspidalDatum::self_dual(rank, label);
    Ok(rep_to_py(&groth::telescope(&base, t, i).map_err(err)?))
}

/// Constituent sequences of the Speh-of-Steinberg representation.
#[pyfunction]
fn speh_of_steinberg(s: u32, t: u32) -> PyResult<Vec<Vec<u32>>> {
    Ok(jacquet::speh_of_steinberg_extensions(s, t)
        .map_err(err)?
        .entries()
        .map(|(seq, _)| seq.clone())
        .collect())
}

/// The recursion-oracle multiset for the same family, with multiplicities.
#[pyfunction]
fn speh_steinberg_oracle(s: u32, t: u32) -> PyResult<Vec<(Vec<u32>, String)>> {
    Ok(jacquet::speh_steinberg_oracle(s, t)
        .map_err(err)?
        .into_iter()
        .map(|(seq, c)| (seq, c.to_string()))
        .collect())
}

/// Monodromy-graded strata at level `k`: `(t, twist)` pairs.
#[pyfunction]
fn mgr(s: u32, k: i64) -> Vec<(u32, String)> {
    sheaf::mgr(s, k)
        .into_iter()
        .map(|(t, tw)| (t, tw.to_string()))
        .collect()
}

/// The nearby-cycle identity at `(d, g)`; returns `(ok, witness)`.
#[pyfunction]
fn main_identity(d: u32, g: u32) -> PyResult<(bool, Option<String>)> {
    let base = CuspidalDatum::new(g, "pi", "pi*").map_err(err)?;
    let report = sheaf::verify_main_identity(&base, d, g).map_err(err)?;
    Ok((report.ok, report.witness))
}

/// Local page degeneration at `s`; `None` means it holds.
#[pyfunction]
fn mle_degeneration(s: u32) -> PyResult<Option<String>> {
    let base = CuspidalDatum::self_dual(1, "pi");
    spectral::mle_degeneration(&base, s).map_err(err)
}

/// Global abutment check for a Steinberg or Speh component.
#[pyfunction]
fn global_abutment(s: u32, g: u32, case: &str) -> PyResult<Option<String>> {
    let case = match case {
        "sp" => LocalCase::Sp,
        "speh" => LocalCase::Speh,
        other => return Err(PyValueError::new_err(format!("unknown case {other:?}"))),
    };
    let base = CuspidalDatum::new(g, "pi", "pi*").map_err(err)?;
    spectral::global_ss_check(&base, s * g, g, case).map_err(err)
}

/// Run a verification suite; returns a list of check dictionaries.
#[pyfunction]
#[pyo3(signature = (suite = "all", max_s = 6))]
fn verify(py: Python<'_>, suite: &str, max_s: u32) -> PyResult<Vec<Py<PyDict>>> {
    let suite: Suite = suite.parse().map_err(err)?;
    let report = run_suite(suite, max_s);
    report
        .checks
        .iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("name", &c.name)?;
            d.set_item("params", &c.params)?;
            d.set_item("status", if c.status == Status::Pass { "pass" } else { "fail" })?;
            d.set_item("witness", c.witness.as_deref())?;
            Ok(d.unbind())
        })
        .collect()
}

/// Render a figure as text or SVG.
#[pyfunction]
#[pyo3(signature = (figure, format = "text", s = None, g = None, d = None))]
fn render_figure(
    figure: &str,
    format: &str,
    s: Option<u32>,
    g: Option<u32>,
    d: Option<u32>,
) -> PyResult<String> {
    let fig = render::build_figure(figure, s, g, d).map_err(err)?;
    match format {
        "text" => Ok(render::render_text(&fig)),
        "svg" => Ok(render::render_svg(&fig)),
        other => Err(PyValueError::new_err(format!("unknown format {other:?}"))),
    }
}

/// Cohomology table against a Steinberg or Speh component, as
/// `(degree, [(word, twist, coeff), …])` rows.
#[pyfunction]
fn cohomology_table(
    case: &str,
    g: u32,
    t: u32,
    s: u32,
    functor: &str,
) -> PyResult<Vec<(i64, Vec<(String, String, String)>)>> {
    let case = match case {
        "sp" => LocalCase::Sp,
        "speh" => LocalCase::Speh,
        other => return Err(PyValueError::new_err(format!("unknown case {other:?}"))),
    };
    let functor = match functor {
        "j!" => TableFunctor::JShriek,
        "j!*" => TableFunctor::JShriekStar,
        "Rj*" => TableFunctor::RjStar,
        other => return Err(PyValueError::new_err(format!("unknown functor {other:?}"))),
    };
    let base = CuspidalDatum::new(g, "pi", "pi*").map_err(err)?;
    let table = spectral::cohomology_table(&base, case, t, s, functor).map_err(err)?;
    Ok(table
        .iter()
        .map(|(&deg, entry)| (deg, rep_to_py(entry)))
        .collect())
}

#[pymodule]
fn mwcalc(_py: Python<'_>, m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWord>()?;
    m.add_function(wrap_pyfunction!(junction, m)?)?;
    m.add_function(wrap_pyfunction!(expand_product, m)?)?;
    m.add_function(wrap_pyfunction!(linear_extensions, m)?)?;
    m.add_function(wrap_pyfunction!(word_of_permutation, m)?)?;
    m.add_function(wrap_pyfunction!(standard_module, m)?)?;
    m.add_function(wrap_pyfunction!(telescope, m)?)?;
    m.add_function(wrap_pyfunction!(speh_of_steinberg, m)?)?;
    m.add_function(wrap_pyfunction!(speh_steinberg_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(mgr, m)?)?;
    m.add_function(wrap_pyfunction!(main_identity, m)?)?;
    m.add_function(wrap_pyfunction!(mle_degeneration, m)?)?;
    m.add_function(wrap_pyfunction!(global_abutment, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(render_figure, m)?)?;
    m.add_function(wrap_pyfunction!(cohomology_table, m)?)?;
    Ok(())
}
