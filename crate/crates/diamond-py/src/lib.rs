//! Python bindings for the `diamond` crate.
//!
//! Exposes the two network types with their bounds and achievable rates,
//! the waterfilling helper, and a seeded Monte Carlo entry point:
//!
//! ```python
//! import diamond_py as dp
//! net = dp.ScalarDiamond([1 + 0j, 1 + 0j], [1 + 0j, 1 + 0j], 1.0)
//! net.pdf_rate()        # 1.0
//! net.cutset_proxy()    # log2(3)
//! stats = dp.run_monte_carlo(n=10, snr=1000.0, dist="rayleigh",
//!                            trials=1000, seed=42)
//! stats["pdf"]["median"]
//! ```
//!
//! Channel coefficients are Python complex numbers; matrices are lists of
//! rows. Input problems raise `ValueError`; numerical invariant failures
//! raise `RuntimeError`.

use std::collections::HashMap;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use diamond::strategies::AfMode;
use diamond::Error;

fn to_py_err(err: Error) -> PyErr {
    match err {
        Error::Internal(_)
        | Error::NotHermitian { .. }
        | Error::NotPsd { .. }
        | Error::GapBoundViolated { .. }
        | Error::NegativeGap { .. } => PyRuntimeError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn matrix_from_rows(rows: &[Vec<Complex64>], what: &str) -> PyResult<DMatrix<Complex64>> {
    let nrows = rows.len();
    if nrows == 0 {
        return Err(PyValueError::new_err(format!("{what} has no rows")));
    }
    let ncols = rows[0].len();
    if ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(PyValueError::new_err(format!(
            "{what} rows must be nonempty and equally long"
        )));
    }
    Ok(DMatrix::from_row_iterator(
        nrows,
        ncols,
        rows.iter().flatten().copied(),
    ))
}

/// Single-antenna diamond network: `n` relays between one source and one
/// destination, coefficients `h_bc[i]` (source→relay) and `h_mac[i]`
/// (relay→destination), at a linear SNR.
#[pyclass(frozen)]
struct ScalarDiamond {
    inner: diamond::scalar::ScalarDiamond,
}

#[pymethods]
impl ScalarDiamond {
    #[new]
    fn new(h_bc: Vec<Complex64>, h_mac: Vec<Complex64>, snr: f64) -> PyResult<Self> {
        diamond::scalar::ScalarDiamond::new(h_bc, h_mac, snr)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn snr(&self) -> f64 {
        self.inner.snr()
    }

    #[getter]
    fn h_bc(&self) -> Vec<Complex64> {
        self.inner.h_bc().to_vec()
    }

    #[getter]
    fn h_mac(&self) -> Vec<Complex64> {
        self.inner.h_mac().to_vec()
    }

    /// Cutset-style capacity upper bound, in bits.
    fn cutset_proxy(&self) -> PyResult<f64> {
        diamond::scalar::cutset_proxy(&self.inner).map_err(to_py_err)
    }

    /// Noisy-network-coding achievable rate, in bits.
    fn nnc_rate(&self) -> PyResult<f64> {
        diamond::scalar::nnc_rate(&self.inner).map_err(to_py_err)
    }

    /// Partial-decode-and-forward achievable rate, in bits.
    fn pdf_rate(&self) -> PyResult<f64> {
        diamond::scalar::pdf_rate(&self.inner).map_err(to_py_err)
    }

    /// Best single-relay routing rate, in bits.
    fn best_relay_rate(&self) -> f64 {
        diamond::strategies::best_relay_rate(&self.inner)
    }

    /// Amplify-and-forward rate and per-relay scalings.
    /// `mode` is `"naive"` (full power) or `"optimized"`.
    fn af_rate(&self, mode: &str) -> PyResult<(f64, Vec<Complex64>)> {
        let mode = match mode {
            "naive" => AfMode::Naive,
            "optimized" => AfMode::Optimized,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown af mode `{other}` (expected `naive` or `optimized`)"
                )))
            }
        };
        let solution = diamond::strategies::af_rate(&self.inner, mode);
        Ok((solution.rate, solution.scalings))
    }

    /// Max over pdf, both af modes, and best relay.
    fn best_of(&self) -> PyResult<f64> {
        diamond::strategies::best_of(&self.inner).map_err(to_py_err)
    }

    /// `(g1, g2)`: worst-case gap guarantees for nnc and pdf.
    fn gap_constants(&self) -> (f64, f64) {
        let c = diamond::scalar::gap_constants_scalar(self.inner.n());
        (c.g1, c.g2)
    }

    /// A per-relay rate vector achieving the pdf sum rate.
    fn pdf_rate_point(&self) -> PyResult<Vec<f64>> {
        let (f, g) = diamond::scalar::pdf_set_functions(&self.inner).map_err(to_py_err)?;
        let point = diamond::polymatroid::find_max_rate_point(&f, &g).map_err(to_py_err)?;
        Ok(point.rates().to_vec())
    }

    fn __repr__(&self) -> String {
        format!(
            "ScalarDiamond(n={}, snr={})",
            self.inner.n(),
            self.inner.snr()
        )
    }
}

/// Multi-antenna diamond network. `h_bc[i]` is relay i's source→relay
/// matrix (nᵢ × n_s rows) and `h_mac[i]` its relay→destination matrix
/// (n_d × nᵢ rows), each given as a list of rows of complex numbers.
#[pyclass(frozen)]
struct MimoDiamond {
    inner: diamond::mimo::MimoDiamond,
}

#[pymethods]
impl MimoDiamond {
    #[new]
    fn new(
        n_s: usize,
        n_d: usize,
        h_bc: Vec<Vec<Vec<Complex64>>>,
        h_mac: Vec<Vec<Vec<Complex64>>>,
        snr: f64,
    ) -> PyResult<Self> {
        let bc = h_bc
            .iter()
            .enumerate()
            .map(|(i, rows)| matrix_from_rows(rows, &format!("h_bc[{i}]")))
            .collect::<PyResult<Vec<_>>>()?;
        let mac = h_mac
            .iter()
            .enumerate()
            .map(|(i, rows)| matrix_from_rows(rows, &format!("h_mac[{i}]")))
            .collect::<PyResult<Vec<_>>>()?;
        diamond::mimo::MimoDiamond::new(n_s, n_d, bc, mac, snr)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn n_s(&self) -> usize {
        self.inner.n_s()
    }

    #[getter]
    fn n_d(&self) -> usize {
        self.inner.n_d()
    }

    #[getter]
    fn antennas(&self) -> Vec<usize> {
        self.inner.antennas().to_vec()
    }

    #[getter]
    fn snr(&self) -> f64 {
        self.inner.snr()
    }

    /// Cutset-style capacity upper bound, in bits.
    fn cutset_proxy(&self) -> PyResult<f64> {
        diamond::mimo::mimo_cutset_proxy(&self.inner).map_err(to_py_err)
    }

    /// Noisy-network-coding achievable rate, in bits.
    fn nnc_rate(&self) -> PyResult<f64> {
        diamond::mimo::mimo_nnc_rate(&self.inner).map_err(to_py_err)
    }

    /// Partial-decode-and-forward achievable rate, in bits.
    fn pdf_rate(&self) -> PyResult<f64> {
        diamond::mimo::mimo_pdf_rate(&self.inner).map_err(to_py_err)
    }

    /// `(G1, G2)`: worst-case gap constants for nnc and pdf.
    fn gap_constants(&self) -> (f64, f64) {
        let c = diamond::mimo::mimo_gap_constants(
            self.inner.n_s(),
            self.inner.n_d(),
            self.inner.antennas(),
        );
        (c.g1, c.g2)
    }

    fn __repr__(&self) -> String {
        format!(
            "MimoDiamond(n={}, n_s={}, n_d={}, antennas={:?}, snr={})",
            self.inner.n(),
            self.inner.n_s(),
            self.inner.n_d(),
            self.inner.antennas(),
            self.inner.snr()
        )
    }
}

/// Worst-case loss of equal-power transmission vs waterfilling:
/// min(n_t, n_r)·log₂(1 + (n_t − 1)/min(n_t, n_r)) bits.
#[pyfunction]
fn lemma1_bound(n_t: usize, n_r: usize) -> PyResult<f64> {
    if n_t == 0 || n_r == 0 {
        return Err(PyValueError::new_err("antenna counts must be positive"));
    }
    Ok(diamond::mimo::lemma1_bound(n_t, n_r))
}

/// Waterfilling over channel modes `modes` (squared singular values) with
/// a total power budget. Returns `(allocation, water_level, capacity)`.
#[pyfunction]
fn waterfill(modes: Vec<f64>, budget: f64) -> PyResult<(Vec<f64>, f64, f64)> {
    let result = diamond::mimo::waterfill(&modes, budget).map_err(to_py_err)?;
    Ok((result.allocation, result.water_level, result.capacity))
}

/// Superposition-coding broadcast rates for power gains `gains` and power
/// fractions `powers` (fractions indexed by descending-gain rank; the
/// returned rates are in the original relay order).
#[pyfunction]
fn superposition_rates(gains: Vec<f64>, snr: f64, powers: Vec<f64>) -> PyResult<Vec<f64>> {
    let split = diamond::strategies::PowerSplit::new(powers).map_err(to_py_err)?;
    let rates =
        diamond::strategies::bc_superposition_rates(&gains, snr, &split).map_err(to_py_err)?;
    Ok(rates.rates().to_vec())
}

/// Seeded Monte Carlo gap study. Returns `{scheme: {"min", "max", "mean",
/// "median"}}` over `trials` random networks; `dist` is `"rayleigh"` or
/// `"shadow"`, and `schemes` defaults to pdf, af_opt, af_naive,
/// best_relay, best_of.
#[pyfunction]
#[pyo3(signature = (n, snr, dist, trials, seed, shadow_std_db=7.0, schemes=None))]
fn run_monte_carlo(
    n: usize,
    snr: f64,
    dist: &str,
    trials: usize,
    seed: u64,
    shadow_std_db: f64,
    schemes: Option<Vec<String>>,
) -> PyResult<HashMap<String, HashMap<String, f64>>> {
    let mut cfg = diamond::sim::SimConfig::new(
        n,
        snr,
        diamond::sim::ChannelModel::from_str(dist).map_err(to_py_err)?,
    );
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.shadow_std_db = shadow_std_db;
    if let Some(names) = schemes {
        cfg.schemes = names
            .iter()
            .map(|s| diamond::sim::Scheme::from_str(s).map_err(to_py_err))
            .collect::<PyResult<Vec<_>>>()?;
    }
    let samples = diamond::sim::run_monte_carlo(&cfg).map_err(to_py_err)?;
    let mut out = HashMap::new();
    for (k, scheme) in samples.schemes().iter().enumerate() {
        let stats = samples.stats(k);
        out.insert(
            scheme.name().to_string(),
            HashMap::from([
                ("min".to_string(), stats.min),
                ("max".to_string(), stats.max),
                ("mean".to_string(), stats.mean),
                ("median".to_string(), stats.median),
            ]),
        );
    }
    Ok(out)
}

/// Run one self-check suite (`polymatroid`, `edmonds`, `lemma1`,
/// `remark12`, or `reduction`). Returns `(passed, detail)`.
#[pyfunction]
#[pyo3(signature = (name, trials=None, n=None, seed=0))]
fn check_suite(
    name: &str,
    trials: Option<usize>,
    n: Option<usize>,
    seed: u64,
) -> PyResult<(bool, String)> {
    let cfg = diamond::checks::CheckConfig { trials, n, seed };
    let outcome = diamond::checks::run_suite(name, &cfg).map_err(to_py_err)?;
    Ok((outcome.passed, outcome.detail))
}

#[pymodule]
fn diamond_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<ScalarDiamond>()?;
    m.add_class::<MimoDiamond>()?;
    m.add_function(wrap_pyfunction!(lemma1_bound, m)?)?;
    m.add_function(wrap_pyfunction!(waterfill, m)?)?;
    m.add_function(wrap_pyfunction!(superposition_rates, m)?)?;
    m.add_function(wrap_pyfunction!(run_monte_carlo, m)?)?;
    m.add_function(wrap_pyfunction!(check_suite, m)?)?;
    Ok(())
}
