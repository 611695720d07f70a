//! Python bindings: encode curve-file text, evaluate through the emulated
//! sampler, sweep against a reference, and read/write containers.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use texcurve::analysis::{sweep as run_sweep, ReferenceEval};
use texcurve::{
    container, encode_bicubic_rgba, encode_bilinear_patch, encode_dc_cubic, encode_dc_quadratic,
    encode_dc_zigzag, encode_rational, encode_seiler, eval_with, CurveFile, EncodeOptions,
    EncodedCurve, Error, EvalMode, Param, Point, RationalBase, SamplerConfig, SubtexelRounding,
    TexelFormat, ZigzagSeed,
};

fn py_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr>(s: &str) -> PyResult<T>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(py_err)
}

fn config(bits: u32, rounding: &str) -> PyResult<SamplerConfig> {
    SamplerConfig::new(bits, parse::<SubtexelRounding>(rounding)?).map_err(py_err)
}

fn mode_for(curve: &EncodedCurve, mode: Option<&str>) -> PyResult<EvalMode> {
    mode.map_or(Ok(EvalMode::default_for(curve.layout)), parse)
}

/// An encoded texel grid.
#[pyclass(name = "Curve", module = "texcurve_py")]
struct PyCurve {
    inner: EncodedCurve,
}

#[pymethods]
impl PyCurve {
    #[getter]
    fn layout(&self) -> String {
        self.inner.layout.to_string()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree
    }

    #[getter]
    fn segments(&self) -> usize {
        self.inner.segment_count
    }

    /// `(width, height, depth)`.
    #[getter]
    fn dims(&self) -> (usize, usize, usize) {
        self.inner.grid.dims()
    }

    #[getter]
    fn channels(&self) -> usize {
        self.inner.grid.channels()
    }

    /// Stored texel values, flattened x-fastest then channel-interleaved.
    #[getter]
    fn texels(&self) -> Vec<f64> {
        self.inner.grid.data().to_vec()
    }

    /// Evaluates at `t` (curves) or `(u, v)` (surfaces).
    #[pyo3(signature = (t=None, u=None, v=None, mode=None, bits=8, rounding="nearest"))]
    fn eval(
        &self,
        t: Option<f64>,
        u: Option<f64>,
        v: Option<f64>,
        mode: Option<&str>,
        bits: u32,
        rounding: &str,
    ) -> PyResult<Vec<f64>> {
        let param = match (t, u, v) {
            (Some(t), None, None) => Param::Curve(t),
            (None, Some(u), Some(v)) => Param::Surface(u, v),
            _ => return Err(PyValueError::new_err("pass either t or both u and v")),
        };
        let cfg = config(bits, rounding)?;
        let mode = mode_for(&self.inner, mode)?;
        let p = eval_with(&self.inner, mode, param, &cfg).map_err(py_err)?;
        Ok(p.as_slice().to_vec())
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyBytes>> {
        let bytes = container::to_bytes(&self.inner).map_err(py_err)?;
        Ok(PyBytes::new(py, &bytes))
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        let inner = container::from_bytes(data).map_err(py_err)?;
        Ok(Self { inner })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        container::save(&self.inner, path).map_err(py_err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let inner = container::load(path).map_err(py_err)?;
        Ok(Self { inner })
    }

    /// Human-readable `key: value` summary.
    fn sidecar(&self) -> String {
        container::sidecar(&self.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let (w, h, d) = self.inner.grid.dims();
        format!(
            "Curve(layout={}, degree={}, dims={w}x{h}x{d}, format={})",
            self.inner.layout,
            self.inner.degree,
            self.inner.grid.format()
        )
    }
}

fn zigzag_seed(seed: Option<Vec<f64>>, auto: bool, channels: usize) -> PyResult<ZigzagSeed> {
    Ok(match (seed, auto) {
        (Some(_), true) => return Err(PyValueError::new_err("seed and auto_seed are exclusive")),
        (None, false) => ZigzagSeed::Default,
        (None, true) => ZigzagSeed::MinimizeExcursion,
        (Some(v), false) if v.len() == 1 => ZigzagSeed::Value(Point::splat(v[0], channels)),
        (Some(v), false) => ZigzagSeed::Value(Point::new(&v).map_err(py_err)?),
    })
}

/// Encodes curve-file text into `layout`
/// (`dc`, `zigzag`, `seiler`, `patch`, `bicubic`, `rational`).
#[pyfunction]
#[pyo3(signature = (text, layout, format="f32", rescale=false, seed=None, auto_seed=false, rational_base="seiler"))]
fn encode(
    text: &str,
    layout: &str,
    format: &str,
    rescale: bool,
    seed: Option<Vec<f64>>,
    auto_seed: bool,
    rational_base: &str,
) -> PyResult<PyCurve> {
    let file = CurveFile::parse(text).map_err(py_err)?;
    let opts = EncodeOptions {
        format: parse::<TexelFormat>(format)?,
        rescale,
    };
    let inner = match layout {
        "dc" => {
            let poly = file.polygon().map_err(py_err)?;
            match poly.degree() {
                2 => encode_dc_quadratic(&poly, &opts),
                3 => encode_dc_cubic(&poly, &opts),
                degree => Err(Error::UnsupportedDegree {
                    degree,
                    limit: "de Casteljau layouts hold quadratics and cubics",
                }),
            }
        }
        "zigzag" => {
            let seed = zigzag_seed(seed, auto_seed, file.channels)?;
            file.chain().and_then(|c| encode_dc_zigzag(&c, seed, &opts))
        }
        "seiler" => file.polygon().and_then(|p| encode_seiler(&p, &opts)),
        "patch" => file.net().and_then(|n| encode_bilinear_patch(&n, &opts)),
        "bicubic" => file.net().and_then(|n| encode_bicubic_rgba(&n, &opts)),
        "rational" => {
            let base = match rational_base {
                "seiler" => RationalBase::Seiler,
                "dc" => RationalBase::DeCasteljau,
                other => return Err(PyValueError::new_err(format!("unknown rational base `{other}`"))),
            };
            let weights = file
                .weights
                .clone()
                .ok_or_else(|| PyValueError::new_err("rational layout needs a `weights` line"))?;
            file.polygon().and_then(|p| encode_rational(&p, &weights, base, &opts))
        }
        other => return Err(PyValueError::new_err(format!("unknown layout `{other}`"))),
    }
    .map_err(py_err)?;
    Ok(PyCurve { inner })
}

/// Sweeps `curve` against the full-precision curve in `text`.
///
/// Returns a dict with per-channel `max`, `mean`, `rms` lists and the
/// `csv` report.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (curve, text, mode=None, reference="bernstein", bits=8, rounding="nearest", samples=1024))]
fn sweep<'py>(
    py: Python<'py>,
    curve: &PyCurve,
    text: &str,
    mode: Option<&str>,
    reference: &str,
    bits: u32,
    rounding: &str,
    samples: usize,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let file = CurveFile::parse(text).map_err(py_err)?;
    let source = file.source(curve.inner.layout).map_err(py_err)?;
    let cfg = config(bits, rounding)?;
    let mode = mode_for(&curve.inner, mode)?;
    let reference = parse::<ReferenceEval>(reference)?;
    let report = py
        .detach(|| run_sweep(&curve.inner, &source, reference, mode, &cfg, samples))
        .map_err(py_err)?;
    let out = pyo3::types::PyDict::new(py);
    out.set_item("max", &report.stats.max)?;
    out.set_item("mean", &report.stats.mean)?;
    out.set_item("rms", &report.stats.rms)?;
    out.set_item("csv", report.to_csv())?;
    Ok(out)
}

#[pymodule]
fn texcurve_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurve>()?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
