//! Python bindings. Results come back as plain Python objects (dicts,
//! lists, strings); field elements and forms are rendered as text in the
//! same syntax the parser accepts.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use oscu_core::algebra::{Field, SymForm};
use oscu_core::frames::{self, line_oracle, oracle_directions, AdaptedChart, FubiniTuple};
use oscu_core::geometry::{build_family, hilbert_of};
use oscu_core::moduli::{gauss_image_report, rank_phi};
use oscu_core::parser_io::{parse_field_element, parse_homogeneous, parse_minpoly, HypersurfaceSpec};
use oscu_core::{fixtures, Error};

create_exception!(oscu, OscuError, PyException);
create_exception!(oscu, ParseError, OscuError);
create_exception!(oscu, PreconditionError, OscuError);

fn to_py(e: Error) -> PyErr {
    match e.exit_code() {
        2 => ParseError::new_err(e.to_string()),
        3 => PreconditionError::new_err(e.to_string()),
        _ => OscuError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn to_dict<'py>(py: Python<'py>, v: impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(v).map_err(|e| OscuError::new_err(e.to_string()))?;
    json_to_py(py, &value)
}

fn field_from(text: &str) -> Result<Field, Error> {
    if text.trim() == "Q" {
        Ok(Field::Rational)
    } else {
        Field::extension(parse_minpoly(text)?)
    }
}

/// A hypersurface `F = 0` with a base point and an order `d`.
#[pyclass(name = "Hypersurface", module = "oscu", frozen)]
struct PyHypersurface {
    spec: HypersurfaceSpec,
}

#[pymethods]
impl PyHypersurface {
    /// `field` is `"Q"` or a minimal polynomial in `t`, e.g. `"t^3 - 2"`.
    #[new]
    #[pyo3(signature = (variables, polynomial, point, order = 3, field = "Q"))]
    fn new(variables: Vec<String>, polynomial: &str, point: Vec<String>, order: u32, field: &str) -> PyResult<Self> {
        let field = field_from(field).map_err(to_py)?;
        let f = parse_homogeneous(polynomial, &variables, &field).map_err(|e| to_py(e.into()))?;
        let point = point
            .iter()
            .map(|c| parse_field_element(c, &field))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| to_py(e.into()))?;
        let spec = HypersurfaceSpec::new(variables, f, field, point, order).map_err(to_py)?;
        Ok(Self { spec })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { spec: HypersurfaceSpec::from_json(text).map_err(to_py)? })
    }

    fn to_json(&self) -> String {
        self.spec.to_json()
    }

    #[staticmethod]
    #[pyo3(signature = (order = 3))]
    fn det3(order: u32) -> PyResult<Self> {
        Ok(Self { spec: fixtures::det3(order).map_err(to_py)? })
    }

    #[staticmethod]
    #[pyo3(signature = (w1, w4, w7, order = 3))]
    fn perm3(w1: i64, w4: i64, w7: i64, order: u32) -> PyResult<Self> {
        let point = fixtures::perm3_point(w1, w4, w7)
            .ok_or_else(|| PreconditionError::new_err("w1 = -1 gives no normalized point"))?;
        Ok(Self { spec: fixtures::perm3(point, order).map_err(to_py)? })
    }

    #[staticmethod]
    #[pyo3(signature = (n, order = 3))]
    fn fermat(n: usize, order: u32) -> PyResult<Self> {
        Ok(Self { spec: fixtures::fermat(n, order).map_err(to_py)? })
    }

    /// Forms `p_2, .., p_d` in `variables`; the hypersurface has degree
    /// `degree` (default `d`) and graph `p_2 + .. + p_d` at `[1:0:..:0]`.
    #[staticmethod]
    #[pyo3(signature = (variables, forms, degree = None, field = "Q"))]
    fn family(variables: Vec<String>, forms: Vec<String>, degree: Option<u32>, field: &str) -> PyResult<Self> {
        let field = field_from(field).map_err(to_py)?;
        let ps = parse_forms(&variables, &forms, &field, 2)?;
        let d = ps.len() as u32 + 1;
        Ok(Self { spec: build_family(&ps, degree.unwrap_or(d)).map_err(to_py)? })
    }

    fn with_point(&self, point: Vec<String>) -> PyResult<Self> {
        let point = point
            .iter()
            .map(|c| parse_field_element(c, &self.spec.field))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| to_py(e.into()))?;
        Ok(Self { spec: self.spec.with_point(point).map_err(to_py)? })
    }

    fn with_order(&self, order: u32) -> PyResult<Self> {
        Ok(Self { spec: self.spec.with_order(order).map_err(to_py)? })
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.spec.variables.clone()
    }

    #[getter]
    fn polynomial(&self) -> String {
        self.spec.polynomial.format_with(&self.spec.variables)
    }

    #[getter]
    fn point(&self) -> Vec<String> {
        self.spec.point.iter().map(ToString::to_string).collect()
    }

    #[getter]
    fn order(&self) -> u32 {
        self.spec.order
    }

    #[getter]
    fn dim(&self) -> usize {
        self.spec.dim()
    }

    #[getter]
    fn field(&self) -> String {
        self.spec.field.describe()
    }

    /// Fubini forms `F_2..F_{d+1}` at the base point.
    fn fubini(&self) -> PyResult<PyFubini> {
        let (chart, tuple) = frames::fubini_forms(&self.spec).map_err(to_py)?;
        Ok(PyFubini { chart, tuple })
    }

    fn __repr__(&self) -> String {
        format!(
            "Hypersurface({} = 0 over {}, point [{}], order {})",
            self.polynomial(),
            self.field(),
            self.point().join(":"),
            self.spec.order
        )
    }
}

fn parse_forms(variables: &[String], forms: &[String], field: &Field, first: u32) -> PyResult<Vec<SymForm>> {
    forms
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let p = parse_homogeneous(s, variables, field).map_err(|e| to_py(e.into()))?;
            SymForm::new(p, first + i as u32).map_err(to_py)
        })
        .collect()
}

/// Fubini forms in the adapted chart, with the rank computations on top.
#[pyclass(name = "FubiniForms", module = "oscu", frozen)]
struct PyFubini {
    chart: AdaptedChart,
    tuple: FubiniTuple,
}

#[pymethods]
impl PyFubini {
    #[getter]
    fn order(&self) -> u32 {
        self.tuple.order()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.tuple.dim()
    }

    /// `F_k` in `y1..yn`.
    fn form(&self, k: u32) -> PyResult<String> {
        if k < 2 || k > self.tuple.order() + 1 {
            return Err(PreconditionError::new_err(format!("F_{k} is not computed")));
        }
        Ok(self.tuple.form(k).to_y_string())
    }

    fn forms(&self) -> Vec<String> {
        self.tuple.forms().iter().map(SymForm::to_y_string).collect()
    }

    /// Tangent frame data: rule, tangent and normal coordinate indices.
    fn frame<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_dict(
            py,
            serde_json::json!({
                "rule": format!("{:?}", self.chart.rule()).to_lowercase(),
                "tangent_indices": self.chart.tangent_indices(),
                "normal_index": self.chart.normal_index(),
                "pivot_index": self.chart.pivot_index(),
            }),
        )
    }

    fn gauss_rank(&self) -> PyResult<usize> {
        Ok(frames::gauss_nondegenerate(self.tuple.form(2)).map_err(to_py)?.1)
    }

    /// `rank_tilde`, `rank_kernel`, `rank_union`, `intersection_dim`, `rank_phi`.
    fn rank<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let r = py.detach(|| rank_phi(&self.tuple)).map_err(to_py)?;
        to_dict(py, r)
    }

    fn gauss_image<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let g = py.detach(|| gauss_image_report(&self.tuple, None)).map_err(to_py)?;
        to_dict(py, g)
    }

    #[pyo3(signature = (samples = 200, seed = 0))]
    fn line_oracle<'py>(&self, py: Python<'py>, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let o = py
            .detach(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let dirs = oracle_directions(&self.tuple, &mut rng, samples)?;
                line_oracle(&self.chart, &self.tuple, &dirs)
            })
            .map_err(to_py)?;
        to_dict(py, o)
    }

    /// Hilbert function of `(F_2, .., F_{d+1})` through `max_degree`.
    #[pyo3(signature = (max_degree = None))]
    fn hilbert<'py>(&self, py: Python<'py>, max_degree: Option<u32>) -> PyResult<Bound<'py, PyAny>> {
        let gens: Vec<SymForm> = self.tuple.forms().iter().filter(|f| !f.is_zero()).cloned().collect();
        let top = self.tuple.order() + 1;
        let h = hilbert_of(&gens, self.tuple.dim(), max_degree.unwrap_or(top + 2), top + 3).map_err(to_py)?;
        to_dict(py, h)
    }
}

/// Hilbert function of the ideal of homogeneous `forms` through `max_degree`.
#[pyfunction]
#[pyo3(signature = (variables, forms, max_degree, field = "Q"))]
fn hilbert<'py>(
    py: Python<'py>,
    variables: Vec<String>,
    forms: Vec<String>,
    max_degree: u32,
    field: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let field = field_from(field).map_err(to_py)?;
    let gens = forms
        .iter()
        .map(|s| {
            let p = parse_homogeneous(s, &variables, &field).map_err(|e| to_py(e.into()))?;
            let d = p.homogeneous_degree().unwrap_or(0);
            SymForm::new(p, d).map_err(to_py)
        })
        .filter(|f| f.as_ref().map_or(true, |f| !f.is_zero()))
        .collect::<PyResult<Vec<_>>>()?;
    let limit = gens.iter().map(SymForm::degree).max().unwrap_or(0) + 3;
    to_dict(py, hilbert_of(&gens, variables.len(), max_degree, limit).map_err(to_py)?)
}

#[pymodule]
fn oscu(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHypersurface>()?;
    m.add_class::<PyFubini>()?;
    m.add_function(wrap_pyfunction!(hilbert, m)?)?;
    m.add("OscuError", m.py().get_type::<OscuError>())?;
    m.add("ParseError", m.py().get_type::<ParseError>())?;
    m.add("PreconditionError", m.py().get_type::<PreconditionError>())?;
    Ok(())
}
