use orderembed::class_field::{selectivity_report, OrderGenusSpec};
use orderembed::csa::AlgebraSpec;
use orderembed::extension::RelativeExtension;
use orderembed::{BaseField, Error, OkElem, ReportDocument, ScenarioConfig};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(pyorderembed, OrderEmbedError, PyException);

/// Raised with `(code, message, exit_code)`.
fn raise(e: Error) -> PyErr {
    OrderEmbedError::new_err((e.code(), e.to_string(), e.exit_code()))
}

/// Runs a scenario given as JSON and returns the report as JSON.
#[pyfunction]
fn run_scenario(py: Python<'_>, config_json: &str) -> PyResult<String> {
    let config = ScenarioConfig::from_json(config_json).map_err(raise)?;
    let doc = py.detach(|| orderembed::run(&config)).map_err(raise)?;
    Ok(doc.to_json())
}

#[pyfunction]
fn explain(report_json: &str) -> PyResult<String> {
    let doc = ReportDocument::from_json(report_json).map_err(raise)?;
    Ok(orderembed::explain(&doc))
}

type Form = (i64, i64, i64);

/// `(order, elementary divisors, reduced forms)` of the class group of discriminant `D`.
#[pyfunction]
fn class_group(discriminant: i64) -> PyResult<(usize, Vec<u64>, Vec<Form>)> {
    let k = BaseField::new(discriminant).map_err(raise)?;
    let g = orderembed::class_group(&k);
    let forms = g
        .elements()
        .iter()
        .map(|c| (c.form().a, c.form().b, c.form().c))
        .collect();
    Ok((g.order(), g.elementary_divisors().to_vec(), forms))
}

/// Selectivity for maximal orders of `M_n(k)`; `min_poly` holds `(a, b)` for `a + b w`, constant term first.
#[pyfunction]
#[pyo3(signature = (discriminant, min_poly, bound = 1000))]
fn selectivity<'py>(
    py: Python<'py>,
    discriminant: i64,
    min_poly: Vec<(i64, i64)>,
    bound: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let report = py
        .detach(|| {
            let k = BaseField::new(discriminant)?;
            let f = min_poly.iter().map(|&(a, b)| OkElem::new(a, b)).collect();
            let ext = RelativeExtension::new(k, f)?;
            let spec = OrderGenusSpec::maximal(AlgebraSpec::matrix_algebra(k, ext.degree()));
            selectivity_report(&spec, &ext, bound)
        })
        .map_err(raise)?;
    let out = PyDict::new(py);
    out.set_item("genus_class_count", report.genus_class_count)?;
    out.set_item("selectivity_degree", report.selectivity_degree)?;
    out.set_item("embeddable_class_count", report.embeddable_class_count)?;
    out.set_item("ratio", (report.ratio.num, report.ratio.den))?;
    out.set_item("stabilized", report.norm.stabilized)?;
    Ok(out)
}

#[pymodule]
fn pyorderembed(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("OrderEmbedError", m.py().get_type::<OrderEmbedError>())?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(explain, m)?)?;
    m.add_function(wrap_pyfunction!(class_group, m)?)?;
    m.add_function(wrap_pyfunction!(selectivity, m)?)?;
    Ok(())
}
