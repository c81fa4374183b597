//! Python module `patrolling`. Networks and strategies travel as text in the
//! same formats the command line reads and writes. Rationals are strings
//! such as `"4/17"`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use patrol_core::decomposition::{subtree_decomposition, Core};
use patrol_core::engine::{evaluate as evaluate_core, Method};
use patrol_core::network::format::{format_point, parse_network};
use patrol_core::rational::{format_rational, parse_rational};
use patrol_core::strategy::{
    e_patrolling, game_value_tree, parse_attack, parse_patrol, tree_attack_strategy, write_attack, write_patrol,
};
use patrol_core::{Network, Rational};

fn err(e: patrol_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(s: &str) -> PyResult<Rational> {
    parse_rational(s).ok_or_else(|| PyValueError::new_err(format!("not a rational number: {s:?}")))
}

fn network(text: &str) -> PyResult<Network> {
    parse_network(text).map_err(err)
}

/// Subtree decomposition of a tree for attack duration `alpha`.
#[pyfunction]
fn decompose<'py>(py: Python<'py>, network_text: &str, alpha: &str) -> PyResult<Bound<'py, PyDict>> {
    let net = network(network_text)?;
    let d = subtree_decomposition(&net, rational(alpha)?).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("alpha_star", format_rational(&d.critical_alpha))?;
    out.set_item("local_root", format_point(&net, &d.local_root))?;
    out.set_item("lambda_e", format_rational(&d.extremity_measure))?;
    out.set_item("value", format_rational(&d.value()))?;
    let core = match &d.core {
        Core::Region(r) => format_rational(&r.measure()),
        Core::Point(_) => "0".to_string(),
    };
    out.set_item("core_measure", core)?;
    let parts: Vec<(String, String)> = d
        .components
        .iter()
        .map(|c| (format_point(&net, &c.root), format_rational(&c.measure)))
        .collect();
    out.set_item("components", parts)?;
    Ok(out)
}

/// Value of the game on a tree.
#[pyfunction]
fn tree_value(network_text: &str, alpha: &str) -> PyResult<String> {
    let net = network(network_text)?;
    Ok(format_rational(&game_value_tree(&net, rational(alpha)?).map_err(err)?))
}

#[pyfunction]
fn tree_attack(network_text: &str, alpha: &str, horizon: &str) -> PyResult<String> {
    let net = network(network_text)?;
    let a = tree_attack_strategy(&net, rational(alpha)?, rational(horizon)?).map_err(err)?;
    Ok(write_attack(&net, &a))
}

#[pyfunction]
fn e_patrol(network_text: &str, alpha: &str) -> PyResult<String> {
    let net = network(network_text)?;
    Ok(write_patrol(&net, &e_patrolling(&net, rational(alpha)?).map_err(err)?))
}

/// Interception probability; `method` is `"exact"` or `"mc"`.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (network_text, patrol_text, attack_text, alpha, method = "exact", trials = 100_000, seed = 0))]
fn evaluate<'py>(
    py: Python<'py>,
    network_text: &str,
    patrol_text: &str,
    attack_text: &str,
    alpha: &str,
    method: &str,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let net = network(network_text)?;
    let p = parse_patrol(&net, patrol_text).map_err(err)?;
    let a = parse_attack(&net, attack_text).map_err(err)?;
    let method = match method {
        "exact" => Method::Exact,
        "mc" => Method::MonteCarlo { trials, seed, jobs: None },
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    let r = py.detach(|| evaluate_core(&net, &p, &a, rational(alpha)?, method).map_err(err))?;
    let out = PyDict::new(py);
    out.set_item("probability", r.probability)?;
    out.set_item("exact", r.exact.map(|v| format_rational(&v)))?;
    out.set_item("ci_halfwidth", r.ci_halfwidth)?;
    Ok(out)
}

#[pymodule]
fn patrolling(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(tree_value, m)?)?;
    m.add_function(wrap_pyfunction!(tree_attack, m)?)?;
    m.add_function(wrap_pyfunction!(e_patrol, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    Ok(())
}
