//! Python bindings: posets, certified lattices, builders, valuations,
//! bi-valuations and the divisor lattice.

use std::collections::BTreeMap;
use std::sync::Arc;

use latcal_core as core;
use latcal_core::bivaluation::BiValuation as CoreBiValuation;
use latcal_core::builders::{Builder, SetFamily as CoreSetFamily};
use latcal_core::number_theory::DivisorLattice as CoreDivisorLattice;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

pyo3::create_exception!(latcal, LatcalError, PyValueError);

fn err(e: core::Error) -> PyErr {
    LatcalError::new_err(e.to_string())
}

#[pyclass(name = "RuleReport", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct RuleReport {
    rule: String,
    tuples_checked: usize,
    max_residual: f64,
    tolerance: f64,
    passed: bool,
    witness: Option<Vec<String>>,
}

impl From<core::RuleReport> for RuleReport {
    fn from(r: core::RuleReport) -> Self {
        RuleReport {
            rule: r.rule,
            tuples_checked: r.tuples_checked,
            max_residual: r.max_residual,
            tolerance: r.tolerance,
            passed: r.passed,
            witness: r.witness,
        }
    }
}

#[pymethods]
impl RuleReport {
    fn __bool__(&self) -> bool {
        self.passed
    }

    fn __repr__(&self) -> String {
        format!(
            "RuleReport(rule={:?}, passed={}, max_residual={:e}, tuples_checked={}, witness={:?})",
            self.rule, self.passed, self.max_residual, self.tuples_checked, self.witness
        )
    }
}

#[pyclass(name = "Poset", frozen)]
struct Poset(core::Poset);

#[pymethods]
impl Poset {
    #[new]
    #[pyo3(signature = (elements, covers = Vec::new()))]
    fn new(elements: Vec<String>, covers: Vec<(String, String)>) -> PyResult<Self> {
        core::Poset::from_covers(
            elements,
            covers.iter().map(|(a, b)| (a.as_str(), b.as_str())),
        )
        .map(Poset)
        .map_err(err)
    }

    /// Parses the plain-text document format.
    #[staticmethod]
    fn from_document(text: &str) -> PyResult<Self> {
        core::PosetDocument::parse(text)
            .and_then(|d| d.to_poset())
            .map(Poset)
            .map_err(err)
    }

    fn to_document(&self) -> String {
        core::PosetDocument::from_poset(&self.0).to_string()
    }

    #[pyo3(signature = (name = "poset"))]
    fn to_dot(&self, name: &str) -> String {
        core::dot::to_dot(&self.0, name)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn elements(&self) -> Vec<String> {
        self.0.ids().to_vec()
    }

    fn covers(&self) -> Vec<(String, String)> {
        let p = &self.0;
        p.covers()
            .iter()
            .map(|&(a, b)| (p.id(a).to_string(), p.id(b).to_string()))
            .collect()
    }

    fn dropped_covers(&self) -> Vec<(String, String)> {
        self.0.dropped_covers().to_vec()
    }

    fn leq(&self, x: &str, y: &str) -> PyResult<bool> {
        self.0.leq(x, y).map_err(err)
    }

    fn mobius(&self, x: &str, y: &str) -> PyResult<i64> {
        self.0.mobius(x, y).map_err(err)
    }

    fn classify(&self) -> &'static str {
        self.0.classify().as_str()
    }

    fn linear_extension(&self) -> Vec<String> {
        let p = &self.0;
        p.linear_extension()
            .iter()
            .map(|&e| p.id(e).to_string())
            .collect()
    }

    fn minimal_elements(&self) -> Vec<String> {
        let p = &self.0;
        p.minimal_elements()
            .into_iter()
            .map(|e| p.id(e).to_string())
            .collect()
    }

    fn maximal_elements(&self) -> Vec<String> {
        let p = &self.0;
        p.maximal_elements()
            .into_iter()
            .map(|e| p.id(e).to_string())
            .collect()
    }

    /// Certifies the poset as a lattice; raises `LatcalError` with the
    /// failing pair otherwise.
    fn certify(&self) -> PyResult<Lattice> {
        core::Lattice::certify(self.0.clone())
            .map(|l| Lattice(Arc::new(l)))
            .map_err(|d| {
                let why = d.failure.map(|f| f.describe()).unwrap_or_default();
                LatcalError::new_err(format!("not a lattice: {why}"))
            })
    }

    fn is_lattice(&self) -> bool {
        core::Lattice::certify(self.0.clone()).is_ok()
    }

    fn __repr__(&self) -> String {
        format!(
            "Poset({} elements, {})",
            self.0.len(),
            self.0.classify().as_str()
        )
    }
}

#[pyclass(name = "Lattice", frozen)]
struct Lattice(Arc<core::Lattice>);

#[pymethods]
impl Lattice {
    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn elements(&self) -> Vec<String> {
        self.0.poset().ids().to_vec()
    }

    fn poset(&self) -> Poset {
        Poset(self.0.poset().clone())
    }

    #[getter]
    fn bottom(&self) -> String {
        self.0.id(self.0.bottom()).to_string()
    }

    #[getter]
    fn top(&self) -> String {
        self.0.id(self.0.top()).to_string()
    }

    fn leq(&self, x: &str, y: &str) -> PyResult<bool> {
        self.0.poset().leq(x, y).map_err(err)
    }

    fn join(&self, x: &str, y: &str) -> PyResult<String> {
        self.0.join_by_id(x, y).map(str::to_string).map_err(err)
    }

    fn meet(&self, x: &str, y: &str) -> PyResult<String> {
        self.0.meet_by_id(x, y).map(str::to_string).map_err(err)
    }

    fn is_distributive(&self) -> bool {
        self.0.is_distributive()
    }

    fn distributivity_witness(&self) -> Option<Vec<String>> {
        self.0
            .distributivity_witness()
            .map(|w| w.iter().map(|&e| self.0.id(e).to_string()).collect())
    }

    fn join_irreducibles(&self) -> Vec<String> {
        let l = &self.0;
        l.join_irreducibles()
            .into_iter()
            .map(|e| l.id(e).to_string())
            .collect()
    }

    fn meet_irreducibles(&self) -> Vec<String> {
        let l = &self.0;
        l.meet_irreducibles()
            .into_iter()
            .map(|e| l.id(e).to_string())
            .collect()
    }

    #[pyo3(signature = (name = "lattice"))]
    fn to_dot(&self, name: &str) -> String {
        core::dot::to_dot(self.0.poset(), name)
    }

    fn __repr__(&self) -> String {
        format!(
            "Lattice({} elements, bottom={:?}, top={:?})",
            self.0.len(),
            self.0.id(self.0.bottom()),
            self.0.id(self.0.top())
        )
    }
}

/// A family of sets ordered by inclusion, such as downsets or subsets.
#[pyclass(name = "SetFamily", frozen)]
struct SetFamily(CoreSetFamily);

#[pymethods]
impl SetFamily {
    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn elements(&self) -> Vec<String> {
        self.0.poset.ids().to_vec()
    }

    fn members(&self) -> BTreeMap<String, Vec<String>> {
        let p = &self.0.poset;
        p.elements()
            .map(|e| (p.id(e).to_string(), self.0.members_of(e).to_vec()))
            .collect()
    }

    fn poset(&self) -> Poset {
        Poset(self.0.poset.clone())
    }

    fn is_lattice(&self) -> bool {
        self.0.lattice.is_some()
    }

    fn lattice(&self) -> PyResult<Lattice> {
        self.0
            .lattice()
            .map(|l| Lattice(Arc::new(l.clone())))
            .map_err(err)
    }
}

fn builder(max_elements: usize) -> Builder {
    Builder::with_max_elements(max_elements)
}

#[pyfunction]
#[pyo3(signature = (poset, include_empty = false, max_elements = core::DEFAULT_MAX_ELEMENTS))]
fn downsets(poset: &Poset, include_empty: bool, max_elements: usize) -> PyResult<SetFamily> {
    builder(max_elements)
        .downsets(&poset.0, include_empty)
        .map(SetFamily)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (states, max_elements = core::DEFAULT_MAX_ELEMENTS))]
fn powerset(states: Vec<String>, max_elements: usize) -> PyResult<SetFamily> {
    builder(max_elements)
        .powerset(&states)
        .map(SetFamily)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (statements, max_elements = core::DEFAULT_MAX_ELEMENTS))]
fn questions(statements: &Lattice, max_elements: usize) -> PyResult<SetFamily> {
    builder(max_elements)
        .questions(&statements.0)
        .map(SetFamily)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, max_elements = core::DEFAULT_MAX_ELEMENTS))]
fn partition_lattice(n: usize, max_elements: usize) -> PyResult<Lattice> {
    builder(max_elements)
        .partition_lattice(n)
        .map(|l| Lattice(Arc::new(l)))
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (left, right, max_elements = core::DEFAULT_MAX_ELEMENTS))]
fn product(left: &Lattice, right: &Lattice, max_elements: usize) -> PyResult<Lattice> {
    builder(max_elements)
        .product(&left.0, &right.0)
        .map(|p| Lattice(p.lattice))
        .map_err(err)
}

#[pyclass(name = "Valuation", frozen)]
struct Valuation(core::Valuation);

#[pymethods]
impl Valuation {
    /// The sum-rule valuation fixed by values on the join-irreducibles.
    #[staticmethod]
    fn extend(lattice: &Lattice, seed: BTreeMap<String, f64>) -> PyResult<Self> {
        core::Valuation::extend_from_irreducibles(Arc::clone(&lattice.0), seed)
            .map(Valuation)
            .map_err(err)
    }

    /// Explicit values for every element; the bottom may be omitted.
    #[staticmethod]
    fn from_values(lattice: &Lattice, values: BTreeMap<String, f64>) -> PyResult<Self> {
        core::Valuation::from_values(Arc::clone(&lattice.0), values)
            .map(Valuation)
            .map_err(err)
    }

    fn lattice(&self) -> Lattice {
        Lattice(Arc::clone(self.0.lattice()))
    }

    fn value(&self, x: &str) -> PyResult<f64> {
        self.0.value_of(x).map_err(err)
    }

    fn values(&self) -> BTreeMap<String, f64> {
        self.0.to_map()
    }

    fn is_monotone(&self) -> bool {
        self.0.is_monotone()
    }

    #[pyo3(signature = (tolerance = core::DEFAULT_TOLERANCE))]
    fn check_sum_rule(&self, tolerance: f64) -> RuleReport {
        self.0.check_sum_rule(tolerance).into()
    }

    #[pyo3(signature = (tolerance = core::DEFAULT_TOLERANCE))]
    fn check_monotone(&self, tolerance: f64) -> RuleReport {
        self.0.check_monotone(tolerance).into()
    }
}

#[pyclass(name = "BiValuation", frozen)]
struct BiValuation(CoreBiValuation);

#[pymethods]
impl BiValuation {
    #[new]
    fn new(valuation: &Valuation) -> Self {
        BiValuation(CoreBiValuation::new(valuation.0.clone()))
    }

    /// `w(x | y)`.
    fn __call__(&self, x: &str, y: &str) -> PyResult<f64> {
        self.0.bival_by_id(x, y).map_err(err)
    }

    fn bival(&self, x: &str, y: &str) -> PyResult<f64> {
        self.0.bival_by_id(x, y).map_err(err)
    }

    fn bayes(&self, m: &str, n: &str, t: &str) -> PyResult<f64> {
        self.0.bayes_by_id(m, n, t).map_err(err)
    }

    #[pyo3(signature = (tolerance = core::DEFAULT_TOLERANCE))]
    fn check_chain_rule(&self, tolerance: f64) -> RuleReport {
        self.0.check_chain_rule(tolerance).into()
    }

    #[pyo3(signature = (tolerance = core::DEFAULT_TOLERANCE))]
    fn check_context_product_rule(&self, tolerance: f64) -> RuleReport {
        self.0.check_context_product_rule(tolerance).into()
    }

    #[pyo3(signature = (tolerance = core::DEFAULT_TOLERANCE))]
    fn check_contextual_sum_rule(&self, tolerance: f64) -> PyResult<RuleReport> {
        self.0
            .check_contextual_sum_rule(tolerance)
            .map(Into::into)
            .map_err(err)
    }

    #[pyo3(signature = (tolerance = core::DEFAULT_TOLERANCE))]
    fn check_bayes(&self, tolerance: f64) -> RuleReport {
        self.0.check_bayes(tolerance).into()
    }
}

#[pyclass(name = "DivisorLattice", frozen)]
struct DivisorLattice(CoreDivisorLattice);

#[pymethods]
impl DivisorLattice {
    #[new]
    #[pyo3(signature = (n, max_elements = core::DEFAULT_MAX_ELEMENTS))]
    fn new(n: u64, max_elements: usize) -> PyResult<Self> {
        CoreDivisorLattice::new(n, max_elements)
            .map(DivisorLattice)
            .map_err(err)
    }

    #[getter]
    fn modulus(&self) -> u64 {
        self.0.modulus()
    }

    fn divisors(&self) -> Vec<u64> {
        self.0.divisors().to_vec()
    }

    fn lattice(&self) -> Lattice {
        Lattice(Arc::clone(self.0.lattice()))
    }

    fn lcm(&self, a: u64, b: u64) -> PyResult<u64> {
        self.0.lcm(a, b).map_err(err)
    }

    fn gcd(&self, a: u64, b: u64) -> PyResult<u64> {
        self.0.gcd(a, b).map_err(err)
    }

    /// `v(m) = ln m`, extended from the prime powers.
    fn log_valuation(&self) -> Valuation {
        Valuation(self.0.log_valuation().clone())
    }

    /// `d(m | n)`, the degree to which `n` is divisible by `m`.
    fn degree(&self, m: u64, n: u64) -> PyResult<f64> {
        self.0.divisibility_degree(m, n).map_err(err)
    }
}

#[pymodule]
fn latcal(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LatcalError", m.py().get_type::<LatcalError>())?;
    m.add("DEFAULT_TOLERANCE", core::DEFAULT_TOLERANCE)?;
    m.add("DEFAULT_MAX_ELEMENTS", core::DEFAULT_MAX_ELEMENTS)?;
    m.add_class::<Poset>()?;
    m.add_class::<Lattice>()?;
    m.add_class::<SetFamily>()?;
    m.add_class::<Valuation>()?;
    m.add_class::<BiValuation>()?;
    m.add_class::<DivisorLattice>()?;
    m.add_class::<RuleReport>()?;
    m.add_function(wrap_pyfunction!(downsets, m)?)?;
    m.add_function(wrap_pyfunction!(powerset, m)?)?;
    m.add_function(wrap_pyfunction!(questions, m)?)?;
    m.add_function(wrap_pyfunction!(partition_lattice, m)?)?;
    m.add_function(wrap_pyfunction!(product, m)?)?;
    Ok(())
}
