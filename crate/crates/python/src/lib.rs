//! Python bindings: formulas, teams, relational and succinct models.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use klmteam::oracle::{oracle_entails, oracle_eval_team};
use klmteam::relmodel::CumulativityMode;
use klmteam::semantics::{self, Engine};
use klmteam::systemc::{check_system_c, conjunction_closure, induced_relation};
use klmteam::{Circuit, Domain, Logic, VerificationReport};

fn err(e: klmteam::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_formula(text: &str) -> PyResult<klmteam::Formula> {
    klmteam::Formula::parse(text).map_err(err)
}

fn parse_logic(text: &str) -> PyResult<Logic> {
    text.parse().map_err(err)
}

fn parse_formulas(texts: &[String]) -> PyResult<Vec<klmteam::Formula>> {
    texts.iter().map(|t| parse_formula(t)).collect()
}

#[pyclass(frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Formula(klmteam::Formula);

#[pymethods]
impl Formula {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_formula(text).map(Formula)
    }

    fn render(&self) -> String {
        self.0.render()
    }

    fn vars(&self) -> Vec<String> {
        self.0.vars().into_iter().map(|v| v.to_string()).collect()
    }

    fn is_pl(&self) -> bool {
        self.0.is_pl()
    }

    fn size(&self) -> usize {
        self.0.size()
    }

    fn depth(&self) -> usize {
        self.0.depth()
    }

    fn __str__(&self) -> String {
        self.0.render()
    }

    fn __repr__(&self) -> String {
        format!("Formula({:?})", self.0.render())
    }
}

#[pyclass(frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Team(klmteam::Team);

#[pymethods]
impl Team {
    /// `vars` is a comma-separated domain, `literal` a `;`-separated list
    /// of bitstrings in domain order.
    #[new]
    fn new(vars: &str, literal: &str) -> PyResult<Self> {
        let d = Domain::parse_list(vars).map_err(err)?;
        klmteam::Team::parse_literal(&d, literal).map(Team).map_err(err)
    }

    fn vars(&self) -> Vec<String> {
        self.0.domain().vars().iter().map(|v| v.to_string()).collect()
    }

    fn members(&self) -> Vec<String> {
        self.0.valuations().map(|v| v.to_string()).collect()
    }

    fn char_code(&self) -> PyResult<u64> {
        self.0.char_code().map_err(err)
    }

    /// `engine` is `generic`, `flat` or `oracle`.
    #[pyo3(signature = (formula, engine = "generic"))]
    fn satisfies(&self, formula: &str, engine: &str) -> PyResult<bool> {
        let f = parse_formula(formula)?;
        let engine: Engine = engine.parse().map_err(err)?;
        engine.eval(&self.0, &f).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_literal()
    }

    fn __repr__(&self) -> String {
        format!("Team({:?}, {:?})", self.0.domain().to_string(), self.0.to_literal())
    }
}

#[pyclass(frozen, get_all)]
struct Report {
    property: String,
    passed: bool,
    witnesses: Vec<String>,
    notes: Vec<String>,
}

impl From<VerificationReport> for Report {
    fn from(r: VerificationReport) -> Self {
        Report {
            property: r.property,
            passed: r.passed,
            witnesses: r.witnesses.iter().map(|w| w.to_string()).collect(),
            notes: r.notes,
        }
    }
}

#[pymethods]
impl Report {
    fn __bool__(&self) -> bool {
        self.passed
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(property={:?}, passed={}, witnesses={})",
            self.property,
            if self.passed { "True" } else { "False" },
            self.witnesses.len()
        )
    }
}

#[pyclass(frozen)]
struct RelationalModel(klmteam::RelationalModel);

#[pymethods]
impl RelationalModel {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        klmteam::RelationalModel::from_json(text).map(RelationalModel).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn states(&self) -> Vec<String> {
        self.0.state_ids().map(|s| self.0.state_name(s).to_string()).collect()
    }

    fn label(&self, state: &str) -> PyResult<Vec<Team>> {
        let s = self
            .0
            .state_by_name(state)
            .ok_or_else(|| PyValueError::new_err(format!("no state `{state}`")))?;
        Ok(self.0.label(s).iter().cloned().map(Team).collect())
    }

    /// Minimal states of `S(formula)`, by name.
    fn minimal_states(&self, formula: &str) -> PyResult<Vec<String>> {
        let f = parse_formula(formula)?;
        let states = self.0.states_of(&f).map_err(err)?;
        Ok(self.0.names_of(&self.0.minimal_states(&states)))
    }

    /// `engine` is `direct` or `oracle`.
    #[pyo3(signature = (phi, psi, engine = "direct"))]
    fn entails(&self, phi: &str, psi: &str, engine: &str) -> PyResult<bool> {
        let (phi, psi) = (parse_formula(phi)?, parse_formula(psi)?);
        match engine {
            "direct" => self.0.entails(&phi, &psi).map_err(err),
            "oracle" => oracle_entails(&self.0, &phi, &psi).map_err(err),
            other => Err(PyValueError::new_err(format!("unknown engine `{other}`"))),
        }
    }

    /// A minimal `phi`-state whose label does not satisfy `psi`.
    fn find_violation(&self, phi: &str, psi: &str) -> PyResult<Option<String>> {
        let (phi, psi) = (parse_formula(phi)?, parse_formula(psi)?);
        let v = self.0.find_violation(&phi, &psi, Engine::Generic).map_err(err)?;
        Ok(v.map(|s| self.0.state_name(s).to_string()))
    }

    /// Smoothness over `universe`, or over every state subset when it is
    /// omitted.
    #[pyo3(signature = (universe = None))]
    fn verify_cumulative(&self, universe: Option<Vec<String>>) -> PyResult<Report> {
        let report = match universe {
            Some(u) => {
                let u = parse_formulas(&u)?;
                self.0.verify_cumulative(CumulativityMode::Universe(&u))
            }
            None => self.0.verify_cumulative(CumulativityMode::AllSubsets),
        };
        report.map(Report::from).map_err(err)
    }

    fn verify_strong_cumulative(&self, universe: Vec<String>) -> PyResult<Report> {
        let u = parse_formulas(&universe)?;
        self.0.verify_strong_cumulative(&u).map(Report::from).map_err(err)
    }

    /// System C on the relation induced over `universe` after closing it
    /// under conjunction.
    #[pyo3(signature = (universe, logic = "pdl", closure_depth = 2))]
    fn check_system_c(&self, universe: Vec<String>, logic: &str, closure_depth: usize) -> PyResult<Report> {
        let logic = parse_logic(logic)?;
        let base = parse_formulas(&universe)?;
        let u = conjunction_closure(&base, self.0.domain(), logic, closure_depth).map_err(err)?;
        let r = induced_relation(&self.0, &u, logic).map_err(err)?;
        check_system_c(&r).map(Report::from).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("RelationalModel(states={})", self.0.state_count())
    }
}

#[pyclass(frozen)]
struct SuccinctModel(klmteam::SuccinctModel);

#[pymethods]
impl SuccinctModel {
    /// Label and order circuits given as netlist text.
    #[new]
    fn new(vars: &str, state_bits: usize, label: &str, order: &str) -> PyResult<Self> {
        let d = Domain::parse_list(vars).map_err(err)?;
        let label = Circuit::parse(label).map_err(err)?;
        let order = Circuit::parse(order).map_err(err)?;
        klmteam::SuccinctModel::new(d, state_bits, label, order)
            .map(SuccinctModel)
            .map_err(err)
    }

    fn validate(&self) -> PyResult<Report> {
        self.0.validate().map(Report::from).map_err(err)
    }

    /// Teams labelling `state` (a bitstring), or `None` when undefined.
    fn label(&self, state: &str) -> PyResult<Option<Vec<Team>>> {
        let bits: Vec<bool> = state.chars().map(|c| c == '1').collect();
        let teams = self.0.succ_label(&bits).map_err(err)?;
        Ok(teams.map(|ts| ts.into_iter().map(Team).collect()))
    }

    fn entails(&self, phi: &str, psi: &str) -> PyResult<bool> {
        self.0.entails(&parse_formula(phi)?, &parse_formula(psi)?).map_err(err)
    }

    fn find_violation(&self, phi: &str, psi: &str) -> PyResult<Option<String>> {
        self.0
            .find_violation(&parse_formula(phi)?, &parse_formula(psi)?, Engine::Generic)
            .map_err(err)
    }

    fn expand(&self) -> PyResult<RelationalModel> {
        self.0.expand().map(RelationalModel).map_err(err)
    }
}

/// `X ⊨ φ` for a team given as `vars` and a literal.
#[pyfunction]
#[pyo3(signature = (vars, team, formula, engine = "generic"))]
fn eval_team(vars: &str, team: &str, formula: &str, engine: &str) -> PyResult<bool> {
    Team::new(vars, team)?.satisfies(formula, engine)
}

#[pyfunction]
fn oracle_eval(vars: &str, team: &str, formula: &str) -> PyResult<bool> {
    let t = Team::new(vars, team)?;
    oracle_eval_team(&t.0, &parse_formula(formula)?).map_err(err)
}

/// Team-semantic entailment over all teams of the domain.
#[pyfunction]
#[pyo3(signature = (vars, phi, psi, logic = "pdl"))]
fn semantic_entails(vars: &str, phi: &str, psi: &str, logic: &str) -> PyResult<bool> {
    let d = Domain::parse_list(vars).map_err(err)?;
    semantics::semantic_entails(&parse_formula(phi)?, &parse_formula(psi)?, &d, parse_logic(logic)?)
        .map_err(err)
}

#[pymodule]
fn pyklmteam(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Formula>()?;
    m.add_class::<Team>()?;
    m.add_class::<Report>()?;
    m.add_class::<RelationalModel>()?;
    m.add_class::<SuccinctModel>()?;
    m.add_function(wrap_pyfunction!(eval_team, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_eval, m)?)?;
    m.add_function(wrap_pyfunction!(semantic_entails, m)?)?;
    Ok(())
}
