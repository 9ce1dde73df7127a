//! Explicit relational models `⟨S, ℓ, R⟩` whose states are labelled with
//! sets of teams.
//!
//! A pair `(a, b)` in the order means `a R b`: `a` is preferred to `b`.
//! Preferential models are the special case where every label holds a single
//! team. Labels may be empty; such a state satisfies every formula.
//!
//! [`RelationalModel::entails`] does not check that the model is cumulative;
//! run [`RelationalModel::verify_cumulative`] first when that is not known.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::formula::{Formula, Var};
use crate::report::{VerificationReport, Witness};
use crate::semantics::Engine;
use crate::teams::{Domain, Team};

/// Largest model accepted by the all-subsets smoothness check.
pub const ALL_SUBSETS_MAX_STATES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CumulativityMode<'a> {
    /// Smoothness of `S(φ)` for each supplied formula.
    Universe(&'a [Formula]),
    /// Smoothness of every subset of states. Implies the universe check for
    /// any universe.
    AllSubsets,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smoothness {
    pub smooth: bool,
    /// Non-minimal states with no minimal state below them.
    pub witnesses: Vec<StateId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalModel {
    domain: Domain,
    names: Vec<String>,
    labels: Vec<Vec<Team>>,
    order: Vec<(StateId, StateId)>,
    preds: Vec<Vec<usize>>,
}

impl RelationalModel {
    /// Builds a model from named states and named order pairs
    /// `(lower, higher)`. Duplicate teams in a label collapse.
    pub fn new(
        domain: Domain,
        states: Vec<(String, Vec<Team>)>,
        order: Vec<(String, String)>,
    ) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, (name, _)) in states.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Model(format!("duplicate state `{name}`")));
            }
        }
        let lookup = |name: &String| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::Model(format!("order refers to unknown state `{name}`")))
        };
        let order = order
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let (names, labels) = states.into_iter().unzip();
        Self::assemble(domain, names, labels, order)
    }

    /// Builds a model with states named `s0, s1, ...`.
    pub fn from_indexed(
        domain: Domain,
        labels: Vec<Vec<Team>>,
        order: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let names = (0..labels.len()).map(|i| format!("s{i}")).collect();
        Self::assemble(domain, names, labels, order)
    }

    fn assemble(
        domain: Domain,
        names: Vec<String>,
        labels: Vec<Vec<Team>>,
        order: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n = names.len();
        let mut clean_labels = Vec::with_capacity(n);
        for (name, label) in names.iter().zip(labels) {
            let mut set = BTreeSet::new();
            for t in label {
                if t.domain() != &domain {
                    return Err(Error::Model(format!(
                        "label of `{name}` has a team over a different domain"
                    )));
                }
                set.insert(t);
            }
            clean_labels.push(set.into_iter().collect());
        }
        let mut pairs = BTreeSet::new();
        for (a, b) in order {
            if a >= n || b >= n {
                return Err(Error::Model(format!("order pair ({a}, {b}) out of range")));
            }
            pairs.insert((a, b));
        }
        let mut preds = vec![Vec::new(); n];
        for &(a, b) in &pairs {
            preds[b].push(a);
        }
        Ok(RelationalModel {
            domain,
            names,
            labels: clean_labels,
            order: pairs.into_iter().map(|(a, b)| (StateId(a), StateId(b))).collect(),
            preds,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> + Clone {
        (0..self.names.len()).map(StateId)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.names[s.0]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name).map(StateId)
    }

    pub fn label(&self, s: StateId) -> &[Team] {
        &self.labels[s.0]
    }

    /// Order pairs `(lower, higher)`, sorted and deduplicated.
    pub fn order_pairs(&self) -> &[(StateId, StateId)] {
        &self.order
    }

    pub fn names_of<'a>(&self, states: impl IntoIterator<Item = &'a StateId>) -> Vec<String> {
        states.into_iter().map(|&s| self.names[s.0].clone()).collect()
    }

    fn check_state(&self, s: StateId) -> Result<()> {
        if s.0 < self.names.len() {
            Ok(())
        } else {
            Err(Error::Model(format!("unknown state {s}")))
        }
    }

    fn check_vars(&self, f: &Formula) -> Result<()> {
        for v in f.vars() {
            self.domain.require(&v)?;
        }
        Ok(())
    }

    /// Every team in `ℓ(s)` satisfies `f`.
    pub fn label_satisfies(&self, s: StateId, f: &Formula) -> Result<bool> {
        self.label_satisfies_with(s, f, Engine::Generic)
    }

    pub fn label_satisfies_with(&self, s: StateId, f: &Formula, engine: Engine) -> Result<bool> {
        self.check_state(s)?;
        self.check_vars(f)?;
        for t in &self.labels[s.0] {
            if !engine.eval(t, f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `S(φ)`.
    pub fn states_of(&self, f: &Formula) -> Result<BTreeSet<StateId>> {
        self.states_of_with(f, Engine::Generic)
    }

    pub fn states_of_with(&self, f: &Formula, engine: Engine) -> Result<BTreeSet<StateId>> {
        self.check_vars(f)?;
        let mut out = BTreeSet::new();
        for s in self.state_ids() {
            if self.label_satisfies_with(s, f, engine)? {
                out.insert(s);
            }
        }
        Ok(out)
    }

    fn membership(&self, subset: &BTreeSet<StateId>) -> Vec<bool> {
        let mut inside = vec![false; self.state_count()];
        for s in subset {
            inside[s.0] = true;
        }
        inside
    }

    /// States of `subset` with no `R`-predecessor inside `subset`.
    pub fn minimal_states(&self, subset: &BTreeSet<StateId>) -> BTreeSet<StateId> {
        let inside = self.membership(subset);
        let mut dominated = vec![false; self.state_count()];
        for &(a, b) in &self.order {
            if inside[a.0] && inside[b.0] {
                dominated[b.0] = true;
            }
        }
        subset.iter().copied().filter(|s| !dominated[s.0]).collect()
    }

    /// `min(⟦φ⟧, R)`: all teams labelling a minimal state of `S(φ)`.
    pub fn min_models(&self, f: &Formula) -> Result<BTreeSet<Team>> {
        let minimal = self.minimal_states(&self.states_of(f)?);
        Ok(minimal
            .iter()
            .flat_map(|s| self.labels[s.0].iter().cloned())
            .collect())
    }

    /// `φ |~ ψ`.
    pub fn entails(&self, phi: &Formula, psi: &Formula) -> Result<bool> {
        Ok(self.find_violation(phi, psi, Engine::Generic)?.is_none())
    }

    pub fn entails_with(&self, phi: &Formula, psi: &Formula, engine: Engine) -> Result<bool> {
        Ok(self.find_violation(phi, psi, engine)?.is_none())
    }

    /// A minimal state of `S(φ)` whose label does not satisfy `ψ`, if any.
    pub fn find_violation(
        &self,
        phi: &Formula,
        psi: &Formula,
        engine: Engine,
    ) -> Result<Option<StateId>> {
        self.check_vars(phi)?;
        self.check_vars(psi)?;
        let minimal = self.minimal_states(&self.states_of_with(phi, engine)?);
        for s in minimal {
            if !self.label_satisfies_with(s, psi, engine)? {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }

    pub fn is_smooth(&self, subset: &BTreeSet<StateId>) -> Smoothness {
        let inside = self.membership(subset);
        let minimal = self.minimal_states(subset);
        let mut is_min = vec![false; self.state_count()];
        for s in &minimal {
            is_min[s.0] = true;
        }
        let witnesses: Vec<StateId> = subset
            .iter()
            .copied()
            .filter(|s| !is_min[s.0])
            .filter(|s| !self.preds[s.0].iter().any(|&p| inside[p] && is_min[p]))
            .collect();
        Smoothness {
            smooth: witnesses.is_empty(),
            witnesses,
        }
    }

    fn empty_label_notes(&self, report: &mut VerificationReport) {
        let empty: Vec<&str> = self
            .state_ids()
            .filter(|&s| self.labels[s.0].is_empty())
            .map(|s| self.state_name(s))
            .collect();
        if !empty.is_empty() {
            report.note(format!(
                "states with empty labels satisfy every formula: {}",
                empty.join(", ")
            ));
        }
    }

    pub fn verify_cumulative(&self, mode: CumulativityMode<'_>) -> Result<VerificationReport> {
        let mut report = VerificationReport::new("cumulative");
        match mode {
            CumulativityMode::Universe(universe) => {
                for phi in universe {
                    let subset = self.states_of(phi)?;
                    let smooth = self.is_smooth(&subset);
                    if !smooth.smooth {
                        report.fail(Witness::NotSmooth {
                            formula: Some(phi.render()),
                            subset: self.names_of(&subset),
                            offending: self.names_of(&smooth.witnesses),
                        });
                    }
                }
            }
            CumulativityMode::AllSubsets => self.all_subsets_smooth(&mut report)?,
        }
        self.empty_label_notes(&mut report);
        Ok(report)
    }

    fn all_subsets_smooth(&self, report: &mut VerificationReport) -> Result<()> {
        const MAX_LISTED: usize = 32;
        let n = self.state_count();
        if n > ALL_SUBSETS_MAX_STATES {
            return Err(Error::cap("all-subsets state count", ALL_SUBSETS_MAX_STATES, n));
        }
        let pred_mask: Vec<u32> = self
            .preds
            .iter()
            .map(|ps| ps.iter().fold(0u32, |m, &p| m | 1 << p))
            .collect();
        let mut failures = 0usize;
        for subset in 0u32..(1u32 << n) {
            let members = (0..n).filter(|&i| subset >> i & 1 == 1);
            let minimal = members
                .clone()
                .filter(|&i| pred_mask[i] & subset == 0)
                .fold(0u32, |m, i| m | 1 << i);
            let offending: Vec<usize> = members
                .filter(|&i| minimal >> i & 1 == 0 && pred_mask[i] & minimal == 0)
                .collect();
            if offending.is_empty() {
                continue;
            }
            failures += 1;
            if failures <= MAX_LISTED {
                let ids = |it: &mut dyn Iterator<Item = usize>| {
                    it.map(|i| self.names[i].clone()).collect::<Vec<_>>()
                };
                report.fail(Witness::NotSmooth {
                    formula: None,
                    subset: ids(&mut (0..n).filter(|&i| subset >> i & 1 == 1)),
                    offending: ids(&mut offending.into_iter()),
                });
            }
        }
        if failures > MAX_LISTED {
            report.note(format!("{failures} non-smooth subsets, first {MAX_LISTED} listed"));
        }
        Ok(())
    }

    /// Asymmetry of `R` plus a unique minimal state of `S(φ)` for every
    /// universe formula. Formulas with empty `S(φ)` are noted, not failed.
    pub fn verify_strong_cumulative(&self, universe: &[Formula]) -> Result<VerificationReport> {
        let mut report = VerificationReport::new("strong cumulative");
        for &(a, b) in &self.order {
            if a <= b && self.order.binary_search(&(b, a)).is_ok() {
                report.fail(Witness::SymmetricPair {
                    first: self.state_name(a).to_string(),
                    second: self.state_name(b).to_string(),
                });
            }
        }
        for phi in universe {
            let subset = self.states_of(phi)?;
            if subset.is_empty() {
                report.note(format!("no state satisfies `{phi}`; uniqueness not judged"));
                continue;
            }
            let minimal = self.minimal_states(&subset);
            if minimal.len() != 1 {
                report.fail(Witness::MinimalNotUnique {
                    formula: phi.render(),
                    minimal: self.names_of(&minimal),
                });
            }
        }
        self.empty_label_notes(&mut report);
        Ok(report)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        file.into_model()
    }

    pub fn to_json(&self) -> String {
        let mut states = Map::new();
        for s in self.state_ids() {
            let teams: Vec<Value> = self.labels[s.0]
                .iter()
                .map(|t| {
                    Value::Array(
                        t.valuations()
                            .map(|v| {
                                let mut obj = Map::new();
                                for (i, var) in self.domain.vars().iter().enumerate() {
                                    obj.insert(var.to_string(), Value::from(v.get(i) as u8));
                                }
                                Value::Object(obj)
                            })
                            .collect(),
                    )
                })
                .collect();
            states.insert(self.names[s.0].clone(), Value::Array(teams));
        }
        let file = serde_json::json!({
            "vars": self.domain.vars().iter().map(|v| v.as_str()).collect::<Vec<_>>(),
            "states": states,
            "order": self.order.iter()
                .map(|&(a, b)| [self.state_name(a), self.state_name(b)])
                .collect::<Vec<_>>(),
        });
        serde_json::to_string_pretty(&file).expect("json values serialize")
    }
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    vars: Vec<Var>,
    states: Map<String, Value>,
    #[serde(default)]
    order: Vec<(String, String)>,
}

impl ModelFile {
    fn into_model(self) -> Result<RelationalModel> {
        let domain = Domain::new(self.vars)?;
        let mut states = Vec::with_capacity(self.states.len());
        for (name, value) in self.states {
            let raw: Vec<Vec<BTreeMap<String, u8>>> = serde_json::from_value(value)
                .map_err(|e| Error::Model(format!("state `{name}`: {e}")))?;
            let mut teams = Vec::with_capacity(raw.len());
            for team in raw {
                let mut codes = Vec::with_capacity(team.len());
                for val in team {
                    codes.push(valuation_code(&domain, &name, &val)?);
                }
                teams.push(Team::from_codes(&domain, codes)?);
            }
            states.push((name, teams));
        }
        RelationalModel::new(domain, states, self.order)
    }
}

fn valuation_code(domain: &Domain, state: &str, val: &BTreeMap<String, u8>) -> Result<u64> {
    if val.len() != domain.len() {
        return Err(Error::Model(format!(
            "state `{state}`: valuation {val:?} must assign exactly the variables {domain}"
        )));
    }
    let mut code = 0;
    for (i, var) in domain.vars().iter().enumerate() {
        match val.get(var.as_str()) {
            Some(0) => {}
            Some(1) => code |= domain.bit(i),
            Some(x) => {
                return Err(Error::Model(format!(
                    "state `{state}`: value {x} for `{var}` is not 0 or 1"
                )))
            }
            None => {
                return Err(Error::Model(format!(
                    "state `{state}`: valuation {val:?} must assign exactly the variables {domain}"
                )))
            }
        }
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    fn ids(xs: &[usize]) -> BTreeSet<StateId> {
        xs.iter().map(|&i| StateId(i)).collect()
    }

    fn unlabelled(n: usize, order: &[(usize, usize)]) -> RelationalModel {
        let d = Domain::parse_list("p").unwrap();
        RelationalModel::from_indexed(d, vec![vec![]; n], order.to_vec()).unwrap()
    }

    #[test]
    fn minimal_states_examples() {
        let free = unlabelled(3, &[]);
        assert_eq!(free.minimal_states(&ids(&[0, 1, 2])), ids(&[0, 1, 2]));
        let chain = unlabelled(3, &[(0, 1), (1, 2)]);
        assert_eq!(chain.minimal_states(&ids(&[0, 1, 2])), ids(&[0]));
        assert_eq!(chain.minimal_states(&ids(&[1, 2])), ids(&[1]));
        let cycle = unlabelled(2, &[(0, 1), (1, 0)]);
        assert!(cycle.minimal_states(&ids(&[0, 1])).is_empty());
    }

    #[test]
    fn smoothness_examples() {
        let cycle = unlabelled(2, &[(0, 1), (1, 0)]);
        let s = cycle.is_smooth(&ids(&[0, 1]));
        assert!(!s.smooth);
        assert_eq!(s.witnesses, vec![StateId(0), StateId(1)]);

        let chain = unlabelled(3, &[(0, 1), (1, 2)]);
        let s = chain.is_smooth(&ids(&[0, 1, 2]));
        assert!(!s.smooth);
        assert_eq!(s.witnesses, vec![StateId(2)]);

        let transitive = unlabelled(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(transitive.is_smooth(&ids(&[0, 1, 2])).smooth);
    }

    #[test]
    fn label_satisfaction() {
        let d = Domain::parse_list("p,q,r").unwrap();
        let x = Team::parse_literal(&d, "100;010").unwrap();
        let m = RelationalModel::from_indexed(d.clone(), vec![vec![x], vec![]], vec![]).unwrap();
        assert!(m.label_satisfies(StateId(0), &f("dep(r)")).unwrap());
        assert!(m.label_satisfies(StateId(1), &f("F")).unwrap());
        assert!(m.label_satisfies(StateId(2), &f("T")).is_err());
        assert_eq!(m.states_of(&f("T")).unwrap(), ids(&[0, 1]));

        let d1 = Domain::parse_list("p").unwrap();
        let m = RelationalModel::from_indexed(
            d1.clone(),
            vec![vec![Team::empty(&d1), Team::full(&d1)]],
            vec![],
        )
        .unwrap();
        assert!(!m.label_satisfies(StateId(0), &f("dep(p)")).unwrap());
    }

    #[test]
    fn chain_entailment_names_violating_state() {
        let d = Domain::parse_list("p").unwrap();
        let t0 = Team::parse_literal(&d, "0").unwrap();
        let t1 = Team::parse_literal(&d, "1").unwrap();
        let m = RelationalModel::from_indexed(d, vec![vec![t0], vec![t1]], vec![(0, 1)]).unwrap();
        assert_eq!(
            m.find_violation(&f("T"), &f("p"), Engine::Generic).unwrap(),
            Some(StateId(0))
        );
        assert!(m.entails(&f("T"), &f("~p")).unwrap());
        assert!(m.entails(&f("p"), &f("p")).unwrap());
        assert!(m.entails(&f("q"), &f("p")).is_err());
        assert_eq!(m.min_models(&f("T")).unwrap().len(), 1);
    }

    #[test]
    fn cumulativity_reports() {
        let free = unlabelled(3, &[]);
        assert!(free.verify_cumulative(CumulativityMode::AllSubsets).unwrap().passed);
        assert!(free
            .verify_cumulative(CumulativityMode::Universe(&[f("T")]))
            .unwrap()
            .passed);

        let d = Domain::parse_list("p").unwrap();
        let t = Team::parse_literal(&d, "1").unwrap();
        let cycle = RelationalModel::from_indexed(
            d,
            vec![vec![t.clone()], vec![t]],
            vec![(0, 1), (1, 0)],
        )
        .unwrap();
        let r = cycle
            .verify_cumulative(CumulativityMode::Universe(&[f("p")]))
            .unwrap();
        assert!(!r.passed);
        assert!(!r.witnesses.is_empty());
    }

    #[test]
    fn strong_cumulativity_reports() {
        let d = Domain::parse_list("p").unwrap();
        let t = Team::parse_literal(&d, "1").unwrap();
        let single = RelationalModel::from_indexed(d.clone(), vec![vec![t.clone()]], vec![]).unwrap();
        assert!(single.verify_strong_cumulative(&[f("p")]).unwrap().passed);

        let sym = RelationalModel::from_indexed(
            d.clone(),
            vec![vec![t.clone()], vec![t.clone()]],
            vec![(0, 1), (1, 0)],
        )
        .unwrap();
        let r = sym.verify_strong_cumulative(&[]).unwrap();
        assert!(!r.passed);
        assert_eq!(r.witnesses.len(), 1);

        let incomparable =
            RelationalModel::from_indexed(d, vec![vec![t.clone()], vec![t]], vec![]).unwrap();
        let r = incomparable.verify_strong_cumulative(&[f("p"), f("~p")]).unwrap();
        assert!(!r.passed);
        assert!(matches!(&r.witnesses[0], Witness::MinimalNotUnique { formula, .. } if formula == "p"));
        assert_eq!(r.notes.len(), 1);
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let text = r#"{
            "vars": ["p", "q"],
            "states": {
                "a": [[{"p": 1, "q": 0}, {"p": 1, "q": 0}], []],
                "b": []
            },
            "order": [["a", "b"]]
        }"#;
        let m = RelationalModel::from_json(text).unwrap();
        assert_eq!(m.state_count(), 2);
        assert_eq!(m.state_name(StateId(0)), "a");
        assert_eq!(m.label(StateId(0)).len(), 2);
        assert_eq!(m.label(StateId(0))[1].len(), 1);
        assert_eq!(RelationalModel::from_json(&m.to_json()).unwrap(), m);

        for bad in [
            r#"{"vars": ["p"], "states": {}, "extra": 1}"#,
            r#"{"vars": ["p"], "states": {"a": [[{"p": 2}]]}}"#,
            r#"{"vars": ["p"], "states": {"a": [[{"q": 1}]]}}"#,
            r#"{"vars": ["p"], "states": {"a": []}, "order": [["a", "z"]]}"#,
            r#"{"vars": ["p", "p"], "states": {}}"#,
            r#"{"vars": ["p"]}"#,
        ] {
            assert!(RelationalModel::from_json(bad).is_err(), "{bad}");
        }
    }
}
