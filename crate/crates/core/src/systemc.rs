//! Finite entailment relations and their closure under System C
//! (Ref, LLE, RW, CM, Cut).
//!
//! Rules are checked on a finite universe of formulas. `⊨` and `≡` in the
//! rule premises are the team entailment and equivalence of the relation's
//! logic, decided by brute force over all teams of the domain. CM and Cut
//! need, for every `φ, ψ` in the universe, a member equivalent to `φ ∧ ψ`;
//! [`conjunction_closure`] extends a universe towards that.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::relmodel::RelationalModel;
use crate::report::{VerificationReport, Witness};
use crate::semantics::{self, Engine, Logic, ModelSet};
use crate::teams::{Domain, DEFAULT_TEAM_ENUM_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Ref,
    Lle,
    Rw,
    Cm,
    Cut,
}

impl Rule {
    pub const ALL: [Rule; 5] = [Rule::Ref, Rule::Lle, Rule::Rw, Rule::Cm, Rule::Cut];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Ref => "Ref",
            Rule::Lle => "LLE",
            Rule::Rw => "RW",
            Rule::Cm => "CM",
            Rule::Cut => "Cut",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown rule `{s}`")))
    }
}

/// `φ_i |~ φ_j` for each `(i, j)` in `pairs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntailmentRelation {
    domain: Domain,
    universe: Vec<Formula>,
    pairs: BTreeSet<(usize, usize)>,
    logic: Logic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleViolation {
    pub rule: Rule,
    pub premises: Vec<(usize, usize)>,
    pub conclusion: (usize, usize),
}

impl EntailmentRelation {
    pub fn new(
        domain: Domain,
        universe: Vec<Formula>,
        pairs: BTreeSet<(usize, usize)>,
        logic: Logic,
    ) -> Result<Self> {
        for f in &universe {
            for v in f.vars() {
                domain.require(&v)?;
            }
            if logic == Logic::Tpl && !f.is_pl() {
                return Err(Error::Domain(format!("`{f}` is not a PL formula")));
            }
        }
        if let Some(&(i, j)) = pairs
            .iter()
            .find(|&&(i, j)| i >= universe.len() || j >= universe.len())
        {
            return Err(Error::Domain(format!("pair ({i}, {j}) out of range")));
        }
        Ok(EntailmentRelation {
            domain,
            universe,
            pairs,
            logic,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn universe(&self) -> &[Formula] {
        &self.universe
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn logic(&self) -> Logic {
        self.logic
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i, j))
    }

    pub fn insert(&mut self, i: usize, j: usize) -> bool {
        assert!(i < self.universe.len() && j < self.universe.len());
        self.pairs.insert((i, j))
    }

    pub fn remove(&mut self, i: usize, j: usize) -> bool {
        self.pairs.remove(&(i, j))
    }

    pub fn violation_witness(&self, v: &RuleViolation) -> Witness {
        let pair = |(i, j): (usize, usize)| (self.universe[i].render(), self.universe[j].render());
        Witness::RuleViolation {
            rule: v.rule.name().to_string(),
            premises: v.premises.iter().map(|&p| pair(p)).collect(),
            conclusion: pair(v.conclusion),
        }
    }
}

/// The relation `|~_M` restricted to `universe`.
pub fn induced_relation(
    model: &RelationalModel,
    universe: &[Formula],
    logic: Logic,
) -> Result<EntailmentRelation> {
    let engine = Engine::for_logic(logic);
    let states: Vec<_> = universe
        .iter()
        .map(|f| model.states_of_with(f, engine))
        .collect::<Result<_>>()?;
    let mut pairs = BTreeSet::new();
    for (i, s_phi) in states.iter().enumerate() {
        let minimal = model.minimal_states(s_phi);
        for (j, s_psi) in states.iter().enumerate() {
            if minimal.is_subset(s_psi) {
                pairs.insert((i, j));
            }
        }
    }
    EntailmentRelation::new(model.domain().clone(), universe.to_vec(), pairs, logic)
}

fn model_sets(domain: &Domain, universe: &[Formula], logic: Logic) -> Result<Vec<ModelSet>> {
    universe
        .iter()
        .map(|f| semantics::models_of(f, domain, logic, DEFAULT_TEAM_ENUM_CAP))
        .collect()
}

/// Adds `φ ∧ ψ` for member pairs lacking an equivalent member, for up to
/// `depth` rounds. Members are never removed or reordered.
pub fn conjunction_closure(
    universe: &[Formula],
    domain: &Domain,
    logic: Logic,
    depth: usize,
) -> Result<Vec<Formula>> {
    let mut out = universe.to_vec();
    let mut models = model_sets(domain, universe, logic)?;
    for _ in 0..depth {
        let before = out.len();
        for i in 0..before {
            for j in 0..before {
                let meet = models[i].intersection(&models[j]);
                if !models.contains(&meet) {
                    out.push(Formula::and(out[i].clone(), out[j].clone()));
                    models.push(meet);
                }
            }
        }
        if out.len() == before {
            break;
        }
    }
    Ok(out)
}

/// `conj[i][j]` is the index of a member equivalent to `φ_i ∧ φ_j`,
/// preferring a syntactic match.
fn conjunction_table(r: &EntailmentRelation, models: &[ModelSet]) -> Result<Vec<Vec<usize>>> {
    let u = &r.universe;
    let mut table = vec![vec![0; u.len()]; u.len()];
    for i in 0..u.len() {
        for j in 0..u.len() {
            let syntactic = Formula::and(u[i].clone(), u[j].clone());
            let meet = models[i].intersection(&models[j]);
            table[i][j] = u
                .iter()
                .position(|f| *f == syntactic)
                .or_else(|| models.iter().position(|m| *m == meet))
                .ok_or_else(|| Error::NotConjunctionClosed(syntactic.render()))?;
        }
    }
    Ok(table)
}

struct RuleContext<'a> {
    r: &'a EntailmentRelation,
    models: Vec<ModelSet>,
    conj: Option<Vec<Vec<usize>>>,
}

impl<'a> RuleContext<'a> {
    fn new(r: &'a EntailmentRelation, need_conj: bool) -> Result<Self> {
        let models = model_sets(&r.domain, &r.universe, r.logic)?;
        let conj = if need_conj {
            Some(conjunction_table(r, &models)?)
        } else {
            None
        };
        Ok(RuleContext { r, models, conj })
    }

    #[allow(clippy::needless_range_loop)]
    fn check(&self, rule: Rule) -> Vec<RuleViolation> {
        let n = self.r.universe.len();
        let has = |i, j| self.r.contains(i, j);
        let mut out = Vec::new();
        let mut missing = |premises: Vec<(usize, usize)>, conclusion: (usize, usize)| {
            if !has(conclusion.0, conclusion.1) {
                out.push(RuleViolation {
                    rule,
                    premises,
                    conclusion,
                });
            }
        };
        match rule {
            Rule::Ref => {
                for i in 0..n {
                    missing(vec![], (i, i));
                }
            }
            Rule::Lle => {
                for &(i, k) in self.r.pairs.iter() {
                    for j in 0..n {
                        if self.models[i] == self.models[j] {
                            missing(vec![(i, k)], (j, k));
                        }
                    }
                }
            }
            Rule::Rw => {
                for &(k, i) in self.r.pairs.iter() {
                    for j in 0..n {
                        if self.models[i].is_subset(&self.models[j]) {
                            missing(vec![(k, i)], (k, j));
                        }
                    }
                }
            }
            Rule::Cm => {
                let conj = self.conj.as_ref().expect("conjunction table");
                for i in 0..n {
                    for j in 0..n {
                        if !has(i, j) {
                            continue;
                        }
                        for k in 0..n {
                            if has(i, k) {
                                missing(vec![(i, j), (i, k)], (conj[i][j], k));
                            }
                        }
                    }
                }
            }
            Rule::Cut => {
                let conj = self.conj.as_ref().expect("conjunction table");
                for i in 0..n {
                    for j in 0..n {
                        if !has(i, j) {
                            continue;
                        }
                        for k in 0..n {
                            if has(conj[i][j], k) {
                                missing(vec![(conj[i][j], k), (i, j)], (i, k));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Violations of one rule; empty when the relation is closed under it.
pub fn check_rule(r: &EntailmentRelation, rule: Rule) -> Result<Vec<RuleViolation>> {
    let ctx = RuleContext::new(r, matches!(rule, Rule::Cm | Rule::Cut))?;
    Ok(ctx.check(rule))
}

pub fn check_system_c(r: &EntailmentRelation) -> Result<VerificationReport> {
    let ctx = RuleContext::new(r, true)?;
    let mut report = VerificationReport::new("System C");
    for rule in Rule::ALL {
        for v in ctx.check(rule) {
            report.fail(r.violation_witness(&v));
        }
    }
    Ok(report)
}

/// Reads a universe file: one formula per line, `#` comments and blank
/// lines ignored. Syntax errors report the line.
pub fn parse_universe(text: &str) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f = Formula::parse(line).map_err(|e| match e {
            Error::Syntax { offset, message } => Error::Syntax {
                offset,
                message: format!("line {}: {message}", n + 1),
            },
            other => other,
        })?;
        out.push(f);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::teams::Team;

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    fn trivial_model(team: &str) -> RelationalModel {
        let d = Domain::parse_list("p,q").unwrap();
        let t = Team::parse_literal(&d, team).unwrap();
        RelationalModel::from_indexed(d, vec![vec![t]], vec![]).unwrap()
    }

    #[test]
    fn induced_relation_of_trivial_model() {
        let u = vec![f("T"), f("p")];
        let r = induced_relation(&trivial_model("10;11"), &u, Logic::Pdl).unwrap();
        assert!(r.contains(0, 0) && r.contains(1, 1) && r.contains(1, 0));
        assert!(r.contains(0, 1));
        let r = induced_relation(&trivial_model("00;11"), &u, Logic::Pdl).unwrap();
        assert!(!r.contains(0, 1));
        assert!(r.contains(1, 0));
    }

    #[test]
    fn ref_violation_is_reported() {
        let d = Domain::parse_list("p").unwrap();
        let r = EntailmentRelation::new(d, vec![f("p"), f("T")], [(1, 1)].into(), Logic::Pdl).unwrap();
        let v = check_rule(&r, Rule::Ref).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].conclusion, (0, 0));
    }

    #[test]
    fn full_relation_is_closed() {
        let d = Domain::parse_list("p,q").unwrap();
        let u = conjunction_closure(&[f("p"), f("dep(q)"), f("p | q")], &d, Logic::Pdl, 3).unwrap();
        let all = (0..u.len()).flat_map(|i| (0..u.len()).map(move |j| (i, j))).collect();
        let r = EntailmentRelation::new(d, u, all, Logic::Pdl).unwrap();
        assert!(check_system_c(&r).unwrap().passed);
    }

    #[test]
    fn empty_universe_passes() {
        let d = Domain::parse_list("p").unwrap();
        let r = EntailmentRelation::new(d, vec![], BTreeSet::new(), Logic::Pdl).unwrap();
        assert!(check_system_c(&r).unwrap().passed);
    }

    #[test]
    fn cm_requires_conjunction_closure() {
        let d = Domain::parse_list("p,q").unwrap();
        let r = EntailmentRelation::new(d, vec![f("p"), f("q")], BTreeSet::new(), Logic::Pdl).unwrap();
        assert!(matches!(
            check_rule(&r, Rule::Cm),
            Err(Error::NotConjunctionClosed(_))
        ));
        assert!(check_rule(&r, Rule::Rw).is_ok());
    }

    #[test]
    fn closure_adds_only_new_meets() {
        let d = Domain::parse_list("p,q").unwrap();
        let u = conjunction_closure(&[f("p"), f("q")], &d, Logic::Tpl, 2).unwrap();
        assert_eq!(u, vec![f("p"), f("q"), f("p & q")]);
    }

    #[test]
    fn trivial_model_relation_passes_and_mutation_fails() {
        let d = Domain::parse_list("p,q").unwrap();
        let u = conjunction_closure(&[f("p"), f("dep(p)"), f("q | ~q")], &d, Logic::Pdl, 3).unwrap();
        let mut r = induced_relation(&trivial_model("10;01"), &u, Logic::Pdl).unwrap();
        assert!(check_system_c(&r).unwrap().passed);
        r.remove(0, 0);
        assert!(!check_system_c(&r).unwrap().passed);
    }

    #[test]
    fn universe_file() {
        let u = parse_universe("# header\np & q\n\n dep(p) # constancy\n").unwrap();
        assert_eq!(u, vec![f("p & q"), f("dep(p)")]);
        assert!(matches!(
            parse_universe("p\n&q"),
            Err(Error::Syntax { message, .. }) if message.starts_with("line 2")
        ));
    }
}
