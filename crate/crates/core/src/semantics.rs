//! Classical and team semantics.
//!
//! [`eval_team`] decides `X ⊨ φ` for PL formulas extended with dependence
//! atoms. Disjunction is decided by trying every split of the team into a
//! subteam and its complement, which is complete for downward-closed logics
//! and needs `2^|X|` candidates per node instead of `3^|X|` covers.
//! Intermediate results are memoized per (subformula, subteam).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::oracle;
use crate::teams::{self, Domain, Team, Valuation, DEFAULT_TEAM_ENUM_CAP};

/// Default largest team accepted by [`eval_team`].
pub const DEFAULT_MAX_TEAM_SIZE: usize = 20;

/// Underlying logic: dependence logic, or PL with team semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Logic {
    Pdl,
    Tpl,
}

impl FromStr for Logic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pdl" => Ok(Logic::Pdl),
            "tpl" => Ok(Logic::Tpl),
            _ => Err(Error::Domain(format!("unknown logic `{s}`"))),
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logic::Pdl => "pdl",
            Logic::Tpl => "tpl",
        })
    }
}

/// Team model-checking engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Split search with memoization; handles dependence atoms.
    Generic,
    /// Member-wise classical evaluation; PL only.
    Flat,
    /// Cover enumeration from [`crate::oracle`]; small teams only.
    Oracle,
}

impl FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(Engine::Generic),
            "flat" => Ok(Engine::Flat),
            "oracle" => Ok(Engine::Oracle),
            _ => Err(Error::Domain(format!("unknown engine `{s}`"))),
        }
    }
}

impl Engine {
    /// Engine matching the logic: flat for TPL, generic otherwise.
    pub fn for_logic(logic: Logic) -> Self {
        match logic {
            Logic::Pdl => Engine::Generic,
            Logic::Tpl => Engine::Flat,
        }
    }

    pub fn eval(self, team: &Team, f: &Formula) -> Result<bool> {
        match self {
            Engine::Generic => eval_team(team, f),
            Engine::Flat => eval_team_flat(team, f),
            Engine::Oracle => oracle::oracle_eval_team(team, f),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Node {
    Lit { bit: u64, positive: bool },
    Top,
    Bottom,
    And(usize, usize),
    Or(usize, usize),
    Dep { args: u64, target: u64 },
}

/// A formula with variables resolved to valuation-code bit masks.
#[derive(Debug)]
struct Compiled {
    nodes: Vec<Node>,
    root: usize,
}

impl Compiled {
    fn new(f: &Formula, domain: &Domain) -> Result<Self> {
        let mut nodes = Vec::with_capacity(f.size());
        let root = Self::push(f, domain, &mut nodes)?;
        Ok(Compiled { nodes, root })
    }

    fn push(f: &Formula, domain: &Domain, nodes: &mut Vec<Node>) -> Result<usize> {
        let node = match f {
            Formula::PosLit(v) => Node::Lit {
                bit: domain.bit(domain.require(v)?),
                positive: true,
            },
            Formula::NegLit(v) => Node::Lit {
                bit: domain.bit(domain.require(v)?),
                positive: false,
            },
            Formula::Top => Node::Top,
            Formula::Bottom => Node::Bottom,
            Formula::And(l, r) => {
                let l = Self::push(l, domain, nodes)?;
                let r = Self::push(r, domain, nodes)?;
                Node::And(l, r)
            }
            Formula::Or(l, r) => {
                let l = Self::push(l, domain, nodes)?;
                let r = Self::push(r, domain, nodes)?;
                Node::Or(l, r)
            }
            Formula::Dep { args, target } => {
                let mut mask = 0;
                for a in args {
                    mask |= domain.bit(domain.require(a)?);
                }
                Node::Dep {
                    args: mask,
                    target: domain.bit(domain.require(target)?),
                }
            }
        };
        nodes.push(node);
        Ok(nodes.len() - 1)
    }

    fn classical(&self, idx: usize, code: u64) -> Result<bool> {
        Ok(match self.nodes[idx] {
            Node::Lit { bit, positive } => (code & bit != 0) == positive,
            Node::Top => true,
            Node::Bottom => false,
            Node::And(l, r) => self.classical(l, code)? && self.classical(r, code)?,
            Node::Or(l, r) => self.classical(l, code)? || self.classical(r, code)?,
            Node::Dep { .. } => {
                return Err(Error::Domain(
                    "dependence atoms have no classical semantics".into(),
                ))
            }
        })
    }
}

/// `v ⊨ φ` for a PL formula under classical semantics.
pub fn eval_classical(v: &Valuation, f: &Formula) -> Result<bool> {
    require_pl(f)?;
    Compiled::new(f, v.domain())?.classical_root(v.code())
}

impl Compiled {
    fn classical_root(&self, code: u64) -> Result<bool> {
        self.classical(self.root, code)
    }
}

fn require_pl(f: &Formula) -> Result<()> {
    if f.is_pl() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "`{f}` contains a dependence atom; a PL formula is required"
        )))
    }
}

fn dep_holds(codes: impl Iterator<Item = u64> + Clone, args: u64, target: u64) -> bool {
    let mut rest = codes.clone();
    for a in codes {
        rest.next();
        for b in rest.clone() {
            let diff = a ^ b;
            if diff & args == 0 && diff & target != 0 {
                return false;
            }
        }
    }
    true
}

/// Whether every two members agreeing on `args` agree on `target`.
pub fn check_dep(team: &Team, args: &[crate::Var], target: &crate::Var) -> Result<bool> {
    let d = team.domain();
    let mut mask = 0;
    for a in args {
        mask |= d.bit(d.require(a)?);
    }
    let target = d.bit(d.require(target)?);
    Ok(dep_holds(team.codes(), mask, target))
}

struct SplitSearch<'a> {
    compiled: &'a Compiled,
    members: Vec<u64>,
    memo: HashMap<(usize, u32), bool>,
}

impl SplitSearch<'_> {
    fn codes(&self, mask: u32) -> impl Iterator<Item = u64> + Clone + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(move |(i, _)| mask >> i & 1 == 1)
            .map(|(_, &c)| c)
    }

    fn eval(&mut self, idx: usize, mask: u32) -> bool {
        match self.compiled.nodes[idx] {
            Node::Lit { bit, positive } => self.codes(mask).all(|c| (c & bit != 0) == positive),
            Node::Top => true,
            Node::Bottom => mask == 0,
            Node::Dep { args, target } => dep_holds(self.codes(mask), args, target),
            Node::And(l, r) => {
                if let Some(&hit) = self.memo.get(&(idx, mask)) {
                    return hit;
                }
                let res = self.eval(l, mask) && self.eval(r, mask);
                self.memo.insert((idx, mask), res);
                res
            }
            Node::Or(l, r) => {
                if let Some(&hit) = self.memo.get(&(idx, mask)) {
                    return hit;
                }
                let mut res = false;
                let mut sub = mask;
                loop {
                    if self.eval(l, sub) && self.eval(r, mask ^ sub) {
                        res = true;
                        break;
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & mask;
                }
                self.memo.insert((idx, mask), res);
                res
            }
        }
    }
}

/// `X ⊨ φ` under team semantics, with the default team-size cap.
pub fn eval_team(team: &Team, f: &Formula) -> Result<bool> {
    eval_team_capped(team, f, DEFAULT_MAX_TEAM_SIZE)
}

pub fn eval_team_capped(team: &Team, f: &Formula, max_team_size: usize) -> Result<bool> {
    let compiled = Compiled::new(f, team.domain())?;
    let limit = max_team_size.min(31);
    if team.len() > limit {
        return Err(Error::cap("team size", limit, team.len()));
    }
    let mut search = SplitSearch {
        compiled: &compiled,
        members: team.codes().collect(),
        memo: HashMap::new(),
    };
    let full = ((1u64 << team.len()) - 1) as u32;
    Ok(search.eval(compiled.root, full))
}

/// `X ⊨ φ` for PL formulas via flatness: every member satisfies `φ`
/// classically. Linear in `|X|·|φ|`.
pub fn eval_team_flat(team: &Team, f: &Formula) -> Result<bool> {
    require_pl(f)?;
    let compiled = Compiled::new(f, team.domain())?;
    for code in team.codes() {
        if !compiled.classical_root(code)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `⟦φ⟧^t` over all teams of a small domain, indexed by characteristic code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSet {
    domain: Domain,
    sat: Vec<bool>,
}

impl ModelSet {
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn contains_code(&self, code: u64) -> bool {
        self.sat[code as usize]
    }

    pub fn is_subset(&self, other: &ModelSet) -> bool {
        self.sat.iter().zip(&other.sat).all(|(&a, &b)| !a || b)
    }

    pub fn len(&self) -> usize {
        self.sat.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn intersection(&self, other: &ModelSet) -> ModelSet {
        ModelSet {
            domain: self.domain.clone(),
            sat: self.sat.iter().zip(&other.sat).map(|(&a, &b)| a && b).collect(),
        }
    }

    pub fn teams(&self) -> impl Iterator<Item = Team> + '_ {
        self.sat
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(c, _)| Team::from_char_code(&self.domain, c as u64).expect("code in range"))
    }
}

pub fn models_of(f: &Formula, domain: &Domain, logic: Logic, cap: usize) -> Result<ModelSet> {
    if logic == Logic::Tpl {
        require_pl(f)?;
    }
    let engine = Engine::for_logic(logic);
    let sat = teams::all_teams(domain, cap)?
        .map(|t| engine.eval(&t, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModelSet {
        domain: domain.clone(),
        sat,
    })
}

/// Every `(X, Y)` with `X ⊨ φ`, `Y ⊆ X` and `Y ⊭ φ`.
pub fn check_downward_closure(f: &Formula, domain: &Domain) -> Result<Vec<(Team, Team)>> {
    let models = models_of(f, domain, Logic::Pdl, DEFAULT_TEAM_ENUM_CAP)?;
    let mut out = Vec::new();
    for x in 0..models.sat.len() as u64 {
        if !models.contains_code(x) {
            continue;
        }
        let mut y = x;
        loop {
            if !models.contains_code(y) {
                out.push((
                    Team::from_char_code(domain, x)?,
                    Team::from_char_code(domain, y)?,
                ));
            }
            if y == 0 {
                break;
            }
            y = (y - 1) & x;
        }
    }
    Ok(out)
}

/// Every team `X` where `X ⊨ φ` differs from "every singleton of `X`
/// satisfies `φ`".
pub fn check_flatness(f: &Formula, domain: &Domain) -> Result<Vec<Team>> {
    let models = models_of(f, domain, Logic::Pdl, DEFAULT_TEAM_ENUM_CAP)?;
    let mut out = Vec::new();
    for x in 0..models.sat.len() as u64 {
        let pointwise = (0..64)
            .filter(|i| x >> i & 1 == 1)
            .all(|i| models.contains_code(1 << i));
        if pointwise != models.contains_code(x) {
            out.push(Team::from_char_code(domain, x)?);
        }
    }
    Ok(out)
}

/// `φ ⊨^t ψ` by brute force over all teams of `domain`.
pub fn semantic_entails(phi: &Formula, psi: &Formula, domain: &Domain, logic: Logic) -> Result<bool> {
    let a = models_of(phi, domain, logic, DEFAULT_TEAM_ENUM_CAP)?;
    let b = models_of(psi, domain, logic, DEFAULT_TEAM_ENUM_CAP)?;
    Ok(a.is_subset(&b))
}

pub fn semantic_equiv(phi: &Formula, psi: &Formula, domain: &Domain, logic: Logic) -> Result<bool> {
    let a = models_of(phi, domain, logic, DEFAULT_TEAM_ENUM_CAP)?;
    let b = models_of(psi, domain, logic, DEFAULT_TEAM_ENUM_CAP)?;
    Ok(a == b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::teams::all_valuations;

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    fn dom(s: &str) -> Domain {
        Domain::parse_list(s).unwrap()
    }

    fn example_team() -> Team {
        Team::parse_literal(&dom("p,q,r"), "100;010;010").unwrap()
    }

    #[test]
    fn classical_examples() {
        let d = dom("p,q");
        let v = |bits: &str| Team::parse_literal(&d, bits).unwrap().valuations().next().unwrap();
        assert!(eval_classical(&v("10"), &f("p & ~q")).unwrap());
        assert!(!eval_classical(&v("10"), &f("F")).unwrap());
        assert!(eval_classical(&v("01"), &f("p | q")).unwrap());
        assert!(eval_classical(&v("01"), &f("dep(p)")).is_err());
        assert!(matches!(
            eval_classical(&v("01"), &f("z")),
            Err(Error::UnknownVariable(_))
        ));
    }

    #[test]
    fn dependence_atoms_on_example_team() {
        let x = example_team();
        let var = |s| crate::Var::new(s).unwrap();
        assert!(check_dep(&x, &[var("p")], &var("q")).unwrap());
        assert!(check_dep(&x, &[], &var("r")).unwrap());
        assert!(!check_dep(&x, &[], &var("p")).unwrap());
        assert!(check_dep(&x, &[], &var("z")).is_err());
    }

    #[test]
    fn example_team_formulas() {
        let x = example_team();
        assert!(eval_team(&x, &f("dep(p;q)")).unwrap());
        assert!(eval_team(&x, &f("dep(r)")).unwrap());
        assert!(eval_team(&x, &f("dep(p) | dep(p)")).unwrap());
        assert!(!eval_team(&x, &f("dep(p)")).unwrap());
    }

    #[test]
    fn empty_team_satisfies_everything() {
        let d = dom("p,q");
        for s in ["F", "p & ~p", "dep(p;q)", "F | F"] {
            assert!(eval_team(&Team::empty(&d), &f(s)).unwrap());
        }
    }

    #[test]
    fn flat_engine() {
        let d = dom("p,q");
        let t = Team::parse_literal(&d, "10;01").unwrap();
        assert!(eval_team_flat(&t, &f("p | q")).unwrap());
        assert!(!eval_team_flat(&t, &f("p")).unwrap());
        assert!(eval_team_flat(&t, &f("dep(p)")).is_err());
    }

    #[test]
    fn team_size_cap() {
        let d = dom("a,b,c,d,e");
        let t = Team::full(&d);
        assert!(matches!(
            eval_team(&t, &f("a | b")),
            Err(Error::CapExceeded { .. })
        ));
        let t16 = Team::full(&dom("a,b,c,d"));
        assert!(eval_team_capped(&t16, &f("a | b"), 10).is_err());
        assert!(eval_team_capped(&t16, &f("a | ~a"), 16).unwrap());
    }

    #[test]
    fn downward_closure_and_flatness_checks() {
        assert!(check_downward_closure(&f("dep(p;q)"), &dom("p,q")).unwrap().is_empty());
        assert!(check_downward_closure(&f("p & q"), &dom("p,q")).unwrap().is_empty());
        assert!(check_downward_closure(&f("T"), &dom("p")).unwrap().is_empty());

        assert!(check_flatness(&f("p | ~q"), &dom("p,q,r")).unwrap().is_empty());
        assert!(check_flatness(&f("T"), &dom("p")).unwrap().is_empty());
        let witnesses = check_flatness(&f("dep(p)"), &dom("p")).unwrap();
        assert_eq!(witnesses, vec![Team::full(&dom("p"))]);
    }

    #[test]
    fn team_entailment() {
        let d1 = dom("p");
        assert!(semantic_entails(&f("p & q"), &f("p"), &dom("p,q"), Logic::Tpl).unwrap());
        assert!(semantic_entails(&f("dep(p)"), &f("dep(p) | dep(p)"), &d1, Logic::Pdl).unwrap());
        assert!(!semantic_entails(&f("dep(p) | dep(p)"), &f("dep(p)"), &d1, Logic::Pdl).unwrap());
        assert!(semantic_entails(&f("dep(p)"), &f("p"), &d1, Logic::Tpl).is_err());
        assert!(semantic_equiv(&f("p & q"), &f("q & p"), &dom("p,q"), Logic::Tpl).unwrap());
    }

    #[test]
    fn singleton_teams_match_classical() {
        let d = dom("p,q,r");
        let g = f("(p & ~q) | (r & q) | ~p");
        for v in all_valuations(&d) {
            let singleton = Team::from_valuations(&d, [v.clone()]).unwrap();
            assert_eq!(eval_team(&singleton, &g).unwrap(), eval_classical(&v, &g).unwrap());
        }
    }
}
