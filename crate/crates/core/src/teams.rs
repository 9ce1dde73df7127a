//! Valuations, teams and their canonical encodings.
//!
//! A valuation over a domain `[x1, ..., xn]` is stored as an n-bit code with
//! `x1` as the most significant bit, so the canonical enumeration of all
//! valuations is simply `0..2^n`. A team over a domain with at most 6
//! variables additionally has a characteristic code: bit `i` (least
//! significant first) is set iff valuation `i` is a member. Teams are
//! enumerated in ascending characteristic order, the empty team first.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::Var;

/// Largest domain for which valuation codes are handled at all.
pub const MAX_DOMAIN: usize = 32;
/// Largest domain for which teams have a `u64` characteristic code.
pub const MAX_CHAR_DOMAIN: usize = 6;
/// Default cap on `|N|` for exhaustive team enumeration.
pub const DEFAULT_TEAM_ENUM_CAP: usize = 4;

/// Ordered, duplicate-free, non-empty list of variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Domain(Arc<[Var]>);

impl Domain {
    pub fn new(vars: Vec<Var>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::Domain("domain must not be empty".into()));
        }
        if vars.len() > MAX_DOMAIN {
            return Err(Error::cap("domain size", MAX_DOMAIN, vars.len()));
        }
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(v) {
                return Err(Error::Domain(format!("duplicate variable `{v}` in domain")));
            }
        }
        Ok(Domain(vars.into()))
    }

    /// Parses a comma-separated variable list such as `p,q,r`.
    pub fn parse_list(text: &str) -> Result<Self> {
        let vars = text
            .split(',')
            .map(|s| Var::new(s.trim()))
            .collect::<Result<Vec<_>>>()?;
        Domain::new(vars)
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Domain::new(
            names
                .iter()
                .map(|s| Var::new(s.as_ref()))
                .collect::<Result<_>>()?,
        )
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, var: &Var) -> Option<usize> {
        self.0.iter().position(|v| v == var)
    }

    pub fn require(&self, var: &Var) -> Result<usize> {
        self.index_of(var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))
    }

    /// Number of valuations, `2^n`.
    pub fn valuation_count(&self) -> u64 {
        1u64 << self.len()
    }

    /// Bit mask selecting variable `index` inside a valuation code.
    pub fn bit(&self, index: usize) -> u64 {
        1u64 << (self.len() - 1 - index)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Valuation {
    domain: Domain,
    code: u64,
}

impl Valuation {
    pub fn from_code(domain: &Domain, code: u64) -> Result<Self> {
        if code >= domain.valuation_count() {
            return Err(Error::Domain(format!(
                "valuation code {code} out of range for {} variables",
                domain.len()
            )));
        }
        Ok(Valuation {
            domain: domain.clone(),
            code,
        })
    }

    pub fn from_bits(domain: &Domain, bits: &[bool]) -> Result<Self> {
        if bits.len() != domain.len() {
            return Err(Error::Domain(format!(
                "valuation has {} bits, domain has {} variables",
                bits.len(),
                domain.len()
            )));
        }
        let code = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        Ok(Valuation {
            domain: domain.clone(),
            code,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.domain.len()).map(|i| self.get(i)).collect()
    }

    /// Value of the variable at domain position `index`.
    pub fn get(&self, index: usize) -> bool {
        self.code & self.domain.bit(index) != 0
    }

    pub fn value(&self, var: &Var) -> Result<bool> {
        Ok(self.get(self.domain.require(var)?))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// All `2^n` valuations in canonical order.
pub fn all_valuations(domain: &Domain) -> Vec<Valuation> {
    (0..domain.valuation_count())
        .map(|code| Valuation {
            domain: domain.clone(),
            code,
        })
        .collect()
}

/// A set of valuations over a common domain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Team {
    domain: Domain,
    members: BTreeSet<u64>,
}

impl Team {
    pub fn empty(domain: &Domain) -> Self {
        Team {
            domain: domain.clone(),
            members: BTreeSet::new(),
        }
    }

    /// The team of all `2^n` valuations.
    pub fn full(domain: &Domain) -> Self {
        Team {
            domain: domain.clone(),
            members: (0..domain.valuation_count()).collect(),
        }
    }

    /// Builds a team from valuation codes; duplicates collapse.
    pub fn from_codes(domain: &Domain, codes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut team = Team::empty(domain);
        for code in codes {
            if code >= domain.valuation_count() {
                return Err(Error::Domain(format!("valuation code {code} out of range")));
            }
            team.members.insert(code);
        }
        Ok(team)
    }

    pub fn from_valuations(domain: &Domain, vals: impl IntoIterator<Item = Valuation>) -> Result<Self> {
        let mut team = Team::empty(domain);
        for v in vals {
            if &v.domain != domain {
                return Err(Error::Domain("valuation over a different domain".into()));
            }
            team.members.insert(v.code);
        }
        Ok(team)
    }

    /// Parses a literal such as `100;010` (bitstrings in domain order).
    /// The empty string is the empty team.
    pub fn parse_literal(domain: &Domain, text: &str) -> Result<Self> {
        let mut team = Team::empty(domain);
        let text = text.trim();
        if text.is_empty() {
            return Ok(team);
        }
        for chunk in text.split(';') {
            let chunk = chunk.trim();
            let bits = chunk
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::Domain(format!("bad bit `{c}` in team literal `{chunk}`"))),
                })
                .collect::<Result<Vec<_>>>()?;
            team.members.insert(Valuation::from_bits(domain, &bits)?.code);
        }
        Ok(team)
    }

    pub fn to_literal(&self) -> String {
        self.valuations()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn codes(&self) -> impl Iterator<Item = u64> + Clone + '_ {
        self.members.iter().copied()
    }

    pub fn valuations(&self) -> impl Iterator<Item = Valuation> + '_ {
        self.members.iter().map(|&code| Valuation {
            domain: self.domain.clone(),
            code,
        })
    }

    pub fn contains(&self, v: &Valuation) -> bool {
        v.domain == self.domain && self.members.contains(&v.code)
    }

    pub fn insert(&mut self, v: Valuation) -> Result<bool> {
        if v.domain != self.domain {
            return Err(Error::Domain("valuation over a different domain".into()));
        }
        Ok(self.members.insert(v.code))
    }

    pub fn is_subteam_of(&self, other: &Team) -> bool {
        self.domain == other.domain && self.members.is_subset(&other.members)
    }

    /// Subteam made of the members at the set bits of `mask`, in ascending
    /// member order.
    pub fn select(&self, mask: u64) -> Team {
        Team {
            domain: self.domain.clone(),
            members: self
                .members
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &c)| c)
                .collect(),
        }
    }

    /// Characteristic code; requires `|N| <= 6`.
    pub fn char_code(&self) -> Result<u64> {
        if self.domain.len() > MAX_CHAR_DOMAIN {
            return Err(Error::cap("domain size for team codes", MAX_CHAR_DOMAIN, self.domain.len()));
        }
        Ok(self.members.iter().fold(0u64, |acc, &c| acc | 1 << c))
    }

    pub fn from_char_code(domain: &Domain, code: u64) -> Result<Self> {
        if domain.len() > MAX_CHAR_DOMAIN {
            return Err(Error::cap("domain size for team codes", MAX_CHAR_DOMAIN, domain.len()));
        }
        let width = domain.valuation_count();
        if width < 64 && code >> width != 0 {
            return Err(Error::Domain(format!("team code {code} out of range")));
        }
        Ok(Team {
            domain: domain.clone(),
            members: (0..width).filter(|&i| code >> i & 1 == 1).collect(),
        })
    }
}

impl fmt::Display for Team {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_literal().replace(';', ", "))
    }
}

/// Characteristic vector of length `2^n`: bit `i` is set iff valuation `i`
/// is in the team.
pub fn team_to_bits(team: &Team) -> Vec<bool> {
    let mut bits = vec![false; team.domain.valuation_count() as usize];
    for c in team.codes() {
        bits[c as usize] = true;
    }
    bits
}

pub fn bits_to_team(domain: &Domain, bits: &[bool]) -> Result<Team> {
    let expected = domain.valuation_count();
    if bits.len() as u64 != expected {
        return Err(Error::Domain(format!(
            "team bit vector has length {}, expected {expected}",
            bits.len()
        )));
    }
    Ok(Team {
        domain: domain.clone(),
        members: bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u64)
            .collect(),
    })
}

/// Number of teams over `domain`, `2^(2^n)`, with an explicit size cap.
pub fn team_count(domain: &Domain, cap: usize) -> Result<u64> {
    if domain.len() > cap {
        return Err(Error::cap("team enumeration domain size", cap, domain.len()));
    }
    if domain.len() > 5 {
        return Err(Error::cap("team enumeration domain size", 5, domain.len()));
    }
    Ok(1u64 << domain.valuation_count())
}

/// Every team over `domain`, once each, in ascending characteristic order.
pub fn all_teams(domain: &Domain, cap: usize) -> Result<impl Iterator<Item = Team>> {
    let count = team_count(domain, cap)?;
    let domain = domain.clone();
    Ok((0..count).map(move |code| Team {
        domain: domain.clone(),
        members: (0..domain.valuation_count()).filter(|&i| code >> i & 1 == 1).collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dom(s: &str) -> Domain {
        Domain::parse_list(s).unwrap()
    }

    #[test]
    fn domain_rejects_empty_and_duplicates() {
        assert!(Domain::new(vec![]).is_err());
        assert!(Domain::parse_list("p,q,p").is_err());
        assert!(Domain::parse_list("p, q").is_ok());
    }

    #[test]
    fn canonical_valuation_order() {
        let strs = |d: &Domain| all_valuations(d).iter().map(|v| v.to_string()).collect::<Vec<_>>();
        assert_eq!(strs(&dom("p")), ["0", "1"]);
        assert_eq!(strs(&dom("p,q")), ["00", "01", "10", "11"]);
        assert_eq!(all_valuations(&dom("p,q,r")).len(), 8);
        let v = &all_valuations(&dom("p,q"))[2];
        assert!(v.value(&Var::new("p").unwrap()).unwrap());
        assert!(!v.value(&Var::new("q").unwrap()).unwrap());
    }

    #[test]
    fn canonical_team_order() {
        let d = dom("p");
        let teams: Vec<_> = all_teams(&d, 4).unwrap().map(|t| t.to_literal()).collect();
        assert_eq!(teams, ["", "0", "1", "0;1"]);
        assert_eq!(all_teams(&dom("p,q"), 4).unwrap().count(), 16);
        assert_eq!(all_teams(&dom("p,q,r"), 4).unwrap().count(), 256);
        assert!(all_teams(&dom("p,q"), 4).unwrap().next().unwrap().is_empty());
    }

    #[test]
    fn enumeration_cap_refuses() {
        let d = dom("a,b,c,d,e");
        assert!(matches!(all_teams(&d, 4), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn team_bits() {
        let d = dom("p,q");
        let t = Team::parse_literal(&d, "00;11").unwrap();
        assert_eq!(team_to_bits(&t), [true, false, false, true]);
        assert_eq!(team_to_bits(&Team::empty(&d)), [false; 4]);
        assert!(bits_to_team(&d, &[true, false]).is_err());
        for t in all_teams(&d, 4).unwrap() {
            assert_eq!(bits_to_team(&d, &team_to_bits(&t)).unwrap(), t);
        }
    }

    #[test]
    fn literal_collapses_duplicates() {
        let d = dom("p,q,r");
        let t = Team::parse_literal(&d, "100;010;010").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.to_literal(), "010;100");
        assert!(Team::parse_literal(&d, "10").is_err());
        assert!(Team::parse_literal(&d, "1x0").is_err());
        assert!(Team::parse_literal(&d, "").unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn char_code_round_trip(n in 1usize..=4, code in any::<u64>()) {
            let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let d = Domain::from_names(&names).unwrap();
            let width = d.valuation_count();
            let code = if width >= 64 { code } else { code & ((1u64 << width) - 1) };
            let t = Team::from_char_code(&d, code).unwrap();
            prop_assert_eq!(t.char_code().unwrap(), code);
            prop_assert_eq!(bits_to_team(&d, &team_to_bits(&t)).unwrap(), t.clone());
            // every subteam obtained by dropping members is a valid team
            for mask in 0..(1u64 << t.len().min(6)) {
                prop_assert!(t.select(mask).is_subteam_of(&t));
            }
        }
    }
}
