//! Slow reference implementations transcribed from the definitions.
//!
//! Nothing here shares evaluation code with [`crate::semantics`] or
//! [`crate::relmodel`]: disjunction enumerates all `3^|X|` covers
//! `X = Y ∪ Z`, and entailment materializes `min(⟦φ⟧, R)` as a set of teams.
//! Caps are fixed.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::relmodel::RelationalModel;
use crate::teams::{Team, Valuation};

pub const ORACLE_MAX_TEAM: usize = 8;
pub const ORACLE_MAX_STATES: usize = 64;

/// `X ⊨ φ` by the inductive definition with unrestricted covers.
pub fn oracle_eval_team(team: &Team, f: &Formula) -> Result<bool> {
    if team.len() > ORACLE_MAX_TEAM {
        return Err(Error::cap("oracle team size", ORACLE_MAX_TEAM, team.len()));
    }
    for v in f.vars() {
        team.domain().require(&v)?;
    }
    let members: Vec<Valuation> = team.valuations().collect();
    let refs: Vec<&Valuation> = members.iter().collect();
    sat(&refs, f)
}

fn sat(x: &[&Valuation], f: &Formula) -> Result<bool> {
    Ok(match f {
        Formula::PosLit(p) => {
            for v in x {
                if !v.value(p)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::NegLit(p) => {
            for v in x {
                if v.value(p)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Top => true,
        Formula::Bottom => x.is_empty(),
        Formula::And(l, r) => sat(x, l)? && sat(x, r)?,
        Formula::Or(l, r) => {
            // Each member goes to Y only, Z only, or both.
            let covers = 3usize.pow(x.len() as u32);
            for mut code in 0..covers {
                let mut y = Vec::new();
                let mut z = Vec::new();
                for &v in x {
                    match code % 3 {
                        0 => y.push(v),
                        1 => z.push(v),
                        _ => {
                            y.push(v);
                            z.push(v);
                        }
                    }
                    code /= 3;
                }
                if sat(&y, l)? && sat(&z, r)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Dep { args, target } => {
            for v in x {
                for w in x {
                    let mut agree = true;
                    for a in args {
                        if v.value(a)? != w.value(a)? {
                            agree = false;
                        }
                    }
                    if agree && v.value(target)? != w.value(target)? {
                        return Ok(false);
                    }
                }
            }
            true
        }
    })
}

/// `φ |~ ψ` iff `min(⟦φ⟧, R) ⊆ ⟦ψ⟧`, computed literally.
pub fn oracle_entails(model: &RelationalModel, phi: &Formula, psi: &Formula) -> Result<bool> {
    let n = model.state_count();
    if n > ORACLE_MAX_STATES {
        return Err(Error::cap("oracle state count", ORACLE_MAX_STATES, n));
    }
    // S(φ): states whose whole label satisfies φ
    let mut s_phi = Vec::new();
    for s in model.state_ids() {
        let mut all = true;
        for t in model.label(s) {
            if !oracle_eval_team(t, phi)? {
                all = false;
            }
        }
        if all {
            s_phi.push(s);
        }
    }
    // min(⟦φ⟧, R): interpretations labelling some minimal state of S(φ)
    let mut min_models: BTreeSet<Team> = BTreeSet::new();
    for &s in &s_phi {
        let dominated = s_phi
            .iter()
            .any(|&t| model.order_pairs().contains(&(t, s)));
        if !dominated {
            min_models.extend(model.label(s).iter().cloned());
        }
    }
    for t in &min_models {
        if !oracle_eval_team(t, psi)? {
            return Ok(false);
        }
    }
    Ok(true)
}
