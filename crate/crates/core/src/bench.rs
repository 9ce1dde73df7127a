//! Timing harness contrasting flat PL evaluation with the generic
//! dependence-logic engine as teams grow.
//!
//! The TPL workload evaluates random PL formulas (depth 5) on random teams
//! with the flat engine. The PDL workload uses the disjunction-heavy family
//! `dep(a) | dep(b)` on teams that realise all four value combinations of
//! `(a, b)`: such a team never splits into an `a`-constant and a
//! `b`-constant part, so the split search visits every subteam.

use std::hint::black_box;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::gen;
use crate::semantics::{self, Engine, Logic};
use crate::teams::{Domain, Team};

pub const BENCH_VARS: usize = 5;
pub const TPL_MAX_TEAM: usize = 32;
pub const PDL_MAX_TEAM: usize = semantics::DEFAULT_MAX_TEAM_SIZE;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub logic: Logic,
    pub max_team_size: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub logic: Logic,
    pub team_size: usize,
    pub formula_size: usize,
    pub median_ns: u64,
}

/// Per team size, the `(formula, team)` cases timed for that size.
pub type Workload = Vec<(usize, Vec<(Formula, Team)>)>;

fn bench_domain() -> Domain {
    let names: Vec<String> = (0..BENCH_VARS).map(|i| format!("x{i}")).collect();
    Domain::from_names(&names).expect("valid names")
}

fn check_config(config: &BenchConfig) -> Result<()> {
    let limit = match config.logic {
        Logic::Tpl => TPL_MAX_TEAM,
        Logic::Pdl => PDL_MAX_TEAM,
    };
    if config.max_team_size > limit {
        return Err(Error::cap("benchmark team size", limit, config.max_team_size));
    }
    if config.max_team_size == 0 || config.trials == 0 {
        return Err(Error::Domain("team size and trial count must be positive".into()));
    }
    Ok(())
}

/// Deterministic in `config.seed`.
pub fn workload(config: &BenchConfig) -> Result<Workload> {
    check_config(config)?;
    let domain = bench_domain();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = Vec::with_capacity(config.max_team_size);
    for size in 1..=config.max_team_size {
        let cases = (0..config.trials)
            .map(|_| match config.logic {
                Logic::Tpl => (
                    gen::random_formula(&mut rng, &domain, 5, false),
                    gen::random_team_of_size(&mut rng, &domain, size),
                ),
                Logic::Pdl => split_resistant_case(&mut rng, &domain, size),
            })
            .collect();
        out.push((size, cases));
    }
    Ok(out)
}

fn split_resistant_case<R: Rng>(rng: &mut R, domain: &Domain, size: usize) -> (Formula, Team) {
    let n = domain.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let (a, b) = (idx[0], idx[1]);
    let vars = domain.vars();
    let formula = Formula::or(
        Formula::dep(vec![], vars[a].clone()),
        Formula::dep(vec![], vars[b].clone()),
    );
    let (ba, bb) = (domain.bit(a), domain.bit(b));
    let mut codes: Vec<u64> = (0..domain.valuation_count()).collect();
    codes.shuffle(rng);
    // one member per (a, b) combination first, then arbitrary fillers
    let mut chosen = Vec::with_capacity(size);
    for combo in [(0, 0), (0, ba), (ba, 0), (ba, bb)] {
        let want = combo.0 | if combo.1 != 0 { bb } else { 0 };
        if let Some(&c) = codes.iter().find(|&&c| c & (ba | bb) == want) {
            chosen.push(c);
        }
    }
    chosen.truncate(size);
    for &c in &codes {
        if chosen.len() >= size {
            break;
        }
        if !chosen.contains(&c) {
            chosen.push(c);
        }
    }
    let team = Team::from_codes(domain, chosen).expect("codes in range");
    (formula, team)
}

fn time_case(engine: Engine, formula: &Formula, team: &Team) -> Result<u64> {
    engine.eval(team, formula)?;
    let mut reps = 1u32;
    loop {
        let start = Instant::now();
        for _ in 0..reps {
            black_box(engine.eval(black_box(team), black_box(formula))?);
        }
        let elapsed = start.elapsed().as_nanos() as u64;
        if elapsed >= 50_000 || reps >= 4096 {
            return Ok(elapsed / reps as u64);
        }
        reps *= 2;
    }
}

fn median(mut xs: Vec<u64>) -> u64 {
    xs.sort_unstable();
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / 2
    }
}

pub fn run(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    let engine = match config.logic {
        Logic::Tpl => Engine::Flat,
        Logic::Pdl => Engine::Generic,
    };
    let mut rows = Vec::new();
    for (size, cases) in workload(config)? {
        let mut times = Vec::with_capacity(cases.len());
        let mut sizes = Vec::with_capacity(cases.len());
        for (f, t) in &cases {
            times.push(time_case(engine, f, t)?);
            sizes.push(f.size() as u64);
        }
        rows.push(BenchRow {
            logic: config.logic,
            team_size: size,
            formula_size: median(sizes) as usize,
            median_ns: median(times),
        });
    }
    Ok(rows)
}
