//! Seeded generators for formulas, teams, models and circuits, plus
//! exhaustive formula enumeration. Used by the benchmark and by tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::{Formula, Var};
use crate::relmodel::RelationalModel;
use crate::succinct::{Circuit, GateOp, SuccinctModel, Wire};
use crate::teams::{Domain, Team};

/// Atomic formulas over `domain`: literals, `T`, `F` and, when
/// `dependence` is set, every constancy atom and every `dep(a;b)` with
/// `a != b`.
pub fn atoms(domain: &Domain, dependence: bool) -> Vec<Formula> {
    let vars = domain.vars();
    let mut out = Vec::new();
    for v in vars {
        out.push(Formula::PosLit(v.clone()));
        out.push(Formula::NegLit(v.clone()));
    }
    out.push(Formula::Top);
    out.push(Formula::Bottom);
    if dependence {
        for v in vars {
            out.push(Formula::dep(vec![], v.clone()));
        }
        for a in vars {
            for b in vars {
                if a != b {
                    out.push(Formula::dep(vec![a.clone()], b.clone()));
                }
            }
        }
    }
    out
}

/// Every formula built from `atoms` with `&` and `|` of depth at most
/// `depth` (atoms have depth 1).
pub fn formulas_up_to_depth(atoms: &[Formula], depth: usize) -> Vec<Formula> {
    if depth == 0 {
        return Vec::new();
    }
    let mut all = atoms.to_vec();
    for _ in 1..depth {
        let prev = all.clone();
        all = atoms.to_vec();
        for l in &prev {
            for r in &prev {
                all.push(Formula::and(l.clone(), r.clone()));
                all.push(Formula::or(l.clone(), r.clone()));
            }
        }
    }
    all
}

fn random_atom<R: Rng>(rng: &mut R, domain: &Domain, dependence: bool) -> Formula {
    let vars = domain.vars();
    let pick = |rng: &mut R| vars[rng.random_range(0..vars.len())].clone();
    let roll = rng.random_range(0..100);
    match roll {
        0..=4 => Formula::Top,
        5..=9 => Formula::Bottom,
        10..=49 => Formula::PosLit(pick(rng)),
        50..=89 if dependence => Formula::NegLit(pick(rng)),
        50..=99 if !dependence => Formula::NegLit(pick(rng)),
        _ => {
            let target = pick(rng);
            let mut args: Vec<Var> = vars.to_vec();
            args.shuffle(rng);
            args.truncate(rng.random_range(0..vars.len().min(3)));
            Formula::dep(args, target)
        }
    }
}

/// Random formula of depth at most `depth`; dependence atoms only when
/// `dependence` is set.
pub fn random_formula<R: Rng>(rng: &mut R, domain: &Domain, depth: usize, dependence: bool) -> Formula {
    if depth <= 1 || rng.random_bool(0.25) {
        return random_atom(rng, domain, dependence);
    }
    let l = random_formula(rng, domain, depth - 1, dependence);
    let r = random_formula(rng, domain, depth - 1, dependence);
    if rng.random_bool(0.5) {
        Formula::and(l, r)
    } else {
        Formula::or(l, r)
    }
}

/// Random team with exactly `size` distinct members (clamped to `2^n`).
pub fn random_team_of_size<R: Rng>(rng: &mut R, domain: &Domain, size: usize) -> Team {
    let mut codes: Vec<u64> = (0..domain.valuation_count()).collect();
    codes.shuffle(rng);
    codes.truncate(size);
    Team::from_codes(domain, codes).expect("codes in range")
}

/// Random team with at most `max_size` members.
pub fn random_team<R: Rng>(rng: &mut R, domain: &Domain, max_size: usize) -> Team {
    let cap = max_size.min(domain.valuation_count() as usize);
    let size = rng.random_range(0..=cap);
    random_team_of_size(rng, domain, size)
}

/// Random strict partial order on `n` elements: a random linear extension
/// with pairs kept at `density`, then transitively closed.
pub fn random_strict_order<R: Rng>(rng: &mut R, n: usize, density: f64) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut below = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                below[perm[i]][perm[j]] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if below[i][k] && below[k][j] {
                    below[i][j] = true;
                }
            }
        }
    }
    let mut out = Vec::new();
    for (i, row) in below.iter().enumerate() {
        for (j, &b) in row.iter().enumerate() {
            if b {
                out.push((i, j));
            }
        }
    }
    out
}

/// Arbitrary relation (may contain cycles and self-loops).
pub fn random_relation<R: Rng>(rng: &mut R, n: usize, density: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.random_bool(density) {
                out.push((i, j));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    StrictPartial,
    Arbitrary,
}

/// Random explicit model with `1..=max_states` states, each labelled with
/// `0..=max_teams` teams of at most `max_team_size` members.
pub fn random_model<R: Rng>(
    rng: &mut R,
    domain: &Domain,
    max_states: usize,
    max_teams: usize,
    max_team_size: usize,
    kind: OrderKind,
) -> RelationalModel {
    let n = rng.random_range(1..=max_states);
    let labels = (0..n)
        .map(|_| {
            let k = rng.random_range(0..=max_teams);
            (0..k).map(|_| random_team(rng, domain, max_team_size)).collect()
        })
        .collect();
    let density = rng.random_range(0.1..0.6);
    let order = match kind {
        OrderKind::StrictPartial => random_strict_order(rng, n, density),
        OrderKind::Arbitrary => random_relation(rng, n, density / 2.0),
    };
    RelationalModel::from_indexed(domain.clone(), labels, order).expect("well-formed")
}

fn random_gates<R: Rng>(rng: &mut R, c: &mut Circuit, pool: &mut Vec<Wire>, count: usize) {
    for _ in 0..count {
        let pick = |rng: &mut R, pool: &Vec<Wire>| pool[rng.random_range(0..pool.len())];
        let op = match rng.random_range(0..20) {
            0..=5 => GateOp::And,
            6..=11 => GateOp::Or,
            12..=15 => GateOp::Xor,
            16..=18 => GateOp::Not,
            _ => {
                if rng.random_bool(0.5) {
                    GateOp::Const0
                } else {
                    GateOp::Const1
                }
            }
        };
        let operands: Vec<Wire> = (0..op.arity()).map(|_| pick(rng, pool)).collect();
        pool.push(c.add(op, &operands).expect("operands exist"));
    }
}

/// Random circuit with `gates` gates and outputs drawn from its last wires.
pub fn random_circuit<R: Rng>(rng: &mut R, inputs: usize, gates: usize, outputs: usize) -> Circuit {
    let mut c = Circuit::new(inputs);
    let mut pool: Vec<Wire> = (0..inputs).map(Wire::Input).collect();
    if pool.is_empty() {
        pool.push(c.add(GateOp::Const0, &[]).expect("nullary"));
    }
    random_gates(rng, &mut c, &mut pool, gates);
    let outs = (0..outputs)
        .map(|k| pool[pool.len() - 1 - k % pool.len()])
        .collect();
    c.set_outputs(outs).expect("wires exist");
    c
}

/// Order circuit deciding `s' < s` as unsigned integers, first bit most
/// significant.
pub fn less_than_circuit(state_bits: usize) -> Circuit {
    let mut c = Circuit::new(2 * state_bits);
    let mut lt = c.add(GateOp::Const0, &[]).expect("nullary");
    let mut eq = c.add(GateOp::Const1, &[]).expect("nullary");
    for j in 0..state_bits {
        let a = Wire::Input(j);
        let b = Wire::Input(state_bits + j);
        let na = c.add(GateOp::Not, &[a]).unwrap();
        let here = c.add(GateOp::And, &[na, b]).unwrap();
        let here = c.add(GateOp::And, &[eq, here]).unwrap();
        lt = c.add(GateOp::Or, &[lt, here]).unwrap();
        let diff = c.add(GateOp::Xor, &[a, b]).unwrap();
        let same = c.add(GateOp::Not, &[diff]).unwrap();
        eq = c.add(GateOp::And, &[eq, same]).unwrap();
    }
    c.set_outputs(vec![lt]).unwrap();
    c
}

/// Random succinct model whose defined-flag reads only the state bits, so
/// it always validates. The order is either `less_than_circuit` or random.
pub fn random_succinct<R: Rng>(rng: &mut R, domain: &Domain, state_bits: usize) -> SuccinctModel {
    let team_bits = domain.valuation_count() as usize;
    let mut label = Circuit::new(state_bits + team_bits);
    let mut state_pool: Vec<Wire> = (0..state_bits).map(Wire::Input).collect();
    let defined = if state_pool.is_empty() || rng.random_bool(0.2) {
        label.add(GateOp::Const1, &[]).unwrap()
    } else {
        random_gates(rng, &mut label, &mut state_pool, 2 * state_bits);
        let a = state_pool[state_pool.len() - 1];
        let b = state_pool[rng.random_range(0..state_pool.len())];
        label.add(GateOp::Or, &[a, b]).unwrap()
    };
    let mut pool: Vec<Wire> = (0..state_bits + team_bits).map(Wire::Input).collect();
    pool.extend(state_pool.iter().copied().filter(|w| matches!(w, Wire::Gate(_))));
    random_gates(rng, &mut label, &mut pool, 3 * (state_bits + team_bits));
    let member = pool[pool.len() - 1];
    label.set_outputs(vec![defined, member]).unwrap();
    let order = if rng.random_bool(0.5) {
        less_than_circuit(state_bits)
    } else {
        random_circuit(rng, 2 * state_bits, 3 * state_bits + 2, 1)
    };
    SuccinctModel::new(domain.clone(), state_bits, label, order).expect("arity by construction")
}
