//! Cumulative models given by a pair of boolean circuits.
//!
//! With `m` state bits and a domain of `n` variables:
//!
//! * the label circuit reads `[m state bits][2^n team bits]`, the team bits
//!   being the characteristic vector of a team in canonical valuation order,
//!   and outputs `[defined, member]`: whether the state is in the domain of
//!   the (partial) labelling and, if so, whether the team is in its label;
//! * the order circuit reads `[m bits of s'][m bits of s]` and outputs 1 iff
//!   `s'` is preferred to `s`.
//!
//! State bit vectors are written and enumerated with the first bit most
//! significant. The defined-flag must not depend on the team bits;
//! [`SuccinctModel::validate`] checks this.
//!
//! Netlist format, one item per line, `#` starts a comment:
//!
//! ```text
//! inputs 2
//! g2 = AND i0 i1
//! g3 = NOT g2
//! outputs g2 g3
//! ```

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::relmodel::RelationalModel;
use crate::report::{VerificationReport, Witness};
use crate::semantics::Engine;
use crate::teams::{Domain, Team};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateOp {
    And,
    Or,
    Not,
    Xor,
    Const0,
    Const1,
}

impl GateOp {
    pub fn arity(self) -> usize {
        match self {
            GateOp::And | GateOp::Or | GateOp::Xor => 2,
            GateOp::Not => 1,
            GateOp::Const0 | GateOp::Const1 => 0,
        }
    }

    fn name(self) -> &'static str {
        match self {
            GateOp::And => "AND",
            GateOp::Or => "OR",
            GateOp::Not => "NOT",
            GateOp::Xor => "XOR",
            GateOp::Const0 => "CONST0",
            GateOp::Const1 => "CONST1",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "AND" => GateOp::And,
            "OR" => GateOp::Or,
            "NOT" => GateOp::Not,
            "XOR" => GateOp::Xor,
            "CONST0" => GateOp::Const0,
            "CONST1" => GateOp::Const1,
            _ => return None,
        })
    }
}

/// A circuit input or an earlier gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Wire {
    Input(usize),
    Gate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub name: String,
    pub op: GateOp,
    pub operands: Vec<Wire>,
}

/// Straight-line boolean circuit; operands always precede their gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    input_count: usize,
    gates: Vec<Gate>,
    outputs: Vec<Wire>,
}

impl Circuit {
    pub fn new(input_count: usize) -> Self {
        Circuit {
            input_count,
            gates: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn input_count(&self) -> usize {
        self.input_count
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Wire] {
        &self.outputs
    }

    pub fn input(&self, i: usize) -> Wire {
        assert!(i < self.input_count, "input {i} out of range");
        Wire::Input(i)
    }

    fn check_wire(&self, w: Wire) -> Result<()> {
        match w {
            Wire::Input(i) if i < self.input_count => Ok(()),
            Wire::Gate(g) if g < self.gates.len() => Ok(()),
            _ => Err(Error::Circuit(format!("undefined operand {w:?}"))),
        }
    }

    /// Appends a gate named `g<inputs + index>`.
    pub fn add(&mut self, op: GateOp, operands: &[Wire]) -> Result<Wire> {
        let name = format!("g{}", self.input_count + self.gates.len());
        self.push_gate(name, op, operands.to_vec())
    }

    fn push_gate(&mut self, name: String, op: GateOp, operands: Vec<Wire>) -> Result<Wire> {
        if operands.len() != op.arity() {
            return Err(Error::Circuit(format!(
                "{} takes {} operands, got {}",
                op.name(),
                op.arity(),
                operands.len()
            )));
        }
        for &w in &operands {
            self.check_wire(w)?;
        }
        self.gates.push(Gate { name, op, operands });
        Ok(Wire::Gate(self.gates.len() - 1))
    }

    pub fn set_outputs(&mut self, outputs: Vec<Wire>) -> Result<()> {
        for &w in &outputs {
            self.check_wire(w)?;
        }
        self.outputs = outputs;
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Circuit> {
        let err = |line: usize, message: String| Error::Netlist { line, message };
        let mut circuit: Option<Circuit> = None;
        let mut names: HashMap<String, usize> = HashMap::new();
        let mut done = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if done {
                return Err(err(line, "content after `outputs`".into()));
            }
            let Some(c) = circuit.as_mut() else {
                match tokens.as_slice() {
                    ["inputs", k] => {
                        let k = k
                            .parse()
                            .map_err(|_| err(line, format!("bad input count `{k}`")))?;
                        circuit = Some(Circuit::new(k));
                        continue;
                    }
                    _ => return Err(err(line, "expected `inputs K` header".into())),
                }
            };
            let resolve = |c: &Circuit, tok: &str| -> Result<Wire> {
                if let Some(i) = tok.strip_prefix('i').and_then(|s| s.parse::<usize>().ok()) {
                    if i < c.input_count {
                        return Ok(Wire::Input(i));
                    }
                    return Err(err(line, format!("input `{tok}` out of range")));
                }
                names
                    .get(tok)
                    .map(|&g| Wire::Gate(g))
                    .ok_or_else(|| err(line, format!("undefined operand `{tok}`")))
            };
            match tokens.as_slice() {
                ["outputs", rest @ ..] => {
                    let outs = rest
                        .iter()
                        .map(|t| resolve(c, t))
                        .collect::<Result<Vec<_>>>()?;
                    if outs.is_empty() {
                        return Err(err(line, "no outputs listed".into()));
                    }
                    c.outputs = outs;
                    done = true;
                }
                [name, "=", op, operands @ ..] => {
                    if !is_gate_name(name) {
                        return Err(err(line, format!("bad gate name `{name}`")));
                    }
                    if names.contains_key(*name) {
                        return Err(err(line, format!("gate `{name}` defined twice")));
                    }
                    let op = GateOp::from_name(op)
                        .ok_or_else(|| err(line, format!("unknown gate `{op}`")))?;
                    if operands.len() != op.arity() {
                        return Err(err(
                            line,
                            format!(
                                "{} takes {} operands, got {}",
                                op.name(),
                                op.arity(),
                                operands.len()
                            ),
                        ));
                    }
                    let ops = operands
                        .iter()
                        .map(|t| resolve(c, t))
                        .collect::<Result<Vec<_>>>()?;
                    let wire = c.push_gate(name.to_string(), op, ops)?;
                    let Wire::Gate(g) = wire else { unreachable!() };
                    names.insert(name.to_string(), g);
                }
                _ => return Err(err(line, format!("cannot parse `{content}`"))),
            }
        }
        match circuit {
            None => Err(err(0, "empty netlist".into())),
            Some(_) if !done => Err(err(0, "missing `outputs` line".into())),
            Some(c) => Ok(c),
        }
    }

    pub fn eval(&self, inputs: &[bool]) -> Result<Vec<bool>> {
        if inputs.len() != self.input_count {
            return Err(Error::Circuit(format!(
                "expected {} inputs, got {}",
                self.input_count,
                inputs.len()
            )));
        }
        let mut values = Vec::with_capacity(self.gates.len());
        let get = |values: &Vec<bool>, w: Wire| match w {
            Wire::Input(i) => inputs[i],
            Wire::Gate(g) => values[g],
        };
        for gate in &self.gates {
            let arg = |k: usize| get(&values, gate.operands[k]);
            let v = match gate.op {
                GateOp::And => arg(0) & arg(1),
                GateOp::Or => arg(0) | arg(1),
                GateOp::Xor => arg(0) ^ arg(1),
                GateOp::Not => !arg(0),
                GateOp::Const0 => false,
                GateOp::Const1 => true,
            };
            values.push(v);
        }
        Ok(self.outputs.iter().map(|&w| get(&values, w)).collect())
    }

    fn wire_name(&self, w: Wire) -> String {
        match w {
            Wire::Input(i) => format!("i{i}"),
            Wire::Gate(g) => self.gates[g].name.clone(),
        }
    }
}

fn is_gate_name(s: &str) -> bool {
    s.len() > 1 && s.starts_with('g') && s[1..].chars().all(|c| c.is_ascii_digit())
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "inputs {}", self.input_count)?;
        for g in &self.gates {
            write!(f, "{} = {}", g.name, g.op.name())?;
            for &w in &g.operands {
                write!(f, " {}", self.wire_name(w))?;
            }
            writeln!(f)?;
        }
        let outs: Vec<String> = self.outputs.iter().map(|&w| self.wire_name(w)).collect();
        writeln!(f, "outputs {}", outs.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuccinctCaps {
    pub max_state_bits: usize,
    pub max_vars: usize,
}

impl Default for SuccinctCaps {
    fn default() -> Self {
        SuccinctCaps {
            max_state_bits: 12,
            max_vars: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuccinctModel {
    domain: Domain,
    state_bits: usize,
    label: Circuit,
    order: Circuit,
    caps: SuccinctCaps,
}

impl SuccinctModel {
    pub fn new(domain: Domain, state_bits: usize, label: Circuit, order: Circuit) -> Result<Self> {
        let team_bits = 1usize
            .checked_shl(domain.len() as u32)
            .filter(|_| domain.len() < 32)
            .ok_or_else(|| Error::cap("succinct domain size", 31, domain.len()))?;
        if label.input_count() != state_bits + team_bits || label.outputs().len() != 2 {
            return Err(Error::Circuit(format!(
                "label circuit must have {} inputs and 2 outputs, has {} and {}",
                state_bits + team_bits,
                label.input_count(),
                label.outputs().len()
            )));
        }
        if order.input_count() != 2 * state_bits || order.outputs().len() != 1 {
            return Err(Error::Circuit(format!(
                "order circuit must have {} inputs and 1 output, has {} and {}",
                2 * state_bits,
                order.input_count(),
                order.outputs().len()
            )));
        }
        Ok(SuccinctModel {
            domain,
            state_bits,
            label,
            order,
            caps: SuccinctCaps::default(),
        })
    }

    pub fn with_caps(mut self, caps: SuccinctCaps) -> Self {
        self.caps = caps;
        self
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn state_bits(&self) -> usize {
        self.state_bits
    }

    pub fn label_circuit(&self) -> &Circuit {
        &self.label
    }

    pub fn order_circuit(&self) -> &Circuit {
        &self.order
    }

    fn check_caps(&self) -> Result<()> {
        if self.state_bits > self.caps.max_state_bits {
            return Err(Error::cap("state bits", self.caps.max_state_bits, self.state_bits));
        }
        if self.domain.len() > self.caps.max_vars {
            return Err(Error::cap("succinct domain size", self.caps.max_vars, self.domain.len()));
        }
        Ok(())
    }

    fn state_count(&self) -> u64 {
        1 << self.state_bits
    }

    fn team_count(&self) -> u64 {
        1 << self.domain.valuation_count()
    }

    fn push_state_bits(&self, code: u64, out: &mut Vec<bool>) {
        for j in 0..self.state_bits {
            out.push(code >> (self.state_bits - 1 - j) & 1 == 1);
        }
    }

    pub fn state_code(&self, bits: &[bool]) -> Result<u64> {
        if bits.len() != self.state_bits {
            return Err(Error::Circuit(format!(
                "state has {} bits, expected {}",
                bits.len(),
                self.state_bits
            )));
        }
        Ok(bits.iter().fold(0, |acc, &b| acc << 1 | b as u64))
    }

    pub fn state_string(&self, code: u64) -> String {
        let mut bits = Vec::new();
        self.push_state_bits(code, &mut bits);
        bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    fn eval_label(&self, state: u64, team: u64) -> (bool, bool) {
        let width = self.domain.valuation_count();
        let mut inputs = Vec::with_capacity(self.label.input_count());
        self.push_state_bits(state, &mut inputs);
        inputs.extend((0..width).map(|i| team >> i & 1 == 1));
        let out = self.label.eval(&inputs).expect("arity checked at construction");
        (out[0], out[1])
    }

    fn eval_order(&self, lower: u64, higher: u64) -> bool {
        let mut inputs = Vec::with_capacity(self.order.input_count());
        self.push_state_bits(lower, &mut inputs);
        self.push_state_bits(higher, &mut inputs);
        self.order.eval(&inputs).expect("arity checked at construction")[0]
    }

    /// Defined-flag on the all-zero team input.
    fn is_defined(&self, state: u64) -> bool {
        self.eval_label(state, 0).0
    }

    fn label_of(&self, state: u64) -> Option<Vec<Team>> {
        if !self.is_defined(state) {
            return None;
        }
        Some(
            (0..self.team_count())
                .filter(|&t| self.eval_label(state, t).1)
                .map(|t| Team::from_char_code(&self.domain, t).expect("code in range"))
                .collect(),
        )
    }

    pub fn validate(&self) -> Result<VerificationReport> {
        self.check_caps()?;
        const MAX_LISTED: usize = 16;
        let mut report = VerificationReport::new("succinct model");
        let width = self.domain.valuation_count() as usize;
        let team_str = |t: u64| -> String {
            (0..width).map(|i| if t >> i & 1 == 1 { '1' } else { '0' }).collect()
        };
        for s in 0..self.state_count() {
            let base = self.eval_label(s, 0).0;
            if let Some(t) = (1..self.team_count()).find(|&t| self.eval_label(s, t).0 != base) {
                report.fail(Witness::UnstableDefinedFlag {
                    state: self.state_string(s),
                    team_a: team_str(0),
                    team_b: team_str(t),
                });
            }
        }
        let defined: Vec<bool> = (0..self.state_count()).map(|s| self.is_defined(s)).collect();
        let mut lint = Vec::new();
        let mut lint_count = 0usize;
        for a in 0..self.state_count() {
            for b in 0..self.state_count() {
                if (defined[a as usize] && defined[b as usize]) || !self.eval_order(a, b) {
                    continue;
                }
                lint_count += 1;
                if lint.len() < MAX_LISTED {
                    lint.push(format!("{}<{}", self.state_string(a), self.state_string(b)));
                }
            }
        }
        if lint_count > 0 {
            report.note(format!(
                "order circuit is 1 on {lint_count} pair(s) involving undefined states: {}{}",
                lint.join(", "),
                if lint_count > lint.len() { ", ..." } else { "" }
            ));
        }
        Ok(report)
    }

    /// `ℓ(s)`, or `None` when `s` is outside the labelling's domain.
    pub fn succ_label(&self, state: &[bool]) -> Result<Option<Vec<Team>>> {
        self.check_caps()?;
        Ok(self.label_of(self.state_code(state)?))
    }

    pub fn entails(&self, phi: &Formula, psi: &Formula) -> Result<bool> {
        Ok(self.find_violation(phi, psi, Engine::Generic)?.is_none())
    }

    /// Searches for a defined state whose label satisfies `φ` and not `ψ`
    /// and that has no defined `φ`-state below it.
    pub fn find_violation(&self, phi: &Formula, psi: &Formula, engine: Engine) -> Result<Option<String>> {
        self.check_caps()?;
        for f in [phi, psi] {
            for v in f.vars() {
                self.domain.require(&v)?;
            }
        }
        let sat_all = |teams: &[Team], f: &Formula| -> Result<bool> {
            for t in teams {
                if !engine.eval(t, f)? {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let mut labels = Vec::with_capacity(self.state_count() as usize);
        let mut phi_states = Vec::new();
        for s in 0..self.state_count() {
            let label = self.label_of(s);
            if let Some(teams) = &label {
                if sat_all(teams, phi)? {
                    phi_states.push(s);
                }
            }
            labels.push(label);
        }
        for &s in &phi_states {
            let minimal = !phi_states.iter().any(|&t| self.eval_order(t, s));
            if !minimal {
                continue;
            }
            let teams = labels[s as usize].as_deref().expect("phi-states are defined");
            if !sat_all(teams, psi)? {
                return Ok(Some(self.state_string(s)));
            }
        }
        Ok(None)
    }

    /// Explicit model over the defined states, named by their bit strings.
    pub fn expand(&self) -> Result<RelationalModel> {
        self.check_caps()?;
        let defined: Vec<u64> = (0..self.state_count()).filter(|&s| self.is_defined(s)).collect();
        let labels = defined
            .iter()
            .map(|&s| (self.state_string(s), self.label_of(s).expect("defined")))
            .collect();
        let mut order = Vec::new();
        for &a in &defined {
            for &b in &defined {
                if self.eval_order(a, b) {
                    order.push((self.state_string(a), self.state_string(b)));
                }
            }
        }
        RelationalModel::new(self.domain.clone(), labels, order)
    }
}
