use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::json;

use klmteam::bench::{self, BenchConfig};
use klmteam::oracle::{oracle_entails, oracle_eval_team};
use klmteam::relmodel::CumulativityMode;
use klmteam::semantics::{eval_team, eval_team_flat, Engine};
use klmteam::systemc::{check_system_c, conjunction_closure, induced_relation, parse_universe};
use klmteam::{Circuit, Domain, Formula, Logic, RelationalModel, SuccinctModel, Team, VerificationReport};

use crate::{
    BenchArgs, EntailArgs, EntailEngine, EvalArgs, EvalEngine, LogicArg, SuccEntailArgs, SystemcArgs,
    VerifyArgs, VerifyMode,
};

pub struct Output {
    pub quiet: bool,
    pub json: bool,
}

impl Output {
    fn line(&self, text: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", text.as_ref());
        }
    }

    fn value(&self, v: serde_json::Value) {
        if !self.quiet {
            println!("{}", serde_json::to_string_pretty(&v).expect("json values serialize"));
        }
    }

    fn warn(&self, text: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("warning: {}", text.as_ref());
        }
    }

    fn reports(&self, reports: &[VerificationReport]) -> bool {
        let passed = reports.iter().all(|r| r.passed);
        if self.json {
            self.value(json!({ "passed": passed, "reports": reports }));
        } else {
            for r in reports {
                if !self.quiet {
                    print!("{r}");
                }
            }
        }
        passed
    }
}

impl From<LogicArg> for Logic {
    fn from(l: LogicArg) -> Logic {
        match l {
            LogicArg::Pdl => Logic::Pdl,
            LogicArg::Tpl => Logic::Tpl,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn formula(text: &str, what: &str) -> Result<Formula> {
    Formula::parse(text).with_context(|| format!("in {what} `{text}`"))
}

fn load_model(path: &Path) -> Result<RelationalModel> {
    RelationalModel::from_json(&read(path)?).with_context(|| format!("in model file {}", path.display()))
}

fn load_universe(path: &Path) -> Result<Vec<Formula>> {
    parse_universe(&read(path)?).with_context(|| format!("in universe file {}", path.display()))
}

pub fn eval(out: &Output, a: EvalArgs) -> Result<bool> {
    let domain = Domain::parse_list(&a.vars)?;
    let team = Team::parse_literal(&domain, &a.team)?;
    let f = formula(&a.formula, "formula")?;
    let (engine, result) = match a.engine {
        EvalEngine::Generic => ("generic", eval_team(&team, &f)?),
        EvalEngine::Flat => {
            if !f.is_pl() {
                bail!("the flat engine only handles formulas without dependence atoms");
            }
            ("flat", eval_team_flat(&team, &f)?)
        }
        EvalEngine::Oracle => ("oracle", oracle_eval_team(&team, &f)?),
    };
    if out.json {
        out.value(json!({
            "formula": f.render(),
            "team": team.to_literal(),
            "engine": engine,
            "result": result,
        }));
    } else {
        out.line(result.to_string());
    }
    Ok(result)
}

pub fn entail(out: &Output, a: EntailArgs) -> Result<bool> {
    let model = load_model(&a.model)?;
    let phi = formula(&a.phi, "φ")?;
    let psi = formula(&a.psi, "ψ")?;
    let logic = Logic::from(a.logic);
    if logic == Logic::Tpl && !(phi.is_pl() && psi.is_pl()) {
        bail!("--logic tpl requires formulas without dependence atoms");
    }
    let verify = if a.verify {
        let universe = [phi.clone(), psi.clone(), Formula::and(phi.clone(), psi.clone())];
        let report = model.verify_cumulative(CumulativityMode::Universe(&universe))?;
        if !report.passed {
            for w in &report.witnesses {
                out.warn(format!("model is not cumulative: {w}"));
            }
        }
        Some(report)
    } else {
        None
    };
    let (result, violation) = match a.engine {
        EntailEngine::Direct => {
            let v = model.find_violation(&phi, &psi, Engine::for_logic(logic))?;
            (v.is_none(), v)
        }
        EntailEngine::Oracle => {
            let result = oracle_entails(&model, &phi, &psi)?;
            let v = if result {
                None
            } else {
                model.find_violation(&phi, &psi, Engine::Oracle)?
            };
            (result, v)
        }
    };
    let state = violation.map(|s| model.state_name(s).to_string());
    if out.json {
        out.value(json!({
            "phi": phi.render(),
            "psi": psi.render(),
            "result": result,
            "violating_state": state,
            "verify": verify,
        }));
    } else {
        out.line(result.to_string());
        if let Some(s) = state {
            out.line(format!("minimal state {s} satisfies {phi} but not {psi}"));
        }
    }
    Ok(result)
}

pub fn verify(out: &Output, a: VerifyArgs) -> Result<bool> {
    let model = load_model(&a.model)?;
    let universe = a.universe.as_deref().map(load_universe).transpose()?;
    let mode = a.mode.unwrap_or(if universe.is_some() {
        VerifyMode::Universe
    } else {
        VerifyMode::AllSubsets
    });
    let mut reports = Vec::new();
    match mode {
        VerifyMode::Universe => {
            let Some(u) = &universe else {
                bail!("--mode universe needs --universe FILE");
            };
            reports.push(model.verify_cumulative(CumulativityMode::Universe(u))?);
        }
        VerifyMode::AllSubsets => reports.push(model.verify_cumulative(CumulativityMode::AllSubsets)?),
    }
    if a.strong {
        let Some(u) = &universe else {
            bail!("--strong needs --universe FILE");
        };
        reports.push(model.verify_strong_cumulative(u)?);
    }
    Ok(out.reports(&reports))
}

pub fn systemc(out: &Output, a: SystemcArgs) -> Result<bool> {
    let model = load_model(&a.model)?;
    let base = load_universe(&a.universe)?;
    let logic = Logic::from(a.logic);
    let universe = conjunction_closure(&base, model.domain(), logic, a.closure_depth)?;
    if universe.len() > base.len() && !out.json {
        out.warn(format!(
            "universe extended by {} conjunction(s) to close it under &",
            universe.len() - base.len()
        ));
    }
    let relation = induced_relation(&model, &universe, logic)?;
    let report = check_system_c(&relation)?;
    Ok(out.reports(&[report]))
}

fn succ_domain(vars: &str) -> Result<Domain> {
    match vars.trim().parse::<usize>() {
        Ok(n) => {
            let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            Ok(Domain::from_names(&names)?)
        }
        Err(_) => Ok(Domain::parse_list(vars)?),
    }
}

fn load_circuit(path: &Path) -> Result<Circuit> {
    Circuit::parse(&read(path)?).with_context(|| format!("in circuit file {}", path.display()))
}

pub fn succ_entail(out: &Output, a: SuccEntailArgs) -> Result<bool> {
    let domain = succ_domain(&a.vars)?;
    let label = load_circuit(&a.label)?;
    let order = load_circuit(&a.order)?;
    let model = SuccinctModel::new(domain, a.state_bits, label, order)?;
    let phi = formula(&a.phi, "φ")?;
    let psi = formula(&a.psi, "ψ")?;
    let report = model.validate()?;
    if !report.passed {
        let listing: Vec<String> = report.witnesses.iter().map(|w| w.to_string()).collect();
        bail!("label circuit is not a valid labelling: {}", listing.join("; "));
    }
    if !out.json {
        for n in &report.notes {
            out.warn(n);
        }
    }
    let violation = model.find_violation(&phi, &psi, Engine::Generic)?;
    let result = violation.is_none();
    if out.json {
        out.value(json!({
            "phi": phi.render(),
            "psi": psi.render(),
            "result": result,
            "violating_state": violation,
            "notes": report.notes,
        }));
    } else {
        out.line(result.to_string());
        if let Some(s) = violation {
            out.line(format!("minimal state {s} satisfies {phi} but not {psi}"));
        }
    }
    Ok(result)
}

pub fn bench(out: &Output, a: BenchArgs) -> Result<bool> {
    let config = BenchConfig {
        logic: a.logic.into(),
        max_team_size: a.max_team_size,
        trials: a.trials,
        seed: a.seed,
    };
    let rows = bench::run(&config)?;
    if out.json {
        out.value(serde_json::to_value(&rows)?);
    } else {
        out.line(format!("{:<6}{:>10}{:>14}{:>14}", "logic", "team_size", "formula_size", "median_ns"));
        for r in &rows {
            out.line(format!(
                "{:<6}{:>10}{:>14}{:>14}",
                r.logic.to_string(),
                r.team_size,
                r.formula_size,
                r.median_ns
            ));
        }
    }
    Ok(true)
}
