//! Experiment driver behind the `qwalk` binary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, ExperimentKind, OutputFormat};
use crate::error::{Error, Result};
use crate::gates::{gate_fidelity, ideal_ckz, param_gate, ParamKind};
use crate::metrics::{gate_set_comparison, ToleranceReport};
use crate::report::{fmt_num, round12};
use crate::simulation::{run_noisy, RunResult};

/// Exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config { .. } | Error::InvalidInput(_) => 2,
        Error::Unsupported(_) => 3,
        Error::Io(_) => 1,
    }
}

/// Command output: the main document, optional companion files, and a short human summary.
#[derive(Clone, Debug, PartialEq)]
pub struct Rendered {
    pub primary: String,
    /// `(suffix, contents)`; written next to the primary file as `<stem>.<suffix>`.
    pub companions: Vec<(String, String)>,
    pub summary: String,
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::input(e.to_string()))?;
    round_numbers(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::input(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Round every float in a JSON tree to 12 significant digits.
pub fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round12(x))) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

fn format_of(cfg: &ExperimentConfig, flag: Option<OutputFormat>) -> OutputFormat {
    flag.or(cfg.output.format).unwrap_or_default()
}

fn census_text(c: &std::collections::BTreeMap<usize, u64>) -> String {
    if c.is_empty() {
        return "-".into();
    }
    c.iter().map(|(r, n)| format!("{r}:{n}")).collect::<Vec<_>>().join(";")
}

fn run_csv(res: &RunResult) -> String {
    let mut s = String::from("step,fidelity,total_probability\n");
    for st in &res.steps {
        let _ = writeln!(s, "{},{},{}", st.step, fmt_num(st.fidelity), fmt_num(st.total_probability));
    }
    s
}

pub fn cmd_simulate(cfg: &ExperimentConfig, format: Option<OutputFormat>) -> Result<Rendered> {
    let spec = cfg.walk.to_spec()?;
    let gates = cfg.gates.to_gate_set()?;
    let noise = cfg.noise.to_params()?;
    let res = run_noisy(&spec, &gates, &noise)?;
    let tol = res.tolerance_report();
    let primary = match format_of(cfg, format) {
        OutputFormat::Csv => run_csv(&res),
        OutputFormat::Json => to_json(&json!({
            "kind": "simulate",
            "run": res,
            "tolerance": tol,
        }))?,
    };
    let summary = format!(
        "{}-node walk, {}-qubit coin, max rank {}: f_1 = {}, f_{} = {}, steps within {}",
        spec.nodes(),
        spec.coin_qubits(),
        gates.max_rank,
        fmt_num(res.steps[0].fidelity),
        spec.steps(),
        fmt_num(res.steps.last().map(|s| s.fidelity).unwrap_or(1.0)),
        tol.entries
            .iter()
            .map(|e| format!("{}: {}", fmt_num(e.tolerance), e.steps_within))
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(Rendered { primary, companions: Vec::new(), summary })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateFidelityRow {
    pub a: f64,
    pub f_cz: f64,
    pub f_ccz: f64,
}

pub fn param_fidelities(a: f64) -> Result<GateFidelityRow> {
    Ok(GateFidelityRow {
        a,
        f_cz: gate_fidelity(&param_gate(ParamKind::Cz, a)?, &ideal_ckz(1)?)?,
        f_ccz: gate_fidelity(&param_gate(ParamKind::Ccz, a)?, &ideal_ckz(2)?)?,
    })
}

pub fn cmd_sweep_a(cfg: &ExperimentConfig, format: Option<OutputFormat>) -> Result<Rendered> {
    let spec = cfg.walk.to_spec()?;
    let noise = cfg.noise.to_params()?;
    let a_values = cfg.gates.a_values()?;
    let runs: Vec<(GateFidelityRow, RunResult)> = a_values
        .par_iter()
        .map(|&a| {
            let gates = cfg.gates.gate_set_for(cfg.gates.max_rank, Some(a))?;
            Ok((param_fidelities(a)?, run_noisy(&spec, &gates, &noise)?))
        })
        .collect::<Result<_>>()?;

    let mut summary = String::from("a -> F(CZ(a)), F(CCZ(a)):");
    for (row, _) in &runs {
        let _ = write!(summary, "\n  {} -> {}, {}", fmt_num(row.a), fmt_num(row.f_cz), fmt_num(row.f_ccz));
    }
    match format_of(cfg, format) {
        OutputFormat::Csv => {
            let mut series = String::from("a,step,fidelity,total_probability\n");
            let mut table = String::from("a,f_cz,f_ccz\n");
            for (row, res) in &runs {
                let a = fmt_num(row.a);
                for st in &res.steps {
                    let _ = writeln!(series, "{a},{},{},{}", st.step, fmt_num(st.fidelity), fmt_num(st.total_probability));
                }
                let _ = writeln!(table, "{a},{},{}", fmt_num(row.f_cz), fmt_num(row.f_ccz));
            }
            Ok(Rendered {
                primary: series,
                companions: vec![("gates.csv".into(), table)],
                summary,
            })
        }
        OutputFormat::Json => {
            let series: Vec<Value> = runs
                .iter()
                .map(|(row, res)| {
                    json!({
                        "a": row.a,
                        "fidelity": res.fidelities(),
                        "total_probability": res.steps.iter().map(|s| s.total_probability).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let table: Vec<&GateFidelityRow> = runs.iter().map(|(r, _)| r).collect();
            let primary = to_json(&json!({
                "kind": "sweep-a",
                "spec": spec,
                "max_rank": cfg.gates.max_rank,
                "noise": noise,
                "gate_fidelities": table,
                "series": series,
            }))?;
            Ok(Rendered { primary, companions: Vec::new(), summary })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToleranceRow {
    pub position_qubits: usize,
    pub coin_qubits: usize,
    pub max_rank: usize,
    pub report: ToleranceReport,
    pub fidelities: Vec<f64>,
}

pub fn cmd_tolerance(cfg: &ExperimentConfig, format: Option<OutputFormat>) -> Result<Rendered> {
    let walks = cfg
        .tolerance
        .walks
        .clone()
        .unwrap_or_else(|| vec![[cfg.walk.position_qubits, cfg.walk.coin_qubits]]);
    let ranks = cfg.tolerance.max_ranks.clone().unwrap_or_else(|| vec![cfg.gates.max_rank]);
    let noise = cfg.noise.to_params()?;
    let jobs: Vec<([usize; 2], usize)> = walks.iter().flat_map(|w| ranks.iter().map(move |r| (*w, *r))).collect();
    let rows: Vec<ToleranceRow> = jobs
        .par_iter()
        .map(|&([n, nc], rank)| {
            let spec = cfg.walk.to_spec_for(n, nc)?;
            let gates = cfg.gates.gate_set_for(rank, cfg.gates.param_a)?;
            let res = run_noisy(&spec, &gates, &noise)?;
            Ok(ToleranceRow {
                position_qubits: n,
                coin_qubits: nc,
                max_rank: rank,
                report: res.tolerance_report(),
                fidelities: res.fidelities(),
            })
        })
        .collect::<Result<_>>()?;

    let mut summary = String::from("walk (n, n_c), max rank: steps within 0.99 / 0.999 / 0.9999");
    for r in &rows {
        let counts: Vec<String> = r.report.entries.iter().map(|e| e.steps_within.to_string()).collect();
        let _ = write!(
            summary,
            "\n  ({}, {}), {}: {}",
            r.position_qubits,
            r.coin_qubits,
            r.max_rank,
            counts.join(" / ")
        );
    }
    let primary = match format_of(cfg, format) {
        OutputFormat::Csv => {
            let mut s = String::from("position_qubits,coin_qubits,max_rank,tolerance,steps_within\n");
            for r in &rows {
                for e in &r.report.entries {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{}",
                        r.position_qubits,
                        r.coin_qubits,
                        r.max_rank,
                        fmt_num(e.tolerance),
                        e.steps_within
                    );
                }
            }
            s
        }
        OutputFormat::Json => to_json(&json!({ "kind": "tolerance", "noise": noise, "rows": rows }))?,
    };
    Ok(Rendered { primary, companions: Vec::new(), summary })
}

pub fn cmd_composite(cfg: &ExperimentConfig, format: Option<OutputFormat>) -> Result<Rendered> {
    let c = &cfg.composite;
    let sets = c.sets()?;
    let report = gate_set_comparison(&c.n_list, &sets, &c.transitions, c.coin_qubits).map_err(|e| match e {
        Error::InvalidInput(m) => Error::config("composite", m),
        other => other,
    })?;

    let mut summary = String::from("n, G(from -> to): mean increase %  [counts from | counts to]");
    for r in &report.rows {
        let _ = write!(
            summary,
            "\n  {}, G({} -> {}): {}  [{} | {}]",
            r.n,
            r.from_rank,
            r.to_rank,
            fmt_num(r.mean_increase_percent),
            census_text(&r.counts_from),
            census_text(&r.counts_to)
        );
    }
    let primary = match format_of(cfg, format) {
        OutputFormat::Csv => {
            let mut s = String::from("n,from_rank,to_rank,mean_increase_percent,increase_percent,counts_from,counts_to\n");
            for r in &report.rows {
                let each: Vec<String> = r.increase_percent.iter().map(|x| fmt_num(*x)).collect();
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.n,
                    r.from_rank,
                    r.to_rank,
                    fmt_num(r.mean_increase_percent),
                    each.join(";"),
                    census_text(&r.counts_from),
                    census_text(&r.counts_to)
                );
            }
            s
        }
        OutputFormat::Json => to_json(&json!({ "kind": "composite", "fidelity_sets": sets, "report": report }))?,
    };
    Ok(Rendered { primary, companions: Vec::new(), summary })
}

/// Run `kind`, falling back to the config's own `experiment.kind`.
pub fn run_command(
    kind: Option<ExperimentKind>,
    cfg: &ExperimentConfig,
    format: Option<OutputFormat>,
) -> Result<Rendered> {
    let kind = kind
        .or(cfg.experiment.kind)
        .ok_or_else(|| Error::config("experiment.kind", "no subcommand given and none set in the config"))?;
    match kind {
        ExperimentKind::Simulate => cmd_simulate(cfg, format),
        ExperimentKind::SweepA => cmd_sweep_a(cfg, format),
        ExperimentKind::Tolerance => cmd_tolerance(cfg, format),
        ExperimentKind::Composite => cmd_composite(cfg, format),
    }
}

fn companion_path(primary: &Path, suffix: &str) -> PathBuf {
    let stem = primary.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    primary.with_file_name(format!("{stem}.{suffix}"))
}

/// Write the rendered output to `out`, or return it for stdout when `out` is `None`.
pub fn write_outputs(r: &Rendered, out: Option<&Path>) -> Result<Option<String>> {
    match out {
        Some(path) => {
            std::fs::write(path, &r.primary)?;
            for (suffix, body) in &r.companions {
                std::fs::write(companion_path(path, suffix), body)?;
            }
            Ok(None)
        }
        None => {
            let mut s = r.primary.clone();
            for (_, body) in &r.companions {
                s.push('\n');
                s.push_str(body);
            }
            Ok(Some(s))
        }
    }
}
