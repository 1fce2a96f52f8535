//! CSV report writers.
//!
//! Every writer targets an `io::Write` sink so output can go to files or
//! in-memory buffers. Formatting is deterministic: floats are written in
//! scientific notation with eleven fractional digits, missing values
//! (infeasible cells, undefined ratios, NaN) become empty cells, and rows
//! follow the natural order of the underlying data, so identical runs
//! produce byte-identical files.

use std::io::{self, Write};

use crate::analysis::{self, EffectiveCostCurve, SensitivityReport};
use crate::game::Game;
use crate::montecarlo::{
    AcquisitionRow, AcquisitionSummary, SkippedInstance, SweepRow, SweepSummary,
};
use crate::solver::{self, CcceSolution, UncertaintyModel};
use crate::vertiport::VertiportScenario;

/// Fixed-width scientific rendering of a float; NaN renders empty.
fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:.11e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, fmt_float)
}

/// Quote a field if it contains a delimiter, quote, or newline.
fn escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// The optimal plan: one row per joint profile, with the profile's action
/// vector (space-separated, one entry per agent) and its probability.
pub fn write_solution<W: Write>(
    mut w: W,
    game: &Game,
    solution: &CcceSolution,
) -> io::Result<()> {
    writeln!(w, "profile,actions,prob")?;
    for (p, &prob) in solution.z.probs().iter().enumerate() {
        let actions = game
            .profile_actions(p)
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(w, "{p},{actions},{}", fmt_float(prob))?;
    }
    Ok(())
}

/// One row per incentive constraint: its multiplier, the owning agent's
/// noise level, the information-gain score, activity, and — for active
/// rows — the bottleneck classification. Inactive rows leave the
/// classification columns empty.
pub fn write_duals<W: Write>(
    mut w: W,
    solution: &CcceSolution,
    model: &UncertaintyModel,
) -> io::Result<()> {
    writeln!(
        w,
        "agent,recommended,deviation,lambda,sigma,infogain,active,bottleneck,rho"
    )?;
    for record in &solution.records {
        let id = record.id;
        let (kind, rho) = if record.active {
            match solver::classify_bottleneck(record, model) {
                Ok(b) => (b.kind.label().to_string(), fmt_float(b.rho)),
                Err(_) => (String::new(), String::new()),
            }
        } else {
            (String::new(), String::new())
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{},{kind},{rho}",
            id.agent,
            id.recommended,
            id.deviation,
            fmt_float(record.dual),
            fmt_float(model.sigma(id.agent)),
            fmt_float(analysis::info_gain(model, record)),
            record.active,
        )?;
    }
    Ok(())
}

/// Key–value summary of one solved instance: scenario shape, uncertainty
/// model, optimal cost, solve diagnostics, and the per-agent sensitivities.
pub fn write_summary<W: Write>(
    mut w: W,
    scenario: &VertiportScenario,
    model: &UncertaintyModel,
    solution: &CcceSolution,
    sensitivity: &SensitivityReport,
) -> io::Result<()> {
    writeln!(w, "key,value")?;
    writeln!(w, "agents,{}", scenario.n)?;
    writeln!(w, "vertiports,{}", scenario.m)?;
    writeln!(w, "gamma,{}", fmt_float(scenario.gamma))?;
    writeln!(w, "seed,{}", scenario.seed)?;
    writeln!(w, "form,{}", model.form().label())?;
    writeln!(w, "alpha,{}", fmt_float(model.confidence().value()))?;
    writeln!(w, "system_cost,{}", fmt_float(solution.system_cost))?;
    writeln!(w, "active_constraints,{}", solution.num_active())?;
    writeln!(w, "total_dual,{}", fmt_float(solution.total_dual()))?;
    writeln!(w, "degenerate,{}", solution.degenerate)?;
    writeln!(w, "iterations,{}", solution.iterations)?;
    writeln!(
        w,
        "alpha_sensitivity,{}",
        fmt_float(sensitivity.alpha_sensitivity)
    )?;
    for agent in 0..scenario.n {
        writeln!(w, "sigma_{agent},{}", fmt_float(model.sigma(agent)))?;
        writeln!(
            w,
            "lambda_agent_{agent},{}",
            fmt_float(solution.lambda_agent[agent])
        )?;
        writeln!(
            w,
            "sigma_sensitivity_{agent},{}",
            fmt_float(sensitivity.per_agent[agent])
        )?;
    }
    Ok(())
}

/// The confidence sweep, one row per (trial, confidence, method) cell.
pub fn write_sweep_rows<W: Write>(mut w: W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(
        w,
        "trial,alpha,method,feasible,expected,realized,realized_unweighted,normalized"
    )?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            row.trial,
            fmt_float(row.alpha),
            row.method.label(),
            row.feasible,
            fmt_opt(row.expected),
            fmt_opt(row.realized),
            fmt_opt(row.realized_unweighted),
            fmt_opt(row.normalized),
        )?;
    }
    Ok(())
}

/// Across-trial statistics per (confidence, method) cell.
pub fn write_sweep_summaries<W: Write>(
    mut w: W,
    summaries: &[SweepSummary],
) -> io::Result<()> {
    writeln!(
        w,
        "alpha,method,count,mean_realized,median_realized,q1_realized,q3_realized,\
         mean_normalized,median_normalized"
    )?;
    for s in summaries {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            fmt_float(s.alpha),
            s.method.label(),
            s.count,
            fmt_float(s.mean_realized),
            fmt_float(s.median_realized),
            fmt_float(s.q1_realized),
            fmt_float(s.q3_realized),
            fmt_float(s.mean_normalized),
            fmt_float(s.median_normalized),
        )?;
    }
    Ok(())
}

/// Instances a run had to skip: infeasible solves and missing baselines.
pub fn write_skipped<W: Write>(mut w: W, skipped: &[SkippedInstance]) -> io::Result<()> {
    writeln!(w, "trial,alpha,method,reason")?;
    for s in skipped {
        writeln!(
            w,
            "{},{},{},{}",
            s.trial,
            fmt_opt(s.alpha),
            s.method.label(),
            escape(&s.reason),
        )?;
    }
    Ok(())
}

/// The effective-cost curve over the confidence grid; `optimal` marks the
/// minimizing feasible row.
pub fn write_effective_cost<W: Write>(
    mut w: W,
    curve: &EffectiveCostCurve,
) -> io::Result<()> {
    writeln!(w, "alpha,feasible,j_sys,j_eff,stationarity_residual,optimal")?;
    for (i, &alpha) in curve.alphas.iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt_float(alpha),
            curve.feasible[i],
            fmt_float(curve.j_sys[i]),
            fmt_float(curve.j_eff[i]),
            fmt_float(curve.stationarity_residual[i]),
            i == curve.optimal_index,
        )?;
    }
    Ok(())
}

/// The acquisition study, one row per (trial, strategy); selected
/// constraints are semicolon-joined in row order.
pub fn write_acquisition_rows<W: Write>(
    mut w: W,
    rows: &[AcquisitionRow],
) -> io::Result<()> {
    writeln!(
        w,
        "trial,strategy,baseline_cost,resolved_cost,normalized,selected"
    )?;
    for row in rows {
        let selected = row
            .selected
            .iter()
            .map(|id| id.to_string())
            .collect::<Vec<_>>()
            .join(";");
        writeln!(
            w,
            "{},{},{},{},{},{selected}",
            row.trial,
            row.strategy.label(),
            fmt_float(row.baseline_cost),
            fmt_float(row.resolved_cost),
            fmt_float(row.normalized),
        )?;
    }
    Ok(())
}

/// Across-trial statistics per acquisition strategy.
pub fn write_acquisition_summaries<W: Write>(
    mut w: W,
    summaries: &[AcquisitionSummary],
) -> io::Result<()> {
    writeln!(
        w,
        "strategy,count,mean_normalized,median_normalized,sem_normalized"
    )?;
    for s in summaries {
        writeln!(
            w,
            "{},{},{},{},{}",
            s.strategy.label(),
            s.count,
            fmt_float(s.mean_normalized),
            fmt_float(s.median_normalized),
            fmt_float(s.sem_normalized),
        )?;
    }
    Ok(())
}
