//! The three subcommands. Each renders its artifact into memory first so a
//! failed run never leaves a partial file behind.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use fdr_core::analytic::{
    avg_snr, cdf_isdf, cdf_sd, cdf_sdf, cooperation_fraction, isdf_branch_audit, pdf_isdf, pdf_sdf,
};
use fdr_core::{simulate, sweep_rate, ProtocolKind, Report, SimOptions};

use crate::config::ScenarioConfig;
use crate::format::{csv_row, g10};
use crate::CliError;

pub const ANALYTIC_HEADER: &str = "gamma_db,cdf_dt,cdf_sdf,cdf_isdf,pdf_sdf,pdf_isdf";
pub const AUDIT_COLUMNS: &str = "isdf_upper_printed,isdf_upper_corrected";
pub const ECDF_HEADER: &str = "gamma_db,ecdf";
pub const SWEEP_HEADER: &str =
    "rate_bits,avg_snr_sim_sdf,avg_snr_ana_sdf,avg_snr_sim_isdf,avg_snr_ana_isdf,\
coop_pct_sim_sdf,coop_pct_ana_sdf,coop_pct_sim_isdf,coop_pct_ana_isdf";

fn runtime<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Writes to `out`, or stdout when no path is configured.
fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(runtime),
    }
}

pub fn analytic(cfg: &ScenarioConfig, audit: bool) -> Result<(), CliError> {
    let params = cfg.params()?;
    let grid = cfg.db_grid()?;
    let t = params.gamma_th();
    let mut text = String::from(ANALYTIC_HEADER);
    if audit {
        text.push(',');
        text.push_str(AUDIT_COLUMNS);
    }
    text.push('\n');
    for (db, g) in grid.points_db().into_iter().zip(grid.points_linear()) {
        let mut row = vec![
            g10(db),
            g10(cdf_sd(g, &params)),
            g10(cdf_sdf(g, &params)),
            g10(cdf_isdf(g, &params)),
            g10(pdf_sdf(g, &params)),
            g10(pdf_isdf(g, &params)),
        ];
        if audit {
            if g > t {
                let a = isdf_branch_audit(g, &params);
                row.extend([g10(a.printed), g10(a.corrected)]);
            } else {
                row.extend([String::new(), String::new()]);
            }
        }
        text.push_str(&csv_row(&row));
    }
    emit(cfg.out.as_deref(), &text)
}

fn options(cfg: &ScenarioConfig) -> Result<SimOptions, CliError> {
    Ok(SimOptions::new(cfg.blocks, cfg.seed)
        .workers(cfg.workers)
        .grid(cfg.db_grid()?))
}

fn ecdf_csv(report: &Report) -> String {
    let mut text = format!("{ECDF_HEADER}\n");
    let grid = report.ecdf.grid();
    for (db, f) in grid.points_db().into_iter().zip(report.ecdf.cdf()) {
        text.push_str(&csv_row(&[g10(db), g10(f)]));
    }
    text
}

fn summary(cfg: &ScenarioConfig, reports: &[Report]) -> Result<String, CliError> {
    let params = cfg.params()?;
    let mut text = String::new();
    for (k, v) in cfg.echo() {
        writeln!(text, "{k}={v}").map_err(runtime)?;
    }
    writeln!(text, "resolved.rate={}", params.rate()).map_err(runtime)?;
    writeln!(text, "resolved.gamma_th={}", params.gamma_th()).map_err(runtime)?;
    for r in reports {
        let key = r.protocol.name().to_ascii_lowercase();
        let sup = r.sup_distance.map_or_else(|| "na".to_string(), g10);
        let lines = [
            ("n_blocks", r.n_blocks.to_string()),
            ("seed", r.seed.to_string()),
            ("n_workers", r.n_workers.to_string()),
            ("mean_snr", g10(r.mean_snr)),
            ("mean_snr_se", g10(r.mean_snr_se)),
            ("outage_count", r.outage_count.to_string()),
            ("outage_rate", g10(r.outage_rate)),
            ("outage_rate_se", g10(r.outage_rate_se)),
            ("relay_active_fraction", g10(r.relay_active_fraction)),
            ("sup_distance", sup),
        ];
        for (name, value) in lines {
            writeln!(text, "{key}.{name}={value}").map_err(runtime)?;
        }
    }
    Ok(text)
}

pub fn simulate_cmd(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let dir = cfg.out.as_deref().ok_or_else(|| {
        CliError::Config("simulate needs an output directory (--out or `out`)".into())
    })?;
    let params = cfg.params()?;
    let opts = options(cfg)?;
    let reports = cfg
        .protocols
        .iter()
        .map(|&kind| simulate(kind, &params, &opts).map_err(runtime))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = summary(cfg, &reports)?;
    fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("{}: {e}", dir.display())))?;
    for r in &reports {
        let path = dir.join(format!("ecdf_{}.csv", r.protocol.name()));
        emit(Some(&path), &ecdf_csv(r))?;
    }
    emit(Some(&dir.join("summary.txt")), &summary)
}

pub fn sweep(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let params = cfg.params()?;
    let rates = cfg.rate_values()?;
    let opts = options(cfg)?;
    let sdf = sweep_rate(ProtocolKind::Sdf, &params, &rates, &opts).map_err(runtime)?;
    let isdf = sweep_rate(ProtocolKind::Isdf, &params, &rates, &opts).map_err(runtime)?;
    let mut text = format!("{SWEEP_HEADER}\n");
    for ((&rate, s), i) in rates.iter().zip(&sdf).zip(&isdf) {
        let p = params
            .with_rate(rate)
            .map_err(|e| CliError::Config(e.to_string()))?;
        let ana = |kind| avg_snr(kind, &p).expect("closed form exists");
        let coop = |kind| 100.0 * cooperation_fraction(kind, &p).expect("closed form exists");
        text.push_str(&csv_row(&[
            g10(rate),
            g10(s.mean_snr),
            g10(ana(ProtocolKind::Sdf)),
            g10(i.mean_snr),
            g10(ana(ProtocolKind::Isdf)),
            g10(100.0 * s.relay_active_fraction),
            g10(coop(ProtocolKind::Sdf)),
            g10(100.0 * i.relay_active_fraction),
            g10(coop(ProtocolKind::Isdf)),
        ]));
    }
    emit(cfg.out.as_deref(), &text)
}
