//! Scenario configuration: a flat `key = value` file overlaid by flags.

use std::fmt;
use std::path::{Path, PathBuf};

use fdr_core::{db_to_linear, DbGrid, Gains, Params, ProtocolKind};

use crate::CliError;

/// Rate or SNR threshold; either determines the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Rate(f64),
    GammaDb(f64),
}

/// `min:max:step`; a bare number is a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSpec {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl RangeSpec {
    pub fn parse(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{t}` is not a number"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => {
                let v = num(v)?;
                Ok(RangeSpec {
                    min: v,
                    max: v,
                    step: 1.0,
                })
            }
            [lo, hi, step] => Ok(RangeSpec {
                min: num(lo)?,
                max: num(hi)?,
                step: num(step)?,
            }),
            _ => Err(format!("expected min:max:step, got `{s}`")),
        }
    }

    /// Values from `min` to `max` inclusive.
    pub fn values(&self) -> Result<Vec<f64>, String> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(format!("step must be > 0, got {}", self.step));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.min > self.max {
            return Err(format!(
                "need finite min <= max, got {}:{}",
                self.min, self.max
            ));
        }
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize;
        Ok((0..=n).map(|k| self.min + self.step * k as f64).collect())
    }
}

impl fmt::Display for RangeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.step)
    }
}

/// Every setting optional, as read from one source.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub pi_sd_db: Option<f64>,
    pub pi_sr_db: Option<f64>,
    pub pi_rd_db: Option<f64>,
    pub pi_rr_db: Option<f64>,
    pub relay_power: Option<f64>,
    pub threshold: Option<Threshold>,
    pub block_len: Option<usize>,
    pub delay: Option<usize>,
    pub blocks: Option<u64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub protocols: Option<Vec<ProtocolKind>>,
    pub grid: Option<RangeSpec>,
    pub rates: Option<RangeSpec>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    /// Values set in `over` win.
    pub fn overlay(self, over: Overrides) -> Overrides {
        Overrides {
            pi_sd_db: over.pi_sd_db.or(self.pi_sd_db),
            pi_sr_db: over.pi_sr_db.or(self.pi_sr_db),
            pi_rd_db: over.pi_rd_db.or(self.pi_rd_db),
            pi_rr_db: over.pi_rr_db.or(self.pi_rr_db),
            relay_power: over.relay_power.or(self.relay_power),
            threshold: over.threshold.or(self.threshold),
            block_len: over.block_len.or(self.block_len),
            delay: over.delay.or(self.delay),
            blocks: over.blocks.or(self.blocks),
            seed: over.seed.or(self.seed),
            workers: over.workers.or(self.workers),
            protocols: over.protocols.or(self.protocols),
            grid: over.grid.or(self.grid),
            rates: over.rates.or(self.rates),
            out: over.out.or(self.out),
        }
    }

    pub fn from_file(path: &Path) -> Result<Overrides, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Overrides::parse(&text)
            .map_err(|(line, msg)| CliError::Config(format!("{}:{line}: {msg}", path.display())))
    }

    /// Parses config text; errors carry the 1-based line number.
    pub fn parse(text: &str) -> Result<Overrides, (usize, String)> {
        let mut cfg = Overrides::default();
        let mut seen = std::collections::HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| (line_no, format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err((line_no, format!("duplicate key `{key}`")));
            }
            cfg.set(key, value).map_err(|msg| (line_no, msg))?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
            v.parse()
                .map_err(|_| format!("invalid value `{v}` for `{key}`"))
        }
        match key {
            "pi_sd_db" => self.pi_sd_db = Some(num(key, value)?),
            "pi_sr_db" => self.pi_sr_db = Some(num(key, value)?),
            "pi_rd_db" => self.pi_rd_db = Some(num(key, value)?),
            "pi_rr_db" => self.pi_rr_db = Some(num(key, value)?),
            "relay_power" => self.relay_power = Some(num(key, value)?),
            "rate" | "gamma_th_db" => {
                if self.threshold.is_some() {
                    return Err("give only one of `rate` and `gamma_th_db`".into());
                }
                let v = num(key, value)?;
                self.threshold = Some(if key == "rate" {
                    Threshold::Rate(v)
                } else {
                    Threshold::GammaDb(v)
                });
            }
            "block_len" => self.block_len = Some(num(key, value)?),
            "delay" => self.delay = Some(num(key, value)?),
            "blocks" => self.blocks = Some(num(key, value)?),
            "seed" => self.seed = Some(num(key, value)?),
            "workers" => self.workers = Some(num(key, value)?),
            "protocols" => self.protocols = Some(parse_protocols(value)?),
            "grid" => self.grid = Some(RangeSpec::parse(value)?),
            "rates" => self.rates = Some(RangeSpec::parse(value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn parse_protocols(s: &str) -> Result<Vec<ProtocolKind>, String> {
    let kinds = s
        .split(',')
        .map(|p| p.trim().parse::<ProtocolKind>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if kinds.is_empty() {
        return Err("protocol list is empty".into());
    }
    Ok(kinds)
}

/// Fully resolved scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub pi_sd_db: f64,
    pub pi_sr_db: f64,
    pub pi_rd_db: f64,
    pub pi_rr_db: f64,
    pub relay_power: f64,
    pub threshold: Threshold,
    pub block_len: usize,
    pub delay: usize,
    pub blocks: u64,
    pub seed: u64,
    pub workers: usize,
    pub protocols: Vec<ProtocolKind>,
    pub grid: RangeSpec,
    pub rates: Option<RangeSpec>,
    pub out: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn resolve(o: Overrides) -> Result<ScenarioConfig, CliError> {
        let cfg = ScenarioConfig {
            pi_sd_db: o.pi_sd_db.unwrap_or(10.0),
            pi_sr_db: o.pi_sr_db.unwrap_or(20.0),
            pi_rd_db: o.pi_rd_db.unwrap_or(20.0),
            pi_rr_db: o.pi_rr_db.unwrap_or(10.0),
            relay_power: o.relay_power.unwrap_or(1.0),
            threshold: o.threshold.unwrap_or(Threshold::GammaDb(5.0)),
            block_len: o.block_len.unwrap_or(20),
            delay: o.delay.unwrap_or(2),
            blocks: o.blocks.unwrap_or(1_000_000),
            seed: o.seed.unwrap_or(0),
            workers: o.workers.unwrap_or_else(default_workers),
            protocols: o.protocols.unwrap_or_else(|| {
                vec![ProtocolKind::Direct, ProtocolKind::Sdf, ProtocolKind::Isdf]
            }),
            grid: o.grid.unwrap_or(RangeSpec {
                min: -40.0,
                max: 50.0,
                step: 0.1,
            }),
            rates: o.rates,
            out: o.out,
        };
        for (name, v) in [
            ("pi_sd_db", cfg.pi_sd_db),
            ("pi_sr_db", cfg.pi_sr_db),
            ("pi_rd_db", cfg.pi_rd_db),
            ("pi_rr_db", cfg.pi_rr_db),
        ] {
            if !v.is_finite() {
                return Err(CliError::Config(format!("{name} must be finite, got {v}")));
            }
        }
        cfg.params()?;
        cfg.db_grid()?;
        if let Some(r) = cfg.rates {
            r.values()
                .map_err(|e| CliError::Config(format!("rates: {e}")))?;
        }
        Ok(cfg)
    }

    pub fn params(&self) -> Result<Params, CliError> {
        let gains = Gains::from_db(self.pi_sd_db, self.pi_sr_db, self.pi_rd_db, self.pi_rr_db);
        let p = match self.threshold {
            Threshold::Rate(r) => {
                Params::new(gains, self.relay_power, r, self.block_len, self.delay)
            }
            Threshold::GammaDb(g) => Params::with_threshold(
                gains,
                self.relay_power,
                db_to_linear(g),
                self.block_len,
                self.delay,
            ),
        };
        p.map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn db_grid(&self) -> Result<DbGrid, CliError> {
        DbGrid::new(self.grid.min, self.grid.max, self.grid.step)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn rate_values(&self) -> Result<Vec<f64>, CliError> {
        let spec = self.rates.ok_or_else(|| {
            CliError::Config("sweep needs a rate range (--rates or `rates`)".into())
        })?;
        spec.values()
            .map_err(|e| CliError::Config(format!("rates: {e}")))
    }

    /// The resolved settings as config-file lines, exact to the last bit.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut kv = vec![
            ("pi_sd_db".to_string(), self.pi_sd_db.to_string()),
            ("pi_sr_db".into(), self.pi_sr_db.to_string()),
            ("pi_rd_db".into(), self.pi_rd_db.to_string()),
            ("pi_rr_db".into(), self.pi_rr_db.to_string()),
            ("relay_power".into(), self.relay_power.to_string()),
        ];
        kv.push(match self.threshold {
            Threshold::Rate(r) => ("rate".into(), r.to_string()),
            Threshold::GammaDb(g) => ("gamma_th_db".into(), g.to_string()),
        });
        kv.extend([
            ("block_len".into(), self.block_len.to_string()),
            ("delay".into(), self.delay.to_string()),
            ("blocks".into(), self.blocks.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("workers".into(), self.workers.to_string()),
            (
                "protocols".into(),
                self.protocols
                    .iter()
                    .map(|p| p.name())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("grid".into(), self.grid.to_string()),
        ]);
        if let Some(r) = self.rates {
            kv.push(("rates".into(), r.to_string()));
        }
        kv
    }
}
