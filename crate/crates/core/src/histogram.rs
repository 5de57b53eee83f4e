//! Binned empirical distributions of effective SNR and their distance to
//! closed-form CDFs.

use crate::analytic::{AnalyticCurve, CurveKind};
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Uniform grid of SNR values in dB, `min, min + step, ..., max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbGrid {
    min_db: f64,
    max_db: f64,
    step_db: f64,
    points: usize,
}

impl DbGrid {
    /// `min == max` gives a single point; `min` may then be `-inf` (linear 0).
    pub fn new(min_db: f64, max_db: f64, step_db: f64) -> Result<Self> {
        if !(step_db.is_finite() && step_db > 0.0) {
            return Err(invalid(
                "grid step",
                format!("must be finite and > 0, got {step_db}"),
            ));
        }
        if min_db.is_nan() || max_db.is_nan() || min_db > max_db {
            return Err(invalid(
                "grid",
                format!("need min <= max, got {min_db}..{max_db}"),
            ));
        }
        if min_db == max_db {
            if min_db == f64::INFINITY {
                return Err(invalid("grid", "+inf is not a valid grid point"));
            }
            return Ok(DbGrid {
                min_db,
                max_db,
                step_db,
                points: 1,
            });
        }
        if !min_db.is_finite() || !max_db.is_finite() {
            return Err(invalid("grid", "bounds must be finite unless min == max"));
        }
        let span = (max_db - min_db) / step_db;
        let points = (span + 1e-9).floor() as usize + 1;
        if points > 10_000_000 {
            return Err(invalid("grid", format!("{points} points is too many")));
        }
        Ok(DbGrid {
            min_db,
            max_db,
            step_db,
            points,
        })
    }

    /// -40 dB to +50 dB in 0.1 dB steps.
    pub fn standard() -> Self {
        DbGrid::new(-40.0, 50.0, 0.1).expect("standard grid is valid")
    }

    pub fn min_db(&self) -> f64 {
        self.min_db
    }
    pub fn max_db(&self) -> f64 {
        self.max_db
    }
    pub fn step_db(&self) -> f64 {
        self.step_db
    }
    pub fn len(&self) -> usize {
        self.points
    }
    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    pub fn points_db(&self) -> Vec<f64> {
        (0..self.points)
            .map(|k| self.min_db + k as f64 * self.step_db)
            .collect()
    }

    pub fn points_linear(&self) -> Vec<f64> {
        self.points_db()
            .into_iter()
            .map(|db| 10f64.powf(db / 10.0))
            .collect()
    }
}

/// Histogram of effective SNRs over the cells between consecutive grid
/// points, with underflow (`< first point`) and overflow (`>= last point`).
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    grid: DbGrid,
    edges: Vec<f64>,
    counts: Vec<u64>,
    underflow: u64,
    overflow: u64,
    n_total: u64,
}

impl EmpiricalDistribution {
    pub fn new(grid: DbGrid) -> Self {
        let edges = grid.points_linear();
        let counts = vec![0; edges.len().saturating_sub(1)];
        EmpiricalDistribution {
            grid,
            edges,
            counts,
            underflow: 0,
            overflow: 0,
            n_total: 0,
        }
    }

    pub fn push(&mut self, snr: f64) {
        let j = self.edges.partition_point(|&e| e <= snr);
        if j == 0 {
            self.underflow += 1;
        } else if j == self.edges.len() {
            self.overflow += 1;
        } else {
            self.counts[j - 1] += 1;
        }
        self.n_total += 1;
    }

    /// Adds another histogram on the same grid.
    pub fn merge(&mut self, other: &EmpiricalDistribution) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(
                "cannot merge histograms on different grids".into(),
            ));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.underflow += other.underflow;
        self.overflow += other.overflow;
        self.n_total += other.n_total;
        Ok(())
    }

    pub fn grid(&self) -> &DbGrid {
        &self.grid
    }
    /// Grid points in linear scale.
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
    pub fn underflow(&self) -> u64 {
        self.underflow
    }
    pub fn overflow(&self) -> u64 {
        self.overflow
    }
    pub fn n_total(&self) -> u64 {
        self.n_total
    }

    /// Fraction of samples strictly below each grid point.
    pub fn cdf(&self) -> Vec<f64> {
        let n = self.n_total.max(1) as f64;
        let mut below = self.underflow;
        let mut out = Vec::with_capacity(self.edges.len());
        out.push(below as f64 / n);
        for c in &self.counts {
            below += c;
            out.push(below as f64 / n);
        }
        out
    }
}

/// Largest gap between the empirical CDF and a closed-form CDF over the
/// histogram's grid points. The curve must be sampled at every one of them.
pub fn sup_distance<T: Scalar>(
    emp: &EmpiricalDistribution,
    curve: &AnalyticCurve<T>,
) -> Result<f64> {
    if curve.kind() != CurveKind::Cdf {
        return Err(Error::GridMismatch("sup distance needs a CDF curve".into()));
    }
    if emp.n_total() == 0 {
        return Err(Error::GridMismatch(
            "empirical distribution is empty".into(),
        ));
    }
    let grid: Vec<f64> = curve.grid().iter().map(|g| g.as_f64()).collect();
    let values = curve.values();
    let tol = 1e-9_f64.max(4.0 * T::epsilon().as_f64());
    let mut sup = 0.0_f64;
    for (edge, ecdf) in emp.edges().iter().zip(emp.cdf()) {
        let idx = lookup(&grid, *edge, tol)
            .ok_or_else(|| Error::GridMismatch(format!("curve has no point at SNR {edge}")))?;
        sup = sup.max((ecdf - values[idx].as_f64()).abs());
    }
    Ok(sup)
}

fn lookup(grid: &[f64], x: f64, tol: f64) -> Option<usize> {
    let close = |g: f64| g == x || (g - x).abs() <= tol * g.abs().max(x.abs());
    let i = grid.partition_point(|&g| g < x);
    [i.checked_sub(1), Some(i)]
        .into_iter()
        .flatten()
        .find(|&k| k < grid.len() && close(grid[k]))
}
