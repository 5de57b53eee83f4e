//! Closed-form outage probabilities, end-to-end SNR distributions and
//! average SNRs for direct transmission, SDF and ISDF.
//!
//! The cooperative SNR is approximated by `alpha = gamma_sd + gamma_rd`,
//! a hypoexponential variable with means `a = pi_sd` and `b = P pi_rd`.
//! Every expression with `(b - a)` in a denominator is evaluated through
//! `(1 - e^{-x}) / x` factorisations, which stay finite as `b -> a` and
//! reduce to the Erlang-2 forms inside the degenerate band.

use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::protocol::ProtocolKind;
use crate::scalar::{clamp_unit, exp_neg, exprel_neg, Scalar};

/// Relative width of the band around `P pi_rd = pi_sd` treated as equal means.
pub const DEGENERATE_REL_TOL: f64 = 1e-9;

/// Outage probabilities of the three links at `gamma_th`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkOutageSet<T> {
    pub p_sr: T,
    pub p_sd: T,
    pub p_rd: T,
}

impl<T: Scalar> LinkOutageSet<T> {
    pub fn new(params: &SystemParams<T>) -> Self {
        LinkOutageSet {
            p_sr: p_out_sr(params),
            p_sd: p_out_sd(params),
            p_rd: cdf_rd(params.gamma_th(), params),
        }
    }
}

/// S->R outage with residual self-interference:
/// `1 - pi_sr e^{-g/pi_sr} / (g P pi_rr + pi_sr)`.
pub fn p_out_sr<T: Scalar>(params: &SystemParams<T>) -> T {
    let g = params.gamma_th();
    let sr = params.pi_sr();
    let interference = g * params.relay_power() * params.pi_rr();
    clamp_unit(T::one() - sr * exp_neg(g / sr) / (interference + sr))
}

/// S->D outage, `1 - e^{-gamma_th / pi_sd}`.
pub fn p_out_sd<T: Scalar>(params: &SystemParams<T>) -> T {
    cdf_sd(params.gamma_th(), params)
}

pub fn cdf_sd<T: Scalar>(gamma: T, params: &SystemParams<T>) -> T {
    exp_cdf(gamma, params.pi_sd())
}

pub fn pdf_sd<T: Scalar>(gamma: T, params: &SystemParams<T>) -> T {
    exp_pdf(gamma, params.pi_sd())
}

/// CDF of `gamma_rd = P |h_rd|^2`; a unit step at zero when the relay is silent.
pub fn cdf_rd<T: Scalar>(gamma: T, params: &SystemParams<T>) -> T {
    let b = params.mean_snr_rd();
    if b == T::zero() {
        return if gamma >= T::zero() {
            T::one()
        } else {
            T::zero()
        };
    }
    exp_cdf(gamma, b)
}

fn exp_cdf<T: Scalar>(gamma: T, mean: T) -> T {
    if gamma <= T::zero() {
        return T::zero();
    }
    if gamma.is_infinite() {
        return T::one();
    }
    clamp_unit(-(-gamma / mean).exp_m1())
}

fn exp_pdf<T: Scalar>(gamma: T, mean: T) -> T {
    if gamma < T::zero() {
        return T::zero();
    }
    exp_neg(gamma / mean) / mean
}

/// The two exponential means of `alpha` and the magnitude of their rate gap.
#[derive(Debug, Clone, Copy)]
struct MeanPair<T> {
    a: T,
    b: T,
    /// `|b - a| / (a b)`, zero inside the degenerate band.
    gap: T,
    b_larger: bool,
}

impl<T: Scalar> MeanPair<T> {
    fn new(params: &SystemParams<T>) -> Self {
        let a = params.pi_sd();
        let b = params.mean_snr_rd();
        let diff = b - a;
        let degenerate = diff.abs() < T::of(DEGENERATE_REL_TOL) * a.max(b);
        let gap = if degenerate || b == T::zero() {
            T::zero()
        } else {
            diff.abs() / (a * b)
        };
        MeanPair {
            a,
            b,
            gap,
            b_larger: diff >= T::zero(),
        }
    }

    fn silent(&self) -> bool {
        self.b == T::zero()
    }

    /// `b (e^{-x/b} - e^{-x/a}) / (b - a)`, i.e. `F_sd(x) - F_alpha(x)`.
    fn excess(&self, x: T) -> T {
        if self.silent() || x <= T::zero() || x.is_infinite() {
            return T::zero();
        }
        let big = self.a.max(self.b);
        x * exp_neg(x / big) * exprel_neg(x * self.gap) / self.a
    }

    /// `b (1 - e^{-t (b-a)/(ab)}) e^{-x/b} / (b - a)` for `x >= t`.
    fn tail(&self, t: T, x: T) -> T {
        if self.silent() || x.is_infinite() {
            return T::zero();
        }
        let shift = if self.b_larger {
            T::zero()
        } else {
            t * self.gap
        };
        t / self.a * exprel_neg(t * self.gap) * exp_neg(x / self.b - shift)
    }
}

/// CDF of `alpha = gamma_sd + gamma_rd` (hypoexponential, Erlang-2 at equal means).
pub fn cdf_hypoexp<T: Scalar>(gamma: T, params: &SystemParams<T>) -> T {
    if gamma <= T::zero() {
        return T::zero();
    }
    let pair = MeanPair::new(params);
    clamp_unit(cdf_sd(gamma, params) - pair.excess(gamma))
}

/// Density of `alpha`.
pub fn pdf_hypoexp<T: Scalar>(gamma: T, params: &SystemParams<T>) -> T {
    if gamma < T::zero() {
        return T::zero();
    }
    let pair = MeanPair::new(params);
    if pair.silent() {
        return pdf_sd(gamma, params);
    }
    (pair.excess(gamma) / pair.b).max(T::zero())
}

/// Outage probability. SDF and ISDF share the same outage events, so both
/// return `P_sr P_sd + (1 - P_sr) F_alpha(gamma_th)`. `None` for the
/// non-selective baseline, which has no closed form.
pub fn p_out_protocol<T: Scalar>(kind: ProtocolKind, params: &SystemParams<T>) -> Option<T> {
    let p = LinkOutageSet::new(params);
    match kind {
        ProtocolKind::Direct => Some(p.p_sd),
        ProtocolKind::Sdf | ProtocolKind::Isdf => {
            let miso = cdf_hypoexp(params.gamma_th(), params);
            Some(clamp_unit(p.p_sr * p.p_sd + (T::one() - p.p_sr) * miso))
        }
        ProtocolKind::NonSelective => None,
    }
}

/// End-to-end SNR CDF under SDF: `P_sr F_sd + (1 - P_sr) F_alpha`.
pub fn cdf_sdf<T: Scalar>(gamma: T, params: &SystemParams<T>) -> T {
    let p_sr = p_out_sr(params);
    clamp_unit(p_sr * cdf_sd(gamma, params) + (T::one() - p_sr) * cdf_hypoexp(gamma, params))
}

pub fn pdf_sdf<T: Scalar>(gamma: T, params: &SystemParams<T>) -> T {
    let p_sr = p_out_sr(params);
    p_sr * pdf_sd(gamma, params) + (T::one() - p_sr) * pdf_hypoexp(gamma, params)
}

/// End-to-end SNR CDF under ISDF.
///
/// Below `gamma_th` only the blocks where the direct link fails contribute,
/// and the curve coincides with SDF. Above it the cooperative blocks
/// contribute `(1 - P_sr) P_sd F2(gamma)` with
/// `F2 = 1 - b (1 - e^{-t (b - a)/(ab)}) e^{-gamma/b} / (P_sd (b - a))`,
/// which gives `F_sd - (1 - P_sr) b (P_sd - P_rd) (1 - F_rd) / ((b - a)(1 - P_rd))`.
/// The commonly printed form of this branch has `1 +` in `F2` and
/// `P_sd / P_rd - 1` in the total; it exceeds one for `b > a` and is
/// available via [`isdf_branch_audit`] only.
pub fn cdf_isdf<T: Scalar>(gamma: T, params: &SystemParams<T>) -> T {
    let t = params.gamma_th();
    if gamma <= t {
        return cdf_sdf(gamma, params);
    }
    let p_sr = p_out_sr(params);
    let pair = MeanPair::new(params);
    clamp_unit(cdf_sd(gamma, params) - (T::one() - p_sr) * pair.tail(t, gamma))
}

pub fn pdf_isdf<T: Scalar>(gamma: T, params: &SystemParams<T>) -> T {
    let t = params.gamma_th();
    if gamma <= t {
        return pdf_sdf(gamma, params);
    }
    let p_sr = p_out_sr(params);
    let pair = MeanPair::new(params);
    let coop = if pair.silent() {
        T::zero()
    } else {
        pair.tail(t, gamma) / pair.b
    };
    pdf_sd(gamma, params) + (T::one() - p_sr) * coop
}

/// `P{gamma_sd + gamma_rd < gamma | gamma_sd < gamma_th}`: the law of the
/// cooperative SNR on the blocks where ISDF asks the relay for help.
pub fn cdf_miso_given_direct_outage<T: Scalar>(gamma: T, params: &SystemParams<T>) -> T {
    let t = params.gamma_th();
    let p_sd = p_out_sd(params);
    if gamma <= T::zero() || p_sd == T::zero() {
        return T::zero();
    }
    if gamma <= t {
        return clamp_unit(cdf_hypoexp(gamma, params) / p_sd);
    }
    let pair = MeanPair::new(params);
    clamp_unit(T::one() - pair.tail(t, gamma) / p_sd)
}

/// Values of the ISDF upper branch in its printed and corrected forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsdfBranchAudit<T> {
    pub printed: T,
    pub corrected: T,
}

/// Diagnostic comparing the printed ISDF upper-branch CDF against the
/// implemented one at `gamma > gamma_th`. The printed value is evaluated
/// naively and is NaN at the degenerate point.
pub fn isdf_branch_audit<T: Scalar>(gamma: T, params: &SystemParams<T>) -> IsdfBranchAudit<T> {
    let p = LinkOutageSet::new(params);
    let (a, b) = (params.pi_sd(), params.mean_snr_rd());
    let printed = cdf_sd(gamma, params)
        + b * (T::one() - p.p_sr)
            * (p.p_sd / p.p_rd - T::one())
            * (T::one() - cdf_rd(gamma, params))
            / (b - a);
    IsdfBranchAudit {
        printed,
        corrected: cdf_isdf(gamma, params),
    }
}

/// End-to-end SNR CDF for `kind`; `None` for the non-selective baseline.
pub fn end_to_end_cdf<T: Scalar>(
    kind: ProtocolKind,
    gamma: T,
    params: &SystemParams<T>,
) -> Option<T> {
    match kind {
        ProtocolKind::Direct => Some(cdf_sd(gamma, params)),
        ProtocolKind::Sdf => Some(cdf_sdf(gamma, params)),
        ProtocolKind::Isdf => Some(cdf_isdf(gamma, params)),
        ProtocolKind::NonSelective => None,
    }
}

pub fn end_to_end_pdf<T: Scalar>(
    kind: ProtocolKind,
    gamma: T,
    params: &SystemParams<T>,
) -> Option<T> {
    match kind {
        ProtocolKind::Direct => Some(pdf_sd(gamma, params)),
        ProtocolKind::Sdf => Some(pdf_sdf(gamma, params)),
        ProtocolKind::Isdf => Some(pdf_isdf(gamma, params)),
        ProtocolKind::NonSelective => None,
    }
}

/// Average end-to-end SNR: `pi_sd`, `pi_sd + P pi_rd (1 - P_sr)` and
/// `pi_sd + P pi_rd (1 - P_sr) P_sd` for DT, SDF and ISDF.
pub fn avg_snr<T: Scalar>(kind: ProtocolKind, params: &SystemParams<T>) -> Option<T> {
    let boost = params.mean_snr_rd();
    cooperation_fraction(kind, params)
        .filter(|_| kind != ProtocolKind::NonSelective)
        .map(|frac| params.pi_sd() + boost * frac)
}

/// Long-run fraction of blocks in which the relay transmits.
pub fn cooperation_fraction<T: Scalar>(kind: ProtocolKind, params: &SystemParams<T>) -> Option<T> {
    let p = LinkOutageSet::new(params);
    Some(match kind {
        ProtocolKind::Direct => T::zero(),
        ProtocolKind::Sdf => T::one() - p.p_sr,
        ProtocolKind::Isdf => (T::one() - p.p_sr) * p.p_sd,
        ProtocolKind::NonSelective => T::one(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Cdf,
    Pdf,
}

/// A closed-form curve sampled on a strictly increasing linear-SNR grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticCurve<T> {
    grid: Vec<T>,
    values: Vec<T>,
    kind: CurveKind,
}

impl<T: Scalar> AnalyticCurve<T> {
    pub fn new(grid: Vec<T>, values: Vec<T>, kind: CurveKind) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::GridMismatch(format!(
                "{} grid points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::GridMismatch(
                "grid must be strictly increasing".into(),
            ));
        }
        Ok(AnalyticCurve { grid, values, kind })
    }

    pub fn evaluate(grid: Vec<T>, kind: CurveKind, f: impl Fn(T) -> T) -> Result<Self> {
        let values = grid.iter().map(|&g| f(g)).collect();
        Self::new(grid, values, kind)
    }

    /// End-to-end CDF of `kind` on `grid`; `None` for the non-selective baseline.
    pub fn protocol_cdf(
        kind: ProtocolKind,
        grid: Vec<T>,
        params: &SystemParams<T>,
    ) -> Option<Self> {
        end_to_end_cdf(kind, T::zero(), params)?;
        Self::evaluate(grid, CurveKind::Cdf, |g| {
            end_to_end_cdf(kind, g, params).unwrap_or_else(T::nan)
        })
        .ok()
    }

    pub fn grid(&self) -> &[T] {
        &self.grid
    }
    pub fn values(&self) -> &[T] {
        &self.values
    }
    pub fn kind(&self) -> CurveKind {
        self.kind
    }
}
