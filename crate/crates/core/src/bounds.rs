//! Gallagher-type band-energy checks, the exponents of the correlation-average
//! bounds, empirical exponent fits and finite-scale bound reports.
//!
//! Variant `i` links `D_f(N,H)` to `J_f`; variant `ii` links `J_f(N,H)` to `J̃_f`.
//! For an exponent `A` in the admissible range the proof uses
//!
//! ```text
//! i :  δ = 2(1-A)/(3-A),  γ = (1-A)²/(3-A),     H₁ = [H^{1-δ}],  A ∈ [-1, 1)
//! ii:  δ = 2(1-A)/(5-A),  γ = (1-A)²/(2(5-A)),  H₂ = [H^{1-δ}],  A ∈ [-3, 1)
//! ```
//!
//! and concludes `D_f ⋉ (N + H^{2-A}) H^{1-δ}` (i) or `J_f ⋉ (N + H^{2-A}) H^{2-2δ}` (ii),
//! where `⋉` hides an `N^ε` factor. Only finite-scale ratios are computed here.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::arith::SampledFunction;
use crate::correlation::{check_cap_h, deviation, full_table, CorrelationTable};
use crate::error::{Error, Result};
use crate::selberg::WindowSums;
use crate::spectral::band_energy_from_table;

/// Default slack allowed for `⋉` in Gallagher checks.
pub const DEFAULT_THRESHOLD: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
}

impl Variant {
    /// Admissible `A` is `[lower, 1)`.
    pub fn lower(self) -> f64 {
        match self {
            Variant::I => -1.0,
            Variant::II => -3.0,
        }
    }

    fn interval(self) -> &'static str {
        match self {
            Variant::I => "[-1, 1)",
            Variant::II => "[-3, 1)",
        }
    }

    pub fn admits(self, a_exp: f64) -> bool {
        a_exp >= self.lower() && a_exp < 1.0
    }

    fn check(self, a_exp: f64) -> Result<()> {
        if self.admits(a_exp) {
            Ok(())
        } else {
            Err(Error::Domain {
                a_exp,
                interval: self.interval(),
            })
        }
    }

    /// `3` for i, `5` for ii.
    fn denominator(self) -> f64 {
        match self {
            Variant::I => 3.0,
            Variant::II => 5.0,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::I => "i",
            Variant::II => "ii",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "i" => Ok(Variant::I),
            "ii" => Ok(Variant::II),
            other => Err(Error::InvalidArgument(format!("unknown variant `{other}`"))),
        }
    }
}

/// `(δ, γ)` for exponent `A`.
pub fn proof_exponents(a_exp: f64, variant: Variant) -> Result<(f64, f64)> {
    variant.check(a_exp)?;
    let d = variant.denominator() - a_exp;
    let one_minus = 1.0 - a_exp;
    let delta = 2.0 * one_minus / d;
    let gamma = match variant {
        Variant::I => one_minus * one_minus / d,
        Variant::II => one_minus * one_minus / (2.0 * d),
    };
    Ok((delta, gamma))
}

/// `1 - 2(1-A)/(3-A)` (i) or `1 - 2(1-A)/(5-A)` (ii), without range checks.
pub fn length_exponent(a_exp: f64, variant: Variant) -> f64 {
    1.0 - 2.0 * (1.0 - a_exp) / (variant.denominator() - a_exp)
}

/// `[x^e]`, nudged so exact integer powers are not lost to rounding, clamped to `>= 1`.
fn integer_power(x: usize, exponent: f64) -> usize {
    let v = (x as f64).powf(exponent);
    let mut k = v.floor();
    if (k + 1.0) - v <= 1e-9 * v {
        k += 1.0;
    }
    (k as usize).max(1)
}

/// The auxiliary length `H₁` (i) or `H₂` (ii).
pub fn theorem_lengths(cap_h: usize, a_exp: f64, variant: Variant) -> Result<usize> {
    variant.check(a_exp)?;
    if cap_h == 0 {
        return Err(Error::InvalidArgument("H must be positive".into()));
    }
    Ok(integer_power(cap_h, length_exponent(a_exp, variant)))
}

/// Exponents and derived length for one `(A, variant, H)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentParams {
    pub a_exp: f64,
    pub variant: Variant,
    pub delta: f64,
    pub gamma: f64,
    pub cap_h: usize,
    pub derived_length: usize,
}

impl ExponentParams {
    pub fn new(a_exp: f64, variant: Variant, cap_h: usize) -> Result<Self> {
        let (delta, gamma) = proof_exponents(a_exp, variant)?;
        let derived_length = theorem_lengths(cap_h, a_exp, variant)?;
        Ok(ExponentParams {
            a_exp,
            variant,
            delta,
            gamma,
            cap_h,
            derived_length,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GallagherReport {
    pub variant: Variant,
    pub h: usize,
    /// `h² ∫_{|α|<=1/(2h)} |f̂(α)|² dα`
    pub lhs: f64,
    /// `J_f(N,h) + h³‖f‖²_∞` (i) or `J̃_f(N,h) + h³‖f‖²_∞` (ii)
    pub rhs_core: f64,
    pub ratio: f64,
    pub threshold: f64,
}

impl GallagherReport {
    pub fn within_threshold(&self) -> bool {
        self.ratio <= self.threshold
    }
}

/// Gallagher check reusing a full correlation table and prefix sums.
pub fn gallagher_from_parts(
    table: &CorrelationTable,
    sums: &WindowSums<'_>,
    h: usize,
    variant: Variant,
    threshold: f64,
) -> Result<GallagherReport> {
    let f = sums.function();
    check_cap_h(f, h)?;
    if !(threshold > 0.0) {
        return Err(Error::InvalidArgument(format!("threshold {threshold} must be positive")));
    }
    let hf = h as f64;
    let lhs = hf * hf * band_energy_from_table(table, 1.0 / (2.0 * hf))?;
    let integral = match variant {
        Variant::I => sums.selberg(h)?,
        Variant::II => sums.modified(h)?,
    };
    let rhs_core = integral + hf * hf * hf * f.sup_norm() * f.sup_norm();
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs_core };
    Ok(GallagherReport {
        variant,
        h,
        lhs,
        rhs_core,
        ratio,
        threshold,
    })
}

pub fn gallagher_check(f: &SampledFunction, h: usize, variant: Variant, threshold: f64) -> Result<GallagherReport> {
    check_cap_h(f, h)?;
    gallagher_from_parts(&full_table(f), &WindowSums::new(f), h, variant, threshold)
}

/// Outcome of a log-log fit of `value/N` against `H`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentFit {
    /// `A = slope - 1`.
    pub a_exp: f64,
    pub slope: f64,
    pub intercept: f64,
    pub used: usize,
    /// Points dropped for a zero (or negative) value.
    pub excluded: usize,
}

/// Least-squares fit of `log(value/N) = s·log H + c`, returning `A = s - 1`.
pub fn fit_exponent(points: &[(usize, f64)], big_n: usize) -> Result<ExponentFit> {
    if big_n == 0 {
        return Err(Error::Fit("N must be positive".into()));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut excluded = 0;
    for &(cap_h, value) in points {
        if cap_h == 0 || !value.is_finite() {
            return Err(Error::Fit(format!("bad point ({cap_h}, {value})")));
        }
        if value <= 0.0 {
            excluded += 1;
            continue;
        }
        xs.push((cap_h as f64).ln());
        ys.push((value / big_n as f64).ln());
    }
    let distinct = {
        let mut hs: Vec<usize> = points.iter().filter(|p| p.1 > 0.0).map(|p| p.0).collect();
        hs.sort_unstable();
        hs.dedup();
        hs.len()
    };
    if distinct < 2 {
        return Err(Error::Fit(format!(
            "need at least 2 positive points with distinct H, have {distinct}"
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = sxy / sxx;
    Ok(ExponentFit {
        a_exp: slope - 1.0,
        slope,
        intercept: my - slope * mx,
        used: xs.len(),
        excluded,
    })
}

/// Finite-scale diagnostic for one conclusion of the bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub params: ExponentParams,
    pub big_n: usize,
    /// `J_f` (i) or `J̃_f` (ii) at `H`.
    pub hypothesis_at_h: f64,
    /// Same quantity at the derived length.
    pub hypothesis_at_derived: f64,
    /// `hypothesis_at_h / (N·H^{1+A})`.
    pub hypothesis_ratio_h: f64,
    pub hypothesis_ratio_derived: f64,
    /// `|D_f(N,H)|` (i) or `J_f(N,H)` (ii).
    pub observed: f64,
    /// `(N + H^{2-A}) H^{1-δ}` (i) or `(N + H^{2-A}) H^{2-2δ}` (ii).
    pub bound: f64,
    pub conclusion_ratio: f64,
}

pub fn theorem_report(f: &SampledFunction, cap_h: usize, variant: Variant, a_exp: f64) -> Result<TheoremReport> {
    let params = ExponentParams::new(a_exp, variant, cap_h)?;
    check_cap_h(f, cap_h)?;
    let sums = WindowSums::new(f);
    let n = f.big_n() as f64;
    let hyp = |len: usize| match variant {
        Variant::I => sums.selberg(len),
        Variant::II => sums.modified(len),
    };
    let hypothesis_at_h = hyp(cap_h)?;
    let hypothesis_at_derived = hyp(params.derived_length)?;
    let norm = |len: usize| n * (len as f64).powf(1.0 + a_exp);
    let observed = match variant {
        Variant::I => deviation(f, cap_h)?.abs(),
        Variant::II => sums.selberg(cap_h)?,
    };
    let hf = cap_h as f64;
    let bound = (n + hf.powf(2.0 - a_exp))
        * match variant {
            Variant::I => hf.powf(1.0 - params.delta),
            Variant::II => hf.powf(2.0 - 2.0 * params.delta),
        };
    Ok(TheoremReport {
        hypothesis_ratio_h: hypothesis_at_h / norm(cap_h),
        hypothesis_ratio_derived: hypothesis_at_derived / norm(params.derived_length),
        hypothesis_at_h,
        hypothesis_at_derived,
        conclusion_ratio: observed / bound,
        observed,
        bound,
        big_n: f.big_n(),
        params,
    })
}
