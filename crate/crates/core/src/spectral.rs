//! Exact evaluation of `∫_0^1 |f̂(β)|² K(β) dβ` for the three kernels.
//!
//! With `f̂(β) = Σ_{n∼N} f(n) e(nβ)` we have `|f̂(β)|² = Σ_k c'_k e(kβ)`. Each
//! kernel is a trigonometric polynomial `K(β) = Σ_k κ(k) e(-kβ)`, so orthogonality
//! collapses the integral to `Σ_k κ(k) c'_k`. No quadrature is involved.
//!
//! | kernel          | `K(β)`           | `κ(k)`                          | `Σ κ` |
//! |-----------------|------------------|---------------------------------|-------|
//! | `UnitStep`      | `û_H(-β)`        | `1` for `1 <= k <= H`           | `H`   |
//! | `Fejer`         | `|û_H(β)|²`      | `U_H(k)`, `|k| <= H-1`          | `H²`  |
//! | `CesaroSquared` | `|û_H(β)|⁴/H²`   | `Ũ_H(k)`, `|k| <= 2H-2`         | `H²`  |

use serde::Serialize;

use crate::arith::SampledFunction;
use crate::correlation::{check_cap_h, deviation, full_table, near_diag_table, CorrelationTable, TableMode};
use crate::error::{Error, Result};
use crate::kernels::{cesaro_sq_weight, correlation_weight, sin_turns, KernelKind};
use crate::selberg::WindowSums;

/// Fourier coefficients `κ(k)` of one kernel, stored densely over `min_lag..=max_lag`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelCoeffs {
    pub kind: KernelKind,
    pub cap_h: usize,
    min_lag: i64,
    weights: Vec<f64>,
}

impl KernelCoeffs {
    pub fn new(kind: KernelKind, cap_h: usize) -> Self {
        assert!(cap_h >= 1, "H must be positive");
        let h = cap_h as i64;
        let (min_lag, max_lag) = match kind {
            KernelKind::UnitStep => (1, h),
            KernelKind::Fejer => (-(h - 1), h - 1),
            KernelKind::CesaroSquared => (-(2 * h - 2), 2 * h - 2),
        };
        let weights = (min_lag..=max_lag)
            .map(|k| match kind {
                KernelKind::UnitStep => 1.0,
                KernelKind::Fejer => correlation_weight(k, cap_h as u64) as f64,
                KernelKind::CesaroSquared => cesaro_sq_weight(k, cap_h as u64),
            })
            .collect();
        KernelCoeffs {
            kind,
            cap_h,
            min_lag,
            weights,
        }
    }

    /// `κ(k)`, zero off the support.
    pub fn get(&self, k: i64) -> f64 {
        let i = k - self.min_lag;
        if i < 0 {
            return 0.0;
        }
        self.weights.get(i as usize).copied().unwrap_or(0.0)
    }

    /// Largest `|k|` with `κ(k) != 0`.
    pub fn support(&self) -> usize {
        (self.min_lag + self.weights.len() as i64 - 1) as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .map(move |(i, &w)| (self.min_lag + i as i64, w))
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

pub fn kernel_coeffs(kind: KernelKind, cap_h: usize) -> KernelCoeffs {
    KernelCoeffs::new(kind, cap_h)
}

/// `Σ_k κ(k) c'_k`. The table must reach `min(support, N - 1)`.
pub fn main_term_from_table(table: &CorrelationTable, kernel: &KernelCoeffs) -> Result<f64> {
    let needed = kernel.support().min(table.big_n() - 1);
    if table.max_lag() < needed {
        return Err(Error::InvalidArgument(format!(
            "correlation table reaches lag {}, kernel needs {needed}",
            table.max_lag()
        )));
    }
    let value = match kernel.kind {
        KernelKind::UnitStep => (1..=kernel.cap_h as i64).fold(0.0, |acc, k| acc + table.get(k)),
        KernelKind::Fejer | KernelKind::CesaroSquared => {
            // even kernel against an even table
            let mut acc = kernel.get(0) * table.get(0);
            for k in 1..=kernel.support() as i64 {
                acc += kernel.get(k) * 2.0 * table.get(k);
            }
            acc
        }
    };
    Ok(value)
}

/// `∫_0^1 |f̂(β)|² K(β) dβ`, exactly.
pub fn main_term(f: &SampledFunction, cap_h: usize, kind: KernelKind) -> Result<f64> {
    check_cap_h(f, cap_h)?;
    let kernel = KernelCoeffs::new(kind, cap_h);
    let lag = kernel.support().min(f.big_n() - 1);
    let mode = if lag < 64 { TableMode::Direct } else { TableMode::Fft };
    let table = near_diag_table(f, lag, mode)?;
    main_term_from_table(&table, &kernel)
}

/// The three first-, second- and third-generation identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Identity {
    /// `D_f(N,H)` against the `UnitStep` kernel.
    I,
    /// `J_f(N,H)` against the `Fejer` kernel.
    II,
    /// `J̃_f(N,H)` against the `CesaroSquared` kernel.
    III,
}

impl Identity {
    pub const ALL: [Identity; 3] = [Identity::I, Identity::II, Identity::III];

    pub fn kernel(self) -> KernelKind {
        match self {
            Identity::I => KernelKind::UnitStep,
            Identity::II => KernelKind::Fejer,
            Identity::III => KernelKind::CesaroSquared,
        }
    }

    /// `(c, p)` in the residual bound `c·H^p·‖f‖²_∞`.
    pub fn bound_constants(self) -> (f64, i32) {
        match self {
            Identity::I => (2.0, 2),
            Identity::II | Identity::III => (8.0, 3),
        }
    }

    pub fn bound(self, cap_h: usize, sup_norm: f64) -> f64 {
        let (c, p) = self.bound_constants();
        c * (cap_h as f64).powi(p) * sup_norm * sup_norm
    }
}

impl std::str::FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(Identity::I),
            "II" => Ok(Identity::II),
            "III" => Ok(Identity::III),
            other => Err(Error::InvalidArgument(format!("unknown identity `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub which: Identity,
    pub cap_h: usize,
    pub lhs: f64,
    pub main_term: f64,
    pub residual: f64,
    pub bound: f64,
    pub ratio: f64,
}

impl IdentityReport {
    pub fn new(which: Identity, cap_h: usize, sup_norm: f64, lhs: f64, main_term: f64) -> Self {
        let residual = (lhs - main_term).abs();
        let bound = which.bound(cap_h, sup_norm);
        let ratio = if residual == 0.0 { 0.0 } else { residual / bound };
        IdentityReport {
            which,
            cap_h,
            lhs,
            main_term,
            residual,
            bound,
            ratio,
        }
    }

    pub fn holds(&self) -> bool {
        self.ratio <= 1.0
    }
}

/// Compares `D_f`, `J_f` or `J̃_f` with its spectral main term.
pub fn verify_identity(f: &SampledFunction, cap_h: usize, which: Identity) -> Result<IdentityReport> {
    check_cap_h(f, cap_h)?;
    let lhs = match which {
        Identity::I => deviation(f, cap_h)?,
        Identity::II => WindowSums::new(f).selberg(cap_h)?,
        Identity::III => WindowSums::new(f).modified(cap_h)?,
    };
    let main = main_term(f, cap_h, which.kernel())?;
    Ok(IdentityReport::new(which, cap_h, f.sup_norm(), lhs, main))
}

fn check_half_width(half_width: f64) -> Result<()> {
    if !(half_width > 0.0 && half_width <= 0.5) {
        return Err(Error::InvalidArgument(format!(
            "half width {half_width} outside (0, 1/2]"
        )));
    }
    Ok(())
}

/// `∫_{-a}^{a} |f̂(α)|² dα = 2a·c'_0 + Σ_{k≠0} c'_k sin(2πka)/(πk)` over the full table.
pub fn band_energy_from_table(table: &CorrelationTable, half_width: f64) -> Result<f64> {
    check_half_width(half_width)?;
    if table.max_lag() + 1 < table.big_n() {
        return Err(Error::InvalidArgument("band energy needs the full table".into()));
    }
    let mut sum = 2.0 * half_width * table.get(0);
    let mut comp = 0.0;
    for (k, &c) in table.nonnegative().iter().enumerate().skip(1) {
        if c == 0.0 {
            continue;
        }
        let kf = k as f64;
        let term = 2.0 * c * sin_turns(kf * half_width) / (std::f64::consts::PI * kf);
        // Neumaier compensation
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    Ok(sum + comp)
}

pub fn band_energy(f: &SampledFunction, half_width: f64) -> Result<f64> {
    check_half_width(half_width)?;
    band_energy_from_table(&full_table(f), half_width)
}
