//! Combinatorial weights and exponential sums behind the three integral kernels.
//!
//! * `u_H` is the indicator of `[1, H]`;
//! * `U_H(h) = Σ_{b-a=h} u_H(b) u_H(a) = max(H - |h|, 0)`;
//! * `Ũ_H(h) = H^{-2} Σ_{b-a=h} U_H(b) U_H(a)`, supported on `|h| <= 2H - 2`;
//! * `C_H(t) = max(1 - |t|/H, 0)`, the Cesàro (triangular) weight, equal to `U_H(t)/H`;
//! * `û_H(β) = Σ_{1<=h<=H} e(hβ)` with `e(α) = exp(2πiα)`.
//!
//! The two-sided transform `Û_H(β) = Σ_{|h|<H} U_H(h) e(hβ)` equals `|û_H(β)|²`.

use std::f64::consts::PI;

pub use rustfft::num_complex::Complex64;
use serde::Serialize;

/// The three kernels paired with `|f̂|²`: `û_H(-β)`, `|û_H(β)|²` and `|û_H(β)|⁴/H²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum KernelKind {
    UnitStep,
    Fejer,
    CesaroSquared,
}

impl KernelKind {
    pub const ALL: [KernelKind; 3] = [KernelKind::UnitStep, KernelKind::Fejer, KernelKind::CesaroSquared];
}

/// A frequency measured in revolutions, reduced into `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Frequency(f64);

impl Frequency {
    /// Panics on a non-finite input.
    pub fn new(beta: f64) -> Self {
        assert!(beta.is_finite(), "frequency must be finite");
        let r = beta - beta.floor();
        // beta.floor() can round r up to exactly 1.0 for tiny negative beta
        Frequency(if r >= 1.0 { 0.0 } else { r })
    }

    /// Representative in `[0, 1)`.
    pub fn turns(self) -> f64 {
        self.0
    }

    /// Representative in `[-1/2, 1/2)`.
    pub fn centered(self) -> f64 {
        if self.0 >= 0.5 {
            self.0 - 1.0
        } else {
            self.0
        }
    }

    pub fn is_integer(self) -> bool {
        self.0 == 0.0
    }
}

impl From<f64> for Frequency {
    fn from(beta: f64) -> Self {
        Frequency::new(beta)
    }
}

/// `sin(2πx)` with `x` reduced to `[-1/2, 1/2]` first; exact zeros at half-integers.
pub(crate) fn sin_turns(x: f64) -> f64 {
    let r = x - x.round();
    if r == 0.0 || r.abs() == 0.5 {
        0.0
    } else {
        (2.0 * PI * r).sin()
    }
}

/// `cos(2πx)` with `x` reduced to `[-1/2, 1/2]` first.
pub(crate) fn cos_turns(x: f64) -> f64 {
    let r = x - x.round();
    if r == 0.0 {
        1.0
    } else if r.abs() == 0.5 {
        -1.0
    } else {
        (2.0 * PI * r).cos()
    }
}

/// `e(x) = exp(2πix)`.
pub fn e(x: f64) -> Complex64 {
    Complex64::new(cos_turns(x), sin_turns(x))
}

pub fn unit_step(a: i64, cap_h: u64) -> u8 {
    (a >= 1 && a as u64 <= cap_h) as u8
}

/// `U_H(h) = max(H - |h|, 0)`.
pub fn correlation_weight(h: i64, cap_h: u64) -> u64 {
    cap_h.saturating_sub(h.unsigned_abs())
}

/// `H²·Ũ_H(h) = Σ_a U_H(a) U_H(a + h)`, exact in integers.
pub fn cesaro_sq_numerator(h: i64, cap_h: u64) -> u128 {
    let cap = cap_h as i64;
    let abs_h = h.abs();
    if cap == 0 || abs_h > 2 * cap - 2 {
        return 0;
    }
    // overlap of the supports |a| <= H-1 and |a + |h|| <= H-1
    let (lo, hi) = (-(cap - 1), cap - 1 - abs_h);
    (lo..=hi)
        .map(|a| correlation_weight(a, cap_h) as u128 * correlation_weight(a + abs_h, cap_h) as u128)
        .sum()
}

/// `Ũ_H(h) = H^{-2} Σ_a U_H(a) U_H(a + h)`.
pub fn cesaro_sq_weight(h: i64, cap_h: u64) -> f64 {
    cesaro_sq_numerator(h, cap_h) as f64 / (cap_h as f64 * cap_h as f64)
}

/// `C_H(t) = max(1 - |t|/H, 0)`.
pub fn cesaro_weight(t: f64, cap_h: u64) -> f64 {
    let h = cap_h as f64;
    ((h - t.abs()) / h).max(0.0)
}

/// `û_H(β) = Σ_{h=1}^{H} e(hβ)`, summed term by term (value `H` at integer `β`).
pub fn u_hat(beta: Frequency, cap_h: u64) -> Complex64 {
    if beta.is_integer() {
        return Complex64::new(cap_h as f64, 0.0);
    }
    let b = beta.turns();
    (1..=cap_h).map(|h| e(h as f64 * b)).sum()
}

/// `Û_H(β) = Σ_{|h|<H} U_H(h) e(hβ)`, which is real because `U_H` is even.
pub fn fejer_hat(beta: Frequency, cap_h: u64) -> f64 {
    let b = beta.turns();
    let mut acc = cap_h as f64;
    for h in 1..cap_h {
        acc += 2.0 * (cap_h - h) as f64 * cos_turns(h as f64 * b);
    }
    acc
}

/// Majorant `min(H, 1/(2|α|))` of `|û_H(α)|` on `0 < |α| <= 1/2`.
pub fn fejer_majorant(alpha: Frequency, cap_h: u64) -> f64 {
    let a = alpha.centered().abs();
    if a == 0.0 {
        cap_h as f64
    } else {
        (cap_h as f64).min(1.0 / (2.0 * a))
    }
}
