//! Short-interval sums and the (modified) Selberg integrals
//!
//! ```text
//! J_f(N,H)  = Σ_{x∼N} |Σ_{x<n<=x+H} f(n)|²
//! J̃_f(N,H) = Σ_{x∼N} |Σ_n C_H(n-x) f(n)|²
//! ```
//!
//! Fast paths use a prefix sum `P` and its own prefix `Q`, giving every window in
//! `O(1)`. Brute-force paths sum each window term by term and serve as oracles.

use serde::Serialize;

use crate::arith::SampledFunction;
use crate::correlation::check_cap_h;
use crate::error::{out_of_range, Result};
use crate::kernels::cesaro_weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Fast,
    #[serde(rename = "bruteforce")]
    BruteForce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegralKind {
    Selberg,
    Modified,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: f64,
    pub big_n: usize,
    pub cap_h: usize,
    pub mode: Mode,
    pub kind: IntegralKind,
}

/// First and second order prefix sums of `f`:
/// `P[k] = Σ_{n<=k} f(n)` and `Q[k] = Σ_{j=0}^{k} P[j]` for `0 <= k <= 3N`.
#[derive(Debug, Clone)]
pub struct WindowSums<'a> {
    f: &'a SampledFunction,
    prefix: Vec<f64>,
    prefix2: Vec<f64>,
}

impl<'a> WindowSums<'a> {
    pub fn new(f: &'a SampledFunction) -> Self {
        let mut prefix = Vec::with_capacity(f.n_max() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for v in f.values() {
            acc += v;
            prefix.push(acc);
        }
        let mut prefix2 = Vec::with_capacity(prefix.len());
        let mut acc2 = 0.0;
        for p in &prefix {
            acc2 += p;
            prefix2.push(acc2);
        }
        WindowSums { f, prefix, prefix2 }
    }

    pub fn function(&self) -> &SampledFunction {
        self.f
    }

    /// `Σ_{x<n<=x+H} f(n)`.
    pub fn window(&self, x: usize, cap_h: usize) -> Result<f64> {
        check_window(self.f, x, cap_h)?;
        Ok(self.window_unchecked(x, cap_h))
    }

    /// `Σ_n C_H(n-x) f(n)`.
    pub fn cesaro(&self, x: usize, cap_h: usize) -> Result<f64> {
        check_window(self.f, x, cap_h)?;
        Ok(self.cesaro_unchecked(x, cap_h))
    }

    #[inline]
    fn window_unchecked(&self, x: usize, cap_h: usize) -> f64 {
        self.prefix[x + cap_h] - self.prefix[x]
    }

    #[inline]
    fn cesaro_unchecked(&self, x: usize, cap_h: usize) -> f64 {
        let q = &self.prefix2;
        let numer = (q[x + cap_h - 1] - q[x - 1]) - (q[x - 1] - q[x - cap_h - 1]);
        numer / cap_h as f64
    }

    /// `J_f(N,H)` in `O(N)`.
    pub fn selberg(&self, cap_h: usize) -> Result<f64> {
        check_cap_h(self.f, cap_h)?;
        let n = self.f.big_n();
        Ok((n + 1..=2 * n).fold(0.0, |acc, x| {
            let s = self.window_unchecked(x, cap_h);
            acc + s * s
        }))
    }

    /// `J̃_f(N,H)` in `O(N)`.
    pub fn modified(&self, cap_h: usize) -> Result<f64> {
        check_cap_h(self.f, cap_h)?;
        let n = self.f.big_n();
        Ok((n + 1..=2 * n).fold(0.0, |acc, x| {
            let s = self.cesaro_unchecked(x, cap_h);
            acc + s * s
        }))
    }
}

fn check_window(f: &SampledFunction, x: usize, cap_h: usize) -> Result<()> {
    let n = f.big_n();
    if x <= n || x > 2 * n {
        return Err(out_of_range("x", x as i64, format!("N < x <= 2N, N = {n}")));
    }
    check_cap_h(f, cap_h)
}

/// `Σ_{x<n<=x+H} f(n)` for `N < x <= 2N`.
pub fn window_sum(f: &SampledFunction, x: usize, cap_h: usize) -> Result<f64> {
    check_window(f, x, cap_h)?;
    Ok(brute_window(f, x, cap_h))
}

/// `Σ_{|n-x|<=H} (1 - |n-x|/H) f(n)` for `N < x <= 2N`.
pub fn cesaro_window_sum(f: &SampledFunction, x: usize, cap_h: usize) -> Result<f64> {
    check_window(f, x, cap_h)?;
    Ok(brute_cesaro(f, x, cap_h))
}

fn brute_window(f: &SampledFunction, x: usize, cap_h: usize) -> f64 {
    (x + 1..=x + cap_h).fold(0.0, |acc, n| acc + f.at(n))
}

// integer weights H - |t|, one division at the end
fn brute_cesaro(f: &SampledFunction, x: usize, cap_h: usize) -> f64 {
    let mut acc = 0.0;
    for n in x + 1 - cap_h..x + cap_h {
        let w = cap_h - n.abs_diff(x);
        acc += w as f64 * f.at(n);
    }
    acc / cap_h as f64
}

/// `|LHS - RHS|` of the Cesàro identity
/// `Σ_{|n-x|<=H} C_H(n-x) f(n) = H^{-1} Σ_{h=1}^{H} Σ_{|n-x|<h} f(n)`,
/// each side evaluated along its own code path.
pub fn cesaro_identity_gap(f: &SampledFunction, x: usize, cap_h: usize) -> Result<f64> {
    check_window(f, x, cap_h)?;
    let mut lhs = 0.0;
    for n in x - cap_h..=x + cap_h {
        let t = n as f64 - x as f64;
        lhs += cesaro_weight(t, cap_h as u64) * f.at(n);
    }
    let mut rhs = 0.0;
    for h in 1..=cap_h {
        let mut inner = 0.0;
        for n in x + 1 - h..x + h {
            inner += f.at(n);
        }
        rhs += inner;
    }
    rhs /= cap_h as f64;
    Ok((lhs - rhs).abs())
}

/// `J_f(N,H)`.
pub fn selberg_integral(f: &SampledFunction, cap_h: usize, mode: Mode) -> Result<IntegralResult> {
    check_cap_h(f, cap_h)?;
    let n = f.big_n();
    let value = match mode {
        Mode::Fast => WindowSums::new(f).selberg(cap_h)?,
        Mode::BruteForce => (n + 1..=2 * n).fold(0.0, |acc, x| {
            let s = brute_window(f, x, cap_h);
            acc + s * s
        }),
    };
    Ok(IntegralResult {
        value,
        big_n: n,
        cap_h,
        mode,
        kind: IntegralKind::Selberg,
    })
}

/// `J̃_f(N,H)`.
pub fn modified_selberg_integral(f: &SampledFunction, cap_h: usize, mode: Mode) -> Result<IntegralResult> {
    check_cap_h(f, cap_h)?;
    let n = f.big_n();
    let value = match mode {
        Mode::Fast => WindowSums::new(f).modified(cap_h)?,
        Mode::BruteForce => (n + 1..=2 * n).fold(0.0, |acc, x| {
            let s = brute_cesaro(f, x, cap_h);
            acc + s * s
        }),
    };
    Ok(IntegralResult {
        value,
        big_n: n,
        cap_h,
        mode,
        kind: IntegralKind::Modified,
    })
}
