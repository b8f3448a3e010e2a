//! Correlations `C_f(h) = Σ_{n∼N} f(n) f(n-h)`, the near-diagonal table
//! `c'_k = Σ_{n,m∼N, n-m=k} f(n) f(m)`, and the deviation `D_f(N,H) = Σ_{h=1}^{H} C_f(h)`.
//!
//! `C_f(h)` and `c'_h` differ only by the `|h|` pairs whose second index leaves `(N, 2N]`.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::arith::SampledFunction;
use crate::error::{out_of_range, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How the near-diagonal table is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableMode {
    /// `O(N·K)` direct sums.
    Direct,
    /// Zero-padded FFT autocorrelation, `O(N log N)`.
    Fft,
}

/// Two-sided near-diagonal autocorrelation coefficients `c'_k`, `|k| <= K`.
///
/// Only lags `0..=K` are stored; `c'_{-k} = c'_k` because `f` is real.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationTable {
    big_n: usize,
    coeffs: Vec<f64>,
}

impl CorrelationTable {
    pub fn max_lag(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn big_n(&self) -> usize {
        self.big_n
    }

    /// `c'_k`; zero once `|k| >= N` (no pairs), panics for `N > |k| > K`.
    pub fn get(&self, k: i64) -> f64 {
        let k = k.unsigned_abs() as usize;
        if k >= self.big_n {
            return 0.0;
        }
        self.coeffs[k]
    }

    /// Coefficients for lags `0..=K`.
    pub fn nonnegative(&self) -> &[f64] {
        &self.coeffs
    }
}

/// `C_f(h) = Σ_{N<n<=2N} f(n) f(n-h)` for `|h| <= N`.
pub fn correlate(f: &SampledFunction, h: i64) -> Result<f64> {
    let big_n = f.big_n();
    if h.unsigned_abs() as usize > big_n {
        return Err(out_of_range("h", h, format!("|h| <= N = {big_n}")));
    }
    let vals = f.values();
    // slot i holds f(i + 1)
    let start = big_n;
    let shifted = (start as i64 - h) as usize;
    Ok(vals[start..start + big_n]
        .iter()
        .zip(&vals[shifted..shifted + big_n])
        .fold(0.0, |acc, (a, b)| acc + a * b))
}

/// `C_f(1), ..., C_f(max_h)` in one pass (parallel over `h`).
pub fn correlations(f: &SampledFunction, max_h: usize) -> Result<Vec<f64>> {
    if max_h > f.big_n() {
        return Err(out_of_range("H", max_h as i64, format!("H <= N = {}", f.big_n())));
    }
    let one = |h: usize| correlate(f, h as i64).expect("lag checked above");
    #[cfg(feature = "parallel")]
    let out = (1..=max_h).into_par_iter().map(one).collect();
    #[cfg(not(feature = "parallel"))]
    let out = (1..=max_h).map(one).collect();
    Ok(out)
}

/// `D_f(N,H) = Σ_{h=1}^{H} C_f(h)`, summed in ascending `h`.
pub fn deviation(f: &SampledFunction, cap_h: usize) -> Result<f64> {
    check_cap_h(f, cap_h)?;
    let mut acc = 0.0;
    for h in 1..=cap_h {
        acc += correlate(f, h as i64)?;
    }
    Ok(acc)
}

/// Running deviations `D_f(N,1), ..., D_f(N,H)` from precomputed correlations.
///
/// Uses the same summation order as [`deviation`], so results are bit-identical.
pub fn deviation_prefix(correlations: &[f64]) -> Vec<f64> {
    correlations
        .iter()
        .scan(0.0, |acc, c| {
            *acc += c;
            Some(*acc)
        })
        .collect()
}

pub(crate) fn check_cap_h(f: &SampledFunction, cap_h: usize) -> Result<()> {
    if cap_h == 0 || cap_h > f.big_n() {
        return Err(out_of_range("H", cap_h as i64, format!("1 <= H <= N = {}", f.big_n())));
    }
    Ok(())
}

/// Near-diagonal table `c'_k` for `|k| <= max_lag`, `max_lag <= N - 1`.
pub fn near_diag_table(f: &SampledFunction, max_lag: usize, mode: TableMode) -> Result<CorrelationTable> {
    let big_n = f.big_n();
    if max_lag >= big_n {
        return Err(out_of_range("max_lag", max_lag as i64, format!("max_lag <= N - 1 = {}", big_n - 1)));
    }
    let block = f.block();
    let coeffs = match mode {
        TableMode::Direct => direct_table(block, max_lag),
        TableMode::Fft => {
            let mut c = fft_table(block, max_lag);
            if f.is_integer_valued() {
                for v in &mut c {
                    *v = v.round();
                }
            }
            c
        }
    };
    Ok(CorrelationTable { big_n, coeffs })
}

/// Full table, all lags `0..N`, through the FFT path.
pub fn full_table(f: &SampledFunction) -> CorrelationTable {
    near_diag_table(f, f.big_n() - 1, TableMode::Fft).expect("N - 1 is always admissible")
}

fn direct_lag(block: &[f64], k: usize) -> f64 {
    block[k..]
        .iter()
        .zip(block)
        .fold(0.0, |acc, (a, b)| acc + a * b)
}

fn direct_table(block: &[f64], max_lag: usize) -> Vec<f64> {
    #[cfg(feature = "parallel")]
    let out = (0..=max_lag).into_par_iter().map(|k| direct_lag(block, k)).collect();
    #[cfg(not(feature = "parallel"))]
    let out = (0..=max_lag).map(|k| direct_lag(block, k)).collect();
    out
}

fn fft_table(block: &[f64], max_lag: usize) -> Vec<f64> {
    // length >= 2N so the cyclic correlation has no wraparound
    let len = (2 * block.len()).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(len);
    let inverse = planner.plan_fft_inverse(len);

    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (dst, &v) in buf.iter_mut().zip(block) {
        dst.re = v;
    }
    forward.process(&mut buf);
    for z in &mut buf {
        *z = Complex64::new(z.norm_sqr(), 0.0);
    }
    inverse.process(&mut buf);
    let scale = 1.0 / len as f64;
    buf[..=max_lag].iter().map(|z| z.re * scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{generate, FunctionKind};
    use crate::error::Error;

    fn parity(n: usize) -> SampledFunction {
        generate(FunctionKind::Parity, n, None).unwrap()
    }

    fn moebius(n: usize) -> SampledFunction {
        generate(FunctionKind::Moebius, n, None).unwrap()
    }

    #[test]
    fn parity_correlation_closed_form() {
        let f = parity(100);
        assert_eq!(correlate(&f, 3).unwrap(), -100.0);
        for h in -100..=100i64 {
            let sign = if h % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(correlate(&f, h).unwrap(), sign * 100.0);
        }
    }

    #[test]
    fn correlation_at_zero_is_block_energy() {
        let f = moebius(50);
        let energy: f64 = f.block().iter().map(|v| v * v).sum();
        assert_eq!(correlate(&f, 0).unwrap(), energy);
    }

    #[test]
    fn moebius_small_values() {
        let f = moebius(10);
        assert_eq!(correlate(&f, 1).unwrap(), -1.0);
        assert_eq!(correlate(&f, 2).unwrap(), 0.0);
        assert_eq!(deviation(&f, 2).unwrap(), -1.0);
        let t = near_diag_table(&f, 3, TableMode::Direct).unwrap();
        // the pair (11, 10) escapes the block
        assert_eq!(t.get(1), 0.0);
        assert!((correlate(&f, 1).unwrap() - t.get(1)).abs() <= 1.0);
    }

    #[test]
    fn out_of_range_lags() {
        let f = parity(10);
        assert!(matches!(correlate(&f, 11), Err(Error::OutOfRange { .. })));
        assert!(matches!(correlate(&f, -11), Err(Error::OutOfRange { .. })));
        assert!(near_diag_table(&f, 10, TableMode::Direct).is_err());
        assert!(deviation(&f, 11).is_err());
        assert!(deviation(&f, 0).is_err());
    }

    #[test]
    fn parity_table_and_deviation() {
        let f = parity(100);
        let t = near_diag_table(&f, 10, TableMode::Fft).unwrap();
        assert_eq!(t.get(3), -97.0);
        assert_eq!(t.get(-3), -97.0);
        assert_eq!(t.get(0), 100.0);
        assert_eq!(deviation(&f, 5).unwrap(), -100.0);
        assert_eq!(deviation(&f, 4).unwrap(), 0.0);
    }

    #[test]
    fn fft_and_direct_agree_exactly_on_integer_families() {
        for kind in FunctionKind::ALL {
            let f = generate(kind, 777, Some(5)).unwrap();
            let a = near_diag_table(&f, 776, TableMode::Direct).unwrap();
            let b = near_diag_table(&f, 776, TableMode::Fft).unwrap();
            assert_eq!(a, b, "{kind}");
        }
    }

    #[test]
    fn fft_and_direct_agree_on_real_values() {
        let f = SampledFunction::from_fn(300, "cos", |n| (0.37 * n as f64).cos() * 0.8).unwrap();
        let a = near_diag_table(&f, 299, TableMode::Direct).unwrap();
        let b = near_diag_table(&f, 299, TableMode::Fft).unwrap();
        let scale = a.get(0);
        for k in 0..300 {
            assert!((a.get(k) - b.get(k)).abs() <= 1e-9 * scale, "k={k}");
        }
    }

    #[test]
    fn boundary_pairs_bound_correlation_gap() {
        for kind in FunctionKind::ALL {
            let f = generate(kind, 200, Some(11)).unwrap();
            let t = near_diag_table(&f, 199, TableMode::Fft).unwrap();
            let s2 = f.sup_norm() * f.sup_norm();
            for h in -199..=199i64 {
                let gap = (correlate(&f, h).unwrap() - t.get(h)).abs();
                assert!(gap <= h.abs() as f64 * s2);
            }
            assert!(t.get(0) >= 0.0);
            for k in 0..200 {
                assert!(t.get(k).abs() <= (200 - k) as f64 * s2);
            }
        }
    }

    #[test]
    fn deviation_prefix_matches_deviation() {
        let f = generate(FunctionKind::Liouville, 300, None).unwrap();
        let c = correlations(&f, 40).unwrap();
        let d = deviation_prefix(&c);
        for h in 1..=40 {
            assert_eq!(d[h - 1], deviation(&f, h).unwrap());
        }
    }
}
