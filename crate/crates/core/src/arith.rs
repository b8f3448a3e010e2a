//! Sampled real arithmetic functions on `1..=3N`.
//!
//! Every built-in family is balanced (its short-interval mean is taken to be
//! identically zero) and bounded by one in absolute value. Balancedness is an
//! assumption of the downstream identities and is never checked.

use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Built-in families of balanced, bounded arithmetic functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionKind {
    /// `(-1)^(n+1)`.
    Parity,
    /// `(-1)^Ω(n)`, Ω counting prime factors with multiplicity.
    Liouville,
    /// The Möbius function.
    Moebius,
    /// Independent fair ±1 signs from a seeded generator.
    Rademacher,
}

impl FunctionKind {
    pub const ALL: [FunctionKind; 4] = [
        FunctionKind::Parity,
        FunctionKind::Liouville,
        FunctionKind::Moebius,
        FunctionKind::Rademacher,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionKind::Parity => "parity",
            FunctionKind::Liouville => "liouville",
            FunctionKind::Moebius => "moebius",
            FunctionKind::Rademacher => "rademacher",
        }
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parity" => Ok(FunctionKind::Parity),
            "liouville" => Ok(FunctionKind::Liouville),
            "moebius" | "mobius" => Ok(FunctionKind::Moebius),
            "rademacher" => Ok(FunctionKind::Rademacher),
            other => Err(Error::InvalidArgument(format!(
                "unknown function kind `{other}`"
            ))),
        }
    }
}

/// Real values of `f` on `1..=3N`, together with `N` and the sup-norm.
///
/// Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    big_n: usize,
    values: Vec<f64>,
    sup_norm: f64,
    label: String,
}

impl SampledFunction {
    /// Wraps `values[0..3N]` as `f(1..=3N)`.
    pub fn from_values(values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("no values".into()));
        }
        if values.len() % 3 != 0 {
            return Err(Error::InvalidArgument(format!(
                "length {} is not a multiple of 3",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite value at n = {}",
                i + 1
            )));
        }
        let sup_norm = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        Ok(SampledFunction {
            big_n: values.len() / 3,
            values,
            sup_norm,
            label: label.into(),
        })
    }

    /// The identically zero function on `1..=3N`.
    pub fn zero(big_n: usize) -> Result<Self> {
        if big_n == 0 {
            return Err(Error::InvalidArgument("N must be positive".into()));
        }
        Self::from_values(vec![0.0; 3 * big_n], "zero")
    }

    /// Builds `f` pointwise from a closure over `n = 1..=3N`.
    pub fn from_fn(big_n: usize, label: impl Into<String>, f: impl Fn(usize) -> f64) -> Result<Self> {
        if big_n == 0 {
            return Err(Error::InvalidArgument("N must be positive".into()));
        }
        Self::from_values((1..=3 * big_n).map(f).collect(), label)
    }

    pub fn big_n(&self) -> usize {
        self.big_n
    }

    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `f(n)` for `1 <= n <= 3N`.
    ///
    /// Panics if `n` is outside the sampled range.
    #[inline]
    pub fn at(&self, n: usize) -> f64 {
        self.values[n - 1]
    }

    /// All values; slot `i` holds `f(i + 1)`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The restriction of `f` to the dyadic block `(N, 2N]`.
    pub fn block(&self) -> &[f64] {
        &self.values[self.big_n..2 * self.big_n]
    }

    /// True when every value is an integer and every sum of products over the
    /// block stays below 2^53, so double-precision sums are exact.
    pub fn is_integer_valued(&self) -> bool {
        let bound = self.big_n as f64 * self.sup_norm * self.sup_norm * 4.0;
        bound < 9.007_199_254_740_992e15 && self.values.iter().all(|v| v.fract() == 0.0)
    }

    /// Returns `c·f`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::from_values(
            self.values.iter().map(|v| c * v).collect(),
            format!("{}*{}", c, self.label),
        )
    }
}

/// Smallest-prime-factor table on `0..=n_max` by a linear sieve (`spf[0] = spf[1] = 0`).
pub fn smallest_prime_factors(n_max: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n_max + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n_max {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let lim = spf[i];
        for &p in &primes {
            let ip = i * p as usize;
            if p > lim || ip > n_max {
                break;
            }
            spf[ip] = p;
        }
    }
    spf
}

fn liouville_values(n_max: usize) -> Vec<f64> {
    let spf = smallest_prime_factors(n_max);
    let mut lambda = vec![0i8; n_max + 1];
    if n_max >= 1 {
        lambda[1] = 1;
    }
    for n in 2..=n_max {
        lambda[n] = -lambda[n / spf[n] as usize];
    }
    lambda[1..].iter().map(|&v| v as f64).collect()
}

fn moebius_values(n_max: usize) -> Vec<f64> {
    let spf = smallest_prime_factors(n_max);
    let mut mu = vec![0i8; n_max + 1];
    if n_max >= 1 {
        mu[1] = 1;
    }
    for n in 2..=n_max {
        let p = spf[n] as usize;
        let m = n / p;
        mu[n] = if m % p == 0 { 0 } else { -mu[m] };
    }
    mu[1..].iter().map(|&v| v as f64).collect()
}

/// Samples a built-in family on `1..=3N`.
///
/// `seed` is required for [`FunctionKind::Rademacher`] and ignored otherwise.
pub fn generate(kind: FunctionKind, big_n: usize, seed: Option<u64>) -> Result<SampledFunction> {
    if big_n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let n_max = 3 * big_n;
    let values = match kind {
        FunctionKind::Parity => (1..=n_max)
            .map(|n| if n % 2 == 1 { 1.0 } else { -1.0 })
            .collect(),
        FunctionKind::Liouville => liouville_values(n_max),
        FunctionKind::Moebius => moebius_values(n_max),
        FunctionKind::Rademacher => {
            let seed = seed.ok_or_else(|| {
                Error::InvalidArgument("rademacher requires a seed".into())
            })?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n_max)
                .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
                .collect()
        }
    };
    let label = match (kind, seed) {
        (FunctionKind::Rademacher, Some(s)) => format!("rademacher:{s}"),
        _ => kind.name().to_string(),
    };
    SampledFunction::from_values(values, label)
}

/// Reads a function file: header `n,value`, then rows `n,f(n)` for `n = 1, 2, ...`.
///
/// Row numbers in errors count data rows from 1 (the header is row 0).
pub fn read_function<R: Read>(reader: R, label: impl Into<String>) -> Result<SampledFunction> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Format { row: 0, msg: e.to_string() })?
        .clone();
    if headers.len() != 2 || &headers[0] != "n" || &headers[1] != "value" {
        return Err(Error::Format {
            row: 0,
            msg: "expected header `n,value`".into(),
        });
    }
    let mut values = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Format { row, msg: e.to_string() })?;
        if record.len() != 2 {
            return Err(Error::Format {
                row,
                msg: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let n: usize = record[0].parse().map_err(|_| Error::Format {
            row,
            msg: format!("bad index `{}`", &record[0]),
        })?;
        if n != row {
            return Err(Error::Format {
                row,
                msg: format!("expected n = {row}, found {n}"),
            });
        }
        let v: f64 = record[1].parse().map_err(|_| Error::Format {
            row,
            msg: format!("bad value `{}`", &record[1]),
        })?;
        if !v.is_finite() {
            return Err(Error::Format {
                row,
                msg: format!("non-finite value `{}`", &record[1]),
            });
        }
        values.push(v);
    }
    if values.is_empty() || values.len() % 3 != 0 {
        return Err(Error::Format {
            row: values.len(),
            msg: format!("{} rows is not a positive multiple of 3", values.len()),
        });
    }
    SampledFunction::from_values(values, label)
}

/// Loads a function file from disk.
pub fn load(path: impl AsRef<Path>) -> Result<SampledFunction> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    read_function(file, format!("file:{}", path.display()))
}

/// Writes `f` in the function file format. Values use the shortest
/// representation that parses back to the same double.
pub fn write_function<W: std::io::Write>(f: &SampledFunction, mut out: W) -> Result<()> {
    writeln!(out, "n,value")?;
    for (i, v) in f.values().iter().enumerate() {
        writeln!(out, "{},{}", i + 1, v)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega_trial(mut n: usize) -> u32 {
        let mut count = 0;
        let mut d = 2;
        while d * d <= n {
            while n % d == 0 {
                n /= d;
                count += 1;
            }
            d += 1;
        }
        if n > 1 {
            count += 1;
        }
        count
    }

    fn mu_trial(mut n: usize) -> i32 {
        let mut sign = 1;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                n /= d;
                if n % d == 0 {
                    return 0;
                }
                sign = -sign;
            }
            d += 1;
        }
        if n > 1 {
            sign = -sign;
        }
        sign
    }

    #[test]
    fn parity_first_values() {
        let f = generate(FunctionKind::Parity, 2, None).unwrap();
        assert_eq!(f.values(), &[1.0, -1.0, 1.0, -1.0, 1.0, -1.0]);
        assert_eq!(f.n_max(), 6);
        assert_eq!(f.sup_norm(), 1.0);
    }

    #[test]
    fn liouville_and_moebius_first_values() {
        let l = generate(FunctionKind::Liouville, 3, None).unwrap();
        assert_eq!(&l.values()[..8], &[1.0, -1.0, -1.0, 1.0, -1.0, 1.0, -1.0, -1.0]);
        let m = generate(FunctionKind::Moebius, 3, None).unwrap();
        assert_eq!(&m.values()[..8], &[1.0, -1.0, -1.0, 0.0, -1.0, 1.0, -1.0, 0.0]);
    }

    #[test]
    fn sieve_matches_trial_division() {
        let big_n = 700;
        let l = generate(FunctionKind::Liouville, big_n, None).unwrap();
        let m = generate(FunctionKind::Moebius, big_n, None).unwrap();
        for n in 1..=3 * big_n {
            let lam = if omega_trial(n) % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(l.at(n), lam, "liouville({n})");
            assert_eq!(m.at(n), mu_trial(n) as f64, "moebius({n})");
        }
    }

    #[test]
    fn multiplicativity_spot_check() {
        let big_n = 400;
        let n_max = 3 * big_n;
        let l = generate(FunctionKind::Liouville, big_n, None).unwrap();
        let m = generate(FunctionKind::Moebius, big_n, None).unwrap();
        let root = (n_max as f64).sqrt() as usize;
        for p in 1..=root {
            for q in 1..=root {
                if gcd(p, q) == 1 && p * q <= n_max {
                    assert_eq!(m.at(p * q), m.at(p) * m.at(q));
                    assert_eq!(l.at(p * q), l.at(p) * l.at(q));
                }
            }
        }
    }

    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn rademacher_needs_seed_and_is_deterministic() {
        assert!(matches!(
            generate(FunctionKind::Rademacher, 10, None),
            Err(Error::InvalidArgument(_))
        ));
        let a = generate(FunctionKind::Rademacher, 16, Some(7)).unwrap();
        let b = generate(FunctionKind::Rademacher, 16, Some(7)).unwrap();
        let c = generate(FunctionKind::Rademacher, 16, Some(8)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.values(), c.values());
        assert!(a.values().iter().all(|v| v.abs() == 1.0));
    }

    #[test]
    fn zero_n_is_rejected() {
        for kind in FunctionKind::ALL {
            assert!(generate(kind, 0, Some(1)).is_err());
        }
    }

    #[test]
    fn sup_norm_is_at_most_one() {
        for kind in FunctionKind::ALL {
            let f = generate(kind, 50, Some(3)).unwrap();
            assert!(f.sup_norm() <= 1.0);
            let recomputed = f.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            assert_eq!(f.sup_norm(), recomputed);
        }
    }

    #[test]
    fn file_round_trip() {
        let f = generate(FunctionKind::Parity, 2, None).unwrap();
        let mut buf = Vec::new();
        write_function(&f, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap().lines().count(), 7);
        let g = read_function(buf.as_slice(), "parity").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn file_with_five_rows_is_rejected() {
        let text = "n,value\n1,1\n2,-1\n3,1\n4,-1\n5,1\n";
        assert!(matches!(
            read_function(text.as_bytes(), "x"),
            Err(Error::Format { row: 5, .. })
        ));
    }

    #[test]
    fn file_with_nan_is_rejected() {
        let text = "n,value\n1,1\n2,nan\n3,1\n";
        assert!(matches!(
            read_function(text.as_bytes(), "x"),
            Err(Error::Format { row: 2, .. })
        ));
    }

    #[test]
    fn file_rows_must_be_in_order() {
        let text = "n,value\n1,1\n3,1\n2,1\n";
        assert!(matches!(
            read_function(text.as_bytes(), "x"),
            Err(Error::Format { row: 2, .. })
        ));
        assert!(read_function("x,y\n1,1\n".as_bytes(), "x").is_err());
        assert!(read_function("n,value\n1,abc\n".as_bytes(), "x").is_err());
    }
}
