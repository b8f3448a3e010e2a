//! Scans over a grid of interval lengths, grid syntax, and report formatting.

use std::io::Write;

use serde::Serialize;

use crate::arith::SampledFunction;
use crate::bounds::{gallagher_from_parts, Variant, DEFAULT_THRESHOLD};
use crate::correlation::{correlations, deviation_prefix, full_table};
use crate::error::{out_of_range, Error, Result};
use crate::selberg::WindowSums;
use crate::spectral::{main_term_from_table, Identity, IdentityReport, KernelCoeffs};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// All quantities at one `H`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub cap_h: usize,
    pub deviation: f64,
    pub selberg: f64,
    pub modified: f64,
    /// Residual ratios of identities I, II, III.
    pub identity_ratios: [f64; 3],
    /// Variant i Gallagher ratio at `h = H`.
    pub gallagher_ratio: f64,
}

pub const CSV_HEADER: [&str; 8] = [
    "H",
    "deviation",
    "selberg",
    "modified",
    "ratio_I",
    "ratio_II",
    "ratio_III",
    "gallagher_ratio",
];

fn check_grid(f: &SampledFunction, grid: &[usize]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty H grid".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("H grid must be strictly ascending".into()));
    }
    let (first, last) = (grid[0], grid[grid.len() - 1]);
    if first == 0 {
        return Err(out_of_range("H", 0, "H >= 1"));
    }
    if last > f.big_n() {
        return Err(out_of_range("H", last as i64, format!("H <= N = {}", f.big_n())));
    }
    Ok(())
}

/// One row per `H` in `grid`, in grid order.
///
/// The correlation table, prefix sums and correlations up to `max H` are built
/// once and shared by every row.
pub fn scan(f: &SampledFunction, grid: &[usize]) -> Result<Vec<ScanRow>> {
    check_grid(f, grid)?;
    let max_h = grid[grid.len() - 1];
    let deviations = deviation_prefix(&correlations(f, max_h)?);
    let table = full_table(f);
    let sums = WindowSums::new(f);
    let sup = f.sup_norm();

    let row = |&cap_h: &usize| -> Result<ScanRow> {
        let deviation = deviations[cap_h - 1];
        let selberg = sums.selberg(cap_h)?;
        let modified = sums.modified(cap_h)?;
        let mut identity_ratios = [0.0; 3];
        for (slot, (which, lhs)) in identity_ratios.iter_mut().zip([
            (Identity::I, deviation),
            (Identity::II, selberg),
            (Identity::III, modified),
        ]) {
            let main = main_term_from_table(&table, &KernelCoeffs::new(which.kernel(), cap_h))?;
            *slot = IdentityReport::new(which, cap_h, sup, lhs, main).ratio;
        }
        let gallagher = gallagher_from_parts(&table, &sums, cap_h, Variant::I, DEFAULT_THRESHOLD)?;
        Ok(ScanRow {
            cap_h,
            deviation,
            selberg,
            modified,
            identity_ratios,
            gallagher_ratio: gallagher.ratio,
        })
    };

    #[cfg(feature = "parallel")]
    let rows = grid.par_iter().map(row).collect();
    #[cfg(not(feature = "parallel"))]
    let rows = grid.iter().map(row).collect();
    rows
}

/// Parses `geom:start:stop:count` or `list:a,b,c` into a strictly ascending grid.
///
/// Geometric grids are rounded to integers and deduplicated, so they may hold
/// fewer than `count` points.
pub fn parse_grid(spec: &str) -> Result<Vec<usize>> {
    let bad = |msg: &str| Error::InvalidArgument(format!("bad H grid `{spec}`: {msg}"));
    let parse_int = |s: &str| s.trim().parse::<usize>().map_err(|_| bad(&format!("`{s}` is not a positive integer")));
    if let Some(rest) = spec.strip_prefix("geom:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected geom:start:stop:count"));
        }
        let (start, stop, count) = (parse_int(parts[0])?, parse_int(parts[1])?, parse_int(parts[2])?);
        if start == 0 || stop < start || count == 0 {
            return Err(bad("need 1 <= start <= stop and count >= 1"));
        }
        if count == 1 {
            return Ok(vec![start]);
        }
        let ratio = (stop as f64 / start as f64).ln() / (count - 1) as f64;
        let mut grid: Vec<usize> = (0..count)
            .map(|i| {
                if i == count - 1 {
                    stop
                } else {
                    (start as f64 * (ratio * i as f64).exp()).round() as usize
                }
            })
            .collect();
        grid.dedup();
        Ok(grid)
    } else if let Some(rest) = spec.strip_prefix("list:") {
        let grid = rest.split(',').map(parse_int).collect::<Result<Vec<_>>>()?;
        if grid.is_empty() || grid.contains(&0) {
            return Err(bad("values must be positive"));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("values must be strictly ascending"));
        }
        Ok(grid)
    } else {
        Err(bad("expected `geom:` or `list:` prefix"))
    }
}

/// Rounds to 12 significant digits, then prints the shortest round-trip form.
pub fn fmt12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        "0".to_string()
    } else {
        rounded.to_string()
    }
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Writes rows as CSV in `CSV_HEADER` column order.
pub fn write_csv<W: Write>(rows: &[ScanRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        let fields = [
            r.cap_h.to_string(),
            fmt12(r.deviation),
            fmt12(r.selberg),
            fmt12(r.modified),
            fmt12(r.identity_ratios[0]),
            fmt12(r.identity_ratios[1]),
            fmt12(r.identity_ratios[2]),
            fmt12(r.gallagher_ratio),
        ];
        w.write_record(&fields).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{generate, FunctionKind};

    #[test]
    fn parity_scan_rows() {
        let f = generate(FunctionKind::Parity, 100, None).unwrap();
        let rows = scan(&f, &[3, 4]).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].deviation, rows[0].selberg), (-100.0, 100.0));
        assert!((rows[0].modified - 100.0 / 9.0).abs() < 1e-12);
        assert_eq!((rows[1].deviation, rows[1].selberg, rows[1].modified), (0.0, 0.0, 0.0));
        assert!(rows.iter().all(|r| r.identity_ratios.iter().all(|&q| q <= 1.0)));
    }

    #[test]
    fn zero_and_moebius_scan() {
        let z = SampledFunction::zero(20).unwrap();
        let rows = scan(&z, &[5]).unwrap();
        assert_eq!(
            rows[0],
            ScanRow {
                cap_h: 5,
                deviation: 0.0,
                selberg: 0.0,
                modified: 0.0,
                identity_ratios: [0.0; 3],
                gallagher_ratio: 0.0
            }
        );
        let m = generate(FunctionKind::Moebius, 10, None).unwrap();
        let rows = scan(&m, &[2]).unwrap();
        assert_eq!((rows[0].deviation, rows[0].selberg), (-1.0, 15.0));
    }

    #[test]
    fn scan_grid_errors() {
        let f = generate(FunctionKind::Parity, 10, None).unwrap();
        assert!(scan(&f, &[]).is_err());
        assert!(scan(&f, &[4, 3]).is_err());
        assert!(scan(&f, &[3, 3]).is_err());
        assert!(scan(&f, &[11]).is_err());
        assert!(scan(&f, &[0, 2]).is_err());
    }

    #[test]
    fn grid_syntax() {
        assert_eq!(parse_grid("list:1,2,5").unwrap(), vec![1, 2, 5]);
        assert_eq!(parse_grid("geom:1:1000:4").unwrap(), vec![1, 10, 100, 1000]);
        assert_eq!(parse_grid("geom:1:4:10").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_grid("geom:7:7:1").unwrap(), vec![7]);
        for bad in ["list:", "list:3,2", "list:0,1", "geom:1:10", "geom:0:10:3", "geom:10:1:3", "range:1:2", "list:a"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn twelve_digit_formatting() {
        assert_eq!(fmt12(-100.0), "-100");
        assert_eq!(fmt12(100.0 / 9.0), "11.1111111111");
        assert_eq!(fmt12(0.0), "0");
        assert_eq!(fmt12(-0.0), "0");
        assert_eq!(fmt12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt12(123456789012345.0), "123456789012000");
    }

    #[test]
    fn csv_layout() {
        let f = generate(FunctionKind::Parity, 100, None).unwrap();
        let rows = scan(&f, &[3, 4]).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert!(lines.next().unwrap().starts_with("3,-100,100,11.1111111111,"));
    }
}
