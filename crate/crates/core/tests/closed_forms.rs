//! Closed forms for f(n) = (-1)^(n+1) and cross-path consistency on larger inputs.

use corravg::arith::{generate, FunctionKind};
use corravg::correlation::{correlate, deviation, near_diag_table, TableMode};
use corravg::kernels::KernelKind;
use corravg::selberg::WindowSums;
use corravg::spectral::{main_term, verify_identity, Identity};

#[test]
fn alternating_sign_closed_forms_for_many_lengths() {
    for big_n in [7, 64, 333, 2048] {
        let f = generate(FunctionKind::Parity, big_n, None).unwrap();
        let sums = WindowSums::new(&f);
        let n = big_n as f64;
        for cap_h in 1..=big_n.min(40) {
            let h = cap_h as f64;
            let odd = cap_h % 2 == 1;
            assert_eq!(deviation(&f, cap_h).unwrap(), if odd { -n } else { 0.0 });
            assert_eq!(sums.selberg(cap_h).unwrap(), if odd { n } else { 0.0 });
            let jt = sums.modified(cap_h).unwrap();
            if odd {
                assert!((jt - n / (h * h)).abs() <= 1e-9 * n / (h * h), "N={big_n} H={cap_h}");
            } else {
                assert_eq!(jt, 0.0);
            }
        }
    }
}

#[test]
fn alternating_sign_table_closed_form() {
    let big_n = 500;
    let f = generate(FunctionKind::Parity, big_n, None).unwrap();
    let t = near_diag_table(&f, big_n - 1, TableMode::Fft).unwrap();
    for k in -(big_n as i64 - 1)..big_n as i64 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        assert_eq!(t.get(k), sign * (big_n as f64 - k.abs() as f64));
        assert_eq!(correlate(&f, k).unwrap(), sign * big_n as f64);
    }
}

#[test]
fn large_table_paths_agree_with_small_ones() {
    // main_term switches table mode at 64 lags
    let f = generate(FunctionKind::Moebius, 3000, None).unwrap();
    for cap_h in [20, 33, 40, 100] {
        for kind in [KernelKind::Fejer, KernelKind::CesaroSquared] {
            let via = main_term(&f, cap_h, kind).unwrap();
            let lag = 2 * cap_h;
            let t = near_diag_table(&f, lag, TableMode::Direct).unwrap();
            let k = corravg::spectral::kernel_coeffs(kind, cap_h);
            let direct = corravg::spectral::main_term_from_table(&t, &k).unwrap();
            assert_eq!(via, direct);
        }
    }
    for which in Identity::ALL {
        assert!(verify_identity(&f, 100, which).unwrap().holds());
    }
}

#[test]
fn identities_near_h_equals_n() {
    // kernel support exceeds the table; lags >= N contribute nothing
    let f = generate(FunctionKind::Liouville, 30, None).unwrap();
    for cap_h in [16, 25, 30] {
        for which in Identity::ALL {
            let r = verify_identity(&f, cap_h, which).unwrap();
            assert!(r.holds(), "{which:?} H={cap_h} ratio {}", r.ratio);
        }
    }
}
