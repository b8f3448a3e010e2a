//! Correlation averages of balanced real arithmetic functions.
//!
//! For `f` sampled on `1..=3N` this crate computes the deviation `D_f(N,H)`,
//! the Selberg integral `J_f(N,H)` and the modified (Cesàro-weighted) Selberg
//! integral `J̃_f(N,H)`, each by a fast path and an independent brute-force
//! path, together with their exact spectral main terms, Gallagher band-energy
//! checks, and the exponent arithmetic linking bounds for the three averages.

pub mod arith;
pub mod bounds;
pub mod correlation;
pub mod error;
pub mod kernels;
pub mod scan;
pub mod selberg;
pub mod spectral;

pub use arith::{generate, load, FunctionKind, SampledFunction};
pub use bounds::{
    fit_exponent, gallagher_check, proof_exponents, theorem_lengths, theorem_report, ExponentFit,
    ExponentParams, GallagherReport, TheoremReport, Variant,
};
pub use correlation::{correlate, deviation, near_diag_table, CorrelationTable, TableMode};
pub use error::{Error, Result};
pub use kernels::{Frequency, KernelKind};
pub use scan::{scan, ScanRow};
pub use selberg::{modified_selberg_integral, selberg_integral, IntegralKind, IntegralResult, Mode};
pub use spectral::{band_energy, kernel_coeffs, main_term, verify_identity, Identity, IdentityReport, KernelCoeffs};
