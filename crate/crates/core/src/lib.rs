//! Numerical machinery for modified Poisson summation ("co-Poisson"),
//! Mellin-transform identities tying those sums to the Riemann zeta
//! function, and the Sonine-space constructions built from the cosine
//! kernel Fredholm equation on `[0, a]`.
//!
//! The crate is organised around the objects it computes:
//!
//! * [`funcspace`] — the test-function universe: even/odd functions on
//!   `(0, ∞)` with support, smoothness and integrability metadata.
//! * [`quad`] — quadrature engines: adaptive Gauss–Kronrod, oscillatory
//!   half-period summation with Euler acceleration, cosine/sine
//!   transforms, the Dirichlet kernel, and Abel-regularised transforms.
//! * [`sums`] — the modified sums `F`, `K`, `A_f`, `A*_f` with rigorous
//!   truncation control.
//! * [`copoisson`] — executable verifiers for the co-Poisson identities
//!   (integral, truncated-transform, Dirichlet points, a.s. Poisson,
//!   Duffin's odd formula, Kahane pairs, Riemann-sum decay).
//! * [`mellin`] — zeta/Gamma/chi evaluators, vertical-line Mellin
//!   transforms, and the Müntz / co-Müntz / functional-equation /
//!   principal-value / L² identity verifiers.
//! * [`sonine`] — the Nyström solver for `φ_a`, the entire completed
//!   transforms `𝒜_a` / `ℬ_a`, and critical-line zero location.
//! * [`gallery`] — explicit square-integrable functions with the support
//!   property, given by finite closed-form sums.
//! * [`report`] — identity reports and their CSV serialisation.
//!
//! Everything is immutable after construction and safe to share across
//! threads; all evaluations are deterministic.

pub mod copoisson;
pub mod error;
pub mod funcspace;
pub mod gallery;
pub mod mellin;
pub mod quad;
pub mod report;
pub mod sonine;
pub mod sums;

pub use error::Error;
pub use funcspace::{builtin_function, parse_function_spec, Parity, ParityFunction};
pub use report::IdentityReport;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Fractional part with value 0 at integers (right-continuous).
pub fn frac_part(x: f64) -> f64 {
    x - x.floor()
}

/// Fractional part `{t}*` with value 1 at integers (left-continuous),
/// used where bounded-variation arguments sample the upper endpoint.
pub fn frac_part_star(x: f64) -> f64 {
    if x == x.floor() && x != 0.0 {
        1.0
    } else {
        x - x.floor()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_part_conventions() {
        assert_eq!(frac_part(1.0), 0.0);
        assert_eq!(frac_part_star(1.0), 1.0);
        assert_eq!(frac_part(1.5), 0.5);
        assert_eq!(frac_part_star(1.5), 0.5);
        assert_eq!(frac_part(0.0), 0.0);
        assert!((frac_part(-0.25) - 0.75).abs() < 1e-15);
    }
}
