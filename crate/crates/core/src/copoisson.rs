//! Executable verifiers for the co-Poisson identities: the integral
//! identity `∫φF = ∫ψK`, the truncated-transform / Dirichlet-kernel
//! identity, Dirichlet point values, the almost-sure Poisson formula,
//! Duffin's odd alternating formula, Kahane support pairs, and
//! Riemann-sum decay in the mean.

use serde_json::json;

use crate::error::{Error, Result};
use crate::funcspace::{centered_triangle, fejer, gaussian, Parity, ParityFunction};
use crate::quad;
use crate::report::IdentityReport;
use crate::sums;

const PI: f64 = std::f64::consts::PI;

/// Check numerically that `(φ, ψ)` is a cosine-transform pair.
pub fn verify_cosine_pair(phi: &ParityFunction, psi: &ParityFunction, tol: f64) -> Result<()> {
    for y in [0.0, 0.4, 1.1] {
        let t = quad::cosine_transform(phi, y, tol * 1e-2)?.value;
        let d = (t - psi.eval(y)).abs();
        if d > tol {
            return Err(Error::HypothesisFailed(format!(
                "({}, {}) is not a cosine pair: defect {d:.2e} at y = {y}",
                phi.name(),
                psi.name()
            )));
        }
    }
    Ok(())
}

/// The Fejér pair: the centred tent and `(sin πy / πy)²`.
pub fn fejer_pair() -> (ParityFunction, ParityFunction) {
    (centered_triangle(), fejer())
}

/// The self-dual Gaussian pair.
pub fn gaussian_self_pair() -> (ParityFunction, ParityFunction) {
    (gaussian(), gaussian())
}

/// Integrate `∫_0^∞ w(x) g(x) dx` where `w` decays (majorant or compact
/// support from metadata) and `g` stays bounded: dyadic windows with
/// contribution-based stopping.
fn weighted_integral(
    w: &ParityFunction,
    g: impl Fn(f64) -> f64,
    freq: f64,
    tol: f64,
) -> Result<f64> {
    let integrand = |x: f64| w.eval(x) * g(x);
    if let Some((_, hi)) = w.support() {
        return Ok(quad::integrate_adaptive_osc(
            integrand,
            0.0,
            hi,
            freq,
            &w.breakpoints_in(0.0, hi),
            tol,
        )?
        .value);
    }
    let wtol = tol / 32.0;
    let mut total = quad::integrate_adaptive_osc(
        integrand,
        0.0,
        1.0,
        freq,
        &w.breakpoints_in(0.0, 1.0),
        wtol,
    )?
    .value;
    let mut lo = 1.0f64;
    let mut small = 0usize;
    loop {
        let hi = lo * 2.0;
        let r = quad::integrate_adaptive_osc(
            integrand,
            lo,
            hi,
            freq,
            &w.breakpoints_in(lo, hi),
            wtol,
        )?;
        total += r.value;
        if r.value.abs() < tol / 32.0 {
            small += 1;
            if small >= 3 {
                return Ok(total);
            }
        } else {
            small = 0;
        }
        if let Some(k) = w.tail_majorant() {
            if (k.integral_from)(hi) < tol / 32.0 {
                return Ok(total);
            }
        }
        lo = hi;
        if lo > 1e5 {
            return Err(Error::NonConvergentTail(format!(
                "weighted integral against {} not settled by x = {lo:.1e}",
                w.name()
            )));
        }
    }
}

/// Integral co-Poisson identity `∫_0^∞ φ F = ∫_0^∞ ψ K` for a cosine
/// pair `(φ, ψ)` and `f` satisfying condition (C).
pub fn integral_identity(
    f: &ParityFunction,
    phi: &ParityFunction,
    psi: &ParityFunction,
    tol: f64,
) -> Result<IdentityReport> {
    verify_cosine_pair(phi, psi, 1e-6)?;
    let freq = f.support().map_or(2.0, |(_, big_b)| big_b);
    let lhs = weighted_integral(phi, |x| sums::eval_f_sum(f, x).unwrap_or(f64::NAN), freq, tol)?;
    let rhs = weighted_integral(psi, |y| sums::eval_k_sum(f, y).unwrap_or(f64::NAN), 0.0, tol)?;
    Ok(IdentityReport::new_real(
        "copoisson_integral",
        json!({"f": f.name(), "phi": phi.name(), "psi": psi.name()}),
        lhs,
        rhs,
        tol,
    ))
}

/// Tapered truncation `∫_0^{5Λ/4} F(x) w(x) dx` with a linear taper on
/// `[Λ, 5Λ/4]` — a Cesàro mean of `∫_0^{Λ'} F` over `Λ' ∈ [Λ, 5Λ/4]`
/// that suppresses the oscillatory boundary term.
fn tapered_f_integral(f: &ParityFunction, lambda: f64, tol: f64) -> Result<f64> {
    let freq = f.support().map_or(2.0, |(_, big_b)| big_b);
    let hi = 1.25 * lambda;
    let g = |x: f64| {
        let w = if x <= lambda {
            1.0
        } else {
            (hi - x) / (0.25 * lambda)
        };
        w * sums::eval_f_sum(f, x).unwrap_or(f64::NAN)
    };
    Ok(quad::integrate_adaptive_osc(g, 0.0, hi, freq, &[lambda], tol)?.value)
}

/// `∫_0^{→∞} F(x) dx = ½ K(0)`: tapered Λ-ladder, Richardson
/// extrapolated in 1/Λ, against `−½ ∫ f(1/u)/u du`.
pub fn improper_f_integral(
    f: &ParityFunction,
    lambda_ladder: &[f64],
    tol: f64,
) -> Result<IdentityReport> {
    assert!(lambda_ladder.len() >= 2);
    let mut xs = Vec::with_capacity(lambda_ladder.len());
    let mut ys = Vec::with_capacity(lambda_ladder.len());
    for &lam in lambda_ladder {
        xs.push(1.0 / lam);
        ys.push(tapered_f_integral(f, lam, (tol * 1e-2).max(1e-11))?);
    }
    let (lhs, _) = quad::neville_to_zero(&xs, &ys);
    let rhs = -0.5 * f.inverted_integral()?;
    Ok(IdentityReport::new_real(
        "improper_f_integral",
        json!({"f": f.name(), "lambdas": lambda_ladder}),
        lhs,
        rhs,
        tol,
    ))
}

/// Default Λ ladder for the improper-integral and truncated-transform
/// checks.
pub fn default_lambda_ladder() -> Vec<f64> {
    vec![25.0, 50.0, 100.0, 200.0]
}

/// One instance of the truncated-transform identity:
/// `∫_0^Λ 2cos(2πξx) F(x) dx` against
/// `∫_0^X sin(2πΛ(t−ξ))/(π(t−ξ)) Σ f(t/n)/n dt − ∫ f(u)/u du`.
pub fn truncated_transform_vs_dirichlet(
    f: &ParityFunction,
    xi: f64,
    lambda: f64,
    x_max: f64,
    tol: f64,
) -> Result<IdentityReport> {
    assert!(x_max > xi && xi >= 0.0);
    let freq = xi + f.support().map_or(2.0, |(_, big_b)| big_b);
    let lhs = quad::integrate_adaptive_osc(
        |x| 2.0 * (2.0 * PI * xi * x).cos() * sums::eval_f_sum(f, x).unwrap_or(f64::NAN),
        0.0,
        lambda,
        freq,
        &[],
        (tol * 1e-2).max(1e-11),
    )?
    .value;
    let cosum_breaks = cosum_breakpoints(f, x_max);
    let rhs_int = quad::dirichlet_kernel_integral(
        |t| {
            if t <= 0.0 {
                0.0
            } else {
                sums::cosum(f, t).map(|p| p.0).unwrap_or(f64::NAN)
            }
        },
        xi,
        lambda,
        x_max,
        &cosum_breaks,
        (tol * 1e-2).max(1e-11),
    )?
    .value;
    let rhs = rhs_int - f.inverted_integral()?;
    Ok(IdentityReport::new_real(
        "truncated_transform",
        json!({"f": f.name(), "xi": xi, "lambda": lambda, "x_max": x_max}),
        lhs,
        rhs,
        tol,
    ))
}

/// Breakpoints of `t ↦ Σ f(t/n)/n` on `(0, x_max)`: images of the
/// breakpoints and support edges of `f` under multiplication by n.
fn cosum_breakpoints(f: &ParityFunction, x_max: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    let mut sources = f.breakpoints_in(0.0, x_max);
    if let Some((b, big_b)) = f.support() {
        sources.push(b);
        sources.push(big_b);
    }
    for src in sources {
        if src <= 0.0 {
            continue;
        }
        let mut n = 1.0;
        while src * n < x_max {
            pts.push(src * n);
            n += 1.0;
            if n > 1e4 {
                break;
            }
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts
}

/// Runs [`truncated_transform_vs_dirichlet`] over a Λ-ladder; the
/// defects must shrink (within a factor-2 noise allowance).
pub fn truncated_transform_ladder(
    f: &ParityFunction,
    xi: f64,
    lambdas: &[f64],
    x_max: f64,
    tol: f64,
) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::with_capacity(lambdas.len());
    for &lam in lambdas {
        out.push(truncated_transform_vs_dirichlet(f, xi, lam, x_max, tol)?);
    }
    Ok(out)
}

/// Dirichlet value of `K` at ξ: the limit over Λ of the localised
/// Dirichlet-kernel integrals on `(ξ−δ, ξ+δ)`, with `K` extended evenly
/// through 0. Oscillatory boundary terms are suppressed by averaging
/// eight kernel phases per rung; rungs are Richardson-extrapolated in
/// `1/Λ²`.
pub fn dirichlet_point_value(
    f: &ParityFunction,
    xi: f64,
    delta: f64,
    lambda_ladder: &[f64],
    tol: f64,
) -> Result<f64> {
    assert!(xi >= 0.0 && delta > 0.0 && lambda_ladder.len() >= 2);
    let lo = (xi - delta).max(0.0);
    let hi = xi + delta;
    // Expensive K evaluations (functions with unbounded support) go
    // through a piecewise-Chebyshev interpolant of the co-sum.
    let mut breaks = cosum_breakpoints(f, hi);
    breaks.retain(|t| *t > lo);
    let k_fn: Box<dyn Fn(f64) -> f64> = if f.support().is_some() {
        Box::new(|t: f64| sums::eval_k_sum(f, t).unwrap_or(f64::NAN))
    } else {
        let interp = quad::PiecewiseCheb::build(
            |t| sums::eval_k_sum(f, t).unwrap_or(f64::NAN),
            (lo - 1e-9).max(1e-9),
            hi + 1e-9,
            &breaks,
            48,
        );
        Box::new(move |t: f64| interp.eval(t))
    };

    let one_pass = |lambda: f64| -> Result<f64> {
        let two_pi_l = 2.0 * PI * lambda;
        let g = |t: f64| {
            let mut v = 2.0 * lambda * quad::sinc(two_pi_l * (t - xi)) * k_fn(t);
            // even reflection through 0 when the window crosses it
            let t_neg = -t;
            if t_neg > xi - delta {
                v += 2.0 * lambda * quad::sinc(two_pi_l * (t_neg - xi)) * k_fn(t);
            }
            v
        };
        Ok(quad::integrate_adaptive_osc(
            g,
            lo.max(0.0),
            hi,
            lambda,
            &breaks,
            (tol * 1e-2).max(1e-11),
        )?
        .value)
    };

    let mut xs = Vec::with_capacity(lambda_ladder.len());
    let mut ys = Vec::with_capacity(lambda_ladder.len());
    for &lam in lambda_ladder {
        let mut acc = 0.0;
        for m in 0..8 {
            acc += one_pass(lam + m as f64 / (8.0 * delta))?;
        }
        xs.push(1.0 / (lam * lam));
        ys.push(acc / 8.0);
    }
    // ladder must be Cauchy
    let diffs: Vec<f64> = ys.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    for w in diffs.windows(2) {
        if w[1] > w[0].max(tol) * 2.0 {
            return Err(Error::NonConvergentTail(format!(
                "not a Dirichlet point at this resolution (ladder differences {diffs:?})"
            )));
        }
    }
    let (value, _) = quad::neville_to_zero(&xs, &ys);
    Ok(value)
}

/// Default Λ ladder for Dirichlet point values.
pub fn default_dirichlet_ladder() -> Vec<f64> {
    vec![100.0, 200.0]
}

/// Pointwise co-Poisson formula (log-weighted transform hypothesis):
/// `∫_0^∞ 2cos(2πξx) F(x) dx = Σ_m f(ξ/m)/m − ∫ f(u)/u du` per ξ.
pub fn pointwise_copoisson(
    f: &ParityFunction,
    xi_grid: &[f64],
    tol: f64,
) -> Result<Vec<IdentityReport>> {
    check_log_weighted_transform(f)?;
    let freq_base = f.support().map_or(2.0, |(_, big_b)| big_b);
    let inv_mass = f.inverted_integral()?;
    let mut out = Vec::with_capacity(xi_grid.len());
    for &xi in xi_grid {
        assert!(xi >= 0.0);
        // F decays (its transform is L¹): windowed integration.
        let g =
            |x: f64| 2.0 * (2.0 * PI * xi * x).cos() * sums::eval_f_sum(f, x).unwrap_or(f64::NAN);
        let mut lhs = quad::integrate_adaptive_osc(
            &g,
            0.0,
            8.0,
            xi + freq_base,
            &[],
            (tol * 1e-2).max(1e-11),
        )?
        .value;
        let mut lo = 8.0f64;
        let mut small = 0usize;
        loop {
            let hi = lo * 2.0;
            let r = quad::integrate_adaptive_osc(
                &g,
                lo,
                hi,
                xi + freq_base,
                &[],
                (tol * 1e-2).max(1e-11),
            )?;
            lhs += r.value;
            if r.value.abs() < tol / 16.0 {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
            lo = hi;
            if lo > 2048.0 {
                return Err(Error::NonConvergentTail(
                    "transform of F not settled; is the log-weighted hypothesis sound?".into(),
                ));
            }
        }
        let rhs = if xi == 0.0 {
            -inv_mass
        } else {
            sums::cosum(f, xi)?.0 - inv_mass
        };
        out.push(IdentityReport::new_real(
            "pointwise_copoisson",
            json!({"f": f.name(), "xi": xi}),
            lhs,
            rhs,
            tol,
        ));
    }
    Ok(out)
}

/// Crude numeric check of `∫_2^∞ log(y)|f̃(y)| dy < ∞`: dyadic window
/// sums of the sampled transform must decay.
fn check_log_weighted_transform(f: &ParityFunction) -> Result<()> {
    let mut prev = f64::INFINITY;
    let mut lo = 2.0f64;
    for _ in 0..5 {
        let hi = 2.0 * lo;
        // 9-point Simpson on the window
        let n = 8;
        let h = (hi - lo) / n as f64;
        let mut s = 0.0;
        for i in 0..=n {
            let y = lo + i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let ft = quad::cosine_transform(f, y, 1e-9)?.value.abs();
            s += w * y.ln() * ft;
        }
        s *= h / 3.0;
        if s > prev * 1.05 && s > 1e-8 {
            return Err(Error::HypothesisFailed(format!(
                "log-weighted transform windows of {} grow: {s:.3e} after {prev:.3e}",
                f.name()
            )));
        }
        prev = s;
        lo = hi;
        if s < 1e-12 {
            break;
        }
    }
    Ok(())
}

/// Almost-sure Poisson formula for a continuous integrable cosine pair:
/// `Σ_{n∈Z} φ(n/x)/x = Σ_{m∈Z} ψ(mx)` at the sample points.
pub fn poisson_as_check(
    phi: &ParityFunction,
    psi: &ParityFunction,
    x_samples: &[f64],
    tol: f64,
) -> Result<Vec<IdentityReport>> {
    verify_cosine_pair(phi, psi, 1e-6)?;
    let mut out = Vec::with_capacity(x_samples.len());
    for &x in x_samples {
        assert!(x > 0.0);
        let lhs = phi.value_at_zero() / x + 2.0 * sums::poisson_side_sum(phi, x)?.0;
        let rhs = psi.value_at_zero() + 2.0 * sums::dilated_sum(psi, x)?.0;
        out.push(IdentityReport::new_real(
            "poisson_as",
            json!({"phi": phi.name(), "psi": psi.name(), "x": x}),
            lhs,
            rhs,
            tol,
        ));
    }
    Ok(out)
}

/// Duffin's 1945 odd alternating formula: the sine transform of
/// `g(x) = Σ_k (−1)^k 2 f(2x/(2k+1))/(2k+1)` equals
/// `h(y) = Σ_k (−1)^k f((2k+1)/(2y))/y`, for odd `f` supported away
/// from 0.
///
/// The transform of the slowly decaying co-sum is distributed through
/// the sum (each term rescales to a sine transform of `f`, which decays
/// rapidly): `S(g)(y) = Σ_k (−1)^k S_f((2k+1)y/2)`.
pub fn duffin_pair(
    f: &ParityFunction,
    y_samples: &[f64],
    tol: f64,
) -> Result<Vec<IdentityReport>> {
    if f.parity() != Parity::Odd {
        return Err(Error::HypothesisFailed("duffin_pair needs odd f".into()));
    }
    let (b, big_b) = f.support().ok_or_else(|| {
        Error::HypothesisFailed("duffin_pair needs compact support away from 0".into())
    })?;
    if b <= 0.0 {
        return Err(Error::HypothesisFailed(
            "duffin_pair needs support away from 0".into(),
        ));
    }
    let mut out = Vec::with_capacity(y_samples.len());
    for &y in y_samples {
        assert!(y > 0.0);
        let mut lhs = 0.0;
        let mut k = 0u64;
        let mut tiny_run = 0usize;
        loop {
            let xi = (2 * k + 1) as f64 * y / 2.0;
            let term = quad::sine_transform(f, xi, (tol * 1e-2).max(1e-13))?.value;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            lhs += sign * term;
            if term.abs() < tol * 1e-3 {
                tiny_run += 1;
                if tiny_run >= 3 {
                    break;
                }
            } else {
                tiny_run = 0;
            }
            k += 1;
            if k > 4096 {
                return Err(Error::NonConvergentTail(
                    "duffin transform series did not settle".into(),
                ));
            }
        }
        let mut rhs = 0.0;
        let mut k = 0u64;
        loop {
            let m = (2 * k + 1) as f64;
            if m > 2.0 * y * big_b {
                break;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            rhs += sign * f.eval(m / (2.0 * y)) / y;
            k += 1;
        }
        out.push(IdentityReport::new_real(
            "duffin",
            json!({"f": f.name(), "y": y}),
            lhs,
            rhs,
            tol,
        ));
    }
    Ok(out)
}

/// The Kahane regularised pair built from even C∞ functions `f`, `g`
/// supported in `[−b_f, b_f]`, `[−b_g, b_g]` with `b = max(b_f,b_g) < ½`:
///
/// `φ(x) = g̃(x) Σ_n f(x+n)  ↦  ψ(y) = Σ_m f̃(m) g(y−m)`.
///
/// Reports: the transform match `φ̃(y) = ψ(y)` at `y_samples`, and the
/// exact vanishing of the shifted pair `φ₁(x) = e^{iπx} φ(x−½)` and its
/// transform on `(−a, a)`, `a = ½ − b`, at `x_samples ⊂ (−a, a)`.
pub fn kahane_pair(
    f: &ParityFunction,
    g: &ParityFunction,
    x_samples: &[f64],
    y_samples: &[f64],
    tol: f64,
) -> Result<Vec<IdentityReport>> {
    let bf = f
        .support()
        .map(|(_, hi)| hi)
        .ok_or_else(|| Error::HypothesisFailed("kahane f must be compactly supported".into()))?;
    let bg = g
        .support()
        .map(|(_, hi)| hi)
        .ok_or_else(|| Error::HypothesisFailed("kahane g must be compactly supported".into()))?;
    let b = bf.max(bg);
    if b >= 0.5 {
        return Err(Error::HypothesisFailed(format!(
            "kahane supports must stay inside (−½, ½); got b = {b}"
        )));
    }
    let a = 0.5 - b;

    // 1-periodic even factor Σ_n f(x+n): at most two nonzero terms
    let periodic_f = {
        let f = f.clone();
        move |x: f64| {
            let n0 = (-x).round();
            let mut s = 0.0;
            for dn in [-1.0, 0.0, 1.0] {
                s += f.eval_signed(x + n0 + dn);
            }
            s
        }
    };
    let g_hat = {
        let g = g.clone();
        move |x: f64| {
            quad::cosine_transform(&g, x.abs(), 1e-12)
                .map(|r| r.value)
                .unwrap_or(f64::NAN)
        }
    };
    let phi = {
        let periodic_f = periodic_f.clone();
        let g_hat = g_hat.clone();
        move |x: f64| g_hat(x) * periodic_f(x)
    };
    // f̃(m) cache for ψ
    let f_hat = |m: f64| -> Result<f64> { Ok(quad::cosine_transform(f, m.abs(), 1e-12)?.value) };
    let psi = |y: f64| -> Result<f64> {
        // only m with |y − m| ≤ b_g contribute
        let m_lo = (y - bg).ceil() as i64;
        let m_hi = (y + bg).floor() as i64;
        let mut s = 0.0;
        for m in m_lo..=m_hi {
            s += f_hat(m as f64)? * g.eval_signed(y - m as f64);
        }
        Ok(s)
    };

    let mut out = Vec::new();

    // transform match: φ̃(y) vs ψ(y), integrating segment by segment
    // around the integers where φ lives
    for &y in y_samples {
        let mut lhs = 0.0;
        let mut small = 0usize;
        for n in 0..200 {
            let nf = n as f64;
            let lo = (nf - b).max(0.0);
            let hi = nf + b;
            let r = quad::integrate_adaptive_osc(
                |x| 2.0 * (2.0 * PI * y * x).cos() * phi(x),
                lo,
                hi,
                y.abs() + 1.0,
                &[],
                (tol * 1e-3).max(1e-13),
            )?;
            lhs += r.value;
            if r.value.abs() < tol * 1e-3 {
                small += 1;
                if small >= 4 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        let rhs = psi(y)?;
        out.push(IdentityReport::new_real(
            "kahane_transform",
            json!({"f": f.name(), "g": g.name(), "y": y}),
            lhs,
            rhs,
            tol,
        ));
    }

    // exact support zeros of the shifted pair on (−a, a): φ₁(x) ≠ 0
    // would need φ(x−½) ≠ 0, i.e. |x−½| ∉ (b, 1−b)
    for &x in x_samples {
        if x.abs() >= a {
            return Err(Error::Invalid(format!(
                "support sample {x} outside the gap (−{a}, {a})"
            )));
        }
        let phi1 = phi((x - 0.5).abs());
        let psi1 = psi((x + 0.5).abs())?;
        out.push(
            IdentityReport::new_real(
                "kahane_support",
                json!({"f": f.name(), "g": g.name(), "x": x}),
                phi1,
                0.0,
                0.0,
            )
            .with_defect(phi1.abs()),
        );
        out.push(
            IdentityReport::new_real(
                "kahane_support_transform",
                json!({"f": f.name(), "g": g.name(), "x": x}),
                psi1,
                0.0,
                0.0,
            )
            .with_defect(psi1.abs()),
        );
    }
    Ok(out)
}

/// Riemann-sum decay in the mean: the window averages
/// `(1/λ)∫_λ^{2λ} |A(x)| dx` with `A = F_φ` must decrease toward 0
/// along the λ-ladder. Returns the averages and a summary report whose
/// defect is the last average.
pub fn riemann_sum_decay(
    phi: &ParityFunction,
    lambdas: &[f64],
    tol: f64,
) -> Result<(Vec<f64>, IdentityReport)> {
    assert!(lambdas.len() >= 2);
    let mut avgs = Vec::with_capacity(lambdas.len());
    for &lam in lambdas {
        let r = quad::integrate_adaptive_split(
            |x| sums::eval_f_sum(phi, x).unwrap_or(f64::NAN).abs(),
            lam,
            2.0 * lam,
            &[],
            1e-10,
        )?;
        avgs.push(r.value / lam);
    }
    let decreasing = avgs.windows(2).all(|w| w[1] < w[0]);
    let last = *avgs.last().unwrap();
    let rep = IdentityReport::new_real(
        "riemann_sum_decay",
        json!({"phi": phi.name(), "lambdas": lambdas}),
        last,
        0.0,
        tol,
    )
    .with_defect(if decreasing { last } else { f64::INFINITY });
    Ok((avgs, rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{bump, centered_bump, indicator, xsq_gaussian};

    #[test]
    fn fejer_is_a_cosine_pair() {
        let (phi, psi) = fejer_pair();
        verify_cosine_pair(&phi, &psi, 1e-8).unwrap();
    }

    #[test]
    fn integral_identity_zero_function() {
        let z = ParityFunction::new("zero", Parity::Even, |_| 0.0)
            .with_support(1.0, 2.0)
            .with_flags(true, true, true);
        let (phi, psi) = gaussian_self_pair();
        let rep = integral_identity(&z, &phi, &psi, 1e-12).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.lhs.re, 0.0);
    }

    #[test]
    fn integral_identity_bump_gaussian() {
        let f = bump(1.0, 2.0);
        let (phi, psi) = gaussian_self_pair();
        let rep = integral_identity(&f, &phi, &psi, 1e-7).unwrap();
        assert!(rep.pass, "defect {}", rep.defect);
    }

    #[test]
    fn integral_identity_bump_fejer() {
        let f = bump(1.0, 2.0);
        let (phi, psi) = fejer_pair();
        let rep = integral_identity(&f, &phi, &psi, 1e-6).unwrap();
        assert!(rep.pass, "defect {}", rep.defect);
    }

    #[test]
    fn integral_identity_rejects_non_pair() {
        let f = bump(1.0, 2.0);
        let phi = gaussian();
        let psi = fejer();
        assert!(matches!(
            integral_identity(&f, &phi, &psi, 1e-6),
            Err(Error::HypothesisFailed(_))
        ));
    }

    #[test]
    fn improper_integral_bump() {
        let f = bump(1.0, 2.0);
        let rep = improper_f_integral(&f, &default_lambda_ladder(), 1e-4).unwrap();
        assert!(rep.pass, "defect {}", rep.defect);
    }

    #[test]
    fn improper_integral_indicator() {
        let f = indicator(1.0, 2.0);
        let rep = improper_f_integral(&f, &default_lambda_ladder(), 1e-3).unwrap();
        assert!(rep.pass, "defect {}", rep.defect);
    }

    #[test]
    fn dirichlet_point_at_zero_is_k_zero() {
        let f = bump(1.0, 2.0);
        let v = dirichlet_point_value(&f, 0.0, 0.5, &default_dirichlet_ladder(), 1e-7).unwrap();
        let k0 = sums::eval_k_sum(&f, 0.0).unwrap();
        assert!((v - k0).abs() < 1e-6, "{v} vs {k0}");
    }

    #[test]
    fn dirichlet_point_at_continuity_point() {
        let f = bump(1.0, 2.0);
        let xi = 1.5;
        let v = dirichlet_point_value(&f, xi, 0.25, &default_dirichlet_ladder(), 1e-7).unwrap();
        let k = sums::eval_k_sum(&f, xi).unwrap();
        assert!((v - k).abs() < 1e-6, "{v} vs {k}");
    }

    #[test]
    fn dirichlet_point_mean_value_at_jump() {
        // K of the indicator jumps at ξ = 1 (the co-sum picks up n = 1);
        // the Dirichlet value is the mean of the two one-sided limits.
        let f = indicator(1.0, 2.0);
        let xi = 1.0;
        let v = dirichlet_point_value(&f, xi, 0.25, &default_dirichlet_ladder(), 1e-6).unwrap();
        let k_left = sums::eval_k_sum(&f, xi - 1e-9).unwrap();
        let k_right = sums::eval_k_sum(&f, xi + 1e-9).unwrap();
        let mean = 0.5 * (k_left + k_right);
        assert!((v - mean).abs() < 1e-5, "{v} vs mean {mean}");
    }

    #[test]
    fn poisson_as_gaussian() {
        let (phi, psi) = gaussian_self_pair();
        let reports =
            poisson_as_check(&phi, &psi, &[1.0, std::f64::consts::SQRT_2, 0.8], 1e-10).unwrap();
        for r in reports {
            assert!(r.pass, "x: defect {}", r.defect);
        }
    }

    #[test]
    fn pointwise_copoisson_xsq_gaussian() {
        let f = xsq_gaussian();
        let reports = pointwise_copoisson(&f, &[0.0, 0.7], 1e-3).unwrap();
        for r in reports {
            assert!(r.pass, "defect {} at {}", r.defect, r.params);
        }
    }

    #[test]
    fn duffin_odd_bump() {
        let f = bump(1.0, 2.0).with_parity(Parity::Odd);
        let reports = duffin_pair(&f, &[0.4, 0.9], 1e-6).unwrap();
        for r in reports {
            assert!(r.pass, "defect {} at {}", r.defect, r.params);
        }
    }

    #[test]
    fn duffin_lhs_against_direct_cosum_integration() {
        // loose oracle: integrate the slowly decaying alternating co-sum
        // directly against the sine kernel
        let f = bump(1.0, 2.0).with_parity(Parity::Odd);
        let y = 0.4;
        let g = |x: f64| {
            let mut s = 0.0;
            let mut k = 0u64;
            loop {
                let m = (2 * k + 1) as f64;
                if m > 2.0 * x {
                    break;
                }
                if m >= x {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    s += sign * 2.0 * f.eval(2.0 * x / m) / m;
                }
                k += 1;
            }
            s
        };
        let head = quad::integrate_adaptive_osc(
            |x| 2.0 * (2.0 * PI * y * x).sin() * g(x),
            0.0,
            320.0,
            y + 1.0,
            &[],
            1e-9,
        )
        .unwrap();
        let tail = quad::oscillatory_tail(
            |x| 2.0 * (2.0 * PI * y * x).sin() * g(x),
            320.0,
            0.5 / y,
            1e-5,
            512,
        )
        .unwrap();
        let oracle = head.value + tail.value;
        let rep = &duffin_pair(&f, &[y], 1e-6).unwrap()[0];
        assert!(
            (rep.lhs.re - oracle).abs() < 5e-3,
            "series {} vs direct {oracle}",
            rep.lhs.re
        );
    }

    #[test]
    fn duffin_rejects_even() {
        let f = bump(1.0, 2.0);
        assert!(duffin_pair(&f, &[0.4], 1e-6).is_err());
    }

    #[test]
    fn kahane_support_zeros_are_exact() {
        let f = centered_bump(0.25);
        let g = centered_bump(0.25);
        let xs: Vec<f64> = (-4..=4).map(|k| k as f64 * 0.05).collect();
        let reports = kahane_pair(&f, &g, &xs, &[0.1], 1e-7).unwrap();
        for r in reports.iter().filter(|r| r.kind.contains("support")) {
            assert_eq!(r.defect, 0.0, "at {}", r.params);
            assert!(r.pass);
        }
    }

    #[test]
    fn riemann_sum_decay_gaussian() {
        let phi = gaussian();
        let (avgs, rep) = riemann_sum_decay(&phi, &[10.0, 20.0, 40.0], 0.1).unwrap();
        assert!(avgs.windows(2).all(|w| w[1] < w[0]), "{avgs:?}");
        assert!(rep.pass);
        // oracle: A(x) = −φ(0)/(2x) + Σψ(mx) ≈ −1/(2x) here, so the
        // window average is ≈ ln2/(2λ)
        for (lam, avg) in [10.0, 20.0, 40.0].iter().zip(&avgs) {
            let expect = std::f64::consts::LN_2 / (2.0 * lam);
            assert!((avg - expect).abs() < 1e-4, "λ={lam}: {avg} vs {expect}");
        }
    }
}
