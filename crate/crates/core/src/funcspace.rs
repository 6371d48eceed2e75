//! The test-function universe: even/odd real functions on `(0, ∞)` with
//! support, smoothness and integrability metadata, plus the built-in
//! closed forms used throughout the identity verifiers.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::frac_part;
use crate::quad;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Measurable,
    BoundedVariation,
    C1,
    CInf,
}

/// A decreasing integrable majorant `k(x) ≥ |f(x)|` together with an
/// upper bound for its tail integral `∫_x^∞ k`, used for truncation
/// control in the modified sums.
#[derive(Clone)]
pub struct TailMajorant {
    pub eval: RealFn,
    /// Upper bound on `∫_x^∞ k(t) dt`.
    pub integral_from: RealFn,
}

impl TailMajorant {
    pub fn new(
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        integral_from: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            integral_from: Arc::new(integral_from),
        }
    }
}

/// An even or odd real function on `(0, ∞)`, defined a.e., carrying the
/// metadata the sum and transform engines need.
///
/// Values are immutable after construction; the two integral caches are
/// write-once. Evaluation outside a declared support interval returns 0
/// regardless of the underlying closure.
#[derive(Clone)]
pub struct ParityFunction {
    name: String,
    parity: Parity,
    eval: RealFn,
    deriv: Option<RealFn>,
    /// Support `[b, B]` with `0 ≤ b < B`; `None` means all of `(0, ∞)`.
    support: Option<(f64, f64)>,
    smoothness: Smoothness,
    satisfies_c: bool,
    is_l1: bool,
    is_l2: bool,
    value_at_zero: f64,
    known_integral: Option<f64>,
    known_inverted_integral: Option<f64>,
    tail_majorant: Option<TailMajorant>,
    inverted_tail_majorant: Option<TailMajorant>,
    /// Jump/kink locations inside `(lo, hi)`, for quadrature panel splitting.
    breakpoints: Option<Arc<dyn Fn(f64, f64) -> Vec<f64> + Send + Sync>>,
    continuous: bool,
    cached_integral: Arc<OnceLock<f64>>,
    cached_inverted_integral: Arc<OnceLock<f64>>,
}

impl fmt::Debug for ParityFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParityFunction")
            .field("name", &self.name)
            .field("parity", &self.parity)
            .field("support", &self.support)
            .field("smoothness", &self.smoothness)
            .finish()
    }
}

impl ParityFunction {
    pub fn new(
        name: impl Into<String>,
        parity: Parity,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            parity,
            eval: Arc::new(eval),
            deriv: None,
            support: None,
            smoothness: Smoothness::Measurable,
            satisfies_c: false,
            is_l1: false,
            is_l2: false,
            value_at_zero: 0.0,
            known_integral: None,
            known_inverted_integral: None,
            tail_majorant: None,
            inverted_tail_majorant: None,
            breakpoints: None,
            continuous: true,
            cached_integral: Arc::new(OnceLock::new()),
            cached_inverted_integral: Arc::new(OnceLock::new()),
        }
    }

    pub fn with_support(mut self, b: f64, big_b: f64) -> Self {
        assert!(0.0 <= b && b < big_b, "support must satisfy 0 <= b < B");
        self.support = Some((b, big_b));
        self
    }

    pub fn with_smoothness(mut self, s: Smoothness) -> Self {
        self.smoothness = s;
        self
    }

    pub fn with_flags(mut self, satisfies_c: bool, is_l1: bool, is_l2: bool) -> Self {
        self.satisfies_c = satisfies_c;
        self.is_l1 = is_l1;
        self.is_l2 = is_l2;
        self
    }

    pub fn with_value_at_zero(mut self, v: f64) -> Self {
        self.value_at_zero = v;
        self
    }

    pub fn with_known_integral(mut self, v: f64) -> Self {
        self.known_integral = Some(v);
        self
    }

    pub fn with_known_inverted_integral(mut self, v: f64) -> Self {
        self.known_inverted_integral = Some(v);
        self
    }

    pub fn with_tail_majorant(mut self, k: TailMajorant) -> Self {
        self.tail_majorant = Some(k);
        self
    }

    pub fn with_inverted_tail_majorant(mut self, k: TailMajorant) -> Self {
        self.inverted_tail_majorant = Some(k);
        self
    }

    pub fn with_deriv(mut self, d: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.deriv = Some(Arc::new(d));
        self
    }

    pub fn with_breakpoints(
        mut self,
        bp: impl Fn(f64, f64) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.breakpoints = Some(Arc::new(bp));
        self
    }

    pub fn with_parity(mut self, p: Parity) -> Self {
        self.parity = p;
        self
    }

    pub fn with_continuity(mut self, continuous: bool) -> Self {
        self.continuous = continuous;
        self
    }

    pub fn is_continuous(&self) -> bool {
        self.continuous
    }

    pub fn value_at_zero(&self) -> f64 {
        self.value_at_zero
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        self.support
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn satisfies_c(&self) -> bool {
        self.satisfies_c
    }

    pub fn is_l1(&self) -> bool {
        self.is_l1
    }

    pub fn is_l2(&self) -> bool {
        self.is_l2
    }

    pub fn tail_majorant(&self) -> Option<&TailMajorant> {
        self.tail_majorant.as_ref()
    }

    pub fn inverted_tail_majorant(&self) -> Option<&TailMajorant> {
        self.inverted_tail_majorant.as_ref()
    }

    pub fn deriv_at(&self, x: f64) -> Option<f64> {
        self.deriv.as_ref().map(|d| d(x))
    }

    pub fn has_deriv(&self) -> bool {
        self.deriv.is_some()
    }

    /// Evaluate at `x > 0`. Outside a declared support the value is
    /// exactly 0.
    pub fn eval(&self, x: f64) -> f64 {
        if x == 0.0 {
            return self.value_at_zero;
        }
        if let Some((b, big_b)) = self.support {
            if x < b || x > big_b {
                return 0.0;
            }
        }
        (self.eval)(x)
    }

    /// Parity extension to all of the real line.
    pub fn eval_signed(&self, x: f64) -> f64 {
        if x > 0.0 {
            self.eval(x)
        } else if x < 0.0 {
            match self.parity {
                Parity::Even => self.eval(-x),
                Parity::Odd => -self.eval(-x),
            }
        } else {
            match self.parity {
                Parity::Even => self.value_at_zero,
                Parity::Odd => 0.0,
            }
        }
    }

    /// Jump/kink locations in `(lo, hi)`, sorted, if any are declared.
    pub fn breakpoints_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        match &self.breakpoints {
            Some(bp) => bp(lo, hi),
            None => Vec::new(),
        }
    }

    /// `∫_0^∞ f(u) du`, from metadata if present, otherwise by adaptive
    /// quadrature; the result is cached.
    pub fn integral(&self) -> Result<f64> {
        if let Some(v) = self.known_integral {
            return Ok(v);
        }
        if let Some(v) = self.cached_integral.get() {
            return Ok(*v);
        }
        let v = self.compute_integral()?;
        let _ = self.cached_integral.set(v);
        Ok(v)
    }

    /// `∫_0^∞ f(1/u)/u du = ∫_0^∞ f(x)/x dx`, cached like [`integral`].
    ///
    /// [`integral`]: Self::integral
    pub fn inverted_integral(&self) -> Result<f64> {
        if let Some(v) = self.known_inverted_integral {
            return Ok(v);
        }
        if let Some(v) = self.cached_inverted_integral.get() {
            return Ok(*v);
        }
        let v = self.inverted().compute_integral()?;
        let _ = self.cached_inverted_integral.set(v);
        Ok(v)
    }

    fn compute_integral(&self) -> Result<f64> {
        let tol = 1e-12;
        match self.support {
            Some((b, big_b)) => {
                let r = quad::integrate_adaptive_split(
                    |x| self.eval(x),
                    b,
                    big_b,
                    &self.breakpoints_in(b, big_b),
                    tol,
                )?;
                Ok(r.value)
            }
            None => {
                if !self.is_l1 {
                    return Err(Error::MissingMetadata(format!(
                        "{} is not integrable; no exact integral exists",
                        self.name
                    )));
                }
                let mut total = 0.0;
                // [0,1] then dyadic windows; the tail majorant bounds the rest.
                let r = quad::integrate_adaptive_split(
                    |x| self.eval(x),
                    0.0,
                    1.0,
                    &self.breakpoints_in(0.0, 1.0),
                    tol,
                )?;
                total += r.value;
                let mut lo = 1.0f64;
                loop {
                    let hi = lo * 2.0;
                    let r = quad::integrate_adaptive_split(
                        |x| self.eval(x),
                        lo,
                        hi,
                        &self.breakpoints_in(lo, hi),
                        tol,
                    )?;
                    total += r.value;
                    if let Some(k) = &self.tail_majorant {
                        if (k.integral_from)(hi) < tol {
                            return Ok(total);
                        }
                    } else if r.value.abs() < tol && hi > 1e4 {
                        return Ok(total);
                    }
                    if hi > 1e9 {
                        return Err(Error::NonConvergentTail(format!(
                            "integral of {} still growing at {hi:.1e}",
                            self.name
                        )));
                    }
                    lo = hi;
                }
            }
        }
    }

    /// The involution `If(x) = f(1/x)/x`, which swaps the roles of the
    /// `F` and `K` sums and of the two Mellin transforms.
    pub fn inverted(&self) -> ParityFunction {
        let inner = self.clone();
        let support = self.support.map(|(b, big_b)| {
            let lo = if big_b.is_finite() { 1.0 / big_b } else { 0.0 };
            (lo, if b > 0.0 { 1.0 / b } else { f64::INFINITY })
        });
        let mut out = ParityFunction::new(
            format!("inv({})", self.name),
            self.parity,
            move |x: f64| inner.eval(1.0 / x) / x,
        );
        if let Some((lo, hi)) = support {
            if hi.is_finite() {
                out = out.with_support(lo, hi);
            }
        }
        out.smoothness = self.smoothness;
        out.continuous = self.continuous;
        out.satisfies_c = self.satisfies_c;
        // L¹ of If(x) dx equals ∫ f(x)/x dx: finite iff the inverted
        // integral of f is; record what we know.
        out.is_l1 = self.satisfies_c || self.known_inverted_integral.is_some();
        out.is_l2 = false;
        out.known_integral = self.known_inverted_integral;
        out.known_inverted_integral = self.known_integral;
        out.tail_majorant = self.inverted_tail_majorant.clone();
        out.inverted_tail_majorant = self.tail_majorant.clone();
        if let Some(d) = self.deriv.clone() {
            let e = self.eval.clone();
            let sup = self.support;
            out.deriv = Some(Arc::new(move |x: f64| {
                let u = 1.0 / x;
                let inside = match sup {
                    Some((b, big_b)) => u >= b && u <= big_b,
                    None => true,
                };
                if inside {
                    -d(u) / (x * x * x) - e(u) / (x * x)
                } else {
                    0.0
                }
            }));
        }
        if let Some(bp) = self.breakpoints.clone() {
            out.breakpoints = Some(Arc::new(move |lo: f64, hi: f64| {
                if lo <= 0.0 {
                    return Vec::new();
                }
                let mut v: Vec<f64> = bp(1.0 / hi, 1.0 / lo).into_iter().map(|t| 1.0 / t).collect();
                v.sort_by(|a, b| a.partial_cmp(b).unwrap());
                v
            }));
        }
        out
    }
}

/// `∫_0^∞ |f(x)|(1 + 1/x) dx` to within `tol`, or a divergence signal
/// when dyadic window sums stop decaying while the partial integral
/// keeps growing.
pub fn condition_c_norm(f: &ParityFunction, tol: f64) -> Result<f64> {
    assert!(tol > 0.0);
    let g = |x: f64| f.eval(x).abs() * (1.0 + 1.0 / x);
    let (lo_supp, hi_supp) = f.support().unwrap_or((0.0, f64::INFINITY));

    let mut total = 0.0;
    // Center window [1/2, 2] clipped to the support.
    let c_lo = lo_supp.max(0.5);
    let c_hi = hi_supp.min(2.0);
    if c_lo < c_hi {
        total += quad::integrate_adaptive_split(g, c_lo, c_hi, &f.breakpoints_in(c_lo, c_hi), tol)?
            .value;
    }

    let cap = 1e9;
    // Head: dyadic windows toward 0.
    let mut prev = f64::INFINITY;
    let mut flat = 0usize;
    let mut hi = 0.5f64;
    while hi > lo_supp {
        let lo = (hi / 2.0).max(lo_supp);
        let s = quad::integrate_adaptive_split(g, lo, hi, &f.breakpoints_in(lo, hi), tol)?.value;
        total += s;
        if s > 0.7 * prev && s > tol {
            flat += 1;
        } else {
            flat = 0;
        }
        if flat >= 6 || total > cap {
            return Err(Error::Divergent { partial: total });
        }
        if s < tol / 16.0 && hi < 1e-3 {
            break;
        }
        prev = s;
        hi = lo;
        if hi < 1e-14 {
            break;
        }
    }
    // Tail: dyadic windows toward infinity.
    prev = f64::INFINITY;
    flat = 0;
    let mut lo = 2.0f64;
    while lo < hi_supp {
        let hi = (lo * 2.0).min(hi_supp);
        let s = quad::integrate_adaptive_split(g, lo, hi, &f.breakpoints_in(lo, hi), tol)?.value;
        total += s;
        if s > 0.7 * prev && s > tol {
            flat += 1;
        } else {
            flat = 0;
        }
        if flat >= 6 || total > cap {
            return Err(Error::Divergent { partial: total });
        }
        if s < tol / 16.0 && lo > 1e3 {
            break;
        }
        prev = s;
        lo = hi;
        if lo > 1e15 {
            return Err(Error::Divergent { partial: total });
        }
    }
    Ok(total)
}

fn bump_eval(b: f64, big_b: f64, x: f64) -> f64 {
    if x <= b || x >= big_b {
        0.0
    } else {
        let half = (big_b - b) / 2.0;
        (1.0 / (half * half) - 1.0 / ((x - b) * (big_b - x))).exp()
    }
}

/// The standard C∞ bump on `[b, B]`, normalised to peak 1 at the
/// midpoint: `exp(4/(B−b)² − 1/((x−b)(B−x)))`.
pub fn bump(b: f64, big_b: f64) -> ParityFunction {
    ParityFunction::new(
        format!("bump:{b},{big_b}"),
        Parity::Even,
        move |x| bump_eval(b, big_b, x),
    )
    .with_support(b, big_b)
    .with_smoothness(Smoothness::CInf)
    .with_flags(b > 0.0, true, true)
    .with_deriv(move |x| {
        if x <= b || x >= big_b {
            0.0
        } else {
            let h = (x - b) * (big_b - x);
            bump_eval(b, big_b, x) * (big_b + b - 2.0 * x) / (h * h)
        }
    })
}

/// C∞ bump centred at the origin, supported in `[−b, b]`, peak 1 at 0.
pub fn centered_bump(b: f64) -> ParityFunction {
    ParityFunction::new(format!("cbump:{b}"), Parity::Even, move |x: f64| {
        if x >= b {
            0.0
        } else {
            (1.0 / (b * b) - 1.0 / (b * b - x * x)).exp()
        }
    })
    .with_support(0.0, b)
    .with_smoothness(Smoothness::CInf)
    .with_flags(false, true, true)
    .with_value_at_zero(1.0)
    .with_deriv(move |x: f64| {
        if x >= b {
            0.0
        } else {
            let h = b * b - x * x;
            -(1.0 / (b * b) - 1.0 / h).exp() * 2.0 * x / (h * h)
        }
    })
}

/// `exp(−π x²)`: the self-reciprocal Gaussian.
///
/// Note it does *not* satisfy condition (C): `f(0) = 1 ≠ 0`, so
/// `∫_0^1 |f(x)|/x dx` diverges logarithmically.
pub fn gaussian() -> ParityFunction {
    ParityFunction::new("gaussian", Parity::Even, |x: f64| {
        (-std::f64::consts::PI * x * x).exp()
    })
    .with_smoothness(Smoothness::CInf)
    .with_flags(false, true, true)
    .with_value_at_zero(1.0)
    .with_known_integral(0.5)
    .with_tail_majorant(TailMajorant::new(
        |x: f64| (-std::f64::consts::PI * x * x).exp(),
        |x: f64| {
            if x < 0.5 {
                0.5
            } else {
                (-std::f64::consts::PI * x * x).exp() / (2.0 * std::f64::consts::PI * x)
            }
        },
    ))
    .with_deriv(|x: f64| {
        let pi = std::f64::consts::PI;
        -2.0 * pi * x * (-pi * x * x).exp()
    })
}

/// `x · exp(−π x²)`, odd; it is exactly its own sine transform.
pub fn x_gaussian() -> ParityFunction {
    let pi = std::f64::consts::PI;
    ParityFunction::new("x_gaussian", Parity::Odd, move |x: f64| {
        x * (-pi * x * x).exp()
    })
    .with_smoothness(Smoothness::CInf)
    .with_flags(true, true, true)
    .with_known_integral(0.5 / pi)
    .with_tail_majorant(TailMajorant::new(
        move |x: f64| {
            // x e^{−πx²} peaks at x = 1/√(2π); flat majorant before that.
            let peak = 1.0 / (2.0 * pi).sqrt();
            if x <= peak {
                peak * (-0.5f64).exp()
            } else {
                x * (-pi * x * x).exp()
            }
        },
        move |x: f64| {
            if x < 1.0 {
                0.5
            } else {
                (-pi * x * x).exp() / (2.0 * pi)
            }
        },
    ))
}

/// `4π x² exp(−π x²)`, even, vanishing at 0, with `∫_0^∞ f = 1`; its
/// cosine transform is `(2 − 4π y²) e^{−π y²}`.
pub fn xsq_gaussian() -> ParityFunction {
    let pi = std::f64::consts::PI;
    ParityFunction::new("xsq_gaussian", Parity::Even, move |x: f64| {
        4.0 * pi * x * x * (-pi * x * x).exp()
    })
    .with_smoothness(Smoothness::CInf)
    .with_flags(true, true, true)
    .with_known_integral(1.0)
    .with_known_inverted_integral(2.0)
    .with_tail_majorant(TailMajorant::new(
        move |x: f64| {
            let peak = 1.0 / pi.sqrt();
            if x <= peak {
                4.0 * (-1.0f64).exp()
            } else {
                4.0 * pi * x * x * (-pi * x * x).exp()
            }
        },
        move |x: f64| {
            if x < 1.0 {
                1.0
            } else {
                3.0 * x * (-pi * x * x).exp()
            }
        },
    ))
    // f(1/t)/t = 4π e^{−π/t²}/t³ ≤ min(0.93, 4π/t³)
    .with_inverted_tail_majorant(TailMajorant::new(
        move |t: f64| {
            let edge = (4.0 * pi / 0.93).powf(1.0 / 3.0);
            if t <= edge {
                0.93
            } else {
                4.0 * pi / (t * t * t)
            }
        },
        move |t: f64| {
            let edge = (4.0 * pi / 0.93).powf(1.0 / 3.0);
            if t <= edge {
                0.93 * (edge - t.max(0.0)) + 2.0 * pi / (edge * edge)
            } else {
                2.0 * pi / (t * t)
            }
        },
    ))
}

/// Closed form for the cosine transform of [`xsq_gaussian`].
pub fn xsq_gaussian_transform(y: f64) -> f64 {
    let pi = std::f64::consts::PI;
    (2.0 - 4.0 * pi * y * y) * (-pi * y * y).exp()
}

/// Indicator of `[b, B]`.
pub fn indicator(b: f64, big_b: f64) -> ParityFunction {
    ParityFunction::new(format!("indicator:{b},{big_b}"), Parity::Even, |_x| 1.0)
        .with_support(b, big_b)
        .with_smoothness(Smoothness::BoundedVariation)
        .with_flags(b > 0.0, true, true)
        .with_known_integral(big_b - b)
        .with_known_inverted_integral((big_b / b).ln())
        .with_continuity(false)
        .with_breakpoints(move |lo, hi| {
            [b, big_b]
                .into_iter()
                .filter(|t| *t > lo && *t < hi)
                .collect()
        })
}

/// Tent function on `[b, B]`, peak 1 at the midpoint.
pub fn triangle(b: f64, big_b: f64) -> ParityFunction {
    let m = 0.5 * (b + big_b);
    ParityFunction::new(
        format!("triangle:{b},{big_b}"),
        Parity::Even,
        move |x: f64| {
            if x <= b || x >= big_b {
                0.0
            } else if x <= m {
                (x - b) / (m - b)
            } else {
                (big_b - x) / (big_b - m)
            }
        },
    )
    .with_support(b, big_b)
    .with_smoothness(Smoothness::BoundedVariation)
    .with_flags(b > 0.0, true, true)
    .with_known_integral(0.5 * (big_b - b))
    .with_known_inverted_integral(
        big_b / (big_b - m) * (big_b / m).ln() - b / (m - b) * (m / b).ln(),
    )
    .with_breakpoints(move |lo, hi| {
        [b, m, big_b]
            .into_iter()
            .filter(|t| *t > lo && *t < hi)
            .collect()
    })
}

/// Centred tent `max(0, 1 − x)`: one half of the Fejér pair.
pub fn centered_triangle() -> ParityFunction {
    ParityFunction::new("ctriangle", Parity::Even, |x: f64| {
        if x >= 1.0 {
            0.0
        } else {
            1.0 - x
        }
    })
    .with_support(0.0, 1.0)
    .with_smoothness(Smoothness::BoundedVariation)
    .with_flags(false, true, true)
    .with_value_at_zero(1.0)
    .with_known_integral(0.5)
    .with_breakpoints(|lo, hi| [1.0].into_iter().filter(|t| *t > lo && *t < hi).collect())
}

/// `(sin(πy)/(πy))²`: the Fourier transform of [`centered_triangle`].
pub fn fejer() -> ParityFunction {
    let pi = std::f64::consts::PI;
    ParityFunction::new("fejer", Parity::Even, move |y: f64| {
        let z = pi * y;
        let s = z.sin() / z;
        s * s
    })
    .with_smoothness(Smoothness::CInf)
    .with_flags(false, true, true)
    .with_value_at_zero(1.0)
    .with_known_integral(0.5)
    .with_tail_majorant(TailMajorant::new(
        move |y: f64| {
            if y <= 1.0 / pi {
                1.0
            } else {
                1.0 / (pi * pi * y * y)
            }
        },
        move |y: f64| {
            if y <= 1.0 / pi {
                1.0 / pi - y + 1.0 / pi
            } else {
                1.0 / (pi * pi * y)
            }
        },
    ))
}

/// `{x}/x` with `{x} = 0` at integers (the default convention).
pub fn fracpart_over_x() -> ParityFunction {
    ParityFunction::new("fracpart_over_x", Parity::Even, |x: f64| frac_part(x) / x)
        .with_smoothness(Smoothness::Measurable)
        .with_flags(false, false, true)
        .with_value_at_zero(1.0)
        .with_continuity(false)
        .with_breakpoints(|lo, hi| {
            let mut v = Vec::new();
            let mut n = lo.floor() + 1.0;
            while n < hi {
                if n > lo {
                    v.push(n);
                }
                n += 1.0;
            }
            v
        })
}

/// `x²/((1+x⁴)(1+ln²x))`: smooth, even, with a polynomially-log decaying
/// tail; satisfies condition (C).
pub fn poly_log_tail() -> ParityFunction {
    let f = |x: f64| {
        let l = x.ln();
        x * x / ((1.0 + x * x * x * x) * (1.0 + l * l))
    };
    let sqrt2 = std::f64::consts::SQRT_2;
    ParityFunction::new("poly_log_tail", Parity::Even, f)
        .with_smoothness(Smoothness::CInf)
        .with_flags(true, true, true)
        .with_tail_majorant(TailMajorant::new(
            move |x: f64| {
                if x <= sqrt2 {
                    0.5
                } else {
                    1.0 / (x * x)
                }
            },
            move |x: f64| {
                if x <= sqrt2 {
                    0.5 * (sqrt2 - x.max(0.0)) + 1.0 / sqrt2
                } else {
                    1.0 / x
                }
            },
        ))
        // f(1/t)/t = t/((1+t⁴)(1+ln²t)) ≤ min(0.57, 1/(t³(1+ln²t)));
        // the ln² factor keeps truncation indices desk-sized
        .with_inverted_tail_majorant(TailMajorant::new(
            |t: f64| {
                if t <= std::f64::consts::E {
                    0.57
                } else {
                    let l = t.ln();
                    1.0 / (t * t * t * (1.0 + l * l))
                }
            },
            |t: f64| {
                let e = std::f64::consts::E;
                if t <= e {
                    0.57 * (e - t.max(0.0)) + 0.25 / (e * e)
                } else {
                    // ∫_T dt/(t³(1+ln²t)) ≤ 1/(2T²(1+ln²T)) for T ≥ e
                    let l = t.ln();
                    0.5 / (t * t * (1.0 + l * l))
                }
            },
        ))
}

/// Construct a builtin by name. Names: `gaussian`, `bump` (b, B),
/// `indicator` (b, B), `triangle` (b, B), `fracpart_over_x`,
/// `poly_log_tail`.
pub fn builtin_function(name: &str, params: &[f64]) -> Result<ParityFunction> {
    let need2 = |params: &[f64]| -> Result<(f64, f64)> {
        if params.len() != 2 {
            return Err(Error::BadParameters {
                name: name.to_string(),
                reason: format!("expected 2 parameters, got {}", params.len()),
            });
        }
        let (b, big_b) = (params[0], params[1]);
        if !(b > 0.0 && b < big_b) {
            return Err(Error::BadParameters {
                name: name.to_string(),
                reason: format!("need 0 < b < B, got b={b}, B={big_b}"),
            });
        }
        Ok((b, big_b))
    };
    let need0 = |params: &[f64]| -> Result<()> {
        if params.is_empty() {
            Ok(())
        } else {
            Err(Error::BadParameters {
                name: name.to_string(),
                reason: "takes no parameters".into(),
            })
        }
    };
    match name {
        "gaussian" => {
            need0(params)?;
            Ok(gaussian())
        }
        "bump" => {
            let (b, big_b) = need2(params)?;
            Ok(bump(b, big_b))
        }
        "indicator" => {
            let (b, big_b) = need2(params)?;
            Ok(indicator(b, big_b))
        }
        "triangle" => {
            let (b, big_b) = need2(params)?;
            Ok(triangle(b, big_b))
        }
        "fracpart_over_x" => {
            need0(params)?;
            Ok(fracpart_over_x())
        }
        "poly_log_tail" => {
            need0(params)?;
            Ok(poly_log_tail())
        }
        _ => Err(Error::UnknownFunction(name.to_string())),
    }
}

/// Parse `"name"` or `"name:p1,p2"` into a builtin.
pub fn parse_function_spec(spec: &str) -> Result<ParityFunction> {
    let spec = spec.trim();
    let (name, params) = match spec.split_once(':') {
        Some((n, p)) => {
            let params: std::result::Result<Vec<f64>, _> =
                p.split(',').map(|t| t.trim().parse::<f64>()).collect();
            (
                n.trim(),
                params.map_err(|_| Error::BadFunctionSpec(spec.to_string()))?,
            )
        }
        None => (spec, Vec::new()),
    };
    if name.is_empty() {
        return Err(Error::BadFunctionSpec(spec.to_string()));
    }
    builtin_function(name, &params)
}

/// The builtin names accepted by [`builtin_function`], with default
/// parameters, for harnesses that sweep the whole set.
pub fn builtin_set() -> Vec<ParityFunction> {
    vec![
        gaussian(),
        bump(1.0, 2.0),
        indicator(1.0, 2.0),
        triangle(1.0, 2.0),
        fracpart_over_x(),
        poly_log_tail(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_at_one() {
        let f = gaussian();
        assert!((f.eval(1.0) - (-std::f64::consts::PI).exp()).abs() < 1e-16);
        assert!(f.is_l2());
    }

    #[test]
    fn bump_support_and_peak() {
        let f = bump(1.0, 2.0);
        assert_eq!(f.eval(0.5), 0.0);
        assert_eq!(f.eval(2.5), 0.0);
        assert_eq!(f.support(), Some((1.0, 2.0)));
        assert!((f.eval(1.5) - 1.0).abs() < 1e-15);
        assert!(f.eval(1.2) > 0.0 && f.eval(1.2) < 1.0);
    }

    #[test]
    fn fracpart_by_hand() {
        let f = fracpart_over_x();
        assert!((f.eval(1.5) - (1.0 / 3.0)).abs() < 1e-15);
        // right-continuous at integers: {2} = 0
        assert_eq!(f.eval(2.0), 0.0);
    }

    #[test]
    fn builtin_errors() {
        assert!(matches!(
            builtin_function("nope", &[]),
            Err(Error::UnknownFunction(_))
        ));
        assert!(matches!(
            builtin_function("bump", &[2.0, 1.0]),
            Err(Error::BadParameters { .. })
        ));
        assert!(matches!(
            builtin_function("bump", &[1.0]),
            Err(Error::BadParameters { .. })
        ));
    }

    #[test]
    fn spec_parsing() {
        let f = parse_function_spec("bump:1,2").unwrap();
        assert_eq!(f.support(), Some((1.0, 2.0)));
        let g = parse_function_spec("gaussian").unwrap();
        assert_eq!(g.name(), "gaussian");
        assert!(parse_function_spec("bump:1;2").is_err());
        assert!(parse_function_spec(":1,2").is_err());
    }

    #[test]
    fn condition_c_sandwich_for_bump() {
        // 1 ≤ 1 + 1/x ≤ 2 on [1,2], so the (C)-norm sits between ∫f and 2∫f.
        let f = bump(1.0, 2.0);
        let mass = f.integral().unwrap();
        let c = condition_c_norm(&f, 1e-10).unwrap();
        assert!(c >= mass && c <= 2.0 * mass, "c={c}, mass={mass}");
    }

    #[test]
    fn condition_c_divergence_fracpart() {
        // {x}/x is not L¹ near ∞.
        let f = fracpart_over_x();
        assert!(matches!(
            condition_c_norm(&f, 1e-8),
            Err(Error::Divergent { .. })
        ));
    }

    #[test]
    fn condition_c_divergence_gaussian() {
        // f(0) = 1 ≠ 0 forces ∫_0 |f|/x to diverge logarithmically.
        let f = gaussian();
        assert!(matches!(
            condition_c_norm(&f, 1e-8),
            Err(Error::Divergent { .. })
        ));
    }

    #[test]
    fn condition_c_finite_poly_log_tail() {
        let f = poly_log_tail();
        let c = condition_c_norm(&f, 1e-8).unwrap();
        assert!(c.is_finite() && c > 0.0);
    }

    #[test]
    fn parity_extension_round_trip() {
        for f in [bump(1.0, 2.0), gaussian(), x_gaussian()] {
            for x in [0.3, 1.1, 1.7, 2.9] {
                let v = f.eval_signed(-x);
                let expect = match f.parity() {
                    Parity::Even => f.eval(x),
                    Parity::Odd => -f.eval(x),
                };
                assert_eq!(v, expect);
            }
        }
    }

    #[test]
    fn inverted_involution() {
        let f = bump(1.0, 2.0);
        let inv = f.inverted();
        assert_eq!(inv.support(), Some((0.5, 1.0)));
        // If(x) = f(1/x)/x
        assert!((inv.eval(0.8) - f.eval(1.25) / 0.8).abs() < 1e-15);
        let back = inv.inverted();
        for x in [1.1, 1.5, 1.9] {
            assert!((back.eval(x) - f.eval(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn triangle_inverted_integral_closed_form() {
        let f = triangle(1.0, 2.0);
        let known = f.inverted_integral().unwrap();
        // independent quadrature of ∫ f(x)/x dx
        let q = quad::integrate_adaptive(|x| f.eval(x) / x, 1.0, 2.0, 1e-12)
            .unwrap()
            .value;
        assert!((known - q).abs() < 1e-9, "known={known}, quad={q}");
    }

    #[test]
    fn known_integrals_match_quadrature() {
        for f in [indicator(1.0, 2.0), triangle(1.0, 2.0), gaussian()] {
            let known = f.integral().unwrap();
            let (lo, hi) = f.support().unwrap_or((0.0, 6.0));
            let q = quad::integrate_adaptive(|x| f.eval(x), lo, hi, 1e-12)
                .unwrap()
                .value;
            assert!((known - q).abs() < 1e-9, "{}: {known} vs {q}", f.name());
        }
    }

    #[test]
    fn xsq_gaussian_transform_consistency() {
        // f̃(0) must be 2∫f.
        assert!((xsq_gaussian_transform(0.0) - 2.0).abs() < 1e-15);
    }
}
