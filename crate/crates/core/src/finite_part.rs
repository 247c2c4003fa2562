//! Hadamard finite parts of endpoint-divergent Laplace integrals and the
//! gamma-normalized form
//!
//! ```text
//! g(α) = (1/Γ(α)) FP ∫_0^{∞ e^{iθ}} p^(α-1) e^{-py} ψ(p) dp,
//! ```
//!
//! which is entire in `α`. Near the endpoint the integrand is replaced by its
//! Maclaurin series (with `e^{-py}` folded in by a Cauchy product), integrated
//! term by term; the remainder of the ray is ordinary quadrature.
//!
//! The term-by-term weights are written in the entire form
//! `(α)_n / Γ(α+n+1) = 1/((α+n) Γ(α))`, so poles of the finite part cancel
//! against the zeros of `1/Γ(α)` exactly and `α = -k` needs no special case.

use num_complex::Complex64;

use crate::error::{PcfError, Result};
use crate::gamma::{distance_to_nonpositive_integer, pochhammer, recip_gamma};
use crate::quadrature::{
    cauchy_product, check_ray, decay_rate, ray_power, ray_segment, tail_radius, tanh_sinh, Cofactor, ExpDecay,
    IntegrandSpec,
};
use crate::types::{EvalConfig, EvalResult, PathFlag, PathFlags};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Hard cap on the number of endpoint Taylor terms.
pub const MAX_SERIES_TERMS: usize = 150;
/// Distance to a pole of Γ below which values are flagged as limits.
pub const LIMIT_THRESHOLD: f64 = 1e-3;
const POLE_EPS: f64 = 1e-12;
/// Extra Taylor terms for the remainder near the singular endpoint.
const TAIL_TERMS: usize = 30;

/// Maclaurin data of an analytic cofactor.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    pub coefficients: Vec<Complex64>,
    pub radius: f64,
}

impl TaylorSeries {
    pub fn from_cofactor(psi: &dyn Cofactor, order: usize) -> Self {
        Self { coefficients: psi.taylor(order), radius: psi.radius() }
    }

    /// Partial sum at `p` (Horner).
    pub fn eval(&self, p: Complex64) -> Complex64 {
        self.coefficients.iter().rev().fold(ZERO, |acc, c| acc * p + c)
    }
}

/// `w_n = (α)_n / Γ(α+n+1)` for `n = 0..=m`.
///
/// The forward ratio `w_n = w_{n-1} (α+n-1)/(α+n)` is used except where
/// `α+n` is near zero; there the product form is evaluated directly.
pub fn normalized_weights(alpha: Complex64, m: usize) -> Vec<Complex64> {
    let mut w = Vec::with_capacity(m + 1);
    w.push(recip_gamma(alpha + 1.0));
    for n in 1..=m {
        let denom = alpha + n as f64;
        let next = if denom.norm() >= 0.5 {
            w[n - 1] * (alpha + (n - 1) as f64) / denom
        } else {
            pochhammer(alpha, n) * recip_gamma(alpha + (n + 1) as f64)
        };
        w.push(next);
    }
    w
}

/// `R^(n+α) (α)_n / Γ(α+n+1)`, the finite-part moment of `p^n` over `[0,R]`
/// divided by `Γ(α)`. Entire in `α`.
pub fn moment_coefficient(alpha: Complex64, n: usize, r: f64) -> Complex64 {
    let w = normalized_weights(alpha, n)[n];
    if w == ZERO {
        return ZERO;
    }
    w * ((alpha + n as f64) * r.ln()).exp()
}

fn check_not_pole(alpha: Complex64) -> Result<()> {
    if distance_to_nonpositive_integer(alpha) < POLE_EPS {
        Err(PcfError::FinitePartPole(alpha))
    } else {
        Ok(())
    }
}

/// `FP ∫_0^R t^(α-1) φ(t) dt` for real `R`: the first `N+1` Maclaurin terms
/// integrated exactly plus quadrature of the subtracted remainder.
pub fn finite_part_segment(alpha: Complex64, phi: &dyn Cofactor, r: f64, cfg: &EvalConfig) -> Result<Complex64> {
    cfg.validate()?;
    check_not_pole(alpha)?;
    if !(r > 0.0) || r > 0.5 * phi.radius() * (1.0 + 1e-12) {
        return Err(PcfError::Domain(format!("split radius {r} exceeds half the radius of analyticity")));
    }
    // Enough terms that the remainder integrand vanishes at t = 0.
    let need = (-alpha.re).ceil().max(0.0) as usize + 1;
    let order = cfg.series_order.max(need);
    let series = TaylorSeries::from_cofactor(phi, order);
    let ln_r = r.ln();
    let mut head = ZERO;
    let mut magnitude = 0.0;
    for (n, c) in series.coefficients.iter().enumerate() {
        let e = alpha + n as f64;
        let t = c * (e * ln_r).exp() / e;
        head += t;
        magnitude += t.norm();
    }
    // Near t = 0 the remainder comes from the next Taylor coefficients with
    // t^(α+order) factored out; further out, by subtraction.
    let all = phi.taylor(order + TAIL_TERMS);
    let tail = &all[order + 1..];
    let near = phi.radius().min(1.0) / 8.0;
    let am1 = alpha - 1.0;
    let shifted = alpha + order as f64;
    let rem = tanh_sinh(
        |x, dl, _dr| {
            let t = x.max(dl);
            if t <= near {
                let mut acc = ZERO;
                for c in tail.iter().rev() {
                    acc = acc * t + c;
                }
                return (shifted * t.ln()).exp() * acc;
            }
            let p = Complex64::new(t, 0.0);
            (am1 * t.ln()).exp() * (phi.eval(p) - series.eval(p))
        },
        r,
        cfg.rel_tol,
        1e-3 * cfg.rel_tol * magnitude.max(cfg.abs_tol),
        cfg.max_quad_level,
    )?;
    Ok(head + rem.value)
}

/// Endpoint series of `e^{-py} ψ(p)` along `p = P t`, `t ∈ [0,1]`, i.e. the
/// coefficients `b_n = [e^{-py} ψ]_n P^n`.
fn scaled_endpoint_series(psi: &dyn Cofactor, y: Complex64, big_p: Complex64, m: usize) -> Vec<Complex64> {
    let exp_series = ExpDecay { lambda: y }.taylor(m);
    let psi_series = psi.taylor(m);
    let mut pk = Complex64::new(1.0, 0.0);
    let mut scaled_exp = Vec::with_capacity(m + 1);
    let mut scaled_psi = Vec::with_capacity(m + 1);
    for k in 0..=m {
        scaled_exp.push(exp_series[k] * pk);
        scaled_psi.push(psi_series[k] * pk);
        pk *= big_p;
    }
    cauchy_product(&scaled_psi, &scaled_exp)
}

/// Split radius for a given cofactor and Laplace variable.
pub fn split_radius(psi: &dyn Cofactor, y: Complex64, cfg: &EvalConfig) -> f64 {
    let mut r = cfg.split_radius.min(0.5 * psi.radius());
    if y.norm() > 0.0 {
        r = r.min(1.0 / y.norm());
    }
    r
}

struct EndpointSum {
    value: Complex64,
    magnitude: f64,
    tail_bound: f64,
}

/// Sums `Σ b_n P^α weight_n` with adaptively chosen length.
fn endpoint_sum<W>(
    psi: &dyn Cofactor,
    y: Complex64,
    big_p: Complex64,
    p_alpha: Complex64,
    weights: W,
    cfg: &EvalConfig,
) -> Result<EndpointSum>
where
    W: Fn(usize) -> Vec<Complex64>,
{
    let mut m = cfg.series_order.clamp(60, MAX_SERIES_TERMS);
    loop {
        let b = scaled_endpoint_series(psi, y, big_p, m);
        let w = weights(m);
        let mut value = ZERO;
        let mut magnitude = 0.0;
        let mut last = [0.0f64; 3];
        for n in 0..=m {
            let t = b[n] * p_alpha * w[n];
            value += t;
            magnitude += t.norm();
            last = [last[1], last[2], t.norm()];
        }
        let tail_bound = 2.0 * last.iter().cloned().fold(0.0, f64::max);
        if tail_bound <= 1e-3 * cfg.rel_tol * magnitude || magnitude == 0.0 {
            return Ok(EndpointSum { value, magnitude, tail_bound });
        }
        if m >= MAX_SERIES_TERMS {
            return Err(PcfError::SeriesTruncation { bound: tail_bound / value.norm().max(1e-300), tol: cfg.rel_tol });
        }
        m = (2 * m).min(MAX_SERIES_TERMS);
    }
}

/// Ordinary quadrature of the ray beyond the split radius.
fn ray_tail(
    alpha: Complex64,
    psi: &dyn Cofactor,
    y: Complex64,
    theta: f64,
    r: f64,
    cfg: &EvalConfig,
) -> Result<(Complex64, f64)> {
    let spec = IntegrandSpec::new(alpha, psi);
    let dir = Complex64::from_polar(1.0, theta);
    let f_at = |t: f64| {
        let p = dir * t;
        ray_power(alpha - 1.0, t, theta) * psi.eval(p) * (-p * y).exp()
    };
    let scale = f_at(r).norm() * r.max(1.0 / decay_rate(y, theta)).min(1e3);
    let tail_tol = 1e-3 * cfg.rel_tol;
    let upper = tail_radius(&spec, y, theta, r, scale, tail_tol);
    let q = ray_segment(&spec, y, theta, r, upper, cfg.rel_tol, cfg.max_quad_level)?;
    let dropped = f_at(upper).norm() * 2.0 / decay_rate(y, theta);
    Ok((q.value, q.abs_err + dropped))
}

fn path_for(alpha: Complex64) -> PathFlags {
    if distance_to_nonpositive_integer(alpha) < LIMIT_THRESHOLD {
        PathFlags::of(PathFlag::Limit)
    } else if alpha.re > 0.0 {
        PathFlags::of(PathFlag::Direct)
    } else {
        PathFlags::of(PathFlag::FinitePart)
    }
}

/// `g(α) = (1/Γ(α)) FP ∫_0^{∞e^{iθ}} p^(α-1) e^{-py} ψ(p) dp`, entire in `α`.
///
/// `arg p = θ` exactly on the ray; `ψ` is evaluated with its own branch
/// convention.
pub fn gamma_normalized_fp(
    alpha: Complex64,
    psi: &dyn Cofactor,
    y: Complex64,
    theta: f64,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    cfg.validate()?;
    check_ray(psi, y, theta)?;
    let r = split_radius(psi, y, cfg);
    let big_p = Complex64::from_polar(r, theta);
    let p_alpha = (alpha * Complex64::new(r.ln(), theta)).exp();
    let near = endpoint_sum(psi, y, big_p, p_alpha, |m| normalized_weights(alpha, m), cfg)?;
    let rg = recip_gamma(alpha);
    let (far, far_err) = if rg == ZERO { (ZERO, 0.0) } else { ray_tail(alpha, psi, y, theta, r, cfg)? };
    let value = near.value + rg * far;
    let err = near.tail_bound + rg.norm() * far_err + 8.0 * f64::EPSILON * (near.magnitude + (rg * far).norm());
    Ok(EvalResult::new(value, err, path_for(alpha)))
}

/// The un-normalized finite part `FP ∫_0^{∞e^{iθ}} p^(α-1) e^{-py} ψ(p) dp`,
/// evaluated with the direct `1/(n+α)` moments. Fails at the poles.
pub fn finite_part_ray(
    alpha: Complex64,
    psi: &dyn Cofactor,
    y: Complex64,
    theta: f64,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    cfg.validate()?;
    check_not_pole(alpha)?;
    check_ray(psi, y, theta)?;
    let r = split_radius(psi, y, cfg);
    let big_p = Complex64::from_polar(r, theta);
    let p_alpha = (alpha * Complex64::new(r.ln(), theta)).exp();
    let near = endpoint_sum(
        psi,
        y,
        big_p,
        p_alpha,
        |m| (0..=m).map(|n| (alpha + n as f64).inv()).collect(),
        cfg,
    )?;
    let (far, far_err) = ray_tail(alpha, psi, y, theta, r, cfg)?;
    let value = near.value + far;
    let err = near.tail_bound + far_err + 8.0 * f64::EPSILON * (near.magnitude + far.norm());
    let path = if alpha.re > 0.0 { PathFlags::of(PathFlag::Direct) } else { PathFlags::of(PathFlag::FinitePart) };
    Ok(EvalResult::new(value, err, path))
}

/// Maclaurin coefficient `k!·[e^{-py}ψ]_k = (d/dp)^k (e^{-py}ψ)(0)`.
pub fn endpoint_derivative(psi: &dyn Cofactor, y: Complex64, k: usize) -> Complex64 {
    let series = cauchy_product(&psi.taylor(k), &ExpDecay { lambda: y }.taylor(k));
    let fact: f64 = (1..=k).map(|j| j as f64).product();
    series[k] * fact
}
