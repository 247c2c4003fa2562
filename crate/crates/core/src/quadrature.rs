//! Laplace-type integrals along rays and segments with algebraic endpoint
//! singularities.
//!
//! All quadrature is double-exponential (tanh-sinh). The integrand callback
//! receives the node together with its distances to both endpoints, computed
//! without cancellation, so factors like `p^(α-1)` stay accurate right up to
//! the endpoint.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{PcfError, Result};
use crate::types::{EvalConfig, EvalResult, PathFlag, PathFlags};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest abscissa parameter; beyond it the node distances underflow.
const U_MAX: f64 = 6.5;
/// Coarsest level whose differences are trusted for the stopping rule.
const MIN_LEVEL: u32 = 3;
/// Angular clearance below which a branch point counts as lying on the ray.
const SINGULAR_RAY_EPS: f64 = 1e-8;

/// Result of a single tanh-sinh integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: Complex64,
    pub abs_err: f64,
    pub levels: u32,
}

/// Tanh-sinh quadrature of `f` over `[0, length]`.
///
/// `f(x, dl, dr)` is called with the node `x` and its distances `dl = x`,
/// `dr = length - x` to the two endpoints.
pub fn tanh_sinh<F>(f: F, length: f64, rel_tol: f64, abs_tol: f64, max_level: u32) -> Result<Quadrature>
where
    F: Fn(f64, f64, f64) -> Complex64,
{
    if !(length > 0.0 && length.is_finite()) {
        return Err(PcfError::Domain(format!("invalid integration length {length}")));
    }
    let half = 0.5 * length;
    // Node at parameter u; returns the weighted value or None if the node
    // collapsed onto an endpoint.
    let node = |u: f64| -> Option<Complex64> {
        let s = FRAC_PI_2 * u.sinh();
        let dl = length / (1.0 + (-2.0 * s).exp());
        let dr = length / (1.0 + (2.0 * s).exp());
        if dl <= 0.0 || dr <= 0.0 || !dl.is_finite() {
            return None;
        }
        let x = if s <= 0.0 { dl } else { length - dr };
        let w = half * FRAC_PI_2 * u.cosh() / s.cosh().powi(2);
        if w == 0.0 {
            return None;
        }
        Some(f(x, dl, dr) * w)
    };

    let center = node(0.0).ok_or_else(|| PcfError::Domain("degenerate interval".into()))?;
    if !(center.re.is_finite() && center.im.is_finite()) {
        return Err(PcfError::Domain("integrand not finite at interval midpoint".into()));
    }

    // Per-side truncation, fixed on a step-1/8 scan so every level sums the
    // same range.
    let scan = 0.125;
    let side_limit = |sign: f64| -> Result<f64> {
        let mut peak = center.norm();
        let mut small_run = 0;
        let mut u = scan;
        let mut last = 0.0;
        while u <= U_MAX {
            match node(sign * u) {
                None => break,
                Some(v) => {
                    if !(v.re.is_finite() && v.im.is_finite()) {
                        return Err(PcfError::Domain("integrand not finite at a quadrature node".into()));
                    }
                    let m = v.norm();
                    peak = peak.max(m);
                    last = u;
                    if m <= 1e-20 * peak {
                        small_run += 1;
                        if small_run >= 3 {
                            break;
                        }
                    } else {
                        small_run = 0;
                    }
                }
            }
            u += scan;
        }
        Ok(last)
    };
    let u_left = side_limit(-1.0)?;
    let u_right = side_limit(1.0)?;

    let sum_level = |step: f64, odd_only: bool| -> Complex64 {
        let mut acc = ZERO;
        let stride = if odd_only { 2 } else { 1 };
        let mut j: i64 = 1;
        loop {
            let u = j as f64 * step;
            if u > u_right && u > u_left {
                break;
            }
            if u <= u_right {
                if let Some(v) = node(u) {
                    acc += v;
                }
            }
            if u <= u_left {
                if let Some(v) = node(-u) {
                    acc += v;
                }
            }
            j += stride;
        }
        acc
    };

    let mut step = 1.0;
    let mut estimate = (center + sum_level(step, false)) * step;
    let mut last_diff = f64::INFINITY;
    for level in 1..=max_level {
        step *= 0.5;
        let next = estimate * 0.5 + sum_level(step, true) * step;
        let diff = (next - estimate).norm();
        estimate = next;
        last_diff = diff;
        let target = abs_tol.max(rel_tol * estimate.norm());
        if level >= MIN_LEVEL && diff <= target {
            return Ok(Quadrature { value: estimate, abs_err: diff, levels: level });
        }
    }
    Err(PcfError::QuadratureNotConverged { estimate: last_diff, levels: max_level })
}

/// An analytic cofactor `ψ(p)` of a Laplace integrand, known both pointwise
/// and through its Maclaurin coefficients.
pub trait Cofactor: Sync {
    fn eval(&self, p: Complex64) -> Complex64;
    /// Maclaurin coefficients `ψ_0, ..., ψ_n`.
    fn taylor(&self, n: usize) -> Vec<Complex64>;
    /// Radius of analyticity about `p = 0`.
    fn radius(&self) -> f64;
    /// Branch points of the cofactor.
    fn branch_points(&self) -> Vec<Complex64> {
        Vec::new()
    }
}

/// `ψ ≡ 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Unit;

impl Cofactor for Unit {
    fn eval(&self, _p: Complex64) -> Complex64 {
        ONE
    }
    fn taylor(&self, n: usize) -> Vec<Complex64> {
        let mut c = vec![ZERO; n + 1];
        c[0] = ONE;
        c
    }
    fn radius(&self) -> f64 {
        f64::INFINITY
    }
}

/// `(1 + c p)^β`, principal branch plus `winding` extra turns of the
/// argument of `1 + c p`.
#[derive(Debug, Clone, Copy)]
pub struct Binomial {
    pub c: Complex64,
    pub beta: Complex64,
    pub winding: i32,
}

impl Binomial {
    pub fn new(c: Complex64, beta: Complex64) -> Self {
        Self { c, beta, winding: 0 }
    }

    fn sheet_factor(&self) -> Complex64 {
        if self.winding == 0 {
            ONE
        } else {
            (self.beta * Complex64::new(0.0, 2.0 * PI * self.winding as f64)).exp()
        }
    }
}

impl Cofactor for Binomial {
    fn eval(&self, p: Complex64) -> Complex64 {
        let w = ONE + self.c * p;
        if w == ZERO {
            return if self.beta.re > 0.0 { ZERO } else { Complex64::new(f64::INFINITY, 0.0) };
        }
        (self.beta * w.ln()).exp() * self.sheet_factor()
    }

    fn taylor(&self, n: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(n + 1);
        let mut t = self.sheet_factor();
        for k in 0..=n {
            out.push(t);
            t = t * self.c * (self.beta - k as f64) / (k as f64 + 1.0);
        }
        out
    }

    fn radius(&self) -> f64 {
        if self.c == ZERO {
            f64::INFINITY
        } else {
            1.0 / self.c.norm()
        }
    }

    fn branch_points(&self) -> Vec<Complex64> {
        if self.c == ZERO {
            Vec::new()
        } else {
            vec![-self.c.inv()]
        }
    }
}

/// `e^{-λ p}`.
#[derive(Debug, Clone, Copy)]
pub struct ExpDecay {
    pub lambda: Complex64,
}

impl Cofactor for ExpDecay {
    fn eval(&self, p: Complex64) -> Complex64 {
        (-self.lambda * p).exp()
    }
    fn taylor(&self, n: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(n + 1);
        let mut t = ONE;
        for k in 0..=n {
            out.push(t);
            t = t * (-self.lambda) / (k as f64 + 1.0);
        }
        out
    }
    fn radius(&self) -> f64 {
        f64::INFINITY
    }
}

/// A finite polynomial `Σ c_k p^k`.
#[derive(Debug, Clone)]
pub struct Polynomial {
    pub coeffs: Vec<Complex64>,
}

impl Cofactor for Polynomial {
    fn eval(&self, p: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * p + c)
    }
    fn taylor(&self, n: usize) -> Vec<Complex64> {
        (0..=n).map(|k| self.coeffs.get(k).copied().unwrap_or(ZERO)).collect()
    }
    fn radius(&self) -> f64 {
        f64::INFINITY
    }
}

/// Product of two cofactors.
pub struct Product<'a> {
    pub left: &'a dyn Cofactor,
    pub right: &'a dyn Cofactor,
}

impl Cofactor for Product<'_> {
    fn eval(&self, p: Complex64) -> Complex64 {
        self.left.eval(p) * self.right.eval(p)
    }
    fn taylor(&self, n: usize) -> Vec<Complex64> {
        cauchy_product(&self.left.taylor(n), &self.right.taylor(n))
    }
    fn radius(&self) -> f64 {
        self.left.radius().min(self.right.radius())
    }
    fn branch_points(&self) -> Vec<Complex64> {
        let mut b = self.left.branch_points();
        b.extend(self.right.branch_points());
        b
    }
}

/// A cofactor built from closures, for ad hoc integrands.
pub struct FnCofactor<F, T>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    T: Fn(usize) -> Vec<Complex64> + Sync,
{
    pub f: F,
    pub coefficients: T,
    pub radius: f64,
}

impl<F, T> Cofactor for FnCofactor<F, T>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    T: Fn(usize) -> Vec<Complex64> + Sync,
{
    fn eval(&self, p: Complex64) -> Complex64 {
        (self.f)(p)
    }
    fn taylor(&self, n: usize) -> Vec<Complex64> {
        (self.coefficients)(n)
    }
    fn radius(&self) -> f64 {
        self.radius
    }
}

/// First `min(len)` coefficients of the product of two power series.
pub fn cauchy_product(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|k| (0..=k).fold(ZERO, |acc, j| acc + a[j] * b[k - j]))
        .collect()
}

/// Endpoint-singular Laplace integrand `p^(α-1) ψ(p)`.
#[derive(Clone, Copy)]
pub struct IntegrandSpec<'a> {
    pub alpha: Complex64,
    pub psi: &'a dyn Cofactor,
}

impl<'a> IntegrandSpec<'a> {
    pub fn new(alpha: Complex64, psi: &'a dyn Cofactor) -> Self {
        Self { alpha, psi }
    }
}

/// A ray `e^{iθ} [0, ∞)`; `truncation` is filled in by the integrator when
/// left at `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayPath {
    pub theta: f64,
    pub truncation: Option<f64>,
}

impl RayPath {
    pub fn new(theta: f64) -> Self {
        Self { theta, truncation: None }
    }

    pub fn direction(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }
}

/// Decay rate `Re(y e^{iθ})` of `e^{-py}` along the ray.
pub fn decay_rate(y: Complex64, theta: f64) -> f64 {
    (y * Complex64::from_polar(1.0, theta)).re
}

/// Reduce an angle to `(-π, π]`.
pub fn wrap_angle(t: f64) -> f64 {
    let mut r = t % (2.0 * PI);
    if r <= -PI {
        r += 2.0 * PI;
    } else if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// Checks the ray against the cofactor's branch points.
pub fn check_ray(psi: &dyn Cofactor, y: Complex64, theta: f64) -> Result<()> {
    if !(decay_rate(y, theta) > 0.0) {
        return Err(PcfError::NonconvergentRay { theta, y });
    }
    for b in psi.branch_points() {
        if wrap_angle(b.arg() - theta).abs() < SINGULAR_RAY_EPS {
            return Err(PcfError::SingularRay { theta, branch: b.arg() });
        }
    }
    Ok(())
}

/// Radii along the ray at which a branch point comes closest; splitting the
/// quadrature there keeps near-singularities at subinterval endpoints.
pub(crate) fn ray_breakpoints(psi: &dyn Cofactor, theta: f64, from: f64, to: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = psi
        .branch_points()
        .into_iter()
        .filter_map(|b| {
            let along = (b * Complex64::from_polar(1.0, -theta)).re;
            (along > from * 1.01 && along < to * 0.99).then_some(along)
        })
        .collect();
    pts.sort_by(f64::total_cmp);
    pts
}

/// `p^(α-1)` for `p = r e^{iθ}` with `arg p = θ` exactly.
pub(crate) fn ray_power(alpha_minus_one: Complex64, r: f64, theta: f64) -> Complex64 {
    (alpha_minus_one * Complex64::new(r.ln(), theta)).exp()
}

/// Integral of `p^(α-1) ψ(p) e^{-py}` over `r ∈ [from, to]` along the ray,
/// split at branch-point projections. Includes the Jacobian `e^{iθ}`.
pub(crate) fn ray_segment(
    spec: &IntegrandSpec<'_>,
    y: Complex64,
    theta: f64,
    from: f64,
    to: f64,
    rel_tol: f64,
    max_level: u32,
) -> Result<Quadrature> {
    let dir = Complex64::from_polar(1.0, theta);
    let am1 = spec.alpha - 1.0;
    let mut cuts = vec![from];
    cuts.extend(ray_breakpoints(spec.psi, theta, from, to));
    cuts.push(to);
    let mut total = Quadrature { value: ZERO, abs_err: 0.0, levels: 0 };
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let q = tanh_sinh(
            |_x, dl, dr| {
                // Measure from the nearer endpoint to keep `r` accurate.
                let r = if dl <= dr { lo + dl } else { hi - dr };
                let p = dir * r;
                ray_power(am1, r, theta) * spec.psi.eval(p) * (-p * y).exp()
            },
            hi - lo,
            rel_tol,
            0.0,
            max_level,
        )?;
        total.value += q.value;
        total.abs_err += q.abs_err;
        total.levels = total.levels.max(q.levels);
    }
    total.value *= dir;
    Ok(total)
}

/// Upper radius beyond which `|p^(α-1) ψ e^{-py}|` is negligible.
pub(crate) fn tail_radius(spec: &IntegrandSpec<'_>, y: Complex64, theta: f64, start: f64, scale: f64, tol: f64) -> f64 {
    let kappa = decay_rate(y, theta);
    let dir = Complex64::from_polar(1.0, theta);
    let mag = |r: f64| -> f64 {
        let p = dir * r;
        (ray_power(spec.alpha - 1.0, r, theta) * spec.psi.eval(p) * (-p * y).exp()).norm()
    };
    let growth = spec.alpha.re.abs() + 2.0;
    let mut t = start + (45.0 + 4.0 * growth) / kappa;
    // Extend until the tail bound |f(T)| * 2/κ is below tolerance.
    for _ in 0..60 {
        let est = mag(t) * 2.0 / kappa;
        if est <= tol * scale.max(1e-300) || est == 0.0 {
            break;
        }
        t = start + 1.5 * (t - start);
    }
    t
}

/// Convergent Laplace integral `∫_0^{∞e^{iθ}} p^(α-1) ψ(p) e^{-py} dp`.
pub fn laplace_ray(spec: &IntegrandSpec<'_>, y: Complex64, path: RayPath, cfg: &EvalConfig) -> Result<EvalResult> {
    cfg.validate()?;
    if !(spec.alpha.re > 0.0) {
        return Err(PcfError::DivergentEndpoint(spec.alpha));
    }
    check_ray(spec.psi, y, path.theta)?;
    let kappa = decay_rate(y, path.theta);
    let tail_tol = 1e-3 * cfg.rel_tol;
    // Rough scale Γ(Re α)/κ^Re α for the tail criterion.
    let scale = crate::gamma::gamma(Complex64::new(spec.alpha.re, 0.0))
        .map(|g| g.norm())
        .unwrap_or(1.0)
        / kappa.powf(spec.alpha.re)
        * (-path.theta * spec.alpha.im).exp();
    let r_tail = match path.truncation {
        Some(t) => t,
        None => tail_radius(spec, y, path.theta, 0.0, scale, tail_tol),
    };
    let q = ray_segment(spec, y, path.theta, 0.0, r_tail, cfg.rel_tol, cfg.max_quad_level)?;
    let tail = {
        let p = path.direction() * r_tail;
        (ray_power(spec.alpha - 1.0, r_tail, path.theta) * spec.psi.eval(p) * (-p * y).exp()).norm() * 2.0 / kappa
    };
    Ok(EvalResult::new(
        q.value,
        q.abs_err + tail + 4.0 * f64::EPSILON * q.value.norm(),
        PathFlags::of(PathFlag::Direct),
    ))
}

/// Convergent segment integral
/// `∫_{e0}^{e1} (p-e0)^(α0-1) (e1-p)^(α1-1) ψ(p) e^{-py} dp`
/// where `p - e0` and `e1 - p` both carry the argument of `e1 - e0`.
pub fn segment_singular(
    alpha0: Complex64,
    alpha1: Complex64,
    psi: &dyn Cofactor,
    y: Complex64,
    endpoints: (Complex64, Complex64),
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    cfg.validate()?;
    for a in [alpha0, alpha1] {
        if !(a.re > 0.0) {
            return Err(PcfError::DivergentEndpoint(a));
        }
    }
    let (e0, e1) = endpoints;
    let span = e1 - e0;
    let len = span.norm();
    if len == 0.0 {
        return Ok(EvalResult::new(ZERO, 0.0, PathFlags::of(PathFlag::Direct)));
    }
    let dir = span / len;
    let q = tanh_sinh(
        |_x, dl, dr| {
            let p = if dl <= dr { e0 + dir * dl } else { e1 - dir * dr };
            ((alpha0 - 1.0) * dl.ln()).exp() * ((alpha1 - 1.0) * dr.ln()).exp() * psi.eval(p) * (-p * y).exp()
        },
        len,
        cfg.rel_tol,
        0.0,
        cfg.max_quad_level,
    )?;
    // p - e0 = dir·dl and e1 - p = dir·dr, plus the Jacobian `dir`.
    let phase = Complex64::new(0.0, dir.arg());
    let factor = ((alpha0 + alpha1 - 2.0) * phase).exp() * dir;
    Ok(EvalResult::new(
        q.value * factor,
        (q.abs_err + 4.0 * f64::EPSILON * q.value.norm()) * factor.norm(),
        PathFlags::of(PathFlag::Direct),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tanh_sinh_polynomial_and_singular() {
        let q = tanh_sinh(|x, _, _| c(x * x, 0.0), 1.0, 1e-13, 0.0, 12).unwrap();
        assert!((q.value.re - 1.0 / 3.0).abs() < 1e-14);
        // ∫_0^1 x^{-1/2} dx = 2
        let q = tanh_sinh(|_, dl, _| c(dl.powf(-0.5), 0.0), 1.0, 1e-13, 0.0, 12).unwrap();
        assert!((q.value.re - 2.0).abs() < 1e-12, "{}", q.value);
    }

    #[test]
    fn laplace_ray_examples() {
        let cfg = EvalConfig::default();
        let unit = Unit;
        let r = laplace_ray(&IntegrandSpec::new(c(1.0, 0.0), &unit), c(2.0, 0.0), RayPath::new(0.0), &cfg).unwrap();
        assert!((r.value - 0.5).norm() < 1e-13);
        let r = laplace_ray(&IntegrandSpec::new(c(0.5, 0.0), &unit), c(1.0, 0.0), RayPath::new(0.0), &cfg).unwrap();
        assert!((r.value - PI.sqrt()).norm() < 1e-12);
    }

    #[test]
    fn laplace_ray_rejects_bad_rays() {
        let cfg = EvalConfig::default();
        let psi = Binomial::new(c(2.0, 0.0), c(-0.75, 0.0));
        let spec = IntegrandSpec::new(c(0.25, 0.0), &psi);
        assert!(matches!(
            laplace_ray(&spec, c(1.0, 0.0), RayPath::new(2.0), &cfg),
            Err(PcfError::NonconvergentRay { .. })
        ));
        assert!(matches!(
            laplace_ray(&spec, c(-1.0, 0.0), RayPath::new(PI), &cfg),
            Err(PcfError::SingularRay { .. })
        ));
        let spec = IntegrandSpec::new(c(-0.25, 0.0), &psi);
        assert!(matches!(
            laplace_ray(&spec, c(1.0, 0.0), RayPath::new(0.0), &cfg),
            Err(PcfError::DivergentEndpoint(_))
        ));
    }

    #[test]
    fn segment_examples() {
        let cfg = EvalConfig::default();
        let r = segment_singular(c(0.5, 0.0), c(0.5, 0.0), &Unit, c(0.0, 0.0), (c(0.0, 0.0), c(1.0, 0.0)), &cfg)
            .unwrap();
        assert!((r.value - PI).norm() < 1e-12, "{}", r.value);
        let r = segment_singular(c(1.0, 0.0), c(1.0, 0.0), &Unit, c(2.0, 0.0), (c(0.0, 0.0), c(0.5, 0.0)), &cfg)
            .unwrap();
        assert!((r.value.re - 0.316_060_279_414_278_8).abs() < 1e-13);
    }

    #[test]
    fn binomial_taylor_matches_eval() {
        let b = Binomial::new(c(2.0, 0.0), c(-0.3, 0.7));
        let t = b.taylor(60);
        let p = c(0.1, -0.07);
        let s = t.iter().rev().fold(c(0.0, 0.0), |acc, k| acc * p + k);
        assert!((s - b.eval(p)).norm() < 1e-13);
    }

    #[test]
    fn binomial_winding_changes_sheet() {
        let mut b = Binomial::new(c(1.0, 0.0), c(0.5, 0.0));
        b.winding = 1;
        assert!((b.eval(c(3.0, 0.0)) + 2.0).norm() < 1e-14);
    }
}
