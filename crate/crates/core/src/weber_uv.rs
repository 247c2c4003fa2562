//! `U(a,z)` and `V(a,z)`, solutions of `w'' - (z²/4 + a) w = 0`.
//!
//! With `y = z²`,
//!
//! ```text
//! U(a,z) = u₋(a,y) = e^{-y/4} g(a/2 + 1/4; (1+2p)^{-a/2-3/4})
//! V(a,z) = √(2/π) u₊(a,y)
//! ```
//!
//! where `g` is the gamma-normalized Laplace integral of
//! [`crate::finite_part`]. The integrand of `u₊` has a branch point at
//! `p = 1/2` on the real axis and `u₊` is the average of the integrals just
//! above and just below it. That average is evaluated as one rotated ray plus
//! an exact multiple of `u₋`, in a form that is entire in `a`.
//!
//! `Re z < 0` goes through the connection matrix; `|z| < 1/4` uses the
//! Maclaurin series of the differential equation.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{PcfError, Result};
use crate::finite_part::{finite_part_segment, gamma_normalized_fp};
use crate::gamma::{cos_pi, gamma, recip_gamma, sin_pi};
use crate::quadrature::{Binomial, ExpDecay, Product};
use crate::types::{check_finite, ConnectionCoefficients, EvalConfig, EvalResult, PathFlag, PathFlags};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Below this `|z|` the Maclaurin series replaces the Laplace integrals.
pub const SERIES_RADIUS: f64 = 0.25;
/// Closest approach of an integration ray to a branch direction.
pub const RAY_MARGIN: f64 = 0.1;
/// Preferred clearance of the `u₊` rays from the branch point on `(0, ∞)`.
const MEDIAN_RAY_GAP: f64 = FRAC_PI_4;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Exponent of the `u₋` integrand at `p = 0`: `a/2 + 1/4`.
pub fn decaying_exponent(a: Complex64) -> Complex64 {
    a * 0.5 + 0.25
}

/// Exponent of the `u₊` integrand at `q = 0`: `1/4 - a/2`.
pub fn growing_exponent(a: Complex64) -> Complex64 {
    c(0.25) - a * 0.5
}

/// `(1+2p)^{-a/2-3/4}`.
pub fn decaying_cofactor(a: Complex64) -> Binomial {
    Binomial::new(c(2.0), -a * 0.5 - 0.75)
}

/// `(1-2q)^{a/2-3/4}`, `arg(1-2q) = 0` on `(0, 1/2)`.
pub fn growing_cofactor(a: Complex64) -> Binomial {
    Binomial::new(c(-2.0), a * 0.5 - 0.75)
}

fn pow2(e: Complex64) -> Complex64 {
    (e * std::f64::consts::LN_2).exp()
}

/// `-arg y` clamped into `[lo, hi]`.
pub(crate) fn clamp_ray(arg_y: f64, lo: f64, hi: f64) -> f64 {
    (-arg_y).clamp(lo, hi)
}

/// Argument of `z²` continued from `arg z` (not reduced mod 2π).
pub fn lifted_square_arg(z: Complex64) -> f64 {
    2.0 * z.arg()
}

/// Ray for the `u₋` integral: as close to `-arg y` as the branch point at
/// `p = -1/2` allows.
pub fn decaying_ray(arg_y: f64) -> f64 {
    clamp_ray(arg_y, -(PI - RAY_MARGIN), PI - RAY_MARGIN)
}

/// Ray above (`upper`) or below the positive axis for the `u₊` integrand.
pub fn median_ray(arg_y: f64, upper: bool) -> f64 {
    let (lo, hi) = if upper { (MEDIAN_RAY_GAP, PI - RAY_MARGIN) } else { (-(PI - RAY_MARGIN), -MEDIAN_RAY_GAP) };
    let theta = clamp_ray(arg_y, lo, hi);
    if (arg_y + theta).cos() >= 0.3 {
        return theta;
    }
    let (lo, hi) = if upper { (RAY_MARGIN, PI - RAY_MARGIN) } else { (-(PI - RAY_MARGIN), -RAY_MARGIN) };
    clamp_ray(arg_y, lo, hi)
}

fn ensure_decay(arg_y: f64, theta: f64, y: Complex64) -> Result<()> {
    if (arg_y + theta).cos() <= 0.05 {
        return Err(PcfError::Domain(format!(
            "arg y = {arg_y} is outside the sector reachable by ray rotation"
        )));
    }
    if y == ZERO {
        return Err(PcfError::NonconvergentRay { theta, y });
    }
    Ok(())
}

/// `y` rebuilt on the sheet `arg_y` (only the modulus of `y` is used).
fn on_sheet(y: Complex64, arg_y: f64) -> Complex64 {
    Complex64::from_polar(y.norm(), arg_y)
}

/// `u₋(a, y)` with `arg y` taken as given (`|arg y| ≤ π` plus the ray
/// rotation margin).
pub fn u_minus_on_sheet(a: Complex64, y: Complex64, arg_y: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    let theta = decaying_ray(arg_y);
    ensure_decay(arg_y, theta, y)?;
    let y = on_sheet(y, arg_y);
    let psi = decaying_cofactor(a);
    let g = gamma_normalized_fp(decaying_exponent(a), &psi, y, theta, cfg)?;
    Ok(g.scale((-y * 0.25).exp()))
}

/// `u₋(a, y)` on the principal sheet.
pub fn u_minus(a: Complex64, y: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    u_minus_on_sheet(a, y, y.arg(), cfg)
}

/// `e^{y/4}/Γ(1/4 - a/2) ∫ e^{-qy} G(q) dq` along a ray strictly above
/// (`upper`) or below the positive axis.
pub fn half_line_integral(a: Complex64, y: Complex64, arg_y: f64, upper: bool, cfg: &EvalConfig) -> Result<EvalResult> {
    let theta = median_ray(arg_y, upper);
    half_line_integral_on_ray(a, y, arg_y, theta, cfg)
}

/// As [`half_line_integral`] on an explicit ray; the sign of `theta` selects
/// the side of the cut.
pub fn half_line_integral_on_ray(
    a: Complex64,
    y: Complex64,
    arg_y: f64,
    theta: f64,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    if theta == 0.0 || theta.abs() >= PI {
        return Err(PcfError::SingularRay { theta, branch: 0.0 });
    }
    ensure_decay(arg_y, theta, y)?;
    let y = on_sheet(y, arg_y);
    let psi = growing_cofactor(a);
    let g = gamma_normalized_fp(growing_exponent(a), &psi, y, theta, cfg)?;
    Ok(g.scale((y * 0.25).exp()))
}

/// `2^a π / (Γ(1/4-a/2) Γ(3/4-a/2))`, the entire coefficient linking the
/// one-sided integrals to the median.
fn median_correction(a: Complex64) -> Complex64 {
    let a0 = growing_exponent(a);
    pow2(a) * PI * recip_gamma(a0) * recip_gamma(a0 + 0.5)
}

/// `u₊(a, y)`, the balanced average across the branch cut at `q = 1/2`.
///
/// For `arg y ≤ 0` the upper integral is used, `u₊ = I₊ - iπ 2^a/(Γ Γ) u₋`;
/// for `arg y > 0` the lower one with the opposite sign.
pub fn u_plus_on_sheet(a: Complex64, y: Complex64, arg_y: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    let upper = arg_y <= 0.0;
    let side = half_line_integral(a, y, arg_y, upper, cfg)?;
    let um = u_minus_on_sheet(a, y, arg_y, cfg)?;
    let sign = if upper { -1.0 } else { 1.0 };
    let mut r = EvalResult::combine(c(1.0), side, I * sign * median_correction(a), um);
    r.path.insert(PathFlag::Medianized);
    Ok(r)
}

/// `u₊(a, y)` on the principal sheet.
pub fn u_plus(a: Complex64, y: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    u_plus_on_sheet(a, y, y.arg(), cfg)
}

/// `J(y) = FP ∫_0^{1/2} e^{-qy} q^{-a/2-3/4} (1-2q)^{a/2-3/4} dq`, with a
/// finite part at each endpoint (split at `q = 1/4`).
pub fn segment_integral(a: Complex64, y: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    let a0 = growing_exponent(a);
    let a1 = decaying_exponent(a);
    let quarter = 0.25;
    let near_zero = growing_cofactor(a);
    let decay = ExpDecay { lambda: y };
    let left = finite_part_segment(a0, &Product { left: &near_zero, right: &decay }, quarter, cfg)?;
    // Near q = 1/2 with t = 1/2 - q: q^{α₀-1} (1-2q)^β = 2^a t^{α₁-1} (1-2t)^{α₀-1}.
    let near_half = Binomial::new(c(-2.0), a0 - 1.0);
    let grow = ExpDecay { lambda: -y };
    let right = finite_part_segment(a1, &Product { left: &near_half, right: &grow }, quarter, cfg)?;
    let right = right * pow2(a) * (-y * 0.5).exp();
    let value = left + right;
    let err = 8.0 * cfg.rel_tol * (left.norm() + right.norm());
    let mut path = PathFlags::empty();
    path.insert(if a0.re > 0.0 && a1.re > 0.0 { PathFlag::Direct } else { PathFlag::FinitePart });
    Ok(EvalResult::new(value, err, path))
}

/// `u₊` from the finite segment `[0, 1/2]` plus a multiple of `u₋`:
/// `ũ₊ = e^{y/4} J + 2^a cos(π(a/2 - 3/4)) ũ₋`. Fails where `J` or
/// `Γ(a/2 + 1/4)` has a pole; [`u_plus`] has no such restriction.
pub fn u_plus_via_segment(a: Complex64, y: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    let a0 = growing_exponent(a);
    let a1 = decaying_exponent(a);
    let j = segment_integral(a, y, cfg)?.scale((y * 0.25).exp() * recip_gamma(a0));
    let um = u_minus(a, y, cfg)?;
    let k = pow2(a) * cos_pi(a * 0.5 - 0.75) * recip_gamma(a0) * gamma(a1)?;
    let mut r = EvalResult::combine(c(1.0), j, k, um);
    r.path.insert(PathFlag::Medianized);
    Ok(r)
}

/// `u₊` as the literal average of the two one-sided integrals, on rays
/// `±θ` with `θ ≈ π/4`.
pub fn u_plus_two_ray(a: Complex64, y: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    let phi = y.arg();
    let up = (FRAC_PI_4 - phi).clamp(0.2, PI - 0.2);
    let down = -(FRAC_PI_4 + phi).clamp(0.2, PI - 0.2);
    let i_up = half_line_integral_on_ray(a, y, phi, up, cfg)?;
    let i_down = half_line_integral_on_ray(a, y, phi, down, cfg)?;
    let mut r = EvalResult::combine(c(0.5), i_up, c(0.5), i_down);
    r.path.insert(PathFlag::Medianized);
    Ok(r)
}

/// Matrix of `(U(a,-z), V(a,-z)) = M (U(a,z), V(a,z))`.
pub fn connection_matrix_uv(a: Complex64) -> ConnectionCoefficients {
    let s = sin_pi(a);
    ConnectionCoefficients {
        m11: -s,
        m12: recip_gamma(a + 0.5) * PI,
        m21: cos_pi(a) * recip_gamma(c(0.5) - a),
        m22: s,
    }
}

/// `U(a,0), U'(a,0), V(a,0), V'(a,0)`.
pub fn initial_values(a: Complex64) -> [Complex64; 4] {
    let sqrt_pi = PI.sqrt();
    let half = a * 0.5;
    [
        pow2(-half - 0.25) * sqrt_pi * recip_gamma(half + 0.75),
        -pow2(-half + 0.25) * sqrt_pi * recip_gamma(half + 0.25),
        pow2(half + 0.25) * sin_pi(c(0.75) - half) * recip_gamma(c(0.75) - half),
        pow2(half + 0.75) * sin_pi(c(0.25) - half) * recip_gamma(c(0.25) - half),
    ]
}

/// Maclaurin series of the solution with `w(0) = w0`, `w'(0) = w1`.
pub fn maclaurin(a: Complex64, z: Complex64, w0: Complex64, w1: Complex64) -> EvalResult {
    // (n+2)(n+1) c_{n+2} = a c_n + c_{n-2}/4
    let mut coeffs: Vec<Complex64> = vec![w0, w1];
    let mut sum = w0 + w1 * z;
    let mut magnitude = sum.norm().max(w0.norm());
    let mut zn = z;
    let mut small = 0;
    for n in 0..400usize {
        let prev = if n >= 2 { coeffs[n - 2] * 0.25 } else { ZERO };
        let next = (a * coeffs[n] + prev) / (((n + 2) * (n + 1)) as f64);
        coeffs.push(next);
        zn *= z;
        let term = next * zn;
        sum += term;
        magnitude += term.norm();
        if term.norm() <= 1e-18 * sum.norm().max(1e-300) {
            small += 1;
            if small >= 4 {
                break;
            }
        } else {
            small = 0;
        }
    }
    EvalResult::new(sum, 4.0 * f64::EPSILON * magnitude, PathFlags::of(PathFlag::Series))
}

/// `U(a, z)` for all complex `a`, `z`.
pub fn u(a: Complex64, z: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    cfg.validate()?;
    check_finite(a, z)?;
    u_unchecked(a, z, cfg)?.finite()
}

fn u_unchecked(a: Complex64, z: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    if z.norm() < SERIES_RADIUS {
        let [u0, u1, _, _] = initial_values(a);
        return Ok(maclaurin(a, z, u0, u1));
    }
    if z.re >= 0.0 {
        return u_minus_on_sheet(a, z * z, lifted_square_arg(z), cfg);
    }
    let m = connection_matrix_uv(a);
    let (ur, vr) = (u(a, -z, cfg)?, v(a, -z, cfg)?);
    let mut r = EvalResult::combine(m.m11, ur, m.m12, vr);
    r.path.insert(PathFlag::Connection);
    Ok(r)
}

/// `V(a, z)` for all complex `a`, `z`.
pub fn v(a: Complex64, z: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    cfg.validate()?;
    check_finite(a, z)?;
    v_unchecked(a, z, cfg)?.finite()
}

fn v_unchecked(a: Complex64, z: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    if z.norm() < SERIES_RADIUS {
        let [_, _, v0, v1] = initial_values(a);
        return Ok(maclaurin(a, z, v0, v1));
    }
    if z.re >= 0.0 {
        let up = u_plus_on_sheet(a, z * z, lifted_square_arg(z), cfg)?;
        return Ok(up.scale(c((2.0 / PI).sqrt())));
    }
    let m = connection_matrix_uv(a);
    let (ur, vr) = (u(a, -z, cfg)?, v(a, -z, cfg)?);
    let mut r = EvalResult::combine(m.m21, ur, m.m22, vr);
    r.path.insert(PathFlag::Connection);
    Ok(r)
}

/// `U(a,-z)` for `Re z > 0`, `arg z > -π/4`, by continuing the `u₋` integral clockwise
/// through `2π` in `y`: rotating past the branch point at `p = -1/2` picks
/// up the integral below the cut of `u₊`.
pub fn u_reflected_by_continuation(a: Complex64, z: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    let (y, phi) = right_half_square(z)?;
    let a0 = growing_exponent(a);
    let a1 = decaying_exponent(a);
    let beta = a * 0.5 - 0.75;
    let um = u_minus_on_sheet(a, y, phi, cfg)?;
    let lower = half_line_integral(a, y, phi, false, cfg)?;
    let k_u = (I * 2.0 * PI * a1).exp();
    let k_i = I * 2.0 * PI * (I * PI * a0).exp() * recip_gamma(c(1.0) - a0) * pow2(-a) * (I * PI * beta).exp()
        * recip_gamma(a1);
    Ok(EvalResult::combine(k_u, um, k_i, lower))
}

/// `V(a,-z)` for `Re z > 0`, `arg z > -π/4`, by the same continuation applied to `u₊`; the
/// segment part is entire in `y` and does not change.
pub fn v_reflected_by_continuation(a: Complex64, z: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    let (y, phi) = right_half_square(z)?;
    let a0 = growing_exponent(a);
    let a1 = decaying_exponent(a);
    let um = u_minus_on_sheet(a, y, phi, cfg)?;
    let lower = half_line_integral(a, y, phi, false, cfg)?;
    let k_i = sin_pi(a);
    let k_u = -I * PI * pow2(a) * (I * 2.0 * PI * a1).exp() * recip_gamma(a0) * recip_gamma(c(1.0) - a1);
    Ok(EvalResult::combine(k_i, lower, k_u, um).scale(c((2.0 / PI).sqrt())))
}

fn right_half_square(z: Complex64) -> Result<(Complex64, f64)> {
    if !(z.re > 0.0) || z.arg().abs() >= FRAC_PI_2 {
        return Err(PcfError::Domain(format!("continuation route needs Re z > 0, got {z}")));
    }
    Ok((z * z, lifted_square_arg(z)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exact_solutions() {
        let cfg = EvalConfig::default();
        let e = (-1.0f64).exp();
        let r = u(cx(-0.5, 0.0), cx(2.0, 0.0), &cfg).unwrap();
        assert!((r.value - e).norm() < 1e-12 * e, "{}", r.value);
        let r = u(cx(-2.5, 0.0), cx(2.0, 0.0), &cfg).unwrap();
        assert!((r.value - 3.0 * e).norm() < 1e-11, "{}", r.value);
        let r = u_minus(cx(-1.5, 0.0), cx(1.0, 0.0), &cfg).unwrap();
        assert!((r.value - (-0.25f64).exp()).norm() < 1e-12, "{}", r.value);
    }

    #[test]
    fn connection_matrix_examples() {
        let m = connection_matrix_uv(cx(0.0, 0.0));
        assert!(m.m11.norm() < 1e-16);
        assert!((m.m12 - PI.sqrt()).norm() < 1e-14);
        assert!((m.m21 - 1.0 / PI.sqrt()).norm() < 1e-14);
        let m = connection_matrix_uv(cx(0.5, 0.0));
        assert_eq!(m.m21, ZERO);
        assert!((m.m11 + 1.0).norm() < 1e-15 && (m.m22 - 1.0).norm() < 1e-15);
        for a in [cx(0.3, 0.2), cx(-1.7, 0.0), cx(1.0, 1.0)] {
            let m = connection_matrix_uv(a);
            assert!((m.det() + 1.0).norm() < 1e-12);
            assert!(m.involution_defect() < 1e-11);
        }
    }

    #[test]
    fn maclaurin_matches_laplace() {
        let cfg = EvalConfig::default();
        let a = cx(0.3, -0.4);
        let z = cx(0.6, 0.2);
        let [u0, u1, v0, v1] = initial_values(a);
        let su = maclaurin(a, z, u0, u1).value;
        let sv = maclaurin(a, z, v0, v1).value;
        let lu = u(a, z, &cfg).unwrap().value;
        let lv = v(a, z, &cfg).unwrap().value;
        assert!((su - lu).norm() < 1e-12 * lu.norm(), "{su} {lu}");
        assert!((sv - lv).norm() < 1e-12 * lv.norm(), "{sv} {lv}");
    }
}
