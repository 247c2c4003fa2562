//! `E±(a,x)`, solutions of `u'' + (x²/4 - a) u = 0`, and the classical
//! `E`, `E*`, `W` built from them.
//!
//! With `s = x²`,
//!
//! ```text
//! E₊(a,x) = v₊(a,s) = e^{ is/4} g( ia/2 + 1/4; (1 + 2ip)^{-ia/2-3/4})
//! E₋(a,x) = v₋(a,s) = e^{-is/4} g(-ia/2 + 1/4; (1 - 2ip)^{ ia/2-3/4})
//! ```
//!
//! normalized so that `E± ~ e^{±ix²/4} (x²)^{∓ia/2-1/4}`. The Borel-plane
//! branch points sit at `p = ±i/2`, so the rays can turn through almost
//! `3π/2` on one side. Where no admissible ray exists, and for small `|x|`,
//! the values come from `U` through `E₊(a,x) = e^{πa/4} e^{-iπ/8} U(ia, x e^{-iπ/4})`
//! and its mirror.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

use num_complex::Complex64;

use crate::error::Result;
use crate::finite_part::gamma_normalized_fp;
use crate::gamma::{log_gamma, recip_gamma};
use crate::quadrature::Binomial;
use crate::types::{check_finite, ConnectionCoefficients, EvalConfig, EvalResult, PathFlag};
use crate::weber_uv::{self, RAY_MARGIN, SERIES_RADIUS};

const I: Complex64 = Complex64::new(0.0, 1.0);
/// Minimum `cos(arg s + θ)` for a ray to be used directly.
const MIN_DECAY_COS: f64 = 0.15;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Which member of the pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `E₊ ~ e^{ix²/4}`.
    Plus,
    /// `E₋ ~ e^{-ix²/4}`.
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    /// Endpoint exponent `±ia/2 + 1/4`.
    pub fn exponent(self, a: Complex64) -> Complex64 {
        I * a * (0.5 * self.sign()) + 0.25
    }

    /// `(1 ± 2ip)^{∓ia/2-3/4}`.
    pub fn cofactor(self, a: Complex64) -> Binomial {
        let sg = self.sign();
        Binomial::new(I * (2.0 * sg), -I * a * (0.5 * sg) - 0.75)
    }

    /// Allowed ray directions, clear of the branch point at `p = ±i/2`.
    pub fn ray_range(self) -> (f64, f64) {
        match self {
            Branch::Plus => (-1.5 * PI + RAY_MARGIN, FRAC_PI_2 - RAY_MARGIN),
            Branch::Minus => (-FRAC_PI_2 + RAY_MARGIN, 1.5 * PI - RAY_MARGIN),
        }
    }
}

/// Ray for `v±` at `arg s`, or `None` when every allowed ray decays too
/// slowly.
pub fn e_ray(branch: Branch, arg_s: f64) -> Option<f64> {
    let (lo, hi) = branch.ray_range();
    let theta = (-arg_s).clamp(lo, hi);
    ((arg_s + theta).cos() >= MIN_DECAY_COS).then_some(theta)
}

/// `v±(a, s)` with `arg s` taken as given.
pub fn v_on_sheet(branch: Branch, a: Complex64, s: Complex64, arg_s: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    let theta = e_ray(branch, arg_s).ok_or_else(|| {
        crate::error::PcfError::Domain(format!("no admissible ray for arg s = {arg_s}"))
    })?;
    let s = Complex64::from_polar(s.norm(), arg_s);
    let psi = branch.cofactor(a);
    let g = gamma_normalized_fp(branch.exponent(a), &psi, s, theta, cfg)?;
    Ok(g.scale((I * s * (0.25 * branch.sign())).exp()))
}

/// `v₊(a, s)` on the principal sheet.
pub fn v_plus(a: Complex64, s: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    v_on_sheet(Branch::Plus, a, s, s.arg(), cfg)
}

/// `v₋(a, s)` on the principal sheet.
pub fn v_minus(a: Complex64, s: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    v_on_sheet(Branch::Minus, a, s, s.arg(), cfg)
}

/// `E±(a,x)` from `U`: `e^{πa/4} e^{∓iπ/8} U(±ia, x e^{∓iπ/4})`.
pub fn e_via_u(branch: Branch, a: Complex64, x: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    let sg = branch.sign();
    let rot = Complex64::from_polar(1.0, -sg * FRAC_PI_4);
    let factor = (a * FRAC_PI_4).exp() * Complex64::from_polar(1.0, -sg * FRAC_PI_8);
    Ok(weber_uv::u(I * a * sg, x * rot, cfg)?.scale(factor))
}

/// `E±(a, x)` for `Re x ≥ 0`, by ray integral where possible.
fn e_right(branch: Branch, a: Complex64, x: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    let arg_s = weber_uv::lifted_square_arg(x);
    if x.norm() >= SERIES_RADIUS && e_ray(branch, arg_s).is_some() {
        v_on_sheet(branch, a, x * x, arg_s, cfg)
    } else {
        e_via_u(branch, a, x, cfg)
    }
}

/// `E±(a, x)` for all complex `a`, `x`.
pub fn e(branch: Branch, a: Complex64, x: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    cfg.validate()?;
    check_finite(a, x)?;
    e_unchecked(branch, a, x, cfg)?.finite()
}

fn e_unchecked(branch: Branch, a: Complex64, x: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    if x.re >= 0.0 {
        return e_right(branch, a, x, cfg);
    }
    let m = connection_matrix_e(a);
    let em = e_right(Branch::Minus, a, -x, cfg)?;
    let ep = e_right(Branch::Plus, a, -x, cfg)?;
    let mut r = match branch {
        Branch::Minus => EvalResult::combine(m.m11, em, m.m12, ep),
        Branch::Plus => EvalResult::combine(m.m21, em, m.m22, ep),
    };
    r.path.insert(PathFlag::Connection);
    Ok(r)
}

/// `E₊(a, x)`.
pub fn e_plus(a: Complex64, x: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    e(Branch::Plus, a, x, cfg)
}

/// `E₋(a, x)`.
pub fn e_minus(a: Complex64, x: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    e(Branch::Minus, a, x, cfg)
}

/// Matrix of `(E₋(a,-x), E₊(a,-x)) = M (E₋(a,x), E₊(a,x))`.
pub fn connection_matrix_e(a: Complex64) -> ConnectionCoefficients {
    let ea = (a * PI).exp();
    let half = (a * (0.5 * PI)).exp() * (2.0 * PI).sqrt();
    ConnectionCoefficients {
        m11: I * ea,
        m12: half * recip_gamma(c(0.5) - I * a),
        m21: half * recip_gamma(c(0.5) + I * a),
        m22: -I * ea,
    }
}

/// Coefficient of `Γ(ia/2+1/4) v₊` in the continuation of `Γ(-ia/2+1/4) v₋`
/// through `2π`: `(ie^{πa} + 1) 2^{ia} e^{-iπ/4}`.
pub fn raw_continuation_coefficient(a: Complex64) -> Complex64 {
    (I * (a * PI).exp() + 1.0) * (I * a * std::f64::consts::LN_2).exp() * Complex64::from_polar(1.0, -FRAC_PI_4)
}

/// `k`, `ρ` and `φ₂` of the classical functions, continued to complex `a`
/// through `e^{iφ₂} = Γ(1/2+ia) √(cosh πa) / √π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalPhases {
    pub k: Complex64,
    pub rho: Complex64,
    pub phi2: Complex64,
}

impl ClassicalPhases {
    pub fn new(a: Complex64) -> Result<Self> {
        let lg = log_gamma(c(0.5) + I * a)?;
        let log_cosh = (a * PI).cosh().ln();
        let mut phi2 = -I * (lg + log_cosh * 0.5 - 0.5 * PI.ln());
        phi2.re -= 2.0 * PI * ((phi2.re - PI) / (2.0 * PI)).ceil();
        let ea = (a * PI).exp();
        let k = (((ea * ea) + 1.0).sqrt() + ea).inv();
        Ok(Self { k, rho: c(FRAC_PI_8) + phi2 * 0.5, phi2 })
    }
}

/// `E(a,x) = √2 e^{iπ/4 + iφ₂/2} E₊(a,x)`.
pub fn classical_e(a: Complex64, x: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    let ph = ClassicalPhases::new(a)?;
    let f = (I * (ph.phi2 * 0.5 + FRAC_PI_4)).exp() * std::f64::consts::SQRT_2;
    Ok(e_plus(a, x, cfg)?.scale(f))
}

/// `E*(a,x) = √2 e^{-iπ/4 - iφ₂/2} E₋(a,x)`.
pub fn classical_estar(a: Complex64, x: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    let ph = ClassicalPhases::new(a)?;
    let f = (-I * (ph.phi2 * 0.5 + FRAC_PI_4)).exp() * std::f64::consts::SQRT_2;
    Ok(e_minus(a, x, cfg)?.scale(f))
}

/// `(W(a,x), W(a,-x))` from `E` and `E*` at `x`. Validated for real `a`;
/// complex `a` uses the continued phases.
pub fn whittaker_w(a: Complex64, x: Complex64, cfg: &EvalConfig) -> Result<(EvalResult, EvalResult)> {
    let ph = ClassicalPhases::new(a)?;
    let big_e = classical_e(a, x, cfg)?;
    let big_es = classical_estar(a, x, cfg)?;
    let sk = ph.k.sqrt();
    let w_pos = EvalResult::combine(sk * 0.5, big_e, sk * 0.5, big_es);
    let w_neg_f = (I * sk * 2.0).inv();
    let w_neg = EvalResult::combine(w_neg_f, big_e, -w_neg_f, big_es);
    Ok((w_pos, w_neg))
}

/// Relative residuals of `U(ia, xe^{-iπ/4}) = e^{-πa/4} e^{iπ/8} E₊(a,x)` and
/// `U(-ia, xe^{iπ/4}) = e^{-πa/4} e^{-iπ/8} E₋(a,x)`, with `E±` taken from
/// the ray integrals.
pub fn u_e_link(a: Complex64, x: f64, cfg: &EvalConfig) -> Result<(f64, f64)> {
    let xc = c(x);
    let mut out = [0.0; 2];
    for (slot, branch) in out.iter_mut().zip([Branch::Plus, Branch::Minus]) {
        let sg = branch.sign();
        let lhs = weber_uv::u(I * a * sg, xc * Complex64::from_polar(1.0, -sg * FRAC_PI_4), cfg)?.value;
        let ev = v_on_sheet(branch, a, xc * xc, 0.0, cfg)?.value;
        let rhs = (-a * FRAC_PI_4).exp() * Complex64::from_polar(1.0, sg * FRAC_PI_8) * ev;
        *slot = (lhs - rhs).norm() / lhs.norm().max(rhs.norm());
    }
    Ok((out[0], out[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exponential_solutions() {
        let cfg = EvalConfig::default();
        let r = e_plus(cx(0.0, 0.5), cx(2.0, 0.0), &cfg).unwrap();
        assert!((r.value - I.exp()).norm() < 1e-12, "{}", r.value);
        assert!(r.path.contains(PathFlag::Limit));
        let r = e_minus(cx(0.0, -0.5), cx(2.0, 0.0), &cfg).unwrap();
        assert!((r.value - (-I).exp()).norm() < 1e-12, "{}", r.value);
        let r = e_plus(cx(0.0, 0.5), cx(-3.0, 0.0), &cfg).unwrap();
        let expect = (I * 2.25).exp();
        assert!((r.value - expect).norm() < 1e-11, "{}", r.value);
    }

    #[test]
    fn matrix_examples() {
        let m = connection_matrix_e(cx(0.0, 0.0));
        let r2 = std::f64::consts::SQRT_2;
        assert!((m.m11 - I).norm() < 1e-15 && (m.m22 + I).norm() < 1e-15);
        assert!((m.m12 - r2).norm() < 1e-14 && (m.m21 - r2).norm() < 1e-14);
        let m = connection_matrix_e(cx(0.0, 0.5));
        assert!((m.m22 - 1.0).norm() < 1e-15);
        assert_eq!(m.m21, c(0.0));
        for a in [cx(0.3, 0.0), cx(0.4, -0.3), cx(-1.0, 0.7)] {
            assert!(connection_matrix_e(a).involution_defect() < 1e-11);
        }
    }

    #[test]
    fn classical_phase_constants() {
        let ph = ClassicalPhases::new(cx(0.0, 0.0)).unwrap();
        assert!((ph.k.re - (2f64.sqrt() - 1.0)).abs() < 1e-15 && ph.k.im == 0.0);
        assert!((ph.rho.re - FRAC_PI_8).abs() < 1e-15);
        let a = 0.8;
        let ph = ClassicalPhases::new(cx(a, 0.0)).unwrap();
        let k = ph.k.re;
        assert!((k * (k + 2.0 * (PI * a).exp()) - 1.0).abs() < 1e-12);
        assert!(ph.phi2.im.abs() < 1e-14);
    }

    #[test]
    fn real_parameter_conjugacy() {
        let cfg = EvalConfig::default();
        let (a, x) = (cx(0.7, 0.0), cx(1.9, 0.0));
        let p = e_plus(a, x, &cfg).unwrap().value;
        let m = e_minus(a, x, &cfg).unwrap().value;
        assert!((p.conj() - m).norm() < 1e-11 * p.norm());
    }
}
