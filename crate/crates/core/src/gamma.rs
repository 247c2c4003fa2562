//! Complex gamma function, its entire reciprocal, and Pochhammer symbols.
//!
//! `log_gamma` is the principal branch (analytic off the negative real axis,
//! real on the positive axis). It is computed from the Stirling series after
//! shifting the argument to `Re z >= 10` with the recurrence
//! `ln Γ(z) = ln Γ(z+1) - Log z`, which preserves the principal branch exactly.
//!
//! `recip_gamma` uses the reflection form `sin(πz) Γ(1-z) / π` in the left
//! half-plane with an exact `sin(πz)`, so it returns exact zeros at the poles
//! of Γ.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{PcfError, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `B_{2k} / (2k (2k-1))` for k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const SHIFT_TARGET: f64 = 10.0;
const POLE_EPS: f64 = 1e-14;

/// Distance from `z` to the nearest non-positive integer, or `None` if
/// `Re z > 1/2` makes that irrelevant.
pub fn distance_to_nonpositive_integer(z: Complex64) -> f64 {
    let n = z.re.round().min(0.0);
    (z - Complex64::new(n, 0.0)).norm()
}

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series
}

/// Principal branch of `ln Γ(z)`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(PcfError::Domain(format!("non-finite gamma argument {z}")));
    }
    if distance_to_nonpositive_integer(z) < POLE_EPS {
        return Err(PcfError::GammaPole(z));
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < SHIFT_TARGET && !(w.re >= 0.0 && w.norm() >= SHIFT_TARGET) {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

/// `Γ(z)`; errors at the poles.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    log_gamma(z).map(|l| l.exp())
}

/// `sin(πx)` with exact zeros at integers.
pub fn sin_pi_real(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (PI * r).sin();
    if n.rem_euclid(2.0) == 0.0 {
        s
    } else {
        -s
    }
}

/// `cos(πx)` with exact zeros at half-integers.
pub fn cos_pi_real(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let c = if r.abs() == 0.5 { 0.0 } else { (PI * r).cos() };
    if n.rem_euclid(2.0) == 0.0 {
        c
    } else {
        -c
    }
}

/// `sin(πz)` for complex `z`.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let (sh, ch) = ((PI * z.im).sinh(), (PI * z.im).cosh());
    Complex64::new(sin_pi_real(z.re) * ch, cos_pi_real(z.re) * sh)
}

/// `cos(πz)` for complex `z`.
pub fn cos_pi(z: Complex64) -> Complex64 {
    let (sh, ch) = ((PI * z.im).sinh(), (PI * z.im).cosh());
    Complex64::new(cos_pi_real(z.re) * ch, -sin_pi_real(z.re) * sh)
}

/// `1/Γ(z)`, entire; exactly zero at `0, -1, -2, ...`.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = sin_pi(z);
        if s == Complex64::new(0.0, 0.0) {
            return s;
        }
        // 1 - z has Re > 1/2, never a pole.
        let lg = log_gamma(Complex64::new(1.0, 0.0) - z).expect("Re(1-z) > 1/2");
        s * lg.exp() / PI
    } else {
        match log_gamma(z) {
            Ok(lg) => (-lg).exp(),
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }
}

/// Rising factorial `x (x+1) ... (x+n-1)`; the empty product is 1.
pub fn pochhammer(x: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (x + k as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn log_gamma_examples() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.572_364_942_924_700_1).abs() < 4e-15, "{half}");
        assert!(half.im.abs() < 1e-16);
        let four = log_gamma(c(4.0, 0.0)).unwrap();
        assert!((four.re - 6f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn log_gamma_poles() {
        for n in [0.0, -1.0, -7.0] {
            assert!(matches!(log_gamma(c(n, 0.0)), Err(PcfError::GammaPole(_))));
        }
        assert!(log_gamma(c(-1.0 + 1e-10, 0.0)).is_ok());
    }

    #[test]
    fn log_gamma_principal_branch_continuity() {
        // Imaginary part of principal ln Γ is continuous across Re z = 10 shift boundary
        // and grows like Im(z ln z) for large imaginary part.
        let a = log_gamma(c(9.999_999, 3.0)).unwrap();
        let b = log_gamma(c(10.000_001, 3.0)).unwrap();
        assert!((a - b).norm() < 1e-5);
        // ln Γ(1/2 + 10i), reference from mpmath loggamma.
        let v = log_gamma(c(0.5, 10.0)).unwrap();
        assert!((v.re + 14.789_024_734_744_3).abs() < 1e-12, "{v}");
        assert!((v.im - 13.030_020_034_911_1).abs() < 1e-12, "{v}");
    }

    #[test]
    fn gamma_negative_half() {
        let g = gamma(c(-0.5, 0.0)).unwrap();
        assert!((g.re + 2.0 * PI.sqrt()).abs() < 1e-14 * g.norm(), "{g}");
        assert!(g.im.abs() < 1e-14 * g.norm());
    }

    #[test]
    fn recip_gamma_examples() {
        assert_eq!(recip_gamma(c(0.0, 0.0)), c(0.0, 0.0));
        assert_eq!(recip_gamma(c(-3.0, 0.0)), c(0.0, 0.0));
        assert!((recip_gamma(c(1.0, 0.0)) - 1.0).norm() < 1e-15);
        assert!((recip_gamma(c(0.5, 0.0)) - 1.0 / PI.sqrt()).norm() < 1e-15);
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(c(0.0, 0.0), 3), c(0.0, 0.0));
        assert_eq!(pochhammer(c(1.0, 0.0), 4), c(24.0, 0.0));
        assert_eq!(pochhammer(c(0.5, 0.0), 2), c(0.75, 0.0));
        assert_eq!(pochhammer(c(3.3, -1.0), 0), c(1.0, 0.0));
    }

    #[test]
    fn exact_trig() {
        assert_eq!(sin_pi_real(-3.0), 0.0);
        assert_eq!(sin_pi_real(12.0), 0.0);
        assert_eq!(cos_pi_real(0.5), 0.0);
        assert_eq!(cos_pi_real(-2.5), 0.0);
        assert!((sin_pi_real(0.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi_real(1.5) + 1.0).abs() < 1e-16);
        let z = c(0.3, -0.7);
        assert!((sin_pi(z) - (z * PI).sin()).norm() < 1e-14);
        assert!((cos_pi(z) - (z * PI).cos()).norm() < 1e-14);
    }
}
