//! Truncated large-argument expansions
//!
//! ```text
//! U(a,z) ~ e^{-z²/4} z^{-a-1/2} Σ (-1)^s (1/2+a)_{2s} / (s! (2z²)^s)      |arg z| < 3π/4
//! V(a,z) ~ √(2/π) e^{z²/4} z^{a-1/2} Σ (1/2-a)_{2s} / (s! (2z²)^s)       |arg z| < π/4
//! E₊(a,x) ~ e^{ix²/4} (x²)^{-ia/2-1/4} Σ (1/2+ia)_{2s} / (s! (2ix²)^s)    |arg x| < π/4
//! E₋(a,x) ~ e^{-ix²/4} (x²)^{ia/2-1/4} Σ (1/2-ia)_{2s} / (s! (-2ix²)^s)
//! ```
//!
//! The `E±` series are the `U` series under `E₊(a,x) ∝ U(ia, x e^{-iπ/4})`.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{PcfError, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
/// Largest truncation index considered.
pub const MAX_TERMS: usize = 200;

/// Which expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Expansion {
    U,
    V,
    EPlus,
    EMinus,
}

impl Expansion {
    /// Half-width of the sector of validity in `arg` of the argument.
    pub fn sector(self) -> f64 {
        match self {
            Expansion::U => 3.0 * FRAC_PI_4,
            _ => FRAC_PI_4,
        }
    }

    /// `(b, q)` with terms `t_{s+1} = t_s (b+2s)(b+2s+1) q / (s+1)`.
    fn recurrence(self, a: Complex64, z: Complex64) -> (Complex64, Complex64) {
        let two_z2 = z * z * 2.0;
        match self {
            Expansion::U => (a + 0.5, -two_z2.inv()),
            Expansion::V => (Complex64::new(0.5, 0.0) - a, two_z2.inv()),
            Expansion::EPlus => (I * a + 0.5, (I * two_z2).inv()),
            Expansion::EMinus => (Complex64::new(0.5, 0.0) - I * a, (-I * two_z2).inv()),
        }
    }

    fn prefactor(self, a: Complex64, z: Complex64) -> Complex64 {
        let q = z * z * 0.25;
        let ln_z = z.ln();
        match self {
            Expansion::U => (-q - (a + 0.5) * ln_z).exp(),
            Expansion::V => (q + (a - 0.5) * ln_z).exp() * (2.0 / PI).sqrt(),
            Expansion::EPlus => (I * q - (I * a + 0.5) * ln_z).exp(),
            Expansion::EMinus => (-I * q + (I * a - 0.5) * ln_z).exp(),
        }
    }
}

/// A partial sum and the size of the first omitted term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticSum {
    pub value: Complex64,
    pub terms_used: usize,
    pub last_term_magnitude: f64,
}

fn check_argument(kind: Expansion, z: Complex64) -> Result<()> {
    if z.norm() == 0.0 {
        return Err(PcfError::Domain("asymptotic expansion at zero argument".into()));
    }
    if z.arg().abs() >= kind.sector() {
        return Err(PcfError::Domain(format!(
            "arg {} outside the sector |arg| < {} of the {:?} expansion",
            z.arg(),
            kind.sector(),
            kind
        )));
    }
    Ok(())
}

/// Series terms `t_0 = 1, ..., t_n` (without the prefactor).
pub fn series_terms(kind: Expansion, a: Complex64, z: Complex64, n: usize) -> Vec<Complex64> {
    let (b, q) = kind.recurrence(a, z);
    let mut terms = Vec::with_capacity(n + 1);
    let mut t = Complex64::new(1.0, 0.0);
    terms.push(t);
    for s in 0..n {
        let k = 2.0 * s as f64;
        t = t * (b + k) * (b + k + 1.0) * q / (s + 1) as f64;
        terms.push(t);
    }
    terms
}

/// Partial sum through `s = last` with the prefactor applied.
pub fn partial_sum(kind: Expansion, a: Complex64, z: Complex64, last: usize) -> Result<AsymptoticSum> {
    check_argument(kind, z)?;
    let terms = series_terms(kind, a, z, last + 1);
    let pre = kind.prefactor(a, z);
    let sum: Complex64 = terms[..=last].iter().sum();
    Ok(AsymptoticSum { value: pre * sum, terms_used: last + 1, last_term_magnitude: (pre * terms[last + 1]).norm() })
}

/// The `S` minimizing the first omitted term `|t_{S+1}|`, capped at
/// [`MAX_TERMS`]; a terminating series stops at its last nonzero term.
pub fn optimal_truncation_for(kind: Expansion, a: Complex64, z: Complex64) -> usize {
    let terms = series_terms(kind, a, z, MAX_TERMS + 1);
    let mut best = 0;
    for s in 0..=MAX_TERMS {
        let next = terms[s + 1].norm();
        if next == 0.0 {
            return s;
        }
        if next < terms[best + 1].norm() {
            best = s;
        }
    }
    best
}

/// Optimal truncation of the `U` series.
pub fn optimal_truncation(a: Complex64, z: Complex64) -> usize {
    optimal_truncation_for(Expansion::U, a, z)
}

pub fn asym_u(a: Complex64, z: Complex64, last: usize) -> Result<AsymptoticSum> {
    partial_sum(Expansion::U, a, z, last)
}

pub fn asym_v(a: Complex64, z: Complex64, last: usize) -> Result<AsymptoticSum> {
    partial_sum(Expansion::V, a, z, last)
}

/// `E₊` (`plus`) or `E₋` expansion.
pub fn asym_e(a: Complex64, x: Complex64, last: usize, plus: bool) -> Result<AsymptoticSum> {
    partial_sum(if plus { Expansion::EPlus } else { Expansion::EMinus }, a, x, last)
}

/// Partial sum at the optimal truncation.
pub fn optimal(kind: Expansion, a: Complex64, z: Complex64) -> Result<AsymptoticSum> {
    check_argument(kind, z)?;
    partial_sum(kind, a, z, optimal_truncation_for(kind, a, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn terminating_and_leading_terms() {
        let z = cx(2.0, 0.5);
        let r = asym_u(cx(-0.5, 0.0), z, 7).unwrap();
        assert!((r.value - (-z * z * 0.25).exp()).norm() < 1e-15);
        assert_eq!(r.last_term_magnitude, 0.0);
        assert_eq!(optimal_truncation(cx(-0.5, 0.0), z), 0);

        let r = asym_u(cx(1.0, 0.0), cx(2.0, 0.0), 0).unwrap();
        assert!((r.value.re - (-1.0f64).exp() * 2f64.powf(-1.5)).abs() < 1e-15);
        assert_eq!(r.terms_used, 1);

        let r = asym_v(cx(0.0, 0.0), cx(3.0, 0.0), 0).unwrap();
        assert!((r.value.re - (2.0 / PI).sqrt() * 2.25f64.exp() / 3f64.sqrt()).abs() < 1e-13);

        let r = asym_e(cx(0.0, 0.0), cx(3.0, 0.0), 0, true).unwrap();
        assert!((r.value - (I * 2.25).exp() / 3f64.sqrt()).norm() < 1e-15);

        let x = cx(1.7, 0.0);
        let r = asym_e(cx(0.0, 0.5), x, 5, true).unwrap();
        assert!((r.value - (I * x * x * 0.25).exp()).norm() < 1e-15);
    }

    #[test]
    fn consecutive_sums_differ_by_one_term() {
        let (a, z) = (cx(0.0, 0.0), cx(10.0, 0.0));
        let s5 = asym_u(a, z, 5).unwrap();
        let s6 = asym_u(a, z, 6).unwrap();
        assert!(((s6.value - s5.value).norm() - s5.last_term_magnitude).abs() < 1e-15 * s6.value.norm());
    }

    #[test]
    fn sectors_are_enforced() {
        assert!(asym_u(cx(0.0, 0.0), cx(-1.0, 0.9), 3).is_err());
        assert!(asym_v(cx(0.0, 0.0), cx(1.0, 1.1), 3).is_err());
        assert!(asym_e(cx(0.0, 0.0), cx(0.0, 0.0), 3, false).is_err());
        assert!(asym_u(cx(0.0, 0.0), cx(-1.0, 1.1), 3).is_ok());
    }
}
