//! Shared configuration and result types.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{PcfError, Result};

/// Tolerances and truncation knobs for a single evaluation.
///
/// Immutable per call; every evaluator takes it by reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalConfig {
    /// Relative tolerance for quadrature convergence.
    pub rel_tol: f64,
    /// Absolute floor for error targets.
    pub abs_tol: f64,
    /// Largest split radius between the endpoint series and the quadrature.
    pub split_radius: f64,
    /// Minimum number of Taylor terms used near a singular endpoint.
    pub series_order: usize,
    /// Deepest tanh-sinh refinement level.
    pub max_quad_level: u32,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            split_radius: 0.25,
            series_order: 40,
            max_quad_level: 12,
        }
    }
}

impl EvalConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(PcfError::InvalidConfig(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(PcfError::InvalidConfig("abs_tol must be non-negative".into()));
        }
        if !(self.split_radius > 0.0 && self.split_radius < 0.5) {
            return Err(PcfError::InvalidConfig(format!(
                "split_radius must lie in (0, 1/2), got {}",
                self.split_radius
            )));
        }
        if self.series_order < 1 {
            return Err(PcfError::InvalidConfig("series_order must be at least 1".into()));
        }
        Ok(())
    }
}

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PathFlag {
    /// Convergent Laplace integral evaluated by quadrature from the endpoint.
    Direct,
    /// Hadamard finite part of an endpoint-divergent integral.
    FinitePart,
    /// Gamma-normalized form evaluated at or near a removable singularity.
    Limit,
    /// Obtained from other solutions through a connection formula.
    Connection,
    /// Balanced average of the integrals above and below a Borel-plane singularity.
    Medianized,
    /// Maclaurin series of the differential equation near the origin.
    Series,
}

impl PathFlag {
    pub const ALL: [PathFlag; 6] = [
        PathFlag::Direct,
        PathFlag::FinitePart,
        PathFlag::Limit,
        PathFlag::Connection,
        PathFlag::Medianized,
        PathFlag::Series,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PathFlag::Direct => "direct",
            PathFlag::FinitePart => "finite_part",
            PathFlag::Limit => "limit",
            PathFlag::Connection => "connection",
            PathFlag::Medianized => "medianized",
            PathFlag::Series => "series",
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

/// Set of [`PathFlag`]s.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct PathFlags(u8);

impl PathFlags {
    pub fn empty() -> Self {
        Self(0)
    }

    pub fn of(flag: PathFlag) -> Self {
        Self(flag.bit())
    }

    pub fn insert(&mut self, flag: PathFlag) {
        self.0 |= flag.bit();
    }

    pub fn with(mut self, flag: PathFlag) -> Self {
        self.insert(flag);
        self
    }

    pub fn contains(&self, flag: PathFlag) -> bool {
        self.0 & flag.bit() != 0
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = PathFlag> + '_ {
        PathFlag::ALL.into_iter().filter(move |f| self.contains(*f))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.iter().map(PathFlag::name).collect()
    }
}

impl fmt::Display for PathFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names().join(","))
    }
}

/// A computed value with its error estimate and provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub abs_err_estimate: f64,
    pub path: PathFlags,
}

impl EvalResult {
    pub fn new(value: Complex64, abs_err_estimate: f64, path: PathFlags) -> Self {
        Self { value, abs_err_estimate: abs_err_estimate.abs(), path }
    }

    /// Fails unless the value is finite.
    pub fn finite(self) -> Result<Self> {
        if self.value.re.is_finite() && self.value.im.is_finite() {
            Ok(self)
        } else {
            Err(PcfError::Domain(format!("value {} is not representable in double precision", self.value)))
        }
    }

    /// `self * factor`, scaling the error estimate accordingly.
    pub fn scale(self, factor: Complex64) -> Self {
        Self {
            value: self.value * factor,
            abs_err_estimate: self.abs_err_estimate * factor.norm(),
            path: self.path,
        }
    }

    /// `a*self + b*other`, merging error estimates and flags.
    pub fn combine(a: Complex64, x: EvalResult, b: Complex64, y: EvalResult) -> Self {
        Self {
            value: a * x.value + b * y.value,
            abs_err_estimate: a.norm() * x.abs_err_estimate + b.norm() * y.abs_err_estimate,
            path: x.path.union(y.path),
        }
    }
}

/// Fails unless both inputs are finite.
pub fn check_finite(a: Complex64, z: Complex64) -> Result<()> {
    if [a.re, a.im, z.re, z.im].iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(PcfError::Domain(format!("non-finite input a = {a}, argument = {z}")))
    }
}

/// 2×2 matrix linking a fundamental system at `+∞` to the one at `-∞`:
/// `(f1(-z), f2(-z)) = M (f1(z), f2(z))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionCoefficients {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl ConnectionCoefficients {
    pub fn apply(&self, f1: Complex64, f2: Complex64) -> (Complex64, Complex64) {
        (self.m11 * f1 + self.m12 * f2, self.m21 * f1 + self.m22 * f2)
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            m11: self.m11 * other.m11 + self.m12 * other.m21,
            m12: self.m11 * other.m12 + self.m12 * other.m22,
            m21: self.m21 * other.m11 + self.m22 * other.m21,
            m22: self.m21 * other.m12 + self.m22 * other.m22,
        }
    }

    /// Largest entry of `M·M - I` in modulus.
    pub fn involution_defect(&self) -> f64 {
        let sq = self.compose(self);
        [sq.m11 - 1.0, sq.m12, sq.m21, sq.m22 - 1.0].iter().map(|d| d.norm()).fold(0.0, f64::max)
    }
}
