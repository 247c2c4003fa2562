//! Independent checks: ODE residuals and Wronskians from finite-difference
//! stencils, and suites of identity checks between separate code paths.

mod suites;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{PcfError, Result};
use crate::grid::{self, Function};
use crate::types::EvalConfig;
use crate::weber_uv::SERIES_RADIUS;

pub use suites::{random_points, suite_cases, CaseSpec};

/// Default seed of the random grids.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;
/// Stencil spacing relative to `max(1, |z|)` for ODE residuals.
pub const ODE_STEP: f64 = 1e-2;
/// Stencil spacing relative to `max(1, |z|)` for Wronskians.
pub const WRONSKIAN_STEP: f64 = 1e-3;

/// Which equation a function satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equation {
    /// `w'' = (z²/4 + a) w`.
    Weber,
    /// `u'' = (a - x²/4) u`.
    Oscillatory,
}

impl Equation {
    pub fn of(function: Function) -> Self {
        match function {
            Function::U | Function::V => Equation::Weber,
            _ => Equation::Oscillatory,
        }
    }

    /// Coefficient `q` in `w'' = q w`, split as `(z²/4 term, a term)`.
    fn coefficient(self, a: Complex64, z: Complex64) -> (Complex64, Complex64) {
        let quarter = z * z * 0.25;
        match self {
            Equation::Weber => (quarter, a),
            Equation::Oscillatory => (-quarter, a),
        }
    }
}

/// Value, first and second derivative along the ray through `z`.
#[derive(Clone, Copy, Debug)]
pub struct Derivatives {
    pub value: Complex64,
    pub first: Complex64,
    pub second: Complex64,
}

/// Five-point central differences at spacing `h` along `e^{i arg z}`,
/// refined by one Richardson step with `h/2`.
pub fn radial_derivatives<F>(f: F, z: Complex64, h: f64) -> Result<Derivatives>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(h > 0.0) || z.norm() <= 2.0 * h {
        return Err(PcfError::StencilOutOfDomain);
    }
    let dir = if z.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { z / z.norm() };
    let half = 0.5 * h;
    let mut v = [Complex64::new(0.0, 0.0); 9];
    for (k, slot) in v.iter_mut().enumerate() {
        *slot = f(z + dir * (half * (k as f64 - 4.0)))?;
    }
    // v[4 + j] = f(z + j h/2)
    let d1 = |s: usize, step: f64| (v[4 - 2 * s] - v[4 - s] * 8.0 + v[4 + s] * 8.0 - v[4 + 2 * s]) / (12.0 * step);
    let d2 = |s: usize, step: f64| {
        (-v[4 - 2 * s] + v[4 - s] * 16.0 - v[4] * 30.0 + v[4 + s] * 16.0 - v[4 + 2 * s]) / (12.0 * step * step)
    };
    let rich = |coarse: Complex64, fine: Complex64| fine + (fine - coarse) / 15.0;
    Ok(Derivatives {
        value: v[4],
        first: rich(d1(2, h), d1(1, half)) / dir,
        second: rich(d2(2, h), d2(1, half)) / (dir * dir),
    })
}

/// Relative residual `|w'' - q w| / (|z²w/4| + |aw| + |w''|)` of a callable.
pub fn ode_residual_with<F>(f: F, equation: Equation, a: Complex64, z: Complex64, h: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let d = radial_derivatives(f, z, h)?;
    let (quarter, a_term) = equation.coefficient(a, z);
    let residual = d.second - (quarter + a_term) * d.value;
    let scale = (quarter * d.value).norm() + (a_term * d.value).norm() + d.second.norm();
    Ok(if scale == 0.0 { residual.norm() } else { residual.norm() / scale })
}

fn check_stencil(z: Complex64, h: f64) -> Result<()> {
    let (lo, hi) = (z.norm() - 2.0 * h, z.norm() + 2.0 * h);
    if lo <= 0.0 || (lo < SERIES_RADIUS && hi >= SERIES_RADIUS) {
        return Err(PcfError::StencilOutOfDomain);
    }
    Ok(())
}

/// ODE residual of `function(a, ·)` at `z`.
pub fn ode_residual(function: Function, a: Complex64, z: Complex64, h: f64, cfg: &EvalConfig) -> Result<f64> {
    check_stencil(z, h)?;
    ode_residual_with(|w| Ok(function.eval(a, w, cfg)?.value), Equation::of(function), a, z, h)
}

/// `f₁ f₂' - f₁' f₂` at `z`.
pub fn wronskian(first: Function, second: Function, a: Complex64, z: Complex64, h: f64, cfg: &EvalConfig) -> Result<Complex64> {
    check_stencil(z, h)?;
    let d1 = radial_derivatives(|w| Ok(first.eval(a, w, cfg)?.value), z, h)?;
    let d2 = radial_derivatives(|w| Ok(second.eval(a, w, cfg)?.value), z, h)?;
    Ok(d1.value * d2.first - d1.first * d2.value)
}

/// Default stencil spacing at `z`.
pub fn default_step(scale: f64, z: Complex64) -> f64 {
    scale * z.norm().max(1.0)
}

/// Value at `t = 0` of the polynomial through `(t_i, v_i)` (Neville).
pub fn extrapolate_to_zero(ts: &[f64], values: &[Complex64]) -> Complex64 {
    let mut p = values.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i + 1] * ts[i] - p[i] * ts[i + m]) / (ts[i] - ts[i + m]);
        }
    }
    p[0]
}

/// `|lhs - rhs| / max(|lhs|, scale)`.
pub fn relative_residual(lhs: Complex64, rhs: Complex64, scale: f64) -> f64 {
    let d = (lhs - rhs).norm();
    let s = lhs.norm().max(scale);
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

/// A verification suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Lemma,
    ConnectionUv,
    ConnectionE,
    Eestar,
    Link,
    Asymptotic,
    Ode,
    Wronskian,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Lemma,
        Suite::ConnectionUv,
        Suite::ConnectionE,
        Suite::Eestar,
        Suite::Link,
        Suite::Asymptotic,
        Suite::Ode,
        Suite::Wronskian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma => "lemma",
            Suite::ConnectionUv => "connection_uv",
            Suite::ConnectionE => "connection_e",
            Suite::Eestar => "eestar",
            Suite::Link => "link",
            Suite::Asymptotic => "asymptotic",
            Suite::Ode => "ode",
            Suite::Wronskian => "wronskian",
            Suite::All => "all",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|s| s.name() == name)
            .ok_or_else(|| PcfError::InvalidConfig(format!("unknown suite {name:?}")))
    }
}

/// Grid parameters shared by the suites.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub seed: u64,
    /// Random `(a, z)` pairs in the ODE suite.
    pub ode_samples: usize,
    /// Distances from removable-singularity loci.
    pub deltas: Vec<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, ode_samples: 50, deltas: vec![1e-2, 1e-3, 1e-4] }
    }
}

/// One checked identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Case {
    pub index: usize,
    pub suite: &'static str,
    pub check: String,
    pub input: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite_id: &'static str,
    pub cases: Vec<Case>,
    pub worst_residual: f64,
    pub passed: bool,
}

impl SuiteReport {
    fn from_cases(suite: Suite, cases: Vec<Case>) -> Self {
        let worst_residual = cases.iter().map(|c| c.residual).fold(0.0, f64::max);
        let passed = cases.iter().all(|c| c.pass);
        Self { suite_id: suite.name(), cases, worst_residual, passed }
    }

    /// Cases whose check name starts with `prefix`.
    pub fn matching<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Case> + 'a {
        self.cases.iter().filter(move |c| c.check.starts_with(prefix))
    }
}

/// Runs `suite` (every suite for [`Suite::All`]). Cases are evaluated with
/// [`grid::map`] and reported in construction order.
pub fn run_suite(suite: Suite, spec: &GridSpec, cfg: &EvalConfig) -> SuiteReport {
    let list: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let specs: Vec<(Suite, CaseSpec)> =
        list.iter().flat_map(|&s| suite_cases(s, spec).into_iter().map(move |c| (s, c))).collect();
    let cases = grid::map(&specs, |(s, c)| c.run(s.name(), cfg))
        .into_iter()
        .enumerate()
        .map(|(i, mut c)| {
            c.index = i;
            c
        })
        .collect();
    SuiteReport::from_cases(suite, cases)
}
