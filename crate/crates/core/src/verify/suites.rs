//! Case lists of the verification suites.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    default_step, extrapolate_to_zero, ode_residual, relative_residual, wronskian, Case, GridSpec, Suite,
    ODE_STEP, WRONSKIAN_STEP,
};
use crate::asymptotics::{self, Expansion};
use crate::error::Result;
use crate::finite_part::{endpoint_derivative, finite_part_ray, gamma_normalized_fp};
use crate::gamma::{cos_pi, recip_gamma, sin_pi};
use crate::grid::Function;
use crate::quadrature::{Binomial, Cofactor, Unit};
use crate::types::EvalConfig;
use crate::weber_e::{self, Branch, ClassicalPhases};
use crate::weber_uv;

const I: Complex64 = Complex64::new(0.0, 1.0);

type Check = Box<dyn Fn(&EvalConfig) -> Result<f64> + Send + Sync>;

/// A case before evaluation: what is checked, at what input, and how.
pub struct CaseSpec {
    pub check: String,
    pub input: String,
    pub tolerance: f64,
    residual: Check,
}

impl CaseSpec {
    fn new(check: impl Into<String>, input: impl Into<String>, tolerance: f64, residual: Check) -> Self {
        Self { check: check.into(), input: input.into(), tolerance, residual }
    }

    pub fn run(&self, suite: &'static str, cfg: &EvalConfig) -> Case {
        let (residual, error) = match (self.residual)(cfg) {
            Ok(r) if r.is_nan() => (f64::INFINITY, Some("residual is NaN".to_string())),
            Ok(r) => (r, None),
            Err(e) => (f64::INFINITY, Some(e.to_string())),
        };
        Case {
            index: 0,
            suite,
            check: self.check.clone(),
            input: self.input.clone(),
            residual,
            tolerance: self.tolerance,
            pass: residual <= self.tolerance,
            error,
        }
    }
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn r(re: f64) -> Complex64 {
    cx(re, 0.0)
}

/// Cases of one suite (empty for [`Suite::All`]).
pub fn suite_cases(suite: Suite, spec: &GridSpec) -> Vec<CaseSpec> {
    match suite {
        Suite::Lemma => lemma(spec),
        Suite::ConnectionUv => connection_uv(),
        Suite::ConnectionE => connection_e(),
        Suite::Eestar => eestar(),
        Suite::Link => link(),
        Suite::Asymptotic => asymptotic(),
        Suite::Ode => ode(spec),
        Suite::Wronskian => wronskian_cases(),
        Suite::All => Vec::new(),
    }
}

/// Test cofactors of the lemma checks: `e^{-p} (1+2p)^{-0.3}` and `e^{-p}`.
#[derive(Clone, Copy, Debug)]
enum LemmaCofactor {
    Binomial,
    Exponential,
}

impl LemmaCofactor {
    fn name(self) -> &'static str {
        match self {
            LemmaCofactor::Binomial => "exp(-p)(1+2p)^-0.3",
            LemmaCofactor::Exponential => "exp(-p)",
        }
    }

    fn with<T>(self, f: impl FnOnce(&dyn Cofactor) -> T) -> T {
        match self {
            LemmaCofactor::Binomial => f(&Binomial::new(r(2.0), r(-0.3))),
            LemmaCofactor::Exponential => f(&Unit),
        }
    }
}

fn lemma(spec: &GridSpec) -> Vec<CaseSpec> {
    let mut out = Vec::new();
    let y = r(1.0);
    let deltas = spec.deltas.clone();
    for cof in [LemmaCofactor::Binomial, LemmaCofactor::Exponential] {
        for k in 0..4usize {
            let input = format!("phi={} k={k}", cof.name());
            // ε·FP ∫ p^{-k-1+ε} φ → φ^(k)(0)/k!, averaged over ±ε.
            let ds = deltas.clone();
            out.push(CaseSpec::new(
                "lim1",
                input.clone(),
                1e-8,
                Box::new(move |cfg| {
                    cof.with(|psi| {
                        let target = endpoint_derivative(psi, y, k) / factorial(k);
                        let mut vals = Vec::new();
                        for &d in &ds {
                            let up = finite_part_ray(r(d - k as f64), psi, y, 0.0, cfg)?.value * d;
                            let down = finite_part_ray(r(-d - k as f64), psi, y, 0.0, cfg)?.value * (-d);
                            vals.push((up + down) * 0.5);
                        }
                        let sq: Vec<f64> = ds.iter().map(|d| d * d).collect();
                        Ok(relative_residual(extrapolate_to_zero(&sq, &vals), target, 0.0))
                    })
                }),
            ));
            // g(-k+ε) → (-1)^k φ^(k)(0), and the limit path agrees.
            let ds = deltas.clone();
            out.push(CaseSpec::new(
                "lim2",
                input.clone(),
                1e-8,
                Box::new(move |cfg| {
                    cof.with(|psi| {
                        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                        let target = endpoint_derivative(psi, y, k) * sign;
                        let at = |alpha: f64| gamma_normalized_fp(r(alpha), psi, y, 0.0, cfg).map(|g| g.value);
                        let mut vals = Vec::new();
                        for &d in &ds {
                            vals.push((at(d - k as f64)? + at(-d - k as f64)?) * 0.5);
                        }
                        let sq: Vec<f64> = ds.iter().map(|d| d * d).collect();
                        let extrapolated = extrapolate_to_zero(&sq, &vals);
                        let limit = at(-(k as f64))?;
                        Ok(relative_residual(extrapolated, target, 0.0).max(relative_residual(limit, target, 0.0)))
                    })
                }),
            ));
        }
    }
    for alpha in [2.3, -1.0, -3.0] {
        out.push(CaseSpec::new(
            "g_identity",
            format!("phi=exp(-p) alpha={alpha}"),
            1e-11,
            Box::new(move |cfg| Ok((gamma_normalized_fp(r(alpha), &Unit, r(1.0), 0.0, cfg)?.value - 1.0).norm())),
        ));
    }
    // Approach to each removable-singularity locus.
    let loci: [(Function, Complex64, Complex64); 10] = [
        (Function::U, r(-0.5), r(1.3)),
        (Function::U, r(-2.5), r(1.3)),
        (Function::U, r(-0.5), r(-1.3)),
        (Function::V, r(0.5), r(1.3)),
        (Function::V, r(2.5), r(1.3)),
        (Function::V, r(-0.5), r(1.3)),
        (Function::EPlus, cx(0.0, 0.5), r(1.3)),
        (Function::EPlus, cx(0.0, 2.5), r(1.3)),
        (Function::EMinus, cx(0.0, -0.5), r(1.3)),
        (Function::EMinus, cx(0.0, -2.5), r(-1.3)),
    ];
    for (function, a0, z) in loci {
        let ds = deltas.clone();
        out.push(CaseSpec::new(
            "analyticity",
            format!("fn={} a={a0} z={z}", function.name()),
            1e-8,
            Box::new(move |cfg| {
                let limit = function.eval(a0, z, cfg)?;
                let mut vals = Vec::new();
                let mut scale = limit.value.norm();
                for &d in &ds {
                    let v = function.eval(a0 + d, z, cfg)?.value;
                    scale = scale.max(v.norm());
                    vals.push(v);
                }
                Ok(relative_residual(extrapolate_to_zero(&ds, &vals), limit.value, scale))
            }),
        ));
    }
    out
}

/// `e^{iπt}` with exact values at integer `t`.
fn exp_i_pi(t: Complex64) -> Complex64 {
    cos_pi(t) + I * sin_pi(t)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

fn connection_uv() -> Vec<CaseSpec> {
    let mut out = Vec::new();
    let a_grid = [r(0.0), r(0.5), r(-0.5 + 1e-3), cx(1.0, 1.0), cx(0.0, -0.7)];
    for a in a_grid {
        for z in [r(1.3), r(2.1)] {
            for (row, name) in [(0usize, "reflect_u"), (1, "reflect_v")] {
                out.push(CaseSpec::new(
                    name,
                    format!("a={a} z={z}"),
                    1e-9,
                    Box::new(move |cfg| {
                        let m = weber_uv::connection_matrix_uv(a);
                        let u = weber_uv::u(a, z, cfg)?.value;
                        let v = weber_uv::v(a, z, cfg)?.value;
                        let (lhs, (c1, c2)) = if row == 0 {
                            (weber_uv::u_reflected_by_continuation(a, z, cfg)?.value, (m.m11, m.m12))
                        } else {
                            (weber_uv::v_reflected_by_continuation(a, z, cfg)?.value, (m.m21, m.m22))
                        };
                        let rhs = c1 * u + c2 * v;
                        Ok(relative_residual(lhs, rhs, (c1 * u).norm() + (c2 * v).norm()))
                    }),
                ));
            }
        }
        out.push(CaseSpec::new(
            "involution_uv",
            format!("a={a}"),
            1e-11,
            Box::new(move |_| Ok(weber_uv::connection_matrix_uv(a).involution_defect())),
        ));
        out.push(CaseSpec::new(
            "duplication_coefficient",
            format!("a={a}"),
            1e-11,
            Box::new(move |_| {
                // Coefficient of ũ₊ after the 2π continuation of ũ₋, against the
                // matrix entry m12 of V, both in entire form.
                let lhs = (exp_i_pi(-a - 1.5) - 1.0)
                    * (-a).expf(2.0)
                    * exp_i_pi(a * 0.5 - 0.75)
                    * recip_gamma(a * 0.5 + 0.25);
                let rhs = recip_gamma(a + 0.5) * recip_gamma(r(0.25) - a * 0.5) * (2.0 * PI).sqrt();
                Ok(relative_residual(lhs, rhs, rhs.norm()))
            }),
        ));
        out.push(CaseSpec::new(
            "determinant_uv",
            format!("a={a}"),
            1e-12,
            Box::new(move |_| Ok((weber_uv::connection_matrix_uv(a).det() + 1.0).norm())),
        ));
    }
    for (a, y) in [(r(0.3), r(2.0)), (r(-0.2), r(3.0))] {
        let input = format!("a={a} y={y}");
        out.push(CaseSpec::new(
            "medianization_segment",
            input.clone(),
            1e-10,
            Box::new(move |cfg| {
                let seg = weber_uv::u_plus_via_segment(a, y, cfg)?.value;
                let two = weber_uv::u_plus_two_ray(a, y, cfg)?.value;
                Ok(relative_residual(seg, two, 0.0))
            }),
        ));
        out.push(CaseSpec::new(
            "medianization_production",
            input.clone(),
            1e-10,
            Box::new(move |cfg| {
                let prod = weber_uv::u_plus(a, y, cfg)?.value;
                let two = weber_uv::u_plus_two_ray(a, y, cfg)?.value;
                Ok(relative_residual(prod, two, 0.0))
            }),
        ));
        out.push(CaseSpec::new(
            "half_line_difference",
            input,
            1e-10,
            Box::new(move |cfg| {
                // I₊ - I₋ = -2^{a+1} i sin(π(a/2 - 3/4)) Γ(a/2+1/4) u₋, divided by Γ(1/4 - a/2).
                let phi = y.arg();
                let up = (FRAC_PI_4 - phi).clamp(0.2, PI - 0.2);
                let down = -(FRAC_PI_4 + phi).clamp(0.2, PI - 0.2);
                let i_up = weber_uv::half_line_integral_on_ray(a, y, phi, up, cfg)?.value;
                let i_down = weber_uv::half_line_integral_on_ray(a, y, phi, down, cfg)?.value;
                let um = weber_uv::u_minus(a, y, cfg)?.value;
                let a0 = weber_uv::growing_exponent(a);
                let a1 = weber_uv::decaying_exponent(a);
                let coeff = -(a + 1.0).expf(2.0) * I * sin_pi(a * 0.5 - 0.75) * recip_gamma(a0)
                    * crate::gamma::gamma(a1)?;
                let rhs = coeff * um;
                Ok(relative_residual(i_up - i_down, rhs, i_up.norm() + i_down.norm()))
            }),
        ));
    }
    out
}

fn connection_e() -> Vec<CaseSpec> {
    let mut out = Vec::new();
    let a_grid = [r(0.0), r(0.3), cx(0.0, 0.5 - 1e-3), cx(0.4, -0.3)];
    for a in a_grid {
        for x in [r(1.2), r(1.7)] {
            for branch in [Branch::Minus, Branch::Plus] {
                let name = if branch == Branch::Minus { "reflect_e_minus" } else { "reflect_e_plus" };
                out.push(CaseSpec::new(
                    name,
                    format!("a={a} x={x}"),
                    1e-9,
                    Box::new(move |cfg| {
                        let m = weber_e::connection_matrix_e(a);
                        let em = weber_e::e_minus(a, x, cfg)?.value;
                        let ep = weber_e::e_plus(a, x, cfg)?.value;
                        let (c1, c2) = if branch == Branch::Minus { (m.m11, m.m12) } else { (m.m21, m.m22) };
                        let lhs = weber_e::e_via_u(branch, a, -x, cfg)?.value;
                        Ok(relative_residual(lhs, c1 * em + c2 * ep, (c1 * em).norm() + (c2 * ep).norm()))
                    }),
                ));
            }
            out.push(CaseSpec::new(
                "classical_connection",
                format!("a={a} x={x}"),
                1e-9,
                Box::new(move |cfg| {
                    // E*(a,-x) = -i√(1+e^{2πa}) E(a,x) + i e^{πa} E*(a,x)
                    let ph = ClassicalPhases::new(a)?;
                    let big_e = weber_e::classical_e(a, x, cfg)?.value;
                    let big_es = weber_e::classical_estar(a, x, cfg)?.value;
                    let phase = (-I * (ph.phi2 * 0.5 + FRAC_PI_4)).exp() * std::f64::consts::SQRT_2;
                    let lhs = phase * weber_e::e_via_u(Branch::Minus, a, -x, cfg)?.value;
                    let ea = (a * PI).exp();
                    let t1 = -I * (ea * ea + 1.0).sqrt() * big_e;
                    let t2 = I * ea * big_es;
                    Ok(relative_residual(lhs, t1 + t2, t1.norm() + t2.norm()))
                }),
            ));
        }
        out.push(CaseSpec::new(
            "raw_coefficient",
            format!("a={a}"),
            1e-11,
            Box::new(move |_| {
                let m = weber_e::connection_matrix_e(a);
                let lhs = weber_e::raw_continuation_coefficient(a) * recip_gamma(I * a * (-0.5) + 0.25);
                let rhs = m.m12 * recip_gamma(I * a * 0.5 + 0.25);
                Ok(relative_residual(lhs, rhs, rhs.norm()))
            }),
        ));
        out.push(CaseSpec::new(
            "involution_e",
            format!("a={a}"),
            1e-11,
            Box::new(move |_| Ok(weber_e::connection_matrix_e(a).involution_defect())),
        ));
    }
    out
}

fn eestar() -> Vec<CaseSpec> {
    let mut out = Vec::new();
    for (a, x) in [(0.0, 1.5), (0.0, 2.0), (0.6, 1.5), (0.6, 2.0), (0.5, 2.0), (-1.2, 0.8)] {
        out.push(CaseSpec::new(
            "conjugate_pair",
            format!("a={a} x={x}"),
            1e-11,
            Box::new(move |cfg| {
                let e = weber_e::classical_e(r(a), r(x), cfg)?.value;
                let es = weber_e::classical_estar(r(a), r(x), cfg)?.value;
                Ok(relative_residual(es, e.conj(), 0.0))
            }),
        ));
    }
    out.push(CaseSpec::new(
        "w_real",
        "a=0 x=1",
        1e-11,
        Box::new(|cfg| {
            let (w, wm) = weber_e::whittaker_w(r(0.0), r(1.0), cfg)?;
            Ok((w.value.im / w.value.norm()).abs().max((wm.value.im / wm.value.norm()).abs()))
        }),
    ));
    out.push(CaseSpec::new(
        "e_modulus",
        "a=0 x=1",
        1e-11,
        Box::new(|cfg| {
            let e = weber_e::classical_e(r(0.0), r(1.0), cfg)?.value;
            let ep = weber_e::e_plus(r(0.0), r(1.0), cfg)?.value;
            Ok((e.norm() / (std::f64::consts::SQRT_2 * ep.norm()) - 1.0).abs())
        }),
    ));
    out
}

fn link() -> Vec<CaseSpec> {
    let mut out = Vec::new();
    for a in [0.0, 0.6] {
        for x in [1.5, 2.0] {
            out.push(CaseSpec::new(
                "u_e_link",
                format!("a={a} x={x}"),
                1e-9,
                Box::new(move |cfg| {
                    let (p, m) = weber_e::u_e_link(r(a), x, cfg)?;
                    Ok(p.max(m))
                }),
            ));
        }
    }
    out
}

fn asymptotic() -> Vec<CaseSpec> {
    let mut out = Vec::new();
    let a_grid = [r(0.0), r(0.3), r(-0.7), cx(0.0, 0.5), cx(0.6, -0.4), r(1.0), r(-1.0)];
    let cases: [(Expansion, Function, Complex64); 7] = [
        (Expansion::U, Function::U, r(10.0)),
        (Expansion::U, Function::U, Complex64::from_polar(10.0, 0.4)),
        (Expansion::V, Function::V, r(10.0)),
        (Expansion::V, Function::V, Complex64::from_polar(10.0, -0.2)),
        (Expansion::EPlus, Function::EPlus, r(10.0)),
        (Expansion::EMinus, Function::EMinus, r(10.0)),
        (Expansion::EPlus, Function::EPlus, Complex64::from_polar(10.0, 0.2)),
    ];
    for a in a_grid {
        for (kind, function, z) in cases {
            out.push(CaseSpec::new(
                "asymptotic_match",
                format!("fn={} a={a} z={z:.6}", function.name()),
                1e-9,
                Box::new(move |cfg| {
                    let series = asymptotics::optimal(kind, a, z)?;
                    let value = function.eval(a, z, cfg)?.value;
                    Ok(relative_residual(value, series.value, 0.0))
                }),
            ));
        }
    }
    out
}

/// Random `(a, z)`: `a` uniform in `|a| ≤ 2`, `|z|` uniform in `[0.5, 3]`,
/// `arg z` uniform.
pub fn random_points(seed: u64, n: usize) -> Vec<(Complex64, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let ra = 2.0 * rng.gen::<f64>().sqrt();
            let a = Complex64::from_polar(ra, rng.gen_range(-PI..PI));
            let z = Complex64::from_polar(rng.gen_range(0.5..3.0), rng.gen_range(-PI..PI));
            (a, z)
        })
        .collect()
}

fn ode(spec: &GridSpec) -> Vec<CaseSpec> {
    let mut out = Vec::new();
    for (a, z) in random_points(spec.seed, spec.ode_samples) {
        for function in [Function::U, Function::V, Function::EPlus, Function::EMinus] {
            out.push(CaseSpec::new(
                "ode_residual",
                format!("fn={} a={a:.6} z={z:.6}", function.name()),
                1e-8,
                Box::new(move |cfg| ode_residual(function, a, z, default_step(ODE_STEP, z), cfg)),
            ));
        }
    }
    out
}

fn wronskian_cases() -> Vec<CaseSpec> {
    let mut out = Vec::new();
    let uv = (2.0 / PI).sqrt();
    for a in [r(0.0), cx(0.3, 0.2), r(-1.2), cx(0.0, 0.5)] {
        for z in [r(0.7), r(1.5), r(3.0), cx(1.0, 0.8)] {
            out.push(CaseSpec::new(
                "wronskian_uv",
                format!("a={a} z={z}"),
                1e-9,
                Box::new(move |cfg| {
                    let w = wronskian(Function::U, Function::V, a, z, default_step(WRONSKIAN_STEP, z), cfg)?;
                    Ok(relative_residual(w, r(uv), 0.0))
                }),
            ));
            out.push(CaseSpec::new(
                "wronskian_e",
                format!("a={a} x={z}"),
                1e-9,
                Box::new(move |cfg| {
                    let w = wronskian(Function::EPlus, Function::EMinus, a, z, default_step(WRONSKIAN_STEP, z), cfg)?;
                    Ok(relative_residual(w, -I, 0.0))
                }),
            ));
        }
    }
    out.push(CaseSpec::new(
        "wronskian_antisymmetric",
        "a=0.3+0.2i z=1.5",
        1e-10,
        Box::new(|cfg| {
            let z = r(1.5);
            Ok(wronskian(Function::U, Function::U, cx(0.3, 0.2), z, default_step(WRONSKIAN_STEP, z), cfg)?.norm())
        }),
    ));
    out
}
