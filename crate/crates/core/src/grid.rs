//! Grid evaluation. With the `parallel` feature (default) points are spread
//! over the rayon thread pool; without it they run in order on the calling
//! thread. Output order always follows input order.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{PcfError, Result};
use crate::types::{EvalConfig, EvalResult};
use crate::{weber_e, weber_uv};

/// A function the library evaluates at `(a, argument)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Function {
    U,
    V,
    EPlus,
    EMinus,
    E,
    EStar,
    W,
}

impl Function {
    pub const ALL: [Function; 7] =
        [Function::U, Function::V, Function::EPlus, Function::EMinus, Function::E, Function::EStar, Function::W];

    pub fn name(self) -> &'static str {
        match self {
            Function::U => "U",
            Function::V => "V",
            Function::EPlus => "E+",
            Function::EMinus => "E-",
            Function::E => "E",
            Function::EStar => "Estar",
            Function::W => "W",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Function::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| PcfError::InvalidConfig(format!("unknown function {name:?}")))
    }

    /// Value at `(a, arg)`; non-finite results are errors.
    pub fn eval(self, a: Complex64, arg: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
        let r = match self {
            Function::U => weber_uv::u(a, arg, cfg),
            Function::V => weber_uv::v(a, arg, cfg),
            Function::EPlus => weber_e::e_plus(a, arg, cfg),
            Function::EMinus => weber_e::e_minus(a, arg, cfg),
            Function::E => weber_e::classical_e(a, arg, cfg),
            Function::EStar => weber_e::classical_estar(a, arg, cfg),
            Function::W => weber_e::whittaker_w(a, arg, cfg).map(|w| w.0),
        };
        r?.finite()
    }
}

/// `f` over `items` in order on the current thread.
pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// `f` over `items`, in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_sequential(items, f)
}

/// `function(a, arg)` for every `arg`.
pub fn evaluate(function: Function, a: Complex64, args: &[Complex64], cfg: &EvalConfig) -> Vec<Result<EvalResult>> {
    map(args, |&z| function.eval(a, z, cfg))
}

/// As [`evaluate`], always sequential.
pub fn evaluate_sequential(
    function: Function,
    a: Complex64,
    args: &[Complex64],
    cfg: &EvalConfig,
) -> Vec<Result<EvalResult>> {
    map_sequential(args, |&z| function.eval(a, z, cfg))
}

/// `steps` equally spaced points from `start` to `end` inclusive; one step
/// gives `start`.
pub fn linspace(start: Complex64, end: Complex64, steps: usize) -> Vec<Complex64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        n => (0..n).map(|k| start + (end - start) * (k as f64 / (n - 1) as f64)).collect(),
    }
}
