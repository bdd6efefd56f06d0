use std::sync::Arc;

use rayon::prelude::*;

use super::lie_derivative_multivector;
use crate::calculus::exterior_derivative;
use crate::error::{Error, Result};
use crate::exterior::{
    contract_form_into_multivector, pairing, wedge, Chart, DifferentialForm, MultivectorField,
};
use crate::report::{NamedValue, VerificationReport, Violation};
use crate::ring::{sample_polynomial, trial_rng, Polynomial};

/// Upper bound on structured fundamental-identity checks per validation.
const MAX_STRUCTURED_TUPLES: usize = 4096;

/// A p-vector field of order `2 <= p <= n` on a chart, the candidate
/// Nambu-Poisson tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NambuStructure {
    name: Option<String>,
    lambda: MultivectorField,
}

impl NambuStructure {
    pub fn new(lambda: MultivectorField) -> Result<Self> {
        let (p, n) = (lambda.degree(), lambda.dimension());
        if p < 2 || p > n {
            return Err(Error::InvalidStructure(format!(
                "order {p} outside 2..={n}"
            )));
        }
        Ok(NambuStructure { name: None, lambda })
    }

    /// Like [`NambuStructure::new`] but also checks a declared order.
    pub fn with_order(order: usize, lambda: MultivectorField) -> Result<Self> {
        if lambda.degree() != order {
            return Err(Error::DegreeMismatch {
                expected: order,
                found: lambda.degree(),
            });
        }
        Self::new(lambda)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.lambda.chart()
    }

    pub fn dimension(&self) -> usize {
        self.lambda.dimension()
    }

    pub fn order(&self) -> usize {
        self.lambda.degree()
    }

    pub fn lambda(&self) -> &MultivectorField {
        &self.lambda
    }

    pub fn describe(&self) -> String {
        let body = format!(
            "order {} on ({}): {}",
            self.order(),
            self.chart().names().join(", "),
            self.lambda.render()
        );
        match &self.name {
            Some(name) => format!("{name} = {body}"),
            None => body,
        }
    }
}

/// Sampling parameters shared by the randomized checkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingConfig {
    pub trials: usize,
    pub seed: u64,
    pub max_degree: u32,
    pub max_abs_coeff: u32,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            trials: 100,
            seed: 42,
            max_degree: 2,
            max_abs_coeff: 3,
        }
    }
}

fn wedge_differentials(chart: &Arc<Chart>, fs: &[Polynomial]) -> Result<DifferentialForm> {
    let mut acc = DifferentialForm::scalar(chart.clone(), Polynomial::one(chart.dimension()))?;
    for f in fs {
        let df = exterior_derivative(&DifferentialForm::scalar(chart.clone(), f.clone())?)?;
        acc = wedge(&acc, &df)?;
    }
    Ok(acc)
}

fn check_arity(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Arity { expected, found });
    }
    Ok(())
}

/// `{f1, ..., fp} = <L, df1 ^ ... ^ dfp>`.
pub fn nambu_bracket(s: &NambuStructure, fs: &[Polynomial]) -> Result<Polynomial> {
    check_arity(s.order(), fs.len())?;
    pairing(s.lambda(), &wedge_differentials(s.chart(), fs)?)
}

/// Hamiltonian vector field `i(df1 ^ ... ^ df_{p-1}) L` of `p - 1` functions.
pub fn hamiltonian_field(s: &NambuStructure, fs: &[Polynomial]) -> Result<MultivectorField> {
    check_arity(s.order() - 1, fs.len())?;
    contract_form_into_multivector(&wedge_differentials(s.chart(), fs)?, s.lambda())
}

/// Defect of the fundamental identity
/// `{f.., {g1..gp}} - sum_i {g1, .., {f.., gi}, .., gp}`; zero iff it holds
/// on this tuple.
pub fn check_fundamental_identity(
    s: &NambuStructure,
    fs: &[Polynomial],
    gs: &[Polynomial],
) -> Result<Polynomial> {
    let p = s.order();
    check_arity(p - 1, fs.len())?;
    check_arity(p, gs.len())?;
    let with = |last: Polynomial| -> Result<Polynomial> {
        let mut args = fs.to_vec();
        args.push(last);
        nambu_bracket(s, &args)
    };
    let mut defect = with(nambu_bracket(s, gs)?)?;
    for i in 0..p {
        let mut args = gs.to_vec();
        args[i] = with(gs[i].clone())?;
        defect = &defect - &nambu_bracket(s, &args)?;
    }
    Ok(defect)
}

fn combinations<T: Clone>(items: &[T], k: usize, limit: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(
        items: &[T],
        start: usize,
        k: usize,
        cur: &mut Vec<T>,
        out: &mut Vec<Vec<T>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            go(items, i + 1, k, cur, out, limit);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, 0, k, &mut Vec::with_capacity(k), &mut out, limit);
    out
}

fn tuple_inputs(chart: &Chart, fs: &[Polynomial], gs: &[Polynomial]) -> Vec<NamedValue> {
    let named = |prefix: &str, xs: &[Polynomial]| {
        xs.iter()
            .enumerate()
            .map(|(i, f)| NamedValue::new(format!("{prefix}{}", i + 1), chart.render(f)))
            .collect::<Vec<_>>()
    };
    let mut out = named("f", fs);
    out.extend(named("g", gs));
    out
}

/// Sampled check that `L` satisfies the fundamental identity.
///
/// This is sound but incomplete: any reported violation is an exact
/// counterexample, while an empty report only covers the tested family.
/// The family is
/// 1. tuples built from coordinates and pairwise coordinate products for the
///    `f`s and coordinates for the `g`s (capped at a fixed count),
/// 2. `L_X L = 0` for the Hamiltonian field of every structured `f` tuple,
/// 3. `trials` random polynomial tuples, trial `t` seeded with `seed + t`.
pub fn validate_nambu(s: &NambuStructure, cfg: &SamplingConfig) -> VerificationReport {
    let chart = s.chart();
    let n = s.dimension();
    let p = s.order();
    let coords = chart.coordinates();
    let mut generators = coords.clone();
    for i in 0..n {
        for j in i..n {
            generators.push(&coords[i] * &coords[j]);
        }
    }
    let f_tuples = combinations(&generators, p - 1, MAX_STRUCTURED_TUPLES);
    let g_tuples = combinations(&coords, p, MAX_STRUCTURED_TUPLES);
    let structured: Vec<(&Vec<Polynomial>, &Vec<Polynomial>)> = f_tuples
        .iter()
        .flat_map(|fs| g_tuples.iter().map(move |gs| (fs, gs)))
        .take(MAX_STRUCTURED_TUPLES)
        .collect();

    let fi_violation = |trial: usize, check: &str, fs: &[Polynomial], gs: &[Polynomial]| {
        let defect = match check_fundamental_identity(s, fs, gs) {
            Ok(d) if d.is_zero() => return None,
            Ok(d) => chart.render(&d),
            Err(e) => e.to_string(),
        };
        Some(Violation {
            trial,
            check: check.into(),
            inputs: tuple_inputs(chart, fs, gs),
            defect,
        })
    };

    let mut violations: Vec<Violation> = structured
        .par_iter()
        .enumerate()
        .filter_map(|(t, (fs, gs))| fi_violation(t, "fi-structured", fs, gs))
        .collect();

    violations.extend(
        f_tuples
            .par_iter()
            .enumerate()
            .filter_map(|(t, fs)| {
                let defect = match hamiltonian_field(s, fs)
                    .and_then(|x| lie_derivative_multivector(&x, s.lambda()))
                {
                    Ok(d) if d.is_zero() => return None,
                    Ok(d) => d.render(),
                    Err(e) => e.to_string(),
                };
                Some(Violation {
                    trial: t,
                    check: "hamiltonian-invariance".into(),
                    inputs: tuple_inputs(chart, fs, &[]),
                    defect,
                })
            })
            .collect::<Vec<_>>(),
    );

    violations.extend(
        (0..cfg.trials)
            .into_par_iter()
            .filter_map(|t| {
                let mut rng = trial_rng(cfg.seed, t);
                let mut draw = || sample_polynomial(&mut rng, n, cfg.max_degree, cfg.max_abs_coeff);
                let fs: Vec<Polynomial> = (0..p - 1).map(|_| draw()).collect();
                let gs: Vec<Polynomial> = (0..p).map(|_| draw()).collect();
                fi_violation(t, "fi-random", &fs, &gs)
            })
            .collect::<Vec<_>>(),
    );

    VerificationReport::new(
        "fundamental-identity",
        s.describe(),
        "-",
        cfg.trials,
        cfg.seed,
        violations,
    )
    .with_note(format!(
        "sampled check: {} structured tuples, {} Hamiltonian fields, {} random tuples; \
         an empty violation list does not prove the identity",
        structured.len(),
        f_tuples.len(),
        cfg.trials
    ))
}
