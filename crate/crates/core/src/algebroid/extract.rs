use std::sync::Arc;

use super::{check_section, LeibnizBracket, Section};
use crate::error::{Error, Result};
use crate::exterior::{Chart, DifferentialForm, MultiIndex, MultivectorField};
use crate::ring::{Polynomial, RingError};

/// Anchor of a section recovered from the bracket alone: the vector field
/// `sum_i action[i] e_i` whose action on `x_i` is `action[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractedAnchor {
    source: Section,
    action: Vec<Polynomial>,
}

impl ExtractedAnchor {
    pub fn source(&self) -> &Section {
        &self.source
    }

    /// Value of the anchor on each coordinate function.
    pub fn action(&self) -> &[Polynomial] {
        &self.action
    }

    pub fn vector_field(&self) -> MultivectorField {
        MultivectorField::vector(self.source.chart().clone(), self.action.clone())
            .expect("one component per coordinate")
    }

    /// `sum_i action[i] d_i h`.
    pub fn apply(&self, h: &Polynomial) -> Result<Polynomial> {
        self.vector_field().apply(h)
    }
}

fn failure(
    chart: &Chart,
    f: &Polynomial,
    probe: &Section,
    component: &MultiIndex,
    reason: &str,
) -> Error {
    Error::ExtractionFailure {
        function: chart.render(f),
        probe: probe.render(),
        component: component.render("dx"),
        reason: reason.into(),
    }
}

/// The scalar `g` with `r = g y`, probing `y`'s first nonzero component.
fn scalar_multiple(chart: &Chart, f: &Polynomial, r: &Section, y: &Section) -> Result<Polynomial> {
    let (lead_idx, lead) = y.components().next().expect("probe sections are nonzero");
    let g = match r.coefficient(lead_idx).exact_div(lead) {
        Ok(g) => g,
        Err(RingError::NotDivisible) => {
            return Err(failure(
                chart,
                f,
                y,
                lead_idx,
                "residual component not divisible by probe component",
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let expected = y.mul_function(&g)?;
    if let Some(idx) = MultiIndex::all(y.dimension(), y.degree())
        .into_iter()
        .find(|idx| r.coefficient(idx) != expected.coefficient(idx))
    {
        return Err(failure(
            chart,
            f,
            y,
            &idx,
            "residual is not a scalar multiple of the probe",
        ));
    }
    Ok(g)
}

/// Evaluates the transformation defined by `(a(X) f) Y = [[X, f Y]] - f [[X, Y]]`
/// on `f`, probing every basis section `Y = dx^I`. The quotient must be the
/// same polynomial for every probe; otherwise the bracket admits no anchor
/// and an `ExtractionFailure` names the offending probe and component.
pub fn relation_scalar<B: LeibnizBracket + ?Sized>(
    br: &B,
    a: &Section,
    f: &Polynomial,
) -> Result<Polynomial> {
    let s = br.structure();
    check_section(s, a)?;
    let chart: &Arc<Chart> = s.chart();
    let mut common: Option<Polynomial> = None;
    for probe in MultiIndex::all(s.dimension(), s.order() - 1) {
        let y = DifferentialForm::basis(chart.clone(), probe.indices())?;
        let fy = y.mul_function(f)?;
        let r = br
            .bracket(a, &fy)?
            .try_sub(&br.bracket(a, &y)?.mul_function(f)?)?;
        let g = scalar_multiple(chart, f, &r, &y)?;
        match &common {
            None => common = Some(g),
            Some(prev) if *prev == g => {}
            Some(_) => {
                return Err(failure(
                    chart,
                    f,
                    &y,
                    &probe,
                    "quotient differs across probe sections",
                ));
            }
        }
    }
    Ok(common.unwrap_or_else(|| Polynomial::zero(s.dimension())))
}

/// Recovers the anchor of `a` from the bracket by evaluating the defining
/// relation on every coordinate function. Never consults `i(a) L`.
pub fn derive_anchor<B: LeibnizBracket + ?Sized>(br: &B, a: &Section) -> Result<ExtractedAnchor> {
    let coords = br.structure().chart().coordinates();
    let action = coords
        .iter()
        .map(|x| relation_scalar(br, a, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExtractedAnchor {
        source: a.clone(),
        action,
    })
}
