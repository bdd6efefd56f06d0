//! Differential operators on forms and multivector fields, and Nambu
//! structures built on top of them.

mod nambu;

use crate::error::{Error, Result};
use crate::exterior::{interior_product, DifferentialForm, MultiIndex, MultivectorField};
use crate::ring::Polynomial;

pub use nambu::{
    check_fundamental_identity, hamiltonian_field, nambu_bracket, validate_nambu, NambuStructure,
    SamplingConfig,
};

/// `d(f dx^I) = sum_i (d_i f) dx^i ^ dx^I`.
///
/// A top-degree form has no exterior derivative of representable degree;
/// that case is `DegreeOverflow`.
pub fn exterior_derivative(w: &DifferentialForm) -> Result<DifferentialForm> {
    let n = w.dimension();
    if w.degree() >= n {
        return Err(Error::DegreeOverflow {
            degree: w.degree() + 1,
            dimension: n,
        });
    }
    let mut out = DifferentialForm::zero(w.chart().clone(), w.degree() + 1)?;
    let mut joined = Vec::with_capacity(w.degree() + 1);
    for (idx, f) in w.components() {
        for i in 0..n {
            joined.clear();
            joined.push(i);
            joined.extend_from_slice(idx.indices());
            let Some((sign, target)) = MultiIndex::normalize(&joined) else {
                continue;
            };
            let df = f.partial(i)?;
            out.accumulate(target, &if sign < 0 { -df } else { df });
        }
    }
    Ok(out)
}

fn require_vector(x: &MultivectorField) -> Result<()> {
    if x.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: x.degree(),
        });
    }
    Ok(())
}

/// Lie derivative of a form via Cartan's formula `L_X = d i_X + i_X d`.
/// On functions it is `X(f)`; on top-degree forms the `i_X d` term vanishes.
pub fn lie_derivative_form(x: &MultivectorField, w: &DifferentialForm) -> Result<DifferentialForm> {
    require_vector(x)?;
    x.same_chart(w)?;
    if w.degree() == 0 {
        let f = x.apply(&w.as_scalar()?)?;
        return DifferentialForm::scalar(w.chart().clone(), f);
    }
    let mut out = exterior_derivative(&interior_product(x, w)?)?;
    if w.degree() < w.dimension() {
        out = out.try_add(&interior_product(x, &exterior_derivative(w)?)?)?;
    }
    Ok(out)
}

/// `[X, Y]^j = sum_i (X^i d_i Y^j - Y^i d_i X^j)`.
pub fn vf_commutator(x: &MultivectorField, y: &MultivectorField) -> Result<MultivectorField> {
    require_vector(x)?;
    require_vector(y)?;
    x.same_chart(y)?;
    let n = x.dimension();
    let comps = (0..n)
        .map(|j| {
            let c = &x.apply(&y.vector_component(j))? - &y.apply(&x.vector_component(j))?;
            Ok(c)
        })
        .collect::<Result<Vec<Polynomial>>>()?;
    MultivectorField::vector(x.chart().clone(), comps)
}

/// Lie derivative of a multivector field, extending the commutator as a
/// degree-0 derivation of the wedge algebra:
/// `L_X(f e_I) = X(f) e_I + f sum_j e_{i1} ^ .. [X, e_ij] .. ^ e_ik`,
/// where `[X, e_i] = -sum_m (d_i X^m) e_m`.
pub fn lie_derivative_multivector(
    x: &MultivectorField,
    p: &MultivectorField,
) -> Result<MultivectorField> {
    require_vector(x)?;
    x.same_chart(p)?;
    let n = p.dimension();
    let mut out = MultivectorField::zero(p.chart().clone(), p.degree())?;
    let mut replaced = Vec::with_capacity(p.degree());
    for (idx, f) in p.components() {
        out.accumulate(idx.clone(), &x.apply(f)?);
        for (slot, &i) in idx.indices().iter().enumerate() {
            for m in 0..n {
                let dxm = x.vector_component(m).partial(i)?;
                if dxm.is_zero() {
                    continue;
                }
                replaced.clear();
                replaced.extend_from_slice(idx.indices());
                replaced[slot] = m;
                let Some((sign, target)) = MultiIndex::normalize(&replaced) else {
                    continue;
                };
                let c = f * &dxm;
                // leading minus from [X, e_i]
                out.accumulate(target, &if sign < 0 { c } else { -c });
            }
        }
    }
    Ok(out)
}
