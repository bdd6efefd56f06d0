use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use super::{Chart, MultiIndex};
use crate::error::{Error, Result};
use crate::ring::{sample_polynomial, Polynomial, Rational};

/// Marker distinguishing forms from multivector fields.
pub trait Variance: Debug + Clone + PartialEq + Eq + Hash + Send + Sync + 'static {
    /// Basis token prefix in the text format.
    const BASIS: &'static str;
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Covariant;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Contravariant;

impl Variance for Covariant {
    const BASIS: &'static str = "dx";
}

impl Variance for Contravariant {
    const BASIS: &'static str = "e";
}

/// Homogeneous alternating tensor field of fixed degree with polynomial
/// coefficients, stored on strictly increasing multi-indices only.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alternating<V: Variance> {
    chart: Arc<Chart>,
    degree: usize,
    components: BTreeMap<MultiIndex, Polynomial>,
    _variance: PhantomData<V>,
}

pub type DifferentialForm = Alternating<Covariant>;
pub type MultivectorField = Alternating<Contravariant>;

impl<V: Variance> Alternating<V> {
    pub fn zero(chart: Arc<Chart>, degree: usize) -> Result<Self> {
        if degree > chart.dimension() {
            return Err(Error::DegreeOverflow {
                degree,
                dimension: chart.dimension(),
            });
        }
        Ok(Self::empty(chart, degree))
    }

    /// Zero tensor without the degree check; degrees above the dimension
    /// only ever hold the zero tensor.
    pub(crate) fn empty(chart: Arc<Chart>, degree: usize) -> Self {
        Alternating {
            chart,
            degree,
            components: BTreeMap::new(),
            _variance: PhantomData,
        }
    }

    /// Builds a tensor from coefficients on arbitrary (possibly unsorted,
    /// possibly repeated) index lists; permutations contribute their sign.
    pub fn from_components<I>(chart: Arc<Chart>, degree: usize, components: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Polynomial)>,
    {
        let mut out = Self::zero(chart, degree)?;
        let n = out.chart.dimension();
        for (indices, coeff) in components {
            if indices.len() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: indices.len(),
                });
            }
            if indices.iter().any(|&i| i >= n) {
                return Err(Error::InvalidMultiIndex {
                    indices,
                    dimension: n,
                });
            }
            if coeff.nvars() != n {
                return Err(Error::ChartMismatch);
            }
            if let Some((sign, idx)) = MultiIndex::normalize(&indices) {
                let c = if sign < 0 { -coeff } else { coeff };
                out.accumulate(idx, &c);
            }
        }
        Ok(out)
    }

    /// Degree-0 tensor holding a function.
    pub fn scalar(chart: Arc<Chart>, f: Polynomial) -> Result<Self> {
        Self::from_components(chart, 0, [(Vec::new(), f)])
    }

    /// Unit basis element `dx^I` / `e_I` from an arbitrary index list.
    pub fn basis(chart: Arc<Chart>, indices: &[usize]) -> Result<Self> {
        let one = Polynomial::one(chart.dimension());
        Self::from_components(chart, indices.len(), [(indices.to_vec(), one)])
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dimension(&self) -> usize {
        self.chart.dimension()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&MultiIndex, &Polynomial)> {
        self.components.iter()
    }

    pub fn component(&self, idx: &MultiIndex) -> Option<&Polynomial> {
        self.components.get(idx)
    }

    /// Coefficient on `idx`, zero when absent.
    pub fn coefficient(&self, idx: &MultiIndex) -> Polynomial {
        self.components
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.dimension()))
    }

    /// The function carried by a degree-0 tensor.
    pub fn as_scalar(&self) -> Result<Polynomial> {
        if self.degree != 0 {
            return Err(Error::DegreeMismatch {
                expected: 0,
                found: self.degree,
            });
        }
        Ok(self.coefficient(&MultiIndex::empty()))
    }

    pub(crate) fn accumulate(&mut self, idx: MultiIndex, c: &Polynomial) {
        if c.is_zero() {
            return;
        }
        match self.components.get_mut(&idx) {
            Some(entry) => {
                *entry += c;
                if entry.is_zero() {
                    self.components.remove(&idx);
                }
            }
            None => {
                self.components.insert(idx, c.clone());
            }
        }
    }

    pub fn same_chart<W: Variance>(&self, other: &Alternating<W>) -> Result<()> {
        if Arc::ptr_eq(&self.chart, &other.chart) || *self.chart == *other.chart {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    pub(crate) fn check_poly(&self, f: &Polynomial) -> Result<()> {
        if f.nvars() != self.dimension() {
            return Err(Error::ChartMismatch);
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.same_chart(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.components {
            out.accumulate(idx.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.components {
            out.accumulate(idx.clone(), &-c);
        }
        Ok(out)
    }

    /// Pointwise multiplication by a function.
    pub fn mul_function(&self, f: &Polynomial) -> Result<Self> {
        self.check_poly(f)?;
        Ok(self.map_coefficients(|c| c * f))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map_coefficients(|c| c.scale(r))
    }

    pub(crate) fn map_coefficients(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        let mut out = Self::empty(self.chart.clone(), self.degree);
        for (idx, c) in &self.components {
            let v = f(c);
            if !v.is_zero() {
                out.components.insert(idx.clone(), v);
            }
        }
        out
    }

    /// Canonical text: `(coef)*dx1^dx2 + ...` in multi-index order.
    ///
    /// Zero renders as `(0)` in degree 0 and as `(0)*dx1^...^dxk` otherwise,
    /// so that the degree survives a round trip.
    pub fn render(&self) -> String {
        let basis = V::BASIS;
        if self.components.is_empty() {
            if self.degree == 0 || self.degree > self.dimension() {
                return "(0)".into();
            }
            let idx = MultiIndex((0..self.degree).collect());
            return format!("(0)*{}", idx.render(basis));
        }
        self.components
            .iter()
            .map(|(idx, c)| {
                let coeff = self.chart.render(c);
                if idx.is_empty() {
                    format!("({coeff})")
                } else {
                    format!("({coeff})*{}", idx.render(basis))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl DifferentialForm {
    /// `dx_i` (0-based).
    pub fn dx(chart: Arc<Chart>, i: usize) -> Result<Self> {
        Self::basis(chart, &[i])
    }
}

impl MultivectorField {
    /// Coordinate vector field `e_i` (0-based).
    pub fn e(chart: Arc<Chart>, i: usize) -> Result<Self> {
        Self::basis(chart, &[i])
    }

    /// Vector field from its component functions.
    pub fn vector(chart: Arc<Chart>, components: Vec<Polynomial>) -> Result<Self> {
        if components.len() != chart.dimension() {
            return Err(Error::Arity {
                expected: chart.dimension(),
                found: components.len(),
            });
        }
        Self::from_components(
            chart,
            1,
            components
                .into_iter()
                .enumerate()
                .map(|(i, c)| (vec![i], c)),
        )
    }

    /// Applies a vector field to a function: `sum_i X^i d_i f`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        if self.degree != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: self.degree,
            });
        }
        self.check_poly(f)?;
        let mut out = Polynomial::zero(self.dimension());
        for (idx, c) in &self.components {
            out += &(c * &f.partial(idx.indices()[0])?);
        }
        Ok(out)
    }

    /// Component `X^i` of a vector field.
    pub fn vector_component(&self, i: usize) -> Polynomial {
        self.coefficient(&MultiIndex(vec![i]))
    }
}

impl<V: Variance> Add for &Alternating<V> {
    type Output = Alternating<V>;
    fn add(self, rhs: &Alternating<V>) -> Alternating<V> {
        self.try_add(rhs).expect("incompatible tensors")
    }
}

impl<V: Variance> Sub for &Alternating<V> {
    type Output = Alternating<V>;
    fn sub(self, rhs: &Alternating<V>) -> Alternating<V> {
        self.try_sub(rhs).expect("incompatible tensors")
    }
}

impl<V: Variance> Neg for &Alternating<V> {
    type Output = Alternating<V>;
    fn neg(self) -> Alternating<V> {
        self.map_coefficients(|c| -c)
    }
}

/// Random tensor with a dense random polynomial on every basis element, in
/// multi-index order.
pub fn sample_tensor<V: Variance, R: Rng + ?Sized>(
    rng: &mut R,
    chart: &Arc<Chart>,
    degree: usize,
    max_degree: u32,
    max_abs_coeff: u32,
) -> Result<Alternating<V>> {
    let n = chart.dimension();
    let mut out = Alternating::zero(chart.clone(), degree)?;
    for idx in MultiIndex::all(n, degree) {
        let c = sample_polynomial(rng, n, max_degree, max_abs_coeff);
        out.accumulate(idx, &c);
    }
    Ok(out)
}
