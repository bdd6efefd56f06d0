//! Alternating algebra over a polynomial chart.
//!
//! Forms and multivector fields share one representation: a map from strictly
//! increasing multi-indices to polynomial coefficients. Any permutation of a
//! basis element is normalized on construction with its parity sign, so two
//! tensors are equal exactly when their component maps are equal.
//!
//! Conventions used throughout the crate:
//! - `<e_I, dx^J> = delta_IJ` on strictly increasing multi-indices, without
//!   factorial weights.
//! - `i(b) P` for a form `b` and multivector `P` is defined by
//!   `<i(b) P, g> = <P, b ^ g>`, with `b` leftmost.

mod ops;
mod tensor;

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::Polynomial;

pub use ops::{contract_form_into_multivector, interior_product, pairing, wedge};
pub use tensor::{
    sample_tensor, Alternating, Contravariant, Covariant, DifferentialForm, MultivectorField,
    Variance,
};

/// A single global coordinate chart.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    names: Vec<String>,
}

impl Chart {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidChart("dimension must be at least 1".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::InvalidChart(format!(
                    "duplicate coordinate `{name}`"
                )));
            }
        }
        Ok(Chart { names })
    }

    /// Coordinates `x1, ..., xn`.
    pub fn standard(dimension: usize) -> Result<Self> {
        Self::new((1..=dimension).map(|i| format!("x{i}")))
    }

    pub fn dimension(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The coordinate function `x_i` (0-based).
    pub fn coordinate(&self, i: usize) -> Result<Polynomial> {
        Ok(Polynomial::var(self.dimension(), i)?)
    }

    pub fn coordinates(&self) -> Vec<Polynomial> {
        (0..self.dimension())
            .map(|i| Polynomial::var(self.dimension(), i).expect("index in range"))
            .collect()
    }

    pub fn render(&self, p: &Polynomial) -> String {
        p.render(&self.names)
    }
}

/// Strictly increasing list of 0-based coordinate indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>, dimension: usize) -> Result<Self> {
        let increasing = indices.windows(2).all(|w| w[0] < w[1]);
        if !increasing || indices.iter().any(|&i| i >= dimension) {
            return Err(Error::InvalidMultiIndex { indices, dimension });
        }
        Ok(MultiIndex(indices))
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    /// Sorts an arbitrary index list, returning the permutation sign.
    /// `None` when an index repeats (the wedge vanishes).
    pub fn normalize(indices: &[usize]) -> Option<(i8, MultiIndex)> {
        let mut v = indices.to_vec();
        let mut sign = 1i8;
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((sign, MultiIndex(v)))
    }

    /// All multi-indices of length `k` in `0..dimension`, lexicographic.
    pub fn all(dimension: usize, k: usize) -> Vec<MultiIndex> {
        fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if cur.len() == k {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for i in start..n {
                cur.push(i);
                go(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if k <= dimension {
            go(0, dimension, k, &mut Vec::with_capacity(k), &mut out);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn position(&self, i: usize) -> Option<usize> {
        self.0.binary_search(&i).ok()
    }

    pub fn without_position(&self, pos: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v.remove(pos);
        MultiIndex(v)
    }

    /// `self \ other` when `other` is a subset of `self`.
    pub fn minus(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !other.0.iter().all(|i| self.0.binary_search(i).is_ok()) {
            return None;
        }
        Some(MultiIndex(
            self.0
                .iter()
                .copied()
                .filter(|i| other.0.binary_search(i).is_err())
                .collect(),
        ))
    }

    /// Renders as `dx1^dx3` / `e1^e3` (1-based).
    pub fn render(&self, basis: &str) -> String {
        self.0
            .iter()
            .map(|i| format!("{basis}{}", i + 1))
            .collect::<Vec<_>>()
            .join("^")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", v.join(","))
    }
}
