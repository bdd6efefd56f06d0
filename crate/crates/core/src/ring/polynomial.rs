use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use malachite_base::num::arithmetic::traits::Abs;
use malachite_base::num::basic::traits::{One, Zero};

use super::{Monomial, Rational, RingError};

/// Sparse polynomial over the rationals in a fixed number of variables.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// polynomials. Terms iterate in ascending graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::ONE)
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if c != 0u32 {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn from_integer(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from(c))
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Result<Self, RingError> {
        if i >= nvars {
            return Err(RingError::IndexOutOfRange { index: i, nvars });
        }
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), Rational::ONE);
        Ok(p)
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, merging
    /// repeated monomials and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, RingError>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(RingError::DimensionMismatch {
                    left: nvars,
                    right: m.nvars(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && *c == 1u32)
    }

    /// The value of a constant polynomial, `None` otherwise.
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::ZERO),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or(Rational::ZERO)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c == 0u32 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0u32 {
                    e.remove();
                }
            }
        }
    }

    fn check_dims(&self, other: &Polynomial) -> Result<(), RingError> {
        if self.nvars != other.nvars {
            return Err(RingError::DimensionMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    fn add_scaled_terms(&mut self, other: &Polynomial, negate: bool) {
        for (m, c) in &other.terms {
            match self.terms.get_mut(m) {
                Some(v) => {
                    if negate {
                        *v -= c;
                    } else {
                        *v += c;
                    }
                    if *v == 0u32 {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms
                        .insert(m.clone(), if negate { -c.clone() } else { c.clone() });
                }
            }
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_dims(other)?;
        let mut out = self.clone();
        out.add_scaled_terms(other, false);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_dims(other)?;
        let mut out = self.clone();
        out.add_scaled_terms(other, true);
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_dims(other)?;
        // Sort (monomial, slot) keys once and merge runs; cheaper than
        // updating the map per product or moving coefficients while sorting.
        let count = self.terms.len() * other.terms.len();
        let mut keys: Vec<(Monomial, usize)> = Vec::with_capacity(count);
        let mut coeffs: Vec<Rational> = Vec::with_capacity(count);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                keys.push((ma.mul(mb), coeffs.len()));
                coeffs.push(ca * cb);
            }
        }
        keys.sort_unstable();
        let mut merged: Vec<(Monomial, Rational)> = Vec::new();
        for (m, slot) in keys {
            let c = std::mem::replace(&mut coeffs[slot], Rational::ZERO);
            match merged.last_mut() {
                Some((last, acc)) if *last == m => *acc += c,
                _ => {
                    if merged.last().is_some_and(|(_, acc)| *acc == 0u32) {
                        merged.pop();
                    }
                    merged.push((m, c));
                }
            }
        }
        if merged.last().is_some_and(|(_, acc)| *acc == 0u32) {
            merged.pop();
        }
        Ok(Polynomial {
            nvars: self.nvars,
            terms: merged.into_iter().collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if *c == 0u32 {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Result<Polynomial, RingError> {
        if i >= self.nvars {
            return Err(RingError::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.lower(i) {
                out.add_term(lowered, c * Rational::from(e));
            }
        }
        Ok(out)
    }

    /// Exact quotient `self / divisor`.
    ///
    /// Runs multivariate division by leading terms. Since graded lex is a
    /// monomial order, `divisor | self` implies every intermediate leading
    /// term is divisible by the divisor's leading term, so the first failure
    /// is a certificate of non-divisibility.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_dims(divisor)?;
        let (lead_m, lead_c) = divisor.leading_term().ok_or(RingError::DivisionByZero)?;
        let mut remainder = self.clone();
        let mut quotient = Polynomial::zero(self.nvars);
        while let Some((rm, rc)) = remainder.leading_term() {
            let m = rm.div(lead_m).ok_or(RingError::NotDivisible)?;
            let c = rc / lead_c;
            let mut step = Polynomial::zero(self.nvars);
            step.add_term(m, c);
            remainder -= &(&step * divisor);
            quotient += &step;
        }
        Ok(quotient)
    }

    /// Canonical text: terms in descending graded-lex order, explicit `*`
    /// and `^`, rationals as `a/b`. The zero polynomial renders as `0`.
    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = *c < 0u32;
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let abs = c.abs();
            let mono = render_monomial(m, names);
            match (mono.is_empty(), abs == 1u32) {
                (true, _) => out.push_str(&render_rational(&abs)),
                (false, true) => out.push_str(&mono),
                (false, false) => {
                    let _ = write!(out, "{}*{}", render_rational(&abs), mono);
                }
            }
        }
        out
    }
}

fn render_rational(r: &Rational) -> String {
    r.to_string()
}

fn render_monomial<S: AsRef<str>>(m: &Monomial, names: &[S]) -> String {
    let mut factors = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        let name = names.get(i).map(AsRef::as_ref).unwrap_or("?");
        match e {
            0 => {}
            1 => factors.push(name.to_string()),
            _ => factors.push(format!("{name}^{e}")),
        }
    }
    factors.join("*")
}

// Operator impls panic on dimension mismatch; use the `try_*` forms where the
// operands' dimensions are not already known to agree.

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial dimension mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial dimension mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial dimension mismatch")
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        assert_eq!(self.nvars, rhs.nvars, "polynomial dimension mismatch");
        self.add_scaled_terms(rhs, false);
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        assert_eq!(self.nvars, rhs.nvars, "polynomial dimension mismatch");
        self.add_scaled_terms(rhs, true);
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
