use smallvec::SmallVec;

/// Exponent vector `[e0, e1, ...]` standing for `x0^e0 * x1^e1 * ...`.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// vectors compared lexicographically (so `x0` outranks `x1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    // field order gives the derived graded-lex comparison
    degree: u32,
    exps: SmallVec<[u32; 6]>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial {
            degree: exponents.iter().sum(),
            exps: SmallVec::from_vec(exponents),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial::new(vec![0; nvars])
    }

    /// `x_i`; panics if `i >= nvars`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial::new(exps)
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn total_degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            degree: self.degree + other.degree,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<SmallVec<_>>>()?;
        Some(Monomial {
            degree: self.degree - other.degree,
            exps,
        })
    }

    /// Lowers the exponent of `x_i` by one, returning the old exponent.
    pub(crate) fn lower(&self, i: usize) -> Option<(u32, Monomial)> {
        let e = self.exps[i];
        if e == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[i] -= 1;
        Some((
            e,
            Monomial {
                degree: self.degree - 1,
                exps,
            },
        ))
    }
}

/// Every monomial in `nvars` variables of total degree at most `max_degree`,
/// in ascending graded-lex order.
pub fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<Monomial> {
    fn fill(prefix: &mut Vec<u32>, remaining_vars: usize, budget: u32, out: &mut Vec<Monomial>) {
        if remaining_vars == 0 {
            out.push(Monomial::new(prefix.clone()));
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            fill(prefix, remaining_vars - 1, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(&mut Vec::with_capacity(nvars), nvars, max_degree, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let x2 = Monomial::new(vec![2, 0]);
        let xy = Monomial::new(vec![1, 1]);
        let y2 = Monomial::new(vec![0, 2]);
        let x = Monomial::new(vec![1, 0]);
        let one = Monomial::one(2);
        assert!(one < x);
        assert!(x < y2);
        assert!(y2 < xy);
        assert!(xy < x2);
    }

    #[test]
    fn enumerate_counts() {
        // C(n + d, d)
        assert_eq!(monomials_up_to(3, 2).len(), 10);
        assert_eq!(monomials_up_to(6, 2).len(), 28);
        assert_eq!(monomials_up_to(2, 0), vec![Monomial::one(2)]);
        let ms = monomials_up_to(2, 3);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn divide() {
        let a = Monomial::new(vec![2, 1]);
        let b = Monomial::new(vec![1, 1]);
        assert_eq!(a.div(&b), Some(Monomial::new(vec![1, 0])));
        assert_eq!(b.div(&a), None);
    }
}
