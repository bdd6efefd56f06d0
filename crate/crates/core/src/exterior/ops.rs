use super::{Alternating, DifferentialForm, MultiIndex, MultivectorField, Variance};
use crate::error::{Error, Result};
use crate::ring::Polynomial;

/// Alternating product. Degrees beyond the dimension yield the zero tensor of
/// that degree.
pub fn wedge<V: Variance>(a: &Alternating<V>, b: &Alternating<V>) -> Result<Alternating<V>> {
    a.same_chart(b)?;
    let mut out = Alternating::empty(a.chart().clone(), a.degree() + b.degree());
    if out.degree() > a.dimension() {
        return Ok(out);
    }
    let mut joined = Vec::with_capacity(out.degree());
    for (ia, ca) in a.components() {
        for (ib, cb) in b.components() {
            joined.clear();
            joined.extend_from_slice(ia.indices());
            joined.extend_from_slice(ib.indices());
            if let Some((sign, idx)) = MultiIndex::normalize(&joined) {
                let c = ca * cb;
                out.accumulate(idx, &if sign < 0 { -c } else { c });
            }
        }
    }
    Ok(out)
}

/// Full contraction `<P, w>` of a multivector and a form of equal degree.
pub fn pairing(p: &MultivectorField, w: &DifferentialForm) -> Result<Polynomial> {
    p.same_chart(w)?;
    if p.degree() != w.degree() {
        return Err(Error::DegreeMismatch {
            expected: p.degree(),
            found: w.degree(),
        });
    }
    let mut out = Polynomial::zero(p.dimension());
    for (idx, c) in p.components() {
        if let Some(d) = w.component(idx) {
            out += &(c * d);
        }
    }
    Ok(out)
}

/// `i(b) P`: the multivector of degree `deg P - deg b` characterized by
/// `<i(b) P, g> = <P, b ^ g>` for all forms `g`.
///
/// On basis elements `i(dx^J) e_I = sign(J, I\J) e_{I\J}` when `J` is a subset
/// of `I`, and zero otherwise.
pub fn contract_form_into_multivector(
    b: &DifferentialForm,
    p: &MultivectorField,
) -> Result<MultivectorField> {
    b.same_chart(p)?;
    if b.degree() > p.degree() {
        return Err(Error::DegreeMismatch {
            expected: p.degree(),
            found: b.degree(),
        });
    }
    let mut out = MultivectorField::empty(p.chart().clone(), p.degree() - b.degree());
    let mut joined = Vec::with_capacity(p.degree());
    for (j, cb) in b.components() {
        for (i, cp) in p.components() {
            let Some(rest) = i.minus(j) else { continue };
            joined.clear();
            joined.extend_from_slice(j.indices());
            joined.extend_from_slice(rest.indices());
            let (sign, _) = MultiIndex::normalize(&joined).expect("disjoint indices");
            let c = cb * cp;
            out.accumulate(rest, &if sign < 0 { -c } else { c });
        }
    }
    Ok(out)
}

/// Interior product `i_X w` of a vector field into a form of degree >= 1:
/// `i_X (dx^{i1} ^ ... ^ dx^{ik}) = sum_j (-1)^(j-1) X^{ij} dx^{i1} ^ .. omit j .. ^ dx^{ik}`.
pub fn interior_product(x: &MultivectorField, w: &DifferentialForm) -> Result<DifferentialForm> {
    x.same_chart(w)?;
    if x.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: x.degree(),
        });
    }
    if w.degree() == 0 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: 0,
        });
    }
    let mut out = DifferentialForm::empty(w.chart().clone(), w.degree() - 1);
    for (xi, cx) in x.components() {
        let i = xi.indices()[0];
        for (idx, cw) in w.components() {
            let Some(pos) = idx.position(i) else { continue };
            let c = cx * cw;
            out.accumulate(
                idx.without_position(pos),
                &if pos % 2 == 1 { -c } else { c },
            );
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::exterior::{sample_tensor, Chart};

    fn chart(n: usize) -> Arc<Chart> {
        Arc::new(Chart::standard(n).unwrap())
    }

    fn dx(c: &Arc<Chart>, idx: &[usize]) -> DifferentialForm {
        DifferentialForm::basis(c.clone(), idx).unwrap()
    }

    fn e(c: &Arc<Chart>, idx: &[usize]) -> MultivectorField {
        MultivectorField::basis(c.clone(), idx).unwrap()
    }

    /// Independent route to `i(b) P`: solve the defining pairing condition
    /// against every basis form of the complementary degree.
    fn contraction_oracle(b: &DifferentialForm, p: &MultivectorField) -> MultivectorField {
        let c = p.chart().clone();
        let k = p.degree() - b.degree();
        let comps = MultiIndex::all(c.dimension(), k)
            .into_iter()
            .map(|idx| {
                let g = dx(&c, idx.indices());
                (
                    idx.indices().to_vec(),
                    pairing(p, &wedge(b, &g).unwrap()).unwrap(),
                )
            })
            .collect::<Vec<_>>();
        MultivectorField::from_components(c, k, comps).unwrap()
    }

    /// Independent route to `i_X w`: the coefficient of `dx^K` is
    /// `<X ^ e_K, w>` (insert X in the first slot).
    fn interior_oracle(x: &MultivectorField, w: &DifferentialForm) -> DifferentialForm {
        let c = w.chart().clone();
        let k = w.degree() - 1;
        let comps = MultiIndex::all(c.dimension(), k)
            .into_iter()
            .map(|idx| {
                let ek = e(&c, idx.indices());
                (
                    idx.indices().to_vec(),
                    pairing(&wedge(x, &ek).unwrap(), w).unwrap(),
                )
            })
            .collect::<Vec<_>>();
        DifferentialForm::from_components(c, k, comps).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let c = chart(3);
        assert_eq!(
            wedge(&dx(&c, &[0]), &dx(&c, &[1])).unwrap(),
            -&wedge(&dx(&c, &[1]), &dx(&c, &[0])).unwrap()
        );
        let x = c.coordinate(0).unwrap();
        let lhs = wedge(&dx(&c, &[0]).mul_function(&x).unwrap(), &dx(&c, &[1, 2])).unwrap();
        assert_eq!(lhs, dx(&c, &[0, 1, 2]).mul_function(&x).unwrap());
        let zero = wedge(&dx(&c, &[0]), &dx(&c, &[0])).unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.degree(), 2);
    }

    #[test]
    fn wedge_multivector_examples() {
        let c = chart(3);
        assert_eq!(
            wedge(&e(&c, &[0]), &e(&c, &[1])).unwrap(),
            -&wedge(&e(&c, &[1]), &e(&c, &[0])).unwrap()
        );
        assert!(wedge(&e(&c, &[0]), &e(&c, &[0])).unwrap().is_zero());
        let x1 = c.coordinate(0).unwrap();
        let p = wedge(
            &wedge(&e(&c, &[0]).mul_function(&x1).unwrap(), &e(&c, &[1])).unwrap(),
            &e(&c, &[2]),
        )
        .unwrap();
        assert_eq!(p, e(&c, &[0, 1, 2]).mul_function(&x1).unwrap());
    }

    #[test]
    fn wedge_past_top_degree_is_zero() {
        let c = chart(2);
        let w = wedge(&dx(&c, &[0, 1]), &dx(&c, &[0])).unwrap();
        assert!(w.is_zero());
        assert_eq!(w.degree(), 3);
    }

    #[test]
    fn pairing_examples() {
        let c3 = chart(3);
        assert!(pairing(&e(&c3, &[0, 1, 2]), &dx(&c3, &[0, 1, 2]))
            .unwrap()
            .is_one());
        let c4 = chart(4);
        assert!(pairing(&e(&c4, &[0, 1, 2]), &dx(&c4, &[0, 1, 3]))
            .unwrap()
            .is_zero());
        let x = c3.coordinate(0).unwrap();
        let p = e(&c3, &[0, 1]).mul_function(&x).unwrap();
        assert_eq!(pairing(&p, &dx(&c3, &[0, 1])).unwrap(), x);
        assert!(matches!(
            pairing(&e(&c3, &[0]), &dx(&c3, &[0, 1])),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn contraction_examples() {
        let c = chart(3);
        let top = e(&c, &[0, 1, 2]);
        let cases = [
            (&[0usize, 1][..], e(&c, &[2])),
            (&[1, 2][..], e(&c, &[0])),
            (&[0, 2][..], -&e(&c, &[1])),
        ];
        for (beta, expected) in cases {
            let b = dx(&c, beta);
            assert_eq!(contraction_oracle(&b, &top), expected);
            assert_eq!(contract_form_into_multivector(&b, &top).unwrap(), expected);
        }
        assert!(matches!(
            contract_form_into_multivector(&dx(&c, &[0, 1]), &e(&c, &[0])),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn interior_examples() {
        let c = chart(2);
        let area = dx(&c, &[0, 1]);
        assert_eq!(interior_oracle(&e(&c, &[1]), &area), -&dx(&c, &[0]));
        assert_eq!(
            interior_product(&e(&c, &[1]), &area).unwrap(),
            -&dx(&c, &[0])
        );
        assert_eq!(interior_product(&e(&c, &[0]), &area).unwrap(), dx(&c, &[1]));
        let f = DifferentialForm::scalar(c.clone(), Polynomial::one(2)).unwrap();
        assert!(interior_product(&e(&c, &[0]), &f).is_err());
    }

    #[test]
    fn interior_matches_contraction_on_basis() {
        // <i(dx^j) e_I, dx^K> == <e_K, i_{e_j} dx^I>
        let n = 4;
        let c = chart(n);
        for k in 1..=n {
            for i in MultiIndex::all(n, k) {
                for j in 0..n {
                    let lhs_mv =
                        contract_form_into_multivector(&dx(&c, &[j]), &e(&c, i.indices())).unwrap();
                    let rhs_form = interior_product(&e(&c, &[j]), &dx(&c, i.indices())).unwrap();
                    for kk in MultiIndex::all(n, k - 1) {
                        let lhs = pairing(&lhs_mv, &dx(&c, kk.indices())).unwrap();
                        let rhs = pairing(&e(&c, kk.indices()), &rhs_form).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    fn form(rng: &mut ChaCha8Rng, c: &Arc<Chart>, k: usize) -> DifferentialForm {
        sample_tensor(rng, c, k, 2, 3).unwrap()
    }

    fn multivector(rng: &mut ChaCha8Rng, c: &Arc<Chart>, k: usize) -> MultivectorField {
        sample_tensor(rng, c, k, 2, 3).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn graded_commutativity(seed in any::<u64>(), p in 0usize..=2, q in 0usize..=2) {
            let c = chart(4);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = form(&mut rng, &c, p);
            let b = form(&mut rng, &c, q);
            let ab = wedge(&a, &b).unwrap();
            let ba = wedge(&b, &a).unwrap();
            prop_assert_eq!(ab, if (p * q) % 2 == 1 { -&ba } else { ba });
        }

        #[test]
        fn wedge_associative(seed in any::<u64>()) {
            let c = chart(4);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = form(&mut rng, &c, 1);
            let b = form(&mut rng, &c, 1);
            let d = form(&mut rng, &c, 2);
            prop_assert_eq!(
                wedge(&wedge(&a, &b).unwrap(), &d).unwrap(),
                wedge(&a, &wedge(&b, &d).unwrap()).unwrap()
            );
        }

        #[test]
        fn interior_is_antiderivation(seed in any::<u64>(), p in 1usize..=2, q in 1usize..=2) {
            let c = chart(4);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = multivector(&mut rng, &c, 1);
            let a = form(&mut rng, &c, p);
            let b = form(&mut rng, &c, q);
            let lhs = interior_product(&x, &wedge(&a, &b).unwrap()).unwrap();
            let first = wedge(&interior_product(&x, &a).unwrap(), &b).unwrap();
            let second = wedge(&a, &interior_product(&x, &b).unwrap()).unwrap();
            let rhs = if p % 2 == 0 { &first + &second } else { &first - &second };
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn interior_squares_to_zero(seed in any::<u64>(), k in 2usize..=3) {
            let c = chart(4);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = multivector(&mut rng, &c, 1);
            let w = form(&mut rng, &c, k);
            let twice = interior_product(&x, &interior_product(&x, &w).unwrap()).unwrap();
            prop_assert!(twice.is_zero());
        }

        #[test]
        fn contraction_adjunction(seed in any::<u64>(), r in 0usize..=2, s in 0usize..=2) {
            let c = chart(4);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = form(&mut rng, &c, r);
            let g = form(&mut rng, &c, s);
            let p = multivector(&mut rng, &c, r + s);
            let lhs = pairing(&contract_form_into_multivector(&b, &p).unwrap(), &g).unwrap();
            let rhs = pairing(&p, &wedge(&b, &g).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
