use proptest::prelude::*;
use ramif_core::algebra::{const_term, term, Field, Poly, TLaurent, Valuation, EXACT};

const F2: Field = Field::Prime(2);
const F3: Field = Field::Prime(3);

fn x_poly(field: Field, exps: &[u32], c: i64) -> Poly {
    Poly::monomial(field, exps.iter().copied().collect(), field.from_i64(c))
}

#[test]
fn geometric_inverse_to_precision_four() {
    // one variable standing for τ
    let f = Field::Rational;
    let u = const_term(f, 1, 1, 0).add(&term(f, &[1], 1, 1)).truncate(4);
    let inv = u.unit_inverse().unwrap();
    let mut expected = TLaurent::zero(f, 1, 4);
    for k in 0..4u32 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        expected.add_term(k as i64, &x_poly(f, &[k], sign));
    }
    assert_eq!(inv, expected);
    assert_eq!(inv.precision(), 4);
}

#[test]
fn inverse_powers_cancel() {
    let f = F3;
    assert_eq!(const_term(f, 0, 1, -1).mul(&const_term(f, 0, 1, 1)).unwrap(), TLaurent::one(f, 0));
}

#[test]
fn doubling_vanishes_in_characteristic_two() {
    let a = term(F2, &[1], 1, -2);
    assert!(a.add(&a).is_zero());
}

#[test]
fn valuations() {
    let f = F3;
    let a = const_term(f, 0, 1, -3).add(&const_term(f, 0, 1, 2));
    assert_eq!(a.valuation(), Valuation::Finite(-3));
    assert_eq!(TLaurent::zero(f, 0, EXACT).valuation(), Valuation::Infinity);
    assert_eq!(term(f, &[1], 1, 2).valuation(), Valuation::Finite(2));
}

#[test]
fn partial_derivatives() {
    // variables (x, z) and (x, y)
    let q = Field::Rational;
    assert_eq!(x_poly(q, &[2, 1], 1).partial_derivative(0), x_poly(q, &[1, 1], 2));
    assert!(x_poly(F2, &[2], 1).partial_derivative(0).is_zero());
    assert_eq!(x_poly(F3, &[3, 1], 1).partial_derivative(1), x_poly(F3, &[3, 0], 1));
}

#[test]
fn frobenius_and_roots() {
    let s = x_poly(F2, &[1, 0], 1).add(&x_poly(F2, &[0, 1], 1));
    let expected = x_poly(F2, &[2, 0], 1).add(&x_poly(F2, &[0, 2], 1));
    assert_eq!(s.frobenius_power(1).unwrap(), expected);
    assert_eq!(x_poly(F3, &[3, 6], 1).pth_root().unwrap(), Some(x_poly(F3, &[1, 2], 1)));
    assert_eq!(x_poly(F3, &[2, 3], 1).pth_root().unwrap(), None);
}

#[test]
fn frobenius_needs_positive_characteristic() {
    assert!(x_poly(Field::Rational, &[1], 1).frobenius_power(1).is_err());
}

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Prime(2)), Just(Field::Prime(3)), Just(Field::Prime(5)), Just(Field::Rational)]
}

/// Exact Laurent polynomials in two variables with up to four terms.
fn laurent_from(field: Field, terms: &[(u32, u32, i64, i64)]) -> TLaurent {
    let mut out = TLaurent::zero(field, 2, EXACT);
    for &(a, b, c, k) in terms {
        out.add_term(k, &x_poly(field, &[a, b], c));
    }
    out
}

fn terms_strategy() -> impl Strategy<Value = Vec<(u32, u32, i64, i64)>> {
    prop::collection::vec((0u32..3, 0u32..3, -4i64..5, -4i64..4), 0..5)
}

proptest! {
    #[test]
    fn laurent_ring_laws(field in field_strategy(), a in terms_strategy(), b in terms_strategy(), c in terms_strategy()) {
        let (a, b, c) = (laurent_from(field, &a), laurent_from(field, &b), laurent_from(field, &c));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c)).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn valuation_is_additive(field in field_strategy(), a in terms_strategy(), b in terms_strategy()) {
        let (a, b) = (laurent_from(field, &a), laurent_from(field, &b));
        let ab = a.mul(&b).unwrap();
        match (a.valuation(), b.valuation()) {
            (Valuation::Finite(x), Valuation::Finite(y)) => prop_assert_eq!(ab.valuation(), Valuation::Finite(x + y)),
            _ => prop_assert!(ab.is_zero()),
        }
    }

    #[test]
    fn frobenius_is_a_ring_map(p in prop_oneof![Just(2u32), Just(3), Just(5)], a in terms_strategy(), b in terms_strategy()) {
        let f = Field::Prime(p);
        let (a, b) = (laurent_from(f, &a), laurent_from(f, &b));
        let fr = |x: &TLaurent| x.frobenius_power(1).unwrap();
        prop_assert_eq!(fr(&a.add(&b)), fr(&a).add(&fr(&b)));
        prop_assert_eq!(fr(&a.mul(&b).unwrap()), fr(&a).mul(&fr(&b)).unwrap());
        prop_assert_eq!(fr(&a).pth_root().unwrap(), Some(a.clone()));
    }

    #[test]
    fn unit_inverse_is_an_inverse(p in prop_oneof![Just(2u32), Just(3), Just(5)], tail in terms_strategy(), precision in 1i64..8) {
        let f = Field::Prime(p);
        let tail = laurent_from(f, &tail);
        // keep only the positive part so that 1 + tail is a unit
        let mut u = TLaurent::one(f, 2);
        for (k, c) in tail.terms() {
            if k > 0 {
                u.add_term(k, c);
            }
        }
        let u = u.truncate(precision);
        let prod = u.mul(&u.unit_inverse().unwrap()).unwrap();
        prop_assert_eq!(prod, TLaurent::one(f, 2).truncate(precision));
    }

    #[test]
    fn leibniz_for_partials(field in field_strategy(), a in terms_strategy(), b in terms_strategy()) {
        let (a, b) = (laurent_from(field, &a), laurent_from(field, &b));
        for i in 0..2 {
            let lhs = a.mul(&b).unwrap().partial_derivative(i);
            let rhs = a.partial_derivative(i).mul(&b).unwrap().add(&a.mul(&b.partial_derivative(i)).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
