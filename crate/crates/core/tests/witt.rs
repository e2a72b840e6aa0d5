use std::collections::BTreeMap;

use proptest::prelude::*;
use ramif_core::algebra::{const_term, term, Field, Poly, TLaurent, EXACT};
use ramif_core::dilatation::fsat_member;
use ramif_core::forms::{DiffForm, PoleIndex, DT};
use ramif_core::witt::{
    bk_log_member, charform_h1, charform_witt, decomposed_fsat_bound, fd, matsuda_conductor, matsuda_member,
    FDecomposed, WittSymbol, WittVector,
};

fn zero(f: Field, nvars: usize) -> TLaurent {
    TLaurent::zero(f, nvars, EXACT)
}

fn wv(p: u32, comps: Vec<TLaurent>) -> WittVector {
    WittVector::new(p, comps).unwrap()
}

#[test]
fn one_plus_one_in_w2_f2() {
    // S_1(1, 1) = (1 + 1 - 2^2) / 2 = -1 over Z, which is 1 mod 2
    let s1 = (1i64 + 1 - 4) / 2;
    let f = Field::Prime(2);
    let one = wv(2, vec![const_term(f, 0, 1, 0), zero(f, 0)]);
    assert_eq!(one.add(&one).unwrap(), wv(2, vec![zero(f, 0), const_term(f, 0, s1, 0)]));
}

#[test]
fn additive_identities() {
    let f = Field::Prime(3);
    let a = wv(3, vec![term(f, &[1], 2, -1), term(f, &[2], 1, 1)]);
    let z = WittVector::zero(3, 2, f, 1);
    assert_eq!(a.add(&z).unwrap(), a);
    assert!(a.sub(&a).unwrap().is_zero());
}

#[test]
fn teichmuller_shift_frobenius() {
    let f = Field::Prime(5);
    let x = term(f, &[1], 1, 0);
    assert_eq!(WittVector::teichmuller(5, 3, x.clone()).unwrap(), wv(5, vec![x.clone(), zero(f, 1), zero(f, 1)]));
    let (a0, a1, a2) = (term(f, &[1], 1, -1), term(f, &[2], 3, 0), term(f, &[0], 1, 2));
    let v = wv(5, vec![a0.clone(), a1.clone(), a2]).verschiebung();
    assert_eq!(v, wv(5, vec![zero(f, 1), a0, a1]));
    let f3 = Field::Prime(3);
    let a = wv(3, vec![const_term(f3, 0, 1, -1), zero(f3, 0)]);
    assert_eq!(a.frobenius(1).unwrap(), wv(3, vec![const_term(f3, 0, 1, -3), zero(f3, 0)]));
}

#[test]
fn ghost_components() {
    let q = Field::Rational;
    // variables (x, y)
    let (x, y) = (term(q, &[1, 0], 1, 0), term(q, &[0, 1], 1, 0));
    let g = wv(2, vec![x.clone(), y.clone()]).ghost().unwrap();
    assert_eq!(g, vec![x.clone(), x.mul(&x).unwrap().add(&y.scale_int(2))]);
    let g0 = WittVector::zero(2, 2, q, 2).ghost().unwrap();
    assert!(g0.iter().all(|c| c.is_zero()));
    assert!(wv(2, vec![const_term(Field::Prime(2), 0, 1, 0)]).ghost().is_err());
}

/// The displayed inequalities, with `m = min(n, ord_p(r))` and the special index `n-1-m`.
fn matsuda_by_valuations(a: &WittVector, r: u32) -> bool {
    let (p, n) = (a.p(), a.len());
    let m = if r == 0 {
        n
    } else {
        let mut ord = 0;
        let mut q = r;
        while q.is_multiple_of(p) {
            q /= p;
            ord += 1;
        }
        ord.min(n)
    };
    (0..n).all(|i| match a.component(i).valuation().finite() {
        None => true,
        Some(v) => {
            let bound = if m < n && i == n - 1 - m { -(r as i64) + 1 } else { -(r as i64) };
            (p as i64).pow((n - 1 - i) as u32) * v >= bound
        }
    })
}

fn log_by_valuations(a: &WittVector, r: u32) -> bool {
    let (p, n) = (a.p() as i64, a.len());
    (0..n).all(|i| a.component(i).valuation().finite().is_none_or(|v| p.pow((n - 1 - i) as u32) * v >= -(r as i64)))
}

#[test]
fn filtration_examples() {
    let f3 = Field::Prime(3);
    let a = wv(3, vec![const_term(f3, 0, 1, -1), zero(f3, 0)]);
    assert!(!matsuda_member(&a, 3));
    assert!(matsuda_member(&a, 4));
    assert!(bk_log_member(&a, 3));
    assert_eq!(matsuda_member(&a, 3), matsuda_by_valuations(&a, 3));

    let f2 = Field::Prime(2);
    assert!(matsuda_member(&wv(2, vec![zero(f2, 0), const_term(f2, 0, 1, -2)]), 2));
    assert!(!matsuda_member(&wv(2, vec![const_term(f2, 0, 1, -1), zero(f2, 0)]), 2));
}

#[test]
fn frobenius_image_is_saturated_early() {
    let f = Field::Prime(3);
    let beta = wv(3, vec![const_term(f, 0, 1, -1), zero(f, 0)]);
    let a = beta.frobenius(1).unwrap();
    assert_eq!(matsuda_conductor(&a), 9);
    assert_eq!(matsuda_conductor(&beta), 4);
    assert!(fsat_member(&a, 4).unwrap());
    assert!(!fsat_member(&a, 3).unwrap());
    assert_eq!(decomposed_fsat_bound(&FDecomposed::new(vec![(1, beta)]).unwrap()), 4);
}

#[test]
fn integral_vectors_are_everywhere() {
    let f = Field::Prime(2);
    let a = wv(2, vec![term(f, &[1], 1, 0), term(f, &[0], 1, 3)]);
    for r in 0..5 {
        assert!(fsat_member(&a, r).unwrap());
        assert!(matsuda_member(&a, r));
    }
}

#[test]
fn fd_examples() {
    let f5 = Field::Prime(5);
    let g = term(f5, &[2], 3, -2).add(&term(f5, &[0], 1, 1));
    let a = wv(5, vec![g.clone()]);
    assert_eq!(fd(&a).unwrap(), DiffForm::term(0, g).exterior_derivative().unwrap());

    // (t^{-1})^{3-1} d(t^{-1}) = t^{-2} · (-t^{-2}) dt = 2 t^{-4} dt over F_3
    let f3 = Field::Prime(3);
    let a = wv(3, vec![const_term(f3, 0, 1, -1), zero(f3, 0)]);
    let by_hand = const_term(f3, 0, 1, -2).mul(&const_term(f3, 0, -1, -2)).unwrap();
    assert_eq!(fd(&a).unwrap(), DiffForm::term(DT, by_hand));
    assert!(fd(&WittVector::zero(3, 2, f3, 0)).unwrap().is_zero());
}

#[test]
fn charform_examples() {
    let f3 = Field::Prime(3);
    let beta = wv(3, vec![const_term(f3, 0, 1, -1), zero(f3, 0)]);
    let c = charform_witt(&FDecomposed::new(vec![(0, beta)]).unwrap(), 4).unwrap();
    let mut expected = WittSymbol::new(2);
    expected.add(0, &Poly::from_int(f3, 0, 2));
    assert_eq!(c.get(&PoleIndex::T), Some(&expected));
    assert_eq!(c.entries().count(), 1);

    let f2 = Field::Prime(2);
    let beta = wv(2, vec![term(f2, &[1], 1, -2)]);
    let c = charform_witt(&FDecomposed::new(vec![(0, beta)]).unwrap(), 2).unwrap();
    let (one, x) = (Poly::one(f2, 1), Poly::var(f2, 1, 0));
    assert_eq!(c.get(&PoleIndex::X(0)).unwrap().parts, BTreeMap::from([(0, one.clone())]));
    assert_eq!(c.get(&PoleIndex::T).unwrap().parts, BTreeMap::from([(1, x.clone())]));

    let h = charform_h1(&c);
    assert_eq!(h.get(&PoleIndex::X(0)), Some(&one));
    assert_eq!(h.get(&PoleIndex::T), Some(&x));
    assert!(charform_h1(&ramif_core::forms::CharForm::new(2)).is_zero());
}

#[test]
fn charform_rejects_non_members() {
    let f3 = Field::Prime(3);
    let beta = wv(3, vec![const_term(f3, 0, 1, -1), zero(f3, 0)]);
    assert!(charform_witt(&FDecomposed::new(vec![(0, beta)]).unwrap(), 3).is_err());
}

#[test]
fn curve_restriction() {
    let f = Field::Prime(3);
    let a = wv(3, vec![term(f, &[1], 1, -1), zero(f, 1)]);
    let r = a.restrict_to_curve(&[const_term(f, 0, 1, 2)]).unwrap();
    assert_eq!(r, wv(3, vec![const_term(f, 0, 1, 1), zero(f, 0)]));
    let integral = wv(3, vec![term(f, &[2], 1, 0), term(f, &[1], 2, 1)]);
    assert!(matsuda_member(&integral.restrict_to_curve(&[const_term(f, 0, 1, 1)]).unwrap(), 0));
}

fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(3), Just(5)]
}

type Terms = Vec<(u32, i64, i64)>;

fn comp(f: Field, terms: &Terms) -> TLaurent {
    let mut out = zero(f, 1);
    for &(e, c, k) in terms {
        out.add_term(k, &Poly::monomial(f, [e].into_iter().collect(), f.from_i64(c)));
    }
    out
}

fn comps_strategy(n: usize) -> impl Strategy<Value = Vec<Terms>> {
    prop::collection::vec(prop::collection::vec((0u32..3, -3i64..4, -4i64..3), 0..3), n)
}

fn vector(p: u32, f: Field, term_lists: &[Terms]) -> WittVector {
    wv(p, term_lists.iter().map(|s| comp(f, s)).collect())
}

fn binomial(n: u64, k: u64) -> i64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1)) as i64
}

proptest! {
    #[test]
    fn length_two_sum_matches_carry_formula(p in prime(), a in comps_strategy(2), b in comps_strategy(2)) {
        let f = Field::Prime(p);
        let (a, b) = (vector(p, f, &a), vector(p, f, &b));
        // S_1 = -Σ_{0<k<p} (C(p,k)/p) x^k y^{p-k}
        let (x, y) = (a.component(0), b.component(0));
        let mut carry = zero(f, 1);
        for k in 1..p {
            let c = binomial(p as u64, k as u64) / p as i64;
            carry = carry.sub(&x.pow(k).unwrap().mul(&y.pow(p - k).unwrap()).unwrap().scale_int(c));
        }
        let expected = wv(p, vec![x.add(y), a.component(1).add(b.component(1)).add(&carry)]);
        prop_assert_eq!(a.add(&b).unwrap(), expected);
    }

    #[test]
    fn ghost_map_is_a_ring_map(p in prime(), n in 1usize..4, a in comps_strategy(3), b in comps_strategy(3)) {
        let q = Field::Rational;
        let (a, b) = (vector(p, q, &a[..n]), vector(p, q, &b[..n]));
        let (ga, gb) = (a.ghost().unwrap(), b.ghost().unwrap());
        let sum: Vec<TLaurent> = ga.iter().zip(&gb).map(|(x, y)| x.add(y)).collect();
        let prod: Vec<TLaurent> = ga.iter().zip(&gb).map(|(x, y)| x.mul(y).unwrap()).collect();
        prop_assert_eq!(a.add(&b).unwrap().ghost().unwrap(), sum);
        prop_assert_eq!(a.mul(&b).unwrap().ghost().unwrap(), prod);
    }

    #[test]
    fn frobenius_verschiebung_identities(p in prime(), n in 1usize..4, a in comps_strategy(3), b in comps_strategy(3)) {
        let f = Field::Prime(p);
        let (a, b) = (vector(p, f, &a[..n]), vector(p, f, &b[..n]));
        let pa = a.scalar_mul(p).unwrap();
        prop_assert_eq!(a.verschiebung().frobenius(1).unwrap(), pa.clone());
        prop_assert_eq!(a.frobenius(1).unwrap().verschiebung(), pa);
        prop_assert_eq!(a.frobenius(1).unwrap().mul(&b).unwrap().verschiebung(), a.mul(&b.verschiebung()).unwrap());
    }

    #[test]
    fn witt_ring_laws(p in prime(), n in 1usize..4, a in comps_strategy(3), b in comps_strategy(3), c in comps_strategy(3)) {
        let f = Field::Prime(p);
        let (a, b, c) = (vector(p, f, &a[..n]), vector(p, f, &b[..n]), vector(p, f, &c[..n]));
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert!(a.add(&a.neg().unwrap()).unwrap().is_zero());
    }

    #[test]
    fn filtrations_match_valuations(p in prime(), n in 1usize..4, a in comps_strategy(3), r in 0u32..13) {
        let a = vector(p, Field::Prime(p), &a[..n]);
        prop_assert_eq!(matsuda_member(&a, r), matsuda_by_valuations(&a, r));
        prop_assert_eq!(bk_log_member(&a, r), log_by_valuations(&a, r));
    }

    #[test]
    fn filtration_sandwich(p in prime(), n in 1usize..4, a in comps_strategy(3), r in 1u32..13) {
        let a = vector(p, Field::Prime(p), &a[..n]);
        prop_assert!(!bk_log_member(&a, r - 1) || matsuda_member(&a, r));
        prop_assert!(!matsuda_member(&a, r) || bk_log_member(&a, r));
    }

    #[test]
    fn charform_vanishes_one_level_down(p in prop_oneof![Just(2u32), Just(3)], n in 1usize..3, a in comps_strategy(2), r in 3u32..7) {
        let beta = vector(p, Field::Prime(p), &a[..n]);
        if matsuda_member(&beta, r - 1) {
            let x = FDecomposed::new(vec![(0, beta)]).unwrap();
            prop_assert!(charform_witt(&x, r).unwrap().is_zero());
        }
    }

    #[test]
    fn saturated_membership_is_monotone(p in prop_oneof![Just(2u32), Just(3)], a in comps_strategy(2)) {
        let f = Field::Prime(p);
        let term_lists: Vec<Terms> = a.iter().map(|s| s.iter().map(|&(e, c, k)| (e, c, k.max(-2))).collect()).collect();
        let a = vector(p, f, &term_lists);
        let levels: Vec<bool> = (0..7).map(|r| fsat_member(&a, r).unwrap()).collect();
        prop_assert!(levels.windows(2).all(|x| !x[0] || x[1]));
        // fil_r sits inside its F-saturation
        if let Some(&at) = levels.get(matsuda_conductor(&a) as usize) {
            prop_assert!(at);
        }
    }
}
