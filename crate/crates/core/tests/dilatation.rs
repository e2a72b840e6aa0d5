use proptest::prelude::*;
use ramif_core::algebra::{const_term, term, Field, Poly, TLaurent, EXACT};
use ramif_core::dilatation::{
    additive_decompose, as_member, delta, delta_capped, expand_delta, model_for, oracle_charform, oracle_member,
    psi_extract, AdditiveElement, DilatationModel, Fiber, ModelOptions, Section,
};
use ramif_core::forms::{charform_omega, dvar, omega_fas_member, DiffForm, PoleIndex, PolyForm, DT};
use ramif_core::witt::WittVector;

const F3: Field = Field::Prime(3);

fn tau(f: Field, nvars: usize, i: usize, e: u32) -> Poly {
    Poly::var(f, nvars, i).pow(e)
}

#[test]
fn second_projection_of_the_coordinate() {
    for n in 1..=4u32 {
        let m = DilatationModel::build(F3, 1, n, 1).unwrap();
        let t = const_term(F3, 0, 1, 1);
        let diff = m.pullback2_scaled(&t, 0, 10).unwrap().sub(&m.embed(&t).truncate(10));
        assert_eq!(diff, TLaurent::monomial(tau(F3, 1, 0, 1), n as i64).truncate(10));

        // d(t + t^n τ), taken symbolically
        let s = m.embed(&t).add(&TLaurent::monomial(tau(F3, 1, 0, 1), n as i64));
        assert_eq!(*m.dt_image(), DiffForm::term(0, s).exterior_derivative().unwrap());
    }
}

#[test]
fn unit_is_a_geometric_series() {
    let m = DilatationModel::build(F3, 1, 2, 1).unwrap();
    let u = m.unit().unwrap();
    for k in 0..u.precision() {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        assert_eq!(u.coefficient(k).unwrap(), tau(F3, 1, 0, k as u32).scale_int(sign));
    }
}

#[test]
fn delta_of_inverse_coordinate() {
    // level 2: Δ(1/t) = -τ u
    let a = Section::Function(const_term(F3, 0, 1, -1));
    let m = DilatationModel::build(F3, 1, 2, 1).unwrap();
    let expanded = expand_delta(&delta(&a, &m).unwrap(), &m).unwrap();
    let Section::Function(d) = expanded else { panic!("function expected") };
    let cap = d.precision().min(6);
    let mut expected = TLaurent::zero(F3, 1, cap);
    for k in 0..cap {
        let sign = if k % 2 == 0 { -1 } else { 1 };
        expected.add_term(k, &tau(F3, 1, 0, k as u32 + 1).scale_int(sign));
    }
    assert_eq!(d.truncate(cap), expected);
    assert!(as_member(&a, &m).unwrap());

    // level 1: Δ(1/t) = -τ (1+τ)^{-1} / t keeps its pole
    let m = DilatationModel::build(F3, 1, 1, 1).unwrap();
    let d = delta(&a, &m).unwrap();
    assert!(!d.value.is_regular());
    assert!(!as_member(&a, &m).unwrap());
}

#[test]
fn membership_examples() {
    let dt3 = Section::Form(DiffForm::term(DT, const_term(F3, 0, 1, -3)));
    assert!(oracle_member(&dt3, 3, &ModelOptions::default()).unwrap());
    assert!(!oracle_member(&dt3, 2, &ModelOptions::default()).unwrap());
    let dt2 = Section::Form(DiffForm::term(DT, const_term(F3, 0, 1, -2)));
    assert!(oracle_member(&dt2, 2, &ModelOptions::default()).unwrap());
    let integral = Section::Witt(WittVector::new(3, vec![term(F3, &[1], 1, 0), term(F3, &[2], 2, 2)]).unwrap());
    for n in 0..5 {
        assert!(oracle_member(&integral, n, &ModelOptions::default()).unwrap());
    }
}

#[test]
fn psi_examples() {
    let opts = ModelOptions::default();
    let dt3 = Section::Form(DiffForm::term(DT, const_term(F3, 0, 1, -3)));
    let m = model_for(&dt3, 3, &opts).unwrap();
    // fiber variable 0 is τ when d = 1
    assert_eq!(psi_extract(&dt3, &m).unwrap(), Fiber::Form(PolyForm::term(1, Poly::one(F3, 1))));

    let regular = Section::Form(DiffForm::term(dvar(0), term(F3, &[2], 1, 1)));
    let m = model_for(&regular, 3, &opts).unwrap();
    assert!(psi_extract(&regular, &m).unwrap().is_zero());

    // a member at level 2 has ψ = 0 at level 3
    let dt2 = Section::Form(DiffForm::term(DT, const_term(F3, 0, 1, -2)));
    let m = DilatationModel::build(F3, 1, 3, 3).unwrap();
    assert!(psi_extract(&dt2, &m).unwrap().is_zero());
}

#[test]
fn decomposition_shapes() {
    // d = 2: variables x (0), τ (1), τ_1 (2)
    let m = DilatationModel::build(F3, 2, 3, 3).unwrap();
    let Ok(AdditiveElement::Omega(e)) = additive_decompose(&Fiber::Form(PolyForm::term(0b010, Poly::one(F3, 3))), &m)
    else {
        panic!("dτ decomposes")
    };
    assert_eq!(e[&PoleIndex::T].dpart, PolyForm::function(Poly::one(F3, 1)));

    let x = Poly::var(F3, 1, 0);
    let g = Poly::var(F3, 3, 0).mul(&tau(F3, 3, 1, 3));
    let Ok(AdditiveElement::Omega(e)) = additive_decompose(&Fiber::Form(PolyForm::function(g)), &m) else {
        panic!("τ³x decomposes")
    };
    assert_eq!(e[&PoleIndex::T].frob[&1], PolyForm::function(x));

    let g = Poly::var(F3, 3, 0).mul(&tau(F3, 3, 1, 2));
    assert!(additive_decompose(&Fiber::Form(PolyForm::function(g)), &m).is_err());
}

#[test]
fn oracle_charform_of_dt_over_t3() {
    let a = DiffForm::term(DT, const_term(F3, 0, 1, -3));
    let m = model_for(&Section::Form(a.clone()), 3, &ModelOptions::default()).unwrap();
    let oracle = oracle_charform(&Section::Form(a.clone()), &m).unwrap();
    assert_eq!(oracle, ramif_core::dilatation::OracleCharForm::Omega(charform_omega(&a, 3).unwrap()));
}

fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(3), Just(5)]
}

type Terms = Vec<(u64, u32, i64, i64)>;

fn form(f: Field, terms: &Terms) -> DiffForm {
    // d = 2, degree 1: basis dt, dx
    let mut out = DiffForm::zero(f, 1, 1);
    for &(mask, e, c, k) in terms {
        out.add_term(if mask == 0 { DT } else { dvar(0) }, &term(f, &[e], c, k));
    }
    out
}

fn terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec((0u64..2, 0u32..3, 1i64..5, -4i64..2), 0..4)
}

fn witt(p: u32, term_lists: &[Vec<(u32, i64, i64)>]) -> WittVector {
    let f = Field::Prime(p);
    let comps = term_lists
        .iter()
        .map(|s| {
            let mut c = TLaurent::zero(f, 1, EXACT);
            for &(e, v, k) in s {
                c.add_term(k, &Poly::monomial(f, [e].into_iter().collect(), f.from_i64(v)));
            }
            c
        })
        .collect();
    WittVector::new(p, comps).unwrap()
}

fn witt_terms() -> impl Strategy<Value = Vec<Vec<(u32, i64, i64)>>> {
    prop::collection::vec(prop::collection::vec((0u32..2, 1i64..3, -2i64..2), 0..3), 2)
}

fn as_form(s: Section) -> DiffForm {
    match s {
        Section::Form(w) => w,
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_is_additive(p in prime(), n in 1u32..5, a in terms(), b in terms()) {
        let f = Field::Prime(p);
        let (a, b) = (form(f, &a), form(f, &b));
        let pole = a.pole_bound().max(b.pole_bound());
        let m = DilatationModel::build(f, 2, n, pole).unwrap();
        let d = |w: &DiffForm| as_form(delta_capped(&Section::Form(w.clone()), &m, 3).unwrap().value);
        let (da, db, ds) = (d(&a), d(&b), d(&a.add(&b)));
        let cap = da.precision().min(db.precision()).min(ds.precision());
        prop_assert_eq!(ds.truncate(cap), da.add(&db).truncate(cap));
    }

    #[test]
    fn witt_delta_is_additive(p in prop_oneof![Just(2u32), Just(3)], n in 1u32..4, a in witt_terms(), b in witt_terms()) {
        let (a, b) = (witt(p, &a), witt(p, &b));
        let sum = a.add(&b).unwrap();
        let pole = |x: &WittVector| Section::Witt(x.clone()).pole_bound();
        let m = ramif_core::dilatation::DilatationModel::build_with(
            Field::Prime(p), 2, n, pole(&a).max(pole(&b)).max(pole(&sum)), 2, &ModelOptions::default(),
        ).unwrap();
        let d = |x: &WittVector| match delta_capped(&Section::Witt(x.clone()), &m, 8).unwrap().value {
            Section::Witt(v) => v,
            _ => unreachable!(),
        };
        let (ds, da_db) = (d(&sum), d(&a).add(&d(&b)).unwrap());
        // poles eat precision during the carries, so compare where both are known
        for i in 0..ds.len() {
            let (x, y) = (ds.component(i), da_db.component(i));
            let cap = x.precision().min(y.precision());
            prop_assert_eq!(x.truncate(cap), y.truncate(cap));
        }
    }

    #[test]
    fn oracle_agrees_with_closed_form(p in prime(), a in terms()) {
        let w = form(Field::Prime(p), &a);
        let s = Section::Form(w.clone());
        for n in 0..=6 {
            prop_assert_eq!(oracle_member(&s, n, &ModelOptions::default()).unwrap(), omega_fas_member(&w, n).unwrap());
        }
    }

    #[test]
    fn membership_monotone_and_psi_decomposes(p in prime(), a in terms()) {
        let opts = ModelOptions::default();
        let s = Section::Form(form(Field::Prime(p), &a));
        let levels: Vec<bool> = (0..=6).map(|n| oracle_member(&s, n, &opts).unwrap()).collect();
        prop_assert!(levels.windows(2).all(|x| !x[0] || x[1]));
        for n in 2..=6u32 {
            if levels[n as usize] {
                let m = model_for(&s, n, &opts).unwrap();
                let psi = psi_extract(&s, &m).unwrap();
                prop_assert!(additive_decompose(&psi, &m).is_ok());
                if levels[n as usize - 1] {
                    prop_assert!(psi.is_zero());
                }
            }
        }
    }

    #[test]
    fn precision_guard_changes_nothing(p in prime(), a in terms(), n in 1u32..6) {
        let s = Section::Form(form(Field::Prime(p), &a));
        let plain = ModelOptions::default();
        let guarded = ModelOptions { guard: 5, ..ModelOptions::default() };
        let m0 = oracle_member(&s, n, &plain).unwrap();
        prop_assert_eq!(m0, oracle_member(&s, n, &guarded).unwrap());
        if m0 && n >= 2 {
            let c0 = oracle_charform(&s, &model_for(&s, n, &plain).unwrap()).unwrap();
            let c5 = oracle_charform(&s, &model_for(&s, n, &guarded).unwrap()).unwrap();
            prop_assert_eq!(c0, c5);
        }
    }
}
