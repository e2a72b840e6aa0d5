use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Field, Monomial, Poly, TLaurent, EXACT};
use crate::forms::{DiffForm, PolyForm};
use crate::witt::{FDecomposed, WittVector};

/// The generator for trial `trial` of a run seeded with `seed`: one ChaCha stream per
/// trial, so the draw does not depend on which thread runs the trial.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub fn coef(rng: &mut ChaCha8Rng, field: Field) -> i64 {
    match field {
        Field::Prime(p) => rng.gen_range(1..p as i64),
        Field::Rational => {
            let v = rng.gen_range(1..=5);
            if rng.gen_bool(0.5) {
                -v
            } else {
                v
            }
        }
    }
}

fn monomial(rng: &mut ChaCha8Rng, nvars: usize, max_exp: u32) -> Monomial {
    (0..nvars).map(|_| rng.gen_range(0..=max_exp)).collect()
}

/// A sparse polynomial with at most `terms` terms.
pub fn poly(rng: &mut ChaCha8Rng, field: Field, nvars: usize, terms: usize, max_exp: u32) -> Poly {
    let mut out = Poly::zero(field, nvars);
    for _ in 0..rng.gen_range(1..=terms) {
        let m = monomial(rng, nvars, max_exp);
        out.add_term(m, field.from_i64(coef(rng, field)));
    }
    out
}

/// A sparse exact Laurent polynomial: at most `terms` monomials `c x^e t^k` with
/// `k ∈ [lo, hi]`.
pub fn laurent(rng: &mut ChaCha8Rng, field: Field, nvars: usize, terms: usize, lo: i64, hi: i64) -> TLaurent {
    let mut out = TLaurent::zero(field, nvars, EXACT);
    for _ in 0..rng.gen_range(1..=terms) {
        let k = rng.gen_range(lo..=hi);
        let m = monomial(rng, nvars, 2);
        out.add_term(k, &Poly::monomial(field, m, field.from_i64(coef(rng, field))));
    }
    out
}

/// All `degree`-subsets of the basis `dt, dx_1, …`, as masks.
pub fn basis_masks(dim: usize, degree: usize) -> Vec<u64> {
    (0u64..1 << dim).filter(|m| m.count_ones() as usize == degree).collect()
}

/// Up to four monomial terms `c x^e t^k dK`, `k ∈ [-max_pole, 3]`.
pub fn form(rng: &mut ChaCha8Rng, field: Field, dim: usize, degree: usize, max_pole: i64) -> DiffForm {
    let masks = basis_masks(dim, degree);
    let mut out = DiffForm::zero(field, dim - 1, degree);
    for _ in 0..rng.gen_range(1..=4) {
        let mask = masks[rng.gen_range(0..masks.len())];
        out = out.add(&DiffForm::term(mask, laurent(rng, field, dim - 1, 1, -max_pole, 3)));
    }
    out
}

/// Every `x^e t^k dK` with `k ∈ [-pole, 0]` and `x`-exponents at most 2.
pub fn form_sweep(field: Field, dim: usize, degree: usize, pole: i64) -> Vec<DiffForm> {
    let nvars = dim - 1;
    let exps: Vec<Monomial> = if nvars == 0 {
        vec![Monomial::new()]
    } else {
        (0..3u32.pow(nvars as u32))
            .map(|mut code| {
                (0..nvars)
                    .map(|_| {
                        let e = code % 3;
                        code /= 3;
                        e
                    })
                    .collect()
            })
            .collect()
    };
    let mut out = Vec::new();
    for mask in basis_masks(dim, degree) {
        for k in -pole..=0 {
            for m in &exps {
                let c = TLaurent::monomial(Poly::monomial(field, m.clone(), field.one()), k);
                out.push(DiffForm::term(mask, c));
            }
        }
    }
    out
}

/// A one-term monomial `c x^e t^{-m}` that is not a `p`-th power unless constant.
fn reduced_monomial(rng: &mut ChaCha8Rng, field: Field, nvars: usize, p: u32, pole: i64) -> (Poly, i64) {
    loop {
        let m = rng.gen_range(0..=pole);
        let e = monomial(rng, nvars, 2);
        let pth_power = m % p as i64 == 0 && e.iter().all(|&x| x % p == 0);
        if m > 0 && pth_power {
            continue;
        }
        return (Poly::monomial(field, e, field.from_i64(coef(rng, field))), -m);
    }
}

/// `Σ_i F^{j_i} V^i[b_i]` with one monomial `b_i` per component, none a `p`-th power.
/// Component `i` of the sum is `b_i^{p^{j_i}}`, and each `F^{j_i} V^i[b_i]` has pole
/// at most `max_pole`.
pub fn reduced_decomposition(
    rng: &mut ChaCha8Rng,
    p: u32,
    length: usize,
    nvars: usize,
    max_pole: i64,
) -> FDecomposed {
    let field = Field::Prime(p);
    let mut parts = Vec::new();
    let active: Vec<usize> = loop {
        let a: Vec<usize> = (0..length).filter(|_| rng.gen_bool(0.6)).collect();
        if !a.is_empty() {
            break a;
        }
    };
    for i in active {
        let (c, k) = reduced_monomial(rng, field, nvars, p, 3.min(max_pole));
        let max_j = (0..=2u32).filter(|&j| -k * (p as i64).pow(j) <= max_pole).max().unwrap_or(0);
        let j = rng.gen_range(0..=max_j);
        let mut comps = vec![TLaurent::zero(field, nvars, EXACT); length];
        comps[i] = TLaurent::monomial(c, k);
        parts.push((j, WittVector::new(p, comps).expect("one ring")));
    }
    FDecomposed::new(parts).expect("same shape")
}

/// Every `F^j V^i[x^e t^{-m}]` with `m <= pole`, `p^j m <= max_pole` and `x^e t^{-m}`
/// not a `p`-th power.
pub fn witt_sweep(p: u32, length: usize, nvars: usize, pole: i64, max_pole: i64) -> Vec<FDecomposed> {
    let field = Field::Prime(p);
    let mut out = Vec::new();
    for i in 0..length {
        for m in 1..=pole {
            for e in 0..=(if nvars == 0 { 0 } else { 1 }) {
                for j in 0..=2u32 {
                    if m * (p as i64).pow(j) > max_pole || (e == 0 && m % p as i64 == 0) {
                        continue;
                    }
                    let mono: Monomial = (0..nvars).map(|_| e).collect();
                    let mut comps = vec![TLaurent::zero(field, nvars, EXACT); length];
                    comps[i] = TLaurent::monomial(Poly::monomial(field, mono, field.one()), -m);
                    out.push(FDecomposed::new(vec![(j, WittVector::new(p, comps).expect("one ring"))]).expect("shape"));
                }
            }
        }
    }
    out
}

/// A general presentation `Σ_j F^j(β_j)` with sparse components.
pub fn general_decomposition(
    rng: &mut ChaCha8Rng,
    p: u32,
    length: usize,
    nvars: usize,
    max_pole: i64,
) -> FDecomposed {
    let field = Field::Prime(p);
    let mut parts = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let j = rng.gen_range(0..=1u32);
        let pole = (max_pole / (p as i64).pow(j)).min(3);
        let comps = (0..length)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    TLaurent::zero(field, nvars, EXACT)
                } else {
                    laurent(rng, field, nvars, 2, -pole, 1)
                }
            })
            .collect();
        parts.push((j, WittVector::new(p, comps).expect("one ring")));
    }
    FDecomposed::new(parts).expect("same shape")
}

/// A Witt vector with sparse components and weighted pole at most `max_pole`.
pub fn witt(rng: &mut ChaCha8Rng, field: Field, p: u32, length: usize, nvars: usize, max_pole: i64) -> WittVector {
    let comps = (0..length)
        .map(|i| {
            let pole = max_pole / (p as i64).pow((length - 1 - i) as u32);
            if rng.gen_bool(0.25) {
                TLaurent::zero(field, nvars, EXACT)
            } else {
                laurent(rng, field, nvars, 2, -pole, 2)
            }
        })
        .collect();
    WittVector::new(p, comps).expect("one ring")
}

/// A form over the divisor ring (no `t`, no `dt`).
pub fn poly_form(rng: &mut ChaCha8Rng, field: Field, nvars: usize, degree: usize, zero_chance: f64) -> PolyForm {
    let mut out = PolyForm::zero(field, nvars, degree);
    if rng.gen_bool(zero_chance) {
        return out;
    }
    let masks: Vec<u64> = (0u64..1 << nvars).filter(|m| m.count_ones() as usize == degree).collect();
    if masks.is_empty() {
        return out;
    }
    for _ in 0..rng.gen_range(1..=3) {
        let mask = masks[rng.gen_range(0..masks.len())];
        out.add_term(mask, &poly(rng, field, nvars, 2, 3));
    }
    out
}
