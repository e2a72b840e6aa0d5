use std::collections::BTreeMap;

use super::filtration::{matsuda_member, FDecomposed};
use super::vector::WittVector;
use crate::algebra::{Field, Poly};
use crate::error::{Error, Result};
use crate::forms::{mask_indices, CharForm, DiffForm, PoleIndex, Symbol, DT};

/// `V^{n-1} · Σ_s c_s · F^s`, keyed by `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittSymbol {
    pub witt_length: usize,
    pub parts: BTreeMap<u32, Poly>,
}

impl WittSymbol {
    pub fn new(witt_length: usize) -> WittSymbol {
        WittSymbol { witt_length, parts: BTreeMap::new() }
    }

    pub fn add(&mut self, s: u32, c: &Poly) {
        let sum = match self.parts.remove(&s) {
            Some(old) => old.add(c),
            None => c.clone(),
        };
        if !sum.is_zero() {
            self.parts.insert(s, sum);
        }
    }
}

impl Symbol for WittSymbol {
    fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }
}

impl Symbol for Poly {
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
}

/// The one-form `Σ_i a_i^{p^{n-1-i} - 1} da_i` attached to `a = (a_0, …, a_{n-1})`.
///
/// The exponent `p^{n-1-i} - 1` is the one for which `Fd` of an element of the
/// Matsuda piece at level `r` has pole order at most `r`.
pub fn fd(a: &WittVector) -> Result<DiffForm> {
    let (p, n) = (a.p(), a.len());
    if a.field() != Field::Prime(p) {
        return Err(Error::NeedsPositiveCharacteristic);
    }
    let mut out = DiffForm::zero(a.field(), a.nvars(), 1);
    for i in 0..n {
        let ai = a.component(i);
        if ai.is_zero() {
            continue;
        }
        let da = DiffForm::term(0, ai.clone()).exterior_derivative()?;
        let power = ai.pow(p.pow((n - 1 - i) as u32) - 1)?;
        out = out.add(&da.scale(&power)?);
    }
    Ok(out)
}

fn pole_index(mask: u64) -> PoleIndex {
    if mask == DT {
        PoleIndex::T
    } else {
        PoleIndex::X(mask_indices(mask)[0] - 1)
    }
}

/// Closed-form characteristic form of `Σ_j F^j(β_j)` with every `β_j` in the Matsuda
/// piece at level `r >= 2`:
/// `char(F^j β) = Fd(β) ⊗ V^{n-1}F^j`, plus `dt/t^2 ⊗ V^{n-1} α^{2^j} F^{j+1}` when
/// `p = r = 2`, where `α` is the residue of `t^2 β_{n-1}`.
pub fn charform_witt(x: &FDecomposed, r: u32) -> Result<CharForm<WittSymbol>> {
    if r < 2 {
        return Err(Error::UnsupportedLevel(r));
    }
    let (p, n) = (x.p(), x.witt_length());
    let mut entries: BTreeMap<PoleIndex, WittSymbol> = BTreeMap::new();
    for (j, beta) in &x.parts {
        if !matsuda_member(beta, r) {
            return Err(Error::NotMember(r));
        }
        let w = fd(beta)?;
        if !w.valuation().at_least(-(r as i64)) {
            return Err(Error::PoleTooDeep { found: w.pole_bound(), allowed: r as i64 });
        }
        for (mask, c) in w.terms() {
            let cbar = c.coefficient(-(r as i64))?.frobenius_power(*j)?;
            entries.entry(pole_index(mask)).or_insert_with(|| WittSymbol::new(n)).add(*j, &cbar);
        }
        if p == 2 && r == 2 {
            let alpha = beta.component(n - 1).coefficient(-2)?.frobenius_power(*j)?;
            entries.entry(PoleIndex::T).or_insert_with(|| WittSymbol::new(n)).add(j + 1, &alpha);
        }
    }
    Ok(CharForm::from_entries(r, entries))
}

/// Image in `Ω^1(rD)|_D`: drop `V^{n-1}` and send every `F^s` to 1.
pub fn charform_h1(c: &CharForm<WittSymbol>) -> CharForm<Poly> {
    CharForm::from_entries(
        c.level,
        c.entries().filter_map(|(i, s)| {
            let mut parts = s.parts.values();
            let first = parts.next()?.clone();
            Some((*i, parts.fold(first, |acc, q| acc.add(q))))
        }),
    )
}
