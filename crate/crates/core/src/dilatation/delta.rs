use super::model::DilatationModel;
use crate::algebra::{Field, TLaurent, Valuation, EXACT};
use crate::error::{Error, Result};
use crate::forms::DiffForm;
use crate::witt::WittVector;

/// A section of `F` on `U = X ∖ D`: a differential form, a Witt vector or a function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Section {
    Form(DiffForm),
    Witt(WittVector),
    Function(TLaurent),
}

impl Section {
    pub fn field(&self) -> Field {
        match self {
            Section::Form(w) => w.field(),
            Section::Witt(a) => a.field(),
            Section::Function(f) => f.field(),
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            Section::Form(w) => w.nvars(),
            Section::Witt(a) => a.nvars(),
            Section::Function(f) => f.nvars(),
        }
    }

    pub fn pole_bound(&self) -> i64 {
        match self {
            Section::Form(w) => w.pole_bound(),
            Section::Witt(a) => a.components().iter().map(|c| c.pole_bound()).max().unwrap_or(0),
            Section::Function(f) => f.pole_bound(),
        }
    }

    pub fn witt_length(&self) -> usize {
        match self {
            Section::Witt(a) => a.len(),
            _ => 1,
        }
    }

    /// Smallest coefficient (or component) valuation.
    pub fn valuation(&self) -> Valuation {
        match self {
            Section::Form(w) => w.valuation(),
            Section::Witt(a) => a.components().iter().map(|c| c.valuation()).min().unwrap_or(Valuation::Infinity),
            Section::Function(f) => f.valuation(),
        }
    }

    pub fn precision(&self) -> i64 {
        match self {
            Section::Form(w) => w.precision(),
            Section::Witt(a) => a.components().iter().map(|c| c.precision()).min().unwrap_or(EXACT),
            Section::Function(f) => f.precision(),
        }
    }

    pub fn is_regular(&self) -> bool {
        self.valuation().at_least(0)
    }

    pub fn truncate(&self, precision: i64) -> Section {
        match self {
            Section::Form(w) => Section::Form(w.truncate(precision)),
            Section::Witt(a) => Section::Witt(a.truncate(precision)),
            Section::Function(f) => Section::Function(f.truncate(precision)),
        }
    }
}

/// `Δ = p₂*a − p₁*a` on the chart, stored as `value = w^K Δ` (for Witt vectors
/// `[w^K]·Δ`) with `K = clearing`. Since `w` is a unit of `C` with `t`-valuation 0,
/// `value` and `Δ` have the same valuations, and they agree on `t = 0` when `n >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta {
    pub value: Section,
    pub clearing: u32,
}

fn check_input(a: &Section, model: &DilatationModel) -> Result<()> {
    if a.field() != model.field {
        return Err(Error::Incompatible(format!("input over {} but model over {}", a.field(), model.field)));
    }
    if a.nvars() != model.input_nvars() {
        return Err(Error::Incompatible(format!(
            "input has {} variables but the model has dimension {}",
            a.nvars(),
            model.dim
        )));
    }
    if a.pole_bound() > model.max_pole {
        return Err(Error::PoleTooDeep { found: a.pole_bound(), allowed: model.max_pole });
    }
    if let Section::Witt(w) = a {
        if w.len() > model.witt_length {
            return Err(Error::UnsupportedWittLength(w.len()));
        }
    }
    Ok(())
}

/// `Δ` with every coefficient computed below `t^cap`.
pub fn delta_capped(a: &Section, model: &DilatationModel, cap: i64) -> Result<Delta> {
    check_input(a, model)?;
    let a = a.truncate(model.precision);
    let k = model.max_pole;
    let cap = cap.min(model.precision);
    let value = match &a {
        Section::Function(f) => {
            let p2 = model.pullback2_scaled(f, k, cap)?;
            let p1 = model.embed(f).mul_trunc(&model.w_power(k as u32, cap + k)?, cap)?;
            Section::Function(p2.sub(&p1))
        }
        Section::Form(w) => {
            let wk = model.w_power(k as u32, cap + k)?;
            let mut out = DiffForm::zero(model.field, model.ambient_nvars(), w.degree());
            for (mask, c) in w.terms() {
                let coef = model.pullback2_scaled(c, k, cap)?;
                out = out.add(&model.basis_image(mask)?.scale_trunc(&coef, cap)?);
                let p1 = model.embed(c).mul_trunc(&wk, cap)?;
                out = out.sub(&DiffForm::term(mask, p1));
            }
            Section::Form(out.truncate(cap.min(w.precision())))
        }
        Section::Witt(x) => {
            let p = x.p() as i64;
            let n = x.len();
            let cap_in = cap + p.pow(n as u32 - 1) * k;
            let mut p2 = Vec::with_capacity(n);
            let mut p1 = Vec::with_capacity(n);
            for (i, c) in x.components().iter().enumerate() {
                let scale = k * p.pow(i as u32);
                p2.push(model.pullback2_scaled(c, scale, cap_in)?);
                let wk = model.w_power(scale as u32, cap_in + k)?;
                p1.push(model.embed(c).mul_trunc(&wk, cap_in)?);
            }
            let p2 = WittVector::new(x.p(), p2)?;
            let p1 = WittVector::new(x.p(), p1)?;
            Section::Witt(p2.sub_trunc(&p1, cap)?)
        }
    };
    Ok(Delta { value, clearing: k as u32 })
}

/// `Δ` to the full model precision.
pub fn delta(a: &Section, model: &DilatationModel) -> Result<Delta> {
    delta_capped(a, model, model.precision)
}

/// Expand `Δ = u^K · value` with the truncated unit series (`n >= 2` only).
pub fn expand_delta(d: &Delta, model: &DilatationModel) -> Result<Section> {
    let u = model.unit().ok_or(Error::UnsupportedLevel(model.level))?;
    let uk = u.pow_trunc(d.clearing, u.precision())?;
    Ok(match &d.value {
        Section::Function(f) => Section::Function(f.mul(&uk)?),
        Section::Form(w) => Section::Form(w.scale(&uk)?),
        Section::Witt(x) => Section::Witt(x.teichmuller_scale(&uk, u.precision())?),
    })
}

/// Whether `p₂*a − p₁*a` is regular on the chart, i.e. `a ∈ F^AS(X, nD)`.
pub fn as_member(a: &Section, model: &DilatationModel) -> Result<bool> {
    let d = delta_capped(a, model, 1)?;
    if d.value.precision() < 1 {
        return Err(Error::PrecisionUnderflow(d.value.precision()));
    }
    Ok(d.value.is_regular())
}

/// Membership at any level `n >= 0`; level 0 is regularity on `X`.
pub fn oracle_member(a: &Section, level: u32, opts: &super::ModelOptions) -> Result<bool> {
    if level == 0 {
        return Ok(a.is_regular());
    }
    let model = model_for(a, level, opts)?;
    as_member(a, &model)
}

/// The chart matching an input's field, dimension, pole bound and Witt length.
pub fn model_for(a: &Section, level: u32, opts: &super::ModelOptions) -> Result<DilatationModel> {
    DilatationModel::build_with(a.field(), a.nvars() + 1, level, a.pole_bound(), a.witt_length(), opts)
}

/// Smallest level at which the oracle reports membership, searching up to `limit`.
pub fn oracle_conductor(a: &Section, limit: u32, opts: &super::ModelOptions) -> Result<Option<u32>> {
    for level in 0..=limit {
        if oracle_member(a, level, opts)? {
            return Ok(Some(level));
        }
    }
    Ok(None)
}

/// `a ∈ Σ_j F^j(fil_r)`, decided through the oracle.
pub fn fsat_member(a: &WittVector, r: u32) -> Result<bool> {
    oracle_member(&Section::Witt(a.clone()), r, &super::ModelOptions::default())
}

/// Smallest `r` with [`fsat_member`]; the weighted pole order plus one always works.
pub fn fsat_conductor(a: &WittVector) -> Result<u32> {
    let limit = crate::witt::matsuda_conductor(a);
    Ok(oracle_conductor(&Section::Witt(a.clone()), limit, &super::ModelOptions::default())?.unwrap_or(limit))
}
