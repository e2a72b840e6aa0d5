use crate::algebra::{Field, Poly, TLaurent, EXACT};
use crate::error::{Error, Result};
use crate::forms::{dvar, DiffForm, DT};

/// Default bound on the Frobenius exponent `s` accepted in `τ_i^{p^s}` shapes.
pub const DEFAULT_S_MAX: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelOptions {
    /// Added on top of the policy precision.
    pub guard: i64,
    /// Explicit precision; must not be below the policy bound.
    pub precision: Option<i64>,
    pub s_max: u32,
}

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions { guard: 0, precision: None, s_max: DEFAULT_S_MAX }
    }
}

/// `N = (n+1)·M·p^{n_w-1} + 4`: enough for every coefficient below `t^1` of `Δ` to be
/// exact for inputs with pole at most `M`.
pub fn precision_policy(field: Field, level: u32, max_pole: i64, witt_length: usize) -> i64 {
    let p = field.characteristic().max(1) as i64;
    (level as i64 + 1) * max_pole * p.pow(witt_length.saturating_sub(1) as u32) + 4
}

/// The chart `Spec C` of the dilatation `P^{(nD)}_X` over `X = A^{d-1} × A^1_t`:
/// `C = k[t, x, τ, τ_1..τ_{d-1}][1/w]` with `w = 1 + τ t^{n-1}`, where
/// `p₂*(t) = t·w` and `p₂*(x_i) = x_i + t^n τ_i`.
///
/// Ambient variables are `x_1..x_{d-1}` (indices `0..d-1`), `τ` (index `d-1`) and
/// `τ_1..τ_{d-1}` (indices `d..2d-1`). Input objects use the variables `x_i` only.
#[derive(Clone, Debug)]
pub struct DilatationModel {
    pub field: Field,
    pub dim: usize,
    pub level: u32,
    pub max_pole: i64,
    pub witt_length: usize,
    pub precision: i64,
    pub s_max: u32,
    unit: Option<TLaurent>,
    w: TLaurent,
    x_image: Vec<TLaurent>,
    dt_image: DiffForm,
    dx_image: Vec<DiffForm>,
}

impl DilatationModel {
    pub fn build(field: Field, dim: usize, level: u32, max_pole: i64) -> Result<DilatationModel> {
        DilatationModel::build_with(field, dim, level, max_pole, 1, &ModelOptions::default())
    }

    pub fn build_with(
        field: Field,
        dim: usize,
        level: u32,
        max_pole: i64,
        witt_length: usize,
        opts: &ModelOptions,
    ) -> Result<DilatationModel> {
        if level == 0 {
            return Err(Error::UnsupportedLevel(0));
        }
        if dim == 0 || dim > 32 {
            return Err(Error::Input(format!("dimension {dim} is not supported")));
        }
        if max_pole < 0 {
            return Err(Error::Input("negative pole bound".into()));
        }
        let policy = precision_policy(field, level, max_pole, witt_length) + opts.guard.max(0);
        let precision = match opts.precision {
            Some(n) if n < policy => {
                return Err(Error::Input(format!("precision {n} is below the policy bound {policy}")));
            }
            Some(n) => n,
            None => policy,
        };
        let nv = 2 * dim - 1;
        let n = level as i64;
        let tau = |i: usize| Poly::var(field, nv, i);
        let tau_index = dim - 1;
        let one = TLaurent::one(field, nv);
        let w = one.add(&TLaurent::monomial(tau(tau_index), n - 1));
        let unit = if level >= 2 { Some(w.truncate(precision).unit_inverse()?) } else { None };
        let x_image = (0..dim - 1)
            .map(|i| TLaurent::monomial(tau(i), 0).add(&TLaurent::monomial(tau(dim + i), n)))
            .collect();
        let dt_image = DiffForm::term(DT, one.add(&TLaurent::monomial(tau(tau_index).scale_int(n), n - 1)))
            .add(&DiffForm::term(dvar(tau_index), TLaurent::t_power(field, nv, n)));
        let dx_image = (0..dim - 1)
            .map(|i| {
                DiffForm::term(dvar(i), one.clone())
                    .add(&DiffForm::term(DT, TLaurent::monomial(tau(dim + i).scale_int(n), n - 1)))
                    .add(&DiffForm::term(dvar(dim + i), TLaurent::t_power(field, nv, n)))
            })
            .collect();
        Ok(DilatationModel {
            field,
            dim,
            level,
            max_pole,
            witt_length,
            precision,
            s_max: opts.s_max,
            unit,
            w,
            x_image,
            dt_image,
            dx_image,
        })
    }

    /// Number of variables of the ambient coefficient ring.
    pub fn ambient_nvars(&self) -> usize {
        2 * self.dim - 1
    }

    pub fn input_nvars(&self) -> usize {
        self.dim - 1
    }

    pub fn tau_var(&self) -> usize {
        self.dim - 1
    }

    pub fn tau_i_var(&self, i: usize) -> usize {
        self.dim + i
    }

    /// `w = 1 + τ t^{n-1}`, so that `p₂*(t) = t·w`.
    pub fn w(&self) -> &TLaurent {
        &self.w
    }

    /// `u = w^{-1}` to the model precision; only a `t`-adic series when `n >= 2`.
    pub fn unit(&self) -> Option<&TLaurent> {
        self.unit.as_ref()
    }

    /// `p₂*(x_i) = x_i + t^n τ_i`.
    pub fn x_image(&self, i: usize) -> &TLaurent {
        &self.x_image[i]
    }

    /// `p₂*(dt) = (1 + nτt^{n-1}) dt + t^n dτ`.
    pub fn dt_image(&self) -> &DiffForm {
        &self.dt_image
    }

    /// `p₂*(dx_i) = dx_i + n t^{n-1} τ_i dt + t^n dτ_i`.
    pub fn dx_image(&self, i: usize) -> &DiffForm {
        &self.dx_image[i]
    }

    /// Embed an input-ring series into the ambient ring (`p₁*`).
    pub fn embed(&self, c: &TLaurent) -> TLaurent {
        let map: Vec<usize> = (0..self.input_nvars()).collect();
        c.embed(self.ambient_nvars(), &map)
    }

    pub fn embed_poly(&self, c: &Poly) -> Poly {
        let map: Vec<usize> = (0..self.input_nvars()).collect();
        c.embed(self.ambient_nvars(), &map)
    }

    /// `w^k` computed below `t^cap`.
    pub fn w_power(&self, k: u32, cap: i64) -> Result<TLaurent> {
        self.w.pow_trunc(k, cap)
    }

    /// `w^extra · p₂*(c)` below `t^cap`, where `p₂*(t^e) = t^e w^e`. Requires
    /// `extra + v(c) >= 0` so the result is polynomial in `w`.
    pub fn pullback2_scaled(&self, c: &TLaurent, extra: i64, cap: i64) -> Result<TLaurent> {
        let nv = self.ambient_nvars();
        let cap = cap.min(c.precision());
        let mut out = TLaurent::zero(self.field, nv, cap);
        // images carry poles, so the powers of w are needed that much further
        let wcap = cap + c.pole_bound();
        let mut w_powers: Vec<TLaurent> = vec![TLaurent::one(self.field, nv).truncate(wcap)];
        for (e, poly) in c.terms() {
            if e >= cap {
                break;
            }
            let k = e + extra;
            if k < 0 {
                return Err(Error::PoleTooDeep { found: -e, allowed: extra });
            }
            while w_powers.len() <= k as usize {
                let next = w_powers[w_powers.len() - 1].mul_trunc(&self.w, wcap)?;
                w_powers.push(next);
            }
            let image = TLaurent::eval_poly(poly, &self.x_image, nv, cap - e)?.shift(e);
            out = out.add(&image.mul_trunc(&w_powers[k as usize], cap)?);
        }
        Ok(out)
    }

    /// `p₂*` of the basis element `dK` of an input form, as an exact ambient form.
    pub fn basis_image(&self, mask: u64) -> Result<DiffForm> {
        let mut acc = DiffForm::term(0, TLaurent::one(self.field, self.ambient_nvars()));
        for i in crate::forms::mask_indices(mask) {
            let factor = if i == 0 { &self.dt_image } else { &self.dx_image[i - 1] };
            acc = acc.wedge_trunc(factor, EXACT)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_series_p3_n2() {
        let m = DilatationModel::build(Field::Prime(3), 1, 2, 1).unwrap();
        let u = m.unit().unwrap();
        let tau = Poly::var(Field::Prime(3), 1, 0);
        for k in 0..4 {
            let expect = tau.pow(k as u32).scale_int(if k % 2 == 0 { 1 } else { -1 });
            assert_eq!(u.coefficient(k).unwrap(), expect);
        }
        assert_eq!(u.mul(m.w()).unwrap(), TLaurent::one(Field::Prime(3), 1).truncate(m.precision));
    }

    #[test]
    fn policy_and_override() {
        assert_eq!(precision_policy(Field::Prime(3), 2, 2, 2), 3 * 2 * 3 + 4);
        let opts = ModelOptions { precision: Some(3), ..Default::default() };
        assert!(DilatationModel::build_with(Field::Prime(3), 1, 2, 2, 1, &opts).is_err());
    }

    #[test]
    fn level_one_has_no_unit_series() {
        let m = DilatationModel::build(Field::Prime(2), 2, 1, 3).unwrap();
        assert!(m.unit().is_none());
    }
}
