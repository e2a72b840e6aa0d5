use std::collections::BTreeMap;

use super::form::{mask_indices, PolyForm};

/// Components of `p₂*β − p₁*β` modulo the square of the diagonal ideal:
/// `Σ_i θ_i ⊗ δ_i + Σ_i γ_i ∧ dθ_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalParts {
    /// `γ_i`, degree `j - 1`, keyed by variable index.
    pub gamma: BTreeMap<usize, PolyForm>,
    /// `δ_i`, degree `j`, keyed by variable index.
    pub delta: BTreeMap<usize, PolyForm>,
}

impl DiagonalParts {
    pub fn gamma_is_zero(&self) -> bool {
        self.gamma.is_empty()
    }
}

/// For `β = f dz_K`, `γ_{k_s} = (-1)^{j-s} f dz_{K∖k_s}` and `δ_i = ∂f/∂z_i dz_K`;
/// extended linearly.
pub fn diagonal_decomposition(beta: &PolyForm) -> DiagonalParts {
    let (field, nvars, j) = (beta.field(), beta.nvars(), beta.degree());
    let mut gamma: BTreeMap<usize, PolyForm> = BTreeMap::new();
    let mut delta: BTreeMap<usize, PolyForm> = BTreeMap::new();
    for (mask, f) in beta.terms() {
        let idx = mask_indices(mask);
        for (pos, &k) in idx.iter().enumerate() {
            let sign = if (j - 1 - pos) % 2 == 0 { 1 } else { -1 };
            gamma
                .entry(k)
                .or_insert_with(|| PolyForm::zero(field, nvars, j - 1))
                .add_term(mask & !(1u64 << k), &f.scale_int(sign));
        }
        for i in 0..nvars {
            delta
                .entry(i)
                .or_insert_with(|| PolyForm::zero(field, nvars, j))
                .add_term(mask, &f.partial_derivative(i));
        }
    }
    gamma.retain(|_, v| !v.is_zero());
    delta.retain(|_, v| !v.is_zero());
    DiagonalParts { gamma, delta }
}
