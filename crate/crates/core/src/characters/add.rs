use num_complex::Complex64;

use super::CharEnv;
use crate::field::FFElement;

/// `ψ_δ(α) = exp(2πi·Tr(δα)/p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddChar {
    delta: FFElement,
    delta_index: u64,
}

impl AddChar {
    pub fn new(env: &CharEnv<'_>, delta: FFElement) -> Self {
        let delta_index = env.ctx().index(&delta);
        AddChar { delta, delta_index }
    }

    pub fn from_index(env: &CharEnv<'_>, delta_index: u64) -> Self {
        AddChar { delta: env.ctx().from_index(delta_index), delta_index }
    }

    /// The canonical character `ψ_0 = λ∘Tr`, i.e. `δ = 1`.
    pub fn canonical(env: &CharEnv<'_>) -> Self {
        Self::new(env, env.ctx().one())
    }

    pub fn delta(&self) -> &FFElement {
        &self.delta
    }

    pub fn is_trivial(&self) -> bool {
        self.delta_index == 0
    }

    pub fn eval_index(&self, env: &CharEnv<'_>, idx: u64) -> Complex64 {
        env.zeta_p().get(env.trace_of(env.mul_index(self.delta_index, idx)))
    }

    pub fn eval(&self, env: &CharEnv<'_>, a: &FFElement) -> Complex64 {
        self.eval_index(env, env.ctx().index(a))
    }
}
