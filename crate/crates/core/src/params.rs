use serde::Serialize;

use crate::dyadic::Dyadic;

/// Strength parameters `(s, δ, γ)` plus the game constants they were derived
/// from. `s` may exceed any vertex count at desk scale, hence `u128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StrengthParams {
    pub s: u128,
    pub delta: u64,
    #[serde(serialize_with = "ser_dyadic")]
    pub gamma: Dyadic,
    #[serde(serialize_with = "ser_dyadic")]
    pub kappa: Dyadic,
    #[serde(serialize_with = "ser_dyadic")]
    pub psi: Dyadic,
    #[serde(serialize_with = "ser_dyadic")]
    pub alpha: Dyadic,
    pub l_max: u32,
}

fn ser_dyadic<S: serde::Serializer>(d: &Dyadic, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&d.to_string())
}

impl StrengthParams {
    /// Only `(s, δ, γ)` matter to the certifiers.
    pub fn simple(s: u128, delta: u64, gamma: Dyadic) -> Self {
        StrengthParams {
            s,
            delta,
            gamma,
            kappa: gamma,
            psi: Dyadic::ONE,
            alpha: Dyadic::ONE,
            l_max: 0,
        }
    }

    /// Whether an inner crossing weight meets the `γ·δ` floor.
    pub fn inner_weight_ok(&self, inner: u64) -> bool {
        match self.gamma.checked_mul_int(self.delta as u128) {
            Some(gd) => Dyadic::from_int(inner as u128) >= gd,
            None => false,
        }
    }
}
