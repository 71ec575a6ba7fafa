//! Annulus-supported radial test profiles with derivatives to any order.

use serde::{Deserialize, Serialize};

use super::QuadratureError;
use crate::jet::Jet;

/// Exponents below this are flushed to zero to keep derivative factors of
/// flat profiles from overflowing near the support boundary.
const FLAT_CUTOFF: f64 = -700.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProfileShape {
    /// `exp(-1/(1-t²))` with `t` the affine image of `[r0, r1]` on `[-1, 1]`.
    SmoothBump { r0: f64, r1: f64 },
    /// `r^p · χ(ln(r/c)/M)` with `χ = 1` on `[-1, 1]` and supported in
    /// `[-2, 2]`.
    PowerCutoff { p: f64, m: f64, c: f64 },
}

/// Separable test function `φ(r)·Y_ℓ(ω)` on `ℝⁿ`, with `Y_ℓ` normalized on
/// the unit sphere. `n = 1, ℓ = 0` models the half-line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestProfile {
    pub shape: ProfileShape,
    pub ell: u32,
    pub dim: u32,
    pub amplitude: f64,
}

/// `exp(-1/z)` for `z > 0`, zero otherwise.
fn flat_step(z: &Jet) -> Option<Jet> {
    if z.value() <= 0.0 {
        return None;
    }
    let e = z.recip().scale(-1.0);
    if e.value() < FLAT_CUTOFF {
        return None;
    }
    Some(e.exp())
}

/// Smooth transition from 0 (at `z ≤ 0`) to 1 (at `z ≥ 1`).
pub(crate) fn smooth_step(z: &Jet) -> Jet {
    let order = z.order();
    let one_minus = z.scale(-1.0).add_scalar(1.0);
    match (flat_step(z), flat_step(&one_minus)) {
        (None, _) => Jet::constant(0.0, order),
        (Some(_), None) => Jet::constant(1.0, order),
        (Some(h0), Some(h1)) => h0.div(&(&h0 + &h1)),
    }
}

/// Plateau cutoff: 1 on `[-1, 1]`, 0 outside `(-2, 2)`.
pub fn plateau(y: &Jet) -> Jet {
    let a = smooth_step(&y.add_scalar(2.0));
    let b = smooth_step(&y.scale(-1.0).add_scalar(2.0));
    &a * &b
}

impl TestProfile {
    pub fn smooth_bump(r0: f64, r1: f64, ell: u32, dim: u32) -> Result<Self, QuadratureError> {
        let p = TestProfile {
            shape: ProfileShape::SmoothBump { r0, r1 },
            ell,
            dim,
            amplitude: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn power_cutoff(p: f64, m: f64, c: f64, ell: u32, dim: u32) -> Result<Self, QuadratureError> {
        let prof = TestProfile {
            shape: ProfileShape::PowerCutoff { p, m, c },
            ell,
            dim,
            amplitude: 1.0,
        };
        prof.validate()?;
        Ok(prof)
    }

    pub fn scaled(&self, c: f64) -> Self {
        TestProfile {
            amplitude: self.amplitude * c,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        let bad = |msg: String| Err(QuadratureError::InvalidProfile(msg));
        if self.dim == 0 {
            return bad("dimension must be at least 1".into());
        }
        if self.dim == 1 && self.ell > 0 {
            return bad("the half-line admits only ℓ = 0".into());
        }
        match self.shape {
            ProfileShape::SmoothBump { r0, r1 } => {
                if !(r0 > 0.0 && r1 > r0 && r1.is_finite()) {
                    return bad(format!("bump support [{r0}, {r1}] is not a compact annulus"));
                }
            }
            ProfileShape::PowerCutoff { p, m, c } => {
                if !(m > 0.0 && c > 0.0 && p.is_finite() && m.is_finite() && c.is_finite()) {
                    return bad(format!("cutoff parameters p={p}, M={m}, c={c} are invalid"));
                }
            }
        }
        if !self.amplitude.is_finite() {
            return bad("amplitude must be finite".into());
        }
        Ok(())
    }

    /// `λ_ℓ = ℓ(ℓ+n-2)`.
    pub fn lambda(&self) -> f64 {
        let l = self.ell as f64;
        l * (l + self.dim as f64 - 2.0)
    }

    /// Closed radial support `[r0, r1]`.
    pub fn support(&self) -> (f64, f64) {
        match self.shape {
            ProfileShape::SmoothBump { r0, r1 } => (r0, r1),
            ProfileShape::PowerCutoff { m, c, .. } => (c * (-2.0 * m).exp(), c * (2.0 * m).exp()),
        }
    }

    /// Support in `t = ln r`.
    pub fn log_support(&self) -> (f64, f64) {
        match self.shape {
            ProfileShape::SmoothBump { r0, r1 } => (r0.ln(), r1.ln()),
            ProfileShape::PowerCutoff { m, c, .. } => (c.ln() - 2.0 * m, c.ln() + 2.0 * m),
        }
    }

    /// Taylor jet of the radial factor `φ` at `r`, in the variable `r`.
    pub fn jet(&self, r: f64, order: usize) -> Jet {
        self.jet_of(&Jet::variable(r, order))
    }

    /// `φ ∘ r` for an arbitrary inner jet `r`.
    pub fn jet_of(&self, r: &Jet) -> Jet {
        let order = r.order();
        let zero = Jet::constant(0.0, order);
        let (lo, hi) = self.support();
        if !(r.value() > lo && r.value() < hi) {
            return zero;
        }
        let phi = match self.shape {
            ProfileShape::SmoothBump { r0, r1 } => {
                let t = r.scale(2.0 / (r1 - r0)).add_scalar(-(r0 + r1) / (r1 - r0));
                let v = (&t * &t).scale(-1.0).add_scalar(1.0);
                match flat_step(&v) {
                    Some(e) => e,
                    None => return zero,
                }
            }
            ProfileShape::PowerCutoff { p, m, c } => {
                let y = r.scale(1.0 / c).ln().scale(1.0 / m);
                &r.powf(p) * &plateau(&y)
            }
        };
        phi.scale(self.amplitude)
    }

    /// `[φ, φ', φ'', φ''', φ'''']` at `r`.
    pub fn derivatives(&self, r: f64) -> [f64; 5] {
        let d = self.jet(r, 4).derivatives();
        [d[0], d[1], d[2], d[3], d[4]]
    }

    pub fn describe(&self) -> String {
        let shape = match self.shape {
            ProfileShape::SmoothBump { r0, r1 } => format!("smooth_bump({r0}, {r1})"),
            ProfileShape::PowerCutoff { p, m, c } => format!("power_cutoff(p={p}, M={m}, c={c})"),
        };
        if self.amplitude == 1.0 {
            format!("{shape}, ℓ={}, n={}", self.ell, self.dim)
        } else {
            format!("{}·{shape}, ℓ={}, n={}", self.amplitude, self.ell, self.dim)
        }
    }
}
