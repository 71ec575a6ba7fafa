//! Radial reduction of the basis integrals and direct quadrature of factored
//! forms on separable profiles.

use std::collections::BTreeMap;

use super::gauss::{integrate, QuadOptions};
use super::profile::TestProfile;
use super::{IntegralEntry, IntegralSet, QuadratureError};
use crate::form::FormBasis;
use crate::jet::Jet;
use crate::operator::{OperatorExpr, Word};
use crate::symbolic::Symbol;

/// Highest derivative order the profile oracle is trusted to supply.
pub const MAX_PROFILE_ORDER: u32 = 4;

/// Integrates `h(r)` over the profile support in `t = ln r`.
fn radial_integrate(
    p: &TestProfile,
    dim: usize,
    h: &dyn Fn(f64) -> Vec<f64>,
    opts: &QuadOptions,
) -> Result<(Vec<f64>, Vec<f64>), QuadratureError> {
    let (a, b) = p.log_support();
    let f = |t: f64| {
        let r = t.exp();
        let mut v = h(r);
        v.iter_mut().for_each(|x| *x *= r);
        v
    };
    let res = integrate(&f, a, b, dim, opts)?;
    Ok((res.value, res.error))
}

/// Integrand of a basis element at `r` from `φ, φ', φ''`.
fn basis_integrand(b: FormBasis, n: f64, lambda: f64, r: f64, d: &[f64]) -> f64 {
    let (phi, dphi) = (d[0], d[1]);
    let w = |s: u32| r.powf(n - 1.0 - s as f64);
    match b {
        FormBasis::Val(s) => phi * phi * w(s),
        FormBasis::Eul(s) => r * r * dphi * dphi * w(s),
        FormBasis::Grad(s) => (dphi * dphi + lambda * phi * phi / (r * r)) * w(s),
        FormBasis::Lap2 => {
            let lap = d[2] + (n - 1.0) * dphi / r - lambda * phi / (r * r);
            lap * lap * w(0)
        }
    }
}

pub fn basis_integrals(p: &TestProfile, basis: &[FormBasis]) -> Result<IntegralSet, QuadratureError> {
    basis_integrals_with(p, basis, &QuadOptions::default())
}

/// Basis integrals by radial reduction with `f = φ(r)Y_ℓ(ω)`, `∫|Y_ℓ|² = 1`.
pub fn basis_integrals_with(
    p: &TestProfile,
    basis: &[FormBasis],
    opts: &QuadOptions,
) -> Result<IntegralSet, QuadratureError> {
    p.validate()?;
    let n = p.dim as f64;
    let lambda = p.lambda();
    let h = |r: f64| {
        let d = p.jet(r, 2).derivatives();
        basis
            .iter()
            .map(|b| basis_integrand(*b, n, lambda, r, &d))
            .collect()
    };
    let (value, error) = radial_integrate(p, basis.len(), &h, opts)?;
    Ok(IntegralSet::from_entries(
        basis
            .iter()
            .zip(value.into_iter().zip(error))
            .map(|(b, (value, error))| (*b, IntegralEntry { value, error })),
    ))
}

/// Every basis element with the given weights, plus `LAP2`.
pub fn standard_basis(weights: &[u32]) -> Vec<FormBasis> {
    let mut out = vec![FormBasis::Lap2];
    for &s in weights {
        out.extend([FormBasis::Grad(s), FormBasis::Eul(s), FormBasis::Val(s)]);
    }
    out
}

/// Scalar operator with numerically bound coefficients.
#[derive(Clone, Debug)]
pub struct NumericOperator {
    terms: Vec<(Word, f64)>,
    order: u32,
}

impl NumericOperator {
    pub fn bind(op: &OperatorExpr, bindings: &BTreeMap<Symbol, f64>) -> Result<Self, QuadratureError> {
        let mut terms = Vec::new();
        for (w, c) in op.terms() {
            terms.push((*w, c.eval_f64(bindings)?));
        }
        Ok(NumericOperator {
            order: op.order(),
            terms,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Radial factor of `A(φ Y_ℓ)` at the jet point `r`; `phi` is the jet of
    /// `φ` at the same point, of order at least `self.order()`.
    pub fn apply_jet(&self, phi: &Jet, r: &Jet, n: f64, lambda: f64) -> f64 {
        let rinv = r.recip();
        let rinv2 = &rinv * &rinv;
        let mut acc = Vec::with_capacity(self.terms.len());
        for (w, c) in &self.terms {
            let mut g = phi.clone();
            for _ in 0..w.lpow {
                let d1 = g.differentiate();
                let d2 = d1.differentiate();
                g = &(&d2 + &(&d1 * &rinv).scale(n - 1.0)) - &(&g * &rinv2).scale(lambda);
            }
            for _ in 0..w.dpow {
                g = r * &g.differentiate();
            }
            acc.push(c * g.value() * r.value().powi(-(w.rpow as i32)));
        }
        super::neumaier_sum(acc)
    }
}

/// `∫(A f)²` for a scalar operator on `f = φ Y_ℓ`.
pub fn direct_factor_quadrature(
    op: &OperatorExpr,
    bindings: &BTreeMap<Symbol, f64>,
    p: &TestProfile,
) -> Result<IntegralEntry, QuadratureError> {
    direct_factor_quadrature_with(op, bindings, p, &QuadOptions::default())
}

pub fn direct_factor_quadrature_with(
    op: &OperatorExpr,
    bindings: &BTreeMap<Symbol, f64>,
    p: &TestProfile,
    opts: &QuadOptions,
) -> Result<IntegralEntry, QuadratureError> {
    p.validate()?;
    let mut bindings = bindings.clone();
    bindings.insert(Symbol::N, p.dim as f64);
    let a = NumericOperator::bind(op, &bindings)?;
    if a.order() > MAX_PROFILE_ORDER {
        return Err(QuadratureError::InsufficientOrder {
            needed: a.order(),
            available: MAX_PROFILE_ORDER,
        });
    }
    let n = p.dim as f64;
    let lambda = p.lambda();
    let order = a.order() as usize;
    let h = |r: f64| {
        let rj = Jet::variable(r, order);
        let phi = p.jet_of(&rj);
        let v = a.apply_jet(&phi, &rj, n, lambda);
        vec![v * v * r.powf(n - 1.0)]
    };
    let (value, error) = radial_integrate(p, 1, &h, opts)?;
    Ok(IntegralEntry {
        value: value[0],
        error: error[0],
    })
}

/// `∫|∇f + g(r) x f|²` for the radial multiplier `g`.
pub fn vector_factor_quadrature(
    g: &(dyn Fn(f64) -> f64 + Sync),
    p: &TestProfile,
) -> Result<IntegralEntry, QuadratureError> {
    p.validate()?;
    let n = p.dim as f64;
    let lambda = p.lambda();
    let h = |r: f64| {
        let d = p.jet(r, 1).derivatives();
        let radial = d[1] + r * g(r) * d[0];
        vec![(radial * radial + lambda * d[0] * d[0] / (r * r)) * r.powf(n - 1.0)]
    };
    let (value, error) = radial_integrate(p, 1, &h, &QuadOptions::default())?;
    Ok(IntegralEntry {
        value: value[0],
        error: error[0],
    })
}

/// `∫ W(r) f²` for a radial weight `W`.
pub fn weighted_value_integral(
    w: &(dyn Fn(f64) -> f64 + Sync),
    p: &TestProfile,
) -> Result<IntegralEntry, QuadratureError> {
    p.validate()?;
    let n = p.dim as f64;
    let h = |r: f64| {
        let phi = p.jet(r, 0).value();
        vec![w(r) * phi * phi * r.powf(n - 1.0)]
    };
    let (value, error) = radial_integrate(p, 1, &h, &QuadOptions::default())?;
    Ok(IntegralEntry {
        value: value[0],
        error: error[0],
    })
}
