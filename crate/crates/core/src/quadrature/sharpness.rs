//! Sharpness sweeps: ratios of the two sides of a homogeneous inequality on
//! near-extremal power profiles of growing logarithmic width.

use std::io::Write;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::catalog::{CatalogError, InequalityId};
use super::integrals::basis_integrals;
use super::profile::TestProfile;
use crate::constants::{optimize_family, InequalityFamily};
use crate::form::FormBasis;
use crate::symbolic::{int, Rational};

/// Default log-half-widths.
pub const DEFAULT_WIDTHS: [f64; 4] = [2.0, 4.0, 8.0, 16.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessPoint {
    pub width: f64,
    pub lhs: f64,
    pub weighted: f64,
    pub ratio: f64,
    /// First-order propagation of the two quadrature error estimates.
    pub ratio_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessSweep {
    pub inequality: String,
    pub dim: u32,
    pub exponent: f64,
    /// Optimal constant, exact.
    pub constant: String,
    pub constant_f64: f64,
    pub points: Vec<SharpnessPoint>,
}

impl SharpnessSweep {
    /// Every ratio at least `constant − tol`.
    pub fn bounded_below(&self, tol: f64) -> bool {
        self.points.iter().all(|p| p.ratio >= self.constant_f64 - tol)
    }

    /// Ratios nonincreasing in the width, up to `tol` relative.
    pub fn nonincreasing(&self, tol: f64) -> bool {
        self.points.windows(2).all(|w| w[1].ratio <= w[0].ratio * (1.0 + tol))
    }

    /// Relative gap between the last ratio and the constant.
    pub fn final_gap(&self) -> f64 {
        self.points
            .last()
            .map_or(f64::INFINITY, |p| (p.ratio - self.constant_f64) / self.constant_f64)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["inequality", "dim", "exponent", "width", "lhs", "weighted", "ratio", "ratio_error", "constant"])?;
        for p in &self.points {
            out.write_record([
                self.inequality.clone(),
                self.dim.to_string(),
                self.exponent.to_string(),
                p.width.to_string(),
                format!("{:e}", p.lhs),
                format!("{:e}", p.weighted),
                format!("{:.17e}", p.ratio),
                format!("{:e}", p.ratio_error),
                self.constant.clone(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Sides, profile exponent and optimal constant of a sweepable inequality.
fn setup(id: InequalityId, n: u32) -> Result<(FormBasis, FormBasis, f64, Rational), CatalogError> {
    let nf = n as f64;
    let unsupported = || CatalogError::Constraint {
        id: id.label().into(),
        reason: "sharpness sweeps cover 2.10, 2.25 and 2.33".into(),
    };
    let (lhs, rhs, p, family) = match id {
        InequalityId::Rellich => (FormBasis::Lap2, FormBasis::Val(4), -(nf - 4.0) / 2.0, InequalityFamily::Rellich),
        InequalityId::Hardy => (FormBasis::Grad(0), FormBasis::Val(2), -(nf - 2.0) / 2.0, InequalityFamily::Hardy),
        InequalityId::HalfLineRellich => (FormBasis::Lap2, FormBasis::Val(4), 1.5, InequalityFamily::Halfline),
        _ => return Err(unsupported()),
    };
    if !id.admits_dimension(n) {
        return Err(CatalogError::Constraint {
            id: id.label().into(),
            reason: format!("dimension n = {n} is outside the validity range"),
        });
    }
    let c = optimize_family(family, &int(n as i64))?
        .max_value
        .as_rational()
        .ok_or_else(unsupported)?;
    Ok((lhs, rhs, p, c))
}

/// Ratios `LHS/RHS-integral` for `power_cutoff(p, M, 1)` with `ℓ = 0`.
pub fn sharpness_sweep(id: InequalityId, n: u32, widths: &[f64]) -> Result<SharpnessSweep, CatalogError> {
    if widths.windows(2).any(|w| w[1] <= w[0]) || widths.iter().any(|w| w.is_nan() || *w <= 0.0) {
        return Err(CatalogError::Constraint {
            id: id.label().into(),
            reason: "widths must be positive and strictly increasing".into(),
        });
    }
    let (lhs, rhs, p, c) = setup(id, n)?;
    let points = widths
        .iter()
        .map(|&m| {
            let prof = TestProfile::power_cutoff(p, m, 1.0, 0, n)?;
            let ints = basis_integrals(&prof, &[lhs, rhs])?;
            let (a, b) = (ints.entry(lhs).expect("lhs"), ints.entry(rhs).expect("rhs"));
            let ratio = a.value / b.value;
            Ok(SharpnessPoint {
                width: m,
                lhs: a.value,
                weighted: b.value,
                ratio,
                ratio_error: ratio * (a.error / a.value.abs() + b.error / b.value.abs()),
            })
        })
        .collect::<Result<Vec<_>, CatalogError>>()?;
    Ok(SharpnessSweep {
        inequality: id.label().into(),
        dim: n,
        exponent: p,
        constant: c.to_string(),
        constant_f64: c.to_f64().unwrap_or(f64::NAN),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rellich_sweep_approaches_from_above() {
        let s = sharpness_sweep(InequalityId::Rellich, 5, &DEFAULT_WIDTHS).unwrap();
        assert_eq!(s.constant, "25/16");
        assert!(s.bounded_below(1e-9));
        assert!(s.nonincreasing(0.0), "{:?}", s.points);
        assert!(s.final_gap() < 0.05, "{}", s.final_gap());
    }

    #[test]
    fn csv_has_one_row_per_width() {
        let s = sharpness_sweep(InequalityId::Hardy, 3, &[2.0, 4.0]).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().starts_with("2.25,3,-0.5,2,"));
    }

    #[test]
    fn unsupported_and_invalid_inputs() {
        assert!(sharpness_sweep(InequalityId::TwoParameter, 5, &[2.0]).is_err());
        assert!(sharpness_sweep(InequalityId::Rellich, 5, &[4.0, 2.0]).is_err());
        assert!(sharpness_sweep(InequalityId::Rellich, 3, &[2.0]).is_err());
    }
}
