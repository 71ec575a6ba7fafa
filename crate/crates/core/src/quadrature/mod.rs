//! Numeric verification engine: test profiles, basis integrals by radial
//! reduction, direct factor quadrature, inequality verification and
//! sharpness sweeps.

mod gauss;
mod integrals;
mod profile;

pub mod catalog;
pub mod sharpness;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::form::FormBasis;
use crate::symbolic::SymbolicError;

pub use gauss::{gauss_legendre, gauss_legendre_rule, graded_mesh, integrate, neumaier_sum, QuadOptions, QuadResult, GAUSS_ORDER};
pub use integrals::{
    basis_integrals, basis_integrals_with, direct_factor_quadrature, direct_factor_quadrature_with,
    standard_basis, vector_factor_quadrature, weighted_value_integral, NumericOperator, MAX_PROFILE_ORDER,
};
pub use profile::{plateau, ProfileShape, TestProfile};
pub(crate) use profile::smooth_step;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadratureError {
    #[error("adaptive refinement stopped at {panels} panels with relative error {achieved:e} (target {target:e})")]
    NonConvergent { panels: usize, achieved: f64, target: f64 },
    #[error("operator of order {needed} exceeds the profile derivative order {available}")]
    InsufficientOrder { needed: u32, available: u32 },
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// Quadrature value with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralEntry {
    pub value: f64,
    pub error: f64,
}

/// Numeric values of basis integrals for one profile.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntegralSet {
    entries: BTreeMap<FormBasis, IntegralEntry>,
}

impl IntegralSet {
    pub fn from_entries(entries: impl IntoIterator<Item = (FormBasis, IntegralEntry)>) -> Self {
        IntegralSet {
            entries: entries.into_iter().collect(),
        }
    }

    pub fn get(&self, b: FormBasis) -> Option<f64> {
        self.entries.get(&b).map(|e| e.value)
    }

    pub fn entry(&self, b: FormBasis) -> Option<IntegralEntry> {
        self.entries.get(&b).copied()
    }

    pub fn insert(&mut self, b: FormBasis, e: IntegralEntry) {
        self.entries.insert(b, e);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&FormBasis, &IntegralEntry)> {
        self.entries.iter()
    }
}
