//! Lattice partitions of unity, the localization constant ledger and the
//! multi-center strongly singular potential `W₀`.

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::jet::Jet;
use crate::quadrature::catalog::{profile_suite, Suite};
use crate::quadrature::{basis_integrals, smooth_step, weighted_value_integral, QuadratureError, TestProfile};
use crate::form::FormBasis;
use crate::symbolic::{int, ratio, rational_serde, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LocalizationError {
    #[error("need at least one center")]
    NoCenters,
    #[error("center {index} has dimension {got}, expected {expected}")]
    Dimension { index: usize, got: usize, expected: usize },
    #[error("centers {i} and {j} coincide")]
    Separation { i: usize, j: usize },
    #[error("covering fails at {point:?}: Σφ(x−x_j)² = {value} < 1/2")]
    Covering { point: Vec<f64>, value: f64 },
    #[error("invalid ledger: {0}")]
    Ledger(String),
    #[error("inadmissible potential: {0}")]
    Admissibility(String),
    #[error("W₀ is singular at center {index}")]
    Singularity { index: usize },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Base bump `φ(ρ)`: 1 for `ρ ≤ 1/2`, 0 for `ρ ≥ 1`, as a jet in `ρ`.
pub fn base_bump(rho: f64) -> [f64; 3] {
    let z = Jet::variable(rho, 2).scale(-2.0).add_scalar(2.0);
    let d = smooth_step(&z).derivatives();
    [d[0], d[1], d[2]]
}

/// Value, gradient and Laplacian of `x ↦ φ(|x − c|)`.
fn shifted_bump(x: &[f64], c: &[f64]) -> (f64, Vec<f64>, f64) {
    let n = x.len();
    let diff: Vec<f64> = x.iter().zip(c).map(|(a, b)| a - b).collect();
    let rho = diff.iter().map(|v| v * v).sum::<f64>().sqrt();
    if rho <= 0.5 {
        return (1.0, vec![0.0; n], 0.0);
    }
    if rho >= 1.0 {
        return (0.0, vec![0.0; n], 0.0);
    }
    let [v, d1, d2] = base_bump(rho);
    let grad = diff.iter().map(|u| d1 * u / rho).collect();
    (v, grad, d2 + (n as f64 - 1.0) * d1 / rho)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Union of axis-aligned boxes, each inflated by a Euclidean radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorkingRegion {
    /// `(lo, hi)` corners; a point box is a ball of the inflation radius.
    pub boxes: Vec<(Vec<f64>, Vec<f64>)>,
    pub radius: f64,
}

impl WorkingRegion {
    /// Bounding box of the centers inflated by 1/2.
    pub fn bounding(centers: &[Vec<f64>]) -> Self {
        let dim = centers.first().map_or(0, Vec::len);
        let lo = (0..dim)
            .map(|k| centers.iter().map(|c| c[k]).fold(f64::INFINITY, f64::min))
            .collect();
        let hi = (0..dim)
            .map(|k| centers.iter().map(|c| c[k]).fold(f64::NEG_INFINITY, f64::max))
            .collect();
        WorkingRegion {
            boxes: vec![(lo, hi)],
            radius: 0.5,
        }
    }

    /// Union of the balls `B(x_j; 1/2)`.
    pub fn around(centers: &[Vec<f64>]) -> Self {
        WorkingRegion {
            boxes: centers.iter().map(|c| (c.clone(), c.clone())).collect(),
            radius: 0.5,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.boxes.iter().any(|(lo, hi)| {
            let d2: f64 = x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(v, (l, h))| {
                    let e = (l - v).max(v - h).max(0.0);
                    e * e
                })
                .sum();
            d2 <= self.radius * self.radius * (1.0 + 1e-12)
        })
    }

    /// Points of a uniform grid with `per_axis` nodes on the inflated
    /// bounding box that lie inside the region.
    pub fn grid(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let dim = self.boxes.first().map_or(0, |b| b.0.len());
        let lo: Vec<f64> = (0..dim)
            .map(|k| self.boxes.iter().map(|b| b.0[k]).fold(f64::INFINITY, f64::min) - self.radius)
            .collect();
        let hi: Vec<f64> = (0..dim)
            .map(|k| self.boxes.iter().map(|b| b.1[k]).fold(f64::NEG_INFINITY, f64::max) + self.radius)
            .collect();
        uniform_grid(&lo, &hi, per_axis)
            .into_iter()
            .filter(|x| self.contains(x))
            .collect()
    }
}

/// Tensor grid with `per_axis` nodes per coordinate, endpoints included.
pub fn uniform_grid(lo: &[f64], hi: &[f64], per_axis: usize) -> Vec<Vec<f64>> {
    let n = lo.len();
    let node = |k: usize, i: usize| {
        if per_axis <= 1 {
            0.5 * (lo[k] + hi[k])
        } else {
            lo[k] + (hi[k] - lo[k]) * i as f64 / (per_axis - 1) as f64
        }
    };
    let total = per_axis.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            (0..n)
                .map(|k| {
                    let i = idx % per_axis;
                    idx /= per_axis;
                    node(k, i)
                })
                .collect()
        })
        .collect()
}

/// Values, gradients and Laplacians of the normalized partition at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionSample {
    /// `Σ φ(x − x_j)²` before normalization.
    pub covering: f64,
    pub values: Vec<f64>,
    pub gradients: Vec<Vec<f64>>,
    pub laplacians: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpPartition {
    dim: usize,
    centers: Vec<Vec<f64>>,
    region: WorkingRegion,
}

/// Sample density of the covering check at construction.
pub const COVERING_GRID: usize = 41;

impl BumpPartition {
    /// Builds the partition on the default working region, the bounding box
    /// of the centers inflated by radius 1/2.
    pub fn new(centers: Vec<Vec<f64>>, dim: usize) -> Result<Self, LocalizationError> {
        let region = WorkingRegion::bounding(&centers);
        BumpPartition::with_region(centers, dim, region)
    }

    /// Builds the partition and checks separation and the covering condition
    /// on a sample grid of `region`.
    pub fn with_region(centers: Vec<Vec<f64>>, dim: usize, region: WorkingRegion) -> Result<Self, LocalizationError> {
        if centers.is_empty() {
            return Err(LocalizationError::NoCenters);
        }
        for (index, c) in centers.iter().enumerate() {
            if c.len() != dim {
                return Err(LocalizationError::Dimension {
                    index,
                    got: c.len(),
                    expected: dim,
                });
            }
        }
        for i in 0..centers.len() {
            for j in i + 1..centers.len() {
                if centers[i] == centers[j] {
                    return Err(LocalizationError::Separation { i, j });
                }
            }
        }
        let p = BumpPartition { dim, centers, region };
        p.check_covering(&p.region.grid(COVERING_GRID))?;
        Ok(p)
    }

    /// Centers `{−k, …, k}ⁿ`.
    pub fn unit_lattice(dim: usize, k: i64) -> Result<Self, LocalizationError> {
        let side = (2 * k + 1) as usize;
        let lo = vec![-k as f64; dim];
        let hi = vec![k as f64; dim];
        BumpPartition::new(uniform_grid(&lo, &hi, side), dim)
    }

    pub fn translated(&self, shift: &[f64]) -> Result<Self, LocalizationError> {
        let centers = self
            .centers
            .iter()
            .map(|c| c.iter().zip(shift).map(|(a, b)| a + b).collect())
            .collect();
        let shift_box = |v: &Vec<f64>| v.iter().zip(shift).map(|(a, b)| a + b).collect();
        let region = WorkingRegion {
            boxes: self.region.boxes.iter().map(|(lo, hi)| (shift_box(lo), shift_box(hi))).collect(),
            radius: self.region.radius,
        };
        BumpPartition::with_region(centers, self.dim, region)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn region(&self) -> &WorkingRegion {
        &self.region
    }

    pub fn covering(&self, x: &[f64]) -> f64 {
        self.centers.iter().map(|c| shifted_bump(x, c).0.powi(2)).sum()
    }

    pub fn check_covering(&self, points: &[Vec<f64>]) -> Result<(), LocalizationError> {
        match points.iter().find(|x| self.covering(x) < 0.5) {
            Some(x) => Err(LocalizationError::Covering {
                point: x.clone(),
                value: self.covering(x),
            }),
            None => Ok(()),
        }
    }

    /// `φ_j = φ(·−x_j)·S^(−1/2)` with `S = Σ φ(·−x_k)²`, differentiated by
    /// the product and chain rules. Requires `S > 0`.
    pub fn sample(&self, x: &[f64]) -> PartitionSample {
        let raw: Vec<_> = self.centers.iter().map(|c| shifted_bump(x, c)).collect();
        let n = self.dim;
        let s: f64 = raw.iter().map(|(v, _, _)| v * v).sum();
        let mut grad_s = vec![0.0; n];
        let mut lap_s = 0.0;
        for (v, g, l) in &raw {
            for k in 0..n {
                grad_s[k] += 2.0 * v * g[k];
            }
            lap_s += 2.0 * (dot(g, g) + v * l);
        }
        let w = s.powf(-0.5);
        let grad_w: Vec<f64> = grad_s.iter().map(|g| -0.5 * s.powf(-1.5) * g).collect();
        let lap_w = -0.5 * s.powf(-1.5) * lap_s + 0.75 * s.powf(-2.5) * dot(&grad_s, &grad_s);
        let mut out = PartitionSample {
            covering: s,
            values: Vec::with_capacity(raw.len()),
            gradients: Vec::with_capacity(raw.len()),
            laplacians: Vec::with_capacity(raw.len()),
        };
        for (v, g, l) in &raw {
            out.values.push(v * w);
            out.gradients.push((0..n).map(|k| g[k] * w + v * grad_w[k]).collect());
            out.laplacians.push(l * w + 2.0 * dot(g, &grad_w) + v * lap_w);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub samples: usize,
    pub region_samples: usize,
    /// Sampled sup of `Σ|∇φ_j|²` over region points.
    pub sup_grad: f64,
    /// Sampled sup of `Σ(Δφ_j)²` over region points.
    pub sup_lap: f64,
    /// The same sups for the unnormalized bumps `φ(·−x_j)` over all points.
    pub raw_sup_grad: f64,
    pub raw_sup_lap: f64,
    /// `max |Σφ_j² − 1|` over region points.
    pub max_normalization_error: f64,
    pub min_covering: f64,
    pub pass: bool,
}

/// Sampled partition functionals. Normalized quantities are taken over the
/// grid points inside the working region; raw ones over every grid point.
pub fn partition_functionals(p: &BumpPartition, grid: &[Vec<f64>]) -> PartitionReport {
    struct Acc {
        region: usize,
        grad: f64,
        lap: f64,
        raw_grad: f64,
        raw_lap: f64,
        norm_err: f64,
        cover: f64,
    }
    let empty = || Acc {
        region: 0,
        grad: 0.0,
        lap: 0.0,
        raw_grad: 0.0,
        raw_lap: 0.0,
        norm_err: 0.0,
        cover: f64::INFINITY,
    };
    let merge = |a: Acc, b: Acc| Acc {
        region: a.region + b.region,
        grad: a.grad.max(b.grad),
        lap: a.lap.max(b.lap),
        raw_grad: a.raw_grad.max(b.raw_grad),
        raw_lap: a.raw_lap.max(b.raw_lap),
        norm_err: a.norm_err.max(b.norm_err),
        cover: a.cover.min(b.cover),
    };
    let acc = grid
        .par_iter()
        .map(|x| {
            let mut a = empty();
            for c in &p.centers {
                let (_, g, l) = shifted_bump(x, c);
                a.raw_grad += dot(&g, &g);
                a.raw_lap += l * l;
            }
            if p.region.contains(x) {
                let s = p.sample(x);
                a.region = 1;
                a.grad = s.gradients.iter().map(|g| dot(g, g)).sum();
                a.lap = s.laplacians.iter().map(|l| l * l).sum();
                a.norm_err = (s.values.iter().map(|v| v * v).sum::<f64>() - 1.0).abs();
                a.cover = s.covering;
            }
            a
        })
        .reduce(empty, merge);
    PartitionReport {
        samples: grid.len(),
        region_samples: acc.region,
        sup_grad: acc.grad,
        sup_lap: acc.lap,
        raw_sup_grad: acc.raw_grad,
        raw_sup_lap: acc.raw_lap,
        max_normalization_error: acc.norm_err,
        min_covering: acc.cover,
        pass: acc.norm_err <= 1e-12 && acc.cover >= 0.5 && acc.grad.is_finite() && acc.lap.is_finite(),
    }
}

/// Constants of the abstract localization estimate: local bounds
/// `W ≤ a·H + b` transfer to `(acd, ace + bc)` globally.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorganLedger {
    #[serde(with = "rational_serde")]
    pub a: Rational,
    #[serde(with = "rational_serde")]
    pub b: Rational,
    #[serde(with = "rational_serde")]
    pub c: Rational,
    #[serde(with = "rational_serde")]
    pub d: Rational,
    #[serde(with = "rational_serde")]
    pub e: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerOutcome {
    #[serde(with = "rational_serde")]
    pub form_bound: Rational,
    #[serde(with = "rational_serde")]
    pub offset: Rational,
    pub strictly_below_one: bool,
}

impl MorganLedger {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational, e: Rational) -> Result<Self, LocalizationError> {
        for (name, v) in [("a", &a), ("b", &b), ("c", &c), ("d", &d), ("e", &e)] {
            if v.is_negative() {
                return Err(LocalizationError::Ledger(format!("{name} = {v} is negative")));
            }
        }
        if c.is_zero() || d.is_zero() {
            return Err(LocalizationError::Ledger("c and d must be positive".into()));
        }
        Ok(MorganLedger { a, b, c, d, e })
    }
}

pub fn morgan_ledger(l: &MorganLedger) -> LedgerOutcome {
    let form_bound = &l.a * &l.c * &l.d;
    let offset = &l.a * &l.c * &l.e + &l.b * &l.c;
    LedgerOutcome {
        strictly_below_one: form_bound < int(1),
        form_bound,
        offset,
    }
}

/// `[n(n−4)/4]²`.
pub fn rellich_constant(n: u32) -> Rational {
    let n = n as i64;
    let c = ratio(n * (n - 4), 4);
    &c * &c
}

/// `W₀(x) = Σ γ_j |x−x_j|^(-4) e^(−δ|x−x_j|)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularPotentialW0 {
    pub dim: u32,
    pub centers: Vec<Vec<f64>>,
    #[serde(serialize_with = "strings")]
    pub couplings: Vec<Rational>,
    #[serde(serialize_with = "rational_serde::serialize")]
    pub bound: Rational,
    pub delta: f64,
}

fn strings<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

/// Admissibility-checked `W₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct W0 {
    potential: SingularPotentialW0,
    couplings: Vec<f64>,
}

pub fn build_w0(potential: SingularPotentialW0) -> Result<W0, LocalizationError> {
    let bad = |m: String| Err(LocalizationError::Admissibility(m));
    if potential.dim < 5 {
        return bad(format!("requires n ≥ 5, got n = {}", potential.dim));
    }
    if !(potential.delta > 0.0 && potential.delta.is_finite()) {
        return bad(format!("decay δ = {} must be positive", potential.delta));
    }
    if potential.centers.len() != potential.couplings.len() {
        return bad("one coupling per center".into());
    }
    if let Some(c) = potential.centers.iter().find(|c| c.len() != potential.dim as usize) {
        return bad(format!("center {c:?} is not in dimension {}", potential.dim));
    }
    let limit = rellich_constant(potential.dim);
    if potential.bound >= limit {
        return bad(format!("γ = {} must be below [n(n−4)/4]² = {limit}", potential.bound));
    }
    if let Some(g) = potential.couplings.iter().find(|g| g.abs() > potential.bound) {
        return bad(format!("|γ_j| = {} exceeds γ = {}", g.abs(), potential.bound));
    }
    let couplings = potential.couplings.iter().map(|g| g.to_f64().unwrap_or(f64::NAN)).collect();
    Ok(W0 { potential, couplings })
}

impl W0 {
    pub fn potential(&self) -> &SingularPotentialW0 {
        &self.potential
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64, LocalizationError> {
        let mut acc = Vec::with_capacity(self.couplings.len());
        for (index, (c, g)) in self.potential.centers.iter().zip(&self.couplings).enumerate() {
            let r = x.iter().zip(c).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            if r == 0.0 {
                return Err(LocalizationError::Singularity { index });
            }
            acc.push(g * r.powi(-4) * (-self.potential.delta * r).exp());
        }
        Ok(crate::quadrature::neumaier_sum(acc))
    }

    /// `γ·e^(−δR)·R^(-4)`: bound on one center's contribution at distance `R`.
    pub fn tail_bound(&self, distance: f64) -> f64 {
        self.potential.bound.to_f64().unwrap_or(f64::NAN) * (-self.potential.delta * distance).exp() * distance.powi(-4)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormBoundRow {
    pub profile: String,
    pub potential: f64,
    pub bilaplacian: f64,
    pub mass: f64,
    pub deficit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormBoundCheck {
    pub dim: u32,
    pub gamma: String,
    /// `γ / [n(n−4)/4]²`.
    pub leading: String,
    /// Smallest `b ≥ 0` making `∫W₀f² ≤ leading·∫(Δf)² + b∫f²` on the suite.
    pub fitted_b: f64,
    pub rows: Vec<FormBoundRow>,
    pub pass: bool,
}

/// Spot check of the form bound for a lone center at the origin on the
/// radial profiles of the default suite.
pub fn form_bound_check(dim: u32, gamma: &Rational, delta: f64) -> Result<FormBoundCheck, LocalizationError> {
    let w0 = build_w0(SingularPotentialW0 {
        dim,
        centers: vec![vec![0.0; dim as usize]],
        couplings: vec![gamma.clone()],
        bound: gamma.abs(),
        delta,
    })?;
    let leading = gamma.abs() / rellich_constant(dim);
    let a = leading.to_f64().unwrap_or(f64::NAN);
    let g = gamma.to_f64().unwrap_or(f64::NAN);
    let weight = |r: f64| g * r.powi(-4) * (-delta * r).exp();
    let profiles: Vec<TestProfile> = profile_suite(Suite::Default, dim)
        .into_iter()
        .map(|p| TestProfile { ell: 0, ..p })
        .collect();
    let rows = profiles
        .par_iter()
        .map(|p| {
            let ints = basis_integrals(p, &[FormBasis::Lap2, FormBasis::Val(0)])?;
            let (lap, mass) = (ints.get(FormBasis::Lap2).expect("lap"), ints.get(FormBasis::Val(0)).expect("val"));
            let potential = weighted_value_integral(&weight, p)?.value;
            Ok(FormBoundRow {
                profile: p.describe(),
                potential,
                bilaplacian: lap,
                mass,
                deficit: (potential - a * lap) / mass,
            })
        })
        .collect::<Result<Vec<_>, QuadratureError>>()?;
    let fitted_b = rows.iter().map(|r| r.deficit).fold(0.0, f64::max);
    drop(w0);
    Ok(FormBoundCheck {
        dim,
        gamma: gamma.to_string(),
        leading: leading.to_string(),
        fitted_b,
        pass: fitted_b.is_finite() && leading < int(1),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn lone_bump_is_unchanged() {
        let p = BumpPartition::new(vec![vec![0.3, -0.2]], 2).unwrap();
        let s = p.sample(&[0.5, 0.0]);
        assert_eq!(s.values, vec![1.0]);
        // raw and normalized agree wherever only this bump is active
        let grid = uniform_grid(&[-0.7, -1.2], &[1.3, 0.8], 81);
        let r = partition_functionals(&p, &grid);
        let base = grid
            .iter()
            .map(|x| {
                let (_, g, _) = shifted_bump(x, &[0.3, -0.2]);
                dot(&g, &g)
            })
            .fold(0.0, f64::max);
        assert_eq!(r.raw_sup_grad, base);
        assert!(base > 0.0);
    }

    #[test]
    fn distant_centers_do_not_interact() {
        let centers = vec![vec![0.0, 0.0], vec![3.0, 0.0]];
        // the segment between them is not covered
        assert!(matches!(
            BumpPartition::new(centers.clone(), 2),
            Err(LocalizationError::Covering { .. })
        ));
        let p = BumpPartition::with_region(centers.clone(), 2, WorkingRegion::around(&centers)).unwrap();
        for x in p.region().grid(61) {
            let s = p.sample(&x);
            for (j, c) in centers.iter().enumerate() {
                assert_eq!(s.values[j], shifted_bump(&x, c).0);
                assert_eq!(s.gradients[j], shifted_bump(&x, c).1);
            }
        }
        // off the working region a lone active bump normalizes to 1
        let s = p.sample(&[0.8, 0.0]);
        assert!((s.values[0] - 1.0).abs() <= 1e-15 && s.values[1] == 0.0);
    }

    #[test]
    fn unit_lattice_normalizes() {
        let p = BumpPartition::unit_lattice(2, 2).unwrap();
        let grid = uniform_grid(&[-2.35, -2.35], &[2.35, 2.35], 100);
        assert_eq!(grid.len(), 10_000);
        let r = partition_functionals(&p, &grid);
        assert_eq!(r.region_samples, 10_000);
        assert!(r.max_normalization_error <= 1e-12, "{}", r.max_normalization_error);
        assert!(r.pass);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let p = BumpPartition::unit_lattice(2, 1).unwrap();
        let x = [0.37, -0.61];
        let s = p.sample(&x);
        let h = 1e-4;
        for j in 0..p.centers().len() {
            let f = |dx: f64, dy: f64| p.sample(&[x[0] + dx, x[1] + dy]).values[j];
            let gx = (f(h, 0.0) - f(-h, 0.0)) / (2.0 * h);
            let gy = (f(0.0, h) - f(0.0, -h)) / (2.0 * h);
            let lap = (f(h, 0.0) + f(-h, 0.0) + f(0.0, h) + f(0.0, -h) - 4.0 * f(0.0, 0.0)) / (h * h);
            assert!(close(s.gradients[j][0], gx, 1e-6) && close(s.gradients[j][1], gy, 1e-6), "{j}");
            assert!(close(s.laplacians[j], lap, 1e-4), "{j}: {} vs {lap}", s.laplacians[j]);
        }
    }

    #[test]
    fn sups_are_stable_and_translation_invariant() {
        // grid steps 1/160 and 1/320; sampled sups of Σ(Δφ_j)² are peaked
        let p = BumpPartition::unit_lattice(2, 1).unwrap();
        let coarse = partition_functionals(&p, &p.region().grid(481));
        let fine = partition_functionals(&p, &p.region().grid(961));
        assert!(close(coarse.sup_grad, fine.sup_grad, 0.01));
        assert!(close(coarse.sup_lap, fine.sup_lap, 0.01));
        let shift = [0.3, 0.7];
        let q = p.translated(&shift).unwrap();
        let grid: Vec<Vec<f64>> = p.region().grid(481).iter().map(|x| vec![x[0] + shift[0], x[1] + shift[1]]).collect();
        let moved = partition_functionals(&q, &grid);
        assert!(close(moved.sup_grad, coarse.sup_grad, 1e-9));
        assert!(close(moved.sup_lap, coarse.sup_lap, 1e-9));
    }

    #[test]
    fn separation_is_required() {
        let err = BumpPartition::new(vec![vec![0.0], vec![0.0]], 1).unwrap_err();
        assert_eq!(err, LocalizationError::Separation { i: 0, j: 1 });
    }

    #[test]
    fn ledger_examples() {
        let l = MorganLedger::new(ratio(3, 7), int(5), int(1), int(1), int(0)).unwrap();
        let o = morgan_ledger(&l);
        assert_eq!((o.form_bound, o.offset), (ratio(3, 7), int(5)));
        let a = int(1) / rellich_constant(5);
        let l = MorganLedger::new(a, int(2), int(1), ratio(11, 10), int(9)).unwrap();
        let o = morgan_ledger(&l);
        assert_eq!(o.form_bound, ratio(88, 125));
        assert!(o.strictly_below_one);
        let o = morgan_ledger(&MorganLedger::new(int(1), int(0), int(1), int(1), int(0)).unwrap());
        assert_eq!(o.form_bound, int(1));
        assert!(!o.strictly_below_one);
        assert!(MorganLedger::new(int(1), int(0), int(0), int(1), int(0)).is_err());
    }

    #[test]
    fn w0_evaluation_and_gates() {
        let potential = |g: Rational, n: u32| SingularPotentialW0 {
            dim: n,
            centers: vec![vec![0.0; n as usize]],
            couplings: vec![g.clone()],
            bound: g,
            delta: 1.0,
        };
        let w = build_w0(potential(int(1), 5)).unwrap();
        assert!(close(w.eval(&[1.0, 0.0, 0.0, 0.0, 0.0]).unwrap(), (-1f64).exp(), 1e-15));
        assert_eq!(w.eval(&[0.0; 5]), Err(LocalizationError::Singularity { index: 0 }));
        assert_eq!(rellich_constant(5), ratio(25, 16));
        assert!(build_w0(potential(ratio(25, 16), 5)).is_err());
        assert!(build_w0(potential(ratio(24, 16), 5)).is_ok());
        assert!(build_w0(potential(int(1), 4)).is_err());
    }

    #[test]
    fn far_center_contribution_is_bounded() {
        let r = 20.0;
        let mut c2 = vec![0.0; 5];
        c2[0] = r;
        let w = build_w0(SingularPotentialW0 {
            dim: 5,
            centers: vec![vec![0.0; 5], c2],
            couplings: vec![int(0), int(1)],
            bound: int(1),
            delta: 1.0,
        })
        .unwrap();
        // near x₁ the distance to x₂ is at least R − 1/2
        let x = [0.5, 0.0, 0.0, 0.0, 0.0];
        assert!(w.eval(&x).unwrap() <= w.tail_bound(r - 0.5));
    }

    #[test]
    fn form_bound_spot_check() {
        let c = form_bound_check(5, &int(1), 1.0).unwrap();
        assert_eq!(c.leading, "16/25");
        assert!(c.pass);
        assert_eq!(c.fitted_b, 0.0);
    }
}
