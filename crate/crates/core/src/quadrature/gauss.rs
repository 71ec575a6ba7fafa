//! Composite Gauss–Legendre quadrature with adaptive panel bisection for
//! vector-valued integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use super::QuadratureError;

pub const GAUSS_ORDER: usize = 16;

/// Nodes and weights of the `GAUSS_ORDER`-point rule on `[-1, 1]`.
pub fn gauss_legendre() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre_rule(GAUSS_ORDER))
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

pub fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Neumaier-compensated sum.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn panel_rule(f: &dyn Fn(f64) -> Vec<f64>, a: f64, b: f64, dim: usize) -> Vec<f64> {
    let (nodes, weights) = gauss_legendre();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = vec![0.0; dim];
    for (x, w) in nodes.iter().zip(weights) {
        let v = f(mid + half * x);
        for (s, vi) in acc.iter_mut().zip(v) {
            *s += w * vi;
        }
    }
    acc.iter_mut().for_each(|s| *s *= half);
    acc
}

#[derive(Clone, Debug)]
pub struct QuadOptions {
    /// Relative accuracy target per component.
    pub rel_tol: f64,
    /// Geometric grading levels toward each endpoint of the base mesh.
    pub grading_levels: u32,
    /// Uniform panels in the interior of the base mesh.
    pub interior_panels: usize,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: 1e-13,
            grading_levels: 6,
            interior_panels: 8,
            max_panels: 40_000,
        }
    }
}

impl QuadOptions {
    /// The same rule with every base panel halved.
    pub fn refined(&self) -> Self {
        QuadOptions {
            grading_levels: self.grading_levels + 1,
            interior_panels: self.interior_panels * 2,
            ..self.clone()
        }
    }
}

/// Breakpoints of `[a, b]` graded geometrically toward both ends.
pub fn graded_mesh(a: f64, b: f64, opts: &QuadOptions) -> Vec<f64> {
    let mut u = vec![0.0, 1.0];
    for k in 1..=opts.grading_levels {
        let h = 0.25 * 0.5f64.powi(k as i32);
        u.push(h);
        u.push(1.0 - h);
    }
    let m = opts.interior_panels.max(1);
    for i in 0..=m {
        u.push(0.25 + 0.5 * i as f64 / m as f64);
    }
    u.sort_by(|x, y| x.partial_cmp(y).unwrap());
    u.dedup();
    u.into_iter().map(|v| a + (b - a) * v).collect()
}

struct Panel {
    a: f64,
    b: f64,
    value: Vec<f64>,
    err: Vec<f64>,
    key: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.total_cmp(&other.key)
    }
}

/// Integral estimate with a per-component error bound.
#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: Vec<f64>,
    pub error: Vec<f64>,
    pub panels: usize,
}

/// Adaptive composite quadrature of a `dim`-valued integrand over `[a, b]`.
/// Each panel's estimate is the two-half rule, with the difference to the
/// single-panel rule as its error; the worst panel is split until the summed
/// error meets the relative target for every component.
pub fn integrate(
    f: &dyn Fn(f64) -> Vec<f64>,
    a: f64,
    b: f64,
    dim: usize,
    opts: &QuadOptions,
) -> Result<QuadResult, QuadratureError> {
    let eval_panel = |a: f64, b: f64| {
        let whole = panel_rule(f, a, b, dim);
        let m = 0.5 * (a + b);
        let left = panel_rule(f, a, m, dim);
        let right = panel_rule(f, m, b, dim);
        let value: Vec<f64> = left.iter().zip(&right).map(|(l, r)| l + r).collect();
        let err: Vec<f64> = value.iter().zip(&whole).map(|(v, w)| (v - w).abs()).collect();
        (value, err)
    };
    let mesh = graded_mesh(a, b, opts);
    let mut panels: Vec<Panel> = mesh
        .windows(2)
        .map(|w| {
            let (value, err) = eval_panel(w[0], w[1]);
            Panel {
                a: w[0],
                b: w[1],
                value,
                err,
                key: 0.0,
            }
        })
        .collect();
    let scale = |ps: &[Panel]| -> Vec<f64> {
        (0..dim)
            .map(|i| ps.iter().map(|p| p.value[i].abs()).sum::<f64>())
            .collect()
    };
    let mut scales = scale(&panels);
    let keyed = |p: &mut Panel, scales: &[f64]| {
        p.key = p
            .err
            .iter()
            .zip(scales)
            .map(|(e, s)| if *s > 0.0 { e / s } else { 0.0 })
            .fold(0.0, f64::max);
    };
    let mut heap = BinaryHeap::new();
    for mut p in panels.drain(..) {
        keyed(&mut p, &scales);
        heap.push(p);
    }
    let converged = |heap: &BinaryHeap<Panel>, scales: &[f64]| {
        (0..dim).all(|i| {
            let e: f64 = heap.iter().map(|p| p.err[i]).sum();
            e <= opts.rel_tol * scales[i]
        })
    };
    let mut splits = 0usize;
    while !converged(&heap, &scales) {
        if heap.len() >= opts.max_panels {
            let worst = (0..dim)
                .map(|i| {
                    let e: f64 = heap.iter().map(|p| p.err[i]).sum();
                    if scales[i] > 0.0 {
                        e / scales[i]
                    } else {
                        0.0
                    }
                })
                .fold(0.0, f64::max);
            return Err(QuadratureError::NonConvergent {
                panels: heap.len(),
                achieved: worst,
                target: opts.rel_tol,
            });
        }
        let p = heap.pop().unwrap();
        let m = 0.5 * (p.a + p.b);
        for (lo, hi) in [(p.a, m), (m, p.b)] {
            let (value, err) = eval_panel(lo, hi);
            let mut q = Panel {
                a: lo,
                b: hi,
                value,
                err,
                key: 0.0,
            };
            keyed(&mut q, &scales);
            heap.push(q);
        }
        splits += 1;
        if splits.is_multiple_of(64) {
            let all: Vec<Panel> = heap.drain().collect();
            scales = scale(&all);
            for mut p in all {
                keyed(&mut p, &scales);
                heap.push(p);
            }
        }
    }
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: Vec<f64> = (0..dim)
        .map(|i| neumaier_sum(panels.iter().map(|p| p.value[i])))
        .collect();
    let error: Vec<f64> = (0..dim)
        .map(|i| {
            let diff: f64 = panels.iter().map(|p| p.err[i]).sum();
            let mag: f64 = panels.iter().map(|p| p.value[i].abs()).sum();
            diff + 64.0 * f64::EPSILON * mag
        })
        .collect();
    Ok(QuadResult {
        value,
        error,
        panels: panels.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // ∫ x^30 over [-1,1] = 2/31
        let v: f64 = x.iter().zip(w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((v - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_vector_integration() {
        let f = |t: f64| vec![t.sin(), (-t * t).exp(), 1.0 / (1.0 + 25.0 * t * t)];
        let r = integrate(&f, 0.0, 3.0, 3, &QuadOptions::default()).unwrap();
        // √π/2 · erf(3)
        let want = [1.0 - 3f64.cos(), std::f64::consts::PI.sqrt() / 2.0 * 0.999_977_909_503_001_4, 15f64.atan() / 5.0];
        for (i, (v, w)) in r.value.iter().zip(want).enumerate() {
            assert!((v - w).abs() < 1e-13, "{i}: {v}");
            assert!(r.error[i] < 1e-12);
        }
    }

    #[test]
    fn mesh_is_graded_and_monotone() {
        let m = graded_mesh(0.0, 1.0, &QuadOptions::default());
        assert!(m.windows(2).all(|w| w[0] < w[1]));
        assert!(m[1] - m[0] < 0.01);
        assert!(m[m.len() - 1] - m[m.len() - 2] < 0.01);
    }

    #[test]
    fn compensated_sum() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(neumaier_sum(v), 2.0);
    }
}
