//! Ambient tensor-grid oracle: integrates the basis integrands of
//! `f(x) = φ(|x|)·Y(x/|x|)` over polar (n = 2) or spherical (n = 3)
//! coordinates, with Cartesian derivatives of `f` from the product rule and
//! explicit harmonic polynomials. Nothing here uses the radial reduction.

#![allow(dead_code)]

use std::f64::consts::PI;

use rellich::form::FormBasis;
use rellich::quadrature::TestProfile;

/// Normalized harmonic `c·P(x)` of degree `ℓ`, homogeneous, so that
/// `Y(ω) = c·P(ω)` on the unit sphere.
struct Harmonic {
    c: f64,
    p: fn(&[f64; 3]) -> f64,
    grad: fn(&[f64; 3]) -> [f64; 3],
    /// Pure second derivatives `∂_i² P`.
    second: fn(&[f64; 3]) -> [f64; 3],
}

fn harmonic(n: u32, ell: u32) -> Harmonic {
    match (n, ell) {
        (2, 0) => Harmonic {
            c: 1.0 / (2.0 * PI).sqrt(),
            p: |_| 1.0,
            grad: |_| [0.0; 3],
            second: |_| [0.0; 3],
        },
        (2, 1) => Harmonic {
            c: 1.0 / PI.sqrt(),
            p: |x| x[0],
            grad: |_| [1.0, 0.0, 0.0],
            second: |_| [0.0; 3],
        },
        (2, 2) => Harmonic {
            c: 1.0 / PI.sqrt(),
            p: |x| x[0] * x[0] - x[1] * x[1],
            grad: |x| [2.0 * x[0], -2.0 * x[1], 0.0],
            second: |_| [2.0, -2.0, 0.0],
        },
        (3, 0) => Harmonic {
            c: 1.0 / (4.0 * PI).sqrt(),
            p: |_| 1.0,
            grad: |_| [0.0; 3],
            second: |_| [0.0; 3],
        },
        (3, 1) => Harmonic {
            c: (3.0 / (4.0 * PI)).sqrt(),
            p: |x| x[2],
            grad: |_| [0.0, 0.0, 1.0],
            second: |_| [0.0; 3],
        },
        (3, 2) => Harmonic {
            c: (15.0 / (4.0 * PI)).sqrt(),
            p: |x| x[0] * x[1],
            grad: |x| [x[1], x[0], 0.0],
            second: |_| [0.0; 3],
        },
        _ => panic!("oracle covers n ∈ {{2, 3}}, ℓ ≤ 2"),
    }
}

/// Composite Simpson nodes and weights on `[a, b]` with `m` (even) panels.
fn simpson(a: f64, b: f64, m: usize) -> Vec<(f64, f64)> {
    let h = (b - a) / m as f64;
    (0..=m)
        .map(|i| {
            let w = if i == 0 || i == m {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            (a + h * i as f64, w * h / 3.0)
        })
        .collect()
}

/// Unit directions and weights for the sphere `S^{n−1}`.
fn sphere(n: u32) -> Vec<([f64; 3], f64)> {
    let az = 48;
    let azimuth: Vec<(f64, f64)> = (0..az).map(|k| (2.0 * PI * k as f64 / az as f64, 2.0 * PI / az as f64)).collect();
    match n {
        2 => azimuth.iter().map(|(t, w)| ([t.cos(), t.sin(), 0.0], *w)).collect(),
        3 => {
            let mut out = Vec::new();
            for (th, wt) in simpson(0.0, PI, 200) {
                for (ph, wp) in &azimuth {
                    out.push((
                        [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()],
                        wt * wp * th.sin(),
                    ));
                }
            }
            out
        }
        _ => panic!("oracle covers n ∈ {{2, 3}}"),
    }
}

/// Ambient values of the requested basis integrals.
pub fn ambient_integrals(p: &TestProfile, basis: &[FormBasis]) -> Vec<f64> {
    let n = p.dim;
    let y = harmonic(n, p.ell);
    let dirs = sphere(n);
    let (a, b) = p.log_support();
    let ell = p.ell as i32;
    let mut acc = vec![0.0; basis.len()];
    for (t, wt) in simpson(a, b, 2000) {
        let r = t.exp();
        // u = φ·r^{-ℓ}, so that f = c·u(r)·P(x)
        let d = p.derivatives(r);
        let rl = r.powi(-ell);
        let l = ell as f64;
        let u0 = d[0] * rl;
        let u1 = (d[1] - l * d[0] / r) * rl;
        let u2 = (d[2] - 2.0 * l * d[1] / r + l * (l + 1.0) * d[0] / (r * r)) * rl;
        for (omega, wo) in &dirs {
            let x = omega.map(|o| r * o);
            let (pv, gp, sp) = ((y.p)(&x), (y.grad)(&x), (y.second)(&x));
            let f = y.c * u0 * pv;
            let mut grad = [0.0; 3];
            let mut lap = 0.0;
            for i in 0..n as usize {
                let xi = x[i] / r;
                grad[i] = y.c * (u1 * xi * pv + u0 * gp[i]);
                lap += y.c * ((u2 * xi * xi + u1 * (1.0 - xi * xi) / r) * pv + 2.0 * u1 * xi * gp[i] + u0 * sp[i]);
            }
            let g2: f64 = grad.iter().map(|g| g * g).sum();
            let radial: f64 = grad.iter().zip(&x).map(|(g, xi)| g * xi).sum();
            let jac = r.powi(n as i32 - 1) * wo * wt * r;
            for (k, bb) in basis.iter().enumerate() {
                let v = match bb {
                    FormBasis::Lap2 => lap * lap,
                    FormBasis::Grad(s) => g2 * r.powi(-(*s as i32)),
                    FormBasis::Eul(s) => radial * radial * r.powi(-(*s as i32)),
                    FormBasis::Val(s) => f * f * r.powi(-(*s as i32)),
                };
                acc[k] += v * jac;
            }
        }
    }
    acc
}
