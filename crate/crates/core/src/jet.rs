//! Truncated Taylor arithmetic in one variable.

use std::ops::{Add, Mul, Neg, Sub};

/// Taylor coefficients `c_k = f^(k)(x₀)/k!` for `k ≤ order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    c: Vec<f64>,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

impl Jet {
    pub fn constant(v: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = v;
        Jet { c }
    }

    /// The independent variable at `x0`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut j = Self::constant(x0, order);
        if order > 0 {
            j.c[1] = 1.0;
        }
        j
    }

    /// Builds a jet from derivative values `f, f', f'', …`.
    pub fn from_derivatives(d: &[f64]) -> Self {
        Jet {
            c: d.iter().enumerate().map(|(k, v)| v / factorial(k)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `f^(k)(x₀)`; zero beyond the truncation order.
    pub fn derivative(&self, k: usize) -> f64 {
        self.c.get(k).map_or(0.0, |v| v * factorial(k))
    }

    pub fn derivatives(&self) -> Vec<f64> {
        (0..self.c.len()).map(|k| self.derivative(k)).collect()
    }

    /// Jet of `f'`, one order shorter.
    pub fn differentiate(&self) -> Self {
        if self.c.len() == 1 {
            return Jet { c: vec![0.0] };
        }
        Jet {
            c: (1..self.c.len()).map(|k| k as f64 * self.c[k]).collect(),
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Jet {
            c: self.c[..=order.min(self.order())].to_vec(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Jet {
            c: self.c.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.c[0] += s;
        out
    }

    pub fn recip(&self) -> Self {
        let n = self.c.len();
        let mut r = vec![0.0; n];
        r[0] = 1.0 / self.c[0];
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| self.c[j] * r[k - j]).sum();
            r[k] = -s / self.c[0];
        }
        Jet { c: r }
    }

    pub fn div(&self, other: &Jet) -> Self {
        self * &other.recip()
    }

    pub fn exp(&self) -> Self {
        let n = self.c.len();
        let mut e = vec![0.0; n];
        e[0] = self.c[0].exp();
        // e' = f' e
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| j as f64 * self.c[j] * e[k - j]).sum();
            e[k] = s / k as f64;
        }
        Jet { c: e }
    }

    pub fn ln(&self) -> Self {
        let n = self.c.len();
        let mut l = vec![0.0; n];
        l[0] = self.c[0].ln();
        // f l' = f'
        for k in 1..n {
            let s: f64 = (1..k).map(|j| j as f64 * l[j] * self.c[k - j]).sum();
            l[k] = (k as f64 * self.c[k] - s) / (k as f64 * self.c[0]);
        }
        Jet { c: l }
    }

    /// `f^p` for `f(x₀) > 0`.
    pub fn powf(&self, p: f64) -> Self {
        let n = self.c.len();
        let mut w = vec![0.0; n];
        w[0] = self.c[0].powf(p);
        // f w' = p f' w
        for k in 1..n {
            let s: f64 = (1..=k)
                .map(|j| (p * j as f64 - (k - j) as f64) * self.c[j] * w[k - j])
                .sum();
            w[k] = s / (k as f64 * self.c[0]);
        }
        Jet { c: w }
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut out = Jet::constant(1.0, self.order());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    /// `g ∘ f` from the derivatives `g(f₀), g'(f₀), …` of the outer function.
    pub fn compose(&self, outer: &[f64]) -> Self {
        let order = self.order();
        let mut delta = self.clone();
        delta.c[0] = 0.0;
        let mut out = Jet::constant(0.0, order);
        let mut power = Jet::constant(1.0, order);
        for (k, g) in outer.iter().enumerate().take(order + 1) {
            out = &out + &power.scale(g / factorial(k));
            power = &power * &delta;
        }
        out
    }
}

impl Add<&Jet> for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let n = self.c.len().min(rhs.c.len());
        Jet {
            c: (0..n).map(|k| self.c[k] + rhs.c[k]).collect(),
        }
    }
}

impl Sub<&Jet> for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let n = self.c.len().min(rhs.c.len());
        Jet {
            c: (0..n).map(|k| self.c[k] - rhs.c[k]).collect(),
        }
    }
}

impl Mul<&Jet> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.c.len().min(rhs.c.len());
        Jet {
            c: (0..n)
                .map(|k| (0..=k).map(|j| self.c[j] * rhs.c[k - j]).sum())
                .collect(),
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}
