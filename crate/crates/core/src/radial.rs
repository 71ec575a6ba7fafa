//! Vector-valued factors `T_g = ∇ + g(r)·x` and the log-monomial algebra
//! `c·r^p·∏ L_k^{q_k}` they live in, with `L_1 = -ln(r/γ)` and
//! `L_{k+1} = ln L_k`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::symbolic::{ratio, ParamPolynomial, Symbol, SymbolicError};

const SUBSCRIPTS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];

fn subscript(k: usize) -> String {
    k.to_string()
        .chars()
        .map(|d| SUBSCRIPTS[d.to_digit(10).unwrap() as usize])
        .collect()
}

/// `r^p · L_1^{q_1} ⋯ L_m^{q_m}`; trailing zero exponents are trimmed so
/// equal monomials have equal keys.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogMonomial {
    pub p: i64,
    q: Vec<i64>,
}

impl LogMonomial {
    pub fn new(p: i64, q: impl Into<Vec<i64>>) -> Self {
        let mut q = q.into();
        while q.last() == Some(&0) {
            q.pop();
        }
        LogMonomial { p, q }
    }

    pub fn r_pow(p: i64) -> Self {
        LogMonomial { p, q: Vec::new() }
    }

    /// Exponent of `L_k`, `k ≥ 1`.
    pub fn q(&self, k: usize) -> i64 {
        self.q.get(k - 1).copied().unwrap_or(0)
    }

    pub fn log_levels(&self) -> usize {
        self.q.len()
    }

    fn mul(&self, other: &Self) -> Self {
        let len = self.q.len().max(other.q.len());
        let q: Vec<i64> = (1..=len).map(|k| self.q(k) + other.q(k)).collect();
        LogMonomial::new(self.p + other.p, q)
    }

    fn eval(&self, r: f64, logs: &[f64]) -> f64 {
        let mut v = r.powi(self.p as i32);
        for (k, e) in self.q.iter().enumerate() {
            v *= logs[k].powi(*e as i32);
        }
        v
    }
}

impl fmt::Display for LogMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.p != 0 {
            parts.push(format!("r^{}", self.p));
        }
        for (k, e) in self.q.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("L{}", subscript(k + 1))),
                _ => parts.push(format!("L{}^{e}", subscript(k + 1))),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

/// Finite sum of log-monomials with parameter-polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RadialFunction {
    terms: BTreeMap<LogMonomial, ParamPolynomial>,
}

impl RadialFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(c: ParamPolynomial, m: LogMonomial) -> Self {
        let mut out = Self::zero();
        out.add_term(c, m);
        out
    }

    /// `c·r^p`.
    pub fn r_pow(c: ParamPolynomial, p: i64) -> Self {
        Self::term(c, LogMonomial::r_pow(p))
    }

    pub fn add_term(&mut self, c: ParamPolynomial, m: LogMonomial) {
        let slot = self.terms.entry(m.clone()).or_insert_with(ParamPolynomial::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LogMonomial, &ParamPolynomial)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &LogMonomial) -> ParamPolynomial {
        self.terms.get(m).cloned().unwrap_or_else(ParamPolynomial::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn log_levels(&self) -> usize {
        self.terms.keys().map(LogMonomial::log_levels).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &ParamPolynomial) -> Self {
        let mut out = Self::zero();
        for (m, k) in &self.terms {
            out.add_term(k * c, m.clone());
        }
        out
    }

    pub fn substitute(&self, sym: Symbol, value: &ParamPolynomial) -> Self {
        let mut out = Self::zero();
        for (m, k) in &self.terms {
            out.add_term(k.substitute(sym, value), m.clone());
        }
        out
    }

    /// Exact `d/dr`, using `d/dr L_k = -r^{-1} ∏_{j<k} L_j^{-1}`.
    pub fn differentiate(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.p != 0 {
                out.add_term(c * &ParamPolynomial::int(m.p), LogMonomial::new(m.p - 1, m.q.clone()));
            }
            for k in 1..=m.log_levels() {
                let qk = m.q(k);
                if qk == 0 {
                    continue;
                }
                let q: Vec<i64> = (1..=m.log_levels())
                    .map(|j| if j <= k { m.q(j) - 1 } else { m.q(j) })
                    .collect();
                out.add_term(c * &ParamPolynomial::int(-qk), LogMonomial::new(m.p - 1, q));
            }
        }
        out
    }

    /// Numeric value at `r`; `bindings` must cover every coefficient symbol
    /// and `γ` when logarithms occur.
    pub fn eval_f64(&self, r: f64, bindings: &BTreeMap<Symbol, f64>) -> Result<f64, SymbolicError> {
        let levels = self.log_levels();
        let mut logs = Vec::with_capacity(levels);
        if levels > 0 {
            let gamma = *bindings
                .get(&Symbol::Gamma)
                .ok_or_else(|| SymbolicError::Unbound(Symbol::Gamma.name()))?;
            let mut l = -(r / gamma).ln();
            logs.push(l);
            for _ in 1..levels {
                l = l.ln();
                logs.push(l);
            }
        }
        let mut acc = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            acc.push(c.eval_f64(bindings)? * m.eval(r, &logs));
        }
        Ok(crate::quadrature::neumaier_sum(acc))
    }
}

impl Add<&RadialFunction> for &RadialFunction {
    type Output = RadialFunction;
    fn add(self, rhs: &RadialFunction) -> RadialFunction {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(c.clone(), m.clone());
        }
        out
    }
}

impl Sub<&RadialFunction> for &RadialFunction {
    type Output = RadialFunction;
    fn sub(self, rhs: &RadialFunction) -> RadialFunction {
        self + &(-rhs)
    }
}

impl Neg for &RadialFunction {
    type Output = RadialFunction;
    fn neg(self) -> RadialFunction {
        self.scale(&ParamPolynomial::int(-1))
    }
}

impl Mul<&RadialFunction> for &RadialFunction {
    type Output = RadialFunction;
    fn mul(self, rhs: &RadialFunction) -> RadialFunction {
        let mut out = RadialFunction::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(c1 * c2, m1.mul(m2));
            }
        }
        out
    }
}

impl fmt::Display for RadialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest power of r first, then fewer logarithms
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            b.p.cmp(&a.p)
                .then(a.q.len().cmp(&b.q.len()))
                .then_with(|| b.q.cmp(&a.q))
        });
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let (neg, mag) = match c.constant_sign() {
                Some(-1) => (true, -c),
                _ => (false, c.clone()),
            };
            let sep = match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let mono = m.to_string();
            let body = match (mag.as_constant(), mono.as_str()) {
                (_, "1") => mag.render_factor(),
                (Some(c), _) if c == ratio(1, 1) => mono,
                _ => format!("{}·{mono}", mag.render_factor()),
            };
            write!(f, "{sep}{body}")?;
        }
        Ok(())
    }
}

/// `T_g = ∇ + g(r)·(x − y)`; the centre `y` is bookkeeping only, every
/// formula is written in `r = |x − y|`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFactor {
    pub g: RadialFunction,
    pub label: String,
}

impl VectorFactor {
    pub fn new(g: RadialFunction, label: impl Into<String>) -> Self {
        VectorFactor { g, label: label.into() }
    }

    /// `∇ + α|x|^{-2}x`.
    pub fn hardy(alpha: ParamPolynomial) -> Self {
        let label = format!("∇ + ({alpha})|x|^-2 x");
        VectorFactor::new(RadialFunction::r_pow(alpha, -2), label)
    }

    /// The iterated-logarithm factor of level `m` with free coupling `α_m`:
    /// `g = ½ r^{-2}[(n−2) + Σ_{j≤m} ∏_{k≤j} L_k^{-1} − α_m ∏_{k≤m} L_k^{-1}]`,
    /// and `g = ½(n−2−α₀) r^{-2}` at `m = 0`.
    pub fn log_refined(m: usize) -> Self {
        let half = ParamPolynomial::ratio(1, 2);
        let n_minus_2 = &ParamPolynomial::var(Symbol::N) - &ParamPolynomial::int(2);
        let alpha_m = ParamPolynomial::var(Symbol::AlphaIdx(m as u8));
        let mut g = RadialFunction::r_pow(&half * &n_minus_2, -2);
        for j in 1..=m {
            g.add_term(half.clone(), LogMonomial::new(-2, vec![-1; j]));
        }
        g.add_term(-(&half * &alpha_m), LogMonomial::new(-2, vec![-1; m]));
        VectorFactor::new(g, format!("T_(α{},y)", subscript(m)))
    }
}

/// `V` with `T_g⁺T_g = −Δ + V`, namely `V = g²r² − n·g − r·g'`.
pub fn potential_of_factor(f: &VectorFactor, n: &ParamPolynomial) -> RadialFunction {
    let g = &f.g;
    let r2 = RadialFunction::r_pow(ParamPolynomial::one(), 2);
    let r1 = RadialFunction::r_pow(ParamPolynomial::one(), 1);
    let g2r2 = &(g * g) * &r2;
    let ng = g.scale(n);
    let rg = &r1 * &g.differentiate();
    &(&g2r2 - &ng) - &rg
}

/// `¼ r^{-2}[(n−2)² + Σ_{j=1}^m ∏_{k≤j} L_k^{-2}]`.
pub fn log_hardy_weight(m: usize) -> RadialFunction {
    let quarter = ParamPolynomial::ratio(1, 4);
    let n_minus_2 = &ParamPolynomial::var(Symbol::N) - &ParamPolynomial::int(2);
    let mut w = RadialFunction::r_pow(&quarter * &(&n_minus_2 * &n_minus_2), -2);
    for j in 1..=m {
        w.add_term(quarter.clone(), LogMonomial::new(-2, vec![-2; j]));
    }
    w
}
