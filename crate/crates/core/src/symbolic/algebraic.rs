//! Real algebraic numbers as (defining polynomial, isolating interval) pairs.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{fmt_rational, Rational, RootInterval, Symbol, UniPoly};

/// Bisection budget used when comparing values that may coincide.
const MAX_BISECTIONS: usize = 400;

/// Real algebraic number. `minpoly` is monic and square-free with no rational
/// roots unless it has degree one; for degree ≤ 3 it is the minimal
/// polynomial. The number is the unique root of `minpoly` in `(lo, hi]`.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    minpoly: UniPoly,
    lo: Rational,
    hi: Rational,
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

fn sturm_count(chain: &[UniPoly], lo: &Rational, hi: &Rational) -> usize {
    let var = |x: &Rational| {
        let signs: Vec<bool> = chain
            .iter()
            .map(|p| p.eval(x))
            .filter(|v| !v.is_zero())
            .map(|v| v.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    var(lo).saturating_sub(var(hi))
}

impl AlgebraicNumber {
    pub fn rational(r: Rational) -> Self {
        AlgebraicNumber {
            minpoly: UniPoly::new(vec![-r.clone(), Rational::one()]),
            lo: r.clone(),
            hi: r,
        }
    }

    /// The root isolated by `root`, with rational factors stripped from its
    /// defining polynomial.
    pub fn from_root(root: &RootInterval) -> Self {
        if root.is_exact() {
            return Self::rational(root.lo.clone());
        }
        let sqf = root.square_free_poly();
        let mut factor = sqf.monic();
        for r in sqf.rational_roots() {
            if r > root.lo && r <= root.hi {
                return Self::rational(r);
            }
            factor = factor
                .div_rem(&UniPoly::new(vec![-r, Rational::one()]))
                .0;
        }
        AlgebraicNumber {
            minpoly: factor.monic(),
            lo: root.lo.clone(),
            hi: root.hi.clone(),
        }
    }

    pub fn minpoly(&self) -> &UniPoly {
        &self.minpoly
    }

    pub fn interval(&self) -> (&Rational, &Rational) {
        (&self.lo, &self.hi)
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(0)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.degree() == 1).then_some(&self.lo)
    }

    /// Shrinks the isolating interval to width at most `width`.
    pub fn refine(&mut self, width: &Rational) {
        if self.as_rational().is_some() {
            return;
        }
        let chain = self.minpoly.sturm_chain();
        while &(&self.hi - &self.lo) > width {
            let mid = (&self.lo + &self.hi) * half();
            if sturm_count(&chain, &self.lo, &mid) == 1 {
                self.hi = mid;
            } else {
                self.lo = mid;
            }
        }
    }

    fn bisect(&mut self) {
        let w = (&self.hi - &self.lo) * half();
        self.refine(&w);
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_rational() {
            return r.to_f64().unwrap_or(f64::NAN);
        }
        let mut c = self.clone();
        let scale = c.lo.abs().max(c.hi.abs()).max(Rational::one());
        c.refine(&(scale * Rational::new(1.into(), num_traits::pow(2u32.into(), 64))));
        ((&c.lo + &c.hi) * half()).to_f64().unwrap_or(f64::NAN)
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        if let Some(v) = self.as_rational() {
            return v.cmp(r);
        }
        let mut c = self.clone();
        loop {
            if r <= &c.lo {
                return Ordering::Greater;
            }
            if r >= &c.hi {
                return Ordering::Less;
            }
            c.bisect();
        }
    }

    /// Value of `p` at this number, reduced modulo the defining polynomial.
    pub fn eval_poly(&self, p: &UniPoly) -> AlgebraicValue {
        let expr = p.rem(&self.minpoly);
        AlgebraicValue {
            theta: self.clone(),
            expr,
        }
    }

    /// `(center, radicand, sign)` for a quadratic irrational
    /// `center + sign·radicand^(1/2)`.
    pub fn quadratic_surd(&self) -> Option<(Rational, Rational, i8)> {
        if self.degree() != 2 {
            return None;
        }
        let c = self.minpoly.coeffs();
        let center = -&c[1] * half();
        let radicand = &center * &center - &c[0];
        let sign = match self.cmp_rational(&center) {
            Ordering::Greater => 1,
            _ => -1,
        };
        Some((center, radicand, sign))
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for AlgebraicNumber {}

impl PartialOrd for AlgebraicNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => return a.cmp(b),
            (Some(a), None) => return other.cmp_rational(a).reverse(),
            (None, Some(b)) => return self.cmp_rational(b),
            _ => {}
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        if a.minpoly == b.minpoly {
            let chain = a.minpoly.sturm_chain();
            let lo = (&a.lo).max(&b.lo).clone();
            let hi = (&a.hi).min(&b.hi).clone();
            if lo < hi && sturm_count(&chain, &lo, &hi) == 1 {
                return Ordering::Equal;
            }
        }
        loop {
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            a.bisect();
            b.bisect();
        }
    }
}

fn render_surd(center: &Rational, coeff: &Rational, radicand: &Rational) -> String {
    let root = format!("({})^(1/2)", fmt_rational(radicand));
    let mag = coeff.abs();
    let term = if mag.is_one() {
        root
    } else {
        format!("{}·{root}", fmt_rational(&mag))
    };
    match (center.is_zero(), coeff.is_negative()) {
        (true, false) => term,
        (true, true) => format!("-{term}"),
        (false, neg) => format!(
            "{} {} {term}",
            fmt_rational(center),
            if neg { "-" } else { "+" }
        ),
    }
}

impl fmt::Display for AlgebraicNumber {
    /// `2 + (13/2)^(1/2)` for quadratic irrationals, otherwise the defining
    /// polynomial and isolating interval.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return f.write_str(&fmt_rational(r));
        }
        if let Some((center, radicand, sign)) = self.quadratic_surd() {
            return f.write_str(&render_surd(&center, &Rational::from_integer(sign.into()), &radicand));
        }
        write!(
            f,
            "root of {} in ({}, {}]",
            self.minpoly,
            fmt_rational(&self.lo),
            fmt_rational(&self.hi)
        )
    }
}

/// Element `expr(θ)` of the field generated by an algebraic number θ.
#[derive(Clone, Debug)]
pub struct AlgebraicValue {
    theta: AlgebraicNumber,
    expr: UniPoly,
}

type Interval = (Rational, Rational);

fn imul(a: &Interval, b: &Interval) -> Interval {
    let p = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = p.iter().min().unwrap().clone();
    let hi = p.iter().max().unwrap().clone();
    (lo, hi)
}

impl AlgebraicValue {
    pub fn from_rational(r: Rational) -> Self {
        AlgebraicNumber::rational(r.clone()).eval_poly(&UniPoly::constant(r))
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.expr.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.expr.coeffs()[0].clone()),
            _ => None,
        }
    }

    pub fn theta(&self) -> &AlgebraicNumber {
        &self.theta
    }

    /// The reduced representative `expr` with `deg expr < deg minpoly(θ)`.
    pub fn expr(&self) -> &UniPoly {
        &self.expr
    }

    /// Closed interval containing the value, by interval Horner evaluation.
    pub fn enclosure(&self) -> Interval {
        let x = (self.theta.lo.clone(), self.theta.hi.clone());
        let mut acc = (Rational::zero(), Rational::zero());
        for c in self.expr.coeffs().iter().rev() {
            let m = imul(&acc, &x);
            acc = (m.0 + c, m.1 + c);
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_rational() {
            return r.to_f64().unwrap_or(f64::NAN);
        }
        let mut v = self.clone();
        let scale = v.theta.lo.abs().max(v.theta.hi.abs()).max(Rational::one());
        v.theta
            .refine(&(scale * Rational::new(1.into(), num_traits::pow(2u32.into(), 80))));
        let (lo, hi) = v.enclosure();
        ((lo + hi) * half()).to_f64().unwrap_or(f64::NAN)
    }

    /// Exact comparison when both values are rational or share θ; otherwise
    /// by refining enclosures, treating values that cannot be separated
    /// within the bisection budget as equal.
    pub fn compare(&self, other: &AlgebraicValue) -> Ordering {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return a.cmp(&b);
        }
        if self.theta == other.theta && self.theta.minpoly == other.theta.minpoly {
            let diff = &self.expr - &other.expr;
            if diff.is_zero() {
                return Ordering::Equal;
            }
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        for _ in 0..MAX_BISECTIONS {
            let (alo, ahi) = a.enclosure();
            let (blo, bhi) = b.enclosure();
            if ahi < blo {
                return Ordering::Less;
            }
            if bhi < alo {
                return Ordering::Greater;
            }
            a.theta.bisect();
            b.theta.bisect();
        }
        Ordering::Equal
    }
}

impl fmt::Display for AlgebraicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return f.write_str(&fmt_rational(&r));
        }
        if let Some((center, radicand, sign)) = self.theta.quadratic_surd() {
            // expr = a + bθ with θ = center + sign·√radicand
            let c = self.expr.coeffs();
            let a = &c[0];
            let b = &c[1];
            let value_center = a + b * &center;
            let coeff = b * Rational::from_integer(sign.into());
            return f.write_str(&render_surd(&value_center, &coeff, &radicand));
        }
        let e = self.expr.to_param(Symbol::Alpha).to_string().replace('α', "θ");
        write!(f, "{e} at θ = {}", self.theta)
    }
}

/// `r` rounded half away from zero to `digits` decimals.
pub fn format_decimal(r: &Rational, digits: usize) -> String {
    let scale = Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(10), digits));
    let int = (r * scale).round().to_integer();
    let mut body = int.abs().to_string();
    if digits > 0 {
        if body.len() <= digits {
            body = format!("{}{body}", "0".repeat(digits + 1 - body.len()));
        }
        body.insert(body.len() - digits, '.');
    }
    if int.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

fn decimal_width(digits: usize) -> Rational {
    Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), digits + 3))
}

impl AlgebraicNumber {
    /// Decimal rendering accurate to the last printed digit.
    pub fn decimal(&self, digits: usize) -> String {
        let mut c = self.clone();
        c.refine(&decimal_width(digits));
        format_decimal(&((&c.lo + &c.hi) * half()), digits)
    }
}

impl AlgebraicValue {
    pub fn decimal(&self, digits: usize) -> String {
        if let Some(r) = self.as_rational() {
            return format_decimal(&r, digits);
        }
        let mut v = self.clone();
        let width = decimal_width(digits);
        for _ in 0..MAX_BISECTIONS {
            let (lo, hi) = v.enclosure();
            if hi - lo <= width {
                break;
            }
            v.theta.bisect();
        }
        let (lo, hi) = v.enclosure();
        format_decimal(&((lo + hi) * half()), digits)
    }
}
