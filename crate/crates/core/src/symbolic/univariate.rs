//! Dense univariate polynomials over the rationals and Sturm-sequence root
//! isolation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Monomial, ParamPolynomial, Rational, Symbol, SymbolicError};

/// Polynomial in one variable, coefficients in ascending degree order with no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

fn rat(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn sign(v: &Rational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        let inv = d.lead().recip();
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: `self = lead · ∏ fᵢ^mᵢ` with the
    /// `fᵢ` monic, square-free and pairwise coprime.
    pub fn square_free_decomposition(&self) -> Vec<(UniPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.div_rem(&a).0;
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Square-free part (monic product of the distinct irreducible factors).
    pub fn square_free_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return UniPoly::constant(Rational::one());
        }
        let f = self.monic();
        f.div_rem(&f.gcd(&f.derivative())).0.monic()
    }

    /// Sturm sequence `p, p', -rem(p, p'), …`.
    pub fn sturm_chain(&self) -> Vec<UniPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let k = chain.len();
            if chain[k - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = -chain[k - 2].rem(&chain[k - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    /// All rational roots, ascending, without multiplicity.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        if deg == 0 {
            return Vec::new();
        }
        // clear denominators, strip the zero root
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut roots = Vec::new();
        let shift = ints.iter().position(|c| !c.is_zero()).unwrap();
        if shift > 0 {
            roots.push(Rational::zero());
        }
        let ints = &ints[shift..];
        if ints.len() > 1 {
            let p_divs = divisors(&ints[0].abs());
            let q_divs = divisors(&ints[ints.len() - 1].abs());
            for p in &p_divs {
                for q in &q_divs {
                    for s in [1i64, -1] {
                        let cand = Rational::new(p * BigInt::from(s), q.clone());
                        if self.eval(&cand).is_zero() && !roots.contains(&cand) {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    fn sign_at(&self, x: &Point) -> i8 {
        match x {
            Point::Finite(v) => sign(&self.eval(v)),
            Point::PosInf => sign(&self.lead()),
            Point::NegInf => {
                let s = sign(&self.lead());
                if self.degree().unwrap_or(0).is_multiple_of(2) {
                    s
                } else {
                    -s
                }
            }
        }
    }

    /// Cauchy bound: every real root lies strictly inside `(-B, B)`.
    pub fn root_bound(&self) -> Rational {
        let lead = self.lead().abs();
        let max = self
            .coeffs
            .iter()
            .take(self.coeffs.len().saturating_sub(1))
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        max + rat(2)
    }

    /// Real roots in `(lo, hi]` (either end may be infinite), each with an
    /// isolating interval and its multiplicity, in ascending order.
    pub fn isolate_real_roots(&self, lo: Bound, hi: Bound) -> Result<Vec<RootInterval>, SymbolicError> {
        if self.is_zero() {
            return Err(SymbolicError::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let factors = self.square_free_decomposition();
        let sqf = factors
            .iter()
            .fold(UniPoly::constant(Rational::one()), |acc, (f, _)| &acc * f);
        let bound = sqf.root_bound();
        let lo_infinite = lo == Bound::NegInf;
        let hi_infinite = hi == Bound::PosInf;
        let a = match lo {
            Bound::NegInf => -bound.clone(),
            Bound::Finite(v) => v,
            Bound::PosInf => return Err(SymbolicError::EmptyInterval),
        };
        let b = match hi {
            Bound::PosInf => bound,
            Bound::Finite(v) => v,
            Bound::NegInf => return Err(SymbolicError::EmptyInterval),
        };
        if a >= b {
            // an infinite end clipped to the root bound leaves no roots
            if lo_infinite || hi_infinite {
                return Ok(Vec::new());
            }
            return Err(SymbolicError::EmptyInterval);
        }
        let chain = sqf.sturm_chain();
        let mut found = Vec::new();
        bisect_isolate(&chain, a, b, &mut found);
        let factor_chains: Vec<(Vec<UniPoly>, usize)> = factors
            .iter()
            .map(|(f, m)| (f.sturm_chain(), *m))
            .collect();
        Ok(found
            .into_iter()
            .map(|(lo, hi)| {
                let multiplicity = if lo == hi {
                    factors
                        .iter()
                        .find(|(f, _)| f.eval(&lo).is_zero())
                        .map(|&(_, m)| m)
                        .unwrap()
                } else {
                    factor_chains
                        .iter()
                        .find(|(c, _)| count_roots(c, &lo, &hi) == 1)
                        .map(|&(_, m)| m)
                        .unwrap()
                };
                RootInterval {
                    lo,
                    hi,
                    multiplicity,
                    chain: chain.clone(),
                }
            })
            .collect())
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count_distinct_roots(&self, lo: Bound, hi: Bound) -> usize {
        let sqf = self.square_free_part();
        let chain = sqf.sturm_chain();
        let va = variations_at(&chain, &bound_point(lo));
        let vb = variations_at(&chain, &bound_point(hi));
        va.saturating_sub(vb)
    }

    /// Lifts a polynomial in a single symbol; any other symbol is an error.
    pub fn from_param(p: &ParamPolynomial, sym: Symbol) -> Result<UniPoly, SymbolicError> {
        let extra: Vec<String> = p
            .symbols()
            .into_iter()
            .filter(|&s| s != sym)
            .map(Symbol::name)
            .collect();
        if !extra.is_empty() {
            return Err(SymbolicError::NotUnivariate {
                expected: sym.name(),
                found: extra.join(", "),
            });
        }
        let deg = p.degree_in(sym) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (m, c) in p.terms() {
            coeffs[m.exponent(sym) as usize] += c;
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn to_param(&self, sym: Symbol) -> ParamPolynomial {
        ParamPolynomial::from_terms(self.coeffs.iter().enumerate().map(|(k, c)| {
            (
                Monomial::from_powers([(sym, k as u32)]),
                c.clone(),
            )
        }))
    }
}

#[derive(Clone, Debug)]
enum Point {
    NegInf,
    Finite(Rational),
    PosInf,
}

fn bound_point(b: Bound) -> Point {
    match b {
        Bound::NegInf => Point::NegInf,
        Bound::Finite(v) => Point::Finite(v),
        Bound::PosInf => Point::PosInf,
    }
}

fn variations_at(chain: &[UniPoly], x: &Point) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| p.sign_at(x))
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn count_roots(chain: &[UniPoly], lo: &Rational, hi: &Rational) -> usize {
    let va = variations_at(chain, &Point::Finite(lo.clone()));
    let vb = variations_at(chain, &Point::Finite(hi.clone()));
    va.saturating_sub(vb)
}

fn bisect_isolate(chain: &[UniPoly], a: Rational, b: Rational, out: &mut Vec<(Rational, Rational)>) {
    let count = count_roots(chain, &a, &b);
    if count == 0 {
        return;
    }
    if count == 1 {
        if chain[0].eval(&b).is_zero() {
            out.push((b.clone(), b));
        } else {
            out.push((a, b));
        }
        return;
    }
    let mid = (&a + &b) / rat(2);
    bisect_isolate(chain, a, mid.clone(), out);
    bisect_isolate(chain, mid, b, out);
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            small.push(d.clone());
            let other = n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Interval end for root isolation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Bound {
    pub fn int(v: i64) -> Self {
        Bound::Finite(rat(v))
    }
}

/// Isolating interval `(lo, hi]` containing exactly one root of the
/// square-free part; `lo == hi` marks an exactly located rational root.
#[derive(Clone, Debug)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub multiplicity: usize,
    chain: Vec<UniPoly>,
}

impl PartialEq for RootInterval {
    fn eq(&self, other: &Self) -> bool {
        self.lo == other.lo && self.hi == other.hi && self.multiplicity == other.multiplicity
    }
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Bisects until the interval is no wider than `width`.
    pub fn refine(&mut self, width: &Rational) {
        while !self.is_exact() && &self.width() > width {
            let mid = (&self.lo + &self.hi) / rat(2);
            if count_roots(&self.chain, &self.lo, &mid) == 1 {
                if self.chain[0].eval(&mid).is_zero() {
                    self.lo = mid.clone();
                }
                self.hi = mid;
            } else {
                self.lo = mid;
            }
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / rat(2)).to_f64().unwrap_or(f64::NAN)
    }

    /// The square-free polynomial whose Sturm chain certifies this interval.
    pub fn square_free_poly(&self) -> &UniPoly {
        &self.chain[0]
    }
}

impl Add<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(
            (0..len)
                .map(|k| {
                    let a = self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero);
                    let b = rhs.coeffs.get(k).cloned().unwrap_or_else(Rational::zero);
                    a + b
                })
                .collect(),
        )
    }
}

impl Sub<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self + &(-rhs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}

impl Mul<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_param(Symbol::Alpha).to_string().replace('α', "x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn division_and_gcd() {
        let a = UniPoly::from_ints(&[-1, 0, 1]); // x²-1
        let b = UniPoly::from_ints(&[1, 1]); // x+1
        let (quot, r) = a.div_rem(&b);
        assert_eq!(quot, UniPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&UniPoly::from_ints(&[-1, 1])), UniPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn yun_decomposition() {
        // (x-1)^3 (x+2)
        let x1 = UniPoly::from_ints(&[-1, 1]);
        let x2 = UniPoly::from_ints(&[2, 1]);
        let p = &(&(&x1 * &x1) * &x1) * &x2;
        let d = p.square_free_decomposition();
        assert_eq!(d, vec![(x2, 1), (x1, 3)]);
    }

    #[test]
    fn halfline_critical_points() {
        // F'(α) = 3 - 19/2 α + 6α² - α³ = -(α-2)((α-2)² - 5/2)
        let p = UniPoly::new(vec![q(3, 1), q(-19, 2), q(6, 1), q(-1, 1)]);
        let roots = p.isolate_real_roots(Bound::NegInf, Bound::PosInf).unwrap();
        assert_eq!(roots.len(), 3);
        let expected = [2.0 - 2.5f64.sqrt(), 2.0, 2.0 + 2.5f64.sqrt()];
        for (mut r, e) in roots.into_iter().zip(expected) {
            assert_eq!(r.multiplicity, 1);
            r.refine(&q(1, 1 << 40));
            assert!((r.midpoint_f64() - e).abs() < 1e-10, "{} vs {e}", r.midpoint_f64());
            assert!(r.lo.to_f64().unwrap() <= e + 1e-12 && e <= r.hi.to_f64().unwrap() + 1e-12);
        }
        assert_eq!(p.rational_roots(), vec![q(2, 1)]);
    }

    #[test]
    fn parabola_vertex_at_n5() {
        // d/dα α(5-α) = 5 - 2α
        let p = UniPoly::from_ints(&[5, -2]);
        let roots = p.isolate_real_roots(Bound::NegInf, Bound::PosInf).unwrap();
        assert_eq!(roots.len(), 1);
        let mut r = roots[0].clone();
        r.refine(&q(1, 1000));
        assert!((r.midpoint_f64() - 2.5).abs() < 1e-3);
    }

    #[test]
    fn multiplicities_and_half_open_interval() {
        // x²(x-1)³ on (0, 2]: the root 0 is excluded
        let x = UniPoly::x();
        let x1 = UniPoly::from_ints(&[-1, 1]);
        let p = &(&x * &x) * &(&(&x1 * &x1) * &x1);
        let all = p.isolate_real_roots(Bound::NegInf, Bound::PosInf).unwrap();
        assert_eq!(all.iter().map(|r| r.multiplicity).collect::<Vec<_>>(), vec![2, 3]);
        let some = p.isolate_real_roots(Bound::int(0), Bound::int(2)).unwrap();
        assert_eq!(some.len(), 1);
        assert_eq!(some[0].multiplicity, 3);
        let at_end = p.isolate_real_roots(Bound::int(-1), Bound::int(0)).unwrap();
        assert_eq!(at_end.len(), 1);
        assert!(at_end[0].is_exact());
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(
            UniPoly::zero().isolate_real_roots(Bound::NegInf, Bound::PosInf),
            Err(SymbolicError::ZeroPolynomial)
        );
    }

    #[test]
    fn rational_root_search() {
        // 6x³ - 5x² - 2x + 1 = (x-1)(2x+1)(3x-1)
        let p = UniPoly::from_ints(&[1, -2, -5, 6]);
        assert_eq!(p.rational_roots(), vec![q(-1, 2), q(1, 3), q(1, 1)]);
        assert!(UniPoly::from_ints(&[-2, 0, 1]).rational_roots().is_empty());
    }
}
