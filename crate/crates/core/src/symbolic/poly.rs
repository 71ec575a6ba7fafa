use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Rational, SymbolicError};

/// Formal parameter symbols, in their fixed canonical order
/// `n < α < β < s < α₀ < α₁ < … < γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// Space dimension.
    N,
    Alpha,
    Beta,
    /// Schmincke's parameter.
    S,
    /// Indexed coupling `α_k` of the iterated-logarithm factors.
    AlphaIdx(u8),
    /// Scale of the iterated logarithms; also used as a free shift variable.
    Gamma,
}

const SUBSCRIPTS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];

impl Symbol {
    pub fn name(self) -> String {
        match self {
            Symbol::N => "n".into(),
            Symbol::Alpha => "α".into(),
            Symbol::Beta => "β".into(),
            Symbol::S => "s".into(),
            Symbol::AlphaIdx(k) => {
                let digits: String = k
                    .to_string()
                    .chars()
                    .map(|d| SUBSCRIPTS[d.to_digit(10).unwrap() as usize])
                    .collect();
                format!("α{digits}")
            }
            Symbol::Gamma => "γ".into(),
        }
    }

    /// ASCII spelling accepted on the command line and in reports.
    pub fn ascii_name(self) -> String {
        match self {
            Symbol::N => "n".into(),
            Symbol::Alpha => "alpha".into(),
            Symbol::Beta => "beta".into(),
            Symbol::S => "s".into(),
            Symbol::AlphaIdx(k) => format!("alpha{k}"),
            Symbol::Gamma => "gamma".into(),
        }
    }

    /// Parses either the unicode or the ascii spelling.
    pub fn parse(name: &str) -> Option<Symbol> {
        match name {
            "n" => return Some(Symbol::N),
            "α" | "alpha" => return Some(Symbol::Alpha),
            "β" | "beta" => return Some(Symbol::Beta),
            "s" => return Some(Symbol::S),
            "γ" | "gamma" => return Some(Symbol::Gamma),
            _ => {}
        }
        let rest = name
            .strip_prefix("alpha")
            .or_else(|| name.strip_prefix('α'))?;
        let rest = rest.strip_prefix('_').unwrap_or(rest);
        if rest.is_empty() {
            return None;
        }
        let digits: Option<String> = rest
            .chars()
            .map(|c| {
                if c.is_ascii_digit() {
                    Some(c)
                } else {
                    SUBSCRIPTS
                        .iter()
                        .position(|&s| s == c)
                        .map(|d| char::from(b'0' + d as u8))
                }
            })
            .collect();
        digits?.parse().ok().map(Symbol::AlphaIdx)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Partial assignment of rational values to symbols.
pub type Bindings = BTreeMap<Symbol, Rational>;

/// Power product of symbols; exponents are positive and the symbols sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(sym: Symbol) -> Self {
        Monomial(vec![(sym, 1)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Symbol, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (s, e) in powers {
            *map.entry(s).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, sym: Symbol) -> u32 {
        self.0
            .iter()
            .find(|&&(s, _)| s == sym)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn powers(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    fn without(&self, sym: Symbol) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(s, _)| s != sym).collect())
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_powers(self.0.iter().chain(other.0.iter()).copied())
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then exponents compared
    /// symbol by symbol in canonical symbol order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (a, b) = (&self.0, &other.0);
            let (mut i, mut j) = (0, 0);
            loop {
                match (a.get(i), b.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(&(sa, ea)), Some(&(sb, eb))) => match sa.cmp(&sb) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => {
                            if ea != eb {
                                return ea.cmp(&eb);
                            }
                            i += 1;
                            j += 1;
                        }
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(s, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            if e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Exact multivariate polynomial over the rationals in the formal parameters.
///
/// The term map never stores a zero coefficient, so structural equality is
/// mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ParamPolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl ParamPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::constant(Rational::new(num.into(), den.into()))
    }

    pub fn var(sym: Symbol) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::var(sym), Rational::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Returns the value when the polynomial has no symbols.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, sym: Symbol) -> u32 {
        self.terms.keys().map(|m| m.exponent(sym)).max().unwrap_or(0)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&(s, _)| s))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ParamPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplication that refuses to exceed a total-degree cap.
    pub fn checked_mul(&self, other: &Self, cap: u32) -> Result<Self, SymbolicError> {
        let degree = if self.is_zero() || other.is_zero() {
            0
        } else {
            self.total_degree() + other.total_degree()
        };
        if degree > cap {
            return Err(SymbolicError::DegreeOverflow { degree, cap });
        }
        Ok(self * other)
    }

    /// Substitutes the bound symbols; the rest stay formal.
    pub fn eval_subst(&self, bindings: &Bindings) -> Self {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(s, e) in &m.0 {
                match bindings.get(&s) {
                    Some(v) => coeff *= num_traits::pow(v.clone(), e as usize),
                    None => rest.push((s, e)),
                }
            }
            out.add_term(Monomial(rest), coeff);
        }
        out
    }

    /// Full evaluation to a rational; fails on the first unbound symbol.
    pub fn eval(&self, bindings: &Bindings) -> Result<Rational, SymbolicError> {
        let p = self.eval_subst(bindings);
        p.as_constant().ok_or_else(|| {
            SymbolicError::Unbound(
                p.symbols()
                    .into_iter()
                    .map(Symbol::name)
                    .collect::<Vec<_>>()
                    .join(", "),
            )
        })
    }

    /// Floating-point evaluation with every symbol bound.
    pub fn eval_f64(&self, bindings: &BTreeMap<Symbol, f64>) -> Result<f64, SymbolicError> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut v = c.to_f64().unwrap_or(f64::NAN);
            for &(s, e) in &m.0 {
                let x = bindings
                    .get(&s)
                    .ok_or_else(|| SymbolicError::Unbound(s.name()))?;
                v *= x.powi(e as i32);
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Replaces `sym` by the polynomial `value`.
    pub fn substitute(&self, sym: Symbol, value: &ParamPolynomial) -> Self {
        let mut powers: Vec<ParamPolynomial> = vec![Self::one()];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(sym) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let rest = ParamPolynomial::from_terms([(m.without(sym), c.clone())]);
            out = &out + &(&rest * &powers[e]);
        }
        out
    }

    pub fn derivative(&self, sym: Symbol) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(sym);
            if e == 0 {
                continue;
            }
            let reduced = Monomial::from_powers(
                m.0.iter()
                    .map(|&(s, k)| if s == sym { (s, k - 1) } else { (s, k) }),
            );
            out.add_term(reduced, c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Sign of the polynomial if it is a constant.
    pub fn constant_sign(&self) -> Option<i8> {
        self.as_constant().map(|c| {
            if c.is_positive() {
                1
            } else if c.is_negative() {
                -1
            } else {
                0
            }
        })
    }
}

impl From<Symbol> for ParamPolynomial {
    fn from(s: Symbol) -> Self {
        ParamPolynomial::var(s)
    }
}

impl From<Rational> for ParamPolynomial {
    fn from(c: Rational) -> Self {
        ParamPolynomial::constant(c)
    }
}

impl From<i64> for ParamPolynomial {
    fn from(c: i64) -> Self {
        ParamPolynomial::int(c)
    }
}

impl Add<&ParamPolynomial> for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn add(self, rhs: &ParamPolynomial) -> ParamPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&ParamPolynomial> for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn sub(self, rhs: &ParamPolynomial) -> ParamPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul<&ParamPolynomial> for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn mul(self, rhs: &ParamPolynomial) -> ParamPolynomial {
        let mut out = ParamPolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn neg(self) -> ParamPolynomial {
        ParamPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for ParamPolynomial {
            type Output = ParamPolynomial;
            fn $method(self, rhs: ParamPolynomial) -> ParamPolynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ParamPolynomial> for ParamPolynomial {
            type Output = ParamPolynomial;
            fn $method(self, rhs: &ParamPolynomial) -> ParamPolynomial {
                (&self).$method(rhs)
            }
        }
        impl $tr<ParamPolynomial> for &ParamPolynomial {
            type Output = ParamPolynomial;
            fn $method(self, rhs: ParamPolynomial) -> ParamPolynomial {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for ParamPolynomial {
    type Output = ParamPolynomial;
    fn neg(self) -> ParamPolynomial {
        -&self
    }
}

pub(crate) fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for ParamPolynomial {
    /// Terms in descending graded-lex order, e.g. `n·α - 4·α - 2·β`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}·{m}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl ParamPolynomial {
    /// Rendering suitable as a multiplicative prefix: bare when a single
    /// monomial, parenthesized otherwise.
    pub fn render_factor(&self) -> String {
        if self.terms.len() <= 1 {
            self.to_string()
        } else {
            format!("({self})")
        }
    }
}
