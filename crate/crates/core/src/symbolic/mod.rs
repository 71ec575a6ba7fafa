//! Exact scalar arithmetic: rationals, multivariate parameter polynomials,
//! univariate root isolation and real algebraic numbers.

mod algebraic;
mod expr;
mod poly;
mod univariate;

pub use algebraic::{format_decimal, AlgebraicNumber, AlgebraicValue};
pub use expr::{canonicalize, parse_expr, parse_poly, parse_rational, PolyExpr, DEFAULT_DEGREE_CAP};
pub use poly::{Bindings, Monomial, ParamPolynomial, Symbol};
pub use univariate::{Bound, RootInterval, UniPoly};

pub(crate) use poly::fmt_rational;

/// Arbitrary-precision rational, always in lowest terms.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolicError {
    #[error("total degree {degree} exceeds the cap {cap}")]
    DegreeOverflow { degree: u32, cap: u32 },
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("expected a polynomial in {expected} only, found {found}")]
    NotUnivariate { expected: String, found: String },
    #[error("unbound symbol(s): {0}")]
    Unbound(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("empty interval")]
    EmptyInterval,
}

/// Shorthand for an integer-valued rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Shorthand for `num/den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Serde adapter writing a rational as its exact `p/q` string.
pub mod rational_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
