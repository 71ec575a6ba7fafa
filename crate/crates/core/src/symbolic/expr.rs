use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{ParamPolynomial, Rational, Symbol, SymbolicError};

/// Default cap on the total degree produced by [`canonicalize`].
pub const DEFAULT_DEGREE_CAP: u32 = 64;

/// Unevaluated polynomial arithmetic tree.
#[derive(Clone, Debug, PartialEq)]
pub enum PolyExpr {
    Sym(Symbol),
    Const(Rational),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Neg(Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

// tree constructors, not arithmetic on values
#[allow(clippy::should_implement_trait)]
impl PolyExpr {
    pub fn sym(s: Symbol) -> Self {
        PolyExpr::Sym(s)
    }

    pub fn int(c: i64) -> Self {
        PolyExpr::Const(Rational::from_integer(c.into()))
    }

    pub fn add(a: PolyExpr, b: PolyExpr) -> Self {
        PolyExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: PolyExpr, b: PolyExpr) -> Self {
        PolyExpr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: PolyExpr, b: PolyExpr) -> Self {
        PolyExpr::Mul(Box::new(a), Box::new(b))
    }

    pub fn neg(a: PolyExpr) -> Self {
        PolyExpr::Neg(Box::new(a))
    }

    pub fn pow(a: PolyExpr, k: u32) -> Self {
        PolyExpr::Pow(Box::new(a), k)
    }
}

/// Expands a tree into canonical form under the given total-degree cap.
pub fn canonicalize(expr: &PolyExpr, cap: u32) -> Result<ParamPolynomial, SymbolicError> {
    Ok(match expr {
        PolyExpr::Sym(s) => ParamPolynomial::var(*s),
        PolyExpr::Const(c) => ParamPolynomial::constant(c.clone()),
        PolyExpr::Add(a, b) => canonicalize(a, cap)? + canonicalize(b, cap)?,
        PolyExpr::Sub(a, b) => canonicalize(a, cap)? - canonicalize(b, cap)?,
        PolyExpr::Neg(a) => -canonicalize(a, cap)?,
        PolyExpr::Mul(a, b) => canonicalize(a, cap)?.checked_mul(&canonicalize(b, cap)?, cap)?,
        PolyExpr::Pow(a, k) => {
            let base = canonicalize(a, cap)?;
            let degree = (base.total_degree() as u64) * (*k as u64);
            if !base.is_zero() && degree > cap as u64 {
                return Err(SymbolicError::DegreeOverflow {
                    degree: degree.min(u32::MAX as u64) as u32,
                    cap,
                });
            }
            base.pow(*k)
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, SymbolicError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((pos, Token::Num(text.parse().unwrap())));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Token::Ident(chars[start..i].iter().map(|&(_, c)| c).collect())));
        } else if matches!(c, 'α' | 'β' | 'γ') {
            let start = i;
            i += 1;
            while i < chars.len() && matches!(chars[i].1, '₀'..='₉' | '0'..='9' | '_') {
                i += 1;
            }
            out.push((pos, Token::Ident(chars[start..i].iter().map(|&(_, c)| c).collect())));
        } else if matches!(c, '+' | '-' | '*' | '·' | '/' | '^' | '(' | ')' | '−') {
            let op = match c {
                '·' => '*',
                '−' => '-',
                other => other,
            };
            out.push((pos, Token::Op(op)));
            i += 1;
        } else {
            return Err(SymbolicError::Parse {
                pos,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.at).map(|&(p, _)| p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SymbolicError> {
        Err(SymbolicError::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<PolyExpr, SymbolicError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = PolyExpr::add(lhs, self.term()?);
            } else if self.eat('-') {
                lhs = PolyExpr::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn starts_primary(&self) -> bool {
        matches!(
            self.peek(),
            Some(Token::Num(_)) | Some(Token::Ident(_)) | Some(Token::Op('('))
        )
    }

    fn term(&mut self) -> Result<PolyExpr, SymbolicError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = PolyExpr::mul(lhs, self.unary()?);
            } else if self.eat('/') {
                let at = self.pos();
                let divisor = canonicalize(&self.unary()?, DEFAULT_DEGREE_CAP)?;
                match divisor.as_constant() {
                    Some(c) if !c.is_zero() => {
                        lhs = PolyExpr::mul(lhs, PolyExpr::Const(c.recip()));
                    }
                    Some(_) => return Err(SymbolicError::DivisionByZero),
                    None => {
                        return Err(SymbolicError::Parse {
                            pos: at,
                            msg: "division only by nonzero constants".into(),
                        })
                    }
                }
            } else if self.starts_primary() {
                // implicit multiplication, e.g. `2(n-4)`
                lhs = PolyExpr::mul(lhs, self.power()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<PolyExpr, SymbolicError> {
        if self.eat('-') {
            Ok(PolyExpr::neg(self.unary()?))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<PolyExpr, SymbolicError> {
        let base = self.primary()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Token::Num(k)) => {
                    self.at += 1;
                    let k: u32 = match k.try_into() {
                        Ok(k) => k,
                        Err(_) => return self.err("exponent too large"),
                    };
                    Ok(PolyExpr::pow(base, k))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<PolyExpr, SymbolicError> {
        match self.peek().cloned() {
            Some(Token::Num(v)) => {
                self.at += 1;
                Ok(PolyExpr::Const(Rational::from_integer(v)))
            }
            Some(Token::Ident(name)) => match Symbol::parse(&name) {
                Some(s) => {
                    self.at += 1;
                    Ok(PolyExpr::Sym(s))
                }
                None => self.err(format!("unknown symbol {name:?}")),
            },
            Some(Token::Op('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            _ => self.err("expected a number, symbol or '('"),
        }
    }
}

/// Parses and canonicalizes under [`DEFAULT_DEGREE_CAP`].
pub fn parse_poly(src: &str) -> Result<ParamPolynomial, SymbolicError> {
    canonicalize(&parse_expr(src)?, DEFAULT_DEGREE_CAP)
}

/// Parses `+ - * · / ^ ( )`, integers and the symbol names accepted by
/// [`Symbol::parse`]. Division is only allowed by constants.
pub fn parse_expr(src: &str) -> Result<PolyExpr, SymbolicError> {
    let tokens = tokenize(src)?;
    let mut p = Parser {
        tokens,
        at: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.at != p.tokens.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

impl FromStr for ParamPolynomial {
    type Err = SymbolicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        canonicalize(&parse_expr(s)?, DEFAULT_DEGREE_CAP)
    }
}

/// Parses a rational literal such as `-3`, `5/2` or `0.25`.
pub fn parse_rational(s: &str) -> Result<Rational, SymbolicError> {
    let t = s.trim();
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches('-'), frac);
        let num: BigInt = digits.parse().map_err(|_| SymbolicError::Parse {
            pos: 0,
            msg: format!("bad decimal {t:?}"),
        })?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let v = Rational::new(num, den);
        return Ok(if neg { -v } else { v });
    }
    let p: ParamPolynomial = t.parse()?;
    p.as_constant().ok_or_else(|| SymbolicError::Parse {
        pos: 0,
        msg: format!("{t:?} is not a rational constant"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ParamPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn parses_conventional_notation() {
        assert_eq!(p("(α-2)^2 - (α^2 - 4α + 4)"), ParamPolynomial::zero());
        assert_eq!(p("(n-4)*alpha - 2*beta").to_string(), "n·α - 4·α - 2·β");
        assert_eq!(p("α₀ + alpha_0 - 2α0"), ParamPolynomial::zero());
        assert_eq!(p("n^2/4"), p("1/4 n^2"));
        assert_eq!(p("−3α − 2β"), p("-3*alpha-2*beta"));
    }

    #[test]
    fn rellich_objective_expands_to_quartic() {
        let g = p("α(n-α)((n-4)(α-2) - α(n-α)/2)/2");
        assert_eq!(g.degree_in(Symbol::Alpha), 4);
        // expanded by hand with u = α(n-α): G = u(n-4)(α-2)/2 - u²/4
        assert_eq!(g, p("-1/4 α^4 + 2 α^3 + (n^2/4 - n - 4) α^2 - n(n-4) α"));
    }

    #[test]
    fn parse_errors_are_structured() {
        assert!(matches!(p_err("α +"), SymbolicError::Parse { .. }));
        assert!(matches!(p_err("x"), SymbolicError::Parse { .. }));
        assert!(matches!(p_err("1/(α-α)"), SymbolicError::DivisionByZero));
        assert!(matches!(p_err("1/α"), SymbolicError::Parse { .. }));
        assert!(matches!(p_err("α^70"), SymbolicError::DegreeOverflow { .. }));
    }

    fn p_err(s: &str) -> SymbolicError {
        s.parse::<ParamPolynomial>().unwrap_err()
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("5/2").unwrap(), Rational::new(5.into(), 2.into()));
        assert_eq!(parse_rational("-0.25").unwrap(), Rational::new((-1).into(), 4.into()));
        assert!(parse_rational("alpha").is_err());
    }
}
