//! Reduction of quadratic forms `⟨f, A f⟩` to weighted basis integrals by
//! integration by parts, and the Cauchy relaxation `|x·∇f|² ≤ |x|²|∇f|²`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::operator::{OperatorExpr, Word};
use crate::quadrature::{neumaier_sum, IntegralSet};
use crate::symbolic::{ParamPolynomial, Symbol, SymbolicError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormError {
    #[error("irreducible term {term}: only |x|^-s D^k (k ≤ 2), |x|^-s Δ and Δ² reduce")]
    Irreducible { term: String },
    #[error("basis element {0} is absent from the form")]
    MissingBasis(FormBasis),
    #[error("no integral value supplied for {0}")]
    MissingIntegral(FormBasis),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// Canonical integrals; ordered `LAP2 < GRAD < EUL < VAL`, then by weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FormBasis {
    /// `∫(Δf)²`
    Lap2,
    /// `∫|x|^-s |∇f|²`
    Grad(u32),
    /// `∫|x|^-s (x·∇f)²`
    Eul(u32),
    /// `∫|x|^-s f²`
    Val(u32),
}

impl FormBasis {
    pub fn integral(&self) -> String {
        let w = |s: u32| {
            if s == 0 {
                String::new()
            } else {
                format!("|x|^-{s}")
            }
        };
        match *self {
            FormBasis::Lap2 => "∫(Δf)²".into(),
            FormBasis::Grad(s) => format!("∫{}|∇f|²", w(s)),
            FormBasis::Eul(s) => format!("∫{}(x·∇f)²", w(s)),
            FormBasis::Val(s) => format!("∫{}f²", w(s)),
        }
    }

    pub fn weight(&self) -> u32 {
        match *self {
            FormBasis::Lap2 => 0,
            FormBasis::Grad(s) | FormBasis::Eul(s) | FormBasis::Val(s) => s,
        }
    }
}

impl fmt::Display for FormBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormBasis::Lap2 => f.write_str("LAP2"),
            FormBasis::Grad(s) => write!(f, "GRAD({s})"),
            FormBasis::Eul(s) => write!(f, "EUL({s})"),
            FormBasis::Val(s) => write!(f, "VAL({s})"),
        }
    }
}

/// Linear combination of basis integrals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QuadraticForm {
    coeffs: BTreeMap<FormBasis, ParamPolynomial>,
}

impl QuadraticForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (FormBasis, ParamPolynomial)>) -> Self {
        let mut q = Self::zero();
        for (b, c) in terms {
            q.add_term(b, c);
        }
        q
    }

    pub fn add_term(&mut self, b: FormBasis, c: ParamPolynomial) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(b).or_insert_with(ParamPolynomial::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.coeffs.remove(&b);
        }
    }

    pub fn coefficient(&self, b: FormBasis) -> ParamPolynomial {
        self.coeffs.get(&b).cloned().unwrap_or_else(ParamPolynomial::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormBasis, &ParamPolynomial)> {
        self.coeffs.iter()
    }

    pub fn basis(&self) -> impl Iterator<Item = FormBasis> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &ParamPolynomial) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(b, k)| (*b, k * c)))
    }

    pub fn eval_subst(&self, bindings: &crate::symbolic::Bindings) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(b, k)| (*b, k.eval_subst(bindings))))
    }

    pub fn substitute(&self, sym: Symbol, value: &ParamPolynomial) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(b, k)| (*b, k.substitute(sym, value))))
    }

    /// One-dimensional canonical form: `EUL(s+2)` and `GRAD(s)` coincide on
    /// the half-line, so every `EUL(s)` with `s ≥ 2` becomes `GRAD(s-2)`.
    pub fn half_line_canonical(&self) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(b, k)| {
            let b = match *b {
                FormBasis::Eul(s) if s >= 2 => FormBasis::Grad(s - 2),
                other => other,
            };
            (b, k.clone())
        }))
    }

    /// Renders `Q ≥ 0` as an inequality: when the leading coefficient is one,
    /// every other term moves to the right-hand side with its sign flipped.
    pub fn inequality_statement(&self) -> String {
        let mut it = self.coeffs.iter();
        let Some((lead, lead_c)) = it.next() else {
            return "0 ≥ 0".into();
        };
        if *lead_c != ParamPolynomial::one() {
            return format!("{} ≥ 0", self.render_sum(self.coeffs.iter().map(|(b, c)| (*b, c.clone()))));
        }
        let rest: Vec<(FormBasis, ParamPolynomial)> = it.map(|(b, c)| (*b, -c)).collect();
        if rest.is_empty() {
            return format!("{} ≥ 0", lead.integral());
        }
        format!("{} ≥ {}", lead.integral(), self.render_sum(rest.into_iter()))
    }

    fn render_sum(&self, terms: impl Iterator<Item = (FormBasis, ParamPolynomial)>) -> String {
        let mut out = String::new();
        for (i, (b, c)) in terms.enumerate() {
            let single_neg = c.num_terms() == 1 && c.terms().next().unwrap().1.is_negative();
            let c = if single_neg { -&c } else { c };
            match (i == 0, single_neg) {
                (true, true) => out.push('-'),
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
                (true, false) => {}
            }
            if c != ParamPolynomial::one() {
                out.push_str(&c.render_factor());
                out.push(' ');
            }
            out.push_str(&b.integral());
        }
        out
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(b, c)| {
                if *c == ParamPolynomial::one() {
                    b.to_string()
                } else {
                    format!("{}·{b}", c.render_factor())
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Add<&QuadraticForm> for &QuadraticForm {
    type Output = QuadraticForm;
    fn add(self, rhs: &QuadraticForm) -> QuadraticForm {
        let mut out = self.clone();
        for (b, c) in &rhs.coeffs {
            out.add_term(*b, c.clone());
        }
        out
    }
}

impl Sub<&QuadraticForm> for &QuadraticForm {
    type Output = QuadraticForm;
    fn sub(self, rhs: &QuadraticForm) -> QuadraticForm {
        self + &rhs.scale(&ParamPolynomial::int(-1))
    }
}

fn n_minus(s: u32) -> ParamPolynomial {
    &ParamPolynomial::var(Symbol::N) - &ParamPolynomial::int(s as i64)
}

/// `∫|x|^-s f·Df = -((n-s)/2)·VAL(s)`.
fn f_euler(s: u32) -> QuadraticForm {
    QuadraticForm::from_terms([(
        FormBasis::Val(s),
        n_minus(s).scale(&crate::symbolic::ratio(-1, 2)),
    )])
}

/// Reduction of the single word `∫ f·(|x|^-s D^k Δ^m f)`.
fn reduce_word(w: Word) -> Option<QuadraticForm> {
    let s = w.rpow;
    Some(match (w.dpow, w.lpow) {
        (0, 0) => QuadraticForm::from_terms([(FormBasis::Val(s), ParamPolynomial::one())]),
        (1, 0) => f_euler(s),
        // -(n-s)·∫|x|^-s f·Df − EUL(s)
        (2, 0) => {
            let mut q = f_euler(s).scale(&-n_minus(s));
            q.add_term(FormBasis::Eul(s), ParamPolynomial::int(-1));
            q
        }
        // -GRAD(s) + s·∫|x|^-(s+2) f·Df
        (0, 1) => {
            let mut q = f_euler(s + 2).scale(&ParamPolynomial::int(s as i64));
            q.add_term(FormBasis::Grad(s), ParamPolynomial::int(-1));
            q
        }
        (0, 2) if s == 0 => QuadraticForm::from_terms([(FormBasis::Lap2, ParamPolynomial::one())]),
        _ => return None,
    })
}

/// `⟨f, A f⟩` for real `f` supported away from the origin.
pub fn reduce_to_form(a: &OperatorExpr) -> Result<QuadraticForm, FormError> {
    let mut q = QuadraticForm::zero();
    for (w, c) in a.terms() {
        let part = reduce_word(*w).ok_or_else(|| FormError::Irreducible {
            term: OperatorExpr::term(c.clone(), *w).to_string(),
        })?;
        q = &q + &part.scale(c);
    }
    Ok(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelaxDirection {
    /// Replace `EUL(s+2)` by `GRAD(s)`.
    EulToGrad,
    /// Replace `GRAD(s)` by `EUL(s+2)`.
    GradToEul,
}

/// Sufficient validity condition `poly ≥ 0` recorded by a relaxation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignCondition {
    pub poly: ParamPolynomial,
}

impl fmt::Display for SignCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≥ 0", self.poly)
    }
}

/// Moves the coefficient of `EUL(s+2)` onto `GRAD(s)` (or conversely). Since
/// `EUL(s+2) ≤ GRAD(s)` pointwise, the relaxed form dominates the original
/// whenever the recorded condition holds, so its transposed right-hand side
/// is a weaker lower bound for the leading integral.
pub fn cauchy_relax(
    q: &QuadraticForm,
    direction: RelaxDirection,
    s: u32,
) -> Result<(QuadraticForm, SignCondition), FormError> {
    let (from, to) = match direction {
        RelaxDirection::EulToGrad => (FormBasis::Eul(s + 2), FormBasis::Grad(s)),
        RelaxDirection::GradToEul => (FormBasis::Grad(s), FormBasis::Eul(s + 2)),
    };
    let c = q.coefficient(from);
    if c.is_zero() {
        return Err(FormError::MissingBasis(from));
    }
    let mut out = q.clone();
    out.add_term(from, -&c);
    out.add_term(to, c.clone());
    let poly = match direction {
        RelaxDirection::EulToGrad => c,
        RelaxDirection::GradToEul => -c,
    };
    Ok((out, SignCondition { poly }))
}

/// `Σ coefficient × integral` with every symbol bound, summed with
/// compensation.
pub fn evaluate_form(
    q: &QuadraticForm,
    bindings: &BTreeMap<Symbol, f64>,
    integrals: &IntegralSet,
) -> Result<f64, FormError> {
    let mut parts = Vec::with_capacity(q.coeffs.len());
    for (b, c) in &q.coeffs {
        let v = integrals.get(*b).ok_or(FormError::MissingIntegral(*b))?;
        parts.push(c.eval_f64(bindings)? * v);
    }
    Ok(neumaier_sum(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{adjoint, compose, make_operator, t_alpha_beta, OperatorFamily};

    fn p(s: &str) -> ParamPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn bilaplacian_reduces_to_lap2() {
        let q = reduce_to_form(&OperatorExpr::word(Word::new(0, 0, 2))).unwrap();
        assert_eq!(q, QuadraticForm::from_terms([(FormBasis::Lap2, p("1"))]));
    }

    #[test]
    fn laplacian_rule_at_weight_two() {
        // ∫|x|^-2 fΔf = -GRAD(2) - (n-4)·VAL(4)
        let q = reduce_to_form(&OperatorExpr::word(Word::new(2, 0, 1))).unwrap();
        assert_eq!(
            q,
            QuadraticForm::from_terms([(FormBasis::Grad(2), p("-1")), (FormBasis::Val(4), p("4 - n"))])
        );
    }

    #[test]
    fn mixed_second_derivative_rule() {
        // ∫|x|^-4 f(D²-D)f = -(n-3)∫|x|^-4 f Df - EUL(4)
        let mut a = OperatorExpr::word(Word::new(4, 2, 0));
        a.add_term(Word::new(4, 1, 0), p("-1"));
        let want = &f_euler(4).scale(&p("-(n-3)")) - &QuadraticForm::from_terms([(FormBasis::Eul(4), p("1"))]);
        assert_eq!(reduce_to_form(&a).unwrap(), want);
    }

    #[test]
    fn irreducible_shapes_are_named() {
        let err = reduce_to_form(&OperatorExpr::word(Word::new(2, 1, 1))).unwrap_err();
        assert!(matches!(err, FormError::Irreducible { ref term } if term.contains("x·∇")));
        assert!(reduce_to_form(&OperatorExpr::word(Word::new(2, 0, 2))).is_err());
        assert!(reduce_to_form(&OperatorExpr::word(Word::new(0, 3, 0))).is_err());
    }

    #[test]
    fn tilde_factor_form() {
        let t = make_operator(&OperatorFamily::TildeT {
            alpha: Symbol::Alpha.into(),
        })
        .unwrap();
        let q = reduce_to_form(&compose(&adjoint(&t), &t)).unwrap();
        assert_eq!(
            q,
            QuadraticForm::from_terms([(FormBasis::Eul(2), p("1")), (FormBasis::Val(2), p("α(α - n + 2)"))])
        );
    }

    #[test]
    fn relaxation_records_condition() {
        let t = t_alpha_beta();
        let q = reduce_to_form(&compose(&adjoint(&t), &t)).unwrap();
        let (r, cond) = cauchy_relax(&q, RelaxDirection::EulToGrad, 2).unwrap();
        assert_eq!(cond.poly, p("α(α-4)"));
        assert_eq!(r.coefficient(FormBasis::Grad(2)), p("-(α(n-α) - 2β)"));
        assert!(r.coefficient(FormBasis::Eul(4)).is_zero());
        assert_eq!(
            cauchy_relax(&r, RelaxDirection::EulToGrad, 2).unwrap_err(),
            FormError::MissingBasis(FormBasis::Eul(4))
        );
    }

    #[test]
    fn statement_rendering() {
        let q = QuadraticForm::from_terms([
            (FormBasis::Lap2, p("1")),
            (FormBasis::Grad(2), p("-(α(n-α) - 2β)")),
            (FormBasis::Val(4), p("-3")),
        ]);
        assert_eq!(
            q.inequality_statement(),
            "∫(Δf)² ≥ (n·α - α^2 - 2·β) ∫|x|^-2|∇f|² + 3 ∫|x|^-4f²"
        );
        let leadless = QuadraticForm::from_terms([(FormBasis::Eul(2), p("2"))]);
        assert_eq!(leadless.inequality_statement(), "2 ∫|x|^-2(x·∇f)² ≥ 0");
    }
}
