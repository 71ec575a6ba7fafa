//! Exact optimization of inequality constants over α.
//!
//! Every family objective is read off the symbolic pipeline (reduced,
//! substituted and relaxed forms, or a vector-factor potential) rather than
//! typed in, so the optimizer and the derivation cannot drift apart.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::form::{cauchy_relax, reduce_to_form, FormBasis, FormError, QuadraticForm, RelaxDirection};
use crate::operator::{adjoint, compose, make_operator, t_alpha_beta, OperatorFamily};
use crate::radial::{potential_of_factor, LogMonomial, VectorFactor};
use crate::symbolic::{
    int, ratio, AlgebraicNumber, AlgebraicValue, Bound, ParamPolynomial, Rational, Symbol, SymbolicError,
    UniPoly,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstantsError {
    #[error("objective of {family} is unbounded above on {constraint}")]
    Unbounded { family: String, constraint: String },
    #[error("objective of {family} is constant; there is no distinguished maximizer")]
    ConstantObjective { family: String },
    #[error("constraint set of {family} is empty for n = {n}")]
    EmptyConstraint { family: String, n: String },
    #[error("{0}")]
    Domain(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("identity check failed: {0}")]
    IdentityFailed(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityFamily {
    /// `G_n(α)`: `β = α(n−α)/2` in the relaxed form, value coefficient.
    Rellich,
    /// `H_n(α)`: `β = (n−4)(α−2)`, Euler term relaxed onto the gradient.
    GradH,
    /// `α(n−α)`: `β = 0` in the relaxed form.
    GradF,
    /// `K_n(α)`: `β = (n−4)(α−2)`, gradient term relaxed onto the Euler term.
    EulerK,
    /// `−s(α)`, the gradient coefficient of the one-parameter family, under
    /// the requirement that the value coefficient stays nonnegative.
    Schmincke,
    /// `F(α)` on the half-line, `β = (α−α²)/2`.
    Halfline,
    /// `α(n−2−α)` from the vector factor `∇ + α|x|^-2 x`.
    Hardy,
    /// `α(n−2−α)` from the scalar factor `|x|^-1 D + α|x|^-1`.
    ImprovedHardy,
}

impl InequalityFamily {
    pub const ALL: [InequalityFamily; 8] = [
        InequalityFamily::Rellich,
        InequalityFamily::GradH,
        InequalityFamily::GradF,
        InequalityFamily::EulerK,
        InequalityFamily::Schmincke,
        InequalityFamily::Halfline,
        InequalityFamily::Hardy,
        InequalityFamily::ImprovedHardy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InequalityFamily::Rellich => "rellich",
            InequalityFamily::GradH => "grad_H",
            InequalityFamily::GradF => "grad_F",
            InequalityFamily::EulerK => "euler_K",
            InequalityFamily::Schmincke => "schmincke",
            InequalityFamily::Halfline => "halfline",
            InequalityFamily::Hardy => "hardy",
            InequalityFamily::ImprovedHardy => "improved_hardy",
        }
    }

    /// Basis integral whose coefficient is optimized.
    pub fn target(self) -> FormBasis {
        match self {
            InequalityFamily::Rellich | InequalityFamily::Halfline => FormBasis::Val(4),
            InequalityFamily::GradH | InequalityFamily::GradF | InequalityFamily::Schmincke => FormBasis::Grad(2),
            InequalityFamily::EulerK => FormBasis::Eul(4),
            InequalityFamily::Hardy | InequalityFamily::ImprovedHardy => FormBasis::Val(2),
        }
    }

    /// The dimension this family is tied to, if any.
    pub fn fixed_dimension(self) -> Option<i64> {
        (self == InequalityFamily::Halfline).then_some(1)
    }

    /// Objective as a polynomial in `α` and `n`.
    pub fn objective(self) -> Result<ParamPolynomial, ConstantsError> {
        let a = ParamPolynomial::var(Symbol::Alpha);
        let n = ParamPolynomial::var(Symbol::N);
        let c = |v: i64| ParamPolynomial::int(v);
        let rhs = |q: &QuadraticForm, b: FormBasis| -q.coefficient(b);
        Ok(match self {
            InequalityFamily::Rellich => {
                let beta = (&a * &(&n - &a)).scale(&ratio(1, 2));
                rhs(&relaxed_form()?.substitute(Symbol::Beta, &beta), FormBasis::Val(4))
            }
            InequalityFamily::GradF => rhs(&relaxed_form()?.substitute(Symbol::Beta, &c(0)), FormBasis::Grad(2)),
            InequalityFamily::GradH | InequalityFamily::EulerK => {
                let beta = (&n - &c(4)) * (&a - &c(2));
                let q = reduced_form()?.substitute(Symbol::Beta, &beta);
                let (q, _) = if self == InequalityFamily::GradH {
                    cauchy_relax(&q, RelaxDirection::EulToGrad, 2)?
                } else {
                    cauchy_relax(&q, RelaxDirection::GradToEul, 2)?
                };
                rhs(&q, self.target())
            }
            InequalityFamily::Schmincke => {
                rhs(&relaxed_form()?.substitute(Symbol::Beta, &schmincke_beta()), FormBasis::Grad(2))
            }
            InequalityFamily::Halfline => {
                let beta = (&a - &(&a * &a)).scale(&ratio(1, 2));
                let q = reduced_form()?
                    .substitute(Symbol::N, &c(1))
                    .half_line_canonical()
                    .substitute(Symbol::Beta, &beta);
                rhs(&q, FormBasis::Val(4))
            }
            InequalityFamily::Hardy => {
                let v = potential_of_factor(&VectorFactor::hardy(a), &n);
                -v.coefficient(&LogMonomial::r_pow(-2))
            }
            InequalityFamily::ImprovedHardy => {
                let t = make_operator(&OperatorFamily::TildeT { alpha: a }).expect("fixed family");
                rhs(&reduce_to_form(&compose(&adjoint(&t), &t))?, FormBasis::Val(2))
            }
        })
    }

    /// Closed admissible set for `α` at dimension `n`.
    pub fn constraint(self, n: &Rational) -> Result<ConstraintSet, ConstantsError> {
        let fin = |r: Rational| Bound::Finite(r);
        let both = || ConstraintSet::new(vec![(Bound::NegInf, Bound::int(0)), (Bound::int(4), Bound::PosInf)]);
        let set = match self {
            InequalityFamily::Rellich | InequalityFamily::GradF => both(),
            InequalityFamily::GradH => ConstraintSet::new(vec![(Bound::NegInf, Bound::int(0))]),
            InequalityFamily::EulerK => ConstraintSet::new(vec![(fin(int(4) - n), Bound::int(4))]),
            InequalityFamily::Schmincke => {
                // |α − 2| ≥ max(2, |n/2 − 2|): α ≤ 0 or α ≥ 4 together with 4s + n² ≥ 0
                let d = (n * ratio(1, 2) - int(2)).abs().max(int(2));
                ConstraintSet::new(vec![(Bound::NegInf, fin(int(2) - &d)), (fin(int(2) + d), Bound::PosInf)])
            }
            InequalityFamily::Halfline | InequalityFamily::Hardy | InequalityFamily::ImprovedHardy => {
                ConstraintSet::new(vec![(Bound::NegInf, Bound::PosInf)])
            }
        };
        if set.is_empty() {
            return Err(ConstantsError::EmptyConstraint {
                family: self.name().into(),
                n: n.to_string(),
            });
        }
        Ok(set)
    }
}

impl fmt::Display for InequalityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InequalityFamily {
    type Err = ConstantsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        InequalityFamily::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ConstantsError::UnknownFamily(s.into()))
    }
}

/// `⟨f, T⁺T f⟩` reduced to basis integrals.
pub fn reduced_form() -> Result<QuadraticForm, ConstantsError> {
    let t = t_alpha_beta();
    Ok(reduce_to_form(&compose(&adjoint(&t), &t))?)
}

/// The reduced form with `EUL(4)` relaxed onto `GRAD(2)`; valid when
/// `α(α−4) ≥ 0`.
pub fn relaxed_form() -> Result<QuadraticForm, ConstantsError> {
    Ok(cauchy_relax(&reduced_form()?, RelaxDirection::EulToGrad, 2)?.0)
}

/// `β = (n−4)(α − n/2)/2`, the substitution turning the relaxed form into
/// the one-parameter family in `s`.
pub fn schmincke_beta() -> ParamPolynomial {
    let a = ParamPolynomial::var(Symbol::Alpha);
    let n = ParamPolynomial::var(Symbol::N);
    ((&n - &ParamPolynomial::int(4)) * (&a - &n.scale(&ratio(1, 2)))).scale(&ratio(1, 2))
}

/// `s(α) = α² − 4α − n(n−4)/2`.
pub fn schmincke_s() -> ParamPolynomial {
    "α^2 - 4*α - n*(n-4)/2".parse().expect("fixed expression")
}

/// Finite union of closed intervals with rational or infinite ends.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSet {
    intervals: Vec<(Bound, Bound)>,
}

fn bound_le(a: &Bound, b: &Bound) -> bool {
    match (a, b) {
        (Bound::NegInf, _) | (_, Bound::PosInf) => true,
        (Bound::Finite(x), Bound::Finite(y)) => x <= y,
        _ => false,
    }
}

impl ConstraintSet {
    pub fn new(intervals: Vec<(Bound, Bound)>) -> Self {
        ConstraintSet { intervals }
    }

    pub fn intervals(&self) -> &[(Bound, Bound)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        !self.intervals.iter().any(|(lo, hi)| bound_le(lo, hi))
    }

    pub fn contains(&self, x: &AlgebraicNumber) -> bool {
        self.intervals.iter().any(|(lo, hi)| {
            let above = match lo {
                Bound::Finite(v) => x.cmp_rational(v).is_ge(),
                Bound::NegInf => true,
                Bound::PosInf => false,
            };
            let below = match hi {
                Bound::Finite(v) => x.cmp_rational(v).is_le(),
                Bound::PosInf => true,
                Bound::NegInf => false,
            };
            above && below
        })
    }

    /// Whether `x` is a finite endpoint of the set.
    pub fn is_endpoint(&self, x: &AlgebraicNumber) -> bool {
        let Some(r) = x.as_rational() else {
            return false;
        };
        self.intervals
            .iter()
            .flat_map(|(lo, hi)| [lo, hi])
            .any(|b| matches!(b, Bound::Finite(v) if v == r))
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |b: &Bound| match b {
            Bound::NegInf => "-∞".to_string(),
            Bound::PosInf => "∞".to_string(),
            Bound::Finite(v) => crate::symbolic::fmt_rational(v),
        };
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|(lo, hi)| {
                let l = if matches!(lo, Bound::NegInf) { "(" } else { "[" };
                let r = if matches!(hi, Bound::PosInf) { ")" } else { "]" };
                format!("{l}{}, {}{r}", show(lo), show(hi))
            })
            .collect();
        f.write_str(&parts.join(" ∪ "))
    }
}

#[derive(Clone, Debug)]
pub struct OptimizationResult {
    pub family: InequalityFamily,
    pub n: Rational,
    pub objective: UniPoly,
    pub constraint: ConstraintSet,
    /// Every point attaining the maximum, ascending.
    pub maximizers: Vec<AlgebraicNumber>,
    pub max_value: AlgebraicValue,
    /// Whether a maximizer lies on the boundary of the constraint set.
    pub boundary_attained: bool,
}

impl OptimizationResult {
    /// Exact certificate: for a rational maximum `v`, `objective − v`
    /// vanishes modulo the defining polynomial of every maximizer.
    pub fn certificate(&self) -> bool {
        let Some(v) = self.max_value.as_rational() else {
            return false;
        };
        let shifted = &self.objective - &UniPoly::constant(v);
        self.maximizers.iter().all(|m| shifted.rem(m.minpoly()).is_zero())
    }
}

/// Unbounded above on an interval reaching `±∞`.
fn unbounded(p: &UniPoly, lo: &Bound, hi: &Bound) -> bool {
    let Some(deg) = p.degree() else { return false };
    if deg == 0 {
        return false;
    }
    let lead = p.lead();
    let up = matches!(hi, Bound::PosInf) && lead.is_positive();
    let down_sign = if deg % 2 == 0 { lead.clone() } else { -lead };
    let down = matches!(lo, Bound::NegInf) && down_sign.is_positive();
    up || down
}

/// Global maximum of a univariate objective over a closed constraint set,
/// from exact critical points and boundary values.
pub fn maximize(objective: &UniPoly, constraint: &ConstraintSet) -> Result<(Vec<AlgebraicNumber>, AlgebraicValue), ConstantsError> {
    if objective.degree().unwrap_or(0) == 0 {
        return Err(ConstantsError::ConstantObjective { family: String::new() });
    }
    let deriv = objective.derivative();
    let mut candidates: Vec<AlgebraicNumber> = Vec::new();
    for (lo, hi) in constraint.intervals() {
        if !bound_le(lo, hi) {
            continue;
        }
        if unbounded(objective, lo, hi) {
            return Err(ConstantsError::Unbounded {
                family: String::new(),
                constraint: constraint.to_string(),
            });
        }
        for b in [lo, hi] {
            if let Bound::Finite(v) = b {
                candidates.push(AlgebraicNumber::rational(v.clone()));
            }
        }
        if lo != hi && deriv.degree().unwrap_or(0) > 0 {
            for root in deriv.isolate_real_roots(lo.clone(), hi.clone())? {
                candidates.push(AlgebraicNumber::from_root(&root));
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    let values: Vec<AlgebraicValue> = candidates.iter().map(|c| c.eval_poly(objective)).collect();
    let best = values
        .iter()
        .skip(1)
        .fold(&values[0], |acc, v| if v.compare(acc).is_gt() { v } else { acc })
        .clone();
    let maximizers: Vec<AlgebraicNumber> = candidates
        .into_iter()
        .zip(&values)
        .filter(|(_, v)| v.compare(&best).is_eq())
        .map(|(c, _)| c)
        .collect();
    // express the value in the field of the first maximizer
    let max_value = match best.as_rational() {
        Some(r) => AlgebraicValue::from_rational(r),
        None => maximizers[0].eval_poly(objective),
    };
    Ok((maximizers, max_value))
}

pub fn optimize_family(family: InequalityFamily, n: &Rational) -> Result<OptimizationResult, ConstantsError> {
    if let Some(d) = family.fixed_dimension() {
        if *n != int(d) {
            return Err(ConstantsError::Domain(format!(
                "{family} is the n = {d} instance; got n = {n}"
            )));
        }
    }
    let objective = family.objective()?.substitute(Symbol::N, &ParamPolynomial::constant(n.clone()));
    let objective = UniPoly::from_param(&objective, Symbol::Alpha)?;
    let constraint = family.constraint(n)?;
    let (maximizers, max_value) = maximize(&objective, &constraint).map_err(|e| match e {
        ConstantsError::Unbounded { constraint, .. } => ConstantsError::Unbounded {
            family: family.name().into(),
            constraint,
        },
        ConstantsError::ConstantObjective { .. } => ConstantsError::ConstantObjective {
            family: family.name().into(),
        },
        other => other,
    })?;
    let boundary_attained = maximizers.iter().any(|m| constraint.is_endpoint(m));
    Ok(OptimizationResult {
        family,
        n: n.clone(),
        objective,
        constraint,
        maximizers,
        max_value,
        boundary_attained,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum SchminckeInput {
    Alpha(Rational),
    S(Rational),
}

#[derive(Clone, Debug)]
pub struct SchminckeResult {
    pub n: Rational,
    pub s: Rational,
    /// The `α` values with `s(α) = s`, ascending.
    pub alphas: Vec<AlgebraicNumber>,
    /// Coefficient of `∫|x|^-2|∇f|²`, equal to `−s`.
    pub gradient_coeff: Rational,
    /// Coefficient of `∫|x|^-4 f²`, equal to `[(n−4)/4]²(4s + n²)`.
    pub value_coeff: Rational,
}

/// Checks that substituting [`schmincke_beta`] in the relaxed form yields the
/// gradient coefficient `−s(α)` and value coefficient `[(n−4)/4]²(4s(α)+n²)`
/// as polynomial identities in `n` and `α`.
pub fn schmincke_identity() -> Result<(), ConstantsError> {
    let q = relaxed_form()?.substitute(Symbol::Beta, &schmincke_beta());
    let (grad, val) = schmincke_coefficients(&schmincke_s());
    let got_grad = -q.coefficient(FormBasis::Grad(2));
    let got_val = -q.coefficient(FormBasis::Val(4));
    if got_grad != grad {
        return Err(ConstantsError::IdentityFailed(format!("gradient coefficient {got_grad} ≠ {grad}")));
    }
    if got_val != val {
        return Err(ConstantsError::IdentityFailed(format!("value coefficient {got_val} ≠ {val}")));
    }
    Ok(())
}

/// `(−s, [(n−4)/4]²(4s+n²))` for a symbolic `s`.
fn schmincke_coefficients(s: &ParamPolynomial) -> (ParamPolynomial, ParamPolynomial) {
    let n = ParamPolynomial::var(Symbol::N);
    let m = (&n - &ParamPolynomial::int(4)).scale(&ratio(1, 4));
    let val = &(&m * &m) * &(s.scale(&int(4)) + &n * &n);
    (-s, val)
}

pub fn schmincke_map(input: SchminckeInput, n: &Rational) -> Result<SchminckeResult, ConstantsError> {
    let floor = -(n * (n - int(4))) * ratio(1, 2);
    let s_poly = schmincke_s().substitute(Symbol::N, &ParamPolynomial::constant(n.clone()));
    let s_uni = UniPoly::from_param(&s_poly, Symbol::Alpha)?;
    let s = match &input {
        SchminckeInput::S(s) => {
            if *s < floor {
                return Err(ConstantsError::Constraint(format!(
                    "s = {s} lies below −n(n−4)/2 = {floor}"
                )));
            }
            s.clone()
        }
        SchminckeInput::Alpha(a) => {
            if *a > int(0) && *a < int(4) {
                return Err(ConstantsError::Constraint(format!("α = {a} must satisfy α ≤ 0 or α ≥ 4")));
            }
            s_uni.eval(a)
        }
    };
    let shifted = &s_uni - &UniPoly::constant(s.clone());
    let alphas: Vec<AlgebraicNumber> = shifted
        .isolate_real_roots(Bound::NegInf, Bound::PosInf)?
        .iter()
        .map(AlgebraicNumber::from_root)
        .collect();

    // exact consistency with the relaxed form at every preimage α
    let bind_n = |p: &ParamPolynomial| p.substitute(Symbol::N, &ParamPolynomial::constant(n.clone()));
    let q = relaxed_form()?.substitute(Symbol::Beta, &schmincke_beta());
    let grad_uni = UniPoly::from_param(&bind_n(&-q.coefficient(FormBasis::Grad(2))), Symbol::Alpha)?;
    let val_uni = UniPoly::from_param(&bind_n(&-q.coefficient(FormBasis::Val(4))), Symbol::Alpha)?;
    let (g, v) = schmincke_coefficients(&ParamPolynomial::constant(s.clone()));
    let gradient_coeff = bind_n(&g).as_constant().expect("constant after binding n");
    let value_coeff = bind_n(&v).as_constant().expect("constant after binding n");
    for a in &alphas {
        let ok_g = a.eval_poly(&grad_uni).as_rational() == Some(gradient_coeff.clone());
        let ok_v = a.eval_poly(&val_uni).as_rational() == Some(value_coeff.clone());
        if !(ok_g && ok_v) {
            return Err(ConstantsError::IdentityFailed(format!(
                "relaxed form at α = {a} disagrees with the coefficients for s = {s}"
            )));
        }
    }
    Ok(SchminckeResult {
        n: n.clone(),
        s,
        alphas,
        gradient_coeff,
        value_coeff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse_poly;

    fn uni(s: &str, n: i64) -> UniPoly {
        let p = parse_poly(s).unwrap().substitute(Symbol::N, &ParamPolynomial::int(n));
        UniPoly::from_param(&p, Symbol::Alpha).unwrap()
    }

    #[test]
    fn objectives_match_hand_entered_polynomials() {
        let cases = [
            (InequalityFamily::Rellich, "α*(n-α)*((n-4)*(α-2) - α*(n-α)/2)/2"),
            (InequalityFamily::GradH, "(n-4+α)*(4-α)"),
            (InequalityFamily::GradF, "α*(n-α)"),
            (InequalityFamily::EulerK, "-(α+n-4)*(α-4)"),
            (InequalityFamily::Schmincke, "-(α^2 - 4*α - n*(n-4)/2)"),
            (InequalityFamily::Halfline, "3*α - 19/4*α^2 + 2*α^3 - 1/4*α^4"),
            (InequalityFamily::Hardy, "α*(n-2-α)"),
            (InequalityFamily::ImprovedHardy, "α*(n-2-α)"),
        ];
        for (f, want) in cases {
            assert_eq!(f.objective().unwrap(), parse_poly(want).unwrap(), "{f}");
        }
    }

    #[test]
    fn rellich_n5() {
        let r = optimize_family(InequalityFamily::Rellich, &int(5)).unwrap();
        assert_eq!(r.max_value.as_rational(), Some(ratio(25, 16)));
        assert_eq!(r.maximizers.len(), 2);
        assert_eq!(r.maximizers[0].to_string(), "2 - (13/2)^(1/2)");
        assert_eq!(r.maximizers[1].to_string(), "2 + (13/2)^(1/2)");
        assert!((r.maximizers[1].to_f64() - 4.5495).abs() < 1e-4);
        assert!(!r.boundary_attained);
        assert!(r.certificate());
    }

    #[test]
    fn rellich_certificate_range() {
        for n in 5..=12 {
            let r = optimize_family(InequalityFamily::Rellich, &int(n)).unwrap();
            let want = ratio(n * (n - 4), 4);
            assert_eq!(r.max_value.as_rational(), Some(&want * &want), "n = {n}");
            // α_± = 2 ± (n²/2 − 2n + 4)^(1/2)
            let radicand = ratio(n * n, 2) - int(2 * n) + int(4);
            for (m, sign) in r.maximizers.iter().zip([-1, 1]) {
                assert_eq!(m.quadratic_surd(), Some((int(2), radicand.clone(), sign)));
                assert!(r.constraint.contains(m));
            }
            assert!(r.certificate());
        }
    }

    #[test]
    fn halfline_and_hardy() {
        let r = optimize_family(InequalityFamily::Halfline, &int(1)).unwrap();
        assert_eq!(r.max_value.as_rational(), Some(ratio(9, 16)));
        let shown: Vec<String> = r.maximizers.iter().map(|m| m.to_string()).collect();
        assert_eq!(shown, ["2 - (5/2)^(1/2)", "2 + (5/2)^(1/2)"]);
        assert!(optimize_family(InequalityFamily::Halfline, &int(3)).is_err());

        for f in [InequalityFamily::Hardy, InequalityFamily::ImprovedHardy] {
            let r = optimize_family(f, &int(3)).unwrap();
            assert_eq!(r.maximizers, vec![AlgebraicNumber::rational(ratio(1, 2))]);
            assert_eq!(r.max_value.as_rational(), Some(ratio(1, 4)));
        }
    }

    #[test]
    fn gradient_families() {
        for n in 5..=12 {
            let want = if n >= 8 { ratio(n * n, 4) } else { int(4 * (n - 4)) };
            for f in [InequalityFamily::GradH, InequalityFamily::GradF] {
                let r = optimize_family(f, &int(n)).unwrap();
                assert_eq!(r.max_value.as_rational(), Some(want.clone()), "{f} n = {n}");
            }
        }
        let r = optimize_family(InequalityFamily::GradF, &int(8)).unwrap();
        assert_eq!(r.maximizers, vec![AlgebraicNumber::rational(int(4))]);
        assert!(r.boundary_attained);
        let r = optimize_family(InequalityFamily::GradH, &int(7)).unwrap();
        assert_eq!(r.maximizers, vec![AlgebraicNumber::rational(int(0))]);
        assert!(r.boundary_attained);
    }

    #[test]
    fn euler_family() {
        for n in 2..=12 {
            let r = optimize_family(InequalityFamily::EulerK, &int(n)).unwrap();
            assert_eq!(r.max_value.as_rational(), Some(ratio(n * n, 4)), "n = {n}");
            assert_eq!(r.maximizers, vec![AlgebraicNumber::rational(ratio(8 - n, 2))]);
        }
    }

    #[test]
    fn schmincke_family_and_dominance() {
        for n in 5..=7 {
            let path = optimize_family(InequalityFamily::Schmincke, &int(n)).unwrap();
            assert_eq!(path.max_value.as_rational(), Some(ratio(n * (n - 4), 2)));
            assert!(path.boundary_attained);
            let grad_h = optimize_family(InequalityFamily::GradH, &int(n)).unwrap();
            assert!(grad_h.max_value.compare(&path.max_value).is_ge());
        }
        let r = optimize_family(InequalityFamily::Schmincke, &int(10)).unwrap();
        assert_eq!(r.max_value.as_rational(), Some(int(25)));
    }

    #[test]
    fn unbounded_objective_is_an_error() {
        let p = UniPoly::from_ints(&[0, 0, 1]);
        let set = ConstraintSet::new(vec![(Bound::NegInf, Bound::int(0))]);
        assert!(matches!(maximize(&p, &set), Err(ConstantsError::Unbounded { .. })));
        let set = ConstraintSet::new(vec![(Bound::int(-1), Bound::int(2))]);
        let (m, v) = maximize(&p, &set).unwrap();
        assert_eq!(m, vec![AlgebraicNumber::rational(int(2))]);
        assert_eq!(v.as_rational(), Some(int(4)));
    }

    #[test]
    fn halfline_symmetry_and_derivative() {
        let f = InequalityFamily::Halfline.objective().unwrap();
        let g = ParamPolynomial::var(Symbol::Gamma);
        let two = ParamPolynomial::int(2);
        assert_eq!(f.substitute(Symbol::Alpha, &(&two + &g)), f.substitute(Symbol::Alpha, &(&two - &g)));
        let fp = UniPoly::from_param(&f.derivative(Symbol::Alpha), Symbol::Alpha).unwrap();
        assert_eq!(fp, uni("-(α-2)*((α-2)^2 - 5/2)", 1));
    }

    #[test]
    fn schmincke_map_examples() {
        schmincke_identity().unwrap();
        let r = schmincke_map(SchminckeInput::S(int(0)), &int(5)).unwrap();
        assert_eq!(r.value_coeff, ratio(25, 16));
        assert_eq!(r.gradient_coeff, int(0));
        assert_eq!(r.alphas.len(), 2);
        for n in 5..=12 {
            let r = schmincke_map(SchminckeInput::Alpha(int(4)), &int(n)).unwrap();
            assert_eq!(r.s, ratio(-n * (n - 4), 2));
        }
        let r = schmincke_map(SchminckeInput::S(int(-16)), &int(8)).unwrap();
        assert_eq!((r.gradient_coeff, r.value_coeff), (int(16), int(0)));
        assert!(matches!(
            schmincke_map(SchminckeInput::S(int(-3)), &int(5)),
            Err(ConstantsError::Constraint(_))
        ));
        assert!(schmincke_map(SchminckeInput::Alpha(int(2)), &int(5)).is_err());
    }

    #[test]
    fn printed_substitution_fails_the_identity() {
        // β = (n−4)[α − 2 − (n−4)/4]/2 does not reproduce the one-parameter form
        let printed = parse_poly("(n-4)*(α - 2 - (n-4)/4)/2").unwrap();
        let q = relaxed_form().unwrap().substitute(Symbol::Beta, &printed);
        assert_ne!(-q.coefficient(FormBasis::Grad(2)), -schmincke_s());
        let q = relaxed_form().unwrap().substitute(Symbol::Beta, &schmincke_beta());
        assert_eq!(-q.coefficient(FormBasis::Grad(2)), -schmincke_s());
    }

    #[test]
    fn family_names_round_trip() {
        for f in InequalityFamily::ALL {
            assert_eq!(f.name().parse::<InequalityFamily>().unwrap(), f);
        }
        assert!("nope".parse::<InequalityFamily>().is_err());
    }
}
