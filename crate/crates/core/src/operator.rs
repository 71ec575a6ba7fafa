//! Noncommutative algebra generated by the weights `|x|^-s`, the Euler
//! operator `D = x·∇` and the Laplacian `Δ`, with normal ordering, formal
//! adjoints and composition.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Signed;

use crate::symbolic::{Bindings, ParamPolynomial, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OperatorError {
    #[error("negative {generator} power {power} in custom term")]
    NegativePower { generator: &'static str, power: i64 },
}

/// Normal-ordered word `|x|^-rpow · D^dpow · Δ^lpow`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    pub rpow: u32,
    pub dpow: u32,
    pub lpow: u32,
}

impl Word {
    pub const IDENTITY: Word = Word {
        rpow: 0,
        dpow: 0,
        lpow: 0,
    };

    pub fn new(rpow: u32, dpow: u32, lpow: u32) -> Self {
        Word { rpow, dpow, lpow }
    }

    /// Total differential order `dpow + 2·lpow`.
    pub fn order(&self) -> u32 {
        self.dpow + 2 * self.lpow
    }

    fn generators(&self) -> Vec<Gen> {
        let mut g = Vec::new();
        if self.rpow > 0 {
            g.push(Gen::Weight(self.rpow));
        }
        g.extend(std::iter::repeat_n(Gen::Euler, self.dpow as usize));
        g.extend(std::iter::repeat_n(Gen::Laplacian, self.lpow as usize));
        g
    }
}

/// Single generator of the algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    /// Multiplication by `|x|^-s`, `s > 0`.
    Weight(u32),
    Euler,
    Laplacian,
}

/// Coefficient times an arbitrary (not necessarily ordered) generator string.
pub type RawTerm = (ParamPolynomial, Vec<Gen>);

/// Finite sum of normal-ordered words with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OperatorExpr {
    terms: BTreeMap<Word, ParamPolynomial>,
}

/// Named operator families.
#[derive(Clone, Debug)]
pub enum OperatorFamily {
    /// `-Δ + α|x|^-2 D + β|x|^-2`.
    TAlphaBeta {
        alpha: ParamPolynomial,
        beta: ParamPolynomial,
    },
    Laplacian,
    Euler,
    Weight(u32),
    /// Scalar first-order factor `|x|^-1 D + α|x|^-1`.
    TildeT { alpha: ParamPolynomial },
    /// Terms `(coefficient, rpow, dpow, lpow)`.
    Custom(Vec<(ParamPolynomial, i64, i64, i64)>),
}

pub fn make_operator(family: &OperatorFamily) -> Result<OperatorExpr, OperatorError> {
    Ok(match family {
        OperatorFamily::TAlphaBeta { alpha, beta } => {
            let mut op = OperatorExpr::zero();
            op.add_term(Word::new(0, 0, 1), ParamPolynomial::int(-1));
            op.add_term(Word::new(2, 1, 0), alpha.clone());
            op.add_term(Word::new(2, 0, 0), beta.clone());
            op
        }
        OperatorFamily::Laplacian => OperatorExpr::word(Word::new(0, 0, 1)),
        OperatorFamily::Euler => OperatorExpr::word(Word::new(0, 1, 0)),
        OperatorFamily::Weight(s) => OperatorExpr::word(Word::new(*s, 0, 0)),
        OperatorFamily::TildeT { alpha } => {
            let mut op = OperatorExpr::word(Word::new(1, 1, 0));
            op.add_term(Word::new(1, 0, 0), alpha.clone());
            op
        }
        OperatorFamily::Custom(terms) => {
            let mut op = OperatorExpr::zero();
            for (c, r, d, l) in terms {
                for (generator, power) in [("weight", *r), ("Euler", *d), ("Laplacian", *l)] {
                    if power < 0 {
                        return Err(OperatorError::NegativePower { generator, power });
                    }
                }
                op.add_term(Word::new(*r as u32, *d as u32, *l as u32), c.clone());
            }
            op
        }
    })
}

/// `T_{α,β}` with symbolic α, β.
pub fn t_alpha_beta() -> OperatorExpr {
    make_operator(&OperatorFamily::TAlphaBeta {
        alpha: Symbol::Alpha.into(),
        beta: Symbol::Beta.into(),
    })
    .expect("fixed family")
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::word(Word::IDENTITY)
    }

    pub fn word(w: Word) -> Self {
        Self::term(ParamPolynomial::one(), w)
    }

    pub fn term(c: ParamPolynomial, w: Word) -> Self {
        let mut op = Self::zero();
        op.add_term(w, c);
        op
    }

    pub fn add_term(&mut self, w: Word, c: ParamPolynomial) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w).or_insert_with(ParamPolynomial::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &ParamPolynomial)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: Word) -> ParamPolynomial {
        self.terms.get(&w).cloned().unwrap_or_else(ParamPolynomial::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest differential order among the terms.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(Word::order).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &ParamPolynomial) -> Self {
        let mut out = Self::zero();
        for (w, k) in &self.terms {
            out.add_term(*w, k * c);
        }
        out
    }

    pub fn specialize(&self, bindings: &Bindings) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(*w, c.eval_subst(bindings));
        }
        out
    }

    fn raw_terms(&self) -> Vec<RawTerm> {
        self.terms
            .iter()
            .map(|(w, c)| (c.clone(), w.generators()))
            .collect()
    }
}

/// Rewrites of an adjacent out-of-order pair; `None` when already ordered.
fn rewrite_pair(a: Gen, b: Gen) -> Option<Vec<(ParamPolynomial, Vec<Gen>)>> {
    use Gen::*;
    let n = || ParamPolynomial::var(Symbol::N);
    let int = |v: i64| ParamPolynomial::int(v);
    match (a, b) {
        (Weight(s), Weight(t)) => Some(vec![(int(1), vec![Weight(s + t)])]),
        // D·r^-s → r^-s·D − s·r^-s
        (Euler, Weight(s)) => Some(vec![
            (int(1), vec![Weight(s), Euler]),
            (int(-(s as i64)), vec![Weight(s)]),
        ]),
        // Δ·r^-s → r^-s·Δ − 2s·r^-(s+2)·D + s(s+2−n)·r^-(s+2)
        (Laplacian, Weight(s)) => {
            let s_ = s as i64;
            Some(vec![
                (int(1), vec![Weight(s), Laplacian]),
                (int(-2 * s_), vec![Weight(s + 2), Euler]),
                (&int(s_) * &(&int(s_ + 2) - &n()), vec![Weight(s + 2)]),
            ])
        }
        // Δ·D → D·Δ + 2Δ
        (Laplacian, Euler) => Some(vec![
            (int(1), vec![Euler, Laplacian]),
            (int(2), vec![Laplacian]),
        ]),
        _ => None,
    }
}

fn redexes(word: &[Gen]) -> Vec<usize> {
    (0..word.len().saturating_sub(1))
        .filter(|&i| rewrite_pair(word[i], word[i + 1]).is_some())
        .collect()
}

fn as_normal_word(word: &[Gen]) -> Word {
    let mut w = Word::IDENTITY;
    for g in word {
        match g {
            Gen::Weight(s) => w.rpow += s,
            Gen::Euler => w.dpow += 1,
            Gen::Laplacian => w.lpow += 1,
        }
    }
    w
}

/// Normal-orders a raw sum, choosing among the available redex positions of
/// each word with `choose` (which receives the positions and returns an index
/// into them). Every strategy reaches the same result.
pub fn normal_order_with(
    raw: Vec<RawTerm>,
    choose: &mut dyn FnMut(&[usize]) -> usize,
) -> OperatorExpr {
    let mut out = OperatorExpr::zero();
    let mut work: Vec<RawTerm> = raw
        .into_iter()
        .map(|(c, w)| (c, w.into_iter().filter(|g| *g != Gen::Weight(0)).collect()))
        .collect();
    while let Some((c, word)) = work.pop() {
        if c.is_zero() {
            continue;
        }
        let positions = redexes(&word);
        if positions.is_empty() {
            out.add_term(as_normal_word(&word), c);
            continue;
        }
        let i = positions[choose(&positions) % positions.len()];
        for (k, replacement) in rewrite_pair(word[i], word[i + 1]).unwrap() {
            let mut next = word[..i].to_vec();
            next.extend(replacement);
            next.extend_from_slice(&word[i + 2..]);
            work.push((&c * &k, next));
        }
    }
    out
}

/// Normal-orders a raw sum by always rewriting the leftmost redex.
pub fn normal_order(raw: Vec<RawTerm>) -> OperatorExpr {
    normal_order_with(raw, &mut |_| 0)
}

pub fn compose(a: &OperatorExpr, b: &OperatorExpr) -> OperatorExpr {
    compose_with(a, b, &mut |_| 0)
}

/// Composition `a∘b` normal-ordered under an explicit rewriting strategy.
pub fn compose_with(
    a: &OperatorExpr,
    b: &OperatorExpr,
    choose: &mut dyn FnMut(&[usize]) -> usize,
) -> OperatorExpr {
    let mut raw = Vec::new();
    for (ca, wa) in a.raw_terms() {
        for (cb, wb) in b.raw_terms() {
            let mut w = wa.clone();
            w.extend(wb);
            raw.push((&ca * &cb, w));
        }
    }
    normal_order_with(raw, choose)
}

/// Formal `L²(ℝⁿ)` adjoint: words reversed, `Δ⁺ = Δ`, `(|x|^-s)⁺ = |x|^-s`,
/// `D⁺ = -D - n`.
pub fn adjoint(a: &OperatorExpr) -> OperatorExpr {
    let n = ParamPolynomial::var(Symbol::N);
    let mut raw = Vec::new();
    for (w, c) in a.terms() {
        // Δ^m (−D − n)^k r^-s, expanding the binomial
        let mut partial: Vec<RawTerm> = vec![(c.clone(), vec![Gen::Laplacian; w.lpow as usize])];
        for _ in 0..w.dpow {
            let mut next = Vec::with_capacity(partial.len() * 2);
            for (k, word) in partial {
                let mut with_d = word.clone();
                with_d.push(Gen::Euler);
                next.push((-&k, with_d));
                next.push((-(&k * &n), word));
            }
            partial = next;
        }
        for (k, mut word) in partial {
            if w.rpow > 0 {
                word.push(Gen::Weight(w.rpow));
            }
            raw.push((k, word));
        }
    }
    normal_order(raw)
}

impl Add<&OperatorExpr> for &OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, c.clone());
        }
        out
    }
}

impl Sub<&OperatorExpr> for &OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: &OperatorExpr) -> OperatorExpr {
        self + &(-rhs)
    }
}

impl Neg for &OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        self.scale(&ParamPolynomial::int(-1))
    }
}

fn superscript(k: u32) -> String {
    const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string()
        .chars()
        .map(|d| SUP[d.to_digit(10).unwrap() as usize])
        .collect()
}

/// Writes `coeff·body` as the next summand, folding a leading minus sign of a
/// single-monomial coefficient into the separator.
fn write_summand(out: &mut String, first: bool, coeff: &ParamPolynomial, body: &str) {
    let single_negative = coeff.num_terms() == 1 && coeff.terms().next().unwrap().1.is_negative();
    let c = if single_negative { -coeff } else { coeff.clone() };
    let sep = match (first, single_negative) {
        (true, false) => "",
        (true, true) => "-",
        (false, false) => " + ",
        (false, true) => " - ",
    };
    out.push_str(sep);
    let is_one = c == ParamPolynomial::one();
    if body.is_empty() {
        out.push_str(&c.render_factor());
    } else if is_one {
        out.push_str(body);
    } else if body.starts_with('|') || c.num_terms() > 1 {
        out.push_str(&c.render_factor());
        out.push_str(body);
    } else {
        out.push_str(&c.to_string());
        out.push(' ');
        out.push_str(body);
    }
}

impl fmt::Display for OperatorExpr {
    /// Conventional rendering, e.g. `-Δ + α|x|^-2 x·∇ + β|x|^-2`: ascending
    /// weight, then descending Laplacian and Euler powers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut words: Vec<(&Word, &ParamPolynomial)> = self.terms.iter().collect();
        words.sort_by(|(a, _), (b, _)| {
            a.rpow
                .cmp(&b.rpow)
                .then(b.lpow.cmp(&a.lpow))
                .then(b.dpow.cmp(&a.dpow))
        });
        let mut out = String::new();
        for (i, (w, c)) in words.into_iter().enumerate() {
            let mut parts = Vec::new();
            if w.rpow > 0 {
                parts.push(format!("|x|^-{}", w.rpow));
            }
            match w.dpow {
                0 => {}
                1 => parts.push("x·∇".into()),
                k => parts.push(format!("(x·∇){}", superscript(k))),
            }
            match w.lpow {
                0 => {}
                1 => parts.push("Δ".into()),
                k => parts.push(format!("Δ{}", superscript(k))),
            }
            write_summand(&mut out, i == 0, c, &parts.join(" "));
        }
        f.write_str(&out)
    }
}

/// One-dimensional operator `Σ c·x^-s·d^k/dx^k`, keyed by `(k, s)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HalfLineOperator {
    terms: BTreeMap<(u32, u32), ParamPolynomial>,
}

fn stirling2(k: u32, j: u32) -> i64 {
    let mut table = vec![vec![0i64; k as usize + 1]; k as usize + 1];
    table[0][0] = 1;
    for a in 1..=k as usize {
        for b in 1..=a {
            table[a][b] = b as i64 * table[a - 1][b] + table[a - 1][b - 1];
        }
    }
    table[k as usize][j as usize]
}

impl HalfLineOperator {
    /// Rewrites words over `x > 0` using `D = x d/dx`, `Δ = d²/dx²` and
    /// `(x d/dx)^k = Σ_j S(k,j) x^j d^j/dx^j`. The expression should already
    /// be specialized to `n = 1`.
    pub fn from_expr(a: &OperatorExpr) -> Self {
        let mut out = HalfLineOperator::default();
        for (w, c) in a.terms() {
            for j in 0..=w.dpow {
                let s = stirling2(w.dpow, j);
                if s == 0 {
                    continue;
                }
                // x^-rpow · x^j · d^(j + 2·lpow)
                let xpow = w.rpow as i64 - j as i64;
                assert!(xpow >= 0, "positive powers of x do not arise here");
                out.add_term(j + 2 * w.lpow, xpow as u32, c * &ParamPolynomial::int(s));
            }
        }
        out
    }

    pub fn add_term(&mut self, order: u32, xpow: u32, c: ParamPolynomial) {
        let slot = self
            .terms
            .entry((order, xpow))
            .or_insert_with(ParamPolynomial::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&(order, xpow));
        }
    }

    pub fn coefficient(&self, order: u32, xpow: u32) -> ParamPolynomial {
        self.terms
            .get(&(order, xpow))
            .cloned()
            .unwrap_or_else(ParamPolynomial::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ParamPolynomial)> {
        self.terms.iter()
    }
}

impl fmt::Display for HalfLineOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, ((k, s), c)) in self.terms.iter().rev().enumerate() {
            let mut parts = Vec::new();
            if *s > 0 {
                parts.push(format!("|x|^-{s}"));
            }
            match k {
                0 => {}
                1 => parts.push("d/dx".into()),
                k => parts.push(format!("d{}/dx{}", superscript(*k), superscript(*k))),
            }
            write_summand(&mut out, i == 0, c, &parts.join(" "));
        }
        f.write_str(&out)
    }
}

/// `Σ x_j x_k ∂_j∂_k` expressed in the generators, `D² − D`.
pub fn mixed_second_derivative() -> OperatorExpr {
    let mut op = OperatorExpr::word(Word::new(0, 2, 0));
    op.add_term(Word::new(0, 1, 0), ParamPolynomial::int(-1));
    op
}
