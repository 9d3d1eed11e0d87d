//! The ordered field of rational functions of the symbolic grid parameter
//! `N`, compared by eventual dominance.
//!
//! `N` stands for an unboundedly large grid size: `f > g` holds exactly when
//! `f(M) > g(M)` for every sufficiently large integer `M`, which is decided
//! by the leading coefficients of the canonical form.  The field contains
//! every probability value the hyperfinite spinner models produce — constants
//! such as `1/2`, infinitesimals such as `1/(2*N)`, and their combinations —
//! and admits an exact standard-part operator.

use crate::lc::LcNumber;
use crate::parse::{Cursor, ParseError};
use crate::poly::{parse_poly, Polynomial};
use crate::scalar::{Int, Rat, Scalar};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum HyperError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is infinite")]
    Infinite,
}

/// Size class of a rational function of `N` under eventual dominance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Magnitude {
    Zero,
    /// Nonzero but eventually smaller than every positive constant.
    Infinitesimal,
    /// Eventually between two positive constants in absolute value.
    Appreciable,
    /// Eventually larger than every constant in absolute value.
    Infinite,
}

/// Quotient of two polynomials in `N`, kept in canonical form: the fraction
/// is reduced and the denominator is monic.  Value equality is therefore
/// structural equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFun<T> {
    num: Polynomial<T>,
    den: Polynomial<T>,
}

impl<T: Scalar> RatFun<T> {
    pub fn new(num: Polynomial<T>, den: Polynomial<T>) -> Result<Self, HyperError> {
        if den.is_zero() {
            return Err(HyperError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Polynomial<T>, den: Polynomial<T>) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFun { num: Polynomial::zero(), den: Polynomial::constant(T::one()) };
        }
        let g = Polynomial::gcd(&num, &den);
        let (num, _) = num.div_rem(&g).expect("gcd nonzero");
        let (den, _) = den.div_rem(&g).expect("gcd nonzero");
        let lead = den.leading().expect("nonzero").clone();
        let inv = T::one() / lead;
        RatFun { num: num.scaled(&inv), den: den.scaled(&inv) }
    }

    pub fn zero() -> Self {
        RatFun { num: Polynomial::zero(), den: Polynomial::constant(T::one()) }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        RatFun { num: Polynomial::constant(c), den: Polynomial::constant(T::one()) }
    }

    /// The element `N` itself.
    pub fn variable() -> Self {
        RatFun { num: Polynomial::variable(), den: Polynomial::constant(T::one()) }
    }

    pub fn from_poly(p: Polynomial<T>) -> Self {
        RatFun { num: p, den: Polynomial::constant(T::one()) }
    }

    pub fn num(&self) -> &Polynomial<T> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Result<Self, HyperError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, HyperError> {
        if rhs.is_zero() {
            return Err(HyperError::DivisionByZero);
        }
        Ok(Self::canonical(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// Sign of the eventual values: -1, 0 or +1.  The denominator is monic,
    /// so this is the sign of the leading numerator coefficient.
    pub fn sign(&self) -> i8 {
        match self.num.leading() {
            None => 0,
            Some(c) if c.is_positive() => 1,
            Some(_) => -1,
        }
    }

    /// Order by eventual dominance: the sign of `self - other` for all
    /// sufficiently large `N`.
    pub fn cmp_eventual(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            0 => Ordering::Equal,
            s if s > 0 => Ordering::Greater,
            _ => Ordering::Less,
        }
    }

    /// Classifies by the degree gap between numerator and denominator.
    pub fn classify(&self) -> Magnitude {
        let Some(dn) = self.num.degree() else { return Magnitude::Zero };
        let dd = self.den.degree().expect("nonzero denominator");
        match dn.cmp(&dd) {
            Ordering::Less => Magnitude::Infinitesimal,
            Ordering::Equal => Magnitude::Appreciable,
            Ordering::Greater => Magnitude::Infinite,
        }
    }

    /// The unique scalar infinitely close to the value: the ratio of leading
    /// coefficients when degrees match, zero when the value is infinitesimal.
    pub fn standard_part(&self) -> Result<T, HyperError> {
        match self.classify() {
            Magnitude::Infinite => Err(HyperError::Infinite),
            Magnitude::Zero | Magnitude::Infinitesimal => Ok(T::zero()),
            Magnitude::Appreciable => {
                let n = self.num.leading().expect("appreciable").clone();
                let d = self.den.leading().expect("nonzero").clone();
                Ok(n / d)
            }
        }
    }

    /// Exact evaluation at a finite grid size; `None` at a denominator root.
    pub fn eval(&self, x: &T) -> Option<T> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    /// A bound past which every exact evaluation has the sign of [`Self::sign`].
    pub fn sign_stability_bound(&self) -> T {
        let nb = self.num.sign_stability_bound().unwrap_or_else(T::one);
        let db = self.den.sign_stability_bound().expect("nonzero denominator");
        if nb > db {
            nb
        } else {
            db
        }
    }

    /// Laurent expansion under the substitution `N = 1/d`, exact for every
    /// exponent up to and including `order`.
    ///
    /// Writing the value as `d^lambda * p(d)/q(d)` with `p(0), q(0) != 0`,
    /// the series of `p/q` is computed by leading-term division and shifted
    /// by `lambda = deg(den) - deg(num)`.
    pub fn expand_in_d(&self, order: &Rat) -> LcNumber<T> {
        if self.is_zero() {
            return LcNumber::zero(order.clone());
        }
        let dp = self.num.degree().expect("nonzero") as i64;
        let dq = self.den.degree().expect("nonzero") as i64;
        let lambda = dq - dp;
        let steps = (order - Rat::from_integer(Int::from(lambda))).floor().to_integer();
        let Ok(steps) = i64::try_from(&steps) else {
            return LcNumber::zero(order.clone());
        };
        if steps < 0 {
            return LcNumber::zero(order.clone());
        }
        let p = self.num.reversed();
        let q = self.den.reversed();
        let q0 = q.coeff(0);
        let mut series: Vec<T> = Vec::with_capacity(steps as usize + 1);
        for k in 0..=steps as usize {
            let mut acc = p.coeff(k);
            for (j, s) in series.iter().enumerate() {
                acc = acc - s.clone() * q.coeff(k - j);
            }
            series.push(acc / q0.clone());
        }
        let terms = series
            .into_iter()
            .enumerate()
            .map(|(k, c)| (Rat::from_integer(Int::from(lambda + k as i64)), c));
        LcNumber::from_exact_terms(terms, order.clone())
    }
}

impl<T: Scalar> Add for &RatFun<T> {
    type Output = RatFun<T>;
    fn add(self, rhs: &RatFun<T>) -> RatFun<T> {
        RatFun::canonical(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<T: Scalar> Sub for &RatFun<T> {
    type Output = RatFun<T>;
    fn sub(self, rhs: &RatFun<T>) -> RatFun<T> {
        RatFun::canonical(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<T: Scalar> Mul for &RatFun<T> {
    type Output = RatFun<T>;
    fn mul(self, rhs: &RatFun<T>) -> RatFun<T> {
        RatFun::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<T: Scalar> Neg for &RatFun<T> {
    type Output = RatFun<T>;
    fn neg(self) -> RatFun<T> {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl<T: Scalar> PartialOrd for RatFun<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_eventual(other))
    }
}

/// Scales the reduced fraction so both polynomials have integer coefficients
/// with no common integer factor and the denominator leads positive.  This is
/// the display form; the internal canonical form keeps the denominator monic.
fn integer_scaled(num: &Polynomial<Rat>, den: &Polynomial<Rat>) -> (Polynomial<Rat>, Polynomial<Rat>) {
    let mut mult = Int::one();
    for c in num.coeffs().iter().chain(den.coeffs()) {
        mult = mult.lcm(c.denom());
    }
    let mult = Rat::from_integer(mult);
    let num = num.scaled(&mult);
    let den = den.scaled(&mult);
    let mut content = Int::zero();
    for c in num.coeffs().iter().chain(den.coeffs()) {
        content = content.gcd(c.numer());
    }
    if content.is_zero() {
        content = Int::one();
    }
    if den.leading().map_or(false, |c| c.is_negative()) {
        content = -content;
    }
    let shrink = Rat::from_integer(content).recip();
    (num.scaled(&shrink), den.scaled(&shrink))
}

/// A side of the rendered quotient needs no parentheses when it is a single
/// term without `*`: an integer, `N`, `-N`, or a bare power of `N`.
fn side_needs_parens(p: &Polynomial<Rat>) -> bool {
    let nonzero = p.coeffs().iter().filter(|c| !c.is_zero()).count();
    if nonzero > 1 {
        return true;
    }
    match p.degree() {
        None | Some(0) => false,
        Some(_) => !p.leading().expect("nonzero").abs().is_one(),
    }
}

impl fmt::Display for RatFun<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = integer_scaled(&self.num, &self.den);
        if den.degree() == Some(0) && den.leading().map_or(false, |c| c.is_one()) {
            return write!(f, "{num}");
        }
        for (side, p) in [(0, &num), (1, &den)] {
            if side == 1 {
                write!(f, "/")?;
            }
            if side_needs_parens(p) {
                write!(f, "({p})")?;
            } else {
                write!(f, "{p}")?;
            }
        }
        Ok(())
    }
}

/// Parses `part ['/' part]` where `part := '(' poly ')' | poly`.
pub fn parse_hyper(src: &str) -> Result<RatFun<Rat>, ParseError> {
    let mut cur = Cursor::new(src);
    let value = parse_hyper_at(&mut cur)?;
    cur.expect_end()?;
    Ok(value)
}

pub(crate) fn parse_hyper_at(cur: &mut Cursor) -> Result<RatFun<Rat>, ParseError> {
    let num = parse_part(cur)?;
    cur.skip_ws();
    if !cur.eat('/') {
        return Ok(RatFun::from_poly(num));
    }
    let pos = cur.pos();
    let den = parse_part(cur)?;
    RatFun::new(num, den).map_err(|_| ParseError { pos, msg: "zero denominator".into() })
}

fn parse_part(cur: &mut Cursor) -> Result<Polynomial<Rat>, ParseError> {
    if cur.eat('(') {
        let p = parse_poly(cur)?;
        cur.expect(')')?;
        return Ok(p);
    }
    parse_poly(cur)
}

impl FromStr for RatFun<Rat> {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_hyper(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use crate::HyperRat;

    fn h(src: &str) -> HyperRat {
        src.parse().unwrap()
    }

    #[test]
    fn like_terms_add() {
        assert_eq!(&h("1/(2*N)") + &h("1/(2*N)"), h("1/N"));
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        assert_eq!(&h("N") * &h("1/N"), HyperRat::one());
    }

    #[test]
    fn difference_leaves_infinitesimal() {
        // ((N+1)/N) - 1 = 1/N; cross-checked by exact evaluation.
        let lhs = &h("(N+1)/N") - &HyperRat::one();
        assert_eq!(lhs, h("1/N"));
        for m in [5i64, 7, 11] {
            let m = rat_int(m);
            let direct = h("(N+1)/N").eval(&m).unwrap() - rat_int(1);
            assert_eq!(lhs.eval(&m).unwrap(), direct);
        }
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(h("1").checked_div(&HyperRat::zero()), Err(HyperError::DivisionByZero));
    }

    #[test]
    fn eventual_dominance_order() {
        assert_eq!(h("1/N").cmp_eventual(&h("1/N^2")), Ordering::Greater);
        assert_eq!(h("1/(2*N)").cmp_eventual(&HyperRat::zero()), Ordering::Greater);
    }

    #[test]
    fn dominance_ignores_large_constants() {
        // (N - 10^6)/N > 1/2 eventually; confirmed at N = 10^7 exactly.
        let x = h("(N-1000000)/N");
        let half = HyperRat::constant(rat(1, 2));
        assert_eq!(x.cmp_eventual(&half), Ordering::Greater);
        let at = x.eval(&rat_int(10_000_000)).unwrap();
        assert!(at > rat(1, 2));
    }

    #[test]
    fn classification_by_degree_gap() {
        assert_eq!(h("N").classify(), Magnitude::Infinite);
        assert_eq!(h("1/(2*N)").classify(), Magnitude::Infinitesimal);
        assert_eq!(h("(N+3)/(2*N)").classify(), Magnitude::Appreciable);
        assert_eq!(HyperRat::zero().classify(), Magnitude::Zero);
    }

    #[test]
    fn standard_part_is_the_limit() {
        let x = h("(N+3)/(2*N)");
        assert_eq!(x.standard_part(), Ok(rat(1, 2)));
        // Exact evaluations approach the standard part monotonically here.
        let mut last_gap: Option<Rat> = None;
        for m in [10i64, 100, 1000] {
            let gap = (x.eval(&rat_int(m)).unwrap() - rat(1, 2)).abs();
            if let Some(prev) = last_gap {
                assert!(gap < prev);
            }
            last_gap = Some(gap);
        }
        assert_eq!(h("1/(2*N)").standard_part(), Ok(rat_int(0)));
        assert_eq!(h("N").standard_part(), Err(HyperError::Infinite));
    }

    #[test]
    fn renders_like_the_grammar() {
        assert_eq!(h("(N-1)/(2*N)").to_string(), "(N-1)/(2*N)");
        assert_eq!(h("2/(2*N)").to_string(), "1/N");
        assert_eq!(h("1/2").to_string(), "1/2");
        assert_eq!(h("(2*N+2)/(4*N)").to_string(), "(N+1)/(2*N)");
        assert_eq!(h("-1/2*N").to_string(), "-N/2");
        assert_eq!(HyperRat::zero().to_string(), "0");
    }

    #[test]
    fn parse_render_round_trip_is_structural() {
        for src in ["(N-1)/(2*N)", "1/N", "-1/2", "(N^2+3)/(3*N^2+N)", "N+1"] {
            let x = h(src);
            assert_eq!(h(&x.to_string()), x);
        }
    }

    #[test]
    fn expansion_examples() {
        let three = rat_int(3);
        let e = h("N/(N+1)").expand_in_d(&three);
        assert_eq!(e.to_string(), "1 - d + d^2 - d^3 + O(d>3)");
        // Multiplying back by the expansion of the reciprocal gives 1.
        let back = &e * &h("(N+1)/N").expand_in_d(&three);
        assert_eq!(back.to_string(), "1 + O(d>3)");
        assert_eq!(h("1/(2*N)").expand_in_d(&three).to_string(), "1/2*d + O(d>3)");
        assert_eq!(h("N").expand_in_d(&three).to_string(), "d^-1 + O(d>3)");
    }
}
