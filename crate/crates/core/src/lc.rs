//! Truncated Levi-Civita numbers: formal series `sum a_q * d^q` over rational
//! exponents `q` in which `d` is a positive infinitesimal.
//!
//! The full field consists of series with left-finite support and cannot be
//! held in finite memory, so every value here carries a *knowledge order*: a
//! rational cutoff up to which (inclusively) its terms are exact.  Every
//! operation states the knowledge order of its result, chosen conservatively
//! so that all retained coefficients are provably correct; equality can
//! therefore only ever be certified up to the common knowledge window, and
//! the comparison result names that explicitly.

use crate::parse::{Cursor, ParseError};
use crate::report::{CheckRecord, Report};
use crate::scalar::{Rat, Scalar};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

/// Knowledge order used by constructors and the CLI when none is given.
pub fn default_order() -> Rat {
    Rat::from_integer(10.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LcError {
    #[error("duplicate exponent {0}")]
    DuplicateExponent(Rat),
    #[error("the zero element has no inverse")]
    ZeroInverse,
    #[error("negative exponent present: the value is infinite")]
    InfinitePart,
    #[error("not a nonzero infinitesimal")]
    NotInfinitesimal,
}

/// Comparison outcome.  Two values whose difference has an empty term map are
/// indistinguishable within the common knowledge window, which is all the
/// truncated representation can certify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcOrdering {
    Less,
    EqualUpToOrder,
    Greater,
}

/// A truncated Levi-Civita number: finitely many exact terms, all with
/// exponent at most `order`, none with a zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcNumber<T> {
    terms: BTreeMap<Rat, T>,
    order: Rat,
}

impl<T: Scalar> LcNumber<T> {
    pub fn zero(order: Rat) -> Self {
        LcNumber { terms: BTreeMap::new(), order }
    }

    pub fn one(order: Rat) -> Self {
        Self::constant(T::one(), order)
    }

    pub fn constant(c: T, order: Rat) -> Self {
        Self::from_exact_terms([(Rat::zero(), c)], order)
    }

    /// The infinitesimal `d` itself.
    pub fn d(order: Rat) -> Self {
        Self::from_exact_terms([(Rat::one(), T::one())], order)
    }

    /// `c * d^q`.
    pub fn monomial(c: T, q: Rat, order: Rat) -> Self {
        Self::from_exact_terms([(q, c)], order)
    }

    /// Builds from exponent/coefficient pairs; duplicate exponents are an
    /// error, zero coefficients and terms beyond `order` are dropped.
    pub fn from_terms(
        pairs: impl IntoIterator<Item = (Rat, T)>,
        order: Rat,
    ) -> Result<Self, LcError> {
        let mut terms = BTreeMap::new();
        for (q, c) in pairs {
            if terms.insert(q.clone(), c).is_some() {
                return Err(LcError::DuplicateExponent(q));
            }
        }
        Ok(Self::from_exact_terms(terms, order))
    }

    /// Internal constructor: pairs with distinct exponents.
    pub(crate) fn from_exact_terms(
        pairs: impl IntoIterator<Item = (Rat, T)>,
        order: Rat,
    ) -> Self {
        let terms = pairs
            .into_iter()
            .filter(|(q, c)| !c.is_zero() && *q <= order)
            .collect();
        LcNumber { terms, order }
    }

    pub fn knowledge_order(&self) -> &Rat {
        &self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, q: &Rat) -> T {
        self.terms.get(q).cloned().unwrap_or_else(T::zero)
    }

    /// No known terms; within the knowledge window the value is zero.
    pub fn is_zero_up_to_order(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least exponent with a nonzero coefficient.
    pub fn min_exponent(&self) -> Option<&Rat> {
        self.terms.keys().next()
    }

    fn min_exponent_or_zero(&self) -> Rat {
        self.min_exponent().cloned().unwrap_or_else(Rat::zero)
    }

    /// Keeps only exponents up to `order`; the result's knowledge order is
    /// the smaller of the two (knowledge never grows by truncation).
    pub fn truncated(&self, order: &Rat) -> Self {
        let order = if *order < self.order { order.clone() } else { self.order.clone() };
        Self::from_exact_terms(
            self.terms.iter().map(|(q, c)| (q.clone(), c.clone())),
            order,
        )
    }

    pub fn scaled(&self, c: &T) -> Self {
        Self::from_exact_terms(
            self.terms.iter().map(|(q, a)| (q.clone(), a.clone() * c.clone())),
            self.order.clone(),
        )
    }

    /// Multiplicative inverse via leading-term factorization: writing
    /// `a = c*d^m*(1 + e)` with `e` infinitesimal relative to the leading
    /// term, the inverse is `c^-1 * d^-m * sum (-e)^k`.  The result is exact
    /// up to `order - 2m`, which is all the truncated input determines.
    pub fn inv(&self) -> Result<Self, LcError> {
        let (m, lead) = match self.terms.iter().next() {
            None => return Err(LcError::ZeroInverse),
            Some((q, c)) => (q.clone(), c.clone()),
        };
        let rel_order = &self.order - &m;
        let lead_inv = T::one() / lead;
        // -e, as a series known up to rel_order with all exponents > 0.
        let neg_eps = Self::from_exact_terms(
            self.terms
                .iter()
                .skip(1)
                .map(|(q, c)| (q - &m, -(c.clone() * lead_inv.clone()))),
            rel_order.clone(),
        );
        let mut sum = Self::one(rel_order.clone());
        let mut power = sum.clone();
        while !neg_eps.is_zero_up_to_order() {
            power = &power * &neg_eps;
            if power.is_zero_up_to_order() {
                break;
            }
            sum = &sum + &power;
        }
        let out_order = &self.order - &(&m + &m);
        Ok(Self::from_exact_terms(
            sum.terms
                .into_iter()
                .map(|(q, c)| (&q - &m, c * lead_inv.clone())),
            out_order,
        ))
    }

    /// Sign of the difference within the common knowledge window, decided by
    /// the lowest-exponent coefficient.
    pub fn compare(&self, other: &Self) -> LcOrdering {
        let diff = self - other;
        match diff.terms.values().next() {
            None => LcOrdering::EqualUpToOrder,
            Some(c) if c.is_positive() => LcOrdering::Greater,
            Some(_) => LcOrdering::Less,
        }
    }

    /// The real part: the coefficient at exponent zero.  Errors when a
    /// negative exponent makes the value infinite.
    pub fn standard_part(&self) -> Result<T, LcError> {
        if matches!(self.min_exponent(), Some(q) if q.is_negative()) {
            return Err(LcError::InfinitePart);
        }
        Ok(self.coeff(&Rat::zero()))
    }
}

impl<T: Scalar> Add for &LcNumber<T> {
    type Output = LcNumber<T>;
    fn add(self, rhs: &LcNumber<T>) -> LcNumber<T> {
        let order = self.order.clone().min(rhs.order.clone());
        let mut terms = BTreeMap::new();
        for (q, c) in self.terms.iter().chain(rhs.terms.iter()) {
            let entry = terms.entry(q.clone()).or_insert_with(T::zero);
            *entry = entry.clone() + c.clone();
        }
        LcNumber::from_exact_terms(terms, order)
    }
}

impl<T: Scalar> Neg for &LcNumber<T> {
    type Output = LcNumber<T>;
    fn neg(self) -> LcNumber<T> {
        LcNumber::from_exact_terms(
            self.terms.iter().map(|(q, c)| (q.clone(), -c.clone())),
            self.order.clone(),
        )
    }
}

impl<T: Scalar> Sub for &LcNumber<T> {
    type Output = LcNumber<T>;
    fn sub(self, rhs: &LcNumber<T>) -> LcNumber<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Mul for &LcNumber<T> {
    type Output = LcNumber<T>;
    fn mul(self, rhs: &LcNumber<T>) -> LcNumber<T> {
        // Guaranteed window: a term of the unknown tail of one factor meets
        // at best the least exponent of the other.
        let order = (&self.order + &rhs.min_exponent_or_zero())
            .min(&rhs.order + &self.min_exponent_or_zero());
        let mut terms: BTreeMap<Rat, T> = BTreeMap::new();
        for (qa, ca) in &self.terms {
            for (qb, cb) in &rhs.terms {
                let q = qa + qb;
                if q > order {
                    continue;
                }
                let entry = terms.entry(q).or_insert_with(T::zero);
                *entry = entry.clone() + ca.clone() * cb.clone();
            }
        }
        LcNumber::from_exact_terms(terms, order)
    }
}

/// Witnesses that the sequence `h, 2h, 3h, ...` never settles: consecutive
/// gaps all equal `h`, a fixed positive value, so no tail of the sequence
/// stays within any window narrower than `h`.  Requires `h` to be a nonzero
/// infinitesimal.
pub fn divergence_witness<T: Scalar + fmt::Display>(
    h: &LcNumber<T>,
    n_max: u32,
) -> Result<Report, LcError>
where
    LcNumber<T>: fmt::Display,
{
    match h.min_exponent() {
        Some(q) if q.is_positive() => {}
        _ => return Err(LcError::NotInfinitesimal),
    }
    let mut report = Report::new("divergence-witness");
    report.note(format!(
        "sequence n*h for h = {h}: gaps stay exactly h, so no convergence"
    ));
    let zero = LcNumber::zero(h.knowledge_order().clone());
    report.push(CheckRecord::new(
        "threshold-positive",
        format!("h = {h}"),
        format!("{:?}", h.compare(&zero)),
        format!("{:?}", LcOrdering::Greater),
        h.compare(&zero) == LcOrdering::Greater,
    ));
    let mut current = h.clone();
    for n in 2..=n_max {
        let next = &current + h;
        let gap = &next - &current;
        report.push(CheckRecord::new(
            "constant-gap",
            format!("n = {n}"),
            gap.to_string(),
            h.to_string(),
            gap == *h && gap.compare(&zero) == LcOrdering::Greater,
        ));
        current = next;
    }
    Ok(report)
}

impl fmt::Display for LcNumber<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (q, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if q.is_zero() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                if q.is_one() {
                    write!(f, "d")?;
                } else {
                    write!(f, "d^{q}")?;
                }
            }
        }
        write!(f, " + O(d>{})", self.order)
    }
}

/// Parses the rendered grammar: `term (('+'|'-') term)* ['+' 'O(d>' rat ')']`
/// with `term := rat ['*' d-power] | d-power` and `d-power := 'd' ['^' rat]`.
/// Repeated exponents accumulate; a missing `O(...)` means order 10.
pub fn parse_lc(src: &str) -> Result<LcNumber<Rat>, ParseError> {
    let mut cur = Cursor::new(src);
    let mut terms: BTreeMap<Rat, Rat> = BTreeMap::new();
    let mut order = None;
    let mut negate = cur.eat('-');
    loop {
        cur.skip_ws();
        if cur.eat_word("O(") {
            cur.skip_ws();
            if !(cur.eat('d') && cur.eat('>')) {
                return Err(cur.error("expected 'd>' in the order marker"));
            }
            let k = cur.parse_rat()?;
            cur.expect(')')?;
            if negate {
                return Err(cur.error("the order marker cannot be subtracted"));
            }
            order = Some(k);
            cur.skip_ws();
            break;
        }
        let (q, c) = parse_lc_term(&mut cur)?;
        let c = if negate { -c } else { c };
        let entry = terms.entry(q).or_insert_with(Rat::zero);
        *entry = entry.clone() + c;
        cur.skip_ws();
        match cur.peek() {
            Some('+') => {
                cur.bump();
                negate = false;
            }
            Some('-') => {
                cur.bump();
                negate = true;
            }
            _ => break,
        }
    }
    cur.expect_end()?;
    Ok(LcNumber::from_exact_terms(
        terms,
        order.unwrap_or_else(default_order),
    ))
}

fn parse_lc_term(cur: &mut Cursor) -> Result<(Rat, Rat), ParseError> {
    cur.skip_ws();
    if cur.eat('d') {
        return Ok((parse_d_power(cur)?, Rat::one()));
    }
    let c = cur.parse_rat()?;
    let save = cur.pos();
    if cur.eat('*') {
        if cur.eat('d') {
            return Ok((parse_d_power(cur)?, c));
        }
        return Err(ParseError { pos: save, msg: "expected 'd' after '*'".into() });
    }
    Ok((Rat::zero(), c))
}

fn parse_d_power(cur: &mut Cursor) -> Result<Rat, ParseError> {
    if cur.eat('^') {
        cur.parse_rat()
    } else {
        Ok(Rat::one())
    }
}

impl FromStr for LcNumber<Rat> {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_lc(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use crate::Lc;

    fn lc(src: &str) -> Lc {
        src.parse().unwrap()
    }

    #[test]
    fn construction_drops_zero_and_out_of_window_terms() {
        let five = rat_int(5);
        let x = Lc::from_terms([(rat_int(0), rat_int(1)), (rat_int(1), rat_int(-1))], five.clone())
            .unwrap();
        assert_eq!(x.to_string(), "1 - d + O(d>5)");
        let z = Lc::from_terms([(rat_int(1), rat_int(0))], five).unwrap();
        assert!(z.is_zero_up_to_order());
        // Exponent 1/2 exceeds order 0; the d^-1 term stays.
        let y = Lc::from_terms(
            [(rat_int(-1), rat_int(2)), (rat(1, 2), rat_int(3))],
            Rat::zero(),
        )
        .unwrap();
        assert_eq!(y.to_string(), "2*d^-1 + O(d>0)");
    }

    #[test]
    fn duplicate_exponents_rejected() {
        let e = Lc::from_terms(
            [(rat_int(1), rat_int(1)), (rat_int(1), rat_int(2))],
            default_order(),
        );
        assert_eq!(e, Err(LcError::DuplicateExponent(rat_int(1))));
    }

    #[test]
    fn addition_cancels_and_tracks_order() {
        assert_eq!((&lc("1 + d") + &lc("1 - d")).to_string(), "2 + O(d>10)");
        assert_eq!((&lc("d") + &lc("d^2")).to_string(), "d + d^2 + O(d>10)");
        let truncated = &lc("1 + O(d>2)") + &lc("d^3");
        assert_eq!(truncated.to_string(), "1 + O(d>2)");
    }

    #[test]
    fn products_convolve_exponents() {
        assert_eq!((&lc("1 + d") * &lc("1 - d")).to_string(), "1 - d^2 + O(d>10)");
        assert_eq!((&lc("d^1/2") * &lc("d^1/2")).to_string(), "d + O(d>21/2)");
        let x = &lc("1 - d + O(d>3)") * &lc("1 + d + d^2 + d^3 + O(d>3)");
        assert_eq!(x.to_string(), "1 + O(d>3)");
    }

    #[test]
    fn inverse_multiplies_back_to_one() {
        let inv = lc("1 - d + O(d>3)").inv().unwrap();
        assert_eq!(inv.to_string(), "1 + d + d^2 + d^3 + O(d>3)");
        assert_eq!((&inv * &lc("1 - d + O(d>3)")).to_string(), "1 + O(d>3)");
        let dinv = lc("d").inv().unwrap();
        assert_eq!(dinv.to_string(), "d^-1 + O(d>8)");
        assert_eq!(Lc::zero(default_order()).inv(), Err(LcError::ZeroInverse));
    }

    #[test]
    fn d_is_a_positive_infinitesimal() {
        let zero = Lc::zero(default_order());
        assert_eq!(lc("d").compare(&zero), LcOrdering::Greater);
        assert_eq!(lc("d").compare(&lc("1/1000")), LcOrdering::Less);
        assert_eq!(lc("1 + d").compare(&lc("1")), LcOrdering::Greater);
        assert_eq!(lc("1").compare(&lc("1")), LcOrdering::EqualUpToOrder);
    }

    #[test]
    fn standard_part_reads_exponent_zero() {
        assert_eq!(lc("1/2 + 3*d").standard_part(), Ok(rat(1, 2)));
        assert_eq!(lc("d").standard_part(), Ok(rat_int(0)));
        assert_eq!(lc("d^-1").standard_part(), Err(LcError::InfinitePart));
    }

    #[test]
    fn divergence_gaps_stay_fixed() {
        let report = divergence_witness(&lc("d"), 4).unwrap();
        assert!(report.passed());
        assert_eq!(report.checks.len(), 4);
        let scaled = divergence_witness(&lc("d^2"), 3).unwrap();
        assert!(scaled.passed());
        assert_eq!(divergence_witness(&lc("1"), 3), Err(LcError::NotInfinitesimal));
        assert_eq!(
            divergence_witness(&Lc::zero(default_order()), 3),
            Err(LcError::NotInfinitesimal)
        );
    }

    #[test]
    fn parse_render_round_trip() {
        for src in [
            "1 - d + d^2 - d^3 + O(d>3)",
            "1/2*d + O(d>3)",
            "d^-1 + O(d>3)",
            "-2*d^-2 + 5/3 + d^1/2 + O(d>10)",
            "0 + O(d>7/2)",
        ] {
            assert_eq!(lc(src).to_string(), src);
        }
        // Repeated exponents accumulate; a missing order marker defaults to 10.
        assert_eq!(lc("d + d").to_string(), "2*d + O(d>10)");
    }
}
