//! Dense univariate polynomials in the grid parameter `N` over a generic
//! scalar.  Carrier for the rational-function field in [`crate::hyper`].

use crate::parse::{Cursor, ParseError};
use crate::scalar::{Rat, Scalar};
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `coeffs[k]` is the coefficient of `N^k`; trailing zeros are stripped, so
/// the leading coefficient is nonzero unless the polynomial is zero (empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Polynomial::from_coeffs(vec![c])
    }

    /// The polynomial `N`.
    pub fn variable() -> Self {
        Polynomial::from_coeffs(vec![T::zero(), T::one()])
    }

    /// `c * N^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Polynomial::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<T>) -> Self {
        while matches!(coeffs.last(), Some(c) if c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scaled(&self, c: &T) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Scales so the leading coefficient is one.  Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Polynomial::zero(),
            Some(lead) => self.scaled(&(T::one() / lead.clone())),
        }
    }

    /// Coefficients reversed: `N^d * self(1/N)` for `d = deg(self)`.
    pub fn reversed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Polynomial::from_coeffs(coeffs)
    }

    /// Euclidean division; `None` when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dlead = divisor.leading()?;
        let ddeg = divisor.degree().expect("nonzero");
        let mut rem = self.coeffs.clone();
        let sdeg = match self.degree() {
            None => return Some((Polynomial::zero(), Polynomial::zero())),
            Some(d) if d < ddeg => return Some((Polynomial::zero(), self.clone())),
            Some(d) => d,
        };
        let mut quo = vec![T::zero(); sdeg - ddeg + 1];
        for k in (ddeg..=sdeg).rev() {
            let c = rem[k].clone() / dlead.clone();
            if c.is_zero() {
                continue;
            }
            quo[k - ddeg] = c.clone();
            for (j, dj) in divisor.coeffs.iter().enumerate() {
                let idx = k - ddeg + j;
                rem[idx] = rem[idx].clone() - c.clone() * dj.clone();
            }
        }
        Some((Polynomial::from_coeffs(quo), Polynomial::from_coeffs(rem)))
    }

    /// Monic greatest common divisor by the Euclidean algorithm; zero when
    /// both inputs are zero.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// A bound `B` (Cauchy-style) such that for every evaluation point
    /// `M > B` the sign of `self(M)` equals the sign of the leading
    /// coefficient.  `None` for the zero polynomial.
    pub fn sign_stability_bound(&self) -> Option<T> {
        let lead = self.leading()?;
        let mut bound = T::one();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let ratio = T::one() + c.abs() / lead.abs();
            if ratio > bound {
                bound = ratio;
            }
        }
        Some(bound)
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Polynomial::from_coeffs(coeffs)
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Polynomial::from_coeffs(coeffs)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::from_coeffs(coeffs)
    }
}

/// Renders in the text grammar: terms in descending degree, `c*N^k` with the
/// unit coefficient and the exponents 0 and 1 elided, no spaces.
impl fmt::Display for Polynomial<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let a = c.abs();
            if k == 0 {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                if k == 1 {
                    write!(f, "N")?;
                } else {
                    write!(f, "N^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// Parses `['-'] term (('+'|'-') term)*` where
/// `term := rat ['*' N-power] | N-power` and `N-power := 'N' ['^' uint]`.
pub(crate) fn parse_poly(cur: &mut Cursor) -> Result<Polynomial<Rat>, ParseError> {
    let mut acc = Polynomial::zero();
    let mut negate = cur.eat('-');
    loop {
        let term = parse_term(cur)?;
        acc = if negate { &acc - &term } else { &acc + &term };
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
            _ => return Ok(acc),
        }
    }
}

fn parse_term(cur: &mut Cursor) -> Result<Polynomial<Rat>, ParseError> {
    cur.skip_ws();
    if cur.eat('N') {
        return Ok(Polynomial::monomial(Rat::one(), parse_power(cur)?));
    }
    let c = cur.parse_rat()?;
    let save = cur.pos();
    if cur.eat('*') {
        if cur.eat('N') {
            return Ok(Polynomial::monomial(c, parse_power(cur)?));
        }
        return Err(ParseError { pos: save, msg: "expected 'N' after '*'".into() });
    }
    Ok(Polynomial::constant(c))
}

fn parse_power(cur: &mut Cursor) -> Result<usize, ParseError> {
    if !cur.eat('^') {
        return Ok(1);
    }
    let n = cur.parse_uint()?;
    u32::try_from(&n)
        .map(|k| k as usize)
        .map_err(|_| cur.error("exponent too large"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn p(coeffs: &[(i64, i64)]) -> Polynomial<Rat> {
        Polynomial::from_coeffs(coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn trailing_zeros_stripped() {
        let q = Polynomial::from_coeffs(vec![rat_int(1), rat_int(0), rat_int(0)]);
        assert_eq!(q.degree(), Some(0));
        assert!(Polynomial::<Rat>::from_coeffs(vec![rat_int(0)]).is_zero());
    }

    #[test]
    fn division_recombines() {
        let a = p(&[(3, 1), (0, 1), (1, 2), (2, 1)]);
        let b = p(&[(-1, 1), (1, 1)]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_common_factor() {
        // (N+1)(N-1) and (N+1)(N+2) share the monic factor N+1.
        let f = &p(&[(1, 1), (1, 1)]) * &p(&[(-1, 1), (1, 1)]);
        let g = &p(&[(1, 1), (1, 1)]) * &p(&[(2, 1), (1, 1)]);
        assert_eq!(Polynomial::gcd(&f, &g), p(&[(1, 1), (1, 1)]));
    }

    #[test]
    fn sign_stabilizes_past_bound() {
        let q = p(&[(100, 1), (-7, 1), (1, 2)]); // N^2/2 - 7N + 100
        let bound = q.sign_stability_bound().unwrap();
        let m = bound.floor().to_integer() + 1;
        assert!(q.eval(&Rat::from_integer(m)).is_positive());
    }

    #[test]
    fn renders_compactly() {
        let q = p(&[(-1, 2), (0, 1), (1, 1), (3, 1)]);
        assert_eq!(q.to_string(), "3*N^3+N^2-1/2");
        assert_eq!(Polynomial::<Rat>::zero().to_string(), "0");
    }

    #[test]
    fn parses_what_it_renders() {
        for src in ["3*N^3+N^2-1/2", "-N+4", "7", "-2/3", "N"] {
            let mut cur = Cursor::new(src);
            let q = parse_poly(&mut cur).unwrap();
            cur.expect_end().unwrap();
            assert_eq!(q.to_string(), src);
        }
    }
}
