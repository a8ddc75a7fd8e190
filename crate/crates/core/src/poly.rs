//! Sparse bivariate polynomials over the rationals.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`]; the map order is the
//! canonical printing order (ascending total degree, then descending power
//! of `x`). Zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// Exponent pair `x^x * y^y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn degree(self) -> u32 {
        self.x + self.y
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial::new(self.x + other.x, self.y + other.y)
    }

    pub fn divides(self, other: Monomial) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    fn quotient(self, divisor: Monomial) -> Monomial {
        Monomial::new(self.x - divisor.x, self.y - divisor.y)
    }
}

impl From<(u32, u32)> for Monomial {
    fn from((x, y): (u32, u32)) -> Self {
        Monomial::new(x, y)
    }
}

/// Graded order with ties broken by the power of `y`. This is a monomial
/// order, so the maximal term is a valid leading term for division.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.y.cmp(&other.y))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (var, e) in [("x", self.x), ("y", self.y)] {
            match e {
                0 => {}
                1 => parts.push(var.to_string()),
                _ => parts.push(format!("{var}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// The monomials of total degree `k` in canonical order: `x^k, x^(k-1)y, ..., y^k`.
pub fn monomial_basis(k: u32) -> Vec<Monomial> {
    (0..=k).map(|j| Monomial::new(k - j, j)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        BiPoly::term(c, 0, 0)
    }

    pub fn term(c: Rational, i: u32, j: u32) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(Monomial::new(i, j), c);
        p
    }

    pub fn x() -> Self {
        BiPoly::term(Rational::one(), 1, 0)
    }

    pub fn y() -> Self {
        BiPoly::term(Rational::one(), 0, 1)
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = BiPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Builds from `(coefficient as (num, den), i, j)` triples; convenient in tests.
    pub fn from_i64_terms(terms: &[(i64, i64, u32, u32)]) -> Self {
        BiPoly::from_terms(terms.iter().map(|&(n, d, i, j)| {
            (
                Monomial::new(i, j),
                Rational::new(BigInt::from(n), BigInt::from(d)),
            )
        }))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
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

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.coeff_of(Monomial::new(i, j))
    }

    pub fn coeff_of(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0, 0)
    }

    /// Highest total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Lowest total degree; `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn homogeneous_part(&self, d: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Lowest-degree homogeneous part (zero for the zero polynomial).
    pub fn lowest_part(&self) -> BiPoly {
        match self.min_degree() {
            Some(d) => self.homogeneous_part(d),
            None => BiPoly::zero(),
        }
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_degree)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: Monomial) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect(),
        }
    }

    /// Product with every term above `max_degree` discarded.
    pub fn mul_truncated(&self, other: &BiPoly, max_degree: u32) -> BiPoly {
        let mut out = BiPoly::zero();
        for (ma, ca) in &self.terms {
            if ma.degree() > max_degree {
                break;
            }
            for (mb, cb) in &other.terms {
                let m = ma.mul(*mb);
                if m.degree() > max_degree {
                    break;
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut out = BiPoly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn pow_truncated(&self, e: u32, max_degree: u32) -> BiPoly {
        let mut out = BiPoly::one().truncate(max_degree);
        for _ in 0..e {
            out = out.mul_truncated(self, max_degree);
        }
        out
    }

    pub fn dx(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.x > 0)
                .map(|(m, c)| (Monomial::new(m.x - 1, m.y), c * Rational::from_integer(m.x.into()))),
        )
    }

    pub fn dy(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.y > 0)
                .map(|(m, c)| (Monomial::new(m.x, m.y - 1), c * Rational::from_integer(m.y.into()))),
        )
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (m, c)| {
            acc + c * pow_rational(x, m.x) * pow_rational(y, m.y)
        })
    }

    /// Substitutes `x -> sx`, `y -> sy`, keeping only terms up to `max_degree`.
    /// Both substitutes must vanish at the origin for truncation to be sound.
    pub fn compose(&self, sx: &BiPoly, sy: &BiPoly, max_degree: u32) -> BiPoly {
        let max_x = self.terms.keys().map(|m| m.x).max().unwrap_or(0);
        let max_y = self.terms.keys().map(|m| m.y).max().unwrap_or(0);
        let powers = |base: &BiPoly, n: u32| {
            let mut v = vec![BiPoly::one()];
            for i in 0..n as usize {
                let next = v[i].mul_truncated(base, max_degree);
                v.push(next);
            }
            v
        };
        let px = powers(sx, max_x);
        let py = powers(sy, max_y);
        let mut out = BiPoly::zero();
        for (m, c) in &self.terms {
            let t = px[m.x as usize].mul_truncated(&py[m.y as usize], max_degree);
            out += &t.scale(c);
        }
        out
    }

    /// Leading term under the graded monomial order.
    pub fn leading(&self) -> Option<(Monomial, &Rational)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    /// Division by a single polynomial. A single generator is a Groebner basis
    /// of its principal ideal, so the remainder is zero iff `divisor` divides `self`.
    pub fn div_rem(&self, divisor: &BiPoly) -> Result<(BiPoly, BiPoly)> {
        let (lm, lc) = divisor
            .leading()
            .ok_or_else(|| Error::InvalidArgument("division by the zero polynomial".into()))?;
        let lc = lc.clone();
        let mut rem = self.clone();
        let mut quot = BiPoly::zero();
        let mut kept = BiPoly::zero();
        while let Some((m, c)) = rem.leading() {
            let c = c.clone();
            if lm.divides(m) {
                let tm = m.quotient(lm);
                let tc = &c / &lc;
                quot.add_term(tm, tc.clone());
                rem -= &divisor.mul_monomial(tm).scale(&tc);
            } else {
                rem.terms.remove(&m);
                kept.add_term(m, c);
            }
        }
        Ok((quot, kept))
    }

    /// `Some(quotient)` iff `divisor` divides `self` exactly.
    pub fn div_exact(&self, divisor: &BiPoly) -> Result<Option<BiPoly>> {
        let (q, r) = self.div_rem(divisor)?;
        Ok(if r.is_zero() { Some(q) } else { None })
    }

    pub fn parse(text: &str) -> Result<BiPoly> {
        Parser::new(text).parse()
    }
}

/// Text grammar helper: `divides(f, g)` returns the quotient when `f | g`.
pub fn divides(f: &BiPoly, g: &BiPoly) -> Result<Option<BiPoly>> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("divisor must be nonzero".into()));
    }
    g.div_exact(f)
}

fn pow_rational(base: &Rational, e: u32) -> Rational {
    num_traits::pow(base.clone(), e as usize)
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if *m == Monomial::ONE {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for BiPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BiPoly::parse(s)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: BiPoly) -> BiPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: &BiPoly) -> BiPoly {
                (&self).$method(rhs)
            }
        }
        impl $trait<BiPoly> for &BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: BiPoly) -> BiPoly {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(*mb), ca * cb);
            }
        }
        out
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl AddAssign<&BiPoly> for BiPoly {
    fn add_assign(&mut self, rhs: &BiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&BiPoly> for BiPoly {
    fn sub_assign(&mut self, rhs: &BiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

/// Homogeneous polynomial tagged with its degree. The zero polynomial is
/// allowed at any degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomoPoly {
    degree: u32,
    body: BiPoly,
}

impl HomoPoly {
    pub fn new(degree: u32, body: BiPoly) -> Result<Self> {
        if !body.is_homogeneous_of(degree) {
            return Err(Error::NotHomogeneous { degree });
        }
        Ok(HomoPoly { degree, body })
    }

    pub fn zero(degree: u32) -> Self {
        HomoPoly {
            degree,
            body: BiPoly::zero(),
        }
    }

    /// Homogeneous part of `p` at degree `d`.
    pub fn part_of(p: &BiPoly, d: u32) -> Self {
        HomoPoly {
            degree: d,
            body: p.homogeneous_part(d),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn body(&self) -> &BiPoly {
        &self.body
    }

    pub fn into_body(self) -> BiPoly {
        self.body
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn mul(&self, other: &HomoPoly) -> HomoPoly {
        HomoPoly {
            degree: self.degree + other.degree,
            body: &self.body * &other.body,
        }
    }

    pub fn scale(&self, c: &Rational) -> HomoPoly {
        HomoPoly {
            degree: self.degree,
            body: self.body.scale(c),
        }
    }

    /// Coefficients in [`monomial_basis`] order.
    pub fn coords(&self) -> Vec<Rational> {
        monomial_basis(self.degree)
            .into_iter()
            .map(|m| self.body.coeff_of(m))
            .collect()
    }

    pub fn from_coords(degree: u32, coords: &[Rational]) -> Self {
        let basis = monomial_basis(degree);
        assert_eq!(basis.len(), coords.len(), "coordinate vector length");
        HomoPoly {
            degree,
            body: BiPoly::from_terms(basis.into_iter().zip(coords.iter().cloned())),
        }
    }
}

impl fmt::Display for HomoPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.body.fmt(f)
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            chars: src.char_indices().collect(),
            pos: 0,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let offset = self
            .chars
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.src.len());
        let before = &self.src[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|(_, c)| c).collect();
        Ok(s.parse().expect("ascii digits"))
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.bump();
        let e = self.integer()?;
        let e: u32 = e.try_into().map_err(|_| self.error("exponent too large"))?;
        if e == 0 {
            return Err(self.error("exponent must be positive"));
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        let mut coef = Rational::one();
        let mut mono = Monomial::ONE;
        let mut any = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let n = self.integer()?;
            let d = if self.peek() == Some('/') {
                self.bump();
                let d = self.integer()?;
                if d.is_zero() {
                    return Err(self.error("zero denominator"));
                }
                d
            } else {
                BigInt::one()
            };
            coef = Rational::new(n, d);
            any = true;
            if self.peek() == Some('*') {
                self.bump();
                if !matches!(self.peek(), Some('x') | Some('y')) {
                    return Err(self.error("expected a variable after '*'"));
                }
            }
        }
        loop {
            match self.peek() {
                Some('x') => {
                    self.bump();
                    mono.x += self.exponent()?;
                }
                Some('y') => {
                    self.bump();
                    mono.y += self.exponent()?;
                }
                _ => break,
            }
            any = true;
            if self.peek() == Some('*') {
                self.bump();
                if !matches!(self.peek(), Some('x') | Some('y')) {
                    return Err(self.error("expected a variable after '*'"));
                }
            }
        }
        if !any {
            return Err(self.error("expected a term"));
        }
        Ok((mono, coef))
    }

    fn parse(mut self) -> Result<BiPoly> {
        let mut out = BiPoly::zero();
        let mut sign = Rational::one();
        match self.peek() {
            Some('-') => {
                sign = -sign;
                self.bump();
            }
            Some('+') => self.bump(),
            None => return Err(self.error("empty polynomial")),
            _ => {}
        }
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, c * &sign);
            match self.peek() {
                Some('+') => {
                    sign = Rational::one();
                    self.bump();
                }
                Some('-') => {
                    sign = -Rational::one();
                    self.bump();
                }
                None => break,
                Some(ch) => return Err(self.error(format!("unexpected character {ch:?}"))),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn p(s: &str) -> BiPoly {
        BiPoly::parse(s).unwrap()
    }

    #[test]
    fn parses_grammar_example() {
        let q = p("4/3*x*y^2 - x^3");
        assert_eq!(q.coeff(1, 2), rat(4, 3));
        assert_eq!(q.coeff(3, 0), int(-1));
        assert_eq!(q.len(), 2);
        assert_eq!(q.to_string(), "-x^3 + 4/3*x*y^2");
    }

    #[test]
    fn compact_monomials_and_constants() {
        assert_eq!(p("2xy^3 + 5"), p("5 + 2*x*y^3"));
        assert_eq!(p("0"), BiPoly::zero());
        assert_eq!(p("x - x"), BiPoly::zero());
        assert_eq!(BiPoly::zero().to_string(), "0");
        assert_eq!(p("-1/2").to_string(), "-1/2");
    }

    #[test]
    fn parse_errors_carry_position() {
        match BiPoly::parse("x + \n 3*z") {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(BiPoly::parse("").is_err());
        assert!(BiPoly::parse("x^0").is_err());
        assert!(BiPoly::parse("3/0*x").is_err());
        assert!(BiPoly::parse("x +").is_err());
    }

    #[test]
    fn canonical_order() {
        let q = p("y^3 + x + x^2*y + 1 + y");
        assert_eq!(q.to_string(), "1 + x + y + x^2*y + y^3");
    }

    #[test]
    fn degree_of_product() {
        let a = p("x - y + x^2");
        let b = p("3*x*y + y^4");
        assert_eq!((&a * &b).degree(), Some(6));
        assert_eq!((&a * &b).min_degree(), Some(3));
    }

    #[test]
    fn division_examples() {
        let f = p("x - y");
        let g = &p("x*y") * &f.pow(2);
        assert_eq!(divides(&f, &g).unwrap(), Some(&p("x*y") * &f));
        assert_eq!(divides(&p("x"), &p("y^3")).unwrap(), None);
        let sq = p("x - y").pow(2);
        let g = &p("3*x^2") * &p("y - x").pow(2);
        assert!(divides(&sq, &g).unwrap().is_some());
        assert!(divides(&BiPoly::zero(), &g).is_err());
    }

    #[test]
    fn composition_truncates() {
        // (x + y^2)^2 with y -> y, truncated at degree 3
        let q = p("x^2");
        let c = q.compose(&p("x + y^2"), &p("y"), 3);
        assert_eq!(c, p("x^2 + 2*x*y^2"));
    }

    #[test]
    fn derivatives() {
        let q = p("x^3*y + 2*y^2");
        assert_eq!(q.dx(), p("3*x^2*y"));
        assert_eq!(q.dy(), p("x^3 + 4*y"));
    }

    #[test]
    fn homopoly_guards_degree() {
        assert!(HomoPoly::new(2, p("x^2 - x*y")).is_ok());
        assert!(HomoPoly::new(2, p("x^2 - x")).is_err());
        assert!(HomoPoly::new(7, BiPoly::zero()).is_ok());
    }
}
