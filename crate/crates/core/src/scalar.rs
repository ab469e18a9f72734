//! Exact coefficient ring: Laurent polynomials in `v`, `w`, `d`, `dp` over the
//! rationals.
//!
//! `v` is the Hecke parameter with `q = v^2`, `w` plays the same role for the
//! second parameter `Q = w^2`, and `d`, `dp` are the loop values of an
//! undecorated and a decorated loop. `[2] = v + v^-1` is not a separate symbol.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("cannot substitute a non-monomial for `{0}` appearing with a negative exponent")]
    NotInvertible(Var),
    #[error("scalar parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    V,
    W,
    D,
    Dp,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::V, Var::W, Var::D, Var::Dp];

    pub fn name(self) -> &'static str {
        match self {
            Var::V => "v",
            Var::W => "w",
            Var::D => "d",
            Var::Dp => "dp",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector over `(v, w, d, dp)`; its derived `Ord` is the lexicographic
/// order used for canonical term lists.
pub type Exponents = [i32; 4];

/// A Laurent polynomial with exact rational coefficients.
///
/// Terms live in a `BTreeMap` keyed by exponent vector and zero coefficients
/// are never stored, so structural equality is mathematical equality.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    terms: BTreeMap<Exponents, BigRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::monomial(c, [0; 4])
    }

    pub fn var(v: Var) -> Self {
        let mut exps = [0; 4];
        exps[v.slot()] = 1;
        Self::monomial(BigRational::one(), exps)
    }

    pub fn monomial(coeff: BigRational, exps: Exponents) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        Scalar { terms }
    }

    /// Builds a scalar from arbitrary `(exponents, coefficient)` pairs, merging
    /// repeated exponent vectors and dropping zeros.
    pub fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, BigRational)>,
    {
        let mut out = Scalar::zero();
        for (e, c) in iter {
            out.add_term(e, c);
        }
        out
    }

    /// `v + v^-1`.
    pub fn quantum_two() -> Self {
        Self::var(Var::V) + Self::var(Var::V).pow(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&[0; 4])
                .is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Terms in canonical (lexicographic exponent) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &Exponents) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, exps: Exponents, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    /// Integer power. Negative powers are only defined for monomials.
    ///
    /// # Panics
    /// Panics on a negative power of a zero or non-monomial scalar.
    pub fn pow(&self, exp: i32) -> Scalar {
        if exp < 0 {
            return self
                .monomial_inverse()
                .expect("negative power of a non-monomial scalar")
                .pow(-exp);
        }
        let mut result = Scalar::one();
        let mut base = self.clone();
        let mut e = exp as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// The multiplicative inverse, if this is a nonzero monomial.
    pub fn monomial_inverse(&self) -> Option<Scalar> {
        if !self.is_monomial() {
            return None;
        }
        let (exps, c) = self.terms.iter().next()?;
        let inv = [-exps[0], -exps[1], -exps[2], -exps[3]];
        Some(Scalar::monomial(c.recip(), inv))
    }

    /// Simultaneous substitution of variables by scalars. Variables without a
    /// binding are left in place.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Scalar>) -> Result<Scalar, ScalarError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let mut inverses: BTreeMap<Var, Scalar> = BTreeMap::new();
        let mut out = Scalar::zero();
        for (exps, coeff) in &self.terms {
            let mut kept = [0; 4];
            let mut term = Scalar::one();
            for var in Var::ALL {
                let e = exps[var.slot()];
                match bindings.get(&var) {
                    Some(image) if e > 0 => term = &term * &image.pow(e),
                    Some(image) if e < 0 => {
                        if let std::collections::btree_map::Entry::Vacant(e) = inverses.entry(var) {
                            let inv = image
                                .monomial_inverse()
                                .ok_or(ScalarError::NotInvertible(var))?;
                            e.insert(inv);
                        }
                        term = &term * &inverses[&var].pow(-e);
                    }
                    Some(_) => {}
                    None => kept[var.slot()] = e,
                }
            }
            term = &term * &Scalar::monomial(coeff.clone(), kept);
            out += term;
        }
        Ok(out)
    }

    /// Multiply by a rational constant.
    pub fn scale(&self, c: &BigRational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (*e, x * c))
                .collect(),
        }
    }

    fn fmt_term(exps: &Exponents, coeff: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let has_vars = exps.iter().any(|&e| e != 0);
        if !has_vars {
            return write!(f, "{coeff}");
        }
        let mut first = true;
        if coeff.is_one() {
        } else if (-coeff).is_one() {
            f.write_str("-")?;
        } else {
            write!(f, "{coeff}")?;
            first = false;
        }
        for var in Var::ALL {
            let e = exps[var.slot()];
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{var}")?;
            } else {
                write!(f, "{var}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (exps, coeff)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            Scalar::fmt_term(exps, coeff, f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_integer(n)
    }
}

impl From<Var> for Scalar {
    fn from(v: Var) -> Self {
        Scalar::var(v)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += rhs;
        self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        let mut out = self.clone();
        out += -rhs;
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

// ---------------------------------------------------------------------------
// JSON form: a list of `{num, den, pows}` terms in canonical order.

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn from_big(n: &BigInt) -> Self {
        match n.to_i64() {
            Some(x) => IntRepr::Small(x),
            None => IntRepr::Big(n.to_string()),
        }
    }

    fn to_big(&self) -> Result<BigInt, String> {
        match self {
            IntRepr::Small(x) => Ok(BigInt::from(*x)),
            IntRepr::Big(s) => s.parse().map_err(|_| format!("bad integer `{s}`")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    num: IntRepr,
    den: IntRepr,
    pows: BTreeMap<String, i32>,
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(exps, c)| TermRepr {
                num: IntRepr::from_big(c.numer()),
                den: IntRepr::from_big(c.denom()),
                pows: Var::ALL
                    .into_iter()
                    .filter(|v| exps[v.slot()] != 0)
                    .map(|v| (v.name().to_string(), exps[v.slot()]))
                    .collect(),
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let terms: Vec<TermRepr> = Vec::deserialize(deserializer)?;
        let mut out = Scalar::zero();
        for t in terms {
            let num = t.num.to_big().map_err(D::Error::custom)?;
            let den = t.den.to_big().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            let mut exps = [0; 4];
            for (name, e) in t.pows {
                let var = Var::from_name(&name)
                    .ok_or_else(|| D::Error::custom(format!("unknown variable `{name}`")))?;
                exps[var.slot()] = e;
            }
            out.add_term(exps, BigRational::new(num, den));
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Text parsing. Accepts the canonical display form and ordinary arithmetic:
// `+`, `-`, juxtaposition or `*`, `/` by integer constants, `^` with an integer
// exponent, and parentheses.

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ScalarError> {
        Err(ScalarError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn signed_exponent(&mut self) -> Result<i32, ScalarError> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let n = self.integer()?;
        let n = n.to_i32().ok_or(()).or_else(|_| self.err("exponent too large"))?;
        Ok(if neg { -n } else { n })
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.product()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    // the display form writes negative terms as `+ -c ...`
                    if self.peek() == Some(b'-') {
                        self.pos += 1;
                        acc = acc - self.product()?;
                    } else {
                        acc += self.product()?;
                    }
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc * self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return self.err("division by zero");
                    }
                    acc = acc.scale(&BigRational::new(BigInt::one(), den));
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => {
                    acc = acc * self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Scalar, ScalarError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.signed_exponent()?;
            if e < 0 && !base.is_monomial() {
                return self.err("negative power of a non-monomial");
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Scalar::from_rational(BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match Var::from_name(name) {
                    Some(v) => Ok(Scalar::var(v)),
                    None => {
                        self.pos = start;
                        self.err(format!("unknown variable `{name}`"))
                    }
                }
            }
            _ => self.err("expected a number, variable, or `(`"),
        }
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let out = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v() -> Scalar {
        Scalar::var(Var::V)
    }
    fn d() -> Scalar {
        Scalar::var(Var::D)
    }
    fn dp() -> Scalar {
        Scalar::var(Var::Dp)
    }

    #[test]
    fn addition_examples() {
        let two = Scalar::quantum_two();
        assert_eq!(&two + &Scalar::zero(), two);
        assert_eq!(d() + d(), Scalar::from_integer(2) * d());
        assert_eq!(two + (-v().pow(-1)), v());
    }

    #[test]
    fn multiplication_examples() {
        let two = Scalar::quantum_two();
        let sq = &two * &two;
        let expected = v().pow(2) + Scalar::from_integer(2) + v().pow(-2);
        assert_eq!(sq, expected);
        assert_eq!(Scalar::one() * dp(), dp());
        let mixed = d() * dp();
        assert_eq!(mixed.len(), 1);
        assert_eq!(mixed.coefficient(&[0, 0, 1, 1]), BigRational::one());
    }

    #[test]
    fn substitution_examples() {
        let two = Scalar::quantum_two();
        let b = BTreeMap::from([(Var::D, two.clone())]);
        assert_eq!(d().substitute(&b).unwrap(), two);

        let half = two.scale(&BigRational::new(1.into(), 2.into()));
        let b = BTreeMap::from([(Var::Dp, half.clone())]);
        assert_eq!(dp().substitute(&b).unwrap(), half);
        assert_eq!(half.to_string(), "1/2 v^-1 + 1/2 v");

        let x = d() * v() + dp().pow(3);
        assert_eq!(x.substitute(&BTreeMap::new()).unwrap(), x);
    }

    #[test]
    fn substitution_is_simultaneous() {
        // d -> v, v -> d swaps the variables rather than collapsing them
        let b = BTreeMap::from([(Var::D, v()), (Var::V, d())]);
        let x = d() + v().pow(2);
        assert_eq!(x.substitute(&b).unwrap(), v() + d().pow(2));
    }

    #[test]
    fn negative_exponent_needs_monomial_image() {
        let b = BTreeMap::from([(Var::D, Scalar::quantum_two())]);
        assert_eq!(
            d().pow(-1).substitute(&b),
            Err(ScalarError::NotInvertible(Var::D))
        );
        let b = BTreeMap::from([(Var::D, v().pow(2))]);
        assert_eq!(d().pow(-1).substitute(&b).unwrap(), v().pow(-2));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::zero().to_string(), "0");
        assert_eq!(Scalar::one().to_string(), "1");
        let t = Scalar::monomial(BigRational::new(1.into(), 2.into()), [-1, 0, 2, 0]);
        assert_eq!(t.to_string(), "1/2 v^-1 d^2");
        assert_eq!((-dp()).to_string(), "-dp");
        assert_eq!(Scalar::quantum_two().to_string(), "v^-1 + v");
    }

    #[test]
    fn parse_round_trip() {
        for text in ["0", "1", "dp", "v^-1 + v", "1/2 v^-1 d^2", "-3 w + 1/5", "-dp + d"] {
            let s: Scalar = text.parse().unwrap();
            let again: Scalar = s.to_string().parse().unwrap();
            assert_eq!(s, again, "{text}");
        }
        let s: Scalar = "(v + v^-1)/2".parse().unwrap();
        assert_eq!(s.to_string(), "1/2 v^-1 + 1/2 v");
        assert!("x + 1".parse::<Scalar>().is_err());
        assert!("(v + 1)^-1".parse::<Scalar>().is_err());
    }

    #[test]
    fn json_shape() {
        let s: Scalar = "1/2 v^-1 d^2 + 3".parse().unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(
            json,
            r#"[{"num":1,"den":2,"pows":{"d":2,"v":-1}},{"num":3,"den":1,"pows":{}}]"#
        );
        let back: Scalar = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn big_coefficients_survive_json() {
        let s = Scalar::from_integer(i64::MAX).pow(3);
        let back: Scalar = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }
}
