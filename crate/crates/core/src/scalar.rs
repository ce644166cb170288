//! Exact scalars: multivariate polynomials over the rationals in named
//! parameters, always held in canonical form.
//!
//! Terms are sorted by descending graded-lexicographic monomial order, where
//! the variable order is the declaration order of the parameters. Two scalars
//! are equal iff their canonical term lists are identical, so `==` is a
//! complete decision procedure for polynomial identities.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;

mod parse;

pub use parse::parse_scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared parameter `{0}`")]
    UndeclaredName(String),
    #[error("division by a non-constant expression at position {0}")]
    NonConstantDivisor(usize),
    #[error("division by zero at position {0}")]
    DivisionByZero(usize),
    #[error("duplicate parameter `{0}`")]
    DuplicateName(String),
    #[error("invalid parameter name `{0}`")]
    InvalidName(String),
    #[error("value for `{0}` is not a rational constant")]
    NonConstantValue(String),
}

/// Ordered list of parameter names. The position of a name is its variable
/// index and fixes the monomial order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParamSet {
    names: Vec<String>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl ParamSet {
    pub fn new<I, S>(names: I) -> Result<Self, ScalarError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Vec::new();
        for name in names {
            let name = name.into();
            if !is_identifier(&name) {
                return Err(ScalarError::InvalidName(name));
            }
            if out.contains(&name) {
                return Err(ScalarError::DuplicateName(name));
            }
            out.push(name);
        }
        Ok(Self { names: out })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Scalar for the parameter called `name`.
    pub fn var(&self, name: &str) -> Result<Scalar, ScalarError> {
        self.index_of(name)
            .map(Scalar::var)
            .ok_or_else(|| ScalarError::UndeclaredName(name.to_string()))
    }
}

/// A power product of parameters, stored as `(variable, exponent)` pairs
/// sorted by variable with strictly positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: usize) -> Self {
        Monomial(vec![(index, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        out.push((va, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((vb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&t), None) => {
                    out.push(t);
                    a.next();
                }
                (None, Some(&&t)) => {
                    out.push(t);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the exponent of the
    /// earliest declared variable, and so on.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut a, mut b) = (self.0.iter(), other.0.iter());
        loop {
            match (a.next(), b.next()) {
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va != vb {
                        // the side holding the smaller variable index has the
                        // larger exponent there
                        return if va < vb {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        };
                    }
                    match ea.cmp(&eb) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (None, None) => return Ordering::Equal,
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of ℚ[parameters] in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    // sorted by descending monomial order, no zero coefficients
    terms: Vec<(Monomial, Rational)>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(n)))
    }

    /// `num / den`; panics if `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::constant(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn constant(value: Rational) -> Self {
        if value.is_zero() {
            Self::zero()
        } else {
            Scalar {
                terms: vec![(Monomial::one(), value)],
            }
        }
    }

    pub fn var(index: usize) -> Self {
        Scalar {
            terms: vec![(Monomial::var(index), Rational::one())],
        }
    }

    fn from_map(map: BTreeMap<Monomial, Rational>) -> Self {
        let terms = map
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Scalar { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    /// The value if this scalar has no parameter dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn scale(&self, factor: &Rational) -> Scalar {
        if factor.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    /// Division by a nonzero rational constant.
    pub fn div_rational(&self, divisor: &Rational) -> Scalar {
        assert!(!divisor.is_zero(), "division by zero");
        self.scale(&divisor.recip())
    }

    /// Indices of the parameters that occur in this scalar.
    pub fn variables(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.0.iter().map(|&(v, _)| v))
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// Evaluate the bound parameters; unbound parameters survive.
    pub fn substitute(&self, subst: &Substitution) -> Scalar {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            let mut c = coeff.clone();
            let mut rest = Vec::new();
            for &(v, e) in &mono.0 {
                match subst.values.get(&v) {
                    Some(val) => c *= pow(val, e),
                    None => rest.push((v, e)),
                }
            }
            if c.is_zero() {
                continue;
            }
            *map.entry(Monomial(rest)).or_insert_with(Rational::zero) += c;
        }
        Scalar::from_map(map)
    }

    pub fn display<'a>(&'a self, params: &'a ParamSet) -> ScalarDisplay<'a> {
        ScalarDisplay {
            scalar: self,
            params,
        }
    }

    /// Canonical text form, see [`ScalarDisplay`].
    pub fn to_text(&self, params: &ParamSet) -> String {
        self.display(params).to_string()
    }

    fn add_impl(&self, other: &Scalar, negate_other: bool) -> Scalar {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        let sign = |c: &Rational| if negate_other { -c } else { c.clone() };
        loop {
            match (a.peek(), b.peek()) {
                (Some((ma, ca)), Some((mb, cb))) => match ma.cmp(mb) {
                    Ordering::Greater => {
                        out.push((ma.clone(), ca.clone()));
                        a.next();
                    }
                    Ordering::Less => {
                        out.push((mb.clone(), sign(cb)));
                        b.next();
                    }
                    Ordering::Equal => {
                        let c = ca + sign(cb);
                        if !c.is_zero() {
                            out.push((ma.clone(), c));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some((m, c)), None) => {
                    out.push((m.clone(), c.clone()));
                    a.next();
                }
                (None, Some((m, c))) => {
                    out.push((m.clone(), sign(c)));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Scalar { terms: out }
    }

    fn mul_impl(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if let [(m, c)] = self.terms.as_slice() {
            if m.is_one() {
                return other.scale(c);
            }
        }
        if let [(m, c)] = other.terms.as_slice() {
            if m.is_one() {
                return self.scale(c);
            }
        }
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *map.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Scalar::from_map(map)
    }
}

fn pow(base: &Rational, exp: u32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::constant(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $body(self, rhs)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $body(&self, &rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $body(&self, rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &Scalar, b: &Scalar| a.add_impl(b, false));
forward_binop!(Sub, sub, |a: &Scalar, b: &Scalar| a.add_impl(b, true));
forward_binop!(Mul, mul, |a: &Scalar, b: &Scalar| a.mul_impl(b));

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = self.add_impl(rhs, false);
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = self.add_impl(&rhs, false);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = self.add_impl(rhs, true);
    }
}

impl SubAssign<Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = self.add_impl(&rhs, true);
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

/// Printer for the canonical text form, e.g. `l1 + l3`, `2*m1`,
/// `-1/2*l1*l1 + 3`. Powers are written as repeated products so that the
/// output is accepted by [`parse_scalar`].
pub struct ScalarDisplay<'a> {
    scalar: &'a Scalar,
    params: &'a ParamSet,
}

impl fmt::Display for ScalarDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scalar.is_zero() {
            return f.write_str("0");
        }
        for (n, (mono, coeff)) in self.scalar.terms.iter().enumerate() {
            let negative = coeff.is_negative();
            match (n, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = coeff.abs();
            let mut first = true;
            if mono.is_one() || !magnitude.is_one() {
                write!(f, "{magnitude}")?;
                first = false;
            }
            for &(v, e) in &mono.0 {
                for _ in 0..e {
                    if !first {
                        f.write_str("*")?;
                    }
                    f.write_str(self.params.name(v))?;
                    first = false;
                }
            }
        }
        Ok(())
    }
}

/// Values for some of the declared parameters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    values: BTreeMap<usize, Rational>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(
        &mut self,
        params: &ParamSet,
        name: &str,
        value: Rational,
    ) -> Result<(), ScalarError> {
        let index = params
            .index_of(name)
            .ok_or_else(|| ScalarError::UndeclaredName(name.to_string()))?;
        self.values.insert(index, value);
        Ok(())
    }

    /// Build from `(name, expression)` pairs whose expressions must be
    /// rational constants.
    pub fn from_pairs<'a, I>(params: &ParamSet, pairs: I) -> Result<Self, ScalarError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut subst = Substitution::new();
        for (name, text) in pairs {
            let value = parse_scalar(text, &ParamSet::empty())?
                .as_constant()
                .ok_or_else(|| ScalarError::NonConstantValue(name.to_string()))?;
            subst.bind(params, name.trim(), value)?;
        }
        Ok(subst)
    }

    /// Parse `k=v,k=v,...`.
    pub fn parse_bindings(text: &str, params: &ParamSet) -> Result<Self, ScalarError> {
        let mut pairs = Vec::new();
        for (offset, item) in split_with_offsets(text, ',') {
            if item.trim().is_empty() {
                continue;
            }
            let (name, value) = item.split_once('=').ok_or_else(|| ScalarError::Syntax {
                pos: offset,
                msg: format!("expected `name=value`, found `{item}`"),
            })?;
            pairs.push((name.trim(), value.trim()));
        }
        Self::from_pairs(params, pairs)
    }

    pub fn get(&self, index: usize) -> Option<&Rational> {
        self.values.get(&index)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True when every declared parameter is bound.
    pub fn is_complete(&self, params: &ParamSet) -> bool {
        (0..params.len()).all(|i| self.values.contains_key(&i))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.values.iter().map(|(&k, v)| (k, v))
    }
}

fn split_with_offsets(text: &str, sep: char) -> impl Iterator<Item = (usize, &str)> {
    let mut offset = 0;
    text.split(sep).map(move |piece| {
        let start = offset;
        offset += piece.len() + sep.len_utf8();
        (start, piece)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params() -> ParamSet {
        ParamSet::new(["l1", "l2", "l3", "l4", "m1", "m2"]).unwrap()
    }

    fn p(text: &str) -> Scalar {
        parse_scalar(text, &params()).unwrap()
    }

    fn subst(pairs: &[(&str, &str)]) -> Substitution {
        Substitution::from_pairs(&params(), pairs.iter().copied()).unwrap()
    }

    #[test]
    fn rational_addition() {
        assert_eq!(Scalar::frac(1, 2) + Scalar::frac(1, 3), Scalar::frac(5, 6));
    }

    #[test]
    fn additive_inverse_vanishes() {
        let sum = p("m1") + p("-m1");
        assert!(sum.is_zero());
        assert_eq!(sum.to_text(&params()), "0");
    }

    #[test]
    fn collect_like_terms() {
        let sum = p("l1 + m1") + p("l1 - m1");
        assert_eq!(sum, p("2*l1"));
        let at = subst(&[("l1", "3"), ("m1", "5")]);
        assert_eq!(sum.substitute(&at), Scalar::from_int(6));
    }

    #[test]
    fn multiplication() {
        assert_eq!(p("2*m1") * Scalar::frac(1, 2), p("m1"));
        assert!((p("l1") * Scalar::zero()).is_zero());
        let prod = p("l1+l3") * p("l1-l3");
        assert_eq!(prod, p("l1*l1 - l3*l3"));
        assert_eq!(prod.to_text(&params()), "l1*l1 - l3*l3");
        let at = subst(&[("l1", "2"), ("l3", "1")]);
        assert_eq!(prod.substitute(&at), Scalar::from_int(3));
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(
            p("2*m1").substitute(&subst(&[("m1", "3")])),
            Scalar::from_int(6)
        );
        assert!(p("l1*l2").substitute(&subst(&[("l1", "0")])).is_zero());
        let s = subst(&[("l1", "1"), ("m2", "-2")]);
        assert_eq!(p("l1+2*m2").substitute(&s), Scalar::from_int(-3));
    }

    #[test]
    fn partial_substitution_keeps_free_parameters() {
        let s = subst(&[("l1", "2")]);
        assert_eq!(p("l1*m1 + l1").substitute(&s), p("2*m1 + 2"));
    }

    #[test]
    fn undeclared_binding_is_rejected() {
        let err = Substitution::parse_bindings("l1=1,q=2", &params()).unwrap_err();
        assert_eq!(err, ScalarError::UndeclaredName("q".into()));
    }

    #[test]
    fn parse_bindings_accepts_rationals() {
        let s = Substitution::parse_bindings("l1=1/2, m2=-3", &params()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(p("l1 + m2").substitute(&s), Scalar::frac(-5, 2));
    }

    #[test]
    fn canonical_order_is_graded_lex() {
        let s = p("1 + m2 + l3*l1 + l1 + 2*m1*m1 - l4");
        assert_eq!(s.to_text(&params()), "l1*l3 + 2*m1*m1 + l1 - l4 + m2 + 1");
    }

    #[test]
    fn printing_of_coefficients() {
        assert_eq!(p("(l1+l3)/2").to_text(&params()), "1/2*l1 + 1/2*l3");
        assert_eq!(p("-m1").to_text(&params()), "-m1");
        assert_eq!(p("-3/4").to_text(&params()), "-3/4");
        assert_eq!(p("2*m1").to_text(&params()), "2*m1");
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        let term = (-5i64..=5, 1i64..=3, proptest::collection::vec(0u32..=2, 3));
        proptest::collection::vec(term, 0..4).prop_map(|terms| {
            terms
                .into_iter()
                .map(|(n, d, exps)| {
                    let mut s = Scalar::frac(n, d);
                    for (v, e) in exps.into_iter().enumerate() {
                        for _ in 0..e {
                            s = s * Scalar::var(v);
                        }
                    }
                    s
                })
                .sum()
        })
    }

    fn arb_subst() -> impl Strategy<Value = Substitution> {
        proptest::collection::vec((-6i64..=6, 1i64..=4), 3).prop_map(|vals| {
            let mut s = Substitution::new();
            for (i, (n, d)) in vals.into_iter().enumerate() {
                s.values
                    .insert(i, Rational::new(BigInt::from(n), BigInt::from(d)));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn substitution_is_a_homomorphism(
            a in arb_scalar(), b in arb_scalar(), c in arb_scalar(), s in arb_subst()
        ) {
            let lhs = (&a * &b + &c).substitute(&s);
            let rhs = a.substitute(&s) * b.substitute(&s) + c.substitute(&s);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn print_parse_round_trip(a in arb_scalar()) {
            let names = ParamSet::new(["x", "y", "z"]).unwrap();
            let text = a.to_text(&names);
            let back = parse_scalar(&text, &names).unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn terms_are_canonical(a in arb_scalar(), b in arb_scalar()) {
            let prod = &a * &b;
            for pair in prod.terms().windows(2) {
                prop_assert!(pair[0].0 > pair[1].0);
            }
            prop_assert!(prod.terms().iter().all(|(_, c)| !c.is_zero()));
        }
    }
}
