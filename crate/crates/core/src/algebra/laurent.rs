use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

/// Exponent vector of a monomial, one entry per variable.
pub type Exponents = Vec<i32>;

/// A Laurent polynomial in `nvars` variables with integer coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by exponent vector, so iteration is
/// in lexicographic order on exponents with the first variable most
/// significant. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(nvars, c, vec![0; nvars])
    }

    pub fn monomial(nvars: usize, c: impl Into<BigInt>, exps: Exponents) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector has wrong length");
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self { nvars, terms }
    }

    /// The variable `x_i` itself.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, 1, e)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, BigInt)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[i32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// A single term `±x^e`.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.abs().is_one())
    }

    /// Constant term value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, exps: Exponents, c: BigInt) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Exponents, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Componentwise minimum exponent over all terms (zeros for the zero polynomial).
    pub fn min_exponents(&self) -> Exponents {
        let mut m: Option<Exponents> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(mut m) => {
                    for (a, b) in m.iter_mut().zip(e) {
                        *a = (*a).min(*b);
                    }
                    m
                }
            });
        }
        m.unwrap_or_else(|| vec![0; self.nvars])
    }

    pub fn max_exponents(&self) -> Exponents {
        let mut m: Option<Exponents> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(mut m) => {
                    for (a, b) in m.iter_mut().zip(e) {
                        *a = (*a).max(*b);
                    }
                    m
                }
            });
        }
        m.unwrap_or_else(|| vec![0; self.nvars])
    }

    /// Multiply by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        Self { nvars: self.nvars, terms }
    }

    /// Shift so that every variable has minimal exponent 0. Returns the
    /// shifted polynomial and the shift that was applied.
    pub fn to_polynomial(&self) -> (Self, Exponents) {
        let m = self.min_exponents();
        let s: Exponents = m.iter().map(|x| -x).collect();
        (self.shift(&s), s)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect();
        Self { nvars: self.nvars, terms }
    }

    /// Substitute `x_i -> x_i^{-1}` in every variable.
    pub fn invert_variables(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone()))
            .collect();
        Self { nvars: self.nvars, terms }
    }

    /// Non-negative power.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(other)?;
        Ok(self * other)
    }

    fn check_vars(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.nvars != other.nvars {
            return Err(AlgebraError::VariableMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    /// Canonical representative of the class of `self` up to units `±x^e`:
    /// minimal exponent 0 in every variable and positive leading coefficient.
    pub fn normalize(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let (p, _) = self.to_polynomial();
        if p.leading_term().unwrap().1.is_negative() {
            -p
        } else {
            p
        }
    }

    /// Equality up to multiplication by a unit `±x^e`.
    pub fn associated(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.normalize() == other.normalize()
    }

    /// Evaluate at the given complex values of the variables.
    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Complex64::zero();
        for (e, c) in &self.terms {
            let mut m = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (z, &k) in point.iter().zip(e) {
                m *= z.powi(k);
            }
            acc += m;
        }
        acc
    }

    /// Evaluate with each variable sent to `exp(2πi·angle)`, angles given
    /// as exact fractions `num/den`. Exponent products are reduced mod the
    /// denominator before the trigonometric call, so large exponents do
    /// not lose precision.
    pub fn eval_at_roots(&self, angles: &[(i64, i64)]) -> Complex64 {
        assert_eq!(angles.len(), self.nvars);
        let den = angles.iter().fold(1i64, |acc, &(_, d)| acc.lcm(&d));
        let mut acc = Complex64::zero();
        for (e, c) in &self.terms {
            let mut num: i64 = 0;
            for (&k, &(n, d)) in e.iter().zip(angles) {
                num = (num + (k as i64).rem_euclid(den) * n.rem_euclid(d) % den * (den / d)) % den;
            }
            let theta = 2.0 * std::f64::consts::PI * (num as f64) / (den as f64);
            acc += Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), theta);
        }
        acc
    }

    /// Coefficient of `x_var^d`, as a polynomial in the remaining variables
    /// (with exponent 0 in `var`).
    pub(crate) fn coeff_in(&self, var: usize, d: i32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == d {
                let mut e = e.clone();
                e[var] = 0;
                out.terms.insert(e, c.clone());
            }
        }
        out
    }

    /// Split into coefficients with respect to `var`, keyed by degree.
    pub(crate) fn coeffs_in(&self, var: usize) -> BTreeMap<i32, Self> {
        let mut out: BTreeMap<i32, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e[var];
            let mut e = e.clone();
            e[var] = 0;
            out.entry(d).or_insert_with(|| Self::zero(self.nvars)).terms.insert(e, c.clone());
        }
        out
    }

    pub(crate) fn degree_in(&self, var: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Exact quotient `self / d` in the Laurent ring, or `None` if `d` does
    /// not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        let (a, sa) = self.to_polynomial();
        let (b, sb) = d.to_polynomial();
        let q = poly_div_exact(&a, &b)?;
        // a = q b  with a = self·x^sa, b = d·x^sb
        let back: Exponents = sa.iter().zip(&sb).map(|(x, y)| y - x).collect();
        Some(q.shift(&back))
    }

    /// Variable names used for display: `t` for one variable, `s,t` for two.
    pub fn default_names(nvars: usize) -> Vec<String> {
        match nvars {
            1 => vec!["t".into()],
            2 => vec!["s".into(), "t".into()],
            n => (0..n).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono = monomial_string(e, names);
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { "-" } else { "+" });
            }
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        out
    }
}

fn monomial_string(e: &[i32], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (k, name) in e.iter().zip(names) {
        match *k {
            0 => {}
            1 => parts.push(name.clone()),
            k if k < 0 => parts.push(format!("{name}^({k})")),
            k => parts.push(format!("{name}^{k}")),
        }
    }
    parts.join("*")
}

/// Exact division of honest polynomials (all exponents ≥ 0) by the
/// lexicographic division algorithm. A single divisor is its own Gröbner
/// basis, so the remainder vanishes exactly when `b | a`.
pub(crate) fn poly_div_exact(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    let (lb_e, lb_c) = b.leading_term()?;
    let lb_e = lb_e.clone();
    let lb_c = lb_c.clone();
    let n = a.nvars;
    let mut q = LaurentPoly::zero(n);
    let mut r = a.clone();
    while let Some((le, lc)) = r.leading_term() {
        if le.iter().zip(&lb_e).any(|(x, y)| x < y) {
            return None;
        }
        let (quo, rem) = lc.div_rem(&lb_c);
        if !rem.is_zero() {
            return None;
        }
        let e: Exponents = le.iter().zip(&lb_e).map(|(x, y)| x - y).collect();
        let m = LaurentPoly::monomial(n, quo, e);
        r = &r - &(&m * b);
        q = &q + &m;
    }
    Some(q)
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&Self::default_names(self.nvars)))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = LaurentPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
