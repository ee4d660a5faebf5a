//! Greatest common divisors in `Z[x_1^±, ..., x_m^±]`.
//!
//! Laurent inputs are shifted into `Z[x_1, ..., x_m]`, then handled
//! recursively: split off the content with respect to the main variable,
//! run a subresultant PRS on the primitive parts, and multiply back the gcd
//! of the contents. Everything is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::laurent::poly_div_exact;
use super::LaurentPoly;

/// Gcd of two Laurent polynomials, in canonical form (see
/// [`LaurentPoly::normalize`]). `gcd(0, 0) = 0`.
pub fn laurent_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    assert_eq!(a.nvars(), b.nvars(), "variable count mismatch");
    let (a, _) = a.to_polynomial();
    let (b, _) = b.to_polynomial();
    poly_gcd(&a, &b).normalize()
}

/// Gcd of a whole list; zero entries are ignored.
pub fn laurent_gcd_all<'a>(nvars: usize, items: impl IntoIterator<Item = &'a LaurentPoly>) -> LaurentPoly {
    let mut g = LaurentPoly::zero(nvars);
    for p in items {
        if g.is_one() {
            break;
        }
        g = laurent_gcd(&g, p);
    }
    g
}

fn main_var(a: &LaurentPoly, b: &LaurentPoly) -> Option<usize> {
    (0..a.nvars()).find(|&v| a.degree_in(v).unwrap_or(0) > 0 || b.degree_in(v).unwrap_or(0) > 0)
}

/// Gcd of honest polynomials (non-negative exponents), sign unnormalized.
fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let Some(v) = main_var(a, b) else {
        let x = a.as_constant().unwrap();
        let y = b.as_constant().unwrap();
        return LaurentPoly::constant(a.nvars(), x.gcd(&y));
    };
    let (ca, pa) = content_primitive(a, v);
    let (cb, pb) = content_primitive(b, v);
    let c = poly_gcd(&ca, &cb);
    let g = subresultant_gcd(&pa, &pb, v);
    &c * &g
}

/// Content with respect to `v` (gcd of the coefficients in the remaining
/// variables) and the primitive part.
fn content_primitive(a: &LaurentPoly, v: usize) -> (LaurentPoly, LaurentPoly) {
    let mut c = LaurentPoly::zero(a.nvars());
    for coeff in a.coeffs_in(v).values() {
        c = poly_gcd(&c, coeff);
        if c.as_constant().is_some_and(|x| x.abs().is_one()) {
            break;
        }
    }
    // keep the leading coefficient of the primitive part positive
    if c.leading_term().is_some_and(|(_, x)| x.is_negative()) {
        c = -c;
    }
    let pp = poly_div_exact(a, &c).expect("content divides polynomial");
    (c, pp)
}

fn primitive_part(a: &LaurentPoly, v: usize) -> LaurentPoly {
    content_primitive(a, v).1
}

fn lead_in(a: &LaurentPoly, v: usize) -> LaurentPoly {
    a.coeff_in(v, a.degree_in(v).unwrap_or(0))
}

fn var_power(nvars: usize, v: usize, d: i32) -> LaurentPoly {
    let mut e = vec![0; nvars];
    e[v] = d;
    LaurentPoly::monomial(nvars, 1, e)
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b` in the variable `v`.
fn pseudo_remainder(a: &LaurentPoly, b: &LaurentPoly, v: usize) -> LaurentPoly {
    let db = b.degree_in(v).unwrap();
    let lb = lead_in(b, v);
    let mut r = a.clone();
    let mut steps = a.degree_in(v).unwrap() - db + 1;
    while !r.is_zero() && r.degree_in(v).unwrap() >= db {
        let dr = r.degree_in(v).unwrap();
        let lr = lead_in(&r, v);
        r = &(&lb * &r) - &(&(&lr * &var_power(a.nvars(), v, dr - db)) * b);
        steps -= 1;
    }
    if steps > 0 {
        r = &r * &lb.pow(steps as u32);
    }
    r
}

fn exact(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    poly_div_exact(a, b).expect("subresultant division is exact")
}

/// Gcd of two polynomials primitive in `v`, via the subresultant PRS.
fn subresultant_gcd(a: &LaurentPoly, b: &LaurentPoly, v: usize) -> LaurentPoly {
    let n = a.nvars();
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    if b.degree_in(v) == Some(0) {
        // b is primitive of degree zero in v, hence ±1
        return LaurentPoly::one(n);
    }
    let mut g = LaurentPoly::one(n);
    let mut h = LaurentPoly::one(n);
    loop {
        let delta = a.degree_in(v).unwrap() - b.degree_in(v).unwrap();
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == Some(0) {
            return LaurentPoly::one(n);
        }
        a = b;
        b = exact(&r, &(&g * &h.pow(delta as u32)));
        g = lead_in(&a, v);
        h = if delta == 0 {
            h
        } else {
            exact(&g.pow(delta as u32), &h.pow(delta as u32 - 1))
        };
    }
    let mut out = primitive_part(&b, v);
    if out.leading_term().is_some_and(|(_, c)| c.is_negative()) {
        out = -out;
    }
    out
}

/// Integer content (gcd of all coefficients).
pub fn integer_content(p: &LaurentPoly) -> BigInt {
    p.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_laurent;

    fn p(s: &str) -> LaurentPoly {
        parse_laurent(s, &["s", "t"]).unwrap()
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let f = p("t*s+1-s");
        let g = p("t*s+1-t");
        let h = p("s^2 + t - 3");
        let a = &(&f * &g) * &p("s-1");
        let b = &(&f * &h) * &p("2*t+s");
        assert_eq!(laurent_gcd(&a, &b), f.normalize());
        assert_eq!(laurent_gcd(&(&a * &g), &(&b * &g)), (&f * &g).normalize());
    }

    #[test]
    fn gcd_with_integer_content() {
        let a = p("6*s*t - 6");
        let b = p("4*s^2*t^2 - 4");
        assert_eq!(laurent_gcd(&a, &b), p("2*s*t-2"));
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        assert!(laurent_gcd(&p("s+t-1"), &p("s*t-s-t")).is_one());
        assert!(laurent_gcd(&p("s-1"), &p("t-1")).is_one());
    }

    #[test]
    fn gcd_ignores_units_and_zero() {
        let f = p("s^(-1)*t - 1 + s");
        let u = LaurentPoly::monomial(2, -1, vec![4, -7]);
        assert_eq!(laurent_gcd(&f, &(&u * &f)), f.normalize());
        assert_eq!(laurent_gcd(&f, &LaurentPoly::zero(2)), f.normalize());
        assert!(laurent_gcd(&LaurentPoly::zero(2), &LaurentPoly::zero(2)).is_zero());
    }

    #[test]
    fn univariate_gcd() {
        let a = parse_laurent("(t^2-t+1)*(t-2)^2", &["t"]).unwrap();
        let b = parse_laurent("(t^2-t+1)*(t+3)*(t-2)", &["t"]).unwrap();
        let g = laurent_gcd(&a, &b);
        assert_eq!(g, parse_laurent("(t^2-t+1)*(t-2)", &["t"]).unwrap().normalize());
    }
}
