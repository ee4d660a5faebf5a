//! The regular representation `Z[Z^m] → Z[A] → M_k(Z)` and evaluation of
//! Laurent polynomials at characters of `A`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

use super::{AlgebraError, Character, GroupMap, IntMatrix, LaurentMatrix, LaurentPoly};
use crate::algebra::group::{Element, FinAbGroup};

/// Permutation matrix of translation by `a` on `Z[A]`, in row-vector form:
/// `e_g · ρ(a) = e_{g+a}`, so `ρ(a)[g][g + a] = 1`. Rows and columns follow
/// the group's element enumeration order.
pub fn regular_representation(group: &FinAbGroup, a: &[u64]) -> IntMatrix {
    let k = group.order() as usize;
    let mut m = IntMatrix::zeros(k, k);
    for (i, g) in group.elements().enumerate() {
        let j = group.index_of(&group.add(&g, a));
        m[(i, j)] = BigInt::from(1);
    }
    m
}

/// Image of `p` in the group ring `Z[A]`, as a coefficient vector indexed by
/// the element order.
pub fn to_group_ring(p: &LaurentPoly, phi: &GroupMap) -> Vec<BigInt> {
    assert_eq!(p.nvars(), phi.source_rank(), "polynomial and map disagree on rank");
    let group = phi.target();
    let mut out = vec![BigInt::zero(); group.order() as usize];
    for (e, c) in p.terms() {
        let v: Vec<i64> = e.iter().map(|&x| x as i64).collect();
        out[group.index_of(&phi.apply(&v))] += c;
    }
    out
}

/// `k × k` block for one entry: `Σ_g c_g ρ(g)`.
fn block_of(ring_elem: &[BigInt], group: &FinAbGroup, elems: &[Element]) -> Vec<(usize, usize, BigInt)> {
    let mut out = Vec::new();
    for (gi, c) in ring_elem.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (i, h) in elems.iter().enumerate() {
            let j = group.index_of(&group.add(h, &elems[gi]));
            out.push((i, j, c.clone()));
        }
    }
    out
}

/// Replace every entry of `m` by its `k × k` regular-representation block,
/// giving a `kr × kc` integer matrix.
pub fn apply_rep_to_matrix(m: &LaurentMatrix, phi: &GroupMap, bound: u64) -> Result<IntMatrix, AlgebraError> {
    let group = phi.target();
    group.check_bound(bound)?;
    let k = group.order() as usize;
    let elems: Vec<Element> = group.elements().collect();
    let mut out = IntMatrix::zeros(k * m.nrows(), k * m.ncols());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let ring = to_group_ring(&m[(r, c)], phi);
            for (i, j, v) in block_of(&ring, group, &elems) {
                out[(r * k + i, c * k + j)] += v;
            }
        }
    }
    Ok(out)
}

/// `η(φ(p))`: substitute `η(φ(e_i))` for each variable.
pub fn eval_at_character(p: &LaurentPoly, phi: &GroupMap, eta: &Character) -> Complex64 {
    assert_eq!(eta.group(), phi.target(), "character lives on a different group");
    let angles: Vec<(i64, i64)> = phi
        .images()
        .iter()
        .map(|im| {
            let v = eta.value(im);
            (*v.numer(), *v.denom())
        })
        .collect();
    p.eval_at_roots(&angles)
}

/// `Π_η η(φ(p))` over all characters of the target, computed numerically.
pub fn character_product(p: &LaurentPoly, phi: &GroupMap, bound: u64) -> Result<Complex64, AlgebraError> {
    let chars = super::enumerate_characters(phi.target(), bound)?;
    Ok(chars.iter().fold(Complex64::new(1.0, 0.0), |acc, eta| acc * eval_at_character(p, phi, eta)))
}
