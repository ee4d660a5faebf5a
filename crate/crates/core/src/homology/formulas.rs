use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::cover::{cover_chain_complex, homology_of_cover};
use super::HomologyError;
use crate::algebra::{apply_rep_to_matrix, character_product, GroupMap, LaurentMatrix, LaurentPoly};
use crate::linkdiagram::{wirtinger, DiagramError, PDCode};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomologySummary {
    pub free_rank: usize,
    #[serde(serialize_with = "crate::json::big_vec")]
    pub torsion: Vec<BigInt>,
}

/// Both sides of an order formula `|G| = Π_η Δ(η(φ(·)))`. The right side is
/// computed as `|det ρ(Δ)|` and as a product of character values; the left
/// side, when a diagram is given, is `|G|` for `H_1 = Z^b ⊕ G` read off the
/// cover (0 when the free rank exceeds `b`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    #[serde(serialize_with = "crate::json::big_opt")]
    pub lhs: Option<BigInt>,
    #[serde(serialize_with = "crate::json::big")]
    pub rhs_exact: BigInt,
    #[serde(serialize_with = "crate::json::float")]
    pub rhs_numeric: f64,
    pub consistent: bool,
    pub homology: Option<HomologySummary>,
}

fn verify(
    delta: &LaurentPoly,
    phi: &GroupMap,
    diagram: Option<&PDCode>,
    free_rank: usize,
    bound: u64,
) -> Result<VerificationReport, HomologyError> {
    if delta.nvars() != phi.source_rank() {
        return Err(HomologyError::RankMismatch { map: phi.source_rank(), components: delta.nvars() });
    }
    let rho = apply_rep_to_matrix(&LaurentMatrix::from_rows(delta.nvars(), vec![vec![delta.clone()]]), phi, bound)?;
    let exact = rho.det().abs();
    let product = character_product(delta, phi, bound)?;
    let numeric = product.norm();
    let exact_f = exact.to_f64().unwrap_or(f64::INFINITY);
    let scale = exact_f.max(1.0);
    if (numeric - exact_f).abs() > 1e-6 * scale || product.im.abs() > 1e-6 * scale {
        return Err(HomologyError::Inconsistent { exact: exact.to_string(), numeric: format!("{numeric}") });
    }
    let (lhs, homology) = match diagram {
        None => (None, None),
        Some(d) => {
            let w = wirtinger(d);
            let complex = cover_chain_complex(&w.presentation, &w.meridians, phi, bound)?;
            let h = homology_of_cover(&complex, false);
            let lhs = match h.free_rank.cmp(&free_rank) {
                std::cmp::Ordering::Equal => Some(h.torsion_order()),
                std::cmp::Ordering::Greater => Some(BigInt::zero()),
                std::cmp::Ordering::Less => None,
            };
            (lhs, Some(HomologySummary { free_rank: h.free_rank, torsion: h.torsion }))
        }
    };
    let consistent = match (&lhs, diagram) {
        (Some(l), _) => *l == exact,
        (None, Some(_)) => false,
        (None, None) => true,
    };
    Ok(VerificationReport { lhs, rhs_exact: exact, rhs_numeric: numeric, consistent, homology })
}

/// `H_1(X_L^φ) ≅ Z² ⊕ G` with `|G| = Π_η Δ_L(η(φ(s)), η(φ(t)))` for a
/// 2-component link of linking number ±1.
pub fn verify_link_cover_formula(
    delta: &LaurentPoly,
    phi: &GroupMap,
    diagram: Option<&PDCode>,
    bound: u64,
) -> Result<VerificationReport, HomologyError> {
    if let Some(d) = diagram {
        let found = d.component_count();
        if found != 2 {
            return Err(DiagramError::ComponentCount { expected: 2, found }.into());
        }
    }
    verify(delta, phi, diagram, 2, bound)
}

/// `H_1(X_K^n) ≅ Z ⊕ G` with `|G| = Π_k Δ_K(e^{2πik/n})`.
pub fn verify_knot_cover_formula(
    delta: &LaurentPoly,
    n: u64,
    diagram: Option<&PDCode>,
    bound: u64,
) -> Result<VerificationReport, HomologyError> {
    if let Some(d) = diagram {
        let found = d.component_count();
        if found != 1 {
            return Err(DiagramError::ComponentCount { expected: 1, found }.into());
        }
    }
    verify(delta, &GroupMap::cyclic(n)?, diagram, 1, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_laurent;
    use crate::linkdiagram::parse_pd;

    const TREFOIL: &str = "X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]";

    fn st(s: &str) -> LaurentPoly {
        parse_laurent(s, &["s", "t"]).unwrap()
    }

    #[test]
    fn klein_four_instance() {
        let r = verify_link_cover_formula(&st("(t*s+1-s)*(t*s+1-t)"), &GroupMap::admissible(2, 2).unwrap(), None, 64)
            .unwrap();
        assert_eq!(r.rhs_exact, BigInt::from(9));
        assert!((r.rhs_numeric - 9.0).abs() < 1e-9);
        assert!(r.consistent && r.lhs.is_none());
    }

    #[test]
    fn unit_polynomial() {
        for (k, l) in [(2, 2), (3, 1), (4, 2)] {
            let r = verify_link_cover_formula(&st("1"), &GroupMap::admissible(k, l).unwrap(), None, 64).unwrap();
            assert_eq!(r.rhs_exact, BigInt::from(1));
        }
    }

    #[test]
    fn trefoil_cyclic_covers() {
        let d = parse_pd(TREFOIL).unwrap();
        let delta = parse_laurent("t^2-t+1", &["t"]).unwrap();
        for (n, order) in [(1, 1), (2, 3), (3, 4), (6, 0)] {
            let r = verify_knot_cover_formula(&delta, n, Some(&d), 64).unwrap();
            assert_eq!(r.rhs_exact, BigInt::from(order), "n = {n}");
            assert_eq!(r.lhs, Some(BigInt::from(order)));
            assert!(r.consistent);
        }
    }

    #[test]
    fn mismatched_polynomial_is_inconsistent() {
        let d = parse_pd(TREFOIL).unwrap();
        let wrong = parse_laurent("t^2-3*t+1", &["t"]).unwrap();
        let r = verify_knot_cover_formula(&wrong, 2, Some(&d), 64).unwrap();
        assert!(!r.consistent);
    }

    #[test]
    fn json_shape() {
        let d = parse_pd("X[4,2,3,1];X[2,4,1,3]").unwrap();
        let r = verify_link_cover_formula(&st("1"), &GroupMap::admissible(2, 2).unwrap(), Some(&d), 64).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"lhs":1,"rhs_exact":1,"rhs_numeric":1.0,"consistent":true,"homology":{"free_rank":2,"torsion":[]}}"#
        );
    }
}
