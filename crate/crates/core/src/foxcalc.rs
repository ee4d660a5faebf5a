//! Free differential calculus on Wirtinger presentations and the Alexander
//! polynomials it produces.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::algebra::{laurent_gcd_all, LaurentMatrix, LaurentPoly};
use crate::linkdiagram::{wirtinger, DiagramError, GroupPresentation, MeridianMap, PDCode};

/// Largest Fox matrix (in generators) whose minors are enumerated.
pub const MAX_FOX_DIMENSION: usize = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoxError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("all maximal minors vanish: the Alexander polynomial is 0")]
    Degenerate,
    #[error("Fox matrix has {dim} generators, above the limit of {cap}")]
    TooLarge { dim: usize, cap: usize },
    #[error("knot polynomial {0} does not satisfy |Δ(1)| = 1")]
    NotUnitAtOne(String),
}

/// Abelianized free derivative `∂w/∂g`, with
/// `∂(uv)/∂g = ∂u/∂g + ab(u)·∂v/∂g` and `∂g⁻¹/∂g = −ab(g)⁻¹`.
pub fn fox_derivative(w: &[(usize, i8)], g: usize, ab: &MeridianMap) -> LaurentPoly {
    let m = ab.component_count;
    let mut prefix = vec![0i32; m];
    let mut out = LaurentPoly::zero(m);
    for &(h, e) in w {
        let c = ab.generator_component[h];
        if h == g {
            if e > 0 {
                out.add_term(prefix.clone(), BigInt::one());
            } else {
                let mut exps = prefix.clone();
                exps[c] -= 1;
                out.add_term(exps, -BigInt::one());
            }
        }
        prefix[c] += e as i32;
    }
    out
}

/// The Alexander matrix of a presentation together with the abelianized
/// generators `ab(g_j)`.
#[derive(Clone, Debug)]
pub struct FoxMatrix {
    pub matrix: LaurentMatrix,
    pub generator_images: Vec<LaurentPoly>,
}

impl FoxMatrix {
    pub fn nvars(&self) -> usize {
        self.matrix.nvars()
    }

    pub fn relation_count(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn generator_count(&self) -> usize {
        self.matrix.ncols()
    }

    /// `Σ_j (∂r_i/∂g_j)(ab(g_j) − 1)` for each row; all zero for a genuine
    /// presentation.
    pub fn row_identity_residues(&self) -> Vec<LaurentPoly> {
        let m = self.nvars();
        let one = LaurentPoly::one(m);
        (0..self.relation_count())
            .map(|i| {
                let mut acc = LaurentPoly::zero(m);
                for (j, x) in self.generator_images.iter().enumerate() {
                    acc = acc + &self.matrix[(i, j)] * &(x - &one);
                }
                acc
            })
            .collect()
    }

    /// Gcd of the maximal minors left after deleting column `j`, divided by
    /// `ab(g_j) − 1` when there is more than one variable.
    pub fn polynomial_from_column(&self, j: usize) -> Result<LaurentPoly, FoxError> {
        let m = self.nvars();
        let g = self.generator_count();
        if g > MAX_FOX_DIMENSION {
            return Err(FoxError::TooLarge { dim: g, cap: MAX_FOX_DIMENSION });
        }
        if g <= 1 {
            // no relations survive: the unknot
            return Ok(LaurentPoly::one(m));
        }
        let r = self.relation_count();
        let size = g - 1;
        let reduced = self.matrix.minor(None, Some(j));
        let minors: Vec<LaurentPoly> = row_subsets(r, size)
            .into_iter()
            .map(|rows| {
                let picked: Vec<Vec<LaurentPoly>> = rows.iter().map(|&i| reduced.row(i).to_vec()).collect();
                LaurentMatrix::from_rows(m, picked).det()
            })
            .collect();
        let gcd = laurent_gcd_all(m, minors.iter());
        if gcd.is_zero() {
            return Err(FoxError::Degenerate);
        }
        if m == 1 {
            return Ok(gcd.normalize());
        }
        let divisor = &self.generator_images[j] - &LaurentPoly::one(m);
        match gcd.div_exact(&divisor) {
            Some(q) => Ok(q.normalize()),
            // happens only when the ideal is not principal up to the expected factor
            None => Err(FoxError::Degenerate),
        }
    }
}

fn row_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // rightmost position that can still advance
        let Some(i) = (0..k).rev().find(|&i| idx[i] < i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for t in i + 1..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

/// Matrix of abelianized Fox derivatives `(∂r_i/∂g_j)`.
pub fn alexander_matrix(pres: &GroupPresentation, ab: &MeridianMap) -> FoxMatrix {
    let m = ab.component_count;
    let rows = pres
        .relations
        .iter()
        .map(|r| (0..pres.generator_count).map(|g| fox_derivative(r, g, ab)).collect())
        .collect();
    let generator_images = (0..pres.generator_count)
        .map(|g| {
            let mut e = vec![0; m];
            e[ab.generator_component[g]] = 1;
            LaurentPoly::monomial(m, 1, e)
        })
        .collect();
    let matrix = if pres.relations.is_empty() {
        LaurentMatrix::zeros(m, 0, pres.generator_count)
    } else {
        LaurentMatrix::from_rows(m, rows)
    };
    FoxMatrix { matrix, generator_images }
}

/// Multivariable Alexander polynomial in canonical form, variables in
/// component order (`s`, `t` for two components).
pub fn multivariable_alexander(d: &PDCode) -> Result<LaurentPoly, FoxError> {
    let found = d.component_count();
    if found < 2 {
        return Err(DiagramError::ComponentCount { expected: 2, found }.into());
    }
    let w = wirtinger(d);
    alexander_matrix(&w.presentation, &w.meridians).polynomial_from_column(0)
}

/// One-variable Alexander polynomial of a knot, normalized, with
/// `|Δ(1)| = 1` checked.
pub fn knot_alexander(d: &PDCode) -> Result<LaurentPoly, FoxError> {
    let found = d.component_count();
    if found != 1 {
        return Err(DiagramError::ComponentCount { expected: 1, found }.into());
    }
    let w = wirtinger(d);
    let p = alexander_matrix(&w.presentation, &w.meridians).polynomial_from_column(0)?;
    let at_one: BigInt = p.terms().map(|(_, c)| c.clone()).sum();
    if at_one != BigInt::one() && at_one != -BigInt::one() {
        return Err(FoxError::NotUnitAtOne(p.to_string()));
    }
    Ok(p)
}

/// Knot or link polynomial depending on the component count.
pub fn alexander_polynomial(d: &PDCode) -> Result<LaurentPoly, FoxError> {
    if d.component_count() == 1 {
        knot_alexander(d)
    } else {
        multivariable_alexander(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_laurent;
    use crate::linkdiagram::parse_pd;

    fn two_gen_map() -> MeridianMap {
        MeridianMap { component_count: 2, generator_component: vec![0, 1] }
    }

    #[test]
    fn derivative_base_cases() {
        let ab = two_gen_map();
        assert!(fox_derivative(&[(0, 1)], 0, &ab).is_one());
        assert_eq!(fox_derivative(&[(0, -1)], 0, &ab), LaurentPoly::monomial(2, -1, vec![-1, 0]));
        assert!(fox_derivative(&[(1, 1)], 0, &ab).is_zero());
    }

    #[test]
    fn commutator_derivative() {
        let ab = two_gen_map();
        let w = [(0, 1), (1, 1), (0, -1), (1, -1)];
        assert_eq!(fox_derivative(&w, 0, &ab), parse_laurent("1-t", &["s", "t"]).unwrap());
        assert_eq!(fox_derivative(&w, 1, &ab), parse_laurent("s-1", &["s", "t"]).unwrap());
    }

    #[test]
    fn subsets() {
        assert_eq!(row_subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(row_subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(row_subsets(1, 2).is_empty());
        assert_eq!(row_subsets(4, 3).len(), 4);
    }

    #[test]
    fn knot_polynomials() {
        let trefoil = parse_pd("X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]").unwrap();
        assert_eq!(knot_alexander(&trefoil).unwrap(), parse_laurent("t^2-t+1", &["t"]).unwrap());
        let fig8 = parse_pd("X[4,2,5,1];X[8,6,1,5];X[6,3,7,4];X[2,7,3,8]").unwrap();
        assert_eq!(knot_alexander(&fig8).unwrap(), parse_laurent("t^2-3*t+1", &["t"]).unwrap());
        assert!(knot_alexander(&PDCode::unknot()).unwrap().is_one());
    }

    #[test]
    fn trefoil_matrix_minors() {
        let w = wirtinger(&parse_pd("X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]").unwrap());
        let fm = alexander_matrix(&w.presentation, &w.meridians);
        let expected = parse_laurent("t^2-t+1", &["t"]).unwrap();
        for j in 0..3 {
            let reduced = fm.matrix.minor(Some(0), Some(j));
            assert_eq!(reduced.det().normalize(), expected);
        }
    }

    #[test]
    fn link_polynomials() {
        let hopf = parse_pd("X[4,2,3,1];X[2,4,1,3]").unwrap();
        assert!(multivariable_alexander(&hopf).unwrap().is_one());
        let unlink = parse_pd("X[1,3,2,4];X[2,3,1,4]").unwrap();
        assert_eq!(multivariable_alexander(&unlink), Err(FoxError::Degenerate));
        let l7a5 = parse_pd("X[7,1,8,6];X[1,7,2,14];X[9,3,10,2];X[3,12,4,13];X[11,4,12,5];X[5,9,6,8];X[13,11,14,10]")
            .unwrap();
        let expected = parse_laurent("(s+t-1)*(s*t-s-t)", &["s", "t"]).unwrap().normalize();
        assert_eq!(multivariable_alexander(&l7a5).unwrap(), expected);
    }

    #[test]
    fn row_identity_and_column_independence() {
        let d = parse_pd("X[7,1,8,6];X[1,7,2,14];X[9,3,10,2];X[3,12,4,13];X[11,4,12,5];X[5,9,6,8];X[13,11,14,10]")
            .unwrap();
        let w = wirtinger(&d);
        let fm = alexander_matrix(&w.presentation, &w.meridians);
        assert!(fm.row_identity_residues().iter().all(LaurentPoly::is_zero));
        let first = fm.polynomial_from_column(0).unwrap();
        for j in 1..fm.generator_count() {
            assert_eq!(fm.polynomial_from_column(j).unwrap(), first);
        }
    }

    #[test]
    fn wrong_component_count() {
        let hopf = parse_pd("X[4,2,3,1];X[2,4,1,3]").unwrap();
        assert!(matches!(knot_alexander(&hopf), Err(FoxError::Diagram(_))));
        assert!(matches!(multivariable_alexander(&PDCode::unknot()), Err(FoxError::Diagram(_))));
    }
}
