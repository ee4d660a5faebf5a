use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{hermitian_signature, SignatureError};
use crate::algebra::IntMatrix;

/// Square integer matrix `V` with `det(V − Vᵀ) = ±1`. A zero matrix (the
/// usual padding for the unknot) is accepted and stored as the empty matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertMatrix {
    #[serde(rename = "V")]
    v: Vec<Vec<i64>>,
}

impl SeifertMatrix {
    pub fn new(v: Vec<Vec<i64>>) -> Result<Self, SignatureError> {
        let n = v.len();
        if v.iter().any(|row| row.len() != n) {
            return Err(SignatureError::NotSquare);
        }
        if v.iter().flatten().all(|&x| x == 0) {
            return Ok(Self { v: Vec::new() });
        }
        let skew: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| v[i][j] - v[j][i]).collect()).collect();
        let det = IntMatrix::from_rows(&skew).det();
        if det.abs() != BigInt::from(1) {
            return Err(SignatureError::NotSeifert(det.to_string()));
        }
        Ok(Self { v })
    }

    pub fn from_json(text: &str) -> Result<Self, SignatureError> {
        let raw: SeifertMatrix = serde_json::from_str(text).map_err(|e| SignatureError::Parse(e.to_string()))?;
        Self::new(raw.v)
    }

    pub fn unknot() -> Self {
        Self { v: Vec::new() }
    }

    /// Trefoil with `σ(e^{2πi/3}) = +2`; its mirror is [`Self::negated`].
    pub fn trefoil() -> Self {
        Self { v: vec![vec![1, -1], vec![0, 1]] }
    }

    pub fn size(&self) -> usize {
        self.v.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.v
    }

    /// `−V`, a Seifert matrix for the mirror image.
    pub fn negated(&self) -> Self {
        Self { v: self.v.iter().map(|r| r.iter().map(|x| -x).collect()).collect() }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.size(), other.size());
        let mut v = vec![vec![0; a + b]; a + b];
        for i in 0..a {
            v[i][..a].copy_from_slice(&self.v[i]);
        }
        for i in 0..b {
            v[a + i][a..].copy_from_slice(&other.v[i]);
        }
        Self { v }
    }

    /// `(1 − ω)V + (1 − ω̄)Vᵀ`.
    pub fn hermitian_at(&self, omega: Complex64) -> DMatrix<Complex64> {
        let n = self.size();
        let a = Complex64::new(1.0, 0.0) - omega;
        let b = a.conj();
        DMatrix::from_fn(n, n, |i, j| a * self.v[i][j] as f64 + b * self.v[j][i] as f64)
    }
}

fn check_unit(omega: Complex64) -> Result<(), SignatureError> {
    if (omega.norm() - 1.0).abs() > 1e-9 {
        return Err(SignatureError::NotUnit(omega.norm()));
    }
    Ok(())
}

/// `σ(K, ω)`, the signature of `(1 − ω)V + (1 − ω̄)Vᵀ`; zero at `ω = 1`.
pub fn levine_tristram(v: &SeifertMatrix, omega: Complex64) -> Result<i64, SignatureError> {
    check_unit(omega)?;
    if (omega - 1.0).norm() < 1e-12 {
        return Ok(0);
    }
    let (sig, singular) = hermitian_signature(&v.hermitian_at(omega));
    if singular {
        return Err(SignatureError::SingularAtOmega { re: omega.re, im: omega.im });
    }
    Ok(sig)
}

/// `σ(K, e^{2πi·num/den})`.
pub fn levine_tristram_at_root(v: &SeifertMatrix, num: i64, den: i64) -> Result<i64, SignatureError> {
    if num.rem_euclid(den) == 0 {
        return Ok(0);
    }
    levine_tristram(v, Complex64::from_polar(1.0, 2.0 * PI * num as f64 / den as f64))
}

/// Average of `σ(K, e^{iθ})` over the midpoints `θ = 2π(j + ½)/N`, skipping
/// the points where the form is singular.
pub fn integral_signature(v: &SeifertMatrix, resolution: usize) -> Result<f64, SignatureError> {
    if resolution < 64 {
        return Err(SignatureError::Resolution { given: resolution, min: 64 });
    }
    let samples: Vec<Option<i64>> = (0..resolution)
        .into_par_iter()
        .map(|j| {
            let theta = 2.0 * PI * (j as f64 + 0.5) / resolution as f64;
            let (sig, singular) = hermitian_signature(&v.hermitian_at(Complex64::from_polar(1.0, theta)));
            (!singular).then_some(sig)
        })
        .collect();
    let kept: Vec<i64> = samples.into_iter().flatten().collect();
    if kept.is_empty() {
        return Ok(0.0);
    }
    Ok(kept.iter().sum::<i64>() as f64 / kept.len() as f64)
}

/// `det(V − tVᵀ)` evaluated at a point, for locating signature jumps.
pub fn alexander_at(v: &SeifertMatrix, t: Complex64) -> Complex64 {
    let n = v.size();
    let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(v.v[i][j] as f64, 0.0) - t * v.v[j][i] as f64);
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    m.determinant()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_eight() -> SeifertMatrix {
        SeifertMatrix::new(vec![vec![1, -1], vec![0, -1]]).unwrap()
    }

    fn stevedore() -> SeifertMatrix {
        SeifertMatrix::new(vec![vec![0, 1], vec![2, -1]]).unwrap()
    }

    #[test]
    fn trefoil_values() {
        let v = SeifertMatrix::trefoil();
        assert_eq!(levine_tristram_at_root(&v, 1, 3).unwrap(), 2);
        assert_eq!(levine_tristram_at_root(&v, 2, 3).unwrap(), 2);
        assert_eq!(levine_tristram_at_root(&v, 0, 3).unwrap(), 0);
        assert_eq!(levine_tristram(&v, Complex64::new(1.0, 0.0)).unwrap(), 0);
        assert_eq!(levine_tristram_at_root(&v.negated(), 1, 3).unwrap(), -2);
        assert_eq!(levine_tristram_at_root(&v, 1, 12).unwrap(), 0);
    }

    #[test]
    fn validation() {
        assert!(matches!(SeifertMatrix::new(vec![vec![1, 0], vec![0, 1]]), Err(SignatureError::NotSeifert(_))));
        assert!(matches!(SeifertMatrix::new(vec![vec![1, 0]]), Err(SignatureError::NotSquare)));
        assert_eq!(SeifertMatrix::new(vec![vec![0]]).unwrap(), SeifertMatrix::unknot());
        assert!(SeifertMatrix::from_json(r#"{"V": [[1, -1], [0, 1]]}"#).unwrap() == SeifertMatrix::trefoil());
        assert!(matches!(levine_tristram(&SeifertMatrix::trefoil(), Complex64::new(2.0, 0.0)), Err(SignatureError::NotUnit(_))));
    }

    #[test]
    fn singular_at_alexander_root() {
        let v = SeifertMatrix::trefoil();
        let err = levine_tristram_at_root(&v, 1, 6).unwrap_err();
        assert!(matches!(err, SignatureError::SingularAtOmega { .. }));
    }

    #[test]
    fn unknot_is_zero() {
        for j in 1..12 {
            assert_eq!(levine_tristram_at_root(&SeifertMatrix::unknot(), j, 12).unwrap(), 0);
        }
        assert_eq!(integral_signature(&SeifertMatrix::unknot(), 64).unwrap(), 0.0);
    }

    #[test]
    fn integrals() {
        let v = SeifertMatrix::trefoil();
        let integral = integral_signature(&v, 4096).unwrap();
        assert!((integral - 4.0 / 3.0).abs() < 0.05, "{integral}");
        assert_eq!(integral_signature(&v.direct_sum(&v.negated()), 256).unwrap(), 0.0);
        assert!(integral_signature(&v, 8).is_err());
    }

    #[test]
    fn conjugate_symmetry() {
        for v in [SeifertMatrix::trefoil(), figure_eight(), stevedore()] {
            for j in 1..40 {
                let w = Complex64::from_polar(1.0, 2.0 * PI * (j as f64 + 0.37) / 40.0);
                assert_eq!(levine_tristram(&v, w).unwrap(), levine_tristram(&v, w.conj()).unwrap());
            }
        }
    }

    fn jumps(v: &SeifertMatrix) -> Vec<f64> {
        let n = 2000;
        let sig = |theta: f64| {
            hermitian_signature(&v.hermitian_at(Complex64::from_polar(1.0, theta))).0
        };
        let mut out = Vec::new();
        for j in 0..n {
            let (mut a, mut b) = (2.0 * PI * (j as f64 + 0.5) / n as f64, 2.0 * PI * (j as f64 + 1.5) / n as f64);
            if j + 1 == n || sig(a) == sig(b) {
                continue;
            }
            let sa = sig(a);
            for _ in 0..40 {
                let m = 0.5 * (a + b);
                if sig(m) == sa {
                    a = m;
                } else {
                    b = m;
                }
            }
            out.push(0.5 * (a + b));
        }
        out
    }

    #[test]
    fn jumps_sit_on_alexander_roots() {
        let v = SeifertMatrix::trefoil();
        let js = jumps(&v);
        assert_eq!(js.len(), 2);
        for (theta, expected) in js.iter().zip([PI / 3.0, 5.0 * PI / 3.0]) {
            assert!((theta - expected).abs() < 1e-6);
            assert!(alexander_at(&v, Complex64::from_polar(1.0, *theta)).norm() < 1e-5);
        }
        // roots of t² − 3t + 1 are real, so no jumps
        assert!(jumps(&figure_eight()).is_empty());
    }

    #[test]
    fn slice_knot_vanishes_at_prime_power_roots() {
        let v = stevedore();
        for den in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            for num in 1..den {
                assert_eq!(levine_tristram_at_root(&v, num, den).unwrap(), 0, "{num}/{den}");
            }
        }
    }
}
