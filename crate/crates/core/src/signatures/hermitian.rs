use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{hermitian_signature, SignatureError};

/// Largest group rank for torus integration.
pub const MAX_TORUS_RANK: usize = 4;

const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Laurent polynomial in `r` variables with complex coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ComplexLaurent {
    terms: BTreeMap<Vec<i32>, Complex64>,
}

impl ComplexLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64, rank: usize) -> Self {
        Self::monomial(c, vec![0; rank])
    }

    pub fn monomial(c: Complex64, exponents: Vec<i32>) -> Self {
        let mut p = Self::zero();
        p.add_term(exponents, c);
        p
    }

    pub fn add_term(&mut self, exponents: Vec<i32>, c: Complex64) {
        let entry = self.terms.entry(exponents).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Complex64)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1 * c2);
            }
        }
        out
    }

    /// `p̄`: conjugate coefficients and invert every variable.
    pub fn bar(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e.iter().map(|x| -x).collect(), c.conj())).collect() }
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(z).fold(*c, |acc, (&k, zi)| acc * zi.powi(k)))
            .sum()
    }

    fn max_distance(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<&Vec<i32>> = self.terms.keys().chain(other.terms.keys()).collect();
        let zero = Complex64::new(0.0, 0.0);
        keys.into_iter()
            .map(|k| (self.terms.get(k).unwrap_or(&zero) - other.terms.get(k).unwrap_or(&zero)).norm())
            .fold(0.0, f64::max)
    }
}

/// Square matrix over `C[Z^r]`, as plain data; see [`HermitianLaurentMatrix`]
/// for the checked version.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMatrixC {
    pub rank: usize,
    pub entries: Vec<Vec<ComplexLaurent>>,
}

impl LaurentMatrixC {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.size();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(ComplexLaurent::zero(), |acc, k| acc.add(&self.entries[i][k].mul(&other.entries[k][j]))))
                    .collect()
            })
            .collect();
        Self { rank: self.rank, entries }
    }

    /// `M^† = M̄ᵀ`.
    pub fn adjoint(&self) -> Self {
        let n = self.size();
        Self { rank: self.rank, entries: (0..n).map(|i| (0..n).map(|j| self.entries[j][i].bar()).collect()).collect() }
    }

    pub fn eval(&self, z: &[Complex64]) -> DMatrix<Complex64> {
        let n = self.size();
        DMatrix::from_fn(n, n, |i, j| self.entries[i][j].eval(z))
    }
}

/// `P = P^†` over `C[Z^r]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianLaurentMatrix {
    inner: LaurentMatrixC,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff_re: f64,
    coeff_im: f64,
    exponents: Vec<i32>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rank: usize,
    entries: Vec<Vec<Vec<TermJson>>>,
}

impl HermitianLaurentMatrix {
    pub fn new(inner: LaurentMatrixC) -> Result<Self, SignatureError> {
        let n = inner.size();
        if inner.entries.iter().any(|row| row.len() != n) {
            return Err(SignatureError::NotSquare);
        }
        if inner.rank > MAX_TORUS_RANK {
            return Err(SignatureError::RankTooLarge { rank: inner.rank, max: MAX_TORUS_RANK });
        }
        for row in &inner.entries {
            for p in row {
                if p.terms.keys().any(|e| e.len() != inner.rank) {
                    return Err(SignatureError::Parse(format!("exponent vectors must have length {}", inner.rank)));
                }
            }
        }
        for i in 0..n {
            for j in i..n {
                if inner.entries[i][j].max_distance(&inner.entries[j][i].bar()) > HERMITIAN_TOLERANCE {
                    return Err(SignatureError::HermitianViolation { i, j });
                }
            }
        }
        Ok(Self { inner })
    }

    /// Constant real symmetric matrix over `C[Z^rank]`.
    pub fn constant(rank: usize, m: &[Vec<f64>]) -> Result<Self, SignatureError> {
        let entries = m
            .iter()
            .map(|row| row.iter().map(|&x| ComplexLaurent::constant(Complex64::new(x, 0.0), rank)).collect())
            .collect();
        Self::new(LaurentMatrixC { rank, entries })
    }

    /// The hyperbolic matrix `[[0, 1], [1, 0]]`.
    pub fn hyperbolic(rank: usize) -> Self {
        Self::constant(rank, &[vec![0.0, 1.0], vec![1.0, 0.0]]).expect("symmetric")
    }

    pub fn from_json(text: &str) -> Result<Self, SignatureError> {
        let raw: MatrixJson = serde_json::from_str(text).map_err(|e| SignatureError::Parse(e.to_string()))?;
        let entries = raw
            .entries
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|terms| {
                        let mut p = ComplexLaurent::zero();
                        for t in terms {
                            p.add_term(t.exponents, Complex64::new(t.coeff_re, t.coeff_im));
                        }
                        p
                    })
                    .collect()
            })
            .collect();
        Self::new(LaurentMatrixC { rank: raw.rank, entries })
    }

    pub fn to_json(&self) -> String {
        let raw = MatrixJson {
            rank: self.inner.rank,
            entries: self
                .inner
                .entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|p| {
                            p.terms()
                                .map(|(e, c)| TermJson { coeff_re: c.re, coeff_im: c.im, exponents: e.clone() })
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("plain data")
    }

    pub fn rank(&self) -> usize {
        self.inner.rank
    }

    pub fn size(&self) -> usize {
        self.inner.size()
    }

    pub fn matrix(&self) -> &LaurentMatrixC {
        &self.inner
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, SignatureError> {
        if self.rank() != other.rank() {
            return Err(SignatureError::RankMismatch(self.rank(), other.rank()));
        }
        let (a, b) = (self.size(), other.size());
        let mut entries = vec![vec![ComplexLaurent::zero(); a + b]; a + b];
        for i in 0..a {
            for j in 0..a {
                entries[i][j] = self.inner.entries[i][j].clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                entries[a + i][a + j] = other.inner.entries[i][j].clone();
            }
        }
        Ok(Self { inner: LaurentMatrixC { rank: self.rank(), entries } })
    }

    /// `U·P·U^†`.
    pub fn congruent(&self, u: &LaurentMatrixC) -> Result<Self, SignatureError> {
        if u.size() != self.size() || u.rank != self.rank() {
            return Err(SignatureError::RankMismatch(self.rank(), u.rank));
        }
        Self::new(u.mul(&self.inner).mul(&u.adjoint()))
    }

    /// `sign(η(P))` and whether `η(P)` is (numerically) singular.
    pub fn signature_at(&self, angles: &[f64]) -> (i64, bool) {
        let z: Vec<Complex64> = angles.iter().map(|&a| Complex64::from_polar(1.0, a)).collect();
        hermitian_signature(&self.inner.eval(&z))
    }
}

/// `σ(P)` on a midpoint product grid, with the singular points that were
/// skipped.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaResult {
    #[serde(serialize_with = "crate::json::float")]
    pub value: f64,
    pub grid: usize,
    pub points: usize,
    pub skipped: usize,
}

/// Average of `sign(η(P))` over `η` on the grid `θ_i = 2π(j_i + ½)/grid`.
pub fn sigma_integral(p: &HermitianLaurentMatrix, grid: usize) -> Result<SigmaResult, SignatureError> {
    if grid < 8 {
        return Err(SignatureError::Resolution { given: grid, min: 8 });
    }
    let r = p.rank();
    let points = grid.checked_pow(r as u32).ok_or(SignatureError::RankTooLarge { rank: r, max: MAX_TORUS_RANK })?;
    let samples: Vec<Option<i64>> = (0..points)
        .into_par_iter()
        .map(|idx| {
            let mut rest = idx;
            let angles: Vec<f64> = (0..r)
                .map(|_| {
                    let j = rest % grid;
                    rest /= grid;
                    2.0 * PI * (j as f64 + 0.5) / grid as f64
                })
                .collect();
            let (sig, singular) = p.signature_at(&angles);
            (!singular).then_some(sig)
        })
        .collect();
    let kept: Vec<i64> = samples.iter().flatten().copied().collect();
    let skipped = points - kept.len();
    let value = if kept.is_empty() { 0.0 } else { kept.iter().sum::<i64>() as f64 / kept.len() as f64 };
    Ok(SigmaResult { value, grid, points, skipped })
}

/// Tolerance for comparing two `σ` values computed on the same grid.
pub fn sigma_tolerance(grid: usize) -> f64 {
    2.0 / grid as f64 + 0.02
}

/// Outcome of comparing `σ(P ⊕ nB)` with `σ(Q ⊕ n'B)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WittCheck {
    pub left: SigmaResult,
    pub right: SigmaResult,
    #[serde(serialize_with = "crate::json::float")]
    pub tolerance: f64,
    pub agree: bool,
}

/// Stabilize both sides by hyperbolic blocks and compare their `σ`.
pub fn witt_congruent_sigma_check(
    p: &HermitianLaurentMatrix,
    q: &HermitianLaurentMatrix,
    n: usize,
    n_prime: usize,
    grid: usize,
) -> Result<WittCheck, SignatureError> {
    let stabilize = |m: &HermitianLaurentMatrix, k: usize| -> Result<HermitianLaurentMatrix, SignatureError> {
        let b = HermitianLaurentMatrix::hyperbolic(m.rank());
        (0..k).try_fold(m.clone(), |acc, _| acc.direct_sum(&b))
    };
    let left = sigma_integral(&stabilize(p, n)?, grid)?;
    let right = sigma_integral(&stabilize(q, n_prime)?, grid)?;
    let tolerance = sigma_tolerance(grid);
    let agree = (left.value - right.value).abs() <= tolerance;
    Ok(WittCheck { left, right, tolerance, agree })
}
