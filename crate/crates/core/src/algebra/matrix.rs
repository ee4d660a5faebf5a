use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::LaurentPoly;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o += x * a;
                }
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Square or rectangular matrix with Laurent polynomial entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    nvars: usize,
    rows: usize,
    cols: usize,
    data: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(nvars: usize, rows: usize, cols: usize) -> Self {
        Self { nvars, rows, cols, data: vec![LaurentPoly::zero(nvars); rows * cols] }
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<LaurentPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            for p in row {
                assert_eq!(p.nvars(), nvars);
                data.push(p);
            }
        }
        Self { nvars, rows: r, cols: c, data }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Drop one row and one column (either may be `None`).
    pub fn minor(&self, skip_row: Option<usize>, skip_col: Option<usize>) -> Self {
        let rows: Vec<Vec<LaurentPoly>> = (0..self.rows)
            .filter(|&i| Some(i) != skip_row)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| Some(j) != skip_col)
                    .map(|j| self[(i, j)].clone())
                    .collect()
            })
            .collect();
        let cols = self.cols - usize::from(skip_col.is_some_and(|j| j < self.cols));
        let mut m = Self::from_rows(self.nvars, rows);
        m.cols = cols;
        m
    }

    /// Exact determinant by Bareiss elimination over `Z[x^±]`. Each row is
    /// first shifted into the polynomial ring; the shifts are undone at the
    /// end, so the result is the true Laurent determinant.
    pub fn det(&self) -> LaurentPoly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let nv = self.nvars;
        if n == 0 {
            return LaurentPoly::one(nv);
        }
        let mut total_shift = vec![0i32; nv];
        let mut a: Vec<Vec<LaurentPoly>> = Vec::with_capacity(n);
        for i in 0..n {
            let row = self.row(i);
            let mut m = vec![i32::MAX; nv];
            let mut any = false;
            for p in row.iter().filter(|p| !p.is_zero()) {
                any = true;
                for (x, y) in m.iter_mut().zip(p.min_exponents()) {
                    *x = (*x).min(y);
                }
            }
            if !any {
                return LaurentPoly::zero(nv);
            }
            let s: Vec<i32> = m.iter().map(|x| -x).collect();
            for (t, x) in total_shift.iter_mut().zip(&s) {
                *t += x;
            }
            a.push(row.iter().map(|p| p.shift(&s)).collect());
        }
        let mut negate = false;
        let mut prev = LaurentPoly::one(nv);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return LaurentPoly::zero(nv);
                };
                a.swap(k, p);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = super::laurent::poly_div_exact(&v, &prev).expect("Bareiss division is exact");
                }
                a[i][k] = LaurentPoly::zero(nv);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        let back: Vec<i32> = total_shift.iter().map(|x| -x).collect();
        let d = d.shift(&back);
        if negate {
            -d
        } else {
            d
        }
    }

    /// Conjugate transpose with variable inversion (`x ↦ x^{-1}`).
    pub fn involution_transpose(&self) -> Self {
        let mut out = Self::zeros(self.nvars, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].invert_variables();
            }
        }
        out
    }
}

impl Index<(usize, usize)> for LaurentMatrix {
    type Output = LaurentPoly;
    fn index(&self, (i, j): (usize, usize)) -> &LaurentPoly {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for LaurentMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut LaurentPoly {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_laurent;

    fn brute_det(m: &[Vec<i64>]) -> i64 {
        // permutation expansion
        let n = m.len();
        let mut idx: Vec<usize> = (0..n).collect();
        let mut total = 0i64;
        permute(&mut idx, 0, &mut |p| {
            let mut sign = 1;
            for i in 0..n {
                for j in i + 1..n {
                    if p[i] > p[j] {
                        sign = -sign;
                    }
                }
            }
            total += sign * (0..n).map(|i| m[i][p[i]]).product::<i64>();
        });
        total
    }

    fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, f);
            v.swap(k, i);
        }
    }

    #[test]
    fn bareiss_matches_permutation_expansion() {
        let cases = vec![
            vec![vec![2, 4], vec![6, 8]],
            vec![vec![0, 1, 2], vec![3, 0, 5], vec![1, 1, 0]],
            vec![vec![1, 2, 3, 4], vec![0, 0, 1, 7], vec![2, 4, 6, 9], vec![5, -3, 2, 0]],
            vec![vec![1, 2], vec![2, 4]],
        ];
        for c in cases {
            assert_eq!(IntMatrix::from_rows(&c).det(), BigInt::from(brute_det(&c)));
        }
        assert_eq!(IntMatrix::zeros(0, 0).det(), BigInt::one());
    }

    #[test]
    fn laurent_det_with_negative_exponents() {
        let p = |s: &str| parse_laurent(s, &["s", "t"]).unwrap();
        let m = LaurentMatrix::from_rows(
            2,
            vec![vec![p("s^(-1)"), p("t - 1")], vec![p("s*t"), p("t^(-2) + s")]],
        );
        let expected = &(&p("s^(-1)") * &p("t^(-2) + s")) - &(&p("t - 1") * &p("s*t"));
        assert_eq!(m.det(), expected);
    }
}
