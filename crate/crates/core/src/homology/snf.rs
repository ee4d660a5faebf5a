use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::IntMatrix;

/// Which unimodular transforms to record.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Track {
    pub left: bool,
    pub right: bool,
}

impl Track {
    pub const NONE: Track = Track { left: false, right: false };
    pub const BOTH: Track = Track { left: true, right: true };
}

/// `D = U·M·V` with `U`, `V` unimodular and `d_1 | d_2 | …` on the diagonal.
/// `u_inv` and `v_inv` are kept alongside so that `M = U⁻¹·D·V⁻¹`.
#[derive(Clone, Debug)]
pub struct SNFResult {
    pub rows: usize,
    pub cols: usize,
    /// the `min(rows, cols)` diagonal entries, nonnegative
    pub diagonal: Vec<BigInt>,
    pub u: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
}

impl SNFResult {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    pub fn d_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.rows, self.cols);
        for (i, x) in self.diagonal.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect()
    }
}

/// Arithmetic the elimination needs. `i64` reports overflow through `None`;
/// `BigInt` never fails.
trait Entry: Clone + PartialEq + Zero + One {
    fn mag_cmp(&self, other: &Self) -> Ordering;
    fn quot(&self, d: &Self) -> Self;
    fn is_neg(&self) -> bool;
    fn negated(&self) -> Option<Self>;
    /// `self - q·b`
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    fn divides(&self, other: &Self) -> bool;
    fn big(&self) -> BigInt;
}

impl Entry for i64 {
    fn mag_cmp(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn negated(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*b)?)
    }
    fn divides(&self, other: &Self) -> bool {
        other % self == 0
    }
    fn big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn mag_cmp(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn negated(&self) -> Option<Self> {
        Some(-self)
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn divides(&self, other: &Self) -> bool {
        other.is_multiple_of(self)
    }
    fn big(&self) -> BigInt {
        self.clone()
    }
}

type Dense<T> = Vec<Vec<T>>;

fn identity<T: Entry>(n: usize) -> Dense<T> {
    (0..n)
        .map(|i| {
            let mut row = vec![T::zero(); n];
            row[i] = T::one();
            row
        })
        .collect()
}

fn to_int_matrix<T: Entry>(m: &Dense<T>, cols: usize) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(Entry::big).collect()).collect();
    if rows.is_empty() {
        return IntMatrix::zeros(0, cols);
    }
    IntMatrix::from_rows(&rows)
}

/// `row_dst -= q·row_src`
fn row_axpy<T: Entry>(m: &mut Dense<T>, dst: usize, src: usize, q: &T) -> Option<()> {
    let (a, b) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        if !y.is_zero() {
            *x = x.sub_mul(q, y)?;
        }
    }
    Some(())
}

/// `col_dst -= q·col_src`
fn col_axpy<T: Entry>(m: &mut Dense<T>, dst: usize, src: usize, q: &T) -> Option<()> {
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            row[dst] = row[dst].sub_mul(q, &row[src])?;
        }
    }
    Some(())
}

fn swap_cols<T>(m: &mut Dense<T>, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

struct State<T> {
    a: Dense<T>,
    u: Option<Dense<T>>,
    u_inv: Option<Dense<T>>,
    v: Option<Dense<T>>,
    v_inv: Option<Dense<T>>,
}

impl<T: Entry> State<T> {
    fn row_op(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        row_axpy(&mut self.a, dst, src, q)?;
        if let Some(u) = self.u.as_mut() {
            row_axpy(u, dst, src, q)?;
        }
        if let Some(ui) = self.u_inv.as_mut() {
            col_axpy(ui, src, dst, &q.negated()?)?;
        }
        Some(())
    }

    fn col_op(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        col_axpy(&mut self.a, dst, src, q)?;
        if let Some(v) = self.v.as_mut() {
            col_axpy(v, dst, src, q)?;
        }
        if let Some(vi) = self.v_inv.as_mut() {
            row_axpy(vi, src, dst, &q.negated()?)?;
        }
        Some(())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = self.u.as_mut() {
            u.swap(i, j);
        }
        if let Some(ui) = self.u_inv.as_mut() {
            swap_cols(ui, i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        swap_cols(&mut self.a, i, j);
        if let Some(v) = self.v.as_mut() {
            swap_cols(v, i, j);
        }
        if let Some(vi) = self.v_inv.as_mut() {
            vi.swap(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) -> Option<()> {
        for x in self.a[i].iter_mut() {
            *x = x.negated()?;
        }
        if let Some(u) = self.u.as_mut() {
            for x in u[i].iter_mut() {
                *x = x.negated()?;
            }
        }
        if let Some(ui) = self.u_inv.as_mut() {
            for row in ui.iter_mut() {
                row[i] = row[i].negated()?;
            }
        }
        Some(())
    }
}

fn smallest_in<T: Entry>(a: &Dense<T>, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, j) in cells {
        let x = &a[i][j];
        if x.is_zero() {
            continue;
        }
        match best {
            Some((bi, bj)) if x.mag_cmp(&a[bi][bj]) != Ordering::Less => {}
            _ => best = Some((i, j)),
        }
    }
    best
}

fn run<T: Entry>(input: Dense<T>, rows: usize, cols: usize, track: Track) -> Option<SNFResult> {
    let mut s = State {
        a: input,
        u: track.left.then(|| identity(rows)),
        u_inv: track.left.then(|| identity(rows)),
        v: track.right.then(|| identity(cols)),
        v_inv: track.right.then(|| identity(cols)),
    };
    let n = rows.min(cols);
    for t in 0..n {
        // smallest nonzero entry of the trailing block, lowest row then column
        let Some((pi, pj)) = smallest_in(&s.a, (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)))) else {
            break;
        };
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if s.a[i][t].is_zero() {
                    continue;
                }
                let q = s.a[i][t].quot(&s.a[t][t]);
                s.row_op(i, t, &q)?;
                dirty |= !s.a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if s.a[t][j].is_zero() {
                    continue;
                }
                let q = s.a[t][j].quot(&s.a[t][t]);
                s.col_op(j, t, &q)?;
                dirty |= !s.a[t][j].is_zero();
            }
            if dirty {
                let cells = (t..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
                let (pi, pj) = smallest_in(&s.a, cells).expect("pivot row or column is nonzero");
                s.swap_rows(t, pi);
                s.swap_cols(t, pj);
                continue;
            }
            let p = s.a[t][t].clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s.a[i][j].is_zero() && !p.divides(&s.a[i][j])));
            match offender {
                Some(i) => s.row_op(t, i, &T::one().negated()?)?,
                None => break,
            }
        }
        if s.a[t][t].is_neg() {
            s.negate_row(t)?;
        }
    }
    let diagonal = (0..n).map(|i| s.a[i][i].big()).collect();
    Some(SNFResult {
        rows,
        cols,
        diagonal,
        u: s.u.as_ref().map(|m| to_int_matrix(m, rows)),
        u_inv: s.u_inv.as_ref().map(|m| to_int_matrix(m, rows)),
        v: s.v.as_ref().map(|m| to_int_matrix(m, cols)),
        v_inv: s.v_inv.as_ref().map(|m| to_int_matrix(m, cols)),
    })
}

/// Smith normal form with both transforms recorded.
pub fn smith_normal_form(m: &IntMatrix) -> SNFResult {
    smith_normal_form_tracked(m, Track::BOTH)
}

/// Smith normal form recording only the requested transforms. Runs in
/// machine integers and restarts with big integers on overflow; the result
/// does not depend on which path finished.
pub fn smith_normal_form_tracked(m: &IntMatrix, track: Track) -> SNFResult {
    let (rows, cols) = m.shape();
    let small: Option<Dense<i64>> =
        (0..rows).map(|i| m.row(i).iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>()).collect();
    if let Some(res) = small.and_then(|a| run(a, rows, cols, track)) {
        return res;
    }
    let big: Dense<BigInt> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    run(big, rows, cols, track).expect("big-integer elimination cannot overflow")
}
