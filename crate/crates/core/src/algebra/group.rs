use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Default cap on `|A|` for anything that enumerates the whole group.
pub const DEFAULT_GROUP_BOUND: u64 = 1 << 16;

/// A finite abelian group `Z_{d_1} ⊕ ... ⊕ Z_{d_r}`.
///
/// Elements are exponent tuples reduced mod `d_i`. Whole-group enumeration
/// uses the order with the first coordinate varying fastest, so that for
/// `Z_2 ⊕ Z_2` the elements come out as `(0,0), (1,0), (0,1), (1,1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    orders: Vec<u64>,
}

pub type Element = Vec<u64>;

impl FinAbGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self, AlgebraError> {
        if orders.contains(&0) {
            return Err(AlgebraError::InvalidGroup(format!("cyclic orders must be positive, got {orders:?}")));
        }
        Ok(Self { orders })
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(vec![n]).expect("positive order")
    }

    pub fn trivial() -> Self {
        Self { orders: vec![] }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Exponent of the group (lcm of the cyclic orders).
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |a, b| a.lcm(b))
    }

    pub fn check_bound(&self, bound: u64) -> Result<(), AlgebraError> {
        // overflow-safe product check
        let mut acc: u64 = 1;
        for &d in &self.orders {
            acc = acc.checked_mul(d).ok_or(AlgebraError::BoundExceeded { size: u64::MAX, bound })?;
        }
        if acc > bound {
            return Err(AlgebraError::BoundExceeded { size: acc, bound });
        }
        Ok(())
    }

    pub fn identity(&self) -> Element {
        vec![0; self.orders.len()]
    }

    pub fn reduce(&self, x: &[i64]) -> Element {
        x.iter().zip(&self.orders).map(|(a, &d)| a.rem_euclid(d as i64) as u64).collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Element {
        a.iter().zip(b).zip(&self.orders).map(|((x, y), d)| (x + y) % d).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Element {
        a.iter().zip(&self.orders).map(|(x, d)| (d - x) % d).collect()
    }

    pub fn scale(&self, a: &[u64], k: i64) -> Element {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &d)| ((x as i128 * k as i128).rem_euclid(d as i128)) as u64)
            .collect()
    }

    pub fn is_identity(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn element_order(&self, a: &[u64]) -> u64 {
        a.iter().zip(&self.orders).fold(1, |acc, (&x, &d)| acc.lcm(&(d / d.gcd(&x))))
    }

    /// Position of `a` in the enumeration order.
    pub fn index_of(&self, a: &[u64]) -> usize {
        let mut idx = 0usize;
        let mut stride = 1usize;
        for (&x, &d) in a.iter().zip(&self.orders) {
            idx += x as usize * stride;
            stride *= d as usize;
        }
        idx
    }

    pub fn element_at(&self, mut idx: usize) -> Element {
        let mut out = Vec::with_capacity(self.orders.len());
        for &d in &self.orders {
            out.push((idx % d as usize) as u64);
            idx /= d as usize;
        }
        out
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order() as usize).map(move |i| self.element_at(i))
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.orders.iter().map(|d| format!("Z{d}")).collect();
        f.write_str(&parts.join("+"))
    }
}

/// A character `η: A → S¹` with `η(e_i) = exp(2πi · n_i / d_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    group: FinAbGroup,
    numerators: Vec<u64>,
}

impl Character {
    pub fn new(group: &FinAbGroup, numerators: &[i64]) -> Self {
        Self { group: group.clone(), numerators: group.reduce(numerators) }
    }

    pub fn trivial(group: &FinAbGroup) -> Self {
        Self { group: group.clone(), numerators: group.identity() }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    pub fn is_trivial(&self) -> bool {
        self.numerators.iter().all(|&n| n == 0)
    }

    /// Order of the character as an element of `Hom(A, S¹) ≅ A`.
    pub fn order(&self) -> u64 {
        self.group.element_order(&self.numerators)
    }

    /// `η(a)` as an exact element of `Q/Z`, normalized into `[0, 1)`.
    pub fn value(&self, a: &[u64]) -> Ratio<i64> {
        let mut acc = Ratio::zero();
        for ((&n, &x), &d) in self.numerators.iter().zip(a).zip(self.group.orders()) {
            acc += Ratio::new((n * x % d) as i64, d as i64);
        }
        frac(acc)
    }

    /// Same as [`Character::value`] for an unreduced integer vector.
    pub fn value_of_vector(&self, v: &[i64]) -> Ratio<i64> {
        self.value(&self.group.reduce(v))
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: Ratio<i64>) -> Ratio<i64> {
    let f = x - x.floor();
    if f < Ratio::zero() {
        f + 1
    } else {
        f
    }
}

/// All `|A|` characters of `A`, in the same order as the elements.
pub fn enumerate_characters(group: &FinAbGroup, bound: u64) -> Result<Vec<Character>, AlgebraError> {
    group.check_bound(bound)?;
    Ok(group
        .elements()
        .map(|e| Character { group: group.clone(), numerators: e })
        .collect())
}

/// A homomorphism `Z^m → A`, given by the images of the standard basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupMap {
    target: FinAbGroup,
    images: Vec<Element>,
}

impl GroupMap {
    pub fn new(target: FinAbGroup, images: Vec<Element>) -> Result<Self, AlgebraError> {
        for im in &images {
            if im.len() != target.rank() || im.iter().zip(target.orders()).any(|(x, d)| x >= d) {
                return Err(AlgebraError::InvalidGroup(format!("image {im:?} is not an element of {target}")));
            }
        }
        Ok(Self { target, images })
    }

    /// The admissible map `Z² → Z_k ⊕ Z_l`, `(x, y) ↦ (x mod k, y mod l)`.
    /// A factor of order 1 is dropped from the target.
    pub fn admissible(k: u64, l: u64) -> Result<Self, AlgebraError> {
        if k == 0 || l == 0 {
            return Err(AlgebraError::InvalidGroup("admissible factors must be positive".into()));
        }
        let mut orders = Vec::new();
        let mut s = Vec::new();
        let mut t = Vec::new();
        if k > 1 {
            orders.push(k);
            s.push(1);
            t.push(0);
        }
        if l > 1 {
            orders.push(l);
            s.push(0);
            t.push(1);
        }
        Self::new(FinAbGroup::new(orders)?, vec![s, t])
    }

    /// The cyclic map `Z → Z_n` used for knot covers.
    pub fn cyclic(n: u64) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::InvalidGroup("cyclic order must be positive".into()));
        }
        if n == 1 {
            return Self::new(FinAbGroup::trivial(), vec![vec![]]);
        }
        Self::new(FinAbGroup::cyclic(n), vec![vec![1]])
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn source_rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn apply(&self, v: &[i64]) -> Element {
        assert_eq!(v.len(), self.images.len());
        let mut acc = vec![0i64; self.target.rank()];
        for (&c, im) in v.iter().zip(&self.images) {
            for (a, &x) in acc.iter_mut().zip(im) {
                *a += c * x as i64;
            }
        }
        self.target.reduce(&acc)
    }

    pub fn is_surjective(&self) -> bool {
        // the subgroup generated by the images must be everything
        let n = self.target.order() as usize;
        let mut seen = vec![false; n];
        let mut stack = vec![self.target.identity()];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for im in &self.images {
                let y = self.target.add(&x, im);
                let i = self.target.index_of(&y);
                if !seen[i] {
                    seen[i] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == n
    }
}

/// Admissible targets `Z_{p^a} ⊕ Z_{p^b}` with `a ≥ b ≥ 0`, `a ≥ 1`,
/// `p^(a+b) ≤ cap`, ordered by `|A|` and then by the smaller factor.
pub fn admissible_maps(p: u64, cap: u64) -> Result<Vec<GroupMap>, AlgebraError> {
    if !is_prime(p) {
        return Err(AlgebraError::InvalidGroup(format!("{p} is not prime")));
    }
    let mut out = Vec::new();
    let mut total = 1u32;
    while p.checked_pow(total).is_some_and(|v| v <= cap) {
        for b in 0..=total / 2 {
            let a = total - b;
            out.push((total, b, a));
        }
        total += 1;
    }
    out.sort();
    out.into_iter()
        .map(|(_, b, a)| GroupMap::admissible(p.pow(a), p.pow(b)))
        .collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// If `n = q^k` for a prime `q`, return `(q, k)`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let q = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(q) {
        m /= q;
        k += 1;
    }
    (m == 1).then_some((q, k))
}
