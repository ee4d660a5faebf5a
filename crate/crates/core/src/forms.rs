//! Nonsingular `Q/Z`-valued linking forms on finite abelian groups, their
//! metabolisers, and prime-power characters vanishing on a subgroup.

use std::collections::HashSet;
use std::fmt;

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{frac, prime_power, AlgebraError, Character, Element, FinAbGroup};

/// Exhaustive searches over the group stop above this order.
pub const FORM_GROUP_BOUND: u64 = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("gram matrix must be {0}×{0}")]
    Shape(usize),
    #[error("gram matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("entry ({i}, {j}) = {value} is not killed by the generator orders")]
    NotWellDefined { i: usize, j: usize, value: String },
    #[error("form is singular: {0:?} pairs trivially with everything")]
    Singular(Element),
    #[error("cannot parse form: {0}")]
    Parse(String),
    #[error("subgroup generator {0:?} is not an element of the group")]
    NotAnElement(Element),
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

/// A symmetric pairing `λ: T × T → Q/Z` given by its values on the standard
/// generators, stored in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingForm {
    group: FinAbGroup,
    gram: Vec<Vec<Ratio<i64>>>,
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    orders: Vec<u64>,
    gram: Vec<Vec<String>>,
}

fn parse_ratio(s: &str) -> Result<Ratio<i64>, FormError> {
    let s = s.trim();
    let bad = || FormError::Parse(format!("bad entry {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(a, b))
        }
        None => Ok(Ratio::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl LinkingForm {
    /// Checks symmetry, well-definedness and nonsingularity.
    pub fn new(group: FinAbGroup, gram: Vec<Vec<Ratio<i64>>>) -> Result<Self, FormError> {
        let r = group.rank();
        if gram.len() != r || gram.iter().any(|row| row.len() != r) {
            return Err(FormError::Shape(r));
        }
        let gram: Vec<Vec<Ratio<i64>>> = gram.into_iter().map(|row| row.into_iter().map(frac).collect()).collect();
        for i in 0..r {
            for j in 0..r {
                if gram[i][j] != gram[j][i] {
                    return Err(FormError::NotSymmetric(i, j));
                }
                let killed = frac(gram[i][j] * Ratio::from_integer(group.orders()[i] as i64));
                if !killed.is_zero() {
                    return Err(FormError::NotWellDefined { i, j, value: gram[i][j].to_string() });
                }
            }
        }
        let form = Self { group, gram };
        form.group.check_bound(FORM_GROUP_BOUND)?;
        for x in form.group.elements().skip(1) {
            if (0..r).all(|i| form.pair_with_generator(&x, i).is_zero()) {
                return Err(FormError::Singular(x));
            }
        }
        Ok(form)
    }

    /// `λ(e_i, e_j) = δ_ij / d_i`.
    pub fn standard(group: &FinAbGroup) -> Self {
        let r = group.rank();
        let gram = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if i == j { Ratio::new(1, group.orders()[i] as i64) } else { Ratio::zero() })
                    .collect()
            })
            .collect();
        Self { group: group.clone(), gram }
    }

    pub fn from_json(text: &str) -> Result<Self, FormError> {
        let raw: FormJson = serde_json::from_str(text).map_err(|e| FormError::Parse(e.to_string()))?;
        let gram = raw
            .gram
            .iter()
            .map(|row| row.iter().map(|s| parse_ratio(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(FinAbGroup::new(raw.orders)?, gram)
    }

    pub fn to_json(&self) -> String {
        let raw = FormJson {
            orders: self.group.orders().to_vec(),
            gram: self
                .gram
                .iter()
                .map(|row| row.iter().map(|x| format!("{}/{}", x.numer(), x.denom())).collect())
                .collect(),
        };
        serde_json::to_string(&raw).expect("plain data")
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn gram(&self) -> &[Vec<Ratio<i64>>] {
        &self.gram
    }

    fn pair_with_generator(&self, x: &[u64], j: usize) -> Ratio<i64> {
        frac(x.iter().enumerate().map(|(i, &a)| self.gram[i][j] * Ratio::from_integer(a as i64)).sum())
    }

    /// `λ(x, y)` in `[0, 1)`.
    pub fn pair(&self, x: &[u64], y: &[u64]) -> Ratio<i64> {
        frac(y.iter().enumerate().map(|(j, &b)| self.pair_with_generator(x, j) * Ratio::from_integer(b as i64)).sum())
    }
}

/// Whether every nonsingular form on `T` has the same metabolisers: true
/// when `T` is cyclic, and when `|T|` is not a square (there are none).
pub fn metabolisers_form_independent(group: &FinAbGroup) -> bool {
    let n = group.order();
    group.orders().iter().filter(|&&d| d > 1).count() <= 1 || n.sqrt() * n.sqrt() != n
}

/// A subgroup, stored as its sorted element list together with generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Subgroup {
    #[serde(skip)]
    group: FinAbGroup,
    pub generators: Vec<Element>,
    pub elements: Vec<Element>,
}

impl Subgroup {
    pub fn generated_by(group: &FinAbGroup, generators: &[Element]) -> Result<Self, FormError> {
        for g in generators {
            if g.len() != group.rank() || g.iter().zip(group.orders()).any(|(x, d)| x >= d) {
                return Err(FormError::NotAnElement(g.clone()));
            }
        }
        let mut seen = vec![false; group.order() as usize];
        seen[0] = true;
        let mut stack = vec![group.identity()];
        while let Some(x) = stack.pop() {
            for g in generators {
                let y = group.add(&x, g);
                let i = group.index_of(&y);
                if !seen[i] {
                    seen[i] = true;
                    stack.push(y);
                }
            }
        }
        Ok(Self::from_mask(group, &seen, generators.to_vec()))
    }

    fn from_mask(group: &FinAbGroup, mask: &[bool], generators: Vec<Element>) -> Self {
        let elements = mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| group.element_at(i)).collect();
        Self { group: group.clone(), generators, elements }
    }

    pub fn trivial(group: &FinAbGroup) -> Self {
        Self { group: group.clone(), generators: Vec::new(), elements: vec![group.identity()] }
    }

    pub fn whole(group: &FinAbGroup) -> Self {
        let generators = (0..group.rank())
            .filter(|&i| group.orders()[i] > 1)
            .map(|i| {
                let mut e = group.identity();
                e[i] = 1;
                e
            })
            .collect();
        Self { group: group.clone(), generators, elements: group.elements().collect() }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.elements.iter().any(|e| e == x)
    }

    fn indices(&self) -> Vec<usize> {
        self.elements.iter().map(|e| self.group.index_of(e)).collect()
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |e: &Element| {
            if e.len() == 1 {
                e[0].to_string()
            } else {
                format!("({})", e.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
            }
        };
        write!(f, "{{{}}}", self.elements.iter().map(show).collect::<Vec<_>>().join(","))
    }
}

/// `P^⊥ = {y : λ(x, y) = 0 for all x ∈ P}`.
pub fn orthogonal_complement(form: &LinkingForm, p: &Subgroup) -> Result<Subgroup, FormError> {
    let group = form.group();
    group.check_bound(FORM_GROUP_BOUND)?;
    let mask: Vec<bool> =
        group.elements().map(|y| p.generators.iter().all(|x| form.pair(x, &y).is_zero())).collect();
    let mut out = Subgroup::from_mask(group, &mask, Vec::new());
    out.generators = minimal_generators(group, &out.elements);
    Ok(out)
}

/// Greedy generating set: walk the elements in order and keep those not yet
/// in the span.
fn minimal_generators(group: &FinAbGroup, elements: &[Element]) -> Vec<Element> {
    let mut gens: Vec<Element> = Vec::new();
    let mut span = Subgroup::trivial(group);
    for e in elements {
        if !span.contains(e) {
            gens.push(e.clone());
            span = Subgroup::generated_by(group, &gens).expect("elements of the group");
        }
        if span.order() == elements.len() {
            break;
        }
    }
    gens
}

/// All subgroups `P` with `P = P^⊥`, sorted by element list. Empty when
/// `|T|` is not a square.
pub fn enumerate_metabolisers(form: &LinkingForm) -> Result<Vec<Subgroup>, FormError> {
    let group = form.group();
    group.check_bound(FORM_GROUP_BOUND)?;
    let size = group.order();
    let n = (size as f64).sqrt().round() as u64;
    if n * n != size {
        return Ok(Vec::new());
    }
    let k = size as usize;
    // isotropic subgroups are built by joining isotropic cyclic ones
    let mut cyclic: Vec<Vec<bool>> = Vec::new();
    let mut cyclic_gen: Vec<Element> = Vec::new();
    let mut seen_cyclic: HashSet<Vec<bool>> = HashSet::new();
    for x in group.elements() {
        if !form.pair(&x, &x).is_zero() {
            continue;
        }
        let s = Subgroup::generated_by(group, std::slice::from_ref(&x))?;
        let mut mask = vec![false; k];
        for i in s.indices() {
            mask[i] = true;
        }
        if seen_cyclic.insert(mask.clone()) {
            cyclic.push(mask);
            cyclic_gen.push(x);
        }
    }
    let mut all: HashSet<Vec<bool>> = HashSet::new();
    let mut frontier: Vec<(Vec<bool>, Vec<Element>)> = Vec::new();
    let mut trivial = vec![false; k];
    trivial[0] = true;
    all.insert(trivial.clone());
    frontier.push((trivial, Vec::new()));
    let elems: Vec<Element> = group.elements().collect();
    let mut found: Vec<Subgroup> = Vec::new();
    while let Some((mask, gens)) = frontier.pop() {
        let members: Vec<usize> = (0..k).filter(|&i| mask[i]).collect();
        if members.len() as u64 == n {
            found.push(Subgroup::from_mask(group, &mask, gens));
            continue;
        }
        for (c, g) in cyclic.iter().zip(&cyclic_gen) {
            if mask[group.index_of(g)] {
                continue;
            }
            // join = {a + b}
            let mut join = vec![false; k];
            for &a in &members {
                for (b, &inc) in c.iter().enumerate() {
                    if inc {
                        join[group.index_of(&group.add(&elems[a], &elems[b]))] = true;
                    }
                }
            }
            let order = join.iter().filter(|&&m| m).count() as u64;
            if order > n || all.contains(&join) {
                continue;
            }
            let mut new_gens = gens.clone();
            new_gens.push(g.clone());
            let isotropic = new_gens.iter().all(|x| new_gens.iter().all(|y| form.pair(x, y).is_zero()));
            all.insert(join.clone());
            if isotropic {
                frontier.push((join, new_gens));
            }
        }
    }
    for p in &mut found {
        p.generators = minimal_generators(group, &p.elements);
    }
    found.sort_by_key(Subgroup::indices);
    Ok(found)
}

/// A character `T → Z_{q^k} ⊂ S¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingCharacter {
    pub character: Character,
    pub order: u64,
}

impl VanishingCharacter {
    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }
}

/// All characters of `T` with values in `Z_{q^k}` that vanish on `P`,
/// trivial character first, then in element order of the numerators.
pub fn characters_vanishing_on(
    group: &FinAbGroup,
    p: &Subgroup,
    q: u64,
    k: u32,
) -> Result<Vec<VanishingCharacter>, FormError> {
    if prime_power(q) != Some((q, 1)) {
        return Err(FormError::NotPrime(q));
    }
    group.check_bound(FORM_GROUP_BOUND)?;
    let modulus = q.checked_pow(k).ok_or(AlgebraError::BoundExceeded { size: u64::MAX, bound: FORM_GROUP_BOUND })?;
    let mut out = Vec::new();
    for nums in group.elements() {
        let chi = Character::new(group, &nums.iter().map(|&x| x as i64).collect::<Vec<_>>());
        let order = chi.order();
        if modulus % order != 0 {
            continue;
        }
        if p.generators.iter().all(|g| chi.value(g).is_zero()) {
            out.push(VanishingCharacter { character: chi, order });
        }
    }
    Ok(out)
}
