use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::snf::{smith_normal_form_tracked, Track};
use super::HomologyError;
use crate::algebra::{apply_rep_to_matrix, to_group_ring, Element, FinAbGroup, GroupMap, IntMatrix, LaurentMatrix, LaurentPoly};
use crate::foxcalc::{alexander_matrix, fox_derivative};
use crate::linkdiagram::{GroupPresentation, MeridianMap, Wirtinger};

/// Cellular chain complex of the cover of the Wirtinger 2-complex induced by
/// `φ ∘ ab`. Chains are row vectors; cell `(j, a)` (generator `j`, deck
/// element `a`) sits at index `j·k + index(a)`.
#[derive(Clone, Debug)]
pub struct CoverComplex {
    pub phi: GroupMap,
    /// `kr × kg`
    pub d2: IntMatrix,
    /// `kg × k`
    pub d1: IntMatrix,
    pub generator_count: usize,
    pub relation_count: usize,
}

impl CoverComplex {
    pub fn deck_group(&self) -> &FinAbGroup {
        self.phi.target()
    }

    pub fn sheets(&self) -> usize {
        self.deck_group().order() as usize
    }

    /// `(generator, deck element)` of a 1-cell index.
    pub fn cell(&self, index: usize) -> (usize, Element) {
        let k = self.sheets();
        (index / k, self.deck_group().element_at(index % k))
    }
}

pub fn cover_chain_complex(
    pres: &GroupPresentation,
    ab: &MeridianMap,
    phi: &GroupMap,
    bound: u64,
) -> Result<CoverComplex, HomologyError> {
    if phi.source_rank() != ab.component_count {
        return Err(HomologyError::RankMismatch { map: phi.source_rank(), components: ab.component_count });
    }
    let fox = alexander_matrix(pres, ab);
    let d2 = apply_rep_to_matrix(&fox.matrix, phi, bound)?;
    let m = ab.component_count;
    let column: Vec<Vec<LaurentPoly>> =
        fox.generator_images.iter().map(|x| vec![x - &LaurentPoly::one(m)]).collect();
    let d1 = apply_rep_to_matrix(&LaurentMatrix::from_rows(m, column), phi, bound)?;
    Ok(CoverComplex { phi: phi.clone(), d2, d1, generator_count: pres.generator_count, relation_count: pres.relations.len() })
}

/// A homology class in the coordinates `Z^b ⊕ ⊕ Z_{e_i}` of a
/// [`CoverHomology`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    /// reduced into `[0, e_i)`
    pub torsion: Vec<BigInt>,
    pub free: Vec<BigInt>,
}

impl HomologyClass {
    pub fn is_zero(&self) -> bool {
        self.torsion.iter().chain(&self.free).all(Zero::is_zero)
    }

    /// Torsion part as machine integers, for evaluating characters.
    pub fn torsion_i64(&self) -> Vec<i64> {
        self.torsion.iter().map(|x| x.to_i64().expect("torsion coordinate fits in i64")).collect()
    }
}

/// A torsion generator written as a 1-chain in the cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionGenerator {
    pub order: BigInt,
    /// `(generator, deck element, coefficient)` with nonzero coefficients
    pub chain: Vec<(usize, Element, BigInt)>,
}

#[derive(Clone, Debug)]
struct Projector {
    u_inv: IntMatrix,
    rank1: usize,
    v2: IntMatrix,
    /// invariant factor of each reduced coordinate; zero for free ones
    factors: Vec<BigInt>,
}

/// `H_1` of a cover: `Z^b ⊕ Z_{e_1} ⊕ … ⊕ Z_{e_s}` with `e_i | e_{i+1}`.
#[derive(Clone, Debug)]
pub struct CoverHomology {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    /// one entry per torsion summand; empty when computed without transforms
    pub generators: Vec<TorsionGenerator>,
    projector: Option<Projector>,
}

impl CoverHomology {
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Torsion subgroup as a finite abelian group.
    pub fn torsion_group(&self) -> Result<FinAbGroup, HomologyError> {
        let orders = self
            .torsion
            .iter()
            .map(|e| e.to_u64().ok_or_else(|| HomologyError::TooLarge(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FinAbGroup::new(orders)?)
    }

    pub fn has_projection(&self) -> bool {
        self.projector.is_some()
    }

    /// Class of a 1-cycle.
    pub fn project(&self, chain: &[BigInt]) -> Result<HomologyClass, HomologyError> {
        let p = self.projector.as_ref().ok_or(HomologyError::NoTransforms)?;
        let y = p.u_inv.left_mul_vec(chain);
        if y[..p.rank1].iter().any(|x| !x.is_zero()) {
            return Err(HomologyError::NotACycle);
        }
        let z = p.v2.left_mul_vec(&y[p.rank1..]);
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        for (x, d) in z.into_iter().zip(&p.factors) {
            if d.is_zero() {
                free.push(x);
            } else if !d.is_one() {
                torsion.push(x.mod_floor(d));
            }
        }
        Ok(HomologyClass { torsion, free })
    }
}

/// `H_1` of the cover. With `generators` set, the unimodular transforms are
/// kept so that torsion generators are written out as chains and arbitrary
/// cycles can be projected; otherwise only the invariant factors of `∂₂`
/// and the rank of `∂₁` are computed.
pub fn homology_of_cover(complex: &CoverComplex, generators: bool) -> CoverHomology {
    let n1 = complex.d1.nrows();
    if !generators {
        let s2 = smith_normal_form_tracked(&complex.d2, Track::NONE);
        let s1 = smith_normal_form_tracked(&complex.d1, Track::NONE);
        return CoverHomology {
            free_rank: n1 - s2.rank() - s1.rank(),
            torsion: s2.torsion(),
            generators: Vec::new(),
            projector: None,
        };
    }
    // cycles: rows rank1.. of U, where U·∂₁·V = D
    let s1 = smith_normal_form_tracked(&complex.d1, Track { left: true, right: false });
    let rank1 = s1.rank();
    let u = s1.u.expect("tracked");
    let u_inv = s1.u_inv.expect("tracked");
    let n = n1 - rank1;
    // boundaries in the cycle basis
    let coords = &complex.d2 * &u_inv;
    let b_rows: Vec<Vec<BigInt>> = (0..coords.nrows()).map(|i| coords.row(i)[rank1..].to_vec()).collect();
    let b = if b_rows.is_empty() { IntMatrix::zeros(0, n) } else { IntMatrix::from_rows(&b_rows) };
    let s2 = smith_normal_form_tracked(&b, Track { left: false, right: true });
    let v2 = s2.v.clone().expect("tracked");
    let v2_inv = s2.v_inv.clone().expect("tracked");
    let mut factors = s2.diagonal.clone();
    factors.resize(n, BigInt::zero());
    let cycle_basis: Vec<Vec<BigInt>> = (rank1..n1).map(|i| u.row(i).to_vec()).collect();
    let cycle_basis = if cycle_basis.is_empty() { IntMatrix::zeros(0, n1) } else { IntMatrix::from_rows(&cycle_basis) };
    let mut torsion_generators = Vec::new();
    for (i, d) in factors.iter().enumerate() {
        if d.is_zero() || d.is_one() {
            continue;
        }
        let chain = cycle_basis.left_mul_vec(v2_inv.row(i));
        let cells = chain
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| {
                let (g, a) = complex.cell(idx);
                (g, a, c.clone())
            })
            .collect();
        torsion_generators.push(TorsionGenerator { order: d.clone(), chain: cells });
    }
    CoverHomology {
        free_rank: factors.iter().filter(|d| d.is_zero()).count(),
        torsion: s2.torsion(),
        generators: torsion_generators,
        projector: Some(Projector { u_inv, rank1, v2, factors }),
    }
}

/// 1-chain of the lift of `w` starting on the identity sheet, translated by
/// the deck element `shift`.
pub fn lift_chain(
    complex: &CoverComplex,
    ab: &MeridianMap,
    w: &[(usize, i8)],
    shift: &[u64],
) -> Result<Vec<BigInt>, HomologyError> {
    let image = complex.phi.apply(&ab.abelianize(w));
    if !complex.deck_group().is_identity(&image) {
        return Err(HomologyError::NotInKernel { image });
    }
    let group = complex.deck_group();
    let k = complex.sheets();
    let mut chain = vec![BigInt::zero(); k * complex.generator_count];
    for j in 0..complex.generator_count {
        let ring = to_group_ring(&fox_derivative(w, j, ab), &complex.phi);
        for (idx, c) in ring.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let target = group.add(&group.element_at(idx), shift);
            chain[j * k + group.index_of(&target)] += c;
        }
    }
    Ok(chain)
}

/// Classes of the `k` lifts of a curve whose image lies in `ker φ`, one per
/// deck translate in element order; the first lift starts on the identity
/// sheet.
pub fn lift_class_of_curve(
    complex: &CoverComplex,
    homology: &CoverHomology,
    ab: &MeridianMap,
    w: &[(usize, i8)],
) -> Result<Vec<HomologyClass>, HomologyError> {
    complex
        .deck_group()
        .elements()
        .map(|b| homology.project(&lift_chain(complex, ab, w, &b)?))
        .collect()
}

/// Basis `{(a, 0), (x, y)}` of the kernel of `Z² → A`, in Hermite form.
fn kernel_lattice(phi: &GroupMap) -> [(i64, i64); 2] {
    let group = phi.target();
    let s = &phi.images()[0];
    let t = &phi.images()[1];
    let a = group.element_order(s) as i64;
    let multiples: Vec<Element> = (0..a).map(|i| group.scale(s, i)).collect();
    let mut y = 1i64;
    loop {
        let ty = group.scale(t, y);
        if let Some(x) = multiples.iter().position(|m| group.is_identity(&group.add(m, &ty))) {
            return [(a, 0), (x as i64, y)];
        }
        y += 1;
    }
}

fn power(word: &[(usize, i8)], n: i64) -> Vec<(usize, i8)> {
    let base: Vec<(usize, i8)> =
        if n >= 0 { word.to_vec() } else { crate::linkdiagram::invert_word(word) };
    base.iter().cycle().take(base.len() * n.unsigned_abs() as usize).copied().collect()
}

/// `H_1(X^φ) / im H_1(Y^φ)` for the boundary torus `Y` of `component`,
/// which for linking number ±1 is the relative group `H_1(X^φ, Y^φ)`.
/// Returns `(free rank, torsion)`.
pub fn relative_homology(
    complex: &CoverComplex,
    homology: &CoverHomology,
    wirtinger: &Wirtinger,
    component: usize,
) -> Result<(usize, Vec<BigInt>), HomologyError> {
    if wirtinger.component_count() != 2 {
        return Err(HomologyError::NotTwoComponents(wirtinger.component_count()));
    }
    let ab = &wirtinger.meridians;
    let (mu, lambda) = wirtinger.peripheral_words(component)?;
    let lk = ab.abelianize(&lambda)[1 - component];
    if lk.abs() != 1 {
        return Err(HomologyError::LinkingNumber(lk));
    }
    // in (own meridian, other meridian) coordinates the torus is spanned by μ and λ^lk
    let mut ordered = complex.phi.images().to_vec();
    if component == 1 {
        ordered.swap(0, 1);
    }
    let local = GroupMap::new(complex.deck_group().clone(), ordered)?;
    let lam = power(&lambda, lk);
    let loops: Vec<Vec<(usize, i8)>> = kernel_lattice(&local)
        .iter()
        .map(|&(x, y)| [power(&mu, x), power(&lam, y)].concat())
        .collect();
    let t = homology.torsion.len();
    let width = t + homology.free_rank;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (i, e) in homology.torsion.iter().enumerate() {
        let mut r = vec![BigInt::zero(); width];
        r[i] = e.clone();
        rows.push(r);
    }
    let identity = complex.deck_group().identity();
    for w in &loops {
        let class = homology.project(&lift_chain(complex, ab, w, &identity)?)?;
        rows.push(class.torsion.into_iter().chain(class.free).collect());
    }
    if width == 0 {
        return Ok((0, Vec::new()));
    }
    let s = smith_normal_form_tracked(&IntMatrix::from_rows(&rows), Track::NONE);
    Ok((width - s.rank(), s.torsion()))
}
