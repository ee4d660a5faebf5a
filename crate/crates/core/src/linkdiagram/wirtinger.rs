use super::pd::{Components, PDCode};
use super::DiagramError;

/// A word in the free group: `(generator, ±1)` letters, read left to right.
pub type Word = Vec<(usize, i8)>;

pub fn invert_word(w: &[(usize, i8)]) -> Word {
    w.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

/// Free reduction (cancel adjacent `g g^{-1}`).
pub fn reduce_word(w: &[(usize, i8)]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &(g, e) in w {
        if let Some(&(h, f)) = out.last() {
            if h == g && f == -e {
                out.pop();
                continue;
            }
        }
        out.push((g, e));
    }
    out
}

/// A finitely presented group with generators tagged by link component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generator_count: usize,
    pub relations: Vec<Word>,
    /// Component of each generator.
    pub generator_component: Vec<usize>,
    /// Diagram arcs (PD labels) making up each Wirtinger generator.
    pub generator_arcs: Vec<Vec<u32>>,
}

/// Abelianization `F(g_1..g_n) → Z^m` sending each generator to the
/// standard basis vector of its component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeridianMap {
    pub component_count: usize,
    pub generator_component: Vec<usize>,
}

impl MeridianMap {
    pub fn image(&self, g: usize) -> Vec<i64> {
        let mut v = vec![0; self.component_count];
        v[self.generator_component[g]] = 1;
        v
    }

    pub fn abelianize(&self, w: &[(usize, i8)]) -> Vec<i64> {
        let mut v = vec![0; self.component_count];
        for &(g, e) in w {
            v[self.generator_component[g]] += e as i64;
        }
        v
    }
}

/// Wirtinger data for a diagram: the presentation, the abelianization, and
/// the bookkeeping needed to read off peripheral words.
#[derive(Clone, Debug)]
pub struct Wirtinger {
    pub presentation: GroupPresentation,
    pub meridians: MeridianMap,
    diagram: PDCode,
    components: Components,
    /// generator of each arc label (index `label - 1`)
    arc_generator: Vec<usize>,
    /// component relabelling applied on top of the smallest-label order
    perm: Vec<usize>,
}

/// One generator per Wirtinger arc (maximal run of PD arcs joined through
/// over-crossings), one relation per crossing. At a crossing with
/// over-generator `y`, incoming under-generator `x` and outgoing `x'`, the
/// relation is `y^ε x y^{-ε} x'^{-1}` where `ε` is the crossing sign.
pub fn wirtinger(d: &PDCode) -> Wirtinger {
    build(d, None)
}

/// As [`wirtinger`], but with the components renumbered: component `i` of
/// the smallest-label order becomes `perm[i]`. Used to swap `s` and `t`.
pub fn wirtinger_with_order(d: &PDCode, perm: &[usize]) -> Result<Wirtinger, DiagramError> {
    let count = d.component_count();
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..count).collect::<Vec<_>>() {
        return Err(DiagramError::BadComponentOrder(perm.to_vec()));
    }
    Ok(build(d, Some(perm)))
}

fn build(d: &PDCode, perm: Option<&[usize]>) -> Wirtinger {
    let comps = d.components();
    let perm: Vec<usize> = perm.map(<[usize]>::to_vec).unwrap_or_else(|| (0..comps.count).collect());
    let n = d.arc_count() as usize;
    // union arcs through over-crossings
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for c in d.crossings() {
        let a = find(&mut parent, c.over_in() as usize - 1);
        let b = find(&mut parent, c.over_out() as usize - 1);
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut root_gen = vec![usize::MAX; n];
    let mut arc_generator = vec![0; n];
    let mut generator_arcs: Vec<Vec<u32>> = Vec::new();
    let mut generator_component = Vec::new();
    for a in 0..n {
        let r = find(&mut parent, a);
        if root_gen[r] == usize::MAX {
            root_gen[r] = generator_arcs.len();
            generator_arcs.push(Vec::new());
            generator_component.push(perm[comps.arc_component[a]]);
        }
        arc_generator[a] = root_gen[r];
        generator_arcs[root_gen[r]].push(a as u32 + 1);
    }
    let gen = |arc: u32| arc_generator[arc as usize - 1];
    let relations = d
        .crossings()
        .iter()
        .map(|c| {
            let e = c.sign.value() as i8;
            let y = gen(c.over_in());
            vec![(y, e), (gen(c.under_in()), 1), (y, -e), (gen(c.under_out()), -1)]
        })
        .collect();
    let presentation = GroupPresentation {
        generator_count: generator_arcs.len(),
        relations,
        generator_component: generator_component.clone(),
        generator_arcs,
    };
    let meridians = MeridianMap { component_count: comps.count, generator_component };
    Wirtinger { presentation, meridians, diagram: d.clone(), components: comps, arc_generator, perm }
}

impl Wirtinger {
    pub fn generator_of_arc(&self, arc: u32) -> usize {
        self.arc_generator[arc as usize - 1]
    }

    pub fn component_count(&self) -> usize {
        self.meridians.component_count
    }

    /// Meridian and zero-framed longitude of component `c` (numbered after
    /// any reordering), as words based at the component's smallest-label
    /// arc. The two words commute in the link group.
    pub fn peripheral_words(&self, c: usize) -> Result<(Word, Word), DiagramError> {
        let count = self.component_count();
        if c >= count {
            return Err(DiagramError::NoSuchComponent { index: c, count });
        }
        let original = self.perm.iter().position(|&p| p == c).unwrap();
        let start = *self.components.arcs_of(original).first().unwrap();
        let x0 = self.generator_of_arc(start);
        // walk the component; each under-passage conjugates by the over-generator
        let mut w: Word = Vec::new();
        let mut arc = start;
        loop {
            if let Some(cr) = self.diagram.crossings().iter().find(|cr| cr.under_in() == arc) {
                let y = self.generator_of_arc(cr.over_in());
                w.insert(0, (y, cr.sign.value() as i8));
            }
            arc = self.diagram.successor(arc);
            if arc == start {
                break;
            }
        }
        let framing: i64 = w
            .iter()
            .filter(|(g, _)| self.meridians.generator_component[*g] == c)
            .map(|&(_, e)| e as i64)
            .sum();
        let correction = if framing >= 0 { -1 } else { 1 };
        let mut longitude: Word = std::iter::repeat_n((x0, correction), framing.unsigned_abs() as usize).collect();
        longitude.extend(w);
        Ok((vec![(x0, 1)], reduce_word(&longitude)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkdiagram::parse_pd;

    #[test]
    fn trefoil_presentation_shape() {
        let w = wirtinger(&parse_pd("X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]").unwrap());
        assert_eq!(w.presentation.generator_count, 3);
        assert_eq!(w.presentation.relations.len(), 3);
        for r in &w.presentation.relations {
            assert_eq!(r.len(), 4);
            assert_eq!(w.meridians.abelianize(r), vec![0]);
        }
    }

    #[test]
    fn hopf_presentation_shape() {
        let w = wirtinger(&parse_pd("X[4,2,3,1];X[2,4,1,3]").unwrap());
        assert_eq!(w.presentation.generator_count, 2);
        assert_eq!(w.presentation.relations.len(), 2);
        assert_eq!(w.presentation.generator_component, vec![0, 1]);
        assert_eq!(w.meridians.image(1), vec![0, 1]);
    }

    #[test]
    fn unknot_presentation() {
        let w = wirtinger(&crate::linkdiagram::PDCode::unknot());
        assert_eq!(w.presentation.generator_count, 1);
        assert!(w.presentation.relations.is_empty());
    }

    #[test]
    fn hopf_longitude_is_the_other_meridian() {
        let w = wirtinger(&parse_pd("X[4,2,3,1];X[2,4,1,3]").unwrap());
        let (mu, lambda) = w.peripheral_words(0).unwrap();
        assert_eq!(mu, vec![(0, 1)]);
        assert_eq!(lambda, vec![(1, 1)]);
        let (_, lambda1) = w.peripheral_words(1).unwrap();
        assert_eq!(lambda1, vec![(0, 1)]);
    }

    #[test]
    fn longitudes_have_linking_number_image() {
        let d = parse_pd("X[7,1,8,6];X[1,7,2,14];X[9,3,10,2];X[3,12,4,13];X[11,4,12,5];X[5,9,6,8];X[13,11,14,10]").unwrap();
        let w = wirtinger(&d);
        for c in 0..2 {
            let (_, l) = w.peripheral_words(c).unwrap();
            let mut expected = vec![0, 0];
            expected[1 - c] = d.linking_number(0, 1).unwrap();
            assert_eq!(w.meridians.abelianize(&l), expected);
        }
    }

    #[test]
    fn swapping_components() {
        let d = parse_pd("X[4,2,3,1];X[2,4,1,3]").unwrap();
        let w = wirtinger_with_order(&d, &[1, 0]).unwrap();
        assert_eq!(w.presentation.generator_component, vec![1, 0]);
        let (mu, _) = w.peripheral_words(0).unwrap();
        assert_eq!(mu, vec![(1, 1)]);
        assert!(wirtinger_with_order(&d, &[0, 0]).is_err());
    }

    #[test]
    fn free_reduction() {
        assert_eq!(reduce_word(&[(0, 1), (1, 1), (1, -1), (0, -1), (2, 1)]), vec![(2, 1)]);
        assert_eq!(invert_word(&[(0, 1), (1, -1)]), vec![(1, 1), (0, -1)]);
    }
}
