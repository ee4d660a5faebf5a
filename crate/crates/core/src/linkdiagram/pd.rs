use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::DiagramError;

/// Crossing sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    fn from_int(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }
}

/// One crossing `X[a,b,c,d]`: labels counterclockwise starting at the
/// incoming under-strand, so the under-strand runs `a → c`. The over-strand
/// runs `d → b` for a positive crossing and `b → d` for a negative one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub arcs: [u32; 4],
    pub sign: Sign,
}

impl Crossing {
    pub fn under_in(&self) -> u32 {
        self.arcs[0]
    }

    pub fn under_out(&self) -> u32 {
        self.arcs[2]
    }

    pub fn over_in(&self) -> u32 {
        match self.sign {
            Sign::Positive => self.arcs[3],
            Sign::Negative => self.arcs[1],
        }
    }

    pub fn over_out(&self) -> u32 {
        match self.sign {
            Sign::Positive => self.arcs[1],
            Sign::Negative => self.arcs[3],
        }
    }
}

/// An oriented link diagram in planar-diagram form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PDCode {
    crossings: Vec<Crossing>,
    arc_count: u32,
}

/// Component decomposition of the arcs of a diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    /// `arc_component[label - 1]` is the component of arc `label`.
    pub arc_component: Vec<usize>,
    pub count: usize,
}

impl Components {
    pub fn of(&self, arc: u32) -> usize {
        self.arc_component[arc as usize - 1]
    }

    pub fn arcs_of(&self, c: usize) -> Vec<u32> {
        (1..=self.arc_component.len() as u32).filter(|&a| self.of(a) == c).collect()
    }
}

#[derive(Deserialize)]
struct JsonCrossing {
    #[serde(default)]
    sign: Option<i64>,
    arcs: Vec<i64>,
}

#[derive(Deserialize)]
struct JsonDiagram {
    crossings: Vec<JsonCrossing>,
    #[serde(default)]
    arc_count: Option<u32>,
}

fn malformed(crossing: Option<usize>, reason: impl Into<String>) -> DiagramError {
    DiagramError::Malformed { crossing, reason: reason.into() }
}

/// Parse a diagram. Accepts `X[a,b,c,d]` crossings separated by `;` (each
/// optionally prefixed by `+` or `-` to fix its sign), or a JSON document
/// `{"crossings":[{"sign":1,"arcs":[a,b,c,d]}, ...]}`. An empty crossing
/// list denotes the 0-crossing unknot.
pub fn parse_pd(text: &str) -> Result<PDCode, DiagramError> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        return parse_json(trimmed);
    }
    let cleaned: String = trimmed.chars().filter(|c| !c.is_whitespace()).collect();
    let mut raw = Vec::new();
    for (i, piece) in cleaned.split(';').filter(|p| !p.is_empty()).enumerate() {
        let (sign, body) = match piece.chars().next() {
            Some('+') => (Some(Sign::Positive), &piece[1..]),
            Some('-') => (Some(Sign::Negative), &piece[1..]),
            Some('\u{2212}') => (Some(Sign::Negative), &piece['\u{2212}'.len_utf8()..]),
            _ => (None, piece),
        };
        let inner = body
            .strip_prefix("X[")
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| malformed(Some(i), format!("expected X[a,b,c,d], got {piece:?}")))?;
        let labels: Vec<i64> = inner
            .split(',')
            .map(|x| x.parse::<i64>().map_err(|_| malformed(Some(i), format!("non-integer label {x:?}"))))
            .collect::<Result<_, _>>()?;
        raw.push((labels, sign));
    }
    build(raw, None)
}

fn parse_json(text: &str) -> Result<PDCode, DiagramError> {
    let doc: JsonDiagram =
        serde_json::from_str(text).map_err(|e| malformed(None, format!("invalid diagram JSON: {e}")))?;
    let mut raw = Vec::new();
    for (i, c) in doc.crossings.into_iter().enumerate() {
        let sign = match c.sign {
            None => None,
            Some(v) => Some(Sign::from_int(v).ok_or_else(|| malformed(Some(i), format!("sign must be ±1, got {v}")))?),
        };
        raw.push((c.arcs, sign));
    }
    build(raw, doc.arc_count)
}

fn build(raw: Vec<(Vec<i64>, Option<Sign>)>, declared_arcs: Option<u32>) -> Result<PDCode, DiagramError> {
    if raw.is_empty() {
        return match declared_arcs {
            None | Some(1) => Ok(PDCode::unknot()),
            Some(n) => Err(malformed(None, format!("a diagram without crossings has one arc, not {n}"))),
        };
    }
    let mut tuples = Vec::with_capacity(raw.len());
    let mut max_label = 0u32;
    for (i, (labels, sign)) in raw.iter().enumerate() {
        if labels.len() != 4 {
            return Err(malformed(Some(i), format!("crossing has {} labels, expected 4", labels.len())));
        }
        let mut arcs = [0u32; 4];
        for (slot, &l) in arcs.iter_mut().zip(labels) {
            if l < 1 || l > u32::MAX as i64 {
                return Err(malformed(Some(i), format!("label {l} is not a positive integer")));
            }
            *slot = l as u32;
            max_label = max_label.max(l as u32);
        }
        tuples.push((arcs, *sign));
    }
    let arc_count = declared_arcs.unwrap_or(max_label);
    let mut seen: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, (arcs, _)) in tuples.iter().enumerate() {
        for &a in arcs {
            if a > arc_count {
                return Err(malformed(Some(i), format!("label {a} exceeds arc count {arc_count}")));
            }
            seen.entry(a).or_default().push(i);
        }
    }
    for a in 1..=arc_count {
        match seen.get(&a).map(|v| v.as_slice()) {
            Some([_, _]) => {}
            Some(v) => {
                return Err(malformed(Some(v[0]), format!("label {a} appears {} times, expected 2", v.len())));
            }
            None => return Err(malformed(None, format!("label {a} never appears"))),
        }
    }
    let signs = orient(&tuples)?;
    let crossings = tuples.iter().zip(signs).map(|((arcs, _), sign)| Crossing { arcs: *arcs, sign }).collect();
    Ok(PDCode { crossings, arc_count })
}

/// Resolve the direction of every over-strand. Explicit signs are taken as
/// given; the rest are propagated from the under-strands, which are
/// oriented by convention. Components that only ever pass over fall back to
/// the label-order rule (`b = d + 1` or `d > b + 1` means positive).
fn orient(tuples: &[([u32; 4], Option<Sign>)]) -> Result<Vec<Sign>, DiagramError> {
    // incoming[i][pos]: whether the arc at slot pos enters crossing i
    let n = tuples.len();
    let mut incoming: Vec<[Option<bool>; 4]> = vec![[None; 4]; n];
    let mut occurrences: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, (arcs, sign)) in tuples.iter().enumerate() {
        for (pos, &a) in arcs.iter().enumerate() {
            occurrences.entry(a).or_default().push((i, pos));
        }
        incoming[i][0] = Some(true);
        incoming[i][2] = Some(false);
        if let Some(s) = sign {
            let pos_in = matches!(s, Sign::Positive);
            incoming[i][3] = Some(pos_in);
            incoming[i][1] = Some(!pos_in);
        }
    }
    let other = |a: u32, here: (usize, usize)| -> (usize, usize) {
        let occ = &occurrences[&a];
        if occ[0] == here {
            occ[1]
        } else {
            occ[0]
        }
    };
    loop {
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                for pos in [1, 3] {
                    if incoming[i][pos].is_some() {
                        continue;
                    }
                    let (j, q) = other(tuples[i].0[pos], (i, pos));
                    if let Some(d) = incoming[j][q] {
                        let here = !d;
                        incoming[i][pos] = Some(here);
                        incoming[i][4 - pos] = Some(!here);
                        changed = true;
                    }
                }
            }
        }
        let Some(i) = (0..n).find(|&i| incoming[i][1].is_none()) else { break };
        let [_, b, _, d] = tuples[i].0;
        let positive = b == d + 1 || d > b + 1;
        incoming[i][3] = Some(positive);
        incoming[i][1] = Some(!positive);
    }
    // every arc must enter one crossing and leave another
    for (a, occ) in &occurrences {
        let dirs: Vec<bool> = occ.iter().map(|&(i, p)| incoming[i][p].unwrap()).collect();
        if dirs[0] == dirs[1] {
            return Err(malformed(
                Some(occ[0].0),
                format!("inconsistent orientation: arc {a} {} at both ends", if dirs[0] { "enters" } else { "leaves" }),
            ));
        }
    }
    Ok(incoming
        .iter()
        .map(|inc| if inc[3] == Some(true) { Sign::Positive } else { Sign::Negative })
        .collect())
}

impl PDCode {
    /// The 0-crossing unknot with its single arc labelled 1.
    pub fn unknot() -> Self {
        Self { crossings: Vec::new(), arc_count: 1 }
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn arc_count(&self) -> u32 {
        self.arc_count
    }

    pub fn is_unknot_diagram(&self) -> bool {
        self.crossings.is_empty()
    }

    /// The arc that follows `arc` along its component.
    pub fn successor(&self, arc: u32) -> u32 {
        if self.crossings.is_empty() {
            return arc;
        }
        for c in &self.crossings {
            if c.under_in() == arc {
                return c.under_out();
            }
            if c.over_in() == arc {
                return c.over_out();
            }
        }
        unreachable!("validated diagram has an incoming end for every arc")
    }

    /// Components as cycles of the successor relation, numbered in order of
    /// their smallest arc label.
    pub fn components(&self) -> Components {
        let mut next = vec![0u32; self.arc_count as usize + 1];
        if self.crossings.is_empty() {
            next[1] = 1;
        }
        for c in &self.crossings {
            next[c.under_in() as usize] = c.under_out();
            next[c.over_in() as usize] = c.over_out();
        }
        let mut arc_component = vec![usize::MAX; self.arc_count as usize];
        let mut count = 0;
        for start in 1..=self.arc_count {
            if arc_component[start as usize - 1] != usize::MAX {
                continue;
            }
            let mut a = start;
            while arc_component[a as usize - 1] == usize::MAX {
                arc_component[a as usize - 1] = count;
                a = next[a as usize];
            }
            count += 1;
        }
        Components { arc_component, count }
    }

    pub fn component_count(&self) -> usize {
        self.components().count
    }

    /// Half the signed count of crossings between components `i` and `j`.
    pub fn linking_number(&self, i: usize, j: usize) -> Result<i64, DiagramError> {
        let comps = self.components();
        for c in [i, j] {
            if c >= comps.count {
                return Err(DiagramError::NoSuchComponent { index: c, count: comps.count });
            }
        }
        if i == j {
            return Err(DiagramError::SameComponent(i));
        }
        let total: i64 = self
            .crossings
            .iter()
            .filter(|c| {
                let u = comps.of(c.under_in());
                let o = comps.of(c.over_in());
                (u == i && o == j) || (u == j && o == i)
            })
            .map(|c| c.sign.value())
            .sum();
        if total % 2 != 0 {
            return Err(malformed(None, format!("odd signed crossing count {total} between components {i} and {j}")));
        }
        Ok(total / 2)
    }

    /// Same diagram with the orientation of component `c` reversed.
    pub fn with_reversed_component(&self, c: usize) -> Result<Self, DiagramError> {
        let comps = self.components();
        if c >= comps.count {
            return Err(DiagramError::NoSuchComponent { index: c, count: comps.count });
        }
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                let under = comps.of(x.under_in()) == c;
                let over = comps.of(x.over_in()) == c;
                let [a, b, cc, d] = x.arcs;
                let arcs = if under { [cc, d, a, b] } else { x.arcs };
                let sign = if under != over { x.sign.flip() } else { x.sign };
                Crossing { arcs, sign }
            })
            .collect();
        Ok(Self { crossings, arc_count: self.arc_count })
    }

    /// Text form, signs always explicit.
    pub fn to_text(&self) -> String {
        self.crossings
            .iter()
            .map(|c| {
                let s = if c.sign == Sign::Positive { '+' } else { '-' };
                format!("{s}X[{},{},{},{}]", c.arcs[0], c.arcs[1], c.arcs[2], c.arcs[3])
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOPF: &str = "X[4,2,3,1];X[2,4,1,3]";
    const TREFOIL: &str = "X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]";

    /// Oracle: every label in 1..=n occurs exactly twice.
    fn labels_twice(d: &PDCode) -> bool {
        let mut count = vec![0; d.arc_count() as usize + 1];
        for c in d.crossings() {
            for &a in &c.arcs {
                count[a as usize] += 1;
            }
        }
        count[1..].iter().all(|&k| k == 2)
    }

    /// Oracle: follow successors from every arc and collect the cycles.
    fn trace_cycles(d: &PDCode) -> Vec<Vec<u32>> {
        let mut seen = vec![false; d.arc_count() as usize + 1];
        let mut out = Vec::new();
        for a in 1..=d.arc_count() {
            if seen[a as usize] {
                continue;
            }
            let mut cyc = vec![];
            let mut x = a;
            while !seen[x as usize] {
                seen[x as usize] = true;
                cyc.push(x);
                x = d.successor(x);
            }
            assert_eq!(x, a, "successor relation must close up into a cycle");
            out.push(cyc);
        }
        out
    }

    #[test]
    fn hopf_parses_with_two_components() {
        let d = parse_pd(HOPF).unwrap();
        assert_eq!(d.crossings().len(), 2);
        assert_eq!(d.arc_count(), 4);
        assert!(labels_twice(&d));
        let cycles = trace_cycles(&d);
        assert_eq!(cycles.len(), 2);
        assert!(cycles.iter().all(|c| c.len() == 2));
        let comps = d.components();
        assert_eq!(comps.count, 2);
        assert_eq!(comps.arcs_of(0), vec![1, 2]);
        assert_eq!(comps.arcs_of(1), vec![3, 4]);
    }

    #[test]
    fn trefoil_is_one_component() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(trace_cycles(&d).len(), 1);
        assert_eq!(d.component_count(), 1);
    }

    #[test]
    fn unknot_special_case() {
        let d = parse_pd("").unwrap();
        assert!(d.is_unknot_diagram());
        assert_eq!(d.arc_count(), 1);
        assert_eq!(d.component_count(), 1);
        let j = parse_pd(r#"{"crossings":[],"arc_count":1}"#).unwrap();
        assert_eq!(j, d);
        assert!(parse_pd(r#"{"crossings":[],"arc_count":3}"#).is_err());
    }

    #[test]
    fn malformed_inputs_name_the_crossing() {
        match parse_pd("X[1,3,2,4];X[2,5,1,3]") {
            Err(DiagramError::Malformed { crossing: Some(_), reason }) => assert!(reason.contains("label 4")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_pd("X[1,2,3]"), Err(DiagramError::Malformed { crossing: Some(0), .. })));
        assert!(matches!(parse_pd("X[1,a,2,2]"), Err(DiagramError::Malformed { crossing: Some(0), .. })));
        assert!(parse_pd("X[1,3,2,4];X[2,3,1,5]").is_err());
        assert!(parse_pd("Y[1,1,2,2]").is_err());
    }

    #[test]
    fn hopf_linking_numbers() {
        let d = parse_pd(HOPF).unwrap();
        assert_eq!(d.linking_number(0, 1).unwrap(), 1);
        assert_eq!(d.linking_number(1, 0).unwrap(), 1);
        assert!(d.crossings().iter().all(|c| c.sign == Sign::Positive));
        let r = d.with_reversed_component(1).unwrap();
        assert_eq!(r.linking_number(0, 1).unwrap(), -1);
        assert!(matches!(d.linking_number(1, 1), Err(DiagramError::SameComponent(1))));
        assert!(matches!(d.linking_number(0, 2), Err(DiagramError::NoSuchComponent { .. })));
    }

    #[test]
    fn split_unlink_has_linking_number_zero() {
        // one component passes under the other twice with opposite signs
        let d = parse_pd("X[1,3,2,4];X[2,3,1,4]").unwrap();
        assert_eq!(d.component_count(), 2);
        assert_eq!(d.linking_number(0, 1).unwrap(), 0);
    }

    #[test]
    fn explicit_signs_must_be_consistent() {
        assert!(parse_pd("+X[4,2,3,1];+X[2,4,1,3]").is_ok());
        let e = parse_pd("+X[4,2,3,1];-X[2,4,1,3]");
        assert!(matches!(e, Err(DiagramError::Malformed { .. })));
        let j = parse_pd(r#"{"crossings":[{"sign":1,"arcs":[4,2,3,1]},{"sign":1,"arcs":[2,4,1,3]}]}"#).unwrap();
        assert_eq!(j, parse_pd(HOPF).unwrap());
    }

    #[test]
    fn inferred_signs_match_table_data() {
        // L7a5, signs as listed by SnapPy for this PD code
        let d = parse_pd("X[7,1,8,6];X[1,7,2,14];X[9,3,10,2];X[3,12,4,13];X[11,4,12,5];X[5,9,6,8];X[13,11,14,10]").unwrap();
        let signs: Vec<i64> = d.crossings().iter().map(|c| c.sign.value()).collect();
        assert_eq!(signs, vec![1, 1, 1, -1, -1, 1, 1]);
    }

    #[test]
    fn text_round_trip_keeps_signs() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(parse_pd(&d.to_text()).unwrap(), d);
    }
}
