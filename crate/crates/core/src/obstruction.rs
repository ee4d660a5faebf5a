//! The satellite signature formula and the scan over admissible covers,
//! metabolisers and prime-power characters that decides whether a satellite
//! link is obstructed from being concordant to the Hopf link.
//!
//! A nonzero `σ(τ(S, χ))` certifies a nonzero Witt class, so a cover where
//! every metaboliser admits such a character obstructs concordance. Vanishing
//! `σ` proves nothing: `NOT-OBSTRUCTED` means inconclusive, not concordant.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::algebra::{admissible_maps, is_prime, prime_power, AlgebraError, Character, FinAbGroup, GroupMap};
use crate::forms::{
    characters_vanishing_on, enumerate_metabolisers, metabolisers_form_independent, FormError, LinkingForm, Subgroup,
};
use crate::homology::{
    cover_chain_complex, homology_of_cover, lift_class_of_curve, CoverComplex, CoverHomology, HomologyClass,
    HomologyError, HomologySummary,
};
use crate::linkdiagram::{parse_pd, wirtinger_with_order, DiagramError, PDCode, Wirtinger, Word};
use crate::signatures::{levine_tristram_at_root, SeifertMatrix, SignatureError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObstructionError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("base link must have 2 components and linking number ±1, found {components} components, lk {lk}")]
    BadBase { components: usize, lk: i64 },
    #[error("infection curve uses generator {0}, which does not exist")]
    NoSuchGenerator(usize),
    #[error("infection curve is not null-homologous: abelianizes to {0:?}")]
    NotNullHomologous(Vec<i64>),
    #[error("torsion group {group} at {cover} has form-dependent metabolisers; supply a linking form")]
    FormRequired { cover: String, group: String },
    #[error("character has {given} numerators but the torsion group has rank {rank}")]
    CharacterShape { given: usize, rank: usize },
    #[error("cannot read scan input: {0}")]
    Input(String),
}

/// Base link, companion knot and infection curve of a satellite `S(L, K, γ)`.
#[derive(Clone, Debug)]
pub struct SatelliteSpec {
    pub base: PDCode,
    /// `σ(τ(L, χ))`, taken to be the same for every `χ`; 0 for a base
    /// declared concordant to the Hopf link
    pub base_sigma: f64,
    pub companion: SeifertMatrix,
    /// word in the Wirtinger generators of the base
    pub gamma: Word,
    /// recorded as asserted by the caller, not checked
    pub gamma_unknotted: bool,
    /// exchange the roles of the two components (`s` ↔ `t`)
    pub swap_components: bool,
}

impl SatelliteSpec {
    pub fn new(base: PDCode, companion: SeifertMatrix, gamma: Word) -> Self {
        Self { base, base_sigma: 0.0, companion, gamma, gamma_unknotted: true, swap_components: false }
    }

    pub fn wirtinger(&self) -> Result<Wirtinger, ObstructionError> {
        let perm: &[usize] = if self.swap_components { &[1, 0] } else { &[0, 1] };
        Ok(wirtinger_with_order(&self.base, perm)?)
    }

    /// Two components, linking number ±1, and `γ` null-homologous.
    pub fn validate(&self) -> Result<Wirtinger, ObstructionError> {
        let components = self.base.component_count();
        if components != 2 {
            return Err(ObstructionError::BadBase { components, lk: 0 });
        }
        let lk = self.base.linking_number(0, 1)?;
        if lk.abs() != 1 {
            return Err(ObstructionError::BadBase { components, lk });
        }
        let w = self.wirtinger()?;
        if let Some(&(g, _)) = self.gamma.iter().find(|(g, _)| *g >= w.presentation.generator_count) {
            return Err(ObstructionError::NoSuchGenerator(g));
        }
        let image = w.meridians.abelianize(&self.gamma);
        if image.iter().any(|&x| x != 0) {
            return Err(ObstructionError::NotNullHomologous(image));
        }
        Ok(w)
    }
}

/// Cover data shared by all characters at one `φ`.
pub struct CoverContext {
    pub phi: GroupMap,
    pub complex: CoverComplex,
    pub homology: CoverHomology,
    pub torsion: FinAbGroup,
    /// classes of the `k` lifts of `γ`, deck translates in element order
    pub lifts: Vec<HomologyClass>,
}

impl CoverContext {
    pub fn new(spec: &SatelliteSpec, phi: &GroupMap, bound: u64) -> Result<Self, ObstructionError> {
        let w = spec.validate()?;
        let complex = cover_chain_complex(&w.presentation, &w.meridians, phi, bound)?;
        let homology = homology_of_cover(&complex, true);
        let torsion = homology.torsion_group()?;
        let lifts = lift_class_of_curve(&complex, &homology, &w.meridians, &spec.gamma)?;
        Ok(Self { phi: phi.clone(), complex, homology, torsion, lifts })
    }
}

/// One evaluation of the satellite formula
/// `σ(τ(S, χ)) = σ(τ(L, χ)) + Σ_i σ(K, ω_i)` with `ω_i = χ([γ̃_i])`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SatelliteSigma {
    /// `χ([γ̃_i])` as fractions of a full turn, `"a/b"`
    pub omegas: Vec<String>,
    pub increments: Vec<i64>,
    pub companion_sum: i64,
    #[serde(serialize_with = "crate::json::float")]
    pub sigma: f64,
}

impl SatelliteSigma {
    pub fn is_nonzero(&self) -> bool {
        self.sigma.abs() > 1e-9
    }
}

fn fraction(r: &Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn satellite_sigma_in(
    ctx: &CoverContext,
    companion: &SeifertMatrix,
    chi: &Character,
    base_sigma: f64,
) -> Result<SatelliteSigma, ObstructionError> {
    if chi.group().rank() != ctx.torsion.rank() {
        return Err(ObstructionError::CharacterShape { given: chi.group().rank(), rank: ctx.torsion.rank() });
    }
    let mut omegas = Vec::with_capacity(ctx.lifts.len());
    let mut increments = Vec::with_capacity(ctx.lifts.len());
    for class in &ctx.lifts {
        let w = chi.value_of_vector(&class.torsion_i64());
        increments.push(levine_tristram_at_root(companion, *w.numer(), *w.denom())?);
        omegas.push(fraction(&w));
    }
    let companion_sum: i64 = increments.iter().sum();
    Ok(SatelliteSigma { omegas, increments, companion_sum, sigma: base_sigma + companion_sum as f64 })
}

/// `σ(τ(S, χ))` for a character `χ` of the torsion of `H_1(X_L^φ)`, given by
/// its numerators on the invariant-factor generators.
pub fn satellite_sigma(
    spec: &SatelliteSpec,
    phi: &GroupMap,
    chi_numerators: &[i64],
    base_sigma: f64,
    bound: u64,
) -> Result<SatelliteSigma, ObstructionError> {
    let ctx = CoverContext::new(spec, phi, bound)?;
    if chi_numerators.len() != ctx.torsion.rank() {
        return Err(ObstructionError::CharacterShape { given: chi_numerators.len(), rank: ctx.torsion.rank() });
    }
    let chi = Character::new(&ctx.torsion, chi_numerators);
    satellite_sigma_in(&ctx, &spec.companion, &chi, base_sigma)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "OBSTRUCTED")]
    Obstructed,
    /// inconclusive
    #[serde(rename = "NOT-OBSTRUCTED")]
    NotObstructed,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Obstructed => "OBSTRUCTED",
            Verdict::NotObstructed => "NOT-OBSTRUCTED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharacterEntry {
    pub numerators: Vec<u64>,
    pub order: u64,
    /// torsion coordinates of each lift class
    pub lifts: Vec<Vec<i64>>,
    #[serde(flatten)]
    pub sigma: SatelliteSigma,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetaboliserEntry {
    pub metaboliser: Subgroup,
    pub characters: Vec<CharacterEntry>,
    /// some nontrivial vanishing character has `σ ≠ 0`
    pub obstructed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverEntry {
    pub group: String,
    pub orders: Vec<u64>,
    pub homology: HomologySummary,
    pub form: Value,
    pub form_source: &'static str,
    pub metabolisers: Vec<MetaboliserEntry>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub verdict: Verdict,
    #[serde(serialize_with = "crate::json::float")]
    pub base_sigma: f64,
    pub gamma: Vec<(usize, i8)>,
    pub gamma_null_homologous: bool,
    pub gamma_unknotted_declared: bool,
    pub p: u64,
    pub cap: u64,
    pub q_bound: u64,
    pub covers: Vec<CoverEntry>,
}

/// Scan parameters: covers `Z_{p^a} ⊕ Z_{p^b}` with `|A| ≤ cap`, characters
/// of order `q^k ≤ q_bound`, and optional linking forms matched to torsion
/// groups by their orders.
#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub p: u64,
    pub cap: u64,
    pub q_bound: u64,
    pub forms: Vec<LinkingForm>,
}

fn pick_form(forms: &[LinkingForm], t: &FinAbGroup, cover: &str) -> Result<(LinkingForm, &'static str), ObstructionError> {
    if let Some(f) = forms.iter().find(|f| f.group() == t) {
        return Ok((f.clone(), "supplied"));
    }
    if metabolisers_form_independent(t) {
        return Ok((LinkingForm::standard(t), "default"));
    }
    Err(ObstructionError::FormRequired { cover: cover.to_string(), group: t.to_string() })
}

/// Characters vanishing on `P` whose order is 1 or a prime power `≤ q_bound`,
/// trivial first, each listed once.
fn scan_characters(t: &FinAbGroup, p: &Subgroup, q_bound: u64) -> Result<Vec<(Character, u64)>, ObstructionError> {
    let mut out = vec![(Character::trivial(t), 1)];
    for q in (2..=q_bound).filter(|&q| is_prime(q)) {
        let mut k = 0;
        while q.pow(k + 1) <= q_bound {
            k += 1;
        }
        for c in characters_vanishing_on(t, p, q, k)? {
            if !c.is_trivial() {
                out.push((c.character, c.order));
            }
        }
    }
    Ok(out)
}

fn scan_cover(spec: &SatelliteSpec, phi: &GroupMap, config: &ScanConfig) -> Result<CoverEntry, ObstructionError> {
    let ctx = CoverContext::new(spec, phi, config.cap.max(1))?;
    let name = phi.target().to_string();
    let (form, form_source) = pick_form(&config.forms, &ctx.torsion, &name)?;
    let lifts: Vec<Vec<i64>> = ctx.lifts.iter().map(HomologyClass::torsion_i64).collect();
    let mut metabolisers = Vec::new();
    for m in enumerate_metabolisers(&form)? {
        let mut characters = Vec::new();
        for (chi, order) in scan_characters(&ctx.torsion, &m, config.q_bound)? {
            let sigma = satellite_sigma_in(&ctx, &spec.companion, &chi, spec.base_sigma)?;
            characters.push(CharacterEntry { numerators: chi.numerators().to_vec(), order, lifts: lifts.clone(), sigma });
        }
        let obstructed = characters.iter().any(|c| c.order > 1 && prime_power(c.order).is_some() && c.sigma.is_nonzero());
        metabolisers.push(MetaboliserEntry { metaboliser: m, characters, obstructed });
    }
    // no metaboliser at all already rules out concordance
    let verdict =
        if metabolisers.iter().all(|m| m.obstructed) { Verdict::Obstructed } else { Verdict::NotObstructed };
    Ok(CoverEntry {
        group: name,
        orders: phi.target().orders().to_vec(),
        homology: HomologySummary { free_rank: ctx.homology.free_rank, torsion: ctx.homology.torsion.clone() },
        form: serde_json::from_str(&form.to_json()).expect("form JSON"),
        form_source,
        metabolisers,
        verdict,
    })
}

/// Run the obstruction over every admissible cover within the bounds.
pub fn hopf_obstruction_scan(spec: &SatelliteSpec, config: &ScanConfig) -> Result<ObstructionReport, ObstructionError> {
    spec.validate()?;
    let maps = admissible_maps(config.p, config.cap)?;
    let covers: Vec<CoverEntry> =
        maps.par_iter().map(|phi| scan_cover(spec, phi, config)).collect::<Result<Vec<_>, _>>()?;
    let verdict =
        if covers.iter().any(|c| c.verdict == Verdict::Obstructed) { Verdict::Obstructed } else { Verdict::NotObstructed };
    Ok(ObstructionReport {
        verdict,
        base_sigma: spec.base_sigma,
        gamma: spec.gamma.clone(),
        gamma_null_homologous: true,
        gamma_unknotted_declared: spec.gamma_unknotted,
        p: config.p,
        cap: config.cap,
        q_bound: config.q_bound,
        covers,
    })
}

/// Scan input as read from JSON.
#[derive(Clone, Debug, Deserialize)]
pub struct ScanInput {
    pub base_pd: Value,
    #[serde(default)]
    pub base_sigma: f64,
    pub companion_seifert: Value,
    #[serde(default)]
    pub gamma_word: Option<Vec<(usize, i8)>>,
    /// the same curve given by PD arc labels instead of generator indices
    #[serde(default)]
    pub gamma_arcs: Option<Vec<(u32, i8)>>,
    #[serde(default = "default_true")]
    pub gamma_unknotted: bool,
    #[serde(default)]
    pub swap_components: bool,
    pub p: u64,
    pub cap: u64,
    pub q_bound: u64,
    #[serde(default)]
    pub form: Option<Value>,
}

fn default_true() -> bool {
    true
}

impl ScanInput {
    pub fn parse(text: &str) -> Result<Self, ObstructionError> {
        serde_json::from_str(text).map_err(|e| ObstructionError::Input(e.to_string()))
    }

    pub fn into_spec(self) -> Result<(SatelliteSpec, ScanConfig), ObstructionError> {
        let base = match &self.base_pd {
            Value::String(s) => parse_pd(s)?,
            other => parse_pd(&other.to_string())?,
        };
        let companion = match &self.companion_seifert {
            Value::Array(_) => SeifertMatrix::from_json(&serde_json::json!({ "V": self.companion_seifert }).to_string())?,
            other => SeifertMatrix::from_json(&other.to_string())?,
        };
        let mut spec = SatelliteSpec::new(base, companion, Vec::new());
        spec.base_sigma = self.base_sigma;
        spec.gamma_unknotted = self.gamma_unknotted;
        spec.swap_components = self.swap_components;
        spec.gamma = match (self.gamma_word, self.gamma_arcs) {
            (Some(w), None) => w,
            (None, Some(arcs)) => {
                let w = spec.wirtinger()?;
                let count = spec.base.arc_count();
                arcs.iter()
                    .map(|&(a, e)| {
                        if a == 0 || a > count {
                            Err(ObstructionError::Input(format!("arc {a} is not in the diagram")))
                        } else {
                            Ok((w.generator_of_arc(a), e))
                        }
                    })
                    .collect::<Result<_, _>>()?
            }
            _ => return Err(ObstructionError::Input("give exactly one of gamma_word and gamma_arcs".into())),
        };
        if spec.gamma.iter().any(|&(_, e)| e != 1 && e != -1) {
            return Err(ObstructionError::Input("word exponents must be ±1".into()));
        }
        let forms = match self.form {
            None | Some(Value::Null) => Vec::new(),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| LinkingForm::from_json(&v.to_string()))
                .collect::<Result<_, _>>()?,
            Some(v) => vec![LinkingForm::from_json(&v.to_string())?],
        };
        if self.p < 2 || !is_prime(self.p) {
            return Err(ObstructionError::Input(format!("p = {} is not a prime", self.p)));
        }
        Ok((spec, ScanConfig { p: self.p, cap: self.cap, q_bound: self.q_bound, forms }))
    }
}
