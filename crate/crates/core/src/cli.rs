//! Command-line front end and the in-repo corpus of diagrams.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{parse_laurent, FinAbGroup, GroupMap, LaurentPoly};
use crate::error::{exit, Error};
use crate::forms::{characters_vanishing_on, enumerate_metabolisers, metabolisers_form_independent, LinkingForm};
use crate::foxcalc::alexander_polynomial;
use crate::homology::{
    cover_chain_complex, homology_of_cover, verify_knot_cover_formula, verify_link_cover_formula, HomologySummary,
};
use crate::linkdiagram::{parse_pd, wirtinger, PDCode};
use crate::obstruction::{hopf_obstruction_scan, ScanInput};
use crate::signatures::{integral_signature, levine_tristram, levine_tristram_at_root, sigma_integral, HermitianLaurentMatrix, SeifertMatrix};

#[derive(Debug, Parser)]
#[command(name = "hopfconc", version, about = "Obstructions to concordance with the Hopf link")]
pub struct Cli {
    /// read the command's main input from this file
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// compact JSON on stdout (the default)
    #[arg(long, global = true, conflicts_with = "pretty")]
    pub json: bool,
    /// indented JSON on stdout and a human summary on stderr
    #[arg(long, global = true)]
    pub pretty: bool,
    /// worker threads
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// largest deck group order
    #[arg(long, global = true, default_value_t = 64)]
    pub cap: u64,
    /// grid points per torus dimension for signature integrals
    #[arg(long, global = true, default_value_t = 64)]
    pub grid: usize,
    /// accepted and ignored; every computation is deterministic
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Alexander polynomial of a knot or link diagram
    Alex {
        /// PD code given inline
        #[arg(long)]
        pd: Option<String>,
    },
    /// H_1 of the cover for Z^m → Z_{p^a} ⊕ Z_{p^b}
    Cover {
        #[arg(long)]
        pd: Option<String>,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long, default_value_t = 0)]
        b: u32,
    },
    /// Compare a cover's torsion order with the character product of Δ
    VerifyAppendix {
        #[arg(long)]
        pd: Option<String>,
        /// Δ in s,t (or t for a knot)
        #[arg(long)]
        poly: Option<String>,
        /// treat the polynomial as a knot polynomial in t
        #[arg(long)]
        knot: bool,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long, default_value_t = 0)]
        b: u32,
    },
    /// Levine–Tristram signatures of a Seifert matrix
    Ltsig {
        /// Seifert matrix as a JSON array, e.g. [[1,-1],[0,1]]
        #[arg(long)]
        matrix: Option<String>,
        /// ω = exp(2πi·num/den), given as num/den
        #[arg(long)]
        root: Vec<String>,
        /// ω = exp(iθ)
        #[arg(long, allow_hyphen_values = true)]
        theta: Vec<f64>,
        /// also report the average over the circle at resolution --grid
        #[arg(long)]
        integral: bool,
    },
    /// Torus-averaged signature of a Hermitian matrix over C[Z^r]
    Sigma,
    /// Metabolisers of a linking form, and characters vanishing on them
    Metab {
        /// invariant factors for the standard form, e.g. 9 or 3,3
        #[arg(long)]
        orders: Option<String>,
        /// list characters of order dividing q^k vanishing on each metaboliser
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Scan admissible covers for a satellite obstruction
    Obstruct,
}

struct Output {
    json: Value,
    summary: String,
    code: i32,
}

impl Output {
    fn ok(json: Value, summary: String) -> Self {
        Self { json, summary, code: exit::OK }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

/// Drop `#` comment lines, as used by corpus headers.
fn strip_comments(text: &str) -> String {
    text.lines().filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join("\n")
}

fn load_diagram(inline: &Option<String>, input: &Option<PathBuf>) -> Result<Option<PDCode>, Error> {
    let text = match (inline, input) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) => read_file(path)?,
        (None, None) => return Ok(None),
    };
    Ok(Some(parse_pd(&strip_comments(&text))?))
}

fn require_diagram(inline: &Option<String>, input: &Option<PathBuf>) -> Result<PDCode, Error> {
    load_diagram(inline, input)?.ok_or_else(|| Error::MissingInput("a PD code (--pd or --input)".into()))
}

fn require_input(input: &Option<PathBuf>, what: &str) -> Result<String, Error> {
    match input {
        Some(path) => read_file(path),
        None => Err(Error::MissingInput(format!("{what} (--input)"))),
    }
}

fn group_map(components: usize, p: u64, a: u32, b: u32) -> Result<GroupMap, Error> {
    let pow = |e: u32| p.checked_pow(e).ok_or_else(|| Error::Input(format!("{p}^{e} overflows")));
    if components == 1 {
        if b != 0 {
            return Err(Error::Input("a knot has cyclic covers only; use --b 0".into()));
        }
        return Ok(GroupMap::cyclic(pow(a)?)?);
    }
    Ok(GroupMap::admissible(pow(a)?, pow(b)?)?)
}

fn variables(nvars: usize) -> Vec<&'static str> {
    if nvars == 1 {
        vec!["t"]
    } else {
        vec!["s", "t"]
    }
}

fn cmd_alex(cli: &Cli, pd: &Option<String>) -> Result<Output, Error> {
    let d = require_diagram(pd, &cli.input)?;
    let poly = alexander_polynomial(&d)?;
    let names = LaurentPoly::default_names(poly.nvars());
    let text = poly.to_string_with(&names);
    let summary = format!("Δ({}) = {}", names.join(","), text);
    Ok(Output::ok(json!({ "components": d.component_count(), "variables": names, "polynomial": text }), summary))
}

#[derive(Serialize)]
struct CoverReport {
    group: String,
    components: usize,
    #[serde(flatten)]
    homology: HomologySummary,
}

fn cmd_cover(cli: &Cli, pd: &Option<String>, p: u64, a: u32, b: u32) -> Result<Output, Error> {
    let d = require_diagram(pd, &cli.input)?;
    let phi = group_map(d.component_count(), p, a, b)?;
    let w = wirtinger(&d);
    let complex = cover_chain_complex(&w.presentation, &w.meridians, &phi, cli.cap)?;
    let h = homology_of_cover(&complex, false);
    let report = CoverReport {
        group: phi.target().to_string(),
        components: d.component_count(),
        homology: HomologySummary { free_rank: h.free_rank, torsion: h.torsion.clone() },
    };
    let torsion: Vec<String> = h.torsion.iter().map(|x| format!("Z{x}")).collect();
    let mut parts = vec![if h.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", h.free_rank) }];
    parts.extend(torsion);
    let summary = format!("H_1 of the {} cover = {}", report.group, parts.join(" + "));
    Ok(Output::ok(to_value(&report), summary))
}

fn cmd_verify(
    cli: &Cli,
    pd: &Option<String>,
    poly: &Option<String>,
    knot: bool,
    (p, a, b): (u64, u32, u32),
) -> Result<Output, Error> {
    let diagram = load_diagram(pd, &cli.input)?;
    let is_knot = diagram.as_ref().map_or(knot, |d| d.component_count() == 1);
    let delta = match (poly, &diagram) {
        (Some(text), _) => parse_laurent(text, &variables(if is_knot { 1 } else { 2 }))?,
        (None, Some(d)) => alexander_polynomial(d)?,
        (None, None) => return Err(Error::MissingInput("a polynomial (--poly) or a diagram".into())),
    };
    let report = if is_knot {
        if b != 0 {
            return Err(Error::Input("a knot has cyclic covers only; use --b 0".into()));
        }
        let n = p.checked_pow(a).ok_or_else(|| Error::Input("cover order overflows".into()))?;
        verify_knot_cover_formula(&delta, n, diagram.as_ref(), cli.cap)?
    } else {
        verify_link_cover_formula(&delta, &group_map(2, p, a, b)?, diagram.as_ref(), cli.cap)?
    };
    let mut summary = format!("character product = {}", report.rhs_exact);
    if let Some(l) = &report.lhs {
        summary.push_str(&format!(", cover torsion order = {l}"));
    }
    let code = if report.consistent {
        exit::OK
    } else {
        summary.push_str(": inconsistent");
        exit::INCONSISTENT
    };
    Ok(Output { json: to_value(&report), summary, code })
}

fn parse_root(s: &str) -> Result<(i64, i64), Error> {
    let bad = || Error::Input(format!("expected num/den, got {s:?}"));
    let (n, d) = s.split_once('/').ok_or_else(bad)?;
    let n: i64 = n.trim().parse().map_err(|_| bad())?;
    let d: i64 = d.trim().parse().map_err(|_| bad())?;
    if d <= 0 {
        return Err(bad());
    }
    Ok((n, d))
}

fn cmd_ltsig(cli: &Cli, matrix: &Option<String>, roots: &[String], thetas: &[f64], integral: bool) -> Result<Output, Error> {
    let text = match matrix {
        Some(m) => m.clone(),
        None => require_input(&cli.input, "a Seifert matrix (--matrix)")?,
    };
    let value: Value = serde_json::from_str(text.trim()).map_err(|e| Error::Input(e.to_string()))?;
    let v = match value {
        Value::Array(_) => SeifertMatrix::from_json(&json!({ "V": value }).to_string())?,
        other => SeifertMatrix::from_json(&other.to_string())?,
    };
    if roots.is_empty() && thetas.is_empty() && !integral {
        return Err(Error::MissingInput("--root, --theta or --integral".into()));
    }
    let mut values = Vec::new();
    let mut lines = Vec::new();
    for r in roots {
        let (n, d) = parse_root(r)?;
        let s = levine_tristram_at_root(&v, n, d)?;
        lines.push(format!("σ(e^(2πi·{n}/{d})) = {s}"));
        values.push(json!({ "root": format!("{n}/{d}"), "sigma": s }));
    }
    for &t in thetas {
        let s = levine_tristram(&v, num_complex::Complex64::from_polar(1.0, t))?;
        lines.push(format!("σ(e^(i·{t})) = {s}"));
        values.push(json!({ "theta": crate::json::round12(t), "sigma": s }));
    }
    let mut out = json!({ "size": v.size(), "values": values });
    if integral {
        let x = integral_signature(&v, cli.grid)?;
        lines.push(format!("average over the circle = {x:.6}"));
        out["integral"] = json!(crate::json::round12(x));
        out["grid"] = json!(cli.grid);
    }
    Ok(Output::ok(out, lines.join("\n")))
}

fn cmd_sigma(cli: &Cli) -> Result<Output, Error> {
    let text = require_input(&cli.input, "a Hermitian matrix over C[Z^r]")?;
    let m = HermitianLaurentMatrix::from_json(&text)?;
    let r = sigma_integral(&m, cli.grid)?;
    let summary = format!("σ = {:.6} on {} points ({} singular, skipped)", r.value, r.points, r.skipped);
    Ok(Output::ok(to_value(&r), summary))
}

fn cmd_metab(cli: &Cli, orders: &Option<String>, q: Option<u64>, k: u32) -> Result<Output, Error> {
    let form = match (orders, &cli.input) {
        (Some(o), _) => {
            let orders: Vec<u64> = o
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| Error::Input(format!("bad order list {o:?}"))))
                .collect::<Result<_, _>>()?;
            LinkingForm::standard(&FinAbGroup::new(orders)?)
        }
        (None, Some(path)) => LinkingForm::from_json(&read_file(path)?)?,
        (None, None) => return Err(Error::MissingInput("a linking form (--input) or --orders".into())),
    };
    let group = form.group().clone();
    let mets = enumerate_metabolisers(&form)?;
    let mut entries = Vec::new();
    let mut lines = vec![format!("{} metaboliser(s) of {}", mets.len(), group)];
    for m in &mets {
        lines.push(format!("  {m}"));
        let mut entry = to_value(m);
        if let Some(q) = q {
            let chars: Vec<Value> = characters_vanishing_on(&group, m, q, k)?
                .iter()
                .map(|c| json!({ "numerators": c.character.numerators(), "order": c.order }))
                .collect();
            entry["characters"] = Value::Array(chars);
        }
        entries.push(entry);
    }
    let out = json!({
        "group": group.to_string(),
        "form": serde_json::from_str::<Value>(&form.to_json()).expect("form JSON"),
        "form_independent": metabolisers_form_independent(&group),
        "metabolisers": entries,
    });
    Ok(Output::ok(out, lines.join("\n")))
}

fn cmd_obstruct(cli: &Cli) -> Result<Output, Error> {
    let text = require_input(&cli.input, "a scan description")?;
    let (spec, config) = ScanInput::parse(&text)?.into_spec()?;
    let report = hopf_obstruction_scan(&spec, &config)?;
    let mut lines: Vec<String> = report.covers.iter().map(|c| format!("{}: {}", c.group, c.verdict)).collect();
    lines.push(format!("overall: {}", report.verdict));
    Ok(Output::ok(to_value(&report), lines.join("\n")))
}

fn execute(cli: &Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::Alex { pd } => cmd_alex(cli, pd),
        Command::Cover { pd, p, a, b } => cmd_cover(cli, pd, *p, *a, *b),
        Command::VerifyAppendix { pd, poly, knot, p, a, b } => cmd_verify(cli, pd, poly, *knot, (*p, *a, *b)),
        Command::Ltsig { matrix, root, theta, integral } => cmd_ltsig(cli, matrix, root, theta, *integral),
        Command::Sigma => cmd_sigma(cli),
        Command::Metab { orders, q, k } => cmd_metab(cli, orders, *q, *k),
        Command::Obstruct => cmd_obstruct(cli),
    }
}

/// Run the command line, writing the report to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::PARSE } else { exit::OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        pool = pool.num_threads(n.max(1));
    }
    let result = match pool.build() {
        Ok(p) => p.install(|| execute(&cli)),
        Err(e) => Err(Error::Input(e.to_string())),
    };
    match result {
        Ok(o) => {
            let text = if cli.pretty {
                serde_json::to_string_pretty(&o.json)
            } else {
                serde_json::to_string(&o.json)
            }
            .expect("JSON");
            let _ = writeln!(out, "{text}");
            if cli.pretty || o.code != exit::OK {
                let _ = writeln!(err, "{}", o.summary);
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// A known value together with where it comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Known<T> {
    pub value: T,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnownCover {
    /// invariant factors of the deck group: `[n]` for a knot, `[k, l]` for a link
    pub orders: Vec<u64>,
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl KnownCover {
    pub fn group_map(&self) -> Result<GroupMap, Error> {
        Ok(match self.orders[..] {
            [n] => GroupMap::cyclic(n)?,
            [k, l] => GroupMap::admissible(k, l)?,
            _ => return Err(Error::Input(format!("bad cover orders {:?}", self.orders))),
        })
    }
}

/// A corpus diagram file: `# key: value` header lines followed by a PD code.
///
/// Recognised keys are `name`, `source`, `note`, and the known-value keys
/// `alexander`, `seifert` and `cover`, whose values end in `| provenance`.
/// Cover lines read `k,l -> free [t1,t2,...]`.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub source: String,
    pub notes: Vec<String>,
    pub pd: PDCode,
    pub seifert: Option<Known<SeifertMatrix>>,
    pub alexander: Option<Known<String>>,
    pub covers: Vec<Known<KnownCover>>,
}

fn split_provenance(key: &str, value: &str) -> Result<(String, String), Error> {
    match value.rsplit_once('|') {
        Some((v, p)) if !p.trim().is_empty() => Ok((v.trim().to_string(), p.trim().to_string())),
        _ => Err(Error::Input(format!("corpus field {key:?} has no provenance"))),
    }
}

fn parse_list(text: &str) -> Result<Vec<u64>, Error> {
    let inner = text.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']'));
    let inner = inner.ok_or_else(|| Error::Input(format!("expected [..], got {text:?}")))?;
    inner
        .split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse().map_err(|_| Error::Input(format!("bad integer in {text:?}"))))
        .collect()
}

fn parse_cover(text: &str) -> Result<KnownCover, Error> {
    let bad = || Error::Input(format!("expected `k,l -> free [torsion]`, got {text:?}"));
    let (orders, rest) = text.split_once("->").ok_or_else(bad)?;
    let orders: Vec<u64> =
        orders.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let rest = rest.trim();
    let (free, torsion) = rest.split_once(' ').ok_or_else(bad)?;
    Ok(KnownCover { orders, free_rank: free.parse().map_err(|_| bad())?, torsion: parse_list(torsion)? })
}

impl CorpusEntry {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut name = None;
        let mut source = None;
        let mut notes = Vec::new();
        let mut seifert = None;
        let mut alexander = None;
        let mut covers = Vec::new();
        for line in text.lines() {
            let Some(header) = line.trim_start().strip_prefix('#') else { continue };
            let Some((key, value)) = header.split_once(':') else { continue };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "name" => name = Some(value.to_string()),
                "source" => source = Some(value.to_string()),
                "note" => notes.push(value.to_string()),
                "alexander" => {
                    let (v, p) = split_provenance(key, value)?;
                    alexander = Some(Known { value: v, provenance: p });
                }
                "seifert" => {
                    let (v, p) = split_provenance(key, value)?;
                    let m = SeifertMatrix::from_json(&format!("{{\"V\": {v}}}"))?;
                    seifert = Some(Known { value: m, provenance: p });
                }
                "cover" => {
                    let (v, p) = split_provenance(key, value)?;
                    covers.push(Known { value: parse_cover(&v)?, provenance: p });
                }
                _ => return Err(Error::Input(format!("unknown corpus field {key:?}"))),
            }
        }
        let name = name.ok_or_else(|| Error::Input("corpus entry has no name".into()))?;
        let source = source.ok_or_else(|| Error::Input(format!("corpus entry {name} has no source")))?;
        let pd = parse_pd(&strip_comments(text))?;
        Ok(Self { name, source, notes, pd, seifert, alexander, covers })
    }

    pub fn is_knot(&self) -> bool {
        self.pd.component_count() == 1
    }

    /// Known polynomial parsed in `t` (knots) or `s, t` (links).
    pub fn known_alexander(&self) -> Result<Option<LaurentPoly>, Error> {
        let vars = variables(if self.is_knot() { 1 } else { 2 });
        self.alexander.as_ref().map(|k| parse_laurent(&k.value, &vars).map_err(Error::from)).transpose()
    }
}

/// Every `*.pd` file in `dir`, sorted by file name.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusEntry>, Error> {
    let listing = std::fs::read_dir(dir).map_err(|source| Error::Io { path: dir.display().to_string(), source })?;
    let mut paths: Vec<PathBuf> = listing
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pd"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            CorpusEntry::parse(&read_file(p)?)
                .map_err(|e| Error::Input(format!("{}: {e}", p.display())))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("hopfconc").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn alex_examples() {
        let (code, out, _) = run_args(&["alex", "--pd", "X[4,2,3,1];X[2,4,1,3]"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), r#"{"components":2,"variables":["s","t"],"polynomial":"1"}"#);
        let (code, out, _) = run_args(&["alex", "--pd", "X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]"]);
        assert_eq!(code, 0);
        assert!(out.contains(r#""polynomial":"t^2-t+1""#));
        let (code, _, err) = run_args(&["alex", "--pd", "X[1,2,3]"]);
        assert_eq!(code, exit::PARSE);
        assert!(err.contains("malformed"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["frobnicate"]).0, exit::PARSE);
        assert_eq!(run_args(&["alex"]).0, exit::MISSING_INPUT);
        assert_eq!(run_args(&["--help"]).0, exit::OK);
    }

    #[test]
    fn corpus_header_parsing() {
        let text = "# name: trefoil\n# source: standard diagram\n# alexander: t^2-t+1 | oracle\n\
                    # cover: 2 -> 1 [3] | oracle\nX[1,4,2,5];X[3,6,4,1];X[5,2,6,3]\n";
        let e = CorpusEntry::parse(text).unwrap();
        assert_eq!(e.name, "trefoil");
        assert_eq!(e.covers[0].value, KnownCover { orders: vec![2], free_rank: 1, torsion: vec![3] });
        assert!(e.known_alexander().unwrap().is_some());
        let missing = text.replace(" | oracle\n# cover", "\n# cover");
        assert!(CorpusEntry::parse(&missing).is_err());
    }
}
