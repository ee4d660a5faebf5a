//! Acceptance checks, one line per criterion. Run with
//! `cargo test --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use hopf_concordance::algebra::{
    admissible_maps, apply_rep_to_matrix, character_product, is_prime, parse_laurent, regular_representation,
    Character, Element, FinAbGroup, GroupMap, IntMatrix, LaurentMatrix, LaurentPoly,
};
use hopf_concordance::forms::{enumerate_metabolisers, LinkingForm, Subgroup};
use hopf_concordance::foxcalc::{alexander_matrix, alexander_polynomial};
use hopf_concordance::homology::{
    cover_chain_complex, smith_normal_form_tracked, verify_knot_cover_formula, verify_link_cover_formula, Track,
};
use hopf_concordance::linkdiagram::wirtinger;
use hopf_concordance::obstruction::{hopf_obstruction_scan, satellite_sigma_in, CoverContext, Verdict};
use hopf_concordance::signatures::{
    levine_tristram_at_root, sigma_integral, sigma_tolerance, ComplexLaurent, HermitianLaurentMatrix, LaurentMatrixC,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure!(took <= limit, "took {took:.1?}, limit {limit:?}");
    Ok(())
}

fn st(s: &str) -> LaurentPoly {
    parse_laurent(s, &["s", "t"]).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let delta = st("(t*s+1-s)*(t*s+1-t)");
    let r = verify_link_cover_formula(&delta, &GroupMap::admissible(2, 2).unwrap(), None, 64).map_err(|e| e.to_string())?;
    ensure!(r.rhs_exact == BigInt::from(9), "exact product {}", r.rhs_exact);
    ensure!((r.rhs_numeric - 9.0).abs() < 1e-6, "numeric product {}", r.rhs_numeric);
    within(start, Duration::from_secs(1))?;
    Ok(format!("product over Z2+Z2 characters = {} (numeric {:.9})", r.rhs_exact, r.rhs_numeric))
}

fn criterion_2() -> Outcome {
    let g = FinAbGroup::new(vec![2, 2]).unwrap();
    let first = IntMatrix::from_rows(&[vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]]);
    let second = IntMatrix::from_rows(&[vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
    ensure!(regular_representation(&g, &[1, 0]) == first, "rho(1,0) = {:?}", regular_representation(&g, &[1, 0]));
    ensure!(regular_representation(&g, &[0, 1]) == second, "rho(0,1) = {:?}", regular_representation(&g, &[0, 1]));
    Ok("both 4x4 permutation matrices match".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut frozen = Vec::new();
    for name in ["trefoil", "figure-eight"] {
        let e = common::entry(name);
        let delta = alexander_polynomial(&e.pd).map_err(|e| e.to_string())?;
        for n in 1..=6 {
            let r = verify_knot_cover_formula(&delta, n, Some(&e.pd), 64).map_err(|e| format!("{name} n={n}: {e}"))?;
            ensure!(r.consistent && r.lhs.as_ref() == Some(&r.rhs_exact), "{name} n={n}: {:?} vs {}", r.lhs, r.rhs_exact);
            frozen.push((name, n, r.rhs_exact));
        }
    }
    let value = |name: &str, n: u64| frozen.iter().find(|f| f.0 == name && f.1 == n).unwrap().2.clone();
    ensure!(value("trefoil", 2) == BigInt::from(3), "trefoil n=2");
    ensure!(value("trefoil", 3) == BigInt::from(4), "trefoil n=3");
    ensure!(value("figure-eight", 2) == BigInt::from(5), "figure-eight n=2");
    within(start, Duration::from_secs(30))?;
    Ok("12 knot covers agree; |H1| = 3, 4, 5 for trefoil n=2,3 and figure-eight n=2".into())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let cap = 36;
    let links = common::lk_one_links();
    ensure!(links.len() >= 8, "only {} corpus links", links.len());
    let mut maps = Vec::new();
    for p in (2..=cap).filter(|&p| is_prime(p)) {
        maps.extend(admissible_maps(p, cap).unwrap());
    }
    let jobs: Vec<_> = links.iter().flat_map(|l| maps.iter().map(move |m| (l, m))).collect();
    let failures: Vec<String> = jobs
        .par_iter()
        .filter_map(|(l, phi)| {
            let delta = match alexander_polynomial(&l.pd) {
                Ok(d) => d,
                Err(e) => return Some(format!("{}: {e}", l.name)),
            };
            match verify_link_cover_formula(&delta, phi, Some(&l.pd), cap) {
                Ok(r) if r.consistent && r.homology.as_ref().is_some_and(|h| h.free_rank == 2) => None,
                Ok(r) => Some(format!("{} at {}: lhs {:?} rhs {}", l.name, phi.target(), r.lhs, r.rhs_exact)),
                Err(e) => Some(format!("{} at {}: {e}", l.name, phi.target())),
            }
        })
        .collect();
    ensure!(failures.is_empty(), "{}", failures.join("; "));
    let mut known = 0;
    for l in &links {
        for c in &l.covers {
            let phi = c.value.group_map().map_err(|e| e.to_string())?;
            let w = wirtinger(&l.pd);
            let complex = cover_chain_complex(&w.presentation, &w.meridians, &phi, cap).map_err(|e| e.to_string())?;
            let h = hopf_concordance::homology::homology_of_cover(&complex, false);
            let torsion: Vec<BigInt> = c.value.torsion.iter().map(|&t| BigInt::from(t)).collect();
            ensure!(
                h.free_rank == c.value.free_rank && h.torsion == torsion,
                "{} at {:?}: got {} {:?}",
                l.name,
                c.value.orders,
                h.free_rank,
                h.torsion
            );
            known += 1;
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{} links x {} covers consistent; {known} known covers match", links.len(), maps.len()))
}

fn criterion_5() -> Outcome {
    let v = common::entry("trefoil").seifert.ok_or("trefoil has no Seifert matrix")?.value;
    let at = |n, d| levine_tristram_at_root(&v, n, d).map_err(|e| e.to_string());
    ensure!(at(0, 1)? == 0, "sigma(1) = {}", at(0, 1)?);
    for (n, d) in [(1, 3), (2, 3), (-1, 3)] {
        ensure!(at(n, d)? == 2, "sigma at {n}/{d} = {}", at(n, d)?);
    }
    Ok("sigma(1) = 0, sigma(e^{2 pi i/3}) = sigma(e^{4 pi i/3}) = 2".into())
}

fn all_groups(max_order: u64, max_rank: usize) -> Vec<FinAbGroup> {
    // invariant factors d1 | d2 | ... with every d > 1
    fn extend(prefix: Vec<u64>, order: u64, max_order: u64, max_rank: usize, out: &mut Vec<Vec<u64>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if prefix.len() == max_rank {
            return;
        }
        let last = prefix.last().copied().unwrap_or(1);
        let mut d = if prefix.is_empty() { 2 } else { last };
        while order * d <= max_order {
            if d % last == 0 {
                let mut next = prefix.clone();
                next.push(d);
                extend(next, order * d, max_order, max_rank, out);
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    extend(Vec::new(), 1, max_order, max_rank, &mut out);
    out.into_iter().map(|o| FinAbGroup::new(o).unwrap()).collect()
}

/// Every subgroup `P` with `|P|² = |T|` and `λ|P×P = 0`, found by brute force
/// over generating tuples of length `rank`.
fn brute_force_metabolisers(form: &LinkingForm) -> Vec<Vec<Element>> {
    let group = form.group();
    let n = group.order();
    let root = (1..=n).find(|r| r * r >= n).unwrap();
    if root * root != n {
        return Vec::new();
    }
    let elems: Vec<Element> = group.elements().collect();
    let mut found: std::collections::BTreeSet<Vec<Element>> = Default::default();
    let r = group.rank();
    let mut idx = vec![0usize; r];
    loop {
        let gens: Vec<Element> = idx.iter().map(|&i| elems[i].clone()).collect();
        let s = Subgroup::generated_by(group, &gens).unwrap();
        if s.order() as u64 == root && s.elements.iter().all(|x| s.elements.iter().all(|y| form.pair(x, y).is_zero())) {
            found.insert(s.elements.clone());
        }
        let mut pos = 0;
        loop {
            if pos == r {
                return found.into_iter().collect();
            }
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn random_form(group: &FinAbGroup, rng: &mut ChaCha8Rng) -> Option<LinkingForm> {
    let d = group.orders();
    let r = d.len();
    let mut gram = vec![vec![Ratio::zero(); r]; r];
    for i in 0..r {
        for j in i..r {
            let m = d[i].min(d[j]) as i64;
            let x = Ratio::new(rng.gen_range(0..m), m);
            gram[i][j] = x;
            gram[j][i] = x;
        }
    }
    LinkingForm::new(group.clone(), gram).ok()
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let z9 = FinAbGroup::cyclic(9);
    for u in [1, 2, 4, 5, 7, 8] {
        let f = LinkingForm::new(z9.clone(), vec![vec![Ratio::new(u, 9)]]).map_err(|e| e.to_string())?;
        let m = enumerate_metabolisers(&f).map_err(|e| e.to_string())?;
        ensure!(m.len() == 1, "Z9 with {u}/9: {} metabolisers", m.len());
        ensure!(m[0].elements == vec![vec![0], vec![3], vec![6]], "Z9 with {u}/9: {}", m[0]);
    }
    let groups = all_groups(100, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut forms = Vec::new();
    for g in &groups {
        forms.push(LinkingForm::standard(g));
        let mut extra = 0;
        for _ in 0..20 {
            if extra == 2 {
                break;
            }
            if let Some(f) = random_form(g, &mut rng) {
                forms.push(f);
                extra += 1;
            }
        }
    }
    let failures: Vec<String> = forms
        .par_iter()
        .filter_map(|f| {
            let ours: Vec<Vec<Element>> = enumerate_metabolisers(f).ok()?.into_iter().map(|s| s.elements).collect();
            let mut ours_sorted = ours.clone();
            ours_sorted.sort();
            let oracle = brute_force_metabolisers(f);
            (ours_sorted != oracle).then(|| format!("{}: {} vs {}", f.to_json(), ours.len(), oracle.len()))
        })
        .collect();
    ensure!(failures.is_empty(), "{}", failures.join("; "));
    within(start, Duration::from_secs(300))?;
    Ok(format!("Z9 forms give {{0,3,6}}; {} forms on {} groups agree with brute force", forms.len(), groups.len()))
}

fn criterion_7() -> Outcome {
    let (spec, config) = common::scan("scan_trefoil.json");
    let klein = GroupMap::admissible(2, 2).unwrap();
    let ctx = CoverContext::new(&spec, &klein, 64).map_err(|e| e.to_string())?;
    ensure!(ctx.lifts.len() == 4, "{} lifts", ctx.lifts.len());
    ensure!(ctx.torsion.orders() == [9], "torsion {}", ctx.torsion);
    let chi = Character::new(&ctx.torsion, &[3]);
    let s = satellite_sigma_in(&ctx, &spec.companion, &chi, spec.base_sigma).map_err(|e| e.to_string())?;
    ensure!([2.0, 4.0, 6.0, 8.0].contains(&s.sigma), "sigma {}", s.sigma);
    ensure!(s.omegas.iter().any(|w| w == "1/3" || w == "2/3"), "omegas {:?}", s.omegas);
    let report = hopf_obstruction_scan(&spec, &config).map_err(|e| e.to_string())?;
    ensure!(report.verdict == Verdict::Obstructed, "trefoil satellite: {}", report.verdict);
    let (spec, config) = common::scan("scan_unknot.json");
    let report = hopf_obstruction_scan(&spec, &config).map_err(|e| e.to_string())?;
    ensure!(report.verdict == Verdict::NotObstructed, "unknot satellite: {}", report.verdict);
    Ok(format!("omegas {:?}, sigma {}; trefoil OBSTRUCTED, unknot NOT-OBSTRUCTED", s.omegas, s.sigma))
}

fn random_complex_laurent(rank: usize, rng: &mut ChaCha8Rng) -> ComplexLaurent {
    let mut p = ComplexLaurent::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let e: Vec<i32> = (0..rank).map(|_| rng.gen_range(-1..=1)).collect();
        p.add_term(e, Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
    }
    p
}

fn random_hermitian(rank: usize, n: usize, rng: &mut ChaCha8Rng) -> HermitianLaurentMatrix {
    let a = LaurentMatrixC {
        rank,
        entries: (0..n).map(|_| (0..n).map(|_| random_complex_laurent(rank, rng)).collect()).collect(),
    };
    let adj = a.adjoint();
    let entries = (0..n).map(|i| (0..n).map(|j| a.entries[i][j].add(&adj.entries[i][j])).collect()).collect();
    HermitianLaurentMatrix::new(LaurentMatrixC { rank, entries }).unwrap()
}

/// Elementary matrix times a diagonal of monomial units.
fn random_unit(rank: usize, n: usize, rng: &mut ChaCha8Rng) -> LaurentMatrixC {
    let zero = ComplexLaurent::zero();
    let one = ComplexLaurent::constant(Complex64::new(1.0, 0.0), rank);
    let mut e: Vec<Vec<ComplexLaurent>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { one.clone() } else { zero.clone() }).collect()).collect();
    if n > 1 {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        e[i][j] = random_complex_laurent(rank, rng);
    }
    let d: Vec<Vec<ComplexLaurent>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i != j {
                        return zero.clone();
                    }
                    let exps = (0..rank).map(|_| rng.gen_range(-2..=2)).collect();
                    let c = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
                    ComplexLaurent::monomial(c, exps)
                })
                .collect()
        })
        .collect();
    LaurentMatrixC { rank, entries: e }.mul(&LaurentMatrixC { rank, entries: d })
}

fn criterion_8() -> Outcome {
    let grid = 64;
    let tol = sigma_tolerance(grid);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for case in 0..10 {
        let rank = 1 + case % 3;
        let n = rng.gen_range(1..=3);
        let p = random_hermitian(rank, n, &mut rng);
        let sigma = |m: &HermitianLaurentMatrix| sigma_integral(m, grid).map(|s| s.value).map_err(|e| e.to_string());
        let base = sigma(&p)?;
        let stabilized = sigma(&p.direct_sum(&HermitianLaurentMatrix::hyperbolic(rank)).unwrap())?;
        let u = random_unit(rank, n, &mut rng);
        let congruent = sigma(&p.congruent(&u).map_err(|e| e.to_string())?)?;
        for (what, v) in [("P+B", stabilized), ("UPU*", congruent)] {
            worst = worst.max((v - base).abs());
            ensure!((v - base).abs() <= tol, "case {case} (rank {rank}, size {n}): sigma(P) = {base}, sigma({what}) = {v}");
        }
    }
    let h = sigma_integral(&HermitianLaurentMatrix::hyperbolic(2), grid).unwrap().value;
    let one = sigma_integral(&HermitianLaurentMatrix::constant(2, &[vec![1.0]]).unwrap(), grid).unwrap().value;
    ensure!(h == 0.0, "sigma(hyperbolic) = {h}");
    ensure!(one == 1.0, "sigma([1]) = {one}");
    Ok(format!("10 random cases, largest difference {worst:.4} (tolerance {tol:.4})"))
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let (r, c) = (rng.gen_range(1..=7), rng.gen_range(1..=7));
    let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-20..=20)).collect()).collect();
    IntMatrix::from_rows(&rows)
}

fn random_poly(rng: &mut ChaCha8Rng) -> LaurentPoly {
    let terms = (0..rng.gen_range(1..=4))
        .map(|_| (vec![rng.gen_range(-2..=2), rng.gen_range(-2..=2)], BigInt::from(rng.gen_range(-3..=3))))
        .collect::<Vec<_>>();
    LaurentPoly::from_terms(2, terms)
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..200 {
        let m = random_matrix(&mut rng);
        let snf = smith_normal_form_tracked(&m, Track::BOTH);
        let (u, v) = (snf.u.as_ref().unwrap(), snf.v.as_ref().unwrap());
        ensure!(&(u * &m) * v == snf.d_matrix(), "SNF case {case}: U M V != D");
        ensure!(u.det().abs().is_one() && v.det().abs().is_one(), "SNF case {case}: not unimodular");
        for w in snf.diagonal.windows(2) {
            ensure!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()), "SNF case {case}: {:?}", snf.diagonal);
        }
    }
    let corpus = common::corpus();
    for e in &corpus {
        let w = wirtinger(&e.pd);
        let fox = alexander_matrix(&w.presentation, &w.meridians);
        ensure!(fox.row_identity_residues().iter().all(LaurentPoly::is_zero), "{}: Fox row identity fails", e.name);
    }
    for case in 0..100 {
        let p = random_poly(&mut rng);
        let q = [2u64, 3, 5][rng.gen_range(0..3)];
        let maps = admissible_maps(q, 36).unwrap();
        let phi = &maps[rng.gen_range(0..maps.len())];
        let rho = apply_rep_to_matrix(&LaurentMatrix::from_rows(2, vec![vec![p.clone()]]), phi, 64).unwrap();
        let exact: f64 = rho.det().abs().to_string().parse().unwrap();
        let numeric = character_product(&p, phi, 64).unwrap().norm();
        ensure!((exact - numeric).abs() <= 1e-6 * exact.max(1.0), "character case {case}: {p} at {}: {exact} vs {numeric}", phi.target());
    }
    let mut covers = 0;
    for e in &corpus {
        let w = wirtinger(&e.pd);
        let maps: Vec<GroupMap> = if e.is_knot() {
            (1..=6).map(|n| GroupMap::cyclic(n).unwrap()).collect()
        } else {
            [2, 3, 5].iter().flat_map(|&q| admissible_maps(q, 36).unwrap()).collect()
        };
        for phi in maps {
            let c = cover_chain_complex(&w.presentation, &w.meridians, &phi, 64).map_err(|e| e.to_string())?;
            ensure!((&c.d2 * &c.d1).is_zero(), "{} at {}: d2 d1 != 0", e.name, phi.target());
            covers += 1;
        }
    }
    within(start, Duration::from_secs(600))?;
    Ok(format!("200 SNF, {} Fox, 100 character, {covers} chain-complex checks", corpus.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Klein-four product of the two-variable polynomial is 9", criterion_1),
        ("regular representation of Z2+Z2", criterion_2),
        ("knot cover orders match the cyclotomic product", criterion_3),
        ("link cover orders match the character product on the corpus", criterion_4),
        ("trefoil Levine-Tristram signatures", criterion_5),
        ("metaboliser enumeration", criterion_6),
        ("satellite signature and verdicts", criterion_7),
        ("sigma is stable and congruence invariant", criterion_8),
        ("property suites", criterion_9),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}) [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({why}) [{took:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
