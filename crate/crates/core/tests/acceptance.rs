//! Acceptance gate. Every comparison is exact rational equality; each
//! criterion prints one PASS or FAIL line and the run fails if any does.

use pboxposs::chain::{Chain, Event};
use pboxposs::document::{render_distribution, ModelDocument};
use pboxposs::maxitive::{self, zero_one_view};
use pboxposs::multivariate::{self, CombinationRule, MarginalFamily};
use pboxposs::oracle::{self, enumerate};
use pboxposs::pbox::PBox;
use pboxposs::possibility::{self, PossDist};
use pboxposs::rational::{self, ratio, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// CDF values are drawn from `{0, 1/4, 1/2, 3/4, 1}`.
const GRID_DENOMINATOR: u32 = 4;

fn doc(p: &PBox) -> String {
    ModelDocument::from_pbox(p).to_json()
}

fn fam(family: &MarginalFamily) -> String {
    ModelDocument::from_family(family).to_json()
}

fn slack(r: &multivariate::LeastConservativeReport) -> String {
    match (&r.dominance_violation, &r.slack_level) {
        (Some(v), _) => format!("not dominating on {v:?}"),
        (None, Some((z, have, best))) => {
            format!("at Z-level {z} the joint is {have} but rectangles only force {best}")
        }
        (None, None) => "passes".into(),
    }
}

fn report(criterion: u32, name: &str, ok: bool, detail: &str) {
    println!("{} criterion {criterion}: {name} ({detail})", if ok { "PASS" } else { "FAIL" });
}

/// Singleton chains with 1 to `max_m` classes, plus every chain whose
/// classes have one or two labels when there are at most three classes.
fn chains(max_m: usize) -> Vec<Chain> {
    (1..=max_m).flat_map(|m| enumerate::chains(m, if m <= 3 { 2 } else { 1 })).collect()
}

fn pboxes(max_m: usize) -> Vec<PBox> {
    let grid = enumerate::grid(GRID_DENOMINATOR);
    chains(max_m).iter().flat_map(|c| enumerate::pboxes(c, &grid)).collect()
}

fn criterion_1_oracle_equivalence() -> bool {
    let instances = pboxes(5);
    let results: Vec<(usize, Option<String>)> = instances
        .par_iter()
        .map(|p| {
            let events = p.chain().events().unwrap();
            let bad = events.iter().find_map(|e| {
                let formula = p.upper_ext(e).unwrap();
                let lp = oracle::credal_upper_lp(p, e).unwrap();
                (formula != lp).then(|| format!("{} on {e}: {formula} vs {lp}", doc(p)))
            });
            (events.len(), bad)
        })
        .collect();
    let events: usize = results.iter().map(|r| r.0).sum();
    let failure = results.into_iter().find_map(|r| r.1);
    let ok = failure.is_none();
    report(
        1,
        "upper_ext equals the credal optimum",
        ok,
        &format!("{} p-boxes, {events} events", instances.len()),
    );
    if let Some(f) = failure {
        println!("  first failure: {f}");
    }
    ok
}

fn criterion_2_maxitivity_characterization() -> bool {
    let instances = pboxes(4);
    let failure = instances
        .par_iter()
        .find_first(|p| maxitive::is_maxitive(p) != oracle::exhaustive_maxpreserving(p).unwrap());
    let maxitive = instances.iter().filter(|p| maxitive::is_maxitive(p)).count();
    let ok = failure.is_none();
    report(
        2,
        "is_maxitive agrees with the pairwise sweep",
        ok,
        &format!("{} p-boxes, {maxitive} maxitive", instances.len()),
    );
    if let Some(f) = failure {
        println!("  first failure: {f:?}");
    }
    ok
}

fn criterion_3_specialized_formulas() -> bool {
    type Special = fn(&PBox, &Event) -> pboxposs::Result<Rational>;
    let instances = pboxes(5);
    let applicable = |p: &PBox| -> Vec<(&'static str, Special)> {
        let v = zero_one_view(p);
        let mut out: Vec<(&'static str, Special)> = Vec::new();
        if v.lower_is_01 {
            out.push(("01lower", maxitive::upper_ext_01lower));
        }
        if v.upper_is_01 {
            out.push(("01upper", maxitive::upper_ext_01upper));
        }
        if v.lower_is_01 && v.upper_is_01 {
            out.push(("01both", maxitive::upper_ext_01both));
        }
        out
    };
    let results: Vec<([usize; 3], Option<String>)> = instances
        .par_iter()
        .map(|p| {
            let forms = applicable(p);
            let mut counts = [0usize; 3];
            for (name, _) in &forms {
                counts[["01lower", "01upper", "01both"].iter().position(|n| n == name).unwrap()] += 1;
            }
            let mut bad = None;
            'events: for e in p.chain().events().unwrap() {
                let expected = p.upper_ext(&e).unwrap();
                for (name, f) in &forms {
                    let got = f(p, &e).unwrap();
                    if got != expected {
                        bad = Some(format!("{name} on {}, {e}: {got} vs {expected}", doc(p)));
                        break 'events;
                    }
                }
            }
            (counts, bad)
        })
        .collect();
    let mut counts = [0usize; 3];
    for (c, _) in &results {
        for i in 0..3 {
            counts[i] += c[i];
        }
    }
    let failure = results.into_iter().find_map(|r| r.1);
    let ok = failure.is_none() && counts.iter().all(|&c| c > 0);
    report(
        3,
        "0-1 closed forms equal upper_ext",
        ok,
        &format!("applicable instances: lower {}, upper {}, both {}", counts[0], counts[1], counts[2]),
    );
    if let Some(f) = failure {
        println!("  first failure: {f}");
    }
    ok
}

fn criterion_4_two_orderings_one_distribution() -> bool {
    let forward = PBox::parse(Chain::singletons(["x1", "x2"]).unwrap(), &["0", "1"], &["1/2", "1"]).unwrap();
    let backward = PBox::parse(Chain::singletons(["x2", "x1"]).unwrap(), &["1/2", "1"], &["1", "1"]).unwrap();
    let expected = PossDist::new([("x1", ratio(1, 2)), ("x2", rational::one())]).unwrap();
    let got: Vec<Option<PossDist>> = [&forward, &backward]
        .iter()
        .map(|p| possibility::pbox_to_possibility(p).unwrap().distribution().cloned())
        .collect();
    let ok = forward != backward && got.iter().all(|g| g.as_ref() == Some(&expected));
    let shown: Vec<_> = got.iter().map(|g| g.as_ref().map(render_distribution)).collect();
    report(4, "both orderings give pi(x1) = 1/2, pi(x2) = 1", ok, &format!("{shown:?}"));
    ok
}

fn criterion_5_level_set_round_trip() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(20_140_101);
    let samples: Vec<PossDist> = (0..1000).map(|_| enumerate::random_possibility(&mut rng, 6, 8)).collect();
    let failure = samples.par_iter().find_map_first(|pi| {
        let (chain, p) = possibility::possibility_to_pbox(pi).unwrap();
        chain.events().unwrap().into_iter().find_map(|e| {
            let (u, m) = (p.upper_ext(&e).unwrap(), pi.measure(&e).unwrap());
            (u != m).then(|| format!("{pi:?} on {e}: {u} vs {m}"))
        })
    });
    let sizes: Vec<usize> = (1..=6).map(|k| samples.iter().filter(|pi| pi.len() == k).count()).collect();
    let ok = failure.is_none();
    report(
        5,
        "upper_ext of the induced p-box equals the possibility measure",
        ok,
        &format!("1000 distributions, domain sizes 1..6: {sizes:?}"),
    );
    if let Some(f) = failure {
        println!("  first failure: {f}");
    }
    ok
}

fn criterion_6_credal_intersection() -> bool {
    let instances = pboxes(3);
    let intersection_failure = instances.par_iter().find_map_first(|p| {
        let (pi1, pi2) = possibility::conjunction_decompose(p).unwrap();
        oracle::credal_intersection_witness(p, &pi1, &pi2)
            .unwrap()
            .map(|e| format!("{}: differs on {e}", doc(p)))
    });
    let gap_failure = instances.par_iter().find_map_first(|p| {
        let chain = p.chain();
        let m = chain.len() as isize;
        for i in 0..m {
            for j in i + 1..m {
                let e = chain.class_range_event(i + 1, j);
                let approx = possibility::conjunction_bounds(p, &e).unwrap().approx_upper;
                let gap = approx - p.upper_ext(&e).unwrap();
                let expected = p.lower_at(i).min(rational::one() - p.upper_at(j));
                if gap != expected {
                    return Some(format!("{} on {e}: gap {gap} vs {expected}", doc(p)));
                }
            }
        }
        None
    });
    let ok = intersection_failure.is_none() && gap_failure.is_none();
    report(
        6,
        "credal set is the intersection of both possibility credal sets; gap formula",
        ok,
        &format!("{} p-boxes", instances.len()),
    );
    for f in intersection_failure.iter().chain(&gap_failure) {
        println!("  first failure: {f}");
    }
    ok
}

#[derive(Default)]
struct MultiTally {
    frechet_dominates: usize,
    frechet_minimal: usize,
    independent_dominates: usize,
    independent_minimal: usize,
    rsi_dominates: usize,
    rsi_tighter_points: (usize, usize),
    product_tighter_points: (usize, usize),
    first_failure: Option<String>,
}

fn multivariate_tally(family: &MarginalFamily) -> MultiTally {
    let mut t = MultiTally::default();
    let fail = |t: &mut MultiTally, what: String| {
        t.first_failure.get_or_insert(what);
    };
    let fr = multivariate::check_least_conservative(
        family,
        &multivariate::joint_frechet(family),
        CombinationRule::Frechet,
    )
    .unwrap();
    let ind_joint = multivariate::joint_independent(family);
    let ind =
        multivariate::check_least_conservative(family, &ind_joint, CombinationRule::Independent).unwrap();
    t.frechet_dominates += fr.dominates as usize;
    t.frechet_minimal += fr.minimal as usize;
    t.independent_dominates += ind.dominates as usize;
    t.independent_minimal += ind.minimal as usize;
    if !fr.passed() {
        fail(&mut t, format!("{}: Fréchet {}", fam(family), slack(&fr)));
    }
    if !ind.passed() {
        fail(&mut t, format!("{}: independent {}", fam(family), slack(&ind)));
    }
    let rsi = multivariate::joint_rsi_outer(family);
    let violation =
        multivariate::rectangle_dominance_violation(family, &rsi, CombinationRule::Independent).unwrap();
    t.rsi_dominates += violation.is_none() as usize;
    if let Some(v) = violation {
        fail(&mut t, format!("{}: random-set joint below product on {v:?}", fam(family)));
    }
    let half = ratio(1, 2);
    for x in family.points() {
        let coords: Vec<&Rational> =
            family.marginals().iter().zip(&x.0).map(|(pi, c)| pi.value(c).unwrap()).collect();
        let (r, i) = (rsi.value(&x.label()).unwrap(), ind_joint.value(&x.label()).unwrap());
        if coords.iter().any(|v| **v == rational::one()) {
            t.rsi_tighter_points.0 += 1;
            if r <= i {
                t.rsi_tighter_points.1 += 1;
            } else {
                fail(&mut t, format!("{} at {}: random-set {r} > independent {i}", fam(family), x.label()));
            }
        }
        if coords.iter().all(|v| **v < half) {
            t.product_tighter_points.0 += 1;
            if i <= r {
                t.product_tighter_points.1 += 1;
            } else {
                fail(&mut t, format!("{} at {}: independent {i} > random-set {r}", fam(family), x.label()));
            }
        }
    }
    t
}

fn criterion_7_multivariate() -> bool {
    let grid = enumerate::grid(GRID_DENOMINATOR);
    let mut families = enumerate::marginal_families(2, 3, &grid);
    families.extend(enumerate::marginal_families(3, 3, &grid));
    let parts: Vec<MultiTally> = families.par_iter().map(multivariate_tally).collect();
    let mut t = MultiTally::default();
    for p in parts {
        t.frechet_dominates += p.frechet_dominates;
        t.frechet_minimal += p.frechet_minimal;
        t.independent_dominates += p.independent_dominates;
        t.independent_minimal += p.independent_minimal;
        t.rsi_dominates += p.rsi_dominates;
        t.rsi_tighter_points.0 += p.rsi_tighter_points.0;
        t.rsi_tighter_points.1 += p.rsi_tighter_points.1;
        t.product_tighter_points.0 += p.product_tighter_points.0;
        t.product_tighter_points.1 += p.product_tighter_points.1;
        if t.first_failure.is_none() {
            t.first_failure = p.first_failure;
        }
    }
    let n = families.len();
    println!("  families: {n}");
    println!("  Fréchet joint: dominates {}/{n}, minimal {}/{n}", t.frechet_dominates, t.frechet_minimal);
    println!(
        "  independent joint: dominates {}/{n}, minimal {}/{n}",
        t.independent_dominates, t.independent_minimal
    );
    println!("  random-set joint dominates products: {}/{n}", t.rsi_dominates);
    println!(
        "  random-set tighter where some coordinate is 1: {}/{} points",
        t.rsi_tighter_points.1, t.rsi_tighter_points.0
    );
    println!(
        "  independent tighter where every coordinate is below 1/2: {}/{} points",
        t.product_tighter_points.1, t.product_tighter_points.0
    );
    let ok = t.first_failure.is_none();
    report(
        7,
        "least conservative joints and comparison of the two product models",
        ok,
        &format!("{n} families"),
    );
    if let Some(f) = t.first_failure {
        println!("  first failure: {f}");
    }
    ok
}

fn criterion_8_coherence() -> bool {
    let instances = pboxes(5);
    let failure = instances.par_iter().find_first(|p| !oracle::check_coherence(p));
    let ok = failure.is_none();
    report(8, "the credal set reproduces every p-box", ok, &format!("{} p-boxes", instances.len()));
    if let Some(f) = failure {
        println!("  first failure: {f:?}");
    }
    ok
}

fn main() {
    let criteria: [fn() -> bool; 8] = [
        criterion_1_oracle_equivalence,
        criterion_2_maxitivity_characterization,
        criterion_3_specialized_formulas,
        criterion_4_two_orderings_one_distribution,
        criterion_5_level_set_round_trip,
        criterion_6_credal_intersection,
        criterion_7_multivariate,
        criterion_8_coherence,
    ];
    let failed = criteria.iter().filter(|c| !c()).count();
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
