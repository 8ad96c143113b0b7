//! Exhaustive verification suites comparing closed forms against the credal
//! oracle and against each other.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::chain::{Chain, Event};
use crate::document::ModelDocument;
use crate::error::{Error, Result};
use crate::maxitive::{self, zero_one_view};
use crate::multivariate::{self, CombinationRule, MarginalFamily};
use crate::oracle::{self, enumerate, simplex::LpOutcome, CredalLp};
use crate::pbox::{IntervalEvent, PBox};
use crate::possibility::{self, PossDist, PossibilityCheck};
use crate::rational::{self, Rational};

/// Upper bound on the estimated number of elementary checks in one run.
pub const MAX_WORK: u128 = 5_000_000;

/// Seed of the random distributions in the round-trip suite.
pub const ROUNDTRIP_SEED: u64 = 0x5EED;

/// Number of random distributions in the round-trip suite.
pub const ROUNDTRIP_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Oracle,
    Maxitive,
    Roundtrip,
    Conjunction,
    Multivariate,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Oracle, Suite::Maxitive, Suite::Roundtrip, Suite::Conjunction, Suite::Multivariate];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Maxitive => "maxitive",
            Suite::Roundtrip => "roundtrip",
            Suite::Conjunction => "conjunction",
            Suite::Multivariate => "multivariate",
        }
    }

    /// Default `(max classes, grid denominator)`. For the round-trip suite
    /// the first value bounds the domain size, for the multivariate suite the
    /// size of each marginal.
    pub fn defaults(&self) -> (usize, u32) {
        match self {
            Suite::Oracle => (5, 4),
            Suite::Maxitive => (4, 4),
            Suite::Roundtrip => (6, 8),
            Suite::Conjunction => (3, 4),
            Suite::Multivariate => (3, 4),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub max_classes: Option<usize>,
    pub grid: Option<u32>,
}

/// A failing instance, replayable through the command-line tool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub check: String,
    pub detail: String,
    pub document: ModelDocument,
    pub event: Option<Event>,
}

impl Counterexample {
    fn new(check: &str, document: ModelDocument, event: Option<&Event>, detail: String) -> Self {
        Counterexample { check: check.to_string(), detail, document, event: event.cloned() }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "check": self.check,
            "detail": self.detail,
            "document": serde_json::to_value(&self.document).expect("document serializes"),
        });
        if let Some(e) = &self.event {
            v["event"] = Value::String(e.iter().collect::<Vec<_>>().join(","));
        }
        v
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Option<Suite>,
    pub instances: usize,
    pub checks: usize,
    pub failures: usize,
    pub first_failure: Option<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.map(|s| s.name()),
            "instances": self.instances,
            "checks": self.checks,
            "failures": self.failures,
            "passed": self.passed(),
            "counterexample": self.first_failure.as_ref().map(Counterexample::to_json),
        })
    }
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: usize,
    first: Option<Counterexample>,
}

impl Tally {
    fn check(&mut self, ok: bool, fail: impl FnOnce() -> Counterexample) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(fail());
            }
        }
    }

    fn absorb(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failures += other.failures;
        if self.first.is_none() {
            self.first = other.first;
        }
    }
}

/// Runs `f` on every instance in parallel and merges in instance order, so
/// the reported counterexample does not depend on scheduling.
fn sweep<T: Sync>(
    suite: Suite,
    items: &[T],
    f: impl Fn(&T) -> Result<Tally> + Sync + Send,
) -> Result<SuiteReport> {
    let parts: Vec<Result<Tally>> = items.par_iter().map(f).collect();
    let mut total = Tally::default();
    for part in parts {
        total.absorb(part?);
    }
    Ok(SuiteReport {
        suite: Some(suite),
        instances: items.len(),
        checks: total.checks,
        failures: total.failures,
        first_failure: total.first,
    })
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of CDF value sequences of length `m` on the grid `{0, …, 1}` with
/// denominator `den`.
fn cdf_count(m: usize, den: u32) -> u128 {
    binomial(den as u128 + m as u128 - 1, m as u128 - 1)
}

fn guard(work: u128) -> Result<()> {
    if work > MAX_WORK {
        let size = usize::try_from(work).unwrap_or(usize::MAX);
        return Err(Error::TooLarge { size, limit: MAX_WORK as usize });
    }
    Ok(())
}

fn resolve(suite: Suite, opts: VerifyOptions) -> Result<(usize, u32)> {
    let (k, g) = suite.defaults();
    let k = opts.max_classes.unwrap_or(k);
    let g = opts.grid.unwrap_or(g);
    if k == 0 {
        return Err(Error::Precondition("max classes must be positive"));
    }
    if g == 0 {
        return Err(Error::Precondition("grid denominator must be positive"));
    }
    Ok((k, g))
}

/// The chains of the p-box sweeps: singleton classes for every size up to
/// `k`, and classes of one or two labels when there are at most three.
pub fn sweep_chains(k: usize) -> Vec<Chain> {
    (1..=k).flat_map(|m| enumerate::chains(m, if m <= 3 { 2 } else { 1 })).collect()
}

fn pbox_instances(
    chains: &[Chain],
    den: u32,
    per_instance_work: impl Fn(&Chain) -> u128,
) -> Result<Vec<PBox>> {
    let mut work: u128 = 0;
    for c in chains {
        let n = cdf_count(c.len(), den);
        work = work.saturating_add(n.saturating_mul(n).saturating_mul(per_instance_work(c)));
    }
    guard(work)?;
    let values = enumerate::grid(den);
    Ok(chains.iter().flat_map(|c| enumerate::pboxes(c, &values)).collect())
}

fn show(v: &Rational) -> String {
    rational::format(v)
}

/// Class-level LP optimum for every class mask, indexed by bitmask.
fn lp_uppers(p: &PBox) -> Vec<Rational> {
    let m = p.chain().len();
    let lp = CredalLp::class_level(p);
    (0u32..1 << m)
        .map(|bits| {
            let mask: Vec<bool> = (0..m).map(|i| bits >> i & 1 == 1).collect();
            match lp.maximize(&mask) {
                LpOutcome::Optimal { value, .. } => value,
                other => panic!("credal program has no optimum: {other:?}"),
            }
        })
        .collect()
}

fn mask_bits(mask: &[bool]) -> usize {
    mask.iter().enumerate().filter(|(_, &h)| h).map(|(i, _)| 1 << i).sum()
}

fn oracle_instance(p: &PBox) -> Result<Tally> {
    let mut t = Tally::default();
    let chain = p.chain();
    let doc = || ModelDocument::from_pbox(p);
    let uppers = lp_uppers(p);
    for e in chain.events()? {
        let lp_upper = &uppers[mask_bits(&chain.hit_classes(&e)?)];
        let formula = p.upper_ext(&e)?;
        t.check(formula == *lp_upper, || {
            Counterexample::new(
                "upper_ext equals the credal optimum",
                doc(),
                Some(&e),
                format!("upper_ext {} but credal optimum {}", show(&formula), show(lp_upper)),
            )
        });
        let complement = chain.complement(&e)?;
        let lp_lower = rational::one() - &uppers[mask_bits(&chain.hit_classes(&complement)?)];
        let formula = p.lower_ext(&e)?;
        t.check(formula == lp_lower, || {
            Counterexample::new(
                "lower_ext equals the credal lower envelope",
                doc(),
                Some(&e),
                format!("lower_ext {} but credal lower {}", show(&formula), show(&lp_lower)),
            )
        });
    }
    t.check(oracle::check_coherence(p), || {
        Counterexample::new("credal set reproduces the bounds", doc(), None, "coherence fails".into())
    });
    let reps: Vec<&str> = chain.classes().iter().map(|c| c[0].as_str()).collect();
    let mut intervals: Vec<IntervalEvent<'_>> = reps.iter().map(|x| IntervalEvent::Singleton(x)).collect();
    for (i, x) in reps.iter().enumerate() {
        for y in &reps[i + 1..] {
            intervals.extend([
                IntervalEvent::LeftOpen(x, y),
                IntervalEvent::Closed(x, y),
                IntervalEvent::Open(x, y),
                IntervalEvent::RightOpen(x, y),
            ]);
        }
    }
    for iv in intervals {
        let e = iv.to_event(chain)?;
        let closed = p.interval_upper(iv)?;
        let expected = p.upper_ext(&e)?;
        t.check(closed == expected, || {
            Counterexample::new(
                "interval closed form equals upper_ext",
                doc(),
                Some(&e),
                format!("{iv:?}: closed form {} but upper_ext {}", show(&closed), show(&expected)),
            )
        });
    }
    Ok(t)
}

fn maxitive_instance(p: &PBox) -> Result<Tally> {
    let mut t = Tally::default();
    let doc = || ModelDocument::from_pbox(p);
    let formula = maxitive::is_maxitive(p);
    let witness = oracle::max_preserving_witness(p)?;
    t.check(formula == witness.is_none(), || {
        let detail = match &witness {
            Some((a, b)) => format!("is_maxitive true but max fails on {a} and {b}"),
            None => "is_maxitive false but every pair preserves the maximum".into(),
        };
        Counterexample::new("is_maxitive agrees with the pairwise sweep", doc(), None, detail)
    });
    let converted = possibility::pbox_to_possibility(p)?;
    let is_poss = matches!(converted, PossibilityCheck::Possibility(_));
    t.check(is_poss == formula, || {
        Counterexample::new(
            "conversion succeeds exactly on maxitive p-boxes",
            doc(),
            None,
            format!("is_maxitive {formula}, conversion {}", if is_poss { "succeeds" } else { "fails" }),
        )
    });
    let view = zero_one_view(p);
    type Special = fn(&PBox, &Event) -> Result<Rational>;
    let mut specials: Vec<(&str, Special)> = Vec::new();
    if view.lower_is_01 {
        specials.push(("0-1 lower closed form equals upper_ext", maxitive::upper_ext_01lower));
    }
    if view.upper_is_01 {
        specials.push(("0-1 upper closed form equals upper_ext", maxitive::upper_ext_01upper));
    }
    if view.lower_is_01 && view.upper_is_01 {
        specials.push(("0-1 two-sided closed form equals upper_ext", maxitive::upper_ext_01both));
    }
    let chain = p.chain();
    for e in chain.events()? {
        let expected = p.upper_ext(&e)?;
        for (name, f) in &specials {
            let value = f(p, &e)?;
            t.check(value == expected, || {
                Counterexample::new(
                    name,
                    doc(),
                    Some(&e),
                    format!("closed form {} but upper_ext {}", show(&value), show(&expected)),
                )
            });
        }
        if let PossibilityCheck::Possibility(pi) = &converted {
            let measure = pi.measure(&e)?;
            t.check(measure == expected, || {
                Counterexample::new(
                    "converted distribution reproduces upper_ext",
                    doc(),
                    Some(&e),
                    format!("possibility {} but upper_ext {}", show(&measure), show(&expected)),
                )
            });
        }
    }
    Ok(t)
}

fn roundtrip_instance(pi: &PossDist) -> Result<Tally> {
    let mut t = Tally::default();
    let doc = || ModelDocument::from_possibility(pi);
    let (chain, p) = possibility::possibility_to_pbox(pi)?;
    for e in chain.events()? {
        let measure = pi.measure(&e)?;
        let upper = p.upper_ext(&e)?;
        t.check(upper == measure, || {
            Counterexample::new(
                "induced p-box reproduces the possibility measure",
                doc(),
                Some(&e),
                format!("upper_ext {} but possibility {}", show(&upper), show(&measure)),
            )
        });
        let necessity = pi.necessity(&e)?;
        let lower = p.lower_ext(&e)?;
        t.check(lower == necessity, || {
            Counterexample::new(
                "induced p-box reproduces the necessity measure",
                doc(),
                Some(&e),
                format!("lower_ext {} but necessity {}", show(&lower), show(&necessity)),
            )
        });
    }
    let back = possibility::pbox_to_possibility(&p)?;
    t.check(back.distribution() == Some(pi), || {
        Counterexample::new(
            "conversion back returns the distribution",
            doc(),
            None,
            format!("converted back to {back:?}"),
        )
    });
    Ok(t)
}

fn conjunction_instance(p: &PBox) -> Result<Tally> {
    let mut t = Tally::default();
    let doc = || ModelDocument::from_pbox(p);
    let (pi1, pi2) = possibility::conjunction_decompose(p)?;
    let witness = oracle::credal_intersection_witness(p, &pi1, &pi2)?;
    t.check(witness.is_none(), || {
        Counterexample::new(
            "credal set equals the intersection of both possibility credal sets",
            doc(),
            witness.as_ref(),
            "upper probabilities differ".into(),
        )
    });
    let chain = p.chain();
    for e in chain.events()? {
        let bounds = possibility::conjunction_bounds(p, &e)?;
        let (lower, upper) = (p.lower_ext(&e)?, p.upper_ext(&e)?);
        t.check(bounds.approx_lower <= lower && upper <= bounds.approx_upper, || {
            Counterexample::new(
                "possibility bounds enclose the p-box bounds",
                doc(),
                Some(&e),
                format!(
                    "[{}, {}] does not enclose [{}, {}]",
                    show(&bounds.approx_lower),
                    show(&bounds.approx_upper),
                    show(&lower),
                    show(&upper)
                ),
            )
        });
    }
    let m = chain.len() as isize;
    for i in 0..m {
        for j in i + 1..m {
            let e = chain.class_range_event(i + 1, j);
            let bounds = possibility::conjunction_bounds(p, &e)?;
            let gap = &bounds.approx_upper - p.upper_ext(&e)?;
            let expected = p.lower_at(i).min(rational::one() - p.upper_at(j));
            t.check(gap == expected, || {
                Counterexample::new(
                    "gap on (x, y] equals min(lower(x), 1 - upper(y))",
                    doc(),
                    Some(&e),
                    format!("gap {} but expected {}", show(&gap), show(&expected)),
                )
            });
        }
    }
    Ok(t)
}

fn multivariate_instance(family: &MarginalFamily) -> Result<Tally> {
    let mut t = Tally::default();
    let doc = || ModelDocument::from_family(family);
    let cases = [
        ("Fréchet joint", multivariate::joint_frechet(family), CombinationRule::Frechet),
        ("independent joint", multivariate::joint_independent(family), CombinationRule::Independent),
    ];
    for (name, joint, rule) in &cases {
        let report = multivariate::check_least_conservative(family, joint, *rule)?;
        t.check(report.dominates, || {
            Counterexample::new(
                &format!("{name} dominates its rule on every rectangle"),
                doc(),
                None,
                format!("violated on {:?}", report.dominance_violation),
            )
        });
        t.check(report.minimal, || {
            let (z, have, best) = report.slack_level.clone().expect("slack when not minimal");
            Counterexample::new(
                &format!("{name} is least conservative"),
                doc(),
                None,
                format!(
                    "at Z-level {} the joint is {} but rectangles only force {}",
                    show(&z),
                    show(&have),
                    show(&best)
                ),
            )
        });
    }
    let rsi = multivariate::joint_rsi_outer(family);
    let violation = multivariate::rectangle_dominance_violation(family, &rsi, CombinationRule::Independent)?;
    t.check(violation.is_none(), || {
        Counterexample::new(
            "random-set outer joint dominates rectangle products",
            doc(),
            None,
            format!("violated on {violation:?}"),
        )
    });
    let ind = &cases[1].1;
    let half = rational::ratio(1, 2);
    for x in family.points() {
        let coords: Vec<&Rational> =
            family.marginals().iter().zip(&x.0).map(|(pi, c)| pi.value(c)).collect::<Result<_>>()?;
        let label = x.label();
        let (r, i) = (rsi.value(&label)?, ind.value(&label)?);
        if coords.iter().any(|v| **v == rational::one()) {
            t.check(r <= i, || {
                Counterexample::new(
                    "random-set joint is tighter when some coordinate has possibility 1",
                    doc(),
                    None,
                    format!("at {label}: random-set {} exceeds independent {}", show(r), show(i)),
                )
            });
        }
        if coords.iter().all(|v| **v < half) {
            t.check(i <= r, || {
                Counterexample::new(
                    "independent joint is tighter when every coordinate is below 1/2",
                    doc(),
                    None,
                    format!("at {label}: independent {} exceeds random-set {}", show(i), show(r)),
                )
            });
        }
    }
    Ok(t)
}

/// Runs one suite.
pub fn run_suite(suite: Suite, opts: VerifyOptions) -> Result<SuiteReport> {
    let (k, den) = resolve(suite, opts)?;
    match suite {
        Suite::Oracle => {
            let chains = sweep_chains(k);
            let items = pbox_instances(&chains, den, |c| 1 << c.num_labels())?;
            sweep(suite, &items, oracle_instance)
        }
        Suite::Maxitive => {
            let chains = sweep_chains(k);
            let items = pbox_instances(&chains, den, |c| 1 << (2 * c.num_labels()))?;
            sweep(suite, &items, maxitive_instance)
        }
        Suite::Roundtrip => {
            guard((ROUNDTRIP_SAMPLES as u128) << k.min(64))?;
            let mut rng = ChaCha8Rng::seed_from_u64(ROUNDTRIP_SEED);
            let items: Vec<PossDist> =
                (0..ROUNDTRIP_SAMPLES).map(|_| enumerate::random_possibility(&mut rng, k, den)).collect();
            sweep(suite, &items, roundtrip_instance)
        }
        Suite::Conjunction => {
            if k > oracle::MAX_CONSTRAINT_LABELS {
                return Err(Error::TooLarge { size: k, limit: oracle::MAX_CONSTRAINT_LABELS });
            }
            let chains: Vec<Chain> = (1..=k).flat_map(|m| enumerate::chains(m, 1)).collect();
            let items = pbox_instances(&chains, den, |c| 1 << (2 * c.num_labels()))?;
            sweep(suite, &items, conjunction_instance)
        }
        Suite::Multivariate => {
            let axis: u128 = (1..=k).map(|s| cdf_count(s, den)).sum();
            let rects: u128 = 1u128 << (3 * k).min(100);
            guard(axis.saturating_pow(3).saturating_mul(rects))?;
            let values = enumerate::grid(den);
            let mut items = enumerate::marginal_families(2, k, &values);
            items.extend(enumerate::marginal_families(3, k, &values));
            sweep(suite, &items, multivariate_instance)
        }
    }
}
