//! Joint possibility distributions on product spaces built from marginals.
//!
//! The product space is ordered through `Z(x) = max_i π_i(x_i)`; every joint
//! here is a non-decreasing function of `Z`, so it is also the upper CDF of a
//! p-box with vacuous lower bound on that preorder.

use std::collections::BTreeMap;

use crate::chain::Event;
use crate::error::{Error, Result};
use crate::possibility::PossDist;
use crate::rational::{self, Rational};

/// Separator between coordinates in product-point labels, as in `"u|s"`.
pub const SEPARATOR: char = '|';

/// Rectangle enumeration is refused beyond this many rectangles.
pub const MAX_RECTANGLES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginalFamily {
    marginals: Vec<PossDist>,
}

impl MarginalFamily {
    pub fn new(marginals: Vec<PossDist>) -> Result<Self> {
        if marginals.is_empty() {
            return Err(Error::EmptyFamily);
        }
        for pi in &marginals {
            if let Some(l) = pi.labels().find(|l| l.contains(SEPARATOR)) {
                return Err(Error::ReservedSeparator(l.to_string()));
            }
        }
        Ok(MarginalFamily { marginals })
    }

    pub fn marginals(&self) -> &[PossDist] {
        &self.marginals
    }

    /// Number of marginals, which is also the exponent used by the
    /// independence-based joints.
    pub fn len(&self) -> usize {
        self.marginals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marginals.is_empty()
    }

    /// All product points, lexicographic in the marginals' label order.
    pub fn points(&self) -> Vec<ProductPoint> {
        let mut points = vec![ProductPoint(Vec::new())];
        for pi in &self.marginals {
            points = points
                .into_iter()
                .flat_map(|p| {
                    pi.labels().map(move |l| {
                        let mut coords = p.0.clone();
                        coords.push(l.to_string());
                        ProductPoint(coords)
                    })
                })
                .collect();
        }
        points
    }

    /// Parses a product label such as `"u|s"`.
    pub fn point(&self, label: &str) -> Result<ProductPoint> {
        let point = ProductPoint(label.split(SEPARATOR).map(str::to_string).collect());
        self.check_point(&point)?;
        Ok(point)
    }

    fn check_point(&self, x: &ProductPoint) -> Result<()> {
        if x.0.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: x.0.len() });
        }
        for (pi, c) in self.marginals.iter().zip(&x.0) {
            pi.value(c)?;
        }
        Ok(())
    }
}

/// One coordinate label per marginal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductPoint(pub Vec<String>);

impl ProductPoint {
    pub fn label(&self) -> String {
        self.0.join(&SEPARATOR.to_string())
    }
}

/// How marginal upper probabilities of a rectangle's sides are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombinationRule {
    /// Dependence-free natural extension: the minimum.
    Frechet,
    /// Independent natural extension: the product.
    Independent,
}

impl CombinationRule {
    pub fn apply(&self, values: &[Rational]) -> Rational {
        match self {
            CombinationRule::Frechet => values.iter().min().cloned().unwrap_or_else(rational::one),
            CombinationRule::Independent => values.iter().fold(rational::one(), |acc, v| acc * v),
        }
    }
}

/// Which joint construction to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointRule {
    Frechet,
    Independent,
    RandomSetOuter,
}

pub fn z_map(family: &MarginalFamily, x: &ProductPoint) -> Result<Rational> {
    family.check_point(x)?;
    let mut z = rational::zero();
    for (pi, c) in family.marginals.iter().zip(&x.0) {
        let v = pi.value(c)?;
        if *v > z {
            z = v.clone();
        }
    }
    Ok(z)
}

fn joint_with(family: &MarginalFamily, f: impl Fn(&[&Rational]) -> Rational) -> PossDist {
    let values = family.points().into_iter().map(|x| {
        let coords: Vec<&Rational> = family
            .marginals
            .iter()
            .zip(&x.0)
            .map(|(pi, c)| pi.value(c).expect("point built from the family"))
            .collect();
        (x.label(), f(&coords))
    });
    PossDist::new(values).expect("every marginal attains 1")
}

fn max_coord(coords: &[&Rational]) -> Rational {
    coords.iter().map(|v| (*v).clone()).max().unwrap_or_else(rational::zero)
}

/// `π(x) = max_i π_i(x_i)`.
pub fn joint_frechet(family: &MarginalFamily) -> PossDist {
    joint_with(family, max_coord)
}

/// `π(x) = (max_i π_i(x_i))ⁿ`.
pub fn joint_independent(family: &MarginalFamily) -> PossDist {
    let n = family.len();
    joint_with(family, |c| rational::pow(&max_coord(c), n))
}

/// Outer approximation under random set independence,
/// `π(x) = 1 - max_i (1 - π_i(x_i))ⁿ`.
pub fn joint_rsi_outer(family: &MarginalFamily) -> PossDist {
    let n = family.len();
    joint_with(family, |coords| {
        let worst = coords
            .iter()
            .map(|v| rational::pow(&(rational::one() - *v), n))
            .max()
            .unwrap_or_else(rational::zero);
        rational::one() - worst
    })
}

pub fn joint(family: &MarginalFamily, rule: JointRule) -> PossDist {
    match rule {
        JointRule::Frechet => joint_frechet(family),
        JointRule::Independent => joint_independent(family),
        JointRule::RandomSetOuter => joint_rsi_outer(family),
    }
}

/// `u(Π₁(A₁), …, Πₙ(Aₙ))` for the rectangle `A₁ × … × Aₙ`.
pub fn combine_rectangle(
    family: &MarginalFamily,
    rectangle: &[Event],
    rule: CombinationRule,
) -> Result<Rational> {
    if rectangle.len() != family.len() {
        return Err(Error::DimensionMismatch { expected: family.len(), found: rectangle.len() });
    }
    let values =
        family.marginals.iter().zip(rectangle).map(|(pi, a)| pi.measure(a)).collect::<Result<Vec<_>>>()?;
    Ok(rule.apply(&values))
}

/// Projection of a joint onto coordinate `i`: the maximum over all points
/// sharing that coordinate.
pub fn outer_marginal(family: &MarginalFamily, joint: &PossDist, i: usize) -> Result<PossDist> {
    let pi =
        family.marginals.get(i).ok_or(Error::DimensionMismatch { expected: family.len(), found: i + 1 })?;
    let mut best: BTreeMap<String, Rational> =
        pi.labels().map(|l| (l.to_string(), rational::zero())).collect();
    for x in family.points() {
        let v = joint.value(&x.label())?;
        let slot = best.get_mut(&x.0[i]).expect("coordinate of the family");
        if v > slot {
            *slot = v.clone();
        }
    }
    PossDist::new(best)
}

/// Detailed result of [`least_conservative_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeastConservativeReport {
    pub rectangles: usize,
    /// Joint upper probability ≥ combination on every rectangle.
    pub dominates: bool,
    /// No Z-level of the joint can be lowered without losing dominance.
    pub minimal: bool,
    /// First rectangle (as label lists) violating dominance.
    pub dominance_violation: Option<Vec<Vec<String>>>,
    /// First Z-level `(z, joint value, best combination attainable by a
    /// rectangle whose maximal Z-level is z)` that could be lowered.
    pub slack_level: Option<(Rational, Rational, Rational)>,
}

impl LeastConservativeReport {
    pub fn passed(&self) -> bool {
        self.dominates && self.minimal
    }
}

/// Exhaustive rectangle enumeration shared by the least-conservative checks.
struct Rectangles {
    /// Per marginal: for every subset bitmask, its Π value and member indices.
    sides: Vec<Vec<(Rational, Vec<usize>)>>,
    strides: Vec<usize>,
}

impl Rectangles {
    fn new(family: &MarginalFamily) -> Result<Self> {
        let mut count: usize = 1;
        for pi in family.marginals() {
            count = count.saturating_mul(1 << pi.len().min(usize::BITS as usize - 1));
        }
        if count > MAX_RECTANGLES {
            return Err(Error::TooLarge { size: count, limit: MAX_RECTANGLES });
        }
        let sides = family
            .marginals()
            .iter()
            .map(|pi| {
                let values: Vec<&Rational> = pi.values().values().collect();
                (0u32..1 << values.len())
                    .map(|bits| {
                        let members: Vec<usize> = (0..values.len()).filter(|j| bits >> j & 1 == 1).collect();
                        let top = rational::max_of(members.iter().map(|&j| values[j]))
                            .unwrap_or_else(rational::zero);
                        (top, members)
                    })
                    .collect()
            })
            .collect();
        let mut strides = vec![1; family.len()];
        for i in (0..family.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * family.marginals()[i + 1].len();
        }
        Ok(Rectangles { sides, strides })
    }

    /// Visits every rectangle with its side choice (subset bitmask per
    /// marginal) and the flat point indices it contains.
    fn for_each(&self, mut visit: impl FnMut(&[usize], &mut dyn Iterator<Item = usize>)) {
        let n = self.sides.len();
        let mut choice = vec![0usize; n];
        loop {
            let mut flat = vec![0usize];
            for (i, &c) in choice.iter().enumerate() {
                let members = &self.sides[i][c].1;
                flat = flat
                    .iter()
                    .flat_map(|base| members.iter().map(move |&j| base + j * self.strides[i]))
                    .collect();
            }
            visit(&choice, &mut flat.into_iter());
            // odometer increment
            let mut i = n;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < self.sides[i].len() {
                    break;
                }
                choice[i] = 0;
            }
        }
    }
}

/// Sorted distinct Z-values and, per point (in [`MarginalFamily::points`]
/// order), the index of its Z-level.
fn z_levels(family: &MarginalFamily) -> (Vec<Rational>, Vec<usize>) {
    let zs: Vec<Rational> =
        family.points().iter().map(|x| z_map(family, x).expect("point built from the family")).collect();
    let mut levels = zs.clone();
    levels.sort();
    levels.dedup();
    let index = zs.iter().map(|z| levels.binary_search(z).expect("level present")).collect();
    (levels, index)
}

/// Checks by exhaustive rectangle enumeration that `joint` (a) dominates the
/// combination rule on every rectangle and (b) is pointwise minimal as an
/// upper CDF on the Z-preorder: for each Z-level some rectangle whose points
/// reach at most that level already forces the joint's value there.
pub fn check_least_conservative(
    family: &MarginalFamily,
    joint: &PossDist,
    rule: CombinationRule,
) -> Result<LeastConservativeReport> {
    let points = family.points();
    if joint.len() != points.len() {
        return Err(Error::JointMismatch(format!(
            "{} points in the joint, {} in the product",
            joint.len(),
            points.len()
        )));
    }
    let values: Vec<Rational> = points
        .iter()
        .map(|x| {
            joint
                .value(&x.label())
                .cloned()
                .map_err(|_| Error::JointMismatch(format!("missing point {}", x.label())))
        })
        .collect::<Result<_>>()?;

    let (levels, level_of) = z_levels(family);
    let mut level_value: Vec<Option<Rational>> = vec![None; levels.len()];
    for (v, &l) in values.iter().zip(&level_of) {
        match &level_value[l] {
            None => level_value[l] = Some(v.clone()),
            Some(w) if w != v => {
                return Err(Error::JointMismatch(format!(
                    "joint is not constant on the Z-level {}",
                    rational::format(&levels[l])
                )))
            }
            _ => {}
        }
    }
    let level_value: Vec<Rational> =
        level_value.into_iter().map(|v| v.expect("every level is attained")).collect();
    if level_value.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::JointMismatch("joint decreases along the Z-preorder".into()));
    }

    let rects = Rectangles::new(family)?;
    let mut count = 0usize;
    let mut dominance_violation = None;
    let mut best_at_level: Vec<Rational> = vec![rational::zero(); levels.len()];
    rects.for_each(|choice, members| {
        count += 1;
        let Some(top_level) = members.map(|j| level_of[j]).max() else {
            return;
        };
        let sides: Vec<Rational> =
            choice.iter().enumerate().map(|(i, &c)| rects.sides[i][c].0.clone()).collect();
        let combined = rule.apply(&sides);
        if level_value[top_level] < combined && dominance_violation.is_none() {
            let labels = choice
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let names: Vec<&str> = family.marginals()[i].labels().collect();
                    rects.sides[i][c].1.iter().map(|&j| names[j].to_string()).collect()
                })
                .collect();
            dominance_violation = Some(labels);
        }
        if combined > best_at_level[top_level] {
            best_at_level[top_level] = combined;
        }
    });

    let slack_level = (0..levels.len())
        .find(|&l| best_at_level[l] < level_value[l])
        .map(|l| (levels[l].clone(), level_value[l].clone(), best_at_level[l].clone()));

    Ok(LeastConservativeReport {
        rectangles: count,
        dominates: dominance_violation.is_none(),
        minimal: slack_level.is_none(),
        dominance_violation,
        slack_level,
    })
}

pub fn least_conservative_check(
    family: &MarginalFamily,
    joint: &PossDist,
    rule: CombinationRule,
) -> Result<bool> {
    Ok(check_least_conservative(family, joint, rule)?.passed())
}

/// The least upper CDF on the Z-preorder dominating the combination rule on
/// every rectangle, as `(z, value)` per Z-level, found by enumeration.
pub fn least_dominating_levels(
    family: &MarginalFamily,
    rule: CombinationRule,
) -> Result<Vec<(Rational, Rational)>> {
    let (levels, level_of) = z_levels(family);
    let rects = Rectangles::new(family)?;
    let mut best: Vec<Rational> = vec![rational::zero(); levels.len()];
    rects.for_each(|choice, members| {
        let Some(top_level) = members.map(|j| level_of[j]).max() else {
            return;
        };
        let sides: Vec<Rational> =
            choice.iter().enumerate().map(|(i, &c)| rects.sides[i][c].0.clone()).collect();
        let combined = rule.apply(&sides);
        if combined > best[top_level] {
            best[top_level] = combined;
        }
    });
    // cumulative maximum makes it a CDF
    for l in 1..best.len() {
        if best[l] < best[l - 1] {
            best[l] = best[l - 1].clone();
        }
    }
    Ok(levels.into_iter().zip(best).collect())
}

/// First rectangle `A₁ × … × Aₙ` (as label lists) on which the possibility
/// measure of `joint` falls below the combination of the marginal measures.
/// Unlike [`check_least_conservative`] the joint need not factor through Z.
pub fn rectangle_dominance_violation(
    family: &MarginalFamily,
    joint: &PossDist,
    rule: CombinationRule,
) -> Result<Option<Vec<Vec<String>>>> {
    let values: Vec<Rational> = family
        .points()
        .iter()
        .map(|x| {
            joint
                .value(&x.label())
                .cloned()
                .map_err(|_| Error::JointMismatch(format!("missing point {}", x.label())))
        })
        .collect::<Result<_>>()?;
    let rects = Rectangles::new(family)?;
    let mut violation = None;
    rects.for_each(|choice, members| {
        if violation.is_some() {
            return;
        }
        let measure = rational::max_of(members.map(|j| &values[j])).unwrap_or_else(rational::zero);
        let sides: Vec<Rational> =
            choice.iter().enumerate().map(|(i, &c)| rects.sides[i][c].0.clone()).collect();
        if measure < rule.apply(&sides) {
            violation = Some(
                choice
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| {
                        let names: Vec<&str> = family.marginals()[i].labels().collect();
                        rects.sides[i][c].1.iter().map(|&j| names[j].to_string()).collect()
                    })
                    .collect(),
            );
        }
    });
    Ok(violation)
}
