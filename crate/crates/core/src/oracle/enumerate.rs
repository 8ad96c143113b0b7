//! Finite instance generators for exhaustive checks.

use rand::Rng;

use crate::chain::Chain;
use crate::multivariate::MarginalFamily;
use crate::pbox::PBox;
use crate::possibility::PossDist;
use crate::rational::{self, Rational};

/// `{0, 1/den, …, 1}`.
pub fn grid(den: u32) -> Vec<Rational> {
    assert!(den > 0, "grid denominator must be positive");
    (0..=den as i64).map(|k| rational::ratio(k, den as i64)).collect()
}

/// Every non-decreasing sequence of length `m` over `values` ending in 1.
/// `values` must be sorted and contain 1.
pub fn cdf_sequences(m: usize, values: &[Rational]) -> Vec<Vec<Rational>> {
    fn extend(
        prefix: &mut Vec<Rational>,
        from: usize,
        remaining: usize,
        values: &[Rational],
        out: &mut Vec<Vec<Rational>>,
    ) {
        if remaining == 1 {
            let mut done = prefix.clone();
            done.push(rational::one());
            out.push(done);
            return;
        }
        for k in from..values.len() {
            prefix.push(values[k].clone());
            extend(prefix, k, remaining - 1, values, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        extend(&mut Vec::with_capacity(m), 0, m, values, &mut out);
    }
    out
}

/// Every p-box on `chain` whose bounds take values in `values`.
pub fn pboxes(chain: &Chain, values: &[Rational]) -> Vec<PBox> {
    let seqs = cdf_sequences(chain.len(), values);
    let mut out = Vec::new();
    for lower in &seqs {
        for upper in &seqs {
            if lower.iter().zip(upper).all(|(l, u)| l <= u) {
                out.push(PBox::new(chain.clone(), lower.clone(), upper.clone()).expect("valid bounds"));
            }
        }
    }
    out
}

fn class_label(class: usize, member: usize, size: usize) -> String {
    let letter = (b'a' + class as u8) as char;
    if size == 1 {
        letter.to_string()
    } else {
        format!("{letter}{}", member + 1)
    }
}

/// A chain with the given class sizes, labelled `a`, `b`, … (or `a1`, `a2`, …
/// inside larger classes).
pub fn chain_with_sizes(sizes: &[usize]) -> Chain {
    let classes =
        sizes.iter().enumerate().map(|(i, &s)| (0..s).map(|j| class_label(i, j, s)).collect::<Vec<_>>());
    Chain::new(classes).expect("sizes are positive")
}

/// Every chain with `m` classes of size 1 through `max_size`.
pub fn chains(m: usize, max_size: usize) -> Vec<Chain> {
    let mut out = Vec::new();
    let mut sizes = vec![1; m];
    loop {
        out.push(chain_with_sizes(&sizes));
        let mut i = 0;
        while i < m && sizes[i] == max_size {
            sizes[i] = 1;
            i += 1;
        }
        if i == m {
            return out;
        }
        sizes[i] += 1;
    }
}

/// Every normalized possibility distribution on `labels` with values in
/// `values`.
pub fn possibility_distributions(labels: &[String], values: &[Rational]) -> Vec<PossDist> {
    let n = labels.len();
    let mut out = Vec::new();
    let mut digits = vec![0usize; n];
    let top = values.len();
    loop {
        if digits.iter().any(|&d| values[d] == rational::one()) {
            let pairs = labels.iter().cloned().zip(digits.iter().map(|&d| values[d].clone()));
            out.push(PossDist::new(pairs).expect("normalized"));
        }
        let mut i = 0;
        while i < n && digits[i] + 1 == top {
            digits[i] = 0;
            i += 1;
        }
        if i == n {
            return out;
        }
        digits[i] += 1;
    }
}

/// Possibility distributions on `size` points up to relabelling: the value
/// vectors are sorted ascending and end in 1. Labels are `{prefix}1`,
/// `{prefix}2`, ….
pub fn canonical_marginals(prefix: &str, size: usize, values: &[Rational]) -> Vec<PossDist> {
    let labels: Vec<String> = (1..=size).map(|j| format!("{prefix}{j}")).collect();
    cdf_sequences(size, values)
        .into_iter()
        .map(|seq| PossDist::new(labels.iter().cloned().zip(seq)).expect("normalized"))
        .collect()
}

/// Every family of `n` canonical marginals, each on 1 through `max_size`
/// points. Marginal `i` uses the letter prefix `x`, `y`, `z`, ….
pub fn marginal_families(n: usize, max_size: usize, values: &[Rational]) -> Vec<MarginalFamily> {
    let per_axis: Vec<Vec<PossDist>> = (0..n)
        .map(|i| {
            let prefix = ((b'x' + i as u8 - if i >= 3 { 26 } else { 0 }) as char).to_string();
            (1..=max_size).flat_map(|s| canonical_marginals(&prefix, s, values)).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut digits = vec![0usize; n];
    loop {
        let marginals = digits.iter().zip(&per_axis).map(|(&d, axis)| axis[d].clone()).collect();
        out.push(MarginalFamily::new(marginals).expect("distinct coordinates"));
        let mut i = 0;
        while i < n && digits[i] + 1 == per_axis[i].len() {
            digits[i] = 0;
            i += 1;
        }
        if i == n {
            return out;
        }
        digits[i] += 1;
    }
}

/// A random normalized distribution on `x1 … xk`, `1 ≤ k ≤ max_size`, with
/// values on the grid of denominator `den`.
pub fn random_possibility<R: Rng>(rng: &mut R, max_size: usize, den: u32) -> PossDist {
    let size = rng.gen_range(1..=max_size);
    let peak = rng.gen_range(0..size);
    let pairs = (0..size).map(|j| {
        let v = if j == peak {
            rational::one()
        } else {
            rational::ratio(rng.gen_range(0..=den) as i64, den as i64)
        };
        (format!("x{}", j + 1), v)
    });
    PossDist::new(pairs).expect("normalized")
}
