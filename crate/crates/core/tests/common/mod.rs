#![allow(dead_code)]

use fmetric::{FiniteSpace, Generator, Witness};
use proptest::prelude::*;

pub fn space_from_upper(n: usize, upper: &[f64]) -> FiniteSpace {
    let mut rows = vec![vec![0.0; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            rows[i][j] = upper[k];
            rows[j][i] = upper[k];
            k += 1;
        }
    }
    FiniteSpace::from_rows(rows).unwrap()
}

/// Random spaces with 2..=max_n points and off-diagonal entries in [lo, hi].
pub fn arb_space(max_n: usize, lo: f64, hi: f64) -> impl Strategy<Value = FiniteSpace> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(lo..=hi, n * (n - 1) / 2).prop_map(move |upper| space_from_upper(n, &upper))
    })
}

pub fn arb_witness() -> impl Strategy<Value = Witness> {
    (
        prop::sample::select(Generator::CATALOG.to_vec()),
        prop::sample::select(vec![0.0, 2f64.ln(), 3f64.ln()]),
    )
        .prop_map(|(g, a)| Witness::new(g, a).unwrap())
}

/// Every simple chain from `from` to `to`, by enumerating ordered subsets of
/// the remaining points. Independent of both library chain routines.
pub fn simple_chain_sums(space: &FiniteSpace, from: usize, to: usize) -> Vec<(Vec<usize>, f64)> {
    let others: Vec<usize> = (0..space.len()).filter(|&k| k != from && k != to).collect();
    let mut out = Vec::new();
    let mut prefix = vec![from];
    extend(space, &others, to, &mut prefix, &mut vec![false; others.len()], &mut out);
    out
}

fn extend(
    space: &FiniteSpace,
    others: &[usize],
    to: usize,
    prefix: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<(Vec<usize>, f64)>,
) {
    let mut chain = prefix.clone();
    chain.push(to);
    let sum = chain.windows(2).map(|w| space.d(w[0], w[1])).sum();
    out.push((chain, sum));
    for k in 0..others.len() {
        if used[k] {
            continue;
        }
        used[k] = true;
        prefix.push(others[k]);
        extend(space, others, to, prefix, used, out);
        prefix.pop();
        used[k] = false;
    }
}

pub fn squared(n: usize) -> FiniteSpace {
    FiniteSpace::from_fn(n, |i, j| (i as f64 - j as f64).powi(2)).unwrap()
}
