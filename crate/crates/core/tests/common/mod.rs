#![allow(dead_code)]

use monord::{LevelMatrix, WeylElement};
use rand::seq::SliceRandom;
use rand::Rng;

/// Shortest-path closure of nonnegative edge weights: always an order.
pub fn closure(n: usize, weights: &[i64]) -> LevelMatrix {
    let mut d = weights.to_vec();
    for i in 0..n {
        d[i * n + i] = 0;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i * n + k] + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    LevelMatrix::new(n, d).unwrap()
}

pub fn random_order(rng: &mut impl Rng, n: usize, bound: i64) -> LevelMatrix {
    let w: Vec<i64> = (0..n * n).map(|_| rng.gen_range(0..=bound)).collect();
    closure(n, &w)
}

pub fn random_element(rng: &mut impl Rng, n: usize, spread: i64) -> WeylElement {
    let shifts = (0..n).map(|_| rng.gen_range(-spread..=spread)).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    WeylElement::new(shifts, perm).unwrap()
}

/// Every level with zero first row and the remaining entries in `[0, bound]`
/// that is an order.
pub fn normalized_orders(n: usize, bound: i64) -> Vec<LevelMatrix> {
    monord::census::candidates(n, bound)
        .filter(LevelMatrix::is_order)
        .collect()
}

/// Every upper-triangular order with entries in `[0, bound]`.
pub fn triangular_orders(n: usize, bound: i64) -> Vec<LevelMatrix> {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut vals = vec![0i64; cells.len()];
    loop {
        let mut e = vec![0i64; n * n];
        for (&(i, j), &v) in cells.iter().zip(&vals) {
            e[i * n + j] = v;
        }
        let m = LevelMatrix::new(n, e).unwrap();
        if m.is_order() {
            out.push(m);
        }
        let mut idx = 0;
        loop {
            if idx == vals.len() {
                return out;
            }
            vals[idx] += 1;
            if vals[idx] <= bound {
                break;
            }
            vals[idx] = 0;
            idx += 1;
        }
    }
}
