//! Random instances shared by the integration suites.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weaver_core::algebra::{OrderOneFragment, ProductOfFragments};
use weaver_core::{canonicalize, CountModel, Pattern, SimplexPoint};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A pattern over `n` ions with at least two ions set.
pub fn multi_ion_pattern(rng: &mut impl Rng, n: usize) -> Pattern {
    loop {
        let bits: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        if bits.iter().filter(|b| **b).count() >= 2 {
            return Pattern::from_bits(&bits);
        }
    }
}

/// Ionic counts in `a_range`, up to `q_max` unionic terms with counts in
/// `b_range`. Integer counts keep merged duplicates exact.
pub fn random_model(
    rng: &mut impl Rng,
    n_max: usize,
    q_max: usize,
    a_range: (i32, i32),
    b_range: (i32, i32),
) -> CountModel {
    loop {
        let n = rng.random_range(2..=n_max);
        let q = rng.random_range(0..=q_max);
        let mut terms: Vec<(Pattern, f64)> = (0..n)
            .map(|i| {
                (
                    Pattern::unit(n, i),
                    rng.random_range(a_range.0..=a_range.1) as f64,
                )
            })
            .collect();
        for _ in 0..q {
            let b = rng.random_range(b_range.0..=b_range.1);
            if b != 0 {
                terms.push((multi_ion_pattern(rng, n), b as f64));
            }
        }
        if let Ok(m) = canonicalize(&terms) {
            if m.n() == n {
                return m;
            }
        }
    }
}

/// A point with every coordinate at least `floor` before normalising.
pub fn interior_point(rng: &mut impl Rng, n: usize, floor: f64) -> SimplexPoint {
    SimplexPoint::new((0..n).map(|_| rng.random_range(floor..1.0)).collect()).unwrap()
}

/// Random product of distinct patterns over `n` ions with integer counts.
pub fn random_product(rng: &mut impl Rng, n: usize, order: usize) -> ProductOfFragments {
    let mut frags: Vec<OrderOneFragment> = Vec::new();
    while frags.len() < order {
        let bits: Vec<bool> = (0..n).map(|_| rng.random_bool(0.4)).collect();
        let p = Pattern::from_bits(&bits);
        if p.is_zero() || frags.iter().any(|f| f.pattern() == &p) {
            continue;
        }
        let c = loop {
            let c = rng.random_range(-5..=9);
            if c != 0 {
                break c;
            }
        };
        frags.push(OrderOneFragment::new(p, c as f64).unwrap());
    }
    ProductOfFragments::new(n, frags).unwrap()
}

/// Splits each fragment of `omega` into disjoint pieces whose counts add up
/// to at least the original count (exactly when `exact`).
pub fn random_refinement(
    rng: &mut impl Rng,
    omega: &ProductOfFragments,
    exact: bool,
) -> ProductOfFragments {
    let n = omega.n();
    let mut out = Vec::new();
    for f in omega.fragments() {
        let ions: Vec<usize> = f.pattern().iter_ones().collect();
        let pieces = rng.random_range(1..=ions.len().min(3));
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); pieces];
        for (k, &i) in ions.iter().enumerate() {
            let g = if k < pieces {
                k
            } else {
                rng.random_range(0..pieces)
            };
            groups[g].push(i);
        }
        let slack = if exact { 0 } else { rng.random_range(0..=3) };
        let total = match f.count() as i64 + slack {
            0 => f.count() as i64,
            t => t,
        };
        let counts = loop {
            let mut c: Vec<i64> = (1..pieces).map(|_| rng.random_range(-4..=6)).collect();
            c.push(total - c.iter().sum::<i64>());
            if c.iter().all(|v| *v != 0) {
                break c;
            }
        };
        for (g, c) in groups.iter().zip(&counts) {
            out.push(OrderOneFragment::new(Pattern::from_indices(n, g), *c as f64).unwrap());
        }
    }
    ProductOfFragments::new(n, out).unwrap()
}
