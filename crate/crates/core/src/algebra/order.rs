//! The covering and refinement relations between products of fragments.

use std::collections::BTreeSet;

use super::fragment::{OrderOneFragment, ProductOfFragments};
use crate::error::{Error, Result};
use crate::model::Pattern;

/// Largest product (in fragments) the refinement search accepts.
pub const REFINEMENT_CAP: usize = 16;

/// `upper` covers `lower` iff `δ_lower ≤ δ_upper` componentwise. Counts are
/// irrelevant.
pub fn covers(upper: &OrderOneFragment, lower: &OrderOneFragment) -> bool {
    lower.pattern().is_subset_of(upper.pattern())
}

/// Equal-order covering: every fragment of `lower` is covered by a distinct
/// fragment of `upper`. Decided by bipartite matching.
pub fn covers_product(upper: &ProductOfFragments, lower: &ProductOfFragments) -> bool {
    if upper.n() != lower.n() || upper.order() != lower.order() {
        return false;
    }
    let up = upper.fragments();
    let lo = lower.fragments();
    let adj: Vec<Vec<usize>> = lo
        .iter()
        .map(|l| (0..up.len()).filter(|&u| covers(&up[u], l)).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; up.len()];
    for l in 0..lo.len() {
        let mut seen = vec![false; up.len()];
        if !augment(l, &adj, &mut owner, &mut seen) {
            return false;
        }
    }
    true
}

fn augment(l: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &u in &adj[l] {
        if seen[u] {
            continue;
        }
        seen[u] = true;
        if owner[u].is_none() || augment(owner[u].unwrap(), adj, owner, seen) {
            owner[u] = Some(l);
            return true;
        }
    }
    false
}

/// Same set of event patterns.
pub fn collects_with(p1: &ProductOfFragments, p2: &ProductOfFragments) -> bool {
    if p1.n() != p2.n() {
        return false;
    }
    let s1: BTreeSet<&Pattern> = p1.fragments().iter().map(|f| f.pattern()).collect();
    let s2: BTreeSet<&Pattern> = p2.fragments().iter().map(|f| f.pattern()).collect();
    s1 == s2
}

/// Outcome of [`refines`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Refinement {
    /// Every fragment of Ω is assembled exactly from disjoint groups of Ξ,
    /// group counts equal Ω's counts, and the groups use all of Ξ.
    Splits,
    /// The groups exist with count domination, but not as a split.
    Refines,
    No,
}

#[derive(Clone, Copy)]
struct Group {
    mask: u32,
    count: f64,
    scale: f64,
}

/// Decides whether `xi` refines `omega`: each `δ_j` of Ω must be the exact sum
/// of a non-empty group of Ξ's patterns, the groups pairwise disjoint, and
/// each group's counts must reach `ρ_j`.
pub fn refines(xi: &ProductOfFragments, omega: &ProductOfFragments) -> Result<Refinement> {
    if xi.n() != omega.n() {
        return Err(Error::DimensionMismatch(format!(
            "products over {} and {} ions",
            xi.n(),
            omega.n()
        )));
    }
    let r = xi.order();
    let q = omega.order();
    let size = r.max(q);
    if size > REFINEMENT_CAP {
        return Err(Error::SizeCap {
            size,
            cap: REFINEMENT_CAP,
        });
    }
    let gammas = xi.fragments();
    let options: Vec<Vec<Group>> = omega
        .fragments()
        .iter()
        .map(|target| exact_groups(gammas, target.pattern()))
        .collect();
    if options.iter().any(|o| o.is_empty()) {
        return Ok(Refinement::No);
    }
    // most constrained first
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by_key(|&j| options[j].len());
    let rho: Vec<f64> = omega.fragments().iter().map(|f| f.count()).collect();
    let full = (1u32 << r) - 1;

    if search_split(&order, 0, 0, &options, &rho, full) {
        return Ok(Refinement::Splits);
    }
    let refine = search(&order, 0, 0, &options, &rho);
    Ok(if refine {
        Refinement::Refines
    } else {
        Refinement::No
    })
}

fn tol(g: &Group, rho: f64) -> f64 {
    1e-9 * g.scale.max(rho.abs()).max(1.0)
}

/// All groups of `gammas` whose patterns are pairwise disjoint and sum to
/// `target`.
fn exact_groups(gammas: &[OrderOneFragment], target: &Pattern) -> Vec<Group> {
    let candidates: Vec<usize> = (0..gammas.len())
        .filter(|&i| gammas[i].pattern().is_subset_of(target))
        .collect();
    let mut out = Vec::new();
    let mut acc = Pattern::zeros(target.len());
    collect_groups(
        gammas,
        &candidates,
        0,
        &mut acc,
        0,
        0.0,
        0.0,
        target,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn collect_groups(
    gammas: &[OrderOneFragment],
    candidates: &[usize],
    at: usize,
    acc: &mut Pattern,
    mask: u32,
    count: f64,
    scale: f64,
    target: &Pattern,
    out: &mut Vec<Group>,
) {
    if at == candidates.len() {
        if mask != 0 && acc == target {
            out.push(Group { mask, count, scale });
        }
        return;
    }
    collect_groups(
        gammas,
        candidates,
        at + 1,
        acc,
        mask,
        count,
        scale,
        target,
        out,
    );
    let i = candidates[at];
    let g = &gammas[i];
    if g.pattern().is_disjoint(acc) {
        let saved = acc.clone();
        acc.union_in_place(g.pattern());
        collect_groups(
            gammas,
            candidates,
            at + 1,
            acc,
            mask | (1 << i),
            count + g.count(),
            scale + g.count().abs(),
            target,
            out,
        );
        *acc = saved;
    }
}

fn search(order: &[usize], depth: usize, used: u32, options: &[Vec<Group>], rho: &[f64]) -> bool {
    if depth == order.len() {
        return true;
    }
    let j = order[depth];
    options[j].iter().any(|g| {
        g.mask & used == 0
            && g.count >= rho[j] - tol(g, rho[j])
            && search(order, depth + 1, used | g.mask, options, rho)
    })
}

/// Like [`search`] with equality on counts, additionally requiring that the
/// groups exhaust Ξ.
fn search_split(
    order: &[usize],
    depth: usize,
    used: u32,
    options: &[Vec<Group>],
    rho: &[f64],
    full: u32,
) -> bool {
    if depth == order.len() {
        return used == full;
    }
    let j = order[depth];
    options[j].iter().any(|g| {
        g.mask & used == 0
            && (g.count - rho[j]).abs() <= tol(g, rho[j])
            && search_split(order, depth + 1, used | g.mask, options, rho, full)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frag(s: &str, c: f64) -> OrderOneFragment {
        OrderOneFragment::new(Pattern::parse(s).unwrap(), c).unwrap()
    }

    fn prod(terms: &[(&str, f64)]) -> ProductOfFragments {
        ProductOfFragments::from_terms(terms).unwrap()
    }

    #[test]
    fn order_one_covering() {
        assert!(covers(&frag("11", 3.0), &frag("10", 30.0)));
        assert!(!covers(&frag("10", 30.0), &frag("11", 3.0)));
        let f = frag("0110", -2.0);
        assert!(covers(&f, &f));
    }

    #[test]
    fn product_covering_needs_distinct_covers() {
        let lower = prod(&[("10000", -70.0), ("01000", -70.0)]);
        for upper in [
            prod(&[("11111", -70.0)]),
            prod(&[("11110", 7.0)]),
            prod(&[("11100", -70.0)]),
            prod(&[("11000", 7.0)]),
        ] {
            assert!(!covers_product(&upper, &lower));
        }
        // x1^4 x2^5 (x1+x3) covers 1/(x1 x2 x3)? orders 3 and 3
        let a = prod(&[("100", 4.0), ("010", 5.0), ("101", 1.0)]);
        let b = prod(&[("100", -1.0), ("010", -1.0), ("001", -1.0)]);
        assert!(covers_product(&a, &b));
        assert!(!covers_product(&b, &a));
        // matching must reassign: lower {10, 11}, upper {11, 10}
        let u = prod(&[("11", 1.0), ("10", 1.0)]);
        let l = prod(&[("10", 1.0), ("11", 1.0)]);
        assert!(covers_product(&u, &l));
    }

    #[test]
    fn collectability() {
        assert!(collects_with(&prod(&[("11", 3.0)]), &prod(&[("11", -5.0)])));
        assert!(!collects_with(&prod(&[("10", 1.0)]), &prod(&[("01", 1.0)])));
        let a = prod(&[("100", 4.0), ("010", 5.0), ("101", 1.0)]);
        let b = prod(&[("100", 1.0), ("010", 1.0), ("101", -1.0)]);
        assert!(collects_with(&a, &b));
        assert!(covers_product(&a, &b) && covers_product(&b, &a));
    }

    #[test]
    fn refinement_examples() {
        let xi = prod(&[
            ("10000", 2.0),
            ("01000", 4.0),
            ("00110", -7.0),
            ("00001", 100.0),
        ]);
        let omega = prod(&[("10000", 1.0), ("01000", 2.0), ("00111", 3.0)]);
        assert_eq!(refines(&xi, &omega).unwrap(), Refinement::Refines);
        assert_eq!(refines(&omega, &xi).unwrap(), Refinement::No);

        let xi5 = prod(&[("10100", 1.0), ("01010", 100.0), ("00001", 1.0)]);
        let omega5 = prod(&[("01000", 2.0), ("00010", 5.0), ("10101", -3.0)]);
        assert_eq!(refines(&xi5, &omega5).unwrap(), Refinement::No);

        assert_eq!(refines(&omega5, &omega5).unwrap(), Refinement::Splits);
    }

    #[test]
    fn refinement_chain_from_the_text() {
        // x1^3 x2^4 x3^5 x1 x2 / (x1 x3 x2 x3)
        let a = prod(&[
            ("100", 3.0),
            ("010", 4.0),
            ("001", 5.0),
            ("100", 1.0),
            ("010", 1.0),
            ("100", -1.0),
            ("001", -1.0),
            ("010", -1.0),
            ("001", -1.0),
        ]);
        // x1^3 x2^4 x3^5 (x1+x2)^2 / ((x1+x3)^4 (x2+x3)^5)
        let b = prod(&[
            ("100", 3.0),
            ("010", 4.0),
            ("001", 5.0),
            ("110", 2.0),
            ("101", -4.0),
            ("011", -5.0),
        ]);
        // (x1+x2+x3)^4 / ((x1+x3)^4 x2 (x2+x3)^5 x1)
        let c = prod(&[
            ("111", 4.0),
            ("101", -4.0),
            ("010", -1.0),
            ("011", -5.0),
            ("100", -1.0),
        ]);
        let d = prod(&[("111", 3.0)]);
        assert_ne!(refines(&a, &b).unwrap(), Refinement::No);
        assert_ne!(refines(&b, &c).unwrap(), Refinement::No);
        assert_ne!(refines(&c, &d).unwrap(), Refinement::No);
        assert_ne!(refines(&a, &d).unwrap(), Refinement::No);
    }

    #[test]
    fn split_requires_exhausting_xi() {
        let xi = prod(&[("10", 2.0), ("01", 3.0)]);
        let omega = prod(&[("11", 5.0)]);
        assert_eq!(refines(&xi, &omega).unwrap(), Refinement::Splits);
        let omega = prod(&[("10", 2.0)]);
        assert_eq!(refines(&xi, &omega).unwrap(), Refinement::Refines);
    }

    #[test]
    fn refinement_size_cap() {
        let terms: Vec<(String, f64)> = (0..17)
            .map(|_| ("1".to_string() + &"0".repeat(16), 1.0))
            .collect();
        let refs: Vec<(&str, f64)> = terms.iter().map(|(s, c)| (s.as_str(), *c)).collect();
        let big = prod(&refs);
        assert!(matches!(
            refines(&big, &big),
            Err(Error::SizeCap { size: 17, cap: 16 })
        ));
    }
}
