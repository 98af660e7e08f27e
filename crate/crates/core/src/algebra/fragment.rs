use std::fmt;

use crate::error::{Error, Result};
use crate::model::{CountModel, Pattern, SINGULAR_THRESHOLD};

/// Relative band used when deciding whether a slice achieves co-thickness.
pub const CO_THICKNESS_TOLERANCE: f64 = 1e-9;

/// `(δᵀx)^ρ` with `δ ≠ 0` and `ρ ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderOneFragment {
    pattern: Pattern,
    count: f64,
}

impl OrderOneFragment {
    pub fn new(pattern: Pattern, count: f64) -> Result<Self> {
        if pattern.is_zero() {
            return Err(Error::ZeroPattern { index: 0 });
        }
        if !count.is_finite() || count == 0.0 {
            return Err(Error::InvalidCount(format!("fragment count {count}")));
        }
        Ok(OrderOneFragment { pattern, count })
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn count(&self) -> f64 {
        self.count
    }

    pub fn n(&self) -> usize {
        self.pattern.len()
    }

    /// Number of ions in the event.
    pub fn event_size(&self) -> usize {
        self.pattern.count_ones()
    }

    pub fn is_ionic(&self) -> bool {
        self.event_size() == 1
    }

    /// `ρ / δᵀy`.
    pub fn thickness(&self, y: &[f64]) -> Result<f64> {
        let s = self.pattern.dot(y);
        if s.abs() < SINGULAR_THRESHOLD {
            return Err(Error::SingularEvaluation { term: 0, value: s });
        }
        Ok(self.count / s)
    }
}

impl fmt::Display for OrderOneFragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^{}", self.pattern, self.count)
    }
}

/// Result of [`union_fragments`].
#[derive(Clone, Debug, PartialEq)]
pub struct Union {
    pub fragment: OrderOneFragment,
    pub exhaustive: bool,
}

/// `(max(δ₁, δ₂)ᵀx)^{ρ₁+ρ₂}`.
pub fn union_fragments(i1: &OrderOneFragment, i2: &OrderOneFragment) -> Result<Union> {
    if i1.n() != i2.n() {
        return Err(Error::DimensionMismatch(format!(
            "fragments over {} and {} ions",
            i1.n(),
            i2.n()
        )));
    }
    let count = i1.count + i2.count;
    if count == 0.0 {
        return Err(Error::DegenerateUnion);
    }
    let pattern = i1.pattern.union(&i2.pattern);
    let exhaustive = pattern.is_all_ones();
    Ok(Union {
        fragment: OrderOneFragment { pattern, count },
        exhaustive,
    })
}

/// An ordered product of order-1 fragments over a shared ion vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductOfFragments {
    n: usize,
    fragments: Vec<OrderOneFragment>,
}

impl ProductOfFragments {
    pub fn new(n: usize, fragments: Vec<OrderOneFragment>) -> Result<Self> {
        if let Some(f) = fragments.iter().find(|f| f.n() != n) {
            return Err(Error::DimensionMismatch(format!(
                "fragment {f} in a product over {n} ions"
            )));
        }
        Ok(ProductOfFragments { n, fragments })
    }

    pub fn empty(n: usize) -> Self {
        ProductOfFragments {
            n,
            fragments: Vec::new(),
        }
    }

    /// Builds from `(bit string, count)` pairs; handy in tests and examples.
    pub fn from_terms(terms: &[(&str, f64)]) -> Result<Self> {
        let n = terms.first().map(|(s, _)| s.len()).unwrap_or(0);
        let fragments = terms
            .iter()
            .map(|(s, c)| {
                let p = Pattern::parse(s)
                    .ok_or_else(|| Error::InvalidInput(format!("bad pattern {s:?}")))?;
                OrderOneFragment::new(p, *c)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, fragments)
    }

    /// Every collected term of a model, ionic first.
    pub fn from_model(model: &CountModel) -> Self {
        let fragments = model
            .terms()
            .into_iter()
            .map(|(pattern, count)| OrderOneFragment { pattern, count })
            .collect();
        ProductOfFragments {
            n: model.n(),
            fragments,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.fragments.len()
    }

    pub fn fragments(&self) -> &[OrderOneFragment] {
        &self.fragments
    }

    pub fn total_count(&self) -> f64 {
        self.fragments.iter().map(|f| f.count).sum()
    }

    /// `Δ1`: how many fragments mention each ion.
    pub fn row_sums(&self) -> Vec<usize> {
        let mut sums = vec![0; self.n];
        for f in &self.fragments {
            for i in f.pattern.iter_ones() {
                sums[i] += 1;
            }
        }
        sums
    }

    /// Merges fragments sharing a pattern, in order of first appearance.
    /// Patterns whose counts cancel are dropped.
    pub fn collected(&self) -> ProductOfFragments {
        let mut out: Vec<OrderOneFragment> = Vec::new();
        for f in &self.fragments {
            match out.iter_mut().find(|g| g.pattern == f.pattern) {
                Some(g) => g.count += f.count,
                None => out.push(f.clone()),
            }
        }
        out.retain(|f| f.count != 0.0);
        ProductOfFragments {
            n: self.n,
            fragments: out,
        }
    }

    /// `Σ ρ_j ln(δ_jᵀy)`.
    pub fn log_value(&self, y: &[f64]) -> f64 {
        self.fragments
            .iter()
            .map(|f| f.count * f.pattern.dot(y).ln())
            .sum()
    }

    /// `τ(Ω, y)`, one thickness per fragment.
    pub fn thickness(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.fragments.iter().map(|f| f.thickness(y)).collect()
    }

    /// The common thickness of a slice at `y`, if all its fragments agree to
    /// within [`CO_THICKNESS_TOLERANCE`] relative.
    pub fn co_thickness(&self, y: &[f64]) -> Option<f64> {
        if !is_slice(self) {
            return None;
        }
        let t = self.thickness(y).ok()?;
        let first = *t.first()?;
        let scale = t.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if first == 0.0
            || t.iter()
                .any(|v| (v - first).abs() > CO_THICKNESS_TOLERANCE * scale)
        {
            return None;
        }
        Some(t.iter().sum::<f64>() / t.len() as f64)
    }
}

impl fmt::Display for ProductOfFragments {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.fragments.iter().map(|g| g.to_string()).collect();
        f.write_str(&parts.join("·"))
    }
}

/// Closure: the patterns are pairwise disjoint (`Δ1 ∈ {0,1}ⁿ`).
pub fn is_fragment(prod: &ProductOfFragments) -> bool {
    prod.row_sums().iter().all(|&s| s <= 1)
}

/// Closure and exhaustiveness: `Δ1 = 1`.
pub fn is_slice(prod: &ProductOfFragments) -> bool {
    prod.n > 0 && prod.row_sums().iter().all(|&s| s == 1)
}
