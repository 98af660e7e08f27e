//! Canonical count models and simplex points.
//!
//! A [`CountModel`] is the separated form `(a, b, Δ)` of a likelihood kernel
//!
//! ```text
//! Π_i x_i^{a_i} · Π_j (δ_jᵀx)^{b_j}
//! ```
//!
//! where every column `δ_j` of `Δ` names at least two ions. Models are only
//! ever built through validating constructors, so every function in the crate
//! may assume the canonical invariants.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Linear forms smaller than this are treated as singular.
pub const SINGULAR_THRESHOLD: f64 = 1e-300;

/// Tolerance on `Σx = 1` for [`SimplexPoint`].
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// Replacement for zero coordinates of the count-proportional starting point.
pub const ZERO_COORDINATE_FLOOR: f64 = 1e-6;

/// A 0/1 event pattern over `n` ions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    n: usize,
    words: Vec<u64>,
}

impl Pattern {
    pub fn zeros(n: usize) -> Self {
        Pattern {
            n,
            words: vec![0; n.div_ceil(64).max(1)],
        }
    }

    pub fn ones(n: usize) -> Self {
        let mut p = Pattern::zeros(n);
        for i in 0..n {
            p.set(i);
        }
        p
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut p = Pattern::zeros(n);
        p.set(i);
        p
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut p = Pattern::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                p.set(i);
            }
        }
        p
    }

    pub fn from_indices(n: usize, ions: &[usize]) -> Self {
        let mut p = Pattern::zeros(n);
        for &i in ions {
            p.set(i);
        }
        p
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Option<Self> {
        let mut p = Pattern::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => p.set(i),
                '0' => {}
                _ => return None,
            }
        }
        Some(p)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.n);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.n);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_all_ones(&self) -> bool {
        self.count_ones() == self.n
    }

    /// Componentwise `self ≤ other`.
    pub fn is_subset_of(&self, other: &Pattern) -> bool {
        self.n == other.n
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Pattern) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Componentwise maximum.
    pub fn union(&self, other: &Pattern) -> Pattern {
        debug_assert_eq!(self.n, other.n);
        Pattern {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn union_in_place(&mut self, other: &Pattern) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.get(i))
    }

    /// The single ion of a unit pattern.
    pub fn single_ion(&self) -> Option<usize> {
        if self.count_ones() == 1 {
            self.iter_ones().next()
        } else {
            None
        }
    }

    /// `δᵀx`.
    pub fn dot(&self, x: &[f64]) -> f64 {
        self.iter_ones().map(|i| x[i]).sum()
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.n)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern({})", self.to_bit_string())
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

/// The triple `(a, b, Δ)` in canonical form.
#[derive(Clone, Debug, PartialEq)]
pub struct CountModel {
    ions: Vec<String>,
    a: Vec<f64>,
    b: Vec<f64>,
    patterns: Vec<Pattern>,
}

impl CountModel {
    /// Builds a model from already-separated data, rejecting anything that is
    /// not canonical.
    pub fn new(a: Vec<f64>, b: Vec<f64>, patterns: Vec<Pattern>) -> Result<Self> {
        let ions = default_ion_names(a.len());
        Self::with_ions(ions, a, b, patterns)
    }

    pub fn with_ions(
        ions: Vec<String>,
        a: Vec<f64>,
        b: Vec<f64>,
        patterns: Vec<Pattern>,
    ) -> Result<Self> {
        let n = a.len();
        if n < 2 {
            return Err(Error::TooFewIons { n });
        }
        if ions.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} ion names for {} ions",
                ions.len(),
                n
            )));
        }
        if b.len() != patterns.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} unionic counts for {} patterns",
                b.len(),
                patterns.len()
            )));
        }
        for (i, &ai) in a.iter().enumerate() {
            if !ai.is_finite() || ai < 0.0 {
                return Err(Error::InvalidCount(format!(
                    "ionic count of ion {i} is {ai}"
                )));
            }
        }
        let mut seen = HashMap::new();
        for (j, (p, &bj)) in patterns.iter().zip(&b).enumerate() {
            if p.len() != n {
                return Err(Error::LengthMismatch {
                    index: j,
                    expected: n,
                    found: p.len(),
                });
            }
            if !bj.is_finite() || bj == 0.0 {
                return Err(Error::InvalidCount(format!(
                    "unionic count of term {j} is {bj}"
                )));
            }
            if p.count_ones() < 2 {
                return Err(Error::NonCanonical(format!(
                    "column {j} ({p}) has fewer than two ions"
                )));
            }
            if let Some(prev) = seen.insert(p.clone(), j) {
                return Err(Error::NonCanonical(format!(
                    "columns {prev} and {j} share pattern {p}"
                )));
            }
        }
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0.0 && !patterns.iter().any(|p| p.get(i)) {
                return Err(Error::IonAbsent { ion: i });
            }
        }
        Ok(CountModel {
            ions,
            a,
            b,
            patterns,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.a.len()
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.b.len()
    }

    pub fn ions(&self) -> &[String] {
        &self.ions
    }

    pub fn ionic_counts(&self) -> &[f64] {
        &self.a
    }

    pub fn unionic_counts(&self) -> &[f64] {
        &self.b
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    /// `Δ_ij`.
    #[inline]
    pub fn delta(&self, i: usize, j: usize) -> bool {
        self.patterns[j].get(i)
    }

    /// Every collected order-1 fragment: ionic terms with non-zero count
    /// followed by the unionic terms.
    pub fn terms(&self) -> Vec<(Pattern, f64)> {
        let n = self.n();
        self.a
            .iter()
            .enumerate()
            .filter(|(_, &ai)| ai != 0.0)
            .map(|(i, &ai)| (Pattern::unit(n, i), ai))
            .chain(self.patterns.iter().cloned().zip(self.b.iter().copied()))
            .collect()
    }

    /// The same kernel with every count multiplied by `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidInput(format!("scale factor {k}")));
        }
        Self::with_ions(
            self.ions.clone(),
            self.a.iter().map(|v| v * k).collect(),
            self.b.iter().map(|v| v * k).collect(),
            self.patterns.clone(),
        )
    }

    /// Rename the ions.
    pub fn renamed(mut self, ions: Vec<String>) -> Result<Self> {
        if ions.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} ion names for {} ions",
                ions.len(),
                self.n()
            )));
        }
        self.ions = ions;
        Ok(self)
    }

    /// `δ_jᵀx` for every unionic term, rejecting singular forms.
    pub(crate) fn linear_forms(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.patterns
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let s = p.dot(x);
                if s.abs() < SINGULAR_THRESHOLD || !s.is_finite() {
                    Err(Error::SingularEvaluation { term: j, value: s })
                } else {
                    Ok(s)
                }
            })
            .collect()
    }

    pub(crate) fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, model has {} ions",
                x.len(),
                self.n()
            )));
        }
        Ok(())
    }
}

pub fn default_ion_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Collects raw `(pattern, count)` terms into a canonical model.
///
/// Duplicate patterns are merged by summing their counts in order of first
/// appearance, merged counts that cancel are dropped, and unit patterns are
/// folded into the ionic counts.
pub fn canonicalize(raw_terms: &[(Pattern, f64)]) -> Result<CountModel> {
    let n = match raw_terms.first() {
        Some((p, _)) => p.len(),
        None => return Err(Error::EmptyInput),
    };
    let mut order: Vec<Pattern> = Vec::new();
    let mut merged: HashMap<Pattern, (f64, f64)> = HashMap::new();
    for (index, (p, c)) in raw_terms.iter().enumerate() {
        if p.len() != n {
            return Err(Error::LengthMismatch {
                index,
                expected: n,
                found: p.len(),
            });
        }
        if p.is_zero() {
            return Err(Error::ZeroPattern { index });
        }
        if !c.is_finite() {
            return Err(Error::InvalidCount(format!("term {index} has count {c}")));
        }
        let entry = merged.entry(p.clone()).or_insert_with(|| {
            order.push(p.clone());
            (0.0, 0.0)
        });
        entry.0 += c;
        entry.1 += c.abs();
    }

    let mut a = vec![0.0; n];
    let mut b = Vec::new();
    let mut patterns = Vec::new();
    for p in order {
        let (sum, mass) = merged[&p];
        if sum.abs() <= 1e-12 * mass {
            continue;
        }
        match p.single_ion() {
            Some(i) => {
                if sum < 0.0 {
                    return Err(Error::InvalidCount(format!(
                        "ion {i} has negative ionic count {sum}"
                    )));
                }
                a[i] = sum;
            }
            None => {
                patterns.push(p);
                b.push(sum);
            }
        }
    }
    CountModel::new(a, b, patterns)
}

/// A strictly positive vector summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    /// Validates positivity and renormalises onto the simplex.
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::NotSimplicial("empty vector".into()));
        }
        if let Some((i, v)) = x
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::NotSimplicial(format!("coordinate {i} is {v}")));
        }
        let s: f64 = x.iter().sum();
        let x: Vec<f64> = x.into_iter().map(|v| v / s).collect();
        if x.iter().any(|&v| v <= 0.0) {
            return Err(Error::NotSimplicial("coordinate underflows to zero".into()));
        }
        Ok(SimplexPoint(x))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    /// `a/Σa`, with zero coordinates lifted to [`ZERO_COORDINATE_FLOOR`]
    /// before renormalising.
    pub fn proportional(a: &[f64]) -> Result<Self> {
        let s: f64 = a.iter().sum();
        if !(s > 0.0) {
            return Err(Error::InvalidCount("counts sum to zero".into()));
        }
        Self::new(
            a.iter()
                .map(|&v| {
                    let x = v / s;
                    if x > 0.0 {
                        x
                    } else {
                        ZERO_COORDINATE_FLOOR
                    }
                })
                .collect(),
        )
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest absolute coordinate difference.
    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for SimplexPoint {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for SimplexPoint {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        SimplexPoint::new(v)
    }
}

impl From<SimplexPoint> for Vec<f64> {
    fn from(p: SimplexPoint) -> Vec<f64> {
        p.0
    }
}
