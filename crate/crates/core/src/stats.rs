//! Sparse counters keyed by strings, cosine similarity and top-k summaries.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("cosine similarity is undefined for an empty counter")]
    ZeroVector,
    #[error("distribution is empty")]
    EmptyDistribution,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("snapshot line {0}: expected `key<TAB>count`")]
    BadSnapshotLine(usize),
}

/// Counter kind: canonical path strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Paths {}
/// Counter kind: argument forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Args {}

/// Nonnegative integer counts keyed by string. Zero counts are never stored.
///
/// The type parameter keeps path vectors and argument distributions from
/// being merged or compared with each other.
pub struct Counter<K> {
    counts: BTreeMap<String, u64>,
    total: u64,
    _kind: PhantomData<K>,
}

pub type PathVector = Counter<Paths>;
pub type FreqDist = Counter<Args>;

impl<K> Counter<K> {
    pub fn new() -> Self {
        Counter { counts: BTreeMap::new(), total: 0, _kind: PhantomData }
    }

    /// Adds `by` to `key`. Adding zero is a no-op.
    pub fn increment(&mut self, key: &str, by: u64) {
        if by == 0 {
            return;
        }
        match self.counts.get_mut(key) {
            Some(c) => *c += by,
            None => {
                self.counts.insert(key.to_string(), by);
            }
        }
        self.total += by;
    }

    pub fn add(&mut self, key: &str) {
        self.increment(key, 1);
    }

    pub fn get(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Entries in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn merge_from(&mut self, other: &Counter<K>) {
        for (k, v) in other.iter() {
            self.increment(k, v);
        }
    }

    /// Pointwise sum.
    pub fn merge(&self, other: &Counter<K>) -> Counter<K> {
        let mut out = self.clone();
        out.merge_from(other);
        out
    }

    /// Multiplies every count by `factor`.
    pub fn scaled(&self, factor: u64) -> Counter<K> {
        let mut out = Counter::new();
        for (k, v) in self.iter() {
            out.increment(k, v * factor);
        }
        out
    }

    pub fn cosine(&self, other: &Counter<K>) -> Result<f64, StatsError> {
        cosine(self, other)
    }

    pub fn top_k(&self, k: usize) -> Result<Vec<TopEntry>, StatsError> {
        top_k(self, k)
    }

    /// Sorted `key<TAB>count` lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.iter() {
            out.push_str(k);
            out.push('\t');
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self, StatsError> {
        let mut out = Counter::new();
        for (n, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (key, count) = line.rsplit_once('\t').ok_or(StatsError::BadSnapshotLine(n + 1))?;
            let count: u64 = count.parse().map_err(|_| StatsError::BadSnapshotLine(n + 1))?;
            out.increment(key, count);
        }
        Ok(out)
    }
}

impl<K> Default for Counter<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K> Clone for Counter<K> {
    fn clone(&self) -> Self {
        Counter { counts: self.counts.clone(), total: self.total, _kind: PhantomData }
    }
}

impl<K> PartialEq for Counter<K> {
    fn eq(&self, other: &Self) -> bool {
        self.counts == other.counts
    }
}

impl<K> Eq for Counter<K> {}

impl<K> fmt::Debug for Counter<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.counts.iter()).finish()
    }
}

impl<'a, K> FromIterator<&'a str> for Counter<K> {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        let mut out = Counter::new();
        for key in iter {
            out.add(key);
        }
        out
    }
}

impl<K> Serialize for Counter<K> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.counts.serialize(s)
    }
}

/// Cosine of two counters over the union of their keys.
///
/// Dot product and squared norms are exact integers; only the final ratio
/// is floating point, so the result is bitwise symmetric.
pub fn cosine<K>(a: &Counter<K>, b: &Counter<K>) -> Result<f64, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::ZeroVector);
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let dot: u128 = small
        .counts
        .iter()
        .filter_map(|(k, &x)| large.counts.get(k).map(|&y| x as u128 * y as u128))
        .sum();
    let norm2 = |c: &Counter<K>| c.counts.values().map(|&x| x as u128 * x as u128).sum::<u128>();
    let (na, nb) = (norm2(a), norm2(b));
    // parallel vectors: dot² = |a|²|b|²
    if let (Some(d2), Some(n2)) = (dot.checked_mul(dot), na.checked_mul(nb)) {
        if d2 == n2 {
            return Ok(1.0);
        }
    }
    let (lo, hi) = if na <= nb { (na, nb) } else { (nb, na) };
    let cos = dot as f64 / ((lo as f64).sqrt() * (hi as f64).sqrt());
    Ok(cos.clamp(0.0, 1.0))
}

/// A percentage held as an exact count of hundredths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(into = "f64")]
pub struct Percent(u64);

impl Percent {
    /// `100 * part / whole` rounded half-up to two decimals.
    pub fn of(part: u64, whole: u64) -> Percent {
        assert!(whole > 0, "percentage of an empty total");
        let (part, whole) = (part as u128, whole as u128);
        Percent(((20_000 * part + whole) / (2 * whole)) as u64)
    }

    pub fn hundredths(self) -> u64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl From<Percent> for f64 {
    fn from(p: Percent) -> f64 {
        p.value()
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

/// Similarity rounded half-up to four decimals for display.
pub fn format_similarity(score: f64) -> String {
    let scaled = (score * 10_000.0 + 0.5).floor() as u64;
    format!("{}.{:04}", scaled / 10_000, scaled % 10_000)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopEntry {
    pub key: String,
    pub count: u64,
    pub percent: Percent,
}

/// The `k` most frequent keys, ties broken by key order.
pub fn top_k<K>(counter: &Counter<K>, k: usize) -> Result<Vec<TopEntry>, StatsError> {
    if k == 0 {
        return Err(StatsError::ZeroK);
    }
    if counter.is_empty() {
        return Err(StatsError::EmptyDistribution);
    }
    let mut entries: Vec<(&str, u64)> = counter.iter().collect();
    // stable sort keeps key order among equal counts
    entries.sort_by_key(|e| std::cmp::Reverse(e.1));
    Ok(entries
        .into_iter()
        .take(k)
        .map(|(key, count)| TopEntry {
            key: key.to_string(),
            count,
            percent: Percent::of(count, counter.total),
        })
        .collect())
}
