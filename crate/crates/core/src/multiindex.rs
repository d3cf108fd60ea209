//! Finitely supported multi-indices and downward closed index sets.
//!
//! Dimensions are 1-based. A [`MultiIndex`] stores only its nonzero
//! entries, so the zero index is the empty map. A [`DownwardClosedSet`]
//! keeps its members in insertion order; that order is the enumeration
//! consumed by the budget allocator, so every constructor that takes an
//! explicit list preserves it.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A finitely supported map from dimension (1-based) to order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex {
    // sorted by dimension, orders >= 1
    entries: Vec<(usize, u32)>,
}

impl MultiIndex {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit index `e_dim`.
    pub fn unit(dim: usize) -> Self {
        assert!(dim >= 1, "dimensions are 1-based");
        Self {
            entries: vec![(dim, 1)],
        }
    }

    /// Builds an index from `(dim, order)` pairs. Zero orders are dropped.
    pub fn from_pairs<I: IntoIterator<Item = (usize, u32)>>(pairs: I) -> Result<Self> {
        let mut entries: Vec<(usize, u32)> = Vec::new();
        for (dim, order) in pairs {
            if dim == 0 {
                return Err(Error::InvalidArgument("multi-index dimensions are 1-based".into()));
            }
            if entries.iter().any(|&(d, _)| d == dim) {
                return Err(Error::InvalidArgument(format!("dimension {dim} listed twice")));
            }
            if order > 0 {
                entries.push((dim, order));
            }
        }
        entries.sort_unstable();
        Ok(Self { entries })
    }

    /// Dense constructor: `orders[k]` is the order in dimension `k + 1`.
    pub fn from_dense(orders: &[u32]) -> Self {
        let entries = orders
            .iter()
            .enumerate()
            .filter(|(_, &o)| o > 0)
            .map(|(k, &o)| (k + 1, o))
            .collect();
        Self { entries }
    }

    pub fn get(&self, dim: usize) -> u32 {
        self.entries
            .binary_search_by_key(&dim, |&(d, _)| d)
            .map(|k| self.entries[k].1)
            .unwrap_or(0)
    }

    /// Nonzero entries `(dim, order)` in increasing dimension.
    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|&(d, _)| d)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `|ν| = Σ_j ν_j`.
    pub fn total_order(&self) -> u32 {
        self.entries.iter().map(|&(_, o)| o).sum()
    }

    pub fn max_order(&self) -> u32 {
        self.entries.iter().map(|&(_, o)| o).max().unwrap_or(0)
    }

    /// Largest dimension in the support, 0 for the zero index.
    pub fn max_dim(&self) -> usize {
        self.entries.last().map(|&(d, _)| d).unwrap_or(0)
    }

    /// Componentwise `self <= other`.
    pub fn leq(&self, other: &MultiIndex) -> bool {
        self.entries.iter().all(|&(d, o)| o <= other.get(d))
    }

    /// `ω_ν = ∏_{j ∈ supp ν} (1 + 2ν_j)`.
    pub fn omega(&self) -> f64 {
        self.entries.iter().map(|&(_, o)| (1 + 2 * o) as f64).product()
    }

    /// `ν + e_dim`.
    pub fn incremented(&self, dim: usize) -> MultiIndex {
        assert!(dim >= 1, "dimensions are 1-based");
        let mut entries = self.entries.clone();
        match entries.binary_search_by_key(&dim, |&(d, _)| d) {
            Ok(k) => entries[k].1 += 1,
            Err(k) => entries.insert(k, (dim, 1)),
        }
        MultiIndex { entries }
    }

    // caller guarantees dim > max_dim() and order > 0
    pub(crate) fn with_appended(&self, dim: usize, order: u32) -> MultiIndex {
        debug_assert!(dim > self.max_dim() && order > 0);
        let mut entries = self.entries.clone();
        entries.push((dim, order));
        MultiIndex { entries }
    }

    /// `ν − e_dim`, or `None` when `ν_dim = 0`.
    pub fn decremented(&self, dim: usize) -> Option<MultiIndex> {
        let k = self.entries.binary_search_by_key(&dim, |&(d, _)| d).ok()?;
        let mut entries = self.entries.clone();
        if entries[k].1 == 1 {
            entries.remove(k);
        } else {
            entries[k].1 -= 1;
        }
        Some(MultiIndex { entries })
    }

    /// All `ν − e_j` for `j ∈ supp ν`.
    pub fn predecessors(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        self.support().filter_map(move |d| self.decremented(d))
    }

    /// Every `μ ≤ ν`, including `ν` itself and the zero index.
    pub fn lower_box(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero()];
        for &(dim, order) in &self.entries {
            let mut next = Vec::with_capacity(out.len() * (order as usize + 1));
            for mu in &out {
                for o in 0..=order {
                    let mut m = mu.clone();
                    if o > 0 {
                        m.entries.push((dim, o));
                    }
                    next.push(m);
                }
            }
            out = next;
        }
        out
    }
}

/// Dense lexicographic order: compare orders dimension by dimension.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(da, oa)), Some(&(db, ob))) => {
                    if da < db {
                        return Ordering::Greater;
                    }
                    if db < da {
                        return Ordering::Less;
                    }
                    if oa != ob {
                        return oa.cmp(&ob);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Line format: space separated `dim:order` pairs, the zero index is empty.
impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (d, o)) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{d}:{o}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for tok in s.split_whitespace() {
            let (d, o) = tok
                .split_once(':')
                .ok_or_else(|| Error::InvalidArgument(format!("expected dim:order, found `{tok}`")))?;
            let dim: usize = d
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad dimension in `{tok}`")))?;
            let order: u32 = o
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad order in `{tok}`")))?;
            if order == 0 {
                return Err(Error::InvalidArgument(format!(
                    "zero order stored explicitly in `{tok}`"
                )));
            }
            pairs.push((dim, order));
        }
        MultiIndex::from_pairs(pairs)
    }
}

/// Componentwise order test.
pub fn leq(mu: &MultiIndex, nu: &MultiIndex) -> bool {
    mu.leq(nu)
}

pub fn omega(nu: &MultiIndex) -> f64 {
    nu.omega()
}

/// Local criterion: every `ν − e_j` of every member is a member.
pub fn is_downward_closed(indices: &[MultiIndex]) -> bool {
    let members: HashSet<&MultiIndex> = indices.iter().collect();
    indices.iter().all(|nu| nu.predecessors().all(|p| members.contains(&p)))
}

/// Smolyak coefficients `ς_{Λ,ν}` for an explicit list, validating closure first.
pub fn combination_coefficients(indices: &[MultiIndex]) -> Result<Vec<(MultiIndex, i64)>> {
    let set = DownwardClosedSet::new(indices.to_vec())?;
    Ok(set.combination_coefficients())
}

/// A downward closed set of multi-indices, ordered by insertion.
#[derive(Clone, Debug, Default)]
pub struct DownwardClosedSet {
    indices: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
}

impl PartialEq for DownwardClosedSet {
    fn eq(&self, other: &Self) -> bool {
        self.indices == other.indices
    }
}

impl DownwardClosedSet {
    /// Validates closure and uniqueness; keeps the given order.
    pub fn new(indices: Vec<MultiIndex>) -> Result<Self> {
        let mut position = HashMap::with_capacity(indices.len());
        for (k, nu) in indices.iter().enumerate() {
            if position.insert(nu.clone(), k).is_some() {
                return Err(Error::DuplicateIndex(nu.to_string()));
            }
        }
        for nu in &indices {
            for pred in nu.predecessors() {
                if !position.contains_key(&pred) {
                    return Err(Error::NotDownwardClosed {
                        index: format!("{nu:?}"),
                        missing: format!("{pred:?}"),
                    });
                }
            }
        }
        Ok(Self { indices, position })
    }

    /// The set `{0}`.
    pub fn singleton_zero() -> Self {
        Self::new(vec![MultiIndex::zero()]).expect("{0} is downward closed")
    }

    /// Smallest downward closed superset of `seeds`, ordered by `(|ν|, lex)`.
    pub fn closure<'a, I: IntoIterator<Item = &'a MultiIndex>>(seeds: I) -> Self {
        let mut all: HashSet<MultiIndex> = HashSet::new();
        for nu in seeds {
            if all.contains(nu) {
                continue;
            }
            for mu in nu.lower_box() {
                all.insert(mu);
            }
        }
        let mut indices: Vec<MultiIndex> = all.into_iter().collect();
        indices.sort_by(|a, b| a.total_order().cmp(&b.total_order()).then_with(|| a.cmp(b)));
        Self::new(indices).expect("closure is downward closed")
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, nu: &MultiIndex) -> bool {
        self.position.contains_key(nu)
    }

    pub fn position(&self, nu: &MultiIndex) -> Option<usize> {
        self.position.get(nu).copied()
    }

    /// The first `k` members, which must themselves be downward closed.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        Self::new(self.indices[..k.min(self.len())].to_vec())
    }

    /// `m(Λ)`: the largest coordinate over all members.
    pub fn max_degree(&self) -> u32 {
        self.indices.iter().map(MultiIndex::max_order).max().unwrap_or(0)
    }

    /// Dimensions appearing in at least one member, increasing.
    pub fn active_dim_list(&self) -> Vec<usize> {
        let mut dims: Vec<usize> = self
            .indices
            .iter()
            .flat_map(|nu| nu.support().collect::<Vec<_>>())
            .collect();
        dims.sort_unstable();
        dims.dedup();
        dims
    }

    /// `d(Λ)`: the number of active dimensions.
    pub fn active_dims(&self) -> usize {
        self.active_dim_list().len()
    }

    /// Nonzero `ς_{Λ,ν} = Σ_{e ∈ {0,1}^N, ν+e ∈ Λ} (-1)^{|e|}`, in set order.
    ///
    /// Binary vectors are enumerated depth-first and a branch is cut as soon
    /// as `ν + e` leaves `Λ`; by downward closure no extension can re-enter.
    pub fn combination_coefficients(&self) -> Vec<(MultiIndex, i64)> {
        let active = self.active_dim_list();
        let mut out = Vec::new();
        for nu in &self.indices {
            let dims: Vec<usize> = active
                .iter()
                .copied()
                .filter(|&d| self.contains(&nu.incremented(d)))
                .collect();
            let coeff = self.signed_count(nu, &dims, 0, 1);
            if coeff != 0 {
                out.push((nu.clone(), coeff));
            }
        }
        out
    }

    fn signed_count(&self, current: &MultiIndex, dims: &[usize], start: usize, sign: i64) -> i64 {
        let mut total = sign;
        for k in start..dims.len() {
            let next = current.incremented(dims[k]);
            if self.contains(&next) {
                total += self.signed_count(&next, dims, k + 1, -sign);
            }
        }
        total
    }

    /// One index per line in the `dim:order` format.
    pub fn to_lines(&self) -> Vec<String> {
        self.indices.iter().map(|nu| nu.to_string()).collect()
    }

    pub fn from_lines<S: AsRef<str>>(lines: &[S]) -> Result<Self> {
        let indices = lines
            .iter()
            .map(|l| l.as_ref().parse())
            .collect::<Result<Vec<MultiIndex>>>()?;
        Self::new(indices)
    }
}

/// Index of the first member of `indices` whose prefix is not downward closed.
pub(crate) fn first_open_prefix(indices: &[MultiIndex]) -> Option<(usize, MultiIndex)> {
    let mut seen: HashSet<&MultiIndex> = HashSet::new();
    for (k, nu) in indices.iter().enumerate() {
        if nu.predecessors().any(|p| !seen.contains(&p)) || seen.contains(nu) {
            return Some((k, nu.clone()));
        }
        seen.insert(nu);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(d: &[u32]) -> MultiIndex {
        MultiIndex::from_dense(d)
    }

    #[test]
    fn leq_examples() {
        assert!(leq(&MultiIndex::zero(), &mi(&[3, 0, 2])));
        assert!(leq(&mi(&[2, 1]), &mi(&[2, 1])));
        assert!(!leq(&mi(&[2, 0]), &mi(&[1, 3])));
        assert!(!leq(&mi(&[1, 3]), &mi(&[2, 0])));
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(&MultiIndex::zero()), 1.0);
        assert_eq!(omega(&mi(&[1])), 3.0);
        assert_eq!(omega(&mi(&[2, 0, 1])), 15.0);
    }

    #[test]
    fn downward_closed_examples() {
        assert!(is_downward_closed(&[MultiIndex::zero()]));
        assert!(is_downward_closed(&[mi(&[]), mi(&[1]), mi(&[2])]));
        assert!(!is_downward_closed(&[mi(&[]), mi(&[2])]));
        assert!(is_downward_closed(&[mi(&[]), mi(&[1, 0]), mi(&[0, 1]), mi(&[1, 1])]));
    }

    #[test]
    fn combination_coefficient_examples() {
        let c = combination_coefficients(&[MultiIndex::zero()]).unwrap();
        assert_eq!(c, vec![(MultiIndex::zero(), 1)]);

        let c = combination_coefficients(&[mi(&[]), mi(&[1])]).unwrap();
        assert_eq!(c, vec![(mi(&[1]), 1)]);

        let c = combination_coefficients(&[mi(&[]), mi(&[1, 0]), mi(&[0, 1])]).unwrap();
        assert_eq!(c, vec![(mi(&[]), -1), (mi(&[1, 0]), 1), (mi(&[0, 1]), 1)]);
    }

    #[test]
    fn combination_coefficients_reject_open_sets() {
        let err = combination_coefficients(&[mi(&[]), mi(&[0, 2])]).unwrap_err();
        assert!(matches!(err, Error::NotDownwardClosed { .. }));
    }

    #[test]
    fn degree_and_dims() {
        let s = DownwardClosedSet::singleton_zero();
        assert_eq!((s.max_degree(), s.active_dims()), (0, 0));
        let s = DownwardClosedSet::closure(&[mi(&[3])]);
        assert_eq!(s.len(), 4);
        assert_eq!((s.max_degree(), s.active_dims()), (3, 1));
        let s = DownwardClosedSet::new(vec![mi(&[]), mi(&[1, 0]), mi(&[0, 1]), mi(&[1, 1])]).unwrap();
        assert_eq!((s.max_degree(), s.active_dims()), (1, 2));
    }

    #[test]
    fn line_format() {
        let nu = MultiIndex::from_pairs([(1, 2), (3, 1)]).unwrap();
        assert_eq!(nu.to_string(), "1:2 3:1");
        assert_eq!("1:2 3:1".parse::<MultiIndex>().unwrap(), nu);
        assert_eq!("".parse::<MultiIndex>().unwrap(), MultiIndex::zero());
        assert!("1:0".parse::<MultiIndex>().is_err());
        assert!("0:1".parse::<MultiIndex>().is_err());
        assert!("1-2".parse::<MultiIndex>().is_err());
    }

    #[test]
    fn lex_order_is_dense() {
        assert!(mi(&[0, 1]) < mi(&[1, 0]));
        assert!(mi(&[1, 0]) < mi(&[2, 0]));
        assert!(mi(&[1, 1]) > mi(&[1, 0]));
        assert!(MultiIndex::zero() < mi(&[0, 0, 1]));
    }

    #[test]
    fn duplicates_rejected() {
        let err = DownwardClosedSet::new(vec![mi(&[]), mi(&[])]).unwrap_err();
        assert!(matches!(err, Error::DuplicateIndex(_)));
    }

    #[test]
    fn open_prefix_detection() {
        let good = [mi(&[]), mi(&[1]), mi(&[0, 1])];
        assert!(first_open_prefix(&good).is_none());
        let bad = [mi(&[]), mi(&[1, 1]), mi(&[1])];
        assert_eq!(first_open_prefix(&bad).unwrap().0, 1);
    }
}
