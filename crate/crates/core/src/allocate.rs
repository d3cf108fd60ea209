//! Output-truncation budgets `(m_i)` and the per-output index sets
//! `Λ_{N,j} = {ν_i : m_i ≥ j}`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::multiindex::{first_open_prefix, DownwardClosedSet, MultiIndex};

/// Which error functional the allocation balances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    WorstCase,
    MeanSquare,
}

impl Variant {
    /// Exponent `e` in `m_i = ⌈(n/i)^e⌉`.
    pub fn exponent(self, alpha: f64, beta: f64) -> f64 {
        match self {
            Variant::WorstCase => (alpha - 1.0) / beta,
            Variant::MeanSquare => (2.0 * alpha - 1.0) / (2.0 * beta),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::WorstCase => "worst-case",
            Variant::MeanSquare => "mean-square",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "worst-case" => Ok(Variant::WorstCase),
            "mean-square" => Ok(Variant::MeanSquare),
            _ => Err(Error::config(
                "variant",
                format!("expected `worst-case` or `mean-square`, got `{s}`"),
            )),
        }
    }
}

/// Upper end of the admissible output smoothness `t` on the torus.
pub fn torus_t_max(dim: usize, s0: f64, t0: f64) -> f64 {
    let d = dim as f64;
    (1.0 + s0 - d / 2.0 - t0) / d
}

/// `(α, β) = (s − δ/2, t − δ/2)`.
pub fn rate_exponents(s: f64, t: f64, delta: f64) -> (f64, f64) {
    (s - delta / 2.0, t - delta / 2.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AllocationPlan {
    m: Vec<usize>,
    n: usize,
    variant: Variant,
    alpha: f64,
    beta: f64,
}

fn check_exponents(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must exceed 1, got {alpha}")));
    }
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
    }
    Ok(())
}

fn ceil_guarded(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() <= 1e-12 * x.max(1.0) {
        r as usize
    } else {
        x.ceil() as usize
    }
}

fn allocate(variant: Variant, n: usize, alpha: f64, beta: f64, len: usize) -> Result<AllocationPlan> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    check_exponents(alpha, beta)?;
    let e = variant.exponent(alpha, beta);
    if n > len {
        log::warn!("allocation index n = {n} truncated at enumeration length {len}");
    }
    let m = (1..=n.min(len))
        .map(|i| ceil_guarded((n as f64 / i as f64).powf(e)))
        .collect();
    Ok(AllocationPlan {
        m,
        n,
        variant,
        alpha,
        beta,
    })
}

/// `m_i = ⌈(n/i)^{(α−1)/β}⌉` for `i ≤ min(n, len)`.
pub fn allocate_worst_case(n: usize, alpha: f64, beta: f64, len: usize) -> Result<AllocationPlan> {
    allocate(Variant::WorstCase, n, alpha, beta, len)
}

/// `m_i = ⌈(n/i)^{(2α−1)/(2β)}⌉` for `i ≤ min(n, len)`.
pub fn allocate_mean_square(n: usize, alpha: f64, beta: f64, len: usize) -> Result<AllocationPlan> {
    allocate(Variant::MeanSquare, n, alpha, beta, len)
}

impl AllocationPlan {
    pub fn new(variant: Variant, n: usize, alpha: f64, beta: f64, len: usize) -> Result<Self> {
        allocate(variant, n, alpha, beta, len)
    }

    /// A plan with explicit counts, which must be nonincreasing.
    pub fn from_counts(m: Vec<usize>, variant: Variant) -> Result<Self> {
        if m.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidArgument("counts must be nonincreasing".into()));
        }
        let mut m = m;
        while m.last() == Some(&0) {
            m.pop();
        }
        Ok(Self {
            n: m.len(),
            m,
            variant,
            alpha: f64::NAN,
            beta: f64::NAN,
        })
    }

    /// Caps every count at `max_outputs`.
    pub fn capped(mut self, max_outputs: usize) -> Self {
        for v in &mut self.m {
            *v = (*v).min(max_outputs);
        }
        self
    }

    /// Nonzero counts `m_1 ≥ m_2 ≥ …`; later entries are zero.
    pub fn counts(&self) -> &[usize] {
        &self.m
    }

    pub fn m(&self, i: usize) -> usize {
        self.m.get(i - 1).copied().unwrap_or(0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `M = Σ m_i`, saturating at `usize::MAX`.
    pub fn realized(&self) -> usize {
        self.m.iter().fold(0usize, |acc, &v| acc.saturating_add(v))
    }

    /// Number of output coordinates with a nonempty index set.
    pub fn output_count(&self) -> usize {
        self.m.first().copied().unwrap_or(0)
    }

    /// `|Λ_{N,j}| = #{i : m_i ≥ j}` for `j = 1..=output_count`.
    pub fn set_sizes(&self) -> Vec<usize> {
        (1..=self.output_count())
            .map(|j| self.m.iter().take_while(|&&v| v >= j).count())
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,m_i\n");
        for (i, v) in self.m.iter().enumerate() {
            out.push_str(&format!("{},{v}\n", i + 1));
        }
        out
    }
}

fn realized_for(variant: Variant, n: usize, alpha: f64, beta: f64, len: usize, max_outputs: usize) -> Result<usize> {
    Ok(allocate(variant, n, alpha, beta, len)?.capped(max_outputs).realized())
}

/// The largest `n` whose realized budget `M(n)` does not exceed `n_target`,
/// with counts truncated at `len` and capped at `max_outputs`. Returns
/// `(n, M(n))`. When `M` saturates below the target the smallest `n`
/// reaching the saturated value is returned.
pub fn budget_for(
    n_target: usize,
    variant: Variant,
    alpha: f64,
    beta: f64,
    len: usize,
    max_outputs: usize,
) -> Result<(usize, usize)> {
    if n_target == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    check_exponents(alpha, beta)?;
    if len == 0 || max_outputs == 0 {
        return Err(Error::InvalidArgument("empty enumeration or output set".into()));
    }
    let m_of = |n: usize| realized_for(variant, n, alpha, beta, len, max_outputs);
    const CEILING: usize = 1 << 32;
    let mut hi = 1;
    while hi < CEILING && m_of(hi * 2)? <= n_target {
        hi *= 2;
    }
    if hi >= CEILING {
        let top = m_of(CEILING)?;
        let (mut lo, mut up) = (1, CEILING);
        while lo < up {
            let mid = lo + (up - lo) / 2;
            if m_of(mid)? >= top {
                up = mid;
            } else {
                lo = mid + 1;
            }
        }
        return Ok((lo, top));
    }
    // M(hi) <= target < M(2 hi)
    let (mut lo, mut up) = (hi, hi * 2);
    while up - lo > 1 {
        let mid = lo + (up - lo) / 2;
        if m_of(mid)? <= n_target {
            lo = mid;
        } else {
            up = mid;
        }
    }
    Ok((lo, m_of(lo)?))
}

/// The plan realized by [`budget_for`].
pub fn plan_for_budget(
    n_target: usize,
    variant: Variant,
    alpha: f64,
    beta: f64,
    len: usize,
    max_outputs: usize,
) -> Result<AllocationPlan> {
    let (n, _) = budget_for(n_target, variant, alpha, beta, len, max_outputs)?;
    Ok(allocate(variant, n, alpha, beta, len)?.capped(max_outputs))
}

/// `Λ_{N,j}` for `j = 1..=m_1`, each a prefix of `enumeration`.
pub fn build_output_sets(enumeration: &[MultiIndex], plan: &AllocationPlan) -> Result<Vec<DownwardClosedSet>> {
    let support = plan.counts().iter().take_while(|&&v| v > 0).count();
    if support > enumeration.len() {
        return Err(Error::InvalidArgument(format!(
            "plan needs {support} indices, enumeration has {}",
            enumeration.len()
        )));
    }
    if let Some((_, nu)) = first_open_prefix(&enumeration[..support]) {
        let missing = nu
            .predecessors()
            .find(|p| !enumeration[..support].contains(p))
            .map(|p| p.to_string())
            .unwrap_or_else(|| "duplicate".into());
        return Err(Error::NotDownwardClosed {
            index: nu.to_string(),
            missing,
        });
    }
    plan.set_sizes()
        .into_iter()
        .map(|k| DownwardClosedSet::new(enumeration[..k].to_vec()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_case_examples() {
        let p = allocate_worst_case(1, 2.0, 1.0, 100).unwrap();
        assert_eq!(p.counts(), &[1]);
        assert_eq!(p.realized(), 1);
        let p = allocate_worst_case(4, 2.0, 1.0, 100).unwrap();
        assert_eq!(p.counts(), &[4, 2, 2, 1]);
        assert_eq!(p.realized(), 9);
        assert_eq!(p.m(5), 0);
    }

    #[test]
    fn mean_square_example() {
        let p = allocate_mean_square(4, 1.5, 1.0, 100).unwrap();
        assert_eq!(p.counts(), &[4, 2, 2, 1]);
        assert_eq!(allocate_mean_square(1, 1.5, 1.0, 10).unwrap().counts(), &[1]);
    }

    #[test]
    fn invalid_exponents() {
        assert!(allocate_worst_case(3, 1.0, 1.0, 10).is_err());
        assert!(allocate_worst_case(3, 2.0, 0.0, 10).is_err());
        assert!(allocate_worst_case(0, 2.0, 1.0, 10).is_err());
    }

    #[test]
    fn budget_examples() {
        assert_eq!(
            budget_for(1, Variant::WorstCase, 2.0, 1.0, usize::MAX, usize::MAX).unwrap(),
            (1, 1)
        );
        assert_eq!(
            budget_for(9, Variant::WorstCase, 2.0, 1.0, usize::MAX, usize::MAX).unwrap(),
            (4, 9)
        );
        assert!(budget_for(0, Variant::WorstCase, 2.0, 1.0, 10, 10).is_err());
    }

    #[test]
    fn saturated_budget_terminates() {
        let (n, m) = budget_for(1000, Variant::WorstCase, 2.0, 1.0, 3, 2).unwrap();
        assert_eq!(m, 6);
        assert_eq!(n, 4);
    }

    #[test]
    fn output_sets_from_counts() {
        let en: Vec<MultiIndex> = (0..4).map(|k| MultiIndex::from_dense(&[k])).collect();
        let plan = AllocationPlan::from_counts(vec![4, 2, 2, 1], Variant::WorstCase).unwrap();
        let sets = build_output_sets(&en, &plan).unwrap();
        let sizes: Vec<usize> = sets.iter().map(|s| s.len()).collect();
        assert_eq!(sizes, vec![4, 3, 1, 1]);
        assert_eq!(sizes.iter().sum::<usize>(), plan.realized());

        let bad = vec![MultiIndex::zero(), MultiIndex::from_dense(&[2])];
        let plan = AllocationPlan::from_counts(vec![1, 1], Variant::WorstCase).unwrap();
        assert!(matches!(
            build_output_sets(&bad, &plan),
            Err(Error::NotDownwardClosed { .. })
        ));
    }

    #[test]
    fn plan_csv() {
        let p = allocate_worst_case(4, 2.0, 1.0, 100).unwrap();
        assert_eq!(p.to_csv(), "i,m_i\n1,4\n2,2\n3,2\n4,1\n");
    }
}
