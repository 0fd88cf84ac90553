//! k nearest neighbours as the composite `A ∘ NNA_{F^k I, T^k I} ∘ Δ`.
//!
//! `F^k I` and `T^k I` restrict the k-fold tensor powers of the dataset
//! functors to tuples of distinct rows. `Δ` compares a tuple with a single
//! point; with a positive metric it is only true on the diagonal tuple
//! `(x, …, x)`, which is where the composite is evaluated. `A` is a
//! permutation-invariant aggregation policy returning `0` (accept) or `∞`.
//!
//! The fast path never materializes tuples. The distance of the nearest
//! distinct tuple to `(x, …, x)` is the sum of the `k` smallest row
//! distances, and for vote policies the best tuple with a given label count
//! vector takes the smallest rows of each label. [`KnnaModel::oracle_table`]
//! enumerates distinct tuples instead and serves as the reference.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::nna::{Dataset, LabelSpace, NnaModel};
use crate::quantale::{Cost, CostValue, Quantale};
use crate::vcat::{distinct_tuples, FiniteVCat, PointSpace};

/// Combinations the tie enumeration may visit.
pub const TIE_COMBINATION_LIMIT: u128 = 100_000;

/// Label count vectors the vote fast path may visit.
pub const COUNT_VECTOR_LIMIT: u128 = 1_000_000;

/// Largest dataset the enumeration oracle accepts.
pub const ORACLE_MAX_ROWS: usize = 12;
pub const ORACLE_MAX_K: usize = 4;

/// How a tuple of neighbour labels is reduced to a verdict on one label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Policy {
    /// Accept every most frequent label.
    Greedy,
    /// Accept the most frequent label only when it is unique.
    Conservative,
    /// Accept the tied most frequent label that comes first in the given
    /// preference order (label indices, most preferred first).
    Biased(Vec<usize>),
    /// Accept only when every neighbour carries the label.
    Unanimous,
}

impl Policy {
    pub fn is_vote(&self) -> bool {
        !matches!(self, Policy::Unanimous)
    }

    fn check_order(&self, label_count: usize) -> Result<()> {
        if let Policy::Biased(order) = self {
            let mut seen = vec![false; label_count];
            for &l in order {
                if l >= label_count || seen[l] {
                    return Err(Error::IncompletePreference);
                }
                seen[l] = true;
            }
            if !seen.iter().all(|&s| s) {
                return Err(Error::IncompletePreference);
            }
        }
        Ok(())
    }

    /// Verdict from per-label counts of a tuple.
    fn accepts_counts(&self, y: usize, counts: &[usize]) -> Result<bool> {
        let top = counts.iter().copied().max().unwrap_or(0);
        let is_mode = |l: usize| counts[l] == top && top > 0;
        Ok(match self {
            Policy::Greedy => is_mode(y),
            Policy::Conservative => is_mode(y) && counts.iter().filter(|&&c| c == top).count() == 1,
            Policy::Unanimous => {
                let total: usize = counts.iter().sum();
                total > 0 && counts[y] == total
            }
            Policy::Biased(order) => {
                let mut winner = None;
                for l in (0..counts.len()).filter(|&l| is_mode(l)) {
                    let rank = order
                        .iter()
                        .position(|&o| o == l)
                        .ok_or(Error::IncompletePreference)?;
                    if winner.is_none_or(|(r, _)| rank < r) {
                        winner = Some((rank, l));
                    }
                }
                winner.is_some_and(|(_, l)| l == y)
            }
        })
    }
}

/// The aggregator profunctor `A(y, ŷ)` for a finite label set of size
/// `label_count`: `0` when the policy assigns `y` to the tuple, `∞` otherwise.
pub fn aggregate(
    policy: &Policy,
    label_count: usize,
    y: usize,
    tuple: &[usize],
) -> Result<CostValue> {
    if y >= label_count {
        return Err(Error::OutOfRange {
            index: y,
            len: label_count,
        });
    }
    let mut counts = vec![0usize; label_count];
    for &l in tuple {
        if l >= label_count {
            return Err(Error::OutOfRange {
                index: l,
                len: label_count,
            });
        }
        counts[l] += 1;
    }
    Ok(if policy.accepts_counts(y, &counts)? {
        CostValue::ZERO
    } else {
        CostValue::INFINITY
    })
}

/// `Δ(x⃗, x) = X(x⃗_1, x) ⊗ … ⊗ X(x⃗_k, x)`.
pub fn delta_value(space: &PointSpace, tuple: &[Vec<f64>], x: &[f64]) -> Result<CostValue> {
    space.check_point(x)?;
    let mut acc = Cost::unit();
    for p in tuple {
        space.check_point(p)?;
        acc = Cost::tensor(acc, space.distance(p, x));
    }
    Ok(acc)
}

/// Sum of the `k` smallest values; `k` must not exceed the length.
fn sum_smallest(values: &[CostValue], k: usize) -> CostValue {
    debug_assert!(k >= 1 && k <= values.len());
    let mut v = values.to_vec();
    v.select_nth_unstable(k - 1);
    v[..k]
        .iter()
        .fold(Cost::unit(), |acc, &c| Cost::tensor(acc, c))
}

/// All index sets of size `k` whose summed cost is minimal up to `eps`,
/// each sorted ascending. Rows within `eps` of the `k`-th smallest cost are
/// interchangeable tie candidates. When fewer than `k` costs are finite
/// every set attains the infinite minimum.
pub fn minimizing_sets(costs: &[CostValue], k: usize, eps: f64) -> Result<Vec<Vec<usize>>> {
    if k == 0 || k > costs.len() {
        return Err(Error::FewerPointsThanK { n: costs.len(), k });
    }
    let mut order: Vec<usize> = (0..costs.len()).collect();
    order.sort_by_key(|&i| costs[i]);
    let kth = costs[order[k - 1]];
    let near = |c: CostValue| kth.is_infinite() || Cost::eq_within(c, kth, eps);
    let sure: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| !near(costs[i]) && costs[i] < kth)
        .collect();
    let ties: Vec<usize> = order.iter().copied().filter(|&i| near(costs[i])).collect();
    let need = k - sure.len();
    if binomial(ties.len() as u128, need as u128) > TIE_COMBINATION_LIMIT {
        return Err(Error::Guard("too many tied neighbour sets"));
    }
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(need);
    choose(&ties, need, 0, &mut pick, &mut |chosen| {
        let mut set: Vec<usize> = sure.iter().chain(chosen).copied().collect();
        set.sort_unstable();
        out.push(set);
    });
    out.sort();
    Ok(out)
}

fn choose(
    pool: &[usize],
    need: usize,
    start: usize,
    pick: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if pick.len() == need {
        emit(pick);
        return;
    }
    for i in start..pool.len() {
        pick.push(pool[i]);
        choose(pool, need, i + 1, pick, emit);
        pick.pop();
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

#[derive(Debug, Clone)]
pub struct KnnaModel<L: LabelSpace> {
    nna: NnaModel<L>,
    k: usize,
    policy: Policy,
}

impl<L: LabelSpace> KnnaModel<L> {
    pub fn new(nna: NnaModel<L>, k: usize, policy: Policy) -> Result<Self> {
        let n = nna.dataset().len();
        if k == 0 {
            return Err(Error::ZeroPower);
        }
        if k > n {
            return Err(Error::FewerPointsThanK { n, k });
        }
        if policy.is_vote() {
            let labels = nna.dataset().labels();
            let count = labels.object_count().ok_or(Error::VoteNeedsDiscrete)?;
            if !labels.is_discrete() {
                return Err(Error::VoteNeedsDiscrete);
            }
            policy.check_order(count)?;
        }
        Ok(KnnaModel { nna, k, policy })
    }

    pub fn nna(&self) -> &NnaModel<L> {
        &self.nna
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn policy(&self) -> &Policy {
        &self.policy
    }

    fn dataset(&self) -> &Dataset<L> {
        self.nna.dataset()
    }

    fn label_count(&self) -> Result<usize> {
        self.dataset()
            .labels()
            .object_count()
            .ok_or(Error::VoteNeedsDiscrete)
    }

    fn label_index(&self, y: &L::Obj) -> Result<usize> {
        let count = self.label_count()?;
        self.dataset()
            .labels()
            .label_index(y)
            .ok_or(Error::OutOfRange {
                index: usize::MAX,
                len: count,
            })
    }

    /// Per-row class-side costs `d(Fi, x) + Y(y, Ti)`.
    fn class_costs(&self, y: &L::Obj, d: &[CostValue]) -> Vec<CostValue> {
        let ds = self.dataset();
        d.iter()
            .zip(ds.targets())
            .map(|(&di, t)| Cost::tensor(di, ds.labels().hom(y, t)))
            .collect()
    }

    /// The graded k-NN value at `(y, x)`.
    pub fn knna_cost(&self, y: L::Obj, x: &[f64]) -> Result<CostValue> {
        let ds = self.dataset();
        ds.space().check_point(x)?;
        let d = ds.distances(x);
        let nearest = sum_smallest(&d, self.k);
        let best = match &self.policy {
            Policy::Unanimous => sum_smallest(&self.class_costs(&y, &d), self.k),
            vote => self.best_vote_sum(vote, self.label_index(&y)?, &d)?,
        };
        Ok(Cost::hom(nearest, best))
    }

    /// Smallest summed distance over distinct index sets whose label counts
    /// the policy maps to `y`.
    fn best_vote_sum(&self, policy: &Policy, y: usize, d: &[CostValue]) -> Result<CostValue> {
        let ds = self.dataset();
        let label_count = self.label_count()?;
        let mut per_label: Vec<Vec<CostValue>> = vec![Vec::new(); label_count];
        for (i, &di) in d.iter().enumerate() {
            per_label[self.label_index(&ds.targets()[i])?].push(di);
        }
        let present: Vec<usize> = (0..label_count)
            .filter(|&l| !per_label[l].is_empty())
            .collect();
        if binomial(
            (self.k + present.len() - 1) as u128,
            (present.len() - 1) as u128,
        ) > COUNT_VECTOR_LIMIT
        {
            return Err(Error::Guard("too many label count vectors"));
        }
        // prefix[l][c] = sum of the c smallest distances carrying label l
        let prefix: Vec<Vec<CostValue>> = per_label
            .iter_mut()
            .map(|v| {
                v.sort_unstable();
                let mut p = Vec::with_capacity(v.len() + 1);
                p.push(Cost::unit());
                for &c in v.iter() {
                    let last = *p.last().unwrap();
                    p.push(Cost::tensor(last, c));
                }
                p
            })
            .collect();

        let mut counts = vec![0usize; label_count];
        let mut best = Cost::bottom();
        let mut err = None;
        distribute(
            &present,
            &per_label,
            self.k,
            0,
            &mut counts,
            &mut |counts| match policy.accepts_counts(y, counts) {
                Ok(true) => {
                    let sum = present.iter().fold(Cost::unit(), |acc, &l| {
                        Cost::tensor(acc, prefix[l][counts[l]])
                    });
                    best = Cost::join([best, sum]);
                }
                Ok(false) => {}
                Err(e) => err = Some(e),
            },
        );
        match err {
            Some(e) => Err(e),
            None => Ok(best),
        }
    }

    /// Index sets of size `k` minimizing the summed cost to `(x, …, x)`.
    /// With `y` given, costs include the label term `Y(y, Ti)`.
    pub fn minimizing_sets(&self, y: Option<L::Obj>, x: &[f64]) -> Result<Vec<Vec<usize>>> {
        let ds = self.dataset();
        ds.space().check_point(x)?;
        let d = ds.distances(x);
        let costs = match y {
            Some(y) => self.class_costs(&y, &d),
            None => d,
        };
        minimizing_sets(&costs, self.k, self.nna.epsilon())
    }

    /// Direct evaluation of the composite by enumerating distinct tuples.
    pub fn knna_oracle(&self, y: L::Obj, x: &[f64]) -> Result<CostValue> {
        self.oracle_table(x)?.value(self, y)
    }

    /// The label-independent part of the oracle at `x`: every distinct
    /// tuple, the nearest tuple distance and, for vote policies, the
    /// class-side infimum of each label tuple occurring as an image of `T^k`.
    pub fn oracle_table(&self, x: &[f64]) -> Result<OracleTable<L::Obj>> {
        let ds = self.dataset();
        let n = ds.len();
        if n > ORACLE_MAX_ROWS || self.k > ORACLE_MAX_K {
            return Err(Error::Guard("oracle limited to 12 rows and k <= 4"));
        }
        ds.space().check_point(x)?;
        let tuples = distinct_tuples(n, self.k)?;
        let dist: Vec<CostValue> = ds
            .features()
            .iter()
            .map(|p| ds.space().distance(p, x))
            .collect();
        let mut table = OracleTable {
            tuples,
            dist,
            nearest: Cost::bottom(),
            images: Vec::new(),
            _labels: core::marker::PhantomData,
        };
        table.nearest = Cost::join(table.tuples.iter().map(|t| table.tuple_distance(t)));

        if self.policy.is_vote() {
            let mut seen: BTreeMap<Vec<usize>, Vec<L::Obj>> = BTreeMap::new();
            for t in &table.tuples {
                let objs: Vec<L::Obj> = t.iter().map(|&i| ds.targets()[i]).collect();
                let key = objs
                    .iter()
                    .map(|o| self.label_index(o))
                    .collect::<Result<Vec<_>>>()?;
                seen.entry(key).or_insert(objs);
            }
            table.images = seen
                .into_iter()
                .map(|(key, objs)| (key, table.class_side(ds, &objs)))
                .collect();
        }
        Ok(table)
    }
}

/// Enumeration results at one query point, reusable across labels.
#[derive(Debug, Clone)]
pub struct OracleTable<Y> {
    tuples: Vec<Vec<usize>>,
    dist: Vec<CostValue>,
    nearest: CostValue,
    images: Vec<(Vec<usize>, CostValue)>,
    #[doc(hidden)]
    _labels: core::marker::PhantomData<Y>,
}

impl<Y: Copy + PartialEq + core::fmt::Debug> OracleTable<Y> {
    /// Distance from `(x, …, x)` to the nearest tuple of distinct rows.
    pub fn nearest(&self) -> CostValue {
        self.nearest
    }

    fn tuple_distance(&self, t: &[usize]) -> CostValue {
        t.iter()
            .fold(Cost::unit(), |acc, &i| Cost::tensor(acc, self.dist[i]))
    }

    /// `⋁_t Δ-distance(t) ⊗ Y^k(ŷ, T^k t)` over distinct tuples `t`.
    fn class_side<L: LabelSpace<Obj = Y>>(&self, ds: &Dataset<L>, yhat: &[Y]) -> CostValue {
        Cost::join(
            self.tuples
                .iter()
                .map(|t| self.class_tuple_cost(ds, t, yhat)),
        )
    }

    fn class_tuple_cost<L: LabelSpace<Obj = Y>>(
        &self,
        ds: &Dataset<L>,
        t: &[usize],
        yhat: &[Y],
    ) -> CostValue {
        t.iter().zip(yhat).fold(Cost::unit(), |acc, (&i, yj)| {
            Cost::tensor(
                acc,
                Cost::tensor(self.dist[i], ds.labels().hom(yj, &ds.targets()[i])),
            )
        })
    }

    /// `⋁_ŷ Cost(nearest, class(ŷ)) ⊗ A(y, ŷ)`.
    pub fn value<L: LabelSpace<Obj = Y>>(&self, model: &KnnaModel<L>, y: Y) -> Result<CostValue> {
        match &model.policy {
            Policy::Unanimous => {
                // A is zero only on ŷ = (y, …, y)
                let yhat = vec![y; model.k];
                Ok(Cost::hom(
                    self.nearest,
                    self.class_side(model.dataset(), &yhat),
                ))
            }
            policy => {
                let count = model.label_count()?;
                let yi = model.label_index(&y)?;
                let mut acc = Cost::bottom();
                for (key, class) in &self.images {
                    let a = aggregate(policy, count, yi, key)?;
                    acc = Cost::join([acc, Cost::tensor(Cost::hom(self.nearest, *class), a)]);
                }
                Ok(acc)
            }
        }
    }

    /// Tuples whose cost is within `eps` of the minimum, as sorted index
    /// sets. Without `y` the cost is the plain tuple distance; with `y` it
    /// includes the label term of `(y, …, y)`.
    pub fn argmin_sets<L: LabelSpace<Obj = Y>>(
        &self,
        model: &KnnaModel<L>,
        y: Option<Y>,
        eps: f64,
    ) -> Vec<Vec<usize>> {
        let ds = model.dataset();
        let cost = |t: &[usize]| match y {
            Some(y) => self.class_tuple_cost(ds, t, &vec![y; model.k]),
            None => self.tuple_distance(t),
        };
        let best = Cost::join(self.tuples.iter().map(|t| cost(t)));
        let mut sets: Vec<Vec<usize>> = self
            .tuples
            .iter()
            .filter(|t| Cost::leq_within(best, cost(t), eps))
            .map(|t| {
                let mut t = t.clone();
                t.sort_unstable();
                t
            })
            .collect();
        sets.sort();
        sets.dedup();
        sets
    }
}

impl KnnaModel<FiniteVCat<Cost>> {
    /// Labels whose k-NN value is within epsilon of zero. Conservative
    /// voting may return nothing on ties.
    pub fn knna_classify(&self, x: &[f64]) -> Result<Vec<usize>> {
        let eps = self.nna.epsilon();
        let mut out = Vec::new();
        for y in 0..self.nna.label_count() {
            if self.knna_cost(y, x)?.get() <= eps {
                out.push(y);
            }
        }
        Ok(out)
    }
}

fn distribute(
    present: &[usize],
    per_label: &[Vec<CostValue>],
    remaining: usize,
    pos: usize,
    counts: &mut [usize],
    visit: &mut impl FnMut(&[usize]),
) {
    if pos + 1 == present.len() {
        let l = present[pos];
        if remaining <= per_label[l].len() {
            counts[l] = remaining;
            visit(counts);
            counts[l] = 0;
        }
        return;
    }
    let l = present[pos];
    for c in 0..=remaining.min(per_label[l].len()) {
        counts[l] = c;
        distribute(present, per_label, remaining - c, pos + 1, counts, visit);
    }
    counts[l] = 0;
}
