//! Enriched categories: finite hom matrices, continuous point spaces, and
//! enriched functors between them.
//!
//! A Cost-enriched category is a Lawvere metric space: `d(a, a) = 0` and the
//! triangle inequality, with neither symmetry nor positivity required.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::quantale::{Cost, CostValue, Quantale};

/// Default tolerance for checking laws over real-valued bases.
pub const LAW_TOLERANCE: f64 = 1e-12;

/// Cap on the number of objects a materialized tensor power may have.
pub const TENSOR_POWER_LIMIT: u128 = 1_000_000;

/// Anything with hom-objects valued in `Q`.
pub trait Enriched<Q: Quantale> {
    type Obj;

    fn hom(&self, a: &Self::Obj, b: &Self::Obj) -> Q::Value;

    fn contains(&self, obj: &Self::Obj) -> bool;

    /// Number of objects when finite.
    fn object_count(&self) -> Option<usize> {
        None
    }
}

/// A law violation found by a validator, with its witnessing objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// `C(a, a)` is not the unit.
    Unit { object: usize },
    /// `C(a, b) ⊗ C(b, c)` does not entail `C(a, c)`.
    Composition { a: usize, b: usize, c: usize },
    /// A functor increased the hom between `a` and `b`.
    Increase { a: usize, b: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A finite `Q`-enriched category stored as a dense hom matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteVCat<Q: Quantale> {
    names: Vec<String>,
    hom: Vec<Q::Value>,
}

impl<Q: Quantale> FiniteVCat<Q> {
    /// Builds a category from row-major hom rows, `rows[a][b] = C(a, b)`.
    ///
    /// Only the shape and the names are checked here; the laws are checked
    /// by [`FiniteVCat::validate`] so that broken inputs can be reported.
    pub fn new(names: Vec<String>, rows: Vec<Vec<Q::Value>>) -> Result<Self> {
        check_names(&names)?;
        let n = names.len();
        if rows.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: rows.len(),
            });
        }
        let mut hom = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare {
                    row,
                    found: r.len(),
                    expected: n,
                });
            }
            hom.extend(r);
        }
        Ok(FiniteVCat { names, hom })
    }

    pub fn from_fn(names: Vec<String>, f: impl Fn(usize, usize) -> Q::Value) -> Result<Self> {
        check_names(&names)?;
        let n = names.len();
        let hom = (0..n * n).map(|ix| f(ix / n, ix % n)).collect();
        Ok(FiniteVCat { names, hom })
    }

    /// Unit on the diagonal, bottom everywhere else.
    pub fn discrete(names: Vec<String>) -> Result<Self> {
        Self::from_fn(names, |a, b| if a == b { Q::unit() } else { Q::bottom() })
    }

    /// Discrete category on objects named `0..n`.
    pub fn discrete_indexed(n: usize) -> Result<Self> {
        Self::discrete((0..n).map(|i| format!("{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, ix: usize) -> &str {
        &self.names[ix]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> Q::Value {
        self.hom[a * self.len() + b]
    }

    pub fn row(&self, a: usize) -> &[Q::Value] {
        let n = self.len();
        &self.hom[a * n..(a + 1) * n]
    }

    /// True when every off-diagonal hom is bottom and the diagonal is unit.
    pub fn is_discrete(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                let v = self.get(a, b);
                if a == b {
                    v == Q::unit()
                } else {
                    v == Q::bottom()
                }
            })
        })
    }

    /// Checks the unit law and the composition law, reporting every failure.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let n = self.len();
        let mut violations = Vec::new();
        for a in 0..n {
            if !Q::eq_within(self.get(a, a), Q::unit(), tol) {
                violations.push(Violation::Unit { object: a });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.get(a, b);
                for c in 0..n {
                    let via = Q::tensor(ab, self.get(b, c));
                    if !Q::leq_within(via, self.get(a, c), tol) {
                        violations.push(Violation::Composition { a, b, c });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// The `k`-fold tensor power: objects are ordered `k`-tuples in
    /// lexicographic order, homs are the tensor of componentwise homs.
    pub fn tensor_power(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroPower);
        }
        let n = self.len();
        let count = (n as u128)
            .checked_pow(k as u32)
            .filter(|&c| c <= TENSOR_POWER_LIMIT)
            .ok_or(Error::TooLarge(
                (n as u128).saturating_pow(k as u32),
                TENSOR_POWER_LIMIT,
            ))?;
        let count = count as usize;
        let tuples: Vec<Vec<usize>> = (0..count).map(|ix| tuple_at(ix, n, k)).collect();
        let names = tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t.iter().map(|&i| self.name(i)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let mut hom = Vec::with_capacity(count * count);
        for x in &tuples {
            for y in &tuples {
                let v = x
                    .iter()
                    .zip(y)
                    .fold(Q::unit(), |acc, (&a, &b)| Q::tensor(acc, self.get(a, b)));
                hom.push(v);
            }
        }
        Ok(FiniteVCat { names, hom })
    }
}

impl<Q: Quantale> Enriched<Q> for FiniteVCat<Q> {
    type Obj = usize;

    #[inline]
    fn hom(&self, a: &usize, b: &usize) -> Q::Value {
        self.get(*a, *b)
    }

    fn contains(&self, obj: &usize) -> bool {
        *obj < self.len()
    }

    fn object_count(&self) -> Option<usize> {
        Some(self.len())
    }
}

fn check_names(names: &[String]) -> Result<()> {
    if names.is_empty() {
        return Err(Error::Empty);
    }
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::DuplicateName(n.clone()));
        }
    }
    Ok(())
}

/// Mixed-radix decoding of a tensor-power object index.
pub fn tuple_at(mut ix: usize, n: usize, k: usize) -> Vec<usize> {
    let mut t = vec![0; k];
    for slot in t.iter_mut().rev() {
        *slot = ix % n;
        ix /= n;
    }
    t
}

/// All ordered `k`-tuples of distinct indices below `n`, lexicographically.
pub fn distinct_tuples(n: usize, k: usize) -> Result<Vec<Vec<usize>>> {
    if k == 0 {
        return Err(Error::ZeroPower);
    }
    if k > n {
        return Err(Error::FewerPointsThanK { n, k });
    }
    let mut count: u128 = 1;
    for i in 0..k {
        count *= (n - i) as u128;
    }
    if count > TENSOR_POWER_LIMIT {
        return Err(Error::TooLarge(count, TENSOR_POWER_LIMIT));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut current = Vec::with_capacity(k);
    let mut used = vec![false; n];
    fill_distinct(n, k, &mut current, &mut used, &mut out);
    Ok(out)
}

fn fill_distinct(
    n: usize,
    k: usize,
    current: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    for i in 0..n {
        if !used[i] {
            used[i] = true;
            current.push(i);
            fill_distinct(n, k, current, used, out);
            current.pop();
            used[i] = false;
        }
    }
}

/// Metric on real coordinate vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    L1,
    L2,
    LInf,
}

/// The ambient feature space: `R^dim` under one of the standard norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSpace {
    dim: usize,
    metric: Metric,
}

impl PointSpace {
    pub fn new(dim: usize, metric: Metric) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty);
        }
        Ok(PointSpace { dim, metric })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    /// Distance between two points of this space. Coordinates must be
    /// finite; lengths are assumed to equal `dim`.
    #[inline]
    pub fn distance(&self, a: &[f64], b: &[f64]) -> CostValue {
        debug_assert_eq!(a.len(), self.dim);
        debug_assert_eq!(b.len(), self.dim);
        let pairs = a.iter().zip(b).map(|(x, y)| libm::fabs(x - y));
        let d = match self.metric {
            Metric::L1 => pairs.sum::<f64>(),
            Metric::L2 => {
                let ss: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                libm::sqrt(ss)
            }
            Metric::LInf => pairs.fold(0.0, f64::max),
        };
        CostValue::from_raw(d)
    }

    pub fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::NotAnObject);
        }
        Ok(())
    }
}

impl Enriched<Cost> for PointSpace {
    type Obj = Vec<f64>;

    fn hom(&self, a: &Vec<f64>, b: &Vec<f64>) -> CostValue {
        self.distance(a, b)
    }

    fn contains(&self, obj: &Vec<f64>) -> bool {
        self.check_point(obj).is_ok()
    }
}

/// The real line with `Y(a, b) = |b - a|`, used as a regression-style label
/// space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RealLine;

impl Enriched<Cost> for RealLine {
    type Obj = f64;

    #[inline]
    fn hom(&self, a: &f64, b: &f64) -> CostValue {
        CostValue::from_raw(libm::fabs(b - a))
    }

    fn contains(&self, obj: &f64) -> bool {
        obj.is_finite()
    }
}

/// An enriched functor out of a finite category, given by its object map.
pub struct VFunctor<'a, Q: Quantale, C: Enriched<Q>> {
    source: &'a FiniteVCat<Q>,
    target: &'a C,
    map: &'a [C::Obj],
}

impl<Q: Quantale, C: Enriched<Q>> Clone for VFunctor<'_, Q, C> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<Q: Quantale, C: Enriched<Q>> Copy for VFunctor<'_, Q, C> {}

impl<'a, Q: Quantale, C: Enriched<Q>> VFunctor<'a, Q, C> {
    pub fn new(source: &'a FiniteVCat<Q>, target: &'a C, map: &'a [C::Obj]) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::ArityMismatch {
                expected: source.len(),
                found: map.len(),
            });
        }
        for (i, obj) in map.iter().enumerate() {
            if !target.contains(obj) {
                return Err(match target.object_count() {
                    Some(len) => Error::OutOfRange { index: i, len },
                    None => Error::NotAnObject,
                });
            }
        }
        Ok(VFunctor {
            source,
            target,
            map,
        })
    }

    /// Skips the membership scan; callers have already validated `map`.
    pub(crate) fn new_unchecked(
        source: &'a FiniteVCat<Q>,
        target: &'a C,
        map: &'a [C::Obj],
    ) -> Self {
        debug_assert_eq!(map.len(), source.len());
        VFunctor {
            source,
            target,
            map,
        }
    }

    pub fn source(&self) -> &'a FiniteVCat<Q> {
        self.source
    }

    pub fn target(&self) -> &'a C {
        self.target
    }

    #[inline]
    pub fn apply(&self, i: usize) -> &C::Obj {
        &self.map[i]
    }

    pub fn object_map(&self) -> &'a [C::Obj] {
        self.map
    }

    /// Checks that no hom increases: `C(a, b)` entails `D(Fa, Fb)`.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let n = self.source.len();
        let mut violations = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let image = self.target.hom(&self.map[a], &self.map[b]);
                if !Q::leq_within(self.source.get(a, b), image, tol) {
                    violations.push(Violation::Increase { a, b });
                }
            }
        }
        ValidationReport { violations }
    }
}
