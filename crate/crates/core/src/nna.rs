//! The nearest neighbours classifier assembled from profunctors.
//!
//! A dataset is a pair of functors out of the discrete index category `N`:
//! `F : N → X` placing each row in feature space and `T : N → Y` assigning
//! its label. Two composites are compared pointwise in Cost:
//!
//! * `(1 ∘ F^*)(y, x)`: distance from `x` to the nearest row, whatever its label;
//! * `(T_* ∘ F^*)(y, x)`: infimum over rows of `d(Fi, x) + Y(y, Ti)`.
//!
//! The graded classifier is their internal hom (truncated subtraction) and a
//! label is accepted where that excess is within `epsilon` of zero.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::prof::{
    compose, hom_compare, lower_star, materialize, terminal, upper_star, Prof, ProfMatrix,
};
use crate::quantale::{Cost, CostValue, Quantale};
use crate::vcat::{Enriched, FiniteVCat, PointSpace, RealLine, VFunctor};

/// Default acceptance threshold on the graded output.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// A Cost-enriched label space.
pub trait LabelSpace: Enriched<Cost, Obj: Copy + PartialEq + core::fmt::Debug> {
    /// Unit diagonal and infinite everywhere else.
    fn is_discrete(&self) -> bool;

    /// Position of a label in a finite label space.
    fn label_index(&self, y: &Self::Obj) -> Option<usize>;
}

impl LabelSpace for FiniteVCat<Cost> {
    fn is_discrete(&self) -> bool {
        FiniteVCat::is_discrete(self)
    }

    fn label_index(&self, y: &usize) -> Option<usize> {
        (*y < self.len()).then_some(*y)
    }
}

impl LabelSpace for RealLine {
    fn is_discrete(&self) -> bool {
        false
    }

    fn label_index(&self, _: &f64) -> Option<usize> {
        None
    }
}

/// Rows of features with their labels.
#[derive(Debug, Clone)]
pub struct Dataset<L: LabelSpace> {
    space: PointSpace,
    index: FiniteVCat<Cost>,
    features: Vec<Vec<f64>>,
    labels: L,
    targets: Vec<L::Obj>,
}

impl<L: LabelSpace> Dataset<L> {
    pub fn new(
        space: PointSpace,
        features: Vec<Vec<f64>>,
        labels: L,
        targets: Vec<L::Obj>,
    ) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if features.len() != targets.len() {
            return Err(Error::LengthMismatch {
                features: features.len(),
                targets: targets.len(),
            });
        }
        for p in &features {
            space.check_point(p)?;
        }
        let index = FiniteVCat::discrete_indexed(features.len())?;
        // membership checks for both functors happen here, once
        VFunctor::new(&index, &space, &features)?;
        VFunctor::new(&index, &labels, &targets)?;
        Ok(Dataset {
            space,
            index,
            features,
            labels,
            targets,
        })
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn space(&self) -> &PointSpace {
        &self.space
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn labels(&self) -> &L {
        &self.labels
    }

    pub fn targets(&self) -> &[L::Obj] {
        &self.targets
    }

    /// The discrete index category `N`.
    pub fn index(&self) -> &FiniteVCat<Cost> {
        &self.index
    }

    /// `F : N → X`.
    pub fn feature_functor(&self) -> VFunctor<'_, Cost, PointSpace> {
        VFunctor::new_unchecked(&self.index, &self.space, &self.features)
    }

    /// `T : N → Y`.
    pub fn target_functor(&self) -> VFunctor<'_, Cost, L> {
        VFunctor::new_unchecked(&self.index, &self.labels, &self.targets)
    }

    /// `d(Fi, x)` for every row.
    pub fn distances(&self, x: &[f64]) -> Vec<CostValue> {
        self.features
            .iter()
            .map(|p| self.space.distance(p, x))
            .collect()
    }
}

/// A nearest neighbours model: the dataset plus a decision tolerance.
#[derive(Debug, Clone)]
pub struct NnaModel<L: LabelSpace> {
    dataset: Dataset<L>,
    epsilon: f64,
}

impl<L: LabelSpace> NnaModel<L> {
    pub fn new(dataset: Dataset<L>, epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::BadEpsilon);
        }
        Ok(NnaModel { dataset, epsilon })
    }

    pub fn dataset(&self) -> &Dataset<L> {
        &self.dataset
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn check_query(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.dataset.space.check_point(x)?;
        Ok(x.to_vec())
    }

    /// `(T_* ∘ F^*)(y, x)`: the best `d(Fi, x) + Y(y, Ti)` over rows.
    pub fn to_class_distance(&self, y: L::Obj, x: &[f64]) -> Result<CostValue> {
        let x = self.check_query(x)?;
        let f = self.dataset.feature_functor();
        let t = self.dataset.target_functor();
        let class_side = compose(lower_star(&t), upper_star(&f))?;
        Ok(class_side.eval(&y, &x))
    }

    /// `(1 ∘ F^*)(y, x)` for any `y`: distance to the nearest row.
    pub fn to_any_distance(&self, x: &[f64]) -> Result<CostValue> {
        let x = self.check_query(x)?;
        let f = self.dataset.feature_functor();
        let any_side = compose(self.forgetful(), upper_star(&f))?;
        Ok(any_side.eval(&self.dataset.targets[0], &x))
    }

    fn forgetful(&self) -> impl Prof<Cost, Source = usize, Target = L::Obj> {
        terminal::<Cost, usize, L::Obj>(
            Some(self.dataset.len()),
            self.dataset.labels.object_count(),
        )
    }

    /// Graded classifier: `Cost((1 ∘ F^*)(y, x), (T_* ∘ F^*)(y, x))`.
    pub fn cost_nna(&self, y: L::Obj, x: &[f64]) -> Result<CostValue> {
        let x = self.check_query(x)?;
        let f = self.dataset.feature_functor();
        let t = self.dataset.target_functor();
        let any_side = compose(self.forgetful(), upper_star(&f))?;
        let class_side = compose(lower_star(&t), upper_star(&f))?;
        Ok(hom_compare(any_side, class_side)?.eval(&y, &x))
    }

    /// Whether `x` takes label `y`.
    pub fn bool_nna(&self, y: L::Obj, x: &[f64]) -> Result<bool> {
        Ok(self.cost_nna(y, x)?.get() <= self.epsilon)
    }
}

impl NnaModel<FiniteVCat<Cost>> {
    pub fn label_count(&self) -> usize {
        self.dataset.labels.len()
    }

    /// Every label accepted at `x`. Ties and dependent labels give several.
    pub fn classify(&self, x: &[f64]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for y in 0..self.label_count() {
            if self.bool_nna(y, x)? {
                out.push(y);
            }
        }
        Ok(out)
    }

    /// `cost_nna` for every label, in label order.
    pub fn costs(&self, x: &[f64]) -> Result<Vec<CostValue>> {
        (0..self.label_count())
            .map(|y| self.cost_nna(y, x))
            .collect()
    }

    /// The textbook relation: labels of all rows whose distance attains the
    /// minimum (within epsilon). Defined only for discrete label spaces.
    pub fn classical_oracle(&self, x: &[f64]) -> Result<Vec<usize>> {
        if !self.dataset.labels.is_discrete() {
            return Err(Error::NotDiscrete);
        }
        self.dataset.space.check_point(x)?;
        let d = self.dataset.distances(x);
        let best = d.iter().copied().min().expect("dataset is non-empty");
        let mut hit = alloc::vec![false; self.label_count()];
        for (i, di) in d.iter().enumerate() {
            if Cost::hom(best, *di).get() <= self.epsilon {
                hit[self.dataset.targets[i]] = true;
            }
        }
        Ok(hit
            .iter()
            .enumerate()
            .filter_map(|(y, &h)| h.then_some(y))
            .collect())
    }
}

/// The nearest neighbours construction over an arbitrary base, for a finite
/// feature category: `V((1 ∘ F^*)(y, x), (T_* ∘ F^*)(y, x))` as a matrix
/// with one row per label and one column per feature object.
pub fn v_nna<Q: Quantale>(
    features: &FiniteVCat<Q>,
    feature_map: &[usize],
    labels: &FiniteVCat<Q>,
    target_map: &[usize],
) -> Result<ProfMatrix<Q>> {
    if feature_map.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if feature_map.len() != target_map.len() {
        return Err(Error::LengthMismatch {
            features: feature_map.len(),
            targets: target_map.len(),
        });
    }
    let index = FiniteVCat::<Q>::discrete_indexed(feature_map.len())?;
    let f = VFunctor::new(&index, features, feature_map)?;
    let t = VFunctor::new(&index, labels, target_map)?;
    let one = terminal::<Q, usize, usize>(Some(index.len()), Some(labels.len()));
    let any_side = compose(one, upper_star(&f))?;
    let class_side = compose(lower_star(&t), upper_star(&f))?;
    materialize(&hom_compare(any_side, class_side)?)
}
