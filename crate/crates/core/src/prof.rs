//! Quantale-valued profunctors.
//!
//! A profunctor `R : X ⇸ Y` is evaluated as `R(y, x)`: target object first,
//! source object second. Profunctors between finite categories can be
//! materialized into a [`ProfMatrix`]; those touching a continuous space stay
//! lazy and are evaluated on demand.

use core::marker::PhantomData;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::quantale::Quantale;
use crate::vcat::{Enriched, FiniteVCat, VFunctor};

/// Variance marker for profunctor types that own no data of `Q`, `S` or `T`.
type Marker<Q, S, T> = PhantomData<fn() -> (Q, S, T)>;

pub trait Prof<Q: Quantale> {
    type Source;
    type Target;

    fn eval(&self, y: &Self::Target, x: &Self::Source) -> Q::Value;

    fn source_count(&self) -> Option<usize> {
        None
    }

    fn target_count(&self) -> Option<usize> {
        None
    }
}

impl<Q: Quantale, P: Prof<Q> + ?Sized> Prof<Q> for &P {
    type Source = P::Source;
    type Target = P::Target;

    #[inline]
    fn eval(&self, y: &P::Target, x: &P::Source) -> Q::Value {
        (**self).eval(y, x)
    }

    fn source_count(&self) -> Option<usize> {
        (**self).source_count()
    }

    fn target_count(&self) -> Option<usize> {
        (**self).target_count()
    }
}

/// `F^*(i, x) = X(Fi, x)`, running against the functor.
pub struct UpperStar<'f, 'a, Q: Quantale, C: Enriched<Q>> {
    functor: &'f VFunctor<'a, Q, C>,
}

impl<Q: Quantale, C: Enriched<Q>> Clone for UpperStar<'_, '_, Q, C> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<Q: Quantale, C: Enriched<Q>> Copy for UpperStar<'_, '_, Q, C> {}

pub fn upper_star<'f, 'a, Q: Quantale, C: Enriched<Q>>(
    functor: &'f VFunctor<'a, Q, C>,
) -> UpperStar<'f, 'a, Q, C> {
    UpperStar { functor }
}

impl<Q: Quantale, C: Enriched<Q>> Prof<Q> for UpperStar<'_, '_, Q, C> {
    type Source = C::Obj;
    type Target = usize;

    #[inline]
    fn eval(&self, i: &usize, x: &C::Obj) -> Q::Value {
        self.functor.target().hom(self.functor.apply(*i), x)
    }

    fn source_count(&self) -> Option<usize> {
        self.functor.target().object_count()
    }

    fn target_count(&self) -> Option<usize> {
        Some(self.functor.source().len())
    }
}

/// `F_*(y, i) = Y(y, Fi)`, running along the functor.
pub struct LowerStar<'f, 'a, Q: Quantale, C: Enriched<Q>> {
    functor: &'f VFunctor<'a, Q, C>,
}

impl<Q: Quantale, C: Enriched<Q>> Clone for LowerStar<'_, '_, Q, C> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<Q: Quantale, C: Enriched<Q>> Copy for LowerStar<'_, '_, Q, C> {}

pub fn lower_star<'f, 'a, Q: Quantale, C: Enriched<Q>>(
    functor: &'f VFunctor<'a, Q, C>,
) -> LowerStar<'f, 'a, Q, C> {
    LowerStar { functor }
}

impl<Q: Quantale, C: Enriched<Q>> Prof<Q> for LowerStar<'_, '_, Q, C> {
    type Source = usize;
    type Target = C::Obj;

    #[inline]
    fn eval(&self, y: &C::Obj, i: &usize) -> Q::Value {
        self.functor.target().hom(y, self.functor.apply(*i))
    }

    fn source_count(&self) -> Option<usize> {
        Some(self.functor.source().len())
    }

    fn target_count(&self) -> Option<usize> {
        self.functor.target().object_count()
    }
}

/// The constantly-true profunctor.
#[derive(Debug, Clone, Copy)]
pub struct Terminal<Q, S, T> {
    source_count: Option<usize>,
    target_count: Option<usize>,
    _marker: Marker<Q, S, T>,
}

pub fn terminal<Q: Quantale, S, T>(
    source_count: Option<usize>,
    target_count: Option<usize>,
) -> Terminal<Q, S, T> {
    Terminal {
        source_count,
        target_count,
        _marker: PhantomData,
    }
}

impl<Q: Quantale, S, T> Prof<Q> for Terminal<Q, S, T> {
    type Source = S;
    type Target = T;

    #[inline]
    fn eval(&self, _: &T, _: &S) -> Q::Value {
        Q::unit()
    }

    fn source_count(&self) -> Option<usize> {
        self.source_count
    }

    fn target_count(&self) -> Option<usize> {
        self.target_count
    }
}

/// `(S ∘ R)(z, x) = ⋁_m R(m, x) ⊗ S(z, m)` over a finite middle.
#[derive(Debug, Clone, Copy)]
pub struct Composite<Q, S, R> {
    outer: S,
    inner: R,
    middle: usize,
    _marker: PhantomData<fn() -> Q>,
}

/// Composes `outer ∘ inner`. The middle category (target of `inner`,
/// source of `outer`) must be finite and both sides must agree on its size.
pub fn compose<Q, S, R>(outer: S, inner: R) -> Result<Composite<Q, S, R>>
where
    Q: Quantale,
    R: Prof<Q, Target = usize>,
    S: Prof<Q, Source = usize>,
{
    let middle = inner.target_count().ok_or(Error::InfiniteMiddle)?;
    match outer.source_count() {
        Some(m) if m != middle => Err(Error::EndpointMismatch),
        _ => Ok(Composite {
            outer,
            inner,
            middle,
            _marker: PhantomData,
        }),
    }
}

impl<Q, S, R> Prof<Q> for Composite<Q, S, R>
where
    Q: Quantale,
    R: Prof<Q, Target = usize>,
    S: Prof<Q, Source = usize>,
{
    type Source = R::Source;
    type Target = S::Target;

    fn eval(&self, z: &S::Target, x: &R::Source) -> Q::Value {
        Q::join((0..self.middle).map(|m| Q::tensor(self.inner.eval(&m, x), self.outer.eval(z, &m))))
    }

    fn source_count(&self) -> Option<usize> {
        self.inner.source_count()
    }

    fn target_count(&self) -> Option<usize> {
        self.outer.target_count()
    }
}

/// Pointwise internal hom `V(p(y, x), q(y, x))`.
///
/// This is a plain binary map; it need not satisfy the profunctor law.
#[derive(Debug, Clone, Copy)]
pub struct HomCompare<Q, P, R> {
    lhs: P,
    rhs: R,
    _marker: PhantomData<fn() -> Q>,
}

pub fn hom_compare<Q, P, R>(lhs: P, rhs: R) -> Result<HomCompare<Q, P, R>>
where
    Q: Quantale,
    P: Prof<Q>,
    R: Prof<Q, Source = P::Source, Target = P::Target>,
{
    if lhs.source_count() != rhs.source_count() || lhs.target_count() != rhs.target_count() {
        return Err(Error::EndpointMismatch);
    }
    Ok(HomCompare {
        lhs,
        rhs,
        _marker: PhantomData,
    })
}

impl<Q, P, R> Prof<Q> for HomCompare<Q, P, R>
where
    Q: Quantale,
    P: Prof<Q>,
    R: Prof<Q, Source = P::Source, Target = P::Target>,
{
    type Source = P::Source;
    type Target = P::Target;

    #[inline]
    fn eval(&self, y: &P::Target, x: &P::Source) -> Q::Value {
        Q::hom(self.lhs.eval(y, x), self.rhs.eval(y, x))
    }

    fn source_count(&self) -> Option<usize> {
        self.lhs.source_count()
    }

    fn target_count(&self) -> Option<usize> {
        self.lhs.target_count()
    }
}

/// A category's own hom as an endo-profunctor, `C(y, y')`; the identity
/// for composition.
#[derive(Debug, Clone, Copy)]
pub struct HomProf<'c, Q: Quantale>(pub &'c FiniteVCat<Q>);

impl<Q: Quantale> Prof<Q> for HomProf<'_, Q> {
    type Source = usize;
    type Target = usize;

    #[inline]
    fn eval(&self, y: &usize, x: &usize) -> Q::Value {
        self.0.get(*y, *x)
    }

    fn source_count(&self) -> Option<usize> {
        Some(self.0.len())
    }

    fn target_count(&self) -> Option<usize> {
        Some(self.0.len())
    }
}

/// A profunctor between finite categories, `values[y * cols + x] = R(y, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfMatrix<Q: Quantale> {
    rows: usize,
    cols: usize,
    values: Vec<Q::Value>,
}

impl<Q: Quantale> ProfMatrix<Q> {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Q::Value) -> Self {
        let values = (0..rows * cols).map(|ix| f(ix / cols, ix % cols)).collect();
        ProfMatrix { rows, cols, values }
    }

    pub fn from_rows(rows: Vec<Vec<Q::Value>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(r * c);
        for (row, v) in rows.into_iter().enumerate() {
            if v.len() != c {
                return Err(Error::NotSquare {
                    row,
                    found: v.len(),
                    expected: c,
                });
            }
            values.extend(v);
        }
        Ok(ProfMatrix {
            rows: r,
            cols: c,
            values,
        })
    }

    /// Number of target objects.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of source objects.
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize) -> Q::Value {
        self.values[y * self.cols + x]
    }

    /// Functoriality witnesses `(y, y', x, x')` where
    /// `Y(y, y') ⊗ R(y', x) ⊗ X(x, x')` fails to entail `R(y, x')`.
    pub fn law_violations(
        &self,
        source: &FiniteVCat<Q>,
        target: &FiniteVCat<Q>,
        tol: f64,
    ) -> Result<Vec<(usize, usize, usize, usize)>> {
        if source.len() != self.cols || target.len() != self.rows {
            return Err(Error::EndpointMismatch);
        }
        let mut out = Vec::new();
        for y in 0..self.rows {
            for y2 in 0..self.rows {
                for x in 0..self.cols {
                    let lhs = Q::tensor(target.get(y, y2), self.get(y2, x));
                    for x2 in 0..self.cols {
                        let path = Q::tensor(lhs, source.get(x, x2));
                        if !Q::leq_within(path, self.get(y, x2), tol) {
                            out.push((y, y2, x, x2));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

impl<Q: Quantale> Prof<Q> for ProfMatrix<Q> {
    type Source = usize;
    type Target = usize;

    #[inline]
    fn eval(&self, y: &usize, x: &usize) -> Q::Value {
        self.get(*y, *x)
    }

    fn source_count(&self) -> Option<usize> {
        Some(self.cols)
    }

    fn target_count(&self) -> Option<usize> {
        Some(self.rows)
    }
}

/// Evaluates a profunctor between finite categories at every pair.
pub fn materialize<Q, P>(p: &P) -> Result<ProfMatrix<Q>>
where
    Q: Quantale,
    P: Prof<Q, Source = usize, Target = usize>,
{
    let rows = p.target_count().ok_or(Error::InfiniteMiddle)?;
    let cols = p.source_count().ok_or(Error::InfiniteMiddle)?;
    Ok(ProfMatrix::from_fn(rows, cols, |y, x| p.eval(&y, &x)))
}

/// A profunctor given by a closure.
pub struct FnProf<Q, S, T, F> {
    f: F,
    source_count: Option<usize>,
    target_count: Option<usize>,
    _marker: Marker<Q, S, T>,
}

impl<Q, S, T, F> FnProf<Q, S, T, F>
where
    Q: Quantale,
    F: Fn(&T, &S) -> Q::Value,
{
    pub fn new(f: F) -> Self {
        FnProf {
            f,
            source_count: None,
            target_count: None,
            _marker: PhantomData,
        }
    }

    pub fn with_counts(mut self, source: Option<usize>, target: Option<usize>) -> Self {
        self.source_count = source;
        self.target_count = target;
        self
    }
}

impl<Q, S, T, F> Prof<Q> for FnProf<Q, S, T, F>
where
    Q: Quantale,
    F: Fn(&T, &S) -> Q::Value,
{
    type Source = S;
    type Target = T;

    #[inline]
    fn eval(&self, y: &T, x: &S) -> Q::Value {
        (self.f)(y, x)
    }

    fn source_count(&self) -> Option<usize> {
        self.source_count
    }

    fn target_count(&self) -> Option<usize> {
        self.target_count
    }
}
