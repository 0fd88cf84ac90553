#![allow(dead_code, clippy::needless_range_loop)]

use enn_core::prof::ProfMatrix;
use enn_core::{Boolean, Cost, CostValue, FiniteVCat, Lukasiewicz, Quantale, UnitValue};
use rand::Rng;

/// Quantales the tests can draw random values from.
pub trait Sampled: Quantale {
    fn sample<R: Rng>(rng: &mut R) -> Self::Value;
}

impl Sampled for Cost {
    fn sample<R: Rng>(rng: &mut R) -> CostValue {
        match rng.random_range(0..10) {
            0 => CostValue::INFINITY,
            1 => CostValue::ZERO,
            _ => CostValue::new(rng.random_range(0.0..4.0)).unwrap(),
        }
    }
}

impl Sampled for Boolean {
    fn sample<R: Rng>(rng: &mut R) -> bool {
        rng.random_bool(0.4)
    }
}

impl Sampled for Lukasiewicz {
    fn sample<R: Rng>(rng: &mut R) -> UnitValue {
        match rng.random_range(0..10) {
            0 => UnitValue::ZERO,
            1 => UnitValue::ONE,
            _ => UnitValue::new(rng.random_range(0.0..1.0)).unwrap(),
        }
    }
}

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("o{i}")).collect()
}

/// A random lawful category: random homs with a true diagonal, closed under
/// composition by a Floyd–Warshall pass over `(join, tensor)`.
pub fn random_cat<Q: Sampled, R: Rng>(rng: &mut R, n: usize) -> FiniteVCat<Q> {
    let mut m: Vec<Vec<Q::Value>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| if a == b { Q::unit() } else { Q::sample(rng) })
                .collect()
        })
        .collect();
    for b in 0..n {
        for a in 0..n {
            for c in 0..n {
                let via = Q::tensor(m[a][b], m[b][c]);
                m[a][c] = Q::join([m[a][c], via]);
            }
        }
    }
    FiniteVCat::new(names(n), m).unwrap()
}

/// A random lawful profunctor `x ⇸ y`: random entries saturated on both
/// sides by the homs of the endpoint categories.
pub fn random_prof<Q: Sampled, R: Rng>(
    rng: &mut R,
    target: &FiniteVCat<Q>,
    source: &FiniteVCat<Q>,
) -> ProfMatrix<Q> {
    let (ny, nx) = (target.len(), source.len());
    let raw: Vec<Vec<Q::Value>> = (0..ny)
        .map(|_| (0..nx).map(|_| Q::sample(rng)).collect())
        .collect();
    ProfMatrix::from_fn(ny, nx, |y, x| {
        let mut best = Q::bottom();
        for y2 in 0..ny {
            for x2 in 0..nx {
                let v = Q::tensor(Q::tensor(target.get(y, y2), raw[y2][x2]), source.get(x2, x));
                best = Q::join([best, v]);
            }
        }
        best
    })
}

pub fn assert_prof_eq<Q: Quantale>(a: &ProfMatrix<Q>, b: &ProfMatrix<Q>, tol: f64) {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    for y in 0..a.rows() {
        for x in 0..a.cols() {
            assert!(
                Q::eq_within(a.get(y, x), b.get(y, x), tol),
                "({y},{x}): {:?} vs {:?}",
                a.get(y, x),
                b.get(y, x)
            );
        }
    }
}

pub fn random_point<R: Rng>(rng: &mut R, dim: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(lo..hi)).collect()
}
