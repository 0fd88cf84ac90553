//! Nearest neighbour classification constructed from quantale-enriched
//! categories and profunctors.
//!
//! The crate is `no_std` (it needs `alloc`). Modules, bottom-up:
//!
//! * [`quantale`]: bases of enrichment (Cost, Bool, Łukasiewicz unit interval).
//! * [`vcat`]: finite enriched categories, point spaces, functors, tensor powers.
//! * [`prof`]: profunctors and their composition.
//! * [`nna`]: the nearest neighbours classifier and its generic form.
//! * [`knna`]: k nearest neighbours with aggregation policies.
//! * [`voronoi`]: rasterized decision fields and graded Voronoi cells.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod knna;
pub mod nna;
pub mod prof;
pub mod quantale;
pub mod vcat;
pub mod voronoi;

pub use error::{Error, Result};
pub use knna::{aggregate, delta_value, KnnaModel, Policy};
pub use nna::{v_nna, Dataset, LabelSpace, NnaModel, DEFAULT_EPSILON};
pub use prof::{compose, hom_compare, lower_star, terminal, upper_star, Prof, ProfMatrix};
pub use quantale::{Boolean, Cost, CostValue, Lukasiewicz, Quantale, UnitValue};
pub use vcat::{distinct_tuples, Enriched, FiniteVCat, Metric, PointSpace, RealLine, VFunctor};
pub use voronoi::{Field, FieldKind, Grid, RegionField};
