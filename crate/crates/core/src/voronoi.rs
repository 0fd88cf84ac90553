//! Rasterized decision fields and graded Voronoi diagrams.
//!
//! Cells are sampled at their centers. Row `0` of a field is the bottom row
//! (`y_min`); writers are free to flip for display.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::knna::KnnaModel;
use crate::nna::NnaModel;
use crate::quantale::{Cost, CostValue, Quantale};
use crate::vcat::{FiniteVCat, PointSpace, RealLine};

/// A rectangular window split into `width × height` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub width: usize,
    pub height: usize,
}

impl Grid {
    pub fn new(
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        width: usize,
        height: usize,
    ) -> Result<Self> {
        if ![x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) {
            return Err(Error::BadGrid("bounds must be finite"));
        }
        if !(x_min < x_max && y_min < y_max) {
            return Err(Error::BadGrid("bounds must satisfy min < max"));
        }
        if width == 0 || height == 0 {
            return Err(Error::BadGrid("width and height must be at least 1"));
        }
        Ok(Grid {
            x_min,
            x_max,
            y_min,
            y_max,
            width,
            height,
        })
    }

    pub fn cell_count(&self) -> usize {
        self.width * self.height
    }

    pub fn cell_width(&self) -> f64 {
        (self.x_max - self.x_min) / self.width as f64
    }

    pub fn cell_height(&self) -> f64 {
        (self.y_max - self.y_min) / self.height as f64
    }

    /// Center of cell `(ix, iy)`, `iy = 0` being the bottom row.
    pub fn center(&self, ix: usize, iy: usize) -> (f64, f64) {
        (
            self.x_min + (ix as f64 + 0.5) * self.cell_width(),
            self.y_min + (iy as f64 + 0.5) * self.cell_height(),
        )
    }

    /// The cell containing `(x, y)`, if inside the window. Points on the
    /// upper edges belong to the last cell.
    pub fn cell_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        if !(self.x_min..=self.x_max).contains(&x) || !(self.y_min..=self.y_max).contains(&y) {
            return None;
        }
        let ix = (((x - self.x_min) / self.cell_width()) as usize).min(self.width - 1);
        let iy = (((y - self.y_min) / self.cell_height()) as usize).min(self.height - 1);
        Some((ix, iy))
    }

    fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.height).flat_map(move |iy| (0..self.width).map(move |ix| (ix, iy)))
    }
}

/// What a [`Field`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    /// Graded classifier over (feature, real label) axes.
    NnaValue,
    /// k-NN graded value over (feature, real label) axes.
    KnnaValue { k: usize },
    /// Graded classifier for one label over a 2-D feature window.
    LabelCost { label: usize },
    /// Graded Voronoi cell of one site.
    Voronoi { site: usize },
}

/// Cost values on a grid, row-major from the bottom row.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid,
    pub kind: FieldKind,
    values: Vec<CostValue>,
}

impl Field {
    pub fn try_from_fn(
        grid: Grid,
        kind: FieldKind,
        mut f: impl FnMut(f64, f64) -> Result<CostValue>,
    ) -> Result<Self> {
        let values = grid
            .cells()
            .map(|(ix, iy)| {
                let (x, y) = grid.center(ix, iy);
                f(x, y)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Field { grid, kind, values })
    }

    pub fn get(&self, ix: usize, iy: usize) -> CostValue {
        self.values[iy * self.grid.width + ix]
    }

    pub fn values(&self) -> &[CostValue] {
        &self.values
    }

    /// Smallest and largest values (the largest may be infinite).
    pub fn range(&self) -> (CostValue, CostValue) {
        let lo = self.values.iter().copied().min().unwrap_or(CostValue::ZERO);
        let hi = self.values.iter().copied().max().unwrap_or(CostValue::ZERO);
        (lo, hi)
    }
}

/// Per-cell label sets.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionField {
    pub grid: Grid,
    cells: Vec<Vec<usize>>,
}

impl RegionField {
    pub fn get(&self, ix: usize, iy: usize) -> &[usize] {
        &self.cells[iy * self.grid.width + ix]
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }
}

fn need_dim(space: &PointSpace, dim: usize) -> Result<()> {
    if space.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: space.dim(),
        });
    }
    Ok(())
}

/// `d(site, x) ∸ min_j d(j, x)`: the classifier obtained by giving every
/// row its own label. Zero exactly on the closed Voronoi cell of `site`.
pub fn voronoi_value(
    space: &PointSpace,
    sites: &[Vec<f64>],
    site: usize,
    x: &[f64],
) -> Result<CostValue> {
    if site >= sites.len() {
        return Err(Error::OutOfRange {
            index: site,
            len: sites.len(),
        });
    }
    space.check_point(x)?;
    let nearest = Cost::join(sites.iter().map(|s| space.distance(s, x)));
    Ok(Cost::hom(nearest, space.distance(&sites[site], x)))
}

/// One graded Voronoi field per site over a 2-D window.
pub fn voronoi_field(space: &PointSpace, sites: &[Vec<f64>], grid: Grid) -> Result<Vec<Field>> {
    need_dim(space, 2)?;
    if sites.is_empty() {
        return Err(Error::EmptyDataset);
    }
    for s in sites {
        space.check_point(s)?;
    }
    (0..sites.len())
        .map(|site| {
            Field::try_from_fn(grid, FieldKind::Voronoi { site }, |x, y| {
                voronoi_value(space, sites, site, &[x, y])
            })
        })
        .collect()
}

/// Label sets of the nearest neighbour classifier at every cell center.
pub fn region_field(model: &NnaModel<FiniteVCat<Cost>>, grid: Grid) -> Result<RegionField> {
    need_dim(model.dataset().space(), 2)?;
    let cells = grid.cells().map(|(ix, iy)| {
        let (x, y) = grid.center(ix, iy);
        model.classify(&[x, y])
    });
    Ok(RegionField {
        grid,
        cells: cells.collect::<Result<_>>()?,
    })
}

/// Label sets of a k-NN classifier at every cell center.
pub fn knna_region_field(model: &KnnaModel<FiniteVCat<Cost>>, grid: Grid) -> Result<RegionField> {
    need_dim(model.nna().dataset().space(), 2)?;
    let cells = grid.cells().map(|(ix, iy)| {
        let (x, y) = grid.center(ix, iy);
        model.knna_classify(&[x, y])
    });
    Ok(RegionField {
        grid,
        cells: cells.collect::<Result<_>>()?,
    })
}

/// `cost_nna(label, ·)` over a 2-D feature window.
pub fn label_cost_field(
    model: &NnaModel<FiniteVCat<Cost>>,
    label: usize,
    grid: Grid,
) -> Result<Field> {
    need_dim(model.dataset().space(), 2)?;
    if label >= model.label_count() {
        return Err(Error::OutOfRange {
            index: label,
            len: model.label_count(),
        });
    }
    Field::try_from_fn(grid, FieldKind::LabelCost { label }, |x, y| {
        model.cost_nna(label, &[x, y])
    })
}

/// `cost_nna(y, x)` with the grid's horizontal axis as the 1-D feature and
/// the vertical axis as a real-valued label.
pub fn value_field(model: &NnaModel<RealLine>, grid: Grid) -> Result<Field> {
    need_dim(model.dataset().space(), 1)?;
    Field::try_from_fn(grid, FieldKind::NnaValue, |x, y| model.cost_nna(y, &[x]))
}

/// The k-NN analogue of [`value_field`].
pub fn knna_value_field(model: &KnnaModel<RealLine>, grid: Grid) -> Result<Field> {
    need_dim(model.nna().dataset().space(), 1)?;
    Field::try_from_fn(grid, FieldKind::KnnaValue { k: model.k() }, |x, y| {
        model.knna_cost(y, &[x])
    })
}
