//! Raster writers.
//!
//! Every raster is written top row first (`y_max` down to `y_min`) and
//! left to right, matching how images are displayed. Stored values are
//! never clipped; `--clip` only affects the PGM gray mapping.

use std::io::{self, Write};

use enn_core::{CostValue, Field, Grid, RegionField};
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, ImageEncoder};
use serde::Serialize;

use crate::io::cost_text;

/// Display range for the PGM gray mapping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clip {
    pub lo: f64,
    pub hi: f64,
}

impl Clip {
    /// `[0, largest finite value]`, or `[0, 1]` when nothing positive is
    /// finite.
    pub fn auto(field: &Field) -> Clip {
        let hi = field
            .values()
            .iter()
            .filter(|v| v.is_finite())
            .map(|v| v.get())
            .fold(0.0, f64::max);
        Clip {
            lo: 0.0,
            hi: if hi > 0.0 { hi } else { 1.0 },
        }
    }

    /// Linear map of `[lo, hi]` onto `0..=255`; out-of-range values
    /// saturate and `inf` is white.
    pub fn gray(&self, v: CostValue) -> u8 {
        if v.is_infinite() {
            return 255;
        }
        let t = ((v.get() - self.lo) / (self.hi - self.lo)).clamp(0.0, 1.0);
        (t * 255.0).round() as u8
    }
}

pub fn grid_spec(g: &Grid) -> String {
    format!(
        "{}:{}:{}:{}:{}:{}",
        g.x_min, g.x_max, g.y_min, g.y_max, g.width, g.height
    )
}

/// Rows from top to bottom, each left to right.
fn display_rows(g: &Grid) -> impl Iterator<Item = usize> {
    (0..g.height).rev()
}

pub fn write_field_csv<W: Write>(mut out: W, field: &Field, kind: &str) -> io::Result<()> {
    let g = field.grid;
    writeln!(
        out,
        "# enn field kind={kind} grid={} rows=y_max..y_min cols=x_min..x_max",
        grid_spec(&g)
    )?;
    for iy in display_rows(&g) {
        let row: Vec<String> = (0..g.width)
            .map(|ix| cost_text(field.get(ix, iy)))
            .collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

fn write_pgm<W: Write>(out: W, width: usize, height: usize, pixels: &[u8]) -> io::Result<()> {
    let encoder = PnmEncoder::new(out).with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary));
    encoder
        .write_image(pixels, width as u32, height as u32, ExtendedColorType::L8)
        .map_err(io::Error::other)
}

pub fn write_field_pgm<W: Write>(out: W, field: &Field, clip: Clip) -> io::Result<()> {
    let g = field.grid;
    let pixels: Vec<u8> = display_rows(&g)
        .flat_map(|iy| (0..g.width).map(move |ix| (ix, iy)))
        .map(|(ix, iy)| clip.gray(field.get(ix, iy)))
        .collect();
    write_pgm(out, g.width, g.height, &pixels)
}

/// Bit `i` set when label `i` is in the set.
pub fn region_code(labels: &[usize]) -> u64 {
    labels.iter().fold(0, |acc, &l| acc | (1u64 << l))
}

/// Largest label space a region code can represent.
pub const MAX_REGION_LABELS: usize = 64;

pub const EMPTY_GRAY: u8 = 0;
pub const TIE_GRAY: u8 = 255;

/// Gray level of a single-label cell, spread over `32..=223`.
pub fn label_gray(label: usize, count: usize) -> u8 {
    if count <= 1 {
        return 128;
    }
    (32.0 + label as f64 * 191.0 / (count - 1) as f64).round() as u8
}

fn region_gray(labels: &[usize], count: usize) -> u8 {
    match labels {
        [] => EMPTY_GRAY,
        [l] => label_gray(*l, count),
        _ => TIE_GRAY,
    }
}

pub fn write_region_csv<W: Write>(mut out: W, regions: &RegionField) -> io::Result<()> {
    let g = regions.grid;
    writeln!(
        out,
        "# enn region grid={} rows=y_max..y_min cols=x_min..x_max code=bitmask",
        grid_spec(&g)
    )?;
    for iy in display_rows(&g) {
        let row: Vec<String> = (0..g.width)
            .map(|ix| region_code(regions.get(ix, iy)).to_string())
            .collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_region_pgm<W: Write>(
    out: W,
    regions: &RegionField,
    label_count: usize,
) -> io::Result<()> {
    let g = regions.grid;
    let pixels: Vec<u8> = display_rows(&g)
        .flat_map(|iy| (0..g.width).map(move |ix| (ix, iy)))
        .map(|(ix, iy)| region_gray(regions.get(ix, iy), label_count))
        .collect();
    write_pgm(out, g.width, g.height, &pixels)
}

#[derive(Serialize)]
struct CodeEntry {
    code: u64,
    labels: Vec<String>,
    cells: usize,
    gray: u8,
}

#[derive(Serialize)]
struct RegionNote<'a> {
    grid: String,
    labels: &'a [String],
    encoding: &'static str,
    empty_gray: u8,
    tie_gray: u8,
    label_gray: Vec<u8>,
    codes: Vec<CodeEntry>,
}

/// Sidecar describing the codes and gray levels used by a region raster.
pub fn region_note(regions: &RegionField, labels: &[String]) -> String {
    let mut codes: Vec<CodeEntry> = Vec::new();
    for set in regions.cells() {
        let code = region_code(set);
        match codes.iter_mut().find(|c| c.code == code) {
            Some(c) => c.cells += 1,
            None => codes.push(CodeEntry {
                code,
                labels: set.iter().map(|&l| labels[l].clone()).collect(),
                cells: 1,
                gray: region_gray(set, labels.len()),
            }),
        }
    }
    codes.sort_by_key(|c| c.code);
    let note = RegionNote {
        grid: grid_spec(&regions.grid),
        labels,
        encoding: "bit i of a cell code is set when labels[i] is nearest; codes with several bits are ties",
        empty_gray: EMPTY_GRAY,
        tie_gray: TIE_GRAY,
        label_gray: (0..labels.len()).map(|l| label_gray(l, labels.len())).collect(),
        codes,
    };
    serde_json::to_string_pretty(&note).expect("plain data serializes") + "\n"
}

/// Reads back a raster written by [`write_field_csv`] or
/// [`write_region_csv`]: the metadata line and the rows, top row first.
pub fn read_raster(text: &str) -> Option<(String, Vec<Vec<String>>)> {
    let mut lines = text.lines();
    let meta = lines.next()?.strip_prefix("# ")?.to_string();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    Some((meta, rows))
}
