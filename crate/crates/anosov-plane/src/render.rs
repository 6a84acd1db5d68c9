//! JSON and SVG views of a developed patch. SVG coordinates are display-only.

use std::fmt::Write as _;

use anosov_exact::ExactRepr;
use serde::Serialize;

use crate::develop::{DevelopedPatch, RectId};

#[derive(Clone, Debug, Serialize)]
pub struct RectRecord {
    pub id: RectId,
    #[serde(rename = "type")]
    pub type_idx: usize,
    pub exp: i32,
    pub x0: ExactRepr,
    pub y0: ExactRepr,
    pub x1: ExactRepr,
    pub y1: ExactRepr,
    /// Decimal renderings at the requested precision.
    pub display: [String; 4],
}

#[derive(Clone, Debug, Serialize)]
pub struct PatchRecord {
    /// Minimal polynomial of the field generator λ, low degree first.
    pub min_poly: Vec<String>,
    pub lambda: String,
    pub rects: Vec<RectRecord>,
    /// `[from, to]` for every developed successor step.
    pub successor_edges: Vec<[RectId; 2]>,
    pub frontier: Vec<RectId>,
}

pub fn patch_record(p: &DevelopedPatch, precision: usize) -> PatchRecord {
    let f = p.field();
    let rects = p
        .rects()
        .iter()
        .map(|r| RectRecord {
            id: r.id,
            type_idx: r.type_idx,
            exp: r.scale_exp,
            x0: r.x0.to_repr(),
            y0: r.y0.to_repr(),
            x1: r.x1.to_repr(),
            y1: r.y1.to_repr(),
            display: [&r.x0, &r.y0, &r.x1, &r.y1].map(|v| v.to_decimal(precision)),
        })
        .collect();
    let mut successor_edges = Vec::new();
    for r in 0..p.len() {
        for &s in p.known_successors(r).unwrap_or(&[]) {
            successor_edges.push([r, s]);
        }
    }
    PatchRecord {
        min_poly: f.min_poly().coeffs().iter().map(|c| c.to_string()).collect(),
        lambda: f.lambda().to_decimal(precision),
        rects,
        successor_edges,
        frontier: p.frontier(),
    }
}

/// Outline every rectangle, coloured by type, in a square viewport.
pub fn patch_svg(p: &DevelopedPatch, precision: usize) -> String {
    const SIZE: f64 = 800.0;
    const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for r in p.rects() {
        let [x0, x1, y0, y1] = r.approx;
        lo = [lo[0].min(x0), lo[1].min(y0)];
        hi = [hi[0].max(x1), hi[1].max(y1)];
    }
    let scale = SIZE / (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
    let digits = precision.min(12);
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    for r in p.rects() {
        let [x0, x1, y0, y1] = r.approx;
        let colour = PALETTE[(r.type_idx - 1) % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"  <rect x="{:.d$}" y="{:.d$}" width="{:.d$}" height="{:.d$}" fill="{colour}" fill-opacity="0.08" stroke="{colour}" stroke-width="0.5"><title>{} type {} exp {}</title></rect>"#,
            (x0 - lo[0]) * scale,
            (hi[1] - y1) * scale,
            (x1 - x0) * scale,
            (y1 - y0) * scale,
            r.id,
            r.type_idx,
            r.scale_exp,
            d = digits,
        );
    }
    out.push_str("</svg>\n");
    out
}
