//! SVG distortion views for 2-D embeddings: Voronoi-cell shading and a
//! kNN-edge reliability map.
//!
//! Both encode a per-point (false, missing) distortion pair on a bilinear
//! 2-D colormap: (0,0) white, (1,0) purple, (0,1) green, (1,1) black.
//! Geometry is emitted with three decimals so identical inputs produce
//! byte-identical documents.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::PointMatrix;
use crate::preprocess::PreprocessCache;

/// Per-point distortion pair over a 2-D embedding. Values are clamped to
/// [0, 1] on ingest (e.g. 1 - local steadiness, 1 - local cohesiveness).
#[derive(Clone, Debug)]
pub struct DistortionField {
    embedding: PointMatrix,
    false_values: Vec<f64>,
    missing_values: Vec<f64>,
}

impl DistortionField {
    pub fn new(
        embedding: PointMatrix,
        false_values: Vec<f64>,
        missing_values: Vec<f64>,
    ) -> Result<Self> {
        if embedding.dim() != 2 {
            return Err(Error::Dimension(format!(
                "distortion views need a 2-D embedding, got {} dimensions",
                embedding.dim()
            )));
        }
        let n = embedding.n_points();
        if false_values.len() != n || missing_values.len() != n {
            return Err(Error::Shape(format!(
                "distortion vectors of length {} and {} for {} points",
                false_values.len(),
                missing_values.len(),
                n
            )));
        }
        let clamp = |v: Vec<f64>| -> Vec<f64> {
            v.into_iter()
                .map(|x| if x.is_finite() { x.clamp(0.0, 1.0) } else { 0.0 })
                .collect()
        };
        Ok(Self {
            embedding,
            false_values: clamp(false_values),
            missing_values: clamp(missing_values),
        })
    }

    pub fn n_points(&self) -> usize {
        self.embedding.n_points()
    }
}

/// Corner colors of the bilinear 2-D colormap as RGB bytes.
#[derive(Clone, Copy, Debug)]
pub struct Colormap2d {
    pub none: [u8; 3],
    pub false_corner: [u8; 3],
    pub missing_corner: [u8; 3],
    pub both: [u8; 3],
}

impl Default for Colormap2d {
    fn default() -> Self {
        Self {
            none: [0xff, 0xff, 0xff],
            false_corner: [0xb0, 0x5c, 0xc6],
            missing_corner: [0x63, 0xb6, 0x63],
            both: [0x00, 0x00, 0x00],
        }
    }
}

impl Colormap2d {
    /// Bilinear interpolation in sRGB, rounded per channel.
    pub fn color(&self, false_value: f64, missing_value: f64) -> [u8; 3] {
        let f = false_value.clamp(0.0, 1.0);
        let m = missing_value.clamp(0.0, 1.0);
        let mut out = [0u8; 3];
        for (c, slot) in out.iter_mut().enumerate() {
            let v = (1.0 - f) * (1.0 - m) * self.none[c] as f64
                + f * (1.0 - m) * self.false_corner[c] as f64
                + (1.0 - f) * m * self.missing_corner[c] as f64
                + f * m * self.both[c] as f64;
            *slot = v.round().clamp(0.0, 255.0) as u8;
        }
        out
    }
}

fn hex(c: [u8; 3]) -> String {
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Rendering options for both views.
#[derive(Clone, Copy, Debug)]
pub struct VizConfig {
    pub width: u32,
    pub height: u32,
    /// Padding around the data as a fraction of its extent.
    pub margin: f64,
    /// Neighborhood size of the reliability-map edge graph.
    pub k: usize,
    pub colors: Colormap2d,
}

impl Default for VizConfig {
    fn default() -> Self {
        Self {
            width: 800,
            height: 800,
            margin: 0.05,
            k: 5,
            colors: Colormap2d::default(),
        }
    }
}

impl VizConfig {
    fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::Param("viewport must be nonzero".into()));
        }
        if self.k < 1 {
            return Err(Error::Param("edge-graph k must be at least 1".into()));
        }
        Ok(())
    }
}

struct Viewport {
    min_x: f64,
    min_y: f64,
    span_x: f64,
    span_y: f64,
    width: f64,
    height: f64,
}

impl Viewport {
    fn fit(points: &PointMatrix, cfg: &VizConfig) -> Viewport {
        let mut min_x = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut min_y = f64::INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        for i in 0..points.n_points() {
            let p = points.row(i);
            min_x = min_x.min(p[0]);
            max_x = max_x.max(p[0]);
            min_y = min_y.min(p[1]);
            max_y = max_y.max(p[1]);
        }
        let pad = |lo: f64, hi: f64| {
            let span = hi - lo;
            let pad = if span > 0.0 { span * cfg.margin } else { 1.0 };
            (lo - pad, hi - lo + 2.0 * pad)
        };
        let (min_x, span_x) = pad(min_x, max_x);
        let (min_y, span_y) = pad(min_y, max_y);
        Viewport {
            min_x,
            min_y,
            span_x,
            span_y,
            width: cfg.width as f64,
            height: cfg.height as f64,
        }
    }

    /// Data coordinates to screen, y flipped so larger y is up.
    fn to_screen(&self, x: f64, y: f64) -> (f64, f64) {
        let sx = (x - self.min_x) / self.span_x * self.width;
        let sy = self.height - (y - self.min_y) / self.span_y * self.height;
        (sx, sy)
    }

    /// Data-space corners of the padded box, counterclockwise.
    fn data_box(&self) -> [(f64, f64); 4] {
        [
            (self.min_x, self.min_y),
            (self.min_x + self.span_x, self.min_y),
            (self.min_x + self.span_x, self.min_y + self.span_y),
            (self.min_x, self.min_y + self.span_y),
        ]
    }
}

fn svg_open(out: &mut String, cfg: &VizConfig) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = cfg.width,
        h = cfg.height
    );
}

fn point_glyphs(out: &mut String, field: &DistortionField, vp: &Viewport) {
    out.push_str("<g class=\"points\">\n");
    for i in 0..field.n_points() {
        let p = field.embedding.row(i);
        let (sx, sy) = vp.to_screen(p[0], p[1]);
        let _ = writeln!(
            out,
            "<circle cx=\"{sx:.3}\" cy=\"{sy:.3}\" r=\"2\" fill=\"#000000\"/>"
        );
    }
    out.push_str("</g>\n");
}

/// Clip a convex polygon against the half-plane of points at least as
/// close to `site` as to `other` (perpendicular-bisector clipping).
fn clip_by_bisector(poly: &[(f64, f64)], site: (f64, f64), other: (f64, f64)) -> Vec<(f64, f64)> {
    let mid = ((site.0 + other.0) * 0.5, (site.1 + other.1) * 0.5);
    let dir = (other.0 - site.0, other.1 - site.1);
    let side = |p: (f64, f64)| (p.0 - mid.0) * dir.0 + (p.1 - mid.1) * dir.1;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let da = side(a);
        let db = side(b);
        if da <= 0.0 {
            out.push(a);
        }
        if (da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0) {
            let t = da / (da - db);
            out.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
        }
    }
    out
}

fn collinearity_check(points: &PointMatrix) -> Result<()> {
    let n = points.n_points();
    let p0 = (points.row(0)[0], points.row(0)[1]);
    // Anchor direction: the point farthest from p0.
    let mut far = p0;
    let mut far_d = 0.0;
    for i in 1..n {
        let p = (points.row(i)[0], points.row(i)[1]);
        let d = (p.0 - p0.0).powi(2) + (p.1 - p0.1).powi(2);
        if d > far_d {
            far_d = d;
            far = p;
        }
    }
    if far_d == 0.0 {
        return Err(Error::DegenerateGeometry(
            "all points coincide; Voronoi cells undefined".into(),
        ));
    }
    let dir = (far.0 - p0.0, far.1 - p0.1);
    let norm = far_d.sqrt();
    let mut max_off = 0.0f64;
    for i in 0..n {
        let p = (points.row(i)[0], points.row(i)[1]);
        let cross = (p.0 - p0.0) * dir.1 - (p.1 - p0.1) * dir.0;
        max_off = max_off.max(cross.abs() / norm);
    }
    if max_off <= 1e-9 * norm {
        return Err(Error::DegenerateGeometry(
            "all points are collinear; Voronoi cells undefined".into(),
        ));
    }
    Ok(())
}

/// Voronoi-cell view: one polygon per point, clipped to the padded box and
/// filled with the point's distortion color, plus point glyphs.
pub fn checkviz(field: &DistortionField, cfg: &VizConfig) -> Result<String> {
    cfg.validate()?;
    let n = field.n_points();
    if n < 3 {
        return Err(Error::TooSmall(format!(
            "Voronoi view needs at least 3 points, got {n}"
        )));
    }
    collinearity_check(&field.embedding)?;
    let vp = Viewport::fit(&field.embedding, cfg);
    let sites: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let p = field.embedding.row(i);
            (p[0], p[1])
        })
        .collect();
    let mut out = String::new();
    svg_open(&mut out, cfg);
    out.push_str("<g class=\"cells\">\n");
    for (i, &site) in sites.iter().enumerate() {
        let mut poly: Vec<(f64, f64)> = vp.data_box().to_vec();
        for (j, &other) in sites.iter().enumerate() {
            if i == j || (other.0 == site.0 && other.1 == site.1) {
                continue; // coincident sites share a cell
            }
            poly = clip_by_bisector(&poly, site, other);
            if poly.is_empty() {
                break;
            }
        }
        let fill = hex(cfg.colors.color(field.false_values[i], field.missing_values[i]));
        out.push_str("<polygon points=\"");
        for (v, p) in poly.iter().enumerate() {
            if v > 0 {
                out.push(' ');
            }
            let (sx, sy) = vp.to_screen(p.0, p.1);
            let _ = write!(out, "{sx:.3},{sy:.3}");
        }
        let _ = writeln!(
            out,
            "\" fill=\"{fill}\" stroke=\"#c0c0c0\" stroke-width=\"0.5\"/>"
        );
    }
    out.push_str("</g>\n");
    point_glyphs(&mut out, field, &vp);
    out.push_str("</svg>\n");
    Ok(out)
}

/// kNN-edge view: one line per directed edge of the embedding's kNN graph,
/// stroked with the source point's distortion color fading toward the
/// target, plus point glyphs.
pub fn reliability_map(
    field: &DistortionField,
    cache: &PreprocessCache,
    cfg: &VizConfig,
) -> Result<String> {
    cfg.validate()?;
    let n = field.n_points();
    if cfg.k >= n {
        return Err(Error::Param(format!(
            "edge-graph k = {} needs at least {} points",
            cfg.k,
            cfg.k + 1
        )));
    }
    let knn = cache.knn_low(cfg.k)?;
    if knn.n() != n {
        return Err(Error::Shape(format!(
            "kNN table covers {} points, field has {n}",
            knn.n()
        )));
    }
    let vp = Viewport::fit(&field.embedding, cfg);
    let mut defs = String::from("<defs>\n");
    let mut edges = String::from("<g class=\"edges\">\n");
    for i in 0..n {
        let p = field.embedding.row(i);
        let (x1, y1) = vp.to_screen(p[0], p[1]);
        let color = hex(cfg.colors.color(field.false_values[i], field.missing_values[i]));
        for (c, &j) in knn.neighbors_k(i, cfg.k).iter().enumerate() {
            let q = field.embedding.row(j as usize);
            let (x2, y2) = vp.to_screen(q[0], q[1]);
            let id = format!("e{i}-{c}");
            let _ = writeln!(
                defs,
                "<linearGradient id=\"{id}\" gradientUnits=\"userSpaceOnUse\" \
                 x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\">\
                 <stop offset=\"0\" stop-color=\"{color}\" stop-opacity=\"0.9\"/>\
                 <stop offset=\"1\" stop-color=\"{color}\" stop-opacity=\"0.05\"/>\
                 </linearGradient>"
            );
            let _ = writeln!(
                edges,
                "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" \
                 stroke=\"url(#{id})\" stroke-width=\"1\"/>"
            );
        }
    }
    defs.push_str("</defs>\n");
    edges.push_str("</g>\n");
    let mut out = String::new();
    svg_open(&mut out, cfg);
    out.push_str(&defs);
    out.push_str(&edges);
    point_glyphs(&mut out, field, &vp);
    out.push_str("</svg>\n");
    Ok(out)
}
