//! Closed piecewise-analytic curves, the Kress sigmoid transform and the graded
//! sample data used by every discretized operator.
//!
//! A curve is either a smooth circle (one periodic segment, no grading) or a
//! counter-clockwise chain of segments joined at corners. Each corner parameter
//! `T_j` is placed on the unshifted grid `{i h}` so that the collocation nodes
//! `t_i = h/2 + i h` never hit a corner.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// One analytic piece of a boundary, parametrized by `u` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    /// Straight edge from `a` to `b`.
    Line { a: Point, b: Point },
    /// Circular arc; `sweep > 0` runs counter-clockwise.
    Arc { center: Point, radius: f64, start: f64, sweep: f64 },
}

impl Segment {
    /// Position and first two derivatives with respect to `u`.
    pub fn eval(&self, u: f64) -> (Point, Point, Point) {
        match *self {
            Segment::Line { a, b } => {
                let d = [b[0] - a[0], b[1] - a[1]];
                ([a[0] + u * d[0], a[1] + u * d[1]], d, [0.0, 0.0])
            }
            Segment::Arc { center, radius, start, sweep } => {
                let th = start + u * sweep;
                let (s, c) = th.sin_cos();
                (
                    [center[0] + radius * c, center[1] + radius * s],
                    [-radius * sweep * s, radius * sweep * c],
                    [-radius * sweep * sweep * c, -radius * sweep * sweep * s],
                )
            }
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { a, b } => (b[0] - a[0]).hypot(b[1] - a[1]),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn start(&self) -> Point {
        self.eval(0.0).0
    }

    /// `eval(u) - start()` without cancellation for small `u`.
    pub fn offset_from_start(&self, u: f64) -> Point {
        match *self {
            Segment::Line { a, b } => [u * (b[0] - a[0]), u * (b[1] - a[1])],
            Segment::Arc { radius, start, sweep, .. } => arc_offset(radius, start, u * sweep),
        }
    }

    /// `eval(1 - um) - end()` without cancellation for small `um`.
    pub fn offset_from_end(&self, um: f64) -> Point {
        match *self {
            Segment::Line { a, b } => [-um * (b[0] - a[0]), -um * (b[1] - a[1])],
            Segment::Arc { radius, start, sweep, .. } => arc_offset(radius, start + sweep, -um * sweep),
        }
    }

    pub fn end(&self) -> Point {
        self.eval(1.0).0
    }
}

/// `R (cos(a + d) - cos a, sin(a + d) - sin a)` in product form.
fn arc_offset(radius: f64, a: f64, d: f64) -> Point {
    let s = (0.5 * d).sin();
    let m = a + 0.5 * d;
    [-2.0 * radius * m.sin() * s, 2.0 * radius * m.cos() * s]
}

/// Shape of a closed boundary curve.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Circle of the given radius, treated as a single smooth periodic segment.
    Circle { center: Point, radius: f64 },
    /// Counter-clockwise closed chain with a corner at every junction.
    Piecewise(Vec<Segment>),
}

/// A closed curve together with its nominal corner parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    shape: Shape,
    /// `T_1 = 0 < ... < T_{P+1} = 2 pi`, proportional to arc length.
    corners: Vec<f64>,
}

impl CurveSpec {
    /// Build a cornered curve from a chain of segments.
    pub fn from_segments(segments: Vec<Segment>) -> Result<Self> {
        if segments.len() < 2 {
            return Err(Error::Config("a cornered curve needs at least two segments".into()));
        }
        let scale = segments
            .iter()
            .flat_map(|s| {
                let (a, b) = (s.start(), s.end());
                [a[0].abs(), a[1].abs(), b[0].abs(), b[1].abs()]
            })
            .fold(1.0_f64, f64::max);
        for (j, s) in segments.iter().enumerate() {
            if !(s.length() > 0.0) {
                return Err(Error::Config(format!("segment {j} is degenerate")));
            }
            let next = &segments[(j + 1) % segments.len()];
            let (e, b) = (s.end(), next.start());
            if (e[0] - b[0]).hypot(e[1] - b[1]) > 1e-14 * scale {
                return Err(Error::Config(format!(
                    "curve is not closed: segment {j} ends at {e:?}, next starts at {b:?}"
                )));
            }
        }
        let spec = Self { corners: nominal_corners(&segments), shape: Shape::Piecewise(segments) };
        if spec.signed_area() <= 0.0 {
            return Err(Error::Config("curve must be oriented counter-clockwise".into()));
        }
        Ok(spec)
    }

    /// Closed polygon through the given vertices (counter-clockwise).
    pub fn polygon(vertices: &[Point]) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::Config("a polygon needs at least three vertices".into()));
        }
        let segs = (0..vertices.len())
            .map(|j| Segment::Line { a: vertices[j], b: vertices[(j + 1) % vertices.len()] })
            .collect();
        Self::from_segments(segs)
    }

    /// Square of side 4 centered at the origin.
    pub fn square4() -> Self {
        Self::polygon(&[[-2.0, -2.0], [2.0, -2.0], [2.0, 2.0], [-2.0, 2.0]]).unwrap()
    }

    /// L-shaped domain with outer sides 4 and an indentation of side 2. The
    /// vertex list `(0,0),(4,0),(4,4),(2,4),(2,2),(0,2)` is shifted by
    /// `(-2,-2)` so the domain straddles the origin.
    pub fn lshape4x2() -> Self {
        let v: [Point; 6] = [[0.0, 0.0], [4.0, 0.0], [4.0, 4.0], [2.0, 4.0], [2.0, 2.0], [0.0, 2.0]];
        let shifted: Vec<Point> = v.iter().map(|p| [p[0] - 2.0, p[1] - 2.0]).collect();
        Self::polygon(&shifted).unwrap()
    }

    /// Circle of radius `r` centered at the origin.
    pub fn circle(radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Config(format!("circle radius {radius} must be positive")));
        }
        Ok(Self { shape: Shape::Circle { center: [0.0, 0.0], radius }, corners: Vec::new() })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Nominal corner parameters `T_1, ..., T_{P+1}`; empty for a smooth curve.
    pub fn corners(&self) -> &[f64] {
        &self.corners
    }

    pub fn segment_count(&self) -> usize {
        match &self.shape {
            Shape::Circle { .. } => 1,
            Shape::Piecewise(s) => s.len(),
        }
    }

    pub fn perimeter(&self) -> f64 {
        match &self.shape {
            Shape::Circle { radius, .. } => TAU * radius,
            Shape::Piecewise(s) => s.iter().map(Segment::length).sum(),
        }
    }

    /// Largest distance between two points of the curve (bounded by the
    /// bounding-box diagonal for cornered curves).
    pub fn diameter(&self) -> f64 {
        match &self.shape {
            Shape::Circle { radius, .. } => 2.0 * radius,
            Shape::Piecewise(s) => {
                let pts: Vec<Point> = s.iter().flat_map(|g| (0..=8).map(move |i| g.eval(i as f64 / 8.0).0)).collect();
                let mut d = 0.0_f64;
                for p in &pts {
                    for q in &pts {
                        d = d.max((p[0] - q[0]).hypot(p[1] - q[1]));
                    }
                }
                d
            }
        }
    }

    /// Whether `p` lies in the bounded domain (winding number test on a fine
    /// polygonal approximation).
    pub fn contains(&self, p: Point) -> bool {
        match &self.shape {
            Shape::Circle { center, radius } => (p[0] - center[0]).hypot(p[1] - center[1]) < *radius,
            Shape::Piecewise(segs) => {
                let pts: Vec<Point> = segs
                    .iter()
                    .flat_map(|g| {
                        let m = if matches!(g, Segment::Line { .. }) { 1 } else { 256 };
                        (0..m).map(move |i| g.eval(i as f64 / m as f64).0)
                    })
                    .collect();
                let mut inside = false;
                let mut j = pts.len() - 1;
                for i in 0..pts.len() {
                    let (a, b) = (pts[i], pts[j]);
                    if (a[1] > p[1]) != (b[1] > p[1])
                        && p[0] < (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0]
                    {
                        inside = !inside;
                    }
                    j = i;
                }
                inside
            }
        }
    }

    fn signed_area(&self) -> f64 {
        match &self.shape {
            Shape::Circle { radius, .. } => PI * radius * radius,
            Shape::Piecewise(segs) => {
                // Green's theorem with a Gauss-Legendre rule per segment.
                let gl = [(-0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
                          (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
                          (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
                          (0.861_136_311_594_052_6, 0.347_854_845_137_453_9)];
                segs.iter()
                    .map(|g| {
                        gl.iter()
                            .map(|&(x, w)| {
                                let (p, d, _) = g.eval(0.5 * (x + 1.0));
                                0.25 * w * (p[0] * d[1] - p[1] * d[0])
                            })
                            .sum::<f64>()
                    })
                    .sum()
            }
        }
    }
}

fn nominal_corners(segs: &[Segment]) -> Vec<f64> {
    let total: f64 = segs.iter().map(Segment::length).sum();
    let mut t = vec![0.0];
    let mut acc = 0.0;
    for s in segs {
        acc += s.length();
        t.push(TAU * acc / total);
    }
    *t.last_mut().unwrap() = TAU;
    t
}

/// Grading exponent of the sigmoid transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SigmoidParams {
    p: u32,
}

impl SigmoidParams {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::Domain(format!("sigmoid exponent p = {p} must be >= 2")));
        }
        Ok(Self { p })
    }

    pub fn p(self) -> u32 {
        self.p
    }
}

impl Default for SigmoidParams {
    fn default() -> Self {
        Self { p: 3 }
    }
}

/// Value of the sigmoid map and its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmoidValue {
    pub w: f64,
    pub dw: f64,
    pub d2w: f64,
}

/// Kress' sigmoid transform of `[a, b]` onto itself with grading exponent `p`:
/// `w = (b v^p + a (1-v)^p) / (v^p + (1-v)^p)` with the cubic
/// `v = (1/2 - 1/p) eta^3 + eta/p + 1/2`, `eta = (2s - a - b)/(b - a)`.
pub fn sigmoid_map(s: f64, a: f64, b: f64, p: u32) -> Result<SigmoidValue> {
    let g = sigmoid_parts(s, a, b, p)?;
    let w = if s == a {
        a
    } else if s == b {
        b
    } else {
        a + (b - a) * g.u
    };
    Ok(SigmoidValue { w, dw: g.dw, d2w: g.d2w })
}

/// Normalized sigmoid value `u = (w - a)/(b - a)`, its complement `1 - u`
/// (each accurate near its own endpoint) and the derivatives of `w`.
struct SigmoidParts {
    u: f64,
    um: f64,
    dw: f64,
    d2w: f64,
}

fn sigmoid_parts(s: f64, a: f64, b: f64, p: u32) -> Result<SigmoidParts> {
    if p < 2 {
        return Err(Error::Domain(format!("sigmoid exponent p = {p} must be >= 2")));
    }
    if !(a < b) || !(a..=b).contains(&s) {
        return Err(Error::Domain(format!("parameter {s} outside [{a}, {b}]")));
    }
    let len = b - a;
    let pf = p as f64;
    let pi = p as i32;
    let eta = (2.0 * s - a - b) / len;
    let c3 = 0.5 - 1.0 / pf;
    let v = c3 * eta * eta * eta + eta / pf + 0.5;
    let dv = (3.0 * c3 * eta * eta + 1.0 / pf) * 2.0 / len;
    let d2v = 6.0 * c3 * eta * 4.0 / (len * len);
    let v = v.clamp(0.0, 1.0);
    // 1 - v from the cubic in -eta, so it keeps its digits near s = b.
    let u = (c3 * (-eta) * (-eta) * (-eta) - eta / pf + 0.5).clamp(0.0, 1.0);
    let (vp, up) = (v.powi(pi), u.powi(pi));
    let d = vp + up;
    let phi = vp / d;
    let q = v * u;
    let dphi = pf * q.powi(pi - 1) / (d * d);
    let dd = pf * (v.powi(pi - 1) - u.powi(pi - 1));
    let d2phi = pf * ((pf - 1.0) * q.powi(pi - 2) * (1.0 - 2.0 * v) / (d * d) - 2.0 * q.powi(pi - 1) * dd / (d * d * d));
    Ok(SigmoidParts { u: phi, um: up / d, dw: len * dphi * dv, d2w: len * (d2phi * dv * dv + dphi * d2v) })
}

/// Sampled parametrization on the shifted grid `t_i = h/2 + i h`, `h = pi/n`.
#[derive(Debug, Clone)]
pub struct GridData {
    pub n: usize,
    pub h: f64,
    pub t: Vec<f64>,
    pub x: Vec<Point>,
    pub dx: Vec<Point>,
    pub ddx: Vec<Point>,
    /// `|x'(t_i)|`
    pub jac: Vec<f64>,
    /// Outward unit normals.
    pub normal: Vec<Point>,
    /// Realized corner parameters (multiples of `h`); empty for a smooth curve.
    pub corners: Vec<f64>,
    /// Index of the segment carrying each node.
    pub segment: Vec<usize>,
    /// Whether each segment is a straight edge.
    pub straight: Vec<bool>,
    /// Nearest corner vertex of each node (`NO_ANCHOR` on smooth curves) and
    /// the node position relative to it.
    pub anchor: Vec<usize>,
    pub offset: Vec<Point>,
}

pub const NO_ANCHOR: usize = usize::MAX;

impl GridData {
    /// Number of nodes `2n`.
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Parameter interval `[T_j, T_{j+1}]` of segment `j`.
    pub fn segment_interval(&self, j: usize) -> (f64, f64) {
        if self.corners.is_empty() {
            (0.0, TAU)
        } else {
            (self.corners[j], self.corners[j + 1])
        }
    }

    pub fn segment_count(&self) -> usize {
        self.corners.len().saturating_sub(1).max(1)
    }

    /// `x_i - x_j`, formed from corner offsets when both nodes hang off the
    /// same vertex so that clustered nodes keep their relative accuracy.
    #[inline]
    pub fn chord(&self, i: usize, j: usize) -> Point {
        if self.anchor[i] == self.anchor[j] && self.anchor[i] != NO_ANCHOR {
            let (a, b) = (self.offset[i], self.offset[j]);
            [a[0] - b[0], a[1] - b[1]]
        } else {
            let (a, b) = (self.x[i], self.x[j]);
            [a[0] - b[0], a[1] - b[1]]
        }
    }

    /// Whether nodes `i` and `j` lie on one straight edge.
    pub fn same_edge(&self, i: usize, j: usize) -> bool {
        let s = self.segment[i];
        s == self.segment[j] && self.straight[s]
    }
}

/// Sample `spec` at `2n` graded nodes.
pub fn build_grid(spec: &CurveSpec, sig: SigmoidParams, n: usize) -> Result<GridData> {
    if n < 2 {
        return Err(Error::Config(format!("half node count n = {n} must be at least 2")));
    }
    let m = 2 * n;
    let h = PI / n as f64;
    let t: Vec<f64> = (0..m).map(|i| h * (i as f64 + 0.5)).collect();
    let mut x = Vec::with_capacity(m);
    let mut dx = Vec::with_capacity(m);
    let mut ddx = Vec::with_capacity(m);
    let mut segment = Vec::with_capacity(m);
    let mut anchor = Vec::with_capacity(m);
    let mut offset = Vec::with_capacity(m);
    let straight;
    let corners;
    match spec.shape() {
        Shape::Circle { center, radius } => {
            for &ti in &t {
                let (s, c) = ti.sin_cos();
                x.push([center[0] + radius * c, center[1] + radius * s]);
                dx.push([-radius * s, radius * c]);
                ddx.push([-radius * c, -radius * s]);
                segment.push(0);
                anchor.push(NO_ANCHOR);
                offset.push([0.0, 0.0]);
            }
            corners = Vec::new();
            straight = vec![false];
        }
        Shape::Piecewise(segs) => {
            let lengths: Vec<f64> = segs.iter().map(Segment::length).collect();
            if m < 4 * segs.len() {
                return Err(Error::Config(format!(
                    "2n = {m} nodes cannot resolve {} segments (need at least {})",
                    segs.len(),
                    4 * segs.len()
                )));
            }
            let counts = allocate(&lengths, m);
            let mut tc = vec![0.0];
            let mut acc = 0;
            for c in &counts {
                acc += c;
                tc.push(acc as f64 * h);
            }
            let mut i = 0;
            for (j, seg) in segs.iter().enumerate() {
                let (a, b) = (tc[j], tc[j + 1]);
                let len = b - a;
                let nseg = segs.len();
                for _ in 0..counts[j] {
                    let sv = sigmoid_parts(t[i], a, b, sig.p())?;
                    let (_, d1, d2) = seg.eval(sv.u);
                    let (vertex, off) = if sv.u <= 0.5 {
                        (j, seg.offset_from_start(sv.u))
                    } else {
                        ((j + 1) % nseg, seg.offset_from_end(sv.um))
                    };
                    let base = segs[vertex].start();
                    let du = sv.dw / len;
                    let ddu = sv.d2w / len;
                    x.push([base[0] + off[0], base[1] + off[1]]);
                    anchor.push(vertex);
                    offset.push(off);
                    dx.push([d1[0] * du, d1[1] * du]);
                    ddx.push([d2[0] * du * du + d1[0] * ddu, d2[1] * du * du + d1[1] * ddu]);
                    segment.push(j);
                    i += 1;
                }
            }
            corners = tc;
            straight = segs.iter().map(|g| matches!(g, Segment::Line { .. })).collect();
        }
    }
    let jac: Vec<f64> = dx.iter().map(|d| d[0].hypot(d[1])).collect();
    if let Some(i) = jac.iter().position(|&j| !(j > 0.0)) {
        return Err(Error::Config(format!("vanishing Jacobian at node {i}; increase n")));
    }
    let normal = dx.iter().zip(&jac).map(|(d, &j)| [d[1] / j, -d[0] / j]).collect();
    Ok(GridData { n, h, t, x, dx, ddx, jac, normal, corners, segment, straight, anchor, offset })
}

/// Split `total` nodes among segments proportionally to `lengths` (largest
/// remainder), with at least two nodes each.
fn allocate(lengths: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = lengths.iter().sum();
    let ideal: Vec<f64> = lengths.iter().map(|l| l / sum * total as f64).collect();
    let mut counts: Vec<usize> = ideal.iter().map(|x| (x.floor() as usize).max(2)).collect();
    let mut assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = ideal[a] - counts[a] as f64;
        let rb = ideal[b] - counts[b] as f64;
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    let mut k = 0;
    while assigned < total {
        counts[order[k % order.len()]] += 1;
        assigned += 1;
        k += 1;
    }
    while assigned > total {
        let j = (0..counts.len()).filter(|&j| counts[j] > 2).max_by(|&a, &b| {
            (counts[a] as f64 - ideal[a]).partial_cmp(&(counts[b] as f64 - ideal[b])).unwrap()
        });
        counts[j.expect("allocation needs 2 nodes per segment")] -= 1;
        assigned -= 1;
    }
    counts
}
