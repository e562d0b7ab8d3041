use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DomainMetrics;
use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Minimum normalised cross product at a vertex for the turn to count as
/// strictly convex.
const TURN_TOL: f64 = 1e-12;

/// On-disk polygon format: `{"vertices": [[x, y], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonFile {
    pub vertices: Vec<Point>,
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

fn shoelace(v: &[Point]) -> f64 {
    let m = v.len();
    (0..m).map(|i| cross(v[i], v[(i + 1) % m])).sum::<f64>() * 0.5
}

fn closed_length(v: &[Point]) -> f64 {
    let m = v.len();
    if m < 2 {
        return 0.0;
    }
    (0..m).map(|i| norm(sub(v[(i + 1) % m], v[i]))).sum()
}

/// Strictly convex polygon with vertices in counter-clockwise order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    /// Outward unit normal and offset of each edge: `n·x <= c` inside.
    #[serde(skip)]
    edges: Vec<(Point, f64)>,
    /// Chebyshev centre and inradius, found once at construction.
    #[serde(skip)]
    incircle: (Point, f64),
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let m = vertices.len();
        if m < 3 {
            return Err(Error::InvalidPolygon(format!("need at least 3 vertices, got {m}")));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPolygon("non-finite coordinate".into()));
        }
        let mut turning = 0.0;
        for i in 0..m {
            let prev = sub(vertices[i], vertices[(i + m - 1) % m]);
            let next = sub(vertices[(i + 1) % m], vertices[i]);
            let (lp, ln) = (norm(prev), norm(next));
            if lp == 0.0 || ln == 0.0 {
                return Err(Error::InvalidPolygon(format!("repeated vertex at index {i}")));
            }
            let turn = cross(prev, next) / (lp * ln);
            if turn <= TURN_TOL {
                return Err(Error::InvalidPolygon(format!(
                    "vertex {i} is not a strict left turn (normalised cross {turn:e}); \
                     vertices must be counter-clockwise and strictly convex"
                )));
            }
            turning += cross(prev, next).atan2(dot(prev, next));
        }
        // all left turns but winding more than once (a star polygon)
        if (turning - 2.0 * PI).abs() > 1e-9 {
            return Err(Error::InvalidPolygon(format!("vertices wind {:.3} times", turning / (2.0 * PI))));
        }
        let edges = (0..m)
            .map(|i| {
                let e = sub(vertices[(i + 1) % m], vertices[i]);
                let len = norm(e);
                let n = [e[1] / len, -e[0] / len];
                (n, dot(n, vertices[i]))
            })
            .collect();
        let mut p = Self { vertices, edges, incircle: ([0.0; 2], 0.0) };
        p.incircle = p.solve_incircle();
        Ok(p)
    }

    /// Convex hull of a point cloud (collinear and interior points dropped).
    pub fn hull(points: &[Point]) -> Result<Self> {
        let mut pts: Vec<Point> = points.to_vec();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        pts.dedup();
        if pts.len() < 3 {
            return Err(Error::InvalidPolygon("hull needs three distinct points".into()));
        }
        let keeps_left = |h: &[Point], p: Point| {
            let (a, b) = (h[h.len() - 2], h[h.len() - 1]);
            let (u, w) = (sub(b, a), sub(p, b));
            cross(u, w) > TURN_TOL * norm(u) * norm(w)
        };
        let mut lower: Vec<Point> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && !keeps_left(&lower, p) {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Point> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && !keeps_left(&upper, p) {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Self::new(lower)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: PolygonFile = serde_json::from_str(s).map_err(|e| Error::Parse(format!("polygon JSON: {e}")))?;
        Self::new(file.vertices)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolygonFile { vertices: self.vertices.clone() }).expect("plain floats serialise")
    }

    pub fn regular(sides: usize, circumradius: f64) -> Result<Self> {
        let v = (0..sides)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / sides as f64;
                [circumradius * a.cos(), circumradius * a.sin()]
            })
            .collect();
        Self::new(v)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        closed_length(&self.vertices)
    }

    /// Support function h(u) = max over vertices of u·v.
    pub fn support(&self, u: Point) -> f64 {
        self.vertices.iter().map(|&v| dot(u, v)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Width in direction `u` (unit): h(u) + h(−u).
    pub fn directional_width(&self, u: Point) -> f64 {
        self.support(u) + self.support([-u[0], -u[1]])
    }

    /// Minimal width. For a polygon it is attained at an edge normal.
    pub fn width(&self) -> f64 {
        self.edges
            .iter()
            .map(|&(n, c)| c - self.vertices.iter().map(|&v| dot(n, v)).fold(f64::INFINITY, f64::min))
            .fold(f64::INFINITY, f64::min)
    }

    /// Signed distance from `x` to the boundary: positive inside, negative outside.
    pub fn depth(&self, x: Point) -> f64 {
        self.edges.iter().map(|&(n, c)| c - dot(n, x)).fold(f64::INFINITY, f64::min)
    }

    /// Centre and radius of the largest inscribed disk.
    pub fn chebyshev_center(&self) -> (Point, f64) {
        self.incircle
    }

    /// The optimum of the linear programme max r s.t. `n_i·x + r <= c_i` sits
    /// at a point equidistant from three edge lines, so all triples are tried.
    /// Cubic in the vertex count.
    fn solve_incircle(&self) -> (Point, f64) {
        let e = &self.edges;
        let m = e.len();
        let scale = self.width().max(f64::MIN_POSITIVE);
        let mut best = (self.vertices[0], 0.0);
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    // rows (n_x, n_y, 1) · (x, y, r) = c
                    let rows = [e[i], e[j], e[k]];
                    let det = |cols: [[f64; 3]; 3]| {
                        cols[0][0] * (cols[1][1] * cols[2][2] - cols[1][2] * cols[2][1])
                            - cols[0][1] * (cols[1][0] * cols[2][2] - cols[1][2] * cols[2][0])
                            + cols[0][2] * (cols[1][0] * cols[2][1] - cols[1][1] * cols[2][0])
                    };
                    let a = rows.map(|(n, _)| [n[0], n[1], 1.0]);
                    let d = det(a);
                    if d.abs() < 1e-14 {
                        continue;
                    }
                    let rhs = rows.map(|(_, c)| c);
                    let replace = |col: usize| {
                        let mut b = a;
                        for (row, r) in b.iter_mut().zip(rhs) {
                            row[col] = r;
                        }
                        det(b) / d
                    };
                    let (x, y, r) = (replace(0), replace(1), replace(2));
                    if r <= best.1 {
                        continue;
                    }
                    let actual = self.depth([x, y]);
                    if actual >= r - 1e-12 * scale {
                        best = ([x, y], actual);
                    }
                }
            }
        }
        best
    }

    pub fn inradius(&self) -> f64 {
        self.chebyshev_center().1
    }

    pub fn metrics(&self) -> Result<DomainMetrics> {
        DomainMetrics::new(2, self.area(), self.perimeter(), self.inradius(), self.width())
    }

    /// Ω_t = {x ∈ Ω : dist(x, ∂Ω) > t}, obtained by clipping against every
    /// edge half-plane moved inwards by `t`.
    pub fn inner_parallel(&self, t: f64) -> Result<InnerParallelBody> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter(format!("offset t must be >= 0, got {t}")));
        }
        let (center, r) = self.chebyshev_center();
        if t > r * (1.0 + 1e-12) {
            return Ok(InnerParallelBody { t, vertices: Vec::new() });
        }
        let mut poly = self.vertices.clone();
        for &(n, c) in &self.edges {
            poly = clip(&poly, n, c - t);
            if poly.is_empty() {
                break;
            }
        }
        let tol = 1e-12 * self.width();
        poly.dedup_by(|a, b| norm(sub(*a, *b)) <= tol);
        while poly.len() > 1 && norm(sub(poly[0], poly[poly.len() - 1])) <= tol {
            poly.pop();
        }
        if poly.is_empty() {
            // t ≈ r: rounding removed the last sliver
            poly.push(center);
        }
        Ok(InnerParallelBody { t, vertices: poly })
    }
}

impl<'de> Deserialize<'de> for ConvexPolygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = PolygonFile::deserialize(d)?;
        ConvexPolygon::new(file.vertices).map_err(serde::de::Error::custom)
    }
}

/// Sutherland–Hodgman step keeping `n·x <= c`.
fn clip(poly: &[Point], n: Point, c: f64) -> Vec<Point> {
    let m = poly.len();
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..m {
        let (p, q) = (poly[i], poly[(i + 1) % m]);
        let (dp, dq) = (dot(n, p) - c, dot(n, q) - c);
        if dp <= 0.0 {
            out.push(p);
        }
        if (dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0) {
            let s = dp / (dp - dq);
            out.push([p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]);
        }
    }
    out
}

/// Inner parallel body of a polygon. May degenerate to a segment or a point
/// (at `t = r`) and is empty for `t > r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerParallelBody {
    pub t: f64,
    pub vertices: Vec<Point>,
}

impl InnerParallelBody {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        if self.vertices.len() < 3 {
            0.0
        } else {
            shoelace(&self.vertices).max(0.0)
        }
    }

    /// Boundary length; a segment counts both sides.
    pub fn perimeter(&self) -> f64 {
        closed_length(&self.vertices)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn square() -> ConvexPolygon {
        ConvexPolygon::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap()
    }

    #[test]
    fn square_metrics() {
        let m = square().metrics().unwrap();
        assert_abs_diff_eq!(m.volume(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.surface(), 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.inradius(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(m.width(), 1.0, epsilon = 1e-15);
        let (c, _) = square().chebyshev_center();
        assert_abs_diff_eq!(c[0], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(c[1], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn triangle_metrics() {
        // 3-4-5 right triangle: r = (a + b - c)/2 = 1, width = 12/5
        let t = ConvexPolygon::new(vec![[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]]).unwrap();
        assert_relative_eq!(t.area(), 6.0);
        assert_relative_eq!(t.perimeter(), 12.0);
        assert_relative_eq!(t.inradius(), 1.0, max_relative = 1e-13);
        assert_relative_eq!(t.width(), 2.4, max_relative = 1e-13);
    }

    #[test]
    fn rejects_bad_polygons() {
        let cw = vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]];
        assert!(matches!(ConvexPolygon::new(cw), Err(Error::InvalidPolygon(_))));
        let collinear = vec![[0.0, 0.0], [0.5, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert!(ConvexPolygon::new(collinear).is_err());
        let nonconvex = vec![[0.0, 0.0], [2.0, 0.0], [1.0, 0.5], [2.0, 2.0], [0.0, 2.0]];
        assert!(ConvexPolygon::new(nonconvex).is_err());
        assert!(ConvexPolygon::new(vec![[0.0, 0.0], [1.0, 0.0]]).is_err());
        // pentagram: every turn is left but it winds twice
        let star: Vec<Point> = (0..5)
            .map(|k| {
                let a = 4.0 * PI * k as f64 / 5.0;
                [a.cos(), a.sin()]
            })
            .collect();
        assert!(ConvexPolygon::new(star).is_err());
        assert!(ConvexPolygon::new(vec![[0.0, 0.0], [1.0, 0.0], [f64::NAN, 1.0]]).is_err());
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [0.5, 0.0], [1.0, 1.0], [0.0, 1.0], [0.3, 0.4], [0.5, 1.0]];
        let h = ConvexPolygon::hull(&pts).unwrap();
        assert_eq!(h.vertices().len(), 4);
        assert_relative_eq!(h.area(), 1.0);
    }

    #[test]
    fn json_round_trip() {
        let p = ConvexPolygon::from_json_str(r#"{"vertices": [[0,0],[2,0],[2,1],[0,1]]}"#).unwrap();
        assert_relative_eq!(p.area(), 2.0);
        let again = ConvexPolygon::from_json_str(&p.to_json()).unwrap();
        assert_eq!(p, again);
        assert!(matches!(ConvexPolygon::from_json_str("{"), Err(Error::Parse(_))));
        let via_serde: ConvexPolygon = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(via_serde, p);
    }

    #[test]
    fn inner_parallel_of_square() {
        let sq = square();
        let body = sq.inner_parallel(0.2).unwrap();
        assert_relative_eq!(body.area(), 0.36, max_relative = 1e-12);
        assert_relative_eq!(body.perimeter(), 2.4, max_relative = 1e-12);
        let point = sq.inner_parallel(0.5).unwrap();
        assert!(!point.is_empty());
        assert_abs_diff_eq!(point.perimeter(), 0.0, epsilon = 1e-12);
        assert!(sq.inner_parallel(0.5001).unwrap().is_empty());
        assert!(sq.inner_parallel(-0.1).is_err());
        assert_relative_eq!(sq.inner_parallel(0.0).unwrap().area(), 1.0);
    }

    #[test]
    fn rectangle_degenerates_to_segment() {
        let rect = ConvexPolygon::new(vec![[0.0, 0.0], [3.0, 0.0], [3.0, 1.0], [0.0, 1.0]]).unwrap();
        let seg = rect.inner_parallel(0.5).unwrap();
        assert!(!seg.is_empty());
        assert_abs_diff_eq!(seg.area(), 0.0, epsilon = 1e-12);
        // segment of length 2, counted from both sides
        assert_relative_eq!(seg.perimeter(), 4.0, max_relative = 1e-9);
    }

    #[test]
    fn support_function() {
        let sq = square();
        assert_eq!(sq.support([1.0, 0.0]), 1.0);
        assert_eq!(sq.support([-1.0, 0.0]), 0.0);
        let d = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(sq.directional_width([d, d]), 2f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn regular_polygon_inradius() {
        for sides in 3..12 {
            let p = ConvexPolygon::regular(sides, 1.0).unwrap();
            let apothem = (PI / sides as f64).cos();
            assert_relative_eq!(p.inradius(), apothem, max_relative = 1e-12);
        }
    }
}
