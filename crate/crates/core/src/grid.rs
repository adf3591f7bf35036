//! Coordinates, edges, faces and lozenges of the triangular grid `T_N` and
//! of the discrete hexagon `R_{d,n}`.
//!
//! A point of `T_N` at position `r + s*e^{i pi/3}` carries the three
//! coordinates `(x0, x1, x2) = (N-(r+s), r, s)`, which always sum to `N`.
//! An edge of type `l` starts at its origin `x` and points in the direction
//! `e^{i pi + 2 l i pi / 3}`; its coordinates are those of the origin and its
//! height is `h(e) = e_l`.

use serde::Serialize;

use crate::{Error, Result};

/// Barycentric-style coordinates of a vertex of `T_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TriCoord {
    pub x0: u32,
    pub x1: u32,
    pub x2: u32,
}

impl TriCoord {
    /// Builds the coordinates of the point `r + s*e^{i pi/3}` in `T_N`.
    pub fn from_rs(n: u32, r: u32, s: u32) -> Self {
        debug_assert!(r + s <= n);
        TriCoord { x0: n - (r + s), x1: r, x2: s }
    }

    pub fn grid_size(&self) -> u32 {
        self.x0 + self.x1 + self.x2
    }

    pub fn get(&self, i: u8) -> u32 {
        match i % 3 {
            0 => self.x0,
            1 => self.x1,
            _ => self.x2,
        }
    }
}

/// One of the three edge directions of the triangular grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EdgeType {
    T0,
    T1,
    T2,
}

impl EdgeType {
    pub fn index(self) -> u8 {
        match self {
            EdgeType::T0 => 0,
            EdgeType::T1 => 1,
            EdgeType::T2 => 2,
        }
    }

    pub fn from_index(i: u8) -> Self {
        match i % 3 {
            0 => EdgeType::T0,
            1 => EdgeType::T1,
            _ => EdgeType::T2,
        }
    }

    pub fn next(self) -> Self {
        Self::from_index(self.index() + 1)
    }

    pub fn prev(self) -> Self {
        Self::from_index(self.index() + 2)
    }
}

/// An edge of `T_N`, identified by the coordinates of its origin and its type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GridEdge {
    /// `(e0, e1, e2)` of the origin vertex.
    pub coords: (u32, u32, u32),
    pub edge_type: EdgeType,
}

impl GridEdge {
    pub fn new(origin: TriCoord, edge_type: EdgeType) -> Self {
        GridEdge { coords: (origin.x0, origin.x1, origin.x2), edge_type }
    }

    pub fn coord(&self, i: u8) -> u32 {
        match i % 3 {
            0 => self.coords.0,
            1 => self.coords.1,
            _ => self.coords.2,
        }
    }

    /// Height `h(e) = e_l` for an edge of type `l`.
    pub fn height(&self) -> u32 {
        self.coord(self.edge_type.index())
    }

    /// Coordinates of the far endpoint: `y_l = x_l + 1`, `y_{l-1} = x_{l-1}`,
    /// `y_{l+1} = x_{l+1} - 1`.
    pub fn endpoint(&self) -> TriCoord {
        let l = self.edge_type.index();
        let mut c = [self.coord(0), self.coord(1), self.coord(2)];
        c[l as usize] += 1;
        c[((l + 1) % 3) as usize] -= 1;
        TriCoord { x0: c[0], x1: c[1], x2: c[2] }
    }
}

/// Orientation of a triangular face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FaceKind {
    Direct,
    Reversed,
}

/// A face of `T_N`, anchored at the `(r, s)` position of its lowest-left
/// vertex, together with its orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Face {
    pub kind: FaceKind,
    pub r: u32,
    pub s: u32,
}

impl Face {
    /// The three boundary edges, indexed by type: `[type 0, type 1, type 2]`.
    ///
    /// Direct face `{(r,s), (r+1,s), (r,s+1)}`; reversed face
    /// `{(r,s), (r+1,s), (r+1,s-1)}`.
    pub fn edges(&self, n: u32) -> [GridEdge; 3] {
        let (r, s) = (self.r, self.s);
        match self.kind {
            FaceKind::Direct => [
                GridEdge::new(TriCoord::from_rs(n, r + 1, s), EdgeType::T0),
                GridEdge::new(TriCoord::from_rs(n, r, s + 1), EdgeType::T1),
                GridEdge::new(TriCoord::from_rs(n, r, s), EdgeType::T2),
            ],
            FaceKind::Reversed => [
                GridEdge::new(TriCoord::from_rs(n, r + 1, s), EdgeType::T0),
                GridEdge::new(TriCoord::from_rs(n, r, s), EdgeType::T1),
                GridEdge::new(TriCoord::from_rs(n, r + 1, s - 1), EdgeType::T2),
            ],
        }
    }
}

/// Every face of `T_N` exactly once, row by row from the south, direct faces
/// interleaved with the reversed face to their right.
pub fn triangle_faces(n: u32) -> Vec<Face> {
    let mut faces = Vec::new();
    for s in 0..n {
        for r in 0..(n - s) {
            faces.push(Face { kind: FaceKind::Direct, r, s });
            if r + 1 < n - s {
                faces.push(Face { kind: FaceKind::Reversed, r, s: s + 1 });
            }
        }
    }
    faces
}

/// Triangle sum: heights of the three edges of a face add up to `N-1`
/// (direct) or `N-2` (reversed).
pub fn check_triangle_sum(face: &Face, n: u32) -> bool {
    let sum: u32 = face.edges(n).iter().map(|e| e.height()).sum();
    match face.kind {
        FaceKind::Direct => sum == n - 1,
        FaceKind::Reversed => sum == n - 2,
    }
}

/// Boundary edges of type `l`, ordered by height `0..N-1` as used for the
/// boundary words of puzzles and hives.
pub fn boundary_edges(n: u32, l: EdgeType) -> Vec<GridEdge> {
    (0..n)
        .map(|h| match l {
            // (r, N-r, 0): bottom row, height e0 = r
            EdgeType::T0 => GridEdge { coords: (h, n - h, 0), edge_type: l },
            // (0, r, N-r): hypotenuse, height e1 = r
            EdgeType::T1 => GridEdge { coords: (0, h, n - h), edge_type: l },
            // (N-r, 0, r): left column, height e2 = r
            EdgeType::T2 => GridEdge { coords: (n - h, 0, h), edge_type: l },
        })
        .collect()
}

/// A vertex of the hexagon `R_{d,n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HexVertex {
    pub v1: i64,
    pub v2: i64,
}

impl HexVertex {
    pub fn new(v1: i64, v2: i64) -> Self {
        HexVertex { v1, v2 }
    }

    fn shifted(&self, d1: i64, d2: i64) -> Self {
        HexVertex { v1: self.v1 + d1, v2: self.v2 + d2 }
    }
}

/// The three lozenge configurations; vertex order `(v1, v2, v3, v4)` is fixed
/// per configuration and must not be permuted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LozengeKind {
    /// Vertical rhombus: `v1 = v2+(0,1)`, `v3 = v2+(1,-1)`, `v4 = v2+(1,0)`.
    Upright,
    /// Bottom-edge rhombus: `v2 = v1+(1,0)`, `v3 = v1+(1,1)`, `v4 = v1+(0,1)`.
    Flat,
    /// Left-leaning rhombus: `v1 = v4+(1,0)`, `v2 = v4+(0,1)`, `v3 = v4+(-1,1)`.
    Leaning,
}

/// A lozenge of `R_{d,n}` with its ordered vertex quadruple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HexLozenge {
    pub kind: LozengeKind,
    pub vertices: [HexVertex; 4],
}

impl HexLozenge {
    pub fn v(&self, i: usize) -> HexVertex {
        self.vertices[i]
    }

    /// Middle edge of the rhombus, i.e. the diagonal `v2 -- v4`.
    pub fn middle(&self) -> (HexVertex, HexVertex) {
        (self.vertices[1], self.vertices[3])
    }
}

/// Membership test for `R_{d,n}`.
pub fn hexagon_contains(n: u32, d: u32, v: HexVertex) -> bool {
    let (n, d) = (n as i64, d as i64);
    0 <= v.v1 && v.v1 <= n && 0 <= v.v2 && v.v2 <= n && d <= v.v1 + v.v2 && v.v1 + v.v2 <= n + d
}

/// All vertices of `R_{d,n}` in row-major order (`v2` rising, then `v1`).
pub fn hexagon_vertices(n: u32, d: u32) -> Vec<HexVertex> {
    let mut out = Vec::new();
    for v2 in 0..=(n as i64) {
        for v1 in 0..=(n as i64) {
            let v = HexVertex::new(v1, v2);
            if hexagon_contains(n, d, v) {
                out.push(v);
            }
        }
    }
    out
}

/// All lozenges of `R_{d,n}`, each quadruple appearing with exactly one
/// orientation tag, in deterministic row-major order.
pub fn hexagon_lozenges(n: u32, d: u32) -> Vec<HexLozenge> {
    let mut out = Vec::new();
    let inside = |v: HexVertex| hexagon_contains(n, d, v);
    for v2 in 0..=(n as i64) {
        for v1 in 0..=(n as i64) {
            let a = HexVertex::new(v1, v2);
            // Upright with v2-corner at `a`
            let q = [a.shifted(0, 1), a, a.shifted(1, -1), a.shifted(1, 0)];
            if q.iter().all(|&p| inside(p)) {
                out.push(HexLozenge { kind: LozengeKind::Upright, vertices: q });
            }
            // Flat with v1-corner at `a`
            let q = [a, a.shifted(1, 0), a.shifted(1, 1), a.shifted(0, 1)];
            if q.iter().all(|&p| inside(p)) {
                out.push(HexLozenge { kind: LozengeKind::Flat, vertices: q });
            }
            // Leaning with v4-corner at `a`
            let q = [a.shifted(1, 0), a.shifted(0, 1), a.shifted(-1, 1), a];
            if q.iter().all(|&p| inside(p)) {
                out.push(HexLozenge { kind: LozengeKind::Leaning, vertices: q });
            }
        }
    }
    out
}

/// Vertices on the boundary of `R_{d,n}`.
pub fn hexagon_boundary(n: u32, d: u32) -> Vec<HexVertex> {
    let (ni, di) = (n as i64, d as i64);
    hexagon_vertices(n, d)
        .into_iter()
        .filter(|v| {
            v.v1 == 0 || v.v1 == ni || v.v2 == 0 || v.v2 == ni || v.v1 + v.v2 == di || v.v1 + v.v2 == ni + di
        })
        .collect()
}

/// Positions of the boundary vectors: `A[i]`, `B[i]`, `C[i]` as vertices.
pub fn boundary_vertex_a(n: u32, d: u32, i: u32) -> HexVertex {
    let (n, d, i) = (n as i64, d as i64, i as i64);
    HexVertex::new((d - i).max(0), (n + d - i).min(n))
}

pub fn boundary_vertex_b(n: u32, d: u32, i: u32) -> HexVertex {
    let (n, d, i) = (n as i64, d as i64, i as i64);
    HexVertex::new((n + d - i).min(n), i)
}

pub fn boundary_vertex_c(n: u32, d: u32, i: u32) -> HexVertex {
    let (n, d, i) = (n as i64, d as i64, i as i64);
    HexVertex::new(n - i, (i + d - n).max(0))
}

/// Reads the three boundary vectors `(f^A, f^B, f^C)` of a vertex function.
///
/// The function must be defined on every boundary vertex; the three vectors
/// share their corner values (`f^C_0 = f^B_0`, `f^B_n = f^A_0`,
/// `f^A_n = f^C_n`).
pub fn boundary_vectors<T: Clone>(
    f: &dyn Fn(HexVertex) -> Option<T>,
    n: u32,
    d: u32,
) -> Result<(Vec<T>, Vec<T>, Vec<T>)> {
    let read = |v: HexVertex| f(v).ok_or(Error::MissingBoundaryValue(v.v1, v.v2));
    let mut a = Vec::with_capacity(n as usize + 1);
    let mut b = Vec::with_capacity(n as usize + 1);
    let mut c = Vec::with_capacity(n as usize + 1);
    for i in 0..=n {
        a.push(read(boundary_vertex_a(n, d, i))?);
        b.push(read(boundary_vertex_b(n, d, i))?);
        c.push(read(boundary_vertex_c(n, d, i))?);
    }
    Ok((a, b, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashMap, HashSet};

    #[test]
    fn face_counts() {
        // N=1: one direct face, no reversed.
        let f1 = triangle_faces(1);
        assert_eq!(f1.len(), 1);
        assert!(matches!(f1[0].kind, FaceKind::Direct));

        // N=2: 3 direct, 1 reversed.
        let f2 = triangle_faces(2);
        let direct = f2.iter().filter(|f| f.kind == FaceKind::Direct).count();
        let reversed = f2.iter().filter(|f| f.kind == FaceKind::Reversed).count();
        assert_eq!((direct, reversed), (3, 1));

        // N=3: 6 direct, 3 reversed, N^2 = 9 total.
        let f3 = triangle_faces(3);
        let direct = f3.iter().filter(|f| f.kind == FaceKind::Direct).count();
        assert_eq!(direct, 6);
        assert_eq!(f3.len(), 9);
    }

    #[test]
    fn faces_unique() {
        for n in 1..=6 {
            let faces = triangle_faces(n);
            let set: HashSet<_> = faces.iter().cloned().collect();
            assert_eq!(set.len(), faces.len());
            assert_eq!(faces.len(), (n * n) as usize);
        }
    }

    #[test]
    fn triangle_sum_exhaustive() {
        for n in 1..=12 {
            for face in triangle_faces(n) {
                assert!(check_triangle_sum(&face, n), "face {face:?} in T_{n}");
            }
        }
    }

    #[test]
    fn face_edge_types_are_0_1_2() {
        for face in triangle_faces(5) {
            let e = face.edges(5);
            assert_eq!(e[0].edge_type, EdgeType::T0);
            assert_eq!(e[1].edge_type, EdgeType::T1);
            assert_eq!(e[2].edge_type, EdgeType::T2);
        }
    }

    #[test]
    fn endpoint_coordinates() {
        let e = GridEdge { coords: (2, 3, 1), edge_type: EdgeType::T1 };
        let y = e.endpoint();
        assert_eq!((y.x0, y.x1, y.x2), (2, 4, 0));
        assert_eq!(e.height(), 3);
    }

    #[test]
    fn boundary_edges_heights() {
        for l in [EdgeType::T0, EdgeType::T1, EdgeType::T2] {
            let edges = boundary_edges(6, l);
            assert_eq!(edges.len(), 6);
            for (h, e) in edges.iter().enumerate() {
                assert_eq!(e.height(), h as u32);
                assert_eq!(e.coords.0 + e.coords.1 + e.coords.2, 6);
            }
        }
    }

    #[test]
    fn hexagon_vertex_counts() {
        // Brute-force count from the defining inequalities.
        let brute = |n: u32, d: u32| -> usize {
            let mut c = 0;
            for v1 in 0..=(n as i64) {
                for v2 in 0..=(n as i64) {
                    if hexagon_contains(n, d, HexVertex::new(v1, v2)) {
                        c += 1;
                    }
                }
            }
            c
        };
        assert_eq!(hexagon_vertices(3, 1).len(), 12);
        assert_eq!(hexagon_vertices(3, 0).len(), 10); // d=0 triangle
        assert_eq!(hexagon_vertices(4, 1).len(), 18);
        for n in 3..=6 {
            for d in 0..=n {
                assert_eq!(hexagon_vertices(n, d).len(), brute(n, d));
            }
        }
    }

    #[test]
    fn lozenges_unique_orientation() {
        for (n, d) in [(3u32, 0u32), (3, 1), (3, 2), (4, 1), (4, 2)] {
            let lozs = hexagon_lozenges(n, d);
            let mut seen: HashMap<[HexVertex; 4], LozengeKind> = HashMap::new();
            for l in &lozs {
                let mut sorted = l.vertices;
                sorted.sort();
                assert!(seen.insert(sorted, l.kind).is_none(), "duplicate lozenge {l:?}");
            }
        }
    }

    #[test]
    fn lozenge_vertices_are_unit_steps() {
        for l in hexagon_lozenges(4, 2) {
            for i in 0..3 {
                let a = l.vertices[i];
                let b = l.vertices[i + 1];
                let (d1, d2) = (b.v1 - a.v1, b.v2 - a.v2);
                // |v^i - v^{i+1}| = 1 under the e^{i pi/3} embedding
                let unit = matches!((d1, d2), (1, 0) | (-1, 0) | (0, 1) | (0, -1) | (1, -1) | (-1, 1));
                assert!(unit, "non-unit step in {l:?}");
            }
        }
    }

    #[test]
    fn boundary_vectors_constant_function() {
        let f = |_v: HexVertex| Some(7i32);
        let (a, b, c) = boundary_vectors(&f, 4, 1).unwrap();
        assert!(a.iter().all(|&x| x == 7));
        assert!(b.iter().all(|&x| x == 7));
        assert!(c.iter().all(|&x| x == 7));
        assert_eq!(a.len(), 5);
    }

    #[test]
    fn boundary_vectors_corner_identifications() {
        // pseudo-random integer function on vertices
        let f = |v: HexVertex| Some(v.v1 * 37 + v.v2 * 101 + (v.v1 * v.v2) % 13);
        for (n, d) in [(3u32, 1u32), (4, 2), (5, 3)] {
            let (a, b, c) = boundary_vectors(&f, n, d).unwrap();
            let n = n as usize;
            assert_eq!(c[0], b[0], "f^C_0 = f^B_0");
            assert_eq!(b[n], a[0], "f^B_n = f^A_0");
            assert_eq!(a[n], c[n], "f^A_n = f^C_n");
        }
    }

    #[test]
    fn boundary_vectors_reject_partial_function() {
        let f = |v: HexVertex| if v.v1 == 0 { None } else { Some(1) };
        assert!(boundary_vectors(&f, 3, 1).is_err());
    }

    #[test]
    fn fig_east_boundary_read_off() {
        // R_{1,3} with the rational witness values (times 23 to stay integer):
        // east boundary reads (23, 18, 28, 33).
        let vals: HashMap<HexVertex, i64> = [
            ((1, 0), 52), ((2, 0), 43), ((3, 0), 23),
            ((0, 1), 54), ((1, 1), 50), ((2, 1), 38), ((3, 1), 18),
            ((0, 2), 52), ((1, 2), 44), ((2, 2), 28),
            ((0, 3), 46), ((1, 3), 33),
        ]
        .into_iter()
        .map(|((a, b), v)| (HexVertex::new(a, b), v))
        .collect();
        let f = |v: HexVertex| vals.get(&v).copied();
        let (a, b, c) = boundary_vectors(&f, 3, 1).unwrap();
        assert_eq!(b, vec![23, 18, 28, 33]);
        assert_eq!(c, vec![23, 43, 52, 54]);
        assert_eq!(a, vec![33, 46, 52, 54]);
    }
}
