//! Regular Z3-labelings of the hexagon `R_{d,n}`, their rigid lozenges and
//! supports, and the bijection with edge color maps.
//!
//! The boundary of a regular labeling advances by exactly one (mod 3) per
//! counterclockwise step around the hexagon, starting from value 0 at the
//! east corner `(n, 0)`. In boundary-vector terms this reads
//! `g^A_i = n+i`, `g^B_i = i`, `g^C_i = -i` (mod 3); the `C` vector is
//! indexed clockwise, which is why its sign differs. Every lozenge
//! `(v1,v2,v3,v4)` with `g(v2) = g(v4)` must see both other values
//! `g(v2)+1` and `g(v2)+2`.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::grid::{
    boundary_vertex_a, boundary_vertex_b, boundary_vertex_c, hexagon_lozenges, hexagon_vertices,
    HexLozenge, HexVertex,
};
use crate::{Error, Result};

/// A regular labeling `g: R_{d,n} -> Z_3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularLabeling {
    pub n: u32,
    pub d: u32,
    values: BTreeMap<HexVertex, u8>,
}

/// Edge colors of the two-colored model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum EdgeColor {
    C0,
    C1,
    C3,
    M,
}

impl EdgeColor {
    pub fn symbol(self) -> &'static str {
        match self {
            EdgeColor::C0 => "0",
            EdgeColor::C1 => "1",
            EdgeColor::C3 => "3",
            EdgeColor::M => "m",
        }
    }
}

/// A color map on the oriented edges of `R_{d,n}`.
///
/// Keys are oriented pairs `(u, v)` in the canonical orientation: clockwise
/// around the direct face containing the edge, i.e. `(0,1)` edges point up,
/// `(1,-1)` edges point down-right and horizontal edges point west.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColorMap {
    pub n: u32,
    pub d: u32,
    pub colors: BTreeMap<(HexVertex, HexVertex), EdgeColor>,
}

/// Oriented hexagon edges in canonical orientation, row-major.
pub fn hexagon_oriented_edges(n: u32, d: u32) -> Vec<(HexVertex, HexVertex)> {
    let inside = |v: HexVertex| crate::grid::hexagon_contains(n, d, v);
    let mut edges = Vec::new();
    for v in hexagon_vertices(n, d) {
        let up = HexVertex::new(v.v1, v.v2 + 1);
        if inside(up) {
            edges.push((v, up));
        }
        let dr = HexVertex::new(v.v1 + 1, v.v2 - 1);
        if inside(dr) {
            edges.push((v, dr));
        }
        let west = HexVertex::new(v.v1 - 1, v.v2);
        if inside(west) {
            edges.push((v, west));
        }
    }
    edges
}

/// Boundary values required of every regular labeling, as a map.
pub fn boundary_labels(n: u32, d: u32) -> BTreeMap<HexVertex, u8> {
    let mut req = BTreeMap::new();
    for i in 0..=n {
        req.insert(boundary_vertex_a(n, d, i), ((n + i) % 3) as u8);
        req.insert(boundary_vertex_b(n, d, i), (i % 3) as u8);
        req.insert(boundary_vertex_c(n, d, i), ((3 * n - i) % 3) as u8);
    }
    req
}

impl RegularLabeling {
    pub fn value(&self, v: HexVertex) -> u8 {
        self.values[&v]
    }

    pub fn get(&self, v: HexVertex) -> Option<u8> {
        self.values.get(&v).copied()
    }

    pub fn values(&self) -> &BTreeMap<HexVertex, u8> {
        &self.values
    }

    /// Builds a labeling from explicit values, validating regularity.
    pub fn from_values(n: u32, d: u32, values: BTreeMap<HexVertex, u8>) -> Result<Self> {
        let verts = hexagon_vertices(n, d);
        if verts.len() != values.len() || verts.iter().any(|v| !values.contains_key(v)) {
            return Err(Error::InvalidArgument(format!(
                "labeling must assign exactly the {} vertices of R_{{{d},{n}}}",
                verts.len()
            )));
        }
        let g = RegularLabeling { n, d, values };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        for (v, want) in boundary_labels(self.n, self.d) {
            if self.values[&v] != want {
                return Err(Error::InvalidArgument(format!(
                    "boundary value at ({}, {}) is {}, expected {}",
                    v.v1, v.v2, self.values[&v], want
                )));
            }
        }
        for loz in hexagon_lozenges(self.n, self.d) {
            let [a, b, c, e] = loz.vertices.map(|v| self.values[&v]);
            if b == e {
                let s = [(b + 1) % 3, (b + 2) % 3];
                if !(s.contains(&a) && s.contains(&c) && a != c) {
                    return Err(Error::InvalidArgument(format!(
                        "lozenge rule violated at {:?}",
                        loz.vertices
                    )));
                }
            }
        }
        Ok(())
    }

    /// Canonical identity: row-major digit string (`v2` rising, then `v1`).
    pub fn canonical_key(&self) -> String {
        let mut verts: Vec<_> = hexagon_vertices(self.n, self.d);
        verts.sort_by_key(|v| (v.v2, v.v1));
        verts.iter().map(|v| char::from(b'0' + self.values[v])).collect()
    }

    /// Rebuilds a labeling from its canonical key.
    pub fn from_canonical_key(n: u32, d: u32, key: &str) -> Result<Self> {
        let mut verts: Vec<_> = hexagon_vertices(n, d);
        verts.sort_by_key(|v| (v.v2, v.v1));
        if key.len() != verts.len() {
            return Err(Error::InvalidArgument(format!(
                "key length {} does not match |R_{{{d},{n}}}| = {}",
                key.len(),
                verts.len()
            )));
        }
        let mut values = BTreeMap::new();
        for (v, ch) in verts.into_iter().zip(key.chars()) {
            let digit = ch.to_digit(10).filter(|&x| x < 3).ok_or_else(|| {
                Error::InvalidArgument(format!("invalid digit '{ch}' in labeling key"))
            })?;
            values.insert(v, digit as u8);
        }
        Self::from_values(n, d, values)
    }

    /// Rigid lozenges: those labeled `(a, a+1, a+2, a+1)`.
    pub fn rigid_lozenges(&self) -> Vec<HexLozenge> {
        hexagon_lozenges(self.n, self.d)
            .into_iter()
            .filter(|loz| {
                let [a, b, c, e] = loz.vertices.map(|v| self.values[&v]);
                b == (a + 1) % 3 && c == (a + 2) % 3 && e == (a + 1) % 3
            })
            .collect()
    }

    /// Support: all vertices except the `v4`'s of rigid lozenges.
    pub fn support(&self) -> Vec<HexVertex> {
        let excluded: std::collections::BTreeSet<_> =
            self.rigid_lozenges().iter().map(|l| l.vertices[3]).collect();
        hexagon_vertices(self.n, self.d)
            .into_iter()
            .filter(|v| !excluded.contains(v))
            .collect()
    }

    /// The color map `C[g]`.
    ///
    /// Along the canonical orientation, `g` rising by 1 gives color 1 and by
    /// 2 gives color 0. On an edge with equal endpoint values, the third
    /// vertex `w` of the direct face decides: `g(w) = g(u)+1` gives 3 and
    /// `g(w) = g(u)-1` gives `m`.
    pub fn color_map(&self) -> EdgeColorMap {
        let inside = |v: HexVertex| crate::grid::hexagon_contains(self.n, self.d, v);
        let mut colors = BTreeMap::new();
        for (u, v) in hexagon_oriented_edges(self.n, self.d) {
            let diff = (3 + self.values[&v] - self.values[&u]) % 3;
            let color = match diff {
                1 => EdgeColor::C1,
                2 => EdgeColor::C0,
                _ => {
                    // Third vertex of the direct face containing {u, v}.
                    let lo = if u.v2 < v.v2 || (u.v2 == v.v2 && u.v1 < v.v1) { u } else { v };
                    let hi = if lo == u { v } else { u };
                    let w = match (hi.v1 - lo.v1, hi.v2 - lo.v2) {
                        (1, 0) => HexVertex::new(lo.v1, lo.v2 + 1),
                        (0, 1) => HexVertex::new(lo.v1 + 1, lo.v2),
                        (-1, 1) => HexVertex::new(lo.v1 - 1, lo.v2),
                        _ => unreachable!("not a unit edge"),
                    };
                    debug_assert!(inside(w), "equal-label edge must have its direct face");
                    if (3 + self.values[&w] - self.values[&u]) % 3 == 1 {
                        EdgeColor::C3
                    } else {
                        EdgeColor::M
                    }
                }
            };
            colors.insert((u, v), color);
        }
        EdgeColorMap { n: self.n, d: self.d, colors }
    }
}

impl EdgeColorMap {
    /// Number of `m`-colored edges.
    pub fn m_count(&self) -> usize {
        self.colors.values().filter(|&&c| c == EdgeColor::M).count()
    }

    /// Number of 3-colored edges.
    pub fn three_count(&self) -> usize {
        self.colors.values().filter(|&&c| c == EdgeColor::C3).count()
    }

    /// Reconstructs the regular labeling from the colors (inverse of
    /// [`RegularLabeling::color_map`]). Rejects color tables that do not come
    /// from a regular labeling.
    pub fn labeling(&self) -> Result<RegularLabeling> {
        let verts = hexagon_vertices(self.n, self.d);
        let start = HexVertex::new(self.n as i64, 0);
        let mut values: BTreeMap<HexVertex, u8> = BTreeMap::new();
        values.insert(start, 0);
        let mut queue = std::collections::VecDeque::from([start]);
        let increment = |c: EdgeColor| -> u8 {
            match c {
                EdgeColor::C1 => 1,
                EdgeColor::C0 => 2,
                _ => 0,
            }
        };
        while let Some(u) = queue.pop_front() {
            for (&(a, b), &c) in &self.colors {
                let (other, inc) = if a == u {
                    (b, increment(c))
                } else if b == u {
                    (a, (3 - increment(c)) % 3)
                } else {
                    continue;
                };
                let val = (values[&u] + inc) % 3;
                match values.get(&other) {
                    None => {
                        values.insert(other, val);
                        queue.push_back(other);
                    }
                    Some(&prev) if prev != val => {
                        return Err(Error::InvalidArgument(
                            "inconsistent color table: path-dependent labeling".into(),
                        ))
                    }
                    _ => {}
                }
            }
        }
        if values.len() != verts.len() {
            return Err(Error::InvalidArgument("color table does not connect the hexagon".into()));
        }
        let g = RegularLabeling::from_values(self.n, self.d, values)?;
        if g.color_map() != *self {
            return Err(Error::InvalidArgument(
                "color table violates the face color rule".into(),
            ));
        }
        Ok(g)
    }
}

/// Enumerates all regular labelings of `R_{d,n}`, sorted by canonical key.
///
/// Depth-first assignment sweeping interior vertices in rows from the south
/// boundary, pruning on every completed lozenge; the top-level branch
/// parallelizes over the assignments of the first interior vertices.
pub fn enumerate_regular_labelings(n: u32, d: u32) -> Vec<RegularLabeling> {
    assert!(n >= 3, "n must be at least 3");
    assert!(d <= n, "labelings are undefined for d > n");
    let mut verts = hexagon_vertices(n, d);
    verts.sort_by_key(|v| (v.v2, v.v1));
    let index: BTreeMap<HexVertex, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let boundary = boundary_labels(n, d);

    // Assignment order: boundary first (fixed), then interior row-major.
    let interior: Vec<usize> =
        verts.iter().enumerate().filter(|(_, v)| !boundary.contains_key(v)).map(|(i, _)| i).collect();
    let mut order = vec![usize::MAX; verts.len()]; // vertex index -> step when assigned
    for (v, _) in &boundary {
        order[index[v]] = 0;
    }
    for (step, &vi) in interior.iter().enumerate() {
        order[vi] = step + 1;
    }

    // Lozenges as index quadruples, attached to the last-assigned vertex.
    let lozenges: Vec<[usize; 4]> = hexagon_lozenges(n, d)
        .iter()
        .map(|l| l.vertices.map(|v| index[&v]))
        .collect();
    let mut by_last: Vec<Vec<[usize; 4]>> = vec![Vec::new(); interior.len() + 1];
    for q in &lozenges {
        let last = q.iter().map(|&vi| order[vi]).max().unwrap();
        by_last[last].push(*q);
    }

    let mut base = vec![3u8; verts.len()];
    for (v, val) in &boundary {
        base[index[v]] = *val;
    }

    fn lozenge_ok(vals: &[u8], q: &[usize; 4]) -> bool {
        let [a, b, c, e] = q.map(|i| vals[i]);
        if b != e {
            return true;
        }
        let s1 = (b + 1) % 3;
        let s2 = (b + 2) % 3;
        (a == s1 && c == s2) || (a == s2 && c == s1)
    }

    fn dfs(
        vals: &mut Vec<u8>,
        step: usize,
        interior: &[usize],
        by_last: &[Vec<[usize; 4]>],
        out: &mut Vec<Vec<u8>>,
    ) {
        if step > interior.len() {
            out.push(vals.clone());
            return;
        }
        let vi = interior[step - 1];
        for val in 0..3u8 {
            vals[vi] = val;
            if by_last[step].iter().all(|q| lozenge_ok(vals, q)) {
                dfs(vals, step + 1, interior, by_last, out);
            }
        }
        vals[vi] = 3;
    }

    let solutions: Vec<Vec<u8>> = if interior.is_empty() {
        let ok = by_last[0].iter().all(|q| lozenge_ok(&base, q));
        if ok {
            vec![base.clone()]
        } else {
            vec![]
        }
    } else {
        // Check lozenges fully contained in the boundary once.
        if !by_last[0].iter().all(|q| lozenge_ok(&base, q)) {
            vec![]
        } else {
            // Split the first interior assignment across threads.
            (0..3u8)
                .into_par_iter()
                .map(|first| {
                    let mut vals = base.clone();
                    let mut out = Vec::new();
                    vals[interior[0]] = first;
                    if by_last[1].iter().all(|q| lozenge_ok(&vals, q)) {
                        dfs(&mut vals, 2, &interior, &by_last, &mut out);
                    }
                    out
                })
                .reduce(Vec::new, |mut a, mut b| {
                    a.append(&mut b);
                    a
                })
        }
    };

    let mut labelings: Vec<RegularLabeling> = solutions
        .into_iter()
        .map(|vals| {
            let values: BTreeMap<HexVertex, u8> =
                verts.iter().enumerate().map(|(i, v)| (*v, vals[i])).collect();
            RegularLabeling { n, d, values }
        })
        .collect();
    labelings.sort_by_key(|g| g.canonical_key());
    labelings
}

fn cache_header(n: u32, d: u32) -> String {
    format!("qhive-labelings n={n} d={d}")
}

/// Writes the labeling list to a cache file, one canonical key per line.
pub fn write_cache(path: &Path, n: u32, d: u32, labelings: &[RegularLabeling]) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "{}", cache_header(n, d))?;
    for g in labelings {
        writeln!(f, "{}", g.canonical_key())?;
    }
    Ok(())
}

/// Reads a labeling cache, rejecting it when the header does not match.
pub fn read_cache(path: &Path, n: u32, d: u32) -> Result<Vec<RegularLabeling>> {
    let f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut lines = f.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header != cache_header(n, d) {
        return Err(Error::CacheHeaderMismatch { expected: cache_header(n, d), found: header });
    }
    let mut out = Vec::new();
    for line in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        out.push(RegularLabeling::from_canonical_key(n, d, &line)?);
    }
    Ok(out)
}

/// Cached enumeration: reads `labelings_n{n}_d{d}.txt` under `cache_dir` when
/// valid, enumerating and rewriting it otherwise.
pub fn labelings_cached(n: u32, d: u32, cache_dir: Option<&Path>) -> Vec<RegularLabeling> {
    if let Some(dir) = cache_dir {
        let path = dir.join(format!("labelings_n{n}_d{d}.txt"));
        if let Ok(list) = read_cache(&path, n, d) {
            return list;
        }
        let list = enumerate_regular_labelings(n, d);
        let _ = std::fs::create_dir_all(dir);
        let _ = write_cache(&path, n, d, &list);
        return list;
    }
    enumerate_regular_labelings(n, d)
}

/// The labeling drawn in the worked `(n, d) = (3, 1)` example.
pub fn example_labeling_3_1() -> RegularLabeling {
    let values: BTreeMap<HexVertex, u8> = [
        ((1, 0), 1),
        ((2, 0), 2),
        ((3, 0), 0),
        ((0, 1), 0),
        ((1, 1), 0),
        ((2, 1), 0),
        ((3, 1), 1),
        ((0, 2), 2),
        ((1, 2), 1),
        ((2, 2), 2),
        ((0, 3), 1),
        ((1, 3), 0),
    ]
    .into_iter()
    .map(|((a, b), v)| (HexVertex::new(a, b), v))
    .collect();
    RegularLabeling::from_values(3, 1, values).expect("reference labeling is regular")
}
