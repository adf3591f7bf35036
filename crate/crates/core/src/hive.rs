//! Counting and validation of two-colored discrete dual hives on the
//! triangular grid `T_k`: the lattice-point model whose cardinality is the
//! quantum Littlewood-Richardson coefficient.
//!
//! A hive is a pair `(C, L)` on the edges of `T_k`. Around every face the
//! clockwise colors read `(0,0,0)`, `(1,1,1)`, `(1,0,3)` or `(0,1,m)` up to
//! rotation; labels sum to `N-1` on every face except reversed faces whose
//! colors are not `{0,1,m}`, which sum to `N-2`. Opposite edges of a lozenge
//! are equal across an `m`-colored middle edge, strictly decreasing across
//! the stacked direction otherwise, and weakly/strictly ordered across the
//! displaced direction depending on nearby `m` edges.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::grid::{EdgeType, GridEdge};
use crate::labeling::EdgeColor;
use crate::words::HiveBoundary;
use crate::{Error, Result};

/// A fully labeled dual hive (used for witnesses and validation).
#[derive(Debug, Clone, Serialize)]
pub struct DualHive {
    pub k: u32,
    pub big_n: u32,
    pub colors: BTreeMap<GridEdge, EdgeColor>,
    pub labels: BTreeMap<GridEdge, u32>,
}

/// Internal edge id: edges indexed by (type, r, s) of their origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct EdgeId(u32);

struct Geometry {
    k: u32,
    /// (type, r, s) per edge id
    edges: Vec<(u8, u32, u32)>,
    index: BTreeMap<(u8, u32, u32), EdgeId>,
    /// lozenges: (middle, stacked pair (e, e'), displaced pair (e, e'))
    lozenges: Vec<Lozenge>,
    by_edge: Vec<Vec<u32>>,
    /// face sweep order
    faces: Vec<FaceRef>,
}

#[derive(Debug, Clone, Copy)]
struct Lozenge {
    middle: EdgeId,
    stacked: (EdgeId, EdgeId),
    displaced: (EdgeId, EdgeId),
}

#[derive(Debug, Clone, Copy)]
enum FaceRef {
    Direct { r: u32, s: u32 },
    Reversed { r: u32, s: u32 },
}

impl Geometry {
    fn new(k: u32) -> Self {
        let mut edges = Vec::new();
        let mut index = BTreeMap::new();
        let mut add = |t: u8, r: u32, s: u32, edges: &mut Vec<(u8, u32, u32)>| {
            let id = EdgeId(edges.len() as u32);
            edges.push((t, r, s));
            index.insert((t, r, s), id);
        };
        // type 0 edges: origin (r, s) with r >= 1; type 1: origin (r, s) with
        // s >= 1 and r + s <= k; type 2: origin (r, s) with r + s < k.
        for s in 0..=k {
            for r in 0..=k {
                if r + s > k {
                    continue;
                }
                if r >= 1 {
                    add(0, r, s, &mut edges);
                }
                if s >= 1 {
                    add(1, r, s, &mut edges);
                }
                if r + s < k {
                    add(2, r, s, &mut edges);
                }
            }
        }
        let id = |t: u8, r: u32, s: u32| index[&(t, r, s)];
        let mut lozenges = Vec::new();
        // middle of type 1 shared by D(r,s) and R(r,s+1)
        for s in 0..k.saturating_sub(1) {
            for r in 0..k - 1 - s {
                lozenges.push(Lozenge {
                    middle: id(1, r, s + 1),
                    stacked: (id(0, r + 1, s), id(0, r + 1, s + 1)),
                    displaced: (id(2, r + 1, s), id(2, r, s)),
                });
            }
        }
        // middle of type 0 shared by D(r,s) and R(r,s)
        for s in 1..k {
            for r in 0..k - s {
                lozenges.push(Lozenge {
                    middle: id(0, r + 1, s),
                    stacked: (id(2, r, s), id(2, r + 1, s - 1)),
                    displaced: (id(1, r, s), id(1, r, s + 1)),
                });
            }
        }
        // middle of type 2 shared by D(r,s) and R(r-1,s+1)
        for s in 0..k.saturating_sub(1) {
            for r in 1..k - s {
                lozenges.push(Lozenge {
                    middle: id(2, r, s),
                    stacked: (id(1, r, s + 1), id(1, r - 1, s + 1)),
                    displaced: (id(0, r, s + 1), id(0, r + 1, s)),
                });
            }
        }
        let mut by_edge = vec![Vec::new(); edges.len()];
        for (i, lz) in lozenges.iter().enumerate() {
            for e in [lz.middle, lz.stacked.0, lz.stacked.1, lz.displaced.0, lz.displaced.1] {
                by_edge[e.0 as usize].push(i as u32);
            }
        }
        let mut faces = Vec::new();
        for s in 0..k {
            for r in 0..k - s {
                faces.push(FaceRef::Direct { r, s });
                if r + 1 < k - s {
                    faces.push(FaceRef::Reversed { r, s: s + 1 });
                }
            }
        }
        Geometry { k, edges, index, lozenges, by_edge, faces }
    }

    fn grid_edge(&self, e: EdgeId) -> GridEdge {
        let (t, r, s) = self.edges[e.0 as usize];
        GridEdge { coords: (self.k - r - s, r, s), edge_type: EdgeType::from_index(t) }
    }
}

#[derive(Clone)]
struct State {
    colors: Vec<Option<EdgeColor>>,
    labels: Vec<Option<u32>>,
}

/// Valid clockwise color words around a face: the cyclic order of the edge
/// types is always descending, so checking the `(c2, c1, c0)` cycle covers
/// direct and reversed faces alike.
fn face_colors_ok(c2: EdgeColor, c1: EdgeColor, c0: EdgeColor) -> bool {
    use EdgeColor::*;
    let w = [c2, c1, c0];
    for rot in 0..3 {
        let ww = [w[rot % 3], w[(rot + 1) % 3], w[(rot + 2) % 3]];
        if matches!(ww, [C0, C0, C0] | [C1, C1, C1] | [C1, C0, C3] | [C0, C1, M]) {
            return true;
        }
    }
    false
}

/// Face label total for a reversed face with the given colors.
fn reversed_sum(big_n: u32, c0: EdgeColor, c1: EdgeColor, c2: EdgeColor) -> u32 {
    let mut sorted = [c0, c1, c2];
    sorted.sort_by_key(|c| match c {
        EdgeColor::C0 => 0,
        EdgeColor::C1 => 1,
        EdgeColor::C3 => 2,
        EdgeColor::M => 3,
    });
    if sorted == [EdgeColor::C0, EdgeColor::C1, EdgeColor::M] {
        big_n - 1
    } else {
        big_n - 2
    }
}

fn lozenge_ok(geom: &Geometry, st: &State, li: u32) -> bool {
    let lz = geom.lozenges[li as usize];
    let all = [lz.middle, lz.stacked.0, lz.stacked.1, lz.displaced.0, lz.displaced.1];
    for e in all {
        if st.colors[e.0 as usize].is_none() {
            return true; // not yet complete
        }
    }
    let color = |e: EdgeId| st.colors[e.0 as usize].unwrap();
    let label = |e: EdgeId| st.labels[e.0 as usize].unwrap();
    let mid_m = color(lz.middle) == EdgeColor::M;
    let (e, ep) = lz.stacked;
    if mid_m {
        if label(e) != label(ep) {
            return false;
        }
    } else if label(e) <= label(ep) {
        return false;
    }
    let (e, ep) = lz.displaced;
    if mid_m {
        if label(e) != label(ep) {
            return false;
        }
    } else {
        let outer_has_m = [lz.stacked.0, lz.stacked.1, e].iter().any(|&x| color(x) == EdgeColor::M);
        if outer_has_m {
            if label(e) <= label(ep) {
                return false;
            }
        } else if label(e) < label(ep) {
            return false;
        }
    }
    true
}

struct Search<'a> {
    geom: &'a Geometry,
    big_n: u32,
    want_witness: bool,
}

enum Outcome {
    Count(u64),
    Overflow,
}

impl<'a> Search<'a> {
    fn check_lozenges(&self, st: &State, touched: &[EdgeId]) -> bool {
        let mut seen = [u32::MAX; 16];
        let mut len = 0usize;
        for &e in touched {
            for &li in &self.geom.by_edge[e.0 as usize] {
                if seen[..len].contains(&li) {
                    continue;
                }
                if len < seen.len() {
                    seen[len] = li;
                    len += 1;
                }
                if !lozenge_ok(self.geom, st, li) {
                    return false;
                }
            }
        }
        true
    }

    fn run(
        &self,
        st: &mut State,
        face: usize,
        count: &mut u64,
        witness: &mut Option<DualHive>,
    ) -> Outcome {
        if face == self.geom.faces.len() {
            match count.checked_add(1) {
                Some(c) => *count = c,
                None => return Outcome::Overflow,
            }
            if self.want_witness && witness.is_none() {
                *witness = Some(self.to_hive(st));
            }
            return Outcome::Count(*count);
        }
        let id = |t: u8, r: u32, s: u32| self.geom.index[&(t, r, s)];
        match self.geom.faces[face] {
            FaceRef::Direct { r, s } => {
                let t0 = id(0, r + 1, s);
                let t1 = id(1, r, s + 1);
                let t2 = id(2, r, s);
                let l0 = st.labels[t0.0 as usize].expect("t0 known in sweep");
                let l2 = st.labels[t2.0 as usize].expect("t2 known in sweep");
                let want = self.big_n as i64 - 1 - l0 as i64 - l2 as i64;
                let (c0, c2) =
                    (st.colors[t0.0 as usize].unwrap(), st.colors[t2.0 as usize].unwrap());
                if let Some(c1) = st.colors[t1.0 as usize] {
                    // boundary edge: label and color prescribed
                    let l1 = st.labels[t1.0 as usize].unwrap();
                    if l1 as i64 != want || !face_colors_ok(c2, c1, c0) {
                        return Outcome::Count(*count);
                    }
                    if !self.check_lozenges(st, &[t0, t1, t2]) {
                        return Outcome::Count(*count);
                    }
                    return self.run(st, face + 1, count, witness);
                }
                if !(0..self.big_n as i64).contains(&want) {
                    return Outcome::Count(*count);
                }
                for c1 in [EdgeColor::C0, EdgeColor::C1, EdgeColor::C3, EdgeColor::M] {
                    if !face_colors_ok(c2, c1, c0) {
                        continue;
                    }
                    st.colors[t1.0 as usize] = Some(c1);
                    st.labels[t1.0 as usize] = Some(want as u32);
                    if self.check_lozenges(st, &[t1]) {
                        if let Outcome::Overflow = self.run(st, face + 1, count, witness) {
                            return Outcome::Overflow;
                        }
                    }
                    st.colors[t1.0 as usize] = None;
                    st.labels[t1.0 as usize] = None;
                }
                Outcome::Count(*count)
            }
            FaceRef::Reversed { r, s } => {
                let t0 = id(0, r + 1, s);
                let t1 = id(1, r, s);
                let t2 = id(2, r + 1, s - 1);
                let c1 = st.colors[t1.0 as usize].expect("t1 known in sweep");
                let l1 = st.labels[t1.0 as usize].expect("t1 known in sweep");
                for c2 in [EdgeColor::C0, EdgeColor::C1, EdgeColor::C3, EdgeColor::M] {
                    for c0 in [EdgeColor::C0, EdgeColor::C1, EdgeColor::C3, EdgeColor::M] {
                        if !face_colors_ok(c2, c1, c0) {
                            continue;
                        }
                        let total = reversed_sum(self.big_n, c0, c1, c2) as i64 - l1 as i64;
                        let lo = (total - (self.big_n as i64 - 1)).max(0);
                        let hi = total.min(self.big_n as i64 - 1);
                        for l2 in lo..=hi {
                            let l0 = total - l2;
                            st.colors[t2.0 as usize] = Some(c2);
                            st.labels[t2.0 as usize] = Some(l2 as u32);
                            st.colors[t0.0 as usize] = Some(c0);
                            st.labels[t0.0 as usize] = Some(l0 as u32);
                            if self.check_lozenges(st, &[t0, t2]) {
                                if let Outcome::Overflow = self.run(st, face + 1, count, witness) {
                                    return Outcome::Overflow;
                                }
                            }
                            st.colors[t2.0 as usize] = None;
                            st.labels[t2.0 as usize] = None;
                            st.colors[t0.0 as usize] = None;
                            st.labels[t0.0 as usize] = None;
                        }
                    }
                }
                Outcome::Count(*count)
            }
        }
    }

    fn to_hive(&self, st: &State) -> DualHive {
        let mut colors = BTreeMap::new();
        let mut labels = BTreeMap::new();
        for i in 0..self.geom.edges.len() {
            let ge = self.geom.grid_edge(EdgeId(i as u32));
            colors.insert(ge, st.colors[i].expect("complete hive"));
            labels.insert(ge, st.labels[i].expect("complete hive"));
        }
        DualHive { k: self.geom.k, big_n: self.big_n, colors, labels }
    }
}

fn initial_state(geom: &Geometry, b: &HiveBoundary) -> State {
    let k = geom.k;
    let mut st = State {
        colors: vec![None; geom.edges.len()],
        labels: vec![None; geom.edges.len()],
    };
    for h in 0..k {
        // side 0: bottom edges origin (k-h, 0); side 1: hypotenuse origin
        // (h, k-h); side 2: left column origin (0, h).
        let places = [(0u8, k - h, 0u32), (1, h, k - h), (2, 0, h)];
        for (i, &(t, r, s)) in places.iter().enumerate() {
            let id = geom.index[&(t, r, s)];
            st.colors[id.0 as usize] = Some(b.colors[i][h as usize]);
            st.labels[id.0 as usize] = Some(b.labels[i][h as usize]);
        }
    }
    st
}

/// Counts the dual hives with the given boundary; exact, overflow-checked.
pub fn count_dual_hives(b: &HiveBoundary) -> Result<u64> {
    Ok(count_impl(b, false)?.0)
}

/// Counts and additionally returns one witness hive when any exists.
pub fn count_with_witness(b: &HiveBoundary) -> Result<(u64, Option<DualHive>)> {
    count_impl(b, true)
}

fn count_impl(b: &HiveBoundary, want_witness: bool) -> Result<(u64, Option<DualHive>)> {
    for side in 0..3 {
        if b.colors[side].len() != b.k as usize || b.labels[side].len() != b.k as usize {
            return Err(Error::InvalidArgument("boundary sides must have length k".into()));
        }
        if b.labels[side].windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "boundary labels must be strictly increasing in the height".into(),
            ));
        }
        if b.labels[side].iter().any(|&l| l >= b.big_n) {
            return Err(Error::InvalidArgument("boundary labels must be < N".into()));
        }
    }
    if b.k == 0 {
        // Empty grid: exactly one (empty) hive.
        return Ok((1, None));
    }
    let geom = Geometry::new(b.k);
    let st = initial_state(&geom, b);
    let search = Search { geom: &geom, big_n: b.big_n, want_witness };

    // Split the first branched face across threads: enumerate the choices of
    // the first face sequentially one level deep, then recurse in parallel.
    let prefixes: Vec<State> = {
        let mut out = Vec::new();
        collect_first_level(&search, st.clone(), &mut out);
        out
    };
    let results: Vec<Result<(u64, Option<DualHive>)>> = prefixes
        .into_par_iter()
        .map(|mut branch| {
            let mut count = 0u64;
            let mut witness = None;
            match search.run(&mut branch, 1, &mut count, &mut witness) {
                Outcome::Overflow => Err(Error::CountOverflow),
                Outcome::Count(_) => Ok((count, witness)),
            }
        })
        .collect();
    let mut total = 0u64;
    let mut witness = None;
    for r in results {
        let (c, w) = r?;
        total = total.checked_add(c).ok_or(Error::CountOverflow)?;
        if witness.is_none() {
            witness = w;
        }
    }
    Ok((total, witness))
}

/// Expands the first face of the sweep into child states (one per valid
/// assignment) without recursing further.
fn collect_first_level(search: &Search, st: State, out: &mut Vec<State>) {
    let geom = search.geom;
    let id = |t: u8, r: u32, s: u32| geom.index[&(t, r, s)];
    match geom.faces[0] {
        FaceRef::Direct { r, s } => {
            let t0 = id(0, r + 1, s);
            let t1 = id(1, r, s + 1);
            let t2 = id(2, r, s);
            let l0 = st.labels[t0.0 as usize].unwrap();
            let l2 = st.labels[t2.0 as usize].unwrap();
            let want = search.big_n as i64 - 1 - l0 as i64 - l2 as i64;
            let (c0, c2) = (st.colors[t0.0 as usize].unwrap(), st.colors[t2.0 as usize].unwrap());
            if let Some(c1) = st.colors[t1.0 as usize] {
                let l1 = st.labels[t1.0 as usize].unwrap();
                if l1 as i64 == want
                    && face_colors_ok(c2, c1, c0)
                    && search.check_lozenges(&st, &[t0, t1, t2])
                {
                    out.push(st);
                }
                return;
            }
            if !(0..search.big_n as i64).contains(&want) {
                return;
            }
            for c1 in [EdgeColor::C0, EdgeColor::C1, EdgeColor::C3, EdgeColor::M] {
                if !face_colors_ok(c2, c1, c0) {
                    continue;
                }
                let mut child = st.clone();
                child.colors[t1.0 as usize] = Some(c1);
                child.labels[t1.0 as usize] = Some(want as u32);
                if search.check_lozenges(&child, &[t1]) {
                    out.push(child);
                }
            }
        }
        FaceRef::Reversed { .. } => unreachable!("sweep starts with a direct face"),
    }
}

/// A single constraint violation found by [`validate_dual_hive`].
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub rule: String,
    pub detail: String,
}

/// Checks a complete hive against every face-color, face-sum, lozenge and
/// boundary constraint; returns the list of violations (empty when valid).
pub fn validate_dual_hive(hive: &DualHive, b: &HiveBoundary) -> Vec<Violation> {
    let mut violations = Vec::new();
    let geom = Geometry::new(hive.k);
    let mut st = State {
        colors: vec![None; geom.edges.len()],
        labels: vec![None; geom.edges.len()],
    };
    for i in 0..geom.edges.len() {
        let ge = geom.grid_edge(EdgeId(i as u32));
        match (hive.colors.get(&ge), hive.labels.get(&ge)) {
            (Some(&c), Some(&l)) => {
                st.colors[i] = Some(c);
                st.labels[i] = Some(l);
            }
            _ => violations.push(Violation {
                rule: "completeness".into(),
                detail: format!("edge {ge:?} is missing a color or label"),
            }),
        }
    }
    if !violations.is_empty() {
        return violations;
    }
    // boundary restriction
    let bd = initial_state(&geom, b);
    for i in 0..geom.edges.len() {
        if let Some(c) = bd.colors[i] {
            if st.colors[i] != Some(c) || st.labels[i] != bd.labels[i] {
                violations.push(Violation {
                    rule: "boundary".into(),
                    detail: format!("edge {:?} disagrees with the prescribed boundary", geom.grid_edge(EdgeId(i as u32))),
                });
            }
        }
    }
    // face color words and sums
    for f in &geom.faces {
        let (ids, direct) = match *f {
            FaceRef::Direct { r, s } => {
                ([geom.index[&(0, r + 1, s)], geom.index[&(1, r, s + 1)], geom.index[&(2, r, s)]], true)
            }
            FaceRef::Reversed { r, s } => {
                ([geom.index[&(0, r + 1, s)], geom.index[&(1, r, s)], geom.index[&(2, r + 1, s - 1)]], false)
            }
        };
        let c: Vec<EdgeColor> = ids.iter().map(|e| st.colors[e.0 as usize].unwrap()).collect();
        let l: Vec<u32> = ids.iter().map(|e| st.labels[e.0 as usize].unwrap()).collect();
        if !face_colors_ok(c[2], c[1], c[0]) {
            violations.push(Violation {
                rule: "face-color".into(),
                detail: format!("face {f:?} has colors {c:?}"),
            });
        }
        let want = if direct { hive.big_n - 1 } else { reversed_sum(hive.big_n, c[0], c[1], c[2]) };
        if l.iter().sum::<u32>() != want {
            violations.push(Violation {
                rule: "face-sum".into(),
                detail: format!("face {f:?} labels {l:?} sum to {} instead of {want}", l.iter().sum::<u32>()),
            });
        }
    }
    // lozenge rules
    for li in 0..geom.lozenges.len() as u32 {
        if !lozenge_ok(&geom, &st, li) {
            let lz = geom.lozenges[li as usize];
            violations.push(Violation {
                rule: "lozenge".into(),
                detail: format!(
                    "lozenge with middle {:?} violates its label constraints",
                    geom.grid_edge(lz.middle)
                ),
            });
        }
    }
    violations
}

/// Monotonicity consequence of the lozenge rules: for same-type edges with
/// `e_l > e'_l` and `e_{l+1} <= e'_{l+1}`, labels decrease weakly, and
/// strictly across any lozenge whose middle edge is not colored `m`
/// (equality does occur across `m` middles, where rule (2.a) forces it).
pub fn check_strict_monotonicity(hive: &DualHive) -> bool {
    let edges: Vec<(&GridEdge, &u32)> = hive.labels.iter().collect();
    for (e, &le) in &edges {
        for (f, &lf) in &edges {
            if e.edge_type != f.edge_type || e == f {
                continue;
            }
            let l = e.edge_type.index();
            if e.coord(l) > f.coord(l) && e.coord(l + 1) <= f.coord(l + 1) && le < lf {
                return false;
            }
        }
    }
    // Single-step strictness away from m middles.
    let geom = Geometry::new(hive.k);
    for lz in &geom.lozenges {
        let color = |id: EdgeId| hive.colors[&geom.grid_edge(id)];
        let label = |id: EdgeId| hive.labels[&geom.grid_edge(id)];
        if color(lz.middle) != EdgeColor::M && label(lz.stacked.0) <= label(lz.stacked.1) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlr::{qlr_coefficient, Partition};
    use crate::words::boundary_from_partitions;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn count(lam: &[u32], mu: &[u32], nu: &[u32], d: u32, big_n: u32) -> u64 {
        let b = boundary_from_partitions(&p(lam), &p(mu), &p(nu), d, big_n).unwrap();
        count_dual_hives(&b).unwrap()
    }

    #[test]
    fn classical_cases() {
        assert_eq!(count(&[1, 0, 0], &[1, 1, 0], &[2, 1, 0], 0, 6), 1);
        assert_eq!(count(&[2, 1, 0], &[2, 1, 0], &[3, 2, 1], 0, 6), 2);
    }

    #[test]
    fn agrees_with_determinantal_on_a_sample() {
        let cases: [(&[u32], &[u32], &[u32], u32, u32); 5] = [
            (&[3, 1, 0], &[2, 2, 1], &[3, 0, 0], 1, 6),
            (&[3, 3, 3], &[3, 3, 3], &[3, 2, 1], 2, 6),
            (&[2, 2, 0], &[3, 1, 1], &[2, 1, 0], 1, 6),
            (&[4, 2, 1], &[3, 3, 2], &[4, 4, 0], 1, 7),
            (&[3, 0, 0], &[2, 1, 0], &[3, 2, 1], 0, 7),
        ];
        for (lam, mu, nu, d, big_n) in cases {
            let det = qlr_coefficient(&p(lam), &p(mu), &p(nu), d, big_n).unwrap().coefficient;
            let hive = count(lam, mu, nu, d, big_n);
            assert_eq!(det, hive, "mismatch at {lam:?} {mu:?} {nu:?} d={d} N={big_n}");
        }
    }

    #[test]
    fn witness_validates_and_perturbations_fail() {
        let b = boundary_from_partitions(&p(&[2, 1, 0]), &p(&[2, 1, 0]), &p(&[3, 2, 1]), 0, 6)
            .unwrap();
        let (count, witness) = count_with_witness(&b).unwrap();
        assert_eq!(count, 2);
        let hive = witness.expect("nonzero count yields a witness");
        assert!(validate_dual_hive(&hive, &b).is_empty());
        assert!(check_strict_monotonicity(&hive));

        // Perturb one interior label: at least one face sum breaks.
        let interior = hive
            .labels
            .keys()
            .find(|e| {
                let boundary = e.coords.0 == 0 || e.coords.1 == 0 || e.coords.2 == 0;
                !boundary
            })
            .copied();
        if let Some(edge) = interior {
            let mut bad = hive.clone();
            *bad.labels.get_mut(&edge).unwrap() += 1;
            let violations = validate_dual_hive(&bad, &b);
            assert!(violations.iter().any(|v| v.rule == "face-sum"));
        }

        // Recolor an m edge to 3: color rule or lozenge class breaks.
        let m_edge = hive.colors.iter().find(|(_, &c)| c == EdgeColor::M).map(|(&e, _)| e);
        if let Some(edge) = m_edge {
            let mut bad = hive.clone();
            bad.colors.insert(edge, EdgeColor::C3);
            assert!(!validate_dual_hive(&bad, &b).is_empty());
        }
    }

    #[test]
    fn infeasible_boundary_counts_zero() {
        // s_{(1,1)} * s_{(1,1)} does not contain s_{(4)}.
        let z = boundary_from_partitions(&p(&[1, 1, 0]), &p(&[1, 1, 0]), &p(&[4, 0, 0]), 0, 7)
            .unwrap();
        assert_eq!(count_dual_hives(&z).unwrap(), 0);
        // Pieri: s_{(3)} * s_{(3)} contains s_{(3,3)} once.
        let one = boundary_from_partitions(&p(&[3, 0, 0]), &p(&[3, 0, 0]), &p(&[3, 3, 0]), 0, 6)
            .unwrap();
        assert_eq!(count_dual_hives(&one).unwrap(), 1);
    }

    #[test]
    fn strict_monotonicity_on_enumerated_hives() {
        // All hives of a quantum instance satisfy the derived monotonicity.
        let b = boundary_from_partitions(&p(&[13, 6, 2]), &p(&[18, 10, 5]), &p(&[20, 9, 2]), 1, 23)
            .unwrap();
        let (c, w) = count_with_witness(&b).unwrap();
        assert_eq!(c, 3);
        assert!(check_strict_monotonicity(&w.unwrap()));
    }
}
