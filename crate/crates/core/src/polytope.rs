//! The toric hive polytopes `P^g` in exact rational arithmetic: boundary
//! data from conjugacy classes, the affine chart over the free interior
//! vertices, the inequality system, exact volume by vertex enumeration and
//! recursive triangulation, Monte-Carlo volume, and the measure of a union
//! of polytopes across labelings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::grid::{hexagon_contains, hexagon_lozenges, hexagon_vertices, HexVertex};
use crate::labeling::RegularLabeling;
use crate::{Error, Rational, Result};

/// A regular conjugacy class of `U(n)`: strictly decreasing rationals in `[0,1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjClass {
    #[serde(serialize_with = "serialize_rationals")]
    pub theta: Vec<Rational>,
}

fn serialize_rationals<S: serde::Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&RationalRepr { num: r.numer().to_string(), den: r.denom().to_string() })?;
    }
    seq.end()
}

#[derive(Serialize)]
struct RationalRepr {
    num: String,
    den: String,
}

impl ConjClass {
    pub fn new(theta: Vec<Rational>) -> Result<Self> {
        let one = Rational::one();
        let zero = Rational::zero();
        if theta.is_empty() {
            return Err(Error::InvalidArgument("conjugacy class must be nonempty".into()));
        }
        if theta.iter().any(|t| t < &zero || t >= &one) {
            return Err(Error::NotRegular(format!("coordinates must lie in [0,1): {theta:?}")));
        }
        if theta.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::NotRegular(format!("coordinates must strictly decrease: {theta:?}")));
        }
        Ok(ConjClass { theta })
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn sum(&self) -> Rational {
        self.theta.iter().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.theta.iter().map(rational_to_f64).collect()
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // Good enough for the magnitudes in this crate (denominators are small).
    bigint_to_f64(num) / bigint_to_f64(den)
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    x.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

/// Quantum degree `d = sum(alpha) + sum(beta) - sum(gamma)`; errors unless it
/// is a nonnegative integer.
pub fn degree_of(alpha: &ConjClass, beta: &ConjClass, gamma: &ConjClass) -> Result<u32> {
    let d = alpha.sum() + beta.sum() - gamma.sum();
    if !d.is_integer() || d < Rational::zero() {
        return Err(Error::InvalidArgument(format!(
            "sum(alpha)+sum(beta)-sum(gamma) = {d} must be a nonnegative integer"
        )));
    }
    Ok(d.to_integer().try_into().map_err(|_| Error::InvalidArgument("degree too large".into()))?)
}

/// Boundary values of `P^g`:
/// `f^A_i = sum(beta) + alpha_1 + .. + alpha_i`,
/// `f^B_i = (d-i)^+ + beta_1 + .. + beta_i`,
/// `f^C_i = d + gamma_1 + .. + gamma_i`.
pub fn boundary_values(
    alpha: &ConjClass,
    beta: &ConjClass,
    gamma: &ConjClass,
    d: u32,
) -> Result<BTreeMap<HexVertex, Rational>> {
    let n = alpha.n();
    if beta.n() != n || gamma.n() != n {
        return Err(Error::InvalidArgument("classes must share the dimension n".into()));
    }
    if degree_of(alpha, beta, gamma)? != d {
        return Err(Error::InvalidArgument(format!("degree of the triple is not {d}")));
    }
    let n32 = n as u32;
    let mut values: BTreeMap<HexVertex, Rational> = BTreeMap::new();
    let mut insert = |v: HexVertex, val: Rational| -> Result<()> {
        if let Some(prev) = values.get(&v) {
            if *prev != val {
                return Err(Error::InvalidArgument(format!(
                    "inconsistent corner value at ({}, {})",
                    v.v1, v.v2
                )));
            }
        }
        values.insert(v, val);
        Ok(())
    };
    let mut acc_a = beta.sum();
    let mut acc_b = Rational::zero();
    let mut acc_c = Rational::from_integer(BigInt::from(d));
    for i in 0..=n32 {
        if i > 0 {
            acc_a += &alpha.theta[i as usize - 1];
            acc_b += &beta.theta[i as usize - 1];
            acc_c += &gamma.theta[i as usize - 1];
        }
        let plus = Rational::from_integer(BigInt::from(d.saturating_sub(i)));
        insert(crate::grid::boundary_vertex_a(n32, d, i), acc_a.clone())?;
        insert(crate::grid::boundary_vertex_b(n32, d, i), &plus + &acc_b)?;
        insert(crate::grid::boundary_vertex_c(n32, d, i), acc_c.clone())?;
    }
    Ok(values)
}

/// Affine form over the chart variables: `coeffs . z + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub coeffs: BTreeMap<HexVertex, Rational>,
    pub constant: Rational,
}

impl AffineForm {
    fn constant(c: Rational) -> Self {
        AffineForm { coeffs: BTreeMap::new(), constant: c }
    }

    fn variable(v: HexVertex) -> Self {
        AffineForm { coeffs: BTreeMap::from([(v, Rational::one())]), constant: Rational::zero() }
    }

    fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    fn add_scaled(&mut self, other: &AffineForm, scale: i32) {
        let s = Rational::from_integer(BigInt::from(scale));
        for (v, c) in &other.coeffs {
            let entry = self.coeffs.entry(*v).or_insert_with(Rational::zero);
            *entry += c * &s;
        }
        self.constant += &other.constant * &s;
        self.coeffs.retain(|_, c| !c.is_zero());
    }

    pub fn eval(&self, assign: &BTreeMap<HexVertex, Rational>) -> Rational {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            acc += c * &assign[v];
        }
        acc
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }
}

/// The affine chart of `P^g`: every vertex value as an affine form over the
/// free interior vertices `z_1 .. z_D`.
#[derive(Debug, Clone)]
pub struct AffineChart {
    pub free: Vec<HexVertex>,
    pub forms: BTreeMap<HexVertex, AffineForm>,
    /// Set when a redundant rigid equality fails identically: the polytope
    /// lies in a proper affine subspace of the chart and has volume zero.
    pub degenerate: bool,
}

/// Builds the chart: boundary vertices are constants, free interior vertices
/// are coordinates, and each rigid-lozenge `v4` is eliminated through
/// `f(v4) = f(v1) + f(v3) - f(v2)`.
pub fn affine_chart(
    g: &RegularLabeling,
    boundary: &BTreeMap<HexVertex, Rational>,
) -> Result<AffineChart> {
    let (n, d) = (g.n, g.d);
    let rigid = g.rigid_lozenges();
    let rigid_v4: std::collections::BTreeSet<HexVertex> =
        rigid.iter().map(|l| l.vertices[3]).collect();
    let mut free = Vec::new();
    let mut forms: BTreeMap<HexVertex, AffineForm> = BTreeMap::new();
    let mut verts = hexagon_vertices(n, d);
    verts.sort_by_key(|v| (v.v2, v.v1));
    for v in &verts {
        if let Some(c) = boundary.get(v) {
            forms.insert(*v, AffineForm::constant(c.clone()));
        } else if !rigid_v4.contains(v) {
            free.push(*v);
            forms.insert(*v, AffineForm::variable(*v));
        }
    }
    // Iterative elimination handles chains of rigid lozenges.
    let mut remaining: Vec<_> = rigid.clone();
    loop {
        let before = remaining.len();
        remaining.retain(|loz| {
            let [v1, v2, v3, v4] = loz.vertices;
            if forms.contains_key(&v4) {
                return true; // keep for the identity check below
            }
            if let (Some(f1), Some(f2), Some(f3)) = (forms.get(&v1), forms.get(&v2), forms.get(&v3))
            {
                let mut f = AffineForm::zero();
                let (f1, f2, f3) = (f1.clone(), f2.clone(), f3.clone());
                f.add_scaled(&f1, 1);
                f.add_scaled(&f3, 1);
                f.add_scaled(&f2, -1);
                forms.insert(v4, f);
                false
            } else {
                true
            }
        });
        if remaining.len() == before {
            break;
        }
    }
    if forms.len() != verts.len() {
        return Err(Error::SingularElimination(format!(
            "{} vertices remain unexpressed",
            verts.len() - forms.len()
        )));
    }
    // Every rigid equality must now hold identically; a failure means the
    // polytope sits in a proper subspace (volume zero).
    let mut degenerate = false;
    for loz in &rigid {
        let [v1, v2, v3, v4] = loz.vertices;
        let mut f = AffineForm::zero();
        f.add_scaled(&forms[&v2], 1);
        f.add_scaled(&forms[&v4], 1);
        f.add_scaled(&forms[&v1], -1);
        f.add_scaled(&forms[&v3], -1);
        if !f.is_zero() {
            degenerate = true;
        }
    }
    Ok(AffineChart { free, forms, degenerate })
}

/// How a volume was computed / what the body turned out to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BodyKind {
    Nonempty,
    Empty,
    PositiveCodim,
}

/// A dense inequality row `coeffs . z + constant >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl Row {
    fn eval(&self, z: &[Rational]) -> Rational {
        let mut acc = self.constant.clone();
        for (c, zi) in self.coeffs.iter().zip(z) {
            acc += c * zi;
        }
        acc
    }
}

/// `P^g` as an H-polytope in the chart coordinates.
#[derive(Debug, Clone)]
pub struct HPolytope {
    pub labeling_key: String,
    pub chart: AffineChart,
    pub rows: Vec<Row>,
    pub n: u32,
    pub d: u32,
}

fn form_to_row(f: &AffineForm, free: &[HexVertex]) -> Row {
    Row {
        coeffs: free
            .iter()
            .map(|v| f.coeffs.get(v).cloned().unwrap_or_else(Rational::zero))
            .collect(),
        constant: f.constant.clone(),
    }
}

/// Builds `P^g_{alpha,beta,gamma}`: one concavity row per non-rigid lozenge
/// plus the label bounds `0 <= f(v) - f(v+u) <= 1` along the three lattice
/// directions `(1,0)`, `(1,-1)`, `(0,1)`. The bounds come from the label map
/// of the underlying dual hives taking values in `[0,1]`; without them the
/// system admits spurious volume outside the support of the density.
pub fn build_polytope(
    g: &RegularLabeling,
    alpha: &ConjClass,
    beta: &ConjClass,
    gamma: &ConjClass,
) -> Result<HPolytope> {
    let d = degree_of(alpha, beta, gamma)?;
    if g.n as usize != alpha.n() || g.d != d {
        return Err(Error::InvalidArgument(format!(
            "labeling is for (n,d) = ({},{}), triple has (n,d) = ({},{})",
            g.n,
            g.d,
            alpha.n(),
            d
        )));
    }
    let boundary = boundary_values(alpha, beta, gamma, d)?;
    let chart = affine_chart(g, &boundary)?;
    let rigid: std::collections::BTreeSet<_> =
        g.rigid_lozenges().iter().map(|l| l.vertices).collect();
    let mut rows = Vec::new();
    for loz in hexagon_lozenges(g.n, g.d) {
        if rigid.contains(&loz.vertices) {
            continue;
        }
        let [v1, v2, v3, v4] = loz.vertices;
        let mut f = AffineForm::zero();
        f.add_scaled(&chart.forms[&v2], 1);
        f.add_scaled(&chart.forms[&v4], 1);
        f.add_scaled(&chart.forms[&v1], -1);
        f.add_scaled(&chart.forms[&v3], -1);
        rows.push(form_to_row(&f, &chart.free));
    }
    for v in hexagon_vertices(g.n, g.d) {
        for (u1, u2) in [(1i64, 0i64), (1, -1), (0, 1)] {
            let w = HexVertex::new(v.v1 + u1, v.v2 + u2);
            if !hexagon_contains(g.n, g.d, w) {
                continue;
            }
            let mut inc = AffineForm::zero();
            inc.add_scaled(&chart.forms[&v], 1);
            inc.add_scaled(&chart.forms[&w], -1);
            rows.push(form_to_row(&inc, &chart.free)); // f(v) - f(w) >= 0
            let mut upper = AffineForm::constant(Rational::one());
            upper.add_scaled(&inc, -1);
            rows.push(form_to_row(&upper, &chart.free)); // f(v) - f(w) <= 1
        }
    }
    Ok(HPolytope { labeling_key: g.canonical_key(), chart, rows, n: g.n, d })
}

impl HPolytope {
    pub fn dim(&self) -> usize {
        self.chart.free.len()
    }

    pub fn contains(&self, z: &[Rational]) -> bool {
        self.rows.iter().all(|r| r.eval(z) >= Rational::zero())
    }

    /// Tests whether a full vertex-value function is a member: boundary and
    /// rigid equalities via chart reproduction, inequalities via the rows.
    pub fn member_function(&self, values: &BTreeMap<HexVertex, Rational>) -> Result<bool> {
        let z: Vec<Rational> = self
            .chart
            .free
            .iter()
            .map(|v| {
                values
                    .get(v)
                    .cloned()
                    .ok_or(Error::MissingBoundaryValue(v.v1, v.v2))
            })
            .collect::<Result<_>>()?;
        let assign: BTreeMap<HexVertex, Rational> =
            self.chart.free.iter().cloned().zip(z.iter().cloned()).collect();
        for (v, form) in &self.chart.forms {
            let got = values.get(v).ok_or(Error::MissingBoundaryValue(v.v1, v.v2))?;
            if form.eval(&assign) != *got {
                return Ok(false);
            }
        }
        Ok(self.contains(&z))
    }

    /// Enumerates the vertices exactly: solutions of all `D x D` subsystems
    /// of active rows that satisfy every inequality, deduplicated.
    pub fn vertices(&self) -> Vec<Vec<Rational>> {
        enumerate_vertices(&self.rows, self.dim())
    }
}

fn solve_square(rows: &[&Row], dim: usize) -> Option<Vec<Rational>> {
    // Solve coeffs . z = -constant by Gaussian elimination.
    let mut a: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            let mut v = r.coeffs.clone();
            v.push(-r.constant.clone());
            v
        })
        .collect();
    for col in 0..dim {
        let pivot = (col..dim).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let pv = a[col][col].clone();
        for j in col..=dim {
            a[col][j] = &a[col][j] / &pv;
        }
        for r in 0..dim {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for j in col..=dim {
                    let s = &a[col][j] * &factor;
                    a[r][j] -= s;
                }
            }
        }
    }
    Some((0..dim).map(|r| a[r][dim].clone()).collect())
}

fn enumerate_vertices(rows: &[Row], dim: usize) -> Vec<Vec<Rational>> {
    if dim == 0 {
        return if rows.iter().all(|r| r.constant >= Rational::zero()) {
            vec![vec![]]
        } else {
            vec![]
        };
    }
    let mut vertices: Vec<Vec<Rational>> = Vec::new();
    let m = rows.len();
    let mut combo: Vec<usize> = (0..dim).collect();
    loop {
        let sel: Vec<&Row> = combo.iter().map(|&i| &rows[i]).collect();
        if let Some(z) = solve_square(&sel, dim) {
            if rows.iter().all(|r| r.eval(&z) >= Rational::zero()) && !vertices.contains(&z) {
                vertices.push(z);
            }
        }
        // next combination
        let mut i = dim;
        loop {
            if i == 0 {
                return vertices;
            }
            i -= 1;
            if combo[i] + 1 <= m - (dim - i) {
                combo[i] += 1;
                for j in i + 1..dim {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Affine rank of a point set (dimension of its affine hull).
fn affine_rank(points: &[Vec<Rational>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let dim = points[0].len();
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    for p in &points[1..] {
        let mut v: Vec<Rational> = p.iter().zip(&points[0]).map(|(a, b)| a - b).collect();
        for b in &basis {
            let lead = b.iter().position(|x| !x.is_zero()).unwrap();
            if !v[lead].is_zero() {
                let factor = &v[lead] / &b[lead];
                for j in 0..dim {
                    let s = &b[j] * &factor;
                    v[j] -= s;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            basis.push(v);
        }
    }
    basis.len()
}

fn det_rational(mat: &[Vec<Rational>]) -> Rational {
    let n = mat.len();
    let mut a: Vec<Vec<Rational>> = mat.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Rational::zero(),
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        let pv = a[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pv;
            for j in col..n {
                let s = &a[col][j] * &factor;
                a[r][j] -= s;
            }
        }
    }
    det
}

/// Exact volume of `conv(vertices)` (full-dimensional in `R^dim`) using the
/// row structure to walk facets recursively.
fn volume_from_vertices(rows: &[Row], vertices: &[Vec<Rational>], dim: usize) -> Rational {
    if vertices.is_empty() {
        return Rational::zero();
    }
    if dim == 0 {
        return Rational::one();
    }
    if dim == 1 {
        let mut lo = vertices[0][0].clone();
        let mut hi = vertices[0][0].clone();
        for v in vertices {
            if v[0] < lo {
                lo = v[0].clone();
            }
            if v[0] > hi {
                hi = v[0].clone();
            }
        }
        return hi - lo;
    }
    let base = &vertices[0];
    let mut total = Rational::zero();
    let mut seen_facets: Vec<Vec<usize>> = Vec::new();
    for row in rows {
        if row.eval(base).is_zero() {
            continue; // pyramids from the base vertex have no height here
        }
        let mut facet_idx: Vec<usize> = Vec::new();
        for (i, v) in vertices.iter().enumerate() {
            if row.eval(v).is_zero() {
                facet_idx.push(i);
            }
        }
        if facet_idx.len() < dim {
            continue;
        }
        if seen_facets.contains(&facet_idx) {
            continue; // duplicate supporting hyperplane
        }
        seen_facets.push(facet_idx.clone());
        let facet_pts: Vec<Vec<Rational>> = facet_idx.iter().map(|&i| vertices[i].clone()).collect();
        if affine_rank(&facet_pts) != dim - 1 {
            continue;
        }
        // Project out a coordinate carried by the facet normal.
        let drop = row.coeffs.iter().position(|c| !c.is_zero()).expect("nontrivial row");
        let project = |p: &Vec<Rational>| -> Vec<Rational> {
            p.iter().enumerate().filter(|(j, _)| *j != drop).map(|(_, x)| x.clone()).collect()
        };
        let proj_pts: Vec<Vec<Rational>> = facet_pts.iter().map(project).collect();
        // Restrict the other rows to the facet hyperplane in the projected
        // coordinates: substitute z_drop = (-const - sum_{j != drop} c_j z_j)/c_drop.
        let c_drop = row.coeffs[drop].clone();
        let mut sub_rows: Vec<Row> = Vec::new();
        for other in rows {
            if std::ptr::eq(other, row) {
                continue;
            }
            let factor = &other.coeffs[drop] / &c_drop;
            let mut coeffs = Vec::with_capacity(dim - 1);
            for j in 0..dim {
                if j == drop {
                    continue;
                }
                coeffs.push(&other.coeffs[j] - &factor * &row.coeffs[j]);
            }
            let constant = &other.constant - &factor * &row.constant;
            sub_rows.push(Row { coeffs, constant });
        }
        let simplices = triangulate(&sub_rows, &proj_pts, dim - 1);
        for simplex in simplices {
            // D-simplex (base, facet points); volume |det| / D!.
            let mat: Vec<Vec<Rational>> = simplex
                .iter()
                .map(|&i| {
                    facet_pts[i]
                        .iter()
                        .zip(base)
                        .map(|(a, b)| a - b)
                        .collect::<Vec<Rational>>()
                })
                .collect();
            total += det_rational(&mat).abs();
        }
    }
    let mut dfact = Rational::one();
    for k in 1..=dim {
        dfact *= Rational::from_integer(BigInt::from(k as i64));
    }
    total / dfact
}

/// Triangulates `conv(points)` (full-dimensional in `R^dim`) into simplices
/// given as index tuples; same facet-walking recursion as the volume.
fn triangulate(rows: &[Row], points: &[Vec<Rational>], dim: usize) -> Vec<Vec<usize>> {
    if points.is_empty() {
        return vec![];
    }
    if dim == 0 {
        return vec![vec![0]];
    }
    if dim == 1 {
        let mut lo = 0;
        let mut hi = 0;
        for (i, p) in points.iter().enumerate() {
            if p[0] < points[lo][0] {
                lo = i;
            }
            if p[0] > points[hi][0] {
                hi = i;
            }
        }
        if lo == hi {
            return vec![];
        }
        return vec![vec![lo, hi]];
    }
    let mut out = Vec::new();
    let mut seen_facets: Vec<Vec<usize>> = Vec::new();
    for row in rows {
        if row.eval(&points[0]).is_zero() {
            continue;
        }
        let mut facet_idx: Vec<usize> = Vec::new();
        for (i, p) in points.iter().enumerate() {
            if row.eval(p).is_zero() {
                facet_idx.push(i);
            }
        }
        if facet_idx.len() < dim {
            continue;
        }
        if seen_facets.contains(&facet_idx) {
            continue;
        }
        seen_facets.push(facet_idx.clone());
        let facet_pts: Vec<Vec<Rational>> = facet_idx.iter().map(|&i| points[i].clone()).collect();
        if affine_rank(&facet_pts) != dim - 1 {
            continue;
        }
        let drop = row.coeffs.iter().position(|c| !c.is_zero()).expect("nontrivial row");
        let project = |p: &Vec<Rational>| -> Vec<Rational> {
            p.iter().enumerate().filter(|(j, _)| *j != drop).map(|(_, x)| x.clone()).collect()
        };
        let proj: Vec<Vec<Rational>> = facet_pts.iter().map(project).collect();
        let c_drop = row.coeffs[drop].clone();
        let mut sub_rows: Vec<Row> = Vec::new();
        for other in rows {
            if std::ptr::eq(other, row) {
                continue;
            }
            let factor = &other.coeffs[drop] / &c_drop;
            let mut coeffs = Vec::with_capacity(dim - 1);
            for j in 0..dim {
                if j == drop {
                    continue;
                }
                coeffs.push(&other.coeffs[j] - &factor * &row.coeffs[j]);
            }
            sub_rows.push(Row { coeffs, constant: &other.constant - &factor * &row.constant });
        }
        for s in triangulate(&sub_rows, &proj, dim - 1) {
            let mut simplex: Vec<usize> = vec![0];
            simplex.extend(s.iter().map(|&i| facet_idx[i]));
            out.push(simplex);
        }
    }
    out
}

/// Exact or Monte-Carlo volume with its classification.
#[derive(Debug, Clone, Serialize)]
pub struct VolumeResult {
    pub kind: BodyKind,
    /// Exact value when computed exactly.
    #[serde(serialize_with = "serialize_rational_opt")]
    pub exact: Option<Rational>,
    /// Estimate and 99% half-width for the Monte-Carlo path.
    pub estimate: Option<(f64, f64)>,
}

fn serialize_rational_opt<S: serde::Serializer>(
    r: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        None => s.serialize_none(),
        Some(r) => {
            use serde::ser::SerializeStruct;
            let mut st = s.serialize_struct("Rational", 2)?;
            st.serialize_field("num", &r.numer().to_string())?;
            st.serialize_field("den", &r.denom().to_string())?;
            st.end()
        }
    }
}

impl VolumeResult {
    pub fn value_f64(&self) -> f64 {
        match (&self.exact, &self.estimate) {
            (Some(r), _) => rational_to_f64(r),
            (None, Some((v, _))) => *v,
            _ => 0.0,
        }
    }
}

/// Exact D-dimensional Lebesgue volume of the polytope.
pub fn volume_exact(p: &HPolytope) -> VolumeResult {
    let dim = p.dim();
    if p.chart.degenerate {
        return VolumeResult { kind: BodyKind::PositiveCodim, exact: Some(Rational::zero()), estimate: None };
    }
    let vertices = p.vertices();
    if vertices.is_empty() {
        return VolumeResult { kind: BodyKind::Empty, exact: Some(Rational::zero()), estimate: None };
    }
    if affine_rank(&vertices) < dim {
        return VolumeResult {
            kind: BodyKind::PositiveCodim,
            exact: Some(Rational::zero()),
            estimate: None,
        };
    }
    let vol = volume_from_vertices(&p.rows, &vertices, dim);
    let kind = if vol.is_zero() { BodyKind::PositiveCodim } else { BodyKind::Nonempty };
    VolumeResult { kind, exact: Some(vol), estimate: None }
}

/// Hit-or-miss Monte-Carlo volume with a 99% binomial half-width,
/// reproducible for a fixed seed. The bounding box comes from the exact
/// vertex enumeration.
pub fn volume_mc(p: &HPolytope, samples: u64, seed: u64) -> Result<VolumeResult> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let dim = p.dim();
    if p.chart.degenerate {
        return Ok(VolumeResult {
            kind: BodyKind::PositiveCodim,
            exact: None,
            estimate: Some((0.0, 0.0)),
        });
    }
    let vertices = p.vertices();
    if vertices.is_empty() {
        return Ok(VolumeResult { kind: BodyKind::Empty, exact: None, estimate: Some((0.0, 0.0)) });
    }
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for v in &vertices {
        for j in 0..dim {
            let x = rational_to_f64(&v[j]);
            lo[j] = lo[j].min(x);
            hi[j] = hi[j].max(x);
        }
    }
    let rows_f64: Vec<(Vec<f64>, f64)> = p
        .rows
        .iter()
        .map(|r| (r.coeffs.iter().map(rational_to_f64).collect(), rational_to_f64(&r.constant)))
        .collect();
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| (b - a).max(0.0)).product();
    if box_vol == 0.0 {
        return Ok(VolumeResult {
            kind: BodyKind::PositiveCodim,
            exact: None,
            estimate: Some((0.0, 0.0)),
        });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    let mut z = vec![0.0f64; dim];
    for _ in 0..samples {
        for j in 0..dim {
            z[j] = rng.random_range(lo[j]..hi[j]);
        }
        let inside = rows_f64.iter().all(|(c, k)| {
            c.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>() + k >= 0.0
        });
        if inside {
            hits += 1;
        }
    }
    let p_hat = hits as f64 / samples as f64;
    let sigma = box_vol * (p_hat * (1.0 - p_hat) / samples as f64).sqrt();
    let est = box_vol * p_hat;
    Ok(VolumeResult {
        kind: if hits > 0 { BodyKind::Nonempty } else { BodyKind::Empty },
        exact: None,
        estimate: Some((est, 2.576 * sigma)),
    })
}

/// Per-labeling volume report inside a family sum.
#[derive(Debug, Clone, Serialize)]
pub struct LabelingVolume {
    pub labeling_key: String,
    pub kind: BodyKind,
    #[serde(serialize_with = "serialize_rational_opt")]
    pub volume: Option<Rational>,
    /// True when this polytope coincides with an earlier labeling's polytope
    /// (shared rigid pattern); it then contributes nothing extra to the union.
    pub duplicate_of: Option<String>,
}

/// Total of the family `{P^g}` measured as a union: labelings sharing the
/// same affine hull are merged by inclusion-exclusion so that coinciding or
/// overlapping polytopes are not double-counted.
pub struct FamilyVolume {
    pub total: Rational,
    pub breakdown: Vec<LabelingVolume>,
}

/// Ambient embedding of a chart vertex set: exact values of all interior
/// vertices, used to compare polytopes of different labelings.
fn ambient_points(p: &HPolytope, interior: &[HexVertex]) -> Vec<Vec<Rational>> {
    p.vertices()
        .iter()
        .map(|z| {
            let assign: BTreeMap<HexVertex, Rational> =
                p.chart.free.iter().cloned().zip(z.iter().cloned()).collect();
            interior.iter().map(|v| p.chart.forms[v].eval(&assign)).collect()
        })
        .collect()
}

/// Re-expresses the rows of `q` in the chart of `p` (valid when both share
/// the same affine hull: every chart variable of `q` is a vertex of the
/// hexagon whose value `p`'s chart also expresses).
fn rows_in_chart(q: &HPolytope, p: &HPolytope) -> Vec<Row> {
    q.rows
        .iter()
        .map(|r| {
            let mut composed = AffineForm::constant(r.constant.clone());
            for (c, v) in r.coeffs.iter().zip(&q.chart.free) {
                if c.is_zero() {
                    continue;
                }
                let mut scaled = p.chart.forms[v].clone();
                for coeff in scaled.coeffs.values_mut() {
                    *coeff *= c;
                }
                scaled.constant *= c;
                for (vv, cc) in scaled.coeffs {
                    let e = composed.coeffs.entry(vv).or_insert_with(Rational::zero);
                    *e += cc;
                }
                composed.constant += scaled.constant;
            }
            composed.coeffs.retain(|_, c| !c.is_zero());
            form_to_row(&composed, &p.chart.free)
        })
        .collect()
}

/// Measures the whole family of polytopes for one `(alpha, beta, gamma)`.
pub fn family_volume(
    labelings: &[RegularLabeling],
    alpha: &ConjClass,
    beta: &ConjClass,
    gamma: &ConjClass,
) -> Result<FamilyVolume> {
    let mut polys: Vec<(HPolytope, VolumeResult)> = Vec::new();
    for g in labelings {
        let p = build_polytope(g, alpha, beta, gamma)?;
        let v = volume_exact(&p);
        polys.push((p, v));
    }
    let n = labelings.first().map(|g| g.n).unwrap_or(3);
    let d = labelings.first().map(|g| g.d).unwrap_or(0);
    let boundary: std::collections::BTreeSet<HexVertex> =
        crate::grid::hexagon_boundary(n, d).into_iter().collect();
    let interior: Vec<HexVertex> =
        hexagon_vertices(n, d).into_iter().filter(|v| !boundary.contains(v)).collect();

    let mut breakdown = Vec::new();
    let mut total = Rational::zero();
    // Group full-dimensional polytopes by the ambient affine hull of their
    // vertex sets; lower-dimensional intersections carry no volume.
    let mut groups: Vec<(Vec<Vec<Rational>>, Vec<usize>)> = Vec::new(); // (hull basis fingerprint via points), members
    for (i, (p, v)) in polys.iter().enumerate() {
        let mut duplicate_of = None;
        if v.kind == BodyKind::Nonempty {
            let pts = ambient_points(p, &interior);
            let mut placed = false;
            for (hull_pts, members) in groups.iter_mut() {
                // Same hull iff adding the new points does not raise the rank
                // and vice versa.
                let mut merged = hull_pts.clone();
                merged.extend(pts.iter().cloned());
                if affine_rank(&merged) == affine_rank(hull_pts)
                    && affine_rank(hull_pts) == affine_rank(&pts)
                {
                    // identical polytope?
                    let first = &polys[members[0]].0;
                    let mut a = ambient_points(first, &interior);
                    let mut b = pts.clone();
                    a.sort();
                    b.sort();
                    if a == b {
                        duplicate_of = Some(first.labeling_key.clone());
                    }
                    members.push(i);
                    placed = true;
                    break;
                }
            }
            if !placed {
                groups.push((pts, vec![i]));
            }
        }
        breakdown.push(LabelingVolume {
            labeling_key: p.labeling_key.clone(),
            kind: v.kind,
            volume: v.exact.clone(),
            duplicate_of,
        });
    }
    for (_, members) in &groups {
        total += union_in_group(&polys, members);
    }
    Ok(FamilyVolume { total, breakdown })
}

fn union_in_group(polys: &[(HPolytope, VolumeResult)], members: &[usize]) -> Rational {
    // Dedupe identical row systems first (cheap common case), then
    // inclusion-exclusion in the first member's chart.
    let base = &polys[members[0]].0;
    let mut systems: Vec<Vec<Row>> = Vec::new();
    for &i in members {
        let rows =
            if i == members[0] { base.rows.clone() } else { rows_in_chart(&polys[i].0, base) };
        if !systems.contains(&rows) {
            systems.push(rows);
        }
    }
    let dim = base.dim();
    let k = systems.len();
    let mut total = Rational::zero();
    for mask in 1u32..(1 << k) {
        let mut rows: Vec<Row> = Vec::new();
        for (j, sys) in systems.iter().enumerate() {
            if mask & (1 << j) != 0 {
                rows.extend(sys.iter().cloned());
            }
        }
        let verts = enumerate_vertices(&rows, dim);
        let vol = if verts.is_empty() || affine_rank(&verts) < dim {
            Rational::zero()
        } else {
            volume_from_vertices(&rows, &verts, dim)
        };
        if mask.count_ones() % 2 == 1 {
            total += vol;
        } else {
            total -= vol;
        }
    }
    total
}
