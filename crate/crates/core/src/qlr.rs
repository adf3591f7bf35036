//! Quantum Littlewood-Richardson coefficients via the determinantal sum over
//! roots of unity, the translation-orbit decomposition that accelerates it,
//! and the convergent series for the volume function `J`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::CMatrix;
use crate::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// A partition inside the `(n, N-n)` frame.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    pub parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!(
                "partition parts must be weakly decreasing, got {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn weight(&self) -> i64 {
        self.parts.iter().map(|&p| p as i64).sum()
    }

    pub fn check_frame(&self, big_n: u32) -> Result<()> {
        let max = big_n as i64 - self.n() as i64;
        if let Some(&p) = self.parts.first() {
            if (p as i64) > max {
                return Err(Error::FrameViolation { part: p as i64, max });
            }
        }
        Ok(())
    }

    /// `lambda' = lambda + rho` with `rho = (n-1, ..., 1, 0)`.
    pub fn shifted(&self) -> Vec<i64> {
        let n = self.n();
        self.parts.iter().enumerate().map(|(i, &p)| p as i64 + (n - 1 - i) as i64).collect()
    }
}

/// Checks the quantum degree constraint `|lambda| + |mu| = |nu| + N d`.
pub fn check_degree(lambda: &Partition, mu: &Partition, nu: &Partition, d: u32, big_n: u32) -> Result<()> {
    let lhs = lambda.weight() + mu.weight();
    let rhs = nu.weight() + (big_n as i64) * (d as i64);
    if lhs != rhs {
        return Err(Error::DegreeMismatch { lhs, rhs });
    }
    Ok(())
}

/// A strictly decreasing index tuple with `I_n = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexTuple(pub Vec<u32>);

/// Orbit data of an index tuple under the translation action `I -> I + 1 [N]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrbitInfo {
    pub is_min: bool,
    pub orbit_size: u32,
}

/// Computes the orbit of `I` under coordinate-wise translation mod `N`
/// (sorting decreasingly after each shift).
pub fn orbit_info(index: &IndexTuple, big_n: u32) -> OrbitInfo {
    let i0 = &index.0;
    debug_assert_eq!(*i0.last().unwrap(), 0, "index tuple must end with 0");
    let n = i0.len();
    let mut seen: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
    let mut shifted = vec![0u32; n];
    for l in 0..big_n {
        for (dst, &src) in shifted.iter_mut().zip(i0.iter()) {
            *dst = (src + l) % big_n;
        }
        shifted.sort_unstable_by(|a, b| b.cmp(a));
        seen.insert(shifted.clone());
    }
    // BTreeSet orders lexicographically ascending; the minimum is the first.
    let is_min = seen.iter().next().map(|m| m == i0).unwrap_or(false);
    let info = OrbitInfo { is_min, orbit_size: seen.len() as u32 };
    // Sanity bound: the lexicographic minimum keeps I_1/N <= 1 - 1/n for N >= n.
    if is_min && big_n >= n as u32 {
        debug_assert!(i0[0] as f64 / big_n as f64 <= 1.0 - 1.0 / n as f64 + 1e-12);
    }
    info
}

fn det_exp(theta: &[f64], index: &[i64], sign: f64) -> Complex64 {
    let n = theta.len();
    CMatrix::from_fn(n, |r, s| Complex64::from_polar(1.0, sign * TAU * theta[r] * index[s] as f64))
        .det()
}

/// Complex Vandermonde of the root-of-unity points `xi^{I_r}`.
fn vandermonde_xi(index: &[u32], big_n: u32) -> Complex64 {
    let pts: Vec<Complex64> =
        index.iter().map(|&i| Complex64::from_polar(1.0, TAU * i as f64 / big_n as f64)).collect();
    let mut prod = Complex64::new(1.0, 0.0);
    for r in 0..pts.len() {
        for s in (r + 1)..pts.len() {
            prod *= pts[r] - pts[s];
        }
    }
    prod
}

/// The summand `F(I, lambda, mu, nu, N)`: three exponential determinants over
/// the Vandermonde of `xi^I`. Invariant under `I -> I + a`.
pub fn qlr_f(
    index: &IndexTuple,
    lambda: &Partition,
    mu: &Partition,
    nu: &Partition,
    big_n: u32,
) -> Result<Complex64> {
    let i0 = &index.0;
    let n = lambda.n();
    if i0.len() != n {
        return Err(Error::InvalidArgument("index tuple length must equal n".into()));
    }
    for w in i0.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidArgument(
                "repeated entries in index tuple give a vanishing Vandermonde".into(),
            ));
        }
    }
    let theta: Vec<f64> = i0.iter().map(|&i| i as f64 / big_n as f64).collect();
    let num = det_exp(&theta, &lambda.shifted(), 1.0)
        * det_exp(&theta, &mu.shifted(), 1.0)
        * det_exp(&theta, &nu.shifted(), -1.0);
    Ok(num / vandermonde_xi(i0, big_n))
}

/// Raw complex value of the determinantal sum `N^{-n} sum_I |orbit| F(I)`.
pub fn qlr_raw(
    lambda: &Partition,
    mu: &Partition,
    nu: &Partition,
    d: u32,
    big_n: u32,
) -> Result<Complex64> {
    let n = lambda.n();
    if mu.n() != n || nu.n() != n {
        return Err(Error::InvalidArgument("partitions must share the same length".into()));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("partitions must have length at least 2".into()));
    }
    check_degree(lambda, mu, nu, d, big_n)?;
    for p in [lambda, mu, nu] {
        p.check_frame(big_n)?;
    }
    // Enumerate orbit-minimal I with I_n = 0, grouped by I_1 for a
    // deterministic parallel reduction.
    let blocks: Vec<Complex64> = (1..big_n)
        .into_par_iter()
        .map(|i1| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut stack = vec![vec![i1]];
            while let Some(prefix) = stack.pop() {
                if prefix.len() == n - 1 {
                    let mut idx = prefix.clone();
                    idx.push(0);
                    let tuple = IndexTuple(idx);
                    let info = orbit_info(&tuple, big_n);
                    if info.is_min {
                        let f = qlr_f(&tuple, lambda, mu, nu, big_n).expect("distinct indices");
                        acc += f * info.orbit_size as f64;
                    }
                } else {
                    let last = *prefix.last().unwrap();
                    for next in 1..last {
                        let mut p = prefix.clone();
                        p.push(next);
                        stack.push(p);
                    }
                }
            }
            acc
        })
        .collect();
    let total: Complex64 = blocks.into_iter().sum();
    Ok(total / (big_n as f64).powi(n as i32))
}

/// Rounding residual accepted from the floating determinantal sum.
pub const QLR_RESIDUAL_TOL: f64 = 1e-6;

/// Outcome of the determinantal evaluation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QlrValue {
    pub coefficient: u64,
    pub residual: f64,
}

/// The quantum Littlewood-Richardson coefficient `c_{lambda,mu}^{nu,d}` on
/// `Gr(n, N)`, rounded from the determinantal sum with a residual check.
pub fn qlr_coefficient(
    lambda: &Partition,
    mu: &Partition,
    nu: &Partition,
    d: u32,
    big_n: u32,
) -> Result<QlrValue> {
    let raw = qlr_raw(lambda, mu, nu, d, big_n)?;
    let rounded = raw.re.round();
    let residual = ((raw.re - rounded).powi(2) + raw.im.powi(2)).sqrt();
    if residual >= QLR_RESIDUAL_TOL || rounded < -0.5 {
        return Err(Error::NumericalFailure { value: raw, residual });
    }
    Ok(QlrValue { coefficient: rounded as u64, residual })
}

/// Result of a truncated `J` evaluation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct JVolume {
    pub value: f64,
    pub tail_bound: f64,
    pub imag_residual: f64,
    pub i_max: u32,
}

fn assert_regular_point(theta: &[f64], name: &str) -> Result<()> {
    if theta.windows(2).any(|w| w[0] <= w[1]) || theta.iter().any(|&t| !(0.0..1.0).contains(&t)) {
        return Err(Error::NotRegular(format!("{name} = {theta:?}")));
    }
    Ok(())
}

/// Hadamard-style majorant of a single `J` term divided by `Delta(I)`; the
/// sum over `I_1 > M` is controlled by `2 (ln M + 2) / M` for n = 3, and each
/// extra index contributes at most `pi^2/6` by the telescoping bound.
pub fn j_tail_bound(n: usize, i_max: u32) -> f64 {
    let m = i_max as f64;
    let dets = (n as f64).powf(1.5 * n as f64);
    let base = 2.0 * (m.ln() + 2.0) / m;
    let extra = (std::f64::consts::PI.powi(2) / 6.0).powi(n.saturating_sub(3) as i32);
    dets * base * extra / TAU.powi((n * (n - 1) / 2) as i32)
}

/// Partial sum of the volume-function series
/// `J = i^{-n(n-1)/2} (2 pi)^{-n(n-1)/2} sum_I Delta(I)^{-1} det det det`
/// over strictly decreasing `I` with `I_n = 0` and `I_1 <= i_max`.
///
/// The phase in front makes the limit real; the imaginary residual after the
/// phase correction must stay below 1e-9 (relative).
pub fn j_volume(alpha: &[f64], beta: &[f64], gamma: &[f64], i_max: u32) -> Result<JVolume> {
    let n = alpha.len();
    if beta.len() != n || gamma.len() != n {
        return Err(Error::InvalidArgument("alpha, beta, gamma must share length".into()));
    }
    assert_regular_point(alpha, "alpha")?;
    assert_regular_point(beta, "beta")?;
    assert_regular_point(gamma, "gamma")?;
    let s: f64 = alpha.iter().sum::<f64>() + beta.iter().sum::<f64>() - gamma.iter().sum::<f64>();
    if (s - s.round()).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "sum(alpha)+sum(beta)-sum(gamma) = {s} is not an integer"
        )));
    }

    // Deterministic parallel reduction, blocked by I_1.
    let blocks: Vec<Complex64> = (1..=i_max)
        .into_par_iter()
        .map(|i1| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut stack: Vec<Vec<u32>> = vec![vec![i1]];
            while let Some(prefix) = stack.pop() {
                if prefix.len() == n - 1 {
                    let mut idx: Vec<i64> = prefix.iter().map(|&x| x as i64).collect();
                    idx.push(0);
                    let mut vander = 1.0f64;
                    for r in 0..n {
                        for s in (r + 1)..n {
                            vander *= (idx[r] - idx[s]) as f64;
                        }
                    }
                    let term = det_exp(alpha, &idx, 1.0) * det_exp(beta, &idx, 1.0)
                        / vander
                        * det_exp(gamma, &idx, -1.0);
                    acc += term;
                } else {
                    let last = *prefix.last().unwrap();
                    for next in 1..last {
                        let mut p = prefix.clone();
                        p.push(next);
                        stack.push(p);
                    }
                }
            }
            acc
        })
        .collect();
    let raw: Complex64 = blocks.into_iter().sum();
    let m = n * (n - 1) / 2;
    // i^{-m}: the phase dropped when replacing Delta(xi^I) ~ (2 i pi / N)^m Delta(I).
    let phase = Complex64::from_polar(1.0, -(m as f64) * std::f64::consts::FRAC_PI_2);
    let corrected = raw * phase / TAU.powi(m as i32);
    let imag_residual = corrected.im.abs();
    if imag_residual > 1e-9 * corrected.re.abs().max(1.0) {
        return Err(Error::NumericalFailure { value: corrected, residual: imag_residual });
    }
    Ok(JVolume {
        value: corrected.re,
        tail_bound: j_tail_bound(n, i_max),
        imag_residual,
        i_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn classical_lr_values() {
        // c_{(1),(1,1)}^{(2,1)} = 1 and c_{(2,1),(2,1)}^{(3,2,1)} = 2 at d=0.
        let v = qlr_coefficient(&p(&[1, 0, 0]), &p(&[1, 1, 0]), &p(&[2, 1, 0]), 0, 6).unwrap();
        assert_eq!(v.coefficient, 1);
        let v = qlr_coefficient(&p(&[2, 1, 0]), &p(&[2, 1, 0]), &p(&[3, 2, 1]), 0, 6).unwrap();
        assert_eq!(v.coefficient, 2);
        assert!(v.residual < QLR_RESIDUAL_TOL);
    }

    #[test]
    fn quantum_value() {
        // |lambda|+|mu| = 18 = |nu| + 6*2 with nu = (3,2,1).
        let v = qlr_coefficient(&p(&[3, 3, 3]), &p(&[3, 3, 3]), &p(&[3, 2, 1]), 2, 6).unwrap();
        // cross-checked against the dual-hive count in the integration tests
        assert!(v.residual < QLR_RESIDUAL_TOL);
    }

    #[test]
    fn degree_mismatch_rejected() {
        let err = qlr_coefficient(&p(&[3, 3, 3]), &p(&[3, 3, 3]), &p(&[3, 3, 3]), 1, 6);
        assert!(matches!(err, Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn frame_violation_rejected() {
        let err = qlr_coefficient(&p(&[4, 1, 0]), &p(&[2, 1, 0]), &p(&[3, 3, 2]), 0, 6);
        assert!(matches!(err, Err(Error::FrameViolation { .. })));
    }

    #[test]
    fn f_translation_invariance() {
        let (lam, mu, nu) = (p(&[2, 1, 0]), p(&[2, 1, 0]), p(&[3, 2, 1]));
        let big_n = 7;
        let base = IndexTuple(vec![4, 2, 0]);
        let f0 = qlr_f(&base, &lam, &mu, &nu, big_n).unwrap();
        let f1 = qlr_f(&IndexTuple(vec![5, 3, 1]), &lam, &mu, &nu, big_n).unwrap();
        assert!((f0 - f1).norm() < 1e-12 * (1.0 + f0.norm()));
    }

    #[test]
    fn f_zero_partitions_is_nonnegative_real() {
        let zero = p(&[0, 0, 0]);
        let f = qlr_f(&IndexTuple(vec![4, 2, 0]), &zero, &zero, &zero, 6).unwrap();
        // |Delta(xi^I)|^2 is real positive.
        assert!(f.im.abs() < 1e-12);
        assert!(f.re > 0.0);
    }

    #[test]
    fn f_rejects_repeated_indices() {
        let zero = p(&[0, 0, 0]);
        assert!(qlr_f(&IndexTuple(vec![4, 4, 0]), &zero, &zero, &zero, 6).is_err());
    }

    #[test]
    fn orbit_of_full_spread() {
        // (2,1,0) at N=3 is fixed by the shift: orbit size 1.
        let info = orbit_info(&IndexTuple(vec![2, 1, 0]), 3);
        assert_eq!(info.orbit_size, 1);
        assert!(info.is_min);
    }

    #[test]
    fn orbit_large_n_is_free() {
        // For N > 2 I_1 the orbit has size N and I is minimal.
        let idx = IndexTuple(vec![3, 1, 0]);
        let info = orbit_info(&idx, 8);
        assert_eq!(info.orbit_size, 8);
        assert!(info.is_min);
    }

    #[test]
    fn orbit_size_divides_group_order() {
        for big_n in [4u32, 6, 9, 12] {
            for i1 in 2..big_n {
                for i2 in 1..i1 {
                    let info = orbit_info(&IndexTuple(vec![i1, i2, 0]), big_n);
                    assert_eq!(big_n % info.orbit_size, 0, "orbit size divides N");
                }
            }
        }
    }

    #[test]
    fn j_volume_reference_triple() {
        let a = [13.0 / 23.0, 6.0 / 23.0, 2.0 / 23.0];
        let b = [18.0 / 23.0, 10.0 / 23.0, 5.0 / 23.0];
        let g = [20.0 / 23.0, 9.0 / 23.0, 2.0 / 23.0];
        let j = j_volume(&a, &b, &g, 200).unwrap();
        // Converges to sum of polytope volumes 2/23.
        assert!((j.value - 2.0 / 23.0).abs() < 2e-3, "J = {}", j.value);
        assert!(j.imag_residual < 1e-9);
    }

    #[test]
    fn j_volume_cauchy_within_tail_bound() {
        let a = [13.0 / 23.0, 6.0 / 23.0, 2.0 / 23.0];
        let b = [18.0 / 23.0, 10.0 / 23.0, 5.0 / 23.0];
        let g = [20.0 / 23.0, 9.0 / 23.0, 2.0 / 23.0];
        let j1 = j_volume(&a, &b, &g, 60).unwrap();
        let j2 = j_volume(&a, &b, &g, 120).unwrap();
        assert!((j2.value - j1.value).abs() <= j1.tail_bound);
    }

    #[test]
    fn j_volume_translation_covariance() {
        // Shifting all three inputs compatibly leaves J unchanged:
        // gamma shifts by 2r when alpha and beta shift by r.
        let a = [0.71, 0.32, 0.11];
        let b = [0.65, 0.44, 0.12];
        // sum(a) + sum(b) = 2.35; pick gamma with sum 1.35 so d = 1.
        let g = [0.83, 0.42, 0.10];
        let j0 = j_volume(&a, &b, &g, 80).unwrap();
        let r = 0.05;
        let a2: Vec<f64> = a.iter().map(|x| x + r).collect();
        let b2: Vec<f64> = b.iter().map(|x| x + r).collect();
        let g2: Vec<f64> = g.iter().map(|x| x + 2.0 * r).collect();
        let j1 = j_volume(&a2, &b2, &g2, 80).unwrap();
        assert!((j0.value - j1.value).abs() < 1e-9 * (1.0 + j0.value.abs()));
    }

    #[test]
    fn j_volume_rejects_non_regular() {
        let a = [0.5, 0.5, 0.1];
        let b = [0.6, 0.4, 0.2];
        let g = [0.9, 0.7, 0.2];
        assert!(matches!(j_volume(&a, &b, &g, 40), Err(Error::NotRegular(_))));
    }
}
