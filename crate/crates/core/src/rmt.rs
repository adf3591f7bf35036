//! Monte-Carlo ground truth: spectra of products of uniformly conjugated
//! unitaries, and the histogram comparison against a predicted density.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::CMatrix;
use crate::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// One sorted spectrum sample of the product, as angles in `[0,1)^n`.
pub type SpectrumSample = Vec<f64>;

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// R-diagonal phase normalization (plain QR of a Gaussian is not Haar).
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    let mut g = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = Complex64::new(standard_normal(rng), standard_normal(rng));
        }
    }
    g.qr_q()
}

fn standard_normal(rng: &mut impl Rng) -> f64 {
    // Box-Muller; two independent uniforms per call keeps this simple.
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

fn conjugated_diagonal(theta: &[f64], u: &CMatrix) -> CMatrix {
    let n = theta.len();
    let d = CMatrix::from_fn(n, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, TAU * theta[i])
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    u.mul(&d).mul(&u.adjoint())
}

/// Draws the sorted eigenvalue angles of `U diag(e^{2 i pi alpha}) U* .
/// V diag(e^{2 i pi beta}) V*` for independent Haar `U, V`.
///
/// Sampling is split into chunks with per-chunk derived ChaCha streams, so a
/// fixed seed reproduces the same sample set at any thread count.
pub fn sample_spectrum(
    alpha: &[f64],
    beta: &[f64],
    count: usize,
    seed: u64,
) -> Result<Vec<SpectrumSample>> {
    let n = alpha.len();
    if beta.len() != n {
        return Err(Error::InvalidArgument("alpha and beta must share length".into()));
    }
    for (name, t) in [("alpha", alpha), ("beta", beta)] {
        if t.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::NotRegular(format!("{name} = {t:?}")));
        }
    }
    const CHUNK: usize = 4096;
    let chunks = count.div_ceil(CHUNK);
    let samples: Vec<SpectrumSample> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|chunk| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64 + 1);
            let take = CHUNK.min(count - chunk * CHUNK);
            let mut out = Vec::with_capacity(take);
            for _ in 0..take {
                let u = haar_unitary(n, &mut rng);
                let v = haar_unitary(n, &mut rng);
                let prod = conjugated_diagonal(alpha, &u).mul(&conjugated_diagonal(beta, &v));
                let mut angles: Vec<f64> = prod
                    .eigenvalues()
                    .iter()
                    .map(|e| (e.arg() / TAU).rem_euclid(1.0))
                    .collect();
                angles.sort_by(|a, b| b.partial_cmp(a).unwrap());
                out.push(angles);
            }
            out
        })
        .collect();
    Ok(samples)
}

/// Histogram comparison of samples against a predicted density on the
/// `(gamma_1, gamma_2)` slice.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub grid: usize,
    pub count: usize,
    pub empirical: Vec<f64>,
    pub predicted: Vec<f64>,
    /// Largest per-cell discrepancy in units of the binomial standard
    /// deviation of that cell.
    pub sup_discrepancy_sigmas: f64,
    pub chi2: f64,
    pub chi2_cells: usize,
    /// Samples falling in cells whose predicted density vanishes on the cell
    /// and all its neighbours.
    pub zero_cell_samples: usize,
    pub total_predicted_mass: f64,
}

/// Bins samples by `(gamma_1, gamma_2)` on a `grid x grid` lattice over
/// `[0,1)^2` and integrates `density` by the midpoint rule per cell.
///
/// `density(g1, g2)` must return the slice density at that point (zero
/// outside the admissible region).
pub fn compare(
    samples: &[SpectrumSample],
    density: &(dyn Fn(f64, f64) -> f64 + Sync),
    grid: usize,
) -> Result<ComparisonReport> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples to compare".into()));
    }
    if grid == 0 {
        return Err(Error::InvalidArgument("grid must be positive".into()));
    }
    let count = samples.len();
    let mut hits = vec![0u64; grid * grid];
    for s in samples {
        let (g1, g2) = (s[0], s[1]);
        let i = ((g1 * grid as f64) as usize).min(grid - 1);
        let j = ((g2 * grid as f64) as usize).min(grid - 1);
        hits[i * grid + j] += 1;
    }
    let cell_area = 1.0 / (grid * grid) as f64;
    let predicted: Vec<f64> = (0..grid * grid)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / grid, idx % grid);
            let g1 = (i as f64 + 0.5) / grid as f64;
            let g2 = (j as f64 + 0.5) / grid as f64;
            density(g1, g2) * cell_area
        })
        .collect();
    let empirical: Vec<f64> = hits.iter().map(|&h| h as f64 / count as f64).collect();

    let mut sup_sigmas = 0.0f64;
    let mut chi2 = 0.0f64;
    let mut chi2_cells = 0usize;
    for idx in 0..grid * grid {
        let p = predicted[idx].clamp(0.0, 1.0);
        let sigma = (p * (1.0 - p) / count as f64).sqrt();
        if sigma > 0.0 {
            let dev = (empirical[idx] - p).abs() / sigma;
            sup_sigmas = sup_sigmas.max(dev);
        }
        if p * count as f64 >= 5.0 {
            let expect = p * count as f64;
            chi2 += (hits[idx] as f64 - expect).powi(2) / expect;
            chi2_cells += 1;
        }
    }
    // zero-density cells: no samples allowed when the whole neighbourhood of
    // the cell is predicted zero (boundary leakage excluded this way).
    let mut zero_cell_samples = 0usize;
    for i in 0..grid {
        for j in 0..grid {
            let idx = i * grid + j;
            if predicted[idx] > 0.0 {
                continue;
            }
            let mut interior_zero = true;
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if (0..grid as i64).contains(&ni) && (0..grid as i64).contains(&nj) {
                        if predicted[ni as usize * grid + nj as usize] > 0.0 {
                            interior_zero = false;
                        }
                    }
                }
            }
            if interior_zero {
                zero_cell_samples += hits[idx] as usize;
            }
        }
    }
    Ok(ComparisonReport {
        grid,
        count,
        total_predicted_mass: predicted.iter().sum(),
        empirical,
        predicted,
        sup_discrepancy_sigmas: sup_sigmas,
        chi2,
        chi2_cells,
        zero_cell_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_first_entry_moments() {
        // E|U_11|^2 = 1/n and E U_11 = 0 for Haar measure.
        let n = 3;
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let trials = 20_000;
        let mut second = 0.0;
        let mut first = Complex64::new(0.0, 0.0);
        for _ in 0..trials {
            let u = haar_unitary(n, &mut rng);
            second += u[(0, 0)].norm_sqr();
            first += u[(0, 0)];
        }
        second /= trials as f64;
        first /= trials as f64;
        let sigma = 3.0 / (trials as f64).sqrt();
        assert!((second - 1.0 / n as f64).abs() < sigma, "E|U11|^2 = {second}");
        assert!(first.norm() < sigma, "E U11 = {first}");
    }

    #[test]
    fn determinant_conservation() {
        // sum of angles mod 1 equals sum(alpha) + sum(beta) mod 1.
        let alpha = [0.63, 0.31, 0.06];
        let beta = [0.52, 0.24, 0.11];
        let samples = sample_spectrum(&alpha, &beta, 200, 5).unwrap();
        let want = (alpha.iter().sum::<f64>() + beta.iter().sum::<f64>()).rem_euclid(1.0);
        for s in &samples {
            let got = s.iter().sum::<f64>().rem_euclid(1.0);
            let diff = (got - want).abs().min(1.0 - (got - want).abs());
            assert!(diff < 1e-9, "sum {got} vs {want}");
        }
    }

    #[test]
    fn near_central_classes_concentrate() {
        // alpha, beta near multiples of the identity: spectrum concentrates
        // near the sum of centers.
        let t = 1e-4;
        let alpha = [0.3 + 2.0 * t, 0.3 + t, 0.3];
        let beta = [0.2 + 2.0 * t, 0.2 + t, 0.2];
        let samples = sample_spectrum(&alpha, &beta, 50, 9).unwrap();
        for s in &samples {
            for &x in s {
                let diff = (x - 0.5).abs().min(1.0 - (x - 0.5).abs());
                assert!(diff < 0.01, "angle {x} far from 0.5");
            }
        }
    }

    #[test]
    fn sampling_is_reproducible_and_chunk_stable() {
        let alpha = [0.63, 0.31, 0.06];
        let beta = [0.52, 0.24, 0.11];
        let s1 = sample_spectrum(&alpha, &beta, 300, 42).unwrap();
        let s2 = sample_spectrum(&alpha, &beta, 300, 42).unwrap();
        assert_eq!(s1.len(), s2.len());
        for (a, b) in s1.iter().zip(&s2) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn compare_self_histogram_is_exact() {
        // Comparing samples against their own histogram gives zero
        // discrepancy when the predicted function is the histogram itself.
        let alpha = [0.63, 0.31, 0.06];
        let beta = [0.52, 0.24, 0.11];
        let samples = sample_spectrum(&alpha, &beta, 2000, 3).unwrap();
        let grid = 10usize;
        let mut hist = vec![0.0f64; grid * grid];
        for s in &samples {
            let i = ((s[0] * grid as f64) as usize).min(grid - 1);
            let j = ((s[1] * grid as f64) as usize).min(grid - 1);
            hist[i * grid + j] += 1.0 / samples.len() as f64;
        }
        let cell_area = 1.0 / (grid * grid) as f64;
        let density = move |g1: f64, g2: f64| {
            let i = ((g1 * grid as f64) as usize).min(grid - 1);
            let j = ((g2 * grid as f64) as usize).min(grid - 1);
            hist[i * grid + j] / cell_area
        };
        let report = compare(&samples, &density, grid).unwrap();
        assert!(report.sup_discrepancy_sigmas < 1e-9);
        assert!((report.total_predicted_mass - 1.0).abs() < 1e-9);
        assert_eq!(report.zero_cell_samples, 0);
    }

    #[test]
    fn compare_rejects_empty() {
        let density = |_: f64, _: f64| 0.0;
        assert!(compare(&[], &density, 10).is_err());
    }
}
