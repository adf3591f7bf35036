//! The density of the convolution of two regular conjugacy classes of
//! `U(n)`, assembled from the polytope volumes, plus the truncated character
//! series used as an independent reference, and the volume of the moduli
//! space of flat `SU(n)`-connections on the three-holed sphere.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::labeling::RegularLabeling;
use crate::linalg::CMatrix;
use crate::polytope::{degree_of, family_volume, rational_to_f64, ConjClass, LabelingVolume};
use crate::{Error, Rational, Result};

const TAU: f64 = std::f64::consts::TAU;

/// Real sine-product Vandermonde
/// `Delta(e^{2 i pi theta}) = 2^{n(n-1)/2} prod_{i<j} sin(pi (theta_i - theta_j))`,
/// positive for strictly decreasing `theta` in `[0,1)`.
pub fn delta_sine(theta: &[f64]) -> f64 {
    let n = theta.len();
    let mut prod = 2f64.powi((n * (n - 1) / 2) as i32);
    for i in 0..n {
        for j in (i + 1)..n {
            prod *= (std::f64::consts::PI * (theta[i] - theta[j])).sin();
        }
    }
    prod
}

fn complex_vandermonde(theta: &[f64]) -> Complex64 {
    let pts: Vec<Complex64> =
        theta.iter().map(|&t| Complex64::from_polar(1.0, TAU * t)).collect();
    let mut prod = Complex64::new(1.0, 0.0);
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            prod *= pts[i] - pts[j];
        }
    }
    prod
}

/// A Weyl character value together with the exact dimension of the
/// representation.
#[derive(Debug, Clone, Serialize)]
pub struct CharacterValue {
    pub value: (f64, f64),
    pub dim: u64,
}

fn shifted_weight(lambda: &[u32], n: usize) -> Vec<i64> {
    // lambda' = (lambda_1, ..., lambda_{n-1}, 0) + (n-1, ..., 0)
    (0..n)
        .map(|i| {
            let part = if i < lambda.len() { lambda[i] as i64 } else { 0 };
            part + (n - 1 - i) as i64
        })
        .collect()
}

/// Exact dimension `dim V_lambda = Delta(lambda') / sf(n-1)`.
pub fn weyl_dimension(lambda: &[u32], n: usize) -> Result<u64> {
    let lp = shifted_weight(lambda, n);
    let mut num = BigInt::from(1);
    for i in 0..n {
        for j in (i + 1)..n {
            num *= BigInt::from(lp[i] - lp[j]);
        }
    }
    let den = crate::superfactorial(n as u32 - 1);
    let (q, r) = num_integer::Integer::div_rem(&num, &den);
    if !r.is_zero() || q.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "Delta(lambda')/sf(n-1) is not a nonnegative integer for {lambda:?}"
        )));
    }
    q.to_u64().ok_or_else(|| Error::InvalidArgument("dimension overflow".into()))
}

/// Weyl character `chi_lambda(e^{2 i pi theta})` at a regular point.
pub fn weyl_character(lambda: &[u32], theta: &[f64]) -> Result<CharacterValue> {
    let n = theta.len();
    if theta.windows(2).any(|w| (w[0] - w[1]).abs() < 1e-15) {
        return Err(Error::NotRegular(format!("repeated coordinates in {theta:?}")));
    }
    let lp = shifted_weight(lambda, n);
    let num = CMatrix::from_fn(n, |r, s| Complex64::from_polar(1.0, TAU * theta[r] * lp[s] as f64))
        .det();
    let den = complex_vandermonde(theta);
    let value = num / den;
    Ok(CharacterValue { value: (value.re, value.im), dim: weyl_dimension(lambda, n)? })
}

/// Partial sum of the character series for the density, with the magnitude of
/// the last truncation shell as a convergence heuristic.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub imag_residual: f64,
    pub last_shell: f64,
    pub truncation: u32,
}

fn partitions_up_to(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; len];
    fn rec(i: usize, prev: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == current.len() {
            out.push(current.clone());
            return;
        }
        for v in (0..=prev).rev() {
            current[i] = v;
            rec(i + 1, v, current, out);
        }
    }
    rec(0, max, &mut current, &mut out);
    out
}

/// Density via the absolutely convergent character series
/// `|Delta(e^{2 i pi gamma})|^2 / ((2 pi)^{n-1} n!) *
///  sum_lambda chi(alpha) chi(beta) chi(-gamma) / dim V_lambda`,
/// truncated at `lambda_1 <= truncation`.
pub fn density_series(
    alpha: &[f64],
    beta: &[f64],
    gamma: &[f64],
    truncation: u32,
) -> Result<SeriesValue> {
    let n = alpha.len();
    for (name, t) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
        if t.len() != n || t.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::NotRegular(format!("{name} = {t:?}")));
        }
    }
    let s: f64 = alpha.iter().sum::<f64>() + beta.iter().sum::<f64>() - gamma.iter().sum::<f64>();
    if (s - s.round()).abs() > 1e-9 {
        return Err(Error::InvalidArgument(
            "sum(alpha)+sum(beta)-sum(gamma) must be an integer".into(),
        ));
    }
    let minus_gamma: Vec<f64> = gamma.iter().map(|&x| -x).collect();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut last_shell = 0.0f64;
    for lambda in partitions_up_to(n - 1, truncation) {
        let ca = weyl_character(&lambda, alpha)?;
        let cb = weyl_character(&lambda, beta)?;
        let cg = weyl_character(&lambda, &minus_gamma)?;
        let term = Complex64::new(ca.value.0, ca.value.1)
            * Complex64::new(cb.value.0, cb.value.1)
            * Complex64::new(cg.value.0, cg.value.1)
            / ca.dim as f64;
        sum += term;
        if lambda.first().copied().unwrap_or(0) == truncation {
            last_shell += term.norm();
        }
    }
    let jac = complex_vandermonde(gamma).norm_sqr() / (TAU.powi(n as i32 - 1) * factorial(n));
    let value = sum * jac;
    Ok(SeriesValue {
        value: value.re,
        imag_residual: value.im.abs(),
        last_shell: last_shell * jac,
        truncation,
    })
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// The assembled density value: prefactor times the measured family volume.
#[derive(Debug, Clone, Serialize)]
pub struct DensityValue {
    pub value: f64,
    pub prefactor: f64,
    /// Exact union volume of the polytope family.
    pub sum_volumes: String,
    pub sum_volumes_f64: f64,
    pub d: u32,
    pub breakdown: Vec<LabelingVolume>,
}

/// Density of the convolution at `gamma`, given `alpha` and `beta`:
/// `(2 pi)^D sf(n-1) Delta(e^{2 i pi gamma}) / (n! Delta(e^{2 i pi alpha})
///  Delta(e^{2 i pi beta}))` times the measure of the polytope family, with
/// every Vandermonde in the real sine-product convention.
pub fn density_main(
    alpha: &ConjClass,
    beta: &ConjClass,
    gamma: &ConjClass,
    labelings: &[RegularLabeling],
) -> Result<DensityValue> {
    let n = alpha.n();
    let d = degree_of(alpha, beta, gamma)?;
    if labelings.is_empty() || labelings[0].n as usize != n || labelings[0].d != d {
        return Err(Error::InvalidArgument(format!(
            "labeling family must match (n, d) = ({n}, {d})"
        )));
    }
    let fam = family_volume(labelings, alpha, beta, gamma)?;
    let prefactor = density_prefactor(&alpha.to_f64(), &beta.to_f64(), &gamma.to_f64());
    let total = rational_to_f64(&fam.total);
    let value = prefactor * total;
    if value < -1e-12 {
        return Err(Error::NumericalFailure {
            value: Complex64::new(value, 0.0),
            residual: value.abs(),
        });
    }
    Ok(DensityValue {
        value: value.max(0.0),
        prefactor,
        sum_volumes: fam.total.to_string(),
        sum_volumes_f64: total,
        d,
        breakdown: fam.breakdown,
    })
}

/// `(2 pi)^D prod_{k<n} k! Delta_sin(gamma) / (n! Delta_sin(alpha) Delta_sin(beta))`.
pub fn density_prefactor(alpha: &[f64], beta: &[f64], gamma: &[f64]) -> f64 {
    let n = alpha.len();
    let d_free = crate::free_dimension(n as u32);
    let sf: f64 = (1..n).map(|k| factorial(k)).product();
    TAU.powi(d_free as i32) * sf * delta_sine(gamma)
        / (factorial(n) * delta_sine(alpha) * delta_sine(beta))
}

/// Moduli-space volume of flat `SU(n)` connections on the three-holed
/// sphere; the center cardinality is reported both with the constant printed
/// in the source formula (`2^{(n+1) mod 2}`) and with the classical `#Z = n`.
#[derive(Debug, Clone, Serialize)]
pub struct ModuliVolume {
    pub value: f64,
    pub value_center_n: f64,
    pub d: u32,
    pub density_at_reflected: f64,
}

/// Volume of `M(Sigma_0^3, alpha, beta, gamma)`; zero unless
/// `sum(alpha) + sum(beta) + sum(gamma) = n + d` with the three total sums
/// integral.
pub fn moduli_volume(
    alpha: &ConjClass,
    beta: &ConjClass,
    gamma: &ConjClass,
    labelings_for: &dyn Fn(u32, u32) -> Vec<RegularLabeling>,
) -> Result<ModuliVolume> {
    let n = alpha.n();
    for (name, c) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
        if !c.sum().is_integer() {
            return Err(Error::InvalidArgument(format!("sum of {name} must be an integer")));
        }
    }
    let total = alpha.sum() + beta.sum() + gamma.sum();
    let total_int: BigInt = total.to_integer();
    let n_big = BigInt::from(n as i64);
    if total_int < n_big {
        return Ok(ModuliVolume { value: 0.0, value_center_n: 0.0, d: 0, density_at_reflected: 0.0 });
    }
    let d_int = &total_int - &n_big;
    let d: u32 = d_int
        .to_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| Error::InvalidArgument("degree out of range".into()))?;
    // gamma~ = (1 - gamma_n, ..., 1 - gamma_1); needs gamma_n > 0 to stay in [0,1).
    if gamma.theta.last().map(|x| x.is_zero()).unwrap_or(true) {
        return Err(Error::NotRegular(
            "reflection needs gamma_n > 0 to stay inside [0,1)".into(),
        ));
    }
    let reflected = ConjClass::new(
        gamma.theta.iter().rev().map(|x| Rational::from_integer(BigInt::from(1)) - x).collect(),
    )?;
    let labelings = labelings_for(n as u32, d);
    let density = density_main(alpha, beta, &reflected, &labelings)?;
    // Vol = #Z (2 pi)^{(n-1)(n-2)} / (n! Dsin(alpha) Dsin(beta) Dsin(gamma)) * sum Vol.
    let (af, bf, gf) = (alpha.to_f64(), beta.to_f64(), gamma.to_f64());
    let base = TAU.powi(((n - 1) * (n - 2)) as i32) * density.sum_volumes_f64
        / (factorial(n) * delta_sine(&af) * delta_sine(&bf) * delta_sine(&gf));
    let z_paper = if (n + 1) % 2 == 1 { 2.0 } else { 1.0 };
    Ok(ModuliVolume {
        value: z_paper * base,
        value_center_n: n as f64 * base,
        d,
        density_at_reflected: density.value,
    })
}

/// Caching provider of labeling families keyed by `(n, d)`; cheap to share
/// across parallel density evaluations.
#[derive(Default)]
pub struct LabelingProvider {
    cache: std::sync::Mutex<std::collections::HashMap<(u32, u32), std::sync::Arc<Vec<RegularLabeling>>>>,
    pub cache_dir: Option<std::path::PathBuf>,
}

impl LabelingProvider {
    pub fn new(cache_dir: Option<std::path::PathBuf>) -> Self {
        LabelingProvider { cache: Default::default(), cache_dir }
    }

    pub fn get(&self, n: u32, d: u32) -> std::sync::Arc<Vec<RegularLabeling>> {
        if let Some(hit) = self.cache.lock().unwrap().get(&(n, d)) {
            return hit.clone();
        }
        let list = std::sync::Arc::new(crate::labeling::labelings_cached(
            n,
            d,
            self.cache_dir.as_deref(),
        ));
        self.cache.lock().unwrap().insert((n, d), list.clone());
        list
    }
}

/// Density on the admissible `(gamma_1, gamma_2)` slice for `n = 3`: the
/// third coordinate is `gamma_3 = frac(sum(alpha) + sum(beta) - g1 - g2)`;
/// returns 0 outside the sorted-regular region.
pub fn slice_density(
    alpha: &ConjClass,
    beta: &ConjClass,
    g1: &Rational,
    g2: &Rational,
    provider: &LabelingProvider,
) -> Result<f64> {
    if alpha.n() != 3 {
        return Err(Error::InvalidArgument("slice density is defined for n = 3".into()));
    }
    let one = Rational::from_integer(BigInt::from(1));
    let zero = Rational::zero();
    if *g1 < zero || *g1 >= one || *g2 < zero || *g2 >= one {
        return Ok(0.0);
    }
    let s = alpha.sum() + beta.sum() - g1 - g2;
    let g3 = &s - Rational::from_integer(s.floor().to_integer());
    // sorted strictly decreasing in [0,1)
    if !(g1 > g2 && *g2 > g3) {
        return Ok(0.0);
    }
    let gamma = match ConjClass::new(vec![g1.clone(), g2.clone(), g3.clone()]) {
        Ok(g) => g,
        Err(_) => return Ok(0.0),
    };
    let d = match degree_of(alpha, beta, &gamma) {
        Ok(d) => d,
        Err(_) => return Ok(0.0),
    };
    if d > 3 {
        return Ok(0.0);
    }
    let labelings = provider.get(3, d);
    Ok(density_main(alpha, beta, &gamma, &labelings)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::enumerate_regular_labelings;
    use crate::qlr::j_volume;

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    fn fig_triple() -> (ConjClass, ConjClass, ConjClass) {
        (
            ConjClass::new(vec![rat(13, 23), rat(6, 23), rat(2, 23)]).unwrap(),
            ConjClass::new(vec![rat(18, 23), rat(10, 23), rat(5, 23)]).unwrap(),
            ConjClass::new(vec![rat(20, 23), rat(9, 23), rat(2, 23)]).unwrap(),
        )
    }

    #[test]
    fn trivial_character_is_one() {
        let theta = [0.71, 0.33, 0.12];
        let c = weyl_character(&[0, 0], &theta).unwrap();
        assert!((c.value.0 - 1.0).abs() < 1e-12);
        assert!(c.value.1.abs() < 1e-12);
        assert_eq!(c.dim, 1);
    }

    #[test]
    fn defining_representation_is_power_sum() {
        let theta = [0.63, 0.31, 0.05];
        let c = weyl_character(&[1, 0], &theta).unwrap();
        let expect: Complex64 =
            theta.iter().map(|&t| Complex64::from_polar(1.0, TAU * t)).sum();
        assert!((Complex64::new(c.value.0, c.value.1) - expect).norm() < 1e-12);
        assert_eq!(c.dim, 3);
    }

    #[test]
    fn adjoint_dimension_of_su3() {
        assert_eq!(weyl_dimension(&[2, 1], 3).unwrap(), 8);
    }

    #[test]
    fn series_matches_polytope_density() {
        let (a, b, g) = fig_triple();
        let labelings = enumerate_regular_labelings(3, 1);
        let main = density_main(&a, &b, &g, &labelings).unwrap();
        let series = density_series(&a.to_f64(), &b.to_f64(), &g.to_f64(), 40).unwrap();
        assert!(series.imag_residual < 1e-9);
        let rel = (main.value - series.value).abs() / main.value;
        assert!(rel < 1e-2, "main {} vs series {}", main.value, series.value);
    }

    #[test]
    fn series_matches_j_volume_identity() {
        // density = sf(n-1) (2 pi)^D / n! * Dsin(gamma)/(Dsin(alpha) Dsin(beta)) * J
        let (a, b, g) = fig_triple();
        let (af, bf, gf) = (a.to_f64(), b.to_f64(), g.to_f64());
        let j = j_volume(&af, &bf, &gf, 200).unwrap();
        let series = density_series(&af, &bf, &gf, 50).unwrap();
        let via_j = density_prefactor(&af, &bf, &gf) * j.value;
        assert!((series.value - via_j).abs() / via_j < 1e-2);
    }

    #[test]
    fn density_positive_on_reference_triple() {
        let (a, b, g) = fig_triple();
        let labelings = enumerate_regular_labelings(3, 1);
        let v = density_main(&a, &b, &g, &labelings).unwrap();
        assert!(v.value > 0.0);
        assert_eq!(v.d, 1);
        assert_eq!(v.sum_volumes, "2/23");
    }

    #[test]
    fn density_zero_outside_support() {
        let a = ConjClass::new(vec![rat(9, 12), rat(8, 12), rat(1, 12)]).unwrap();
        let b = ConjClass::new(vec![rat(10, 12), rat(5, 12), rat(0, 12)]).unwrap();
        let g = ConjClass::new(vec![rat(11, 12), rat(6, 12), rat(4, 12)]).unwrap();
        let labelings = enumerate_regular_labelings(3, 1);
        let v = density_main(&a, &b, &g, &labelings).unwrap();
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn density_translation_invariance() {
        // density(gamma + 2r | alpha + r, beta + r) = density(gamma | alpha, beta)
        let (a, b, g) = fig_triple();
        let labelings = enumerate_regular_labelings(3, 1);
        let v0 = density_main(&a, &b, &g, &labelings).unwrap();
        let r = rat(1, 23);
        let shift = |c: &ConjClass, times: i64| {
            ConjClass::new(c.theta.iter().map(|x| x + &r * rat(times, 1)).collect()).unwrap()
        };
        let v1 = density_main(&shift(&a, 1), &shift(&b, 1), &shift(&g, 2), &labelings).unwrap();
        assert!((v0.value - v1.value).abs() < 1e-9 * v0.value);
    }

    #[test]
    fn two_vandermonde_conventions_agree_in_modulus() {
        let theta = [0.67, 0.41, 0.20];
        let complex = complex_vandermonde(&theta).norm();
        let sine = delta_sine(&theta).abs();
        assert!((complex - sine).abs() < 1e-12);
    }

    #[test]
    fn moduli_volume_composition() {
        // integral sums: alpha, beta, gamma with sums 1, 1, 2 -> n + d = 4, d = 1.
        let a = ConjClass::new(vec![rat(13, 23), rat(8, 23), rat(2, 23)]).unwrap();
        let b = ConjClass::new(vec![rat(14, 23), rat(6, 23), rat(3, 23)]).unwrap();
        let g = ConjClass::new(vec![rat(21, 23), rat(15, 23), rat(10, 23)]).unwrap();
        assert!(a.sum().is_integer() && b.sum().is_integer() && g.sum().is_integer());
        let labelings_for =
            |n: u32, d: u32| enumerate_regular_labelings(n, d);
        let m = moduli_volume(&a, &b, &g, &labelings_for).unwrap();
        assert_eq!(m.d, 1);
        assert!(m.value.is_finite() && m.value >= 0.0);
        // paper constant for n = 3: 2^{(n+1) mod 2} = 2^0 = 1; classical #Z = 3.
        assert!((m.value_center_n - 3.0 * m.value).abs() < 1e-12 * m.value_center_n.abs().max(1.0));
        // reflection consistency: value is the stated multiple of the density
        // at the reflected class.
        let n = 3usize;
        let (af, bf, gf) = (a.to_f64(), b.to_f64(), g.to_f64());
        let vol_sun = TAU.powi((n * (n + 1) / 2 - 1) as i32)
            / (1..=n).map(|k| factorial(k)).product::<f64>();
        let multiple = 1.0 * vol_sun * TAU.powi(n as i32 - 1) * factorial(n)
            / (TAU.powi(3 * (n as i32 - 1)) * delta_sine(&gf).powi(2));
        let _ = (af, bf);
        assert!(
            (m.value - multiple * m.density_at_reflected).abs()
                < 1e-9 * m.value.abs().max(1e-12)
        );
    }

    #[test]
    fn moduli_zero_when_degree_impossible() {
        // sums 1 + 1 + 0 = 2 < n = 3: volume must be zero.
        let a = ConjClass::new(vec![rat(13, 23), rat(8, 23), rat(2, 23)]).unwrap();
        let b = ConjClass::new(vec![rat(14, 23), rat(6, 23), rat(3, 23)]).unwrap();
        let g = ConjClass::new(vec![rat(0, 1), rat(0, 1), rat(0, 1)]);
        // gamma must be strictly decreasing; use a non-integral test instead:
        assert!(g.is_err());
        let g = ConjClass::new(vec![rat(12, 23), rat(7, 23), rat(4, 23)]).unwrap();
        // sum(gamma) = 1 exactly? 12+7+4 = 23 -> yes, sum = 1. Total = 3 = n -> d = 0.
        let labelings_for = |n: u32, d: u32| enumerate_regular_labelings(n, d);
        let m = moduli_volume(&a, &b, &g, &labelings_for).unwrap();
        assert_eq!(m.d, 0);
    }
}
