//! Small dense complex linear algebra: determinants by partial-pivot
//! elimination, Householder QR, and eigenvalues via Hessenberg reduction
//! followed by shifted QR iteration. Sized for the n <= 10 matrices this
//! crate works with; no external BLAS.

use num_complex::Complex64;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let (pivot, _) = (col..n)
                .map(|r| (r, a[r * n + col].norm_sqr()))
                .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
                .unwrap();
            let pv = a[pivot * n + col];
            if pv.norm_sqr() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            det *= pv;
            for r in (col + 1)..n {
                let factor = a[r * n + col] / pv;
                if factor.norm_sqr() == 0.0 {
                    continue;
                }
                for j in col..n {
                    let s = a[col * n + j];
                    a[r * n + j] -= factor * s;
                }
            }
        }
        det
    }

    /// Householder QR; returns `Q` with `Q R = self` and `Q` unitary.
    pub fn qr_q(&self) -> CMatrix {
        let n = self.n;
        let mut r = self.clone();
        let mut q = CMatrix::identity(n);
        for k in 0..n.saturating_sub(1) {
            // Householder vector for column k below the diagonal.
            let mut norm2 = 0.0;
            for i in k..n {
                norm2 += r[(i, k)].norm_sqr();
            }
            let norm = norm2.sqrt();
            if norm == 0.0 {
                continue;
            }
            let akk = r[(k, k)];
            let phase = if akk.norm_sqr() == 0.0 { Complex64::new(1.0, 0.0) } else { akk / akk.norm() };
            let alpha = -phase * norm;
            let mut v: Vec<Complex64> = (k..n).map(|i| r[(i, k)]).collect();
            v[0] -= alpha;
            let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if vnorm2 == 0.0 {
                continue;
            }
            // r <- (I - 2 v v*/|v|^2) r ; q <- q (I - 2 v v*/|v|^2)
            for j in 0..n {
                let mut dot = Complex64::new(0.0, 0.0);
                for i in k..n {
                    dot += v[i - k].conj() * r[(i, j)];
                }
                let scale = dot * 2.0 / vnorm2;
                for i in k..n {
                    let vi = v[i - k];
                    r[(i, j)] -= scale * vi;
                }
            }
            for i in 0..n {
                let mut dot = Complex64::new(0.0, 0.0);
                for j in k..n {
                    dot += q[(i, j)] * v[j - k];
                }
                let scale = dot * 2.0 / vnorm2;
                for j in k..n {
                    q[(i, j)] -= scale * v[j - k].conj();
                }
            }
        }
        // Normalize so that R has positive real diagonal; the phase goes to Q.
        for k in 0..n {
            let rkk = r[(k, k)];
            if rkk.norm_sqr() > 0.0 {
                let phase = rkk / rkk.norm();
                for i in 0..n {
                    q[(i, k)] *= phase;
                }
            }
        }
        q
    }

    /// Eigenvalues by Hessenberg reduction and Wilkinson-shifted QR
    /// (explicit shift, Givens-based), suitable for small well-conditioned
    /// matrices.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let n = self.n;
        if n == 0 {
            return Vec::new();
        }
        if n == 1 {
            return vec![self[(0, 0)]];
        }
        let mut h = self.hessenberg();
        let mut eigs = Vec::with_capacity(n);
        let mut hi = n; // active block is 0..hi
        let scale: f64 = self.data.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        let eps = 1e-14 * scale;
        let mut iter_guard = 0usize;
        let two_by_two = |h: &CMatrix, hi: usize| -> (Complex64, Complex64) {
            let a = h[(hi - 2, hi - 2)];
            let b = h[(hi - 2, hi - 1)];
            let c = h[(hi - 1, hi - 2)];
            let d = h[(hi - 1, hi - 1)];
            let tr = a + d;
            let disc = (tr * tr - (a * d - b * c) * 4.0).sqrt();
            ((tr + disc) * 0.5, (tr - disc) * 0.5)
        };
        while hi > 0 {
            if hi == 1 {
                eigs.push(h[(0, 0)]);
                break;
            }
            // Bottom deflation.
            if h[(hi - 1, hi - 2)].norm()
                <= eps * (h[(hi - 1, hi - 1)].norm() + h[(hi - 2, hi - 2)].norm() + 1e-300)
            {
                eigs.push(h[(hi - 1, hi - 1)]);
                hi -= 1;
                continue;
            }
            if hi == 2 {
                let (l1, l2) = two_by_two(&h, hi);
                eigs.push(l1);
                eigs.push(l2);
                break;
            }
            iter_guard += 1;
            let (l1, l2) = two_by_two(&h, hi);
            let d = h[(hi - 1, hi - 1)];
            let mut shift = if (l1 - d).norm() < (l2 - d).norm() { l1 } else { l2 };
            if iter_guard % 30 == 0 {
                // Exceptional shift to break rare symmetric stalls.
                shift += Complex64::new(h[(hi - 1, hi - 2)].norm(), 0.0);
            }
            if iter_guard > 5000 {
                for k in 0..hi {
                    eigs.push(h[(k, k)]);
                }
                break;
            }
            // Explicit shifted QR step on the leading block: M = H - shift I,
            // M = Q R by Givens row rotations, then H <- R Q + shift I.
            let m = hi;
            for i in 0..m {
                h[(i, i)] -= shift;
            }
            let mut cs = vec![Complex64::new(1.0, 0.0); m];
            let mut sn = vec![Complex64::new(0.0, 0.0); m];
            for k in 0..m - 1 {
                let x = h[(k, k)];
                let y = h[(k + 1, k)];
                let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
                let (ck, sk) = if r == 0.0 {
                    (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
                } else {
                    (x.conj() / r, y.conj() / r)
                };
                cs[k] = ck;
                sn[k] = sk;
                for j in k..m {
                    let hkj = h[(k, j)];
                    let hk1j = h[(k + 1, j)];
                    h[(k, j)] = ck * hkj + sk * hk1j;
                    h[(k + 1, j)] = -sk.conj() * hkj + ck.conj() * hk1j;
                }
            }
            for k in 0..m - 1 {
                let ck = cs[k];
                let sk = sn[k];
                for i in 0..=(k + 1).min(m - 1) {
                    let hik = h[(i, k)];
                    let hik1 = h[(i, k + 1)];
                    h[(i, k)] = hik * ck.conj() + hik1 * sk.conj();
                    h[(i, k + 1)] = -hik * sk + hik1 * ck;
                }
            }
            for i in 0..m {
                h[(i, i)] += shift;
            }
        }
        eigs
    }

    fn hessenberg(&self) -> CMatrix {
        let n = self.n;
        let mut h = self.clone();
        for k in 0..n.saturating_sub(2) {
            let mut norm2 = 0.0;
            for i in (k + 1)..n {
                norm2 += h[(i, k)].norm_sqr();
            }
            let norm = norm2.sqrt();
            if norm == 0.0 {
                continue;
            }
            let pivot = h[(k + 1, k)];
            let phase =
                if pivot.norm_sqr() == 0.0 { Complex64::new(1.0, 0.0) } else { pivot / pivot.norm() };
            let alpha = -phase * norm;
            let mut v: Vec<Complex64> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
            v[0] -= alpha;
            let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if vnorm2 == 0.0 {
                continue;
            }
            // H <- P H P with P = I - 2 v v* / |v|^2 acting on rows/cols k+1..n
            for j in 0..n {
                let mut dot = Complex64::new(0.0, 0.0);
                for i in (k + 1)..n {
                    dot += v[i - k - 1].conj() * h[(i, j)];
                }
                let scale = dot * 2.0 / vnorm2;
                for i in (k + 1)..n {
                    let vi = v[i - k - 1];
                    h[(i, j)] -= scale * vi;
                }
            }
            for i in 0..n {
                let mut dot = Complex64::new(0.0, 0.0);
                for j in (k + 1)..n {
                    dot += h[(i, j)] * v[j - k - 1];
                }
                let scale = dot * 2.0 / vnorm2;
                for j in (k + 1)..n {
                    h[(i, j)] -= scale * v[j - k - 1].conj();
                }
            }
        }
        h
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn random_matrix(n: usize, rng: &mut impl Rng) -> CMatrix {
        CMatrix::from_fn(n, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    #[test]
    fn det_of_identity_and_diagonal() {
        assert!((CMatrix::identity(4).det() - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let m = CMatrix::from_fn(3, |i, j| {
            if i == j {
                Complex64::new(i as f64 + 1.0, 1.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let expect = Complex64::new(1.0, 1.0) * Complex64::new(2.0, 1.0) * Complex64::new(3.0, 1.0);
        assert!((m.det() - expect).norm() < 1e-12);
    }

    #[test]
    fn det_multiplicative() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for n in 2..=5 {
            let a = random_matrix(n, &mut rng);
            let b = random_matrix(n, &mut rng);
            let lhs = a.mul(&b).det();
            let rhs = a.det() * b.det();
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn qr_gives_unitary_q() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        for n in 2..=6 {
            let a = random_matrix(n, &mut rng);
            let q = a.qr_q();
            let qhq = q.adjoint().mul(&q);
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (qhq[(i, j)] - Complex64::new(expect, 0.0)).norm() < 1e-10,
                        "Q*Q != I at ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let m = CMatrix::from_fn(3, |i, j| {
            if i == j {
                Complex64::new(i as f64, -(i as f64))
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let mut eigs = m.eigenvalues();
        eigs.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (i, e) in eigs.iter().enumerate() {
            assert!((e - Complex64::new(i as f64, -(i as f64))).norm() < 1e-10);
        }
    }

    #[test]
    fn eigenvalues_match_trace_and_det() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for n in 2..=6 {
            let a = random_matrix(n, &mut rng);
            let eigs = a.eigenvalues();
            assert_eq!(eigs.len(), n);
            let sum: Complex64 = eigs.iter().sum();
            let prod: Complex64 = eigs.iter().product();
            assert!((sum - a.trace()).norm() < 1e-8, "trace mismatch n={n}");
            assert!((prod - a.det()).norm() < 1e-8, "det mismatch n={n}");
        }
    }

    #[test]
    fn eigenvalues_of_unitary_lie_on_circle() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        for _ in 0..20 {
            let g = random_matrix(3, &mut rng);
            let u = g.qr_q();
            for e in u.eigenvalues() {
                assert!((e.norm() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn eigenvalues_of_known_rotation() {
        // Permutation matrix: eigenvalues are the cube roots of unity.
        let mut p = CMatrix::zeros(3);
        p[(0, 1)] = Complex64::new(1.0, 0.0);
        p[(1, 2)] = Complex64::new(1.0, 0.0);
        p[(2, 0)] = Complex64::new(1.0, 0.0);
        let mut angles: Vec<f64> =
            p.eigenvalues().iter().map(|e| e.arg().rem_euclid(std::f64::consts::TAU)).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expect = [0.0, std::f64::consts::TAU / 3.0, 2.0 * std::f64::consts::TAU / 3.0];
        for (a, e) in angles.iter().zip(expect) {
            assert!((a - e).abs() < 1e-9, "angle {a} vs {e}");
        }
    }
}
