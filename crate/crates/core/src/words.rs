//! Boundary words of puzzles from triples of partitions, and the color/label
//! boundary data they induce on the triangular grid `T_k`.

use serde::Serialize;

use crate::labeling::EdgeColor;
use crate::qlr::{check_degree, Partition};
use crate::{Error, Result};

/// A word in `{0,1,2}^N` attached to one side of the triangle.
pub type BoundaryWord = Vec<u8>;

/// Builds the word triple `(omega_0, omega_1, omega_2)` for partitions
/// `(lambda, mu, nu)` at quantum degree `d` on `Gr(n, N)`:
/// zeros at positions `lambda_i + (n-i)` (reflected for `omega_0`), then the
/// `d` last zeros and `d` first twos replaced by ones.
pub fn words_from_partitions(
    lambda: &Partition,
    mu: &Partition,
    nu: &Partition,
    d: u32,
    big_n: u32,
) -> Result<[BoundaryWord; 3]> {
    check_degree(lambda, mu, nu, d, big_n)?;
    for p in [lambda, mu, nu] {
        p.check_frame(big_n)?;
    }
    let n = lambda.n();
    let build = |part: &Partition, reflect: bool| -> Result<BoundaryWord> {
        let mut w = vec![2u8; big_n as usize];
        for (i, &p) in part.parts.iter().enumerate() {
            // 1-based index i+1: position lambda_i + (n - i).
            let pos = p as i64 + (n - 1 - i) as i64;
            let pos = if reflect { big_n as i64 - 1 - pos } else { pos };
            if !(0..big_n as i64).contains(&pos) {
                return Err(Error::FrameViolation { part: p as i64, max: big_n as i64 - n as i64 });
            }
            if w[pos as usize] != 2 {
                return Err(Error::InvalidArgument("colliding zero positions in word".into()));
            }
            w[pos as usize] = 0;
        }
        // Replace the d last 0s and the d first 2s by 1.
        let zeros: Vec<usize> = w.iter().enumerate().filter(|(_, &x)| x == 0).map(|(i, _)| i).collect();
        let twos: Vec<usize> = w.iter().enumerate().filter(|(_, &x)| x == 2).map(|(i, _)| i).collect();
        if (d as usize) > zeros.len() || (d as usize) > twos.len() {
            return Err(Error::InvalidArgument(format!("degree d = {d} too large for the frame")));
        }
        for &i in &zeros[zeros.len() - d as usize..] {
            w[i] = 1;
        }
        for &i in &twos[..d as usize] {
            w[i] = 1;
        }
        Ok(w)
    };
    Ok([build(nu, true)?, build(lambda, false)?, build(mu, false)?])
}

/// Boundary colors and labels of a dual hive on `T_k`, one vector per side,
/// indexed by edge height.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HiveBoundary {
    pub k: u32,
    pub big_n: u32,
    pub colors: [Vec<EdgeColor>; 3],
    pub labels: [Vec<u32>; 3],
}

/// Extracts `(c^{(i)}, l^{(i)})` from a word triple: colors are the word with
/// the letters 2 deleted, labels the 0-based positions of the kept letters.
pub fn hive_boundary(words: &[BoundaryWord; 3], big_n: u32) -> Result<HiveBoundary> {
    let counts = |w: &BoundaryWord| {
        let k0 = w.iter().filter(|&&x| x == 0).count();
        let k1 = w.iter().filter(|&&x| x == 1).count();
        (k0, k1)
    };
    let (k0, k1) = counts(&words[0]);
    for w in &words[1..] {
        if counts(w) != (k0, k1) {
            return Err(Error::InvalidArgument(
                "boundary words must share their letter counts".into(),
            ));
        }
    }
    let mut colors: [Vec<EdgeColor>; 3] = Default::default();
    let mut labels: [Vec<u32>; 3] = Default::default();
    for (i, w) in words.iter().enumerate() {
        for (pos, &letter) in w.iter().enumerate() {
            match letter {
                0 => colors[i].push(EdgeColor::C0),
                1 => colors[i].push(EdgeColor::C1),
                2 => continue,
                other => {
                    return Err(Error::InvalidArgument(format!("invalid letter {other} in word")))
                }
            }
            labels[i].push(pos as u32);
        }
    }
    Ok(HiveBoundary { k: (k0 + k1) as u32, big_n, colors, labels })
}

/// Convenience: words and boundary in one go.
pub fn boundary_from_partitions(
    lambda: &Partition,
    mu: &Partition,
    nu: &Partition,
    d: u32,
    big_n: u32,
) -> Result<HiveBoundary> {
    hive_boundary(&words_from_partitions(lambda, mu, nu, d, big_n)?, big_n)
}

impl HiveBoundary {
    /// True when every side reads `1^d 0^{n-d} 1^d`.
    pub fn is_regular(&self, d: u32) -> bool {
        let d = d as usize;
        let k = self.k as usize;
        if k < 2 * d {
            return false;
        }
        self.colors.iter().all(|c| {
            c.len() == k
                && c[..d].iter().all(|&x| x == EdgeColor::C1)
                && c[d..k - d].iter().all(|&x| x == EdgeColor::C0)
                && c[k - d..].iter().all(|&x| x == EdgeColor::C1)
        })
    }
}
