//! Quantum Littlewood-Richardson coefficients and the convolution of
//! conjugacy classes of the unitary group, computed by several independent
//! routes that cross-validate each other:
//!
//! * a determinantal sum over roots of unity ([`qlr`]),
//! * lattice-point counting of two-colored dual hives ([`hive`]),
//! * exact volumes of toric hive polytopes ([`polytope`]),
//! * truncated character series ([`density`]),
//! * Monte-Carlo sampling of random unitary products ([`rmt`]).

pub mod density;
pub mod error;
pub mod grid;
pub mod hive;
pub mod labeling;
pub mod linalg;
pub mod lr;
pub mod polytope;
pub mod qlr;
pub mod rmt;
pub mod words;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Exact rational scalar used by the polytope pipeline.
pub type Rational = num_rational::BigRational;

/// `sf(n) = 1! 2! ... n!` as an exact big integer.
pub fn superfactorial(n: u32) -> num_bigint::BigInt {
    let mut acc = num_bigint::BigInt::from(1u32);
    let mut fact = num_bigint::BigInt::from(1u32);
    for j in 1..=n {
        fact *= j;
        acc *= &fact;
    }
    acc
}

/// Dimension `D = (n-1)(n-2)/2` of the polytopes `P^g` for a given `n`.
pub fn free_dimension(n: u32) -> u32 {
    (n - 1) * (n - 2) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn superfactorial_small() {
        assert_eq!(superfactorial(0), 1u32.into());
        assert_eq!(superfactorial(1), 1u32.into());
        assert_eq!(superfactorial(2), 2u32.into());
        assert_eq!(superfactorial(3), 12u32.into());
        assert_eq!(superfactorial(4), 288u32.into());
    }

    #[test]
    fn free_dimension_matches_formula() {
        assert_eq!(free_dimension(3), 1);
        assert_eq!(free_dimension(4), 3);
        assert_eq!(free_dimension(5), 6);
    }
}
