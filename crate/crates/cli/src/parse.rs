//! Exact parsing of rational and partition arguments.

use num_bigint::BigInt;
use qhive_core::polytope::ConjClass;
use qhive_core::qlr::Partition;
use qhive_core::Rational;

/// Marker error type: the failure is a command-line usage problem.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn parse_rational(s: &str) -> Result<Rational, UsageError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt =
        num.parse().map_err(|_| UsageError(format!("invalid rational numerator: {s}")))?;
    let den: BigInt =
        den.parse().map_err(|_| UsageError(format!("invalid rational denominator: {s}")))?;
    if den == BigInt::from(0) {
        return Err(UsageError(format!("zero denominator in rational: {s}")));
    }
    Ok(Rational::new(num, den))
}

/// Comma-separated exact rationals, e.g. `13/23,6/23,2/23`.
pub fn parse_class(s: &str) -> Result<ConjClass, UsageError> {
    let theta = s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    ConjClass::new(theta).map_err(|e| UsageError(e.to_string()))
}

/// Comma-separated nonnegative integers, e.g. `2,1,0`.
pub fn parse_partition(s: &str) -> Result<Partition, UsageError> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| UsageError(format!("invalid part: {x}"))))
        .collect::<Result<_, _>>()?;
    Partition::new(parts).map_err(|e| UsageError(e.to_string()))
}
