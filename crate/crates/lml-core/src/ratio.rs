//! Exact rational arithmetic. Every correctness-bearing ratio in this crate
//! is a [`Rational`]; floating point never appears in a result.

pub use num_rational::Rational64 as Rational;

/// Formats a rational as `p/q` in lowest terms with `q >= 1`, e.g. `-1/5`,
/// `0/1`, `2/1`. This is the interchange form used in CSV and JSON outputs.
pub fn ratio_string(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
