//! The arithmetic lower-bound function `g(n, k)`, ratio certificates, and
//! the closed-form slope bounds.
//!
//! For fixed `k`, the function is defined by base regions
//!
//! - `g(n, k) = -n` for `1 <= n <= floor((k-1)/2)`,
//! - `g(n, k) = n - k + 1` for `(k+1)/2 <= n <= k` (odd `k`),
//! - `g(n, k) = n - k + 2` for `k/2 <= n <= k` (even `k`),
//!
//! and for `n > k` by
//!
//! ```text
//! g(n, k) = max( g(n-1, k) - 1,
//!                min_{j = ceil(n/3)}^{floor(n/2)} g(n-j, k) + g(j, k) )
//! ```
//!
//! Individual values may be overridden: an overridden `n` is excluded from
//! the rules and every later value recomputes through it. `g(n, k)` bounds
//! from below the weight of any connected n-edge subgraph of a k-local
//! positive tree, which is what the certificates in this module exploit.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ratio::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GnkError {
    #[error("k must be positive")]
    InvalidK,
    #[error("n_max must be at least 1")]
    InvalidNMax,
    #[error("override key n = {0} outside 1..={1}")]
    OverrideOutOfRange(u32, u32),
    #[error("ratio certificate requires 3r > k, got r = {r}, k = {k}")]
    RatioWindowTooSmall { r: u32, k: u32 },
    #[error("k = {0} is not in the collapsing range (k = 7 or k >= 9)")]
    NonCollapsingK(u32),
    #[error("even-base variant requires even k, got {0}")]
    RequiresEvenK(u32),
}

/// Memoized values of `g(n, k)` for `1 <= n <= n_max`, with the overrides
/// that were applied while building.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GnkTable {
    k: u32,
    values: Vec<i64>,
    overrides: BTreeMap<u32, i64>,
}

impl GnkTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n_max(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn get(&self, n: u32) -> Option<i64> {
        if n == 0 {
            None
        } else {
            self.values.get(n as usize - 1).copied()
        }
    }

    pub fn overrides(&self) -> &BTreeMap<u32, i64> {
        &self.overrides
    }

    /// `(n, g(n, k))` pairs in order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as u32 + 1, v))
    }
}

/// Builds the table for `g(·, k)` up to `n_max` with base-case overrides.
pub fn gnk_table(
    k: u32,
    n_max: u32,
    overrides: &BTreeMap<u32, i64>,
) -> Result<GnkTable, GnkError> {
    if k == 0 {
        return Err(GnkError::InvalidK);
    }
    if n_max == 0 {
        return Err(GnkError::InvalidNMax);
    }
    for &n in overrides.keys() {
        if n == 0 || n > n_max {
            return Err(GnkError::OverrideOutOfRange(n, n_max));
        }
    }
    let mut values: Vec<i64> = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let v = if let Some(&ov) = overrides.get(&n) {
            ov
        } else if n <= (k - 1) / 2 {
            -i64::from(n)
        } else if n <= k {
            if k % 2 == 1 {
                i64::from(n) - i64::from(k) + 1
            } else {
                i64::from(n) - i64::from(k) + 2
            }
        } else {
            let g = |j: u32| values[j as usize - 1];
            let split_min = (n.div_ceil(3)..=n / 2)
                .map(|j| g(n - j) + g(j))
                .min()
                .expect("split range is nonempty for n >= 2");
            (g(n - 1) - 1).max(split_min)
        };
        values.push(v);
    }
    Ok(GnkTable {
        k,
        values,
        overrides: overrides.clone(),
    })
}

/// The variant table where `g(k, k)` is forced to 0 instead of 2 for even
/// `k`, used for the negative-subgraph analysis.
pub fn even_base_variant(k: u32, n_max: u32) -> Result<GnkTable, GnkError> {
    if !k.is_multiple_of(2) {
        return Err(GnkError::RequiresEvenK(k));
    }
    gnk_table(k, n_max, &BTreeMap::from([(k, 0)]))
}

/// A computed lower bound `c` on `g(n, k)/n` over the window `[r, 3r]`,
/// which certifies the slope bound `c_T(k) >= c` whenever `3r > k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioCertificate {
    pub k: u32,
    pub r: u32,
    pub c: Rational,
    pub per_n: BTreeMap<u32, Rational>,
    /// Overrides baked into the table this certificate was computed from.
    /// A certificate that depends on overrides is only as strong as they are.
    pub overrides: BTreeMap<u32, i64>,
}

impl RatioCertificate {
    pub fn depends_on_overrides(&self) -> bool {
        !self.overrides.is_empty()
    }
}

/// `c = min over n in [r, 3r] of g(n, k)/n`, exact.
pub fn certify_ratio_bound(
    k: u32,
    r: u32,
    overrides: &BTreeMap<u32, i64>,
) -> Result<RatioCertificate, GnkError> {
    if 3 * r <= k {
        return Err(GnkError::RatioWindowTooSmall { r, k });
    }
    let table = gnk_table(k, 3 * r, overrides)?;
    let per_n: BTreeMap<u32, Rational> = (r..=3 * r)
        .map(|n| (n, Rational::new(table.get(n).unwrap(), i64::from(n))))
        .collect();
    let c = *per_n.values().min().expect("window [r, 3r] is nonempty");
    Ok(RatioCertificate {
        k,
        r,
        c,
        per_n,
        overrides: overrides.clone(),
    })
}

/// Which family a closed-form slope bound applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsFamily {
    /// All connected graphs down to all trees.
    General,
    /// Bounded maximum degree (Delta >= 3) variants.
    DegreeBounded,
}

/// Closed-form bounds on the collapse slope `c(k)`; `lower == upper` when
/// the value is known exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoremBounds {
    pub k: u32,
    pub family: BoundsFamily,
    pub lower: Rational,
    pub upper: Rational,
}

impl TheoremBounds {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

/// The closed-form slope bounds for collapsing `k` (`k = 7` or `k >= 9`),
/// keyed on `k mod 4`.
pub fn theorem_c_bounds(k: u32, family: BoundsFamily) -> Result<TheoremBounds, GnkError> {
    if k != 7 && k < 9 {
        return Err(GnkError::NonCollapsingK(k));
    }
    let r = |num: i64, den: i64| Rational::new(num, den);
    let (lower, upper) = match k % 4 {
        3 => {
            let m = i64::from((k - 3) / 4);
            match family {
                BoundsFamily::General => (r(-m, 3 * m + 2), r(-m, 3 * m + 2)),
                BoundsFamily::DegreeBounded => {
                    (r(-m, 3 * m + 2), r(-(2 * m - 1), 6 * m + 5))
                }
            }
        }
        2 => {
            let m = i64::from((k - 2) / 4);
            match family {
                BoundsFamily::General => (r(-(m - 1), 3 * m + 1), r(-(m - 1), 3 * m + 1)),
                BoundsFamily::DegreeBounded => {
                    (r(-(m - 1), 3 * m + 1), r(-(2 * m - 3), 6 * m + 3))
                }
            }
        }
        1 => {
            let m = i64::from((k - 1) / 4);
            (r(-(2 * m - 1), 6 * m + 1), r(-(m - 1), 3 * m + 1))
        }
        _ => {
            let m = i64::from(k / 4);
            (r(-(2 * m - 3), 6 * m - 1), r(-(m - 2), 3 * m))
        }
    };
    debug_assert!(lower <= upper && upper <= Rational::new(0, 1));
    Ok(TheoremBounds {
        k,
        family,
        lower,
        upper,
    })
}

/// Known values of `g(n, k)` for `n = 1..=35`, `k = 7..=15`, used by the
/// verification suites. Row index is `n - 1`, column index is `k - 7`.
const REFERENCE: [[i64; 9]; 35] = [
    [-1, -1, -1, -1, -1, -1, -1, -1, -1],
    [-2, -2, -2, -2, -2, -2, -2, -2, -2],
    [-3, -3, -3, -3, -3, -3, -3, -3, -3],
    [-2, -2, -4, -4, -4, -4, -4, -4, -4],
    [-1, -1, -3, -3, -5, -5, -5, -5, -5],
    [0, 0, -2, -2, -4, -4, -6, -6, -6],
    [1, 1, -1, -1, -3, -3, -5, -5, -7],
    [0, 2, 0, 0, -2, -2, -4, -4, -6],
    [-1, 1, 1, 1, -1, -1, -3, -3, -5],
    [-2, 0, 0, 2, 0, 0, -2, -2, -4],
    [-1, -1, -1, 1, 1, 1, -1, -1, -3],
    [-2, 0, -2, 0, 0, 2, 0, 0, -2],
    [-1, 1, -3, -1, -1, 1, 1, 1, -1],
    [-2, 0, -2, -2, -2, 0, 0, 2, 0],
    [-3, -1, -3, -1, -3, -1, -1, 1, 1],
    [-2, 0, -2, 0, -4, -2, -2, 0, 0],
    [-1, -1, -3, -1, -3, -3, -3, -1, -1],
    [-2, 0, -4, -2, -4, -2, -4, -2, -2],
    [-3, 1, -3, -1, -3, -1, -5, -3, -3],
    [-4, 0, -4, -2, -4, -2, -4, -4, -4],
    [-3, -1, -3, -3, -5, -3, -5, -3, -5],
    [-4, -2, -2, -2, -4, -2, -4, -2, -6],
    [-3, -1, -3, -1, -5, -3, -5, -3, -5],
    [-4, 0, -4, 0, -6, -4, -6, -4, -6],
    [-5, -1, -5, -1, -5, -3, -5, -3, -5],
    [-4, -2, -6, -2, -4, -4, -6, -4, -6],
    [-5, -1, -5, -3, -5, -3, -7, -5, -7],
    [-4, -2, -6, -4, -4, -2, -6, -4, -6],
    [-5, -1, -5, -3, -5, -1, -7, -5, -7],
    [-6, -2, -6, -2, -6, -2, -6, -6, -8],
    [-5, -1, -7, -3, -7, -3, -5, -5, -7],
    [-6, -2, -6, -4, -8, -4, -6, -4, -8],
    [-5, -3, -7, -3, -7, -5, -5, -3, -9],
    [-6, -2, -6, -4, -8, -6, -6, -2, -8],
    [-7, -1, -7, -5, -7, -5, -7, -3, -7],
];

pub const REFERENCE_N_MAX: u32 = 35;
pub const REFERENCE_K_MIN: u32 = 7;
pub const REFERENCE_K_MAX: u32 = 15;

/// Reference value of `g(n, k)` for `n <= 35`, `k` in `7..=15`.
pub fn reference_value(n: u32, k: u32) -> Option<i64> {
    if n == 0 || n > REFERENCE_N_MAX || !(REFERENCE_K_MIN..=REFERENCE_K_MAX).contains(&k) {
        return None;
    }
    Some(REFERENCE[n as usize - 1][(k - REFERENCE_K_MIN) as usize])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain(k: u32, n_max: u32) -> GnkTable {
        gnk_table(k, n_max, &BTreeMap::new()).unwrap()
    }

    /// Independent consistency check: every stored value must satisfy the
    /// defining equations (or its override) given the other stored values.
    fn assert_defining_equations(t: &GnkTable) {
        let k = t.k();
        for (n, v) in t.iter() {
            if let Some(&ov) = t.overrides().get(&n) {
                assert_eq!(v, ov, "override at n={n}");
                continue;
            }
            let expected = if n <= (k - 1) / 2 {
                -i64::from(n)
            } else if n <= k {
                if k % 2 == 1 {
                    i64::from(n) - i64::from(k) + 1
                } else {
                    i64::from(n) - i64::from(k) + 2
                }
            } else {
                let split = (n.div_ceil(3)..=n / 2)
                    .map(|j| t.get(n - j).unwrap() + t.get(j).unwrap())
                    .min()
                    .unwrap();
                (t.get(n - 1).unwrap() - 1).max(split)
            };
            assert_eq!(v, expected, "defining equation fails at n={n}, k={k}");
        }
    }

    #[test]
    fn table_spot_values() {
        let t7 = plain(7, 12);
        assert_eq!(t7.get(7), Some(1));
        assert_eq!(t7.get(8), Some(0));
        assert_eq!(t7.get(10), Some(-2));

        let t8 = plain(8, 20);
        assert_eq!(t8.get(8), Some(2));
        assert_eq!(t8.get(19), Some(1));
    }

    #[test]
    fn reproduces_all_reference_values() {
        for k in REFERENCE_K_MIN..=REFERENCE_K_MAX {
            let t = plain(k, REFERENCE_N_MAX);
            for n in 1..=REFERENCE_N_MAX {
                assert_eq!(
                    t.get(n),
                    reference_value(n, k),
                    "mismatch at n={n}, k={k}"
                );
            }
        }
    }

    #[test]
    fn defining_equations_hold_with_and_without_overrides() {
        for k in [1, 2, 5, 7, 8, 9, 12, 15] {
            assert_defining_equations(&plain(k, 40));
        }
        let t = gnk_table(9, 42, &BTreeMap::from([(26, -4)])).unwrap();
        assert_defining_equations(&t);
        assert_defining_equations(&even_base_variant(8, 30).unwrap());
    }

    #[test]
    fn override_replaces_value_and_flows_downstream() {
        let plain9 = plain(9, 42);
        assert_eq!(plain9.get(26), Some(-6));
        let t = gnk_table(9, 42, &BTreeMap::from([(26, -4)])).unwrap();
        assert_eq!(t.get(26), Some(-4));
        // downstream values recompute through the override
        assert!(t.get(27).unwrap() >= plain9.get(27).unwrap());
    }

    #[test]
    fn override_keys_are_validated() {
        assert_eq!(
            gnk_table(9, 10, &BTreeMap::from([(26, -4)])),
            Err(GnkError::OverrideOutOfRange(26, 10))
        );
    }

    #[test]
    fn even_base_variant_values() {
        let v8 = even_base_variant(8, 12).unwrap();
        assert_eq!(v8.get(8), Some(0));
        assert_eq!(plain(8, 12).get(8), Some(2));
        // n = 9 recomputed from the max/min rule through the override
        assert_eq!(v8.get(9), Some(-1));

        let v10 = even_base_variant(10, 10).unwrap();
        assert_eq!(v10.get(10), Some(0));

        assert_eq!(even_base_variant(7, 10), Err(GnkError::RequiresEvenK(7)));
    }

    #[test]
    fn ratio_certificates() {
        let c75 = certify_ratio_bound(7, 5, &BTreeMap::new()).unwrap();
        assert_eq!(c75.c, Rational::new(-1, 5));
        assert!(!c75.depends_on_overrides());

        let c107 = certify_ratio_bound(10, 7, &BTreeMap::new()).unwrap();
        assert_eq!(c107.c, Rational::new(-1, 7));

        let c9 = certify_ratio_bound(9, 14, &BTreeMap::from([(26, -4)])).unwrap();
        assert!(c9.c >= Rational::new(-7, 31));
        assert!(c9.depends_on_overrides());

        assert_eq!(
            certify_ratio_bound(9, 3, &BTreeMap::new()),
            Err(GnkError::RatioWindowTooSmall { r: 3, k: 9 })
        );
    }

    #[test]
    fn certified_bound_extends_past_the_window() {
        // sanity-check the induction: the certified c keeps holding well
        // beyond [r, 3r]
        for (k, r) in [(7u32, 5u32), (10, 7)] {
            let cert = certify_ratio_bound(k, r, &BTreeMap::new()).unwrap();
            let t = plain(k, 9 * r);
            for n in r..=9 * r {
                let ratio = Rational::new(t.get(n).unwrap(), i64::from(n));
                assert!(ratio >= cert.c, "k={k}, n={n}: {ratio} < {}", cert.c);
            }
        }
    }

    #[test]
    fn theorem_bounds_match_closed_forms() {
        let b = theorem_c_bounds(7, BoundsFamily::General).unwrap();
        assert!(b.is_exact());
        assert_eq!(b.lower, Rational::new(-1, 5));

        let b = theorem_c_bounds(10, BoundsFamily::General).unwrap();
        assert!(b.is_exact());
        assert_eq!(b.lower, Rational::new(-1, 7));

        let b = theorem_c_bounds(9, BoundsFamily::General).unwrap();
        assert_eq!(b.lower, Rational::new(-3, 13));
        assert_eq!(b.upper, Rational::new(-1, 7));

        let b = theorem_c_bounds(7, BoundsFamily::DegreeBounded).unwrap();
        assert_eq!(b.lower, Rational::new(-1, 5));
        assert_eq!(b.upper, Rational::new(-1, 11));

        let b = theorem_c_bounds(12, BoundsFamily::General).unwrap();
        assert_eq!(b.lower, Rational::new(-3, 17));
        assert_eq!(b.upper, Rational::new(-1, 9));

        for k in [1, 2, 3, 4, 5, 6, 8] {
            assert_eq!(
                theorem_c_bounds(k, BoundsFamily::General),
                Err(GnkError::NonCollapsingK(k))
            );
        }
    }
}
