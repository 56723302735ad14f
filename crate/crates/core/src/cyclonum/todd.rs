//! The cyclotomic sum carried by the Todd terms of a cyclic stacky point.

use super::{rational, CyclotomicNumber, Rational};
use crate::error::{Error, Result};

fn check_range(r: i64, k: i64) -> Result<()> {
    if r < 2 {
        return Err(Error::OutOfRange {
            what: "stacky order r must be at least 2".into(),
            value: r,
        });
    }
    if !(0..r).contains(&k) {
        return Err(Error::OutOfRange {
            what: format!("multiplicity k must lie in [0, {}]", r - 1),
            value: k,
        });
    }
    Ok(())
}

/// `Σ_{a=1}^{r-1} ζ_r^{a·k} / (1 - ζ_r^a)`, evaluated exactly in Q(ζ_r).
///
/// The value is always rational; a non-rational result is reported as an
/// internal inconsistency.
pub fn stacky_todd_sum(r: i64, k: i64) -> Result<Rational> {
    check_range(r, k)?;
    let n = r as u32;
    let one = CyclotomicNumber::one();
    let mut total = CyclotomicNumber::zero();
    for a in 1..r {
        let num = CyclotomicNumber::root_of_unity(n, a * k)?;
        let den = &one - &CyclotomicNumber::root_of_unity(n, a)?;
        total = total.checked_add(&num.checked_div(&den)?)?;
    }
    total
        .as_rational()
        .cloned()
        .ok_or_else(|| Error::inconsistent(format!("Todd sum for r={r}, k={k} is not rational: {total}")))
}

/// Closed form of [`stacky_todd_sum`]: `(r - 1)/2 - k'` with
/// `k' = (-k) mod r`, so `(r - 1)/2` at `k = 0` and `k - (r + 1)/2` otherwise.
pub fn stacky_todd_closed_form(r: i64, k: i64) -> Result<Rational> {
    check_range(r, k)?;
    Ok(rational(r - 1, 2) - rational((r - k) % r, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(stacky_todd_sum(2, 1).unwrap(), rational(-1, 2));
        assert_eq!(stacky_todd_sum(3, 0).unwrap(), rational(1, 1));
        for r in 2..=12 {
            assert_eq!(stacky_todd_sum(r, 0).unwrap(), rational(r - 1, 2));
        }
        // ω/(1-ω) + ω²/(1-ω²) = -1 and ω²/(1-ω) + ω/(1-ω²) = 0
        assert_eq!(stacky_todd_sum(3, 1).unwrap(), rational(-1, 1));
        assert_eq!(stacky_todd_sum(3, 2).unwrap(), rational(0, 1));
        assert_eq!(stacky_todd_sum(4, 1).unwrap(), rational(-3, 2));
    }

    #[test]
    fn closed_form_matches_summation() {
        for r in 2..=16 {
            for k in 0..r {
                assert_eq!(stacky_todd_sum(r, k).unwrap(), stacky_todd_closed_form(r, k).unwrap(), "r={r} k={k}");
            }
        }
    }

    #[test]
    fn range_errors() {
        assert!(matches!(stacky_todd_sum(1, 0), Err(Error::OutOfRange { .. })));
        assert!(matches!(stacky_todd_sum(3, 3), Err(Error::OutOfRange { .. })));
        assert!(matches!(stacky_todd_closed_form(3, -1), Err(Error::OutOfRange { .. })));
    }
}
