//! Base-q digit expansions of nonnegative integers.

/// Digit vector of `n` in base `q`, least significant first, no trailing
/// zeros (so 0 expands to the empty vector).
pub fn digits(mut n: u64, q: u64) -> Vec<u64> {
    assert!(q >= 2, "digit base must be at least 2");
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % q);
        n /= q;
    }
    out
}

/// Inverse of [`digits`]: value of a digit vector in base `q`.
pub fn from_digits(ds: &[u64], q: u64) -> u64 {
    assert!(q >= 2, "digit base must be at least 2");
    ds.iter().rev().fold(0, |acc, &d| {
        debug_assert!(d < q);
        acc * q + d
    })
}

/// Digit sum of `n` in base `q`.
pub fn digit_sum(n: u64, q: u64) -> u64 {
    digits(n, q).iter().sum()
}

/// A base-q expansion held together with its base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digits {
    pub q: u64,
    pub digits: Vec<u64>,
}

impl Digits {
    pub fn of(n: u64, q: u64) -> Digits {
        Digits {
            q,
            digits: digits(n, q),
        }
    }

    pub fn value(&self) -> u64 {
        from_digits(&self.digits, self.q)
    }

    pub fn sum(&self) -> u64 {
        self.digits.iter().sum()
    }

    /// Digit at position `i` (zero beyond the stored support).
    pub fn get(&self, i: usize) -> u64 {
        self.digits.get(i).copied().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn digit_sum_examples() {
        assert_eq!(digit_sum(5, 2), 2); // 101
        assert_eq!(digit_sum(0, 7), 0); // empty expansion
        assert_eq!(digits(26, 3), vec![2, 2, 2]); // repeated division
        assert_eq!(digit_sum(26, 3), 6);
    }

    #[test]
    fn no_trailing_zero_digits() {
        assert_eq!(digits(8, 2), vec![0, 0, 0, 1]);
        assert_eq!(digits(0, 2), Vec::<u64>::new());
        assert_eq!(digits(9, 3), vec![0, 0, 1]);
    }

    proptest! {
        #[test]
        fn round_trip(n in 0u64..1_000_000, qi in 0usize..4) {
            let q = [2u64, 3, 4, 9][qi];
            prop_assert_eq!(from_digits(&digits(n, q), q), n);
            prop_assert_eq!(Digits::of(n, q).value(), n);
        }
    }

    #[test]
    fn round_trip_exhaustive_below_a_million() {
        for q in [2u64, 3, 4, 9] {
            for n in 0..1_000_000u64 {
                assert_eq!(from_digits(&digits(n, q), q), n);
            }
        }
    }
}
