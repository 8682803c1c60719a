//! Discounted sums of finite and ultimately periodic weight sequences.

use num_traits::{One, Zero};

use crate::rational::{DiscountFactor, Rational};

/// `sum_i lambda^i x_i`, exact.
pub fn discounted_sum(weights: &[Rational], lambda: &DiscountFactor) -> Rational {
    // Horner from the back keeps intermediate denominators small.
    weights
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, w| w + lambda.value() * acc)
}

/// `w / (1 - lambda)`, the value of a constant weight repeated forever.
pub fn loop_value(weight: &Rational, lambda: &DiscountFactor) -> Rational {
    weight / lambda.complement()
}

/// Value of the play `prefix . cycle^omega`: `Disc(prefix) + lambda^|prefix| * S / (1 - lambda^|cycle|)`
/// where `S = Disc(cycle)`.
pub fn lasso_value(prefix: &[Rational], cycle: &[Rational], lambda: &DiscountFactor) -> Rational {
    assert!(!cycle.is_empty(), "a lasso needs a non-empty cycle");
    let s = discounted_sum(cycle, lambda);
    let loop_part = s / (Rational::one() - lambda.pow(cycle.len()));
    discounted_sum(prefix, lambda) + lambda.pow(prefix.len()) * loop_part
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn sums() {
        let half = DiscountFactor::new(ratio(1, 2)).unwrap();
        assert_eq!(discounted_sum(&[], &half), int(0));
        let l = DiscountFactor::new(ratio(49, 50)).unwrap();
        assert_eq!(discounted_sum(&[int(0), int(-4), int(-4)], &l), ratio(-19404, 2500));
        let nine = DiscountFactor::new(ratio(9, 10)).unwrap();
        let ones = vec![int(1); 7];
        assert_eq!(discounted_sum(&ones, &nine), int(10) * (int(1) - nine.pow(7)));
        assert_eq!(loop_value(&int(100), &nine), int(1000));
        assert_eq!(loop_value(&int(0), &nine), int(0));
        assert_eq!(loop_value(&int(1), &nine), int(10));
    }

    #[test]
    fn lasso() {
        let half = DiscountFactor::new(ratio(1, 2)).unwrap();
        // 1, (0, 2)^omega = 1 + 1/2 * (0 + 1/2 * 2) / (1 - 1/4) = 1 + 2/3
        assert_eq!(lasso_value(&[int(1)], &[int(0), int(2)], &half), ratio(5, 3));
        assert_eq!(lasso_value(&[], &[int(3)], &half), int(6));
    }
}
