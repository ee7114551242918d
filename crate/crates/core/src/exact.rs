//! Exact rationals, Bernoulli numbers and the special values `zeta(1 - 2k)`.
//!
//! Everything is generic over [`ExactScalar`] so that the same recurrences run over
//! arbitrary-precision rationals ([`crate::Rational`]) or fixed-width ones when the
//! values are known to stay small.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Num;

/// An exact field of characteristic zero (a rational type). Floats deliberately do not
/// implement this.
pub trait ExactScalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> {
    fn from_int(n: i64) -> Self;
}

impl ExactScalar for Ratio<BigInt> {
    fn from_int(n: i64) -> Self {
        Ratio::from_integer(BigInt::from(n))
    }
}

impl ExactScalar for Ratio<i64> {
    fn from_int(n: i64) -> Self {
        Ratio::from_integer(n)
    }
}

impl ExactScalar for Ratio<i128> {
    fn from_int(n: i64) -> Self {
        Ratio::from_integer(n as i128)
    }
}

/// Memoized Bernoulli numbers, `B_1 = -1/2`.
#[derive(Debug, Clone)]
pub struct Bernoulli<T> {
    table: Vec<T>,
}

impl<T: ExactScalar> Default for Bernoulli<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: ExactScalar> Bernoulli<T> {
    pub fn new() -> Self {
        Bernoulli {
            table: vec![T::one()],
        }
    }

    /// `B_n`, extending the table with `sum_{j=0}^{n} C(n+1, j) B_j = 0` as needed.
    pub fn get(&mut self, n: usize) -> T {
        while self.table.len() <= n {
            let m = self.table.len();
            if m >= 3 && m % 2 == 1 {
                self.table.push(T::zero());
                continue;
            }
            // C(m+1, j) built incrementally to stay exact for any width T supports.
            let mut binom = T::one();
            let mut acc = T::zero();
            for (j, b) in self.table.iter().enumerate() {
                acc = acc + binom.clone() * b.clone();
                binom = binom * T::from_int((m + 1 - j) as i64) / T::from_int((j + 1) as i64);
            }
            // binom is now C(m+1, m)
            self.table.push(-acc / binom);
        }
        self.table[n].clone()
    }

    pub fn table(&self) -> &[T] {
        &self.table
    }
}

/// `B_n` with the convention `B_1 = -1/2`.
pub fn bernoulli<T: ExactScalar>(n: usize) -> T {
    Bernoulli::new().get(n)
}

/// `zeta(1 - 2k) = -B_{2k} / (2k)` for `k >= 1`.
pub fn zeta_negative<T: ExactScalar>(k: usize) -> T {
    assert!(k >= 1, "zeta_negative needs k >= 1");
    -bernoulli::<T>(2 * k) / T::from_int(2 * k as i64)
}

/// Product `zeta(-1) zeta(-3) ... zeta(1 - 2g)`.
pub fn zeta_product<T: ExactScalar>(g: usize) -> T {
    let mut table = Bernoulli::<T>::new();
    (1..=g).fold(T::one(), |acc, k| {
        acc * (-table.get(2 * k) / T::from_int(2 * k as i64))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// Akiyama-Tanigawa; yields B_1 = +1/2, so compare only n != 1.
    fn akiyama_tanigawa(n: usize) -> Rational {
        let mut a: Vec<Rational> = Vec::with_capacity(n + 1);
        for m in 0..=n {
            a.push(q(1, (m + 1) as i64));
            for j in (1..=m).rev() {
                a[j - 1] =
                    Rational::from_integer((j as i64).into()) * (a[j - 1].clone() - a[j].clone());
            }
        }
        a[0].clone()
    }

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli::<Rational>(0), Rational::one());
        assert_eq!(bernoulli::<Rational>(1), q(-1, 2));
        assert_eq!(bernoulli::<Rational>(2), q(1, 6));
        assert_eq!(bernoulli::<Rational>(4), q(-1, 30));
        assert_eq!(bernoulli::<Rational>(6), q(1, 42));
        assert_eq!(bernoulli::<Rational>(7), Rational::zero());
        assert_eq!(bernoulli::<Rational>(12), q(-691, 2730));
    }

    #[test]
    fn bernoulli_matches_akiyama_tanigawa() {
        let mut table = Bernoulli::<Rational>::new();
        for n in 0..=40 {
            if n == 1 {
                continue;
            }
            assert_eq!(table.get(n), akiyama_tanigawa(n), "B_{n}");
        }
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_negative::<Rational>(1), q(-1, 12));
        assert_eq!(zeta_negative::<Rational>(2), q(1, 120));
        assert_eq!(zeta_negative::<Rational>(3), q(-1, 252));
        for k in 1..=20 {
            let z = zeta_negative::<Rational>(k);
            assert_eq!(
                z * Rational::from_integer((-2 * k as i64).into()),
                bernoulli::<Rational>(2 * k)
            );
        }
        assert_eq!(zeta_product::<Rational>(2), q(-1, 1440));
    }

    #[test]
    fn fixed_width_agrees_with_bigint() {
        for n in 0..=20 {
            let small: Ratio<i128> = bernoulli(n);
            let big: Rational = bernoulli(n);
            assert_eq!(
                Rational::new((*small.numer()).into(), (*small.denom()).into()),
                big
            );
        }
    }

    proptest! {
        #[test]
        fn rational_field_laws(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50, e in -50i64..50, f in 1i64..50) {
            let (x, y, z) = (q(a, b), q(c, d), q(e, f));
            prop_assert_eq!((x.clone() + y.clone()) + z.clone(), x.clone() + (y.clone() + z.clone()));
            prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
            prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
            let s = x * y + z;
            // canonical form: positive denominator, lowest terms
            prop_assert!(s.denom() > &BigInt::zero());
            prop_assert!(num_integer::Integer::gcd(s.numer(), s.denom()).is_one());
        }
    }
}
