//! Exact arithmetic toolkit for supersingular abelian surfaces in characteristic `p`.
//!
//! The crate covers:
//!
//! * closed-form masses of superspecial and supersingular principally polarized
//!   surfaces (and the superspecial genus-`g` masses they are built from),
//! * classification of the Moret-Bailly parameter `xi` by the degree of its field of
//!   definition over `F_{p^2}`,
//! * the maximal order `O_D = W(F_{p^2})[Pi]` truncated at a finite `Pi`-adic precision,
//!   together with a constructive lift `SL_2(F_{p^2}) -> Aut` of the quaternion-hermitian
//!   lattice,
//! * brute-force oracles on explicit Dieudonne lattices.
//!
//! Scalar-generic pieces (matrices, linear algebra, Bernoulli numbers and the mass
//! products) are written against the [`Ring`], [`Field`] and [`ExactScalar`] traits; the
//! aliases below fix the concrete types the rest of the crate uses.

pub mod dieudonne;
pub mod error;
pub mod exact;
pub mod ff;
pub mod json;
pub mod lifting;
pub mod mass;
pub mod quat;
pub mod ring;
pub mod unram;
pub mod verify;
pub mod xi;

pub use error::{Error, Result};
pub use exact::{bernoulli, zeta_negative, Bernoulli, ExactScalar};
pub use ff::{make_field, FFElem, FieldCtx, Fp2, Fp2Ctx};
pub use lifting::{lift_sl2, LiftOutcome};
pub use mass::{MassResult, Stratum};
pub use quat::{QuatCtx, QuatElem};
pub use ring::{Field, Mat, Ring};
pub use unram::{make_unram, UnramCtx, UnramElem};
pub use xi::{classify, XiCase, XiClass, XiPoint};

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
/// Fixed-width rational, usable where values stay small.
pub type Rational128 = num_rational::Ratio<i128>;
/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;
/// 2x2 (or m x m) matrix over `F_{p^2}`.
pub type Fp2Mat = Mat<Fp2>;
/// Matrix over the truncated quaternion order.
pub type QuatMat = Mat<QuatElem>;
/// Matrix over `W(F_{p^2}) / p^m`.
pub type UnramMat = Mat<UnramElem>;

/// Trial-division primality test; inputs here are always small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes up to and including `bound`.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(!is_prime(1));
        assert!(!is_prime(4));
        assert_eq!(primes_up_to(1000).len(), 168);
    }
}
