//! Library values checked against independent computations done here.

use num_bigint::BigInt;
use num_rational::Ratio;

use ssmass::dieudonne::DieuLattice;
use ssmass::mass::{fkernel_mass, relative_index, sp_group_order, superspecial_mass, Stratum};
use ssmass::xi::{sl2_line_stabilizer_order, XiPoint};
use ssmass::{bernoulli, make_field, zeta_negative, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Akiyama-Tanigawa; yields `B_n` with `B_1 = +1/2`.
fn bernoulli_at(n: usize) -> Rational {
    let mut a: Vec<Rational> = (0..=n).map(|m| q(1, m as i64 + 1)).collect();
    for m in 0..n {
        for j in 0..n - m {
            a[j] = Rational::from_integer(BigInt::from(j as i64 + 1)) * (&a[j] - &a[j + 1]);
        }
    }
    a[0].clone()
}

#[test]
fn bernoulli_agrees_with_akiyama_tanigawa() {
    assert_eq!(bernoulli::<Rational>(1), q(-1, 2));
    for n in 2..=40 {
        assert_eq!(bernoulli::<Rational>(n), bernoulli_at(n), "B_{n}");
    }
}

#[test]
fn zeta_at_negative_odd_integers() {
    let expected = [
        q(-1, 12),
        q(1, 120),
        q(-1, 252),
        q(1, 240),
        q(-1, 132),
        q(691, 32760),
    ];
    for (k, v) in expected.iter().enumerate() {
        assert_eq!(zeta_negative::<Rational>(k + 1), *v);
    }
}

#[test]
fn fixed_width_and_big_rationals_agree() {
    for p in [2u64, 3, 5, 7, 11, 13] {
        for g in 1..=4 {
            let small: Ratio<i128> = superspecial_mass(g, p);
            let big: Rational = superspecial_mass(g, p);
            assert_eq!(
                Rational::new(BigInt::from(*small.numer()), BigInt::from(*small.denom())),
                big
            );
        }
    }
}

#[test]
fn genus_three_mass_at_two() {
    // (-1)^6 / 8 * zeta(-1) zeta(-3) zeta(-5) * (2 - 1)(4 + 1)(8 - 1)
    let zeta = q(-1, 12) * q(1, 120) * q(-1, 252);
    assert_eq!(superspecial_mass::<Rational>(3, 2), zeta * q(35, 8));
    // g = 4, F-kernel: (2^2 - 1)(2^6 - 1) / 16 * zeta product
    let zeta4 = q(-1, 12) * q(1, 120) * q(-1, 252) * q(1, 240);
    assert_eq!(
        fkernel_mass::<Rational>(4, 2).unwrap(),
        zeta4 * q(3 * 63, 16)
    );
}

#[test]
fn relative_indices_are_the_stabilizer_indices() {
    // [U_{x_1} : U_x] = |SL_2(F_{p^2})| / |Stab|, the stabilizer counted on a concrete point
    for p in [2u64, 3, 5] {
        let p2 = (p * p) as i64;
        let sl2 = p2 * (p2 * p2 - 1);
        for (d, stratum) in [(2usize, Stratum::Quadratic), (3, Stratum::Generic)] {
            let k = make_field(p, d).unwrap();
            let xi = XiPoint::affine(k.first_of_degree(d).unwrap());
            let stab = sl2_line_stabilizer_order(&xi) as i64;
            let got = relative_index(p, Stratum::FKernel, stratum).unwrap();
            assert_eq!(got, q(sl2 / stab, 1), "p={p} d={d}");
        }
        // M_2 / M_2^* = (p - 1)(p^2 + 1) / (p^2 - 1)
        let pi = p as i64;
        assert_eq!(
            relative_index(p, Stratum::FKernel, Stratum::Superspecial).unwrap(),
            q((pi - 1) * (p2 + 1), p2 - 1)
        );
    }
}

#[test]
fn sp4_over_f2_by_enumeration() {
    // matrices over F_2 (16 bits) preserving J = [[0, I], [I, 0]] (char 2: -I = I)
    let get = |m: u32, i: usize, j: usize| (m >> (4 * i + j)) & 1;
    let j = |i: usize, k: usize| u32::from((i + 2) % 4 == k);
    let mut count = 0u64;
    for m in 0u32..1 << 16 {
        let ok = (0..4).all(|a| {
            (0..4).all(|b| {
                let mut s = 0;
                for r in 0..4 {
                    for c in 0..4 {
                        s ^= get(m, r, a) & j(r, c) & get(m, c, b);
                    }
                }
                s == j(a, b)
            })
        });
        count += u64::from(ok);
    }
    assert_eq!(count, 720);
    assert_eq!(sp_group_order(2, 2).unwrap(), BigInt::from(count));
}

#[test]
fn a_number_is_one_off_the_superspecial_locus() {
    for (p, d) in [(5u64, 2usize), (2, 3), (3, 3)] {
        let k = make_field(p, d).unwrap();
        for b in k.elements().filter(|b| b.degree_over_fp2() == d).take(10) {
            let lat = DieuLattice::new(&XiPoint::affine(b), 3).unwrap();
            assert!(lat.is_dieudonne());
            assert_eq!(lat.a_number(), 1);
        }
    }
    let k = make_field(7, 1).unwrap();
    for b in k.elements().take(10) {
        assert_eq!(
            DieuLattice::new(&XiPoint::affine(b), 2).unwrap().a_number(),
            2
        );
    }
}
