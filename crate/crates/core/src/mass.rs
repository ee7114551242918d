//! Closed-form masses, symplectic group orders, Hecke orbit sizes and the census of
//! `P^1` by degree over `F_{p^2}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{zeta_product, ExactScalar};
use crate::xi::{XiCase, XiClass};
use crate::{is_prime, Integer, Rational};

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn pow_t<T: ExactScalar>(p: u64, k: usize) -> T {
    let base = T::from_int(p as i64);
    (0..k).fold(T::one(), |acc, _| acc * base.clone())
}

fn big_pow(p: u64, k: u32) -> Integer {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Mass of the principally polarized superspecial abelian varieties of dimension `g`:
/// `(-1)^{g(g+1)/2} / 2^g * prod_{k<=g} zeta(1-2k) * prod_{k<=g} (p^k + (-1)^k)`.
pub fn superspecial_mass<T: ExactScalar>(g: usize, p: u64) -> T {
    let sign = if (g * (g + 1) / 2) % 2 == 0 {
        T::one()
    } else {
        -T::one()
    };
    let two_g = pow_t::<T>(2, g);
    let local = (1..=g).fold(T::one(), |acc, k| {
        let pm = if k % 2 == 0 { T::one() } else { -T::one() };
        acc * (pow_t::<T>(p, k) + pm)
    });
    sign / two_g * zeta_product::<T>(g) * local
}

/// Same with the local factor `prod_{k<=g/2} (p^{4k-2} - 1)` (polarizations with kernel
/// `A[F]`); `g` must be even.
pub fn fkernel_mass<T: ExactScalar>(g: usize, p: u64) -> Result<T> {
    if g == 0 || g % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "genus {g} must be positive and even"
        )));
    }
    let sign = if (g * (g + 1) / 2) % 2 == 0 {
        T::one()
    } else {
        -T::one()
    };
    let two_g = pow_t::<T>(2, g);
    let local = (1..=g / 2).fold(T::one(), |acc, k| {
        acc * (pow_t::<T>(p, 4 * k - 2) - T::one())
    });
    Ok(sign / two_g * zeta_product::<T>(g) * local)
}

/// Which closed form produced a [`MassResult`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Superspecial,
    SuperspecialFKernel,
    LambdaX,
    Ratio,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Superspecial => "superspecial mass M_g",
            Provenance::SuperspecialFKernel => "superspecial mass M_g^* (kernel A[F])",
            Provenance::LambdaX => "Mass(Lambda_x) = L_p / 5760",
            Provenance::Ratio => "ratio of masses",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MassResult {
    pub value: Rational,
    pub provenance: Provenance,
    pub p: u64,
    pub g: Option<usize>,
    pub case: Option<XiCase>,
}

impl MassResult {
    /// Numerator over the denominator 5760 for genus-2 masses, e.g. `5/5760`.
    pub fn over_5760(&self) -> Option<String> {
        if self.g != Some(2) {
            return None;
        }
        let scaled = &self.value * Rational::from_integer(5760.into());
        scaled
            .is_integer()
            .then(|| format!("{}/5760", scaled.to_integer()))
    }
}

pub fn mass_superspecial(g: usize, p: u64) -> Result<MassResult> {
    check_prime(p)?;
    if g == 0 {
        return Err(Error::InvalidParameter("genus must be at least 1".into()));
    }
    let value = superspecial_mass::<Rational>(g, p);
    debug_assert!(value.is_positive());
    Ok(MassResult {
        value,
        provenance: Provenance::Superspecial,
        p,
        g: Some(g),
        case: None,
    })
}

pub fn mass_superspecial_fkernel(g: usize, p: u64) -> Result<MassResult> {
    check_prime(p)?;
    let value = fkernel_mass::<Rational>(g, p)?;
    Ok(MassResult {
        value,
        provenance: Provenance::SuperspecialFKernel,
        p,
        g: Some(g),
        case: None,
    })
}

/// `gcd(2, p^2 - 1)`.
fn center(p: u64) -> u64 {
    if p == 2 {
        1
    } else {
        2
    }
}

/// `|PSL_2(F_{p^2})| = p^2 (p^4 - 1) / gcd(2, p^2 - 1)`.
pub fn psl2_order_big(p: u64) -> Integer {
    big_pow(p, 2) * (big_pow(p, 4) - 1) / center(p)
}

/// `L_p`: `(p-1)(p^2+1)`, `(p^2-1)(p^4-p^2)` or `(p^2-1) |PSL_2(F_{p^2})|`.
pub fn l_p(p: u64, case: XiCase) -> Integer {
    let p2m1 = big_pow(p, 2) - 1;
    match case {
        XiCase::I => (BigInt::from(p) - 1) * (big_pow(p, 2) + 1),
        XiCase::II => &p2m1 * (big_pow(p, 4) - big_pow(p, 2)),
        XiCase::III => &p2m1 * psl2_order_big(p),
    }
}

/// `Mass(Lambda_x) = L_p / 5760`; only the case of `xi` matters.
pub fn mass_lambda_x(p: u64, xc: &XiClass) -> Result<MassResult> {
    mass_case(p, xc.case)
}

pub fn mass_case(p: u64, case: XiCase) -> Result<MassResult> {
    check_prime(p)?;
    let value = Rational::new(l_p(p, case), 5760.into());
    Ok(MassResult {
        value,
        provenance: Provenance::LambdaX,
        p,
        g: Some(2),
        case: Some(case),
    })
}

/// Strata that carry a mass: the three cases of `xi`, plus the superspecial genus with
/// polarization kernel `A[F]` that cases II and III are measured against.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Stratum {
    FKernel,
    Superspecial,
    Quadratic,
    Generic,
}

impl From<XiCase> for Stratum {
    fn from(c: XiCase) -> Stratum {
        match c {
            XiCase::I => Stratum::Superspecial,
            XiCase::II => Stratum::Quadratic,
            XiCase::III => Stratum::Generic,
        }
    }
}

impl Stratum {
    pub fn mass(&self, p: u64) -> Result<MassResult> {
        match self {
            Stratum::FKernel => mass_superspecial_fkernel(2, p),
            Stratum::Superspecial => mass_case(p, XiCase::I),
            Stratum::Quadratic => mass_case(p, XiCase::II),
            Stratum::Generic => mass_case(p, XiCase::III),
        }
    }
}

/// `Mass(s2) / Mass(s1)`; for `s1 = FKernel` and `s2` of case II or III this is the
/// index `[U_{x_1} : U_x]`.
pub fn relative_index(p: u64, s1: Stratum, s2: Stratum) -> Result<Rational> {
    Ok(s2.mass(p)?.value / s1.mass(p)?.value)
}

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `|Sp_{2g}(Z/N)|`, multiplicative in `N`, with
/// `|Sp_{2g}(Z/l^k)| = l^{(k-1)(2g^2+g)} l^{g^2} prod_{i<=g} (l^{2i} - 1)`.
pub fn sp_group_order(g: u32, n: u64) -> Result<Integer> {
    if g == 0 || n < 2 {
        return Err(Error::InvalidParameter(format!(
            "need g >= 1 and N >= 2, got g = {g}, N = {n}"
        )));
    }
    let mut total = BigInt::one();
    for (l, k) in factorize(n) {
        total *= big_pow(l, (k - 1) * (2 * g * g + g)) * big_pow(l, g * g);
        for i in 1..=g {
            total *= big_pow(l, 2 * i) - 1;
        }
    }
    Ok(total)
}

/// `|Sp_4(Z/N)| * Mass(Lambda_x)`, the size of the prime-to-`p` Hecke orbit at level `N`.
pub fn hecke_orbit_size(p: u64, n: u64, case: XiCase) -> Result<Integer> {
    check_prime(p)?;
    if n < 3 || n.gcd(&p) != 1 {
        return Err(Error::Precondition(format!(
            "level N = {n} must be >= 3 and prime to p = {p}"
        )));
    }
    let size = Rational::from_integer(sp_group_order(2, n)?) * mass_case(p, case)?.value;
    if !size.is_integer() || !size.is_positive() {
        return Err(Error::Internal(format!(
            "orbit size {size} for p = {p}, N = {n}, case {case:?} is not a positive integer"
        )));
    }
    Ok(size.to_integer())
}

/// Moebius function.
pub fn moebius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, k)| k > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Number of points of `P^1` whose field of definition has degree exactly `d` over
/// `F_{p^2}`.
pub fn stratum_count(p: u64, d: u64) -> Integer {
    if d == 1 {
        return big_pow(p, 2) + 1;
    }
    divisors(d)
        .into_iter()
        .map(|e| BigInt::from(moebius(d / e)) * (big_pow(p, 2 * e as u32) + 1))
        .sum()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CensusRow {
    pub degree: u64,
    pub count: Integer,
    pub mass: Rational,
    pub orbit_size: Option<Integer>,
}

/// One row per divisor `d` of `m`.
pub fn census(p: u64, m: u64, level: Option<u64>) -> Result<Vec<CensusRow>> {
    check_prime(p)?;
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    divisors(m)
        .into_iter()
        .map(|d| {
            let case = XiCase::from_degree(d as usize);
            Ok(CensusRow {
                degree: d,
                count: stratum_count(p, d),
                mass: mass_case(p, case)?.value,
                orbit_size: level.map(|n| hecke_orbit_size(p, n, case)).transpose()?,
            })
        })
        .collect()
}

pub const CENSUS_CSV_HEADER: &str = "degree,count,mass_num,mass_den,orbit_size";

pub fn census_csv(rows: &[CensusRow]) -> String {
    let mut s = String::from(CENSUS_CSV_HEADER);
    s.push('\n');
    for r in rows {
        let orbit = r
            .orbit_size
            .as_ref()
            .map(ToString::to_string)
            .unwrap_or_default();
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            r.degree,
            r.count,
            r.mass.numer(),
            r.mass.denom(),
            orbit
        ));
    }
    s
}

/// `"num/den"`, also for integers.
pub fn rational_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{make_field, XiPoint};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn genus_one_and_two() {
        for p in crate::primes_up_to(50) {
            let pi = p as i64;
            // -(1/2) * zeta(-1) * (p - 1), zeta(-1) = -1/12
            assert_eq!(
                mass_superspecial(1, p).unwrap().value,
                q(-1, 2) * q(-1, 12) * q(pi - 1, 1)
            );
            assert_eq!(
                mass_superspecial(2, p).unwrap().value,
                q((pi - 1) * (pi * pi + 1), 5760)
            );
            assert_eq!(
                mass_superspecial_fkernel(2, p).unwrap().value,
                q(pi * pi - 1, 5760)
            );
        }
        let m = mass_superspecial(2, 2).unwrap();
        assert_eq!(m.value, q(5, 5760));
        assert_eq!(m.over_5760().as_deref(), Some("5/5760"));
        assert_eq!(mass_superspecial_fkernel(2, 2).unwrap().value, q(1, 1920));
        assert!(mass_superspecial_fkernel(3, 2).is_err());
        assert!(mass_superspecial(2, 4).is_err());
    }

    #[test]
    fn generic_scalar_agrees() {
        for g in 1..=4 {
            let big = superspecial_mass::<Rational>(g, 3);
            let small = superspecial_mass::<crate::Rational128>(g, 3);
            assert_eq!(big.numer().to_string(), small.numer().to_string());
            assert_eq!(big.denom().to_string(), small.denom().to_string());
        }
    }

    #[test]
    fn lambda_x_cases() {
        assert_eq!(mass_case(3, XiCase::I).unwrap().value, q(1, 288));
        assert_eq!(mass_case(2, XiCase::III).unwrap().value, q(1, 32));
        for p in [2u64, 3, 5, 7, 11] {
            let pi = p as i64;
            assert_eq!(
                mass_case(p, XiCase::I).unwrap(),
                MassResult {
                    case: Some(XiCase::I),
                    provenance: Provenance::LambdaX,
                    ..mass_superspecial(2, p).unwrap()
                }
            );
            assert_eq!(
                relative_index(p, Stratum::FKernel, Stratum::Quadratic).unwrap(),
                q(pi.pow(4) - pi * pi, 1)
            );
            let psl = Rational::from_integer(psl2_order_big(p));
            assert_eq!(
                relative_index(p, Stratum::FKernel, Stratum::Generic).unwrap(),
                psl
            );
            assert_eq!(
                relative_index(p, Stratum::Generic, Stratum::Generic).unwrap(),
                q(1, 1)
            );
        }
        assert_eq!(psl2_order_big(2), 60.into());
        assert_eq!(psl2_order_big(3), 360.into());
    }

    #[test]
    fn symplectic_orders() {
        assert_eq!(sp_group_order(1, 3).unwrap(), 24.into());
        assert_eq!(sp_group_order(2, 3).unwrap(), 51840.into());
        assert_eq!(sp_group_order(1, 4).unwrap(), 48.into());
        assert_eq!(sp_group_order(1, 6).unwrap(), (24 * 6).into());
        assert!(sp_group_order(1, 1).is_err());
    }

    #[test]
    fn hecke_examples() {
        assert_eq!(hecke_orbit_size(2, 3, XiCase::I).unwrap(), 45.into());
        let expect = Rational::from_integer(sp_group_order(2, 4).unwrap()) * q(20, 5760);
        assert_eq!(
            Rational::from_integer(hecke_orbit_size(3, 4, XiCase::I).unwrap()),
            expect
        );
        assert!(matches!(
            hecke_orbit_size(3, 6, XiCase::I),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            hecke_orbit_size(3, 2, XiCase::I),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn census_counts() {
        let rows = census(2, 6, None).unwrap();
        let counts: Vec<(u64, i64)> = rows
            .iter()
            .map(|r| (r.degree, r.count.to_string().parse().unwrap()))
            .collect();
        assert_eq!(counts[..3], [(1, 5), (2, 12), (3, 60)]);
        for p in [2u64, 3] {
            for m in 1..=3u64 {
                let k = make_field(p, m as usize).unwrap();
                let mut brute = std::collections::BTreeMap::<u64, i64>::new();
                for pt in XiPoint::all(&k) {
                    *brute.entry(crate::classify(&pt).degree as u64).or_default() += 1;
                }
                let rows = census(p, m, None).unwrap();
                let total: Integer = rows.iter().map(|r| r.count.clone()).sum();
                assert_eq!(total, big_pow(p, 2 * m as u32) + 1);
                for r in rows {
                    assert_eq!(
                        r.count,
                        brute[&r.degree].into(),
                        "p={p} m={m} d={}",
                        r.degree
                    );
                }
            }
        }
    }

    #[test]
    fn csv_shape() {
        let s = census_csv(&census(2, 2, Some(3)).unwrap());
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], CENSUS_CSV_HEADER);
        assert_eq!(lines[1], "1,5,1,1152,45");
        assert_eq!(lines.len(), 3);
    }
}
