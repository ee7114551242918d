//! Classification of `xi` in `P^1` by the degree of `F_{p^2}(xi)` over `F_{p^2}`, the
//! reduction algebra `B_0'` of the local endomorphism order, and line stabilizers in
//! `SL_2(F_{p^2})`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{make_field, FFElem, FieldCtx, Fp2, Fp2Ctx};
use crate::quat::mat_reduce;
use crate::ring::{in_span, Mat};
use crate::QuatMat;

/// A point `[a : b]` of `P^1(F_{p^{2m}})`, normalized to `[1 : b]` or `[0 : 1]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct XiPoint {
    a: FFElem,
    b: FFElem,
}

impl XiPoint {
    pub fn new(a: FFElem, b: FFElem) -> Result<Self> {
        if a.ctx() != b.ctx() {
            return Err(Error::ContextMismatch);
        }
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidParameter(
                "[0 : 0] is not a point of P^1".into(),
            ));
        }
        if a.is_zero() {
            let k = a.ctx().clone();
            return Ok(XiPoint {
                a: k.zero(),
                b: k.one(),
            });
        }
        let inv = a.inverse().expect("nonzero");
        Ok(XiPoint {
            a: a.ctx().one(),
            b: &b * &inv,
        })
    }

    /// `[1 : b]`.
    pub fn affine(b: FFElem) -> Self {
        XiPoint {
            a: b.ctx().one(),
            b,
        }
    }

    /// `[0 : 1]`.
    pub fn infinity(k: &FieldCtx) -> Self {
        XiPoint {
            a: k.zero(),
            b: k.one(),
        }
    }

    pub fn a(&self) -> &FFElem {
        &self.a
    }

    pub fn b(&self) -> &FFElem {
        &self.b
    }

    pub fn is_infinity(&self) -> bool {
        self.a.is_zero()
    }

    pub fn field(&self) -> &FieldCtx {
        self.a.ctx()
    }

    /// All `p^{2m} + 1` points, `[1 : b]` in enumeration order of `b`, then `[0 : 1]`.
    pub fn all(k: &FieldCtx) -> Vec<XiPoint> {
        let mut pts: Vec<XiPoint> = k.elements().map(XiPoint::affine).collect();
        pts.push(XiPoint::infinity(k));
        pts
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, PartialOrd, Ord)]
pub enum XiCase {
    /// `xi` rational over `F_{p^2}`: superspecial.
    I,
    /// `[F_{p^2}(xi) : F_{p^2}] = 2`.
    II,
    /// degree at least 3.
    III,
}

impl XiCase {
    pub fn from_degree(d: usize) -> XiCase {
        match d {
            0 => panic!("degree is at least 1"),
            1 => XiCase::I,
            2 => XiCase::II,
            _ => XiCase::III,
        }
    }

    /// `F_{p^2}`-dimension of `B_0'`.
    pub fn b0prime_dim(&self) -> usize {
        match self {
            XiCase::I => 4,
            XiCase::II => 2,
            XiCase::III => 1,
        }
    }
}

/// Classification record. For case II, `X^2 - alpha X - beta` is the minimal polynomial
/// of `b`; it is absent for symbolic (degree-only) classes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct XiClass {
    pub case: XiCase,
    pub degree: usize,
    pub alpha: Option<Fp2>,
    pub beta: Option<Fp2>,
}

impl XiClass {
    /// Symbolic class of a generic point of the given degree.
    pub fn generic(degree: usize) -> XiClass {
        XiClass {
            case: XiCase::from_degree(degree),
            degree,
            alpha: None,
            beta: None,
        }
    }
}

pub fn classify(xi: &XiPoint) -> XiClass {
    if xi.is_infinity() {
        return XiClass::generic(1);
    }
    let (d, poly) = xi.b.min_poly_over_fp2();
    let case = XiCase::from_degree(d);
    let (alpha, beta) = if case == XiCase::II {
        // X^2 + c1 X + c0 = X^2 - alpha X - beta
        let alpha = -poly[1];
        let beta = -poly[0];
        let b = &xi.b;
        let k = b.ctx();
        let check = &(&(b * b) - &(&k.embed(alpha) * b)) - &k.embed(beta);
        assert!(check.is_zero(), "alpha/beta sign convention");
        (Some(alpha), Some(beta))
    } else {
        (None, None)
    };
    XiClass {
        case,
        degree: d,
        alpha,
        beta,
    }
}

/// Subalgebra of `M_2(F_{p^2})` given by an `F_{p^2}`-basis.
#[derive(Clone, Debug, PartialEq)]
pub struct EndoOrderDesc {
    pub case: XiCase,
    pub basis: Vec<Mat<Fp2>>,
}

fn flatten(m: &Mat<Fp2>) -> Vec<Fp2> {
    m.entries().copied().collect()
}

fn unit_matrix(f: Fp2Ctx, i: usize, j: usize) -> Mat<Fp2> {
    Mat::from_fn(
        2,
        2,
        |r, c| if (r, c) == (i, j) { f.one() } else { f.zero() },
    )
}

impl EndoOrderDesc {
    pub fn dim(&self) -> usize {
        let rows: Vec<Vec<Fp2>> = self.basis.iter().map(flatten).collect();
        if rows.is_empty() {
            0
        } else {
            Mat::from_rows(rows).rank()
        }
    }

    pub fn contains(&self, m: &Mat<Fp2>) -> bool {
        let rows: Vec<Vec<Fp2>> = self.basis.iter().map(flatten).collect();
        in_span(&rows, &flatten(m))
    }
}

/// `B_0'`: all of `M_2(F_{p^2})` in case I (the endomorphism order is then a full
/// `M_2(O_D)`), `{t1 I + t2 [[0, 1], [beta, alpha]]}` in case II, scalars in case III.
pub fn b0prime(xc: &XiClass, f: Fp2Ctx) -> Result<EndoOrderDesc> {
    let id = Mat::identity_like(&f.one(), 2);
    let basis = match xc.case {
        XiCase::I => vec![
            unit_matrix(f, 0, 0),
            unit_matrix(f, 0, 1),
            unit_matrix(f, 1, 0),
            unit_matrix(f, 1, 1),
        ],
        XiCase::II => {
            let (Some(alpha), Some(beta)) = (xc.alpha, xc.beta) else {
                return Err(Error::Precondition(
                    "case II needs a concrete minimal polynomial".into(),
                ));
            };
            vec![
                id,
                Mat::from_rows(vec![vec![f.zero(), f.one()], vec![beta, alpha]]),
            ]
        }
        XiCase::III => vec![id],
    };
    Ok(EndoOrderDesc {
        case: xc.case,
        basis,
    })
}

/// Whether the reduction of `T` modulo `Pi` lies in `desc`.
pub fn endo_membership(t: &QuatMat, desc: &EndoOrderDesc) -> bool {
    desc.contains(&mat_reduce(t))
}

/// `{T in M_2(F_{p^2}) : T v in k v}` for `v = (a, b)`, computed as the null space of the
/// linear condition `a12 b^2 + (a11 - a22) b - a21 = 0` expanded over an `F_{p^2}`-basis
/// of `F_{p^{2m}}` (or `a12 = 0` at infinity). Independent of [`classify`].
pub fn line_stabilizer_algebra(xi: &XiPoint) -> EndoOrderDesc {
    let k = xi.field();
    let f = k.fp2();
    let m = k.m();
    // unknowns ordered (a11, a12, a21, a22)
    let rows: Vec<Vec<Fp2>> = if xi.is_infinity() {
        vec![vec![f.zero(), f.one(), f.zero(), f.zero()]]
    } else {
        let b = xi.b.coeffs_fp2().to_vec();
        let b2 = (&xi.b * &xi.b).coeffs_fp2().to_vec();
        (0..m)
            .map(|j| {
                let delta = if j == 0 { f.one() } else { f.zero() };
                vec![b[j], b2[j], -delta, -b[j]]
            })
            .collect()
    };
    let ns = Mat::from_rows(rows).nullspace();
    let basis = ns
        .iter()
        .map(|v| Mat::from_rows(vec![vec![v[0], v[1]], vec![v[2], v[3]]]))
        .collect();
    let case = if xi.is_infinity() {
        XiCase::I
    } else {
        XiCase::from_degree(xi.b.degree_over_fp2())
    };
    EndoOrderDesc { case, basis }
}

/// `|SL_2(F_{p^2})| = q (q^2 - 1)`.
pub fn sl2_order(p: u64) -> u128 {
    let q = (p as u128) * (p as u128);
    q * (q * q - 1)
}

/// `|PSL_2(F_{p^2})| = |SL_2(F_{p^2})| / gcd(2, p^2 - 1)`.
pub fn psl2_order(p: u64) -> u128 {
    sl2_order(p) / center_order(p)
}

/// `gcd(2, p^2 - 1)`: the order of `{+-1}` in `SL_2(F_{p^2})`.
pub fn center_order(p: u64) -> u128 {
    if p == 2 {
        1
    } else {
        2
    }
}

/// Closed-form order of the stabilizer in `SL_2(F_{p^2})` of the line through
/// `v = (a, b)`.
pub fn sl2_line_stabilizer_order(xi: &XiPoint) -> u128 {
    stabilizer_order_for_case(xi.field().p(), classify(xi).case)
}

/// Same, from the case alone: `p^2 (p^2 - 1)`, `p^2 + 1` or `gcd(2, p^2 - 1)`.
pub fn stabilizer_order_for_case(p: u64, case: XiCase) -> u128 {
    let q = (p as u128) * (p as u128);
    match case {
        XiCase::I => q * (q - 1),
        XiCase::II => q + 1,
        XiCase::III => center_order(p),
    }
}

/// How `xi` was given on the command line or in a job description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XiSpec {
    /// `F_p`-coordinate vectors of `a` and `b`.
    Coords { a: Vec<u64>, b: Vec<u64> },
    /// A generic point of the given degree over `F_{p^2}`.
    Generic(usize),
}

impl XiSpec {
    /// Grammar: `generic:d`, or `a0.a1...,b0.b1...`.
    pub fn parse(s: &str) -> Result<XiSpec> {
        let s = s.trim();
        if let Some(d) = s.strip_prefix("generic:") {
            let d: usize = d
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree in {s:?}")))?;
            if d == 0 {
                return Err(Error::Parse("degree must be >= 1".into()));
            }
            return Ok(XiSpec::Generic(d));
        }
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::Parse(format!(
                "expected `a,b` or `generic:d`, got {s:?}"
            )));
        }
        let vec = |t: &str| -> Result<Vec<u64>> {
            t.split('.')
                .map(|c| {
                    c.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad coordinate {c:?} in {s:?}")))
                })
                .collect()
        };
        Ok(XiSpec::Coords {
            a: vec(parts[0])?,
            b: vec(parts[1])?,
        })
    }

    /// Degree over `F_{p^2}` if known without building a field.
    pub fn symbolic_degree(&self) -> Option<usize> {
        match self {
            XiSpec::Generic(d) => Some(*d),
            XiSpec::Coords { .. } => None,
        }
    }

    /// Build the tower (default `m`: the generic degree, else 1) and the point. A generic
    /// point of degree `d` is `[1 : b]` with `b` the first element of exact degree `d`.
    pub fn resolve(&self, p: u64, m: Option<usize>) -> Result<XiPoint> {
        match self {
            XiSpec::Generic(d) => {
                let m = m.unwrap_or(*d);
                if m % d != 0 {
                    return Err(Error::InvalidParameter(format!(
                        "degree {d} does not divide m = {m}"
                    )));
                }
                let k = make_field(p, m)?;
                let b = k.first_of_degree(*d).expect("d divides m");
                Ok(XiPoint::affine(b))
            }
            XiSpec::Coords { a, b } => {
                let k = make_field(p, m.unwrap_or(1))?;
                if a.iter().chain(b).any(|&c| c >= p) {
                    return Err(Error::InvalidParameter(format!(
                        "coordinates must lie in [0, {p})"
                    )));
                }
                XiPoint::new(k.from_fp_coeffs(a)?, k.from_fp_coeffs(b)?)
            }
        }
    }
}
