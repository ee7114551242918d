//! The maximal order `O_D = W(F_{p^2})[Pi]`, `Pi^2 = -p`, `Pi a = sigma(a) Pi`, truncated
//! modulo `Pi^N`.
//!
//! An element `a + b Pi` is stored with `a` modulo `p^{ceil(N/2)}` and `b` modulo
//! `p^{floor(N/2)}`, which is exactly the information visible modulo `Pi^N`. Both
//! coordinates live in the same [`UnramCtx`] (precision `ceil(N/2)`); `b` is kept
//! reduced so that equality is equality modulo `Pi^N`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ff::{Fp2, Fp2Ctx};
use crate::ring::{Mat, Ring};
use crate::unram::{UnramCtx, UnramElem};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct QuatCtx {
    unram: UnramCtx,
    prec: u32,
}

impl QuatCtx {
    /// `O_D / Pi^prec` over `F_{p^2}`.
    pub fn new(p: u64, prec: u32) -> Result<Self> {
        Self::from_fp2(Fp2Ctx::new(p)?, prec)
    }

    pub fn from_fp2(fp2: Fp2Ctx, prec: u32) -> Result<Self> {
        if prec == 0 {
            return Err(Error::InvalidParameter(
                "Pi-adic precision must be >= 1".into(),
            ));
        }
        Ok(QuatCtx {
            unram: UnramCtx::new(fp2, prec.div_ceil(2))?,
            prec,
        })
    }

    pub fn p(&self) -> u64 {
        self.unram.p()
    }

    /// `Pi`-adic precision `N`.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn unram(&self) -> UnramCtx {
        self.unram
    }

    pub fn fp2(&self) -> Fp2Ctx {
        self.unram.fp2()
    }

    /// p-adic precision of the `Pi`-coordinate.
    fn b_prec(&self) -> u32 {
        self.prec / 2
    }

    pub fn elem(&self, a: UnramElem, b: UnramElem) -> QuatElem {
        assert_eq!(a.ctx(), self.unram, "coordinate from another context");
        assert_eq!(b.ctx(), self.unram, "coordinate from another context");
        QuatElem {
            ctx: *self,
            a,
            b: b.truncate(self.b_prec()),
        }
    }

    pub fn from_unram(&self, a: UnramElem) -> QuatElem {
        self.elem(a, self.unram.zero())
    }

    pub fn from_int(&self, n: i64) -> QuatElem {
        self.from_unram(self.unram.from_int(n))
    }

    pub fn zero(&self) -> QuatElem {
        self.from_int(0)
    }

    pub fn one(&self) -> QuatElem {
        self.from_int(1)
    }

    pub fn pi(&self) -> QuatElem {
        self.elem(self.unram.zero(), self.unram.one())
    }

    /// `u * Pi^k` for a coefficient `u` in `W(F_{p^2})`; zero once `k >= N`.
    pub fn times_pi_power(&self, u: UnramElem, k: u32) -> QuatElem {
        if k >= self.prec {
            return self.zero();
        }
        let j = k / 2;
        let sign = if j % 2 == 0 {
            self.unram.one()
        } else {
            -self.unram.one()
        };
        let coeff = (sign * u).mul_p_pow(j);
        if k % 2 == 0 {
            self.from_unram(coeff)
        } else {
            self.elem(self.unram.zero(), coeff)
        }
    }

    /// Canonical lift of `c` (coordinates in `[0, p)`, no `Pi` part) times `Pi^k`.
    pub fn from_pi_power(&self, c: Fp2, k: u32) -> QuatElem {
        self.times_pi_power(self.unram.lift(c), k)
    }

    /// Same order at another `Pi`-adic precision.
    pub fn with_precision(&self, prec: u32) -> Result<QuatCtx> {
        QuatCtx::from_fp2(self.fp2(), prec)
    }
}

/// `a + b Pi` modulo `Pi^N`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuatElem {
    ctx: QuatCtx,
    a: UnramElem,
    b: UnramElem,
}

impl fmt::Debug for QuatElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) + ({:?})Pi", self.a.coeffs(), self.b.coeffs())
    }
}

impl QuatElem {
    pub fn ctx(&self) -> QuatCtx {
        self.ctx
    }

    pub fn a(&self) -> UnramElem {
        self.a
    }

    pub fn b(&self) -> UnramElem {
        self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Canonical involution `(a + b Pi)^* = sigma(a) - b Pi`.
    pub fn star(&self) -> QuatElem {
        self.ctx.elem(self.a.sigma(), -self.b)
    }

    /// `Pi^n x Pi^{-n}`: applies `sigma^n` to both coordinates.
    pub fn twist(&self, n: i64) -> QuatElem {
        self.ctx.elem(self.a.sigma_pow(n), self.b.sigma_pow(n))
    }

    /// `Pi`-adic valuation `min(2 v(a), 2 v(b) + 1)`, saturating at `N`.
    pub fn valuation(&self) -> u32 {
        let va = if self.a.is_zero() {
            u32::MAX
        } else {
            2 * self.a.valuation()
        };
        let vb = if self.b.is_zero() {
            u32::MAX
        } else {
            2 * self.b.valuation() + 1
        };
        va.min(vb).min(self.ctx.prec)
    }

    /// Reduction modulo `Pi`.
    pub fn reduce(&self) -> Fp2 {
        self.a.reduce()
    }

    /// The `c` in `F_{p^2}` with `self = c Pi^k (mod Pi^{k+1})`; needs `valuation() >= k`
    /// and `k < N`.
    pub fn leading_coeff(&self, k: u32) -> Fp2 {
        assert!(
            k < self.ctx.prec,
            "digit {k} is beyond precision {}",
            self.ctx.prec
        );
        assert!(
            self.valuation() >= k,
            "element has valuation {} < {k}",
            self.valuation()
        );
        let j = k / 2;
        let c = if k % 2 == 0 {
            self.a.div_p_pow(j)
        } else {
            self.b.div_p_pow(j)
        }
        .reduce();
        if j % 2 == 0 {
            c
        } else {
            -c
        }
    }

    /// Image in `M_2(W(F_{p^2}))`: `[[a, -p b], [sigma(b), sigma(a)]]`. This is the
    /// matrix of left multiplication on `O_D` viewed as a right `W`-module with basis
    /// `{1, Pi}`, hence a ring homomorphism; the involution becomes the adjugate. For odd
    /// `N` the lower-left entry is only meaningful modulo `p^{floor(N/2)}`.
    pub fn embed(&self) -> Mat<UnramElem> {
        let p = self.ctx.unram.from_int(self.ctx.p() as i64);
        Mat::from_rows(vec![
            vec![self.a, -(p * self.b)],
            vec![self.b.sigma(), self.a.sigma()],
        ])
    }

    /// Reduce into a context of lower (or equal) precision.
    pub fn truncate_to(&self, ctx: QuatCtx) -> QuatElem {
        assert!(
            ctx.prec <= self.ctx.prec,
            "truncation cannot raise precision"
        );
        ctx.elem(self.a.to_ctx(ctx.unram), self.b.to_ctx(ctx.unram))
    }

    fn check(&self, rhs: &QuatElem) {
        assert_eq!(self.ctx, rhs.ctx, "cross-context quaternion arithmetic");
    }
}

impl Add for QuatElem {
    type Output = QuatElem;
    fn add(self, rhs: QuatElem) -> QuatElem {
        self.check(&rhs);
        self.ctx.elem(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Neg for QuatElem {
    type Output = QuatElem;
    fn neg(self) -> QuatElem {
        self.ctx.elem(-self.a, -self.b)
    }
}

impl Sub for QuatElem {
    type Output = QuatElem;
    fn sub(self, rhs: QuatElem) -> QuatElem {
        self + (-rhs)
    }
}

impl Mul for QuatElem {
    type Output = QuatElem;
    /// `(a + b Pi)(c + d Pi) = (ac - p b sigma(d)) + (ad + b sigma(c)) Pi`.
    fn mul(self, rhs: QuatElem) -> QuatElem {
        self.check(&rhs);
        let p = self.ctx.unram.from_int(self.ctx.p() as i64);
        let a = self.a * rhs.a - p * self.b * rhs.b.sigma();
        let b = self.a * rhs.b + self.b * rhs.a.sigma();
        self.ctx.elem(a, b)
    }
}

impl Ring for QuatElem {
    fn zero_like(&self) -> Self {
        self.ctx.zero()
    }
    fn one_like(&self) -> Self {
        self.ctx.one()
    }
}

pub use crate::QuatMat;

/// `w = [[0, -1], [1, 0]]`.
pub fn w_matrix(ctx: QuatCtx) -> QuatMat {
    Mat::from_rows(vec![
        vec![ctx.zero(), -ctx.one()],
        vec![ctx.one(), ctx.zero()],
    ])
}

/// Conjugate transpose `(T^*)_{ij} = (T_{ji})^*`.
pub fn mat_star(t: &QuatMat) -> QuatMat {
    Mat::from_fn(t.cols(), t.rows(), |i, j| t[(j, i)].star())
}

/// `T^{(n)} = Pi^n T Pi^{-n}` entrywise.
pub fn mat_twist(t: &QuatMat, n: i64) -> QuatMat {
    t.map(|x| x.twist(n))
}

/// `(T^*)^{(1)} w T - w`; `T` satisfies the hermitian condition modulo `Pi^N` iff this
/// vanishes. (`Pi^{-1} T^* Pi = (T^*)^{(-1)} = (T^*)^{(1)}` because `sigma^2 = 1`.)
pub fn hermitian_defect(t: &QuatMat) -> QuatMat {
    let w = w_matrix(t.proto().ctx());
    let x = &(&mat_twist(&mat_star(t), 1) * &w) * t;
    &x - &w
}

/// Minimum entry valuation, saturating at `N`.
pub fn mat_valuation(t: &QuatMat) -> u32 {
    t.entries().map(QuatElem::valuation).min().unwrap_or(0)
}

/// Entrywise reduction modulo `Pi`.
pub fn mat_reduce(t: &QuatMat) -> Mat<Fp2> {
    t.map(QuatElem::reduce)
}

/// Lift a matrix over `F_{p^2}`, coordinates in `[0, p)`, no `Pi` part.
pub fn canonical_lift(m: &Mat<Fp2>, ctx: QuatCtx) -> QuatMat {
    m.map(|c| ctx.from_unram(ctx.unram().lift(*c)))
}

/// Lift a matrix over `F_{p^2}` through Teichmuller representatives.
pub fn teichmuller_lift(m: &Mat<Fp2>, ctx: QuatCtx) -> QuatMat {
    m.map(|c| ctx.from_unram(ctx.unram().teichmuller(*c)))
}

/// Block image in `M_{2n}(W(F_{p^2}))`, block `(i, j)` being `embed(T_ij)`.
pub fn mat_embed(t: &QuatMat) -> Mat<UnramElem> {
    let blocks = t.map(QuatElem::embed);
    Mat::from_fn(2 * t.rows(), 2 * t.cols(), |r, c| {
        blocks[(r / 2, c / 2)][(r % 2, c % 2)]
    })
}
