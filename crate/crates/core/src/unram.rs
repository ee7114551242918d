//! `W(F_{p^2}) / p^m = Z_{p^2} / p^m` in the polynomial basis `{1, x}`, where `x` is a root
//! of the integer lift of the `F_{p^2}` defining polynomial. The Frobenius lift `sigma`
//! is determined by the image of `x`, found by Newton iteration from `x^p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ff::{Fp2, Fp2Ctx};
use crate::ring::Ring;

fn newton_rounds(prec: u32) -> u32 {
    let mut r = 0;
    while (1u64 << r) < prec as u64 {
        r += 1;
    }
    r + 1
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct UnramCtx {
    fp2: Fp2Ctx,
    prec: u32,
    modulus: u64,
    /// `x^2 + f[1] x + f[0]`, coefficients in `[0, p)`
    f: [u64; 2],
    sigma_x: [u64; 2],
}

/// Context for `Z_{p^2} / p^prec`.
pub fn make_unram(p: u64, prec: u32) -> Result<UnramCtx> {
    UnramCtx::new(Fp2Ctx::new(p)?, prec)
}

impl UnramCtx {
    pub fn new(fp2: Fp2Ctx, prec: u32) -> Result<Self> {
        let p = fp2.p();
        if prec == 0 {
            return Err(Error::InvalidParameter(
                "p-adic precision must be >= 1".into(),
            ));
        }
        let modulus = p
            .checked_pow(prec)
            .filter(|&m| m < 1 << 62)
            .ok_or(Error::PrecisionOverflow { p, prec })?;
        let mut ctx = UnramCtx {
            fp2,
            prec,
            modulus,
            f: fp2.defining_poly(),
            sigma_x: [0, 0],
        };
        let x = ctx.elem(0, 1);
        let fx = |y: UnramElem| {
            y * y + y * ctx.from_int(ctx.f[1] as i64) + ctx.from_int(ctx.f[0] as i64)
        };
        let dfx = |y: UnramElem| y * ctx.from_int(2) + ctx.from_int(ctx.f[1] as i64);
        let mut y = x.pow(p as u128);
        for _ in 0..newton_rounds(prec) {
            let d = dfx(y)
                .inverse()
                .map_err(|_| Error::Internal("f' not a unit at sigma(x)".into()))?;
            y = y - fx(y) * d;
        }
        if !fx(y).is_zero() {
            return Err(Error::Internal(
                "Hensel lift of sigma(x) did not converge".into(),
            ));
        }
        ctx.sigma_x = y.c;
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.fp2.p()
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn fp2(&self) -> Fp2Ctx {
        self.fp2
    }

    /// Integer lift `[f0, f1]` of the residue defining polynomial.
    pub fn defining_poly(&self) -> [u64; 2] {
        self.f
    }

    pub fn sigma_of_gen(&self) -> UnramElem {
        UnramElem {
            ctx: *self,
            c: self.sigma_x,
        }
    }

    pub fn elem(&self, a0: u64, a1: u64) -> UnramElem {
        UnramElem {
            ctx: *self,
            c: [a0 % self.modulus, a1 % self.modulus],
        }
    }

    pub fn from_int(&self, n: i64) -> UnramElem {
        let m = self.modulus as i128;
        self.elem((n as i128).rem_euclid(m) as u64, 0)
    }

    pub fn zero(&self) -> UnramElem {
        self.elem(0, 0)
    }

    pub fn one(&self) -> UnramElem {
        self.elem(1, 0)
    }

    pub fn gen(&self) -> UnramElem {
        self.elem(0, 1)
    }

    /// Same ring at a different precision.
    pub fn with_precision(&self, prec: u32) -> Result<UnramCtx> {
        UnramCtx::new(self.fp2, prec)
    }

    /// Lift with coordinates in `[0, p)`.
    pub fn lift(&self, a: Fp2) -> UnramElem {
        let [c0, c1] = a.coeffs();
        self.elem(c0, c1)
    }

    /// Teichmuller representative: the unique `(p^2 - 1)`-th root of unity (or 0) over `a`.
    pub fn teichmuller(&self, a: Fp2) -> UnramElem {
        let q = self.fp2.q() as u128;
        let mut t = self.lift(a);
        for _ in 0..self.prec {
            t = t.pow(q);
        }
        t
    }
}

/// Element `a0 + a1 x` of `Z_{p^2} / p^m`, coordinates in `[0, p^m)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnramElem {
    ctx: UnramCtx,
    c: [u64; 2],
}

impl fmt::Debug for UnramElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UnramElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{}] mod {}^{}",
            self.c[0],
            self.c[1],
            self.ctx.p(),
            self.ctx.prec
        )
    }
}

fn vp(n: u64, p: u64, cap: u32) -> u32 {
    if n == 0 {
        return cap;
    }
    let (mut n, mut v) = (n, 0);
    while n % p == 0 && v < cap {
        n /= p;
        v += 1;
    }
    v
}

impl UnramElem {
    pub fn ctx(&self) -> UnramCtx {
        self.ctx
    }

    pub fn coeffs(&self) -> [u64; 2] {
        self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c == [0, 0]
    }

    pub fn pow(&self, mut e: u128) -> UnramElem {
        let mut base = *self;
        let mut r = self.ctx.one();
        while e > 0 {
            if e & 1 == 1 {
                r = r * base;
            }
            base = base * base;
            e >>= 1;
        }
        r
    }

    /// Frobenius lift: `a0 + a1 x -> a0 + a1 sigma(x)`.
    pub fn sigma(&self) -> UnramElem {
        self.ctx.from_u64(self.c[0]) + self.ctx.from_u64(self.c[1]) * self.ctx.sigma_of_gen()
    }

    /// `sigma^n`; depends only on the parity of `n`.
    pub fn sigma_pow(&self, n: i64) -> UnramElem {
        if n.rem_euclid(2) == 0 {
            *self
        } else {
            self.sigma()
        }
    }

    /// p-adic valuation, saturating at the precision.
    pub fn valuation(&self) -> u32 {
        let p = self.ctx.p();
        vp(self.c[0], p, self.ctx.prec).min(vp(self.c[1], p, self.ctx.prec))
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == 0
    }

    /// Reduction mod p to `F_{p^2}`.
    pub fn reduce(&self) -> Fp2 {
        self.ctx.fp2.elem(self.c[0], self.c[1])
    }

    /// Multiplicative inverse by Newton iteration from the residue inverse.
    pub fn inverse(&self) -> Result<UnramElem> {
        let r = self.reduce().inverse().ok_or(Error::NonUnit)?;
        let mut y = self.ctx.lift(r);
        let two = self.ctx.from_int(2);
        for _ in 0..newton_rounds(self.ctx.prec) {
            y = y * (two - *self * y);
        }
        if *self * y != self.ctx.one() {
            return Err(Error::Internal("Newton inverse did not converge".into()));
        }
        Ok(y)
    }

    /// Multiply by `p^k` (digits shifted out of precision are lost).
    pub fn mul_p_pow(&self, k: u32) -> UnramElem {
        if k >= self.ctx.prec {
            return self.ctx.zero();
        }
        let s = self.ctx.p().pow(k) as u128;
        let m = self.ctx.modulus as u128;
        UnramElem {
            ctx: self.ctx,
            c: [
                (self.c[0] as u128 * s % m) as u64,
                (self.c[1] as u128 * s % m) as u64,
            ],
        }
    }

    /// Exact division by `p^k`; requires `valuation() >= k`. The result is determined
    /// modulo `p^{prec - k}` and returned with its canonical representative.
    pub fn div_p_pow(&self, k: u32) -> UnramElem {
        assert!(
            self.valuation() >= k,
            "division by p^{k} of an element of smaller valuation"
        );
        let s = self.ctx.p().pow(k);
        UnramElem {
            ctx: self.ctx,
            c: [self.c[0] / s, self.c[1] / s],
        }
    }

    /// Coordinates reduced modulo `p^k` (kept in the same context).
    pub fn truncate(&self, k: u32) -> UnramElem {
        if k >= self.ctx.prec {
            return *self;
        }
        let s = self.ctx.p().pow(k);
        UnramElem {
            ctx: self.ctx,
            c: [self.c[0] % s, self.c[1] % s],
        }
    }

    /// Reinterpret in a context of the same field at another precision (reducing if lower).
    pub fn to_ctx(&self, ctx: UnramCtx) -> UnramElem {
        assert_eq!(ctx.fp2, self.ctx.fp2, "cross-context p-adic conversion");
        ctx.elem(self.c[0], self.c[1])
    }

    fn check(&self, rhs: &UnramElem) {
        assert_eq!(self.ctx, rhs.ctx, "cross-context p-adic arithmetic");
    }
}

impl UnramCtx {
    fn from_u64(&self, n: u64) -> UnramElem {
        self.elem(n, 0)
    }
}

impl Add for UnramElem {
    type Output = UnramElem;
    fn add(self, rhs: UnramElem) -> UnramElem {
        self.check(&rhs);
        let m = self.ctx.modulus;
        UnramElem {
            ctx: self.ctx,
            c: [(self.c[0] + rhs.c[0]) % m, (self.c[1] + rhs.c[1]) % m],
        }
    }
}

impl Neg for UnramElem {
    type Output = UnramElem;
    fn neg(self) -> UnramElem {
        let m = self.ctx.modulus;
        UnramElem {
            ctx: self.ctx,
            c: [(m - self.c[0]) % m, (m - self.c[1]) % m],
        }
    }
}

impl Sub for UnramElem {
    type Output = UnramElem;
    fn sub(self, rhs: UnramElem) -> UnramElem {
        self + (-rhs)
    }
}

impl Mul for UnramElem {
    type Output = UnramElem;
    fn mul(self, rhs: UnramElem) -> UnramElem {
        self.check(&rhs);
        let m = self.ctx.modulus as u128;
        let (a0, a1) = (self.c[0] as u128, self.c[1] as u128);
        let (b0, b1) = (rhs.c[0] as u128, rhs.c[1] as u128);
        let c0 = a0 * b0 % m;
        let c1 = (a0 * b1 % m + a1 * b0 % m) % m;
        let c2 = a1 * b1 % m;
        let f0 = self.ctx.f[0] as u128;
        let f1 = self.ctx.f[1] as u128;
        // x^2 = -f1 x - f0
        let r0 = (c0 + m - c2 * f0 % m) % m;
        let r1 = (c1 + m - c2 * f1 % m) % m;
        UnramElem {
            ctx: self.ctx,
            c: [r0 as u64, r1 as u64],
        }
    }
}

impl Ring for UnramElem {
    fn zero_like(&self) -> Self {
        self.ctx.zero()
    }
    fn one_like(&self) -> Self {
        self.ctx.one()
    }
}
