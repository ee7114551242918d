//! Finite fields `F_p ⊂ F_{p^2} ⊂ F_{p^{2m}}`.
//!
//! `F_{p^2} = F_p[x]/(x^2 + f1 x + f0)` and `F_{p^{2m}} = F_{p^2}[y]/(g(y))`, where both
//! defining polynomials are the lexicographically smallest monic irreducibles of their
//! degree (coefficients compared from the constant term upward, each coefficient ordered
//! by its index in the element enumeration). The construction is deterministic, so
//! every output that prints field elements is reproducible.
//!
//! Element enumeration order: an element with `F_p`-coordinates `[c0, c1, ...]` has index
//! `c0 + c1 p + c2 p^2 + ...`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{Field, Ring};

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

/// Context of `F_{p^2}`; small and `Copy` so that elements can carry it inline.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp2Ctx {
    p: u64,
    f0: u64,
    f1: u64,
}

impl Fp2Ctx {
    pub fn new(p: u64) -> Result<Self> {
        if !crate::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        for f0 in 0..p {
            for f1 in 0..p {
                let has_root = (0..p).any(|t| (t * t % p + f1 * t % p + f0) % p == 0);
                if !has_root {
                    return Ok(Fp2Ctx { p, f0, f1 });
                }
            }
        }
        unreachable!("an irreducible quadratic exists over every prime field")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `q = p^2`.
    pub fn q(&self) -> u64 {
        self.p * self.p
    }

    /// `[f0, f1]` for the defining polynomial `x^2 + f1 x + f0`.
    pub fn defining_poly(&self) -> [u64; 2] {
        [self.f0, self.f1]
    }

    pub fn elem(&self, c0: u64, c1: u64) -> Fp2 {
        Fp2 {
            ctx: *self,
            c: [c0 % self.p, c1 % self.p],
        }
    }

    pub fn from_int(&self, n: i64) -> Fp2 {
        self.elem(n.rem_euclid(self.p as i64) as u64, 0)
    }

    pub fn zero(&self) -> Fp2 {
        self.elem(0, 0)
    }

    pub fn one(&self) -> Fp2 {
        self.elem(1, 0)
    }

    /// The class of `x`.
    pub fn gen(&self) -> Fp2 {
        self.elem(0, 1)
    }

    pub fn from_index(&self, idx: u64) -> Fp2 {
        self.elem(idx % self.p, idx / self.p % self.p)
    }

    /// All `p^2` elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = Fp2> + '_ {
        (0..self.q()).map(move |i| self.from_index(i))
    }
}

/// Element of `F_{p^2}` as `c0 + c1 x`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp2 {
    ctx: Fp2Ctx,
    c: [u64; 2],
}

impl fmt::Debug for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.c[0], self.c[1])
    }
}

impl Fp2 {
    pub fn ctx(&self) -> Fp2Ctx {
        self.ctx
    }

    pub fn coeffs(&self) -> [u64; 2] {
        self.c
    }

    pub fn index(&self) -> u64 {
        self.c[0] + self.c[1] * self.ctx.p
    }

    pub fn is_zero(&self) -> bool {
        self.c == [0, 0]
    }

    /// `Some(c)` when the element lies in `F_p`.
    pub fn as_prime_field(&self) -> Option<u64> {
        (self.c[1] == 0).then_some(self.c[0])
    }

    pub fn pow(&self, mut e: u128) -> Fp2 {
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

    /// Frobenius `x -> x^p`; on `F_{p^2}` this is the nontrivial automorphism.
    pub fn frobenius(&self) -> Fp2 {
        self.pow(self.ctx.p as u128)
    }

    /// `N(x) = x * x^p`, an element of `F_p`.
    pub fn norm(&self) -> u64 {
        (*self * self.frobenius()).c[0]
    }

    pub fn inverse(&self) -> Option<Fp2> {
        if self.is_zero() {
            return None;
        }
        let p = self.ctx.p;
        let n_inv = mod_pow(self.norm(), p - 2, p);
        Some(self.frobenius() * self.ctx.elem(n_inv, 0))
    }

    fn check(&self, rhs: &Fp2) {
        assert_eq!(self.ctx, rhs.ctx, "cross-context F_p^2 arithmetic");
    }
}

impl Add for Fp2 {
    type Output = Fp2;
    fn add(self, rhs: Fp2) -> Fp2 {
        self.check(&rhs);
        self.ctx.elem(self.c[0] + rhs.c[0], self.c[1] + rhs.c[1])
    }
}

impl Sub for Fp2 {
    type Output = Fp2;
    fn sub(self, rhs: Fp2) -> Fp2 {
        self + (-rhs)
    }
}

impl Neg for Fp2 {
    type Output = Fp2;
    fn neg(self) -> Fp2 {
        let p = self.ctx.p;
        self.ctx.elem((p - self.c[0]) % p, (p - self.c[1]) % p)
    }
}

impl Mul for Fp2 {
    type Output = Fp2;
    fn mul(self, rhs: Fp2) -> Fp2 {
        self.check(&rhs);
        let p = self.ctx.p as u128;
        let (a0, a1) = (self.c[0] as u128, self.c[1] as u128);
        let (b0, b1) = (rhs.c[0] as u128, rhs.c[1] as u128);
        let c0 = a0 * b0 % p;
        let c1 = (a0 * b1 + a1 * b0) % p;
        let c2 = a1 * b1 % p;
        // x^2 = -f1 x - f0
        let f0 = self.ctx.f0 as u128;
        let f1 = self.ctx.f1 as u128;
        let r0 = (c0 + p * p - c2 * f0 % p) % p;
        let r1 = (c1 + p * p - c2 * f1 % p) % p;
        self.ctx.elem(r0 as u64, r1 as u64)
    }
}

impl Ring for Fp2 {
    fn zero_like(&self) -> Self {
        self.ctx.zero()
    }
    fn one_like(&self) -> Self {
        self.ctx.one()
    }
}

impl Field for Fp2 {
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
}

/// First `y` (in enumeration order) with `y + y^p = c`.
pub fn trace_solve(ctx: Fp2Ctx, c: u64) -> Fp2 {
    let target = ctx.from_int(c as i64);
    ctx.elements()
        .find(|y| *y + y.frobenius() == target)
        .expect("the trace F_{p^2} -> F_p is surjective")
}

// ---- polynomials over F_{p^2}, low degree first ----

fn poly_trim(a: &mut Vec<Fp2>) {
    while a.len() > 1 && a.last().is_some_and(Fp2::is_zero) {
        a.pop();
    }
}

fn poly_mul(a: &[Fp2], b: &[Fp2]) -> Vec<Fp2> {
    let ctx = a[0].ctx;
    let mut r = vec![ctx.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] = r[i + j] + *x * *y;
        }
    }
    r
}

/// Remainder of `a` modulo a nonzero `m`.
fn poly_rem(a: &[Fp2], m: &[Fp2]) -> Vec<Fp2> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let mut m = m.to_vec();
    poly_trim(&mut m);
    let dm = m.len() - 1;
    let lead_inv = m[dm].inverse().expect("nonzero modulus");
    while r.len() > dm && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let f = r[dr] * lead_inv;
        for k in 0..=dm {
            r[dr - dm + k] = r[dr - dm + k] - f * m[k];
        }
        r.pop();
        poly_trim(&mut r);
        if dm == 0 {
            break;
        }
    }
    if dm == 0 {
        return vec![a[0].ctx.zero()];
    }
    r
}

fn poly_gcd(a: &[Fp2], b: &[Fp2]) -> Vec<Fp2> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !(y.len() == 1 && y[0].is_zero()) {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn poly_powmod(base: &[Fp2], mut e: u128, m: &[Fp2]) -> Vec<Fp2> {
    let ctx = base[0].ctx;
    let mut r = vec![ctx.one()];
    let mut b = poly_rem(base, m);
    while e > 0 {
        if e & 1 == 1 {
            r = poly_rem(&poly_mul(&r, &b), m);
        }
        b = poly_rem(&poly_mul(&b, &b), m);
        e >>= 1;
    }
    r
}

fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic `g` of degree `m` over `F_q`, `q = p^2`.
fn is_irreducible_over_fp2(g: &[Fp2]) -> bool {
    let m = g.len() - 1;
    if m == 1 {
        return true;
    }
    let ctx = g[0].ctx;
    let q = ctx.q() as u128;
    let y = vec![ctx.zero(), ctx.one()];
    // y^(q^k) mod g for k = 0..=m
    let mut frob = vec![poly_rem(&y, g)];
    for k in 1..=m {
        let prev = frob[k - 1].clone();
        frob.push(poly_powmod(&prev, q, g));
    }
    let minus_y = |mut f: Vec<Fp2>| {
        f.resize(f.len().max(2), ctx.zero());
        f[1] = f[1] - ctx.one();
        poly_trim(&mut f);
        f
    };
    let top = minus_y(frob[m].clone());
    if !(top.len() == 1 && top[0].is_zero()) {
        return false;
    }
    for r in prime_factors(m as u128) {
        let h = minus_y(frob[m / r as usize].clone());
        if poly_gcd(&h, g).len() != 1 {
            return false;
        }
    }
    true
}

#[derive(Debug)]
struct TowerInner {
    fp2: Fp2Ctx,
    m: usize,
    /// monic, low degree first, length m + 1
    g: Vec<Fp2>,
}

/// Deterministic tower `F_p ⊂ F_{p^2} ⊂ F_{p^{2m}}`; cheap to clone.
#[derive(Clone, Debug)]
pub struct FieldCtx(Arc<TowerInner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.fp2 == other.0.fp2 && self.0.m == other.0.m)
    }
}

impl Eq for FieldCtx {}

/// Build the tower with `[F_{p^{2m}} : F_{p^2}] = m`.
pub fn make_field(p: u64, m: usize) -> Result<FieldCtx> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let fp2 = Fp2Ctx::new(p)?;
    let q = fp2.q();
    let total = (q as u128)
        .checked_pow(m as u32)
        .ok_or_else(|| Error::InvalidParameter("tower too large".into()))?;
    for t in 0..total {
        // g_0 is the most significant digit of the counter
        let mut g: Vec<Fp2> = (0..m)
            .map(|i| fp2.from_index(((t / (q as u128).pow((m - 1 - i) as u32)) % q as u128) as u64))
            .collect();
        g.push(fp2.one());
        if is_irreducible_over_fp2(&g) {
            return Ok(FieldCtx(Arc::new(TowerInner { fp2, m, g })));
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.0.fp2.p
    }

    pub fn m(&self) -> usize {
        self.0.m
    }

    pub fn fp2(&self) -> Fp2Ctx {
        self.0.fp2
    }

    /// Defining polynomial of `F_{p^{2m}}` over `F_{p^2}` (monic, low degree first).
    pub fn defining_poly(&self) -> &[Fp2] {
        &self.0.g
    }

    /// Number of elements `p^{2m}`.
    pub fn size(&self) -> u128 {
        (self.0.fp2.q() as u128).pow(self.0.m as u32)
    }

    pub fn zero(&self) -> FFElem {
        FFElem {
            ctx: self.clone(),
            c: vec![self.0.fp2.zero(); self.0.m],
        }
    }

    pub fn one(&self) -> FFElem {
        self.embed(self.0.fp2.one())
    }

    /// The class of `y` (equal to `-g_0` when `m = 1`).
    pub fn gen(&self) -> FFElem {
        let mut c = vec![self.0.fp2.zero(); self.0.m];
        if self.0.m == 1 {
            c[0] = -self.0.g[0];
        } else {
            c[1] = self.0.fp2.one();
        }
        FFElem {
            ctx: self.clone(),
            c,
        }
    }

    /// Embedding `F_{p^2} -> F_{p^{2m}}` as constant polynomials in `y`.
    pub fn embed(&self, a: Fp2) -> FFElem {
        assert_eq!(a.ctx, self.0.fp2, "cross-context embedding");
        let mut c = vec![self.0.fp2.zero(); self.0.m];
        c[0] = a;
        FFElem {
            ctx: self.clone(),
            c,
        }
    }

    /// Element with the given `F_p` coordinates, zero-padded to length `2m`.
    pub fn from_fp_coeffs(&self, coeffs: &[u64]) -> Result<FFElem> {
        let m = self.0.m;
        if coeffs.len() > 2 * m {
            return Err(Error::InvalidParameter(format!(
                "{} coordinates given for a field of F_p-dimension {}",
                coeffs.len(),
                2 * m
            )));
        }
        let mut padded = coeffs.to_vec();
        padded.resize(2 * m, 0);
        let c = (0..m)
            .map(|j| self.0.fp2.elem(padded[2 * j], padded[2 * j + 1]))
            .collect();
        Ok(FFElem {
            ctx: self.clone(),
            c,
        })
    }

    pub fn from_index(&self, idx: u128) -> FFElem {
        let p = self.p() as u128;
        let coeffs: Vec<u64> = (0..2 * self.m())
            .map(|k| ((idx / p.pow(k as u32)) % p) as u64)
            .collect();
        self.from_fp_coeffs(&coeffs).expect("length matches")
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.size()).map(move |i| self.from_index(i))
    }

    /// First element (in enumeration order) generating the multiplicative group.
    pub fn primitive_element(&self) -> FFElem {
        let order = self.size() - 1;
        let factors = prime_factors(order);
        self.elements()
            .skip(1)
            .find(|x| factors.iter().all(|&r| !x.pow(order / r).is_one()))
            .expect("multiplicative group is cyclic")
    }

    /// First element whose degree over `F_{p^2}` is exactly `d`.
    pub fn first_of_degree(&self, d: usize) -> Option<FFElem> {
        if self.m() % d != 0 {
            return None;
        }
        self.elements().find(|x| x.degree_over_fp2() == d)
    }
}

/// Element of `F_{p^{2m}}` stored as `sum_j c_j y^j` with `c_j` in `F_{p^2}`.
#[derive(Clone, PartialEq, Eq)]
pub struct FFElem {
    ctx: FieldCtx,
    c: Vec<Fp2>,
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs_fp())
    }
}

impl FFElem {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// Coordinates over `F_p` in the fixed basis `x^i y^j` (index `2j + i`).
    pub fn coeffs_fp(&self) -> Vec<u64> {
        self.c.iter().flat_map(|a| a.c).collect()
    }

    pub fn coeffs_fp2(&self) -> &[Fp2] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Fp2::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == self.ctx.0.fp2.one() && self.c[1..].iter().all(Fp2::is_zero)
    }

    /// `Some(a)` when the element lies in the embedded `F_{p^2}`.
    pub fn as_fp2(&self) -> Option<Fp2> {
        self.c[1..].iter().all(Fp2::is_zero).then_some(self.c[0])
    }

    pub fn try_add(&self, rhs: &FFElem) -> Result<FFElem> {
        if self.ctx != rhs.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(self + rhs)
    }

    pub fn try_mul(&self, rhs: &FFElem) -> Result<FFElem> {
        if self.ctx != rhs.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(self * rhs)
    }

    pub fn pow(&self, mut e: u128) -> FFElem {
        let mut base = self.clone();
        let mut r = self.ctx.one();
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        r
    }

    /// `x -> x^p`.
    pub fn frobenius(&self) -> FFElem {
        self.pow(self.ctx.p() as u128)
    }

    /// Inverse Frobenius `x -> x^{1/p}`.
    pub fn frobenius_inv(&self) -> FFElem {
        let mut x = self.clone();
        for _ in 0..(2 * self.ctx.m() - 1) {
            x = x.frobenius();
        }
        x
    }

    pub fn inverse(&self) -> Option<FFElem> {
        (!self.is_zero()).then(|| self.pow(self.ctx.size() - 2))
    }

    /// `[F_{p^2}(b) : F_{p^2}]` from the length of the `q`-Frobenius orbit.
    pub fn degree_over_fp2(&self) -> usize {
        self.min_poly_over_fp2().0
    }

    /// Degree and monic minimal polynomial over `F_{p^2}` (low degree first).
    pub fn min_poly_over_fp2(&self) -> (usize, Vec<Fp2>) {
        let q = self.ctx.fp2().q() as u128;
        let mut conj = vec![self.clone()];
        loop {
            let next = conj.last().unwrap().pow(q);
            if next == *self {
                break;
            }
            conj.push(next);
        }
        let d = conj.len();
        // prod (X - b_i) with coefficients in F_{p^{2m}}
        let mut poly = vec![self.ctx.one()];
        for b in &conj {
            let mut next = vec![self.ctx.zero(); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] = &next[k + 1] + c;
                next[k] = &next[k] - &(c * b);
            }
            poly = next;
        }
        let coeffs = poly
            .iter()
            .map(|c| {
                c.as_fp2()
                    .expect("minimal polynomial coefficients lie in F_{p^2}")
            })
            .collect();
        (d, coeffs)
    }

    fn check(&self, rhs: &FFElem) {
        assert!(self.ctx == rhs.ctx, "cross-context F_p^2m arithmetic");
    }
}

impl<'a> Add for &'a FFElem {
    type Output = FFElem;
    fn add(self, rhs: &'a FFElem) -> FFElem {
        self.check(rhs);
        FFElem {
            ctx: self.ctx.clone(),
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<'a> Sub for &'a FFElem {
    type Output = FFElem;
    fn sub(self, rhs: &'a FFElem) -> FFElem {
        self.check(rhs);
        FFElem {
            ctx: self.ctx.clone(),
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl<'a> Mul for &'a FFElem {
    type Output = FFElem;
    fn mul(self, rhs: &'a FFElem) -> FFElem {
        self.check(rhs);
        let m = self.ctx.m();
        let mut prod = poly_mul(&self.c, &rhs.c);
        let g = &self.ctx.0.g;
        // reduce using monic g: y^m = -sum g_k y^k
        for d in (m..prod.len()).rev() {
            let lead = prod[d];
            if lead.is_zero() {
                continue;
            }
            for k in 0..m {
                prod[d - m + k] = prod[d - m + k] - lead * g[k];
            }
            prod[d] = self.ctx.0.fp2.zero();
        }
        prod.truncate(m);
        prod.resize(m, self.ctx.0.fp2.zero());
        FFElem {
            ctx: self.ctx.clone(),
            c: prod,
        }
    }
}

impl Neg for &FFElem {
    type Output = FFElem;
    fn neg(self) -> FFElem {
        FFElem {
            ctx: self.ctx.clone(),
            c: self.c.iter().map(|a| -*a).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for FFElem {
            type Output = FFElem;
            fn $f(self, rhs: FFElem) -> FFElem { (&self).$f(&rhs) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for FFElem {
    type Output = FFElem;
    fn neg(self) -> FFElem {
        -&self
    }
}

impl Ring for FFElem {
    fn zero_like(&self) -> Self {
        self.ctx.zero()
    }
    fn one_like(&self) -> Self {
        self.ctx.one()
    }
}

impl Field for FFElem {
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn field_construction_examples() {
        assert_eq!(Fp2Ctx::new(3).unwrap().defining_poly(), [1, 0]);
        assert_eq!(Fp2Ctx::new(2).unwrap().defining_poly(), [1, 1]);
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(make_field(3, 0).is_err());
    }

    #[test]
    fn defining_polys_are_smallest_irreducible() {
        // brute force: a monic quadratic over F_p is irreducible iff it has no root
        for p in [2u64, 3, 5, 7, 11, 13] {
            let [f0, f1] = Fp2Ctx::new(p).unwrap().defining_poly();
            let irreducible = |a: u64, b: u64| (0..p).all(|t| (t * t + b * t + a) % p != 0);
            assert!(irreducible(f0, f1));
            for a in 0..p {
                for b in 0..p {
                    if (a, b) < (f0, f1) {
                        assert!(!irreducible(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn tower_polynomial_has_no_roots_and_is_irreducible() {
        let k = make_field(2, 3).unwrap();
        let g = k.defining_poly();
        assert_eq!(g.len(), 4);
        // a cubic is irreducible iff it has no roots
        for a in k.fp2().elements() {
            let v = g.iter().rev().fold(k.fp2().zero(), |acc, c| acc * a + *c);
            assert!(!v.is_zero());
        }
        let k2 = make_field(3, 2).unwrap();
        let g2 = k2.defining_poly();
        for a in k2.fp2().elements() {
            let v = g2.iter().rev().fold(k2.fp2().zero(), |acc, c| acc * a + *c);
            assert!(!v.is_zero());
        }
    }

    #[test]
    fn frobenius_examples() {
        let f = Fp2Ctx::new(3).unwrap();
        assert_eq!(f.gen().frobenius(), -f.gen());
        for c in 0..3 {
            assert_eq!(f.from_int(c).frobenius(), f.from_int(c));
        }
        for x in f.elements() {
            assert_eq!(x.frobenius().frobenius(), x);
        }
    }

    #[test]
    fn inverse_all_nonzero() {
        for p in [2, 3, 5, 7] {
            let f = Fp2Ctx::new(p).unwrap();
            for x in f.elements().skip(1) {
                assert_eq!(x * x.inverse().unwrap(), f.one());
            }
            assert!(f.zero().inverse().is_none());
        }
        let k = make_field(2, 2).unwrap();
        for x in k.elements().skip(1) {
            assert!((&x * &x.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn min_poly_examples() {
        let k = make_field(2, 1).unwrap();
        for b in k.elements() {
            let (d, poly) = b.min_poly_over_fp2();
            assert_eq!(d, 1);
            assert_eq!(poly, vec![-b.as_fp2().unwrap(), k.fp2().one()]);
        }
        let k16 = make_field(2, 2).unwrap();
        let g = k16.primitive_element();
        assert_eq!(g.degree_over_fp2(), 2);
        // brute force: no monic linear polynomial over F_4 vanishes at g
        for c in k16.fp2().elements() {
            assert!(!(&g + &k16.embed(c)).is_zero());
        }
        let k64 = make_field(2, 3).unwrap();
        let g = k64.primitive_element();
        let (d, poly) = g.min_poly_over_fp2();
        assert_eq!(d, 3);
        let val = poly
            .iter()
            .rev()
            .fold(k64.zero(), |acc, c| &(&acc * &g) + &k64.embed(*c));
        assert!(val.is_zero());
    }

    #[test]
    fn trace_solve_examples() {
        let f3 = Fp2Ctx::new(3).unwrap();
        assert_eq!(trace_solve(f3, 0), f3.zero());
        assert_eq!(trace_solve(f3, 1), f3.from_int(2));
        let f2 = Fp2Ctx::new(2).unwrap();
        let y = trace_solve(f2, 1);
        assert!(y.as_prime_field().is_none());
        assert_eq!(y + y * y, f2.one());
        for p in [2u64, 3, 5, 7, 11, 13] {
            let f = Fp2Ctx::new(p).unwrap();
            for c in 0..p {
                let y = trace_solve(f, c);
                assert_eq!(y + y.pow(p as u128), f.from_int(c as i64));
            }
        }
    }

    #[test]
    fn embedding_commutes_with_frobenius() {
        for (p, m) in [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2)] {
            let k = make_field(p, m).unwrap();
            for a in [k.fp2().gen(), k.fp2().one(), k.fp2().elem(1, 1)] {
                assert_eq!(k.embed(a.frobenius()), k.embed(a).frobenius());
                assert_eq!(k.embed(a * a), &k.embed(a) * &k.embed(a));
            }
        }
    }

    #[test]
    fn cross_context_is_an_error() {
        let a = make_field(2, 2).unwrap().one();
        let b = make_field(3, 2).unwrap().one();
        assert_eq!(a.try_add(&b).unwrap_err(), Error::ContextMismatch);
        assert_eq!(a.try_mul(&b).unwrap_err(), Error::ContextMismatch);
    }

    proptest! {
        #[test]
        fn frobenius_is_ring_hom(p in prop::sample::select(vec![2u64, 3, 5]), m in 1usize..4, i in 0u128..10_000, j in 0u128..10_000) {
            let k = make_field(p, m).unwrap();
            let x = k.from_index(i % k.size());
            let y = k.from_index(j % k.size());
            prop_assert_eq!((&x + &y).frobenius(), &x.frobenius() + &y.frobenius());
            prop_assert_eq!((&x * &y).frobenius(), &x.frobenius() * &y.frobenius());
            prop_assert_eq!(x.frobenius().frobenius_inv(), x.clone());
            let (d, poly) = x.min_poly_over_fp2();
            prop_assert_eq!(m % d, 0);
            let val = poly.iter().rev().fold(k.zero(), |acc, c| &(&acc * &x) + &k.embed(*c));
            prop_assert!(val.is_zero());
            // brute-force degree: smallest e with x^(q^e) = x
            let q = (p * p) as u128;
            let mut e = 1;
            let mut z = x.pow(q);
            while z != x { z = z.pow(q); e += 1; }
            prop_assert_eq!(d, e);
        }
    }
}
