//! The Galois ring `W(F_{p^{2m}}) / p^e`, presented as `W(F_{p^2})/p^e [y] / (g)` with
//! `g` the canonical lift of the defining polynomial of `F_{p^{2m}}` over `F_{p^2}`, and
//! lengths of its finitely generated modules.

use crate::error::{Error, Result};
use crate::ff::{FFElem, FieldCtx};
use crate::unram::{UnramCtx, UnramElem};

/// Element: coefficients of `1, y, ..., y^{m-1}`.
pub type Gr = Vec<UnramElem>;

#[derive(Clone, Debug)]
pub struct GaloisRing {
    k: FieldCtx,
    w: UnramCtx,
    /// monic, low degree first, length m + 1
    g: Vec<UnramElem>,
    /// images of `y^0, ..., y^{m-1}` under the Frobenius lift
    sigma_powers: Vec<Gr>,
}

impl GaloisRing {
    pub fn new(k: FieldCtx, prec: u32) -> Result<GaloisRing> {
        let w = UnramCtx::new(k.fp2(), prec)?;
        let g: Vec<UnramElem> = k.defining_poly().iter().map(|c| w.lift(*c)).collect();
        let mut ring = GaloisRing {
            k,
            w,
            g,
            sigma_powers: Vec::new(),
        };
        let s = ring.frobenius_of_y()?;
        let mut powers = vec![ring.one()];
        for i in 1..ring.m() {
            let next = ring.mul(&powers[i - 1], &s);
            powers.push(next);
        }
        ring.sigma_powers = powers;
        Ok(ring)
    }

    pub fn m(&self) -> usize {
        self.k.m()
    }

    pub fn p(&self) -> u64 {
        self.k.p()
    }

    pub fn precision(&self) -> u32 {
        self.w.precision()
    }

    pub fn field(&self) -> &FieldCtx {
        &self.k
    }

    pub fn unram(&self) -> UnramCtx {
        self.w
    }

    pub fn zero(&self) -> Gr {
        vec![self.w.zero(); self.m()]
    }

    pub fn one(&self) -> Gr {
        self.constant(self.w.one())
    }

    pub fn constant(&self, a: UnramElem) -> Gr {
        let mut z = self.zero();
        z[0] = a.to_ctx(self.w);
        z
    }

    pub fn from_int(&self, n: i64) -> Gr {
        self.constant(self.w.from_int(n))
    }

    /// The class of `y`.
    pub fn y(&self) -> Gr {
        if self.m() == 1 {
            vec![-self.g[0]]
        } else {
            let mut z = self.zero();
            z[1] = self.w.one();
            z
        }
    }

    /// Coefficientwise canonical lift from the residue field.
    pub fn lift(&self, a: &FFElem) -> Gr {
        assert_eq!(a.ctx(), &self.k, "cross-field lift");
        a.coeffs_fp2().iter().map(|c| self.w.lift(*c)).collect()
    }

    pub fn reduce(&self, a: &Gr) -> FFElem {
        let coords: Vec<u64> = a.iter().flat_map(|c| c.reduce().coeffs()).collect();
        self.k.from_fp_coeffs(&coords).expect("length 2m")
    }

    pub fn add(&self, a: &Gr, b: &Gr) -> Gr {
        a.iter().zip(b).map(|(x, y)| *x + *y).collect()
    }

    pub fn sub(&self, a: &Gr, b: &Gr) -> Gr {
        a.iter().zip(b).map(|(x, y)| *x - *y).collect()
    }

    pub fn neg(&self, a: &Gr) -> Gr {
        a.iter().map(|x| -*x).collect()
    }

    pub fn is_zero(&self, a: &Gr) -> bool {
        a.iter().all(UnramElem::is_zero)
    }

    pub fn mul(&self, a: &Gr, b: &Gr) -> Gr {
        let m = self.m();
        let mut r = vec![self.w.zero(); 2 * m - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] = r[i + j] + *x * *y;
            }
        }
        // reduce modulo the monic g from the top
        for d in (m..r.len()).rev() {
            let lead = r[d];
            if lead.is_zero() {
                continue;
            }
            for (i, gi) in self.g.iter().enumerate().take(m) {
                r[d - m + i] = r[d - m + i] - lead * *gi;
            }
            r[d] = self.w.zero();
        }
        r.truncate(m);
        r
    }

    pub fn scale_p(&self, a: &Gr, k: u32) -> Gr {
        a.iter().map(|x| x.mul_p_pow(k)).collect()
    }

    /// Minimum coefficient valuation; `1, y, ..., y^{m-1}` reduce to a basis of the
    /// residue field, so this is the `p`-adic valuation.
    pub fn valuation(&self, a: &Gr) -> u32 {
        a.iter()
            .map(UnramElem::valuation)
            .min()
            .unwrap_or(self.precision())
    }

    pub fn div_p_pow(&self, a: &Gr, k: u32) -> Gr {
        a.iter().map(|x| x.div_p_pow(k)).collect()
    }

    pub fn inverse(&self, a: &Gr) -> Result<Gr> {
        let r = self.reduce(a).inverse().ok_or(Error::NonUnit)?;
        let mut x = self.lift(&r);
        let two = self.from_int(2);
        for _ in 0..=self.precision() {
            x = self.mul(&x, &self.sub(&two, &self.mul(a, &x)));
        }
        if self.mul(a, &x) != self.one() {
            return Err(Error::Internal(
                "Galois ring inverse did not converge".into(),
            ));
        }
        Ok(x)
    }

    fn eval_sigma_g(&self, z: &Gr) -> (Gr, Gr) {
        // h = g^sigma; returns (h(z), h'(z)) by Horner
        let h: Vec<UnramElem> = self.g.iter().map(UnramElem::sigma).collect();
        let mut val = self.zero();
        let mut der = self.zero();
        for c in h.iter().rev() {
            der = self.add(&self.mul(&der, z), &val);
            val = self.add(&self.mul(&val, z), &self.constant(*c));
        }
        (val, der)
    }

    /// The root of `g^sigma` congruent to `y^p`, by Newton iteration.
    fn frobenius_of_y(&self) -> Result<Gr> {
        let mut z = self.lift(&self.reduce(&self.y()).frobenius());
        for _ in 0..=self.precision() {
            let (v, d) = self.eval_sigma_g(&z);
            if self.is_zero(&v) {
                break;
            }
            z = self.sub(&z, &self.mul(&v, &self.inverse(&d)?));
        }
        if !self.is_zero(&self.eval_sigma_g(&z).0) {
            return Err(Error::Internal(
                "Frobenius lift of y did not converge".into(),
            ));
        }
        Ok(z)
    }

    /// Frobenius lift `sigma`.
    pub fn sigma(&self, a: &Gr) -> Gr {
        let mut out = self.zero();
        for (c, s) in a.iter().zip(&self.sigma_powers) {
            out = self.add(&out, &self.mul(&self.constant(c.sigma()), s));
        }
        out
    }

    /// `sigma^{-1} = sigma^{2m - 1}`.
    pub fn sigma_inv(&self, a: &Gr) -> Gr {
        (1..2 * self.m()).fold(a.clone(), |x, _| self.sigma(&x))
    }

    /// Length of the submodule of `(W/p^e)^n` spanned by `rows`, via Smith reduction
    /// over the chain ring: each pivot of valuation `v < e` contributes `e - v`.
    pub fn length(&self, rows: &[Vec<Gr>]) -> u32 {
        let e = self.precision();
        let mut a: Vec<Vec<Gr>> = rows.to_vec();
        let ncols = a.first().map_or(0, Vec::len);
        let mut total = 0;
        let mut r0 = 0;
        let mut c0 = 0;
        while r0 < a.len() && c0 < ncols {
            // entry of least valuation in the remaining block
            let mut best: Option<(u32, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(r0) {
                for (j, x) in row.iter().enumerate().skip(c0) {
                    let v = self.valuation(x);
                    if v < e && best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
            let Some((v, pi, pj)) = best else { break };
            a.swap(r0, pi);
            for row in a.iter_mut() {
                row.swap(c0, pj);
            }
            let unit = self.div_p_pow(&a[r0][c0], v);
            let uinv = self.inverse(&unit).expect("pivot / p^v is a unit");
            for i in 0..a.len() {
                if i == r0 || self.is_zero(&a[i][c0]) {
                    continue;
                }
                let f = self.mul(&self.div_p_pow(&a[i][c0], v), &uinv);
                for j in c0..ncols {
                    let t = self.mul(&f, &a[r0][j]);
                    a[i][j] = self.sub(&a[i][j], &t);
                }
            }
            // the pivot row's other entries are multiples of the pivot; clearing them is
            // a change of basis of the ambient module and does not affect the length
            for j in c0 + 1..ncols {
                a[r0][j] = self.zero();
            }
            total += e - v;
            r0 += 1;
            c0 += 1;
        }
        total
    }
}
