//! Explicit Dieudonne lattices of rank 4 modulo `p^e`.
//!
//! `N` has basis `e1..e4` with `F e1 = e2`, `F e2 = -p e1`, `F e3 = e4`, `F e4 = -p e3`
//! (`sigma`-semilinear) and `V = p F^{-1}` (`sigma^{-1}`-semilinear). For `xi = [a : b]`
//! the lattice `M = <p e1, p e3, e2, e4, a e1 + b e3>` sits between `VN` and `N`.
//! A matrix `T` over `O_D` acts on `N` through its block embedding: block `i` of
//! [`crate::quat::mat_embed`] acts on `(e_{2i-1}, e_{2i})`, column vectors, from the left.

mod galois;

pub use galois::{GaloisRing, Gr};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::Fp2;
use crate::quat::{canonical_lift, mat_embed, mat_reduce, QuatCtx};
use crate::ring::Mat;
use crate::xi::{b0prime, classify, line_stabilizer_algebra, EndoOrderDesc, XiCase, XiPoint};
use crate::QuatMat;

/// Vector of `N / p^e N` in the basis `e1..e4`.
pub type DVec = [Gr; 4];

#[derive(Clone, Debug)]
pub struct DieuLattice {
    ring: GaloisRing,
    xi: XiPoint,
    gens: Vec<DVec>,
}

impl DieuLattice {
    /// The lattice `M` attached to `xi`, computed modulo `p^e` (`e >= 2`).
    pub fn new(xi: &XiPoint, e: u32) -> Result<DieuLattice> {
        if e < 2 {
            return Err(Error::InvalidParameter(
                "lattice precision must be at least 2".into(),
            ));
        }
        let ring = GaloisRing::new(xi.field().clone(), e)?;
        let z = ring.zero();
        let one = ring.one();
        let p = ring.from_int(ring.p() as i64);
        let a = ring.lift(xi.a());
        let b = ring.lift(xi.b());
        let gens = vec![
            [p.clone(), z.clone(), z.clone(), z.clone()],
            [z.clone(), z.clone(), p.clone(), z.clone()],
            [z.clone(), one.clone(), z.clone(), z.clone()],
            [z.clone(), z.clone(), z.clone(), one.clone()],
            [a, z.clone(), b, z],
        ];
        Ok(DieuLattice {
            ring,
            xi: xi.clone(),
            gens,
        })
    }

    pub fn ring(&self) -> &GaloisRing {
        &self.ring
    }

    pub fn generators(&self) -> &[DVec] {
        &self.gens
    }

    pub fn basis_vector(&self, i: usize) -> DVec {
        let mut v: DVec = std::array::from_fn(|_| self.ring.zero());
        v[i] = self.ring.one();
        v
    }

    fn p_times(&self, x: &Gr) -> Gr {
        self.ring.scale_p(x, 1)
    }

    /// `F(sum x_i e_i) = sum sigma(x_i) F(e_i)`.
    pub fn frob(&self, x: &DVec) -> DVec {
        let r = &self.ring;
        let s: Vec<Gr> = x.iter().map(|c| r.sigma(c)).collect();
        [
            r.neg(&self.p_times(&s[1])),
            s[0].clone(),
            r.neg(&self.p_times(&s[3])),
            s[2].clone(),
        ]
    }

    /// `V(e1) = -e2`, `V(e2) = p e1`, `V(e3) = -e4`, `V(e4) = p e3`, `sigma^{-1}`-semilinear.
    pub fn ver(&self, x: &DVec) -> DVec {
        let r = &self.ring;
        let s: Vec<Gr> = x.iter().map(|c| r.sigma_inv(c)).collect();
        [
            self.p_times(&s[1]),
            r.neg(&s[0]),
            self.p_times(&s[3]),
            r.neg(&s[2]),
        ]
    }

    /// Apply `T` through the block embedding.
    pub fn act(&self, t: &QuatMat, x: &DVec) -> DVec {
        let r = &self.ring;
        let e = mat_embed(t);
        std::array::from_fn(|i| {
            (0..4).fold(r.zero(), |acc, j| {
                r.add(
                    &acc,
                    &r.mul(&r.constant(e[(i, j)].to_ctx(r.unram())), &x[j]),
                )
            })
        })
    }

    fn length_of(&self, vecs: &[DVec]) -> u32 {
        let rows: Vec<Vec<Gr>> = vecs.iter().map(|v| v.to_vec()).collect();
        self.ring.length(&rows)
    }

    /// Length of `M / p^e N`.
    pub fn length(&self) -> u32 {
        self.length_of(&self.gens)
    }

    fn contains_all(&self, extra: &[DVec]) -> bool {
        let mut all = self.gens.clone();
        all.extend_from_slice(extra);
        self.length_of(&all) == self.length()
    }

    /// `dim_k N / M`; always 1.
    pub fn colength(&self) -> u32 {
        4 * self.ring.precision() - self.length()
    }

    /// Whether `F M` and `V M` lie in `M`.
    pub fn is_dieudonne(&self) -> bool {
        let images: Vec<DVec> = self
            .gens
            .iter()
            .flat_map(|g| [self.frob(g), self.ver(g)])
            .collect();
        self.contains_all(&images)
    }

    /// Whether `VN` is contained in `M`.
    pub fn contains_vn(&self) -> bool {
        let vn: Vec<DVec> = (0..4).map(|i| self.ver(&self.basis_vector(i))).collect();
        self.contains_all(&vn)
    }

    /// `a(M) = dim_k M / (F M + V M)`.
    pub fn a_number(&self) -> u32 {
        let images: Vec<DVec> = self
            .gens
            .iter()
            .flat_map(|g| [self.frob(g), self.ver(g)])
            .collect();
        self.length() - self.length_of(&images)
    }

    /// Whether `T(M) ⊂ M`.
    pub fn stabilized_by(&self, t: &QuatMat) -> bool {
        let images: Vec<DVec> = self.gens.iter().map(|g| self.act(t, g)).collect();
        self.contains_all(&images)
    }

    /// `FV = VF = p` and `F^2 = -p` on the basis and on the given vectors.
    pub fn check_fv(&self, extra: &[DVec]) -> bool {
        let r = &self.ring;
        let mut vs: Vec<DVec> = (0..4).map(|i| self.basis_vector(i)).collect();
        vs.extend_from_slice(extra);
        vs.iter().all(|x| {
            let px: DVec = std::array::from_fn(|i| self.p_times(&x[i]));
            let fv = self.frob(&self.ver(x));
            let vf = self.ver(&self.frob(x));
            // F^2 = -p holds for the sigma-stable part only: vectors with coefficients
            // fixed by sigma^2, such as the basis
            let sigma2_fixed = x.iter().all(|c| r.sigma(&r.sigma(c)) == *c);
            let ff_ok = !sigma2_fixed || {
                let ff = self.frob(&self.frob(x));
                ff.iter().zip(&px).all(|(a, b)| r.add(a, b) == r.zero())
            };
            fv == px && vf == px && ff_ok
        })
    }

    pub fn xi(&self) -> &XiPoint {
        &self.xi
    }
}

/// What [`verify_prop32`] compares lattice stabilization against.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparator {
    /// `B_0'` of the classified case (cases II and III).
    B0Prime,
    /// The stabilizer in `M_2(F_{p^2})` of the line `xi`; used in case I, where the
    /// endomorphism order of `M` is a full matrix order but not the one inside `End(N)`.
    LineStabilizer,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop32Witness {
    /// Reduction of `T` modulo `Pi`, entries as `F_p`-coordinate pairs.
    pub t_reduced: Vec<Vec<[u64; 2]>>,
    pub lattice_stable: bool,
    pub in_algebra: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop32Report {
    pub case: XiCase,
    pub comparator: Comparator,
    pub checked: u32,
    pub agreed: u32,
    /// How many sampled `T` stabilized `M`.
    pub stable: u32,
    pub witnesses: Vec<Prop32Witness>,
}

fn random_unram<R: Rng + ?Sized>(qc: QuatCtx, rng: &mut R) -> crate::UnramElem {
    let w = qc.unram();
    let modulus = w.modulus();
    w.elem(rng.gen_range(0..modulus), rng.gen_range(0..modulus))
}

/// Uniformly random element of `M_2(O_D / Pi^N)`.
pub fn random_quat_mat<R: Rng + ?Sized>(qc: QuatCtx, rng: &mut R) -> QuatMat {
    Mat::from_fn(2, 2, |_, _| {
        qc.elem(random_unram(qc, rng), random_unram(qc, rng))
    })
}

fn random_in<R: Rng + ?Sized>(desc: &EndoOrderDesc, qc: QuatCtx, rng: &mut R) -> QuatMat {
    let f = qc.fp2();
    let mut m = Mat::zeros_like(&f.zero(), 2, 2);
    for b in &desc.basis {
        let c = f.from_index(rng.gen_range(0..f.q()));
        m = &m + &b.scale(&c);
    }
    &canonical_lift(&m, qc) + &random_quat_mat(qc, rng).map(|x| qc.pi() * *x)
}

fn witness(t: &QuatMat, lattice_stable: bool, in_algebra: bool) -> Prop32Witness {
    let red: Mat<Fp2> = mat_reduce(t);
    Prop32Witness {
        t_reduced: (0..2)
            .map(|i| (0..2).map(|j| red[(i, j)].coeffs()).collect())
            .collect(),
        lattice_stable,
        in_algebra,
    }
}

/// Sample `samples` matrices `T` over `O_D / Pi^{2e}` (half uniform, half reducing into
/// the comparison algebra) and check `T(M) ⊂ M` against algebra membership of `T mod Pi`.
pub fn verify_prop32<R: Rng + ?Sized>(
    xi: &XiPoint,
    samples: u32,
    e: u32,
    rng: &mut R,
) -> Result<Prop32Report> {
    let lat = DieuLattice::new(xi, e)?;
    let xc = classify(xi);
    let qc = QuatCtx::from_fp2(xi.field().fp2(), 2 * e)?;
    let (comparator, desc) = match xc.case {
        XiCase::I => (Comparator::LineStabilizer, line_stabilizer_algebra(xi)),
        _ => (Comparator::B0Prime, b0prime(&xc, qc.fp2())?),
    };
    let mut report = Prop32Report {
        case: xc.case,
        comparator,
        checked: 0,
        agreed: 0,
        stable: 0,
        witnesses: Vec::new(),
    };
    for i in 0..samples {
        let t = if i % 2 == 0 {
            random_quat_mat(qc, rng)
        } else {
            random_in(&desc, qc, rng)
        };
        let stable = lat.stabilized_by(&t);
        let member = desc.contains(&mat_reduce(&t));
        report.checked += 1;
        report.stable += u32::from(stable);
        if stable == member {
            report.agreed += 1;
        } else {
            report.witnesses.push(witness(&t, stable, member));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lattice_shape() {
        for (p, m) in [(2u64, 1usize), (2, 2), (3, 2), (2, 3)] {
            let k = make_field(p, m).unwrap();
            for xi in [
                XiPoint::affine(k.zero()),
                XiPoint::infinity(&k),
                XiPoint::affine(k.primitive_element()),
            ] {
                let lat = DieuLattice::new(&xi, 2).unwrap();
                assert_eq!(lat.colength(), 1);
                assert!(lat.is_dieudonne());
                assert!(lat.contains_vn());
                assert!(lat.check_fv(lat.generators()));
            }
        }
    }

    #[test]
    fn a_numbers() {
        let k = make_field(2, 1).unwrap();
        assert_eq!(
            DieuLattice::new(&XiPoint::affine(k.gen()), 2)
                .unwrap()
                .a_number(),
            2
        );
        let k = make_field(2, 2).unwrap();
        let xi = XiPoint::affine(k.first_of_degree(2).unwrap());
        assert_eq!(DieuLattice::new(&xi, 2).unwrap().a_number(), 1);
        let k = make_field(2, 3).unwrap();
        let xi = XiPoint::affine(k.first_of_degree(3).unwrap());
        assert_eq!(DieuLattice::new(&xi, 2).unwrap().a_number(), 1);
        assert_eq!(DieuLattice::new(&xi, 3).unwrap().a_number(), 1);
    }

    #[test]
    fn identity_and_non_scalar() {
        let k = make_field(2, 3).unwrap();
        let xi = XiPoint::affine(k.first_of_degree(3).unwrap());
        let lat = DieuLattice::new(&xi, 2).unwrap();
        let qc = QuatCtx::new(2, 4).unwrap();
        let f = qc.fp2();
        assert!(lat.stabilized_by(&Mat::identity_like(&qc.one(), 2)));
        let nonscalar = Mat::from_rows(vec![vec![f.one(), f.one()], vec![f.zero(), f.one()]]);
        assert!(!lat.stabilized_by(&canonical_lift(&nonscalar, qc)));
    }

    #[test]
    fn prop32_small_runs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, m) in [(2u64, 1usize), (2, 2), (2, 3), (3, 2)] {
            let k = make_field(p, m).unwrap();
            let pts = [
                XiPoint::affine(k.zero()),
                XiPoint::affine(k.primitive_element()),
            ];
            for xi in pts {
                let r = verify_prop32(&xi, 40, 2, &mut rng).unwrap();
                assert_eq!(r.agreed, r.checked, "{r:?}");
                assert!(r.stable > 0 && r.stable < r.checked, "p={p} m={m} {r:?}");
            }
        }
    }
}
