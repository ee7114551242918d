//! Constructive lift of `SL_2(F_{p^2})` into the unitary group of the
//! quaternion-hermitian form `(T^*)^{(1)} w T = w` over `O_D / Pi^N`.
//!
//! Starting from a lift `T_0` of `phibar`, step `n` reads the defect
//! `X_n = (T_n^*)^{(1)} w T_n = w + C_n Pi^{n+1}`, solves the linear equation for
//! `Y_n = phibar^t w B_n` over `F_{p^2}` and replaces `T_n` by `T_n + B_n Pi^{n+1}`.

use crate::error::{Error, Result};
use crate::ff::{trace_solve, Fp2, Fp2Ctx};
use crate::quat::{
    hermitian_defect, mat_reduce, mat_star, mat_twist, mat_valuation, teichmuller_lift, w_matrix,
    QuatCtx,
};
use crate::ring::Mat;
use crate::{Fp2Mat, QuatMat};

fn frobenius(m: &Fp2Mat) -> Fp2Mat {
    m.map(|x| x.frobenius())
}

fn square(c: &Fp2Mat) -> Result<usize> {
    if c.rows() != c.cols() {
        return Err(Error::InvalidParameter(format!(
            "expected a square matrix, got {}x{}",
            c.rows(),
            c.cols()
        )));
    }
    Ok(c.rows())
}

/// Solve `C + Y + Y^{t(1)} = 0` given `C^t = C^{(1)}`.
///
/// Above the diagonal `Y` copies `-C`, below it is zero, and each diagonal entry is the
/// first solution of `y + y^p = -C_ii`.
pub fn solve_lemma44_case1(c: &Fp2Mat) -> Result<Fp2Mat> {
    let m = square(c)?;
    if c.transpose() != frobenius(c) {
        return Err(Error::Precondition("C^t != C^(1)".into()));
    }
    let f = c.proto().ctx();
    Ok(Mat::from_fn(m, m, |i, j| {
        if i < j {
            -c[(i, j)]
        } else if i > j {
            f.zero()
        } else {
            let d = (-c[(i, i)])
                .as_prime_field()
                .expect("diagonal of C is fixed by Frobenius");
            trace_solve(f, d)
        }
    }))
}

/// Solve `C + Y - Y^t = 0` given `C^t = -C` with zero diagonal (the latter only
/// restricts `p = 2`).
pub fn solve_lemma44_case2(c: &Fp2Mat) -> Result<Fp2Mat> {
    let m = square(c)?;
    if c.transpose() != -c.clone() {
        return Err(Error::Precondition("C^t != -C".into()));
    }
    if let Some(i) = (0..m).find(|&i| !c[(i, i)].is_zero()) {
        return Err(Error::Obstruction(format!(
            "diagonal entry C[{i}][{i}] = {:?} is nonzero, but Y - Y^t has zero diagonal in characteristic 2",
            c[(i, i)]
        )));
    }
    let f = c.proto().ctx();
    Ok(Mat::from_fn(m, m, |i, j| {
        if i < j {
            -c[(i, j)]
        } else {
            f.zero()
        }
    }))
}

/// `(-1)^n C^{t(n)} = C^{(1)}`: for even `n` this is `C^t = C^{(1)}`, for odd `n` it is
/// `-C^t = C`.
pub fn parity_condition_check(c: &Fp2Mat, n: u32) -> bool {
    if c.rows() != c.cols() {
        return false;
    }
    if n % 2 == 0 {
        c.transpose() == frobenius(c)
    } else {
        -c.transpose() == *c
    }
}

/// An obstruction met during a lift, with the defect that caused it.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionRecord {
    pub step: u32,
    pub defect: Fp2Mat,
    /// Whether a retry got past it.
    pub resolved: bool,
}

#[derive(Clone, Debug)]
pub struct LiftOutcome {
    pub phibar: Fp2Mat,
    pub precision: u32,
    pub t: QuatMat,
    /// `Pi`-adic valuation of `hermitian_defect(t)`, saturating at the precision.
    pub defect_valuation: u32,
    /// Correction steps performed (including ones that were redone after a retry).
    pub steps: u32,
    /// Steps at which the parity condition was checked (and held).
    pub parity_checks: u32,
    pub obstructions: Vec<ObstructionRecord>,
    pub retries: u32,
}

/// Candidate adjustments tried at an obstruction, in this order: `c E_ij` for
/// `c in {1, x}` (`x` the generator of `F_{p^2}`) and `(i, j)` in row-major order.
fn retry_candidates(f: Fp2Ctx) -> Vec<Fp2Mat> {
    let mut out = Vec::new();
    for c in [f.one(), f.gen()] {
        for i in 0..2 {
            for j in 0..2 {
                out.push(Mat::from_fn(2, 2, |r, s| {
                    if (r, s) == (i, j) {
                        c
                    } else {
                        f.zero()
                    }
                }));
            }
        }
    }
    out
}

enum StepError {
    Obstruction(Fp2Mat),
    Fatal(Error),
}

/// One correction step at `n`: returns the next matrix.
fn correct(
    t: &QuatMat,
    n: u32,
    phibar: &Fp2Mat,
    w: &QuatMat,
    w_inv_bar: &Fp2Mat,
) -> std::result::Result<QuatMat, StepError> {
    let ctx = t.proto().ctx();
    let k = n + 1;
    let x = &(&mat_twist(&mat_star(t), 1) * w) * t;
    if mat_star(&x) != -mat_twist(&x, 1) {
        return Err(StepError::Fatal(Error::Internal(format!(
            "X^* != -X^(1) at step {n}"
        ))));
    }
    let d = &x - w;
    if mat_valuation(&d) < k {
        return Err(StepError::Fatal(Error::Internal(format!(
            "defect valuation {} < {k} at step {n}",
            mat_valuation(&d)
        ))));
    }
    let c = d.map(|e| e.leading_coeff(k));
    if !parity_condition_check(&c, n) {
        return Err(StepError::Fatal(Error::Internal(format!(
            "parity condition fails at step {n}: {c:?}"
        ))));
    }
    let y = if n % 2 == 0 {
        solve_lemma44_case1(&c)
    } else {
        solve_lemma44_case2(&c)
    };
    let y = match y {
        Ok(y) => y,
        Err(Error::Obstruction(_)) => return Err(StepError::Obstruction(c)),
        Err(e) => return Err(StepError::Fatal(e)),
    };
    let phit_inv = phibar.transpose().inverse().expect("phibar is invertible");
    let b = &(w_inv_bar * &phit_inv) * &y;
    let corr = b.map(|e| ctx.from_pi_power(*e, k));
    Ok(t + &corr)
}

/// Lift `phibar in SL_2(F_{p^2})` to `T in M_2(O_D / Pi^N)` with `(T^*)^{(1)} w T = w`.
///
/// `T_0` is the Teichmuller lift of `phibar` (so `w` itself is lifted to `w`); each
/// correction `B_n` is the canonical lift of its reduction. The work is done at
/// precision `N + 1` so that the last defect coefficient can be read off, and truncated
/// at the end.
pub fn lift_sl2(phibar: &Fp2Mat, n_prec: u32) -> Result<LiftOutcome> {
    if phibar.rows() != 2 || phibar.cols() != 2 {
        return Err(Error::InvalidParameter("phibar must be 2x2".into()));
    }
    let f = phibar.proto().ctx();
    if phibar.det2() != f.one() {
        return Err(Error::Precondition(format!(
            "det(phibar) = {:?} != 1",
            phibar.det2()
        )));
    }
    if n_prec < 1 {
        return Err(Error::InvalidParameter(
            "precision must be at least 1".into(),
        ));
    }
    let work = QuatCtx::from_fp2(f, n_prec + 1)?;
    let w = w_matrix(work);
    let w_inv_bar = mat_reduce(&w).inverse().expect("w is invertible");
    let mut t = teichmuller_lift(phibar, work);
    let mut out = LiftOutcome {
        phibar: phibar.clone(),
        precision: n_prec,
        t: t.clone(),
        defect_valuation: 0,
        steps: 0,
        parity_checks: 0,
        obstructions: Vec::new(),
        retries: 0,
    };
    let mut n = 0;
    while n < n_prec {
        out.steps += 1;
        match correct(&t, n, phibar, &w, &w_inv_bar) {
            Ok(next) => {
                out.parity_checks += 1;
                t = next;
                n += 1;
            }
            Err(StepError::Fatal(e)) => return Err(e),
            Err(StepError::Obstruction(c)) => {
                out.obstructions.push(ObstructionRecord {
                    step: n,
                    defect: c.clone(),
                    resolved: false,
                });
                if n == 0 {
                    return Err(Error::Obstruction(format!(
                        "step 0, defect {c:?}, nothing to retry"
                    )));
                }
                // give the previous correction B_{n-1} a Pi-coordinate E, i.e. add E Pi^{n+1}
                let mut fixed = None;
                for e in retry_candidates(f) {
                    out.retries += 1;
                    let adj = e.map(|x| work.from_pi_power(*x, n + 1));
                    let cand = &t + &adj;
                    if mat_valuation(&hermitian_defect(&cand)) < n + 1 {
                        continue;
                    }
                    out.steps += 1;
                    if let Ok(next) = correct(&cand, n, phibar, &w, &w_inv_bar) {
                        fixed = Some(next);
                        break;
                    }
                }
                match fixed {
                    Some(next) => {
                        out.parity_checks += 1;
                        out.obstructions.last_mut().expect("just pushed").resolved = true;
                        t = next;
                        n += 1;
                    }
                    None => {
                        return Err(Error::Obstruction(format!(
                            "step {n}: no retry candidate resolves defect {c:?}"
                        )))
                    }
                }
            }
        }
    }
    let final_ctx = work.with_precision(n_prec)?;
    let t = t.map(|e| e.truncate_to(final_ctx));
    out.defect_valuation = mat_valuation(&hermitian_defect(&t));
    if mat_reduce(&t) != *phibar || out.defect_valuation < n_prec {
        return Err(Error::Internal(
            "lift does not satisfy its postcondition".into(),
        ));
    }
    out.t = t;
    Ok(out)
}

/// Run the correction steps from an arbitrary starting matrix `t0` (of precision at
/// least `N + 1`) whose reduction lies in `SL_2`.
pub fn lift_sl2_from(t0: &QuatMat, n_prec: u32) -> Result<QuatMat> {
    let phibar = mat_reduce(t0);
    let f = phibar.proto().ctx();
    let work = QuatCtx::from_fp2(f, n_prec + 1)?;
    let w = w_matrix(work);
    let w_inv_bar = mat_reduce(&w).inverse().expect("w is invertible");
    let mut t = t0.map(|e| e.truncate_to(work));
    for n in 0..n_prec {
        t = match correct(&t, n, &phibar, &w, &w_inv_bar) {
            Ok(next) => next,
            Err(StepError::Fatal(e)) => return Err(e),
            Err(StepError::Obstruction(c)) => {
                return Err(Error::Obstruction(format!("step {n}, defect {c:?}")))
            }
        };
    }
    let final_ctx = work.with_precision(n_prec)?;
    Ok(t.map(|e| e.truncate_to(final_ctx)))
}

/// Uniformly random element of `SL_2(F_{p^2})`.
pub fn random_sl2<R: rand::Rng + ?Sized>(f: Fp2Ctx, rng: &mut R) -> Fp2Mat {
    let q = f.q();
    loop {
        let a = f.from_index(rng.gen_range(0..q));
        let b = f.from_index(rng.gen_range(0..q));
        let c = f.from_index(rng.gen_range(0..q));
        let d = f.from_index(rng.gen_range(0..q));
        let m = Mat::from_rows(vec![vec![a, b], vec![c, d]]);
        let det = m.det2();
        if let Some(inv) = det.inverse() {
            // scale the first row by det^{-1}: uniform on SL_2 since GL_2 -> SL_2 is
            // a fibration with equal fibres
            return Mat::from_rows(vec![vec![a * inv, b * inv], vec![c, d]]);
        }
    }
}

/// Entrywise parse of `"c0.c1,c0.c1,c0.c1,c0.c1"` (row-major) into a 2x2 matrix.
pub fn parse_fp2_matrix(f: Fp2Ctx, s: &str) -> Result<Fp2Mat> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::Parse(format!(
            "expected 4 comma-separated entries, got {}",
            parts.len()
        )));
    }
    let mut entries: Vec<Fp2> = Vec::with_capacity(4);
    for part in parts {
        let cs: Vec<u64> = part
            .split('.')
            .map(|c| {
                c.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad coordinate {c:?}")))
            })
            .collect::<Result<_>>()?;
        if cs.is_empty() || cs.len() > 2 || cs.iter().any(|&c| c >= f.p()) {
            return Err(Error::Parse(format!(
                "entry {part:?} is not an element of F_{}",
                f.q()
            )));
        }
        entries.push(f.elem(cs[0], cs.get(1).copied().unwrap_or(0)));
    }
    Ok(Mat::from_rows(vec![
        entries[0..2].to_vec(),
        entries[2..4].to_vec(),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::canonical_lift;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m2(f: Fp2Ctx, e: [[i64; 2]; 2]) -> Fp2Mat {
        Mat::from_rows(
            e.iter()
                .map(|r| r.iter().map(|&x| f.from_int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn case1_examples() {
        let f = Fp2Ctx::new(3).unwrap();
        assert_eq!(
            solve_lemma44_case1(&m2(f, [[0, 0], [0, 0]])).unwrap(),
            m2(f, [[0, 0], [0, 0]])
        );
        assert_eq!(
            solve_lemma44_case1(&m2(f, [[1, 0], [0, 0]])).unwrap(),
            m2(f, [[1, 0], [0, 0]])
        );
        let g = f.gen();
        let bad = Mat::from_rows(vec![vec![g, f.zero()], vec![f.zero(), f.zero()]]);
        assert!(matches!(
            solve_lemma44_case1(&bad),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn case2_examples() {
        let f = Fp2Ctx::new(5).unwrap();
        let c = f.gen();
        let cm = Mat::from_rows(vec![vec![f.zero(), c], vec![-c, f.zero()]]);
        let y = solve_lemma44_case2(&cm).unwrap();
        assert_eq!(
            y,
            Mat::from_rows(vec![vec![f.zero(), -c], vec![f.zero(), f.zero()]])
        );
        assert!((&(&cm + &y) - &y.transpose()).is_zero());
        let f2 = Fp2Ctx::new(2).unwrap();
        assert!(matches!(
            solve_lemma44_case2(&m2(f2, [[1, 0], [0, 1]])),
            Err(Error::Obstruction(_))
        ));
    }

    #[test]
    fn parity_examples() {
        let f = Fp2Ctx::new(3).unwrap();
        assert!(parity_condition_check(&m2(f, [[0, 0], [0, 0]]), 3));
        assert!(parity_condition_check(&m2(f, [[1, 2], [2, 0]]), 0));
        assert!(parity_condition_check(&m2(f, [[0, 1], [-1, 0]]), 1));
        assert!(!parity_condition_check(&m2(f, [[1, 0], [0, 0]]), 1));
    }

    #[test]
    fn identity_and_w() {
        for p in [2, 3, 5] {
            let f = Fp2Ctx::new(p).unwrap();
            let out = lift_sl2(&m2(f, [[1, 0], [0, 1]]), 8).unwrap();
            let qc = QuatCtx::from_fp2(f, 8).unwrap();
            assert_eq!(out.t, Mat::identity_like(&qc.one(), 2));
            let out = lift_sl2(&m2(f, [[0, -1], [1, 0]]), 8).unwrap();
            assert_eq!(out.t, w_matrix(qc));
            assert_eq!(out.defect_valuation, 8);
        }
    }

    #[test]
    fn random_lifts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2, 3, 5] {
            let f = Fp2Ctx::new(p).unwrap();
            for _ in 0..20 {
                let phi = random_sl2(f, &mut rng);
                let out = lift_sl2(&phi, 10).unwrap();
                assert_eq!(mat_reduce(&out.t), phi);
                assert!(mat_valuation(&hermitian_defect(&out.t)) >= 10);
                assert_eq!(out.parity_checks, 10);
                assert!(out.obstructions.is_empty());
            }
        }
    }

    #[test]
    fn canonical_start_also_lifts() {
        let f = Fp2Ctx::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let phi = random_sl2(f, &mut rng);
        let qc = QuatCtx::from_fp2(f, 9).unwrap();
        let t = lift_sl2_from(&canonical_lift(&phi, qc), 8).unwrap();
        assert_eq!(mat_reduce(&t), phi);
        assert!(mat_valuation(&hermitian_defect(&t)) >= 8);
    }

    #[test]
    fn rejects_bad_input() {
        let f = Fp2Ctx::new(3).unwrap();
        assert!(matches!(
            lift_sl2(&m2(f, [[2, 0], [0, 1]]), 5),
            Err(Error::Precondition(_))
        ));
        assert!(lift_sl2(&m2(f, [[1, 0], [0, 1]]), 0).is_err());
    }

    #[test]
    fn matrix_parsing() {
        let f = Fp2Ctx::new(3).unwrap();
        let m = parse_fp2_matrix(f, "0.0,2.0,1.0,0.0").unwrap();
        assert_eq!(m, m2(f, [[0, -1], [1, 0]]));
        assert_eq!(
            parse_fp2_matrix(f, "1,0,0,1").unwrap(),
            m2(f, [[1, 0], [0, 1]])
        );
        assert!(parse_fp2_matrix(f, "1,0,0").is_err());
        assert!(parse_fp2_matrix(f, "3,0,0,1").is_err());
    }
}
