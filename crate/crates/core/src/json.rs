//! JSON shapes shared by the CLI and its schemas.

use serde_json::{json, Value};

use crate::dieudonne::Prop32Report;
use crate::ff::{FFElem, Fp2};
use crate::lifting::LiftOutcome;
use crate::mass::{rational_string, CensusRow, MassResult};
use crate::quat::QuatElem;
use crate::unram::UnramElem;
use crate::xi::{XiCase, XiClass};
use crate::{Fp2Mat, QuatMat};

pub fn case_str(c: XiCase) -> &'static str {
    match c {
        XiCase::I => "I",
        XiCase::II => "II",
        XiCase::III => "III",
    }
}

/// `[c0, c1]`, coordinates over `F_p`.
pub fn fp2_json(x: &Fp2) -> Value {
    json!(x.coeffs())
}

/// `[c0, c1, ...]`, coordinates over `F_p`.
pub fn ffelem_json(x: &FFElem) -> Value {
    json!(x.coeffs_fp())
}

pub fn unram_json(x: &UnramElem) -> Value {
    json!(x.coeffs())
}

/// `[[a0, a1], [b0, b1]]` for `a + b Pi`.
pub fn quat_json(x: &QuatElem) -> Value {
    json!([x.a().coeffs(), x.b().coeffs()])
}

pub fn fp2_mat_json(m: &Fp2Mat) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(fp2_json).collect()))
            .collect(),
    )
}

pub fn quat_mat_json(t: &QuatMat) -> Value {
    let ctx = t.proto().ctx();
    let entries: Vec<Value> = (0..t.rows())
        .map(|i| Value::Array(t.row(i).iter().map(quat_json).collect()))
        .collect();
    json!({"p": ctx.p(), "N": ctx.precision(), "entries": entries})
}

pub fn mass_json(m: &MassResult) -> Value {
    json!({
        "p": m.p,
        "g": m.g,
        "case": m.case.map(case_str),
        "value": rational_string(&m.value),
        "over_5760": m.over_5760(),
        "provenance": m.provenance.to_string(),
    })
}

pub fn classify_json(xc: &XiClass, stabilizer_order: u128) -> Value {
    json!({
        "case": case_str(xc.case),
        "degree": xc.degree,
        "alpha": xc.alpha.as_ref().map(fp2_json),
        "beta": xc.beta.as_ref().map(fp2_json),
        "b0prime_dim": xc.case.b0prime_dim(),
        "stabilizer_order": stabilizer_order.to_string(),
    })
}

pub fn lift_json(out: &LiftOutcome) -> Value {
    let obstructions: Vec<Value> = out
        .obstructions
        .iter()
        .map(|o| json!({"step": o.step, "defect": fp2_mat_json(&o.defect), "resolved": o.resolved}))
        .collect();
    json!({
        "phibar": fp2_mat_json(&out.phibar),
        "N": out.precision,
        "T": quat_mat_json(&out.t),
        "defect_valuation": out.defect_valuation,
        "steps": out.steps,
        "obstructions": obstructions,
    })
}

pub fn census_json(p: u64, m: u64, level: Option<u64>, rows: &[CensusRow]) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "degree": r.degree,
                "count": r.count.to_string(),
                "mass": rational_string(&r.mass),
                "orbit_size": r.orbit_size.as_ref().map(ToString::to_string),
            })
        })
        .collect();
    json!({"p": p, "m": m, "level": level, "rows": rows})
}

pub fn prop32_json(r: &Prop32Report) -> Value {
    serde_json::to_value(r).expect("report is serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Fp2Ctx;
    use crate::quat::{w_matrix, QuatCtx};

    #[test]
    fn shapes() {
        let f = Fp2Ctx::new(3).unwrap();
        assert_eq!(fp2_json(&f.elem(1, 2)), json!([1, 2]));
        let t = w_matrix(QuatCtx::new(3, 4).unwrap());
        let v = quat_mat_json(&t);
        assert_eq!(v["N"], 4);
        assert_eq!(v["entries"][0][1], json!([[8, 0], [0, 0]]));
        let xc = XiClass::generic(3);
        let c = classify_json(&xc, 2);
        assert_eq!(c["case"], "III");
        assert_eq!(c["b0prime_dim"], 1);
        assert!(c["alpha"].is_null());
    }
}
