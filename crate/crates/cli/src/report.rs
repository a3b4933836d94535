//! Library results rendered as JSON values. Ring elements become strings.

use mltower::dirsys::{Projectivity, Splitting};
use mltower::linalg::{EuclideanDomain, Mat};
use mltower::module::{FPModule, Submodule};
use mltower::tower::{LimValue, MLReport, ObstructionProfile, TargetCertificate, Witness};
use serde_json::{json, Value};

pub fn elems<E: ToString>(v: &[E]) -> Value {
    Value::from(v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

pub fn mat<E: Clone + ToString>(m: &Mat<E>) -> Value {
    Value::from((0..m.rows()).map(|i| elems(&(0..m.cols()).map(|j| m.at(i, j).clone()).collect::<Vec<_>>())).collect::<Vec<_>>())
}

pub fn module<R: EuclideanDomain>(m: &FPModule<R>) -> Value {
    let nf = m.normal_form();
    json!({
        "generators": m.gens(),
        "free_rank": nf.free_rank,
        "invariant_factors": elems(&nf.factors),
        "normal_form": m.render(),
    })
}

pub fn submodule<R: EuclideanDomain>(s: &Submodule<R>) -> Value {
    json!({ "generators": mat(s.generators()), "rank": s.rank() })
}

pub fn witness<R: EuclideanDomain>(w: &Witness<R>) -> Value {
    json!({
        "level": w.level,
        "chain": w.chain.iter().map(submodule).collect::<Vec<_>>(),
        "steps": w.steps.iter().map(|s| json!({
            "index": s.index,
            "element": elems(&s.element),
            "preimage": elems(&s.preimage),
        })).collect::<Vec<_>>(),
    })
}

pub fn ml<R: EuclideanDomain>(r: &MLReport<R>) -> Value {
    json!({
        "verdict": r.verdict,
        "l": r.l,
        "tail_shift": r.tail_shift,
        "max_offset": r.max_offset(),
        "depth": r.depth,
        "bound": r.bound,
        "stable_image": r.stable.as_ref().map(submodule),
        "witness": r.witness.as_ref().map(witness),
    })
}

pub fn lim_value<R: EuclideanDomain>(v: &LimValue<R>) -> Value {
    match v {
        LimValue::Exact(m) => json!({ "status": "Exact", "module": module(m) }),
        LimValue::Undecided { depth, truncated_kernel, truncated_cokernel } => json!({
            "status": "Undecided",
            "depth": depth,
            "truncated_kernel": module(truncated_kernel),
            "truncated_cokernel": module(truncated_cokernel),
        }),
    }
}

pub fn certificate<E: ToString>(c: &TargetCertificate<E>) -> Value {
    json!({
        "level": c.level,
        "generator": c.generator,
        "solution": c.solution.iter().map(|a| elems(a)).collect::<Vec<_>>(),
        "support_start": c.support_start,
        "vanishing_from": c.vanishing_from,
        "verified": c.verified,
    })
}

pub fn obstruction<E: ToString>(o: &ObstructionProfile<E>) -> Value {
    json!({ "level": o.level, "values": o.values.iter().map(|a| elems(a)).collect::<Vec<_>>() })
}

pub fn splitting<E: Clone + ToString>(s: &Splitting<E>) -> Value {
    json!({ "depth": s.depth, "row_levels": s.row_levels, "psi": mat(&s.psi), "verified": s.verified })
}

pub fn projectivity<R: EuclideanDomain>(p: &Projectivity<R>) -> Value {
    match p {
        Projectivity::Projective { dual, splitting: s } => json!({
            "verdict": "Projective",
            "dual_tower": ml(dual),
            "splitting": splitting(s),
        }),
        Projectivity::NotProjective { dual, witness: w } => json!({
            "verdict": "NotProjective",
            "dual_tower": ml(dual),
            "witness": witness(w),
        }),
        Projectivity::Undecided { dual } => json!({ "verdict": "Undecided", "dual_tower": ml(dual) }),
    }
}
