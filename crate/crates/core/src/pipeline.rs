//! The full chain of checks on an algebra with almost contact metric data.

use serde_json::{json, Value};

use crate::ce::{check_betti_conditions, CeComplex, MetricComplex};
use crate::error::Result;
use crate::foliated::{check_kahler_identities, hbar_groups, leafwise_harmonic_report};
use crate::lie::LieAlgebra;
use crate::report::{Report, Witness};
use crate::structures::{curvature, verify_cosymplectic, StructureData};

pub fn dossier(lie: &LieAlgebra, s: &StructureData) -> Result<Report> {
    let mut r = Report::new("dossier");
    let valid = lie.validate();
    r.absorb("algebra", &valid);
    if !valid.passed() {
        return Ok(r);
    }
    s.check_shapes(lie.dim())?;
    let flags = lie.classify();
    r.set_data("classification", flags.to_json());
    let ce = CeComplex::new(lie);
    let b = ce.betti();
    r.set_data("betti", json!(b));
    let n = lie.dim();
    if n % 2 == 1 {
        r.absorb("betti screening", &check_betti_conditions(&b, (n - 1) / 2)?);
    }
    if s.g.is_positive_definite() && s.g == s.g.transpose() {
        let mc = MetricComplex::new(ce, &s.g)?;
        let mut dims = Vec::new();
        let mut mismatch = None;
        for k in 0..=n {
            let h = mc.hodge(k);
            let [harm, exact, coexact] = h.dims();
            dims.push(json!({ "degree": k, "harmonic": harm, "exact": exact, "coexact": coexact }));
            if mismatch.is_none() && harm != b[k] {
                mismatch = Some(Witness::new(format!("dim ker Δ_{k} = {harm} but b_{k} = {}", b[k]), json!({ "degree": k })));
            }
        }
        r.stage("dim ker Δ_k = b_k", mismatch);
        r.set_data("hodge", Value::Array(dims));
        let (_, curv) = curvature(lie, &s.g)?;
        r.set_data("flat", json!(curv.is_flat()));
    }
    let cos = verify_cosymplectic(lie, s);
    r.absorb("cosymplectic", &cos);
    if !cos.passed() {
        return Ok(r);
    }
    if flags.unimodular {
        let flat = r.data.get("flat").and_then(Value::as_bool).unwrap_or(false);
        r.stage("unimodular ⇒ flat", (!flat).then(|| Witness::new("unimodular cosymplectic algebra with nonzero curvature", Value::Null)));
    }
    r.absorb("Kähler identities", &check_kahler_identities(lie, s)?);
    r.absorb("leafwise harmonic forms", &leafwise_harmonic_report(lie, s)?);
    let groups: Vec<Value> = (0..n).map(|v| hbar_groups(lie, s, v).map(|h| json!(h))).collect::<Result<_>>()?;
    r.set_data("hbar_groups", Value::Array(groups));
    Ok(r)
}
