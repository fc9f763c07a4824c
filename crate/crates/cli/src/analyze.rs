//! Single-instance pipelines behind the `analyze`, `ellis`, `grouplike`, `orbital` and
//! `structured` commands.

use std::path::Path;
use std::time::Instant;

use elliskit_core::ellis::{check_ideal_structure, enveloping_semigroup, ideal_group, minimal_left_ideals, EllisSemigroup};
use elliskit_core::flows::{make_ambit, Ambit, Flow};
use elliskit_core::grouplike::{check_group_like, compute_ghat, default_ideal_group, identify_quotient, GroupLikeVerdict};
use elliskit_core::relations::{
    invariance, is_orbital, is_weakly_orbital, maximal_witnesses, EquivRelation, Invariance, OrbitalVerdict, WeakVerdict,
};
use elliskit_core::structured::{evaluate_worb, is_agreeable};
use elliskit_core::Caps;
use serde_json::json;

use crate::report::{Mode, Report};
use crate::schema::{load_flow_or_ambit, load_relation, load_scenario};
use crate::suites::structured_battery;
use crate::CliError;

fn semigroup_structure(s: &EllisSemigroup) -> serde_json::Value {
    let ideals = minimal_left_ideals(s);
    let group_order =
        ideals.first().and_then(|m| m.idempotents().first().and_then(|&u| ideal_group(s, m, u).ok())).map(|g| g.order());
    json!({
        "size": s.len(),
        "bijective": s.elements().filter(|&f| s.is_bijective(f)).count(),
        "idempotents": s.elements().filter(|&f| s.is_idempotent(f)).count(),
        "minimal_ideals": ideals.iter().map(|m| json!({
            "size": m.len(),
            "idempotents": m.idempotents(),
        })).collect::<Vec<_>>(),
        "ideal_group_order": group_order,
    })
}

fn ambit_for(flow: &Flow, basepoint: Option<u32>) -> Option<Ambit> {
    match basepoint {
        Some(x) => make_ambit(flow.clone(), x).ok(),
        None if flow.points() > 0 && flow.is_transitive() => make_ambit(flow.clone(), 0).ok(),
        None => None,
    }
}

fn record_ghat(r: &mut Report, s: &EllisSemigroup, ambit: &Ambit) {
    let ghat = default_ideal_group(s).and_then(|g| compute_ghat(s, &g, ambit));
    match ghat {
        Ok(gh) => r.record(
            "ghat",
            json!({
                "basepoint": ambit.basepoint(),
                "D": gh.d.members(),
                "H": gh.h_um.members(),
                "core": gh.core.members(),
                "order": gh.quotient.order(),
            }),
        ),
        Err(e) => r.record("ghat_error", e.to_string()),
    }
}

fn grouplike_verdicts(r: &mut Report, ambit: &Ambit, e: &EquivRelation, caps: &Caps) {
    match check_group_like(ambit, e) {
        Ok(GroupLikeVerdict::GroupLike(c)) => {
            r.check("group-like", true, Some(json!({ "quotient_order": c.quotient_group.order(), "kernel": c.kernel.members() })));
            r.record("quotient_table", c.quotient_group.table());
        }
        Ok(GroupLikeVerdict::NotGroupLike(why)) => {
            r.check("group-like", false, Some(json!(format!("{why:?}"))));
        }
        Err(err) => {
            r.check("group-like", false, Some(json!(err.to_string())));
        }
    }
    match identify_quotient(ambit, e, caps) {
        Ok(rep) => {
            r.check(
                "quotient-identification",
                true,
                Some(json!({ "classes": rep.classes, "ghat_order": rep.ghat.quotient.order(), "stabilizer_order": rep.stabilizer.order() })),
            );
            r.record(
                "identification",
                json!({
                    "classes": rep.classes,
                    "ghat_order": rep.ghat.quotient.order(),
                    "H": rep.stabilizer.members(),
                    "coset_classes": rep.coset_classes,
                    "group_map": rep.group_map,
                }),
            );
        }
        Err(err) => {
            r.check("quotient-identification", false, Some(json!(err.to_string())));
        }
    }
}

fn orbital_verdicts(r: &mut Report, flow: &Flow, e: &EquivRelation, caps: &Caps, decide_weak: bool) {
    match is_orbital(flow, e) {
        Ok(OrbitalVerdict::Orbital { kernel }) => {
            r.check("orbital", true, Some(json!({ "kernel": kernel.members() })));
        }
        Ok(OrbitalVerdict::NotOrbital { kernel, x, y }) => {
            r.check("orbital", false, Some(json!({ "kernel": kernel.members(), "related": [x, y] })));
        }
        Err(err) => {
            r.check("orbital", false, Some(json!(err.to_string())));
        }
    }
    if !decide_weak {
        return;
    }
    match is_weakly_orbital(flow, e, caps) {
        Ok(WeakVerdict::Witness(w)) => {
            r.check("weakly-orbital", true, Some(json!({ "subgroup": w.subgroup.members(), "support": w.support.to_u32_vec() })));
            match maximal_witnesses(flow, e, &w) {
                Ok(m) => r.record(
                    "maximal_witnesses",
                    json!({ "subgroup": m.subgroup.members(), "support": m.support.to_u32_vec() }),
                ),
                Err(err) => r.record("maximal_witnesses_error", err.to_string()),
            }
        }
        Ok(WeakVerdict::Exhausted { subgroups_checked }) => {
            r.check("weakly-orbital", false, Some(json!({ "subgroups_checked": subgroups_checked })));
        }
        Err(err) => {
            r.check("weakly-orbital", false, Some(json!(err.to_string())));
        }
    }
}

/// Returns whether the relation is invariant, recording the verdict.
fn invariance_verdict(r: &mut Report, flow: &Flow, e: &EquivRelation) -> bool {
    match invariance(flow, e) {
        Ok(Invariance::Invariant) => r.check("invariant", true, None),
        Ok(Invariance::Broken { g, x1, x2 }) => r.check("invariant", false, Some(json!({ "g": g, "x1": x1, "x2": x2 }))),
        Err(err) => r.check("invariant", false, Some(json!(err.to_string()))),
    }
}

pub fn analyze(path: &Path, relation: Option<&Path>, caps: &Caps) -> Result<Report, CliError> {
    let started = Instant::now();
    let (flow, basepoint) = load_flow_or_ambit(path, caps)?;
    let mut r = Report::new("analyze", Mode::Analysis, caps);
    r.record("points", flow.points());
    r.record("group_order", flow.group().order());
    r.record("transitive", flow.points() > 0 && flow.is_transitive());
    let s = enveloping_semigroup(&flow, caps).map_err(|e| CliError::Limit(e.to_string()))?;
    r.record("semigroup", semigroup_structure(&s));
    let clauses = check_ideal_structure(&s);
    r.check("ideal-structure", clauses.iter().all(|c| c.passed), Some(json!(clauses.iter().filter(|c| !c.passed).map(|c| c.clause).collect::<Vec<_>>())));
    let ambit = ambit_for(&flow, basepoint);
    if let Some(a) = &ambit {
        record_ghat(&mut r, &s, a);
    }
    if let Some(rel) = relation {
        let e = load_relation(rel, Some(&flow))?;
        r.record("classes", e.classes());
        if invariance_verdict(&mut r, &flow, &e) {
            match &ambit {
                Some(a) => grouplike_verdicts(&mut r, a, &e, caps),
                None => r.record("group_like", "skipped: no basepoint with a dense orbit"),
            }
            orbital_verdicts(&mut r, &flow, &e, caps, flow.group().order() <= caps.max_enumeration_order);
        }
    }
    r.finish(started);
    Ok(r)
}

pub fn ellis(path: &Path, caps: &Caps) -> Result<Report, CliError> {
    let started = Instant::now();
    let (flow, _) = load_flow_or_ambit(path, caps)?;
    let s = enveloping_semigroup(&flow, caps).map_err(|e| CliError::Limit(e.to_string()))?;
    let mut r = Report::new("ellis", Mode::Verification, caps);
    r.check("closed-under-composition", s.is_closed(), None);
    for c in check_ideal_structure(&s) {
        let w = if c.passed { None } else { Some(json!(c.detail)) };
        r.check(c.clause, c.passed, w);
    }
    r.record("semigroup", semigroup_structure(&s));
    r.finish(started);
    Ok(r)
}

pub fn grouplike(path: &Path, relation: &Path, caps: &Caps) -> Result<Report, CliError> {
    let started = Instant::now();
    let (flow, basepoint) = load_flow_or_ambit(path, caps)?;
    let e = load_relation(relation, Some(&flow))?;
    let mut r = Report::new("grouplike", Mode::Analysis, caps);
    r.record("classes", e.classes());
    let Some(ambit) = ambit_for(&flow, basepoint) else {
        return Err(CliError::Usage("the flow has no basepoint with a dense orbit".into()));
    };
    if invariance_verdict(&mut r, &flow, &e) {
        grouplike_verdicts(&mut r, &ambit, &e, caps);
    }
    r.finish(started);
    Ok(r)
}

pub fn orbital(path: &Path, relation: &Path, decide_weak: bool, caps: &Caps) -> Result<Report, CliError> {
    let started = Instant::now();
    let (flow, _) = load_flow_or_ambit(path, caps)?;
    let e = load_relation(relation, Some(&flow))?;
    let mut r = Report::new("orbital", Mode::Analysis, caps);
    r.record("classes", e.classes());
    if invariance_verdict(&mut r, &flow, &e) {
        orbital_verdicts(&mut r, &flow, &e, caps, decide_weak);
    }
    r.finish(started);
    Ok(r)
}

pub fn structured(path: &Path, caps: &Caps) -> Result<Report, CliError> {
    let started = Instant::now();
    let sc = load_scenario(path, caps)?;
    let mut r = Report::new("structured", Mode::Verification, caps);
    let added: Vec<_> = sc.added.iter().map(|(g, sets)| json!({ "ground": g.name(), "sets": sets.iter().map(|s| s.to_u32_vec()).collect::<Vec<_>>() })).collect();
    if !added.is_empty() {
        r.record("auto_completed", added);
    }
    let agree = is_agreeable(&sc.instance);
    r.record(
        "agreeability",
        agree
            .axioms
            .iter()
            .map(|a| json!({ "axiom": a.axiom, "name": a.name, "passed": a.passed(), "failure": a.failure.as_ref().map(|f| format!("{f:?}")) }))
            .collect::<Vec<_>>(),
    );
    r.record("relations", sc.relations.len());
    if agree.is_agreeable() {
        let (checks, examined) = structured_battery(&sc.instance, &sc.relations, caps);
        for (name, res) in checks {
            r.check(name, res.is_ok(), res.err());
        }
        r.record("theorem_checks", examined);
    } else {
        let conditions: Vec<_> = sc
            .relations
            .iter()
            .map(|e| match evaluate_worb(&sc.instance, e, caps) {
                Ok(w) => json!({ "classes": e.classes(), "conditions": w.conditions(), "condition_two": w.condition_two() }),
                Err(err) => json!({ "classes": e.classes(), "error": err.to_string() }),
            })
            .collect();
        r.record("conditions_without_agreeability", conditions);
    }
    r.finish(started);
    Ok(r)
}
