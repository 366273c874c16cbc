//! JSON renderings of library results. Only formatting happens here.

use gaussent::info_inequalities::{ShannonKind, ShannonMode, ShannonReport, SweepTable};
use gaussent::io::{matrix_to_json, number_to_json as num, subset_vector_to_json};
use gaussent::minor_assignment::{EntropicReport, MinorReport};
use gaussent::region3::{BoundaryCovarianceSpec, BoundaryDiagnostics, Classification, ConeAchievement, FDeltaProfile, Phi13};
use gaussent::{Matrix64, SubsetMask};
use serde_json::{json, Map, Value};

pub fn header(command: &str, fields: &[(&str, Value)]) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    for (k, v) in fields {
        m.insert((*k).into(), v.clone());
    }
    Value::Object(m)
}

pub fn with_header(header: Value, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("header".into(), header);
    if let Value::Object(b) = body {
        m.extend(b);
    }
    Value::Object(m)
}

fn mask(s: SubsetMask) -> Value {
    json!(s.to_string())
}

pub fn shannon(rep: &ShannonReport<f64>) -> Value {
    let violations: Vec<Value> = rep
        .violations
        .iter()
        .map(|v| {
            json!({
                "kind": match v.kind { ShannonKind::Monotonicity => "monotonicity", ShannonKind::Submodularity => "submodularity" },
                "s": mask(v.s),
                "s_prime": mask(v.s_prime),
                "slack": num(v.slack),
            })
        })
        .collect();
    json!({ "checked": rep.checked, "violations": violations, "passed": rep.passed() })
}

pub fn shannon_mode(mode: ShannonMode) -> &'static str {
    match mode {
        ShannonMode::Discrete => "discrete",
        ShannonMode::Continuous => "continuous",
    }
}

pub fn minor_report(rep: &MinorReport<f64>) -> Value {
    let equations: Vec<Value> = rep
        .equations
        .iter()
        .map(|e| {
            json!({
                "type": e.kind.label(),
                "indices": mask(e.indices),
                "residual": num(e.residual.value),
                "scale": num(e.residual.scale),
                "relative": num(e.relative),
                "pass": e.pass,
            })
        })
        .collect();
    json!({
        "n": rep.n,
        "equation_count": rep.equations.len(),
        "expected_count": rep.expected_count,
        "max_relative": num(rep.max_relative()),
        "equations": equations,
        "verdict": if rep.passed { "pass" } else { "fail" },
    })
}

pub fn entropic(rep: &EntropicReport<f64>) -> Value {
    json!({
        "conditions": minor_report(&rep.conditions),
        "psd": rep.psd,
        "matrix": rep.matrix.as_ref().map(|m| matrix_to_json(&m.to_dense(), m.n(), 1)),
        "verdict": if rep.passed { "gaussian" } else { "not-gaussian" },
    })
}

pub fn sweep_summary(t: &SweepTable<f64>) -> Value {
    let feasible: Vec<_> = t.cells.iter().filter(|c| c.ingleton_value.is_some()).collect();
    let banded = feasible.iter().filter(|c| c.ingleton_value.is_some_and(|v| v.abs() > t.band)).count();
    let agreeing = feasible.iter().filter(|c| c.ingleton_value.is_some_and(|v| v.abs() > t.band) && c.agrees).count();
    json!({
        "cells": t.cells.len(),
        "feasible": feasible.len(),
        "boundary": t.cells.iter().filter(|c| c.feasibility.label() == "boundary").count(),
        "violating": t.cells.iter().filter(|c| c.violates).count(),
        "agreement": if banded == 0 { json!(null) } else { num(agreeing as f64 / banded as f64) },
    })
}

pub fn profile(p: &FDeltaProfile<f64>) -> Value {
    json!({
        "case": p.case_id,
        "delta0": p.delta0.label(),
        "sup_f": num(p.sup_f),
        "attained": p.attained,
    })
}

pub fn classification(c: &Classification<f64>) -> Value {
    json!({
        "label": Classification::<f64>::LABEL,
        "verdict": c.verdict.label(),
        "branch": c.branch.label(),
        "bound": c.bound.map(num),
        "g123": num(c.g123),
        "y_tilde": c.y_tilde.map(num),
        "x": c.x.map(num).to_vec(),
    })
}

pub fn boundary_spec(s: &BoundaryCovarianceSpec<f64>) -> Value {
    let phi13 = match &s.phi13 {
        Phi13::Extremal => json!({ "mode": "extremal" }),
        Phi13::Rotation(psi) => json!({ "mode": "rotation", "psi": num(*psi) }),
        Phi13::Explicit(m) => json!({ "mode": "explicit", "rows": matrix_to_json(m, 1, m.rows())["rows"] }),
    };
    json!({
        "T": s.t,
        "T_hat": s.t_hat,
        "alpha_diag": s.alpha_diag.map(num).to_vec(),
        "alpha_off": { "12": num(s.alpha_off[0]), "13": num(s.alpha_off[1]), "23": num(s.alpha_off[2]) },
        "phi12": "identity",
        "phi23": "identity",
        "phi13": phi13,
    })
}

pub fn achievement(a: &ConeAchievement<f64>) -> Value {
    let (th, t) = a.rational_theta();
    json!({
        "theta_prime": num(a.theta_prime),
        "status": a.status.label(),
        "delta": num(a.delta),
        "theta": num(a.theta),
        "theta_rational": [th, t],
        "cos_psi": num(a.cos_psi),
        "spec": boundary_spec(&a.spec()),
        "target": subset_vector_to_json(&a.target),
        "q": subset_vector_to_json(&a.q),
        "max_gap": num(a.max_gap),
        "profile": profile(&a.profile),
    })
}

pub fn diagnostics(d: &BoundaryDiagnostics, r: &Matrix64, t: usize) -> Value {
    json!({
        "converged": d.converged,
        "unbounded": d.unbounded,
        "kkt_residual": num(d.kkt_residual),
        "off_block_deviation": { "12": num(d.off_block_deviation[0]), "13": num(d.off_block_deviation[1]), "23": num(d.off_block_deviation[2]) },
        "phi_deviation": num(d.phi_deviation),
        "objective": num(d.objective),
        "iterations": d.iterations,
        "restart": d.restart,
        "covariance": matrix_to_json(r, 3, t),
    })
}
