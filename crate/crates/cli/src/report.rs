//! JSON and CSV renderings of results. Exact rationals are `"p/q"` strings;
//! float columns are provided only for plotting.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use rees_core::density::{ChamberDecomposition, DensityGrid};
use rees_core::dependence::{CriterionRecord, CriterionStatus, DependenceVerdict};
use rees_core::multiplicity::{DiagonalReport, DiagonalVersion, EpsilonReport, IntegralCheck, MixedReport};
use rees_core::poly::UniPoly;
use rees_core::rational::{format_rational, to_f64};
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

fn q(r: &BigRational) -> Value {
    Value::String(format_rational(r))
}

fn int(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

fn poly_json(p: &UniPoly) -> Value {
    json!({
        "polynomial": p.to_string(),
        "coefficients": p.coeffs().iter().map(q).collect::<Vec<_>>(),
    })
}

pub fn grid_json(grid: &DensityGrid) -> Value {
    let points: Vec<Value> = grid
        .xs
        .iter()
        .zip(&grid.samples)
        .zip(&grid.extrapolated)
        .map(|((x, row), e)| {
            json!({
                "x": q(x),
                "samples": row.iter().map(q).collect::<Vec<_>>(),
                "extrapolated": q(&e.value),
                "exact": e.exact,
                "period": e.period,
                "settled_from": e.settled_from,
                "diagnostic": q(&e.diagnostic),
            })
        })
        .collect();
    json!({
        "kind": grid.kind.as_str(),
        "dimension": grid.dimension,
        "rank": grid.rank,
        "ladder": grid.ladder,
        "points": points,
    })
}

pub fn fit_json(fit: &ChamberDecomposition) -> Value {
    let chambers: Vec<Value> = fit
        .chambers
        .iter()
        .map(|c| {
            let mut v = poly_json(&c.polynomial);
            let obj = v.as_object_mut().expect("object");
            obj.insert("lower".into(), json!(c.lower));
            obj.insert("upper".into(), json!(c.upper));
            obj.insert("exact".into(), json!(c.exact));
            obj.insert("nodes".into(), json!(c.nodes.iter().map(q).collect::<Vec<_>>()));
            obj.insert("validated_points".into(), json!(c.validated));
            obj.insert("max_residual".into(), json!(c.max_residual));
            v
        })
        .collect();
    json!({ "breakpoints": fit.breakpoints, "chambers": chambers })
}

pub fn epsilon_json(r: &EpsilonReport, check: Option<&IntegralCheck>) -> Value {
    json!({
        "kind": "epsilon",
        "n_max": r.n_max(),
        "totals": r.totals.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "estimate": q(&r.estimate),
        "estimate_f64": to_f64(&r.estimate),
        "diagnostic": q(&r.diagnostic),
        "exact": r.exact.as_ref().map(q),
        "period": r.period,
        "settled_from": r.settled_from,
        "integral_check": check.map(|c| json!({
            "integral": q(&c.integral),
            "epsilon": q(&c.epsilon),
            "allowed": c.allowed,
            "agrees": c.agrees,
        })),
    })
}

pub fn version_name(v: DiagonalVersion) -> &'static str {
    match v {
        DiagonalVersion::A => "A",
        DiagonalVersion::S => "S",
    }
}

pub fn diagonal_json(r: &DiagonalReport) -> Value {
    let det = r.determined.as_ref();
    json!({
        "kind": "diagonal",
        "version": version_name(r.version),
        "c": r.c,
        "values": r.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "status": if det.is_some() { "determined" } else { "undetermined" },
        "multiplicity": det.map(|d| int(&d.multiplicity)),
        "dimension": det.map(|d| d.dimension),
        "expected_dimensions": r.expected_dimensions,
        "n0": det.map(|d| d.n0),
        "difference_order": det.map(|d| d.difference_order),
    })
}

pub fn mixed_json(r: &MixedReport) -> Value {
    json!({
        "kind": "mixed",
        "cumulative": r.fit.cumulative,
        "c": r.fit.c,
        "margin": r.fit.margin,
        "period": r.fit.period,
        "degree": r.fit.degree,
        "classes": r.fit.classes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "leading_form": r.fit.leading_form().to_string(),
        "validated_points": r.fit.validated_points,
        "values": r.values.iter().map(int).collect::<Vec<_>>(),
        "nonnegative": r.nonnegative,
        "density_polynomial": poly_json(&r.density_polynomial),
    })
}

fn status_name(s: CriterionStatus) -> &'static str {
    match s {
        CriterionStatus::Match => "match",
        CriterionStatus::Differ => "differ",
        CriterionStatus::Unusable => "unusable",
    }
}

pub fn verdict_json(v: &DependenceVerdict) -> Value {
    let criteria: Vec<Value> = v
        .criteria
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "sub": c.sub.as_ref().map(|s| s.iter().map(q).collect::<Vec<_>>()),
                "sup": c.sup.as_ref().map(|s| s.iter().map(q).collect::<Vec<_>>()),
                "status": status_name(c.status),
                "decisive": c.decisive,
                "note": c.note,
            })
        })
        .collect();
    json!({
        "verdict": v.verdict.as_str(),
        "certificate": v.certificate,
        "c": v.c,
        "n_max": v.n_max,
        "d_nm": v.d_nm,
        "consistent": v.consistent,
        "criteria": criteria,
        "epsilon_totals": v.epsilon_totals.iter().map(|(n, a, b)| json!([n, a.to_string(), b.to_string()])).collect::<Vec<_>>(),
        "heuristic_epsilon_gap": v.heuristic_epsilon_gap,
    })
}

pub fn verdict_table(v: &DependenceVerdict) -> String {
    let mut rows = vec![["criterion".to_string(), "smaller".into(), "larger".into(), "status".into()]];
    for c in &v.criteria {
        let name = if c.decisive { c.name.to_string() } else { format!("{} (info)", c.name) };
        rows.push([
            name,
            CriterionRecord::render_side(&c.sub),
            CriterionRecord::render_side(&c.sup),
            status_name(c.status).to_string(),
        ]);
    }
    let widths: Vec<usize> = (0..4).map(|i| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in &rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    let cert = v.certificate.map_or("none".to_string(), |n| format!("n0 = {n}"));
    out.push_str(&format!("certificate: {cert}\nc = {}, n_max = {}\nverdict: {}\n", v.c, v.n_max, v.verdict));
    if v.heuristic_epsilon_gap && v.verdict != rees_core::dependence::Verdict::Reduction {
        out.push_str("heuristic: epsilon totals gap grows like n^(d+e-1)\n");
    }
    out
}

/// Columns: `x`, one per ladder level, `extrapolated`, `diagnostic`, `exact`,
/// then float copies of `x` and `extrapolated`.
pub fn write_grid_csv(path: &Path, grid: &DensityGrid) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
    let mut header = vec!["x".to_string()];
    header.extend(grid.ladder.iter().map(|n| format!("n{n}")));
    header.extend(["extrapolated", "diagnostic", "exact", "x_f64", "extrapolated_f64"].map(String::from));
    w.write_record(&header)?;
    for ((x, row), e) in grid.xs.iter().zip(&grid.samples).zip(&grid.extrapolated) {
        let mut rec = vec![format_rational(x)];
        rec.extend(row.iter().map(format_rational));
        rec.push(format_rational(&e.value));
        rec.push(format_rational(&e.diagnostic));
        rec.push(e.exact.to_string());
        rec.push(to_f64(x).to_string());
        rec.push(to_f64(&e.value).to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn envelope(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Some(obj), Value::Object(extra)) = (v.as_object_mut(), body) {
        obj.extend(extra);
    }
    v
}
