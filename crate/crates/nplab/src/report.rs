//! JSON and CSV rendering of check reports and decompositions.

use nplab_core::rh_criteria::{CriteriaReport, NarrowDecomposition};
use serde_json::{json, Value};

pub fn report_to_json(report: &CriteriaReport) -> Value {
    json!({
        "check_id": report.check_id.name(),
        "range": { "lo": report.lo, "hi": report.hi },
        "points_evaluated": report.points_evaluated,
        "violation_count": report.violation_count,
        "violations": report.violations.iter().map(|v| json!({
            "stat": v.stat,
            "at": v.at,
            "lhs": v.lhs,
            "rhs": v.rhs,
        })).collect::<Vec<_>>(),
        "onset": report.onset,
        "extrema": report.extrema.iter().map(|e| json!({
            "stat": e.stat,
            "min": e.min,
            "argmin": e.argmin,
            "max": e.max,
            "argmax": e.argmax,
        })).collect::<Vec<_>>(),
    })
}

/// CSV form of a report: one row per recorded violation.
pub fn report_to_csv(report: &CriteriaReport) -> String {
    let mut out = String::from("stat,at,lhs,rhs\n");
    for v in &report.violations {
        out.push_str(&format!(
            "{},{},{},{}\n",
            v.stat,
            crate::rows::fmt_f64(v.at),
            crate::rows::fmt_f64(v.lhs),
            crate::rows::fmt_f64(v.rhs)
        ));
    }
    out
}

/// One-line human summary for stderr.
pub fn report_summary(report: &CriteriaReport) -> String {
    let onset = match report.onset {
        Some(x) => format!("{x:.6e}"),
        None => "none (violations persist to range end)".into(),
    };
    let extrema = report
        .extrema
        .iter()
        .map(|e| {
            format!(
                "{}: min {:.6e} at {:.6e}, max {:.6e} at {:.6e}",
                e.stat, e.min, e.argmin, e.max, e.argmax
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    format!(
        "{} on [{:.6e}, {:.6e}]: {} points, {} violations, onset {}; {}",
        report.check_id.name(),
        report.lo,
        report.hi,
        report.points_evaluated,
        report.violation_count,
        onset,
        extrema
    )
}

pub fn decomposition_to_json(dec: &NarrowDecomposition) -> Value {
    json!({
        "x": dec.x,
        "H": dec.h.value,
        "H_err": dec.h.error_bound,
        "T": dec.t.value,
        "T_err": dec.t.error_bound,
        "D": dec.d,
        "E": dec.e.value,
        "E_err": dec.e.error_bound,
        "F": dec.f,
        "residual": dec.residual.value,
        "residual_err": dec.residual.error_bound,
        "e_tail_model": dec.e_tail_model,
        "e_tail_rh_conditional": true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nplab_core::primes::build_cache;
    use nplab_core::rh_criteria::{run_check, CheckId, CheckParams};

    #[test]
    fn json_report_has_expected_keys() {
        let cache = build_cache(10_000, 64).unwrap();
        let report = run_check(
            CheckId::Robin13,
            100.0,
            1000.0,
            &cache,
            &CheckParams::default(),
        )
        .unwrap();
        let value = report_to_json(&report);
        assert_eq!(value["check_id"], "robin_13");
        assert!(value["points_evaluated"].as_u64().unwrap() > 0);
        assert!(value["extrema"].as_array().unwrap().len() == 1);
        let summary = report_summary(&report);
        assert!(summary.contains("robin_13"));
    }

    #[test]
    fn decomposition_json_flags_conditional_tail() {
        let cache = build_cache(10_000, 64).unwrap();
        let dec = nplab_core::rh_criteria::decompose(100.0, 1e4, &cache).unwrap();
        let value = decomposition_to_json(&dec);
        assert_eq!(value["e_tail_rh_conditional"], true);
        assert!(value["residual"].is_number());
    }
}
