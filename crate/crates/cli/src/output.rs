//! Deterministic CSV and JSON emission.
//!
//! Floats are printed with Rust's shortest round-trip formatting, so two
//! runs of the same config produce byte-identical output. JSON objects
//! serialize with sorted keys (serde_json's default map).

use serde_json::json;

use reslab_core::analysis::DeviationReport;
use reslab_core::casestudies::{CausalityReport, RetardedSeries};
use reslab_core::types::AmplitudeSeries;

pub const AMP_HEADER: &str = "t,model,re,im,abs2,est_error";
pub const COMPARE_HEADER: &str = "t,model,re,im,abs2,est_error,rel_dev,ratio_re,ratio_im";
pub const CASESTUDY_HEADER: &str = "tau,mode,re,im,abs2,est_error";
pub const SCAN_HEADER: &str = "param,value,t,model,re,im,abs2,est_error";

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn series_error(s: &AmplitudeSeries, i: usize) -> f64 {
    s.errors.as_ref().map(|e| e[i]).unwrap_or(0.0)
}

/// One row per (t, model), t outermost, models in the given order.
pub fn amp_csv(series: &[AmplitudeSeries]) -> String {
    let mut out = String::from(AMP_HEADER);
    out.push('\n');
    if series.is_empty() {
        return out;
    }
    let n = series[0].grid.len();
    for i in 0..n {
        for s in series {
            let t = s.grid.samples()[i];
            let v = s.values[i];
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt(t),
                s.model.as_str(),
                fmt(v.re),
                fmt(v.im),
                fmt(v.norm_sqr()),
                fmt(series_error(s, i)),
            ));
        }
    }
    out
}

fn series_json(s: &AmplitudeSeries) -> serde_json::Value {
    let points: Vec<serde_json::Value> = (0..s.grid.len())
        .map(|i| {
            json!({
                "t": s.grid.samples()[i],
                "re": s.values[i].re,
                "im": s.values[i].im,
                "abs2": s.values[i].norm_sqr(),
                "est_error": series_error(s, i),
            })
        })
        .collect();
    json!({ "model": s.model.as_str(), "points": points })
}

pub fn amp_json(series: &[AmplitudeSeries]) -> String {
    let v = json!({ "series": series.iter().map(series_json).collect::<Vec<_>>() });
    format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
}

/// One row per grid point carrying the half-line series (the model under
/// comparison) plus the derived columns; the full-line and delta values
/// are recoverable from the ratio columns, and the JSON form carries all
/// four series explicitly.
pub fn compare_csv(report: &DeviationReport) -> String {
    let mut out = String::from(COMPARE_HEADER);
    out.push('\n');
    let halfline = &report.series[0];
    for i in 0..report.grid.len() {
        let v = halfline.values[i];
        let ratio = report.ratio_to_delta[i];
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fmt(halfline.grid.samples()[i]),
            halfline.model.as_str(),
            fmt(v.re),
            fmt(v.im),
            fmt(v.norm_sqr()),
            fmt(series_error(halfline, i)),
            fmt(report.rel_dev[i]),
            fmt(ratio.re),
            fmt(ratio.im),
        ));
    }
    out
}

pub fn compare_json(report: &DeviationReport) -> String {
    let ratio: Vec<serde_json::Value> = report
        .ratio_to_delta
        .iter()
        .map(|r| json!({"re": r.re, "im": r.im}))
        .collect();
    let v = json!({
        "grid": {
            "start": report.grid.start(),
            "stop": report.grid.stop(),
            "points": report.grid.len(),
        },
        "rel_dev": report.rel_dev,
        "ratio_to_delta": ratio,
        "tail_exponent": report.tail_exponent,
        "crossover_time": report.crossover_time,
        "series": report.series.iter().map(series_json).collect::<Vec<_>>(),
        "params": report.params,
    });
    format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
}

/// Case-study rows: one per (tau, mode), τ outermost.
pub fn casestudy_csv(profiles: &[&RetardedSeries]) -> String {
    let mut out = String::from(CASESTUDY_HEADER);
    out.push('\n');
    if profiles.is_empty() {
        return out;
    }
    let n = profiles[0].taus.len();
    for i in 0..n {
        for p in profiles {
            let v = p.values[i];
            let err = p.errors.as_ref().map(|e| e[i]).unwrap_or(0.0);
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt(p.taus[i]),
                p.mode.as_str(),
                fmt(v.re),
                fmt(v.im),
                fmt(v.norm_sqr()),
                fmt(err),
            ));
        }
    }
    out
}

fn retarded_json(p: &RetardedSeries) -> serde_json::Value {
    let points: Vec<serde_json::Value> = (0..p.taus.len())
        .map(|i| {
            json!({
                "tau": p.taus[i],
                "re": p.values[i].re,
                "im": p.values[i].im,
                "abs2": p.values[i].norm_sqr(),
                "est_error": p.errors.as_ref().map(|e| e[i]).unwrap_or(0.0),
            })
        })
        .collect();
    json!({ "mode": p.mode.as_str(), "points": points })
}

pub fn casestudy_json(
    profiles: &[&RetardedSeries],
    causality: Option<&CausalityReport>,
) -> String {
    let mut v = json!({
        "profiles": profiles.iter().map(|p| retarded_json(p)).collect::<Vec<_>>(),
    });
    if let Some(c) = causality {
        v["causality"] = json!({
            "taus": c.taus,
            "precursor_curve": c.precursor_curve,
            "max_precursor": c.max_precursor,
            "wwa_precursor": c.wwa_precursor,
            "hegerfeldt_flag": c.hegerfeldt_flag,
        });
    }
    format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
}

/// Long-format sweep rows: the swept parameter name and value prefix the
/// usual amp columns.
pub fn scan_csv(param: &str, blocks: &[(f64, Vec<AmplitudeSeries>)]) -> String {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for (value, series) in blocks {
        if series.is_empty() {
            continue;
        }
        let n = series[0].grid.len();
        for i in 0..n {
            for s in series {
                let v = s.values[i];
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    param,
                    fmt(*value),
                    fmt(s.grid.samples()[i]),
                    s.model.as_str(),
                    fmt(v.re),
                    fmt(v.im),
                    fmt(v.norm_sqr()),
                    fmt(series_error(s, i)),
                ));
            }
        }
    }
    out
}

pub fn scan_json(param: &str, blocks: &[(f64, Vec<AmplitudeSeries>)]) -> String {
    let sweeps: Vec<serde_json::Value> = blocks
        .iter()
        .map(|(value, series)| {
            json!({
                "value": value,
                "series": series.iter().map(series_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let v = json!({ "param": param, "sweep": sweeps });
    format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
}
