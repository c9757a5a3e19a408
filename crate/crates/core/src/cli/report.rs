use serde::ser::Serializer;
use serde::Serialize;
use serde_json::value::RawValue;

use crate::estimator::Warning;

/// JSON number with 17 significant digits; non-finite values become strings.
fn sig17<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        let raw = RawValue::from_string(format!("{v:.16e}")).expect("valid number");
        raw.serialize(s)
    } else {
        s.serialize_str(if *v > 0.0 {
            "inf"
        } else if *v < 0.0 {
            "-inf"
        } else {
            "nan"
        })
    }
}

fn sig17_opt<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => sig17(v, s),
        None => s.serialize_none(),
    }
}

/// Four decimals, `NA` for missing values.
pub fn tsv_num(v: Option<f64>) -> String {
    match v {
        None => "NA".into(),
        Some(v) if v.is_infinite() => if v > 0.0 { "inf" } else { "-inf" }.into(),
        Some(v) => format!("{v:.4}"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalOut {
    #[serde(serialize_with = "sig17")]
    pub lo: f64,
    #[serde(serialize_with = "sig17")]
    pub hi: f64,
    /// `null` or `daniels` for analytic intervals.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variance: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "sig17_opt")]
    pub sigma_tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub redraws: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    pub group: String,
    pub n: usize,
    #[serde(serialize_with = "sig17_opt")]
    pub slope: Option<f64>,
    #[serde(serialize_with = "sig17_opt")]
    pub intercept: Option<f64>,
    #[serde(serialize_with = "sig17_opt")]
    pub kendall_tau: Option<f64>,
    pub ci_bootstrap: Option<IntervalOut>,
    pub ci_analytic: Option<IntervalOut>,
    #[serde(serialize_with = "sig17_opt")]
    pub time_s: Option<f64>,
    pub warnings: Vec<Warning>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSettings {
    pub method: &'static str,
    #[serde(serialize_with = "sig17")]
    pub level: f64,
    pub bootstrap_replicates: Option<usize>,
    pub seed: u64,
    pub quantile_rule: &'static str,
    pub intercept_rule: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub settings: FitSettings,
    pub groups: Vec<FitRow>,
}

impl FitReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("group\tn\tslope\tLCI_b\tUCI_b\tLCI_a\tUCI_a\ttime_s\tintercept\twarnings\terror\n");
        for r in &self.groups {
            let (lb, ub) = r.ci_bootstrap.as_ref().map_or((None, None), |c| (Some(c.lo), Some(c.hi)));
            let (la, ua) = r.ci_analytic.as_ref().map_or((None, None), |c| (Some(c.lo), Some(c.hi)));
            let warnings: Vec<String> = r.warnings.iter().map(|w| w.to_string()).collect();
            out.push_str(
                &[
                    r.group.clone(),
                    r.n.to_string(),
                    tsv_num(r.slope),
                    tsv_num(lb),
                    tsv_num(ub),
                    tsv_num(la),
                    tsv_num(ua),
                    tsv_num(r.time_s),
                    tsv_num(r.intercept),
                    if warnings.is_empty() { "NA".into() } else { warnings.join(",") },
                    r.error.clone().unwrap_or_else(|| "NA".into()),
                ]
                .join("\t"),
            );
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfluenceRow {
    /// 1-based position in the input.
    pub index: usize,
    pub group: Option<String>,
    #[serde(serialize_with = "sig17")]
    pub x: f64,
    #[serde(serialize_with = "sig17")]
    pub y: f64,
    #[serde(serialize_with = "sig17")]
    pub tau: f64,
    #[serde(serialize_with = "sig17")]
    pub tau_scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfluenceReport {
    #[serde(serialize_with = "sig17")]
    pub slope: f64,
    #[serde(serialize_with = "sig17")]
    pub intercept: f64,
    pub trend_window: usize,
    pub observations: Vec<InfluenceRow>,
}

impl InfluenceReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("index\tgroup\tx\ty\ttau\ttau_scaled\n");
        for r in &self.observations {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                r.index,
                r.group.as_deref().unwrap_or("NA"),
                tsv_num(Some(r.x)),
                tsv_num(Some(r.y)),
                tsv_num(Some(r.tau)),
                tsv_num(Some(r.tau_scaled)),
            ));
        }
        out
    }

    pub fn tau_scaled(&self) -> Vec<f64> {
        self.observations.iter().map(|r| r.tau_scaled).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formats() {
        assert_eq!(tsv_num(Some(2.0)), "2.0000");
        assert_eq!(tsv_num(Some(-0.00004)), "-0.0000");
        assert_eq!(tsv_num(None), "NA");
        assert_eq!(tsv_num(Some(f64::INFINITY)), "inf");
        let ci = IntervalOut {
            lo: 0.1,
            hi: f64::INFINITY,
            variance: None,
            sigma_tau: None,
            redraws: None,
        };
        assert_eq!(
            serde_json::to_string(&ci).unwrap(),
            r#"{"lo":1.0000000000000001e-1,"hi":"inf"}"#
        );
        let back: Vec<f64> = serde_json::from_str(r#"[1.0000000000000001e-1]"#).unwrap();
        assert_eq!(back, vec![0.1]);
    }
}
