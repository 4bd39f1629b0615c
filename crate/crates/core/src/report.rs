//! Report serialisation: CSV at fixed precision, JSON, and comparison
//! against published reference columns.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::engine::AnalysisReport;
use crate::error::{Error, Result};

/// Significant digits used for every number written to CSV.
pub const SIG_DIGITS: usize = 8;

/// Formats `x` with [`SIG_DIGITS`] significant digits, in plain decimal
/// when the exponent is moderate and scientific notation otherwise.
///
/// ```
/// use fuzzy_tft::report::sig;
/// assert_eq!(sig(0.052698441234), "0.052698441");
/// assert_eq!(sig(1000.0), "1000.0000");
/// assert_eq!(sig(3.3e-12), "3.3000000e-12");
/// assert_eq!(sig(0.0), "0");
/// ```
pub fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // Round first so 9.99999999 -> 10.000000 picks the right exponent.
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let exp: i32 = sci
        .split_once('e')
        .map(|(_, e)| e.parse().unwrap())
        .unwrap_or(0);
    if (-5..=15).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

/// `t,te_lower,te_peak,te_upper,te_defuzzified`
pub fn sweep_csv(report: &AnalysisReport) -> String {
    let mut out = String::from("t,te_lower,te_peak,te_upper,te_defuzzified\n");
    for p in &report.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            sig(p.t.hours()),
            sig(p.te.lower()),
            sig(p.te.peak()),
            sig(p.te.upper()),
            sig(p.defuzzified)
        );
    }
    out
}

/// `event_id,fim,rank`
pub fn importance_csv(report: &AnalysisReport) -> String {
    let mut out = String::from("event_id,fim,rank\n");
    for i in &report.importance {
        let _ = writeln!(out, "{},{},{}", i.event, sig(i.fim), i.rank);
    }
    out
}

pub fn to_json(report: &AnalysisReport) -> String {
    serde_json::to_string_pretty(report).expect("report serialises") + "\n"
}

/// One row of a published comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub t: f64,
    pub petri_net: f64,
    pub bayesian_network: f64,
    pub proposed: f64,
}

/// Reads `t,petri_net,bayesian_network,proposed` rows; `#` lines are comments.
pub fn read_reference(text: &str) -> Result<Vec<ReferenceRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    rdr.deserialize()
        .map(|r| r.map_err(|e| Error::Config(format!("reference CSV: {e}"))))
        .collect()
}

/// Which scalar of the fuzzy top-event probability is compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpretation {
    #[default]
    Centroid,
    Peak,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Delta {
    pub t: f64,
    pub computed: f64,
    pub reference: ReferenceRow,
}

impl Delta {
    pub fn vs_petri_net(&self) -> f64 {
        (self.computed - self.reference.petri_net).abs()
    }

    pub fn vs_bayesian_network(&self) -> f64 {
        (self.computed - self.reference.bayesian_network).abs()
    }

    pub fn vs_proposed(&self) -> f64 {
        (self.computed - self.reference.proposed).abs()
    }

    /// Gap between the published proposed column and the Petri-net column.
    pub fn published_gap(&self) -> f64 {
        (self.reference.proposed - self.reference.petri_net).abs()
    }
}

/// Pairs report points with reference rows at the same time. Every reference
/// time must be present in the report.
pub fn compare(
    report: &AnalysisReport,
    reference: &[ReferenceRow],
    how: Interpretation,
) -> Result<Vec<Delta>> {
    reference
        .iter()
        .map(|r| {
            let p = report
                .points
                .iter()
                .find(|p| (p.t.hours() - r.t).abs() <= 1e-9 * r.t.abs().max(1.0))
                .ok_or_else(|| {
                    Error::Config(format!("reference time {} is not on the sweep grid", r.t))
                })?;
            let computed = match how {
                Interpretation::Centroid => p.defuzzified,
                Interpretation::Peak => p.peak,
            };
            Ok(Delta {
                t: r.t,
                computed,
                reference: *r,
            })
        })
        .collect()
}

fn rel(d: f64, base: f64) -> f64 {
    if base == 0.0 {
        f64::INFINITY
    } else {
        d / base.abs()
    }
}

/// Per-row absolute and relative deltas.
pub fn deltas_csv(deltas: &[Delta]) -> String {
    let mut out = String::from(
        "t,computed,petri_net,abs_delta_petri_net,rel_delta_petri_net,bayesian_network,abs_delta_bayesian_network,\
         rel_delta_bayesian_network,proposed,abs_delta_proposed,rel_delta_proposed\n",
    );
    for d in deltas {
        let r = d.reference;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            sig(d.t),
            sig(d.computed),
            sig(r.petri_net),
            sig(d.vs_petri_net()),
            sig(rel(d.vs_petri_net(), r.petri_net)),
            sig(r.bayesian_network),
            sig(d.vs_bayesian_network()),
            sig(rel(d.vs_bayesian_network(), r.bayesian_network)),
            sig(r.proposed),
            sig(d.vs_proposed()),
            sig(rel(d.vs_proposed(), r.proposed)),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_digits() {
        assert_eq!(sig(0.99532702), "0.99532702");
        assert_eq!(sig(1.2744), "1.2744000");
        assert_eq!(sig(9.999999999), "10.000000");
        assert_eq!(sig(-2.5e-7), "-2.5000000e-7");
        assert_eq!(sig(5.84267e-5), "0.000058426700");
    }

    #[test]
    fn reference_parsing() {
        let rows =
            read_reference("# comment\nt,petri_net,bayesian_network,proposed\n100,0.1,0.2,0.3\n")
                .unwrap();
        assert_eq!(
            rows,
            vec![ReferenceRow {
                t: 100.0,
                petri_net: 0.1,
                bayesian_network: 0.2,
                proposed: 0.3
            }]
        );
        assert!(read_reference("t,petri_net\n1,2\n").is_err());
    }
}
