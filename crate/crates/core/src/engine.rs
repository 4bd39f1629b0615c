//! Bottom-up quantification of a tree and the fuzzy importance measure.
//!
//! AND and OR combine probabilities. PAND and POR combine rates, so a gate
//! output feeding a temporal gate is turned back into a rate with
//! `−ln(1 − P)/t` first; basic events feed temporal gates with their own rates.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fuzzy::{Spread, Tfn};
use crate::gates::{
    combine_raw, crisp_and, crisp_or, crisp_pand, crisp_por, exp_cdf, fuzzy_pand, fuzzy_por,
    fuzzy_por_clamped, prob_to_rate, rate_to_prob, MissionTime, SATURATION_EPS,
};
use crate::tree::{Diagnostic, FaultTree, GateKind, Node, NodeId};

/// Absolute FIM difference below which two events share a rank.
pub const RANK_TIE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnalysisConfig {
    /// Time grid, strictly increasing.
    pub times: Vec<MissionTime>,
    /// Overrides the document spread for events without their own.
    pub spread: Option<Spread>,
    /// Clamp gate outputs to `[0, 1]` and saturate rate conversions near 1.
    pub clamp: bool,
    /// Compute the importance table.
    pub importance: bool,
    /// Mission time for the importance table; defaults to the document's
    /// `importance_time`, then to the last grid point.
    pub importance_time: Option<MissionTime>,
}

impl AnalysisConfig {
    pub fn at(times: &[f64]) -> Result<Self> {
        let times = times
            .iter()
            .map(|&t| MissionTime::new(t))
            .collect::<Result<_>>()?;
        Ok(AnalysisConfig {
            times,
            ..AnalysisConfig::default()
        })
    }

    /// Grid, spread and importance time taken from the document directives.
    pub fn from_tree(tree: &FaultTree) -> Self {
        AnalysisConfig {
            times: tree.directives.times.clone(),
            importance_time: tree.directives.importance_time,
            ..AnalysisConfig::default()
        }
    }

    pub fn with_importance(mut self, t: Option<MissionTime>) -> Self {
        self.importance = true;
        if t.is_some() {
            self.importance_time = t;
        }
        self
    }

    pub fn check(&self) -> Result<()> {
        if self.times.is_empty() {
            return Err(Error::Config("time grid is empty".into()));
        }
        if let Some(w) = self.times.windows(2).find(|w| w[1].hours() <= w[0].hours()) {
            return Err(Error::Config(format!(
                "time grid must be strictly increasing ({} then {})",
                w[0].hours(),
                w[1].hours()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimePoint {
    pub t: MissionTime,
    pub te: Tfn,
    /// Centroid of `te`.
    pub defuzzified: f64,
    pub peak: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Importance {
    pub event: String,
    pub fim: f64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<String>,
    pub clamp: bool,
    pub points: Vec<TimePoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub importance_time: Option<MissionTime>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub importance: Vec<Importance>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
}

/// A leaf override used by the importance measure: the event's probability
/// is pinned to `prob` at every time.
#[derive(Debug, Clone, Copy)]
struct Forcing {
    leaf: NodeId,
    prob: Tfn,
}

struct Evaluator<'a> {
    tree: &'a FaultTree,
    rates: Vec<Option<Tfn>>,
    clamp: bool,
}

impl<'a> Evaluator<'a> {
    fn new(tree: &'a FaultTree, config: &AnalysisConfig) -> Result<Self> {
        let mut rates = vec![None; tree.len()];
        for (id, e) in tree.events() {
            rates[id.index()] = Some(e.rate_with_spread(config.spread)?);
        }
        Ok(Evaluator {
            tree,
            rates,
            clamp: config.clamp,
        })
    }

    fn node_err(&self, id: NodeId, e: Error) -> Error {
        match e {
            Error::Saturation { value, node: None } => Error::Saturation {
                value,
                node: Some(self.tree.node(id).id().to_string()),
            },
            other => other,
        }
    }

    fn run(&self, t: MissionTime, forcing: Option<Forcing>) -> Result<Tfn> {
        let th = t.hours();
        // Forcing leaves need saturation on so a certain event still has a rate.
        let saturate = self.clamp || forcing.is_some();
        let mut probs: Vec<Option<Tfn>> = vec![None; self.tree.len()];
        let forced = |id: NodeId| forcing.filter(|f| f.leaf == id).map(|f| f.prob);
        for id in self.tree.post_order() {
            let p = match self.tree.node(id) {
                Node::Event(_) => match forced(id) {
                    Some(p) => p,
                    None => rate_to_prob(&self.rates[id.index()].expect("leaf rate"), t)?,
                },
                Node::Gate(g) => {
                    let out = if g.kind.is_temporal() {
                        let rates = g
                            .children
                            .iter()
                            .map(|&c| {
                                let leaf = matches!(self.tree.node(c), Node::Event(_))
                                    && forced(c).is_none();
                                if leaf {
                                    Ok(self.rates[c.index()].expect("leaf rate"))
                                } else if th == 0.0 {
                                    Ok(Tfn::ZERO)
                                } else {
                                    let p = probs[c.index()].expect("child before parent");
                                    prob_to_rate(&p, t, saturate).map_err(|e| self.node_err(c, e))
                                }
                            })
                            .collect::<Result<Vec<_>>>()?;
                        match g.kind {
                            GateKind::Pand => fuzzy_pand(&rates, t)?,
                            _ if self.clamp => fuzzy_por_clamped(&rates, t)?,
                            _ => fuzzy_por(&rates, t).map_err(|e| match e {
                                Error::Domain(m) => Error::Domain(format!("gate `{}`: {m}", g.id)),
                                other => other,
                            })?,
                        }
                    } else {
                        let inputs: Vec<Tfn> = g
                            .children
                            .iter()
                            .map(|c| probs[c.index()].expect("child before parent"))
                            .collect();
                        combine_raw(&inputs, g.kind == GateKind::Or).map_err(|e| {
                            let out_of_range = inputs.iter().any(|p| p.lower() < 0.0 || p.upper() > 1.0);
                            match e {
                                Error::Internal(_) if out_of_range => Error::Domain(format!(
                                    "{} gate `{}` received fuzzy bounds outside [0, 1]; enable clamping",
                                    g.kind, g.id
                                )),
                                other => other,
                            }
                        })?
                    };
                    if self.clamp {
                        out.clamp(0.0, 1.0)
                    } else {
                        out
                    }
                }
            };
            probs[id.index()] = Some(p);
        }
        Ok(probs[self.tree.top().index()].expect("top evaluated"))
    }
}

/// Fuzzy top-event probability at `t`.
///
/// ```
/// use fuzzy_tft::{engine::{evaluate, AnalysisConfig}, tree::parse_tree, MissionTime};
/// let tree = parse_tree("event A rate=1e-3\ntop = A\n").unwrap();
/// let t = MissionTime::new(1000.0).unwrap();
/// let p = evaluate(&tree, t, &AnalysisConfig::default()).unwrap();
/// assert!((p.peak() - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
/// ```
pub fn evaluate(tree: &FaultTree, t: MissionTime, config: &AnalysisConfig) -> Result<Tfn> {
    Evaluator::new(tree, config)?.run(t, None)
}

/// Top-event probability with every leaf at its peak rate, through the crisp
/// gate formulas. Equals the peak of [`evaluate`].
pub fn evaluate_crisp(tree: &FaultTree, t: MissionTime, config: &AnalysisConfig) -> Result<f64> {
    let ev = Evaluator::new(tree, config)?;
    let th = t.hours();
    let mut probs = vec![0.0; tree.len()];
    for id in tree.post_order() {
        probs[id.index()] = match tree.node(id) {
            Node::Event(_) => exp_cdf(ev.rates[id.index()].expect("leaf rate").peak(), t),
            Node::Gate(g) => {
                if g.kind.is_temporal() {
                    let rates = g
                        .children
                        .iter()
                        .map(|&c| match tree.node(c) {
                            Node::Event(_) => Ok(ev.rates[c.index()].expect("leaf rate").peak()),
                            Node::Gate(_) if th == 0.0 => Ok(0.0),
                            Node::Gate(_) => {
                                prob_to_rate(&Tfn::crisp(probs[c.index()]), t, config.clamp)
                                    .map(|r| r.peak())
                                    .map_err(|e| ev.node_err(c, e))
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    match g.kind {
                        GateKind::Pand => crisp_pand(&rates, t)?,
                        _ => crisp_por(&rates, t)?,
                    }
                } else {
                    let inputs: Vec<f64> = g.children.iter().map(|c| probs[c.index()]).collect();
                    match g.kind {
                        GateKind::And => crisp_and(&inputs)?,
                        _ => crisp_or(&inputs)?,
                    }
                }
            }
        };
    }
    Ok(probs[tree.top().index()])
}

fn point(t: MissionTime, te: Tfn) -> TimePoint {
    TimePoint {
        t,
        te,
        defuzzified: te.centroid(),
        peak: te.peak(),
    }
}

/// `FIM(E) = distance(TE | E certain, TE | E impossible)` at `t`.
///
/// Rate conversions saturate at `1 − 1e-12` during both evaluations, so an
/// event forced certain can still feed a temporal gate.
pub fn fuzzy_importance(
    tree: &FaultTree,
    event: &str,
    t: MissionTime,
    config: &AnalysisConfig,
) -> Result<f64> {
    let (leaf, _) = tree.event(event)?;
    let ev = Evaluator::new(tree, config)?;
    importance_with(&ev, leaf, t)
}

fn importance_with(ev: &Evaluator<'_>, leaf: NodeId, t: MissionTime) -> Result<f64> {
    let hi = ev.run(
        t,
        Some(Forcing {
            leaf,
            prob: Tfn::ONE,
        }),
    )?;
    let lo = ev.run(
        t,
        Some(Forcing {
            leaf,
            prob: Tfn::ZERO,
        }),
    )?;
    Ok(hi.distance(&lo))
}

/// Sorts by descending FIM and assigns dense ranks; events within
/// [`RANK_TIE_TOLERANCE`] of their group's leader share its rank. Equal
/// FIMs keep their input order.
///
/// ```
/// use fuzzy_tft::engine::rank_events;
/// let r = rank_events(&[("a".into(), 0.1), ("b".into(), 0.2), ("c".into(), 0.1)]);
/// let got: Vec<_> = r.iter().map(|i| (i.event.as_str(), i.rank)).collect();
/// assert_eq!(got, [("b", 1), ("a", 2), ("c", 2)]);
/// ```
pub fn rank_events(fims: &[(String, f64)]) -> Vec<Importance> {
    let mut sorted: Vec<&(String, f64)> = fims.iter().collect();
    sorted.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut out: Vec<Importance> = Vec::with_capacity(sorted.len());
    let mut leader = f64::NAN;
    let mut rank = 0;
    for (event, fim) in sorted {
        if rank == 0 || (leader - fim).abs() >= RANK_TIE_TOLERANCE {
            rank += 1;
            leader = *fim;
        }
        out.push(Importance {
            event: event.clone(),
            fim: *fim,
            rank,
        });
    }
    out
}

/// FIM of every basic event, ranked.
pub fn importance_table(
    tree: &FaultTree,
    t: MissionTime,
    config: &AnalysisConfig,
) -> Result<Vec<Importance>> {
    let ev = Evaluator::new(tree, config)?;
    let leaves: Vec<(NodeId, &str)> = tree.events().map(|(id, e)| (id, e.id.as_str())).collect();
    let fims = leaves
        .par_iter()
        .map(|&(leaf, name)| Ok((name.to_string(), importance_with(&ev, leaf, t)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(rank_events(&fims))
}

/// Evaluates every grid point, plus the importance table when requested.
pub fn sweep(tree: &FaultTree, config: &AnalysisConfig) -> Result<AnalysisReport> {
    config.check()?;
    let ev = Evaluator::new(tree, config)?;
    let points = config
        .times
        .par_iter()
        .map(|&t| ev.run(t, None).map(|te| point(t, te)))
        .collect::<Result<Vec<_>>>()?;
    let (importance_time, importance) = if config.importance {
        let t = config
            .importance_time
            .or(tree.directives.importance_time)
            .unwrap_or(*config.times.last().expect("checked non-empty"));
        (Some(t), importance_table(tree, t, config)?)
    } else {
        (None, Vec::new())
    };
    Ok(AnalysisReport {
        tree: tree
            .name()
            .map(str::to_string)
            .or_else(|| tree.source.clone()),
        clamp: config.clamp,
        points,
        importance_time,
        importance,
        diagnostics: tree.warnings().to_vec(),
    })
}

/// The rate a probability saturated at `1 − 1e-12` converts to at `t`.
pub fn saturated_rate(t: MissionTime) -> f64 {
    -(SATURATION_EPS.ln()) / t.hours()
}
