//! Monte Carlo simulation of temporal fault-tree semantics.
//!
//! Each basic event gets an exponential failure time; gates map child times
//! to an occurrence time or "never" (`+∞`):
//!
//! - AND: the last child time; OR: the first.
//! - PAND: the last child time if children occur in strictly increasing
//!   order, otherwise never.
//! - POR: the first child's time if it occurs strictly before every other
//!   child (children that never occur do not block it), otherwise never.
//!
//! Samples are split into fixed blocks. Each (leaf, block) pair draws from its
//! own ChaCha8 stream keyed by the seed and a hash of the leaf id, so results
//! do not depend on thread count and adding a leaf leaves other leaves' draws
//! untouched.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::MissionTime;
use crate::tree::{FaultTree, GateKind, Node, TreeSpec};

const BLOCK: u64 = 1 << 16;

/// Which component of a fuzzy leaf rate the simulation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Lower,
    #[default]
    Peak,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub samples: u64,
    pub seed: u64,
    pub t: MissionTime,
    pub component: Component,
}

impl SimulationConfig {
    pub fn new(samples: u64, seed: u64, t: MissionTime) -> Result<Self> {
        if samples == 0 {
            return Err(Error::Config("need at least one sample".into()));
        }
        Ok(SimulationConfig {
            samples,
            seed,
            t,
            component: Component::Peak,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationEstimate {
    pub probability: f64,
    /// `sqrt(p (1 − p) / n)` at the estimated `p`.
    pub std_error: f64,
    pub samples: u64,
    pub hits: u64,
}

impl SimulationEstimate {
    fn from_counts(hits: u64, samples: u64) -> Self {
        let p = hits as f64 / samples as f64;
        SimulationEstimate {
            probability: p,
            std_error: (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
            hits,
        }
    }

    /// Distance to `expected` in units of the binomial standard error under
    /// `expected`, which stays meaningful when no hits were observed.
    pub fn z_score(&self, expected: f64) -> f64 {
        let se = (expected * (1.0 - expected) / self.samples as f64).sqrt();
        let d = (self.probability - expected).abs();
        if se == 0.0 {
            if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d / se
        }
    }
}

/// 64-bit FNV-1a; stable across platforms and releases, unlike `DefaultHasher`.
fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

fn leaf_rng(seed: u64, leaf: &str, block: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&fnv1a(leaf.as_bytes()).to_le_bytes());
    key[16..24].copy_from_slice(&(leaf.len() as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(block);
    rng
}

enum Op {
    Leaf {
        slot: usize,
    },
    Gate {
        kind: GateKind,
        children: Vec<usize>,
    },
}

struct Plan {
    /// Node programme in post-order; children index earlier entries.
    ops: Vec<Op>,
    leaves: Vec<(String, f64)>,
}

fn plan(tree: &FaultTree, component: Component) -> Result<Plan> {
    let order = tree.post_order();
    let mut pos = vec![usize::MAX; tree.len()];
    let mut ops = Vec::with_capacity(order.len());
    let mut leaves = Vec::new();
    for id in order {
        pos[id.index()] = ops.len();
        match tree.node(id) {
            Node::Event(e) => {
                let r = match component {
                    Component::Lower => e.rate.lower(),
                    Component::Peak => e.rate.peak(),
                    Component::Upper => e.rate.upper(),
                };
                if !(r.is_finite() && r >= 0.0) {
                    return Err(Error::domain(format!("event `{}` has rate {r}", e.id)));
                }
                ops.push(Op::Leaf { slot: leaves.len() });
                leaves.push((e.id.clone(), r));
            }
            Node::Gate(g) => ops.push(Op::Gate {
                kind: g.kind,
                children: g.children.iter().map(|c| pos[c.index()]).collect(),
            }),
        }
    }
    Ok(Plan { ops, leaves })
}

fn gate_time(kind: GateKind, times: &[f64], children: &[usize]) -> f64 {
    let mut it = children.iter().map(|&c| times[c]);
    match kind {
        GateKind::And => it.fold(f64::NEG_INFINITY, f64::max),
        GateKind::Or => it.fold(f64::INFINITY, f64::min),
        GateKind::Pand => {
            let mut last = f64::NEG_INFINITY;
            for x in it {
                if x == f64::INFINITY || x <= last {
                    return f64::INFINITY;
                }
                last = x;
            }
            last
        }
        GateKind::Por => {
            let first = it.next().unwrap_or(f64::INFINITY);
            if first.is_finite() && it.all(|x| first < x) {
                first
            } else {
                f64::INFINITY
            }
        }
    }
}

fn run_block(plan: &Plan, seed: u64, t: f64, block: u64, n: usize) -> u64 {
    // Leaf times for the whole block, one stream per leaf.
    let draws: Vec<Vec<f64>> = plan
        .leaves
        .iter()
        .map(|(id, rate)| {
            let mut rng = leaf_rng(seed, id, block);
            if *rate == 0.0 {
                return vec![f64::INFINITY; n];
            }
            let exp = Exp::new(*rate).expect("positive finite rate");
            (0..n)
                .map(|_| {
                    let x: f64 = exp.sample(&mut rng);
                    if x <= t {
                        x
                    } else {
                        f64::INFINITY
                    }
                })
                .collect()
        })
        .collect();
    let mut times = vec![0.0; plan.ops.len()];
    let mut hits = 0;
    #[allow(clippy::needless_range_loop)] // `s` indexes every leaf's column
    for s in 0..n {
        for (i, op) in plan.ops.iter().enumerate() {
            times[i] = match op {
                Op::Leaf { slot } => draws[*slot][s],
                Op::Gate { kind, children } => gate_time(*kind, &times, children),
            };
        }
        if times[plan.ops.len() - 1].is_finite() {
            hits += 1;
        }
    }
    hits
}

/// Estimates the top-event probability by `config.t`.
///
/// ```
/// use fuzzy_tft::{mc::{simulate_tree, SimulationConfig}, tree::parse_tree, MissionTime};
/// let tree = parse_tree("event A rate=1e-3\ntop = A\n").unwrap();
/// let cfg = SimulationConfig::new(100_000, 7, MissionTime::new(1000.0).unwrap()).unwrap();
/// let est = simulate_tree(&tree, &cfg).unwrap();
/// assert!(est.z_score(1.0 - (-1.0f64).exp()) < 4.0);
/// ```
pub fn simulate_tree(tree: &FaultTree, config: &SimulationConfig) -> Result<SimulationEstimate> {
    if config.samples == 0 {
        return Err(Error::Config("need at least one sample".into()));
    }
    let plan = plan(tree, config.component)?;
    let t = config.t.hours();
    let blocks = config.samples.div_ceil(BLOCK);
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let n = (config.samples - b * BLOCK).min(BLOCK) as usize;
            run_block(&plan, config.seed, t, b, n)
        })
        .sum();
    Ok(SimulationEstimate::from_counts(hits, config.samples))
}

/// Simulates a single gate over leaves `E1..En` with the given crisp rates.
pub fn simulate_gate(
    kind: GateKind,
    rates: &[f64],
    config: &SimulationConfig,
) -> Result<SimulationEstimate> {
    let ids: Vec<String> = (1..=rates.len()).map(|i| format!("E{i}")).collect();
    let mut spec = TreeSpec::default();
    for (id, &r) in ids.iter().zip(rates) {
        spec = spec.fuzzy_event(id, crate::fuzzy::Tfn::crisp(r));
    }
    let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
    let tree = spec.gate("G", kind, &refs).top("G").build()?;
    simulate_tree(&tree, config)
}

/// A uniformly random `u64`, for callers that want a fresh seed.
pub fn random_seed() -> u64 {
    rand::rng().random()
}
