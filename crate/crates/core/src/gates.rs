//! Closed-form quantification of AND, OR, PAND and POR gates.
//!
//! Every temporal gate takes its inputs **in occurrence order**: the first
//! element is the event that must fail first (PAND) or the priority event
//! (POR). Inputs are exponential failure rates per hour; AND and OR take
//! failure probabilities.
//!
//! The PAND probability is the Heaviside expansion
//!
//! ```text
//! Pr = (Π λ_i) · Σ_k e^{x_k t} / Π_{j≠k} (x_k − x_j)
//! ```
//!
//! over the poles `x_0 = 0, x_m = −(λ_last + … )` accumulated from the
//! last-to-fail event backwards. The sum is the divided difference of
//! `x ↦ e^{x t}` at the poles, which is what [`PoleSequence::expansion`]
//! evaluates. It stays accurate when `λ t` is tiny and when poles coincide.
//! [`heaviside_sum`] keeps the term-by-term form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::Tfn;
use crate::quad;

/// Probabilities at or above `1 - SATURATION_EPS` cannot be converted back to a rate.
pub const SATURATION_EPS: f64 = 1e-12;

/// Number of signed exponential terms above which fuzzy POR bounds fall back to quadrature.
pub const POR_EXPANSION_LIMIT: usize = 1 << 16;

/// Mission time in hours.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct MissionTime(f64);

impl MissionTime {
    pub fn new(hours: f64) -> Result<Self> {
        if hours.is_finite() && hours >= 0.0 {
            Ok(MissionTime(hours))
        } else {
            Err(Error::domain(format!(
                "mission time must be finite and >= 0, got {hours}"
            )))
        }
    }

    pub fn hours(&self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for MissionTime {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        MissionTime::new(v)
    }
}

impl From<MissionTime> for f64 {
    fn from(t: MissionTime) -> f64 {
        t.0
    }
}

/// Poles of the PAND Laplace transform, `x_0 = 0` followed by the negated
/// partial sums of the rates taken from the last-to-fail event backwards.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleSequence {
    poles: Vec<f64>,
}

impl PoleSequence {
    /// Builds the poles for rates given in occurrence order (first to fail first).
    pub fn for_sequence(rates: &[f64]) -> Self {
        let mut poles = Vec::with_capacity(rates.len() + 1);
        poles.push(0.0);
        let mut acc = 0.0;
        for r in rates.iter().rev() {
            acc -= r;
            poles.push(acc);
        }
        PoleSequence { poles }
    }

    /// Wraps explicit poles.
    pub fn from_poles(poles: Vec<f64>) -> Result<Self> {
        if poles.is_empty() || poles.iter().any(|p| !p.is_finite()) {
            return Err(Error::domain("pole sequence must be non-empty and finite"));
        }
        Ok(PoleSequence { poles })
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    /// First pair of poles closer than `1e-12` relative to the largest pole.
    pub fn degenerate_pair(&self) -> Option<(usize, usize)> {
        let scale = self.poles.iter().fold(0.0f64, |m, p| m.max(p.abs()));
        let tol = 1e-12 * scale;
        for i in 0..self.poles.len() {
            for j in 0..i {
                if (self.poles[i] - self.poles[j]).abs() <= tol {
                    return Some((j, i));
                }
            }
        }
        None
    }

    /// `Σ_k e^{x_k t} / Π_{j≠k}(x_k − x_j)`, evaluated as the divided difference
    /// of the exponential. Coincident poles give the confluent limit.
    pub fn expansion(&self, t: MissionTime) -> Result<f64> {
        let t = t.hours();
        let (lo, hi) = self
            .poles
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &p| {
                (l.min(p), h.max(p))
            });
        if t * (hi - lo) <= 600.0 {
            Ok(exp_divided_difference(&self.poles, t))
        } else {
            heaviside_sum(self, MissionTime(t))
        }
    }
}

/// The Heaviside expansion summed term by term.
///
/// Loses relative accuracy when `|x_k| t` is small and fails outright on
/// coincident poles; [`PoleSequence::expansion`] has neither problem.
pub fn heaviside_sum(poles: &PoleSequence, t: MissionTime) -> Result<f64> {
    if let Some((i, j)) = poles.degenerate_pair() {
        return Err(Error::DegeneratePoles(i, j));
    }
    let x = &poles.poles;
    let t = t.hours();
    let mut sum = 0.0;
    for (k, &xk) in x.iter().enumerate() {
        let denom: f64 = x
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &xj)| xk - xj)
            .product();
        sum += (xk * t).exp() / denom;
    }
    Ok(sum)
}

/// Divided difference `f[x_0, …, x_n]` of `f(x) = e^{x t}`.
///
/// With `y_k = t x_k`, `f[x_0..x_n] = t^n g[y_0..y_n]` for `g = exp`, and
/// `g[y_0..y_n] = exp(Z)_{0,n}` for the upper bidiagonal `Z` with the `y_k` on
/// the diagonal and ones above it. After shifting the diagonal to be
/// non-negative every matrix involved is entrywise non-negative, so Taylor
/// summation and repeated squaring never cancel. Relative error grows with
/// the number of squarings, hence the generous Taylor radius.
fn exp_divided_difference(points: &[f64], t: f64) -> f64 {
    const RADIUS: f64 = 8.0;
    let m = points.len();
    if m == 1 {
        return (points[0] * t).exp();
    }
    if t == 0.0 {
        return 0.0;
    }
    let min = points.iter().cloned().fold(f64::INFINITY, f64::min);
    let diag: Vec<f64> = points.iter().map(|&x| t * (x - min)).collect();
    let norm = diag.iter().cloned().fold(0.0f64, f64::max) + 1.0;
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > RADIUS {
        scale *= 0.5;
        squarings += 1;
    }

    // Dense upper-triangular m x m matrices in row-major order.
    let mut a = vec![0.0; m * m];
    for i in 0..m {
        a[i * m + i] = diag[i] * scale;
        if i + 1 < m {
            a[i * m + i + 1] = scale;
        }
    }
    let mut result = identity(m);
    let mut term = identity(m);
    for k in 1..=120 {
        term = matmul_upper(&term, &a, m);
        let inv = 1.0 / k as f64;
        let mut largest = 0.0f64;
        for v in term.iter_mut() {
            *v *= inv;
            largest = largest.max(*v);
        }
        for (r, v) in result.iter_mut().zip(&term) {
            *r += v;
        }
        if largest < 1e-18 * result[m - 1] && k > m {
            break;
        }
    }
    for _ in 0..squarings {
        result = matmul_upper(&result, &result, m);
    }
    let n = (m - 1) as i32;
    let direct = result[m - 1] * t.powi(n) * (min * t).exp();
    if direct.is_finite() && direct > 0.0 {
        direct
    } else {
        (result[m - 1].ln() + n as f64 * t.ln() + min * t).exp()
    }
}

fn identity(m: usize) -> Vec<f64> {
    let mut id = vec![0.0; m * m];
    for i in 0..m {
        id[i * m + i] = 1.0;
    }
    id
}

fn matmul_upper(x: &[f64], y: &[f64], m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m * m];
    for i in 0..m {
        for k in i..m {
            let xik = x[i * m + k];
            if xik == 0.0 {
                continue;
            }
            for j in k..m {
                out[i * m + j] += xik * y[k * m + j];
            }
        }
    }
    out
}

fn check_prob(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(format!("probability {p} outside [0, 1]")))
    }
}

fn check_rates(rates: &[f64]) -> Result<()> {
    if rates.is_empty() {
        return Err(Error::domain("gate needs at least one input"));
    }
    for &r in rates {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::domain(format!("rate {r} must be finite and >= 0")));
        }
    }
    Ok(())
}

/// Probability that an exponential event with rate `rate` occurs by `t`.
pub fn exp_cdf(rate: f64, t: MissionTime) -> f64 {
    -(-rate * t.hours()).exp_m1()
}

/// `Π p_i`
pub fn crisp_and(probs: &[f64]) -> Result<f64> {
    probs
        .iter()
        .try_fold(1.0, |acc, &p| check_prob(p).map(|_| acc * p))
}

/// `1 − Π (1 − p_i)`
pub fn crisp_or(probs: &[f64]) -> Result<f64> {
    probs
        .iter()
        .try_fold(0.0, |acc, &p| check_prob(p).map(|_| or2(acc, p)))
}

/// `1 − (1 − a)(1 − b)` without the cancellation of forming it literally.
fn or2(a: f64, b: f64) -> f64 {
    a + b * (1.0 - a)
}

/// Probability that all events occur by `t` in the given order.
///
/// A zero rate means the event never occurs, so the gate cannot fire.
pub fn crisp_pand(rates: &[f64], t: MissionTime) -> Result<f64> {
    check_rates(rates)?;
    let coef: f64 = rates.iter().product();
    if coef == 0.0 || t.hours() == 0.0 {
        return Ok(0.0);
    }
    let p = coef * PoleSequence::for_sequence(rates).expansion(t)?;
    Ok(p.clamp(0.0, 1.0))
}

/// Probability that the first (priority) event occurs by `t` before any of the others.
pub fn crisp_por(rates: &[f64], t: MissionTime) -> Result<f64> {
    check_rates(rates)?;
    let total: f64 = rates.iter().sum();
    if rates[0] == 0.0 {
        return Ok(0.0);
    }
    Ok(rates[0] * exp_cdf(total, t) / total)
}

fn fuzzy_probs_check(probs: &[Tfn]) -> Result<()> {
    for p in probs {
        check_prob(p.lower())?;
        check_prob(p.upper())?;
    }
    Ok(())
}

/// Componentwise `Π p_i`.
pub fn fuzzy_and(probs: &[Tfn]) -> Result<Tfn> {
    fuzzy_probs_check(probs)?;
    probs.iter().try_fold(Tfn::ONE, |acc, p| acc.mul(p))
}

/// Componentwise `1 − Π (1 − p_i)`.
pub fn fuzzy_or(probs: &[Tfn]) -> Result<Tfn> {
    fuzzy_probs_check(probs)?;
    combine_raw(probs, true)
}

/// Componentwise AND/OR without range checks, for carrying raw
/// out-of-range POR bounds through a tree.
pub(crate) fn combine_raw(probs: &[Tfn], or: bool) -> Result<Tfn> {
    let mut acc = if or { [0.0f64; 3] } else { [1.0; 3] };
    for p in probs {
        for (a, x) in acc.iter_mut().zip(p.components()) {
            *a = if or { or2(*a, x) } else { *a * x };
        }
    }
    ordered(acc[0], acc[1], acc[2], if or { "OR" } else { "AND" })
}

fn pand_component(coef_rates: &[f64], pole_rates: &[f64], t: MissionTime) -> Result<f64> {
    let coef: f64 = coef_rates.iter().product();
    if coef == 0.0 || t.hours() == 0.0 {
        return Ok(0.0);
    }
    Ok(coef * PoleSequence::for_sequence(pole_rates).expansion(t)?)
}

fn split(rates: &[Tfn]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    (
        rates.iter().map(Tfn::lower).collect(),
        rates.iter().map(Tfn::peak).collect(),
        rates.iter().map(Tfn::upper).collect(),
    )
}

fn check_fuzzy_rates(rates: &[Tfn]) -> Result<()> {
    if rates.is_empty() {
        return Err(Error::domain("gate needs at least one input"));
    }
    for r in rates {
        if r.lower() < 0.0 {
            return Err(Error::domain(format!(
                "fuzzy rate {r} has a negative component"
            )));
        }
    }
    Ok(())
}

/// Builds the gate output, absorbing ordering violations at rounding level.
fn ordered(mut lower: f64, peak: f64, mut upper: f64, gate: &str) -> Result<Tfn> {
    let slack = 1e-13
        * lower
            .abs()
            .max(peak.abs())
            .max(upper.abs())
            .max(f64::MIN_POSITIVE);
    if lower > peak && lower - peak <= slack {
        lower = peak;
    }
    if upper < peak && peak - upper <= slack {
        upper = peak;
    }
    Tfn::new(lower, peak, upper).map_err(|e| match e {
        Error::Unordered { .. } => Error::Internal(format!(
            "{gate} produced unordered components ({lower}, {peak}, {upper})"
        )),
        other => other,
    })
}

/// Fuzzy PAND over fuzzy rates `(a_i, b_i, c_i)` in occurrence order.
///
/// Lower: `Π a_i` with poles from the `c_i`; peak: the crisp gate at `b_i`;
/// upper: `Π c_i` with poles from the `a_i`.
pub fn fuzzy_pand(rates: &[Tfn], t: MissionTime) -> Result<Tfn> {
    check_fuzzy_rates(rates)?;
    let (a, b, c) = split(rates);
    let lower = pand_component(&a, &c, t)?;
    let peak = pand_component(&b, &b, t)?;
    let upper = pand_component(&c, &a, t)?;
    ordered(lower, peak, upper, "fuzzy PAND")
}

/// One bound of the fuzzy POR: `∫_0^t k e^{-d x} Π_i (1 − r_i + r_i e^{-s_i x}) dx`.
///
/// `factors` holds `(r_i, s_i)`. The product is expanded into `2^n` signed
/// exponentials and integrated exactly unless that exceeds the expansion limit.
fn por_bound(k: f64, d: f64, factors: &[(f64, f64)], t: f64) -> f64 {
    if k == 0.0 || t == 0.0 {
        return 0.0;
    }
    if factors.len() >= usize::BITS as usize || (1usize << factors.len()) > POR_EXPANSION_LIMIT {
        let integrand = |x: f64| {
            k * (-d * x).exp()
                * factors
                    .iter()
                    .map(|&(r, s)| 1.0 - r + r * (-s * x).exp())
                    .product::<f64>()
        };
        return quad::integrate(integrand, 0.0, t, 1e-12);
    }
    let mut terms = vec![(k, d)];
    for &(r, s) in factors {
        let mut next = Vec::with_capacity(terms.len() * 2);
        for &(w, e) in &terms {
            if 1.0 - r != 0.0 {
                next.push((w * (1.0 - r), e));
            }
            if r != 0.0 {
                next.push((w * r, e + s));
            }
        }
        terms = next;
    }
    terms
        .iter()
        .map(|&(w, e)| {
            if e == 0.0 {
                w * t
            } else {
                w * -(-e * t).exp_m1() / e
            }
        })
        .sum()
}

/// `(r, s)` for the survival factor of a competitor whose fuzzy CDF bound is
/// `(num/den)(1 − e^{−den x})`, i.e. `1 − num/den + (num/den) e^{−den x}`.
fn survival_factor(num: f64, den: f64) -> Result<(f64, f64)> {
    if den == 0.0 {
        if num == 0.0 {
            // A competitor that never fails leaves the priority event unopposed.
            return Ok((0.0, 0.0));
        }
        return Err(Error::domain(
            "fuzzy POR competitor has a zero lower rate but non-zero upper rate",
        ));
    }
    Ok((num / den, den))
}

/// Fuzzy POR over fuzzy rates in order, the first being the priority event.
///
/// The peak is the crisp gate at the peak rates. The bounds integrate the
/// priority density bound against the competitors' survival bounds:
///
/// ```text
/// lower = ∫_0^t a_1 e^{-c_1 x} Π_{i>1} (1 − c_i/a_i + (c_i/a_i) e^{-a_i x}) dx
/// upper = ∫_0^t c_1 e^{-a_1 x} Π_{i>1} (1 − a_i/c_i + (a_i/c_i) e^{-c_i x}) dx
/// ```
///
/// The bounds are returned raw and may leave `[0, 1]`. The lower survival
/// factors turn negative once `a_i x > ln(c_i / (c_i − a_i))`; with two or more
/// competitors their product can then push the lower bound above the peak,
/// which is reported as a domain error. [`fuzzy_por_clamped`] avoids both.
pub fn fuzzy_por(rates: &[Tfn], t: MissionTime) -> Result<Tfn> {
    por_with(rates, t, false)
}

/// Fuzzy POR with each lower survival factor clamped at zero, so the lower
/// integral stops where the first factor vanishes.
///
/// The clamped lower bound lies in `[0, peak]` and is non-decreasing in `t`;
/// the upper bound is unchanged, since its factors never go negative.
pub fn fuzzy_por_clamped(rates: &[Tfn], t: MissionTime) -> Result<Tfn> {
    por_with(rates, t, true)
}

fn por_with(rates: &[Tfn], t: MissionTime, clamp: bool) -> Result<Tfn> {
    check_fuzzy_rates(rates)?;
    let (a, b, c) = split(rates);
    let peak = crisp_por(&b, t)?;
    let mut lower_factors = Vec::with_capacity(rates.len() - 1);
    let mut upper_factors = Vec::with_capacity(rates.len() - 1);
    for i in 1..rates.len() {
        lower_factors.push(survival_factor(c[i], a[i])?);
        upper_factors.push(survival_factor(a[i], c[i])?);
    }
    let th = t.hours();
    let lower_end = if clamp {
        // 1 − r + r e^{−s x} = 0 at x = ln(r / (r − 1)) / s when r > 1.
        lower_factors
            .iter()
            .filter(|&&(r, s)| r > 1.0 && s > 0.0)
            .map(|&(r, s)| (r / (r - 1.0)).ln() / s)
            .fold(th, f64::min)
    } else {
        th
    };
    let lower = por_bound(a[0], c[0], &lower_factors, lower_end);
    let upper = por_bound(c[0], a[0], &upper_factors, th);
    if !(lower.is_finite() && upper.is_finite()) {
        return Err(Error::NonFinite("fuzzy POR bound"));
    }
    let slack = 1e-13 * peak.abs().max(upper.abs()).max(f64::MIN_POSITIVE);
    if lower > peak + slack {
        return Err(Error::domain(format!(
            "fuzzy POR lower bound {lower} exceeds the peak {peak} because competitor survival bounds \
             went negative; enable clamping"
        )));
    }
    ordered(lower, peak, upper, "fuzzy POR")
}

/// `1 − e^{−λ t}` applied to a fuzzy rate.
pub fn rate_to_prob(rate: &Tfn, t: MissionTime) -> Result<Tfn> {
    if rate.lower() < 0.0 {
        return Err(Error::domain(format!(
            "fuzzy rate {rate} has a negative component"
        )));
    }
    rate.map_monotone(|r| exp_cdf(r, t))
}

/// `−ln(1 − P) / t` applied to a fuzzy probability.
///
/// Components at or above `1 − 1e-12` are an error unless `saturate` is set,
/// in which case they are pinned to `1 − 1e-12`. With `saturate` set,
/// components below zero are raised to zero as well.
pub fn prob_to_rate(prob: &Tfn, t: MissionTime, saturate: bool) -> Result<Tfn> {
    let th = t.hours();
    if th <= 0.0 {
        return Err(Error::domain("probability-to-rate conversion needs t > 0"));
    }
    let cap = 1.0 - SATURATION_EPS;
    let fix = |p: f64| -> Result<f64> {
        if p >= cap {
            if saturate {
                Ok(cap)
            } else {
                Err(Error::Saturation {
                    value: p,
                    node: None,
                })
            }
        } else if p < 0.0 {
            if saturate {
                Ok(0.0)
            } else {
                Err(Error::domain(format!(
                    "negative probability {p} cannot be converted to a rate"
                )))
            }
        } else {
            Ok(p)
        }
    };
    let p = Tfn::new(fix(prob.lower())?, fix(prob.peak())?, fix(prob.upper())?)?;
    p.map_monotone(|x| -(-x).ln_1p() / th)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mt(t: f64) -> MissionTime {
        MissionTime::new(t).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn expansion_two_poles_closed_form() {
        for &(lam, t) in &[(1e-3, 1000.0), (0.5, 3.0), (1e-7, 10.0)] {
            let poles = PoleSequence::for_sequence(&[lam]);
            let want = -(-lam * t).exp_m1() / lam;
            assert!(rel(poles.expansion(mt(t)).unwrap(), want) < 1e-13);
        }
    }

    #[test]
    fn expansion_at_zero_time() {
        let poles = PoleSequence::from_poles(vec![0.0, -1.0, -2.0]).unwrap();
        assert_eq!(poles.expansion(mt(0.0)).unwrap(), 0.0);
        assert!(heaviside_sum(&poles, mt(0.0)).unwrap().abs() < 1e-15);
    }

    #[test]
    fn expansion_agrees_with_direct_sum() {
        let poles = PoleSequence::for_sequence(&[0.3, 0.7, 1.9, 0.05]);
        for t in [0.5, 2.0, 10.0, 40.0] {
            let a = poles.expansion(mt(t)).unwrap();
            let b = heaviside_sum(&poles, mt(t)).unwrap();
            assert!(rel(a, b) < 1e-10, "t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn direct_sum_rejects_coincident_poles() {
        let poles = PoleSequence::from_poles(vec![0.0, -1.0, -1.0]).unwrap();
        assert_eq!(
            heaviside_sum(&poles, mt(1.0)),
            Err(Error::DegeneratePoles(1, 2))
        );
        // Confluent limit: f[0, -1, -1] for e^{xt} at t = 1 is 1 - 2/e.
        let v = poles.expansion(mt(1.0)).unwrap();
        assert!(rel(v, 1.0 - 2.0 / std::f64::consts::E) < 1e-13);
    }

    #[test]
    fn and_or_basics() {
        assert_eq!(crisp_and(&[0.5, 0.5]).unwrap(), 0.25);
        assert_eq!(crisp_or(&[0.5, 0.5]).unwrap(), 0.75);
        assert_eq!(crisp_or(&[0.3]).unwrap(), 0.3);
        assert!(crisp_and(&[1.5]).is_err());
        assert!(crisp_or(&[-0.1]).is_err());
    }

    #[test]
    fn pand_equal_rates_is_half_of_and() {
        for &(lam, t) in &[(1e-3, 1000.0), (2e-4, 50.0), (0.01, 5000.0)] {
            let p = crisp_pand(&[lam, lam], mt(t)).unwrap();
            let q = exp_cdf(lam, mt(t));
            assert!(rel(p, q * q / 2.0) < 1e-11, "{p} vs {}", q * q / 2.0);
        }
        assert_eq!(crisp_pand(&[1e-3, 2e-3], mt(0.0)).unwrap(), 0.0);
    }

    #[test]
    fn por_cases() {
        let (lam, t) = (1e-3, 700.0);
        let p = crisp_por(&[lam, lam], mt(t)).unwrap();
        assert!(rel(p, exp_cdf(2.0 * lam, mt(t)) / 2.0) < 1e-14);
        let lonely = crisp_por(&[lam, 1e-15], mt(t)).unwrap();
        assert!(rel(lonely, exp_cdf(lam, mt(t))) < 1e-9);
        let (a, b) = (3e-4, 8e-4);
        let sum = crisp_por(&[a, b], mt(t)).unwrap() + crisp_por(&[b, a], mt(t)).unwrap();
        let or = crisp_or(&[exp_cdf(a, mt(t)), exp_cdf(b, mt(t))]).unwrap();
        assert!(rel(sum, or) < 1e-14);
    }

    #[test]
    fn zero_rates_never_fire() {
        assert_eq!(crisp_pand(&[0.0, 1e-3], mt(100.0)).unwrap(), 0.0);
        assert_eq!(crisp_por(&[0.0, 1e-3], mt(100.0)).unwrap(), 0.0);
        let p = crisp_por(&[1e-3, 0.0], mt(100.0)).unwrap();
        assert!(rel(p, exp_cdf(1e-3, mt(100.0))) < 1e-14);
    }

    #[test]
    fn fuzzy_por_with_never_failing_competitor() {
        let x = Tfn::new(1e-3, 2e-3, 3e-3).unwrap();
        let p = fuzzy_por(&[x, Tfn::ZERO], mt(100.0)).unwrap();
        let lo = 1e-3 / 3e-3 * exp_cdf(3e-3, mt(100.0));
        assert!(rel(p.lower(), lo) < 1e-13);
    }

    #[test]
    fn fuzzy_and_or_identities() {
        let x = Tfn::new(0.1, 0.2, 0.35).unwrap();
        assert_eq!(fuzzy_or(&[Tfn::ZERO, x]).unwrap(), x);
        assert_eq!(fuzzy_and(&[Tfn::ONE, x]).unwrap(), x);
        assert!(fuzzy_and(&[Tfn::new(0.5, 0.9, 1.2).unwrap()]).is_err());
    }

    #[test]
    fn rate_probability_conversions() {
        assert_eq!(rate_to_prob(&Tfn::crisp(1e-3), mt(0.0)).unwrap(), Tfn::ZERO);
        let p = prob_to_rate(&Tfn::crisp(0.5), mt(1000.0), false).unwrap();
        assert!(rel(p.peak(), std::f64::consts::LN_2 / 1000.0) < 1e-15);
        assert_eq!(
            prob_to_rate(&Tfn::ZERO, mt(1000.0), false).unwrap(),
            Tfn::ZERO
        );
        assert!(matches!(
            prob_to_rate(&Tfn::ONE, mt(10.0), false),
            Err(Error::Saturation { .. })
        ));
        let sat = prob_to_rate(&Tfn::ONE, mt(10.0), true).unwrap();
        assert!(rel(sat.peak(), -(SATURATION_EPS.ln()) / 10.0) < 1e-6);
        assert!(prob_to_rate(&Tfn::crisp(0.2), mt(0.0), false).is_err());
    }

    #[test]
    fn pand_is_ordered_for_wide_spreads() {
        let r = [
            Tfn::new(1e-4, 5e-4, 9e-4).unwrap(),
            Tfn::new(2e-3, 3e-3, 6e-3).unwrap(),
            Tfn::new(1e-5, 4e-5, 5e-5).unwrap(),
        ];
        for t in [1.0, 100.0, 1e4, 1e6] {
            assert!(fuzzy_pand(&r, mt(t)).is_ok());
        }
    }
}
