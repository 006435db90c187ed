//! Closed-form stationary weights and the lower-boundary trace.
//!
//! Moving counterclockwise from the corner A (user 1 all private, user 2 all
//! public), the lower part of the constituent region is assembled from
//!
//! 1. the corner A itself, optimal for `mu <= mu2(P1, 0)`;
//! 2. a stationary segment with `P1hat = P1` where user 2 alone moves power
//!    into its private layer, `mu2(P1, P2hat) = mu`;
//! 3. a coupled segment from D3 (`mu1 = mu2` with `P1hat = P1`) to S where
//!    both users move, `mu1 = mu2 = mu`, ending at `(T1, T2)` for `mu = 1`;
//! 4. the sum-rate front at S.
//!
//! The upper part is the same construction on the user-swapped channel.

use rayon::prelude::*;
use serde::Serialize;

use crate::bisect::{bisect, MAX_ITER};
use crate::channel::{private_rate_user1, private_rate_user2, ChannelParams, PowerSplit};
use crate::error::{GicError, RegimeKind, RegimeReport, Result};
use crate::mac::{
    at_least, classify, corner_rates, intersection_polygon, public_pair_from_corners, sum_rate_front,
    BindingReceiver, CaseId,
};

const ROOT_TOL: f64 = 1e-12;
const COUPLED_TOL: f64 = 1e-10;

/// User 1's stationary weight. `+inf` at the pole `p2hat = 0`.
pub fn mu1_closed(params: &ChannelParams, p1hat: f64, p2hat: f64) -> f64 {
    if p2hat <= 0.0 {
        return f64::INFINITY;
    }
    let (a, b) = (params.a(), params.b());
    (b * p1hat + 1.0) * (p2hat - b - a * b * p2hat + 1.0) / (b * p2hat * (p1hat + a * p2hat + 1.0))
}

/// User 2's stationary weight, the mirror of [`mu1_closed`]. `+inf` at `p1hat = 0`.
pub fn mu2_closed(params: &ChannelParams, p1hat: f64, p2hat: f64) -> f64 {
    if p1hat <= 0.0 {
        return f64::INFINITY;
    }
    let (a, b) = (params.a(), params.b());
    (a * p2hat + 1.0) * (p1hat - a - a * b * p1hat + 1.0) / (a * p1hat * (p2hat + b * p1hat + 1.0))
}

/// First-order rate changes (nats per unit power) when a thin slice of user 1's
/// power moves between its public and private layers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaStepGains {
    pub private_r1_gain: f64,
    /// Negative: the extra private power hurts user 2 at receiver 2.
    pub private_r2_loss: f64,
    pub public_r1_gain: f64,
}

pub fn delta_step_gains(params: &ChannelParams, p1hat: f64, p2hat: f64) -> DeltaStepGains {
    let (a, b) = (params.a(), params.b());
    DeltaStepGains {
        private_r1_gain: 1.0 / (p1hat + a * p2hat + 1.0),
        private_r2_loss: b * (1.0 / (b * p1hat + p2hat + 1.0) - 1.0 / (b * p1hat + 1.0)),
        public_r1_gain: b / (b * p1hat + p2hat + 1.0),
    }
}

fn regime_error(params: &ChannelParams, kind: RegimeKind, detail: &str) -> GicError {
    GicError::Regime(regime_report(params, kind, detail))
}

fn regime_report(params: &ChannelParams, kind: RegimeKind, detail: &str) -> RegimeReport {
    RegimeReport {
        kind,
        detail: detail.into(),
        p1: params.p1(),
        p2: params.p2(),
        t1: params.t1(),
        t2: params.t2(),
    }
}

/// `P2hat` with `mu2(P1, P2hat) = mu`, user 1 fully private.
pub fn solve_stationary_p2hat(params: &ChannelParams, mu: f64) -> Result<f64> {
    let p1 = params.p1();
    if !(p1 > params.t1()) {
        return Err(regime_error(params, RegimeKind::BelowT1, "stationary segment needs p1 > t1"));
    }
    let lo = mu2_closed(params, p1, 0.0);
    let hi = mu2_closed(params, p1, params.p2());
    if !(mu >= lo - ROOT_TOL && mu <= hi + ROOT_TOL) {
        return Err(GicError::OutOfRange { name: "mu", value: mu, lo, hi });
    }
    if mu <= lo {
        return Ok(0.0);
    }
    if mu >= hi {
        return Ok(params.p2());
    }
    let (x, res, it) = bisect(|y| mu2_closed(params, p1, y) - mu, 0.0, params.p2(), ROOT_TOL)
        .ok_or(GicError::OutOfRange { name: "mu", value: mu, lo, hi })?;
    if res > ROOT_TOL {
        return Err(GicError::NonConvergence { context: "stationary user-2 split", iterations: it, residual: res });
    }
    Ok(x)
}

/// `mu1(P1, x) - mu2(P1, x)` changes sign on `(T2, P2]`.
fn find_d3(params: &ChannelParams) -> Result<Option<f64>> {
    let p1 = params.p1();
    let gap = |x: f64| mu1_closed(params, p1, x) - mu2_closed(params, p1, x);
    if gap(params.p2()) > 0.0 {
        return Ok(None);
    }
    match bisect(gap, params.t2(), params.p2(), ROOT_TOL) {
        None => Ok(None),
        Some((_, res, it)) if res > ROOT_TOL => {
            Err(GicError::NonConvergence { context: "mu1 = mu2 crossing", iterations: it, residual: res })
        }
        Some((x, _, _)) => Ok(Some(x)),
    }
}

fn require_tangent_structure(params: &ChannelParams) -> Result<()> {
    if !(params.p1() > params.t1()) {
        return Err(regime_error(params, RegimeKind::BelowT1, "needs p1 > t1"));
    }
    if !(params.p2() > params.t2()) {
        return Err(regime_error(params, RegimeKind::BelowT2, "needs p2 > t2"));
    }
    if sum_rate_front(params)?.binding_receiver == BindingReceiver::Y2 {
        return Err(regime_error(
            params,
            RegimeKind::ReceiverTwoBinding,
            "needs p1 (1 - b) <= p2 (1 - a)",
        ));
    }
    Ok(())
}

/// `T2breve`: the private power of user 2 at which `mu1 = mu2` with user 1
/// fully private.
pub fn point_d3(params: &ChannelParams) -> Result<f64> {
    require_tangent_structure(params)?;
    find_d3(params)?.ok_or_else(|| {
        regime_error(params, RegimeKind::NoCrossing, "mu1 = mu2 has no root in (t2, p2]")
    })
}

/// Private powers with `mu1 = mu2 = mu` on the D3 -> S path.
pub fn solve_coupled(params: &ChannelParams, mu: f64) -> Result<(f64, f64)> {
    let d3 = point_d3(params)?;
    let mu_d3 = mu1_closed(params, params.p1(), d3);
    coupled_from(params, mu, d3, mu_d3)
}

fn coupled_from(params: &ChannelParams, mu: f64, d3: f64, mu_d3: f64) -> Result<(f64, f64)> {
    let (p1, p2, t1, t2) = (params.p1(), params.p2(), params.t1(), params.t2());
    if !(mu >= mu_d3 - ROOT_TOL && mu <= 1.0 + ROOT_TOL) {
        return Err(GicError::OutOfRange { name: "mu", value: mu, lo: mu_d3, hi: 1.0 });
    }
    if mu >= 1.0 {
        return Ok((t1, t2));
    }
    if mu <= mu_d3 {
        return Ok((p1, d3));
    }
    // y(x): mu1(x, y) = mu, mu1 decreasing in y and equal to 1 at y = T2.
    let inner = |x: f64| -> f64 {
        if mu1_closed(params, x, p2) >= mu {
            return p2;
        }
        bisect(|y| mu1_closed(params, x, y) - mu, t2, p2, 1e-15).map_or(p2, |r| r.0)
    };
    let outer = |x: f64| mu2_closed(params, x, inner(x)) - mu;
    let x = if outer(p1) >= 0.0 {
        p1
    } else {
        bisect(outer, t1, p1, 1e-14).map(|r| r.0).ok_or(GicError::NonConvergence {
            context: "coupled segment",
            iterations: MAX_ITER,
            residual: f64::NAN,
        })?
    };
    let y = inner(x);
    let residual = (mu1_closed(params, x, y) - mu).abs().max((mu2_closed(params, x, y) - mu).abs());
    if !(residual <= COUPLED_TOL) {
        return Err(GicError::NonConvergence { context: "coupled segment", iterations: MAX_ITER, residual });
    }
    Ok((x, y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    CornerA,
    StationaryUser2,
    Coupled,
    SumRateFront,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::CornerA => "CornerA",
            Regime::StationaryUser2 => "StationaryUser2",
            Regime::Coupled => "Coupled",
            Regime::SumRateFront => "SumRateFront",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub mu: f64,
    pub rho: f64,
    pub theta: f64,
    pub p1hat: f64,
    pub p2hat: f64,
    pub r1: f64,
    pub r2: f64,
    pub regime: Regime,
    pub mac_case: CaseId,
}

impl BoundaryPoint {
    pub fn split(&self) -> PowerSplit {
        PowerSplit::new(self.rho, self.theta).expect("traced split lies in [0, 1]^2")
    }

    pub fn weighted(&self, mu: f64) -> f64 {
        self.r1 + mu * self.r2
    }
}

/// Rates at a split: Remark-1 public pair plus both private layers.
fn assemble(params: &ChannelParams, split: PowerSplit, mu: f64, regime: Regime) -> BoundaryPoint {
    let (h1, h2) = params.private_powers(split);
    let corners = corner_rates(params, split);
    let pair = public_pair_from_corners(&corners);
    BoundaryPoint {
        mu,
        rho: split.rho(),
        theta: split.theta(),
        p1hat: h1,
        p2hat: h2,
        r1: pair.r_u1 + private_rate_user1(params, h1, h2),
        r2: pair.r_u2 + private_rate_user2(params, h1, h2),
        regime,
        mac_case: classify(&corners).case_id,
    }
}

fn assemble_private(params: &ChannelParams, p1hat: f64, p2hat: f64, mu: f64, regime: Regime) -> Result<BoundaryPoint> {
    Ok(assemble(params, params.split_from_private(p1hat, p2hat)?, mu, regime))
}

/// Corner maximizing R1: user 1 fully private, user 2 fully public.
pub fn point_a(params: &ChannelParams) -> BoundaryPoint {
    let split = PowerSplit::new(0.0, 1.0).expect("corner split");
    let mu = mu2_closed(params, params.p1(), 0.0);
    assemble(params, split, mu, Regime::CornerA)
}

/// Named waypoints of the lower trace. D1 (`P2hat = T2`) and D2 (`mu1 = 1`)
/// coincide because `mu1(., T2) = 1` identically.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeyPoints {
    pub point_a: BoundaryPoint,
    pub mu_at_a: f64,
    pub d1: BoundaryPoint,
    pub d2: BoundaryPoint,
    pub d2_p2hat: f64,
    pub d3: BoundaryPoint,
    pub d3_p2hat: f64,
    pub mu_at_d3: f64,
    pub s: BoundaryPoint,
    pub s_split: PowerSplit,
}

pub fn key_points(params: &ChannelParams) -> Result<KeyPoints> {
    let d3_p2hat = point_d3(params)?;
    let (p1, t1, t2) = (params.p1(), params.t1(), params.t2());
    let point_a = point_a(params);
    let d1 = assemble_private(params, p1, t2, mu2_closed(params, p1, t2), Regime::StationaryUser2)?;
    let mu_at_d3 = mu1_closed(params, p1, d3_p2hat);
    let d3 = assemble_private(params, p1, d3_p2hat, mu_at_d3, Regime::StationaryUser2)?;
    let s_split = sum_rate_front(params)?.split();
    let mut s = assemble(params, s_split, 1.0, Regime::Coupled);
    (s.p1hat, s.p2hat) = (t1, t2);
    Ok(KeyPoints {
        mu_at_a: point_a.mu,
        point_a,
        d1,
        d2: d1,
        d2_p2hat: t2,
        d3,
        d3_p2hat,
        mu_at_d3,
        s,
        s_split,
    })
}

/// How a trace ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStatus {
    /// A through S and along the front.
    Complete,
    /// `P1 = T1`: the whole lower part lies on the sum-rate front.
    FrontOnly,
    /// No `mu1 = mu2` crossing; the stationary segment runs to `P2hat = P2`.
    EarlyClip,
    /// The sum rate reached the front before `mu = 1`.
    Clipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    pub params: ChannelParams,
    pub status: TraceStatus,
    pub report: Option<RegimeReport>,
    pub points: Vec<BoundaryPoint>,
    /// Index of the last point of the trace proper.
    pub terminal: usize,
}

/// Traces the lower part (`mu <= 1`) of the boundary with about `num_points`
/// points.
pub fn trace_lower_boundary(params: &ChannelParams, num_points: usize) -> Result<Trace> {
    if num_points < 2 {
        return Err(GicError::Validation {
            name: "num_points",
            value: num_points as f64,
            reason: "must be at least 2",
        });
    }
    let (p1, p2, t1, t2) = (params.p1(), params.p2(), params.t1(), params.t2());
    if !at_least(p1, t1) {
        return Err(regime_error(params, RegimeKind::BelowT1, "p1 < t1: user 1 carries no public layer"));
    }
    if !(p2 > t2) {
        return Err(regime_error(params, RegimeKind::BelowT2, "p2 <= t2: user 2 never reaches mu1 <= 1"));
    }
    if !(p1 > t1) {
        return front_only(params, num_points);
    }

    let front = sum_rate_front(params)?;
    let point_a = point_a(params);
    if front.binding_receiver == BindingReceiver::Y2 {
        // The corner already sits on the receiver-2 front.
        let clip_at = |pts: Vec<BoundaryPoint>| -> Option<Trace> {
            let k = pts.iter().position(|q| q.r1 + q.r2 >= front.r_sum - 1e-12)?;
            Some(Trace {
                params: *params,
                status: TraceStatus::Clipped,
                report: Some(regime_report(
                    params,
                    RegimeKind::ReceiverTwoBinding,
                    "sum rate reached the front before mu = 1",
                )),
                points: pts[..=k].to_vec(),
                terminal: k,
            })
        };
        if let Some(t) = clip_at(vec![point_a]) {
            return Ok(t);
        }
    }

    let d3 = match find_d3(params)? {
        Some(x) => x,
        None => return early_clip(params, point_a, num_points),
    };
    let mu_a = point_a.mu;
    let mu_d3 = mu1_closed(params, p1, d3);

    let s_split = front.split();
    let s_point = {
        let mut s = assemble(params, s_split, 1.0, Regime::Coupled);
        (s.p1hat, s.p2hat) = (t1, t2);
        s
    };
    if num_points == 2 {
        return Ok(Trace {
            params: *params,
            status: TraceStatus::Complete,
            report: None,
            points: vec![point_a, s_point],
            terminal: 1,
        });
    }

    let front_pts = front_sweep(params, s_split, num_points);
    let body = num_points.saturating_sub(1 + front_pts.len()).max(2);
    let span = (1.0 - mu_a).max(f64::MIN_POSITIVE);
    let n_stat = ((body as f64) * (mu_d3 - mu_a) / span).round() as usize;
    let n_stat = n_stat.clamp(1, body - 1);
    let n_coup = body - n_stat;

    let mut points = Vec::with_capacity(num_points);
    points.push(point_a);
    let stationary: Vec<Result<BoundaryPoint>> = (1..=n_stat)
        .into_par_iter()
        .map(|k| {
            if k == n_stat {
                return assemble_private(params, p1, d3, mu_d3, Regime::StationaryUser2);
            }
            let mu = mu_a + (mu_d3 - mu_a) * k as f64 / n_stat as f64;
            let y = solve_stationary_p2hat(params, mu)?;
            assemble_private(params, p1, y, mu, Regime::StationaryUser2)
        })
        .collect();
    for p in stationary {
        points.push(p?);
    }
    let coupled: Vec<Result<BoundaryPoint>> = (1..=n_coup)
        .into_par_iter()
        .map(|k| {
            if k == n_coup {
                return Ok(s_point);
            }
            let f = 1.0 - k as f64 / n_coup as f64;
            let mu = 1.0 - (1.0 - mu_d3) * f * f;
            let (x, y) = coupled_from(params, mu, d3, mu_d3)?;
            assemble_private(params, x, y, mu, Regime::Coupled)
        })
        .collect();
    for p in coupled {
        points.push(p?);
    }
    let terminal = points.len() - 1;
    points.extend(front_pts);
    Ok(Trace { params: *params, status: TraceStatus::Complete, report: None, points, terminal })
}

/// Points on the max-sum face of the public polygon at S, moving from the
/// Remark-1 vertex toward smaller `r_u1`. Empty when that face is one vertex.
fn front_sweep(params: &ChannelParams, s_split: PowerSplit, num_points: usize) -> Vec<BoundaryPoint> {
    let corners = corner_rates(params, s_split);
    let pair = public_pair_from_corners(&corners);
    let poly = intersection_polygon(&corners);
    let best = poly.iter().map(|v| v.0 + v.1).fold(f64::NEG_INFINITY, f64::max);
    if pair.r_u1 + pair.r_u2 < best - 1e-12 {
        return Vec::new();
    }
    let far = poly
        .iter()
        .filter(|v| v.0 + v.1 >= best - 1e-12)
        .copied()
        .fold((f64::INFINITY, 0.0), |acc: (f64, f64), v| if v.0 < acc.0 { v } else { acc });
    if pair.r_u1 - far.0 <= 1e-12 {
        return Vec::new();
    }
    let n = (num_points / 10).max(2);
    let (h1, h2) = params.private_powers(s_split);
    let (v1, v2) = (private_rate_user1(params, h1, h2), private_rate_user2(params, h1, h2));
    let case = classify(&corners).case_id;
    (1..=n)
        .map(|k| {
            let t = k as f64 / n as f64;
            let x = pair.r_u1 + t * (far.0 - pair.r_u1);
            let y = pair.r_u2 + t * (far.1 - pair.r_u2);
            BoundaryPoint {
                mu: 1.0,
                rho: s_split.rho(),
                theta: s_split.theta(),
                p1hat: h1,
                p2hat: h2,
                r1: x + v1,
                r2: y + v2,
                regime: Regime::SumRateFront,
                mac_case: case,
            }
        })
        .collect()
}

/// `P1 = T1`: user 1 stays fully private and user 2 slides from fully
/// public down to `theta_S`, all on the sum-rate front.
fn front_only(params: &ChannelParams, num_points: usize) -> Result<Trace> {
    let theta_s = sum_rate_front(params)?.theta_s;
    let points = (0..num_points)
        .map(|k| {
            let theta = 1.0 - (1.0 - theta_s) * k as f64 / (num_points - 1) as f64;
            let split = PowerSplit::new(0.0, theta)?;
            Ok(assemble(params, split, 1.0, Regime::SumRateFront))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trace {
        params: *params,
        status: TraceStatus::FrontOnly,
        report: None,
        terminal: points.len() - 1,
        points,
    })
}

fn early_clip(params: &ChannelParams, point_a: BoundaryPoint, num_points: usize) -> Result<Trace> {
    let p1 = params.p1();
    let mu_a = point_a.mu;
    let mu_end = mu2_closed(params, p1, params.p2());
    let n = num_points - 1;
    let mut points = vec![point_a];
    for k in 1..=n {
        let (mu, y) = if k == n {
            (mu_end, params.p2())
        } else {
            let mu = mu_a + (mu_end - mu_a) * k as f64 / n as f64;
            (mu, solve_stationary_p2hat(params, mu)?)
        };
        points.push(assemble_private(params, p1, y, mu, Regime::StationaryUser2)?);
    }
    Ok(Trace {
        params: *params,
        status: TraceStatus::EarlyClip,
        report: Some(regime_report(params, RegimeKind::NoCrossing, "mu1 = mu2 has no root in (t2, p2]")),
        terminal: points.len() - 1,
        points,
    })
}

/// Upper part (`mu >= 1`) via the lower trace of the swapped channel.
pub fn trace_upper_boundary(params: &ChannelParams, num_points: usize) -> Result<Trace> {
    let swapped = params.swapped();
    let lower = trace_lower_boundary(&swapped, num_points)?;
    let points = lower
        .points
        .iter()
        .map(|q| {
            let split = PowerSplit::new(q.theta, q.rho).expect("mirrored split");
            BoundaryPoint {
                mu: 1.0 / q.mu,
                rho: q.theta,
                theta: q.rho,
                p1hat: q.p2hat,
                p2hat: q.p1hat,
                r1: q.r2,
                r2: q.r1,
                regime: q.regime,
                mac_case: classify(&corner_rates(params, split)).case_id,
            }
        })
        .collect();
    Ok(Trace { params: *params, status: lower.status, report: lower.report, points, terminal: lower.terminal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e2() -> ChannelParams {
        ChannelParams::new(0.2, 0.4, 30.0, 40.0).unwrap()
    }

    fn random_params(rng: &mut ChaCha8Rng) -> ChannelParams {
        ChannelParams::new(
            rng.random_range(0.02..0.98),
            rng.random_range(0.02..0.98),
            10f64.powf(rng.random_range(-1.0..3.0)),
            10f64.powf(rng.random_range(-1.0..3.0)),
        )
        .unwrap()
    }

    #[test]
    fn mu1_examples() {
        let p = e2();
        assert!((mu1_closed(&p, 10.0, 7.5) - 1.0).abs() < 1e-14);
        assert!((mu1_closed(&p, 30.0, 10.0) - 13.0 * 9.8 / 132.0).abs() < 1e-14);
        for x in [0.0, 3.0, 30.0, 1e4] {
            assert!((mu1_closed(&p, x, p.t2()) - 1.0).abs() < 1e-12);
        }
        assert_eq!(mu1_closed(&p, 3.0, 0.0), f64::INFINITY);
    }

    #[test]
    fn mu2_examples() {
        let p = e2();
        assert!((mu2_closed(&p, 10.0, 7.5) - 1.0).abs() < 1e-14);
        assert!((mu2_closed(&p, 30.0, 0.0) - 28.4 / 78.0).abs() < 1e-14);
        for y in [0.0, 3.0, 40.0, 1e4] {
            assert!((mu2_closed(&p, p.t1(), y) - 1.0).abs() < 1e-12);
        }
        assert_eq!(mu2_closed(&p, 0.0, 3.0), f64::INFINITY);
    }

    #[test]
    fn mu_identities_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..1_000 {
            let p = random_params(&mut rng);
            assert!((mu1_closed(&p, p.t1(), p.t2()) - 1.0).abs() < 1e-12);
            assert!((mu2_closed(&p, p.t1(), p.t2()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_gain_examples() {
        let g = delta_step_gains(&e2(), 30.0, 10.0);
        assert!((g.private_r1_gain - 1.0 / 33.0).abs() < 1e-15);
        assert!((g.public_r1_gain - 0.4 / 23.0).abs() < 1e-15);
        assert!((g.private_r2_loss - 0.4 * (1.0 / 23.0 - 1.0 / 13.0)).abs() < 1e-15);
        let g0 = delta_step_gains(&e2(), 30.0, 0.0);
        assert_eq!(g0.private_r2_loss, 0.0);
    }

    #[test]
    fn stationarity_identity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..10_000 {
            let p = random_params(&mut rng);
            let x = rng.random_range(0.0..p.p1());
            let y = rng.random_range(1e-3..p.p2().max(2e-3));
            let g = delta_step_gains(&p, x, y);
            let m = mu1_closed(&p, x, y);
            let lhs = g.private_r1_gain + m * g.private_r2_loss - g.public_r1_gain;
            assert!(lhs.abs() < 1e-12, "{p:?} {x} {y} {lhs}");
        }
    }

    #[test]
    fn monotonicity_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10_000 {
            let p = random_params(&mut rng);
            let x = rng.random_range(0.01..100.0);
            let y = rng.random_range(0.01..100.0);
            let d = 1e-3 * (1.0 + y);
            assert!(mu1_closed(&p, x, y + d) < mu1_closed(&p, x, y));
            assert!(mu2_closed(&p, x + d, y) < mu2_closed(&p, x, y));
            let y_hi = p.t2() + y;
            let dx = 1e-3 * (1.0 + x);
            assert!(mu1_closed(&p, x + dx, y_hi) > mu1_closed(&p, x, y_hi));
            let x_hi = p.t1() + x;
            assert!(mu2_closed(&p, x_hi, y + d) > mu2_closed(&p, x_hi, y));
        }
    }

    #[test]
    fn stationary_solver() {
        let p = e2();
        let y = solve_stationary_p2hat(&p, 0.5).unwrap();
        assert!((mu2_closed(&p, 30.0, y) - 0.5).abs() <= 1e-12);
        assert_eq!(solve_stationary_p2hat(&p, mu2_closed(&p, 30.0, 0.0)).unwrap(), 0.0);
        let mut prev = 0.0;
        for k in 1..50 {
            let mu = 0.37 + 0.4 * k as f64 / 50.0;
            let y = solve_stationary_p2hat(&p, mu).unwrap();
            assert!(y > prev);
            prev = y;
        }
        match solve_stationary_p2hat(&p, 0.1) {
            Err(GicError::OutOfRange { lo, .. }) => assert!((lo - 28.4 / 78.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn d3_e2() {
        let p = e2();
        let d3 = point_d3(&p).unwrap();
        assert!(d3 > p.t2() && d3 <= p.p2());
        assert!((mu1_closed(&p, 30.0, d3) - mu2_closed(&p, 30.0, d3)).abs() <= 1e-12);
        assert!((d3 - 36.6259).abs() < 1e-3);
    }

    #[test]
    fn d3_symmetric() {
        let p = ChannelParams::new(0.25, 0.25, 20.0, 20.0).unwrap();
        let d3 = point_d3(&p).unwrap();
        assert!(d3 > p.t2());
        assert!((mu1_closed(&p, 20.0, d3) - mu2_closed(&p, 20.0, d3)).abs() <= 1e-12);
    }

    #[test]
    fn d3_rejects_small_p2() {
        let p = ChannelParams::new(0.2, 0.4, 30.0, 5.0).unwrap();
        assert!(matches!(point_d3(&p), Err(GicError::Regime(RegimeReport { kind: RegimeKind::BelowT2, .. }))));
    }

    #[test]
    fn coupled_endpoints_and_path() {
        let p = e2();
        let d3 = point_d3(&p).unwrap();
        let mu_d3 = mu1_closed(&p, 30.0, d3);
        assert_eq!(solve_coupled(&p, 1.0).unwrap(), (p.t1(), p.t2()));
        assert_eq!(solve_coupled(&p, mu_d3).unwrap(), (30.0, d3));
        let mut prev = (f64::INFINITY, f64::INFINITY);
        for k in 1..40 {
            let mu = mu_d3 + (1.0 - mu_d3) * k as f64 / 40.0;
            let (x, y) = solve_coupled(&p, mu).unwrap();
            assert!((mu1_closed(&p, x, y) - mu).abs() <= 1e-10);
            assert!((mu2_closed(&p, x, y) - mu).abs() <= 1e-10);
            assert!(x <= prev.0 && y <= prev.1);
            prev = (x, y);
        }
        assert!(solve_coupled(&p, 0.5).is_err());
    }

    #[test]
    fn point_a_e2() {
        let a = point_a(&e2());
        assert_eq!((a.rho, a.theta), (0.0, 1.0));
        assert!((a.r1 - 0.5 * 31f64.log2()).abs() < 1e-14);
        assert!((a.r2 - 0.5 * (39.0f64 / 31.0).log2()).abs() < 1e-14);
        assert!((a.r2 - crate::channel::awgn_capacity(8.0, 31.0).unwrap()).abs() < 1e-15);
        assert!((a.mu - 28.4 / 78.0).abs() < 1e-14);
    }

    #[test]
    fn key_points_e2() {
        let k = key_points(&e2()).unwrap();
        assert_eq!(k.d1, k.d2);
        assert!(k.d2_p2hat >= e2().t2());
        assert!(k.d3_p2hat > e2().t2());
        assert!((k.s_split.rho() - 2.0 / 3.0).abs() < 1e-12);
        assert!((k.mu_at_d3 - 0.79406).abs() < 1e-4);
    }

    #[test]
    fn trace_e2_structure() {
        let p = e2();
        let t = trace_lower_boundary(&p, 200).unwrap();
        assert_eq!(t.status, TraceStatus::Complete);
        assert!(t.points.len() >= 200);
        assert_eq!(t.points[0].regime, Regime::CornerA);
        let last_coupled = t.points.iter().rev().find(|q| q.regime == Regime::Coupled).unwrap();
        assert!((last_coupled.mu - 1.0).abs() <= 1e-9);
        assert!((last_coupled.rho - 2.0 / 3.0).abs() < 1e-12);
        assert!((last_coupled.theta - 0.8125).abs() < 1e-12);
        // Case 1 at S: the assembled sum is the Remark-1 corner, not the front.
        let c = corner_rates(&p, last_coupled.split());
        let expect = c.r1_plus_2 + c.r2_plus_1 + 0.5 * 5f64.log2() + 0.5 * 2.5f64.log2();
        assert!((last_coupled.r1 + last_coupled.r2 - expect).abs() < 1e-9);
        let d3 = point_d3(&p).unwrap();
        let mu_d3 = mu1_closed(&p, 30.0, d3);
        assert!(t.points.iter().any(|q| q.mu == mu_d3 && q.regime == Regime::StationaryUser2));
        for w in t.points.windows(2) {
            assert!(w[1].mu >= w[0].mu);
        }
    }

    #[test]
    fn trace_two_points() {
        let t = trace_lower_boundary(&e2(), 2).unwrap();
        assert_eq!(t.points.len(), 2);
        assert_eq!(t.points[0].regime, Regime::CornerA);
        assert_eq!((t.points[1].p1hat, t.points[1].p2hat), (e2().t1(), e2().t2()));
    }

    #[test]
    fn trace_at_t1_is_front_only() {
        let q = ChannelParams::new(0.2, 0.4, 1.0, 1.0).unwrap();
        let p = ChannelParams::new(0.2, 0.4, q.t1(), 40.0).unwrap();
        let t = trace_lower_boundary(&p, 50).unwrap();
        assert_eq!(t.status, TraceStatus::FrontOnly);
        let r_sum = sum_rate_front(&p).unwrap().r_sum;
        for q in &t.points {
            assert_eq!(q.regime, Regime::SumRateFront);
            assert!((q.r1 + q.r2 - r_sum).abs() <= 1e-9);
        }
    }

    #[test]
    fn trace_regime_errors() {
        let below_t1 = ChannelParams::new(0.2, 0.4, 5.0, 40.0).unwrap();
        match trace_lower_boundary(&below_t1, 10) {
            Err(GicError::Regime(r)) => assert_eq!(r.kind, RegimeKind::BelowT1),
            other => panic!("{other:?}"),
        }
        let below_t2 = ChannelParams::new(0.2, 0.4, 30.0, 5.0).unwrap();
        match trace_lower_boundary(&below_t2, 10) {
            Err(GicError::Regime(r)) => assert_eq!(r.kind, RegimeKind::BelowT2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(trace_lower_boundary(&e2(), 1), Err(GicError::Validation { .. })));
    }

    #[test]
    fn receiver_two_regime_clips_at_corner() {
        let p = ChannelParams::new(0.4, 0.2, 40.0, 30.0).unwrap();
        let t = trace_lower_boundary(&p, 100).unwrap();
        assert_eq!(t.status, TraceStatus::Clipped);
        assert_eq!(t.points.len(), 1);
        assert!(t.points[0].r1 + t.points[0].r2 >= sum_rate_front(&p).unwrap().r_sum - 1e-12);
    }

    #[test]
    fn upper_trace_involution() {
        let p = e2();
        let lower = trace_lower_boundary(&p, 60).unwrap();
        let back = trace_upper_boundary(&p.swapped(), 60).unwrap();
        assert_eq!(lower.points.len(), back.points.len());
        for (l, u) in lower.points.iter().zip(&back.points) {
            assert!((l.r1 - u.r2).abs() < 1e-15 && (l.r2 - u.r1).abs() < 1e-15);
            assert!((l.mu * u.mu - 1.0).abs() < 1e-12);
            assert_eq!((l.rho, l.theta), (u.theta, u.rho));
        }
    }

    #[test]
    fn upper_trace_symmetric_mirror() {
        let p = ChannelParams::new(0.25, 0.25, 20.0, 20.0).unwrap();
        let lower = trace_lower_boundary(&p, 30);
        let upper = trace_upper_boundary(&p, 30);
        match (lower, upper) {
            (Ok(l), Ok(u)) => {
                for (a, b) in l.points.iter().zip(&u.points) {
                    assert!((a.r1 - b.r2).abs() < 1e-12 && (a.r2 - b.r1).abs() < 1e-12);
                }
            }
            (Err(a), Err(b)) => assert_eq!(a, b),
            (l, u) => panic!("{l:?} {u:?}"),
        }
    }
}
