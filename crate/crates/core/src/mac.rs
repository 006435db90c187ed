//! Public-message MAC regions at both receivers.
//!
//! With the private layers treated as noise, receiver 1 sees the public
//! pair through MAC(rho P1, a theta P2; sigma1^2) and receiver 2 through
//! MAC(b rho P1, theta P2; sigma2^2). The public rates must lie in the
//! intersection of the two pentagons.

use serde::Serialize;

use crate::channel::{half_log2_1p, ChannelParams, PowerSplit};
use crate::error::{GicError, RegimeKind, RegimeReport, Result};

/// Corner rates of both MAC pentagons.
///
/// `r1_plus_k` is user 1's rate at receiver `k` when user 2's public layer is
/// already removed, `r1_minus_k` when it is treated as noise. Likewise for
/// user 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MacCorners {
    #[serde(rename = "r1p1")]
    pub r1_plus_1: f64,
    #[serde(rename = "r1m1")]
    pub r1_minus_1: f64,
    #[serde(rename = "r1p2")]
    pub r1_plus_2: f64,
    #[serde(rename = "r1m2")]
    pub r1_minus_2: f64,
    #[serde(rename = "r2p2")]
    pub r2_plus_2: f64,
    #[serde(rename = "r2m2")]
    pub r2_minus_2: f64,
    #[serde(rename = "r2p1")]
    pub r2_plus_1: f64,
    #[serde(rename = "r2m1")]
    pub r2_minus_1: f64,
    pub sum_y1: f64,
    pub sum_y2: f64,
}

impl MacCorners {
    /// Corners from public powers `(u1, u2)` and private powers `(h1, h2)`.
    pub(crate) fn from_powers(a: f64, b: f64, u1: f64, u2: f64, h1: f64, h2: f64) -> Self {
        let s1 = h1 + a * h2 + 1.0;
        let s2 = b * h1 + h2 + 1.0;
        MacCorners {
            r1_plus_1: half_log2_1p(u1 / s1),
            r1_minus_1: half_log2_1p(u1 / (a * u2 + s1)),
            r1_plus_2: half_log2_1p(b * u1 / s2),
            r1_minus_2: half_log2_1p(b * u1 / (u2 + s2)),
            r2_plus_2: half_log2_1p(u2 / s2),
            r2_minus_2: half_log2_1p(u2 / (b * u1 + s2)),
            r2_plus_1: half_log2_1p(a * u2 / s1),
            r2_minus_1: half_log2_1p(a * u2 / (u1 + s1)),
            sum_y1: half_log2_1p((u1 + a * u2) / s1),
            sum_y2: half_log2_1p((b * u1 + u2) / s2),
        }
    }

    /// The eight orderings that hold for every split, as
    /// `(name, larger, smaller)`.
    pub fn orderings(&self) -> [(&'static str, f64, f64); 8] {
        [
            ("r1p1>=r1m1", self.r1_plus_1, self.r1_minus_1),
            ("r2p2>=r2m2", self.r2_plus_2, self.r2_minus_2),
            ("r1p2>=r1m2", self.r1_plus_2, self.r1_minus_2),
            ("r2p1>=r2m1", self.r2_plus_1, self.r2_minus_1),
            ("r1p1>=r1p2", self.r1_plus_1, self.r1_plus_2),
            ("r1m1>=r1m2", self.r1_minus_1, self.r1_minus_2),
            ("r2p2>=r2p1", self.r2_plus_2, self.r2_plus_1),
            ("r2m2>=r2m1", self.r2_minus_2, self.r2_minus_1),
        ]
    }
}

pub fn corner_rates(params: &ChannelParams, split: PowerSplit) -> MacCorners {
    let (u1, u2) = params.public_powers(split);
    let (h1, h2) = params.private_powers(split);
    MacCorners::from_powers(params.a(), params.b(), u1, u2, h1, h2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseId {
    Case1,
    Case2,
    Case3,
    Case4,
}

impl CaseId {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::Case1 => "Case1",
            CaseId::Case2 => "Case2",
            CaseId::Case3 => "Case3",
            CaseId::Case4 => "Case4",
        }
    }
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Shape of the pentagon intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MacCase {
    pub case_id: CaseId,
    pub requires_joint_decoding_y1: bool,
}

/// Equalities fall to the lower-numbered case.
pub fn classify(c: &MacCorners) -> MacCase {
    let user1_crosses = c.r1_minus_1 < c.r1_plus_2;
    let user2_crosses = c.r2_minus_2 < c.r2_plus_1;
    let case_id = match (user1_crosses, user2_crosses) {
        (false, false) => CaseId::Case1,
        (true, false) => CaseId::Case2,
        (false, true) => CaseId::Case3,
        (true, true) => CaseId::Case4,
    };
    MacCase { case_id, requires_joint_decoding_y1: user1_crosses }
}

/// `theta` above this value puts user 1's receiver-2 corner past its
/// receiver-1 corner (`r1m1 < r1p2`).
pub fn threshold_theta(params: &ChannelParams) -> f64 {
    let (a, b) = (params.a(), params.b());
    (1.0 - b) / params.p2() - a * b + 1.0
}

pub fn threshold_rho(params: &ChannelParams) -> f64 {
    let (a, b) = (params.a(), params.b());
    (1.0 - a) / params.p1() - a * b + 1.0
}

/// Which constraint limits `r_u2` in [`public_rate_pair`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodingBound {
    /// `r2p1`: U1 is decoded first at Y1, then U2.
    SuccessiveY1,
    /// `sum_y1 - r1p2`: the public pair must be decoded jointly at Y1.
    JointY1,
    /// `r2m2`: U2 is decoded first at Y2 with U1 as noise.
    SuccessiveY2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PublicRatePair {
    pub r_u1: f64,
    pub r_u2: f64,
    /// Every bound attaining the minimum (within 1e-12).
    pub decoding: Vec<DecodingBound>,
}

/// Optimal public pair for weights `mu <= 1`: user 1 takes its receiver-2
/// corner and user 2 gets whatever both MACs still allow.
pub fn public_rate_pair(params: &ChannelParams, split: PowerSplit) -> PublicRatePair {
    public_pair_from_corners(&corner_rates(params, split))
}

pub(crate) fn public_pair_from_corners(c: &MacCorners) -> PublicRatePair {
    let r_u1 = c.r1_plus_2;
    let bounds = [
        (DecodingBound::SuccessiveY1, c.r2_plus_1),
        (DecodingBound::JointY1, c.sum_y1 - r_u1),
        (DecodingBound::SuccessiveY2, c.r2_minus_2),
    ];
    let r_u2 = bounds.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min).max(0.0);
    let decoding = bounds
        .iter()
        .filter(|&&(_, v)| v <= r_u2 + 1e-12)
        .map(|&(d, _)| d)
        .collect();
    PublicRatePair { r_u1, r_u2, decoding }
}

const DEDUP_TOL: f64 = 1e-12;

/// Vertices of the intersection of both pentagons, counterclockwise from
/// the origin.
pub fn intersection_polygon(c: &MacCorners) -> Vec<(f64, f64)> {
    let x_max = c.r1_plus_1.min(c.r1_plus_2).max(0.0);
    let y_max = c.r2_plus_1.min(c.r2_plus_2).max(0.0);
    let mut poly = vec![(0.0, 0.0), (x_max, 0.0), (x_max, y_max), (0.0, y_max)];
    for cap in [c.sum_y1, c.sum_y2] {
        poly = clip_sum(&poly, cap);
    }
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(poly.len());
    for p in poly {
        let dup = out
            .last()
            .is_some_and(|q: &(f64, f64)| (p.0 - q.0).abs() <= DEDUP_TOL && (p.1 - q.1).abs() <= DEDUP_TOL);
        if !dup {
            out.push(p);
        }
    }
    while out.len() > 1 {
        let (f, l) = (out[0], out[out.len() - 1]);
        if (f.0 - l.0).abs() <= DEDUP_TOL && (f.1 - l.1).abs() <= DEDUP_TOL {
            out.pop();
        } else {
            break;
        }
    }
    out
}

/// One Sutherland-Hodgman pass against `x + y <= cap`.
fn clip_sum(poly: &[(f64, f64)], cap: f64) -> Vec<(f64, f64)> {
    let inside = |p: &(f64, f64)| p.0 + p.1 <= cap;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        match (inside(&p), inside(&q)) {
            (true, true) => out.push(q),
            (true, false) => out.push(cross_point(p, q, cap)),
            (false, true) => {
                out.push(cross_point(p, q, cap));
                out.push(q);
            }
            (false, false) => {}
        }
    }
    // Sutherland-Hodgman emits end points; rotate so the origin leads again.
    if let Some(k) = out.iter().position(|&(x, y)| x == 0.0 && y == 0.0) {
        out.rotate_left(k);
    }
    out
}

fn cross_point(p: (f64, f64), q: (f64, f64), cap: f64) -> (f64, f64) {
    let (sp, sq) = (p.0 + p.1, q.0 + q.1);
    let t = (cap - sp) / (sq - sp);
    let x = p.0 + t * (q.0 - p.0);
    let y = p.1 + t * (q.1 - p.1);
    // land exactly on the axis when the edge lies on one
    (if p.0 == q.0 { p.0 } else { x }, if p.1 == q.1 { p.1 } else { y })
}

/// Largest violation of the six pentagon inequalities (and positivity) at `(x, y)`.
pub fn polygon_violation(c: &MacCorners, x: f64, y: f64) -> f64 {
    [
        -x,
        -y,
        x - c.r1_plus_1,
        y - c.r2_plus_1,
        x + y - c.sum_y1,
        x - c.r1_plus_2,
        y - c.r2_plus_2,
        x + y - c.sum_y2,
    ]
    .into_iter()
    .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BindingReceiver {
    Y1,
    Y2,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumRateFront {
    pub r_sum: f64,
    pub binding_receiver: BindingReceiver,
    pub rho_s: f64,
    pub theta_s: f64,
}

impl SumRateFront {
    pub fn split(&self) -> PowerSplit {
        PowerSplit::new(self.rho_s, self.theta_s).expect("front split lies in [0, 1]^2")
    }
}

const REGIME_REL_TOL: f64 = 1e-12;

/// Whether `x >= t` up to relative round-off.
pub(crate) fn at_least(x: f64, t: f64) -> bool {
    x >= t * (1.0 - REGIME_REL_TOL)
}

/// Sum-rate front with private powers pinned at `(T1, T2)` (point S).
pub fn sum_rate_front(params: &ChannelParams) -> Result<SumRateFront> {
    let (a, b, p1, p2) = (params.a(), params.b(), params.p1(), params.p2());
    let (t1, t2) = (params.t1(), params.t2());
    let report = |kind, detail: &str| {
        GicError::Regime(RegimeReport { kind, detail: detail.into(), p1, p2, t1, t2 })
    };
    if !at_least(p1, t1) {
        return Err(report(RegimeKind::BelowT1, "sum-rate front needs p1 >= t1"));
    }
    if !at_least(p2, t2) {
        return Err(report(RegimeKind::BelowT2, "sum-rate front needs p2 >= t2"));
    }
    let inv_ab = 1.0 / (a * b);
    let (e1, e2) = ((p1 - t1).max(0.0), (p2 - t2).max(0.0));
    let via_y1 = 0.5 * (inv_ab + e1 + a * e2).log2();
    let via_y2 = 0.5 * (inv_ab + e2 + b * e1).log2();
    let lhs = p1 * (1.0 - b);
    let rhs = p2 * (1.0 - a);
    let binding_receiver = if (lhs - rhs).abs() <= REGIME_REL_TOL * lhs.max(rhs) {
        BindingReceiver::Both
    } else if lhs < rhs {
        BindingReceiver::Y1
    } else {
        BindingReceiver::Y2
    };
    Ok(SumRateFront {
        r_sum: via_y1.min(via_y2),
        binding_receiver,
        rho_s: (e1 / p1).clamp(0.0, 1.0),
        theta_s: (e2 / p2).clamp(0.0, 1.0),
    })
}
