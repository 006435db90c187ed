//! Han-Kobayashi constraint system with Gaussian inputs.
//!
//! User `i` sends a public layer `U_i` (power `u1 = rho P1`, `u2 = theta P2`)
//! superposed with a private layer `V_i` (power `h1 = (1-rho) P1`,
//! `h2 = (1-theta) P2`). Receiver 1 decodes `(U1, V1, U2)` with `V2` as noise
//! and receiver 2 decodes `(U2, V2, U1)` with `V1` as noise. Each bound is a
//! Gaussian conditional mutual information `0.5 log2(1 + S/N)` where `N` is
//! the conditional variance of the output given everything being conditioned
//! on plus the messages being bounded:
//!
//! | id   | constraint                      | closed form                               |
//! |------|---------------------------------|-------------------------------------------|
//! | HK1  | `R_U1 <= I(U1;Y1\|U2,V1)`        | `u1 / (a h2 + 1)`                         |
//! | HK2  | `R_U1 <= I(U1;Y2\|U2,V2)`        | `b u1 / (b h1 + 1)`                       |
//! | HK3  | `R_U2 <= I(U2;Y1\|U1,V1)`        | `a u2 / (a h2 + 1)`                       |
//! | HK4  | `R_U2 <= I(U2;Y2\|U1,V2)`        | `u2 / (b h1 + 1)`                         |
//! | HK5  | `R_V1 <= I(V1;Y1\|U1,U2)`        | `h1 / (a h2 + 1)`                         |
//! | HK6  | `R_V2 <= I(V2;Y2\|U1,U2)`        | `h2 / (b h1 + 1)`                         |
//! | HK7  | `R_U1+R_U2 <= I(U1,U2;Y1\|V1)`   | `(u1 + a u2) / (a h2 + 1)`                |
//! | HK8  | `R_U1+R_U2 <= I(U1,U2;Y2\|V2)`   | `(b u1 + u2) / (b h1 + 1)`                |
//! | HK9  | `R_U1+R_V1 <= I(U1,V1;Y1\|U2)`   | `P1 / (a h2 + 1)`                         |
//! | HK10 | `R_U2+R_V2 <= I(U2,V2;Y2\|U1)`   | `P2 / (b h1 + 1)`                         |
//! | HK11 | `R_U2+R_V1 <= I(U2,V1;Y1\|U1)`   | `(a u2 + h1) / (a h2 + 1)`                |
//! | HK12 | `R_U1+R_V2 <= I(U1,V2;Y2\|U2)`   | `(b u1 + h2) / (b h1 + 1)`                |
//! | HK13 | `R_U1+R_U2+R_V1 <= I(U1,U2,V1;Y1)` | `(P1 + a u2) / (a h2 + 1)`              |
//! | HK14 | `R_U1+R_U2+R_V2 <= I(U1,U2,V2;Y2)` | `(b u1 + P2) / (b h1 + 1)`              |
//!
//! The private rates are pinned by HK5 / HK6 at the optimum, leaving a
//! two-variable LP in `(R_U1, R_U2)`.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::channel::{half_log2_1p, ChannelParams, PowerSplit};
use crate::error::{GicError, Result};
use crate::mac::corner_rates;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum HkConstraint {
    HK1,
    HK2,
    HK3,
    HK4,
    HK5,
    HK6,
    HK7,
    HK8,
    HK9,
    HK10,
    HK11,
    HK12,
    HK13,
    HK14,
}

impl HkConstraint {
    pub const ALL: [HkConstraint; 14] = [
        HkConstraint::HK1,
        HkConstraint::HK2,
        HkConstraint::HK3,
        HkConstraint::HK4,
        HkConstraint::HK5,
        HkConstraint::HK6,
        HkConstraint::HK7,
        HkConstraint::HK8,
        HkConstraint::HK9,
        HkConstraint::HK10,
        HkConstraint::HK11,
        HkConstraint::HK12,
        HkConstraint::HK13,
        HkConstraint::HK14,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["HK1", "HK2", "HK3", "HK4", "HK5", "HK6", "HK7", "HK8", "HK9", "HK10", "HK11", "HK12", "HK13", "HK14"]
            [self.index()]
    }

    /// Which of `(R_U1, R_U2, R_V1, R_V2)` appear on the left-hand side.
    pub fn coefficients(self) -> [f64; 4] {
        use HkConstraint::*;
        match self {
            HK1 | HK2 => [1.0, 0.0, 0.0, 0.0],
            HK3 | HK4 => [0.0, 1.0, 0.0, 0.0],
            HK5 => [0.0, 0.0, 1.0, 0.0],
            HK6 => [0.0, 0.0, 0.0, 1.0],
            HK7 | HK8 => [1.0, 1.0, 0.0, 0.0],
            HK9 => [1.0, 0.0, 1.0, 0.0],
            HK10 => [0.0, 1.0, 0.0, 1.0],
            HK11 => [0.0, 1.0, 1.0, 0.0],
            HK12 => [1.0, 0.0, 0.0, 1.0],
            HK13 => [1.0, 1.0, 1.0, 0.0],
            HK14 => [1.0, 1.0, 0.0, 1.0],
        }
    }
}

/// Right-hand sides of HK1..HK14.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HkBounds(pub [f64; 14]);

impl HkBounds {
    pub fn get(&self, c: HkConstraint) -> f64 {
        self.0[c.index()]
    }
}

impl Serialize for HkBounds {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(14))?;
        for c in HkConstraint::ALL {
            m.serialize_entry(c.name(), &self.get(c))?;
        }
        m.end()
    }
}

pub fn hk_bounds(params: &ChannelParams, split: PowerSplit) -> HkBounds {
    let (a, b, p1, p2) = (params.a(), params.b(), params.p1(), params.p2());
    let (u1, u2) = params.public_powers(split);
    let (h1, h2) = params.private_powers(split);
    let n1 = a * h2 + 1.0;
    let n2 = b * h1 + 1.0;
    HkBounds([
        half_log2_1p(u1 / n1),
        half_log2_1p(b * u1 / n2),
        half_log2_1p(a * u2 / n1),
        half_log2_1p(u2 / n2),
        half_log2_1p(h1 / n1),
        half_log2_1p(h2 / n2),
        half_log2_1p((u1 + a * u2) / n1),
        half_log2_1p((b * u1 + u2) / n2),
        half_log2_1p(p1 / n1),
        half_log2_1p(p2 / n2),
        half_log2_1p((a * u2 + h1) / n1),
        half_log2_1p((b * u1 + h2) / n2),
        half_log2_1p((p1 + a * u2) / n1),
        half_log2_1p((b * u1 + p2) / n2),
    ])
}

/// The system left once the private rates and `R_U1` are pinned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedBounds {
    /// `I(V1;Y1|U1,U2)`, met with equality.
    pub r_v1: f64,
    /// `I(V2;Y2|U1,U2)`, met with equality.
    pub r_v2: f64,
    /// `I(U1;Y2|U2)`, met with equality.
    pub r_u1: f64,
    /// `I(U2;Y1|U1)`.
    pub r_u2_single: f64,
    /// `I(U1,U2;Y1)`.
    pub sum_y1: f64,
    /// `I(U1,U2;Y2)`.
    pub sum_y2: f64,
}

impl ReducedBounds {
    pub fn r_u2_max(&self) -> f64 {
        self.r_u2_single.min(self.sum_y1 - self.r_u1).min(self.sum_y2 - self.r_u1).max(0.0)
    }
}

pub fn reduced_bounds(params: &ChannelParams, split: PowerSplit) -> ReducedBounds {
    let c = corner_rates(params, split);
    let (h1, h2) = params.private_powers(split);
    ReducedBounds {
        r_v1: half_log2_1p(h1 / (params.a() * h2 + 1.0)),
        r_v2: half_log2_1p(h2 / (params.b() * h1 + 1.0)),
        r_u1: c.r1_plus_2,
        r_u2_single: c.r2_plus_1,
        sum_y1: c.sum_y1,
        sum_y2: c.sum_y2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HkRates {
    #[serde(rename = "rU1")]
    pub r_u1: f64,
    #[serde(rename = "rU2")]
    pub r_u2: f64,
    #[serde(rename = "rV1")]
    pub r_v1: f64,
    #[serde(rename = "rV2")]
    pub r_v2: f64,
}

impl HkRates {
    pub fn r1(&self) -> f64 {
        self.r_u1 + self.r_v1
    }

    pub fn r2(&self) -> f64 {
        self.r_u2 + self.r_v2
    }

    pub fn weighted_sum(&self, mu: f64) -> f64 {
        self.r1() + mu * self.r2()
    }

    fn as_array(&self) -> [f64; 4] {
        [self.r_u1, self.r_u2, self.r_v1, self.r_v2]
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(GicError::OutOfRange { name: "mu", value: mu, lo: 0.0, hi: 1.0 });
    }
    Ok(())
}

const FEAS_TOL: f64 = 1e-12;

/// Maximizes `R1 + mu R2` over HK1..HK14 with HK5/HK6 tight, by enumerating
/// every pairwise intersection of the remaining constraint lines.
pub fn lp_optimize_full(params: &ChannelParams, split: PowerSplit, mu: f64) -> Result<HkRates> {
    check_mu(mu)?;
    let hk = hk_bounds(params, split);
    let (r_v1, r_v2) = (hk.get(HkConstraint::HK5), hk.get(HkConstraint::HK6));
    // alpha x + beta y <= c in (x, y) = (R_U1, R_U2)
    let mut lines: Vec<(f64, f64, f64)> = vec![(-1.0, 0.0, 0.0), (0.0, -1.0, 0.0)];
    for c in HkConstraint::ALL {
        let k = c.coefficients();
        if k[0] == 0.0 && k[1] == 0.0 {
            continue;
        }
        lines.push((k[0], k[1], hk.get(c) - k[2] * r_v1 - k[3] * r_v2));
    }
    let feasible = |x: f64, y: f64| lines.iter().all(|&(al, be, c)| al * x + be * y <= c + FEAS_TOL);

    let mut best: Option<(f64, f64, f64)> = None;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a1, b1, c1) = lines[i];
            let (a2, b2, c2) = lines[j];
            let det = a1 * b2 - a2 * b1;
            if det == 0.0 {
                continue;
            }
            let x = (c1 * b2 - c2 * b1) / det;
            let y = (a1 * c2 - a2 * c1) / det;
            if !feasible(x, y) {
                continue;
            }
            let v = x + mu * y;
            let better = match best {
                None => true,
                Some((bv, bx, by)) => {
                    v > bv + FEAS_TOL || ((v - bv).abs() <= FEAS_TOL && (x > bx || (x == bx && y > by)))
                }
            };
            if better {
                best = Some((v, x, y));
            }
        }
    }
    let (_, x, y) = best.expect("origin is always a feasible vertex");
    Ok(HkRates { r_u1: x.max(0.0), r_u2: y.max(0.0), r_v1, r_v2 })
}

/// Closed-form optimum of the reduced system: everything pinned, `R_U2` at
/// its smallest bound.
pub fn lp_optimize_reduced(params: &ChannelParams, split: PowerSplit, mu: f64) -> Result<HkRates> {
    check_mu(mu)?;
    let r = reduced_bounds(params, split);
    Ok(HkRates { r_u1: r.r_u1, r_u2: r.r_u2_max(), r_v1: r.r_v1, r_v2: r.r_v2 })
}

/// `R1 + mu R2` of the reduced optimum straight from the channel numbers.
/// Same arithmetic as [`lp_optimize_reduced`], without the intermediate
/// structs, for large grid sweeps.
pub(crate) fn reduced_value(a: f64, b: f64, p1: f64, p2: f64, rho: f64, theta: f64, mu: f64) -> (f64, f64) {
    let (u1, u2) = (rho * p1, theta * p2);
    let (h1, h2) = ((1.0 - rho) * p1, (1.0 - theta) * p2);
    let s1 = h1 + a * h2 + 1.0;
    let s2 = b * h1 + h2 + 1.0;
    let r_u1 = half_log2_1p(b * u1 / s2);
    let r2p1 = half_log2_1p(a * u2 / s1);
    let r2m2 = half_log2_1p(u2 / (b * u1 + s2));
    let sum_y1 = half_log2_1p((u1 + a * u2) / s1);
    let r_u2 = r2p1.min(sum_y1 - r_u1).min(r2m2).max(0.0);
    let r1 = r_u1 + half_log2_1p(h1 / (a * h2 + 1.0));
    let r2 = r_u2 + half_log2_1p(h2 / (b * h1 + 1.0));
    (r1 + mu * r2, r1)
}

/// Largest violation of HK1..HK14 (and positivity) by `rates`.
pub fn max_violation(bounds: &HkBounds, rates: &HkRates) -> f64 {
    let v = rates.as_array();
    let mut worst = v.iter().map(|x| -x).fold(f64::NEG_INFINITY, f64::max);
    for c in HkConstraint::ALL {
        let k = c.coefficients();
        let lhs: f64 = k.iter().zip(&v).map(|(a, b)| a * b).sum();
        worst = worst.max(lhs - bounds.get(c));
    }
    worst
}

/// Constraints met with equality within `tol`.
pub fn active_constraints(bounds: &HkBounds, rates: &HkRates, tol: f64) -> Vec<HkConstraint> {
    let v = rates.as_array();
    HkConstraint::ALL
        .into_iter()
        .filter(|c| {
            let lhs: f64 = c.coefficients().iter().zip(&v).map(|(a, b)| a * b).sum();
            (lhs - bounds.get(*c)).abs() <= tol
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitOptimum {
    pub best_value: f64,
    pub best_split: PowerSplit,
}

/// `(value, i, j)` with ties going to the smaller `(i, j)`.
pub(crate) fn better_cell(p: (f64, usize, usize), q: (f64, usize, usize)) -> (f64, usize, usize) {
    if q.0 > p.0 || (q.0 == p.0 && (q.1, q.2) < (p.1, p.2)) {
        q
    } else {
        p
    }
}

/// Best reduced-LP value over the uniform `grid_resolution^2` split grid.
pub(crate) fn grid_argmax(params: &ChannelParams, mu: f64, n: usize) -> (f64, usize, usize) {
    let (a, b, p1, p2) = (params.a(), params.b(), params.p1(), params.p2());
    let step = 1.0 / (n - 1) as f64;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let rho = i as f64 * step;
            (0..n).fold((f64::NEG_INFINITY, usize::MAX, usize::MAX), |acc, j| {
                let (v, _) = reduced_value(a, b, p1, p2, rho, j as f64 * step, mu);
                better_cell(acc, (v, i, j))
            })
        })
        .reduce(|| (f64::NEG_INFINITY, usize::MAX, usize::MAX), better_cell)
}

pub fn hk_weighted_sum_over_splits(params: &ChannelParams, mu: f64, grid_resolution: usize) -> Result<SplitOptimum> {
    check_mu(mu)?;
    if grid_resolution < 2 {
        return Err(GicError::Validation {
            name: "grid_resolution",
            value: grid_resolution as f64,
            reason: "must be at least 2",
        });
    }
    let (v, i, j) = grid_argmax(params, mu, grid_resolution);
    let step = 1.0 / (grid_resolution - 1) as f64;
    Ok(SplitOptimum { best_value: v, best_split: PowerSplit::new(i as f64 * step, j as f64 * step)? })
}
