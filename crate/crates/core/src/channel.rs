//! Channel parameterization and elementary Gaussian rate formulas.
//!
//! The channel is the two-user weak Gaussian interference channel with unit
//! noise at both receivers,
//!
//! ```text
//! Y1 = X1 + sqrt(a) X2 + Z1,    Y2 = X2 + sqrt(b) X1 + Z2,
//! ```
//!
//! so `a` and `b` are *power* cross-gains. Every rate is in bits per channel
//! use. Each user splits its budget into a public part (`rho * P1`,
//! `theta * P2`) decoded at both receivers and a private remainder
//! (`P1hat`, `P2hat`) decoded only at its own receiver.

use serde::{Deserialize, Serialize};

use crate::error::{GicError, Result};

/// `0.5 * log2(1 + snr)`, accurate for small `snr`.
#[inline]
pub(crate) fn half_log2_1p(snr: f64) -> f64 {
    0.5 * snr.ln_1p() / std::f64::consts::LN_2
}

/// One constituent channel: cross-gains and power budgets.
///
/// The thresholds `T1 = (1-a)/(ab)` and `T2 = (1-b)/(ab)` are derived on
/// every call to [`t1`](Self::t1) / [`t2`](Self::t2), never cached.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct ChannelParams {
    a: f64,
    b: f64,
    p1: f64,
    p2: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    a: f64,
    b: f64,
    p1: f64,
    p2: f64,
}

impl TryFrom<RawParams> for ChannelParams {
    type Error = GicError;
    fn try_from(raw: RawParams) -> Result<Self> {
        ChannelParams::new(raw.a, raw.b, raw.p1, raw.p2)
    }
}

impl Serialize for ChannelParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ChannelParams", 6)?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("p1", &self.p1)?;
        st.serialize_field("p2", &self.p2)?;
        st.serialize_field("t1", &self.t1())?;
        st.serialize_field("t2", &self.t2())?;
        st.end()
    }
}

impl ChannelParams {
    /// Validates the weak regime `0 < a, b < 1` and positive budgets.
    /// Out-of-range gains are rejected, never clamped.
    pub fn new(a: f64, b: f64, p1: f64, p2: f64) -> Result<Self> {
        let gain_ok = |x: f64| x.is_finite() && x > 0.0 && x < 1.0;
        let power_ok = |x: f64| x.is_finite() && x > 0.0;
        if !gain_ok(a) {
            return Err(GicError::Validation { name: "a", value: a, reason: "must lie in (0, 1)" });
        }
        if !gain_ok(b) {
            return Err(GicError::Validation { name: "b", value: b, reason: "must lie in (0, 1)" });
        }
        if !power_ok(p1) {
            return Err(GicError::Validation { name: "p1", value: p1, reason: "must be positive and finite" });
        }
        if !power_ok(p2) {
            return Err(GicError::Validation { name: "p2", value: p2, reason: "must be positive and finite" });
        }
        Ok(Self { a, b, p1, p2 })
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }
    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }
    #[inline]
    pub fn p1(&self) -> f64 {
        self.p1
    }
    #[inline]
    pub fn p2(&self) -> f64 {
        self.p2
    }

    /// `(1 - a) / (ab)`.
    #[inline]
    pub fn t1(&self) -> f64 {
        (1.0 - self.a) / (self.a * self.b)
    }

    /// `(1 - b) / (ab)`.
    #[inline]
    pub fn t2(&self) -> f64 {
        (1.0 - self.b) / (self.a * self.b)
    }

    /// The mirrored channel: `P1 <-> P2`, `a <-> b`.
    pub fn swapped(&self) -> Self {
        Self { a: self.b, b: self.a, p1: self.p2, p2: self.p1 }
    }

    /// Private powers `((1-rho) P1, (1-theta) P2)` of a split.
    pub fn private_powers(&self, split: PowerSplit) -> (f64, f64) {
        ((1.0 - split.rho()) * self.p1, (1.0 - split.theta()) * self.p2)
    }

    /// Public powers `(rho P1, theta P2)` of a split.
    pub fn public_powers(&self, split: PowerSplit) -> (f64, f64) {
        (split.rho() * self.p1, split.theta() * self.p2)
    }

    /// The split whose private powers are `(p1hat, p2hat)`.
    pub fn split_from_private(&self, p1hat: f64, p2hat: f64) -> Result<PowerSplit> {
        PowerSplit::new(1.0 - p1hat / self.p1, 1.0 - p2hat / self.p2)
    }
}

/// See [`ChannelParams::swapped`].
pub fn swap_users(params: &ChannelParams) -> ChannelParams {
    params.swapped()
}

/// Public power fractions `(rho, theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerSplit {
    rho: f64,
    theta: f64,
}

impl PowerSplit {
    /// Fractions within `1e-12` outside `[0, 1]` (bisection round-off) are
    /// snapped onto the interval.
    pub fn new(rho: f64, theta: f64) -> Result<Self> {
        let snap = |name: &'static str, x: f64| -> Result<f64> {
            if !x.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&x) {
                return Err(GicError::Validation { name, value: x, reason: "must lie in [0, 1]" });
            }
            Ok(x.clamp(0.0, 1.0))
        };
        Ok(Self { rho: snap("rho", rho)?, theta: snap("theta", theta)? })
    }

    #[inline]
    pub fn rho(&self) -> f64 {
        self.rho
    }
    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// A rate pair in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub fn weighted(&self, mu: f64) -> f64 {
        self.r1 + mu * self.r2
    }
}

/// `0.5 log2(1 + signal / noise)`.
pub fn awgn_capacity(signal_power: f64, noise_power: f64) -> Result<f64> {
    if !(noise_power > 0.0) {
        return Err(GicError::Domain(format!("noise power must be positive, got {noise_power}")));
    }
    if !(signal_power >= 0.0) {
        return Err(GicError::Domain(format!("signal power must be non-negative, got {signal_power}")));
    }
    Ok(half_log2_1p(signal_power / noise_power))
}

/// Interference-plus-noise seen by the public pair at receiver 1:
/// `(1-rho) P1 + a (1-theta) P2 + 1`.
pub fn noise_at_y1(params: &ChannelParams, split: PowerSplit) -> f64 {
    let (h1, h2) = params.private_powers(split);
    h1 + params.a() * h2 + 1.0
}

/// Mirror of [`noise_at_y1`]: `b (1-rho) P1 + (1-theta) P2 + 1`.
pub fn noise_at_y2(params: &ChannelParams, split: PowerSplit) -> f64 {
    let (h1, h2) = params.private_powers(split);
    params.b() * h1 + h2 + 1.0
}

/// Private layer of user 1, decoded after both public layers with the other
/// private layer as noise.
pub fn private_rate_user1(params: &ChannelParams, p1hat: f64, p2hat: f64) -> f64 {
    half_log2_1p(p1hat / (params.a() * p2hat + 1.0))
}

pub fn private_rate_user2(params: &ChannelParams, p1hat: f64, p2hat: f64) -> f64 {
    half_log2_1p(p2hat / (params.b() * p1hat + 1.0))
}

/// Rates of `num_layers` equal-power superposed layers under successive
/// decoding, listed in decoding order (top layer first).
///
/// Layer `l` (1-based) sees the `L - l` undecoded layers below it as noise.
/// The rates telescope to `awgn_capacity(total_power, noise_power)`.
pub fn scsd_layer_rates(total_power: f64, noise_power: f64, num_layers: usize) -> Result<Vec<f64>> {
    if num_layers == 0 {
        return Err(GicError::Domain("number of layers must be at least 1".into()));
    }
    if !(noise_power > 0.0) {
        return Err(GicError::Domain(format!("noise power must be positive, got {noise_power}")));
    }
    if !(total_power >= 0.0) {
        return Err(GicError::Domain(format!("total power must be non-negative, got {total_power}")));
    }
    let slice = total_power / num_layers as f64;
    Ok((1..=num_layers)
        .map(|l| {
            let below = (num_layers - l) as f64 * slice;
            half_log2_1p(slice / (below + noise_power))
        })
        .collect())
}
