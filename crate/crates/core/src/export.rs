//! CSV and JSON output for traces.
//!
//! CSV floats use 12 significant digits in the shortest of fixed or
//! exponent notation, `.` as decimal separator and `\n` line endings, so
//! identical inputs give byte-identical files.

use std::io::{self, Write};

use serde_json::{json, Value};

use crate::boundary::{BoundaryPoint, Trace};

pub const CSV_HEADER: &str = "mu,rho,theta,p1hat,p2hat,r1,r2,regime,mac_case";

/// `%.12g`.
pub fn format_g(x: f64) -> String {
    const DIGITS: usize = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= DIGITS as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv_row<W: Write>(w: &mut W, p: &BoundaryPoint) -> io::Result<()> {
    let nums = [p.mu, p.rho, p.theta, p.p1hat, p.p2hat, p.r1, p.r2].map(format_g);
    write!(w, "{}", nums.join(","))?;
    write!(w, ",{},{}\n", p.regime.as_str(), p.mac_case.as_str())
}

/// Header plus one row per point.
pub fn write_points_csv<'a, W, I>(w: &mut W, points: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a BoundaryPoint>,
{
    write!(w, "{CSV_HEADER}\n")?;
    for p in points {
        write_csv_row(w, p)?;
    }
    Ok(())
}

/// Lower trace followed by the upper trace in reverse, so the rows form
/// one counterclockwise polyline from the R1 corner to the R2 corner.
pub fn write_boundary_csv<W: Write>(w: &mut W, lower: &Trace, upper: Option<&Trace>) -> io::Result<()> {
    let upper_rev = upper.into_iter().flat_map(|u| u.points.iter().rev());
    write_points_csv(w, lower.points.iter().chain(upper_rev))
}

pub fn trace_json(trace: &Trace) -> Value {
    json!({
        "status": trace.status,
        "regime_report": trace.report,
        "terminal": trace.terminal,
        "points": trace.points,
    })
}

pub fn boundary_json(lower: &Trace, upper: Option<&Trace>) -> Value {
    json!({
        "params": lower.params,
        "lower": trace_json(lower),
        "upper": upper.map(trace_json),
    })
}
