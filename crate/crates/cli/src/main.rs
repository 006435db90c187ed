use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use gic_region::export::{boundary_json, format_g, write_boundary_csv};
use gic_region::hk::{lp_optimize_full, lp_optimize_reduced};
use gic_region::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    Trace,
    Classify,
    Sumrate,
    HkCompare,
    Oracle,
    ScsdDemo,
    Keypoints,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "gic-region", version, about = "Lower capacity-region boundary of the weak Gaussian interference channel")]
struct Cli {
    command: Command,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    /// Points on each traced part.
    #[arg(long)]
    points: Option<usize>,
    /// Grid resolution per split axis.
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    /// Total power for `scsd-demo`.
    #[arg(long)]
    power: Option<f64>,
    /// Noise power for `scsd-demo`.
    #[arg(long)]
    noise: Option<f64>,
    /// Layer count for `scsd-demo`.
    #[arg(long)]
    layers: Option<usize>,
    /// Output file (written atomically); stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Flat `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Core(GicError),
    Usage(String),
    Io(std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Core(e) => e.exit_code() as u8,
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Usage(m) => m.clone(),
            CliError::Io(e) => e.to_string(),
        }
    }
}

impl From<GicError> for CliError {
    fn from(e: GicError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

const CONFIG_KEYS: &[&str] = &[
    "a", "b", "p1", "p2", "points", "resolution", "mu", "seed", "delta", "rho", "theta", "power", "noise", "layers",
    "out", "format",
];

fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !CONFIG_KEYS.contains(&k) {
            return Err(CliError::Usage(format!("config line {}: unknown key `{k}`", n + 1)));
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(CliError::Usage(format!("config line {}: duplicate key `{k}`", n + 1)));
        }
    }
    Ok(map)
}

fn fill<T: std::str::FromStr>(slot: &mut Option<T>, map: &BTreeMap<String, String>, key: &str) -> CliResult<()> {
    if slot.is_none() {
        if let Some(v) = map.get(key) {
            *slot = Some(v.parse().map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{v}`")))?);
        }
    }
    Ok(())
}

fn merge_config(cli: &mut Cli) -> CliResult<()> {
    let Some(path) = &cli.config else { return Ok(()) };
    let text = std::fs::read_to_string(path)?;
    let map = parse_config(&text)?;
    fill(&mut cli.a, &map, "a")?;
    fill(&mut cli.b, &map, "b")?;
    fill(&mut cli.p1, &map, "p1")?;
    fill(&mut cli.p2, &map, "p2")?;
    fill(&mut cli.points, &map, "points")?;
    fill(&mut cli.resolution, &map, "resolution")?;
    fill(&mut cli.mu, &map, "mu")?;
    fill(&mut cli.seed, &map, "seed")?;
    fill(&mut cli.delta, &map, "delta")?;
    fill(&mut cli.rho, &map, "rho")?;
    fill(&mut cli.theta, &map, "theta")?;
    fill(&mut cli.power, &map, "power")?;
    fill(&mut cli.noise, &map, "noise")?;
    fill(&mut cli.layers, &map, "layers")?;
    fill(&mut cli.out, &map, "out")?;
    if cli.format.is_none() {
        if let Some(v) = map.get("format") {
            cli.format = Some(
                Format::from_str(v, true).map_err(|_| CliError::Usage(format!("config key `format`: unknown `{v}`")))?,
            );
        }
    }
    Ok(())
}

fn required<T: Copy>(v: Option<T>, name: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("missing required value `--{name}`")))
}

fn params(cli: &Cli) -> CliResult<ChannelParams> {
    Ok(ChannelParams::new(required(cli.a, "a")?, required(cli.b, "b")?, required(cli.p1, "p1")?, required(cli.p2, "p2")?)?)
}

fn at_least(v: usize, min: usize, name: &'static str) -> CliResult<usize> {
    if v < min {
        return Err(GicError::Validation { name, value: v as f64, reason: "below the minimum" }.into());
    }
    Ok(v)
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("GIC_REGION_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("GIC_REGION_THREADS must be a non-negative integer, got `{raw}`")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn csv_line(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

/// Support value `max_k (r1 + mu r2)` of the traced lower part, falling
/// back to corner A when the trace is unavailable.
fn trace_reference(p: &ChannelParams, mu: f64) -> f64 {
    match trace_lower_boundary(p, 400) {
        Ok(t) => t.points.iter().map(|q| q.weighted(mu)).fold(f64::NEG_INFINITY, f64::max),
        Err(_) => point_a(p).weighted(mu),
    }
}

fn run(cli: &Cli) -> CliResult<String> {
    match cli.command {
        Command::Trace => {
            let p = params(cli)?;
            let n = at_least(cli.points.unwrap_or(200), 2, "points")?;
            let lower = trace_lower_boundary(&p, n)?;
            let upper = match trace_upper_boundary(&p, n) {
                Ok(u) => Some(u),
                Err(GicError::Regime(r)) => {
                    eprintln!("note: upper part omitted: {r}");
                    None
                }
                Err(e) => return Err(e.into()),
            };
            for r in [Some(&lower), upper.as_ref()].into_iter().flatten().filter_map(|t| t.report.as_ref()) {
                eprintln!("note: {r}");
            }
            match cli.format.unwrap_or(Format::Csv) {
                Format::Json => Ok(json_text(&boundary_json(&lower, upper.as_ref()))),
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_boundary_csv(&mut buf, &lower, upper.as_ref())?;
                    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
                }
            }
        }
        Command::Classify => {
            let p = params(cli)?;
            let split = PowerSplit::new(required(cli.rho, "rho")?, required(cli.theta, "theta")?)?;
            let corners = corner_rates(&p, split);
            let case = classify(&corners);
            let pair = public_rate_pair(&p, split);
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let mut v = serde_json::to_value(corners).expect("corners serialize");
                    v["case_id"] = json!(case.case_id.as_str());
                    v["requires_joint_decoding_y1"] = json!(case.requires_joint_decoding_y1);
                    v["r_u1"] = json!(pair.r_u1);
                    v["r_u2"] = json!(pair.r_u2);
                    Ok(json_text(&v))
                }
                Format::Csv => {
                    let (names, values): (Vec<_>, Vec<_>) = serde_json::to_value(corners)
                        .expect("corners serialize")
                        .as_object()
                        .expect("corners are an object")
                        .iter()
                        .map(|(k, v)| (k.clone(), format_g(v.as_f64().unwrap_or(f64::NAN))))
                        .unzip();
                    let mut header = names;
                    header.push("case_id".into());
                    let mut row = values;
                    row.push(case.case_id.as_str().into());
                    Ok(csv_line(&header) + &csv_line(&row))
                }
            }
        }
        Command::Sumrate => {
            let p = params(cli)?;
            let f = sum_rate_front(&p)?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => Ok(json_text(&json!(f))),
                Format::Csv => Ok(csv_line(&["r_sum".into(), "binding_receiver".into(), "rho_s".into(), "theta_s".into()])
                    + &csv_line(&[
                        format_g(f.r_sum),
                        format!("{:?}", f.binding_receiver),
                        format_g(f.rho_s),
                        format_g(f.theta_s),
                    ])),
            }
        }
        Command::HkCompare => {
            let p = params(cli)?;
            let mu = cli.mu.unwrap_or(0.5);
            let n = at_least(cli.resolution.unwrap_or(21), 2, "resolution")?;
            let step = 1.0 / (n - 1) as f64;
            let mut rows = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    let split = PowerSplit::new(i as f64 * step, j as f64 * step)?;
                    let full = lp_optimize_full(&p, split, mu)?.weighted_sum(mu);
                    let reduced = lp_optimize_reduced(&p, split, mu)?.weighted_sum(mu);
                    rows.push((split, full, reduced));
                }
            }
            let worst = rows
                .iter()
                .fold((0.0f64, rows[0].0), |acc, r| if (r.1 - r.2).abs() > acc.0 { ((r.1 - r.2).abs(), r.0) } else { acc });
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => Ok(json_text(&json!({
                    "mu": mu,
                    "resolution": n,
                    "max_discrepancy": worst.0,
                    "worst_split": worst.1,
                }))),
                Format::Csv => {
                    let mut s = csv_line(&["rho", "theta", "full", "reduced", "discrepancy"].map(String::from));
                    for (split, full, reduced) in &rows {
                        s += &csv_line(&[
                            format_g(split.rho()),
                            format_g(split.theta()),
                            format_g(*full),
                            format_g(*reduced),
                            format_g((full - reduced).abs()),
                        ]);
                    }
                    Ok(s)
                }
            }
        }
        Command::Oracle => {
            let p = params(cli)?;
            let mu = required(cli.mu, "mu")?;
            let n = at_least(cli.resolution.unwrap_or(201), 2, "resolution")?;
            let mut report = grid_oracle(&p, mu, n, trace_reference(&p, mu))?;
            report.seed = cli.seed;
            match cli.format {
                Some(Format::Json) => Ok(json_text(&json!(report))),
                Some(Format::Csv) => Ok(csv_line(
                    &["value", "gap", "rho", "theta", "resolution", "seed"].map(String::from),
                ) + &csv_line(&[
                    format_g(report.best_value),
                    format_g(report.gap_vs_reference),
                    format_g(report.best_split.rho()),
                    format_g(report.best_split.theta()),
                    n.to_string(),
                    report.seed.map(|s| s.to_string()).unwrap_or_default(),
                ])),
                None => Ok(format!(
                    "value={} gap={} argmax=({},{}) seed={}\n",
                    format_g(report.best_value),
                    format_g(report.gap_vs_reference),
                    format_g(report.best_split.rho()),
                    format_g(report.best_split.theta()),
                    report.seed.map(|s| s.to_string()).unwrap_or_else(|| "none".into()),
                )),
            }
        }
        Command::ScsdDemo => {
            let power = required(cli.power, "power")?;
            let noise = cli.noise.unwrap_or(1.0);
            let layers = cli.layers.unwrap_or(2);
            let rates = scsd_layer_rates(power, noise, layers)?;
            let total: f64 = rates.iter().sum();
            let residual = (total - awgn_capacity(power, noise)?).abs();
            match cli.format.unwrap_or(Format::Csv) {
                Format::Json => Ok(json_text(&json!({
                    "layers": rates,
                    "total": total,
                    "capacity": awgn_capacity(power, noise)?,
                    "residual": residual,
                }))),
                Format::Csv => {
                    let mut s = csv_line(&["layer".into(), "rate".into()]);
                    for (l, r) in rates.iter().enumerate() {
                        s += &csv_line(&[(l + 1).to_string(), format_g(*r)]);
                    }
                    s += &csv_line(&["total".into(), format_g(total)]);
                    s += &csv_line(&["residual".into(), format_g(residual)]);
                    Ok(s)
                }
            }
        }
        Command::Keypoints => {
            let p = params(cli)?;
            let k = key_points(&p)?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => Ok(json_text(&json!(k))),
                Format::Csv => {
                    let mut s = csv_line(&["point", "mu", "rho", "theta", "r1", "r2"].map(String::from));
                    for (name, q) in [("A", &k.point_a), ("D1", &k.d1), ("D2", &k.d2), ("D3", &k.d3), ("S", &k.s)] {
                        s += &csv_line(&[
                            name.into(),
                            format_g(q.mu),
                            format_g(q.rho),
                            format_g(q.theta),
                            format_g(q.r1),
                            format_g(q.r2),
                        ]);
                    }
                    Ok(s)
                }
            }
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let mut cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("error code=2 kind=usage message={first}");
            return ExitCode::from(2);
        }
    };
    let result = merge_config(&mut cli)
        .and_then(|_| configure_threads())
        .and_then(|_| run(&cli))
        .and_then(|text| emit(cli.out.as_deref(), &text));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error code={} kind={} message={}", e.code(), e.kind(), e.message().replace('\n', " "));
            ExitCode::from(e.code())
        }
    }
}
