//! The subcommands. Each resolves its parameters, runs the experiment,
//! writes its result directory and reports whether its checks passed.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use serde_json::{json, Value};

use halfspace_core::hyperbolic::generate::{all_trees, farey_ball, random_family};
use halfspace_core::hyperbolic::{
    constants, verify_propositions, FiniteSpace, PropositionReport, VerifyOptions,
    COARSE_HALFSPACE_CONVENTION,
};
use halfspace_core::measure::{
    decay_fit, default_horizon, harmonic_halfspaces, harmonic_sets, mu_n_halfspaces,
    nested_family_from, DecayPoint, HarmonicEstimate,
};
use halfspace_core::schottky::{certify_schottky, free_group_audit, PingPongCertificate};
use halfspace_core::torus::{farey_distance, GroupElement, Slope};
use halfspace_core::walk::{
    audit_paths, delta_nm_exact_with_budget, delta_scan, drift_estimate_with, halfrate_statistic,
    DriftOptions, EstimateRecord, FreeBasis, Metric, StepDistribution, DEFAULT_BUDGET,
    DEFAULT_LEVEL,
};
use halfspace_core::Error;

use crate::config::{parse_list, Params};
use crate::error::{CliError, CliResult};
use crate::output::RunDir;
use crate::plot::{self, Series};
use crate::Common;

pub enum Outcome {
    Passed,
    Violations,
}

impl Outcome {
    fn from_pass(pass: bool) -> Outcome {
        if pass {
            Outcome::Passed
        } else {
            Outcome::Violations
        }
    }
}

fn common_flags(c: &Common) -> Vec<(&'static str, Option<String>)> {
    vec![
        ("out", c.out.clone()),
        ("plot", c.plot.clone()),
        ("seed", c.seed.clone()),
    ]
}

fn resolve(
    command: &'static str,
    common: &Common,
    mut flags: Vec<(&'static str, Option<String>)>,
) -> CliResult<Params> {
    flags.extend(common_flags(common));
    Params::resolve(command, common.config.as_deref(), flags)
}

struct Run {
    params: Params,
    seed: u64,
    plot: bool,
    dir: PathBuf,
}

/// Seed, plot toggle and output directory, which every experiment needs.
/// The seed is mandatory so that no run depends on ambient entropy.
fn start(mut params: Params) -> CliResult<Run> {
    let seed = params.require::<u64>("seed")?;
    let plot = params.get_or("plot", false)?;
    let dir: PathBuf = params
        .get::<String>("out")?
        .unwrap_or_else(|| format!("results/{}", params.command()))
        .into();
    Ok(Run {
        params,
        seed,
        plot,
        dir,
    })
}

impl Run {
    fn open(&self) -> CliResult<RunDir> {
        RunDir::create(&self.dir, &self.params, Some(self.seed))
    }
}

fn config_error(field: &str, message: impl Into<String>) -> CliError {
    CliError::Config {
        field: field.into(),
        message: message.into(),
    }
}

fn distribution(params: &mut Params) -> CliResult<StepDistribution> {
    let text: String = params.get_or("mu", "uniform-LR".to_string())?;
    StepDistribution::parse(&text).map_err(|e| config_error("mu", e.to_string()))
}

/// `farey-displacement`, `reduced-word` (the support of `mu` must be a
/// free basis with inverses) or `word:RADIUS`.
fn metric(params: &mut Params, mu: &StepDistribution) -> CliResult<Metric> {
    let label: String = params.get_or("metric", "farey-displacement".to_string())?;
    match label.as_str() {
        "farey-displacement" => Ok(Metric::FareyDisplacement),
        "reduced-word" => {
            let mut gens: Vec<GroupElement> = Vec::new();
            for (g, _) in mu.atoms() {
                if !gens.contains(g) && !gens.contains(&g.inverse()) {
                    gens.push(g.clone());
                }
            }
            FreeBasis::new(gens)
                .map(Metric::ReducedWord)
                .map_err(|e| config_error("metric", e.to_string()))
        }
        other => match other.strip_prefix("word:").map(str::parse::<usize>) {
            Some(Ok(max_radius)) => Ok(Metric::Word { max_radius }),
            _ => Err(config_error(
                "metric",
                format!("{other:?}: expected farey-displacement, reduced-word or word:RADIUS"),
            )),
        },
    }
}

fn stamp_all<T: Serialize>(out: &RunDir, items: &[T]) -> CliResult<Vec<Value>> {
    items.iter().map(|r| out.stamp(r)).collect()
}

fn fmt_f(x: f64) -> String {
    format!("{x}")
}

// farey-dist

#[derive(Args)]
pub struct FareyDistArgs {
    /// First slope, `p/q` (`1/0` is infinity).
    pub from: Option<String>,
    /// Second slope.
    pub to: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn farey_dist(a: FareyDistArgs) -> CliResult<Outcome> {
    let params = Params::resolve(
        "farey-dist",
        a.config.as_deref(),
        vec![("from", a.from), ("to", a.to)],
    )?;
    let s: Slope = params.require("from")?;
    let t: Slope = params.require("to")?;
    println!("{}", farey_distance(&s, &t));
    Ok(Outcome::Passed)
}

// verify-props

#[derive(Args)]
pub struct VerifyPropsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Directory of edge-list files, one graph per file.
    #[arg(long)]
    pub graphs: Option<String>,
    /// Built-in families, comma separated: `trees:MAX_N`,
    /// `random:COUNT:SEED`, `farey:MAX_DEN`.
    #[arg(long)]
    pub family: Option<String>,
    /// Sampled tuples per proposition on large graphs.
    #[arg(long)]
    pub samples: Option<String>,
    /// Use this δ instead of the computed working δ.
    #[arg(long)]
    pub delta: Option<String>,
}

fn builtin_family(spec: &str) -> CliResult<Vec<(String, FiniteSpace)>> {
    let bad = || {
        config_error(
            "family",
            format!("{spec:?}: expected trees:N, random:COUNT:SEED or farey:DEN"),
        )
    };
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let num = |s: &str| s.parse::<u64>().map_err(|_| bad());
    Ok(match parts.as_slice() {
        ["trees", n] => all_trees(num(n)? as usize)
            .into_iter()
            .enumerate()
            .map(|(i, t)| (format!("tree-{}-{i}", t.len()), t))
            .collect(),
        ["random", count, seed] => random_family(num(count)? as usize, num(seed)?)
            .into_iter()
            .enumerate()
            .map(|(i, g)| (format!("random-{seed}-{i}"), g))
            .collect(),
        ["farey", den] => {
            let den = u32::try_from(num(den)?).map_err(|_| bad())?;
            vec![(format!("farey-{den}"), farey_ball(den).0)]
        }
        _ => return Err(bad()),
    })
}

fn graph_dir(dir: &Path) -> CliResult<Vec<(String, FiniteSpace)>> {
    let read_err = |e: std::io::Error| config_error("graphs", format!("{}: {e}", dir.display()));
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(read_err)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(read_err)?;
    files.retain(|p| p.is_file());
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).map_err(read_err)?;
            let g = FiniteSpace::from_edge_list(&text)
                .map_err(|e| config_error("graphs", format!("{}: {e}", p.display())))?;
            let id = p
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok((id, g))
        })
        .collect()
}

pub fn verify_props(a: VerifyPropsArgs) -> CliResult<Outcome> {
    let mut params = resolve(
        "verify-props",
        &a.common,
        vec![
            ("graphs", a.graphs),
            ("family", a.family),
            ("samples", a.samples),
            ("delta", a.delta),
        ],
    )?;
    let samples = params.get_or("samples", VerifyOptions::default().samples)?;
    let delta: Option<f64> = params.get("delta")?;
    let mut spaces = Vec::new();
    if let Some(dir) = params.get::<String>("graphs")? {
        spaces.extend(graph_dir(Path::new(&dir))?);
    }
    if let Some(fams) = params.get::<String>("family")? {
        for f in fams.split(',').filter(|f| !f.trim().is_empty()) {
            spaces.extend(builtin_family(f)?);
        }
    }
    if spaces.is_empty() {
        return Err(config_error("graphs", "give --graphs or --family"));
    }
    let run = start(params)?;
    let options = VerifyOptions {
        samples,
        seed: run.seed,
        delta,
        ..VerifyOptions::default()
    };
    let reports: Vec<PropositionReport> = spaces
        .iter()
        .flat_map(|(id, g)| verify_propositions(g, id, &options))
        .collect();
    let out = run.open()?;
    out.write_jsonl("propositions.jsonl", &stamp_all(&out, &reports)?)?;
    let rows: Vec<String> = reports
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{}",
                r.space_id,
                r.proposition.label(),
                r.delta,
                r.checked,
                r.violations
            )
        })
        .collect();
    out.write_csv(
        "propositions.csv",
        "space_id,proposition,delta,checked,violations",
        &rows,
    )?;
    let mut tally: Vec<(String, f64)> = Vec::new();
    for r in &reports {
        let label = r.proposition.label().to_string();
        match tally.iter_mut().find(|t| t.0 == label) {
            Some(t) => t.1 += r.violations as f64,
            None => tally.push((label, r.violations as f64)),
        }
    }
    let violations: u64 = reports.iter().map(|r| r.violations).sum();
    out.write_json(
        "summary.json",
        &json!({
            "halfspace_convention": COARSE_HALFSPACE_CONVENTION,
            "spaces": spaces.len(),
            "reports": reports.len(),
            "violations": violations,
            "violations_by_proposition": tally.iter().map(|(k, v)| (k.clone(), json!(*v as u64))).collect::<serde_json::Map<_, _>>(),
        }),
    )?;
    if run.plot {
        plot::bars(
            &out.path("violations.svg"),
            "Violations by proposition",
            "violations",
            &tally,
        )?;
    }
    println!(
        "{} spaces, {} reports, {} violations",
        spaces.len(),
        reports.len(),
        violations
    );
    out.write_metadata(
        &run.params,
        if violations == 0 {
            "passed"
        } else {
            "violations"
        },
    )?;
    Ok(Outcome::from_pass(violations == 0))
}

// drift

#[derive(Args)]
pub struct DriftArgs {
    #[command(flatten)]
    pub common: Common,
    /// Step distribution: `uniform-LR`, `sanov`, `identity` or
    /// `matrix:weight;...`.
    #[arg(long)]
    pub mu: Option<String>,
    /// `farey-displacement`, `reduced-word` or `word:RADIUS`.
    #[arg(long)]
    pub metric: Option<String>,
    #[arg(long)]
    pub steps: Option<String>,
    #[arg(long)]
    pub replicas: Option<String>,
    #[arg(long)]
    pub level: Option<String>,
    /// Steps at which to record the mean rate, e.g. `100,500..510`.
    #[arg(long)]
    pub checkpoints: Option<String>,
    /// Paths for the subadditivity audit (0 skips it).
    #[arg(long)]
    pub audit_paths: Option<String>,
    /// Pairs `n:k` for the audit, comma separated.
    #[arg(long)]
    pub audit_pairs: Option<String>,
}

fn parse_pairs(text: &str) -> CliResult<Vec<(usize, usize)>> {
    text.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let parsed = p
                .split_once(':')
                .and_then(|(n, k)| Some((n.trim().parse().ok()?, k.trim().parse().ok()?)));
            parsed.ok_or_else(|| config_error("audit-pairs", format!("{p:?} is not n:k")))
        })
        .collect()
}

pub fn drift(a: DriftArgs) -> CliResult<Outcome> {
    let mut params = resolve(
        "drift",
        &a.common,
        vec![
            ("mu", a.mu),
            ("metric", a.metric),
            ("steps", a.steps),
            ("replicas", a.replicas),
            ("level", a.level),
            ("checkpoints", a.checkpoints),
            ("audit-paths", a.audit_paths),
            ("audit-pairs", a.audit_pairs),
        ],
    )?;
    let mu = distribution(&mut params)?;
    let metric = metric(&mut params, &mu)?;
    let steps: usize = params.require("steps")?;
    let replicas: usize = params.get_or("replicas", 200)?;
    let level: f64 = params.get_or("level", DEFAULT_LEVEL)?;
    let default_checkpoints = (1..=20)
        .map(|i| (i * steps / 20).max(1))
        .collect::<Vec<_>>();
    let checkpoints = match params.get::<String>("checkpoints")? {
        Some(text) => parse_list("checkpoints", &text)?,
        None => default_checkpoints,
    };
    let audit_count: usize = params.get_or("audit-paths", 0)?;
    let pairs = match params.get::<String>("audit-pairs")? {
        Some(text) => parse_pairs(&text)?,
        None => {
            let h = (steps / 2).max(1);
            vec![
                (1, 1),
                (h / 2, h / 2),
                (h, steps - h),
                (steps / 4, steps / 2),
            ]
            .into_iter()
            .filter(|&(n, k)| n + k <= steps)
            .collect()
        }
    };
    let run = start(params)?;
    let opts = DriftOptions { level, checkpoints };
    let report = drift_estimate_with(&mu, &metric, steps, replicas, run.seed, &opts)?;
    let out = run.open()?;
    let mut records = vec![out.stamp(&report)?];
    let mut pass = true;
    if audit_count > 0 {
        let audit = audit_paths(&mu, &metric, steps, audit_count, &pairs, run.seed)?;
        pass = audit.violations() == 0;
        let mut v = out.stamp(&audit)?;
        v["experiment"] = "subadditivity-audit".into();
        records.push(v);
    }
    out.write_jsonl("drift.jsonl", &records)?;
    out.write_csv(
        "drift.csv",
        EstimateRecord::CSV_HEADER,
        &[report.record.csv_row()],
    )?;
    let curve: Vec<String> = report
        .curve
        .iter()
        .map(|p| format!("{},{},{}", p.step, fmt_f(p.mean_rate), fmt_f(p.stderr)))
        .collect();
    out.write_csv("curve.csv", "step,mean_rate,stderr", &curve)?;
    if run.plot {
        plot::chart(
            &out.path("drift.svg"),
            &format!("Mean |w_n| / n, {}", metric.label()),
            "n",
            "rate",
            &[Series {
                label: format!("{} replicas", replicas),
                points: report
                    .curve
                    .iter()
                    .map(|p| (p.step as f64, p.mean_rate))
                    .collect(),
                errors: Some(report.curve.iter().map(|p| 2.0 * p.stderr).collect()),
                line: true,
            }],
        )?;
    }
    let r = &report.record;
    println!(
        "drift {} = {:.5} ± {:.5}, {}% CI [{:.5}, {:.5}]",
        r.metric,
        r.estimate,
        r.stderr,
        level * 100.0,
        r.ci_low,
        r.ci_high
    );
    out.write_metadata(&run.params, if pass { "passed" } else { "violations" })?;
    Ok(Outcome::from_pass(pass))
}

// halfrate

#[derive(Args)]
pub struct HalfrateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub steps: Option<String>,
    #[arg(long)]
    pub replicas: Option<String>,
}

pub fn halfrate(a: HalfrateArgs) -> CliResult<Outcome> {
    let mut params = resolve(
        "halfrate",
        &a.common,
        vec![("steps", a.steps), ("replicas", a.replicas)],
    )?;
    let steps: usize = params.get_or("steps", 100_000)?;
    let replicas: usize = params.get_or("replicas", 1)?;
    let run = start(params)?;
    let report = halfrate_statistic(steps, replicas, run.seed)?;
    let out = run.open()?;
    out.write_jsonl("halfrate.jsonl", &[out.stamp(&report)?])?;
    out.write_csv(
        "halfrate.csv",
        "experiment,n,replicas,seed,changes,comparisons,frequency,stderr",
        &[format!(
            "{},{},{},{},{},{},{},{}",
            report.experiment,
            report.n,
            report.replicas,
            report.seed,
            report.changes,
            report.comparisons,
            fmt_f(report.frequency),
            fmt_f(report.stderr)
        )],
    )?;
    println!(
        "turn-change frequency {:.5} ± {:.5}",
        report.frequency, report.stderr
    );
    out.write_metadata(&run.params, "passed")?;
    Ok(Outcome::Passed)
}

// delta-nm

#[derive(Args)]
pub struct DeltaNmArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    /// Values of m: `1..40` or `1,2,5`.
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long)]
    pub replicas: Option<String>,
    #[arg(long)]
    pub level: Option<String>,
    /// Also compute each value exactly (`true` or `false`).
    #[arg(long)]
    pub exact: Option<String>,
    /// Largest number of products the exact computation may enumerate.
    #[arg(long)]
    pub budget: Option<String>,
}

pub fn delta_nm(a: DeltaNmArgs) -> CliResult<Outcome> {
    let mut params = resolve(
        "delta-nm",
        &a.common,
        vec![
            ("mu", a.mu),
            ("n", a.n),
            ("m", a.m),
            ("replicas", a.replicas),
            ("level", a.level),
            ("exact", a.exact),
            ("budget", a.budget),
        ],
    )?;
    let mu = distribution(&mut params)?;
    let n: usize = params.require("n")?;
    let ms = parse_list("m", &params.require::<String>("m")?)?;
    if ms.is_empty() {
        return Err(config_error("m", "no values"));
    }
    let replicas: usize = params.get_or("replicas", 4000)?;
    let level: f64 = params.get_or("level", DEFAULT_LEVEL)?;
    let exact: bool = params.get_or("exact", false)?;
    let budget: u128 = params.get_or("budget", DEFAULT_BUDGET)?;
    let run = start(params)?;
    let exact_values = if exact {
        ms.iter()
            .map(|&m| delta_nm_exact_with_budget(&mu, n, m, budget).map(Some))
            .collect::<Result<Vec<_>, Error>>()?
    } else {
        vec![None; ms.len()]
    };
    let scan = delta_scan(&mu, n, &ms, replicas, run.seed, level)?;
    let out = run.open()?;
    let mut records = Vec::new();
    let mut rows = Vec::new();
    let mut agree = true;
    for (p, ex) in scan.points.iter().zip(&exact_values) {
        let mut v = out.stamp(p)?;
        let mut row = p.csv_row();
        if let Some(q) = ex {
            let x = num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN);
            let within = (p.estimate - x).abs() <= 3.0 * p.stderr;
            agree &= within;
            v["exact"] = q.to_string().into();
            v["exact_value"] = x.into();
            v["within_3se"] = within.into();
            row.push_str(&format!(",{q},{}", within));
        } else {
            row.push_str(",,");
        }
        records.push(v);
        rows.push(row);
    }
    let mut summary = out.stamp(&json!({
        "experiment": "delta-scan",
        "n": scan.n,
        "level": scan.level,
        "onset": scan.onset,
        "delta0": scan.delta0,
    }))?;
    summary["replicas"] = replicas.into();
    records.push(summary);
    out.write_jsonl("delta.jsonl", &records)?;
    out.write_csv(
        "delta.csv",
        &format!("{},exact,within_3se", EstimateRecord::CSV_HEADER),
        &rows,
    )?;
    if run.plot {
        let mut series = vec![Series {
            label: "Monte Carlo".into(),
            points: scan
                .points
                .iter()
                .map(|p| (p.m.unwrap_or(0) as f64, p.estimate))
                .collect(),
            errors: Some(scan.points.iter().map(|p| 3.0 * p.stderr).collect()),
            line: false,
        }];
        if exact {
            series.push(Series {
                label: "exact".into(),
                points: ms
                    .iter()
                    .zip(&exact_values)
                    .filter_map(|(&m, q)| {
                        Some((m as f64, num_traits::ToPrimitive::to_f64(q.as_ref()?)?))
                    })
                    .collect(),
                errors: None,
                line: true,
            });
        }
        plot::chart(
            &out.path("delta.svg"),
            &format!("Delta(n = {n}, m)"),
            "m",
            "Delta",
            &series,
        )?;
    }
    match (scan.onset, scan.delta0) {
        (Some(m0), Some(d0)) => println!("onset m = {m0}, delta0 = {d0:.5}"),
        _ => println!("no onset found"),
    }
    out.write_metadata(&run.params, if agree { "passed" } else { "violations" })?;
    Ok(Outcome::from_pass(agree))
}

// decay

#[derive(Args)]
pub struct DecayArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub mu: Option<String>,
    /// Hyperbolic element whose powers centre the halfspaces.
    #[arg(long)]
    pub direction: Option<String>,
    /// Least gap between consecutive centre lengths. Defaults to
    /// `2 K8 + K6` at the given δ.
    #[arg(long)]
    pub spacing: Option<String>,
    /// δ for the default spacing.
    #[arg(long)]
    pub delta: Option<String>,
    /// Number of halfspaces.
    #[arg(long)]
    pub count: Option<String>,
    /// Least relative length of the first centre.
    #[arg(long)]
    pub min_length: Option<String>,
    /// Horizon N of the harmonic proxy (2N is the comparison horizon).
    #[arg(long)]
    pub horizon: Option<String>,
    #[arg(long)]
    pub replicas: Option<String>,
    /// Walk lengths n at which `mu^(n)(H)` is compared with the fit.
    #[arg(long)]
    pub steps: Option<String>,
}

pub fn decay(a: DecayArgs) -> CliResult<Outcome> {
    let mut params = resolve(
        "decay",
        &a.common,
        vec![
            ("mu", a.mu),
            ("direction", a.direction),
            ("spacing", a.spacing),
            ("delta", a.delta),
            ("count", a.count),
            ("min-length", a.min_length),
            ("horizon", a.horizon),
            ("replicas", a.replicas),
            ("steps", a.steps),
        ],
    )?;
    let mu = distribution(&mut params)?;
    let direction: GroupElement =
        params.get_or("direction", GroupElement::from_i64([[2, 1], [1, 1]]))?;
    let spacing: u64 = match params.get("spacing")? {
        Some(s) => s,
        None => {
            let delta: f64 = params.get_or("delta", 1.0)?;
            let k =
                constants(delta, Some(0.0), 1).map_err(|e| config_error("delta", e.to_string()))?;
            let s = (2.0 * k.k8.unwrap_or(k.k5) + k.k6).ceil() as u64;
            params.get_or("spacing", s)?
        }
    };
    let count: usize = params.get_or("count", 6)?;
    let min_length: u64 = params.get_or("min-length", 2)?;
    let family = nested_family_from(&direction, spacing, count, min_length)
        .map_err(|e| config_error("direction", e.to_string()))?;
    let r_max = family.relative_lengths.iter().copied().max().unwrap_or(1);
    let horizon: usize = params.get_or("horizon", default_horizon(r_max))?;
    let replicas: usize = params.get_or("replicas", 20_000)?;
    let steps = parse_list("steps", &params.get_or("steps", "10,20,40".to_string())?)?;
    let run = start(params)?;
    let hs = family.halfspaces();
    let harmonic: Vec<HarmonicEstimate> =
        harmonic_halfspaces(&mu, &hs, horizon, replicas, run.seed)?;
    let points: Vec<DecayPoint> = family
        .relative_lengths
        .iter()
        .zip(&harmonic)
        .map(|(&r, h)| DecayPoint {
            r: r as f64,
            estimate: h.at_horizon.estimate,
            stderr: h.at_horizon.stderr,
            trials: Some(h.at_horizon.trials),
        })
        .collect();
    let stable = harmonic.iter().all(|h| h.stable);
    let out = run.open()?;
    let mut records = Vec::new();
    for ((h, &r), &c) in harmonic
        .iter()
        .zip(&family.relative_lengths)
        .zip(&family.exponents)
    {
        let mut v = out.stamp(h)?;
        v["experiment"] = "harmonic".into();
        v["r"] = r.into();
        v["exponent"] = c.into();
        v["replicas"] = replicas.into();
        records.push(v);
    }
    let fit = decay_fit(&points);
    let mut pass = stable;
    let mut rows = Vec::new();
    match &fit {
        Ok(rep) => {
            pass &= rep.slope_ci_high < 0.0;
            let mut v = out.stamp(rep)?;
            v["experiment"] = "decay-fit".into();
            records.push(v);
            for (k, &n) in steps.iter().enumerate() {
                let est = mu_n_halfspaces(
                    &mu,
                    n,
                    &hs,
                    replicas,
                    halfspace_core::seed::child_seed(run.seed, k as u64 + 1),
                )?;
                for (p, &r) in est.iter().zip(&family.relative_lengths) {
                    let bound = rep.bound(r as f64);
                    let within = p.estimate <= bound + 3.0 * p.stderr;
                    pass &= within;
                    let mut v = out.stamp(p)?;
                    v["experiment"] = "mu-n-halfspace".into();
                    v["n"] = n.into();
                    v["r"] = r.into();
                    v["bound"] = bound.into();
                    v["within"] = within.into();
                    records.push(v);
                    rows.push(format!(
                        "mu-n,{n},{r},{},{},{},{within}",
                        fmt_f(p.estimate),
                        fmt_f(p.stderr),
                        fmt_f(bound)
                    ));
                }
            }
        }
        Err(e) => {
            pass = false;
            let mut v = out.stamp(&json!({ "experiment": "decay-fit", "error": e.to_string() }))?;
            v["replicas"] = replicas.into();
            records.push(v);
        }
    }
    let mut harmonic_rows: Vec<String> = points
        .iter()
        .zip(&harmonic)
        .map(|(p, h)| {
            format!(
                "harmonic,{horizon},{},{},{},,{}",
                p.r,
                fmt_f(p.estimate),
                fmt_f(p.stderr),
                h.stable
            )
        })
        .collect();
    harmonic_rows.extend(rows);
    out.write_jsonl("decay.jsonl", &records)?;
    out.write_csv(
        "decay.csv",
        "kind,n,r,estimate,stderr,bound,ok",
        &harmonic_rows,
    )?;
    if run.plot {
        let positive: Vec<&DecayPoint> = points.iter().filter(|p| p.estimate > 0.0).collect();
        let mut series = vec![Series {
            label: format!("ln nu, N = {horizon}"),
            points: positive.iter().map(|p| (p.r, p.estimate.ln())).collect(),
            errors: Some(
                positive
                    .iter()
                    .map(|p| 2.0 * p.stderr / p.estimate)
                    .collect(),
            ),
            line: false,
        }];
        if let Ok(rep) = &fit {
            series.push(Series {
                label: format!("fit, L = {:.3}", rep.l_hat),
                points: points
                    .iter()
                    .map(|p| (p.r, rep.fit.intercept + rep.fit.slope * p.r))
                    .collect(),
                errors: None,
                line: true,
            });
        }
        plot::chart(
            &out.path("decay.svg"),
            "Halfspace decay",
            "r",
            "ln nu",
            &series,
        )?;
    }
    match &fit {
        Ok(rep) => println!(
            "L = {:.4}, Q = {:.4}, slope CI [{:.4}, {:.4}], stable = {stable}",
            rep.l_hat, rep.q_hat, rep.slope_ci_low, rep.slope_ci_high
        ),
        Err(e) => println!("no fit: {e}"),
    }
    out.write_metadata(&run.params, if pass { "passed" } else { "violations" })?;
    Ok(Outcome::from_pass(pass))
}

// schottky-certify

#[derive(Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub max_power: Option<String>,
    /// Longest reduced word in the free-group audit.
    #[arg(long)]
    pub audit_length: Option<String>,
    /// Step distribution for the region measures.
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub horizon: Option<String>,
    #[arg(long)]
    pub replicas: Option<String>,
}

pub fn schottky_certify(a: CertifyArgs) -> CliResult<Outcome> {
    let mut params = resolve(
        "schottky-certify",
        &a.common,
        vec![
            ("a", a.a),
            ("b", a.b),
            ("max-power", a.max_power),
            ("audit-length", a.audit_length),
            ("mu", a.mu),
            ("horizon", a.horizon),
            ("replicas", a.replicas),
        ],
    )?;
    let ga: GroupElement = params.get_or("a", GroupElement::from_i64([[2, 1], [1, 1]]))?;
    let gb: GroupElement = params.get_or("b", GroupElement::from_i64([[1, 1], [1, 2]]))?;
    let max_power: u32 = params.get_or("max-power", 10)?;
    let audit_length: usize = params.get_or("audit-length", 6)?;
    let mu = distribution(&mut params)?;
    let horizon: usize = params.get_or("horizon", 200)?;
    let replicas: usize = params.get_or("replicas", 20_000)?;
    let run = start(params)?;
    let search = certify_schottky(&ga, &gb, max_power)?;
    let out = run.open()?;
    let transcript = stamp_all(&out, &search.transcript)?;
    out.write_jsonl("transcript.jsonl", &transcript)?;
    let Some(cert) = search.certificate else {
        println!(
            "no certificate with powers up to {max_power} ({} candidates)",
            search.transcript.len()
        );
        out.write_metadata(&run.params, "violations")?;
        return Ok(Outcome::Violations);
    };
    out.write_json("certificate.json", &cert)?;
    let audit = free_group_audit(&cert, audit_length);
    let regions: Vec<_> = cert
        .intervals
        .iter()
        .map(|iv| move |g: &GroupElement| iv.contains_slope(&g.basepoint_image()))
        .collect();
    let nu = harmonic_sets(&mu, &regions, horizon, replicas, run.seed)?;
    let names = ["A+", "A-", "B+", "B-"];
    let positive = nu.iter().all(|h| h.at_horizon.hits > 0);
    let pass = cert.verify().valid() && audit.passed() && positive;
    let mut records = vec![
        {
            let mut v = out.stamp(&cert)?;
            v["experiment"] = "certificate".into();
            v["candidates_rejected"] = (search.transcript.len().saturating_sub(1)).into();
            v
        },
        {
            let mut v = out.stamp(&audit)?;
            v["experiment"] = "free-group-audit".into();
            v
        },
    ];
    let mut rows = Vec::new();
    for (name, h) in names.iter().zip(&nu) {
        let mut v = out.stamp(h)?;
        v["experiment"] = "region-measure".into();
        v["region"] = (*name).into();
        v["replicas"] = replicas.into();
        records.push(v);
        rows.push(format!(
            "{name},{horizon},{},{},{},{}",
            h.at_horizon.hits,
            h.at_horizon.trials,
            fmt_f(h.at_horizon.estimate),
            fmt_f(h.at_horizon.stderr)
        ));
    }
    out.write_jsonl("schottky.jsonl", &records)?;
    out.write_csv(
        "regions.csv",
        "region,horizon,hits,trials,estimate,stderr",
        &rows,
    )?;
    println!(
        "certificate p = {}, q = {}; audit {} words, {}; regions {}",
        cert.p,
        cert.q,
        audit.words_by_length.iter().sum::<u64>(),
        if audit.passed() { "passed" } else { "failed" },
        nu.iter()
            .map(|h| format!("{:.4}", h.at_horizon.estimate))
            .collect::<Vec<_>>()
            .join(" ")
    );
    out.write_metadata(&run.params, if pass { "passed" } else { "violations" })?;
    Ok(Outcome::from_pass(pass))
}

// schottky-verify

#[derive(Args)]
pub struct VerifyCertArgs {
    /// Certificate JSON written by `schottky-certify`.
    pub certificate: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Also run the free-group audit up to this word length.
    #[arg(long)]
    pub audit_length: Option<String>,
}

pub fn schottky_verify(a: VerifyCertArgs) -> CliResult<Outcome> {
    let mut params = Params::resolve(
        "schottky-verify",
        a.config.as_deref(),
        vec![
            ("certificate", a.certificate),
            ("audit-length", a.audit_length),
        ],
    )?;
    let path: String = params.require("certificate")?;
    let audit_length: usize = params.get_or("audit-length", 0)?;
    let text = std::fs::read_to_string(&path)
        .map_err(|e| config_error("certificate", format!("{path}: {e}")))?;
    let cert: PingPongCertificate = serde_json::from_str(&text)
        .map_err(|e| config_error("certificate", format!("{path}: {e}")))?;
    let check = cert.verify();
    let mut pass = check.valid();
    let mut report = json!({ "valid": pass, "check": check });
    if audit_length > 0 {
        let audit = free_group_audit(&cert, audit_length);
        pass &= audit.passed();
        report["audit"] = serde_json::to_value(&audit)?;
    }
    println!("{}", serde_json::to_string(&report)?);
    Ok(Outcome::from_pass(pass))
}
