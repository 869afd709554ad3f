use std::fmt;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use testsched_core::algorithms::AlgorithmSpec;
use testsched_core::analysis::{
    betasort_lower_bound, minimize_theorem1, optimize_sidle, sidle_ratio_bound, stress_instances,
    verify_campaign, AnalysisParams, VerifySummary,
};
use testsched_core::delay::optimal_objective;
use testsched_core::instances::{adversary_run, instance_ratio, load_instance, write_instance};
use testsched_core::numeric::delay_ratio;
use testsched_core::{Family, Instance, RatioCheck};

use crate::args::{
    AlgArgs, AlgName, BoundsArgs, FamilyArgs, Format, GenerateArgs, OutputArgs, RatioArgs, RunArgs,
    SweepArgs, SweepVar, VerifyArgs,
};
use crate::table::{num, sink, text, write_json, Table};

/// Bad command-line configuration, reported with the usage exit code.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

/// Whether a command completed with all checks satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
}

const DEFAULT_ADVERSARY_N: usize = 1000;

impl AlgArgs {
    fn spec(&self) -> Result<AlgorithmSpec> {
        let spec = match self.alg {
            AlgName::BetaSort => AlgorithmSpec::BetaSort {
                beta: self.beta.unwrap_or(1.0),
            },
            AlgName::Sidle => AlgorithmSpec::Sidle {
                threshold: match self.y {
                    Some(y) => y,
                    None => optimize_sidle()?.y_root,
                },
            },
            AlgName::TestAllSpt => AlgorithmSpec::TestAllThenSpt,
            AlgName::Immediate => AlgorithmSpec::ImmediateInOrder,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Where the jobs of a run come from.
#[derive(Debug, Clone)]
enum Source {
    File(String, Instance),
    Family(Family),
    Adversary { n: usize, gamma: f64 },
}

impl Source {
    fn label(&self) -> String {
        match self {
            Source::File(path, _) => path.clone(),
            Source::Family(f) => f.to_string(),
            Source::Adversary { n, gamma } => format!("adversary(n={n}, gamma={gamma})"),
        }
    }

    fn ratio(&self, alg: AlgorithmSpec) -> Result<RatioCheck> {
        Ok(match self {
            Source::File(_, inst) => instance_ratio(inst, alg)?,
            Source::Family(f) => instance_ratio(&f.generate()?, alg)?,
            Source::Adversary { n, gamma } => adversary_run(alg, *n, *gamma)?,
        })
    }
}

fn read_file(path: &Path) -> Result<Instance> {
    load_instance(path).map_err(|e| Usage(format!("{}: {e}", path.display())).into())
}

/// Key-value settings for `name`, merging `--param` pairs with the dedicated
/// flags and any `extra` pairs the caller forwards.
fn settings(args: &FamilyArgs, extra: &[(&str, String)]) -> Result<Vec<(String, String)>> {
    let mut out = args.params.clone();
    let flags = [
        ("n", args.n.map(|v| v.to_string())),
        ("gamma", args.gamma.map(|v| v.to_string())),
        ("seed", args.seed.map(|v| v.to_string())),
    ];
    for (key, value) in flags.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))) {
        out.push((key.to_string(), value));
    }
    for (i, (k, _)) in out.iter().enumerate() {
        if out[..i].iter().any(|(prev, _)| prev == k) {
            return usage(format!("parameter `{k}` given more than once"));
        }
    }
    for (key, value) in extra {
        if !out.iter().any(|(k, _)| k == key) {
            out.push((key.to_string(), value.clone()));
        }
    }
    Ok(out)
}

/// Pairs forwarded from the algorithm flags to families that take the same
/// parameter.
fn forwarded(name: &str, beta: Option<f64>, y: Option<f64>) -> Vec<(&'static str, String)> {
    match (name, beta, y) {
        ("beta-lb-small" | "beta-lb-large", Some(b), _) => vec![("beta", b.to_string())],
        ("sidle-tight", _, Some(y)) => vec![("y", y.to_string())],
        _ => Vec::new(),
    }
}

fn adversary(pairs: &[(String, String)]) -> Result<Source> {
    let mut n = DEFAULT_ADVERSARY_N;
    let mut gamma = 2f64.sqrt() - 1.0;
    for (k, v) in pairs {
        match k.as_str() {
            "n" => {
                n = v
                    .parse()
                    .map_err(|_| Usage(format!("n: cannot parse `{v}`")))?
            }
            "gamma" => {
                gamma = v
                    .parse()
                    .map_err(|_| Usage(format!("gamma: cannot parse `{v}`")))?
            }
            other => return usage(format!("unknown parameter `{other}` for the adversary")),
        }
    }
    if n == 0 {
        return usage("the adversary needs n >= 1");
    }
    Ok(Source::Adversary { n, gamma })
}

fn family_source(
    name: &str,
    args: &FamilyArgs,
    extra: &[(&str, String)],
    allow_adversary: bool,
) -> Result<Source> {
    let pairs = settings(args, extra)?;
    if name == "adversary" {
        if !allow_adversary {
            return usage("the adversary is only available to `ratio` and `sweep --over gamma`");
        }
        return adversary(&pairs);
    }
    Ok(Source::Family(Family::from_settings(name, &pairs)?))
}

fn source(
    instance: Option<&Path>,
    args: &FamilyArgs,
    alg: &AlgArgs,
    allow_adversary: bool,
) -> Result<Source> {
    match (instance, &args.family) {
        (Some(path), None) => {
            if !args.params.is_empty()
                || args.n.is_some()
                || args.gamma.is_some()
                || args.seed.is_some()
            {
                return usage("--param, --n, --gamma and --seed apply to --family only");
            }
            Ok(Source::File(path.display().to_string(), read_file(path)?))
        }
        (None, Some(name)) => family_source(
            name,
            args,
            &forwarded(name, alg.beta, alg.y),
            allow_adversary,
        ),
        _ => usage("give exactly one of --instance and --family"),
    }
}

fn emit(table: &Table, output: &OutputArgs, single: bool, default: Format) -> Result<()> {
    let out = sink(output.out.as_deref())?;
    match output.format.unwrap_or(default) {
        Format::Csv => table.write_csv(out),
        Format::Json => {
            let value = table.to_json();
            let value = if single { value[0].clone() } else { value };
            write_json(&value, out)
        }
    }
}

pub fn run(args: &RunArgs) -> Result<Status> {
    let alg = args.alg.spec()?;
    let src = source(args.instance.as_deref(), &args.family, &args.alg, false)?;
    let instance = match &src {
        Source::File(_, inst) => inst.clone(),
        Source::Family(f) => f.generate()?,
        Source::Adversary { .. } => unreachable!("run does not accept the adversary"),
    };
    let schedule = alg.run(&instance)?;
    let (a, o) = (schedule.objective(), optimal_objective(&instance));
    if let Some(path) = &args.trace {
        schedule
            .write_csv(sink(Some(path))?)
            .context("writing the schedule trace")?;
    }
    let mut t = Table::new(&[
        "algorithm",
        "source",
        "n",
        "alg_objective",
        "opt_objective",
        "ratio",
        "makespan",
    ]);
    t.push(vec![
        text(alg.to_string()),
        text(src.label()),
        json!(instance.len()),
        num(a),
        num(o),
        num(delay_ratio(a, o)),
        num(schedule.makespan()),
    ]);
    emit(&t, &args.output, true, Format::Csv)?;
    Ok(Status::Ok)
}

pub fn ratio(args: &RatioArgs) -> Result<Status> {
    let alg = args.alg.spec()?;
    let src = source(args.instance.as_deref(), &args.family, &args.alg, true)?;
    let r = src.ratio(alg)?;
    let mut t = Table::new(&["algorithm", "source", "alg", "opt", "ratio"]);
    t.push(vec![
        text(alg.to_string()),
        text(src.label()),
        num(r.alg),
        num(r.opt),
        num(r.ratio),
    ]);
    emit(&t, &args.output, true, Format::Csv)?;
    Ok(Status::Ok)
}

/// Grid `from, from + step, ..., <= to`, with points rounded to 12 decimals
/// so that the printed values are the intended ones.
pub fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) {
        return usage("sweep bounds must be finite");
    }
    if step <= 0.0 {
        return usage(format!("sweep step must be positive, got {step}"));
    }
    if to < from {
        return usage(format!("sweep range is empty: {from} > {to}"));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return usage(format!("sweep has {count} points; the limit is 1000000"));
    }
    Ok((0..count)
        .map(|i| ((from + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

pub fn sweep(args: &SweepArgs) -> Result<Status> {
    let (from, to) = match args.over {
        SweepVar::Beta => (0.5, 2.0),
        SweepVar::Y => (0.25, 4.0),
        SweepVar::Gamma => (0.0, 1.0),
    };
    let points = grid(
        args.from.unwrap_or(from),
        args.to.unwrap_or(to),
        args.step.unwrap_or(0.05),
    )?;
    let table = match args.over {
        SweepVar::Beta => sweep_beta(args, &points)?,
        SweepVar::Y => sweep_y(args, &points)?,
        SweepVar::Gamma => sweep_gamma(args, &points)?,
    };
    emit(&table, &args.output, false, Format::Csv)?;
    Ok(Status::Ok)
}

fn sweep_beta(args: &SweepArgs, points: &[f64]) -> Result<Table> {
    if args.alg.beta.is_some() {
        return usage("--beta is the swept variable; use --from/--to/--step");
    }
    let rows = points
        .par_iter()
        .map(|&beta| -> Result<Vec<Value>> {
            let lb = betasort_lower_bound(beta)?;
            let name = args.family.family.clone().unwrap_or_else(|| {
                if beta <= 1.0 {
                    "beta-lb-small"
                } else {
                    "beta-lb-large"
                }
                .to_string()
            });
            let src = family_source(&name, &args.family, &[("beta", beta.to_string())], false)?;
            let r = src.ratio(AlgorithmSpec::BetaSort { beta })?;
            Ok(vec![
                num(beta),
                num(lb.gamma_star),
                num(lb.ratio),
                text(src.label()),
                num(r.ratio),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&["beta", "gamma_star", "lower_bound", "family", "measured"]);
    t.extend(rows);
    Ok(t)
}

fn sweep_y(args: &SweepArgs, points: &[f64]) -> Result<Table> {
    if args.alg.y.is_some() {
        return usage("--y is the swept variable; use --from/--to/--step");
    }
    if args
        .family
        .family
        .as_deref()
        .is_some_and(|f| f != "sidle-tight")
    {
        return usage("the y sweep measures on the sidle-tight family only");
    }
    if args.family.gamma.is_some() {
        return usage("the y sweep uses the worst-case gamma of each point");
    }
    let rows = points
        .par_iter()
        .map(|&y| -> Result<Vec<Value>> {
            let w = sidle_ratio_bound(y)?;
            let extra = [
                ("y", y.to_string()),
                ("alpha", w.alpha.to_string()),
                ("gamma", w.gamma.to_string()),
            ];
            let src = family_source("sidle-tight", &args.family, &extra, false)?;
            let r = src.ratio(AlgorithmSpec::Sidle { threshold: y })?;
            Ok(vec![
                num(y),
                num(w.rho),
                num(w.alpha),
                num(w.gamma),
                text(src.label()),
                num(r.ratio),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&["y", "rho", "alpha", "gamma", "family", "measured"]);
    t.extend(rows);
    Ok(t)
}

fn sweep_gamma(args: &SweepArgs, points: &[f64]) -> Result<Table> {
    if args.family.gamma.is_some() {
        return usage("--gamma is the swept variable; use --from/--to/--step");
    }
    let alg = args.alg.spec()?;
    let name = args
        .family
        .family
        .clone()
        .unwrap_or_else(|| "beta-lb-small".to_string());
    let fixed = forwarded(&name, args.alg.beta, args.alg.y);
    let rows = points
        .par_iter()
        .map(|&gamma| -> Result<Vec<Value>> {
            let mut extra = fixed.clone();
            extra.push(("gamma", gamma.to_string()));
            let src = family_source(&name, &args.family, &extra, true)?;
            let r = src.ratio(alg)?;
            Ok(vec![
                num(gamma),
                text(alg.to_string()),
                text(src.label()),
                num(r.alg),
                num(r.opt),
                num(r.ratio),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&["gamma", "algorithm", "family", "alg", "opt", "ratio"]);
    t.extend(rows);
    Ok(t)
}

pub fn verify(args: &VerifyArgs) -> Result<Status> {
    let params = match (args.mu, args.nu) {
        (Some(mu), Some(nu)) => AnalysisParams::new(mu, nu)?,
        _ => {
            minimize_theorem1()?;
            AnalysisParams::corollary()
        }
    };
    let no_alg = AlgArgs {
        alg: AlgName::BetaSort,
        beta: None,
        y: None,
    };
    let (label, seed, instances) = if args.instance.is_some() || args.family.family.is_some() {
        let src = source(args.instance.as_deref(), &args.family, &no_alg, false)?;
        let inst = match &src {
            Source::File(_, inst) => inst.clone(),
            Source::Family(f) => f.generate()?,
            Source::Adversary { .. } => unreachable!("verify does not accept the adversary"),
        };
        (src.label(), None, vec![(src.label(), inst)])
    } else {
        if !args.family.params.is_empty() || args.family.n.is_some() || args.family.gamma.is_some()
        {
            return usage("--param, --n and --gamma need --family");
        }
        if args.max_n < 2 {
            return usage("--max-n must be at least 2");
        }
        let seed = args.family.seed.unwrap_or(0);
        let instances = stress_instances(args.count, seed, args.max_n)?;
        (
            format!(
                "stress campaign (count={}, max_n={})",
                args.count, args.max_n
            ),
            Some(seed),
            instances,
        )
    };
    let summary = verify_campaign(&instances, params)?;
    let status = if summary.passed() {
        Status::Ok
    } else {
        Status::VerificationFailed
    };
    let out = sink(args.output.out.as_deref())?;
    match args.output.format.unwrap_or(Format::Json) {
        Format::Json => write_json(&verify_report(&summary, &label, seed)?, out)?,
        Format::Csv => verify_table(&summary).write_csv(out)?,
    }
    if status == Status::VerificationFailed {
        log::error!("{} violations found", summary.violation_count());
    }
    Ok(status)
}

/// The JSON verification report described by `schema/verify-report.schema.json`.
pub fn verify_report(summary: &VerifySummary, source: &str, seed: Option<u64>) -> Result<Value> {
    let mut report = Map::new();
    report.insert("passed".into(), json!(summary.passed()));
    report.insert("source".into(), json!(source));
    report.insert("seed".into(), json!(seed));
    report.insert("violations".into(), json!(summary.violation_count()));
    match serde_json::to_value(summary)? {
        Value::Object(fields) => report.extend(fields),
        other => bail!("summary serialised to {other}"),
    }
    Ok(Value::Object(report))
}

fn verify_table(summary: &VerifySummary) -> Table {
    let opt = |x: Option<f64>| x.map_or(Value::Null, num);
    let mut t = Table::new(&["check", "checked", "violations", "worst_ratio"]);
    for l in &summary.lemmas {
        t.push(vec![
            text(l.name),
            json!(l.checked),
            json!(l.violations),
            opt(l.worst_ratio),
        ]);
    }
    let c = &summary.charging;
    t.push(vec![
        text("charging"),
        json!(c.groups),
        json!(c.violations),
        opt(c.worst_group_ratio),
    ]);
    t.push(vec![
        text("one-sort"),
        json!(summary.instances),
        json!(0),
        opt(summary.worst_ratio),
    ]);
    t
}

pub fn generate(args: &GenerateArgs) -> Result<Status> {
    let Some(name) = &args.family.family else {
        return usage("generate needs --family");
    };
    let src = family_source(
        name,
        &args.family,
        &forwarded(name, args.beta, args.y),
        false,
    )?;
    let Source::Family(f) = src else {
        unreachable!("adversary rejected above")
    };
    write_instance(&f.generate()?, sink(args.out.as_deref())?)?;
    Ok(Status::Ok)
}

pub fn bounds(args: &BoundsArgs) -> Result<Status> {
    let (mu, nu, rho) = minimize_theorem1()?;
    let s = optimize_sidle()?;
    let w = sidle_ratio_bound(s.y_root)?;
    let mut t = Table::new(&["quantity", "value"]);
    for (name, value) in [
        ("mu0", mu),
        ("nu0", nu),
        ("one_sort_ratio", rho),
        ("y0", s.y_root),
        ("sidle_ratio", s.rho_closed),
        ("sidle_worst_alpha", w.alpha),
        ("sidle_worst_gamma", w.gamma),
    ] {
        t.push(vec![text(name), num(value)]);
    }
    emit(&t, &args.output, false, Format::Csv)?;
    Ok(Status::Ok)
}
