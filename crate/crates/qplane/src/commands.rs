use std::path::Path;

use rayon::prelude::*;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use qplane_core::counting::{self, PairClass};
use qplane_core::geometry::{self, PointSet, SetSpec};
use qplane_core::groups::{enumerate_o2, enumerate_so2};
use qplane_core::oracle::{self, Mismatch};
use qplane_core::verify::{self, Check, ProbeRow, Subject, Thresholds, VerificationReport};
use qplane_core::{fourier, FieldCtx, FieldElement, Limits};

use crate::cli::{Cli, Command, FieldArgs, OutArgs, Quantity, SetArgs};
use crate::config::{self, ExperimentConfig, ExperimentTask};
use crate::error::{CliError, CliResult};
use crate::output::{self, Format};

pub fn run(cli: Cli) -> CliResult<()> {
    let limits = config::resolve_limits(cli.limits.as_deref())?;
    match cli.command {
        Command::FieldInfo { field, out } => field_info(&field, &out, &limits),
        Command::GroupInfo { field, list, out } => group_info(&field, list, &out, &limits),
        Command::Fourier { field, set, out } => fourier_table(&field, &set, &out, &limits),
        Command::Compute {
            quantity,
            field,
            set,
            l2,
            lambda,
            r,
            class,
            theta,
            out,
        } => {
            let opts = ComputeOpts {
                l2,
                lambda,
                r,
                class,
                theta,
            };
            compute(quantity, &field, &set, &opts, &out, &limits)
        }
        Command::Verify {
            field,
            set,
            checks,
            trials,
            thresholds,
            workers,
            out,
        } => {
            let thresholds = config::load_thresholds(&thresholds)?;
            let checks = Check::parse_list(&checks).map_err(|e| CliError::usage(e.to_string()))?;
            verify_cmd(&field, &set, &checks, trials, &thresholds, workers, &out, &limits)
        }
        Command::OracleDiff {
            field,
            max_size,
            seed,
            trials,
            workers,
            out,
        } => oracle_diff(&field, max_size, seed, trials, workers, &out, &limits),
        Command::Experiment {
            config,
            out,
            workers,
        } => experiment(&config, &out, workers, &limits),
        Command::Calibrate { seed, per_q, out } => {
            let cal = verify::calibration_sweep(seed, per_q)?;
            output::emit(out.as_deref(), &config::render_thresholds(&cal)?)
        }
    }
}

fn field(args: &FieldArgs, limits: &Limits) -> CliResult<FieldCtx> {
    let modulus = args.modulus.as_deref().map(config::parse_modulus).transpose()?;
    config::build_field(args.p, args.k, modulus.as_deref(), limits)
}

fn point_set(ctx: &FieldCtx, args: &SetArgs) -> CliResult<(SetSpec, PointSet)> {
    let spec = config::parse_set(&args.set)?;
    let set = spec
        .generate(ctx, args.seed)
        .map_err(|e| CliError::usage(e.to_string()))?;
    Ok((spec, set))
}

fn pool(workers: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Failed(format!("thread pool: {e}")))
}

fn field_info(args: &FieldArgs, out: &OutArgs, limits: &Limits) -> CliResult<()> {
    let ctx = field(args, limits)?;
    let mut sphere = vec![0u64; ctx.q() as usize];
    for v in ctx.points() {
        sphere[ctx.norm(v).index() as usize] += 1;
    }
    let format = out.format.unwrap_or(Format::Json);
    let text = match format {
        Format::Csv => output::to_csv(
            &["t", "sphere_size"],
            &sphere
                .iter()
                .enumerate()
                .map(|(t, s)| vec![t.to_string(), s.to_string()])
                .collect::<Vec<_>>(),
        )?,
        _ => output::to_json(&json!({
            "p": ctx.p(),
            "k": ctx.k(),
            "q": ctx.q(),
            "modulus": ctx.modulus_string(),
            "modulus_coefficients": ctx.modulus(),
            "q_mod_4": ctx.q_mod_4(),
            "minus_one_is_square": ctx.minus_one_is_square(),
            "nonzero_squares": ctx.nonzero_elements().filter(|&a| ctx.is_square(a)).count(),
            "non_squares": ctx.nonzero_elements().filter(|&a| !ctx.is_square(a)).count(),
            "o2_order": enumerate_o2(&ctx).len(),
            "sphere_sizes": sphere,
        }))?,
    };
    output::emit(out.out.as_deref(), &text)
}

fn group_info(args: &FieldArgs, list: bool, out: &OutArgs, limits: &Limits) -> CliResult<()> {
    let ctx = field(args, limits)?;
    let o2 = enumerate_o2(&ctx);
    let so2 = enumerate_so2(&ctx).len();
    let g1 = (ctx.q() as u128 - 1) * (o2.len() as u128).pow(2);
    let mut info = json!({
        "q": ctx.q(),
        "so2_order": so2,
        "o2_order": o2.len(),
        "g1_parameter_tuples": g1,
        "g1_within_limit": limits.check_g1(ctx.q()).is_ok(),
        "stabilizer_non_isotropic": 2,
        "stabilizer_isotropic": if ctx.minus_one_is_square() { json!(1) } else { Value::Null },
    });
    if list {
        let rows: Vec<Value> = o2
            .iter()
            .enumerate()
            .map(|(i, m)| {
                json!({
                    "index": i,
                    "kind": if m.is_rotation(&ctx) { "rotation" } else { "reflection" },
                    "matrix": [[m.a, m.b], [m.c, m.d]],
                })
            })
            .collect();
        info["elements"] = Value::Array(rows);
    }
    output::emit(out.out.as_deref(), &output::to_json(&info)?)
}

fn fourier_table(args: &FieldArgs, set: &SetArgs, out: &OutArgs, limits: &Limits) -> CliResult<()> {
    let ctx = field(args, limits)?;
    let (_, e) = point_set(&ctx, set)?;
    let table = fourier::dft_indicator(&ctx, &e);
    let rows: Vec<(u32, u32, f64, f64)> = ctx
        .points()
        .map(|xi| {
            let v = table.at(&ctx, xi);
            (xi.x.index(), xi.y.index(), v.re, v.im)
        })
        .collect();
    let text = match out.format.unwrap_or(Format::Csv) {
        Format::Csv => output::to_csv(
            &["xi1", "xi2", "re", "im"],
            &rows
                .iter()
                .map(|r| vec![r.0.to_string(), r.1.to_string(), r.2.to_string(), r.3.to_string()])
                .collect::<Vec<_>>(),
        )?,
        _ => output::to_json(
            &rows
                .iter()
                .map(|r| json!({"xi1": r.0, "xi2": r.1, "re": r.2, "im": r.3}))
                .collect::<Vec<_>>(),
        )?,
    };
    output::emit(out.out.as_deref(), &text)
}

struct ComputeOpts {
    l2: bool,
    lambda: Option<u32>,
    r: Option<u32>,
    class: String,
    theta: Option<usize>,
}

/// A computed quantity: a scalar summary and, for tables, `(index, count)` rows.
struct Computed {
    summary: Value,
    columns: [&'static str; 2],
    rows: Vec<(String, String)>,
}

fn element(ctx: &FieldCtx, v: Option<u32>, flag: &str) -> CliResult<FieldElement> {
    let v = v.ok_or_else(|| CliError::usage(format!("this quantity needs --{flag}")))?;
    ctx.element(v).map_err(|e| CliError::usage(e.to_string()))
}

fn value_rows(values: &[u32]) -> Vec<(String, String)> {
    values.iter().map(|v| (v.to_string(), String::new())).collect()
}

fn compute(
    quantity: Quantity,
    args: &FieldArgs,
    set: &SetArgs,
    opts: &ComputeOpts,
    out: &OutArgs,
    limits: &Limits,
) -> CliResult<()> {
    let ctx = field(args, limits)?;
    let (spec, e) = point_set(&ctx, set)?;
    let usage = |err: qplane_core::Error| match err {
        qplane_core::Error::LimitExceeded { .. } => CliError::Core(err),
        other => CliError::usage(other.to_string()),
    };
    let values = |v: &geometry::ValueSet| -> Computed {
        let list = v.to_vec();
        Computed {
            summary: json!({ "size": list.len(), "values": list }),
            columns: ["value", ""],
            rows: value_rows(&list),
        }
    };
    let table = |t: &counting::CountTable| -> Computed {
        let nonzero: Vec<(String, u64)> = t
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (t.index_label(&ctx, i), c))
            .collect();
        let rows = nonzero.iter().map(|(i, c)| (i.clone(), c.to_string())).collect();
        Computed {
            summary: json!({
                "total": t.total(),
                "sum_squares": t.sum_squares(),
                "entries": nonzero,
            }),
            columns: ["index", "count"],
            rows,
        }
    };
    let scalar = |name: &str, v: Value| Computed {
        summary: json!({ name: v }),
        columns: ["name", "value"],
        rows: vec![(name.to_string(), v.to_string())],
    };

    let computed = match quantity {
        Quantity::DistSet => values(&geometry::distance_set(&ctx, &e).map_err(usage)?),
        Quantity::Product | Quantity::Quotient => {
            let d = geometry::distance_set(&ctx, &e).map_err(usage)?;
            if quantity == Quantity::Product {
                values(&geometry::set_product(&ctx, &d, &d))
            } else {
                values(&geometry::set_quotient(&ctx, &d, &d))
            }
        }
        Quantity::Histogram => table(&counting::distance_histogram(&ctx, &e)),
        Quantity::Directions if opts.l2 => {
            let diff = counting::DifferenceTable::new(&ctx, &e);
            let l2 = counting::l2_directions_from(&ctx, &diff);
            let group: u128 = ctx
                .nonzero_elements()
                .map(|l| diff.correlate_scalar(&ctx, l))
                .sum();
            Computed {
                summary: json!({ "l2_directions": l2, "group_energy": group }),
                columns: ["name", "value"],
                rows: vec![
                    ("l2_directions".into(), l2.to_string()),
                    ("group_energy".into(), group.to_string()),
                ],
            }
        }
        Quantity::Directions => {
            let dirs = geometry::direction_set(&ctx, &e).map_err(usage)?;
            Computed {
                summary: json!({ "size": dirs.len(), "directions": dirs }),
                columns: ["x", "y"],
                rows: dirs.iter().map(|d| (d.x.to_string(), d.y.to_string())).collect(),
            }
        }
        Quantity::Scales if opts.l2 => {
            let s = counting::l2_scales(&ctx, &e);
            Computed {
                summary: json!({ "scale_energy": s.group, "scale_tuples_once": s.literal }),
                columns: ["name", "value"],
                rows: vec![
                    ("scale_energy".into(), s.group.to_string()),
                    ("scale_tuples_once".into(), s.literal.to_string()),
                ],
            }
        }
        Quantity::Scales => values(&geometry::scale_set(&ctx, &e).map_err(usage)?),
        Quantity::Gamma => table(&counting::gamma_table(&ctx, &e, element(&ctx, opts.lambda, "lambda")?)),
        Quantity::Eta => {
            let r = element(&ctx, opts.r, "r")?;
            match opts.theta {
                Some(i) => {
                    let o2 = enumerate_o2(&ctx);
                    let theta = o2.get(i).ok_or_else(|| {
                        CliError::usage(format!("--theta must be below {}", o2.len()))
                    })?;
                    table(&counting::eta_table(&ctx, &e, r, theta).map_err(usage)?)
                }
                None => {
                    let en = counting::eta_energy(&ctx, &e, r).map_err(usage)?;
                    Computed {
                        summary: json!({ "sum": en.sum, "sum_sq": en.sum_sq, "o2_order": en.group_order }),
                        columns: ["name", "value"],
                        rows: vec![
                            ("sum".into(), en.sum.to_string()),
                            ("sum_sq".into(), en.sum_sq.to_string()),
                        ],
                    }
                }
            }
        }
        Quantity::Nu => {
            let class: PairClass = opts.class.parse().map_err(usage)?;
            let t = counting::nu_table(&ctx, &e, class);
            match opts.lambda {
                Some(_) => {
                    let l = element(&ctx, opts.lambda, "lambda")?;
                    scalar("nu", json!(t[l.index() as usize]))
                }
                None => Computed {
                    summary: json!({ "nu": t }),
                    columns: ["lambda", "nu"],
                    rows: t.iter().enumerate().map(|(i, v)| (i.to_string(), v.to_string())).collect(),
                },
            }
        }
        Quantity::MuEnergy => scalar("mu_energy", json!(counting::mu_energy(&ctx, &e, limits).map_err(usage)?)),
    };

    let text = match out.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let header: Vec<&str> = computed.columns.iter().copied().filter(|c| !c.is_empty()).collect();
            let rows: Vec<Vec<String>> = computed
                .rows
                .into_iter()
                .map(|(a, b)| if header.len() == 1 { vec![a] } else { vec![a, b] })
                .collect();
            output::to_csv(&header, &rows)?
        }
        _ => {
            let mut v = computed.summary;
            v["quantity"] = json!(quantity.to_possible_value().map(|p| p.get_name().to_string()));
            v["q"] = json!(ctx.q());
            v["set_spec"] = json!(spec.to_string());
            v["seed"] = json!(set.seed);
            v["set_size"] = json!(e.len());
            output::to_json(&v)?
        }
    };
    output::emit(out.out.as_deref(), &text)
}

/// Seeds for a recipe: `trials` consecutive seeds when it is random, else one.
fn seeds(spec: &SetSpec, base: u64, trials: u64) -> Vec<u64> {
    if spec.is_random() {
        (0..trials).map(|t| base.wrapping_add(t)).collect()
    } else {
        vec![base]
    }
}

fn run_checks(
    ctx: &FieldCtx,
    spec: &SetSpec,
    seed: u64,
    checks: &[Check],
    thresholds: &Thresholds,
    limits: &Limits,
) -> CliResult<Vec<VerificationReport>> {
    let e = spec.generate(ctx, seed).map_err(|e| CliError::usage(e.to_string()))?;
    let spec_text = spec.to_string();
    let subject = Subject {
        ctx,
        set: &e,
        spec: &spec_text,
        seed,
    };
    let mut reports = Vec::new();
    for &check in checks {
        reports.extend(verify::run_check(check, &subject, thresholds, limits)?);
    }
    Ok(reports)
}

#[allow(clippy::too_many_arguments)]
fn verify_cmd(
    args: &FieldArgs,
    set: &SetArgs,
    checks: &[Check],
    trials: u64,
    thresholds: &Thresholds,
    workers: usize,
    out: &OutArgs,
    limits: &Limits,
) -> CliResult<()> {
    let ctx = field(args, limits)?;
    let spec = config::parse_set(&set.set)?;
    let seeds = seeds(&spec, set.seed, trials);
    let batches: Vec<CliResult<Vec<VerificationReport>>> = pool(workers)?.install(|| {
        seeds
            .par_iter()
            .map(|&seed| run_checks(&ctx, &spec, seed, checks, thresholds, limits))
            .collect()
    });
    let mut reports = Vec::new();
    for b in batches {
        reports.extend(b?);
    }
    let text = match out.format.unwrap_or(Format::Jsonl) {
        Format::Json => output::to_json(&reports)?,
        _ => output::to_jsonl(&reports)?,
    };
    output::emit(out.out.as_deref(), &text)?;
    let failures: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.failures()
                .map(move |a| format!("{} (seed {}): {}", r.check, r.seed, a.name))
        })
        .collect();
    let total: usize = reports.iter().map(|r| r.assertions.len()).sum();
    eprintln!(
        "{} report(s), {} assertion(s), {} failure(s)",
        reports.len(),
        total,
        failures.len()
    );
    if failures.is_empty() {
        Ok(())
    } else {
        for f in &failures {
            eprintln!("FAILED {f}");
        }
        Err(CliError::Failed(format!("{} assertion(s) failed", failures.len())))
    }
}

#[derive(Serialize)]
struct DiffRow {
    set: String,
    #[serde(flatten)]
    mismatch: Mismatch,
}

#[derive(Serialize)]
struct DiffReport {
    q: u32,
    sets: usize,
    comparisons: usize,
    mismatches: Vec<DiffRow>,
}

fn describe_set(e: &PointSet) -> String {
    SetSpec::Points(e.iter().map(|v| (v.x.index(), v.y.index())).collect()).to_string()
}

#[allow(clippy::too_many_arguments)]
fn oracle_diff(
    args: &FieldArgs,
    max_size: usize,
    seed: u64,
    trials: u64,
    workers: usize,
    out: &OutArgs,
    limits: &Limits,
) -> CliResult<()> {
    let ctx = field(args, limits)?;
    if max_size == 0 {
        return Err(CliError::usage("--max-size must be positive"));
    }
    let max_size = max_size.min(ctx.plane_size());
    let mut sets = Vec::new();
    if ctx.plane_size() <= 9 {
        geometry::for_each_subset(&ctx, max_size, |e| sets.push(e.clone()));
    } else {
        for t in 0..trials {
            let size = 1 + (t as usize % max_size);
            sets.push(geometry::random_set(&ctx, size, seed.wrapping_add(t))?);
        }
    }
    let results: Vec<CliResult<(usize, Vec<DiffRow>)>> = pool(workers)?.install(|| {
        sets.par_iter()
            .map(|e| {
                let cmp = oracle::compare_all(&ctx, e, limits)?;
                let rows = cmp
                    .mismatches
                    .into_iter()
                    .map(|m| DiffRow {
                        set: describe_set(e),
                        mismatch: m,
                    })
                    .collect();
                Ok((cmp.comparisons, rows))
            })
            .collect()
    });
    let mut report = DiffReport {
        q: ctx.q(),
        sets: sets.len(),
        comparisons: 0,
        mismatches: Vec::new(),
    };
    for r in results {
        let (n, rows) = r?;
        report.comparisons += n;
        report.mismatches.extend(rows);
    }
    output::emit(out.out.as_deref(), &output::to_json(&report)?)?;
    if report.mismatches.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "{} mismatch(es) between fast and enumerated counts",
            report.mismatches.len()
        )))
    }
}

#[derive(Serialize)]
struct ProbeOut<'a> {
    check: &'static str,
    set_spec: &'a str,
    #[serde(flatten)]
    row: &'a ProbeRow,
}

/// One unit of experiment work: a recipe with a trial index and seed.
struct Job {
    spec: SetSpec,
    trial: u64,
    seed: u64,
}

enum Row {
    Report(VerificationReport),
    Probe(String, ProbeRow),
}

fn experiment(path: &Path, out_dir: &Path, workers: usize, base_limits: &Limits) -> CliResult<()> {
    let cfg = ExperimentConfig::load(path)?;
    let limits = match &cfg.limits {
        Some(text) => base_limits
            .parse_overrides(text)
            .map_err(|e| CliError::usage(format!("limits: {e}")))?,
        None => *base_limits,
    };
    let ctx = config::build_field(cfg.p, cfg.k, cfg.modulus.as_deref(), &limits)?;
    let tasks = cfg.tasks()?;
    let thresholds = match &cfg.thresholds {
        Some(p) => {
            let p = if p.is_relative() {
                path.parent().unwrap_or(Path::new(".")).join(p)
            } else {
                p.clone()
            };
            config::load_thresholds(&p)?
        }
        None => Thresholds::FROZEN,
    };

    let mut jobs = Vec::new();
    for size in cfg.sizes.sizes()? {
        if size > ctx.plane_size() {
            return Err(CliError::usage(format!(
                "size {size} exceeds q^2 = {}",
                ctx.plane_size()
            )));
        }
        if size == ctx.plane_size() {
            jobs.push(Job {
                spec: SetSpec::All,
                trial: 0,
                seed: cfg.base_seed,
            });
            continue;
        }
        for trial in 0..cfg.trials {
            jobs.push(Job {
                spec: SetSpec::Random(size),
                trial,
                seed: cfg.base_seed.wrapping_add(trial),
            });
        }
    }
    for spec in cfg.fixed_sets()? {
        let runs = if spec.is_random() { cfg.trials } else { 1 };
        for trial in 0..runs {
            jobs.push(Job {
                spec: spec.clone(),
                trial,
                seed: cfg.base_seed.wrapping_add(trial),
            });
        }
    }

    let results: Vec<CliResult<Vec<(u64, Row)>>> = pool(workers)?.install(|| {
        jobs.par_iter()
            .map(|job| {
                let e = job
                    .spec
                    .generate(&ctx, job.seed)
                    .map_err(|err| CliError::usage(err.to_string()))?;
                let spec_text = job.spec.to_string();
                let subject = Subject {
                    ctx: &ctx,
                    set: &e,
                    spec: &spec_text,
                    seed: job.seed,
                };
                let mut rows = Vec::new();
                for task in &tasks {
                    match task {
                        ExperimentTask::Check(c) => {
                            for rep in verify::run_check(*c, &subject, &thresholds, &limits)? {
                                rows.push((job.trial, Row::Report(rep)));
                            }
                        }
                        ExperimentTask::Probe => rows.push((
                            job.trial,
                            Row::Probe(spec_text.clone(), verify::probe_row(&ctx, &e, job.trial, job.seed)),
                        )),
                    }
                }
                Ok(rows)
            })
            .collect()
    });

    let mut jsonl = String::new();
    let mut plot = Vec::new();
    for batch in results {
        for (trial, row) in batch? {
            match row {
                Row::Report(rep) => {
                    jsonl.push_str(&output::to_jsonl(std::slice::from_ref(&rep))?);
                    for (name, value) in &rep.ratios {
                        plot.push(vec![
                            rep.check.clone(),
                            rep.set_size.to_string(),
                            trial.to_string(),
                            name.clone(),
                            value.to_string(),
                        ]);
                    }
                }
                Row::Probe(spec, probe) => {
                    let out = ProbeOut {
                        check: "probe",
                        set_spec: &spec,
                        row: &probe,
                    };
                    jsonl.push_str(&output::to_jsonl(std::slice::from_ref(&out))?);
                    for (name, value) in [
                        ("direction_ratio", probe.direction_ratio),
                        ("scale_ratio", probe.scale_ratio),
                    ] {
                        plot.push(vec![
                            "probe".into(),
                            probe.set_size.to_string(),
                            trial.to_string(),
                            name.into(),
                            value.to_string(),
                        ]);
                    }
                }
            }
        }
    }
    output::emit(Some(&out_dir.join("rows.jsonl")), &jsonl)?;
    output::emit(
        Some(&out_dir.join("plot.csv")),
        &output::to_csv(&["check", "set_size", "trial", "ratio", "value"], &plot)?,
    )?;
    eprintln!("{} job(s), {} plot row(s)", jobs.len(), plot.len());
    Ok(())
}
