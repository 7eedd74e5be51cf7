use crate::error::CliError;
use crate::grid::parse_grid;
use crate::model::{parse_kernel, ModelArgs, ModelKind};
use crate::output::{num, record, table, Emit};
use clap::{Args, ValueEnum};
use fbl_core::analytics::*;
use fbl_core::bias::{paradox_certificate, BiasVector};
use fbl_core::estimation::{
    convergence_csv, convergence_study, limit_bias_samples, run_graph_experiment,
    run_limit_experiment, sample_roots, tail_exponent_fit, SummaryStats, EXPERIMENT_HEADER,
};
use fbl_core::generators::{DegreeSource, ModelConfig};
use fbl_core::graph::MultiGraph;
use fbl_core::kernel::{KernelFunction, DEFAULT_QUAD_POINTS};
use fbl_core::law::OffspringLaw;
use fbl_core::limit::TreeSampler;
use fbl_core::measure::EmpiricalMeasure;
use fbl_core::rng::seeded;
use fbl_core::special::SeriesResult;
use serde_json::{json, Map, Value};
use std::fmt::Write;
use std::path::Path;

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

pub fn generate(config: &ModelConfig, n: usize, seed: u64) -> Result<Emit, CliError> {
    let g = config.generate(n, &mut seeded(seed))?;
    let edges: Vec<[usize; 2]> = g.edges().map(|(u, v)| [u, v]).collect();
    Ok(Emit {
        csv: g.to_edge_list(),
        json: json!({ "n": g.n(), "edges": edges }),
    })
}

pub fn bias(
    input: Option<&Path>,
    model: &ModelArgs,
    n: Option<usize>,
    seed: u64,
) -> Result<Emit, CliError> {
    let g = match input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            MultiGraph::parse_edge_list(&text)?
        }
        None => {
            let n = n.ok_or_else(|| CliError::Config("give --input or a model with -n".into()))?;
            model.resolve()?.generate(n, &mut seeded(seed))?
        }
    };
    let b = BiasVector::of(&g);
    let mut csv = String::from("vertex,degree,bias\n");
    for (i, v) in b.values.iter().enumerate() {
        writeln!(csv, "{i},{},{v}", g.degree(i)).unwrap();
    }
    let certificate = if g.is_loopless() {
        to_json(&paradox_certificate(&g)?)
    } else {
        Value::Null
    };
    Ok(Emit {
        csv,
        json: json!({
            "n": g.n(),
            "average_bias": num(b.mean()),
            "self_loops": g.total_loops(),
            "certificate": certificate,
            "values": b.values,
        }),
    })
}

fn stats_json(s: &SummaryStats) -> Value {
    let mut v = to_json(s);
    v["second_moment"] = num(s.second_moment);
    v["mean"] = num(s.mean);
    v
}

pub fn limit_sample(
    config: &ModelConfig,
    samples: u64,
    raw: bool,
    fit_x_min: Option<f64>,
    seed: u64,
) -> Result<Emit, CliError> {
    let sampler = TreeSampler::for_model(config)?;
    if let Some(x_min) = fit_x_min {
        let values = limit_bias_samples(&sampler, samples, seed);
        let fit = tail_exponent_fit(&EmpiricalMeasure::from_samples(&values), x_min)?;
        return Ok(record(vec![
            ("slope", num(fit.slope)),
            ("intercept", num(fit.intercept)),
            ("r2", num(fit.r2)),
            ("points", json!(fit.points)),
        ]));
    }
    if raw {
        let roots = sample_roots(&sampler, samples, seed);
        let mut csv = String::from("d_phi,delta\n");
        for (d, x) in &roots {
            writeln!(csv, "{d},{x}").unwrap();
        }
        let json = Value::Array(roots.iter().map(|(d, x)| json!([d, num(*x)])).collect());
        return Ok(Emit { csv, json });
    }
    let stats = run_limit_experiment(config, samples, seed)?;
    Ok(Emit {
        csv: format!(
            "{EXPERIMENT_HEADER}\n{}\n",
            stats.csv_row(config.name(), &config.param_label(), None, 1)
        ),
        json: json!({
            "model": config.name(),
            "param": config.param_label(),
            "stats": stats_json(&stats),
        }),
    })
}

pub fn compare(
    config: &ModelConfig,
    n: usize,
    replicates: u64,
    samples: u64,
    n_grid: Option<&str>,
    seed: u64,
) -> Result<Emit, CliError> {
    if let Some(spec) = n_grid {
        let grid = spec
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Config(format!("bad --n-grid: {e}")))?;
        let rows = convergence_study(config, &grid, replicates, seed, samples)?;
        return Ok(Emit {
            csv: convergence_csv(&rows),
            json: to_json(&rows),
        });
    }
    let graph = run_graph_experiment(config, n, replicates, seed)?;
    let tree = run_limit_experiment(config, samples, seed)?;
    let (name, param) = (config.name(), config.param_label());
    Ok(Emit {
        csv: format!(
            "{EXPERIMENT_HEADER}\n{}\n{}\n",
            graph.csv_row(name, &param, Some(n), replicates),
            tree.csv_row(name, &param, None, 1)
        ),
        json: json!({
            "model": name,
            "param": param,
            "graph": stats_json(&graph),
            "tree": stats_json(&tree),
        }),
    })
}

pub fn conjecture(dist: &str, tol: f64) -> Result<Emit, CliError> {
    let law = OffspringLaw::parse_spec(dist)?;
    let r = conjecture_probability(&law, tol)?;
    Ok(record(vec![
        ("law", json!(dist)),
        ("value", num(r.value)),
        ("truncation_bound", num(r.truncation_bound)),
        ("below_half", json!(r.value + r.truncation_bound < 0.5)),
    ]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AnalyticOp {
    HerSignificance,
    HerTail,
    HerMoments,
    HerAsymptote,
    GwSignificance,
    GwTail,
    IerLimit,
    IerMoments,
    IerMc,
    IerBeta,
    CmMoments,
    CmBounds,
    Bimodal,
    CmTailExponent,
    PamPmf,
    PamTail,
    PamPDelta,
    PamMean,
    PamExponents,
    PamSecondMoment,
    PamLowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    FlatMax,
    AlphaPower,
}

#[derive(Args, Debug)]
pub struct AnalyticArgs {
    #[arg(long, value_enum)]
    pub op: AnalyticOp,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long)]
    pub k_max: Option<u64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub m1: Option<u64>,
    #[arg(long)]
    pub m2: Option<u64>,
    /// Offspring law (root law for the Galton–Watson ops).
    #[arg(long)]
    pub dist: Option<String>,
    /// Child law for the Galton–Watson ops; defaults to the size-biased root law.
    #[arg(long)]
    pub child_dist: Option<String>,
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long, value_enum)]
    pub case: Option<CaseArg>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_QUAD_POINTS)]
    pub quad_points: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
}

fn arg<T: Copy>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Config(format!("this op needs --{flag}")))
}

fn series(r: SeriesResult) -> Vec<(&'static str, Value)> {
    vec![
        ("value", num(r.value)),
        ("truncation_bound", num(r.truncation_bound)),
        ("terms_used", json!(r.terms_used)),
    ]
}

fn moments(m: Moments) -> Vec<(&'static str, Value)> {
    vec![("m1", num(m.m1)), ("m2", num(m.m2))]
}

fn mc(m: McEstimate) -> Vec<(&'static str, Value)> {
    vec![("value", num(m.estimate)), ("std_err", num(m.std_err))]
}

fn gw_laws(a: &AnalyticArgs) -> Result<(OffspringLaw, OffspringLaw), CliError> {
    let root = OffspringLaw::parse_spec(
        a.dist
            .as_deref()
            .ok_or_else(|| CliError::Config("this op needs --dist".into()))?,
    )?;
    let child = match &a.child_dist {
        Some(spec) => OffspringLaw::parse_spec(spec)?,
        None => root.size_biased()?,
    };
    Ok((root, child))
}

fn kernel_arg(a: &AnalyticArgs) -> Result<KernelFunction, CliError> {
    parse_kernel(
        a.kernel
            .as_deref()
            .ok_or_else(|| CliError::Config("this op needs --kernel".into()))?,
    )
}

pub fn analytic(a: &AnalyticArgs, seed: u64) -> Result<Emit, CliError> {
    use AnalyticOp::*;
    let mut params: Vec<(&str, Value)> = Vec::new();
    let mut p = |k: &'static str, v: Value| params.push((k, v));
    let result = match a.op {
        HerSignificance => {
            let l = arg(a.lambda, "lambda")?;
            p("lambda", num(l));
            series(her_significance(l, a.tol)?)
        }
        HerTail => {
            let (l, x) = (arg(a.lambda, "lambda")?, arg(a.x, "x")?);
            p("lambda", num(l));
            p("x", num(x));
            series(her_tail_series(l, x, a.tol)?)
        }
        HerMoments => {
            let l = arg(a.lambda, "lambda")?;
            p("lambda", num(l));
            moments(her_moments(l)?)
        }
        HerAsymptote => {
            let (l, x) = (arg(a.lambda, "lambda")?, arg(a.x, "x")?);
            p("lambda", num(l));
            p("x", num(x));
            vec![("value", num(her_tail_asymptote(l, x)?))]
        }
        GwSignificance | GwTail => {
            let (root, child) = gw_laws(a)?;
            let x = if a.op == GwTail { arg(a.x, "x")? } else { 0.0 };
            p("root", to_json(&root));
            p("child", to_json(&child));
            p("x", num(x));
            series(gw_tail_exact(&root, &child, x, a.tol)?)
        }
        IerLimit => {
            let f = kernel_arg(a)?;
            p("kernel", to_json(&f));
            vec![("value", num(ier_limit_significance(&f, a.quad_points)))]
        }
        IerMoments => {
            let (l, f) = (arg(a.lambda, "lambda")?, kernel_arg(a)?);
            p("lambda", num(l));
            p("kernel", to_json(&f));
            moments(ier_moments(l, &f, a.quad_points)?)
        }
        IerMc => {
            let (l, f) = (arg(a.lambda, "lambda")?, kernel_arg(a)?);
            p("lambda", num(l));
            p("kernel", to_json(&f));
            p("samples", json!(a.samples));
            mc(ier_significance_mc(l, &f, a.samples, seed)?)
        }
        IerBeta => {
            let f = kernel_arg(a)?;
            let case = match arg(a.case, "case")? {
                CaseArg::FlatMax => BetaCase::FlatMax,
                CaseArg::AlphaPower => BetaCase::AlphaPower,
            };
            p("kernel", to_json(&f));
            p("alpha", a.alpha.map_or(Value::Null, num));
            let r = ier_beta_x_asymptote(&f, case, a.alpha, a.quad_points)?;
            vec![
                ("case", to_json(&r.case)),
                ("description", json!(r.description)),
                ("predicted_exponent", num(r.predicted_exponent)),
                ("fitted_exponent", num(r.fitted_exponent)),
                ("plateau_measure", num(r.plateau_measure)),
                ("limit_ratio", num(r.ratios.last().map_or(f64::NAN, |q| q.1))),
            ]
        }
        CmMoments => {
            let law = OffspringLaw::parse_spec(
                a.dist
                    .as_deref()
                    .ok_or_else(|| CliError::Config("this op needs --dist".into()))?,
            )?;
            p("law", to_json(&law));
            moments(cm_moments(&law)?)
        }
        CmBounds => {
            let tau = arg(a.tau, "tau")?;
            let k_max = a.k_max.unwrap_or(200);
            p("tau", num(tau));
            p("k_max", json!(k_max));
            let b = zeta_cm_significance_bounds(tau, k_max)?;
            vec![("lower", num(b.lo)), ("upper", num(b.hi))]
        }
        Bimodal => {
            let (pp, m1, m2) = (arg(a.p, "p")?, arg(a.m1, "m1")?, arg(a.m2, "m2")?);
            p("p", num(pp));
            p("m1", json!(m1));
            p("m2", json!(m2));
            vec![("value", num(bimodal_significance(pp, m1, m2)?))]
        }
        CmTailExponent => {
            let tau = arg(a.tau, "tau")?;
            p("tau", num(tau));
            vec![("value", num(cm_tail_exponent(tau)?))]
        }
        PamPmf | PamTail => {
            let (d, k) = (arg(a.delta, "delta")?, arg(a.k, "k")?);
            p("delta", num(d));
            p("k", json!(k));
            let v = if a.op == PamPmf {
                pam_root_pmf(d, k)?
            } else {
                pam_root_tail(d, k)?
            };
            vec![("value", num(v))]
        }
        PamPDelta => {
            let d = arg(a.delta, "delta")?;
            p("delta", num(d));
            series(pam_p_delta(d, a.tol)?)
        }
        PamMean => {
            let d = arg(a.delta, "delta")?;
            p("delta", num(d));
            match pam_mean_interval(d, a.tol)? {
                MeanEnclosure::Finite(i) => {
                    vec![("finite", json!(true)), ("lower", num(i.lo)), ("upper", num(i.hi))]
                }
                MeanEnclosure::Infinite => vec![
                    ("finite", json!(false)),
                    ("lower", num(f64::INFINITY)),
                    ("upper", num(f64::INFINITY)),
                ],
            }
        }
        PamExponents => {
            let d = arg(a.delta, "delta")?;
            p("delta", num(d));
            let e = pam_tail_exponents(d)?;
            vec![
                ("lower_exp", num(e.lower_exp)),
                ("upper_exp", e.upper_exp.map_or(Value::Null, num)),
            ]
        }
        PamSecondMoment => {
            let d = arg(a.delta, "delta")?;
            p("delta", num(d));
            vec![("finite", json!(pam_second_moment_finite(d)?))]
        }
        PamLowerBound => {
            let d = arg(a.delta, "delta")?;
            let k_max = a.k_max.unwrap_or(50);
            p("delta", num(d));
            p("k_max", json!(k_max));
            p("samples_per_k", json!(a.samples));
            mc(pam_significance_lower_bound(d, k_max, a.samples, seed)?)
        }
    };
    let op = a.op.to_possible_value().expect("no skipped variants");
    let mut fields = vec![("op", json!(op.get_name()))];
    fields.extend(result.iter().cloned());
    let mut csv_fields = fields.clone();
    csv_fields.extend(params.iter().cloned());
    let mut obj: Map<String, Value> = fields.into_iter().map(|(k, v)| (k.into(), v)).collect();
    obj.insert(
        "params".into(),
        Value::Object(params.into_iter().map(|(k, v)| (k.into(), v)).collect()),
    );
    Ok(Emit {
        csv: record(csv_fields).csv,
        json: Value::Object(obj),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepOp {
    /// `μ([0, ∞))`: series for `her`, tree Monte Carlo otherwise.
    Significance,
    /// Closed-form `E[Δ]` and `E[Δ²]`.
    Moments,
    /// Lower and upper bounds on `μ([0, ∞))` for zeta degrees.
    Bounds,
    /// Old-neighbour lower bound for the preferential attachment limit.
    SignificanceLowerBound,
    /// Enclosure of `E[Δ]` for the preferential attachment limit.
    MeanInterval,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// `lambda` (her, ier), `tau` (cm with zeta degrees) or `delta` (pam).
    #[arg(long)]
    pub param: String,
    /// `a:b[:lin|log][:points]` or `v1,v2,...`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long, value_enum)]
    pub op: SweepOp,
    /// Kernel for `ier`: JSON text or `@path`.
    #[arg(long)]
    pub kernel: Option<String>,
    /// Monte Carlo samples per grid point (per root degree for the lower bound).
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub k_max: Option<u64>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_QUAD_POINTS)]
    pub quad_points: usize,
}

fn sweep_config(a: &SweepArgs, value: f64) -> Result<ModelConfig, CliError> {
    let expected = match a.model {
        ModelKind::Her | ModelKind::Ier => "lambda",
        ModelKind::Cm => "tau",
        ModelKind::Pam => "delta",
    };
    if a.param != expected {
        return Err(CliError::Config(format!(
            "model {:?} sweeps over '{expected}', not '{}'",
            a.model, a.param
        )));
    }
    let config = match a.model {
        ModelKind::Her => ModelConfig::Her { lambda: value },
        ModelKind::Ier => ModelConfig::Ier {
            lambda: value,
            kernel: parse_kernel(
                a.kernel
                    .as_deref()
                    .ok_or_else(|| CliError::Config("model ier needs --kernel".into()))?,
            )?,
        },
        ModelKind::Cm => ModelConfig::Cm {
            degrees: DegreeSource::Law(OffspringLaw::Zeta { tau: value }),
        },
        ModelKind::Pam => ModelConfig::Pam { delta: value },
    };
    config.validate()?;
    Ok(config)
}

pub fn sweep(a: &SweepArgs, seed: u64) -> Result<Emit, CliError> {
    let grid = parse_grid(&a.grid)?;
    let configs = grid
        .iter()
        .map(|&v| sweep_config(a, v))
        .collect::<Result<Vec<_>, _>>()?;
    let unsupported = || {
        CliError::Config(format!("op {:?} is not available for model {:?}", a.op, a.model))
    };
    let point_seed = |i: usize| seed.wrapping_add(i as u64);
    let mut rows = Vec::with_capacity(grid.len());
    let header: &[&str];
    match a.op {
        SweepOp::Significance => {
            header = &["value", "error"];
            for (i, (&v, config)) in grid.iter().zip(&configs).enumerate() {
                let row = match config {
                    ModelConfig::Her { lambda } => {
                        let r = her_significance(*lambda, a.tol)?;
                        vec![v, r.value, r.truncation_bound]
                    }
                    _ => {
                        let s = run_limit_experiment(config, a.samples.unwrap_or(1_000_000), point_seed(i))?;
                        vec![v, s.significance, s.se_significance]
                    }
                };
                rows.push(row);
            }
        }
        SweepOp::Moments => {
            header = &["m1", "m2"];
            for (&v, config) in grid.iter().zip(&configs) {
                let m = match config {
                    ModelConfig::Her { lambda } => her_moments(*lambda)?,
                    ModelConfig::Ier { lambda, kernel } => ier_moments(*lambda, kernel, a.quad_points)?,
                    ModelConfig::Cm {
                        degrees: DegreeSource::Law(law),
                    } => cm_moments(law)?,
                    _ => return Err(unsupported()),
                };
                rows.push(vec![v, m.m1, m.m2]);
            }
        }
        SweepOp::Bounds => {
            if a.model != ModelKind::Cm {
                return Err(unsupported());
            }
            header = &["lower", "upper"];
            for &tau in &grid {
                let b = zeta_cm_significance_bounds(tau, a.k_max.unwrap_or(200))?;
                rows.push(vec![tau, b.lo, b.hi]);
            }
        }
        SweepOp::SignificanceLowerBound => {
            if a.model != ModelKind::Pam {
                return Err(unsupported());
            }
            header = &["value", "std_err"];
            for (i, &d) in grid.iter().enumerate() {
                let m = pam_significance_lower_bound(
                    d,
                    a.k_max.unwrap_or(50),
                    a.samples.unwrap_or(100_000),
                    point_seed(i),
                )?;
                rows.push(vec![d, m.estimate, m.std_err]);
            }
        }
        SweepOp::MeanInterval => {
            if a.model != ModelKind::Pam {
                return Err(unsupported());
            }
            header = &["lower", "upper"];
            for &d in &grid {
                let row = match pam_mean_interval(d, a.tol)? {
                    MeanEnclosure::Finite(i) => vec![d, i.lo, i.hi],
                    MeanEnclosure::Infinite => vec![d, f64::INFINITY, f64::INFINITY],
                };
                rows.push(row);
            }
        }
    }
    let mut full = vec![a.param.as_str()];
    full.extend_from_slice(header);
    Ok(table(&full, &rows))
}
