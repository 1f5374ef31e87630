//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for bad input, 2 when a configured resource
//! cap (`--gamma-cap`) is hit.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::builder::RangedU64ValueParser;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::archspec::{self, resolve, NetworkSpec, ResolvedStage};
use crate::engine::{self, compare, evaluate, EngineConfig, Scientific, SweepGrid};
use crate::error::{Error, Result};
use crate::gamma::{GammaProvider, GammaStrategy, StrategyRegistry, DEFAULT_GAMMA_CAP};
use crate::oracle::{self, ConcreteNet, CounterOptions};
use crate::transfer::{b_matrix, MaxoutConstant, StageTransform, TransformKind};

#[derive(Debug, Parser)]
#[command(
    name = "regionbound",
    version,
    about = "Exact upper bounds on linear regions of ReLU networks"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Largest n' for which gamma columns may be built.
    #[arg(long, global = true, default_value_t = DEFAULT_GAMMA_CAP, value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
    pub gamma_cap: usize,
    /// Significant digits in scientific output.
    #[arg(long, global = true, default_value_t = 4, value_parser = RangedU64ValueParser::<usize>::new().range(1..=60))]
    pub digits: usize,
    /// Use k(k-1)/2 instead of k(k-1) hyperplanes per max-pooling output.
    #[arg(long, global = true)]
    pub maxout_c_halved: bool,
    /// Write output to a file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the gamma column for n'.
    Gamma {
        #[arg(long, default_value = "both")]
        variant: String,
        #[arg(long)]
        nprime: usize,
        #[arg(long, value_enum, default_value_t = Layout::Tuples)]
        layout: Layout,
        /// Prefix every tuple with its name.
        #[arg(long)]
        labels: bool,
    },
    /// Print the B matrix for n'.
    Bmatrix {
        #[arg(long, default_value = "both")]
        variant: String,
        #[arg(long)]
        nprime: usize,
    },
    /// Bound for an architecture file or `builtin:NAME`.
    Bound {
        arch: String,
        #[arg(long, default_value = "ours")]
        variant: String,
        /// Also print the histogram after every stage.
        #[arg(long)]
        per_stage: bool,
    },
    /// Both bounds and their ratio (serra / ours).
    Compare { arch: String },
    /// CSV over the n0-ni^k-1 MLP family.
    Sweep {
        #[arg(long)]
        n0: usize,
        /// Comma-separated widths.
        #[arg(long, value_delimiter = ',', required = true)]
        widths: Vec<usize>,
        /// `a..b`, `a..b:step` (inclusive) or a comma-separated list.
        #[arg(long)]
        depths: String,
    },
    /// Count regions of a concrete net and check them against the bound.
    Oracle {
        net: PathBuf,
        #[arg(long, default_value = "sweep1d")]
        method: String,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "ours")]
        variant: String,
        /// Print the first hidden layer's activation histogram.
        #[arg(long)]
        histogram: bool,
    },
    /// Compare a builtin with and without its skip or residual wrappers.
    Demo {
        name: String,
        #[arg(long, default_value = "ours")]
        variant: String,
    },
    /// Print the resolved stages of an architecture.
    Resolve { arch: String },
    /// List registered variants, counting methods and builtins.
    List,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Layout {
    /// One tuple per n, lowest index first.
    Tuples,
    /// Rows are histogram indices, columns are n.
    Matrix,
}

struct Context {
    registry: StrategyRegistry,
    cap: usize,
    config: EngineConfig,
}

impl Context {
    fn new(global: &GlobalOpts) -> Context {
        Context {
            registry: StrategyRegistry::with_builtins(),
            cap: global.gamma_cap,
            config: EngineConfig {
                maxout: if global.maxout_c_halved {
                    MaxoutConstant::Halved
                } else {
                    MaxoutConstant::Statement
                },
                mantissa_digits: global.digits,
            },
        }
    }

    fn provider(&self, name: &str) -> Result<GammaProvider> {
        Ok(GammaProvider::with_cap(self.registry.get(name)?, self.cap))
    }

    /// `both` expands to every registered variant.
    fn strategies(&self, choice: &str) -> Result<Vec<Arc<dyn GammaStrategy>>> {
        if choice == "both" {
            let names = self.registry.names();
            names.into_iter().map(|n| self.registry.get(n)).collect()
        } else {
            Ok(vec![self.registry.get(choice)?])
        }
    }

    fn sci(&self, x: &num_bigint::BigUint) -> String {
        Scientific::from_integer(x, self.config.mantissa_digits).to_string()
    }
}

fn load_arch(arg: &str) -> Result<NetworkSpec> {
    match arg.strip_prefix("builtin:") {
        Some(name) => archspec::builtin(name),
        None => {
            let text = std::fs::read_to_string(arg)
                .map_err(|e| Error::Architecture(format!("cannot read `{arg}`: {e}")))?;
            archspec::parse(&text)
        }
    }
}

fn load_stages(arg: &str) -> Result<(Vec<ResolvedStage>, usize)> {
    let spec = load_arch(arg)?;
    Ok((resolve(&spec)?, spec.input.nodes()))
}

/// `1..10`, `10..100:10`, `1,3,5`.
pub fn parse_depths(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Architecture(format!("invalid depth range `{s}`"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    if let Some((a, rest)) = s.split_once("..") {
        let (b, step) = match rest.split_once(':') {
            Some((b, step)) => (num(b)?, num(step)?),
            None => (num(rest)?, 1),
        };
        let a = num(a)?;
        if step == 0 || a > b {
            return Err(bad());
        }
        Ok((a..=b).step_by(step).collect())
    } else if s.trim().is_empty() {
        Ok(Vec::new())
    } else {
        s.split(',').map(num).collect()
    }
}

fn gamma_text(
    ctx: &Context,
    variant: &str,
    nprime: usize,
    layout: Layout,
    labels: bool,
) -> Result<String> {
    let strategies = ctx.strategies(variant)?;
    let mut out = String::new();
    for s in &strategies {
        let provider = GammaProvider::with_cap(s.clone(), ctx.cap);
        let column = provider.column(nprime)?;
        if strategies.len() > 1 {
            writeln!(out, "# {}", s.name()).unwrap();
        }
        match layout {
            Layout::Tuples => {
                for n in 0..=nprime {
                    let entries = column.get(n).padded(nprime + 1);
                    let h = entries
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    if labels {
                        writeln!(out, "gamma[{}][{n}][{nprime}] = ({h})", s.name()).unwrap();
                    } else {
                        writeln!(out, "({h})").unwrap();
                    }
                }
            }
            Layout::Matrix => {
                let cols: Vec<_> = (0..=nprime).map(|n| column.get(n).clone()).collect();
                let m = StageTransform::from_columns(nprime + 1, &cols, TransformKind::Product)?;
                out.push_str(&m.to_string());
            }
        }
    }
    Ok(out)
}

fn bmatrix_text(ctx: &Context, variant: &str, nprime: usize) -> Result<String> {
    let strategies = ctx.strategies(variant)?;
    let mut out = String::new();
    for s in &strategies {
        let provider = GammaProvider::with_cap(s.clone(), ctx.cap);
        if strategies.len() > 1 {
            writeln!(out, "# {}", s.name()).unwrap();
        }
        out.push_str(&b_matrix(&provider, nprime)?.to_string());
    }
    Ok(out)
}

fn bound_text(ctx: &Context, arch: &str, variant: &str, per_stage: bool) -> Result<String> {
    let (stages, n0) = load_stages(arch)?;
    if variant == "both" {
        return compare_text(ctx, arch);
    }
    let provider = ctx.provider(variant)?;
    let report = evaluate(&stages, &provider, n0, ctx.config)?;
    let mut out = String::new();
    if per_stage {
        for s in &report.per_stage {
            writeln!(out, "# {}: {}", s.label, s.histogram).unwrap();
        }
    }
    writeln!(out, "{}", report.bound).unwrap();
    writeln!(out, "{}", report.scientific).unwrap();
    Ok(out)
}

fn compare_text(ctx: &Context, arch: &str) -> Result<String> {
    let (stages, n0) = load_stages(arch)?;
    let tight = ctx.provider("ours")?;
    let loose = ctx.provider("serra")?;
    let c = compare(&stages, n0, &tight, &loose, ctx.config)?;
    Ok(format!(
        "ours  {} ({})\nserra {} ({})\nratio {}\n",
        c.tight.bound, c.tight.scientific, c.loose.bound, c.loose.scientific, c.ratio_text
    ))
}

fn sweep_text(ctx: &Context, n0: usize, widths: Vec<usize>, depths: &str) -> Result<String> {
    if n0 == 0 || widths.contains(&0) {
        return Err(Error::Architecture("widths must be positive".into()));
    }
    let grid = SweepGrid {
        n0,
        widths,
        depths: parse_depths(depths)?,
    };
    let rows = engine::sweep(
        &grid,
        &ctx.provider("ours")?,
        &ctx.provider("serra")?,
        ctx.config,
    )?;
    Ok(engine::sweep_csv(&rows))
}

#[allow(clippy::too_many_arguments)]
fn oracle_text(
    ctx: &Context,
    path: &PathBuf,
    method: &str,
    samples: usize,
    seed: u64,
    variant: &str,
    histogram: bool,
) -> Result<String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Network(format!("cannot read `{}`: {e}", path.display())))?;
    let net = ConcreteNet::from_json(&text)?;
    let counter = oracle::counter(
        method,
        &CounterOptions {
            samples,
            seed,
            ..CounterOptions::default()
        },
    )?;
    let provider = ctx.provider(variant)?;
    let bound = evaluate(
        &resolve(&net.architecture())?,
        &provider,
        net.n0(),
        ctx.config,
    )?
    .bound;
    let result = counter.count(&net)?;
    let verdict = if num_bigint::BigUint::from(result.count) <= bound {
        "OK"
    } else {
        "VIOLATION"
    };
    let mut out = format!("count={} bound={bound} {verdict}\n", result.count);
    if histogram {
        match &result.activation_histogram {
            Some(h) => writeln!(out, "first_layer={h}").unwrap(),
            None => writeln!(out, "first_layer=n/a").unwrap(),
        }
    }
    Ok(out)
}

fn demo_text(ctx: &Context, name: &str, variant: &str) -> Result<String> {
    let (with, without) = match name {
        "unet_small" => ("unet_small", "ae_small"),
        "resnet_small" => ("resnet_small", "resnet_small_plain"),
        _ => {
            return Err(Error::UnknownBuiltin(format!(
                "{name} (demos: unet_small, resnet_small)"
            )))
        }
    };
    let provider = ctx.provider(variant)?;
    let run = |n: &str| -> Result<num_bigint::BigUint> {
        let spec = archspec::builtin(n)?;
        Ok(evaluate(&resolve(&spec)?, &provider, spec.input.nodes(), ctx.config)?.bound)
    };
    let (a, b) = (run(with)?, run(without)?);
    let ratio = Scientific::from_ratio(&a, &b, ctx.config.mantissa_digits).compact();
    let width = with.len().max(without.len());
    Ok(format!(
        "{with:width$}  {a} ({})\n{without:width$}  {b} ({})\n{:width$}  {ratio}\n",
        ctx.sci(&a),
        ctx.sci(&b),
        "ratio"
    ))
}

fn resolve_text(arch: &str) -> Result<String> {
    fn walk(stages: &[ResolvedStage], depth: usize, out: &mut String) {
        for s in stages {
            writeln!(out, "{}{} rank={}", "  ".repeat(depth), s.label(), s.rank).unwrap();
            walk(&s.body, depth + 1, out);
        }
    }
    let (stages, n0) = load_stages(arch)?;
    let mut out = format!("input {n0}\n");
    walk(&stages, 0, &mut out);
    Ok(out)
}

fn list_text(ctx: &Context) -> String {
    format!(
        "variants: {}\nmethods: {}\nbuiltins: {}, mlp(n0,ni,k)\n",
        ctx.registry.names().join(", "),
        oracle::counter_names().collect::<Vec<_>>().join(", "),
        archspec::Builtin::NAMED.join(", ")
    )
}

/// Runs a parsed command and returns its output text.
pub fn run(cli: Cli) -> Result<String> {
    let ctx = Context::new(&cli.global);
    match cli.command {
        Command::Gamma {
            variant,
            nprime,
            layout,
            labels,
        } => gamma_text(&ctx, &variant, nprime, layout, labels),
        Command::Bmatrix { variant, nprime } => bmatrix_text(&ctx, &variant, nprime),
        Command::Bound {
            arch,
            variant,
            per_stage,
        } => bound_text(&ctx, &arch, &variant, per_stage),
        Command::Compare { arch } => compare_text(&ctx, &arch),
        Command::Sweep { n0, widths, depths } => sweep_text(&ctx, n0, widths, &depths),
        Command::Oracle {
            net,
            method,
            samples,
            seed,
            variant,
            histogram,
        } => oracle_text(&ctx, &net, &method, samples, seed, &variant, histogram),
        Command::Demo { name, variant } => demo_text(&ctx, &name, &variant),
        Command::Resolve { arch } => resolve_text(&arch),
        Command::List => Ok(list_text(&ctx)),
    }
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let output = cli.global.output.clone();
    match run(cli) {
        Ok(text) => {
            let written = match &output {
                Some(path) => std::fs::write(path, &text),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(text.as_bytes())
                }
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_resource_cap() {
                2
            } else {
                1
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<String> {
        run(
            Cli::try_parse_from(std::iter::once("regionbound").chain(args.iter().copied()))
                .unwrap(),
        )
    }

    #[test]
    fn depth_ranges() {
        assert_eq!(parse_depths("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_depths("10..40:10").unwrap(), vec![10, 20, 30, 40]);
        assert_eq!(parse_depths("2,5").unwrap(), vec![2, 5]);
        assert_eq!(parse_depths("").unwrap(), Vec::<usize>::new());
        assert!(parse_depths("5..1").is_err());
        assert!(parse_depths("1..5:0").is_err());
        assert!(parse_depths("a").is_err());
    }

    #[test]
    fn gamma_seed_lines() {
        assert_eq!(
            run_args(&["gamma", "--variant", "ours", "--nprime", "1"]).unwrap(),
            "(0,1)\n(1,1)\n"
        );
        let labelled =
            run_args(&["gamma", "--variant", "serra", "--nprime", "1", "--labels"]).unwrap();
        assert_eq!(
            labelled,
            "gamma[serra][0][1] = (0,1)\ngamma[serra][1][1] = (1,1)\n"
        );
    }

    #[test]
    fn cap_is_a_resource_error() {
        let err = run_args(&["--gamma-cap", "8", "bmatrix", "--nprime", "9"]).unwrap_err();
        assert!(err.is_resource_cap());
        assert!(run_args(&["gamma", "--variant", "nope", "--nprime", "2"]).is_err());
    }

    #[test]
    fn builtin_bounds() {
        let out = run_args(&["bound", "builtin:mlp(1,2,1)"]).unwrap();
        assert_eq!(out, "3\n3.000×10^0\n");
        let out = run_args(&["compare", "builtin:mlp(10,6,3)"]).unwrap();
        assert_eq!(
            out,
            "ours  94928 (9.493×10^4)\nserra 96753 (9.675×10^4)\nratio 1.019\n"
        );
        assert!(matches!(
            run_args(&["demo", "vgg"]),
            Err(Error::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            main_with_args([
                "regionbound",
                "--gamma-cap",
                "3",
                "gamma",
                "--nprime",
                "4",
                "--output",
                "/dev/null"
            ]),
            2
        );
        assert_eq!(main_with_args(["regionbound", "bound", "builtin:nope"]), 1);
        assert_eq!(main_with_args(["regionbound", "frobnicate"]), 1);
        assert_eq!(main_with_args(["regionbound", "--digits", "0", "list"]), 1);
        assert_eq!(
            main_with_args(["regionbound", "list", "--output", "/dev/null"]),
            0
        );
    }
}
