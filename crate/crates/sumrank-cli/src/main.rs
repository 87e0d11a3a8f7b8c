mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sumrank::codes::{read_code, write_code, write_matrix, write_vectors, LinearCode};
use sumrank::counting::{divisors, log2_biguint, log2_rational, sphere_curve, sphere_size, sphere_size_log2_upper_bound};
use sumrank::decoder::{run_experiment, DecodeConfig, GenericDecoder, KindChoice};
use sumrank::distribution::{rational_to_f64, SupportDistribution};
use sumrank::ffalg::make_field;
use sumrank::reduction::{run_demo, DemoConfig};
use sumrank::sampling::{fork_rng, seeded_rng, UniformErrorSampler};
use sumrank::srspace::{SumRankParams, SupportKind};
use sumrank::workfactor::{self, figure_params, optimal_distribution_lp, WIterModel, WorkFactorParams};

#[derive(Parser, Debug)]
#[command(name = "sumrank", version, about = "Sum-rank metric counting, sampling, generic decoding and work factors")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel sweeps and experiments (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Key-value file whose entries fill flags not given on the command line.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sphere sizes: exact counts and the closed-form bound.
    #[command(subcommand)]
    Sphere(SphereCmd),
    /// Draw uniform errors or designed-distribution supports.
    #[command(subcommand)]
    Sample(SampleCmd),
    /// Planted-error experiment with the generic decoder.
    Decode(DecodeArgs),
    /// Work-factor estimates as CSV, one row per ell.
    Workfactor(WorkfactorArgs),
    /// Optimal support distribution by exact linear programming.
    LpOptimal(LpArgs),
    /// Hamming-to-sum-rank reduction.
    #[command(subcommand)]
    Reduce(ReduceCmd),
}

#[derive(Args, Debug, Clone)]
struct SpaceArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Number of blocks; must divide n.
    #[arg(long, default_value_t = 1)]
    ell: usize,
}

#[derive(Args, Debug)]
struct SphereArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long)]
    t: usize,
    /// Sweep every ell dividing n.
    #[arg(long)]
    all_ell: bool,
}

#[derive(Subcommand, Debug)]
enum SphereCmd {
    /// Exact number of vectors of sum-rank weight t.
    Count(SphereArgs),
    /// Exact count next to the closed-form upper bound (log2).
    Bound(SphereArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Row,
    Column,
    Auto,
}

impl From<KindArg> for KindChoice {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Row => KindChoice::Row,
            KindArg::Column => KindChoice::Column,
            KindArg::Auto => KindChoice::Auto,
        }
    }
}

#[derive(Subcommand, Debug)]
enum SampleCmd {
    /// Uniform vectors of sum-rank weight exactly t, one per line.
    Error {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Supports of dimension s drawn from the decoder's distribution for t.
    Support {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Auto)]
        kind: KindArg,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

#[derive(Args, Debug)]
struct DecodeArgs {
    #[arg(long, required_unless_present = "code")]
    q: Option<u64>,
    #[arg(long, required_unless_present = "code")]
    m: Option<usize>,
    #[arg(long, required_unless_present = "code")]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    ell: usize,
    #[arg(long, required_unless_present = "code")]
    k: Option<usize>,
    #[arg(long)]
    t: usize,
    /// Support dimension; defaults to the largest uniquely decodable one.
    #[arg(long)]
    s: Option<usize>,
    #[arg(long, value_enum, default_value_t = KindArg::Auto)]
    kind: KindArg,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long)]
    max_iterations: Option<u64>,
    /// Read the parity-check matrix from this file instead of drawing one.
    #[arg(long)]
    code: Option<PathBuf>,
    /// Save the code used.
    #[arg(long)]
    write_code: Option<PathBuf>,
    /// Write per-trial records as CSV.
    #[arg(long)]
    trials_csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Unit,
    Cubic,
}

#[derive(Args, Debug)]
struct WorkfactorArgs {
    /// Use the parameters of comparison figure 2, 3 or 4.
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
    figure: Option<u8>,
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long, required_unless_present = "figure")]
    m: Option<usize>,
    #[arg(long, required_unless_present = "figure")]
    n: Option<usize>,
    #[arg(long, required_unless_present = "figure")]
    k: Option<usize>,
    #[arg(long, required_unless_present = "figure")]
    t: Option<usize>,
    #[arg(long, required_unless_present = "figure")]
    s: Option<usize>,
    /// Comma-separated list; defaults to every divisor of n.
    #[arg(long, value_delimiter = ',')]
    ell: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = ModelArg::Unit)]
    w_iter: ModelArg,
    /// Also solve the optimal-distribution LP where it fits under the cap.
    #[arg(long)]
    optimal: bool,
    #[arg(long, default_value_t = 2000)]
    lp_cap: usize,
}

#[derive(Args, Debug)]
struct LpArgs {
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long)]
    zeta: usize,
    /// Defaults to zeta.
    #[arg(long)]
    mu: Option<usize>,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    s: usize,
    #[arg(long, default_value_t = 2000)]
    lp_cap: usize,
}

#[derive(Subcommand, Debug)]
enum ReduceCmd {
    /// Run the randomized Hamming decision procedures on tiny instances.
    Demo {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[arg(long, default_value_t = 8)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0.0)]
        false_negative_rate: f64,
    },
}

type CmdResult = Result<String, Box<dyn std::error::Error>>;

fn params(space: &SpaceArgs) -> Result<SumRankParams, sumrank::Error> {
    SumRankParams::new(space.n, space.ell, space.m)
}

fn fmt_log2(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.4}")
    } else {
        String::new()
    }
}

fn cmd_sphere(cmd: &SphereCmd) -> CmdResult {
    let (args, bound) = match cmd {
        SphereCmd::Count(a) => (a, false),
        SphereCmd::Bound(a) => (a, true),
    };
    let sp = &args.space;
    make_field(sp.q, sp.m)?;
    let mut out = String::new();
    if args.all_ell {
        if bound {
            out.push_str("ell,log2_exact,log2_bound\n");
        } else {
            out.push_str("ell,count,log2_count\n");
        }
        for row in sphere_curve(sp.q, sp.m, sp.n, args.t) {
            if bound {
                writeln!(out, "{},{},{}", row.ell, fmt_log2(row.log2_exact), fmt_log2(row.log2_bound))?;
            } else {
                writeln!(out, "{},{},{}", row.ell, row.exact, fmt_log2(row.log2_exact))?;
            }
        }
        return Ok(out);
    }
    let p = params(sp)?;
    let exact = sphere_size(args.t, p.ell, sp.q, p.eta, p.m);
    if bound {
        let log2_exact = log2_biguint(&exact);
        let b = sphere_size_log2_upper_bound(args.t, p.ell, sp.q, p.eta, p.m).unwrap_or(log2_exact);
        out.push_str("ell,log2_exact,log2_bound\n");
        writeln!(out, "{},{},{}", p.ell, fmt_log2(log2_exact), fmt_log2(b))?;
    } else {
        writeln!(out, "{exact}")?;
        writeln!(out, "log2≈{}", fmt_log2(log2_biguint(&exact)))?;
    }
    Ok(out)
}

fn cmd_sample(cmd: &SampleCmd, seed: u64) -> CmdResult {
    let root = seeded_rng(seed);
    match cmd {
        SampleCmd::Error { space, t, count } => {
            let ctx = make_field(space.q, space.m)?;
            let sampler = UniformErrorSampler::new(*t, params(space)?, &ctx)?;
            let vs: Vec<_> = (0..*count as u64).map(|i| sampler.sample(&mut fork_rng(&root, i)).entries).collect();
            Ok(write_vectors(&vs))
        }
        SampleCmd::Support { space, t, s, kind, count } => {
            let ctx = make_field(space.q, space.m)?;
            let p = params(space)?;
            let kind = sumrank::decoder::resolve_kind(&p, (*kind).into());
            let dist = SupportDistribution::new(space.q, p.zeta(kind), *t, p.ell, p.mu, *s)?;
            let mut out = String::new();
            for i in 0..*count as u64 {
                let sup = dist.draw_support(kind, &ctx.base, &mut fork_rng(&root, i))?;
                let kind_name = match kind {
                    SupportKind::Row => "row",
                    SupportKind::Column => "column",
                };
                writeln!(out, "# support {i} kind={kind_name} zeta={} dims={:?}", sup.zeta, sup.dims())?;
                for (b, basis) in sup.bases.iter().enumerate() {
                    writeln!(out, "block {b}")?;
                    out.push_str(&write_matrix(basis));
                }
            }
            Ok(out)
        }
    }
}

fn cmd_decode(a: &DecodeArgs, seed: u64) -> CmdResult {
    let code: LinearCode = match &a.code {
        Some(path) => read_code(&fs::read_to_string(path)?)?.1,
        None => {
            let (q, m, n, k) = (a.q.unwrap(), a.m.unwrap(), a.n.unwrap(), a.k.unwrap());
            let ctx = make_field(q, m)?;
            let p = SumRankParams::new(n, a.ell, m)?;
            LinearCode::random(p, k, &ctx, &mut fork_rng(&seeded_rng(seed), u64::MAX))?
        }
    };
    if let Some(path) = &a.write_code {
        fs::write(path, write_code(&code))?;
    }
    let cfg = DecodeConfig { s: a.s, max_iterations: a.max_iterations, kind: a.kind.into() };
    let decoder = GenericDecoder::new(code, a.t, &cfg)?;
    let summary = run_experiment(&decoder, a.trials, seed)?;
    if let Some(path) = &a.trials_csv {
        fs::write(path, summary.to_csv())?;
    }
    let p = decoder.code.params;
    let (lo, hi) = decoder.success_probability_bounds();
    let q_value = decoder.distribution().normalizer();
    let mut out = String::new();
    writeln!(out, "q={} m={} n={} k={} ell={} t={} s={} kind={:?}", decoder.code.ctx().q, p.m, p.n, decoder.code.k, p.ell, decoder.t, decoder.s, decoder.kind)?;
    writeln!(out, "trials={} seed={seed}", a.trials)?;
    writeln!(out, "mean_iterations={:.4}", summary.mean_iterations)?;
    writeln!(out, "var_iterations={:.4}", summary.var_iterations)?;
    writeln!(out, "success_rate={:.4}", summary.success_rate)?;
    writeln!(out, "per_iteration_success={:.6} se={:.6}", summary.per_iteration_success, summary.per_iteration_se)?;
    writeln!(out, "bound_low={:.6} bound_high={:.6}", rational_to_f64(&lo), rational_to_f64(&hi))?;
    writeln!(out, "log2_Q={:.4}", log2_rational(q_value))?;
    Ok(out)
}

fn cmd_workfactor(a: &WorkfactorArgs) -> CmdResult {
    let mut base = match a.figure {
        Some(f) => figure_params(f)?,
        None => WorkFactorParams { q: a.q, m: 0, n: 0, k: 0, ell: 1, t: 0, s: 0, model: WIterModel::Unit },
    };
    base.m = a.m.unwrap_or(base.m);
    base.n = a.n.unwrap_or(base.n);
    base.k = a.k.unwrap_or(base.k);
    base.t = a.t.unwrap_or(base.t);
    base.s = a.s.unwrap_or(base.s);
    if a.figure.is_none() {
        base.q = a.q;
    }
    base.model = match a.w_iter {
        ModelArg::Unit => WIterModel::Unit,
        ModelArg::Cubic => WIterModel::Cubic,
    };
    let ells = a.ell.clone().unwrap_or_else(|| divisors(base.n));
    if ells.is_empty() {
        return Err("empty ell list".into());
    }
    let reports = workfactor::sweep(&base, &ells, a.optimal.then_some(a.lp_cap))?;
    let mut out = String::from(workfactor::CSV_HEADER);
    out.push('\n');
    for r in &reports {
        if let Err(e) = r.params.check_feasible() {
            eprintln!("warning: ell={} is infeasible for the decoder: {e}", r.params.ell);
        }
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    Ok(out)
}

fn cmd_lp(a: &LpArgs) -> CmdResult {
    let mu = a.mu.unwrap_or(a.zeta);
    let sol = optimal_distribution_lp(a.q, a.zeta, a.t, a.ell, mu, a.s, a.lp_cap)?;
    let q_value = SupportDistribution::new(a.q, a.zeta, a.t, a.ell, mu, a.s)?.normalizer().clone();
    let mut out = String::new();
    writeln!(out, "xi={}", sol.xi)?;
    writeln!(out, "xi_inverse={}", sol.xi.recip())?;
    writeln!(out, "log2_xi_inverse={:.6}", -log2_rational(&sol.xi))?;
    writeln!(out, "Q={q_value}")?;
    writeln!(out, "log2_Q={:.6}", log2_rational(&q_value))?;
    writeln!(out, "probability_total={}", sol.probability_total())?;
    out.push_str("s_vector,multiplicity,probability\n");
    for ((v, m), p) in sol.instance.s_vectors.iter().zip(&sol.instance.multiplicities).zip(&sol.probabilities) {
        let v: Vec<String> = v.iter().map(usize::to_string).collect();
        writeln!(out, "{},{m},{p}", v.join(" "))?;
    }
    Ok(out)
}

fn cmd_reduce(cmd: &ReduceCmd, seed: u64) -> CmdResult {
    let ReduceCmd::Demo { n, ell, m, k, q, t, trials, false_negative_rate } = *cmd;
    let cfg = DemoConfig { q, m, n, k, ell, t, trials, seed, false_negative_rate };
    Ok(run_demo(&cfg)?.table())
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Sphere(c) => cmd_sphere(c),
        Command::Sample(c) => cmd_sample(c, cli.seed),
        Command::Decode(a) => cmd_decode(a, cli.seed),
        Command::Workfactor(a) => cmd_workfactor(a),
        Command::LpOptimal(a) => cmd_lp(a),
        Command::Reduce(c) => cmd_reduce(c, cli.seed),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let argv = match config::apply_config(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(argv);
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let text = match run(&cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
