//! Command-line surface for the jackpath engines.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 numerical-consistency error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use jackpath::asymptotics;
use jackpath::fock;
use jackpath::partition::{partitions_of_size, Partition};
use jackpath::profile;
use jackpath::ribbon;
use jackpath::sampler;
use jackpath::scalar::{Rat, Scalar};
use jackpath::{AnisotropyParams, BiPolynomial, Specialization};
use num_complex::Complex64;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "jackpath",
    version,
    about = "Jack measure statistics by path enumeration, operator algebra, and partition sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump graded path sums (Y, W) or connected profile counts for given site lengths
    Enumerate(EnumerateArgs),
    /// Joint transition moments by three routes with an agreement report
    Moments(MomentsArgs),
    /// Convex or dispersive limit-shape data
    LimitShape(LimitShapeArgs),
    /// Fluctuation covariances, Chebyshev table, and mean shift
    Fluctuations(FluctuationsArgs),
    /// Draw from a tabulated Jack measure
    Sample(SampleArgs),
    /// Run the built-in cross-check suite (optionally against a golden file)
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Mode {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SpecArgs {
    /// Specialization JSON used for both sides
    #[arg(long, conflicts_with_all = ["spec_out", "spec_in"])]
    spec: Option<PathBuf>,
    /// Out-specialization JSON (with --spec-in)
    #[arg(long, requires = "spec_in")]
    spec_out: Option<PathBuf>,
    /// In-specialization JSON (with --spec-out)
    #[arg(long, requires = "spec_out")]
    spec_in: Option<PathBuf>,
}

impl SpecArgs {
    fn load(&self) -> Result<(Specialization<Complex64>, Specialization<Complex64>), CliError> {
        let read = |path: &PathBuf| -> Result<Specialization<Complex64>, CliError> {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            Specialization::from_json(&text).map_err(CliError::Usage)
        };
        match (&self.spec, &self.spec_out, &self.spec_in) {
            (Some(p), None, None) => {
                let v = read(p)?;
                Ok((v.clone(), v))
            }
            (None, Some(o), Some(i)) => Ok((read(o)?, read(i)?)),
            (None, None, None) => {
                let v = Specialization::plancherel();
                Ok((v.clone(), v))
            }
            _ => Err(CliError::Usage(
                "give --spec or both --spec-out/--spec-in".into(),
            )),
        }
    }
}

#[derive(Args)]
struct ParamArgs {
    /// Anisotropy ε̄ (with --hbar)
    #[arg(
        long,
        default_value_t = 0.0,
        conflicts_with = "alpha",
        allow_negative_numbers = true
    )]
    ebar: f64,
    /// Quantization ℏ > 0
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    hbar: f64,
    /// Jack parameter α > 0 (alternative to --ebar, needs --hbar)
    #[arg(long)]
    alpha: Option<f64>,
}

impl ParamArgs {
    fn build(&self) -> Result<AnisotropyParams<Complex64>, CliError> {
        let p = match self.alpha {
            Some(a) => AnisotropyParams::from_alpha_hbar(a, self.hbar),
            None => AnisotropyParams::from_ebar_hbar(self.ebar, self.hbar),
        };
        p.map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

impl OutputArgs {
    fn write(&self, content: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => std::fs::write(path, content)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
            None => std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(|e| CliError::Usage(e.to_string())),
        }
    }
}

#[derive(Args)]
struct EnumerateArgs {
    /// Site lengths, comma separated (e.g. 2,2)
    #[arg(long, value_delimiter = ',', required = true)]
    lengths: Vec<u32>,
    #[command(flatten)]
    spec: SpecArgs,
    /// Restrict to connected counts with these unpaired down degrees
    #[arg(long, value_delimiter = ',')]
    mu_out: Option<Vec<u32>>,
    /// Restrict to connected counts with these unpaired up degrees
    #[arg(long, value_delimiter = ',')]
    mu_in: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value_t = Mode::Numeric)]
    mode: Mode,
    /// Worker threads for the path sums; 1 forces the canonical-order
    /// single-threaded reduction
    #[arg(long, default_value_t = default_threads())]
    threads: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct MomentsArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    lengths: Vec<u32>,
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    params: ParamArgs,
    /// Degree cutoff for the operator and partition-sum routes
    #[arg(long, default_value_t = 20)]
    degree_cutoff: u32,
    /// Relative tolerance of the agreement report
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ShapeKind {
    Convex,
    Dispersive,
}

#[derive(Args)]
struct LimitShapeArgs {
    #[arg(long, value_enum)]
    kind: ShapeKind,
    #[command(flatten)]
    spec: SpecArgs,
    /// ε̄ (< 0 for dispersive profiles)
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    ebar: f64,
    /// Lax truncation size
    #[arg(long, default_value_t = 400)]
    matrix_size: usize,
    /// Moment order for the convex report
    #[arg(long, default_value_t = 8)]
    series_order: u32,
    /// Number of grid points for (c, f(c)) output
    #[arg(long, default_value_t = 41)]
    grid_points: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FluctuationsArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    ebar: f64,
    /// Largest linear-statistic index in the covariance table
    #[arg(long, visible_alias = "p", default_value_t = 4)]
    p_max: u32,
    /// Chebyshev table size (Plancherel regime only)
    #[arg(long, default_value_t = 5)]
    chebyshev_max: u32,
    /// Finite-difference step for the welding derivatives
    #[arg(long, default_value_t = 1e-4)]
    fd_step: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    params: ParamArgs,
    /// Table cutoff on |λ|
    #[arg(long, default_value_t = 12)]
    degree_cutoff: u32,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Refuse to sample when the tail mass exceeds this
    #[arg(long, default_value_t = 1e-6)]
    tail_threshold: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Compare freshly computed eigenvector tables against this golden file
    #[arg(long)]
    golden: Option<PathBuf>,
    /// Write a fresh golden file and exit
    #[arg(long)]
    write_golden: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Numerical(String),
    Verification(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Moments(args) => cmd_moments(args),
        Command::LimitShape(args) => cmd_limit_shape(args),
        Command::Fluctuations(args) => cmd_fluctuations(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failure: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical-consistency error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn metadata_block(fields: &[(&str, String)]) -> String {
    let mut out = format!("# jackpath {}\n", env!("CARGO_PKG_VERSION"));
    for (k, v) in fields {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    out
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<(), CliError> {
    let (v_out, v_in) = args.spec.load()?;
    let meta = metadata_block(&[
        ("command", "enumerate".into()),
        ("lengths", format!("{:?}", args.lengths)),
        (
            "mode",
            if args.mode == Mode::Exact {
                "exact".into()
            } else {
                "numeric".into()
            },
        ),
        ("threads", args.threads.to_string()),
    ]);
    if args.mu_out.is_some() != args.mu_in.is_some() {
        return Err(CliError::Usage(
            "--mu-out and --mu-in must be given together".into(),
        ));
    }
    if let (Some(mo), Some(mi)) = (&args.mu_out, &args.mu_in) {
        let mu_out = Partition::from_unsorted(mo.clone());
        let mu_in = Partition::from_unsorted(mi.clone());
        let counts = ribbon::c_count(&args.lengths, &mu_out, &mu_in)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let body = match args.output.format {
            Format::Json => {
                let rows: Vec<serde_json::Value> = counts
                    .iter()
                    .map(|(&(q, m), &c)| serde_json::json!({"q": q, "m": m, "count": c}))
                    .collect();
                serde_json::to_string_pretty(&rows).unwrap() + "\n"
            }
            Format::Csv => {
                let mut s = meta;
                s.push_str("q,m,count\n");
                for (&(q, m), &c) in &counts {
                    s.push_str(&format!("{q},{m},{c}\n"));
                }
                s
            }
        };
        return args.output.write(&body);
    }

    let options = ribbon::SumOptions {
        prune_zero_slides: true,
        threads: args.threads.max(1),
    };
    let body = match args.mode {
        Mode::Numeric => {
            let sums = ribbon::graded_sums(&args.lengths, &v_out, &v_in, options)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            render_sums(&args.output, &meta, &sums.all, &sums.connected)
        }
        Mode::Exact => {
            let conv = |v: &Specialization<Complex64>| {
                Specialization::<Rat>::new(
                    v.iter()
                        .map(|(k, z)| (k, Rat::from_f64_pair(z.re, z.im).expect("finite")))
                        .collect(),
                    None,
                )
            };
            let sums = ribbon::graded_sums(&args.lengths, &conv(&v_out), &conv(&v_in), options)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            render_sums(&args.output, &meta, &sums.all, &sums.connected)
        }
    };
    args.output.write(&body)
}

fn render_sums<T: Scalar>(
    output: &OutputArgs,
    meta: &str,
    all: &BiPolynomial<T>,
    connected: &BiPolynomial<T>,
) -> String {
    match output.format {
        Format::Json => {
            serde_json::to_string_pretty(&serde_json::json!({
                "moments": all.to_json(),
                "cumulants": connected.to_json(),
            }))
            .unwrap()
                + "\n"
        }
        Format::Csv => {
            let mut s = String::from(meta);
            s.push_str("table,q,m,re,im,value\n");
            for (name, poly) in [("Y", all), ("W", connected)] {
                for ((q, m), c) in poly.terms() {
                    let z = c.to_complex();
                    s.push_str(&format!("{name},{q},{m},{},{},{}\n", z.re, z.im, c));
                }
            }
            s
        }
    }
}

fn cmd_moments(args: MomentsArgs) -> Result<(), CliError> {
    let (v_out, v_in) = args.spec.load()?;
    let params = args.params.build()?;
    let hbar = params.hbar();
    let ebar = params.ebar();

    let poly = ribbon::moments_poly(&args.lengths, &v_out, &v_in)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let path_value = poly.eval(hbar, ebar);

    let op =
        fock::joint_moments_operator(&args.lengths, &v_out, &v_in, &params, args.degree_cutoff);

    // partition sum with profile-route eigenvalues
    let mut sum_value = Complex64::new(0.0, 0.0);
    let exact_norm = fock::pairing_exponent(&v_out, &v_in).div_ref(&hbar).exp();
    let mut reported_tail = 1.0f64;
    let mut mass_seen = Complex64::new(0.0, 0.0);
    let lmax = *args.lengths.iter().max().unwrap() as usize;
    for d in 0..=args.degree_cutoff {
        let basis =
            fock::jack_basis(d, &params, 0).map_err(|e| CliError::Numerical(e.to_string()))?;
        let mut increment = Complex64::new(0.0, 0.0);
        for lam in partitions_of_size(d) {
            let prob = fock::jack_measure_prob_with_basis(&basis, &lam, &v_out, &v_in, &params);
            mass_seen += prob;
            let t = profile::transition_moments(&profile::profile_of(&lam, &params), lmax);
            let factor: Complex64 = args.lengths.iter().map(|&l| t[l as usize]).product();
            increment += prob * factor;
        }
        sum_value += increment;
        reported_tail = (mass_seen / exact_norm - 1.0).norm();
        if increment.norm() < 1e-12 * sum_value.norm().max(1.0) && d >= 4 {
            break;
        }
    }

    let scale = path_value.norm().max(1.0);
    let d_op = (op.value - path_value).norm() / scale;
    let d_sum = (sum_value - path_value).norm() / scale;
    let meta = metadata_block(&[
        ("command", "moments".into()),
        ("lengths", format!("{:?}", args.lengths)),
        ("ebar", ebar.re.to_string()),
        ("hbar", hbar.re.to_string()),
        ("degree-cutoff", args.degree_cutoff.to_string()),
        ("tail-estimate", format!("{reported_tail:.3e}")),
    ]);
    let body = match args.output.format {
        Format::Json => {
            serde_json::to_string_pretty(&serde_json::json!({
                "polynomial": poly.to_json(),
                "paths": [path_value.re, path_value.im],
                "operator": [op.value.re, op.value.im],
                "partition_sum": [sum_value.re, sum_value.im],
                "tail_estimate": reported_tail,
                "relative_spread": d_op.max(d_sum),
            }))
            .unwrap()
                + "\n"
        }
        Format::Csv => {
            let mut s = meta;
            s.push_str("route,re,im\n");
            s.push_str(&format!("paths,{},{}\n", path_value.re, path_value.im));
            s.push_str(&format!("operator,{},{}\n", op.value.re, op.value.im));
            s.push_str(&format!(
                "partition_sum,{},{}\n",
                sum_value.re, sum_value.im
            ));
            s
        }
    };
    args.output.write(&body)?;
    if d_op > args.tolerance || d_sum > args.tolerance + reported_tail {
        return Err(CliError::Numerical(format!(
            "route disagreement: operator {d_op:.3e}, partition sum {d_sum:.3e} (tolerance {:.3e}, tail {reported_tail:.3e})",
            args.tolerance
        )));
    }
    Ok(())
}

fn cmd_limit_shape(args: LimitShapeArgs) -> Result<(), CliError> {
    let (v, _) = args.spec.load()?;
    match args.kind {
        ShapeKind::Convex => {
            let moments = asymptotics::convex_profile_moments(&v, args.series_order);
            let edge = 2.0 * v.iter().map(|(_, z)| z.norm()).sum::<f64>() + 0.5;
            let meta = metadata_block(&[
                ("command", "limit-shape convex".into()),
                ("series-order", args.series_order.to_string()),
                ("grid-points", args.grid_points.to_string()),
            ]);
            let mut s = meta;
            s.push_str("section,key,value\n");
            for (p, m) in moments.iter().enumerate() {
                s.push_str(&format!("moment,{p},{m}\n"));
            }
            for i in 0..args.grid_points {
                let c = -edge + 2.0 * edge * (i as f64) / (args.grid_points.max(2) - 1) as f64;
                s.push_str(&format!(
                    "profile,{c},{}\n",
                    asymptotics::convex_profile_value(&v, c)
                ));
            }
            args.output.write(&s)
        }
        ShapeKind::Dispersive => {
            let data = asymptotics::dispersive_profile(&v, args.ebar, args.matrix_size)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            let meta = metadata_block(&[
                ("command", "limit-shape dispersive".into()),
                ("ebar", args.ebar.to_string()),
                ("matrix-size", args.matrix_size.to_string()),
            ]);
            let mut s = meta;
            s.push_str("section,index,s_up,s_down,gap_ratio\n");
            let gaps = data.gap_ratios();
            for i in 0..data.poles.len() {
                let down = data.zeros.get(i).map(|z| z.to_string()).unwrap_or_default();
                let gap = gaps.get(i).map(|g| g.to_string()).unwrap_or_default();
                s.push_str(&format!("extrema,{i},{},{down},{gap}\n", data.poles[i]));
            }
            // slope ±1 reconstruction on an even grid across the support
            let prof = data.profile();
            let lo = data.poles.last().copied().unwrap_or(-1.0) - 1.0;
            let hi = data.poles.first().copied().unwrap_or(1.0) + 1.0;
            for i in 0..args.grid_points {
                let c = lo + (hi - lo) * (i as f64) / (args.grid_points.max(2) - 1) as f64;
                s.push_str(&format!("profile,{i},{c},{},\n", prof.eval(c)));
            }
            args.output.write(&s)
        }
    }
}

fn cmd_fluctuations(args: FluctuationsArgs) -> Result<(), CliError> {
    let (v, _) = args.spec.load()?;
    let meta = metadata_block(&[
        ("command", "fluctuations".into()),
        ("ebar", args.ebar.to_string()),
        ("p-max", args.p_max.to_string()),
        ("fd-step", args.fd_step.to_string()),
    ]);
    let mut s = meta;
    s.push_str("section,p1,p2,value,method\n");
    for p1 in 1..=args.p_max {
        for p2 in p1..=args.p_max {
            let paths = asymptotics::covariance_paths(&v, args.ebar, p1, p2);
            s.push_str(&format!("covariance,{p1},{p2},{paths},paths\n"));
            let weld = asymptotics::covariance_welding(&v, args.ebar, p1, p2, args.fd_step);
            s.push_str(&format!("covariance,{p1},{p2},{weld},welding\n"));
            if args.ebar == 0.0 {
                let bd = asymptotics::covariance_bd(&v, p1, p2);
                s.push_str(&format!("covariance,{p1},{p2},{bd},quadrature\n"));
            }
        }
    }
    let shift = asymptotics::mean_shift_moments(&v, args.p_max.max(3), args.fd_step);
    for (p, x) in shift.iter().enumerate().skip(1) {
        s.push_str(&format!("mean_shift,{p},,{x},fd\n"));
    }
    if args.ebar == 0.0 {
        for k in 1..=args.chebyshev_max {
            for kp in k..=args.chebyshev_max {
                let cov = asymptotics::chebyshev_covariance(&v, k, kp);
                s.push_str(&format!("chebyshev,{k},{kp},{cov},quadrature\n"));
            }
        }
    }
    args.output.write(&s)
}

fn cmd_sample(args: SampleArgs) -> Result<(), CliError> {
    let (v, _) = args.spec.load()?;
    let params = args.params.build()?;
    let table = sampler::build_table(&v, &params, args.degree_cutoff)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let run = sampler::sample(&table, args.seed, args.count, args.tail_threshold)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let meta = metadata_block(&[
        ("command", "sample".into()),
        ("seed", args.seed.to_string()),
        ("count", args.count.to_string()),
        ("degree-cutoff", args.degree_cutoff.to_string()),
        ("tail-mass", format!("{:.3e}", table.tail_mass)),
        ("tail-hits", run.tail_hits.to_string()),
    ]);
    let mut s = meta;
    s.push_str("draw,partition\n");
    for (i, lam) in run.partitions(&table).enumerate() {
        let parts: Vec<String> = lam.parts().iter().map(|p| p.to_string()).collect();
        s.push_str(&format!("{i},{}\n", parts.join(" ")));
    }
    args.output.write(&s)
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    if let Some(path) = &args.write_golden {
        let golden = compute_golden()?;
        std::fs::write(path, serde_json::to_string_pretty(&golden).unwrap())
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
        println!("golden file written to {}", path.display());
        return Ok(());
    }

    let mut failures = 0u32;
    let mut check = |name: &str, ok: bool| {
        println!("{} {name}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    let v_pl = Specialization::<Complex64>::plancherel();

    let catalan_ok = [(1u32, 1.0), (2, 2.0), (3, 5.0), (4, 14.0)]
        .iter()
        .all(|&(m, expected)| {
            ribbon::cumulants_poly(&[2 * m], &v_pl, &v_pl)
                .map(|w| (w.coeff(0, 0).re - expected).abs() < 1e-12)
                .unwrap_or(false)
        });
    check("catalan path counts", catalan_ok);

    let mc_ok = {
        let direct = ribbon::moments_poly(&[3, 2], &v_pl, &v_pl).unwrap();
        let assembled = ribbon::moments_from_cumulants(&[3, 2], &v_pl, &v_pl).unwrap();
        direct == assembled
    };
    check("moment-cumulant recursion", mc_ok);

    let params = AnisotropyParams::from_ebar_hbar(-0.7, 0.6).unwrap();
    let op_ok = {
        let poly = ribbon::moments_poly(&[4], &v_pl, &v_pl).unwrap();
        let expected = poly.eval(params.hbar(), params.ebar());
        let got = fock::joint_moments_operator(&[4], &v_pl, &v_pl, &params, 18).value;
        (got - expected).norm() < 1e-9 * expected.norm().max(1.0)
    };
    check("operator route agreement", op_ok);

    let profile_ok = {
        let p = AnisotropyParams::from_ebar_hbar(0.9, 1.3).unwrap();
        partitions_of_size(5).iter().all(|lam| {
            let a = profile::transition_moments(&profile::profile_of(lam, &p), 6);
            let b = profile::transition_moments_content_product(lam, &p, 6);
            a.iter()
                .zip(&b)
                .all(|(x, y)| (x - y).norm() < 1e-10 * (1.0 + y.norm()))
        })
    };
    check("content-product identity", profile_ok);

    let cov_ok = {
        let bd = asymptotics::covariance_bd(&v_pl, 2, 2);
        let paths = asymptotics::covariance_paths(&v_pl, 0.0, 2, 2);
        let weld = asymptotics::covariance_welding(&v_pl, 0.0, 2, 2, 1e-4);
        (bd - 4.0).abs() < 1e-8 && (paths - 4.0).abs() < 1e-12 && (weld - 4.0).abs() < 1e-5
    };
    check("covariance three-way", cov_ok);

    let sample_ok = {
        let params = AnisotropyParams::from_ebar_hbar(0.0, 1.0).unwrap();
        sampler::build_table(&v_pl, &params, 9)
            .map_err(|e| e.to_string())
            .and_then(|t| {
                let a = sampler::sample(&t, 11, 64, 1e-3).map_err(|e| e.to_string())?;
                let b = sampler::sample(&t, 11, 64, 1e-3).map_err(|e| e.to_string())?;
                Ok(a.draws == b.draws)
            })
            .unwrap_or(false)
    };
    check("sampling determinism", sample_ok);

    if let Some(path) = &args.golden {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let stored: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad golden file: {e}")))?;
        let fresh = compute_golden()?;
        check("golden eigenvector tables", golden_matches(&stored, &fresh));
    }

    if failures > 0 {
        Err(CliError::Verification(format!(
            "{failures} check(s) failed"
        )))
    } else {
        Ok(())
    }
}

/// Eigenvalue tables at a fixed parameter point, for regression pinning.
fn compute_golden() -> Result<serde_json::Value, CliError> {
    let params = AnisotropyParams::from_ebar_hbar(0.5, 1.25).unwrap();
    let mut blocks = Vec::new();
    for d in 0..=4u32 {
        let basis =
            fock::jack_basis(d, &params, 6).map_err(|e| CliError::Numerical(e.to_string()))?;
        blocks.push(basis.to_json());
    }
    Ok(serde_json::json!({ "ebar": 0.5, "hbar": 1.25, "blocks": blocks }))
}

fn golden_matches(stored: &serde_json::Value, fresh: &serde_json::Value) -> bool {
    let tol = 1e-9;
    let (Some(a), Some(b)) = (stored["blocks"].as_array(), fresh["blocks"].as_array()) else {
        return false;
    };
    if a.len() != b.len() {
        return false;
    }
    for (x, y) in a.iter().zip(b) {
        let (Some(ex), Some(ey)) = (x["entries"].as_array(), y["entries"].as_array()) else {
            return false;
        };
        if ex.len() != ey.len() {
            return false;
        }
        for (px, py) in ex.iter().zip(ey) {
            if px["lambda"] != py["lambda"] {
                return false;
            }
            let (Some(vx), Some(vy)) = (px["eigenvalues"].as_array(), py["eigenvalues"].as_array())
            else {
                return false;
            };
            for (va, vb) in vx.iter().zip(vy) {
                let (va, vb) = (
                    va.as_f64().unwrap_or(f64::NAN),
                    vb.as_f64().unwrap_or(f64::NAN),
                );
                if (va - vb).abs() > tol * va.abs().max(1.0) {
                    return false;
                }
            }
        }
    }
    true
}
