//! Command-line front door for the conformable fractional BVP toolkit.
//!
//! Subcommands: `green` (dump a kernel on a grid), `bounds` (envelope
//! functions and verified strip-bound margins), `certify` (existence
//! certificate for a nonlinearity), `solve` (certify, then Picard-iterate to
//! the guaranteed positive solution).
//!
//! Exit status: 0 on success or a certified run, 2 when certification fails
//! (a report is still emitted), 1 on usage or evaluation errors.

use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use conformable_core::existence::{self, Nonlinearity};
use conformable_core::frac::FracOrder;
use conformable_core::greens::{self, GreenKernel, SlParams};
use conformable_core::solver;

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Thread-count knob, reserved for the scan/quadrature loops. Validated
/// (integer >= 1) and currently pinned to sequential evaluation so outputs
/// stay byte-identical across machines.
const THREADS_ENV: &str = "CONFORMABLE_THREADS";

#[derive(Parser)]
#[command(name = "conformable", version, about = "Conformable fractional Sturm-Liouville toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dump the Green's function G(t, s) on a uniform grid.
    Green(GreenArgs),
    /// Envelope functions g1/g2, constants g3 and r_cross, and scanned
    /// strip-bound margins.
    Bounds(BoundsArgs),
    /// Check the growth conditions for f(s, x) and emit a certificate.
    Certify(CertifyArgs),
    /// Certify, then compute the guaranteed positive solution.
    Solve(SolveArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Conjugate,
    RightFocal,
    SturmLiouville,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct KernelOpts {
    /// Fractional order alpha in (0, 1].
    #[arg(long)]
    alpha: f64,
    /// Boundary-condition family.
    #[arg(long, value_enum, default_value = "conjugate")]
    family: Family,
    /// gamma coefficient (sturm-liouville only).
    #[arg(long)]
    gamma: Option<f64>,
    /// delta coefficient (sturm-liouville only).
    #[arg(long)]
    delta: Option<f64>,
    /// eta coefficient (sturm-liouville only).
    #[arg(long)]
    eta: Option<f64>,
    /// zeta coefficient (sturm-liouville only).
    #[arg(long)]
    zeta: Option<f64>,
}

#[derive(Args)]
struct OutputOpts {
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<std::path::PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct GreenArgs {
    #[command(flatten)]
    kernel: KernelOpts,
    /// Grid resolution per axis.
    #[arg(long, default_value_t = 513)]
    grid: usize,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    kernel: KernelOpts,
    /// Strip parameter n >= 3 (the strip is [1/n, 1 - 1/n]).
    #[arg(long, default_value_t = 4)]
    n: u32,
    /// Sample count for the g1/g2 traces.
    #[arg(long, default_value_t = 101)]
    grid: usize,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct CertifyArgs {
    /// Fractional order alpha in (0, 1].
    #[arg(long)]
    alpha: f64,
    /// Fractional order beta in (0, 1].
    #[arg(long)]
    beta: f64,
    /// Nonlinearity f(s, x) as an expression.
    #[arg(long)]
    f: String,
    /// Inner radius r.
    #[arg(long)]
    r: f64,
    /// Outer radius R.
    #[arg(long = "R")]
    r_outer: f64,
    /// Scan resolution per axis.
    #[arg(long, default_value_t = 513)]
    grid: usize,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    certify: CertifyArgs,
    /// Iteration stopping tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Iteration cap.
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Damping factor in (0, 1]; 1 is plain Picard.
    #[arg(long, default_value_t = 1.0)]
    damping: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version go to stdout with status 0; real usage errors to
            // stderr with status 1
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    if let Err(msg) = check_threads_env() {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn check_threads_env() -> Result<(), String> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(()),
            _ => Err(format!("{THREADS_ENV} = {v:?} must be an integer >= 1")),
        },
        Err(_) => Ok(()),
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.cmd {
        Cmd::Green(args) => run_green(args),
        Cmd::Bounds(args) => run_bounds(args),
        Cmd::Certify(args) => run_certify(args).map(|(code, _)| code),
        Cmd::Solve(args) => run_solve(args),
    }
}

/// 17 significant digits; the same text for the same bits, every run.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn emit(out: &OutputOpts, text: &str) -> Result<(), String> {
    match &out.output {
        Some(path) => fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn build_kernel(opts: &KernelOpts) -> Result<GreenKernel, String> {
    let any_coeff = opts.gamma.is_some()
        || opts.delta.is_some()
        || opts.eta.is_some()
        || opts.zeta.is_some();
    match opts.family {
        Family::SturmLiouville => {
            let (g, d, e, z) = (
                opts.gamma.ok_or("sturm-liouville needs --gamma")?,
                opts.delta.ok_or("sturm-liouville needs --delta")?,
                opts.eta.ok_or("sturm-liouville needs --eta")?,
                opts.zeta.ok_or("sturm-liouville needs --zeta")?,
            );
            let params = SlParams::new(g, d, e, z, opts.alpha).map_err(|e| e.to_string())?;
            Ok(GreenKernel::sturm_liouville(params))
        }
        family => {
            if any_coeff {
                return Err(String::from(
                    "--gamma/--delta/--eta/--zeta apply only to --family sturm-liouville",
                ));
            }
            match family {
                Family::Conjugate => GreenKernel::conjugate(opts.alpha),
                Family::RightFocal => GreenKernel::right_focal(opts.alpha),
                Family::SturmLiouville => unreachable!(),
            }
            .map_err(|e| e.to_string())
        }
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Conjugate => "conjugate",
        Family::RightFocal => "right_focal",
        Family::SturmLiouville => "sturm_liouville",
    }
}

fn run_green(args: GreenArgs) -> Result<u8, String> {
    if args.grid < 2 {
        return Err(format!("--grid {} must be >= 2", args.grid));
    }
    let kernel = build_kernel(&args.kernel)?;
    let n = args.grid;
    let coord = |i: usize| i as f64 / (n - 1) as f64;
    let text = match args.out.format {
        Format::Csv => {
            let mut s = String::from("t,s,G\n");
            for i in 0..n {
                for j in 0..n {
                    let (t, sx) = (coord(i), coord(j));
                    let _ = writeln!(s, "{},{},{}", num(t), num(sx), num(kernel.eval(t, sx)));
                }
            }
            s
        }
        Format::Json => {
            let mut s = String::from("{\n");
            let _ = writeln!(s, "  \"family\": \"{}\",", family_name(args.kernel.family));
            let _ = writeln!(s, "  \"alpha\": {},", num(kernel.params().alpha()));
            let _ = writeln!(s, "  \"grid\": {n},");
            s.push_str("  \"rows\": [\n");
            for i in 0..n {
                s.push_str("    [");
                for j in 0..n {
                    if j > 0 {
                        s.push_str(", ");
                    }
                    s.push_str(&num(kernel.eval(coord(i), coord(j))));
                }
                s.push_str(if i + 1 < n { "],\n" } else { "]\n" });
            }
            s.push_str("  ]\n}\n");
            s
        }
    };
    emit(&args.out, &text)?;
    Ok(0)
}

fn run_bounds(args: BoundsArgs) -> Result<u8, String> {
    if args.grid < 2 {
        return Err(format!("--grid {} must be >= 2", args.grid));
    }
    let kernel = build_kernel(&args.kernel)?;
    let params = kernel.params();
    let g3 = greens::g3(params, args.n).map_err(|e| e.to_string())?;
    let r_cross = greens::r_cross(params, args.n).map_err(|e| e.to_string())?;
    let (margin_g2, margin_g3) =
        greens::strip_bound_margins(&kernel, args.n, 401).map_err(|e| e.to_string())?;
    let m = args.grid;
    let coord = |i: usize| i as f64 / (m - 1) as f64;
    let text = match args.out.format {
        Format::Csv => {
            let mut s = String::from("t,g1,g2,g3,r_cross,margin_g2,margin_g3\n");
            for i in 0..m {
                let t = coord(i);
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    num(t),
                    num(greens::g1(params, t)),
                    num(greens::g2(params, args.n, t).map_err(|e| e.to_string())?),
                    num(g3),
                    num(r_cross),
                    num(margin_g2),
                    num(margin_g3),
                );
            }
            s
        }
        Format::Json => {
            let mut s = String::from("{\n");
            let _ = writeln!(s, "  \"family\": \"{}\",", family_name(args.kernel.family));
            let _ = writeln!(s, "  \"alpha\": {},", num(params.alpha()));
            let _ = writeln!(s, "  \"n\": {},", args.n);
            let _ = writeln!(s, "  \"g3\": {},", num(g3));
            let _ = writeln!(s, "  \"r_cross\": {},", num(r_cross));
            let _ = writeln!(s, "  \"margin_g2\": {},", num(margin_g2));
            let _ = writeln!(s, "  \"margin_g3\": {},", num(margin_g3));
            let push_samples = |s: &mut String, name: &str, f: &dyn Fn(f64) -> f64, last: bool| {
                s.push_str(&format!("  \"{name}\": ["));
                for i in 0..m {
                    if i > 0 {
                        s.push_str(", ");
                    }
                    s.push_str(&num(f(coord(i))));
                }
                s.push_str(if last { "]\n" } else { "],\n" });
            };
            push_samples(&mut s, "g1", &|t| greens::g1(params, t), false);
            push_samples(
                &mut s,
                "g2",
                &|t| greens::g2(params, args.n, t).unwrap_or(f64::NAN),
                true,
            );
            s.push_str("}\n");
            s
        }
    };
    emit(&args.out, &text)?;
    Ok(0)
}

struct CertifyOutcome {
    cert: existence::ExistenceCertificate,
    f: Nonlinearity,
    order: FracOrder,
}

fn certificate_json(args: &CertifyArgs, cert: &existence::ExistenceCertificate) -> String {
    let order = cert.order;
    let cap = existence::cond_i_bound(order, cert.r_outer).unwrap_or(f64::NAN);
    let mut s = String::from("{\n");
    let _ = writeln!(s, "  \"tool_version\": \"{TOOL_VERSION}\",");
    let _ = writeln!(s, "  \"f\": \"{}\",", args.f.replace('\\', "\\\\").replace('"', "\\\""));
    let _ = writeln!(s, "  \"alpha\": {},", num(order.alpha()));
    let _ = writeln!(s, "  \"beta\": {},", num(order.beta()));
    let _ = writeln!(s, "  \"r_inner\": {},", num(cert.r_inner));
    let _ = writeln!(s, "  \"r_outer\": {},", num(cert.r_outer));
    let _ = writeln!(s, "  \"n\": {},", num(cert.n_const));
    let _ = writeln!(s, "  \"n_form\": \"{}\",", cert.n_form);
    let _ = writeln!(s, "  \"cone_const\": {},", num(cert.cone_const));
    let _ = writeln!(s, "  \"cond_i_bound\": {},", num(cap));
    let _ = writeln!(s, "  \"cond_i_margin\": {},", num(cert.cond_i_margin));
    let _ = writeln!(s, "  \"cond_ii_threshold\": {},", num(cert.r_inner * cert.n_const));
    let _ = writeln!(s, "  \"cond_ii_margin\": {},", num(cert.cond_ii_margin));
    let _ = writeln!(s, "  \"scan_resolution\": {},", cert.grid);
    let _ = writeln!(s, "  \"status\": \"{}\"", cert.status.as_str());
    s.push_str("}\n");
    s
}

fn run_certify_inner(args: &CertifyArgs) -> Result<CertifyOutcome, String> {
    let order = FracOrder::new(args.alpha, args.beta).map_err(|e| e.to_string())?;
    let f = Nonlinearity::parse(&args.f).map_err(|e| e.to_string())?;
    let cert = existence::certify(&f, order, args.r, args.r_outer, args.grid)
        .map_err(|e| e.to_string())?;
    Ok(CertifyOutcome { cert, f, order })
}

fn run_certify(args: CertifyArgs) -> Result<(u8, CertifyOutcome), String> {
    let outcome = run_certify_inner(&args)?;
    let text = match args.out.format {
        Format::Json => certificate_json(&args, &outcome.cert),
        Format::Csv => {
            let mut s = String::from("key,value\n");
            for (k, v) in [
                ("r_inner", num(outcome.cert.r_inner)),
                ("r_outer", num(outcome.cert.r_outer)),
                ("n", num(outcome.cert.n_const)),
                ("cone_const", num(outcome.cert.cone_const)),
                ("cond_i_margin", num(outcome.cert.cond_i_margin)),
                ("cond_ii_margin", num(outcome.cert.cond_ii_margin)),
                ("status", outcome.cert.status.as_str().to_string()),
            ] {
                let _ = writeln!(s, "{k},{v}");
            }
            s
        }
    };
    emit(&args.out, &text)?;
    let code = if outcome.cert.is_certified() { 0 } else { 2 };
    Ok((code, outcome))
}

fn run_solve(args: SolveArgs) -> Result<u8, String> {
    let outcome = run_certify_inner(&args.certify)?;
    if !outcome.cert.is_certified() {
        // failed certification still gets a report, on stderr so the output
        // target is not clobbered with a non-profile
        eprint!("{}", certificate_json(&args.certify, &outcome.cert));
        return Ok(2);
    }
    let profile = solver::damped_iterate(
        &outcome.f,
        outcome.order,
        &outcome.cert,
        args.damping,
        args.tol,
        args.max_iter,
    )
    .map_err(|e| e.to_string())?;
    let text = match args.certify.out.format {
        Format::Csv => {
            let mut s = String::from("t,x\n");
            for (t, x) in profile.grid.iter().zip(profile.values.iter()) {
                let _ = writeln!(s, "{},{}", num(*t), num(*x));
            }
            s
        }
        Format::Json => {
            let mut s = String::from("{\n");
            let _ = writeln!(s, "  \"tool_version\": \"{TOOL_VERSION}\",");
            let _ = writeln!(s, "  \"alpha\": {},", num(outcome.order.alpha()));
            let _ = writeln!(s, "  \"beta\": {},", num(outcome.order.beta()));
            let _ = writeln!(s, "  \"iterations\": {},", profile.iterations);
            let _ = writeln!(s, "  \"converged\": {},", profile.converged);
            let _ = writeln!(s, "  \"residual_ode\": {},", num(profile.residual_ode));
            let _ = writeln!(
                s,
                "  \"residual_bc\": [{}, {}],",
                num(profile.residual_bc[0]),
                num(profile.residual_bc[1])
            );
            let _ = writeln!(s, "  \"psi\": {},", num(profile.psi));
            let _ = writeln!(s, "  \"phi\": {},", num(profile.phi));
            let _ = writeln!(s, "  \"cone_ok\": {},", profile.cone_ok);
            let _ = writeln!(s, "  \"band_lower_ok\": {},", profile.band_lower_ok);
            let _ = writeln!(s, "  \"band_upper_ok\": {},", profile.band_upper_ok);
            s.push_str("  \"t\": [");
            for (i, t) in profile.grid.iter().enumerate() {
                if i > 0 {
                    s.push_str(", ");
                }
                s.push_str(&num(*t));
            }
            s.push_str("],\n  \"x\": [");
            for (i, x) in profile.values.iter().enumerate() {
                if i > 0 {
                    s.push_str(", ");
                }
                s.push_str(&num(*x));
            }
            s.push_str("]\n}\n");
            s
        }
    };
    emit(&args.certify.out, &text)?;
    Ok(0)
}
