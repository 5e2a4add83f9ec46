mod config;
mod suites;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use recip_core::analysis::{mellin, test_function};
use recip_core::coeffs::shared_table;
use recip_core::engine::checks::mellin_by_quadrature;
use recip_core::exp_sums::{kloosterman, weil_bound};
use recip_core::transforms::{phi_cap, phi_cap_on_line, PhiTransformParams};

use config::{parse_complex, parse_config, RawSettings, Suite};
use suites::{exit_code, render_table, Runner};

#[derive(Parser)]
#[command(name = "recip", version, about = "Numerical verification of Kloosterman-sum reciprocity and its ingredients")]
struct Cli {
    /// Worker threads for the parallel sums.
    #[arg(long, global = true, env = "RECIP_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and report pass or fail for each check.
    Verify(VerifyArgs),
    /// Evaluate a single quantity.
    #[command(subcommand)]
    Compute(Compute),
    /// Print tables of coefficients.
    #[command(subcommand)]
    Tabulate(Tabulate),
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run; may come from the config file instead.
    #[arg(value_enum)]
    suite: Option<Suite>,
    /// TOML file with top-level settings and one optional section per suite.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the reports as a JSON array ("-" for standard output).
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    /// Spectral point as "a+bi"; repeat for several.
    #[arg(long, allow_hyphen_values = true)]
    s: Vec<String>,
    /// Registered test function.
    #[arg(long)]
    function: Option<String>,
    #[arg(long)]
    cmax: Option<u64>,
    #[arg(long)]
    mn_cap: Option<usize>,
    #[arg(long)]
    dual_mn_cap: Option<usize>,
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Use the exponent 2s in place of 2s-1 on the dual side of the reciprocity check.
    #[arg(long)]
    sabotage: bool,
}

#[derive(Subcommand)]
enum Compute {
    /// The transform Phi(x) for the weight-12 form.
    PhiCap {
        #[arg(long, default_value = "1.5", allow_hyphen_values = true)]
        s: String,
        #[arg(long)]
        x: f64,
        #[arg(long, default_value = "gauss13")]
        function: String,
        /// Fixed abscissa of the Mellin-Barnes line.
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<f64>,
    },
    /// Closed-form Mellin transform beside the quadrature value.
    Mellin {
        #[arg(long, default_value = "gauss13")]
        function: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
    /// S(m,n;c) and its Weil bound.
    Kloosterman {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        c: u64,
    },
}

#[derive(Subcommand)]
enum Tabulate {
    /// CSV of n, tau(n), lambda(n) = tau(n) n^(-11/2).
    Tau {
        #[arg(long)]
        nmax: usize,
    },
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn complex_arg(name: &str, text: &str) -> Result<Complex64, String> {
    parse_complex(text).map_err(|e| format!("invalid `{name}`: {e}"))
}

fn verify(args: VerifyArgs, threads_from_flag: bool) -> ExitCode {
    let flags = RawSettings::from_flags(args.p, args.q, args.s, args.function, args.cmax, args.mn_cap, args.dual_mn_cap, args.rel_tol, args.sabotage);
    let config = match parse_config(args.suite, args.config.as_deref(), &flags, args.json) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    if let (false, Some(n)) = (threads_from_flag, config.threads) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let reports = Runner::default().run(&config);
    print!("{}", render_table(&reports));
    if let Some(path) = &config.json {
        let text = match serde_json::to_string_pretty(&reports) {
            Ok(t) => t,
            Err(e) => return fail(e),
        };
        if path.as_os_str() == "-" {
            println!("{text}");
        } else if let Err(e) = std::fs::write(path, text + "\n") {
            return fail(format!("{}: {e}", path.display()));
        }
    }
    ExitCode::from(exit_code(&reports) as u8)
}

fn compute(cmd: Compute) -> Result<(), String> {
    match cmd {
        Compute::PhiCap { s, x, function, xi } => {
            let f = test_function(&function).map_err(|e| format!("invalid `function`: {e}"))?;
            let params = PhiTransformParams::new(f, complex_arg("s", &s)?);
            let v = match xi {
                Some(xi) => phi_cap_on_line(&params, x, xi, 300.0, 0.05),
                None => phi_cap(&params, x),
            }
            .map_err(|e| e.to_string())?;
            println!("Phi({x}) = {:.17e} {:+.17e}i", v.re, v.im);
            println!("xi = {}  tail_estimate = {:.3e}  l1 = {:.3e}", v.xi, v.tail_estimate, v.l1);
        }
        Compute::Mellin { function, u } => {
            let f = test_function(&function).map_err(|e| format!("invalid `function`: {e}"))?;
            let u = complex_arg("u", &u)?;
            let closed = mellin(&f, u).map_err(|e| e.to_string())?;
            let (quad, err) = mellin_by_quadrature(&f, u);
            println!("closed form  {:.17e} {:+.17e}i", closed.re, closed.im);
            println!("quadrature   {:.17e} {:+.17e}i  (error estimate {err:.2e})", quad.re, quad.im);
            println!("relative gap {:.3e}", (closed - quad).norm() / closed.norm().max(quad.norm()));
        }
        Compute::Kloosterman { m, n, c } => {
            if c == 0 {
                return Err("invalid `c`: modulus must be positive".into());
            }
            println!("S({m},{n};{c}) = {:.17e}", kloosterman(m, n, c));
            println!("Weil bound   = {:.17e}", weil_bound(m, n, c));
        }
    }
    Ok(())
}

fn tabulate(cmd: Tabulate) -> Result<(), String> {
    let Tabulate::Tau { nmax } = cmd;
    if nmax == 0 {
        return Err("invalid `nmax`: must be positive".into());
    }
    let table = shared_table(nmax).map_err(|e| e.to_string())?;
    let mut out = std::io::BufWriter::new(std::io::stdout().lock());
    let mut write = || -> std::io::Result<()> {
        writeln!(out, "n,tau,lambda")?;
        for n in 1..=nmax {
            writeln!(out, "{n},{},{:.16e}", table.tau(n), table.lambda(n))?;
        }
        out.flush()
    };
    write().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            return fail(e);
        }
    }
    match cli.command {
        Command::Verify(args) => verify(args, cli.threads.is_some()),
        Command::Compute(c) => compute(c).map_or_else(fail, |_| ExitCode::SUCCESS),
        Command::Tabulate(t) => tabulate(t).map_or_else(fail, |_| ExitCode::SUCCESS),
    }
}
