//! `tq`: torsion of the local invariant for real biquadratic fields.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tq_core::burnsinvariant::{
    fundamental_discriminants, l_ratio_check_discriminant, omega_loc_torsion, selftest, sweep,
    ComputeOptions, Execution, InvariantReport, Verdict,
};
use tq_core::localterms::{LatticeExponent, Sign};
use tq_core::rational::format_rational;
use tq_core::Error;

const EXIT_INADMISSIBLE: u8 = 2;
const EXIT_NONZERO: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "tq",
    version,
    about = "Torsion of the local Tamagawa invariant of Q(sqrt d1, sqrt d2)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the torsion class for one field.
    Compute {
        #[arg(long, allow_hyphen_values = true)]
        d1: i64,
        #[arg(long, allow_hyphen_values = true)]
        d2: i64,
        #[arg(long)]
        json: bool,
        /// Lattice exponent m >= 1.
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, value_enum, default_value = "plus")]
        sign: SignArg,
        /// Extra odd primes to add to S, comma separated.
        #[arg(long, value_delimiter = ',')]
        extra_s: Vec<u64>,
        /// Accept negative d (results are outside the totally real setting).
        #[arg(long)]
        allow_imaginary: bool,
    },
    /// Run every squarefree pair 1 < d1 < d2 <= max.
    Sweep {
        #[arg(long)]
        max: i64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        sequential: bool,
    },
    /// Check the built-in reference values.
    Selftest,
    /// Numerically check L*(1)/L*(0) = 2/sqrt(f) for even quadratic characters.
    LRatio {
        #[arg(long, default_value_t = 60)]
        conductor_max: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let input = e.downcast_ref::<Error>().is_some_and(|e| {
                matches!(e, Error::InvalidInput(_) | Error::NotTotallyReal { .. })
            });
            ExitCode::from(if input { EXIT_INPUT } else { 1 })
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Compute {
            d1,
            d2,
            json,
            m,
            sign,
            extra_s,
            allow_imaginary,
        } => {
            let sign = match sign {
                SignArg::Plus => Sign::Plus,
                SignArg::Minus => Sign::Minus,
            };
            let opts = ComputeOptions {
                extra_s,
                lattice: LatticeExponent::new(m, sign)?,
                allow_imaginary,
                ..Default::default()
            };
            let report = omega_loc_torsion(d1, d2, &opts)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_report(&report);
            }
            Ok(match report.verdict {
                Verdict::Vanishes => ExitCode::SUCCESS,
                Verdict::Inadmissible => ExitCode::from(EXIT_INADMISSIBLE),
                Verdict::Nonzero => ExitCode::from(EXIT_NONZERO),
            })
        }
        Command::Sweep {
            max,
            json,
            sequential,
        } => {
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            let s = sweep(max, &ComputeOptions::default(), exec)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&s)?);
            } else {
                println!("fields        {}", s.fields);
                println!("vanishes      {}", s.vanishes);
                println!("inadmissible  {}", s.inadmissible);
                println!("nonzero       {}", s.nonzero);
                if s.nonzero > 0 {
                    println!("NONZERO TORSION:");
                    for (d1, d2) in &s.nonzero_fields {
                        println!("  ({d1}, {d2})");
                    }
                }
            }
            Ok(if s.nonzero > 0 {
                ExitCode::from(EXIT_NONZERO)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Selftest => {
            let cases = selftest()?;
            let mut ok = true;
            for c in &cases {
                ok &= c.passed;
                println!(
                    "{} {}  {}",
                    if c.passed { "ok  " } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::LRatio { conductor_max, tol } => {
            if conductor_max > 200 {
                anyhow::bail!(Error::InvalidInput(
                    "conductor-max is limited to 200".into()
                ));
            }
            let mut ok = true;
            for d in fundamental_discriminants(conductor_max) {
                match l_ratio_check_discriminant(d, tol) {
                    Ok(c) => println!(
                        "f = {:3}  ratio = {:.12}  |ratio^2 - {}| = {:.2e}",
                        c.conductor,
                        c.lhs_numeric,
                        format_rational(&c.rhs_exact_squared),
                        c.abs_error_squared
                    ),
                    Err(e) => {
                        ok = false;
                        println!("f = {d:3}  FAIL {e}");
                    }
                }
            }
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn print_report(r: &InvariantReport) {
    let f = &r.field;
    println!("E = Q(sqrt {}, sqrt {}), d3 = {}", f.d1, f.d2, f.d3);
    if !f.totally_real {
        println!("warning: E is not totally real");
    }
    println!("S = {:?}", r.s_f);
    for (p, pr) in &r.per_prime {
        let l = &pr.local;
        println!(
            "  p = {p:3}  |I| = {}  |D| = {}  frob = {:?}{}",
            l.inertia.order(),
            l.decomposition.order(),
            l.frob,
            if pr.local_term.is_some() {
                "  (local term)"
            } else {
                ""
            }
        );
    }
    println!("T_S   {:?}", r.ts_rep);
    println!("delta {:?}", r.delta1);
    if let Some(rc) = &r.resolvent_check {
        let value =
            rc.r.as_ref()
                .map(format_rational)
                .unwrap_or_else(|| "-".into());
        println!("resolvent {:?} r = {value}", rc.status);
    }
    match r.torsion {
        Some(t) => println!("torsion {}  ({:?})", t.unit(), r.verdict),
        None => println!("inadmissible: decomposition group at 2 is all of Gal(E/Q)"),
    }
}
