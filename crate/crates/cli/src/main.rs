use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use ssmass::lifting::{lift_sl2, parse_fp2_matrix, random_sl2};
use ssmass::mass::{
    census, census_csv, hecke_orbit_size, mass_superspecial, mass_superspecial_fkernel,
    rational_string,
};
use ssmass::verify::{run_suite, SUITES};
use ssmass::xi::{classify, sl2_line_stabilizer_order, XiClass, XiSpec};
use ssmass::{json, Error, Fp2Ctx};

#[derive(Parser)]
#[command(
    name = "ssmass",
    version,
    about = "Masses and oracles for supersingular abelian surfaces"
)]
struct Cli {
    /// Output format; csv is available for `census` only.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Superspecial mass M_g, or M_g^* with --star.
    Mass {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        g: usize,
        #[arg(long)]
        star: bool,
    },
    /// Case, degree and endomorphism data of xi.
    Classify {
        #[arg(long)]
        p: u64,
        /// Degree of the field of xi's coordinates over F_{p^2} (default: the generic
        /// degree, or 1).
        #[arg(long)]
        m: Option<usize>,
        /// `a0.a1...,b0.b1...` (F_p coordinates) or `generic:d`.
        #[arg(long)]
        xi: String,
    },
    /// Lift phibar in SL_2(F_{p^2}) to the quaternion-hermitian group.
    Lift {
        #[arg(long)]
        p: u64,
        /// Four entries `c0.c1` row by row, comma separated, or `random`.
        #[arg(long)]
        phibar: String,
        /// Pi-adic precision N.
        #[arg(long, default_value_t = 12)]
        prec: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Points of P^1 by degree over F_{p^2}, with masses and optional orbit sizes.
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        level: Option<u64>,
    },
    /// Size of the prime-to-p Hecke orbit at level N.
    Hecke {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        level: u64,
        #[arg(long)]
        xi: String,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Run an oracle suite (or `all`).
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Usage(String),
    Falsified(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Obstruction(_) | Error::Internal(_) => Failure::Falsified(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn no_csv(format: Format) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(Failure::Usage(
            "--format csv is only supported by `census`".into(),
        ));
    }
    Ok(())
}

/// The class of xi; `generic:d` without `--m` stays symbolic, since only the case matters.
fn xi_class(p: u64, spec: &XiSpec, m: Option<usize>) -> Result<XiClass, Failure> {
    match (spec, m) {
        (XiSpec::Generic(d), None) => Ok(XiClass::generic(*d)),
        _ => Ok(classify(&spec.resolve(p, m)?)),
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let format = cli.format;
    match cli.cmd {
        Cmd::Mass { p, g, star } => {
            no_csv(format)?;
            let r = if star {
                mass_superspecial_fkernel(g, p)?
            } else {
                mass_superspecial(g, p)?
            };
            Ok(match format {
                Format::Json => pretty(&json::mass_json(&r)),
                _ => {
                    let reduced = rational_string(&r.value);
                    match r.over_5760() {
                        Some(s) if s != reduced => format!("{s} = {reduced}"),
                        _ => reduced,
                    }
                }
            })
        }
        Cmd::Classify { p, m, xi } => {
            no_csv(format)?;
            let spec = XiSpec::parse(&xi)?;
            // a concrete point, so that case II carries its minimal polynomial
            let pt = spec.resolve(p, m)?;
            let xc = classify(&pt);
            let stab = sl2_line_stabilizer_order(&pt);
            Ok(match format {
                Format::Json => pretty(&json::classify_json(&xc, stab)),
                _ => {
                    let mut s = format!("case {}, degree {}", json::case_str(xc.case), xc.degree);
                    if let (Some(a), Some(b)) = (xc.alpha, xc.beta) {
                        s.push_str(&format!(", minimal polynomial X^2 - alpha X - beta with alpha = {:?}, beta = {:?}", a.coeffs(), b.coeffs()));
                    }
                    s.push_str(&format!(
                        ", dim B0' = {}, |Stab_SL2| = {stab}",
                        xc.case.b0prime_dim()
                    ));
                    s
                }
            })
        }
        Cmd::Lift {
            p,
            phibar,
            prec,
            seed,
        } => {
            no_csv(format)?;
            let f = Fp2Ctx::new(p)?;
            let phi = if phibar == "random" {
                random_sl2(f, &mut ChaCha8Rng::seed_from_u64(seed))
            } else {
                parse_fp2_matrix(f, &phibar)?
            };
            let out = lift_sl2(&phi, prec)?;
            Ok(match format {
                Format::Json => pretty(&json::lift_json(&out)),
                _ => {
                    let mut s = format!(
                        "N = {}, defect valuation {}, steps {}, obstructions {}\n",
                        out.precision,
                        out.defect_valuation,
                        out.steps,
                        out.obstructions.len()
                    );
                    for i in 0..2 {
                        for j in 0..2 {
                            let e = out.t[(i, j)];
                            s.push_str(&format!("T[{i}][{j}] = ({}) + ({}) Pi\n", e.a(), e.b()));
                        }
                    }
                    s.trim_end().to_string()
                }
            })
        }
        Cmd::Census { p, m, level } => {
            let rows = census(p, m, level)?;
            Ok(match format {
                Format::Json => pretty(&json::census_json(p, m, level, &rows)),
                Format::Csv => census_csv(&rows).trim_end().to_string(),
                Format::Text => {
                    let mut s = format!(
                        "{:>6} {:>24} {:>28} {:>16}\n",
                        "degree", "count", "mass", "orbit_size"
                    );
                    for r in &rows {
                        let orbit = r
                            .orbit_size
                            .as_ref()
                            .map(ToString::to_string)
                            .unwrap_or_else(|| "-".into());
                        s.push_str(&format!(
                            "{:>6} {:>24} {:>28} {:>16}\n",
                            r.degree,
                            r.count,
                            rational_string(&r.mass),
                            orbit
                        ));
                    }
                    s.trim_end().to_string()
                }
            })
        }
        Cmd::Hecke { p, level, xi, m } => {
            no_csv(format)?;
            let xc = xi_class(p, &XiSpec::parse(&xi)?, m)?;
            let size = hecke_orbit_size(p, level, xc.case)?;
            Ok(match format {
                Format::Json => pretty(&serde_json::json!({
                    "p": p,
                    "level": level,
                    "case": json::case_str(xc.case),
                    "orbit_size": size.to_string(),
                })),
                _ => size.to_string(),
            })
        }
        Cmd::Verify { suite, p, seed } => {
            no_csv(format)?;
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut reports = Vec::new();
            for name in names {
                reports.push(run_suite(name, p, seed)?);
            }
            let all_pass = reports.iter().all(|r| r.pass);
            let text = match format {
                Format::Json => {
                    let v: Vec<Value> = reports
                        .iter()
                        .map(|r| serde_json::to_value(r).expect("serializable"))
                        .collect();
                    if v.len() == 1 {
                        pretty(&v[0])
                    } else {
                        pretty(&Value::Array(v))
                    }
                }
                _ => {
                    if reports.len() == 1 {
                        reports[0].summary.clone()
                    } else {
                        reports
                            .iter()
                            .map(|r| format!("{}: {}", r.suite, r.summary))
                            .collect::<Vec<_>>()
                            .join("\n")
                    }
                }
            };
            if all_pass {
                Ok(text)
            } else {
                emit(&text);
                Err(Failure::Falsified("oracle suite failed".into()))
            }
        }
    }
}

/// Print to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Falsified(msg)) => {
            eprintln!("failure: {msg}");
            ExitCode::from(1)
        }
    }
}
