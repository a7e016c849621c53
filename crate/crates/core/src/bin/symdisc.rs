//! Command-line surface over the series algebra.
//!
//! Expressions use variables z1..zd (z, w when dim = 2) or e1..ed (s-aliases
//! accepted). Series files use the tab-separated interchange format; points
//! are comma-separated "re+imi" pairs. Exit codes: 0 success, 1 usage/parse
//! error, 2 precondition violation, 3 numerical breakdown.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use symdisc::corona::{corona_delta, delta_from_solution, symmetrize_solution, verify_bezout};
use symdisc::elementary::{
    compare_composition, from_elementary, series_to_elementary, to_elementary, ElementarySeries,
};
use symdisc::error::Error;
use symdisc::matrix::{full_homotopy_sample, SeriesMatrix};
use symdisc::parser::{parse, render_expr, render_expr_elementary, ParsedSeries};
use symdisc::scalar::rat_to_f64;
use symdisc::series::TruncatedSeries;
use symdisc::symmetry::{canonical_rep, contraction_homotopy, is_symmetric, quotient_dist, symmetrize};
use symdisc::witness::{blaschke_chain_witness, blaschke_eval, AlphaRule, BlaschkeSpec};

#[derive(Parser)]
#[command(name = "symdisc", version, about = "Exact symmetric-series toolkit for the polydisc")]
struct Cli {
    /// Ambient dimension d
    #[arg(long, global = true, default_value_t = 2)]
    dim: usize,

    /// Total-degree truncation cap
    #[arg(long, global = true, default_value_t = 8)]
    cap: u32,

    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an expression and print its canonical series form
    Parse {
        expr: String,
        /// Allow powers that overflow the cap (mass moves to the tail bound)
        #[arg(long)]
        truncate: bool,
    },
    /// Symmetrize a series expression
    Symmetrize { expr: String },
    /// Check invariance under coordinate permutations
    SymCheck { expr: String },
    /// Certified Wiener l1 norm enclosure
    WienerNorm { expr: String },
    /// Lower bound for the sup norm from a torus grid scan
    SupNorm {
        expr: String,
        #[arg(long, default_value_t = 16)]
        resolution: usize,
    },
    /// Rewrite a symmetric polynomial in the elementary basis
    ToElementary { expr: String },
    /// Expand an e-basis expression into the z-variables
    FromElementary { expr: String },
    /// Degree-by-degree rewrite of a symmetric series
    SeriesToElementary { expr: String },
    /// Numerically probe f(z) against g(e_1(z),...,e_d(z))
    CompareComposition {
        /// z-basis expression for f
        f: String,
        /// e-basis expression for g; defaults to series-to-elementary of f
        #[arg(long)]
        g: Option<String>,
        /// number of random probe points in 0.7 * polydisc
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Verify corona data files and an optional Bezout solution
    CoronaCheck(CoronaArgs),
    /// Quotient-space distance between two points
    QuotientDist { z: String, w: String },
    /// Canonical orbit representative of a point
    Canonical { z: String },
    /// Contraction homotopy H(t, [z]) = [(1-t) z]
    Homotopy { t: f64, z: String },
    /// Sample the SL_n null-homotopy of a series matrix
    SlHomotopy(SlArgs),
    /// Blaschke product evaluation and ideal-chain witness
    Blaschke(BlaschkeArgs),
    /// The worked example: partial sums of sum_n (z^2+w^2)^n / (n^2 2^n)
    WorkedExample {
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// number of random probe points for the composition check
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
}

#[derive(Args)]
struct CoronaArgs {
    /// series files f_1..f_n in the interchange format
    #[arg(long, required = true, num_args = 1..)]
    data: Vec<String>,
    /// candidate solution files g_1..g_n
    #[arg(long, num_args = 1..)]
    solution: Vec<String>,
    #[arg(long, default_value_t = 32)]
    resolution: usize,
    #[arg(long, default_value_t = 4)]
    layers: usize,
    /// write the symmetrized solution next to each g-file with suffix .sym
    #[arg(long)]
    write_symmetrized: bool,
}

#[derive(Args)]
struct SlArgs {
    /// JSON file: array of rows of series text blocks
    #[arg(long)]
    matrix: String,
    #[arg(long, default_value_t = 16)]
    steps: usize,
}

#[derive(Args)]
struct BlaschkeArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// use the literal reading (all factors alpha_n) instead of alpha_k
    #[arg(long)]
    fixed_alpha: bool,
    /// evaluate B_n at this point instead of running the chain witness
    #[arg(long)]
    eval: Option<String>,
    #[arg(long, default_value_t = 32)]
    resolution: usize,
}

fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::Parse { pos: 1, msg: format!("bad complex literal {:?}", s) };
    if s.is_empty() {
        return Err(err());
    }
    // forms: a, ai, a+bi, a-bi, i, -i, bi
    if let Some(body) = s.strip_suffix('i') {
        // find the split between real and imaginary parts
        let mut split = None;
        for (idx, c) in body.char_indices().skip(1) {
            if (c == '+' || c == '-') && !matches!(body.as_bytes()[idx - 1], b'e' | b'E') {
                split = Some(idx);
            }
        }
        match split {
            Some(idx) => {
                let re: f64 = body[..idx].parse().map_err(|_| err())?;
                let im_str = &body[idx..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().map_err(|_| err())?
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() {
                    1.0
                } else if body == "-" {
                    -1.0
                } else {
                    body.parse().map_err(|_| err())?
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = s.parse().map_err(|_| err())?;
        Ok(Complex64::new(re, 0.0))
    }
}

fn parse_point(s: &str, dim: usize) -> Result<Vec<Complex64>, Error> {
    let coords: Vec<Complex64> = s
        .split(',')
        .map(parse_complex)
        .collect::<Result<_, _>>()?;
    if coords.len() != dim {
        return Err(Error::LengthMismatch(coords.len(), dim));
    }
    Ok(coords)
}

fn format_complex(c: Complex64) -> String {
    if c.im < 0.0 {
        format!("{}{}i", c.re, c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

fn format_point(z: &[Complex64]) -> String {
    z.iter().map(|&c| format_complex(c)).collect::<Vec<_>>().join(",")
}

fn require_z(p: ParsedSeries) -> Result<TruncatedSeries, Error> {
    match p {
        ParsedSeries::Z(s) => Ok(s),
        ParsedSeries::E(_) => Err(Error::precondition(
            "this command needs a z-basis expression",
        )),
    }
}

fn require_e(p: ParsedSeries) -> Result<ElementarySeries, Error> {
    match p {
        ParsedSeries::E(s) => Ok(s),
        ParsedSeries::Z(s) => {
            // a constant expression parses as a z-series; reinterpret it
            if s.degree().unwrap_or(0) == 0 && s.is_polynomial() {
                let raw = s.terms().iter().map(|(m, c)| (m.clone(), c.clone()));
                ElementarySeries::new(s.dim(), s.cap(), raw)
            } else {
                Err(Error::precondition(
                    "this command needs an e-basis expression",
                ))
            }
        }
    }
}

fn random_interior_points(
    rng: &mut ChaCha8Rng,
    count: usize,
    dim: usize,
    radius: f64,
) -> Vec<Vec<Complex64>> {
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let r = radius * rng.gen::<f64>().sqrt();
                    let theta = rng.gen::<f64>() * std::f64::consts::TAU;
                    Complex64::from_polar(r, theta)
                })
                .collect()
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), Error> {
    let dim = cli.dim;
    let cap = cli.cap;
    let json_out = cli.format == Format::Json;
    match cli.command {
        Command::Parse { expr, truncate } => match parse(&expr, dim, cap, truncate)? {
            ParsedSeries::Z(s) => {
                if json_out {
                    println!("{}", json!({"basis": "z", "series": s.render_text()}));
                } else {
                    print!("{}", s.render_text());
                }
            }
            ParsedSeries::E(q) => {
                if json_out {
                    println!("{}", json!({"basis": "e", "series": q.render_text()}));
                } else {
                    print!("{}", q.render_text());
                }
            }
        },
        Command::Symmetrize { expr } => {
            let f = require_z(parse(&expr, dim, cap, false)?)?;
            let s = symmetrize(&f);
            if json_out {
                println!("{}", json!({"series": s.render_text(), "expr": render_expr(&s)}));
            } else {
                print!("{}", s.render_text());
            }
        }
        Command::SymCheck { expr } => {
            let f = require_z(parse(&expr, dim, cap, false)?)?;
            let sym = is_symmetric(&f);
            if json_out {
                println!("{}", json!({"symmetric": sym}));
            } else {
                println!("symmetric: {}", sym);
            }
        }
        Command::WienerNorm { expr } => {
            let f = require_z(parse(&expr, dim, cap, false)?)?;
            let n = f.wiener_norm();
            if json_out {
                println!(
                    "{}",
                    json!({
                        "lower": n.lower.to_string(),
                        "upper": n.upper.to_string(),
                        "exact": n.exact,
                    })
                );
            } else {
                println!("wiener norm: {}", n);
            }
        }
        Command::SupNorm { expr, resolution } => {
            let f = require_z(parse(&expr, dim, cap, false)?)?;
            let v = f.sup_norm_lower(resolution);
            if json_out {
                println!("{}", json!({"sup_norm_lower": v, "resolution": resolution}));
            } else {
                println!("sup norm lower bound (resolution {}): {}", resolution, v);
            }
        }
        Command::ToElementary { expr } => {
            let f = require_z(parse(&expr, dim, cap, false)?)?;
            let q = to_elementary(&f, true)?;
            if json_out {
                println!("{}", json!({"series": q.render_text(), "expr": render_expr_elementary(&q)}));
            } else {
                print!("{}", q.render_text());
            }
        }
        Command::FromElementary { expr } => {
            let q = require_e(parse(&expr, dim, cap, false)?)?;
            let p = from_elementary(&q, cap)?;
            if json_out {
                println!("{}", json!({"series": p.render_text(), "expr": render_expr(&p)}));
            } else {
                print!("{}", p.render_text());
            }
        }
        Command::SeriesToElementary { expr } => {
            let f = require_z(parse(&expr, dim, cap, true)?)?;
            let q = series_to_elementary(&f, cap)?;
            if json_out {
                println!("{}", json!({"series": q.render_text()}));
            } else {
                print!("{}", q.render_text());
            }
        }
        Command::CompareComposition { f, g, points } => {
            let f = require_z(parse(&f, dim, cap, true)?)?;
            let g = match g {
                Some(src) => require_e(parse(&src, dim, cap, false)?)?,
                None => series_to_elementary(&f, cap)?,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let pts = random_interior_points(&mut rng, points, dim, 0.7);
            let dev = compare_composition(&f, &g, &pts)?;
            if json_out {
                println!("{}", json!({"max_deviation": dev, "points": points}));
            } else {
                println!("max composition deviation over {} points: {:.6e}", points, dev);
            }
        }
        Command::CoronaCheck(args) => {
            let mut fs = Vec::new();
            for path in &args.data {
                let text = std::fs::read_to_string(path)?;
                fs.push(TruncatedSeries::parse_text(&text, dim, cap)?);
            }
            let delta_grid = corona_delta(&fs, args.resolution, args.layers);
            let mut report = String::new();
            writeln!(report, "grid delta estimate: {:.12}", delta_grid).unwrap();
            let mut json_obj = json!({"delta_grid": delta_grid});
            if !args.solution.is_empty() {
                let mut gs = Vec::new();
                for path in &args.solution {
                    let text = std::fs::read_to_string(path)?;
                    gs.push(TruncatedSeries::parse_text(&text, dim, cap)?);
                }
                let residual = verify_bezout(&fs, &gs)?;
                writeln!(report, "bezout residual: {}", residual).unwrap();
                json_obj["residual_lower"] = json!(residual.lower.to_string());
                json_obj["residual_upper"] = json!(residual.upper.to_string());
                json_obj["residual_exact"] = json!(residual.exact);
                if residual.is_exactly_zero() {
                    let delta = delta_from_solution(&gs)?;
                    writeln!(report, "delta from solution: {}", delta).unwrap();
                    json_obj["delta_from_solution"] = json!(delta.to_string());
                    let sym = symmetrize_solution(&fs, &gs)?;
                    if args.write_symmetrized {
                        for (path, g) in args.solution.iter().zip(&sym) {
                            let out = format!("{}.sym", path);
                            std::fs::write(&out, g.render_text())?;
                            writeln!(report, "wrote {}", out).unwrap();
                        }
                    }
                }
            }
            if json_out {
                println!("{}", json_obj);
            } else {
                print!("{}", report);
            }
        }
        Command::QuotientDist { z, w } => {
            let pz = parse_point(&z, dim)?;
            let pw = parse_point(&w, dim)?;
            let d = quotient_dist(&pz, &pw)?;
            if json_out {
                println!("{}", json!({"quotient_dist": d}));
            } else {
                println!("quotient distance: {:.12e}", d);
            }
        }
        Command::Canonical { z } => {
            let p = parse_point(&z, dim)?;
            let c = canonical_rep(&p);
            if json_out {
                println!("{}", json!({"canonical": format_point(&c)}));
            } else {
                println!("{}", format_point(&c));
            }
        }
        Command::Homotopy { t, z } => {
            let p = parse_point(&z, dim)?;
            let h = contraction_homotopy(t, &p)?;
            if json_out {
                println!("{}", json!({"canonical": format_point(&h.canonical)}));
            } else {
                println!("{}", format_point(&h.canonical));
            }
        }
        Command::SlHomotopy(args) => {
            let text = std::fs::read_to_string(&args.matrix)?;
            let rows: Vec<Vec<String>> = serde_json::from_str(&text)
                .map_err(|e| Error::Parse { pos: 1, msg: format!("bad matrix JSON: {}", e) })?;
            let n = rows.len();
            let mut entries = Vec::new();
            for row in &rows {
                if row.len() != n {
                    return Err(Error::LengthMismatch(row.len(), n));
                }
                for block in row {
                    entries.push(TruncatedSeries::parse_text(block, dim, cap)?);
                }
            }
            let m = SeriesMatrix::new(n, entries)?;
            let samples = full_homotopy_sample(&m, args.steps)?;
            let one = TruncatedSeries::one(dim, cap);
            let mut lines = Vec::new();
            for (i, s) in samples.iter().enumerate() {
                let det = s.det()?;
                let residual = det.sub(&one)?.wiener_norm();
                let bound = s.op_norm_bound();
                lines.push((i, rat_to_f64(&residual.upper), bound));
            }
            if json_out {
                let arr: Vec<_> = lines
                    .iter()
                    .map(|(i, r, b)| json!({"step": i, "det_residual_upper": r, "op_norm_bound": b}))
                    .collect();
                println!("{}", json!({"steps": arr}));
            } else {
                for (i, r, b) in lines {
                    println!("step {:3}: det residual <= {:.3e}, op-norm bound {:.6}", i, r, b);
                }
            }
        }
        Command::Blaschke(args) => {
            let rule = if args.fixed_alpha {
                AlphaRule::FixedAlphaN
            } else {
                AlphaRule::VaryingAlphaK
            };
            match args.eval {
                Some(zs) => {
                    let z = parse_complex(&zs)?;
                    let spec = BlaschkeSpec::new(args.n, rule)?;
                    let v = blaschke_eval(&spec, z)?;
                    if json_out {
                        println!("{}", json!({"value": format_complex(v)}));
                    } else {
                        println!("B_{}({}) = {}", args.n, format_complex(z), format_complex(v));
                    }
                }
                None => {
                    let report = blaschke_chain_witness(args.n, dim, args.resolution, rule)?;
                    if json_out {
                        println!(
                            "{}",
                            json!({
                                "n": report.n,
                                "max_modulus": report.max_modulus,
                                "value_at_own_zero": report.value_at_own_zero,
                                "next_at_new_zero": report.next_at_new_zero,
                                "this_at_new_zero": report.this_at_new_zero,
                                "modulus_ok": report.modulus_ok(),
                                "strictness_ok": report.strictness_ok(),
                            })
                        );
                    } else {
                        print!("{}", report);
                    }
                }
            }
        }
        Command::WorkedExample { n, points } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let pts = random_interior_points(&mut rng, points, 2, 0.7);
            let cap = cap.max(2 * n as u32);
            let report = symdisc::witness::worked_example(n, cap, &pts)?;
            if json_out {
                let terms: Vec<_> = report
                    .elementary
                    .terms()
                    .iter()
                    .map(|(m, c)| json!({"exponents": m.to_string(), "coeff": c.to_string()}))
                    .collect();
                println!(
                    "{}",
                    json!({
                        "n": report.big_n,
                        "norm": report.norm.to_string(),
                        "norm_matches_closed_form": report.norm_matches_closed_form,
                        "elementary_terms": terms,
                        "composition_deviation": report.composition_deviation,
                    })
                );
            } else {
                print!("{}", report);
            }
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e);
        std::process::exit(e.exit_code());
    }
}
