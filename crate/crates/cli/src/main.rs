//! `rootnum`: root numbers, point search and right-triangle pairs for
//! E_t : y^2 = x(x+1)(x+t^2).
//!
//! Exit codes: 0 success, 1 bad input or domain error, 2 failed verification.

use std::fs::File;
use std::io::BufWriter;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rootnum::curve::{curve_et, PointOrder, TORSION_CAP};
use rootnum::exactq::{parse_rational, set_default_budget, FactorBudget};
use rootnum::experiments::{consistency_sweep, density_scan, gusic_tadic_check, torsion_table_check};
use rootnum::rootnumber::{prime_set_pt, root_number_closed, RootNumberReport};
use rootnum::search::{find_points_parallel, rank_witness, solutions_stream, SearchBound, WitnessSearch};
use rootnum::triangles::{classify, extra_torsion_report, t1_family};
use rootnum::{Error, Rational};

const BUDGET_VAR: &str = "ROOTNUM_FACTOR_BUDGET";

#[derive(Parser)]
#[command(name = "rootnum", version, about = "Root numbers and right-triangle pairs for y^2 = x(x+1)(x+t^2)")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct BoundArgs {
    /// Largest e in x = m/e^2 on the integral model
    #[arg(long, default_value_t = 8)]
    max_den: u64,
    /// Largest |m|/e^2
    #[arg(long, default_value_t = 100)]
    max_num: u64,
}

impl BoundArgs {
    fn bound(self) -> Result<SearchBound, Error> {
        SearchBound::new(self.max_den, self.max_num)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Closed,
    Local,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Global root number W(E_t) and the prime set P_t
    RootNumber {
        #[arg(allow_hyphen_values = true)]
        t: String,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Classify the solutions of 1 + a^2 = b^2, t^2 + a^2 = c^2
    Classify {
        #[arg(allow_hyphen_values = true)]
        t: String,
        #[command(flatten)]
        bound: BoundArgs,
        /// Report Unresolved instead of assuming rank 0 when no solution exists
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        json: bool,
    },
    /// List solutions (a, b, c) for t
    Triangles {
        #[arg(allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[command(flatten)]
        bound: BoundArgs,
    },
    /// Rational points of E_t within a height bound
    Search {
        #[arg(allow_hyphen_values = true)]
        t: String,
        #[command(flatten)]
        bound: BoundArgs,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Fraction of t = a/b, |a|, b <= X, with |P_t| even
    Density {
        x: u64,
        /// Write one row per t to this file
        #[arg(long)]
        csv: Option<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Consistency sweep up to X, specialization table and torsion table
    Verify {
        x: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

enum Failure {
    Input(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Verification(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn parse_t(text: &str) -> Result<Rational, Failure> {
    Ok(parse_rational(text)?)
}

fn configure_budget() -> Result<(), Failure> {
    if let Ok(value) = std::env::var(BUDGET_VAR) {
        let iterations: u64 = value
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("{BUDGET_VAR} must be a nonnegative integer, got {value:?}")))?;
        set_default_budget(FactorBudget::new(iterations));
    }
    Ok(())
}

fn root_number(t: &Rational, method: Method) -> Result<(), Failure> {
    match method {
        Method::Closed => {
            println!("t = {t}");
            println!("P_t = {}", prime_set_pt(t)?);
            println!("W (closed form)    = {}", root_number_closed(t)?);
        }
        Method::Local | Method::Both => {
            let report = RootNumberReport::compute(t)?;
            let text = report.render();
            for line in text.lines() {
                if matches!(method, Method::Local) && line.starts_with("W (closed form)") {
                    continue;
                }
                println!("{line}");
            }
            if matches!(method, Method::Both) && !report.agree() {
                return Err(Failure::Verification(format!("root number mismatch at t = {t}")));
            }
        }
    }
    let w = root_number_closed(t)?;
    let reading = if w.value() < 0 { "odd rank, hence positive" } else { "even" };
    println!("conditional: assuming the parity conjecture, E_t has {reading} rank");
    Ok(())
}

fn triangles(t: &Rational, count: usize, bound: SearchBound) -> Result<(), Failure> {
    if t == &Rational::from_integer(1.into()) {
        println!("t = 1: one-parameter family a = (1 - r^2)/2r, b = c = (1 + r^2)/2r");
        for k in 2..(count as i64 + 2) {
            println!("{}", t1_family(&Rational::new(1.into(), k.into()))?);
        }
        return Ok(());
    }
    match rank_witness(t, bound)? {
        WitnessSearch::Found(witness) => {
            println!("witness {witness} has infinite order");
            for triple in solutions_stream(t, &witness, count)? {
                println!("{triple}");
            }
        }
        WitnessSearch::NoneFound { bound } => {
            println!(
                "no point of infinite order with max_den {} max_num {} (not a proof of rank 0)",
                bound.max_den, bound.max_num
            );
            let report = extra_torsion_report(t)?;
            match report.c_similar_triple {
                Some(triple) => println!("{triple} (conditional: assuming rank 0, this is the only solution)"),
                None => println!("no solution (conditional: assuming rank 0)"),
            }
        }
    }
    Ok(())
}

fn search(t: &Rational, bound: SearchBound, jobs: usize) -> Result<(), Failure> {
    let model = curve_et(t)?;
    let points = find_points_parallel(t, bound, jobs)?;
    println!("{} points on E_{t} with max_den {} max_num {}", points.len(), bound.max_den, bound.max_num);
    for p in points {
        let order = match model.point_order(&p, TORSION_CAP)? {
            PointOrder::Finite(n) => format!("order {n}"),
            PointOrder::ExceedsCap => "infinite order".to_string(),
        };
        println!("{p}  {order}");
    }
    Ok(())
}

fn density(x: u64, csv: Option<String>, jobs: usize) -> Result<(), Failure> {
    let report = density_scan(x, jobs)?;
    print!("{}", report.render());
    if let Some(path) = csv {
        let file = File::create(&path).map_err(|e| Failure::Input(format!("cannot create {path}: {e}")))?;
        report.write_csv(BufWriter::new(file))?;
        println!("wrote {} rows to {path}", report.rows.len());
    }
    println!("conditional: assuming the parity conjecture, |P_t| even means E_t(Q) is infinite");
    Ok(())
}

fn verify(x: u64, jobs: usize) -> Result<(), Failure> {
    let sweep = consistency_sweep(x, jobs)?;
    print!("{}", sweep.render());
    let table = gusic_tadic_check();
    print!("{}", table.render());
    let samples: Vec<Rational> = ["6", "7", "2", "9/16", "16/9", "2/3", "-5/7"]
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<_, _>>()?;
    let torsion = torsion_table_check(&samples)?;
    for row in &torsion.rows {
        let extension = match row.order8_extension {
            Some(true) => ", order-8 extension",
            Some(false) => ", order-8 extension FAILED",
            None => "",
        };
        let status = if row.passed() { "PASS" } else { "FAIL" };
        println!("torsion t = {}: {status} (orders 1/2/4: {}/{}/{}{extension})", row.t, row.profile.0, row.profile.1, row.profile.2);
    }
    if sweep.passed() && table.passed() && torsion.passed() {
        println!("all checks passed");
        Ok(())
    } else {
        Err(Failure::Verification("verification failed".into()))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_budget()?;
    match cli.command {
        Command::RootNumber { t, method } => root_number(&parse_t(&t)?, method),
        Command::Classify { t, bound, strict, json } => {
            let report = classify(&parse_t(&t)?, bound.bound()?, strict)?;
            if json {
                println!("{}", report.to_json_string());
            } else {
                print!("{}", report.render());
            }
            Ok(())
        }
        Command::Triangles { t, count, bound } => {
            let t = parse_t(&t)?;
            if t <= Rational::from_integer(0.into()) {
                return Err(Failure::Input(format!("triangles need t > 0, got {t}")));
            }
            triangles(&t, count, bound.bound()?)
        }
        Command::Search { t, bound, jobs } => search(&parse_t(&t)?, bound.bound()?, jobs),
        Command::Density { x, csv, jobs } => density(x, csv, jobs),
        Command::Verify { x, jobs } => verify(x, jobs),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failure: {msg}");
            ExitCode::from(2)
        }
    }
}
