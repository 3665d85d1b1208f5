//! Command-line front end for the uF + vG component census.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use surface_census::triangulation::{compute_edge_classes, reference_edge_classes};
use surface_census::{
    census, claim1_reduce, claim2_run, compile_surface, components_via_reduction, coordinates,
    glue_components, normal_form, validate, CensusMethod, CensusRow, Claim2Step, PairingSystem,
    SurfaceCoefficients, SurfaceRecord, Triangulation,
};

#[derive(Parser)]
#[command(name = "surface-census", version, about = "Component counts of the surfaces uF + vG in the K13n586 exterior")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the triangulation and its edge classes.
    Validate,
    /// Edge weights, total weight, component count and Euler characteristic as JSON.
    Weights {
        #[arg(long)]
        u: u64,
        #[arg(long)]
        v: u64,
    },
    /// Number of connected components of uF + vG.
    Components {
        #[arg(long)]
        u: u64,
        #[arg(long)]
        v: u64,
        #[arg(long, value_enum, default_value_t = ComponentMethod::Reduction)]
        method: ComponentMethod,
    },
    /// Write the pairing system of uF + vG in the text format.
    Compile {
        #[arg(long)]
        u: u64,
        #[arg(long)]
        v: u64,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Count orbits of a pairing system read from a file.
    Orbits {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = OrbitMethod::Unionfind)]
        method: OrbitMethod,
    },
    /// Euclid-style orbit count of the normal form of uF + vG.
    Reduce {
        #[arg(long)]
        u: u64,
        #[arg(long)]
        v: u64,
        /// Print one line per step.
        #[arg(long)]
        trace: bool,
        /// Batch runs of steps that leave |g| unchanged.
        #[arg(long)]
        accelerated: bool,
        /// Start from the compiled system and reduce it to the normal form first.
        #[arg(long)]
        compiled: bool,
        /// Emit the result and trace as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Connected surfaces on each line u + v = n next to Euler's totient.
    Census {
        #[arg(long)]
        max_n: u64,
        #[arg(long, value_enum, default_value_t = Method::Gcd)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ComponentMethod {
    Gluing,
    Unionfind,
    Reduction,
    Gcd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrbitMethod {
    Unionfind,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Gcd,
    Reduction,
    Oracle,
}

impl From<Method> for CensusMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Gcd => CensusMethod::Gcd,
            Method::Reduction => CensusMethod::Reduction,
            Method::Oracle => CensusMethod::Oracle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

enum Failure {
    /// Bad arguments or input files.
    Usage(anyhow::Error),
    /// A computed result disagreed with what it was checked against, or a
    /// computation failed.
    Mismatch(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Mismatch(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn coefficients(u: u64, v: u64) -> Result<SurfaceCoefficients, Failure> {
    SurfaceCoefficients::new(u, v).map_err(usage)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn run_validate(out: &mut impl Write) -> Outcome {
    let tri = Triangulation::k13n586();
    let violations = validate(&tri);
    for v in &violations {
        writeln!(out, "violation: {v}")?;
    }
    if !violations.is_empty() {
        return Err(Failure::Mismatch(anyhow!("{} violations", violations.len())));
    }
    let classes = compute_edge_classes(&tri)?;
    if classes != reference_edge_classes() {
        return Err(Failure::Mismatch(anyhow!("derived edge classes differ from the reference table")));
    }
    for class in &classes {
        writeln!(out, "{}\tdegree {}", class.label, class.degree())?;
    }
    let counts = tri.cell_counts();
    writeln!(out, "ok: {} edge classes, {} face classes", classes.len(), counts.face_classes)?;
    Ok(())
}

fn run_components(u: u64, v: u64, method: ComponentMethod, out: &mut impl Write) -> Outcome {
    let tri = Triangulation::k13n586();
    // The reduction and gcd routes never build coordinates, so they take the
    // wider normal-form bound.
    let count = match method {
        ComponentMethod::Gluing => glue_components(&coordinates(coefficients(u, v)?), &tri).map_err(usage)?.count() as u64,
        ComponentMethod::Unionfind => compile_surface(coefficients(u, v)?, &tri)?.count_orbits().map_err(usage)?,
        ComponentMethod::Reduction => claim2_run(&normal_form(u, v).map_err(usage)?, true)?.orbits,
        ComponentMethod::Gcd => {
            normal_form(u, v).map_err(usage)?;
            gcd(u, v)
        }
    };
    writeln!(out, "{count}")?;
    Ok(())
}

fn run_compile(u: u64, v: u64, output: Option<PathBuf>, out: &mut impl Write) -> Outcome {
    let c = coefficients(u, v)?;
    let text = compile_surface(c, &Triangulation::k13n586())?.to_text();
    match output {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display())).map_err(usage)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run_orbits(input: PathBuf, out: &mut impl Write) -> Outcome {
    let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display())).map_err(usage)?;
    let sys = PairingSystem::parse(&text).map_err(usage)?;
    writeln!(out, "{}", sys.count_orbits().map_err(usage)?)?;
    Ok(())
}

#[derive(Serialize)]
struct ReduceReport<'a> {
    u: u64,
    v: u64,
    orbits: u64,
    gcd: u64,
    trace: &'a [Claim2Step],
}

fn run_reduce(u: u64, v: u64, trace: bool, accelerated: bool, compiled: bool, json: bool, out: &mut impl Write) -> Outcome {
    let start = if compiled {
        let c = coefficients(u, v)?;
        let tri = Triangulation::k13n586();
        claim1_reduce(&compile_surface(c, &tri)?, c, &tri)?.system
    } else {
        normal_form(u, v).map_err(usage)?
    };
    let run = claim2_run(&start, accelerated)?;
    let expected = gcd(u, v);
    if json {
        let report = ReduceReport { u, v, orbits: run.orbits, gcd: expected, trace: &run.trace };
        serde_json::to_writer_pretty(&mut *out, &report)?;
        writeln!(out)?;
    } else {
        if trace {
            for step in &run.trace {
                writeln!(out, "{step}")?;
            }
        }
        writeln!(out, "{}", run.orbits)?;
    }
    if run.orbits != expected {
        return Err(Failure::Mismatch(anyhow!("reduction gave {} orbits but gcd is {expected}", run.orbits)));
    }
    Ok(())
}

fn agree_cell(row: &CensusRow) -> &'static str {
    match row.agree {
        None => "n/a",
        Some(true) => "yes",
        Some(false) => "no",
    }
}

fn run_census(max_n: u64, method: Method, format: Format, out: &mut impl Write) -> Outcome {
    let rows = census(max_n, method.into()).map_err(usage)?;
    match format {
        Format::Tsv => {
            writeln!(out, "n\tcount\tphi\tagree")?;
            for r in &rows {
                writeln!(out, "{}\t{}\t{}\t{}", r.n, r.count, r.phi, agree_cell(r))?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &rows)?;
            writeln!(out)?;
        }
    }
    eprintln!("note: n = 1 has the two connected surfaces F and G against phi(1) = 1; the totient identity covers n > 1 only");
    let bad: Vec<u64> = rows.iter().filter(|r| r.agree == Some(false)).map(|r| r.n).collect();
    if !bad.is_empty() {
        return Err(Failure::Mismatch(anyhow!("count differs from the totient at n = {bad:?}")));
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = match cli.command {
        Command::Validate => run_validate(&mut out),
        Command::Weights { u, v } => {
            let c = coefficients(u, v)?;
            let record = SurfaceRecord::new(c, &Triangulation::k13n586(), Some(components_via_reduction(c)?))?;
            serde_json::to_writer_pretty(&mut out, &record)?;
            writeln!(out)?;
            Ok(())
        }
        Command::Components { u, v, method } => run_components(u, v, method, &mut out),
        Command::Compile { u, v, output } => run_compile(u, v, output, &mut out),
        Command::Orbits { input, method: OrbitMethod::Unionfind } => run_orbits(input, &mut out),
        Command::Reduce { u, v, trace, accelerated, compiled, json } => {
            run_reduce(u, v, trace, accelerated, compiled, json, &mut out)
        }
        Command::Census { max_n, method, format } => run_census(max_n, method, format, &mut out),
    };
    out.flush()?;
    result
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(e)) => {
            eprintln!("mismatch: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
