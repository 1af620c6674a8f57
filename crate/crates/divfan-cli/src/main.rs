//! `divfan`: validate, evaluate, slice, render and build divisorial fans.
//!
//! Exit status: 0 on success, 1 when a document parses but fails validation
//! (or the requested operation is undefined on it), 2 on usage and parse
//! errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use divfan::constructions::{
    cotangent_bundle_data, cotangent_generators, danilov_gizatullin_generators, noncoherent_pair, noncomplete_p2,
    nonseparated_pair, rank2_generators, split_p1_bundle, DGParams, FanData,
};
use divfan::downgrade::{downgrade_fan, DowngradeData};
use divfan::fan::close_unchecked;
use divfan::fan::verdict::{slice, DEFAULT_WEIGHT_BOUND};
use divfan::geom::lattice::IMat;
use divfan::geom::rational::{parse_qvec, QVec};
use divfan::geom::Cone;
use divfan::io::json::{parse_weights, qdivisor_json, BundleJson, FanDataJson, SliceJson};
use divfan::io::{render, CheckReport, FanDocument, Panel};
use divfan::ppdiv::{PPDivisor, WeightFunction};
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "divfan", version, about = "Exact polyhedral divisors and divisorial fans")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Run library computations on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fan document and report faces, coherence and verdicts.
    Check {
        file: String,
        /// Largest integral weight in enumerated weight functions.
        #[arg(long, default_value_t = DEFAULT_WEIGHT_BOUND)]
        bound: u32,
        /// Write the report back into the document as its cache.
        #[arg(long)]
        cache: bool,
    },
    /// Evaluate one generator at a degree u.
    Eval {
        file: String,
        /// Comma-separated rationals, e.g. `1/2,-1`.
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        /// Generator index.
        #[arg(long, default_value_t = 0)]
        member: usize,
    },
    /// Print the cells of one slice of the closed fan.
    Slice {
        file: String,
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Render slices as an SVG document.
    Render {
        file: String,
        /// Weight functions `name=q,...`, one panel each.
        #[arg(long)]
        mu: Vec<String>,
        /// Prime divisors, one panel each (weight 1).
        #[arg(long)]
        prime: Vec<String>,
        /// One panel per special point of the base.
        #[arg(long)]
        points: bool,
        /// Output file; standard output by default.
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Write the document of a standard construction.
    Build {
        #[command(subcommand)]
        what: Build,
        #[arg(short, long, global = true)]
        output: Option<String>,
    },
    /// Divisors of a subtorus action on a toric variety.
    Downgrade {
        /// Degree map as rows, e.g. `1,1` or `0,0,-1,0;0,0,0,1`.
        #[arg(long, allow_hyphen_values = true)]
        deg: String,
        /// Rays of one cone, e.g. `1,0;0,1`; repeat for a fan.
        #[arg(long, required = true, allow_hyphen_values = true)]
        cone: Vec<String>,
        /// Section of the degree map, one row per coordinate of the cone lattice.
        #[arg(long, allow_hyphen_values = true)]
        section: Option<String>,
        #[arg(short, long)]
        output: Option<String>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct WeightArgs {
    /// Weight function `name=q,...`.
    #[arg(long)]
    mu: Option<String>,
    /// Single prime divisor with weight 1.
    #[arg(long)]
    prime: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Noncoherent,
    NoncoherentDisjoint,
    Nonseparated,
    Noncomplete,
}

#[derive(Subcommand)]
enum Build {
    /// Danilov-Gizatullin surface.
    Dg {
        #[arg(long, default_value_t = 2)]
        r: i64,
        #[arg(long, default_value_t = 3)]
        s: i64,
    },
    /// Projectivized cotangent bundle of a toric variety.
    Cotangent {
        /// `p1`, `p2`, `dp6`, or a fan file `{"rays": [[1,0],...], "cones": [[0,1],...]}`.
        #[arg(long)]
        fan: String,
    },
    /// Projectivization of a rank-2 toric bundle.
    Rank2 {
        /// `p2`, `dp6`, `split-p1`, or a bundle file `{"fan": ..., "cones": [{"u1", "u2", "p1", "p2"}, ...]}`.
        #[arg(long)]
        data: String,
    },
    /// Small examples of invalid, non-separated and non-complete fans.
    Example {
        #[arg(value_enum)]
        name: Example,
    },
}

enum Failure {
    Parse(String),
    Invalid(String),
}

type Outcome = Result<ExitCode, Failure>;

fn parse_err(e: impl std::fmt::Display) -> Failure {
    Failure::Parse(e.to_string())
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(parse_err)?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn load(path: &str) -> Result<(FanDocument, Vec<PPDivisor>), Failure> {
    let doc = FanDocument::parse(&read_input(path)?).map_err(parse_err)?;
    let gens = doc.divisors().map_err(parse_err)?;
    if gens.is_empty() {
        return Err(Failure::Parse("document has no generators".into()));
    }
    Ok((doc, gens))
}

fn write_output(path: Option<&str>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Parse(format!("{p}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_matrix(s: &str) -> Result<IMat, Failure> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<i64>().map(Into::into).map_err(|_| Failure::Parse(format!("`{x}` is not an integer"))))
                .collect()
        })
        .collect()
}

fn parse_rays(s: &str) -> Result<Vec<QVec>, Failure> {
    s.split(';').map(|r| parse_qvec(r).ok_or_else(|| Failure::Parse(format!("`{r}` is not a vector")))).collect()
}

macro_rules! print_json {
    ($v:expr) => {
        println!("{}", serde_json::to_string_pretty($v).expect("values serialize"))
    };
}

fn check(file: &str, bound: u32, cache: bool, as_json: bool) -> Outcome {
    let (mut doc, gens) = load(file)?;
    let report = CheckReport::run(&gens, bound).map_err(invalid)?;
    if as_json {
        print_json!(&report);
    } else {
        println!("members: {}", report.members);
        let bad: Vec<String> = report
            .faces
            .iter()
            .filter(|f| f.face_of != [Some(true), Some(true)])
            .map(|f| format!("{}&{}", f.pair[0], f.pair[1]))
            .collect();
        if bad.is_empty() {
            println!("face pairs: {} checked, all faces", report.faces.len());
        } else {
            println!("face pairs: {} checked, failing {}", report.faces.len(), bad.join(" "));
        }
        let count = |s: &str| report.coherence.iter().filter(|c| c.status == s).count();
        println!("coherence: {} certified, {} refuted, {} unknown", count("certified"), count("refuted"), count("unknown"));
        match &report.error {
            None => println!("valid: yes"),
            Some(e) => println!("valid: no ({e})"),
        }
        if let Some(p) = report.witness_pair {
            println!("witness pair: {} {}", p[0], p[1]);
        }
        for (label, v) in [("separated", &report.separated), ("complete", &report.complete)] {
            if let Some(v) = v {
                let mut line = format!("{label}: {}", v.verdict);
                if let Some(r) = &v.reason {
                    line += &format!(" ({r})");
                }
                if let Some(w) = &v.witness {
                    let terms: Vec<String> = w.iter().map(|(n, q)| format!("{n}={}", q.0)).collect();
                    let shown = if terms.is_empty() { "0".to_string() } else { terms.join(",") };
                    line += &format!(" witness {shown}");
                }
                println!("{line}");
            }
        }
    }
    let valid = report.valid;
    if cache {
        doc.cached = Some(report);
        std::fs::write(file, doc.to_json()).map_err(|e| Failure::Parse(format!("{file}: {e}")))?;
    }
    Ok(if valid { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn eval(file: &str, u: &str, member: usize, as_json: bool) -> Outcome {
    let (_, gens) = load(file)?;
    let d = gens.get(member).ok_or_else(|| Failure::Parse(format!("no generator {member}")))?;
    let u = parse_qvec(u).ok_or_else(|| Failure::Parse(format!("`{u}` is not a vector")))?;
    if u.len() != d.dim() {
        return Err(Failure::Parse(format!("u must have {} coordinates", d.dim())));
    }
    let value = d.evaluate(&u).map_err(invalid)?;
    let terms = qdivisor_json(d.base(), &value);
    if as_json {
        print_json!(&terms);
    } else if terms.is_empty() {
        println!("0");
    } else {
        for (name, c) in terms {
            println!("{name}: {}", c.0);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn weight_of(gens: &[PPDivisor], mu: Option<&str>, prime: Option<&str>) -> Result<WeightFunction, Failure> {
    let base = gens[0].base();
    match (mu, prime) {
        (Some(text), _) => parse_weights(base, text).map_err(parse_err),
        (None, Some(p)) => parse_weights(base, &format!("{p}=1")).map_err(parse_err),
        (None, None) => Err(Failure::Parse("a weight function is required".into())),
    }
}

fn slice_cmd(file: &str, w: &WeightArgs, as_json: bool) -> Outcome {
    let (_, gens) = load(file)?;
    let mu = weight_of(&gens, w.mu.as_deref(), w.prime.as_deref())?;
    let fan = close_unchecked(&gens).map_err(invalid)?;
    let s = slice(&fan, &mu).map_err(invalid)?;
    if as_json {
        print_json!(&SliceJson::of(fan.base(), &s));
    } else {
        for (i, c) in s.cells.iter().enumerate() {
            println!("D{i}: {c:?}");
        }
        println!("complex: {}", s.is_complex);
        if let Some(c) = s.covers {
            println!("covers: {c}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn render_cmd(file: &str, mus: &[String], primes: &[String], points: bool, output: Option<&str>) -> Outcome {
    let (_, gens) = load(file)?;
    let fan = close_unchecked(&gens).map_err(invalid)?;
    let base = fan.base().clone();
    let mut weights: Vec<(String, WeightFunction)> = Vec::new();
    for text in mus {
        weights.push((format!("mu: {text}"), parse_weights(&base, text).map_err(parse_err)?));
    }
    for p in primes {
        weights.push((p.clone(), parse_weights(&base, &format!("{p}=1")).map_err(parse_err)?));
    }
    if points {
        for class in base.point_classes().into_iter().filter(|c| !c.is_empty()) {
            let names: Vec<&str> = class.iter().map(|p| base.name(*p)).collect();
            weights.push((names.join(" "), WeightFunction::of_point(&class)));
        }
    }
    if weights.is_empty() {
        weights = base.prime_ids().map(|p| (base.name(p).to_string(), WeightFunction::of_point(&[p].into()))).collect();
    }
    let mut panels = Vec::new();
    for (title, mu) in weights {
        let s = slice(&fan, &mu).map_err(invalid)?;
        panels.push(Panel { title, cells: s.cells });
    }
    let svg = render(&panels).map_err(invalid)?;
    write_output(output, &svg)?;
    Ok(ExitCode::SUCCESS)
}

/// A named fan, or a fan file.
fn fan_data(name: &str) -> Result<FanData, Failure> {
    Ok(match name {
        "p1" => FanData::p1(),
        "p2" => FanData::p2(),
        "dp6" => FanData::dp6(),
        path => {
            let json: FanDataJson = serde_json::from_str(&read_input(path)?).map_err(parse_err)?;
            json.data().map_err(parse_err)?
        }
    })
}

fn build_cmd(what: &Build, output: Option<&str>) -> Outcome {
    let gens = match what {
        Build::Dg { r, s } => danilov_gizatullin_generators(&DGParams::new(*r, *s)),
        Build::Cotangent { fan } => cotangent_generators(&fan_data(fan)?),
        Build::Rank2 { data } => match data.as_str() {
            "p2" | "dp6" => cotangent_bundle_data(&fan_data(data)?).and_then(|d| rank2_generators(&d)),
            "split-p1" => rank2_generators(&split_p1_bundle()),
            path => {
                let json: BundleJson = serde_json::from_str(&read_input(path)?).map_err(parse_err)?;
                rank2_generators(&json.data().map_err(parse_err)?)
            }
        },
        Build::Example { name } => match name {
            Example::Noncoherent => noncoherent_pair(true),
            Example::NoncoherentDisjoint => noncoherent_pair(false),
            Example::Nonseparated => nonseparated_pair(),
            Example::Noncomplete => noncomplete_p2(),
        },
    }
    .map_err(parse_err)?;
    let doc = FanDocument::new(&gens).map_err(invalid)?;
    write_output(output, &doc.to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn downgrade_cmd(deg: &str, cones: &[String], section: Option<&str>, output: Option<&str>) -> Outcome {
    let deg = parse_matrix(deg)?;
    let n = deg.first().map_or(0, Vec::len);
    let section = section.map(parse_matrix).transpose()?;
    let dd = DowngradeData::new(&deg, n, section.as_ref()).map_err(parse_err)?;
    let mut fan = Vec::new();
    for c in cones {
        let rays = parse_rays(c)?;
        if rays.iter().any(|r| r.len() != n) {
            return Err(Failure::Parse(format!("rays of `{c}` must have {n} coordinates")));
        }
        fan.push(Cone::from_rays(n, &rays));
    }
    let gens = downgrade_fan(&fan, &dd).map_err(invalid)?;
    let doc = FanDocument::new(&gens).map_err(invalid)?;
    write_output(output, &doc.to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    divfan::par::set_sequential(cli.sequential);
    let outcome = match &cli.command {
        Command::Check { file, bound, cache } => check(file, *bound, *cache, cli.json),
        Command::Eval { file, u, member } => eval(file, u, *member, cli.json),
        Command::Slice { file, weight } => slice_cmd(file, weight, cli.json),
        Command::Render { file, mu, prime, points, output } => render_cmd(file, mu, prime, *points, output.as_deref()),
        Command::Build { what, output } => build_cmd(what, output.as_deref()),
        Command::Downgrade { deg, cone, section, output } => downgrade_cmd(deg, cone, section.as_deref(), output.as_deref()),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
