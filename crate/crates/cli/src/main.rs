mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mcg_core::curves::{algebraic_intersection, disjoint, intersection_bracket};
use mcg_core::replay::{load_and_validate_seeds, Certificate, Check, Replay};
use mcg_core::seeds::{self, CurveLiteral, SeedData};
use mcg_core::{Engine, Error, MCWord, NormalCurve, PolygonSurface};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "mcg", version, about = "Verify torsion generators of the extended mapping class group and query curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay the generation proof and write certificates.
    Verify(VerifyArgs),
    /// Apply a word to a registry curve.
    Word {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Word over r, R, t, q, T[name], T'[name]; rightmost letter acts first.
        word: String,
        /// Registry curve such as a0 or b3.
        curve: String,
    },
    /// Describe a curve, or a pair of curves.
    Curve {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Registry name or JSON literal (weights or crossing sequence).
        first: String,
        second: Option<String>,
    },
    /// Draw curves on the polygon as an SVG file.
    Svg {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(required = true)]
        curves: Vec<String>,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SurfaceArgs {
    /// Genus of the surface.
    #[arg(long, short)]
    genus: usize,
    /// Seed file; the shipped seeds are used when omitted.
    #[arg(long)]
    seeds: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Through {
    Torsion,
    #[value(name = "1")]
    Step1,
    #[value(name = "2")]
    Step2,
    #[value(name = "3")]
    Step3,
    #[value(name = "4")]
    Step4,
}

#[derive(Args)]
struct VerifyArgs {
    /// Genus of the surface, at least 5.
    #[arg(long, short)]
    genus: usize,
    /// Seed file; the shipped seeds are used when omitted.
    #[arg(long)]
    seeds: Option<PathBuf>,
    /// Directory for the certificate file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Last step to run.
    #[arg(long, value_enum, default_value = "4")]
    through: Through,
    /// Skip the three-reflections check.
    #[arg(long)]
    no_reflections: bool,
    /// Directory for SVG pictures of the seed curves.
    #[arg(long)]
    svg: Option<PathBuf>,
}

/// Failure of a command, split by exit status.
enum Failure {
    Invalid(String),
    Falsified(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Falsified(_) | Error::WeightCap { .. } | Error::TooLarge(_) | Error::Shorten(_) => {
                Failure::Falsified(e.to_string())
            }
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => cmd_verify(&args),
        Command::Word { surface, word, curve } => cmd_word(&surface, &word, &curve),
        Command::Curve { surface, first, second } => cmd_curve(&surface, &first, second.as_deref()),
        Command::Svg { surface, curves, out } => cmd_svg(&surface, &curves, &out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Falsified(msg)) => {
            eprintln!("falsified: {msg}");
            ExitCode::from(1)
        }
    }
}

fn read_seeds(genus: usize, path: Option<&Path>) -> Outcome<Option<SeedData>> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))?;
            Ok(Some(SeedData::from_json(&text)?))
        }
        None => Ok(seeds::shipped(genus)),
    }
}

/// Longest dual walk tried when a genus has no seed file.
const SEARCH_LENGTH: usize = 14;

fn engine_for(args: &SurfaceArgs) -> Outcome<Engine> {
    let s = PolygonSurface::new(args.genus)?;
    let data = match read_seeds(args.genus, args.seeds.as_deref())? {
        Some(d) => d,
        None => seeds::search(&s, SEARCH_LENGTH)?,
    };
    let (a0, b0) = data.resolve(&s)?;
    Ok(Engine::new(s, &a0, &b0)?)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    genus: usize,
    passed: bool,
    step2_target: Option<String>,
    step2_literal: Option<bool>,
    certificates: &'a [Certificate],
    reflections: &'a [(String, bool)],
    transcript: &'a [Check],
    error: Option<String>,
}

fn run_steps(r: &mut Replay, args: &VerifyArgs) -> mcg_core::Result<(Option<String>, Vec<Certificate>, Vec<(String, bool)>)> {
    r.verify_torsion_orders()?;
    let mut target = None;
    let mut certs = Vec::new();
    if args.through >= Through::Step1 {
        r.step1()?;
    }
    if args.through >= Through::Step2 {
        target = Some(r.step2()?);
    }
    if args.through >= Through::Step3 {
        r.step3()?;
    }
    if args.through >= Through::Step4 {
        certs = r.step4()?;
    }
    let reflections = if args.no_reflections { Vec::new() } else { r.three_reflections_check()? };
    Ok((target, certs, reflections))
}

fn cmd_verify(args: &VerifyArgs) -> Outcome<ExitCode> {
    let data = read_seeds(args.genus, args.seeds.as_deref())?.ok_or_else(|| {
        if args.genus < 5 {
            Failure::from(Error::GenusOutOfRange { genus: args.genus, min: 5 })
        } else {
            Failure::Invalid(format!("no shipped seeds for genus {}; pass --seeds", args.genus))
        }
    })?;
    let mut r = load_and_validate_seeds(args.genus, &data)?;
    if let Some(dir) = &args.svg {
        let s = r.engine().surface();
        let named = ["a0", "b0"].map(|n| (n.to_string(), r.engine().polygon_curve(n).ok().flatten().cloned()));
        let curves: Vec<(String, NormalCurve)> = named.into_iter().filter_map(|(n, c)| c.map(|c| (n, c))).collect();
        write_svg(dir, &format!("g{}_seeds.svg", args.genus), &svg::render(s, &curves)?)?;
    }
    let run = run_steps(&mut r, args);
    let (target, certs, reflections, error) = match run {
        Ok((t, c, f)) => (t, c, f, None),
        Err(e @ Error::Falsified(_)) => (None, Vec::new(), Vec::new(), Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    if let Some(dir) = &args.out {
        if !certs.is_empty() {
            fs::create_dir_all(dir)?;
            let lines: String = certs.iter().map(|c| c.to_json_line() + "\n").collect();
            fs::write(dir.join(format!("certificates_g{}.jsonl", args.genus)), lines)?;
        }
    }
    let passed = error.is_none()
        && r.transcript().iter().all(|c| c.passed)
        && certs.iter().all(|c| c.verified)
        && reflections.iter().all(|(_, ok)| *ok);
    let report = VerifyReport {
        genus: args.genus,
        passed,
        step2_target: target.clone(),
        step2_literal: r.literal_transport(),
        certificates: &certs,
        reflections: &reflections,
        transcript: r.transcript(),
        error,
    };
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
        Format::Text => print_text(&report, args),
    }
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn print_text(report: &VerifyReport, args: &VerifyArgs) {
    let g = report.genus;
    println!("genus {g}: {} genus branch", if g % 2 == 0 { "even" } else { "odd" });
    for c in report.transcript {
        println!("[{}] {}: {} ({})", if c.passed { " ok " } else { "FAIL" }, c.step, c.claim, c.detail);
    }
    if let Some(t) = &report.step2_target {
        println!("step 2 reached {t}");
    }
    for c in report.certificates {
        println!(
            "certificate {}: length {} (raw {}), {}",
            c.target,
            c.reduced_length,
            c.length,
            if c.verified { "verified" } else { "NOT verified" }
        );
    }
    if let (Some(dir), false) = (&args.out, report.certificates.is_empty()) {
        println!("{} certificates written to {}", report.certificates.len(), dir.join(format!("certificates_g{g}.jsonl")).display());
    }
    if let Some(e) = &report.error {
        println!("stopped: {e}");
    }
    println!("{}", if report.passed { "PASS" } else { "FAIL" });
}

fn list<T: ToString>(xs: &[T]) -> String {
    format!("[{}]", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn cmd_word(args: &SurfaceArgs, word: &str, curve: &str) -> Outcome<ExitCode> {
    let w: MCWord = word.parse()?;
    let mut engine = engine_for(args)?;
    let image = engine.add_image("image", &w, curve)?;
    println!("weights: {}", list(image.weights()));
    println!("homology: {}", list(engine.class("image")?));
    println!("character: {}", w.character());
    let same: Vec<&String> = engine
        .filling_family()
        .iter()
        .filter(|n| engine.curve(n).map(|c| c == &image).unwrap_or(false))
        .collect();
    if let Some(n) = same.first() {
        println!("equals: {n}");
    }
    Ok(ExitCode::SUCCESS)
}

fn resolve_curve(engine: &Engine, text: &str) -> Outcome<NormalCurve> {
    if text.trim_start().starts_with('[') {
        let lit: CurveLiteral =
            serde_json::from_str(text).map_err(|e| Failure::Invalid(format!("bad curve literal: {e}")))?;
        return Ok(lit.resolve(engine.surface())?);
    }
    engine
        .polygon_curve(text)?
        .cloned()
        .ok_or_else(|| Failure::Invalid(format!("`{text}` has no polygon coordinates")))
}

fn cmd_curve(args: &SurfaceArgs, first: &str, second: Option<&str>) -> Outcome<ExitCode> {
    let engine = engine_for(args)?;
    let s = engine.surface();
    let x = resolve_curve(&engine, first)?;
    describe(&engine, first, &x);
    if let Some(second) = second {
        let y = resolve_curve(&engine, second)?;
        describe(&engine, second, &y);
        println!("disjoint: {}", disjoint(s, &x, &y)?);
        println!("algebraic intersection: {}", algebraic_intersection(s, &x, &y)?);
        let b = intersection_bracket(s, &x, &y)?;
        println!("intersection bracket: ({}, {})", b.lower, b.upper);
        if let (Ok(mx), Ok(my)) = (engine.to_marked(&x), engine.to_marked(&y)) {
            let axis = mcg_core::twist::TwistAxis::on(engine.marked().triangulation(), mx.weights())?;
            println!("intersection number: {}", axis.intersection(my.weights()));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn describe(engine: &Engine, name: &str, c: &NormalCurve) {
    println!("{name}: weights {}", list(c.weights()));
    match engine.to_marked(c) {
        Ok(m) => {
            let class = engine.homology_class(c).map(|v| list(&v)).unwrap_or_else(|e| e.to_string());
            println!("{name}: essential, homology {class}, marked weights {}", list(m.weights()));
        }
        Err(_) => println!("{name}: inessential"),
    }
}

fn write_svg(dir: &Path, file: &str, body: &str) -> Outcome<()> {
    fs::create_dir_all(dir)?;
    let path = dir.join(file);
    fs::write(&path, body).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_svg(args: &SurfaceArgs, names: &[String], out: &Path) -> Outcome<ExitCode> {
    let engine = engine_for(args)?;
    let curves: Vec<(String, NormalCurve)> = names
        .iter()
        .map(|n| Ok((n.clone(), resolve_curve(&engine, n)?)))
        .collect::<Outcome<_>>()?;
    let stem: Vec<&str> = names.iter().map(|n| if n.starts_with('[') { "literal" } else { n.as_str() }).collect();
    let file = format!("g{}_{}.svg", args.genus, stem.join("_"));
    write_svg(out, &file, &svg::render(engine.surface(), &curves)?)?;
    Ok(ExitCode::SUCCESS)
}
