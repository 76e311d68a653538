use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use balance_kit::balancing::{
    balancing_space, balancing_space_with, is_minimal,
    link_weighting, product_weighting, prune_degenerate, violations, CheckMode, Weighting,
};
use balance_kit::complex::Complex;
use balance_kit::divisor::{admissible_simplices, decompose, divisor_of_complex, DivisorClass};
use balance_kit::generators::{all_labelings, family, Family};
use balance_kit::io::{
    complex_json, format_complex, format_weighting, kernel_json, parse_weight_list,
    rational_string, read_complex, read_weighting, weighting_json,
};
use balance_kit::multiset::{Multiset, Vertex};
use balance_kit::search::{
    classify_irreducible_candidates, enumerate_minimal, report_json, SearchOptions,
};
use balance_kit::verify::{self, TOPICS};
use balance_kit::{Error, Result};

#[derive(Parser)]
#[command(name = "balance-kit", version, about = "Balanced weightings on multiset complexes")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ComplexSource {
    /// A `.cplx` file.
    file: Option<PathBuf>,
    /// Use the complete complex on N vertices in degree D instead of a file.
    #[arg(long, num_args = 2, value_names = ["N", "D"])]
    complete: Option<Vec<u32>>,
    /// With --complete, only nonsingular simplices.
    #[arg(long)]
    nonsingular: bool,
}

impl ComplexSource {
    fn load(&self) -> Result<Complex> {
        match (&self.file, &self.complete) {
            (Some(path), None) => read_complex(path),
            (None, Some(nd)) => Ok(balance_kit::generators::complete(nd[0], nd[1] as usize, self.nonsingular)),
            _ => Err(Error::Domain("give either a .cplx file or --complete N D".into())),
        }
    }
}

#[derive(Args)]
struct WeightSource {
    /// Comma-separated weights in sorted simplex order, e.g. `1,-1,1/2`.
    #[arg(long, allow_hyphen_values = true)]
    weights: Option<String>,
    /// A weighting file with `<labels> : <weight>` lines.
    #[arg(long)]
    weights_file: Option<PathBuf>,
}

impl WeightSource {
    fn load(&self, complex: Option<&Complex>) -> Result<Option<Weighting>> {
        match (&self.weights, &self.weights_file) {
            (Some(_), Some(_)) => Err(Error::Domain("give only one of --weights and --weights-file".into())),
            (Some(list), None) => {
                let complex = complex.ok_or_else(|| Error::Domain("--weights needs a complex".into()))?;
                parse_weight_list(complex, list).map(Some)
            }
            (None, Some(path)) => {
                let w = read_weighting(path)?;
                match complex {
                    Some(c) => Ok(Some(w.extend_to(c).map_err(|_| {
                        Error::Domain(format!("{} does not weight the given complex", path.display()))
                    })?)),
                    None => Ok(Some(w)),
                }
            }
            (None, None) => Ok(None),
        }
    }
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum Mode {
    Facets,
    All,
}

impl From<Mode> for CheckMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Facets => CheckMode::Facets,
            Mode::All => CheckMode::AllDegrees,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Dimension of the balancing space.
    Dim {
        #[command(flatten)]
        source: ComplexSource,
    },
    /// Basis of the balancing space.
    Kernel {
        #[command(flatten)]
        source: ComplexSource,
        #[arg(long, value_enum, default_value = "facets")]
        mode: Mode,
    },
    /// Whether a weighting is balanced, listing violated conditions.
    Check {
        #[command(flatten)]
        source: ComplexSource,
        #[command(flatten)]
        weights: WeightSource,
        #[arg(long, value_enum, default_value = "facets")]
        mode: Mode,
    },
    /// Largest subcomplex carrying a nondegenerate balancing.
    Prune {
        #[command(flatten)]
        source: ComplexSource,
    },
    /// Minimal balanceable subcomplexes of a complete complex, up to relabeling.
    MinimalSearch {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        nonsingular: bool,
        /// Largest circuit to report; needed for singular ambients.
        #[arg(long)]
        max_support: Option<usize>,
        #[arg(long, env = "BALANCE_KIT_JOBS")]
        jobs: Option<usize>,
        /// Marked points for the divisor classes (default n + 1).
        #[arg(long)]
        points: Option<u32>,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Divisor class of a complex on M̄_0,n.
    Divisor {
        file: PathBuf,
        #[arg(long)]
        n: u32,
    },
    /// Simplices admissible for a divisor class given as JSON.
    Admissible {
        class: PathBuf,
        #[arg(long)]
        d: usize,
    },
    /// Decompositions of a class into labeled copies of named families.
    Decompose {
        class: PathBuf,
        /// Comma-separated families among B, H, T, P, O, C.
        #[arg(long, default_value = "B,H,T,P")]
        families: String,
        /// Candidate copies use labels 1..=L (default n − 1).
        #[arg(long)]
        labels: Option<Vertex>,
    },
    /// Named complexes: A, B i j, H i j k p q r, T, P, O, C, complete N D, torus N1 N2.., cube D, rp2.
    Gen {
        name: String,
        params: Vec<u32>,
        #[arg(long)]
        nonsingular: bool,
        /// Write the complex here, and its weighting next to it as `.weights`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Link of a complex (or weighting) at a multiset.
    Link {
        file: PathBuf,
        /// Labels of the multiset, e.g. "1 1".
        #[arg(long)]
        at: String,
        #[command(flatten)]
        weights: WeightSource,
    },
    /// Product of two complexes, or of two weightings given as weight files.
    Product {
        left: PathBuf,
        right: PathBuf,
        /// Treat both inputs as weighting files.
        #[arg(long)]
        weighted: bool,
    },
    /// Run the built-in verification checks.
    Verify {
        /// Restrict to one topic.
        #[arg(long)]
        topic: Option<String>,
        #[arg(long, env = "BALANCE_KIT_JOBS")]
        jobs: Option<usize>,
    },
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("valid JSON"));
}

fn parse_multiset(text: &str) -> Result<Multiset> {
    let labels = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Vertex>().map_err(|_| Error::Domain(format!("bad label {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Multiset::from_labels(&labels)
}

fn read_class(path: &Path) -> Result<DivisorClass> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    DivisorClass::from_json(&value)
}

fn family_spec(name: &str, params: &[u32], nonsingular: bool) -> Result<Family> {
    let labels = |count: usize| -> Result<Vec<Vertex>> {
        if params.len() != count {
            return Err(Error::Domain(format!("{name} takes {count} labels, got {}", params.len())));
        }
        Ok(params.to_vec())
    };
    Ok(match name {
        "A" => {
            labels(0)?;
            Family::A
        }
        "B" => Family::B(labels(2)?.try_into().expect("2")),
        "H" => Family::H(labels(6)?.try_into().expect("6")),
        "T" => Family::T(labels(5)?.try_into().expect("5")),
        "P" => Family::P(labels(6)?.try_into().expect("6")),
        "O" => Family::O(labels(6)?.try_into().expect("6")),
        "C" => Family::C(labels(6)?.try_into().expect("6")),
        "complete" => {
            let p = labels(2)?;
            Family::Complete { n: p[0], d: p[1] as usize, nonsingular }
        }
        "torus" => Family::Torus(params.iter().map(|&x| x as usize).collect()),
        "cube" => Family::Cube(labels(1)?[0] as usize),
        "rp2" => {
            labels(0)?;
            Family::ProjectivePlane6
        }
        other => return Err(Error::Domain(format!("unknown family {other:?}"))),
    })
}

fn run(cli: Cli) -> Result<()> {
    let json = cli.json;
    match cli.command {
        Command::Dim { source } => {
            let c = source.load()?;
            let dim = if c.is_empty() { 0 } else { balancing_space(&c)?.dimension() };
            if json {
                print_json(&json!({ "dimension": dim }));
            } else {
                println!("{dim}");
            }
        }
        Command::Kernel { source, mode } => {
            let space = balancing_space_with(&source.load()?, mode.into())?;
            if json {
                print_json(&kernel_json(&space));
            } else {
                println!("dimension {}", space.dimension());
                for w in space.basis_weightings() {
                    println!("---");
                    print!("{}", format_weighting(&w));
                }
            }
        }
        Command::Check { source, weights, mode } => {
            let complex = match (&source.file, &source.complete) {
                (None, None) => None,
                _ => Some(source.load()?),
            };
            let w = weights
                .load(complex.as_ref())?
                .ok_or_else(|| Error::Domain("check needs --weights or --weights-file".into()))?;
            let bad = violations(&w, mode.into());
            if json {
                print_json(&json!({
                    "balanced": bad.is_empty(),
                    "violations": bad.iter().map(|(s, v)| json!({
                        "multiset": s.labels().collect::<Vec<_>>(),
                        "sum": rational_string(v),
                    })).collect::<Vec<_>>(),
                }));
            } else if bad.is_empty() {
                println!("balanced");
            } else {
                println!("unbalanced");
                for (s, v) in bad {
                    println!("  {s}: {}", rational_string(&v));
                }
            }
        }
        Command::Prune { source } => {
            let c = source.load()?;
            let pruned = prune_degenerate(&c)?;
            if json {
                print_json(&json!({
                    "complex": complex_json(&pruned),
                    "removed": c.len() - pruned.len(),
                    "minimal": !pruned.is_empty() && is_minimal(&pruned)?,
                }));
            } else {
                print!("{}", format_complex(&pruned));
            }
        }
        Command::MinimalSearch { n, d, nonsingular, max_support, jobs, points, out } => {
            let classes = enumerate_minimal(n, d, nonsingular, SearchOptions { max_support, jobs })?;
            let reports = classify_irreducible_candidates(&classes, points.unwrap_or(n + 1))?;
            let report = report_json(&classes, &reports);
            if let Some(path) = out {
                std::fs::write(&path, serde_json::to_string_pretty(&report)?)?;
            }
            if json {
                print_json(&report);
            } else {
                for (class, r) in classes.iter().zip(&reports) {
                    println!(
                        "{} simplices, {} labeled copies, product: {}, certified: {}",
                        class.representative.len(),
                        class.labeled_count,
                        r.is_product.map_or("n/a".to_string(), |p| p.to_string()),
                        r.certified
                    );
                    println!("  {}", class.representative);
                    if let Some(div) = &r.divisor {
                        println!("  {div}");
                    }
                }
                println!("{} classes", classes.len());
            }
        }
        Command::Divisor { file, n } => {
            let class = divisor_of_complex(&read_complex(&file)?, n)?;
            if json {
                print_json(&class.to_json());
            } else {
                println!("{class}");
            }
        }
        Command::Admissible { class, d } => {
            let c = admissible_simplices(&read_class(&class)?, d)?;
            if json {
                print_json(&json!({ "complex": complex_json(&c), "count": c.len() }));
            } else {
                print!("{}", format_complex(&c));
            }
        }
        Command::Decompose { class, families, labels } => {
            let target = read_class(&class)?;
            let m = labels.unwrap_or(target.n() - 1);
            let mut names = Vec::new();
            let mut candidates = Vec::new();
            for kind in families.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                for c in all_labelings(kind, m)? {
                    candidates.push(divisor_of_complex(&c, target.n())?);
                    names.push(format!("{kind} {c}"));
                }
            }
            let found = decompose(&target, &candidates)?;
            if json {
                print_json(&json!({
                    "candidates": candidates.len(),
                    "decompositions": found.iter().map(|idx| idx.iter().map(|&i| names[i].clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                }));
            } else if found.is_empty() {
                println!("no decomposition over {} candidates", candidates.len());
            } else {
                for idx in found {
                    let parts: Vec<&str> = idx.iter().map(|&i| names[i].as_str()).collect();
                    println!("{}", parts.join(" + "));
                }
            }
        }
        Command::Gen { name, params, nonsingular, out } => {
            let (c, w) = family(&family_spec(&name, &params, nonsingular)?)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, format_complex(&c))?;
                    if let Some(w) = &w {
                        std::fs::write(path.with_extension("weights"), format_weighting(w))?;
                    }
                }
                None if json => print_json(&json!({
                    "complex": complex_json(&c),
                    "weighting": w.as_ref().map(weighting_json),
                })),
                None => match &w {
                    Some(w) => print!("{}", format_weighting(w)),
                    None => print!("{}", format_complex(&c)),
                },
            }
        }
        Command::Link { file, at, weights } => {
            let s = parse_multiset(&at)?;
            let complex = read_complex(&file)?;
            match weights.load(Some(&complex))? {
                Some(w) => {
                    let lw = link_weighting(&w, &s)?;
                    if json {
                        print_json(&weighting_json(&lw));
                    } else {
                        print!("{}", format_weighting(&lw));
                    }
                }
                None => {
                    let link = complex.link(&s)?;
                    if json {
                        print_json(&json!({ "complex": complex_json(&link) }));
                    } else {
                        print!("{}", format_complex(&link));
                    }
                }
            }
        }
        Command::Product { left, right, weighted } => {
            if weighted {
                let p = product_weighting(&read_weighting(&left)?, &read_weighting(&right)?);
                if json {
                    print_json(&weighting_json(&p));
                } else {
                    print!("{}", format_weighting(&p));
                    let zeros = p.zero_simplices();
                    if !zeros.is_empty() {
                        eprintln!("warning: {} simplices have weight 0", zeros.len());
                    }
                }
            } else {
                let p = read_complex(&left)?.product(&read_complex(&right)?);
                if json {
                    print_json(&json!({ "complex": complex_json(&p) }));
                } else {
                    print!("{}", format_complex(&p));
                }
            }
        }
        Command::Verify { topic, jobs } => {
            if let Some(t) = &topic {
                if !TOPICS.contains(&t.as_str()) {
                    return Err(Error::Domain(format!("unknown topic {t:?}; choose from {}", TOPICS.join(", "))));
                }
            }
            let options = verify::Options { jobs, ..Default::default() };
            let report = verify::run(topic.as_deref(), &options);
            if json {
                print_json(&json!({
                    "checks": report.checks.iter().map(|c| json!({
                        "id": c.id,
                        "topic": c.topic,
                        "description": c.description,
                        "expected": c.expected,
                        "actual": c.actual,
                        "passed": c.passed,
                        "seconds": c.elapsed.as_secs_f64(),
                    })).collect::<Vec<_>>(),
                    "passed": report.passed(),
                    "total": report.checks.len(),
                }));
            } else {
                println!("{report}");
            }
            if !report.all_passed() {
                return Err(Error::Domain("verification failed".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse { .. } | Error::Io(_) | Error::Json(_) => 3,
                Error::Domain(_) => 4,
            })
        }
    }
}
