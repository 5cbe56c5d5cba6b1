use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use untangle::drawing::{classify_edges, parse_cdraw, stats, to_cdraw, validate_drawing};
use untangle::geometry::{gen_random, ingest, parse_gdraw, to_gdraw, Family, GenParams, GeoDrawing, Placement, Routing};
use untangle::render::{render_drawing, render_geo};
use untangle::separator::{exact_separator, find_separator, string_graph, verify_separator, HeuristicParams};
use untangle::transforms::{normalize_checked, potential, CheckLevel, Color, Coloring};
use untangle::untangler::{untangle, LoggedStep, UntangleConfig};
use untangle::{Drawing, EdgeSet, Error};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BOUND: u8 = 3;

#[derive(Parser)]
#[command(name = "untangle", version, about = "Generate, check and untangle graph drawings")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for generation and separator restarts
    #[arg(long, global = true, env = "UNTANGLE_SEED", default_value_t = 0)]
    seed: u64,
    /// Largest string graph handed to the exact separator
    #[arg(long, global = true, default_value_t = untangle::separator::DEFAULT_EXACT_CAP)]
    exact_cap: usize,
    /// Restarts of the heuristic separator
    #[arg(long, global = true, default_value_t = untangle::separator::DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long, global = true, value_enum, default_value_t = Debug::Level)]
    debug_invariants: Debug,
    /// Machine-readable output on stdout
    #[arg(long, global = true)]
    json: bool,
    /// Write surgery steps as JSON lines
    #[arg(long, global = true)]
    log: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Debug {
    Off,
    Level,
    Step,
}

impl From<Debug> for CheckLevel {
    fn from(d: Debug) -> Self {
        match d {
            Debug::Off => CheckLevel::Off,
            Debug::Level => CheckLevel::Level,
            Debug::Step => CheckLevel::Step,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random geometric drawing (.gdraw)
    Gen {
        /// complete N | bipartite A B | random N P
        #[arg(required = true, num_args = 1..)]
        family: Vec<String>,
        /// Place vertices in convex position
        #[arg(long)]
        convex: bool,
        /// Up to this many bend points per edge
        #[arg(long, default_value_t = 0)]
        detour: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a drawing for consistency
    Validate { input: PathBuf },
    /// Crossing counts
    Stats { input: PathBuf },
    /// Separator of the string graph of the crossing edges
    Separator {
        input: PathBuf,
        /// Require the exact search
        #[arg(long)]
        exact: bool,
    },
    /// Remove repeated crossings and self-crossings
    Normalize {
        input: PathBuf,
        /// Comma-separated edges coloured red; all others blue
        #[arg(long, value_delimiter = ',')]
        red: Vec<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Redraw so that every pair of edges crosses at most once
    Untangle {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        report: Option<PathBuf>,
        /// Report whether every separator met this ratio
        #[arg(long)]
        target_c: Option<f64>,
    },
    /// Draw as SVG
    Render {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Colour by a separator of the crossing edges (F0 red)
        #[arg(long)]
        separator: bool,
    },
}

/// Errors that map to a specific exit code.
struct Exit(u8, anyhow::Error);

impl From<anyhow::Error> for Exit {
    fn from(e: anyhow::Error) -> Self {
        Exit(EXIT_USAGE, e)
    }
}

type CmdResult = std::result::Result<u8, Exit>;

enum Input {
    Geo(GeoDrawing),
    Comb(Drawing),
}

fn read_input(path: &Path) -> anyhow::Result<Input> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let geo = match path.extension().and_then(|e| e.to_str()) {
        Some("gdraw") => true,
        Some("cdraw") => false,
        _ => !text.contains("\"crossings\""),
    };
    Ok(if geo {
        Input::Geo(parse_gdraw(&text).with_context(|| format!("parsing {}", path.display()))?)
    } else {
        Input::Comb(parse_cdraw(&text).with_context(|| format!("parsing {}", path.display()))?)
    })
}

/// Ingests geometric input; a degenerate picture counts as a violation.
fn combinatorial(input: Input) -> std::result::Result<Drawing, Exit> {
    match input {
        Input::Comb(d) => Ok(d),
        Input::Geo(g) => ingest(&g).map_err(|e| match e {
            Error::Degenerate(_) => Exit(EXIT_VIOLATION, e.into()),
            other => Exit(EXIT_USAGE, other.into()),
        }),
    }
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_log(path: Option<&Path>, steps: &[LoggedStep]) -> anyhow::Result<()> {
    let Some(path) = path else { return Ok(()) };
    let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    for s in steps {
        writeln!(f, "{}", serde_json::to_string(s)?)?;
    }
    Ok(())
}

fn ensure_valid(d: &Drawing) -> std::result::Result<(), Exit> {
    let report = validate_drawing(d);
    if report.ok {
        return Ok(());
    }
    let list: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
    Err(Exit(EXIT_VIOLATION, anyhow!("invalid drawing:\n  {}", list.join("\n  "))))
}

fn parse_family(words: &[String]) -> anyhow::Result<Family> {
    let num = |i: usize| -> anyhow::Result<usize> {
        words.get(i).ok_or_else(|| anyhow!("missing argument for family {}", words[0]))?.parse().context("expected an integer")
    };
    let family = match words[0].as_str() {
        "complete" => Family::Complete(num(1)?),
        "bipartite" => Family::CompleteBipartite(num(1)?, num(2)?),
        "random" => {
            let p: f64 = words.get(2).ok_or_else(|| anyhow!("random needs N and P"))?.parse().context("expected a probability")?;
            Family::Random { n: num(1)?, p }
        }
        other => bail!("unknown family {other:?} (expected complete, bipartite or random)"),
    };
    let expected = match family {
        Family::Complete(_) => 2,
        _ => 3,
    };
    if words.len() != expected {
        bail!("family {} takes {} argument(s)", words[0], expected - 1);
    }
    Ok(family)
}

fn cmd_gen(g: &Global, family: &[String], convex: bool, detour: usize, output: Option<&Path>) -> CmdResult {
    let family = parse_family(family)?;
    let params = GenParams::new(
        family,
        if detour == 0 { Routing::Straight } else { Routing::Detour(detour) },
        if convex { Placement::Convex } else { Placement::Random },
        g.seed,
    );
    let drawing = gen_random(&params).map_err(anyhow::Error::from)?;
    emit(output, &to_gdraw(&drawing))?;
    let (n, m) = (drawing.vertices.len(), drawing.edges.len());
    if g.json && output.is_some() {
        println!("{}", json!({ "n": n, "m": m, "seed": g.seed }));
    } else {
        eprintln!("generated n = {n}, m = {m}, seed = {}", g.seed);
    }
    Ok(0)
}

fn cmd_validate(g: &Global, input: &Path) -> CmdResult {
    let d = combinatorial(read_input(input)?)?;
    let report = validate_drawing(&d);
    if g.json {
        println!("{}", serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?);
    } else if report.ok {
        println!("valid: {} vertices, {} edges, {} crossings", d.vertex_count(), d.edge_count(), d.crossing_count());
    } else {
        for v in &report.violations {
            println!("{v}");
        }
    }
    Ok(if report.ok { 0 } else { EXIT_VIOLATION })
}

fn cmd_stats(g: &Global, input: &Path) -> CmdResult {
    let d = combinatorial(read_input(input)?)?;
    ensure_valid(&d)?;
    let s = stats(&d, &EdgeSet::all(d.edge_count())).map_err(anyhow::Error::from)?;
    if g.json {
        let mut v = serde_json::to_value(&s).map_err(anyhow::Error::from)?;
        v["cr"] = json!(s.crossing_points);
        v["k"] = json!(s.crossing_pairs);
        v["l"] = json!(s.paired_edges);
        v["simple"] = json!(s.is_simple());
        println!("{}", serde_json::to_string_pretty(&v).map_err(anyhow::Error::from)?);
    } else {
        println!("cr = {}", s.crossing_points);
        println!("k = {}", s.crossing_pairs);
        println!("l = {}", s.paired_edges);
        println!("max multiplicity = {}", s.max_multiplicity);
        println!("self-crossing edges = {}", s.self_crossings.len());
        println!("simple = {}", s.is_simple());
    }
    Ok(0)
}

fn cmd_separator(g: &Global, input: &Path, exact: bool) -> CmdResult {
    let d = combinatorial(read_input(input)?)?;
    ensure_valid(&d)?;
    let h = string_graph(&d, &EdgeSet::all(d.edge_count())).map_err(anyhow::Error::from)?;
    let params = HeuristicParams { restarts: g.restarts, seed: g.seed };
    let sep = if exact {
        exact_separator(&h, g.exact_cap).map_err(anyhow::Error::from)?
    } else {
        find_separator(&h, g.exact_cap, &params)
    };
    let check = verify_separator(&h, &sep);
    if g.json {
        let v = json!({
            "vertices": h.vertex_count(),
            "edges": h.edge_count(),
            "separator": sep,
            "check": check,
        });
        println!("{}", serde_json::to_string_pretty(&v).map_err(anyhow::Error::from)?);
    } else {
        println!("string graph: {} vertices, {} edges", h.vertex_count(), h.edge_count());
        println!("method: {}", sep.method);
        println!("F0 = {:?}", sep.f0);
        println!("F1 = {:?}", sep.f1);
        println!("F2 = {:?}", sep.f2);
        println!("ratio = {}, balance = {:.3}", sep.ratio, sep.balance);
        println!("verified: {}", check.ok);
        for v in &check.violations {
            println!("  {v}");
        }
    }
    Ok(if check.ok { 0 } else { EXIT_VIOLATION })
}

fn cmd_normalize(g: &Global, input: &Path, red: &[usize], output: Option<&Path>) -> CmdResult {
    let d = combinatorial(read_input(input)?)?;
    ensure_valid(&d)?;
    let m = d.edge_count();
    let all = EdgeSet::all(m);
    let mut col = Coloring::uniform(m, &all, Color::Blue);
    for &e in red {
        if e >= m {
            return Err(anyhow!("edge {e} out of range (drawing has {m} edges)").into());
        }
        col.set(e, Color::Red);
    }
    let before = potential(&d, &col);
    let out = normalize_checked(&d, &col, &all, g.debug_invariants.into()).map_err(anyhow::Error::from)?;
    let steps: Vec<LoggedStep> = out.steps.iter().map(|r| LoggedStep { depth: 0, record: r.clone() }).collect();
    write_log(g.log.as_deref(), &steps)?;
    let s = stats(&out.drawing, &all).map_err(anyhow::Error::from)?;
    let summary = json!({
        "steps": steps.len(),
        "potential_before": before,
        "potential_after": potential(&out.drawing, &col),
        "crossings_before": d.crossing_count(),
        "crossings_after": out.drawing.crossing_count(),
        "simple": s.is_simple(),
    });
    match output {
        Some(p) => {
            fs::write(p, to_cdraw(&out.drawing)).with_context(|| format!("writing {}", p.display()))?;
            println!("{}", serde_json::to_string_pretty(&summary).map_err(anyhow::Error::from)?);
        }
        None if g.json => println!("{}", serde_json::to_string_pretty(&summary).map_err(anyhow::Error::from)?),
        None => print!("{}", to_cdraw(&out.drawing)),
    }
    Ok(if s.is_simple() { 0 } else { EXIT_VIOLATION })
}

fn cmd_untangle(g: &Global, input: &Path, output: Option<&Path>, report: Option<&Path>, target_c: Option<f64>) -> CmdResult {
    let d = combinatorial(read_input(input)?)?;
    ensure_valid(&d)?;
    let cfg = UntangleConfig {
        exact_cap: g.exact_cap,
        heuristic: HeuristicParams { restarts: g.restarts, seed: g.seed },
        check: g.debug_invariants.into(),
        target_c,
    };
    let u = untangle(&d, &cfg).map_err(|e| Exit(EXIT_VIOLATION, e.into()))?;
    write_log(g.log.as_deref(), &u.steps)?;
    let text = serde_json::to_string_pretty(&u.report).map_err(anyhow::Error::from)? + "\n";
    match output {
        Some(p) => fs::write(p, to_cdraw(&u.drawing)).with_context(|| format!("writing {}", p.display()))?,
        None if report.is_some() => print!("{}", to_cdraw(&u.drawing)),
        None => {}
    }
    match report {
        Some(p) => fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?,
        None if g.json || output.is_some() => print!("{text}"),
        None => {}
    }
    if !g.json && report.is_none() && output.is_none() {
        let r = &u.report;
        println!("k = {}, l = {}", r.k, r.l);
        println!("crossings: {} -> {}", r.input_crossings, r.final_crossings);
        println!("levels = {}, c_hat = {}", r.levels.len(), r.c_hat);
        println!("bound 4c k^1.5 log2 l = {:.3} ({})", r.bound_lemma, if r.lemma_satisfied { "holds" } else { "FAILS" });
        if let Some(t) = r.theorem_satisfied {
            println!("bound 8c k^1.5 log2 k = {:.3} ({})", r.bound_theorem, if t { "holds" } else { "FAILS" });
        }
        for v in &r.violations {
            println!("violation: {v}");
        }
    }
    let r = &u.report;
    Ok(if !r.bounds_hold() {
        EXIT_BOUND
    } else if !r.ok() {
        EXIT_VIOLATION
    } else {
        0
    })
}

fn cmd_render(g: &Global, input: &Path, output: Option<&Path>, by_separator: bool) -> CmdResult {
    let input = read_input(input)?;
    let d = match &input {
        Input::Geo(geo) => ingest(geo).map_err(|e| Exit(EXIT_VIOLATION, e.into()))?,
        Input::Comb(d) => {
            ensure_valid(d)?;
            d.clone()
        }
    };
    let m = d.edge_count();
    let all = EdgeSet::all(m);
    let (_, crossing) = classify_edges(&d, &all).map_err(anyhow::Error::from)?;
    let mut col = Coloring::uniform(m, &crossing, Color::Blue);
    if by_separator {
        let h = string_graph(&d, &all).map_err(anyhow::Error::from)?;
        let sep = find_separator(&h, g.exact_cap, &HeuristicParams { restarts: g.restarts, seed: g.seed });
        for &e in &sep.f0 {
            col.set(e, Color::Red);
        }
    }
    let svg = match &input {
        Input::Geo(geo) => render_geo(geo, Some(&col)),
        Input::Comb(d) => render_drawing(d, Some(&col)),
    }
    .map_err(anyhow::Error::from)?;
    emit(output, &svg)?;
    Ok(0)
}

fn run(cli: Cli) -> CmdResult {
    let g = &cli.global;
    match &cli.command {
        Command::Gen { family, convex, detour, output } => cmd_gen(g, family, *convex, *detour, output.as_deref()),
        Command::Validate { input } => cmd_validate(g, input),
        Command::Stats { input } => cmd_stats(g, input),
        Command::Separator { input, exact } => cmd_separator(g, input, *exact),
        Command::Normalize { input, red, output } => cmd_normalize(g, input, red, output.as_deref()),
        Command::Untangle { input, output, report, target_c } => {
            cmd_untangle(g, input, output.as_deref(), report.as_deref(), *target_c)
        }
        Command::Render { input, output, separator } => cmd_render(g, input, output.as_deref(), *separator),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
