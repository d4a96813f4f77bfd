use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use chaincert::ambient::{format_rational, parse_rational, Point};
use chaincert::engine::{Engine, Mode, SearchConfig, Tuple, Witness};
use chaincert::enumerators::{draw, target_for_fixture, CertifiedCover, EnumConfig, Enumerator};
use chaincert::geometry::{chain_for_arc, Fixture, Kind, PolylinePath};
use chaincert::verify::{verify_cover, verify_stream, Outcome, Verdict, WitnessList};
use chaincert::{BallIndex, Error};

#[derive(Parser)]
#[command(name = "chaincert", version, about = "Certified chain covers of rays and lines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search a certified cover of the set inside B̂(a, n) at resolution 2^-k.
    Draw(DrawArgs),
    /// Stream indices of rational balls meeting the set.
    Enumerate(EnumArgs),
    /// Check a cover CSV or an emission list against the exact fixture geometry.
    Verify(VerifyArgs),
    /// Formal chain along the fixture's vertex path with link diameter below eps.
    Chain(ChainArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    fixture: PathBuf,
    /// ray or line; defaults to the fixture's kind.
    #[arg(long)]
    mode: Option<String>,
    /// Ambient dimension; only 2 is supported.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Dovetail steps per search.
    #[arg(long, default_value_t = 64)]
    max_steps: u64,
    #[arg(long, default_value_t = 3)]
    max_stage: u64,
}

#[derive(Args)]
struct DrawArgs {
    #[command(flatten)]
    common: Common,
    /// Anchor point as "p/q,p/q".
    #[arg(long)]
    anchor: Option<String>,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Writes the certified tuple as JSON.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args)]
struct EnumArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    limit: Option<usize>,
    /// Containment checks, e.g. "10^6-steps" or "250000".
    #[arg(long)]
    budget: Option<String>,
    /// Rounds; defaults to the fixture's published value.
    #[arg(long)]
    rounds: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    fixture: PathBuf,
    #[arg(long, conflicts_with = "emissions", required_unless_present = "emissions")]
    cover: Option<PathBuf>,
    /// Emission CSV written by `enumerate`.
    #[arg(long)]
    emissions: Option<PathBuf>,
    /// Witness list JSON; defaults to the fixture's published list.
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Emissions counted for completeness.
    #[arg(long)]
    budget: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long)]
    fixture: PathBuf,
    #[arg(long)]
    eps: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure classes mapped to exit statuses.
enum Failure {
    Verify,
    Budget(anyhow::Error),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::BudgetExhausted { .. } | Error::UndecidedAtCap { .. }) => Failure::Budget(e),
            _ => Failure::Input(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::from(anyhow::Error::new(e))
    }
}

fn parse_budget(s: &str) -> anyhow::Result<u64> {
    let s = s.trim().trim_end_matches("-steps").trim_end_matches("steps").trim();
    if let Some((base, exp)) = s.split_once('^') {
        let base: u64 = base.parse().with_context(|| format!("budget base {base:?}"))?;
        let exp: u32 = exp.parse().with_context(|| format!("budget exponent {exp:?}"))?;
        return base.checked_pow(exp).ok_or_else(|| anyhow!("budget {s} overflows"));
    }
    s.parse().with_context(|| format!("budget {s:?}"))
}

fn load_fixture(path: &Path) -> anyhow::Result<Arc<Fixture>> {
    let fx = Fixture::load(path).with_context(|| format!("loading fixture {}", path.display()))?;
    Ok(Arc::new(fx))
}

fn resolve_mode(fx: &Fixture, mode: &Option<String>) -> anyhow::Result<Mode> {
    match mode {
        Some(m) => Ok(m.parse()?),
        None if fx.is_line() => Ok(Mode::Line),
        None if fx.is_ray() => Ok(Mode::Ray),
        None => bail!("fixture {} is neither a ray nor a line; pass --mode", fx.id),
    }
}

fn engine_for(common: &Common, anchor: Option<&str>) -> anyhow::Result<(Arc<Fixture>, Mode, Engine)> {
    if common.dim != 2 {
        bail!("dimension {} is not supported; the engine works in the plane", common.dim);
    }
    let fx = load_fixture(&common.fixture)?;
    let mode = resolve_mode(&fx, &common.mode)?;
    let (target, default_anchor) = target_for_fixture(fx.clone(), mode)?;
    let a = match anchor {
        Some(s) => Point::parse(s)?,
        None => default_anchor,
    };
    let config = SearchConfig { max_steps: common.max_steps, max_stage: common.max_stage, workers: common.workers };
    Ok((fx, mode, Engine::new(target, a, config)?))
}

fn write_out(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn idx(balls: &[chaincert::Ball]) -> Vec<String> {
    balls.iter().map(|b| b.index().to_string()).collect()
}

fn witness_json(w: &Witness) -> serde_json::Value {
    let links: Vec<Vec<String>> = w.chain().links().iter().map(|l| idx(l)).collect();
    let mut v = match &w.tuple {
        Tuple::Ray(t) => json!({"mode": "ray", "n": t.n, "k": t.k, "m": t.m, "p": t.p, "u": idx(&t.u)}),
        Tuple::Line(t) => {
            json!({"mode": "line", "n": t.n, "k": t.k, "m": t.m, "p": t.p, "q": t.q, "e": t.e, "u": idx(&t.u)})
        }
    };
    v["chain"] = json!(links);
    v["stage"] = json!(w.stage);
    v["fuel"] = json!(w.fuel);
    v["step"] = json!(w.step);
    v
}

fn run_draw(args: &DrawArgs) -> Result<(), Failure> {
    let (fx, mode, engine) = engine_for(&args.common, args.anchor.as_deref())?;
    let cover = draw(&engine, args.n, args.k)?;
    write_out(args.out.as_deref(), &cover.to_csv(&fx.id, mode))?;
    if let Some(p) = &args.svg {
        write_out(Some(p), &cover.to_svg())?;
    }
    if let (Some(p), Some(w)) = (&args.witness, &cover.witness) {
        write_out(Some(p), &(serde_json::to_string_pretty(&witness_json(w)).map_err(anyhow::Error::from)? + "\n"))?;
    }
    eprintln!("{} links, {} balls", cover.links.len(), cover.ball_count());
    Ok(())
}

fn run_enumerate(args: &EnumArgs) -> Result<(), Failure> {
    let (fx, _, engine) = engine_for(&args.common, None)?;
    let mut config = EnumConfig::default();
    if let Some(r) = args.rounds.or(fx.published.enum_rounds) {
        config.rounds = r;
    }
    if let Some(b) = &args.budget {
        config.max_steps = parse_budget(b)?;
    }
    let stream = Enumerator::new(&engine, config);
    let limit = args.limit.unwrap_or(usize::MAX);
    let mut wtr = String::from("position,ball_index,center,radius\n");
    let mut count = 0;
    for (pos, i) in stream.take(limit).enumerate() {
        let b = i.decode(2);
        wtr.push_str(&format!("{pos},{i},{},{}\n", b.center.to_field(), format_rational(&b.radius)));
        count += 1;
    }
    write_out(args.out.as_deref(), &wtr)?;
    if count < limit && args.limit.is_some() {
        return Err(Failure::Budget(anyhow!("budget ran out after {count} of {limit} emissions")));
    }
    Ok(())
}

fn read_emissions(path: &Path) -> anyhow::Result<Vec<BallIndex>> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = rec.get(1).ok_or_else(|| anyhow!("emission row without ball_index"))?;
        out.push(BallIndex(field.parse().with_context(|| format!("ball index {field:?}"))?));
    }
    Ok(out)
}

fn run_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let fx = load_fixture(&args.fixture)?;
    let verdict: Verdict = if let Some(path) = &args.cover {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cover = CertifiedCover::from_csv(&text)?;
        verify_cover(&cover, &fx)
    } else {
        let path = args.emissions.as_ref().expect("clap requires cover or emissions");
        let emissions = read_emissions(path)?;
        let list_path = args.witness.clone().or_else(|| {
            let name = fx.published.witness_list.as_ref()?;
            Some(args.fixture.parent().unwrap_or(Path::new(".")).join(name))
        });
        let list = list_path.map(WitnessList::load).transpose()?;
        let budget = args.budget.as_deref().map(parse_budget).transpose()?.unwrap_or(u64::MAX);
        verify_stream(&emissions, &fx, list.as_ref(), budget)
    };
    write_out(args.out.as_deref(), &(verdict.to_json_line() + "\n"))?;
    match verdict.result {
        Outcome::Pass => Ok(()),
        Outcome::Fail => Err(Failure::Verify),
        Outcome::UndecidedAtCap => Err(Failure::Budget(anyhow!("verification undecided at the enclosure cap"))),
    }
}

fn run_chain(args: &ChainArgs) -> Result<(), Failure> {
    let fx = load_fixture(&args.fixture)?;
    if fx.curve.kind == Kind::Circle || fx.curve.vertices.len() < 2 {
        return Err(Failure::Input(anyhow!("chain needs a fixture with a vertex path")));
    }
    let eps = parse_rational(&args.eps)?;
    let path = PolylinePath::new(fx.curve.vertices.clone())?;
    let chain = chain_for_arc(&path, &eps)?;
    let mut out = format!("# fixture={}\n# eps={}\nlink_ordinal,ball_index,center,radius\n", fx.id, format_rational(&eps));
    for (t, link) in chain.links().iter().enumerate() {
        for b in link {
            out.push_str(&format!("{t},{},{},{}\n", b.index(), b.center.to_field(), format_rational(&b.radius)));
        }
    }
    write_out(args.out.as_deref(), &out)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Draw(a) => run_draw(a),
        Command::Enumerate(a) => run_enumerate(a),
        Command::Verify(a) => run_verify(a),
        Command::Chain(a) => run_chain(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Budget(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
