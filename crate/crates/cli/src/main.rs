use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::OnceLock;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::Value;

use princforge::congruence::{enumerate_congruences, principal_order};
use princforge::construction::{
    assemble_k, assemble_l, fixture_digest, pinned_gadget, verify_gadget, GadgetFixture, GadgetJson, SearchConfig,
    search_gadgets, MAX_AUX,
};
use princforge::harness::{
    bundle_theorem1, bundle_theorem2, check_theorem1, check_theorem2, exhaust_theorem1, lattice_dot, poset_dot,
    random_theorem2, reverify_bundle, Bundle, BundleKind, CampaignSummary, GeneratorConfig, Outcome,
    VerificationReport,
};
use princforge::lattice::{lattice_from_order, LatticeJson};
use princforge::order::{MapJson, PosetJson};
use princforge::{BoundedPoset, Error, FiniteLattice, FrameLabeling};

fn version() -> &'static str {
    static V: OnceLock<String> = OnceLock::new();
    V.get_or_init(|| format!("{} (gadget fixture sha256 {})", env!("CARGO_PKG_VERSION"), fixture_digest()))
}

#[derive(Parser)]
#[command(name = "princforge", version = version(), about = "Build and verify lattices with prescribed principal congruences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a bounded ordered set.
    Poset {
        #[command(subcommand)]
        action: PosetAction,
    },
    /// Assemble a lattice and write its build bundle.
    Build {
        #[command(subcommand)]
        which: Theorem,
    },
    /// Principal or all congruences of a lattice.
    Congruence {
        #[command(subcommand)]
        which: CongruenceKind,
    },
    /// Build (or load a bundle) and run every check.
    Verify {
        #[command(subcommand)]
        which: Theorem,
    },
    /// Inspect or search for the pair gadget.
    Gadget {
        #[command(subcommand)]
        action: GadgetAction,
    },
    /// Verify every small ordered set.
    Exhaust {
        #[command(subcommand)]
        which: ExhaustKind,
    },
    /// Verify seeded random maps.
    Random {
        #[command(subcommand)]
        which: RandomKind,
    },
    /// Render an ordered set, lattice, or bundle.
    Export {
        #[command(subcommand)]
        format: ExportKind,
    },
}

#[derive(Subcommand)]
enum PosetAction {
    Validate(Io),
}

#[derive(Subcommand)]
enum Theorem {
    Thm1(Io),
    Thm2(MapInput),
}

#[derive(Subcommand)]
enum CongruenceKind {
    Princ(Io),
    All(Io),
}

#[derive(Subcommand)]
enum GadgetAction {
    /// Contract check for a gadget (the pinned one by default).
    Check(OptionalIo),
    Search(SearchArgs),
}

#[derive(Subcommand)]
enum ExhaustKind {
    Thm1(ExhaustArgs),
}

#[derive(Subcommand)]
enum RandomKind {
    Thm2(RandomArgs),
}

#[derive(Subcommand)]
enum ExportKind {
    Dot(Io),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct Io {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct OptionalIo {
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MapInput {
    /// A build bundle (instead of --p/--q/--map).
    #[arg(long, short, conflicts_with_all = ["p", "q", "map"])]
    input: Option<PathBuf>,
    #[arg(long, requires_all = ["q", "map"])]
    p: Option<PathBuf>,
    #[arg(long)]
    q: Option<PathBuf>,
    #[arg(long)]
    map: Option<PathBuf>,
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 3)]
    max_aux: usize,
    #[arg(long, default_value_t = 50_000_000)]
    budget: u64,
    #[arg(long, default_value_t = 1)]
    max_results: usize,
    /// Require the frame cover and complement conditions.
    #[arg(long)]
    frame_compatible: bool,
    /// Write the first passer as a fixture file instead of listing passers.
    #[arg(long)]
    pin: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExhaustArgs {
    #[arg(long, default_value_t = 3)]
    max_interior: usize,
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Directory for one bundle per instance.
    #[arg(long)]
    bundles: Option<PathBuf>,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long, env = "PRINCFORGE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 3)]
    max_p_interior: usize,
    #[arg(long, default_value_t = 3)]
    max_q_interior: usize,
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    bundles: Option<PathBuf>,
}

/// Failure with its exit code.
enum Fail {
    Falsified(String),
    Input(String),
    Construction(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Falsified(_) => 1,
            Fail::Input(_) => 2,
            Fail::Construction(_) => 3,
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Fail::Input(e.to_string())
        } else {
            Fail::Construction(e.to_string())
        }
    }
}

fn lift<E: Into<Error>>(e: E) -> Fail {
    Fail::from(e.into())
}

type Run = Result<(), Fail>;

fn read_text(path: &Path) -> Result<String, Fail> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Fail::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn json_error(path: &Path, e: serde_json::Error) -> Fail {
    Fail::Input(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column()))
}

fn read_value(path: &Path) -> Result<Value, Fail> {
    serde_json::from_str(&read_text(path)?).map_err(|e| json_error(path, e))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Fail> {
    serde_json::from_str(&read_text(path)?).map_err(|e| json_error(path, e))
}

fn read_poset(path: &Path) -> Result<BoundedPoset, Fail> {
    read_json::<PosetJson>(path)?.into_poset().map_err(lift)
}

fn write_out(out: Option<&Path>, text: &str) -> Run {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Fail::Input(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| if text.ends_with('\n') { Ok(()) } else { stdout.write_all(b"\n") })
                .map_err(|e| Fail::Input(format!("stdout: {e}")))
        }
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Report summary on stderr; falsified or errored reports fail.
fn conclude(report: &VerificationReport) -> Run {
    for c in &report.checks {
        eprintln!("  {:<16} {:<4} {}", c.name, if c.passed { "ok" } else { "FAIL" }, c.detail);
    }
    match report.outcome {
        Outcome::Verified => {
            eprintln!("verified: {}", report.instance);
            Ok(())
        }
        Outcome::Falsified => Err(Fail::Falsified(report.counterexample.clone().unwrap_or_default())),
        Outcome::Error => Err(Fail::Construction(report.counterexample.clone().unwrap_or_default())),
    }
}

fn map_input(args: &MapInput) -> Result<princforge::IsotoneMap, Fail> {
    let (Some(p), Some(q), Some(m)) = (&args.p, &args.q, &args.map) else {
        return Err(Fail::Input("need --p, --q and --map (or --input with a bundle)".into()));
    };
    let (p, q) = (read_poset(p)?, read_poset(q)?);
    read_json::<MapJson>(m)?.into_map(p, q).map_err(lift)
}

fn load_bundle(path: &Path) -> Result<Bundle, Fail> {
    read_json(path)
}

fn is_bundle(v: &Value) -> bool {
    v.get("kind").is_some() && v.get("lattice").is_some()
}

fn build_thm1(io: &Io) -> Run {
    let p = read_poset(&io.input)?;
    let b = assemble_k(&p, &pinned_gadget()).map_err(lift)?;
    eprintln!("|K| = {}, {} gadget copies", b.lattice.len(), b.gadgets.len());
    match io.format {
        Format::Dot => write_out(io.out.as_deref(), &lattice_dot(&b.lattice, &b.labels)),
        Format::Json => {
            let report = check_theorem1(&b).map_err(Fail::from)?;
            write_out(io.out.as_deref(), &bundle_theorem1(&b, &report).to_json())
        }
    }
}

fn build_thm2(args: &MapInput) -> Run {
    let psi = map_input(args)?;
    let b = assemble_l(&psi, &pinned_gadget()).map_err(lift)?;
    eprintln!(
        "|L+| = {}, |L| = {}, |K| = {}, {} deleted",
        b.l_plus.len(),
        b.lattice.len(),
        b.k.len(),
        b.slims.len()
    );
    match args.format {
        Format::Dot => write_out(args.out.as_deref(), &lattice_dot(&b.lattice, &b.labels)),
        Format::Json => {
            let report = check_theorem2(&b).map_err(Fail::from)?;
            write_out(args.out.as_deref(), &bundle_theorem2(&b, &report).to_json())
        }
    }
}

fn reverify(path: &Path, kind: BundleKind, out: Option<&Path>) -> Run {
    let bundle = load_bundle(path)?;
    if bundle.kind != kind {
        return Err(Fail::Input(format!("{}: bundle is for the other construction", path.display())));
    }
    if bundle.gadget_digest != fixture_digest() {
        eprintln!("note: bundle was built with gadget fixture {}", bundle.gadget_digest);
    }
    let r = reverify_bundle(&bundle).map_err(Fail::from)?;
    write_out(out, &pretty(&r.report))?;
    if !r.matches_stored {
        return Err(Fail::Falsified(format!("bundle disagrees on: {}", r.mismatches.join(", "))));
    }
    conclude(&r.report)
}

fn verify_thm1(io: &Io) -> Run {
    if is_bundle(&read_value(&io.input)?) {
        return reverify(&io.input, BundleKind::Theorem1, io.out.as_deref());
    }
    let p = read_poset(&io.input)?;
    let b = assemble_k(&p, &pinned_gadget()).map_err(lift)?;
    let report = check_theorem1(&b).map_err(Fail::from)?;
    write_out(io.out.as_deref(), &pretty(&report))?;
    conclude(&report)
}

fn verify_thm2(args: &MapInput) -> Run {
    if let Some(path) = &args.input {
        return reverify(path, BundleKind::Theorem2, args.out.as_deref());
    }
    let psi = map_input(args)?;
    let b = assemble_l(&psi, &pinned_gadget()).map_err(lift)?;
    let report = check_theorem2(&b).map_err(Fail::from)?;
    write_out(args.out.as_deref(), &pretty(&report))?;
    conclude(&report)
}

/// A lattice from lattice JSON (`covers`) or poset JSON (`le`).
fn read_lattice(path: &Path) -> Result<(FiniteLattice, FrameLabeling), Fail> {
    let v = read_value(path)?;
    if v.get("covers").is_some() {
        let j: LatticeJson = serde_json::from_value(v).map_err(|e| json_error(path, e))?;
        j.into_lattice().map_err(lift)
    } else {
        let j: PosetJson = serde_json::from_value(v).map_err(|e| json_error(path, e))?;
        let p = j.into_poset().map_err(lift)?;
        Ok((lattice_from_order(&p).map_err(lift)?, FrameLabeling::new()))
    }
}

fn congruences(io: &Io, all: bool) -> Run {
    let (l, _) = read_lattice(&io.input)?;
    let order = if all { enumerate_congruences(&l) } else { principal_order(&l) }.map_err(lift)?;
    eprintln!("{} {}congruences", order.len(), if all { "" } else { "principal " });
    write_out(io.out.as_deref(), &pretty(&order.to_json(&l)))
}

fn gadget_check(io: &OptionalIo) -> Run {
    let g = match &io.input {
        None => pinned_gadget(),
        Some(path) => {
            let v = read_value(path)?;
            let gj: GadgetJson = match v.get("gadget") {
                Some(inner) => serde_json::from_value(inner.clone()),
                None => serde_json::from_value(v),
            }
            .map_err(|e| json_error(path, e))?;
            gj.into_gadget().map_err(lift)?
        }
    };
    let report = verify_gadget(&g);
    for (name, item) in report.items() {
        eprintln!("  {name:<6} {:<4} {}", if item.passed { "ok" } else { "FAIL" }, item.detail);
    }
    write_out(io.out.as_deref(), &pretty(&report))?;
    if report.passes_contract() {
        Ok(())
    } else {
        Err(Fail::Falsified("gadget fails its contract".into()))
    }
}

fn gadget_search(args: &SearchArgs) -> Run {
    if args.max_aux > MAX_AUX {
        return Err(Fail::Input(format!("--max-aux is at most {MAX_AUX}")));
    }
    let cfg = SearchConfig {
        max_aux: args.max_aux,
        budget: args.budget,
        max_results: if args.pin { 1 } else { args.max_results },
        frame_compatible: args.frame_compatible,
    };
    if args.pin {
        let fixture = GadgetFixture::from_search(&cfg).map_err(lift)?;
        eprintln!("pinned gadget with {} elements", fixture.gadget.lattice.elements.len());
        return write_out(args.out.as_deref(), &fixture.to_json());
    }
    let out = search_gadgets(&cfg).map_err(lift)?;
    eprintln!("{} passers among {} candidates", out.gadgets.len(), out.examined);
    let listed: Vec<GadgetJson> = out.gadgets.iter().map(|g| g.to_json()).collect();
    write_out(args.out.as_deref(), &pretty(&listed))?;
    if listed.is_empty() {
        Err(Fail::Falsified("no gadget passes the contract".into()))
    } else {
        Ok(())
    }
}

fn write_bundles(dir: Option<&Path>, bundles: &[Bundle]) -> Run {
    let Some(dir) = dir else { return Ok(()) };
    fs::create_dir_all(dir).map_err(|e| Fail::Input(format!("{}: {e}", dir.display())))?;
    for (n, b) in bundles.iter().enumerate() {
        let path = dir.join(format!("{n:04}.json"));
        fs::write(&path, b.to_json()).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn campaign_result(summary: &CampaignSummary) -> Run {
    eprint!("{}", summary.table());
    if summary.errors > 0 {
        Err(Fail::Construction(format!("{} instances failed to build", summary.errors)))
    } else if summary.falsified > 0 {
        Err(Fail::Falsified(format!("{} instances falsified", summary.falsified)))
    } else {
        Ok(())
    }
}

fn exhaust(args: &ExhaustArgs) -> Run {
    if args.max_interior > 4 {
        return Err(Fail::Input("--max-interior is at most 4".into()));
    }
    let (summary, bundles) = exhaust_theorem1(args.max_interior, &pinned_gadget());
    write_out(args.out.as_deref(), &pretty(&summary))?;
    write_bundles(args.bundles.as_deref(), &bundles)?;
    campaign_result(&summary)
}

fn random(args: &RandomArgs) -> Run {
    if args.max_p_interior > 4 || args.max_q_interior > 4 {
        return Err(Fail::Input("interior sizes are at most 4".into()));
    }
    let cfg = GeneratorConfig {
        seed: args.seed,
        max_p_interior: args.max_p_interior,
        max_q_interior: args.max_q_interior,
        trials: args.trials,
    };
    let (summary, bundles) = random_theorem2(&cfg, &pinned_gadget());
    write_out(args.out.as_deref(), &pretty(&summary))?;
    write_bundles(args.bundles.as_deref(), &bundles)?;
    campaign_result(&summary)
}

fn export_dot(io: &Io) -> Run {
    let v = read_value(&io.input)?;
    let text = if is_bundle(&v) {
        let b: Bundle = serde_json::from_value(v).map_err(|e| json_error(&io.input, e))?;
        let (l, labels) = b.lattice.into_lattice().map_err(lift)?;
        lattice_dot(&l, &labels)
    } else if v.get("covers").is_some() {
        let (l, labels) = read_lattice(&io.input)?;
        lattice_dot(&l, &labels)
    } else {
        poset_dot(&read_poset(&io.input)?)
    };
    write_out(io.out.as_deref(), &text)
}

fn poset_validate(io: &Io) -> Run {
    let p = read_poset(&io.input)?;
    eprintln!("valid: {} elements, {} covers", p.len(), p.covers().len());
    match io.format {
        Format::Json => write_out(io.out.as_deref(), &pretty(&p)),
        Format::Dot => write_out(io.out.as_deref(), &poset_dot(&p)),
    }
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Poset { action: PosetAction::Validate(io) } => poset_validate(&io),
        Command::Build { which: Theorem::Thm1(io) } => build_thm1(&io),
        Command::Build { which: Theorem::Thm2(m) } => build_thm2(&m),
        Command::Congruence { which: CongruenceKind::Princ(io) } => congruences(&io, false),
        Command::Congruence { which: CongruenceKind::All(io) } => congruences(&io, true),
        Command::Verify { which: Theorem::Thm1(io) } => verify_thm1(&io),
        Command::Verify { which: Theorem::Thm2(m) } => verify_thm2(&m),
        Command::Gadget { action: GadgetAction::Check(io) } => gadget_check(&io),
        Command::Gadget { action: GadgetAction::Search(s) } => gadget_search(&s),
        Command::Exhaust { which: ExhaustKind::Thm1(a) } => exhaust(&a),
        Command::Random { which: RandomKind::Thm2(a) } => random(&a),
        Command::Export { format: ExportKind::Dot(io) } => export_dot(&io),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (kind, msg) = match &f {
                Fail::Falsified(m) => ("falsified", m),
                Fail::Input(m) => ("invalid input", m),
                Fail::Construction(m) => ("construction failed", m),
            };
            eprintln!("{kind}: {msg}");
            ExitCode::from(f.code())
        }
    }
}
