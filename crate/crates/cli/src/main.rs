//! `dgcm run <file> [--bound N] [--json|--table] [--oracle]` and `dgcm fixtures list|show`.
//!
//! Exit status: 0 all verdicts pass, 1 a conclusion failed, 2 a hypothesis was rejected,
//! 3 a resource bound was exhausted, 4 internal error, 64 usage, 65 parse error, 66 unreadable input.
//! `DGCM_CACHE_DIR`, when set, stores run documents keyed by session hash, version, bound and oracle flag.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dgcm::fixtures::{fixture, FIXTURES};
use dgcm::session::{parse_session, run_session, session_digest, Format, RunDocument, RunOptions, Session};

const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_NOINPUT: u8 = 66;

#[derive(Parser)]
#[command(name = "dgcm", version, about = "Certified derived commutative algebra over DG-rings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a session file, or a built-in fixture by name.
    Run(RunArgs),
    /// Built-in fixture sessions.
    Fixtures {
        #[command(subcommand)]
        cmd: FixtureCmd,
    },
}

#[derive(Args)]
struct RunArgs {
    file: String,
    /// Degree bound for resolutions; overrides the session's `bound`.
    #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
    bound: Option<i64>,
    #[arg(long, conflicts_with = "table")]
    json: bool,
    #[arg(long)]
    table: bool,
    /// Cross-check against dense linear algebra where the base is Artinian.
    #[arg(long)]
    oracle: bool,
}

#[derive(Subcommand)]
enum FixtureCmd {
    List,
    /// Print a fixture's session text.
    Show { name: String },
}

fn load(file: &str) -> Result<(String, String), ExitCode> {
    let path = Path::new(file);
    if !path.exists() {
        if let Some(f) = fixture(file) {
            return Ok((f.name.to_string(), f.text.to_string()));
        }
    }
    match std::fs::read_to_string(path) {
        Ok(text) => {
            let name = path.file_stem().map_or(file.to_string(), |s| s.to_string_lossy().into_owned());
            Ok((name, text))
        }
        Err(e) => {
            eprintln!("dgcm: cannot read {file}: {e}");
            Err(ExitCode::from(EX_NOINPUT))
        }
    }
}

fn cache_path(session: &Session, opts: &RunOptions, bound: i64) -> Option<PathBuf> {
    let dir = std::env::var_os("DGCM_CACHE_DIR")?;
    let key = &session_digest(session)[..16];
    let oracle = if opts.oracle { "-oracle" } else { "" };
    Some(PathBuf::from(dir).join(format!("{key}-v{}-b{bound}{oracle}.json", env!("CARGO_PKG_VERSION"))))
}

fn run(args: RunArgs) -> ExitCode {
    let (name, text) = match load(&args.file) {
        Ok(x) => x,
        Err(c) => return c,
    };
    let session = match parse_session(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}:{}:{}: {}", args.file, e.line, e.col, e.msg);
            return ExitCode::from(EX_DATAERR);
        }
    };
    let format = if args.json {
        Some(Format::Json)
    } else if args.table {
        Some(Format::Table)
    } else {
        None
    };
    let opts = RunOptions { name, bound: args.bound, oracle: args.oracle, format };
    let bound = args.bound.or(session.bound()).unwrap_or(dgcm::session::DEFAULT_BOUND);
    let cache = cache_path(&session, &opts, bound);
    let cached = cache.as_ref().and_then(|p| std::fs::read_to_string(p).ok()).and_then(|s| serde_json::from_str::<RunDocument>(&s).ok());
    let doc = match cached {
        Some(mut d) => {
            d.fixture.name = opts.name.clone();
            d.format = opts.format.or(session.format()).unwrap_or_default();
            d
        }
        None => {
            let d = run_session(&session, &opts);
            if let Some(p) = &cache {
                if let Err(e) = p.parent().map_or(Ok(()), std::fs::create_dir_all).and_then(|_| std::fs::write(p, d.to_json())) {
                    eprintln!("dgcm: cache write failed: {e}");
                }
            }
            d
        }
    };
    print!("{}", doc.render());
    ExitCode::from(doc.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EX_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.cmd {
        Cmd::Run(a) => run(a),
        Cmd::Fixtures { cmd: FixtureCmd::List } => {
            let w = FIXTURES.iter().map(|f| f.name.len()).max().unwrap_or(0);
            for f in FIXTURES {
                println!("{:w$}  {}", f.name, f.summary);
            }
            ExitCode::SUCCESS
        }
        Cmd::Fixtures { cmd: FixtureCmd::Show { name } } => match fixture(&name) {
            Some(f) => {
                print!("{}", f.text);
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("dgcm: no fixture named {name}");
                ExitCode::from(EX_USAGE)
            }
        },
    }
}
