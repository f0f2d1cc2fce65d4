use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use asfield::{emit_report, explore, run_campaign, CampaignConfig, CampaignName, CliError, Format, Query, REGISTRY};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "asfield", version, about = "Artin-Schreier extensions of F_q(T): campaigns and queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ramification, jump and root valuation of a^-i
    Lemma1(CampaignArgs),
    /// Local degree p^n of n generators a^-i at a
    LocalDisjoint(CampaignArgs),
    /// Global degree p^n of n mixed generators
    GlobalDisjoint(CampaignArgs),
    /// Local degrees p, p^2, ... at a for growing truncations
    Growth(CampaignArgs),
    /// Local degree at most p away from a
    AwayBound(CampaignArgs),
    /// Local degrees bounded by p^2 for fixed i
    P2Bound(CampaignArgs),
    /// Frobenius distribution over unramified places
    Chebotarev(CampaignArgs),
    /// One-shot queries
    Explore {
        #[command(subcommand)]
        query: ExploreCommand,
    },
    /// List campaign statements
    Registry,
}

#[derive(Args)]
struct CampaignArgs {
    /// Base field `p^m`
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    max_gen_degree: Option<usize>,
    #[arg(long)]
    max_place_degree: Option<usize>,
    #[arg(long)]
    max_i: Option<u32>,
    /// Generator count bound
    #[arg(long)]
    n: Option<usize>,
    /// Fixed exponent (p2-bound)
    #[arg(long)]
    i: Option<u32>,
    /// Random draws per generator count (global-disjoint)
    #[arg(long)]
    samples: Option<usize>,
    /// Generator place; repeatable, overrides --max-gen-degree
    #[arg(long = "place")]
    places: Vec<String>,
    /// Comma-separated generator list; repeatable (chebotarev)
    #[arg(long)]
    gens: Vec<String>,
    #[arg(long, env = "ASFIELD_SEED")]
    seed: Option<u64>,
    #[arg(long)]
    guard: Option<i64>,
    /// Allowed deviation of the split fraction (chebotarev)
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the wall-clock duration so reruns are byte-identical
    #[arg(long)]
    no_timing: bool,
}

impl CampaignArgs {
    fn config(self, name: CampaignName) -> CampaignConfig {
        let mut c = CampaignConfig::new(name);
        if let Some(q) = self.q {
            c.q = q;
        }
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { c.$f = v; })* };
        }
        set!(max_gen_degree, max_place_degree, max_i, n, i, samples, seed, guard, tolerance);
        if !self.places.is_empty() {
            c.places = Some(self.places);
        }
        if !self.gens.is_empty() {
            c.gens = Some(self.gens);
        }
        c.format = self.format;
        c
    }
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "2")]
    q: String,
    #[arg(long, default_value_t = asfield::config::DEFAULT_GUARD)]
    guard: i64,
    #[arg(long, default_value = "human")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ExploreCommand {
    /// Class of c at a place
    Class {
        #[arg(long)]
        c: String,
        #[arg(long)]
        place: String,
        #[command(flatten)]
        common: Common,
    },
    /// Local rank and degree of a compositum at a place
    Rank {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        place: String,
        #[command(flatten)]
        common: Common,
    },
    /// Global rank and degree of a compositum
    Global {
        #[arg(long)]
        gens: String,
        #[command(flatten)]
        common: Common,
    },
    /// Frobenius tuple at an unramified place
    Frobenius {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        place: String,
        #[command(flatten)]
        common: Common,
    },
    /// Places where c ramifies
    Locus {
        #[arg(long)]
        c: String,
        #[command(flatten)]
        common: Common,
    },
    /// Places up to a degree bound, infinity first
    Places {
        #[arg(long, default_value_t = 2)]
        max_place_degree: usize,
        #[arg(long)]
        finite_only: bool,
        #[command(flatten)]
        common: Common,
    },
}

impl ExploreCommand {
    fn split(self) -> (Query, Common) {
        match self {
            ExploreCommand::Class { c, place, common } => (Query::Class { c, place }, common),
            ExploreCommand::Rank { gens, place, common } => (Query::Rank { gens, place }, common),
            ExploreCommand::Global { gens, common } => (Query::Global { gens }, common),
            ExploreCommand::Frobenius { gens, place, common } => (Query::Frobenius { gens, place }, common),
            ExploreCommand::Locus { c, common } => (Query::Locus { c }, common),
            ExploreCommand::Places {
                max_place_degree,
                finite_only,
                common,
            } => (
                Query::Places {
                    max_degree: max_place_degree,
                    infinity: !finite_only,
                },
                common,
            ),
        }
    }
}

fn sink(out: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let (name, args) = match cli.command {
        Command::Lemma1(a) => (CampaignName::Lemma1, a),
        Command::LocalDisjoint(a) => (CampaignName::LocalDisjoint, a),
        Command::GlobalDisjoint(a) => (CampaignName::GlobalDisjoint, a),
        Command::Growth(a) => (CampaignName::Growth, a),
        Command::AwayBound(a) => (CampaignName::AwayBound, a),
        Command::P2Bound(a) => (CampaignName::P2Bound, a),
        Command::Chebotarev(a) => (CampaignName::Chebotarev, a),
        Command::Explore { query } => {
            let (query, common) = query.split();
            let mut out = sink(common.out.as_ref())?;
            explore(&common.q, common.guard, &query, common.format, &mut out)?;
            out.flush()?;
            return Ok(true);
        }
        Command::Registry => {
            let mut out = io::stdout().lock();
            for s in REGISTRY {
                writeln!(out, "{:<16} {}", s.id, s.statement)?;
            }
            return Ok(true);
        }
    };
    let out_path = args.out.clone();
    let no_timing = args.no_timing;
    let config = args.config(name);
    let mut report = run_campaign(&config)?;
    if no_timing {
        report = report.without_timing();
    }
    let mut out = sink(out_path.as_ref())?;
    emit_report(&report, config.format, &mut out)?;
    out.flush()?;
    Ok(report.pass)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::IoFailure(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
