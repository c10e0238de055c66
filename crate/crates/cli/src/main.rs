//! `hn`: command-line front end for Harder-Narasimhan games.

mod dot;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hngame::oracle::fuzz::{run_fuzz, FuzzConfig};
use hngame::value::ValueLattice;
use hngame::{DynGame, FormatError, GameError, GameFile, LoadedGame, Verdict};

const EXIT_VIOLATION: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_PARSE: u8 = 3;

#[derive(Parser)]
#[command(name = "hn", version, about = "Harder-Narasimhan games on finite lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a game file and print a structural summary.
    Validate { path: PathBuf },
    /// Print thresholds, the destabilizing set and predicate flags.
    Report {
        path: PathBuf,
        /// Print a JSON document instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Print the Harder-Narasimhan filtration, or Jordan-Hölder filtrations.
    Filtration {
        path: PathBuf,
        #[arg(long)]
        jordan_holder: bool,
        /// With --jordan-holder, list every filtration.
        #[arg(long)]
        all: bool,
        /// Re-check the HN filtration against its characterization.
        #[arg(long)]
        verify: bool,
    },
    /// Emit the Hasse diagram in DOT format.
    Dot {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rewrite a game file in table form.
    Normalize {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the engine against brute-force oracles on random games.
    Fuzz {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Largest generator poset size (at most 7).
        #[arg(long, default_value_t = 5)]
        size: usize,
        /// Where to write a counterexample.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn domain(e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_DOMAIN, message: e.to_string() }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        let code = if e.is_parse_error() { EXIT_PARSE } else { EXIT_DOMAIN };
        Failure { code, message: e.to_string() }
    }
}

impl From<GameError> for Failure {
    fn from(e: GameError) -> Self {
        Failure::domain(e)
    }
}

fn load(path: &Path) -> Result<LoadedGame, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure { code: EXIT_PARSE, message: format!("cannot read {}: {e}", path.display()) })?;
    Ok(GameFile::from_json_str(&text)?.load()?)
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::domain(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn header(loaded: &LoadedGame) -> String {
    let g = &loaded.game;
    let mut s = format!(
        "game: {} elements, {} strict pairs, domain {}{}\n",
        g.lattice().len(),
        g.lattice().strict_pairs().len(),
        g.domain().mode_name(),
        if g.domain().is_reversed() { " (reversed)" } else { "" }
    );
    if let Some(m) = &loaded.module {
        s.push_str(&format!("module: {}\n", m.module));
    }
    s
}

fn labels(g: &DynGame, chain: &[hngame::ElementId], sep: &str) -> String {
    chain.iter().map(|&x| g.lattice().label(x)).collect::<Vec<_>>().join(sep)
}

fn validate(path: &Path) -> Result<String, Failure> {
    let loaded = load(path)?;
    let g = &loaded.game;
    let slope_like = match g.is_slope_like() {
        Ok(b) => b.to_string(),
        Err(_) => "n/a".into(),
    };
    Ok(format!(
        "{}ok: convex={} slope_like={} affine={}\n",
        header(&loaded),
        g.is_convex(),
        slope_like,
        g.is_affine()
    ))
}

fn report(path: &Path, json: bool) -> Result<String, Failure> {
    let loaded = load(path)?;
    let g = &loaded.game;
    let r = g.report();
    if json {
        let mut doc = g.report_json(&r);
        doc["domain"] = g.domain().mode_name().into();
        let mut s = serde_json::to_string_pretty(&doc).expect("json");
        s.push('\n');
        Ok(s)
    } else {
        Ok(format!("{}{}", header(&loaded), g.report_text(&r)))
    }
}

fn filtration(path: &Path, jordan_holder: bool, all: bool, verify: bool) -> Result<String, Failure> {
    let loaded = load(path)?;
    let g = &loaded.game;
    let d = g.domain();
    let mut out = String::new();
    if jordan_holder {
        let fs = g.jordan_holder(all)?;
        let target = d.render(g.payoff(g.bottom(), g.top()).expect("bottom < top"));
        out.push_str(&format!("jordan-hölder filtrations: {} (step slope {target})\n", fs.len()));
        for f in &fs {
            out.push_str(&format!("{} ; length {}\n", labels(g, &f.chain, " < "), f.len()));
        }
        return Ok(out);
    }
    if let Some(m) = &loaded.module {
        let c = hngame::instances::coprimary_filtration(m)?;
        let primes: Vec<String> = c.primes.iter().map(u64::to_string).collect();
        let orders: Vec<String> = c.quotient_orders.iter().map(u64::to_string).collect();
        out.push_str(&format!("{} ; primes {}\n", labels(g, &c.filtration.chain, " ⊂ "), primes.join(" > ")));
        out.push_str(&format!("quotient orders: {}\n", orders.join(", ")));
    } else {
        let f = g.hn_filtration()?;
        let sep = if d.is_total() { " > " } else { ", " };
        let slopes: Vec<String> = f.slopes.iter().map(|s| d.render(s)).collect();
        out.push_str(&format!("{} ; slopes {}\n", labels(g, &f.chain, " < "), slopes.join(sep)));
    }
    if verify {
        let f = g.hn_filtration()?;
        match g.verify_filtration(&f.chain)? {
            Verdict::Holds => out.push_str("verified: every step semi-stable, slopes decreasing\n"),
            Verdict::Fails(defect) => return Err(Failure::domain(format!("verification failed: {defect}"))),
        }
    }
    Ok(out)
}

fn fuzz(cfg: FuzzConfig, out: Option<PathBuf>) -> Result<String, Failure> {
    if cfg.size > hngame::oracle::random::MAX_POSET_SIZE {
        return Err(Failure::domain(hngame::oracle::OracleError::SizeCap(cfg.size)));
    }
    match run_fuzz(&cfg) {
        Ok(s) => Ok(format!(
            "fuzz ok: {} instances ({} skipped), {} mu_A pair checks, {} HN uniqueness checks, {} law checks\n",
            s.instances, s.skipped, s.pair_checks, s.hn_checks, s.law_checks
        )),
        Err(f) => {
            let Some(game) = &f.game else {
                return Err(Failure::domain(format!("instance {}: {}", f.instance, f.detail)));
            };
            let path = out.unwrap_or_else(|| PathBuf::from(format!("hn-counterexample-{}-{}.json", cfg.seed, f.instance)));
            fs::write(&path, GameFile::from_game(game).to_json_string())
                .map_err(|e| Failure::domain(format!("cannot write {}: {e}", path.display())))?;
            Err(Failure {
                code: EXIT_VIOLATION,
                message: format!(
                    "{} violated on instance {} (seed {}): {}\ncounterexample written to {}",
                    f.check,
                    f.instance,
                    f.config.seed,
                    f.detail,
                    path.display()
                ),
            })
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { path } => write_or_print(None, &validate(&path)?),
        Command::Report { path, json } => write_or_print(None, &report(&path, json)?),
        Command::Filtration { path, jordan_holder, all, verify } => {
            write_or_print(None, &filtration(&path, jordan_holder, all, verify)?)
        }
        Command::Dot { path, out } => {
            let loaded = load(&path)?;
            write_or_print(out.as_deref(), &dot::render(&loaded.game))
        }
        Command::Normalize { path, out } => {
            let loaded = load(&path)?;
            write_or_print(out.as_deref(), &GameFile::from_game(&loaded.game).to_json_string())
        }
        Command::Fuzz { seed, count, size, out, inject_fault } => {
            write_or_print(None, &fuzz(FuzzConfig { seed, count, size, inject_fault }, out)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
