use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rox_core::experiments::{
    coll_from_esec_demo, embed_message_demo, extract_collision_demo, extract_preimage_demo, rox_apre_demo,
    rox_asec_demo, separation_demo, Report,
};
use rox_core::games::{estimate_advantage, ExperimentReport, Property};
use rox_core::reductions::{FlipLastESec, DEFAULT_I_MAX};
use rox_core::registry::{adversary, Setup, ToyParams};
use rox_core::{BitString, Result};

/// Experiments with the ROX iterated hash and hash-function security games.
#[derive(Parser, Debug)]
#[command(name = "roxlab", version)]
struct Cli {
    /// Master seed; every experiment is a function of it.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Toy parameters n,b,d,L (m = b + d).
    #[arg(long, global = true, default_value = "4,4,8,16", value_parser = parse_params)]
    params: ToyParams,

    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate ROX on one input.
    Hash {
        /// Key as len:hex, n bits.
        #[arg(long)]
        key: BitString,
        /// Message as len:hex.
        #[arg(long)]
        input: BitString,
        /// Compression family spec.
        #[arg(long, default_value = "tab")]
        family: String,
        /// Also print every round.
        #[arg(long)]
        trace: bool,
    },
    /// Show the padded message and the RO2 queries that produced it.
    Pad {
        #[arg(long)]
        input: BitString,
    },
    /// Estimate an adversary's advantage in a security game.
    Game {
        #[arg(long)]
        prop: Property,
        #[arg(long)]
        family: String,
        #[arg(long)]
        adv: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Run a toolkit procedure or reduction over many trials.
    Reduce {
        #[arg(long, value_enum)]
        lemma: Lemma,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        /// Largest embedding index for embed-message and rox-asec.
        #[arg(long, default_value_t = DEFAULT_I_MAX)]
        i_max: usize,
        /// Round flipped by the planted rox-asec adversary.
        #[arg(long, default_value_t = 2)]
        j: usize,
    },
    /// Run a trivial attack against a separating family.
    Separation {
        #[arg(long)]
        which: Property,
        #[arg(long, default_value_t = 500)]
        trials: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Lemma {
    ExtractPreimage,
    ExtractCollision,
    EmbedMessage,
    CollFromEsec,
    RoxApre,
    RoxAsec,
}

fn parse_params(s: &str) -> std::result::Result<ToyParams, String> {
    s.parse().map_err(|e: rox_core::Error| e.to_string())
}

fn hash(setup: &Setup, key: &BitString, input: &BitString, family: &str, trace: bool, json: bool) -> Result<String> {
    let mut inst = setup.instance(setup.family(family)?)?;
    let layout = *inst.layout();
    let rounds = inst.trace(key, input)?;
    let digest = rounds.last().expect("ell >= 1").chain_out.clone();
    let (ell, q2, queries) = (
        layout.block_count(input.len()),
        layout.padding_calls(input.len()),
        inst.oracle_queries(),
    );
    if json {
        let mut v = serde_json::json!({"digest": digest, "ell": ell, "q2": q2, "queries": queries});
        if trace {
            v["rounds"] = serde_json::to_value(&rounds).expect("serializable");
        }
        return Ok(v.to_string());
    }
    let mut out = format!("digest={digest} ell={ell} q2={q2} queries={queries}");
    if trace {
        for r in &rounds {
            out.push_str(&format!(
                "\nround={} block={} mask={} input={} chain={}",
                r.index, r.block, r.mask, r.comp_input, r.chain_out
            ));
        }
    }
    Ok(out)
}

fn pad(setup: &Setup, input: &BitString, json: bool) -> Result<String> {
    let mut inst = setup.instance(setup.family("tab")?)?;
    let padded = inst.pad(input)?;
    if json {
        return Ok(serde_json::json!({
            "ell": padded.ell,
            "q2": padded.q2,
            "xbar": padded.xbar,
            "padded": padded.concat(),
            "blocks": padded.blocks,
        })
        .to_string());
    }
    let blocks: Vec<String> = padded.blocks.iter().map(ToString::to_string).collect();
    Ok(format!(
        "ell={} q2={} xbar={} padded={}\nblocks={}\n{}",
        padded.ell,
        padded.q2,
        padded.xbar,
        padded.concat(),
        blocks.join(","),
        inst.ro2.dump().trim_end()
    ))
}

fn game(setup: &Setup, prop: Property, family: &str, adv: &str, trials: u64, json: bool) -> Result<String> {
    let f = setup.family(family)?;
    let a = adversary(adv)?;
    let est = estimate_advantage(prop, &f, &*a, trials, &setup.experiment_seed())?;
    let report = ExperimentReport::new(prop, family, &est, setup.seed);
    Ok(if json { report.json() } else { report.line() })
}

fn reduce(setup: &Setup, lemma: Lemma, trials: u64, i_max: usize, j: usize) -> Result<Report> {
    match lemma {
        Lemma::ExtractPreimage => extract_preimage_demo(setup, &setup.family("tab")?, trials),
        Lemma::ExtractCollision => {
            extract_collision_demo(setup, &setup.family("tab")?, setup.params.rox_msg_bits(), trials)
        }
        Lemma::EmbedMessage => embed_message_demo(setup, &setup.family("tab")?, trials, i_max),
        Lemma::CollFromEsec => coll_from_esec_demo(setup, &setup.family("const0")?, Box::new(FlipLastESec), trials),
        Lemma::RoxApre => rox_apre_demo(setup, &setup.family("tab")?, trials, 10_000),
        Lemma::RoxAsec => rox_asec_demo(setup, trials, i_max, j),
    }
}

fn render(report: &Report, json: bool) -> String {
    if json {
        report.json()
    } else {
        report.text().trim_end().to_owned()
    }
}

fn run(cli: &Cli) -> Result<String> {
    let setup = Setup::new(cli.params, cli.seed);
    match &cli.cmd {
        Cmd::Hash {
            key,
            input,
            family,
            trace,
        } => hash(&setup, key, input, family, *trace, cli.json),
        Cmd::Pad { input } => pad(&setup, input, cli.json),
        Cmd::Game {
            prop,
            family,
            adv,
            trials,
        } => game(&setup, *prop, family, adv, *trials, cli.json),
        Cmd::Reduce {
            lemma,
            trials,
            i_max,
            j,
        } => Ok(render(&reduce(&setup, *lemma, *trials, *i_max, *j)?, cli.json)),
        Cmd::Separation { which, trials } => Ok(render(&separation_demo(&setup, *which, *trials)?, cli.json)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            // a closed pipe (`| head`) is not an error
            let _ = writeln!(std::io::stdout(), "{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
