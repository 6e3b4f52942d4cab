//! Batch drivers behind the command-line demos. Every trial runs under
//! `experiment_seed().child(<demo>, t)`, so a report depends only on the
//! setup and the trial count.

use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::family::FunctionFamily;
use crate::games::{birthday_collision, estimate_advantage, run_game, Adversary, Answer, Property};
use crate::reductions::{
    digest_distance, BlockFlip, BruteForceRoxPreimage, CollFromESec, RoxAPreReduction, RoxASecReduction,
};
use crate::registry::Setup;
use crate::rox::{rox_family, RoxInstance};
use crate::seed::{random_bits, Seed};
use crate::separations::{PinnedAttack, ZeroKeyAttack};
use crate::toolkit::{embed_message, extract_collision, extract_preimage};

/// Rows shown in paired tables.
pub const TABLE_ROWS: usize = 10;

/// Diagnostic lines shown per report.
pub const SHOWN_FAILS: u64 = 5;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PairedRow {
    pub trial: u64,
    pub left: bool,
    pub right: bool,
}

/// Outcome of one demo. Counters print as `name=count/trials`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Report {
    pub demo: String,
    pub trials: u64,
    pub counters: Vec<(String, u64)>,
    pub metrics: Vec<(String, f64)>,
    /// Column names of `rows`.
    pub columns: Option<(String, String)>,
    pub rows: Vec<PairedRow>,
    pub transcript: String,
}

impl Report {
    fn new(demo: &str, trials: u64) -> Self {
        Self {
            demo: demo.to_owned(),
            trials,
            counters: Vec::new(),
            metrics: Vec::new(),
            columns: None,
            rows: Vec::new(),
            transcript: String::new(),
        }
    }

    fn count(&mut self, name: &str, v: u64) {
        self.counters.push((name.to_owned(), v));
    }

    fn metric(&mut self, name: &str, v: f64) {
        self.metrics.push((name.to_owned(), v));
    }

    pub fn counter(&self, name: &str) -> Option<u64> {
        self.counters.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn text(&self) -> String {
        let mut out = format!("demo={} trials={}\n", self.demo, self.trials);
        for (name, v) in &self.counters {
            let _ = writeln!(out, "{name}={v}/{}", self.trials);
        }
        for (name, v) in &self.metrics {
            let _ = writeln!(out, "{name}={v:.4}");
        }
        if let Some((a, b)) = &self.columns {
            let _ = writeln!(out, "{:>6} {a:>10} {b:>10}", "trial");
            for r in self.rows.iter().take(TABLE_ROWS) {
                let _ = writeln!(out, "{:>6} {:>10} {:>10}", r.trial, u8::from(r.left), u8::from(r.right));
            }
            if self.rows.len() > TABLE_ROWS {
                let _ = writeln!(out, "... {} more rows", self.rows.len() - TABLE_ROWS);
            }
        }
        out.push_str(&self.transcript);
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string(self).expect("plain struct")
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    Ok(())
}

fn trial_seed(setup: &Setup, demo: &str, t: u64) -> Seed {
    setup.experiment_seed().child(demo, t)
}

/// Random ROX inputs of uniformly random valid length; checks that the
/// extracted compression input hashes to the ROX digest with exactly `ell - 1`
/// compression calls and `ell + q2` oracle queries.
pub fn extract_preimage_demo(setup: &Setup, family: &FunctionFamily, trials: u64) -> Result<Report> {
    check_trials(trials)?;
    let p = family.params();
    let layout = setup.params.layout()?;
    let (mut ok, mut calls_exact, mut queries_exact) = (0, 0, 0);
    let mut transcript = String::new();
    for t in 0..trials {
        let seed = trial_seed(setup, "extract-preimage", t);
        let mut rng = seed.rng();
        let key = random_bits(&mut rng, p.n);
        let len = rng.gen_range(layout.min_len()..=layout.max_len());
        let xhat = random_bits(&mut rng, len);
        let oracles = seed.child("oracles", 0);
        let digest = RoxInstance::new(family.clone(), layout.max_blocks, &oracles)?.eval(&key, &xhat)?;

        let (counted, calls) = family.counted();
        let mut inst = RoxInstance::new(counted, layout.max_blocks, &oracles)?;
        let x = extract_preimage(&mut inst, &key, &xhat)?;
        let ell = layout.block_count(len);
        calls_exact += u64::from(calls.get() == ell as u64 - 1);
        queries_exact += u64::from(inst.oracle_queries() == layout.oracle_cost(len) as u64);
        let good = family.eval(&key, &x)? == digest;
        ok += u64::from(good);
        if t == 0 {
            transcript = format!("witness k={key} xhat={xhat} x={x} digest={digest}\n");
        }
    }
    let mut r = Report::new("extract-preimage", trials);
    r.count("success", ok);
    r.count("calls-exact", calls_exact);
    r.count("queries-exact", queries_exact);
    r.transcript = transcript;
    Ok(r)
}

/// Finds ROX collisions on `msg_bits`-bit messages by birthday search and
/// extracts a compression collision from each.
pub fn extract_collision_demo(setup: &Setup, base: &FunctionFamily, msg_bits: usize, trials: u64) -> Result<Report> {
    check_trials(trials)?;
    let p = base.params();
    let max_blocks = setup.params.max_blocks;
    let budget = 1usize << (p.d / 2 + 3).min(20);
    let (mut found, mut extracted, mut failed, mut searches) = (0, 0, 0, 0);
    let mut transcript = String::new();
    for t in 0..trials {
        let seed = trial_seed(setup, "extract-collision", t);
        let key = random_bits(&mut seed.rng(), p.n);
        let oracles = seed.child("oracles", 0);
        let rox = rox_family(base, max_blocks, msg_bits, &oracles)?;
        let mut pair = None;
        for attempt in 0..8 {
            searches += 1;
            pair = birthday_collision(&rox, &key, budget, &seed.child("birthday", attempt))?;
            if pair.is_some() {
                break;
            }
        }
        let Some((xhat, xhat2)) = pair else { continue };
        found += 1;
        let mut inst = RoxInstance::new(base.clone(), max_blocks, &oracles)?;
        match extract_collision(&mut inst, &key, &xhat, &xhat2) {
            Ok(w) if w.x != w.x2 && base.eval(&key, &w.x)? == base.eval(&key, &w.x2)? => {
                extracted += 1;
                if transcript.is_empty() {
                    transcript = format!(
                        "witness k={key} xhat={xhat} xhat2={xhat2} i*={} x={} x2={}\n",
                        w.i_star, w.x, w.x2
                    );
                }
            }
            Ok(_) => failed += 1,
            Err(e) => {
                failed += 1;
                if failed <= SHOWN_FAILS {
                    let _ = writeln!(transcript, "FAIL trial={t}: {e}");
                }
            }
        }
    }
    if failed > SHOWN_FAILS {
        let _ = writeln!(transcript, "... {} more FAIL lines", failed - SHOWN_FAILS);
    }
    let mut r = Report::new("extract-collision", trials);
    r.count("found", found);
    r.count("extracted", extracted);
    r.count("failed", failed);
    r.metric(
        "failure-rate",
        if found == 0 { 0.0 } else { failed as f64 / found as f64 },
    );
    r.metric("birthday-searches", searches as f64);
    r.transcript = transcript;
    Ok(r)
}

/// Random `(x, i)` with `i <= i_max`: the embedding must place `x` as the
/// `i`-th compression input after programming exactly one RO1 point.
pub fn embed_message_demo(setup: &Setup, family: &FunctionFamily, trials: u64, i_max: usize) -> Result<Report> {
    check_trials(trials)?;
    let p = family.params();
    let max_blocks = setup.params.max_blocks;
    let (mut ok, mut single, mut errors) = (0, 0, 0);
    let mut transcript = String::new();
    for t in 0..trials {
        let seed = trial_seed(setup, "embed-message", t);
        let mut rng = seed.rng();
        let key = random_bits(&mut rng, p.n);
        let x = random_bits(&mut rng, p.m);
        let i = rng.gen_range(1..=i_max);
        let mut inst = RoxInstance::new(family.clone(), max_blocks, &seed.child("oracles", 0))?;
        let e = match embed_message(&mut inst, &key, &x, i, &seed.child("embed", 0), None) {
            Ok(e) => e,
            Err(err) => {
                errors += 1;
                let _ = writeln!(transcript, "FAIL trial={t} i={i}: {err}");
                continue;
            }
        };
        let programmed = (inst.ro1.stats().programmed_points, inst.ro2.stats().programmed_points);
        single += u64::from(programmed == (1, 0));
        let trace = inst.trace(&key, &e.xhat)?;
        ok += u64::from(trace[i - 1].comp_input == x);
        if t == 0 {
            let _ = writeln!(
                transcript,
                "embed k={key} x={x} i={i} lambda={} xhat={}",
                e.lambda, e.xhat
            );
            transcript.push_str(&e.transcript());
        }
    }
    let mut r = Report::new("embed-message", trials);
    r.count("success", ok);
    r.count("single-programming", single);
    r.count("errors", errors);
    r.transcript = transcript;
    Ok(r)
}

fn paired(demo: &str, trials: u64, columns: (&str, &str), rows: Vec<PairedRow>) -> Report {
    let mut r = Report::new(demo, trials);
    r.count(
        &format!("{}-wins", columns.0),
        rows.iter().filter(|r| r.left).count() as u64,
    );
    r.count(
        &format!("{}-wins", columns.1),
        rows.iter().filter(|r| r.right).count() as u64,
    );
    r.columns = Some((columns.0.to_owned(), columns.1.to_owned()));
    r.rows = rows;
    r
}

/// `inner` in eSec against `T(inner)` in Coll under the same trial seeds.
pub fn coll_from_esec_demo(
    setup: &Setup,
    family: &FunctionFamily,
    inner: Box<dyn Adversary>,
    trials: u64,
) -> Result<Report> {
    check_trials(trials)?;
    let t_adv = CollFromESec::new(inner);
    let rows: Vec<PairedRow> = (0..trials)
        .map(|t| {
            let seed = trial_seed(setup, "coll-from-esec", t);
            PairedRow {
                trial: t,
                left: run_game(Property::ESec, family, &t_adv.inner, &seed).win,
                right: run_game(Property::Coll, family, &t_adv, &seed).win,
            }
        })
        .collect();
    let equal = rows.iter().filter(|r| r.left == r.right).count() as u64;
    let mut r = paired("coll-from-esec", trials, ("eSec", "Coll"), rows);
    r.count("paired-equal", equal);
    Ok(r)
}

/// The preimage reduction around a brute-force ROX adversary, in aPre.
pub fn rox_apre_demo(setup: &Setup, family: &FunctionFamily, trials: u64, tv_samples: usize) -> Result<Report> {
    check_trials(trials)?;
    let msg_bits = setup.params.rox_msg_bits();
    let red = RoxAPreReduction::new(
        BruteForceRoxPreimage { msg_bits, budget: 1024 },
        setup.params.max_blocks,
    );
    let (mut covered, mut within) = (0, 0);
    let mut rows = Vec::new();
    for t in 0..trials {
        let out = run_game(Property::APre, family, &red, &trial_seed(setup, "rox-apre", t));
        let inner = out.log.get("inner_win") == 1;
        covered += u64::from(!inner || out.win);
        within += u64::from(out.log.get("extra_queries") <= out.log.get("q_xhat"));
        rows.push(PairedRow {
            trial: t,
            left: inner,
            right: out.win,
        });
    }
    let mut r = paired("rox-apre", trials, ("rox-adv", "reduction"), rows);
    r.count("wins-when-inner-wins", covered);
    r.count("extra-queries-within-q", within);
    if tv_samples > 0 {
        let tv = digest_distance(
            family,
            setup.params.max_blocks,
            msg_bits,
            tv_samples,
            &setup.experiment_seed().child("digest-distance", 0),
        )?;
        r.metric("digest-tv", tv);
    }
    Ok(r)
}

/// The second-preimage reduction around a round-`j` block flip on the
/// constant-zero compression family, in aSec. Every reduction win is
/// re-checked by evaluating the family.
pub fn rox_asec_demo(setup: &Setup, trials: u64, i_max: usize, j: usize) -> Result<Report> {
    check_trials(trials)?;
    let family = setup.family("const0")?;
    let red = RoxASecReduction::new(BlockFlip { j }, setup.params.max_blocks).with_i_max(i_max);
    let (mut fails, mut revalidated) = (0, 0);
    let mut rows = Vec::new();
    let mut transcript = String::new();
    for t in 0..trials {
        let out = run_game(Property::ASec, &family, &red, &trial_seed(setup, "rox-asec", t));
        fails += out.log.get("fail");
        if out.win {
            let valid = out
                .played
                .as_ref()
                .is_some_and(|pl| match (&pl.answer, &pl.challenge.message) {
                    (Answer::Message(x2), Some(x)) => match (family.eval(&pl.key, x), family.eval(&pl.key, x2)) {
                        (Ok(y), Ok(y2)) => x != x2 && y == y2,
                        _ => false,
                    },
                    _ => false,
                });
            revalidated += u64::from(valid);
        }
        if t < 3 {
            for note in out.log.notes.iter().filter(|n| n.starts_with("FAIL")) {
                let _ = writeln!(transcript, "trial={t} {note}");
            }
        }
        rows.push(PairedRow {
            trial: t,
            left: out.log.get("inner_win") == 1,
            right: out.win,
        });
    }
    let mut r = paired("rox-asec", trials, ("rox-adv", "reduction"), rows);
    let inner = r.counter("rox-adv-wins").unwrap_or(0);
    let wins = r.counter("reduction-wins").unwrap_or(0);
    r.count("fail", fails);
    r.count("revalidated", revalidated);
    r.metric("rox-adv-rate", inner as f64 / trials as f64);
    r.metric("reduction-rate", wins as f64 / trials as f64);
    r.metric("expected-rate", inner as f64 / trials as f64 / i_max as f64);
    r.transcript = transcript;
    Ok(r)
}

/// Trivial attack against the modified family next to the same attack on
/// the unmodified tabulated family.
pub fn separation_demo(setup: &Setup, which: Property, trials: u64) -> Result<Report> {
    check_trials(trials)?;
    let (modified, adv): (&str, Box<dyn Adversary>) = match which {
        Property::APre | Property::ASec => ("zerokey:tab4", Box::new(ZeroKeyAttack)),
        Property::EPre => ("pinned:tab4", Box::new(PinnedAttack)),
        other => {
            return Err(Error::InvalidArgument(format!(
                "no separation demo for {other}; expected aPre, aSec or ePre"
            )))
        }
    };
    let seed = setup.experiment_seed().child("separation", 0);
    let broken = estimate_advantage(which, &setup.family(modified)?, &*adv, trials, &seed)?;
    let base = estimate_advantage(which, &setup.family("tab4")?, &*adv, trials, &seed)?;
    let mut r = Report::new(&format!("separation-{which}"), trials);
    r.count("wins", broken.wins);
    r.count("baseline-wins", base.wins);
    r.metric("advantage", broken.p_hat);
    r.metric("baseline", base.p_hat);
    r.transcript = format!(
        "{:<14} {:<12} {:>8}\n{:<14} {:<12} {:>8.4}\n{:<14} {:<12} {:>8.4}\n",
        "family",
        "adversary",
        "p_hat",
        modified,
        adv.name(),
        broken.p_hat,
        "tab4",
        adv.name(),
        base.p_hat
    );
    Ok(r)
}
