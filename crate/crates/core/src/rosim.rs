//! Lazily sampled, programmable random oracles.
//!
//! Fresh values are drawn from `seed.expand("oracle", input, out_bits)`, so
//! the value at a point does not depend on the order of queries. Programmed
//! points override the stream until reprogrammed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::seed::Seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum TranscriptKind {
    Query,
    Program,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct TranscriptEntry {
    pub kind: TranscriptKind,
    pub input: BitString,
    pub output: BitString,
}

#[derive(Debug, Clone)]
struct Cell {
    value: BitString,
    programmed: bool,
    queried: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct OracleStats {
    pub queries: u64,
    pub programmed_points: u64,
}

#[derive(Debug, Clone)]
pub struct OracleSim {
    in_bits: usize,
    out_bits: usize,
    seed: Seed,
    table: BTreeMap<BitString, Cell>,
    queries: u64,
    transcript: Vec<TranscriptEntry>,
}

impl OracleSim {
    pub fn new(in_bits: usize, out_bits: usize, seed: Seed) -> Self {
        Self {
            in_bits,
            out_bits,
            seed,
            table: BTreeMap::new(),
            queries: 0,
            transcript: Vec::new(),
        }
    }

    pub fn in_bits(&self) -> usize {
        self.in_bits
    }

    pub fn out_bits(&self) -> usize {
        self.out_bits
    }

    fn check_input(&self, input: &BitString) -> Result<()> {
        if input.len() != self.in_bits {
            return Err(Error::WidthMismatch {
                what: "oracle input",
                expected: self.in_bits,
                actual: input.len(),
            });
        }
        Ok(())
    }

    fn fresh(&self, input: &BitString) -> BitString {
        self.seed.expand("oracle", input, self.out_bits)
    }

    pub fn query(&mut self, input: &BitString) -> Result<BitString> {
        self.check_input(input)?;
        self.queries += 1;
        let value = match self.table.get_mut(input) {
            Some(cell) => {
                cell.queried = true;
                cell.value.clone()
            }
            None => {
                let value = self.fresh(input);
                self.table.insert(
                    input.clone(),
                    Cell {
                        value: value.clone(),
                        programmed: false,
                        queried: true,
                    },
                );
                value
            }
        };
        self.transcript.push(TranscriptEntry {
            kind: TranscriptKind::Query,
            input: input.clone(),
            output: value.clone(),
        });
        Ok(value)
    }

    /// The value a query would return, without recording or counting it.
    pub fn peek(&self, input: &BitString) -> Result<BitString> {
        self.check_input(input)?;
        Ok(match self.table.get(input) {
            Some(cell) => cell.value.clone(),
            None => self.fresh(input),
        })
    }

    /// Sets the value at `input`; last write wins.
    pub fn program(&mut self, input: &BitString, value: &BitString) -> Result<()> {
        self.check_input(input)?;
        if value.len() != self.out_bits {
            return Err(Error::WidthMismatch {
                what: "oracle output",
                expected: self.out_bits,
                actual: value.len(),
            });
        }
        let cell = self.table.entry(input.clone()).or_insert(Cell {
            value: value.clone(),
            programmed: true,
            queried: false,
        });
        cell.value = value.clone();
        cell.programmed = true;
        self.transcript.push(TranscriptEntry {
            kind: TranscriptKind::Program,
            input: input.clone(),
            output: value.clone(),
        });
        Ok(())
    }

    /// Programs `input` only if nobody has evaluated it yet.
    pub fn program_fresh(&mut self, input: &BitString, value: &BitString) -> Result<()> {
        if self.was_queried(input) {
            return Err(Error::LateProgramming { point: input.to_hex() });
        }
        self.program(input, value)
    }

    pub fn was_queried(&self, input: &BitString) -> bool {
        self.table.get(input).is_some_and(|c| c.queried)
    }

    pub fn is_programmed(&self, input: &BitString) -> bool {
        self.table.get(input).is_some_and(|c| c.programmed)
    }

    pub fn stats(&self) -> OracleStats {
        OracleStats {
            queries: self.queries,
            programmed_points: self.table.values().filter(|c| c.programmed).count() as u64,
        }
    }

    pub fn transcript(&self) -> &[TranscriptEntry] {
        &self.transcript
    }

    /// Points evaluated so far, in first-query order, without repeats.
    pub fn queried_points(&self) -> Vec<BitString> {
        let mut seen = std::collections::BTreeSet::new();
        self.transcript
            .iter()
            .filter(|e| e.kind == TranscriptKind::Query)
            .filter(|e| seen.insert(e.input.clone()))
            .map(|e| e.input.clone())
            .collect()
    }

    /// One line per event: `Q <in> -> <out>` or `P <in> -> <out>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for e in &self.transcript {
            let tag = match e.kind {
                TranscriptKind::Query => 'Q',
                TranscriptKind::Program => 'P',
            };
            let _ = writeln!(out, "{tag} {} -> {}", e.input, e.output);
        }
        out
    }
}
