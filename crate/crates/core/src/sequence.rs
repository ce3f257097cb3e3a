//! Sequences, alphabets and input parsing.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;

/// Upper bound on the number of input sequences.
pub const MAX_SEQUENCES: usize = 5000;
/// Default cap on a single sequence's length.
pub const DEFAULT_MAX_LEN: usize = 100_000;

const NO_CODE: u8 = u8::MAX;

/// Ordered set of distinct printable ASCII symbols with dense integer codes.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
    codes: [u8; 128],
}

impl Alphabet {
    /// Builds an alphabet from the given symbols, sorted and deduplicated.
    ///
    /// Returns `None` if a symbol is not printable ASCII or if nothing is given.
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Option<Self> {
        let set: BTreeSet<char> = symbols.into_iter().collect();
        if set.is_empty() || set.iter().any(|c| !c.is_ascii_graphic()) {
            return None;
        }
        let symbols: Vec<u8> = set.into_iter().map(|c| c as u8).collect();
        let mut codes = [NO_CODE; 128];
        for (code, &sym) in symbols.iter().enumerate() {
            codes[sym as usize] = code as u8;
        }
        Some(Self { symbols, codes })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn code_of(&self, ch: char) -> Option<u8> {
        if !ch.is_ascii() {
            return None;
        }
        match self.codes[ch as usize] {
            NO_CODE => None,
            code => Some(code),
        }
    }

    /// Symbol for a code. Panics if the code is out of range.
    pub fn symbol(&self, code: u8) -> char {
        self.symbols[code as usize] as char
    }

    pub fn symbols(&self) -> impl Iterator<Item = char> + '_ {
        self.symbols.iter().map(|&b| b as char)
    }

    pub fn decode(&self, codes: &[u8]) -> String {
        codes.iter().map(|&c| self.symbol(c)).collect()
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Alphabet")
            .field(&String::from_utf8_lossy(&self.symbols))
            .finish()
    }
}

/// One input sequence stored as alphabet codes.
///
/// Positions are 1-indexed in every public API; `residue(1)` is the first symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub id: usize,
    pub name: String,
    residues: Vec<u8>,
}

impl Sequence {
    pub fn new(id: usize, name: impl Into<String>, residues: Vec<u8>) -> Self {
        Self {
            id,
            name: name.into(),
            residues,
        }
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    /// Residue code at 1-indexed `pos`.
    pub fn residue(&self, pos: usize) -> u8 {
        self.residues[pos - 1]
    }

    pub fn residues(&self) -> &[u8] {
        &self.residues
    }
}

/// `d` sequences over one alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    alphabet: Alphabet,
    sequences: Vec<Sequence>,
}

impl ProblemInstance {
    /// Builds an instance from raw strings, inferring the alphabet.
    pub fn from_strs<S: AsRef<str>>(seqs: &[S]) -> Result<Self, ParseError> {
        let records: Vec<(String, String)> = seqs
            .iter()
            .enumerate()
            .map(|(i, s)| (format!("seq{}", i + 1), s.as_ref().to_string()))
            .collect();
        build_instance(records, &ParseOptions::default())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    /// Number of sequences.
    pub fn d(&self) -> usize {
        self.sequences.len()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.sequences.iter().map(Sequence::len).collect()
    }

    pub fn max_len(&self) -> usize {
        self.sequences.iter().map(Sequence::len).max().unwrap_or(0)
    }

    /// Decoded text of sequence `i`.
    pub fn text(&self, i: usize) -> String {
        self.alphabet.decode(self.sequences[i].residues())
    }

    /// One sequence per line, LF-terminated.
    pub fn to_plain_lines(&self) -> String {
        let mut out = String::new();
        for i in 0..self.d() {
            out.push_str(&self.text(i));
            out.push('\n');
        }
        out
    }

    pub fn to_fasta(&self) -> String {
        let mut out = String::new();
        for (i, seq) in self.sequences.iter().enumerate() {
            out.push('>');
            out.push_str(&seq.name);
            out.push('\n');
            let text = self.text(i);
            for chunk in text.as_bytes().chunks(70) {
                out.push_str(std::str::from_utf8(chunk).expect("ascii"));
                out.push('\n');
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    /// One sequence per line. Case-sensitive.
    PlainLines,
    /// `>`-headed records; lowercase is folded to uppercase.
    Fasta,
}

impl InputFormat {
    /// FASTA if the first non-blank line starts with `>`, plain lines otherwise.
    pub fn detect(raw: &str) -> Self {
        match raw.lines().map(str::trim).find(|l| !l.is_empty()) {
            Some(l) if l.starts_with('>') => InputFormat::Fasta,
            _ => InputFormat::PlainLines,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParseOptions {
    pub max_len: usize,
    pub max_sequences: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self {
            max_len: DEFAULT_MAX_LEN,
            max_sequences: MAX_SEQUENCES,
        }
    }
}

pub fn parse_input(raw: &str, format: InputFormat) -> Result<ProblemInstance, ParseError> {
    parse_input_with(raw, format, &ParseOptions::default())
}

pub fn parse_input_with(
    raw: &str,
    format: InputFormat,
    opts: &ParseOptions,
) -> Result<ProblemInstance, ParseError> {
    if raw.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let records = match format {
        InputFormat::PlainLines => plain_records(raw),
        InputFormat::Fasta => fasta_records(raw)?,
    };
    build_instance(records, opts)
}

fn plain_records(raw: &str) -> Vec<(String, String)> {
    let mut lines: Vec<&str> = raw.split('\n').map(|l| l.trim_end()).collect();
    while lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    lines
        .into_iter()
        .enumerate()
        .map(|(i, l)| (format!("seq{}", i + 1), l.to_string()))
        .collect()
}

fn fasta_records(raw: &str) -> Result<Vec<(String, String)>, ParseError> {
    let mut records: Vec<(String, String)> = Vec::new();
    for (lineno, line) in raw.lines().enumerate() {
        let line = line.trim();
        if let Some(header) = line.strip_prefix('>') {
            let name = header.trim();
            let name = if name.is_empty() {
                format!("seq{}", records.len() + 1)
            } else {
                name.to_string()
            };
            records.push((name, String::new()));
        } else if !line.is_empty() {
            match records.last_mut() {
                Some((_, body)) => body.push_str(&line.to_ascii_uppercase()),
                None => return Err(ParseError::MissingHeader { line: lineno + 1 }),
            }
        }
    }
    Ok(records)
}

fn build_instance(
    records: Vec<(String, String)>,
    opts: &ParseOptions,
) -> Result<ProblemInstance, ParseError> {
    if records.len() < 2 {
        return Err(ParseError::TooFewSequences(records.len()));
    }
    if records.len() > opts.max_sequences {
        return Err(ParseError::TooManySequences {
            found: records.len(),
            limit: opts.max_sequences,
        });
    }
    let mut symbols = BTreeSet::new();
    for (i, (_, body)) in records.iter().enumerate() {
        if body.trim().is_empty() {
            return Err(ParseError::BlankRecord { record: i + 1 });
        }
        if let Some(ch) = body.chars().find(|c| !c.is_ascii_graphic()) {
            return Err(ParseError::BadCharacter { record: i + 1, ch });
        }
        if body.len() > opts.max_len {
            return Err(ParseError::TooLong {
                record: i + 1,
                len: body.len(),
                cap: opts.max_len,
            });
        }
        symbols.extend(body.chars());
    }
    let alphabet = Alphabet::new(symbols).expect("validated non-empty printable symbols");
    let sequences = records
        .into_iter()
        .enumerate()
        .map(|(id, (name, body))| {
            let residues = body
                .chars()
                .map(|c| alphabet.code_of(c).expect("symbol in alphabet"))
                .collect();
            Sequence::new(id, name, residues)
        })
        .collect();
    Ok(ProblemInstance {
        alphabet,
        sequences,
    })
}

/// Count and fraction of one symbol within a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Composition {
    pub count: usize,
    pub fraction: f64,
}

/// Per-symbol counts and fractions for one sequence, in alphabet order.
///
/// Symbols absent from the sequence are omitted.
pub fn char_composition(alphabet: &Alphabet, seq: &Sequence) -> Vec<(char, Composition)> {
    let mut counts = vec![0usize; alphabet.len()];
    for &r in seq.residues() {
        counts[r as usize] += 1;
    }
    let n = seq.len() as f64;
    counts
        .into_iter()
        .enumerate()
        .filter(|&(_, count)| count > 0)
        .map(|(code, count)| {
            (
                alphabet.symbol(code as u8),
                Composition {
                    count,
                    fraction: count as f64 / n,
                },
            )
        })
        .collect()
}
