//! Seeded instance generators and the bundled sample datasets.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::sequence::{InputFormat, ProblemInstance};

pub const DNA: &str = "ACGT";
pub const PROTEIN: &str = "ACDEFGHIKLMNPQRSTVWY";
/// Seed used by generators when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 20_240_901;

fn symbols(sigma: usize) -> Vec<char> {
    if sigma <= DNA.len() {
        DNA.chars().take(sigma).collect()
    } else {
        PROTEIN.chars().take(sigma).collect()
    }
}

pub fn random_string(rng: &mut impl Rng, len: usize, alphabet: &[char]) -> String {
    (0..len)
        .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
        .collect()
}

/// `d` independent uniform sequences with lengths drawn from `lengths`.
pub fn random_instance(
    rng: &mut impl Rng,
    d: usize,
    lengths: RangeInclusive<usize>,
    sigma: usize,
) -> ProblemInstance {
    let alphabet = symbols(sigma);
    let seqs: Vec<String> = (0..d)
        .map(|_| {
            let n = rng.gen_range(lengths.clone());
            random_string(rng, n, &alphabet)
        })
        .collect();
    ProblemInstance::from_strs(&seqs).expect("generated sequences are valid")
}

/// `d` copies of one random template, each position substituted with a
/// different symbol with probability `rate`.
pub fn mutated_family(
    rng: &mut impl Rng,
    d: usize,
    len: usize,
    sigma: usize,
    rate: f64,
) -> ProblemInstance {
    let alphabet = symbols(sigma);
    let template: Vec<char> = random_string(rng, len, &alphabet).chars().collect();
    let seqs: Vec<String> = (0..d)
        .map(|_| {
            template
                .iter()
                .map(|&c| {
                    if rng.gen_bool(rate) {
                        let others: Vec<char> = alphabet.iter().copied().filter(|&a| a != c).collect();
                        others[rng.gen_range(0..others.len())]
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    ProblemInstance::from_strs(&seqs).expect("generated sequences are valid")
}

/// A named dataset shipped with the library.
#[derive(Debug, Clone, Serialize)]
pub struct Sample {
    pub name: &'static str,
    pub description: &'static str,
    pub format: InputFormat,
    pub content: String,
}

impl Sample {
    pub fn instance(&self) -> ProblemInstance {
        crate::sequence::parse_input(&self.content, self.format).expect("bundled samples parse")
    }
}

/// Where to obtain real long genomes; they are not redistributed here.
pub const PUBLIC_DATA_NOTE: &str = "Complete viral or human genome assemblies (for example \
SARS-CoV-2 genomes from NCBI Virus, https://www.ncbi.nlm.nih.gov/labs/virus/) can be \
downloaded as FASTA and submitted unchanged with format \"fasta\".";

pub fn bundled() -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let dna_short = mutated_family(&mut rng, 3, 60, 4, 0.05);
    let dna_long = mutated_family(&mut rng, 3, 1000, 4, 0.05);
    let protein = mutated_family(&mut rng, 5, 40, 20, 0.10);
    let binary = random_instance(&mut rng, 4, 12..=12, 2);
    vec![
        Sample {
            name: "identical",
            description: "Three identical DNA strings; one MLCS, entirely a common pattern",
            format: InputFormat::PlainLines,
            content: "ACGT\nACGT\nACGT\n".into(),
        },
        Sample {
            name: "two-mlcs",
            description: "Small instance with two MLCS strings of different gap scores",
            format: InputFormat::PlainLines,
            content: "ABC\nACB\nABC\n".into(),
        },
        Sample {
            name: "dna-60",
            description: "Three 60-base DNA sequences from one template, 5% substitutions",
            format: InputFormat::Fasta,
            content: dna_short.to_fasta(),
        },
        Sample {
            name: "dna-1000",
            description: "Three 1,000-base DNA sequences from one template, 5% substitutions",
            format: InputFormat::Fasta,
            content: dna_long.to_fasta(),
        },
        Sample {
            name: "protein-40",
            description: "Five 40-residue protein-like sequences, 10% substitutions",
            format: InputFormat::Fasta,
            content: protein.to_fasta(),
        },
        Sample {
            name: "binary-12",
            description: "Four random binary strings of length 12",
            format: InputFormat::PlainLines,
            content: binary.to_plain_lines(),
        },
    ]
}

pub fn sample(name: &str) -> Option<Sample> {
    bundled().into_iter().find(|s| s.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_parse_and_are_stable() {
        let a = bundled();
        let b = bundled();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.content, y.content);
            assert!(x.instance().d() >= 3);
        }
        assert_eq!(sample("dna-1000").unwrap().instance().lengths(), vec![1000; 3]);
        assert!(sample("missing").is_none());
    }

    #[test]
    fn mutation_rate_is_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let inst = mutated_family(&mut rng, 2, 10_000, 4, 0.05);
        let diff = inst
            .text(0)
            .chars()
            .zip(inst.text(1).chars())
            .filter(|(a, b)| a != b)
            .count();
        // Two independent 5% mutations disagree at roughly 9.7% of sites.
        assert!((700..1300).contains(&diff), "{diff}");
    }
}
