use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::{entropy, tokenize, AdRecord, NgramModel, TokenStream};

/// Entropy (bits) an ad must strictly exceed to count as high-complexity.
pub const ENTROPY_THRESHOLD: f64 = 4.0;
/// Weights strictly under this many pounds set the low-weight flag.
pub const LOW_WEIGHT_LBS: f64 = 115.0;
const KG_TO_LBS: f64 = 2.20462;

const THIRD_PERSON: &[&str] = &["she", "her", "hers", "he", "him", "his"];
const FIRST_PERSON_SINGULAR: &[&str] = &["i", "me", "my", "mine"];
const FIRST_PERSON_PLURAL: &[&str] = &["we", "our", "ours", "us"];
const WORDS_OF_INTEREST: &[&[&str]] = &[
    &["sweet"],
    &["candy"],
    &["fresh"],
    &["new", "in", "town"],
    &["new", "to", "the", "game"],
];
const COUNTRIES_OF_INTEREST: &[&str] = &[
    "china", "chinese", "vietnam", "vietnamese", "korea", "korean", "thailand", "thai", "asia",
    "asian",
];
const PLURAL_NOUNS: &[&str] = &["girls", "ladies", "women", "twins", "sisters"];
const ESCORT_NOUNS: &[&str] = &[
    "girl", "girls", "lady", "ladies", "woman", "women", "twin", "twins", "sister", "sisters",
];
const SPELLED_COUNTS: &[&str] = &[
    "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
];
const SPA_WORDS: &[&str] = &["spa", "massage"];

/// The twelve indicators, in export column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Feature {
    ThirdPerson,
    FirstPersonPlural,
    HighEntropy,
    Ngram1,
    Ngram2,
    Ngram3,
    WordsOfInterest,
    CountriesOfInterest,
    MultipleVictims,
    LowWeight,
    WebsiteRef,
    SpaRef,
}

impl Feature {
    pub const COUNT: usize = 12;

    pub const ALL: [Feature; Self::COUNT] = [
        Feature::ThirdPerson,
        Feature::FirstPersonPlural,
        Feature::HighEntropy,
        Feature::Ngram1,
        Feature::Ngram2,
        Feature::Ngram3,
        Feature::WordsOfInterest,
        Feature::CountriesOfInterest,
        Feature::MultipleVictims,
        Feature::LowWeight,
        Feature::WebsiteRef,
        Feature::SpaRef,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Feature::ThirdPerson => "third_person",
            Feature::FirstPersonPlural => "first_person_plural",
            Feature::HighEntropy => "high_entropy",
            Feature::Ngram1 => "ngram_1",
            Feature::Ngram2 => "ngram_2",
            Feature::Ngram3 => "ngram_3",
            Feature::WordsOfInterest => "words_of_interest",
            Feature::CountriesOfInterest => "countries_of_interest",
            Feature::MultipleVictims => "multiple_victims",
            Feature::LowWeight => "low_weight",
            Feature::WebsiteRef => "website_ref",
            Feature::SpaRef => "spa_ref",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Binary indicator vector of length 12.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FeatureVectorF1([u8; Feature::COUNT]);

impl FeatureVectorF1 {
    pub fn from_flags(flags: [bool; Feature::COUNT]) -> Self {
        FeatureVectorF1(flags.map(u8::from))
    }

    /// Fails unless every entry is 0 or 1.
    pub fn from_bits(bits: [u8; Feature::COUNT]) -> Option<Self> {
        bits.iter().all(|&b| b <= 1).then_some(FeatureVectorF1(bits))
    }

    pub fn get(&self, f: Feature) -> u8 {
        self.0[f.index()]
    }

    pub fn set(&mut self, f: Feature, on: bool) {
        self.0[f.index()] = u8::from(on);
    }

    pub fn bits(&self) -> &[u8; Feature::COUNT] {
        &self.0
    }

    pub fn active(&self) -> usize {
        self.0.iter().map(|&b| b as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.active() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&b| b as f64).collect()
    }

    pub fn dot(&self, other: &Self) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| **a == 1 && **b == 1).count()
    }
}

fn weight_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(\d+(?:\.\d+)?)\s*(lbs|lb|pounds|pound|kgs|kg)\b").unwrap())
}

fn website_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"(?:https?://\S+|\bwww\.\S+|\b[a-z0-9][a-z0-9-]*\.(?:com|net|org|info|biz|us|co|io|me|tv|xxx)\b)",
        )
        .unwrap()
    })
}

/// First weight mention in pounds (kilograms converted), if any.
pub fn parse_weight_lbs(text: &str) -> Option<f64> {
    let lowered = text.to_lowercase();
    let caps = weight_regex().captures(&lowered)?;
    let value: f64 = caps[1].parse().ok()?;
    Some(if caps[2].starts_with("kg") { value * KG_TO_LBS } else { value })
}

fn count_in(stream: &TokenStream, set: &[&str]) -> usize {
    stream.iter().filter(|t| set.contains(t)).count()
}

fn is_count_token(token: &str) -> bool {
    SPELLED_COUNTS.contains(&token) || token.parse::<u32>().is_ok_and(|n| n >= 2)
}

fn third_person(all: &TokenStream) -> bool {
    let third = count_in(all, THIRD_PERSON);
    third >= 1 && third > count_in(all, FIRST_PERSON_SINGULAR)
}

fn multiple_victims(all: &TokenStream) -> bool {
    if all.iter().any(|t| PLURAL_NOUNS.contains(&t)) {
        return true;
    }
    all.tokens.windows(2).any(|w| {
        (is_count_token(&w[0]) && ESCORT_NOUNS.contains(&w[1].as_str()))
            || (ESCORT_NOUNS.contains(&w[0].as_str()) && is_count_token(&w[1]))
    })
}

/// Computes all twelve indicators for one ad (title and body together).
pub fn extract_f1(ad: &AdRecord, ngrams: &NgramModel) -> FeatureVectorF1 {
    let text = ad.text();
    let all = tokenize(&text, false);
    let content = tokenize(&text, true);
    let lowered = text.to_lowercase();
    let [n1, n2, n3] = ngrams.flags(&all);

    let mut v = FeatureVectorF1::default();
    v.set(Feature::ThirdPerson, third_person(&all));
    v.set(Feature::FirstPersonPlural, all.iter().any(|t| FIRST_PERSON_PLURAL.contains(&t)));
    v.set(Feature::HighEntropy, entropy(&content) > ENTROPY_THRESHOLD);
    v.set(Feature::Ngram1, n1 == 1);
    v.set(Feature::Ngram2, n2 == 1);
    v.set(Feature::Ngram3, n3 == 1);
    v.set(
        Feature::WordsOfInterest,
        WORDS_OF_INTEREST.iter().any(|p| all.contains_phrase(p)),
    );
    v.set(Feature::CountriesOfInterest, all.iter().any(|t| COUNTRIES_OF_INTEREST.contains(&t)));
    v.set(Feature::MultipleVictims, multiple_victims(&all));
    v.set(
        Feature::LowWeight,
        parse_weight_lbs(&text).is_some_and(|w| w < LOW_WEIGHT_LBS),
    );
    v.set(Feature::WebsiteRef, website_regex().is_match(&lowered));
    v.set(Feature::SpaRef, all.iter().any(|t| SPA_WORDS.contains(&t)));
    v
}
