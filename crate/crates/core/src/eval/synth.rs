//! Synthetic ad corpus with planted classes.
//!
//! Positive ads come from four sub-templates, each firing its own pair of
//! indicators (countries + spa, plural pronouns + several victims, phrases
//! of interest + low weight, third person + website). Negative ads come from
//! three sub-templates that fire none. Every sub-template also has its own
//! topic vocabulary, so the similarity space clusters by sub-template. Noise
//! replaces each generated word, with the given probability, by a draw from
//! a pool mixing filler, topic words and indicator words.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Dataset, FeatureSpace};
use crate::error::{Error, Result};
use crate::model::Label;
use crate::text::AdRecord;

const POSITIVE_FRACTION: f64 = 0.35;

const FILLER: &[&str] = &[
    "available", "call", "text", "today", "tonight", "hours", "rates", "incall", "outcall",
    "discreet", "clean", "friendly", "relax", "upscale", "visit", "special", "unforgettable",
    "experience", "gentlemen", "appointment", "private", "location", "safe", "satisfaction",
    "guaranteed", "downtown", "area", "open", "late", "now",
];

struct Template {
    /// Fixed words carrying the indicators, inserted at random positions.
    markers: &'static [&'static str],
    topic: &'static [&'static str],
    weight: Option<(u32, u32)>,
}

const POSITIVE: &[Template] = &[
    Template {
        markers: &["asian", "spa", "massage"],
        topic: &[
            "oriental", "relaxing", "table", "shower", "body", "therapy", "stone", "oil", "soothing",
            "tension", "herbal", "steam", "sauna", "tub", "aroma",
        ],
        weight: None,
    },
    Template {
        markers: &["we", "two", "girls", "our"],
        topic: &[
            "party", "group", "friends", "double", "fun", "bachelor", "crew", "together", "team",
            "duo", "club", "pair", "wild", "weekend", "bash",
        ],
        weight: None,
    },
    Template {
        markers: &["sweet", "fresh", "new", "in", "town"],
        topic: &[
            "petite", "young", "tiny", "college", "cute", "innocent", "student", "playful",
            "shy", "slim", "teen", "girlish", "bubbly", "small", "little",
        ],
        weight: Some((92, 112)),
    },
    Template {
        markers: &["she", "her", "www.bookings-online.com"],
        topic: &[
            "booking", "manager", "reviews", "verified", "photos", "agency", "schedule",
            "deposit", "online", "profile", "service", "menu", "roster", "dispatch", "screening",
        ],
        weight: None,
    },
];

const NEGATIVE: &[Template] = &[
    Template {
        markers: &["i", "am", "my"],
        topic: &[
            "independent", "mature", "classy", "elegant", "conversation", "dinner", "wine",
            "cultured", "educated", "sophisticated", "charming", "refined", "theater", "art",
            "witty",
        ],
        weight: None,
    },
    Template {
        markers: &["i", "me"],
        topic: &[
            "companion", "travel", "lunch", "tall", "curvy", "blonde", "brunette", "tours",
            "flights", "hotel", "beach", "resort", "vacation", "trips", "adventure",
        ],
        weight: Some((125, 165)),
    },
    Template {
        markers: &["my", "me"],
        topic: &[
            "athletic", "gym", "yoga", "fit", "toned", "stretch", "pilates", "runner", "trainer",
            "cardio", "workout", "sporty", "healthy", "energetic", "strong",
        ],
        weight: None,
    },
];

const INDICATOR_NOISE: &[&str] = &[
    "asian", "thai", "korean", "spa", "massage", "we", "our", "girls", "ladies", "sweet",
    "fresh", "candy", "she", "her", "www.example-site.com",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub corpus: Vec<AdRecord>,
    /// The stratified labeled subset, in corpus order.
    pub labeled: Vec<(String, Label)>,
    /// Planted class of every ad, in corpus order.
    pub truth: Vec<(String, Label)>,
}

impl SyntheticCorpus {
    pub fn dataset(&self, space: FeatureSpace) -> Result<Dataset> {
        Dataset::from_corpus(&self.corpus, &self.labeled, space)
    }

    pub fn truth_of(&self, id: &str) -> Option<Label> {
        self.truth.iter().find(|(i, _)| i == id).map(|(_, l)| *l)
    }
}

fn noise_pool() -> Vec<&'static str> {
    let mut pool: Vec<&str> = FILLER.to_vec();
    for t in POSITIVE.iter().chain(NEGATIVE) {
        pool.extend_from_slice(t.topic);
    }
    pool.extend_from_slice(INDICATOR_NOISE);
    pool
}

fn render(template: &Template, noise: f64, pool: &[&str], rng: &mut ChaCha8Rng) -> String {
    let n_topic = rng.gen_range(5..=9);
    let n_filler = rng.gen_range(3..=7);
    let mut words: Vec<String> = Vec::new();
    words.extend(template.topic.choose_multiple(rng, n_topic).map(|w| w.to_string()));
    words.extend((0..n_filler).map(|_| FILLER.choose(rng).expect("nonempty").to_string()));
    words.shuffle(rng);
    // markers keep their relative order so multi-word phrases survive
    let at = rng.gen_range(0..=words.len());
    let markers: Vec<String> = template.markers.iter().map(|m| m.to_string()).collect();
    words.splice(at..at, markers);
    if let Some((lo, hi)) = template.weight {
        let w = rng.gen_range(lo..=hi);
        let at = rng.gen_range(0..=words.len());
        words.splice(at..at, [w.to_string(), "lbs".to_string()]);
    }
    for w in &mut words {
        if rng.gen_bool(noise) {
            *w = pool.choose(rng).expect("nonempty").to_string();
        }
    }
    words.join(" ")
}

/// Generates `n_labeled + n_unlabeled` ads, about 35% positive, and draws a
/// stratified labeled subset with at least two ads of each class.
pub fn generate_synthetic(n_labeled: usize, n_unlabeled: usize, noise: f64, seed: u64) -> Result<SyntheticCorpus> {
    if n_labeled < 4 {
        return Err(Error::invalid("n_labeled must be at least 4"));
    }
    if !(0.0..0.5).contains(&noise) {
        return Err(Error::invalid("noise must lie in [0, 0.5)"));
    }
    let n = n_labeled + n_unlabeled;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = noise_pool();

    let n_pos = ((n as f64 * POSITIVE_FRACTION).round() as usize).clamp(2, n - 2);
    let mut classes: Vec<Label> = (0..n).map(|i| if i < n_pos { Label::Pos } else { Label::Neg }).collect();
    classes.shuffle(&mut rng);

    let width = n.to_string().len();
    let mut corpus = Vec::with_capacity(n);
    let mut truth = Vec::with_capacity(n);
    for (i, &class) in classes.iter().enumerate() {
        let templates = if class.is_pos() { POSITIVE } else { NEGATIVE };
        let template = &templates[rng.gen_range(0..templates.len())];
        let title: Vec<&str> = FILLER.choose_multiple(&mut rng, 2).copied().collect();
        let body = render(template, noise, &pool, &mut rng);
        let id = format!("ad{:0width$}", i, width = width);
        corpus.push(AdRecord::new(id.clone(), title.join(" "), body));
        truth.push((id, class));
    }

    let mut pos_idx: Vec<usize> = (0..n).filter(|&i| classes[i].is_pos()).collect();
    let mut neg_idx: Vec<usize> = (0..n).filter(|&i| !classes[i].is_pos()).collect();
    pos_idx.shuffle(&mut rng);
    neg_idx.shuffle(&mut rng);
    let l_pos = ((n_labeled as f64 * POSITIVE_FRACTION).round() as usize)
        .clamp(2, n_labeled - 2)
        .min(pos_idx.len());
    let l_neg = (n_labeled - l_pos).min(neg_idx.len());
    let mut chosen: Vec<usize> = pos_idx[..l_pos].iter().chain(&neg_idx[..l_neg]).copied().collect();
    chosen.sort_unstable();
    let labeled = chosen.iter().map(|&i| truth[i].clone()).collect();

    Ok(SyntheticCorpus { corpus, labeled, truth })
}
