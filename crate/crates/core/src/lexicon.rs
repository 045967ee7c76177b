//! Vocabulary mining: divergent translation sets ("which word when"),
//! category word lists via sense-lexicon ancestor traversal, and adjective
//! synonym/antonym sets.
//!
//! Sense disambiguation is the first-sense heuristic: a lemma's
//! highest-ranked synset in the lexicon file stands in for its sense in
//! context.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bitext::{Alignment, Bitext, TranslationTable};
use crate::error::{Error, Result};
use crate::instances::{Instance, Provenance};
use crate::rules::ExampleRef;
use crate::treebank::Treebank;

/// Lemma sequences for the target side, keyed by pair_id. When supplied,
/// candidates merge under lemma keys instead of surface forms.
pub type TargetLemmas = BTreeMap<String, Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationSet {
    pub english_lemma: String,
    /// L2 key (lemma or surface form) → aligned-occurrence count.
    pub candidates: BTreeMap<String, u64>,
    /// L2 key → pair ids where the link was observed, in corpus order.
    pub example_pair_ids: BTreeMap<String, Vec<String>>,
    /// L2 key → surface forms observed under it; used to look candidates
    /// up in the (surface-form) translation table when keys are lemmas.
    pub surfaces: BTreeMap<String, BTreeSet<String>>,
}

/// Count aligned word-by-word translations per English source word.
/// Returns one set per English word, sorted by the word.
pub fn extract_translation_sets(
    bt: &Bitext,
    alignments: &[Alignment],
    target_lemmas: Option<&TargetLemmas>,
) -> Vec<TranslationSet> {
    assert_eq!(
        bt.pairs.len(),
        alignments.len(),
        "alignments must correspond 1:1 to bitext pairs"
    );
    let mut sets: BTreeMap<String, TranslationSet> = BTreeMap::new();
    for (pair, alignment) in bt.pairs.iter().zip(alignments) {
        let lemmas = target_lemmas.and_then(|m| m.get(&pair.pair_id));
        for &(i, j) in &alignment.links {
            let (Some(english), Some(surface)) = (pair.source.get(i), pair.target.get(j)) else {
                continue;
            };
            let key = match lemmas {
                Some(seq) if seq.len() == pair.target.len() => seq[j].clone(),
                _ => surface.clone(),
            };
            let set = sets
                .entry(english.clone())
                .or_insert_with(|| TranslationSet {
                    english_lemma: english.clone(),
                    candidates: BTreeMap::new(),
                    example_pair_ids: BTreeMap::new(),
                    surfaces: BTreeMap::new(),
                });
            *set.candidates.entry(key.clone()).or_insert(0) += 1;
            let ids = set.example_pair_ids.entry(key.clone()).or_default();
            if ids.last() != Some(&pair.pair_id) {
                ids.push(pair.pair_id.clone());
            }
            set.surfaces.entry(key).or_default().insert(surface.clone());
        }
    }
    sets.into_values().collect()
}

/// The filtration steps: drop stoplisted English words, drop candidates
/// below `min_count` or below `min_prob` in the translation table, then
/// keep only sets with at least `min_candidates` distinct candidates left.
pub fn filter_divergent_pairs(
    sets: Vec<TranslationSet>,
    min_count: u64,
    min_candidates: usize,
    stoplist: &BTreeSet<String>,
    table: &TranslationTable,
    min_prob: f64,
) -> Vec<TranslationSet> {
    let mut out = Vec::new();
    for mut set in sets {
        if stoplist.contains(&set.english_lemma) {
            continue;
        }
        let keep: Vec<String> = set
            .candidates
            .iter()
            .filter(|(key, &count)| {
                if count < min_count {
                    return false;
                }
                // lemma keys are looked up via their observed surfaces
                let best = set
                    .surfaces
                    .get(*key)
                    .map(|forms| {
                        forms
                            .iter()
                            .map(|f| table.prob(&set.english_lemma, f))
                            .fold(0.0, f64::max)
                    })
                    .unwrap_or(0.0);
                best >= min_prob
            })
            .map(|(key, _)| key.clone())
            .collect();
        if keep.len() < min_candidates {
            continue;
        }
        set.candidates.retain(|k, _| keep.contains(k));
        set.example_pair_ids.retain(|k, _| keep.contains(k));
        set.surfaces.retain(|k, _| keep.contains(k));
        out.push(set);
    }
    out
}

/// The 50 most frequent English function words; the default stoplist for
/// divergence mining.
pub fn default_stoplist() -> BTreeSet<String> {
    [
        "the", "of", "and", "a", "to", "in", "is", "it", "that", "for", "on", "with", "as", "was",
        "at", "be", "this", "by", "an", "not", "are", "or", "from", "but", "have", "has", "had",
        "they", "you", "we", "he", "she", "his", "her", "its", "their", "them", "i", "me", "my",
        "who", "which", "will", "would", "can", "could", "do", "does", "did", "were",
    ]
    .into_iter()
    .map(str::to_string)
    .collect()
}

/// Lexical-selection dataset for one divergent English word: label = the
/// chosen L2 key, features = context words at offsets −2..+2 plus
/// bag-of-words indicators for the 20 most frequent co-occurring content
/// words.
pub fn build_selection_instances(
    ts: &TranslationSet,
    bt: &Bitext,
    alignments: &[Alignment],
    target_lemmas: Option<&TargetLemmas>,
) -> Vec<Instance> {
    assert_eq!(bt.pairs.len(), alignments.len());
    let stop = default_stoplist();

    // occurrences: (pair idx, source idx, target idx, label)
    let mut occurrences: Vec<(usize, usize, usize, String)> = Vec::new();
    for (pi, (pair, alignment)) in bt.pairs.iter().zip(alignments).enumerate() {
        let lemmas = target_lemmas.and_then(|m| m.get(&pair.pair_id));
        for &(i, j) in &alignment.links {
            if pair.source.get(i).map(String::as_str) != Some(ts.english_lemma.as_str()) {
                continue;
            }
            let Some(surface) = pair.target.get(j) else {
                continue;
            };
            let key = match lemmas {
                Some(seq) if seq.len() == pair.target.len() => seq[j].clone(),
                _ => surface.clone(),
            };
            if ts.candidates.contains_key(&key) {
                occurrences.push((pi, i, j, key));
            }
        }
    }

    // Top-20 co-occurring content words across the set's occurrences.
    let mut cooc: HashMap<&str, u64> = HashMap::new();
    for &(pi, i, _, _) in &occurrences {
        for (k, w) in bt.pairs[pi].source.iter().enumerate() {
            if k != i && w != &ts.english_lemma && !stop.contains(w) {
                *cooc.entry(w.as_str()).or_insert(0) += 1;
            }
        }
    }
    let mut ranked: Vec<(&str, u64)> = cooc.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let bow_vocab: BTreeSet<&str> = ranked.iter().take(20).map(|(w, _)| *w).collect();

    occurrences
        .into_iter()
        .map(|(pi, i, j, label)| {
            let pair = &bt.pairs[pi];
            let mut features = BTreeMap::new();
            for off in -2i64..=2 {
                if off == 0 {
                    continue;
                }
                let pos = i as i64 + off;
                if pos >= 0 && (pos as usize) < pair.source.len() {
                    features.insert(format!("ctx-{off}"), pair.source[pos as usize].clone());
                }
            }
            for (k, w) in pair.source.iter().enumerate() {
                if k != i && bow_vocab.contains(w.as_str()) {
                    features.insert(format!("ctx-bow-{w}"), "true".to_string());
                }
            }
            Instance::new(
                features,
                label,
                Provenance {
                    sent_id: pair.pair_id.clone(),
                    head: i + 1,
                    dep: j + 1,
                },
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Synset {
    pub id: String,
    pub pos: String,
    pub lemmas: BTreeSet<String>,
    pub hypernyms: BTreeSet<String>,
    pub antonyms: BTreeSet<String>,
    pub gloss: String,
}

#[derive(Debug, Clone, Default)]
pub struct SenseLexicon {
    pub synsets: BTreeMap<String, Synset>,
    /// (lemma, pos) → synset ids in file order; file order is sense rank.
    pub lemma_index: BTreeMap<(String, String), Vec<String>>,
}

impl SenseLexicon {
    pub fn first_sense(&self, lemma: &str, pos: &str) -> Option<&Synset> {
        self.lemma_index
            .get(&(lemma.to_string(), pos.to_string()))
            .and_then(|ids| ids.first())
            .and_then(|id| self.synsets.get(id))
    }
}

/// Parse the sense-lexicon TSV: one synset per line,
/// `id <TAB> pos <TAB> lemmas,comma,separated <TAB> hypernym,ids <TAB>
/// antonym,ids <TAB> gloss`. Hypernym cycles and dangling references are
/// load errors.
pub fn parse_sense_lexicon(text: &str) -> Result<SenseLexicon> {
    let mut lex = SenseLexicon::default();
    let mut order: Vec<(String, String, String)> = Vec::new(); // (lemma, pos, synset)
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 6 {
            return Err(Error::Lexicon {
                line: lineno,
                msg: format!("expected 6 tab-separated columns, found {}", cols.len()),
            });
        }
        let id = cols[0].trim().to_string();
        if id.is_empty() {
            return Err(Error::Lexicon {
                line: lineno,
                msg: "empty synset id".into(),
            });
        }
        let split_ids = |col: &str| -> BTreeSet<String> {
            col.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect()
        };
        let lemmas = split_ids(cols[2]);
        if lemmas.is_empty() {
            return Err(Error::Lexicon {
                line: lineno,
                msg: format!("synset {id} has no lemmas"),
            });
        }
        let synset = Synset {
            id: id.clone(),
            pos: cols[1].trim().to_string(),
            lemmas: lemmas.clone(),
            hypernyms: split_ids(cols[3]),
            antonyms: split_ids(cols[4]),
            gloss: cols[5].trim().to_string(),
        };
        if lex.synsets.insert(id.clone(), synset).is_some() {
            return Err(Error::Lexicon {
                line: lineno,
                msg: format!("duplicate synset id {id}"),
            });
        }
        // preserve file order for sense ranking
        for lemma in &lemmas {
            order.push((lemma.clone(), cols[1].trim().to_string(), id.clone()));
        }
    }

    for (lemma, pos, id) in order {
        lex.lemma_index.entry((lemma, pos)).or_default().push(id);
    }

    // referential integrity
    for synset in lex.synsets.values() {
        for reference in synset.hypernyms.iter().chain(synset.antonyms.iter()) {
            if !lex.synsets.contains_key(reference) {
                return Err(Error::DanglingSynset {
                    reference: reference.clone(),
                    from: synset.id.clone(),
                });
            }
        }
    }

    // cycle check over the hypernym graph
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Visiting,
        Done,
    }
    fn dfs(
        id: &str,
        lex: &SenseLexicon,
        marks: &mut BTreeMap<String, Mark>,
    ) -> std::result::Result<(), String> {
        match marks.get(id) {
            Some(Mark::Done) => return Ok(()),
            Some(Mark::Visiting) => return Err(id.to_string()),
            None => {}
        }
        marks.insert(id.to_string(), Mark::Visiting);
        for parent in &lex.synsets[id].hypernyms {
            dfs(parent, lex, marks)?;
        }
        marks.insert(id.to_string(), Mark::Done);
        Ok(())
    }
    let ids: Vec<String> = lex.synsets.keys().cloned().collect();
    let mut marks = BTreeMap::new();
    for id in ids {
        dfs(&id, &lex, &mut marks).map_err(Error::LexiconCycle)?;
    }

    Ok(lex)
}

pub fn load_sense_lexicon<P: AsRef<Path>>(path: P) -> Result<SenseLexicon> {
    parse_sense_lexicon(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryConfig {
    pub categories: BTreeMap<String, BTreeSet<String>>,
}

impl CategoryConfig {
    pub fn from_toml(text: &str) -> Result<CategoryConfig> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<CategoryConfig> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

/// First-sense hypernym traversal: breadth-first over the hypernym closure
/// of the lemma's first-ranked synset (the synset itself at distance 0),
/// returning the category whose configured synsets are fewest hops away.
/// Distance ties break toward the lexicographically smaller category name.
pub fn assign_category(
    lemma: &str,
    pos: &str,
    lex: &SenseLexicon,
    cats: &CategoryConfig,
) -> Option<String> {
    let start = lex.first_sense(lemma, pos)?;
    let mut best: Option<(usize, &str)> = None;
    let mut queue: VecDeque<(String, usize)> = VecDeque::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    queue.push_back((start.id.clone(), 0));
    seen.insert(start.id.clone());
    while let Some((id, dist)) = queue.pop_front() {
        for (name, members) in &cats.categories {
            if members.contains(&id) {
                let better = match best {
                    None => true,
                    Some((bd, bn)) => dist < bd || (dist == bd && name.as_str() < bn),
                };
                if better {
                    best = Some((dist, name.as_str()));
                }
            }
        }
        if let Some(synset) = lex.synsets.get(&id) {
            for parent in &synset.hypernyms {
                if seen.insert(parent.clone()) {
                    queue.push_back((parent.clone(), dist + 1));
                }
            }
        }
    }
    best.map(|(_, name)| name.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjectiveEntry {
    pub adjective: String,
    pub gloss: String,
    pub synonyms: Vec<String>,
    pub antonyms: Vec<String>,
    pub translations: Vec<String>,
    pub examples: Vec<ExampleRef>,
}

/// Popular adjectives (by frequency on the English side of the bitext)
/// with their first-sense gloss, synonyms, antonyms, L2 translations from
/// the filtered sets, and up to `k` example pairs each.
pub fn adjective_sets(
    tb_english: Option<&Treebank>,
    bt: &Bitext,
    lex: &SenseLexicon,
    sets: &[TranslationSet],
    min_freq: u64,
    k: usize,
) -> Vec<AdjectiveEntry> {
    let mut adjectives: BTreeSet<String> = BTreeSet::new();
    match tb_english {
        Some(tb) => {
            for sent in &tb.sentences {
                for tok in &sent.tokens {
                    if tok.upos == "ADJ" && !tok.lemma.is_empty() {
                        adjectives.insert(tok.lemma.to_lowercase());
                    }
                }
            }
        }
        None => {
            for (lemma, pos) in lex.lemma_index.keys() {
                if pos == "a" || pos == "s" {
                    adjectives.insert(lemma.clone());
                }
            }
        }
    }

    let mut freq: HashMap<&str, u64> = HashMap::new();
    for pair in &bt.pairs {
        for w in &pair.source {
            *freq.entry(w.as_str()).or_insert(0) += 1;
        }
    }

    let by_english: BTreeMap<&str, &TranslationSet> =
        sets.iter().map(|s| (s.english_lemma.as_str(), s)).collect();

    let mut out = Vec::new();
    for adjective in adjectives {
        let count = freq.get(adjective.as_str()).copied().unwrap_or(0);
        if count < min_freq {
            continue;
        }
        let sense = lex
            .first_sense(&adjective, "a")
            .or_else(|| lex.first_sense(&adjective, "s"));
        let (gloss, synonyms, antonyms) = match sense {
            None => (String::new(), Vec::new(), Vec::new()),
            Some(synset) => {
                let synonyms: Vec<String> = synset
                    .lemmas
                    .iter()
                    .filter(|l| **l != adjective)
                    .cloned()
                    .collect();
                let mut antonyms: BTreeSet<String> = BTreeSet::new();
                for ant_id in &synset.antonyms {
                    if let Some(ant) = lex.synsets.get(ant_id) {
                        antonyms.extend(ant.lemmas.iter().cloned());
                    }
                }
                (
                    synset.gloss.clone(),
                    synonyms,
                    antonyms.into_iter().collect(),
                )
            }
        };
        let translations: Vec<String> = by_english
            .get(adjective.as_str())
            .map(|set| {
                let mut ranked: Vec<(&String, &u64)> = set.candidates.iter().collect();
                ranked.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
                ranked.into_iter().map(|(key, _)| key.clone()).collect()
            })
            .unwrap_or_default();

        // shortest pairs containing the adjective
        let mut matching: Vec<&crate::bitext::SentencePair> = bt
            .pairs
            .iter()
            .filter(|p| p.source.iter().any(|w| w == &adjective))
            .collect();
        matching.sort_by_key(|p| (p.target.len(), p.pair_id.clone()));
        let examples = matching
            .into_iter()
            .take(k)
            .map(|p| ExampleRef {
                sent_id: p.pair_id.clone(),
                text: p.target.join(" "),
                highlight: Vec::new(),
                gloss: Some(p.source.join(" ")),
            })
            .collect();

        out.push(AdjectiveEntry {
            adjective,
            gloss,
            synonyms,
            antonyms,
            translations,
            examples,
        });
    }
    out
}
