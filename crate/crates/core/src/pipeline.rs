//! Question-level orchestration: extract instances, split, train, extract
//! rules, attach examples, evaluate, and assemble grammar points. The CLI
//! is a thin wrapper around these functions, and the acceptance suite
//! drives them directly.

use std::collections::BTreeMap;

use crate::bitext::{
    align, symmetrize, train_ibm1, Alignment, Bitext, SentencePair, TranslationTable,
};
use crate::config::RunConfig;
use crate::error::Result;
use crate::instances::{
    extract_agreement_instances, extract_order_instances, extract_suffix_instances, Extraction,
    Instance, RelationSpec,
};
use crate::lexicon::{
    adjective_sets, assign_category, build_selection_instances, default_stoplist,
    extract_translation_sets, filter_divergent_pairs, CategoryConfig, SenseLexicon, TargetLemmas,
    TranslationSet,
};
use crate::morphsum::summarize_features;
use crate::report::{build_grammar_point, Aspect, CategoryEntry, GrammarPoint, Payload};
use crate::rules::{
    attach_examples, evaluate, extract_rules, rule_matches, split_dataset, train_tree, ExampleRef,
    Rule, TreeNode,
};
use crate::treebank::Treebank;

/// A fully built question: the grammar point plus the artifacts needed to
/// audit it (tree and splits).
#[derive(Debug, Clone)]
pub struct BuiltQuestion {
    pub point: GrammarPoint,
    pub tree: TreeNode,
    pub train: Vec<Instance>,
    pub test: Vec<Instance>,
}

#[derive(Debug, Clone)]
pub enum QuestionOutcome {
    Built(Box<BuiltQuestion>),
    Skipped { question: String, reason: String },
}

impl QuestionOutcome {
    pub fn built(self) -> Option<BuiltQuestion> {
        match self {
            QuestionOutcome::Built(b) => Some(*b),
            QuestionOutcome::Skipped { .. } => None,
        }
    }
}

fn finish_question(
    topic: &str,
    question: &str,
    aspect: Aspect,
    instances: Vec<Instance>,
    tb: &Treebank,
    cfg: &RunConfig,
    payload: Option<Payload>,
) -> Result<QuestionOutcome> {
    if instances.len() < cfg.thresholds.min_instances {
        return Ok(QuestionOutcome::Skipped {
            question: question.to_string(),
            reason: format!(
                "{} instances, need at least {}",
                instances.len(),
                cfg.thresholds.min_instances
            ),
        });
    }
    let (train, _dev, test) = split_dataset(&instances, cfg.split.as_tuple(), cfg.seed)?;
    if train.is_empty() || test.is_empty() {
        return Ok(QuestionOutcome::Skipped {
            question: question.to_string(),
            reason: "empty train or test split".into(),
        });
    }
    let tree = train_tree(&train, &cfg.learner);
    let metrics = evaluate(&tree, &train, &test);
    let rules: Vec<Rule> = extract_rules(&tree)
        .into_iter()
        .map(|r| attach_examples(r, &train, tb, cfg.thresholds.examples_per_rule))
        .collect();
    let point = build_grammar_point(
        &tb.language,
        aspect,
        topic,
        question,
        Some(&tree),
        rules,
        Some(metrics),
        payload,
    )?;
    Ok(QuestionOutcome::Built(Box::new(BuiltQuestion {
        point,
        tree,
        train,
        test,
    })))
}

fn with_language(question: &str, language: &str) -> String {
    match question.strip_suffix('?') {
        Some(stem) => format!("{stem} in {language}?"),
        None => format!("{question} in {language}"),
    }
}

/// Word-order question for one relation spec.
pub fn word_order_question(
    tb: &Treebank,
    spec: &RelationSpec,
    cfg: &RunConfig,
) -> Result<(QuestionOutcome, Extraction)> {
    let question = spec
        .question
        .clone()
        .unwrap_or_else(|| format!("How are {} pairs ordered?", spec.name));
    let question = with_language(&question, &tb.language);
    let extraction = extract_order_instances(tb, spec, &cfg.features);
    let outcome = finish_question(
        &spec.name,
        &question,
        Aspect::WordOrder,
        extraction.instances.clone(),
        tb,
        cfg,
        None,
    )?;
    Ok((outcome, extraction))
}

/// Agreement question for one morphological attribute.
pub fn agreement_question(
    tb: &Treebank,
    attribute: &str,
    cfg: &RunConfig,
) -> Result<(QuestionOutcome, Extraction)> {
    let question = with_language(
        &format!("Do words need to agree on {attribute}?"),
        &tb.language,
    );
    let extraction = extract_agreement_instances(tb, attribute, &cfg.features);
    let outcome = finish_question(
        attribute,
        &question,
        Aspect::Agreement,
        extraction.instances.clone(),
        tb,
        cfg,
        None,
    )?;
    Ok((outcome, extraction))
}

fn upos_plural(upos: &str) -> String {
    match upos {
        "NOUN" => "nouns".into(),
        "VERB" => "verbs".into(),
        "ADJ" => "adjectives".into(),
        "ADV" => "adverbs".into(),
        "PRON" => "pronouns".into(),
        "PROPN" => "proper nouns".into(),
        "ADP" => "adpositions".into(),
        "NUM" => "numerals".into(),
        "DET" => "determiners".into(),
        "AUX" => "auxiliaries".into(),
        other => format!("{} words", other.to_lowercase()),
    }
}

/// Suffix question for one word type.
pub fn suffix_question(
    tb: &Treebank,
    upos: &str,
    cfg: &RunConfig,
) -> Result<(QuestionOutcome, Extraction)> {
    let question = format!(
        "What are the common suffixes for {} {}, and when is each used?",
        tb.language,
        upos_plural(upos)
    );
    let ex = extract_suffix_instances(tb, upos, &cfg.features, cfg.thresholds.min_suffix_count);
    let payload = Payload::Suffix {
        inventory: ex.inventory.clone(),
        sandhi_pairs: ex.sandhi_pairs.clone(),
        skipped_unconfident: ex.stats.skipped_unconfident as u64,
    };
    let outcome = finish_question(
        upos,
        &question,
        Aspect::Suffix,
        ex.instances.clone(),
        tb,
        cfg,
        Some(payload),
    )?;
    let extraction = Extraction {
        instances: ex.instances,
        stats: ex.stats,
    };
    Ok((outcome, extraction))
}

/// The general-information point: morphological attributes, their values,
/// word types and example usages, by frequency.
pub fn general_question(tb: &Treebank, cfg: &RunConfig) -> Result<GrammarPoint> {
    let summaries = summarize_features(tb, cfg.thresholds.top_n_examples);
    let question = format!("What morphological properties does {} show?", tb.language);
    build_grammar_point(
        &tb.language,
        Aspect::General,
        "general",
        &question,
        None,
        Vec::new(),
        None,
        Some(Payload::General { summaries }),
    )
}

/// One selection question that was actually trained.
#[derive(Debug, Clone)]
pub struct SelectionBuilt {
    pub english: String,
    pub built: BuiltQuestion,
}

#[derive(Debug, Default)]
pub struct VocabOutput {
    pub points: Vec<GrammarPoint>,
    pub selection: Vec<SelectionBuilt>,
    pub skipped: Vec<(String, String)>,
    /// Divergence-filtered sets (the "which word when" material).
    pub divergent_sets: Vec<TranslationSet>,
    pub alignments: Vec<Alignment>,
    pub table: TranslationTable,
}

fn swap_pair(pair: &SentencePair) -> SentencePair {
    SentencePair {
        source: pair.target.clone(),
        target: pair.source.clone(),
        pair_id: pair.pair_id.clone(),
    }
}

fn bitext_examples(rule: &Rule, instances: &[Instance], bt: &Bitext, k: usize) -> Rule {
    let by_id: BTreeMap<&str, &SentencePair> =
        bt.pairs.iter().map(|p| (p.pair_id.as_str(), p)).collect();
    let mut rule = rule.clone();
    let mut positives: Vec<&Instance> = Vec::new();
    let mut negatives: Vec<&Instance> = Vec::new();
    for inst in instances {
        if !rule_matches(&rule, inst) {
            continue;
        }
        if inst.label == rule.prediction {
            positives.push(inst);
        } else {
            negatives.push(inst);
        }
    }
    let key = |inst: &&Instance| {
        let len = by_id
            .get(inst.provenance.sent_id.as_str())
            .map(|p| p.target.len())
            .unwrap_or(usize::MAX);
        (len, inst.provenance.sent_id.clone(), inst.provenance.dep)
    };
    positives.sort_by_key(key);
    negatives.sort_by_key(key);
    let to_ref = |inst: &Instance| {
        let pair = by_id.get(inst.provenance.sent_id.as_str());
        ExampleRef {
            sent_id: inst.provenance.sent_id.clone(),
            text: pair.map(|p| p.target.join(" ")).unwrap_or_default(),
            highlight: vec![inst.provenance.dep],
            gloss: pair.map(|p| p.source.join(" ")),
        }
    };
    rule.examples = positives.iter().take(k).map(|i| to_ref(i)).collect();
    rule.counterexamples = negatives.iter().take(k).map(|i| to_ref(i)).collect();
    rule
}

/// The vocabulary leg: align the bitext (IBM Model 1 both directions,
/// intersection), mine divergent translation sets, train "which word when"
/// selection trees, and organize words by category and adjective sets when
/// a sense lexicon is available.
pub fn vocabulary_questions(
    bt: &Bitext,
    language: &str,
    lexicon: Option<&SenseLexicon>,
    categories: Option<&CategoryConfig>,
    target_lemmas: Option<&TargetLemmas>,
    cfg: &RunConfig,
) -> Result<VocabOutput> {
    let iterations = cfg.thresholds.em_iterations;
    let forward = train_ibm1(bt, iterations, true)?;
    let reversed = Bitext {
        pairs: bt.pairs.iter().map(swap_pair).collect(),
        dropped_long: 0,
        dropped_empty: 0,
    };
    let backward = train_ibm1(&reversed, iterations, true)?;
    let alignments: Vec<Alignment> = bt
        .pairs
        .iter()
        .zip(&reversed.pairs)
        .map(|(pair, swapped)| {
            let fwd = align(pair, &forward, true);
            let rev = align(swapped, &backward, true);
            symmetrize(&fwd, &rev)
        })
        .collect();

    let stoplist = default_stoplist();
    let sets = extract_translation_sets(bt, &alignments, target_lemmas);
    // basic quality pass: counts and stoplist only, used for category and
    // adjective materials
    let basic = filter_divergent_pairs(
        sets.clone(),
        cfg.thresholds.min_count,
        1,
        &stoplist,
        &forward,
        cfg.thresholds.min_prob,
    );
    let divergent = filter_divergent_pairs(
        sets,
        cfg.thresholds.min_count,
        cfg.thresholds.min_candidates,
        &stoplist,
        &forward,
        cfg.thresholds.min_prob,
    );

    let mut out = VocabOutput {
        table: forward,
        alignments,
        divergent_sets: divergent.clone(),
        ..VocabOutput::default()
    };

    for set in &divergent {
        let question = format!(
            "Which word to use for \u{201c}{}\u{201d} in {language}, and when?",
            set.english_lemma
        );
        let instances = build_selection_instances(set, bt, &out.alignments, target_lemmas);
        if instances.len() < cfg.thresholds.min_instances {
            out.skipped.push((
                question,
                format!(
                    "{} instances, need at least {}",
                    instances.len(),
                    cfg.thresholds.min_instances
                ),
            ));
            continue;
        }
        let (train, _dev, test) = split_dataset(&instances, cfg.split.as_tuple(), cfg.seed)?;
        if train.is_empty() || test.is_empty() {
            out.skipped
                .push((question, "empty train or test split".into()));
            continue;
        }
        let tree = train_tree(&train, &cfg.learner);
        let metrics = evaluate(&tree, &train, &test);
        let rules: Vec<Rule> = extract_rules(&tree)
            .iter()
            .map(|r| bitext_examples(r, &train, bt, cfg.thresholds.examples_per_rule))
            .collect();
        let point = build_grammar_point(
            language,
            Aspect::Vocabulary,
            &set.english_lemma,
            &question,
            Some(&tree),
            rules,
            Some(metrics),
            Some(Payload::TranslationSet {
                english: set.english_lemma.clone(),
                candidates: set.candidates.clone(),
            }),
        )?;
        out.points.push(point.clone());
        out.selection.push(SelectionBuilt {
            english: set.english_lemma.clone(),
            built: BuiltQuestion {
                point,
                tree,
                train,
                test,
            },
        });
    }

    if let Some(lex) = lexicon {
        if let Some(cats) = categories {
            let mut grouped: BTreeMap<String, Vec<CategoryEntry>> = BTreeMap::new();
            for set in &basic {
                let entry_for = |set: &TranslationSet| {
                    let mut ranked: Vec<(&String, &u64)> = set.candidates.iter().collect();
                    ranked.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
                    let translations: Vec<String> =
                        ranked.iter().map(|(k, _)| (*k).clone()).collect();
                    let example = ranked.first().and_then(|(key, _)| {
                        let pair_id = set.example_pair_ids.get(*key)?.first()?;
                        let pair = bt.pairs.iter().find(|p| &p.pair_id == pair_id)?;
                        Some(ExampleRef {
                            sent_id: pair_id.clone(),
                            text: pair.target.join(" "),
                            highlight: Vec::new(),
                            gloss: Some(pair.source.join(" ")),
                        })
                    });
                    CategoryEntry {
                        english: set.english_lemma.clone(),
                        translations,
                        example,
                    }
                };
                if let Some(category) = assign_category(&set.english_lemma, "n", lex, cats) {
                    grouped.entry(category).or_default().push(entry_for(set));
                } else if lex.first_sense(&set.english_lemma, "v").is_some() {
                    // verbs are organized by part of speech, not by synset
                    grouped
                        .entry("verbs".into())
                        .or_default()
                        .push(entry_for(set));
                }
            }
            if !grouped.is_empty() {
                let question = format!("What {language} words to use for popular categories?");
                out.points.push(build_grammar_point(
                    language,
                    Aspect::Vocabulary,
                    "categories",
                    &question,
                    None,
                    Vec::new(),
                    None,
                    Some(Payload::Categories {
                        categories: grouped,
                    }),
                )?);
            }
        }

        let entries = adjective_sets(
            None,
            bt,
            lex,
            &basic,
            cfg.thresholds.min_adjective_freq,
            cfg.thresholds.examples_per_rule,
        );
        if !entries.is_empty() {
            let question =
                format!("What are some adjectives in {language}, their synonyms and antonyms?");
            out.points.push(build_grammar_point(
                language,
                Aspect::Vocabulary,
                "adjectives",
                &question,
                None,
                Vec::new(),
                None,
                Some(Payload::Adjectives { entries }),
            )?);
        }
    }

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    #[test]
    fn word_order_pipeline_on_planted_corpus() {
        let tb = synth::planted_word_order_treebank(1000, 7);
        let cfg = RunConfig {
            language: "syn".into(),
            ..RunConfig::default()
        };
        let spec = &RelationSpec::defaults()[0];
        let (outcome, extraction) = word_order_question(&tb, spec, &cfg).unwrap();
        assert_eq!(extraction.stats.matched, 1000);
        let built = outcome.built().expect("question built");
        let metrics = built.point.metrics.as_ref().unwrap();
        assert_eq!(metrics.tree_accuracy, 1.0);
        let pron_rule = built
            .point
            .rules
            .iter()
            .find(|r| r.prediction == "after")
            .expect("exception rule present");
        assert!(pron_rule
            .conditions
            .iter()
            .any(|c| c.feature == "dep-upos" && c.value == "PRON"));
        assert!(!pron_rule.examples.is_empty());
    }

    #[test]
    fn suffix_pipeline_on_planted_corpus() {
        let tb = synth::planted_suffix_treebank(800, 13);
        let cfg = RunConfig {
            language: "syn".into(),
            ..RunConfig::default()
        };
        let (outcome, _) = suffix_question(&tb, "NOUN", &cfg).unwrap();
        let built = outcome.built().expect("built");
        match built.point.payload.as_ref().unwrap() {
            Payload::Suffix { inventory, .. } => {
                assert!(inventory.contains_key("laa"));
            }
            other => panic!("unexpected payload {other:?}"),
        }
        let laa_rule = built
            .point
            .rules
            .iter()
            .find(|r| r.prediction == "laa")
            .expect("laa rule");
        assert_eq!(laa_rule.precision, 1.0);
        assert!(laa_rule
            .conditions
            .iter()
            .any(|c| c.feature == "dep-Case" && c.value == "Acc"));
    }

    #[test]
    fn too_few_instances_is_skipped_not_an_error() {
        let tb = synth::smoke_treebank(3, 5);
        let cfg = RunConfig::default();
        let spec = &RelationSpec::defaults()[0];
        let (outcome, _) = word_order_question(&tb, spec, &cfg).unwrap();
        assert!(matches!(outcome, QuestionOutcome::Skipped { .. }));
    }

    #[test]
    fn vocabulary_pipeline_mines_the_planted_divergence() {
        let bt = synth::divergence_bitext(300, 21);
        let cfg = RunConfig {
            language: "syn".into(),
            ..RunConfig::default()
        };
        let out = vocabulary_questions(&bt, "syn", None, None, None, &cfg).unwrap();
        assert_eq!(out.divergent_sets.len(), 1);
        let set = &out.divergent_sets[0];
        assert_eq!(set.english_lemma, "rice");
        let keys: Vec<&String> = set.candidates.keys().collect();
        assert_eq!(keys, vec!["bhaat", "tandul"]);
        assert_eq!(out.selection.len(), 1);
        let metrics = out.selection[0].built.point.metrics.as_ref().unwrap();
        assert!(
            metrics.tree_accuracy >= 0.95,
            "accuracy {}",
            metrics.tree_accuracy
        );
    }

    #[test]
    fn general_point_has_summaries_and_no_metrics() {
        let tb = synth::smoke_treebank(50, 5);
        let cfg = RunConfig::default();
        let point = general_question(&tb, &cfg).unwrap();
        assert!(point.metrics.is_none());
        assert!(point.rules.is_empty());
        match point.payload.as_ref().unwrap() {
            Payload::General { summaries } => assert!(!summaries.is_empty()),
            other => panic!("unexpected payload {other:?}"),
        }
    }
}
