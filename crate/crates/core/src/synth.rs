//! Deterministic synthetic corpora for tests, benchmarks, and demos: a
//! small UD-style treebank sampler for a fictional SOV language, planted
//! single-rule corpora, and dictionary bitexts with known gold alignments.
//!
//! Everything is driven by a splitmix64 generator, so a seed pins the
//! exact output bytes forever.

use std::collections::BTreeSet;

use crate::bitext::{build_bitext, Bitext};
use crate::treebank::{Feats, Sentence, Token, Treebank};

/// splitmix64; tiny, seedable, stable across platforms.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }

    pub fn chance(&mut self, p: f64) -> bool {
        (self.next_u64() as f64 / u64::MAX as f64) < p
    }
}

struct Draft {
    form: String,
    lemma: String,
    upos: &'static str,
    feats: Vec<(&'static str, String)>,
    /// index into the draft vector, usize::MAX = root
    head: usize,
    deprel: &'static str,
    english: String,
}

fn finish_sentence(sent_id: String, drafts: Vec<Draft>) -> Sentence {
    let text: Vec<&str> = drafts.iter().map(|d| d.form.as_str()).collect();
    let gloss: Vec<&str> = drafts
        .iter()
        .filter(|d| !d.english.is_empty())
        .map(|d| d.english.as_str())
        .collect();
    let comments = vec![
        format!("# sent_id = {sent_id}"),
        format!("# text = {}", text.join(" ")),
        format!("# text_en = {}", gloss.join(" ")),
    ];
    let translation = Some(gloss.join(" "));
    let tokens = drafts
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let mut feats = Feats::new();
            for (k, v) in &d.feats {
                feats.insert(k.to_string(), v.clone());
            }
            Token {
                id: i + 1,
                form: d.form.clone(),
                lemma: d.lemma.clone(),
                upos: d.upos.to_string(),
                xpos: String::new(),
                feats,
                head: if d.head == usize::MAX { 0 } else { d.head + 1 },
                deprel: d.deprel.to_string(),
                deps: String::new(),
                misc: String::new(),
            }
        })
        .collect();
    Sentence {
        sent_id,
        tokens,
        comments,
        translation,
    }
}

const NOUNS: &[(&str, &str, &str)] = &[
    ("kutra", "Masc", "dog"),
    ("manus", "Masc", "man"),
    ("ghar", "Neut", "house"),
    ("pani", "Neut", "water"),
    ("zhad", "Neut", "tree"),
    ("phul", "Neut", "flower"),
    ("vat", "Fem", "path"),
    ("shala", "Fem", "school"),
    ("pustak", "Neut", "book"),
    ("mulga", "Masc", "boy"),
    ("mulgi", "Fem", "girl"),
    ("aai", "Fem", "mother"),
    ("baba", "Masc", "father"),
    ("gav", "Neut", "village"),
    ("shet", "Neut", "field"),
    ("dongar", "Masc", "hill"),
    ("nadi", "Fem", "river"),
    ("chandra", "Masc", "moon"),
    ("surya", "Masc", "sun"),
    ("chitra", "Neut", "picture"),
];

const VERBS: &[(&str, &str)] = &[
    ("khane", "eats"),
    ("pine", "drinks"),
    ("jane", "goes"),
    ("yene", "comes"),
    ("baghne", "sees"),
    ("karne", "makes"),
    ("dene", "gives"),
    ("ghene", "takes"),
    ("bolne", "speaks"),
    ("chalne", "walks"),
];

const ADJECTIVES: &[(&str, &str)] = &[
    ("motha", "big"),
    ("lahan", "small"),
    ("sundar", "beautiful"),
    ("juna", "old"),
    ("nava", "new"),
    ("lal", "red"),
    ("nila", "blue"),
    ("kala", "black"),
];

const NUMERALS: &[(&str, &str)] = &[
    ("ek", "one"),
    ("don", "two"),
    ("tin", "three"),
    ("char", "four"),
];

const ADPOSITIONS: &[(&str, &str)] = &[
    ("var", "on"),
    ("khali", "under"),
    ("madhe", "in"),
    ("javal", "near"),
];

const ADVERBS: &[(&str, &str)] = &[
    ("kal", "yesterday"),
    ("aaj", "today"),
    ("udya", "tomorrow"),
    ("hallu", "slowly"),
];

const PRONOUNS: &[(&str, &str, &str, &str)] = &[
    ("mi", "1", "Masc", "i"),
    ("tu", "2", "Masc", "you"),
    ("to", "3", "Masc", "he"),
    ("ti", "3", "Fem", "she"),
];

fn case_suffix(case: &str) -> &'static str {
    match case {
        "Acc" => "laa",
        "Dat" => "ne",
        _ => "",
    }
}

fn noun_draft(rng: &mut Rng, case: &str, deprel: &'static str, head: usize) -> Draft {
    let (lemma, gender, english) = *rng.pick(NOUNS);
    let number = if rng.chance(0.3) { "Plur" } else { "Sing" };
    Draft {
        form: format!("{lemma}{}", case_suffix(case)),
        lemma: lemma.to_string(),
        upos: "NOUN",
        feats: vec![
            ("Case", case.to_string()),
            ("Gender", gender.to_string()),
            ("Number", number.to_string()),
        ],
        head,
        deprel,
        english: english.to_string(),
    }
}

/// A ~realistic mixed treebank for a fictional SOV language: all five
/// built-in relations occur, gender agreement is mostly (not always)
/// respected, and nouns/verbs carry deterministic suffixes.
pub fn smoke_treebank(n_sentences: usize, seed: u64) -> Treebank {
    let mut rng = Rng::new(seed);
    let mut sentences = Vec::with_capacity(n_sentences);
    for i in 0..n_sentences {
        let mut drafts: Vec<Draft> = Vec::new();
        // Build the verb first so everything can point at it; reorder later.
        let (verb_lemma, verb_english) = *rng.pick(VERBS);
        let tense = if rng.chance(0.5) { "Past" } else { "Pres" };

        // subject phrase
        let mut subj_feats_gender;
        let subject_is_pron = rng.chance(0.25);
        let mut pre_subject: Vec<Draft> = Vec::new();
        let subject = if subject_is_pron {
            let (form, person, gender, english) = *rng.pick(PRONOUNS);
            subj_feats_gender = gender.to_string();
            Draft {
                form: form.to_string(),
                lemma: form.to_string(),
                upos: "PRON",
                feats: vec![
                    ("Case", "Nom".to_string()),
                    ("Gender", gender.to_string()),
                    ("Number", "Sing".to_string()),
                    ("Person", person.to_string()),
                ],
                head: usize::MAX, // patched to the verb
                deprel: "nsubj",
                english: english.to_string(),
            }
        } else {
            let d = noun_draft(&mut rng, "Nom", "nsubj", usize::MAX);
            subj_feats_gender = d
                .feats
                .iter()
                .find(|(k, _)| *k == "Gender")
                .map(|(_, v)| v.clone())
                .unwrap_or_default();
            if rng.chance(0.3) {
                let (num_form, num_en) = *rng.pick(NUMERALS);
                pre_subject.push(Draft {
                    form: num_form.to_string(),
                    lemma: num_form.to_string(),
                    upos: "NUM",
                    feats: vec![],
                    head: usize::MAX,
                    deprel: "nummod",
                    english: num_en.to_string(),
                });
            }
            if rng.chance(0.5) {
                let (adj_lemma, adj_en) = *rng.pick(ADJECTIVES);
                // agree with the noun most of the time
                let gender = if rng.chance(0.85) {
                    subj_feats_gender.clone()
                } else {
                    ["Masc", "Fem", "Neut"][rng.below(3)].to_string()
                };
                pre_subject.push(Draft {
                    form: adj_lemma.to_string(),
                    lemma: adj_lemma.to_string(),
                    upos: "ADJ",
                    feats: vec![("Gender", gender)],
                    head: usize::MAX,
                    deprel: "amod",
                    english: adj_en.to_string(),
                });
            }
            d
        };
        if subj_feats_gender.is_empty() {
            subj_feats_gender = "Masc".to_string();
        }

        // object phrase
        let mut object: Vec<Draft> = Vec::new();
        if rng.chance(0.7) {
            if rng.chance(0.3) {
                let (adj_lemma, adj_en) = *rng.pick(ADJECTIVES);
                object.push(Draft {
                    form: adj_lemma.to_string(),
                    lemma: adj_lemma.to_string(),
                    upos: "ADJ",
                    feats: vec![("Gender", "Neut".to_string())],
                    head: usize::MAX,
                    deprel: "amod",
                    english: adj_en.to_string(),
                });
            }
            object.push(noun_draft(&mut rng, "Acc", "obj", usize::MAX));
        }

        // adpositional phrase: NOUN + ADP (postposition)
        let mut adp_phrase: Vec<Draft> = Vec::new();
        if rng.chance(0.4) {
            adp_phrase.push(noun_draft(&mut rng, "Dat", "obl", usize::MAX));
            let (adp_form, adp_en) = *rng.pick(ADPOSITIONS);
            adp_phrase.push(Draft {
                form: adp_form.to_string(),
                lemma: adp_form.to_string(),
                upos: "ADP",
                feats: vec![],
                head: usize::MAX,
                deprel: "case",
                english: adp_en.to_string(),
            });
        }

        let mut adverb: Vec<Draft> = Vec::new();
        if rng.chance(0.4) {
            let (adv_form, adv_en) = *rng.pick(ADVERBS);
            adverb.push(Draft {
                form: adv_form.to_string(),
                lemma: adv_form.to_string(),
                upos: "ADV",
                feats: vec![],
                head: usize::MAX,
                deprel: "advmod",
                english: adv_en.to_string(),
            });
        }

        let verb_gender = if rng.chance(0.9) {
            subj_feats_gender.clone()
        } else {
            ["Masc", "Fem", "Neut"][rng.below(3)].to_string()
        };
        let verb_number = if rng.chance(0.9) {
            subject
                .feats
                .iter()
                .find(|(k, _)| *k == "Number")
                .map(|(_, v)| v.clone())
                .unwrap_or_else(|| "Sing".to_string())
        } else {
            ["Sing", "Plur"][rng.below(2)].to_string()
        };
        let verb_person = if rng.chance(0.9) {
            subject
                .feats
                .iter()
                .find(|(k, _)| *k == "Person")
                .map(|(_, v)| v.clone())
                .unwrap_or_else(|| "3".to_string())
        } else {
            ["1", "2", "3"][rng.below(3)].to_string()
        };
        let verb = Draft {
            form: format!("{verb_lemma}{}", if tense == "Past" { "to" } else { "te" }),
            lemma: verb_lemma.to_string(),
            upos: "VERB",
            feats: vec![
                ("Gender", verb_gender),
                ("Number", verb_number),
                ("Person", verb_person),
                ("Tense", tense.to_string()),
            ],
            head: usize::MAX,
            deprel: "root",
            english: verb_english.to_string(),
        };

        // Assemble in surface order. Pronoun subjects follow the verb more
        // often than nominal ones.
        let subject_after = if subject_is_pron {
            rng.chance(0.6)
        } else {
            rng.chance(0.05)
        };
        // indices of phrase members get fixed up after layout
        let mut layout: Vec<(Draft, &'static str)> = Vec::new(); // (draft, role)
        let mut subject_bundle: Option<Vec<(Draft, &'static str)>> = Some(
            pre_subject
                .into_iter()
                .map(|d| (d, "subjmod"))
                .chain(std::iter::once((subject, "subject")))
                .collect(),
        );
        if !subject_after {
            layout.extend(subject_bundle.take().unwrap());
        }
        for d in object {
            layout.push((d, "objpart"));
        }
        for d in adp_phrase {
            layout.push((d, "adppart"));
        }
        for d in adverb {
            layout.push((d, "advpart"));
        }
        layout.push((verb, "verb"));
        if let Some(bundle) = subject_bundle.take() {
            layout.extend(bundle);
        }
        layout.push((
            Draft {
                form: ".".into(),
                lemma: ".".into(),
                upos: "PUNCT",
                feats: vec![],
                head: usize::MAX,
                deprel: "punct",
                english: String::new(),
            },
            "punct",
        ));

        // resolve heads
        let verb_idx = layout.iter().position(|(_, r)| *r == "verb").unwrap();
        let subject_idx = layout.iter().position(|(_, r)| *r == "subject").unwrap();
        let obj_noun_idx = layout
            .iter()
            .position(|(d, r)| *r == "objpart" && d.upos == "NOUN");
        let obl_noun_idx = layout
            .iter()
            .position(|(d, r)| *r == "adppart" && d.upos == "NOUN");
        for (draft, role) in layout.iter_mut() {
            let upos = draft.upos;
            draft.head = match (*role, upos) {
                ("verb", _) => usize::MAX,
                ("subject", _) => verb_idx,
                ("subjmod", _) => subject_idx,
                ("objpart", "NOUN") => verb_idx,
                ("objpart", _) => obj_noun_idx.unwrap(),
                ("adppart", "NOUN") => verb_idx,
                ("adppart", _) => obl_noun_idx.unwrap(),
                ("advpart", _) => verb_idx,
                ("punct", _) => verb_idx,
                _ => verb_idx,
            };
        }
        drafts.extend(layout.into_iter().map(|(d, _)| d));
        sentences.push(finish_sentence(format!("s{}", i + 1), drafts));
    }
    Treebank {
        language: "syn".into(),
        sentences,
        source_paths: Vec::new(),
    }
}

const PROPER_NOUNS: &[(&str, &str, &str)] = &[
    ("raam", "Masc", "ram"),
    ("sita", "Fem", "sita"),
    ("arjun", "Masc", "arjun"),
    ("meera", "Fem", "meera"),
];

/// Planted word-order corpus: exactly one subject-verb edge per sentence,
/// subject after the verb iff the subject is a pronoun, pronouns 20% of
/// the time. Non-pronoun subjects mix NOUN and PROPN so only the PRON test
/// separates the classes, and random adverbs pad both orders so no
/// neighbor feature does either.
pub fn planted_word_order_treebank(n_sentences: usize, seed: u64) -> Treebank {
    let mut rng = Rng::new(seed);
    let mut sentences = Vec::with_capacity(n_sentences);
    for i in 0..n_sentences {
        let is_pron = i % 5 == 0; // exact 80/20 skew
        let (verb_lemma, verb_en) = *rng.pick(VERBS);
        let tense = if rng.chance(0.5) { "Past" } else { "Pres" };
        let verb = Draft {
            form: format!("{verb_lemma}{}", if tense == "Past" { "to" } else { "te" }),
            lemma: verb_lemma.to_string(),
            upos: "VERB",
            feats: vec![("Tense", tense.to_string())],
            head: usize::MAX,
            deprel: "root",
            english: verb_en.to_string(),
        };
        let subject = if is_pron {
            let (form, person, gender, english) = *rng.pick(PRONOUNS);
            Draft {
                form: form.to_string(),
                lemma: form.to_string(),
                upos: "PRON",
                feats: vec![
                    ("Gender", gender.to_string()),
                    ("Person", person.to_string()),
                ],
                head: usize::MAX,
                deprel: "nsubj",
                english: english.to_string(),
            }
        } else {
            let proper = rng.chance(0.3);
            let (lemma, gender, english) = if proper {
                *rng.pick(PROPER_NOUNS)
            } else {
                *rng.pick(NOUNS)
            };
            Draft {
                form: lemma.to_string(),
                lemma: lemma.to_string(),
                upos: if proper { "PROPN" } else { "NOUN" },
                feats: vec![
                    ("Gender", gender.to_string()),
                    (
                        "Number",
                        if rng.chance(0.3) { "Plur" } else { "Sing" }.to_string(),
                    ),
                ],
                head: usize::MAX,
                deprel: "nsubj",
                english: english.to_string(),
            }
        };
        let advs = |rng: &mut Rng, n: usize| -> Vec<Draft> {
            (0..n)
                .map(|_| {
                    let (form, en) = *rng.pick(ADVERBS);
                    Draft {
                        form: form.to_string(),
                        lemma: form.to_string(),
                        upos: "ADV",
                        feats: vec![],
                        head: usize::MAX,
                        deprel: "advmod",
                        english: en.to_string(),
                    }
                })
                .collect()
        };
        let lead = rng.below(3);
        let mid = rng.below(3);
        let tail = rng.below(2);
        let mut layout: Vec<(Draft, bool)> = Vec::new(); // (draft, is_subject/verb marker unused)
        for d in advs(&mut rng, lead) {
            layout.push((d, false));
        }
        if is_pron {
            layout.push((verb, false));
            for d in advs(&mut rng, mid) {
                layout.push((d, false));
            }
            layout.push((subject, true));
        } else {
            layout.push((subject, true));
            for d in advs(&mut rng, mid) {
                layout.push((d, false));
            }
            layout.push((verb, false));
        }
        for d in advs(&mut rng, tail) {
            layout.push((d, false));
        }
        let verb_idx = layout.iter().position(|(d, _)| d.upos == "VERB").unwrap();
        for (idx, (d, _)) in layout.iter_mut().enumerate() {
            if idx != verb_idx {
                d.head = verb_idx;
            }
        }
        let drafts: Vec<Draft> = layout.into_iter().map(|(d, _)| d).collect();
        sentences.push(finish_sentence(format!("s{}", i + 1), drafts));
    }
    Treebank {
        language: "syn".into(),
        sentences,
        source_paths: Vec::new(),
    }
}

/// Planted suffix corpus: nouns take suffix "laa" iff Case=Acc. Case and
/// dependency role are decorrelated so Case is the only perfect separator.
pub fn planted_suffix_treebank(n_sentences: usize, seed: u64) -> Treebank {
    let mut rng = Rng::new(seed);
    let mut sentences = Vec::with_capacity(n_sentences);
    for i in 0..n_sentences {
        let (verb_lemma, verb_en) = *rng.pick(VERBS);
        let verb = Draft {
            form: format!("{verb_lemma}te"),
            lemma: verb_lemma.to_string(),
            upos: "VERB",
            feats: vec![("Tense", "Pres".to_string())],
            head: usize::MAX,
            deprel: "root",
            english: verb_en.to_string(),
        };
        let mut nouns: Vec<Draft> = Vec::new();
        let n_nouns = 1 + rng.below(3);
        for k in 0..n_nouns {
            let (lemma, gender, english) = *rng.pick(NOUNS);
            let case = ["Nom", "Acc", "Dat"][rng.below(3)];
            let deprel: &'static str = match (case, k) {
                ("Acc", _) => {
                    if rng.chance(0.5) {
                        "obj"
                    } else {
                        "obl"
                    }
                }
                ("Nom", 0) => "nsubj",
                ("Nom", _) => "obl",
                _ => {
                    if rng.chance(0.5) {
                        "iobj"
                    } else {
                        "obl"
                    }
                }
            };
            let suffix = if case == "Acc" { "laa" } else { "" };
            nouns.push(Draft {
                form: format!("{lemma}{suffix}"),
                lemma: lemma.to_string(),
                upos: "NOUN",
                feats: vec![("Case", case.to_string()), ("Gender", gender.to_string())],
                head: usize::MAX,
                deprel,
                english: english.to_string(),
            });
        }
        let mut drafts = nouns;
        drafts.push(verb);
        let verb_idx = drafts.len() - 1;
        for (idx, d) in drafts.iter_mut().enumerate() {
            if idx != verb_idx {
                d.head = verb_idx;
            }
        }
        sentences.push(finish_sentence(format!("s{}", i + 1), drafts));
    }
    Treebank {
        language: "syn".into(),
        sentences,
        source_paths: Vec::new(),
    }
}

/// Deterministic-dictionary bitext: each of `vocab` source words maps to
/// exactly one target word; sentences are random sequences, targets mirror
/// sources position by position. Returns the bitext and the gold links.
pub fn dictionary_bitext(
    n_pairs: usize,
    vocab: usize,
    seed: u64,
) -> (Bitext, Vec<BTreeSet<(usize, usize)>>) {
    let mut rng = Rng::new(seed);
    let mut src_lines = Vec::with_capacity(n_pairs);
    let mut tgt_lines = Vec::with_capacity(n_pairs);
    let mut gold = Vec::with_capacity(n_pairs);
    for _ in 0..n_pairs {
        let len = 3 + rng.below(6);
        let ids: Vec<usize> = (0..len).map(|_| rng.below(vocab)).collect();
        let src: Vec<String> = ids.iter().map(|k| format!("s{k:02}")).collect();
        let tgt: Vec<String> = ids.iter().map(|k| format!("t{k:02}")).collect();
        gold.push((0..len).map(|k| (k, k)).collect());
        src_lines.push(src.join(" "));
        tgt_lines.push(tgt.join(" "));
    }
    let src_refs: Vec<&str> = src_lines.iter().map(String::as_str).collect();
    let tgt_refs: Vec<&str> = tgt_lines.iter().map(String::as_str).collect();
    let bt = build_bitext(&src_refs, &tgt_refs, crate::bitext::DEFAULT_MAX_LEN).unwrap();
    (bt, gold)
}

/// Divergence bitext: English "rice" translates to "bhaat" when "cooked"
/// is in context and "tandul" otherwise. A third of the pairs mention no
/// rice at all (half of those still with "cooked") so the verbs are
/// identifiable independently of the rice words.
pub fn divergence_bitext(n_pairs: usize, seed: u64) -> Bitext {
    let mut rng = Rng::new(seed);
    const SUBJECTS: &[(&str, &str)] = &[("she", "ti"), ("he", "to"), ("mother", "aai")];
    const TIMES: &[(&str, &str)] = &[("today", "aaj"), ("yesterday", "kal")];
    const OTHER_VERBS: &[(&str, &str)] = &[("bought", "ghetla"), ("sells", "vikto")];
    const OTHER_NOUNS: &[(&str, &str)] = &[("beans", "usal"), ("bread", "pav"), ("milk", "dudh")];
    let mut src_lines = Vec::with_capacity(n_pairs);
    let mut tgt_lines = Vec::with_capacity(n_pairs);
    for i in 0..n_pairs {
        let (subj_en, subj_l2) = *rng.pick(SUBJECTS);
        let (time_en, time_l2) = *rng.pick(TIMES);
        if i % 3 == 2 {
            // no rice: decorrelates the verbs from the rice words
            let (noun_en, noun_l2) = *rng.pick(OTHER_NOUNS);
            let (verb_en, verb_l2) = if i % 2 == 0 {
                ("cooked", "shijvla")
            } else {
                *rng.pick(OTHER_VERBS)
            };
            // sometimes an adjective, for the adjective materials
            if rng.chance(0.5) {
                src_lines.push(format!("{subj_en} {verb_en} fresh {noun_en} {time_en}"));
                tgt_lines.push(format!("{subj_l2} {verb_l2} taaje {noun_l2} {time_l2}"));
            } else {
                src_lines.push(format!("{subj_en} {verb_en} {noun_en} {time_en}"));
                tgt_lines.push(format!("{subj_l2} {verb_l2} {noun_l2} {time_l2}"));
            }
            continue;
        }
        // rice pairs: 60% cooked → bhaat, 40% other verb → tandul
        if i % 5 < 3 {
            src_lines.push(format!("{subj_en} cooked rice {time_en}"));
            tgt_lines.push(format!("{subj_l2} shijvla bhaat {time_l2}"));
        } else {
            let (verb_en, verb_l2) = *rng.pick(OTHER_VERBS);
            src_lines.push(format!("{subj_en} {verb_en} rice {time_en}"));
            tgt_lines.push(format!("{subj_l2} {verb_l2} tandul {time_l2}"));
        }
    }
    let src_refs: Vec<&str> = src_lines.iter().map(String::as_str).collect();
    let tgt_refs: Vec<&str> = tgt_lines.iter().map(String::as_str).collect();
    build_bitext(&src_refs, &tgt_refs, crate::bitext::DEFAULT_MAX_LEN).unwrap()
}

/// Sense lexicon covering the [`divergence_bitext`] vocabulary: the food
/// nouns, the verbs (indexed by their surface forms so the first-sense
/// lookup works on raw bitext tokens), and one adjective antonym pair.
pub fn vocab_lexicon_tsv() -> &'static str {
    "entity.n.01\tn\tentity\t\t\tthat which exists\n\
     food.n.01\tn\tfood\tentity.n.01\t\tanything eaten\n\
     grain.n.01\tn\tgrain\tfood.n.01\t\tseeds used as food\n\
     rice.n.01\tn\trice\tgrain.n.01\t\tcereal grain\n\
     beans.n.01\tn\tbeans\tfood.n.01\t\tedible seeds\n\
     bread.n.01\tn\tbread\tfood.n.01\t\tbaked staple\n\
     milk.n.01\tn\tmilk\tfood.n.01\t\tdairy liquid\n\
     cook.v.01\tv\tcook,cooked\t\t\tprepare food by heating\n\
     buy.v.01\tv\tbuy,bought\t\t\tobtain for money\n\
     sell.v.01\tv\tsell,sells\t\t\texchange for money\n\
     fresh.a.01\ta\tfresh,new-made\t\tstale.a.01\trecently made\n\
     stale.a.01\ta\tstale\t\tfresh.a.01\tno longer fresh\n"
}

/// The ten-synset fixture lexicon used across tests: a small noun taxonomy
/// under `entity.n.01` plus one adjective antonym pair.
pub fn fixture_lexicon_tsv() -> &'static str {
    "entity.n.01\tn\tentity\t\t\tthat which exists\n\
     object.n.01\tn\tobject\tentity.n.01\t\ta physical thing\n\
     animal.n.01\tn\tanimal,beast\tobject.n.01\t\ta living organism\n\
     canine.n.01\tn\tcanine\tanimal.n.01\t\ta dog-like animal\n\
     dog.n.01\tn\tdog,puppy\tcanine.n.01\t\ta domesticated canine\n\
     cat.n.01\tn\tcat,kitten\tanimal.n.01\t\ta small feline\n\
     food.n.01\tn\tfood\tobject.n.01\t\tanything eaten\n\
     fruit.n.01\tn\tfruit\tfood.n.01\t\tsweet plant product\n\
     apple.n.01\tn\tapple\tfruit.n.01\t\ta round fruit\n\
     tool.n.01\tn\ttool,hammer\tobject.n.01\t\ta work instrument\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treebank::{serialize_conllu, validate};

    #[test]
    fn smoke_treebank_is_valid_and_deterministic() {
        let tb1 = smoke_treebank(50, 11);
        let tb2 = smoke_treebank(50, 11);
        assert_eq!(serialize_conllu(&tb1), serialize_conllu(&tb2));
        assert!(validate(&tb1).is_empty());
        assert_eq!(tb1.sentences.len(), 50);
    }

    #[test]
    fn smoke_treebank_covers_all_relations() {
        let tb = smoke_treebank(300, 11);
        for deprel in ["nsubj", "obj", "amod", "nummod", "case", "advmod"] {
            let count = tb
                .sentences
                .iter()
                .flat_map(|s| &s.tokens)
                .filter(|t| t.deprel == deprel)
                .count();
            assert!(count > 20, "relation {deprel} too rare: {count}");
        }
    }

    #[test]
    fn planted_word_order_is_exact() {
        let tb = planted_word_order_treebank(500, 7);
        assert!(validate(&tb).is_empty());
        for sent in &tb.sentences {
            let verb = sent.tokens.iter().find(|t| t.upos == "VERB").unwrap();
            let subj = sent.tokens.iter().find(|t| t.deprel == "nsubj").unwrap();
            if subj.upos == "PRON" {
                assert!(subj.id > verb.id);
            } else {
                assert!(subj.id < verb.id);
            }
        }
        let pron = tb
            .sentences
            .iter()
            .filter(|s| s.tokens.iter().any(|t| t.upos == "PRON"))
            .count();
        assert_eq!(pron, 100); // exact 20%
    }

    #[test]
    fn planted_suffix_is_exact() {
        let tb = planted_suffix_treebank(300, 13);
        assert!(validate(&tb).is_empty());
        for sent in &tb.sentences {
            for tok in &sent.tokens {
                if tok.upos != "NOUN" {
                    continue;
                }
                let acc = tok.feats.get("Case").map(String::as_str) == Some("Acc");
                assert_eq!(tok.form.ends_with("laa") && tok.form != tok.lemma, acc);
            }
        }
    }

    #[test]
    fn dictionary_bitext_is_consistent() {
        let (bt, gold) = dictionary_bitext(50, 30, 3);
        assert_eq!(bt.pairs.len(), 50);
        assert_eq!(gold.len(), 50);
        for (pair, links) in bt.pairs.iter().zip(&gold) {
            assert_eq!(pair.source.len(), pair.target.len());
            assert_eq!(links.len(), pair.source.len());
        }
    }

    #[test]
    fn fixture_lexicon_parses() {
        let lex = crate::lexicon::parse_sense_lexicon(fixture_lexicon_tsv()).unwrap();
        assert_eq!(lex.synsets.len(), 10);
    }
}
