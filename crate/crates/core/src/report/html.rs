//! Static HTML rendering of a report: an index page plus one page per
//! aspect, no scripts, no external resources, deterministic bytes.
//!
//! Exception rules (non-dominant patterns) are listed first within each
//! point, and jargon in the chrome carries plain-language tooltips.

use std::path::{Path, PathBuf};

use super::translit::TranslitMap;
use super::{Aspect, GrammarPoint, Payload, Report};
use crate::error::Result;
use crate::rules::{ExampleRef, Polarity, Rule};

const STYLE: &str = "\
body{font-family:Georgia,serif;margin:2em auto;max-width:60em;padding:0 1em;color:#222}\
h1,h2,h3{font-family:Helvetica,Arial,sans-serif}\
table{border-collapse:collapse;margin:1em 0}\
td,th{border:1px solid #bbb;padding:0.3em 0.6em;text-align:left;vertical-align:top}\
th{background:#eee}\
mark{background:#ffe08a;padding:0 0.15em}\
.exception{background:#fff3f3}\
.gloss{color:#555;font-style:italic}\
.roman{color:#777}\
.question{margin-top:2em;border-top:2px solid #444;padding-top:0.5em}\
.small{font-size:85%;color:#555}\
nav a{margin-right:1em}";

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
    out
}

/// L2 text with its transliteration in parentheses when a map is present
/// and changes anything.
fn l2(text: &str, translit: Option<&TranslitMap>) -> String {
    let escaped = escape(text);
    match translit {
        Some(map) => {
            let roman = map.apply(text);
            if roman != text {
                format!(
                    "{escaped} <span class=\"roman\">({})</span>",
                    escape(&roman)
                )
            } else {
                escaped
            }
        }
        None => escaped,
    }
}

/// Plain-language tooltips for the linguistic jargon in feature names.
fn feature_label(feature: &str) -> String {
    const TERMS: [(&str, &str); 4] = [
        ("lemma", "lemma — the word's dictionary form"),
        ("upos", "part of speech (noun, verb, ...)"),
        ("deprel", "grammatical relation between a word and its head"),
        ("nbr", "neighboring word"),
    ];
    let escaped = escape(feature);
    for (term, tip) in TERMS {
        if feature.to_lowercase().contains(term) {
            return format!("<abbr title=\"{}\">{escaped}</abbr>", escape(tip));
        }
    }
    escaped
}

fn condition_html(rule: &Rule, translit: Option<&TranslitMap>) -> String {
    if rule.conditions.is_empty() {
        return "<em>always</em>".to_string();
    }
    rule.conditions
        .iter()
        .map(|c| {
            let verb = match c.polarity {
                Polarity::Is => "is",
                Polarity::IsNot => "is not",
            };
            format!(
                "{} {verb} {}",
                feature_label(&c.feature),
                l2(&c.value, translit)
            )
        })
        .collect::<Vec<_>>()
        .join(" <b>and</b> ")
}

fn example_html(example: &ExampleRef, translit: Option<&TranslitMap>) -> String {
    // Highlighting is positional: the Nth whitespace token gets wrapped
    // when N is a highlighted id. Texts built from token forms match this
    // exactly; prose `# text` comments may drift by punctuation.
    let mut words = Vec::new();
    for (i, word) in example.text.split_whitespace().enumerate() {
        let rendered = l2(word, translit);
        if example.highlight.contains(&(i + 1)) {
            words.push(format!("<mark>{rendered}</mark>"));
        } else {
            words.push(rendered);
        }
    }
    let mut out = format!("<li>{}", words.join(" "));
    if let Some(gloss) = &example.gloss {
        out.push_str(&format!(" <span class=\"gloss\">{}</span>", escape(gloss)));
    }
    out.push_str(&format!(
        " <span class=\"small\">[{}]</span></li>",
        escape(&example.sent_id)
    ));
    out
}

fn rule_row(rule: &Rule, translit: Option<&TranslitMap>) -> String {
    let class = if rule.exception {
        " class=\"exception\""
    } else {
        ""
    };
    let mut examples = String::new();
    if !rule.examples.is_empty() {
        examples.push_str("<ul>");
        for e in &rule.examples {
            examples.push_str(&example_html(e, translit));
        }
        examples.push_str("</ul>");
    }
    if !rule.counterexamples.is_empty() {
        examples.push_str("<p class=\"small\">exceptions to this rule:</p><ul>");
        for e in &rule.counterexamples {
            examples.push_str(&example_html(e, translit));
        }
        examples.push_str("</ul>");
    }
    format!(
        "<tr{class}><td>{}</td><td>{}</td><td>{}</td><td>{:.2}</td><td>{}</td></tr>",
        condition_html(rule, translit),
        l2(&rule.prediction, translit),
        rule.support,
        rule.precision,
        examples
    )
}

fn rules_table(rules: &[Rule], translit: Option<&TranslitMap>) -> String {
    if rules.is_empty() {
        return String::new();
    }
    // exceptions first; stable, so support order is kept within each group
    let mut ordered: Vec<&Rule> = rules.iter().collect();
    ordered.sort_by_key(|r| !r.exception);
    let mut out = String::from(
        "<table><tr><th>When</th><th>Then</th>\
         <th><abbr title=\"how many training examples the rule covers\">support</abbr></th>\
         <th><abbr title=\"fraction of covered examples the rule gets right\">precision</abbr></th>\
         <th>Examples</th></tr>",
    );
    for rule in ordered {
        out.push_str(&rule_row(rule, translit));
    }
    out.push_str("</table>");
    out
}

fn metrics_html(point: &GrammarPoint) -> String {
    let Some(m) = &point.metrics else {
        return String::new();
    };
    format!(
        "<p class=\"small\">held-out accuracy {:.2}% vs always-{} baseline {:.2}% \
         (train {}, test {})</p>",
        m.tree_accuracy * 100.0,
        escape(&m.dominant_label),
        m.baseline_accuracy * 100.0,
        m.train_size,
        m.test_size
    )
}

fn payload_html(payload: &Payload, translit: Option<&TranslitMap>) -> String {
    match payload {
        Payload::Suffix {
            inventory,
            sandhi_pairs,
            skipped_unconfident,
        } => {
            let mut out = String::from(
                "<h3>Suffix inventory</h3><table><tr><th>Suffix</th><th>Count</th></tr>",
            );
            let mut entries: Vec<(&String, &u64)> = inventory.iter().collect();
            entries.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
            for (suffix, count) in entries {
                out.push_str(&format!(
                    "<tr><td>-{}</td><td>{count}</td></tr>",
                    l2(suffix, translit)
                ));
            }
            out.push_str("</table>");
            if !sandhi_pairs.is_empty() {
                out.push_str("<p class=\"small\">possible <abbr title=\"sound change at morpheme boundaries\">sandhi</abbr> variants: ");
                let pairs: Vec<String> = sandhi_pairs
                    .iter()
                    .map(|(a, b)| format!("-{} / -{}", l2(a, translit), l2(b, translit)))
                    .collect();
                out.push_str(&pairs.join(", "));
                out.push_str("</p>");
            }
            if *skipped_unconfident > 0 {
                out.push_str(&format!(
                    "<p class=\"small\">{skipped_unconfident} words had no confident segmentation and were left out.</p>"
                ));
            }
            out
        }
        Payload::TranslationSet {
            english,
            candidates,
        } => {
            let mut out = format!(
                "<h3>Translations of \u{201c}{}\u{201d}</h3><table><tr><th>Word</th><th>Count</th></tr>",
                escape(english)
            );
            let mut entries: Vec<(&String, &u64)> = candidates.iter().collect();
            entries.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
            for (word, count) in entries {
                out.push_str(&format!(
                    "<tr><td>{}</td><td>{count}</td></tr>",
                    l2(word, translit)
                ));
            }
            out.push_str("</table>");
            out
        }
        Payload::Categories { categories } => {
            let mut out = String::new();
            for (category, entries) in categories {
                out.push_str(&format!("<h3>{}</h3><table><tr><th>English</th><th>Translations</th><th>Example</th></tr>", escape(category)));
                for entry in entries {
                    let translations: Vec<String> =
                        entry.translations.iter().map(|t| l2(t, translit)).collect();
                    let example = entry
                        .example
                        .as_ref()
                        .map(|e| format!("<ul>{}</ul>", example_html(e, translit)))
                        .unwrap_or_default();
                    out.push_str(&format!(
                        "<tr><td>{}</td><td>{}</td><td>{}</td></tr>",
                        escape(&entry.english),
                        translations.join(", "),
                        example
                    ));
                }
                out.push_str("</table>");
            }
            out
        }
        Payload::Adjectives { entries } => {
            let mut out = String::from(
                "<table><tr><th>Adjective</th><th>Meaning</th><th>Synonyms</th><th>Antonyms</th><th>Translations</th><th>Examples</th></tr>",
            );
            for entry in entries {
                let examples: String = entry
                    .examples
                    .iter()
                    .map(|e| example_html(e, translit))
                    .collect();
                let translations: Vec<String> =
                    entry.translations.iter().map(|t| l2(t, translit)).collect();
                out.push_str(&format!(
                    "<tr><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td><ul>{}</ul></td></tr>",
                    escape(&entry.adjective),
                    escape(&entry.gloss),
                    escape(&entry.synonyms.join(", ")),
                    escape(&entry.antonyms.join(", ")),
                    translations.join(", "),
                    examples
                ));
            }
            out.push_str("</table>");
            out
        }
        Payload::General { summaries } => {
            let mut out = String::new();
            for summary in summaries {
                out.push_str(&format!(
                    "<h3>{}</h3><table><tr><th>Value</th><th>Count</th><th>Word types</th><th>Frequent forms</th></tr>",
                    escape(&summary.attribute)
                ));
                for value in &summary.values {
                    let upos: Vec<String> = value
                        .by_upos
                        .iter()
                        .map(|(u, c)| format!("{} ({c})", escape(u)))
                        .collect();
                    let mut forms = String::from("<ul>");
                    for ef in &value.example_forms {
                        forms.push_str(&format!(
                            "<li>{} <span class=\"small\">(\u{00d7}{}, lemma {})</span><ul>{}</ul></li>",
                            l2(&ef.form, translit),
                            ef.count,
                            l2(&ef.lemma, translit),
                            example_html(&ef.example, translit)
                        ));
                    }
                    forms.push_str("</ul>");
                    out.push_str(&format!(
                        "<tr><td>{}</td><td>{}</td><td>{}</td><td>{}</td></tr>",
                        escape(&value.value),
                        value.total_count,
                        upos.join(", "),
                        forms
                    ));
                }
                out.push_str("</table>");
            }
            out
        }
    }
}

fn point_html(point: &GrammarPoint, translit: Option<&TranslitMap>) -> String {
    let mut out = format!(
        "<section class=\"question\"><h2>{}</h2>",
        escape(&point.question)
    );
    if let Some(dominant) = &point.dominant {
        out.push_str(&format!(
            "<p>Dominant pattern: <b>{}</b> ({:.1}% of cases)</p>",
            l2(&dominant.label, translit),
            dominant.fraction * 100.0
        ));
    }
    out.push_str(&metrics_html(point));
    if point.aspect == Aspect::Suffix && !point.rules.is_empty() {
        // per-suffix view: group rules by what they predict
        let mut by_prediction: std::collections::BTreeMap<&str, Vec<&Rule>> =
            std::collections::BTreeMap::new();
        for rule in &point.rules {
            by_prediction
                .entry(rule.prediction.as_str())
                .or_default()
                .push(rule);
        }
        for (prediction, rules) in by_prediction {
            out.push_str(&format!(
                "<h3>When to use \u{201c}{}\u{201d}</h3>",
                l2(prediction, translit)
            ));
            let owned: Vec<Rule> = rules.into_iter().cloned().collect();
            out.push_str(&rules_table(&owned, translit));
        }
    } else {
        out.push_str(&rules_table(&point.rules, translit));
    }
    if let Some(payload) = &point.payload {
        out.push_str(&payload_html(payload, translit));
    }
    out.push_str("</section>");
    out
}

fn page(title: &str, language: &str, body: &str) -> String {
    format!(
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n\
         <title>{} \u{2014} {}</title>\n<style>{STYLE}</style>\n</head>\n<body>\n\
         <nav><a href=\"index.html\">Overview</a></nav>\n{}\n</body>\n</html>\n",
        escape(title),
        escape(language),
        body
    )
}

/// Write index.html plus one page per aspect into `out_dir`. Returns the
/// paths written. Pure view of the report: same report, same bytes.
pub fn emit_html(
    report: &Report,
    out_dir: &Path,
    translit: Option<&TranslitMap>,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();

    let mut index_body = format!(
        "<h1>Grammar of {}</h1>\
         <p>Materials extracted automatically from an annotated corpus. \
         Rules marked in <span class=\"exception\">red</span> describe exceptions \
         to the dominant patterns.</p><ul>",
        escape(&report.language)
    );
    for aspect in Aspect::ALL {
        let count = report.points.iter().filter(|p| p.aspect == aspect).count();
        index_body.push_str(&format!(
            "<li><a href=\"{slug}.html\">{title}</a> \u{2014} {count} topic{s}</li>",
            slug = aspect.slug(),
            title = aspect.title(),
            count = count,
            s = if count == 1 { "" } else { "s" }
        ));
    }
    index_body.push_str("</ul>");
    index_body.push_str(
        "<h2>Terms used</h2><table>\
         <tr><th>Term</th><th>Meaning</th></tr>\
         <tr><td>lemma</td><td>the word's dictionary form</td></tr>\
         <tr><td>support</td><td>how many corpus examples a rule covers</td></tr>\
         <tr><td>precision</td><td>fraction of covered examples the rule gets right</td></tr>\
         <tr><td>baseline</td><td>always guessing the most common answer</td></tr>\
         </table>",
    );
    index_body.push_str(&format!(
        "<p class=\"small\">report schema {} \u{00b7} configuration digest {}</p>",
        escape(&report.schema_version),
        escape(&report.config_digest)
    ));
    let index_path = out_dir.join("index.html");
    std::fs::write(&index_path, page("Overview", &report.language, &index_body))?;
    written.push(index_path);

    for aspect in Aspect::ALL {
        let mut body = format!("<h1>{}</h1>", aspect.title());
        let points: Vec<&GrammarPoint> = report
            .points
            .iter()
            .filter(|p| p.aspect == aspect)
            .collect();
        if points.is_empty() {
            body.push_str("<p>No materials were extracted for this aspect.</p>");
        }
        for point in points {
            body.push_str(&point_html(point, translit));
        }
        let path = out_dir.join(format!("{}.html", aspect.slug()));
        std::fs::write(&path, page(aspect.title(), &report.language, &body))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Report;

    #[test]
    fn site_has_six_pages_and_is_deterministic() {
        let report = Report::new("xx", "digest", vec![]);
        let dir1 = tempfile::tempdir().unwrap();
        let dir2 = tempfile::tempdir().unwrap();
        let paths1 = emit_html(&report, dir1.path(), None).unwrap();
        let paths2 = emit_html(&report, dir2.path(), None).unwrap();
        assert_eq!(paths1.len(), 6);
        for (a, b) in paths1.iter().zip(&paths2) {
            assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
        }
    }

    #[test]
    fn highlights_wrap_tokens() {
        let example = ExampleRef {
            sent_id: "s1".into(),
            text: "kutra bhunkto .".into(),
            highlight: vec![1, 2],
            gloss: Some("the dog barks".into()),
        };
        let html = example_html(&example, None);
        assert!(html.contains("<mark>kutra</mark>"));
        assert!(html.contains("<mark>bhunkto</mark>"));
        assert!(!html.contains("<mark>.</mark>"));
        assert!(html.contains("the dog barks"));
    }

    #[test]
    fn escapes_html_in_text() {
        let example = ExampleRef {
            sent_id: "s<1>".into(),
            text: "a <b> & c".into(),
            highlight: vec![],
            gloss: None,
        };
        let html = example_html(&example, None);
        assert!(!html.contains("<b>"));
        assert!(html.contains("&lt;b&gt;"));
    }

    #[test]
    fn transliteration_shown_when_it_differs() {
        let map = TranslitMap::from_tsv("k\tK\n").unwrap();
        let html = l2("kutra", Some(&map));
        assert!(html.contains("kutra"));
        assert!(html.contains("(Kutra)"));
        let unchanged = l2("abc", Some(&map));
        assert!(!unchanged.contains("roman"));
    }
}
