//! Generate a demo input set: a synthetic 1,200-sentence treebank, a
//! 300-pair bitext with a planted lexical divergence, a matching sense
//! lexicon, and a category config.
//!
//! ```bash
//! cargo run -p grampoint-cli --example gen_fixtures demo/
//! ```

use grampoint::synth;
use grampoint::treebank::serialize_conllu;

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| {
        eprintln!("usage: gen_fixtures <output-dir>");
        std::process::exit(1);
    });
    std::fs::create_dir_all(&dir).expect("create output dir");

    let tb = synth::smoke_treebank(1200, 11);
    std::fs::write(format!("{dir}/demo.conllu"), serialize_conllu(&tb)).unwrap();

    let bt = synth::divergence_bitext(300, 21);
    let src: Vec<String> = bt.pairs.iter().map(|p| p.source.join(" ")).collect();
    let tgt: Vec<String> = bt.pairs.iter().map(|p| p.target.join(" ")).collect();
    std::fs::write(format!("{dir}/demo.en.txt"), src.join("\n") + "\n").unwrap();
    std::fs::write(format!("{dir}/demo.l2.txt"), tgt.join("\n") + "\n").unwrap();

    std::fs::write(format!("{dir}/lexicon.tsv"), synth::vocab_lexicon_tsv()).unwrap();
    std::fs::write(
        format!("{dir}/categories.toml"),
        "[categories]\nfood = [\"food.n.01\"]\n",
    )
    .unwrap();
    println!("wrote demo.conllu, demo.en.txt, demo.l2.txt, lexicon.tsv, categories.toml to {dir}");
}
