//! Property tests: corpus serialization round-trips in both formats.

use postag::tag::known_tags;
use postag::{parse_columnar, parse_slash, serialize, Corpus, Format, ParseOptions, Sentence, Token};
use proptest::prelude::*;

fn arb_word() -> impl Strategy<Value = String> {
    // words may themselves contain slashes; the format splits on the
    // last one
    proptest::string::string_regex("[a-zA-Z0-9'/$.,-]{1,8}").unwrap()
}

fn arb_tag() -> impl Strategy<Value = postag::Tag> {
    let tags: Vec<postag::Tag> = known_tags();
    proptest::sample::select(tags)
}

fn arb_corpus() -> impl Strategy<Value = Corpus> {
    let token = (arb_word(), arb_tag()).prop_map(|(w, t)| Token::new(w, Some(t)));
    let sentence = proptest::collection::vec(token, 1..10).prop_map(Sentence::new);
    proptest::collection::vec(sentence, 1..8)
        .prop_map(|sentences| Corpus::new(sentences, "prop"))
}

proptest! {
    #[test]
    fn slash_round_trip(corpus in arb_corpus()) {
        let text = serialize(&corpus, Format::Slash).unwrap();
        let back = parse_slash(&text, ParseOptions::default()).unwrap();
        prop_assert_eq!(corpus.sentences, back.sentences);
    }

    #[test]
    fn columnar_round_trip(corpus in arb_corpus()) {
        let text = serialize(&corpus, Format::Columnar).unwrap();
        let back = parse_columnar(&text, ParseOptions::default()).unwrap();
        prop_assert_eq!(corpus.sentences, back.sentences);
    }

    #[test]
    fn formats_agree(corpus in arb_corpus()) {
        let slash = parse_slash(
            &serialize(&corpus, Format::Slash).unwrap(),
            ParseOptions::default(),
        ).unwrap();
        let columnar = parse_columnar(
            &serialize(&corpus, Format::Columnar).unwrap(),
            ParseOptions::default(),
        ).unwrap();
        prop_assert_eq!(slash.sentences, columnar.sentences);
    }
}
