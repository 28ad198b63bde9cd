use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

static LEADING_PUNCT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\p{P}+").unwrap());
static TRAILING_PUNCT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\p{P}+$").unwrap());

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    /// Split leading and trailing punctuation off each word, one token per mark.
    pub split_punctuation: bool,
}

/// Tokens of one segment, with the normalized text they came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSequence {
    pub tokens: Vec<String>,
    pub text: String,
    pub config: TokenizerConfig,
}

impl TokenSequence {
    /// Wraps pre-split tokens; the provenance text is their space-joined form.
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        TokenSequence {
            text: tokens.join(" "),
            tokens,
            config: TokenizerConfig::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

pub fn tokenize(text: &str, config: TokenizerConfig) -> TokenSequence {
    let mut normalized: String = text.nfc().collect();
    if config.lowercase {
        normalized = normalized.to_lowercase();
    }
    let mut tokens = Vec::new();
    for word in normalized.split_whitespace() {
        if !config.split_punctuation {
            tokens.push(word.to_string());
            continue;
        }
        let lead_end = LEADING_PUNCT.find(word).map_or(0, |m| m.end());
        let rest = &word[lead_end..];
        let trail_start = TRAILING_PUNCT.find(rest).map_or(rest.len(), |m| m.start());
        tokens.extend(word[..lead_end].chars().map(String::from));
        if trail_start > 0 {
            tokens.push(rest[..trail_start].to_string());
        }
        tokens.extend(rest[trail_start..].chars().map(String::from));
    }
    TokenSequence {
        tokens,
        text: normalized,
        config,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PUNCT: TokenizerConfig = TokenizerConfig {
        lowercase: true,
        split_punctuation: true,
    };

    /// Reference splitter for the punctuation case, written against a fixed
    /// ASCII punctuation set.
    fn reference_split(text: &str) -> Vec<String> {
        let is_p = |c: char| ",.;:!?\"'()".contains(c);
        let mut out = Vec::new();
        for w in text.to_lowercase().split(' ').filter(|w| !w.is_empty()) {
            let chars: Vec<char> = w.chars().collect();
            let lead = chars.iter().take_while(|c| is_p(**c)).count();
            let trail = chars[lead..].iter().rev().take_while(|c| is_p(**c)).count();
            out.extend(chars[..lead].iter().map(|c| c.to_string()));
            let core: String = chars[lead..chars.len() - trail].iter().collect();
            if !core.is_empty() {
                out.push(core);
            }
            out.extend(chars[chars.len() - trail..].iter().map(|c| c.to_string()));
        }
        out
    }

    #[test]
    fn splits_punctuation() {
        let seq = tokenize("Hello, world", PUNCT);
        assert_eq!(seq.tokens, ["hello", ",", "world"]);
        assert_eq!(seq.tokens, reference_split("Hello, world"));
    }

    #[test]
    fn matches_reference_splitter() {
        for text in ["(Yes!) he said.", "\"Quoted\" words, here...", "don't stop", "a , b"] {
            assert_eq!(tokenize(text, PUNCT).tokens, reference_split(text), "{text}");
        }
    }

    #[test]
    fn empty_and_plain() {
        assert!(tokenize("", PUNCT).is_empty());
        assert!(tokenize("", TokenizerConfig::default()).is_empty());
        let plain = tokenize("a b", TokenizerConfig::default());
        assert_eq!(plain.tokens, ["a", "b"]);
        assert_eq!(plain.tokens.join(" "), plain.text);
    }

    #[test]
    fn keeps_case_and_punct_by_default() {
        assert_eq!(
            tokenize("Hello, World", TokenizerConfig::default()).tokens,
            ["Hello,", "World"]
        );
    }

    #[test]
    fn unicode_punctuation_and_case() {
        let seq = tokenize("«Привет», мир!", PUNCT);
        assert_eq!(seq.tokens, ["«", "привет", "»", ",", "мир", "!"]);
    }

    #[test]
    fn tokens_never_contain_whitespace() {
        let seq = tokenize(" a\u{3000}b\t c \n", PUNCT);
        assert_eq!(seq.tokens, ["a", "b", "c"]);
    }
}
