//! Tweet tokenizer.
//!
//! At each position the first matching rule wins:
//!
//! 1. URL: `http://` or `https://` up to the next whitespace
//! 2. mention: `@` followed by letters, digits or `_`
//! 3. hashtag: `#` followed by letters, digits or `_`
//! 4. the longest emoticon from the lexicon's emoticon set
//! 5. word: a run of letters, digits and apostrophes, lowercased
//!
//! Anything else is a separator. Apostrophes only count inside a word, so
//! `'tis'` yields the word `tis`.

use std::borrow::Cow;
use std::ops::Range;

use serde::Serialize;

use crate::lexicon::EmoticonSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Word,
    Hashtag,
    Emoticon,
    Mention,
    Url,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token<'a> {
    pub kind: TokenKind,
    /// Normalized surface: lowercased for words and hashtags, without the
    /// `#`/`@` sigil for hashtags and mentions.
    pub surface: Cow<'a, str>,
    /// Byte range of the token in the raw text, sigil included.
    pub span: Range<usize>,
}

impl Token<'_> {
    pub fn into_owned(self) -> Token<'static> {
        Token {
            kind: self.kind,
            surface: Cow::Owned(self.surface.into_owned()),
            span: self.span,
        }
    }
}

#[inline]
fn is_tag_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

#[inline]
fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\''
}

/// Byte length of the prefix of `s` made of chars satisfying `pred`.
#[inline]
fn run_len(s: &str, pred: impl Fn(char) -> bool) -> usize {
    s.char_indices()
        .find(|&(_, c)| !pred(c))
        .map_or(s.len(), |(i, _)| i)
}

fn lowercase(s: &str) -> Cow<'_, str> {
    if s.chars().any(char::is_uppercase) {
        Cow::Owned(s.to_lowercase())
    } else {
        Cow::Borrowed(s)
    }
}

fn starts_with_ignore_ascii_case(s: &str, prefix: &str) -> bool {
    s.len() >= prefix.len()
        && s.as_bytes()[..prefix.len()].eq_ignore_ascii_case(prefix.as_bytes())
}

fn url_len(rest: &str) -> Option<usize> {
    let scheme = if starts_with_ignore_ascii_case(rest, "http://") {
        7
    } else if starts_with_ignore_ascii_case(rest, "https://") {
        8
    } else {
        return None;
    };
    Some(scheme + run_len(&rest[scheme..], |c| !c.is_whitespace()))
}

fn sigil_len(rest: &str, sigil: char) -> Option<usize> {
    let body = rest.strip_prefix(sigil)?;
    match run_len(body, is_tag_char) {
        0 => None,
        n => Some(sigil.len_utf8() + n),
    }
}

/// Splits raw tweet text into tokens. Never fails; output is ordered by
/// position and non-overlapping.
pub fn tokenize<'a>(raw: &'a str, emoticons: &EmoticonSet) -> Vec<Token<'a>> {
    let mut tokens = Vec::new();
    let mut pos = 0;

    while pos < raw.len() {
        let rest = &raw[pos..];
        let c = rest.chars().next().expect("pos is on a char boundary");

        if c == 'h' || c == 'H' {
            if let Some(len) = url_len(rest) {
                tokens.push(Token {
                    kind: TokenKind::Url,
                    surface: Cow::Borrowed(&rest[..len]),
                    span: pos..pos + len,
                });
                pos += len;
                continue;
            }
        }
        if c == '@' {
            if let Some(len) = sigil_len(rest, '@') {
                tokens.push(Token {
                    kind: TokenKind::Mention,
                    surface: Cow::Borrowed(&rest[1..len]),
                    span: pos..pos + len,
                });
                pos += len;
                continue;
            }
        }
        if c == '#' {
            if let Some(len) = sigil_len(rest, '#') {
                tokens.push(Token {
                    kind: TokenKind::Hashtag,
                    surface: lowercase(&rest[1..len]),
                    span: pos..pos + len,
                });
                pos += len;
                continue;
            }
        }
        if let Some(len) = emoticons.longest_prefix(rest) {
            tokens.push(Token {
                kind: TokenKind::Emoticon,
                surface: Cow::Borrowed(&rest[..len]),
                span: pos..pos + len,
            });
            pos += len;
            continue;
        }
        if is_word_char(c) {
            let len = run_len(rest, is_word_char);
            let run = &rest[..len];
            let lead = run.len() - run.trim_start_matches('\'').len();
            let word = run.trim_matches('\'');
            if !word.is_empty() {
                let start = pos + lead;
                tokens.push(Token {
                    kind: TokenKind::Word,
                    surface: lowercase(word),
                    span: start..start + word.len(),
                });
            }
            pos += len;
            continue;
        }
        pos += c.len_utf8();
    }

    tokens
}

/// Distinct hashtag surfaces in first-occurrence order.
pub fn extract_hashtags(tokens: &[Token<'_>]) -> Vec<String> {
    let mut tags: Vec<String> = Vec::new();
    for t in tokens.iter().filter(|t| t.kind == TokenKind::Hashtag) {
        if !tags.iter().any(|seen| seen == t.surface.as_ref()) {
            tags.push(t.surface.clone().into_owned());
        }
    }
    tags
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emo() -> EmoticonSet {
        EmoticonSet::new([":)", ":(", ">:(", ":-)", "xD"])
    }

    fn kinds_and_surfaces(raw: &str) -> Vec<(TokenKind, String)> {
        tokenize(raw, &emo())
            .into_iter()
            .map(|t| (t.kind, t.surface.into_owned()))
            .collect()
    }

    #[test]
    fn empty_text() {
        assert!(tokenize("", &emo()).is_empty());
        assert!(tokenize("  \t !!", &emo()).is_empty());
    }

    #[test]
    fn plain_sentence() {
        let words: Vec<_> = tokenize("the acting needed to be better", &emo())
            .into_iter()
            .map(|t| {
                assert_eq!(t.kind, TokenKind::Word);
                t.surface.into_owned()
            })
            .collect();
        assert_eq!(words, ["the", "acting", "needed", "to", "be", "better"]);
    }

    #[test]
    fn mixed_kinds() {
        use TokenKind::*;
        assert_eq!(
            kinds_and_surfaces("Loved #Gravity :) http://t.co/x @bob"),
            vec![
                (Word, "loved".into()),
                (Hashtag, "gravity".into()),
                (Emoticon, ":)".into()),
                (Url, "http://t.co/x".into()),
                (Mention, "bob".into()),
            ]
        );
    }

    #[test]
    fn longest_emoticon_wins() {
        use TokenKind::*;
        assert_eq!(
            kinds_and_surfaces("meh >:( ok"),
            vec![(Word, "meh".into()), (Emoticon, ">:(".into()), (Word, "ok".into())]
        );
    }

    #[test]
    fn emoticon_glued_to_words() {
        use TokenKind::*;
        assert_eq!(
            kinds_and_surfaces("great:)movie"),
            vec![(Word, "great".into()), (Emoticon, ":)".into()), (Word, "movie".into())]
        );
    }

    #[test]
    fn emoticons_are_case_exact() {
        use TokenKind::*;
        assert_eq!(kinds_and_surfaces("xD"), vec![(Emoticon, "xD".into())]);
        assert_eq!(kinds_and_surfaces("XD"), vec![(Word, "xd".into())]);
    }

    #[test]
    fn apostrophes_inside_words_only() {
        let toks = tokenize("don't 'quoted' ''", &emo());
        let surfaces: Vec<_> = toks.iter().map(|t| t.surface.as_ref()).collect();
        assert_eq!(surfaces, ["don't", "quoted"]);
        assert_eq!(toks[1].span, 7..13);
    }

    #[test]
    fn bare_sigils_are_separators() {
        use TokenKind::*;
        assert_eq!(
            kinds_and_surfaces("# @ #! @. word"),
            vec![(Word, "word".into())]
        );
    }

    #[test]
    fn url_scheme_case_insensitive_and_http_word() {
        use TokenKind::*;
        assert_eq!(
            kinds_and_surfaces("HTTPS://x.y/Z http"),
            vec![(Url, "HTTPS://x.y/Z".into()), (Word, "http".into())]
        );
    }

    #[test]
    fn hashtag_underscore_and_case() {
        use TokenKind::*;
        assert_eq!(
            kinds_and_surfaces("#Star_Wars rocks"),
            vec![(Hashtag, "star_wars".into()), (Word, "rocks".into())]
        );
    }

    #[test]
    fn unicode_words() {
        let toks = tokenize("Überraschend GUT café", &emo());
        let surfaces: Vec<_> = toks.iter().map(|t| t.surface.as_ref()).collect();
        assert_eq!(surfaces, ["überraschend", "gut", "café"]);
        let raw = "Überraschend GUT café";
        assert_eq!(&raw[toks[0].span.clone()], "Überraschend");
    }

    #[test]
    fn hashtags_deduplicated_in_order() {
        let e = emo();
        assert_eq!(
            extract_hashtags(&tokenize("Loved #Gravity #gravity :)", &e)),
            ["gravity"]
        );
        assert!(extract_hashtags(&tokenize("no tags here", &e)).is_empty());
        assert_eq!(extract_hashtags(&tokenize("#a b #c", &e)), ["a", "c"]);
    }
}
