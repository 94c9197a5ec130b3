//! Statement normalization: lowercasing, URL/mention stripping, hashtag
//! handling, slang substitution, and punctuation-aware tokenization.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

/// Default slang table shipped with the crate; same content as
/// `data/slang_map.tsv` at the repository root.
const DEFAULT_SLANG_TSV: &str = include_str!("../../../../data/slang_map.tsv");

/// Casual-slang to work-appropriate replacement table.
///
/// Loaded from a two-column TSV (`slang<TAB>replacement`, `#` comments
/// ignored). Replacement values may contain spaces; they are re-tokenized
/// by the normalization pipeline.
#[derive(Debug, Clone, Default)]
pub struct SlangMap {
    entries: HashMap<String, String>,
}

impl SlangMap {
    pub fn new(pairs: impl IntoIterator<Item = (String, String)>) -> Self {
        Self {
            entries: pairs.into_iter().collect(),
        }
    }

    /// The table bundled with the crate (`u` -> `you` and friends).
    pub fn bundled() -> Self {
        Self::parse(DEFAULT_SLANG_TSV, Path::new("<bundled>"))
            .expect("bundled slang map is well-formed")
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut entries = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.splitn(2, '\t');
            let (Some(slang), Some(replacement)) = (fields.next(), fields.next()) else {
                return Err(Error::SlangMapFormat {
                    path: path.to_path_buf(),
                    line: idx + 1,
                });
            };
            if slang.is_empty() || replacement.is_empty() {
                return Err(Error::SlangMapFormat {
                    path: path.to_path_buf(),
                    line: idx + 1,
                });
            }
            entries.insert(slang.to_string(), replacement.to_string());
        }
        Ok(Self { entries })
    }

    pub fn get(&self, token: &str) -> Option<&str> {
        self.entries.get(token).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn pairs(&self) -> Vec<(String, String)> {
        let mut pairs: Vec<_> = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        pairs.sort();
        pairs
    }
}

fn is_url(word: &str) -> bool {
    word.starts_with("http://")
        || word.starts_with("https://")
        || word.starts_with("www.")
        || word.contains("://")
}

fn is_mention(word: &str) -> bool {
    word.contains('@')
}

/// Terminal punctuation kept as standalone tokens.
fn is_terminal_punct(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | ',')
}

/// Splits trailing `. ! ? ,` characters off a word, emitting them as
/// standalone tokens in reading order.
fn push_word_tokens(word: &str, out: &mut Vec<String>) {
    let mut rest = word;
    let mut tail: Vec<String> = Vec::new();
    while let Some(c) = rest.chars().next_back() {
        if is_terminal_punct(c) {
            tail.push(c.to_string());
            rest = &rest[..rest.len() - c.len_utf8()];
        } else {
            break;
        }
    }
    if !rest.is_empty() {
        out.push(rest.to_string());
    }
    out.extend(tail.into_iter().rev());
}

/// Normalizes one raw statement into its token sequence.
///
/// The pipeline is deterministic and applied in this order:
/// 1. lowercase;
/// 2. remove URLs and user mentions;
/// 3. hashtags: drop a statement-final hashtag entirely, otherwise strip
///    the marker and keep the word;
/// 4. replace slang tokens;
/// 5. split on whitespace, keeping terminal `. ! ? ,` as standalone tokens;
/// 6. collapse repeated whitespace.
///
/// Any input maps to a (possibly empty) token list.
pub fn normalize_statement(raw: &str, slang: &SlangMap) -> Vec<String> {
    // (1) + (2)
    let lower = raw.to_lowercase();
    let kept: Vec<&str> = lower
        .split_whitespace()
        .filter(|w| !is_url(w) && !is_mention(w))
        .collect();

    // (3) hashtag handling; '#' never survives into output tokens
    let last = kept.len().wrapping_sub(1);
    let mut words: Vec<String> = Vec::with_capacity(kept.len());
    for (idx, word) in kept.iter().enumerate() {
        if word.starts_with('#') && idx == last {
            continue; // statement-final hashtag dropped
        }
        let stripped: String = word.chars().filter(|&c| c != '#').collect();
        if !stripped.is_empty() {
            words.push(stripped);
        }
    }

    // (4) slang substitution on whole whitespace words
    let replaced: Vec<String> = words
        .into_iter()
        .map(|w| match slang.get(&w) {
            Some(r) => r.to_string(),
            None => w,
        })
        .collect();

    // (5) + (6) tokenize, splitting off terminal punctuation
    let mut tokens = Vec::new();
    for word in &replaced {
        for piece in word.split_whitespace() {
            push_word_tokens(piece, &mut tokens);
        }
    }
    tokens
}
