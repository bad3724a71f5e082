//! Title normalization, tokenization and Jaccard similarity.

use std::collections::BTreeSet;
use std::fmt;

use crate::scalar::Scalar;

/// A lowercased title made of alphanumeric words separated by single spaces.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalizedTitle(String);

impl NormalizedTitle {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.0.split(' ').filter(|w| !w.is_empty())
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for NormalizedTitle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for NormalizedTitle {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Lowercases, replaces every non-alphanumeric character with a space,
/// collapses whitespace runs and trims.
///
/// Letters and digits are recognised by Unicode category, so Polish
/// diacritics survive. A character that is still uppercase after
/// lowercasing (no lowercase mapping exists) is treated as a separator.
pub fn normalize_title(raw: &str) -> NormalizedTitle {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for c in raw.chars().flat_map(char::to_lowercase) {
        if c.is_alphanumeric() && !c.is_uppercase() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(c);
        } else {
            pending_space = true;
        }
    }
    NormalizedTitle(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenSet(BTreeSet<String>);

impl TokenSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.contains(token)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn insert(&mut self, token: &str) -> bool {
        debug_assert!(!token.is_empty() && !token.contains(char::is_whitespace));
        self.0.insert(token.to_string())
    }

    pub fn intersection_len(&self, other: &TokenSet) -> usize {
        self.0.intersection(&other.0).count()
    }
}

impl<'a> FromIterator<&'a str> for TokenSet {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        TokenSet(
            iter.into_iter()
                .filter(|t| !t.is_empty())
                .map(str::to_string)
                .collect(),
        )
    }
}

pub fn tokenize(title: &NormalizedTitle) -> TokenSet {
    title.words().collect()
}

/// `|a ∩ b| / |a ∪ b|`, or zero when both sets are empty.
pub fn jaccard<F: Scalar>(a: &TokenSet, b: &TokenSet) -> F {
    let inter = a.intersection_len(b);
    let union = a.len() + b.len() - inter;
    if union == 0 {
        return F::zero();
    }
    F::from_count(inter) / F::from_count(union)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(tokens: &[&str]) -> TokenSet {
        tokens.iter().copied().collect()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_title("Coca-Cola ZERO 0,5L").as_str(), "coca cola zero 0 5l");
        assert_eq!(normalize_title("coca cola").as_str(), "coca cola");
        assert_eq!(normalize_title("  A   B!! ").as_str(), "a b");
        assert_eq!(normalize_title("!!!").as_str(), "");
        assert_eq!(normalize_title("").as_str(), "");
    }

    #[test]
    fn polish_diacritics_kept() {
        assert_eq!(
            normalize_title("ŻUBRÓWKA Łąck Środek-czyszczący").as_str(),
            "żubrówka łąck środek czyszczący"
        );
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(
            tokenize(&normalize_title("coca cola zero")),
            set(&["coca", "cola", "zero"])
        );
        assert_eq!(tokenize(&normalize_title("a a b")), set(&["a", "b"]));
        assert!(tokenize(&normalize_title("")).is_empty());
    }

    #[test]
    fn jaccard_examples() {
        let abc = set(&["a", "b", "c"]);
        assert_eq!(jaccard::<f64>(&abc, &abc), 1.0);
        assert_eq!(jaccard::<f64>(&set(&["a", "b"]), &set(&["c", "d"])), 0.0);
        assert_eq!(jaccard::<f64>(&abc, &set(&["b", "c", "d"])), 0.5);
        assert_eq!(jaccard::<f32>(&abc, &set(&["b", "c", "d"])), 0.5);
        assert_eq!(jaccard::<f64>(&TokenSet::default(), &TokenSet::default()), 0.0);
    }

    fn token_set() -> impl Strategy<Value = TokenSet> {
        prop::collection::btree_set("[a-f]{1,2}", 0..8).prop_map(TokenSet)
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent_and_clean(raw in any::<String>()) {
            let once = normalize_title(&raw);
            let s = once.as_str();
            prop_assert_eq!(normalize_title(s).as_str().to_string(), s.to_string());
            prop_assert!(!s.contains("  "));
            prop_assert!(!s.starts_with(' ') && !s.ends_with(' '));
            prop_assert!(s.chars().all(|c| c == ' ' || (c.is_alphanumeric() && !c.is_uppercase())));
        }

        #[test]
        fn jaccard_properties(a in token_set(), b in token_set()) {
            let ab = jaccard::<f64>(&a, &b);
            prop_assert_eq!(ab, jaccard::<f64>(&b, &a));
            prop_assert!((0.0..=1.0).contains(&ab));
            if !a.is_empty() {
                prop_assert_eq!(jaccard::<f64>(&a, &a), 1.0);
            }
            if !(a.is_empty() && b.is_empty()) {
                prop_assert_eq!(ab == 0.0, a.intersection_len(&b) == 0);
            }
            let mut a2 = a.clone();
            let mut b2 = b.clone();
            a2.insert("zz");
            b2.insert("zz");
            prop_assert!(jaccard::<f64>(&a2, &b2) >= ab);
        }
    }
}
