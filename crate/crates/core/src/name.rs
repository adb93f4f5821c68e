//! Interned identifiers.
//!
//! Every variable and symbol name is interned once and leaked, so a [`Name`]
//! is a `Copy` pointer. Equality and hashing are by address; ordering is the
//! lexicographic order on the underlying strings, which is the fixed total
//! order used for free-variable sequences.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Mutex, OnceLock};

#[derive(Clone, Copy)]
pub struct Name(&'static str);

fn interner() -> &'static Mutex<HashSet<&'static str>> {
    static INTERNER: OnceLock<Mutex<HashSet<&'static str>>> = OnceLock::new();
    INTERNER.get_or_init(|| Mutex::new(HashSet::new()))
}

static FRESH_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Name {
    pub fn new(s: &str) -> Name {
        let mut set = interner().lock().expect("name interner poisoned");
        if let Some(existing) = set.get(s) {
            return Name(existing);
        }
        let leaked: &'static str = Box::leak(s.to_owned().into_boxed_str());
        set.insert(leaked);
        Name(leaked)
    }

    pub fn as_str(&self) -> &'static str {
        self.0
    }

    /// A name derived from `base` with a globally unique numeric suffix.
    ///
    /// The counter is never reset, so two calls never return the same name.
    /// Callers that must avoid user-written names (which may coincidentally
    /// look like `x_12`) should use [`Name::fresh_avoiding`].
    pub fn fresh(base: Name) -> Name {
        let stem = base.0.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = match stem.strip_suffix('_') {
            Some(s) if !s.is_empty() && stem.len() < base.0.len() => s,
            _ => base.0,
        };
        let n = FRESH_COUNTER.fetch_add(1, AtomicOrdering::Relaxed);
        Name::new(&format!("{stem}_{n}"))
    }

    pub fn fresh_avoiding(base: Name, avoid: impl Fn(Name) -> bool) -> Name {
        loop {
            let candidate = Name::fresh(base);
            if !avoid(candidate) {
                return candidate;
            }
        }
    }
}

impl PartialEq for Name {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for Name {}

impl Hash for Name {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::ptr::hash(self.0, state)
    }
}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Name {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            Ordering::Equal
        } else {
            self.0.cmp(other.0)
        }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

impl serde::Serialize for Name {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_canonical() {
        let a = Name::new("alpha");
        let b = Name::new(&String::from("alpha"));
        assert_eq!(a, b);
        assert!(std::ptr::eq(a.as_str(), b.as_str()));
        assert_ne!(a, Name::new("beta"));
    }

    #[test]
    fn order_is_lexicographic() {
        let mut names: Vec<Name> = ["z", "y", "ab", "a"].iter().map(|s| Name::new(s)).collect();
        names.sort();
        let strs: Vec<&str> = names.iter().map(|n| n.as_str()).collect();
        assert_eq!(strs, vec!["a", "ab", "y", "z"]);
    }

    #[test]
    fn fresh_names_are_distinct_and_keep_the_stem() {
        let x = Name::new("x");
        let a = Name::fresh(x);
        let b = Name::fresh(a);
        assert_ne!(a, b);
        assert!(a.as_str().starts_with("x_"));
        assert!(b.as_str().starts_with("x_"));
        assert_eq!(b.as_str().matches('_').count(), 1);
    }
}
