//! Channel names.

use std::borrow::Borrow;
use std::fmt;
use std::sync::Arc;

/// A channel name as written in the surface syntax.
///
/// Terms keep their surface names; α-equivalence is decided on the canonical
/// form produced by `canonical()` on terms, where every binder is replaced by
/// its binder index (`#0`, `#1`, ...). Those internal names cannot be written
/// in surface syntax and therefore never clash with user names.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: impl AsRef<str>) -> Name {
        Name(Arc::from(s.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Name for the binder with the given index in a canonical form.
    pub fn indexed(index: usize) -> Name {
        Name::new(format!("#{index}"))
    }

    /// A variant of `self` for which `taken` returns false.
    ///
    /// Trailing `_N` suffixes are stripped first so repeated freshening does
    /// not grow names without bound.
    pub fn fresh(&self, taken: impl Fn(&Name) -> bool) -> Name {
        if !taken(self) {
            return self.clone();
        }
        let base = match self.0.rsplit_once('_') {
            Some((head, tail))
                if !head.is_empty()
                    && !tail.is_empty()
                    && tail.bytes().all(|b| b.is_ascii_digit()) =>
            {
                head
            }
            _ => &self.0,
        };
        (1..)
            .map(|i| Name::new(format!("{base}_{i}")))
            .find(|n| !taken(n))
            .expect("unbounded search")
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl serde::Serialize for Name {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

impl Borrow<str> for Name {
    fn borrow(&self) -> &str {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_strips_numeric_suffix() {
        let x = Name::new("x_1");
        let taken = |n: &Name| ["x_1", "x_2"].contains(&n.as_str());
        assert_eq!(x.fresh(taken).as_str(), "x_3");
        assert_eq!(Name::new("y").fresh(|_| false).as_str(), "y");
        assert_eq!(
            Name::new("a_b").fresh(|n| n.as_str() == "a_b").as_str(),
            "a_b_1"
        );
    }
}
