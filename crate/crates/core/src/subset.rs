//! Fixed-length inclusion mask over the original features.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A bitmask selecting a subset of `len` features.
///
/// Equality and hashing are on the exact mask, so the type doubles as the
/// evaluation cache key.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FeatureSubset {
    words: Vec<u64>,
    len: usize,
    count: usize,
}

impl FeatureSubset {
    /// An all-zero mask of length `len`.
    pub fn empty(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD)],
            len,
            count: 0,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(len);
        for i in indices {
            if i >= len {
                return Err(Error::InvalidParameter(format!(
                    "feature index {i} out of range for {len} features"
                )));
            }
            s.insert(i);
        }
        Ok(s)
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut s = Self::empty(bits.len());
        for (i, _) in bits.iter().enumerate().filter(|(_, b)| **b) {
            s.insert(i);
        }
        s
    }

    /// Number of original features (mask length).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Number of selected features.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    /// Sets bit `i`; returns true when it was previously clear.
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.len, "feature index {i} out of range");
        let (w, b) = (i / WORD, i % WORD);
        let fresh = self.words[w] >> b & 1 == 0;
        if fresh {
            self.words[w] |= 1 << b;
            self.count += 1;
        }
        fresh
    }

    pub fn remove(&mut self, i: usize) -> bool {
        assert!(i < self.len, "feature index {i} out of range");
        let (w, b) = (i / WORD, i % WORD);
        let present = self.words[w] >> b & 1 == 1;
        if present {
            self.words[w] &= !(1 << b);
            self.count -= 1;
        }
        present
    }

    pub fn toggle(&mut self, i: usize) {
        if !self.remove(i) {
            self.insert(i);
        }
    }

    /// Selected indices in ascending order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.contains(i)).collect()
    }

    pub fn complement(&self) -> Self {
        let mut s = Self::empty(self.len);
        for i in (0..self.len).filter(|&i| !self.contains(i)) {
            s.insert(i);
        }
        s
    }

    /// `'0'`/`'1'` string, feature 0 first.
    pub fn to_bitstring(&self) -> String {
        (0..self.len)
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }
}

impl FromStr for FeatureSubset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Self::empty(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => {
                    out.insert(i);
                }
                '0' => {}
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "mask bitstring contains {other:?}"
                    )))
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for FeatureSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FeatureSubset({})", self.to_bitstring())
    }
}

impl fmt::Display for FeatureSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

impl Serialize for FeatureSubset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_bitstring())
    }
}

impl<'de> Deserialize<'de> for FeatureSubset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn insert_remove_tracks_count() {
        let mut s = FeatureSubset::empty(130);
        assert!(s.insert(0));
        assert!(s.insert(129));
        assert!(!s.insert(129));
        assert_eq!(s.count(), 2);
        assert!(s.remove(0));
        assert!(!s.remove(0));
        assert_eq!(s.count(), 1);
        assert_eq!(s.indices().collect::<Vec<_>>(), vec![129]);
    }

    #[test]
    fn complement_of_full_is_empty() {
        let full = FeatureSubset::full(70);
        assert_eq!(full.count(), 70);
        assert!(full.complement().is_empty());
    }

    #[test]
    fn rejects_bad_bitstring() {
        assert!("01x".parse::<FeatureSubset>().is_err());
    }

    proptest! {
        #[test]
        fn bitstring_round_trip(bits in proptest::collection::vec(any::<bool>(), 1..200)) {
            let s = FeatureSubset::from_bools(&bits);
            prop_assert_eq!(s.count(), bits.iter().filter(|b| **b).count());
            let back: FeatureSubset = s.to_bitstring().parse().unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
