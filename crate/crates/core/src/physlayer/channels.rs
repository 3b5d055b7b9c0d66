use serde::{Deserialize, Serialize};

/// Largest channel count a [`ChannelSet`] can hold.
pub const MAX_CHANNELS: usize = 256;

const WORDS: usize = MAX_CHANNELS / 64;

/// Fixed-size bit set of channel (wavelength) indices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChannelSet {
    words: [u64; WORDS],
}

/// The set of occupied channels on one link.
pub type LinkLoad = ChannelSet;

impl ChannelSet {
    pub const fn empty() -> Self {
        ChannelSet { words: [0; WORDS] }
    }

    /// Channels `0..n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_CHANNELS);
        let mut s = Self::empty();
        for (w, word) in s.words.iter_mut().enumerate() {
            let lo = w * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = Self::empty();
        for i in it {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        let had = self.words[w] & (1 << b) != 0;
        self.words[w] |= 1 << b;
        !had
    }

    #[inline]
    pub fn remove(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        let had = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        had
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < MAX_CHANNELS && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn union(&self, other: &Self) -> Self {
        let mut s = *self;
        for (a, b) in s.words.iter_mut().zip(other.words) {
            *a |= b;
        }
        s
    }

    #[inline]
    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = *self;
        for (a, b) in s.words.iter_mut().zip(other.words) {
            *a &= b;
        }
        s
    }

    #[inline]
    pub fn difference(&self, other: &Self) -> Self {
        let mut s = *self;
        for (a, b) in s.words.iter_mut().zip(other.words) {
            *a &= !b;
        }
        s
    }

    /// Smallest member, if any.
    #[inline]
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + b)
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let full = ChannelSet::full(156);
        assert_eq!(full.len(), 156);
        assert!(full.contains(155));
        assert!(!full.contains(156));
        assert_eq!(ChannelSet::full(64).len(), 64);
        assert_eq!(ChannelSet::full(256).len(), 256);

        let mut s = ChannelSet::empty();
        assert!(s.is_empty());
        assert_eq!(s.first(), None);
        assert!(s.insert(70));
        assert!(!s.insert(70));
        s.insert(3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 70]);
        assert_eq!(s.first(), Some(3));
        assert!(s.remove(3));
        assert_eq!(s.first(), Some(70));
        let free = full.difference(&s);
        assert_eq!(free.len(), 155);
        assert!(!free.contains(70));
        assert_eq!(free.intersection(&s).len(), 0);
        assert_eq!(free.union(&s), full);
    }
}
