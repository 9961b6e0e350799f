use std::fmt;

const WORD: usize = 64;

/// A set of vertex indices drawn from a fixed universe `0..universe`,
/// stored as a packed bit vector.
///
/// Set algebra works a word at a time. Bits at positions `>= universe` are
/// always clear.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
    universe: usize,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            words: vec![0; universe.div_ceil(WORD)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = VertexSet {
            words: vec![u64::MAX; universe.div_ceil(WORD)],
            universe,
        };
        s.trim();
        s
    }

    /// Panics if any member is outside the universe.
    pub fn from_members<I: IntoIterator<Item = usize>>(universe: usize, members: I) -> Self {
        let mut s = VertexSet::empty(universe);
        for v in members {
            s.insert(v);
        }
        s
    }

    fn trim(&mut self) {
        let rem = self.universe % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, v: usize) -> bool {
        assert!(
            v < self.universe,
            "vertex {v} outside universe {}",
            self.universe
        );
        let (w, b) = (v / WORD, v % WORD);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !was
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.universe {
            return false;
        }
        let (w, b) = (v / WORD, v % WORD);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        was
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / WORD] >> (v % WORD) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    /// Complement with respect to the universe.
    pub fn complement(&self) -> VertexSet {
        let mut s = VertexSet {
            words: self.words.iter().map(|w| !w).collect(),
            universe: self.universe,
        };
        s.trim();
        s
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Members strictly greater than `v`.
    pub fn above(&self, v: usize) -> VertexSet {
        let mut s = self.clone();
        let cut = (v + 1).min(self.universe);
        for w in 0..cut / WORD {
            s.words[w] = 0;
        }
        if !cut.is_multiple_of(WORD) {
            s.words[cut / WORD] &= !((1u64 << (cut % WORD)) - 1);
        }
        s
    }

    /// The `rank`-th smallest member (0-based), if it exists.
    pub fn nth(&self, mut rank: usize) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            let c = w.count_ones() as usize;
            if rank < c {
                let mut w = w;
                for _ in 0..rank {
                    w &= w - 1;
                }
                return Some(i * WORD + w.trailing_zeros() as usize);
            }
            rank -= c;
        }
        None
    }

    pub fn first(&self) -> Option<usize> {
        self.nth(0)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_respects_universe() {
        for n in [0, 1, 63, 64, 65, 130] {
            let s = VertexSet::full(n);
            assert_eq!(s.len(), n);
            assert_eq!(s.iter().collect::<Vec<_>>(), (0..n).collect::<Vec<_>>());
            assert!(s.complement().is_empty());
        }
    }

    #[test]
    fn nth_and_above() {
        let s = VertexSet::from_members(200, [3, 64, 65, 150, 199]);
        assert_eq!(s.nth(0), Some(3));
        assert_eq!(s.nth(2), Some(65));
        assert_eq!(s.nth(4), Some(199));
        assert_eq!(s.nth(5), None);
        assert_eq!(s.above(64).iter().collect::<Vec<_>>(), vec![65, 150, 199]);
        assert_eq!(
            s.above(63).iter().collect::<Vec<_>>(),
            vec![64, 65, 150, 199]
        );
        assert!(s.above(199).is_empty());
    }

    proptest! {
        #[test]
        fn matches_btreeset(n in 1usize..200, a in prop::collection::vec(0usize..200, 0..60),
                            b in prop::collection::vec(0usize..200, 0..60)) {
            use std::collections::BTreeSet;
            let a: BTreeSet<usize> = a.into_iter().filter(|&v| v < n).collect();
            let b: BTreeSet<usize> = b.into_iter().filter(|&v| v < n).collect();
            let sa = VertexSet::from_members(n, a.iter().copied());
            let sb = VertexSet::from_members(n, b.iter().copied());
            let mut i = sa.clone();
            i.intersect_with(&sb);
            prop_assert_eq!(i.iter().collect::<Vec<_>>(), a.intersection(&b).copied().collect::<Vec<_>>());
            let mut d = sa.clone();
            d.difference_with(&sb);
            prop_assert_eq!(d.iter().collect::<Vec<_>>(), a.difference(&b).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.len(), a.len());
            for (r, v) in a.iter().enumerate() {
                prop_assert_eq!(sa.nth(r), Some(*v));
            }
        }
    }
}
