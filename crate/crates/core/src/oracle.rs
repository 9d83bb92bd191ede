//! Ground-truth brute-force enumeration of burst-deletion balls,
//! burst-insertion balls, and their compositions.
//!
//! Everything here is the reference the closed forms are checked against,
//! so it stays deliberately direct: enumerate, sort, deduplicate.

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::word::{for_each_word, Word};

/// A duplicate-free, lexicographically ordered set of words sharing one
/// length and alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSet {
    q: u32,
    n: usize,
    members: Vec<Word>,
}

impl WordSet {
    /// Builds a set from arbitrary words, sorting and deduplicating.
    pub fn from_members(q: u32, n: usize, mut members: Vec<Word>) -> Result<Self> {
        for m in &members {
            if m.q() != q || m.n() != n {
                return Err(Error::domain(format!(
                    "set member {m} does not have shape (q={q}, n={n})"
                )));
            }
        }
        members.sort_unstable();
        members.dedup();
        Ok(WordSet { q, n, members })
    }

    pub(crate) fn from_unsorted(q: u32, n: usize, mut members: Vec<Word>) -> Self {
        debug_assert!(members.iter().all(|m| m.q() == q && m.n() == n));
        members.sort_unstable();
        members.dedup();
        WordSet { q, n, members }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Word] {
        &self.members
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.members.binary_search(w).is_ok()
    }

    fn require_same_shape(&self, other: &WordSet) -> Result<()> {
        if self.q != other.q || self.n != other.n {
            return Err(Error::domain(format!(
                "set shapes differ: (q={}, n={}) vs (q={}, n={})",
                self.q, self.n, other.q, other.n
            )));
        }
        Ok(())
    }

    pub fn intersection(&self, other: &WordSet) -> Result<WordSet> {
        self.require_same_shape(other)?;
        let members = merge_walk(&self.members, &other.members, true, false);
        Ok(WordSet {
            q: self.q,
            n: self.n,
            members,
        })
    }

    /// Members of `self` not in `other`.
    pub fn difference(&self, other: &WordSet) -> Result<WordSet> {
        self.require_same_shape(other)?;
        let members = merge_walk(&self.members, &other.members, false, true);
        Ok(WordSet {
            q: self.q,
            n: self.n,
            members,
        })
    }

    pub fn union(&self, other: &WordSet) -> Result<WordSet> {
        self.require_same_shape(other)?;
        let mut members = self.members.clone();
        members.extend(other.members.iter().cloned());
        members.sort_unstable();
        members.dedup();
        Ok(WordSet {
            q: self.q,
            n: self.n,
            members,
        })
    }

    pub fn is_subset_of(&self, other: &WordSet) -> bool {
        self.members.iter().all(|m| other.contains(m))
    }
}

/// Walks two sorted vectors; keeps common members (`keep_common`) and/or
/// members only in `a` (`keep_left_only`).
fn merge_walk(a: &[Word], b: &[Word], keep_common: bool, keep_left_only: bool) -> Vec<Word> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                if keep_left_only {
                    out.push(a[i].clone());
                }
                i += 1;
            }
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if keep_common {
                    out.push(a[i].clone());
                }
                i += 1;
                j += 1;
            }
        }
    }
    if keep_left_only {
        out.extend(a[i..].iter().cloned());
    }
    out
}

impl Serialize for WordSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("WordSet", 3)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("n", &self.n)?;
        let texts: Vec<String> = self.members.iter().map(Word::render).collect();
        st.serialize_field("members", &texts)?;
        st.end()
    }
}

/// Removes `x_[pos, pos+b-1]` (1-based).
pub fn burst_delete(x: &Word, b: usize, pos: usize) -> Result<Word> {
    let n = x.n();
    if b == 0 || n < b + 1 {
        return Err(Error::domain(format!(
            "burst deletion needs n >= b+1, got n={n}, b={b}"
        )));
    }
    if pos == 0 || pos > n - b + 1 {
        return Err(Error::domain(format!(
            "deletion position {pos} outside [1, {}]",
            n - b + 1
        )));
    }
    let mut symbols = Vec::with_capacity(n - b);
    symbols.extend_from_slice(&x.symbols()[..pos - 1]);
    symbols.extend_from_slice(&x.symbols()[pos - 1 + b..]);
    Ok(Word::from_parts(x.q(), symbols))
}

/// Inserts the length-b `patch` before position `pos` (1-based, up to n+1).
pub fn burst_insert(x: &Word, b: usize, pos: usize, patch: &Word) -> Result<Word> {
    let n = x.n();
    if b == 0 || patch.n() != b {
        return Err(Error::domain(format!(
            "patch length {} does not match burst length {b}",
            patch.n()
        )));
    }
    if patch.q() != x.q() {
        return Err(Error::domain(
            "patch alphabet differs from the word alphabet",
        ));
    }
    if pos == 0 || pos > n + 1 {
        return Err(Error::domain(format!(
            "insertion position {pos} outside [1, {}]",
            n + 1
        )));
    }
    let mut symbols = Vec::with_capacity(n + b);
    symbols.extend_from_slice(&x.symbols()[..pos - 1]);
    symbols.extend_from_slice(patch.symbols());
    symbols.extend_from_slice(&x.symbols()[pos - 1..]);
    Ok(Word::from_parts(x.q(), symbols))
}

fn require_radius(t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::domain("ball radius t must be at least 1"));
    }
    Ok(())
}

/// All words reachable from `x` by `t` bursts of `b` deletions.
pub fn deletion_ball(x: &Word, b: usize, t: usize) -> Result<WordSet> {
    require_radius(t)?;
    let n = x.n();
    if b == 0 || n < b * t + 1 {
        return Err(Error::domain(format!(
            "deletion ball needs n >= b*t + 1, got n={n}, b={b}, t={t}"
        )));
    }
    let mut stage = vec![x.clone()];
    for _ in 0..t {
        let mut next = Vec::new();
        for w in &stage {
            for pos in 1..=w.n() - b + 1 {
                next.push(burst_delete(w, b, pos)?);
            }
        }
        next.sort_unstable();
        next.dedup();
        stage = next;
    }
    Ok(WordSet::from_unsorted(x.q(), n - b * t, stage))
}

/// All words reachable from `x` by `t` bursts of `b` insertions, over all
/// positions (ascending) and patches (lexicographic).
pub fn insertion_ball(x: &Word, b: usize, t: usize) -> Result<WordSet> {
    require_radius(t)?;
    if b == 0 {
        return Err(Error::domain("burst length b must be at least 1"));
    }
    let q = x.q();
    let mut patches = Vec::new();
    for_each_word(q, b, |p| patches.push(p.clone()));
    let mut stage = vec![x.clone()];
    for _ in 0..t {
        let mut next = Vec::new();
        for w in &stage {
            for pos in 1..=w.n() + 1 {
                for patch in &patches {
                    next.push(burst_insert(w, b, pos, patch)?);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        stage = next;
    }
    Ok(WordSet::from_unsorted(q, x.n() + b * t, stage))
}

/// The fixed-length ball: `t` bursts of deletions followed by `t` bursts
/// of insertions. Every member has the length and alphabet of `x`.
pub fn levenshtein_ball(x: &Word, b: usize, t: usize) -> Result<WordSet> {
    let deleted = deletion_ball(x, b, t)?;
    let mut members = Vec::new();
    for y in deleted.members() {
        members.extend(insertion_ball(y, b, t)?.members().iter().cloned());
    }
    Ok(WordSet::from_unsorted(x.q(), x.n(), members))
}

/// `I_1^b(x) ∩ I_1^b(y)` by direct enumeration; the ground truth for the
/// closed-form pairwise intersection.
pub fn insertion_intersection_oracle(x: &Word, y: &Word, b: usize) -> Result<WordSet> {
    if x.n() != y.n() || x.q() != y.q() {
        return Err(Error::domain(format!(
            "intersection operands must share shape, got (q={}, n={}) vs (q={}, n={})",
            x.q(),
            x.n(),
            y.q(),
            y.n()
        )));
    }
    insertion_ball(x, b, 1)?.intersection(&insertion_ball(y, b, 1)?)
}

/// True iff `t` insertions followed by `t` deletions reach exactly the
/// same set as the deletions-first ball.
pub fn commutativity_check(x: &Word, b: usize, t: usize) -> Result<bool> {
    let deletions_first = levenshtein_ball(x, b, t)?;
    let inflated = insertion_ball(x, b, t)?;
    let mut members = Vec::new();
    for z in inflated.members() {
        members.extend(deletion_ball(z, b, t)?.members().iter().cloned());
    }
    let insertions_first = WordSet::from_unsorted(x.q(), x.n(), members);
    Ok(insertions_first == deletions_first)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str, q: u32) -> Word {
        Word::parse(text, q).unwrap()
    }

    fn renders(set: &WordSet) -> Vec<String> {
        set.members().iter().map(Word::render).collect()
    }

    #[test]
    fn deletions() {
        assert_eq!(burst_delete(&w("0101", 2), 1, 2).unwrap().render(), "001");
        assert_eq!(burst_delete(&w("00110", 2), 2, 3).unwrap().render(), "000");
        assert!(burst_delete(&w("01", 2), 2, 1).is_err());
        assert!(burst_delete(&w("0101", 2), 1, 5).is_err());
    }

    #[test]
    fn insertions() {
        assert_eq!(
            burst_insert(&w("101", 2), 1, 1, &w("0", 2))
                .unwrap()
                .render(),
            "0101"
        );
        assert_eq!(
            burst_insert(&w("000", 2), 2, 4, &w("11", 2))
                .unwrap()
                .render(),
            "00011"
        );
        assert_eq!(
            burst_insert(&w("00", 2), 2, 1, &w("11", 2))
                .unwrap()
                .render(),
            "1100"
        );
        assert!(burst_insert(&w("00", 2), 2, 4, &w("11", 2)).is_err());
        assert!(burst_insert(&w("00", 2), 2, 1, &w("1", 2)).is_err());
    }

    #[test]
    fn deletion_balls() {
        assert_eq!(
            renders(&deletion_ball(&w("0101", 2), 1, 1).unwrap()),
            vec!["001", "010", "011", "101"]
        );
        assert_eq!(
            renders(&deletion_ball(&w("00000", 2), 2, 1).unwrap()),
            vec!["000"]
        );
        assert_eq!(deletion_ball(&w("00110", 2), 2, 1).unwrap().len(), 4);
        assert!(deletion_ball(&w("00110", 2), 2, 3).is_err());
    }

    #[test]
    fn insertion_balls() {
        assert_eq!(
            renders(&insertion_ball(&w("101", 2), 1, 1).unwrap()),
            vec!["0101", "1001", "1010", "1011", "1101"]
        );
        assert_eq!(insertion_ball(&w("000", 2), 2, 1).unwrap().len(), 10);
        assert_eq!(
            renders(&insertion_ball(&w("0", 2), 1, 1).unwrap()),
            vec!["00", "01", "10"]
        );
    }

    #[test]
    fn levenshtein_balls() {
        let ball = levenshtein_ball(&w("0101", 2), 1, 1).unwrap();
        assert_eq!(ball.len(), 11);
        for missing in ["0000", "1000", "1100", "1110", "1111"] {
            assert!(
                !ball.contains(&w(missing, 2)),
                "{missing} should be unreachable"
            );
        }
        assert_eq!(levenshtein_ball(&w("01", 2), 1, 1).unwrap().len(), 4);
        assert_eq!(levenshtein_ball(&w("00000", 2), 2, 1).unwrap().len(), 10);
    }

    #[test]
    fn ball_members_keep_shape() {
        let ball = levenshtein_ball(&w("01201", 3), 2, 1).unwrap();
        assert!(ball.members().iter().all(|m| m.n() == 5 && m.q() == 3));
    }

    #[test]
    fn intersections() {
        assert_eq!(
            renders(&insertion_intersection_oracle(&w("101", 2), &w("001", 2), 1).unwrap()),
            vec!["0101", "1001"]
        );
        let same = insertion_intersection_oracle(&w("000", 2), &w("000", 2), 1).unwrap();
        assert_eq!(same, insertion_ball(&w("000", 2), 1, 1).unwrap());
        assert!(insertion_intersection_oracle(&w("010", 2), &w("111", 2), 1)
            .unwrap()
            .is_empty());
        assert!(insertion_intersection_oracle(&w("010", 2), &w("11", 2), 1).is_err());
    }

    #[test]
    fn commutativity() {
        assert!(commutativity_check(&w("0101", 2), 1, 1).unwrap());
        assert!(commutativity_check(&w("00110", 2), 2, 1).unwrap());
        assert!(commutativity_check(&w("010101", 2), 1, 2).unwrap());
    }

    #[test]
    fn set_operations() {
        let a = WordSet::from_members(2, 2, vec![w("01", 2), w("10", 2), w("01", 2)]).unwrap();
        assert_eq!(a.len(), 2);
        let b = WordSet::from_members(2, 2, vec![w("10", 2), w("11", 2)]).unwrap();
        assert_eq!(renders(&a.intersection(&b).unwrap()), vec!["10"]);
        assert_eq!(renders(&a.difference(&b).unwrap()), vec!["01"]);
        assert_eq!(renders(&a.union(&b).unwrap()), vec!["01", "10", "11"]);
        assert!(a.intersection(&b).unwrap().is_subset_of(&a));
        assert!(WordSet::from_members(2, 2, vec![w("011", 2)]).is_err());
    }

    #[test]
    fn set_serialization() {
        let set = WordSet::from_members(2, 3, vec![w("010", 2), w("001", 2)]).unwrap();
        assert_eq!(
            serde_json::to_string(&set).unwrap(),
            r#"{"q":2,"n":3,"members":["001","010"]}"#
        );
    }
}
