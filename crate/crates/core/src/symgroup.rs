//! Symmetric-group combinatorics: permutations in one-line notation, strong
//! Bruhat order, intervals and covers, reduced words, and positive
//! distinguished subexpressions.
//!
//! Permutations are 1-indexed: `word[i - 1] = z(i)`. Products compose as
//! functions, `(x * y)(i) = x(y(i))`, so right multiplication by `s_i` swaps
//! the entries in positions `i` and `i + 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    word: Vec<usize>,
}

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &x in &word {
            if x == 0 || x > n || seen[x] {
                return Err(Error::InvalidPermutation { n, word });
            }
            seen[x] = true;
        }
        Ok(Self { word })
    }

    pub fn identity(n: usize) -> Self {
        Self { word: (1..=n).collect() }
    }

    /// The longest element `w0 = (n, n-1, ..., 1)`.
    pub fn longest(n: usize) -> Self {
        Self { word: (1..=n).rev().collect() }
    }

    /// The simple reflection `s_i` exchanging `i` and `i + 1`.
    pub fn simple(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::LetterOutOfRange { index: i, n });
        }
        let mut p = Self::identity(n);
        p.word.swap(i - 1, i);
        Ok(p)
    }

    /// Product `s_{i_1} ... s_{i_m}` of simple reflections; the word need not
    /// be reduced.
    pub fn from_letters(n: usize, letters: &[usize]) -> Result<Self> {
        let mut p = Self::identity(n);
        for &i in letters {
            p = p.mul_simple(i)?;
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.word.len()
    }

    /// `z(i)` for `1 <= i <= n`.
    pub fn at(&self, i: usize) -> usize {
        self.word[i - 1]
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.word.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    /// `self * other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_same_n(self, other)?;
        Ok(Self {
            word: other.word.iter().map(|&j| self.word[j - 1]).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &x) in self.word.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        Self { word: inv }
    }

    /// Coxeter length, the number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.word;
        let mut count = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Right multiplication by `s_i`.
    pub fn mul_simple(&self, i: usize) -> Result<Self> {
        let n = self.n();
        if i == 0 || i >= n {
            return Err(Error::LetterOutOfRange { index: i, n });
        }
        let mut word = self.word.clone();
        word.swap(i - 1, i);
        Ok(Self { word })
    }

    /// Whether right multiplication by `s_i` lowers the length.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.word[i - 1] > self.word[i]
    }

    /// Right multiplication by the transposition of positions `a` and `b`.
    pub fn mul_transposition(&self, a: usize, b: usize) -> Self {
        let mut word = self.word.clone();
        word.swap(a - 1, b - 1);
        Self { word }
    }

    /// All of `S_n` in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Self { word: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }

    /// Strong Bruhat order through the tableau criterion: `x <= y` iff for
    /// every `k` the sorted prefix `x(1..k)` is entrywise below the sorted
    /// prefix `y(1..k)`.
    pub fn bruhat_leq(&self, other: &Self) -> Result<bool> {
        check_same_n(self, other)?;
        let n = self.n();
        let mut xs: Vec<usize> = Vec::with_capacity(n);
        let mut ys: Vec<usize> = Vec::with_capacity(n);
        for k in 0..n.saturating_sub(1) {
            insert_sorted(&mut xs, self.word[k]);
            insert_sorted(&mut ys, other.word[k]);
            if xs.iter().zip(&ys).any(|(a, b)| a > b) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `z . [k] = {z(1), ..., z(k)}` as a sorted set.
    pub fn act_prefix(&self, k: usize) -> Result<Vec<usize>> {
        let n = self.n();
        if k == 0 || k > n {
            return Err(Error::PrefixOutOfRange { k, n });
        }
        let mut set = self.word[..k].to_vec();
        set.sort_unstable();
        Ok(set)
    }

    /// A reduced word for `self`, found by bubble-sorting the one-line word.
    pub fn reduced_word(&self) -> ReducedWord {
        let mut z = self.clone();
        let mut rev = Vec::with_capacity(self.length());
        while let Some(i) = (1..z.n()).find(|&i| z.has_right_descent(i)) {
            z = z.mul_simple(i).expect("descent index in range");
            rev.push(i);
        }
        rev.reverse();
        debug_assert_eq!(rev.len(), self.length());
        ReducedWord {
            n: self.n(),
            letters: rev,
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.word)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.word {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(word: Vec<usize>) -> Result<Self> {
        Self::new(word)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.word
    }
}

fn insert_sorted(v: &mut Vec<usize>, x: usize) {
    let pos = v.partition_point(|&y| y < x);
    v.insert(pos, x);
}

fn check_same_n(x: &Permutation, y: &Permutation) -> Result<()> {
    if x.n() != y.n() {
        return Err(Error::SizeMismatch(x.n(), y.n()));
    }
    Ok(())
}

/// `{z : v <= z <= w}`, in lexicographic order.
pub fn interval(v: &Permutation, w: &Permutation) -> Result<Vec<Permutation>> {
    if !v.bruhat_leq(w)? {
        return Err(Error::NotBelow {
            v: v.word.clone(),
            w: w.word.clone(),
        });
    }
    let mut out = Vec::new();
    for z in Permutation::all(v.n()) {
        if v.bruhat_leq(&z)? && z.bruhat_leq(w)? {
            out.push(z);
        }
    }
    Ok(out)
}

/// Whether `z` covers `y`: `z = y t` for a transposition `t` and
/// `length(z) = length(y) + 1`.
pub fn covers(y: &Permutation, z: &Permutation) -> bool {
    if y.n() != z.n() || z.length() != y.length() + 1 {
        return false;
    }
    let diff: Vec<usize> = (0..y.n()).filter(|&i| y.word[i] != z.word[i]).collect();
    diff.len() == 2 && y.word[diff[0]] == z.word[diff[1]] && y.word[diff[1]] == z.word[diff[0]]
}

/// Every pair `(y, z)` in `perms` with `y` covered by `z`.
pub fn cover_pairs(perms: &[Permutation]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, y) in perms.iter().enumerate() {
        for (j, z) in perms.iter().enumerate() {
            if covers(y, z) {
                out.push((i, j));
            }
        }
    }
    out
}

/// A reduced expression `s_{i_1} ... s_{i_m}` together with its `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ReducedWordRepr", into = "ReducedWordRepr")]
pub struct ReducedWord {
    n: usize,
    letters: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ReducedWordRepr {
    n: usize,
    letters: Vec<usize>,
}

impl TryFrom<ReducedWordRepr> for ReducedWord {
    type Error = Error;

    fn try_from(r: ReducedWordRepr) -> Result<Self> {
        ReducedWord::new(r.n, r.letters)
    }
}

impl From<ReducedWord> for ReducedWordRepr {
    fn from(r: ReducedWord) -> Self {
        ReducedWordRepr {
            n: r.n,
            letters: r.letters,
        }
    }
}

impl ReducedWord {
    pub fn new(n: usize, letters: Vec<usize>) -> Result<Self> {
        let target = Permutation::from_letters(n, &letters)?;
        if target.length() != letters.len() {
            return Err(Error::NotReduced { letters });
        }
        Ok(Self { n, letters })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn target(&self) -> Permutation {
        Permutation::from_letters(self.n, &self.letters).expect("letters validated")
    }
}

/// A subexpression of a reduced word: each position either keeps its simple
/// reflection or is replaced by `1`. Index sets are 1-based positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subexpression {
    word: ReducedWord,
    mask: Vec<bool>,
    j_circ: Vec<usize>,
    j_plus: Vec<usize>,
    j_bullet: Vec<usize>,
}

impl Subexpression {
    /// Builds the subexpression with `mask[l] == true` meaning position `l + 1`
    /// uses `s_{i_l}`, and computes the index sets from the prefix products.
    pub fn from_mask(word: ReducedWord, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != word.len() {
            return Err(Error::SizeMismatch(mask.len(), word.len()));
        }
        let mut prefix = Permutation::identity(word.n);
        let (mut j_circ, mut j_plus, mut j_bullet) = (Vec::new(), Vec::new(), Vec::new());
        for (pos, (&letter, &used)) in word.letters.iter().zip(&mask).enumerate() {
            if !used {
                j_plus.push(pos + 1);
                continue;
            }
            let next = prefix.mul_simple(letter)?;
            if next.length() > prefix.length() {
                j_circ.push(pos + 1);
            } else {
                j_bullet.push(pos + 1);
            }
            prefix = next;
        }
        Ok(Self {
            word,
            mask,
            j_circ,
            j_plus,
            j_bullet,
        })
    }

    pub fn word(&self) -> &ReducedWord {
        &self.word
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn j_circ(&self) -> &[usize] {
        &self.j_circ
    }

    pub fn j_plus(&self) -> &[usize] {
        &self.j_plus
    }

    pub fn j_bullet(&self) -> &[usize] {
        &self.j_bullet
    }

    /// The product of the kept letters.
    pub fn value(&self) -> Permutation {
        let kept: Vec<usize> = self
            .word
            .letters
            .iter()
            .zip(&self.mask)
            .filter(|(_, &u)| u)
            .map(|(&l, _)| l)
            .collect();
        Permutation::from_letters(self.word.n, &kept).expect("letters validated")
    }

    /// Prefix products `v_(0), ..., v_(m)`.
    pub fn prefixes(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.word.n)];
        for (&letter, &used) in self.word.letters.iter().zip(&self.mask) {
            let last = out.last().unwrap();
            let next = if used {
                last.mul_simple(letter).expect("letters validated")
            } else {
                last.clone()
            };
            out.push(next);
        }
        out
    }

    /// Distinguished: whenever `s_{i_j}` lowers `v_(j-1)` it must be used.
    pub fn is_distinguished(&self) -> bool {
        let prefixes = self.prefixes();
        self.word
            .letters
            .iter()
            .enumerate()
            .all(|(j, &letter)| !prefixes[j].has_right_descent(letter) || self.mask[j])
    }

    /// Positive distinguished: `v_(j-1) < v_(j-1) s_{i_j}` at every position.
    pub fn is_positive_distinguished(&self) -> bool {
        let prefixes = self.prefixes();
        self.word
            .letters
            .iter()
            .enumerate()
            .all(|(j, &letter)| !prefixes[j].has_right_descent(letter))
    }

    /// Mask rendered as `1 s3 1 s4 ...`.
    pub fn render(&self) -> String {
        self.word
            .letters
            .iter()
            .zip(&self.mask)
            .map(|(l, &u)| if u { format!("s{l}") } else { "1".to_string() })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// The unique positive distinguished subexpression for `v` inside `w_word`.
///
/// Scanning right to left, the letter at position `l` is kept exactly when it
/// shortens the running right quotient, which starts at `v` and must end at
/// the identity.
pub fn pds(v: &Permutation, w_word: &ReducedWord) -> Result<Subexpression> {
    if v.n() != w_word.n {
        return Err(Error::SizeMismatch(v.n(), w_word.n));
    }
    let w = w_word.target();
    if !v.bruhat_leq(&w)? {
        return Err(Error::NotBelow {
            v: v.word.clone(),
            w: w.word.clone(),
        });
    }
    let mut rest = v.clone();
    let mut mask = vec![false; w_word.len()];
    for (pos, &letter) in w_word.letters.iter().enumerate().rev() {
        if rest.has_right_descent(letter) {
            rest = rest.mul_simple(letter)?;
            mask[pos] = true;
        }
    }
    if !rest.is_identity() {
        return Err(Error::NotBelow {
            v: v.word.clone(),
            w: w.word.clone(),
        });
    }
    let sub = Subexpression::from_mask(w_word.clone(), mask)?;
    debug_assert!(sub.j_bullet.is_empty() && sub.is_positive_distinguished());
    Ok(sub)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(w: &[usize]) -> Permutation {
        Permutation::new(w.to_vec()).unwrap()
    }

    fn word(n: usize, l: &[usize]) -> ReducedWord {
        ReducedWord::new(n, l.to_vec()).unwrap()
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 4, 2]).is_err());
    }

    #[test]
    fn products_compose_right_to_left() {
        // s2 s3 s2 s1 in S4 sends (1,2,3,4) to (4,1,3,2)
        let w = Permutation::from_letters(4, &[2, 3, 2, 1]).unwrap();
        assert_eq!(w.word(), &[4, 1, 3, 2]);
        let w5 = Permutation::from_letters(5, &[2, 3, 1, 4, 3, 2]).unwrap();
        assert_eq!(w5.word(), &[3, 5, 1, 4, 2]);
        let v5 = Permutation::from_letters(5, &[2, 4, 3]).unwrap();
        assert_eq!(v5.word(), &[1, 3, 5, 2, 4]);
    }

    #[test]
    fn length_and_inverse() {
        let z = perm(&[3, 1, 4, 2]);
        assert_eq!(z.length(), 3);
        assert_eq!(z.compose(&z.inverse()).unwrap(), Permutation::identity(4));
        assert_eq!(Permutation::longest(5).length(), 10);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(Permutation::all(1).len(), 1);
        assert_eq!(Permutation::all(4).len(), 24);
        let all5 = Permutation::all(5);
        assert_eq!(all5.len(), 120);
        assert!(all5.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn identity_is_minimum() {
        for y in Permutation::all(4) {
            assert!(Permutation::identity(4).bruhat_leq(&y).unwrap());
            assert!(y.bruhat_leq(&Permutation::longest(4)).unwrap());
        }
    }

    #[test]
    fn bruhat_size_mismatch() {
        assert_eq!(
            Permutation::identity(3).bruhat_leq(&Permutation::identity(4)),
            Err(Error::SizeMismatch(3, 4))
        );
    }

    #[test]
    fn sl4_example_interval() {
        let v = Permutation::from_letters(4, &[3]).unwrap();
        let w = Permutation::from_letters(4, &[2, 3, 2, 1]).unwrap();
        assert!(v.bruhat_leq(&w).unwrap());
        let got = interval(&v, &w).unwrap();
        let mut expected: Vec<Permutation> = [
            &[3][..],
            &[3, 2],
            &[2, 3],
            &[3, 1],
            &[3, 2, 1],
            &[2, 3, 1],
            &[2, 3, 2],
            &[2, 3, 2, 1],
        ]
        .iter()
        .map(|l| Permutation::from_letters(4, l).unwrap())
        .collect();
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn trivial_intervals() {
        assert_eq!(
            interval(&Permutation::identity(3), &Permutation::longest(3)).unwrap().len(),
            6
        );
        let v = perm(&[2, 3, 1, 4]);
        assert_eq!(interval(&v, &v).unwrap(), vec![v.clone()]);
        assert!(matches!(
            interval(&Permutation::longest(3), &Permutation::identity(3)),
            Err(Error::NotBelow { .. })
        ));
    }

    #[test]
    fn cover_examples() {
        let e = Permutation::identity(4);
        let s1 = Permutation::simple(4, 1).unwrap();
        assert!(covers(&e, &s1));
        let s3 = Permutation::simple(4, 3).unwrap();
        let s2s3 = Permutation::from_letters(4, &[2, 3]).unwrap();
        assert!(covers(&s3, &s2s3));
        let s1s2 = Permutation::from_letters(4, &[1, 2]).unwrap();
        assert!(!covers(&e, &s1s2));
        // non-adjacent transposition with a value jump of two
        assert!(covers(&perm(&[1, 3, 2]), &perm(&[3, 1, 2])));
    }

    #[test]
    fn pds_matches_worked_examples() {
        let w = word(6, &[2, 3, 1, 4, 5, 3, 2]);
        let v = Permutation::from_letters(6, &[3, 4, 2]).unwrap();
        let sub = pds(&v, &w).unwrap();
        assert_eq!(sub.render(), "1 s3 1 s4 1 1 s2");
        assert_eq!(sub.j_plus(), &[1, 3, 5, 6]);
        assert_eq!(sub.j_circ(), &[2, 4, 7]);
        assert!(sub.j_bullet().is_empty());
        assert_eq!(sub.value(), v);

        let w = word(5, &[2, 3, 1, 4, 3, 2]);
        let v = Permutation::from_letters(5, &[2, 4, 3]).unwrap();
        assert_eq!(pds(&v, &w).unwrap().render(), "s2 1 1 s4 s3 1");
    }

    #[test]
    fn pds_of_identity_is_all_ones() {
        let w = word(4, &[1, 2, 1, 3]);
        let sub = pds(&Permutation::identity(4), &w).unwrap();
        assert!(sub.mask().iter().all(|&u| !u));
        assert_eq!(sub.j_plus(), &[1, 2, 3, 4]);
    }

    #[test]
    fn pds_rejects_incomparable() {
        let w = word(3, &[1, 2]);
        let v = Permutation::simple(3, 2).unwrap().mul_simple(1).unwrap();
        assert!(matches!(pds(&v, &w), Err(Error::NotBelow { .. })));
    }

    #[test]
    fn act_prefix_examples() {
        let w = perm(&[3, 5, 1, 4, 2]);
        assert_eq!(w.act_prefix(2).unwrap(), vec![3, 5]);
        assert_eq!(Permutation::identity(4).act_prefix(3).unwrap(), vec![1, 2, 3]);
        assert!(w.act_prefix(0).is_err());
        assert!(w.act_prefix(6).is_err());
    }

    #[test]
    fn reduced_word_roundtrip() {
        for z in Permutation::all(5) {
            let rw = z.reduced_word();
            assert_eq!(rw.len(), z.length());
            assert_eq!(rw.target(), z);
        }
        assert!(ReducedWord::new(3, vec![1, 1]).is_err());
    }

    #[test]
    fn json_is_one_line_notation() {
        let z = perm(&[2, 3, 1]);
        assert_eq!(serde_json::to_string(&z).unwrap(), "[2,3,1]");
        let back: Permutation = serde_json::from_str("[2,3,1]").unwrap();
        assert_eq!(back, z);
        assert!(serde_json::from_str::<Permutation>("[2,2,1]").is_err());
        let w = word(4, &[2, 3, 2, 1]);
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(serde_json::from_str::<ReducedWord>(&json).unwrap(), w);
        assert!(serde_json::from_str::<ReducedWord>(r#"{"n":3,"letters":[1,1]}"#).is_err());
    }
}
