use std::fmt;

use crate::error::{Error, Result};

/// Position of a non-degenerate generator: its dimension and its index among
/// the generators of that dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenRef {
    pub dim: u32,
    pub idx: u32,
}

impl GenRef {
    pub fn new(dim: usize, idx: usize) -> Self {
        GenRef {
            dim: dim as u32,
            idx: idx as u32,
        }
    }

    pub fn dim(self) -> usize {
        self.dim as usize
    }

    pub fn idx(self) -> usize {
        self.idx as usize
    }
}

/// A simplex in Eilenberg–Zilber normal form: a degeneracy operator applied to
/// a non-degenerate generator.
///
/// The degeneracy operator is stored as the non-decreasing surjection
/// `[degree] -> [generator dim]` it induces on vertices. This is equivalent to
/// the strictly decreasing word `s_{j1} ... s_{jk}` (see [`SimplexTerm::word`])
/// and makes equality of terms plain structural equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexTerm {
    pub gen: GenRef,
    surj: Vec<u8>,
}

impl SimplexTerm {
    /// The non-degenerate term for a generator.
    pub fn generator(gen: GenRef) -> Self {
        SimplexTerm {
            gen,
            surj: (0..=gen.dim as u8).collect(),
        }
    }

    /// Builds a term from a degeneracy word applied outermost-first, so
    /// `[j1, j2]` means `s_{j1} s_{j2} g`. Any word is accepted and normalized.
    pub fn from_word(gen: GenRef, word: &[usize]) -> Result<Self> {
        let mut t = SimplexTerm::generator(gen);
        for &j in word.iter().rev() {
            t = t.degeneracy(j)?;
        }
        Ok(t)
    }

    /// Builds a term from a vertex surjection `[n] -> [gen.dim]`.
    pub fn from_surjection(gen: GenRef, surj: Vec<u8>) -> Result<Self> {
        let ok = surj.first() == Some(&0)
            && surj.last().map(|&l| l as u32) == Some(gen.dim)
            && surj.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1);
        if !ok {
            return Err(Error::InvalidInput(format!("{surj:?} is not a degeneracy surjection")));
        }
        Ok(SimplexTerm { gen, surj })
    }

    pub(crate) fn from_parts_unchecked(gen: GenRef, surj: Vec<u8>) -> Self {
        SimplexTerm { gen, surj }
    }

    pub fn degree(&self) -> usize {
        self.surj.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.surj.len() != self.gen.dim as usize + 1
    }

    pub fn surjection(&self) -> &[u8] {
        &self.surj
    }

    /// Strictly decreasing degeneracy indices, outermost first.
    pub fn word(&self) -> Vec<usize> {
        (0..self.surj.len().saturating_sub(1))
            .rev()
            .filter(|&j| self.surj[j] == self.surj[j + 1])
            .collect()
    }

    /// `s_i` applied to this term.
    pub fn degeneracy(&self, i: usize) -> Result<Self> {
        let n = self.degree();
        if i > n {
            return Err(Error::IndexOutOfRange { index: i, limit: n });
        }
        let mut surj = Vec::with_capacity(self.surj.len() + 1);
        surj.extend_from_slice(&self.surj[..=i]);
        surj.extend_from_slice(&self.surj[i..]);
        Ok(SimplexTerm { gen: self.gen, surj })
    }

    /// Precomposes with a further surjection `[m] -> [degree]`.
    pub fn degenerate_by(&self, outer: &[u8]) -> Self {
        SimplexTerm {
            gen: self.gen,
            surj: outer.iter().map(|&j| self.surj[j as usize]).collect(),
        }
    }
}

impl fmt::Display for SimplexTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.word();
        if w.is_empty() {
            write!(f, "g{}.{}", self.gen.dim, self.gen.idx)
        } else {
            let s: Vec<String> = w.iter().map(|j| format!("s{j}")).collect();
            write!(f, "{} g{}.{}", s.join(" "), self.gen.dim, self.gen.idx)
        }
    }
}

/// All non-decreasing surjections `[n] -> [m]`, in lexicographic order.
pub fn surjections(n: usize, m: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if m > n {
        return out;
    }
    let mut cur = vec![0u8];
    fn rec(n: usize, m: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == n + 1 {
            if *cur.last().unwrap() as usize == m {
                out.push(cur.clone());
            }
            return;
        }
        let last = *cur.last().unwrap();
        let remaining = n + 1 - cur.len();
        // stay
        if (m - last as usize) < remaining + 1 {
            cur.push(last);
            rec(n, m, cur, out);
            cur.pop();
        }
        if (last as usize) < m {
            cur.push(last + 1);
            rec(n, m, cur, out);
            cur.pop();
        }
    }
    rec(n, m, &mut cur, &mut out);
    out
}

/// Splits a pair of same-degree vertex maps into their common degeneracy and
/// the jointly injective remainder. Returns `(collapse, left, right)`.
pub(crate) fn split_common_degeneracy(a: &[u8], b: &[u8]) -> (Vec<u8>, Vec<u8>, Vec<u8>) {
    let mut collapse = Vec::with_capacity(a.len());
    let mut left = vec![a[0]];
    let mut right = vec![b[0]];
    collapse.push(0u8);
    for j in 1..a.len() {
        if a[j] == a[j - 1] && b[j] == b[j - 1] {
            collapse.push(*collapse.last().unwrap());
        } else {
            collapse.push(collapse.last().unwrap() + 1);
            left.push(a[j]);
            right.push(b[j]);
        }
    }
    (collapse, left, right)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_normalization() {
        let v = GenRef::new(0, 0);
        let t = SimplexTerm::generator(v).degeneracy(0).unwrap().degeneracy(0).unwrap();
        assert_eq!(t.word(), vec![1, 0]);
        let g = GenRef::new(1, 0);
        let t = SimplexTerm::generator(g).degeneracy(2);
        assert!(t.is_err());
        let t = SimplexTerm::generator(g).degeneracy(1).unwrap().degeneracy(2).unwrap();
        assert_eq!(t.word(), vec![2, 1]);
        // s_0 s_0 = s_1 s_0 as words
        assert_eq!(
            SimplexTerm::from_word(v, &[0, 0]).unwrap(),
            SimplexTerm::from_word(v, &[1, 0]).unwrap()
        );
    }

    #[test]
    fn word_round_trip() {
        let g = GenRef::new(2, 3);
        for n in 2..6 {
            for s in surjections(n, 2) {
                let t = SimplexTerm::from_surjection(g, s.clone()).unwrap();
                let back = SimplexTerm::from_word(g, &t.word()).unwrap();
                assert_eq!(back, t);
            }
        }
    }

    #[test]
    fn surjection_counts_are_binomial() {
        // C(n, m) non-decreasing surjections [n] -> [m]
        assert_eq!(surjections(3, 1).len(), 3);
        assert_eq!(surjections(4, 2).len(), 6);
        assert_eq!(surjections(2, 2).len(), 1);
        assert_eq!(surjections(1, 2).len(), 0);
        assert_eq!(surjections(0, 0), vec![vec![0u8]]);
    }
}
