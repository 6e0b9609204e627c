//! Words in a free group, conjugacy-class enumeration and evaluation of
//! affine representations.
//!
//! Letters are signed generator indices: `k > 0` is the generator `a_k`, and
//! `-k` its inverse. In text form generators are `a, b, c, ...` and inverses
//! the matching capitals.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isometry::{AffineIso, LinearIso};
use crate::lorentz::MinkVec;

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FreeWord {
    letters: Vec<i32>,
}

fn letter_key(l: i32) -> (u32, bool) {
    (l.unsigned_abs(), l < 0)
}

fn cmp_letters(a: &[i32], b: &[i32]) -> Ordering {
    a.iter()
        .map(|&l| letter_key(l))
        .cmp(b.iter().map(|&l| letter_key(l)))
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    /// Freely reduces a letter sequence. Zero is not a letter.
    pub fn reduce(letters: &[i32]) -> Result<FreeWord> {
        let mut out: Vec<i32> = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 {
                return Err(Error::InvalidGenerator(0));
            }
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Ok(FreeWord { letters: out })
    }

    pub fn generator(i: i32) -> Result<FreeWord> {
        FreeWord::reduce(&[i])
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used.
    pub fn max_generator(&self) -> usize {
        self.letters
            .iter()
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut v = self.letters.clone();
        v.extend_from_slice(&other.letters);
        FreeWord::reduce(&v).expect("letters already valid")
    }

    pub fn pow(&self, n: i32) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(FreeWord::identity(), |acc, _| acc.concat(&base))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&f), Some(&l)) => self.len() == 1 || f != -l,
            _ => true,
        }
    }

    /// Strips matching inverse pairs from the two ends.
    pub fn cyclic_reduce(&self) -> FreeWord {
        let l = &self.letters;
        let (mut i, mut j) = (0, l.len());
        while j - i >= 2 && l[i] == -l[j - 1] {
            i += 1;
            j -= 1;
        }
        FreeWord {
            letters: l[i..j].to_vec(),
        }
    }

    /// The rotation starting at letter `k`.
    pub fn rotate(&self, k: usize) -> FreeWord {
        let mut v = self.letters[k..].to_vec();
        v.extend_from_slice(&self.letters[..k]);
        FreeWord { letters: v }
    }

    /// Minimal representative of the conjugacy class of this word or its
    /// inverse, in the order `a < A < b < B < ...`.
    pub fn canonical(&self) -> FreeWord {
        let c = self.cyclic_reduce();
        if c.is_empty() {
            return c;
        }
        let inv = c.inverse();
        let n = c.len();
        let mut best = c.letters.clone();
        let mut scratch = Vec::with_capacity(n);
        for base in [&c.letters, &inv.letters] {
            for k in 0..n {
                scratch.clear();
                scratch.extend_from_slice(&base[k..]);
                scratch.extend_from_slice(&base[..k]);
                if cmp_letters(&scratch, &best) == Ordering::Less {
                    std::mem::swap(&mut best, &mut scratch);
                }
            }
        }
        FreeWord { letters: best }
    }

    /// Exponent sums, one entry per generator up to `rank`.
    pub fn abelianization(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0i64; rank.max(self.max_generator())];
        for &l in &self.letters {
            v[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        v
    }
}

impl PartialOrd for FreeWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex order: length first, then letters with `a < A < b < B`.
impl Ord for FreeWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| cmp_letters(&self.letters, &other.letters))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.letters {
            let i = l.unsigned_abs();
            let c = if i <= 26 {
                char::from(b'a' + (i - 1) as u8)
            } else {
                '?'
            };
            if l > 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{}", c.to_ascii_uppercase())?;
            }
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = Error;

    /// Parses `aBab`-style words; `1` or the empty string is the identity.
    fn from_str(s: &str) -> Result<FreeWord> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(FreeWord::identity());
        }
        let letters = s
            .chars()
            .map(|c| match c {
                'a'..='z' => Ok(c as i32 - 'a' as i32 + 1),
                'A'..='Z' => Ok(-(c as i32 - 'A' as i32 + 1)),
                _ => Err(Error::Domain(format!("invalid letter {c:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        FreeWord::reduce(&letters)
    }
}

impl Serialize for FreeWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FreeWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn letters_of_rank(rank: usize) -> Vec<i32> {
    (1..=rank as i32).flat_map(|i| [i, -i]).collect()
}

fn dfs(prefix: &mut Vec<i32>, alphabet: &[i32], max_len: usize, out: &mut Vec<FreeWord>) {
    let w = FreeWord {
        letters: prefix.clone(),
    };
    if w.is_cyclically_reduced() && w.canonical() == w {
        out.push(w);
    }
    if prefix.len() == max_len {
        return;
    }
    let last = *prefix.last().expect("nonempty prefix");
    for &l in alphabet {
        if l != -last {
            prefix.push(l);
            dfs(prefix, alphabet, max_len, out);
            prefix.pop();
        }
    }
}

/// Canonical representatives of all nontrivial conjugacy classes (up to
/// inversion) with cyclically reduced length at most `max_len`, in shortlex
/// order.
pub fn enumerate_classes(rank: usize, max_len: usize) -> Vec<FreeWord> {
    if rank == 0 || max_len == 0 {
        return Vec::new();
    }
    let alphabet = letters_of_rank(rank);
    let mut words: Vec<FreeWord> = alphabet
        .par_iter()
        .flat_map_iter(|&first| {
            let mut out = Vec::new();
            dfs(&mut vec![first], &alphabet, max_len, &mut out);
            out
        })
        .collect();
    words.sort();
    words
}

/// The lower Christoffel word with `p` letters `a` and `q` letters `b`.
pub fn christoffel_primitive(p: i64, q: i64) -> Result<FreeWord> {
    if p < 0 || q < 0 || gcd(p, q) != 1 {
        return Err(Error::NonCoprime(p, q));
    }
    let n = p + q;
    let letters: Vec<i32> = (1..=n)
        .map(|i| if (i * q) / n == ((i - 1) * q) / n { 1 } else { 2 })
        .collect();
    FreeWord::reduce(&letters)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Canonical representatives of the primitive conjugacy classes of F2 (up to
/// inversion) of length at most `max_len`, in shortlex order.
pub fn primitive_classes(max_len: usize) -> Vec<FreeWord> {
    let m = max_len as i64;
    let mut out = Vec::new();
    for p in 0..=m {
        for q in -m..=m {
            if p + q.abs() > m || gcd(p, q) != 1 || (p == 0 && q < 0) {
                continue;
            }
            let w = christoffel_primitive(p, q.abs()).expect("coprime");
            let w = if q < 0 {
                FreeWord {
                    letters: w.letters.iter().map(|&l| if l == 2 { -2 } else { l }).collect(),
                }
            } else {
                w
            };
            out.push(w.canonical());
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Translational parts of the generators of an affine deformation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cocycle {
    pub u_gen: Vec<MinkVec>,
}

impl Cocycle {
    pub fn new(u_gen: Vec<MinkVec>) -> Self {
        Cocycle { u_gen }
    }

    pub fn zero(rank: usize) -> Self {
        Cocycle::new(vec![MinkVec::ZERO; rank])
    }

    /// The coboundary `a_i -> v - L(a_i) v`.
    pub fn coboundary(gens: &[LinearIso], v: MinkVec) -> Self {
        Cocycle::new(gens.iter().map(|a| v - a.apply(v)).collect())
    }

    pub fn rank(&self) -> usize {
        self.u_gen.len()
    }

    pub fn scale(&self, s: f64) -> Cocycle {
        Cocycle::new(self.u_gen.iter().map(|u| u.scale(s)).collect())
    }

    pub fn add(&self, other: &Cocycle) -> Cocycle {
        Cocycle::new(
            self.u_gen
                .iter()
                .zip(&other.u_gen)
                .map(|(a, b)| *a + *b)
                .collect(),
        )
    }

    /// Flattened coordinates in R^{3r}.
    pub fn to_flat(&self) -> Vec<f64> {
        self.u_gen.iter().flat_map(|u| u.to_array()).collect()
    }

    pub fn from_flat(v: &[f64]) -> Self {
        Cocycle::new(
            v.chunks(3)
                .map(|c| MinkVec::new(c[0], c[1], c[2]))
                .collect(),
        )
    }
}

fn check_word(rank: usize, word: &FreeWord) -> Result<()> {
    match word.letters.iter().find(|l| l.unsigned_abs() as usize > rank) {
        Some(&l) => Err(Error::InvalidGenerator(l)),
        None => Ok(()),
    }
}

/// Linear part of a word.
pub fn eval_linear(gens: &[LinearIso], word: &FreeWord) -> Result<LinearIso> {
    check_word(gens.len(), word)?;
    Ok(word.letters.iter().fold(LinearIso::identity(), |acc, &l| {
        let a = gens[l.unsigned_abs() as usize - 1];
        acc.compose(&if l > 0 { a } else { a.inverse() })
    }))
}

/// The affine isometry of a word, by left-folding generator compositions.
pub fn eval_affine(gens: &[LinearIso], u: &Cocycle, word: &FreeWord) -> Result<AffineIso> {
    if u.rank() != gens.len() {
        return Err(Error::Dimension(format!(
            "{} generators but {} translational parts",
            gens.len(),
            u.rank()
        )));
    }
    check_word(gens.len(), word)?;
    let affine: Vec<AffineIso> = gens
        .iter()
        .zip(&u.u_gen)
        .map(|(a, t)| AffineIso::new(*a, *t))
        .collect();
    Ok(word.letters.iter().fold(AffineIso::identity(), |acc, &l| {
        let g = affine[l.unsigned_abs() as usize - 1];
        acc.compose(&if l > 0 { g } else { g.inverse() })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(FreeWord::reduce(&[1, -1, 2]).unwrap(), w("b"));
        assert!(FreeWord::reduce(&[]).unwrap().is_empty());
        assert!(FreeWord::reduce(&[1, 2, -2, -1]).unwrap().is_empty());
        assert_eq!(FreeWord::reduce(&[1, 0]), Err(Error::InvalidGenerator(0)));
    }

    #[test]
    fn display_roundtrip() {
        let x = FreeWord::reduce(&[1, -2, 2, 2, -1, 3]).unwrap();
        assert_eq!(x.to_string(), "abAc");
        assert_eq!(w(&x.to_string()), x);
        assert_eq!(FreeWord::identity().to_string(), "1");
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(w("Ab").canonical(), w("aB"));
        assert_eq!(w("ba").canonical(), w("ab"));
        assert_eq!(w("BA").canonical(), w("ab"));
        assert_eq!(w("bab").canonical(), w("abb"));
        assert_eq!(w("A").canonical(), w("a"));
        assert_eq!(w("bAB").canonical(), w("a"));
        assert_eq!(w("bAb").canonical(), w("aBB"));
    }

    #[test]
    fn enumerate_small() {
        let one = enumerate_classes(2, 1);
        assert_eq!(one, vec![w("a"), w("b")]);
        let two = enumerate_classes(2, 2);
        let strs: Vec<String> = two.iter().map(|x| x.to_string()).collect();
        assert_eq!(strs, ["a", "b", "aa", "ab", "aB", "bb"]);
    }

    #[test]
    fn enumerate_matches_brute_force() {
        // brute force over all letter strings, dedup by canonical form
        let alphabet = [1, -1, 2, -2];
        for n in 1..=5 {
            let mut expected = std::collections::BTreeSet::new();
            let total = 4usize.pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let letters: Vec<i32> = (0..n)
                    .map(|_| {
                        let l = alphabet[c % 4];
                        c /= 4;
                        l
                    })
                    .collect();
                let word = FreeWord { letters };
                if FreeWord::reduce(word.letters()).unwrap().len() == n
                    && word.is_cyclically_reduced()
                {
                    expected.insert(word.canonical());
                }
            }
            let got: Vec<FreeWord> = enumerate_classes(2, n)
                .into_iter()
                .filter(|x| x.len() == n)
                .collect();
            assert_eq!(got, expected.into_iter().collect::<Vec<_>>(), "length {n}");
        }
    }

    #[test]
    fn christoffel_examples() {
        assert_eq!(christoffel_primitive(1, 0).unwrap(), w("a"));
        assert_eq!(christoffel_primitive(0, 1).unwrap(), w("b"));
        assert_eq!(christoffel_primitive(1, 1).unwrap(), w("ab"));
        assert_eq!(christoffel_primitive(2, 1).unwrap(), w("aab"));
        assert_eq!(christoffel_primitive(3, 2).unwrap(), w("aabab"));
        assert_eq!(christoffel_primitive(2, 2), Err(Error::NonCoprime(2, 2)));
        assert_eq!(christoffel_primitive(3, 5).unwrap().abelianization(2), vec![3, 5]);
    }

    #[test]
    fn primitive_list() {
        let p: Vec<String> = primitive_classes(2).iter().map(|x| x.to_string()).collect();
        assert_eq!(p, ["a", "b", "ab", "aB"]);
        assert_eq!(primitive_classes(5).len(), {
            // slopes p/q with p >= 0, |p| + |q| <= 5, coprime, up to sign
            let mut n = 0;
            for a in 0i64..=5 {
                for b in -5i64..=5 {
                    if a + b.abs() <= 5 && gcd(a, b) == 1 && !(a == 0 && b < 0) {
                        n += 1;
                    }
                }
            }
            n
        });
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(w("abA").cyclic_reduce(), w("b"));
        assert_eq!(w("abcBA").cyclic_reduce(), w("c"));
        assert!(w("abA").canonical() == w("b"));
    }
}
