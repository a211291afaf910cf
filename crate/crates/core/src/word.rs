//! Words in the fundamental group of a closed orientable genus-g surface.
//!
//! The group is presented as `<a1, b1, ..., ag, bg | [a1,b1]...[ag,bg]>`.
//! Lowercase letters are generators and uppercase letters their inverses,
//! so `a1b1A1B1` is the commutator `[a1, b1]`. A letter without an index
//! means index 1.
//!
//! Reduction to short representatives uses Dehn's algorithm for the single
//! relator, extended by an exhaustive search over the length-preserving
//! "half relator" swaps. Taking the shortlex-least word of that closure gives
//! a normal form for elements, and the same construction on cyclic words
//! gives a canonical form for conjugacy classes.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper bound on the number of words explored in a single equal-length
/// closure. Words in this crate stay far below it.
const CLOSURE_CAP: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unexpected character {ch:?} at position {pos}")]
    BadChar { ch: char, pos: usize },
    #[error("generator index must be at least 1 (position {pos})")]
    ZeroIndex { pos: usize },
    #[error("letter {letter} is not a generator of the genus-{genus} surface group")]
    OutOfRange { letter: String, genus: usize },
    #[error("genus must be at least 2, got {0}")]
    BadGenus(usize),
    #[error("identity element: not a closed geodesic")]
    Identity,
}

/// A generator or inverse generator.
///
/// The code is `2 * gen + inv` with generators ordered `a1, b1, a2, b2, ...`,
/// so the natural order on codes is `a1 < A1 < b1 < B1 < a2 < ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u16);

impl Letter {
    pub fn from_code(code: u16) -> Self {
        Letter(code)
    }

    /// `a_i` (1-based handle index).
    pub fn a(handle: usize) -> Self {
        Letter(((handle - 1) * 4) as u16)
    }

    /// `b_i` (1-based handle index).
    pub fn b(handle: usize) -> Self {
        Letter(((handle - 1) * 4 + 2) as u16)
    }

    pub fn code(self) -> u16 {
        self.0
    }

    /// Index of the underlying generator in `a1, b1, a2, b2, ...`.
    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    /// 1-based handle index `i` of `a_i` / `b_i`.
    pub fn handle(self) -> usize {
        self.generator() / 2 + 1
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match (self.generator() % 2, self.is_inverse()) {
            (0, false) => 'a',
            (0, true) => 'A',
            (_, false) => 'b',
            (_, true) => 'B',
        };
        write!(f, "{}{}", base, self.handle())
    }
}

/// A finite word in the generators. Not necessarily reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn pow(&self, n: usize) -> Word {
        Word {
            letters: self.letters.repeat(n),
        }
    }

    /// Largest handle index mentioned by the word.
    pub fn max_handle(&self) -> usize {
        self.letters.iter().map(|l| l.handle()).max().unwrap_or(0)
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().collect();
        let mut letters = Vec::new();
        let mut pos = 0;
        while pos < chars.len() {
            let ch = chars[pos];
            if ch.is_whitespace() || ch == ',' || ch == '.' || ch == '*' {
                pos += 1;
                continue;
            }
            let (gen_offset, inv) = match ch {
                'a' => (0, 0),
                'A' => (0, 1),
                'b' => (2, 0),
                'B' => (2, 1),
                _ => return Err(WordError::BadChar { ch, pos }),
            };
            let start = pos;
            pos += 1;
            let mut index = 0usize;
            let mut digits = 0;
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                index = index * 10 + chars[pos].to_digit(10).unwrap() as usize;
                digits += 1;
                pos += 1;
            }
            if digits == 0 {
                index = 1;
            }
            if index == 0 {
                return Err(WordError::ZeroIndex { pos: start });
            }
            letters.push(Letter(((index - 1) * 4 + gen_offset + inv) as u16));
        }
        Ok(Word { letters })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A cyclically reduced word standing for a conjugacy class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicWord {
    letters: Vec<Letter>,
    canonical: bool,
}

impl CyclicWord {
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn to_word(&self) -> Word {
        Word::new(self.letters.clone())
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_word().fmt(f)
    }
}

impl Serialize for CyclicWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl PartialOrd for CyclicWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CyclicWord {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex(&self.letters, &other.letters).then_with(|| self.canonical.cmp(&other.canonical))
    }
}

/// Shortlex order: shorter first, then lexicographic in letter order.
pub fn shortlex(x: &[Letter], y: &[Letter]) -> Ordering {
    x.len().cmp(&y.len()).then_with(|| x.cmp(y))
}

/// The standard presentation of a closed orientable genus-g surface group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfacePresentation {
    genus: usize,
    relator: Vec<Letter>,
    // successor of each letter along the cyclic relator, and along its inverse
    succ: [Vec<Letter>; 2],
}

impl SurfacePresentation {
    pub fn new(genus: usize) -> Result<Self, WordError> {
        if genus < 2 {
            return Err(WordError::BadGenus(genus));
        }
        let mut relator = Vec::with_capacity(4 * genus);
        for i in 1..=genus {
            let (a, b) = (Letter::a(i), Letter::b(i));
            relator.extend([a, b, a.inverse(), b.inverse()]);
        }
        let n = relator.len();
        let inverse_relator: Vec<Letter> = relator.iter().rev().map(|l| l.inverse()).collect();
        let mut succ = [vec![Letter(0); n], vec![Letter(0); n]];
        for (strand, word) in [&relator, &inverse_relator].into_iter().enumerate() {
            for k in 0..n {
                succ[strand][word[k].code() as usize] = word[(k + 1) % n];
            }
        }
        Ok(SurfacePresentation {
            genus,
            relator,
            succ,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn relator(&self) -> Word {
        Word::new(self.relator.clone())
    }

    /// All `4g` letters in shortlex order.
    pub fn alphabet(&self) -> Vec<Letter> {
        (0..(4 * self.genus) as u16).map(Letter).collect()
    }

    pub fn check(&self, w: &Word) -> Result<(), WordError> {
        match w.letters.iter().find(|l| l.handle() > self.genus) {
            Some(l) => Err(WordError::OutOfRange {
                letter: l.to_string(),
                genus: self.genus,
            }),
            None => Ok(()),
        }
    }

    pub fn parse(&self, s: &str) -> Result<Word, WordError> {
        let w: Word = s.parse()?;
        self.check(&w)?;
        Ok(w)
    }

    fn relator_len(&self) -> usize {
        4 * self.genus
    }

    fn half(&self) -> usize {
        2 * self.genus
    }

    /// The cyclic relator (or its inverse, for strand 1) read from `start`.
    fn relator_from(&self, strand: usize, start: Letter) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.relator_len());
        let mut l = start;
        for _ in 0..self.relator_len() {
            out.push(l);
            l = self.succ[strand][l.code() as usize];
        }
        out
    }

    /// Word equal in the group to the first `k` letters of the relator
    /// strand starting at `start`: the inverse of the complementary piece.
    fn complement(&self, strand: usize, start: Letter, k: usize) -> Vec<Letter> {
        let r = self.relator_from(strand, start);
        r[k.min(r.len())..].iter().rev().map(|l| l.inverse()).collect()
    }

    /// Length of the longest prefix of `letters[i..]` (read linearly, or
    /// cyclically when `cyclic`) that follows the given relator strand.
    fn run_length(&self, letters: &[Letter], i: usize, strand: usize, cyclic: bool) -> usize {
        let n = letters.len();
        let cap = if cyclic { n } else { n - i };
        let mut k = 1;
        while k < cap {
            let prev = letters[(i + k - 1) % n];
            let next = letters[(i + k) % n];
            if self.succ[strand][prev.code() as usize] != next {
                break;
            }
            k += 1;
        }
        k
    }
}

/// Cancel adjacent letter/inverse pairs.
pub fn free_reduce(w: &Word) -> Word {
    Word::new(free_reduce_letters(&w.letters))
}

fn free_reduce_letters(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Inverse word: reversed with every letter inverted.
pub fn invert(w: &Word) -> Word {
    Word::new(w.letters.iter().rev().map(|l| l.inverse()).collect())
}

/// Split a freely reduced word as `conjugator * cyclic * conjugator^-1`.
pub fn cyclic_reduce(w: &Word) -> (CyclicWord, Word) {
    let letters = free_reduce_letters(&w.letters);
    let (mut lo, mut hi) = (0, letters.len());
    while hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    (
        CyclicWord {
            letters: letters[lo..hi].to_vec(),
            canonical: false,
        },
        Word::new(letters[..lo].to_vec()),
    )
}

/// Apply length-decreasing relator replacements until none applies.
fn strict_linear(p: &SurfacePresentation, mut w: Vec<Letter>) -> Vec<Letter> {
    'outer: loop {
        w = free_reduce_letters(&w);
        for i in 0..w.len() {
            for strand in 0..2 {
                let k = p.run_length(&w, i, strand, false);
                if k > p.half() {
                    let k = k.min(p.relator_len());
                    let mut next = w[..i].to_vec();
                    next.extend(p.complement(strand, w[i], k));
                    next.extend_from_slice(&w[i + k..]);
                    w = next;
                    continue 'outer;
                }
            }
        }
        return w;
    }
}

/// Shortest representative of the same group element, shortlex-least among
/// those reachable by relator replacements.
///
/// Idempotent, never increases length, and maps every word representing the
/// identity to the empty word.
pub fn dehn_reduce(w: &Word, p: &SurfacePresentation) -> Word {
    let mut current = strict_linear(p, w.letters.clone());
    'restart: loop {
        let mut seen: HashSet<Vec<Letter>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(current.clone());
        queue.push_back(current.clone());
        while let Some(u) = queue.pop_front() {
            if seen.len() >= CLOSURE_CAP {
                break;
            }
            for i in 0..u.len() {
                for strand in 0..2 {
                    if p.run_length(&u, i, strand, false) < p.half() {
                        continue;
                    }
                    let mut next = u[..i].to_vec();
                    next.extend(p.complement(strand, u[i], p.half()));
                    next.extend_from_slice(&u[i + p.half()..]);
                    let next = strict_linear(p, next);
                    if next.len() < current.len() {
                        current = next;
                        continue 'restart;
                    }
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        let best = seen
            .into_iter()
            .min_by(|x, y| shortlex(x, y))
            .unwrap_or_default();
        return Word::new(best);
    }
}

/// True when the word represents the identity.
pub fn is_trivial(w: &Word, p: &SurfacePresentation) -> bool {
    dehn_reduce(w, p).is_empty()
}

/// A cyclic word together with `h` such that the original element equals
/// `h * word * h^-1`.
#[derive(Debug, Clone)]
struct Tracked {
    word: Vec<Letter>,
    conj: Vec<Letter>,
}

impl Tracked {
    fn rotate(&self, i: usize) -> Tracked {
        let mut word = self.word[i..].to_vec();
        word.extend_from_slice(&self.word[..i]);
        let mut conj = self.conj.clone();
        conj.extend_from_slice(&self.word[..i]);
        Tracked { word, conj }
    }

    fn cyclically_reduced(mut self) -> Tracked {
        self.word = free_reduce_letters(&self.word);
        while self.word.len() >= 2 && self.word[0] == self.word[self.word.len() - 1].inverse() {
            let first = self.word[0];
            self.word = self.word[1..self.word.len() - 1].to_vec();
            self.conj.push(first);
        }
        self
    }

    /// Replace the first `k` letters by the complementary relator piece.
    fn replace_prefix(&self, p: &SurfacePresentation, strand: usize, k: usize) -> Tracked {
        let mut word = p.complement(strand, self.word[0], k);
        word.extend_from_slice(&self.word[k..]);
        Tracked {
            word,
            conj: self.conj.clone(),
        }
        .cyclically_reduced()
    }
}

fn strict_cyclic(p: &SurfacePresentation, mut t: Tracked) -> Tracked {
    'outer: loop {
        t = t.cyclically_reduced();
        for i in 0..t.word.len() {
            for strand in 0..2 {
                let k = p.run_length(&t.word, i, strand, true);
                if k > p.half() {
                    let k = k.min(p.relator_len());
                    t = t.rotate(i).replace_prefix(p, strand, k);
                    continue 'outer;
                }
            }
        }
        return t;
    }
}

fn least_rotation(w: &[Letter]) -> usize {
    (0..w.len().max(1))
        .min_by(|&i, &j| {
            let ri = w[i..].iter().chain(&w[..i]);
            let rj = w[j..].iter().chain(&w[..j]);
            ri.cmp(rj)
        })
        .unwrap_or(0)
}

/// All minimal-length cyclic words reachable from `w`, keyed by least
/// rotation, with conjugators.
fn cyclic_closure(w: &Word, p: &SurfacePresentation) -> Vec<Tracked> {
    let reduced = dehn_reduce(w, p);
    let mut current = strict_cyclic(
        p,
        Tracked {
            word: reduced.into_letters(),
            conj: Vec::new(),
        },
    );
    'restart: loop {
        let mut seen: HashMap<Vec<Letter>, Tracked> = HashMap::new();
        let mut queue = VecDeque::new();
        let start = current.rotate(least_rotation(&current.word));
        seen.insert(start.word.clone(), start.clone());
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            if seen.len() >= CLOSURE_CAP {
                break;
            }
            for i in 0..u.word.len() {
                for strand in 0..2 {
                    if p.run_length(&u.word, i, strand, true) < p.half() {
                        continue;
                    }
                    let next = strict_cyclic(p, u.rotate(i).replace_prefix(p, strand, p.half()));
                    if next.word.len() < current.word.len() {
                        current = next;
                        continue 'restart;
                    }
                    let next = next.rotate(least_rotation(&next.word));
                    if !seen.contains_key(&next.word) {
                        seen.insert(next.word.clone(), next.clone());
                        queue.push_back(next);
                    }
                }
            }
        }
        let mut all: Vec<Tracked> = seen.into_values().collect();
        all.sort_by(|x, y| shortlex(&x.word, &y.word));
        return all;
    }
}

/// Canonical representative of the conjugacy class of `w`, plus a
/// conjugator `h` with `w = h * canonical * h^-1` in the group.
pub fn canonical_with_conjugator(
    w: &Word,
    p: &SurfacePresentation,
) -> Result<(CyclicWord, Word), WordError> {
    let closure = cyclic_closure(w, p);
    let best = closure.into_iter().next().ok_or(WordError::Identity)?;
    if best.word.is_empty() {
        return Err(WordError::Identity);
    }
    Ok((
        CyclicWord {
            letters: best.word,
            canonical: true,
        },
        Word::new(best.conj),
    ))
}

/// Canonical form of the conjugacy class: shortlex-least cyclic word among
/// all minimal-length cyclic representatives reachable by relator moves.
pub fn canonical_conjugacy_form(w: &Word, p: &SurfacePresentation) -> Result<CyclicWord, WordError> {
    canonical_with_conjugator(w, p).map(|(c, _)| c)
}

/// Find `h` with `v = h w h^-1`, if the canonical forms agree.
pub fn conjugacy_witness(w: &Word, v: &Word, p: &SurfacePresentation) -> Option<Word> {
    let (cw, hw) = canonical_with_conjugator(w, p).ok()?;
    let (cv, hv) = canonical_with_conjugator(v, p).ok()?;
    if cw != cv {
        return None;
    }
    Some(dehn_reduce(&hv.concat(&invert(&hw)), p))
}

fn has_proper_period(w: &[Letter]) -> bool {
    let n = w.len();
    (1..n).any(|d| n % d == 0 && (0..n).all(|i| w[i] == w[(i + d) % n]))
}

/// True unless the class is a proper power.
///
/// Every minimal cyclic representative is checked for a period, not only the
/// canonical one.
pub fn is_primitive(c: &CyclicWord, p: &SurfacePresentation) -> Result<bool, WordError> {
    if c.is_empty() {
        return Err(WordError::Identity);
    }
    let closure = cyclic_closure(&c.to_word(), p);
    if closure.first().map_or(true, |t| t.word.is_empty()) {
        return Err(WordError::Identity);
    }
    Ok(!closure.iter().any(|t| has_proper_period(&t.word)))
}

/// Canonical forms of all nontrivial conjugacy classes whose canonical form
/// has length at most `max_len`, in shortlex order.
pub fn enumerate_classes(p: &SurfacePresentation, max_len: usize) -> Vec<CyclicWord> {
    let alphabet = p.alphabet();
    let mut found: HashSet<CyclicWord> = HashSet::new();
    let mut frontier: Vec<Vec<Letter>> = alphabet.iter().map(|&l| vec![l]).collect();
    for len in 1..=max_len {
        for w in &frontier {
            if w.len() >= 2 && w[0] == w[w.len() - 1].inverse() {
                continue;
            }
            if least_rotation(w) != 0 {
                continue;
            }
            if let Ok(c) = canonical_conjugacy_form(&Word::new(w.clone()), p) {
                if c.len() == len {
                    found.insert(c);
                }
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::with_capacity(frontier.len() * (alphabet.len() - 1));
        for w in &frontier {
            let last = *w.last().unwrap();
            for &l in &alphabet {
                if l != last.inverse() {
                    let mut x = w.clone();
                    x.push(l);
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<CyclicWord> = found.into_iter().collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn g2() -> SurfacePresentation {
        SurfacePresentation::new(2).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("a1 b1 A1 B1").to_string(), "a1b1A1B1");
        assert_eq!(w("a b A").to_string(), "a1b1A1");
        assert_eq!(w("a12B3").letters(), &[Letter::a(12), Letter::b(3).inverse()]);
        assert_eq!(w("").len(), 0);
        assert!(matches!("a0".parse::<Word>(), Err(WordError::ZeroIndex { .. })));
        assert!(matches!("ax".parse::<Word>(), Err(WordError::BadChar { ch: 'x', .. })));
        assert!(g2().parse("a3").is_err());
    }

    #[test]
    fn letter_order_matches_tie_break() {
        let order: Vec<String> = g2().alphabet().iter().map(|l| l.to_string()).collect();
        assert_eq!(order, ["a1", "A1", "b1", "B1", "a2", "A2", "b2", "B2"]);
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(free_reduce(&w("a A b")), w("b"));
        assert_eq!(free_reduce(&w("")), w(""));
        assert_eq!(free_reduce(&w("a b B A a")), w("a"));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (c, h) = cyclic_reduce(&w("a b A"));
        assert_eq!((c.to_word(), h), (w("b"), w("a")));
        let (c, h) = cyclic_reduce(&w("a b"));
        assert_eq!((c.to_word(), h), (w("a b"), w("")));
        let input = w("B a b A a b");
        let (c, h) = cyclic_reduce(&input);
        let back = h.concat(&c.to_word()).concat(&invert(&h));
        assert_eq!(free_reduce(&back), free_reduce(&input));
    }

    #[test]
    fn relator_is_trivial() {
        for genus in 2..=4 {
            let p = SurfacePresentation::new(genus).unwrap();
            assert_eq!(dehn_reduce(&p.relator(), &p), Word::empty());
        }
        assert_eq!(dehn_reduce(&w("a1"), &g2()), w("a1"));
    }

    #[test]
    fn relator_minus_last_letter() {
        let p = g2();
        let r = p.relator();
        let short = Word::new(r.letters()[..r.len() - 1].to_vec());
        let last = r.letters()[r.len() - 1];
        assert_eq!(dehn_reduce(&short, &p), Word::new(vec![last.inverse()]));
    }

    #[test]
    fn half_relator_swap_picks_shortlex() {
        let p = g2();
        // a1b1A1B1 = (a2b2A2B2)^-1 = b2a2B2A2: two length-4 spellings of one
        // element; both reduce to the shortlex-least.
        let x = dehn_reduce(&w("a1b1A1B1"), &p);
        let z = dehn_reduce(&w("b2a2B2A2"), &p);
        assert_eq!(x, z);
        assert_eq!(x, w("a1b1A1B1"));
    }

    #[test]
    fn canonical_form_cyclic_permutation() {
        let p = g2();
        let x = canonical_conjugacy_form(&w("a1 b1"), &p).unwrap();
        let y = canonical_conjugacy_form(&w("b1 a1"), &p).unwrap();
        assert_eq!(x, y);
        assert!(x.is_canonical());
        let a1 = canonical_conjugacy_form(&w("a1"), &p).unwrap();
        let a2 = canonical_conjugacy_form(&w("a2"), &p).unwrap();
        assert_ne!(a1, a2);
    }

    #[test]
    fn identity_is_rejected() {
        let p = g2();
        assert_eq!(canonical_conjugacy_form(&w("a1 A1"), &p), Err(WordError::Identity));
        assert_eq!(canonical_conjugacy_form(&p.relator(), &p), Err(WordError::Identity));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(invert(&w("a b")), w("B A"));
        assert_eq!(invert(&w("")), w(""));
    }

    #[test]
    fn primitivity() {
        let p = g2();
        let c = |s: &str| canonical_conjugacy_form(&w(s), &p).unwrap();
        assert!(is_primitive(&c("a b"), &p).unwrap());
        assert!(!is_primitive(&c("a b a b"), &p).unwrap());
        assert!(is_primitive(&c("a1 b1 A1 B1"), &p).unwrap());
        assert!(!is_primitive(&c("a1 a1 a1"), &p).unwrap());
    }

    #[test]
    fn conjugacy_witness_reassembles() {
        let p = g2();
        let x = w("a1 b2 A1");
        let v = w("b1 a1 b2 A1 B1");
        let h = conjugacy_witness(&x, &v, &p).unwrap();
        let lhs = h.concat(&x).concat(&invert(&h));
        assert_eq!(dehn_reduce(&lhs, &p), dehn_reduce(&v, &p));
    }

    #[test]
    fn class_enumeration_small() {
        let p = g2();
        let one = enumerate_classes(&p, 1);
        assert_eq!(one.len(), 8);
        let two = enumerate_classes(&p, 2);
        // 8 single letters, 8 squares, and 24 products of two distinct
        // non-inverse letters up to rotation
        assert_eq!(two.len(), 8 + 8 + 24);
    }
}
