//! Test-side oracles, written against raw words only so that they share no
//! code path with the library's reduction.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet, VecDeque};

use cyclewall::{Elem, Presentation, Syllable};
use rand::Rng;

pub type RawWord = Vec<(usize, Elem)>;

fn adjacent(n: usize, a: usize, b: usize) -> bool {
    (a + 1) % n == b || (b + 1) % n == a
}

/// Every word reachable from `w` by the three length-non-increasing moves:
/// drop an identity syllable, merge two consecutive syllables of one vertex
/// group, swap two consecutive syllables of adjacent vertex groups.
pub fn move_closure(p: &Presentation, w: &RawWord) -> HashSet<RawWord> {
    let n = p.n();
    let mut seen: HashSet<RawWord> = HashSet::from([w.clone()]);
    let mut queue = VecDeque::from([w.clone()]);
    while let Some(u) = queue.pop_front() {
        let mut next = Vec::new();
        for k in 0..u.len() {
            if u[k].1 == p.group(u[k].0).identity() {
                let mut x = u.clone();
                x.remove(k);
                next.push(x);
            }
            if k + 1 < u.len() {
                let (a, b) = (u[k], u[k + 1]);
                if a.0 == b.0 {
                    let mut x = u.clone();
                    x[k] = (a.0, p.group(a.0).op(a.1, b.1));
                    x.remove(k + 1);
                    next.push(x);
                } else if adjacent(n, a.0, b.0) {
                    let mut x = u.clone();
                    x.swap(k, k + 1);
                    next.push(x);
                }
            }
        }
        for x in next {
            if seen.insert(x.clone()) {
                queue.push_back(x);
            }
        }
    }
    seen
}

/// Lexicographically least among the shortest words reachable from `w`.
pub fn oracle_normal_form(p: &Presentation, w: &RawWord) -> RawWord {
    let all = move_closure(p, w);
    let min = all.iter().map(Vec::len).min().unwrap_or(0);
    all.into_iter().filter(|x| x.len() == min).min().unwrap_or_default()
}

/// All words of exactly `len` non-identity syllables.
pub fn all_words(p: &Presentation, len: usize) -> Vec<RawWord> {
    let letters: Vec<(usize, Elem)> = (0..p.n())
        .flat_map(|v| p.group(v).non_identity().unwrap().into_iter().map(move |e| (v, e)))
        .collect();
    let mut out: Vec<RawWord> = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |&s| {
                    let mut x = w.clone();
                    x.push(s);
                    x
                })
            })
            .collect();
    }
    out
}

pub fn to_syllables(w: &RawWord) -> Vec<Syllable> {
    w.iter().map(|&(v, e)| Syllable::new(v, e)).collect()
}

pub fn from_syllables(w: &[Syllable]) -> RawWord {
    w.iter().map(|s| (s.vertex, s.elem)).collect()
}

/// A word whose consecutive syllables lie on vertices at cycle distance at
/// least two, drawn by rejection over vertex choices.
pub fn rigid_word<R: Rng>(p: &Presentation, rng: &mut R, len: usize) -> RawWord {
    let n = p.n();
    let mut w: RawWord = Vec::new();
    while w.len() < len {
        let v = rng.gen_range(0..n);
        if let Some(&(u, _)) = w.last() {
            if u == v || adjacent(n, u, v) {
                continue;
            }
        }
        let elems = p.group(v).non_identity().unwrap();
        w.push((v, elems[rng.gen_range(0..elems.len())]));
    }
    w
}

/// Distinct values of `key` over `words` must be in bijection with the
/// distinct values of `other`: returns the first pair of words that the
/// two classifications disagree on.
pub fn first_disagreement<K1: Ord + Clone, K2: Ord + Clone>(
    words: &[RawWord],
    key: &[K1],
    other: &[K2],
) -> Option<(RawWord, RawWord)> {
    let mut fwd: BTreeMap<K1, (K2, usize)> = Default::default();
    let mut back: BTreeMap<K2, (K1, usize)> = Default::default();
    for (i, w) in words.iter().enumerate() {
        if let Some((k2, j)) = fwd.get(&key[i]) {
            if *k2 != other[i] {
                return Some((words[*j].clone(), w.clone()));
            }
        } else {
            fwd.insert(key[i].clone(), (other[i].clone(), i));
        }
        if let Some((k1, j)) = back.get(&other[i]) {
            if *k1 != key[i] {
                return Some((words[*j].clone(), w.clone()));
            }
        } else {
            back.insert(other[i].clone(), (key[i].clone(), i));
        }
    }
    None
}
