//! Compositions, signatures and the index ↔ word dictionary.
//!
//! Compositions are stored innermost first: `k[0]` belongs to the smallest
//! summation index.

use crate::error::{domain, Result};
use crate::lincomb::{q, LinComb, Q};
use crate::wordalg::{Letter, Word};
use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::One;
use std::fmt;

/// The (k; ε) of a multiple mixed value. ε = −1 marks an odd summation index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index {
    pub k: Vec<u32>,
    pub eps: Vec<i8>,
}

impl Index {
    pub fn new(k: Vec<u32>, eps: Vec<i8>) -> Result<Index> {
        if k.is_empty() || k.len() != eps.len() {
            return domain("index needs equal, nonzero numbers of exponents and signatures");
        }
        if k.contains(&0) {
            return domain("exponents must be positive");
        }
        if eps.iter().any(|&e| e != 1 && e != -1) {
            return domain("signatures must be ±1");
        }
        Ok(Index { k, eps })
    }

    /// Parses the signed shorthand: `-3` means exponent 3 with ε = −1.
    pub fn from_signed(entries: &[i64]) -> Result<Index> {
        let k = entries.iter().map(|&e| e.unsigned_abs() as u32).collect();
        let eps = entries.iter().map(|&e| if e < 0 { -1 } else { 1 }).collect();
        Index::new(k, eps)
    }

    pub fn weight(&self) -> u32 {
        self.k.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.k.len()
    }

    pub fn is_admissible(&self) -> bool {
        *self.k.last().unwrap() >= 2
    }

    pub fn signed(&self) -> Vec<i64> {
        self.k.iter().zip(&self.eps).map(|(&k, &e)| k as i64 * e as i64).collect()
    }

    /// Generator order: depth, then exponents, then signatures.
    pub fn generator_key(&self) -> (usize, Vec<u32>, Vec<i8>) {
        (self.depth(), self.k.clone(), self.eps.clone())
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.signed().iter().map(|x| x.to_string()).collect();
        write!(f, "M({})", parts.join(","))
    }
}

impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Index of an alternating multiple zeta value ζ(k; sgn) = Σ Π sgn_j^{m_j} / m_j^{k_j}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AltIndex {
    pub k: Vec<u32>,
    pub sgn: Vec<i8>,
}

impl AltIndex {
    pub fn new(k: Vec<u32>, sgn: Vec<i8>) -> Result<AltIndex> {
        if k.len() != sgn.len() || k.contains(&0) || sgn.iter().any(|&e| e != 1 && e != -1) {
            return domain("malformed alternating index");
        }
        Ok(AltIndex { k, sgn })
    }

    pub fn from_signed(entries: &[i64]) -> Result<AltIndex> {
        let k = entries.iter().map(|&e| e.unsigned_abs() as u32).collect();
        let sgn = entries.iter().map(|&e| if e < 0 { -1 } else { 1 }).collect();
        AltIndex::new(k, sgn)
    }

    pub fn weight(&self) -> u32 {
        self.k.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.k.len()
    }

    /// Convergent unless the outermost entry is an unsigned 1.
    pub fn is_admissible(&self) -> bool {
        match (self.k.last(), self.sgn.last()) {
            (Some(&1), Some(&1)) => false,
            (Some(_), _) => true,
            (None, _) => true,
        }
    }
}

impl fmt::Display for AltIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.k.iter().zip(&self.sgn).map(|(&k, &s)| (k as i64 * s as i64).to_string()).collect();
        write!(f, "zeta({})", parts.join(","))
    }
}

impl fmt::Debug for AltIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// (ε1ε2, ε2ε3, …, ε_{r−1}ε_r, ε_r)
pub fn q_transform(eps: &[i8]) -> Result<Vec<i8>> {
    if eps.is_empty() {
        return domain("q_transform of an empty signature");
    }
    let r = eps.len();
    Ok((0..r).map(|i| if i + 1 < r { eps[i] * eps[i + 1] } else { eps[i] }).collect())
}

/// Inverse of [`q_transform`]: ε_i = η_i η_{i+1} ⋯ η_r.
pub fn q_inverse(eta: &[i8]) -> Result<Vec<i8>> {
    if eta.is_empty() {
        return domain("q_inverse of an empty signature");
    }
    let mut out = vec![0i8; eta.len()];
    let mut acc = 1i8;
    for i in (0..eta.len()).rev() {
        acc *= eta[i];
        out[i] = acc;
    }
    Ok(out)
}

/// Letters of the blocks, innermost first: block i carries ω_{ε_i ε_{i−1}} with ε_0 = 1.
fn relative_letters(eps: &[i8]) -> Vec<i8> {
    let mut prev = 1i8;
    eps.iter()
        .map(|&e| {
            let r = e * prev;
            prev = e;
            r
        })
        .collect()
}

/// Word of an index under the parity-propagation rule, without an
/// admissibility check (the result lies in A¹).
pub fn index_to_word_any(idx: &Index) -> Word {
    let rel = relative_letters(&idx.eps);
    let mut v = Vec::new();
    for i in (0..idx.depth()).rev() {
        v.extend(std::iter::repeat_n(Letter::O, (idx.k[i] - 1) as usize));
        v.push(Letter::from_sign(rel[i]));
    }
    Word::new(v)
}

pub fn index_to_word(idx: &Index) -> Result<Word> {
    if !idx.is_admissible() {
        return domain(format!("{idx} is not admissible"));
    }
    Ok(index_to_word_any(idx))
}

/// Inverse of [`index_to_word_any`] on nonempty words of A¹.
pub fn word_to_index_any(w: &Word) -> Result<Index> {
    let blocks = w.blocks()?;
    if blocks.is_empty() {
        return domain("the empty word has no index");
    }
    let mut k = Vec::new();
    let mut eps = Vec::new();
    let mut parity = 1i8;
    for b in blocks.iter().rev() {
        parity *= b.eps;
        k.push(b.k);
        eps.push(parity);
    }
    Index::new(k, eps)
}

pub fn word_to_index(w: &Word) -> Result<Index> {
    if !w.is_admissible() {
        return domain(format!("word {w} is not admissible"));
    }
    word_to_index_any(w)
}

/// Block encoding used on the series side: each block carries the absolute
/// parity of its own summation index.
pub fn series_blocks(idx: &Index) -> Word {
    let mut v = Vec::new();
    for i in (0..idx.depth()).rev() {
        v.extend(std::iter::repeat_n(Letter::O, (idx.k[i] - 1) as usize));
        v.push(Letter::from_sign(idx.eps[i]));
    }
    Word::new(v)
}

pub fn series_blocks_to_index(w: &Word) -> Result<Index> {
    let blocks = w.blocks()?;
    if blocks.is_empty() {
        return domain("the empty word has no index");
    }
    Index::new(blocks.iter().rev().map(|b| b.k).collect(), blocks.iter().rev().map(|b| b.eps).collect())
}

/// Converts an integral-encoded word of A¹ into the series-side block encoding.
pub fn qside(w: &Word) -> Result<Word> {
    if w.is_empty() {
        return Ok(Word::empty());
    }
    Ok(series_blocks(&word_to_index_any(w)?))
}

/// The classical dual of an admissible composition.
pub fn dual_composition(k: &[u32]) -> Result<Vec<u32>> {
    if k.is_empty() || *k.last().unwrap() < 2 {
        return domain("dual_composition needs an admissible composition");
    }
    // Build the 0/1 word (outer first): block k_i = x0^{k_i−1} x1; dual reverses and swaps.
    let mut bits = Vec::new();
    for &ki in k.iter().rev() {
        bits.extend(std::iter::repeat_n(0u8, (ki - 1) as usize));
        bits.push(1);
    }
    let dual: Vec<u8> = bits.iter().rev().map(|b| 1 - b).collect();
    let mut out_outer = Vec::new();
    let mut run = 0u32;
    for b in dual {
        run += 1;
        if b == 1 {
            out_outer.push(run);
            run = 0;
        }
    }
    out_outer.reverse();
    Ok(out_outer)
}

pub fn plus_index(k: &[u32]) -> Vec<u32> {
    let mut v = k.to_vec();
    if let Some(last) = v.last_mut() {
        *last += 1;
    }
    v
}

pub fn b_coeff(k: &[u32], j: &[u32]) -> Result<BigInt> {
    if k.len() != j.len() {
        return domain("b_coeff needs equal depths");
    }
    let mut acc = BigInt::one();
    for (&ki, &ji) in k.iter().zip(j) {
        acc *= binomial(BigInt::from(ki + ji - 1), BigInt::from(ji));
    }
    Ok(acc)
}

/// All j ∈ ℕ₀ⁿ with |j| = p, in lexicographic order.
pub fn compositions(p: u32, n: usize) -> Result<Vec<Vec<u32>>> {
    if n == 0 {
        return domain("compositions need depth n ≥ 1");
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for x in 0..=left {
            cur[i] = x;
            rec(i + 1, left - x, cur, out);
        }
    }
    rec(0, p, &mut cur, &mut out);
    Ok(out)
}

/// Compositions of `w` into positive parts, innermost first.
pub fn positive_compositions(w: u32) -> Vec<Vec<u32>> {
    if w == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=w {
        for mut rest in positive_compositions(w - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn sign_vectors(r: usize) -> Vec<Vec<i8>> {
    (0..1usize << r).map(|mask| (0..r).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect()).collect()
}

/// All admissible indices of a given weight, in generator order.
pub fn admissible_indices(weight: u32) -> Vec<Index> {
    let mut out = Vec::new();
    for k in positive_compositions(weight) {
        if k.last().copied().unwrap_or(0) < 2 {
            continue;
        }
        for eps in sign_vectors(k.len()) {
            out.push(Index { k: k.clone(), eps });
        }
    }
    out.sort_by_key(|i| i.generator_key());
    out
}

/// M(k;ε) = Σ_{S ⊆ [r]} (Π_{j∈S} ε_j) ζ(k; −1 on S).
pub fn mmv_to_alternating(idx: &Index) -> Result<LinComb<AltIndex>> {
    if !idx.is_admissible() {
        return domain(format!("{idx} is not admissible"));
    }
    Ok(mmv_to_alternating_any(idx))
}

/// Formal expansion without the convergence check.
pub fn mmv_to_alternating_any(idx: &Index) -> LinComb<AltIndex> {
    let r = idx.depth();
    let mut out = LinComb::zero();
    for sgn in sign_vectors(r) {
        let c: i64 = (0..r).filter(|&j| sgn[j] == -1).map(|j| idx.eps[j] as i64).product();
        out.add_term(AltIndex { k: idx.k.clone(), sgn }, q(c));
    }
    out
}

/// Inverse expansion: ζ(k; sgn) = 2^{−r} Σ_ε (Π_{j: sgn_j=−1} ε_j) M(k; ε).
pub fn alternating_to_mmv(a: &AltIndex) -> LinComb<Index> {
    let r = a.depth();
    let scale = Q::new(BigInt::one(), BigInt::one() << r);
    let mut out = LinComb::zero();
    for eps in sign_vectors(r) {
        let c: i64 = (0..r).filter(|&j| a.sgn[j] == -1).map(|j| eps[j] as i64).product();
        out.add_term(Index { k: a.k.clone(), eps }, &scale * q(c));
    }
    out
}

/// Quasi-shuffle of sequences listed innermost first. `merge` returns the
/// merged letter and its coefficient, or `None` when the merge term vanishes.
pub fn quasi_shuffle<T, F>(a: &[T], b: &[T], merge: &F) -> LinComb<Vec<T>>
where
    T: Clone + Ord,
    F: Fn(&T, &T) -> Option<(T, Q)>,
{
    if a.is_empty() {
        return LinComb::single(b.to_vec());
    }
    if b.is_empty() {
        return LinComb::single(a.to_vec());
    }
    let (x, a0) = a.split_last().unwrap();
    let (y, b0) = b.split_last().unwrap();
    let mut out = LinComb::zero();
    let mut push = |rest: LinComb<Vec<T>>, last: &T, c: &Q| {
        for (w, k) in rest.iter() {
            let mut w2 = w.clone();
            w2.push(last.clone());
            out.add_term(w2, k * c);
        }
    };
    push(quasi_shuffle(a0, b, merge), x, &q(1));
    push(quasi_shuffle(a, b0, merge), y, &q(1));
    if let Some((z, c)) = merge(x, y) {
        push(quasi_shuffle(a0, b0, merge), &z, &c);
    }
    out
}

/// Series product of two MMV index sequences (innermost first), including
/// non-convergent ones: merging needs equal signatures and carries a factor 2.
pub fn mmv_series_product(a: &[(u32, i8)], b: &[(u32, i8)]) -> LinComb<Vec<(u32, i8)>> {
    quasi_shuffle(a, b, &|x: &(u32, i8), y: &(u32, i8)| (x.1 == y.1).then(|| ((x.0 + y.0, x.1), q(2))))
}

/// Series product of alternating zeta indices: merged signs multiply.
pub fn alt_series_product(a: &[(u32, i8)], b: &[(u32, i8)]) -> LinComb<Vec<(u32, i8)>> {
    quasi_shuffle(a, b, &|x: &(u32, i8), y: &(u32, i8)| Some(((x.0 + y.0, x.1 * y.1), q(1))))
}

impl Index {
    pub fn pairs(&self) -> Vec<(u32, i8)> {
        self.k.iter().copied().zip(self.eps.iter().copied()).collect()
    }

    pub fn from_pairs(p: &[(u32, i8)]) -> Index {
        Index { k: p.iter().map(|x| x.0).collect(), eps: p.iter().map(|x| x.1).collect() }
    }
}

impl AltIndex {
    pub fn pairs(&self) -> Vec<(u32, i8)> {
        self.k.iter().copied().zip(self.sgn.iter().copied()).collect()
    }

    pub fn from_pairs(p: &[(u32, i8)]) -> AltIndex {
        AltIndex { k: p.iter().map(|x| x.0).collect(), sgn: p.iter().map(|x| x.1).collect() }
    }
}
