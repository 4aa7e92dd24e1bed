//! Words over {ω0, ω+, ω−}, shuffle and stuffle products, the exponent shift
//! and the duality involution.
//!
//! Orientation: the leftmost letter is outermost (nearest t = 1).

use crate::error::{domain, Error, Result};
use crate::indexcore::{mmv_series_product, Index};
use crate::lincomb::{q, LinComb, Q};
use num_traits::One;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// ω0 = dt/t
    O,
    /// ω+ = 2t dt/(1−t²)
    P,
    /// ω− = 2 dt/(1−t²)
    N,
}

impl Letter {
    pub fn from_sign(eps: i8) -> Letter {
        if eps > 0 {
            Letter::P
        } else {
            Letter::N
        }
    }

    /// Signature of a non-ω0 letter.
    pub fn sign(self) -> i8 {
        match self {
            Letter::P => 1,
            Letter::N => -1,
            Letter::O => panic!("ω0 carries no signature"),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::O => '0',
            Letter::P => '+',
            Letter::N => '-',
        }
    }
}

/// The block z_{k,ε} = ω0^{k−1} ω_ε.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZBlock {
    pub k: u32,
    pub eps: i8,
}

impl ZBlock {
    pub fn new(k: u32, eps: i8) -> ZBlock {
        assert!(k >= 1 && (eps == 1 || eps == -1));
        ZBlock { k, eps }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn depth(&self) -> usize {
        self.0.iter().filter(|&&l| l != Letter::O).count()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Not ending in ω0 (the empty word counts).
    pub fn in_a1(&self) -> bool {
        self.0.last() != Some(&Letter::O)
    }

    pub fn is_admissible(&self) -> bool {
        is_admissible(self)
    }

    /// Blocks listed outermost first. Fails for words ending in ω0.
    pub fn blocks(&self) -> Result<Vec<ZBlock>> {
        let mut out = Vec::new();
        let mut k = 0u32;
        for &l in &self.0 {
            k += 1;
            if l != Letter::O {
                out.push(ZBlock::new(k, l.sign()));
                k = 0;
            }
        }
        if k != 0 {
            return domain(format!("word {self} ends in ω0 and has no block decomposition"));
        }
        Ok(out)
    }

    /// Inverse of [`Word::blocks`].
    pub fn from_blocks(blocks: &[ZBlock]) -> Word {
        let mut v = Vec::new();
        for b in blocks {
            v.extend(std::iter::repeat_n(Letter::O, (b.k - 1) as usize));
            v.push(Letter::from_sign(b.eps));
        }
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn parse(s: &str) -> Result<Word> {
        let mut v = Vec::new();
        for (i, ch) in s.chars().enumerate() {
            v.push(match ch {
                '0' => Letter::O,
                '+' => Letter::P,
                '-' => Letter::N,
                _ => {
                    return Err(Error::Parse { pos: i, msg: format!("unexpected letter {ch:?}") });
                }
            });
        }
        Ok(Word(v))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Degree-reverse-lexicographic order with O < P < N: shorter words first;
/// among equal lengths, scan from the right and the word with the larger
/// letter at the first difference comes first.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| {
            for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type WordComb = LinComb<Word>;

/// Renders with bracketed words: `3/2*[0-] - [0+-]`.
pub fn render_words(lc: &WordComb) -> String {
    crate::lincomb::render_with(lc, |w| format!("[{w}]"))
}

/// Admissible: first letter ω0 and last letter not ω0.
pub fn is_admissible(w: &Word) -> bool {
    matches!(w.0.first(), Some(Letter::O)) && w.in_a1()
}

pub fn shuffle(u: &Word, v: &Word) -> WordComb {
    let (a, b) = (&u.0, &v.0);
    let (n, m) = (a.len(), b.len());
    // table[i][j] = a[i..] ⧢ b[j..]
    let mut table: Vec<Vec<WordComb>> = vec![vec![WordComb::zero(); m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            if i == n {
                table[i][j] = WordComb::single(Word(b[j..].to_vec()));
                continue;
            }
            if j == m {
                table[i][j] = WordComb::single(Word(a[i..].to_vec()));
                continue;
            }
            let mut acc = WordComb::zero();
            for (w, c) in table[i + 1][j].iter() {
                acc.add_term(prepend(a[i], w), c.clone());
            }
            for (w, c) in table[i][j + 1].iter() {
                acc.add_term(prepend(b[j], w), c.clone());
            }
            table[i][j] = acc;
        }
    }
    std::mem::take(&mut table[0][0])
}

fn prepend(l: Letter, w: &Word) -> Word {
    let mut v = Vec::with_capacity(w.0.len() + 1);
    v.push(l);
    v.extend_from_slice(&w.0);
    Word(v)
}

pub fn shuffle_lc(x: &WordComb, y: &WordComb) -> WordComb {
    x.bilinear(y, shuffle)
}

/// τ_ε: multiplies every block signature by ε.
pub fn tau_shift(eps: i8, w: &Word) -> Result<Word> {
    let blocks = w.blocks()?;
    Ok(Word::from_blocks(&tau_blocks(eps, &blocks)))
}

fn tau_blocks(eps: i8, blocks: &[ZBlock]) -> Vec<ZBlock> {
    blocks.iter().map(|b| ZBlock::new(b.k, b.eps * eps)).collect()
}

/// Stuffle product on A¹ in the iterated-integral encoding.
///
/// A block letter records the parity of its summation index relative to the
/// next inner index. Peeling the innermost blocks z_{s,ε}, z_{t,η}:
///
/// u z_{s,ε} * v z_{t,η} = (u * v z_{t,εη}) z_{s,ε} + (u z_{s,εη} * v) z_{t,η}
///                         + 2δ(ε,η) (u * v) z_{s+t,ε}
///
/// The twist touches only the new innermost block of the other factor, which
/// rebases it onto the parity of the block that was placed below it.
pub fn stuffle(u: &Word, v: &Word) -> Result<WordComb> {
    let a = u.blocks()?;
    let b = v.blocks()?;
    let mut memo = HashMap::new();
    let res = stuffle_blocks(&a, &b, &mut memo);
    Ok(res.iter().map(|(bl, c)| (Word::from_blocks(bl), c.clone())).collect())
}

type BlockComb = LinComb<Vec<ZBlock>>;

fn stuffle_blocks(a: &[ZBlock], b: &[ZBlock], memo: &mut HashMap<(Vec<ZBlock>, Vec<ZBlock>), BlockComb>) -> BlockComb {
    if a.is_empty() {
        return BlockComb::single(b.to_vec());
    }
    if b.is_empty() {
        return BlockComb::single(a.to_vec());
    }
    let key = (a.to_vec(), b.to_vec());
    if let Some(r) = memo.get(&key) {
        return r.clone();
    }
    let (s, ua) = a.split_last().unwrap();
    let (t, vb) = b.split_last().unwrap();
    let mut out = BlockComb::zero();
    let mut push = |rest: BlockComb, last: ZBlock, c: Q| {
        for (w, x) in rest.iter() {
            let mut w2 = w.clone();
            w2.push(last);
            out.add_term(w2, x * &c);
        }
    };
    let mut b_twist = b.to_vec();
    b_twist.last_mut().unwrap().eps *= s.eps;
    push(stuffle_blocks(ua, &b_twist, memo), *s, Q::one());
    let mut a_twist = a.to_vec();
    a_twist.last_mut().unwrap().eps *= t.eps;
    push(stuffle_blocks(&a_twist, vb, memo), *t, Q::one());
    if s.eps == t.eps {
        push(stuffle_blocks(ua, vb, memo), ZBlock::new(s.k + t.k, s.eps), q(2));
    }
    memo.insert(key, out.clone());
    out
}

pub fn stuffle_lc(x: &WordComb, y: &WordComb) -> Result<WordComb> {
    let mut out = WordComb::zero();
    for (u, c) in x.iter() {
        for (v, d) in y.iter() {
            out.add_scaled(&stuffle(u, v)?, &(c * d));
        }
    }
    Ok(out)
}

/// Series-level product of two admissible MMVs.
pub fn stuffle_indices(a: &Index, b: &Index) -> Result<LinComb<Index>> {
    if !a.is_admissible() || !b.is_admissible() {
        return domain("stuffle_indices needs admissible indices");
    }
    Ok(mmv_series_product(&a.pairs(), &b.pairs()).iter().map(|(p, c)| (Index::from_pairs(p), c.clone())).collect())
}

/// Image of one letter under t ↦ (1−t)/(1+t): ω0 ↦ ω−, ω− ↦ ω0, ω+ ↦ ω0 + ω+ − ω−.
fn dual_letter(l: Letter) -> Vec<(Letter, i64)> {
    match l {
        Letter::O => vec![(Letter::N, 1)],
        Letter::N => vec![(Letter::O, 1)],
        Letter::P => vec![(Letter::O, 1), (Letter::P, 1), (Letter::N, -1)],
    }
}

/// Reverse the word and substitute letterwise; no admissibility checks.
pub fn dual_reverse(w: &Word) -> WordComb {
    let mut acc = WordComb::single(Word::empty());
    for &l in w.0.iter().rev() {
        let mut next = WordComb::zero();
        for (x, c) in acc.iter() {
            for (m, s) in dual_letter(l) {
                let mut v = x.0.clone();
                v.push(m);
                next.add_term(Word(v), c * q(s));
            }
        }
        acc = next;
    }
    acc
}

/// Duality on admissible words of odd signature class (innermost letter ω−).
pub fn dual_word(w: &Word) -> Result<WordComb> {
    if !is_admissible(w) {
        return domain(format!("dual_word needs an admissible word, got {w}"));
    }
    if w.0.last() != Some(&Letter::N) {
        return domain(format!("dual_word needs ε_1 = −1 (word ending in ω−), got {w}"));
    }
    Ok(dual_reverse(w))
}

pub fn dual_lc(x: &WordComb) -> Result<WordComb> {
    let mut out = WordComb::zero();
    for (w, c) in x.iter() {
        out.add_scaled(&dual_word(w)?, c);
    }
    Ok(out)
}

/// All words of the given length.
pub fn all_words(len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * 3);
        for w in &out {
            for l in [Letter::O, Letter::P, Letter::N] {
                let mut v = w.0.clone();
                v.push(l);
                next.push(Word(v));
            }
        }
        out = next;
    }
    out
}

pub fn admissible_words(weight: usize) -> Vec<Word> {
    let mut v: Vec<Word> = all_words(weight).into_iter().filter(is_admissible).collect();
    v.sort();
    v
}
