//! 2-labeled posets, their associated integrals and expansion into words.

use crate::error::{domain, Error, Result};
use crate::lincomb::{q, LinComb};
use crate::numeval::{bits_for, eval_word, BigReal};
use crate::wordalg::{Letter, Word, WordComb};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A finite poset on 0..n with labels in {0,1}. Label 0 carries dt/t and
/// label 1 carries 2dt/(1−t²).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset2 {
    labels: Vec<u8>,
    /// less[a][b] ⇔ a < b (transitively closed).
    less: Vec<Vec<bool>>,
}

/// Interchange form: covering edges [a, b] meaning a < b.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetLiteral {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub labels: Vec<u8>,
}

impl Poset2 {
    pub fn new(labels: Vec<u8>, edges: &[(usize, usize)]) -> Result<Poset2> {
        let n = labels.len();
        if labels.iter().any(|&l| l > 1) {
            return Err(Error::Validation("poset labels must be 0 or 1".into()));
        }
        let mut less = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Validation(format!("edge ({a},{b}) out of range")));
            }
            less[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if less[i][k] {
                    for j in 0..n {
                        if less[k][j] {
                            less[i][j] = true;
                        }
                    }
                }
            }
        }
        if (0..n).any(|i| less[i][i]) {
            return Err(Error::Validation("poset relation has a cycle".into()));
        }
        Ok(Poset2 { labels, less })
    }

    pub fn from_literal(lit: &PosetLiteral) -> Result<Poset2> {
        if lit.labels.len() != lit.n {
            return Err(Error::Validation("label count differs from n".into()));
        }
        let edges: Vec<(usize, usize)> = lit.edges.iter().map(|e| (e[0], e[1])).collect();
        Poset2::new(lit.labels.clone(), &edges)
    }

    pub fn to_literal(&self) -> PosetLiteral {
        PosetLiteral {
            n: self.len(),
            edges: self.covering_edges().into_iter().map(|(a, b)| [a, b]).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.less[a][b]
    }

    /// The transitive reduction.
    pub fn covering_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.less[a][b] && !(0..n).any(|c| self.less[a][c] && self.less[c][b]) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| !(0..self.len()).any(|b| self.less[a][b])).collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| !(0..self.len()).any(|b| self.less[b][a])).collect()
    }

    /// Maximal elements carry label 0 and minimal elements label 1.
    pub fn is_admissible(&self) -> bool {
        self.maximal().iter().all(|&x| self.labels[x] == 0) && self.minimal().iter().all(|&x| self.labels[x] == 1)
    }

    /// X^b_a: adjoin a < b.
    pub fn with_relation(&self, a: usize, b: usize) -> Poset2 {
        let n = self.len();
        let mut less = self.less.clone();
        for i in 0..n {
            if i == a || less[i][a] {
                for j in 0..n {
                    if j == b || self.less[b][j] {
                        less[i][j] = true;
                    }
                }
            }
        }
        Poset2 { labels: self.labels.clone(), less }
    }

    pub fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !self.less[a][b] && !self.less[b][a] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// For a total order: the word read from the top (outermost) down.
    fn chain_word(&self) -> Word {
        let n = self.len();
        let mut idx: Vec<usize> = (0..n).collect();
        // number of elements above determines the position from the left
        idx.sort_by_key(|&a| (0..n).filter(|&b| self.less[a][b]).count());
        Word::new(idx.iter().map(|&a| if self.labels[a] == 0 { Letter::O } else { Letter::N }).collect())
    }
}

/// The chain of T(k): blocks bottom-up, each a label-1 vertex under k_i − 1 label-0 vertices.
pub fn chain_poset(k: &[u32]) -> Result<Poset2> {
    if k.is_empty() || *k.last().unwrap() < 2 || k.contains(&0) {
        return domain("chain_poset needs an admissible composition");
    }
    Ok(chain_any(k))
}

fn chain_labels(k: &[u32]) -> Vec<u8> {
    let mut labels = Vec::new();
    for &ki in k {
        labels.push(1);
        labels.extend(std::iter::repeat_n(0, (ki - 1) as usize));
    }
    labels
}

fn chain_any(k: &[u32]) -> Poset2 {
    let labels = chain_labels(k);
    let edges: Vec<(usize, usize)> = (1..labels.len()).map(|i| (i - 1, i)).collect();
    Poset2::new(labels, &edges).expect("chains are valid posets")
}

/// The poset of ψ(k; p+1): the k-chain and a chain of p label-1 vertices,
/// both placed under one extra label-0 top vertex.
pub fn psi_poset(k: &[u32], p: u32) -> Result<Poset2> {
    if p == 0 {
        return domain("psi_poset needs p ≥ 1");
    }
    if k.is_empty() || k.contains(&0) {
        return domain("psi_poset needs a composition");
    }
    let mut labels = chain_labels(k);
    let kn = labels.len();
    let top = kn;
    labels.push(0);
    labels.extend(std::iter::repeat_n(1, p as usize));
    let mut edges: Vec<(usize, usize)> = (1..kn).map(|i| (i - 1, i)).collect();
    edges.push((kn - 1, top));
    for i in 0..p as usize {
        let v = top + 1 + i;
        if i + 1 < p as usize {
            edges.push((v, v + 1));
        } else {
            edges.push((v, top));
        }
    }
    Poset2::new(labels, &edges)
}

/// The poset of the two-chain identity for T(k ⊛ (l1, l2)): the chain of
/// (k_1, …, k_m + l2) whose top also lies above a chain of one label-1 vertex
/// followed by l1 − 1 label-0 vertices that are otherwise unrelated.
///
/// Its integral equals T(k ⊛ (l1, l2)) + 2ζ̄(l1)·T(k_1, …, k_m + l2) when m
/// is odd and T(k ⊛ (l1, l2)) when m is even.
pub fn conv_pair_poset(k: &[u32], l1: u32, l2: u32) -> Result<Poset2> {
    if k.is_empty() || k.contains(&0) || l1 == 0 || l2 == 0 {
        return domain("conv_pair_poset needs positive parameters");
    }
    let mut kk = k.to_vec();
    *kk.last_mut().unwrap() += l2;
    let mut labels = chain_labels(&kk);
    let n = labels.len();
    let top = n - 1;
    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    let t1 = n;
    labels.push(1);
    edges.push((t1, top));
    for i in 1..l1 as usize {
        labels.push(0);
        edges.push((t1 + i - 1, t1 + i));
    }
    Poset2::new(labels, &edges)
}

/// Pair selection for [`expand_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitRule {
    First,
    Last,
}

/// Repeated splitting I(X) = I(X^b_a) + I(X^a_b) down to total orders.
pub fn expand(x: &Poset2) -> Result<WordComb> {
    expand_with(x, SplitRule::First)
}

pub fn expand_with(x: &Poset2, rule: SplitRule) -> Result<WordComb> {
    if !x.is_admissible() {
        return domain("poset is not admissible");
    }
    let mut memo = HashMap::new();
    Ok(expand_rec(x, rule, &mut memo))
}

fn expand_rec(x: &Poset2, rule: SplitRule, memo: &mut HashMap<Poset2, WordComb>) -> WordComb {
    if let Some(r) = memo.get(x) {
        return r.clone();
    }
    let pairs = x.incomparable_pairs();
    let pick = match rule {
        SplitRule::First => pairs.first(),
        SplitRule::Last => pairs.last(),
    };
    let out = match pick {
        None => LinComb::single(x.chain_word()),
        Some(&(a, b)) => {
            let mut r = expand_rec(&x.with_relation(a, b), rule, memo);
            r.add_scaled(&expand_rec(&x.with_relation(b, a), rule, memo), &q(1));
            r
        }
    };
    memo.insert(x.clone(), out.clone());
    out
}

/// Linear extensions counted by dynamic programming over down-sets.
pub fn count_linear_extensions(x: &Poset2) -> u128 {
    let n = x.len();
    assert!(n <= 24, "linear-extension counter limited to 24 vertices");
    let preds: Vec<u32> = (0..n).map(|b| (0..n).filter(|&a| x.less(a, b)).fold(0u32, |m, a| m | 1 << a)).collect();
    let mut ways = vec![0u128; 1 << n];
    ways[0] = 1;
    for set in 0..(1usize << n) {
        if ways[set] == 0 {
            continue;
        }
        for (v, &pv) in preds.iter().enumerate() {
            if set >> v & 1 == 0 && (pv as usize & set) == pv as usize {
                ways[set | 1 << v] += ways[set];
            }
        }
    }
    ways[(1 << n) - 1]
}

pub fn poset_value(x: &Poset2, digits: u32) -> Result<BigReal> {
    let lc = expand(x)?;
    let mut acc = BigReal::zero(bits_for(digits, 10));
    for (w, c) in lc.iter() {
        acc += &eval_word(w, digits + 2)?.mul_ratio(c);
    }
    Ok(acc)
}
