//! Shuffle and stuffle regularization of divergent words, the ρ map and
//! regularized double shuffle relations.
//!
//! Shuffle-side words use the iterated-integral encoding. Stuffle-side words
//! use the series block encoding (see [`crate::indexcore::series_blocks`]), in
//! which every block z_{k,ε} carries the parity of its own summation index.
//!
//! Regularized values are polynomials in T whose coefficients are rational
//! combinations of (constant monomial × admissible word). The empty word
//! stands for 1.

use crate::error::{domain, Result};
use crate::indexcore::{
    alt_series_product, alternating_to_mmv, index_to_word, mmv_series_product, mmv_to_alternating_any, qside,
    series_blocks, series_blocks_to_index, AltIndex,
};
use crate::lincomb::{q, qf, render_with, LinComb, Q};
use crate::numeval::{bits_for, const_log2, const_zeta, eval_alt, eval_index, eval_word, BigReal};
use crate::wordalg::{shuffle, Letter, Word, WordComb, ZBlock};
use num_bigint::BigInt;
use num_traits::One;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Transcendental constants appearing in regularized values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ConstAtom {
    Log2,
    Pi,
    /// ζ(n), n ≥ 2.
    Zeta(u32),
    /// A convergent alternating zeta value whose outermost entry is 1̄.
    AltZ(AltIndex),
}

impl ConstAtom {
    pub fn weight(&self) -> u32 {
        match self {
            ConstAtom::Log2 | ConstAtom::Pi => 1,
            ConstAtom::Zeta(n) => *n,
            ConstAtom::AltZ(a) => a.weight(),
        }
    }

    pub fn eval(&self, digits: u32) -> Result<BigReal> {
        match self {
            ConstAtom::Log2 => Ok(const_log2(digits)),
            ConstAtom::Pi => Ok(crate::numeval::const_pi(digits)),
            ConstAtom::Zeta(n) => const_zeta(*n, digits),
            ConstAtom::AltZ(a) => eval_alt(a, digits),
        }
    }
}

impl fmt::Display for ConstAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstAtom::Log2 => write!(f, "log2"),
            ConstAtom::Pi => write!(f, "pi"),
            ConstAtom::Zeta(n) => write!(f, "zeta({n})"),
            ConstAtom::AltZ(a) => write!(f, "{a}"),
        }
    }
}

/// A finitely supported product of atoms with integer exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct ConstMonomial(BTreeMap<ConstAtom, i32>);

impl ConstMonomial {
    pub fn one() -> ConstMonomial {
        ConstMonomial::default()
    }

    pub fn atom(a: ConstAtom) -> ConstMonomial {
        ConstMonomial([(a, 1)].into_iter().collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&ConstAtom, &i32)> {
        self.0.iter()
    }

    pub fn pow(a: ConstAtom, e: i32) -> ConstMonomial {
        if e == 0 {
            return ConstMonomial::one();
        }
        ConstMonomial([(a, e)].into_iter().collect())
    }

    /// Exponent of one atom (0 if absent).
    pub fn exponent(&self, a: &ConstAtom) -> i32 {
        self.0.get(a).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &ConstMonomial) -> ConstMonomial {
        let mut m = self.0.clone();
        for (a, e) in &other.0 {
            *m.entry(a.clone()).or_insert(0) += e;
        }
        m.retain(|_, e| *e != 0);
        ConstMonomial(m)
    }

    pub fn weight(&self) -> i32 {
        self.0.iter().map(|(a, e)| a.weight() as i32 * e).sum()
    }

    pub fn eval(&self, digits: u32) -> Result<BigReal> {
        let bits = bits_for(digits, 10);
        let mut acc = BigReal::one(bits);
        for (a, e) in &self.0 {
            let v = a.eval(digits + 4)?.with_bits(bits).powi(e.unsigned_abs());
            acc = if *e < 0 { acc.div(&v) } else { &acc * &v };
        }
        Ok(acc)
    }
}

impl fmt::Display for ConstMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.0.iter().map(|(a, &e)| if e == 1 { a.to_string() } else { format!("{a}^{e}") }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

pub type ConstComb = LinComb<ConstMonomial>;

fn const_mul(a: &ConstComb, b: &ConstComb) -> ConstComb {
    a.bilinear(b, |x, y| LinComb::single(x.mul(y)))
}

pub fn eval_const_comb(c: &ConstComb, digits: u32) -> Result<BigReal> {
    let mut acc = BigReal::zero(bits_for(digits, 10));
    for (m, x) in c.iter() {
        acc += &m.eval(digits + 2)?.mul_ratio(x);
    }
    Ok(acc)
}

/// Basis element of a [`TPoly`]: T^deg · constant · word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TTerm {
    pub deg: u32,
    pub c: ConstMonomial,
    pub w: Word,
}

/// A polynomial in T with (constant × word) coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TPoly(pub LinComb<TTerm>);

impl TPoly {
    pub fn zero() -> TPoly {
        TPoly::default()
    }

    pub fn one() -> TPoly {
        TPoly::word(Word::empty())
    }

    pub fn word(w: Word) -> TPoly {
        TPoly(LinComb::single(TTerm { deg: 0, c: ConstMonomial::one(), w }))
    }

    pub fn monomial(deg: u32, c: ConstMonomial, w: Word, x: Q) -> TPoly {
        TPoly(LinComb::term(TTerm { deg, c, w }, x))
    }

    /// T^n / n!
    pub fn t_power_over_factorial(n: u32) -> TPoly {
        TPoly::monomial(n, ConstMonomial::one(), Word::empty(), Q::new(BigInt::one(), factorial(n)))
    }

    pub fn from_consts(c: &ConstComb) -> TPoly {
        TPoly(c.iter().map(|(m, x)| (TTerm { deg: 0, c: m.clone(), w: Word::empty() }, x.clone())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn degree(&self) -> Option<u32> {
        self.0.iter().map(|(t, _)| t.deg).max()
    }

    pub fn add_scaled(&mut self, other: &TPoly, c: &Q) {
        self.0.add_scaled(&other.0, c);
    }

    pub fn scale(&self, c: &Q) -> TPoly {
        TPoly(self.0.scale(c))
    }

    /// Product where words multiply through `prod`.
    pub fn mul_with(&self, other: &TPoly, prod: impl Fn(&Word, &Word) -> WordComb) -> TPoly {
        let mut out = LinComb::zero();
        for (a, x) in self.0.iter() {
            for (b, y) in other.0.iter() {
                let c = a.c.mul(&b.c);
                let xy = x * y;
                for (w, z) in prod(&a.w, &b.w).iter() {
                    out.add_term(TTerm { deg: a.deg + b.deg, c: c.clone(), w: w.clone() }, &xy * z);
                }
            }
        }
        TPoly(out)
    }

    /// Product with a polynomial whose words are all empty.
    pub fn mul_scalar_poly(&self, other: &TPoly) -> TPoly {
        self.mul_with(other, |u, v| {
            debug_assert!(u.is_empty() || v.is_empty());
            WordComb::single(u.concat(v))
        })
    }

    /// The coefficient of T^d as (constant × word) terms.
    pub fn slice(&self, d: u32) -> LinComb<(ConstMonomial, Word)> {
        self.0.iter().filter(|(t, _)| t.deg == d).map(|(t, x)| ((t.c.clone(), t.w.clone()), x.clone())).collect()
    }

    pub fn map_words(&self, f: impl Fn(&Word) -> WordComb) -> TPoly {
        let mut out = LinComb::zero();
        for (t, x) in self.0.iter() {
            for (w, y) in f(&t.w).iter() {
                out.add_term(TTerm { deg: t.deg, c: t.c.clone(), w: w.clone() }, x * y);
            }
        }
        TPoly(out)
    }

    /// Numeric value at T = `t`, with words evaluated by `word_value`.
    pub fn eval_with(
        &self,
        t: &BigReal,
        digits: u32,
        word_value: impl Fn(&Word, u32) -> Result<BigReal>,
    ) -> Result<BigReal> {
        let bits = bits_for(digits, 10);
        let mut acc = BigReal::zero(bits);
        for (term, x) in self.0.iter() {
            let mut v = term.c.eval(digits + 4)?.with_bits(bits);
            if !term.w.is_empty() {
                v = &v * &word_value(&term.w, digits + 4)?.with_bits(bits);
            }
            v = &v * &t.with_bits(bits).powi(term.deg);
            acc += &v.mul_ratio(x);
        }
        Ok(acc)
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Highest T-degree first.
        let mut terms: Vec<_> = self.0.iter().collect();
        terms.sort_by(|a, b| b.0.deg.cmp(&a.0.deg).then_with(|| a.0.cmp(b.0)));
        let lc: LinComb<(std::cmp::Reverse<u32>, ConstMonomial, Word)> =
            terms.into_iter().map(|(t, x)| ((std::cmp::Reverse(t.deg), t.c.clone(), t.w.clone()), x.clone())).collect();
        let s = render_with(&lc, |(d, c, w)| {
            let mut parts = Vec::new();
            if !c.is_one() {
                parts.push(c.to_string());
            }
            match d.0 {
                0 => {}
                1 => parts.push("T".into()),
                n => parts.push(format!("T^{n}")),
            }
            if !w.is_empty() {
                parts.push(format!("[{w}]"));
            }
            if parts.is_empty() {
                "1".into()
            } else {
                parts.join("*")
            }
        });
        write!(f, "{s}")
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, b| a * b)
}

fn log2_atom() -> ConstMonomial {
    ConstMonomial::atom(ConstAtom::Log2)
}

/// T + c·log2 as a polynomial.
fn t_plus_log2(c: i64) -> TPoly {
    let mut p = TPoly::t_power_over_factorial(1);
    p.add_scaled(&TPoly::monomial(0, log2_atom(), Word::empty(), q(1)), &q(c));
    p
}

/// Canonical constant for a convergent alternating zeta value, reducing the
/// depth-one cases to log2 and ζ(n).
pub fn alt_constant(a: &AltIndex) -> ConstComb {
    if a.depth() == 0 {
        return LinComb::single(ConstMonomial::one());
    }
    if a.depth() == 1 {
        let n = a.k[0];
        if n == 1 {
            return LinComb::term(log2_atom(), q(-1));
        }
        let z = ConstMonomial::atom(ConstAtom::Zeta(n));
        if a.sgn[0] == 1 {
            return LinComb::single(z);
        }
        // ζ(n̄) = −(1 − 2^{1−n}) ζ(n)
        let c = Q::new(BigInt::one(), BigInt::one() << (n - 1)) - Q::one();
        return LinComb::term(z, c);
    }
    LinComb::single(ConstMonomial::atom(ConstAtom::AltZ(a.clone())))
}

// ---------------------------------------------------------------------------
// Shuffle side

thread_local! {
    static SHA_MEMO: RefCell<HashMap<Word, TPoly>> = RefCell::new(HashMap::new());
    static RUN_MEMO: RefCell<HashMap<Word, TPoly>> = RefCell::new(HashMap::new());
    static XREG_MEMO: RefCell<HashMap<Word, TPoly>> = RefCell::new(HashMap::new());
    static ST_MEMO: RefCell<HashMap<Vec<ZBlock>, TPoly>> = RefCell::new(HashMap::new());
    static ALT_MEMO: RefCell<HashMap<Vec<(u32, i8)>, AltPoly>> = RefCell::new(HashMap::new());
}

/// Shuffle regularization of a word of A¹, with ω+ ↦ T − log2 and ω− ↦ T + log2.
pub fn reg_shuffle(w: &Word) -> Result<TPoly> {
    if !w.in_a1() {
        return domain(format!("word {w} ends with ω0 and is not in A¹"));
    }
    Ok(reg_sha(w))
}

fn reg_sha(w: &Word) -> TPoly {
    if let Some(r) = SHA_MEMO.with(|m| m.borrow().get(w).cloned()) {
        return r;
    }
    let l = w.letters();
    let n = l.iter().take_while(|&&x| x != Letter::O).count();
    let out = if n == 0 {
        TPoly::word(w.clone())
    } else if n == l.len() {
        reg_pure_run(w)
    } else {
        // Σ_{j=0}^{n} (−1)^j (a_j⋯a_1) ⧢ (a_{j+1}⋯a_n b u) = (−1)^n b((a_n⋯a_1) ⧢ u)
        let a = &l[..n];
        let b = l[n];
        let u = Word::new(l[n + 1..].to_vec());
        let rev = Word::new(a.iter().rev().copied().collect());
        let sign = if n % 2 == 0 { q(1) } else { q(-1) };
        let mut out = TPoly::zero();
        for (x, c) in shuffle(&rev, &u).iter() {
            let mut v = vec![b];
            v.extend_from_slice(x.letters());
            out.add_scaled(&TPoly::word(Word::new(v)), &(c * &sign));
        }
        for j in 1..=n {
            let prefix = Word::new(a[..j].iter().rev().copied().collect());
            let rest = Word::new(l[j..].to_vec());
            let term = reg_pure_run(&prefix).mul_scalar_poly(&reg_sha(&rest));
            let s = if j % 2 == 0 { q(-1) } else { q(1) };
            out.add_scaled(&term, &s);
        }
        out
    };
    SHA_MEMO.with(|m| m.borrow_mut().insert(w.clone(), out.clone()));
    out
}

/// Regularized value of a word made only of ω±: a polynomial in T with
/// constant coefficients.
fn reg_pure_run(w: &Word) -> TPoly {
    if let Some(r) = RUN_MEMO.with(|m| m.borrow().get(w).cloned()) {
        return r;
    }
    let l = w.letters();
    let out = if l.iter().all(|&x| x == l[0]) {
        // a ⧢ a^{n−1} = n a^n
        let base = t_plus_log2(if l[0] == Letter::P { -1 } else { 1 });
        let mut p = TPoly::one();
        for _ in 0..l.len() {
            p = p.mul_scalar_poly(&base);
        }
        p.scale(&Q::new(BigInt::one(), factorial(l.len() as u32)))
    } else {
        // ω+ = Y − A and ω− = Y + A with Y = dt/(1−t), A = dt/(1+t).
        // Inside x-words the letters P and N stand for Y and A.
        let mut out = TPoly::zero();
        let n = l.len();
        for mask in 0..(1u32 << n) {
            let mut sign = 1i64;
            let x: Vec<Letter> = (0..n)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        if l[i] == Letter::P {
                            sign = -sign;
                        }
                        Letter::N
                    } else {
                        Letter::P
                    }
                })
                .collect();
            out.add_scaled(&xreg(&Word::new(x)), &q(sign));
        }
        out
    };
    RUN_MEMO.with(|m| m.borrow_mut().insert(w.clone(), out.clone()));
    out
}

/// Regularization of an x-word over {Y, A} (encoded as P, N) with Y ↦ T.
fn xreg(x: &Word) -> TPoly {
    if let Some(r) = XREG_MEMO.with(|m| m.borrow().get(x).cloned()) {
        return r;
    }
    let l = x.letters();
    let m = l.iter().take_while(|&&c| c == Letter::P).count();
    let out = if m == l.len() {
        TPoly::t_power_over_factorial(m as u32)
    } else if m == 0 {
        TPoly::from_consts(&x_constant(l))
    } else {
        let b = l[m];
        let u = Word::new(l[m + 1..].to_vec());
        let ys = Word::new(vec![Letter::P; m]);
        let sign = if m % 2 == 0 { q(1) } else { q(-1) };
        let mut out = TPoly::zero();
        for (w, c) in shuffle(&ys, &u).iter() {
            let mut v = vec![b];
            v.extend_from_slice(w.letters());
            out.add_scaled(&TPoly::from_consts(&x_constant(&v)), &(c * &sign));
        }
        for i in 1..=m {
            let rest = Word::new(l[i..].to_vec());
            let term = TPoly::t_power_over_factorial(i as u32).mul_scalar_poly(&xreg(&rest));
            let s = if i % 2 == 0 { q(-1) } else { q(1) };
            out.add_scaled(&term, &s);
        }
        out
    };
    XREG_MEMO.with(|m| m.borrow_mut().insert(x.clone(), out.clone()));
    out
}

/// ∫_0^1 of a convergent x-word made of Y (P) and A (N), as an alternating
/// zeta value with all exponents 1.
fn x_constant(l: &[Letter]) -> ConstComb {
    let r = l.len();
    let acc: Vec<i8> = l.iter().map(|&c| if c == Letter::P { 1 } else { -1 }).collect();
    // acc[p] = Π_{j ≥ r−1−p} sgn_j, with p counted from the outermost letter.
    let mut sgn = vec![0i8; r];
    for p in 0..r {
        sgn[r - 1 - p] = if p == 0 { acc[0] } else { acc[p] * acc[p - 1] };
    }
    let nneg = acc.iter().filter(|&&a| a == -1).count();
    let a = AltIndex { k: vec![1; r], sgn };
    let c = alt_constant(&a);
    if nneg % 2 == 1 {
        c.scale(&q(-1))
    } else {
        c
    }
}

// ---------------------------------------------------------------------------
// Stuffle side

/// Series product of two series-encoded words.
pub fn series_stuffle(u: &Word, v: &Word) -> Result<WordComb> {
    let a = to_pairs(&u.blocks()?);
    let b = to_pairs(&v.blocks()?);
    Ok(mmv_series_product(&a, &b).iter().map(|(p, c)| (Word::from_blocks(&from_pairs(p)), c.clone())).collect())
}

fn to_pairs(blocks: &[ZBlock]) -> Vec<(u32, i8)> {
    blocks.iter().rev().map(|b| (b.k, b.eps)).collect()
}

fn from_pairs(p: &[(u32, i8)]) -> Vec<ZBlock> {
    p.iter().rev().map(|&(k, e)| ZBlock::new(k, e)).collect()
}

/// Stuffle regularization of a series-encoded word of A¹, with z_{1,+} ↦ T
/// and z_{1,−} ↦ T + 2log2.
pub fn reg_stuffle(w: &Word) -> Result<TPoly> {
    if !w.in_a1() {
        return domain(format!("word {w} ends with ω0 and is not in A¹"));
    }
    Ok(reg_st(&w.blocks()?))
}

fn reg_st(blocks: &[ZBlock]) -> TPoly {
    if let Some(r) = ST_MEMO.with(|m| m.borrow().get(blocks).cloned()) {
        return r;
    }
    let n = blocks.iter().take_while(|b| b.k == 1).count();
    let out = if n == 0 {
        TPoly::word(Word::from_blocks(blocks))
    } else if blocks[..n].iter().all(|b| b.eps == blocks[0].eps) {
        // a * (a^{n−1} v) = n·a^n v + terms with shorter leading runs
        let a = blocks[0];
        let shorter = &blocks[1..];
        let mut rest = mmv_series_product(&to_pairs(&[a]), &to_pairs(shorter));
        rest.add_term(to_pairs(blocks), -q(n as i64));
        let base = t_plus_log2(if a.eps == 1 { 0 } else { 2 });
        let mut out = base.mul_scalar_poly(&reg_st(shorter));
        for (p, c) in rest.iter() {
            out.add_scaled(&reg_st(&from_pairs(p)), &-c);
        }
        out.scale(&qf(1, n as i64))
    } else {
        reg_st_alternating(blocks)
    };
    ST_MEMO.with(|m| m.borrow_mut().insert(blocks.to_vec(), out.clone()));
    out
}

type AltPoly = LinComb<(u32, ConstMonomial, Vec<(u32, i8)>)>;

/// Mixed leading runs: expand into alternating sums over a common range,
/// regularize with ζ(1) ↦ T + log2, and convert back.
fn reg_st_alternating(blocks: &[ZBlock]) -> TPoly {
    let idx = series_blocks_to_index(&Word::from_blocks(blocks)).expect("nonempty block word");
    let mut out = TPoly::zero();
    for (a, c) in mmv_to_alternating_any(&idx).iter() {
        for ((deg, m, seq), x) in reg_alt(&a.pairs()).iter() {
            let alt = AltIndex::from_pairs(seq);
            let coeff = x * c;
            if seq.last().is_some_and(|&(k, _)| k >= 2) {
                for (i, y) in alternating_to_mmv(&alt).iter() {
                    out.add_scaled(&TPoly::monomial(*deg, m.clone(), series_blocks(i), y.clone()), &coeff);
                }
            } else {
                for (m2, y) in alt_constant(&alt).iter() {
                    out.add_scaled(&TPoly::monomial(*deg, m.mul(m2), Word::empty(), y.clone()), &coeff);
                }
            }
        }
    }
    out
}

fn reg_alt(seq: &[(u32, i8)]) -> AltPoly {
    if let Some(r) = ALT_MEMO.with(|m| m.borrow().get(seq).cloned()) {
        return r;
    }
    let n = seq.iter().rev().take_while(|&&p| p == (1, 1)).count();
    let out = if n == 0 {
        AltPoly::single((0, ConstMonomial::one(), seq.to_vec()))
    } else {
        let shorter = &seq[..seq.len() - 1];
        let mut rest = alt_series_product(&[(1, 1)], shorter);
        rest.add_term(seq.to_vec(), -q(n as i64));
        let mut out = AltPoly::zero();
        for ((d, m, s), x) in reg_alt(shorter).iter() {
            out.add_term((d + 1, m.clone(), s.clone()), x.clone());
            out.add_term((*d, m.mul(&log2_atom()), s.clone()), x.clone());
        }
        for (p, c) in rest.iter() {
            out.add_scaled(&reg_alt(p), &-c);
        }
        out.scale(&qf(1, n as i64))
    };
    ALT_MEMO.with(|m| m.borrow_mut().insert(seq.to_vec(), out.clone()));
    out
}

// ---------------------------------------------------------------------------
// The comparison map

/// Coefficients a_i of exp(Σ_{n≥2} (−1)^n ζ(n) u^n / n) up to u^max.
pub fn rho_series(max: u32) -> Vec<ConstComb> {
    let mut a: Vec<ConstComb> = vec![LinComb::single(ConstMonomial::one())];
    for m in 1..=max {
        // m a_m = Σ_{n=2}^{m} (−1)^n ζ(n) a_{m−n}
        let mut acc = ConstComb::zero();
        for n in 2..=m {
            let z = LinComb::term(ConstMonomial::atom(ConstAtom::Zeta(n)), q(if n % 2 == 0 { 1 } else { -1 }));
            acc.add_scaled(&const_mul(&z, &a[(m - n) as usize]), &q(1));
        }
        a.push(acc.scale(&qf(1, m as i64)));
    }
    a
}

/// ρ(e^{Tu}) = exp(Σ_{n≥2} (−1)^n ζ(n) u^n / n) · e^{(T − log2)u}, extended linearly.
pub fn rho_map(p: &TPoly) -> TPoly {
    let maxdeg = p.degree().unwrap_or(0);
    let a = rho_series(maxdeg);
    let mut out = TPoly::zero();
    for (t, x) in p.0.iter() {
        let n = t.deg;
        let nf = factorial(n);
        for i in 0..=n {
            for j in 0..=n - i {
                let m = n - i - j;
                // n! · a_i · (−log2)^j / j! · T^m / m!
                let scale = Q::new(nf.clone(), factorial(j) * factorial(m)) * if j % 2 == 1 { q(-1) } else { q(1) };
                let mut lg = ConstMonomial::one();
                for _ in 0..j {
                    lg = lg.mul(&log2_atom());
                }
                for (ci, y) in a[i as usize].iter() {
                    let c = t.c.mul(&lg).mul(ci);
                    out.0.add_term(TTerm { deg: m, c, w: t.w.clone() }, x * y * &scale);
                }
            }
        }
    }
    out
}

/// A regularized double shuffle relation: `poly` vanishes in every T-degree.
#[derive(Clone, Debug)]
pub struct DbsfRelation {
    pub word: Word,
    pub poly: TPoly,
}

impl DbsfRelation {
    pub fn tdegree_slices(&self) -> BTreeMap<u32, LinComb<(ConstMonomial, Word)>> {
        let mut out = BTreeMap::new();
        if let Some(d) = self.poly.degree() {
            for k in 0..=d {
                let s = self.poly.slice(k);
                if !s.is_zero() {
                    out.insert(k, s);
                }
            }
        }
        out
    }

    pub fn is_trivial(&self) -> bool {
        self.poly.is_zero()
    }
}

/// Converts a series-encoded admissible word to the iterated-integral word of
/// the same value.
pub fn series_word_to_integral(w: &Word) -> Result<Word> {
    if w.is_empty() {
        return Ok(Word::empty());
    }
    index_to_word(&series_blocks_to_index(w)?)
}

/// reg_shuffle(w) − ρ(reg_stuffle(qside(w))), expressed over integral words.
pub fn reg_dbsf(w: &Word) -> Result<DbsfRelation> {
    let sha = reg_shuffle(w)?;
    let st = rho_map(&reg_stuffle(&qside(w)?)?);
    let st = st.map_words(|x| WordComb::single(series_word_to_integral(x).expect("admissible series word")));
    let mut poly = sha;
    poly.add_scaled(&st, &q(-1));
    Ok(DbsfRelation { word: w.clone(), poly })
}

/// T ↦ T + c·log2.
pub fn shift_t_by_log2(p: &TPoly, c: i64) -> TPoly {
    let mut out = TPoly::zero();
    for (t, x) in p.0.iter() {
        let mut lg = ConstMonomial::one();
        for i in 0..=t.deg {
            // C(n, i) c^i log2^i T^{n−i}
            let b =
                Q::from_integer(num_integer::binomial(BigInt::from(t.deg), BigInt::from(i)) * BigInt::from(c).pow(i));
            out.0.add_term(TTerm { deg: t.deg - i, c: t.c.mul(&lg), w: t.w.clone() }, x * b);
            lg = lg.mul(&log2_atom());
        }
    }
    out
}

/// Regularized distribution relation for a composition k of weight w:
/// Σ_ε reg*(k; ε)(T) − 2^w reg*(k; +, …, +)(T + log2), over series words.
///
/// It comes from Σ_ε M_N(k; ε) = 2^r ζ_N(k) and M_N(k; +) = 2^{r−w} ζ_{N/2}(k).
pub fn reg_distribution(k: &[u32]) -> Result<TPoly> {
    if k.is_empty() || k.contains(&0) {
        return domain("reg_distribution needs a composition");
    }
    let r = k.len();
    let w: u32 = k.iter().sum();
    let mut out = TPoly::zero();
    for eps in crate::indexcore::sign_vectors(r) {
        let idx = crate::indexcore::Index::new(k.to_vec(), eps)?;
        out.add_scaled(&reg_stuffle(&series_blocks(&idx))?, &q(1));
    }
    let plus = crate::indexcore::Index::new(k.to_vec(), vec![1; r])?;
    let shifted = shift_t_by_log2(&reg_stuffle(&series_blocks(&plus))?, 1);
    out.add_scaled(&shifted, &-Q::from_integer(BigInt::one() << w));
    Ok(out)
}

/// Numeric value of a polynomial over integral words at T = `t`.
pub fn eval_integral_tpoly(p: &TPoly, t: &BigReal, digits: u32) -> Result<BigReal> {
    p.eval_with(t, digits, eval_word)
}

/// Numeric value of a polynomial over series-encoded words at T = `t`.
pub fn eval_series_tpoly(p: &TPoly, t: &BigReal, digits: u32) -> Result<BigReal> {
    p.eval_with(t, digits, |w, d| eval_index(&series_blocks_to_index(w)?, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wordalg::all_words;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn zero(bits_digits: u32) -> BigReal {
        BigReal::zero(bits_for(bits_digits, 10))
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(reg_shuffle(&w("0-")).unwrap(), TPoly::word(w("0-")));
        assert_eq!(reg_shuffle(&w("-")).unwrap().to_string(), "T + log2");
        assert_eq!(reg_shuffle(&w("+")).unwrap().to_string(), "T - log2");
        assert_eq!(reg_shuffle(&w("-0-")).unwrap().to_string(), "T*[0-] - 2*[0--] + log2*[0-]");
        assert!(reg_shuffle(&w("-0")).is_err());
    }

    #[test]
    fn stuffle_examples() {
        assert_eq!(reg_stuffle(&w("+")).unwrap().to_string(), "T");
        assert_eq!(reg_stuffle(&w("-")).unwrap().to_string(), "T + 2*log2");
        // z_{1,+} z_{2,−} ↦ T·M(2̌) − M(1,2̌)
        assert_eq!(reg_stuffle(&w("+0-")).unwrap().to_string(), "T*[0-] - [0-+]");
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho_map(&TPoly::one()), TPoly::one());
        assert_eq!(rho_map(&TPoly::t_power_over_factorial(1)).to_string(), "T - log2");
        let t2 = TPoly::t_power_over_factorial(2).scale(&q(2));
        assert_eq!(rho_map(&t2).to_string(), "T^2 - 2*log2*T + log2^2 + zeta(2)");
    }

    #[test]
    fn weight_three_relation() {
        let r = reg_dbsf(&w("-0-")).unwrap();
        let s = r.tdegree_slices();
        assert_eq!(s.len(), 1);
        // 2 log2·M(2̌) − 2M(1̌,2) + M(1,2̌) = 0
        let expect: LinComb<(ConstMonomial, Word)> = [
            ((log2_atom(), w("0-")), q(2)),
            ((ConstMonomial::one(), w("0--")), q(-2)),
            ((ConstMonomial::one(), series_word_to_integral(&w("0-+")).unwrap()), q(1)),
        ]
        .into_iter()
        .collect();
        assert!(s[&0] == expect);
    }

    #[test]
    fn peeling_identity() {
        // Σ_j (−1)^j (a_j⋯a_1) ⧢ (a_{j+1}⋯a_n b u) = (−1)^n b((a_n⋯a_1) ⧢ u)
        let a = w("+-+");
        let v = w("0-0+");
        let l = a.letters();
        let mut lhs = WordComb::zero();
        for j in 0..=l.len() {
            let pre = Word::new(l[..j].iter().rev().copied().collect());
            let rest = Word::new(l[j..].to_vec()).concat(&v);
            lhs.add_scaled(&shuffle(&pre, &rest), &q(if j % 2 == 0 { 1 } else { -1 }));
        }
        let rev = Word::new(l.iter().rev().copied().collect());
        let mut rhs = WordComb::zero();
        for (x, c) in shuffle(&rev, &w("-0+")).iter() {
            rhs.add_term(w("0").concat(x), -c.clone());
        }
        assert_eq!(lhs, rhs);
    }

    fn a1_words(max: usize) -> Vec<Word> {
        (1..=max).flat_map(all_words).filter(|x| x.in_a1()).collect()
    }

    #[test]
    fn shuffle_homomorphism_numeric() {
        let digits = 30;
        let t = BigReal::from_frac(3, 7, bits_for(digits, 10));
        let words = a1_words(3);
        for u in &words {
            for v in &words {
                if u.weight() + v.weight() > 4 || u > v {
                    continue;
                }
                let lhs: TPoly = {
                    let mut p = TPoly::zero();
                    for (x, c) in shuffle(u, v).iter() {
                        p.add_scaled(&reg_shuffle(x).unwrap(), c);
                    }
                    p
                };
                let rhs = reg_shuffle(u).unwrap().mul_with(&reg_shuffle(v).unwrap(), shuffle);
                let a = eval_integral_tpoly(&lhs, &t, digits).unwrap();
                let b = eval_integral_tpoly(&rhs, &t, digits).unwrap();
                assert!((&a - &b).abs_lt_pow10(-25), "{u} ⧢ {v}");
            }
        }
        let _ = zero(1);
    }

    #[test]
    fn shuffle_homomorphism_symbolic_homogeneous() {
        for (u, v) in [("-", "0-"), ("--", "0+"), ("+", "+0-"), ("-", "-")] {
            let (u, v) = (w(u), w(v));
            let mut lhs = TPoly::zero();
            for (x, c) in shuffle(&u, &v).iter() {
                lhs.add_scaled(&reg_shuffle(x).unwrap(), c);
            }
            let rhs = reg_shuffle(&u).unwrap().mul_with(&reg_shuffle(&v).unwrap(), shuffle);
            assert_eq!(lhs, rhs, "{u} ⧢ {v}");
        }
    }

    #[test]
    fn stuffle_homomorphism_numeric() {
        let digits = 30;
        let t = BigReal::from_frac(-2, 5, bits_for(digits, 10));
        let words = a1_words(3);
        let prod = |a: &Word, b: &Word| series_stuffle(a, b).unwrap();
        for u in &words {
            for v in &words {
                if u.weight() + v.weight() > 4 || u > v {
                    continue;
                }
                let mut lhs = TPoly::zero();
                for (x, c) in prod(u, v).iter() {
                    lhs.add_scaled(&reg_stuffle(x).unwrap(), c);
                }
                let rhs = reg_stuffle(u).unwrap().mul_with(&reg_stuffle(v).unwrap(), prod);
                let a = eval_series_tpoly(&lhs, &t, digits).unwrap();
                let b = eval_series_tpoly(&rhs, &t, digits).unwrap();
                assert!((&a - &b).abs_lt_pow10(-25), "{u} * {v}");
            }
        }
    }

    #[test]
    fn distribution_relations_hold_numerically() {
        let digits = 30;
        for k in [vec![1u32], vec![2], vec![1, 1], vec![2, 1], vec![1, 2], vec![1, 1, 1], vec![3, 1], vec![1, 2, 1]] {
            let p = reg_distribution(&k).unwrap();
            for t in [BigReal::zero(bits_for(digits, 10)), BigReal::from_frac(2, 3, bits_for(digits, 10))] {
                let v = eval_series_tpoly(&p, &t, digits).unwrap();
                assert!(v.abs_lt_pow10(-25), "{k:?}: {p}");
            }
        }
    }

    #[test]
    fn dbsf_relations_hold_numerically() {
        let digits = 30;
        for len in 1..=4 {
            for x in all_words(len).into_iter().filter(|x| x.in_a1()) {
                let r = reg_dbsf(&x).unwrap();
                for t in [BigReal::zero(bits_for(digits, 10)), BigReal::from_frac(1, 3, bits_for(digits, 10))] {
                    let v = eval_integral_tpoly(&r.poly, &t, digits).unwrap();
                    assert!(v.abs_lt_pow10(-25), "{x}: {}", r.poly);
                }
            }
        }
    }
}
