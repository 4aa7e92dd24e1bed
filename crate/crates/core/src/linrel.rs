//! Exact linear algebra over Q, relation harvesting and dimension bounds.

use crate::error::{domain, Error, Result};
use crate::indexcore::{
    admissible_indices, alt_series_product, alternating_to_mmv, mmv_to_alternating, word_to_index, AltIndex, Index,
};
use crate::lincomb::{q, LinComb, Q};
use crate::numeval::{bits_for, eval_alt, eval_index, BigReal};
use crate::regutils::{reg_dbsf, reg_distribution, series_word_to_integral, ConstAtom, ConstMonomial};
use crate::wordalg::{admissible_words, all_words, dual_word, shuffle, stuffle, Letter, Word, WordComb};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

/// Largest weight accepted by [`harvest`].
pub const W_MAX: u32 = 8;

/// Conjectural dimensions of the MMV spaces for weights 0..=13.
pub const TABLE1_MMV: [u32; 14] = [1, 0, 1, 2, 4, 7, 12, 20, 33, 54, 88, 143, 232, 376];

/// F_w with F_0 = F_1 = 1.
pub fn fibonacci(w: u32) -> u64 {
    let (mut a, mut b) = (1u64, 1u64);
    for _ in 0..w {
        (a, b) = (b, a + b);
    }
    a
}

// ---------------------------------------------------------------------------
// Sparse fraction-free elimination

type IntRow = BTreeMap<usize, BigInt>;

/// Sparse matrix with rational entries, stored by rows.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub ncols: usize,
    pub rows: Vec<BTreeMap<usize, Q>>,
}

/// Pivot selection for [`SparseMatrix::echelon`].
#[derive(Clone, Debug)]
pub enum PivotOrder {
    /// Minimal Markowitz cost (r−1)(c−1); ties go to the lowest column, then row.
    Markowitz,
    /// Columns are eliminated in the given order; within a column the
    /// shortest row wins, ties to the lowest row.
    Columns(Vec<usize>),
}

/// Rows of an echelon form with their pivot columns and merged row labels.
pub struct Echelon {
    pub pivots: Vec<(usize, IntRow, BTreeSet<usize>)>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> SparseMatrix {
        SparseMatrix { ncols, rows: Vec::new() }
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> SparseMatrix {
        let ncols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect())
            .collect();
        SparseMatrix { ncols, rows }
    }

    pub fn push(&mut self, row: BTreeMap<usize, Q>) {
        self.rows.push(row);
    }

    /// Fraction-free forward elimination. Each row is kept primitive (content 1).
    pub fn echelon(&self, order: &PivotOrder) -> Echelon {
        let mut active: Vec<(IntRow, BTreeSet<usize>)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (integer_row(r), [i].into_iter().collect()))
            .filter(|(r, _)| !r.is_empty())
            .collect();
        let mut pivots = Vec::new();
        let mut col_queue: Vec<usize> = match order {
            PivotOrder::Columns(c) => c.iter().rev().copied().collect(),
            PivotOrder::Markowitz => Vec::new(),
        };
        loop {
            active.retain(|(r, _)| !r.is_empty());
            if active.is_empty() {
                break;
            }
            let choice = match order {
                PivotOrder::Markowitz => markowitz_pivot(&active),
                PivotOrder::Columns(_) => {
                    let mut found = None;
                    while let Some(&c) = col_queue.last() {
                        let best = active
                            .iter()
                            .enumerate()
                            .filter(|(_, (r, _))| r.contains_key(&c))
                            .min_by_key(|(i, (r, _))| (r.len(), *i))
                            .map(|(i, _)| i);
                        if let Some(i) = best {
                            found = Some((i, c));
                            col_queue.pop();
                            break;
                        }
                        col_queue.pop();
                    }
                    match found {
                        Some(x) => x,
                        None => break,
                    }
                }
            };
            let (pi, pc) = choice;
            let (prow, plabel) = active.swap_remove(pi);
            let a = prow[&pc].clone();
            for (row, label) in active.iter_mut() {
                if let Some(b) = row.get(&pc).cloned() {
                    *row = combine(row, &a, &prow, &b);
                    label.extend(plabel.iter().copied());
                }
            }
            pivots.push((pc, prow, plabel));
        }
        Echelon { pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon(&PivotOrder::Markowitz).pivots.len()
    }
}

fn integer_row(r: &BTreeMap<usize, Q>) -> IntRow {
    let mut l = BigInt::one();
    for x in r.values() {
        l = l.lcm(x.denom());
    }
    let row: IntRow = r.iter().filter(|(_, x)| !x.is_zero()).map(|(&i, x)| (i, x.numer() * (&l / x.denom()))).collect();
    primitive(row)
}

fn primitive(mut row: IntRow) -> IntRow {
    let mut g = BigInt::zero();
    for x in row.values() {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return IntRow::new();
    }
    if row.values().next().is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    if !g.is_one() {
        for x in row.values_mut() {
            *x = &*x / &g;
        }
    }
    row
}

/// a·row − b·prow, made primitive.
fn combine(row: &IntRow, a: &BigInt, prow: &IntRow, b: &BigInt) -> IntRow {
    let mut out: IntRow = row.iter().map(|(&i, x)| (i, x * a)).collect();
    for (&i, y) in prow {
        let v = out.remove(&i).unwrap_or_default() - y * b;
        if !v.is_zero() {
            out.insert(i, v);
        }
    }
    primitive(out)
}

fn markowitz_pivot(active: &[(IntRow, BTreeSet<usize>)]) -> (usize, usize) {
    let mut colcount: HashMap<usize, usize> = HashMap::new();
    for (r, _) in active {
        for &c in r.keys() {
            *colcount.entry(c).or_default() += 1;
        }
    }
    let mut best: Option<((usize, usize, usize), (usize, usize))> = None;
    for (i, (r, _)) in active.iter().enumerate() {
        for &c in r.keys() {
            let cost = (r.len() - 1) * (colcount[&c] - 1);
            let key = (cost, c, i);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, (i, c)));
            }
        }
    }
    best.expect("nonempty active rows").1
}

/// Exact rank and a basis of the right nullspace {x : Mx = 0}.
pub fn rational_rank(m: &SparseMatrix) -> (usize, Vec<Vec<Q>>) {
    let (rref, pivcols) = rref_dense(m);
    let rank = pivcols.len();
    let pivset: BTreeSet<usize> = pivcols.iter().copied().collect();
    let mut basis = Vec::new();
    for free in (0..m.ncols).filter(|c| !pivset.contains(c)) {
        let mut v = vec![Q::zero(); m.ncols];
        v[free] = Q::one();
        for (r, &pc) in pivcols.iter().enumerate() {
            v[pc] = -rref[r][free].clone();
        }
        basis.push(v);
    }
    (rank, basis)
}

/// Reduced row echelon form over Q; returns the nonzero rows and pivot columns.
fn rref_dense(m: &SparseMatrix) -> (Vec<Vec<Q>>, Vec<usize>) {
    let n = m.ncols;
    let mut a: Vec<Vec<Q>> = m
        .rows
        .iter()
        .map(|r| {
            let mut v = vec![Q::zero(); n];
            for (&i, x) in r {
                v[i] = x.clone();
            }
            v
        })
        .collect();
    let mut pivcols = Vec::new();
    let mut row = 0;
    for c in 0..n {
        let Some(p) = (row..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(row, p);
        let inv = Q::one() / a[row][c].clone();
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..a.len() {
            if i != row && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..n {
                    if !a[row][j].is_zero() {
                        let d = &f * &a[row][j];
                        a[i][j] -= d;
                    }
                }
            }
        }
        pivcols.push(c);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    a.truncate(row);
    (a, pivcols)
}

/// Solves A x = b over Q (free variables set to zero).
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.first().map_or(0, |r| r.len());
    let rows: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(r, y)| {
            let mut v = r.clone();
            v.push(y.clone());
            v
        })
        .collect();
    let (rref, piv) = rref_dense(&SparseMatrix::from_dense(&rows));
    if piv.contains(&n) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (r, &pc) in piv.iter().enumerate() {
        x[pc] = rref[r][n].clone();
    }
    Some(x)
}

// ---------------------------------------------------------------------------
// Harvesting

/// Where a relation came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Source {
    #[serde(rename = "DBSF")]
    Dbsf,
    #[serde(rename = "duality")]
    Duality,
    #[serde(rename = "regDBSF")]
    RegDbsf,
    #[serde(rename = "distribution")]
    Distribution,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Source::Dbsf => "DBSF",
            Source::Duality => "duality",
            Source::RegDbsf => "regDBSF",
            Source::Distribution => "distribution",
        };
        write!(f, "{s}")
    }
}

/// Column of a harvest matrix: an MMV generator or a convergent alternating
/// zeta value whose outermost entry is 1̄ (outside the MMV span in general).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Col {
    Gen(Index),
    Ext(AltIndex),
}

/// Which relation families [`harvest_with`] collects.
#[derive(Clone, Debug)]
pub struct HarvestOptions {
    pub dbsf: bool,
    pub duality: bool,
    pub reg_dbsf: bool,
    pub distribution: bool,
    /// Also take the T^d slices of relations from words of weight w + d, d ≤ this.
    pub extra_tdegree: u32,
    /// Digits used to verify each row.
    pub digits: u32,
    /// Rows must contract below 10^−tol_exp.
    pub tol_exp: i32,
}

impl Default for HarvestOptions {
    fn default() -> Self {
        HarvestOptions {
            dbsf: true,
            duality: true,
            reg_dbsf: true,
            distribution: true,
            extra_tdegree: 0,
            digits: 40,
            tol_exp: 25,
        }
    }
}

/// A relation among generators: Σ coeff·M = 0.
#[derive(Clone, Debug)]
pub struct Relation {
    pub coeffs: LinComb<Index>,
    pub sources: BTreeSet<Source>,
    pub tdegree: u32,
}

#[derive(Clone, Debug)]
pub struct RelationSet {
    pub weight: u32,
    pub generators: Vec<Index>,
    /// A basis of the harvested relations among the generators.
    pub relations: Vec<Relation>,
    pub raw_rows: usize,
    pub rejected_rows: usize,
    pub ext_columns: usize,
}

impl RelationSet {
    pub fn rank(&self) -> usize {
        self.relations.len()
    }

    pub fn bound(&self) -> usize {
        self.generators.len() - self.rank()
    }

    pub fn to_json(&self) -> RelationSetJson {
        RelationSetJson {
            weight: self.weight,
            generators: self.generators.iter().map(|g| g.to_string()).collect(),
            relations: self
                .relations
                .iter()
                .map(|r| RelationJson {
                    coeffs: r.coeffs.iter().map(|(i, c)| (i.to_string(), c.to_string())).collect(),
                    source: r.sources.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("+"),
                    tdegree: r.tdegree,
                })
                .collect(),
            rank: self.rank(),
            bound: self.bound(),
            fibonacci_bound: fibonacci(self.weight) - 1,
            table1: TABLE1_MMV.get(self.weight as usize).copied(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RelationJson {
    pub coeffs: BTreeMap<String, String>,
    pub source: String,
    pub tdegree: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RelationSetJson {
    pub weight: u32,
    pub generators: Vec<String>,
    pub relations: Vec<RelationJson>,
    pub rank: usize,
    pub bound: usize,
    pub fibonacci_bound: u64,
    pub table1: Option<u32>,
}

fn check_weight(w: u32) -> Result<()> {
    if !(2..=W_MAX).contains(&w) {
        return domain(format!("weight must lie in 2..={W_MAX}"));
    }
    Ok(())
}

pub fn harvest(w: u32) -> Result<RelationSet> {
    harvest_with(w, &HarvestOptions::default())
}

fn words_to_cols(lc: &WordComb) -> Result<LinComb<Col>> {
    let mut out = LinComb::zero();
    for (x, c) in lc.iter() {
        out.add_term(Col::Gen(word_to_index(x)?), c.clone());
    }
    Ok(out)
}

fn alt_seq_to_cols(seq: &[(u32, i8)]) -> LinComb<Col> {
    let a = AltIndex::from_pairs(seq);
    match seq.last() {
        Some(&(k, _)) if k >= 2 => {
            alternating_to_mmv(&a).iter().map(|(i, c)| (Col::Gen(i.clone()), c.clone())).collect()
        }
        _ => LinComb::single(Col::Ext(a)),
    }
}

/// (constant × word) in generator/extension coordinates, with constants
/// multiplied in through the alternating series product.
pub fn term_to_cols(c: &ConstMonomial, w: &Word) -> Result<LinComb<Col>> {
    if c.is_one() {
        if w.is_empty() {
            return domain("weight-zero term");
        }
        return Ok(LinComb::single(Col::Gen(word_to_index(w)?)));
    }
    let mut acc: LinComb<Vec<(u32, i8)>> = if w.is_empty() {
        LinComb::single(Vec::new())
    } else {
        mmv_to_alternating(&word_to_index(w)?)?.iter().map(|(a, x)| (a.pairs(), x.clone())).collect()
    };
    for (atom, &e) in c.atoms() {
        if e < 0 {
            return domain(format!("negative power of {atom} in a relation row"));
        }
        let factor: LinComb<Vec<(u32, i8)>> = match atom {
            ConstAtom::Log2 => LinComb::term(vec![(1, -1)], q(-1)),
            ConstAtom::Pi => return domain("pi in a relation row"),
            ConstAtom::Zeta(n) => LinComb::single(vec![(*n, 1)]),
            ConstAtom::AltZ(a) => LinComb::single(a.pairs()),
        };
        for _ in 0..e {
            acc = acc.bilinear(&factor, |x, y| alt_series_product(x, y));
        }
    }
    Ok(acc.map_linear(|s| alt_seq_to_cols(s)))
}

/// Distribution rows Σ_ε reg*(k; ε)(T) = 2^{|k|} reg*(k; +)(T + log2), sliced
/// at T-degree d for compositions of weight w + d. For admissible k and d = 0
/// this is Σ_ε M(k; ε) = 2^{|k|} M(k; +, …, +).
fn distribution_rows(w: u32, d: u32) -> Result<Vec<LinComb<Col>>> {
    let mut out = Vec::new();
    for k in crate::indexcore::positive_compositions(w + d) {
        let poly = reg_distribution(&k)?;
        let mut row = LinComb::zero();
        for ((c, y), z) in poly.slice(d).iter() {
            row.add_scaled(&term_to_cols(c, &series_word_to_integral(y)?)?, z);
        }
        out.push(row);
    }
    Ok(out)
}

pub fn harvest_with(w: u32, opts: &HarvestOptions) -> Result<RelationSet> {
    check_weight(w)?;
    let generators = admissible_indices(w);
    let mut rows: Vec<(LinComb<Col>, Source)> = Vec::new();
    if opts.dbsf {
        for a in 2..=w / 2 {
            let left = admissible_words(a as usize);
            let right = admissible_words((w - a) as usize);
            for u in &left {
                for v in &right {
                    if a == w - a && u > v {
                        continue;
                    }
                    let mut lc = shuffle(u, v);
                    lc.add_scaled(&stuffle(u, v)?, &q(-1));
                    rows.push((words_to_cols(&lc)?, Source::Dbsf));
                }
            }
        }
    }
    if opts.duality {
        for x in admissible_words(w as usize) {
            if x.letters().last() == Some(&Letter::N) {
                let mut lc = WordComb::single(x.clone());
                lc.add_scaled(&dual_word(&x)?, &q(-1));
                rows.push((words_to_cols(&lc)?, Source::Duality));
            }
        }
    }
    if opts.reg_dbsf {
        for d in 0..=opts.extra_tdegree {
            for x in all_words((w + d) as usize) {
                if !x.in_a1() || x.letters()[0] == Letter::O {
                    continue;
                }
                let rel = reg_dbsf(&x)?;
                let slice = rel.poly.slice(d);
                let mut row = LinComb::zero();
                for ((c, y), z) in slice.iter() {
                    row.add_scaled(&term_to_cols(c, y)?, z);
                }
                rows.push((row, Source::RegDbsf));
            }
        }
    }
    if opts.distribution {
        for d in 0..=opts.extra_tdegree {
            rows.extend(distribution_rows(w, d)?.into_iter().map(|r| (r, Source::Distribution)));
        }
    }
    rows.retain(|(r, _)| !r.is_zero());

    // Numeric gate.
    let mut values: HashMap<Col, BigReal> = HashMap::new();
    let mut kept = Vec::new();
    let mut rejected = 0;
    for (row, src) in rows {
        let bits = bits_for(opts.digits, 10);
        let mut acc = BigReal::zero(bits);
        for (col, c) in row.iter() {
            if !values.contains_key(col) {
                let v = match col {
                    Col::Gen(i) => eval_index(i, opts.digits)?,
                    Col::Ext(a) => eval_alt(a, opts.digits)?,
                };
                values.insert(col.clone(), v);
            }
            acc += &values[col].with_bits(bits).mul_ratio(c);
        }
        if acc.abs_lt_pow10(-opts.tol_exp) {
            kept.push((row, src));
        } else {
            rejected += 1;
        }
    }

    // Extension columns first, then generators.
    let mut ext: BTreeSet<AltIndex> = BTreeSet::new();
    for (row, _) in &kept {
        for (col, _) in row.iter() {
            if let Col::Ext(a) = col {
                ext.insert(a.clone());
            }
        }
    }
    let ext: Vec<AltIndex> = ext.into_iter().collect();
    let mut colidx: HashMap<Col, usize> = HashMap::new();
    for (i, a) in ext.iter().enumerate() {
        colidx.insert(Col::Ext(a.clone()), i);
    }
    let ne = ext.len();
    for (i, g) in generators.iter().enumerate() {
        colidx.insert(Col::Gen(g.clone()), ne + i);
    }
    let mut m = SparseMatrix::new(ne + generators.len());
    for (row, _) in &kept {
        let mut r = BTreeMap::new();
        for (col, c) in row.iter() {
            let i = *colidx.get(col).ok_or_else(|| Error::Validation(format!("unexpected column {col:?}")))?;
            r.insert(i, c.clone());
        }
        m.push(r);
    }
    let ech = m.echelon(&PivotOrder::Columns((0..m.ncols).collect()));
    let mut relations = Vec::new();
    for (pc, row, labels) in ech.pivots {
        if pc < ne {
            continue;
        }
        let coeffs: LinComb<Index> =
            row.iter().map(|(&i, x)| (generators[i - ne].clone(), Q::from_integer(x.clone()))).collect();
        let sources = labels.iter().map(|&l| kept[l].1).collect();
        relations.push(Relation { coeffs, sources, tdegree: 0 });
    }
    Ok(RelationSet { weight: w, generators, relations, raw_rows: kept.len(), rejected_rows: rejected, ext_columns: ne })
}

/// Dimension report for one weight: the relation-set schema without the relations.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DimReport {
    pub weight: u32,
    pub generators: Vec<String>,
    pub rank: usize,
    pub bound: usize,
    pub fibonacci_bound: u64,
    pub table1: Option<u32>,
}

pub fn dim_upper_bound(w: u32) -> Result<DimReport> {
    dim_report(&harvest(w)?)
}

pub fn dim_report(rs: &RelationSet) -> Result<DimReport> {
    Ok(DimReport {
        weight: rs.weight,
        generators: rs.generators.iter().map(|g| g.to_string()).collect(),
        rank: rs.rank(),
        bound: rs.bound(),
        fibonacci_bound: fibonacci(rs.weight) - 1,
        table1: TABLE1_MMV.get(rs.weight as usize).copied(),
    })
}

/// Coefficients c with target − Σ c_i·basis_i in the span of the harvested
/// relations, or `None` when the relations do not reach it.
pub fn express(target: &LinComb<Index>, basis: &[Index], rels: &RelationSet) -> Result<Option<Vec<Q>>> {
    for i in target.basis().chain(basis.iter()) {
        if i.weight() != rels.weight {
            return domain(format!("{i} does not have weight {}", rels.weight));
        }
    }
    let gens: BTreeMap<&Index, usize> = rels.generators.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let nunk = basis.len() + rels.relations.len();
    let mut a = vec![vec![Q::zero(); nunk]; gens.len()];
    let mut b = vec![Q::zero(); gens.len()];
    for (j, g) in basis.iter().enumerate() {
        a[gens[g]][j] = Q::one();
    }
    for (j, r) in rels.relations.iter().enumerate() {
        for (g, c) in r.coeffs.iter() {
            a[gens[g]][basis.len() + j] = c.clone();
        }
    }
    for (g, c) in target.iter() {
        let Some(&i) = gens.get(g) else {
            return domain(format!("{g} is not a generator"));
        };
        b[i] = c.clone();
    }
    Ok(solve(&a, &b).map(|x| x[..basis.len()].to_vec()))
}
