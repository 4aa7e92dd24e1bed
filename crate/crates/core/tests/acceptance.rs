//! Acceptance suite: twelve criteria, one PASS/FAIL line each.
//!
//! The criteria run concurrently and report in order. Run with
//! `cargo test --release --test acceptance`.

use mmv_kit::closedforms::{
    eval_closed, load_fixtures, log_power_integrals, msv_double_closed, pi_normal, psi_via_conv_t, psi_via_mtv,
    thm_i_closed, verify_identity, zed, zed_closed, ThmICase,
};
use mmv_kit::indexcore::{positive_compositions, Index};
use mmv_kit::lincomb::{q, LinComb, Q};
use mmv_kit::linrel::{dim_upper_bound, express, harvest, RelationSet};
use mmv_kit::numeval::values::eval_psi_series;
use mmv_kit::numeval::{const_zeta, eval_index, eval_value, eval_word, BigReal, NamedValue};
use mmv_kit::poset2::{count_linear_extensions, expand, psi_poset, Poset2};
use mmv_kit::regutils::{reg_dbsf, series_word_to_integral, ConstAtom, ConstMonomial};
use mmv_kit::shell::{self, parse, render_digits};
use mmv_kit::wordalg::{admissible_words, dual_lc, dual_word, shuffle, stuffle, stuffle_indices, Word, WordComb};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

fn m(v: &[i64]) -> Index {
    Index::from_signed(v).unwrap()
}

fn close(a: &BigReal, b: &BigReal, e: i32) -> bool {
    (a - b).abs_lt_pow10(e)
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn eval_comb(lc: &WordComb, digits: u32, cache: &mut HashMap<Word, BigReal>) -> Result<BigReal, String> {
    let mut acc = BigReal::zero(mmv_kit::numeval::bits_for(digits, 10));
    for (x, c) in lc.iter() {
        if !cache.contains_key(x) {
            cache.insert(x.clone(), eval_word(x, digits).map_err(err)?);
        }
        acc += &cache[x].mul_ratio(c);
    }
    Ok(acc)
}

fn index_comb(pairs: &[(&[i64], i64)]) -> LinComb<Index> {
    pairs.iter().map(|(v, c)| (m(v), q(*c))).collect()
}

fn c1_stuffle_examples() -> Outcome {
    let got = stuffle_indices(&m(&[2, 1, -3]), &m(&[-2])).map_err(err)?;
    let want = index_comb(&[
        (&[-2, 2, 1, -3], 1),
        (&[2, -2, 1, -3], 1),
        (&[2, 1, -2, -3], 1),
        (&[2, 1, -3, -2], 1),
        (&[2, 1, -5], 2),
    ]);
    check(got == want, || format!("M(2,1,-3)*M(-2) = {got}"))?;
    let got = stuffle_indices(&m(&[1, -3]), &m(&[2, -3])).map_err(err)?;
    let want = index_comb(&[
        (&[1, 2, -3, -3], 2),
        (&[2, 1, -3, -3], 2),
        (&[2, -3, 1, -3], 1),
        (&[1, -3, 2, -3], 1),
        (&[3, -3, -3], 4),
        (&[1, 2, -6], 2),
        (&[2, 1, -6], 2),
        (&[3, -6], 4),
    ]);
    check(got == want, || format!("M(1,-3)*M(2,-3) = {got}"))?;
    Ok("both expansions exact".into())
}

fn c2_weight_three_regdbsf() -> Outcome {
    let r = reg_dbsf(&w("-0-")).map_err(err)?;
    let slices = r.tdegree_slices();
    let log2 = ConstMonomial::atom(ConstAtom::Log2);
    // 2·log2·M(2̌) − 2·M(1̌,2) + M(1,2̌) = 0
    let want: LinComb<(ConstMonomial, Word)> = [
        ((log2, w("0-")), q(2)),
        ((ConstMonomial::one(), w("0--")), q(-2)),
        ((ConstMonomial::one(), series_word_to_integral(&w("0-+")).map_err(err)?), q(1)),
    ]
    .into_iter()
    .collect();
    check(slices.len() == 1 && slices.get(&0) == Some(&want), || format!("relation {}", r.poly))?;
    let lhs = eval_index(&m(&[-1, 2]), 40).map_err(err)?.mul_int(2);
    let rhs = const_zeta(3, 40).map_err(err)?.mul_ratio(&Q::new(7.into(), 2.into()));
    check(close(&lhs, &rhs, -30), || format!("2M(-1,2) = {}", lhs.to_decimal(35)))?;
    let rs = harvest(3).map_err(err)?;
    let target: LinComb<Index> = LinComb::single(m(&[-1, 2]));
    let coeffs = express(&target, &[m(&[3])], &rs).map_err(err)?;
    check(coeffs == Some(vec![q(7)]), || format!("harvest expresses M(-1,2) as {coeffs:?}·M(3)"))?;
    Ok("2M(-1,2) = 2log2·M(-2) + M(1,-2) = 7/2·zeta(3)".into())
}

fn c3_duality() -> Outcome {
    let mut cache = HashMap::new();
    let mut n = 0;
    for wt in 2..=6 {
        for x in admissible_words(wt) {
            let Ok(d) = dual_word(&x) else { continue };
            check(dual_lc(&d).map_err(err)? == WordComb::single(x.clone()), || format!("dual∘dual({x})"))?;
            let a = eval_comb(&WordComb::single(x.clone()), 40, &mut cache)?;
            let b = eval_comb(&d, 40, &mut cache)?;
            check(close(&a, &b, -30), || format!("dual of {x}: {} vs {}", a.to_decimal(35), b.to_decimal(35)))?;
            n += 1;
        }
    }
    let lhs = eval_index(&m(&[-1, 1, 2]), 40).map_err(err)?;
    let mut rhs = eval_index(&m(&[-4]), 40).map_err(err)?;
    rhs += &eval_index(&m(&[-1, -3]), 40).map_err(err)?;
    rhs -= &eval_index(&m(&[-1, 3]), 40).map_err(err)?;
    check(close(&lhs, &rhs, -30), || "M(-1,1,2) = M(-4) + M(-1,-3) - M(-1,3)".into())?;
    Ok(format!("{n} words, involution exact, weight-4 example holds"))
}

fn c4_homomorphisms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let words: BTreeMap<usize, Vec<Word>> = (2..=5).map(|k| (k, admissible_words(k))).collect();
    let mut cache = HashMap::new();
    let mut worst = 0f64;
    for _ in 0..50 {
        let a = rng.gen_range(2..=5usize);
        let b = rng.gen_range(2..=7 - a);
        let u = &words[&a][rng.gen_range(0..words[&a].len())];
        let v = &words[&b][rng.gen_range(0..words[&b].len())];
        let eu = eval_comb(&WordComb::single(u.clone()), 40, &mut cache)?;
        let ev = eval_comb(&WordComb::single(v.clone()), 40, &mut cache)?;
        let prod = &eu * &ev;
        for (name, lc) in [("sha", shuffle(u, v)), ("st", stuffle(u, v).map_err(err)?)] {
            let val = eval_comb(&lc, 40, &mut cache)?;
            let r = (&prod - &val).abs();
            worst = worst.max(r.to_f64());
            check(r.abs_lt_pow10(-30), || format!("{name}: {u} · {v} residual {:.3e}", r.to_f64()))?;
        }
    }
    Ok(format!("50 pairs, worst residual {worst:.1e}"))
}

fn c5_contour_closed_forms() -> Outcome {
    let mut n = 0;
    for wt in [5u32, 7, 9, 11] {
        for qq in 2..wt {
            let p = wt - qq;
            let cf = eval_closed(&msv_double_closed(p, qq).map_err(err)?, 30).map_err(err)?;
            let num = eval_value(&NamedValue::S(vec![p, qq]), 30).map_err(err)?;
            check(close(&cf, &num, -25), || format!("S({p},{qq})"))?;
            n += 1;
        }
    }
    for (lhs, rhs) in [
        ("S(3,2)", "31/4*zeta(5) - 4*zeta(2)*zeta(3)"),
        ("S(1,1,1,2)", "-15/4*log2*zeta(4) - 9/4*zeta(2)*zeta(3) + 31/4*zeta(5)"),
    ] {
        let a = parse(lhs).map_err(err)?.eval(30).map_err(err)?;
        let b = parse(rhs).map_err(err)?.eval(30).map_err(err)?;
        check(close(&a, &b, -25), || format!("{lhs} = {rhs}"))?;
    }
    Ok(format!("{n} double S-values and both displayed evaluations"))
}

fn c6_psi_triple() -> Outcome {
    let mut n = 0;
    for wt in 1..=4 {
        for k in positive_compositions(wt) {
            for s in 2..=5u32 {
                let series = eval_psi_series(&k, s - 1, 30).map_err(err)?;
                let a = eval_closed(&psi_via_conv_t(&k, s).map_err(err)?, 30).map_err(err)?;
                let b = eval_closed(&psi_via_mtv(&k, s - 1).map_err(err)?, 30).map_err(err)?;
                check(close(&series, &a, -25), || format!("psi({k:?};{s}) via convoluted T"))?;
                check(close(&series, &b, -25), || format!("psi({k:?};{s}) via MTVs"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} (k, s) pairs"))
}

fn c7_zed() -> Outcome {
    for wt in 0..=6 {
        for j in 1..=3 {
            let got = pi_normal(&zed(j, j + wt).map_err(err)?);
            check(got == zed_closed(wt), || format!("Z({j},{}) = {got:?}", j + wt))?;
        }
        let want = Q::new(if wt % 2 == 0 { 1 } else { -1 }.into(), (1..=2 * wt as u64 + 1).product::<u64>().into());
        let c = zed_closed(wt).coeff(&ConstMonomial::pow(ConstAtom::Pi, 2 * wt as i32));
        check(c == want && zed_closed(wt).len() == 1, || format!("closed form at w = {wt}"))?;
    }
    Ok("w = 0..6 exact".into())
}

/// Linear extensions by a subset DP over predecessor masks.
fn brute_extensions(x: &Poset2) -> u128 {
    let n = x.len();
    let pred: Vec<u32> = (0..n).map(|b| (0..n).filter(|&a| x.less(a, b)).fold(0, |m, a| m | 1 << a)).collect();
    let mut ways = vec![0u128; 1 << n];
    ways[0] = 1;
    for mask in 0..1usize << n {
        if ways[mask] == 0 {
            continue;
        }
        for (b, &p) in pred.iter().enumerate() {
            if mask >> b & 1 == 0 && (p as usize) & !mask == 0 {
                ways[mask | 1 << b] += ways[mask];
            }
        }
    }
    ways[(1 << n) - 1]
}

fn c8_posets() -> Outcome {
    let mut n = 0;
    let mut cache = HashMap::new();
    for wt in 1..=5u32 {
        for k in positive_compositions(wt) {
            for p in 1..=6 - wt {
                let x = psi_poset(&k, p).map_err(err)?;
                let e = expand(&x).map_err(err)?;
                let count = brute_extensions(&x);
                check(e.mass() == Q::from_integer(count.into()), || format!("term count for psi({k:?};{})", p + 1))?;
                check(count_linear_extensions(&x) == count, || format!("counter for psi({k:?};{})", p + 1))?;
                let v = eval_comb(&e, 30, &mut cache)?;
                let s = eval_psi_series(&k, p, 30).map_err(err)?;
                check(close(&v, &s, -25), || format!("value of psi({k:?};{})", p + 1))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} posets"))
}

fn c9_dimensions() -> Outcome {
    let mut bounds = Vec::new();
    let mut verified = 0;
    for wt in 2..=6u32 {
        let rs = harvest(wt).map_err(err)?;
        verified += verify_relations(&rs)?;
        bounds.push(rs.bound());
    }
    check(bounds[..4] == [1, 2, 4, 7], || format!("bounds {bounds:?}"))?;
    for wt in 2..=5 {
        let rep = dim_upper_bound(wt).map_err(err)?;
        check(rep.bound as u64 == rep.fibonacci_bound && rep.table1 == Some(rep.bound as u32), || format!("{rep:?}"))?;
    }
    let flag = if bounds[4] > 12 { format!(" (exceeds table value 12 by {})", bounds[4] - 12) } else { String::new() };
    Ok(format!("bounds w=2..6 {bounds:?}; w=6 vs table 12{flag}; {verified} relations verified"))
}

/// Each relation Σ c·M = 0 is evaluated with enough digits that the raw
/// (unnormalized) residual is resolved below 1e−25.
fn verify_relations(rs: &RelationSet) -> Result<usize, String> {
    let mut values: HashMap<(Index, u32), BigReal> = HashMap::new();
    for r in &rs.relations {
        let scale =
            r.coeffs.iter().map(|(_, c)| c.numer().to_string().trim_start_matches('-').len() as u32).max().unwrap_or(1);
        let digits = 30 + scale;
        let mut acc = BigReal::zero(mmv_kit::numeval::bits_for(digits, 10));
        for (g, c) in r.coeffs.iter() {
            let key = (g.clone(), digits);
            if !values.contains_key(&key) {
                values.insert(key.clone(), eval_index(g, digits).map_err(err)?);
            }
            acc += &values[&key].mul_ratio(c);
        }
        check(acc.abs_lt_pow10(-25), || format!("weight {} relation {} fails", rs.weight, r.coeffs))?;
    }
    Ok(rs.relations.len())
}

fn c10_log_power_integrals() -> Outcome {
    let table = log_power_integrals(5, 6, 30).map_err(err)?;
    let at = |a: u32, b: u32| &table[(a * 7 + b) as usize];
    for case in ThmICase::ALL {
        for n in 1..=3 {
            for mm in 1..=3 {
                let (a, b) = case.exponents(n, mm);
                let cf = eval_closed(&thm_i_closed(case, n, mm).map_err(err)?, 30).map_err(err)?;
                check(close(at(a, b), &cf, -25), || format!("{case} n={n} m={mm}"))?;
            }
        }
    }
    let minus_one = BigReal::from_int(-1, mmv_kit::numeval::bits_for(30, 10));
    check(close(at(1, 1), &minus_one, -25), || "t·log anchor".into())?;
    let pi2_3 = parse("1/3*pi*pi").map_err(err)?.eval(30).map_err(err)?;
    check(close(at(0, 2), &pi2_3, -25), || "log² anchor".into())?;
    Ok("4 cases × 9 (n, m) and both anchors".into())
}

fn c11_fixtures() -> Outcome {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut n = 0;
    for file in ["psi_duality.jsonl", "triple_s.jsonl", "msv.jsonl"] {
        for f in load_fixtures(&dir.join(file)).map_err(err)? {
            let lhs = parse(&f.lhs).map_err(err)?;
            let rhs = parse(&f.rhs).map_err(err)?;
            let v = verify_identity(&lhs, &rhs, 40).map_err(err)?;
            check(v.pass, || format!("{}: residual {:.3e}", f.name, v.residual.to_f64()))?;
            n += 1;
        }
    }
    Ok(format!("{n} fixtures at 40 digits"))
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut e = Vec::new();
    let code = shell::run(std::iter::once("mmv-kit").chain(args.iter().copied()), &mut out, &mut e);
    (code, String::from_utf8(out).unwrap())
}

fn c12_cli() -> Outcome {
    for src in ["M(1,2,-3)", "2*T(3) - psi(1;2)", "Tconv(2|1,1,1)", "-(1/3*log2 + zeta(-1,3))*S(1,2)"] {
        let e = parse(src).map_err(err)?;
        check(parse(&e.to_string()).map_err(err)? == e, || format!("round trip of {src}"))?;
        let (code, out) = run_cli(&["eval", src, "--digits", "30"]);
        let lib = render_digits(&e.eval(30).map_err(err)?, 30);
        check(code == 0 && out.trim() == lib, || format!("eval {src}: {out}"))?;
    }
    let tmp = std::env::temp_dir().join(format!("mmv_kit_acceptance_{}.jsonl", std::process::id()));
    std::fs::write(
        &tmp,
        r#"{"name":"false","lhs":"T(3)","rhs":"T(3) + 1/1000","digits":30,"paper_ref":"deliberately false"}"#,
    )
    .map_err(err)?;
    let codes = [
        run_cli(&["eval", "M(2,"]).0,
        run_cli(&["eval", "M(2,1)"]).0,
        run_cli(&["verify", tmp.to_str().unwrap()]).0,
        run_cli(&["dual", "M(-1,1,2)"]).0,
    ];
    std::fs::remove_file(&tmp).ok();
    check(codes == [2, 3, 4, 0], || format!("exit codes {codes:?}"))?;
    let (code, out) = run_cli(&["dim", "--weight", "4"]);
    let j: serde_json::Value = serde_json::from_str(&out).map_err(err)?;
    let fields_ok = j["weight"] == 4
        && j["bound"] == 4
        && j["fibonacci_bound"] == 4
        && j["table1"] == 4
        && j["rank"].is_u64()
        && j["generators"].as_array().is_some_and(|g| g.iter().all(|x| x.is_string()));
    check(code == 0 && fields_ok, || format!("dim output {out}"))?;
    Ok("round trips, exit codes 0/2/3/4, dim JSON bound 4".into())
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        ("stuffle examples", c1_stuffle_examples),
        ("regularized DBSF at weight 3", c2_weight_three_regdbsf),
        ("duality to weight 6", c3_duality),
        ("shuffle and stuffle homomorphisms", c4_homomorphisms),
        ("contour closed forms", c5_contour_closed_forms),
        ("psi triple agreement", c6_psi_triple),
        ("Z closed form", c7_zed),
        ("poset expansion", c8_posets),
        ("dimension bounds", c9_dimensions),
        ("log-power integrals", c10_log_power_integrals),
        ("identity fixtures", c11_fixtures),
        ("command line", c12_cli),
    ];
    let results: Vec<(Outcome, Duration)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                s.spawn(move || {
                    let t = Instant::now();
                    (f(), t.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| (Err("panicked".into()), Duration::ZERO))).collect()
    });
    // Written to the stdout handle directly so the lines show without --nocapture.
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (i, ((name, _), (res, dt))) in criteria.iter().zip(&results).enumerate() {
        let (tag, msg) = match res {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        writeln!(out, "criterion {:>2} {tag} [{:>6.1}s] {name}: {msg}", i + 1, dt.as_secs_f64()).unwrap();
        if res.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
