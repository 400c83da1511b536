//! Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and
//! exits nonzero if any check fails.

mod common;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use coref_em::corpus::{load_corpus, LoadOptions, Partition, Span};
use coref_em::mentions::{assign_modes, DocumentContext, ResolutionMode};
use coref_em::metrics::{b_cubed, blanc, ceaf_e, ceaf_m, conll_average, muc, Score};
use coref_em::model::{
    decode_document, e_step_corpus, m_step, posterior_row, train_em,
    ParameterTables, TrainConfig,
};
use coref_em::pipeline::{analyze_corpus, analyze_document, evaluate, PipelineConfig};
use coref_em::representation::EncodedDocument;
use rand::Rng;

type Check = Result<String, String>;
type CheckFn = fn() -> Check;

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap()
}

fn monotonicity() -> Check {
    let docs = common::sample_corpus(&common::truth(), 1000, 1);
    let start = Instant::now();
    let config = TrainConfig {
        iterations: 10,
        ..TrainConfig::default()
    };
    let out = train_em::<f64>(&docs, &config, None).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut prev = out.initial_loglik;
    for rec in &out.trace {
        if rec.loglik < prev - 1e-9 * prev.abs() {
            return Err(format!("iteration {} dropped {prev} -> {}", rec.iteration, rec.loglik));
        }
        prev = rec.loglik;
    }
    if elapsed > Duration::from_secs(60) {
        return Err(format!("took {elapsed:.1?}"));
    }
    Ok(format!(
        "loglik {:.3} -> {:.3} over 10 iterations in {elapsed:.2?}",
        out.initial_loglik, prev
    ))
}

fn normalization() -> Check {
    let mut worst_m = 0.0f64;
    let mut worst_post = 0.0f64;
    for seed in 0..200u64 {
        let mut rng = common::rng(seed);
        let docs: Vec<EncodedDocument> = (0..8).map(|_| common::random_document(&mut rng, 10)).collect();
        let mut theta = ParameterTables::<f64>::default();
        for _ in 0..3 {
            let stats = e_step_corpus(&docs, &theta, &pool(1)).map_err(|e| e.to_string())?;
            theta = m_step(&stats, theta.buckets(), 1e-10);
            let (err, nonneg) = theta.normalization_error();
            if !nonneg {
                return Err(format!("negative probability, seed {seed}"));
            }
            worst_m = worst_m.max(err);
        }
        let random = common::random_theta(&mut rng);
        for th in [&theta, &random] {
            for doc in &docs {
                for j in 1..=doc.len() {
                    let row = posterior_row(doc, j, th).map_err(|e| e.to_string())?;
                    let s: f64 = row.weights.iter().sum();
                    worst_post = worst_post.max((s - 1.0).abs());
                }
            }
        }
    }
    if worst_m > 1e-10 || worst_post > 1e-12 {
        return Err(format!("m-step error {worst_m:e}, posterior error {worst_post:e}"));
    }
    Ok(format!("max row error {worst_m:.1e}, max posterior error {worst_post:.1e} over 200 corpora"))
}

fn decoder() -> Check {
    for seed in 0..200u64 {
        let mut rng = common::rng(1000 + seed);
        let theta = common::random_theta(&mut rng);
        let doc = common::random_document(&mut rng, 6);
        let got = decode_document(&doc, &theta).antecedents;
        let want = common::brute_force_decode(&doc, &theta);
        if got != want {
            return Err(format!("seed {seed}: decoder {got:?}, exhaustive {want:?}"));
        }
    }
    Ok("200 documents match the exhaustive argmax".into())
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn recovery() -> Check {
    let truth = common::truth();
    let docs = common::sample_corpus(&truth, 10_000, 2);
    let start = Instant::now();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let pool = pool(workers);
    let buckets = truth.theta.buckets().clone();
    let mut theta = ParameterTables::<f64>::uniform(buckets.clone(), 1e-10);
    let mut stats = e_step_corpus(&docs, &theta, &pool).map_err(|e| e.to_string())?;
    // converged once a round improves the log-likelihood by under 1e-9
    // relative; later rounds move entries by well under 1e-3
    let mut rounds = 0;
    let mut prev = stats.loglik;
    while rounds < 5000 {
        theta = m_step(&stats, &buckets, 1e-10);
        stats = e_step_corpus(&docs, &theta, &pool).map_err(|e| e.to_string())?;
        rounds += 1;
        let gain = (stats.loglik - prev) / prev.abs();
        prev = stats.loglik;
        if gain < 1e-9 {
            break;
        }
    }
    let elapsed = start.elapsed();

    let mut worst_t = 0.0f64;
    let mut rows = 0;
    for mode in [ResolutionMode::Prec, ResolutionMode::Attr] {
        for (c, row) in truth.theta.table(mode).explicit_rows() {
            let seen = stats.c_t_cond[mode.index()].get(&(c as u16)).copied().unwrap_or(0.0);
            if seen >= 500.0 {
                worst_t = worst_t.max(l1(row, &theta.table(mode).row(c)));
                rows += 1;
            }
        }
    }
    let q_err = l1(truth.theta.q(), theta.q());
    let summary = format!(
        "{rounds} rounds in {elapsed:.1?}; {rows} rows, worst t L1 {worst_t:.4}, q L1 {q_err:.4}"
    );
    if rows == 0 || worst_t > 0.05 || q_err > 0.02 || elapsed > Duration::from_secs(300) {
        return Err(summary);
    }
    Ok(summary)
}

/// Single-letter mentions in sentence 0.
fn part(chains: &[&str]) -> Partition {
    Partition::new(chains.iter().map(|c| {
        c.bytes()
            .map(|b| Span::new(0, (b - b'a') as usize, (b - b'a') as usize))
            .collect::<Vec<_>>()
    }))
    .unwrap()
}

type Expect = [f64; 3];

struct Fixture {
    key: &'static [&'static str],
    response: &'static [&'static str],
    /// R, P, F1 for MUC, B³, CEAF_m, CEAF_e, BLANC; `None` skips a metric.
    expect: [Option<Expect>; 5],
}

fn f(r: f64, p: f64) -> Expect {
    let f1 = if r + p > 0.0 { 2.0 * r * p / (r + p) } else { 0.0 };
    [r, p, f1]
}

fn fixtures() -> Vec<Fixture> {
    let one = Some([1.0, 1.0, 1.0]);
    let zero = Some([0.0, 0.0, 0.0]);
    // mixed: key {abc}{de}, response {ab}{cd}{f}
    let (rc, pc, rn, pn) = (0.25, 0.5, 2.0 / 6.0, 2.0 / 8.0);
    let blanc_mixed = [(rc + rn) / 2.0, (pc + pn) / 2.0, (f(rc, pc)[2] + f(rn, pn)[2]) / 2.0];
    let rb = (4.0 / 3.0 + 1.0 / 3.0 + 0.5) / 5.0;
    vec![
        Fixture { key: &["abc", "de", "f"], response: &["abc", "de", "f"], expect: [one, one, one, one, one] },
        Fixture { key: &["abc"], response: &["ab", "c"], expect: [
            Some(f(0.5, 1.0)),
            Some(f(5.0 / 9.0, 1.0)),
            Some(f(2.0 / 3.0, 2.0 / 3.0)),
            Some(f(0.8, 0.4)),
            None,
        ] },
        Fixture { key: &["ab", "c"], response: &["abc"], expect: [
            Some(f(1.0, 0.5)),
            Some(f(1.0, 5.0 / 9.0)),
            Some(f(2.0 / 3.0, 2.0 / 3.0)),
            Some(f(0.4, 0.8)),
            None,
        ] },
        Fixture { key: &["a"], response: &["b"], expect: [zero, zero, zero, zero, zero] },
        Fixture { key: &["ab"], response: &["abc"], expect: [
            Some(f(1.0, 0.5)),
            Some(f(1.0, 4.0 / 9.0)),
            Some(f(1.0, 2.0 / 3.0)),
            Some(f(0.8, 0.8)),
            None,
        ] },
        Fixture { key: &["abc", "de"], response: &["abd", "ce"], expect: [
            None,
            None,
            Some(f(0.6, 0.6)),
            None,
            None,
        ] },
        Fixture { key: &["ab", "c"], response: &["a", "b", "c"], expect: [
            Some(f(0.0, 0.0)),
            Some(f(2.0 / 3.0, 1.0)),
            Some(f(2.0 / 3.0, 2.0 / 3.0)),
            Some(f(5.0 / 6.0, 5.0 / 9.0)),
            Some([0.5, 1.0 / 3.0, 0.4]),
        ] },
        Fixture { key: &["abc", "de"], response: &["ab", "cd", "f"], expect: [
            Some(f(1.0 / 3.0, 0.5)),
            Some(f(rb, 0.6)),
            Some(f(0.6, 0.6)),
            Some(f(0.65, 1.3 / 3.0)),
            Some(blanc_mixed),
        ] },
        Fixture { key: &["a", "b", "c"], response: &["a", "b", "c"], expect: [zero, one, one, one, one] },
    ]
}

type Metric = fn(&Partition, &Partition) -> Score<f64>;

fn metric_oracles() -> Check {
    let metrics: [(&str, Metric); 5] = [
        ("MUC", muc::<f64>),
        ("B3", b_cubed::<f64>),
        ("CEAF_m", ceaf_m::<f64>),
        ("CEAF_e", ceaf_e::<f64>),
        ("BLANC", blanc::<f64>),
    ];
    let fixtures = fixtures();
    let mut checked = 0;
    for (i, fx) in fixtures.iter().enumerate() {
        let (k, r) = (part(fx.key), part(fx.response));
        for ((name, metric), want) in metrics.iter().zip(&fx.expect) {
            let Some(want) = want else { continue };
            let s = metric(&k, &r);
            let got = [s.recall, s.precision, s.f1];
            if got.iter().zip(want).any(|(g, w)| (g - w).abs() > 1e-9) {
                return Err(format!("fixture {i} {name}: got {got:?}, want {want:?}"));
            }
            checked += 1;
        }
    }
    let mut rng = common::rng(99);
    for case in 0..100 {
        let n = rng.gen_range(2..12);
        let chains = rng.gen_range(1..=6);
        let k = common::random_partition(&mut rng, n, chains, 0.85);
        let chains = rng.gen_range(1..=6);
        let r = common::random_partition(&mut rng, n, chains, 0.85);
        let overlap = |entity: bool| -> Vec<Vec<f64>> {
            k.chains()
                .iter()
                .map(|a| {
                    r.chains()
                        .iter()
                        .map(|b| {
                            let n = a.iter().filter(|m| b.contains(m)).count() as f64;
                            if entity { 2.0 * n / (a.len() + b.len()) as f64 } else { n }
                        })
                        .collect()
                })
                .collect()
        };
        let m = ceaf_m::<f64>(&k, &r);
        let e = ceaf_e::<f64>(&k, &r);
        let want_m = common::brute_force_alignment(&overlap(false));
        let want_e = common::brute_force_alignment(&overlap(true));
        let got_m = m.recall * k.mention_count() as f64;
        let got_e = e.recall * k.len() as f64;
        if (got_m - want_m).abs() > 1e-9 || (got_e - want_e).abs() > 1e-9 {
            return Err(format!("random case {case}: CEAF {got_m}/{got_e}, exhaustive {want_m}/{want_e}"));
        }
    }
    Ok(format!("{checked} metric values on {} fixtures, 100 random CEAF cases", fixtures.len()))
}

fn conll_consistency() -> Check {
    let components = [67.69, 55.86, 51.75];
    let avg = conll_average(components[0], components[1], components[2]);
    // components are themselves rounded to two places, so the true mean
    // lies within ±0.005 of their mean
    let (lo, hi) = (avg - 0.005, avg + 0.005);
    let (target_lo, target_hi) = (58.44 - 0.005, 58.44 + 0.005);
    if hi < target_lo || lo > target_hi {
        return Err(format!("mean {avg:.4} cannot round to 58.44"));
    }
    Ok(format!("mean of rounded components {avg:.4}; interval [{lo:.4}, {hi:.4}] meets 58.44 ± 0.005"))
}

fn determinism() -> Check {
    let docs = common::sample_corpus(&common::truth(), 500, 3);
    let mut rng = common::rng(5);
    let mixed: Vec<EncodedDocument> = docs
        .into_iter()
        .chain((0..500).map(|_| common::random_document(&mut rng, 10)))
        .collect();
    let run = |workers| {
        let config = TrainConfig {
            iterations: 5,
            workers,
            ..TrainConfig::default()
        };
        train_em::<f64>(&mixed, &config, None).map_err(|e| e.to_string())
    };
    let (a, b) = (run(1)?, run(4)?);
    let diff = a.selected.max_abs_diff(&b.selected);
    if diff > 1e-12 {
        return Err(format!("max entry difference {diff:e}"));
    }
    Ok(format!("workers 1 and 4 differ by at most {diff:e}"))
}

fn mode_totality() -> Check {
    let config = PipelineConfig::default();
    let mut mentions = 0;
    let mut counts = [0usize; 3];
    for doc in common::fixture_documents() {
        let a = analyze_document(&doc, &config);
        if a.mentions.iter().any(|m| m.mode.is_none()) {
            return Err(format!("{}: mention without a mode", doc.doc_id));
        }
        let ctx = DocumentContext::new(&doc, &config.lexicons);
        let mut again = a.mentions.clone();
        assign_modes(&mut again, &ctx, config.precedence);
        if again != a.mentions {
            return Err(format!("{}: reassignment changed modes", doc.doc_id));
        }
        mentions += a.mentions.len();
        for (c, n) in counts.iter_mut().zip(a.mentions.mode_counts()) {
            *c += n;
        }
    }
    let [s, p, t] = counts;
    Ok(format!("{mentions} mentions: {s} str, {p} prec, {t} attr; reassignment idempotent"))
}

fn reproduction() -> Option<Check> {
    let dev = PathBuf::from(std::env::var_os("COREF_EM_CONLL_DEV")?);
    let train = std::env::var_os("COREF_EM_CONLL_TRAIN").map(PathBuf::from).unwrap_or_else(|| dev.clone());
    let run = || -> Result<String, String> {
        let config = PipelineConfig::default();
        let pool = pool(std::thread::available_parallelism().map_or(1, |n| n.get()));
        let train_docs = load_corpus(&[&train], &LoadOptions::training()).map_err(|e| e.to_string())?;
        let dev_docs = load_corpus(&[&dev], &LoadOptions::default()).map_err(|e| e.to_string())?;
        let encoded: Vec<_> = analyze_corpus(&train_docs.documents, &config, &pool)
            .into_iter()
            .map(|a| a.encoded)
            .collect();
        let tc = TrainConfig {
            workers: pool.current_num_threads(),
            ..TrainConfig::default()
        };
        let out = train_em::<f64>(&encoded, &tc, None).map_err(|e| e.to_string())?;
        let analyses = analyze_corpus(&dev_docs.documents, &config, &pool);
        let table = evaluate(&dev_docs.documents, &analyses, &out.selected, 2);
        println!("{}", table.render(true));
        Ok(format!("CoNLL {:.2} on {} dev documents", table.conll * 100.0, dev_docs.len()))
    };
    Some(run())
}

fn main() -> ExitCode {
    // the test harness passes filter arguments; this runner ignores them
    let checks: [(&str, CheckFn); 8] = [
        ("EM monotonicity", monotonicity),
        ("normalization", normalization),
        ("decoder-oracle equivalence", decoder),
        ("parameter recovery", recovery),
        ("metric oracles", metric_oracles),
        ("CoNLL-average consistency", conll_consistency),
        ("determinism", determinism),
        ("mode assignment totality", mode_totality),
    ];
    let mut failed = false;
    for (name, check) in checks {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed = true;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    match reproduction() {
        None => println!("SKIP full reproduction: set COREF_EM_CONLL_DEV (and optionally COREF_EM_CONLL_TRAIN)"),
        Some(Ok(detail)) => println!("PASS full reproduction: {detail}"),
        Some(Err(detail)) => {
            failed = true;
            println!("FAIL full reproduction: {detail}");
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
