//! Acceptance criteria. Each test prints one `acceptance PASS|FAIL` line.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use chrono::DateTime;
use common::*;
use socialsig::corpus::{detect_all, load_tweets, CoinRegistry, MentionIndex};
use socialsig::econometrics::{
    adf_test, best_lag_scan, cross_correlation, f_pvalue, granger_test, AdfLevel, CrossCorrelationSeries, GrangerRow,
    GrangerResult, MeanMode, ScanOptions, SignificanceBands, Transform,
};
use socialsig::netgraph::{
    betweenness, build_comention_network, degree_share_filter, pagerank, CentralityOptions, WeightedGraph,
};
use socialsig::corpus::Resolution;
use socialsig::pipeline::{render_significance_table, run_pipeline, Command};
use socialsig::signals::{social_signal, social_signal_with_market, SignalCounts};

use rand::Rng;

fn planted_pair(seed: u64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut r = rng(seed);
    let burn = 100;
    let x = normals(&mut r, n + burn);
    let e = normals(&mut r, n + burn);
    let mut y = vec![0.0; n + burn];
    for t in 2..n + burn {
        y[t] = 0.5 * y[t - 1] + 0.8 * x[t - 2] + e[t];
    }
    (x[burn..].to_vec(), y[burn..].to_vec())
}

#[test]
fn granger_recovery() {
    let start = Instant::now();
    let mut forward = 0;
    let mut reverse = 0;
    for seed in 0..100 {
        let (x, y) = planted_pair(80_000 + seed, 2000);
        if granger_test(&x, &y, 2).unwrap().p_value < 0.01 {
            forward += 1;
        }
        if granger_test(&y, &x, 2).unwrap().p_value < 0.05 {
            reverse += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = forward >= 95 && reverse <= 10 && secs < 10.0;
    report(
        "granger recovery",
        pass,
        &format!("x->y p<0.01 in {forward}/100 (need >=95), y->x p<0.05 in {reverse}/100 (need <=10), {secs:.2}s"),
    );
    assert!(pass);
}

#[test]
fn granger_size() {
    let mut p = Vec::with_capacity(500);
    for seed in 0..500 {
        let mut r = rng(10_000 + seed);
        let x = normals(&mut r, 1000);
        let y = normals(&mut r, 1000);
        p.push(granger_test(&x, &y, 2).unwrap().p_value);
    }
    let rate = p.iter().filter(|&&v| v < 0.05).count() as f64 / p.len() as f64;
    let ks = ks_uniform(p);
    let pass = (0.03..=0.07).contains(&rate) && ks < 0.08;
    report("granger size", pass, &format!("rejection rate {rate:.3} in [0.03, 0.07], KS {ks:.4} < 0.08"));
    assert!(pass);
}

#[test]
fn cross_correlation_oracle() {
    let mut worst: f64 = 0.0;
    for seed in 0..100 {
        let mut r = rng(20_000 + seed);
        let x = normals(&mut r, 256);
        let y = normals(&mut r, 256);
        for k in 0..=24 {
            let got = cross_correlation(&x, &y, k).unwrap();
            worst = worst.max((got - brute_xcorr(&x, &y, k)).abs());
        }
    }

    // y_i = x_{i+2} on a noisy sine
    let mut r = rng(7);
    let base: Vec<f64> = (0..102).map(|i| (i as f64 * 0.3).sin() + 0.3 * r.random::<f64>()).collect();
    let x = base[..100].to_vec();
    let shifted_y = base[2..].to_vec();
    let series = CrossCorrelationSeries::compute(&x, &shifted_y, 10, Resolution::Hourly, MeanMode::Overlap);
    let brute_best = (0..=10)
        .map(|k| (k, brute_xcorr(&x, &shifted_y, k)))
        .fold((0, 0.0f64), |b, (k, g)| if g.abs() > b.1.abs() { (k, g) } else { b });
    let planted = series.best.map(|b| b.0);

    // price at t equals the signal at t - 2 hours
    let hours = 24 * 21;
    let signal: Vec<f64> = (0..hours + 2).map(|_| 1.0 + r.random::<f64>()).collect();
    let price: Vec<f64> = (0..hours).map(|t| signal[t]).collect();
    let signal: Vec<f64> = signal[2..].to_vec();
    let scan = best_lag_scan(&price, &signal, Transform::Level, Transform::Level, ScanOptions::default()).unwrap();
    let scan_best = scan.best.as_ref().map(|b| (b.resolution, b.lag));

    let pass = worst <= 1e-12
        && planted == Some(2)
        && brute_best.0 == 2
        && scan_best == Some((Resolution::Hourly, 2));
    report(
        "cross-correlation oracle",
        pass,
        &format!("max |delta| {worst:.2e} over 100 pairs x 25 lags, planted best lag {planted:?}, scan best {scan_best:?}"),
    );
    assert!(pass);
}

#[test]
fn adf_size_and_power() {
    let start = Instant::now();
    let mut walk_rejects = 0;
    let mut ar_rejects = 0;
    for seed in 0..200 {
        let mut r = rng(30_000 + seed);
        let e = normals(&mut r, 500);
        let walk: Vec<f64> = e.iter().scan(0.0, |s, v| {
            *s += v;
            Some(*s)
        }).collect();
        if adf_test(&walk, None).unwrap().rejects_at(AdfLevel::Five) {
            walk_rejects += 1;
        }
        let e = normals(&mut r, 600);
        let mut ar = vec![0.0; 600];
        for t in 1..600 {
            ar[t] = 0.5 * ar[t - 1] + e[t];
        }
        if adf_test(&ar[100..], None).unwrap().rejects_at(AdfLevel::Five) {
            ar_rejects += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let walk_rate = walk_rejects as f64 / 200.0;
    let ar_rate = ar_rejects as f64 / 200.0;
    let pass = walk_rate <= 0.10 && ar_rate >= 0.90 && secs < 30.0;
    report(
        "ADF size/power",
        pass,
        &format!("random walk rejected {walk_rate:.3} (<=0.10), AR(1) 0.5 rejected {ar_rate:.3} (>=0.90), {secs:.2}s"),
    );
    assert!(pass);
}

#[test]
fn special_functions() {
    let d1s = [1, 2, 3, 5, 10];
    let d2s = [1, 3, 8, 20, 60];
    let fs = [0.2, 0.8, 1.5, 3.0, 7.5];
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for (i, &d1) in d1s.iter().enumerate() {
        for (j, &d2) in d2s.iter().enumerate() {
            for step in 0..2 {
                let f = fs[(i + 2 * j + 3 * step) % fs.len()];
                let got = f_pvalue(f, d1, d2).unwrap();
                worst = worst.max((got - f_tail_oracle(f, d1, d2)).abs());
                points += 1;
            }
        }
    }
    let symmetric = (1..=60).map(|d| (f_pvalue(1.0, d, d).unwrap() - 0.5).abs()).fold(0.0, f64::max);
    let pass = points == 50 && worst <= 1e-8 && symmetric <= 1e-12;
    report(
        "special functions",
        pass,
        &format!("{points}-point grid max |delta| {worst:.2e} (<=1e-8), max |f_pvalue(1,d,d)-0.5| {symmetric:.2e}"),
    );
    assert!(pass);
}

#[test]
fn centrality_oracles() {
    let opts = CentralityOptions::default();
    let mut pr_worst: f64 = 0.0;
    let mut sum_worst: f64 = 0.0;
    for seed in 0..20u64 {
        let n = 8 + (seed as usize * 3) % 57;
        let g = random_graph(40_000 + seed, n, 3.0 / n as f64, seed % 2 == 0, 4);
        let got = pagerank(&g, &opts).unwrap().scores;
        let want = dense_pagerank(&g, 0.85);
        for (k, v) in &want {
            pr_worst = pr_worst.max((got[k] - v).abs());
        }
        sum_worst = sum_worst.max((got.values().sum::<f64>() - 1.0).abs());
    }

    let mut bc_graphs = 0;
    let mut bc_mismatch = Vec::new();
    for seed in 0..24u64 {
        let n = 3 + seed as usize % 6;
        let g = random_graph(50_000 + seed, n, 0.45, seed % 2 == 1, 3);
        for binary in [false, true] {
            let o = CentralityOptions { binarize: binary, ..CentralityOptions::default() };
            let got = betweenness(&g, &o).unwrap().scores;
            let want = enumerate_betweenness(&g, binary);
            if got.len() != want.len() || want.iter().any(|(k, v)| !close(got[k], *v, 1e-12)) {
                bc_mismatch.push(format!("seed {seed} binary {binary}"));
            }
        }
        bc_graphs += 1;
    }
    let pass = pr_worst <= 1e-8 && sum_worst <= 1e-9 && bc_mismatch.is_empty();
    report(
        "centrality oracles",
        pass,
        &format!(
            "pagerank max |delta| {pr_worst:.2e}, max |sum-1| {sum_worst:.2e} on 20 graphs; betweenness matched enumeration on {}/{} graphs",
            bc_graphs - bc_mismatch.len(),
            bc_graphs
        ),
    );
    assert!(pass, "{bc_mismatch:?}");
}

fn node_set(g: &WeightedGraph) -> BTreeSet<String> {
    g.nodes().map(str::to_owned).collect()
}

#[test]
fn network_identities() {
    let dir = fixture_dir();
    let corpus = load_tweets(&dir.join("tweets.jsonl")).unwrap().corpus;
    let registry = CoinRegistry::load(&dir.join("registry.json")).unwrap();
    let mentions = detect_all(&corpus, &MentionIndex::new(&registry));
    let g = build_comention_network(&mentions);
    let expected: usize = mentions.iter().map(|m| m.len() * m.len().saturating_sub(1) / 2).sum();
    let identity = g.total_weight() == expected as f64;

    let random = random_graph(60_000, 300, 0.02, false, 5);
    let mut monotone = true;
    for graph in [&g, &random] {
        let sets: Vec<BTreeSet<String>> =
            [0.005, 0.01, 0.02].iter().map(|&t| node_set(&degree_share_filter(graph, t).unwrap())).collect();
        monotone &= sets_nested(&sets[1], &sets[0]) && sets_nested(&sets[2], &sets[1]);
    }
    let pass = corpus.len() == 10_000 && identity && monotone;
    report(
        "network identities",
        pass,
        &format!(
            "{} tweets, total weight {} vs sum C(m,2) {expected}; degree-share survivors nested over theta {{0.005, 0.01, 0.02}}: {monotone}",
            corpus.len(),
            g.total_weight()
        ),
    );
    assert!(pass);
}

fn counts(n_buy: u32, n_not_buy: u32) -> SignalCounts<'static> {
    SignalCounts { coin_id: "BTC", window_end: DateTime::UNIX_EPOCH, n_buy, n_not_buy }
}

fn market(n_buy: u32, n_not_buy: u32) -> SignalCounts<'static> {
    SignalCounts { coin_id: "MARKET", window_end: DateTime::UNIX_EPOCH, n_buy, n_not_buy }
}

#[test]
fn signal_unit_identities() {
    let plain = [
        (social_signal(&counts(0, 0)), 1.0),
        (social_signal(&counts(3, 1)), 2.0),
        (social_signal(&counts(0, 9)), 0.1),
    ];
    let with_market = [
        (social_signal_with_market(&counts(2, 1), &market(0, 0)).unwrap(), 1.5),
        (social_signal_with_market(&counts(0, 0), &market(4, 9)).unwrap(), 0.5),
        (social_signal_with_market(&counts(3, 1), &market(1, 1)).unwrap(), 5.0 / 3.0),
    ];
    let examples = plain.iter().chain(&with_market).all(|(got, want)| got == want);
    let mut r = rng(70_000);
    let mut reduce_ok = 0;
    for _ in 0..1000 {
        let c = counts(r.random_range(0..10_000), r.random_range(0..10_000));
        if social_signal_with_market(&c, &market(0, 0)).unwrap() == social_signal(&c) {
            reduce_ok += 1;
        }
    }
    let pass = examples && reduce_ok == 1000;
    report(
        "signal unit identities",
        pass,
        &format!("six substitution examples exact: {examples}; market-free reduction exact on {reduce_ok}/1000 tuples"),
    );
    assert!(pass);
}

#[test]
fn end_to_end_determinism() {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut runs = Vec::new();
    for _ in 0..2 {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = fixture_config(tmp.path());
        match run_pipeline(&cfg, Command::All) {
            Ok(outcome) => {
                let files = output_files(tmp.path(), &outcome.manifest);
                problems.extend(golden_diff(&files));
                runs.push(files);
            }
            Err(e) => problems.push(format!("run failed: {e}")),
        }
    }
    if runs.len() == 2 && runs[0] != runs[1] {
        problems.push("the two runs differ".into());
    }
    let secs = start.elapsed().as_secs_f64();
    let files = runs.first().map_or(0, |r| r.len());
    let pass = problems.is_empty() && secs < 60.0;
    report(
        "end-to-end determinism",
        pass,
        &format!("{files} files byte-identical to goldens on two runs, {secs:.2}s (<60s); problems: {problems:?}"),
    );
    assert!(pass);
}

fn row(lag: usize, p: f64) -> GrangerRow {
    GrangerRow {
        lag,
        outcome: Ok(GrangerResult {
            lag,
            f_statistic: 1.0,
            p_value: p,
            n_obs: 200,
            df_num: lag,
            df_den: 190,
            ssr_restricted: 1.0,
            ssr_unrestricted: 1.0,
            degenerate: false,
        }),
    }
}

#[test]
fn significance_banding() {
    let bands = SignificanceBands::default();
    let rows = vec![
        ("BTC".to_owned(), vec![row(1, 0.001)]),
        ("DOT".to_owned(), vec![row(1, 0.043)]),
        ("BNB".to_owned(), vec![row(1, 0.111)]),
    ];
    let table = render_significance_table(&rows, &bands, "");
    let got: Vec<&str> = table.cells[0].iter().map(|c| c.band.as_str()).collect();
    let csv = table.csv_rows();
    let pass = got == ["<0.01", "<0.05", ""] && csv[0] == ["1", "0.001000", "<0.01", "0.043000", "<0.05", "0.111000", ""];
    report("significance banding", pass, &format!("BTC 0.001 -> {:?}, DOT 0.043 -> {:?}, BNB 0.111 -> {:?}", got[0], got[1], got[2]));
    assert!(pass);
}
