use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::ptr;

use socialsig::econometrics::{adf_test, cross_correlation, f_pvalue, granger_test};
use socialsig::netgraph::{pagerank, CentralityOptions, Directedness, WeightedGraph};
use socialsig_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = ss_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/synthetic")
}

fn series(seed: u64, n: usize) -> Vec<f64> {
    // small LCG; the tests only need deterministic, non-degenerate input
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (0..n)
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

#[test]
fn scalar_functions_match_the_library() {
    assert_eq!(ss_social_signal(3, 1), 2.0);
    let mut p = 0.0;
    assert_eq!(unsafe { ss_f_pvalue(2.5, 3, 40, &mut p) }, SsStatus::Ok);
    assert_eq!(p, f_pvalue(2.5, 3, 40).unwrap());
    assert_eq!(unsafe { ss_f_pvalue(2.5, 0, 40, &mut p) }, SsStatus::Compute);
    assert!(!last_error().is_empty());
    let v = unsafe { CStr::from_ptr(ss_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn granger_xcorr_and_adf_match_the_library() {
    let x = series(1, 300);
    let y = series(2, 300);
    let mut g = SsGrangerResult::default();
    assert_eq!(unsafe { ss_granger_test(x.as_ptr(), y.as_ptr(), 300, 3, &mut g) }, SsStatus::Ok);
    let want = granger_test(&x, &y, 3).unwrap();
    assert_eq!((g.f_statistic, g.p_value, g.df_num, g.df_den, g.n_obs), (want.f_statistic, want.p_value, want.df_num, want.df_den, want.n_obs));

    let mut r = 0.0;
    assert_eq!(unsafe { ss_cross_correlation(x.as_ptr(), y.as_ptr(), 300, 4, &mut r) }, SsStatus::Ok);
    assert_eq!(r, cross_correlation(&x, &y, 4).unwrap());
    assert_eq!(unsafe { ss_cross_correlation(x.as_ptr(), y.as_ptr(), 300, -4, &mut r) }, SsStatus::Ok);
    assert_eq!(r, cross_correlation(&y, &x, 4).unwrap());

    let mut a = SsAdfResult::default();
    assert_eq!(unsafe { ss_adf_test(x.as_ptr(), 300, -1, &mut a) }, SsStatus::Ok);
    let want = adf_test(&x, None).unwrap();
    assert_eq!((a.statistic, a.chosen_lag, a.n_obs), (want.statistic, want.chosen_lag, want.n_obs));
    assert!(a.reject_1pct && a.reject_5pct && a.reject_10pct);

    assert_eq!(unsafe { ss_granger_test(x.as_ptr(), y.as_ptr(), 5, 3, &mut g) }, SsStatus::Compute);
    assert!(last_error().contains("too short"));
}

#[test]
fn null_arguments_are_reported() {
    let x = series(3, 50);
    let mut g = SsGrangerResult::default();
    assert_eq!(unsafe { ss_granger_test(ptr::null(), x.as_ptr(), 50, 1, &mut g) }, SsStatus::NullPointer);
    assert_eq!(last_error(), "cause is null");
    assert_eq!(unsafe { ss_granger_test(x.as_ptr(), x.as_ptr(), 50, 1, ptr::null_mut()) }, SsStatus::NullPointer);
    assert_eq!(unsafe { ss_graph_add_edge(ptr::null_mut(), c("a").as_ptr(), c("b").as_ptr(), 1.0) }, SsStatus::NullPointer);
    assert_eq!(unsafe { ss_graph_node_count(ptr::null()) }, 0);
    unsafe { ss_graph_free(ptr::null_mut()) };
    unsafe { ss_corpus_free(ptr::null_mut()) };

    let bad = [0xffu8, 0xfe, 0];
    let g = ss_graph_new(false);
    assert_eq!(unsafe { ss_graph_add_edge(g, bad.as_ptr().cast(), c("b").as_ptr(), 1.0) }, SsStatus::InvalidUtf8);
    assert_eq!(unsafe { ss_graph_add_edge(g, c("a").as_ptr(), c("b").as_ptr(), -1.0) }, SsStatus::InvalidArgument);
    assert_eq!(unsafe { ss_graph_add_edge(g, c("a").as_ptr(), c("b").as_ptr(), 1.0) }, SsStatus::Ok);
    assert!(ss_last_error().is_null());
    unsafe { ss_graph_free(g) };
}

#[test]
fn graph_handle_matches_library_centrality() {
    let edges = [("a", "b", 2.0), ("b", "c", 1.0), ("c", "a", 1.0), ("c", "d", 3.0), ("d", "e", 1.0)];
    let h = ss_graph_new(true);
    let mut lib = WeightedGraph::new(Directedness::Directed);
    for (u, v, w) in edges {
        assert_eq!(unsafe { ss_graph_add_edge(h, c(u).as_ptr(), c(v).as_ptr(), w) }, SsStatus::Ok);
        lib.add_edge(u, v, w).unwrap();
    }
    unsafe {
        assert_eq!(ss_graph_node_count(h), 5);
        assert_eq!(ss_graph_edge_count(h), 5);
        assert_eq!(ss_graph_edge_weight(h, c("c").as_ptr(), c("d").as_ptr()), 3.0);
        assert_eq!(ss_graph_edge_weight(h, c("d").as_ptr(), c("c").as_ptr()), 0.0);
        let ids: Vec<String> = (0..5).map(|i| CStr::from_ptr(ss_graph_node_id(h, i)).to_string_lossy().into_owned()).collect();
        assert_eq!(ids, ["a", "b", "c", "d", "e"]);
        assert!(ss_graph_node_id(h, 5).is_null());

        let mut scores = [0.0; 5];
        assert_eq!(ss_graph_centrality(h, SsMetric::Pagerank, false, false, scores.as_mut_ptr(), 5), SsStatus::Ok);
        let want = pagerank(&lib, &CentralityOptions::default()).unwrap().scores;
        for (id, s) in ids.iter().zip(scores) {
            assert_eq!(s, want[id]);
        }
        let mut small = [0.0; 4];
        assert_eq!(ss_graph_centrality(h, SsMetric::Closeness, false, false, small.as_mut_ptr(), 4), SsStatus::BufferTooSmall);
        assert_eq!(ss_graph_centrality(h, SsMetric::Betweenness, false, false, scores.as_mut_ptr(), 5), SsStatus::Ok);
        // every a..e path beyond c runs through c and d
        assert!(scores[2] > 0.0 && scores[3] > 0.0 && scores[4] == 0.0);
        ss_graph_free(h);
    }
}

#[test]
fn corpus_handle_builds_networks() {
    let dir = fixture();
    let tweets = c(dir.join("tweets.jsonl").to_str().unwrap());
    let registry = c(dir.join("registry.json").to_str().unwrap());
    unsafe {
        let mut corpus = ptr::null_mut();
        assert_eq!(ss_corpus_load(tweets.as_ptr(), &mut corpus), SsStatus::Ok);
        assert_eq!(ss_corpus_len(corpus), 10_000);
        assert_eq!(ss_corpus_rejected(corpus), 0);

        let mut g = ptr::null_mut();
        assert_eq!(ss_corpus_comention_graph(corpus, registry.as_ptr(), &mut g), SsStatus::Ok);
        assert!(ss_graph_node_count(g) >= 2);
        ss_graph_free(g);

        let mut rt = ptr::null_mut();
        assert_eq!(ss_corpus_retweet_graph(corpus, &mut rt), SsStatus::Ok);
        assert!(ss_graph_edge_count(rt) > 0);
        ss_graph_free(rt);
        ss_corpus_free(corpus);

        let mut missing = ptr::null_mut();
        assert_eq!(ss_corpus_load(c("/nonexistent/tweets.jsonl").as_ptr(), &mut missing), SsStatus::Io);
        assert!(missing.is_null());
    }
}

#[test]
fn pipeline_runs_and_reports_exit_codes() {
    let out = tempfile::tempdir().unwrap();
    let config = c(fixture().join("socialsig.toml").to_str().unwrap());
    let out_dir = c(out.path().to_str().unwrap());
    let mut code = -1;
    unsafe {
        assert_eq!(ss_run_pipeline(config.as_ptr(), SsCommand::Ingest, out_dir.as_ptr(), &mut code), SsStatus::Ok);
        assert_eq!(code, 0);
        assert!(out.path().join("manifest.json").exists());
        assert!(out.path().join("ingest_summary.json").exists());

        let absent = c("/nonexistent/socialsig.toml");
        assert_eq!(ss_run_pipeline(absent.as_ptr(), SsCommand::All, out_dir.as_ptr(), &mut code), SsStatus::InvalidArgument);
        assert_eq!(code, 2);

        let bad = tempfile::tempdir().unwrap();
        let toml = std::fs::read_to_string(fixture().join("socialsig.toml")).unwrap();
        let abs = fixture().canonicalize().unwrap();
        let mut toml = toml.replace("\"prices.csv\"", "\"missing.csv\"");
        for f in ["tweets.jsonl", "registry.json", "lexicon.toml", "profiles.jsonl", "candidates.txt"] {
            toml = toml.replace(&format!("\"{f}\""), &format!("{:?}", abs.join(f)));
        }
        let cfg = bad.path().join("socialsig.toml");
        std::fs::write(&cfg, toml).unwrap();
        let cfg = c(cfg.to_str().unwrap());
        assert_eq!(ss_run_pipeline(cfg.as_ptr(), SsCommand::Ingest, ptr::null(), &mut code), SsStatus::Pipeline);
        assert_eq!(code, 3);
        let msg = last_error();
        assert!(msg.contains("missing.csv"), "{msg}");
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/socialsig.h")).unwrap();
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 20);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let Some(cc) = ["cc", "gcc", "clang"].into_iter().find(|c| std::process::Command::new(c).arg("--version").output().is_ok()) else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libsocialsig_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let work = tempfile::tempdir().unwrap();
    let src = work.path().join("probe.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "socialsig.h"
int main(void) {
    ss_graph *g = ss_graph_new(false);
    if (ss_graph_add_edge(g, "BTC", "ETH", 2.0) != SS_STATUS_OK) return 1;
    if (ss_graph_add_edge(g, "ETH", "SOL", 1.0) != SS_STATUS_OK) return 2;
    double scores[3];
    if (ss_graph_centrality(g, SS_METRIC_BETWEENNESS, false, false, scores, 3) != SS_STATUS_OK) return 3;
    printf("%s %.6f\n", ss_graph_node_id(g, 1), scores[1]);
    ss_graph_free(g);
    double p;
    if (ss_f_pvalue(1.0, 1, 10, NULL) != SS_STATUS_NULL_POINTER) return 4;
    printf("%s\n", ss_last_error());
    if (ss_f_pvalue(0.0, 2, 10, &p) != SS_STATUS_OK || p != 1.0) return 5;
    return 0;
}
"#,
    )
    .unwrap();
    let exe = work.path().join("probe");
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success());
    let run = std::process::Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8(run.stdout).unwrap(), "ETH 1.000000\np_value is null\n");
}
