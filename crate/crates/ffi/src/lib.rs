//! C ABI over the socialsig engine.
//!
//! Every fallible function returns an [`SsStatus`]; on failure the message is
//! available from [`ss_last_error`] on the same thread. Graphs and corpora
//! are opaque handles released with their `_free` function. Passing null
//! where a handle or buffer is required yields `SS_NULL_POINTER`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use socialsig::corpus::{detect_all, load_tweets, CoinRegistry, Corpus, MentionIndex};
use socialsig::econometrics::{adf_test, cross_correlation, f_pvalue, granger_test, AdfLevel};
use socialsig::netgraph::{
    build_comention_network, build_retweet_network, centrality, CentralityMetric, CentralityOptions, Directedness,
    PathLength, WeightedGraph,
};
use socialsig::pipeline::{run_pipeline, Command, Overrides, PipelineConfig};
use socialsig::signals::{social_signal, SignalCounts};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    BufferTooSmall = 4,
    Compute = 5,
    Io = 6,
    Pipeline = 7,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsMetric {
    Pagerank = 0,
    Betweenness = 1,
    Closeness = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsCommand {
    Ingest = 0,
    Classify = 1,
    Signals = 2,
    Network = 3,
    Granger = 4,
    Xcorr = 5,
    Matrix = 6,
    Report = 7,
    All = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SsGrangerResult {
    pub f_statistic: f64,
    pub p_value: f64,
    pub df_num: usize,
    pub df_den: usize,
    pub n_obs: usize,
    pub degenerate: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SsAdfResult {
    pub statistic: f64,
    pub chosen_lag: usize,
    pub n_obs: usize,
    pub reject_1pct: bool,
    pub reject_5pct: bool,
    pub reject_10pct: bool,
}

/// Opaque weighted graph.
pub struct SsGraph {
    graph: WeightedGraph,
    names: Vec<CString>,
}

impl SsGraph {
    fn new(graph: WeightedGraph) -> Self {
        let mut g = SsGraph { graph, names: Vec::new() };
        g.refresh();
        g
    }

    fn refresh(&mut self) {
        self.names = self.graph.nodes().map(|n| CString::new(n).unwrap_or_default()).collect();
    }
}

/// Opaque tweet corpus.
pub struct SsCorpus {
    corpus: Corpus,
    rejected: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(SsStatus, String);

impl Failure {
    fn null(what: &str) -> Self {
        Failure(SsStatus::NullPointer, format!("{what} is null"))
    }

    fn invalid(msg: impl Into<String>) -> Self {
        Failure(SsStatus::InvalidArgument, msg.into())
    }

    fn compute(e: impl std::fmt::Display) -> Self {
        Failure(SsStatus::Compute, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            SsStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(SsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(Failure::null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::null(what))
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ss_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ss_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// (1 + n_buy) / (1 + n_not_buy).
#[no_mangle]
pub extern "C" fn ss_social_signal(n_buy: u32, n_not_buy: u32) -> f64 {
    social_signal(&SignalCounts { coin_id: "", window_end: Default::default(), n_buy, n_not_buy })
}

/// Upper tail of the F(d1, d2) distribution at `f`.
#[no_mangle]
pub unsafe extern "C" fn ss_f_pvalue(f: f64, d1: usize, d2: usize, p_value: *mut f64) -> SsStatus {
    guard(|| {
        let p = out(p_value, "p_value")?;
        *p = f_pvalue(f, d1, d2).map_err(Failure::compute)?;
        Ok(())
    })
}

/// F test of whether `cause` helps predict `effect` at lag `lag`.
#[no_mangle]
pub unsafe extern "C" fn ss_granger_test(
    cause: *const f64,
    effect: *const f64,
    len: usize,
    lag: usize,
    result: *mut SsGrangerResult,
) -> SsStatus {
    guard(|| {
        let x = slice(cause, len, "cause")?;
        let y = slice(effect, len, "effect")?;
        let r = out(result, "result")?;
        let g = granger_test(x, y, lag).map_err(Failure::compute)?;
        *r = SsGrangerResult {
            f_statistic: g.f_statistic,
            p_value: g.p_value,
            df_num: g.df_num,
            df_den: g.df_den,
            n_obs: g.n_obs,
            degenerate: g.degenerate,
        };
        Ok(())
    })
}

/// Cross-correlation at lag `lag`, pairing `x[i + lag]` with `y[i]`.
#[no_mangle]
pub unsafe extern "C" fn ss_cross_correlation(
    x: *const f64,
    y: *const f64,
    len: usize,
    lag: i64,
    value: *mut f64,
) -> SsStatus {
    guard(|| {
        let (x, y) = (slice(x, len, "x")?, slice(y, len, "y")?);
        let v = out(value, "value")?;
        let k = usize::try_from(lag.unsigned_abs()).map_err(|_| Failure::invalid("lag out of range"))?;
        *v = if lag >= 0 { cross_correlation(x, y, k) } else { cross_correlation(y, x, k) }.map_err(Failure::compute)?;
        Ok(())
    })
}

/// Augmented Dickey-Fuller test with a constant. A negative `max_lag`
/// selects the default lag cap for the series length.
#[no_mangle]
pub unsafe extern "C" fn ss_adf_test(series: *const f64, len: usize, max_lag: i64, result: *mut SsAdfResult) -> SsStatus {
    guard(|| {
        let s = slice(series, len, "series")?;
        let r = out(result, "result")?;
        let cap = usize::try_from(max_lag).ok();
        let a = adf_test(s, cap).map_err(Failure::compute)?;
        *r = SsAdfResult {
            statistic: a.statistic,
            chosen_lag: a.chosen_lag,
            n_obs: a.n_obs,
            reject_1pct: a.rejects_at(AdfLevel::One),
            reject_5pct: a.rejects_at(AdfLevel::Five),
            reject_10pct: a.rejects_at(AdfLevel::Ten),
        };
        Ok(())
    })
}

/// New empty graph; release with [`ss_graph_free`].
#[no_mangle]
pub extern "C" fn ss_graph_new(directed: bool) -> *mut SsGraph {
    let d = if directed { Directedness::Directed } else { Directedness::Undirected };
    Box::into_raw(Box::new(SsGraph::new(WeightedGraph::new(d))))
}

#[no_mangle]
pub unsafe extern "C" fn ss_graph_free(graph: *mut SsGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Adds `weight` to edge u-v (u->v when directed), creating nodes as needed.
#[no_mangle]
pub unsafe extern "C" fn ss_graph_add_edge(
    graph: *mut SsGraph,
    u: *const c_char,
    v: *const c_char,
    weight: f64,
) -> SsStatus {
    guard(|| {
        let g = out(graph, "graph")?;
        let (u, v) = (text(u, "u")?, text(v, "v")?);
        g.graph.add_edge(u, v, weight).map_err(|e| Failure::invalid(e.to_string()))?;
        g.refresh();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ss_graph_node_count(graph: *const SsGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.node_count())
}

#[no_mangle]
pub unsafe extern "C" fn ss_graph_edge_count(graph: *const SsGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.edge_count())
}

/// Id of node `index` in sorted order, or null when out of range. The
/// pointer is owned by the graph and valid until it is next modified.
#[no_mangle]
pub unsafe extern "C" fn ss_graph_node_id(graph: *const SsGraph, index: usize) -> *const c_char {
    graph.as_ref().and_then(|g| g.names.get(index)).map_or(std::ptr::null(), |c| c.as_ptr())
}

/// Total weight of edge u-v, 0 when absent.
#[no_mangle]
pub unsafe extern "C" fn ss_graph_edge_weight(graph: *const SsGraph, u: *const c_char, v: *const c_char) -> f64 {
    let Some(g) = graph.as_ref() else { return 0.0 };
    match (text(u, "u"), text(v, "v")) {
        (Ok(u), Ok(v)) => g.graph.weight(u, v).unwrap_or(0.0),
        _ => 0.0,
    }
}

/// Centrality scores written to `scores` in node order (see
/// [`ss_graph_node_id`]). `capacity` must be at least the node count.
#[no_mangle]
pub unsafe extern "C" fn ss_graph_centrality(
    graph: *const SsGraph,
    metric: SsMetric,
    binarize: bool,
    inverse_weight_paths: bool,
    scores: *mut f64,
    capacity: usize,
) -> SsStatus {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| Failure::null("graph"))?;
        if scores.is_null() {
            return Err(Failure::null("scores"));
        }
        let n = g.graph.node_count();
        if capacity < n {
            return Err(Failure(SsStatus::BufferTooSmall, format!("scores holds {capacity} values, graph has {n} nodes")));
        }
        let metric = match metric {
            SsMetric::Pagerank => CentralityMetric::Pagerank,
            SsMetric::Betweenness => CentralityMetric::Betweenness,
            SsMetric::Closeness => CentralityMetric::Closeness,
        };
        let opts = CentralityOptions {
            binarize,
            path_length: if inverse_weight_paths { PathLength::InverseWeight } else { PathLength::Hops },
            ..CentralityOptions::default()
        };
        let c = centrality(&g.graph, metric, &opts).map_err(Failure::compute)?;
        let dst = std::slice::from_raw_parts_mut(scores, n);
        for (slot, id) in dst.iter_mut().zip(g.graph.nodes()) {
            *slot = c.scores.get(id).copied().unwrap_or(0.0);
        }
        Ok(())
    })
}

/// Loads a JSONL tweet file. Malformed lines are skipped and counted.
#[no_mangle]
pub unsafe extern "C" fn ss_corpus_load(path: *const c_char, corpus: *mut *mut SsCorpus) -> SsStatus {
    guard(|| {
        let slot = out(corpus, "corpus")?;
        let path = text(path, "path")?;
        let report = load_tweets(path.as_ref()).map_err(|e| Failure(SsStatus::Io, e.to_string()))?;
        *slot = Box::into_raw(Box::new(SsCorpus { corpus: report.corpus, rejected: report.rejections.len() }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ss_corpus_free(corpus: *mut SsCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ss_corpus_len(corpus: *const SsCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.corpus.len())
}

#[no_mangle]
pub unsafe extern "C" fn ss_corpus_rejected(corpus: *const SsCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.rejected)
}

/// Coin co-mention network of the corpus under the registry at `registry_path`.
#[no_mangle]
pub unsafe extern "C" fn ss_corpus_comention_graph(
    corpus: *const SsCorpus,
    registry_path: *const c_char,
    graph: *mut *mut SsGraph,
) -> SsStatus {
    guard(|| {
        let c = corpus.as_ref().ok_or_else(|| Failure::null("corpus"))?;
        let slot = out(graph, "graph")?;
        let path = text(registry_path, "registry_path")?;
        let registry = CoinRegistry::load(path.as_ref()).map_err(|e| Failure(SsStatus::Io, e.to_string()))?;
        let mentions = detect_all(&c.corpus, &MentionIndex::new(&registry));
        *slot = Box::into_raw(Box::new(SsGraph::new(build_comention_network(&mentions))));
        Ok(())
    })
}

/// Directed author -> retweeted-author network of the corpus.
#[no_mangle]
pub unsafe extern "C" fn ss_corpus_retweet_graph(corpus: *const SsCorpus, graph: *mut *mut SsGraph) -> SsStatus {
    guard(|| {
        let c = corpus.as_ref().ok_or_else(|| Failure::null("corpus"))?;
        let slot = out(graph, "graph")?;
        *slot = Box::into_raw(Box::new(SsGraph::new(build_retweet_network(&c.corpus))));
        Ok(())
    })
}

/// Runs a pipeline command from the TOML config at `config_path`. `out_dir`
/// may be null to use the configured output directory. `exit_code` (may be
/// null) receives the command-line exit code for the outcome.
#[no_mangle]
pub unsafe extern "C" fn ss_run_pipeline(
    config_path: *const c_char,
    command: SsCommand,
    out_dir: *const c_char,
    exit_code: *mut i32,
) -> SsStatus {
    let mut code = 0;
    let status = guard(|| {
        let path = text(config_path, "config_path")?;
        let out = if out_dir.is_null() { None } else { Some(PathBuf::from(text(out_dir, "out_dir")?)) };
        let config_failure = |e: String| Failure(SsStatus::InvalidArgument, format!("config: {e}"));
        let mut config = PipelineConfig::load(path.as_ref()).map_err(|e| config_failure(e.to_string()))?;
        config.apply(&Overrides { out, ..Overrides::default() }).map_err(|e| config_failure(e.to_string()))?;
        let command = match command {
            SsCommand::Ingest => Command::Ingest,
            SsCommand::Classify => Command::Classify,
            SsCommand::Signals => Command::Signals,
            SsCommand::Network => Command::Network,
            SsCommand::Granger => Command::Granger,
            SsCommand::Xcorr => Command::Xcorr,
            SsCommand::Matrix => Command::Matrix,
            SsCommand::Report => Command::Report,
            SsCommand::All => Command::All,
        };
        run_pipeline(&config, command).map(|_| ()).map_err(|e| {
            code = e.exit_code();
            Failure(SsStatus::Pipeline, e.to_string())
        })
    });
    if status == SsStatus::InvalidArgument && code == 0 {
        code = 2;
    }
    if let Some(c) = exit_code.as_mut() {
        *c = code;
    }
    status
}
