use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use chrono::{DateTime, Timelike, Utc};
use serde::Serialize;
use serde_json::json;

use super::config::{ClassifierChoice, PipelineConfig};
use super::manifest::{InputDigest, RunManifest, StageRecord, MANIFEST_FILE};
use super::output::{fmt_f64, fmt_prec, header, sha256_hex, OutputWriter, Schema};
use super::report::{render_significance_table, summarize_corpus, CorpusSummary};
use super::{PipelineError, Stage};
use crate::corpus::{
    detect_all, format_utc, mention_statistics, parse_prices, parse_tweets, parse_utc, resample_prices, CoinRegistry,
    Corpus, MentionIndex, PriceSeries, Resolution, SplitBy,
};
use crate::econometrics::{
    adf_test, best_lag_scan, granger_scan, return_correlation_matrix, AdfLevel, AlignedSeries, BestLag, GrangerRow,
    ReturnCorrelationMatrix, ScanOptions, Transform,
};
use crate::netgraph::{
    build_comention_network, build_retweet_network, centrality, edge_weight_share_filter, filter_influencers,
    load_profiles, matrix_pearson, parse_candidate_list, tag_similarity_matrix, CentralityMetric,
    WeightedGraph,
};
use crate::signals::{
    aggregate_signal_counts, classify_corpus, log_returns, Classifier, ClassifierVerdict, ExternalClassifier,
    HourGrid, Lexicon, LexiconClassifier, SignalTable, SignalVariant, MARKET,
};

/// Printed in every report: the direction of lags in the correlation and
/// Granger outputs.
pub const LAG_CONVENTION: &str = "lag k pairs the social signal at t-k with the price at t (signal leads); \
Granger rows test whether signal log returns help predict price log returns";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Ingest,
    Classify,
    Signals,
    Network,
    Granger,
    Xcorr,
    Matrix,
    Report,
    All,
}

/// Units of work; a command computes the parts it depends on and writes
/// the files of the parts it owns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Part {
    Ingest,
    Classify,
    Signals,
    Network,
    Granger,
    Xcorr,
    Matrix,
    Report,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Ingest => "ingest",
            Command::Classify => "classify",
            Command::Signals => "signals",
            Command::Network => "network",
            Command::Granger => "granger",
            Command::Xcorr => "xcorr",
            Command::Matrix => "matrix",
            Command::Report => "report",
            Command::All => "all",
        }
    }

    fn parts(self) -> &'static [Part] {
        use Part::*;
        match self {
            Command::Ingest => &[Ingest],
            Command::Classify => &[Ingest, Classify],
            Command::Signals => &[Ingest, Classify, Signals],
            Command::Network => &[Ingest, Network],
            Command::Granger => &[Ingest, Classify, Signals, Granger],
            Command::Xcorr => &[Ingest, Classify, Signals, Xcorr],
            Command::Matrix => &[Ingest, Matrix],
            Command::Report | Command::All => &[Ingest, Classify, Signals, Network, Granger, Xcorr, Matrix, Report],
        }
    }

    fn writes(self, part: Part) -> bool {
        match self {
            Command::All => true,
            Command::Report => part == Part::Report,
            _ => self.parts().last() == Some(&part),
        }
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub manifest: RunManifest,
}

/// Runs `command` and everything it depends on, writing outputs as each
/// stage completes and the manifest last. A failing stage leaves the files
/// of earlier stages untouched and records the failure in the manifest.
pub fn run_pipeline(config: &PipelineConfig, command: Command) -> Result<RunOutcome, PipelineError> {
    let out_dir = config.resolve(&config.run.out);
    let out = OutputWriter::new(&out_dir)
        .map_err(|e| PipelineError::new(Stage::Config, format!("output directory {}: {e}", out_dir.display())))?;
    let mut r = Runner {
        cfg: config,
        command,
        out,
        manifest: RunManifest::new(command.as_str(), config.snapshot()),
        rows: BTreeMap::new(),
    };
    let result = r.execute();
    match &result {
        Ok(()) => r.manifest.status = "ok".into(),
        Err(e) => {
            r.manifest.status = "failed".into();
            r.manifest.failed_stage = Some(e.stage.as_str().to_owned());
            r.manifest.error = Some(e.message.clone());
        }
    }
    r.manifest.outputs = r.out.files().clone();
    let mut bytes = serde_json::to_vec_pretty(&r.manifest).expect("manifest serializes");
    bytes.push(b'\n');
    let written = std::fs::write(out_dir.join(MANIFEST_FILE), bytes);
    result?;
    written.map_err(|e| PipelineError::new(Stage::Report, format!("{MANIFEST_FILE}: {e}")))?;
    Ok(RunOutcome { out_dir, manifest: r.manifest })
}

struct Runner<'a> {
    cfg: &'a PipelineConfig,
    command: Command,
    out: OutputWriter,
    manifest: RunManifest,
    rows: BTreeMap<String, usize>,
}

struct Ingested {
    corpus: Corpus,
    registry: CoinRegistry,
    prices: BTreeMap<String, PriceSeries>,
    index: MentionIndex,
    mentions: Vec<BTreeSet<String>>,
}

/// One coin's hourly prices with both social-signal variants on the same
/// hours.
struct CoinSeries {
    coin: String,
    origin: DateTime<Utc>,
    prices: Vec<f64>,
    ss: Vec<f64>,
    ss_crypto: Vec<f64>,
}

impl CoinSeries {
    fn signal(&self, variant: SignalVariant) -> &[f64] {
        match variant {
            SignalVariant::Plain => &self.ss,
            SignalVariant::WithMarket => &self.ss_crypto,
        }
    }
}

#[derive(Serialize)]
struct XcorrBest {
    price_formula: &'static str,
    signal_formula: &'static str,
    coin: String,
    best: Option<BestLag>,
    label: Option<String>,
}

const XCORR_PAIRS: [(&str, &str, Transform, Transform, SignalVariant); 4] = [
    ("CP", "SS", Transform::Level, Transform::Level, SignalVariant::Plain),
    ("CP", "SS_crypto", Transform::Level, Transform::Level, SignalVariant::WithMarket),
    ("r_CP", "r_SS", Transform::LogReturn, Transform::LogReturn, SignalVariant::Plain),
    ("r_CP", "r_SS_crypto", Transform::LogReturn, Transform::LogReturn, SignalVariant::WithMarket),
];

fn bool_str(b: bool) -> String {
    if b { "true" } else { "false" }.to_owned()
}

impl Runner<'_> {
    fn execute(&mut self) -> Result<(), PipelineError> {
        let parts = self.command.parts();
        let has = |p: Part| parts.contains(&p);

        let ing = self.timed(Stage::Ingest, "ingest", |r| r.ingest())?;
        let verdicts = if has(Part::Classify) {
            Some(self.timed(Stage::Classify, "classify", |r| r.classify(&ing))?)
        } else {
            None
        };
        let table = match &verdicts {
            Some(v) if has(Part::Signals) => Some(self.timed(Stage::Aggregate, "signals", |r| r.signals(&ing, v))?),
            _ => None,
        };
        let network = if has(Part::Network) {
            Some(self.timed(Stage::Network, "network", |r| r.network(&ing))?)
        } else {
            None
        };
        let series = match &table {
            Some(t) if has(Part::Granger) || has(Part::Xcorr) => {
                Some(coin_series(&ing, t).map_err(|e| PipelineError::new(Stage::Econometrics, e))?)
            }
            _ => None,
        };
        let granger = match &series {
            Some(cs) if has(Part::Granger) => Some(self.timed(Stage::Econometrics, "granger", |r| r.granger(cs))?),
            _ => None,
        };
        let xcorr = match &series {
            Some(cs) if has(Part::Xcorr) => Some(self.timed(Stage::Econometrics, "xcorr", |r| r.xcorr(cs))?),
            _ => None,
        };
        let matrix = if has(Part::Matrix) {
            Some(self.timed(Stage::Econometrics, "matrix", |r| r.matrix(&ing))?)
        } else {
            None
        };
        if has(Part::Report) {
            let (Some(v), Some(g), Some(x), Some(n), Some(m)) = (&verdicts, &granger, &xcorr, &network, &matrix) else {
                unreachable!("report depends on every other part");
            };
            self.timed(Stage::Report, "report", |r| r.report(&ing, v, g, x, n, m))?;
        }
        Ok(())
    }

    fn timed<T>(
        &mut self,
        stage: Stage,
        name: &str,
        f: impl FnOnce(&mut Self) -> Result<T, String>,
    ) -> Result<T, PipelineError> {
        let start = Instant::now();
        self.rows.clear();
        let value = f(self).map_err(|e| PipelineError::new(stage, e))?;
        self.manifest.stages.push(StageRecord {
            stage: name.to_owned(),
            rows: std::mem::take(&mut self.rows),
            wall_ms: start.elapsed().as_millis() as u64,
        });
        Ok(value)
    }

    fn warn(&mut self, msg: impl Into<String>) {
        self.manifest.warnings.push(msg.into());
    }

    fn csv(&mut self, name: &str, schema: Schema, header: Vec<String>, rows: Vec<Vec<String>>) -> Result<(), String> {
        let n = self.out.csv(name, schema, &header, &rows)?;
        self.rows.insert(name.to_owned(), n);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, keys: &'static [&'static str], value: &T) -> Result<(), String> {
        let n = self.out.json(name, Schema::Json(keys), value)?;
        self.rows.insert(name.to_owned(), n);
        Ok(())
    }

    fn matrix_csv(&mut self, name: &str, labels: &[String], values: &[Vec<f64>]) -> Result<(), String> {
        let mut h = vec!["coin".to_owned()];
        h.extend(labels.iter().cloned());
        let rows = labels
            .iter()
            .zip(values)
            .map(|(l, row)| std::iter::once(l.clone()).chain(row.iter().map(|v| fmt_prec(*v, 6))).collect())
            .collect();
        self.csv(name, Schema::Matrix, h, rows)
    }

    /// Reads an input file and records its digest under `name`.
    fn read_input(&mut self, name: &str, path: &Path) -> Result<Vec<u8>, String> {
        let bytes = std::fs::read(self.cfg.resolve(path)).map_err(|e| format!("{name} {}: {e}", path.display()))?;
        self.manifest.inputs.insert(
            name.to_owned(),
            InputDigest { path: path.display().to_string(), bytes: bytes.len() as u64, sha256: sha256_hex(&bytes) },
        );
        Ok(bytes)
    }

    fn ingest(&mut self) -> Result<Ingested, String> {
        let inputs = &self.cfg.inputs;
        let raw_registry = self.read_input("registry", &inputs.registry)?;
        let raw_tweets = self.read_input("tweets", &inputs.tweets)?;
        let raw_prices = self.read_input("prices", &inputs.prices)?;

        let registry = CoinRegistry::from_json(&String::from_utf8_lossy(&raw_registry))
            .map_err(|e| format!("registry: {e}"))?;
        let report = parse_tweets(raw_tweets.as_slice()).map_err(|e| format!("tweets: {e}"))?;
        let mut prices = parse_prices(raw_prices.as_slice()).map_err(|e| format!("prices: {e}"))?;

        let unknown: Vec<String> = prices.keys().filter(|c| registry.get(c).is_none()).cloned().collect();
        for c in unknown {
            prices.remove(&c);
            self.warn(format!("prices: coin {c} is not in the registry and was ignored"));
        }
        for (coin, s) in &prices {
            if let Some((a, b)) = s.gaps().first() {
                return Err(format!("prices: {coin} has no price from {} to {}", format_utc(a), format_utc(b)));
            }
        }
        if !report.rejections.is_empty() {
            self.warn(format!("tweets: {} lines rejected", report.rejections.len()));
        }
        let corpus = report.corpus;
        let index = MentionIndex::new(&registry);
        let mentions = detect_all(&corpus, &index);

        if self.command.writes(Part::Ingest) {
            let rows = report
                .rejections
                .iter()
                .map(|r| vec![r.line.to_string(), r.reason.kind().to_owned(), r.reason.detail().to_owned()])
                .collect();
            self.csv("ingest_rejections.csv", Schema::Csv(&["line", "kind", "detail"]), header(&["line", "kind", "detail"]), rows)?;

            let rows = corpus
                .iter()
                .zip(&mentions)
                .map(|(t, m)| vec![t.id.clone(), m.iter().cloned().collect::<Vec<_>>().join(";")])
                .collect();
            self.csv("mentions.csv", Schema::Csv(&["tweet_id", "coins"]), header(&["tweet_id", "coins"]), rows)?;

            let mut by_kind: BTreeMap<&str, usize> = BTreeMap::new();
            for r in &report.rejections {
                *by_kind.entry(r.reason.kind()).or_default() += 1;
            }
            let span = corpus.span().map(|(a, b)| [format_utc(&a), format_utc(&b)]);
            let price_info: BTreeMap<&str, serde_json::Value> = prices
                .iter()
                .map(|(c, s)| {
                    let pts = s.points();
                    (
                        c.as_str(),
                        json!({"first": format_utc(&pts[0].0), "last": format_utc(&pts[pts.len() - 1].0), "hours": pts.len()}),
                    )
                })
                .collect();
            let mention_stats = if corpus.is_empty() {
                None
            } else {
                Some(mention_statistics(&corpus, &mentions, SplitBy::AuthorClass, None).map_err(|e| e.to_string())?)
            };
            let summary = json!({
                "tweets": corpus.len(),
                "rejected": report.rejections.len(),
                "rejected_by_kind": by_kind,
                "span": span,
                "coins": registry.ids().collect::<Vec<_>>(),
                "prices": price_info,
                "mentions_by_author_class": mention_stats,
            });
            self.json("ingest_summary.json", &["tweets", "rejected", "coins", "prices"], &summary)?;
        }
        Ok(Ingested { corpus, registry, prices, index, mentions })
    }

    fn classifier(&mut self, index: &MentionIndex) -> Result<Box<dyn Classifier>, String> {
        match &self.cfg.classifier {
            ClassifierChoice::Lexicon => {
                let path = self.cfg.inputs.lexicon.clone().ok_or("inputs.lexicon is not set")?;
                let raw = self.read_input("lexicon", &path)?;
                let lex = Lexicon::from_toml(&String::from_utf8_lossy(&raw)).map_err(|e| format!("lexicon: {e}"))?;
                Ok(Box::new(LexiconClassifier::new(&lex, Some(index.clone())).map_err(|e| e.to_string())?))
            }
            ClassifierChoice::External(c) => {
                Ok(Box::new(ExternalClassifier::http(c.clone()).map_err(|e| e.to_string())?))
            }
        }
    }

    fn classify(&mut self, ing: &Ingested) -> Result<Vec<ClassifierVerdict>, String> {
        let clf = self.classifier(&ing.index)?;
        let verdicts = classify_corpus(&ing.corpus, clf.as_ref()).map_err(|e| e.to_string())?;
        if self.command.writes(Part::Classify) {
            let rows = ing
                .corpus
                .iter()
                .zip(&verdicts)
                .map(|(t, v)| {
                    vec![
                        t.id.clone(),
                        bool_str(v.is_relevant()),
                        v.raw_label().map(|l| l.as_str()).unwrap_or("").to_owned(),
                        v.label().map(|l| l.as_str()).unwrap_or("").to_owned(),
                        v.source().as_str().to_owned(),
                    ]
                })
                .collect();
            let cols = ["tweet_id", "relevant", "raw_label", "label", "source"];
            self.csv("labels.csv", Schema::Csv(&["tweet_id", "relevant", "raw_label", "label", "source"]), header(&cols), rows)?;
        }
        Ok(verdicts)
    }

    fn signals(&mut self, ing: &Ingested, verdicts: &[ClassifierVerdict]) -> Result<SignalTable, String> {
        let grid = if !ing.prices.is_empty() {
            let start = ing.prices.values().map(|s| s.points()[0].0).min().expect("non-empty");
            let end = ing.prices.values().map(|s| s.points()[s.len() - 1].0).max().expect("non-empty");
            HourGrid::new(start, Resolution::Hourly.index(start, end) as usize + 1)
        } else if let Some((a, b)) = ing.corpus.span() {
            let (a, b) = (Resolution::Hourly.ceil(a), Resolution::Hourly.ceil(b));
            HourGrid::new(a, Resolution::Hourly.index(a, b) as usize + 1)
        } else {
            return Err("no prices and no tweets: nothing to aggregate".into());
        }
        .map_err(|e| e.to_string())?;
        let table = aggregate_signal_counts(
            &ing.corpus,
            &ing.mentions,
            verdicts,
            ing.registry.ids(),
            grid,
            self.cfg.signals.population,
        )
        .map_err(|e| e.to_string())?;

        if self.command.writes(Part::Signals) {
            let mut coins: Vec<&str> = table.coins().collect();
            coins.push(MARKET);
            let mut rows = Vec::with_capacity(coins.len() * grid.hours);
            for coin in coins {
                let plain = table.social_signal_series(coin, SignalVariant::Plain).expect("coin in table");
                let crypto = (coin != MARKET)
                    .then(|| table.social_signal_series(coin, SignalVariant::WithMarket).expect("coin in table"));
                for h in 0..grid.hours {
                    let c = table.counts(coin, h).expect("hour in grid");
                    rows.push(vec![
                        coin.to_owned(),
                        format_utc(&c.window_end),
                        c.n_buy.to_string(),
                        c.n_not_buy.to_string(),
                        fmt_f64(plain.values[h]),
                        crypto.as_ref().map_or_else(|| "NA".to_owned(), |s| fmt_f64(s.values[h])),
                    ]);
                }
            }
            let cols = ["coin", "window_end", "n_buy", "n_not_buy", "ss", "ss_crypto"];
            self.csv("signals.csv", Schema::Csv(&["coin", "window_end", "n_buy", "n_not_buy", "ss", "ss_crypto"]), header(&cols), rows)?;
        }
        Ok(table)
    }

    fn network(&mut self, ing: &Ingested) -> Result<serde_json::Value, String> {
        let net = &self.cfg.network;
        let writes = self.command.writes(Part::Network);
        let edge_rows = |g: &WeightedGraph| -> Vec<Vec<String>> {
            g.edges().map(|(u, v, w)| vec![u.to_owned(), v.to_owned(), fmt_f64(w)]).collect()
        };
        const EDGE: &[&str] = &["u", "v", "weight"];

        // co-mention structure
        let full = build_comention_network(&ing.mentions);
        let filtered = net.filter.apply(&full).map_err(|e| e.to_string())?;
        let total_degree: f64 = full.weighted_degrees().values().sum();
        let top_pairs = edge_weight_share_filter(&full, net.edge_share).map_err(|e| e.to_string())?;
        let labels: Vec<String> = filtered.nodes().map(str::to_owned).collect();
        let adjacency = filtered.adjacency_matrix(&labels);
        let similarity = tag_similarity_matrix(&ing.registry, &labels).map_err(|e| e.to_string())?;
        let correlation = if labels.len() >= 3 {
            match matrix_pearson(&adjacency, &similarity) {
                Ok((r, p)) => Some(json!({"r": r, "p_value": p, "pairs": labels.len() * (labels.len() - 1) / 2})),
                Err(e) => {
                    self.warn(format!("network: adjacency/similarity correlation unavailable: {e}"));
                    None
                }
            }
        } else {
            self.warn(format!(
                "network: {} nodes survive the filter; adjacency/similarity correlation needs at least 3",
                labels.len()
            ));
            None
        };
        if writes {
            self.csv("comention_edges.csv", Schema::Csv(EDGE), header(EDGE), edge_rows(&full))?;
            self.csv("comention_filtered_edges.csv", Schema::Csv(EDGE), header(EDGE), edge_rows(&filtered))?;
            let rows = full
                .weighted_degrees()
                .into_iter()
                .map(|(n, d)| {
                    vec![n.to_owned(), fmt_f64(d), fmt_f64(d / total_degree), bool_str(filtered.contains(n))]
                })
                .collect();
            let cols = ["node", "weighted_degree", "share", "kept"];
            self.csv("comention_nodes.csv", Schema::Csv(&["node", "weighted_degree", "share", "kept"]), header(&cols), rows)?;
            let total = full.total_weight();
            let rows = top_pairs
                .iter()
                .map(|e| vec![e.u.clone(), e.v.clone(), fmt_f64(e.weight), fmt_f64(e.weight / total)])
                .collect();
            let cols = ["u", "v", "weight", "share"];
            self.csv("comention_top_pairs.csv", Schema::Csv(&["u", "v", "weight", "share"]), header(&cols), rows)?;
            self.matrix_csv("comention_adjacency.csv", &labels, &adjacency.values)?;
            self.matrix_csv("similarity.csv", &labels, &similarity.values)?;
        }

        // retweet structure and influencer selection
        let retweets = build_retweet_network(&ing.corpus);
        let mut centrality_rows = Vec::new();
        let mut candidates: BTreeMap<String, (bool, Vec<String>)> = BTreeMap::new();
        if retweets.node_count() > 0 {
            let scores: Vec<_> = CentralityMetric::ALL
                .iter()
                .map(|&m| centrality(&retweets, m, &net.centrality))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            for node in retweets.nodes() {
                let mut row = vec![node.to_owned()];
                row.extend(scores.iter().map(|s| fmt_f64(s.scores[node])));
                centrality_rows.push(row);
            }
            let top = crate::netgraph::top_k_union(&scores, net.top_k).map_err(|e| e.to_string())?;
            for id in top {
                candidates.entry(id).or_default().0 = true;
            }
        } else {
            self.warn("network: the corpus has no retweets; centrality candidates are empty");
        }
        for (i, path) in self.cfg.inputs.candidate_lists.iter().enumerate() {
            let raw = self.read_input(&format!("candidate_list_{i}"), path)?;
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            for id in parse_candidate_list(&String::from_utf8_lossy(&raw)) {
                candidates.entry(id).or_default().1.push(name.clone());
            }
        }

        let selection = match self.cfg.inputs.profiles.clone() {
            Some(path) => {
                self.read_input("profiles", &path)?;
                let profiles = load_profiles(&self.cfg.resolve(&path)).map_err(|e| e.to_string())?;
                let as_of = match &net.as_of {
                    Some(t) => parse_utc(t)?,
                    None => ing.corpus.span().ok_or("network: as_of is unset and the corpus is empty")?.1,
                };
                let ids: BTreeSet<String> = candidates.keys().cloned().collect();
                let bios: Vec<&str> =
                    ids.iter().filter_map(|id| profiles.get(id)?.bio.as_deref()).collect::<BTreeSet<_>>().into_iter().collect();
                let clf = self.classifier(&ing.index)?;
                let mut relevant_bios = BTreeSet::new();
                for chunk in bios.chunks(clf.max_batch().max(1)) {
                    let verdicts = clf.classify_batch(chunk).map_err(|e| format!("bio classification: {e}"))?;
                    relevant_bios.extend(chunk.iter().zip(verdicts).filter(|(_, v)| v.is_relevant()).map(|(b, _)| *b));
                }
                let sel = filter_influencers(&ids, &profiles, &net.influencer, as_of, |b| relevant_bios.contains(b))
                    .map_err(|e| e.to_string())?;
                Some(sel)
            }
            None => {
                self.warn("network: no profiles configured; influencer criteria were not applied");
                None
            }
        };

        if writes {
            self.csv("retweet_edges.csv", Schema::Csv(EDGE), header(EDGE), edge_rows(&retweets))?;
            let cols = ["node", "pagerank", "betweenness", "closeness"];
            self.csv("centrality.csv", Schema::Csv(&["node", "pagerank", "betweenness", "closeness"]), header(&cols), centrality_rows)?;
            let rows = candidates
                .iter()
                .map(|(id, (c, lists))| {
                    let status = match &selection {
                        Some(s) if s.accepted.contains(id) => "accepted",
                        Some(_) => "rejected",
                        None => "unchecked",
                    };
                    let reason = selection.as_ref().and_then(|s| s.rejected.get(id)).map_or("", |r| r.as_str());
                    vec![id.clone(), bool_str(*c), lists.join(";"), status.to_owned(), reason.to_owned()]
                })
                .collect();
            let cols = ["id", "from_centrality", "from_lists", "status", "reason"];
            self.csv(
                "influencers.csv",
                Schema::Csv(&["id", "from_centrality", "from_lists", "status", "reason"]),
                header(&cols),
                rows,
            )?;
        }

        let mut rejected_by_reason: BTreeMap<&str, usize> = BTreeMap::new();
        if let Some(s) = &selection {
            for r in s.rejected.values() {
                *rejected_by_reason.entry(r.as_str()).or_default() += 1;
            }
        }
        let summary = json!({
            "comention": {
                "nodes": full.node_count(),
                "edges": full.edge_count(),
                "total_weight": full.total_weight(),
                "filter": net.filter.describe(),
                "filtered_nodes": labels,
                "filtered_edges": filtered.edge_count(),
                "top_pairs": top_pairs,
                "adjacency_similarity": correlation,
            },
            "retweet": {
                "nodes": retweets.node_count(),
                "edges": retweets.edge_count(),
                "candidates": candidates.len(),
                "accepted": selection.as_ref().map(|s| s.accepted.len()),
                "rejected_by_reason": selection.as_ref().map(|_| rejected_by_reason),
            },
        });
        if writes {
            self.json("network.json", &["comention", "retweet"], &summary)?;
        }
        Ok(summary)
    }

    fn granger(&mut self, series: &[CoinSeries]) -> Result<Vec<(String, Vec<GrangerRow>)>, String> {
        let max_lag = self.cfg.econometrics.granger_max_lag;
        let mut with_market = Vec::new();
        for (variant, file, label) in [
            (SignalVariant::WithMarket, "granger.csv", "r_SS_crypto"),
            (SignalVariant::Plain, "granger_plain.csv", "r_SS"),
        ] {
            let mut all = Vec::new();
            for cs in series {
                let effect = log_returns(&cs.prices).map_err(|e| format!("{} price returns: {e}", cs.coin))?;
                let cause = log_returns(cs.signal(variant)).map_err(|e| format!("{} signal returns: {e}", cs.coin))?;
                let rows = granger_scan(&cause, &effect, max_lag);
                let failed: Vec<&GrangerRow> = rows.iter().filter(|r| r.outcome.is_err()).collect();
                if let Some(first) = failed.first() {
                    let err = first.outcome.as_ref().unwrap_err();
                    self.warn(format!(
                        "granger {label} {}: {} of {} lags failed (lag {}: {err})",
                        cs.coin,
                        failed.len(),
                        rows.len(),
                        first.lag
                    ));
                }
                all.push((cs.coin.clone(), rows));
            }
            if self.command.writes(Part::Granger) {
                let bands = &self.cfg.econometrics.bands;
                let rows = all
                    .iter()
                    .flat_map(|(coin, rows)| {
                        rows.iter().map(move |r| match &r.outcome {
                            Ok(g) => vec![
                                coin.clone(),
                                r.lag.to_string(),
                                fmt_f64(g.f_statistic),
                                fmt_f64(g.p_value),
                                bands.label(g.p_value),
                            ],
                            Err(_) => vec![coin.clone(), r.lag.to_string(), "NA".into(), "NA".into(), String::new()],
                        })
                    })
                    .collect();
                let cols = ["coin", "lag_hours", "f_stat", "p_value", "band"];
                self.csv(file, Schema::Csv(&["coin", "lag_hours", "f_stat", "p_value", "band"]), header(&cols), rows)?;
            }
            if variant == SignalVariant::WithMarket {
                with_market = all;
            }
        }
        Ok(with_market)
    }

    fn xcorr(&mut self, series: &[CoinSeries]) -> Result<Vec<XcorrBest>, String> {
        let e = &self.cfg.econometrics;
        let options = ScanOptions { hourly_max: e.xcorr_hourly_max, daily_max: e.xcorr_daily_max, mode: e.mean_mode };
        let mut rows = Vec::new();
        let mut bests = Vec::new();
        for cs in series {
            // daily buckets start at UTC midnight
            let skip = ((24 - cs.origin.hour()) % 24) as usize;
            if skip >= cs.prices.len() {
                return Err(format!("{}: price series ends before the first UTC midnight", cs.coin));
            }
            let prices = &cs.prices[skip..];
            match adf_test(prices, None) {
                Ok(r) if r.rejects_at(AdfLevel::Five) => {}
                Ok(r) => self.warn(format!(
                    "xcorr {}: CP rows correlate price levels that fail the ADF test at 5% (statistic {:.4})",
                    cs.coin, r.statistic
                )),
                Err(err) => self.warn(format!("xcorr {}: ADF test on price levels failed: {err}", cs.coin)),
            }
            for (pf, sf, pt, st, variant) in XCORR_PAIRS {
                let signal = &cs.signal(variant)[skip..];
                let scan = best_lag_scan(prices, signal, pt, st, options).map_err(|e| format!("{} {pf}/{sf}: {e}", cs.coin))?;
                for s in [&scan.hourly, &scan.daily] {
                    for (lag, g) in &s.values {
                        let is_best = scan.best.as_ref().is_some_and(|b| b.resolution == s.resolution && b.lag == *lag);
                        rows.push(vec![
                            pf.to_owned(),
                            sf.to_owned(),
                            cs.coin.clone(),
                            s.resolution.as_str().to_owned(),
                            lag.to_string(),
                            g.as_ref().map_or_else(|_| "NA".to_owned(), |g| fmt_f64(*g)),
                            bool_str(is_best),
                        ]);
                    }
                }
                let label = scan.best.as_ref().map(BestLag::label);
                bests.push(XcorrBest { price_formula: pf, signal_formula: sf, coin: cs.coin.clone(), best: scan.best, label });
            }
        }
        if self.command.writes(Part::Xcorr) {
            let cols = ["price_formula", "signal_formula", "coin", "resolution", "lag", "gamma", "is_best"];
            self.csv(
                "xcorr.csv",
                Schema::Csv(&["price_formula", "signal_formula", "coin", "resolution", "lag", "gamma", "is_best"]),
                header(&cols),
                rows,
            )?;
        }
        Ok(bests)
    }

    fn matrix(&mut self, ing: &Ingested) -> Result<Option<ReturnCorrelationMatrix>, String> {
        let e = &self.cfg.econometrics;
        let excluded: BTreeSet<&str> = e.matrix_exclude_tags.iter().map(String::as_str).collect();
        let coins: Vec<(&String, &PriceSeries)> = ing
            .prices
            .iter()
            .filter(|(c, _)| {
                let tags = &ing.registry.get(c).expect("priced coins are registered").tags;
                !tags.iter().any(|t| excluded.contains(t.as_str()))
            })
            .collect();
        if coins.len() < 2 {
            self.warn(format!("matrix: {} eligible coins; the return matrix needs at least 2", coins.len()));
            return Ok(None);
        }
        let start = coins.iter().map(|(_, s)| s.points()[0].0).max().expect("non-empty");
        let end = coins.iter().map(|(_, s)| s.points()[s.len() - 1].0).min().expect("non-empty");
        if start > end {
            return Err("matrix: price series do not share a common window".into());
        }
        let hours = Resolution::Hourly.index(start, end) as usize + 1;

        let mut hourly = Vec::new();
        let mut weekly = Vec::new();
        for (coin, s) in &coins {
            let levels = s.window(start, hours).map_err(|e| e.to_string())?;
            let points: Vec<(DateTime<Utc>, f64)> =
                levels.iter().enumerate().map(|(i, v)| (Resolution::Hourly.advance(start, i as i64), *v)).collect();
            let common = PriceSeries::new(coin, points).map_err(|e| e.to_string())?;
            let weeks = resample_prices(&common, Resolution::Weekly).map_err(|e| e.to_string())?;
            let h = log_returns(&levels).map_err(|e| format!("{coin}: {e}"))?;
            let w = log_returns(&weeks.values).map_err(|e| format!("{coin} weekly: {e}"))?;
            hourly.push((coin.as_str(), Resolution::Hourly.advance(start, 1), h));
            weekly.push((coin.as_str(), Resolution::Weekly.advance(weeks.origin, 1), w));
        }
        let m = return_correlation_matrix(&view(&hourly), &view(&weekly), e.adf_override).map_err(|e| e.to_string())?;
        for w in &m.warnings {
            self.warn(format!("matrix: {w}"));
        }
        if self.command.writes(Part::Matrix) {
            self.matrix_csv("matrix.csv", &m.coins, &m.values)?;
            self.matrix_csv("matrix_pvalues.csv", &m.coins, &m.p_values)?;
            let summary = json!({
                "convention": "lower triangle (row > column): hourly log returns; upper triangle: log returns of weekly mean prices",
                "coins": m.coins,
                "window": [format_utc(&start), format_utc(&end)],
                "hourly_returns": hourly[0].2.len(),
                "weekly_returns": weekly[0].2.len(),
                "adf_override": m.adf_override,
                "warnings": m.warnings,
            });
            self.json("matrix.json", &["convention", "coins", "adf_override", "warnings"], &summary)?;
        }
        Ok(Some(m))
    }

    fn report(
        &mut self,
        ing: &Ingested,
        verdicts: &[ClassifierVerdict],
        granger: &[(String, Vec<GrangerRow>)],
        xcorr: &[XcorrBest],
        network: &serde_json::Value,
        matrix: &Option<ReturnCorrelationMatrix>,
    ) -> Result<(), String> {
        let coins: Vec<String> = ing.registry.ids().map(str::to_owned).collect();
        let summary: CorpusSummary = summarize_corpus(&ing.corpus, &ing.mentions, verdicts, &coins);
        let table = render_significance_table(granger, &self.cfg.econometrics.bands, LAG_CONVENTION);
        let min_p: BTreeMap<&str, serde_json::Value> = granger
            .iter()
            .map(|(coin, rows)| {
                let best = rows
                    .iter()
                    .filter_map(|r| r.outcome.as_ref().ok())
                    .min_by(|a, b| a.p_value.total_cmp(&b.p_value).then(a.lag.cmp(&b.lag)));
                (coin.as_str(), json!(best.map(|g| json!({"lag_hours": g.lag, "p_value": g.p_value}))))
            })
            .collect();
        self.csv("significance_table.csv", Schema::CsvPrefix(&["lag_hours"]), table.csv_header(), table.csv_rows())?;
        self.json("significance_table.json", &["convention", "bands", "coins", "lags", "cells"], &table)?;
        self.json("corpus_summary.json", &["tweets", "author_class", "signal", "coins"], &summary)?;
        let bundle = json!({
            "convention": LAG_CONVENTION,
            "population": self.cfg.signals.population.as_str(),
            "classifier": match &self.cfg.classifier {
                ClassifierChoice::Lexicon => "lexicon",
                ClassifierChoice::External(_) => "external",
            },
            "corpus": summary,
            "granger_min_p": min_p,
            "xcorr_best": xcorr,
            "network": network,
            "matrix": matrix,
            "warnings": self.manifest.warnings,
        });
        self.json("report.json", &["convention", "corpus", "granger_min_p", "xcorr_best", "network", "matrix"], &bundle)
    }
}

fn view<'a>(v: &'a [(&'a str, DateTime<Utc>, Vec<f64>)]) -> Vec<AlignedSeries<'a>> {
    v.iter().map(|(c, o, vals)| AlignedSeries { coin: c, origin: *o, values: vals }).collect()
}

fn coin_series(ing: &Ingested, table: &SignalTable) -> Result<Vec<CoinSeries>, String> {
    let grid = table.grid();
    let mut out = Vec::new();
    for (coin, s) in &ing.prices {
        let (origin, prices) = s.hourly_values().map_err(|e| e.to_string())?;
        let off = Resolution::Hourly.index(grid.origin, origin);
        if off < 0 || off as usize + prices.len() > grid.hours {
            return Err(format!("{coin}: price hours fall outside the signal grid"));
        }
        let off = off as usize;
        let take = |v: SignalVariant| -> Vec<f64> {
            table.social_signal_series(coin, v).expect("registered coin").values[off..off + prices.len()].to_vec()
        };
        out.push(CoinSeries {
            coin: coin.clone(),
            origin,
            ss: take(SignalVariant::Plain),
            ss_crypto: take(SignalVariant::WithMarket),
            prices,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_parts() {
        assert!(Command::Granger.writes(Part::Granger));
        assert!(!Command::Granger.writes(Part::Signals));
        assert!(Command::All.writes(Part::Ingest));
        assert!(!Command::Report.writes(Part::Matrix));
        assert!(Command::Report.writes(Part::Report));
        assert!(!Command::Matrix.parts().contains(&Part::Classify));
    }
}
