//! Seeded synthetic corpus: tweets, hourly prices, registry, lexicon,
//! profiles, a candidate list and a ready-to-run config.
//!
//! Each coin carries a latent sentiment path. Tweets about the coin lean
//! bullish or bearish with it, and its hourly returns respond to it six
//! hours later, so the fixture has a planted signal-to-price lead.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use chrono::{DateTime, Duration, Utc};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Normal};
use serde_json::json;

use crate::corpus::format_utc;

#[derive(Debug, Clone)]
pub struct SimulationOptions {
    pub seed: u64,
    pub tweets: usize,
    pub days: usize,
    pub influencers: usize,
    pub news: usize,
    pub start: DateTime<Utc>,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions {
            seed: 0,
            tweets: 10_000,
            days: 196,
            influencers: 150,
            news: 50,
            start: DateTime::from_timestamp(1_704_067_200, 0).expect("valid"), // 2024-01-01, a Monday
        }
    }
}

struct Coin {
    id: &'static str,
    aliases: &'static [&'static str],
    tags: &'static [&'static str],
    price: f64,
    beta: f64,
    vol: f64,
    popularity: f64,
}

const COINS: &[Coin] = &[
    Coin { id: "BTC", aliases: &["btc", "bitcoin"], tags: &["layer1", "pow", "store-of-value"], price: 42_000.0, beta: 1.0, vol: 0.004, popularity: 0.33 },
    Coin { id: "ETH", aliases: &["eth", "ethereum", "ether"], tags: &["layer1", "smart-contracts", "pos"], price: 2_300.0, beta: 1.1, vol: 0.005, popularity: 0.22 },
    Coin { id: "SOL", aliases: &["sol", "solana"], tags: &["layer1", "smart-contracts", "pos"], price: 100.0, beta: 1.3, vol: 0.008, popularity: 0.12 },
    Coin { id: "DOGE", aliases: &["doge", "dogecoin"], tags: &["meme", "pow"], price: 0.09, beta: 1.2, vol: 0.009, popularity: 0.11 },
    Coin { id: "XRP", aliases: &["xrp", "ripple"], tags: &["payments"], price: 0.6, beta: 0.9, vol: 0.007, popularity: 0.09 },
    Coin { id: "ADA", aliases: &["ada", "cardano"], tags: &["layer1", "smart-contracts", "pos"], price: 0.55, beta: 1.0, vol: 0.007, popularity: 0.08 },
    Coin { id: "USDT", aliases: &["usdt", "tether"], tags: &["stablecoin", "payments"], price: 1.0, beta: 0.0, vol: 0.0002, popularity: 0.05 },
];

const RELEVANCE: &[&str] = &["crypto", "market", "altcoins", "portfolio", "trading", "chart"];
const BULLISH: &[&str] = &["buy", "moon", "bullish", "long", "pump", "breakout", "accumulate"];
const BEARISH: &[&str] = &["sell", "dump", "bearish", "short", "crash", "rekt", "exit"];
const FILLER: &[&str] = &[
    "what a week",
    "watching closely",
    "volume is picking up",
    "thoughts?",
    "not financial advice",
    "news just dropped",
    "charts look interesting",
    "big moves today",
];
const OFF_TOPIC: &[&str] = &[
    "good morning everyone",
    "lunch was great today",
    "anyone watching the game tonight",
    "new podcast episode is live",
    "weekend plans",
];
const RELEVANT_BIOS: &[&str] =
    &["crypto trader and analyst", "bitcoin since 2013", "market news for digital assets", "altcoins research"];
const OTHER_BIOS: &[&str] = &["food blogger", "dad, runner, coffee", "travel photography"];

/// Lag in hours between sentiment and its price response.
const PRICE_LAG: usize = 6;

pub fn simulate_fixture(opts: &SimulationOptions, dir: &Path) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let hours = opts.days * 24;
    let std_normal = Normal::new(0.0, 1.0).expect("valid");

    // latent sentiment per coin: AR(1) around zero
    let mut sentiment = vec![vec![0.0; hours]; COINS.len()];
    for path in &mut sentiment {
        for t in 1..hours {
            path[t] = 0.97 * path[t - 1] + 0.25 * std_normal.sample(&mut rng);
        }
    }

    // hourly prices: market factor + idiosyncratic noise + lagged sentiment
    let mut prices = String::from("timestamp,coin,price\n");
    let market: Vec<f64> = (0..hours).map(|_| 0.003 * std_normal.sample(&mut rng)).collect();
    let mut levels = vec![Vec::with_capacity(hours); COINS.len()];
    for (c, coin) in COINS.iter().enumerate() {
        let mut log_p = coin.price.ln();
        for t in 0..hours {
            if t > 0 {
                let push = if coin.beta > 0.0 && t >= PRICE_LAG { 0.0015 * sentiment[c][t - PRICE_LAG] } else { 0.0 };
                let noise = coin.vol * std_normal.sample(&mut rng);
                log_p += coin.beta * market[t] + noise + push;
                if coin.beta == 0.0 {
                    log_p = 0.5 * log_p + 0.5 * coin.price.ln();
                }
            }
            levels[c].push(log_p.exp());
        }
    }
    for t in 0..hours {
        let ts = format_utc(&(opts.start + Duration::hours(t as i64)));
        for (c, coin) in COINS.iter().enumerate() {
            let p = levels[c][t];
            let digits = (6 - p.log10().floor() as i32).max(2) as usize;
            writeln!(prices, "{ts},{},{p:.digits$}", coin.id).expect("string write");
        }
    }
    fs::write(dir.join("prices.csv"), prices)?;

    // authors with Zipf-like activity
    let mut authors: Vec<(String, &str)> = (0..opts.influencers).map(|i| (format!("inf_{i:03}"), "influencer")).collect();
    authors.extend((0..opts.news).map(|i| (format!("news_{i:02}"), "news")));
    let weights: Vec<f64> = (0..authors.len()).map(|i| 1.0 / ((i % 60) as f64 + 1.0).powf(0.8)).collect();
    let followers_dist = LogNormal::new(9.8, 1.1).expect("valid");
    let engagement_dist = LogNormal::new(5.2, 0.9).expect("valid");
    let followers: Vec<u64> = authors.iter().map(|_| followers_dist.sample(&mut rng) as u64).collect();

    let span_secs = (hours as i64 - 1) * 3600;
    let mut times: Vec<i64> = (0..opts.tweets).map(|_| rng.random_range(0..span_secs)).collect();
    times.sort_unstable();

    let mut tweets = String::new();
    let mut last_seen: BTreeMap<usize, DateTime<Utc>> = BTreeMap::new();
    let mut engagement_log: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (n, secs) in times.into_iter().enumerate() {
        let at = opts.start + Duration::seconds(secs);
        let hour = (secs / 3600) as usize;
        let a = pick_weighted(&mut rng, &weights);
        let (author_id, class) = &authors[a];

        let mut text = String::new();
        let mut retweeted = None;
        if rng.random_bool(0.15) {
            let mut b = pick_weighted(&mut rng, &weights[..opts.influencers]);
            if b == a {
                b = (b + 1) % opts.influencers;
            }
            retweeted = Some(authors[b].0.clone());
            text.push_str("RT ");
        }

        if rng.random_bool(0.1) {
            text.push_str(OFF_TOPIC.choose(&mut rng).expect("non-empty"));
        } else {
            let m = pick_weighted(&mut rng, &[0.15, 0.55, 0.2, 0.1]);
            let mut chosen: Vec<usize> = Vec::new();
            let pop: Vec<f64> = COINS.iter().map(|c| c.popularity).collect();
            while chosen.len() < m {
                let c = pick_weighted(&mut rng, &pop);
                if !chosen.contains(&c) {
                    chosen.push(c);
                }
            }
            let mood = if chosen.is_empty() {
                sentiment.iter().map(|s| s[hour]).sum::<f64>() / COINS.len() as f64
            } else {
                chosen.iter().map(|&c| sentiment[c][hour]).sum::<f64>() / chosen.len() as f64
            };
            let p_bull = 1.0 / (1.0 + (-(1.5 * mood + 0.2)).exp());
            let calm = if *class == "news" { 0.5 } else { 0.8 };
            let u: f64 = rng.random();
            let phrase = if u < p_bull * calm {
                BULLISH.choose(&mut rng).expect("non-empty").to_string()
            } else if u < calm {
                BEARISH.choose(&mut rng).expect("non-empty").to_string()
            } else if rng.random_bool(0.5) {
                format!(
                    "{} or {}",
                    BULLISH.choose(&mut rng).expect("non-empty"),
                    BEARISH.choose(&mut rng).expect("non-empty")
                )
            } else {
                String::new()
            };
            let mut names: Vec<String> = chosen
                .iter()
                .map(|&c| {
                    let alias = COINS[c].aliases.choose(&mut rng).expect("non-empty");
                    match rng.random_range(0..3) {
                        0 => format!("${}", alias.to_uppercase()),
                        1 => alias.to_uppercase(),
                        _ => (*alias).to_owned(),
                    }
                })
                .collect();
            if names.is_empty() {
                names.push(format!("the {}", RELEVANCE.choose(&mut rng).expect("non-empty")));
            }
            write!(text, "{} {phrase}, {}", names.join(" and "), FILLER.choose(&mut rng).expect("non-empty"))
                .expect("string write");
        }

        let engagement: f64 = engagement_dist.sample(&mut rng);
        let engagement = engagement.round();
        engagement_log.entry(a).or_default().push(engagement);
        last_seen.insert(a, at);
        let mut rec = json!({
            "id": format!("t{n:06}"),
            "author_id": author_id,
            "author_class": class,
            "created_at": format_utc(&at),
            "text": text,
        });
        if rng.random_bool(0.9) {
            rec["followers"] = json!(followers[a]);
            rec["engagement"] = json!(engagement);
        }
        if let Some(r) = retweeted {
            rec["retweeted_author_id"] = json!(r);
        }
        tweets.push_str(&rec.to_string());
        tweets.push('\n');
    }
    fs::write(dir.join("tweets.jsonl"), tweets)?;

    // profiles: some incomplete, some inactive
    let end = opts.start + Duration::hours(hours as i64 - 1);
    let mut profiles = String::new();
    for (a, (id, class)) in authors.iter().enumerate() {
        if rng.random_bool(0.03) {
            continue;
        }
        let last = if rng.random_bool(0.08) {
            end - Duration::days(rng.random_range(91..200))
        } else {
            last_seen.get(&a).copied().unwrap_or(end - Duration::days(120))
        };
        let recent: Vec<f64> = engagement_log.get(&a).map_or_else(Vec::new, |v| v.iter().rev().take(12).copied().collect());
        let relevant = *class == "news" || rng.random_bool(0.85);
        let bio = if relevant { RELEVANT_BIOS } else { OTHER_BIOS }.choose(&mut rng).expect("non-empty");
        let mut rec = json!({"id": id, "last_tweet_at": format_utc(&last), "bio": bio});
        if rng.random_bool(0.97) {
            rec["followers"] = json!(followers[a]);
        }
        if !recent.is_empty() {
            rec["recent_engagements"] = json!(recent);
        }
        profiles.push_str(&rec.to_string());
        profiles.push('\n');
    }
    fs::write(dir.join("profiles.jsonl"), profiles)?;

    let mut candidates = String::from("# accounts surfaced by keyword search\n");
    for a in (0..opts.influencers).step_by(17) {
        writeln!(candidates, "{}", authors[a].0).expect("string write");
    }
    candidates.push_str("ghost_account\n");
    fs::write(dir.join("candidates.txt"), candidates)?;

    let registry = json!({
        "coins": COINS.iter().map(|c| json!({"id": c.id, "aliases": c.aliases, "tags": c.tags})).collect::<Vec<_>>()
    });
    fs::write(dir.join("registry.json"), serde_json::to_string_pretty(&registry).expect("json") + "\n")?;

    let lexicon = format!(
        "relevance_terms = {}\nbullish_terms = {}\nbearish_terms = {}\n",
        toml_list(RELEVANCE),
        toml_list(BULLISH),
        toml_list(BEARISH)
    );
    fs::write(dir.join("lexicon.toml"), lexicon)?;

    let config = format!(
        r#"# Synthetic fixture generated with seed {seed}.
[inputs]
tweets = "tweets.jsonl"
prices = "prices.csv"
registry = "registry.json"
lexicon = "lexicon.toml"
profiles = "profiles.jsonl"
candidate_lists = ["candidates.txt"]

[classifier]
kind = "lexicon"

[signals]
population = "pooled"

[network]
edge_share = 0.01
top_k = 40
filter = {{ rule = "degree_share", theta = 0.01 }}

[econometrics]
granger_max_lag = 24
xcorr_hourly_max = 24
xcorr_daily_max = 7
bands = [0.01, 0.05, 0.1]

[run]
out = "out"
seed = {seed}
"#,
        seed = opts.seed
    );
    fs::write(dir.join("socialsig.toml"), config)?;
    Ok(())
}

fn toml_list(items: &[&str]) -> String {
    let quoted: Vec<String> = items.iter().map(|s| format!("{s:?}")).collect();
    format!("[{}]", quoted.join(", "))
}

fn pick_weighted(rng: &mut impl Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if u < *w {
            return i;
        }
        u -= w;
    }
    weights.len() - 1
}
