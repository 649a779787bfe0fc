#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use socialsig::netgraph::{Directedness, WeightedGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Writes one criterion line straight to stdout so it shows without
/// `--nocapture`.
pub fn report(name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "acceptance {status} {name}: {detail}");
    let _ = out.flush();
}

// ---- quadrature -----------------------------------------------------------

/// Tanh-sinh quadrature on `[a, b]`. The integrand receives the point and
/// its distances to both ends, so endpoint singularities keep full
/// precision.
pub fn tanh_sinh(f: impl Fn(f64, f64, f64) -> f64, a: f64, b: f64) -> f64 {
    const T_MAX: f64 = 6.5;
    let half = 0.5 * (b - a);
    let eval = |t: f64| -> f64 {
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        let near = 2.0 * half * e / (1.0 + e);
        let far = 2.0 * half / (1.0 + e);
        let w = std::f64::consts::FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        if near <= 0.0 || !w.is_finite() || w == 0.0 {
            return 0.0;
        }
        let (x, da, db) = if u < 0.0 { (a + near, near, far) } else { (b - near, far, near) };
        half * w * f(x, da, db)
    };
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut j = 1.0;
    while j <= T_MAX {
        sum += eval(j) + eval(-j);
        j += 1.0;
    }
    let mut est = sum * h;
    for level in 1..=12 {
        h /= 2.0;
        let mut t = h;
        while t <= T_MAX {
            sum += eval(t) + eval(-t);
            t += 2.0 * h;
        }
        let next = sum * h;
        if level >= 3 && (next - est).abs() <= 1e-15 * next.abs() {
            return next;
        }
        est = next;
    }
    est
}

fn beta_kernel(a: f64, b: f64, lo: f64, hi: f64) -> f64 {
    // ∫_lo^hi t^(a-1) (1-t)^(b-1) dt with lo = 0 or hi = 1 handled exactly
    tanh_sinh(
        |x, da, db| {
            let t = if lo == 0.0 { da } else { x };
            let one_minus = if hi == 1.0 { db } else { 1.0 - x };
            t.powf(a - 1.0) * one_minus.powf(b - 1.0)
        },
        lo,
        hi,
    )
}

fn beta_integral(a: f64, b: f64, lo: f64, hi: f64) -> f64 {
    // split at the mode so peaked integrands are resolved on both flanks
    let mode = if a > 1.0 && b > 1.0 { (a - 1.0) / (a + b - 2.0) } else { f64::NAN };
    if mode > lo && mode < hi {
        beta_kernel(a, b, lo, mode) + tanh_sinh(
            |x, _, db| {
                let one_minus = if hi == 1.0 { db } else { 1.0 - x };
                x.powf(a - 1.0) * one_minus.powf(b - 1.0)
            },
            mode,
            hi,
        )
    } else {
        beta_kernel(a, b, lo, hi)
    }
}

/// Upper tail of F(d1, d2) at `f`, by quadrature of the beta density:
/// `P(F > f) = I_z(d2/2, d1/2)` with `z = d2 / (d2 + d1 f)`.
pub fn f_tail_oracle(f: f64, d1: usize, d2: usize) -> f64 {
    if f <= 0.0 {
        return 1.0;
    }
    let (a, b) = (d2 as f64 / 2.0, d1 as f64 / 2.0);
    let z = d2 as f64 / (d2 as f64 + d1 as f64 * f);
    let whole = beta_integral(a, b, 0.0, 1.0);
    if z > 0.5 {
        // integrate the smaller piece for precision
        1.0 - upper_piece(a, b, z) / whole
    } else {
        beta_integral(a, b, 0.0, z) / whole
    }
}

fn upper_piece(a: f64, b: f64, z: f64) -> f64 {
    // ∫_z^1 by the substitution s = 1 - t onto [0, 1 - z]
    let w = 1.0 - z;
    let mode = if a > 1.0 && b > 1.0 { (b - 1.0) / (a + b - 2.0) } else { f64::NAN };
    let kernel = |lo: f64, hi: f64| {
        tanh_sinh(
            |x, da, _| {
                let s = if lo == 0.0 { da } else { x };
                s.powf(b - 1.0) * (1.0 - s).powf(a - 1.0)
            },
            lo,
            hi,
        )
    };
    if mode > 0.0 && mode < w {
        kernel(0.0, mode) + kernel(mode, w)
    } else {
        kernel(0.0, w)
    }
}

/// Two-sided Student-t tail `P(|T| > |t|)` by quadrature of the density.
pub fn t_two_sided_oracle(t: f64, dof: usize) -> f64 {
    // P(|T| > t) = I_{v/(v+t^2)}(v/2, 1/2)
    let v = dof as f64;
    let z = v / (v + t * t);
    let (a, b) = (v / 2.0, 0.5);
    let whole = beta_integral(a, b, 0.0, 1.0);
    if z > 0.5 {
        1.0 - upper_piece(a, b, z) / whole
    } else {
        beta_integral(a, b, 0.0, z) / whole
    }
}

// ---- direct statistics ----------------------------------------------------

/// Textbook lagged correlation: x_{i+k} against y_i, overlap means.
pub fn brute_xcorr(x: &[f64], y: &[f64], k: usize) -> f64 {
    let n = x.len() - k;
    let xs: Vec<f64> = (0..n).map(|i| x[i + k]).collect();
    let ys: Vec<f64> = (0..n).map(|i| y[i]).collect();
    brute_pearson(&xs, &ys)
}

pub fn brute_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for i in 0..x.len() {
        num += (x[i] - mx) * (y[i] - my);
        vx += (x[i] - mx).powi(2);
        vy += (y[i] - my).powi(2);
    }
    num / (vx.sqrt() * vy.sqrt())
}

/// Kolmogorov-Smirnov distance of a sample from U[0, 1].
pub fn ks_uniform(mut p: Vec<f64>) -> f64 {
    p.sort_by(f64::total_cmp);
    let n = p.len() as f64;
    p.iter()
        .enumerate()
        .map(|(i, &v)| ((i as f64 + 1.0) / n - v).max(v - i as f64 / n))
        .fold(0.0, f64::max)
}

// ---- graphs ---------------------------------------------------------------

/// Seeded random graph with integer weights in `1..=max_w`.
pub fn random_graph(seed: u64, n: usize, p: f64, directed: bool, max_w: u32) -> WeightedGraph {
    let mut r = rng(seed);
    let d = if directed { Directedness::Directed } else { Directedness::Undirected };
    let mut g = WeightedGraph::new(d);
    let names: Vec<String> = (0..n).map(|i| format!("n{i:02}")).collect();
    for name in &names {
        g.add_node(name);
    }
    for i in 0..n {
        for j in 0..n {
            if i == j || (!directed && j < i) {
                continue;
            }
            if r.random_bool(p) {
                let w = r.random_range(1..=max_w) as f64;
                g.add_edge(&names[i], &names[j], w).unwrap();
            }
        }
    }
    g
}

fn out_lists(g: &WeightedGraph, binary: bool) -> (Vec<String>, Vec<Vec<(usize, f64)>>) {
    let names: Vec<String> = g.nodes().map(str::to_owned).collect();
    let pos: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut out = vec![Vec::new(); names.len()];
    for (u, v, w) in g.edges() {
        let w = if binary { 1.0 } else { w };
        out[pos[u]].push((pos[v], w));
        if !g.is_directed() {
            out[pos[v]].push((pos[u], w));
        }
    }
    (names, out)
}

/// Dense power iteration with uniform teleport and uniform dangling mass.
pub fn dense_pagerank(g: &WeightedGraph, damping: f64) -> BTreeMap<String, f64> {
    let (names, out) = out_lists(g, false);
    let n = names.len();
    let mut m = vec![vec![0.0; n]; n];
    let mut dangling = vec![true; n];
    for (i, row) in out.iter().enumerate() {
        let total: f64 = row.iter().map(|e| e.1).sum();
        if total > 0.0 {
            dangling[i] = false;
            for &(j, w) in row {
                m[j][i] += w / total;
            }
        }
    }
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..100_000 {
        let dmass: f64 = (0..n).filter(|&i| dangling[i]).map(|i| x[i]).sum();
        let next: Vec<f64> = (0..n)
            .map(|j| {
                let inflow: f64 = (0..n).map(|i| m[j][i] * x[i]).sum();
                (1.0 - damping) / n as f64 + damping * (inflow + dmass / n as f64)
            })
            .collect();
        let diff: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if diff < 1e-15 {
            break;
        }
    }
    names.into_iter().zip(x).collect()
}

/// Betweenness by enumerating every simple path. Shortest means fewest
/// hops; each path counts with the product of its edge weights.
pub fn enumerate_betweenness(g: &WeightedGraph, binary: bool) -> BTreeMap<String, f64> {
    let (names, out) = out_lists(g, binary);
    let n = names.len();
    let mut bc = vec![0.0; n];
    for s in 0..n {
        // all simple paths from s
        let mut paths: Vec<(Vec<usize>, f64)> = Vec::new();
        let mut stack = vec![(vec![s], 1.0)];
        while let Some((path, mult)) = stack.pop() {
            let last = *path.last().unwrap();
            for &(v, w) in &out[last] {
                if !path.contains(&v) {
                    let mut p = path.clone();
                    p.push(v);
                    paths.push((p.clone(), mult * w));
                    stack.push((p, mult * w));
                }
            }
        }
        for t in 0..n {
            if t == s {
                continue;
            }
            let to_t: Vec<&(Vec<usize>, f64)> = paths.iter().filter(|(p, _)| *p.last().unwrap() == t).collect();
            let Some(min_len) = to_t.iter().map(|(p, _)| p.len()).min() else { continue };
            let shortest: Vec<_> = to_t.into_iter().filter(|(p, _)| p.len() == min_len).collect();
            let sigma: f64 = shortest.iter().map(|(_, m)| m).sum();
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let through: f64 = shortest.iter().filter(|(p, _)| p.contains(&v)).map(|(_, m)| m).sum();
                bc[v] += through / sigma;
            }
        }
    }
    if !g.is_directed() {
        for b in &mut bc {
            *b /= 2.0;
        }
    }
    names.into_iter().zip(bc).collect()
}

/// Closeness from BFS hop distances: reachable / Σ distance, 0 if isolated.
pub fn bfs_closeness(g: &WeightedGraph) -> BTreeMap<String, f64> {
    let (names, out) = out_lists(g, true);
    let n = names.len();
    let mut res = BTreeMap::new();
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &out[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let reach: Vec<usize> = dist.iter().copied().filter(|&d| d != usize::MAX && d > 0).collect();
        let c = if reach.is_empty() { 0.0 } else { reach.len() as f64 / reach.iter().sum::<usize>() as f64 };
        res.insert(names[s].clone(), c);
    }
    res
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

pub fn sets_nested(small: &BTreeSet<String>, big: &BTreeSet<String>) -> bool {
    small.is_subset(big)
}

// ---- pipeline -------------------------------------------------------------

pub fn fixture_config(out: &Path) -> socialsig::pipeline::PipelineConfig {
    let mut cfg = socialsig::pipeline::PipelineConfig::load(&fixture_dir().join("socialsig.toml")).unwrap();
    let o = socialsig::pipeline::Overrides { out: Some(out.to_path_buf()), ..Default::default() };
    cfg.apply(&o).unwrap();
    cfg
}

pub fn manifest_json(m: &socialsig::pipeline::RunManifest) -> String {
    let mut s = serde_json::to_string_pretty(&m.without_timing()).unwrap();
    s.push('\n');
    s
}

/// Files under `dir` with their bytes; the manifest is replaced by its
/// timing-free form.
pub fn output_files(dir: &Path, manifest: &socialsig::pipeline::RunManifest) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let entry = entry.unwrap();
        let name = entry.file_name().to_string_lossy().into_owned();
        if name == socialsig::pipeline::MANIFEST_FILE {
            files.insert(name, manifest_json(manifest).into_bytes());
        } else {
            files.insert(name, std::fs::read(entry.path()).unwrap());
        }
    }
    files
}

/// Compares outputs with the checked-in goldens and lists every
/// difference. With `SOCIALSIG_BLESS=1` the goldens are rewritten instead.
pub fn golden_diff(files: &BTreeMap<String, Vec<u8>>) -> Vec<String> {
    let dir = golden_dir();
    if std::env::var("SOCIALSIG_BLESS").as_deref() == Ok("1") {
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        for (name, bytes) in files {
            std::fs::write(dir.join(name), bytes).unwrap();
        }
        return Vec::new();
    }
    let mut problems = Vec::new();
    let mut golden = BTreeMap::new();
    match std::fs::read_dir(&dir) {
        Ok(rd) => {
            for entry in rd {
                let entry = entry.unwrap();
                golden.insert(entry.file_name().to_string_lossy().into_owned(), std::fs::read(entry.path()).unwrap());
            }
        }
        Err(e) => problems.push(format!("golden directory {}: {e}", dir.display())),
    }
    for name in golden.keys().chain(files.keys()).collect::<BTreeSet<_>>() {
        match (golden.get(name), files.get(name)) {
            (Some(a), Some(b)) if a == b => {}
            (Some(_), Some(_)) => problems.push(format!("{name}: content differs")),
            (Some(_), None) => problems.push(format!("{name}: not produced")),
            (None, Some(_)) => problems.push(format!("{name}: no golden")),
            (None, None) => unreachable!(),
        }
    }
    problems
}

// ---- mock classifier service ----------------------------------------------

pub struct MockService {
    pub endpoint: String,
    pub hits: std::sync::Arc<std::sync::atomic::AtomicUsize>,
}

fn read_request(stream: &mut std::net::TcpStream) -> Option<Vec<u8>> {
    use std::io::Read;
    let mut buf = Vec::new();
    let mut chunk = [0u8; 4096];
    let header_end = loop {
        let n = stream.read(&mut chunk).ok()?;
        if n == 0 {
            return None;
        }
        buf.extend_from_slice(&chunk[..n]);
        if let Some(p) = buf.windows(4).position(|w| w == b"\r\n\r\n") {
            break p + 4;
        }
    };
    let head = String::from_utf8_lossy(&buf[..header_end]).to_ascii_lowercase();
    let mut body = buf[header_end..].to_vec();
    if let Some(len) = head.lines().find_map(|l| l.strip_prefix("content-length:")).map(|v| v.trim().parse::<usize>().unwrap()) {
        while body.len() < len {
            let n = stream.read(&mut chunk).ok()?;
            if n == 0 {
                return None;
            }
            body.extend_from_slice(&chunk[..n]);
        }
        body.truncate(len);
        return Some(body);
    }
    // chunked transfer encoding
    loop {
        if let Some(decoded) = dechunk(&body) {
            return Some(decoded);
        }
        let n = stream.read(&mut chunk).ok()?;
        if n == 0 {
            return None;
        }
        body.extend_from_slice(&chunk[..n]);
    }
}

fn dechunk(raw: &[u8]) -> Option<Vec<u8>> {
    let mut out = Vec::new();
    let mut i = 0;
    loop {
        let line_end = raw[i..].windows(2).position(|w| w == b"\r\n")? + i;
        let size = usize::from_str_radix(std::str::from_utf8(&raw[i..line_end]).ok()?.trim(), 16).ok()?;
        let start = line_end + 2;
        if size == 0 {
            return Some(out);
        }
        if raw.len() < start + size + 2 {
            return None;
        }
        out.extend_from_slice(&raw[start..start + size]);
        i = start + size + 2;
    }
}

/// Serves classifier requests on a local port. `reply` maps the request
/// texts to an HTTP status and JSON body.
pub fn mock_service<F>(reply: F) -> MockService
where
    F: Fn(usize, Vec<String>) -> (u16, String) + Send + 'static,
{
    use std::io::Write;
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let hits = std::sync::Arc::new(std::sync::atomic::AtomicUsize::new(0));
    let counter = hits.clone();
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            let Some(body) = read_request(&mut stream) else { continue };
            let n = counter.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
            let texts: Vec<String> = serde_json::from_slice::<serde_json::Value>(&body)
                .ok()
                .and_then(|v| serde_json::from_value(v["texts"].clone()).ok())
                .unwrap_or_default();
            let (status, json) = reply(n, texts);
            let msg = format!(
                "HTTP/1.1 {status} X\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{json}",
                json.len()
            );
            let _ = stream.write_all(msg.as_bytes());
        }
    });
    MockService { endpoint: format!("http://{addr}/classify"), hits }
}

/// Keyword labels standing in for a language-model classifier.
pub fn keyword_verdicts(texts: &[String]) -> String {
    let verdicts: Vec<serde_json::Value> = texts
        .iter()
        .map(|t| {
            let t = t.to_lowercase();
            if t.contains("moon") || t.contains("buy") || t.contains("bullish") {
                serde_json::json!({"relevant": true, "label": "bullish"})
            } else if t.contains("sell") || t.contains("bearish") || t.contains("dump") {
                serde_json::json!({"relevant": true, "label": "bearish"})
            } else if t.contains("crypto") || t.contains("market") {
                serde_json::json!({"relevant": true, "label": "neutral"})
            } else {
                serde_json::json!({"relevant": false})
            }
        })
        .collect();
    serde_json::json!({ "verdicts": verdicts }).to_string()
}
