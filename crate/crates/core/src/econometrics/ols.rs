//! Least squares through Householder QR.

use super::EconError;

/// Dense row-major design matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Design {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Design { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, EconError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(EconError::Input("design rows have unequal lengths".into()));
        }
        Ok(Design { rows: rows.len(), cols, data: rows.concat() })
    }

    /// Builds a design with an intercept column followed by the given columns.
    pub fn with_intercept(columns: &[&[f64]]) -> Result<Self, EconError> {
        let rows = columns.first().map_or(0, |c| c.len());
        if columns.iter().any(|c| c.len() != rows) {
            return Err(EconError::Input("regressor columns have unequal lengths".into()));
        }
        let mut d = Design::zeros(rows, columns.len() + 1);
        for r in 0..rows {
            d.set(r, 0, 1.0);
            for (j, col) in columns.iter().enumerate() {
                d.set(r, j + 1, col[r]);
            }
        }
        Ok(d)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub coefficients: Vec<f64>,
    pub residuals: Vec<f64>,
    pub ssr: f64,
    /// Inverse of the upper-triangular QR factor, row-major `p × p`.
    r_inv: Vec<f64>,
}

impl OlsFit {
    pub fn n_obs(&self) -> usize {
        self.residuals.len()
    }

    pub fn n_params(&self) -> usize {
        self.coefficients.len()
    }

    pub fn dof(&self) -> usize {
        self.n_obs() - self.n_params()
    }

    /// Residual variance estimate `ssr / (n - p)`.
    pub fn sigma2(&self) -> f64 {
        self.ssr / self.dof() as f64
    }

    /// Classical standard errors, `sqrt(sigma2 * [(X'X)^-1]_jj)`.
    pub fn std_errors(&self) -> Vec<f64> {
        let p = self.n_params();
        let s2 = self.sigma2();
        // (X'X)^-1 = R^-1 R^-T, so its diagonal holds the squared row norms of R^-1
        (0..p)
            .map(|j| {
                let row = &self.r_inv[j * p..(j + 1) * p];
                (s2 * row.iter().map(|v| v * v).sum::<f64>()).sqrt()
            })
            .collect()
    }
}

/// Relative size below which a diagonal element of R marks its column as a
/// linear combination of the preceding columns.
const RANK_TOL: f64 = 1e-10;

/// Fits `response ≈ design · β` by least squares.
pub fn ols_fit(response: &[f64], design: &Design) -> Result<OlsFit, EconError> {
    let (n, p) = (design.rows(), design.cols());
    if response.len() != n {
        return Err(EconError::Input(format!("response has {} rows, design has {n}", response.len())));
    }
    if p == 0 || n <= p {
        return Err(EconError::Input(format!("least squares needs more rows than columns, got {n}×{p}")));
    }
    if response.iter().chain(design.data.iter()).any(|v| !v.is_finite()) {
        return Err(EconError::Input("non-finite value in regression input".into()));
    }

    // Column-major working copy; Householder vectors overwrite the lower part.
    let mut a: Vec<Vec<f64>> = (0..p).map(|c| design.column(c)).collect();
    let col_norms: Vec<f64> = a.iter().map(|c| norm(c)).collect();
    let mut qty = response.to_vec();
    let mut diag = vec![0.0; p];

    for k in 0..p {
        let alpha = norm(&a[k][k..]);
        let scale = col_norms[k].max(f64::MIN_POSITIVE);
        if alpha <= RANK_TOL * scale {
            return Err(EconError::Collinear { column: k });
        }
        let sign = if a[k][k] >= 0.0 { 1.0 } else { -1.0 };
        let r_kk = -sign * alpha;
        // v = x - r_kk e1, stored in a[k][k..]
        a[k][k] -= r_kk;
        let vnorm2: f64 = a[k][k..].iter().map(|v| v * v).sum();
        diag[k] = r_kk;
        if vnorm2 == 0.0 {
            continue;
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let v = &head[k][k..];
        for col in tail.iter_mut() {
            reflect(v, vnorm2, &mut col[k..]);
        }
        reflect(v, vnorm2, &mut qty[k..]);
    }

    // R is diag on the diagonal and a[j][i] (i < j) above it.
    let r = |i: usize, j: usize| if i == j { diag[i] } else { a[j][i] };
    let mut beta = vec![0.0; p];
    for i in (0..p).rev() {
        let mut s = qty[i];
        for j in i + 1..p {
            s -= r(i, j) * beta[j];
        }
        beta[i] = s / r(i, i);
    }

    let mut r_inv = vec![0.0; p * p];
    for j in 0..p {
        r_inv[j * p + j] = 1.0 / r(j, j);
        for i in (0..j).rev() {
            let mut s = 0.0;
            for m in i + 1..=j {
                s += r(i, m) * r_inv[m * p + j];
            }
            r_inv[i * p + j] = -s / r(i, i);
        }
    }

    let residuals: Vec<f64> = (0..n)
        .map(|row| response[row] - (0..p).map(|c| design.get(row, c) * beta[c]).sum::<f64>())
        .collect();
    let ssr = residuals.iter().map(|e| e * e).sum();
    Ok(OlsFit { coefficients: beta, residuals, ssr, r_inv })
}

fn norm(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * v.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

/// Applies `I - 2 v v' / (v'v)` to `x` in place.
fn reflect(v: &[f64], vnorm2: f64, x: &mut [f64]) {
    let dot: f64 = v.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
    let f = 2.0 * dot / vnorm2;
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= f * vi;
    }
}
