//! Gamma and incomplete beta functions, and the F and t tail probabilities
//! built on them.

use super::EconError;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Continued fraction for the incomplete beta (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=20_000 {
        let m = f64::from(m);
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)` for `a, b > 0`, `0 <= x <= 1`.
pub fn inc_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = a * x.ln() + b * (1.0 - x).ln() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_cf(a, b, x) / a
    } else {
        1.0 - ln_front.exp() * beta_cf(b, a, 1.0 - x) / b
    }
}

/// Upper-tail probability `P(F > f)` for an F(d1, d2) variate.
pub fn f_pvalue(f: f64, d1: usize, d2: usize) -> Result<f64, EconError> {
    if d1 == 0 || d2 == 0 {
        return Err(EconError::Input(format!("F degrees of freedom must be >= 1, got ({d1}, {d2})")));
    }
    if f.is_nan() || f < 0.0 {
        return Err(EconError::Input(format!("F statistic must be >= 0, got {f}")));
    }
    if f == 0.0 {
        return Ok(1.0);
    }
    if f.is_infinite() {
        return Ok(0.0);
    }
    let (d1, d2) = (d1 as f64, d2 as f64);
    // P(F > f) = I_{d2/(d2 + d1 f)}(d2/2, d1/2); the complementary form keeps
    // precision when x is close to 1
    let x = d2 / (d2 + d1 * f);
    let p = if x > 0.5 {
        1.0 - inc_beta(d1 / 2.0, d2 / 2.0, d1 * f / (d2 + d1 * f))
    } else {
        inc_beta(d2 / 2.0, d1 / 2.0, x)
    };
    Ok(p.clamp(0.0, 1.0))
}

/// Two-sided p-value of a Student t statistic with `dof` degrees of freedom.
pub fn t_two_sided_pvalue(t: f64, dof: usize) -> Result<f64, EconError> {
    if dof == 0 {
        return Err(EconError::Input("t distribution needs dof >= 1".into()));
    }
    if t.is_nan() {
        return Err(EconError::Input("t statistic is NaN".into()));
    }
    if t.is_infinite() {
        return Ok(0.0);
    }
    let v = dof as f64;
    Ok(inc_beta(v / 2.0, 0.5, v / (v + t * t)).clamp(0.0, 1.0))
}

/// Two-sided p-value of a Pearson correlation `r` over `n` pairs, via
/// `t = r sqrt((n-2)/(1-r^2))`.
pub fn pearson_pvalue(r: f64, n: usize) -> Result<f64, EconError> {
    if n < 3 {
        return Err(EconError::Input(format!("correlation p-value needs n >= 3, got {n}")));
    }
    if r.abs() >= 1.0 {
        return Ok(0.0);
    }
    let t = r * ((n as f64 - 2.0) / (1.0 - r * r)).sqrt();
    t_two_sided_pvalue(t, n - 2)
}
