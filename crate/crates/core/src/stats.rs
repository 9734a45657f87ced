//! Pearson correlation with significance, Fisher-Z confidence intervals, and
//! multi-run ensemble summaries.
//!
//! The two-sided p-value for a correlation uses the exact-under-normality
//! Student-t test with n-2 degrees of freedom. The t CDF is evaluated
//! through the regularized incomplete beta function (continued fraction);
//! tests cross-check it against an independent series expansion. The Fisher
//! transform uses the natural logarithm (atanh), the only reading consistent
//! with the tanh back-transform; the 95% level uses the conventional factor
//! 1.96 exactly.

#![allow(clippy::excessive_precision)] // frozen oracle constants keep their full digits

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Correlation of one series pair with significance and CI.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub r: f64,
    pub n: usize,
    pub t_stat: f64,
    pub p_value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub ci_level: f64,
}

/// Summary of an ensemble of per-run correlations.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub run_count: usize,
    pub mean_r: f64,
    pub sd_r: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_p: f64,
    pub t_stat_vs_zero: f64,
    pub p_of_t: f64,
}

const SERIES_VARIANCE_FLOOR: f64 = 1e-30;

/// Pearson r with t-statistic, two-sided p, and 95% Fisher CI.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<CorrelationReport> {
    pearson_with_level(x, y, 0.95)
}

/// Pearson r with a configurable CI level.
pub fn pearson_with_level(x: &[f64], y: &[f64], level: f64) -> Result<CorrelationReport> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 4 {
        return Err(Error::InvalidInput(format!("need n >= 4 samples, got {n}")));
    }
    let nf = n as f64;
    let xm = x.iter().sum::<f64>() / nf;
    let ym = y.iter().sum::<f64>() / nf;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y.iter()) {
        sxy += (a - xm) * (b - ym);
        sxx += (a - xm) * (a - xm);
        syy += (b - ym) * (b - ym);
    }
    if sxx <= SERIES_VARIANCE_FLOOR || syy <= SERIES_VARIANCE_FLOOR {
        return Err(Error::DegenerateSeries);
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);

    let dof = (n - 2) as f64;
    if 1.0 - r * r <= f64::EPSILON {
        // perfectly correlated input: infinite t, zero p, point interval
        return Ok(CorrelationReport {
            r,
            n,
            t_stat: if r > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY },
            p_value: 0.0,
            ci_low: r,
            ci_high: r,
            ci_level: level,
        });
    }
    let t_stat = r * (dof / (1.0 - r * r)).sqrt();
    let p_value = two_sided_t_p(t_stat, dof);
    let (ci_low, ci_high) = fisher_ci(r, n, level)?;
    Ok(CorrelationReport {
        r,
        n,
        t_stat,
        p_value,
        ci_low,
        ci_high,
        ci_level: level,
    })
}

/// Fisher-Z confidence interval for one correlation: Z = atanh(r),
/// SE = 1/sqrt(n-3), bounds tanh(Z ± z* SE).
pub fn fisher_ci(r: f64, n: usize, level: f64) -> Result<(f64, f64)> {
    if r.abs() >= 1.0 {
        return Err(Error::DegenerateR(r));
    }
    if n < 4 {
        return Err(Error::InvalidInput(format!("need n >= 4 samples, got {n}")));
    }
    if !(0.0 < level && level < 1.0) {
        return Err(Error::InvalidInput(format!("level {level} outside (0, 1)")));
    }
    let z = r.atanh();
    let se = 1.0 / ((n - 3) as f64).sqrt();
    let zstar = critical_z(level);
    Ok(((z - zstar * se).tanh(), (z + zstar * se).tanh()))
}

/// The conventional 1.96 at 95%, the normal quantile otherwise.
fn critical_z(level: f64) -> f64 {
    if (level - 0.95).abs() < 1e-12 {
        1.96
    } else {
        standard_normal_quantile(0.5 + level / 2.0)
    }
}

/// Ensemble statistics over per-run correlations.
///
/// The interval for the mean correlation is built in Fisher-Z space with the
/// Student-t critical value (m-1 dof) and transformed back; per-run p-values
/// are recomputed from `per_run_n`. The zero-mean test is the plain t
/// statistic on the raw r values.
pub fn ensemble_summary(
    r_values: &[f64],
    per_run_n: usize,
    level: f64,
) -> Result<EnsembleReport> {
    let m = r_values.len();
    if m < 2 {
        return Err(Error::TooFewRuns(m));
    }
    if per_run_n < 4 {
        return Err(Error::InvalidInput(format!(
            "per_run_n must be >= 4, got {per_run_n}"
        )));
    }
    for &r in r_values {
        if r.abs() >= 1.0 {
            return Err(Error::DegenerateR(r));
        }
    }
    let mf = m as f64;
    let mean_r = r_values.iter().sum::<f64>() / mf;
    let var_r = r_values.iter().map(|r| (r - mean_r) * (r - mean_r)).sum::<f64>() / (mf - 1.0);
    let sd_r = var_r.sqrt();

    let dof_run = (per_run_n - 2) as f64;
    let mean_p = r_values
        .iter()
        .map(|&r| {
            let t = r * (dof_run / (1.0 - r * r)).sqrt();
            two_sided_t_p(t, dof_run)
        })
        .sum::<f64>()
        / mf;

    let zs: Vec<f64> = r_values.iter().map(|r| r.atanh()).collect();
    let zm = zs.iter().sum::<f64>() / mf;
    let sd_z =
        (zs.iter().map(|z| (z - zm) * (z - zm)).sum::<f64>() / (mf - 1.0)).sqrt();
    let tstar = student_t_quantile(0.5 + level / 2.0, mf - 1.0);
    let ci_low = (zm - tstar * sd_z / mf.sqrt()).tanh();
    let ci_high = (zm + tstar * sd_z / mf.sqrt()).tanh();

    let (t_stat_vs_zero, p_of_t) = if sd_r == 0.0 {
        let t = if mean_r > 0.0 {
            f64::INFINITY
        } else if mean_r < 0.0 {
            f64::NEG_INFINITY
        } else {
            0.0
        };
        (t, if mean_r == 0.0 { 1.0 } else { 0.0 })
    } else {
        let t = mean_r / (sd_r / mf.sqrt());
        (t, two_sided_t_p(t, mf - 1.0))
    };

    Ok(EnsembleReport {
        run_count: m,
        mean_r,
        sd_r,
        ci_low,
        ci_high,
        mean_p,
        t_stat_vs_zero,
        p_of_t,
    })
}

/// P(T ≤ t) for Student's t with `dof` degrees of freedom.
pub fn student_t_cdf(t: f64, dof: f64) -> f64 {
    if t == 0.0 {
        return 0.5;
    }
    let x = dof / (dof + t * t);
    let tail = 0.5 * regularized_incomplete_beta(0.5 * dof, 0.5, x);
    if t < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

/// Two-sided p-value for a t statistic: I_{ν/(ν+t²)}(ν/2, 1/2).
fn two_sided_t_p(t: f64, dof: f64) -> f64 {
    if !t.is_finite() {
        return 0.0;
    }
    let x = dof / (dof + t * t);
    regularized_incomplete_beta(0.5 * dof, 0.5, x).clamp(0.0, 1.0)
}

/// Student-t quantile by bisection on the CDF (monotone, cheap).
pub fn student_t_quantile(p: f64, dof: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "p outside (0, 1)");
    if p < 0.5 {
        return -student_t_quantile(1.0 - p, dof);
    }
    if p == 0.5 {
        return 0.0;
    }
    let mut hi = 1.0;
    while student_t_cdf(hi, dof) < p && hi < 1e12 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if student_t_cdf(mid, dof) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * hi.max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Inverse standard normal CDF (Acklam's rational approximation,
/// |relative error| < 1.2e-9).
pub fn standard_normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "p outside (0, 1)");
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    let p_low = 0.02425;
    if p < p_low {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - p_low {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -standard_normal_quantile(1.0 - p)
    }
}

/// ln Γ(x) for x > 0 (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEFFS[0];
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 1e-16;
    const TINY: f64 = 1e-300;

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
    for m in 1..=MAX_ITER {
        let mf = m as f64;
        let m2 = 2.0 * mf;
        // even step
        let aa = mf * (b - mf) * x / ((qam + m2) * (a + m2));
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
        // odd step
        let aa = -(a + mf) * (qab + mf) * x / ((a + m2) * (qap + m2));
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_anticorrelation() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [4.0, 3.0, 2.0, 1.0];
        let rep = pearson(&x, &y).unwrap();
        assert_eq!(rep.r, -1.0);
        assert_eq!(rep.p_value, 0.0);
        assert_eq!(rep.ci_low, -1.0);
        assert_eq!(rep.ci_high, -1.0);
    }

    #[test]
    fn self_correlation() {
        let x = [0.3, 1.7, 2.2, 5.9, 6.1];
        let rep = pearson(&x, &x).unwrap();
        assert_eq!(rep.r, 1.0);
        assert_eq!(rep.p_value, 0.0);
    }

    #[test]
    fn ten_point_fixture_matches_oracle() {
        // frozen from an arbitrary-precision evaluation of the definition
        let x = [1.2, 2.3, 3.1, 4.8, 5.0, 6.7, 7.4, 8.1, 9.9, 10.5];
        let y = [2.1, 2.9, 4.2, 4.4, 6.1, 6.0, 7.9, 8.3, 9.1, 11.2];
        let rep = pearson(&x, &y).unwrap();
        assert!((rep.r - 0.97553630169987063).abs() < 1e-12, "r {}", rep.r);
        assert!((rep.t_stat - 12.551188878755330).abs() < 1e-10);
        assert!((rep.p_value - 1.5214570011053453e-6).abs() < 1e-16);
        assert!((rep.ci_low - 0.89665597544880969).abs() < 1e-12);
        assert!((rep.ci_high - 0.99438710592773379).abs() < 1e-12);
    }

    #[test]
    fn error_paths() {
        assert!(matches!(
            pearson(&[1.0, 2.0, 3.0, 4.0], &[1.0, 2.0, 3.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            pearson(&[1.0; 5], &[1.0, 2.0, 3.0, 4.0, 5.0]),
            Err(Error::DegenerateSeries)
        ));
        assert!(matches!(fisher_ci(1.0, 10, 0.95), Err(Error::DegenerateR(_))));
    }

    #[test]
    fn fisher_fixture_matches_oracle() {
        // frozen from an arbitrary-precision atanh/tanh evaluation
        let (lo, hi) = fisher_ci(-0.9309, 119, 0.95).unwrap();
        assert!((lo - (-0.95146969581691353)).abs() < 1e-12, "lo {lo}");
        assert!((hi - (-0.90204939584214259)).abs() < 1e-12, "hi {hi}");
    }

    #[test]
    fn fisher_zero_r_is_symmetric() {
        let (lo, hi) = fisher_ci(0.0, 50, 0.95).unwrap();
        assert!((lo + hi).abs() < 1e-15);
        assert!((hi - 0.27835256489656864).abs() < 1e-12);
    }

    #[test]
    fn fisher_width_shrinks_with_n() {
        let mut prev = f64::INFINITY;
        for n in [5usize, 10, 30, 100, 1000] {
            let (lo, hi) = fisher_ci(0.4, n, 0.95).unwrap();
            let w = hi - lo;
            assert!(w < prev);
            prev = w;
        }
    }

    #[test]
    fn fisher_round_trip() {
        let mut r = -0.999999f64;
        while r <= 0.999999 {
            assert!((r.atanh().tanh() - r).abs() < 1e-14);
            r += 0.0730017;
        }
    }

    /// Series oracle for I_x(a, b): hypergeometric expansion
    /// I_x(a,b) = x^a (1-x)^b / (a B(a,b)) · Σ_n [(a+b)_n / (a+1)_n] x^n,
    /// summed directly. Independent of the continued-fraction route.
    fn incomplete_beta_series(a: f64, b: f64, x: f64) -> f64 {
        let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
        let front = ln_front.exp() / a;
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 0..200_000 {
            let nf = n as f64;
            term *= (a + b + nf) / (a + 1.0 + nf) * x;
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        front * sum
    }

    fn t_cdf_series(t: f64, dof: f64) -> f64 {
        if t == 0.0 {
            return 0.5;
        }
        let x = dof / (dof + t * t);
        let tail = 0.5 * incomplete_beta_series(0.5 * dof, 0.5, x);
        if t < 0.0 {
            tail
        } else {
            1.0 - tail
        }
    }

    #[test]
    fn t_cdf_reference_points() {
        // frozen from an arbitrary-precision incomplete-beta evaluation
        let cases: [(f64, f64, f64); 20] = [
            (0.0, 1.0, 0.5),
            (1.0, 1.0, 0.75),
            (-1.0, 1.0, 0.25),
            (2.5, 1.0, 0.878881058409156601),
            (1.0, 2.0, 0.788675134594812882),
            (-2.0, 2.0, 0.0917517095361369836),
            (0.5, 3.0, 0.674276017575924503),
            (3.0, 3.0, 0.971165557188781346),
            (-0.7, 4.0, 0.261250082796725107),
            (1.5, 5.0, 0.903048159878763284),
            (-2.8, 6.0, 0.0155819740319043813),
            (0.25, 7.0, 0.59511720707607409),
            (4.0, 8.0, 0.998025113598277337),
            (-1.2, 10.0, 0.128898150362152845),
            (2.0, 17.0, 0.969130696734940418),
            (-3.5, 19.0, 0.00119767334484140566),
            (0.8, 30.0, 0.784999795107896154),
            (-0.3, 60.0, 0.382607037606729772),
            (5.2, 117.0, 0.999999571296702427),
            (-6.0, 119.0, 1.09241951888046336e-8),
        ];
        for &(t, dof, want) in &cases {
            let got = student_t_cdf(t, dof);
            assert!((got - want).abs() < 1e-10, "cdf({t}, {dof}) = {got}, want {want}");
            let series = t_cdf_series(t, dof);
            assert!(
                (got - series).abs() < 1e-10,
                "continued fraction {got} vs series {series} at ({t}, {dof})"
            );
        }
    }

    #[test]
    fn t_quantile_matches_oracle() {
        // t*_{19}(0.975), frozen from an arbitrary-precision root solve
        let t = student_t_quantile(0.975, 19.0);
        assert!((t - 2.0930240544083098).abs() < 1e-9, "{t}");
        assert_eq!(student_t_quantile(0.5, 7.0), 0.0);
        assert!((student_t_quantile(0.025, 19.0) + 2.0930240544083098).abs() < 1e-9);
    }

    #[test]
    fn normal_quantile_accuracy() {
        assert!((standard_normal_quantile(0.975) - 1.959963984540054).abs() < 1e-8);
        assert!((standard_normal_quantile(0.5) - 0.0).abs() < 1e-9);
        assert!((standard_normal_quantile(0.005) + 2.5758293035489004).abs() < 1e-7);
    }

    #[test]
    fn ensemble_degenerate() {
        let rs = [-0.9; 20];
        let rep = ensemble_summary(&rs, 119, 0.95).unwrap();
        assert_eq!(rep.mean_r, -0.9);
        assert_eq!(rep.sd_r, 0.0);
        assert!((rep.ci_low - (-0.9)).abs() < 1e-14);
        assert!((rep.ci_high - (-0.9)).abs() < 1e-14);
        assert_eq!(rep.p_of_t, 0.0);
    }

    #[test]
    fn ensemble_fixture_matches_oracle() {
        // frozen from an arbitrary-precision spreadsheet-style evaluation
        let rs = [
            -0.9471, -0.9012, -0.8634, -0.9388, -0.8855, -0.9160, -0.8723, -0.9302, -0.8941,
            -0.9099, -0.8550, -0.9240, -0.9015, -0.8877, -0.9355, -0.8690, -0.9120, -0.8980,
            -0.9205, -0.8810,
        ];
        let rep = ensemble_summary(&rs, 119, 0.95).unwrap();
        assert_eq!(rep.run_count, 20);
        assert!((rep.mean_r - (-0.902135)).abs() < 1e-12);
        assert!((rep.sd_r - 0.026315020225598996).abs() < 1e-12);
        assert!((rep.ci_low - (-0.91721699941329879)).abs() < 1e-10);
        assert!((rep.ci_high - (-0.89215914241056763)).abs() < 1e-10);
        assert!((rep.t_stat_vs_zero - (-153.31435564844644)).abs() < 1e-8);
        assert!(
            (rep.p_of_t - 7.5121139283426911e-31).abs() / 7.5121139283426911e-31 < 1e-8,
            "{}",
            rep.p_of_t
        );
        assert!(
            (rep.mean_p - 1.9479804622926882e-36).abs() / 1.9479804622926882e-36 < 1e-8,
            "{}",
            rep.mean_p
        );
    }

    #[test]
    fn ensemble_too_few_runs() {
        assert!(matches!(
            ensemble_summary(&[-0.9], 119, 0.95),
            Err(Error::TooFewRuns(1))
        ));
    }

    #[test]
    fn pearson_symmetry_and_affine_invariance() {
        let x = [1.2, 2.3, 3.1, 4.8, 5.0, 6.7, 7.4];
        let y = [5.1, 2.9, 7.2, 4.4, 6.1, 6.0, 9.9];
        let a = pearson(&x, &y).unwrap().r;
        let b = pearson(&y, &x).unwrap().r;
        assert_eq!(a, b);

        for &scale in &[2.5, -3.0, 0.001] {
            let xs: Vec<f64> = x.iter().map(|v| scale * v + 7.0).collect();
            let r2 = pearson(&xs, &y).unwrap().r;
            assert!((r2 - scale.signum() * a).abs() < 1e-12);
        }
    }
}
