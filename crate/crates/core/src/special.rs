//! Scalar special functions.

use core::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use crate::error::{domain_err, Error, Result};

/// 1/sqrt(2π)
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_677_94;
/// 1/sqrt(π)
pub const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_286_95;

/// Largest |t| accepted by [`hermite_series_w`]; beyond it cancellation ruins
/// the alternating partial sums and the ODE route must be used.
pub const T_MAX_SERIES: f64 = 8.0;

const SERIES_REL_TOL: f64 = 1e-14;
const SERIES_MAX_TERMS: usize = 2000;

/// The error function. Saturates to ±1 for |x| ≳ 6.
#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// The complementary error function `1 - erf(x)`, accurate in the far tail.
#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Standard normal density φ₁(t) = exp(-t²/2)/sqrt(2π).
#[inline]
pub fn gauss_density_1d(t: f64) -> f64 {
    FRAC_1_SQRT_2PI * libm::exp(-0.5 * t * t)
}

/// Standard normal cumulative distribution Φ(t), relative-accurate for t → -∞.
#[inline]
pub fn gauss_cdf(t: f64) -> f64 {
    0.5 * erfc(-t * FRAC_1_SQRT_2)
}

/// Inverse error function on (-1, 1).
///
/// A single-precision rational guess refined by Halley steps on `erf`, with
/// the residual taken against `erfc` in the tails so that `p` close to ±1
/// keeps its digits.
pub fn erfinv(p: f64) -> Result<f64> {
    if !(p.abs() < 1.0) {
        return Err(domain_err!("erfinv requires |p| < 1, got {p}"));
    }
    if p == 0.0 {
        return Ok(p);
    }
    let sign = if p < 0.0 { -1.0 } else { 1.0 };
    let a = p.abs();
    let mut x = initial_erfinv(a);
    // tail complement 1 - a is exact for a >= 0.5 (Sterbenz)
    let q = 1.0 - a;
    for _ in 0..4 {
        // f(x) = erf(x) - a, written through erfc in the upper half
        let r = if a > 0.5 { q - erfc(x) } else { erf(x) - a };
        let d = 2.0 * FRAC_1_SQRT_PI * libm::exp(-x * x);
        if d == 0.0 {
            break;
        }
        // Halley: f'' / f' = -2x
        let step = r / d;
        let dx = step / (1.0 + x * step);
        x -= dx;
        if dx.abs() <= 1e-17 * x.abs() {
            break;
        }
    }
    Ok(sign * x)
}

/// Inverse complementary error function on (0, 2).
///
/// For q < 1/2 Newton runs on log erfc, which keeps full relative accuracy
/// down to the smallest normal q.
pub fn erfcinv(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 2.0) {
        return Err(domain_err!("erfcinv requires 0 < q < 2, got {q}"));
    }
    if q >= 0.5 {
        // 1 - q is exact here
        return erfinv(1.0 - q);
    }
    let mut x = if q > 1e-3 {
        initial_erfinv(1.0 - q)
    } else {
        // erfc(x) ≈ exp(-x²) / (x√π)
        let l = -libm::log(q);
        libm::sqrt(l - 0.5 * libm::log(PI * l))
    };
    let target = libm::log(q);
    for _ in 0..60 {
        let e = erfc(x);
        let g = libm::log(e) - target;
        let dg = -2.0 * FRAC_1_SQRT_PI * libm::exp(-x * x) / e;
        let dx = g / dg;
        x -= dx;
        if dx.abs() <= 4.0 * f64::EPSILON * x.abs() {
            break;
        }
    }
    Ok(x)
}

fn initial_erfinv(a: f64) -> f64 {
    let mut w = -libm::log((1.0 - a) * (1.0 + a));
    let p = if w < 5.0 {
        w -= 2.5;
        let mut p = 2.810_226_36e-08;
        p = 3.432_739_39e-07 + p * w;
        p = -3.523_387_7e-06 + p * w;
        p = -4.391_506_54e-06 + p * w;
        p = 0.000_218_580_87 + p * w;
        p = -0.001_253_725_03 + p * w;
        p = -0.004_177_681_64 + p * w;
        p = 0.246_640_727 + p * w;
        1.501_409_41 + p * w
    } else {
        w = libm::sqrt(w) - 3.0;
        let mut p = -0.000_200_214_257;
        p = 0.000_100_950_558 + p * w;
        p = 0.001_349_343_22 + p * w;
        p = -0.003_673_428_44 + p * w;
        p = 0.005_739_507_73 + p * w;
        p = -0.007_622_461_3 + p * w;
        p = 0.009_438_870_47 + p * w;
        p = 1.001_674_06 + p * w;
        2.832_976_82 + p * w
    };
    p * a
}

/// sin(πx), exactly zero at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // reduce to r in [-1, 1) exactly; fmod is exact
    let mut r = libm::fmod(x, 2.0);
    if r >= 1.0 {
        r -= 2.0;
    } else if r < -1.0 {
        r += 2.0;
    }
    if r == 0.0 || r == -1.0 {
        return 0.0;
    }
    // fold to [-1/2, 1/2]
    if r > 0.5 {
        libm::sin(PI * (1.0 - r))
    } else if r < -0.5 {
        -libm::sin(PI * (1.0 + r))
    } else {
        libm::sin(PI * r)
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Reciprocal Gamma function 1/Γ(x), an entire function.
///
/// Lanczos (g = 7) for x ≥ 1/2 and the reflection formula below, so the zeros
/// at 0, -1, -2, ... come out exactly from [`sin_pi`].
pub fn recip_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    if x < 0.5 {
        // 1/Γ(x) = sin(πx) Γ(1-x) / π
        let s = sin_pi(x);
        if s == 0.0 {
            return 0.0;
        }
        return s / (PI * recip_gamma(1.0 - x));
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if x == libm::floor(x) && x <= 24.0 {
        // 1/(n-1)! exactly representable up to 22!
        return 1.0 / (1..x as u32).map(f64::from).product::<f64>();
    }
    let z = x - 1.0;
    let mut sum = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let w = z + LANCZOS_G + 0.5;
    // Γ(x) = sqrt(2π) w^(z+1/2) e^(-w) sum, kept in log form against overflow
    libm::exp(w - (z + 0.5) * libm::log(w)) / (libm::sqrt(2.0 * PI) * sum)
}

/// Generalized binomial coefficient C(λ, m) by the product recurrence.
pub fn binom(lambda: f64, m: usize) -> f64 {
    let mut c = 1.0;
    for k in 1..=m {
        c *= (lambda - (k as f64) + 1.0) / k as f64;
    }
    c
}

/// A truncated evaluation of the Hermite-function series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub lambda: f64,
    pub t: f64,
    pub terms_used: usize,
    pub value: f64,
    /// Rigorous bound on the absolute value of the discarded tail.
    pub truncation_bound: f64,
}

/// Hermite function of degree `lambda`, normalized with C = 1:
///
/// `Σ_m C(λ, m) (-t/√2)^m / Γ((1 - λ + m)/2)`.
///
/// This is the solution of `-w'' + t w' = λ w` that grows at most like
/// `|t|^λ` as `t → -∞`. For integer λ it is a Hermite polynomial, e.g.
/// `-t/√(2π)` for λ = 1 and `(t² - 1)/(2√π)` for λ = 2.
///
/// Within each parity class the term ratio is exactly
/// `a_{m+2}/a_m = 2x²(m - λ)/((m+1)(m+2))` once `m > λ + 1` (with `x = -t/√2`),
/// which yields a geometric bound for the tail.
pub fn hermite_series_w(lambda: f64, t: f64) -> Result<SeriesEval> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(domain_err!("series needs a finite lambda >= 0, got {lambda}"));
    }
    if !(t.abs() <= T_MAX_SERIES) {
        return Err(Error::Truncation(alloc::format!(
            "|t| = {} exceeds {T_MAX_SERIES}; integrate the ODE instead",
            t.abs()
        )));
    }
    let x = -t / SQRT_2;
    let x2 = x * x;
    let term = |m: usize, binom_m: f64, pow: f64| binom_m * pow * recip_gamma((1.0 - lambda + m as f64) / 2.0);

    let mut sum = 0.0;
    let mut b = 1.0; // C(λ, m)
    let mut pow = 1.0; // x^m
                       // start of the regime where the parity ratio bound is decreasing and valid
    let m_tail = libm::ceil(2.0 * lambda + 3.0) as usize;
    for m in 0..SERIES_MAX_TERMS {
        sum += term(m, b, pow);
        // next two terms, computed without being added
        let b1 = b * (lambda - m as f64) / (m + 1) as f64;
        let b2 = b1 * (lambda - (m + 1) as f64) / (m + 2) as f64;
        if m + 1 >= m_tail {
            let k = (m + 1) as f64;
            let rho = 2.0 * x2 * (k - lambda) / ((k + 1.0) * (k + 2.0));
            if rho < 1.0 {
                let a1 = term(m + 1, b1, pow * x).abs();
                let a2 = term(m + 2, b2, pow * x2).abs();
                let bound = (a1 + a2) / (1.0 - rho);
                if bound <= SERIES_REL_TOL * sum.abs().max(1.0) {
                    return Ok(SeriesEval { lambda, t, terms_used: m + 1, value: sum, truncation_bound: bound });
                }
            }
        }
        b = b1;
        pow *= x;
    }
    Err(Error::Internal(alloc::format!(
        "hermite series did not converge in {SERIES_MAX_TERMS} terms (lambda={lambda}, t={t})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath, 50 digits
    const ERF_HALF: f64 = 0.520_499_877_813_046_537_682_746_653_891_964_528_736_451_575_757_96;
    const ERFINV_09: f64 = 1.163_087_153_676_674_086_726_254_260_562_947_593_477_932_550_002_1;

    #[test]
    fn erf_anchors() {
        assert_eq!(erf(0.0), 0.0);
        assert_eq!(erf(38.0), 1.0);
        assert_eq!(erf(-38.0), -1.0);
        assert!((erf(0.5) - ERF_HALF).abs() <= 1e-15);
    }

    #[test]
    fn erfinv_anchors() {
        assert_eq!(erfinv(0.0).unwrap(), 0.0);
        assert!((erfinv(erf(1.25)).unwrap() - 1.25).abs() <= 1e-13);
        let x = erfinv(0.9).unwrap();
        assert!((x - ERFINV_09).abs() <= 1e-15);
        assert!((erf(x) - 0.9).abs() <= 1e-15);
        assert!((erfinv(-0.9).unwrap() + x).abs() == 0.0);
    }

    #[test]
    fn erfinv_rejects_boundary() {
        for p in [1.0, -1.0, 1.5, f64::NAN] {
            assert!(matches!(erfinv(p), Err(Error::Domain(_))), "{p}");
        }
    }

    #[test]
    fn erfcinv_tails() {
        for q in [1e-300, 1e-100, 2e-31, 1e-12, 0.01, 0.3, 0.5, 1.0, 1.7] {
            let x = erfcinv(q).unwrap();
            // forward condition number of erfc at x is about 2x²
            assert!((erfc(x) - q).abs() <= (8.0 + 4.0 * x * x) * f64::EPSILON * q, "{q}");
        }
        assert!(erfcinv(0.0).is_err() && erfcinv(2.0).is_err());
    }

    #[test]
    fn erfinv_far_tail() {
        let p = 1.0 - 1e-12;
        let x = erfinv(p).unwrap();
        let q = 1.0 - p;
        assert!((erfc(x) - q).abs() <= q * 1e-10);
    }

    #[test]
    fn recip_gamma_anchors() {
        assert_eq!(recip_gamma(1.0), 1.0);
        assert!((recip_gamma(2.0) - 1.0).abs() < 1e-15);
        for z in [0.0, -1.0, -2.0, -7.0] {
            assert_eq!(recip_gamma(z), 0.0, "{z}");
        }
        assert!((recip_gamma(0.5) - FRAC_1_SQRT_PI).abs() <= 1e-13 * FRAC_1_SQRT_PI);
        // Γ(-1/2) = -2√π
        assert!((recip_gamma(-0.5) + 0.5 * FRAC_1_SQRT_PI).abs() <= 1e-13);
        // Γ(5) = 24
        assert!((recip_gamma(5.0) * 24.0 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn recip_gamma_large_argument_underflows_quietly() {
        assert_eq!(recip_gamma(400.0), 0.0);
        assert!(recip_gamma(170.0) > 0.0);
    }

    #[test]
    fn binom_recurrence() {
        assert_eq!(binom(1.0, 0), 1.0);
        assert_eq!(binom(1.0, 1), 1.0);
        assert_eq!(binom(1.0, 2), 0.0);
        assert_eq!(binom(5.0, 2), 10.0);
        assert!((binom(0.5, 2) + 0.125).abs() < 1e-16);
    }

    #[test]
    fn series_integer_degrees() {
        for t in [-3.0, -1.5, -0.5, 0.0, 0.7] {
            let s0 = hermite_series_w(0.0, t).unwrap();
            assert!((s0.value - FRAC_1_SQRT_PI).abs() < 1e-15);
            let s1 = hermite_series_w(1.0, t).unwrap();
            assert!((s1.value + t * FRAC_1_SQRT_2PI).abs() < 1e-14, "t={t}");
        }
        for t in [-3.0, -1.5, -0.5] {
            let s2 = hermite_series_w(2.0, t).unwrap();
            let poly = (t * t - 1.0) / (2.0 * libm::sqrt(PI));
            assert!((s2.value / poly - 1.0).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn series_rejects_large_t() {
        assert!(matches!(hermite_series_w(0.5, -8.5), Err(Error::Truncation(_))));
        assert!(hermite_series_w(0.5, -8.0).is_ok());
        assert!(matches!(hermite_series_w(-0.1, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn series_bookkeeping() {
        let s = hermite_series_w(0.7, -2.5).unwrap();
        assert!(s.terms_used >= 1);
        assert!(s.truncation_bound >= 0.0);
        assert!(s.truncation_bound <= 1e-14 * s.value.abs().max(1.0));
        assert!(s.value.is_finite());
        let far = hermite_series_w(1.3, -8.0).unwrap();
        assert!(far.value.is_finite());
    }

    #[test]
    fn sin_pi_exact_zeros() {
        for k in -5..=5 {
            assert_eq!(sin_pi(k as f64), 0.0);
        }
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(-0.5) + 1.0).abs() < 1e-16);
        assert!((sin_pi(2.25) - libm::sin(PI * 0.25)).abs() < 1e-15);
    }
}
