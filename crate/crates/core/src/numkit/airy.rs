//! Airy functions Ai, Bi and their first derivatives on `|x| <= 12`.
//!
//! * `|x| <= 6`: Maclaurin series built from the recurrence
//!   `c_{n+3} = c_n / ((n+2)(n+3))` of `y'' = x y`.
//! * `Ai`, `Ai'` for `x > 1`: the Macdonald-function integral
//!   `K_ν(ζ) = ∫_0^∞ exp(-ζ cosh u) cosh(ν u) du` with trapezoid sums, which
//!   converge geometrically for this integrand. The series loses Ai to
//!   cancellation on the positive axis, and forward continuation of the
//!   recessive solution is unstable.
//! * Otherwise outside `[-6, 6]`: RK4 continuation of `y'' = x y` from `±6`.

use std::f64::consts::{FRAC_1_PI, PI};

use crate::error::{Error, Result};

/// Ai(0) = 3^{-2/3} / Γ(2/3)
pub const AI0: f64 = 0.355_028_053_887_817_2;
/// -Ai'(0) = 3^{-1/3} / Γ(1/3)
pub const NEG_AI_PRIME0: f64 = 0.258_819_403_792_806_8;

pub const MAX_ARG: f64 = 12.0;
const SERIES_LIMIT: f64 = 6.0;
const INTEGRAL_FROM: f64 = 1.0;
const CONTINUATION_STEP: f64 = 5e-4;
const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValue {
    pub ai: f64,
    pub bi: f64,
    pub ai_prime: f64,
    pub bi_prime: f64,
}

impl AiryValue {
    /// `Ai Bi' - Ai' Bi`, equal to `1/π` for the exact pair.
    pub fn wronskian(&self) -> f64 {
        self.ai * self.bi_prime - self.ai_prime * self.bi
    }
}

pub fn airy(x: f64) -> Result<AiryValue> {
    if !(x.abs() <= MAX_ARG) {
        return Err(Error::Range(x));
    }
    if x.abs() <= SERIES_LIMIT {
        let mut v = airy_series(x);
        if x > INTEGRAL_FROM {
            let (ai, ai_prime) = ai_integral(x);
            v.ai = ai;
            v.ai_prime = ai_prime;
        }
        return Ok(v);
    }
    if x > 0.0 {
        let start = airy_series(SERIES_LIMIT);
        let [bi, bi_prime] = continue_airy([start.bi, start.bi_prime], SERIES_LIMIT, x);
        let (ai, ai_prime) = ai_integral(x);
        Ok(AiryValue {
            ai,
            bi,
            ai_prime,
            bi_prime,
        })
    } else {
        let start = airy_series(-SERIES_LIMIT);
        let [ai, ai_prime] = continue_airy([start.ai, start.ai_prime], -SERIES_LIMIT, x);
        let [bi, bi_prime] = continue_airy([start.bi, start.bi_prime], -SERIES_LIMIT, x);
        Ok(AiryValue {
            ai,
            bi,
            ai_prime,
            bi_prime,
        })
    }
}

/// Sum of the series solution with `c_start = 1` and value/derivative.
fn series_branch(x: f64, start: i32) -> (f64, f64) {
    let mut c = 1.0;
    let mut n = start;
    let mut val = 0.0;
    let mut der = 0.0;
    for _ in 0..200 {
        let term = c * x.powi(n);
        let dterm = if n == 0 {
            0.0
        } else {
            n as f64 * c * x.powi(n - 1)
        };
        val += term;
        der += dterm;
        let small = |t: f64, s: f64| t.abs() <= 1e-17 * s.abs() || t == 0.0;
        if n > 3 && small(term, val) && small(dterm, der) {
            break;
        }
        c /= ((n + 2) * (n + 3)) as f64;
        n += 3;
    }
    (val, der)
}

pub(crate) fn airy_series(x: f64) -> AiryValue {
    let (f, fp) = series_branch(x, 0);
    let (g, gp) = series_branch(x, 1);
    AiryValue {
        ai: AI0 * f - NEG_AI_PRIME0 * g,
        bi: SQRT3 * (AI0 * f + NEG_AI_PRIME0 * g),
        ai_prime: AI0 * fp - NEG_AI_PRIME0 * gp,
        bi_prime: SQRT3 * (AI0 * fp + NEG_AI_PRIME0 * gp),
    }
}

/// `e^ζ K_ν(ζ)` by the trapezoid rule on `[0, ∞)`.
fn scaled_bessel_k(nu: f64, zeta: f64) -> f64 {
    let h = 0.1;
    let f = |u: f64| (-zeta * (u.cosh() - 1.0)).exp() * (nu * u).cosh();
    let mut sum = 0.5 * f(0.0);
    let mut k = 1;
    loop {
        let v = f(k as f64 * h);
        sum += v;
        if v < 1e-18 * sum || k > 2000 {
            break;
        }
        k += 1;
    }
    h * sum
}

fn ai_integral(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let decay = (-zeta).exp();
    let ai = FRAC_1_PI * (x / 3.0).sqrt() * scaled_bessel_k(1.0 / 3.0, zeta) * decay;
    let ai_prime = -x / (PI * SQRT3) * scaled_bessel_k(2.0 / 3.0, zeta) * decay;
    (ai, ai_prime)
}

/// RK4 for `y'' = x y` from `from` to `to` with uniform steps.
fn continue_airy(y0: [f64; 2], from: f64, to: f64) -> [f64; 2] {
    let steps = ((to - from).abs() / CONTINUATION_STEP).ceil().max(1.0) as usize;
    let h = (to - from) / steps as f64;
    let rhs = |x: f64, y: [f64; 2]| [y[1], x * y[0]];
    let mut y = y0;
    for i in 0..steps {
        let x = from + i as f64 * h;
        let k1 = rhs(x, y);
        let k2 = rhs(
            x + 0.5 * h,
            [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]],
        );
        let k3 = rhs(
            x + 0.5 * h,
            [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]],
        );
        let k4 = rhs(x + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for j in 0..2 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        let v = airy(0.0).unwrap();
        assert!((v.ai - 0.355_028_053_9).abs() < 1e-10);
        assert!((v.bi - 0.614_926_627_4).abs() < 1e-10);
        assert!((v.ai_prime + NEG_AI_PRIME0).abs() < 1e-16);
    }

    #[test]
    fn wronskian_constant_over_range() {
        let mut x = -12.0;
        while x <= 12.0 {
            let v = airy(x).unwrap();
            let err = (v.wronskian() - FRAC_1_PI).abs();
            assert!(err < 1e-10 / FRAC_1_PI * FRAC_1_PI, "x={x}: err={err}");
            x += 0.37;
        }
        for x in [-6.0, -5.999, 1.0, 1.0001, 6.0, 6.0001, 12.0, -12.0] {
            let v = airy(x).unwrap();
            assert!((v.wronskian() - FRAC_1_PI).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn decay_on_positive_axis() {
        let a0 = airy(0.0).unwrap().ai;
        let a3 = airy(3.0).unwrap().ai;
        let a6 = airy(6.0).unwrap().ai;
        assert!(a6 < a3 && a3 < a0);
        assert!(a6 > 0.0);
    }

    #[test]
    fn integral_and_series_agree_where_both_are_accurate() {
        for x in [1.2, 2.0, 2.5] {
            let s = airy_series(x);
            let (ai, aip) = ai_integral(x);
            assert!((s.ai - ai).abs() < 1e-14 * 10.0, "x={x}");
            assert!((s.ai_prime - aip).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn out_of_range() {
        assert_eq!(airy(12.5), Err(Error::Range(12.5)));
        assert!(airy(f64::NAN).is_err());
    }
}
