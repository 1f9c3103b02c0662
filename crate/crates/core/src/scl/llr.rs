//! Kernel LLR update rules and path-metric penalties.

/// Saturation magnitude for channel LLRs.
pub const LLR_CLAMP: f64 = 40.0;

#[inline]
pub fn clamp_llr(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(-LLR_CLAMP, LLR_CLAMP)
    }
}

/// `ln(1 + e^{-x})` for `x ≥ 0`.
#[inline]
fn log1p_exp_neg(x: f64) -> f64 {
    (-x).exp().ln_1p()
}

/// Check-node rule `2·atanh(tanh(a/2)·tanh(b/2))`, evaluated as
/// `sgn(a)sgn(b)·[min(|a|,|b|) + ln(1+e^{-|a+b|}) − ln(1+e^{-|a−b|})]`.
#[inline]
pub fn llr_check(a: f64, b: f64) -> f64 {
    let (aa, ab) = (a.abs(), b.abs());
    let mag = aa.min(ab) + log1p_exp_neg(aa + ab) - log1p_exp_neg((aa - ab).abs());
    let mag = mag.max(0.0);
    if (a < 0.0) ^ (b < 0.0) {
        -mag
    } else {
        mag
    }
}

/// Min-sum approximation of [`llr_check`].
#[inline]
pub fn llr_check_minsum(a: f64, b: f64) -> f64 {
    let mag = a.abs().min(b.abs());
    if (a < 0.0) ^ (b < 0.0) {
        -mag
    } else {
        mag
    }
}

/// Variable-node rule given the already decided partner bit: `b + (1 − 2·bit)·a`.
#[inline]
pub fn llr_combine(a: f64, b: f64, bit: u8) -> f64 {
    if bit & 1 == 0 {
        b + a
    } else {
        b - a
    }
}

/// Which check-node rule the decoder applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum CheckRule {
    #[default]
    Exact,
    MinSum,
}

impl CheckRule {
    #[inline]
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            CheckRule::Exact => llr_check(a, b),
            CheckRule::MinSum => llr_check_minsum(a, b),
        }
    }
}

/// Path-metric penalty for deciding `bit` against decision LLR `llr`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum MetricRule {
    /// `ln(1 + e^{-(1−2·bit)·llr})`: with exact check nodes the path metric
    /// equals `−ln P(u | y)` up to a constant.
    #[default]
    Exact,
    /// `|llr|` when the decision disagrees with the sign of `llr`, else 0.
    Hard,
}

impl MetricRule {
    #[inline]
    pub fn penalty(self, llr: f64, bit: u8) -> f64 {
        let signed = if bit & 1 == 0 { llr } else { -llr };
        match self {
            MetricRule::Exact => {
                if signed >= 0.0 {
                    log1p_exp_neg(signed)
                } else {
                    -signed + log1p_exp_neg(-signed)
                }
            }
            MetricRule::Hard => {
                if signed < 0.0 {
                    -signed
                } else {
                    0.0
                }
            }
        }
    }
}

/// Hard decision on an LLR; zero decides for bit 0.
#[inline]
pub fn hard_decision(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reference_check(a: f64, b: f64) -> f64 {
        2.0 * ((a / 2.0).tanh() * (b / 2.0).tanh()).atanh()
    }

    #[test]
    fn check_examples() {
        assert_eq!(llr_check(0.0, 3.7), 0.0);
        assert_eq!(llr_check(-5.0, 0.0), 0.0);
        // 2·atanh(tanh(1)^2) = 1.3250027...
        assert!((llr_check(2.0, 2.0) - 1.325).abs() < 5e-4);
        assert!((llr_check(2.0, 2.0) - reference_check(2.0, 2.0)).abs() < 1e-12);
        assert!(llr_check(LLR_CLAMP, LLR_CLAMP).is_finite());
        assert!((llr_check(LLR_CLAMP, -LLR_CLAMP) + LLR_CLAMP - 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn combine_identities() {
        assert_eq!(llr_combine(1.5, 2.0, 0), 3.5);
        assert_eq!(llr_combine(1.5, 2.0, 1), 0.5);
    }

    #[test]
    fn penalties() {
        assert_eq!(MetricRule::Hard.penalty(3.0, 0), 0.0);
        assert_eq!(MetricRule::Hard.penalty(3.0, 1), 3.0);
        assert_eq!(MetricRule::Hard.penalty(-2.0, 0), 2.0);
        let p0 = MetricRule::Exact.penalty(1.0, 0);
        let p1 = MetricRule::Exact.penalty(1.0, 1);
        // P(0) = 1/(1+e^{-1}), P(1) = e^{-1}/(1+e^{-1})
        assert!((p0 + (1.0 / (1.0 + (-1f64).exp())).ln()).abs() < 1e-12);
        assert!((p1 - p0 - 1.0).abs() < 1e-12);
        assert_eq!(hard_decision(0.0), 0);
        assert_eq!(hard_decision(-0.1), 1);
    }

    proptest! {
        #[test]
        fn stable_check_matches_tanh_form(a in -15.0f64..15.0, b in -15.0f64..15.0) {
            let x = llr_check(a, b);
            prop_assert!((x - reference_check(a, b)).abs() < 1e-9);
            prop_assert!(x.abs() <= a.abs().min(b.abs()) + 1e-12);
            prop_assert!(llr_check_minsum(a, b).abs() >= x.abs() - 1e-12);
        }

        #[test]
        fn penalties_non_negative(l in -40.0f64..40.0, bit in 0u8..2) {
            prop_assert!(MetricRule::Exact.penalty(l, bit) >= 0.0);
            prop_assert!(MetricRule::Hard.penalty(l, bit) >= 0.0);
        }
    }
}
