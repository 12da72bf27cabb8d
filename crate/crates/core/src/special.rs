//! Gamma and Beta functions.
//!
//! Lanczos approximation with `g = 7` and nine coefficients, combined with
//! the reflection formula below `x = 0.5`. Relative accuracy is about
//! `1e-15` on `(0, 10]`, which is what the closed-form fractional kernels
//! need.

use std::f64::consts::PI;

pub const LANCZOS_G: f64 = 7.0;

pub const LANCZOS_COEFFICIENTS: [f64; 9] = [
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

/// Gamma function Γ(x). Returns `NaN` at the poles `0, -1, -2, ...`.
pub fn gamma(x: f64) -> f64 {
    lanczos_gamma(x, &LANCZOS_COEFFICIENTS)
}

/// Gamma with caller-supplied Lanczos coefficients.
///
/// Exists so the property suite can run against a deliberately perturbed
/// Γ and confirm that its checks detect the mutation.
pub fn lanczos_gamma(x: f64, coefficients: &[f64; 9]) -> f64 {
    if x.is_nan() || (x <= 0.0 && x == x.floor()) {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * lanczos_gamma(1.0 - x, coefficients));
    }
    let z = x - 1.0;
    let mut sum = coefficients[0];
    for (i, &c) in coefficients.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * sum
}

/// Beta function B(a, b) = Γ(a)Γ(b)/Γ(a+b).
pub fn beta(a: f64, b: f64) -> f64 {
    gamma(a) * gamma(b) / gamma(a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn matches_high_precision_values() {
        // reference digits from a 30-digit evaluation
        let cases = [
            (1.5, 0.886_226_925_452_758_013_649_083_741_671),
            (0.3, 2.991_568_987_687_590_628_312_516_515_9),
            (7.7, 2_769.830_362_327_313_660_274_177_737_21),
            (0.01, 99.432_585_119_150_603_713_532_988_870_5),
            (9.99, 354_802.017_019_830_927_347_101_394_23),
        ];
        for (x, want) in cases {
            assert!(rel(gamma(x), want) < 1e-13, "gamma({x}) = {}", gamma(x));
        }
    }

    #[test]
    fn integers_and_half_integers() {
        let mut fact = 1.0;
        for n in 1..10 {
            assert!(rel(gamma(n as f64), fact) < 1e-14);
            fact *= n as f64;
        }
        assert!(rel(gamma(0.5), PI.sqrt()) < 1e-14);
    }

    #[test]
    fn poles_are_nan() {
        assert!(gamma(0.0).is_nan());
        assert!(gamma(-2.0).is_nan());
    }

    #[test]
    fn beta_symmetric_identity() {
        // B(3/4, 3/4) = Γ(3/4)²/Γ(3/2)
        assert!(rel(beta(0.75, 0.75), 1.694_426_169_587_958_173_212_998_246_96) < 1e-13);
        assert!(rel(beta(2.0, 3.0), 1.0 / 12.0) < 1e-14);
    }
}
