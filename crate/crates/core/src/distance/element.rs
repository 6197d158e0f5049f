//! Element distances between single hyper-degree entries.

use crate::distance::degree::{ChdElement, HdElement};
use crate::scalar::Scalar;

/// Combines the magnitude and positional terms: `exp((m^n + p^n)^(1/n)) - 1`.
fn envelope<S: Scalar>(magnitude: S, position: S, exponent: u32) -> S {
    let norm = match exponent {
        1 => magnitude + position,
        2 => magnitude.hypot(position),
        n => {
            let n = n as i32;
            (magnitude.powi(n) + position.powi(n)).powf(S::one() / S::from_i32(n).unwrap())
        }
    };
    norm.exp_m1()
}

fn magnitude_term<S: Scalar>(a: usize, b: usize) -> S {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    S::one() - S::from_usize_lossy(lo) / S::from_usize_lossy(hi)
}

/// Magnitude-position distance between two edge sizes with their positional biases.
pub fn mpd<S: Scalar>(s_u: usize, b_u: S, s_v: usize, b_v: S, exponent: u32) -> S {
    envelope(magnitude_term(s_u, s_v), (b_u - b_v).abs(), exponent)
}

pub fn mpd_elements<S: Scalar>(u: &HdElement<S>, v: &HdElement<S>, exponent: u32) -> S {
    mpd(u.size, u.bias, v.size, v.bias, exponent)
}

/// Collapsed MPD: biases are divided by their frequencies and the result is scaled
/// by the larger frequency.
pub fn cmpd<S: Scalar>(u: &ChdElement<S>, v: &ChdElement<S>, exponent: u32) -> S {
    let fu = S::from_usize_lossy(u.freq);
    let fv = S::from_usize_lossy(v.freq);
    let position = (u.bias / fu - v.bias / fv).abs();
    fu.max(fv) * envelope(magnitude_term(u.size, v.size), position, exponent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn chd(size: usize, freq: usize, bias: f64) -> ChdElement<f64> {
        ChdElement { size, freq, bias }
    }

    #[test]
    fn identical_elements_are_zero() {
        assert_eq!(mpd(4, 0.5, 4, 0.5, 2), 0.0);
        assert_eq!(cmpd(&chd(3, 2, 0.25), &chd(3, 2, 0.25), 2), 0.0);
    }

    #[test]
    fn mpd_reference_values() {
        // magnitude terms 1 - 3/6 and 1 - 2/3, biases equal
        assert_relative_eq!(mpd(6, 1.0, 3, 1.0, 2), 0.648_721_270_700_128_1, max_relative = 1e-12);
        assert_relative_eq!(mpd(2, 1.0, 3, 1.0, 2), 0.395_612_425_086_089_5, max_relative = 1e-12);
    }

    #[test]
    fn cmpd_separates_what_mpd_cannot() {
        // HD [2,2] vs [2,2,2]: every raw element pair is identical
        assert_eq!(mpd(2, 1.0, 2, 1.0, 2), 0.0);
        let d = cmpd(&chd(2, 2, 1.0), &chd(2, 3, 1.0), 2);
        assert_relative_eq!(d, 3.0 * ((1.0f64 / 6.0).exp() - 1.0), max_relative = 1e-14);
        assert!(d > 0.0);
    }

    #[test]
    fn exponent_one_and_three() {
        let m: f64 = 0.5;
        let p: f64 = 0.25;
        assert_relative_eq!(mpd(6, 1.0, 3, 0.75, 1), (m + p).exp() - 1.0, max_relative = 1e-14);
        let e3 = (m.powi(3) + p.powi(3)).cbrt().exp() - 1.0;
        assert_relative_eq!(mpd(6, 1.0, 3, 0.75, 3), e3, max_relative = 1e-12);
    }

    #[test]
    fn works_in_single_precision() {
        let d: f32 = cmpd(
            &ChdElement { size: 2, freq: 2, bias: 1.0f32 },
            &ChdElement { size: 2, freq: 3, bias: 1.0f32 },
            2,
        );
        assert!((d - 0.544_08).abs() < 1e-4);
    }
}
