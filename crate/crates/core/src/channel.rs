//! Path loss and Rayleigh (unit-mean exponential power) fading.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};

/// Minimum link distance (km). Simulated distances are clamped up to it.
pub const MIN_LINK_DISTANCE_KM: f64 = 1e-3;

/// Power gains for one link: `h` in the harvest sub-slot, `g` in the uplink.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDraw {
    pub h: f64,
    pub g: f64,
}

impl ChannelDraw {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        ChannelDraw {
            h: fading(rng),
            g: fading(rng),
        }
    }
}

/// `r^-alpha`; distances below [`MIN_LINK_DISTANCE_KM`] are rejected.
pub fn path_loss(r: f64, alpha: f64) -> Result<f64> {
    if !(r >= MIN_LINK_DISTANCE_KM) {
        return Err(Error::DegenerateDistance {
            distance_km: r,
            min_km: MIN_LINK_DISTANCE_KM,
        });
    }
    Ok(gain_unchecked(r, alpha))
}

#[inline]
pub(crate) fn gain_unchecked(r: f64, alpha: f64) -> f64 {
    if alpha == 4.0 {
        let r2 = r * r;
        1.0 / (r2 * r2)
    } else {
        r.powf(-alpha)
    }
}

/// Lifts a simulated distance to the minimum link distance.
#[inline]
pub fn clamp_distance(r: f64) -> f64 {
    if r < MIN_LINK_DISTANCE_KM {
        log::trace!("clamping link distance {r} km to {MIN_LINK_DISTANCE_KM} km");
        MIN_LINK_DISTANCE_KM
    } else {
        r
    }
}

/// Path loss after clamping; never fails.
#[inline]
pub fn clamped_path_loss(r: f64, alpha: f64) -> f64 {
    gain_unchecked(clamp_distance(r), alpha)
}

#[inline]
pub fn fading<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

/// `count` i.i.d. unit-mean exponential power gains.
pub fn draw_fading<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<f64> {
    (0..count).map(|_| fading(rng)).collect()
}

/// `p_tx * gain * r^-alpha` (W).
pub fn received_power(p_tx: f64, gain: f64, r: f64, alpha: f64) -> Result<f64> {
    Ok(p_tx * gain * path_loss(r, alpha)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unit_distance_is_unit_gain() {
        for alpha in [2.5, 3.0, 4.0, 5.5] {
            assert_eq!(path_loss(1.0, alpha).unwrap(), 1.0);
        }
    }

    #[test]
    fn two_km_alpha_four() {
        assert_eq!(path_loss(2.0, 4.0).unwrap(), 0.0625);
    }

    #[test]
    fn below_minimum_distance_rejected() {
        assert!(matches!(
            path_loss(1e-4, 4.0),
            Err(Error::DegenerateDistance { .. })
        ));
        assert!(path_loss(MIN_LINK_DISTANCE_KM, 4.0).is_ok());
        assert_eq!(clamp_distance(1e-5), MIN_LINK_DISTANCE_KM);
    }

    #[test]
    fn received_power_examples() {
        assert_eq!(received_power(1.0, 1.0, 1.0, 4.0).unwrap(), 1.0);
        let s = received_power(2e-4, 0.5, 0.01, 4.0).unwrap();
        assert!((s / 1e4 - 1.0).abs() < 1e-12);
        assert_eq!(received_power(3.0, 0.0, 0.2, 3.5).unwrap(), 0.0);
    }

    #[test]
    fn empty_draw() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(draw_fading(&mut rng, 0).is_empty());
    }

    #[test]
    fn fading_moments() {
        // mean sd 1e-3, variance sd ~2.8e-3 at 1e6 draws
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let xs = draw_fading(&mut rng, 1_000_000);
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn fading_is_reproducible() {
        let a = draw_fading(&mut ChaCha8Rng::seed_from_u64(9), 64);
        let b = draw_fading(&mut ChaCha8Rng::seed_from_u64(9), 64);
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn received_power_scaling(
            p in 1e-6f64..10.0, g in 0.0f64..5.0, r in 0.002f64..50.0,
            c in 1.0f64..20.0, alpha in 2.1f64..6.0,
        ) {
            let base = received_power(p, g, r, alpha).unwrap();
            prop_assert!((received_power(2.0 * p, g, r, alpha).unwrap() - 2.0 * base).abs() <= 1e-12 * base.abs());
            prop_assert!((received_power(p, 3.0 * g, r, alpha).unwrap() - 3.0 * base).abs() <= 1e-12 * base.abs());
            let scaled = received_power(p, g, c * r, alpha).unwrap();
            let expect = base * c.powf(-alpha);
            prop_assert!((scaled - expect).abs() <= 1e-12 * expect.abs());
        }

        #[test]
        fn path_loss_decreasing(r in 0.001f64..100.0, dr in 1e-6f64..10.0, alpha in 2.1f64..6.0) {
            prop_assert!(path_loss(r + dr, alpha).unwrap() < path_loss(r, alpha).unwrap());
        }
    }
}
