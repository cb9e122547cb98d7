//! Helpers shared by the integration-test targets.

pub mod oracle;

use qwalk::{C64, CoinOperator, CoinState};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

/// Draws a random member of the unitary coin family `(a b; -Δb̄ Δā)` with
/// `|a| >= min_a`, using the crate constructor that enforces the structure.
pub fn random_konno_coin(rng: &mut ChaCha8Rng, min_a: f64) -> CoinOperator {
    loop {
        let b_abs: f64 = rng.gen_range(0.0..1.0);
        let a_abs = (1.0 - b_abs * b_abs).sqrt();
        if a_abs < min_a {
            continue;
        }
        let a = C64::from_polar(a_abs, rng.gen_range(0.0..TAU));
        let b = C64::from_polar(b_abs, rng.gen_range(0.0..TAU));
        let det = C64::from_polar(1.0, rng.gen_range(0.0..TAU));
        return CoinOperator::konno(a, b, det).expect("sampled coin is valid by construction");
    }
}

/// Draws a random normalized coin state with uniform weight split and phases.
#[allow(dead_code)]
pub fn random_coin_state(rng: &mut ChaCha8Rng) -> CoinState {
    let w: f64 = rng.gen_range(0.0..1.0);
    CoinState::new(
        C64::from_polar(w.sqrt(), rng.gen_range(0.0..TAU)),
        C64::from_polar((1.0 - w).sqrt(), rng.gen_range(0.0..TAU)),
    )
    .expect("sampled state is normalized by construction")
}
