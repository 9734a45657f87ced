//! Randomized and closed-form invariants for the degradation channels.

use num_complex::Complex;
use oedecomp::channels::{
    apply_degradation_channel, apply_epsilon_channel, epsilon_scan, DegradationChannel,
    EpsilonChannel,
};
use oedecomp::coarse::{block_dephase, off_block_magnitude, resource_metrics, CoarseGraining};
use oedecomp::linalg::{hermitian_eig, DensityMatrix, PureState};
use oedecomp::rng::ProtocolRng;
use oedecomp::sampling::{random_coarse_graining, random_density};

fn sample_state_4d() -> DensityMatrix<f64> {
    oedecomp::reference::state_4d()
}

fn sample_cg_4d() -> CoarseGraining<f64> {
    oedecomp::reference::graining_4d()
}

/// Random pure state supported inside one block of a coarse-graining.
fn random_block_pure(
    rng: &mut ProtocolRng,
    cg: &CoarseGraining<f64>,
    block: usize,
) -> PureState<f64> {
    let dim = cg.dim();
    loop {
        let raw: Vec<Complex<f64>> = (0..dim)
            .map(|_| Complex::new(rng.gaussian(), rng.gaussian()))
            .collect();
        let projected = cg.projectors()[block].apply(&raw);
        let norm: f64 = projected.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            let v: Vec<Complex<f64>> =
                projected.into_iter().map(|z| z.scale(1.0 / norm)).collect();
            return PureState::new(v).unwrap();
        }
    }
}

#[test]
fn coherence_to_noise_conversion_with_conserved_total() {
    // at ε = 0.26 on the 4-dim reference state: coherence strictly down,
    // noise strictly up, total change within 1e-3 — all three at once
    let rho = sample_state_4d();
    let cg = sample_cg_4d();
    let before = resource_metrics(&rho, &cg).unwrap();
    let out = apply_epsilon_channel(&rho, &EpsilonChannel::new(0.26).unwrap());
    let after = resource_metrics(&out, &cg).unwrap();
    let d_c = after.c_rel - before.c_rel;
    let d_d = after.d_rel - before.d_rel;
    let d_o = after.o_c - before.o_c;
    assert!(d_c < 0.0, "d_c_rel {d_c}");
    assert!(d_d > 0.0, "d_d_rel {d_d}");
    assert!(d_o.abs() <= 1e-3, "d_o_c {d_o}");
}

#[test]
fn reset_channel_spectrum_closed_form() {
    // eigenvalues of Λ_ε(ρ): (1-ε)/8 twice and (3+ε ± 2√(5ε²-2ε+1))/8
    let rho = sample_state_4d();
    for i in 0..50 {
        let eps = i as f64 / 49.0 * 0.5;
        let out = apply_epsilon_channel(&rho, &EpsilonChannel::new(eps).unwrap());
        let spec = hermitian_eig(out.matrix()).unwrap();
        let root = (5.0 * eps * eps - 2.0 * eps + 1.0).sqrt();
        let mut want = [
            (1.0 - eps) / 8.0,
            (1.0 - eps) / 8.0,
            (3.0 + eps - 2.0 * root) / 8.0,
            (3.0 + eps + 2.0 * root) / 8.0,
        ];
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in spec.eigenvalues().iter().zip(want.iter()) {
            assert!((got - want).abs() < 1e-10, "eps {eps}: {got} vs {want}");
        }
    }
}

#[test]
fn purity_strictly_decreases_in_dephasing_dominated_regime() {
    // Strict η decrease is guaranteed when the admixed noise is dominated by
    // block dephasing (β near 1): the conditional blocks are untouched, so
    // D_rel is fixed while C_rel strictly contracts. Sampling β in [0.9, 1].
    let mut rng = ProtocolRng::new(3001);
    let mut tested = 0;
    while tested < 200 {
        let dim = [4usize, 6, 8][(rng.next_u64() % 3) as usize];
        let rotate = rng.next_u64() & 1 == 0;
        let cg = random_coarse_graining(&mut rng, dim, rotate);
        let rho = random_density(&mut rng, dim);
        let before = resource_metrics(&rho, &cg).unwrap();
        if before.c_rel <= 1e-3 {
            continue;
        }
        tested += 1;
        let alpha = 0.05 + 0.95 * rng.next_f64();
        let beta = 0.9 + 0.1 * rng.next_f64();
        let block = (rng.next_u64() % cg.len() as u64) as usize;
        let psi0 = random_block_pure(&mut rng, &cg, block);
        let ch = DegradationChannel::new(alpha, beta, psi0, cg.clone()).unwrap();
        let out = apply_degradation_channel(&rho, &ch).unwrap();
        let after = resource_metrics(&out, &cg).unwrap();
        let drop = before.eta - after.eta;
        assert!(
            drop > 1e-7,
            "eta did not strictly decrease: {} -> {} (alpha {alpha}, beta {beta})",
            before.eta,
            after.eta
        );
    }
}

#[test]
fn purity_can_increase_when_preparation_dominates() {
    // With β small the channel mostly injects the block-projected reference
    // state; that can shrink the total inconsistency faster than the
    // coherence, raising η. A short seeded search exhibits the effect, which
    // is why the strict-decrease guarantee above is stated for the
    // dephasing-dominated regime only.
    let mut rng = ProtocolRng::new(3002);
    let mut found = false;
    for _ in 0..4000 {
        let dim = [4usize, 6, 8][(rng.next_u64() % 3) as usize];
        let cg = random_coarse_graining(&mut rng, dim, false);
        let rho = random_density(&mut rng, dim);
        let before = resource_metrics(&rho, &cg).unwrap();
        if before.c_rel <= 1e-3 {
            continue;
        }
        let alpha = 0.05 + 0.95 * rng.next_f64();
        let beta = 0.2 * rng.next_f64();
        let block = (rng.next_u64() % cg.len() as u64) as usize;
        let psi0 = random_block_pure(&mut rng, &cg, block);
        let ch = DegradationChannel::new(alpha, beta, psi0, cg.clone()).unwrap();
        let out = apply_degradation_channel(&rho, &ch).unwrap();
        let after = resource_metrics(&out, &cg).unwrap();
        if after.eta > before.eta + 1e-6 {
            found = true;
            break;
        }
    }
    assert!(found, "no purity increase found in the preparation-dominated regime");
}

#[test]
fn free_states_stay_free() {
    // Λ_{α,β} maps block-incoherent states to block-incoherent states
    let mut rng = ProtocolRng::new(3003);
    for _ in 0..60 {
        let dim = [4usize, 8][(rng.next_u64() % 2) as usize];
        let rotate = rng.next_u64() & 1 == 0;
        let cg = random_coarse_graining(&mut rng, dim, rotate);
        let incoherent = block_dephase(&random_density(&mut rng, dim), &cg).unwrap();
        let alpha = rng.next_f64();
        let beta = rng.next_f64();
        let block = (rng.next_u64() % cg.len() as u64) as usize;
        let psi0 = random_block_pure(&mut rng, &cg, block);
        let ch = DegradationChannel::new(alpha, beta, psi0, cg.clone()).unwrap();
        let out = apply_degradation_channel(&incoherent, &ch).unwrap();
        assert!(off_block_magnitude(&out, &cg).unwrap() <= 1e-10);
    }
}

#[test]
fn purity_monotone_on_scan_prefix() {
    // η decreases monotonically along the ε grid up to 0.26
    let rho = sample_state_4d();
    let cg = sample_cg_4d();
    let grid: Vec<f64> = (0..=101).map(|i| i as f64 * 0.005).collect();
    let rows = epsilon_scan(&rho, &cg, &grid).unwrap();
    let mut prev = f64::INFINITY;
    for row in rows.iter().filter(|r| r.epsilon <= 0.26 + 1e-12) {
        assert!(
            row.eta <= prev + 1e-12,
            "eta increased at eps {}: {} -> {}",
            row.epsilon,
            prev,
            row.eta
        );
        prev = row.eta;
    }
}
