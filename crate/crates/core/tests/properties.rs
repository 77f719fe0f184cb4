use num_complex::Complex64 as C64;
use proptest::prelude::*;

use qrepeater::effective::{
    build_effective_hamiltonian, pair_index, pair_propagator, pair_propagator_by_expm, ComplexRate, ModelParams,
    PairMatrix,
};
use qrepeater::measures::{negativity_sector, pure_state_negativity, weight_ratio};
use qrepeater::protocol::{run_protocol, stage_two_measure, stage_two_state, SwapCase};
use qrepeater::qutrit::{
    embed_levels, project_levels, reduced_density, tensor_product, DensityMatrix, Level, QutritRegister,
};

fn complex() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn register(atoms: usize) -> impl Strategy<Value = QutritRegister> {
    prop::collection::vec(complex(), 3usize.pow(atoms as u32))
        .prop_map(move |amps| QutritRegister::from_amplitudes(atoms, amps).unwrap())
}

fn any_register() -> impl Strategy<Value = QutritRegister> {
    (2usize..=4).prop_flat_map(register)
}

fn level() -> impl Strategy<Value = Level> {
    prop::sample::select(Level::ALL.to_vec())
}

fn rate() -> impl Strategy<Value = ComplexRate> {
    (-2.0..2.0f64, -0.5..0.5f64).prop_map(|(re, im)| ComplexRate::new(re, im))
}

fn params() -> impl Strategy<Value = ModelParams> {
    (0.5..2.0f64, 0.5..2.0f64, 1.0..10.0f64, 1.0..10.0f64, 0.0..12.0f64, 0.0..12.0f64)
        .prop_map(|(a, b, c, d, e, f)| ModelParams::new(a, b, c, d, e, f).unwrap())
}

fn max_diff(a: &PairMatrix, b: &PairMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// All level tuples of length `n`.
fn outcomes(n: usize) -> Vec<Vec<Level>> {
    (0..3usize.pow(n as u32))
        .map(|mut k| {
            let mut v = vec![Level::G; n];
            for slot in v.iter_mut().rev() {
                *slot = Level::from_index(k % 3).unwrap();
                k /= 3;
            }
            v
        })
        .collect()
}

fn g_to_f(x: Level) -> Level {
    match x {
        Level::G => Level::F,
        Level::F => Level::G,
        Level::E => Level::E,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_weights_sum_to_norm(s in any_register(), pick in 0usize..3) {
        let n = s.num_atoms();
        let positions: Vec<usize> = (0..n).filter(|p| p % 3 != pick % 3 || *p == n - 1).take(n - 1).collect();
        let total: f64 = outcomes(positions.len())
            .iter()
            .map(|o| project_levels(&s, &positions, o).unwrap().1)
            .sum();
        prop_assert!((total - s.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn projection_is_idempotent(s in register(3), x in level(), y in level()) {
        let (residual, w) = project_levels(&s, &[0, 2], &[x, y]).unwrap();
        let back = embed_levels(&residual, &[0, 2], &[x, y]).unwrap();
        let (again, w2) = project_levels(&back, &[0, 2], &[x, y]).unwrap();
        prop_assert!((w - w2).abs() < 1e-12);
        for (a, b) in residual.amplitudes().iter().zip(again.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn tensor_product_is_associative(a in register(1), b in register(2), c in register(1)) {
        let left = tensor_product(&tensor_product(&a, &b).unwrap(), &c).unwrap();
        let right = tensor_product(&a, &tensor_product(&b, &c).unwrap()).unwrap();
        for (x, y) in left.amplitudes().iter().zip(right.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn reduced_density_matches_projections(s in register(3)) {
        let all = reduced_density(&s, &[0, 1, 2]).unwrap();
        let proj = DensityMatrix::projector(&s);
        prop_assert!((all.matrix() - proj.matrix()).iter().all(|z| z.norm() < 1e-12));

        // tracing atom 1 equals the sum of residual projectors over its outcomes
        let kept = reduced_density(&s, &[0, 2]).unwrap();
        let mut sum = nalgebra::DMatrix::<C64>::zeros(9, 9);
        for x in Level::ALL {
            let (r, _) = project_levels(&s, &[1], &[x]).unwrap();
            sum += DensityMatrix::projector(&r).matrix();
        }
        prop_assert!((kept.matrix() - sum).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn lossless_propagator_is_unitary(a in 0.05..2.0f64, b in 0.05..2.0f64, t in 0.0..100.0f64) {
        let u = pair_propagator(ComplexRate::new(a, 0.0), ComplexRate::new(b, 0.0), t).unwrap();
        let m = u.matrix();
        prop_assert!(max_diff(&(m.adjoint() * m), &PairMatrix::identity()) < 1e-12);
    }

    #[test]
    fn propagator_semigroup(l1 in rate(), l2 in rate(), t1 in -5.0..5.0f64, t2 in -5.0..5.0f64) {
        let a = pair_propagator(l1, l2, t1).unwrap();
        let b = pair_propagator(l1, l2, t2).unwrap();
        let ab = pair_propagator(l1, l2, t1 + t2).unwrap();
        let scale = ab.matrix().iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(max_diff(a.compose(&b).matrix(), ab.matrix()) < 1e-10 * scale);
    }

    #[test]
    fn propagator_generator(l1 in rate(), l2 in rate()) {
        let h = 1e-4;
        let plus = pair_propagator(l1, l2, h).unwrap();
        let minus = pair_propagator(l1, l2, -h).unwrap();
        let fd = (plus.matrix() - minus.matrix()) / C64::new(2.0 * h, 0.0);
        let want = build_effective_hamiltonian(l1, l2) * C64::new(0.0, -1.0);
        prop_assert!(max_diff(&fd, &want) < 1e-6);
    }

    #[test]
    fn sector_relabeling_swaps_rates(l1 in rate(), l2 in rate(), t in -10.0..10.0f64) {
        let u = pair_propagator(l1, l2, t).unwrap();
        let v = pair_propagator(l2, l1, t).unwrap();
        for x in Level::ALL { for y in Level::ALL { for p in Level::ALL { for q in Level::ALL {
            let a = u.matrix()[(pair_index(x, y), pair_index(p, q))];
            let b = v.matrix()[(pair_index(g_to_f(x), g_to_f(y)), pair_index(g_to_f(p), g_to_f(q)))];
            prop_assert!((a - b).norm() < 1e-12);
        }}}}
    }

    #[test]
    fn closed_form_matches_matrix_exponential(l1 in rate(), l2 in rate(), t in -10.0..10.0f64) {
        prop_assume!((l1.value().norm() + l2.value().norm()) * t.abs() <= 20.0);
        let a = pair_propagator(l1, l2, t).unwrap();
        let b = pair_propagator_by_expm(l1, l2, t).unwrap();
        let scale = a.matrix().iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(max_diff(a.matrix(), b.matrix()) < 1e-10 * scale);
    }

    #[test]
    fn sector_negativity_bounds(a in complex(), b in complex()) {
        prop_assume!(a.norm_sqr() + b.norm_sqr() > 1e-6);
        let n = negativity_sector(a, b).unwrap();
        prop_assert!((0.0..=0.5 + 1e-15).contains(&n));
        let gap = 0.5 - n;
        let diff = (a.norm() - b.norm()).abs();
        // 1/2 - |a||b|/(|a|²+|b|²) = (|a|-|b|)² / (2(|a|²+|b|²))
        prop_assert!((gap - diff * diff / (2.0 * (a.norm_sqr() + b.norm_sqr()))).abs() < 1e-12);
    }

    #[test]
    fn measures_are_scale_invariant(a in complex(), b in complex(), z in complex()) {
        prop_assume!(a.norm_sqr() + b.norm_sqr() > 1e-6 && z.norm() > 1e-3);
        prop_assert!((negativity_sector(a, b).unwrap() - negativity_sector(a * z, b * z).unwrap()).abs() < 1e-12);
        let r1 = weight_ratio(&[a], &[a, b]).unwrap();
        let r2 = weight_ratio(&[a * z], &[a * z, b * z]).unwrap();
        prop_assert!((r1 - r2).abs() < 1e-12);
    }

    #[test]
    fn branch_set_scaling(p in params(), k in 1u8..=8, t in 0.0..6.0f64, tau in 0.0..15.0f64, z in complex()) {
        prop_assume!(z.norm() > 1e-3);
        let case = SwapCase::numbered(k).unwrap();
        let set = stage_two_state(case, &p, t, tau).unwrap();
        let scaled = set.scaled(z);
        for o in case.outcomes() {
            let a = stage_two_measure(&set, o).unwrap();
            let b = stage_two_measure(&scaled, o).unwrap();
            prop_assert!((a.negativity - b.negativity).abs() < 1e-12);
            prop_assert!((a.success_probability - b.success_probability).abs() < 1e-12);
        }
    }

    #[test]
    fn success_probabilities_are_complete(p in params(), k in 1u8..=8, t in 0.0..6.0f64, tau in 0.0..15.0f64) {
        let case = SwapCase::numbered(k).unwrap();
        let set = stage_two_state(case, &p, t, tau).unwrap();
        let mut total = 0.0;
        for o in outcomes(2) {
            let o = (o[0], o[1]);
            if set.entries().iter().any(|b| (b.ket[1], b.ket[2]) == o) {
                if let Ok(fp) = stage_two_measure(&set, o) {
                    total += fp.success_probability;
                }
            }
        }
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negativity_depends_on_one_sector(p in params(), k in 1u8..=8, t in 0.0..6.0f64, tau in 0.0..15.0f64,
                                        dg in 0.1..1.0f64, dd in 0.5..3.0f64, dl in 0.0..3.0f64) {
        let mut q = p;
        if k <= 4 {
            q.coupling_b += dg;
            q.detuning_b += dd;
            q.dissipation_b += dl;
        } else {
            q.coupling_a += dg;
            q.detuning_a += dd;
            q.dissipation_a += dl;
        }
        let case = SwapCase::numbered(k).unwrap();
        for o in case.outcomes() {
            let a = run_protocol(&p, t, tau, case, o).unwrap();
            let b = run_protocol(&q, t, tau, case, o).unwrap();
            prop_assert!((a.negativity - b.negativity).abs() < 1e-12);
        }
    }

    #[test]
    fn protocol_outputs_agree_with_partial_transpose(p in params(), k in 1u8..=8, primed in 0usize..2,
                                                     t in 0.0..6.0f64, tau in 0.0..15.0f64) {
        let case = SwapCase::numbered(k).unwrap();
        let fp = run_protocol(&p, t, tau, case, case.outcomes()[primed]).unwrap();
        prop_assert!((0.0..=0.5).contains(&fp.negativity));
        prop_assert!((0.0..=1.0).contains(&fp.success_probability));
        prop_assert!((fp.negativity - pure_state_negativity(&fp.state).unwrap()).abs() < 1e-10);
    }
}
