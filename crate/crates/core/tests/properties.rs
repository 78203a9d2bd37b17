mod common;

use active_flux_swe::averages::InterfaceFlux;
use active_flux_swe::bottom::BottomCell;
use active_flux_swe::reconstruction::{parabola_goes_negative, ReconOptions};
use active_flux_swe::state::ConservedPair;
use common::*;
use proptest::prelude::*;

fn height(p_dry: u32) -> impl Strategy<Value = f64> {
    prop_oneof![p_dry => Just(0.0), (100 - p_dry) => (-5.0..0.7f64).prop_map(|e| 10f64.powf(e))]
}

fn pair(h: f64, v: f64) -> ConservedPair {
    ConservedPair::new(h, if h > 0.0 { h * v } else { 0.0 }).unwrap()
}

prop_compose! {
    fn recon_input()(
        hbar in (-6.0..0.5f64).prop_map(|e| 10f64.powf(e)),
        hl in height(20),
        hr in height(20),
        v in prop::array::uniform3(-3.0..3.0f64),
        b in prop::array::uniform3(-0.5..0.5f64),
        dx in (-3.0..1.0f64).prop_map(|e| 10f64.powf(e)),
        limiting in any::<bool>(),
        positivity in prop::bool::weighted(0.85),
    ) -> ReconInput {
        ReconInput {
            avg: pair(hbar, v[0]),
            left: pair(hl, v[1]),
            right: pair(hr, v[2]),
            bottom: BottomCell::from_samples(b[0], b[1], b[2], dx),
            opts: ReconOptions { limiting, positivity },
        }
    }
}

prop_compose! {
    fn lake_cell()(
        b in prop::array::uniform3(-1.0..1.0f64),
        dx in (-3.0..1.0f64).prop_map(|e| 10f64.powf(e)),
        depth in (-3.0..0.5f64).prop_map(|e| 10f64.powf(e)),
    ) -> LakeCell {
        let bottom = BottomCell::from_samples(b[0], b[1], b[2], dx);
        LakeCell { level: bottom.max_in_cell() + depth, bottom }
    }
}

prop_compose! {
    fn drain_problem()(n in 2usize..60)(
        avg_h in prop::collection::vec(prop_oneof![3 => Just(0.0), 7 => (-8.0..0.0f64).prop_map(|e| 10f64.powf(e))], n),
        fh in prop::collection::vec(-1.0..1.0f64, n + 1),
        fm in prop::collection::vec(-1.0..1.0f64, n + 1),
        dt in (-3.0..-1.0f64).prop_map(|e| 10f64.powf(e)),
        periodic in any::<bool>(),
    ) -> DrainProblem {
        let mut fluxes: Vec<InterfaceFlux> =
            fh.iter().zip(&fm).map(|(&fh, &fm)| InterfaceFlux { fh, fm, drain_scale: 1.0 }).collect();
        if periodic {
            let last = fluxes.len() - 1;
            fluxes[last] = fluxes[0];
        }
        DrainProblem { avg_h, fluxes, dt, dx: 0.1, periodic }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn reconstruction_reproduces_cell_averages(input in recon_input()) {
        let (eh, em) = input.conservation_error();
        prop_assert!(eh <= 1e-11 && em <= 1e-11, "{:?}: {eh:e} {em:e} ({})", input, input.build().tag().name());
    }

    #[test]
    fn negativity_predicate_matches_sampling(hbar in 1e-3..10.0f64, hl in 1e-3..10.0f64, hr in 1e-3..10.0f64) {
        let min = parabola_min_sampled(hbar, hl, hr);
        prop_assume!(min.abs() > 1e-12 * hbar.max(hl).max(hr));
        prop_assert_eq!(parabola_goes_negative(hbar, hl, hr), min < 0.0, "sampled minimum {:e}", min);
    }

    #[test]
    fn lake_source_matches_closed_form(lake in lake_cell()) {
        let (solver, exact, scale) = lake.sources(9.812);
        prop_assert!((solver - exact).abs() <= 1e-12 * scale.max(exact.abs()), "{solver:e} vs {exact:e}");
    }

    #[test]
    fn draining_leaves_no_negative_trial_average(problem in drain_problem()) {
        if let Err(e) = problem.check() {
            prop_assert!(false, "{}", e);
        }
    }
}

#[test]
fn draining_handles_a_single_emptying_cell() {
    // cell 1 loses mass through both sides and must stop at zero
    let problem = DrainProblem {
        avg_h: vec![1.0, 1e-3, 1.0],
        fluxes: vec![
            InterfaceFlux::ZERO,
            InterfaceFlux { fh: -1.0, fm: 0.0, drain_scale: 1.0 },
            InterfaceFlux { fh: 1.0, fm: 0.0, drain_scale: 1.0 },
            InterfaceFlux::ZERO,
        ],
        dt: 0.01,
        dx: 0.1,
        periodic: false,
    };
    assert_eq!(problem.check(), Ok(1));
}

#[test]
fn oracles_agree_on_known_values() {
    // a parabola touching zero at its vertex
    assert!(parabola_min_sampled(1.0 / 3.0, 1.0, 1.0).abs() < 1e-12);
    assert!((integrate(&|x: f64| x.sqrt(), 0.0, 1.0, 1e-14) - 2.0 / 3.0).abs() < 1e-12);
    assert!((fitted_order(&[10, 20, 40], &[1.0, 0.25, 0.0625]) - 2.0).abs() < 1e-12);
}
