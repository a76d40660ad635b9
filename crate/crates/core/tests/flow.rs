mod common;

use common::*;
use ruled_imcf::flow::{
    evolve, grid_soliton_residual, homothety_deviation, richardson_ratio, Boundary, FlowOptions, SampleGrid, Stencil,
};
use ruled_imcf::Error;

fn grid(case: &Case, ns: usize) -> SampleGrid {
    SampleGrid::from_surface(&case.surface, iv(-1.0, 1.0).linspace(ns), iv(-1.0, 1.0).linspace(5)).unwrap()
}

#[test]
fn grid_residual_small_on_solitons() {
    for case in [circle(), hyperbola(), spiral_c4()] {
        let r = grid_soliton_residual(&grid(&case, 41), case.spec.c, Stencil::Central4, 1e-9).unwrap();
        assert!(r < 1e-5, "{}: {r:.2e}", case.name);
    }
}

#[test]
fn deviation_halves_with_step() {
    let case = circle();
    let g0 = grid(&case, 21);
    let dev = |dt: f64, steps: usize| {
        let traj = evolve(&g0, &FlowOptions::new(dt, steps, Boundary::Homothety { exponent: 2.0 })).unwrap();
        homothety_deviation(&traj, &case.surface, 2.0, Stencil::Central4, 1e-9).unwrap().terminal_deviation()
    };
    let ratio = richardson_ratio(dev(2e-3, 25), dev(1e-3, 50));
    assert!((1.7..=2.3).contains(&ratio), "{ratio}");
}

#[test]
fn frozen_boundary_keeps_ring() {
    let case = circle();
    let g0 = grid(&case, 21);
    let traj = evolve(&g0, &FlowOptions::new(1e-3, 10, Boundary::Frozen)).unwrap();
    let end = traj.last().unwrap();
    assert_eq!(end.at(0, 0), g0.at(0, 0));
    assert_eq!(end.at(20, 4), g0.at(20, 4));
    assert!((end.time - 0.01).abs() < 1e-15);
}

#[test]
fn oversized_step_is_rejected() {
    let case = circle();
    let e = evolve(&grid(&case, 21), &FlowOptions::new(1.0, 1, Boundary::Frozen)).unwrap_err();
    assert!(matches!(e, Error::StepTooLarge { .. }), "{e}");
}
