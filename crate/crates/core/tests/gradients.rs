//! Analytic gradients against central finite differences.

mod common;

use common::grad::{discriminator_error, generator_error, mlp_error, output_activations, INSTANCES, TOL};

#[test]
fn discriminator_gradients_match_finite_differences() {
    for s in 0..INSTANCES {
        let e = discriminator_error(s);
        assert!(e < TOL, "instance {s}: relative error {e:e}");
    }
}

#[test]
fn generator_gradients_through_discriminator_match_finite_differences() {
    for s in 0..INSTANCES {
        let e = generator_error(s);
        assert!(e < TOL, "instance {s}: relative error {e:e}");
    }
}

#[test]
fn dense_layer_gradients_match_finite_differences() {
    for (a, act) in output_activations().into_iter().enumerate() {
        for s in 0..INSTANCES {
            let e = mlp_error(100 * a as u64 + s, act.clone());
            assert!(e < TOL, "{act:?} instance {s}: relative error {e:e}");
        }
    }
}

