//! Cross-route consistency over the full study grid: the generic tilting
//! quadrature must agree with every family-specific fast path.

use ginibias::{expected_ghat, expected_ghat_generic, DistributionModel, QuadratureSettings};

#[test]
fn generic_quadrature_matches_fast_paths_on_full_grid() {
    let settings = QuadratureSettings::default();
    let ns = [2usize, 3, 25, 50, 75, 100];
    let mut models = Vec::new();
    for rate in [0.5, 1.0, 2.0, 5.0, 10.0] {
        models.push(DistributionModel::poisson(rate).unwrap());
    }
    for p in [0.1, 0.2, 0.4, 0.6, 0.8] {
        models.push(DistributionModel::geometric(p).unwrap());
    }
    let mut worst = 0.0f64;
    for model in &models {
        for n in ns {
            let generic = expected_ghat_generic(model, n, &settings).unwrap().value;
            let fast = expected_ghat(model, n, &settings).unwrap().value;
            let diff = (generic - fast).abs();
            worst = worst.max(diff);
            assert!(
                diff <= 1e-8,
                "{model}, n={n}: generic {generic:.12} vs fast path {fast:.12}"
            );
        }
    }
    assert!(worst > 0.0, "routes are suspiciously identical");
}
