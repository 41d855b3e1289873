mod common;

use common::finsler::{certified_instances, check_instance};
use kropina::chart::ChartConfig;

#[test]
fn pipeline_identities_hold_on_certified_instances() {
    let cfg = ChartConfig { sample_count: 6, ..Default::default() };
    for c in certified_instances() {
        let e = check_instance(&c, &cfg);
        assert_eq!(e.samples, 6, "{}", c.label);
        assert!(e.euler < 1e-10, "{}: euler {e:?}", c.label);
        assert!(e.fundamental_homogeneity < 1e-10, "{}: {e:?}", c.label);
        assert!(e.spray_homogeneity < 1e-10, "{}: {e:?}", c.label);
        assert!(e.jet_vs_fd < 1e-5, "{}: {e:?}", c.label);
        assert!(e.min_eigenvalue > 0.0, "{}: {e:?}", c.label);
    }
}

#[test]
fn other_seeds_and_radii() {
    let c = &certified_instances()[8];
    for (seed, radius) in [(1, 0.1), (7, 0.3), (42, 0.5)] {
        let cfg = ChartConfig { sample_count: 4, rng_seed: seed, radius, ..Default::default() };
        let e = check_instance(c, &cfg);
        assert!(e.jet_vs_fd < 1e-5 && e.euler < 1e-10 && e.min_eigenvalue > 0.0, "seed {seed}: {e:?}");
    }
}
