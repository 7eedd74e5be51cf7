use fbl_core::analytics::*;
use fbl_core::estimation::{run_graph_experiment, run_limit_experiment, sample_roots};
use fbl_core::generators::ModelConfig;
use fbl_core::law::OffspringLaw;
use fbl_core::limit::TreeSampler;

#[test]
fn her_series_matches_convolution() {
    for &l in &[0.25, 1.0, 4.0] {
        let a = her_significance(l, 1e-12).unwrap();
        let law = OffspringLaw::Poisson { mean: l };
        let b = conjecture_probability(&law, 1e-12).unwrap();
        assert!((a.value - b.value).abs() < 1e-9, "{l}: {} vs {}", a.value, b.value);
        for &x in &[0.5, 2.0, 5.0] {
            let s = her_tail_series(l, x, 1e-12).unwrap();
            let g = gw_tail_exact(&law, &law, x, 1e-12).unwrap();
            assert!((s.value - g.value).abs() < 1e-9);
        }
    }
}

#[test]
fn her_tree_mc_matches_series_and_moments() {
    let l = 2.0;
    let config = ModelConfig::Her { lambda: l };
    let st = run_limit_experiment(&config, 1_000_000, 4).unwrap();
    let exact = her_significance(l, 1e-12).unwrap().value;
    assert!((st.significance - exact).abs() < 4.0 * st.se_significance);
    let m = her_moments(l).unwrap();
    assert!((st.mean - m.m1).abs() < 4.0 * st.se_mean);
    assert!((st.second_moment - m.m2).abs() < 4.0 * st.se_second_moment);
}

#[test]
fn her_graph_mean_approaches_limit() {
    let st = run_graph_experiment(&ModelConfig::Her { lambda: 2.0 }, 50_000, 2, 8).unwrap();
    assert!((st.mean - her_moments(2.0).unwrap().m1).abs() < 0.03);
}

#[test]
fn ier_moments_match_tree_mc() {
    let f = fbl_core::kernel::KernelFunction::two_block(1.0, 2.0, 0.5).unwrap();
    let l = 1.3;
    let m = ier_moments(l, &f, 1 << 14).unwrap();
    let st = fbl_core::estimation::run_sampler_experiment(
        &TreeSampler::inhomogeneous(l, &f).unwrap(),
        1_000_000,
        2,
    )
    .unwrap();
    assert!((st.mean - m.m1).abs() < 4.0 * st.se_mean, "{} vs {}", st.mean, m.m1);
    assert!((st.second_moment - m.m2).abs() < 4.0 * st.se_second_moment);
}

#[test]
fn cm_two_point_tree_matches_closed_form() {
    let law = OffspringLaw::TwoPoint { low: 2, high: 6, p_low: 0.4 };
    let config = ModelConfig::Cm {
        degrees: fbl_core::generators::DegreeSource::Law(law.clone()),
    };
    let st = run_limit_experiment(&config, 1_000_000, 6).unwrap();
    let m = cm_moments(&law).unwrap();
    assert!((st.mean - m.m1).abs() < 4.0 * st.se_mean);
    assert!((st.second_moment - m.m2).abs() < 4.0 * st.se_second_moment);
    let exact = bimodal_significance(0.4, 2, 6).unwrap();
    assert!((st.significance - exact).abs() < 4.0 * st.se_significance);
}

#[test]
fn pam_root_degree_law() {
    let delta = 0.5;
    let n = 1_000_000u64;
    let roots = sample_roots(&TreeSampler::polya(delta).unwrap(), n, 12);
    for k in 1..=10u64 {
        let f = roots.iter().filter(|r| r.0 == k).count() as f64 / n as f64;
        let p = pam_root_pmf(delta, k).unwrap();
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((f - p).abs() < 4.0 * se, "k={k}: {f} vs {p}");
    }
}

#[test]
fn pam_tree_mean_in_enclosure() {
    let delta = 3.0;
    let st = run_limit_experiment(&ModelConfig::Pam { delta }, 1_000_000, 13).unwrap();
    let MeanEnclosure::Finite(i) = pam_mean_interval(delta, 1e-12).unwrap() else {
        panic!("finite for positive delta")
    };
    assert!(i.widen(4.0 * st.se_mean).contains(st.mean), "{} not in {i:?}", st.mean);
}
