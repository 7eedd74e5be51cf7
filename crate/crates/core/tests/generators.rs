use fbl_core::generators::{gen_cm, sample_degree_sequence, ModelConfig};
use fbl_core::law::OffspringLaw;
use fbl_core::rng::seeded;

#[test]
fn her_mean_degree() {
    let n = 100_000;
    let g = ModelConfig::Her { lambda: 3.0 }.generate(n, &mut seeded(1)).unwrap();
    let mean = 2.0 * g.edge_count() as f64 / n as f64;
    assert!((mean - 3.0).abs() < 0.05, "{mean}");
    assert!(g.is_simple());
}

#[test]
fn cm_preserves_degrees() {
    let mut rng = seeded(2);
    let seq = sample_degree_sequence(&OffspringLaw::Zeta { tau: 3.5 }, 5000, &mut rng).unwrap();
    let g = gen_cm(&seq.degrees, &mut rng).unwrap();
    assert_eq!(g.degrees(), &seq.degrees[..]);
    assert!(gen_cm(&[1, 2], &mut rng).is_err());
}

#[test]
fn pam_degree_one_fraction() {
    let n = 100_000;
    let g = ModelConfig::Pam { delta: 0.0 }.generate(n, &mut seeded(3)).unwrap();
    let ones = g.degrees().iter().filter(|&&d| d == 1).count() as f64 / n as f64;
    let se = (2.0 / 9.0 / n as f64).sqrt();
    assert!((ones - 2.0 / 3.0).abs() < 4.0 * se, "{ones}");
    assert_eq!(g.edge_count(), n as u64);
}

#[test]
fn ier_constant_kernel_degree() {
    let n = 50_000;
    let f = fbl_core::kernel::KernelFunction::constant(1.5).unwrap();
    let g = ModelConfig::Ier { lambda: 1.0, kernel: f }.generate(n, &mut seeded(4)).unwrap();
    let mean = 2.0 * g.edge_count() as f64 / n as f64;
    assert!((mean - 2.25).abs() < 0.05, "{mean}");
}
