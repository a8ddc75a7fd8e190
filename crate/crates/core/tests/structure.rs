use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lvint::analyzer::{classify, lie_symmetry_from_report, verify_lie_symmetry};
use lvint::family::{sample_params, satisfied_cases, SampleMode};
use lvint::harness::run_sweep;
use lvint::normal_form::normal_form;

#[test]
fn lie_symmetry_exists_on_every_case() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 1..=6 {
        for _ in 0..2 {
            let params = sample_params(SampleMode::OnCase(case), &mut rng);
            let f = params.field();
            let report = normal_form(&f, 7).unwrap();
            assert!(report.is_trivial(), "case {case}: {params}");
            let sym = lie_symmetry_from_report(&report).unwrap();
            assert!(verify_lie_symmetry(&f, &sym.g, &sym.nu, 7), "case {case}: {params}");
        }
    }
}

#[test]
fn axis_swap_preserves_verdict() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let modes = [SampleMode::OnCase(1), SampleMode::OnCase(2), SampleMode::Generic];
    for mode in modes {
        let params = sample_params(mode, &mut rng);
        let swapped = params.swap();
        assert_eq!(swapped.field(), params.field().swap_axes());
        let a = classify(&params.field(), 7).unwrap();
        let b = classify(&swapped.field(), 7).unwrap();
        assert_eq!(a.integrable, b.integrable, "{params}");
        assert_eq!(satisfied_cases(&params).is_empty(), satisfied_cases(&swapped).is_empty());
    }
}

#[test]
fn sweep_reports_are_deterministic() {
    let a = run_sweep(5, 4, SampleMode::Generic, 6).unwrap();
    let b = run_sweep(5, 4, SampleMode::Generic, 6).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_text(), b.to_text());
    assert_ne!(a.to_json(), run_sweep(6, 4, SampleMode::Generic, 6).unwrap().to_json());
}
