mod common;

use common::{arb_space, squared};
use fmetric::axioms::{check_axioms, DEFAULT_TOL};
use fmetric::chittenden::{phi_certificate, verify_uniform_regularity};
use fmetric::sweep::proof_step_violation;
use fmetric::{Evaluate, Generator, Witness};
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn catalog_witness() -> impl Strategy<Value = Witness> {
    (prop::sample::select(Generator::CATALOG.to_vec()), 0.0f64..2.0).prop_map(|(g, a)| Witness::new(g, a).unwrap())
}

#[test]
fn closed_form_certificates() {
    // log: delta = eps * exp(-alpha); neg_inverse: delta = 1 / (1/eps + alpha)
    for alpha in [0.0, 0.5, 3f64.ln()] {
        let eps = [1e-3, 0.1, 1.0, 10.0];
        let c = phi_certificate(&Witness::new(Generator::Log, alpha).unwrap(), &eps, TOL).unwrap();
        for e in &c.entries {
            let exact = e.epsilon * (-alpha).exp();
            assert!((e.delta - exact).abs() <= 10.0 * TOL * exact);
            assert_eq!(e.phi, e.delta / 2.0);
        }
        let c = phi_certificate(&Witness::new(Generator::NegInverse, alpha).unwrap(), &eps, TOL).unwrap();
        for e in &c.entries {
            let exact = 1.0 / (1.0 / e.epsilon + alpha);
            assert!((e.delta - exact).abs() <= 10.0 * TOL * exact);
        }
    }
}

#[test]
fn certificates_survive_extreme_epsilons() {
    let eps: Vec<f64> = (0..=48).map(|k| 10f64.powf(-6.0 + 0.25 * k as f64)).collect();
    for g in Generator::CATALOG {
        for alpha in [0.0, 1.0, 5.0] {
            let w = Witness::new(g, alpha).unwrap();
            let c = phi_certificate(&w, &eps, TOL).unwrap();
            for e in &c.entries {
                assert!(e.delta.is_finite() && e.delta > 0.0 && e.delta <= e.epsilon, "{g} {alpha} {e:?}");
                let level = g.eval(e.epsilon).unwrap() - alpha;
                assert!(g.eval(e.delta).unwrap() < level);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn phi_is_monotone_in_epsilon(w in catalog_witness(), mut eps in prop::collection::vec(1e-6f64..1e6, 2..8)) {
        eps.sort_by(f64::total_cmp);
        let c = phi_certificate(&w, &eps, TOL).unwrap();
        for pair in c.entries.windows(2) {
            prop_assert!(pair[0].phi <= pair[1].phi);
        }
    }

    #[test]
    fn certificate_is_sound_on_rescaled_spaces(
        base in arb_space(8, 0.1, 1.0),
        w in catalog_witness(),
        eps in prop::sample::select(vec![1e-3, 1e-1, 1.0, 10.0]),
        spread in 1.0f64..6.0,
    ) {
        let c = phi_certificate(&w, &[eps], TOL).unwrap();
        let phi = c.entries[0].phi;
        // smallest entry lands at phi/spread... so the premise fires on some pairs
        let min = base.dist().upper_pairs().map(|(_, _, v)| v).fold(f64::INFINITY, f64::min);
        let space = base.scaled(phi / (spread * min)).unwrap();
        prop_assume!(check_axioms(&space, &w, DEFAULT_TOL).unwrap().passed);
        let r = verify_uniform_regularity(&space, &w, &c).unwrap();
        prop_assert!(r.passed, "{:?}", r.violations.first());
        prop_assert!(r.premises_fired > 0 || space.len() == 2);
        prop_assert!(proof_step_violation(&space, &w, DEFAULT_TOL).unwrap().is_none());
    }
}

#[test]
fn squared_space_scaled_down() {
    let w = Witness::new(Generator::Log, 3f64.ln()).unwrap();
    let c = phi_certificate(&w, &[1.0], TOL).unwrap();
    let s = squared(4).scaled(0.01).unwrap();
    let r = verify_uniform_regularity(&s, &w, &c).unwrap();
    assert!(r.passed && r.premises_fired > 0);
    // f(D(0,2)) = ln 0.04 <= ln(0.01 + 0.01) + ln 3
    assert!(s.d(0, 2) <= 3.0 * (s.d(0, 1) + s.d(1, 2)) + 1e-15);
}
