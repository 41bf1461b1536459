mod common;

use ckn::classifier::{
    admissible_set, admissible_set_radial, classify, classify_radial, multiweight_classify, theta_set, Decision,
    MultiWeightSpec, Reason, SharedExponents, Singularity, ThetaSet, WeightTriple,
};
use ckn::exact::{derive, kelvin_params, Params, Rational};
use common::{params_full, space_full};
use proptest::prelude::*;

fn line_equivalent(p: &Params) -> Params {
    let shift = Rational::from(p.n) - Rational::one();
    Params { n: 1, a: &p.a + &shift, b: &p.b + &shift, c: &p.c + &shift, ..p.clone() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn exponent_identity(p in params_full()) {
        let d = derive(&p);
        if let Some(t) = d.theta_c {
            let lhs = (&p.c + p.dim()) / &p.r;
            let rhs = &t * &d.slope_b + (Rational::one() - &t) * &d.slope_a;
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn kelvin_preserves_verdict(p in params_full()) {
        let k = kelvin_params(&p);
        let v = classify(&p).unwrap();
        let w = classify(&k).unwrap();
        prop_assert_eq!(v.decision, w.decision);
        prop_assert_eq!(v.case, w.case);
        prop_assert_eq!(v.reason, w.reason);
        prop_assert_eq!(derive(&k).theta_c, v.derived.theta_c.clone());
        let n2 = Rational::from(2 * p.n);
        prop_assert_eq!(derive(&k).c0, -&n2 - &v.derived.c0);
        prop_assert_eq!(derive(&k).c1, -&n2 - &v.derived.c1);
        prop_assert_eq!(derive(&k).slope_a, -v.derived.slope_a.clone());
    }

    #[test]
    fn verdicts_and_necessity_conditions_agree(p in params_full()) {
        let v = classify(&p).unwrap();
        let applicable: Vec<Reason> = Reason::ALL.into_iter().filter(|r| r.applies(&p)).collect();
        if v.embeds() {
            prop_assert!(applicable.is_empty(), "embedding with necessity failure {:?}", applicable);
        } else {
            prop_assert_eq!(v.reason, applicable.first().copied());
        }
    }

    #[test]
    fn radial_dominates_full(p in params_full()) {
        if classify(&p).unwrap().embeds() {
            prop_assert!(classify_radial(&p).unwrap().embeds());
        }
    }

    #[test]
    fn radial_is_the_line_problem(p in params_full()) {
        let rad = classify_radial(&p).unwrap();
        let line = classify(&line_equivalent(&p)).unwrap();
        prop_assert_eq!(rad.decision, line.decision);
    }

    #[test]
    fn admissible_set_matches_classify(s in space_full(), offsets in proptest::collection::vec(-40i64..40, 12)) {
        let set = admissible_set(&s).unwrap();
        let mut cs = vec![s.c0(), s.c1(), -s.dim(), s.a.clone()];
        cs.extend(offsets.iter().map(|k| s.c0() + Rational::new(*k, 8)));
        for c in cs {
            let e = classify(&s.with_c(c.clone())).unwrap().embeds();
            prop_assert_eq!(set.contains(&c), e, "c = {}", c);
        }
        if let Some(i) = &set.interval {
            prop_assert!(i.lo <= i.hi);
            for x in &set.isolated_points {
                prop_assert!(x < &i.lo || x > &i.hi);
            }
        }
    }

    #[test]
    fn radial_set_matches_radial_classify(s in space_full(), offsets in proptest::collection::vec(-40i64..40, 8)) {
        let set = admissible_set_radial(&s).unwrap();
        let mut cs = vec![s.c0(), s.c1(), -s.dim()];
        cs.extend(offsets.iter().map(|k| s.c1() + Rational::new(*k, 8)));
        for c in cs {
            let e = classify_radial(&s.with_c(c.clone())).unwrap().embeds();
            prop_assert_eq!(set.contains(&c), e);
        }
    }

    #[test]
    fn theta_set_consistent(p in params_full()) {
        let v = classify(&p).unwrap();
        if !v.embeds() {
            prop_assert!(theta_set(&p).is_err());
            return Ok(());
        }
        let t = theta_set(&p).unwrap();
        match &t {
            ThetaSet::Single { theta } => {
                if let Some(tc) = &v.derived.theta_c {
                    prop_assert_eq!(theta, tc);
                }
                prop_assert!(*theta >= Rational::zero() && *theta <= Rational::one());
            }
            ThetaSet::ClosedRange { lo, hi } => {
                prop_assert!(v.derived.theta_c.is_none());
                prop_assert!(Rational::zero() <= *lo && lo <= hi && *hi <= Rational::one());
            }
            ThetaSet::Empty => prop_assert!(p.n >= 2),
            ThetaSet::TrivialZero => prop_assert_eq!(&p.r, &p.q),
        }
    }

    #[test]
    fn single_site_multiweight_is_classify(p in params_full()) {
        let spec = MultiWeightSpec {
            shared: SharedExponents { n: p.n, p: p.p.clone(), q: p.q.clone(), r: p.r.clone() },
            singularities: vec![Singularity { location: 0, a: p.a.clone(), b: p.b.clone(), c: p.c.clone() }],
            infinity: WeightTriple { a: p.a.clone(), b: p.b.clone(), c: p.c.clone() },
        };
        let mw = multiweight_classify(&spec).unwrap();
        let v = classify(&p).unwrap();
        prop_assert_eq!(mw.decision, v.decision);
        if mw.decision == Decision::DoesNotEmbed {
            prop_assert_eq!(mw.reason, v.reason);
        }
    }
}

#[test]
fn theta_of_kelvin_image_is_unchanged_on_fixture() {
    let p = Params::parse(3, "2", "2", "2", "0", "0", "-1");
    assert_eq!(derive(&kelvin_params(&p)).theta_c, derive(&p).theta_c);
}
