use discmono::coxeter::{CoxeterDiagram, GroupType};
use discmono::invariants::discriminant_in_invariants;
use discmono::monodromy::{MonodromyClass, RotationNumber};
use discmono::recursion::*;

const DIAGRAMS: &[&str] = &[
    "A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "F4", "H3", "I2(3)", "I2(4)", "I2(5)", "I2(6)", "I2(7)", "I2(8)",
];

fn diagram(s: &str) -> CoxeterDiagram {
    CoxeterDiagram::parse(s).unwrap()
}

#[test]
fn dihedral_classes_match_brieskorn() {
    for m in 3..=8u64 {
        let d = diagram(&format!("I2({m})"));
        let ours = local_class_m(&d).unwrap().zeta().unwrap();
        let oracle = brieskorn_oracle(m, 2).zeta().unwrap();
        assert_eq!(ours, oracle, "I2({m})");
    }
    assert_eq!(
        local_class_m(&diagram("A2")).unwrap().zeta().unwrap().to_string(),
        "(1-T^6)/((1-T^2)(1-T^3))"
    );
    assert_eq!(
        local_class_m(&diagram("B2")).unwrap().zeta().unwrap().to_string(),
        "(1-T^4)/(1-T^2)"
    );
}

#[test]
fn resummation_gives_degree_side() {
    let cache = DiagramClassCache::new();
    for s in DIAGRAMS {
        let check = cache.degree_identity(&diagram(s)).unwrap();
        assert!(check.holds(), "{s}: {}", check.difference());
    }
}

#[test]
fn global_identities_hold() {
    let cache = DiagramClassCache::new();
    for s in DIAGRAMS {
        let d = diagram(s);
        for check in [cache.check_conn(&d), cache.check_compl(&d), cache.check_otherform(&d)] {
            let check = check.unwrap();
            assert!(check.holds(), "{s} {}: {}", check.identity, check.difference());
        }
    }
}

#[test]
fn ab2_for_small_characters() {
    for s in DIAGRAMS {
        let d = diagram(s);
        for k in 1..=12u64 {
            for a in 0..k as i64 {
                assert!(check_ab2(&d, RotationNumber::new(a, k)).unwrap().holds(), "{s} {a}/{k}");
            }
        }
    }
}

#[test]
fn exactbar_parity_rule() {
    for s in DIAGRAMS {
        let d = diagram(s);
        let t: GroupType = s.parse().unwrap();
        let (n, big_n) = (t.rank(), t.num_reflections());
        let sign = if n % 2 == 1 { 1 } else { -1 };
        let expected = if (n + big_n) % 2 == 0 {
            MonodromyClass::v(1).scale(sign)
        } else {
            MonodromyClass::v_phi().scale(sign)
        };
        assert_eq!(exactbar_class(&d, RotationNumber::zero()).unwrap(), expected, "{s}");
        let ab = ab_coefficients(&d).unwrap();
        assert_eq!(
            (ab.a_bar, ab.b_bar),
            if (n + big_n) % 2 == 0 { (sign, 0) } else { (0, sign) }
        );
    }
}

#[test]
fn disconnected_diagrams_have_zero_class() {
    let d = diagram("A1xA2");
    assert!(local_class_m(&d).unwrap().is_zero());
    assert!(DiagramClassCache::new().degree_identity(&d).unwrap().holds());
    assert!(global_class_at_0(&d).is_err());
}

/// For rank 2, `Delta~` in weighted coordinates of weights `(2, m)` has the
/// shape `a y2^2 + b y1^(m/2) y2 + c y1^m` with `a != 0` and `4ac - b^2 != 0`,
/// so completing the square gives `u^m + v^2` up to units.
#[test]
fn rank_two_discriminants_are_brieskorn_after_coordinate_change() {
    use discmono::algebra::{rat, Rational};
    use num_traits::Zero;
    for (s, m) in [("A2", 3u32), ("B2", 4), ("G2", 6)] {
        let pres = discriminant_in_invariants(&s.parse().unwrap()).unwrap();
        let delta = pres.discriminant().unwrap();
        let coeff = |e: [u32; 2]| delta.coeff(&e);
        let a = coeff([0, 2]);
        let b = if m % 2 == 0 { coeff([m / 2, 1]) } else { rat(0) };
        let c = coeff([m, 0]);
        let accounted = 1 + usize::from(!b.is_zero()) + 1;
        assert_eq!(delta.num_terms(), accounted, "{s}: {delta:?}");
        assert!(!a.is_zero());
        let disc: Rational = rat(4) * &a * &c - &b * &b;
        assert!(!disc.is_zero(), "{s}");
        let ours = local_class_m(&diagram(s)).unwrap().zeta().unwrap();
        assert_eq!(ours, brieskorn_oracle(m as u64, 2).zeta().unwrap());
    }
}
