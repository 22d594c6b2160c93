//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use discmono::arrangement::*;
use discmono::coxeter::{generate_group, molien_degrees, CoxeterDiagram, GroupType, RootSystemData};
use discmono::error::Error;
use discmono::finite_field::verify_finite;
use discmono::invariants::{discriminant_in_invariants, discriminant_poly};
use discmono::macdonald::{integral_report, max_report, MacdonaldConstants, DEFAULT_SEED};
use discmono::monodromy::{MonodromyClass, RotationNumber};
use discmono::recursion::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

const CLASS_DIAGRAMS: &[&str] = &[
    "A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "F4", "H3", "I2(3)", "I2(4)", "I2(5)", "I2(6)", "I2(7)", "I2(8)",
];

fn ty(s: &str) -> GroupType {
    s.parse().expect("valid type")
}

fn diagram(s: &str) -> CoxeterDiagram {
    CoxeterDiagram::parse(s).expect("valid diagram")
}

fn e(err: Error) -> String {
    err.to_string()
}

fn rank_two_oracle() -> Outcome {
    for m in 3..=8u64 {
        let ours = local_class_m(&diagram(&format!("I2({m})")))
            .map_err(e)?
            .zeta()
            .map_err(e)?;
        let oracle = brieskorn_oracle(m, 2).zeta().map_err(e)?;
        if ours != oracle {
            return Err(format!("I2({m}): {ours} vs {oracle}"));
        }
    }
    let a2 = local_class_m(&diagram("A2")).map_err(e)?.zeta().map_err(e)?.to_string();
    let b2 = local_class_m(&diagram("B2")).map_err(e)?.zeta().map_err(e)?.to_string();
    if a2 != "(1-T^6)/((1-T^2)(1-T^3))" || b2 != "(1-T^4)/(1-T^2)" {
        return Err(format!("A2 = {a2}, B2 = {b2}"));
    }
    Ok(format!("I2(3..8) equal; A2 = {a2}; B2 = {b2}"))
}

fn resummation() -> Outcome {
    let cache = DiagramClassCache::new();
    for s in CLASS_DIAGRAMS {
        let check = cache.degree_identity(&diagram(s)).map_err(e)?;
        if !check.holds() {
            return Err(format!("{s}: difference {}", check.difference()));
        }
    }
    Ok(format!("{} diagrams exact", CLASS_DIAGRAMS.len()))
}

fn finite_field() -> Outcome {
    let mut pairs = 0;
    let mut chars = 0;
    let mut worst: f64 = 0.0;
    for t in ["A1", "A1xA1", "A2", "B2", "G2", "B3"] {
        for p in [5u64, 7, 11, 13] {
            let t = ty(t);
            if t.order() % p as u128 == 0 {
                continue;
            }
            let rep = verify_finite(&t, p).map_err(e)?;
            if !rep.pass {
                return Err(format!("{t} mod {p}: {}/{} characters", rep.passed(), rep.rows.len()));
            }
            pairs += 1;
            chars += rep.rows.len();
            worst = worst.max(rep.max_abs_diff());
        }
    }
    Ok(format!(
        "{pairs} (type, p) pairs, {chars} characters, max |S - RHS| = {worst:.1e}"
    ))
}

fn maximum_on_sphere() -> Outcome {
    let mut worst: f64 = 0.0;
    for t in ["A2", "B2", "G2", "A3", "B3"] {
        let rep = max_report(&ty(t), 100, DEFAULT_SEED).map_err(e)?;
        if !rep.pass {
            return Err(format!("{t}: optimized {} vs {}", rep.optimized, rep.closed_form));
        }
        worst = worst.max(rep.rel_err);
    }
    let b2 = MacdonaldConstants::new(&RootSystemData::new(&ty("B2"))).max_delta_exact();
    match b2.map(|v| v.to_string()) {
        Some(v) if v == "1/16" => Ok(format!("5 types, max rel err {worst:.1e}; B2 exact 1/16")),
        other => Err(format!("B2 closed form {other:?}")),
    }
}

fn gaussian_integral() -> Outcome {
    let mut worst: f64 = 0.0;
    let cases = [
        ("A1", 1),
        ("A1", 2),
        ("A1", 3),
        ("A2", 1),
        ("A2", 2),
        ("B2", 1),
        ("B2", 2),
    ];
    for (t, s) in cases {
        let rep = integral_report(&ty(t), s).map_err(e)?;
        if !rep.pass {
            return Err(format!("{t} s={s}: {} vs {}", rep.lhs, rep.rhs));
        }
        worst = worst.max(rep.rel_err);
    }
    let a1 = integral_report(&ty("A1"), 1).map_err(e)?.lhs;
    let exact = std::f64::consts::PI.sqrt() / 2.0;
    if (a1 - exact).abs() > 1e-10 {
        return Err(format!("A1 s=1 gave {a1}"));
    }
    Ok(format!(
        "{} cases, max rel err {worst:.1e}; A1 s=1 = sqrt(pi)/2",
        cases.len()
    ))
}

fn arrangement_suite() -> Outcome {
    let exact = [
        "A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "B5", "D4", "D5", "F4", "G2", "A1xA1", "A1xB2", "A2xG2",
    ];
    for s in exact {
        let t = ty(s);
        let a = Arrangement::coxeter(&RootSystemData::new(&t)).map_err(e)?;
        let expected: u32 = t.degrees().iter().product();
        let got = chamber_count(&a).map_err(e)?;
        if got != expected as u64 {
            return Err(format!("{s}: {got} chambers, expected {expected}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut quadric_ok = 0;
    for i in 0..200 {
        let a = random_arrangement(&mut rng, 3, 6);
        let ch = intersection_poset(&a).chamber_count();
        if ch != chamber_count_deletion_restriction(&a) {
            return Err(format!("random arrangement {i}: counts differ"));
        }
        let gram = random_nondegenerate_form(&mut rng, a.dim());
        match quadric_complement_euler(&a, &gram) {
            Ok(chi) if chi == expected_quadric_euler(&a, ch) => quadric_ok += 1,
            Ok(chi) => return Err(format!("random arrangement {i}: chi = {chi}, ch = {ch}")),
            Err(Error::DegenerateRestriction { .. }) => {}
            Err(err) => return Err(e(err)),
        }
    }
    let small = [
        "A1", "A2", "B2", "G2", "A3", "B3", "A1xA1", "A1xA2", "A1xB2", "A1xG2", "A1xA1xA1",
    ];
    for s in small {
        let rep = coxeter_euler_checks(&ty(s)).map_err(e)?;
        if !rep.pass {
            return Err(format!("{s}: chi(B) = {}, expected {}", rep.chi_b, rep.expected_chi_b));
        }
    }
    Ok(format!(
        "{} chamber counts; 200 random agree; {quadric_ok} nondegenerate satisfy the quadric identity; {} Euler checks",
        exact.len(),
        small.len()
    ))
}

fn class_identities() -> Outcome {
    let cache = DiagramClassCache::new();
    let mut ab2 = 0;
    for s in CLASS_DIAGRAMS {
        let d = diagram(s);
        let check = cache.check_otherform(&d).map_err(e)?;
        if !check.holds() {
            return Err(format!("{s} otherform: {}", check.difference()));
        }
        for k in 1..=12u64 {
            for a in 0..k as i64 {
                if !check_ab2(&d, RotationNumber::new(a, k)).map_err(e)?.holds() {
                    return Err(format!("{s} ab2 at {a}/{k}"));
                }
                ab2 += 1;
            }
        }
        let t = ty(s);
        let (n, big_n) = (t.rank(), t.num_reflections());
        let sign = if n % 2 == 1 { 1 } else { -1 };
        let expected = if (n + big_n) % 2 == 0 {
            MonodromyClass::v(1).scale(sign)
        } else {
            MonodromyClass::v_phi().scale(sign)
        };
        if exactbar_class(&d, RotationNumber::zero()).map_err(e)? != expected {
            return Err(format!("{s}: parity rule"));
        }
    }
    Ok(format!(
        "otherform on {} diagrams; {ab2} ab2 checks; parity table ok",
        CLASS_DIAGRAMS.len()
    ))
}

fn roundtrips() -> Outcome {
    let rank3 = [
        "A1", "A2", "A3", "B2", "B3", "G2", "A1xA1", "A1xA2", "A1xB2", "A1xG2", "A1xA1xA1",
    ];
    for s in rank3 {
        let t = ty(s);
        let pres = discriminant_in_invariants(&t).map_err(e)?;
        let delta = discriminant_poly(&RootSystemData::new(&t)).map_err(e)?;
        let back = pres
            .discriminant()
            .ok_or("missing discriminant")?
            .compose(pres.invariants())
            .map_err(e)?;
        if back != delta {
            return Err(format!("{s}: invariantization does not compose back"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..500 {
        let k = rng.gen_range(0..6);
        let c = MonodromyClass::from_v_coefficients(
            (0..k)
                .map(|_| (rng.gen_range(1..=30u64), rng.gen_range(-4..=4i64)))
                .collect::<Vec<_>>(),
        );
        if MonodromyClass::from_zeta(&c.zeta().map_err(e)?) != c {
            return Err(format!("class {i} ({c}) does not round-trip"));
        }
    }
    let rank4 = [
        "A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "F4", "G2", "A1xA3", "A2xA2", "B2xG2",
    ];
    for s in rank4 {
        let t = ty(s);
        let group = generate_group(&RootSystemData::new(&t)).map_err(e)?;
        let mut expected = t.degrees();
        expected.sort_unstable();
        let got = molien_degrees(&group).map_err(e)?;
        if got != expected {
            return Err(format!("{s}: Molien gives {got:?}, table {expected:?}"));
        }
    }
    Ok(format!(
        "{} invariantizations; 500 zeta round trips; {} Molien degree sets",
        rank3.len(),
        rank4.len()
    ))
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "rank-2 oracle agreement",
            budget: Duration::from_secs(1),
            run: rank_two_oracle,
        },
        Criterion {
            id: 2,
            name: "subdiagram re-summation",
            budget: Duration::from_secs(1),
            run: resummation,
        },
        Criterion {
            id: 3,
            name: "finite-field character sums",
            budget: Duration::from_secs(30),
            run: finite_field,
        },
        Criterion {
            id: 4,
            name: "maximum of Delta on the sphere",
            budget: Duration::from_secs(30),
            run: maximum_on_sphere,
        },
        Criterion {
            id: 5,
            name: "Gaussian integral at integer s",
            budget: Duration::from_secs(10),
            run: gaussian_integral,
        },
        Criterion {
            id: 6,
            name: "arrangement suite",
            budget: Duration::from_secs(10),
            run: arrangement_suite,
        },
        Criterion {
            id: 7,
            name: "class-algebra identities",
            budget: Duration::from_secs(5),
            run: class_identities,
        },
        Criterion {
            id: 8,
            name: "roundtrips",
            budget: Duration::from_secs(60),
            run: roundtrips,
        },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= c.budget;
        let (ok, detail) = match outcome {
            Ok(d) if in_budget => (true, d),
            Ok(d) => (false, format!("{d} (over budget)")),
            Err(d) => (false, d),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} [{}] {}: {} ({:.3}s / {}s)",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            detail,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
