use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use admissible::constructions::{
    averaged_disk_example, disk_value_times_factor, example_catalogue, polydisk_to_halfplane, random_stable,
    stability_spot_check,
};
use admissible::gaussian::{rat, GaussianRational};
use admissible::ideal::{membership, numerator_ideal, IdealOptions, Verdict};
use admissible::oracle::{boundedness_oracle, OracleConfig};
use admissible::{parse_poly, MultiPoly};

fn opts() -> IdealOptions {
    IdealOptions { order: 16, seed: 0 }
}

fn random_poly(vars: &[String], max_deg: u32, rng: &mut ChaCha8Rng) -> MultiPoly {
    let mut p = MultiPoly::zero(vars);
    for _ in 0..rng.gen_range(1..5) {
        let mut e = vec![0u32; vars.len()];
        for _ in 0..rng.gen_range(0..=max_deg) {
            e[rng.gen_range(0..vars.len())] += 1;
        }
        let c = GaussianRational::from_ints(rng.gen_range(-3..=3), rng.gen_range(-2..=2));
        p = &p + &MultiPoly::monomial(vars, e, c);
    }
    p
}

#[test]
fn generators_are_bounded_numerators() {
    for e in example_catalogue() {
        let d = numerator_ideal(&e.p, &opts()).unwrap();
        for g in &d.generators {
            let rep = boundedness_oracle(&e.p, g, &d.h, &OracleConfig::default());
            assert!(!rep.divergent, "{}: generator {} looks unbounded: {:?}", e.name, g, rep.shell_max);
        }
    }
}

#[test]
fn membership_is_closed_under_combinations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for e in example_catalogue() {
        let d = numerator_ideal(&e.p, &opts()).unwrap();
        let vars = e.p.vars().to_vec();
        for _ in 0..6 {
            let i = rng.gen_range(0..d.generators.len());
            let j = rng.gen_range(0..d.generators.len());
            let a = random_poly(&vars, 3, &mut rng);
            let b = random_poly(&vars, 3, &mut rng);
            let q = &(&a * &d.generators[i]) + &(&b * &d.generators[j]);
            let v = membership(&d, &q, &opts()).verdict;
            assert_eq!(v, Verdict::InIdeal, "{}: {}", e.name, q);
        }
    }
}

#[test]
fn reflected_polynomial_is_a_bounded_numerator() {
    for e in example_catalogue() {
        let d = numerator_ideal(&e.p, &opts()).unwrap();
        assert_eq!(membership(&d, &e.p.reflect(), &opts()).verdict, Verdict::InIdeal, "{}", e.name);
    }
}

#[test]
fn definite_census_through_degree_two() {
    let p = parse_poly("x+y+z-2*i*(x*y+x*z+y*z)-3*x*y*z").unwrap();
    let d = numerator_ideal(&p, &IdealOptions::default()).unwrap();
    let linear = ["0", "x", "y", "z", "x+y", "x+y+z", "2*x+2*y+2*z", "x-z"];
    let quadratic = ["0", "x^2", "x*y", "y^2", "x*z", "y*z", "z^2", "x^2-3*y*z"];
    for l in linear {
        for q in quadratic {
            let poly = parse_poly(&format!("{} + {}", l, q)).unwrap();
            if poly.is_zero() {
                continue;
            }
            let expect = matches!(l, "0" | "x+y+z" | "2*x+2*y+2*z");
            let got = membership(&d, &poly, &IdealOptions::default()).verdict == Verdict::InIdeal;
            assert_eq!(got, expect, "{} + {}", l, q);
        }
    }
    assert_eq!(membership(&d, &parse_poly("1").unwrap(), &IdealOptions::default()).verdict, Verdict::NotInIdeal);
}

#[test]
fn real_slices_decide_like_full_sampling() {
    for e in example_catalogue() {
        let d = numerator_ideal(&e.p, &opts()).unwrap();
        let vars = e.p.vars().to_vec();
        let mut probes: Vec<MultiPoly> = d.generators.clone();
        probes.push(MultiPoly::one(&vars));
        probes.extend(vars.iter().map(|v| MultiPoly::var(&vars, v)));
        for q in probes {
            let rep = boundedness_oracle(&e.p, &q, &d.h, &OracleConfig::default());
            assert_eq!(rep.divergent, rep.real_divergent, "{}: {}", e.name, q);
        }
    }
}

#[test]
fn constructions_have_no_zeros_in_the_upper_half_space() {
    for s in 0..50 {
        let p = random_stable(s);
        assert!(stability_spot_check(&p, 100, s).is_ok(), "{}", p);
    }
    for e in example_catalogue() {
        assert!(stability_spot_check(&e.p, 100, 1).is_ok(), "{}", e.name);
    }
}

#[test]
fn transfer_agrees_with_disk_values() {
    let disks = [parse_poly("3-z1-z2-z3").unwrap(), parse_poly("2-z1*z2-z3").unwrap(), averaged_disk_example()];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for disk in disks {
        let p = polydisk_to_halfplane(&disk).unwrap();
        let mut ratio: Option<GaussianRational> = None;
        for _ in 0..10 {
            let w: Vec<GaussianRational> = (0..3)
                .map(|_| GaussianRational::new(rat(rng.gen_range(-9..9), 7), rat(rng.gen_range(1..9), 5)))
                .collect();
            let lhs = disk_value_times_factor(&disk, &w);
            let rhs = p.eval_exact(&w);
            let r = &lhs / &rhs;
            match &ratio {
                None => ratio = Some(r),
                Some(r0) => assert_eq!(&r, r0, "{}", disk),
            }
        }
    }
}
