//! Acceptance checks, one line per criterion. Exit status is nonzero when
//! any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use admissible::branch::{classify, residual, solve_branch};
use admissible::closure::{ic_membership, monomialize};
use admissible::constructions::{
    averaged_disk_example, example_catalogue, index_and_definite, mobius_lift, polydisk_to_halfplane, random_stable,
    square_power_family,
};
use admissible::forms::{comparability_ratio, dyadic_radii, is_positive_definite, HomogeneousForm};
use admissible::gaussian::GaussianRational;
use admissible::ideal::{membership, numerator_ideal, IdealCase, IdealOptions, Verdict};
use admissible::oracle::{boundedness_oracle, OracleConfig};
use admissible::puiseux::contact_order;
use admissible::{parse_poly, MultiPoly};

type Outcome = Result<String, String>;

fn poly(s: &str) -> MultiPoly {
    parse_poly(s).unwrap()
}

fn canon(s: &str) -> String {
    poly(s).to_string()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Duration, limit: f64) -> Result<(), String> {
    ensure(t.as_secs_f64() < limit, format!("took {:.2}s, limit {}s", t.as_secs_f64(), limit))
}

fn cli_analyze(p: &str) -> Result<(serde_json::Value, String), String> {
    let bin = env!("CARGO_BIN_EXE_admissible");
    let json = Command::new(bin).args(["analyze", "--format", "json", p]).output().map_err(|e| e.to_string())?;
    ensure(json.status.code() == Some(0), format!("analyze exited with {:?}", json.status.code()))?;
    let text = Command::new(bin).args(["analyze", p]).output().map_err(|e| e.to_string())?;
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).map_err(|e| e.to_string())?;
    Ok((v, String::from_utf8_lossy(&text.stdout).into_owned()))
}

fn json_generators(v: &serde_json::Value) -> Vec<String> {
    v["generators"].as_array().map(|a| a.iter().map(|g| g.as_str().unwrap_or("").to_string()).collect()).unwrap_or_default()
}

fn definite_example() -> Outcome {
    let src = "x+y+z-2*i*(x*y+x*z+y*z)-3*x*y*z";
    let t = Instant::now();
    let (v, text) = cli_analyze(src)?;
    let el = t.elapsed();
    let want: Vec<String> = ["x+y+z", "x^2", "x*y", "y^2"].iter().map(|s| canon(s)).collect();
    let got = json_generators(&v);
    ensure(got == want, format!("generators {:?}", got))?;
    let im = canon("2*(x^2+x*y+y^2)");
    ensure(text.contains(&format!("Im phi_2 = {},", im)), "degree-2 imaginary part missing from analyze output")?;
    within(el, 1.0)?;
    Ok(format!("ideal ({}), Im phi_2 = {}, {:.0} ms", got.join(", "), im, el.as_secs_f64() * 1e3))
}

fn linear_form_example() -> Outcome {
    let t = Instant::now();
    let (v, _) = cli_analyze("x+y+z-2*i*(x*z+y*z)-x*y*z")?;
    let el = t.elapsed();
    let want: Vec<String> = ["x+y+z-x*y*z", "(x+y)^2"].iter().map(|s| canon(s)).collect();
    let got = json_generators(&v);
    ensure(got == want, format!("generators {:?}", got))?;
    ensure(v["case"] == "LinearForm", format!("case {}", v["case"]))?;
    within(el, 1.0)?;
    Ok(format!("ideal ({}), {:.0} ms", got.join(", "), el.as_secs_f64() * 1e3))
}

fn averaged_example() -> Outcome {
    let t = Instant::now();
    let p = polydisk_to_halfplane(&averaged_disk_example()).map_err(|e| e.to_string())?;
    let sol = solve_branch(&p, 16).map_err(|e| e.to_string())?;
    let im = sol.phi.im_series().into_poly();
    let model = poly("(x-y)^2+(x^2+y^2)*(x+y)^2");
    let f = |x: f64, y: f64| im.eval_c64(&[Complex64::new(x, 0.0), Complex64::new(y, 0.0)]).re;
    let g = |x: f64, y: f64| model.eval_c64(&[Complex64::new(x, 0.0), Complex64::new(y, 0.0)]).re;
    let rep = comparability_ratio(&f, &g, &dyadic_radii(4, 10), 720).map_err(|e| e.to_string())?;
    ensure(rep.is_comparable(), format!("{:?}", rep.verdict))?;
    ensure(rep.width() < 10.0, format!("ratio width {:.3}", rep.width()))?;
    let d = numerator_ideal(&p, &IdealOptions { order: 16, seed: 0 }).map_err(|e| e.to_string())?;
    ensure(d.case == IdealCase::IsolatedDegenerate, d.case.name())?;
    ensure(d.l_or_k == 4, format!("K = {}", d.l_or_k))?;
    let h = poly("1/2*(x+y)+1/8*(x^3+7*x^2*y+7*x*y^2+y^3)");
    ensure(d.h == h, format!("H = {}", d.h))?;
    let mut want = vec![(&poly("z") + &h).to_string(), canon("(x-y)^2"), canon("(x-y)*(x+y)^2")];
    want.extend(["x^4", "x^3*y", "x^2*y^2", "x*y^3", "y^4"].iter().map(|s| canon(s)));
    let got: Vec<String> = d.generators.iter().map(|g| g.to_string()).collect();
    ensure(got == want, format!("generators {:?}", got))?;
    let el = t.elapsed();
    within(el, 10.0)?;
    Ok(format!("K = 4, H = {}, ratio in [{:.3}, {:.3}] (width {:.3}), {:.0} ms", h, rep.min, rep.max, rep.width(), el.as_secs_f64() * 1e3))
}

fn closure_claim() -> Outcome {
    let ic = monomialize(&poly("u^2+u^2*v^2+v^4")).map_err(|e| e.to_string())?;
    let cases = [("u^2", true), ("u*v^2", true), ("u*v^3", true), ("v^4", true), ("u*v", false), ("v^2", false), ("v^3", false)];
    let mut bad = vec![];
    for (q, expect) in cases {
        if ic_membership(&poly(q), &ic, None).is_member() != expect {
            bad.push(q);
        }
    }
    ensure(bad.is_empty(), format!("wrong verdicts for {:?}", bad))?;
    Ok(format!("{} verdicts match", cases.len()))
}

fn square_powers() -> Outcome {
    let t = Instant::now();
    for l in 1..=3 {
        let p = square_power_family(l).map_err(|e| e.to_string())?;
        let (idx, def) = index_and_definite(&p, 4 * l + 4).map_err(|e| e.to_string())?;
        ensure(idx == 2 * l && def, format!("L = {}: index {}, definite {}", l, idx, def))?;
    }
    let opts = IdealOptions::default();
    let d1 = numerator_ideal(&square_power_family(1).unwrap(), &opts).map_err(|e| e.to_string())?;
    let base: Vec<String> = ["x+y+z", "x^2", "x*y", "y^2"].iter().map(|s| canon(s)).collect();
    let got1: Vec<String> = d1.generators.iter().map(|g| g.to_string()).collect();
    ensure(got1 == base, format!("L = 1 generators {:?}", got1))?;
    let p2 = square_power_family(2).unwrap();
    let d = numerator_ideal(&p2, &opts).map_err(|e| e.to_string())?;
    let h = poly("x+y+2*(x^3+2*x^2*y+2*x*y^2+y^3)");
    ensure(d.h == h, format!("H = {}", d.h))?;
    // (x^2+y^2)^2 generates the degree-4 part up to comparability: every
    // quartic monomial is bounded by it and it lies in the ideal
    let mut want = vec![(&poly("z") + &h).to_string()];
    want.extend(["x^4", "x^3*y", "x^2*y^2", "x*y^3", "y^4"].iter().map(|s| canon(s)));
    let got: Vec<String> = d.generators.iter().map(|g| g.to_string()).collect();
    ensure(got == want, format!("generators {:?}", got))?;
    let sq = poly("(x^2+y^2)^2");
    ensure(membership(&d, &sq, &opts).verdict == Verdict::InIdeal, "(x^2+y^2)^2 not in the ideal")?;
    let im4 = d.classification.im_part.clone();
    let f = |x: f64, y: f64| im4.eval_c64(&[Complex64::new(x, 0.0), Complex64::new(y, 0.0)]).re;
    let g = |x: f64, y: f64| (x * x + y * y).powi(2);
    let rep = comparability_ratio(&f, &g, &dyadic_radii(4, 10), 720).map_err(|e| e.to_string())?;
    ensure(rep.is_comparable(), "Im phi_4 not comparable to (x^2+y^2)^2")?;
    let el = t.elapsed();
    within(el, 30.0)?;
    Ok(format!("indices 2, 4, 6 definite; L = 2 ideal (z+H, (x,y)^4) with H = {}, {:.0} ms", h, el.as_secs_f64() * 1e3))
}

fn lifted_input() -> Outcome {
    let p2 = square_power_family(2).unwrap();
    let v = admissible::poly::vars(&["a", "z"]);
    let a = MultiPoly::var(&v, "a");
    let q2 = p2.compose(&[a.clone(), a, MultiPoly::var(&v, "z")]);
    let k = contact_order(&q2, 16).map_err(|e| e.to_string())?;
    ensure(k == 4, format!("contact order {}", k))?;
    let p = mobius_lift(&q2, q2.degree_in(0)).map_err(|e| e.to_string())?;
    let sol = solve_branch(&p, 8).map_err(|e| e.to_string())?;
    let parts = sol.parts();
    ensure(!parts[2].im_part().is_zero(), "Im phi_2 vanishes")?;
    let xv = admissible::poly::vars(&["x"]);
    let x = MultiPoly::var(&xv, "x");
    for (k, part) in parts.iter().enumerate().take(4) {
        let d = part.im_part().compose(&[x.clone(), x.clone()]);
        ensure(d.is_zero(), format!("Im phi_{}(x,x) = {}", k, d))?;
    }
    Ok(format!("contact order 4 input; Im phi_2 = {}; Im phi_k(x,x) = 0 for k < 4", parts[2].im_part()))
}

fn random_forms(count: usize, seed: u64) -> Vec<MultiPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = admissible::poly::vars(&["x", "y"]);
    let x = MultiPoly::var(&v, "x");
    let y = MultiPoly::var(&v, "y");
    let int = |r: &mut ChaCha8Rng, lo: i64, hi: i64| GaussianRational::from_int(r.gen_range(lo..=hi));
    (0..count)
        .map(|k| {
            if k % 2 == 0 {
                // generic coefficients, degree 2..6
                let d = 2 + (rng.gen_range(0..5) as u32);
                let terms = (0..=d).map(|j| (vec![j, d - j], int(&mut rng, -4, 6)));
                MultiPoly::from_terms(&v, terms)
            } else {
                // a product of quadratics with random discriminant sign
                let mut f = MultiPoly::one(&v);
                for _ in 0..rng.gen_range(1..=3) {
                    let a = int(&mut rng, 1, 4);
                    let b = int(&mut rng, -5, 5);
                    let c = int(&mut rng, 1, 4);
                    let q = &(&x.pow(2).scale(&a) + &(&x * &y).scale(&b)) + &y.pow(2).scale(&c);
                    f = &f * &q;
                }
                f
            }
        })
        .collect()
}

fn property_suites() -> Outcome {
    let inputs: Vec<MultiPoly> = (0..50).map(random_stable).collect();
    let n = 12;
    let mut failures = vec![];
    for (s, p) in inputs.iter().enumerate() {
        match solve_branch(p, n) {
            Ok(sol) => {
                if residual(p, &sol).order().is_some_and(|o| o <= n) {
                    failures.push(format!("(a) seed {}: residual below degree {}", s, n + 1));
                }
            }
            Err(e) => failures.push(format!("(a) seed {}: {}", s, e)),
        }
        if p.reflect().reflect() != *p {
            failures.push(format!("(b) seed {}: reflection is not an involution", s));
        }
        match numerator_ideal(p, &IdealOptions::default()) {
            Ok(d) => {
                let v = membership(&d, &p.reflect(), &IdealOptions::default()).verdict;
                if v != Verdict::InIdeal {
                    failures.push(format!("(b) seed {}: reflection gives {}", s, v.name()));
                }
            }
            Err(e) => failures.push(format!("(b) seed {}: {}", s, e)),
        }
    }
    let forms = random_forms(100, 7);
    let mut definite = 0;
    for (k, f) in forms.iter().enumerate() {
        let exact = is_positive_definite(&HomogeneousForm::from_poly(f).unwrap()).unwrap();
        // a touching zero shows up as a grid minimum of relative size about
        // the squared angular step, so the threshold sits well above that
        let vals: Vec<f64> = (0..10_000)
            .map(|j| {
                let th = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / 10_000.0;
                f.eval_c64(&[Complex64::new(th.cos(), 0.0), Complex64::new(th.sin(), 0.0)]).re
            })
            .collect();
        let top = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let grid = vals.iter().all(|&v| v > 1e-5 * top);
        if exact != grid {
            failures.push(format!("(c) form {} = {}: exact {} grid {}", k, f, exact, grid));
        }
        definite += exact as usize;
    }
    let (pairs, agree) = oracle_agreement()?;
    if agree.len() != pairs {
        failures.extend(agree);
    }
    ensure(failures.is_empty(), failures.join("; "))?;
    Ok(format!("50 residuals, 50 reflections, 100 forms ({} definite), {} oracle pairs agree", definite, pairs))
}

/// Returns the number of pairs and, on disagreement, the list of
/// disagreements; when everything agrees the list has one entry per pair.
fn oracle_agreement() -> Result<(usize, Vec<String>), String> {
    let cat = example_catalogue();
    let find = |n: &str| cat.iter().find(|e| e.name == n).unwrap().p.clone();
    let pairs: Vec<(&str, Vec<&str>)> = vec![
        ("definite", vec!["x+y+z", "x^2", "x*y", "y^2", "x+y+z-2*i*(x*y+x*z+y*z)-3*x*y*z", "1", "x", "y", "x+y", "z"]),
        ("linear-form", vec!["x+y+z-x*y*z", "(x+y)^2", "(x+y)^2*z", "x+y", "x^2", "1"]),
        (
            "averaged",
            vec![
                "z+1/2*(x+y)+1/8*(x^3+7*x^2*y+7*x*y^2+y^3)",
                "(x-y)^2",
                "(x-y)*(x+y)^2",
                "x^4",
                "(x+y)^3",
                "x-y",
                "(x+y)^2",
                "x^2",
                "1",
            ],
        ),
        ("p2", vec!["(x^2+y^2)^2", "x^4", "z+x+y+2*(x^3+2*x^2*y+2*x*y^2+y^3)", "x^3", "x^2+y^2", "z+x+y"]),
    ];
    let mut total = 0;
    let mut agree = vec![];
    let mut disagree = vec![];
    for (name, qs) in pairs {
        let p = find(name);
        let opts = IdealOptions { order: 16, seed: 0 };
        let d = numerator_ideal(&p, &opts).map_err(|e| e.to_string())?;
        for q in qs {
            total += 1;
            let q = poly(q);
            let v = membership(&d, &q, &opts).verdict;
            let rep = boundedness_oracle(&p, &q, &d.h, &OracleConfig::default());
            let ok = match v {
                Verdict::InIdeal => !rep.divergent,
                Verdict::NotInIdeal => rep.divergent,
                Verdict::Indeterminate => false,
            };
            let real_ok = rep.real_divergent == rep.divergent;
            if ok && real_ok {
                agree.push(format!("{} / {}", name, q));
            } else {
                disagree.push(format!(
                    "(d) {} / {}: {} vs oracle {:?} (real slices divergent {})",
                    name,
                    q,
                    v.name(),
                    rep.shell_max,
                    rep.real_divergent
                ));
            }
        }
    }
    Ok((total, if disagree.is_empty() { agree } else { disagree }))
}

fn sanity_battery() -> Outcome {
    let mut inputs: Vec<MultiPoly> = (0..50).map(random_stable).collect();
    inputs.extend(example_catalogue().into_iter().map(|e| e.p));
    inputs.push(square_power_family(4).map_err(|e| e.to_string())?);
    let n = 12;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut violations = vec![];
    for p in &inputs {
        let sol = match solve_branch(p, n) {
            Ok(s) => s,
            Err(e) => {
                violations.push(format!("{}: {}", p, e));
                continue;
            }
        };
        if let Err(e) = classify(&sol) {
            violations.push(format!("{}: {}", p, e));
        }
        if sol.grad0.iter().any(|g| g < &num_rational::BigRational::from_integer(0.into())) {
            violations.push(format!("{}: negative gradient", p));
        }
        let parts = sol.parts();
        let Some(first) = parts.iter().position(|q| !q.im_part().is_zero()) else { continue };
        if first % 2 == 1 {
            violations.push(format!("{}: first non-real degree {}", p, first));
        }
        let im = parts[first].im_part();
        let m = im.nvars();
        for _ in 0..1000 {
            let d: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let pt: Vec<Complex64> = d.iter().map(|&a| Complex64::new(a, 0.0)).collect();
            if im.eval_c64(&pt).re < -1e-12 {
                violations.push(format!("{}: Im phi_{} negative at {:?}", p, first, d));
                break;
            }
        }
        for (j, g) in sol.grad0.iter().enumerate() {
            if num_traits::Zero::is_zero(g) {
                let axis = sol.phi.poly().terms().any(|(mono, _)| mono.0.iter().enumerate().all(|(i, &e)| i == j || e == 0));
                if axis {
                    violations.push(format!("{}: phi does not vanish on axis {}", p, j));
                }
            }
        }
    }
    ensure(violations.is_empty(), violations.join("; "))?;
    Ok(format!("{} inputs, no violations", inputs.len()))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("definite three-variable ideal", definite_example),
        ("linear-form ideal", linear_form_example),
        ("isolated degenerate zero pipeline", averaged_example),
        ("integral closure verdicts", closure_claim),
        ("square-power family", square_powers),
        ("diagonal lift structure", lifted_input),
        ("property suites", property_suites),
        ("branch sanity battery", sanity_battery),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.into_iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} ({}): PASS  {}", k + 1, name, detail),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({}): FAIL  {}", k + 1, name, detail);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
