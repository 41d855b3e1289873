//! Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::finsler::{certified_instances, check_instance};
use common::{check_value, cli, cli_json, INVOCATIONS};
use kropina::catalog;
use kropina::chart::{self, ChartConfig};
use kropina::kropina::{
    eval_f_algebraic, eval_f_navigation, finsler_condition, finsler_condition_closed, from_navigation, to_navigation,
    KropinaAlgebraic, NavigationData, WKind,
};
use kropina::riemann;
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::Value;

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: String) -> Outcome {
    Outcome { pass, summary }
}

fn timed(args: &[&str]) -> (i32, Value, Duration) {
    let t = Instant::now();
    let (code, v) = cli_json(args);
    (code, v, t.elapsed())
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

fn so_n_ricci() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [3, 4, 5] {
        let param = format!("n={n}");
        let (code, v, dt) = timed(&["ricci", "--builtin", "so_n", "--param", &param]);
        let sigma = f(&v["sigma"]);
        let residual = check_value(&v, "einstein");
        let ok = code == 0 && (sigma - 0.25).abs() < 1e-12 && residual < 1e-10 && dt < Duration::from_secs(1);
        pass &= ok;
        parts.push(format!("n={n}: sigma={sigma:.16e} residual={residual:.1e} {:.0?}", dt));
    }
    outcome(pass, parts.join("; "))
}

fn so3_finsler() -> Outcome {
    let (code, v, dt) =
        timed(&["verify", "--builtin", "so_n", "--param", "n=3", "--w", "W_thm3", "--w-kind", "right", "--samples", "20"]);
    let residual = check_value(&v, "chart_einstein_residual");
    let count = v["diagnostics"]["samples"]["count"].as_u64().unwrap_or(0);
    let cfg = &v["config"]["chart"];
    let ok = code == 0
        && residual < 1e-4
        && count >= 20
        && f(&cfg["radius"]) <= 0.3
        && cfg["series_order"] == 10
        && (f(&v["sigma"]) - 0.25).abs() < 1e-12
        && dt < Duration::from_secs(60);
    outcome(ok, format!("max |Ric - F^2/4|/F^2 = {residual:.2e} over {count} samples, {:.1?}", dt))
}

fn classify3d() -> Outcome {
    let (code, v, dt) = timed(&["classify3d"]);
    let cases = v["details"]["cases"].as_array().cloned().unwrap_or_default();
    let row = |label: &str| cases.iter().find(|c| c["case"] == label).cloned().unwrap_or(Value::Null);
    let mut problems = Vec::new();

    let r3 = row("r3_abelian");
    if r3["killing_dim"] != 3 || f(&r3["sigma"]).abs() > 1e-12 || r3["admits"] != true {
        problems.push("r3_abelian".to_string());
    }
    for nu in [0.5, 1.0, 2.0] {
        let r = row(&format!("e0tilde2(nu={nu})"));
        let b: Vec<f64> = r["killing_basis"][0].as_array().map(|a| a.iter().map(f).collect()).unwrap_or_default();
        let want = 1.0 / f64::sqrt(nu);
        let direction_ok = b.len() == 3 && b[0].abs() < 1e-12 && b[1].abs() < 1e-12 && (b[2].abs() - want).abs() < 1e-12;
        if r["killing_dim"] != 1 || !direction_ok || f(&r["sigma"]).abs() > 1e-12 || r["admits"] != true {
            problems.push(format!("e0tilde2 nu={nu}"));
        }
    }
    for lambda in [0.5, 1.0, 2.0] {
        let r = row(&format!("su2_round(lambda={lambda})"));
        if r["killing_dim"] != 3 || (f(&r["sigma"]) - 0.5 / lambda).abs() > 1e-12 || r["admits"] != true {
            problems.push(format!("su2_round lambda={lambda}"));
        }
    }
    let heis = row("heisenberg3");
    if heis["admits"] != false || f(&heis["einstein_residual"]) <= 0.01 {
        problems.push("heisenberg3".to_string());
    }
    let diag = row("su2_diag(lambda1=1,lambda2=2,lambda3=3)");
    if diag["admits"] != false || f(&diag["einstein_residual"]) <= 0.01 || diag["killing_dim"] != 0 {
        problems.push("su2_diag".to_string());
    }
    let ok = code == 0 && problems.is_empty() && cases.len() == 9 && dt < Duration::from_secs(10);
    outcome(ok, format!("{} cases, mismatches {:?}, {:.1?}", cases.len(), problems, dt))
}

fn oracle_equivalence() -> Outcome {
    let cfg = ChartConfig::default();
    let mut worst = 0.0_f64;
    let mut worst_name = "";
    for name in catalog::NAMES {
        let e = catalog::get(name, &[]).expect("default entry");
        let n = e.algebra.dim();
        let ric = riemann::riemann_ricci(&e.algebra, &e.metric).expect("algebraic Ricci");
        let mut points = vec![DVector::zeros(n)];
        points.extend(chart::sample_chart_points(n, &ChartConfig { sample_count: 5, ..cfg.clone() }));
        for x in &points {
            let d = match chart::riemann_ricci_chart_pulled_back(&e.algebra, &e.metric, x, &cfg) {
                Ok(pulled) => (pulled - &ric).amax(),
                Err(_) => f64::INFINITY,
            };
            if d > worst {
                worst = d;
                worst_name = name;
            }
        }
    }
    outcome(worst < 1e-6, format!("max deviation {worst:.2e} ({worst_name}) over {} entries x 6 points", catalog::NAMES.len()))
}

fn navigation_round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut gauss = |n: usize| DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
    let mut worst_f = 0.0_f64;
    let mut worst_unit = 0.0_f64;
    let mut count = 0;
    for name in catalog::NAMES {
        let e = catalog::get(name, &[]).expect("default entry");
        let n = e.algebra.dim();
        let w = e.default_vector().map(|(_, v)| v.clone()).unwrap_or_else(|| e.algebra.basis_vector(0));
        let nav = NavigationData::normalized(e.metric.clone(), w).expect("nonzero W");
        let alg = KropinaAlgebraic::new(e.metric.clone(), gauss(n)).expect("nonzero X");

        let nav_back = to_navigation(&from_navigation(&nav).unwrap()).unwrap();
        let alg_nav = to_navigation(&alg).unwrap();
        let alg_back = from_navigation(&alg_nav).unwrap();
        for out in [&nav_back, &alg_nav] {
            worst_unit = worst_unit.max((out.h().norm(out.w()) - 1.0).abs());
        }

        let mut taken = 0;
        while taken < 100 {
            let y = gauss(n);
            let (Ok(f0), Ok(f1)) = (eval_f_navigation(&nav, &y), eval_f_navigation(&nav_back, &y)) else { continue };
            let (Ok(a0), Ok(a1)) = (eval_f_algebraic(&alg, &y), eval_f_algebraic(&alg_back, &y)) else { continue };
            let a2 = eval_f_navigation(&alg_nav, &y).unwrap();
            worst_f = worst_f.max((f1 - f0).abs() / f0).max((a1 - a0).abs() / a0).max((a2 - a0).abs() / a0);
            taken += 1;
            count += 1;
        }
    }
    outcome(
        worst_f < 1e-12 && worst_unit < 1e-12,
        format!("{count} samples: max relative F change {worst_f:.1e}, max | |W|_h - 1 | {worst_unit:.1e}"),
    )
}

fn right_invariant_killing() -> Outcome {
    let e = catalog::get("su2_round", &catalog::parse_params("lambda=1").unwrap()).unwrap();
    let cfg = ChartConfig::default();
    let mut lie = 0.0_f64;
    let mut left = f64::INFINITY;
    let mut orbit = 0.0_f64;
    for k in 0..3 {
        let w = e.algebra.basis_vector(k);
        lie = lie.max(chart::max_lie_derivative(&e.algebra, &e.metric, &w, WKind::Right, &cfg).unwrap_or(f64::INFINITY));
        let nav = NavigationData::normalized(e.metric.clone(), w.clone()).unwrap();
        left = left.min(chart::left_invariance_check(&e.algebra, &nav, WKind::Right, &cfg).unwrap_or(0.0));
        orbit = orbit.max(chart::ad_orbit_norm(&e.algebra, &e.metric, nav.w(), &cfg).unwrap_or(f64::INFINITY));
    }
    outcome(
        lie < 1e-6 && left > 1e-3 && orbit < 1e-8,
        format!("max |L_W h| {lie:.1e}, min left-invariance defect {left:.2e}, max ad-orbit deviation {orbit:.1e}"),
    )
}

fn alpha_beta() -> Outcome {
    let mut worst = 0.0_f64;
    let mut positive = true;
    let mut count = 0;
    for b in [0.5, 1.0, 2.0] {
        let steps = (b / 0.1_f64).round() as usize;
        for i in 1..=steps {
            let s = (0.1 * i as f64).min(b);
            let closed = finsler_condition_closed(b, s);
            match finsler_condition(b, s) {
                Ok(v) => {
                    worst = worst.max((v - closed).abs() / closed);
                    positive &= v > 0.0;
                }
                Err(_) => positive = false,
            }
            count += 1;
        }
    }
    outcome(worst <= 1e-14 && positive, format!("{count} grid points, max relative deviation {worst:.1e}, positive: {positive}"))
}

fn sphere_case() -> Outcome {
    let (code, v, dt) = timed(&["homog", "--builtin", "sphere_u", "--param", "n=1", "--w", "hopf"]);
    let residual = f(&v["details"]["einstein_residual"]);
    let invariant = check_value(&v, "isotropy_invariant");
    let unit = check_value(&v, "unit_norm");
    let (code2, v2, dt2) = timed(&["homog", "--builtin", "sphere_so", "--param", "n=2"]);
    let ok = code == 0
        && v["verdict"] == "homogeneous_einstein_kropina"
        && residual < 1e-10
        && invariant < 1e-10
        && unit < 1e-12
        && code2 == 2
        && v2["details"]["invariant_dim"] == 0
        && dt + dt2 < Duration::from_secs(5);
    outcome(
        ok,
        format!(
            "S^3: residual {residual:.1e}, [h, W] {invariant:.1e}, sigma {:.16e}; S^2: dim m0 = {}; {:.0?}",
            f(&v["sigma"]),
            v2["details"]["invariant_dim"],
            dt + dt2
        ),
    )
}

fn property_suite() -> Outcome {
    let cfg = ChartConfig::default();
    let mut pass = true;
    let mut samples = 0;
    let mut worst = [0.0_f64; 4];
    let mut min_eig = f64::INFINITY;
    for c in certified_instances() {
        let e = check_instance(&c, &cfg);
        samples += e.samples;
        worst[0] = worst[0].max(e.euler);
        worst[1] = worst[1].max(e.fundamental_homogeneity);
        worst[2] = worst[2].max(e.spray_homogeneity);
        worst[3] = worst[3].max(e.jet_vs_fd);
        min_eig = min_eig.min(e.min_eigenvalue);
        pass &= e.samples == cfg.sample_count;
    }
    pass &= worst[0] < 1e-10 && worst[1] < 1e-10 && worst[2] < 1e-10 && worst[3] < 1e-5 && min_eig > 0.0;
    outcome(
        pass,
        format!(
            "{samples} samples: euler {:.1e}, g_y homogeneity {:.1e}, spray homogeneity {:.1e}, jet vs FD {:.1e}, min eig(g_y)/max {:.2e}",
            worst[0], worst[1], worst[2], worst[3], min_eig
        ),
    )
}

fn determinism() -> Outcome {
    let mut differing = Vec::new();
    for args in INVOCATIONS {
        let mut full = args.to_vec();
        full.extend(["--format", "json"]);
        if matches!(args[0], "ricci" | "verify" | "classify3d") {
            full.extend(["--seed", "11"]);
        }
        if cli(&full) != cli(&full) {
            differing.push(args.join(" "));
        }
    }
    outcome(differing.is_empty(), format!("{} invocations run twice, differing: {:?}", INVOCATIONS.len(), differing))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("so(n) Einstein constant", so_n_ricci),
        ("so(3) Finsler Ricci sampling", so3_finsler),
        ("3-dimensional classification", classify3d),
        ("Koszul vs chart Ricci", oracle_equivalence),
        ("navigation round trips", navigation_round_trips),
        ("right-invariant Killing fields", right_invariant_killing),
        ("(alpha, beta) positivity", alpha_beta),
        ("homogeneous spheres", sphere_case),
        ("Finsler pipeline properties", property_suite),
        ("deterministic reports", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {} [{:.1?}]", i + 1, o.summary, t.elapsed());
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
