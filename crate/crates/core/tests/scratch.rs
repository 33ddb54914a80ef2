// temporary exploration harness, removed before release
use boxloss_core::regression::{fit, AdamConfig};
use boxloss_core::sim::{run, SimConfig};
use boxloss_core::{Box2D, LossKind, SiouParams};
use std::time::Instant;

fn bx(cx: f64, cy: f64, w: f64, h: f64) -> Box2D {
    Box2D::new(cx, cy, w, h).unwrap()
}

#[test]
#[ignore]
fn probe_criterion1_desk_scale() {
    for seed in [7u64, 42, 123] {
        let mut results = vec![];
        for kind in [LossKind::Siou, LossKind::Ciou] {
            let cfg = SimConfig {
                num_points: 200,
                seed,
                kind,
                ..SimConfig::default()
            };
            let t0 = Instant::now();
            let series = run(&cfg).unwrap();
            let final_e = *series.per_iteration_total.last().unwrap();
            let max_pp = series
                .per_point_final
                .iter()
                .cloned()
                .fold(0.0f64, f64::max);
            println!(
                "seed {seed} {kind}: E(0)={:.1} E(final)={final_e:.4} max_pp={max_pp:.5} ({:?})",
                series.per_iteration_total[0],
                t0.elapsed()
            );
            results.push((final_e, max_pp));
        }
        println!(
            "seed {seed}: final ratio siou/ciou = {:.4}, maxpp ratio = {:.4}",
            results[0].0 / results[1].0,
            results[0].1 / results[1].1
        );
    }
}

#[test]
#[ignore]
fn probe_criterion2_convergence_pairs() {
    let target = bx(10.0, 10.0, 1.0, 1.0);
    let candidates = [
        bx(7.5, 7.5, 1.0, 1.0),
        bx(8.0, 8.0, 2.0, 0.5),
        bx(7.8, 11.9, 0.5, 2.0),
        bx(8.0, 12.0, 1.0, 1.0),
        bx(7.5, 12.5, 2.0, 2.0),
        bx(8.2, 8.2, 0.5, 0.5),
        bx(7.2, 11.4, 1.5, 1.5),
    ];
    let cfg = AdamConfig {
        iterations: 1000,
        ..AdamConfig::default()
    };
    for anchor in candidates {
        let mut line = format!("anchor ({}, {}, {}, {}): ", anchor.cx, anchor.cy, anchor.w, anchor.h);
        for kind in [LossKind::Siou, LossKind::Ciou] {
            let traj = fit(&anchor, &target, kind, &SiouParams::default(), &cfg);
            line.push_str(&format!(
                "{kind}: conv={:?} final_l1={:.5}  ",
                traj.converged_at,
                traj.l1_errors.last().unwrap()
            ));
        }
        println!("{line}");
    }
}

#[test]
#[ignore]
fn probe_on_axis_vs_off_axis() {
    let target = bx(10.0, 10.0, 1.0, 1.0);
    let cfg = AdamConfig {
        iterations: 1000,
        ..AdamConfig::default()
    };
    // equal initial L1 error of 2.0
    let on_axis = bx(10.0, 8.0, 1.0, 1.0);
    let off_axis = bx(11.0, 11.0, 1.0, 1.0);
    for (name, anchor) in [("on-axis", on_axis), ("off-axis", off_axis)] {
        let traj = fit(&anchor, &target, LossKind::Siou, &SiouParams::default(), &cfg);
        println!(
            "{name}: conv={:?} final_l1={:.6}",
            traj.converged_at,
            traj.l1_errors.last().unwrap()
        );
    }
}

#[test]
#[ignore]
fn probe_theta_landscape() {
    let sim = SimConfig {
        num_points: 100,
        seed: 42,
        ..SimConfig::default()
    };
    let t0 = Instant::now();
    for i in 0..17 {
        let theta = 2.0 + 0.25 * i as f64;
        let f = boxloss_core::fitness(theta, &sim).unwrap();
        println!("theta {theta:.2}: fitness {f:.6}");
    }
    println!("grid took {:?}", t0.elapsed());
}

#[test]
#[ignore]
fn probe_full_scale_timing() {
    // one point's worth of the paper-scale grid, extrapolated
    let cfg = SimConfig {
        num_points: 50,
        seed: 1,
        ..SimConfig::default()
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let t0 = Instant::now();
    let series = pool.install(|| run(&cfg).unwrap());
    let dt = t0.elapsed();
    println!(
        "50 points single-thread: {dt:?} -> full 5000 points approx {:?}; E(final)={:.3}",
        dt * 100,
        series.per_iteration_total.last().unwrap()
    );
}

#[test]
#[ignore]
fn probe_worst_cases() {
    use boxloss_core::regression::fit_each;
    use boxloss_core::sim::{cases_for_point, generate_points};
    let mk = |kind| SimConfig {
        num_points: 200,
        seed: 42,
        kind,
        ..SimConfig::default()
    };
    for kind in [LossKind::Siou, LossKind::Ciou] {
        let cfg = mk(kind);
        let points = generate_points(&cfg);
        let mut finals: Vec<(f64, usize, f64, f64, f64)> = vec![]; // (final_l1, point, scale, aspect, target_aspect)
        let mut by_bucket = [0usize; 5];
        for (pi, p) in points.iter().enumerate() {
            for case in cases_for_point(&cfg, pi, *p) {
                let s = fit_each(&case.anchor, &case.target, kind, &cfg.siou, &cfg.adam, |_, _, _| {});
                let aspect = case.anchor.w / case.anchor.h;
                let ta = case.target.w / case.target.h;
                finals.push((s.final_l1, pi, case.anchor.area(), aspect, ta));
                let b = if s.final_l1 < 0.01 { 0 } else if s.final_l1 < 0.1 { 1 } else if s.final_l1 < 0.5 { 2 } else if s.final_l1 < 1.5 { 3 } else { 4 };
                by_bucket[b] += 1;
            }
        }
        finals.sort_by(|a, b| b.0.total_cmp(&a.0));
        println!("== {kind}: buckets(<.01,<.1,<.5,<1.5,>=1.5) = {by_bucket:?}");
        for f in finals.iter().take(12) {
            println!("   l1={:.4} point={} area={:.2} aspect={:.3} target_aspect={:.3}", f.0, f.1, f.2, f.3, f.4);
        }
    }
}

#[test]
#[ignore]
fn probe_error_curves() {
    for kind in [LossKind::Siou, LossKind::Ciou] {
        let cfg = SimConfig {
            num_points: 200,
            seed: 42,
            kind,
            ..SimConfig::default()
        };
        let series = run(&cfg).unwrap();
        let mut line = format!("{kind}: ");
        for i in (0..=100).step_by(10) {
            line.push_str(&format!("E({i})={:.0} ", series.per_iteration_total[i]));
        }
        println!("{line}");
    }
    // single-case trajectory tail
    let anchor = bx(8.0, 8.0, 2.0, 0.5);
    let target = bx(10.0, 10.0, 1.0, 1.0);
    for kind in [LossKind::Siou, LossKind::Ciou] {
        let traj = fit(&anchor, &target, kind, &SiouParams::default(), &AdamConfig::default());
        let tail: Vec<String> = (90..=100).map(|i| format!("{:.4}", traj.l1_errors[i])).collect();
        println!("{kind} tail l1 (iters 90..100): {}", tail.join(" "));
    }
}

#[test]
#[ignore]
fn probe_mechanism_iterations_and_lr() {
    // understanding only: how do final-E and max-per-point ratios move with
    // iteration budget and initial lr?
    for (iters, lr0) in [(100usize, 0.1f64), (200, 0.1), (400, 0.1), (100, 0.01), (200, 0.01), (100, 0.02)] {
        let mut out = vec![];
        for kind in [LossKind::Siou, LossKind::Ciou] {
            let cfg = SimConfig {
                num_points: 100,
                seed: 42,
                kind,
                adam: AdamConfig { iterations: iters, lr0, ..AdamConfig::default() },
                ..SimConfig::default()
            };
            let series = run(&cfg).unwrap();
            let final_e = *series.per_iteration_total.last().unwrap();
            let max_pp = series.per_point_final.iter().cloned().fold(0.0f64, f64::max);
            out.push((final_e, max_pp));
        }
        println!(
            "iters={iters} lr0={lr0}: E_siou={:.2} E_ciou={:.2} (ratio {:.3}) maxpp_siou={:.4} maxpp_ciou={:.4} (ratio {:.3})",
            out[0].0, out[1].0, out[0].0 / out[1].0, out[0].1, out[1].1, out[0].1 / out[1].1
        );
    }
}

#[test]
#[ignore]
fn probe_ga_result() {
    use boxloss_core::{tune_theta, GaConfig};
    let sim = SimConfig {
        num_points: 100,
        seed: 42,
        ..SimConfig::default()
    };
    let ga = GaConfig {
        population: 12,
        generations: 8,
        seed: 7,
        ..GaConfig::default()
    };
    let t0 = Instant::now();
    let result = tune_theta(&ga, &sim).unwrap();
    println!(
        "GA: best_theta={:.4} best_fitness={:.4} evals={} history={:?} ({:?})",
        result.best_theta, result.best_fitness, result.evaluations, result.history, t0.elapsed()
    );
}

#[test]
#[ignore]
fn probe_axis_pairs() {
    let target = bx(10.0, 10.0, 1.0, 1.0);
    let cfg = AdamConfig {
        iterations: 1000,
        ..AdamConfig::default()
    };
    // matched pairs with equal initial L1 error
    let pairs = [
        ("L1=2", bx(10.0, 8.0, 1.0, 1.0), bx(11.0, 11.0, 1.0, 1.0)),
        ("L1=3", bx(10.0, 7.0, 1.0, 1.0), bx(11.5, 11.5, 1.0, 1.0)),
        ("L1=4", bx(10.0, 6.0, 1.0, 1.0), bx(12.0, 12.0, 1.0, 1.0)),
        ("L1=5", bx(10.0, 5.0, 1.0, 1.0), bx(12.5, 12.5, 1.0, 1.0)),
        ("L1=2b", bx(8.0, 10.0, 1.0, 1.0), bx(10.0 - 2f64.sqrt()/2.0*1.41421356, 10.0 + 1.0, 1.0, 1.0), ),
    ];
    for (name, on_axis, off_axis) in pairs {
        let on = fit(&on_axis, &target, LossKind::Siou, &SiouParams::default(), &cfg);
        let off = fit(&off_axis, &target, LossKind::Siou, &SiouParams::default(), &cfg);
        println!(
            "{name}: on-axis conv={:?} off-axis conv={:?} (init l1 {} vs {})",
            on.converged_at, off.converged_at, on.l1_errors[0], off.l1_errors[0]
        );
    }
}

#[test]
#[ignore]
fn probe_gradcheck_10k() {
    use boxloss_core::gradcheck::{sweep, GradCheckConfig};
    let t0 = Instant::now();
    for kind in LossKind::ALL {
        let report = sweep(&GradCheckConfig::new(kind, 10_000, 20260810));
        println!(
            "{kind}: checked={} skipped={} max={:.3e} mean={:.3e}",
            report.checked, report.kinks_skipped, report.max_rel_error, report.mean_rel_error
        );
    }
    println!("sweep took {:?}", t0.elapsed());
}
