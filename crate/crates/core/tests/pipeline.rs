use srvreg::curve::Reparam;
use srvreg::diagnostics::{
    backtrack_through, geodesic_error_bound, linf_error, run_convergence, total_value, ConvergenceConfig,
};
use srvreg::geodesic::{geodesic, registered_srv};
use srvreg::registration::{backtrack, eval_jh};
use srvreg::{samples, shape_distance, solve, GridSpec, Problem, Scheme, SchemeConfig, Solution};

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn run(problem: &Problem, n: usize, scheme: Scheme) -> Solution {
    solve(problem, GridSpec::new(n).unwrap(), &SchemeConfig::new(scheme)).unwrap()
}

#[test]
fn unit_forcing_path_hugs_diagonal() {
    let problem = samples::segment_pair(100);
    let (q1, q2) = problem.srv_fields().unwrap().unwrap();
    for n in [20, 40, 80] {
        let h = 1.0 / n as f64;
        let path = backtrack(&run(&problem, n, Scheme::U1).policy).unwrap();
        assert!(path.max_diagonal_offset() <= h, "N={n}");
        assert!(eval_jh(&path, &q1, &q2) >= 1.0 - 5.0 * h);
    }
}

#[test]
fn mobius_segments_register_under_refinement() {
    let problem = Problem::curves(
        samples::segment_reparam(2000, &Reparam::psi1()),
        samples::segment_reparam(2000, &Reparam::psi2()),
    );
    let (q1, q2) = problem.srv_fields().unwrap().unwrap();
    let mismatch = |n| {
        let path = backtrack(&run(&problem, n, Scheme::VInf).policy).unwrap();
        let reg = registered_srv(&path, &q1, &q2);
        reg.q1
            .iter()
            .zip(&reg.q2)
            .zip(&reg.dts)
            .map(|((a, b), dt)| distance(a, b).powi(2) * dt)
            .sum::<f64>()
            .sqrt()
    };
    let errs: Vec<f64> = [20, 40, 80, 160].into_iter().map(mismatch).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn same_shape_distance_shrinks() {
    let problem = samples::semicircle_mobius_pair(1000);
    let (q1, q2) = problem.srv_fields().unwrap().unwrap();
    let d: Vec<f64> = [20, 40, 80, 160]
        .into_iter()
        .map(|n| {
            let path = backtrack(&run(&problem, n, Scheme::VInf).policy).unwrap();
            shape_distance(eval_jh(&path, &q1, &q2))
        })
        .collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
}

#[test]
fn geodesic_start_rebuilds_curve() {
    let problem = Problem::curves(samples::s_curve(400), samples::s_curve(400));
    let Problem::Curves { c1, .. } = &problem else { unreachable!() };
    let (q1, q2) = problem.srv_fields().unwrap().unwrap();
    let n = 80;
    let path = backtrack(&run(&problem, n, Scheme::VInf).policy).unwrap();
    let geo = geodesic(&path, &q1, &q2, &[0.0, 0.5, 1.0]).unwrap();
    assert!(geo.distance < 1e-6);
    let len = c1.length();
    for (k, p) in path.points().iter().enumerate() {
        let target: Vec<f64> = c1.eval(p[0]).iter().zip(c1.point(0)).map(|(a, b)| (a - b) / len).collect();
        assert!(distance(&target, geo.curves[0].point(k)) <= 2.0 / n as f64);
        // identical curves: the geodesic does not move
        assert!(distance(geo.curves[0].point(k), geo.curves[1].point(k)) < 1e-12);
    }
}

#[test]
fn total_value_unit_forcing() {
    let n = 80;
    let h = 1.0 / n as f64;
    let t = total_value(&Problem::constant_one(), GridSpec::new(n).unwrap(), &SchemeConfig::new(Scheme::V1)).unwrap();
    for i in 0..=n {
        for j in 0..=n {
            let (a, b) = (i as f64 * h, j as f64 * h);
            let exact = (a * b).sqrt() + ((1.0 - a) * (1.0 - b)).sqrt();
            assert!((t.u_tot.u(i, j) - exact).abs() < 1e-12);
        }
    }
    for m in t.maxima() {
        assert!(m.i.abs_diff(m.j) <= 2);
    }
}

#[test]
fn total_value_reflection_symmetry() {
    let f = |a: f64, b: f64| 1.0 + 0.5 * (3.0 * (a - 0.5)).cos() * (2.0 * (b - 0.5)).cos();
    let n = 40;
    for scheme in [Scheme::U1, Scheme::VInf] {
        let t = total_value(&Problem::function(f), GridSpec::new(n).unwrap(), &SchemeConfig::new(scheme)).unwrap();
        let forward = t.forward.value.to_u();
        let reverse = t.reverse.value.to_u();
        for i in 0..=n {
            for j in 0..=n {
                assert!((forward.u(i, j) - reverse.u(i, j)).abs() < 1e-12);
                assert!((t.u_tot.u(i, j) - t.u_tot.u(n - i, n - j)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn backtrack_through_optimum_and_off_diagonal() {
    let problem = samples::semicircle_s_pair(400);
    let (q1, q2) = problem.srv_fields().unwrap().unwrap();
    let n = 64;
    let t = total_value(&problem, GridSpec::new(n).unwrap(), &SchemeConfig::new(Scheme::U1)).unwrap();
    let global = backtrack(&t.forward.policy).unwrap();
    let node = global
        .points()
        .iter()
        .map(|p| ((p[0] * n as f64).round() as usize, (p[1] * n as f64).round() as usize))
        .find(|&(i, j)| i > n / 3 && j > n / 3 && i < n && j < n)
        .expect("grid node on the global path");
    let through = backtrack_through(node, &t.forward.policy, &t.reverse.policy).unwrap();
    let (a, b) = (eval_jh(&through, &q1, &q2), eval_jh(&global, &q1, &q2));
    assert!((a - b).abs() < 0.05, "{a} vs {b}");

    let ones = total_value(&samples::segment_pair(100), GridSpec::new(n).unwrap(), &SchemeConfig::new(Scheme::U1)).unwrap();
    let (s1, s2) = samples::segment_pair(100).srv_fields().unwrap().unwrap();
    let off = ones.path_through(16, 40).unwrap();
    assert!(off.points().contains(&[0.25, 0.625]));
    assert!(eval_jh(&off, &s1, &s2) < 1.0 - 1e-3);
}

#[test]
fn maxima_paths_are_valid() {
    let problem = samples::semicircle_s_pair(400);
    let n = 48;
    let t = total_value(&problem, GridSpec::new(n).unwrap(), &SchemeConfig::default()).unwrap();
    let maxima = t.maxima();
    assert!(!maxima.is_empty());
    for m in maxima {
        let p = t.path_through(m.i, m.j).unwrap();
        let pts = p.points();
        assert_eq!(pts[0], [0.0, 0.0]);
        assert_eq!(*pts.last().unwrap(), [1.0, 1.0]);
        assert!(pts.contains(&[m.i as f64 / n as f64, m.j as f64 / n as f64]));
    }
}

#[test]
fn linf_against_fine_reference() {
    let p = Problem::constant_one();
    let reference = run(&p, 640, Scheme::U1);
    let e: Vec<f64> = [40, 80, 160]
        .into_iter()
        .map(|n| linf_error(&run(&p, n, Scheme::U1).value, &reference.value).unwrap())
        .collect();
    assert!(e[0] > 0.0);
    assert!(e.windows(2).all(|w| w[1] < w[0]), "{e:?}");
}

#[test]
fn geodesic_bound_shrinks_for_mobius_pair() {
    let problem = samples::semicircle_mobius_pair(1000);
    let (q1, q2) = problem.srv_fields().unwrap().unwrap();
    let reg = |n| registered_srv(&backtrack(&run(&problem, n, Scheme::Ddp).policy).unwrap(), &q1, &q2);
    let fine = reg(320);
    let b40 = geodesic_error_bound(&reg(40), &fine);
    let b80 = geodesic_error_bound(&reg(80), &fine);
    assert!(b80 < b40, "{b80} vs {b40}");
}

#[test]
fn convergence_columns_on_unit_forcing() {
    let cfg = ConvergenceConfig::new(vec![Scheme::U1, Scheme::VInf], vec![20, 40, 80], 160);
    let report = run_convergence(&Problem::constant_one(), &cfg).unwrap();
    for s in [Scheme::U1, Scheme::VInf] {
        let e: Vec<f64> = report.rows_for(s).map(|r| r.linf_u_error).collect();
        assert_eq!(e.len(), 3);
        assert!(e.windows(2).all(|w| w[1] < w[0]), "{s}: {e:?}");
    }
    let json: serde_json::Value = serde_json::from_str(&report.to_json().unwrap()).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 6);
    assert!(report.rows.iter().all(|r| r.dist_j_error.is_nan()));
}
