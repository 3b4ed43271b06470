//! Acceptance criteria, one PASS/FAIL line each. Oracles here are written
//! directly against nalgebra and plain `f64` loops.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Mutex;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use infoprox::bench::{bench_config, run_row};
use infoprox::factories::{
    make_classical_capacity, make_classical_rd, make_ea_capacity, make_ree_ppt, random_instance,
    Dims, InstanceData, InstanceSpec,
};
use infoprox::matfun::{CMatrix, Hermitian, C64};
use infoprox::problems::{
    bipartite_mutual_information, classical_mutual_information, ClassicalChannel, ProblemKind,
    SaddleProblem, StinespringChannel,
};
use infoprox::random::{
    random_channel, random_density, random_simplex, random_unitary, seeded_rng,
};
use infoprox::solvers::{solve, tau_min, Algorithm, RunTrace, Solution, SolverConfig};
use infoprox::{Dual, Point};

const LN2: f64 = std::f64::consts::LN_2;
/// Objective increase tolerated between mirror-descent iterates.
const DESCENT_TOL: f64 = 1e-12;

type Outcome = Result<String, String>;

type MdRun = (String, std::result::Result<(f64, Vec<f64>), String>);

/// Every mirror-descent run: label, `f(x^0)`, then `f(x^k)` per iteration.
static MD_RUNS: Mutex<Vec<MdRun>> = Mutex::new(Vec::new());

fn md(
    label: &str,
    problem: &SaddleProblem,
    config: SolverConfig,
) -> infoprox::Result<(Solution, RunTrace)> {
    let config = SolverConfig {
        algorithm: Algorithm::Md,
        ..config
    };
    let result = solve(problem, &config);
    let entry = match (&result, problem.f(&problem.initial_point())) {
        (Ok((_, trace)), Ok(f0)) => Ok((f0, trace.records.iter().map(|r| r.f).collect())),
        (Err(e), _) => Err(e.to_string()),
        (_, Err(e)) => Err(e.to_string()),
    };
    MD_RUNS.lock().unwrap().push((label.to_string(), entry));
    result
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn binary_entropy(x: f64) -> f64 {
    let h = |t: f64| if t > 0.0 { -t * t.ln() } else { 0.0 };
    h(x) + h(1.0 - x)
}

fn kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(a, _)| **a > 0.0)
        .map(|(a, b)| a * (a / b).ln())
        .sum()
}

/// Mutual information `sum_j p_j KL(Q_j || Qp)`, columns of `q` are inputs.
fn mutual_information(q: &DMatrix<f64>, p: &[f64]) -> f64 {
    let out: Vec<f64> = (0..q.nrows())
        .map(|i| (0..q.ncols()).map(|j| q[(i, j)] * p[j]).sum())
        .collect();
    (0..q.ncols())
        .filter(|&j| p[j] > 0.0)
        .map(|j| p[j] * kl(q.column(j).as_slice(), &out))
        .sum()
}

fn herm_eigen(h: &Hermitian) -> (DVector<f64>, CMatrix) {
    let eig = h.matrix().clone().symmetric_eigen();
    (eig.eigenvalues, eig.eigenvectors)
}

fn herm_log(h: &Hermitian) -> CMatrix {
    let (vals, vecs) = herm_eigen(h);
    let d = CMatrix::from_diagonal(&vals.map(|v| C64::new(v.ln(), 0.0)));
    &vecs * d * vecs.adjoint()
}

/// `tr rho (log rho - log sigma)` for full-rank states.
fn qre(rho: &Hermitian, sigma: &Hermitian) -> f64 {
    (rho.matrix() * (herm_log(rho) - herm_log(sigma)))
        .trace()
        .re
}

/// Trace over the second factor of `C^a (x) C^b`.
fn trace_second(h: &Hermitian, a: usize, b: usize) -> Hermitian {
    let m = h.matrix();
    let out = CMatrix::from_fn(a, a, |i, j| (0..b).map(|k| m[(i * b + k, j * b + k)]).sum());
    Hermitian::new(out).unwrap()
}

fn vector(x: &Point) -> &DVector<f64> {
    x.as_vector().unwrap()
}

fn interior_simplex(rng: &mut impl Rng, n: usize) -> DVector<f64> {
    random_simplex(rng, n) * 0.5 + DVector::from_element(n, 0.5 / n as f64)
}

fn interior_density(rng: &mut impl Rng, n: usize) -> Hermitian {
    random_density(rng, n).scale(0.5) + Hermitian::maximally_mixed(n).scale(0.5)
}

fn bell() -> Hermitian {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    Hermitian::outer(&[C64::new(s, 0.0), z, z, C64::new(s, 0.0)])
}

fn product_state(seed: u64) -> Hermitian {
    let mut rng = seeded_rng(seed);
    let a = interior_density(&mut rng, 2);
    let b = interior_density(&mut rng, 2);
    a.kron(&b)
}

// Criterion 1

fn bsc_problem() -> SaddleProblem {
    make_classical_capacity(ClassicalChannel::binary_symmetric(0.1).unwrap(), None).unwrap()
}

fn criterion_1() -> Outcome {
    let exact = LN2 - binary_entropy(0.1);
    let start = Instant::now();
    let (sol, _) = md("bsc", &bsc_problem(), SolverConfig::default()).map_err(err)?;
    let secs = start.elapsed().as_secs_f64();
    let error = sol.objective - exact;
    ensure(error.abs() <= 1e-7, format!("error {error:.3e}"))?;
    ensure(
        sol.iterations <= 500,
        format!("{} iterations", sol.iterations),
    )?;
    ensure(secs < 1.0, format!("{secs:.3} s"))?;
    Ok(format!(
        "C = {:.9}, error {error:.1e}, {} iterations, {secs:.4} s",
        sol.objective, sol.iterations
    ))
}

// Criterion 2

const CRD_TOL: f64 = 1e-13;

fn binary_rd(d: f64) -> SaddleProblem {
    make_classical_rd(&DVector::from_element(2, 0.5), None, d).unwrap()
}

fn crd_config() -> SolverConfig {
    SolverConfig {
        algorithm: Algorithm::PdhgBt,
        kappa: Some(10.0),
        tol: CRD_TOL,
        max_iters: 200_000,
        ..SolverConfig::default()
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (sol, _) = solve(&binary_rd(0.1), &crd_config()).map_err(err)?;
    let secs = start.elapsed().as_secs_f64();
    let error = sol.objective - (LN2 - binary_entropy(0.1));
    ensure(error.abs() <= 1e-5, format!("D = 0.1: error {error:.3e}"))?;
    ensure(secs < 5.0, format!("D = 0.1: {secs:.3} s"))?;
    let mut worst: f64 = 0.0;
    for d in [0.5, 0.75, 1.0] {
        let (s, _) = solve(&binary_rd(d), &crd_config()).map_err(err)?;
        ensure(
            s.objective.abs() <= 1e-6,
            format!("D = {d}: R = {:.3e}", s.objective),
        )?;
        worst = worst.max(s.objective.abs());
    }
    Ok(format!(
        "R(0.1) error {error:.1e} in {} iterations, {secs:.4} s; max |R(D >= 0.5)| = {worst:.1e}",
        sol.iterations
    ))
}

// Criterion 3

const GRID_COARSE: f64 = 1e-3;
const GRID_FINE: f64 = 1e-5;
const ORACLE_TOL: f64 = 1e-4;

struct CapacityCase {
    seed: u64,
    problem: SaddleProblem,
    channel: DMatrix<f64>,
    energy: DMatrix<f64>,
    bounds: Vec<f64>,
}

fn capacity_cases() -> Vec<CapacityCase> {
    (0..20u64)
        .map(|seed| {
            let m = 2 + (seed as usize % 2);
            let spec = random_instance(ProblemKind::Cc, Dims::new(3, m, 1), 1000 + seed).unwrap();
            let InstanceData::Cc { channel, energy } = &spec.data else {
                unreachable!()
            };
            let rows = |r: &[Vec<f64>]| DMatrix::from_fn(r.len(), r[0].len(), |i, j| r[i][j]);
            let energy = energy.as_ref().unwrap();
            CapacityCase {
                seed,
                problem: spec.build().unwrap(),
                channel: rows(channel),
                energy: rows(&energy.matrix),
                bounds: energy.bounds.clone(),
            }
        })
        .collect()
}

fn grid_capacity(case: &CapacityCase) -> f64 {
    let m = case.channel.ncols();
    let feasible = |p: &[f64]| {
        p.iter().all(|&v| v >= 0.0)
            && (0..case.energy.nrows())
                .all(|i| (0..m).map(|j| case.energy[(i, j)] * p[j]).sum::<f64>() <= case.bounds[i])
    };
    let eval = |p: &[f64]| {
        if feasible(p) {
            mutual_information(&case.channel, p)
        } else {
            f64::NEG_INFINITY
        }
    };
    let point = |a: f64, b: f64| -> Vec<f64> {
        if m == 2 {
            vec![a, 1.0 - a]
        } else {
            vec![a, b, 1.0 - a - b]
        }
    };
    let search = |lo: (f64, f64), hi: (f64, f64), step: f64| -> (f64, (f64, f64)) {
        let steps = |l: f64, h: f64| ((h - l) / step).round() as usize;
        let mut best = (f64::NEG_INFINITY, lo);
        for i in 0..=steps(lo.0, hi.0) {
            let a = lo.0 + i as f64 * step;
            let nb = if m == 2 { 0 } else { steps(lo.1, hi.1) };
            for k in 0..=nb {
                let b = lo.1 + k as f64 * step;
                let p = point(a, b);
                let v = eval(&p);
                if v > best.0 {
                    best = (v, (a, b));
                }
            }
        }
        best
    };
    let (_, (a, b)) = search((0.0, 0.0), (1.0, 1.0), GRID_COARSE);
    let clip = |t: f64| t.clamp(0.0, 1.0);
    let w = 2.0 * GRID_COARSE;
    search(
        (clip(a - w), clip(b - w)),
        (clip(a + w), clip(b + w)),
        GRID_FINE,
    )
    .0
}

fn capacity_config() -> SolverConfig {
    SolverConfig {
        algorithm: Algorithm::PdhgBt,
        tol: 1e-11,
        max_iters: 200_000,
        ..SolverConfig::default()
    }
}

fn criterion_3(cases: &[CapacityCase]) -> Outcome {
    let results = infoprox::parallel::map(cases, |case| -> Result<f64, String> {
        let (sol, _) = solve(&case.problem, &capacity_config()).map_err(err)?;
        let oracle = grid_capacity(case);
        let gap = sol.objective - oracle;
        ensure(
            gap.abs() <= ORACLE_TOL,
            format!(
                "seed {}: pdhg {} vs grid {oracle}",
                case.seed, sol.objective
            ),
        )?;
        Ok(gap.abs())
    });
    let worst = results
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(format!(
        "{} instances, max |pdhg - grid| = {worst:.1e}",
        cases.len()
    ))
}

// Criterion 4

const REE_TOL: f64 = 1e-11;

fn ree_config() -> SolverConfig {
    SolverConfig {
        algorithm: Algorithm::PdhgBt,
        tol: REE_TOL,
        max_iters: 200_000,
        ..SolverConfig::default()
    }
}

fn criterion_4() -> Outcome {
    let timed = |run: &dyn Fn() -> Result<f64, String>| -> Result<(f64, f64), String> {
        let start = Instant::now();
        let v = run()?;
        Ok((v, start.elapsed().as_secs_f64()))
    };
    let (ea, t_ea) = timed(&|| {
        let problem = make_ea_capacity(StinespringChannel::identity(2), None).map_err(err)?;
        Ok(md("ea identity", &problem, SolverConfig::default())
            .map_err(err)?
            .0
            .objective)
    })?;
    let (bell_ree, t_bell) = timed(&|| {
        Ok(
            solve(&make_ree_ppt(&bell(), 2, 2).map_err(err)?, &ree_config())
                .map_err(err)?
                .0
                .objective,
        )
    })?;
    let mut product_max = f64::NEG_INFINITY;
    let mut t_product: f64 = 0.0;
    for seed in 0..3 {
        let (v, t) = timed(&|| {
            Ok(solve(
                &make_ree_ppt(&product_state(seed), 2, 2).map_err(err)?,
                &ree_config(),
            )
            .map_err(err)?
            .0
            .objective)
        })?;
        product_max = product_max.max(v);
        t_product = t_product.max(t);
    }
    ensure((ea - 2.0 * LN2).abs() <= 1e-6, format!("ea identity {ea}"))?;
    ensure(
        (bell_ree - LN2).abs() <= 1e-4,
        format!("Bell REE {bell_ree}"),
    )?;
    ensure(product_max <= 1e-8, format!("product REE {product_max:e}"))?;
    let slowest = t_ea.max(t_bell).max(t_product);
    ensure(slowest < 10.0, format!("slowest run {slowest:.3} s"))?;
    Ok(format!(
        "ea error {:.1e}, Bell REE error {:.1e}, product REE max {product_max:.1e}, slowest {slowest:.3} s",
        ea - 2.0 * LN2,
        bell_ree - LN2
    ))
}

// Criterion 5

fn criterion_5() -> Outcome {
    let runs = MD_RUNS.lock().unwrap();
    let mut steps = 0;
    let mut violations = Vec::new();
    for (label, entry) in runs.iter() {
        match entry {
            Err(e) => violations.push(format!("{label}: {e}")),
            Ok((f0, fs)) => {
                let mut prev = *f0;
                for (k, &f) in fs.iter().enumerate() {
                    if f > prev + DESCENT_TOL * prev.abs().max(1.0) {
                        violations.push(format!("{label} iteration {}: {prev} -> {f}", k + 1));
                    }
                    prev = f;
                    steps += 1;
                }
            }
        }
    }
    ensure(violations.is_empty(), violations.join("; "))?;
    Ok(format!(
        "{} runs, {steps} steps, no increase beyond {DESCENT_TOL:e}",
        runs.len()
    ))
}

// Criterion 6

const CERT_ITERS: usize = 300;
const CERT_SLACK: f64 = 1e-12;

fn sublinear_certificate(label: &str, problem: &SaddleProblem) -> Result<usize, String> {
    let run = |iters| SolverConfig {
        tol: f64::MIN_POSITIVE,
        max_iters: iters,
        ..SolverConfig::default()
    };
    let (_, trace) = md(label, problem, run(CERT_ITERS)).map_err(err)?;
    let (reference, ref_trace) =
        md(&format!("{label} reference"), problem, run(10 * CERT_ITERS)).map_err(err)?;
    let f_star = ref_trace
        .records
        .iter()
        .map(|r| r.f)
        .fold(problem.f(&reference.x).map_err(err)?, f64::min);
    let d0 = problem
        .kernel
        .divergence(&reference.x, &problem.initial_point())
        .map_err(err)?;
    let l = problem.smoothness;
    for r in &trace.records {
        let bound = l / r.iter as f64 * d0;
        ensure(
            r.f - f_star <= bound + CERT_SLACK,
            format!(
                "{label} k = {}: gap {:e} > bound {bound:e}",
                r.iter,
                r.f - f_star
            ),
        )?;
    }
    Ok(trace.len())
}

fn criterion_6() -> Outcome {
    let z_channel =
        ClassicalChannel::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.0, 0.7])).unwrap();
    let cases = vec![
        ("bsc", bsc_problem()),
        (
            "z-channel",
            make_classical_capacity(z_channel, None).unwrap(),
        ),
        (
            "ea identity",
            make_ea_capacity(StinespringChannel::identity(2), None).unwrap(),
        ),
        (
            "product REE inner",
            make_ree_ppt(&product_state(0), 2, 2)
                .unwrap()
                .unconstrained(),
        ),
    ];
    let mut logged = 0;
    for (label, problem) in &cases {
        logged += sublinear_certificate(label, problem)?;
    }
    Ok(format!(
        "{} problems, {logged} logged iterates within (L/k) D(x*||x0)",
        cases.len()
    ))
}

// Criterion 7

fn criterion_7() -> Outcome {
    let mut rng = seeded_rng(77);
    let mut eigs: Vec<f64> = (0..4).map(|_| rng.random_range(1.0..4.0)).collect();
    let total: f64 = eigs.iter().sum();
    eigs.iter_mut().for_each(|e| *e /= total);
    let u = random_unitary(&mut rng, 4);
    let rho = Hermitian::from_eigen(&eigs, &u);
    let (lmin, lmax) = eigs
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &e| (a.min(e), b.max(e)));
    ensure(lmax / lmin <= 4.0, "condition number above 4")?;

    let problem = make_ree_ppt(&rho, 2, 2).map_err(err)?.unconstrained();
    let config = SolverConfig {
        step: Some(1.0 / lmax),
        tol: f64::MIN_POSITIVE,
        max_iters: 60,
        ..SolverConfig::default()
    };
    let (_, trace) = md("REE linear rate", &problem, config).map_err(err)?;
    // Inner minimum at sigma = rho; sigma^0 = I/4, so the log-det divergence uses eigenvalues 4 lambda.
    let f_star: f64 = eigs.iter().map(|e| -e * e.ln()).sum();
    let d0: f64 = eigs.iter().map(|e| 4.0 * e - (4.0 * e).ln() - 1.0).sum();
    let slack = 64.0 * f64::EPSILON * f_star.abs().max(1.0);
    let rate = 1.0 - lmin / lmax;
    let mut tightest = f64::INFINITY;
    for r in &trace.records {
        let bound = rate.powi(r.iter as i32) * lmax * d0;
        let gap = r.f - f_star;
        ensure(
            gap <= bound + slack,
            format!("k = {}: gap {gap:e} > bound {bound:e}", r.iter),
        )?;
        tightest = tightest.min(bound - gap);
    }
    Ok(format!(
        "cond {:.2}, {} iterates within (1 - 1/cond)^k L D, min slack {tightest:.1e}",
        lmax / lmin,
        trace.len()
    ))
}

// Criterion 8

const ERGODIC_ITERS: usize = 200;
/// Reference saddle point; looser runs leave `A x* - b` large enough to bias the gap.
const ERGODIC_REF_TOL: f64 = 1e-15;
/// Reference saddle point error allowed below zero.
const ERGODIC_NEG_TOL: f64 = 1e-8;
const ERGODIC_SLACK: f64 = 1e-10;

fn criterion_8(cases: &[CapacityCase]) -> Outcome {
    let results = infoprox::parallel::map(cases, |case| -> Result<f64, String> {
        let problem = &case.problem;
        let (star, _) = solve(
            problem,
            &SolverConfig {
                tol: ERGODIC_REF_TOL,
                ..capacity_config()
            },
        )
        .map_err(err)?;
        let config = SolverConfig {
            algorithm: Algorithm::Pdhg,
            tol: f64::MIN_POSITIVE,
            max_iters: ERGODIC_ITERS,
            record_iterates: true,
            ..SolverConfig::default()
        };
        let (run, trace) = solve(problem, &config).map_err(err)?;
        let x0 = problem.initial_point();
        let z0 = problem.constraints.zero_dual();
        let d0 = problem.kernel.divergence(&star.x, &x0).map_err(err)?;
        let dz = star.z.sub(&z0).norm_sq();
        let mut min_gap = f64::INFINITY;
        for k in 1..=trace.len() {
            let (xa, za): (Point, Dual) = trace.ergodic_averages_upto(k).unwrap().map_err(err)?;
            let gap = problem.lagrangian(&xa, &star.z).map_err(err)?
                - problem.lagrangian(&star.x, &za).map_err(err)?;
            let bound = (d0 / run.tau + dz / (2.0 * run.gamma)) / k as f64;
            ensure(
                gap >= -ERGODIC_NEG_TOL,
                format!("seed {} k = {k}: gap {gap:e}", case.seed),
            )?;
            ensure(
                gap <= bound + ERGODIC_SLACK,
                format!("seed {} k = {k}: gap {gap:e} > {bound:e}", case.seed),
            )?;
            min_gap = min_gap.min(gap);
        }
        Ok(min_gap)
    });
    let min_gap = results
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(format!(
        "{} instances x {ERGODIC_ITERS} averages, min gap {min_gap:.1e}",
        cases.len()
    ))
}

// Criterion 9

fn criterion_9() -> Outcome {
    let config = crd_config();
    let mut worst_margin = f64::INFINITY;
    let mut max_trials = 0;
    for d in [0.1, 0.5, 0.75, 1.0] {
        let problem = binary_rd(d);
        let (_, trace) = solve(&problem, &config).map_err(err)?;
        let opnorm = problem
            .constraints
            .operator_norm(&problem.initial_point(), config.power_iters, config.seed)
            .map_err(err)?;
        let floor = tau_min(1.0, config.alpha, 1.0, opnorm, 10.0);
        let margin = trace.min_tau() - floor;
        ensure(
            margin >= -1e-12,
            format!("D = {d}: min tau {} below {floor}", trace.min_tau()),
        )?;
        worst_margin = worst_margin.min(margin);
        max_trials = max_trials.max(
            trace
                .records
                .iter()
                .map(|r| r.backtracks + 1)
                .max()
                .unwrap_or(0),
        );
    }
    ensure(max_trials <= 200, format!("{max_trials} trials"))?;
    Ok(format!(
        "min tau - tau_min >= {worst_margin:.3e}, at most {max_trials} trials per iteration"
    ))
}

// Criterion 10

const FD_STEP: f64 = 1e-6;
const FD_REL_TOL: f64 = 1e-5;
/// Directional derivatives smaller than this are compared absolutely.
const FD_FLOOR: f64 = 1e-3;

fn random_tangent(rng: &mut impl Rng, x: &Point, columns: Option<usize>) -> Point {
    match x {
        Point::Vector(v) => {
            let mut d = DVector::from_fn(v.len(), |_, _| rng.random_range(-1.0..1.0));
            let rows = columns.map_or(v.len(), |c| v.len() / c);
            for col in d.as_mut_slice().chunks_mut(rows) {
                let mean = col.iter().sum::<f64>() / rows as f64;
                col.iter_mut().for_each(|e| *e -= mean);
            }
            Point::Vector(d)
        }
        Point::Matrix(h) => {
            let n = h.dim();
            let g = CMatrix::from_fn(n, n, |_, _| {
                C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let s = Hermitian::new((&g + g.adjoint()) * C64::new(0.5, 0.0)).unwrap();
            Point::Matrix(s.axpy(-s.trace() / n as f64, &Hermitian::identity(n)))
        }
    }
}

fn gradient_check(
    label: &str,
    problem: &SaddleProblem,
    points: &[Point],
    columns: Option<usize>,
) -> Result<f64, String> {
    let mut rng = seeded_rng(10);
    let mut worst: f64 = 0.0;
    for x in points {
        let (_, g) = problem.objective.value_and_gradient(x).map_err(err)?;
        let v = random_tangent(&mut rng, x, columns);
        let v = v.scale(0.1 / v.norm_inf());
        let f = |t: f64| problem.objective.value(&x.axpy(t, &v)).unwrap();
        let fd = (f(FD_STEP) - f(-FD_STEP)) / (2.0 * FD_STEP);
        let exact = g.inner(&v);
        let rel = (fd - exact).abs() / exact.abs().max(FD_FLOOR);
        ensure(rel <= FD_REL_TOL, format!("{label}: fd {fd} vs {exact}"))?;
        worst = worst.max(rel);
    }
    Ok(worst)
}

fn family_spec(kind: ProblemKind, seed: u64) -> InstanceSpec {
    let dims = match kind {
        ProblemKind::Ree | ProblemKind::Qrd => Dims::new(2, 2, 0),
        _ => Dims::new(3, 3, 0),
    };
    random_instance(kind, dims, seed).unwrap()
}

fn family(kind: ProblemKind, seed: u64) -> SaddleProblem {
    family_spec(kind, seed).build().unwrap()
}

fn ree_lambda_max(spec: &InstanceSpec) -> f64 {
    let InstanceData::Ree { state, .. } = &spec.data else {
        unreachable!()
    };
    let n = state.len();
    let m = CMatrix::from_fn(n, n, |i, j| C64::new(state[i][j][0], state[i][j][1]));
    herm_eigen(&Hermitian::new(m).unwrap()).0.max()
}

fn interior_point(rng: &mut impl Rng, problem: &SaddleProblem) -> Point {
    match &problem.domain {
        infoprox::Domain::Simplex(n) => Point::Vector(interior_simplex(rng, *n)),
        infoprox::Domain::Density(n) => Point::Matrix(interior_density(rng, *n)),
        infoprox::Domain::FixedMarginal { rows, marginal } => {
            let cols: Vec<DVector<f64>> = marginal
                .iter()
                .map(|p| interior_simplex(rng, *rows) * *p)
                .collect();
            Point::Vector(DVector::from_iterator(
                rows * marginal.len(),
                cols.iter().flat_map(|c| c.iter().copied()),
            ))
        }
        infoprox::Domain::Free(n) => {
            Point::Vector(DVector::from_fn(*n, |_, _| rng.random_range(-1.0..1.0)))
        }
    }
}

fn criterion_10() -> Outcome {
    let mut worst: f64 = 0.0;
    for kind in ProblemKind::ALL {
        let problem = family(kind, 5);
        let mut rng = seeded_rng(100 + kind as u64);
        let points: Vec<Point> = (0..10)
            .map(|_| interior_point(&mut rng, &problem))
            .collect();
        let columns = match &problem.domain {
            infoprox::Domain::FixedMarginal { marginal, .. } => Some(marginal.len()),
            _ => None,
        };
        worst = worst.max(gradient_check(kind.name(), &problem, &points, columns)?);
    }
    Ok(format!(
        "6 oracles x 10 points, max relative error {worst:.1e}"
    ))
}

// Criterion 11

const SMOOTH_SAMPLES: usize = 1000;

fn criterion_11() -> Outcome {
    let mut rng = seeded_rng(11);
    let mut worst_c: f64 = 0.0;
    for _ in 0..100 {
        let (n, m) = (rng.random_range(2..6), rng.random_range(2..6));
        let q = random_channel(&mut rng, n, m);
        let channel = ClassicalChannel::new(q.clone()).map_err(err)?;
        let p = interior_simplex(&mut rng, m);
        let r = interior_simplex(&mut rng, m);
        let (_, gp) = classical_mutual_information(&p, &channel).map_err(err)?;
        let (_, gr) = classical_mutual_information(&r, &channel).map_err(err)?;
        let lhs = p.dot(&(gr - gp));
        let rhs = kl((&q * &p).as_slice(), (&q * &r).as_slice());
        ensure(
            (lhs - rhs).abs() <= 1e-9,
            format!("classical identity {lhs} vs {rhs}"),
        )?;
        worst_c = worst_c.max((lhs - rhs).abs());
    }

    let mut worst_q: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(2..4);
        let rho = interior_density(&mut rng, n * n);
        let sigma = interior_density(&mut rng, n * n);
        let (_, g_rho) = bipartite_mutual_information(&rho, n, n, 0.0).map_err(err)?;
        let (_, g_sigma) = bipartite_mutual_information(&sigma, n, n, 0.0).map_err(err)?;
        let lhs = rho.inner(&(g_sigma - g_rho));
        let rhs = qre(&trace_second(&rho, n, n), &trace_second(&sigma, n, n)) - qre(&rho, &sigma);
        ensure(
            (lhs - rhs).abs() <= 1e-8,
            format!("quantum identity {lhs} vs {rhs}"),
        )?;
        worst_q = worst_q.max((lhs - rhs).abs());
    }

    let mut violations = 0;
    for kind in ProblemKind::ALL {
        let instances: Vec<SaddleProblem> = (0..10).map(|s| family(kind, 200 + s)).collect();
        for (s, problem) in (200..).zip(&instances) {
            let l = match kind {
                ProblemKind::Ea => 2.0,
                ProblemKind::Ree => ree_lambda_max(&family_spec(kind, s)),
                _ => 1.0,
            };
            ensure(
                (problem.smoothness - l).abs() <= 1e-12,
                format!("{kind}: smoothness {} != {l}", problem.smoothness),
            )?;
        }
        for i in 0..SMOOTH_SAMPLES {
            let problem = &instances[i % instances.len()];
            let x = interior_point(&mut rng, problem);
            let y = interior_point(&mut rng, problem);
            let x = if i % 4 == 0 { skew_to_boundary(&x) } else { x };
            let fx = problem.f(&x).map_err(err)?;
            let (fy, gy) = problem.f_and_grad(&y).map_err(err)?;
            let lhs = fx - fy - gy.inner(&x.sub(&y));
            let rhs = problem.smoothness * problem.kernel.divergence(&x, &y).map_err(err)?;
            if lhs > rhs + 1e-10 * rhs.abs().max(1.0) {
                violations += 1;
            }
        }
    }
    ensure(
        violations == 0,
        format!("{violations} relative-smoothness violations"),
    )?;
    Ok(format!(
        "classical identity max error {worst_c:.1e}, quantum {worst_q:.1e}, 6 x {SMOOTH_SAMPLES} smoothness samples"
    ))
}

/// Pulls a point toward a low-entropy corner while staying interior.
fn skew_to_boundary(x: &Point) -> Point {
    match x {
        Point::Vector(v) => {
            let w = v.map(|e| e.powi(4));
            let s = v.sum() / w.sum();
            Point::Vector(w * s)
        }
        Point::Matrix(h) => {
            let (vals, vecs) = herm_eigen(h);
            let sharp: Vec<f64> = vals.iter().map(|e| e.powi(4)).collect();
            let total: f64 = sharp.iter().sum();
            Point::Matrix(Hermitian::from_eigen(
                &sharp.iter().map(|e| e / total).collect::<Vec<_>>(),
                &vecs,
            ))
        }
    }
}

// Criterion 12

fn blahut_arimoto_step(q: &DMatrix<f64>, p: &[f64]) -> Vec<f64> {
    let out: Vec<f64> = (0..q.nrows())
        .map(|i| (0..q.ncols()).map(|j| q[(i, j)] * p[j]).sum())
        .collect();
    let c: Vec<f64> = (0..q.ncols())
        .map(|j| kl(q.column(j).as_slice(), &out).exp())
        .collect();
    let z: f64 = p.iter().zip(&c).map(|(a, b)| a * b).sum();
    p.iter().zip(&c).map(|(a, b)| a * b / z).collect()
}

fn criterion_12() -> Outcome {
    let mut rng = seeded_rng(12);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let (n, m) = (rng.random_range(2..8), rng.random_range(2..8));
        let q = random_channel(&mut rng, n, m);
        let problem = make_classical_capacity(ClassicalChannel::new(q.clone()).map_err(err)?, None)
            .map_err(err)?;
        let p = if i % 2 == 0 {
            interior_simplex(&mut rng, m)
        } else {
            DVector::from_element(m, 1.0 / m as f64)
        };
        let x = Point::Vector(p.clone());
        let (_, grad) = problem.f_and_grad(&x).map_err(err)?;
        let next = problem
            .kernel
            .mirror_step(&problem.domain, &x, &grad, 1.0)
            .map_err(err)?;
        let ba = blahut_arimoto_step(&q, p.as_slice());
        let diff = vector(&next)
            .iter()
            .zip(&ba)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        ensure(
            diff <= 1e-12,
            format!("channel {i}: max difference {diff:e}"),
        )?;
        worst = worst.max(diff);
        if i % 2 == 1 {
            let config = SolverConfig {
                step: Some(1.0),
                tol: f64::MIN_POSITIVE,
                max_iters: 1,
                record_iterates: true,
                ..SolverConfig::default()
            };
            let (_, trace) = md("one step from uniform", &problem, config).map_err(err)?;
            let solver_x = &trace.iterates.as_ref().unwrap().primal[1];
            let d = vector(solver_x)
                .iter()
                .zip(&ba)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            ensure(
                d <= 1e-12,
                format!("channel {i}: solver step differs by {d:e}"),
            )?;
            worst = worst.max(d);
        }
    }
    Ok(format!(
        "50 channels, max elementwise difference {worst:.1e}"
    ))
}

// Criterion 13

fn criterion_13() -> Outcome {
    let rows: Vec<(ProblemKind, (usize, usize), usize)> = vec![
        (ProblemKind::Cc, (4, 1), 400),
        (ProblemKind::Ree, (2, 2), 390),
    ];
    let mut summary = Vec::new();
    for (kind, size, cap) in rows {
        let mut worst = 0;
        for seed in 0..8 {
            let row = run_row(kind, size, seed, &bench_config(seed));
            let outcome = row
                .outcome
                .map_err(|e| format!("{kind} seed {seed}: {e}"))?;
            ensure(
                outcome.termination == infoprox::solvers::Termination::Converged
                    && outcome.iters <= cap,
                format!(
                    "{kind} seed {seed}: {} iterations ({:?})",
                    outcome.iters, outcome.termination
                ),
            )?;
            worst = worst.max(outcome.iters);
        }
        summary.push(format!("{kind} {}x{} max {worst} <= {cap}", size.0, size.1));
    }
    Ok(summary.join(", "))
}

fn run(number: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    let secs = start.elapsed().as_secs_f64();
    let (tag, detail) = match &outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("criterion {number:>2} {tag} {name}: {detail} [{secs:.2} s]");
    outcome.is_ok()
}

fn main() {
    let cases = capacity_cases();
    let results = [
        run(1, "closed-form capacity", criterion_1),
        run(2, "closed-form rate-distortion", criterion_2),
        run(3, "constrained capacity vs grid", || criterion_3(&cases)),
        run(4, "quantum sanity", criterion_4),
        run(6, "sublinear certificate", criterion_6),
        run(7, "linear-rate certificate", criterion_7),
        run(8, "ergodic gap", || criterion_8(&cases)),
        run(9, "backtracking floor", criterion_9),
        run(10, "gradient oracles", criterion_10),
        run(11, "identities and relative smoothness", criterion_11),
        run(12, "Blahut-Arimoto equivalence", criterion_12),
        run(13, "iteration counts", criterion_13),
        run(5, "monotone descent", criterion_5),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
