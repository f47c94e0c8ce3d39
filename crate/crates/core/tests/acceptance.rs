//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`cargo test --test acceptance`). Failures are
//! reported, and turn into a non-zero exit status when `ACCEPTANCE_STRICT`
//! is set.

use std::time::{Duration, Instant};

use nematic_core::config::{ExperimentConfig, TwinStart};
use nematic_core::experiment::{run_verification, twin_trajectories, verify_osgood, Lemma};
use nematic_core::initial::{
    generate_initial, random_field, rng_from_seed, Perturbation, Profile, RandomSpec,
};
use nematic_core::lp::{bony_block_decompose, bony_split};
use nematic_core::{
    DyadicPartition, Grid, GridSpec, LeslieCoefficients, Padding, Scheme, Solver, SolverConfig,
    SpectralField, State, VectorField2,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn rel_l2(a: &SpectralField, b: &SpectralField, scale: f64) -> f64 {
    let d: f64 = a
        .coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    d.sqrt() / scale
}

fn l2(f: &SpectralField) -> f64 {
    f.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

// 1. partition of unity, quasi-orthogonality, Bony split, block decomposition
fn spectral_exactness() -> Outcome {
    const TOL: f64 = 1e-12;
    const BUDGET: Duration = Duration::from_secs(30);
    let start = Instant::now();
    let grid = Grid::with_size(64).unwrap();
    let part = DyadicPartition::new(&grid);
    let qs: Vec<i32> = part.block_indices().collect();
    let (mut pou, mut orth, mut bony, mut four) = (0f64, 0f64, 0f64, 0f64);
    for i in 0..100u64 {
        let mut rng = rng_from_seed(10_000 + i);
        let f = random_field(&grid, &mut rng, |k| (1.0 + k).powi(-2));
        let g = random_field(&grid, &mut rng, |k| (1.0 + k).powi(-2));
        let nf = l2(&f);

        let blocks = part.blocks_of(&f);
        let mut sum = SpectralField::zeros(&grid);
        for b in &blocks {
            sum.axpy(1.0, b);
        }
        pou = pou.max(rel_l2(&sum, &f, nf));

        for (a, &p) in qs.iter().enumerate() {
            for &q in &qs[a..] {
                if q - p >= 2 {
                    let pq = blocks[(q - qs[0]) as usize].apply_multiplier(part.block(p));
                    orth = orth.max(l2(&pq) / nf);
                }
            }
        }

        let fg = f.mul_field(&g).unwrap();
        let nfg = l2(&fg);
        let split = bony_split(&part, &f, &g).unwrap();
        bony = bony.max(rel_l2(&split.sum(), &fg, nfg));

        for &q in &qs {
            let d = bony_block_decompose(&part, &f, &g, q).unwrap();
            let target = fg.apply_multiplier(part.block(q));
            four = four.max(rel_l2(&d.sum(), &target, nfg));
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: pou <= TOL && orth <= TOL && bony <= TOL && four <= TOL && elapsed < BUDGET,
        detail: format!(
            "max relative errors: partition {pou:.1e}, quasi-orthogonality {orth:.1e}, bony {bony:.1e}, \
             four-term {four:.1e} (tol {TOL:.0e}); {:.1} s (budget {} s)",
            elapsed.as_secs_f64(),
            BUDGET.as_secs()
        ),
    }
}

fn run_to_end(
    grid: &Grid,
    state: &State,
    dt: f64,
    t_end: f64,
    scheme: Scheme,
    trace_every: u64,
) -> (State, nematic_core::leslie::RunSummary) {
    let mut cfg = SolverConfig::new(
        grid.spec(),
        dt,
        t_end,
        LeslieCoefficients::ansatz(1.0).unwrap(),
    );
    cfg.scheme = scheme;
    cfg.trace_every = trace_every;
    let mut solver = Solver::with_grid(cfg, grid).unwrap();
    let mut s = state.clone();
    let summary = solver.run(&mut s, |_| Ok(())).unwrap();
    (s, summary)
}

// 2. discrete energy inequality and first-order convergence of its residual
fn energy_inequality() -> Outcome {
    const DT: f64 = 1e-3;
    const BUDGET: Duration = Duration::from_secs(300);
    let start = Instant::now();
    let grid = Grid::with_size(64).unwrap();
    let mut ok = true;
    let (mut worst_bound, mut ratios) = (f64::NEG_INFINITY, Vec::new());
    for seed in 0..10u64 {
        // smooth enough that dt = 1e-3 is past the stiff initial transient
        let profile = Profile::Random(RandomSpec {
            seed,
            decay: 4.0,
            amplitude: 1.0,
        });
        let s0 = generate_initial(&grid, &profile).unwrap();
        let (_, coarse) = run_to_end(&grid, &s0, DT, 1.0, Scheme::Imex1, 1000);
        let (_, fine) = run_to_end(&grid, &s0, DT / 2.0, 1.0, Scheme::Imex1, 2000);
        let bound = 5.0 * DT * coarse.initial_energy;
        let used = coarse.max_residual() / bound;
        let ratio = coarse.max_abs_residual() / fine.max_abs_residual();
        ok &= used <= 1.0 && (1.7..=2.3).contains(&ratio);
        worst_bound = worst_bound.max(used);
        ratios.push(ratio);
    }
    let elapsed = start.elapsed();
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
            (a.min(*r), b.max(*r))
        });
    Outcome {
        pass: ok && elapsed < BUDGET,
        detail: format!(
            "10 seeds (s0=4), N=64, nu=1, dt=1e-3: max residual / (5 dt E0) = {worst_bound:.3}; \
             halving ratios in [{lo:.3}, {hi:.3}] (need [1.7, 2.3]); {:.1} s (budget {} s)",
            elapsed.as_secs_f64(),
            BUDGET.as_secs()
        ),
    }
}

fn twin_config(start: TwinStart) -> ExperimentConfig {
    let mut c = ExperimentConfig::default();
    c.grid = GridSpec::new(64, Padding::Two).unwrap();
    c.dt = 1e-3;
    c.t_end = 1.0;
    c.output.trace_every = 10;
    c.initial = Profile::Random(RandomSpec {
        seed: 11,
        decay: 3.0,
        amplitude: 1.0,
    });
    c.perturbation = Some(start);
    c
}

// 3. identical data give identical trajectories
fn uniqueness_sanity() -> Outcome {
    let res = twin_trajectories(&twin_config(TwinStart::Identical), None).unwrap();
    Outcome {
        pass: res.max_phi <= 1e-20,
        detail: format!(
            "N=64, t in [0,1], {} samples: max Phi = {:.3e} (tol 1e-20)",
            res.records.len(),
            res.max_phi
        ),
    }
}

// 4. master inequality on perturbed twins and ordering in delta
fn master_inequality() -> Outcome {
    let deltas = [1e-8, 1e-6, 1e-4];
    let runs: Vec<_> = deltas
        .iter()
        .map(|&delta| {
            let p = Perturbation {
                seed: 99,
                delta,
                decay: 2.0,
            };
            twin_trajectories(&twin_config(TwinStart::Perturbed(p)), None).unwrap()
        })
        .collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for (d, r) in deltas.iter().zip(&runs) {
        ok &= r.report.holds && r.report.c_fit.is_finite();
        parts.push(format!(
            "delta={d:.0e}: holds={} C_fit={:.3}",
            r.report.holds, r.report.c_fit
        ));
    }
    // pointwise Phi(small) <= 1.05 Phi(large)
    let mut worst = 0f64;
    for w in runs.windows(2) {
        for (a, b) in w[0].records.iter().zip(&w[1].records) {
            worst = worst.max(a.phi / b.phi);
        }
    }
    ok &= worst <= 1.05;
    Outcome {
        pass: ok,
        detail: format!(
            "{}; max Phi(smaller delta)/Phi(larger delta) = {worst:.3e} (need <= 1.05)",
            parts.join(", ")
        ),
    }
}

// 5. Osgood certificate and the convergent control
fn osgood_condition() -> Outcome {
    let o = verify_osgood().unwrap();
    let sqrt = &o.controls[0];
    let pass = o.paper.strictly_increasing() && sqrt.last_increment().abs() <= 1e-6;
    Outcome {
        pass,
        detail: format!(
            "double-log I(eps) at eps=1e-6..1e-48: {:?}; sqrt control last increment {:.2e} (tol 1e-6)",
            o.paper.integrals.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>(),
            sqrt.last_increment()
        ),
    }
}

// 6. lemma suite at N = 64 and 128
fn lemma_suite() -> Outcome {
    const BUDGET: Duration = Duration::from_secs(600);
    let start = Instant::now();
    let mut cfg = ExperimentConfig::default();
    cfg.verify.trials = 100;
    let o = run_verification(&cfg, Lemma::All, &[64, 128]).unwrap();
    let elapsed = start.elapsed();
    let failed: Vec<String> = o
        .ratios
        .iter()
        .filter(|(_, r)| !r.verdict)
        .map(|(n, r)| format!("{}@{n}", r.lemma))
        .collect();
    let worst_spread = o.ratios.iter().map(|(_, r)| r.spread).fold(0.0, f64::max);
    let worst_identity = o
        .identities
        .iter()
        .map(|(_, r)| r.max_relative)
        .fold(0.0, f64::max);
    let pass = failed.is_empty()
        && o.ratios.len() == 2 * 21
        && worst_identity <= 1e-11
        && elapsed < BUDGET;
    Outcome {
        pass,
        detail: format!(
            "{} ratio families, worst spread {worst_spread:.2} (limit 10){}; identity residual {worst_identity:.1e} \
             (tol 1e-11); {:.1} s (budget {} s)",
            o.ratios.len(),
            if failed.is_empty() { String::new() } else { format!(", failed: {}", failed.join(" ")) },
            elapsed.as_secs_f64(),
            BUDGET.as_secs()
        ),
    }
}

fn director_error(scheme: Scheme) -> f64 {
    let grid = Grid::with_size(32).unwrap();
    let d0 = [0.3, 0.4];
    let r0 = (d0[0] * d0[0] + d0[1] * d0[1]) as f64;
    let s = State::new(
        VectorField2::zeros(&grid),
        VectorField2::constant(&grid, d0),
        0.0,
    )
    .unwrap();
    let (end, _) = run_to_end(&grid, &s, 1e-3, 1.0, scheme, 1000);
    // |d|^2 = 1 / (1 + (1/|d0|^2 - 1) e^{-2t}), direction fixed
    let r = (1.0 / (1.0 + (1.0 / r0 - 1.0) * (-2f64).exp())).sqrt() / r0.sqrt();
    let exact = [d0[0] * r, d0[1] * r];
    let got = [end.d.0[0].mean().re, end.d.0[1].mean().re];
    let err = ((got[0] - exact[0]).powi(2) + (got[1] - exact[1]).powi(2)).sqrt();
    err / (exact[0].hypot(exact[1]))
}

// 7. spatially uniform director against the closed form
fn director_ode() -> Outcome {
    let e1 = director_error(Scheme::Imex1);
    let e2 = director_error(Scheme::Imex2);
    Outcome {
        pass: e1 <= 1e-6,
        detail: format!(
            "d0=(0.3,0.4), dt=1e-3, t=1: relative error {e1:.3e} with the first-order scheme (tol 1e-6); \
             second-order scheme {e2:.3e}"
        ),
    }
}

// 8. rest state with unit director is a fixed point
fn steady_state() -> Outcome {
    let grid = Grid::with_size(64).unwrap();
    let rest = State::rest_unit(&grid);
    let mut worst = 0f64;
    for scheme in [Scheme::Imex1, Scheme::Imex2] {
        let mut cfg = SolverConfig::new(
            grid.spec(),
            1e-3,
            1.0,
            LeslieCoefficients::ansatz(1.0).unwrap(),
        );
        cfg.scheme = scheme;
        let mut solver = Solver::with_grid(cfg, &grid).unwrap();
        let mut s = rest.clone();
        for _ in 0..1000 {
            solver.step(&mut s).unwrap();
            for (a, b) in
                s.u.0
                    .iter()
                    .chain(&s.d.0)
                    .zip(rest.u.0.iter().chain(&rest.d.0))
            {
                for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                    worst = worst.max((x - y).norm());
                }
            }
        }
    }
    Outcome {
        pass: worst <= 1e-14,
        detail: format!(
            "N=64, 1000 steps, both schemes: max coefficient deviation {worst:.1e} (tol 1e-14)"
        ),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("spectral exactness", spectral_exactness),
        ("energy inequality", energy_inequality),
        ("uniqueness sanity", uniqueness_sanity),
        ("master inequality", master_inequality),
        ("osgood condition", osgood_condition),
        ("lemma suite uniformity", lemma_suite),
        ("constant-director ODE", director_ode),
        ("steady state", steady_state),
    ];
    let mut passed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        passed += o.pass as usize;
        println!(
            "criterion {} [{name}]: {} - {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed < criteria.len() && std::env::var_os("ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
