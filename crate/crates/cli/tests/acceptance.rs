//! End-to-end acceptance checks. Prints one verdict line per criterion and
//! exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use osg_cli::{run_sweep, Model, ScenarioConfig};
use osg::entanglement::{closed_form_ppt_eigenvalues, degenerate_m, horodecki_m, jc_separability_value, ppt_report};
use osg::linalg::{hermitian_eigenvalues, EE};
use osg::models::{apply_local_phases, atom2_kerr_phase, rho_from_overlaps};
use osg::oracle::{build_full_state, internal_sum, oracle_overlap_set, oracle_rho, GridConfig};
use osg::{
    build_rho_jc, build_rho_sg, compute_overlap_set, jc_limit_overlap_set, sg_coefficients, InitialState,
    PhysicalParams, DEFAULT_PPT_TOLERANCE,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EPSILON: f64 = 1e6;

struct Outcome {
    pass: bool,
    detail: String,
}

fn caption() -> PhysicalParams {
    PhysicalParams::figure1(EPSILON)
}

fn at_rabi(frac: f64) -> PhysicalParams {
    let p = caption();
    let t = frac * p.rabi_period();
    p.with_interaction_time(t)
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Random physically valid scenario, including uneven schedules and moving
/// packets.
fn random_params(rng: &mut ChaCha8Rng) -> PhysicalParams {
    let wavelength = log_uniform(rng, 1e-6, 1e-4);
    let mut p = PhysicalParams::figure1(log_uniform(rng, 1e4, 1e7));
    p.mass = log_uniform(rng, 1e-27, 1e-24);
    p.wavelength = wavelength;
    p.x1 = rng.gen_range(0.01..0.24) * wavelength;
    p.x2 = rng.gen_range(0.01..0.24) * wavelength;
    p.sigma_x1 = rng.gen_range(0.01..0.2) * wavelength;
    p.sigma_x2 = rng.gen_range(0.01..0.2) * wavelength;
    p.p1 = rng.gen_range(-2.0..2.0) * p.packet1().sigma_p();
    p.p2 = rng.gen_range(-2.0..2.0) * p.packet2().sigma_p();
    let period = p.rabi_period();
    let t1 = rng.gen_range(0.0..1.5) * period;
    let t2 = t1 + rng.gen_range(0.0..1.0) * period;
    let t3 = t2 + rng.gen_range(0.0..1.5) * period;
    p.with_schedule(t1, t2, t3)
}

fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn ppt_closed_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let draws = 1000;
    let mut worst = 0.0_f64;
    for _ in 0..draws {
        let p = random_params(&mut rng);
        let o = compute_overlap_set(&p).unwrap();
        let closed = closed_form_ppt_eigenvalues(&sg_coefficients(&o)).sorted();
        let rho = rho_from_overlaps(&o, InitialState::Gg1).unwrap();
        let numeric = ppt_report(&rho, DEFAULT_PPT_TOLERANCE).unwrap().eigenvalues;
        worst = worst.max(max_abs(&closed, &numeric));
    }
    Outcome {
        pass: worst <= 1e-9,
        detail: format!("{draws} random scenarios, max |closed - numeric| = {worst:.2e} (tol 1e-9)"),
    }
}

fn jc_limit() -> Outcome {
    let base = caption();
    let eps = base.epsilon_jc();
    let n = 200;
    let (mut framed, mut raw, mut q_dev, mut kerr_max) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    let mut singular = 0;
    for j in 0..n {
        let theta = 2.0 * PI * j as f64 / (n - 1) as f64;
        let t = theta / eps;
        let p = base.clone().with_interaction_time(t);
        let o = jc_limit_overlap_set(&p).unwrap();
        let co = sg_coefficients(&o);
        let sg = rho_from_overlaps(&o, InitialState::Gg1).unwrap();
        let jc = build_rho_jc(eps, t, InitialState::Gg1).unwrap();
        raw = raw.max(sg.matrix().max_abs_diff(jc.matrix()));
        let kerr = atom2_kerr_phase(&p);
        kerr_max = kerr_max.max(kerr.abs());
        let jc_framed = apply_local_phases(&jc, 0.0, kerr).unwrap();
        framed = framed.max(sg.matrix().max_abs_diff(jc_framed.matrix()));
        // q is 0/0 where sin θ cos θ vanishes; judge |q| away from those points
        let nearest = (theta / (PI / 2.0)).round() * (PI / 2.0);
        if co.degenerate || (theta - nearest).abs() <= 1e-6 {
            singular += 1;
        } else {
            q_dev = q_dev.max((co.q.norm() - 1.0).abs());
        }
    }
    Outcome {
        pass: framed <= 1e-12 && q_dev <= 1e-12,
        detail: format!(
            "{n} points over [0, 2pi]: max residual {framed:.2e} after removing the atom-2 Kerr phase \
             (up to {kerr_max:.3} rad) from the coherence, raw residual {raw:.2e}, max ||q| - 1| = {q_dev:.2e} (tol 1e-12) \
             excluding {singular} points where q is 0/0"
        ),
    }
}

fn jc_separability() -> Outcome {
    let eps = caption().epsilon_jc();
    let n = 1000;
    let (mut checked, mut exempt, mut mismatches, mut exempt_separable) = (0, 0, Vec::new(), 0);
    for j in 0..n {
        let theta = 2.0 * PI * j as f64 / n as f64;
        let t = theta / eps;
        let rho = build_rho_jc(eps, t, InitialState::Gg1).unwrap();
        let separable = ppt_report(&rho, DEFAULT_PPT_TOLERANCE).unwrap().separable;
        let nearest_zero = (theta / (PI / 2.0)).round() * (PI / 2.0);
        if (theta - nearest_zero).abs() <= 1e-6 {
            exempt += 1;
            exempt_separable += usize::from(separable);
            continue;
        }
        checked += 1;
        let analytic_zero = jc_separability_value(eps, t) == 0.0;
        if separable != analytic_zero {
            mismatches.push(j);
        }
    }
    Outcome {
        pass: mismatches.is_empty(),
        detail: format!(
            "{n} points over one Rabi period: {checked} checked, {} disagree {mismatches:?}; \
             {exempt} boundary-exempt points ({exempt_separable} judged separable)",
            mismatches.len()
        ),
    }
}

fn overlap_law() -> Outcome {
    let base = caption();
    let grid = GridConfig::default();
    let n = 25;
    let (lo, hi) = (1e-3_f64, 0.3_f64);
    let mut worst = 0.0_f64;
    let mut smallest = 1.0_f64;
    for j in 0..n {
        let frac = (lo.ln() + (hi.ln() - lo.ln()) * j as f64 / (n - 1) as f64).exp();
        let t1 = frac * base.rabi_period();
        let p = base.clone().with_interaction_time(t1);
        // independent closed form: x± = x ∓ a t²/2, p± = ∓ħεk t
        let a = p.hbar * p.k() * p.epsilon / p.mass;
        let dx = a * t1 * t1;
        let dp = 2.0 * p.hbar * p.epsilon * p.k() * t1;
        let sx = p.sigma_x1;
        let sp = p.hbar / (2.0 * sx);
        let d2 = (dx / sx).powi(2) + (dp / sp).powi(2);
        let law = C64::from_polar((-d2 / 8.0).exp(), 2.0 * p.x1 * p.epsilon * p.k() * t1);
        let grid_value = oracle_overlap_set(&p, &grid).unwrap().atom1();
        smallest = smallest.min(law.norm());
        worst = worst.max((grid_value - law).norm() / law.norm());
    }
    Outcome {
        pass: worst <= 1e-8,
        detail: format!(
            "{n} log-spaced t1 in [{lo}, {hi}] Rabi periods (|overlap| down to {smallest:.1e}): max relative error {worst:.2e} (tol 1e-8)"
        ),
    }
}

fn oracle_equivalence() -> Outcome {
    let grid = GridConfig::default();
    let mut worst = 0.0_f64;
    for j in 0..10 {
        let p = at_rabi(0.02 + 0.05 * j as f64);
        for initial in [InitialState::Gg1, InitialState::Eg0] {
            let closed = build_rho_sg(&p, initial).unwrap();
            let g = oracle_rho(&p, initial, &grid).unwrap();
            worst = worst.max(closed.matrix().max_abs_diff(g.matrix()));
        }
    }
    // refinement on deliberately coarse grids, with the truncation guard relaxed
    let p = at_rabi(0.1);
    let mut series = Vec::new();
    for n in [16, 32, 64] {
        let g = GridConfig {
            clearance_sigmas: 2.0,
            ..GridConfig::with_points(n)
        };
        let mut r = 0.0_f64;
        for initial in [InitialState::Gg1, InitialState::Eg0] {
            let closed = build_rho_sg(&p, initial).unwrap();
            let sum = internal_sum(&build_full_state(&p, initial, &g).unwrap()).unwrap();
            r = r.max(closed.matrix().max_abs_diff(&sum));
        }
        series.push(r);
    }
    let refines = series.windows(2).all(|w| w[1] < w[0]);
    Outcome {
        pass: worst <= 1e-6 && refines,
        detail: format!(
            "10 times x 2 initial states on 2^14 points: max residual {worst:.2e} (tol 1e-6); \
             residual at 16/32/64 points: {:.1e} / {:.1e} / {:.1e}",
            series[0], series[1], series[2]
        ),
    }
}

fn damped_nonlocality() -> Outcome {
    let cfg = ScenarioConfig {
        model: Model::Sg,
        t_end: 2.0,
        steps: 401,
        ..Default::default()
    };
    let rows = run_sweep(&cfg).unwrap();
    let m_ok: Vec<bool> = rows.iter().map(|r| r.m_value <= 1.0 + 1e-9).collect();
    let ppt_ok: Vec<bool> = rows.iter().map(|r| r.ppt_min >= -1e-10).collect();
    let settle = |ok: &[bool]| ok.iter().rposition(|&b| !b).map_or(Some(0), |i| (i + 1 < ok.len()).then_some(i + 1));
    let t_bell = settle(&m_ok).map(|i| rows[i].t_rabi);
    let t_star = settle(&ppt_ok).map(|i| rows[i].t_rabi);
    let decays = |f: fn(&osg_cli::SweepRow) -> f64| {
        rows.windows(2).skip(1).all(|w| f(&w[1]) < f(&w[0]) || f(&w[0]) == 0.0)
    };
    let damping_ok = decays(|r| r.damping1) && decays(|r| r.damping2);
    let peak = rows.iter().map(|r| r.m_value).fold(f64::MIN, f64::max);
    let fmt = |t: Option<f64>| t.map_or("not reached".to_string(), |v| format!("{v:.3}"));
    Outcome {
        pass: t_bell.is_some() && t_star.is_some() && damping_ok,
        detail: format!(
            "M <= 1 + 1e-9 from T = {} and min PT eigenvalue >= -1e-10 from T* = {} Rabi periods onward; \
             peak M {peak:.12}; damping monotone: {damping_ok}",
            fmt(t_bell),
            fmt(t_star)
        ),
    }
}

fn periodic_nonlocality() -> Outcome {
    let eps = caption().epsilon_jc();
    let period = caption().rabi_period();
    // 0.5 Rabi periods = π/ε_JC = 100 steps
    let m: Vec<f64> = (0..401)
        .map(|i| {
            let t = i as f64 * 0.005 * period;
            horodecki_m(&build_rho_jc(eps, t, InitialState::Gg1).unwrap()).unwrap().m_value
        })
        .collect();
    let drift = (0..301).map(|i| (m[i] - m[i + 100]).abs()).fold(0.0, f64::max);
    let peak = m.iter().copied().fold(f64::MIN, f64::max);
    Outcome {
        pass: drift <= 1e-10 && peak > 1.0,
        detail: format!("period pi/eps_JC: max |M(T) - M(T + pi/eps_JC)| = {drift:.2e} (tol 1e-10), peak M = {peak:.6}"),
    }
}

fn eg0_reduction() -> Outcome {
    let base = caption();
    let period = base.rabi_period();
    let eps = base.epsilon_jc();
    let compare = |model: Model| {
        let (mut worst, mut worst_t, mut pair, mut verdicts, mut capped) = (0.0_f64, 0.0, 0.0_f64, 0usize, 0.0_f64);
        for i in 0..401 {
            let t_rabi = i as f64 * 0.005;
            let t = t_rabi * period;
            let (gg1, eg0) = match model {
                Model::Jc => (
                    build_rho_jc(eps, t, InitialState::Gg1).unwrap(),
                    build_rho_jc(eps, t, InitialState::Eg0).unwrap(),
                ),
                Model::Sg => {
                    let p = base.clone().with_interaction_time(t);
                    (build_rho_sg(&p, InitialState::Gg1).unwrap(), build_rho_sg(&p, InitialState::Eg0).unwrap())
                }
            };
            let g = degenerate_m(&gg1).unwrap();
            let e = degenerate_m(&eg0).unwrap();
            let r = (e.m_value - 2.0 * g.nu2).abs();
            if r > worst {
                worst = r;
                worst_t = t_rabi;
            }
            pair = pair.max((e.nu2 - g.nu2).abs());
            verdicts += usize::from((e.m_value > 1.0) != (2.0 * g.nu2 > 1.0));
            capped = capped.max((e.m_value.max(1.0) - (2.0 * g.nu2).max(1.0)).abs());
        }
        (worst, worst_t, pair, verdicts, capped)
    };
    let (jc, jc_t, jc_pair, jc_verdicts, jc_capped) = compare(Model::Jc);
    let (sg, sg_t, sg_pair, sg_verdicts, sg_capped) = compare(Model::Sg);
    Outcome {
        pass: jc <= 1e-9,
        detail: format!(
            "pointwise |M(eg0) - 2 nu2(gg1)|: jc {jc:.2e} at T = {jc_t} (tol 1e-9), sg {sg:.2e} at T = {sg_t}; \
             degenerate pair nu2 agrees to {jc_pair:.1e} (jc) / {sg_pair:.1e} (sg); \
             max(M, 1) agrees to {jc_capped:.1e} / {sg_capped:.1e}; Bell verdicts differ at {jc_verdicts} / {sg_verdicts} points"
        ),
    }
}

fn structural_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let draws = 10_000;
    let mut fails: Vec<String> = Vec::new();
    let mut w = [0.0_f64; 7];
    for d in 0..draws {
        let p = random_params(&mut rng);
        let co = sg_coefficients(&compute_overlap_set(&p).unwrap());
        let devs = [
            (co.c1 * co.c1 + co.c2 * co.c2 - 1.0).abs(),
            (co.p1 + co.p2 - 1.0).abs(),
            (co.q.norm() - 1.0).max(0.0),
        ];
        w[0] = w[0].max(devs[0]);
        w[1] = w[1].max(devs[1]);
        w[2] = w[2].max(devs[2]);
        for initial in [InitialState::Gg1, InitialState::Eg0] {
            // bypass constructor validation to measure the raw matrix
            let rho = match build_rho_sg(&p, initial) {
                Ok(r) => r.into_matrix(),
                Err(e) => {
                    fails.push(format!("draw {d} {initial}: {e}"));
                    continue;
                }
            };
            let herm = rho.max_abs_diff(&rho.dagger());
            let trace = (rho.trace() - C64::new(1.0, 0.0)).norm();
            let min_eig = hermitian_eigenvalues(&rho).unwrap()[0];
            let ee = rho[(EE, EE)].norm();
            w[3] = w[3].max(herm);
            w[4] = w[4].max(trace);
            w[5] = w[5].max(-min_eig);
            w[6] = w[6].max(ee);
        }
    }
    let pass = fails.is_empty()
        && w[0] <= 1e-12
        && w[1] <= 1e-12
        && w[2] <= 1e-10
        && w[3] <= 1e-12
        && w[4] <= 1e-12
        && w[5] <= 1e-10
        && w[6] <= 1e-12;
    Outcome {
        pass,
        detail: format!(
            "{draws} draws x 2 initial states: c1^2+c2^2-1 {:.1e}, P1+P2-1 {:.1e}, |q|-1 {:.1e}, \
             hermiticity {:.1e}, trace {:.1e}, -min eigenvalue {:.1e}, <ee|rho|ee> {:.1e}; {} constructor failures",
            w[0],
            w[1],
            w[2],
            w[3],
            w[4],
            w[5],
            w[6],
            fails.len()
        ),
    }
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("PPT closed form vs numeric", Duration::from_secs(10), ppt_closed_form),
        ("JC limit of the translational model", Duration::from_secs(5), jc_limit),
        ("JC separability zeros", Duration::from_secs(10), jc_separability),
        ("overlap damping and phase law vs quadrature", Duration::from_secs(30), overlap_law),
        ("grid state vs closed-form reduced state", Duration::from_secs(120), oracle_equivalence),
        ("damped non-locality", Duration::from_secs(30), damped_nonlocality),
        ("periodic non-locality", Duration::from_secs(5), periodic_nonlocality),
        ("eg0 M vs gg1 dashed line", Duration::from_secs(10), eg0_reduction),
        ("structural invariants", Duration::from_secs(30), structural_invariants),
    ];
    let mut passed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let ok = out.pass && in_time;
        passed += usize::from(ok);
        println!(
            "criterion {} {} {name}: {} [{:.2} s of {} s budget{}]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" }
        );
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed == criteria.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
