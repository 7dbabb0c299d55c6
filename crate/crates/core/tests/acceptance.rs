//! Acceptance criteria. Runs sequentially (no test harness) so each runtime
//! budget is measured on an otherwise idle process; prints one line per
//! criterion and exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use optomech::fluctuations::{log_negativity_two_mode, sweep_observables, ObservableRow};
use optomech::meanfield::{adiabatic_step, integrate, rhs_full, zero_crossing_frequency, Dynamics, TrajectoryConfig};
use optomech::stability::classify_matrix;
use optomech::steadystate::{linspace, sweep_detuning, BranchTable, ScanOptions};
use optomech::{integrate_cm, solve_lyapunov, MeanFieldState, Model};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

const ONSET_KAPPA: f64 = 60.0;
const ONSET_SLACK_KAPPA: f64 = 5.0;
const WEAK_ENTANGLEMENT_MAX: f64 = 0.04;
const INJECTED_ENTANGLEMENT_MIN: f64 = 0.1;
const STRONG_SQUEEZING_DB: f64 = 9.0;
const STRONG_ENTANGLEMENT_MIN: f64 = 0.9;
const MODERATE_SQUEEZING_DB: f64 = 6.3;
const THREE_DB_LIMIT: f64 = 3.0;
const LYAPUNOV_RESIDUAL: f64 = 1e-8;
const CROSS_METHOD_AGREEMENT: f64 = 1e-6;
const CONVERGENCE_SLOPE: f64 = 4.0;
const CONVERGENCE_SLOPE_SLACK: f64 = 0.3;
const FIXED_POINT_RESIDUAL: f64 = 1e-9;
const ZERO_POINT: f64 = 0.5;
const TWO_MODE_TOLERANCE: f64 = 1e-9;
const MULTISTABILITY_SPAN_KAPPA: f64 = 120.0;
const THRESHOLD_SPAN_KAPPA: f64 = 400.0;
const FLUCTUATION_GRID: usize = 400;
const FLUCTUATION_SPAN_KAPPA: f64 = 400.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn kappa_grid(model: &Model, start: f64, end: f64, n: usize) -> Vec<f64> {
    linspace(start, end, n)
        .into_iter()
        .map(|d| d * model.params.kappa)
        .collect()
}

fn fluctuation_rows(xi2_ratio: f64, injections: &[bool]) -> Vec<ObservableRow> {
    let model = reference_model();
    let deltas = kappa_grid(&model, 0.0, FLUCTUATION_SPAN_KAPPA, FLUCTUATION_GRID);
    sweep_observables(&model, &deltas, &[xi2_ratio], injections, ScanOptions::default()).unwrap()
}

fn max_of(rows: &[ObservableRow], pick: impl Fn(&optomech::FluctuationObservables) -> f64) -> f64 {
    rows.iter()
        .filter_map(|r| r.observables.as_ref().map(&pick))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn first_count(table: &BranchTable, count: usize) -> Option<f64> {
    table
        .deltas
        .iter()
        .zip(&table.points)
        .find(|(_, pts)| pts.len() == count)
        .map(|(d, _)| *d)
}

fn bistability_onset() -> Outcome {
    let model = reference_model();
    let table = sweep_detuning(
        &model,
        &kappa_grid(&model, 0.0, MULTISTABILITY_SPAN_KAPPA, 241),
        ScanOptions::default(),
    )
    .unwrap();
    let kappa = model.params.kappa;
    let Some(fold) = table.folds.first() else {
        return outcome(
            false,
            format!("no fold found in [0, {MULTISTABILITY_SPAN_KAPPA}] kappa"),
        );
    };
    let onset = fold.delta_c / kappa;
    let single_before = table
        .deltas
        .iter()
        .zip(table.root_counts())
        .all(|(d, c)| *d > fold.delta_lo || c == 1);
    let pass = fold.count_before == 1
        && fold.count_after == 3
        && single_before
        && (onset - ONSET_KAPPA).abs() <= ONSET_SLACK_KAPPA;
    outcome(
        pass,
        format!(
            "first fold {}->{} at delta_c = {onset:.2} kappa (required {ONSET_KAPPA}+-{ONSET_SLACK_KAPPA})",
            fold.count_before, fold.count_after
        ),
    )
}

fn tristability() -> Outcome {
    let model = reference_model();
    let kappa = model.params.kappa;
    // Count over the bistability sweep range; thresholds over the full range.
    let deltas = kappa_grid(&model, 0.0, THRESHOLD_SPAN_KAPPA, 401);
    let strong = sweep_detuning(&model.with_xi2_ratio(-0.005), &deltas, ScanOptions::default()).unwrap();
    let weak = sweep_detuning(&model.with_xi2_ratio(-0.003), &deltas, ScanOptions::default()).unwrap();
    let in_range: Vec<_> = strong
        .deltas
        .iter()
        .zip(&strong.points)
        .filter(|(d, _)| **d <= MULTISTABILITY_SPAN_KAPPA * kappa)
        .map(|(_, pts)| pts)
        .collect();
    let max_count = in_range.iter().map(|pts| pts.len()).max().unwrap_or(0);
    let split = in_range
        .iter()
        .filter(|pts| pts.len() == 5)
        .any(|pts| pts.iter().filter(|p| p.stable).count() == 3);
    let (first_strong, first_weak) = (first_count(&strong, 5), first_count(&weak, 5));
    let earlier = match (first_strong, first_weak) {
        (Some(s), Some(w)) => s < w,
        _ => false,
    };
    let fmt = |d: Option<f64>| d.map_or("none".to_string(), |d| format!("{:.1}", d / kappa));
    outcome(
        max_count == 5 && split && earlier,
        format!(
            "xi2 = -0.005 xi1 over [0, {MULTISTABILITY_SPAN_KAPPA}] kappa: max count {max_count}, \
             3 stable + 2 unstable seen: {split}; first 5-root detuning {} < {} kappa (xi2 = -0.003 xi1)",
            fmt(first_strong),
            fmt(first_weak)
        ),
    )
}

fn weak_entanglement() -> Outcome {
    let rows = fluctuation_rows(0.0, &[false]);
    let en = max_of(&rows, |o| o.log_negativity);
    outcome(
        en < WEAK_ENTANGLEMENT_MAX,
        format!("xi2 = 0, no injection: max E_N = {en:.4} (< {WEAK_ENTANGLEMENT_MAX})"),
    )
}

fn injected_entanglement() -> Outcome {
    let rows = fluctuation_rows(0.0, &[true]);
    let en = max_of(&rows, |o| o.log_negativity);
    outcome(
        en > INJECTED_ENTANGLEMENT_MIN,
        format!("xi2 = 0, squeezed injection: max E_N = {en:.4} (> {INJECTED_ENTANGLEMENT_MIN})"),
    )
}

fn strong_squeezing() -> Outcome {
    let strong = fluctuation_rows(0.01, &[false]);
    let moderate = fluctuation_rows(0.005, &[false]);
    let (sq, en) = (
        max_of(&strong, |o| o.squeezing_mech_db),
        max_of(&strong, |o| o.log_negativity),
    );
    let sq_moderate = max_of(&moderate, |o| o.squeezing_mech_db);
    outcome(
        sq >= STRONG_SQUEEZING_DB && en >= STRONG_ENTANGLEMENT_MIN && sq_moderate >= MODERATE_SQUEEZING_DB,
        format!(
            "xi2 = +0.01 xi1: {sq:.2} dB (>= {STRONG_SQUEEZING_DB}), E_N {en:.3} (>= {STRONG_ENTANGLEMENT_MIN}); \
             xi2 = +0.005 xi1: {sq_moderate:.2} dB (>= {MODERATE_SQUEEZING_DB})"
        ),
    )
}

fn three_db_limit() -> Outcome {
    let maxima: Vec<(f64, f64)> = [0.0, -0.003, -0.005]
        .iter()
        .map(|&r| (r, max_of(&fluctuation_rows(r, &[false]), |o| o.squeezing_mech_db)))
        .collect();
    let pass = maxima.iter().all(|(_, sq)| *sq <= THREE_DB_LIMIT);
    let detail = maxima
        .iter()
        .map(|(r, sq)| format!("xi2/xi1 = {r}: {sq:.3} dB"))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(pass, format!("{detail} (<= {THREE_DB_LIMIT} dB)"))
}

fn property_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);

    let worst_residual = (0..100)
        .map(|_| {
            let (a, d) = (random_stable(&mut rng), random_psd(&mut rng));
            let cm = solve_lyapunov(&a, &d).unwrap();
            cm.lyapunov_residual(&a, &d) / d.amax()
        })
        .fold(0.0, f64::max);
    if worst_residual > LYAPUNOV_RESIDUAL {
        failures.push(format!("lyapunov residual {worst_residual:.2e}"));
    }

    let worst_agreement = (0..20)
        .map(|_| {
            let (a, d) = (random_stable(&mut rng), random_psd(&mut rng));
            let direct = solve_lyapunov(&a, &d).unwrap();
            let integrated = integrate_cm(&a, &d, 1000.0, 0.01).unwrap();
            rel_diff(&integrated.v, &direct.v)
        })
        .fold(0.0, f64::max);
    if worst_agreement > CROSS_METHOD_AGREEMENT {
        failures.push(format!("lyapunov vs integration {worst_agreement:.2e}"));
    }

    let mut disagreements = 0;
    let mut checked = 0;
    for _ in 0..1000 {
        let a = DMatrix::from_column_slice(6, 6, random_matrix(&mut rng).as_slice());
        let verdict = classify_matrix(&a);
        if verdict.marginal {
            continue;
        }
        checked += 1;
        if verdict.stable != (max_real_eigenvalue(&a) < 0.0) {
            disagreements += 1;
        }
    }
    if disagreements > 0 {
        failures.push(format!("routh disagrees on {disagreements}/{checked}"));
    }

    let slope = rk4_convergence_slope();
    if (slope - CONVERGENCE_SLOPE).abs() > CONVERGENCE_SLOPE_SLACK {
        failures.push(format!("convergence slope {slope:.3}"));
    }

    let model = reference_model();
    let kappa = model.params.kappa;
    let mut worst_fixed_point: f64 = 0.0;
    let mut stable_points = 0;
    for ratio in [0.0, -0.003, -0.005, 0.005, 0.01] {
        let m = model.with_xi2_ratio(ratio);
        let table = sweep_detuning(&m, &kappa_grid(&m, 0.0, 400.0, 401), ScanOptions::default()).unwrap();
        for p in table.points.iter().flatten().filter(|p| p.stable) {
            let d = rhs_full(&m.with_delta_c(p.delta_c), &p.state).unwrap();
            worst_fixed_point = d.iter().fold(worst_fixed_point, |w, v| w.max(v.abs() / kappa));
            stable_points += 1;
        }
    }
    if worst_fixed_point > FIXED_POINT_RESIDUAL {
        failures.push(format!("fixed-point residual {worst_fixed_point:.2e} kappa"));
    }

    let mut min_p_variance = f64::INFINITY;
    for ratio in [0.0, -0.003, -0.005, 0.005, 0.01] {
        for row in fluctuation_rows(ratio, &[false, true]) {
            if let Some(o) = row.observables {
                min_p_variance = min_p_variance.min(o.sigma_mech_p).min(o.sigma_bog_p);
            }
        }
    }
    if min_p_variance < ZERO_POINT {
        failures.push(format!("p-quadrature variance {min_p_variance:.6}"));
    }

    let worst_two_mode = [0.1, 0.5, 1.0]
        .iter()
        .map(|&r| (log_negativity_two_mode(&two_mode_squeezed(r)).unwrap() - 2.0 * r).abs())
        .fold(0.0, f64::max);
    if worst_two_mode > TWO_MODE_TOLERANCE {
        failures.push(format!("two-mode squeezed E_N error {worst_two_mode:.2e}"));
    }

    let summary = format!(
        "residual {worst_residual:.1e}, cross-method {worst_agreement:.1e}, routh {}/{checked} agree, \
         slope {slope:.3}, fixed point {worst_fixed_point:.1e} kappa over {stable_points} points, \
         min V44/V66 {min_p_variance:.4}, two-mode E_N error {worst_two_mode:.1e}",
        checked - disagreements
    );
    if failures.is_empty() {
        outcome(true, summary)
    } else {
        outcome(false, format!("{summary}; failed: {}", failures.join(", ")))
    }
}

fn frequency_ordering() -> Outcome {
    let model = reference_model().with_delta_c(50.0 * reference_model().params.kappa);
    let p = model.params;
    let frequency = |ratio: f64| {
        let m = model.with_xi2_ratio(ratio);
        let cfg = TrajectoryConfig {
            dynamics: Dynamics::Adiabatic,
            t_end: 1.0 / p.gamma_m,
            dt: adiabatic_step(&m),
            sample_stride: 1,
            initial: MeanFieldState::ZERO,
        };
        let traj = integrate(&m, &cfg).unwrap();
        zero_crossing_frequency(&traj.times, &traj.mech_q()).unwrap_or(f64::NAN)
    };
    let (plus, zero, minus) = (frequency(0.003), frequency(0.0), frequency(-0.003));
    outcome(
        plus > zero && zero > minus,
        format!("q oscillation: {plus:.1} > {zero:.1} > {minus:.1} rad/s (xi2 = +0.003, 0, -0.003 xi1)"),
    )
}

type Criterion = (&'static str, &'static str, Option<Duration>, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "1",
            "bistability onset",
            Some(Duration::from_secs(1)),
            bistability_onset,
        ),
        ("2", "tristability", Some(Duration::from_secs(2)), tristability),
        (
            "3a",
            "weak entanglement",
            Some(Duration::from_secs(5)),
            weak_entanglement,
        ),
        (
            "3b",
            "injected entanglement",
            Some(Duration::from_secs(5)),
            injected_entanglement,
        ),
        ("4", "strong squeezing", None, strong_squeezing),
        ("5", "3 dB limit", None, three_db_limit),
        ("6", "property suite", Some(Duration::from_secs(30)), property_suite),
        (
            "7",
            "frequency ordering",
            Some(Duration::from_secs(10)),
            frequency_ordering,
        ),
    ];
    let mut failed = Vec::new();
    for (id, name, budget, run) in criteria {
        let started = Instant::now();
        let result = run();
        let elapsed = started.elapsed();
        let in_budget = budget.is_none_or(|b| elapsed <= b);
        let pass = result.pass && in_budget;
        println!(
            "[{}] criterion {id} {name}: {}; {:.2} s{}",
            if pass { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64(),
            match budget {
                Some(b) if in_budget => format!(" (budget {} s)", b.as_secs()),
                Some(b) => format!(" (budget {} s exceeded)", b.as_secs()),
                None => String::new(),
            }
        );
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
