//! Coexisting steady states, their stability, and detuning sweeps.
//!
//! In steady state the oscillator displacements are closed-form functions of
//! the photon number `I`, so every fixed point is a root of the scalar
//! function `f(I) = I(Δ(I)² + κ²) − η²`. Roots are found by a dense scan
//! followed by bisection, in units where `κ = 1`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::NumericalError;
use crate::meanfield::adiabatic_alpha;
use crate::model::Model;
use crate::stability::{classify_stability, StabilityVerdict};
use crate::state::MeanFieldState;
use crate::tolerances::ROOT_DEDUP;

/// Steady-state oscillator displacements for a given photon number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Displacements {
    pub mech_q: f64,
    pub mech_p: f64,
    pub bog_q: f64,
    pub bog_p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchPoint {
    /// Detuning δ_c, rad/s.
    pub delta_c: f64,
    pub photon_number: f64,
    pub state: MeanFieldState,
    pub stable: bool,
    /// `−max Re λ(A)`, rad/s.
    pub margin: f64,
    /// Position in ascending photon number from [`find_branches`]; continuation
    /// label (starting at 1) after [`sweep_detuning`].
    pub branch_id: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Number of scan points over `[0, 1.05 η²/κ²]`.
    pub points: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { points: 40_000 }
    }
}

pub fn closed_form_displacements(model: &Model, photon_number: f64) -> Result<Displacements, NumericalError> {
    let p = &model.params;
    let d = &model.derived;
    let stiffness = p.omega_m + 2.0 * p.xi2 * photon_number;
    if stiffness == 0.0 {
        return Err(NumericalError::SofteningPole { photon_number });
    }
    let bog_q = -d.zeta * d.omega_c * photon_number / (d.omega_c * d.omega_c + p.gamma_c * p.gamma_c);
    Ok(Displacements {
        mech_q: p.xi1 * photon_number / stiffness,
        mech_p: 0.0,
        bog_q,
        bog_p: p.gamma_c / d.omega_c * bog_q,
    })
}

/// Photon number at which `ω_m + 2ξ₂I` vanishes, if positive.
pub fn softening_pole(model: &Model) -> Option<f64> {
    let p = &model.params;
    (p.xi2 < 0.0).then(|| -p.omega_m / (2.0 * p.xi2))
}

/// `f(I)/κ²`, evaluated at the closed-form displacements.
fn scaled_residual(model: &Model, photon_number: f64) -> f64 {
    let p = &model.params;
    let d = &model.derived;
    let stiffness = p.omega_m + 2.0 * p.xi2 * photon_number;
    let q = p.xi1 * photon_number / stiffness;
    let big_q = -d.zeta * d.omega_c * photon_number / (d.omega_c * d.omega_c + p.gamma_c * p.gamma_c);
    let delta = model.detuning_at(q, big_q) / p.kappa;
    let eta = p.eta / p.kappa;
    photon_number * (delta * delta + 1.0) - eta * eta
}

/// `|I(Δ² + κ²) − η²| / η²` at a candidate root.
pub fn relative_residual(model: &Model, photon_number: f64) -> f64 {
    let eta = model.params.eta / model.params.kappa;
    scaled_residual(model, photon_number).abs() / (eta * eta)
}

fn scan_grid(upper: f64, points: usize, pole: Option<f64>) -> Vec<f64> {
    let half = (points / 2).max(2);
    let low = upper * 1e-12;
    let log_step = (upper / low).ln() / (half - 1) as f64;
    let mut grid: Vec<f64> = Vec::with_capacity(2 * half + 3);
    grid.push(0.0);
    grid.extend((0..half).map(|i| low * (log_step * i as f64).exp()));
    grid.extend((1..half).map(|i| upper * i as f64 / (half - 1) as f64));
    if let Some(ip) = pole.filter(|&ip| ip > 0.0 && ip < upper) {
        grid.retain(|&x| (x - ip).abs() > 1e-9 * ip);
        grid.push(ip * (1.0 - 1e-10));
        grid.push(ip * (1.0 + 1e-10));
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    grid
}

fn bisect(model: &Model, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = scaled_residual(model, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    if scaled_residual(model, lo).abs() <= scaled_residual(model, hi).abs() {
        lo
    } else {
        hi
    }
}

/// Photon numbers of all steady states at the model's detuning, ascending.
pub fn steady_photon_numbers(model: &Model, options: ScanOptions) -> Result<Vec<f64>, NumericalError> {
    let p = &model.params;
    let eta = p.eta / p.kappa;
    if eta == 0.0 {
        return Ok(vec![0.0]);
    }
    let upper = 1.05 * eta * eta;
    let pole = softening_pole(model);
    let grid = scan_grid(upper, options.points, pole);
    let values: Vec<f64> = grid.iter().map(|&x| scaled_residual(model, x)).collect();

    let mut roots: Vec<f64> = Vec::new();
    for i in 1..grid.len() {
        let (a, b) = (grid[i - 1], grid[i]);
        if let Some(ip) = pole {
            if a < ip && ip < b {
                continue;
            }
        }
        let (fa, fb) = (values[i - 1], values[i]);
        if fb == 0.0 {
            roots.push(b);
        } else if fa.signum() != fb.signum() && fa != 0.0 {
            roots.push(bisect(model, a, b, fa));
        }
    }
    let min_gap = ROOT_DEDUP * eta * eta;
    roots.dedup_by(|b, a| (*b - *a).abs() < min_gap);
    if roots.is_empty() {
        return Err(NumericalError::NoRootFound);
    }
    Ok(roots)
}

/// The fixed point of the mean-field equations with photon number `I`.
pub fn steady_state(model: &Model, photon_number: f64) -> Result<MeanFieldState, NumericalError> {
    let d = closed_form_displacements(model, photon_number)?;
    let (alpha_re, alpha_im) = adiabatic_alpha(model, d.mech_q, d.bog_q);
    Ok(MeanFieldState {
        alpha_re,
        alpha_im,
        mech_q: d.mech_q,
        mech_p: d.mech_p,
        bog_q: d.bog_q,
        bog_p: d.bog_p,
    })
}

pub fn find_branches_with(model: &Model, options: ScanOptions) -> Result<Vec<BranchPoint>, NumericalError> {
    steady_photon_numbers(model, options)?
        .into_iter()
        .enumerate()
        .map(|(i, photon_number)| {
            let state = steady_state(model, photon_number)?;
            let StabilityVerdict { stable, margin, .. } = classify_stability(&model.drift_matrix(&state));
            Ok(BranchPoint {
                delta_c: model.params.delta_c,
                photon_number,
                state,
                stable,
                margin,
                branch_id: i + 1,
            })
        })
        .collect()
}

/// All coexisting steady states at the model's detuning with the default scan.
pub fn find_branches(model: &Model) -> Result<Vec<BranchPoint>, NumericalError> {
    find_branches_with(model, ScanOptions::default())
}

/// Change in the number of coexisting steady states between two adjacent
/// sweep points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fold {
    /// Midpoint of the bracketing detunings, rad/s.
    pub delta_c: f64,
    pub delta_lo: f64,
    pub delta_hi: f64,
    pub count_before: usize,
    pub count_after: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchTable {
    pub deltas: Vec<f64>,
    /// Steady states at each detuning, ascending photon number.
    pub points: Vec<Vec<BranchPoint>>,
    pub folds: Vec<Fold>,
}

impl BranchTable {
    pub fn root_counts(&self) -> Vec<usize> {
        self.points.iter().map(Vec::len).collect()
    }

    /// The point carrying `branch_id` at each detuning, if present.
    pub fn branch(&self, branch_id: usize) -> Vec<Option<&BranchPoint>> {
        self.points
            .iter()
            .map(|pts| pts.iter().find(|p| p.branch_id == branch_id))
            .collect()
    }

    pub fn max_count(&self) -> usize {
        self.points.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Evenly spaced values from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| start + (end - start) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Steady states over a list of detunings (rad/s) with continuation labels.
///
/// Each detuning is solved independently (in parallel); labels are then
/// propagated by matching every root to the nearest unused root of the
/// previous detuning. Unmatched roots get fresh labels in order of appearance.
pub fn sweep_detuning(model: &Model, deltas: &[f64], options: ScanOptions) -> Result<BranchTable, NumericalError> {
    let mut points: Vec<Vec<BranchPoint>> = deltas
        .par_iter()
        .map(|&delta_c| find_branches_with(&model.with_delta_c(delta_c), options))
        .collect::<Result<_, _>>()?;

    let mut next_id = 1;
    for k in 0..points.len() {
        if k == 0 {
            for p in points[0].iter_mut() {
                p.branch_id = next_id;
                next_id += 1;
            }
            continue;
        }
        let (before, after) = points.split_at_mut(k);
        let prev = &before[k - 1];
        let curr = &mut after[0];
        let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(prev.len() * curr.len());
        for (i, c) in curr.iter().enumerate() {
            for (j, p) in prev.iter().enumerate() {
                pairs.push(((c.photon_number - p.photon_number).abs(), i, j));
            }
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut assigned = vec![None; curr.len()];
        let mut used = vec![false; prev.len()];
        for (_, i, j) in pairs {
            if assigned[i].is_none() && !used[j] {
                assigned[i] = Some(prev[j].branch_id);
                used[j] = true;
            }
        }
        for (c, a) in curr.iter_mut().zip(assigned) {
            c.branch_id = a.unwrap_or_else(|| {
                next_id += 1;
                next_id - 1
            });
        }
    }

    let folds = deltas
        .windows(2)
        .zip(points.windows(2))
        .filter(|(_, p)| p[0].len() != p[1].len())
        .map(|(d, p)| Fold {
            delta_c: 0.5 * (d[0] + d[1]),
            delta_lo: d[0],
            delta_hi: d[1],
            count_before: p[0].len(),
            count_after: p[1].len(),
        })
        .collect();

    Ok(BranchTable {
        deltas: deltas.to_vec(),
        points,
        folds,
    })
}
