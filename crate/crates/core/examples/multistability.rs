//! Steady-state branches versus detuning: ordinary bistability at ξ₂ = 0 and
//! tristability once the quadratic coupling softens the membrane.
//!
//! cargo run --release --example multistability

use optomech::steadystate::linspace;
use optomech::{sweep_detuning, Model, ScanOptions, SystemParams};

fn main() {
    let base = Model::new(SystemParams::reference_defaults()).unwrap();
    let kappa = base.params.kappa;
    let deltas: Vec<f64> = linspace(0.0, 120.0, 241).into_iter().map(|d| d * kappa).collect();

    for ratio in [0.0, -0.003, -0.005] {
        let table = sweep_detuning(&base.with_xi2_ratio(ratio), &deltas, ScanOptions::default()).unwrap();
        println!(
            "xi2/xi1 = {ratio}: up to {} coexisting steady states",
            table.max_count()
        );
        for f in &table.folds {
            println!(
                "  {} -> {} roots near delta_c = {:.2} kappa",
                f.count_before,
                f.count_after,
                f.delta_c / kappa
            );
        }
        if let Some((i, pts)) = table
            .points
            .iter()
            .enumerate()
            .find(|(_, p)| p.len() == table.max_count())
        {
            let labels: Vec<String> = pts
                .iter()
                .map(|p| format!("{:.2}{}", p.photon_number, if p.stable { "" } else { "*" }))
                .collect();
            println!(
                "  at {:.1} kappa: I = [{}]  (* unstable)",
                deltas[i] / kappa,
                labels.join(", ")
            );
        }
    }
}
