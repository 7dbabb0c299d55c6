//! Mechanical squeezing and membrane-condensate entanglement along branch 1,
//! with and without squeezed-vacuum injection.
//!
//! cargo run --release --example fluctuation_sweep

use optomech::fluctuations::sweep_observables;
use optomech::steadystate::linspace;
use optomech::{Model, ScanOptions, SystemParams};

fn main() {
    let model = Model::new(SystemParams::reference_defaults()).unwrap();
    let kappa = model.params.kappa;
    let deltas: Vec<f64> = linspace(0.0, 400.0, 400).into_iter().map(|d| d * kappa).collect();
    let ratios = [0.0, 0.005, 0.01, -0.005];
    let rows = sweep_observables(&model, &deltas, &ratios, &[false, true], ScanOptions::default()).unwrap();

    println!(
        "{:>8} {:>9} {:>12} {:>10} {:>8}",
        "xi2/xi1", "injected", "max S_q dB", "at kappa", "max E_N"
    );
    for group in rows.chunks(deltas.len()) {
        let best_sq = group
            .iter()
            .filter_map(|r| r.observables.map(|o| (o.squeezing_mech_db, r.delta_c_over_kappa)))
            .fold((f64::NEG_INFINITY, 0.0), |a, b| if b.0 > a.0 { b } else { a });
        let best_en = group
            .iter()
            .filter_map(|r| r.observables.map(|o| o.log_negativity))
            .fold(0.0, f64::max);
        println!(
            "{:>8} {:>9} {:>12.3} {:>10.1} {:>8.4}",
            group[0].xi2_over_xi1, group[0].squeezing_injected, best_sq.0, best_sq.1, best_en
        );
    }
}
