//! Derived quantities and regime checks for the default parameter set.
//!
//! cargo run --example derived_parameters

use optomech::{find_branches, Model, SystemParams};

fn main() {
    let model = Model::new(SystemParams::reference_defaults()).expect("default parameters are valid");
    let p = &model.params;
    let d = &model.derived;

    println!("kappa          {:.6e} rad/s", p.kappa);
    println!("chi            {:.6}", d.chi);
    println!("omega_c        {:.6e} rad/s", d.omega_c);
    println!("zeta           {:.6e} rad/s", d.zeta);
    println!("n_m, n_c       {:.4e}, {:.4e}", d.n_m, d.n_c);
    println!("r (squeezing)  {:.6}", d.r_sq);
    println!("M_s            {:.4} + {:.4}i", d.m_s_re, d.m_s_im);

    for delta in [30.0, 80.0] {
        let m = model.with_delta_c(delta * p.kappa);
        println!("\ndelta_c = {delta} kappa");
        for b in find_branches(&m).expect("steady states") {
            let v = m.validity_check(b.photon_number);
            println!(
                "  I = {:>10.4}  stable = {:<5}  U0*I/(10 omega_r) = {:.3}  {:?}",
                b.photon_number, b.stable, v.interaction_ratio, v.verdict
            );
        }
    }
}
