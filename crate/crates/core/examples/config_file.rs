//! Loading parameters from TOML, with Hz-valued and ratio keys, and writing
//! the fully resolved set back out.
//!
//! cargo run --example config_file

use optomech::config::{parse_config, to_config_string};
use optomech::Model;

const CONFIG: &str = r#"
kappa_hz = 1.3e6
gamma_m_hz = 100.0
eta_over_kappa = 80.0
xi2_over_xi1 = -0.003
delta_c_over_kappa = 90.0
squeezing_enabled = true
"#;

fn main() {
    let params = parse_config(CONFIG).expect("valid config");
    let model = Model::new(params).unwrap();
    println!(
        "kappa = {:.6e} rad/s, eta = {:.1} kappa",
        params.kappa,
        params.eta / params.kappa
    );
    let diffusion = model.diffusion_matrix();
    println!(
        "diffusion PSD: {}, noise bound: {}",
        diffusion.positive_semidefinite, diffusion.satisfies_noise_bound
    );

    let resolved = to_config_string(&params);
    println!("\n{resolved}");
    assert_eq!(parse_config(&resolved).unwrap(), params);

    match parse_config("kappa = 1e7\nkappa_hz = 1.3e6\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
}
