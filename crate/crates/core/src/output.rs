//! CSV writers for trajectories, branch tables and fluctuation sweeps.
//!
//! Floats are written with 17 significant digits in scientific notation,
//! rows end in `\n`, and missing values are empty fields.

use std::io::{self, Write};

use crate::fluctuations::ObservableRow;
use crate::meanfield::Trajectory;
use crate::model::Model;
use crate::steadystate::BranchTable;

pub const TRAJECTORY_HEADER: &str = "t,gamma_m_t,alpha_re,alpha_im,photon,q,p,Q,P";
pub const BRANCH_HEADER: &str = "delta_c_over_kappa,branch_id,photon,stable,q,Q,margin_over_kappa";
pub const OBSERVABLES_HEADER: &str =
    "delta_c_over_kappa,xi2_over_xi1,squeezing_injected,photon,sigma_q,sigma_Q,s_q_db,s_Q_db,e_n";

/// Fixed 17-significant-digit rendering.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn write_trajectory<W: Write>(mut w: W, model: &Model, traj: &Trajectory) -> io::Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    let gamma_m = model.params.gamma_m;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let fields = [
            *t,
            gamma_m * t,
            s.alpha_re,
            s.alpha_im,
            s.photon_number(),
            s.mech_q,
            s.mech_p,
            s.bog_q,
            s.bog_p,
        ];
        let line: Vec<String> = fields.iter().map(|v| fmt_f64(*v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn write_branches<W: Write>(mut w: W, model: &Model, table: &BranchTable) -> io::Result<()> {
    writeln!(w, "{BRANCH_HEADER}")?;
    let kappa = model.params.kappa;
    for (delta, points) in table.deltas.iter().zip(&table.points) {
        for p in points {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                fmt_f64(delta / kappa),
                p.branch_id,
                fmt_f64(p.photon_number),
                p.stable,
                fmt_f64(p.state.mech_q),
                fmt_f64(p.state.bog_q),
                fmt_f64(p.margin / kappa),
            )?;
        }
    }
    Ok(())
}

pub fn write_observables<W: Write>(mut w: W, rows: &[ObservableRow]) -> io::Result<()> {
    writeln!(w, "{OBSERVABLES_HEADER}")?;
    for r in rows {
        let o = r.observables;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            fmt_f64(r.delta_c_over_kappa),
            fmt_f64(r.xi2_over_xi1),
            r.squeezing_injected,
            fmt_opt(r.photon_number),
            fmt_opt(o.map(|o| o.sigma_mech_q)),
            fmt_opt(o.map(|o| o.sigma_bog_q)),
            fmt_opt(o.map(|o| o.squeezing_mech_db)),
            fmt_opt(o.map(|o| o.squeezing_bog_db)),
            fmt_opt(o.map(|o| o.log_negativity)),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_fixed_precision() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-250.0), "-2.5000000000000000e2");
        assert_eq!(fmt_f64(0.0), "0.0000000000000000e0");
        let x = 1.0 / 3.0;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn missing_values_are_empty() {
        let row = ObservableRow {
            delta_c_over_kappa: 1.0,
            xi2_over_xi1: 0.0,
            squeezing_injected: false,
            photon_number: None,
            observables: None,
        };
        let mut buf = Vec::new();
        write_observables(&mut buf, &[row]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let line = text.lines().nth(1).unwrap();
        assert_eq!(line, "1.0000000000000000e0,0.0000000000000000e0,false,,,,,,");
    }
}
