//! Fixtures shared by the benchmarks.

use lagvac::scenarios::{vacuum_riemann_solve, OffcenterParams, VrpSolution};
use lagvac::{GasLaw, SymState};

pub fn law() -> GasLaw {
    GasLaw::with_beta(2.0).expect("valid exponent")
}

pub fn offcenter_params() -> OffcenterParams {
    OffcenterParams {
        h_l: 1.0,
        u_l: 1.0,
        h_r: 0.5,
        u_r: 0.0,
        w0: 0.5,
        focus_time: None,
        domain: None,
    }
}

pub fn vrp() -> VrpSolution {
    let s = SymState { h: 1.0, u: 0.0 };
    vacuum_riemann_solve(&law(), s, s, 1.0, [-6.0, 6.0]).expect("valid data")
}
