//! Range residual of pressure data against derivative data, and its decay
//! with the observation time.
//!
//!     cargo run --release --example range_condition -- [grid]

use patseries::inversion::range_residual;
use patseries::phantoms::{rasterize, PhantomSpec};
use patseries::specfun::BesselRootTable;
use patseries::wavesim::{simulate_measurements, Acquisition};

fn main() {
    let grid = std::env::args()
        .nth(1)
        .map_or(120, |a| a.parse().expect("grid"));
    let f = rasterize(&PhantomSpec::default(), grid).expect("phantom");
    let acq = Acquisition {
        n_theta: 128,
        n_t: 2400,
        t_final: 12.0,
        ..Acquisition::default()
    };
    let m = simulate_measurements(&f, &acq).expect("simulation");
    let roots = BesselRootTable::cached(64, 120).expect("roots");

    let d = m.combine(0.0, 1.0);
    println!(
        "M(0,1) at T = 12: {:.3e}",
        range_residual(&d, &roots).unwrap()
    );
    let p = m.combine(1.0, 0.0);
    for n in [600, 1200, 1800, 2400] {
        let g = p.truncated(n).unwrap();
        println!(
            "M(1,0) at T = {:>4.1}: {:.3e}",
            g.t_final(),
            range_residual(&g, &roots).unwrap()
        );
    }
}
