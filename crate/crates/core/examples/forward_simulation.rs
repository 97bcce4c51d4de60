//! Simulates pressure and normal-derivative data of the default phantom and
//! writes the combined sinogram.
//!
//!     cargo run --release --example forward_simulation -- [grid] [c1] [c2] [out.sino]

use std::time::Instant;

use patseries::io::{self, Stored};
use patseries::phantoms::{rasterize, PhantomSpec};
use patseries::wavesim::{simulate_measurements, Acquisition};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let grid = args.first().map_or(140, |a| a.parse().expect("grid"));
    let c1 = args.get(1).map_or(1.0, |a| a.parse().expect("c1"));
    let c2 = args.get(2).map_or(0.0, |a| a.parse().expect("c2"));
    let out = args
        .get(3)
        .cloned()
        .unwrap_or_else(|| "forward.sino".into());

    let f = rasterize(&PhantomSpec::default(), grid).expect("phantom");
    let acq = Acquisition::default();
    let t0 = Instant::now();
    let m = simulate_measurements(&f, &acq).expect("simulation");
    println!(
        "{grid}x{grid} grid, {} detectors x {} samples in {:.1} s",
        acq.n_theta,
        acq.n_t,
        t0.elapsed().as_secs_f64()
    );

    let g = m.combine(c1, c2);
    let peak = (0..g.n_t())
        .max_by(|&a, &b| g.get(0, a).abs().total_cmp(&g.get(0, b).abs()))
        .unwrap();
    println!(
        "detector 0 peaks at t = {:.3} with {:.4}",
        g.time(peak),
        g.get(0, peak)
    );
    println!("RMS of M({c1},{c2}) f: {:.4e}", g.l2_norm());

    io::save(&out, &Stored::Sinogram(g), &Default::default()).expect("save");
    println!("wrote {out}");
}
