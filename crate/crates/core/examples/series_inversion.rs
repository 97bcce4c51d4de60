//! Matched reconstructions of the default phantom for the three data models.
//!
//!     cargo run --release --example series_inversion -- [grid]

use patseries::cli::formula_weights;
use patseries::inversion::{Formula, ReconstructionConfig, Reconstructor};
use patseries::io;
use patseries::phantoms::{rasterize, relative_error, PhantomSpec};
use patseries::wavesim::{simulate_measurements, Acquisition};

fn main() {
    let grid = std::env::args()
        .nth(1)
        .map_or(140, |a| a.parse().expect("grid"));
    let truth = rasterize(&PhantomSpec::default(), grid).expect("phantom");
    let m = simulate_measurements(&truth, &Acquisition::default()).expect("simulation");

    for (c1, c2) in [(1.0, 0.0), (1.0, 1.0), (0.0, 1.0)] {
        let formula = Formula::matched(c2);
        let (w1, w2) = formula_weights(formula, (c1, c2));
        let config = ReconstructionConfig::new(formula, w1, w2)
            .and_then(|c| c.with_grid(grid))
            .and_then(|c| c.with_time_samples(Some(1200)))
            .expect("config");
        let rec = Reconstructor::new(config, 300).expect("basis");
        let image = rec.invert(&m.combine(c1, c2)).expect("inversion");
        let err = relative_error(&image, &truth).unwrap().value;
        println!("M({c1},{c2}) with formula {formula}: relative error {err:.4}");
        let name = format!("inversion_{c1}_{c2}.pgm");
        io::export_image(&image, &name, None).expect("image");
    }
}
