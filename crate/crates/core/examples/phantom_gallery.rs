//! Renders the built-in phantom, a rotated copy and a custom one to PGM.

use patseries::io;
use patseries::phantoms::{rasterize, PhantomSpec, Primitive};

fn main() {
    let base = PhantomSpec::default();
    let custom = PhantomSpec {
        primitives: vec![
            Primitive::Annulus {
                center: [0.0, 0.0],
                r_in: 0.45,
                r_out: 0.6,
                amplitude: 1.0,
            },
            Primitive::Disk {
                center: [0.15, -0.1],
                radius: 0.2,
                amplitude: -0.5,
            },
        ],
        smoothing: 0.03,
    };
    for (name, spec) in [
        ("default", base.clone()),
        ("rotated", base.rotated(0.7)),
        ("custom", custom),
    ] {
        spec.validate().expect("support");
        let f = rasterize(&spec, 280).expect("rasterize");
        let path = format!("phantom_{name}.pgm");
        io::export_image(&f, &path, None).expect("image");
        println!(
            "{name}: mass {:.5}, max {:.4}, wrote {path}",
            spec.mass(),
            f.max_abs()
        );
    }
}
