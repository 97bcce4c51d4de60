//! Writes a field, a sinogram and a root table to containers and reads them
//! back, printing each header.

use serde_json::{json, Map};

use patseries::io::{self, Stored};
use patseries::specfun::bessel_roots;
use patseries::wavesim::{ScalarField2D, SensorData};

fn main() {
    let dir = std::env::temp_dir().join("patseries-container-demo");
    std::fs::create_dir_all(&dir).expect("temp dir");

    let field = ScalarField2D::from_fn(32, |x, y| (-(x * x + y * y) * 20.0).exp()).unwrap();
    let samples = (0..8 * 10).map(|i| (i as f64 * 0.3).sin()).collect();
    let sino = SensorData::new(8, 10, 1.0, 6.0, (1.0, 0.5), samples).unwrap();
    let roots = bessel_roots(4, 5).unwrap();

    let mut extra = Map::new();
    extra.insert("note".into(), json!("demo"));
    for (name, object) in [
        ("field", Stored::Field(field.clone())),
        ("sinogram", Stored::Sinogram(sino.clone())),
        ("roots", Stored::Roots(roots.clone())),
    ] {
        let path = dir.join(format!("{name}.pat"));
        io::save(&path, &object, &extra).expect("save");
        let (_, header) = io::load(&path).expect("load");
        println!("{name}: {}", serde_json::to_string(&header).unwrap());
    }

    assert_eq!(io::load_field(dir.join("field.pat")).unwrap(), field);
    assert_eq!(io::load_sinogram(dir.join("sinogram.pat")).unwrap(), sino);
    assert_eq!(
        io::load_roots(dir.join("roots.pat")).unwrap().as_slice(),
        roots.as_slice()
    );
    println!("round trips exact; files in {}", dir.display());
}
