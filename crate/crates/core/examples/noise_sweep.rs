//! Reconstruction error against data error on a reduced geometry.
//!
//!     cargo run --release --example noise_sweep -- [out.csv]

use patseries::cli::{cmd_noise_sweep, RunConfig};

fn main() {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "noise_sweep.csv".into());
    let cfg = RunConfig::from_toml(
        r#"
        grid = 140
        [acquisition]
        n_theta = 150
        n_t = 800
        [reconstruction]
        n_r = 90
        grid = 140
        time_samples = 600
        [sweep]
        seeds = [0, 1, 2]
        "#,
    )
    .expect("config");
    let rows = cmd_noise_sweep(&cfg, out.as_ref()).expect("sweep");
    println!("model    formula  noise  data err  rec err");
    for r in rows.iter().filter(|r| r.seed == 0) {
        println!(
            "M({},{})  {}        {:>4}%  {:.4}    {:.4}",
            r.model[0],
            r.model[1],
            r.formula,
            r.noise_percent,
            r.data_error,
            r.reconstruction_error
        );
    }
    println!("{} runs written to {out}", rows.len());
}
