//! Tabulates Bessel zeros and checks them.
//!
//!     cargo run --release --example bessel_roots -- [max_order] [roots_per_order]

use std::time::Instant;

use patseries::specfun::{bessel_j, bessel_roots};

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<usize>().expect("integer argument"));
    let max_order = args.next().unwrap_or(150);
    let per_order = args.next().unwrap_or(180);

    let t0 = Instant::now();
    let table = bessel_roots(max_order, per_order).expect("root table");
    println!(
        "{} zeros in {:.3} s",
        (max_order + 1) * per_order,
        t0.elapsed().as_secs_f64()
    );

    for k in [0, 1, max_order / 2, max_order] {
        let first: Vec<String> = table
            .order(k)
            .iter()
            .take(4)
            .map(|w| format!("{w:.10}"))
            .collect();
        println!("J_{k}: {} ...", first.join(", "));
    }

    let worst = (0..=max_order)
        .flat_map(|k| {
            table
                .order(k)
                .iter()
                .map(move |&w| bessel_j(k, w).unwrap().abs())
        })
        .fold(0.0, f64::max);
    println!("max |J_k(w)| over the table: {worst:.2e}");
}
