//! Runtime growth of the offline scheduler.
//!
//! `cargo run --release --example complexity_bench -- 100 200 400 800`

use ftr_maint::cli::bench;

fn main() {
    let mut sizes: Vec<usize> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    if sizes.is_empty() {
        sizes = vec![100, 200, 400];
    }
    let report = bench(&sizes, 1, 3);
    for row in &report.rows {
        println!("n = {:>5}  {:.5} s", row.n, row.seconds);
    }
    match report.exponent {
        Some(e) => println!("fitted exponent {e:.3}"),
        None => println!("not enough sizes to fit"),
    }
}
