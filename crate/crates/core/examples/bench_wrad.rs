use std::time::Instant;

use g1rad::random::{complex_gaussian_matrix, trial_rng};
use g1rad::wradius::numerical_radius;

fn main() {
    let mut rng = trial_rng(1);
    for n in [2, 4, 8, 16] {
        let a = complex_gaussian_matrix(&mut rng, n);
        let grid = if n > 8 { 1440 } else { 720 };
        let reps = 20;
        let t = Instant::now();
        let mut v = 0.0;
        for _ in 0..reps {
            v = numerical_radius(&a, grid).value;
        }
        println!(
            "n={n:2} grid={grid}: {:.3} ms/call (w={v:.6})",
            t.elapsed().as_secs_f64() * 1e3 / reps as f64
        );
    }
}
