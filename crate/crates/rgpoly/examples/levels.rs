//! Timing probe: compute every stable type up to a given level.

use rgpoly::recursion::Engine;

fn main() {
    let max_level: i64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(4);
    let engine = Engine::new();
    let t0 = std::time::Instant::now();
    for (g, n) in Engine::keys_up_to_level(max_level) {
        let t = std::time::Instant::now();
        let f = engine.compute_f(g, n).unwrap();
        println!(
            "F({g},{n}): {} terms in {:.2?} (total {:.2?})",
            f.num_terms(),
            t.elapsed(),
            t0.elapsed()
        );
    }
}
