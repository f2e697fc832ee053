use periodic_curves::curves::{newton_puiseux, omega_poly, Chart};
use periodic_curves::Ctx;

fn main() {
    let ctx = Ctx::for_period(6);
    let n6 = omega_poly(6);
    println!("deg_a {} deg_b {}", n6.deg_a(), n6.deg_b());
    match newton_puiseux(&n6, Chart::LPlus, &ctx) {
        Ok(branches) => {
            for b in &branches {
                println!("mu={} beta={}", b.mu, b.beta);
            }
        }
        Err(e) => println!("error: {e}"),
    }
}
