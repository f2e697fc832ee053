use num_complex::Complex64;
use periodic_curves::series::{exp_int, PuiseuxSeries, Trunc};
use periodic_curves::Ctx;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn main() {
    let ctx = Ctx::default();
    let s = PuiseuxSeries::from_terms(
        [
            (exp_int(0), c(1.0)),
            (exp_int(1), c(-6.0)),
            (exp_int(2), c(1.0)),
        ],
        Trunc::Exact,
    );
    println!("s = {}", s);
    let inv = s.inverse(&ctx).unwrap();
    println!("1/s = {}", inv);
    let r = s.sqrt(&ctx).unwrap();
    println!("sqrt = {}", r);
}
