use num_bigint::BigInt;
use periodic_curves::curves::{squarefree_decomposition, IntPoly, RatPoly};

fn main() {
    // (x-1)^2 (x+2) = x^3 - 3x + 2
    let f = IntPoly::from_coeffs(vec![
        BigInt::from(2),
        BigInt::from(-3),
        BigInt::from(0),
        BigInt::from(1),
    ]);
    let dec = squarefree_decomposition(&RatPoly::from_int(&f)).unwrap();
    for (g, m) in &dec {
        println!("mult {m}: deg {} coeffs {:?}", g.degree(), g.coeffs());
    }
    // x^4 (quadruple zero root)
    let f = IntPoly::from_coeffs(vec![
        BigInt::from(0),
        BigInt::from(0),
        BigInt::from(0),
        BigInt::from(0),
        BigInt::from(1),
    ]);
    let dec = squarefree_decomposition(&RatPoly::from_int(&f)).unwrap();
    for (g, m) in &dec {
        println!("mult {m}: deg {}", g.degree());
    }
}
