//! Gauss–Legendre rules on `[−1, 1]` and their tensor products.

/// Points and weights of the `n`-point rule, `n ∈ {1, 2, 3}`.
pub fn gauss_1d(n: usize) -> &'static [(f64, f64)] {
    const G1: [(f64, f64); 1] = [(0.0, 2.0)];
    const A: f64 = 0.577_350_269_189_625_8;
    const G2: [(f64, f64); 2] = [(-A, 1.0), (A, 1.0)];
    const B: f64 = 0.774_596_669_241_483_4;
    const G3: [(f64, f64); 3] = [(-B, 5.0 / 9.0), (0.0, 8.0 / 9.0), (B, 5.0 / 9.0)];
    match n {
        1 => &G1,
        2 => &G2,
        3 => &G3,
        _ => panic!("unsupported Gauss rule with {n} points"),
    }
}

/// Tensor-product rule on `[−1, 1]²`: `([ξ, η], weight)`, ξ fastest.
pub fn gauss_2d(n: usize) -> Vec<([f64; 2], f64)> {
    let g = gauss_1d(n);
    let mut out = Vec::with_capacity(n * n);
    for &(eta, we) in g {
        for &(xi, wx) in g {
            out.push(([xi, eta], wx * we));
        }
    }
    out
}
