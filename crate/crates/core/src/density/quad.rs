//! One-dimensional quadrature and the zeta function at integers.

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let p = if order == 0 { 1.0 } else { p1 };
            dp = n * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

/// `ζ(s)` for integer `s >= 2`: a direct partial sum plus the
/// Euler–Maclaurin tail, accurate to a few ulps.
pub fn zeta(s: u32) -> f64 {
    assert!(s >= 2, "zeta needs s >= 2");
    const N: u32 = 64;
    let sf = s as f64;
    // Summing small terms first limits rounding.
    let head: f64 = (1..N).rev().map(|k| (k as f64).powf(-sf)).sum();
    let nf = N as f64;
    let tail = nf.powf(1.0 - sf) / (sf - 1.0) + 0.5 * nf.powf(-sf) + sf / 12.0 * nf.powf(-sf - 1.0)
        - sf * (sf + 1.0) * (sf + 2.0) / 720.0 * nf.powf(-sf - 3.0)
        + sf * (sf + 1.0) * (sf + 2.0) * (sf + 3.0) * (sf + 4.0) / 30240.0 * nf.powf(-sf - 5.0);
    head + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_exact_for_polynomials() {
        let (x, w) = gauss_legendre(8);
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((integral - 2.0 / 15.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn zeta_values() {
        let pi = std::f64::consts::PI;
        assert!((zeta(2) - pi * pi / 6.0).abs() < 1e-14);
        assert!((zeta(4) - pi.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(3) - 1.202_056_903_159_594_3).abs() < 1e-14);
    }
}
