//! Dimensional constants of round spheres and balls.

/// Gamma(m/2) for positive integer m, computed exactly by the recursion
/// Gamma(x+1) = x Gamma(x) from Gamma(1/2) = sqrt(pi) and Gamma(1) = 1.
fn gamma_of_half(m: u32) -> f64 {
    assert!(m >= 1);
    let mut x = if m % 2 == 1 { std::f64::consts::PI.sqrt() } else { 1.0 };
    let mut k = if m % 2 == 1 { 1 } else { 2 };
    while k + 2 <= m {
        x *= k as f64 / 2.0;
        k += 2;
    }
    x
}

/// Volume of the unit round sphere S^dim (the paper's omega_dim):
/// 2 pi^((dim+1)/2) / Gamma((dim+1)/2).
pub fn sphere_volume(dim: u32) -> f64 {
    let m = dim + 1;
    2.0 * std::f64::consts::PI.powf(m as f64 / 2.0) / gamma_of_half(m)
}

/// Volume of the unit Euclidean n-ball: pi^(n/2) / Gamma(n/2 + 1).
pub fn ball_volume(n: u32) -> f64 {
    std::f64::consts::PI.powf(n as f64 / 2.0) / gamma_of_half(n + 2)
}

/// sigma_{n-1}: area of the orbit sphere in an n-dimensional warped product.
pub fn orbit_sphere_volume(n: u32) -> f64 {
    sphere_volume(n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn low_dimensional_sphere_volumes() {
        assert!((sphere_volume(1) - 2.0 * PI).abs() < 1e-12);
        assert!((sphere_volume(2) - 4.0 * PI).abs() < 1e-12);
        assert!((sphere_volume(3) - 2.0 * PI * PI).abs() < 1e-12);
        assert!((sphere_volume(4) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ball_volumes() {
        assert!((ball_volume(2) - PI).abs() < 1e-12);
        assert!((ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-12);
        // sigma_{n-1} = n * omega_n^ball
        for n in 3..=6 {
            assert!((orbit_sphere_volume(n) - n as f64 * ball_volume(n)).abs() < 1e-10);
        }
    }
}
