//! Volumes of unit balls and areas of unit spheres.

use std::f64::consts::PI;

/// Volume of the unit ball in `R^d`, `|B^d|`.
pub fn ball_volume(d: usize) -> f64 {
    // |B^d| = (2 pi / d) |B^{d-2}|
    let mut v = if d % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = if d % 2 == 0 { 2 } else { 3 };
    while k <= d {
        v *= 2.0 * PI / k as f64;
        k += 2;
    }
    v
}

/// Area of the unit sphere `S^{d-1}`, `|S^{d-1}| = d |B^d|`.
pub fn sphere_area(d: usize) -> f64 {
    d as f64 * ball_volume(d)
}

/// `W_d(K) = kappa_d = |B^d|` for every convex body.
pub fn kappa(d: usize) -> f64 {
    ball_volume(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((ball_volume(2) - PI).abs() < 1e-15);
        assert!((ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!((ball_volume(4) - PI * PI / 2.0).abs() < 1e-14);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-15);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert_eq!(ball_volume(1), 2.0);
    }
}
