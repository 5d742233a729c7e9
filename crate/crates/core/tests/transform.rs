use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spherical_poincare::spectral::{harmonic_space_dim, HarmonicSpectrum, SpectrumDim};
use spherical_poincare::transform::{
    evaluate, forward, hessian_at, inner_product, inverse, QuadratureGrid, ShapeMatrix,
};

fn random_spectrum(rng: &mut ChaCha8Rng, d: usize, band: usize) -> HarmonicSpectrum {
    let blocks = (0..=band)
        .map(|n| (0..harmonic_space_dim(n, d)).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    HarmonicSpectrum::new(SpectrumDim::Sphere(d), blocks).unwrap()
}

fn max_abs_diff(a: &HarmonicSpectrum, b: &HarmonicSpectrum) -> f64 {
    a.blocks().iter().flatten().zip(b.blocks().iter().flatten()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn round_trip_at_band_limit_64() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [2, 3] {
        let grid = QuadratureGrid::for_band_limit(d, 64).unwrap();
        for _ in 0..3 {
            let s = random_spectrum(&mut rng, d, 64);
            let back = forward(&inverse(&s, &grid).unwrap(), 64).unwrap();
            let scale = s.blocks().iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
            assert!(max_abs_diff(&s, &back) <= 1e-10 * scale, "d={d}");
        }
    }
}

#[test]
fn parseval_at_band_limit_64() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in [2, 3] {
        let grid = QuadratureGrid::for_band_limit(d, 64).unwrap();
        let f = random_spectrum(&mut rng, d, 64);
        let g = random_spectrum(&mut rng, d, 64);
        let (fv, gv) = (inverse(&f, &grid).unwrap(), inverse(&g, &grid).unwrap());
        let pointwise = inner_product(&fv, &gv).unwrap();
        let spectral = f.inner(&g).unwrap();
        assert!((pointwise - spectral).abs() <= 1e-10 * f.norm2().sqrt() * g.norm2().sqrt(), "d={d}");
        let norm = inner_product(&fv, &fv).unwrap();
        assert!((norm - f.norm2()).abs() <= 1e-10 * f.norm2());
    }
}

#[test]
fn underresolved_grid_is_rejected() {
    let grid = QuadratureGrid::for_band_limit(3, 8).unwrap();
    let s = HarmonicSpectrum::zeros(SpectrumDim::Sphere(3), 40).unwrap();
    assert!(forward(&inverse(&s, &QuadratureGrid::for_band_limit(3, 40).unwrap()).unwrap(), 40).is_ok());
    let f = spherical_poincare::transform::GridFunction::from_fn(&grid, |_| 1.0);
    assert!(forward(&f, 40).is_err());
}

/// `A = D^2 H` on the tangent plane, where `H(x) = |x| h(x / |x|)` is the
/// one-homogeneous extension; second derivatives by a fourth-order stencil.
fn fd_shape_matrix(s: &HarmonicSpectrum, u: &[f64], frame: &[Vec<f64>], step: f64) -> Vec<f64> {
    let big_h = |x: &[f64]| {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let unit: Vec<f64> = x.iter().map(|v| v / r).collect();
        r * evaluate(s, &unit).unwrap()
    };
    let second = |v: &[f64]| {
        let at = |t: f64| big_h(&u.iter().zip(v).map(|(a, b)| a + t * b).collect::<Vec<_>>());
        (-at(2.0 * step) + 16.0 * at(step) - 30.0 * at(0.0) + 16.0 * at(-step) - at(-2.0 * step)) / (12.0 * step * step)
    };
    match frame {
        [e] => vec![second(e)],
        [e1, e2] => {
            let a11 = second(e1);
            let a22 = second(e2);
            let w: Vec<f64> = e1.iter().zip(e2).map(|(a, b)| (a + b) / 2f64.sqrt()).collect();
            vec![a11, second(&w) - 0.5 * (a11 + a22), a22]
        }
        _ => unreachable!(),
    }
}

fn entries(a: &ShapeMatrix) -> Vec<f64> {
    match *a {
        ShapeMatrix::Scalar(x) => vec![x],
        ShapeMatrix::Sym2 { a11, a12, a22 } => vec![a11, a12, a22],
    }
}

#[test]
fn hessian_converges_at_fourth_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in [2, 3] {
        let mut s = random_spectrum(&mut rng, d, 4).scaled(0.05);
        s.block_mut(0).unwrap()[0] = 5.0;
        for &(theta, phi) in &[(0.7f64, 1.1f64), (2.1, 4.0), (1.4, 0.2)] {
            let (u, frame) = if d == 2 {
                (vec![theta.cos(), theta.sin()], vec![vec![-theta.sin(), theta.cos()]])
            } else {
                let (st, ct) = theta.sin_cos();
                let (sp, cp) = phi.sin_cos();
                (
                    vec![st * cp, st * sp, ct],
                    vec![vec![ct * cp, ct * sp, -st], vec![-sp, cp, 0.0]],
                )
            };
            let exact = entries(&hessian_at(&s, theta, phi).unwrap());
            let err = |step: f64| {
                fd_shape_matrix(&s, &u, &frame, step)
                    .iter()
                    .zip(&exact)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            };
            let (e1, e2) = (err(0.2), err(0.1));
            let order = (e1 / e2).log2();
            assert!(order >= 3.5, "d={d} theta={theta}: errors {e1:e} {e2:e}, order {order}");
        }
    }
}

#[test]
fn translated_ball_shape_matrix_is_radius_times_identity() {
    let r = 1.3;
    let mut s = HarmonicSpectrum::zeros(SpectrumDim::Sphere(3), 1).unwrap();
    s.block_mut(0).unwrap()[0] = r * (4.0 * std::f64::consts::PI).sqrt();
    s.block_mut(1).unwrap().copy_from_slice(&[0.4, -0.2, 0.7]);
    let grid = QuadratureGrid::for_band_limit(3, 8).unwrap();
    for a in spherical_poincare::transform::surface_gradient_hessian(&s, &grid).unwrap() {
        let e = entries(&a);
        assert!((e[0] - r).abs() < 1e-12 && e[1].abs() < 1e-12 && (e[2] - r).abs() < 1e-12);
    }
}
