#![no_main]

use libfuzzer_sys::fuzz_target;
use spherical_poincare::convex::SupportBody;
use spherical_poincare::inequality::{check_eg4, check_eg5, check_gap, check_m2, check_poincare, theorem1, theorem3};
use spherical_poincare::spectral::{harmonic_space_dim, HarmonicSpectrum, SpectrumDim};

// First byte picks d and the band limit; the rest are little-endian f64 coefficients.
fuzz_target!(|data: &[u8]| {
    let Some((&head, rest)) = data.split_first() else { return };
    let d = 2 + (head & 1) as usize;
    let band = (head >> 1) as usize % 8;
    let mut values = rest.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap()));
    let blocks: Vec<Vec<f64>> = (0..=band)
        .map(|n| (0..harmonic_space_dim(n, d)).map(|_| values.next().unwrap_or(0.0)).collect())
        .collect();
    let Ok(f) = HarmonicSpectrum::new(SpectrumDim::Sphere(d), blocks) else { return };
    for check in [check_poincare, check_m2, check_gap, check_eg4, check_eg5] {
        let _ = check(&f);
    }
    if let Ok(body) = SupportBody::new(f) {
        let _ = theorem1(&body);
        let _ = theorem3(&body);
    }
});
