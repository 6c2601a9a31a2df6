use bssteg::decomp::IcaParams;
use bssteg::pipeline::{prepare, DEFAULT_PAIR};
use bssteg::stegosim::synthetic_image;
use bssteg::{haar_dwt, haar_idwt, Image32, Image64};

#[test]
fn f32_tracks_f64() {
    let img64: Image64 = synthetic_image(32, 32, 21);
    let img32: Image32 = Image32::from_rgb8(32, 32, &img64.to_rgb8()).unwrap();

    let d64 = haar_dwt(img64.raster());
    let d32 = haar_dwt(img32.raster());
    for (a, b) in d64.bands().iter().flatten().zip(d32.bands().iter().flatten()) {
        assert!((a - f64::from(*b)).abs() < 1e-5);
    }
    assert!(haar_idwt(&d32).max_abs_diff(img32.raster()).unwrap() < 1e-5);

    let p64 = prepare(&img64).unwrap();
    let p32 = prepare(&img32).unwrap();
    for (a, b) in p64.pca.eigenvalues.iter().zip(&p32.pca.eigenvalues) {
        assert!((a - f64::from(*b)).abs() <= 1e-3 * a.abs().max(1e-4), "{a} vs {b}");
    }
    let f32s = p32.features(DEFAULT_PAIR, &IcaParams::with_seed(1)).unwrap();
    assert!(f32s.iter().all(|v| v.is_finite()));
    assert!((f32s[2] - 1.0).abs() < 1e-3 && (f32s[3] - 1.0).abs() < 1e-3);
}
