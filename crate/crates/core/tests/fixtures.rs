use spacelab_iqa::dataset::Camera;
use spacelab_iqa::exposure::ExposureLabel;
use spacelab_iqa::fixtures::suite::{capture_frame, sensor_bits};
use spacelab_iqa::fixtures::{
    background_suite, exposure_suite, generate, hash_unit, quantize, Axis, FixtureSet, SceneKind, SceneSpec,
};
use spacelab_iqa::imaging::encode_raster;
use spacelab_iqa::Image;

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn composite(seed: u64, w: usize, h: usize) -> Image {
    generate(&SceneSpec::new(SceneKind::CompositeScene { seed }, w, h)).unwrap()
}

fn bit_hash(img: &Image) -> u64 {
    let bytes: Vec<u8> = img.luma().iter().flat_map(|v| v.to_bits().to_le_bytes()).collect();
    fnv1a(&bytes)
}

#[test]
fn generator_matches_reference_splitmix() {
    // First output of splitmix64 seeded with 0 is 0xE220A8397B1DCDAF.
    assert_eq!(hash_unit(0, 0), (0xE220_A839_7B1D_CDAFu64 >> 11) as f64 / (1u64 << 53) as f64);
    assert_eq!(hash_unit(0, 0), 0.8833108082136426);
    assert_eq!(hash_unit(42, 7).to_bits(), 0x3fe9_9ec6_bdd3_d3c5);
}

#[test]
fn composite_raster_is_frozen() {
    let img = composite(42, 64, 48);
    assert_eq!(bit_hash(&img), 0x79cc_7465_8c02_e4f2);
    assert_eq!(fnv1a(&encode_raster(&quantize(&img, 8))), 0x3bb5_164d_3a89_2b0f);
}

#[test]
fn composite_has_structure_in_every_ssim_window() {
    let img = composite(42, 96, 96);
    let (w, h) = img.dims();
    let luma = img.luma();
    for y in 0..=h - 11 {
        for x in 0..=w - 11 {
            let vals: Vec<f64> = (0..11).flat_map(|j| (0..11).map(move |i| luma[(y + j) * w + x + i])).collect();
            let mean = vals.iter().sum::<f64>() / 121.0;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 121.0;
            assert!(var > 0.0, "flat window at ({x}, {y})");
        }
    }
}

#[test]
fn seeds_give_different_scenes() {
    assert_eq!(composite(5, 40, 30), composite(5, 40, 30));
    assert_ne!(composite(5, 40, 30), composite(6, 40, 30));
}

#[test]
fn simple_scenes() {
    let flat = generate(&SceneSpec::new(SceneKind::Flat(0.25), 4, 3)).unwrap();
    assert!(flat.luma().iter().all(|&v| v == 0.25));
    let g =
        generate(&SceneSpec::new(SceneKind::LinearGradient { lo: 0.0, hi: 1.0, axis: Axis::Vertical }, 2, 5)).unwrap();
    let col: Vec<f64> = (0..5).map(|y| g.luma()[y * 2]).collect();
    assert!(col.windows(2).all(|p| p[0] < p[1]));
    assert_eq!(g.luma()[0], g.luma()[1]);
    let c = generate(&SceneSpec::new(SceneKind::Checker { cell: 2, lo: 0.1, hi: 0.9 }, 4, 4)).unwrap();
    assert_ne!(c.luma()[0], c.luma()[2]);
    assert_eq!(c.luma()[0], c.luma()[5]);
    assert!(generate(&SceneSpec::new(SceneKind::Flat(1.5), 4, 4)).is_err());
    assert!(generate(&SceneSpec::new(SceneKind::Flat(0.5), 0, 4)).is_err());
}

#[test]
fn descriptors() {
    let spec: SceneSpec = "composite:42:64x48".parse().unwrap();
    assert_eq!(spec, SceneSpec::new(SceneKind::CompositeScene { seed: 42 }, 64, 48));
    let spec: SceneSpec = "gradient:0.1:0.9:h".parse().unwrap();
    assert_eq!((spec.width, spec.height), (256, 256));
    assert!("spiral:1".parse::<SceneSpec>().is_err());
    assert!(FixtureSet::from_descriptor("background-suite:4x4").is_err());
    assert!(FixtureSet::from_descriptor("exposure-sweep:axb").is_err());
    assert_eq!(FixtureSet::from_descriptor("flat:0.3:16x16").unwrap().images.len(), 9);
}

#[test]
fn suites_have_the_experiment_shape() {
    let bg = background_suite(16, 12).unwrap();
    assert_eq!(bg.images.len(), 150);
    assert!(bg.images.iter().all(|i| i.dims() == (16, 12)));
    let ex = exposure_suite(32, 32).unwrap();
    assert_eq!(ex.images.len(), 2 * 3 * 9);
    let means: Vec<f64> = ex.images[..9].iter().map(|i| i.luma().iter().sum::<f64>()).collect();
    assert!(means.windows(2).all(|p| p[0] <= p[1]), "brighter with each stop: {means:?}");
}

#[test]
fn frames_are_quantized_to_the_sensor_depth() {
    let base = composite(1, 32, 32);
    for camera in [Camera::Lq, Camera::Hq] {
        let levels = ((1u32 << sensor_bits(camera)) - 1) as f64;
        let frame = capture_frame(&base, camera, 9, ExposureLabel::Eu2.nominal_stop_offset() as f64);
        assert!(frame.luma().iter().all(|v| (v * levels - (v * levels).round()).abs() < 1e-9));
    }
}

#[test]
fn written_sets_are_byte_identical() {
    let set = exposure_suite(24, 24).unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    set.write_to(a.path()).unwrap();
    exposure_suite(24, 24).unwrap().write_to(b.path()).unwrap();
    let read = |d: &std::path::Path| std::fs::read(d.join("manifest.toml")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
    for c in &set.manifest.captures {
        assert_eq!(
            std::fs::read(a.path().join(&c.image_path)).unwrap(),
            std::fs::read(b.path().join(&c.image_path)).unwrap()
        );
    }
}
