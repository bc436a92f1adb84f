//! Every metric on one pair of synthetic images: a composite scene and an
//! underexposed copy of it, then the same scene against black.

use spacelab_iqa::exposure::simulate_exposure;
use spacelab_iqa::fixtures::{generate, SceneKind, SceneSpec};
use spacelab_iqa::metrics::{ms_ssim, ssim, uqi_raw, uqi_stabilized, UqiParams};
use spacelab_iqa::Image;

fn main() {
    let scene = generate(&SceneSpec::new(SceneKind::CompositeScene { seed: 42 }, 256, 256)).unwrap();
    let dark = simulate_exposure(&scene, -1.0);

    println!("scene vs one stop under:");
    println!("  UQI raw         {:.6}", uqi_raw(&scene, &dark).unwrap().value);
    println!("  UQI stabilized  {:.6}", uqi_stabilized(&scene, &dark, UqiParams::default()).unwrap().value);
    println!("  SSIM            {:.6}", ssim(&scene, &dark).unwrap().value);
    let ms = ms_ssim(&scene, &dark, 5).unwrap();
    println!("  MS-SSIM         {:.6}  ({} windows over 5 scales)", ms.value, ms.n_windows);

    let black = Image::black(256, 256);
    println!("\nscene vs black:");
    match uqi_raw(&scene, &black) {
        Ok(s) => println!("  UQI raw         {:.6}", s.value),
        Err(e) => println!("  UQI raw         undefined: {e}"),
    }
    println!("  UQI stabilized  {:.6}", uqi_stabilized(&scene, &black, UqiParams::default()).unwrap().value);
}
