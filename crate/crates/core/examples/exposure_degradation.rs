//! MS-SSIM degradation curves over the nine-step exposure sweep for both
//! simulated cameras.

use spacelab_iqa::analysis::{degradation_curves, symmetry_index};
use spacelab_iqa::dataset::LoadedCapture;
use spacelab_iqa::fixtures::exposure_suite;

fn main() {
    let set = exposure_suite(256, 256).unwrap();
    let captures: Vec<LoadedCapture> = set
        .manifest
        .captures
        .iter()
        .zip(set.images)
        .map(|(config, image)| LoadedCapture { config: config.clone(), image })
        .collect();
    let curves = degradation_curves(&captures).unwrap();

    print!("{:<10}", "series");
    for p in &curves[0].points {
        print!("{:>7}", p.label.to_string());
    }
    println!("  symmetry");
    for c in &curves {
        print!("{:<10}", c.series_name());
        for p in &c.points {
            print!("{:>7.3}", p.ms_ssim);
        }
        println!("  {:.4}", symmetry_index(c).unwrap());
    }
}
