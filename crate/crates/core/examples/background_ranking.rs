//! Background ranking on the synthetic suite, reports written to a
//! directory.
//!
//! ```text
//! cargo run --release --example background_ranking -- reports/
//! ```

use spacelab_iqa::analysis::background_rank;
use spacelab_iqa::dataset::load_manifest;
use spacelab_iqa::fixtures::background_suite;
use spacelab_iqa::report::emit_background_report;

fn main() {
    let out = std::env::args().nth(1).map(std::path::PathBuf::from);
    let work = tempfile_dir();
    let manifest_path = background_suite(160, 120).unwrap().write_to(&work).unwrap();
    let manifest = load_manifest(&manifest_path).unwrap();
    let scores = background_rank(&manifest).unwrap();
    for s in &scores {
        println!(
            "{}. {} ({})  mean {:.4}  std {:.4}",
            s.rank,
            s.background,
            s.background.description(),
            s.mean_uqi,
            s.std_uqi
        );
    }
    let bundle = emit_background_report(&scores);
    if let Some(dir) = out {
        bundle.write_to(&dir).unwrap();
        println!("reports in {}", dir.display());
    }
    std::fs::remove_dir_all(&work).ok();
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("spacelab-iqa-bg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
