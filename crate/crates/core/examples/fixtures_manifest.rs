//! Write a fixture set to disk and validate the manifest it produces.
//!
//! ```text
//! cargo run --example fixtures_manifest -- exposure-sweep:192x192 /tmp/sweep
//! ```

use spacelab_iqa::dataset::{load_manifest, validate};
use spacelab_iqa::fixtures::FixtureSet;

fn main() {
    let mut args = std::env::args().skip(1);
    let spec = args.next().unwrap_or_else(|| "background-suite:32x24".into());
    let out =
        args.next().map(std::path::PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("spacelab-iqa-fixtures"));

    let set = FixtureSet::from_descriptor(&spec).unwrap_or_else(|e| panic!("{e}"));
    let path = set.write_to(&out).unwrap();
    println!("{} captures written, manifest at {}", set.images.len(), path.display());

    let manifest = load_manifest(&path).unwrap();
    println!("experiment {:?} ({})", manifest.experiment_id, manifest.kind.as_str());
    for c in manifest.captures.iter().take(3) {
        println!("  {}  {}", c.id, c.image_path.display());
    }
    print!("validation: {}", validate(&manifest));
}
