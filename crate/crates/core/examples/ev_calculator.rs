//! Exposure values of the nine sweep settings, plus an ad-hoc setting.
//!
//! ```text
//! cargo run --example ev_calculator -- 2.8 1/60 400
//! ```

use spacelab_iqa::exposure::{format_shutter, parse_shutter, ExposureLabel, ExposureTuple};

fn main() {
    println!("label  shutter   EV      light vs EX0 (stops)");
    for label in ExposureLabel::ALL {
        let t = label.tuple();
        println!(
            "{:<5}  {:<8}  {:>6.3}  {:+}",
            label.to_string(),
            format_shutter(t.shutter_s()),
            t.ev(),
            label.nominal_stop_offset()
        );
    }

    let args: Vec<String> = std::env::args().skip(1).collect();
    if let [n, s, rest @ ..] = args.as_slice() {
        let iso = rest.first().map_or(Ok(100.0), |v| v.parse()).expect("ISO must be a number");
        let shutter = parse_shutter(s).expect("shutter must be seconds or 1/N");
        let t = ExposureTuple::new(n.parse().expect("aperture must be a number"), shutter, iso).unwrap();
        println!("\nf/{n} {s}s ISO {iso}: EV {:.2} (≈{})", t.ev(), t.rounded_ev());
    }
}
