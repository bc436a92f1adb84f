//! Decode a PGM/PPM file, convert to luma and crop its centre square.
//!
//! ```text
//! cargo run --example decode_and_crop -- in.ppm out.pgm
//! ```
//!
//! Without arguments a small synthetic colour image is used.

use spacelab_iqa::imaging::{crop, decode_raster, encode_raster, RgbPlanes};
use spacelab_iqa::{CropRect, Image};

fn synthetic() -> Image {
    let (w, h) = (48, 32);
    let n = w * h;
    let r = (0..n).map(|i| (i % w) as f64 / w as f64).collect();
    let g = (0..n).map(|i| (i / w) as f64 / h as f64).collect();
    let b = vec![0.5; n];
    Image::from_rgb(w, h, RgbPlanes { r, g, b }).unwrap()
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let img = match args.first() {
        Some(path) => decode_raster(&std::fs::read(path).expect("readable file")).expect("PGM or PPM"),
        None => synthetic(),
    };
    let (w, h) = img.dims();
    println!(
        "{w}x{h}, {}-bit source, colour: {}, mean luma {:.4}",
        img.bit_depth_source(),
        img.rgb().is_some(),
        img.mean()
    );

    let side = w.min(h);
    let square = crop(&img, CropRect::new((w - side) / 2, (h - side) / 2, side, side)).unwrap();
    println!("centre crop {}x{}, mean luma {:.4}", square.width(), square.height(), square.mean());

    if let Some(out) = args.get(1) {
        std::fs::write(out, encode_raster(&square)).expect("writable output");
        println!("wrote {out}");
    }
}
