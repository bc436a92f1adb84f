//! Full-reference image quality analysis for choosing space-lab imaging
//! equipment.
//!
//! The crate scores how featureless a background material looks by
//! comparing captures with a synthetic black reference using a stabilized
//! Universal Image Quality Index, measures how camera output degrades over
//! an exposure sweep with MS-SSIM, does exposure-value arithmetic, and
//! ships a queryable catalog of surveyed backgrounds, cameras and lamps.
//! Everything runs on synthetic fixtures as well as real captures.
//!
//! | module | purpose |
//! |---|---|
//! | [`imaging`] | PGM/PPM decoding, luma conversion, cropping |
//! | [`metrics`] | UQI (raw and stabilized), SSIM, MS-SSIM |
//! | [`exposure`] | exposure tuples, EV, simulated exposure changes |
//! | [`catalog`] | equipment tables, ranking and filtering |
//! | [`dataset`] | capture manifests, naming convention, validation |
//! | [`analysis`] | background ranking and degradation curves |
//! | [`report`] | CSV tables, SVG charts, markdown summaries |
//! | [`fixtures`] | deterministic synthetic scenes and suites |
//! | [`cli`] | the `spacelab-iqa` command-line front end |

pub mod analysis;
pub mod catalog;
pub mod cli;
pub mod dataset;
pub mod exposure;
pub mod fixtures;
pub mod imaging;
pub mod metrics;
pub mod report;

pub use imaging::{CropRect, Image};
