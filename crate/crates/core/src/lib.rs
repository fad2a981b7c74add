//! ChESS chess-board vertex detection and its evaluation toolkit.
//!
//! The detector samples a 16-point quasi-circular ring around every pixel and
//! combines a *sum response* (opposite samples agree, quadrature samples
//! disagree), a *diff response* (opposite samples disagree, i.e. edges) and a
//! *mean response* (ring mean versus a small centre mean, i.e. stripes) into a
//! single signed strength:
//!
//! ```text
//! R = SR - DR - 16 * |ring mean - local mean|
//! ```
//!
//! Modules:
//!
//! - [`ring`] – sampling geometry (radius 5 or 10, 16 offsets).
//! - [`detector`] – dense response computation and pre-blur kernels.
//! - [`select`] – thresholding, NMS, connectivity, neighbourhood comparison,
//!   5×5 centre-of-mass refinement.
//! - [`orient`] – 8-bin orientation labels for selected features.
//! - [`baselines`] – Harris–Stephens and a PTAM-style ring-transition detector.
//! - [`synth`] – ground-truth vertex and board rendering with blur and noise.
//! - [`geomfit`] – total-least-squares planes and cylinder fitting.
//! - [`sweep`] – rotation × noise accuracy grids and throughput timing.
//! - [`imageio`] – PGM and point-cloud text I/O.

pub mod baselines;
pub mod detector;
mod error;
pub mod geomfit;
mod image;
pub mod imageio;
pub mod orient;
pub mod ring;
pub mod select;
pub mod sweep;
pub mod synth;

pub use detector::{detect, response_at, ResponseImage};
pub use error::{Error, Result};
pub use image::{BoolImage, GrayImage, Plane};
pub use ring::{RingGeometry, SampleVector};
pub use select::{select_features, Feature, SelectConfig};
