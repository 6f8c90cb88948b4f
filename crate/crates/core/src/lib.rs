//! Bi-level thresholding of gray-level images by entropy maximization.
//!
//! The histogram of an image is split at a candidate gray level `t` into a
//! dark class `A = {0..=t}` and a bright class `B = {t+1..=255}`. Each class is
//! normalized into its own distribution, an entropy is evaluated on both, and
//! the two values are combined with the composition law that belongs to the
//! chosen entropy:
//!
//! | functional | per-class entropy | composition |
//! |------------|-------------------|-------------|
//! | Shannon    | `-Σ p ln p` | `S^A + S^B` |
//! | Tsallis `q` | `(1 - Σ p^q) / (q - 1)` | `S^A + S^B + (1 - q) S^A S^B` |
//! | Kaniadakis `κ` | `-(1/2κ) Σ (p^(1+κ) - p^(1-κ))` | `S^A 𝔖^B + S^B 𝔖^A` |
//!
//! The threshold maximizing the total is the bi-level threshold. Sweeping the
//! entropic index produces a family of binarizations, which [`sweep`] ranks by
//! the number of edge pixels between black and white regions.
//!
//! ```
//! use entropic_threshold::{build_histogram, optimize_threshold, EntropyFunctional, GrayImage};
//!
//! let img = GrayImage::new(4, 1, vec![10, 12, 200, 210]).unwrap();
//! let hist = build_histogram(&img);
//! let best = optimize_threshold(&hist, &EntropyFunctional::tsallis(0.5).unwrap()).unwrap();
//! assert_eq!(best.threshold, 12);
//! ```

pub mod cli;
pub mod entropy;
mod error;
pub mod imaging;
pub mod report;
pub mod sweep;
pub mod threshold;

pub use entropy::{
    coentropy, kaniadakis_compose, kaniadakis_entropy, kappa_log, log_multiplicity, q_log,
    shannon_entropy, tsallis_compose, tsallis_entropy, Distribution, EntropyFunctional,
    EntropyKind, KappaIndex, TsallisIndex,
};
pub use error::{Error, Result};
pub use imaging::{
    build_histogram, decode_pgm, load_image, to_grayscale, write_bilevel, write_gray, BiLevelImage,
    Binary, GrayImage, Histogram,
};
pub use report::{emit_csv, parse_csv, render_csv, ExitStatus, ReportTables, RunConfig};
pub use sweep::{
    detect_transitions, mirror_check, select_best, sweep, IndexPolicy, MirrorPair, SweepKind,
    SweepOptions, SweepRow, SweepTable, Transition, TransitionReport,
};
pub use threshold::{
    binarize, edge_pixel_count, optimize_threshold, split, total_entropy, ClassDistribution,
    Connectivity, ThresholdResult,
};

// The guide chapters under `book/` are compiled and run as doc-tests so the
// snippets cannot drift from the API.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!(concat!("../../../book/src/", $path))]
            pub struct $name;
        };
    }
    chapter!(Introduction, "introduction.md");
    chapter!(Histograms, "histograms.md");
    chapter!(Entropies, "entropies.md");
    chapter!(Composition, "composition.md");
    chapter!(Thresholding, "thresholding.md");
    chapter!(Sweeps, "sweeps.md");
    chapter!(Mirror, "mirror.md");
    chapter!(Cli, "cli.md");
}
