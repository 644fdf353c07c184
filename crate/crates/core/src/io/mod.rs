//! Flat-file artifacts: spectrum CSVs, fit tables, SVG overlays and the suite report.

pub mod csv;
pub mod report;
pub mod svg;

pub use self::csv::{read_spectrum_csv, write_fano_csv, write_spectrum_csv, SPECTRUM_HEADER};
pub use self::report::{write_suite, Report};
pub use self::svg::render_overlay;
