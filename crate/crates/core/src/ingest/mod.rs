//! Getting samples in: measurement CSV files and a seeded synthetic
//! campaign generator.

mod csv_io;
mod synthetic;

pub use csv_io::{load_csv, read_csv, write_csv, CSV_HEADER};
pub use synthetic::{generate, inverse_normal_cdf, DistanceSampling, SyntheticSpec, UniformStream};
