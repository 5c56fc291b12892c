//! Library side of the `jacobi-fbl` command-line tool.

pub mod suites;
