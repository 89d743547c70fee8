//! Report assembly, table generation and grid orchestration behind `hilbir`.

pub mod grid;
pub mod json;
pub mod report;
pub mod tables;
