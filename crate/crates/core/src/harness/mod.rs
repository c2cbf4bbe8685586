pub mod config;
pub mod fit;
pub mod sweep;
pub mod tables;
