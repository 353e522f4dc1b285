pub mod cli;
pub mod config;
pub mod data;
pub mod fml;
pub mod pipeline;
pub mod workspace;
