pub mod cli;
pub mod ensemble;
pub mod error;
pub mod game;
pub mod metaorder;
pub mod replica;
pub mod stats;

pub use error::{Error, Result};
