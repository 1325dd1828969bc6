// SPDX-License-Identifier: Apache-2.0
pub mod error;
pub mod finposet;
pub mod format;
pub mod frames;
pub mod gen;
pub mod system;
pub mod states;
pub mod domconv;
pub mod appmap;
pub mod classic;
pub mod cli;
pub mod constructions;
pub mod tokenset;

pub use error::{Error, Result};
