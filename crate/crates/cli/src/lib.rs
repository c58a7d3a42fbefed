//! File formats, DOT export and the command layer for the string-graph
//! grammar toolkit. The algorithms live in `sgraft-core`; this crate adds
//! everything that touches the filesystem.

pub mod commands;
pub mod dot;
pub mod error;
pub mod formats;
pub mod workspace;
