//! Instance-file format and report rendering behind the `farkas` binary.

pub mod instance;
pub mod render;
