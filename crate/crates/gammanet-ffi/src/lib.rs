//! C ABI surface; filled in alongside the core crate.
