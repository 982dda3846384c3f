//! The bundled example systems and witnesses.

use crate::error::Result;
use crate::systems::{parse_system, System};

/// `(file name, contents)` for every bundled document.
pub const FILES: &[(&str, &str)] = &[
    ("fig1_X.sys", include_str!("../corpus/fig1_X.sys")),
    ("fig1_Y.sys", include_str!("../corpus/fig1_Y.sys")),
    ("fig1_Z.sys", include_str!("../corpus/fig1_Z.sys")),
    ("fig1_W.sys", include_str!("../corpus/fig1_W.sys")),
    ("a22_X.sys", include_str!("../corpus/a22_X.sys")),
    ("a22_Y.sys", include_str!("../corpus/a22_Y.sys")),
    ("a22_b.wit", include_str!("../corpus/a22_b.wit")),
    ("a23_X.sys", include_str!("../corpus/a23_X.sys")),
    ("a23_Y.sys", include_str!("../corpus/a23_Y.sys")),
    ("a23_b.wit", include_str!("../corpus/a23_b.wit")),
];

pub fn text(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parses a bundled system by file name, e.g. `fig1_X.sys`.
///
/// # Panics
/// If no such file is bundled.
pub fn system(name: &str) -> Result<System> {
    parse_system(text(name).unwrap_or_else(|| panic!("no bundled file {name}")))
}
