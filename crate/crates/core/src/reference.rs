//! The small presentations used throughout the test suites and as CLI
//! defaults.

use crate::local::LocalGroup;
use crate::word::Presentation;

fn z(k: u32) -> LocalGroup {
    LocalGroup::cyclic(k).expect("order ≥ 2")
}

/// `C_5` with every vertex group `Z/2` (a right-angled Coxeter group).
pub fn c5_z2() -> Presentation {
    Presentation::uniform(5, z(2)).expect("valid")
}

/// `C_5` with every vertex group `Z/3`.
pub fn c5_z3() -> Presentation {
    Presentation::uniform(5, z(3)).expect("valid")
}

/// `C_5` with groups `Z/2, Z/3, S3, Z/2, Z/3`.
pub fn c5_mixed() -> Presentation {
    Presentation::new(vec![z(2), z(3), LocalGroup::symmetric3(), z(2), z(3)]).expect("valid")
}

/// `C_6` with groups `S3, Z/2, Z/3, S3, Z/2, Z/3`.
pub fn c6_mixed() -> Presentation {
    Presentation::new(vec![
        LocalGroup::symmetric3(),
        z(2),
        z(3),
        LocalGroup::symmetric3(),
        z(2),
        z(3),
    ])
    .expect("valid")
}

/// All reference presentations with short names.
pub fn all() -> Vec<(&'static str, Presentation)> {
    vec![
        ("c5_z2", c5_z2()),
        ("c5_z3", c5_z3()),
        ("c5_mixed", c5_mixed()),
        ("c6_mixed", c6_mixed()),
    ]
}

pub fn by_name(name: &str) -> Option<Presentation> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, p)| p)
}
