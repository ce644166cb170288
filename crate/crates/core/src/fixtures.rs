//! Instances shipped with the crate.
//!
//! * `EX-L`: five-dimensional Lie algebra with parameters `l1..l4, m1, m2`,
//!   `ξ = e0`, `φ` swapping `e1 ↔ e3` and `e2 ↔ e4`, identity metric.
//! * `EX-0`: the same structure on the abelian algebra.
//! * `EX-R`: `EX-L` under a fixed rational substitution.

use crate::input::{parse_instance, parse_substitution};
use crate::scalar::Substitution;
use crate::structure::PiManifold;

pub const EX_L_JSON: &str = include_str!("../fixtures/EX-L.json");
pub const EX_0_JSON: &str = include_str!("../fixtures/EX-0.json");
pub const EX_R_SUBST_JSON: &str = include_str!("../fixtures/EX-R.subst.json");

fn build(text: &str) -> PiManifold {
    let input = parse_instance(text).expect("bundled fixture parses");
    PiManifold::new(input.algebra, input.structure).expect("bundled fixture is valid")
}

pub fn ex_l() -> PiManifold {
    build(EX_L_JSON)
}

pub fn ex_0() -> PiManifold {
    build(EX_0_JSON)
}

pub fn ex_r_substitution() -> Substitution {
    parse_substitution(EX_R_SUBST_JSON, ex_l().params()).expect("bundled substitution parses")
}

pub fn ex_r() -> PiManifold {
    ex_l()
        .substitute(&ex_r_substitution())
        .expect("substituted fixture is valid")
}
