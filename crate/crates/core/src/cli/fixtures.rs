//! Inputs shipped inside the binary. Names are unique across kinds.

use super::input::Kind;

macro_rules! fixture {
    ($kind:ident, $name:literal) => {
        (Kind::$kind, $name, include_str!(concat!("fixtures/", $name, ".json")))
    };
}

pub const FIXTURES: &[(Kind, &str, &str)] = &[
    fixture!(GSet, "s3-natural"),
    fixture!(GSet, "pt-z2"),
    fixture!(GSet, "pt-s3"),
    fixture!(GSet, "free-z2"),
    fixture!(GSet, "d4-vertices"),
    fixture!(GSet, "q8-mixed"),
    fixture!(Curve, "p237"),
    fixture!(Curve, "modular"),
    fixture!(Curve, "genus2"),
    fixture!(Divisor, "zero"),
    fixture!(Divisor, "modular-12"),
    fixture!(Divisor, "half-third"),
    fixture!(Bundle, "pt-z2-sign"),
    fixture!(Bundle, "s3-natural-regular"),
    fixture!(Bundle, "pt-z3-character"),
    fixture!(Strata, "modular-weights"),
    fixture!(Strata, "s3-natural-ones"),
    fixture!(Strata, "z2-point-weights"),
];

/// The curve each divisor fixture lives on.
pub const DIVISOR_CURVES: &[(&str, &str)] = &[("zero", "p237"), ("modular-12", "modular"), ("half-third", "p237")];

pub fn lookup(kind: Kind, name: &str) -> Option<&'static str> {
    FIXTURES
        .iter()
        .find(|(k, n, _)| *k == kind && *n == name)
        .map(|(_, _, text)| *text)
}

pub fn kind_of(name: &str) -> Option<Kind> {
    FIXTURES.iter().find(|(_, n, _)| *n == name).map(|(k, _, _)| *k)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(_, n, _)| *n)
}
