// The cap is process-wide, so these checks live in their own test binary.

use std::sync::Arc;

use spancalc_core::action::FiniteGroup;
use spancalc_core::config::{set_size_cap, size_cap, DEFAULT_SIZE_CAP};
use spancalc_core::groupoid::{FiniteGroupoid, GroupoidFunctor};
use spancalc_core::span::{weak_pullback, weak_pullback_reduced};
use spancalc_core::Error;

#[test]
fn caps_are_enforced_and_restorable() {
    assert_eq!(size_cap(), DEFAULT_SIZE_CAP);
    let s5 = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::symmetric(5)));
    let id = GroupoidFunctor::identity(&s5);
    set_size_cap(1000);
    // 120 objects, each with 120·120 endomorphism pairs
    let err = weak_pullback(&id, &id).unwrap_err();
    assert!(matches!(err, Error::SizeCap { what: "weak pullback morphisms", .. }), "{err}");
    assert!(weak_pullback_reduced(&id, &id).is_ok());
    set_size_cap(0);
    assert_eq!(size_cap(), DEFAULT_SIZE_CAP);
    assert!(weak_pullback(&id, &id).is_ok());
}
