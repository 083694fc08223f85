//! The recursion engine against the published closed forms.

mod common;

use common::*;
use rgpoly::recursion::Engine;
use rgpoly::Rat;

#[test]
fn golden_encodings_are_mutually_consistent() {
    // Bracket form and z-form are independent transcriptions.
    assert_eq!(golden_f21(), golden_f21_zform());
    assert_eq!(golden_f31(), golden_f31_zform());
}

#[test]
fn f04_matches_golden() {
    let engine = Engine::new();
    assert_eq!(*engine.compute_f(0, 4).unwrap(), golden_f04());
}

#[test]
fn f12_matches_golden() {
    let engine = Engine::new();
    assert_eq!(*engine.compute_f(1, 2).unwrap(), golden_f12());
}

#[test]
fn f21_matches_golden() {
    let engine = Engine::new();
    assert_eq!(*engine.compute_f(2, 1).unwrap(), golden_f21());
}

#[test]
fn f31_matches_golden() {
    let engine = Engine::new();
    let f31 = engine.compute_f(3, 1).unwrap();
    assert_eq!(*f31, golden_f31());
    // Spot-check two published coefficients through the z-form basis:
    // the z^15 coefficient and the t^{+-1} bracket entries.
    let bracket_top = Rat::new(5005, 3);
    let scale = Rat::new(-1, 1 << 30);
    // Top exponent of the bracket form: (t+1)^12 t^{-6} * t^9 tops at t^15.
    assert_eq!(f31.coeff(&[15]), &bracket_top * &scale);
    assert_eq!(f31.coeff(&[-15]), &bracket_top * &scale);
}
