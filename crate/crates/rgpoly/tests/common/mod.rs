//! Golden polynomials shared by the integration and acceptance tests.
//!
//! Each is encoded from its published closed form, in two independent
//! shapes where available (a bracket in `t` and a polynomial in
//! `z = (t+1)^2/4t`), so a transcription slip in one encoding cannot
//! silently match the other.

use rgpoly::{LaurentPoly, Rat};

pub fn tvar(n: usize, i: usize) -> LaurentPoly {
    LaurentPoly::var(n, i)
}

pub fn tpow(n: usize, i: usize, k: i32) -> LaurentPoly {
    let mut e = vec![0; n];
    e[i] = k;
    LaurentPoly::monomial(n, &e, Rat::one())
}

pub fn constant(n: usize, r: Rat) -> LaurentPoly {
    LaurentPoly::constant(n, r)
}

/// `z = (t+1)^2 / (4t)` as a one-variable Laurent polynomial.
pub fn z_of_t() -> LaurentPoly {
    let tp1 = &tvar(1, 0) + &constant(1, Rat::one());
    (&tp1 * &tp1).mul_monomial(&[-1], &Rat::new(1, 4))
}

/// A polynomial in `z`: sum of `c_k z^k` over `(k, c_k)` pairs.
pub fn z_form(terms: &[(u32, Rat)]) -> LaurentPoly {
    let z = z_of_t();
    let mut acc = LaurentPoly::zero(1);
    for &(k, ref c) in terms {
        let mut zp = LaurentPoly::one(1);
        for _ in 0..k {
            zp = &zp * &z;
        }
        acc = &acc + &zp.scaled(c);
    }
    acc
}

/// `prod_j (t_j + 1)` over all `n` slots.
fn all_plus_one(n: usize) -> LaurentPoly {
    let mut acc = LaurentPoly::one(n);
    for i in 0..n {
        acc = &acc * &(&tvar(n, i) + &constant(n, Rat::one()));
    }
    acc
}

/// The genus-zero four-boundary polynomial:
/// `(1/2^8) prod(t_j+1) [ sum t_j^2 - sum t_j - 5 - sum_{i<j} 1/(t_i t_j)
///   + (1/(t_1 t_2 t_3 t_4)) (-5 - sum 1/t_j + sum 1/t_j^2) ]`.
pub fn golden_f04() -> LaurentPoly {
    let n = 4;
    let mut bracket = constant(n, Rat::from_int(-5));
    for j in 0..n {
        bracket = &bracket + &tpow(n, j, 2);
        bracket = &bracket - &tvar(n, j);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut e = vec![0; n];
            e[i] = -1;
            e[j] = -1;
            bracket = &bracket - &LaurentPoly::monomial(n, &e, Rat::one());
        }
    }
    let mut tail = constant(n, Rat::from_int(-5));
    for j in 0..n {
        tail = &tail - &tpow(n, j, -1);
        tail = &tail + &tpow(n, j, -2);
    }
    let inv_all = LaurentPoly::monomial(n, &[-1, -1, -1, -1], Rat::one());
    bracket = &bracket + &(&inv_all * &tail);
    (&all_plus_one(n) * &bracket).scaled(&Rat::new(1, 256))
}

/// The genus-one two-boundary polynomial, all 23 published terms.
pub fn golden_f12() -> LaurentPoly {
    let n = 2;
    let term = |a: i32, b: i32, c: Rat| LaurentPoly::monomial(n, &[a, b], c);
    let sym = |a: i32, b: i32, c: Rat| {
        if a == b {
            term(a, b, c)
        } else {
            &term(a, b, c.clone()) + &term(b, a, c)
        }
    };
    let mut acc = LaurentPoly::zero(n);
    acc = &acc + &sym(5, 1, Rat::one());
    acc = &acc + &sym(3, 3, Rat::new(1, 3));
    acc = &acc + &sym(5, 0, Rat::one());
    acc = &acc + &sym(3, 1, Rat::from_int(-6));
    acc = &acc + &sym(3, 0, Rat::new(-17, 3));
    acc = &acc + &sym(1, 1, Rat::from_int(27));
    acc = &acc + &sym(1, 0, Rat::from_int(26));
    acc = &acc + &term(0, 0, Rat::new(128, 3));
    acc = &acc + &sym(1, -1, Rat::from_int(4));
    acc = &acc + &sym(-1, 0, Rat::from_int(26));
    acc = &acc + &sym(-1, -1, Rat::from_int(27));
    acc = &acc + &sym(-3, 0, Rat::new(-17, 3));
    acc = &acc + &sym(-1, -3, Rat::from_int(-6));
    acc = &acc + &sym(-5, 0, Rat::one());
    acc = &acc + &sym(-3, -3, Rat::new(1, 3));
    acc = &acc + &sym(-1, -5, Rat::one());
    acc.scaled(&Rat::new(1, 2048))
}

/// Symmetric one-variable bracket `sum c_k (t^k + t^{-k}) + c_0`, scaled by
/// `s * (t+1)^{2m} / t^m`.
fn palindromic_bracket(coeffs: &[(i32, Rat)], m: u32, scale: Rat) -> LaurentPoly {
    let mut bracket = LaurentPoly::zero(1);
    for &(k, ref c) in coeffs {
        bracket = &bracket + &LaurentPoly::monomial(1, &[k], c.clone());
        if k != 0 {
            bracket = &bracket + &LaurentPoly::monomial(1, &[-k], c.clone());
        }
    }
    let tp1 = &tvar(1, 0) + &constant(1, Rat::one());
    let mut envelope = LaurentPoly::one(1);
    for _ in 0..2 * m {
        envelope = &envelope * &tp1;
    }
    (&envelope * &bracket).mul_monomial(&[-(m as i32)], &scale)
}

/// The genus-two one-boundary polynomial, bracket form.
pub fn golden_f21() -> LaurentPoly {
    palindromic_bracket(
        &[
            (5, Rat::new(35, 3)),
            (4, Rat::new(-280, 3)),
            (3, Rat::from_int(333)),
            (2, Rat::from_int(-704)),
            (1, Rat::new(5018, 5)),
            (0, Rat::new(-5424, 5)),
        ],
        4,
        Rat::new(-1, 1 << 19),
    )
}

/// The same polynomial as a degree-nine expression in `z`.
pub fn golden_f21_zform() -> LaurentPoly {
    z_form(&[
        (9, Rat::new(-35, 6)),
        (8, Rat::new(105, 4)),
        (7, Rat::new(-93, 2)),
        (6, Rat::new(161, 4)),
        (5, Rat::new(-84, 5)),
        (4, Rat::new(21, 8)),
    ])
}

/// The genus-three one-boundary polynomial, bracket form.
pub fn golden_f31() -> LaurentPoly {
    palindromic_bracket(
        &[
            (9, Rat::new(5005, 3)),
            (8, Rat::from_int(-20020)),
            (7, Rat::from_int(112343)),
            (6, Rat::new(-1181488, 3)),
            (5, Rat::from_int(975692)),
            (4, Rat::from_int(-1842448)),
            (3, Rat::new(25312028, 9)),
            (2, Rat::new(-10959056, 3)),
            (1, Rat::new(88361050, 21)),
            (0, Rat::new(-277329032, 63)),
        ],
        6,
        Rat::new(-1, 1 << 30),
    )
}

/// The same polynomial as a degree-fifteen expression in `z`.
pub fn golden_f31_zform() -> LaurentPoly {
    z_form(&[
        (15, Rat::new(-5005, 3)),
        (14, Rat::new(25025, 2)),
        (13, Rat::from_int(-41118)),
        (12, Rat::new(929929, 12)),
        (11, Rat::new(-183955, 2)),
        (10, Rat::new(283767, 4)),
        (9, Rat::new(-317735, 9)),
        (8, Rat::from_int(10813)),
        (7, Rat::new(-25443, 14)),
        (6, Rat::new(495, 4)),
    ])
}
