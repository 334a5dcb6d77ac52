//! Integral Weierstrass models and point counting over prime fields.
//!
//! The curves of interest have invariants (c4, c6) = (−mp, np²) with
//! discriminant −p³; `minimal_model_from_c4c6` finds the reduced global
//! minimal model (a1, a3 ∈ {0,1}, a2 ∈ {−1,0,1}) realizing exactly those
//! invariants, and `count_points` counts F_ℓ points of the long Weierstrass
//! form by enumeration — an oracle for q-expansion coefficients that shares
//! no code with the character-sum machinery.

use crate::error::{Error, Result};
use crate::quadfield::is_prime_u64;

/// A long Weierstrass equation y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
}

impl WeierstrassModel {
    pub fn b_invariants(&self) -> (i128, i128, i128, i128) {
        let (a1, a2, a3, a4, a6) = (
            self.a1 as i128,
            self.a2 as i128,
            self.a3 as i128,
            self.a4 as i128,
            self.a6 as i128,
        );
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = (b2 * b6 - b4 * b4) / 4;
        (b2, b4, b6, b8)
    }

    pub fn c4(&self) -> i128 {
        let (b2, b4, _, _) = self.b_invariants();
        b2 * b2 - 24 * b4
    }

    pub fn c6(&self) -> i128 {
        let (b2, b4, b6, _) = self.b_invariants();
        -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    }

    pub fn discriminant(&self) -> i128 {
        let c4 = self.c4();
        let c6 = self.c6();
        (c4 * c4 * c4 - c6 * c6) / 1728
    }
}

/// Find the reduced integral model with the given invariants exactly:
/// a1, a3 ∈ {0, 1} and a2 ∈ {−1, 0, 1} pin the unique reduced choice.
pub fn minimal_model_from_c4c6(c4: i64, c6: i64) -> Result<WeierstrassModel> {
    let (c4, c6) = (c4 as i128, c6 as i128);
    for a1 in 0..=1i128 {
        for a2 in -1..=1i128 {
            for a3 in 0..=1i128 {
                let b2 = a1 * a1 + 4 * a2;
                let num4 = b2 * b2 - c4;
                if num4 % 24 != 0 {
                    continue;
                }
                let b4 = num4 / 24;
                let num6 = -c6 - b2 * b2 * b2 + 36 * b2 * b4;
                if num6 % 216 != 0 {
                    continue;
                }
                let b6 = num6 / 216;
                let numa4 = b4 - a1 * a3;
                if numa4 % 2 != 0 {
                    continue;
                }
                let a4 = numa4 / 2;
                let numa6 = b6 - a3 * a3;
                if numa6 % 4 != 0 {
                    continue;
                }
                let a6 = numa6 / 4;
                let model = WeierstrassModel {
                    a1: a1 as i64,
                    a2: a2 as i64,
                    a3: a3 as i64,
                    a4: i64::try_from(a4).map_err(|_| {
                        Error::domain("model coefficient a4 overflows i64".to_string())
                    })?,
                    a6: i64::try_from(a6).map_err(|_| {
                        Error::domain("model coefficient a6 overflows i64".to_string())
                    })?,
                };
                if model.c4() == c4 && model.c6() == c6 {
                    return Ok(model);
                }
            }
        }
    }
    Err(Error::domain(format!(
        "no reduced integral model exists with c4 = {}, c6 = {}",
        c4, c6
    )))
}

/// #E(F_ℓ) including the point at infinity, by direct enumeration of the
/// long Weierstrass form. ℓ must be a prime of good reduction.
pub fn count_points(model: &WeierstrassModel, ell: u64) -> Result<u64> {
    if !is_prime_u64(ell) {
        return Err(Error::domain(format!("{} is not prime", ell)));
    }
    let l = ell as i64;
    if (model.discriminant() % l as i128) == 0 {
        return Err(Error::domain(format!(
            "{} divides the discriminant: bad reduction",
            ell
        )));
    }
    let md = |v: i64| -> i64 { v.rem_euclid(l) };
    let (a1, a2, a3, a4, a6) = (
        md(model.a1),
        md(model.a2),
        md(model.a3),
        md(model.a4),
        md(model.a6),
    );
    let mut count = 1u64; // point at infinity
    for x in 0..l {
        let rhs = md(md(md(x * x) * x) + md(a2 * md(x * x)) + md(a4 * x) + a6);
        for y in 0..l {
            let lhs = md(md(y * y) + md(a1 * md(x * y)) + md(a3 * y));
            if lhs == rhs {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// The Frobenius trace a_ℓ = ℓ + 1 − #E(F_ℓ) at a good prime.
pub fn trace_of_frobenius(model: &WeierstrassModel, ell: u64) -> Result<i64> {
    let n = count_points(model, ell)?;
    Ok(ell as i64 + 1 - n as i64)
}
