//! The canonical CM elliptic curve attached to K = Q(√−p) and its periods.
//!
//! For class number one the curve descends to Q: j(O_K) is a rational cube
//! m³, (j − 1728)/(−p) is a square n², and the reduced integral model has
//! invariants (c4, c6) = (−mp, np²) with discriminant −p³. For h > 1 the
//! same quantities exist as real numbers attached to the (irrational) CM
//! j-invariant and are reported numerically.
//!
//! The period Ω packages the Chowla–Selberg Γ-product, the class number,
//! and the positive real unit ρ from the eta cocycle chain:
//!
//!   Ω = i^{(p+1)/4} · [ ρ · (2π)^{(2h+1−p)/4} · p^{(1−3h)/4}
//!        · ∏_{(m/p)=1} Γ(m/p) ]^{1/h},
//!
//! normalized so that Re Ω > 0, or Im Ω > 0 when Ω is purely imaginary
//! (Ω is real exactly when p ≡ 7 mod 8). The scaled lattice Ω·O_K then
//! satisfies Δ(Ω·O_K) = −p³, and for h = 1 it coincides with the period
//! lattice of the reduced model as computed independently by the AGM.

use std::sync::Arc;

use rug::{Complex, Float, Rational};

use crate::analytic::{
    agm_real_period, delta_of_lattice, gamma_fn, j_of_ideal, recognize_integer, rel_err, tol,
    Lattice, GUARD,
};
use crate::cocycle::DeltaCocycle;
use crate::error::{Error, Result};
use crate::pointcount::{minimal_model_from_c4c6, WeierstrassModel};
use crate::quadfield::{legendre, FieldContext};

/// Exact data available when the curve is defined over Q (h = 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrossExactData {
    pub j: i128,
    pub m: i64,
    pub n: i64,
    pub c4: i64,
    pub c6: i64,
    pub discriminant: i128,
    pub model: WeierstrassModel,
}

/// Invariants of the canonical curve: always available numerically,
/// exactly recognized when the class number is one.
pub struct GrossCurve {
    pub p: u64,
    pub class_number: usize,
    pub j_numeric: Float,
    pub m_numeric: Float,
    pub n_numeric: Float,
    pub exact: Option<GrossExactData>,
}

impl GrossCurve {
    pub fn c4_numeric(&self) -> Float {
        let prec = self.m_numeric.prec();
        -Float::with_val(prec, &self.m_numeric * &Float::with_val(prec, self.p))
    }

    pub fn c6_numeric(&self) -> Float {
        let prec = self.n_numeric.prec();
        Float::with_val(prec, &self.n_numeric * &Float::with_val(prec, self.p * self.p))
    }
}

/// Compute the canonical curve's invariants from j(O_K).
pub fn gross_curve(fld: &Arc<FieldContext>, prec: u32) -> Result<GrossCurve> {
    let wp = prec + GUARD;
    let jc = j_of_ideal(fld, &fld.unit_ideal(), wp)?;
    // The maximal order is stable under conjugation, so j(O_K) is real.
    let scale = Float::with_val(wp, jc.real().clone().abs()) + 1u32;
    if Float::with_val(wp, jc.imag().clone().abs() / &scale) > tol(prec) {
        return Err(Error::Resolution {
            prec,
            reason: "j(O_K) failed to be real within tolerance".into(),
        });
    }
    let j_r = jc.real().clone();
    let m_num = j_r.clone().cbrt();
    let n_sq = Float::with_val(wp, 1728 - &j_r) / Float::with_val(wp, fld.p);
    let n_abs = n_sq.sqrt();
    let n_num = if legendre(2, fld.p) == 1 {
        n_abs
    } else {
        -n_abs
    };

    let exact = if fld.h == 1 {
        let m_i = recognize_integer(&m_num, None).ok_or(Error::Recognition {
            prec,
            reason: "cube root of j(O_K) is not an integer at class number one".into(),
        })?;
        let n_i = recognize_integer(&n_num, None).ok_or(Error::Recognition {
            prec,
            reason: "square root of (1728 − j)/p is not an integer".into(),
        })?;
        let m = m_i
            .to_i64()
            .ok_or_else(|| Error::domain("recognized m overflows i64".to_string()))?;
        let n = n_i
            .to_i64()
            .ok_or_else(|| Error::domain("recognized n overflows i64".to_string()))?;
        let j = (m as i128).pow(3);
        if (n as i128).pow(2) * fld.p as i128 != 1728 - j {
            return Err(Error::domain(format!(
                "recognized invariants are inconsistent: n²p ≠ 1728 − j for p = {}",
                fld.p
            )));
        }
        let c4 = m
            .checked_mul(fld.p as i64)
            .and_then(|v| v.checked_neg())
            .ok_or_else(|| Error::domain("c4 overflows i64".to_string()))?;
        let c6 = i64::try_from(n as i128 * (fld.p as i128 * fld.p as i128))
            .map_err(|_| Error::domain("c6 overflows i64".to_string()))?;
        let discriminant =
            ((c4 as i128).pow(3) - (c6 as i128).pow(2)) / 1728;
        if discriminant != -(fld.p as i128).pow(3) {
            return Err(Error::domain(format!(
                "discriminant {} is not −p³ for p = {}",
                discriminant, fld.p
            )));
        }
        let model = minimal_model_from_c4c6(c4, c6)?;
        Some(GrossExactData {
            j,
            m,
            n,
            c4,
            c6,
            discriminant,
            model,
        })
    } else {
        None
    };

    let mut j_out = j_r;
    j_out.set_prec(prec);
    let mut m_out = m_num;
    m_out.set_prec(prec);
    let mut n_out = n_num;
    n_out.set_prec(prec);
    Ok(GrossCurve {
        p: fld.p,
        class_number: fld.h,
        j_numeric: j_out,
        m_numeric: m_out,
        n_numeric: n_out,
        exact,
    })
}

/// The period Ω attached to K: Γ-product bracket, h-th root, and the
/// canonical fourth-root-of-unity prefactor, sign-normalized.
pub fn omega_period(fld: &Arc<FieldContext>, dc: &DeltaCocycle, prec: u32) -> Result<Complex> {
    if dc.fld.p != fld.p {
        return Err(Error::context(format!(
            "cocycle chain is for p = {} but the field has p = {}",
            dc.fld.p, fld.p
        )));
    }
    let wp = prec + 2 * GUARD;
    let h = fld.h as i64;
    let p = fld.p;

    let rho = Float::with_val(wp, &dc.rho()?);
    let two_pi = Float::with_val(wp, rug::float::Constant::Pi) * 2u32;
    let e1 = Float::with_val(wp, Rational::from((2 * h + 1 - p as i64, 4)));
    let t1 = Float::with_val(wp, &e1 * &two_pi.ln()).exp();
    let e2 = Float::with_val(wp, Rational::from((1 - 3 * h, 4)));
    let t2 = Float::with_val(wp, &e2 * &Float::with_val(wp, p).ln()).exp();
    let mut gprod = Float::with_val(wp, 1);
    for m in 1..p {
        if legendre(m as i64, p) == 1 {
            gprod *= gamma_fn(&Rational::from((m, p)), wp)?;
        }
    }
    let bracket = Float::with_val(wp, &rho * &t1) * t2 * gprod;
    if bracket.cmp0() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Resolution {
            prec,
            reason: "period bracket failed to be positive".into(),
        });
    }
    let root = bracket.root(fld.h as u32);

    let e = ((p + 1) / 4) % 4;
    let mut omega = match e {
        0 => Complex::with_val(wp, (root, Float::new(wp))),
        1 => Complex::with_val(wp, (Float::new(wp), root)),
        2 => Complex::with_val(wp, (-root, Float::new(wp))),
        _ => Complex::with_val(wp, (Float::new(wp), -root)),
    };
    // Normalize the overall sign: Re Ω > 0, or Im Ω > 0 on the imaginary axis.
    let flip = omega.real().is_sign_negative() && !omega.real().is_zero()
        || (omega.real().is_zero() && omega.imag().is_sign_negative());
    if flip {
        omega = -omega;
    }
    omega.set_prec(prec);
    Ok(omega)
}

/// Comparison of Ω·O_K against the AGM period lattice of the reduced model.
pub struct AgmComparison {
    /// Does Ω·O_K equal the AGM lattice (unimodular change of basis)?
    pub lattice_match: bool,
    /// Distance of Ω from the nearest AGM-lattice point, in basis coordinates.
    pub coordinate_residual: Float,
}

/// The scaled period lattice Ω·O_K and its certification data.
pub struct PeriodData {
    pub omega: Complex,
    pub omega_lattice: Lattice,
    /// Δ(Ω·O_K), which must equal −p³.
    pub delta_scaled: Complex,
    pub delta_residual: Float,
    /// Present only when the curve is defined over Q (h = 1).
    pub agm: Option<AgmComparison>,
}

/// Build Ω·O_K, verify Δ(Ω·O_K) = −p³, and (for h = 1) cross-check the
/// lattice against the AGM periods of the reduced integral model.
pub fn period_data(fld: &Arc<FieldContext>, dc: &DeltaCocycle, prec: u32) -> Result<PeriodData> {
    let wp = prec + GUARD;
    let omega = omega_period(fld, dc, wp)?;
    let sp = Float::with_val(wp, fld.p).sqrt();
    let omega_k = Complex::with_val(wp, (Float::with_val(wp, 0.5), sp / 2u32));
    let w2 = Complex::with_val(wp, &omega * &omega_k);
    let lat = Lattice::new(omega.clone(), w2)?;
    let delta = delta_of_lattice(&lat, wp)?;
    let target = Complex::with_val(wp, (-(fld.p as i128).pow(3), 0));
    let delta_residual = rel_err(&delta, &target);

    let agm = if fld.h == 1 {
        let gc = gross_curve(fld, wp)?;
        let ex = gc
            .exact
            .expect("class number one always recognizes exact invariants");
        let c4f = Float::with_val(wp, ex.c4);
        let c6f = Float::with_val(wp, ex.c6);
        let alat = agm_real_period(&c4f, &c6f, wp)?;
        let (x, y) = alat.coordinates(&omega);
        let rx = Float::with_val(wp, &x - &x.clone().round()).abs();
        let ry = Float::with_val(wp, &y - &y.clone().round()).abs();
        let coordinate_residual = if rx > ry { rx } else { ry };
        let lattice_match = lat.equals(&alat, &tol(prec));
        Some(AgmComparison {
            lattice_match,
            coordinate_residual,
        })
    } else {
        None
    };

    let mut omega_out = omega;
    omega_out.set_prec(prec);
    Ok(PeriodData {
        omega: omega_out,
        omega_lattice: lat,
        delta_scaled: delta,
        delta_residual,
        agm,
    })
}
