//! Arbitrary-precision complex analysis: the Dedekind eta function, the
//! discriminant form Δ and Eisenstein series on lattices, the j-invariant
//! of ideals, the Gamma function, and an AGM-based period oracle.
//!
//! Conventions fixed here and used throughout the crate:
//!   • the complex embedding sends sqrt(-p) to +i·sqrt(p);
//!   • an ideal content·(nZ + (b+ω)Z) gets the lattice basis
//!     (content·n, content·(b+ω)) under that embedding;
//!   • Δ(L) = ω₁^{−12}(2π)^{12} η(τ)^{24} with τ = ω₂/ω₁ reduced to the
//!     fundamental domain, c4(L) = (2π/ω₁)⁴E₄(τ), c6(L) = (2π/ω₁)⁶E₆(τ),
//!     so c4³ − c6² = 1728·Δ.

use crate::error::{Error, Result};
use crate::quadfield::{FieldContext, Ideal};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

/// Guard bits added to every working precision.
pub const GUARD: u32 = 32;

/// Alias used across the crate for arbitrary-precision complex values.
pub type BigComplex = Complex;

/// Default comparison tolerance at a given precision: 2^{−prec/2}.
pub fn tol(prec: u32) -> Float {
    Float::with_val(prec, 2).pow(-((prec / 2) as i32))
}

/// |z| as a Float.
pub fn cabs(z: &Complex) -> Float {
    z.real().clone().hypot(z.imag())
}

/// Relative distance |a−b| / max(1, |a|).
pub fn rel_err(a: &Complex, b: &Complex) -> Float {
    let d = cabs(&Complex::with_val(a.prec().0, a - b));
    let m = cabs(a);
    if m > 1 {
        d / m
    } else {
        d
    }
}

fn c_i64(prec: u32, v: i64) -> Complex {
    Complex::with_val(prec, (v, 0))
}

/// An oriented lattice basis: τ = omega2/omega1 in the upper half-plane.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub omega1: Complex,
    pub omega2: Complex,
}

impl Lattice {
    /// Construct, flipping the sign of omega2 if needed so that
    /// Im(omega2/omega1) > 0. Errors on a degenerate (R-linearly
    /// dependent) pair.
    pub fn new(omega1: Complex, omega2: Complex) -> Result<Lattice> {
        let prec = omega1.prec().0;
        let t = Complex::with_val(prec, &omega2 / &omega1);
        let w1_zero = omega1.real().is_zero() && omega1.imag().is_zero();
        if t.imag().is_zero() || !t.imag().is_finite() || w1_zero {
            return Err(Error::domain(
                "degenerate lattice basis: omega2/omega1 must have nonzero imaginary part",
            ));
        }
        if t.imag().is_sign_negative() {
            Ok(Lattice {
                omega1,
                omega2: -omega2,
            })
        } else {
            Ok(Lattice { omega1, omega2 })
        }
    }

    pub fn tau(&self) -> Complex {
        let prec = self.omega1.prec().0;
        Complex::with_val(prec, &self.omega2 / &self.omega1)
    }

    /// Coordinates of z in this basis: (x, y) real with
    /// z = x·omega1 + y·omega2.
    pub fn coordinates(&self, z: &Complex) -> (Float, Float) {
        let prec = self.omega1.prec().0;
        // Solve the 2×2 real system via the imaginary form:
        // det = Im(conj(omega1)·omega2).
        let w1 = &self.omega1;
        let w2 = &self.omega2;
        let det = Float::with_val(prec, w1.real() * w2.imag())
            - Float::with_val(prec, w1.imag() * w2.real());
        let x = (Float::with_val(prec, z.real() * w2.imag())
            - Float::with_val(prec, z.imag() * w2.real()))
            / &det;
        let y = (Float::with_val(prec, w1.real() * z.imag())
            - Float::with_val(prec, w1.imag() * z.real()))
            / &det;
        (x, y)
    }

    /// Does z lie in the lattice (within tolerance)?
    pub fn contains(&self, z: &Complex, eps: &Float) -> bool {
        let (x, y) = self.coordinates(z);
        let rx = Float::with_val(x.prec(), &x - &x.clone().round());
        let ry = Float::with_val(y.prec(), &y - &y.clone().round());
        rx.abs() < *eps && ry.abs() < *eps
    }

    /// Lattice equality: each basis expands integrally in the other with
    /// determinant ±1.
    pub fn equals(&self, other: &Lattice, eps: &Float) -> bool {
        let coords = [
            self.coordinates(&other.omega1),
            self.coordinates(&other.omega2),
        ];
        let mut m = [[0i64; 2]; 2];
        for (r, (x, y)) in coords.iter().enumerate() {
            let xr = x.clone().round();
            let yr = y.clone().round();
            if Float::with_val(x.prec(), x - &xr).abs() > *eps
                || Float::with_val(y.prec(), y - &yr).abs() > *eps
            {
                return false;
            }
            m[r][0] = xr.to_f64() as i64;
            m[r][1] = yr.to_f64() as i64;
        }
        (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() == 1
    }

    pub fn scale(&self, c: &Complex) -> Lattice {
        let prec = self.omega1.prec().0;
        Lattice {
            omega1: Complex::with_val(prec, &self.omega1 * c),
            omega2: Complex::with_val(prec, &self.omega2 * c),
        }
    }
}

/// Reduce τ to the SL₂(Z) fundamental domain, returning the reduced τ′ and
/// the matrix (a, b, c, d) with τ′ = (aτ + b)/(cτ + d).
pub fn reduce_to_fundamental_domain(
    tau: &Complex,
) -> Result<(Complex, (Integer, Integer, Integer, Integer))> {
    let prec = tau.prec().0;
    if !(tau.imag().is_sign_positive() && !tau.imag().is_zero()) {
        return Err(Error::domain("τ must lie in the upper half-plane"));
    }
    let mut t = tau.clone();
    let mut a = Integer::from(1);
    let mut b = Integer::from(0);
    let mut c = Integer::from(0);
    let mut d = Integer::from(1);
    let slack = Float::with_val(prec, 2).pow(-((prec as i32) - 8));
    for _ in 0..100_000 {
        // translate Re into [−1/2, 1/2]
        let shift = Float::with_val(prec, t.real()).round();
        if !shift.is_zero() {
            let s = shift.to_integer().expect("finite real part");
            t -= Complex::with_val(prec, (Float::with_val(prec, &s), 0));
            a -= Integer::from(&s * &c);
            b -= Integer::from(&s * &d);
        }
        // invert when |τ| < 1 (with slack so boundary points terminate)
        let norm = t.real().clone().pow(2) + t.imag().clone().pow(2);
        if norm < Float::with_val(prec, 1) - &slack {
            t = Complex::with_val(prec, t.recip_ref());
            t = -t;
            let (na, nb) = (Integer::from(-&c), Integer::from(-&d));
            let (nc, nd) = (a, b);
            a = na;
            b = nb;
            c = nc;
            d = nd;
        } else {
            return Ok((t, (a, b, c, d)));
        }
    }
    Err(Error::Resolution {
        prec,
        reason: "fundamental-domain reduction did not terminate".into(),
    })
}

/// q = e^{2πiτ}.
fn nome(tau: &Complex, prec: u32) -> Complex {
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let i_two_pi = Complex::with_val(prec, (0, two_pi));
    Complex::with_val(prec, tau * &i_two_pi).exp()
}

/// Dedekind eta via the pentagonal-number series
/// η(τ) = q^{1/24} Σ_{k∈Z} (−1)^k q^{k(3k−1)/2}, truncated when the next
/// term falls below 2^{−prec−GUARD}.
pub fn dedekind_eta(tau: &Complex, prec: u32) -> Result<Complex> {
    let wp = prec + GUARD;
    if !(tau.imag().is_sign_positive() && !tau.imag().is_zero()) {
        return Err(Error::domain(
            "dedekind_eta: τ must lie in the upper half-plane",
        ));
    }
    let q = nome(tau, wp);
    // bound on needed exponent: |q|^E ≤ 2^{−wp−16}
    let log2_abs_q = {
        let aq = cabs(&q);
        Float::with_val(wp, aq.log2_ref())
    };
    let bound = (Float::with_val(wp, -((wp + 16) as i64)) / &log2_abs_q).to_f64();
    assert!(
        bound.is_finite() && bound >= 0.0,
        "nome must satisfy |q| < 1"
    );
    let kmax = ((2.0 * bound / 3.0).sqrt() as i64) + 3;
    let mut sum = Complex::with_val(wp, (0, 0));
    for k in -kmax..=kmax {
        let e = k * (3 * k - 1) / 2;
        if (e as f64) > bound + 2.0 {
            continue;
        }
        let term = Complex::with_val(wp, (&q).pow(e as i64));
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    // q^{1/24} = exp(2πiτ/24), principal and consistent with τ.
    let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
    let q24 = (Complex::with_val(wp, tau * &Complex::with_val(wp, (0, two_pi))) / 24u32).exp();
    let mut out = q24 * sum;
    out.set_prec(prec);
    Ok(out)
}

/// Eisenstein series E4, E6 (q-expansions with constant term 1) via
/// Lambert series, truncated below 2^{−prec−GUARD}.
pub fn eisenstein_e4_e6(tau: &Complex, prec: u32) -> Result<(Complex, Complex)> {
    let wp = prec + GUARD;
    if !(tau.imag().is_sign_positive() && !tau.imag().is_zero()) {
        return Err(Error::domain(
            "eisenstein series: τ must lie in the upper half-plane",
        ));
    }
    let q = nome(tau, wp);
    let abs_q = cabs(&q);
    let log2_abs_q = Float::with_val(wp, abs_q.log2_ref()).to_f64();
    // n³|q|ⁿ, n⁵|q|ⁿ below threshold: n ≥ (wp+64)/(−log2|q|) plus slack.
    let nmax = (((wp + 64) as f64) / (-log2_abs_q)).ceil() as u64 + 16;
    let mut e4 = Complex::with_val(wp, (1, 0));
    let mut e6 = Complex::with_val(wp, (1, 0));
    let mut qn = Complex::with_val(wp, (1, 0));
    for n in 1..=nmax {
        qn = Complex::with_val(wp, &qn * &q);
        let denom = Complex::with_val(wp, 1 - &qn);
        let lam = Complex::with_val(wp, &qn / &denom);
        let n3 = (n * n * n) as i64;
        let n5 = n3 * (n * n) as i64;
        e4 += Complex::with_val(wp, &lam * &c_i64(wp, 240 * n3));
        e6 -= Complex::with_val(wp, &lam * &c_i64(wp, 504 * n5));
    }
    e4.set_prec(prec);
    e6.set_prec(prec);
    Ok((e4, e6))
}

/// Δ of a lattice: (2π)¹² η(τ′)²⁴ / ω₁′¹², with τ reduced first.
pub fn delta_of_lattice(lat: &Lattice, prec: u32) -> Result<Complex> {
    let wp = prec + GUARD;
    let tau = lat.tau();
    let (tred, (_a, _b, c, d)) = reduce_to_fundamental_domain(&tau)?;
    // effective first basis vector after the change of basis
    let w1p = Complex::with_val(
        wp,
        Complex::with_val(wp, &lat.omega2 * &Complex::with_val(wp, &c))
            + Complex::with_val(wp, &lat.omega1 * &Complex::with_val(wp, &d)),
    );
    let eta = dedekind_eta(&tred, wp)?;
    let two_pi = Complex::with_val(wp, (Float::with_val(wp, Constant::Pi) * 2u32, 0));
    let mut out = Complex::with_val(
        wp,
        two_pi.pow(12) * eta.pow(24) / w1p.pow(12),
    );
    out.set_prec(prec);
    Ok(out)
}

/// (c4, c6) of a lattice via Eisenstein series at the reduced τ.
pub fn lattice_c4_c6(lat: &Lattice, prec: u32) -> Result<(Complex, Complex)> {
    let wp = prec + GUARD;
    let tau = lat.tau();
    let (tred, (_a, _b, c, d)) = reduce_to_fundamental_domain(&tau)?;
    let w1p = Complex::with_val(
        wp,
        Complex::with_val(wp, &lat.omega2 * &Complex::with_val(wp, &c))
            + Complex::with_val(wp, &lat.omega1 * &Complex::with_val(wp, &d)),
    );
    let (e4, e6) = eisenstein_e4_e6(&tred, wp)?;
    let two_pi = Complex::with_val(wp, (Float::with_val(wp, Constant::Pi) * 2u32, 0));
    let fac = Complex::with_val(wp, &two_pi / &w1p);
    let mut c4 = Complex::with_val(wp, fac.clone().pow(4) * e4);
    let mut c6 = Complex::with_val(wp, fac.pow(6) * e6);
    c4.set_prec(prec);
    c6.set_prec(prec);
    Ok((c4, c6))
}

/// The lattice basis of an integral ideal under sqrt(-p) ↦ +i·sqrt(p):
/// (content·n, content·(b + ω)) with ω = (1 + i√p)/2.
pub fn ideal_lattice(ctx: &FieldContext, ideal: &Ideal, prec: u32) -> Lattice {
    let sp = Float::with_val(prec, ctx.p).sqrt();
    let omega = Complex::with_val(prec, (Float::with_val(prec, 0.5), sp / 2u32));
    let c = ideal.content;
    let w1 = Complex::with_val(prec, (c * ideal.n, 0));
    let w2 = Complex::with_val(
        prec,
        (omega + Float::with_val(prec, ideal.b)) * Float::with_val(prec, c),
    );
    Lattice::new(w1, w2).expect("ideal lattice has Im(τ) = c√p/(2n) > 0")
}

/// Δ(𝔞) of the ideal lattice.
pub fn delta_of_ideal(ctx: &FieldContext, ideal: &Ideal, prec: u32) -> Result<Complex> {
    delta_of_lattice(&ideal_lattice(ctx, ideal, prec), prec)
}

/// j-invariant of a lattice, computed along two independent routes
/// (Eisenstein ratio and eta) which must agree within tol(prec).
pub fn j_of_lattice(lat: &Lattice, prec: u32) -> Result<Complex> {
    let wp = prec + GUARD;
    let tau = lat.tau();
    let (tred, _) = reduce_to_fundamental_domain(&tau)?;
    let (e4, e6) = eisenstein_e4_e6(&tred, wp)?;
    let e4c = Complex::with_val(wp, e4.clone().pow(3));
    let denom = Complex::with_val(wp, &e4c - &Complex::with_val(wp, e6.pow(2)));
    let j1 = Complex::with_val(wp, 1728 * &e4c) / &denom;
    let eta = dedekind_eta(&tred, wp)?;
    let j2 = Complex::with_val(wp, &e4c / &Complex::with_val(wp, eta.pow(24)));
    if rel_err(&j1, &j2) > tol(prec) {
        return Err(Error::Resolution {
            prec,
            reason: format!(
                "j-invariant dual evaluations disagree by {:e}",
                rel_err(&j1, &j2).to_f64()
            ),
        });
    }
    let mut out = j1;
    out.set_prec(prec);
    Ok(out)
}

/// j-invariant of the lattice of an ideal (a class invariant).
pub fn j_of_ideal(ctx: &FieldContext, ideal: &Ideal, prec: u32) -> Result<Complex> {
    j_of_lattice(&ideal_lattice(ctx, ideal, prec), prec)
}

/// Γ(x) for positive rational x.
pub fn gamma_fn(x: &Rational, prec: u32) -> Result<Float> {
    if x.cmp0() != std::cmp::Ordering::Greater {
        return Err(Error::domain(format!(
            "gamma_fn: argument {} must be positive (poles at nonpositive integers)",
            x
        )));
    }
    let xf = Float::with_val(prec + GUARD, x);
    let mut g = xf.gamma();
    g.set_prec(prec);
    Ok(g)
}

/// Integer recognition with relative threshold 10⁻⁴⁰ (or caller-supplied).
pub fn recognize_integer(x: &Float, threshold: Option<&Float>) -> Option<Integer> {
    let prec = x.prec();
    let def = Float::with_val(prec, 1e-40);
    let thr = threshold.unwrap_or(&def);
    let rounded = x.clone().round();
    let resid = Float::with_val(prec, x - &rounded).abs();
    let scale = if x.clone().abs() > 1 {
        x.clone().abs()
    } else {
        Float::with_val(prec, 1)
    };
    if resid <= Float::with_val(prec, thr * &scale) {
        rounded.to_integer()
    } else {
        None
    }
}

/// Recognize a complex value as a quadratic integer a + bω of K
/// (ω = (1+i√p)/2): b = 2·Im/√p, a = Re − b/2, both nearly integral.
pub fn recognize_quadint(
    z: &Complex,
    p: u64,
    threshold: Option<&Float>,
) -> Option<crate::quadfield::QuadInt> {
    let prec = z.prec().0;
    let sp = Float::with_val(prec, p).sqrt();
    let bf = Float::with_val(prec, z.imag() * 2u32) / &sp;
    let b = recognize_integer(&bf, threshold)?;
    let af = Float::with_val(prec, z.real() - Float::with_val(prec, &bf / 2u32));
    let a = recognize_integer(&af, threshold)?;
    let (ai, bi) = (a.to_i64()?, b.to_i64()?);
    // verify the reconstruction
    let omega = Complex::with_val(prec, (Float::with_val(prec, 0.5), sp / 2u32));
    let rec = Complex::with_val(prec, omega * bi + ai);
    let def = Float::with_val(prec, 1e-40);
    let thr = threshold.unwrap_or(&def);
    let scale = {
        let a = cabs(z);
        if a > 1 {
            a
        } else {
            Float::with_val(prec, 1)
        }
    };
    if cabs(&Complex::with_val(prec, z - &rec)) <= Float::with_val(prec, thr * &scale) {
        Some(crate::quadfield::QuadInt::new(ai, bi))
    } else {
        None
    }
}

/// Complex AGM with the optimal-branch square root
/// (|a′ − b′| ≤ |a′ + b′| at every step).
pub fn complex_agm(a0: &Complex, b0: &Complex, prec: u32) -> Complex {
    let wp = prec + GUARD;
    let mut a = Complex::with_val(wp, a0);
    let mut b = Complex::with_val(wp, b0);
    let stop = Float::with_val(wp, 2).pow(-((prec + GUARD / 2) as i32));
    for _ in 0..10_000 {
        let diff = cabs(&Complex::with_val(wp, &a - &b));
        let scale = cabs(&a);
        if diff <= Float::with_val(wp, &stop * &scale) {
            break;
        }
        let am = Complex::with_val(wp, &a + &b) / 2u32;
        let mut gm = Complex::with_val(wp, &a * &b).sqrt();
        let d_minus = cabs(&Complex::with_val(wp, &am - &gm));
        let d_plus = cabs(&Complex::with_val(wp, &am + &gm));
        if d_minus > d_plus {
            gm = -gm;
        }
        a = am;
        b = gm;
    }
    a.set_prec(prec);
    a
}

/// Period lattice of the Weierstrass model with invariants (c4, c6), i.e.
/// the lattice L with c4(L) = c4 and c6(L) = c6, found by AGM candidates
/// and certified by the Eisenstein round-trip. Real (c4, c6) only.
pub fn agm_real_period(c4: &Float, c6: &Float, prec: u32) -> Result<Lattice> {
    let wp = prec + GUARD;
    let disc = Float::with_val(wp, c4.clone().pow(3) - c6.clone().pow(2)) / 1728u32;
    if disc.is_zero() {
        return Err(Error::domain(
            "agm_real_period: singular curve (c4³ = c6²)",
        ));
    }
    // ℘-form 4x³ − g2x − g3 with g2 = c4/12, g3 = c6/216.
    let g2 = Float::with_val(wp, c4 / 12u32);
    let g3 = Float::with_val(wp, c6 / 216u32);
    let f = |x: &Float| -> Float {
        Float::with_val(wp, 4 * x.clone().pow(3) - Float::with_val(wp, &g2 * x) - &g3)
    };
    // Bracket a real root and bisect.
    let mut hi = Float::with_val(wp, 1)
        + Float::with_val(wp, g2.clone().abs())
        + Float::with_val(wp, g3.clone().abs());
    let mut lo = -hi.clone();
    assert!(f(&lo).is_sign_negative() && f(&hi).is_sign_positive());
    for _ in 0..(2 * wp as usize + 64) {
        let mid = Float::with_val(wp, &lo + &hi) / 2u32;
        if f(&mid).is_sign_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let e1 = Float::with_val(wp, &lo + &hi) / 2u32;
    // Deflate: other roots solve x² + e1·x + (e1² − g2/4) = 0.
    let qq = Float::with_val(wp, e1.clone().pow(2) - Float::with_val(wp, &g2 / 4u32));
    let disc_q = Float::with_val(wp, e1.clone().pow(2) - 4 * qq.clone());
    let half = Float::with_val(wp, 0.5f64);
    let sqrt_disc = Complex::with_val(wp, (disc_q, 0)).sqrt();
    let e1c = Complex::with_val(wp, (&e1, 0));
    let e2 = Complex::with_val(
        wp,
        (Complex::with_val(wp, (-e1.clone(), 0)) + &sqrt_disc) * &Complex::with_val(wp, (&half, 0)),
    );
    let e3 = Complex::with_val(
        wp,
        (Complex::with_val(wp, (-e1.clone(), 0)) - &sqrt_disc) * &Complex::with_val(wp, (&half, 0)),
    );

    let pi = Float::with_val(wp, Constant::Pi);
    let sqrt_13 = Complex::with_val(wp, &e1c - &e3).sqrt();
    let sqrt_12 = Complex::with_val(wp, &e1c - &e2).sqrt();
    let sqrt_23 = Complex::with_val(wp, &e2 - &e3).sqrt();
    let mut cands: Vec<Complex> = Vec::new();
    for m in [
        complex_agm(&sqrt_13, &sqrt_12, wp),
        complex_agm(&sqrt_13, &sqrt_23, wp),
        complex_agm(&sqrt_12, &sqrt_23, wp),
    ] {
        if m.real().is_zero() && m.imag().is_zero() {
            continue;
        }
        let per = Complex::with_val(wp, Complex::with_val(wp, (&pi, 0)) / &m);
        let i_per = Complex::with_val(wp, &per * &Complex::with_val(wp, (0, 1)));
        cands.push(per.clone());
        cands.push(i_per.clone());
        cands.push(Complex::with_val(wp, &per * &Complex::with_val(wp, (2, 0))));
        cands.push(Complex::with_val(wp, &i_per * &Complex::with_val(wp, (2, 0))));
    }
    // Try all ordered candidate pairs with small integer shear corrections;
    // accept the basis whose Eisenstein invariants reproduce (c4, c6).
    let want4 = Complex::with_val(wp, (c4, 0));
    let want6 = Complex::with_val(wp, (c6, 0));
    let eps = tol(prec);
    for i in 0..cands.len() {
        for j in 0..cands.len() {
            if i == j {
                continue;
            }
            for k in -3i64..=3 {
                let w1 = cands[i].clone();
                let shear = Complex::with_val(wp, &w1 * &c_i64(wp, k));
                let w2 = Complex::with_val(wp, &cands[j] + &shear);
                let Ok(lat) = Lattice::new(w1, w2) else {
                    continue;
                };
                let Ok((got4, got6)) = lattice_c4_c6(&lat, prec) else {
                    continue;
                };
                if rel_err(&got4, &want4) < eps && rel_err(&got6, &want6) < eps {
                    return Ok(lat);
                }
            }
        }
    }
    Err(Error::Resolution {
        prec,
        reason: "agm_real_period: no AGM candidate basis reproduced (c4, c6)".into(),
    })
}
