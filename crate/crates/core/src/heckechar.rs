//! Ray class characters of conductor 𝔭 for K = Q(√−p) and their exact traces.
//!
//! For p ≡ 3 (mod 4), p > 3, write m = (p−1)/2 (an odd integer). The unit
//! group (O_K/𝔭)^* ≅ (Z/p)^* is cyclic of order p−1 = 2m, so for every
//! divisor d | m there is a single Galois orbit of characters η of exact
//! order 2d with η(−1) = −1; the orbit has φ(d) members. Each such η
//! extends the quadratic residue character (the d = 1 member) and defines a
//! Hecke character ψ((α)) = α·η(α) on principal ideals coprime to 𝔭 —
//! well-defined because η is odd. Together with the h class-group twists
//! this orbit cuts out an isogeny factor of dimension h·φ(d).
//!
//! Everything in this module is exact: values live in Q(ζ_{2d}) and traces
//! are computed both by Galois summation and by the Ramanujan-sum closed
//! form.

use rug::Rational;

use crate::cyclo::{euler_phi, moebius, CycloElem};
use crate::error::{Error, Result};
use crate::quadfield::{FieldContext, Ideal, QuadInt};

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A character η of (Z/p)^* of exact order 2d (d odd, d | (p−1)/2) with
/// η(−1) = −1, pinned down by its exponent against the fixed primitive
/// root g of the ambient [`FieldContext`]: η(a) = ζ_{p−1}^{t·ind_g(a)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaCharacter {
    /// The rational prime p (conductor is the ramified prime above it).
    pub p: u64,
    /// Half the exact order: ord(η) = 2d.
    pub d: u64,
    /// Exponent against g modulo p−1; odd, in [1, p−1).
    pub t: u64,
    /// Reduced exponent: η(a) = ζ_{2d}^{s·ind_g(a)} with gcd(s, 2d) = 1.
    pub s: u64,
}

impl EtaCharacter {
    /// Build the character with exponent t. Requires t odd in [1, p−1);
    /// oddness is exactly the condition η(−1) = −1 that makes the attached
    /// Hecke character well-defined on ideals.
    pub fn new(ctx: &FieldContext, t: u64) -> Result<Self> {
        let p = ctx.p;
        let m = (p - 1) / 2;
        if t == 0 || t >= p - 1 || t % 2 == 0 {
            return Err(Error::domain(format!(
                "character exponent t must be odd in [1, {}); got {}",
                p - 1,
                t
            )));
        }
        let d = m / gcd(t, m);
        let s = t / (m / d);
        debug_assert_eq!(gcd(s, 2 * d), 1);
        Ok(EtaCharacter { p, d, t, s })
    }

    /// Exact order of η as a character: 2d.
    pub fn order(&self) -> u64 {
        2 * self.d
    }

    /// η(a) for a rational residue a coprime to p, exact in Q(ζ_{2d}).
    pub fn value_at_residue(&self, ctx: &FieldContext, a: i64) -> Result<CycloElem> {
        if ctx.p != self.p {
            return Err(Error::context(format!(
                "character for p = {} evaluated in context p = {}",
                self.p, ctx.p
            )));
        }
        let r = a.rem_euclid(self.p as i64) as u64;
        if r == 0 {
            return Err(Error::domain(format!(
                "η is only defined on residues coprime to {}",
                self.p
            )));
        }
        let ind = ctx.ind[r as usize] as u64;
        let n = 2 * self.d;
        Ok(CycloElem::zeta_pow(n, ((self.s * ind) % n) as i64))
    }

    /// η(α) for α ∈ O_K coprime to 𝔭, via the residue map O_K → O_K/𝔭 ≅ F_p.
    /// Because 𝔭 is ramified, conjugate elements have equal residues, so
    /// η(ᾱ) = η(α).
    pub fn value_at_quadint(&self, ctx: &FieldContext, x: &QuadInt) -> Result<CycloElem> {
        let r = ctx.residue_mod_ramified(x);
        if r == 0 {
            return Err(Error::domain(
                "η undefined: element lies in the ramified prime".to_string(),
            ));
        }
        self.value_at_residue(ctx, r as i64)
    }
}

/// The Galois orbit of characters of exact order 2d, in ascending exponent
/// order. Errors unless d divides (p−1)/2.
pub fn orbit_for_order(ctx: &FieldContext, d: u64) -> Result<Vec<EtaCharacter>> {
    let m = (ctx.p - 1) / 2;
    if d == 0 || m % d != 0 {
        return Err(Error::domain(format!(
            "order parameter d = {} must divide (p-1)/2 = {}",
            d, m
        )));
    }
    let step = m / d;
    let mut orbit = Vec::new();
    let mut u = 1;
    while u < 2 * d {
        if gcd(u, d) == 1 {
            orbit.push(EtaCharacter::new(ctx, step * u)?);
        }
        u += 2;
    }
    Ok(orbit)
}

/// All orbits, one per divisor d of (p−1)/2, ascending in d; each orbit in
/// ascending exponent order, so `orbits[i][0]` is the canonical member.
pub fn enumerate_characters(ctx: &FieldContext) -> Vec<Vec<EtaCharacter>> {
    let m = (ctx.p - 1) / 2;
    (1..=m)
        .filter(|d| m % d == 0)
        .map(|d| orbit_for_order(ctx, d).expect("divisor of (p-1)/2"))
        .collect()
}

/// The canonical (smallest-exponent) character of exact order 2d.
pub fn canonical_character(ctx: &FieldContext, d: u64) -> Result<EtaCharacter> {
    Ok(orbit_for_order(ctx, d)?.remove(0))
}

/// Ramanujan sum c_n(k) = Σ_{j ∈ (Z/n)^*} ζ_n^{jk}, by the closed form
/// c_n(k) = μ(n/g)·φ(n)/φ(n/g) with g = gcd(n, k).
pub fn ramanujan_sum(n: u64, k: i64) -> i64 {
    let kr = k.rem_euclid(n as i64) as u64;
    let g = if kr == 0 { n } else { gcd(n, kr) };
    let nq = n / g;
    let mu = moebius(nq);
    if mu == 0 {
        return 0;
    }
    mu * (euler_phi(n) / euler_phi(nq)) as i64
}

/// Tr_{Q(ζ_n)/Q} of an exact cyclotomic element, by Galois summation.
pub fn trace_to_q(x: &CycloElem) -> Result<Rational> {
    let mut acc = CycloElem::zero(x.n);
    for j in 1..=x.n {
        if gcd(j, x.n) == 1 {
            acc = acc.add(&x.galois_apply(j as i64)?);
        }
    }
    acc.as_rational()
        .ok_or_else(|| Error::domain("Galois-stable sum failed to be rational".to_string()))
}

/// ψ((α)) = α·η(α) on a principal ideal coprime to 𝔭, presented exactly as
/// the pair (α₊, η(α₊)) where α₊ is the normalized generator (quadratic
/// residue class +1 mod p). The product is generator-independent because η
/// is odd.
pub fn psi_on_principal(
    ctx: &FieldContext,
    eta: &EtaCharacter,
    ideal: &Ideal,
) -> Result<(QuadInt, CycloElem)> {
    if ideal.norm() % ctx.p as i128 == 0 {
        return Err(Error::domain(
            "ψ is supported on ideals coprime to the ramified prime".to_string(),
        ));
    }
    let alpha = ctx.is_principal(ideal).ok_or_else(|| {
        Error::domain("ψ on a non-principal ideal requires a cocycle extension".to_string())
    })?;
    let v = eta.value_at_quadint(ctx, &alpha)?;
    Ok((alpha, v))
}

/// Full trace Σ ψ′(𝔞) over the h·φ(d) characters ψ′ = χ·ψ_u obtained from
/// one orbit of order-2d characters and all h class-group twists χ.
///
/// Character orthogonality collapses the sum exactly: it vanishes unless 𝔞
/// is principal, and for 𝔞 = (α) it equals h·α·c_{2d}(ind_g(α mod 𝔭)).
/// Ideals not coprime to 𝔭 are outside the conductor and contribute 0.
pub fn trace_psi(ctx: &FieldContext, d: u64, ideal: &Ideal) -> Result<QuadInt> {
    let m = (ctx.p - 1) / 2;
    if d == 0 || m % d != 0 {
        return Err(Error::domain(format!(
            "order parameter d = {} must divide (p-1)/2 = {}",
            d, m
        )));
    }
    if ideal.norm() % ctx.p as i128 == 0 {
        return Ok(QuadInt::ZERO);
    }
    if ctx.class_of(ideal) != ctx.identity {
        return Ok(QuadInt::ZERO);
    }
    let alpha = ctx
        .is_principal(ideal)
        .expect("ideal in the identity class must have a generator");
    let r = ctx.residue_mod_ramified(&alpha);
    debug_assert_ne!(r, 0);
    let ind = ctx.ind[r as usize] as i64;
    let c = ramanujan_sum(2 * d, ind);
    let scale = ctx.h as i64 * c;
    Ok(QuadInt::new(alpha.a * scale, alpha.b * scale))
}

/// The nebentypus ε(n) = (n/p)·η(n) restricted to rational residues. It has
/// exact order d and takes values in Q(ζ_d); residues divisible by p map
/// to 0 (the modulus of the character).
pub fn epsilon_value(ctx: &FieldContext, eta: &EtaCharacter, nval: i64) -> Result<CycloElem> {
    if ctx.p != eta.p {
        return Err(Error::context(format!(
            "character for p = {} evaluated in context p = {}",
            eta.p, ctx.p
        )));
    }
    let d = eta.d;
    let r = nval.rem_euclid(ctx.p as i64) as u64;
    if r == 0 {
        return Ok(CycloElem::zero(d));
    }
    let ind = ctx.ind[r as usize] as u64;
    // (n/p)·η(n) = (−1)^{ind}·ζ_{2d}^{s·ind} = ζ_{2d}^{(s+d)·ind} = ζ_d^{((s+d)/2)·ind}.
    let e = ((eta.s + d) / 2 * ind) % d;
    Ok(CycloElem::zeta_pow(d, e as i64))
}

/// Dimension h·φ(d) of the isogeny factor attached to the orbit of order-2d
/// characters.
pub fn dimension_for_order(ctx: &FieldContext, d: u64) -> Result<u64> {
    let m = (ctx.p - 1) / 2;
    if d == 0 || m % d != 0 {
        return Err(Error::domain(format!(
            "order parameter d = {} must divide (p-1)/2 = {}",
            d, m
        )));
    }
    Ok(ctx.h as u64 * euler_phi(d))
}

/// Bookkeeping summary across all orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingData {
    /// Degree of the full ray class field of conductor 𝔭 over the Hilbert
    /// class field: (p−1)/2.
    pub ray_index: u64,
    /// Number of character orbits = number of divisors of (p−1)/2.
    pub orbit_count: usize,
    /// Σ over orbits of h·φ(d); always equals h·(p−1)/2.
    pub total_dimension: u64,
}

/// Enumerate all orbits and aggregate the degree/dimension bookkeeping.
pub fn splitting_field_data(ctx: &FieldContext) -> SplittingData {
    let m = (ctx.p - 1) / 2;
    let orbits = enumerate_characters(ctx);
    let total: u64 = orbits
        .iter()
        .map(|o| ctx.h as u64 * euler_phi(o[0].d))
        .sum();
    SplittingData {
        ray_index: m,
        orbit_count: orbits.len(),
        total_dimension: total,
    }
}
