//! Exact arithmetic in cyclotomic fields Q(ζ_n): power-basis elements
//! reduced modulo the cyclotomic polynomial Φ_n, Galois actions, complex
//! embeddings, and the operator Θ on the group algebra Q[X]/(X^k − 1)
//! attached to a cyclic Galois action of order k.

use crate::error::{Error, Result};
use rug::float::Constant;
use rug::{Complex, Float, Rational};
use std::collections::BTreeSet;
use std::fmt;

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut result = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            result -= result / d;
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Moebius function.
pub fn moebius(n: u64) -> i64 {
    let mut m = n;
    let mut k = 0;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return 0;
            }
            k += 1;
        }
        d += 1;
    }
    if m > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Multiplicative order of e mod n, or None when gcd(e, n) ≠ 1.
pub fn multiplicative_order(e: u64, n: u64) -> Option<u64> {
    let e = e % n;
    if n == 1 {
        return Some(1);
    }
    if gcd_u64(e, n) != 1 {
        return None;
    }
    let mut x = e;
    let mut k = 1u64;
    while x != 1 {
        x = (x as u128 * e as u128 % n as u128) as u64;
        k += 1;
        debug_assert!(k <= n);
    }
    Some(k)
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// ----- rational polynomial helpers (ascending coefficients, trimmed) -----

fn rat(v: i64) -> Rational {
    Rational::from(v)
}

fn poly_trim(v: &mut Vec<Rational>) {
    while v.last().map_or(false, |c| c.cmp0() == std::cmp::Ordering::Equal) {
        v.pop();
    }
}

fn poly_is_zero(v: &[Rational]) -> bool {
    v.iter().all(|c| c.cmp0() == std::cmp::Ordering::Equal)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::new(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.cmp0() == std::cmp::Ordering::Equal {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += Rational::from(ca * cb);
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of a mod b (b nonzero), over Q.
fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r: Vec<Rational> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db {
        let dr = r.len() - 1;
        let f = Rational::from(&r[dr] / lead);
        for i in 0..=db {
            let t = Rational::from(&b[i] * &f);
            r[dr - db + i] -= t;
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Exact quotient a / b; panics when the division is not exact.
fn poly_divexact(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r: Vec<Rational> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead = &b[db];
    if r.is_empty() {
        return Vec::new();
    }
    assert!(r.len() > db || r.len() == db + 1 || db == 0 || !r.is_empty());
    let mut qcoeffs = vec![Rational::new(); r.len().saturating_sub(db)];
    while r.len() > db {
        let dr = r.len() - 1;
        let f = Rational::from(&r[dr] / lead);
        qcoeffs[dr - db] = f.clone();
        for i in 0..=db {
            let t = Rational::from(&b[i] * &f);
            r[dr - db + i] -= t;
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    assert!(poly_is_zero(&r), "polynomial division is not exact");
    poly_trim(&mut qcoeffs);
    qcoeffs
}

/// Monic gcd over Q[X].
fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x: Vec<Rational> = a.to_vec();
    let mut y: Vec<Rational> = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        for c in &mut x {
            *c /= &lead;
        }
    }
    x
}

/// Extended Euclid over Q[X]: returns (g, s, t) monic g with s·a + t·b = g.
fn poly_ext_gcd(
    a: &[Rational],
    b: &[Rational],
) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let mut r0: Vec<Rational> = a.to_vec();
    let mut r1: Vec<Rational> = b.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let mut s0 = vec![rat(1)];
    let mut s1: Vec<Rational> = Vec::new();
    let mut t0: Vec<Rational> = Vec::new();
    let mut t1 = vec![rat(1)];
    while !r1.is_empty() {
        // quotient of r0 by r1
        let mut q = vec![Rational::new(); r0.len().saturating_sub(r1.len() - 1).max(0)];
        let mut rem = r0.clone();
        let db = r1.len() - 1;
        let lead = r1[db].clone();
        while rem.len() > db {
            let dr = rem.len() - 1;
            let f = Rational::from(&rem[dr] / &lead);
            q[dr - db] = f.clone();
            for i in 0..=db {
                let t = Rational::from(&r1[i] * &f);
                rem[dr - db + i] -= t;
            }
            poly_trim(&mut rem);
            if rem.is_empty() {
                break;
            }
        }
        poly_trim(&mut q);
        let qs = poly_mul(&q, &s1);
        let qt = poly_mul(&q, &t1);
        let new_s = poly_sub(&s0, &qs);
        let new_t = poly_sub(&t0, &qt);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = new_s;
        t0 = t1;
        t1 = new_t;
    }
    // normalize monic
    if let Some(lead) = r0.last().cloned() {
        for c in r0.iter_mut().chain(s0.iter_mut()).chain(t0.iter_mut()) {
            *c /= &lead;
        }
    }
    (r0, s0, t0)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::new(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    poly_trim(&mut out);
    out
}

/// The k-th cyclotomic polynomial Φ_k, ascending integer coefficients
/// (returned as rationals), computed by exact division of X^k − 1 by all
/// Φ_d for proper divisors d | k.
pub fn cyclotomic_poly(k: u64) -> Vec<Rational> {
    assert!(k >= 1);
    let mut table: Vec<Option<Vec<Rational>>> = vec![None; (k + 1) as usize];
    for m in 1..=k {
        if k % m != 0 {
            continue;
        }
        // X^m − 1
        let mut num = vec![Rational::new(); (m + 1) as usize];
        num[0] = rat(-1);
        num[m as usize] = rat(1);
        let mut acc = num;
        for d in 1..m {
            if m % d == 0 {
                let phi_d = table[d as usize].as_ref().expect("computed in order");
                acc = poly_divexact(&acc, phi_d);
            }
        }
        table[m as usize] = Some(acc);
    }
    table[k as usize].take().expect("k | k")
}

/// An element of Q(ζ_n) in the power basis 1, ζ, …, ζ^{φ(n)−1}
/// (coefficients reduced modulo Φ_n, so equality is coefficientwise).
#[derive(Clone, PartialEq, Eq)]
pub struct CycloElem {
    pub n: u64,
    pub coeffs: Vec<Rational>,
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo(n={}; ", self.n)?;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}·z^{}", c, i)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl CycloElem {
    pub fn zero(n: u64) -> Self {
        CycloElem {
            n,
            coeffs: vec![Rational::new(); euler_phi(n) as usize],
        }
    }

    pub fn one(n: u64) -> Self {
        Self::from_rational(n, rat(1))
    }

    pub fn from_rational(n: u64, r: Rational) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[0] = r;
        e
    }

    pub fn from_i64(n: u64, v: i64) -> Self {
        Self::from_rational(n, rat(v))
    }

    /// ζ_n^k, reduced into the power basis.
    pub fn zeta_pow(n: u64, k: i64) -> Self {
        let kk = k.rem_euclid(n as i64) as usize;
        let mut full = vec![Rational::new(); n as usize];
        full[kk] = rat(1);
        Self::reduce_full(n, full)
    }

    /// Reduce a coefficient vector on exponents 0..len−1 (folded mod n,
    /// then mod Φ_n) into the power basis.
    fn reduce_full(n: u64, full: Vec<Rational>) -> Self {
        let mut folded = vec![Rational::new(); n as usize];
        for (e, c) in full.into_iter().enumerate() {
            folded[e % n as usize] += c;
        }
        let phi_n = cyclotomic_poly(n);
        let mut rem = poly_rem(&folded, &phi_n);
        let deg = euler_phi(n) as usize;
        rem.resize(deg, Rational::new());
        CycloElem { n, coeffs: rem }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.cmp0() == std::cmp::Ordering::Equal)
    }

    /// Some(r) when the element is the rational number r.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..]
            .iter()
            .all(|c| c.cmp0() == std::cmp::Ordering::Equal)
        {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check_same(&self, o: &CycloElem) {
        assert_eq!(
            self.n, o.n,
            "cyclotomic moduli must agree ({} vs {})",
            self.n, o.n
        );
    }

    pub fn add(&self, o: &CycloElem) -> CycloElem {
        self.check_same(o);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| Rational::from(a + b))
            .collect();
        CycloElem { n: self.n, coeffs }
    }

    pub fn sub(&self, o: &CycloElem) -> CycloElem {
        self.check_same(o);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| Rational::from(a - b))
            .collect();
        CycloElem { n: self.n, coeffs }
    }

    pub fn neg(&self) -> CycloElem {
        CycloElem {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(),
        }
    }

    pub fn mul(&self, o: &CycloElem) -> CycloElem {
        self.check_same(o);
        let prod = poly_mul(&self.coeffs, &o.coeffs);
        Self::reduce_full(self.n, prod)
    }

    pub fn scale(&self, r: &Rational) -> CycloElem {
        CycloElem {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| Rational::from(c * r)).collect(),
        }
    }

    pub fn pow(&self, e: u64) -> CycloElem {
        let mut acc = CycloElem::one(self.n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<CycloElem> {
        if self.is_zero() {
            return Err(Error::domain("inverse of zero in Q(ζ_n)"));
        }
        let phi_n = cyclotomic_poly(self.n);
        let mut a = self.coeffs.clone();
        poly_trim(&mut a);
        let (g, s, _t) = poly_ext_gcd(&a, &phi_n);
        assert_eq!(g.len(), 1, "Φ_n is irreducible so the gcd is a constant");
        let ginv = Rational::from(g[0].clone().recip_ref());
        let mut inv_coeffs = poly_rem(&s, &phi_n);
        for c in &mut inv_coeffs {
            *c *= &ginv;
        }
        inv_coeffs.resize(euler_phi(self.n) as usize, Rational::new());
        Ok(CycloElem {
            n: self.n,
            coeffs: inv_coeffs,
        })
    }

    pub fn div(&self, o: &CycloElem) -> Result<CycloElem> {
        Ok(self.mul(&o.inv()?))
    }

    /// Galois action ζ ↦ ζ^j for gcd(j, n) = 1; ring homomorphism.
    pub fn galois_apply(&self, j: i64) -> Result<CycloElem> {
        let jj = j.rem_euclid(self.n as i64) as u64;
        if gcd_u64(jj, self.n) != 1 {
            return Err(Error::domain(format!(
                "galois exponent {} is not coprime to the modulus {}",
                j, self.n
            )));
        }
        let mut full = vec![Rational::new(); self.n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = (i as u128 * jj as u128 % self.n as u128) as usize;
            full[e] += c;
        }
        Ok(Self::reduce_full(self.n, full))
    }

    /// Complex conjugation ζ ↦ ζ^{−1}.
    pub fn conj(&self) -> CycloElem {
        self.galois_apply(self.n as i64 - 1)
            .expect("n−1 is coprime to n")
    }

    /// Inclusion Q(ζ_n) ⊆ Q(ζ_m) for n | m, sending ζ_n ↦ ζ_m^{m/n}.
    pub fn lift_to(&self, m: u64) -> Result<CycloElem> {
        if m % self.n != 0 {
            return Err(Error::domain(format!(
                "no inclusion Q(ζ_{}) ⊆ Q(ζ_{}): modulus must divide",
                self.n, m
            )));
        }
        let step = (m / self.n) as usize;
        let mut full = vec![Rational::new(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            full[(i * step) % m as usize] += c;
        }
        Ok(Self::reduce_full(m, full))
    }

    /// Numerical embedding at ζ_n = e^{2πi/n}.
    pub fn embed(&self, prec: u32) -> Complex {
        let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
        let mut acc = Complex::with_val(prec, (0, 0));
        let theta0 = two_pi / self.n as u32;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            let ang = Float::with_val(prec, &theta0) * i as u32;
            let z = Complex::with_val(prec, (ang.clone().cos(), ang.sin()));
            acc += z * Float::with_val(prec, c);
        }
        acc
    }
}

/// An element Σ a_i X^i of the group algebra F[X]/(X^k − 1) over F = Q.
/// Coefficients are stored by exponent residue (index r ↦ X^r, with
/// X^0 = X^k the identity of the algebra).
#[derive(Clone, PartialEq, Eq)]
pub struct GroupAlgebraElem {
    pub k: usize,
    pub coeffs: Vec<Rational>,
}

impl fmt::Debug for GroupAlgebraElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupAlg(k={}; {:?})", self.k, self.coeffs)
    }
}

impl GroupAlgebraElem {
    pub fn zero(k: usize) -> Self {
        GroupAlgebraElem {
            k,
            coeffs: vec![Rational::new(); k],
        }
    }

    /// The identity X^k (= X^0).
    pub fn identity(k: usize) -> Self {
        let mut e = Self::zero(k);
        e.coeffs[0] = rat(1);
        e
    }

    /// The generator X.
    pub fn x(k: usize) -> Self {
        let mut e = Self::zero(k);
        e.coeffs[1 % k] = rat(1);
        e
    }

    /// X^j for any integer j.
    pub fn x_pow(k: usize, j: i64) -> Self {
        let mut e = Self::zero(k);
        e.coeffs[j.rem_euclid(k as i64) as usize] = rat(1);
        e
    }

    /// Build from coefficients a_1..a_k of X¹..X^k.
    pub fn from_power_coeffs(k: usize, a: &[Rational]) -> Self {
        assert_eq!(a.len(), k);
        let mut e = Self::zero(k);
        for (i, c) in a.iter().enumerate() {
            e.coeffs[(i + 1) % k] += c;
        }
        e
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.k, o.k);
        GroupAlgebraElem {
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| Rational::from(a + b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.k, o.k);
        GroupAlgebraElem {
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| Rational::from(a - b))
                .collect(),
        }
    }

    /// Cyclic-convolution product.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.k, o.k);
        let k = self.k;
        let mut out = Self::zero(k);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out.coeffs[(i + j) % k] += Rational::from(a * b);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.cmp0() == std::cmp::Ordering::Equal)
    }

    /// The polynomial P(ζ_k^i) evaluated exactly in Q(ζ_k).
    pub fn eval_at_root(&self, i: i64) -> CycloElem {
        let k = self.k as u64;
        let mut acc = CycloElem::zero(k);
        for (r, c) in self.coeffs.iter().enumerate() {
            if c.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            let term = CycloElem::zeta_pow(k, (r as i64) * i).scale(c);
            acc = acc.add(&term);
        }
        acc
    }

    /// Coefficients as a Q[X]-polynomial of degree < k (ascending).
    pub fn as_poly(&self) -> Vec<Rational> {
        let mut v = self.coeffs.clone();
        poly_trim(&mut v);
        v
    }

    /// The k×k matrix of multiplication by this element on Q[X]/(X^k−1)
    /// in the basis X^0..X^{k−1}: column j holds the image of X^j.
    pub fn circulant_matrix(&self) -> Vec<Vec<Rational>> {
        let k = self.k;
        let mut m = vec![vec![Rational::new(); k]; k];
        for j in 0..k {
            for (r, c) in self.coeffs.iter().enumerate() {
                m[(r + j) % k][j] += c;
            }
        }
        m
    }
}

/// Θ(poly)(u) = Σ a_r τ^r(u) for the order-k Galois action τ: ζ_n ↦ ζ_n^e
/// on M = Q(ζ_n). Errors when the order of e mod n is not exactly k.
pub fn theta_apply(poly: &GroupAlgebraElem, n: u64, e: u64, u: &CycloElem) -> Result<CycloElem> {
    if u.n != n {
        return Err(Error::context(format!(
            "theta_apply: element modulus {} differs from ambient modulus {}",
            u.n, n
        )));
    }
    let ord = multiplicative_order(e, n).ok_or_else(|| {
        Error::domain(format!("galois exponent {} not invertible mod {}", e, n))
    })?;
    if ord != poly.k as u64 {
        return Err(Error::domain(format!(
            "theta_apply: action of ζ ↦ ζ^{} mod {} has order {}, polynomial lives in degree {}",
            e, n, ord, poly.k
        )));
    }
    let mut acc = CycloElem::zero(n);
    let mut exp = 1u64; // e^r mod n
    for r in 0..poly.k {
        let c = &poly.coeffs[r];
        if c.cmp0() != std::cmp::Ordering::Equal {
            let tu = u.galois_apply(exp as i64)?;
            acc = acc.add(&tu.scale(c));
        }
        exp = (exp as u128 * e as u128 % n as u128) as u64;
    }
    Ok(acc)
}

/// Characteristic polynomial of multiplication by `poly` on Q[X]/(X^k−1),
/// in the convention (−1)^k ∏_{i}(X − P(ζ_k^i)) (ascending rational
/// coefficients), together with the kernel dimension
/// #{i : P(ζ_k^i) = 0}. Both are computed exactly: the polynomial via
/// Faddeev–LeVerrier on the circulant matrix, the kernel via its rank.
pub fn theta_char_poly(poly: &GroupAlgebraElem) -> (Vec<Rational>, usize) {
    let k = poly.k;
    let m = poly.circulant_matrix();
    // Faddeev–LeVerrier: char(X) = det(XI − M) = X^k + c_{k−1}X^{k−1} + …
    let mut coeffs = vec![Rational::new(); k + 1];
    coeffs[k] = rat(1);
    let mut n_mat: Vec<Vec<Rational>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { rat(1) } else { Rational::new() })
                .collect()
        })
        .collect();
    for i in 1..=k {
        // n_mat ← M·n_mat
        let mut prod = vec![vec![Rational::new(); k]; k];
        for r in 0..k {
            for c in 0..k {
                let mut s = Rational::new();
                for t in 0..k {
                    if m[r][t].cmp0() != std::cmp::Ordering::Equal {
                        s += Rational::from(&m[r][t] * &n_mat[t][c]);
                    }
                }
                prod[r][c] = s;
            }
        }
        n_mat = prod;
        let mut tr = Rational::new();
        for r in 0..k {
            tr += &n_mat[r][r];
        }
        let c = -tr / Rational::from(i as u32);
        coeffs[k - i] = c.clone();
        for r in 0..k {
            n_mat[r][r] += &c;
        }
    }
    if k % 2 == 1 {
        for c in &mut coeffs {
            *c = Rational::from(-(&*c));
        }
    }
    // Kernel dimension = k − rank(M) over Q.
    let rank = matrix_rank(poly.circulant_matrix());
    (coeffs, k - rank)
}

/// Exact rank over Q by Gaussian elimination.
pub fn matrix_rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(piv) = (row..rows).find(|&r| m[r][col].cmp0() != std::cmp::Ordering::Equal)
        else {
            continue;
        };
        m.swap(row, piv);
        let inv = Rational::from(m[row][col].clone().recip_ref());
        for c in col..cols {
            m[row][c] *= &inv;
        }
        for r in 0..rows {
            if r != row && m[r][col].cmp0() != std::cmp::Ordering::Equal {
                let f = m[r][col].clone();
                for c in col..cols {
                    let t = Rational::from(&m[row][c] * &f);
                    m[r][c] -= t;
                }
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Kernel/image description of G = Θ(poly): the zero set
/// Z = {i : P(ζ_k^i) = 0} (computed exactly via gcd(P, X^k−1) over Q[X]),
/// and the quotient polynomial Q = (X^k−1)/∏_{ζ∈Z}(X−ζ) whose Θ-image is
/// exactly ker G. The identity Q·P ≡ 0 mod (X^k−1) is verified exactly
/// before returning.
pub struct KernelImage {
    /// Quotient polynomial as a group-algebra element (Θ-image = ker G).
    pub quotient: GroupAlgebraElem,
    /// Exponents i ∈ {0..k−1} with P(ζ_k^i) = 0.
    pub zero_exponents: BTreeSet<usize>,
    /// dim ker G = |zero_exponents|.
    pub kernel_dim: usize,
    /// dim im G = k − kernel_dim.
    pub image_dim: usize,
}

pub fn theta_kernel_image(poly: &GroupAlgebraElem) -> Result<KernelImage> {
    let k = poly.k;
    let p_poly = poly.as_poly();
    // X^k − 1
    let mut modulus = vec![Rational::new(); k + 1];
    modulus[0] = rat(-1);
    modulus[k] = rat(1);

    let d = if poly_is_zero(&p_poly) {
        modulus.clone()
    } else {
        poly_gcd(&p_poly, &modulus)
    };
    // zero exponents: evaluate the gcd at each k-th root of unity, exactly
    let mut zeros = BTreeSet::new();
    for i in 0..k {
        let mut acc = CycloElem::zero(k as u64);
        for (r, c) in d.iter().enumerate() {
            if c.cmp0() != std::cmp::Ordering::Equal {
                acc = acc.add(&CycloElem::zeta_pow(k as u64, (r * i) as i64).scale(c));
            }
        }
        if acc.is_zero() {
            zeros.insert(i);
        }
    }
    debug_assert_eq!(zeros.len(), d.len().saturating_sub(1), "X^k−1 is squarefree");

    let quotient_poly = poly_divexact(&modulus, &d);
    // exact verification: Q·P ≡ 0 (mod X^k−1), i.e. Θ(Q)'s image ⊆ ker G.
    let mut q_elem = GroupAlgebraElem::zero(k);
    for (r, c) in quotient_poly.iter().enumerate() {
        q_elem.coeffs[r % k] += c;
    }
    let prod = q_elem.mul(poly);
    if !prod.is_zero() {
        return Err(Error::domain(
            "kernel quotient verification failed: Q·P ≢ 0 in the group algebra",
        ));
    }
    let kernel_dim = zeros.len();
    Ok(KernelImage {
        quotient: q_elem,
        kernel_dim,
        image_dim: k - kernel_dim,
        zero_exponents: zeros,
    })
}

/// Quotient polynomial (X^k−1)/∏_{i∈Z}(X−ζ_k^i) for an explicitly given
/// zero set of exponents, which must be stable under i ↦ t·i for every t
/// coprime to k (so the product has rational coefficients). The stable
/// closure condition fails ⇒ error.
pub fn quotient_for_zero_set(k: usize, zeros: &BTreeSet<usize>) -> Result<GroupAlgebraElem> {
    for &i in zeros {
        if i >= k {
            return Err(Error::domain(format!(
                "zero exponent {} out of range for k = {}",
                i, k
            )));
        }
        for t in 1..k {
            if gcd_u64(t as u64, k as u64) == 1 && !zeros.contains(&((i * t) % k)) {
                return Err(Error::domain(format!(
                    "zero set is not Galois-stable over Q: contains {} but not {}·{} mod {}",
                    i, t, i, k
                )));
            }
        }
    }
    // ∏_{i∈Z}(X − ζ_k^i) computed exactly in Q(ζ_k)[X]; coefficients are
    // Galois-invariant, hence rational.
    let kk = k as u64;
    let mut prod: Vec<CycloElem> = vec![CycloElem::one(kk)];
    for &i in zeros {
        let root = CycloElem::zeta_pow(kk, i as i64);
        let mut next = vec![CycloElem::zero(kk); prod.len() + 1];
        for (r, c) in prod.iter().enumerate() {
            next[r + 1] = next[r + 1].add(c);
            next[r] = next[r].sub(&c.mul(&root));
        }
        prod = next;
    }
    let mut d: Vec<Rational> = Vec::with_capacity(prod.len());
    for c in prod {
        let r = c.as_rational().ok_or_else(|| {
            Error::domain("stable zero set must yield rational divisor coefficients")
        })?;
        d.push(r);
    }
    let mut modulus = vec![Rational::new(); k + 1];
    modulus[0] = rat(-1);
    modulus[k] = rat(1);
    let q = poly_divexact(&modulus, &d);
    let mut out = GroupAlgebraElem::zero(k);
    for (r, c) in q.iter().enumerate() {
        out.coeffs[r % k] += c;
    }
    Ok(out)
}

/// (X^k − 1)/Φ_k as a group-algebra element (the canonical modularizing
/// polynomial for a full-order action).
pub fn full_order_quotient(k: usize) -> GroupAlgebraElem {
    let mut modulus = vec![Rational::new(); k + 1];
    modulus[0] = rat(-1);
    modulus[k] = rat(1);
    let phi = cyclotomic_poly(k as u64);
    let q = poly_divexact(&modulus, &phi);
    let mut out = GroupAlgebraElem::zero(k);
    for (r, c) in q.iter().enumerate() {
        out.coeffs[r % k] += c;
    }
    out
}
