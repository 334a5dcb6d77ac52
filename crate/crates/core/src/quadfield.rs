//! Exact arithmetic in the imaginary quadratic field K = Q(sqrt(-p)).
//!
//! Throughout, p is a prime with p > 3 and p ≡ 3 (mod 4), so the maximal
//! order is O_K = Z[ω] with ω = (1+sqrt(-p))/2, ω² = ω − q, q = (p+1)/4.
//! The discriminant of K is −p and the class number h is odd.
//!
//! Ideals are kept in two-element Hermite normal form
//! `content · (nZ + (b+ω)Z)` with `0 ≤ b < n` and `n | b² + b + q`,
//! which makes equality testing canonical.

use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Deterministic Miller–Rabin primality test, exact for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &sp in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Modular exponentiation `a^e mod m`.
pub fn pow_mod(a: u64, mut e: u64, m: u64) -> u64 {
    let mut base = a % m;
    let mut acc = 1u64 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Legendre symbol (a/p) for an odd prime p; returns −1, 0, +1.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    let e = pow_mod(r, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        -1
    }
}

/// Integer square root test: returns `Some(s)` with `s² = n` when n is a
/// perfect square.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut s = (n as f64).sqrt() as i128;
    while s > 0 && s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    if s * s == n {
        Some(s)
    } else {
        None
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd: returns (g, u, v) with u·a + v·b = g ≥ 0.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            return (-a, -1, 0);
        }
        return (a, 1, 0);
    }
    let (g, u, v) = ext_gcd(b, a.rem_euclid(b));
    (g, v, u - (a.div_euclid(b)) * v)
}

/// An element a + b·ω of O_K (or of K when used as a numerator over a
/// rational denominator), with ω = (1 + sqrt(-p))/2.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub a: i64,
    pub b: i64,
}

impl QuadInt {
    pub const ZERO: QuadInt = QuadInt { a: 0, b: 0 };
    pub const ONE: QuadInt = QuadInt { a: 1, b: 0 };

    pub fn new(a: i64, b: i64) -> Self {
        QuadInt { a, b }
    }

    /// The element sqrt(-p) = 2ω − 1.
    pub fn sqrt_minus_p() -> Self {
        QuadInt { a: -1, b: 2 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Complex conjugate: conj(a + bω) = (a+b) − bω.
    pub fn conj(&self) -> Self {
        QuadInt {
            a: self.a + self.b,
            b: -self.b,
        }
    }

    pub fn neg(&self) -> Self {
        QuadInt {
            a: -self.a,
            b: -self.b,
        }
    }

    pub fn add(&self, o: &QuadInt) -> Self {
        QuadInt {
            a: self.a + o.a,
            b: self.b + o.b,
        }
    }

    pub fn sub(&self, o: &QuadInt) -> Self {
        QuadInt {
            a: self.a - o.a,
            b: self.b - o.b,
        }
    }

    /// Product in O_K: (a+bω)(c+dω) = (ac − bd·q) + (ad + bc + bd)ω.
    pub fn mul(&self, o: &QuadInt, q: i64) -> Self {
        let (a, b, c, d) = (
            self.a as i128,
            self.b as i128,
            o.a as i128,
            o.b as i128,
        );
        let x = a * c - b * d * q as i128;
        let y = a * d + b * c + b * d;
        QuadInt {
            a: i64::try_from(x).expect("quadratic integer overflow"),
            b: i64::try_from(y).expect("quadratic integer overflow"),
        }
    }

    /// Norm N(a + bω) = a² + ab + b²·q ≥ 0.
    pub fn norm(&self, q: i64) -> i128 {
        let (a, b) = (self.a as i128, self.b as i128);
        a * a + a * b + b * b * q as i128
    }

    /// Trace a + bω + conj = 2a + b.
    pub fn trace(&self) -> i64 {
        2 * self.a + self.b
    }
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}", self.a)
        } else if self.a == 0 {
            write!(f, "{}w", self.b)
        } else {
            write!(f, "{}{:+}w", self.a, self.b)
        }
    }
}

/// An integral ideal of O_K in Hermite normal form
/// `content · (nZ + (b+ω)Z)`, 0 ≤ b < n, n | b²+b+q.
///
/// The norm is `content² · n`. The optional `generator` caches a generator
/// when the ideal is known principal.
#[derive(Clone)]
pub struct Ideal {
    pub content: i64,
    pub n: i64,
    pub b: i64,
    pub generator: Option<QuadInt>,
}

impl PartialEq for Ideal {
    /// Equality of the underlying modules; the cached generator is ignored.
    fn eq(&self, other: &Self) -> bool {
        (self.content, self.n, self.b) == (other.content, other.n, other.b)
    }
}
impl Eq for Ideal {}
impl std::hash::Hash for Ideal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.content, self.n, self.b).hash(state);
    }
}

impl Ideal {
    pub fn norm(&self) -> i128 {
        (self.content as i128) * (self.content as i128) * (self.n as i128)
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.content == 1 && self.n == 1
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.content == 1 {
            write!(f, "({}, {}+w)", self.n, self.b)
        } else {
            write!(f, "{}*({}, {}+w)", self.content, self.n, self.b)
        }
    }
}

/// A reduced primitive binary quadratic form (a, b, c) of discriminant −p.
pub type Form = (i64, i64, i64);

/// Gauss reduction of a positive-definite form of discriminant b²−4ac < 0.
pub fn reduce_form(mut a: i64, mut b: i64, mut c: i64) -> Form {
    loop {
        if c < a {
            std::mem::swap(&mut a, &mut c);
            b = -b;
        }
        if b > a || b <= -a {
            // translate: b ← b − 2ka with b in (−a, a]
            let twoa = 2 * a;
            let mut r = b.rem_euclid(twoa);
            if r > a {
                r -= twoa;
            }
            let k = (b - r) / twoa;
            c += k * k * a - k * b;
            b = r;
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        if b == -a {
            b = a;
        }
        if c < a {
            continue;
        }
        return (a, b, c);
    }
}

/// Immutable context for a field K = Q(sqrt(-p)): class group data, class
/// representatives, primitive root tables. All operations on ideals and
/// elements are methods here; the struct is cheap to share via `Arc`.
pub struct FieldContext {
    /// The prime p.
    pub p: u64,
    /// q = (p+1)/4, so that ω² = ω − q.
    pub q: i64,
    /// Class number h (odd).
    pub h: usize,
    /// Reduced forms of discriminant −p, sorted; index = class index.
    pub forms: Vec<Form>,
    /// Index of the principal class (form (1,1,q)).
    pub identity: usize,
    /// One ideal representative per class: O_K for the principal class,
    /// else the smallest-norm prime ideal coprime to 2p; the set is closed
    /// under conjugation.
    pub class_reps: Vec<Ideal>,
    /// Composition table of class indices.
    pub mult_table: Vec<Vec<usize>>,
    /// Inverse class index.
    pub inv_table: Vec<usize>,
    /// Conjugate class (equals inverse).
    pub conj_table: Vec<usize>,
    /// Index of a generator class when the class group is cyclic.
    pub generator_class: Option<usize>,
    /// Discrete log base the generator class: class index → k.
    pub class_dlog: Vec<usize>,
    /// Smallest primitive root mod p.
    pub g: u64,
    /// Index table: ind[m] = k with g^k ≡ m (mod p), for 1 ≤ m < p.
    pub ind: Vec<u32>,
}

impl FieldContext {
    /// Build the field context for a prime p > 3, p ≡ 3 (mod 4).
    ///
    /// The class group is enumerated through reduced primitive binary
    /// quadratic forms of discriminant −p; class representatives are chosen
    /// coprime to 2p.
    pub fn new(p: u64) -> Result<Arc<FieldContext>> {
        if !is_prime_u64(p) {
            return Err(Error::domain(format!("p = {} is not prime", p)));
        }
        if p <= 3 {
            return Err(Error::domain(format!("p = {} violates p > 3", p)));
        }
        if p % 4 != 3 {
            return Err(Error::domain(format!(
                "p = {} violates p ≡ 3 (mod 4) (found p ≡ {} mod 4)",
                p,
                p % 4
            )));
        }
        let q = ((p + 1) / 4) as i64;

        // Reduced forms of discriminant −p: b odd, 0 < b ≤ a ≤ c, with
        // (a,−b,c) also counted when −a < −b and a < c (i.e. b < a < c).
        let mut forms: Vec<Form> = Vec::new();
        let mut b = 1i64;
        while b * b <= p as i64 / 3 {
            let n4 = b * b + p as i64; // = 4ac
            if n4 % 4 == 0 {
                let ac = n4 / 4;
                let mut a = b.max(1);
                while a * a <= ac {
                    if ac % a == 0 && a >= b {
                        let c = ac / a;
                        forms.push((a, b, c));
                        if b < a && a < c {
                            forms.push((a, -b, c));
                        }
                    }
                    a += 1;
                }
            }
            b += 2;
        }
        forms.sort();
        let h = forms.len();
        debug_assert!(h % 2 == 1, "class number of Q(sqrt(-p)) must be odd");
        let identity = forms
            .iter()
            .position(|&f| f == (1, 1, q))
            .expect("principal form present");

        let g = smallest_primitive_root(p);
        let mut ind = vec![0u32; p as usize];
        {
            let mut x = 1u64;
            for k in 0..(p - 1) {
                ind[x as usize] = k as u32;
                x = mul_mod(x, g, p);
            }
        }

        let mut ctx = FieldContext {
            p,
            q,
            h,
            forms,
            identity,
            class_reps: Vec::new(),
            mult_table: Vec::new(),
            inv_table: Vec::new(),
            conj_table: Vec::new(),
            generator_class: None,
            class_dlog: Vec::new(),
            g,
            ind,
        };

        // Conjugation on classes via form (a, −b, c).
        ctx.conj_table = ctx
            .forms
            .iter()
            .map(|&(a, b, c)| ctx.class_of_form(reduce_form(a, -b, c)))
            .collect();

        // Class representatives: O_K for the identity; smallest-norm split
        // primes coprime to 2p elsewhere, assigned in conjugate pairs.
        let mut reps: Vec<Option<Ideal>> = vec![None; h];
        reps[ctx.identity] = Some(Ideal {
            content: 1,
            n: 1,
            b: 0,
            generator: Some(QuadInt::ONE),
        });
        let mut ell = 3u64;
        while reps.iter().any(|r| r.is_none()) {
            assert!(ell < 10_000, "class representative search exhausted");
            if ell != p && is_prime_u64(ell) && legendre(-(p as i64), ell) == 1 {
                for root in prime_roots(ell as i64, q) {
                    let ideal = Ideal {
                        content: 1,
                        n: ell as i64,
                        b: root,
                        generator: None,
                    };
                    let cls = ctx.class_of(&ideal);
                    if reps[cls].is_none() && cls != ctx.identity {
                        reps[cls] = Some(ideal);
                    }
                }
            }
            ell += 2;
        }
        ctx.class_reps = reps.into_iter().map(|r| r.unwrap()).collect();

        // Composition table via ideal multiplication + form reduction.
        let mut table = vec![vec![0usize; h]; h];
        for i in 0..h {
            for j in 0..h {
                let prod = ctx.ideal_mul(&ctx.class_reps[i], &ctx.class_reps[j]);
                table[i][j] = ctx.class_of(&prod);
            }
        }
        ctx.mult_table = table;
        ctx.inv_table = (0..h)
            .map(|i| {
                (0..h)
                    .find(|&j| ctx.mult_table[i][j] == ctx.identity)
                    .expect("class inverse exists")
            })
            .collect();

        // Cyclic-generator detection and discrete logs.
        'outer: for cand in 0..h {
            let mut seen = vec![usize::MAX; h];
            let mut cur = ctx.identity;
            for k in 0..h {
                if seen[cur] != usize::MAX {
                    continue 'outer;
                }
                seen[cur] = k;
                cur = ctx.mult_table[cur][cand];
            }
            if cur == ctx.identity {
                ctx.generator_class = Some(cand);
                ctx.class_dlog = seen;
                break;
            }
        }

        Ok(Arc::new(ctx))
    }

    /// ω as a complex pair is handled in the analytic module; here only the
    /// algebra. Returns q as i64 for convenience.
    pub fn q_i64(&self) -> i64 {
        self.q
    }

    /// The ramified prime 𝔭 = (sqrt(-p)) = pZ + ((p−1)/2 + ω)Z.
    pub fn ramified_prime(&self) -> Ideal {
        Ideal {
            content: 1,
            n: self.p as i64,
            b: ((self.p - 1) / 2) as i64,
            generator: Some(QuadInt::sqrt_minus_p()),
        }
    }

    /// The unit ideal O_K.
    pub fn unit_ideal(&self) -> Ideal {
        Ideal {
            content: 1,
            n: 1,
            b: 0,
            generator: Some(QuadInt::ONE),
        }
    }

    /// The principal ideal (x).
    pub fn principal(&self, x: &QuadInt) -> Ideal {
        assert!(!x.is_zero(), "zero element generates no ideal");
        let gens = vec![
            (x.a as i128, x.b as i128),
            // x·ω = aω + bω² = −bq + (a+b)ω
            (-(x.b as i128) * self.q as i128, x.a as i128 + x.b as i128),
        ];
        let (content, n, b) = self.hnf(gens);
        Ideal {
            content,
            n,
            b,
            generator: Some(*x),
        }
    }

    /// Hermite normal form of the Z-module spanned by pairs (x + yω).
    /// Panics unless the module is an O_K-ideal (content divides shift).
    fn hnf(&self, gens: Vec<(i128, i128)>) -> (i64, i64, i64) {
        // Combine ω-parts down to a single generator (b0 + gω).
        let mut cur: Option<(i128, i128)> = None;
        let mut xs: Vec<i128> = Vec::new();
        for &(x, y) in &gens {
            if y == 0 {
                xs.push(x);
                continue;
            }
            cur = Some(match cur {
                None => (x, y),
                Some((cx, cy)) => {
                    let (gg, u, v) = ext_gcd(cy, y);
                    // u·cur + v·gen has ω-part gg; the complementary
                    // combination (y/gg)·cur − (cy/gg)·gen has ω-part 0.
                    xs.push((y / gg) * cx - (cy / gg) * x);
                    (u * cx + v * x, gg)
                }
            });
        }
        let (mut b0, mut gcoef) = cur.expect("rank-2 module expected");
        if gcoef < 0 {
            b0 = -b0;
            gcoef = -gcoef;
        }
        let mut nn: i128 = 0;
        for x in xs {
            nn = gcd_i128(nn, x);
        }
        assert!(nn > 0, "module of rank 1 is not an ideal");
        // Module = nn·Z + (b0 + gcoef·ω)Z; for an O_K-ideal the content is
        // gcoef and it divides both nn and b0.
        assert!(
            b0 % gcoef == 0 && nn % gcoef == 0,
            "module is not an O_K-ideal"
        );
        let content = gcoef;
        let n = nn / content;
        let b = (b0 / content).rem_euclid(n);
        let (content, n, b) = (
            i64::try_from(content).expect("ideal overflow"),
            i64::try_from(n).expect("ideal overflow"),
            i64::try_from(b).expect("ideal overflow"),
        );
        debug_assert_eq!(
            ((b as i128) * (b as i128) + b as i128 + self.q as i128).rem_euclid(n as i128),
            0,
            "HNF shift must satisfy n | b²+b+q"
        );
        (content, n, b)
    }

    /// Product of two ideals, in normal form.
    pub fn ideal_mul(&self, x: &Ideal, y: &Ideal) -> Ideal {
        let c = (x.content as i128) * (y.content as i128);
        let (n1, b1, n2, b2) = (
            x.n as i128,
            x.b as i128,
            y.n as i128,
            y.b as i128,
        );
        let q = self.q as i128;
        // Generators of the primitive product: n1n2, n1(b2+ω), n2(b1+ω),
        // (b1+ω)(b2+ω) = (b1b2 − q) + (b1+b2+1)ω.
        let gens = vec![
            (n1 * n2, 0),
            (n1 * b2, n1),
            (n2 * b1, n2),
            (b1 * b2 - q, b1 + b2 + 1),
        ];
        let (pc, n, b) = self.hnf(gens);
        let content = i64::try_from(c * pc as i128).expect("ideal content overflow");
        let generator = match (&x.generator, &y.generator) {
            (Some(gx), Some(gy)) => Some(gx.mul(gy, self.q)),
            _ => None,
        };
        Ideal {
            content,
            n,
            b,
            generator,
        }
    }

    /// k-th power of an ideal.
    pub fn ideal_pow(&self, x: &Ideal, k: usize) -> Ideal {
        let mut acc = self.unit_ideal();
        for _ in 0..k {
            acc = self.ideal_mul(&acc, x);
        }
        acc
    }

    /// Conjugate ideal (same content, shift ↦ (−b−1) mod n).
    pub fn ideal_conj(&self, x: &Ideal) -> Ideal {
        let b = (-x.b - 1).rem_euclid(x.n);
        Ideal {
            content: x.content,
            n: x.n,
            b,
            generator: x.generator.as_ref().map(|g| g.conj()),
        }
    }

    /// Membership test x ∈ ideal.
    pub fn ideal_contains(&self, ideal: &Ideal, x: &QuadInt) -> bool {
        let c = ideal.content;
        if x.a % c != 0 || x.b % c != 0 {
            return false;
        }
        let (u, v) = ((x.a / c) as i128, (x.b / c) as i128);
        (u - v * ideal.b as i128).rem_euclid(ideal.n as i128) == 0
    }

    /// The reduced form attached to the ideal nZ + (b+ω)Z:
    /// (n, 2b+1, (b²+b+q)/n), reduced.
    pub fn form_of(&self, ideal: &Ideal) -> Form {
        let n = ideal.n;
        let b = ideal.b;
        let c = ((b as i128 * b as i128 + b as i128 + self.q as i128) / n as i128) as i64;
        reduce_form(n, 2 * b + 1, c)
    }

    fn class_of_form(&self, f: Form) -> usize {
        self.forms
            .iter()
            .position(|&x| x == f)
            .expect("reduced form belongs to the enumerated class set")
    }

    /// Class index of an ideal.
    pub fn class_of(&self, ideal: &Ideal) -> usize {
        self.class_of_form(self.form_of(ideal))
    }

    /// Rational residue m ∈ {0..p−1} with x ≡ m (mod 𝔭):
    /// a + bω ≡ a + b(p+1)/2 (mod 𝔭).
    pub fn residue_mod_ramified(&self, x: &QuadInt) -> u64 {
        let p = self.p as i128;
        let m = (x.a as i128 + x.b as i128 * ((self.p as i128 + 1) / 2)).rem_euclid(p);
        m as u64
    }

    /// Jacobi symbol of x at the ramified prime: the Legendre symbol of the
    /// rational residue of x mod 𝔭. Errors when x ≡ 0 (mod 𝔭).
    pub fn jacobi_symbol_mod_p(&self, x: &QuadInt) -> Result<i32> {
        let m = self.residue_mod_ramified(x);
        if m == 0 {
            return Err(Error::domain(format!(
                "element {} lies in the ramified prime; its symbol is undefined",
                x
            )));
        }
        Ok(legendre(m as i64, self.p))
    }

    /// All integral ideals of norm n, optionally restricted to ideals
    /// coprime to 𝔭 (equivalently, norm coprime to p). Deterministic order:
    /// ascending content, then ascending shift.
    pub fn ideals_of_norm(&self, n: i64, coprime_to_p: bool) -> Vec<Ideal> {
        assert!(n >= 1, "ideal norms are positive");
        let mut out = Vec::new();
        let mut c = 1i64;
        while c * c <= n {
            if n % (c * c) == 0 {
                let n1 = n / (c * c);
                if coprime_to_p && (n1 % self.p as i64 == 0 || c % self.p as i64 == 0) {
                    c += 1;
                    continue;
                }
                for b in prime_roots(n1, self.q) {
                    out.push(Ideal {
                        content: c,
                        n: n1,
                        b,
                        generator: None,
                    });
                }
            }
            c += 1;
        }
        out.sort_by_key(|i| (i.content, i.b));
        out
    }

    /// Principality test. Returns a generator when the ideal class is
    /// trivial: normalized so that the Jacobi symbol at 𝔭 is +1 when the
    /// norm is coprime to p, else to nonnegative real part (ties: positive
    /// imaginary part).
    pub fn is_principal(&self, ideal: &Ideal) -> Option<QuadInt> {
        if self.class_of(ideal) != self.identity {
            return None;
        }
        let norm = ideal.norm();
        let p = self.p as i128;
        // N(a+bω) = norm with |b| ≤ 2·sqrt(norm/p).
        let bmax = {
            let mut t = 1i128;
            while t * t * p <= 4 * norm {
                t += 1;
            }
            t - 1
        };
        for b in -bmax..=bmax {
            let disc = 4 * norm - p * b * b;
            if let Some(s) = exact_sqrt(disc) {
                for sgn in [1i128, -1] {
                    let num = -b + sgn * s;
                    if num % 2 != 0 {
                        continue;
                    }
                    let a = num / 2;
                    let (Ok(ai), Ok(bi)) = (i64::try_from(a), i64::try_from(b)) else {
                        continue;
                    };
                    let cand = QuadInt::new(ai, bi);
                    if cand.norm(self.q) == norm && self.ideal_contains(ideal, &cand) {
                        return Some(self.normalize_generator(&cand));
                    }
                }
            }
        }
        // Class is principal, so a generator must exist.
        unreachable!("principal ideal without generator in search range")
    }

    /// Sign normalization for generators (defined up to ±1): Jacobi symbol
    /// +1 at 𝔭 when coprime to p; otherwise nonnegative real part, ties
    /// broken toward positive imaginary part.
    pub fn normalize_generator(&self, x: &QuadInt) -> QuadInt {
        if let Ok(s) = self.jacobi_symbol_mod_p(x) {
            if s == -1 {
                return x.neg();
            }
            return *x;
        }
        // Real part is a + b/2, i.e. sign of 2a+b.
        let t = x.trace();
        if t > 0 || (t == 0 && x.b > 0) {
            *x
        } else {
            x.neg()
        }
    }

    /// Brute-force principality: search all elements of the given norm and
    /// test membership. Used as an independent oracle in tests.
    pub fn principal_brute(&self, ideal: &Ideal) -> Option<QuadInt> {
        let norm = ideal.norm();
        let p = self.p as i128;
        let mut b = 0i128;
        while b * b * p <= 4 * norm {
            for bb in [b, -b] {
                let disc = 4 * norm - p * bb * bb;
                if let Some(s) = exact_sqrt(disc) {
                    for sgn in [1i128, -1] {
                        let num = -bb + sgn * s;
                        if num % 2 != 0 {
                            continue;
                        }
                        let a = num / 2;
                        let (Ok(ai), Ok(bi)) = (i64::try_from(a), i64::try_from(bb)) else {
                            continue;
                        };
                        let cand = QuadInt::new(ai, bi);
                        if !cand.is_zero()
                            && cand.norm(self.q) == norm
                            && self.ideal_contains(ideal, &cand)
                        {
                            return Some(self.normalize_generator(&cand));
                        }
                    }
                }
                if b == 0 {
                    break;
                }
            }
            b += 1;
        }
        None
    }
}

/// Shifts b ∈ [0, n) with n | b² + b + q (the primitive ideals of norm n).
fn prime_roots(n: i64, q: i64) -> Vec<i64> {
    let mut out = Vec::new();
    for b in 0..n {
        if ((b as i128) * (b as i128) + b as i128 + q as i128) % (n as i128) == 0 {
            out.push(b);
        }
    }
    out
}

/// Smallest primitive root mod p.
pub fn smallest_primitive_root(p: u64) -> u64 {
    let mut fac = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            fac.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        fac.push(m);
    }
    'g: for g in 2..p {
        for &f in &fac {
            if pow_mod(g, (p - 1) / f, p) == 1 {
                continue 'g;
            }
        }
        return g;
    }
    unreachable!("primitive root exists for prime modulus")
}
