//! Acceptance battery: ten go/no-go criteria with pinned tolerances.
//!
//! Each criterion is one test that prints a single `[PASS]`/`[FAIL]` line
//! (visible with `--nocapture`; the harness `ok`/`FAILED` line mirrors it)
//! and asserts the criterion. Every tolerance and time budget is written
//! out literally in the test body so the gate is self-describing.

use std::sync::Arc;
use std::time::Instant;

use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cm_core::analytic::{delta_of_ideal, rel_err};
use cm_core::cocycle::{make_modular, projector_apply, projector_matrix, trace_phi, DeltaCocycle};
use cm_core::cyclo::{matrix_rank, theta_apply, theta_char_poly, CycloElem, GroupAlgebraElem};
use cm_core::gross::{gross_curve, period_data};
use cm_core::heckechar::{splitting_field_data, trace_psi};
use cm_core::pointcount::trace_of_frobenius;
use cm_core::qexp::{
    canonical_direction, direction_expansion, eigenform_expansion, hecke_residual, nebentypus,
    Coeff,
};
use cm_core::quadfield::{is_prime_u64, FieldContext, QuadInt};

const SEED: u64 = 0x2026_0819;

fn fld(p: u64) -> Arc<FieldContext> {
    FieldContext::new(p).expect("valid prime")
}

fn report(n: u32, name: &str, pass: bool, detail: &str) {
    let tag = if pass { "[PASS]" } else { "[FAIL]" };
    println!("{tag} #{n:02} {name}: {detail}");
    assert!(pass, "{tag} #{n:02} {name}: {detail}");
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// ------------------------------------------------------------------ #1

#[test]
fn acceptance_01_gross_invariants() {
    // Exact invariants at 128-bit recognition; each prime within 5 s.
    let mut detail = String::new();
    let mut pass = true;

    let t0 = Instant::now();
    let ex7 = gross_curve(&fld(7), 128).unwrap().exact.unwrap();
    let el7 = t0.elapsed();
    pass &= ex7.j == -3375
        && ex7.m == -15
        && ex7.n == 27
        && ex7.c4 == 105
        && ex7.c6 == 1323
        && ex7.discriminant == -343
        && el7.as_secs_f64() < 5.0;
    detail.push_str(&format!(
        "p=7 (j,m,n,c4,c6,Δ) = ({},{},{},{},{},{}) in {:.2}s",
        ex7.j, ex7.m, ex7.n, ex7.c4, ex7.c6, ex7.discriminant,
        el7.as_secs_f64()
    ));

    for p in [11u64, 19, 43, 67, 163] {
        let t = Instant::now();
        let ex = gross_curve(&fld(p), 128).unwrap().exact.unwrap();
        let el = t.elapsed();
        let ok = ex.discriminant == -(p as i128).pow(3) && el.as_secs_f64() < 5.0;
        pass &= ok;
        detail.push_str(&format!("; p={p} Δ=−p³ in {:.2}s", el.as_secs_f64()));
    }
    report(1, "curve invariants exact at 128 bits", pass, &detail);
}

// ------------------------------------------------------------------ #2

#[test]
fn acceptance_02_pointcount_match() {
    // a_ℓ of the canonical direction equals ℓ+1−#E(F_ℓ) for every good
    // prime ℓ < 200, exact integer match; each prime p within 30 s.
    let mut detail = String::new();
    let mut pass = true;
    for p in [7u64, 11, 19] {
        let t = Instant::now();
        let f = fld(p);
        let model = gross_curve(&f, 128).unwrap().exact.unwrap().model;
        let dir = canonical_direction(&f, 199, 128).unwrap();
        let mut compared = 0u32;
        for ell in 2u64..200 {
            if !is_prime_u64(ell) || ell == p {
                continue;
            }
            let lhs = match dir.coeff(ell as usize) {
                Coeff::Int(v) => *v,
                _ => i64::MIN, // canonical direction must be exact integers
            };
            let rhs = trace_of_frobenius(&model, ell).unwrap();
            pass &= lhs == rhs;
            compared += 1;
        }
        let el = t.elapsed();
        pass &= el.as_secs_f64() < 30.0 && compared == 45;
        detail.push_str(&format!(
            "p={p}: {compared} good primes matched in {:.2}s; ",
            el.as_secs_f64()
        ));
    }
    report(2, "q-expansion equals point counts (ℓ < 200)", pass, &detail);
}

// ------------------------------------------------------------------ #3

#[test]
fn acceptance_03_period_agm_chowla_selberg() {
    // Ω vs the AGM period lattice (rel. err < 1e−30, 256 bits) for
    // p ∈ {7,11,19}; Δ(Ω·O_K) = −p³ within 1e−30 for p ∈ {7,11,19,23,31}.
    // Each prime within 60 s.
    let lim = Float::with_val(64, 1e-30);
    let mut detail = String::new();
    let mut pass = true;
    for p in [7u64, 11, 19, 23, 31] {
        let t = Instant::now();
        let f = fld(p);
        let dc = DeltaCocycle::compute(f.clone(), 256).unwrap();
        let pd = period_data(&f, &dc, 256).unwrap();
        let mut ok = pd.delta_residual < lim;
        if f.h == 1 {
            let agm = pd.agm.as_ref().unwrap();
            ok &= agm.lattice_match && agm.coordinate_residual < lim;
        }
        let el = t.elapsed();
        ok &= el.as_secs_f64() < 60.0;
        pass &= ok;
        detail.push_str(&format!(
            "p={p}: Δ-residual {:.1e}{} in {:.2}s; ",
            pd.delta_residual.to_f64(),
            if f.h == 1 { ", AGM lattice match" } else { "" },
            el.as_secs_f64()
        ));
    }
    report(3, "period Ω vs AGM and Δ(Ω·O_K) = −p³", pass, &detail);
}

// ------------------------------------------------------------------ #4

#[test]
fn acceptance_04_delta_certification() {
    // p = 23 (h = 3): the joint twist search admits exactly one survivor;
    // the twelfth-power lattice identity holds on every class
    // representative and the cocycle relation on 20 random ideal pairs,
    // all to residual < 1e−30 at 256 bits.
    let lim = Float::with_val(64, 1e-30);
    let f = fld(23);
    let dc = DeltaCocycle::compute(f.clone(), 256).unwrap();
    let mut pass = dc.survivors == 1;
    let mut worst = Float::with_val(256, 0);

    // δ(𝔞)¹² = Δ(O_K)/Δ(𝔞) at the identity embedding, for every class.
    let d0 = delta_of_ideal(&f, &f.unit_ideal(), 256).unwrap();
    for rep in &f.class_reps {
        let del = dc.delta(rep).unwrap();
        let lhs = Complex::with_val(256 + 32, del.value0().pow(12));
        let da = delta_of_ideal(&f, rep, 256).unwrap();
        let rhs = Complex::with_val(256 + 32, &d0 / &da);
        let e = rel_err(&lhs, &rhs);
        if e > worst {
            worst = e;
        }
    }
    pass &= worst < lim;

    // Cocycle relation δ(𝔞𝔟) = δ(𝔞)·^{𝔞⁻¹}δ(𝔟) on 20 random pairs.
    let ggen = f.class_reps[f.generator_class.unwrap()].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut pair_worst = Float::with_val(256, 0);
    let mut done = 0;
    while done < 20 {
        let x = QuadInt::new(rng.gen_range(-5..6), rng.gen_range(-5..6));
        let y = QuadInt::new(rng.gen_range(-5..6), rng.gen_range(-5..6));
        if x.is_zero() || y.is_zero() || x.norm(f.q) % 23 == 0 || y.norm(f.q) % 23 == 0 {
            continue;
        }
        done += 1;
        let a = f.ideal_mul(&f.principal(&x), &f.ideal_pow(&ggen, rng.gen_range(0..3)));
        let b = f.ideal_mul(&f.principal(&y), &f.ideal_pow(&ggen, rng.gen_range(0..3)));
        let ab = f.ideal_mul(&a, &b);
        let lhs = dc.delta(&ab).unwrap();
        let ca = f.class_dlog[f.class_of(&a)] as i64;
        let rhs = dc
            .delta(&a)
            .unwrap()
            .mul(&dc.delta(&b).unwrap().act(-ca, 0))
            .unwrap();
        for (l, r) in lhs.vals.iter().zip(rhs.vals.iter()) {
            let e = rel_err(l, r);
            if e > pair_worst {
                pair_worst = e;
            }
        }
    }
    pass &= pair_worst < lim;

    report(
        4,
        "eta cocycle certification at p = 23",
        pass,
        &format!(
            "survivors = {}, worst 12th-power residual {:.1e}, worst of 20 cocycle pairs {:.1e}",
            dc.survivors,
            worst.to_f64(),
            pair_worst.to_f64()
        ),
    );
}

// ------------------------------------------------------------------ #5

#[test]
fn acceptance_05_worked_modular_vector() {
    // p = 7, d = 3: the full-order branch returns u = ζ₇² − ζ₇ exactly and
    // tr_Φ(λ_u) = 3 = [L:K] within 1e−25.
    let f = fld(7);
    let mc = make_modular(&f, 3, SEED).unwrap();
    let expect = CycloElem::zeta_pow(7, 2).sub(&CycloElem::zeta_pow(7, 1));
    let mut pass = mc.u == expect && mc.branch == "gauss-quotient";

    let tr = trace_phi(&f, 3, &mc.u).unwrap();
    pass &= tr == CycloElem::from_i64(7, 3);
    let emb = tr.embed(256);
    let diff = Complex::with_val(256, &emb - &Complex::with_val(256, (3, 0)));
    let mag = Float::with_val(
        256,
        diff.real().clone().square() + diff.imag().clone().square(),
    )
    .sqrt();
    pass &= mag < Float::with_val(64, 1e-25);

    report(
        5,
        "worked example u = ζ² − ζ at (p, d) = (7, 3)",
        pass,
        &format!(
            "branch = {}, u exact = {}, tr_Φ = 3 exact with numeric residual {:.1e}",
            mc.branch,
            mc.u == expect,
            mag.to_f64()
        ),
    );
}

// ------------------------------------------------------------------ #6

#[test]
fn acceptance_06_trace_vanishing() {
    // p = 23: the full character-family trace vanishes on every
    // non-principal class representative and equals h·a·c_{2d}(ind a) on
    // 10 random principal ideals — the Ramanujan factor recomputed here
    // as a literal sum of primitive 2d-th roots of unity.
    let f = fld(23);
    let mut pass = true;
    let mut detail = String::new();
    for d in [1u64, 11] {
        for rep in &f.class_reps {
            if f.is_principal(rep).is_some() {
                continue;
            }
            let tv = trace_psi(&f, d, rep).unwrap();
            pass &= tv.is_zero();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ d);
        let mut done = 0;
        while done < 10 {
            let x = QuadInt::new(rng.gen_range(-9..10), rng.gen_range(-9..10));
            if x.is_zero() || x.norm(f.q) % 23 == 0 {
                continue;
            }
            done += 1;
            let ideal = f.principal(&x);
            let got = trace_psi(&f, d, &ideal).unwrap();
            let alpha = f.is_principal(&ideal).unwrap();
            let ind = f.ind[f.residue_mod_ramified(&alpha) as usize] as u64;
            // independent route: c_{2d}(ind) as an explicit root-of-unity sum
            let n2 = 2 * d;
            let mut sum = CycloElem::zero(n2);
            for k in 1..n2 {
                if gcd(k, n2) == 1 {
                    sum = sum.add(&CycloElem::zeta_pow(n2, (k * ind % n2) as i64));
                }
            }
            let c = sum
                .as_rational()
                .expect("Ramanujan sums are rational integers");
            let scale = Rational::from(f.h as i64) * c;
            let num = scale.numer().to_i64().unwrap();
            assert_eq!(*scale.denom(), 1);
            let want = QuadInt::new(alpha.a * num, alpha.b * num);
            pass &= got == want;
        }
        detail.push_str(&format!(
            "d={d}: all non-principal classes give 0, 10 principal ideals match exactly; "
        ));
    }
    report(6, "character-family trace vanishing at p = 23", pass, &detail);
}

// ------------------------------------------------------------------ #7

#[test]
fn acceptance_07_projector_law() {
    // pr² = [L:K]·pr on 10 random inputs, rank(pr) = hφ(d), and the
    // eigenvalue multiset is {0, [L:K]} with multiplicities
    // (hd − hφ(d), hφ(d)), for (p, d) ∈ {(7,3), (11,5), (23,11)}.
    let mut pass = true;
    let mut detail = String::new();
    for (p, d) in [(7u64, 3u64), (11, 5), (23, 11)] {
        let f = fld(p);
        let hd = f.h as i64 * d as i64;
        let phi_d = (1..=d).filter(|k| gcd(*k, d) == 1).count();
        let rank_want = f.h * phi_d;

        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ p);
        for _ in 0..10 {
            let mut u = CycloElem::zero(p);
            for i in 0..(p - 1) {
                u = u.add(
                    &CycloElem::zeta_pow(p, i as i64)
                        .scale(&Rational::from(rng.gen_range(-9i64..10))),
                );
            }
            let pr1 = projector_apply(&f, d, &u).unwrap();
            let pr2 = projector_apply(&f, d, &pr1).unwrap();
            pass &= pr2 == pr1.scale(&Rational::from(hd));
        }

        let mat = projector_matrix(&f, d).unwrap();
        let sz = mat.len();
        let ratmat: Vec<Vec<Rational>> = mat
            .iter()
            .map(|row| row.iter().map(|&v| Rational::from(v)).collect())
            .collect();
        let rank = matrix_rank(ratmat);
        let trace: i64 = (0..sz).map(|i| mat[i][i]).sum();
        // M² = hd·M forces eigenvalues ⊆ {0, hd}; rank counts the hd's and
        // the trace pins the multiset: trace = hd·(multiplicity of hd).
        let mut sq_ok = true;
        for i in 0..sz {
            for j in 0..sz {
                let mut v = 0i64;
                for (k, row) in mat.iter().enumerate() {
                    v += mat[i][k] * row[j];
                }
                sq_ok &= v == hd * mat[i][j];
            }
        }
        let ok = sq_ok && rank == rank_want && trace == hd * rank_want as i64;
        pass &= ok;
        detail.push_str(&format!(
            "(p,d)=({p},{d}): rank {rank} = hφ(d), eigenvalues {{0^{}, {}^{}}}; ",
            sz - rank,
            hd,
            rank
        ));
    }
    report(7, "projector law pr² = [L:K]·pr", pass, &detail);
}

// ------------------------------------------------------------------ #8

#[test]
fn acceptance_08_theta_algebra() {
    // Θ is an algebra homomorphism and its characteristic polynomial is
    // (−1)^k ∏ᵢ (X − P(ζ_k^i)), checked numerically to 1e−25 on 100
    // random polynomials across k ∈ {3, 5, 11}.
    let lim = Float::with_val(64, 1e-25);
    let prec = 192u32;
    let cases: [(usize, u64, u64, usize); 3] = [(3, 7, 2, 34), (5, 11, 3, 33), (11, 23, 2, 33)];
    let mut pass = true;
    let mut total = 0usize;
    for (k, n, e, reps) in cases {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ k as u64);
        for _ in 0..reps {
            total += 1;
            let mut p = GroupAlgebraElem::zero(k);
            let mut q = GroupAlgebraElem::zero(k);
            for r in 0..k {
                p.coeffs[r] = Rational::from(rng.gen_range(-5i64..=5));
                q.coeffs[r] = Rational::from(rng.gen_range(-5i64..=5));
            }
            // homomorphism on a random cyclotomic argument
            let mut u = CycloElem::zero(n);
            for i in 0..(n - 1) {
                u = u.add(
                    &CycloElem::zeta_pow(n, i as i64)
                        .scale(&Rational::from(rng.gen_range(-4i64..=4))),
                );
            }
            let lhs = theta_apply(&p.mul(&q), n, e, &u).unwrap();
            let rhs = theta_apply(&p, n, e, &theta_apply(&q, n, e, &u).unwrap()).unwrap();
            pass &= lhs == rhs;

            // spectrum: char poly vs the root product, numerically
            let (cp, _) = theta_char_poly(&p);
            let mut prod = vec![Complex::with_val(prec, (1, 0))];
            for i in 0..k {
                let root = p.eval_at_root(i as i64).embed(prec);
                let mut next = vec![Complex::with_val(prec, (0, 0)); prod.len() + 1];
                for (r, c) in prod.iter().enumerate() {
                    next[r + 1] = Complex::with_val(prec, &next[r + 1] + c);
                    next[r] = Complex::with_val(prec, &next[r] - &Complex::with_val(prec, c * &root));
                }
                prod = next;
            }
            for (r, c) in prod.iter().enumerate() {
                // k is odd in every case, so (−1)^k = −1.
                let want = Complex::with_val(prec, (-Float::with_val(prec, &cp[r]), 0));
                let diff = Complex::with_val(prec, c - &want);
                let mag = Float::with_val(
                    prec,
                    diff.real().clone().square() + diff.imag().clone().square(),
                )
                .sqrt();
                pass &= mag < lim;
            }
        }
    }
    report(
        8,
        "Θ-algebra homomorphism and spectrum",
        pass,
        &format!("{total} random polynomials across k ∈ {{3, 5, 11}}"),
    );
}

// ------------------------------------------------------------------ #9

#[test]
fn acceptance_09_bookkeeping() {
    // For every p < 100 with p ≡ 3 (mod 4): ray index (p−1)/2, orbit
    // count = #divisors((p−1)/2), total dimension h·(p−1)/2.
    let mut pass = true;
    let mut detail = String::new();
    for p in [7u64, 11, 19, 23, 31, 43, 47, 59, 67, 71, 79, 83] {
        let f = fld(p);
        let m = (p - 1) / 2;
        let data = splitting_field_data(&f);
        let divisors = (1..=m).filter(|d| m % d == 0).count();
        let ok = data.ray_index == m
            && data.orbit_count == divisors
            && data.total_dimension == f.h as u64 * m;
        pass &= ok;
        detail.push_str(&format!("p={p} h={} dim={}; ", f.h, data.total_dimension));
    }
    report(9, "ray-class bookkeeping for all p < 100", pass, &detail);
}

// ------------------------------------------------------------------ #10

/// Exact integer Hecke check for a rational (d = 1) expansion:
/// multiplicativity on coprime pairs and the prime-power recursion with
/// ε(ℓ) = 1 away from p and ε(p) = 0. Returns (ok, pairs, powers).
fn exact_int_hecke(p: u64, coeffs: &[i64]) -> (bool, usize, usize) {
    let b = coeffs.len();
    let a = |n: usize| coeffs[n - 1];
    let mut ok = true;
    let mut pairs = 0;
    let mut powers = 0;
    for m in 2..=b {
        if m * m > b {
            break;
        }
        for n in m..=b / m {
            if gcd(m as u64, n as u64) != 1 {
                continue;
            }
            ok &= a(m * n) == a(m) * a(n);
            pairs += 1;
        }
    }
    for ell in 2..=b {
        if !is_prime_u64(ell as u64) {
            continue;
        }
        let eps = if ell as u64 == p { 0i64 } else { 1 };
        let mut lr = ell;
        while lr * ell <= b {
            let prev = if lr == ell { 1 } else { a(lr / ell) };
            ok &= a(lr * ell) == a(ell) * a(lr) - eps * ell as i64 * prev;
            powers += 1;
            lr *= ell;
        }
    }
    (ok, pairs, powers)
}

/// Exact cyclotomic Hecke check for an eigenform with coefficients in
/// Z[ζ_d] and nebentypus ε_s. Returns (ok, pairs, powers).
fn exact_cyclo_hecke(
    f: &Arc<FieldContext>,
    d: u64,
    s: u64,
    coeffs: &[Coeff],
) -> (bool, usize, usize) {
    let b = coeffs.len();
    let to_c = |c: &Coeff| -> CycloElem {
        match c {
            Coeff::Int(v) => CycloElem::from_i64(d, *v),
            Coeff::Cyclo(x) => x.clone(),
            Coeff::Numeric(_) => panic!("exact checker received a numeric coefficient"),
        }
    };
    let a = |n: usize| to_c(&coeffs[n - 1]);
    let mut ok = true;
    let mut pairs = 0;
    let mut powers = 0;
    for m in 2..=b {
        if m * m > b {
            break;
        }
        for n in m..=b / m {
            if gcd(m as u64, n as u64) != 1 {
                continue;
            }
            ok &= a(m * n).sub(&a(m).mul(&a(n))).is_zero();
            pairs += 1;
        }
    }
    for ell in 2..=b {
        if !is_prime_u64(ell as u64) {
            continue;
        }
        let eps = nebentypus(f, d, s, ell as u64).unwrap();
        let mut lr = ell;
        while lr * ell <= b {
            let prev = if lr == ell {
                CycloElem::one(d)
            } else {
                a(lr / ell)
            };
            let rhs = a(ell)
                .mul(&a(lr))
                .sub(&eps.scale(&Rational::from(ell as i64)).mul(&prev));
            ok &= a(lr * ell).sub(&rhs).is_zero();
            powers += 1;
            lr *= ell;
        }
    }
    (ok, pairs, powers)
}

#[test]
fn acceptance_10_hecke_structure() {
    // Every emitted expansion at B = 500 must satisfy multiplicativity and
    // the ε-twisted prime-power recursion: residual exactly 0 for exact
    // expansions, < 1e−25 for numeric ones. Directions of order d > 1 are
    // emitted expansions but are weighted sums of h·φ(d) eigenforms with
    // distinct nebentypus characters, so the universal claim fails for
    // them; the battery reports every family honestly and the aggregate
    // line below therefore fails by design.
    const B: usize = 500;
    let lim = Float::with_val(64, 1e-25);
    let mut lines: Vec<String> = Vec::new();
    let mut all = true;

    // Rational directions (d = 1): exact integer relations.
    for p in [7u64, 11, 19] {
        let f = fld(p);
        let dir = canonical_direction(&f, B, 128).unwrap();
        let ints: Vec<i64> = dir
            .coeffs
            .iter()
            .map(|c| match c {
                Coeff::Int(v) => *v,
                _ => panic!("canonical direction must be exact"),
            })
            .collect();
        let (ok, pairs, powers) = exact_int_hecke(p, &ints);
        all &= ok;
        lines.push(format!(
            "direction (p={p}, d=1): exact residual 0 over {pairs} coprime pairs, {powers} power relations — {}",
            if ok { "pass" } else { "FAIL" }
        ));
        assert!(ok, "rational direction at p = {p} must satisfy exact Hecke relations");
    }

    // Eigenform families with exact coefficients in Z[ζ_d].
    for (p, d, smax) in [(7u64, 3u64, 3u64), (11, 5, 5)] {
        let f = fld(p);
        for s in 1..smax {
            if gcd(s, d) != 1 {
                continue;
            }
            let exp = eigenform_expansion(&f, d, s, B, 128).unwrap();
            assert!(exp.all_exact());
            let (ok, pairs, powers) = exact_cyclo_hecke(&f, d, s, &exp.coeffs);
            all &= ok;
            lines.push(format!(
                "eigenform (p={p}, d={d}, s={s}): exact residual 0 over {pairs} pairs, {powers} power relations — {}",
                if ok { "pass" } else { "FAIL" }
            ));
            assert!(ok, "eigenform (p={p}, d={d}, s={s}) must satisfy exact Hecke relations");
        }
    }

    // Numeric eigenform at class number three.
    {
        let f = fld(23);
        let exp = eigenform_expansion(&f, 11, 1, B, 256).unwrap();
        let rep = hecke_residual(&f, &exp, 1, 256).unwrap();
        let ok = rep.max_residual < lim;
        all &= ok;
        lines.push(format!(
            "eigenform (p=23, d=11, s=1): numeric residual {:.1e} over {} pairs, {} power relations — {}",
            rep.max_residual.to_f64(),
            rep.coprime_pairs,
            rep.power_relations,
            if ok { "pass" } else { "FAIL" }
        ));
        assert!(ok, "numeric eigenform at (23, 11) must satisfy Hecke relations within 1e-25");
    }

    // A direction of order d > 1: emitted, but not an eigenform.
    {
        let f = fld(7);
        let mc = make_modular(&f, 3, SEED).unwrap();
        let dc = DeltaCocycle::compute(f.clone(), 256).unwrap();
        let exp = direction_expansion(&f, 3, &mc.u, &dc, B, 256).unwrap();
        let rep = hecke_residual(&f, &exp, 1, 256).unwrap();
        let ok = rep.max_residual < lim;
        all &= ok;
        lines.push(format!(
            "direction (p=7, d=3): numeric residual {:.3e} — {} (a d>1 direction is the weighted sum of h·φ(d) eigenforms with distinct nebentypus characters and satisfies no single-eigenform recursion)",
            rep.max_residual.to_f64(),
            if ok { "pass" } else { "FAIL" }
        ));
    }

    for l in &lines {
        println!("        {l}");
    }
    report(
        10,
        "Hecke structure of every emitted expansion (B = 500)",
        all,
        "the universal claim fails exactly on directions of order d > 1; every \
         d = 1 direction and every eigenform-family expansion passes (exact \
         residual 0, numeric < 1e−25) — see the per-family lines above",
    );
}
