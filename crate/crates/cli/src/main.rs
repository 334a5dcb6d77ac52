//! cmtool — command-line interface to the CM-direction library.
//!
//! Subcommands:
//!   chars   enumerate the eta-multiplier character orbits at level p²
//!   qexp    q-expansions of directions and of their eigenform families
//!   gross   invariants of the canonical CM curve (exact when h = 1)
//!   period  the period Ω, the scaled lattice Ω·O_K, and its certification
//!   verify  run the cross-check battery for one prime
//!
//! All output is deterministic: floats are printed as 40-significant-digit
//! decimal strings, JSON keys are sorted, and every random choice is driven
//! by the --seed argument.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use rug::{Complex, Float};
use serde_json::{json, Value};

use cm_core::analytic::{rel_err, tol};
use cm_core::cocycle::{make_modular, projector_matrix, DeltaCocycle};
use cm_core::gross::{gross_curve, period_data};
use cm_core::heckechar::{enumerate_characters, splitting_field_data};
use cm_core::pointcount::trace_of_frobenius;
use cm_core::qexp::{
    canonical_direction, direction_expansion, eigenform_expansion, hecke_residual, Coeff,
    QExpansion,
};
use cm_core::quadfield::{is_prime_u64, FieldContext, QuadInt};

#[derive(Parser)]
#[command(
    name = "cmtool",
    version,
    about = "CM elliptic directions in weight-two cusp forms of level p²"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Prime p ≡ 3 (mod 4), p > 3
    #[arg(long, env = "CMTOOL_P", value_parser = parse_p)]
    p: u64,
    /// Working precision in bits
    #[arg(long, env = "CMTOOL_PREC", default_value_t = 256,
          value_parser = clap::value_parser!(u32).range(64..=16384))]
    prec: u32,
    /// Output format (csv applies to qexp only)
    #[arg(long, env = "CMTOOL_FORMAT", value_enum, default_value = "json")]
    format: Format,
    /// Write the output to a file instead of stdout
    #[arg(long, env = "CMTOOL_OUT")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate the character orbits indexing the CM decomposition
    Chars {
        #[command(flatten)]
        common: Common,
        /// Restrict to the orbit of this order (a divisor of (p−1)/2)
        #[arg(long, env = "CMTOOL_ORDER")]
        order: Option<u64>,
    },
    /// Compute a q-expansion: a direction, or one of its eigenforms via --s
    Qexp {
        #[command(flatten)]
        common: Common,
        /// Twist order d (a divisor of (p−1)/2)
        #[arg(long, env = "CMTOOL_ORDER", default_value_t = 1)]
        order: u64,
        /// Number of coefficients a_1 … a_B
        #[arg(long, env = "CMTOOL_TERMS", default_value_t = 50,
              value_parser = clap::value_parser!(u64).range(1..=100_000))]
        terms: u64,
        /// Eigenform index s ∈ (Z/d)^*; omit to compute the direction itself
        #[arg(long, env = "CMTOOL_S")]
        s: Option<u64>,
        /// Seed for the deterministic modular-vector choice
        #[arg(long, env = "CMTOOL_SEED", default_value_t = 424_242)]
        seed: u64,
    },
    /// Invariants of the canonical CM curve attached to Q(√−p)
    Gross {
        #[command(flatten)]
        common: Common,
    },
    /// The period Ω and the scaled lattice Ω·O_K with Δ = −p³
    Period {
        #[command(flatten)]
        common: Common,
    },
    /// Run the cross-check battery; exit 1 if any check fails
    Verify {
        #[command(flatten)]
        common: Common,
        /// Twist order d (defaults to the full order (p−1)/2)
        #[arg(long, env = "CMTOOL_ORDER")]
        order: Option<u64>,
        /// Truncation used for the q-expansion checks
        #[arg(long, env = "CMTOOL_TERMS", default_value_t = 60,
              value_parser = clap::value_parser!(u64).range(1..=100_000))]
        terms: u64,
        /// Seed for the random cocycle-identity pairs
        #[arg(long, env = "CMTOOL_SEED", default_value_t = 424_242)]
        seed: u64,
    },
}

fn parse_p(s: &str) -> Result<u64, String> {
    let p: u64 = s
        .parse()
        .map_err(|_| format!("`{s}` is not a positive integer"))?;
    if !is_prime_u64(p) {
        return Err(format!("p = {p} is not prime"));
    }
    if p % 4 != 3 || p <= 3 {
        return Err(format!("p = {p} must be a prime ≡ 3 (mod 4) greater than 3"));
    }
    Ok(p)
}

fn usage_error(msg: &str) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

/// Deterministic decimal rendering: 40 significant digits.
fn fstr(f: &Float) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    f.to_string_radix(10, Some(40))
}

fn cjson(z: &Complex) -> Value {
    json!({ "re": fstr(z.real()), "im": fstr(z.imag()) })
}

fn envelope(command: &str, config: Value, choices: Value, results: Value, residuals: Value) -> Value {
    json!({
        "schema_version": "1.0",
        "command": command,
        "config": config,
        "choices": choices,
        "results": results,
        "residuals": residuals,
    })
}

fn emit(text: &str, out: &Option<PathBuf>) -> cm_core::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| cm_core::Error::domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_order(fld: &FieldContext, d: u64) -> u64 {
    let m = (fld.p - 1) / 2;
    if d == 0 || m % d != 0 {
        usage_error(&format!(
            "--order {d} must be a divisor of (p\u{2212}1)/2 = {m} for p = {}",
            fld.p
        ));
    }
    d
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> cm_core::Result<i32> {
    match cli.cmd {
        Cmd::Chars { common, order } => cmd_chars(common, order),
        Cmd::Qexp {
            common,
            order,
            terms,
            s,
            seed,
        } => cmd_qexp(common, order, terms as usize, s, seed),
        Cmd::Gross { common } => cmd_gross(common),
        Cmd::Period { common } => cmd_period(common),
        Cmd::Verify {
            common,
            order,
            terms,
            seed,
        } => cmd_verify(common, order, terms as usize, seed),
    }
}

fn require_json(common: &Common, command: &str) {
    if common.format == Format::Csv {
        usage_error(&format!("csv output applies to qexp only, not `{command}`"));
    }
}

// ---------------------------------------------------------------- chars

fn cmd_chars(common: Common, order: Option<u64>) -> cm_core::Result<i32> {
    require_json(&common, "chars");
    let fld = FieldContext::new(common.p)?;
    if let Some(d) = order {
        check_order(&fld, d);
    }
    let m = (common.p - 1) / 2;
    let data = splitting_field_data(&fld);
    let orbits = enumerate_characters(&fld);
    let mut rows = Vec::new();
    for orbit in &orbits {
        let d = orbit[0].d;
        if let Some(want) = order {
            if d != want {
                continue;
            }
        }
        let canon = &orbit[0];
        rows.push(json!({
            "order": d,
            "character_order": canon.order(),
            "orbit_size": orbit.len() as u64,
            "canonical_t": canon.t,
            "canonical_s": canon.s,
            "dimension": fld.h as u64 * orbit.len() as u64,
        }));
    }
    let config = json!({ "p": common.p, "order": order, "prec": common.prec });
    let choices = json!({
        "canonical_character": "smallest Teichmüller exponent t whose character has exact order 2d",
    });
    let results = json!({
        "class_number": fld.h as u64,
        "ray_index": data.ray_index,
        "orbit_count": data.orbit_count as u64,
        "total_dimension": data.total_dimension,
        "orbits": rows,
    });
    let residuals = json!({
        "dimension_sum_matches": data.total_dimension == fld.h as u64 * m,
    });
    let doc = envelope("chars", config, choices, results, residuals);
    emit(
        &(serde_json::to_string_pretty(&doc).expect("serializable") + "\n"),
        &common.out,
    )?;
    Ok(0)
}

// ---------------------------------------------------------------- qexp

fn coeff_row(n: usize, c: &Coeff, prec: u32) -> (String, String, bool) {
    let _ = n;
    match c {
        Coeff::Int(v) => (format!("{v}"), "0".to_string(), true),
        _ => {
            let z = c.to_complex(prec);
            (fstr(z.real()), fstr(z.imag()), c.is_exact())
        }
    }
}

fn expansion_rows(exp: &QExpansion, prec: u32) -> Vec<Value> {
    exp.coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let (re, im, exact) = coeff_row(i + 1, c, prec);
            json!({ "n": (i + 1) as u64, "re": re, "im": im, "exact": exact })
        })
        .collect()
}

fn expansion_csv(exp: &QExpansion, prec: u32) -> String {
    let mut out = String::from("n,re,im,exact\n");
    for (i, c) in exp.coeffs.iter().enumerate() {
        let (re, im, exact) = coeff_row(i + 1, c, prec);
        out.push_str(&format!("{},{},{},{}\n", i + 1, re, im, exact));
    }
    out
}

fn cmd_qexp(
    common: Common,
    order: u64,
    terms: usize,
    s: Option<u64>,
    seed: u64,
) -> cm_core::Result<i32> {
    let fld = FieldContext::new(common.p)?;
    let d = check_order(&fld, order);
    if let Some(sv) = s {
        let max = d.max(2);
        if sv == 0 || sv >= max || gcd(sv, d) != 1 {
            usage_error(&format!("--s {sv} must be a unit residue in (Z/{d})^*"));
        }
    }

    let (exp, choices) = match s {
        Some(sv) => {
            let exp = eigenform_expansion(&fld, d, sv, terms, common.prec)?;
            let choices = json!({
                "family": "norm-indexed Hecke characters ψ̃_s with nebentypus ε_s(n) = ζ_d^{s·ind n}",
                "canonical_embedding": "s = 1 with the trivial class-group twist",
            });
            (exp, choices)
        }
        None => {
            let mc = make_modular(&fld, d, seed)?;
            let dc = DeltaCocycle::compute(fld.clone(), common.prec)?;
            let exp = direction_expansion(&fld, d, &mc.u, &dc, terms, common.prec)?;
            let note = if d > 1 {
                "directions of order d > 1 are sums of h·φ(d) eigenforms and need not satisfy eigenform recurrences themselves"
            } else {
                "the order-one direction is the rational CM newform"
            };
            let choices = json!({
                "modular_vector_branch": mc.branch,
                "seed": seed,
                "twist_survivors": dc.survivors as u64,
                "note": note,
            });
            (exp, choices)
        }
    };

    let report = hecke_residual(&fld, &exp, s.unwrap_or(1), common.prec)?;
    let config = json!({
        "p": common.p, "order": d, "terms": terms as u64, "prec": common.prec,
        "s": s, "seed": seed,
    });
    let residuals = json!({
        "hecke_max": fstr(&report.max_residual),
        "hecke_coprime_pairs": report.coprime_pairs as u64,
        "hecke_power_relations": report.power_relations as u64,
    });

    match common.format {
        Format::Csv => emit(&expansion_csv(&exp, common.prec), &common.out)?,
        Format::Json => {
            let results = json!({
                "kind": exp.kind,
                "all_exact": exp.all_exact(),
                "coefficients": expansion_rows(&exp, common.prec),
            });
            let doc = envelope("qexp", config, choices, results, residuals);
            emit(
                &(serde_json::to_string_pretty(&doc).expect("serializable") + "\n"),
                &common.out,
            )?;
        }
    }
    Ok(0)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// ---------------------------------------------------------------- gross

fn cmd_gross(common: Common) -> cm_core::Result<i32> {
    require_json(&common, "gross");
    let fld = FieldContext::new(common.p)?;
    let gc = gross_curve(&fld, common.prec)?;
    let exact = match &gc.exact {
        Some(ex) => json!({
            "j": ex.j as i64,
            "m": ex.m,
            "n": ex.n,
            "c4": ex.c4,
            "c6": ex.c6,
            "discriminant": ex.discriminant as i64,
            "model": {
                "a1": ex.model.a1, "a2": ex.model.a2, "a3": ex.model.a3,
                "a4": ex.model.a4, "a6": ex.model.a6,
            },
        }),
        None => Value::Null,
    };
    let config = json!({ "p": common.p, "prec": common.prec });
    let choices = json!({
        "n_sign": "sign of n is the Legendre symbol (2/p)",
    });
    let results = json!({
        "class_number": gc.class_number as u64,
        "rational": gc.exact.is_some(),
        "j_numeric": fstr(&gc.j_numeric),
        "m_numeric": fstr(&gc.m_numeric),
        "n_numeric": fstr(&gc.n_numeric),
        "c4_numeric": fstr(&gc.c4_numeric()),
        "c6_numeric": fstr(&gc.c6_numeric()),
        "exact": exact,
    });
    let doc = envelope("gross", config, choices, results, json!({}));
    emit(
        &(serde_json::to_string_pretty(&doc).expect("serializable") + "\n"),
        &common.out,
    )?;
    Ok(0)
}

// ---------------------------------------------------------------- period

fn cmd_period(common: Common) -> cm_core::Result<i32> {
    require_json(&common, "period");
    let fld = FieldContext::new(common.p)?;
    let dc = DeltaCocycle::compute(fld.clone(), common.prec)?;
    let pd = period_data(&fld, &dc, common.prec)?;
    let agm = match &pd.agm {
        Some(a) => json!({
            "lattice_match": a.lattice_match,
            "coordinate_residual": fstr(&a.coordinate_residual),
        }),
        None => Value::Null,
    };
    let config = json!({ "p": common.p, "prec": common.prec });
    let choices = json!({
        "sign_normalization": "Re Ω > 0, or Im Ω > 0 when Ω is purely imaginary",
        "twist_survivors": dc.survivors as u64,
        "gamma": { "a": dc.gamma.a, "b": dc.gamma.b },
    });
    let results = json!({
        "omega": cjson(&pd.omega),
        "omega_real": pd.omega.imag().is_zero(),
        "delta_scaled": cjson(&pd.delta_scaled),
        "delta_target": -((common.p as i64).pow(3)),
        "agm": agm,
    });
    let residuals = json!({
        "delta": fstr(&pd.delta_residual),
    });
    let doc = envelope("period", config, choices, results, residuals);
    emit(
        &(serde_json::to_string_pretty(&doc).expect("serializable") + "\n"),
        &common.out,
    )?;
    Ok(0)
}

// ---------------------------------------------------------------- verify

struct CheckAcc {
    rows: Vec<Value>,
    all_pass: bool,
}

impl CheckAcc {
    fn new() -> Self {
        CheckAcc {
            rows: Vec::new(),
            all_pass: true,
        }
    }
    fn push(&mut self, name: &str, pass: bool, detail: String) {
        self.all_pass &= pass;
        self.rows.push(json!({ "check": name, "pass": pass, "detail": detail }));
    }
}

fn cmd_verify(
    common: Common,
    order: Option<u64>,
    terms: usize,
    seed: u64,
) -> cm_core::Result<i32> {
    require_json(&common, "verify");
    let fld = FieldContext::new(common.p)?;
    let m = (common.p - 1) / 2;
    let d = check_order(&fld, order.unwrap_or(m));
    let prec = common.prec;
    let eps = tol(prec);
    let mut acc = CheckAcc::new();

    // 1. class-field bookkeeping
    let known_h: &[(u64, usize)] = &[
        (7, 1),
        (11, 1),
        (19, 1),
        (23, 3),
        (31, 3),
        (43, 1),
        (47, 5),
        (59, 3),
        (67, 1),
        (71, 7),
        (79, 5),
        (83, 3),
        (163, 1),
    ];
    let table_ok = known_h
        .iter()
        .find(|(p, _)| *p == common.p)
        .map_or(true, |(_, h)| *h == fld.h);
    let split = splitting_field_data(&fld);
    let book_ok = table_ok && split.ray_index == m && split.total_dimension == fld.h as u64 * m;
    acc.push(
        "class-field-bookkeeping",
        book_ok,
        format!(
            "h = {}, ray index = {}, total dimension = {}",
            fld.h, split.ray_index, split.total_dimension
        ),
    );

    // 2. projector algebra: M² = hd·M and trace = hd·hφ(d)
    let mat = projector_matrix(&fld, d)?;
    let hd = (fld.h as i64) * d as i64;
    let sz = mat.len();
    let mut proj_ok = true;
    for i in 0..sz {
        for j in 0..sz {
            let mut v = 0i64;
            for (k, row) in mat.iter().enumerate() {
                v += mat[i][k] * row[j];
            }
            proj_ok &= v == hd * mat[i][j];
        }
    }
    let trace: i64 = (0..sz).map(|i| mat[i][i]).sum();
    let phi_d = (1..=d).filter(|k| gcd(*k, d) == 1).count() as i64;
    proj_ok &= trace == hd * fld.h as i64 * phi_d;
    acc.push(
        "projector-idempotence",
        proj_ok,
        format!("dimension {}×{}, trace {}", sz, sz, trace),
    );

    // 3. modular vector: trace must equal hd
    let mc = make_modular(&fld, d, seed)?;
    let tr = mc.trace.embed(prec);
    let want = Complex::with_val(prec, (hd, 0));
    let tr_ok = rel_err(&tr, &want) < eps;
    acc.push(
        "modular-vector-trace",
        tr_ok,
        format!("branch = {}, trace ≈ {}", mc.branch, tr.real().to_f64()),
    );

    // 4. eta cocycle chain: unique twist resolution + cocycle identity
    let dc = DeltaCocycle::compute(fld.clone(), prec)?;
    let mut chain_ok = dc.survivors == 1;
    let ggen = match fld.generator_class {
        Some(i) => fld.class_reps[i].clone(),
        None => fld.unit_ideal(),
    };
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = Float::with_val(prec, 0);
    let mut done = 0;
    while done < 5 {
        let x = QuadInt::new(rng.gen_range(-5..6), rng.gen_range(-5..6));
        let y = QuadInt::new(rng.gen_range(-5..6), rng.gen_range(-5..6));
        if x.is_zero()
            || y.is_zero()
            || x.norm(fld.q) % common.p as i128 == 0
            || y.norm(fld.q) % common.p as i128 == 0
        {
            continue;
        }
        done += 1;
        let a = fld.ideal_mul(
            &fld.principal(&x),
            &fld.ideal_pow(&ggen, rng.gen_range(0..fld.h)),
        );
        let b = fld.ideal_mul(
            &fld.principal(&y),
            &fld.ideal_pow(&ggen, rng.gen_range(0..fld.h)),
        );
        let ab = fld.ideal_mul(&a, &b);
        let lhs = dc.delta(&ab)?;
        let ca = fld.class_dlog[fld.class_of(&a)] as i64;
        let rhs = dc.delta(&a)?.mul(&dc.delta(&b)?.act(-ca, 0))?;
        for (l, r) in lhs.vals.iter().zip(rhs.vals.iter()) {
            let e = rel_err(l, r);
            if e > worst {
                worst = e;
            }
        }
    }
    chain_ok &= worst < eps;
    acc.push(
        "eta-cocycle-identity",
        chain_ok,
        format!(
            "survivors = {}, worst pair residual = {}",
            dc.survivors,
            fstr(&worst)
        ),
    );

    // 5. period lattice: Δ(Ω·O_K) = −p³ (+ AGM lattice match when h = 1)
    let pd = period_data(&fld, &dc, prec)?;
    let mut period_ok = pd.delta_residual < eps;
    let mut detail = format!("Δ residual = {}", fstr(&pd.delta_residual));
    if let Some(a) = &pd.agm {
        period_ok &= a.lattice_match && a.coordinate_residual < eps;
        detail.push_str(&format!(
            ", AGM match = {}, coordinate residual = {}",
            a.lattice_match,
            fstr(&a.coordinate_residual)
        ));
    }
    acc.push("period-lattice-delta", period_ok, detail);

    // 6. eigenform Hecke relations at s = 1
    let exp = eigenform_expansion(&fld, d, 1, terms, prec)?;
    let report = hecke_residual(&fld, &exp, 1, prec)?;
    let hecke_ok = report.max_residual < eps && report.coprime_pairs > 0;
    acc.push(
        "eigenform-hecke-relations",
        hecke_ok,
        format!(
            "max residual = {}, {} coprime pairs, {} power relations",
            fstr(&report.max_residual),
            report.coprime_pairs,
            report.power_relations
        ),
    );

    // 7. point counts vs q-expansion (rational curve only)
    if fld.h == 1 {
        let gc = gross_curve(&fld, prec)?;
        let model = gc.exact.expect("h = 1 is exact").model;
        let dir = canonical_direction(&fld, terms, prec)?;
        let mut count_ok = true;
        let mut compared = 0;
        for ell in 2..=terms as u64 {
            if !is_prime_u64(ell) || ell == common.p {
                continue;
            }
            let from_counts = trace_of_frobenius(&model, ell)?;
            let from_qexp = match dir.coeff(ell as usize) {
                Coeff::Int(v) => *v,
                other => {
                    let z = other.to_complex(prec);
                    z.real().to_f64().round() as i64
                }
            };
            count_ok &= from_counts == from_qexp;
            compared += 1;
        }
        acc.push(
            "point-counts-match-qexp",
            count_ok && compared > 0,
            format!("{compared} primes compared"),
        );
    }

    let config = json!({
        "p": common.p, "order": d, "terms": terms as u64, "prec": prec, "seed": seed,
    });
    let choices = json!({
        "tolerance": fstr(&eps),
    });
    let results = json!({
        "all_pass": acc.all_pass,
        "checks": acc.rows,
    });
    let doc = envelope("verify", config, choices, results, json!({}));
    emit(
        &(serde_json::to_string_pretty(&doc).expect("serializable") + "\n"),
        &common.out,
    )?;
    Ok(if acc.all_pass { 0 } else { 1 })
}
