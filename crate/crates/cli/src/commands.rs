//! The subcommands: typed results first, then their renderings.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use pftl_core::arith::is_squarefree;
use pftl_core::bounds::{f_value, log_ratio_range, torsion_exponents, TorsionExponentReport};
use pftl_core::element::FieldElement;
use pftl_core::enumerate::{
    count_primitive_with, empirical_mkl_with, growth_curve_with, Enumeration, EnumerationOptions, GrowthRow, MklEstimate, SliceRunner, Witness,
};
use pftl_core::height::weil_height;
use pftl_core::primes::{good_prime_count_report, ramified_primes, GoodPrimeReport};
use pftl_core::purefield::PureField;
use pftl_core::RealEnclosure;

use crate::config::{ExperimentConfig, Format, Task};
use crate::report::{self, document, enclosure, rat, rat_text, uint};
use crate::runner::ThreadRunner;
use crate::Failure;

/// Rows for CSV output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn to_csv(&self) -> Result<String, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(|e| Failure::Io(e.to_string()))?;
        for row in &self.rows {
            w.write_record(row).map_err(|e| Failure::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Failure::Io(e.to_string()))
    }
}

/// A command result in every encoding it supports.
pub struct Rendered {
    pub json: Value,
    pub table: Option<Table>,
    /// Plain text, used when no format flag is given and the command has one.
    pub text: Option<String>,
    default: Format,
    /// A one-line summary for standard error.
    pub summary: Option<String>,
}

impl Rendered {
    pub fn encode(&self, format: Format) -> Result<String, Failure> {
        let format = if format == Format::Default { self.default } else { format };
        match format {
            Format::Csv => match &self.table {
                Some(t) => t.to_csv(),
                None => Err(Failure::Config("this command has no CSV form, use --json".into())),
            },
            Format::Json => Ok(format!("{}\n", serde_json::to_string_pretty(&self.json).expect("JSON values serialize"))),
            Format::Default => Ok(self.text.clone().unwrap_or_default()),
        }
    }
}

fn field(d: u32, a: &BigUint) -> Result<Arc<PureField>, Failure> {
    Ok(Arc::new(PureField::new(d, a)?))
}

fn options(cfg: &ExperimentConfig) -> EnumerationOptions {
    EnumerationOptions { work_limit: cfg.limit, ..EnumerationOptions::with_precision(cfg.prec_bits) }
}

/// Runs a validated configuration.
pub fn execute(cfg: &ExperimentConfig) -> Result<Rendered, Failure> {
    let runner = ThreadRunner::new(cfg.workers);
    match &cfg.task {
        Task::Field { d, a } => Ok(render_field(&*field(*d, a)?)),
        Task::Bounds { d, a, ell } => Ok(render_bounds(&torsion_exponents(&*field(*d, a)?, *ell)?)),
        Task::FdlFamily { d, ell, a_max } => Ok(render_family(*d, *ell, &fdl_family(*d, *ell, *a_max, cfg.prec_bits)?)),
        Task::Growth { d, a, xs } => {
            let mut curves = Vec::new();
            for a in a {
                let k = field(*d, a)?;
                curves.push((a.clone(), growth_curve_with(&k, xs, &options(cfg), &runner)?));
            }
            Ok(render_growth(*d, &curves))
        }
        Task::Primes { d, a, delta, eps } => Ok(render_primes(&good_prime_count_report(&*field(*d, a)?, delta, eps)?)),
        Task::Enumerate { d, a, x } => {
            let k = field(*d, a)?;
            Ok(render_enumeration(&count_primitive_with(&k, x, &options(cfg), &runner)?))
        }
        Task::Mkl { d, a, ell, xs } => {
            let k = field(*d, a)?;
            Ok(render_mkl(&k, *ell, &empirical_mkl_with(&k, *ell, xs, &options(cfg), &runner)?))
        }
    }
}

fn field_json(k: &PureField) -> Value {
    let disc = k.disc();
    let ram = ramified_primes(k);
    json!({
        "d": k.d(),
        "a": uint(k.a()),
        "factorization": k.factorization().factors().iter().map(|(p, e)| json!([uint(p), e])).collect::<Vec<_>>(),
        "parts": k.decomposition().parts().iter().map(uint).collect::<Vec<_>>(),
        "discriminant": {
            "lower": uint(disc.lower()),
            "upper": uint(disc.upper()),
            "exact": disc.exact().map(uint),
            "poly_disc_modulus": uint(disc.poly_disc_modulus()),
        },
        "index_bound": uint(&k.index_bound()),
        "theta": enclosure(k.theta()),
        "ramified_primes": ram.ramified.iter().map(uint).collect::<Vec<_>>(),
        "flagged_primes": ram.flagged.iter().map(uint).collect::<Vec<_>>(),
        "subfield_degrees": k.subfields().iter().map(|s| s.degree).collect::<Vec<_>>(),
    })
}

pub fn render_field(k: &PureField) -> Rendered {
    let json = document("field", field_json(k));
    Rendered {
        text: Some(format!("{}\n", serde_json::to_string_pretty(&json).expect("serializable"))),
        json,
        table: None,
        default: Format::Json,
        summary: None,
    }
}

pub fn render_bounds(r: &TorsionExponentReport) -> Rendered {
    let opt = |e: &Option<RealEnclosure>| e.as_ref().map(enclosure).unwrap_or(Value::Null);
    let json = document(
        "bounds",
        json!({
            "d": r.d,
            "a": uint(&r.a),
            "ell": r.ell,
            "disc_range": [uint(&r.disc_range.0), uint(&r.disc_range.1)],
            "exponents": r.entries().into_iter().map(|(name, e)| json!({"name": name, "value": enclosure(e)})).collect::<Vec<_>>(),
            "exponent_hbd_effective": opt(&r.exponent_hbd_effective),
            "a_factor_exponents": r.a_factor_exponents.iter().map(|f| json!({
                "label": f.label, "index": f.index, "base": uint(&f.base), "exponent": rat(&f.exponent),
            })).collect::<Vec<_>>(),
            "gamma": opt(&r.gamma),
            "gamma_bare": enclosure(&r.gamma_bare),
            "min_product": enclosure(&r.min_product),
            "argmin_m": r.argmin_m,
            "note": r.epsilon_note,
        }),
    );
    let mut table = Table::new(&["name", "lo", "hi", "lo_f64", "hi_f64"]);
    for (name, e) in r.entries() {
        table.rows.push(vec![name.into(), rat_text(e.lo()), rat_text(e.hi()), report::float(e.lo_f64()), report::float(e.hi_f64())]);
    }
    Rendered {
        text: Some(format!("{}\n", serde_json::to_string_pretty(&json).expect("serializable"))),
        json,
        table: Some(table),
        default: Format::Json,
        summary: None,
    }
}

/// One field of the family `a = A_1 A_{d-1}^(d-1)`.
#[derive(Clone, Debug)]
pub struct FamilyRow {
    /// `A_{d-1}`
    pub a_top: u64,
    pub a1: u64,
    pub a: BigUint,
    /// `H_K((A_1 / A_{d-1})^(1/d))`, which equals `A_1`.
    pub eta: RealEnclosure,
    pub eta_is_a1: bool,
    pub disc_lower: BigUint,
    pub disc_upper: BigUint,
    /// `log A_1 / (ell log D)` over the discriminant interval.
    pub ratio: RealEnclosure,
    /// `A_1 <= sqrt(2) D_lower^(1/(2(d-1)))`, decided in integers.
    pub envelope_ok: bool,
    /// `A_1 <= 2 A_{d-1}`.
    pub a1_le_twice: bool,
}

fn squarefree(n: u64) -> bool {
    is_squarefree(&BigUint::from(n)).expect("small integers factor")
}

/// Least squarefree `A_1` in `[A, 2A]` coprime to `A`.
fn partner(a_top: u64) -> Option<u64> {
    (a_top..=2 * a_top).find(|&c| c.gcd(&a_top) == 1 && squarefree(c))
}

/// The family of fields with `A_{d-1} <= A_1 <= 2 A_{d-1}` for every squarefree
/// `A_{d-1} <= a_max`.
pub fn fdl_family(d: u32, ell: u32, a_max: u64, prec: u32) -> Result<Vec<FamilyRow>, Failure> {
    let mut rows = Vec::new();
    for a_top in 1..=a_max {
        if !squarefree(a_top) {
            continue;
        }
        let a1 = partner(a_top).ok_or_else(|| Failure::Core(pftl_core::Error::Domain(format!("no squarefree partner for {a_top}"))))?;
        if a1 == 1 {
            // a = 1 gives no field
            continue;
        }
        let a = BigUint::from(a1) * BigUint::from(a_top).pow(d - 1);
        let k = field(d, &a)?;
        let beta = FieldElement::monomial(k.clone(), 1, BigInt::one(), BigInt::from(a_top));
        let eta = weil_height(&beta, prec)?;
        let eta_is_a1 = eta.exact_value() == Some(&BigRational::from_integer(BigInt::from(a1)));
        let (lo, hi) = k.disc().range();
        let ratio = log_ratio_range(&BigUint::from(a1), ell, lo, hi);
        // A_1^(2(d-1)) <= 2^(d-1) D_lower
        let envelope_ok = BigUint::from(a1).pow(2 * (d - 1)) <= BigUint::from(2u32).pow(d - 1) * lo;
        rows.push(FamilyRow {
            a_top,
            a1,
            a,
            eta,
            eta_is_a1,
            disc_lower: lo.clone(),
            disc_upper: hi.clone(),
            ratio,
            envelope_ok,
            a1_le_twice: a1 <= 2 * a_top,
        });
    }
    Ok(rows)
}

pub fn render_family(d: u32, ell: u32, rows: &[FamilyRow]) -> Rendered {
    let target = f_value(ell, d).ok();
    let target_text = target.as_ref().map(rat_text).unwrap_or_default();
    let mut table = Table::new(&[
        "A_top",
        "A_1",
        "a",
        "eta",
        "eta_is_A_1",
        "disc_lower",
        "disc_upper",
        "ratio_lo",
        "ratio_hi",
        "target",
        "envelope_ok",
        "A_1_le_2A_top",
    ]);
    for r in rows {
        table.rows.push(vec![
            r.a_top.to_string(),
            r.a1.to_string(),
            r.a.to_string(),
            rat_text(r.eta.lo()),
            r.eta_is_a1.to_string(),
            r.disc_lower.to_string(),
            r.disc_upper.to_string(),
            report::float(r.ratio.lo_f64()),
            report::float(r.ratio.hi_f64()),
            target_text.clone(),
            r.envelope_ok.to_string(),
            r.a1_le_twice.to_string(),
        ]);
    }
    let json = document(
        "fdl-family",
        json!({
            "d": d,
            "ell": ell,
            "target": target.as_ref().map(rat),
            "rows": rows.iter().map(|r| json!({
                "A_top": r.a_top, "A_1": r.a1, "a": uint(&r.a), "eta": enclosure(&r.eta), "eta_is_A_1": r.eta_is_a1,
                "disc": [uint(&r.disc_lower), uint(&r.disc_upper)], "ratio": enclosure(&r.ratio),
                "envelope_ok": r.envelope_ok, "A_1_le_2A_top": r.a1_le_twice,
            })).collect::<Vec<_>>(),
        }),
    );
    let summary = Some(format!("{} fields, envelope violations: {}", rows.len(), rows.iter().filter(|r| !r.envelope_ok).count()));
    Rendered { json, table: Some(table), text: None, default: Format::Csv, summary }
}

pub fn render_growth(d: u32, curves: &[(BigUint, Vec<GrowthRow>)]) -> Rendered {
    let several = curves.len() > 1;
    let mut table = if several { Table::new(&["a", "X", "count", "ambiguous"]) } else { Table::new(&["X", "count", "ambiguous"]) };
    for (a, rows) in curves {
        for r in rows {
            let mut row = vec![rat_text(&r.x), r.count.to_string(), r.ambiguous.to_string()];
            if several {
                row.insert(0, a.to_string());
            }
            table.rows.push(row);
        }
    }
    let json = document(
        "growth",
        json!({
            "d": d,
            "fields": curves.iter().map(|(a, rows)| json!({
                "a": uint(a),
                "rows": rows.iter().map(|r| json!({"X": rat(&r.x), "count": r.count, "ambiguous": r.ambiguous})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
    );
    Rendered { json, table: Some(table), text: None, default: Format::Csv, summary: None }
}

pub fn render_primes(r: &GoodPrimeReport) -> Rendered {
    let mut table = Table::new(&["p", "root", "norm"]);
    for g in &r.primes {
        table.rows.push(vec![g.p.to_string(), g.root.to_string(), g.norm().to_string()]);
    }
    let json = document(
        "primes",
        json!({
            "d": r.d, "a": uint(&r.a), "disc": uint(&r.disc), "delta": rat(&r.delta), "eps": rat(&r.epsilon),
            "norm_bound": r.norm_bound, "count": r.count, "ratio": enclosure(&r.ratio),
            "primes": r.primes.iter().map(|g| json!({"p": g.p, "root": g.root, "norm": g.norm()})).collect::<Vec<_>>(),
        }),
    );
    let mut text = format!("# d={} a={} D={} norm < {}\n# count {}\n{:>12} {:>12}\n", r.d, r.a, r.disc, r.norm_bound, r.count, "p", "root");
    for g in &r.primes {
        text.push_str(&format!("{:>12} {:>12}\n", g.p, g.root));
    }
    Rendered { json, table: Some(table), text: Some(text), default: Format::Default, summary: None }
}

fn witness_json(w: &Witness) -> Value {
    json!({
        "element": w.element.to_string(),
        "minimal_polynomial": w.minimal_polynomial.coeffs().iter().map(report::int).collect::<Vec<_>>(),
        "height": enclosure(&w.height),
    })
}

pub fn render_enumeration(e: &Enumeration) -> Rendered {
    let b = &e.bbox;
    let (lo, hi) = e.count_interval();
    let json = document(
        "enumerate",
        json!({
            "d": e.witnesses.first().or(e.ambiguous.first()).map(|w| w.element.field().d()),
            "X": rat(&b.x),
            "count": e.count,
            "count_interval": [lo, hi],
            "box": {
                "q_max": b.q_max, "index_bound": b.index_bound, "coeff_bounds": b.coeff_bounds,
                "certified": b.certified, "candidates": b.candidates,
            },
            "visited": e.visited,
            "witnesses": e.witnesses.iter().map(witness_json).collect::<Vec<_>>(),
            "ambiguous": e.ambiguous.iter().map(witness_json).collect::<Vec<_>>(),
        }),
    );
    let mut table = Table::new(&["element", "status", "height_lo", "height_hi"]);
    for (list, status) in [(&e.witnesses, "below"), (&e.ambiguous, "ambiguous")] {
        for w in list {
            table.rows.push(vec![w.element.to_string(), status.into(), rat_text(w.height.lo()), rat_text(w.height.hi())]);
        }
    }
    let text: String = e.witnesses.iter().map(|w| format!("{}\n", w.element)).collect();
    let summary = Some(format!("count in [{lo}, {hi}], {} candidates visited", e.visited));
    Rendered { json, table: Some(table), text: Some(text), default: Format::Default, summary }
}

pub fn render_mkl(k: &PureField, ell: u32, m: &MklEstimate) -> Rendered {
    let json = document(
        "mkl",
        json!({
            "d": k.d(), "a": uint(k.a()), "ell": ell,
            "value": enclosure(&m.value),
            "argmin": rat(&m.argmin),
            "rows": m.rows.iter().map(|(r, v)| json!({"X": rat(&r.x), "count": r.count, "ambiguous": r.ambiguous, "value": enclosure(v)})).collect::<Vec<_>>(),
        }),
    );
    let mut table = Table::new(&["X", "count", "ambiguous", "value_lo", "value_hi"]);
    for (r, v) in &m.rows {
        table.rows.push(vec![rat_text(&r.x), r.count.to_string(), r.ambiguous.to_string(), report::float(v.lo_f64()), report::float(v.hi_f64())]);
    }
    Rendered {
        text: Some(format!("{}\n", serde_json::to_string_pretty(&json).expect("serializable"))),
        json,
        table: Some(table),
        default: Format::Json,
        summary: None,
    }
}

/// Runs enumeration with an explicit worker count; used by tests comparing schedules.
pub fn count_with_workers(k: &Arc<PureField>, x: &BigRational, opts: &EnumerationOptions, workers: usize) -> pftl_core::Result<Enumeration> {
    let runner: &dyn SliceRunner = &ThreadRunner::new(workers);
    count_primitive_with(k, x, opts, runner)
}
