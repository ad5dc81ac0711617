//! Certified enumeration of primitive elements of bounded height.
//!
//! # Completeness
//!
//! Let `x` be primitive with `H_K(x) < X` and minimal polynomial of leading
//! coefficient `T`. Then `T <= M = H_K(x) < X`, `T x` is an algebraic integer and
//! `s O_K` lies in `Z[theta]`, where `s` is the index bound of
//! [`PureField::index_bound`]. Hence `x = (sum c_k theta^k) / q` in canonical form
//! with `q | sT`, so `q < sX` and `T >= ceil(q/s)`.
//!
//! Write `Y = X / ceil(q/s)`. Because `H_K(x) = T prod max(1, |x_j|)`, the conjugates
//! satisfy `prod_j max(1, |x_j|) < Y`. The real conjugate is below `Y` and each
//! complex pair below `sqrt(Y)`. Summing, `sum |x_j| <= Y + d - 1`. The inverse
//! discrete Fourier transform `c_k theta^k / q = (1/d) sum_j x_j zeta^(-jk)` then gives
//! `|c_k| <= q (Y + d - 1) / (d theta^k)`.
//!
//! The search walks `c_{d-1}, ..., c_2` through these bounds. It restricts `c_1` to
//! the strips where every complex pair can still have modulus below `sqrt(Y)`. Then
//! `c_0` runs over the exact interval where all conjugate bounds hold. Candidates
//! failing `T_0 prod max(1, |x_j|) < X` in floating point are dropped, where
//! `T_0 = max(ceil(q/s), 1/|N(x)|)` bounds `T` from below because `T |N(x)|` is a
//! nonzero integer. Every such test carries a safety margin far above the rounding error. So are non-canonical ones (`gcd > 1`)
//! and those lying in a proper subfield. Every survivor gets its exact minimal
//! polynomial and a certified height comparison.
//!
//! Work is split into one slice per denominator `q`. Slices are independent and are
//! merged in increasing `q`, coefficients in lexicographic order within a slice, so
//! results do not depend on how slices are scheduled.

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bounds::silverman_lower;
use crate::element::FieldElement;
use crate::height::{is_below, precision_ceiling, HeightContext, RealEnclosure};
use crate::interval::Fx;
use crate::local::{patterns, Pattern, SplitCache};
use crate::poly::IntPolynomial;
use crate::purefield::PureField;
use crate::{Error, Result, DEFAULT_PREC_BITS};

/// Default bound on the number of candidates a single enumeration may visit.
pub const DEFAULT_WORK_LIMIT: u64 = 100_000_000;

/// Relative safety margin applied to every floating-point bound in the search.
const SLACK: f64 = 1e-9;

/// Tuning knobs shared by all enumeration entry points.
#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    /// Starting precision of height comparisons, in bits.
    pub prec: u32,
    /// Precision at which an undecided comparison is given up and reported as ambiguous.
    pub ceiling: u32,
    /// Maximal estimated number of candidates.
    pub work_limit: u64,
    /// Keep the list of elements found, not only their number.
    pub keep_witnesses: bool,
    /// Split each denominator by the valuations of the numerator at the primes dividing
    /// it. Turning it off searches the plain box, which is much larger.
    pub local_pruning: bool,
}

impl EnumerationOptions {
    pub fn with_precision(prec: u32) -> Self {
        EnumerationOptions { prec, ceiling: precision_ceiling(prec), work_limit: DEFAULT_WORK_LIMIT, keep_witnesses: true, local_pruning: true }
    }
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self::with_precision(DEFAULT_PREC_BITS)
    }
}

/// The search region of one enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationBox {
    /// Strict height bound.
    pub x: BigRational,
    /// Largest denominator that was considered, `ceil(s X)`.
    pub q_max: u64,
    /// The index bound `s`.
    pub index_bound: u64,
    /// `B_k`, the largest `|c_k|` over all denominators.
    pub coeff_bounds: Vec<u64>,
    /// Whether the region provably contains every primitive element below `x`.
    pub certified: bool,
    /// Elements whose comparison with `x` stayed undecided.
    pub ambiguous_count: u64,
    /// Upper estimate of the number of candidates visited.
    pub candidates: u64,
}

/// An element found by the search with its certified height.
#[derive(Clone, Debug)]
pub struct Witness {
    pub element: FieldElement,
    pub minimal_polynomial: IntPolynomial,
    pub height: RealEnclosure,
}

/// Result of the work on one denominator.
#[derive(Clone, Debug, Default)]
pub struct SliceOutcome {
    pub q: u64,
    pub count: u64,
    pub visited: u64,
    pub survivors: u64,
    pub witnesses: Vec<Witness>,
    pub ambiguous: Vec<Witness>,
}

/// Executes independent slices and returns their outcomes in input order.
pub trait SliceRunner {
    fn run(&self, slices: &[u64], work: &(dyn Fn(u64) -> Result<SliceOutcome> + Sync)) -> Vec<Result<SliceOutcome>>;
}

/// Runs slices one after another on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl SliceRunner for Sequential {
    fn run(&self, slices: &[u64], work: &(dyn Fn(u64) -> Result<SliceOutcome> + Sync)) -> Vec<Result<SliceOutcome>> {
        slices.iter().map(|&q| work(q)).collect()
    }
}

/// Full output of [`count_primitive`].
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub bbox: EnumerationBox,
    /// Primitive elements certified to lie below `X`.
    pub count: u64,
    /// Those elements, in merge order, if requested.
    pub witnesses: Vec<Witness>,
    /// Elements whose height could not be separated from `X`.
    pub ambiguous: Vec<Witness>,
    pub visited: u64,
    pub survivors: u64,
}

impl Enumeration {
    /// `N'_K(X)` lies in `[count, count + ambiguous]`.
    pub fn count_interval(&self) -> (u64, u64) {
        (self.count, self.count + self.ambiguous.len() as u64)
    }
}

/// Floating-point description of the embeddings used in the inner loop.
struct Geometry {
    d: usize,
    /// `theta^k`
    pow: Vec<f64>,
    /// `cos(2 pi j k / d)` and `sin(2 pi j k / d)` for the pair representatives `j = 1..=(d-1)/2`.
    cos: Vec<Vec<f64>>,
    sin: Vec<Vec<f64>>,
    /// Steps `d/e` of the proper subfields.
    steps: Vec<usize>,
}

impl Geometry {
    fn new(field: &PureField) -> Self {
        let d = field.d() as usize;
        let theta = field.theta().mid_f64();
        let pow = (0..d).map(|k| libm::pow(theta, k as f64)).collect();
        let turn = |j: usize, k: usize| 2.0 * core::f64::consts::PI * ((j * k) % d) as f64 / d as f64;
        let pairs = 1..=(d - 1) / 2;
        let cos = pairs.clone().map(|j| (0..d).map(|k| libm::cos(turn(j, k))).collect()).collect();
        let sin = pairs.map(|j| (0..d).map(|k| libm::sin(turn(j, k))).collect()).collect();
        let steps = (2..=d).filter(|s| d % s == 0).collect();
        Geometry { d, pow, cos, sin, steps }
    }
}

/// Precomputed data of one enumeration run.
struct Plan {
    field: Arc<PureField>,
    x: BigRational,
    /// `x` rounded up to `f64`.
    x_up: f64,
    s: u64,
    q_max: u64,
    geo: Geometry,
    /// The radicand, when it fits the fast path.
    a_small: Option<i128>,
    /// Split denominators by local valuation patterns.
    local: bool,
}

/// Search data of one valuation pattern of one denominator.
struct PatternBounds {
    pattern: Pattern,
    /// Lower bound for the leading coefficient.
    t: f64,
    /// Upper bound for `prod max(1, |x_j|)`.
    y: f64,
    bounds: Vec<i64>,
}

/// Per-denominator search data.
struct SliceBounds {
    q: u64,
    patterns: Vec<PatternBounds>,
}

impl Plan {
    fn new(field: &Arc<PureField>, x: &BigRational, local: bool) -> Result<Self> {
        let s = field.index_bound().to_u64().ok_or_else(|| resource("index bound", field.index_bound().to_string(), u64::MAX.to_string()))?;
        let sx = x * BigRational::from_integer(BigInt::from(s));
        let q_max = sx
            .ceil()
            .to_integer()
            .to_u64()
            .filter(|&q| q < 1 << 40)
            .ok_or_else(|| resource("largest denominator", sx.ceil().to_string(), (1u64 << 40).to_string()))?;
        let x_up = x.to_f64().unwrap_or(f64::INFINITY) * (1.0 + 1e-12);
        if field.d() > 63 {
            return Err(Error::UnsupportedDegree { supported: 63, got: field.d() });
        }
        if !x_up.is_finite() || x_up > 1e12 {
            return Err(resource("height bound", x.to_string(), "1e12".to_string()));
        }
        Ok(Plan { field: field.clone(), x: x.clone(), x_up, s, q_max, geo: Geometry::new(field), a_small: field.a().to_i128(), local })
    }

    fn pattern_bounds(&self, q: u64, pattern: Pattern) -> PatternBounds {
        // exact: t_lower < X <= 1e12
        let t = pattern.t_lower as f64;
        let y = self.x_up / t * (1.0 + SLACK);
        let d = self.geo.d as f64;
        let bounds = self.geo.pow.iter().map(|p| libm::floor(q as f64 * (y + d - 1.0) / (d * p) * (1.0 + SLACK)) as i64).collect();
        PatternBounds { pattern, t, y, bounds }
    }

    /// Upper estimate of the candidates visited for one pattern.
    fn pattern_cardinality(&self, q: u64, pb: &PatternBounds) -> f64 {
        let g = &self.geo;
        let h = &pb.pattern.lattice.pivot;
        let r = q as f64 * libm::sqrt(pb.y);
        let count = |b: f64, h: i64| 2.0 * b / h as f64 + 1.0;
        let mut n: f64 = (2..g.d).map(|k| count(pb.bounds[k] as f64, h[k])).product();
        let strip = r / (g.pow[1] * g.sin[0][1].abs());
        n *= count((pb.bounds[1] as f64).min(libm::ceil(strip)), h[1]);
        n *= count((pb.bounds[0] as f64).min(libm::ceil(r)), h[0]);
        n
    }

    fn slices(&self) -> Vec<SliceBounds> {
        let mut cache = SplitCache::new(self.field.d(), self.field.a());
        (1..=self.q_max)
            .filter_map(|q| {
                let pats = patterns(q, self.s, &self.x, &mut cache, self.local);
                (!pats.is_empty()).then(|| SliceBounds { q, patterns: pats.into_iter().map(|p| self.pattern_bounds(q, p)).collect() })
            })
            .collect()
    }

    fn cardinality(&self, slices: &[SliceBounds]) -> f64 {
        slices.iter().flat_map(|sb| sb.patterns.iter().map(move |pb| self.pattern_cardinality(sb.q, pb))).sum()
    }

    fn describe(&self, slices: &[SliceBounds], candidates: u64) -> EnumerationBox {
        let d = self.geo.d;
        let all = || slices.iter().flat_map(|sb| sb.patterns.iter());
        let coeff_bounds = (0..d).map(|k| all().map(|pb| pb.bounds[k].max(0) as u64).max().unwrap_or(0)).collect();
        let certified = BigRational::from_integer(BigInt::from(self.q_max)) >= &self.x * BigRational::from_integer(BigInt::from(self.s));
        EnumerationBox { x: self.x.clone(), q_max: self.q_max, index_bound: self.s, coeff_bounds, certified, ambiguous_count: 0, candidates }
    }
}

fn resource(what: &'static str, requested: alloc::string::String, limit: alloc::string::String) -> Error {
    Error::Resource { what, requested, limit }
}

/// Conservative integer range `[ceil(lo), floor(hi)]` of a floating-point interval.
fn int_range(lo: f64, hi: f64) -> (i64, i64) {
    let pad = SLACK * (lo.abs() + hi.abs()) + 1e-6;
    (libm::ceil(lo - pad) as i64, libm::floor(hi + pad) as i64)
}

/// Smallest value `>= lo` congruent to `r` modulo `h`.
#[inline]
fn first_in_class(lo: i64, r: i64, h: i64) -> i64 {
    lo + (r - lo).rem_euclid(h)
}

/// Mutable state of one pattern walk.
struct Walk<'p, 'w> {
    plan: &'p Plan,
    q: u64,
    pb: &'p PatternBounds,
    opts: &'p EnumerationOptions,
    ctx: &'w mut Option<HeightContext<'p>>,
    c: Vec<i64>,
    out: &'w mut SliceOutcome,
}

impl<'p, 'w> Walk<'p, 'w> {
    /// Fixes `c_k` for `k >= 2`, outermost first. `off[i]` is the residue that
    /// coordinate `i` must have modulo its pivot, given the coordinates already fixed.
    fn outer(&mut self, k: usize, off: &[i64]) -> Result<()> {
        if k < 2 {
            return self.inner(off);
        }
        let lat = &self.pb.pattern.lattice;
        let (h, b) = (lat.pivot[k], self.pb.bounds[k]);
        let mut ck = first_in_class(-b, off[k], h);
        let mut next = off.to_vec();
        while ck <= b {
            self.c[k] = ck;
            let n = (ck - off[k]) / h;
            for i in 0..k {
                next[i] = off[i] + n * lat.basis[k][i];
            }
            self.outer(k - 1, &next)?;
            ck += h;
        }
        Ok(())
    }

    /// Walks `c_1` through the strips and `c_0` through its interval.
    fn inner(&mut self, off: &[i64]) -> Result<()> {
        let g = &self.plan.geo;
        let lat = &self.pb.pattern.lattice;
        let d = g.d;
        let q = self.q as f64;
        let y = self.pb.y;
        let pairs = g.cos.len();
        let r = q * libm::sqrt(y);
        // contributions of c_2..c_{d-1}
        let mut w0 = 0.0;
        let mut re = [0.0f64; 32];
        let mut im = [0.0f64; 32];
        for k in 2..d {
            let v = self.c[k] as f64 * g.pow[k];
            w0 += v;
            for j in 0..pairs {
                re[j] += v * g.cos[j][k];
                im[j] += v * g.sin[j][k];
            }
        }
        let b1 = self.pb.bounds[1];
        let (mut lo1, mut hi1) = (-b1, b1);
        for j in 0..pairs {
            let sl = g.pow[1] * g.sin[j][1];
            let (a, b) = ((-r - im[j]) / sl, (r - im[j]) / sl);
            let (l, h) = int_range(a.min(b), a.max(b));
            lo1 = lo1.max(l);
            hi1 = hi1.min(h);
        }
        let b0 = self.pb.bounds[0];
        let (h1, h0) = (lat.pivot[1], lat.pivot[0]);
        let t = self.pb.t;
        let mut rej = [0.0f64; 32];
        let mut imj = [0.0f64; 32];
        let mut c1 = first_in_class(lo1, off[1], h1);
        while c1 <= hi1 {
            let cur1 = c1;
            c1 += h1;
            let v = cur1 as f64 * g.pow[1];
            let w = w0 + v;
            let mut floor_prod = 1.0;
            for j in 0..pairs {
                rej[j] = re[j] + v * g.cos[j][1];
                imj[j] = im[j] + v * g.sin[j][1];
                let m = (imj[j].abs() / q).max(1.0);
                floor_prod *= m * m;
            }
            if t * floor_prod * (1.0 - SLACK) >= self.plan.x_up {
                continue;
            }
            let (mut lo0, mut hi0) = int_range(-w - q * y, -w + q * y);
            lo0 = lo0.max(-b0);
            hi0 = hi0.min(b0);
            for j in 0..pairs {
                let rad = libm::sqrt((r * r - imj[j] * imj[j]).max(0.0));
                let (l, h) = int_range(-rej[j] - rad, -rej[j] + rad);
                lo0 = lo0.max(l);
                hi0 = hi0.min(h);
            }
            self.c[1] = cur1;
            let o0 = off[0] + (cur1 - off[1]) / h1 * lat.basis[1][0];
            let mag: f64 = self.c[1..].iter().zip(&g.pow[1..]).map(|(&ck, p)| ck.unsigned_abs() as f64 * p).sum();
            let mut c0 = first_in_class(lo0, o0, h0);
            while c0 <= hi0 {
                let x0 = c0 as f64;
                c0 += h0;
                self.out.visited += 1;
                // rounding error bound for each |x_j|, far above the true one
                let err = 1e-13 * (mag + x0.abs()) / q;
                let m0 = (x0 + w).abs() / q;
                let mut prod = m0.max(1.0);
                let mut norm = m0 + err;
                for j in 0..pairs {
                    let m = libm::hypot(x0 + rej[j], imj[j]) / q;
                    prod *= m.max(1.0) * m.max(1.0);
                    norm *= (m + err) * (m + err);
                }
                // T >= t and T |N(x)| = |a_0| >= 1
                if t.max(1.0 / norm) * prod * (1.0 - SLACK) >= self.plan.x_up {
                    continue;
                }
                self.c[0] = x0 as i64;
                if !self.pb.pattern.admits(&self.c) || !self.canonical_and_primitive() {
                    continue;
                }
                self.out.survivors += 1;
                self.decide(prod)?;
            }
        }
        Ok(())
    }

    fn canonical_and_primitive(&self) -> bool {
        let mut g = self.q;
        for &ck in &self.c {
            g = g.gcd(&ck.unsigned_abs());
            if g == 1 {
                break;
            }
        }
        if g != 1 {
            return false;
        }
        !self.plan.geo.steps.iter().any(|&st| self.c.iter().enumerate().all(|(k, &ck)| ck == 0 || k % st == 0))
    }

    /// Exact leading coefficient, then a certified height comparison if still needed.
    fn decide(&mut self, prod: f64) -> Result<()> {
        let plan = self.plan;
        let minpoly = match scaled_charpoly_i128(&self.c, self.q, plan.a_small) {
            Some(coeffs) => {
                if coeffs[coeffs.len() - 1] as f64 * prod * (1.0 - SLACK) >= plan.x_up {
                    return Ok(());
                }
                IntPolynomial::new(coeffs.into_iter().map(BigInt::from).collect()).expect("nonzero polynomial")
            }
            None => {
                let m = scaled_minimal_polynomial(&self.c, self.q, plan.field.a());
                if m.leading().to_f64().unwrap_or(f64::INFINITY) * prod * (1.0 - SLACK) >= plan.x_up {
                    return Ok(());
                }
                m
            }
        };
        let num: Vec<BigInt> = self.c.iter().map(|&v| BigInt::from(v)).collect();
        let element = FieldElement::new(plan.field.clone(), num, BigInt::from(self.q))?;
        let ctx = self.ctx.get_or_insert_with(|| HeightContext::new(&plan.field));
        let (decision, height) = ctx.below(&element, &minpoly, &plan.x, self.opts.prec, self.opts.ceiling)?;
        let w = || Witness { element: element.clone(), minimal_polynomial: minpoly.clone(), height: height.clone() };
        match decision {
            Some(true) => {
                self.out.count += 1;
                if self.opts.keep_witnesses {
                    self.out.witnesses.push(w());
                }
            }
            Some(false) => {}
            None => self.out.ambiguous.push(w()),
        }
        Ok(())
    }
}

/// [`scaled_minimal_polynomial`] in checked `i128` arithmetic; `None` on overflow.
fn scaled_charpoly_i128(c: &[i64], q: u64, a: Option<i128>) -> Option<Vec<i128>> {
    let a = a?;
    let d = c.len();
    let gamma: Vec<i128> = c.iter().map(|&v| v as i128).collect();
    let mut power = gamma.clone();
    let mut p = [0i128; 64];
    for k in 1..=d {
        if k > 1 {
            let mut next = [0i128; 64];
            for (i, &x) in power.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in gamma.iter().enumerate() {
                    let t = x.checked_mul(y)?;
                    let (idx, t) = if i + j < d { (i + j, t) } else { (i + j - d, t.checked_mul(a)?) };
                    next[idx] = next[idx].checked_add(t)?;
                }
            }
            power.copy_from_slice(&next[..d]);
        }
        p[k] = power[0].checked_mul(d as i128)?;
    }
    let mut e = [0i128; 64];
    e[0] = 1;
    for k in 1..=d {
        let mut acc = 0i128;
        for i in 1..=k {
            let term = e[k - i].checked_mul(p[i])?;
            acc = if i % 2 == 1 { acc.checked_add(term)? } else { acc.checked_sub(term)? };
        }
        e[k] = acc / k as i128;
    }
    let q = q as i128;
    let mut coeffs = vec![0i128; d + 1];
    let mut qp = 1i128;
    let mut g = 0i128;
    for (i, slot) in coeffs.iter_mut().enumerate() {
        let k = d - i;
        let ek = if k % 2 == 0 { e[k] } else { -e[k] };
        *slot = ek.checked_mul(qp)?;
        g = g.gcd(slot);
        if i < d {
            qp = qp.checked_mul(q)?;
        }
    }
    for x in coeffs.iter_mut() {
        *x /= g;
    }
    Some(coeffs)
}

/// `prod_{i} (x - sigma_i(gamma) / q)` scaled to a primitive integer polynomial, where
/// `gamma = sum c_k theta^k` is primitive. Computed from power sums of `gamma`.
fn scaled_minimal_polynomial(c: &[i64], q: u64, a: &BigUint) -> IntPolynomial {
    let d = c.len();
    let a = BigInt::from(a.clone());
    let gamma: Vec<BigInt> = c.iter().map(|&v| BigInt::from(v)).collect();
    // power sums p_k = Tr(gamma^k) = d * (constant coordinate of gamma^k)
    let mut power = gamma.clone();
    let mut p = Vec::with_capacity(d + 1);
    p.push(BigInt::from(d));
    for k in 1..=d {
        if k > 1 {
            power = mul_mod(&power, &gamma, &a);
        }
        p.push(&power[0] * BigInt::from(d));
    }
    // Newton: k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i
    let mut e = vec![BigInt::one()];
    for k in 1..=d {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &p[i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / BigInt::from(k));
    }
    // char poly of gamma: sum_k (-1)^k e_k y^(d-k); substitute y = q x
    let q = BigInt::from(q);
    let mut coeffs = vec![BigInt::zero(); d + 1];
    let mut qp = BigInt::one();
    for i in 0..=d {
        let k = d - i;
        let ek = if k % 2 == 0 { e[k].clone() } else { -&e[k] };
        coeffs[i] = ek * &qp;
        qp *= &q;
    }
    IntPolynomial::new(coeffs).expect("nonzero polynomial").canonical()
}

fn mul_mod(x: &[BigInt], y: &[BigInt], a: &BigInt) -> Vec<BigInt> {
    let d = x.len();
    let mut out = vec![BigInt::zero(); d];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            let t = xi * yj;
            if i + j < d {
                out[i + j] += t;
            } else {
                out[i + j - d] += t * a;
            }
        }
    }
    out
}

/// The search region for `N'_K(x)` together with its estimated cardinality.
pub fn enumeration_box(field: &Arc<PureField>, x: &BigRational) -> Result<EnumerationBox> {
    if *x <= BigRational::one() {
        return Ok(trivial_box(field, x));
    }
    let plan = Plan::new(field, x, true)?;
    let slices = plan.slices();
    let card = plan.cardinality(&slices);
    Ok(plan.describe(&slices, card.min(u64::MAX as f64) as u64))
}

fn trivial_box(field: &PureField, x: &BigRational) -> EnumerationBox {
    EnumerationBox {
        x: x.clone(),
        q_max: 1,
        index_bound: field.index_bound().to_u64().unwrap_or(u64::MAX),
        coeff_bounds: vec![0; field.d() as usize],
        certified: true,
        ambiguous_count: 0,
        candidates: 0,
    }
}

/// Counts primitive elements of height below `x`, on the calling thread.
pub fn count_primitive(field: &Arc<PureField>, x: &BigRational, opts: &EnumerationOptions) -> Result<Enumeration> {
    count_primitive_with(field, x, opts, &Sequential)
}

/// [`count_primitive`] with a caller-supplied slice executor.
pub fn count_primitive_with(field: &Arc<PureField>, x: &BigRational, opts: &EnumerationOptions, runner: &dyn SliceRunner) -> Result<Enumeration> {
    if *x <= BigRational::one() {
        return Ok(Enumeration { bbox: trivial_box(field, x), count: 0, witnesses: Vec::new(), ambiguous: Vec::new(), visited: 0, survivors: 0 });
    }
    let plan = Plan::new(field, x, opts.local_pruning)?;
    let slices = plan.slices();
    let card = plan.cardinality(&slices);
    if card > opts.work_limit as f64 {
        return Err(resource("candidate count", alloc::format!("{card:.0}"), opts.work_limit.to_string()));
    }
    let mut bbox = plan.describe(&slices, card as u64);
    let qs: Vec<u64> = slices.iter().map(|sb| sb.q).collect();
    let work = |q: u64| -> Result<SliceOutcome> {
        let sb = &slices[qs.binary_search(&q).expect("known slice")];
        let mut out = SliceOutcome { q, ..Default::default() };
        let mut ctx = None;
        for pb in &sb.patterns {
            let mut walk = Walk { plan: &plan, q, pb, opts, ctx: &mut ctx, c: vec![0; plan.geo.d], out: &mut out };
            let off = vec![0; plan.geo.d];
            walk.outer(plan.geo.d - 1, &off)?;
        }
        out.witnesses.sort_by(|a, b| a.element.numerators().cmp(b.element.numerators()));
        out.ambiguous.sort_by(|a, b| a.element.numerators().cmp(b.element.numerators()));
        Ok(out)
    };
    let mut result = Enumeration { bbox: bbox.clone(), count: 0, witnesses: Vec::new(), ambiguous: Vec::new(), visited: 0, survivors: 0 };
    for outcome in runner.run(&qs, &work) {
        let o = outcome?;
        result.count += o.count;
        result.visited += o.visited;
        result.survivors += o.survivors;
        result.witnesses.extend(o.witnesses);
        result.ambiguous.extend(o.ambiguous);
    }
    bbox.ambiguous_count = result.ambiguous.len() as u64;
    result.bbox = bbox;
    Ok(result)
}

/// Outcome of [`min_generator`].
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum MinGenerator {
    /// `eta` encloses `eta(K)` and `witness` attains it. Every primitive element below
    /// `searched_below` was enumerated, and none exists below `empty_below`.
    Found { eta: RealEnclosure, witness: Witness, searched_below: BigRational, empty_below: BigRational },
    /// No primitive element below `lower`, which is the largest bound searched.
    AboveCap { lower: BigRational },
}

/// Minimal height of a generator, doubling the search bound from the classical lower
/// bound until an element appears or `cap` is exceeded.
///
/// The classical bound only picks the first search radius. It is not trusted as a
/// proof of emptiness: the stated constant `1/2` fails for some fields (in
/// `Q(150^(1/3))` the element `(6/5)^(1/3)` has height 6, below `D^(1/4) / 2 = 6.24`),
/// so every reported bound comes from an actual enumeration.
pub fn min_generator(field: &Arc<PureField>, cap: &BigRational, opts: &EnumerationOptions) -> Result<MinGenerator> {
    min_generator_with(field, cap, opts, &Sequential)
}

/// [`min_generator`] with a caller-supplied slice executor.
pub fn min_generator_with(field: &Arc<PureField>, cap: &BigRational, opts: &EnumerationOptions, runner: &dyn SliceRunner) -> Result<MinGenerator> {
    let one = BigRational::one();
    if *cap <= one {
        return Err(Error::Domain("the height cap must exceed 1".into()));
    }
    let start = dyadic_floor(silverman_lower(field.disc(), field.d()).lo(), 16).max(one.clone());
    let mut empty_below = one.clone();
    let mut x = start.min(cap.clone());
    let two = BigRational::from_integer(2.into());
    let opts = EnumerationOptions { keep_witnesses: true, ..opts.clone() };
    loop {
        let e = count_primitive_with(field, &x, &opts, runner)?;
        let mut found: Vec<Witness> = e.witnesses;
        found.extend(e.ambiguous);
        if !found.is_empty() {
            let lo = found.iter().map(|w| w.height.lo().clone()).min().expect("nonempty");
            let best = found.iter().min_by(|a, b| witness_order(a, b)).expect("nonempty");
            let eta = RealEnclosure::new(lo, best.height.hi().clone());
            return Ok(MinGenerator::Found { eta, witness: best.clone(), searched_below: x, empty_below });
        }
        empty_below = x.clone();
        if x >= *cap {
            return Ok(MinGenerator::AboveCap { lower: x });
        }
        x = (&x * &two).min(cap.clone());
    }
}

/// Smallest upper height bound first, then smaller denominator, then a positive
/// leading coordinate, then lexicographic coordinates.
fn witness_order(a: &Witness, b: &Witness) -> Ordering {
    let neg = |w: &Witness| w.element.numerators().iter().rev().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
    a.height
        .hi()
        .cmp(b.height.hi())
        .then_with(|| a.element.denominator().cmp(b.element.denominator()))
        .then_with(|| neg(a).cmp(&neg(b)))
        .then_with(|| a.element.numerators().cmp(b.element.numerators()))
}

fn dyadic_floor(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    BigRational::new((x * BigRational::from_integer(scale.clone())).floor().to_integer(), scale)
}

/// Number of pairs `(b_1, b_0)` with `gcd = 1`, `b_0 >= 1`, `b_1 != 0` and
/// `max(|b_1|, b_0) < t`.
pub fn coprime_pair_count(t: &BigRational) -> u64 {
    let m = strict_floor(t);
    let mut n = 0u64;
    for b0 in 1..=m {
        for b1 in 1..=m {
            if b0.gcd(&b1) == 1 {
                n += 2;
            }
        }
    }
    n
}

/// Largest integer strictly below `t` (and at least 0).
fn strict_floor(t: &BigRational) -> u64 {
    let f = t.ceil().to_integer() - BigInt::one();
    f.to_u64().unwrap_or(if f.is_negative() { 0 } else { u64::MAX })
}

/// The multiples `alpha * b_1 / b_0` with `gcd(b_1, b_0) = 1` and `0 < max(|b_1|, b_0) < t`,
/// ordered by `max(|b_1|, b_0)`, then `b_0`, then `b_1`.
pub fn rational_multiples(field: &Arc<PureField>, alpha: &FieldElement, t: &BigRational) -> Result<Vec<FieldElement>> {
    if **alpha.field() != **field {
        return Err(Error::MixedFields);
    }
    if !alpha.is_primitive_by_support() {
        return Err(Error::Domain(alloc::format!("{alpha} is not a primitive element")));
    }
    let m = strict_floor(t);
    if m > 1 << 16 {
        return Err(resource("multiplier bound", m.to_string(), (1u64 << 16).to_string()));
    }
    let mut out = Vec::new();
    for top in 1..=m as i64 {
        let mut pairs = Vec::new();
        for b0 in 1..=top {
            for b1 in -top..=top {
                if b1 != 0 && b1.abs().max(b0) == top && b0.gcd(&b1) == 1 {
                    pairs.push((b0, b1));
                }
            }
        }
        for (b0, b1) in pairs {
            out.push(alpha.scale(&BigRational::new(b1.into(), b0.into())));
        }
    }
    Ok(out)
}

/// One row of a growth table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthRow {
    pub x: BigRational,
    pub count: u64,
    pub ambiguous: u64,
}

/// `N'_K(X)` on a list of bounds from a single enumeration at the largest one.
pub fn growth_curve(field: &Arc<PureField>, xs: &[BigRational], opts: &EnumerationOptions) -> Result<Vec<GrowthRow>> {
    growth_curve_with(field, xs, opts, &Sequential)
}

/// [`growth_curve`] with a caller-supplied slice executor.
pub fn growth_curve_with(field: &Arc<PureField>, xs: &[BigRational], opts: &EnumerationOptions, runner: &dyn SliceRunner) -> Result<Vec<GrowthRow>> {
    let Some(top) = xs.iter().max() else { return Ok(Vec::new()) };
    let opts = EnumerationOptions { keep_witnesses: true, ..opts.clone() };
    let e = count_primitive_with(field, top, &opts, runner)?;
    let mut found: Vec<Witness> = e.witnesses;
    found.extend(e.ambiguous);
    let mut ctx = HeightContext::new(field);
    let mut rows = Vec::with_capacity(xs.len());
    for x in xs {
        let (mut count, mut ambiguous) = (0, 0);
        for w in found.iter_mut() {
            let mut decision = is_below(&w.height, x);
            if decision.is_none() {
                let (dec, h) = ctx.below(&w.element, &w.minimal_polynomial, x, opts.ceiling, opts.ceiling)?;
                if h.width() < w.height.width() {
                    w.height = h;
                }
                decision = dec;
            }
            match decision {
                Some(true) => count += 1,
                Some(false) => {}
                None => ambiguous += 1,
            }
        }
        rows.push(GrowthRow { x: x.clone(), count, ambiguous });
    }
    Ok(rows)
}

/// Grid estimate of `M_{K,l} = inf_X X^(-1/l) (1 + N'_K(X))`.
#[derive(Clone, Debug)]
pub struct MklEstimate {
    /// Encloses the minimum over the grid, an upper bound for the true infimum.
    pub value: RealEnclosure,
    pub argmin: BigRational,
    /// Per grid point: the growth row and the enclosure of `X^(-1/l) (1 + N'_K(X))`.
    pub rows: Vec<(GrowthRow, RealEnclosure)>,
}

pub fn empirical_mkl(field: &Arc<PureField>, ell: u32, grid: &[BigRational], opts: &EnumerationOptions) -> Result<MklEstimate> {
    empirical_mkl_with(field, ell, grid, opts, &Sequential)
}

/// [`empirical_mkl`] with a caller-supplied slice executor.
pub fn empirical_mkl_with(
    field: &Arc<PureField>,
    ell: u32,
    grid: &[BigRational],
    opts: &EnumerationOptions,
    runner: &dyn SliceRunner,
) -> Result<MklEstimate> {
    if ell == 0 {
        return Err(Error::Domain("ell must be positive".into()));
    }
    if grid.is_empty() {
        return Err(Error::Domain("the grid is empty".into()));
    }
    if grid.iter().any(|x| *x <= BigRational::one()) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("grid must be strictly increasing and above 1".into()));
    }
    let rows = growth_curve_with(field, grid, opts, runner)?;
    let prec = opts.prec + 32;
    let one = Fx::from_i64(1, prec);
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let inv = one.div(&Fx::from_ratio(&row.x, prec).root(ell)).expect("positive root").to_enclosure();
        let lo = inv.lo() * BigRational::from_integer((1 + row.count).into());
        let hi = inv.hi() * BigRational::from_integer((1 + row.count + row.ambiguous).into());
        out.push((row, RealEnclosure::new(lo, hi)));
    }
    let (best_row, best) = out.iter().min_by(|a, b| a.1.hi().cmp(b.1.hi())).expect("nonempty grid");
    let lo = out.iter().map(|(_, v)| v.lo().clone()).min().expect("nonempty grid");
    let value = RealEnclosure::new(lo, best.hi().clone());
    Ok(MklEstimate { value, argmin: best_row.x.clone(), rows: out })
}
