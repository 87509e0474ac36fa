//! Seeded search over polynomial families for OPAs vanishing in the bidisk.
//!
//! Every record is a pure function of `(family, seed, index, n_max, config)`:
//! the generator for record `i` is ChaCha8 seeded with `seed` on stream `i`
//! (stream `i / 2` for the paired family), so records can be produced in any
//! order and a partially written output can be resumed.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detrep::{expand_coefficients, sample_strict_contraction, DetRep};
use crate::error::{OpaError, Result};
use crate::gaussian::{format_rational, rationalize, GaussianRational, Rational};
use crate::opa::{one_variable_factor_roots, orthogonality_residual, p0_product_check, proportionality_constant, solve_opa};
use crate::poly2::{BiPoly, ExponentPair};
use crate::zeros::{certify_open_zero, classify_bidisk, finite_or_null, ClassifyConfig, Verdict, ZeroCertificate};

pub const DEFAULT_HEIGHT: i64 = 8;
pub const DEFAULT_N_MAX: usize = 5;
/// Draws with `f(0) = 0` are retried at most this many times.
const MAX_REDRAWS: u32 = 1000;
/// Records computed per parallel batch.
const BATCH: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Dense bidegree `(n, m)` with real rational coefficients.
    Dense { n: u32, m: u32 },
    /// Pairs `q·f̃` and `reflect(q)·f̃` at indices `2k` and `2k + 1`.
    Hound,
    /// Products `g(z) h(w)`.
    Separated,
    /// Coarsely rationalized and perturbed expansions of strict contractions.
    Detrep,
}

impl FromStr for Family {
    type Err = OpaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hound" => Ok(Family::Hound),
            "separated" => Ok(Family::Separated),
            "detrep" => Ok(Family::Detrep),
            _ => {
                let digits = s.strip_prefix("dense").filter(|d| d.len() == 2 && d.bytes().all(|b| b.is_ascii_digit()));
                match digits {
                    Some(d) => {
                        let n = u32::from(d.as_bytes()[0] - b'0');
                        let m = u32::from(d.as_bytes()[1] - b'0');
                        Ok(Family::Dense { n, m })
                    }
                    None => Err(OpaError::UnknownFamily(s.to_string())),
                }
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Dense { n, m } => write!(f, "dense{n}{m}"),
            Family::Hound => f.write_str("hound"),
            Family::Separated => f.write_str("separated"),
            Family::Detrep => f.write_str("detrep"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSpec {
    pub family: Family,
    pub seed: u64,
    pub n_max: usize,
    /// Bound on numerators and denominators of drawn coefficients.
    pub height: i64,
    pub config: ClassifyConfig,
}

impl ScanSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        Self { family, seed, n_max: DEFAULT_N_MAX, height: DEFAULT_HEIGHT, config: ClassifyConfig::default() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub strong_violation: bool,
    pub weak_violation_candidate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpaEntry {
    pub n: usize,
    pub poly: BiPoly,
    pub opa_class: Verdict,
    #[serde(with = "finite_or_null")]
    pub margin: f64,
    pub factor_root_moduli: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairInfo {
    pub pair: u64,
    pub member: u8,
    /// Every OPA of this member is an exact constant multiple of the partner's.
    pub opa_proportional: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecheckStatus {
    /// Certified zero in the open bidisk.
    ConfirmedOpen,
    /// Exact zero at a Gaussian rational point of the closed bidisk.
    ConfirmedClosed,
    /// Neither succeeded; the flag contribution is dropped.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecheckEntry {
    pub n: usize,
    pub float_class: Verdict,
    pub status: RecheckStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ZeroCertificate>,
    /// `[[re z, im z], [re w, im w]]` where the OPA vanishes exactly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_zero: Option<[[String; 2]; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recheck {
    /// Flags as raised by the floating point classifier.
    pub float_flags: Flags,
    /// A fresh exact solve reproduced the OPA with zero orthogonality residual.
    pub opa_recomputed_exact: bool,
    pub entries: Vec<RecheckEntry>,
    /// Some float flag did not survive.
    pub downgraded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub family_id: String,
    pub seed: u64,
    pub index: u64,
    pub redraws: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairInfo>,
    pub f: BiPoly,
    pub f_class: Verdict,
    #[serde(with = "finite_or_null")]
    pub f_margin: f64,
    pub opa_results: Vec<OpaEntry>,
    /// Final flags; only set when backed by an exact recheck artifact.
    pub flags: Flags,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recheck: Option<Recheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0_product_holds: Option<bool>,
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn random_rational(rng: &mut ChaCha8Rng, height: i64) -> GaussianRational {
    let num = rng.gen_range(-height..=height);
    let den = rng.gen_range(1..=height);
    GaussianRational::ratio(num, den)
}

fn dense(rng: &mut ChaCha8Rng, n: u32, m: u32, height: i64) -> BiPoly {
    let mut p = BiPoly::zero();
    for a in 0..=n {
        for b in 0..=m {
            p.add_term(ExponentPair::new(a, b), random_rational(rng, height));
        }
    }
    p
}

/// Draws until `accept` holds, counting rejected draws.
fn draw_until<T>(
    rng: &mut ChaCha8Rng,
    what: &str,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> T,
    accept: impl Fn(&T) -> bool,
) -> Result<(T, u32)> {
    for redraws in 0..=MAX_REDRAWS {
        let x = draw(rng);
        if accept(&x) {
            return Ok((x, redraws));
        }
        log::debug!("rejected {what} draw {redraws}");
    }
    Err(OpaError::InvalidArgument(format!("no acceptable {what} after {MAX_REDRAWS} draws")))
}

fn nonzero_at_origin(p: &BiPoly) -> bool {
    !p.constant_term().is_zero()
}

fn hound_factors(spec: &ScanSpec, pair: u64) -> Result<(BiPoly, BiPoly, u32)> {
    let mut rng = rng_for(spec.seed, pair);
    let corner = ExponentPair::new(1, 1);
    let (q, r1) = draw_until(&mut rng, "q", |r| dense(r, 1, 1, spec.height), |q| {
        nonzero_at_origin(q) && !q.coeff(corner).is_zero()
    })?;
    let (ft, r2) = draw_until(&mut rng, "f", |r| dense(r, 1, 1, spec.height), nonzero_at_origin)?;
    Ok((q, ft, r1 + r2))
}

fn detrep_candidate(rng: &mut ChaCha8Rng, height: i64) -> Result<BiPoly> {
    let dim = rng.gen_range(2..=3usize);
    let cap = rng.gen_range(0.5..0.95);
    let c = sample_strict_contraction(dim, rng.gen(), cap)?;
    let rep = DetRep::new(Complex64::one(), c, (dim - 1, 1))?;
    let coeffs = expand_coefficients(&rep)?;
    let coarse = 1.0 / (height * height) as f64;
    let mut p = BiPoly::zero();
    for (&(a, b), v) in &coeffs {
        let re = rationalize(v.re, coarse).unwrap_or_else(Rational::zero);
        let im = rationalize(v.im, coarse).unwrap_or_else(Rational::zero);
        p.add_term(ExponentPair::new(a, b), GaussianRational::new(re, im));
    }
    // One term nudged by a small rational.
    let keys: Vec<ExponentPair> = p.terms().map(|(e, _)| *e).collect();
    let e = keys[rng.gen_range(0..keys.len())];
    let delta = Rational::new(rng.gen_range(-2..=2i64).into(), (height * height).into());
    p.add_term(e, GaussianRational::real(delta));
    Ok(p)
}

/// The polynomial for record `index`, the number of redraws, and the pair
/// partner for the paired family.
pub fn draw_candidate(spec: &ScanSpec, index: u64) -> Result<(BiPoly, u32, Option<BiPoly>)> {
    let h = spec.height;
    if h < 1 {
        return Err(OpaError::InvalidArgument("height must be positive".into()));
    }
    match spec.family {
        Family::Dense { n, m } => {
            let mut rng = rng_for(spec.seed, index);
            let (f, r) = draw_until(&mut rng, "f", |r| dense(r, n, m, h), nonzero_at_origin)?;
            Ok((f, r, None))
        }
        Family::Separated => {
            let mut rng = rng_for(spec.seed, index);
            let (g, r1) = draw_until(&mut rng, "g", |r| dense(r, 2, 0, h), nonzero_at_origin)?;
            let (hw, r2) = draw_until(&mut rng, "h", |r| dense(r, 0, 2, h), nonzero_at_origin)?;
            Ok((g.multiply(&hw), r1 + r2, None))
        }
        Family::Hound => {
            let (q, ft, r) = hound_factors(spec, index / 2)?;
            let a = q.multiply(&ft);
            let b = q.reflect()?.multiply(&ft);
            Ok(if index.is_multiple_of(2) { (a, r, Some(b)) } else { (b, r, Some(a)) })
        }
        Family::Detrep => {
            let mut rng = rng_for(spec.seed, index);
            let mut redraws = 0;
            loop {
                let p = detrep_candidate(&mut rng, h)?;
                if nonzero_at_origin(&p) {
                    return Ok((p, redraws, None));
                }
                log::debug!("rejected detrep draw {redraws}");
                redraws += 1;
                if redraws > MAX_REDRAWS {
                    return Err(OpaError::InvalidArgument("no acceptable detrep draw".into()));
                }
            }
        }
    }
}

fn pair_strings(c: &GaussianRational) -> [String; 2] {
    [format_rational(&c.re), format_rational(&c.im)]
}

/// Exact confirmation of a zero of `p` near a float witness.
pub fn confirm_zero(p: &BiPoly, z: Complex64, w: Complex64) -> (RecheckStatus, Option<ZeroCertificate>, Option<[[String; 2]; 2]>) {
    let zs = GaussianRational::from_f64_approx(z, 60);
    let ws = GaussianRational::from_f64_approx(w, 60);
    let one = Rational::one();
    if zs.norm_sq() <= one && ws.norm_sq() <= one && p.evaluate(&zs, &ws).is_zero() {
        let status = if zs.norm_sq() < one && ws.norm_sq() < one {
            RecheckStatus::ConfirmedOpen
        } else {
            RecheckStatus::ConfirmedClosed
        };
        return (status, None, Some([pair_strings(&zs), pair_strings(&ws)]));
    }
    match certify_open_zero(p, z, w) {
        Some(cert) => (RecheckStatus::ConfirmedOpen, Some(cert), None),
        None => (RecheckStatus::Inconclusive, None, None),
    }
}

fn recheck_entry(f: &BiPoly, entry: &OpaEntry, witness: Option<(Complex64, Complex64)>) -> Result<(RecheckEntry, bool)> {
    let fresh = solve_opa(f, entry.n)?;
    let exact = fresh.poly == entry.poly && orthogonality_residual(f, &fresh)?.is_zero();
    let (status, certificate, exact_zero) = match witness {
        Some((z, w)) => confirm_zero(&fresh.poly, z, w),
        None => (RecheckStatus::Inconclusive, None, None),
    };
    Ok((RecheckEntry { n: entry.n, float_class: entry.opa_class, status, certificate, exact_zero }, exact))
}

/// `(f verdict, f margin, OPA entries, final flags, recheck)`.
pub type Analysis = (Verdict, f64, Vec<OpaEntry>, Flags, Option<Recheck>);

/// Classifies `f` and its OPAs of degree `0..=n_max`, then rechecks any flag exactly.
pub fn analyze(f: &BiPoly, n_max: usize, cfg: &ClassifyConfig) -> Result<Analysis> {
    if !nonzero_at_origin(f) {
        return Err(OpaError::VanishesAtOrigin);
    }
    let f_report = classify_bidisk(f, cfg)?;
    let mut entries = Vec::with_capacity(n_max + 1);
    let mut witnesses = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let opa = solve_opa(f, n)?;
        let report = classify_bidisk(&opa.poly, cfg)?;
        let moduli = one_variable_factor_roots(&opa.poly)?.moduli();
        witnesses.push(report.witness.map(|w| (w.z(), w.w())));
        entries.push(OpaEntry {
            n,
            poly: opa.poly,
            opa_class: report.verdict,
            margin: report.margin,
            factor_root_moduli: moduli,
        });
    }
    let strongly_stable = f_report.verdict == Verdict::StronglyStable;
    let float_flags = Flags {
        strong_violation: entries.iter().any(|e| e.opa_class.has_closed_zero()),
        weak_violation_candidate: strongly_stable && entries.iter().any(|e| e.opa_class == Verdict::ZeroInOpenBidisk),
    };
    if float_flags == Flags::default() {
        return Ok((f_report.verdict, f_report.margin, entries, float_flags, None));
    }

    let mut rechecked = Vec::new();
    let mut all_exact = true;
    for (entry, witness) in entries.iter().zip(&witnesses) {
        if entry.opa_class.has_closed_zero() {
            let (r, exact) = recheck_entry(f, entry, *witness)?;
            all_exact &= exact;
            rechecked.push(r);
        }
    }
    let confirmed = |s: RecheckStatus| s != RecheckStatus::Inconclusive;
    let flags = Flags {
        strong_violation: all_exact && rechecked.iter().any(|r| confirmed(r.status)),
        weak_violation_candidate: all_exact
            && float_flags.weak_violation_candidate
            && rechecked.iter().any(|r| r.status == RecheckStatus::ConfirmedOpen),
    };
    let recheck = Recheck { float_flags, opa_recomputed_exact: all_exact, entries: rechecked, downgraded: flags != float_flags };
    Ok((f_report.verdict, f_report.margin, entries, flags, Some(recheck)))
}

fn opas_proportional(f: &BiPoly, g: &BiPoly, n_max: usize) -> Result<bool> {
    for n in 0..=n_max {
        if proportionality_constant(&solve_opa(f, n)?.poly, &solve_opa(g, n)?.poly).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds record `index` of the scan.
pub fn scan_record(spec: &ScanSpec, index: u64) -> Result<ScanRecord> {
    let (f, redraws, partner) = draw_candidate(spec, index)?;
    let (f_class, f_margin, opa_results, flags, recheck) = analyze(&f, spec.n_max, &spec.config)?;
    let pair = match partner {
        Some(g) => Some(PairInfo {
            pair: index / 2,
            member: (index % 2) as u8,
            opa_proportional: opas_proportional(&f, &g, spec.n_max)?,
        }),
        None => None,
    };
    let p0_product_holds = if spec.family == Family::Separated {
        let (g, h) = split_separated(&f)?;
        Some(p0_product_check(&g, &h)?.holds())
    } else {
        None
    };
    Ok(ScanRecord {
        family_id: spec.family.to_string(),
        seed: spec.seed,
        index,
        redraws,
        pair,
        f,
        f_class,
        f_margin,
        opa_results,
        flags,
        recheck,
        p0_product_holds,
    })
}

/// Splits `g(z) h(w)` with `h(0) = 1`.
fn split_separated(f: &BiPoly) -> Result<(BiPoly, BiPoly)> {
    let f00 = f.constant_term();
    let inv = f00.inv().ok_or(OpaError::VanishesAtOrigin)?;
    let g = BiPoly::from_terms(f.terms().filter(|(e, _)| e.b == 0).map(|(e, c)| (*e, c.clone())));
    let h = BiPoly::from_terms(f.terms().filter(|(e, _)| e.a == 0).map(|(e, c)| (*e, c * &inv)));
    if g.multiply(&h) != *f {
        return Err(OpaError::NotSeparated("scan candidate"));
    }
    Ok((g, h))
}

/// Records `start..start + count`, computed in parallel batches and handed to
/// `sink` in index order.
pub fn run_scan<F>(spec: &ScanSpec, start: u64, count: u64, mut sink: F) -> Result<()>
where
    F: FnMut(&ScanRecord) -> Result<()>,
{
    let end = start.checked_add(count).ok_or_else(|| OpaError::InvalidArgument("index overflow".into()))?;
    let mut lo = start;
    while lo < end {
        let hi = (lo + BATCH).min(end);
        let batch: Vec<Result<ScanRecord>> = (lo..hi).into_par_iter().map(|i| scan_record(spec, i)).collect();
        for r in batch {
            sink(&r?)?;
        }
        log::info!("{} records done", hi - start);
        lo = hi;
    }
    Ok(())
}

pub fn collect_scan(spec: &ScanSpec, count: u64) -> Result<Vec<ScanRecord>> {
    let mut out = Vec::new();
    run_scan(spec, 0, count, |r| {
        out.push(r.clone());
        Ok(())
    })?;
    Ok(out)
}

pub fn record_line(r: &ScanRecord) -> Result<String> {
    Ok(serde_json::to_string(r)?)
}

/// Where to resume an existing JSONL output: the next index and the byte
/// length of the complete, consistent prefix (a torn last line is dropped).
pub fn resume_point(existing: &str, spec: &ScanSpec) -> Result<(u64, usize)> {
    let family = spec.family.to_string();
    let mut next = 0u64;
    let mut valid = 0usize;
    for line in existing.split_inclusive('\n') {
        if !line.ends_with('\n') {
            break;
        }
        let rec: ScanRecord = match serde_json::from_str(line.trim_end()) {
            Ok(r) => r,
            Err(_) => break,
        };
        if rec.family_id != family || rec.seed != spec.seed {
            return Err(OpaError::InvalidArgument(format!(
                "existing output belongs to family {} seed {}",
                rec.family_id, rec.seed
            )));
        }
        if rec.index != next {
            return Err(OpaError::InvalidArgument(format!("expected index {next}, found {}", rec.index)));
        }
        next += 1;
        valid += line.len();
    }
    Ok((next, valid))
}

pub fn parse_records(text: &str) -> Result<Vec<ScanRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| OpaError::Parse(format!("line {}: {e}", i + 1))))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FamilySummary {
    pub family_id: String,
    pub records: u64,
    pub f_verdicts: BTreeMap<String, u64>,
    pub opa_verdicts: BTreeMap<String, u64>,
    pub strong_violations: u64,
    pub weak_violation_candidates: u64,
    pub float_flagged: u64,
    pub downgraded: u64,
    pub pairs: u64,
    pub pairs_agreeing: u64,
    /// Percentage of complete pairs with identical flags; `None` without pairs.
    pub pair_agreement: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ScanReport {
    pub total_records: u64,
    pub families: Vec<FamilySummary>,
    /// Records whose weak flag survived the exact recheck.
    pub surviving_weak_candidates: Vec<(String, u64)>,
}

fn verdict_name(v: Verdict) -> String {
    format!("{v:?}")
}

pub fn report(records: &[ScanRecord]) -> ScanReport {
    let mut fams: BTreeMap<String, FamilySummary> = BTreeMap::new();
    let mut pairs: BTreeMap<(String, u64, u64), Vec<Flags>> = BTreeMap::new();
    let mut survivors = Vec::new();
    for r in records {
        let s = fams.entry(r.family_id.clone()).or_insert_with(|| FamilySummary {
            family_id: r.family_id.clone(),
            ..Default::default()
        });
        s.records += 1;
        *s.f_verdicts.entry(verdict_name(r.f_class)).or_default() += 1;
        for e in &r.opa_results {
            *s.opa_verdicts.entry(verdict_name(e.opa_class)).or_default() += 1;
        }
        s.strong_violations += u64::from(r.flags.strong_violation);
        s.weak_violation_candidates += u64::from(r.flags.weak_violation_candidate);
        if let Some(rc) = &r.recheck {
            s.float_flagged += 1;
            s.downgraded += u64::from(rc.downgraded);
        }
        if r.flags.weak_violation_candidate {
            survivors.push((r.family_id.clone(), r.index));
        }
        if let Some(p) = &r.pair {
            pairs.entry((r.family_id.clone(), r.seed, p.pair)).or_default().push(r.flags);
        }
    }
    for ((fam, _, _), flags) in pairs {
        if flags.len() == 2 {
            let s = fams.get_mut(&fam).expect("family seen");
            s.pairs += 1;
            s.pairs_agreeing += u64::from(flags[0] == flags[1]);
        }
    }
    let families: Vec<FamilySummary> = fams
        .into_values()
        .map(|mut s| {
            if s.pairs > 0 {
                s.pair_agreement = Some(100.0 * s.pairs_agreeing as f64 / s.pairs as f64);
            }
            s
        })
        .collect();
    ScanReport { total_records: records.len() as u64, families, surviving_weak_candidates: survivors }
}

impl ScanReport {
    /// Plain text table, one row per family.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<12} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}",
            "family", "records", "f_open", "f_strong", "flagged", "strong", "weak", "pairs%"
        );
        for s in &self.families {
            let agreement = s.pair_agreement.map_or_else(|| "-".to_string(), |a| format!("{a:.1}"));
            let _ = writeln!(
                out,
                "{:<12} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}",
                s.family_id,
                s.records,
                s.f_verdicts.get("ZeroInOpenBidisk").copied().unwrap_or(0),
                s.f_verdicts.get("StronglyStable").copied().unwrap_or(0),
                s.float_flagged,
                s.strong_violations,
                s.weak_violation_candidates,
                agreement
            );
        }
        let _ = writeln!(out, "total {}", self.total_records);
        out
    }
}

/// One CSV row per classified polynomial: `family_id,index,n,verdict,margin`,
/// with `n` empty for `f` itself and `margin` empty when infinite.
pub fn margins_csv(records: &[ScanRecord]) -> String {
    let mut out = String::from("family_id,index,n,verdict,margin\n");
    let fmt_margin = |m: f64| if m.is_finite() { format!("{m:e}") } else { String::new() };
    for r in records {
        let _ = writeln!(out, "{},{},,{:?},{}", r.family_id, r.index, r.f_class, fmt_margin(r.f_margin));
        for e in &r.opa_results {
            let _ = writeln!(out, "{},{},{},{:?},{}", r.family_id, r.index, e.n, e.opa_class, fmt_margin(e.margin));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::ratio(n, d)
    }

    fn quick() -> ClassifyConfig {
        ClassifyConfig { torus_samples: 256, disk_grid: 32, ..ClassifyConfig::default() }
    }

    #[test]
    fn family_ids() {
        assert_eq!("dense11".parse::<Family>().unwrap(), Family::Dense { n: 1, m: 1 });
        assert_eq!("dense23".parse::<Family>().unwrap().to_string(), "dense23");
        for id in ["hound", "separated", "detrep"] {
            assert_eq!(id.parse::<Family>().unwrap().to_string(), id);
        }
        for bad in ["dense", "dense1", "dense1x", "sparse", ""] {
            assert!(matches!(bad.parse::<Family>(), Err(OpaError::UnknownFamily(_))));
        }
    }

    #[test]
    fn worked_example_record_has_no_flags() {
        let f = BiPoly::from_int_terms(&[(0, 0, 1), (1, 0, -1), (0, 1, -1)]);
        let (f_class, _, entries, flags, recheck) = analyze(&f, 2, &quick()).unwrap();
        assert_eq!(f_class, Verdict::ZeroInOpenBidisk);
        assert_eq!(entries[0].poly, BiPoly::constant(q(1, 3)));
        assert_eq!(
            entries[1].poly,
            BiPoly::from_terms([(ExponentPair::ORIGIN, q(3, 8)), (ExponentPair::new(1, 0), q(1, 8))])
        );
        assert_eq!(
            entries[2].poly,
            BiPoly::from_terms([
                (ExponentPair::ORIGIN, q(2, 5)),
                (ExponentPair::new(1, 0), q(1, 10)),
                (ExponentPair::new(0, 1), q(1, 10)),
            ])
        );
        assert!((entries[1].factor_root_moduli[0] - 3.0).abs() < 1e-9);
        assert!(entries.iter().all(|e| e.opa_class == Verdict::StronglyStable));
        assert_eq!(flags, Flags::default());
        assert!(recheck.is_none());
    }

    #[test]
    fn separated_example() {
        let g = BiPoly::from_int_terms(&[(0, 0, 1), (1, 0, -1)]);
        let h = BiPoly::from_int_terms(&[(0, 0, 1), (0, 1, -1)]);
        let f = g.multiply(&h);
        let (g2, h2) = split_separated(&f).unwrap();
        assert!(p0_product_check(&g2, &h2).unwrap().holds());
        let (_, _, _, flags, _) = analyze(&f, 3, &quick()).unwrap();
        assert_eq!(flags, Flags::default());
        assert!(split_separated(&BiPoly::from_int_terms(&[(0, 0, 1), (1, 1, 1)])).is_err());
    }

    #[test]
    fn zero_confirmation() {
        let p = BiPoly::from_terms([(ExponentPair::ORIGIN, q(-1, 4)), (ExponentPair::new(1, 1), q(1, 1))]);
        let (s, cert, _) = confirm_zero(&p, Complex64::new(0.6, 0.0), Complex64::new(0.41, 0.01));
        assert_eq!(s, RecheckStatus::ConfirmedOpen);
        assert!(cert.is_some());
        let (s, _, exact) = confirm_zero(&p, Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0));
        assert_eq!(s, RecheckStatus::ConfirmedOpen);
        assert_eq!(exact.unwrap()[1], ["1/2".to_string(), "0/1".to_string()]);
        let boundary = BiPoly::from_int_terms(&[(0, 0, 1), (1, 0, -1)]);
        let (s, _, _) = confirm_zero(&boundary, Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.0));
        assert_eq!(s, RecheckStatus::ConfirmedClosed);
        let (s, _, _) = confirm_zero(&BiPoly::one(), Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0));
        assert_eq!(s, RecheckStatus::Inconclusive);
    }

    #[test]
    fn records_are_deterministic_and_resumable() {
        let mut spec = ScanSpec::new(Family::Dense { n: 1, m: 1 }, 7);
        spec.n_max = 3;
        spec.config = quick();
        let a = collect_scan(&spec, 6).unwrap();
        let b = collect_scan(&spec, 6).unwrap();
        assert_eq!(a, b);
        let text: String = a.iter().map(|r| record_line(r).unwrap() + "\n").collect();
        assert_eq!(parse_records(&text).unwrap(), a);
        let torn = format!("{}{}", text, "{\"family_id\":");
        assert_eq!(resume_point(&torn, &spec).unwrap(), (6, text.len()));
        let mut tail = Vec::new();
        run_scan(&spec, 4, 2, |r| {
            tail.push(r.clone());
            Ok(())
        })
        .unwrap();
        assert_eq!(tail, a[4..].to_vec());
        let other = ScanSpec { seed: 8, ..spec.clone() };
        assert!(resume_point(&text, &other).is_err());
        for r in &a {
            assert!(!r.f.constant_term().is_zero());
            assert_eq!(r.opa_results.len(), 4);
        }
    }

    #[test]
    fn hound_pairs_share_factors() {
        let mut spec = ScanSpec::new(Family::Hound, 3);
        spec.n_max = 2;
        spec.config = quick();
        let recs = collect_scan(&spec, 4).unwrap();
        for pair in recs.chunks(2) {
            let (a, b) = (&pair[0], &pair[1]);
            assert_eq!(a.pair.as_ref().unwrap().pair, b.pair.as_ref().unwrap().pair);
            assert!(a.pair.as_ref().unwrap().opa_proportional);
            assert!(b.pair.as_ref().unwrap().opa_proportional);
            assert_eq!(a.flags, b.flags);
        }
        let rep = report(&recs);
        assert_eq!(rep.families[0].pairs, 2);
        assert_eq!(rep.families[0].pair_agreement, Some(100.0));
    }

    #[test]
    fn other_families_draw() {
        for fam in [Family::Separated, Family::Detrep, Family::Dense { n: 2, m: 1 }] {
            let spec = ScanSpec::new(fam, 1);
            for i in 0..3 {
                let (f, _, partner) = draw_candidate(&spec, i).unwrap();
                assert!(!f.constant_term().is_zero());
                assert!(partner.is_none());
                assert_eq!(draw_candidate(&spec, i).unwrap().0, f);
            }
        }
        let spec = ScanSpec { config: quick(), n_max: 2, ..ScanSpec::new(Family::Separated, 2) };
        assert_eq!(scan_record(&spec, 0).unwrap().p0_product_holds, Some(true));
    }

    #[test]
    fn empty_report() {
        let rep = report(&[]);
        assert_eq!(rep.total_records, 0);
        assert!(rep.families.is_empty());
        assert!(rep.to_table().ends_with("total 0\n"));
        assert_eq!(margins_csv(&[]), "family_id,index,n,verdict,margin\n");
    }
}
