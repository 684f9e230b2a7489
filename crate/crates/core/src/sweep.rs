//! Prime sweeps: instance generation, parallel execution and reporting.
//!
//! Output bytes depend only on the configuration (minus thread count and
//! output location) and the tool version. Outcomes are sorted by
//! `(check, p, c, d, aux)` before emission.

use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::checks::{run_check, CheckId, CheckInstance, CheckOutcome, Status};
use crate::error::{Error, Result};
use crate::ffcore::{primitive_root, FieldCtx};

/// Largest `p²` for which `thm12` enumerates the full `(c, d)` grid.
pub const THM12_GRID_BUDGET: u64 = 1024;
/// Largest Cauchy matrix drawn by the sweep.
pub const CAUCHY_MAX_N: u64 = 6;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a.
pub fn fnv1a64(s: &str) -> u64 {
    s.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// SplitMix64 generator.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Stream for one `(seed, p, check)` triple:
    /// `mix64(seed ^ mix64(p + fnv1a64(check_id)))`.
    pub fn for_stream(seed: u64, p: u64, check: CheckId) -> Self {
        Self::new(mix64(seed ^ mix64(p.wrapping_add(fnv1a64(check.as_str())))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        mix64(self.state)
    }

    /// `next_u64() % n`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        self.next_u64() % n
    }

    /// `k` distinct values from `0..n` (all of them if `k >= n`), ascending.
    pub fn distinct_below(&mut self, n: u64, k: usize) -> Vec<u64> {
        if k as u64 >= n {
            return (0..n).collect();
        }
        let mut picked = std::collections::BTreeSet::new();
        while picked.len() < k {
            picked.insert(self.below(n));
        }
        picked.into_iter().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Usage(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub prime_lo: u64,
    pub prime_hi: u64,
    pub checks: Vec<CheckId>,
    pub exhaustive_max_p: u64,
    pub samples_per_prime: usize,
    pub seed: u64,
    pub threads: usize,
    pub format: Format,
    pub fail_on_discrepancy: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            prime_lo: 3,
            prime_hi: 60,
            checks: CheckId::ALL.to_vec(),
            exhaustive_max_p: 60,
            samples_per_prime: 8,
            seed: 0,
            threads: 1,
            format: Format::Json,
            fail_on_discrepancy: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.prime_lo < 3 {
            return Err(Error::Usage(format!(
                "prime range must start at 3 or above, got {}",
                self.prime_lo
            )));
        }
        if self.prime_hi < self.prime_lo {
            return Err(Error::Usage(format!(
                "empty prime range {}..{}",
                self.prime_lo, self.prime_hi
            )));
        }
        if self.prime_hi >= FieldCtx::MAX_MODULUS {
            return Err(Error::ModulusTooLarge(self.prime_hi));
        }
        if self.samples_per_prime == 0 {
            return Err(Error::Usage("samples-per-prime must be at least 1".into()));
        }
        if self.threads == 0 {
            return Err(Error::Usage("threads must be at least 1".into()));
        }
        if self.checks.is_empty() {
            return Err(Error::Usage("no checks selected".into()));
        }
        Ok(())
    }
}

/// Parses `LO..HI` (inclusive).
pub fn parse_prime_range(s: &str) -> Result<(u64, u64)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| Error::Usage(format!("expected LO..HI, got `{s}`")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| Error::Usage(format!("bad bound `{t}`")))
    };
    Ok((parse(lo)?, parse(hi)?))
}

/// Parses a comma-separated list of check ids, or `all`.
pub fn parse_checks(s: &str) -> Result<Vec<CheckId>> {
    if s.trim() == "all" {
        return Ok(CheckId::ALL.to_vec());
    }
    let mut ids = s
        .split(',')
        .map(|t| t.trim().parse())
        .collect::<Result<Vec<CheckId>>>()?;
    ids.sort();
    ids.dedup();
    Ok(ids)
}

/// Primes in `[lo, hi]` by the sieve of Eratosthenes.
pub fn enumerate_primes(lo: u64, hi: u64) -> Result<Vec<u64>> {
    if lo < 2 || hi < lo {
        return Err(Error::Usage(format!("invalid prime range {lo}..{hi}")));
    }
    let n = hi as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            for j in (i * i..=n).step_by(i) {
                composite[j] = true;
            }
        }
        i += 1;
    }
    Ok((lo as usize..=n)
        .filter(|&k| !composite[k])
        .map(|k| k as u64)
        .collect())
}

/// Instances for every configured check at prime `p`.
///
/// Pure in `(config.seed, p, check)`: each check draws from its own stream.
pub fn generate_instances(config: &SweepConfig, p: u64) -> Vec<CheckInstance> {
    let exhaustive = p <= config.exhaustive_max_p;
    let k = config.samples_per_prime;
    let mut out = Vec::new();
    for &check in &config.checks {
        let mut rng = SplitMix64::for_stream(config.seed, p, check);
        let c_values = |rng: &mut SplitMix64| {
            if exhaustive {
                (0..p).collect()
            } else {
                rng.distinct_below(p, k)
            }
        };
        let base = CheckInstance::new(check, p);
        match check {
            CheckId::Thm11 | CheckId::Lemma26 | CheckId::Identities => {
                out.extend(
                    c_values(&mut rng)
                        .into_iter()
                        .map(|c| base.clone().with_c(c)),
                );
            }
            CheckId::Lerch => {
                let units: Vec<u64> = if exhaustive {
                    (1..p).collect()
                } else {
                    rng.distinct_below(p - 1, k)
                        .into_iter()
                        .map(|a| a + 1)
                        .collect()
                };
                out.extend(units.into_iter().map(|a| base.clone().with_c(a)));
            }
            CheckId::Lemma31 => {
                let g = primitive_root(FieldCtx::new(p).expect("sweep primes are prime"))
                    .expect("p >= 3")
                    .value();
                out.extend(
                    c_values(&mut rng)
                        .into_iter()
                        .map(|c| base.clone().with_c(c).with_aux("g", g)),
                );
            }
            CheckId::Thm12 => {
                if exhaustive && p * p <= THM12_GRID_BUDGET {
                    for c in 0..p {
                        out.extend((0..p).map(|d| base.clone().with_c(c).with_d(d)));
                    }
                } else if exhaustive {
                    for c in 0..p {
                        out.extend(
                            rng.distinct_below(p, k)
                                .into_iter()
                                .map(|d| base.clone().with_c(c).with_d(d)),
                        );
                    }
                } else {
                    let pairs = rng.distinct_below(p * p, k);
                    out.extend(
                        pairs
                            .into_iter()
                            .map(|cd| base.clone().with_c(cd / p).with_d(cd % p)),
                    );
                }
            }
            CheckId::Wsn | CheckId::SunIntro => out.push(base),
            CheckId::Lemma24 => out.extend(lucas_instances(&base, p, exhaustive, k, &mut rng)),
            CheckId::Cauchy => {
                for idx in 0..k as u64 {
                    out.push(cauchy_instance(&base, p, idx, &mut rng));
                }
            }
        }
    }
    out
}

fn lucas_instances(
    base: &CheckInstance,
    p: u64,
    exhaustive: bool,
    k: usize,
    rng: &mut SplitMix64,
) -> Vec<CheckInstance> {
    let admissible = |a: u64, b: u64| !(a * a + 4 * (p - b * b % p)).is_multiple_of(p);
    let make = |a: u64, b: u64| base.clone().with_c(a).with_d(b * b % p).with_aux("b", b);
    let mut out = Vec::new();
    if exhaustive {
        for a in 0..p {
            for b in 1..p {
                if admissible(a, b) {
                    out.push(make(a, b));
                }
            }
        }
    } else {
        while out.len() < k {
            let (a, b) = (rng.below(p), 1 + rng.below(p - 1));
            if admissible(a, b) {
                out.push(make(a, b));
            }
        }
    }
    out
}

fn cauchy_instance(base: &CheckInstance, p: u64, idx: u64, rng: &mut SplitMix64) -> CheckInstance {
    let n = 1 + rng.below(CAUCHY_MAX_N.min(p - 1));
    let xs: Vec<u64> = (0..n).map(|_| rng.below(p)).collect();
    // y_j avoids every −x_i so that all denominators are units
    let allowed: Vec<u64> = (0..p)
        .filter(|y| xs.iter().all(|x| (x + y) % p != 0))
        .collect();
    let mut inst = base.clone().with_aux("idx", idx).with_aux("n", n);
    for (i, x) in xs.iter().enumerate() {
        inst.aux.insert(format!("x{i}"), *x);
    }
    for j in 0..n {
        let y = allowed[rng.below(allowed.len() as u64) as usize];
        inst.aux.insert(format!("y{j}"), y);
    }
    inst
}

/// One serialized outcome. Field-element values are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResultRow {
    pub check: String,
    pub p: u64,
    pub c: Option<u64>,
    pub d: Option<u64>,
    pub status: String,
    pub observed: BTreeMap<String, String>,
    pub expected: BTreeMap<String, String>,
    pub witness: Option<String>,
    pub note: String,
}

impl From<&CheckOutcome> for ResultRow {
    fn from(o: &CheckOutcome) -> Self {
        let mut observed = o.observed.clone();
        for (k, v) in &o.instance.aux {
            observed.insert(format!("arg.{k}"), v.to_string());
        }
        ResultRow {
            check: o.instance.check.as_str().to_owned(),
            p: o.instance.p,
            c: o.instance.c,
            d: o.instance.d,
            status: o.status.as_str().to_owned(),
            observed,
            expected: o.expected.clone(),
            witness: o.witness.map(|w| w.to_string()),
            note: o.note.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub primes: String,
    pub checks: Vec<String>,
    pub exhaustive_max_p: u64,
    pub samples_per_prime: usize,
    pub seed: u64,
    pub fail_on_discrepancy: bool,
    pub thm12_grid_budget: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub config: ConfigEcho,
    pub seed: u64,
    pub instance_count: usize,
}

/// A discrepancy, with whether it breaks the safe suite.
#[derive(Clone, Debug, Serialize)]
pub struct Finding {
    #[serde(flatten)]
    pub row: ResultRow,
    pub safe_suite: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    /// check -> status -> count
    pub counts: BTreeMap<String, BTreeMap<String, usize>>,
    pub hard_failures: usize,
    pub findings: usize,
    pub discrepancies: Vec<Finding>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub meta: Meta,
    pub results: Vec<ResultRow>,
    pub summary: Summary,
    #[serde(skip)]
    pub outcomes: Vec<CheckOutcome>,
}

impl Report {
    pub fn hard_failures(&self) -> usize {
        self.summary.hard_failures
    }

    pub fn has_discrepancies(&self) -> bool {
        !self.summary.discrepancies.is_empty()
    }

    /// 0 on success, 1 when discrepancies are fatal by request, 2 on a
    /// safe-suite failure or check error.
    pub fn exit_code(&self, fail_on_discrepancy: bool) -> i32 {
        if self.hard_failures() > 0 {
            2
        } else if fail_on_discrepancy && self.has_discrepancies() {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Usage(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// Header `check,p,c,d,status,observed,expected,witness,note`; maps are
    /// flattened to `key=value` pairs joined by `;`.
    pub fn write_csv<W: Write>(&self, w: W) -> std::result::Result<(), csv::Error> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record([
            "check", "p", "c", "d", "status", "observed", "expected", "witness", "note",
        ])?;
        let flat = |m: &BTreeMap<String, String>| {
            m.iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";")
        };
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.results {
            wr.write_record([
                r.check.clone(),
                r.p.to_string(),
                opt(r.c),
                opt(r.d),
                r.status.clone(),
                flat(&r.observed),
                flat(&r.expected),
                r.witness.clone().unwrap_or_default(),
                r.note.clone(),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .map_err(|e| Error::Usage(e.to_string()))?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

/// Runs a whole sweep on a pool of `config.threads` workers.
pub fn run_sweep(config: &SweepConfig) -> Result<Report> {
    config.validate()?;
    let primes = enumerate_primes(config.prime_lo, config.prime_hi)?;
    let instances: Vec<CheckInstance> = primes
        .iter()
        .flat_map(|&p| generate_instances(config, p))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::Usage(e.to_string()))?;
    let mut outcomes: Vec<CheckOutcome> =
        pool.install(|| instances.par_iter().map(run_check).collect());
    outcomes.sort_by(|a, b| a.instance.cmp(&b.instance));
    Ok(assemble(config, outcomes))
}

fn assemble(config: &SweepConfig, outcomes: Vec<CheckOutcome>) -> Report {
    let results: Vec<ResultRow> = outcomes.iter().map(ResultRow::from).collect();
    let mut counts: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for id in &config.checks {
        let entry = counts.entry(id.as_str().to_owned()).or_default();
        for s in [
            Status::Pass,
            Status::Discrepancy,
            Status::Skip,
            Status::Error,
        ] {
            entry.insert(s.as_str().to_owned(), 0);
        }
    }
    let mut discrepancies = Vec::new();
    let mut hard_failures = 0;
    let mut findings = 0;
    for (o, row) in outcomes.iter().zip(&results) {
        *counts
            .entry(row.check.clone())
            .or_default()
            .entry(row.status.clone())
            .or_default() += 1;
        let hard = o.is_hard_failure();
        hard_failures += hard as usize;
        findings += o.is_finding() as usize;
        if o.status != Status::Pass && o.status != Status::Skip {
            discrepancies.push(Finding {
                row: row.clone(),
                safe_suite: hard,
            });
        }
    }
    Report {
        meta: Meta {
            tool: env!("CARGO_PKG_NAME").to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            config: ConfigEcho {
                primes: format!("{}..{}", config.prime_lo, config.prime_hi),
                checks: config
                    .checks
                    .iter()
                    .map(|c| c.as_str().to_owned())
                    .collect(),
                exhaustive_max_p: config.exhaustive_max_p,
                samples_per_prime: config.samples_per_prime,
                seed: config.seed,
                fail_on_discrepancy: config.fail_on_discrepancy,
                thm12_grid_budget: THM12_GRID_BUDGET,
            },
            seed: config.seed,
            instance_count: outcomes.len(),
        },
        results,
        summary: Summary {
            counts,
            hard_failures,
            findings,
            discrepancies,
        },
        outcomes,
    }
}
