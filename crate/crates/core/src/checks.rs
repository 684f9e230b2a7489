//! Named checks: each one evaluates a closed form, computes the same quantity
//! by brute force, and reports a structured verdict.
//!
//! Checks are split into a *safe* suite, whose claims have short independent
//! proofs and must always pass, and claims *under test*, whose failures are
//! recorded as findings. `identities` bundles sub-identities from both
//! groups and reports each one separately.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffcore::{primitive_root, quad_roots, FieldCtx, Fp};
use crate::lucas::{lucas_half_closed, lucas_u, LucasParams};
use crate::matrix::{
    build_circulant, build_dp, cauchy_det, cauchy_matrix, circulant_profile, perm_sign_mul,
    sun_half_det, CirculantProfile,
};
use crate::trinom::{
    central_pm1, pm1_row_closed, pm2_anchors, pm2_half_paper, row_p_closed, trinom_row, TrinomRow,
};

/// Stable check identifiers. Variant order matches the string order, which
/// is the canonical report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    Cauchy,
    Identities,
    Lemma24,
    Lemma26,
    Lemma31,
    Lerch,
    SunIntro,
    Thm11,
    Thm12,
    Wsn,
}

impl CheckId {
    pub const ALL: [CheckId; 10] = [
        CheckId::Cauchy,
        CheckId::Identities,
        CheckId::Lemma24,
        CheckId::Lemma26,
        CheckId::Lemma31,
        CheckId::Lerch,
        CheckId::SunIntro,
        CheckId::Thm11,
        CheckId::Thm12,
        CheckId::Wsn,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckId::Cauchy => "cauchy",
            CheckId::Identities => "identities",
            CheckId::Lemma24 => "lemma24",
            CheckId::Lemma26 => "lemma26",
            CheckId::Lemma31 => "lemma31",
            CheckId::Lerch => "lerch",
            CheckId::SunIntro => "sun_intro",
            CheckId::Thm11 => "thm11",
            CheckId::Thm12 => "thm12",
            CheckId::Wsn => "wsn",
        }
    }

    /// Whether every non-skip outcome of this check must be a pass.
    /// `identities` is judged per sub-identity instead.
    pub fn is_safe(&self) -> bool {
        matches!(
            self,
            CheckId::Cauchy
                | CheckId::Lemma24
                | CheckId::Lemma31
                | CheckId::Lerch
                | CheckId::SunIntro
                | CheckId::Thm12
        )
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown check id `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Discrepancy,
    Skip,
    Error,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Discrepancy => "discrepancy",
            Status::Skip => "skip",
            Status::Error => "error",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One parameterised check. Field order is the canonical sort order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CheckInstance {
    pub check: CheckId,
    pub p: u64,
    pub c: Option<u64>,
    pub d: Option<u64>,
    pub aux: BTreeMap<String, u64>,
}

impl CheckInstance {
    pub fn new(check: CheckId, p: u64) -> Self {
        CheckInstance {
            check,
            p,
            c: None,
            d: None,
            aux: BTreeMap::new(),
        }
    }

    pub fn with_c(mut self, c: u64) -> Self {
        self.c = Some(c);
        self
    }

    pub fn with_d(mut self, d: u64) -> Self {
        self.d = Some(d);
        self
    }

    pub fn with_aux(mut self, key: &str, value: u64) -> Self {
        self.aux.insert(key.to_owned(), value);
        self
    }

    /// Safe-suite membership. `thm12` at `d = 0` lies outside the proof
    /// (which covers `χ(d) = ±1` only) and is a claim under test.
    pub fn is_safe(&self) -> bool {
        self.check.is_safe() && !(self.check == CheckId::Thm12 && self.d == Some(0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub instance: CheckInstance,
    pub status: Status,
    /// Values computed by the oracle route.
    pub observed: BTreeMap<String, String>,
    /// Values predicted by the closed form under test.
    pub expected: BTreeMap<String, String>,
    /// `w` with `w² · unit = det`, when the claim has that shape.
    pub witness: Option<u64>,
    pub note: String,
}

/// Sub-identities of `identities` whose failure is a hard failure.
pub const SAFE_IDENTITIES: [&str; 8] = [
    "lemma22",
    "lemma25",
    "deriv",
    "pm1_rec",
    "pm1_k1",
    "sum_s1",
    "sum_s2",
    "circulant_eq",
];
/// Sub-identities of `identities` that are claims under test.
pub const UNDER_TEST_IDENTITIES: [&str; 3] = ["pm2_anchors", "pm1_closed", "half_power"];

impl CheckOutcome {
    fn new(instance: CheckInstance) -> Self {
        CheckOutcome {
            instance,
            status: Status::Pass,
            observed: BTreeMap::new(),
            expected: BTreeMap::new(),
            witness: None,
            note: String::new(),
        }
    }

    fn skip(instance: CheckInstance, note: &str) -> Self {
        let mut out = Self::new(instance);
        out.status = Status::Skip;
        out.note = note.to_owned();
        out
    }

    fn error(instance: CheckInstance, err: &Error) -> Self {
        let mut out = Self::new(instance);
        out.status = Status::Error;
        out.note = err.to_string();
        out
    }

    fn obs(&mut self, key: &str, value: impl ToString) {
        self.observed.insert(key.to_owned(), value.to_string());
    }

    fn exp(&mut self, key: &str, value: impl ToString) {
        self.expected.insert(key.to_owned(), value.to_string());
    }

    fn tag(&mut self, tag: &str) {
        if !self.note.is_empty() {
            self.note.push(';');
        }
        self.note.push_str(tag);
    }

    /// Records `lhs == rhs` under `key`, demoting a pass to a discrepancy.
    fn compare(&mut self, key: &str, observed: impl ToString, expected: impl ToString) {
        let (o, e) = (observed.to_string(), expected.to_string());
        if o != e && self.status == Status::Pass {
            self.status = Status::Discrepancy;
        }
        self.obs(key, o);
        self.exp(key, e);
    }

    /// Status of an `identities` sub-check, if recorded.
    pub fn sub_status(&self, name: &str) -> Option<&str> {
        self.observed
            .get(&format!("sub.{name}"))
            .map(String::as_str)
    }

    /// A failure that must fail the run: any error, a non-pass of a safe
    /// check, or a failed safe sub-identity.
    pub fn is_hard_failure(&self) -> bool {
        match self.status {
            Status::Error => true,
            Status::Pass | Status::Skip => false,
            Status::Discrepancy if self.instance.check == CheckId::Identities => SAFE_IDENTITIES
                .iter()
                .any(|name| matches!(self.sub_status(name), Some(s) if s != "pass" && s != "skip")),
            Status::Discrepancy => self.instance.is_safe(),
        }
    }

    /// A recorded finding against a claim under test.
    pub fn is_finding(&self) -> bool {
        self.status == Status::Discrepancy && !self.is_hard_failure()
    }
}

fn field(p: u64) -> Result<FieldCtx> {
    let ctx = FieldCtx::new(p)?;
    ctx.require_odd()?;
    Ok(ctx)
}

fn is_pm2(c: Fp) -> bool {
    let two = c.ctx().elem(2);
    c == two || c == -two
}

/// Runs the check an instance names.
pub fn run_check(inst: &CheckInstance) -> CheckOutcome {
    let missing = |what: &str| {
        CheckOutcome::error(
            inst.clone(),
            &Error::Usage(format!("instance lacks {what}")),
        )
    };
    let c = inst.c;
    let d = inst.d;
    match inst.check {
        CheckId::Thm11 => c.map_or_else(|| missing("c"), |c| check_thm11(inst.p, c)),
        CheckId::Thm12 => match (c, d) {
            (Some(c), Some(d)) => check_thm12(inst.p, c, d),
            _ => missing("c and d"),
        },
        CheckId::Wsn => check_wsn(inst.p),
        CheckId::Lemma26 => c.map_or_else(|| missing("c"), |c| check_lemma26(inst.p, c)),
        CheckId::Lemma31 => match (c, inst.aux.get("g")) {
            (Some(c), Some(&g)) => check_lemma31(inst.p, c, g),
            _ => missing("c and aux g"),
        },
        CheckId::Lemma24 => match (c, d, inst.aux.get("b")) {
            (Some(a), Some(b_big), Some(&b)) => check_lucas(inst.p, a, b_big, b),
            _ => missing("A, B and aux b"),
        },
        CheckId::Lerch => c.map_or_else(|| missing("a"), |a| check_lerch(inst.p, a)),
        CheckId::Cauchy => check_cauchy_instance(inst),
        CheckId::SunIntro => check_sun_intro(inst.p),
        CheckId::Identities => c.map_or_else(|| missing("c"), |c| check_identities(inst.p, c)),
    }
}

/// Sign factor `(−1)^{(p−1)/2}`.
fn sign_half(ctx: FieldCtx) -> Fp {
    if ((ctx.p() - 1) / 2).is_multiple_of(2) {
        ctx.one()
    } else {
        -ctx.one()
    }
}

/// `det D_p(c) = unit · x²` with `unit = (−1)^{(p−1)/2} χ(c+2)` when
/// `χ(c²−4) = 1` and `unit = (−1)^{(p−1)/2} χ(c+2) · 2c` when
/// `χ(c²−4) = −1`; `det D_p(±2) = 0`.
pub fn check_thm11(p: u64, c: u64) -> CheckOutcome {
    let inst = CheckInstance::new(CheckId::Thm11, p).with_c(c);
    match thm11_inner(inst.clone(), p, c) {
        Ok(out) => out,
        Err(e) => CheckOutcome::error(inst, &e),
    }
}

fn thm11_inner(inst: CheckInstance, p: u64, c: u64) -> Result<CheckOutcome> {
    let ctx = field(p)?;
    let c = ctx.elem(c);
    let mut out = CheckOutcome::new(inst.clone());
    let disc_chi = (c * c - ctx.elem(4)).legendre()?;
    if disc_chi == 0 {
        let det = build_dp(c, ctx.one())?.det()?;
        out.tag("case1");
        out.compare("det", det, 0);
        return Ok(out);
    }
    if p == 3 {
        return Ok(CheckOutcome::skip(inst, "p=3 excluded from branch checks"));
    }
    let det = build_dp(c, ctx.one())?.det()?;
    let mut unit = sign_half(ctx) * (c + ctx.elem(2)).chi()?;
    if disc_chi == 1 {
        out.tag("case2");
    } else {
        unit = unit * ctx.elem(2) * c;
        out.tag("case3");
    }
    out.obs("det", det);
    out.obs("chi_c2m4", disc_chi);
    out.exp("unit", unit);
    if det.is_zero() {
        out.tag("det_zero");
        return Ok(out);
    }
    let Ok(unit_inv) = unit.inv() else {
        out.status = Status::Discrepancy;
        out.tag("unit_zero_det_nonzero");
        return Ok(out);
    };
    let ratio = det * unit_inv;
    let ratio_chi = ratio.legendre()?;
    out.obs("ratio", ratio);
    out.compare("ratio_chi", ratio_chi, 1);
    if let Some(w) = ratio.sqrt()? {
        if w * w * unit != det {
            return Err(Error::Precondition("witness failed re-verification".into()));
        }
        out.witness = Some(w.value());
    }
    Ok(out)
}

/// `det D_p(c,d) = 0` when `χ(d) ≠ 1`; otherwise for both roots `r` of `d`,
/// `det D_p(c,d) = χ(r) det D_p(c/r)`.
pub fn check_thm12(p: u64, c: u64, d: u64) -> CheckOutcome {
    let inst = CheckInstance::new(CheckId::Thm12, p).with_c(c).with_d(d);
    match thm12_inner(inst.clone(), p, c, d) {
        Ok(out) => out,
        Err(e) => CheckOutcome::error(inst, &e),
    }
}

fn thm12_inner(inst: CheckInstance, p: u64, c: u64, d: u64) -> Result<CheckOutcome> {
    let ctx = field(p)?;
    let (c, d) = (ctx.elem(c), ctx.elem(d));
    let mut out = CheckOutcome::new(inst);
    let det = build_dp(c, d)?.det()?;
    let chi_d = d.legendre()?;
    out.obs("chi_d", chi_d);
    match d.sqrt_pair()? {
        Some((r1, r2)) if chi_d == 1 => {
            out.tag("case2");
            for (name, r) in [("r1", r1), ("r2", r2)] {
                let rhs = r.chi()? * build_dp(c * r.inv()?, ctx.one())?.det()?;
                out.obs(name, r);
                out.compare(&format!("det_via_{name}"), det, rhs);
            }
        }
        _ => {
            out.tag("case1");
            if d.is_zero() {
                out.tag("outside_proof_scope");
            }
            out.compare("det", det, 0);
        }
    }
    Ok(out)
}

/// `det T_p = (−1)^{(p+1)/2} 2^{(p−2)/3}` for `p ≡ 2 (mod 3)`, and the
/// consequence that `2 det T_p` is a square.
pub fn check_wsn(p: u64) -> CheckOutcome {
    let inst = CheckInstance::new(CheckId::Wsn, p);
    if p % 3 != 2 {
        return CheckOutcome::skip(inst, "p not 2 mod 3");
    }
    let run = || -> Result<CheckOutcome> {
        let ctx = field(p)?;
        let mut out = CheckOutcome::new(inst.clone());
        let det = build_dp(-ctx.one(), ctx.one())?.det()?;
        let sign = if p.div_ceil(2).is_multiple_of(2) {
            ctx.one()
        } else {
            -ctx.one()
        };
        let closed = sign * ctx.elem(2).pow((p - 2) / 3);
        out.compare("det", det, closed);
        let chi = (ctx.elem(2) * det).legendre()?;
        out.obs("chi_2det", chi);
        out.compare("2det_is_square", chi >= 0, true);
        Ok(out)
    };
    run().unwrap_or_else(|e| CheckOutcome::error(inst.clone(), &e))
}

/// Oracle row value `binom(p−2,(p−1)/2)_c` against the printed closed form.
pub fn check_lemma26(p: u64, c: u64) -> CheckOutcome {
    let inst = CheckInstance::new(CheckId::Lemma26, p).with_c(c);
    if p == 3 {
        return CheckOutcome::skip(inst, "p=3 excluded");
    }
    let run = || -> Result<CheckOutcome> {
        let ctx = field(p)?;
        let c = ctx.elem(c);
        if is_pm2(c) {
            return Ok(CheckOutcome::skip(inst.clone(), "c=±2 degenerate"));
        }
        let mut out = CheckOutcome::new(inst.clone());
        let oracle = trinom_row(p as usize - 2, c).get((p as i64 - 1) / 2);
        let printed = pm2_half_paper(c)?;
        out.obs("chi_c2m4", (c * c - ctx.elem(4)).legendre()?);
        out.compare("binom", oracle, printed);
        Ok(out)
    };
    run().unwrap_or_else(|e| CheckOutcome::error(inst.clone(), &e))
}

/// The palindromic-circulant factorisation for the profile of `D_p(c)`
/// under primitive root `g`.
pub fn check_lemma31(p: u64, c: u64, g: u64) -> CheckOutcome {
    let inst = CheckInstance::new(CheckId::Lemma31, p)
        .with_c(c)
        .with_aux("g", g);
    let profile = FieldCtx::new(p).and_then(|ctx| circulant_profile(ctx.elem(c), ctx.elem(g)));
    match profile {
        Ok(profile) => check_circulant(inst, &profile),
        Err(e) => CheckOutcome::error(inst, &e),
    }
}

/// `det C(a) = S1·S2·u²` (m even) or `S1·v²` (m odd) for a palindromic
/// profile, where `S1 = Σ a_i` and `S2 = Σ (−1)^i a_i`.
pub fn check_circulant(inst: CheckInstance, profile: &CirculantProfile<Fp>) -> CheckOutcome {
    if !profile.is_palindromic() {
        return CheckOutcome::error(
            inst,
            &Error::Precondition("profile is not palindromic".into()),
        );
    }
    let run = || -> Result<CheckOutcome> {
        let mut out = CheckOutcome::new(inst.clone());
        let det = build_circulant(profile).det()?;
        let s1 = profile.sum();
        let unit = if profile.len().is_multiple_of(2) {
            let s2 = profile.alternating_sum();
            out.obs("S2", s2);
            s1 * s2
        } else {
            s1
        };
        out.obs("det", det);
        out.obs("S1", s1);
        out.obs("unit", unit);
        match unit.inv() {
            Err(_) => out.compare("det", det, 0),
            Ok(unit_inv) => {
                let ratio = det * unit_inv;
                let chi = ratio.legendre()?;
                out.obs("ratio", ratio);
                out.compare("ratio_is_square", chi >= 0, true);
                if let Some(w) = ratio.sqrt()? {
                    if w * w * unit != det {
                        return Err(Error::Precondition("witness failed re-verification".into()));
                    }
                    out.witness = Some(w.value());
                }
            }
        }
        Ok(out)
    };
    run().unwrap_or_else(|e| CheckOutcome::error(inst.clone(), &e))
}

/// Half-index Lucas values `u_{(p∓1)/2}(A,B)` against the closed form at
/// the supplied root `b` of `B`.
pub fn check_lucas(p: u64, a: u64, b_big: u64, b: u64) -> CheckOutcome {
    let inst = CheckInstance::new(CheckId::Lemma24, p)
        .with_c(a)
        .with_d(b_big)
        .with_aux("b", b);
    let run = || -> Result<CheckOutcome> {
        let ctx = field(p)?;
        let params = LucasParams::new(ctx.elem(a), ctx.elem(b_big));
        let closed = lucas_half_closed(&params, ctx.elem(b))?;
        let mut out = CheckOutcome::new(inst.clone());
        out.compare(
            "u_half_minus",
            lucas_u((p - 1) / 2, &params),
            closed.u_half_minus,
        );
        out.compare(
            "u_half_plus",
            lucas_u(p.div_ceil(2), &params),
            closed.u_half_plus,
        );
        Ok(out)
    };
    run().unwrap_or_else(|e| CheckOutcome::error(inst.clone(), &e))
}

/// Sign of `x ↦ ax` by cycle count against `χ(a)`.
pub fn check_lerch(p: u64, a: u64) -> CheckOutcome {
    let inst = CheckInstance::new(CheckId::Lerch, p).with_c(a);
    let run = || -> Result<CheckOutcome> {
        let ctx = field(p)?;
        let a = ctx.elem(a);
        let mut out = CheckOutcome::new(inst.clone());
        out.compare("sign", perm_sign_mul(a)?, a.legendre()?);
        Ok(out)
    };
    run().unwrap_or_else(|e| CheckOutcome::error(inst.clone(), &e))
}

/// Cauchy closed form against elimination on `[1/(x_i + y_j)]`.
pub fn check_cauchy(p: u64, xs: &[u64], ys: &[u64]) -> CheckOutcome {
    let mut inst = CheckInstance::new(CheckId::Cauchy, p).with_aux("n", xs.len() as u64);
    for (i, &x) in xs.iter().enumerate() {
        inst.aux.insert(format!("x{i}"), x);
    }
    for (j, &y) in ys.iter().enumerate() {
        inst.aux.insert(format!("y{j}"), y);
    }
    cauchy_outcome(inst, p, xs, ys)
}

fn check_cauchy_instance(inst: &CheckInstance) -> CheckOutcome {
    let n = inst.aux.get("n").copied().unwrap_or(0) as usize;
    let pick = |prefix: &str| -> Option<Vec<u64>> {
        (0..n)
            .map(|i| inst.aux.get(&format!("{prefix}{i}")).copied())
            .collect()
    };
    match (pick("x"), pick("y")) {
        (Some(xs), Some(ys)) => cauchy_outcome(inst.clone(), inst.p, &xs, &ys),
        _ => CheckOutcome::error(
            inst.clone(),
            &Error::Usage("cauchy instance lacks xs/ys".into()),
        ),
    }
}

fn cauchy_outcome(inst: CheckInstance, p: u64, xs: &[u64], ys: &[u64]) -> CheckOutcome {
    let run = || -> Result<CheckOutcome> {
        let ctx = field(p)?;
        let xs: Vec<Fp> = xs.iter().map(|&v| ctx.elem(v)).collect();
        let ys: Vec<Fp> = ys.iter().map(|&v| ctx.elem(v)).collect();
        let mut out = CheckOutcome::new(inst.clone());
        let elim = cauchy_matrix(&xs, &ys)?.det()?;
        out.compare("det", elim, cauchy_det(&xs, &ys)?);
        Ok(out)
    };
    run().unwrap_or_else(|e| CheckOutcome::error(inst.clone(), &e))
}

/// `det[1/(i² + j²)]_{1≤i,j≤(p−1)/2} = χ(2)` for `p ≡ 3 (mod 4)`,
/// cross-checked through the Cauchy formula with `x_i = y_i = i²`.
pub fn check_sun_intro(p: u64) -> CheckOutcome {
    let inst = CheckInstance::new(CheckId::SunIntro, p);
    if p % 4 != 3 {
        return CheckOutcome::skip(inst, "p not 3 mod 4");
    }
    let run = || -> Result<CheckOutcome> {
        let ctx = field(p)?;
        let mut out = CheckOutcome::new(inst.clone());
        let det = sun_half_det(ctx)?;
        let chi2 = ctx.elem(2).chi()?;
        out.compare("det", det, chi2);
        let squares: Vec<Fp> = (1..=(p - 1) / 2).map(|i| ctx.elem(i * i)).collect();
        out.compare("cauchy_closed", cauchy_det(&squares, &squares)?, chi2);
        Ok(out)
    };
    run().unwrap_or_else(|e| CheckOutcome::error(inst.clone(), &e))
}

/// Result of one sub-identity: first mismatch, if any.
struct Sub {
    name: &'static str,
    mismatch: Option<String>,
    skipped: Option<&'static str>,
}

impl Sub {
    fn run(name: &'static str, f: impl FnOnce() -> Result<Option<String>>) -> Sub {
        match f() {
            Ok(mismatch) => Sub {
                name,
                mismatch,
                skipped: None,
            },
            Err(e) => Sub {
                name,
                mismatch: Some(format!("error: {e}")),
                skipped: None,
            },
        }
    }

    fn skip(name: &'static str, why: &'static str) -> Sub {
        Sub {
            name,
            mismatch: None,
            skipped: Some(why),
        }
    }
}

fn first_mismatch(
    ks: impl IntoIterator<Item = i64>,
    mut f: impl FnMut(i64) -> Result<(Fp, Fp)>,
) -> Result<Option<String>> {
    for k in ks {
        let (lhs, rhs) = f(k)?;
        if lhs != rhs {
            return Ok(Some(format!("k={k}: {lhs} != {rhs}")));
        }
    }
    Ok(None)
}

/// The identity bundle for rows `p`, `p−1`, `p−2` and the circulant route,
/// every side taken against the recurrence rows.
pub fn check_identities(p: u64, c: u64) -> CheckOutcome {
    let inst = CheckInstance::new(CheckId::Identities, p).with_c(c);
    let ctx = match field(p) {
        Ok(ctx) => ctx,
        Err(e) => return CheckOutcome::error(inst, &e),
    };
    let c = ctx.elem(c);
    let pi = p as i64;
    let half = (pi - 1) / 2;
    let row_p = trinom_row(p as usize, c);
    let row_m1 = trinom_row(p as usize - 1, c);
    let row_m2: TrinomRow<Fp> = trinom_row(p as usize - 2, c);
    let degenerate = is_pm2(c);
    let mut subs = Vec::new();
    let mut out = CheckOutcome::new(inst);

    subs.push(Sub::run("lemma22", || {
        first_mismatch(-pi..=pi, |k| Ok((row_p.get(k), row_p_closed(c, k))))
    }));
    subs.push(Sub::run("lemma25", || {
        first_mismatch([0], |_| Ok((row_m1.get(0), central_pm1(c)?)))
    }));
    subs.push(Sub::run("deriv", || {
        first_mismatch(0..=pi - 2, |k| {
            Ok((
                ctx.from_i64(k) * row_m1.get(k),
                row_m2.get(k + 1) - row_m2.get(k - 1),
            ))
        })
    }));
    subs.push(Sub::run("pm1_rec", || {
        let rec = first_mismatch(1..=pi - 2, |k| {
            Ok((row_m1.get(k + 1), -c * row_m1.get(k) - row_m1.get(k - 1)))
        })?;
        if rec.is_some() {
            return Ok(rec);
        }
        first_mismatch([0], |_| {
            Ok((c, row_m1.get(-1) + c * row_m1.get(0) + row_m1.get(1)))
        })
    }));
    subs.push(Sub::run("pm1_k1", || {
        first_mismatch([1], |_| {
            let chi = (c * c - ctx.elem(4)).chi()?;
            Ok((row_m1.get(1), (ctx.one() - chi) * ctx.elem(2).inv()? * c))
        })
    }));

    // circulant route through a primitive root
    let circ = primitive_root(ctx).and_then(|g| {
        let profile = circulant_profile(c, g)?;
        Ok((
            profile.sum(),
            profile.alternating_sum(),
            build_circulant(&profile).det()?,
        ))
    });
    match circ {
        Ok((s1, s2, det_circ)) => {
            let s1_oracle = -row_m2.get(0);
            let s2_oracle = -ctx.elem(2) * row_m2.get(half);
            out.obs("S1", s1);
            out.exp("S1", s1_oracle);
            out.obs("S2", s2);
            out.exp("S2", s2_oracle);
            subs.push(Sub::run("sum_s1", || {
                first_mismatch([0], |_| Ok((s1, s1_oracle)))
            }));
            subs.push(Sub::run("sum_s2", || {
                first_mismatch([0], |_| Ok((s2, s2_oracle)))
            }));
            subs.push(Sub::run("circulant_eq", || {
                let det_dp = build_dp(c, ctx.one())?.det()?;
                out.obs("det", det_dp);
                out.exp("det", det_circ);
                first_mismatch([0], |_| Ok((det_dp, det_circ)))
            }));
        }
        Err(e) => {
            for name in ["sum_s1", "sum_s2", "circulant_eq"] {
                subs.push(Sub {
                    name,
                    mismatch: Some(format!("error: {e}")),
                    skipped: None,
                });
            }
        }
    }

    if degenerate || p < 5 {
        let why = if degenerate { "c=±2" } else { "p<5" };
        for name in UNDER_TEST_IDENTITIES {
            subs.push(Sub::skip(name, why));
        }
    } else {
        subs.push(Sub::run("pm2_anchors", || {
            let (a0, a1) = pm2_anchors(c)?;
            first_mismatch([0, 1], |k| {
                Ok((row_m2.get(k), if k == 0 { a0 } else { a1 }))
            })
        }));
        subs.push(Sub::run("pm1_closed", || {
            first_mismatch(0..pi, |k| Ok((row_m1.get(k), pm1_row_closed(c, k)?)))
        }));
        subs.push(Sub::run("half_power", || {
            let disc_chi = (c * c - ctx.elem(4)).legendre()?;
            let sign = (-c - ctx.elem(2)).chi()?;
            let (alpha, beta) = quad_roots(c)?;
            let (e, target) = if disc_chi == 1 {
                ((p - 1) / 2, sign)
            } else {
                (p.div_ceil(2), -sign)
            };
            let target = alpha.ctx().embed(target);
            for (name, root) in [("alpha", alpha), ("beta", beta)] {
                let v = root.pow(e);
                if v != target {
                    return Ok(Some(format!("{name}^{e} = {v:?}, expected {}", target.a())));
                }
            }
            Ok(None)
        }));
    }

    for sub in &subs {
        let status = match (&sub.skipped, &sub.mismatch) {
            (Some(why), _) => {
                out.obs(&format!("skip.{}", sub.name), why);
                Status::Skip
            }
            (None, None) => Status::Pass,
            (None, Some(m)) => {
                out.obs(&format!("mismatch.{}", sub.name), m);
                if m.starts_with("error:") {
                    Status::Error
                } else {
                    Status::Discrepancy
                }
            }
        };
        out.obs(&format!("sub.{}", sub.name), status);
        if matches!(status, Status::Discrepancy | Status::Error) {
            out.status = Status::Discrepancy;
            out.tag(sub.name);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_id_round_trip() {
        for id in CheckId::ALL {
            assert_eq!(id.as_str().parse::<CheckId>().unwrap(), id);
        }
        let mut sorted = CheckId::ALL.to_vec();
        sorted.sort_by_key(|id| id.as_str());
        assert_eq!(sorted, CheckId::ALL.to_vec());
        assert!("lemma22".parse::<CheckId>().is_err());
    }

    #[test]
    fn thm11_examples() {
        let o = check_thm11(5, 1);
        assert_eq!(o.status, Status::Pass);
        assert_eq!(o.observed["det"], "3");
        assert_eq!(o.expected["unit"], "3");
        assert_eq!(o.witness, Some(1));

        let o = check_thm11(5, 2);
        assert_eq!(o.status, Status::Pass);
        assert_eq!(o.observed["det"], "0");

        let o = check_thm11(7, 3);
        assert_eq!(o.status, Status::Pass);
        assert_eq!(o.observed["det"], "0");
        assert_eq!(o.witness, None);
        assert!(o.note.contains("det_zero"));

        assert_eq!(check_thm11(3, 0).status, Status::Skip);
        assert_eq!(check_thm11(9, 0).status, Status::Error);
    }

    #[test]
    fn thm12_examples() {
        let o = check_thm12(5, 3, 2);
        assert_eq!(o.status, Status::Pass);
        assert_eq!(o.observed["det"], "0");

        let o = check_thm12(5, 2, 4);
        assert_eq!(o.status, Status::Pass);
        assert_eq!(o.observed["det_via_r1"], "2");
        assert_eq!(o.expected["det_via_r1"], "2");
        assert_eq!(o.expected["det_via_r2"], "2");
        assert_eq!(o.observed["r1"], "2");
        assert_eq!(o.observed["r2"], "3");

        assert_eq!(check_thm12(7, 4, 1).status, Status::Pass);
        // det D_7(4, 0) = 1: the printed statement fails at d = 0
        let o = check_thm12(7, 4, 0);
        assert_eq!(o.status, Status::Discrepancy);
        assert_eq!(o.observed["det"], "1");
        assert!(o.note.contains("outside_proof_scope"));
        assert!(o.is_finding());
        assert_eq!(check_thm12(7, 0, 0).status, Status::Pass);
    }

    #[test]
    fn wsn_examples() {
        let o = check_wsn(5);
        assert_eq!(o.status, Status::Pass);
        assert_eq!(o.observed["det"], "3");
        let o = check_wsn(11);
        assert_eq!(o.status, Status::Pass);
        assert_eq!(o.expected["det"], "8");
        assert_eq!(check_wsn(7).status, Status::Skip);
    }

    #[test]
    fn lemma26_examples() {
        let o = check_lemma26(5, 1);
        assert_eq!(o.status, Status::Pass);
        assert_eq!(o.observed["binom"], "3");
        let o = check_lemma26(7, 0);
        assert_eq!(o.status, Status::Discrepancy);
        assert_eq!(
            (o.observed["binom"].as_str(), o.expected["binom"].as_str()),
            ("5", "0")
        );
        assert!(o.is_finding());
        assert!(!o.is_hard_failure());
        assert_eq!(check_lemma26(7, 1).status, Status::Pass);
        assert_eq!(check_lemma26(7, 2).status, Status::Skip);
        assert_eq!(check_lemma26(3, 1).status, Status::Skip);
    }

    #[test]
    fn circulant_examples() {
        let f5 = FieldCtx::new(5).unwrap();
        let inst = CheckInstance::new(CheckId::Lemma31, 5);
        let prof = CirculantProfile::new([1, 0, 2, 0].map(|v| f5.elem(v)).to_vec()).unwrap();
        let o = check_circulant(inst.clone(), &prof);
        assert_eq!(o.status, Status::Pass);
        assert_eq!(
            (o.observed["det"].as_str(), o.observed["unit"].as_str()),
            ("4", "4")
        );
        assert_eq!(o.witness, Some(1));

        let prof = CirculantProfile::new([1, 2, 0, 2].map(|v| f5.elem(v)).to_vec()).unwrap();
        let o = check_circulant(inst.clone(), &prof);
        assert_eq!(o.observed["S1"], "0");
        assert_eq!(o.observed["det"], "0");
        assert_eq!(o.status, Status::Pass);

        let prof = CirculantProfile::new([2, 1, 1].map(|v| f5.elem(v)).to_vec()).unwrap();
        let o = check_circulant(inst.clone(), &prof);
        assert_eq!(o.status, Status::Pass);
        assert_eq!(
            (o.observed["det"].as_str(), o.observed["S1"].as_str()),
            ("4", "4")
        );

        let prof = CirculantProfile::new([2, 1, 3].map(|v| f5.elem(v)).to_vec()).unwrap();
        assert_eq!(check_circulant(inst, &prof).status, Status::Error);
    }

    #[test]
    fn lucas_examples() {
        let o = check_lucas(7, 3, 1, 1);
        assert_eq!(o.status, Status::Pass);
        assert_eq!(
            (
                o.observed["u_half_minus"].as_str(),
                o.observed["u_half_plus"].as_str()
            ),
            ("1", "0")
        );
        let o = check_lucas(11, 3, 1, 1);
        assert_eq!(o.status, Status::Pass);
        assert_eq!(
            (
                o.observed["u_half_minus"].as_str(),
                o.observed["u_half_plus"].as_str()
            ),
            ("0", "1")
        );
        assert_eq!(check_lucas(7, 3, 1, 6).status, Status::Pass);
        let o = check_lucas(7, 3, 3, 1);
        assert_eq!(o.status, Status::Error);
        assert!(o.is_hard_failure());
    }

    #[test]
    fn sun_intro_examples() {
        let o = check_sun_intro(7);
        assert_eq!(o.status, Status::Pass);
        assert_eq!(o.observed["det"], "1");
        let o = check_sun_intro(11);
        assert_eq!(o.status, Status::Pass);
        assert_eq!(o.expected["det"], "10");
        assert_eq!(check_sun_intro(13).status, Status::Skip);
    }

    #[test]
    fn identities_examples() {
        let o = check_identities(5, 1);
        assert_eq!(o.status, Status::Pass, "{o:?}");
        assert_eq!(
            (o.observed["S1"].as_str(), o.observed["S2"].as_str()),
            ("3", "4")
        );
        assert_eq!(
            (o.expected["S1"].as_str(), o.expected["S2"].as_str()),
            ("3", "4")
        );

        let o = check_identities(7, 0);
        assert_eq!(o.sub_status("lemma25"), Some("pass"));

        let o = check_identities(5, 2);
        assert_eq!(o.sub_status("lemma22"), Some("pass"));
        for name in UNDER_TEST_IDENTITIES {
            assert_eq!(o.sub_status(name), Some("skip"));
        }
    }

    #[test]
    fn cauchy_and_lerch() {
        assert_eq!(check_cauchy(7, &[1, 2], &[1, 2]).status, Status::Pass);
        assert_eq!(check_cauchy(7, &[6, 2], &[1, 2]).status, Status::Error);
        let o = run_check(&check_cauchy(11, &[1, 4, 7], &[2, 3, 5]).instance);
        assert_eq!(o.status, Status::Pass);
        assert_eq!(check_lerch(5, 2).observed["sign"], "-1");
        assert_eq!(check_lerch(5, 0).status, Status::Error);
    }

    #[test]
    fn dispatch_matches_direct_calls() {
        for o in [
            check_thm11(7, 1),
            check_thm12(7, 1, 2),
            check_lemma26(11, 0),
            check_lemma31(7, 1, 3),
            check_lucas(11, 4, 5, 4),
        ] {
            assert_eq!(run_check(&o.instance), o);
        }
        let bare = CheckInstance::new(CheckId::Thm11, 7);
        assert_eq!(run_check(&bare).status, Status::Error);
    }
}
