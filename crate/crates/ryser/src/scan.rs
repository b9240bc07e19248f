//! Enumeration of admissible Ryser parameter tuples `(v, lambda, r, D)`.
//!
//! For each `lambda >= 2`, `r = r1 - r2 >= 1` and `D` strictly between
//! `-lambda` and `lambda - 1`, the order must satisfy
//! `v = 2*lambda ± sqrt((2*lambda-1)^2 + (r-1)^2 - 4*D*r - 1)`, so the
//! radicand has to be a perfect square. Every surviving `v` is then pushed
//! through the remaining necessary conditions: integral replication
//! numbers, `rho = (v-1+r)/(v-1-r)` within its bounds, integral positive
//! class sizes `e1, e2`, and integral `x, y`. The conjectured window
//! `4*lambda-1 <= v <= lambda^2+lambda+1` is recorded on each candidate
//! but never used as a filter.
//!
//! The scan is necessary-condition only: emitted tuples may or may not be
//! realizable by an actual design.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::design::IncidenceStructure;
use crate::error::{Error, Result};
use crate::params::RyserProfile;

/// Per-condition pass markers. Candidates are emitted only when every
/// flag is true; the struct exists so audits can re-check each condition
/// separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanFlags {
    /// The radicand is a perfect square.
    pub square: bool,
    /// `v >= 4` (no structure on fewer points has two block sizes).
    pub v_admissible: bool,
    /// `v + r` odd, so `r1 = (v+1+r)/2` and `r2` are integers.
    pub parity: bool,
    /// `v - 1 - r > 0`, so `r2 > 1` and `rho` is defined.
    pub rho_defined: bool,
    /// `lambda/(lambda-1) <= rho <= lambda` and `rho` outside
    /// `(lambda-1, lambda)`.
    pub rho_in_range: bool,
    /// `e1` and `e2` are positive integers with `e1 + e2 = v`.
    pub e_integral: bool,
    /// `x = (e2-lambda)/c` and `y = (e1-lambda)/d` are integers.
    pub xy_integral: bool,
}

impl ScanFlags {
    pub fn all(&self) -> bool {
        self.square
            && self.v_admissible
            && self.parity
            && self.rho_defined
            && self.rho_in_range
            && self.e_integral
            && self.xy_integral
    }
}

/// One admissible parameter tuple together with its derived scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanCandidate {
    pub v: i64,
    pub lam: i64,
    pub r: i64,
    pub seress_d: i64,
    pub c: i64,
    pub d: i64,
    pub g: i64,
    pub a: i64,
    pub e1: i64,
    pub e2: i64,
    pub x: i64,
    pub y: i64,
    pub flags: ScanFlags,
    pub conjecture_ok: bool,
}

#[derive(Serialize)]
struct ScanRecord {
    v: i64,
    lambda: i64,
    r: i64,
    #[serde(rename = "D")]
    d: i64,
    rho: String,
    e1: i64,
    e2: i64,
    x: i64,
    y: i64,
    conjecture_ok: bool,
}

impl ScanCandidate {
    pub fn tuple(&self) -> (i64, i64, i64, i64) {
        (self.v, self.lam, self.r, self.seress_d)
    }

    /// One flat JSON object per candidate, for line-oriented output.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ScanRecord {
            v: self.v,
            lambda: self.lam,
            r: self.r,
            d: self.seress_d,
            rho: format!("{}/{}", self.c, self.d),
            e1: self.e1,
            e2: self.e2,
            x: self.x,
            y: self.y,
            conjecture_ok: self.conjecture_ok,
        })
        .expect("record serialization cannot fail")
    }
}

/// Floor square root with an exactness flag. Errors on negative input.
pub fn integer_sqrt(n: &BigInt) -> Result<(BigInt, bool)> {
    if n.is_negative() {
        return Err(Error::invalid(format!("integer_sqrt of negative value {n}")));
    }
    let s = n.sqrt();
    let exact = &s * &s == *n;
    Ok((s, exact))
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Evaluates one `(v, lambda, r, D)` tuple against every necessary
/// condition; returns the candidate when all of them hold.
fn evaluate_candidate(v: i64, lam: i64, r: i64, seress_d: i64, square: bool) -> Option<ScanCandidate> {
    let mut flags = ScanFlags {
        square,
        v_admissible: v >= 4,
        parity: (v + r) % 2 != 0,
        rho_defined: v - 1 - r > 0,
        rho_in_range: false,
        e_integral: false,
        xy_integral: false,
    };
    if !(flags.square && flags.v_admissible && flags.parity && flags.rho_defined) {
        return None;
    }
    let r1 = (v + 1 + r) / 2;
    let r2 = (v + 1 - r) / 2;
    let g = gcd(r1 - 1, r2 - 1);
    let c = (r1 - 1) / g;
    let d = (r2 - 1) / g;

    // lambda/(lambda-1) <= c/d <= lambda, rho not in (lambda-1, lambda);
    // all comparisons cross-multiplied to stay in integers
    let lower_ok = lam * d <= c * (lam - 1);
    let upper_ok = c <= lam * d;
    let outside_gap = !((lam - 1) * d < c && c < lam * d);
    flags.rho_in_range = lower_ok && upper_ok && outside_gap;
    if !flags.rho_in_range {
        return None;
    }

    let e1_num = (lam + seress_d) * d;
    let e2_num = (lam - (seress_d + 1)) * c;
    if e1_num % c != 0 || e2_num % d != 0 {
        return None;
    }
    let e1 = lam + e1_num / c;
    let e2 = lam + e2_num / d;
    flags.e_integral = e1 > 0 && e2 > 0 && e1 + e2 == v;
    if !flags.e_integral {
        return None;
    }

    if (e2 - lam) % c != 0 || (e1 - lam) % d != 0 {
        return None;
    }
    let x = (e2 - lam) / c;
    let y = (e1 - lam) / d;
    flags.xy_integral = true;

    Some(ScanCandidate {
        v,
        lam,
        r,
        seress_d,
        c,
        d,
        g,
        a: c - d,
        e1,
        e2,
        x,
        y,
        flags,
        conjecture_ok: 4 * lam - 1 <= v && v <= lam * lam + lam + 1,
    })
}

/// Enumerates all candidates with `2 <= lambda <= lam_max` and
/// `1 <= r <= r_max`. `D` ranges over the open interval
/// `(-lambda, lambda-1)`, restricted to `{0, -1}` when `type1_only` is
/// set. Output is sorted by `(lambda, v, r, D)` and fully deterministic.
pub fn scan_params(lam_max: i64, r_max: i64, type1_only: bool) -> Vec<ScanCandidate> {
    let mut out = Vec::new();
    for lam in 2..=lam_max {
        for r in 1..=r_max {
            let d_values: Vec<i64> = if type1_only {
                vec![-1, 0]
            } else {
                (-lam + 1..=lam - 2).collect()
            };
            for seress_d in d_values {
                let sq = BigInt::from(2 * lam - 1) * BigInt::from(2 * lam - 1)
                    + BigInt::from(r - 1) * BigInt::from(r - 1)
                    - BigInt::from(4) * BigInt::from(seress_d) * BigInt::from(r)
                    - BigInt::from(1);
                if sq.is_negative() {
                    continue;
                }
                let (s, exact) = integer_sqrt(&sq).expect("radicand checked nonnegative");
                if !exact {
                    continue;
                }
                let s = s.to_i64().expect("root fits i64 for i64 inputs");
                // both roots are tested; they coincide only when s = 0
                let mut vs = vec![2 * lam - s];
                if s != 0 {
                    vs.push(2 * lam + s);
                }
                for v in vs {
                    if let Some(c) = evaluate_candidate(v, lam, r, seress_d, true) {
                        out.push(c);
                    }
                }
            }
        }
    }
    out.sort_by_key(|c| (c.lam, c.v, c.r, c.seress_d));
    out
}

/// Re-derives every condition of [`scan_params`] from the candidate's
/// `(v, lambda, r, D)` tuple and checks the stored scalars against the
/// recomputation. Used by the self-audit tests.
pub fn audit_candidate(c: &ScanCandidate) -> bool {
    let sq = BigInt::from(2 * c.lam - 1) * BigInt::from(2 * c.lam - 1)
        + BigInt::from(c.r - 1) * BigInt::from(c.r - 1)
        - BigInt::from(4) * BigInt::from(c.seress_d) * BigInt::from(c.r)
        - BigInt::from(1);
    if sq.is_negative() {
        return false;
    }
    let Ok((s, true)) = integer_sqrt(&sq) else {
        return false;
    };
    let Some(s) = s.to_i64() else { return false };
    if c.v != 2 * c.lam - s && c.v != 2 * c.lam + s {
        return false;
    }
    match evaluate_candidate(c.v, c.lam, c.r, c.seress_d, true) {
        Some(recomputed) => recomputed == *c && c.flags.all(),
        None => false,
    }
}

/// Soundness cross-check between the scan and actually constructed
/// designs.
#[derive(Debug, Clone)]
pub struct CoverageReport {
    /// Tuples `(v, lambda, r, D)` realized by at least one design.
    pub realized: Vec<(i64, i64, i64, i64)>,
    /// Candidate tuples no supplied design realizes. Expected to be most
    /// of the scan: the conditions are necessary, not sufficient.
    pub unrealized: Vec<(i64, i64, i64, i64)>,
}

/// Asserts that every design's `(v, lambda, r, D)` tuple appears among the
/// candidates. A missing tuple is fatal: it means one of the scan filters
/// rejects a parameter set that provably exists.
pub fn realize_check(
    candidates: &[ScanCandidate],
    designs: &[(IncidenceStructure, RyserProfile)],
) -> Result<CoverageReport> {
    let mut realized = Vec::new();
    for (_, profile) in designs {
        let tuple = (profile.v, profile.lam, profile.r(), profile.seress_d);
        if !candidates.iter().any(|c| c.tuple() == tuple) {
            return Err(Error::inconsistency(format!(
                "realized tuple (v={}, lambda={}, r={}, D={}) is missing from the scan output",
                tuple.0, tuple.1, tuple.2, tuple.3
            )));
        }
        if !realized.contains(&tuple) {
            realized.push(tuple);
        }
    }
    let unrealized = candidates
        .iter()
        .map(|c| c.tuple())
        .filter(|t| !realized.contains(t))
        .collect();
    Ok(CoverageReport {
        realized,
        unrealized,
    })
}
