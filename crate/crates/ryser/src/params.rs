//! The Ryser parameter system.
//!
//! Every Ryser design has exactly two replication numbers `r1 > r2` with
//! `r1 + r2 = v + 1`. From those and the index `lambda` the whole scalar
//! system follows: `rho = (r1-1)/(r2-1) = c/d` in lowest terms,
//! `g = gcd(r1-1, r2-1)`, `a = c - d`, the point-class sizes `e1, e2`, the
//! invariant `D = e1 - r2`, and the integers `x = (e2-lambda)/c`,
//! `y = (e1-lambda)/d`. [`ryser_profile`] computes all of them and asserts
//! every identity that ties them together; [`check_identities`] re-verifies
//! the full equation system with exact rationals and reports both sides of
//! each equation.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::design::{DesignKind, IncidenceStructure};
use crate::error::{Error, Result};

/// All derived scalars of one Ryser design, plus the two point classes.
///
/// `E1` is always the class with the larger replication number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RyserProfile {
    pub v: i64,
    pub lam: i64,
    pub r1: i64,
    pub r2: i64,
    pub e1: i64,
    pub e2: i64,
    /// Numerator of `rho = (r1-1)/(r2-1)` in lowest terms.
    pub c: i64,
    /// Denominator of `rho` in lowest terms.
    pub d: i64,
    /// `gcd(r1-1, r2-1)`.
    pub g: i64,
    /// `c - d`.
    pub a: i64,
    /// The class-imbalance invariant `e1 - r2 = r1 - e2 - 1`; a Ryser
    /// design is Type-1 exactly when this is 0 or -1.
    pub seress_d: i64,
    /// `(e2 - lam) / c`.
    pub x: i64,
    /// `(e1 - lam) / d`.
    pub y: i64,
    /// Points with replication `r1`, ascending.
    pub e1_points: Vec<usize>,
    /// Points with replication `r2`, ascending.
    pub e2_points: Vec<usize>,
}

impl RyserProfile {
    pub fn rho(&self) -> BigRational {
        BigRational::new(BigInt::from(self.c), BigInt::from(self.d))
    }

    /// `r1 - r2`, the `r` used by the necessary conditions.
    pub fn r(&self) -> i64 {
        self.r1 - self.r2
    }
}

/// Per-block class counts: `size = 2*lam + t*a`, `tau1 = |E1 ∩ A|`,
/// `tau2 = |E2 ∩ A|`. Blocks are large, average or small as `t` is
/// positive, zero or negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSignature {
    pub block_index: usize,
    pub size: i64,
    pub t: i64,
    pub tau1: i64,
    pub tau2: i64,
}

/// One verified equation: both sides as exact rationals, kept even on pass
/// so audit output can show the values.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub pass: bool,
}

#[derive(Debug, Clone, Default)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: impl Into<String>, lhs: BigRational, rhs: BigRational) {
        let pass = lhs == rhs;
        self.checks.push(IdentityCheck {
            name: name.into(),
            lhs,
            rhs,
            pass,
        });
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Counts each point's block membership and splits the point set into the
/// two replication classes. Errors if the structure does not have exactly
/// two replication numbers summing to `v + 1`.
pub fn replication_profile(
    s: &IncidenceStructure,
) -> Result<(i64, i64, Vec<usize>, Vec<usize>)> {
    let v = s.v();
    let mut counts = vec![0i64; v];
    for block in s.blocks() {
        for &p in block {
            counts[p] += 1;
        }
    }
    let mut distinct: Vec<i64> = counts.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != 2 {
        return Err(Error::invalid(format!(
            "expected exactly two replication numbers, found {:?}",
            distinct
        )));
    }
    let (r2, r1) = (distinct[0], distinct[1]);
    if r1 + r2 != v as i64 + 1 {
        return Err(Error::invalid(format!(
            "replication numbers {r1} and {r2} do not sum to v+1 = {}",
            v + 1
        )));
    }
    let e1_points: Vec<usize> = (0..v).filter(|&p| counts[p] == r1).collect();
    let e2_points: Vec<usize> = (0..v).filter(|&p| counts[p] == r2).collect();
    Ok((r1, r2, e1_points, e2_points))
}

/// Computes the full parameter system of a Ryser design and asserts every
/// invariant that links the scalars before returning.
pub fn ryser_profile(s: &IncidenceStructure) -> Result<RyserProfile> {
    let lam = match s.verify() {
        DesignKind::Ryser { lam } => lam as i64,
        other => {
            return Err(Error::invalid(format!(
                "not a Ryser design: {other}"
            )))
        }
    };
    let (r1, r2, e1_points, e2_points) = replication_profile(s)?;
    let v = s.v() as i64;
    if r2 < 2 {
        return Err(Error::inconsistency(format!(
            "replication number r2={r2} leaves rho undefined"
        )));
    }
    let g = gcd(r1 - 1, r2 - 1);
    let c = (r1 - 1) / g;
    let d = (r2 - 1) / g;
    let a = c - d;
    let e1 = e1_points.len() as i64;
    let e2 = e2_points.len() as i64;
    let seress_d = e1 - r2;

    if (e2 - lam) % c != 0 {
        return Err(Error::inconsistency(format!(
            "c={c} does not divide e2-lambda={}",
            e2 - lam
        )));
    }
    if (e1 - lam) % d != 0 {
        return Err(Error::inconsistency(format!(
            "d={d} does not divide e1-lambda={}",
            e1 - lam
        )));
    }
    let x = (e2 - lam) / c;
    let y = (e1 - lam) / d;

    let profile = RyserProfile {
        v,
        lam,
        r1,
        r2,
        e1,
        e2,
        c,
        d,
        g,
        a,
        seress_d,
        x,
        y,
        e1_points,
        e2_points,
    };
    assert_profile_invariants(&profile)?;
    Ok(profile)
}

fn assert_profile_invariants(p: &RyserProfile) -> Result<()> {
    let check = |ok: bool, what: &str| -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::inconsistency(format!("profile invariant failed: {what}")))
        }
    };
    check(p.r1 > p.r2, "r1 > r2")?;
    check(p.r1 + p.r2 == p.v + 1, "r1 + r2 = v + 1")?;
    check(p.r1 - 1 == p.c * p.g, "r1 - 1 = c*g")?;
    check(p.r2 - 1 == p.d * p.g, "r2 - 1 = d*g")?;
    check(p.v - 1 == (p.c + p.d) * p.g, "v - 1 = (c+d)*g")?;
    check(gcd(p.c, p.d) == 1, "gcd(c, d) = 1")?;
    check(p.a >= 1, "a = c - d >= 1")?;
    check(gcd(p.c, p.a) == 1, "gcd(c, a) = 1")?;
    check(gcd(p.d, p.a) == 1, "gcd(d, a) = 1")?;
    check(p.e1 > 0 && p.e2 > 0, "e1, e2 > 0")?;
    check(p.e1 + p.e2 == p.v, "e1 + e2 = v")?;
    check(p.seress_d == p.e1 - p.r2, "D = e1 - r2")?;
    check(p.seress_d == p.r1 - p.e2 - 1, "D = r1 - e2 - 1")?;
    check(p.e2 == p.lam + p.x * p.c, "e2 = lambda + x*c")?;
    check(p.e1 == p.lam + p.y * p.d, "e1 = lambda + y*d")?;
    check(p.r1 == 2 * p.lam + p.x * p.a, "r1 = 2*lambda + x*a")?;
    check(p.r2 == 2 * p.lam - p.y * p.a, "r2 = 2*lambda - y*a")?;
    Ok(())
}

/// Computes and cross-checks one block's `(t, tau1, tau2)` signature.
pub fn block_signature(
    s: &IncidenceStructure,
    p: &RyserProfile,
    block_index: usize,
) -> Result<BlockSignature> {
    if block_index >= s.v() {
        return Err(Error::invalid(format!(
            "block index {block_index} out of range (v={})",
            s.v()
        )));
    }
    let block = s.block(block_index);
    let size = block.len() as i64;
    if (size - 2 * p.lam) % p.a != 0 {
        return Err(Error::inconsistency(format!(
            "block {block_index} size {size} is not 2*lambda + t*a for integral t"
        )));
    }
    let t = (size - 2 * p.lam) / p.a;
    let tau1 = crate::design::intersection_size(block, &p.e1_points) as i64;
    let tau2 = crate::design::intersection_size(block, &p.e2_points) as i64;
    if tau1 + tau2 != size {
        return Err(Error::inconsistency(format!(
            "block {block_index}: tau1 + tau2 != size"
        )));
    }
    if tau1 != p.lam - t * p.d || tau2 != p.lam + t * p.c {
        return Err(Error::inconsistency(format!(
            "block {block_index}: tau counts ({tau1}, {tau2}) disagree with \
             (lambda - t*d, lambda + t*c) = ({}, {})",
            p.lam - t * p.d,
            p.lam + t * p.c
        )));
    }
    Ok(BlockSignature {
        block_index,
        size,
        t,
        tau1,
        tau2,
    })
}

pub fn block_signatures(s: &IncidenceStructure, p: &RyserProfile) -> Result<Vec<BlockSignature>> {
    (0..s.v()).map(|i| block_signature(s, p, i)).collect()
}

/// Verifies the whole equation system with exact arithmetic. Failures are
/// report entries, never errors.
pub fn check_identities(s: &IncidenceStructure, p: &RyserProfile) -> Result<IdentityReport> {
    let mut report = IdentityReport::default();
    let rho = p.rho();
    let one = rat(1);
    let lam = rat(p.lam);
    let rho1 = &rho + &one;

    // sum over blocks of 1/(k - lambda) = (rho+1)^2/rho - 1/lambda
    let mut sum = BigRational::from(BigInt::from(0));
    for block in s.blocks() {
        sum += rat(1) / rat(block.len() as i64 - p.lam);
    }
    report.push(
        "eq1: sum 1/(k-lambda) = (rho+1)^2/rho - 1/lambda",
        sum,
        &rho1 * &rho1 / &rho - &one / &lam,
    );
    report.push(
        "eq2: (rho-1)*e1 = lambda*(rho+1) - r2",
        (&rho - &one) * rat(p.e1),
        &lam * &rho1 - rat(p.r2),
    );
    report.push(
        "eq3: e1 = lambda + (lambda+D)/rho",
        rat(p.e1),
        &lam + rat(p.lam + p.seress_d) / &rho,
    );
    report.push(
        "eq4: (rho-1)*e2 = rho*r1 - lambda*(rho+1)",
        (&rho - &one) * rat(p.e2),
        &rho * rat(p.r1) - &lam * &rho1,
    );
    report.push(
        "eq5: e2 = lambda + (lambda-(D+1))*rho",
        rat(p.e2),
        &lam + rat(p.lam - (p.seress_d + 1)) * &rho,
    );
    report.push(
        "eq6: r1 = 2*lambda + (a/c)*(e2-lambda)",
        rat(p.r1),
        rat(2 * p.lam) + rat(p.a) / rat(p.c) * rat(p.e2 - p.lam),
    );
    report.push(
        "eq7: r2 = 2*lambda - (a/d)*(e1-lambda)",
        rat(p.r2),
        rat(2 * p.lam) - rat(p.a) / rat(p.d) * rat(p.e1 - p.lam),
    );
    report.push(
        "eq8: 1 + rho*e1 + e2/rho = lambda*(rho+1)^2/rho",
        &one + &rho * rat(p.e1) + rat(p.e2) / &rho,
        &lam * &rho1 * &rho1 / &rho,
    );
    for sig in block_signatures(s, p)? {
        report.push(
            format!("eq9[block {}]: (r1-1)*tau1 + (r2-1)*tau2 = lambda*(v-1)", sig.block_index),
            rat((p.r1 - 1) * sig.tau1 + (p.r2 - 1) * sig.tau2),
            rat(p.lam * (p.v - 1)),
        );
        report.push(
            format!("eq10[block {}]: rho*tau1 + tau2 = lambda*(rho+1)", sig.block_index),
            &rho * rat(sig.tau1) + rat(sig.tau2),
            &lam * &rho1,
        );
    }
    report.push("eq11: e2 = lambda + x*c", rat(p.e2), rat(p.lam + p.x * p.c));
    Ok(report)
}

/// Predicts the index and `x` of the design obtained by complementing at a
/// block of size `k`: `lam_bar = k - lam`, `x_bar = x - 2t`.
pub fn complement_params(p: &RyserProfile, k: i64) -> Result<(i64, i64)> {
    if (k - 2 * p.lam) % p.a != 0 {
        return Err(Error::invalid(format!(
            "block size {k} is not of the form 2*lambda + t*a (lambda={}, a={})",
            p.lam, p.a
        )));
    }
    let t = (k - 2 * p.lam) / p.a;
    Ok((k - p.lam, p.x - 2 * t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::catalog;

    fn fano_star0() -> IncidenceStructure {
        IncidenceStructure::from_difference_set(7, &[1, 2, 4])
            .unwrap()
            .complement(0)
            .unwrap()
    }

    fn biplane_star0() -> IncidenceStructure {
        IncidenceStructure::from_difference_set(11, &[1, 3, 4, 5, 9])
            .unwrap()
            .complement(0)
            .unwrap()
    }

    fn pg23_star0() -> IncidenceStructure {
        IncidenceStructure::from_difference_set(13, &[0, 1, 3, 9])
            .unwrap()
            .complement(0)
            .unwrap()
    }

    /// A near-pencil: one long block plus v-1 two-point blocks through a
    /// common point. The smallest Ryser designs with lambda = 1.
    fn near_pencil(v: usize) -> IncidenceStructure {
        let mut blocks = vec![(1..v).collect::<Vec<_>>()];
        for i in 1..v {
            blocks.push(vec![0, i]);
        }
        IncidenceStructure::new(v, blocks).unwrap()
    }

    #[test]
    fn replication_fano() {
        let (r1, r2, e1, e2) = replication_profile(&fano_star0()).unwrap();
        assert_eq!((r1, r2), (5, 3));
        assert_eq!(e1, vec![1, 2, 4]); // the points of the kept block
        assert_eq!(e2.len(), 4);
    }

    #[test]
    fn replication_biplane_and_pg23() {
        let (r1, r2, e1, e2) = replication_profile(&biplane_star0()).unwrap();
        assert_eq!((r1, r2, e1.len(), e2.len()), (7, 5, 5, 6));
        let (r1, r2, e1, e2) = replication_profile(&pg23_star0()).unwrap();
        assert_eq!((r1, r2, e1.len(), e2.len()), (10, 4, 4, 9));
    }

    #[test]
    fn profile_fano() {
        let p = ryser_profile(&fano_star0()).unwrap();
        assert_eq!(
            (p.lam, p.c, p.d, p.g, p.a, p.seress_d, p.x, p.y),
            (2, 2, 1, 2, 1, 0, 1, 1)
        );
    }

    #[test]
    fn profile_biplane() {
        let p = ryser_profile(&biplane_star0()).unwrap();
        assert_eq!(
            (p.lam, p.c, p.d, p.g, p.a, p.seress_d, p.x, p.y),
            (3, 3, 2, 2, 1, 0, 1, 1)
        );
    }

    #[test]
    fn profile_pg23() {
        let p = ryser_profile(&pg23_star0()).unwrap();
        assert_eq!(
            (p.lam, p.c, p.d, p.g, p.a, p.seress_d, p.x, p.y),
            (3, 3, 1, 3, 2, 0, 2, 1)
        );
    }

    #[test]
    fn profile_rejects_symmetric() {
        let fano = IncidenceStructure::from_difference_set(7, &[1, 2, 4]).unwrap();
        assert!(ryser_profile(&fano).is_err());
    }

    #[test]
    fn profile_near_pencil() {
        // lambda = 1 designs sit outside the rho-bound theorem but still
        // have a complete parameter system.
        for v in [5usize, 8, 11] {
            let p = ryser_profile(&near_pencil(v)).unwrap();
            assert_eq!(p.lam, 1);
            assert_eq!((p.r1, p.r2), (v as i64 - 1, 2));
            assert_eq!((p.e1, p.e2), (1, v as i64 - 1));
            assert_eq!(p.seress_d, -1);
            assert_eq!((p.x, p.y), (1, 0));
        }
    }

    #[test]
    fn signature_fano_small_block() {
        let s = fano_star0();
        let p = ryser_profile(&s).unwrap();
        let sig = block_signature(&s, &p, 0).unwrap();
        assert_eq!((sig.size, sig.t, sig.tau1, sig.tau2), (3, -1, 3, 0));
        for i in 1..7 {
            let sig = block_signature(&s, &p, i).unwrap();
            assert_eq!((sig.size, sig.t, sig.tau1, sig.tau2), (4, 0, 2, 2));
        }
    }

    #[test]
    fn signature_pg23_small_block() {
        let s = pg23_star0();
        let p = ryser_profile(&s).unwrap();
        let sig = block_signature(&s, &p, 0).unwrap();
        assert_eq!((sig.size, sig.t, sig.tau1, sig.tau2), (4, -1, 4, 0));
    }

    #[test]
    fn identities_fano() {
        let s = fano_star0();
        let p = ryser_profile(&s).unwrap();
        let report = check_identities(&s, &p).unwrap();
        assert!(report.all_pass());
        // eq1 evaluates to 4 on both sides
        let eq1 = &report.checks[0];
        assert_eq!(eq1.lhs, rat(4));
        assert_eq!(eq1.rhs, rat(4));
        // eq9 on the size-3 block: 4*3 + 2*0 = 12 = 2*6
        let eq9 = report
            .checks
            .iter()
            .find(|c| c.name.starts_with("eq9[block 0]"))
            .unwrap();
        assert_eq!(eq9.lhs, rat(12));
        assert_eq!(eq9.rhs, rat(12));
    }

    #[test]
    fn identities_biplane() {
        let s = biplane_star0();
        let p = ryser_profile(&s).unwrap();
        let report = check_identities(&s, &p).unwrap();
        assert!(report.all_pass());
        let eq1 = &report.checks[0];
        assert_eq!(eq1.lhs, BigRational::new(23.into(), 6.into()));
    }

    #[test]
    fn tau_sums_count_both_ways() {
        for e in catalog() {
            let s = e.build().unwrap().complement(0).unwrap();
            let p = ryser_profile(&s).unwrap();
            let sigs = block_signatures(&s, &p).unwrap();
            let tau1_sum: i64 = sigs.iter().map(|s| s.tau1).sum();
            let tau2_sum: i64 = sigs.iter().map(|s| s.tau2).sum();
            assert_eq!(tau1_sum, p.r1 * p.e1, "{}", e.name);
            assert_eq!(tau2_sum, p.r2 * p.e2, "{}", e.name);
        }
    }

    #[test]
    fn complement_params_fano() {
        let p = ryser_profile(&fano_star0()).unwrap();
        assert_eq!(complement_params(&p, 4).unwrap(), (2, 1));
        assert_eq!(complement_params(&p, 3).unwrap(), (1, 3));
    }

    #[test]
    fn complement_params_biplane_average_block() {
        let p = ryser_profile(&biplane_star0()).unwrap();
        assert_eq!(complement_params(&p, 6).unwrap(), (3, 1));
    }

    #[test]
    fn complement_params_rejects_unreachable_size() {
        let p = ryser_profile(&pg23_star0()).unwrap();
        // a = 2, so sizes must have the parity of 2*lambda
        assert!(complement_params(&p, 5).is_err());
    }

    #[test]
    fn complement_prediction_matches_rebuilt_profile() {
        for e in catalog() {
            let s = e.build().unwrap().complement(0).unwrap();
            let p = ryser_profile(&s).unwrap();
            for idx in 0..s.v() {
                let k = s.block(idx).len() as i64;
                let (lam_bar, x_bar) = complement_params(&p, k).unwrap();
                let s2 = s.complement(idx).unwrap();
                match s2.verify() {
                    DesignKind::Ryser { .. } => {
                        let p2 = ryser_profile(&s2).unwrap();
                        assert_eq!(p2.lam, lam_bar, "{} idx {idx}", e.name);
                        if p2.r1 == p.r1 {
                            assert_eq!(p2.x, x_bar, "{} idx {idx}", e.name);
                        }
                    }
                    DesignKind::Symmetric { .. } => {
                        // complementing back at the kept block
                        assert_eq!(lam_bar, k - p.lam);
                    }
                    DesignKind::Invalid { reason } => {
                        panic!("complement of {} at {idx} invalid: {reason}", e.name)
                    }
                }
            }
        }
    }
}
