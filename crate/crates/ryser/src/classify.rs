//! Type-1 detection and the bounds and necessary conditions that every
//! Ryser design must satisfy.
//!
//! Two independent Type-1 characterizations are implemented: the column
//! test (two block sizes, one occurring exactly once) and the invariant
//! test (`D = 0` or `D = -1`). They must agree on every genuine Ryser
//! design. On top of those sit the perfect-square necessary condition in
//! `v`, `lambda`, `r = r1 - r2`, `D`, the order bounds relating `v` and
//! `lambda`, and the two-block-size uniqueness results.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::design::IncidenceStructure;
use crate::error::{Error, Result};
use crate::linalg::rational;
use crate::params::{block_signatures, ryser_profile, RyserProfile};
use crate::scan::integer_sqrt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriState {
    Yes,
    No,
    NotApplicable,
}

impl std::fmt::Display for TriState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TriState::Yes => write!(f, "yes"),
            TriState::No => write!(f, "no"),
            TriState::NotApplicable => write!(f, "not-applicable"),
        }
    }
}

/// Column-sum test: `Yes` when the block-size multiset has exactly two
/// distinct values and one of them occurs exactly once, `No` when there
/// are two values but both repeat, `NotApplicable` when the structure does
/// not have exactly two distinct sizes at all.
pub fn type1_by_columns(s: &IncidenceStructure) -> TriState {
    let sizes = s.block_sizes();
    let mut distinct: Vec<usize> = sizes.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != 2 {
        return TriState::NotApplicable;
    }
    let count0 = sizes.iter().filter(|&&k| k == distinct[0]).count();
    let count1 = sizes.len() - count0;
    if count0 == 1 || count1 == 1 {
        TriState::Yes
    } else {
        TriState::No
    }
}

/// Invariant test: Type-1 exactly when `D` is 0 or -1.
pub fn type1_by_d(p: &RyserProfile) -> bool {
    p.seress_d == 0 || p.seress_d == -1
}

/// The perfect-square necessary condition evaluated on the scalars
/// `(v, lambda, r, D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NecessaryCondition {
    /// `(2*lambda-1)^2 + (r-1)^2 - 4*D*r - 1`; `v` must be `2*lambda ± s`
    /// for an integer `s` with `s^2` equal to this.
    pub sq_value: BigInt,
    pub is_square: bool,
    pub root: Option<BigInt>,
    pub v_formula_ok: bool,
    /// For `D = 0`: `(2*lambda-1)^2 + r*(r-2)`; for `D = -1`:
    /// `(2*lambda-1)^2 + r*(r+2)`. Equal to `sq_value` by algebra, kept as
    /// an explicit cross-check.
    pub special_square: Option<(BigInt, bool)>,
}

pub fn necessary_condition(v: i64, lam: i64, r: i64, d: i64) -> NecessaryCondition {
    let big = |n: i64| BigInt::from(n);
    let two_lam_1 = big(2 * lam - 1);
    let sq_value = &two_lam_1 * &two_lam_1 + big(r - 1) * big(r - 1) - big(4) * big(d) * big(r)
        - BigInt::one();
    let (root, is_square) = match integer_sqrt(&sq_value) {
        Ok((s, exact)) => (Some(s), exact),
        Err(_) => (None, false),
    };
    let v_formula_ok = match (&root, is_square) {
        (Some(s), true) => {
            let v = big(v);
            v == big(2 * lam) + s || v == big(2 * lam) - s
        }
        _ => false,
    };
    let special_square = match d {
        0 => Some(&two_lam_1 * &two_lam_1 + big(r) * big(r - 2)),
        -1 => Some(&two_lam_1 * &two_lam_1 + big(r) * big(r + 2)),
        _ => None,
    }
    .map(|value| {
        let exact = matches!(integer_sqrt(&value), Ok((_, true)));
        (value, exact)
    });
    NecessaryCondition {
        sq_value,
        is_square,
        root: root.filter(|_| is_square),
        v_formula_ok,
        special_square,
    }
}

pub fn necessary_condition_for(p: &RyserProfile) -> NecessaryCondition {
    necessary_condition(p.v, p.lam, p.r(), p.seress_d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundOutcome {
    Pass,
    Fail,
    NotApplicable,
}

impl std::fmt::Display for BoundOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundOutcome::Pass => write!(f, "pass"),
            BoundOutcome::Fail => write!(f, "FAIL"),
            BoundOutcome::NotApplicable => write!(f, "not-applicable"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub name: &'static str,
    pub outcome: BoundOutcome,
    pub detail: String,
}

impl BoundCheck {
    pub fn failed(&self) -> bool {
        self.outcome == BoundOutcome::Fail
    }
}

fn outcome(ok: bool) -> BoundOutcome {
    if ok {
        BoundOutcome::Pass
    } else {
        BoundOutcome::Fail
    }
}

/// Evaluates every order bound. The per-block `tau` bounds need the
/// structure itself and are skipped when it is not supplied.
pub fn bounds_report(p: &RyserProfile, s: Option<&IncidenceStructure>) -> Vec<BoundCheck> {
    let mut checks = Vec::new();
    let (v, lam, d) = (p.v, p.lam, p.seress_d);

    checks.push(if d <= -1 {
        BoundCheck {
            name: "v_lower_when_d_negative",
            outcome: outcome(v >= 4 * lam - 1),
            detail: format!("D={d} <= -1 so v={v} must be >= 4*lambda-1 = {}", 4 * lam - 1),
        }
    } else {
        BoundCheck {
            name: "v_lower_when_d_negative",
            outcome: BoundOutcome::NotApplicable,
            detail: format!("D={d} >= 0"),
        }
    });
    checks.push(if d >= 0 {
        BoundCheck {
            name: "v_upper_when_d_nonnegative",
            outcome: outcome(v <= lam * lam + lam + 1),
            detail: format!(
                "D={d} >= 0 so v={v} must be <= lambda^2+lambda+1 = {}",
                lam * lam + lam + 1
            ),
        }
    } else {
        BoundCheck {
            name: "v_upper_when_d_nonnegative",
            outcome: BoundOutcome::NotApplicable,
            detail: format!("D={d} < 0"),
        }
    });

    let lower_holds = v >= 4 * lam - 1;
    let gap_holds = p.e2 - p.e1 >= 2 * d + 1;
    checks.push(BoundCheck {
        name: "v_lower_iff_class_gap",
        outcome: outcome(lower_holds == gap_holds),
        detail: format!(
            "v >= 4*lambda-1 is {lower_holds}, e2-e1 = {} >= 2D+1 = {} is {gap_holds}",
            p.e2 - p.e1,
            2 * d + 1
        ),
    });

    checks.push(if lam > 1 {
        BoundCheck {
            name: "d_within_open_interval",
            outcome: outcome(lam - 1 > d && d > -lam),
            detail: format!("lambda-1 = {} > D = {d} > -lambda = {}", lam - 1, -lam),
        }
    } else {
        BoundCheck {
            name: "d_within_open_interval",
            outcome: BoundOutcome::NotApplicable,
            detail: "lambda = 1".into(),
        }
    });

    if let Some(s) = s {
        let check = match block_signatures(s, p) {
            Ok(sigs) => {
                let mut failure = None;
                for sig in &sigs {
                    if sig.t > 0 && !(sig.tau1 - 1 >= d) {
                        failure = Some(format!(
                            "large block {}: tau1-1 = {} < D = {d}",
                            sig.block_index,
                            sig.tau1 - 1
                        ));
                        break;
                    }
                    if sig.t < 0 && !(d >= -sig.tau2) {
                        failure = Some(format!(
                            "small block {}: D = {d} < -tau2 = {}",
                            sig.block_index, -sig.tau2
                        ));
                        break;
                    }
                }
                BoundCheck {
                    name: "block_tau_bounds",
                    outcome: outcome(failure.is_none()),
                    detail: failure
                        .unwrap_or_else(|| "tau1-1 >= D on large blocks, D >= -tau2 on small".into()),
                }
            }
            Err(err) => BoundCheck {
                name: "block_tau_bounds",
                outcome: BoundOutcome::Fail,
                detail: err.to_string(),
            },
        };
        checks.push(check);
    }

    checks.push(if lam > 1 {
        let rho = p.rho();
        let lower = BigRational::new(BigInt::from(lam), BigInt::from(lam - 1));
        let upper = rational(lam);
        let gap_lo = rational(lam - 1);
        let in_range = lower <= rho && rho <= upper;
        let outside_gap = !(gap_lo < rho && rho < upper);
        BoundCheck {
            name: "rho_within_bounds",
            outcome: outcome(in_range && outside_gap),
            detail: format!(
                "rho = {}/{} must lie in [lambda/(lambda-1), lambda] and avoid (lambda-1, lambda)",
                p.c, p.d
            ),
        }
    } else {
        BoundCheck {
            name: "rho_within_bounds",
            outcome: BoundOutcome::NotApplicable,
            detail: "lambda = 1".into(),
        }
    });

    checks.push(BoundCheck {
        name: "conjecture_window",
        outcome: outcome(4 * lam - 1 <= v && v <= lam * lam + lam + 1),
        detail: format!(
            "conjectured window 4*lambda-1 = {} <= v = {v} <= lambda^2+lambda+1 = {}",
            4 * lam - 1,
            lam * lam + lam + 1
        ),
    });

    checks
}

/// Result of the block-uniqueness scan. A block qualifies on the large
/// side when `2t > x` and on the small side when `-2t > y`; at most one
/// block may qualify on each side. The `literal_*` lists evaluate the
/// inequalities in the printed `2tc + lambda > e` form for audit; the two
/// forms can disagree, and the normalized one is authoritative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniqueBlockFinding {
    pub large_qualifiers: Vec<usize>,
    pub small_qualifiers: Vec<usize>,
    pub large_unique_ok: bool,
    pub small_unique_ok: bool,
    pub literal_large_qualifiers: Vec<usize>,
    pub literal_small_qualifiers: Vec<usize>,
    /// True when a uniqueness violation occurs on a design that is not
    /// Type-1; for Type-1 designs violations are reported as warnings
    /// because the theorem only covers the Type-2 case.
    pub hard_violation: bool,
}

pub fn unique_block_check(
    s: &IncidenceStructure,
    p: &RyserProfile,
) -> Result<UniqueBlockFinding> {
    let sigs = block_signatures(s, p)?;
    let mut large = Vec::new();
    let mut small = Vec::new();
    let mut literal_large = Vec::new();
    let mut literal_small = Vec::new();
    for sig in &sigs {
        if 2 * sig.t > p.x {
            large.push(sig.block_index);
        }
        if -2 * sig.t > p.y {
            small.push(sig.block_index);
        }
        if 2 * sig.t * p.c + p.lam > p.e1 {
            literal_large.push(sig.block_index);
        }
        if -2 * sig.t * p.d + p.lam > p.e2 {
            literal_small.push(sig.block_index);
        }
    }
    let large_unique_ok = large.len() <= 1;
    let small_unique_ok = small.len() <= 1;
    let hard_violation = (!large_unique_ok || !small_unique_ok) && !type1_by_d(p);
    Ok(UniqueBlockFinding {
        large_qualifiers: large,
        small_qualifiers: small,
        large_unique_ok,
        small_unique_ok,
        literal_large_qualifiers: literal_large,
        literal_small_qualifiers: literal_small,
        hard_violation,
    })
}

/// Verdict of the two-block-size test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoBlockVerdict {
    /// One of the size conditions held, so the design is Type-1.
    /// `columns_agree` records the cross-check against the column test.
    Type1 {
        via_large: bool,
        via_small: bool,
        columns_agree: bool,
    },
    /// Neither condition held; the theorem draws no conclusion.
    ConditionNotMet,
}

/// For a design with exactly two block sizes `k1 > k2`: if `2*t1 > x` (for
/// `k1 = 2*lambda + t1*a`) or `-2*t2 > y` (for `k2 = 2*lambda + t2*a`),
/// the design is Type-1.
pub fn two_block_classify(
    s: &IncidenceStructure,
    p: &RyserProfile,
) -> Result<TwoBlockVerdict> {
    let mut sizes: Vec<i64> = s.blocks().iter().map(|b| b.len() as i64).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() != 2 {
        return Err(Error::invalid(format!(
            "two-block classification needs exactly two distinct block sizes, found {}",
            sizes.len()
        )));
    }
    let (k2, k1) = (sizes[0], sizes[1]);
    if (k1 - 2 * p.lam) % p.a != 0 || (k2 - 2 * p.lam) % p.a != 0 {
        return Err(Error::invalid(
            "block sizes are not of the form 2*lambda + t*a",
        ));
    }
    let t1 = (k1 - 2 * p.lam) / p.a;
    let t2 = (k2 - 2 * p.lam) / p.a;
    let via_large = 2 * t1 > p.x;
    let via_small = -2 * t2 > p.y;
    if via_large || via_small {
        Ok(TwoBlockVerdict::Type1 {
            via_large,
            via_small,
            columns_agree: type1_by_columns(s) == TriState::Yes,
        })
    } else {
        Ok(TwoBlockVerdict::ConditionNotMet)
    }
}

/// Everything the classifier knows about one design.
#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub profile: RyserProfile,
    pub type1_by_columns: TriState,
    pub type1_by_d: bool,
    pub necessary: NecessaryCondition,
    pub bounds: Vec<BoundCheck>,
    pub unique_block: UniqueBlockFinding,
    /// `None` when the design does not have exactly two block sizes.
    pub two_block: Option<TwoBlockVerdict>,
}

impl ClassificationReport {
    pub fn all_pass(&self) -> bool {
        self.necessary.is_square
            && self.necessary.v_formula_ok
            && self.bounds.iter().all(|b| !b.failed())
            && !self.unique_block.hard_violation
            && match &self.two_block {
                Some(TwoBlockVerdict::Type1 { columns_agree, .. }) => *columns_agree,
                _ => true,
            }
    }
}

/// Runs the whole classification pipeline on a verified Ryser design.
pub fn classify_design(s: &IncidenceStructure) -> Result<ClassificationReport> {
    let profile = ryser_profile(s)?;
    let columns = type1_by_columns(s);
    let by_d = type1_by_d(&profile);
    let necessary = necessary_condition_for(&profile);
    let bounds = bounds_report(&profile, Some(s));
    let unique_block = unique_block_check(s, &profile)?;
    let two_block = {
        let mut sizes = s.block_sizes();
        sizes.sort_unstable();
        sizes.dedup();
        if sizes.len() == 2 {
            Some(two_block_classify(s, &profile)?)
        } else {
            None
        }
    };
    Ok(ClassificationReport {
        profile,
        type1_by_columns: columns,
        type1_by_d: by_d,
        necessary,
        bounds,
        unique_block,
        two_block,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{catalog, IncidenceStructure};

    fn complemented(v: usize, base: &[usize]) -> IncidenceStructure {
        IncidenceStructure::from_difference_set(v, base)
            .unwrap()
            .complement(0)
            .unwrap()
    }

    fn fano_star0() -> IncidenceStructure {
        complemented(7, &[1, 2, 4])
    }

    #[test]
    fn columns_yes_on_complements() {
        assert_eq!(type1_by_columns(&fano_star0()), TriState::Yes);
        assert_eq!(
            type1_by_columns(&complemented(11, &[1, 3, 4, 5, 9])),
            TriState::Yes
        );
    }

    #[test]
    fn columns_no_when_both_sizes_repeat() {
        // sizes {2, 2, 3, 3}: two distinct values, neither unique
        let s = IncidenceStructure::new(
            4,
            vec![vec![0, 1], vec![2, 3], vec![0, 1, 2], vec![0, 1, 3]],
        )
        .unwrap();
        assert_eq!(type1_by_columns(&s), TriState::No);
    }

    #[test]
    fn columns_not_applicable_with_three_sizes() {
        let s = IncidenceStructure::new(
            4,
            vec![vec![0], vec![0, 1], vec![0, 1, 2], vec![0, 2]],
        )
        .unwrap();
        assert_eq!(type1_by_columns(&s), TriState::NotApplicable);
    }

    #[test]
    fn d_test_examples() {
        let p = ryser_profile(&fano_star0()).unwrap();
        assert!(type1_by_d(&p));
        let p = ryser_profile(&complemented(13, &[0, 1, 3, 9])).unwrap();
        assert!(type1_by_d(&p));
        let mut synthetic = p.clone();
        synthetic.seress_d = 2;
        assert!(!type1_by_d(&synthetic));
    }

    #[test]
    fn necessary_condition_examples() {
        let n = necessary_condition(7, 2, 2, 0);
        assert_eq!(n.sq_value, BigInt::from(9));
        assert!(n.is_square && n.v_formula_ok);
        assert_eq!(n.root, Some(BigInt::from(3)));
        let (special, special_sq) = n.special_square.unwrap();
        assert_eq!(special, BigInt::from(9));
        assert!(special_sq);

        let n = necessary_condition(13, 3, 6, 0);
        assert_eq!(n.sq_value, BigInt::from(49));
        assert!(n.is_square && n.v_formula_ok);

        let n = necessary_condition(11, 3, 2, 0);
        assert_eq!(n.sq_value, BigInt::from(25));
        assert!(n.is_square && n.v_formula_ok);

        // D = -1 branch, realized by the complement of the (13,9,6) design
        let n = necessary_condition(13, 3, 4, -1);
        assert_eq!(n.sq_value, BigInt::from(49));
        assert!(n.is_square && n.v_formula_ok);
        let (special, special_sq) = n.special_square.unwrap();
        assert_eq!(special, BigInt::from(49));
        assert!(special_sq);
    }

    #[test]
    fn special_square_equals_general_radicand() {
        // for D in {0, -1} the specialized expressions are the general
        // radicand with that D substituted, so squareness must coincide
        for lam in 2i64..=9 {
            for r in 1i64..=15 {
                for d in [-1i64, 0] {
                    let n = necessary_condition(4 * lam - 1, lam, r, d);
                    let (special, special_ok) = n.special_square.unwrap();
                    assert_eq!(special, n.sq_value, "lam={lam} r={r} D={d}");
                    assert_eq!(special_ok, n.is_square, "lam={lam} r={r} D={d}");
                }
            }
        }
    }

    #[test]
    fn necessary_condition_accepts_both_roots() {
        // v = 2*lambda - s and v = 2*lambda + s are both admissible
        let n_plus = necessary_condition(7, 2, 2, 0); // 7 = 4 + 3
        let n_minus = necessary_condition(1, 2, 2, 0); // 1 = 4 - 3
        assert!(n_plus.v_formula_ok);
        assert!(n_minus.v_formula_ok);
        assert!(!necessary_condition(6, 2, 2, 0).v_formula_ok);
    }

    #[test]
    fn bounds_tight_on_fano() {
        let s = fano_star0();
        let p = ryser_profile(&s).unwrap();
        assert_eq!(p.v, 4 * p.lam - 1);
        assert_eq!(p.v, p.lam * p.lam + p.lam + 1);
        assert_eq!(p.e2 - p.e1, 2 * p.seress_d + 1);
        let checks = bounds_report(&p, Some(&s));
        assert!(checks.iter().all(|c| !c.failed()), "{checks:?}");
    }

    #[test]
    fn bounds_pass_on_all_catalog_complements() {
        for e in catalog() {
            let s = e.build().unwrap().complement(0).unwrap();
            let p = ryser_profile(&s).unwrap();
            let checks = bounds_report(&p, Some(&s));
            for c in &checks {
                assert!(!c.failed(), "{}: {} {}", e.name, c.name, c.detail);
            }
        }
    }

    #[test]
    fn bounds_skip_rho_for_lambda_one() {
        // near-pencil: lambda = 1, rho = v - 2 far above lambda
        let mut blocks = vec![(1..6).collect::<Vec<_>>()];
        for i in 1..6 {
            blocks.push(vec![0, i]);
        }
        let s = IncidenceStructure::new(6, blocks).unwrap();
        let p = ryser_profile(&s).unwrap();
        let checks = bounds_report(&p, Some(&s));
        let rho_check = checks.iter().find(|c| c.name == "rho_within_bounds").unwrap();
        assert_eq!(rho_check.outcome, BoundOutcome::NotApplicable);
        let d_check = checks.iter().find(|c| c.name == "d_within_open_interval").unwrap();
        assert_eq!(d_check.outcome, BoundOutcome::NotApplicable);
    }

    #[test]
    fn unique_block_fano() {
        let s = fano_star0();
        let p = ryser_profile(&s).unwrap();
        let finding = unique_block_check(&s, &p).unwrap();
        assert_eq!(finding.small_qualifiers, vec![0]);
        assert!(finding.large_qualifiers.is_empty());
        assert!(finding.small_unique_ok && finding.large_unique_ok);
        assert!(!finding.hard_violation);
    }

    #[test]
    fn unique_block_all_catalog() {
        for e in catalog() {
            let s = e.build().unwrap().complement(0).unwrap();
            let p = ryser_profile(&s).unwrap();
            let finding = unique_block_check(&s, &p).unwrap();
            assert!(
                finding.large_unique_ok && finding.small_unique_ok,
                "{}: {finding:?}",
                e.name
            );
        }
    }

    #[test]
    fn literal_forms_recorded_separately() {
        // the printed "2td + lambda > e2" form disagrees with the
        // normalized small-side condition on the complemented fano
        let s = fano_star0();
        let p = ryser_profile(&s).unwrap();
        let finding = unique_block_check(&s, &p).unwrap();
        assert_eq!(finding.small_qualifiers, vec![0]);
        assert!(finding.literal_small_qualifiers.is_empty());
    }

    #[test]
    fn two_block_fano_and_biplane() {
        for (v, base) in [(7usize, vec![1usize, 2, 4]), (11, vec![1, 3, 4, 5, 9])] {
            let s = complemented(v, &base);
            let p = ryser_profile(&s).unwrap();
            match two_block_classify(&s, &p).unwrap() {
                TwoBlockVerdict::Type1 {
                    via_small,
                    columns_agree,
                    ..
                } => {
                    assert!(via_small);
                    assert!(columns_agree);
                }
                other => panic!("expected Type1, got {other:?}"),
            }
        }
    }

    #[test]
    fn two_block_condition_not_met_branch() {
        // fabricated profile with x and y too large for either condition
        let s = IncidenceStructure::new(
            4,
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 1], vec![2, 3]],
        )
        .unwrap();
        let mut p = ryser_profile(&fano_star0()).unwrap();
        p.lam = 2;
        p.a = 1;
        p.x = 10;
        p.y = 10;
        assert_eq!(
            two_block_classify(&s, &p).unwrap(),
            TwoBlockVerdict::ConditionNotMet
        );
    }

    #[test]
    fn two_block_rejects_other_size_counts() {
        let s = IncidenceStructure::new(
            4,
            vec![vec![0], vec![0, 1], vec![0, 1, 2], vec![0, 2]],
        )
        .unwrap();
        let p = ryser_profile(&fano_star0()).unwrap();
        assert!(two_block_classify(&s, &p).is_err());
    }

    #[test]
    fn full_report_on_fano() {
        let report = classify_design(&fano_star0()).unwrap();
        assert_eq!(report.type1_by_columns, TriState::Yes);
        assert!(report.type1_by_d);
        assert!(report.all_pass());
        assert!(matches!(
            report.two_block,
            Some(TwoBlockVerdict::Type1 { .. })
        ));
    }
}
