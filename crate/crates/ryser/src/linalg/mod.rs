//! Exact linear algebra on incidence matrices.
//!
//! For a Ryser design with incidence matrix `A` (rows = points, columns =
//! blocks) the Gram matrix factors as `At*A = D + lambda*J` with
//! `D = diag(k_j - lambda)`, and `A*D^-1*At = I + R` where `R` is the
//! rank-one two-class pattern matrix (entries `rho`, `1`, `1/rho` by
//! point class). That yields a closed determinant
//! `lambda*(rho+1)^2/rho * prod(k_j - lambda)` and the closed inverse
//! `A^-1 = D^-1 * At * (I - rho/(lambda*(rho+1)^2) * R)`. Everything here
//! is computed with exact rationals and cross-checked against plain
//! elimination.

mod matrix;

pub use matrix::{ratio, rational, RationalMatrix};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::design::IncidenceStructure;
use crate::error::{Error, Result};
use crate::params::RyserProfile;

/// Point-over-block incidence matrix with rows permuted so that points of
/// the larger replication class come first. `point_order[row]` is the
/// original point label of each row.
#[derive(Debug, Clone)]
pub struct OrderedIncidence {
    pub matrix: RationalMatrix,
    pub point_order: Vec<usize>,
    pub e1_len: usize,
}

/// Builds the 0/1 incidence matrix (rows = points, columns = blocks, so
/// column sums are block sizes) with all `e1` points first, then the rest,
/// each ascending.
pub fn incidence_matrix(s: &IncidenceStructure, e1_points: &[usize]) -> OrderedIncidence {
    let v = s.v();
    let in_e1 = {
        let mut flags = vec![false; v];
        for &p in e1_points {
            flags[p] = true;
        }
        flags
    };
    let mut point_order: Vec<usize> = e1_points.to_vec();
    point_order.sort_unstable();
    let mut rest: Vec<usize> = (0..v).filter(|&p| !in_e1[p]).collect();
    rest.sort_unstable();
    let e1_len = point_order.len();
    point_order.extend(rest);

    let mut m = RationalMatrix::zeros(v, v);
    for (j, block) in s.blocks().iter().enumerate() {
        for (row, &p) in point_order.iter().enumerate() {
            if block.binary_search(&p).is_ok() {
                m[(row, j)] = BigRational::one();
            }
        }
    }
    OrderedIncidence {
        matrix: m,
        point_order,
        e1_len,
    }
}

/// The two factors of the Gram identity for one design: the diagonal
/// excesses `k_j - lambda` (one per block, all positive) and the rank-one
/// class pattern matrix.
#[derive(Debug, Clone)]
pub struct GramDecomposition {
    pub lam: i64,
    /// `k_j - lambda` per block, in block order; positive because every
    /// block of a Ryser design is larger than `lambda`.
    pub block_excess: Vec<BigRational>,
    /// The rank-one matrix with entries `rho`, `1`, `1/rho` by point
    /// class, in the `E1`-first row order.
    pub class_pattern: RationalMatrix,
}

impl GramDecomposition {
    /// `diag(k_j - lambda)` as a matrix.
    pub fn diagonal(&self) -> RationalMatrix {
        let v = self.block_excess.len();
        RationalMatrix::from_fn(v, v, |i, j| {
            if i == j {
                self.block_excess[j].clone()
            } else {
                BigRational::zero()
            }
        })
    }

    /// `diag(1/(k_j - lambda))`.
    pub fn diagonal_inverse(&self) -> RationalMatrix {
        let v = self.block_excess.len();
        RationalMatrix::from_fn(v, v, |i, j| {
            if i == j {
                BigRational::one() / &self.block_excess[j]
            } else {
                BigRational::zero()
            }
        })
    }
}

pub fn gram_decomposition(
    s: &IncidenceStructure,
    p: &RyserProfile,
) -> Result<GramDecomposition> {
    let mut block_excess = Vec::with_capacity(s.v());
    for (j, block) in s.blocks().iter().enumerate() {
        let excess = block.len() as i64 - p.lam;
        if excess <= 0 {
            return Err(Error::invalid(format!(
                "block {j} has size {} not larger than lambda = {}",
                block.len(),
                p.lam
            )));
        }
        block_excess.push(rational(excess));
    }
    Ok(GramDecomposition {
        lam: p.lam,
        block_excess,
        class_pattern: replication_class_matrix(p),
    })
}

/// The rank-one two-class pattern matrix: entry `rho` on the `E1 x E1`
/// square, `1/rho` on `E2 x E2`, `1` off the diagonal blocks. Assumes the
/// `E1`-first row ordering of [`incidence_matrix`].
pub fn replication_class_matrix(p: &RyserProfile) -> RationalMatrix {
    let v = p.v as usize;
    let e1 = p.e1 as usize;
    let rho = p.rho();
    let inv_rho = BigRational::one() / rho.clone();
    RationalMatrix::from_fn(v, v, |i, j| {
        if i < e1 && j < e1 {
            rho.clone()
        } else if i >= e1 && j >= e1 {
            inv_rho.clone()
        } else {
            BigRational::one()
        }
    })
}

/// `rho / (lambda * (rho+1)^2)`, the coefficient in the closed inverse of
/// `I + R`.
pub fn inverse_correction_scalar(p: &RyserProfile) -> BigRational {
    let rho = p.rho();
    let rho1 = &rho + BigRational::one();
    rho / (rational(p.lam) * &rho1 * &rho1)
}

/// Outcome of [`check_gram`]: either both identities hold or the first
/// offending entry is reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GramCheck {
    Pass,
    Fail {
        identity: &'static str,
        row: usize,
        col: usize,
    },
}

impl GramCheck {
    pub fn passed(&self) -> bool {
        matches!(self, GramCheck::Pass)
    }
}

/// Verifies `At*A = D + lambda*J` and `A*D^-1*At = I + R` exactly.
pub fn check_gram(s: &IncidenceStructure, p: &RyserProfile) -> GramCheck {
    let decomposition = match gram_decomposition(s, p) {
        Ok(d) => d,
        Err(_) => {
            return GramCheck::Fail {
                identity: "D has a nonpositive diagonal entry",
                row: 0,
                col: 0,
            }
        }
    };
    let inc = incidence_matrix(s, &p.e1_points);
    let a = &inc.matrix;
    let at = a.transpose();
    let v = s.v();

    let gram = at.mul(a);
    let lam = rational(p.lam);
    let expected = RationalMatrix::from_fn(v, v, |i, j| {
        if i == j {
            &decomposition.block_excess[j] + &lam
        } else {
            lam.clone()
        }
    });
    if let Some((row, col)) = gram.first_mismatch(&expected) {
        return GramCheck::Fail {
            identity: "AtA = D + lambda*J",
            row,
            col,
        };
    }

    let left = a.mul(&decomposition.diagonal_inverse()).mul(&at);
    let expected = RationalMatrix::identity(v).add(&decomposition.class_pattern);
    match left.first_mismatch(&expected) {
        Some((row, col)) => GramCheck::Fail {
            identity: "A*D^-1*At = I + R",
            row,
            col,
        },
        None => GramCheck::Pass,
    }
}

/// Returns the determinant of `At*A` twice: by the closed form
/// `lambda*(rho+1)^2/rho * prod(k_j - lambda)` and by exact elimination.
pub fn gram_determinant(s: &IncidenceStructure, p: &RyserProfile) -> (BigRational, BigRational) {
    let rho = p.rho();
    let rho1 = &rho + BigRational::one();
    let mut closed = rational(p.lam) * &rho1 * &rho1 / &rho;
    for block in s.blocks() {
        closed *= rational(block.len() as i64 - p.lam);
    }
    let inc = incidence_matrix(s, &p.e1_points);
    let gram = inc.matrix.transpose().mul(&inc.matrix);
    (closed, gram.det())
}

/// The closed-form inverse `D^-1 * At * (I - rho/(lambda*(rho+1)^2) * R)`,
/// verified against `A` from both sides before returning. Rows and columns
/// follow the `E1`-first point order of [`incidence_matrix`].
pub fn ryser_inverse(s: &IncidenceStructure, p: &RyserProfile) -> Result<RationalMatrix> {
    let decomposition = gram_decomposition(s, p)?;
    let inc = incidence_matrix(s, &p.e1_points);
    let a = &inc.matrix;
    let v = s.v();
    let correction = decomposition
        .class_pattern
        .scale(&inverse_correction_scalar(p));
    let right = RationalMatrix::identity(v).sub(&correction);
    let inv = decomposition
        .diagonal_inverse()
        .mul(&a.transpose())
        .mul(&right);
    if !a.mul(&inv).is_identity() || !inv.mul(a).is_identity() {
        return Err(Error::inconsistency(
            "closed-form inverse does not invert the incidence matrix",
        ));
    }
    Ok(inv)
}

/// Rank-one update of an inverse:
/// `(G + H)^-1 = G^-1 - (1/(1+g)) * G^-1*H*G^-1` with `g = trace(H*G^-1)`.
/// Requires `G` nonsingular, `H` of rank exactly one, and `1 + g != 0`.
pub fn rank_one_inverse_update(
    g_mat: &RationalMatrix,
    h_mat: &RationalMatrix,
) -> Result<RationalMatrix> {
    if !g_mat.is_square() || !h_mat.is_square() || g_mat.rows() != h_mat.rows() {
        return Err(Error::invalid("G and H must be square of the same order"));
    }
    let g_inv = g_mat
        .inverse()
        .map_err(|_| Error::invalid("G is singular"))?;
    if h_mat.rank() != 1 {
        return Err(Error::invalid(format!(
            "H must have rank exactly 1, found {}",
            h_mat.rank()
        )));
    }
    let g_trace = h_mat.mul(&g_inv).trace();
    let denom = BigRational::one() + &g_trace;
    if denom.is_zero() {
        return Err(Error::invalid("update is singular: 1 + trace(H*G^-1) = 0"));
    }
    let factor = BigRational::one() / denom;
    let correction = g_inv.mul(h_mat).mul(&g_inv).scale(&factor);
    let result = g_inv.sub(&correction);
    if !g_mat.add(h_mat).mul(&result).is_identity() {
        return Err(Error::inconsistency(
            "rank-one update did not produce an inverse",
        ));
    }
    Ok(result)
}

/// Result of [`multiplicative_check`]. The true coordinate vector is
/// `x_i = sqrt(lambda) * weights[i] / t`; `weights` keeps the rational part
/// with the common `sqrt(lambda)` factored out, so `t*x_i*x_j` is the
/// rational `lambda * weights[i] * weights[j] / t`.
#[derive(Debug, Clone)]
pub struct MultiplicativeCheck {
    pub t: BigRational,
    pub weights: Vec<BigRational>,
    pub cor21: bool,
    pub cor22: bool,
}

/// Checks the two multiplicative-design corollaries for the constant-index
/// case: `A*D^-1*At = I + t*[x_i*x_j]` and the scalar parameter identity
/// `(sum k^2/(k-lambda) - v) * t = lambda * (sum k/(k-lambda))^2`.
///
/// Only constant `lambda_i` is supported; that covers symmetric and Ryser
/// designs, where the common `sqrt(lambda)` keeps all arithmetic rational.
pub fn multiplicative_check(
    a: &RationalMatrix,
    block_sizes: &[i64],
    indices: &[i64],
) -> Result<MultiplicativeCheck> {
    if !a.is_square() {
        return Err(Error::invalid("incidence matrix must be square"));
    }
    let v = a.rows();
    if block_sizes.len() != v || indices.len() != v {
        return Err(Error::invalid(
            "need one block size and one index per column",
        ));
    }
    let lam = indices[0];
    if indices.iter().any(|&l| l != lam) {
        return Err(Error::invalid(
            "only constant indices are supported; non-constant index lists need irrational arithmetic",
        ));
    }
    if lam < 1 {
        return Err(Error::invalid("index must be positive"));
    }
    if block_sizes.iter().any(|&k| k <= lam) {
        return Err(Error::invalid("every block size must exceed the index"));
    }

    // Gram hypothesis with the *given* parameters, so a mismatched size
    // list fails here rather than producing nonsense downstream.
    let gram = a.transpose().mul(a);
    let expected = RationalMatrix::from_fn(v, v, |i, j| {
        if i == j {
            rational(block_sizes[i])
        } else {
            rational(lam)
        }
    });
    if let Some((row, col)) = gram.first_mismatch(&expected) {
        return Err(Error::invalid(format!(
            "Gram hypothesis fails at entry ({row}, {col})"
        )));
    }

    let lam_rat = rational(lam);
    let mut t = BigRational::one();
    for &k in block_sizes {
        t += &lam_rat / rational(k - lam);
    }
    let weights: Vec<BigRational> = (0..v)
        .map(|i| {
            let mut w = BigRational::zero();
            for (j, &k) in block_sizes.iter().enumerate() {
                if !a[(i, j)].is_zero() {
                    w += &a[(i, j)] / rational(k - lam);
                }
            }
            w
        })
        .collect();

    let d_inv = RationalMatrix::from_fn(v, v, |i, j| {
        if i == j {
            BigRational::one() / rational(block_sizes[j] - lam)
        } else {
            BigRational::zero()
        }
    });
    let left = a.mul(&d_inv).mul(&a.transpose());
    let expected = RationalMatrix::from_fn(v, v, |i, j| {
        let base = if i == j {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        base + &lam_rat * &weights[i] * &weights[j] / &t
    });
    let cor21 = left.first_mismatch(&expected).is_none();

    let mut size_sq_sum = BigRational::zero();
    let mut size_sum = BigRational::zero();
    for &k in block_sizes {
        size_sq_sum += rational(k * k) / rational(k - lam);
        size_sum += rational(k) / rational(k - lam);
    }
    let lhs = (size_sq_sum - rational(v as i64)) * &t;
    let rhs = &lam_rat * &size_sum * &size_sum;
    let cor22 = lhs == rhs;

    Ok(MultiplicativeCheck {
        t,
        weights,
        cor21,
        cor22,
    })
}
