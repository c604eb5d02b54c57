//! Points of `Z_d^2`, the symplectic product and `2×2` matrices over `Z_d`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::zring::{is_unit, mul_mod, valuation, PrimePower};

/// Largest `d^4` the exhaustive `SL`/`GL` scans will walk.
pub const MAX_GROUP_SCAN: u128 = 100_000_000;

/// A lattice point `(q, p)` of `Z_d^2`, stored as least residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Vec2(pub u64, pub u64);

impl Vec2 {
    pub fn reduce(self, d: u64) -> Vec2 {
        Vec2(self.0 % d, self.1 % d)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0 && self.1 == 0
    }

    pub fn add(self, other: Vec2, d: u64) -> Vec2 {
        Vec2((self.0 + other.0) % d, (self.1 + other.1) % d)
    }

    pub fn scale(self, k: u64, d: u64) -> Vec2 {
        Vec2(mul_mod(self.0, k, d), mul_mod(self.1, k, d))
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// `ω((α,β),(γ,δ)) = αδ − βγ mod d`.
pub fn omega(x: Vec2, y: Vec2, d: u64) -> u64 {
    let lhs = mul_mod(x.0, y.1, d);
    let rhs = mul_mod(x.1, y.0, d);
    (lhs + d - rhs) % d
}

/// Minimum of the coordinate valuations; the zero vector has valuation `s`.
pub fn vec_valuation(pp: PrimePower, x: Vec2) -> u32 {
    valuation(pp.p, pp.s, x.0).min(valuation(pp.p, pp.s, x.1))
}

/// A `2×2` matrix stored by columns, so that the derived order is
/// lexicographic on `(col1.0, col1.1, col2.0, col2.1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Mat2 {
    pub col1: Vec2,
    pub col2: Vec2,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::from_cols(Vec2(1, 0), Vec2(0, 1));

    pub const fn from_cols(col1: Vec2, col2: Vec2) -> Mat2 {
        Mat2 { col1, col2 }
    }

    pub fn diag(x: u64, y: u64) -> Mat2 {
        Mat2::from_cols(Vec2(x, 0), Vec2(0, y))
    }

    /// The `index`-th matrix of `M_2(Z_d)` in lexicographic order.
    pub fn from_index(index: u64, d: u64) -> Mat2 {
        let (i, e3) = (index / d, index % d);
        let (i, e2) = (i / d, i % d);
        let (e0, e1) = (i / d, i % d);
        Mat2::from_cols(Vec2(e0, e1), Vec2(e2, e3))
    }

    pub fn det(&self, d: u64) -> u64 {
        omega(self.col1, self.col2, d)
    }

    pub fn apply(&self, x: Vec2, d: u64) -> Vec2 {
        self.col1.scale(x.0, d).add(self.col2.scale(x.1, d), d)
    }

    pub fn mul(&self, other: &Mat2, d: u64) -> Mat2 {
        Mat2::from_cols(self.apply(other.col1, d), self.apply(other.col2, d))
    }

    pub fn scale_cols(&self, u1: u64, u2: u64, d: u64) -> Mat2 {
        Mat2::from_cols(self.col1.scale(u1, d), self.col2.scale(u2, d))
    }

    pub fn inverse(&self, d: u64) -> Result<Mat2> {
        let inv_det = crate::zring::inv_mod(self.det(d), d)?;
        let Mat2 {
            col1: Vec2(a, c),
            col2: Vec2(b, e),
        } = *self;
        let neg = |x: u64| (d - x % d) % d;
        Ok(Mat2::from_cols(Vec2(e, neg(c)), Vec2(neg(b), a)).scale_cols(inv_det, inv_det, d))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}|{}]", self.col1, self.col2)
    }
}

pub fn is_sl(m: &Mat2, d: u64) -> bool {
    m.det(d) == 1 % d
}

pub fn is_gl(m: &Mat2, d: u64) -> bool {
    is_unit(m.det(d), d)
}

fn check_scan(d: u64) -> Result<u64> {
    let needed = (d as u128).pow(4);
    if needed > MAX_GROUP_SCAN {
        return Err(Error::Resource {
            what: "2x2 matrix scan",
            needed,
            limit: MAX_GROUP_SCAN,
        });
    }
    Ok(needed as u64)
}

/// Every matrix of `M_2(Z_d)` satisfying `keep`, in lexicographic order.
pub fn scan_matrices<F>(d: u64, exec: Execution, keep: F) -> Result<Vec<Mat2>>
where
    F: Fn(&Mat2) -> bool + Sync + Send,
{
    let n = check_scan(d)?;
    Ok(exec.filter_map_range(n, |i| {
        let m = Mat2::from_index(i, d);
        keep(&m).then_some(m)
    }))
}

/// `SL(2, Z_d)` in lexicographic order.
pub fn enumerate_sl(d: u64) -> Result<Vec<Mat2>> {
    enumerate_sl_with(d, Execution::default())
}

pub fn enumerate_sl_with(d: u64, exec: Execution) -> Result<Vec<Mat2>> {
    scan_matrices(d, exec, |m| is_sl(m, d))
}

/// `GL(2, Z_d)` in lexicographic order.
pub fn enumerate_gl(d: u64) -> Result<Vec<Mat2>> {
    enumerate_gl_with(d, Execution::default())
}

pub fn enumerate_gl_with(d: u64, exec: Execution) -> Result<Vec<Mat2>> {
    scan_matrices(d, exec, |m| is_gl(m, d))
}

/// `|SL(2, Z_{p^s})| = p^{3s} − p^{3s−2}`, the number of pairs `(x, y)` with `ω(x, y) = 1`.
pub fn sl_order(p: u64, s: u32) -> u128 {
    let p = p as u128;
    p.pow(3 * s) - p.pow(3 * s - 2)
}

/// `|GL(2, Z_{p^s})| = (p^{2s} − p^{2(s−1)})(p^s − p^{s−1})p^s`.
pub fn gl_order(p: u64, s: u32) -> u128 {
    let p128 = p as u128;
    count_free_vectors(p, s) * crate::zring::units_count(p, s) * p128.pow(s)
}

/// Number of vectors of `Z_{p^s}^2` with valuation 0: `p^{2s} − p^{2(s−1)}`.
pub fn count_free_vectors(p: u64, s: u32) -> u128 {
    let p = p as u128;
    p.pow(2 * s) - p.pow(2 * (s - 1))
}

/// For a fixed free `x`, the number of `y` with `ω(x, y) = 1`: `p^s`.
pub fn count_symplectic_partners(p: u64, s: u32) -> u128 {
    (p as u128).pow(s)
}
