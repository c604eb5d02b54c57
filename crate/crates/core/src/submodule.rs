//! Submodules of `Z_d^2` in Hermite normal form.
//!
//! A submodule `M ⊆ Z_d^2` is the image of an integer lattice `L` with
//! `dZ^2 ⊆ L ⊆ Z^2`. We store the row-style HNF of `L`,
//!
//! ```text
//!     [ a  0 ]
//!     [ c  b ]      a | d,  b | d,  0 ≤ c < a,  a | c·(d/b)
//! ```
//!
//! so `M = { x·(a,0) + y·(c,b) mod d }` and `|M| = d²/(ab)`. The triple is
//! unique per submodule, which makes equality and hashing structural.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symplectic::{is_sl, vec_valuation, Mat2, Vec2};
use crate::zring::PrimePower;

/// Largest element set [`Submodule::elements`] will materialize.
pub const MAX_ELEMENTS: u128 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSubmodule")]
pub struct Submodule {
    d: u64,
    a: u64,
    b: u64,
    c: u64,
}

#[derive(Deserialize)]
struct RawSubmodule {
    d: u64,
    a: u64,
    b: u64,
    c: u64,
}

impl TryFrom<RawSubmodule> for Submodule {
    type Error = Error;

    fn try_from(raw: RawSubmodule) -> Result<Self> {
        Submodule::from_hnf(raw.d, raw.a, raw.b, raw.c)
    }
}

/// A submodule together with the outcome of the Lagrangian test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LineCertificate {
    pub submodule: Submodule,
    pub is_lagrangian: bool,
}

impl Submodule {
    /// Build from an HNF triple, checking every invariant.
    pub fn from_hnf(d: u64, a: u64, b: u64, c: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain(format!(
                "modulus must be at least 2, got {d}"
            )));
        }
        if a == 0 || b == 0 || !d.is_multiple_of(a) || !d.is_multiple_of(b) {
            return Err(Error::domain(format!("a={a} and b={b} must divide d={d}")));
        }
        if c >= a {
            return Err(Error::domain(format!("c={c} must be below a={a}")));
        }
        if !(c as u128 * (d / b) as u128).is_multiple_of(a as u128) {
            return Err(Error::domain(format!(
                "(0,{d}) not in lattice for a={a} b={b} c={c}"
            )));
        }
        Ok(Submodule { d, a, b, c })
    }

    /// The zero submodule `{0}`.
    pub fn zero(d: u64) -> Self {
        Submodule {
            d,
            a: d,
            b: d,
            c: 0,
        }
    }

    /// All of `Z_d^2`.
    pub fn full(d: u64) -> Self {
        Submodule {
            d,
            a: 1,
            b: 1,
            c: 0,
        }
    }

    /// Smallest submodule containing `generators` (the reduction of each
    /// generator mod `d` is taken).
    pub fn span(generators: &[Vec2], d: u64) -> Self {
        // integer HNF of the rows {(d,0), (0,d)} ∪ generators, one row at a time
        let di = d as i128;
        let (mut a, mut b, mut c) = (di, di, 0i128);
        for g in generators {
            let (x, y) = ((g.0 % d) as i128, (g.1 % d) as i128);
            let e = b.extended_gcd(&y);
            let g2 = e.gcd;
            let row2_first = e.x * c + e.y * x;
            // unimodular complement of the new second row lands on the first axis
            let axis = (b / g2) * x - (y / g2) * c;
            a = a.gcd(&axis);
            b = g2;
            c = row2_first.rem_euclid(a);
        }
        Submodule {
            d,
            a: a as u64,
            b: b as u64,
            c: c as u64,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.d
    }

    /// The HNF triple `(a, b, c)`.
    pub fn hnf(&self) -> (u64, u64, u64) {
        (self.a, self.b, self.c)
    }

    /// The two HNF rows `(a,0)` and `(c,b)`, reduced mod `d`.
    pub fn generators(&self) -> [Vec2; 2] {
        [Vec2(self.a % self.d, 0), Vec2(self.c, self.b % self.d)]
    }

    pub fn cardinality(&self) -> u128 {
        (self.d as u128).pow(2) / (self.a as u128 * self.b as u128)
    }

    pub fn is_zero(&self) -> bool {
        self.a == self.d && self.b == self.d
    }

    /// Every element, sorted lexicographically.
    pub fn elements(&self) -> Result<Vec<Vec2>> {
        let n = self.cardinality();
        if n > MAX_ELEMENTS {
            return Err(Error::Resource {
                what: "submodule element listing",
                needed: n,
                limit: MAX_ELEMENTS,
            });
        }
        let d = self.d;
        let [g1, g2] = self.generators();
        let mut out = Vec::with_capacity(n as usize);
        for y in 0..d / self.b {
            let base = g2.scale(y, d);
            for x in 0..d / self.a {
                out.push(base.add(g1.scale(x, d), d));
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn contains(&self, x: Vec2) -> bool {
        let x = x.reduce(self.d);
        if !x.1.is_multiple_of(self.b) {
            return false;
        }
        let y = (x.1 / self.b) as i128;
        (x.0 as i128 - y * self.c as i128).rem_euclid(self.a as i128) == 0
    }

    /// `M^ω = { x : ω(x, m) = 0 for all m ∈ M }`.
    ///
    /// For the lattice `L` with determinant `ab`, the ω-dual of `L` with
    /// respect to `dZ` is `(d/(ab))·L`, whose HNF rows are `(d/b, 0)` and
    /// `(c·d/(ab), d/a)`.
    pub fn orthogonal(&self) -> Submodule {
        let d = self.d as u128;
        let (a, b, c) = (self.a as u128, self.b as u128, self.c as u128);
        let a2 = d / b;
        let c2 = (c * d / (a * b)) % a2;
        Submodule {
            d: self.d,
            a: a2 as u64,
            b: (d / a) as u64,
            c: c2 as u64,
        }
    }

    pub fn is_subset_of(&self, other: &Submodule) -> bool {
        self.d == other.d && self.generators().iter().all(|&g| other.contains(g))
    }

    pub fn is_isotropic(&self) -> bool {
        self.is_subset_of(&self.orthogonal())
    }

    pub fn is_lagrangian(&self) -> bool {
        *self == self.orthogonal()
    }

    pub fn certify(&self) -> LineCertificate {
        LineCertificate {
            submodule: *self,
            is_lagrangian: self.is_lagrangian(),
        }
    }

    /// Image under a matrix: `{ m·x : x ∈ M }`.
    pub fn image(&self, m: &Mat2) -> Submodule {
        let gens = self.generators().map(|g| m.apply(g, self.d));
        Submodule::span(&gens, self.d)
    }

    /// Smallest `p`-valuation of a nonzero element (`M` over `Z_{p^s}`).
    pub fn min_valuation(&self, pp: PrimePower) -> Result<u32> {
        if pp.modulus() != self.d {
            return Err(Error::domain(format!(
                "submodule is over Z_{}, not Z_{}",
                self.d,
                pp.modulus()
            )));
        }
        if self.is_zero() {
            return Err(Error::domain("zero submodule has no nonzero element"));
        }
        // valuation of a combination is at least the minimum over the generators
        Ok(self
            .generators()
            .iter()
            .map(|&g| vec_valuation(pp, g))
            .min()
            .expect("two generators"))
    }
}

impl fmt::Display for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<({},0),({},{})> mod {}", self.a, self.c, self.b, self.d)
    }
}

/// The span of the columns of `S · diag(p^k, p^{s−k})` over `Z_{p^s}`, for
/// `S ∈ SL(2, Z_{p^s})` and `0 ≤ k ≤ ⌊s/2⌋`. Always Lagrangian with `p^s` elements.
pub fn lagrangian_from_basis(s_mat: &Mat2, k: u32, pp: PrimePower) -> Result<Submodule> {
    let q = pp.modulus();
    if k > pp.s / 2 {
        return Err(Error::domain(format!(
            "k={k} exceeds floor(s/2)={}",
            pp.s / 2
        )));
    }
    if !is_sl(s_mat, q) {
        return Err(Error::domain(format!("{s_mat} is not in SL(2,Z_{q})")));
    }
    let g1 = s_mat.col1.scale(pp.power(k), q);
    let g2 = s_mat.col2.scale(pp.power(pp.s - k), q);
    Ok(Submodule::span(&[g1, g2], q))
}
