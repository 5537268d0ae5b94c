//! Generalized symmetric eigenproblem for 2×2 operators.
//!
//! Given an endomorphism `A` of the tangent plane (as a matrix in a
//! coordinate basis) and the Gram matrix `G` of that basis, finds the
//! eigenpairs of `A`. `A` must be self-adjoint with respect to `G`, i.e.
//! `G·A` symmetric; the eigenvectors are then `G`-orthonormal.

use crate::error::{Error, Result};

/// A 2×2 matrix stored by entries; `a21` is row 2, column 1.
///
/// When it represents an endomorphism, column `j` holds the coordinates of
/// the image of the `j`-th basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Sym2x2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Sym2x2 {
    pub const IDENTITY: Sym2x2 = Sym2x2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Sym2x2 { a11, a12, a21, a22 }
    }

    pub const fn symmetric(a11: f64, a12: f64, a22: f64) -> Self {
        Sym2x2::new(a11, a12, a12, a22)
    }

    pub const fn diag(a11: f64, a22: f64) -> Self {
        Sym2x2::new(a11, 0.0, 0.0, a22)
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn norm(&self) -> f64 {
        (self.a11 * self.a11 + self.a12 * self.a12 + self.a21 * self.a21 + self.a22 * self.a22)
            .sqrt()
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a21 * v[0] + self.a22 * v[1],
        ]
    }

    pub fn mul(&self, o: &Sym2x2) -> Sym2x2 {
        Sym2x2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }

    pub fn inverse(&self) -> Option<Sym2x2> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(Sym2x2::new(
            self.a22 / d,
            -self.a12 / d,
            -self.a21 / d,
            self.a11 / d,
        ))
    }

    /// Bilinear form `uᵀ·self·v`.
    pub fn form(&self, u: [f64; 2], v: [f64; 2]) -> f64 {
        let sv = self.apply(v);
        u[0] * sv[0] + u[1] * sv[1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Coordinates in the basis whose Gram matrix was supplied.
    pub vector: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedEigen {
    /// Sorted so that `pairs[0].value >= pairs[1].value`.
    pub pairs: [EigenPair; 2],
    /// Set when the two eigenvalues coincide to working precision; the
    /// vectors are then an arbitrary `G`-orthonormal pair.
    pub umbilic: bool,
}

/// Relative tolerance on the self-adjointness defect of `G·A`.
pub const SELF_ADJOINT_TOL: f64 = 1e-8;

const UMBILIC_TOL: f64 = 1e-9;

pub fn eig_sym_generalized(a: &Sym2x2, g: &Sym2x2) -> Result<GeneralizedEigen> {
    if (g.a12 - g.a21).abs() > SELF_ADJOINT_TOL * g.norm() || !(g.a11 > 0.0) || !(g.det() > 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    // Lowered operator G·A must be symmetric.
    let ga = g.mul(a);
    let defect = (ga.a12 - ga.a21).abs();
    let scale = g.norm() * a.norm();
    if defect > SELF_ADJOINT_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotSelfAdjoint { defect });
    }
    let b12 = 0.5 * (ga.a12 + ga.a21);

    // G = L·Lᵀ, C = L⁻¹·(G·A)·L⁻ᵀ symmetric.
    let l11 = g.a11.sqrt();
    let l21 = 0.5 * (g.a12 + g.a21) / l11;
    let l22 = (g.a22 - l21 * l21).sqrt();

    // L⁻¹ = [[1/l11, 0], [-l21/(l11 l22), 1/l22]]
    let i11 = 1.0 / l11;
    let i21 = -l21 / (l11 * l22);
    let i22 = 1.0 / l22;

    let b11 = ga.a11;
    let b22 = ga.a22;
    let c11 = i11 * i11 * b11;
    let c12 = i11 * (i21 * b11 + i22 * b12);
    let c22 = i21 * i21 * b11 + 2.0 * i21 * i22 * b12 + i22 * i22 * b22;

    let mean = 0.5 * (c11 + c22);
    let half_gap = (0.5 * (c11 - c22)).hypot(c12);
    let k1 = mean + half_gap;
    let k2 = mean - half_gap;

    let phi = 0.5 * (2.0 * c12).atan2(c11 - c22);
    let (s, c) = phi.sin_cos();
    let w1 = [c, s];
    let w2 = [-s, c];

    // v = L⁻ᵀ·w
    let back = |w: [f64; 2]| -> [f64; 2] {
        let v = [i11 * w[0] + i21 * w[1], i22 * w[1]];
        canonical_sign(v)
    };

    let umbilic = 2.0 * half_gap <= UMBILIC_TOL * k1.abs().max(k2.abs()).max(1.0);

    Ok(GeneralizedEigen {
        pairs: [
            EigenPair {
                value: k1,
                vector: back(w1),
            },
            EigenPair {
                value: k2,
                vector: back(w2),
            },
        ],
        umbilic,
    })
}

// Make the largest-magnitude component positive so results are reproducible.
fn canonical_sign(v: [f64; 2]) -> [f64; 2] {
    let lead = if v[0].abs() >= v[1].abs() { v[0] } else { v[1] };
    if lead < 0.0 {
        [-v[0], -v[1]]
    } else {
        v
    }
}
