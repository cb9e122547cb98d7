//! Coin operators and initial coin states.
//!
//! A coin is a 2x2 unitary acting on the two-component amplitude at each
//! lattice site. Every unitary of this size can be written with rows
//! `(a, b)` and `(c, d)` where `c = -D b*`, `d = D a*` and `D = ad - bc` is a
//! unit-modulus determinant, so validation checks exactly those relations.

use crate::error::{Error, Result};
use crate::C64;
use std::fmt;
use std::ops::Mul;

/// Tolerance for the unitarity constraints checked at construction.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Tolerance for the norm of an initial coin state.
pub const STATE_NORM_TOL: f64 = 1e-12;

/// A validated 2x2 unitary coin with rows `(a, b)` and `(c, d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinOperator {
    a: C64,
    b: C64,
    c: C64,
    d: C64,
}

/// Measured violations of each unitarity constraint, all absolute values.
///
/// A value of zero means the constraint holds exactly; `is_valid` compares
/// every violation against [`UNITARITY_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinDiagnostics {
    /// | |a|^2 + |b|^2 - 1 |
    pub row1_norm: f64,
    /// | |c|^2 + |d|^2 - 1 |
    pub row2_norm: f64,
    /// | a c* + b d* |
    pub row_orthogonality: f64,
    /// | |ad - bc| - 1 |
    pub det_modulus: f64,
    /// False if any entry is NaN or infinite.
    pub finite: bool,
}

impl CoinDiagnostics {
    /// Measures all constraints for an arbitrary entry quadruple.
    pub fn check(a: C64, b: C64, c: C64, d: C64) -> Self {
        let finite = [a, b, c, d]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return CoinDiagnostics {
                row1_norm: f64::INFINITY,
                row2_norm: f64::INFINITY,
                row_orthogonality: f64::INFINITY,
                det_modulus: f64::INFINITY,
                finite,
            };
        }
        CoinDiagnostics {
            row1_norm: (a.norm_sqr() + b.norm_sqr() - 1.0).abs(),
            row2_norm: (c.norm_sqr() + d.norm_sqr() - 1.0).abs(),
            row_orthogonality: (a * c.conj() + b * d.conj()).norm(),
            det_modulus: ((a * d - b * c).norm() - 1.0).abs(),
            finite,
        }
    }

    /// True when every violation is within [`UNITARITY_TOL`].
    pub fn is_valid(&self) -> bool {
        self.finite
            && self.row1_norm <= UNITARITY_TOL
            && self.row2_norm <= UNITARITY_TOL
            && self.row_orthogonality <= UNITARITY_TOL
            && self.det_modulus <= UNITARITY_TOL
    }

    fn worst(&self) -> f64 {
        self.row1_norm
            .max(self.row2_norm)
            .max(self.row_orthogonality)
            .max(self.det_modulus)
    }
}

impl fmt::Display for CoinDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.finite {
            return write!(f, "entries contain non-finite values");
        }
        let mut parts = Vec::new();
        if self.row1_norm > UNITARITY_TOL {
            parts.push(format!("row 1 norm off by {:.3e}", self.row1_norm));
        }
        if self.row2_norm > UNITARITY_TOL {
            parts.push(format!("row 2 norm off by {:.3e}", self.row2_norm));
        }
        if self.row_orthogonality > UNITARITY_TOL {
            parts.push(format!(
                "rows not orthogonal by {:.3e}",
                self.row_orthogonality
            ));
        }
        if self.det_modulus > UNITARITY_TOL {
            parts.push(format!("determinant modulus off by {:.3e}", self.det_modulus));
        }
        if parts.is_empty() {
            write!(f, "all constraints within {UNITARITY_TOL:.0e}")
        } else {
            write!(f, "{}", parts.join(", "))
        }
    }
}

impl CoinOperator {
    /// Builds a coin from explicit entries, validating unitarity.
    pub fn from_entries(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let diag = CoinDiagnostics::check(a, b, c, d);
        if diag.is_valid() {
            Ok(CoinOperator { a, b, c, d })
        } else {
            Err(Error::InvalidCoin(diag))
        }
    }

    pub(crate) fn from_entries_unchecked(a: C64, b: C64, c: C64, d: C64) -> Self {
        debug_assert!(
            CoinDiagnostics::check(a, b, c, d).worst() < 1e-9,
            "internal coin construction drifted from unitarity"
        );
        CoinOperator { a, b, c, d }
    }

    /// The balanced coin `[[1, 1], [1, -1]] / sqrt(2)`.
    pub fn hadamard() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        CoinOperator {
            a: h,
            b: h,
            c: h,
            d: -h,
        }
    }

    /// The trivial coin; the walk under it moves ballistically.
    pub fn identity() -> Self {
        CoinOperator {
            a: C64::new(1.0, 0.0),
            b: C64::new(0.0, 0.0),
            c: C64::new(0.0, 0.0),
            d: C64::new(1.0, 0.0),
        }
    }

    /// Builds a member of the general two-parameter coin family from its
    /// first row and determinant: `c = -D b*`, `d = D a*`.
    ///
    /// Requires `|a|^2 + |b|^2 = 1` and `|D| = 1` within [`UNITARITY_TOL`].
    pub fn konno(a: C64, b: C64, det: C64) -> Result<Self> {
        if ![a, b, det]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::NonFinite {
                context: "coin parameters",
            });
        }
        let row = (a.norm_sqr() + b.norm_sqr() - 1.0).abs();
        let dm = (det.norm() - 1.0).abs();
        if row > UNITARITY_TOL || dm > UNITARITY_TOL {
            let mut diag = CoinDiagnostics::check(a, b, -det * b.conj(), det * a.conj());
            diag.row1_norm = row;
            diag.det_modulus = dm;
            return Err(Error::InvalidCoin(diag));
        }
        Ok(CoinOperator {
            a,
            b,
            c: -det * b.conj(),
            d: det * a.conj(),
        })
    }

    /// The dephasing coin `[[cos d, -i sin d], [-i sin d, cos d]]` realized
    /// by an electro-optic modulator with axes at 45 degrees.
    pub fn galton(delta: f64) -> Self {
        let c = C64::new(delta.cos(), 0.0);
        let s = C64::new(0.0, -delta.sin());
        CoinOperator { a: c, b: s, c: s, d: c }
    }

    pub fn a(&self) -> C64 {
        self.a
    }
    pub fn b(&self) -> C64 {
        self.b
    }
    pub fn c(&self) -> C64 {
        self.c
    }
    pub fn d(&self) -> C64 {
        self.d
    }

    /// Determinant `ad - bc`; unit modulus for every valid coin.
    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    /// Applies the matrix to an amplitude pair.
    #[inline]
    pub fn mix(&self, r: C64, l: C64) -> (C64, C64) {
        (self.a * r + self.b * l, self.c * r + self.d * l)
    }

    /// Re-measures the unitarity constraints of this coin.
    pub fn diagnostics(&self) -> CoinDiagnostics {
        CoinDiagnostics::check(self.a, self.b, self.c, self.d)
    }
}

/// Matrix product; `(u * v).mix(r, l)` equals `u.mix` applied after `v.mix`.
impl Mul for CoinOperator {
    type Output = CoinOperator;

    fn mul(self, rhs: CoinOperator) -> CoinOperator {
        CoinOperator::from_entries_unchecked(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }
}

/// Validates an arbitrary 2x2 matrix as a coin, reporting which constraint
/// failed and by how much.
pub fn validate_coin(a: C64, b: C64, c: C64, d: C64) -> (bool, CoinDiagnostics) {
    let diag = CoinDiagnostics::check(a, b, c, d);
    (diag.is_valid(), diag)
}

/// A normalized two-component initial state `alpha |R> + beta |L>`.
///
/// The first component is the amplitude that steps toward larger positions,
/// the second the one that steps toward smaller positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinState {
    alpha: C64,
    beta: C64,
}

impl CoinState {
    /// Requires `|alpha|^2 + |beta|^2 = 1` within [`STATE_NORM_TOL`].
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        if ![alpha, beta]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::NonFinite {
                context: "coin state",
            });
        }
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::UnnormalizedCoinState { norm });
        }
        Ok(CoinState { alpha, beta })
    }

    /// `(1, 0)`: all weight on the component moving toward +m.
    pub fn right_mover() -> Self {
        CoinState {
            alpha: C64::new(1.0, 0.0),
            beta: C64::new(0.0, 0.0),
        }
    }

    /// `(0, 1)`: all weight on the component moving toward -m.
    pub fn left_mover() -> Self {
        CoinState {
            alpha: C64::new(0.0, 0.0),
            beta: C64::new(1.0, 0.0),
        }
    }

    /// `(1, i) / sqrt(2)`: spreads symmetrically under the balanced coin.
    pub fn symmetric() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        CoinState {
            alpha: C64::new(h, 0.0),
            beta: C64::new(0.0, h),
        }
    }

    /// `(1, 1) / sqrt(2)`: real equal-weight pair.
    pub fn balanced_real() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        CoinState {
            alpha: C64::new(h, 0.0),
            beta: C64::new(h, 0.0),
        }
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }
}
