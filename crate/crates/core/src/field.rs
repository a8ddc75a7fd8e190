//! Planar polynomial vector fields and the differential primitives built on
//! them: Lie derivative, wedge with the radial field, divergence, the
//! Hamiltonian/radial splitting and the Lie bracket.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{BiPoly, HomoPoly};
use crate::rational::Rational;

/// The vector field `P d/dx + Q d/dy` with a singular point at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PlanarField {
    p: BiPoly,
    q: BiPoly,
}

impl PlanarField {
    pub fn new(p: BiPoly, q: BiPoly) -> Result<Self> {
        if !p.constant_term().is_zero() || !q.constant_term().is_zero() {
            return Err(Error::OriginNotSingular);
        }
        Ok(PlanarField { p, q })
    }

    pub fn zero() -> Self {
        PlanarField::default()
    }

    /// The radial field `D = (x, y)`.
    pub fn radial() -> Self {
        PlanarField {
            p: BiPoly::x(),
            q: BiPoly::y(),
        }
    }

    pub fn parse(p: &str, q: &str) -> Result<Self> {
        PlanarField::new(BiPoly::parse(p)?, BiPoly::parse(q)?)
    }

    pub fn p(&self) -> &BiPoly {
        &self.p
    }

    pub fn q(&self) -> &BiPoly {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn min_degree(&self) -> Option<u32> {
        [self.p.min_degree(), self.q.min_degree()]
            .into_iter()
            .flatten()
            .min()
    }

    pub fn degree(&self) -> Option<u32> {
        [self.p.degree(), self.q.degree()].into_iter().flatten().max()
    }

    pub fn truncate(&self, max_degree: u32) -> PlanarField {
        PlanarField {
            p: self.p.truncate(max_degree),
            q: self.q.truncate(max_degree),
        }
    }

    pub fn component(&self, d: u32) -> HomoField {
        HomoField {
            degree: d,
            body: PlanarField {
                p: self.p.homogeneous_part(d),
                q: self.q.homogeneous_part(d),
            },
        }
    }

    /// Lowest nonzero homogeneous component.
    pub fn leading(&self) -> Option<HomoField> {
        self.min_degree().map(|d| self.component(d))
    }

    /// `F(c) = P c_x + Q c_y`.
    pub fn lie_derivative(&self, c: &BiPoly) -> BiPoly {
        &self.p * &c.dx() + &self.q * &c.dy()
    }

    /// Lie derivative with every term above `max_degree` dropped.
    pub fn lie_derivative_truncated(&self, c: &BiPoly, max_degree: u32) -> BiPoly {
        self.p.mul_truncated(&c.dx(), max_degree) + self.q.mul_truncated(&c.dy(), max_degree)
    }

    pub fn divergence(&self) -> BiPoly {
        self.p.dx() + self.q.dy()
    }

    /// `D ^ F = x Q - y P`.
    pub fn wedge_radial(&self) -> BiPoly {
        &BiPoly::x() * &self.q - &BiPoly::y() * &self.p
    }

    pub fn scale(&self, c: &Rational) -> PlanarField {
        PlanarField {
            p: self.p.scale(c),
            q: self.q.scale(c),
        }
    }

    /// Multiplication by a scalar polynomial, truncated.
    pub fn mul_scalar(&self, s: &BiPoly, max_degree: u32) -> PlanarField {
        PlanarField {
            p: self.p.mul_truncated(s, max_degree),
            q: self.q.mul_truncated(s, max_degree),
        }
    }

    /// `DF . G`, the Jacobian of `self` applied to `g`, truncated.
    pub fn jacobian_apply(&self, g: &PlanarField, max_degree: u32) -> PlanarField {
        PlanarField {
            p: g.lie_derivative_truncated(&self.p, max_degree),
            q: g.lie_derivative_truncated(&self.q, max_degree),
        }
    }

    /// Components of the Jacobian matrix `[[P_x, P_y], [Q_x, Q_y]]`.
    pub fn jacobian(&self) -> [[BiPoly; 2]; 2] {
        [
            [self.p.dx(), self.p.dy()],
            [self.q.dx(), self.q.dy()],
        ]
    }

    /// Componentwise substitution `F(sx, sy)`, truncated.
    pub fn compose(&self, sx: &BiPoly, sy: &BiPoly, max_degree: u32) -> PlanarField {
        PlanarField {
            p: self.p.compose(sx, sy, max_degree),
            q: self.q.compose(sx, sy, max_degree),
        }
    }

    /// Swaps the roles of `x` and `y`: `(P, Q)(x, y) -> (Q, P)(y, x)`.
    pub fn swap_axes(&self) -> PlanarField {
        let sw = |p: &BiPoly| BiPoly::from_terms(p.terms().map(|(m, c)| (crate::poly::Monomial::new(m.y, m.x), c.clone())));
        PlanarField {
            p: sw(&self.q),
            q: sw(&self.p),
        }
    }
}

impl std::ops::Add<&PlanarField> for &PlanarField {
    type Output = PlanarField;
    fn add(self, rhs: &PlanarField) -> PlanarField {
        PlanarField {
            p: &self.p + &rhs.p,
            q: &self.q + &rhs.q,
        }
    }
}

impl std::ops::Sub<&PlanarField> for &PlanarField {
    type Output = PlanarField;
    fn sub(self, rhs: &PlanarField) -> PlanarField {
        PlanarField {
            p: &self.p - &rhs.p,
            q: &self.q - &rhs.q,
        }
    }
}

impl std::ops::Neg for &PlanarField {
    type Output = PlanarField;
    fn neg(self) -> PlanarField {
        PlanarField {
            p: -&self.p,
            q: -&self.q,
        }
    }
}

impl fmt::Display for PlanarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// Lie bracket `[F, G] = DF.G - DG.F`, truncated at `max_degree`.
///
/// With this orientation the radial field satisfies `[F_2, D] = F_2` for a
/// homogeneous quadratic `F_2`.
pub fn lie_bracket(f: &PlanarField, g: &PlanarField, max_degree: u32) -> PlanarField {
    &f.jacobian_apply(g, max_degree) - &g.jacobian_apply(f, max_degree)
}

/// Hamiltonian field `X_h = (-h_y, h_x)`.
pub fn hamiltonian_field(h: &BiPoly) -> PlanarField {
    PlanarField {
        p: -h.dy(),
        q: h.dx(),
    }
}

/// A vector field whose components are homogeneous of one degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomoField {
    degree: u32,
    body: PlanarField,
}

impl HomoField {
    pub fn new(degree: u32, body: PlanarField) -> Result<Self> {
        if !body.p.is_homogeneous_of(degree) || !body.q.is_homogeneous_of(degree) {
            return Err(Error::NotHomogeneous { degree });
        }
        Ok(HomoField { degree, body })
    }

    pub fn from_parts(degree: u32, p: BiPoly, q: BiPoly) -> Result<Self> {
        if degree == 0 && !(p.is_zero() && q.is_zero()) {
            return Err(Error::OriginNotSingular);
        }
        HomoField::new(degree, PlanarField { p, q })
    }

    pub fn zero(degree: u32) -> Self {
        HomoField {
            degree,
            body: PlanarField::zero(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn body(&self) -> &PlanarField {
        &self.body
    }

    pub fn into_body(self) -> PlanarField {
        self.body
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }
}

/// Homogeneous components in ascending degree, zero components skipped.
pub fn homogeneous_components(f: &PlanarField) -> Vec<HomoField> {
    let (Some(lo), Some(hi)) = (f.min_degree(), f.degree()) else {
        return Vec::new();
    };
    (lo..=hi)
        .map(|d| f.component(d))
        .filter(|c| !c.is_zero())
        .collect()
}

pub fn lie_derivative(f: &PlanarField, c: &BiPoly) -> BiPoly {
    f.lie_derivative(c)
}

/// `h = (x Q_k - y P_k) / (k + 1)`, homogeneous of degree `k + 1`.
pub fn wedge_with_radial(fk: &HomoField) -> HomoPoly {
    let k = fk.degree;
    let h = fk.body.wedge_radial().scale(&Rational::new(1.into(), (k + 1).into()));
    HomoPoly::new(k + 1, h).expect("wedge of a homogeneous field is homogeneous")
}

/// `mu = div(F_k) / (k + 1)`, homogeneous of degree `k - 1`.
pub fn divergence_part(fk: &HomoField) -> Result<HomoPoly> {
    let k = fk.degree;
    if k == 0 {
        return Err(Error::InvalidArgument(
            "divergence part needs degree at least 1".into(),
        ));
    }
    let mu = fk
        .body
        .divergence()
        .scale(&Rational::new(1.into(), (k + 1).into()));
    HomoPoly::new(k - 1, mu)
}

/// Unique decomposition `F_k = X_h + mu D`.
pub fn split(fk: &HomoField) -> Result<(HomoPoly, HomoPoly)> {
    let mu = divergence_part(fk)?;
    Ok((wedge_with_radial(fk), mu))
}

/// Inverse of [`split`]: `X_h + mu D`.
pub fn reconstruct(h: &HomoPoly, mu: &HomoPoly) -> PlanarField {
    let xh = hamiltonian_field(h.body());
    PlanarField {
        p: &xh.p + &(&BiPoly::x() * mu.body()),
        q: &xh.q + &(&BiPoly::y() * mu.body()),
    }
}
