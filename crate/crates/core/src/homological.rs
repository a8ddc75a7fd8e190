//! Matrices of the homological operators of a quadratic leading part and the
//! corange bases used by the normal form.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{split, HomoField};
use crate::linalg::{greedy_complement, DirectSum, Matrix};
use crate::lv::LvData;
use crate::poly::{monomial_basis, BiPoly, HomoPoly, Monomial};
use crate::rational::{int, Rational};

/// An operator between spans of monomials, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOpMatrix {
    pub domain_basis: Vec<Monomial>,
    pub codomain_basis: Vec<Monomial>,
    pub entries: Matrix,
}

impl LinearOpMatrix {
    /// Coefficients of `p` on the domain basis. Terms outside it are ignored.
    pub fn domain_coords(&self, p: &BiPoly) -> Vec<Rational> {
        self.domain_basis.iter().map(|m| p.coeff_of(*m)).collect()
    }

    pub fn codomain_coords(&self, p: &BiPoly) -> Vec<Rational> {
        self.codomain_basis.iter().map(|m| p.coeff_of(*m)).collect()
    }

    pub fn domain_poly(&self, coords: &[Rational]) -> BiPoly {
        BiPoly::from_terms(self.domain_basis.iter().copied().zip(coords.iter().cloned()))
    }

    pub fn codomain_poly(&self, coords: &[Rational]) -> BiPoly {
        BiPoly::from_terms(self.codomain_basis.iter().copied().zip(coords.iter().cloned()))
    }

    pub fn apply(&self, p: &BiPoly) -> BiPoly {
        self.codomain_poly(&self.entries.mul_vec(&self.domain_coords(p)))
    }

    pub fn to_csv(&self) -> String {
        self.entries.to_csv()
    }
}

fn column_coords(basis: &[Monomial], p: &BiPoly) -> Vec<Rational> {
    basis.iter().map(|m| p.coeff_of(*m)).collect()
}

/// Matrix of `v -> F_n(v)` from `P_{k-1}` to `P_{k+n-2}`.
pub fn ell_operator(fn_: &HomoField, k: u32) -> LinearOpMatrix {
    let n = fn_.degree();
    let domain = monomial_basis(k - 1);
    let codomain = monomial_basis(k + n - 2);
    let cols: Vec<Vec<Rational>> = domain
        .iter()
        .map(|m| {
            let image = fn_.body().lie_derivative(&BiPoly::term(int(1), m.x, m.y));
            column_coords(&codomain, &image)
        })
        .collect();
    LinearOpMatrix {
        entries: Matrix::from_columns(codomain.len(), &cols),
        domain_basis: domain,
        codomain_basis: codomain,
    }
}

/// `l_k : P_{k-1} -> P_k`, `v -> G_2(v)` for the canonical leading part.
pub fn build_ell(lv: &LvData, k: u32) -> Result<LinearOpMatrix> {
    if k == 0 {
        return Err(Error::InvalidArgument("l_k needs k >= 1".into()));
    }
    Ok(ell_operator(&lv.canonical_field, k))
}

fn delta_basis(d: u32) -> Vec<Monomial> {
    vec![Monomial::new(d, 0), Monomial::new(d - 1, 1), Monomial::new(0, d)]
}

/// The reduced operator on `Delta_{k+2} = <x^{k+2}, x^{k+1} y, y^{k+2}>`:
/// `g -> Proj(F_2(g) - (3/(k+3)) (k+2) mu g)`, where the projection onto
/// `Delta_{k+3}` is taken along `h P_k`.
pub fn build_ell_c_for(f2: &HomoField, k: u32) -> Result<LinearOpMatrix> {
    if f2.degree() != 2 {
        return Err(Error::LeadingNotQuadratic {
            degree: f2.degree(),
        });
    }
    let (h, mu) = split(f2)?;
    let domain = delta_basis(k + 2);
    let codomain = delta_basis(k + 3);
    let target = monomial_basis(k + 3);
    let reducers: Vec<Vec<Rational>> = monomial_basis(k)
        .iter()
        .map(|m| column_coords(&target, &h.body().mul_monomial(*m)))
        .collect();
    let delta_cols: Vec<Vec<Rational>> = codomain
        .iter()
        .map(|m| column_coords(&target, &BiPoly::term(int(1), m.x, m.y)))
        .collect();
    let split_sum = DirectSum::new(Matrix::from_columns(target.len(), &delta_cols), &reducers)
        .ok_or(Error::ComplementVerificationFailure { degree: k + 3 })?;
    let weight = int(3 * (k as i64 + 2)) / int(k as i64 + 3);
    let mu_scaled = mu.body().scale(&weight);
    let cols: Vec<Vec<Rational>> = domain
        .iter()
        .map(|m| {
            let g = BiPoly::term(int(1), m.x, m.y);
            let w = f2.body().lie_derivative(&g) - &mu_scaled * &g;
            split_sum.decompose(&column_coords(&target, &w)).0
        })
        .collect();
    Ok(LinearOpMatrix {
        entries: Matrix::from_columns(3, &cols),
        domain_basis: domain,
        codomain_basis: codomain,
    })
}

pub fn build_ell_c(lv: &LvData, k: u32) -> Result<LinearOpMatrix> {
    build_ell_c_for(&lv.canonical_field, k)
}

/// Kernel basis as homogeneous polynomials on the domain basis.
pub fn kernel(m: &LinearOpMatrix) -> Vec<HomoPoly> {
    let degree = m.domain_basis.first().map(|b| b.degree()).unwrap_or(0);
    m.entries
        .nullspace()
        .iter()
        .map(|v| HomoPoly::new(degree, m.domain_poly(v)).expect("domain basis is homogeneous"))
        .collect()
}

/// A complement of `Range(l_k)` in `P_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorangeBasis {
    pub degree: u32,
    pub basis: Vec<HomoPoly>,
}

/// Whether the basis at this degree was seeded greedily or propagated by `I_M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorangeOrigin {
    Seed,
    Cyclic,
}

#[derive(Debug, Clone)]
struct ChainEntry {
    corange: CorangeBasis,
    origin: CorangeOrigin,
    ell: LinearOpMatrix,
    sum: DirectSum,
}

/// Corange bases of `l_k` for `k = 2..=max_degree`, each verified to
/// complement the range.
#[derive(Debug, Clone)]
pub struct CorangeChain {
    max_degree: u32,
    entries: Vec<ChainEntry>,
}

impl CorangeChain {
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    fn entry(&self, k: u32) -> &ChainEntry {
        assert!(
            (2..=self.max_degree).contains(&k),
            "corange degree {k} outside chain 2..={}",
            self.max_degree
        );
        &self.entries[(k - 2) as usize]
    }

    pub fn at(&self, k: u32) -> &CorangeBasis {
        &self.entry(k).corange
    }

    pub fn origin(&self, k: u32) -> CorangeOrigin {
        self.entry(k).origin
    }

    pub fn ell(&self, k: u32) -> &LinearOpMatrix {
        &self.entry(k).ell
    }

    pub fn bases(&self) -> impl Iterator<Item = &CorangeBasis> {
        self.entries.iter().map(|e| &e.corange)
    }

    /// Writes `v = l_k(u) + sum c_i b_i`; returns `(u, c)` with `u` of degree `k - 1`.
    pub fn decompose(&self, k: u32, v: &BiPoly) -> (HomoPoly, Vec<Rational>) {
        let e = self.entry(k);
        let (u, c) = e.sum.decompose(&e.ell.codomain_coords(v));
        let u = HomoPoly::new(k - 1, e.ell.domain_poly(&u)).expect("homogeneous domain");
        (u, c)
    }

    /// `sum c_i b_i` at degree `k`.
    pub fn combine(&self, k: u32, coords: &[Rational]) -> BiPoly {
        let mut acc = BiPoly::zero();
        for (c, b) in coords.iter().zip(&self.at(k).basis) {
            if !c.is_zero() {
                acc += &b.body().scale(c);
            }
        }
        acc
    }
}

fn monomial_poly(d: u32, m: Monomial) -> HomoPoly {
    HomoPoly::new(d, BiPoly::term(int(1), m.x, m.y)).expect("monomial")
}

/// Builds the chain up to `max_degree`. Degrees `2..=M+1` take the earliest
/// monomials independent of the range, except that `{x I_M, y I_M}` is used at
/// `M + 1` when it works; later degrees use `I_M` times the basis `M` below.
pub fn corange_chain(lv: &LvData, max_degree: u32) -> Result<CorangeChain> {
    if max_degree < 2 {
        return Err(Error::InvalidArgument("corange chain needs N >= 2".into()));
    }
    let m = lv.m();
    let im = &lv.primitive_integral;
    let mut entries: Vec<ChainEntry> = Vec::new();
    for k in 2..=max_degree {
        let ell = build_ell(lv, k)?;
        let codim = ell.codomain_basis.len() - ell.entries.rank();
        let codomain = ell.codomain_basis.clone();
        let coords = |p: &HomoPoly| column_coords(&codomain, p.body());
        let (basis, origin) = if k > m + 1 {
            let lower = &entries[(k - m - 2) as usize].corange;
            let basis: Vec<HomoPoly> = lower.basis.iter().map(|b| im.mul(b)).collect();
            (basis, CorangeOrigin::Cyclic)
        } else {
            let preferred: Option<Vec<HomoPoly>> = (k == m + 1 && codim == 2)
                .then(|| {
                    vec![
                        im.mul(&monomial_poly(1, Monomial::new(1, 0))),
                        im.mul(&monomial_poly(1, Monomial::new(0, 1))),
                    ]
                })
                .filter(|pair| {
                    let cols: Vec<_> = pair.iter().map(coords).collect();
                    DirectSum::new(ell.entries.clone(), &cols).is_some()
                });
            let basis = preferred.unwrap_or_else(|| {
                let candidates: Vec<Vec<Rational>> = codomain
                    .iter()
                    .map(|mono| coords(&monomial_poly(k, *mono)))
                    .collect();
                greedy_complement(&ell.entries, &candidates)
                    .into_iter()
                    .map(|i| monomial_poly(k, codomain[i]))
                    .collect()
            });
            (basis, CorangeOrigin::Seed)
        };
        let cols: Vec<Vec<Rational>> = basis.iter().map(coords).collect();
        let sum = DirectSum::new(ell.entries.clone(), &cols)
            .ok_or(Error::ComplementVerificationFailure { degree: k })?;
        entries.push(ChainEntry {
            corange: CorangeBasis { degree: k, basis },
            origin,
            ell,
            sum,
        });
    }
    Ok(CorangeChain {
        max_degree,
        entries,
    })
}

/// Closed form for `det l^c_{k+3}` of the canonical leading part.
pub fn ell_c_determinant_formula(p: u32, q: u32, r: u32, k: u32) -> Rational {
    let (p, q, r, k) = (p as i64, q as i64, r as i64, k as i64);
    let ratio = int(k + 2) / int(k + 3);
    let cube = &ratio * &ratio * &ratio;
    cube * int(q + q * k + p + r) * int(q + p + r * k + r) * int(p + p * k + q + r)
}
