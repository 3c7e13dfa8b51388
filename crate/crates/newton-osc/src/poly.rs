//! Exact sparse multivariate polynomials with rational coefficients.
//!
//! A polynomial is a finite map from exponent vectors to nonzero
//! `BigRational` coefficients. The ambient dimension is fixed at
//! construction; every stored exponent vector has that length. All
//! arithmetic here is exact — floating point enters only when a caller
//! evaluates with `f64` inputs.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Multi-index of variable exponents; length equals the ambient dimension.
pub type MultiIndex = Vec<u32>;

/// Sparse multivariate polynomial over the rationals.
///
/// Invariants: no stored coefficient is zero; every key has length
/// `dim`. The zero polynomial is the empty term map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, BigRational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, BigRational)>,
    {
        let mut p = Polynomial::zero(dim);
        for (exps, coeff) in terms {
            if exps.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: exps.len(),
                });
            }
            p.add_term(exps, coeff);
        }
        Ok(p)
    }

    /// Single term `coeff * x^exps`.
    pub fn monomial(exps: MultiIndex, coeff: BigRational) -> Self {
        let dim = exps.len();
        let mut p = Polynomial::zero(dim);
        p.add_term(exps, coeff);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigRational)> {
        self.terms.iter()
    }

    /// Exponent vectors with nonzero coefficient.
    pub fn support(&self) -> Vec<MultiIndex> {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&vec![0; self.dim])
    }

    pub fn add_term(&mut self, exps: MultiIndex, coeff: BigRational) {
        debug_assert_eq!(exps.len(), self.dim);
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut out = Polynomial::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exps: MultiIndex = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exps, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Polynomial::monomial(vec![0; self.dim], BigRational::one());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base).expect("same dimension");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same dimension");
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    /// Term-wise partial derivative along `axis` (1-based).
    pub fn partial_derivative(&self, axis: usize) -> Result<Polynomial> {
        if axis < 1 || axis > self.dim {
            return Err(Error::AxisOutOfRange {
                axis,
                dim: self.dim,
            });
        }
        let j = axis - 1;
        let mut out = Polynomial::zero(self.dim);
        for (e, c) in &self.terms {
            if e[j] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[j] -= 1;
            let factor = BigRational::from_integer(e[j].into());
            out.add_term(exps, c * factor);
        }
        Ok(out)
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: point.len(),
            });
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    term *= x;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Floating-point evaluation.
    pub fn eval_f64(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: point.len(),
            });
        }
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut term = c.to_f64().unwrap_or(f64::NAN);
            for (x, &k) in point.iter().zip(e) {
                term *= x.powi(k as i32);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Substitute each variable by a monomial in `out_dim` new variables:
    /// `x_j -> prod_k z_k^{images[j][k]}`. Exponents map linearly; like
    /// terms combine.
    pub fn compose_monomials(&self, images: &[MultiIndex], out_dim: usize) -> Result<Polynomial> {
        if images.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: images.len(),
            });
        }
        for img in images {
            if img.len() != out_dim {
                return Err(Error::DimensionMismatch {
                    expected: out_dim,
                    got: img.len(),
                });
            }
        }
        let mut out = Polynomial::zero(out_dim);
        for (e, c) in &self.terms {
            let mut exps = vec![0u32; out_dim];
            for (j, &k) in e.iter().enumerate() {
                for (slot, &img) in exps.iter_mut().zip(&images[j]) {
                    *slot += k * img;
                }
            }
            out.add_term(exps, c.clone());
        }
        Ok(out)
    }

    /// Same substitution computed through generic polynomial arithmetic
    /// (products of powers of the image monomials). Used to cross-check
    /// `compose_monomials` where an exact identity matters.
    pub fn compose_monomials_by_arithmetic(
        &self,
        images: &[MultiIndex],
        out_dim: usize,
    ) -> Result<Polynomial> {
        if images.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: images.len(),
            });
        }
        let mut out = Polynomial::zero(out_dim);
        for (e, c) in &self.terms {
            let mut term = Polynomial::monomial(vec![0; out_dim], c.clone());
            for (j, &k) in e.iter().enumerate() {
                let image = Polynomial::monomial(images[j].clone(), BigRational::one());
                term = term.mul(&image.pow(k))?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Restriction to the variables listed in `vars` (0-based, strictly
    /// increasing). Every term must be supported on those variables.
    pub fn restrict_to_vars(&self, vars: &[usize]) -> Result<Polynomial> {
        let mut out = Polynomial::zero(vars.len());
        for (e, c) in &self.terms {
            for (j, &k) in e.iter().enumerate() {
                if k > 0 && !vars.contains(&j) {
                    return Err(Error::InvalidInput(format!(
                        "term uses variable x{} outside the restriction set",
                        j + 1
                    )));
                }
            }
            let exps: MultiIndex = vars.iter().map(|&j| e[j]).collect();
            out.add_term(exps, c.clone());
        }
        Ok(out)
    }

    /// 0-based indices of variables that occur with positive exponent.
    pub fn effective_vars(&self) -> Vec<usize> {
        let mut used = vec![false; self.dim];
        for e in self.terms.keys() {
            for (j, &k) in e.iter().enumerate() {
                if k > 0 {
                    used[j] = true;
                }
            }
        }
        (0..self.dim).filter(|&j| used[j]).collect()
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.denom().is_one() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    /// Canonical form: terms in descending lexicographic exponent order,
    /// unit coefficients elided, `^1` elided. `parse_polynomial` of the
    /// output reproduces the polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exps, coeff)) in self.terms.iter().rev().enumerate() {
            let neg = coeff.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coeff.abs();
            let is_const = exps.iter().all(|&k| k == 0);
            if is_const {
                write_rational(f, &mag)?;
            } else {
                let mut wrote = false;
                if !mag.is_one() {
                    write_rational(f, &mag)?;
                    wrote = true;
                }
                for (j, &k) in exps.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    if wrote {
                        write!(f, "*")?;
                    }
                    write!(f, "x{}", j + 1)?;
                    if k > 1 {
                        write!(f, "^{}", k)?;
                    }
                    wrote = true;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn monomial_evaluation() {
        let p = Polynomial::monomial(vec![2, 1], rat(1));
        let v = p.eval_rational(&[rat(2), rat(3)]).unwrap();
        assert_eq!(v, rat(12));
    }

    #[test]
    fn evaluation_at_origin_is_constant_term() {
        let p = parse_polynomial("x1^3 + x2^2 + 5", 2).unwrap();
        let v = p.eval_rational(&[rat(0), rat(0)]).unwrap();
        assert_eq!(v, rat(5));
        assert_eq!(p.constant_term(), rat(5));
    }

    #[test]
    fn mixed_sign_evaluation() {
        let p = parse_polynomial("x1^3 + x2^2", 2).unwrap();
        let v = p.eval_rational(&[rat(1), rat(-1)]).unwrap();
        assert_eq!(v, rat(2));
    }

    #[test]
    fn derivative_drops_vanishing_terms() {
        let p = Polynomial::monomial(vec![2, 1], rat(1));
        let d1 = p.partial_derivative(1).unwrap();
        assert_eq!(d1, Polynomial::monomial(vec![1, 1], rat(2)));
        let d2 = p.partial_derivative(2).unwrap();
        assert_eq!(d2, Polynomial::monomial(vec![2, 0], rat(1)));
        let c = Polynomial::monomial(vec![0, 0], rat(7));
        assert!(c.partial_derivative(1).unwrap().is_zero());
    }

    #[test]
    fn derivative_axis_out_of_range() {
        let p = Polynomial::monomial(vec![2, 1], rat(1));
        assert!(matches!(
            p.partial_derivative(3),
            Err(Error::AxisOutOfRange { .. })
        ));
        assert!(matches!(
            p.partial_derivative(0),
            Err(Error::AxisOutOfRange { .. })
        ));
    }

    #[test]
    fn compose_routes_agree() {
        let p = parse_polynomial("x1^3 + 2*x1*x2^2 - x2^5", 2).unwrap();
        // x1 -> y1*y2^2, x2 -> y1*y2^3
        let images = vec![vec![1, 2], vec![1, 3]];
        let a = p.compose_monomials(&images, 2).unwrap();
        let b = p.compose_monomials_by_arithmetic(&images, 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn display_canonical() {
        let p = parse_polynomial("x2^2 + x1^3", 2).unwrap();
        assert_eq!(p.to_string(), "x1^3 + x2^2");
        let q = parse_polynomial("-2/5*x1*x2 + 3", 2).unwrap();
        assert_eq!(q.to_string(), "-2/5*x1*x2 + 3");
        assert_eq!(Polynomial::zero(2).to_string(), "0");
    }
}
