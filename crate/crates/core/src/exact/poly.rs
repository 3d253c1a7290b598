//! Univariate polynomials, coefficients stored lowest degree first.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::scalar::{Gq, Rational};
use crate::error::AlgebraError;

/// Polynomial over the Gaussian rationals (characteristic polynomials).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    coeffs: Vec<Gq>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Gq>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Gq::one()] }
    }

    /// `x - a`.
    pub fn x_minus(a: &Gq) -> Self {
        Poly::new(vec![-a, Gq::one()])
    }

    pub fn coeffs(&self) -> &[Gq] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Gq) -> Gq {
        let mut acc = Gq::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Gq::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Poly::new(out)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Gq::zero();
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) - o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Gq) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Real polynomial, when every coefficient has zero imaginary part.
    pub fn to_real(&self) -> Result<RealPoly, AlgebraError> {
        if !self.coeffs.iter().all(Gq::is_real) {
            return Err(AlgebraError::NonRealPolynomial);
        }
        Ok(RealPoly::new(self.coeffs.iter().map(|c| c.re.clone()).collect()))
    }
}

/// Polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealPoly {
    coeffs: Vec<Rational>,
}

impl RealPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RealPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        RealPoly::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Sign as `x -> +inf` (`positive = true`) or `x -> -inf`.
    pub fn sign_at_infinity(&self, positive: bool) -> i8 {
        let Some(d) = self.degree() else { return 0 };
        let s = if self.leading().is_positive() { 1 } else { -1 };
        if positive || d % 2 == 0 {
            s
        } else {
            -s
        }
    }

    pub fn derivative(&self) -> RealPoly {
        RealPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn monic(&self) -> RealPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        RealPoly::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn neg(&self) -> RealPoly {
        RealPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Rational::zero();
        RealPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) - o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, o: &RealPoly) -> RealPoly {
        if self.is_zero() || o.is_zero() {
            return RealPoly::new(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RealPoly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &RealPoly) -> (RealPoly, RealPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (RealPoly::new(Vec::new()), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (RealPoly::new(q), RealPoly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &RealPoly) -> RealPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: returns `(f_i, i)` with
    /// `p = lc * prod f_i^i`, each `f_i` square-free, monic and non-constant.
    pub fn square_free_factors(&self) -> Vec<(RealPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.div_rem(&a).0;
        let mut c = fp.div_rem(&a).0;
        let mut dpoly = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let ai = b.gcd(&dpoly);
            if ai.degree().unwrap_or(0) > 0 {
                out.push((ai.clone(), i));
            }
            b = b.div_rem(&ai).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = dpoly.div_rem(&ai).0;
            dpoly = c.sub(&b.derivative());
            i += 1;
        }
        out
    }
}

impl fmt::Display for RealPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let p = RealPoly::from_ints(&[-1, 0, 1]);
        let q = RealPoly::from_ints(&[1, 1]);
        let (quo, rem) = p.div_rem(&q);
        assert_eq!(quo, RealPoly::from_ints(&[-1, 1]));
        assert!(rem.is_zero());
        let g = p.gcd(&RealPoly::from_ints(&[-1, 1]));
        assert_eq!(g, RealPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn yun_recovers_multiplicities() {
        // (x-1)^2 (x+2)^3 x
        let l = RealPoly::from_ints(&[-1, 1]);
        let m = RealPoly::from_ints(&[2, 1]);
        let x = RealPoly::from_ints(&[0, 1]);
        let p = l.mul(&l).mul(&m).mul(&m).mul(&m).mul(&x).mul(&RealPoly::from_ints(&[3]));
        let f = p.square_free_factors();
        let degs: Vec<(usize, usize)> = f.iter().map(|(g, i)| (g.degree().unwrap(), *i)).collect();
        assert_eq!(degs, vec![(1, 1), (1, 2), (1, 3)]);
        assert_eq!(f[0].0, x);
        assert_eq!(f[1].0, l);
        assert_eq!(f[2].0, m);
    }

    #[test]
    fn complex_poly_to_real() {
        let p = Poly::x_minus(&Gq::i());
        assert!(p.to_real().is_err());
        assert_eq!(Poly::x_minus(&Gq::from_int(2)).to_real().unwrap(), RealPoly::from_ints(&[-2, 1]));
    }
}
