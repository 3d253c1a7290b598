//! Certified real-root isolation with Sturm sequences.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::poly::RealPoly;
use super::scalar::{format_rational, int, Rational};
use crate::error::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootKind {
    Exact(Rational),
    /// The unique root of the square-free `poly` in the open interval `(lo, hi)`;
    /// the root is irrational.
    Isolated { lo: Rational, hi: Rational, poly: RealPoly },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealAlgebraicRoot {
    pub kind: RootKind,
    pub multiplicity: usize,
}

impl RealAlgebraicRoot {
    pub fn exact(value: Rational, multiplicity: usize) -> Self {
        RealAlgebraicRoot { kind: RootKind::Exact(value), multiplicity }
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        match &self.kind {
            RootKind::Exact(v) => Some(v),
            RootKind::Isolated { .. } => None,
        }
    }

    /// Lower end of the enclosing interval (the value itself when exact).
    pub fn lower(&self) -> &Rational {
        match &self.kind {
            RootKind::Exact(v) => v,
            RootKind::Isolated { lo, .. } => lo,
        }
    }

    pub fn upper(&self) -> &Rational {
        match &self.kind {
            RootKind::Exact(v) => v,
            RootKind::Isolated { hi, .. } => hi,
        }
    }

    /// Certified sign of the root.
    pub fn signum(&self) -> i8 {
        match self.cmp_rational(&Rational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// Exact comparison of the root against a rational.
    pub fn cmp_rational(&self, t: &Rational) -> Ordering {
        match &self.kind {
            RootKind::Exact(v) => v.cmp(t),
            RootKind::Isolated { lo, hi, poly } => {
                if hi <= t {
                    Ordering::Less
                } else if lo >= t {
                    Ordering::Greater
                } else if poly.sign_at(lo) == poly.sign_at(t) {
                    // no sign change on (lo, t], root lies in (t, hi)
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    fn overlaps(&self, o: &RealAlgebraicRoot) -> bool {
        match (&self.kind, &o.kind) {
            (RootKind::Exact(a), RootKind::Exact(b)) => a == b,
            (RootKind::Exact(v), RootKind::Isolated { lo, hi, .. })
            | (RootKind::Isolated { lo, hi, .. }, RootKind::Exact(v)) => lo < v && v < hi,
            (RootKind::Isolated { lo: a, hi: b, .. }, RootKind::Isolated { lo: c, hi: d, .. }) => a < d && c < b,
        }
    }

    fn bisect(&mut self) {
        if let RootKind::Isolated { lo, hi, poly } = &mut self.kind {
            let mid = (&*lo + &*hi) / int(2);
            if poly.sign_at(lo) == poly.sign_at(&mid) {
                *lo = mid;
            } else {
                *hi = mid;
            }
        }
    }
}

impl fmt::Display for RealAlgebraicRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RootKind::Exact(v) => write!(f, "{v}"),
            RootKind::Isolated { lo, hi, .. } => write!(f, "({lo}, {hi})"),
        }
    }
}

impl Serialize for RealAlgebraicRoot {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match &self.kind {
            RootKind::Exact(v) => {
                m.serialize_entry("kind", "exact")?;
                m.serialize_entry("value", &format_rational(v))?;
            }
            RootKind::Isolated { lo, hi, .. } => {
                m.serialize_entry("kind", "isolated")?;
                m.serialize_entry("lo", &format_rational(lo))?;
                m.serialize_entry("hi", &format_rational(hi))?;
            }
        }
        m.serialize_entry("multiplicity", &self.multiplicity)?;
        m.end()
    }
}

/// Sturm chain of a square-free polynomial.
struct Sturm {
    chain: Vec<RealPoly>,
}

impl Sturm {
    fn new(p: &RealPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].div_rem(&chain[n - 1]).1.neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        Sturm { chain }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Number of distinct roots in `(a, b]`.
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// Smallest-denominator rational in the closed interval `[a, b]`.
pub fn simplest_rational(a: &Rational, b: &Rational) -> Rational {
    debug_assert!(a <= b);
    if !a.is_positive() && !b.is_negative() {
        return Rational::zero();
    }
    if b.is_negative() {
        return -simplest_rational(&-b.clone(), &-a.clone());
    }
    let fl = a.floor();
    if &fl == a {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= b {
        return next;
    }
    let inner = simplest_rational(&(Rational::one() / (b - &fl)), &(Rational::one() / (a - &fl)));
    fl + Rational::one() / inner
}

/// Scales `p` to a primitive integer polynomial and returns its leading coefficient.
fn integer_leading(p: &RealPoly) -> BigInt {
    let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    (ints.last().unwrap() / g).abs()
}

/// Cauchy bound: every real root lies strictly inside `(-B, B)`.
fn cauchy_bound(p: &RealPoly) -> Rational {
    let lc = p.leading().abs();
    let n = p.coeffs().len();
    let m = p.coeffs()[..n - 1].iter().map(|c| c.abs() / &lc).max().unwrap_or_else(Rational::zero);
    m + Rational::one()
}

/// All real roots of `p` with multiplicity, in increasing order. Rational
/// roots are reported exactly; irrational ones inside open intervals of width
/// at most `width` that are pairwise disjoint and exclude zero.
pub fn isolate_real_roots(p: &RealPoly, width: &Rational) -> Result<Vec<RealAlgebraicRoot>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if !width.is_positive() {
        return Err(AlgebraError::NonPositiveWidth);
    }
    let mut roots = Vec::new();
    for (f, mult) in p.square_free_factors() {
        isolate_square_free(&f, mult, width, &mut roots);
    }
    // Separate roots of different factors.
    loop {
        roots.sort_by(|a, b| a.lower().cmp(b.lower()).then_with(|| a.upper().cmp(b.upper())));
        let Some(i) = (1..roots.len()).find(|&i| roots[i - 1].overlaps(&roots[i])) else {
            break;
        };
        roots[i - 1].bisect();
        roots[i].bisect();
    }
    Ok(roots)
}

fn isolate_square_free(f: &RealPoly, mult: usize, width: &Rational, out: &mut Vec<RealAlgebraicRoot>) {
    let sturm = Sturm::new(f);
    let bound = cauchy_bound(f);
    let lc = integer_leading(f);
    // Distinct rationals with denominators <= lc are at least 1/lc^2 apart.
    let sep = Rational::new(BigInt::one(), BigInt::from(2) * &lc * &lc);
    let two = int(2);
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let n = sturm.count(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n > 1 {
            let mut mid = (&lo + &hi) / &two;
            let mut step = (&hi - &lo) / int(7);
            while f.sign_at(&mid).is_zero() {
                mid += &step;
                step = step / &two;
            }
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
            continue;
        }
        let (mut lo, mut hi) = (lo, hi);
        while &hi - &lo >= sep {
            let mid = (&lo + &hi) / &two;
            if f.sign_at(&mid) == 0 {
                lo = mid.clone();
                hi = mid;
                break;
            }
            if f.sign_at(&lo) == f.sign_at(&mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let cand = simplest_rational(&lo, &hi);
        if f.sign_at(&cand) == 0 {
            out.push(RealAlgebraicRoot::exact(cand, mult));
            continue;
        }
        let mut root = RealAlgebraicRoot { kind: RootKind::Isolated { lo, hi, poly: f.clone() }, multiplicity: mult };
        let zero = Rational::zero();
        while root.upper() - root.lower() > *width || (root.lower() < &zero && root.upper() > &zero) {
            root.bisect();
        }
        out.push(root);
    }
}

/// Smallest root strictly greater than zero.
pub fn smallest_positive(roots: &[RealAlgebraicRoot]) -> Option<&RealAlgebraicRoot> {
    roots.iter().find(|r| r.signum() > 0)
}

/// Default isolation width `10^-30`.
pub fn default_width() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10).pow(30))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::rat;

    #[test]
    fn exact_rational_roots() {
        let r = isolate_real_roots(&RealPoly::from_ints(&[-1, 0, 1]), &int(1)).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].exact_value(), Some(&int(-1)));
        assert_eq!(r[1].exact_value(), Some(&int(1)));
        let r = isolate_real_roots(&RealPoly::from_ints(&[0, 0, 1]), &int(1)).unwrap();
        assert_eq!(r, vec![RealAlgebraicRoot::exact(int(0), 2)]);
        // 6x^2 - 5x + 1 = (2x-1)(3x-1)
        let r = isolate_real_roots(&RealPoly::from_ints(&[1, -5, 6]), &int(1)).unwrap();
        assert_eq!(r[0].exact_value(), Some(&rat(1, 3)));
        assert_eq!(r[1].exact_value(), Some(&rat(1, 2)));
    }

    #[test]
    fn irrational_roots_are_bracketed() {
        let w = rat(1, 1000);
        let p = RealPoly::from_ints(&[-2, 0, 1]);
        let r = isolate_real_roots(&p, &w).unwrap();
        assert_eq!(r.len(), 2);
        for (root, sign) in r.iter().zip([-1i8, 1]) {
            assert!(root.upper() - root.lower() <= w);
            assert_eq!(root.signum(), sign);
            // independent check: the bracket squares straddle 2
            let (lo, hi) = (root.lower().abs(), root.upper().abs());
            let (a, b) = if lo < hi { (lo, hi) } else { (hi, lo) };
            assert!(&a * &a < int(2) && &b * &b > int(2));
        }
        assert_eq!(r[1].cmp_rational(&rat(141, 100)), Ordering::Greater);
        assert_eq!(r[1].cmp_rational(&rat(1415, 1000)), Ordering::Less);
    }

    #[test]
    fn mixed_factors_are_disjoint() {
        // (x^2-2)(x-3/2)^2
        let p = RealPoly::from_ints(&[-2, 0, 1]).mul(&RealPoly::new(vec![rat(9, 4), int(-3), int(1)]));
        let r = isolate_real_roots(&p, &rat(1, 10)).unwrap();
        assert_eq!(r.iter().map(|x| x.multiplicity).sum::<usize>(), 4);
        assert_eq!(r[2].exact_value(), Some(&rat(3, 2)));
        for w in r.windows(2) {
            assert!(w[0].upper() <= w[1].lower());
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(isolate_real_roots(&RealPoly::new(vec![]), &int(1)), Err(AlgebraError::ZeroPolynomial));
        assert_eq!(isolate_real_roots(&RealPoly::from_ints(&[1, 1]), &int(0)), Err(AlgebraError::NonPositiveWidth));
    }

    #[test]
    fn simplest_rational_cases() {
        assert_eq!(simplest_rational(&rat(3, 10), &rat(4, 10)), rat(1, 3));
        assert_eq!(simplest_rational(&rat(-4, 10), &rat(-3, 10)), rat(-1, 3));
        assert_eq!(simplest_rational(&rat(-1, 10), &rat(1, 10)), int(0));
    }
}
