use std::collections::BTreeMap;

use num_traits::Zero;

use super::AKManifold;
use crate::exact::{ExactMatrix, Gq, Rational};
use crate::exterior::FormValue;
use crate::operator::GradedOperator;

/// `N(X,Y) = [X,Y] + J[X,JY] + J[JX,Y] - [JX,JY]` on basis pairs `i < j`
/// (1-based), zero values omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NijenhuisTensor {
    n: usize,
    values: BTreeMap<(usize, usize), Vec<Rational>>,
}

fn real_mul(j: &ExactMatrix, v: &[Rational]) -> Vec<Rational> {
    (0..j.rows())
        .map(|r| v.iter().enumerate().fold(Rational::zero(), |acc, (c, x)| acc + &j[(r, c)].re * x))
        .collect()
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i - 1] = Rational::from_integer(1.into());
    v
}

impl NijenhuisTensor {
    pub(super) fn compute(m: &AKManifold) -> Self {
        let n = m.dim();
        let alg = m.algebra();
        let j = m.j();
        let mut values = BTreeMap::new();
        for a in 1..=n {
            for b in a + 1..=n {
                let v = Self::evaluate(alg, j, &unit(n, a), &unit(n, b));
                if v.iter().any(|c| !c.is_zero()) {
                    values.insert((a, b), v);
                }
            }
        }
        NijenhuisTensor { n, values }
    }

    /// `N(x, y)` for arbitrary coordinate vectors.
    pub fn evaluate(alg: &crate::lie::LieAlgebraData, j: &ExactMatrix, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let jx = real_mul(j, x);
        let jy = real_mul(j, y);
        let t1 = alg.bracket(x, y);
        let t2 = real_mul(j, &alg.bracket(x, &jy));
        let t3 = real_mul(j, &alg.bracket(&jx, y));
        let t4 = alg.bracket(&jx, &jy);
        (0..x.len()).map(|k| &t1[k] + &t2[k] + &t3[k] - &t4[k]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// `N(ξ_i, ξ_j)` for any `i, j` (1-based).
    pub fn value(&self, i: usize, j: usize) -> Vec<Rational> {
        let zero = vec![Rational::zero(); self.n];
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => zero,
            std::cmp::Ordering::Less => self.values.get(&(i, j)).cloned().unwrap_or(zero),
            std::cmp::Ordering::Greater => self.values.get(&(j, i)).map(|v| v.iter().map(|c| -c).collect()).unwrap_or(zero),
        }
    }

    pub fn nonzero_values(&self) -> &BTreeMap<(usize, usize), Vec<Rational>> {
        &self.values
    }

    /// Checks `N(JX, Y) = -J N(X, Y)` on all basis pairs.
    pub fn anticommutes_with_j(&self, m: &AKManifold) -> bool {
        let n = self.n;
        (1..=n).all(|a| {
            (1..=n).all(|b| {
                let jx = real_mul(m.j(), &unit(n, a));
                let lhs = Self::evaluate(m.algebra(), m.j(), &jx, &unit(n, b));
                let rhs: Vec<Rational> = real_mul(m.j(), &self.value(a, b)).iter().map(|c| -c).collect();
                lhs == rhs
            })
        })
    }

    /// Degree `+1` derivation extending `(N*α)(X, Y) = α(N(X, Y))`.
    pub fn dual_derivation(&self, m: &AKManifold) -> GradedOperator {
        let n = self.n;
        let images: Vec<FormValue> = (1..=n)
            .map(|k| {
                let mut f = FormValue::zero(n);
                for ((i, j), v) in &self.values {
                    if !v[k - 1].is_zero() {
                        f = f.add(&FormValue::alpha(n, &[*i, *j]).scale(&Gq::real(v[k - 1].clone())));
                    }
                }
                f
            })
            .collect();
        GradedOperator::derivation("N*", m.basis(), &images, 1)
    }
}

/// Outcome of comparing `μ + μ̄` against `N*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConventionFactor {
    /// Both vanish.
    BothZero,
    /// `μ + μ̄ = c N*` with the same `c` on every basis form.
    Constant(Gq),
    /// No single factor relates the two operators.
    Inconsistent,
}

/// Measures `c` with `μ + μ̄ = c N*` entrywise.
pub fn convention_factor(mu_plus_mubar: &GradedOperator, nstar: &GradedOperator) -> ConventionFactor {
    let mut factor: Option<Gq> = None;
    for k in 0..=nstar.n() {
        let (Some(a), Some(b)) = (mu_plus_mubar.block(k), nstar.block(k)) else { continue };
        for (r, c, x) in b.entries() {
            let y = &a[(r, c)];
            if x.is_zero() {
                if !y.is_zero() {
                    return ConventionFactor::Inconsistent;
                }
                continue;
            }
            let ratio = y / x;
            match &factor {
                None => factor = Some(ratio),
                Some(f) if *f != ratio => return ConventionFactor::Inconsistent,
                _ => {}
            }
        }
    }
    match factor {
        None => ConventionFactor::BothZero,
        Some(f) if f.is_zero() => ConventionFactor::Inconsistent,
        Some(f) => ConventionFactor::Constant(f),
    }
}
