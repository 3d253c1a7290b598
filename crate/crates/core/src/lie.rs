//! Lie algebra structure constants and the Chevalley–Eilenberg differential.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::LieError;
use crate::exact::{format_rational, Gq, Rational};
use crate::exterior::{ExteriorBasis, FormValue, MAX_DIM};
use crate::operator::GradedOperator;

/// `[ξ_i, ξ_j] = Σ_k c^k_ij ξ_k`, stored for `i < j` with 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraData {
    n: usize,
    brackets: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
}

/// Jacobi check over all triples `i < j < l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiReport {
    pub dimension: usize,
    pub triples_checked: usize,
    pub failures: Vec<JacobiFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiFailure {
    pub triple: (usize, usize, usize),
    /// Coefficients of `Σ_cyc [[ξ_i, ξ_j], ξ_l]` in the basis `ξ_1..ξ_n`.
    #[serde(serialize_with = "ser_rationals")]
    pub defect: Vec<Rational>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

impl JacobiReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

impl LieAlgebraData {
    pub fn abelian(n: usize) -> Self {
        LieAlgebraData { n, brackets: BTreeMap::new() }
    }

    /// Builds from `(i, j, [(k, c)])` entries. Repeated targets are summed and
    /// zero coefficients dropped.
    pub fn new(n: usize, entries: Vec<(usize, usize, Vec<(usize, Rational)>)>) -> Result<Self, LieError> {
        let mut brackets = BTreeMap::new();
        for (i, j, terms) in entries {
            if !(1 <= i && i < j && j <= n) || n > MAX_DIM {
                return Err(LieError::BadBracket { i, j, n });
            }
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (k, c) in terms {
                if !(1..=n).contains(&k) {
                    return Err(LieError::BadTarget { k, n });
                }
                *acc.entry(k).or_insert_with(Rational::zero) += c;
            }
            let terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if !terms.is_empty() {
                brackets.insert((i, j), terms);
            }
        }
        Ok(LieAlgebraData { n, brackets })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn brackets(&self) -> &BTreeMap<(usize, usize), Vec<(usize, Rational)>> {
        &self.brackets
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// Coefficients of `[ξ_i, ξ_j]` (1-based, any order).
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.n];
        if i == j {
            return out;
        }
        let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        if let Some(terms) = self.brackets.get(&(a, b)) {
            for (k, c) in terms {
                out[k - 1] = if sign > 0 { c.clone() } else { -c };
            }
        }
        out
    }

    /// Bracket of arbitrary coordinate vectors.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.n];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let f = xi * yj;
                for (o, c) in out.iter_mut().zip(self.bracket_basis(i + 1, j + 1)) {
                    *o += &f * c;
                }
            }
        }
        out
    }

    pub fn validate(&self) -> JacobiReport {
        let n = self.n;
        let e = |i: usize| {
            let mut v = vec![Rational::zero(); n];
            v[i - 1] = Rational::from_integer(1.into());
            v
        };
        let mut failures = Vec::new();
        let mut count = 0;
        for i in 1..=n {
            for j in i + 1..=n {
                for l in j + 1..=n {
                    count += 1;
                    let (xi, xj, xl) = (e(i), e(j), e(l));
                    let t1 = self.bracket(&self.bracket(&xi, &xj), &xl);
                    let t2 = self.bracket(&self.bracket(&xj, &xl), &xi);
                    let t3 = self.bracket(&self.bracket(&xl, &xi), &xj);
                    let defect: Vec<Rational> = (0..n).map(|k| &t1[k] + &t2[k] + &t3[k]).collect();
                    if defect.iter().any(|c| !c.is_zero()) {
                        failures.push(JacobiFailure { triple: (i, j, l), defect });
                    }
                }
            }
        }
        JacobiReport { dimension: n, triples_checked: count, failures }
    }

    /// `dα^k = -Σ_{i<j} c^k_ij α^i ∧ α^j` (so `dα(X,Y) = -α([X,Y])`).
    pub fn d_of_one_form(&self, k: usize) -> FormValue {
        let mut out = FormValue::zero(self.n);
        for ((i, j), terms) in &self.brackets {
            for (t, c) in terms {
                if *t == k {
                    out = out.add(&FormValue::alpha(self.n, &[*i, *j]).scale(&Gq::real(-c)));
                }
            }
        }
        out
    }

    /// Chevalley–Eilenberg differential on `Λ^• g*`. Rejects algebras that
    /// fail the Jacobi identity.
    pub fn ce_differential(&self, basis: &ExteriorBasis) -> Result<GradedOperator, LieError> {
        let report = self.validate();
        if !report.passes() {
            return Err(LieError::JacobiFails(report.failures.len()));
        }
        let images: Vec<FormValue> = (1..=self.n).map(|k| self.d_of_one_form(k)).collect();
        Ok(GradedOperator::derivation("d", basis, &images, 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn kt() -> LieAlgebraData {
        LieAlgebraData::new(4, vec![(1, 4, vec![(2, int(1))])]).unwrap()
    }

    #[test]
    fn jacobi_examples() {
        assert!(LieAlgebraData::abelian(4).validate().passes());
        let r = kt().validate();
        assert!(r.passes());
        assert_eq!(r.triples_checked, 4);
        let bad = LieAlgebraData::new(3, vec![(1, 2, vec![(3, int(1))]), (1, 3, vec![(1, int(1))])]).unwrap();
        let r = bad.validate();
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].triple, (1, 2, 3));
        // [[x1,x2],x3] + [[x2,x3],x1] + [[x3,x1],x2] = 0 + 0 + [-x1,x2] = -x3
        assert_eq!(r.failures[0].defect, vec![int(0), int(0), int(-1)]);
        assert!(bad.ce_differential(&ExteriorBasis::new(3)).is_err());
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(LieAlgebraData::new(4, vec![(1, 1, vec![])]).is_err());
        assert!(LieAlgebraData::new(4, vec![(2, 1, vec![])]).is_err());
        assert!(LieAlgebraData::new(4, vec![(1, 2, vec![(5, int(1))])]).is_err());
    }

    #[test]
    fn ce_differential_on_example() {
        let b = ExteriorBasis::new(4);
        let d = kt().ce_differential(&b).unwrap();
        for i in [1, 3, 4] {
            assert!(d.apply(&b, &FormValue::alpha(4, &[i])).is_zero());
        }
        assert_eq!(d.apply(&b, &FormValue::alpha(4, &[2])), FormValue::alpha(4, &[1, 4]).scale(&Gq::from_int(-1)));
        assert!(d.compose(&d).is_zero());
        assert!(LieAlgebraData::abelian(4).ce_differential(&b).unwrap().is_zero());
    }
}
