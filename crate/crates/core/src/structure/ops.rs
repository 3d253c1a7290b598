use num_traits::{One, Zero};

use super::AKManifold;
use crate::exact::{ExactMatrix, Gq, Rational};
use crate::exterior::{compound, FormValue};
use crate::operator::{binomial, DegreeMap, GradedOperator};

/// Every structure operator of an almost Kähler manifold, built once.
#[derive(Clone, Debug)]
pub struct StructureOps {
    pub d: GradedOperator,
    pub mu: GradedOperator,
    pub del: GradedOperator,
    pub delbar: GradedOperator,
    pub mubar: GradedOperator,
    pub d_star: GradedOperator,
    pub mu_star: GradedOperator,
    pub del_star: GradedOperator,
    pub delbar_star: GradedOperator,
    pub mubar_star: GradedOperator,
    /// Degree-0 derivation extending the dual action of J (eigenvalue
    /// `i(p - q)` on `Ω^{p,q}`).
    pub j_derivation: GradedOperator,
    /// `𝒥 = Σ i^{p-q} Π^{p,q}`.
    pub cal_j: GradedOperator,
    pub cal_j_inv: GradedOperator,
    pub star: GradedOperator,
    pub star_inv: GradedOperator,
    pub star_s: GradedOperator,
    pub l: GradedOperator,
    pub lambda: GradedOperator,
    pub h: GradedOperator,
    pub d_lambda: GradedOperator,
    pub d_lambda_star: GradedOperator,
    /// `proj[k][p]` projects `Λ^k` onto bidegree `(p, k - p)`.
    proj: Vec<Vec<Option<ExactMatrix>>>,
}

/// Lagrange projectors of a diagonalisable block with eigenvalues `i(2p - k)`.
fn bidegree_blocks(jd: &ExactMatrix, k: usize, range: std::ops::RangeInclusive<usize>, top: usize) -> Vec<Option<ExactMatrix>> {
    let eig = |p: usize| Gq::new(Rational::zero(), Rational::from_integer((2 * p as i64 - k as i64).into()));
    let size = jd.rows();
    (0..=top)
        .map(|p| {
            if !range.contains(&p) {
                return None;
            }
            let mut acc = ExactMatrix::identity(size);
            for p2 in range.clone().filter(|&p2| p2 != p) {
                let shifted = jd.sub(&ExactMatrix::identity(size).scale(&eig(p2)));
                acc = shifted.mul(&acc).scale(&(eig(p) - eig(p2)).inv());
            }
            Some(acc)
        })
        .collect()
}

impl StructureOps {
    pub(super) fn build(m: &AKManifold) -> StructureOps {
        let dim = m.dim();
        let n = m.complex_dim();
        let basis = m.basis();
        let d = m.d().clone();

        // dual action on 1-forms: coefficient vector a -> -Jᵀ a
        let jdual = m.j().transpose().neg();
        let images: Vec<FormValue> =
            (0..dim).map(|i| m.form(1, &jdual.column(i))).collect();
        let j_derivation = GradedOperator::derivation("J", basis, &images, 0);
        let proj: Vec<Vec<Option<ExactMatrix>>> = (0..=dim)
            .map(|k| bidegree_blocks(j_derivation.block(k).expect("degree-0 block"), k, m.bidegree_range(k), n))
            .collect();

        let split = |label: &str, a: i32, b: i32| {
            GradedOperator::from_fn(label, dim, DegreeMap::shift(1), |k, t| {
                let mut acc = ExactMatrix::zeros(binomial(dim, t), binomial(dim, k));
                for p in m.bidegree_range(k) {
                    let tp = p as i32 + a;
                    if tp < 0 || tp as usize > n || !m.bidegree_range(t).contains(&(tp as usize)) {
                        continue;
                    }
                    let (Some(pt), Some(ps)) = (&proj[t][tp as usize], &proj[k][p]) else { continue };
                    acc = acc.add(&pt.mul(d.block(k).expect("d block")).mul(ps));
                }
                acc
            })
            .with_bidegree((a, b))
        };
        let mu = split("μ", 2, -1);
        let del = split("∂", 1, 0);
        let delbar = split("∂̄", 0, 1);
        let mubar = split("μ̄", -1, 2);

        let cal_j = GradedOperator::from_fn("𝒥", dim, DegreeMap::shift(0), |k, _| compound(&jdual, basis, k));
        let cal_j_inv = GradedOperator::from_fn("𝒥⁻¹", dim, DegreeMap::shift(0), |k, _| {
            compound(&jdual, basis, k).inverse().expect("𝒥 is invertible")
        });

        // e_I ∧ e_K = W[I, K] vol
        let top = basis.top();
        let vol_coeff = m.volume().coeff(top);
        let wedge_pairing = |k: usize| {
            let rows = basis.monomials(k);
            let cols = basis.monomials(dim - k);
            ExactMatrix::from_fn(rows.len(), cols.len(), |r, c| {
                if rows[r].mask() & cols[c].mask() != 0 {
                    return Gq::zero();
                }
                &Gq::from_int(rows[r].wedge_sign(cols[c]) as i64) / &vol_coeff
            })
        };
        let w: Vec<ExactMatrix> = (0..=dim).map(wedge_pairing).collect();
        let w_inv: Vec<ExactMatrix> = w.iter().map(|x| x.inverse().expect("wedge pairing is perfect")).collect();
        let star = GradedOperator::from_fn("∗", dim, DegreeMap::reflect(dim), |k, _| w_inv[k].mul(m.gram(k)));
        let star_inv = GradedOperator::from_fn("∗⁻¹", dim, DegreeMap::reflect(dim), |_, t| {
            star.block(t).expect("star block").inverse().expect("∗ is invertible")
        });

        // Poisson pairing π(α^i, α^j) = (Ω⁻¹)[i][j]
        let poisson = m.omega_matrix().inverse().expect("ω is nondegenerate");
        let star_s = GradedOperator::from_fn("∗s", dim, DegreeMap::reflect(dim), |k, _| {
            w_inv[k].mul(&compound(&poisson, basis, k))
        });

        let l = GradedOperator::left_multiplication("L", basis, m.omega()).with_bidegree((1, 1));
        let lambda = m.adjoint(&l).with_label("Λ");
        let h = GradedOperator::degree_scalar("H", dim, |k| Gq::from_int(n as i64 - k as i64));

        let d_star = m.adjoint(&d).with_label("d*");
        let d_lambda = d.commutator(&lambda).with_label("dΛ");
        let d_lambda_star = m.adjoint(&d_lambda).with_label("dΛ*");

        StructureOps {
            mu_star: m.adjoint(&mu).with_label("μ*"),
            del_star: m.adjoint(&del).with_label("∂*"),
            delbar_star: m.adjoint(&delbar).with_label("∂̄*"),
            mubar_star: m.adjoint(&mubar).with_label("μ̄*"),
            d,
            mu,
            del,
            delbar,
            mubar,
            d_star,
            j_derivation,
            cal_j,
            cal_j_inv,
            star,
            star_inv,
            star_s,
            l,
            lambda,
            h,
            d_lambda,
            d_lambda_star,
            proj,
        }
    }

    /// `Π^{p,q}` as a degree-0 operator (zero outside degree `p + q`).
    pub fn projection(&self, p: usize, q: usize) -> Option<GradedOperator> {
        let k = p + q;
        let blk = self.proj.get(k)?.get(p)?.clone()?;
        let dim = self.d.n();
        Some(
            GradedOperator::from_fn(format!("Π{p}{q}"), dim, DegreeMap::shift(0), |deg, _| {
                if deg == k {
                    blk.clone()
                } else {
                    ExactMatrix::zeros(binomial(dim, deg), binomial(dim, deg))
                }
            })
            .with_bidegree((0, 0)),
        )
    }

    /// Projection block on `Λ^k` onto bidegree `(p, k - p)`.
    pub fn projection_block(&self, k: usize, p: usize) -> Option<&ExactMatrix> {
        self.proj.get(k)?.get(p)?.as_ref()
    }

    /// Degree-`k` coordinate vector of the `(p, k-p)` component.
    pub fn project_vec(&self, k: usize, p: usize, v: &[Gq]) -> Vec<Gq> {
        match self.projection_block(k, p) {
            Some(b) => b.mul_vec(v),
            None => vec![Gq::zero(); v.len()],
        }
    }

    /// Multiplies the degree-`k` block by `sign(k)`.
    pub fn degree_sign(dim: usize, sign: impl Fn(usize) -> bool) -> GradedOperator {
        GradedOperator::degree_scalar("ε", dim, |k| if sign(k) { Gq::one() } else { Gq::from_int(-1) })
    }
}
