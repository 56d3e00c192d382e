use crate::scalar::{clamp_nonneg, Real};
use crate::Result;

use super::{Bits, FiniteDistribution, JointDistribution};

/// Shannon entropy `H(p) = -sum p log2 p`, with `0 log 0 = 0`.
pub fn entropy<R: Real>(p: &FiniteDistribution<R>) -> Bits<R> {
    let h = p
        .probs()
        .iter()
        .filter(|&&x| x > R::zero())
        .map(|&x| -x * x.log2())
        .sum();
    Bits::new(h)
}

/// KL divergence `sum mu log2(mu/nu)` in bits, with `0 log 0/0 = 0`.
///
/// Returns `+inf` when some atom has `mu > 0` and `nu = 0`; that is the
/// definitional convention, not an error.
pub fn kl<R: Real>(mu: &FiniteDistribution<R>, nu: &FiniteDistribution<R>) -> Result<Bits<R>> {
    mu.same_atoms(nu)?;
    let mut total = R::zero();
    for (&p, &q) in mu.probs().iter().zip(nu.probs()) {
        if p == R::zero() {
            continue;
        }
        if q == R::zero() {
            return Ok(Bits::infinity());
        }
        total = total + p * (p / q).log2();
    }
    Ok(Bits::new(total))
}

/// Mutual information of a joint, computed as `KL(j || product of marginals)`
/// term by term over the support.
pub fn mutual_information<R: Real>(j: &JointDistribution<R>) -> Bits<R> {
    let rm = j.row_marginal();
    let cm = j.col_marginal();
    let mut total = R::zero();
    for r in 0..j.rows() {
        let pr = rm.prob(r);
        for c in 0..j.cols() {
            let p = j.entry(r, c);
            if p > R::zero() {
                total = total + p * (p / (pr * cm.prob(c))).log2();
            }
        }
    }
    Bits::new(total)
}

/// Conditional entropy of the column variable given the row variable:
/// `H(Y | X) = H(X, Y) - H(X)`.
pub fn conditional_entropy<R: Real>(j: &JointDistribution<R>) -> Bits<R> {
    let joint_h = entropy(&j.flatten()).value();
    let row_h = entropy(&j.row_marginal()).value();
    Bits::new(clamp_nonneg(joint_h - row_h))
}

/// Total variation distance `(1/2) sum |p - q|`, in `[0, 1]`.
pub fn tv_distance<R: Real>(p: &FiniteDistribution<R>, q: &FiniteDistribution<R>) -> Result<R> {
    p.same_atoms(q)?;
    let two = R::one() + R::one();
    let sum: R = p
        .probs()
        .iter()
        .zip(q.probs())
        .map(|(&a, &b)| (a - b).abs())
        .sum();
    Ok(sum / two)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Dist, Joint};

    const TOL: f64 = 1e-12;

    #[test]
    fn entropy_known_values() {
        // point mass, uniform over 4 atoms, and a dyadic vector
        let point = Dist::point_mass(3, 1);
        assert!(entropy(&point).value().abs() < TOL);

        let uniform = Dist::uniform(4);
        assert!((entropy(&uniform).value() - 2.0).abs() < TOL);

        let dyadic = Dist::new(vec![0.5, 0.25, 0.25]).unwrap();
        assert!((entropy(&dyadic).value() - 1.5).abs() < TOL);
    }

    #[test]
    fn kl_identical_and_disjoint() {
        let p = Dist::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert!(kl(&p, &p).unwrap().value().abs() < TOL);

        let mu = Dist::new(vec![1.0, 0.0]).unwrap();
        let nu = Dist::new(vec![0.0, 1.0]).unwrap();
        assert!(!kl(&mu, &nu).unwrap().is_finite());
    }

    #[test]
    fn kl_tightness_pair() {
        // mu uniform on [16]; nu = 1/64 on the first half, 7/64 on the rest.
        // Expected value frozen from term-by-term summation: the first half
        // contributes (1/2) log2 4, the second (1/2) log2 (4/7).
        let mu = Dist::uniform(16);
        let mut w = vec![1.0 / 64.0; 8];
        w.extend(vec![7.0 / 64.0; 8]);
        let nu = Dist::new(w).unwrap();

        let mut oracle = 0.0;
        for x in 0..16 {
            oracle += mu.prob(x) * (mu.prob(x) / nu.prob(x)).log2();
        }
        let expected = 2.0 - 0.5 * 7.0_f64.log2();
        assert!((oracle - expected).abs() < TOL);
        assert!((kl(&mu, &nu).unwrap().value() - expected).abs() < TOL);
    }

    #[test]
    fn mi_product_and_diagonal() {
        let j = Joint::new(2, 2, vec![0.25; 4]).unwrap();
        assert!(mutual_information(&j).value().abs() < TOL);

        // X = Y uniform on [n] has I = log2 n.
        let n = 8;
        let mut mass = vec![0.0; n * n];
        for i in 0..n {
            mass[i * n + i] = 1.0 / n as f64;
        }
        let diag = Joint::new(n, n, mass).unwrap();
        assert!((mutual_information(&diag).value() - 3.0).abs() < TOL);
    }

    #[test]
    fn mi_matches_entropy_sum_oracle() {
        // Independent oracle: I = H(rows) + H(cols) - H(joint).
        let j = Joint::new(3, 4, {
            let w: Vec<f64> = (1..=12).map(|k| k as f64).collect();
            let s: f64 = w.iter().sum();
            w.into_iter().map(|x| x / s).collect()
        })
        .unwrap();
        let oracle = entropy(&j.row_marginal()).value() + entropy(&j.col_marginal()).value()
            - entropy(&j.flatten()).value();
        assert!((mutual_information(&j).value() - oracle).abs() < 1e-9);
    }

    #[test]
    fn conditional_entropy_cases() {
        // deterministic column per row -> 0
        let det = Joint::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(conditional_entropy(&det).value().abs() < TOL);

        // product joint -> H(cols)
        let rows = Dist::new(vec![0.3, 0.7]).unwrap();
        let cols = Dist::new(vec![0.25, 0.25, 0.5]).unwrap();
        let mut mass = Vec::new();
        for r in 0..2 {
            for c in 0..3 {
                mass.push(rows.prob(r) * cols.prob(c));
            }
        }
        let prod = Joint::new(2, 3, mass).unwrap();
        let expected = entropy(&cols).value();
        assert!((conditional_entropy(&prod).value() - expected).abs() < 1e-12);

        // random joint: oracle H(X,Y) - H(X)
        let j = Joint::new(2, 2, vec![0.1, 0.3, 0.4, 0.2]).unwrap();
        let oracle = entropy(&j.flatten()).value() - entropy(&j.row_marginal()).value();
        assert!((conditional_entropy(&j).value() - oracle).abs() < TOL);
    }

    #[test]
    fn tv_known_values() {
        let p = Dist::new(vec![0.7, 0.3]).unwrap();
        let q = Dist::new(vec![0.4, 0.6]).unwrap();
        assert!((tv_distance(&p, &q).unwrap() - 0.3).abs() < TOL);
        assert!(tv_distance(&p, &p).unwrap().abs() < TOL);

        let a = Dist::new(vec![1.0, 0.0]).unwrap();
        let b = Dist::new(vec![0.0, 1.0]).unwrap();
        assert!((tv_distance(&a, &b).unwrap() - 1.0).abs() < TOL);
    }
}
