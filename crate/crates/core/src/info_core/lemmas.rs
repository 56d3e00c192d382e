//! Executable forms of the inequality lemmas used by the bounds and the
//! lower-bound machinery. Each check returns the two sides (or the raw
//! quantity) so callers and property suites can assert the inequality.

use crate::scalar::{real, Real};
use crate::{Error, Result};

use super::{kl, mutual_information, Bits, FiniteDistribution, JointDistribution};

/// Two sides of an inequality expected to satisfy `lhs <= rhs`.
#[derive(Clone, Copy, Debug)]
pub struct InequalityCheck<R> {
    pub lhs: R,
    pub rhs: R,
}

impl<R: Real> InequalityCheck<R> {
    pub fn holds(&self, tol: R) -> bool {
        self.lhs <= self.rhs + tol
    }
}

/// Divergence control: `mu(E) <= (KL(mu||nu) + 1) / log2(1 / nu(E))`.
///
/// Undefined when `nu(E)` is 0 or 1; that degenerate case is an error.
pub fn div_control_check<R: Real>(
    mu: &FiniteDistribution<R>,
    nu: &FiniteDistribution<R>,
    event: &[usize],
) -> Result<InequalityCheck<R>> {
    mu.same_atoms(nu)?;
    let nu_e = nu.mass_of(event);
    if nu_e <= R::zero() || nu_e >= R::one() {
        return Err(Error::DegenerateEvent {
            mass: nu_e.to_f64().unwrap_or(f64::NAN),
        });
    }
    let lhs = mu.mass_of(event);
    let divergence = kl(mu, nu)?.value();
    let rhs = (divergence + R::one()) / (R::one() / nu_e).log2();
    Ok(InequalityCheck { lhs, rhs })
}

/// Fiber control: if every fiber `E_y = {x : (x, y) in E}` has row-marginal
/// mass below `alpha`, then `mu(E) <= (I(X;Y) + 1) / log2(1/alpha)`.
///
/// Rows of the joint play the role of `X`, columns of `Y`. A fiber at or
/// above `alpha` violates the precondition and is reported as an error.
pub fn fiber_control_check<R: Real>(
    j: &JointDistribution<R>,
    event: &[(usize, usize)],
    alpha: R,
) -> Result<InequalityCheck<R>> {
    if alpha <= R::zero() || alpha >= R::one() {
        return Err(Error::InvalidAlpha {
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
        });
    }
    let row_marginal = j.row_marginal();
    let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); j.cols()];
    for &(x, y) in event {
        fibers[y].push(x);
    }
    for (col, fiber) in fibers.iter().enumerate() {
        let mass = row_marginal.mass_of(fiber);
        if mass >= alpha {
            return Err(Error::FiberTooHeavy {
                col,
                mass: mass.to_f64().unwrap_or(f64::NAN),
                alpha: alpha.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let mut seen: Vec<(usize, usize)> = event.to_vec();
    seen.sort_unstable();
    seen.dedup();
    let lhs = seen.into_iter().map(|(x, y)| j.entry(x, y)).sum();
    let mi = mutual_information(j).value();
    let rhs = (mi + R::one()) / (R::one() / alpha).log2();
    Ok(InequalityCheck { lhs, rhs })
}

/// The negative part of a divergence:
/// `sum over {x : p(x) < q(x)} of p log2(p/q)`, always greater than -1.
pub fn negative_part_check<R: Real>(
    p: &FiniteDistribution<R>,
    q: &FiniteDistribution<R>,
) -> Result<R> {
    p.same_atoms(q)?;
    let mut total = R::zero();
    for (&a, &b) in p.probs().iter().zip(q.probs()) {
        if a > R::zero() && a < b {
            total = total + a * (a / b).log2();
        }
    }
    Ok(total)
}

/// Channel lower bound. Given kernels `p_1..p_n` over a common finite set and
/// pairwise-disjoint target sets with `p_i(S_i) >= 1/2`, builds the joint of
/// `(U, W)` with `U` uniform on `[n]` and `W ~ p_U`, and returns
/// `(I(U;W), (1/2) log2(n/2) - 1)`. The mutual information always dominates
/// the bound.
pub fn channel_mi_lower_check<R: Real>(
    kernels: &[FiniteDistribution<R>],
    sets: &[Vec<usize>],
) -> Result<(Bits<R>, R)> {
    let n = kernels.len();
    if n == 0 || sets.len() != n {
        return Err(Error::AtomMismatch {
            left: n,
            right: sets.len(),
        });
    }
    let half = real::<R>(0.5);
    for (index, (kernel, set)) in kernels.iter().zip(sets).enumerate() {
        let mass = kernel.mass_of(set);
        if mass < half {
            return Err(Error::ChannelPrecondition {
                index,
                mass: mass.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for (i, set) in sets.iter().enumerate() {
        for &atom in set {
            seen.push((atom, i));
        }
    }
    seen.sort_unstable();
    for w in seen.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::OverlappingSets {
                first: w[0].1,
                second: w[1].1,
            });
        }
    }
    let uniform = FiniteDistribution::uniform(n);
    let joint = JointDistribution::from_kernel(&uniform, kernels)?;
    let mi = mutual_information(&joint);
    let bound = half * (real::<R>(n as f64) / (R::one() + R::one())).log2() - R::one();
    Ok((mi, bound))
}

/// Data processing: for a Markov chain `X - Y - Z` with `Z = f(Y)`
/// deterministic, returns `(I(X;Y), I(X;Z))`; the first dominates.
pub fn data_processing_check<R: Real>(
    j: &JointDistribution<R>,
    map: &[usize],
) -> Result<(Bits<R>, Bits<R>)> {
    let z_count = map.iter().copied().max().map_or(0, |z| z + 1);
    let mapped = j.map_cols(map, z_count)?;
    Ok((mutual_information(j), mutual_information(&mapped)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info_core::entropy;
    use crate::rng::{random_joint, random_simplex, rng_for};
    use crate::{Dist, Joint};
    use rand::Rng;

    const TOL: f64 = 1e-12;

    #[test]
    fn div_control_identity_case() {
        // mu = nu with nu(E) = 1/4: lhs 0.25 <= rhs 0.5.
        let p = Dist::uniform(4);
        let check = div_control_check(&p, &p, &[0]).unwrap();
        assert!((check.lhs - 0.25).abs() < TOL);
        assert!((check.rhs - 0.5).abs() < TOL);
        assert!(check.holds(0.0));
    }

    #[test]
    fn div_control_tightness_family() {
        // mu uniform on [2n], nu = 1/n^2 on E = [n], (n-1)/n^2 off E; n = 8.
        let n = 8;
        let mu = Dist::uniform(2 * n);
        let mut w = vec![1.0 / (n * n) as f64; n];
        w.extend(vec![(n - 1) as f64 / (n * n) as f64; n]);
        let nu = Dist::new(w).unwrap();
        let event: Vec<usize> = (0..n).collect();
        assert!((nu.mass_of(&event) - 1.0 / n as f64).abs() < TOL);

        let check = div_control_check(&mu, &nu, &event).unwrap();
        assert!((check.lhs - 0.5).abs() < TOL);
        let divergence = kl(&mu, &nu).unwrap().value();
        assert!((check.rhs - (divergence + 1.0) / 3.0).abs() < TOL);
        assert!(check.holds(0.0));
    }

    #[test]
    fn div_control_rejects_degenerate_event() {
        let p = Dist::uniform(3);
        let every = [0usize, 1, 2];
        assert!(matches!(
            div_control_check(&p, &p, &every),
            Err(Error::DegenerateEvent { .. })
        ));
        assert!(matches!(
            div_control_check(&p, &p, &[]),
            Err(Error::DegenerateEvent { .. })
        ));
    }

    #[test]
    fn fiber_control_diagonal_is_near_tight() {
        // X = Y uniform on [n], E the diagonal, alpha = 1/n is not allowed
        // (fibers have mass exactly 1/n), so use alpha slightly above.
        let n = 16;
        let mut mass = vec![0.0; n * n];
        for i in 0..n {
            mass[i * n + i] = 1.0 / n as f64;
        }
        let j = Joint::new(n, n, mass).unwrap();
        let event: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
        let alpha = 1.0 / n as f64 + 1e-9;
        let check = fiber_control_check(&j, &event, alpha).unwrap();
        assert!((check.lhs - 1.0).abs() < TOL);
        // rhs approx (log2 n + 1) / log2 n
        let expected = ((n as f64).log2() + 1.0) / (1.0 / alpha).log2();
        assert!((check.rhs - expected).abs() < 1e-6);
        assert!(check.holds(0.0));
    }

    #[test]
    fn fiber_control_rejects_heavy_fiber() {
        let j = Joint::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let err = fiber_control_check(&j, &[(0, 0)], 0.2);
        assert!(matches!(err, Err(Error::FiberTooHeavy { col: 0, .. })));
    }

    #[test]
    fn negative_part_trivial_cases() {
        let p = Dist::new(vec![0.5, 0.5]).unwrap();
        assert!(negative_part_check(&p, &p).unwrap().abs() < TOL);

        // p = (0, 1), q = (1/2, 1/2): the only atom with p < q has p = 0, so
        // the restricted sum vanishes.
        let zero_one = Dist::new(vec![0.0, 1.0]).unwrap();
        let half = Dist::new(vec![0.5, 0.5]).unwrap();
        assert!(negative_part_check(&zero_one, &half).unwrap().abs() < TOL);
    }

    #[test]
    fn channel_point_masses_hit_log_n() {
        let n = 8;
        let kernels: Vec<Dist> = (0..n).map(|i| Dist::point_mass(n, i)).collect();
        let sets: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        let (mi, bound) = channel_mi_lower_check(&kernels, &sets).unwrap();
        assert!((mi.value() - 3.0).abs() < TOL);
        assert!(mi.value() >= bound);
    }

    #[test]
    fn channel_half_mass_kernels() {
        // p_i puts exactly 1/2 on its own set and spreads the rest uniformly.
        let n = 4;
        let atoms = 8;
        let kernels: Vec<Dist> = (0..n)
            .map(|i| {
                let mut w = vec![0.5 / (atoms - 2) as f64; atoms];
                w[2 * i] = 0.25;
                w[2 * i + 1] = 0.25;
                // zero out own set contribution from the spread, renormalize
                let mut v = vec![0.5 / (atoms - 2) as f64; atoms];
                v[2 * i] = 0.0;
                v[2 * i + 1] = 0.0;
                let spread: f64 = v.iter().sum();
                for (slot, src) in w.iter_mut().zip(v) {
                    *slot = src * 0.5 / spread;
                }
                w[2 * i] = 0.25;
                w[2 * i + 1] = 0.25;
                Dist::new(w).unwrap()
            })
            .collect();
        let sets: Vec<Vec<usize>> = (0..n).map(|i| vec![2 * i, 2 * i + 1]).collect();
        let (mi, bound) = channel_mi_lower_check(&kernels, &sets).unwrap();

        // entropy-sum oracle on the same joint
        let joint = Joint::from_kernel(&Dist::uniform(n), &kernels).unwrap();
        let oracle = entropy(&joint.row_marginal()).value() + entropy(&joint.col_marginal()).value()
            - entropy(&joint.flatten()).value();
        assert!((mi.value() - oracle).abs() < 1e-9);
        assert!(mi.value() >= bound);
    }

    #[test]
    fn channel_n2_bound_is_minus_one() {
        let kernels = vec![Dist::point_mass(2, 0), Dist::point_mass(2, 1)];
        let sets = vec![vec![0], vec![1]];
        let (_, bound) = channel_mi_lower_check(&kernels, &sets).unwrap();
        assert!((bound + 1.0).abs() < TOL);
    }

    #[test]
    fn channel_reports_offending_kernel() {
        let kernels = vec![Dist::point_mass(2, 0), Dist::new(vec![0.8, 0.2]).unwrap()];
        let sets = vec![vec![0], vec![1]];
        assert!(matches!(
            channel_mi_lower_check(&kernels, &sets),
            Err(Error::ChannelPrecondition { index: 1, .. })
        ));
    }

    #[test]
    fn data_processing_identity_and_constant() {
        let j = Joint::new(2, 2, vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        let (full, same) = data_processing_check(&j, &[0, 1]).unwrap();
        assert!((full.value() - same.value()).abs() < TOL);
        let (_, constant) = data_processing_check(&j, &[0, 0]).unwrap();
        assert!(constant.value().abs() < TOL);
    }

    // Seeded randomized spot checks; the full 1e4-instance suites run in the
    // acceptance tests.
    #[test]
    fn randomized_lemma_spot_checks() {
        let mut rng = rng_for(42, 0);
        for _ in 0..200 {
            let n = rng.random_range(2..10);
            let mu = random_simplex(&mut rng, n, 0.0);
            let nu = random_simplex(&mut rng, n, 1e-6);
            let event_len = rng.random_range(1..n);
            let event: Vec<usize> = (0..event_len).collect();
            if let Ok(check) = div_control_check(&mu, &nu, &event) {
                assert!(check.holds(1e-9), "divergence control failed: {check:?}");
            }
            assert!(negative_part_check(&mu, &nu).unwrap() > -1.0);

            let rows = rng.random_range(2..6);
            let cols = rng.random_range(2..6);
            let j = random_joint(&mut rng, rows, cols);
            let map: Vec<usize> = (0..j.cols()).map(|_| rng.random_range(0..3)).collect();
            let (ixy, ixz) = data_processing_check(&j, &map).unwrap();
            assert!(ixy.value() >= ixz.value() - 1e-9);
        }
    }
}
