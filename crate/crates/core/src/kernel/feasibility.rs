//! Exact conic feasibility: is a target vector a nonnegative combination of
//! the given generators?
//!
//! Solved as a phase-one simplex over ℚ with Bland's lowest-index rule, so
//! every run terminates and produces either the combination coefficients or
//! a Farkas witness `φ` with `φ·g ≥ 0` for every generator `g` and
//! `φ·target < 0`.

use num_traits::{One, Signed, Zero};

use super::rational::{dot, primitive_integer, to_rationals, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConicCertificate {
    /// One nonnegative coefficient per generator; `Σ cᵢ gᵢ = target`.
    Combination(Vec<Rational>),
    /// Primitive integer functional separating the target from the cone.
    Separation(Vec<Rational>),
}

impl ConicCertificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Combination(_))
    }
}

pub fn nonneg_combination(
    target: &[Rational],
    generators: &[Vec<Rational>],
) -> Result<ConicCertificate> {
    let m = target.len();
    for g in generators {
        if g.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: g.len(),
            });
        }
    }
    let k = generators.len();
    let width = k + m;

    // Row i: sign_i * (Σ_j g_j[i] λ_j) + a_i = sign_i * target[i], rhs ≥ 0.
    let mut sign = vec![Rational::one(); m];
    let mut tab = vec![Rational::zero(); m * width];
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        if target[i].is_negative() {
            sign[i] = -Rational::one();
        }
        for (j, g) in generators.iter().enumerate() {
            tab[i * width + j] = &sign[i] * &g[i];
        }
        tab[i * width + k + i] = Rational::one();
        rhs.push(&sign[i] * &target[i]);
    }
    let mut basis: Vec<usize> = (k..width).collect();

    // Reduced costs of the phase-one objective Σ aᵢ.
    let mut cost = vec![Rational::zero(); width];
    for (j, c) in cost.iter_mut().enumerate().take(k) {
        *c = -(0..m).map(|i| tab[i * width + j].clone()).sum::<Rational>();
    }
    let mut objective: Rational = rhs.iter().sum();

    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            let a = &tab[i * width + enter];
            if !a.is_positive() {
                continue;
            }
            let ratio = &rhs[i] / a;
            let better = match &leave {
                None => true,
                Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((row, _)) = leave else {
            return Err(Error::Inconsistent(
                "phase-one objective unbounded".into(),
            ));
        };

        let inv = tab[row * width + enter].recip();
        for c in 0..width {
            tab[row * width + c] *= &inv;
        }
        rhs[row] *= &inv;
        for i in 0..m {
            if i == row {
                continue;
            }
            let f = tab[i * width + enter].clone();
            if f.is_zero() {
                continue;
            }
            for c in 0..width {
                let delta = &f * &tab[row * width + c];
                tab[i * width + c] -= delta;
            }
            let delta = &f * &rhs[row];
            rhs[i] -= delta;
        }
        let f = cost[enter].clone();
        for c in 0..width {
            let delta = &f * &tab[row * width + c];
            cost[c] -= delta;
        }
        objective += &f * &rhs[row];
        basis[row] = enter;
    }

    if objective.is_zero() {
        let mut coeffs = vec![Rational::zero(); k];
        for (i, &b) in basis.iter().enumerate() {
            if b < k {
                coeffs[b] = rhs[i].clone();
            }
        }
        let ok = (0..m).all(|i| {
            generators
                .iter()
                .zip(&coeffs)
                .map(|(g, c)| &g[i] * c)
                .sum::<Rational>()
                == target[i]
        });
        if !ok {
            return Err(Error::Inconsistent("combination fails re-substitution".into()));
        }
        return Ok(ConicCertificate::Combination(coeffs));
    }

    // Simplex multipliers y_i = 1 - (reduced cost of artificial i); the
    // functional -y separates in the sign-flipped system.
    let phi: Vec<Rational> = (0..m)
        .map(|i| -(Rational::one() - &cost[k + i]) * &sign[i])
        .collect();
    let phi = to_rationals(&primitive_integer(&phi));
    let separates = dot(&phi, target).is_negative()
        && generators.iter().all(|g| !dot(&phi, g).is_negative());
    if !separates {
        return Err(Error::Inconsistent("Farkas witness does not separate".into()));
    }
    Ok(ConicCertificate::Separation(phi))
}
