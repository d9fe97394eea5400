//! Exact rational polyhedral cones.
//!
//! A cone is held by ray generators (V-representation), by inequality
//! normals `φ` meaning `φ·x ≥ 0` (H-representation), or both. Conversion uses
//! the incremental double description method over the integers: rays and
//! normals are kept primitive, and adjacency of two rays is decided by the
//! rank of the inequalities tight at both.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::rational::{dot_int, primitive, Rational};
use crate::kernel::{nonneg_combination, Matrix};

pub type IntVec = Vec<BigInt>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeDesc {
    dim: usize,
    rays: Option<Vec<IntVec>>,
    inequalities: Option<Vec<IntVec>>,
}

pub fn int_vec(xs: &[i64]) -> IntVec {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

/// Primitive, deduplicated, lexicographically sorted, zero vectors dropped.
pub fn canonicalize(vectors: &[IntVec]) -> Vec<IntVec> {
    let mut out: Vec<IntVec> = vectors
        .iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .map(|v| primitive(v))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn check_dims(dim: usize, vectors: &[IntVec]) -> Result<()> {
    if dim == 0 {
        return Err(Error::ZeroDimensional);
    }
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
    }
    Ok(())
}

fn dot(a: &IntVec, b: &IntVec) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rank_of(dim: usize, rows: &[&IntVec]) -> usize {
    let rows: Vec<IntVec> = rows.iter().map(|r| (*r).clone()).collect();
    Matrix::from_int_rows(dim, &rows).expect("uniform dims").rank()
}

impl ConeDesc {
    pub fn from_rays(dim: usize, rays: Vec<IntVec>) -> Result<Self> {
        check_dims(dim, &rays)?;
        Ok(Self {
            dim,
            rays: Some(canonicalize(&rays)),
            inequalities: None,
        })
    }

    pub fn from_inequalities(dim: usize, inequalities: Vec<IntVec>) -> Result<Self> {
        check_dims(dim, &inequalities)?;
        Ok(Self {
            dim,
            rays: None,
            inequalities: Some(canonicalize(&inequalities)),
        })
    }

    /// Both representations; every ray must satisfy every inequality.
    pub fn from_both(dim: usize, rays: Vec<IntVec>, inequalities: Vec<IntVec>) -> Result<Self> {
        check_dims(dim, &rays)?;
        check_dims(dim, &inequalities)?;
        for r in &rays {
            for a in &inequalities {
                if dot(a, r).is_negative() {
                    return Err(Error::InvalidInput(
                        "a stored ray violates a stored inequality".into(),
                    ));
                }
            }
        }
        Ok(Self {
            dim,
            rays: Some(canonicalize(&rays)),
            inequalities: Some(canonicalize(&inequalities)),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> Option<&[IntVec]> {
        self.rays.as_deref()
    }

    pub fn inequalities(&self) -> Option<&[IntVec]> {
        self.inequalities.as_deref()
    }

    /// Ray generators, computing them from the inequalities if needed.
    pub fn ray_generators(&self) -> Result<Vec<IntVec>> {
        match (&self.rays, &self.inequalities) {
            (Some(r), _) => Ok(r.clone()),
            (None, Some(h)) => extreme_rays(self.dim, h),
            (None, None) => Err(Error::ZeroDimensional),
        }
    }
}

/// Extreme rays of the pointed cone `{x : φ·x ≥ 0 for every φ}`.
///
/// Inequalities are inserted in input order after an initial simplicial cone
/// built from the first linearly independent normals.
pub fn extreme_rays(dim: usize, inequalities: &[IntVec]) -> Result<Vec<IntVec>> {
    check_dims(dim, inequalities)?;
    let rows: Vec<&IntVec> = inequalities
        .iter()
        .filter(|a| a.iter().any(|x| !x.is_zero()))
        .collect();

    let mut basis: Vec<usize> = Vec::with_capacity(dim);
    for (i, _) in rows.iter().enumerate() {
        let mut trial: Vec<&IntVec> = basis.iter().map(|&b| rows[b]).collect();
        trial.push(rows[i]);
        if rank_of(dim, &trial) == trial.len() {
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    if basis.len() < dim {
        return Err(Error::NotPointed {
            rank: basis.len(),
            dim,
        });
    }

    // Simplicial start: ray j is tight on every basis row except row j.
    let mut rays: Vec<IntVec> = Vec::with_capacity(dim);
    for j in 0..dim {
        let others: Vec<IntVec> = basis
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, &b)| rows[b].clone())
            .collect();
        let kernel = Matrix::from_int_rows(dim, &others)?.rank_nullspace();
        let v = crate::kernel::rational::primitive_integer(&kernel.nullspace[0]);
        let v = if dot(rows[basis[j]], &v).is_negative() {
            v.into_iter().map(|x| -x).collect()
        } else {
            v
        };
        rays.push(v);
    }

    let mut processed: Vec<usize> = basis.clone();
    for i in 0..rows.len() {
        if basis.contains(&i) {
            continue;
        }
        let a = rows[i];
        let values: Vec<BigInt> = rays.iter().map(|r| dot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_negative()).collect();
        if neg.is_empty() {
            processed.push(i);
            continue;
        }

        let zero_sets: Vec<Vec<usize>> = rays
            .iter()
            .map(|r| {
                processed
                    .iter()
                    .copied()
                    .filter(|&q| dot(rows[q], r).is_zero())
                    .collect()
            })
            .collect();

        let mut next: Vec<IntVec> = (0..rays.len())
            .filter(|&k| !values[k].is_negative())
            .map(|k| rays[k].clone())
            .collect();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<&IntVec> = zero_sets[p]
                    .iter()
                    .filter(|q| zero_sets[n].contains(q))
                    .map(|&q| rows[q])
                    .collect();
                if dim >= 2 && (common.len() < dim - 2 || rank_of(dim, &common) != dim - 2) {
                    continue;
                }
                let (vp, vn) = (&values[p], &values[n]);
                let combined: IntVec = rays[n]
                    .iter()
                    .zip(&rays[p])
                    .map(|(xn, xp)| vp * xn - vn * xp)
                    .collect();
                next.push(primitive(&combined));
            }
        }
        rays = next;
        processed.push(i);
    }
    Ok(canonicalize(&rays))
}

/// Facet normals of the full-dimensional cone generated by `rays`.
pub fn facets(dim: usize, rays: &[IntVec]) -> Result<Vec<IntVec>> {
    check_dims(dim, rays)?;
    let refs: Vec<&IntVec> = rays.iter().collect();
    let rank = rank_of(dim, &refs);
    if rank < dim {
        return Err(Error::NotFullDimensional { rank, dim });
    }
    // facets of a cone are the extreme rays of its dual
    extreme_rays(dim, rays)
}

/// Returns both representations, each irredundant and in canonical form.
pub fn dd_convert(c: &ConeDesc) -> Result<ConeDesc> {
    let dim = c.dim;
    if dim == 0 {
        return Err(Error::ZeroDimensional);
    }
    let rays = c.ray_generators()?;
    let inequalities = facets(dim, &rays).map_err(|e| match e {
        Error::NotFullDimensional { rank: 0, .. } => Error::ZeroDimensional,
        other => other,
    })?;
    let rays = extreme_rays(dim, &inequalities)?;
    Ok(ConeDesc {
        dim,
        rays: Some(rays),
        inequalities: Some(inequalities),
    })
}

pub fn member(c: &ConeDesc, x: &[Rational]) -> Result<bool> {
    if x.len() != c.dim {
        return Err(Error::DimensionMismatch {
            expected: c.dim,
            got: x.len(),
        });
    }
    let normals = match (&c.inequalities, &c.rays) {
        (Some(h), _) => h.clone(),
        (None, Some(r)) => match facets(c.dim, r) {
            Ok(f) => f,
            Err(Error::NotFullDimensional { .. }) => {
                let gens: Vec<Vec<Rational>> = r
                    .iter()
                    .map(|v| v.iter().cloned().map(Rational::from_integer).collect())
                    .collect();
                return Ok(nonneg_combination(x, &gens)?.is_feasible());
            }
            Err(e) => return Err(e),
        },
        (None, None) => return Err(Error::ZeroDimensional),
    };
    Ok(normals.iter().all(|a| !dot_int(a, x).is_negative()))
}

/// Checks that `ray` spans an extremal ray certified by `claimed` facets:
/// each claimed normal must be valid on the cone and tight at `ray`, and the
/// claimed hyperplanes together must cut out a line.
pub fn extremality_check(c: &ConeDesc, ray: &[Rational], claimed: &[IntVec]) -> Result<bool> {
    check_dims(c.dim, claimed)?;
    if !member(c, ray)? {
        return Err(Error::OutsideCone);
    }
    if ray.iter().all(Zero::is_zero) {
        return Ok(false);
    }
    let generators = c.ray_generators()?;
    for a in claimed {
        if !dot_int(a, ray).is_zero() {
            return Ok(false);
        }
        if generators.iter().any(|g| dot(a, g).is_negative()) {
            return Ok(false);
        }
    }
    let refs: Vec<&IntVec> = claimed.iter().collect();
    Ok(rank_of(c.dim, &refs) + 1 == c.dim)
}

#[derive(Debug, Serialize, Deserialize)]
struct ConeJson {
    dim: usize,
    #[serde(default)]
    rays: Vec<Vec<i64>>,
    #[serde(default)]
    inequalities: Vec<Vec<i64>>,
}

fn to_i64(vs: Option<&[IntVec]>) -> std::result::Result<Vec<Vec<i64>>, String> {
    vs.unwrap_or_default()
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| x.to_i64().ok_or_else(|| format!("entry {x} exceeds i64")))
                .collect()
        })
        .collect()
}

/// `serialize_with` helper writing integer vectors as JSON integer arrays.
pub fn serialize_int_vecs<S: serde::Serializer>(
    vs: &[IntVec],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    to_i64(Some(vs)).map_err(serde::ser::Error::custom)?.serialize(s)
}

impl Serialize for ConeDesc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConeJson {
            dim: self.dim,
            rays: to_i64(self.rays()).map_err(serde::ser::Error::custom)?,
            inequalities: to_i64(self.inequalities()).map_err(serde::ser::Error::custom)?,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConeDesc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ConeJson::deserialize(d)?;
        let conv = |vs: Vec<Vec<i64>>| -> Vec<IntVec> { vs.iter().map(|v| int_vec(v)).collect() };
        let (rays, ineqs) = (conv(raw.rays), conv(raw.inequalities));
        let built = match (rays.is_empty(), ineqs.is_empty()) {
            (false, false) => ConeDesc::from_both(raw.dim, rays, ineqs),
            (false, true) => ConeDesc::from_rays(raw.dim, rays),
            (true, false) => ConeDesc::from_inequalities(raw.dim, ineqs),
            (true, true) => Err(Error::InvalidInput("cone has neither rays nor inequalities".into())),
        };
        built.map_err(serde::de::Error::custom)
    }
}
