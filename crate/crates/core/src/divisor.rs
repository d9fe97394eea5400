//! Divisor classes `D = dH − Σ mᵢEᵢ` on the blow-up of ℙ³ along `s`
//! disjoint lines, their triple intersection numbers, and the weak-Fano
//! report for the anticanonical class.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::rational::{self, rat, Rational};

/// Largest line count for which the anticanonical class is nef.
pub const MAX_NEF_LINES: usize = 6;

/// A class `d·H − Σ mᵢ·Eᵢ`; the line count `s` is `mults.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    d: Rational,
    mults: Vec<Rational>,
}

impl DivisorClass {
    pub fn new(d: Rational, mults: Vec<Rational>) -> Self {
        Self { d, mults }
    }

    pub fn from_ints(d: i64, mults: &[i64]) -> Self {
        Self::new(rat(d), mults.iter().map(|&m| rat(m)).collect())
    }

    pub fn zero(s: usize) -> Self {
        Self::new(Rational::zero(), vec![Rational::zero(); s])
    }

    pub fn hyperplane(s: usize) -> Self {
        Self::new(rat(1), vec![Rational::zero(); s])
    }

    /// The exceptional divisor `Eᵢ` (1-based index), i.e. `mᵢ = −1`.
    pub fn exceptional(s: usize, i: usize) -> Result<Self> {
        check_index(s, i)?;
        let mut c = Self::zero(s);
        c.mults[i - 1] = rat(-1);
        Ok(c)
    }

    /// Parses `(d; m₁, …, m_s)` from a coordinate vector `[d, m₁, …, m_s]`.
    pub fn from_coords(coords: &[Rational]) -> Result<Self> {
        let (d, mults) = coords
            .split_first()
            .ok_or_else(|| Error::InvalidInput("empty coordinate vector".into()))?;
        Ok(Self::new(d.clone(), mults.to_vec()))
    }

    pub fn s(&self) -> usize {
        self.mults.len()
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn mults(&self) -> &[Rational] {
        &self.mults
    }

    pub fn mult(&self, i: usize) -> &Rational {
        &self.mults[i - 1]
    }

    /// Coordinates `(d, m₁, …, m_s)` in the Néron–Severi space.
    pub fn coords(&self) -> Vec<Rational> {
        std::iter::once(self.d.clone())
            .chain(self.mults.iter().cloned())
            .collect()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        same_s(self, other)?;
        Ok(Self::new(
            &self.d + &other.d,
            self.mults.iter().zip(&other.mults).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.negate())
    }

    pub fn negate(&self) -> Self {
        self.scale(&rat(-1))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(
            &self.d * factor,
            self.mults.iter().map(|m| m * factor).collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.d.is_zero() && self.mults.iter().all(Zero::is_zero)
    }

    /// Sum of a nonempty list of classes sharing one `s`.
    pub fn sum<'a>(s: usize, classes: impl IntoIterator<Item = &'a DivisorClass>) -> Result<Self> {
        classes
            .into_iter()
            .try_fold(Self::zero(s), |acc, c| acc.checked_add(c))
    }
}

fn check_index(s: usize, i: usize) -> Result<()> {
    if i == 0 || i > s {
        return Err(Error::InvalidInput(format!(
            "line index {i} out of range 1..={s}"
        )));
    }
    Ok(())
}

fn same_s(a: &DivisorClass, b: &DivisorClass) -> Result<()> {
    if a.s() != b.s() {
        return Err(Error::LineCountMismatch {
            left: a.s(),
            right: b.s(),
        });
    }
    Ok(())
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.d)?;
        for (i, m) in self.mults.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{m}")?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct DivisorJson {
    s: usize,
    #[serde(with = "rational::as_string")]
    d: Rational,
    #[serde(with = "rational::vec_as_string")]
    mults: Vec<Rational>,
}

impl Serialize for DivisorClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DivisorJson {
            s: self.s(),
            d: self.d.clone(),
            mults: self.mults.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = DivisorJson::deserialize(d)?;
        if raw.mults.len() != raw.s {
            return Err(serde::de::Error::custom(format!(
                "s = {} but {} multiplicities given",
                raw.s,
                raw.mults.len()
            )));
        }
        Ok(Self::new(raw.d, raw.mults))
    }
}

/// `K = −4H + Σ Eᵢ`, i.e. `d = −4` and every `mᵢ = −1`.
pub fn canonical_class(s: usize) -> DivisorClass {
    DivisorClass::new(rat(-4), vec![rat(-1); s])
}

/// Triple intersection number `A·B·C`.
///
/// Writing each class as `a₀H + Σ aᵢEᵢ`, the only nonzero monomials are
/// `H³ = 1`, `H·Eᵢ² = −1` and `Eᵢ³ = −2`; every monomial mixing two
/// distinct exceptional divisors vanishes since the lines are disjoint, and
/// `H²·Eᵢ = 0`.
pub fn triple_product(a: &DivisorClass, b: &DivisorClass, c: &DivisorClass) -> Result<Rational> {
    same_s(a, b)?;
    same_s(a, c)?;
    let (a0, b0, c0) = (&a.d, &b.d, &c.d);
    let mut total = a0 * b0 * c0;
    for i in 0..a.s() {
        // E-coefficients are the negated multiplicities
        let (ai, bi, ci) = (-&a.mults[i], -&b.mults[i], -&c.mults[i]);
        let h_e_e = a0 * &bi * &ci + &ai * b0 * &ci + &ai * &bi * c0;
        total -= h_e_e;
        total -= rat(2) * &ai * &bi * &ci;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanoReport {
    pub s: usize,
    #[serde(with = "rational::as_string")]
    pub anticanonical_cube: Rational,
    pub is_nef: bool,
    pub is_big: bool,
    pub is_weak_fano: bool,
}

/// Weak-Fano status of the blow-up along `s` general lines.
///
/// Nefness of `−K` for `s ≤ 6` is a known result recorded here as a fact;
/// it is not recomputed. Bigness of a nef class is positivity of its cube.
pub fn weak_fano_report(s: usize) -> FanoReport {
    let minus_k = canonical_class(s).negate();
    let cube = triple_product(&minus_k, &minus_k, &minus_k).expect("same s");
    debug_assert_eq!(cube, rat(64 - 10 * s as i64));
    let is_nef = s <= MAX_NEF_LINES;
    let is_big = is_nef && cube.is_positive();
    FanoReport {
        s,
        anticanonical_cube: cube,
        is_nef,
        is_big,
        is_weak_fano: is_nef && is_big,
    }
}

/// `2H − E_a − E_b − E_c` for 1-based indices.
pub fn quadric_class(s: usize, triple: [usize; 3]) -> Result<DivisorClass> {
    let mut c = DivisorClass::new(rat(2), vec![Rational::zero(); s]);
    for i in triple {
        check_index(s, i)?;
        c.mults[i - 1] = rat(1);
    }
    Ok(c)
}

/// `H − Eᵢ` for a 1-based index.
pub fn pencil_class(s: usize, i: usize) -> Result<DivisorClass> {
    check_index(s, i)?;
    let mut c = DivisorClass::hyperplane(s);
    c.mults[i - 1] = rat(1);
    Ok(c)
}

pub(crate) fn triples(s: usize) -> impl Iterator<Item = [usize; 3]> {
    (1..=s).flat_map(move |i| {
        (i + 1..=s).flat_map(move |j| (j + 1..=s).map(move |k| [i, j, k]))
    })
}

/// Effective decompositions of `−K` into surfaces for `s ∈ {5, 6}`.
///
/// For `s = 5` each split is a quadric through three lines plus the two
/// pencils of planes through the remaining lines; for `s = 6` it is a pair
/// of quadrics through complementary triples. Each unordered split appears
/// once.
pub fn anticanonical_splittings(s: usize) -> Result<Vec<Vec<DivisorClass>>> {
    let mut out = Vec::new();
    match s {
        5 => {
            for t in triples(5) {
                let rest: Vec<usize> = (1..=5).filter(|i| !t.contains(i)).collect();
                out.push(vec![
                    quadric_class(5, t)?,
                    pencil_class(5, rest[0])?,
                    pencil_class(5, rest[1])?,
                ]);
            }
        }
        6 => {
            // fixing index 1 in the first triple lists each partition once
            for t in triples(6).filter(|t| t[0] == 1) {
                let rest: Vec<usize> = (1..=6).filter(|i| !t.contains(i)).collect();
                out.push(vec![
                    quadric_class(6, t)?,
                    quadric_class(6, [rest[0], rest[1], rest[2]])?,
                ]);
            }
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "anticanonical splittings are listed only for s = 5, 6 (got s = {s})"
            )))
        }
    }
    Ok(out)
}
