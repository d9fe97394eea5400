//! The effective cones of the blow-up along `s ≤ 5` general lines: their
//! inequality and ray descriptions, effectivity decisions with constructive
//! certificates, and the facet/ray incidence data.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cone::{self, ConeDesc, IntVec};
use crate::divisor::{pencil_class, quadric_class, triples, DivisorClass};
use crate::error::{Error, Result};
use crate::kernel::rational::{self, primitive, rat, Rational};
use crate::kernel::{nonneg_combination, ConicCertificate};

/// Largest line count with a known effective cone.
pub const MAX_LINES: usize = 5;

fn check_supported(s: usize) -> Result<()> {
    if s > MAX_LINES {
        return Err(Error::Unsupported(format!(
            "effective cone known only for s <= {MAX_LINES}"
        )));
    }
    Ok(())
}

/// Named effective generators. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// The hyperplane class.
    H,
    /// An exceptional divisor `Eᵢ`.
    E(usize),
    /// The pencil of planes through a line, `H − Eᵢ`.
    Pencil(usize),
    /// The quadric through three lines, `2H − Eᵢ − Eⱼ − E_k`.
    Quadric([usize; 3]),
}

impl Generator {
    pub fn class(&self, s: usize) -> Result<DivisorClass> {
        match *self {
            Self::H => Ok(DivisorClass::hyperplane(s)),
            Self::E(i) => DivisorClass::exceptional(s, i),
            Self::Pencil(i) => pencil_class(s, i),
            Self::Quadric(t) => {
                if !(t[0] < t[1] && t[1] < t[2]) {
                    return Err(Error::InvalidInput(format!(
                        "quadric indices {t:?} must be strictly increasing"
                    )));
                }
                quadric_class(s, t)
            }
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::H => write!(f, "H"),
            Self::E(i) => write!(f, "E_{i}"),
            Self::Pencil(i) => write!(f, "H-E_{i}"),
            Self::Quadric([i, j, k]) => write!(f, "Q_{i}{j}{k}"),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown generator {text:?}"));
        let index = |digits: &str| -> Result<usize> {
            match digits.parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i),
                _ => Err(bad()),
            }
        };
        if text == "H" {
            Ok(Self::H)
        } else if let Some(rest) = text.strip_prefix("H-E_") {
            Ok(Self::Pencil(index(rest)?))
        } else if let Some(rest) = text.strip_prefix("E_") {
            Ok(Self::E(index(rest)?))
        } else if let Some(rest) = text.strip_prefix("Q_") {
            let digits: Vec<usize> = rest
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).filter(|&d| d >= 1))
                .collect::<Option<_>>()
                .ok_or_else(bad)?;
            match digits.as_slice() {
                &[i, j, k] => Ok(Self::Quadric([i, j, k])),
                _ => Err(bad()),
            }
        } else {
            Err(bad())
        }
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `0 ≤ d`
    Degree,
    /// `mᵢ ≤ d`
    Single(usize),
    /// `mᵢ + mⱼ ≤ d`
    Pair(usize, usize),
    /// `Σm + mᵢ − mⱼ ≤ 2d`
    SumPlusMinus(usize, usize),
    /// `Σm + mᵢ ≤ 2d`
    SumPlus(usize),
    /// `2Σm ≤ 3d`
    TwiceSum,
}

/// One inequality `Σ cᵢ mᵢ ≤ a·d` of an effective-cone description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedInequality {
    s: usize,
    family: Family,
    degree_coeff: i64,
    mult_coeffs: Vec<i64>,
    label: String,
}

impl NamedInequality {
    fn new(s: usize, family: Family) -> Self {
        let mut c = vec![0i64; s];
        let sum_label = format!("(m1+..+m{s})");
        let (a, label) = match family {
            Family::Degree => (1, "0 <= d".to_string()),
            Family::Single(i) => {
                c[i - 1] = 1;
                (1, format!("m{i} <= d"))
            }
            Family::Pair(i, j) => {
                c[i - 1] = 1;
                c[j - 1] = 1;
                (1, format!("m{i}+m{j} <= d"))
            }
            Family::SumPlusMinus(i, j) => {
                c.iter_mut().for_each(|x| *x = 1);
                c[i - 1] += 1;
                c[j - 1] -= 1;
                (2, format!("{sum_label}+m{i}-m{j} <= 2d"))
            }
            Family::SumPlus(i) => {
                c.iter_mut().for_each(|x| *x = 1);
                c[i - 1] += 1;
                (2, format!("{sum_label}+m{i} <= 2d"))
            }
            Family::TwiceSum => {
                c.iter_mut().for_each(|x| *x = 2);
                (3, format!("2{sum_label} <= 3d"))
            }
        };
        Self {
            s,
            family,
            degree_coeff: a,
            mult_coeffs: c,
            label,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Normal `φ` in coordinates `(d, m₁, …, m_s)` with `φ·x ≥ 0`.
    pub fn normal(&self) -> IntVec {
        std::iter::once(self.degree_coeff)
            .chain(self.mult_coeffs.iter().map(|c| -c))
            .map(Into::into)
            .collect()
    }

    /// `(Σ cᵢ mᵢ, a·d)`, the two sides of `lhs ≤ rhs`.
    pub fn sides(&self, class: &DivisorClass) -> (Rational, Rational) {
        let lhs = self
            .mult_coeffs
            .iter()
            .zip(class.mults())
            .map(|(&c, m)| rat(c) * m)
            .sum();
        (lhs, rat(self.degree_coeff) * class.d())
    }

    pub fn holds(&self, class: &DivisorClass) -> bool {
        let (lhs, rhs) = self.sides(class);
        lhs <= rhs
    }

    pub fn is_tight(&self, class: &DivisorClass) -> bool {
        let (lhs, rhs) = self.sides(class);
        lhs == rhs
    }
}

/// The inequalities cutting out the effective cone, listed family by family
/// exactly as classically stated, redundant members included.
pub fn inequality_list(s: usize) -> Result<Vec<NamedInequality>> {
    check_supported(s)?;
    let mut out = vec![NamedInequality::new(s, Family::Degree)];
    out.extend((1..=s).map(|i| NamedInequality::new(s, Family::Single(i))));
    for i in 1..=s {
        for j in i + 1..=s {
            out.push(NamedInequality::new(s, Family::Pair(i, j)));
        }
    }
    if s == 5 {
        for i in 1..=s {
            for j in (1..=s).filter(|&j| j != i) {
                out.push(NamedInequality::new(s, Family::SumPlusMinus(i, j)));
            }
        }
    }
    if s >= 4 {
        out.extend((1..=s).map(|i| NamedInequality::new(s, Family::SumPlus(i))));
        out.push(NamedInequality::new(s, Family::TwiceSum));
    }
    Ok(out)
}

/// Extremal ray generators: `H` alone when `s = 0`; otherwise every `Eᵢ`,
/// every `H − Eᵢ`, and for `s ≥ 3` every quadric through three lines.
pub fn ray_list(s: usize) -> Result<Vec<(Generator, DivisorClass)>> {
    check_supported(s)?;
    let mut gens = Vec::new();
    if s == 0 {
        gens.push(Generator::H);
    }
    gens.extend((1..=s).map(Generator::E));
    gens.extend((1..=s).map(Generator::Pencil));
    gens.extend(triples(s).map(Generator::Quadric));
    gens.into_iter()
        .map(|g| Ok((g, g.class(s)?)))
        .collect()
}

fn class_to_int(class: &DivisorClass) -> IntVec {
    crate::kernel::rational::primitive_integer(&class.coords())
}

pub fn cone_from_inequalities(s: usize) -> Result<ConeDesc> {
    let normals = inequality_list(s)?.iter().map(NamedInequality::normal).collect();
    ConeDesc::from_inequalities(s + 1, normals)
}

/// The class with every negative multiplicity raised to zero. `D` is effective
/// exactly when this class is, since `Eᵢ` is a fixed component whenever
/// `mᵢ < 0`; the listed inequalities are meant to be read on it.
pub fn sign_reduced(class: &DivisorClass) -> DivisorClass {
    let mults = class
        .mults()
        .iter()
        .map(|m| if m.is_negative() { Rational::zero() } else { m.clone() })
        .collect();
    DivisorClass::new(class.d().clone(), mults)
}

/// Linear form of "the listed inequalities hold on the sign-reduced class".
/// Every listed inequality has nonnegative multiplicity coefficients, so
/// `a·d − Σ cᵢ·max(mᵢ, 0) ≥ 0` is equivalent to `a·d − Σ_{i∉S} cᵢmᵢ ≥ 0`
/// for every subset `S` of its support.
pub fn sign_closed_inequalities(s: usize) -> Result<Vec<IntVec>> {
    let mut out = Vec::new();
    for q in inequality_list(s)? {
        let support: Vec<usize> = (0..s).filter(|&i| q.mult_coeffs[i] != 0).collect();
        for mask in 0u32..(1 << support.len()) {
            let mut normal = q.normal();
            for (bit, &i) in support.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    normal[i + 1] = Zero::zero();
                }
            }
            out.push(normal);
        }
    }
    Ok(cone::canonicalize(&out))
}

pub fn cone_from_sign_closed(s: usize) -> Result<ConeDesc> {
    ConeDesc::from_inequalities(s + 1, sign_closed_inequalities(s)?)
}

pub fn cone_from_rays(s: usize) -> Result<ConeDesc> {
    let rays = ray_list(s)?.iter().map(|(_, c)| class_to_int(c)).collect();
    ConeDesc::from_rays(s + 1, rays)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub generator: Generator,
    #[serde(with = "rational::as_string")]
    pub coeff: Rational,
}

/// Either a nonnegative combination of named generators equal to the target,
/// or the label of an inequality the target violates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub target: DivisorClass,
    pub terms: Vec<Term>,
    pub violated: Option<String>,
}

impl Certificate {
    pub fn is_positive(&self) -> bool {
        self.violated.is_none()
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = &self.violated {
            return write!(f, "violates {label}");
        }
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*({})", t.coeff, t.generator)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub effective: bool,
    pub certificate: Certificate,
    /// The violated inequality, when not effective.
    pub violation: Option<NamedInequality>,
}

/// Decides effectivity by evaluating the inequality list on the sign-reduced
/// class, and independently solves conic feasibility over the ray list for
/// the certificate. The two verdicts must agree.
pub fn is_effective(class: &DivisorClass) -> Result<Membership> {
    let s = class.s();
    let violation = deepest_violation(inequality_list(s)?, &sign_reduced(class));

    let rays = ray_list(s)?;
    let generators: Vec<Vec<Rational>> = rays.iter().map(|(_, c)| c.coords()).collect();
    let feasible = nonneg_combination(&class.coords(), &generators)?;

    match (violation, feasible) {
        (None, ConicCertificate::Combination(coeffs)) => {
            let terms = rays
                .iter()
                .zip(coeffs)
                .filter(|(_, c)| !c.is_zero())
                .map(|((g, _), coeff)| Term {
                    generator: *g,
                    coeff,
                })
                .collect();
            Ok(Membership {
                effective: true,
                certificate: Certificate {
                    target: class.clone(),
                    terms,
                    violated: None,
                },
                violation: None,
            })
        }
        (Some(v), ConicCertificate::Separation(_)) => Ok(Membership {
            effective: false,
            certificate: Certificate {
                target: class.clone(),
                terms: Vec::new(),
                violated: Some(v.label().to_string()),
            },
            violation: Some(v),
        }),
        (v, _) => Err(Error::Inconsistent(format!(
            "inequality verdict ({}) disagrees with conic feasibility for {class}",
            if v.is_none() { "effective" } else { "not effective" }
        ))),
    }
}

/// The violated inequality with the most negative slack `rhs − lhs`,
/// earliest in list order on ties.
fn deepest_violation(list: Vec<NamedInequality>, class: &DivisorClass) -> Option<NamedInequality> {
    let mut best: Option<(Rational, NamedInequality)> = None;
    for q in list {
        let (lhs, rhs) = q.sides(class);
        let slack = rhs - lhs;
        if slack.is_negative() && best.as_ref().is_none_or(|(b, _)| slack < *b) {
            best = Some((slack, q));
        }
    }
    best.map(|(_, q)| q)
}

/// Conic-feasibility verdict alone, over the ray list.
pub fn is_ray_combination(class: &DivisorClass) -> Result<bool> {
    let generators: Vec<Vec<Rational>> = ray_list(class.s())?
        .iter()
        .map(|(_, c)| c.coords())
        .collect();
    Ok(nonneg_combination(&class.coords(), &generators)?.is_feasible())
}

pub fn verify_certificate(cert: &Certificate) -> bool {
    let s = cert.target.s();
    if let Some(label) = &cert.violated {
        if !cert.terms.is_empty() {
            return false;
        }
        let Ok(list) = inequality_list(s) else {
            return false;
        };
        return list
            .iter()
            .find(|q| q.label() == label)
            .is_some_and(|q| !q.holds(&sign_reduced(&cert.target)));
    }
    let mut total = DivisorClass::zero(s);
    for t in &cert.terms {
        if t.coeff.is_negative() {
            return false;
        }
        let Ok(class) = t.generator.class(s) else {
            return false;
        };
        total = total.checked_add(&class.scale(&t.coeff)).expect("same s");
    }
    total == cert.target
}

/// Builds a decomposition by following the classical case analysis for
/// `s ≤ 4`: negative multiplicities are split off as exceptional divisors;
/// for four lines every quadric through a triple with positive excess
/// `mᵢ + mⱼ + m_k − d` is subtracted at full excess, then the pencil through
/// line 4 is peeled off to reach three lines.
pub fn decompose_by_cases(class: &DivisorClass) -> Result<Certificate> {
    let s = class.s();
    if s >= 5 {
        return Err(Error::Unsupported(
            "the case-analysis recipe covers s <= 4; use membership for s = 5".into(),
        ));
    }
    if let Some(v) = deepest_violation(inequality_list(s)?, &sign_reduced(class)) {
        return Err(Error::NotEffective(v.label().to_string()));
    }

    let mut terms = Terms::default();
    let mut d = class.d().clone();
    let mut m: Vec<Rational> = class.mults().to_vec();
    for (i, mi) in m.iter_mut().enumerate() {
        if mi.is_negative() {
            terms.add(Generator::E(i + 1), -mi.clone());
            *mi = Rational::zero();
        }
    }

    match s {
        0 => terms.add(Generator::H, d),
        1 => {
            terms.add(Generator::H, &d - &m[0]);
            terms.add(Generator::Pencil(1), m[0].clone());
        }
        2 => {
            terms.add(Generator::H, &d - &m[0] - &m[1]);
            terms.add(Generator::Pencil(1), m[0].clone());
            terms.add(Generator::Pencil(2), m[1].clone());
        }
        3 => three_line_recipe(&mut terms, &d, [(1, &m[0]), (2, &m[1]), (3, &m[2])]),
        4 => {
            for t in triples(4) {
                let excess = t.iter().map(|&i| &m[i - 1]).sum::<Rational>() - &d;
                if excess.is_positive() {
                    // other triples' excesses are unchanged by this step
                    d -= rat(2) * &excess;
                    for &i in &t {
                        m[i - 1] -= &excess;
                    }
                    terms.add(Generator::Quadric(t), excess);
                }
            }
            terms.add(Generator::Pencil(4), m[3].clone());
            let rest = &d - &m[3];
            three_line_recipe(&mut terms, &rest, [(1, &m[0]), (2, &m[1]), (3, &m[2])]);
        }
        _ => unreachable!(),
    }

    let cert = Certificate {
        target: class.clone(),
        terms: terms.into_vec(),
        violated: None,
    };
    if !verify_certificate(&cert) {
        return Err(Error::Inconsistent(format!(
            "case-analysis recipe produced an invalid certificate for {class}"
        )));
    }
    Ok(cert)
}

/// Three lines with nonnegative multiplicities `a, b, c` and degree `d`.
fn three_line_recipe(terms: &mut Terms, d: &Rational, lines: [(usize, &Rational); 3]) {
    let [(i, a), (j, b), (k, c)] = lines;
    let excess = a + b + c - d;
    if excess.is_positive() {
        terms.add(Generator::Quadric([i, j, k]), excess);
        terms.add(Generator::Pencil(i), d - b - c);
        terms.add(Generator::Pencil(j), d - a - c);
        terms.add(Generator::Pencil(k), d - a - b);
    } else {
        terms.add(Generator::E(i), -excess);
        terms.add(Generator::Pencil(i), d - b - c);
        terms.add(Generator::Pencil(j), b.clone());
        terms.add(Generator::Pencil(k), c.clone());
    }
}

#[derive(Default)]
struct Terms(BTreeMap<Generator, Rational>);

impl Terms {
    fn add(&mut self, g: Generator, coeff: Rational) {
        *self.0.entry(g).or_insert_with(Rational::zero) += coeff;
    }

    fn into_vec(self) -> Vec<Term> {
        self.0
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(generator, coeff)| Term { generator, coeff })
            .collect()
    }
}

/// Outcome of comparing the cone cut out by the inequality list with the cone
/// generated by the ray list.
#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    pub s: usize,
    pub inequality_count: usize,
    pub ray_count: usize,
    /// `dd_convert` of the inequality list taken literally, over all signs.
    pub from_inequalities: ConeDesc,
    /// `dd_convert` of the ray description.
    pub from_rays: ConeDesc,
    /// The rays computed from the literal inequality list are exactly the
    /// listed rays.
    pub rays_match: bool,
    /// Both conversions give the same cone.
    pub cones_equal: bool,
    /// Rays of the literal inequality cone missing from the ray list.
    #[serde(serialize_with = "cone::serialize_int_vecs")]
    pub extra_rays: Vec<IntVec>,
    /// Facets of the ray cone missing from the inequality list.
    #[serde(serialize_with = "cone::serialize_int_vecs")]
    pub missing_facets: Vec<IntVec>,
    /// `dd_convert` of the sign-closed inequality system.
    pub sign_closed: ConeDesc,
    /// The sign-closed system yields exactly the listed rays.
    pub sign_closed_rays_match: bool,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.rays_match && self.cones_equal
    }
}

pub fn verify_duality(s: usize) -> Result<DualityReport> {
    let inequalities = inequality_list(s)?;
    let rays = ray_list(s)?;
    let from_inequalities = cone::dd_convert(&cone_from_inequalities(s)?)?;
    let from_rays = cone::dd_convert(&cone_from_rays(s)?)?;
    let sign_closed = cone::dd_convert(&cone_from_sign_closed(s)?)?;
    let listed = cone::canonicalize(&rays.iter().map(|(_, c)| class_to_int(c)).collect::<Vec<_>>());
    let normals =
        cone::canonicalize(&inequalities.iter().map(NamedInequality::normal).collect::<Vec<_>>());
    let not_in = |xs: Option<&[IntVec]>, ys: &[IntVec]| -> Vec<IntVec> {
        xs.unwrap_or_default()
            .iter()
            .filter(|x| !ys.contains(x))
            .cloned()
            .collect()
    };
    Ok(DualityReport {
        s,
        inequality_count: inequalities.len(),
        ray_count: rays.len(),
        rays_match: from_inequalities.rays() == Some(listed.as_slice()),
        cones_equal: from_inequalities == from_rays,
        extra_rays: not_in(from_inequalities.rays(), &listed),
        missing_facets: not_in(from_rays.inequalities(), &normals),
        sign_closed_rays_match: sign_closed.rays() == Some(listed.as_slice()),
        sign_closed,
        from_inequalities,
        from_rays,
    })
}

/// Whether each listed inequality is a facet of the effective cone.
pub fn facet_status(s: usize) -> Result<Vec<(NamedInequality, bool)>> {
    let cone = cone::dd_convert(&cone_from_rays(s)?)?;
    let facets = cone.inequalities().unwrap_or_default();
    Ok(inequality_list(s)?
        .into_iter()
        .map(|q| {
            let is_facet = facets.contains(&primitive(&q.normal()));
            (q, is_facet)
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct RayIncidence {
    pub generator: Generator,
    pub class: DivisorClass,
    /// Labels of the listed inequalities tight at this ray.
    pub tight: Vec<String>,
    /// The tight hyperplanes cut out exactly this ray.
    pub extremal: bool,
    /// Hyperplanes classically listed for this ray, when such a list exists.
    pub classical: Option<Vec<String>>,
    /// Every classically listed hyperplane is tight at the ray.
    pub classical_contained: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IncidenceReport {
    pub s: usize,
    pub rays: Vec<RayIncidence>,
    pub facets: Vec<String>,
    pub redundant: Vec<String>,
}

impl IncidenceReport {
    pub fn all_extremal(&self) -> bool {
        self.rays.iter().all(|r| r.extremal)
    }

    pub fn classical_consistent(&self) -> bool {
        self.rays.iter().all(|r| r.classical_contained != Some(false))
    }
}

/// The hyperplane sets classically used to exhibit each ray as extremal, for
/// `s = 2, 3, 4` (none are listed for quadrics at `s = 3` or for `s = 5`).
fn classical_hyperplanes(s: usize, g: Generator) -> Option<Vec<Family>> {
    let others = |skip: usize| (1..=s).filter(move |&i| i != skip);
    let pairs_among = |idx: Vec<usize>| -> Vec<Family> {
        let mut out = Vec::new();
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                out.push(Family::Pair(i, j));
            }
        }
        out
    };
    match (s, g) {
        (2, Generator::E(i)) => Some(vec![Family::Degree, Family::Single(3 - i)]),
        (2, Generator::Pencil(i)) => Some(vec![Family::Single(i), Family::Pair(1, 2)]),
        (3 | 4, Generator::E(i)) => {
            let mut out = vec![Family::Degree];
            out.extend(others(i).map(Family::Single));
            out.extend(pairs_among(others(i).collect()));
            Some(out)
        }
        (3 | 4, Generator::Pencil(i)) => {
            let mut out = vec![Family::Single(i)];
            out.extend(others(i).map(|j| {
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                Family::Pair(a, b)
            }));
            if s == 4 {
                out.push(Family::SumPlus(i));
            }
            Some(out)
        }
        (4, Generator::Quadric(t)) => {
            let mut out = pairs_among(t.to_vec());
            out.extend(t.iter().map(|&i| Family::SumPlus(i)));
            out.push(Family::TwiceSum);
            Some(out)
        }
        _ => None,
    }
}

pub fn incidence_report(s: usize) -> Result<IncidenceReport> {
    if !(2..=MAX_LINES).contains(&s) {
        return Err(Error::Unsupported(format!(
            "incidence data is reported for 2 <= s <= {MAX_LINES} (got s = {s})"
        )));
    }
    let inequalities = inequality_list(s)?;
    let cone = cone_from_inequalities(s)?;
    let mut rays = Vec::new();
    for (generator, class) in ray_list(s)? {
        let tight: Vec<&NamedInequality> =
            inequalities.iter().filter(|q| q.is_tight(&class)).collect();
        let normals: Vec<IntVec> = tight.iter().map(|q| q.normal()).collect();
        let extremal = cone::extremality_check(&cone, &class.coords(), &normals)?;
        let classical: Option<Vec<NamedInequality>> = classical_hyperplanes(s, generator)
            .map(|fams| fams.into_iter().map(|f| NamedInequality::new(s, f)).collect());
        let classical_contained = classical
            .as_ref()
            .map(|qs| qs.iter().all(|q| tight.iter().any(|t| t.label() == q.label())));
        rays.push(RayIncidence {
            generator,
            class,
            tight: tight.iter().map(|q| q.label().to_string()).collect(),
            extremal,
            classical: classical.map(|qs| qs.iter().map(|q| q.label().to_string()).collect()),
            classical_contained,
        });
    }
    let (facets, redundant): (Vec<_>, Vec<_>) =
        facet_status(s)?.into_iter().partition(|(_, is_facet)| *is_facet);
    Ok(IncidenceReport {
        s,
        rays,
        facets: facets.into_iter().map(|(q, _)| q.label).collect(),
        redundant: redundant.into_iter().map(|(q, _)| q.label).collect(),
    })
}
