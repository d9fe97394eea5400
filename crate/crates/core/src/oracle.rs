//! Brute-force interpolation oracle: `h⁰` of the linear system of degree-`d`
//! surfaces with multiplicity `≥ mᵢ` along `s` random lines, by linear algebra
//! over a prime field, plus an empirical base-locus containment test.
//!
//! A configuration sampled over `𝔽ₚ` is only probably general. Special
//! configurations can only raise `h⁰`, so the minimum over several seeds is
//! reported as the generic estimate.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::matrix::{inv_mod, pow_mod};
use crate::kernel::rational::is_prime;
use crate::kernel::{FpMatrix, Matrix};

/// Primes at or below this are refused: too few points for genericity.
pub const PRIME_FLOOR: u64 = 1000;
const RETRY_BUDGET: usize = 100;
const POINT_STREAM: u64 = 1;
const SAMPLE_STREAM: u64 = 2;

pub type Point = [u64; 4];

/// `s` lines in ℙ³ over `𝔽ₚ`, each the span of two points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineConfig {
    prime: u64,
    seed: u64,
    lines: Vec<[Point; 2]>,
}

impl LineConfig {
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn lines(&self) -> &[[Point; 2]] {
        &self.lines
    }

    pub fn s(&self) -> usize {
        self.lines.len()
    }

    fn contains(&self, line: usize, x: &Point) -> bool {
        let [p, q] = self.lines[line];
        rank_of(self.prime, &[p, q, *x]) < 3
    }
}

fn rank_of(prime: u64, points: &[Point]) -> usize {
    let rows: Vec<Vec<u64>> = points.iter().map(|p| p.to_vec()).collect();
    FpMatrix::from_rows(prime, 4, &rows)
        .expect("prime checked by caller")
        .rank()
}

fn check_prime(prime: u64) -> Result<()> {
    if !is_prime(prime) {
        return Err(Error::InvalidModulus(prime));
    }
    if prime <= PRIME_FLOOR {
        return Err(Error::DegenerateField(format!(
            "prime {prime} is at or below the genericity floor {PRIME_FLOOR}"
        )));
    }
    // FpMatrix enforces the upper bound
    FpMatrix::zeros(0, 0, prime).map(|_| ())
}

/// Deterministic in `(s, prime, seed)`. Lines are resampled until every line
/// is spanned by independent points, every pair is disjoint, and no line lies
/// on the quadric through three others.
pub fn sample_lines(s: usize, prime: u64, seed: u64) -> Result<LineConfig> {
    check_prime(prime)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_BUDGET {
        let lines: Vec<[Point; 2]> = (0..s)
            .map(|_| [random_point(&mut rng, prime), random_point(&mut rng, prime)])
            .collect();
        let config = LineConfig { prime, seed, lines };
        if is_general(&config)? {
            return Ok(config);
        }
    }
    Err(Error::DegenerateField(format!(
        "no general configuration of {s} lines over F_{prime} within {RETRY_BUDGET} attempts"
    )))
}

fn random_point(rng: &mut ChaCha8Rng, prime: u64) -> Point {
    std::array::from_fn(|_| rng.gen_range(0..prime))
}

fn is_general(config: &LineConfig) -> Result<bool> {
    let p = config.prime;
    let lines = &config.lines;
    if lines.iter().any(|&[a, b]| rank_of(p, &[a, b]) < 2) {
        return Ok(false);
    }
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let [a, b] = lines[i];
            let [c, d] = lines[j];
            if rank_of(p, &[a, b, c, d]) < 4 {
                return Ok(false);
            }
        }
    }
    let s = lines.len();
    for quad in crate::divisor::triples(s)
        .flat_map(|[i, j, k]| (k + 1..=s).map(move |l| [i, j, k, l]))
    {
        let mut mults = vec![0; s];
        for i in quad {
            mults[i - 1] = 1;
        }
        let prob = InterpolationProblem::new(2, mults, config.clone())?;
        if h0(&prob)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `L_d(m₁, …, m_s)` over a fixed line configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpolationProblem {
    d: u32,
    mults: Vec<u32>,
    config: LineConfig,
}

impl InterpolationProblem {
    pub fn new(d: u32, mults: Vec<u32>, config: LineConfig) -> Result<Self> {
        if mults.len() != config.s() {
            return Err(Error::LineCountMismatch {
                left: mults.len(),
                right: config.s(),
            });
        }
        Ok(Self { d, mults, config })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn mults(&self) -> &[u32] {
        &self.mults
    }

    pub fn config(&self) -> &LineConfig {
        &self.config
    }

    /// `C(d+3, 3)`.
    pub fn monomial_count(&self) -> usize {
        monomials(self.d).len()
    }
}

/// Exponent vectors of degree `d` in four variables, in a fixed order.
pub fn monomials(d: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            for c in (0..=d - a - b).rev() {
                out.push([a, b, c, d - a - b - c]);
            }
        }
    }
    out
}

/// Derivative orders `α` with `|α| ≤ max_order`.
fn orders(max_order: u32) -> Vec<[u32; 4]> {
    (0..=max_order).flat_map(monomials).collect()
}

fn binomial(n: u32, k: u32) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * u64::from(n - i) / u64::from(i + 1))
}

/// Hasse derivative `∂^α x^e / α!` evaluated at `x`, over `𝔽ₚ`.
fn hasse_fp(e: &[u32; 4], alpha: &[u32; 4], x: &Point, p: u64) -> u64 {
    let mut acc = 1u64;
    for i in 0..4 {
        if alpha[i] > e[i] {
            return 0;
        }
        let c = binomial(e[i], alpha[i]) % p;
        acc = acc * c % p * pow_mod(x[i], u64::from(e[i] - alpha[i]), p) % p;
    }
    acc
}

fn hasse_int(e: &[u32; 4], alpha: &[u32; 4], x: &[i64; 4]) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..4 {
        if alpha[i] > e[i] {
            return BigInt::from(0);
        }
        acc *= BigInt::from(binomial(e[i], alpha[i])) * BigInt::from(x[i]).pow(e[i] - alpha[i]);
    }
    acc
}

/// `d + 1` projectively distinct points `P + tQ` on the line, `t` random.
fn points_on_line(line: &[Point; 2], d: u32, p: u64, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let mut ts: Vec<u64> = Vec::new();
    while ts.len() < d as usize + 1 {
        let t = rng.gen_range(0..p);
        if !ts.contains(&t) {
            ts.push(t);
        }
    }
    ts.into_iter().map(|t| along(line, t, p)).collect()
}

fn along(&[a, b]: &[Point; 2], t: u64, p: u64) -> Point {
    std::array::from_fn(|i| (a[i] + t * b[i]) % p)
}

/// One row per point and per derivative order `|α| ≤ m − 1`: vanishing of
/// every such partial at `d + 1` points of a line forces vanishing along it.
fn condition_matrix(prob: &InterpolationProblem) -> Result<FpMatrix> {
    let p = prob.config.prime;
    let monos = monomials(prob.d);
    let mut rng = ChaCha8Rng::seed_from_u64(prob.config.seed);
    rng.set_stream(POINT_STREAM);
    let mut rows = Vec::new();
    for (line, &m) in prob.config.lines.iter().zip(&prob.mults) {
        if m == 0 {
            continue;
        }
        let alphas = orders(m - 1);
        for x in points_on_line(line, prob.d, p, &mut rng) {
            for alpha in &alphas {
                rows.push(monos.iter().map(|e| hasse_fp(e, alpha, &x, p)).collect());
            }
        }
    }
    FpMatrix::from_rows(p, monos.len(), &rows)
}

/// Dimension of the space of degree-`d` forms meeting every condition.
pub fn h0(prob: &InterpolationProblem) -> Result<usize> {
    Ok(prob.monomial_count() - condition_matrix(prob)?.rank())
}

/// Coefficient vectors (in [`monomials`] order) spanning the solution space.
pub fn solution_basis(prob: &InterpolationProblem) -> Result<Vec<Vec<u64>>> {
    Ok(condition_matrix(prob)?.rank_nullspace().nullspace)
}

pub fn evaluate(d: u32, coeffs: &[u64], x: &Point, p: u64) -> u64 {
    monomials(d)
        .iter()
        .zip(coeffs)
        .fold(0, |acc, (e, &c)| (acc + c * hasse_fp(e, &[0; 4], x, p)) % p)
}

/// Exact rank over ℚ for small instances: lines spanned by random integer
/// points with entries in `[-bound, bound]`, resampled until pairwise
/// disjoint, and points `P + tQ` for `t = 0, …, d`.
pub fn h0_exact(d: u32, mults: &[u32], seed: u64, bound: i64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let int_rank = |pts: &[[i64; 4]]| {
        let rows: Vec<Vec<i64>> = pts.iter().map(|p| p.to_vec()).collect();
        Matrix::from_i64_rows(4, &rows).expect("width 4").rank()
    };
    let mut lines: Vec<[[i64; 4]; 2]> = Vec::new();
    let mut attempts = 0;
    while lines.len() < mults.len() {
        attempts += 1;
        if attempts > RETRY_BUDGET * mults.len().max(1) {
            return Err(Error::DegenerateConfig(
                "could not sample disjoint integer lines".into(),
            ));
        }
        let cand: [[i64; 4]; 2] =
            std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-bound..=bound)));
        if int_rank(&cand) < 2 {
            continue;
        }
        if lines
            .iter()
            .all(|l| int_rank(&[l[0], l[1], cand[0], cand[1]]) == 4)
        {
            lines.push(cand);
        }
    }

    let monos = monomials(d);
    let mut rows = Vec::new();
    for (line, &m) in lines.iter().zip(mults) {
        if m == 0 {
            continue;
        }
        let alphas = orders(m - 1);
        for t in 0..=i64::from(d) {
            let x: [i64; 4] = std::array::from_fn(|i| line[0][i] + t * line[1][i]);
            for alpha in &alphas {
                rows.push(monos.iter().map(|e| hasse_int(e, alpha, &x)).collect());
            }
        }
    }
    Ok(monos.len() - Matrix::from_int_rows(monos.len(), &rows)?.rank())
}

/// Whether every section of the problem vanishes at `samples` random points
/// of the quadric through lines `triple`, away from the lines themselves.
pub fn containment_check(
    prob: &InterpolationProblem,
    triple: [usize; 3],
    samples: usize,
) -> Result<bool> {
    let s = prob.config.s();
    let [i, j, k] = triple;
    if !(1 <= i && i < j && j < k && k <= s) {
        return Err(Error::InvalidInput(format!(
            "triple {triple:?} must be strictly increasing indices in 1..={s}"
        )));
    }
    let excess = triple.iter().map(|&t| i64::from(prob.mults[t - 1])).sum::<i64>()
        - i64::from(prob.d);
    if excess <= 0 {
        return Err(Error::Precondition(format!(
            "the quadric excess of {triple:?} is {excess}, so it is not forced"
        )));
    }
    let basis = solution_basis(prob)?;
    if basis.is_empty() {
        return Err(Error::Precondition("the linear system is empty".into()));
    }

    let mut qmults = vec![0; s];
    for t in triple {
        qmults[t - 1] = 1;
    }
    let quadric_problem = InterpolationProblem::new(2, qmults, prob.config.clone())?;
    let quadric = match solution_basis(&quadric_problem)?.as_slice() {
        [q] => q.clone(),
        other => {
            return Err(Error::DegenerateConfig(format!(
                "expected a unique quadric through lines {triple:?}, found a {}-dimensional family",
                other.len()
            )))
        }
    };

    let points = quadric_points(&prob.config, &quadric, triple[0], samples)?;
    let p = prob.config.prime;
    Ok(points
        .iter()
        .all(|x| basis.iter().all(|f| evaluate(prob.d, f, x, p) == 0)))
}

/// Random points of the quadric `q` off every line: the second intersection
/// of `q` with a random line through a random point of `lines[on_line − 1]`.
pub fn quadric_points(
    config: &LineConfig,
    quadric: &[u64],
    on_line: usize,
    samples: usize,
) -> Result<Vec<Point>> {
    let p = config.prime;
    let q = |x: &Point| evaluate(2, quadric, x, p);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(SAMPLE_STREAM);
    let mut out = Vec::with_capacity(samples);
    let mut attempts = 0;
    while out.len() < samples {
        attempts += 1;
        if attempts > RETRY_BUDGET * samples.max(1) {
            return Err(Error::DegenerateConfig("could not sample quadric points".into()));
        }
        let a = along(&config.lines[on_line - 1], rng.gen_range(0..p), p);
        if q(&a) != 0 {
            return Err(Error::Inconsistent("quadric misses a point of its own line".into()));
        }
        let b = random_point(&mut rng, p);
        let qb = q(&b);
        let a_plus_b: Point = std::array::from_fn(|i| (a[i] + b[i]) % p);
        // q(a + tb) = t·β + t²·q(b) since q(a) = 0
        let beta = (q(&a_plus_b) + 2 * p - qb) % p;
        if qb == 0 || beta == 0 {
            continue;
        }
        let t = (p - beta) * inv_mod(qb, p) % p;
        let x: Point = std::array::from_fn(|i| (a[i] + t * b[i]) % p);
        if q(&x) != 0 {
            return Err(Error::Inconsistent("sampled point is off the quadric".into()));
        }
        if (0..config.s()).any(|l| config.contains(l, &x)) {
            continue;
        }
        out.push(x);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub d: u32,
    pub mults: Vec<u32>,
    pub prime: u64,
    pub seeds: Vec<u64>,
    pub h0_per_trial: Vec<usize>,
    pub h0_generic_estimate: usize,
}

/// One trial per seed; the generic estimate is the minimum.
pub fn estimate_h0(d: u32, mults: &[u32], prime: u64, seeds: &[u64]) -> Result<OracleReport> {
    if seeds.is_empty() {
        return Err(Error::InvalidInput("at least one seed is required".into()));
    }
    let h0_per_trial = seeds
        .iter()
        .map(|&seed| {
            let config = sample_lines(mults.len(), prime, seed)?;
            h0(&InterpolationProblem::new(d, mults.to_vec(), config)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleReport {
        d,
        mults: mults.to_vec(),
        prime,
        seeds: seeds.to_vec(),
        h0_generic_estimate: *h0_per_trial.iter().min().expect("nonempty"),
        h0_per_trial,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub d: u32,
    pub mults: Vec<u32>,
    pub prime: u64,
    pub triple: [usize; 3],
    pub samples: usize,
    pub seeds: Vec<u64>,
    pub contained_per_trial: Vec<bool>,
    pub contained: bool,
}

/// [`containment_check`] on an independent configuration per seed.
pub fn containment_trials(
    d: u32,
    mults: &[u32],
    triple: [usize; 3],
    prime: u64,
    seeds: &[u64],
    samples: usize,
) -> Result<ContainmentReport> {
    if seeds.is_empty() {
        return Err(Error::InvalidInput("at least one seed is required".into()));
    }
    let contained_per_trial = seeds
        .iter()
        .map(|&seed| {
            let config = sample_lines(mults.len(), prime, seed)?;
            containment_check(&InterpolationProblem::new(d, mults.to_vec(), config)?, triple, samples)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ContainmentReport {
        d,
        mults: mults.to_vec(),
        prime,
        triple,
        samples,
        seeds: seeds.to_vec(),
        contained: contained_per_trial.iter().all(|&c| c),
        contained_per_trial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::DEFAULT_PRIME;

    fn generic(d: u32, mults: &[u32]) -> usize {
        estimate_h0(d, mults, DEFAULT_PRIME, &[1, 2, 3])
            .unwrap()
            .h0_generic_estimate
    }

    fn problem(d: u32, mults: &[u32], seed: u64) -> InterpolationProblem {
        let config = sample_lines(mults.len(), DEFAULT_PRIME, seed).unwrap();
        InterpolationProblem::new(d, mults.to_vec(), config).unwrap()
    }

    #[test]
    fn monomial_counts() {
        for d in 0..8u32 {
            let n = (d + 1) * (d + 2) * (d + 3) / 6;
            assert_eq!(monomials(d).len(), n as usize);
        }
        assert_eq!(orders(1).len(), 5);
        assert_eq!(orders(2).len(), 15);
    }

    #[test]
    fn classical_values() {
        assert_eq!(generic(1, &[]), 4);
        assert_eq!(generic(2, &[1, 1, 1]), 1);
        assert_eq!(generic(3, &[1, 1, 1, 1, 1]), 0);
        assert_eq!(generic(3, &[1, 1, 1, 1]), 4);
        // planes through a line, quadrics singular along a line
        assert_eq!(generic(1, &[1]), 2);
        assert_eq!(generic(2, &[2]), 3);
    }

    #[test]
    fn exact_mode_agrees() {
        for (d, m) in [(2, vec![1, 1, 1]), (3, vec![1, 1, 1, 1]), (2, vec![2]), (3, vec![2, 1, 1])] {
            assert_eq!(h0_exact(d, &m, 7, 9).unwrap(), generic(d, &m), "{d} {m:?}");
        }
    }

    #[test]
    fn sampling_is_deterministic_and_general() {
        let a = sample_lines(5, DEFAULT_PRIME, 1).unwrap();
        assert_eq!(a, sample_lines(5, DEFAULT_PRIME, 1).unwrap());
        assert_ne!(a, sample_lines(5, DEFAULT_PRIME, 2).unwrap());
        assert!(is_general(&a).unwrap());
        assert!(sample_lines(0, DEFAULT_PRIME, 1).unwrap().lines().is_empty());
        let prob = problem(4, &[2, 1, 1, 1], 9);
        assert_eq!(h0(&prob).unwrap(), h0(&prob).unwrap());
    }

    #[test]
    fn rejects_bad_fields() {
        assert!(matches!(sample_lines(2, 2, 1), Err(Error::DegenerateField(_))));
        assert!(matches!(sample_lines(2, 65520, 1), Err(Error::InvalidModulus(_))));
        let config = sample_lines(2, DEFAULT_PRIME, 1).unwrap();
        assert!(matches!(
            InterpolationProblem::new(2, vec![1], config),
            Err(Error::LineCountMismatch { .. })
        ));
    }

    #[test]
    fn monotone_on_grid() {
        for d in 0..=4u32 {
            for a in 0..=2u32 {
                for b in 0..=2u32 {
                    let here = generic(d, &[a, b]);
                    assert!(generic(d + 1, &[a, b]) >= here);
                    assert!(generic(d, &[a + 1, b]) <= here);
                    assert!(generic(d, &[a, b + 1]) <= here);
                }
            }
        }
    }

    #[test]
    fn forced_quadric_contains_sampled_points() {
        let prob = problem(3, &[2, 1, 1], 1);
        assert!(containment_check(&prob, [1, 2, 3], 20).unwrap());
        let prob = problem(2, &[1, 1, 1], 1);
        assert!(containment_check(&prob, [1, 2, 3], 20).unwrap());
    }

    #[test]
    fn unforced_sections_do_not_vanish_on_quadric() {
        // cubics through three lines: the quadric times a plane plus others
        let prob = problem(3, &[1, 1, 1], 4);
        let basis = solution_basis(&prob).unwrap();
        let quadric = solution_basis(&problem(2, &[1, 1, 1], 4)).unwrap().pop().unwrap();
        let pts = quadric_points(prob.config(), &quadric, 1, 5).unwrap();
        let p = DEFAULT_PRIME;
        assert!(pts
            .iter()
            .any(|x| basis.iter().any(|f| evaluate(3, f, x, p) != 0)));
    }

    #[test]
    fn containment_preconditions() {
        let prob = problem(5, &[1, 1, 1], 1);
        assert!(matches!(
            containment_check(&prob, [1, 2, 3], 5),
            Err(Error::Precondition(_))
        ));
        let prob = problem(2, &[3, 3, 3], 1);
        assert!(matches!(
            containment_check(&prob, [1, 2, 3], 5),
            Err(Error::Precondition(_))
        ));
        assert!(containment_check(&prob, [1, 1, 3], 5).is_err());
    }

    #[test]
    fn report_json() {
        let r = estimate_h0(2, &[1, 1, 1], DEFAULT_PRIME, &[1, 2, 3]).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"d":2,"mults":[1,1,1],"prime":65521,"seeds":[1,2,3],"h0_per_trial":[1,1,1],"h0_generic_estimate":1}"#
        );
    }
}
