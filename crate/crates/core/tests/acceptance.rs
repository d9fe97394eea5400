//! Acceptance gate. Runs every criterion at its stated size and tolerance,
//! prints one PASS/FAIL line per criterion and exits nonzero if any fails.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use effcone::cone::{self, ConeDesc};
use effcone::divisor::{
    anticanonical_splittings, canonical_class, triple_product, weak_fano_report, DivisorClass,
};
use effcone::effective::{
    self, cone_from_inequalities, cone_from_rays, cone_from_sign_closed, decompose_by_cases,
    inequality_list, is_effective, is_ray_combination, sign_reduced, verify_certificate,
    verify_duality,
};
use effcone::kernel::{rat, ratio, Rational, DEFAULT_PRIME};
use effcone::oracle::{containment_trials, estimate_h0, h0, sample_lines, InterpolationProblem};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEEDS: [u64; 3] = [1, 2, 3];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn cls(d: i64, m: &[i64]) -> DivisorClass {
    DivisorClass::from_ints(d, m)
}

fn random_class(rng: &mut ChaCha8Rng, s: usize, bound: i64) -> DivisorClass {
    let d = rng.gen_range(-bound..=bound);
    let m: Vec<i64> = (0..s).map(|_| rng.gen_range(-bound..=bound)).collect();
    cls(d, &m)
}

fn timed(limit: Duration, start: Instant, mut detail: String, pass: bool) -> Outcome {
    let elapsed = start.elapsed();
    detail.push_str(&format!("; {:.2?} (limit {:?})", elapsed, limit));
    outcome(pass && elapsed < limit, detail)
}

fn duality() -> Outcome {
    let start = Instant::now();
    let expected = [1, 2, 4, 7, 12, 20];
    let mut pass = true;
    let mut notes = Vec::new();
    for (s, &count) in expected.iter().enumerate() {
        let r = verify_duality(s).expect("supported s");
        let rays = r.from_inequalities.rays().map_or(0, <[_]>::len);
        let ok = r.holds() && r.ray_count == count;
        pass &= ok;
        if !ok {
            notes.push(format!(
                "s={s}: literal list gives {rays} rays (listed {count}), {} facets missing from the list",
                r.missing_facets.len()
            ));
        }
    }
    let detail = if notes.is_empty() {
        "rays and facets agree for s = 0..5".to_string()
    } else {
        notes.join("; ")
    };
    timed(Duration::from_secs(5), start, detail, pass)
}

struct Sweep {
    outcome: Outcome,
    effective: HashMap<usize, Vec<DivisorClass>>,
}

fn soundness_sweep() -> Sweep {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_000);
    let mut disagreements = 0;
    let mut bad_certificates = 0;
    let mut literal_disagreements = 0;
    let mut positives = 0;
    let mut effective = HashMap::new();
    for s in 2..=5 {
        let list = inequality_list(s).unwrap();
        let mut eff_s = Vec::new();
        for _ in 0..10_000 {
            let c = random_class(&mut rng, s, 20);
            let by_inequalities = list.iter().all(|q| q.holds(&sign_reduced(&c)));
            let by_rays = is_ray_combination(&c).unwrap();
            if by_inequalities != by_rays {
                disagreements += 1;
                continue;
            }
            if list.iter().all(|q| q.holds(&c)) != by_rays {
                literal_disagreements += 1;
            }
            match is_effective(&c) {
                Ok(m) if m.effective == by_rays && verify_certificate(&m.certificate) => {}
                _ => bad_certificates += 1,
            }
            if by_rays {
                positives += 1;
                eff_s.push(c);
            }
        }
        effective.insert(s, eff_s);
    }
    let detail = format!(
        "40000 classes, {positives} effective, {disagreements} verdict disagreements, \
         {bad_certificates} failed certificates ({literal_disagreements} classes where the \
         unreduced literal list would disagree)"
    );
    Sweep {
        outcome: timed(
            Duration::from_secs(60),
            start,
            detail,
            disagreements == 0 && bad_certificates == 0,
        ),
        effective,
    }
}

fn recipe(effective: &HashMap<usize, Vec<DivisorClass>>) -> Outcome {
    let mut count = 0;
    let mut failures = Vec::new();
    for s in 2..=4 {
        for c in &effective[&s] {
            count += 1;
            match decompose_by_cases(c) {
                Ok(cert) if verify_certificate(&cert) => {}
                other => failures.push(format!("{c}: {other:?}")),
            }
        }
    }
    // lower s from a small dedicated sweep
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for s in 0..=1 {
        for _ in 0..1000 {
            let c = random_class(&mut rng, s, 20);
            if is_ray_combination(&c).unwrap() {
                count += 1;
                if !decompose_by_cases(&c).map(|x| verify_certificate(&x)).unwrap_or(false) {
                    failures.push(c.to_string());
                }
            }
        }
    }
    let mut detail = format!("{count} effective instances with s <= 4, {} failures", failures.len());
    if let Some(first) = failures.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    outcome(failures.is_empty(), detail)
}

fn intersections() -> Outcome {
    let mut bad = Vec::new();
    for s in 0..=10usize {
        let minus_k = canonical_class(s).negate();
        let cube = triple_product(&minus_k, &minus_k, &minus_k).unwrap();
        if cube != rat(64 - 10 * s as i64) {
            bad.push(format!("(-K)^3 = {cube} at s={s}"));
        }
        if weak_fano_report(s).is_weak_fano != (s <= 6) {
            bad.push(format!("weak Fano verdict at s={s}"));
        }
    }
    for s in [5, 6] {
        let minus_k = canonical_class(s).negate();
        for parts in anticanonical_splittings(s).unwrap() {
            if DivisorClass::sum(s, &parts).unwrap() != minus_k {
                bad.push(format!("splitting at s={s} does not sum to -K"));
            }
        }
    }
    let detail = if bad.is_empty() {
        "(-K)^3 = 64 - 10s for s = 0..10, weak Fano iff s <= 6, splittings sum to -K".into()
    } else {
        bad.join("; ")
    };
    outcome(bad.is_empty(), detail)
}

fn oracle_values() -> Outcome {
    let start = Instant::now();
    let cases: [(u32, &[u32], usize); 3] = [(2, &[1, 1, 1], 1), (3, &[1, 1, 1, 1, 1], 0), (1, &[], 4)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (d, m, want) in cases {
        let r = estimate_h0(d, m, DEFAULT_PRIME, &SEEDS).unwrap();
        pass &= r.h0_generic_estimate == want;
        parts.push(format!("h0(L{d}{m:?}) = {} (want {want})", r.h0_generic_estimate));
    }
    timed(Duration::from_secs(10), start, parts.join(", "), pass)
}

fn grid(s: usize) -> Vec<Vec<u32>> {
    (0..3usize.pow(s as u32))
        .map(|code| (0..s).map(|i| (code / 3usize.pow(i as u32) % 3) as u32).collect())
        .collect()
}

fn oracle_vs_cone() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut nonempty = 0;
    let mut exceptions = Vec::new();
    for s in 0..=4 {
        let configs: Vec<_> = SEEDS
            .iter()
            .map(|&seed| sample_lines(s, DEFAULT_PRIME, seed).unwrap())
            .collect();
        for d in 0..=6u32 {
            for m in grid(s) {
                checked += 1;
                let generic = configs
                    .iter()
                    .map(|c| h0(&InterpolationProblem::new(d, m.clone(), c.clone()).unwrap()).unwrap())
                    .min()
                    .unwrap();
                if generic == 0 {
                    continue;
                }
                nonempty += 1;
                let mi: Vec<i64> = m.iter().map(|&x| i64::from(x)).collect();
                let c = cls(i64::from(d), &mi);
                if !is_effective(&c).unwrap().effective {
                    exceptions.push(c.to_string());
                }
            }
        }
    }
    let detail = format!(
        "{checked} classes, {nonempty} with h0 > 0, {} not effective{}",
        exceptions.len(),
        exceptions.first().map_or(String::new(), |e| format!(" (first {e})"))
    );
    timed(Duration::from_secs(120), start, detail, exceptions.is_empty())
}

fn containment() -> Outcome {
    let r = containment_trials(3, &[2, 1, 1], [1, 2, 3], DEFAULT_PRIME, &SEEDS, 20).unwrap();
    outcome(
        r.contained && r.contained_per_trial.len() == 3,
        format!("Q_123 in the base locus of L3(2,1,1) at 20 points per seed: {:?}", r.contained_per_trial),
    )
}

fn permutations(a: &DivisorClass, b: &DivisorClass, c: &DivisorClass) -> [Rational; 6] {
    let t = |x, y, z| triple_product(x, y, z).unwrap();
    [t(a, b, c), t(a, c, b), t(b, a, c), t(b, c, a), t(c, a, b), t(c, b, a)]
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = Vec::new();

    for _ in 0..1000 {
        let s = rng.gen_range(0..=7);
        let [a, b, c] = std::array::from_fn(|_| random_class(&mut rng, s, 6));
        let values = permutations(&a, &b, &c);
        if values.iter().any(|v| *v != values[0]) {
            bad.push(format!("triple product not symmetric at {a} {b} {c}"));
        }
    }

    for _ in 0..1000 {
        let s = rng.gen_range(0..=5);
        let c = random_class(&mut rng, s, 10);
        let lambda = ratio(rng.gen_range(1..=9), rng.gen_range(1..=9));
        if is_effective(&c).unwrap().effective != is_effective(&c.scale(&lambda)).unwrap().effective {
            bad.push(format!("scaling changes effectivity of {c} by {lambda}"));
        }
    }

    for _ in 0..1000 {
        let s = rng.gen_range(1..=5);
        let c = random_class(&mut rng, s, 10);
        let i = rng.gen_range(1..=s);
        let e = DivisorClass::exceptional(s, i).unwrap();
        let here = is_effective(&c).unwrap().effective;
        if here && !is_effective(&c.checked_add(&e).unwrap()).unwrap().effective {
            bad.push(format!("{c} effective but {c} + E_{i} not"));
        }
        // D is effective exactly when D + mᵢEᵢ is, for mᵢ < 0
        if c.mult(i).is_negative() {
            let cleared = c.checked_add(&e.scale(c.mult(i))).unwrap();
            if is_effective(&cleared).unwrap().effective != here {
                bad.push(format!("clearing m{i} of {c} changes effectivity"));
            }
        }
    }

    let mut cones: Vec<(String, ConeDesc)> = Vec::new();
    for s in 0..=effective::MAX_LINES {
        cones.push((format!("rays s={s}"), cone_from_rays(s).unwrap()));
        cones.push((format!("inequalities s={s}"), cone_from_inequalities(s).unwrap()));
        cones.push((format!("sign-closed s={s}"), cone_from_sign_closed(s).unwrap()));
    }
    for (name, c) in &cones {
        let once = cone::dd_convert(c).unwrap();
        if cone::dd_convert(&once).unwrap() != once {
            bad.push(format!("dd_convert not idempotent on {name}"));
        }
    }

    let detail = if bad.is_empty() {
        format!("symmetry, scaling, E_i-monotonicity (1000 each); idempotence on {} cones", cones.len())
    } else {
        format!("{} violations; first: {}", bad.len(), bad[0])
    };
    outcome(bad.is_empty(), detail)
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    results.push(("1 duality verification", duality()));
    let sweep = soundness_sweep();
    results.push(("2 certificate soundness sweep", sweep.outcome));
    results.push(("3 case-analysis recipe agreement", recipe(&sweep.effective)));
    results.push(("4 intersection identities", intersections()));
    results.push(("5 oracle reproduces classical values", oracle_values()));
    results.push(("6 oracle-vs-cone consistency", oracle_vs_cone()));
    results.push(("7 base-locus containment", containment()));
    results.push(("8 property suites", properties()));

    let mut failed = 0;
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    let sign_closed_ok = (0..=effective::MAX_LINES).all(|s| verify_duality(s).unwrap().sign_closed_rays_match);
    println!(
        "note: with negative multiplicities cleared first, the inequality lists reproduce the ray lists for s = 0..5: {}",
        if sign_closed_ok { "yes" } else { "no" }
    );
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
