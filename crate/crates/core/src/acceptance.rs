//! End-to-end acceptance suite, shared by the `verify` command and the
//! `acceptance` test target.
//!
//! Each criterion returns a pass flag, a one-line detail and its wall-clock
//! time; exceeding the time limit counts as a failure.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::{dfa_from_regex, minimize, reverse, Alphabet, Dfa, Symbol};
use crate::classify::{class_flags, extract_witness, synchronized_pairs, ClassId};
use crate::harness::{
    estimate_errors, measure_space_growth, powers_of_two, three_sigma, verify_bounds, Bound, Execution, HarnessError,
    ProbeSet, Shape, StreamSpec, TrialConfig, WitnessFamily,
};
use crate::reference;
use crate::swa::{
    amplification_copies, amplified_loglog, bernoulli_swa, const_left_ideal_swa, derive_seed, exact_oracle,
    lb_direct_swa, loglog_suffix_free_swa, path_summary_swa, solve_xi_epsilon, trivial_reject_swa, ModPrime, QueryMode,
};

/// Outcome of one criterion.
#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {} ({:.1} s of {} s): {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }
}

/// `(id, name, time limit in seconds)`.
pub const CRITERIA: [(u8, &str, u64); 11] = [
    (1, "classification goldens", 5),
    (2, "lattice property", 60),
    (3, "synchronized-pair oracle", 60),
    (4, "bernoulli law", 120),
    (5, "log-log algorithm", 300),
    (6, "deterministic failure ratio", 60),
    (7, "constant-space left ideal", 300),
    (8, "path-summary exactness", 60),
    (9, "space shapes", 120),
    (10, "witness soundness", 10),
    (11, "amplification", 300),
];

type Outcome = Result<(bool, String), HarnessError>;

/// Runs criterion `id`; `None` for unknown ids.
pub fn run_criterion(id: u8, execution: Execution) -> Option<CriterionResult> {
    let &(id, name, limit) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let outcome = match id {
        1 => classification_goldens(),
        2 => lattice_property(),
        3 => sync_pair_oracle(),
        4 => bernoulli_law(execution),
        5 => loglog_algorithm(execution),
        6 => deterministic_failure_ratio(execution),
        7 => const_left_ideal(execution),
        8 => path_summary_exactness(),
        9 => space_shapes(),
        10 => witness_soundness(),
        _ => amplification(execution),
    };
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit);
    let (mut pass, mut detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    if elapsed >= limit {
        pass = false;
        detail.push_str("; time limit exceeded");
    }
    Some(CriterionResult {
        id,
        name,
        pass,
        detail,
        elapsed,
        limit,
    })
}

pub fn run_all(execution: Execution) -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0, execution)).collect()
}

fn lang(pattern: &str, alphabet: &str, pad: char) -> Dfa {
    let a = Alphabet::from_chars(alphabet).expect("fixed alphabet");
    minimize(&dfa_from_regex(pattern, &a).expect("fixed pattern"))
        .with_pad_char(pad)
        .expect("pad in alphabet")
}

fn rev(d: &Dfa) -> Dfa {
    minimize(&reverse(d))
}

/// The six example languages over {a,b,c} with their class flags in the
/// order ST-Len, ST-SF-Len, LI-Len, LB-PF-SF-Len, LI-PF-Len.
pub const GOLDENS: [(&str, &str, [bool; 5]); 6] = [
    ("Σ*a", "(a|b|c)*a", [true, true, true, true, true]),
    ("ab*", "ab*", [false, true, true, true, true]),
    ("Σ*aΣ*", "(a|b|c)*a(a|b|c)*", [false, false, true, false, true]),
    ("a*b", "a*b", [false, false, true, true, true]),
    (
        "a{a,b}*c ∪ {a,b}*",
        "a(a|b)*c|(a|b)*",
        [false, false, false, false, true],
    ),
    ("aΣ*", "a(a|b|c)*", [false, false, false, false, false]),
];

fn validate_failed_classes(d: &Dfa, flags: [bool; 5]) -> Result<usize, String> {
    let mut checked = 0;
    for (c, member) in ClassId::ALL.into_iter().zip(flags) {
        if member {
            continue;
        }
        let w = extract_witness(d, c).map_err(|e| format!("{c}: {e}"))?;
        let r = w.validate(d, 5);
        if !r.is_valid() {
            return Err(format!(
                "{c}: {} witness fails ({:?})",
                w.variant_name(),
                r.violations.first()
            ));
        }
        checked += r.checked;
    }
    Ok(checked)
}

fn classification_goldens() -> Outcome {
    let mut bad = Vec::new();
    let mut obligations = 0;
    for (name, pattern, expected) in GOLDENS {
        let d = lang(pattern, "abc", 'a');
        let c = class_flags(&d);
        let got = ClassId::ALL.map(|id| c.get(id));
        if got != expected {
            bad.push(format!("{name}: got {got:?}"));
        }
        match validate_failed_classes(&d, expected) {
            Ok(k) => obligations += k,
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    Ok(if bad.is_empty() {
        (
            true,
            format!("6 languages match; non-memberships confirmed by {obligations} witness obligations"),
        )
    } else {
        (false, bad.join("; "))
    })
}

/// A random DFA with up to `max_states` states over the first `k` letters.
fn random_dfa(rng: &mut ChaCha8Rng, max_states: usize, k: usize) -> Dfa {
    let n = rng.gen_range(1..=max_states);
    let alphabet = Alphabet::new("abc".chars().take(k)).expect("k ≤ 3");
    let table: Vec<Vec<usize>> = (0..n).map(|_| (0..k).map(|_| rng.gen_range(0..n)).collect()).collect();
    let finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    let pad = rng.gen_range(0..k) as Symbol;
    Dfa::new(alphabet, 0, &finals, &table)
        .expect("valid table")
        .with_pad(pad)
        .expect("pad in range")
}

fn lattice_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = Vec::new();
    for i in 0..200 {
        let k = rng.gen_range(1..=3);
        let d = minimize(&random_dfa(&mut rng, 6, k));
        let v = class_flags(&d).lattice_violations();
        if !v.is_empty() {
            violations.push(format!("#{i}: {v:?}"));
        }
    }
    Ok((
        violations.is_empty(),
        format!(
            "200 random minimal DFAs, {} lattice violations {:?}",
            violations.len(),
            violations
        ),
    ))
}

fn sync_pair_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = 0;
    let mut pairs = 0;
    for _ in 0..500 {
        let d = random_dfa(&mut rng, 4, 2);
        let mut got = synchronized_pairs(&d);
        got.sort_unstable();
        let want = reference::synchronized_pairs_by_powers(&d);
        pairs += want.len();
        mismatches += usize::from(got != want);
    }
    Ok((
        mismatches == 0,
        format!("500 DFAs, {pairs} synchronized pairs, {mismatches} disagreements"),
    ))
}

/// Acceptance rate at the last instant of `stream`.
fn final_acceptance(report: &crate::harness::TrialReport) -> f64 {
    let e = *report.errors.last().expect("nonempty");
    if *report.truth.last().expect("nonempty") {
        1.0 - e
    } else {
        e
    }
}

fn bernoulli_law(execution: Execution) -> Outcome {
    let ab = Alphabet::from_chars("ab").expect("fixed");
    let sigma_a_sigma = lang("(a|b)*a(a|b)*", "ab", 'b');
    let everything = lang("(a|b)*", "ab", 'b');
    let constant = (23.0f64 / 24.0).powi(12);
    let mut pass = constant >= 0.6;
    let mut worst = 0.0f64;
    let mut fails = Vec::new();
    for n in [12usize, 64, 256] {
        let beta = 1.0 / (2.0 * n as f64);
        for ell in [Some(0), Some(n / 2), Some(n), Some(2 * n), None] {
            // ℓ = 0 needs ε ∈ L; the other distances come from a b^{ℓ-1}
            let (l, spec) = match ell {
                Some(0) => (&everything, StreamSpec::repeat("b", n)),
                Some(k) => (
                    &sigma_a_sigma,
                    StreamSpec::Concat(vec![StreamSpec::literal("a"), StreamSpec::repeat("b", k - 1)]),
                ),
                None => (&sigma_a_sigma, StreamSpec::repeat("b", 3 * n)),
            };
            let f = bernoulli_swa(&rev(l), n, beta)?;
            let stream = spec.generate(&ab)?;
            let cfg = TrialConfig::new(10_000, 0.5, derive_seed(4, n as u64)).execution(execution);
            let r = estimate_errors(&f, l, &stream, &cfg)?;
            let expected = ell.map_or(0.0, |k| (1.0 - beta).powi(k as i32));
            let dev = (final_acceptance(&r) - expected).abs();
            worst = worst.max(dev);
            if dev > 0.02 {
                pass = false;
                fails.push(format!("n={n} ℓ={ell:?}: {:.4} vs {expected:.4}", final_acceptance(&r)));
            }
        }
    }
    let mut detail = format!("(23/24)^12 = {constant:.4} >= 0.6; max |rate - (1-β)^ℓ| = {worst:.4} <= 0.02");
    if !fails.is_empty() {
        let _ = write!(detail, "; {}", fails.join(", "));
    }
    Ok((pass, detail))
}

fn loglog_streams(n: usize, seed: u64) -> Vec<StreamSpec> {
    vec![
        StreamSpec::Concat(vec![StreamSpec::literal("a"), StreamSpec::repeat("b", 5 * n - 1)]),
        StreamSpec::uniform(5 * n, seed),
    ]
}

fn loglog_algorithm(execution: Execution) -> Outcome {
    let ab = Alphabet::from_chars("ab").expect("fixed");
    let l = lang("ab*", "ab", 'b');
    let r = rev(&l);
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [16usize, 64, 256] {
        let pre = loglog_suffix_free_swa(&r, n)?;
        let post = amplified_loglog(&r, n, 1.0 / 3.0)?;
        let (mut pre_max, mut post_max) = (0.0f64, 0.0f64);
        for (j, spec) in loglog_streams(n, derive_seed(5, n as u64)).iter().enumerate() {
            let stream = spec.generate(&ab)?;
            let cfg = TrialConfig::new(10_000, 0.4, derive_seed(50 + j as u64, n as u64)).execution(execution);
            let a = estimate_errors(&pre, &l, &stream, &cfg)?;
            let b = estimate_errors(
                &post,
                &l,
                &stream,
                &TrialConfig {
                    threshold: 1.0 / 3.0,
                    ..cfg
                },
            )?;
            pass &= verify_bounds(&a, Bound::InstantError(0.4)).pass;
            pass &= verify_bounds(&b, Bound::InstantError(1.0 / 3.0)).pass;
            pre_max = pre_max.max(a.max_error());
            post_max = post_max.max(b.max_error());
        }
        parts.push(format!("n={n}: max ê {pre_max:.4} pre, {post_max:.4} post"));
    }
    Ok((
        pass,
        format!(
            "{}; bounds 0.4 + {:.4} and 1/3 + {:.4}",
            parts.join(", "),
            three_sigma(0.4, 10_000),
            three_sigma(1.0 / 3.0, 10_000)
        ),
    ))
}

fn deterministic_failure_ratio(execution: Execution) -> Outcome {
    let ab = Alphabet::from_chars("ab").expect("fixed");
    let phi = 0.1;
    let a_star_b = lang("a*b", "ab", 'a');
    let sigma_ab = lang("(a|b)*ab", "ab", 'b');
    let mut pass = true;
    let mut worst = 0.0f64;
    for n in [64usize, 256, 1024] {
        let periodic = StreamSpec::repeat(&format!("{}b", "a".repeat(n - 1)), 8);
        for (l, f) in [
            (
                &a_star_b,
                trivial_reject_swa(a_star_b.state_count(), n, phi, &a_star_b)?,
            ),
            (&sigma_ab, lb_direct_swa(&sigma_ab, n, phi)?),
        ] {
            let bound = 2.0 * l.state_count() as f64 / n as f64;
            for spec in [StreamSpec::uniform(8 * n, derive_seed(6, n as u64)), periodic.clone()] {
                let stream = spec.generate(&ab)?;
                let r = estimate_errors(&f, l, &stream, &TrialConfig::new(1, 0.0, 0).execution(execution))?;
                pass &= verify_bounds(&r, Bound::FailureRatio(bound)).pass;
                worst = worst.max(r.failure_ratio / bound);
            }
        }
    }
    Ok((
        pass,
        format!("trivial_reject(a*b), lb_direct(Σ*ab) at φ = 0.1: max ratio / (2|Q|/n) = {worst:.3}"),
    ))
}

fn const_left_ideal(execution: Execution) -> Outcome {
    let ab = Alphabet::from_chars("ab").expect("fixed");
    let phi = 0.1;
    let l = lang("(a|b)*a(a|b)*", "ab", 'b');
    let r = rev(&l);
    let params = solve_xi_epsilon(r.state_count(), phi)?;
    let witness = extract_witness(&l, ClassId::StSfLen).map_err(|e| HarnessError::Parse(e.to_string()))?;
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut spaces = Vec::new();
    for n in [params.n1, 4 * params.n1] {
        let f = const_left_ideal_swa(&r, n, phi)?;
        let mut space = 0;
        for spec in [
            StreamSpec::uniform(8 * n, derive_seed(7, n as u64)),
            StreamSpec::Concat(vec![
                StreamSpec::Concat(vec![
                    StreamSpec::literal("a"),
                    StreamSpec::repeat("b", 2 * n)
                ]);
                4
            ]),
            StreamSpec::Witness(WitnessFamily::new(witness.clone()).m(n).i(n)),
        ] {
            let stream = spec.generate(&ab)?;
            let cfg = TrialConfig::new(10_000, params.eps, derive_seed(70, n as u64)).execution(execution);
            let rep = estimate_errors(&f, &l, &stream, &cfg)?;
            let check = verify_bounds(&rep, Bound::FailureRatio(phi));
            pass &= check.pass;
            worst = worst.max(check.observed);
            space = space.max(rep.space_max);
        }
        spaces.push(space);
    }
    let constant = spaces.windows(2).all(|w| w[0] == w[1]);
    Ok((
        pass && constant,
        format!(
            "n1 = {}, ε = {:.4}: max failure ratio {worst:.4} <= {phi}; space {spaces:?} bits",
            params.n1, params.eps
        ),
    ))
}

fn path_summary_exactness() -> Outcome {
    let left_ideals = ["(a|b)*a", "(a|b)*a(a|b)*", "(a|b)*ab", "(a|b)*bb(a|b)*"];
    let suffix_free = ["ab*", "ba*b", "abb|bab"];
    let streams = reference::words_up_to(2, 10);
    let mut checked = 0u64;
    let mut mismatches = 0u64;
    for (patterns, mode) in [
        (&left_ideals[..], QueryMode::AtMostN),
        (&suffix_free[..], QueryMode::ExactlyN),
    ] {
        for pattern in patterns {
            for pad in ['a', 'b'] {
                let l = lang(pattern, "ab", pad);
                let r = rev(&l);
                for n in 0..=4 {
                    let ps = path_summary_swa(&r, n, mode);
                    let ex = exact_oracle(&l, n);
                    for w in streams.iter().filter(|w| w.len() == 10) {
                        let (a, b) = (ps.transcript(0, w), ex.transcript(0, w));
                        checked += a.len() as u64;
                        mismatches += a.iter().zip(&b).filter(|(x, y)| x != y).count() as u64;
                    }
                }
            }
        }
    }
    Ok((
        mismatches == 0,
        format!("{checked} instants over 7 languages, both pads, n <= 4: {mismatches} disagreements"),
    ))
}

fn space_shapes() -> Outcome {
    let ab = Alphabet::from_chars("ab").expect("fixed");
    let ns = powers_of_two(4, 16);
    let sigma_a_sigma = lang("(a|b)*a(a|b)*", "ab", 'b');
    let r = rev(&sigma_a_sigma);
    let families = crate::classify::classify(&sigma_a_sigma)
        .witnesses
        .into_values()
        .collect();
    let probes = ProbeSet::uniform(8, 1, 9).with_families(families);
    let plain = ProbeSet::uniform(8, 1, 9);
    let a_star_b = lang("a*b", "ab", 'a');
    let sigma_ab = lang("(a|b)*ab", "ab", 'b');
    // φ = 1/2 keeps the cutoff 2|Q|/φ = 12 below the smallest window
    let phi = 0.5;
    let cases: Vec<(&str, Shape, crate::harness::GrowthReport)> = vec![
        (
            "bernoulli",
            Shape::Constant,
            measure_space_growth(|n| bernoulli_swa(&r, n, 1.0 / (2.0 * n as f64)), &ab, &ns, &probes)?,
        ),
        (
            "trivial_reject",
            Shape::Constant,
            measure_space_growth(
                |n| trivial_reject_swa(a_star_b.state_count(), n, phi, &a_star_b),
                &ab,
                &ns,
                &plain,
            )?,
        ),
        (
            "lb_direct",
            Shape::Constant,
            measure_space_growth(|n| lb_direct_swa(&sigma_ab, n, phi), &ab, &ns, &plain)?,
        ),
        (
            "path_summary",
            Shape::Log,
            measure_space_growth(|n| Ok(path_summary_swa(&r, n, QueryMode::AtMostN)), &ab, &ns, &probes)?,
        ),
        (
            "exact_oracle",
            Shape::Linear,
            measure_space_growth(|n| Ok(exact_oracle(&sigma_a_sigma, n)), &ab, &ns, &plain)?,
        ),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, want, report) in &cases {
        pass &= report.best == *want;
        parts.push(format!("{name} -> {}", report.best));
    }

    // the prime-pool index is an integer ⌈log2 3k⌉, so the log-log shape is
    // checked as a positive-slope fit within one bit rather than by SSE rank
    let dfa = Arc::new(rev(&lang("ab*", "ab", 'b')));
    let index_bits: Vec<f64> = ns
        .iter()
        .map(|&n| ModPrime::new(dfa.clone(), n, 0).index_bits() as f64)
        .collect();
    let fits = crate::harness::fit_shapes(&ns, &index_bits);
    let best = crate::harness::best_shape(&fits, &index_bits);
    let loglog = fits.iter().find(|f| f.shape == Shape::LogLog).expect("fitted");
    let index_ok = loglog.slope > 0.0 && loglog.max_residual < 1.0 && !matches!(best, Shape::Constant | Shape::Linear);
    pass &= index_ok;
    let sse: Vec<String> = fits.iter().map(|f| format!("{}: {:.3}", f.shape, f.sse)).collect();
    parts.push(format!(
        "mod_prime index bits {:?}: log log fit slope {:.3}, max residual {:.3} bits, best {best} (SSE {})",
        index_bits.iter().map(|&b| b as u64).collect::<Vec<_>>(),
        loglog.slope,
        loglog.max_residual,
        sse.join(", ")
    ));
    Ok((pass, parts.join("; ")))
}

fn witness_soundness() -> Outcome {
    let mut total = 0;
    let mut failures = Vec::new();
    for (name, pattern, _) in GOLDENS {
        let d = lang(pattern, "abc", 'a');
        let c = class_flags(&d);
        match validate_failed_classes(&d, ClassId::ALL.map(|id| c.get(id))) {
            Ok(k) => total += k,
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    Ok((
        failures.is_empty(),
        format!("{total} membership obligations checked over exponents 0..5 {failures:?}"),
    ))
}

fn amplification(execution: Execution) -> Outcome {
    let ab = Alphabet::from_chars("ab").expect("fixed");
    let k = amplification_copies(0.4, 1.0 / 3.0)?;
    let scan = reference::amplification_copies_by_scan(0.4, 1.0 / 3.0);
    let l = lang("ab*", "ab", 'b');
    let r = rev(&l);
    let n = 32;
    let child = loglog_suffix_free_swa(&r, n)?;
    let amplified = amplified_loglog(&r, n, 1.0 / 3.0)?;
    let mut pass = k == 133 && scan == 133;
    let (mut child_max, mut amp_max) = (0.0f64, 0.0f64);
    for (j, spec) in loglog_streams(n, 11).iter().enumerate() {
        let stream = spec.generate(&ab)?;
        let cfg = TrialConfig::new(10_000, 1.0 / 3.0, derive_seed(110, j as u64)).execution(execution);
        let c = estimate_errors(&child, &l, &stream, &cfg)?;
        let a = estimate_errors(&amplified, &l, &stream, &cfg)?;
        pass &= verify_bounds(&c, Bound::InstantError(0.4)).pass;
        pass &= verify_bounds(&a, Bound::InstantError(1.0 / 3.0)).pass;
        child_max = child_max.max(c.max_error());
        amp_max = amp_max.max(a.max_error());
    }
    Ok((
        pass,
        format!("k = {k} (scan {scan}); n = {n}: child max ê {child_max:.4}, amplified max ê {amp_max:.4}"),
    ))
}
