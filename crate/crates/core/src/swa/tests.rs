use std::sync::Arc;

use super::*;
use crate::automata::{combine, dfa_from_regex, last_n, minimize, reverse, Alphabet, AtomTag, BoolOp, Dfa, Symbol};
use crate::reference::{self, words_up_to};

fn lang(pattern: &str, alphabet: &str, pad: char) -> Dfa {
    let a = Alphabet::from_chars(alphabet).unwrap();
    minimize(&dfa_from_regex(pattern, &a).unwrap())
        .with_pad_char(pad)
        .unwrap()
}

fn rev(d: &Dfa) -> Dfa {
    minimize(&reverse(d))
}

fn enc(d: &Dfa, w: &str) -> Vec<Symbol> {
    d.alphabet().encode(w).unwrap()
}

fn run(f: &Factory, seed: u64, stream: &[Symbol]) -> bool {
    *f.transcript(seed, stream).last().unwrap()
}

fn acceptance_rate(f: &Factory, stream: &[Symbol], trials: u64, master: u64) -> f64 {
    (0..trials).filter(|&i| run(f, derive_seed(master, i), stream)).count() as f64 / trials as f64
}

fn direct(d: &Dfa, n: usize, stream: &[Symbol]) -> bool {
    d.accepts(&last_n(n, stream, d.pad()))
}

#[test]
fn exact_oracle_examples() {
    let l = lang("(a|b)*a", "ab", 'a');
    // window "aab" ends in b
    let l3 = exact_oracle(&l, 3);
    assert!(!run(&l3, 0, &enc(&l, "ab")));
    assert!(run(&l3, 0, &enc(&l, "ba")));
    assert!(!run(&exact_oracle(&l, 2), 0, &enc(&l, "b")));
    let empty = exact_oracle(&l, 0);
    assert!(empty.transcript(0, &enc(&l, "abab")).iter().all(|&x| !x));
    assert_eq!(l3.instance(0).space_bits(), 3);
}

#[test]
fn exact_oracle_window_tracks_stream() {
    let l = lang("(a|b|c)*ab", "abc", 'c');
    let mut o = ExactOracle::new(Arc::new(l.clone()), 5);
    let stream = enc(&l, "abcabbacabcba");
    for (t, &a) in stream.iter().enumerate() {
        o.step(a);
        assert_eq!(o.window(), last_n(5, &stream[..=t], l.pad()));
        assert_eq!(o.query(), direct(&l, 5, &stream[..=t]));
    }
}

#[test]
fn path_summary_examples() {
    // L = Σ*a over {a,b} with pad b; L^R = aΣ*
    let l = lang("(a|b)*a", "ab", 'b');
    let r = Arc::new(rev(&l));
    let mut s = PathSummary::new(r.clone(), 5, QueryMode::AtMostN);
    s.step(1);
    assert_eq!(s.initial_value(), None);
    s.step(0);
    assert_eq!(s.initial_value(), Some(1));
    assert!(s.query());
    for q in r.final_states() {
        assert_eq!(s.values()[q], 0);
    }
    assert_eq!(s.space_bits(), r.state_count() as u64 * 3);

    let ab = lang("ab*", "ab", 'b');
    let f = path_summary_swa(&rev(&ab), 4, QueryMode::ExactlyN);
    assert!(run(&f, 0, &enc(&ab, "babbb")));
    assert!(!run(&f, 0, &enc(&ab, "abbbb")));
    assert!(!run(&f, 0, &enc(&ab, "bbbbb")));
}

#[test]
fn path_summary_agrees_with_oracle_on_sample_languages() {
    for (pattern, mode) in [
        ("(a|b)*a", QueryMode::AtMostN),
        ("(a|b)*ab(a|b)*", QueryMode::AtMostN),
        ("(a|b)*bb", QueryMode::AtMostN),
        ("ab*", QueryMode::ExactlyN),
        ("ba*b", QueryMode::ExactlyN),
        ("abb|bab", QueryMode::ExactlyN),
    ] {
        for pad in ['a', 'b'] {
            let l = lang(pattern, "ab", pad);
            for n in 0..=4 {
                let ps = path_summary_swa(&rev(&l), n, mode);
                for w in words_up_to(2, 8) {
                    assert_eq!(run(&ps, 0, &w), direct(&l, n, &w), "{pattern} n={n} w={w:?}");
                }
            }
        }
    }
}

#[test]
fn bernoulli_point_laws() {
    // L = Σ*aΣ*, the stream a b^{k-1} puts the last a at distance k
    let l = lang("(a|b)*a(a|b)*", "ab", 'b');
    let r = rev(&l);
    for (n, k) in [(12usize, 12usize), (12, 6), (40, 80)] {
        let beta = 1.0 / (2.0 * n as f64);
        let f = bernoulli_swa(&r, n, beta).unwrap();
        let mut stream = vec![0];
        stream.extend(std::iter::repeat_n(1, k - 1));
        let rate = acceptance_rate(&f, &stream, 10_000, 7);
        let expected = (1.0 - beta).powi(k as i32);
        assert!((rate - expected).abs() <= 0.02, "n={n} k={k}: {rate} vs {expected}");
    }
    // no a at all: ℓ = ∞
    let f = bernoulli_swa(&r, 12, 1.0 / 24.0).unwrap();
    assert_eq!(acceptance_rate(&f, &[1; 30], 1000, 1), 0.0);
    assert_eq!(f.instance(0).space_bits(), 1);
}

#[test]
fn bernoulli_rejects_bad_beta() {
    let r = rev(&lang("(a|b)*a(a|b)*", "ab", 'b'));
    assert_eq!(
        bernoulli_swa(&r, 4, 1.5).unwrap_err(),
        SwaError::InvalidProbability(1.5)
    );
    assert!(bernoulli_swa(&r, 4, -0.1).is_err());
    // β = 0 keeps flags forever, β = 1 clears every non-final flag each step
    let zero = bernoulli_swa(&r, 4, 0.0).unwrap();
    assert!(run(&zero, 3, &[0, 1, 1, 1, 1, 1]));
    let one = bernoulli_swa(&r, 4, 1.0).unwrap();
    for w in words_up_to(2, 6) {
        assert!(!run(&one, 3, &w));
    }
}

#[test]
fn prime_pools() {
    assert_eq!(first_primes(9), vec![2, 3, 5, 7, 11, 13, 17, 19, 23]);
    assert_eq!(prime_pool_size(2), 3);
    assert_eq!(prime_pool_size(30), 9);
    assert_eq!(prime_pool_size(31), 12);
    assert_eq!(prime_pool_size(1), 3);
}

#[test]
fn mod_prime_accepts_exact_hits_for_every_prime() {
    let l = lang("ab*", "ab", 'b');
    let r = rev(&l);
    let n = 30;
    let f = mod_prime_swa(&r, n).unwrap();
    let mut stream = vec![0];
    stream.extend(std::iter::repeat_n(1, n - 1));
    let mut primes = std::collections::BTreeSet::new();
    for seed in 0..200 {
        let mut m = ModPrime::new(Arc::new(r.clone()), n, seed);
        for &a in &stream {
            m.step(a);
        }
        assert!(m.query());
        primes.insert(m.prime());
    }
    // every pool member is drawn
    assert_eq!(primes.len(), 9);
    assert!(run(&f, 0, &stream));
    assert_eq!(
        mod_prime_swa(&r, 0).unwrap_err(),
        SwaError::WindowTooSmall { n: 0, min: 1 }
    );
}

#[test]
fn loglog_conjunction_law() {
    let l = lang("ab*", "ab", 'b');
    let r = rev(&l);
    let n = 30;
    let f = loglog_suffix_free_swa(&r, n).unwrap();
    // ℓ = n + 6: the counter accepts iff p divides 6
    let mut stream = vec![0];
    stream.extend(std::iter::repeat_n(1, n + 5));
    let trials = 10_000u64;
    let (mut both, mut b_only, mut m_only) = (0u64, 0u64, 0u64);
    let dfa = Arc::new(minimize(&r));
    for i in 0..trials {
        let seed = derive_seed(11, i);
        both += u64::from(run(&f, seed, &stream));
        let mut b = Bernoulli::new(dfa.clone(), 1.0 / (2.0 * n as f64), derive_seed(seed, 0)).unwrap();
        let mut m = ModPrime::new(dfa.clone(), n, derive_seed(seed, 1));
        for &a in &stream {
            b.step(a);
            m.step(a);
        }
        b_only += u64::from(b.query());
        m_only += u64::from(m.query());
    }
    let t = trials as f64;
    let product = (b_only as f64 / t) * (m_only as f64 / t);
    assert!((both as f64 / t - product).abs() <= 0.02);
    assert!((m_only as f64 / t - 2.0 / 9.0).abs() <= 0.02);
}

#[test]
fn loglog_requires_suffix_free_and_falls_back_below_twelve() {
    let r = rev(&lang("(a|b)*a", "ab", 'b'));
    assert_eq!(loglog_suffix_free_swa(&r, 20).unwrap_err(), SwaError::NotSuffixFree);
    let ab = lang("ab*", "ab", 'b');
    let small = loglog_suffix_free_swa(&rev(&ab), LOGLOG_MIN_N - 1).unwrap();
    assert!(!small.is_randomized());
    for w in words_up_to(2, 8) {
        assert_eq!(run(&small, 0, &w), direct(&ab, LOGLOG_MIN_N - 1, &w));
    }
}

#[test]
fn solver_example_and_closed_form() {
    let p = solve_xi_epsilon(3, 0.5).unwrap();
    // independent root of (1-ξ²)/ξ = φ/(2|Q|) = 1/12 by bisection
    let (mut lo, mut hi) = (0.5f64, 1.0f64);
    for _ in 0..60 {
        let mid = (lo + hi) / 2.0;
        if (1.0 - mid * mid) / mid > 1.0 / 12.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((p.xi - hi).abs() < 1e-6, "{p:?}");
    assert!((p.xi - 0.9592).abs() < 1e-4);
    assert!(p.eps < 0.5 && p.eps > 0.49);
    assert!(p.eps.powf(p.xi) + p.eps - 1.0 > 0.0);
}

#[test]
fn solver_is_monotone_in_phi() {
    for q in [1usize, 2, 3, 5] {
        let mut last: Option<XiEpsilon> = None;
        for phi in [0.5, 0.2, 0.1, 0.05] {
            let p = solve_xi_epsilon(q, phi).unwrap();
            if let Some(prev) = last {
                assert!(p.xi > prev.xi);
                assert!(p.n1 >= prev.n1);
            }
            last = Some(p);
        }
    }
    assert!(solve_xi_epsilon(3, 0.0).is_err());
    assert!(solve_xi_epsilon(3, 1.0).is_err());
}

#[test]
fn amplification_count() {
    assert_eq!(amplification_copies(0.4, 1.0 / 3.0).unwrap(), 133);
    assert!(amplification_copies(0.5, 0.1).is_err());
    assert!(amplification_copies(0.3, 0.3).is_err());
}

#[test]
fn amplified_deterministic_child_is_unchanged() {
    let l = lang("(a|b)*ab", "ab", 'a');
    let child = exact_oracle(&l, 3);
    let amp = amplify(&child, 0.3, 0.1).unwrap();
    assert_eq!(
        amp.info().params["copies"],
        serde_json::json!(amplification_copies(0.3, 0.1).unwrap())
    );
    for w in words_up_to(2, 7) {
        assert_eq!(amp.transcript(5, &w), child.transcript(5, &w));
    }
}

#[test]
fn boolean_combine_of_exact_children() {
    let a = lang("(a|b)*a", "ab", 'b');
    let b = lang("(a|b)*b(a|b)", "ab", 'b');
    let and = combine(BoolOp::Intersection, &a, Some(&b)).unwrap();
    let n = 3;
    let comb = boolean_combine(
        vec![exact_oracle(&a, n), exact_oracle(&b, n)],
        Arc::new(|x: &[bool]| x[0] && x[1]),
    )
    .unwrap();
    let single = boolean_combine(vec![exact_oracle(&a, n)], Arc::new(|x: &[bool]| x[0])).unwrap();
    for w in words_up_to(2, 7) {
        assert_eq!(run(&comb, 0, &w), direct(&and, n, &w));
        assert_eq!(single.transcript(0, &w), exact_oracle(&a, n).transcript(0, &w));
    }
    assert_eq!(comb.instance(0).space_bits(), 2 * 2 * 3);
    assert_eq!(
        boolean_combine(
            vec![exact_oracle(&a, 2), exact_oracle(&b, 3)],
            Arc::new(|x: &[bool]| x[0])
        )
        .unwrap_err(),
        SwaError::WindowMismatch
    );
}

#[test]
fn space_cap_behaviour() {
    let l = lang("(a|b)*a", "ab", 'b');
    let child = exact_oracle(&l, 8);
    let roomy = space_cap(&child, 1000).unwrap();
    let w = enc(&l, "abbababbbaab");
    assert_eq!(roomy.transcript(0, &w), child.transcript(0, &w));
    let starved = space_cap(&child, 4).unwrap();
    assert!(starved.transcript(0, &w).iter().all(|&x| !x));
    assert!(child.transcript(0, &w).iter().any(|&x| x));
    assert_eq!(starved.instance(0).space_bits(), 1);
    assert_eq!(space_cap(&child, 0).unwrap_err(), SwaError::ZeroBudget);
}

#[test]
fn markov_cap_bound_on_prime_dependent_space() {
    // ModPrime's encoding depends on the drawn prime, so capping at μ times
    // the mean collapses with probability at most 1/μ.
    let r = rev(&lang("ab*", "ab", 'b'));
    let n = 1 << 12;
    let child = mod_prime_swa(&r, n).unwrap();
    let trials = 10_000u64;
    let mean = (0..trials)
        .map(|i| child.instance(derive_seed(3, i)).space_bits())
        .sum::<u64>() as f64
        / trials as f64;
    for mu in [1.05f64, 1.2] {
        let budget = (mu * mean).floor() as u64;
        let capped = space_cap(&child, budget).unwrap();
        let collapsed = (0..trials)
            .filter(|&i| {
                let s = capped.instance(derive_seed(4, i));
                s.space_bits() == 1
            })
            .count() as f64
            / trials as f64;
        let sigma = (1.0 / mu * (1.0 - 1.0 / mu) / trials as f64).sqrt();
        assert!(collapsed <= 1.0 / mu + 3.0 * sigma, "mu={mu}: {collapsed}");
    }
}

#[test]
fn trivial_reject_and_lb_direct() {
    let ab = lang("a*b", "ab", 'a');
    assert_eq!(minimize(&ab).state_count(), 3);
    let f = trivial_reject_swa(3, 60, 0.1, &ab).unwrap();
    assert_eq!(f.info().params["n0"], serde_json::json!(60));
    assert_eq!(f.info().algorithm, "trivial_reject");
    assert!(f.transcript(0, &enc(&ab, "aaab")).iter().all(|&x| !x));
    let below = trivial_reject_swa(3, 59, 0.1, &ab).unwrap();
    assert_eq!(below.info().params["fallback"], serde_json::json!("exact_oracle"));

    let sab = lang("(a|b)*ab", "ab", 'b');
    let lb = lb_direct_swa(&sab, 8, 1.0).unwrap();
    assert_eq!(lb.info().params["n0"], serde_json::json!(6));
    assert_eq!(lb.instance(0).space_bits(), 2);
    for w in words_up_to(2, 10) {
        let t = lb.transcript(0, &w);
        for i in 0..=w.len() {
            // only false positives
            if direct(&sab, 8, &w[..i]) {
                assert!(t[i]);
            }
        }
    }
}

#[test]
fn const_left_ideal_dispatch() {
    let l = lang("(a|b|c)*a(a|b|c)*", "abc", 'b');
    let r = rev(&l);
    let p = solve_xi_epsilon(r.state_count(), 0.1).unwrap();
    let small = const_left_ideal_swa(&r, p.n1 - 1, 0.1).unwrap();
    assert_eq!(small.info().params["fallback"], serde_json::json!("exact_oracle"));
    let big = const_left_ideal_swa(&r, p.n1, 0.1).unwrap();
    assert!(big.is_randomized());
    assert_eq!(big.info().space_bits_max, 1);
    assert_eq!(
        const_left_ideal_swa(&rev(&lang("a*b", "abc", 'b')), 200, 0.1).unwrap_err(),
        SwaError::NotLeftIdeal
    );
    assert_eq!(
        const_left_ideal_swa(&rev(&lang("", "abc", 'b')), 200, 0.1).unwrap_err(),
        SwaError::EmptyLanguage
    );
}

#[test]
fn suffix_comparator_agrees_exhaustively() {
    let a = Alphabet::from_chars("ab").unwrap();
    let l = minimize(&dfa_from_regex("(a|b)*a", &a).unwrap());
    let spec = LanguageSpec::leaf(l.clone(), AtomTag::SuffixPattern("a".into()));
    for setting in [
        Setting::DetZero,
        Setting::RandZero,
        Setting::DetFailure(0.1),
        Setting::RandFailure(0.1),
    ] {
        let c = compile(&spec, setting).unwrap();
        for n in 0..=4 {
            let f = c.factory(n).unwrap();
            assert_eq!(f.info().algorithm, "suffix_comparator");
            for w in words_up_to(2, 8) {
                assert_eq!(run(&f, 0, &w), direct(&l, n, &w));
            }
        }
    }
}

#[test]
fn compile_dispatch_table() {
    let abc = "abc";
    let li = LanguageSpec::leaf(lang("(a|b|c)*a(a|b|c)*", abc, 'b'), AtomTag::LeftIdeal);
    let f = compile(&li, Setting::DetZero).unwrap().factory(16).unwrap();
    assert_eq!(f.info().algorithm, "path_summary");
    assert!(f.info().space_bits_max <= 2 * ceil_log2(19));
    assert_eq!(
        compile(&li, Setting::RandFailure(0.1))
            .unwrap()
            .factory(4096)
            .unwrap()
            .info()
            .algorithm,
        "const_left_ideal"
    );

    let pf = LanguageSpec::negate(LanguageSpec::leaf(lang("a*b", abc, 'a'), AtomTag::PrefixFree));
    let f = compile(&pf, Setting::DetFailure(0.2)).unwrap().factory(64).unwrap();
    assert_eq!(f.info().children[0].algorithm, "trivial_reject");
    // the negated constant reject accepts every window
    assert!(f.transcript(0, &[0, 1, 2, 1]).iter().all(|&x| x));
    let zero = compile(&pf, Setting::DetZero).unwrap().factory(8).unwrap();
    assert!(!zero.info().notes.is_empty());

    let sf = LanguageSpec::leaf(lang("ab*", abc, 'b'), AtomTag::SuffixFree);
    assert_eq!(
        compile(&sf, Setting::DetZero)
            .unwrap()
            .factory(16)
            .unwrap()
            .info()
            .algorithm,
        "path_summary"
    );
    let rz = compile(&sf, Setting::RandZero).unwrap();
    let f = rz.factory(16).unwrap();
    assert_eq!(f.info().algorithm, "amplify");
    assert_eq!(f.info().params["copies"], serde_json::json!(133));
    assert!((rz.error_threshold() - 1.0 / 3.0).abs() < 1e-12);

    let lb = LanguageSpec::leaf(lang("(a|b|c)*ab", abc, 'c'), AtomTag::BifixFreeLeftIdeal);
    assert_eq!(
        compile(&lb, Setting::DetFailure(0.5))
            .unwrap()
            .factory(64)
            .unwrap()
            .info()
            .algorithm,
        "lb_direct"
    );

    let len = LanguageSpec::leaf(lang("((a|b|c)(a|b|c))*", abc, 'c'), AtomTag::LengthMod(2, 0));
    let c = compile(&len, Setting::DetZero).unwrap();
    assert!(c.factory(4).unwrap().instance(0).query());
    assert!(!c.factory(5).unwrap().instance(0).query());
}

#[test]
fn compile_rejects_wrong_tags() {
    let spec = LanguageSpec::leaf(lang("a*b", "ab", 'a'), AtomTag::LeftIdeal);
    assert_eq!(
        compile(&spec, Setting::DetZero).unwrap_err(),
        SwaError::TagMismatch {
            leaf: 0,
            tag: "left-ideal".into()
        }
    );
    let mixed = LanguageSpec::And(vec![
        LanguageSpec::leaf(lang("(a|b)*a", "ab", 'a'), AtomTag::LeftIdeal),
        LanguageSpec::leaf(lang("(a|b|c)*a", "abc", 'a'), AtomTag::LeftIdeal),
    ]);
    assert_eq!(
        compile(&mixed, Setting::DetZero).unwrap_err(),
        SwaError::AlphabetMismatch
    );
}

#[test]
fn compiled_boolean_spec_matches_truth() {
    let text = r#"{
        "op": "and", "alphabet": "ab", "pad": "b",
        "children": [
            {"op": "leaf", "dfa": "(a|b)*a(a|b)*", "tag": "left-ideal"},
            {"op": "not", "children": [{"op": "leaf", "regex": "ab*", "tag": "suffix-free"}]},
            {"op": "leaf", "dfa": "(a|b)*b", "tag": {"suffix-pattern": "b"}}
        ]
    }"#;
    let spec = LanguageSpec::from_json_str(text, None).unwrap();
    let c = compile(&spec, Setting::DetZero).unwrap();
    assert_eq!(c.leaf_count(), 3);
    let truth = c.truth_dfa();
    for n in 0..=4 {
        let f = c.factory(n).unwrap();
        for w in words_up_to(2, 8) {
            assert_eq!(run(&f, 0, &w), direct(&truth, n, &w), "n={n} {w:?}");
        }
    }
    assert!(LanguageSpec::from_json_str(r#"{"op": "xor"}"#, None).is_err());
    assert!(LanguageSpec::from_json_str(r#"{"op": "leaf", "regex": "a"}"#, None).is_err());
}

#[test]
fn setting_parsing() {
    assert_eq!("det-zero".parse::<Setting>().unwrap(), Setting::DetZero);
    assert_eq!(
        "rand-failure=0.1".parse::<Setting>().unwrap(),
        Setting::RandFailure(0.1)
    );
    assert_eq!(
        "det-failure=0.25".parse::<Setting>().unwrap().to_string(),
        "det-failure=0.25"
    );
    assert!("det-failure".parse::<Setting>().is_err());
    assert!("rand-failure=0".parse::<Setting>().is_err());
    assert!("fast".parse::<Setting>().is_err());
}

#[test]
fn metadata_json_shape() {
    let l = lang("(a|b)*a", "ab", 'b');
    let j: serde_json::Value =
        serde_json::from_str(&path_summary_swa(&rev(&l), 16, QueryMode::AtMostN).info().to_json()).unwrap();
    for key in ["algorithm", "n", "params", "space_bits_max"] {
        assert!(j.get(key).is_some(), "{key}");
    }
    assert_eq!(j["n"], 16);
}

#[test]
fn seeds_are_reproducible() {
    let r = rev(&lang("ab*", "ab", 'b'));
    let f = amplified_loglog(&r, 20, 1.0 / 3.0).unwrap();
    let stream: Vec<Symbol> = (0..100).map(|i| u8::from(i % 7 != 0)).collect();
    assert_eq!(f.transcript(99, &stream), f.transcript(99, &stream));
    assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
    assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
}

#[test]
fn ceil_log2_values() {
    assert_eq!([0, 1, 2, 3, 4, 5, 8, 9].map(ceil_log2), [0, 0, 1, 2, 2, 3, 3, 4]);
}

mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::automata::tests::arb_dfa;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn path_summary_matches_brute_force(d in arb_dfa(4, 2), n in 0usize..=4) {
            let dfa = Arc::new(d);
            for w in words_up_to(dfa.num_symbols(), 8) {
                let mut s = PathSummary::new(dfa.clone(), n, QueryMode::AtMostN);
                for &a in &w {
                    s.step(a);
                }
                for q in 0..dfa.state_count() {
                    let v = s.values()[q];
                    match reference::path_summary_value(&dfa, q, &w, n + 1) {
                        Some(k) => prop_assert_eq!(v, k as u64),
                        None => prop_assert!(v > n as u64),
                    }
                }
            }
        }

        #[test]
        fn mod_prime_tracks_path_summary(d in arb_dfa(4, 2), seed in any::<u64>(), w in proptest::collection::vec(0u8..2, 0..40)) {
            let dfa = Arc::new(d);
            prop_assume!(w.iter().all(|&a| usize::from(a) < dfa.num_symbols()));
            let n = 50;
            let mut s = PathSummary::new(dfa.clone(), n, QueryMode::AtMostN);
            let mut m = ModPrime::new(dfa.clone(), n, seed);
            for &a in &w {
                s.step(a);
                m.step(a);
            }
            let p = u64::from(m.prime());
            match s.initial_value() {
                Some(v) if v <= n as u64 => prop_assert_eq!(m.initial_residue(), Some((v % p) as u32)),
                None => prop_assert_eq!(m.initial_residue(), None),
                _ => {}
            }
        }

        #[test]
        fn exact_oracle_matches_direct_recomputation(d in arb_dfa(5, 3), n in 0usize..7, w in proptest::collection::vec(0u8..3, 0..30)) {
            prop_assume!(w.iter().all(|&a| usize::from(a) < d.num_symbols()));
            let t = exact_oracle(&d, n).transcript(0, &w);
            for i in 0..=w.len() {
                prop_assert_eq!(t[i], direct(&d, n, &w[..i]));
            }
        }

        #[test]
        fn amplification_matches_scan(eps in 0.05f64..0.45, frac in 0.05f64..0.95) {
            let target = eps * frac;
            prop_assert_eq!(amplification_copies(eps, target).unwrap(), reference::amplification_copies_by_scan(eps, target));
        }

        #[test]
        fn solver_post_conditions(q in 1usize..8, phi in 0.01f64..0.99) {
            let p = solve_xi_epsilon(q, phi).unwrap();
            let qf = q as f64;
            prop_assert!(p.xi > 0.0 && p.xi < 1.0);
            prop_assert!((1.0 - p.xi) * qf * (1.0 + 1.0 / p.xi) < phi / 2.0);
            prop_assert!(p.eps > 0.0 && p.eps < 0.5);
            prop_assert!(p.eps.powf(p.xi) + p.eps - 1.0 > 0.0);
            let c = (1.0 / p.eps).ln();
            prop_assert!(p.n1 as f64 >= c.ceil());
            let holds = |n: usize| {
                let nf = n as f64;
                (1.0 - p.xi + 1.0 / nf) * qf * (1.0 + 1.0 / p.xi) <= phi
                    && 1.0 - p.eps <= (1.0 - c / nf).powf(p.xi * nf)
            };
            prop_assert!(holds(p.n1));
            prop_assert!(p.n1 as f64 <= c.ceil() || !holds(p.n1 - 1));
        }

        #[test]
        fn determinism_across_runs(seed in any::<u64>()) {
            let r = rev(&lang("ab*", "ab", 'b'));
            let f = loglog_suffix_free_swa(&r, 16).unwrap();
            let stream: Vec<Symbol> = (0..60).map(|i| u8::from(i % 5 != 1)).collect();
            prop_assert_eq!(f.transcript(seed, &stream), f.transcript(seed, &stream));
        }
    }
}
