use super::*;
use crate::automata::{dfa_from_regex, last_n, minimize, reverse, Alphabet, AtomTag, Dfa};
use crate::classify::WitnessPattern;
use crate::swa::{
    bernoulli_swa, compile, exact_oracle, loglog_suffix_free_swa, path_summary_swa, trivial_reject_swa, LanguageSpec,
    QueryMode, Setting,
};

fn lang(pattern: &str, alphabet: &str, pad: char) -> Dfa {
    let a = Alphabet::from_chars(alphabet).unwrap();
    minimize(&dfa_from_regex(pattern, &a).unwrap())
        .with_pad_char(pad)
        .unwrap()
}

fn rev(d: &Dfa) -> Dfa {
    minimize(&reverse(d))
}

fn ab() -> Alphabet {
    Alphabet::from_chars("ab").unwrap()
}

fn text(spec: &StreamSpec, alphabet: &Alphabet) -> String {
    alphabet.decode(&gen_stream(spec, alphabet).unwrap())
}

#[test]
fn literal_and_repeat_streams() {
    assert_eq!(text(&StreamSpec::literal("abab"), &ab()), "abab");
    assert_eq!(text(&StreamSpec::repeat("aaab", 5), &ab()), "aaabaaabaaabaaabaaab");
    assert_eq!(text(&"literal:ab+repeat:b:3".parse().unwrap(), &ab()), "abbbb");
    assert_eq!(
        gen_stream(&"literal:".parse().unwrap(), &ab()).unwrap(),
        Vec::<u8>::new()
    );
    assert!(matches!(
        gen_stream(&StreamSpec::literal("abc"), &ab()),
        Err(HarnessError::Automata(_))
    ));
    assert!("uniform:x".parse::<StreamSpec>().is_err());
    assert!("zigzag:3".parse::<StreamSpec>().is_err());
}

#[test]
fn uniform_streams_are_seeded() {
    let abc = Alphabet::from_chars("abc").unwrap();
    let s = "uniform:500:9".parse::<StreamSpec>().unwrap();
    let a = gen_stream(&s, &abc).unwrap();
    assert_eq!(a, gen_stream(&s, &abc).unwrap());
    assert_eq!(a.len(), 500);
    assert_ne!(a, gen_stream(&StreamSpec::uniform(500, 10), &abc).unwrap());
    for sym in 0..3u8 {
        let c = a.iter().filter(|&&x| x == sym).count();
        assert!((120..=220).contains(&c), "{c}");
    }
}

#[test]
fn stream_spec_json_round_trip() {
    let spec = StreamSpec::Concat(vec![
        StreamSpec::uniform(10, 3),
        StreamSpec::Witness(
            WitnessFamily::new(WitnessPattern::LogGap {
                u: "a".into(),
                x: "b".into(),
                y: "a".into(),
                z: "b".into(),
                case: 1,
            })
            .m(2)
            .i(3),
        ),
    ]);
    let json = serde_json::to_string(&spec).unwrap();
    assert_eq!(serde_json::from_str::<StreamSpec>(&json).unwrap(), spec);
    let dir = std::env::temp_dir().join(format!("slidewin-stream-{}.json", std::process::id()));
    std::fs::write(&dir, &json).unwrap();
    assert_eq!(StreamSpec::from_arg(&format!("@{}", dir.display())).unwrap(), spec);
    std::fs::remove_file(dir).unwrap();
}

#[test]
fn witness_family_expansions() {
    let linear = WitnessPattern::LinearGap {
        x0: "a".into(),
        u0: "b".into(),
        x1: "a".into(),
        u1: "a".into(),
        u: String::new(),
    };
    // α = 10: x1 u1 first, then x0 u0, then (x0 u0)^1
    let f = WitnessFamily::new(linear.clone()).alpha("10").i(1);
    assert_eq!(f.expand().unwrap(), "aaabab");
    assert!(WitnessFamily::new(linear).alpha("12").expand().is_err());

    let log = WitnessPattern::LogLogGap {
        u: "c".into(),
        x: "a".into(),
        y: "b".into(),
        z: "c".into(),
        case: 3,
    };
    assert_eq!(WitnessFamily::new(log).m(2).i(3).expand().unwrap(), "ccbaaac");

    let flin = WitnessPattern::FailureLinearGap {
        x: "ab".into(),
        y0: "a".into(),
        y1: "b".into(),
        z0: "c".into(),
        z1: "c".into(),
        u: "u".into(),
    };
    assert_eq!(WitnessFamily::new(flin).alpha("01").i(2).expand().unwrap(), "cacbuabab");

    let flog = WitnessPattern::FailureLogGap {
        u: "a".into(),
        v: "b".into(),
        w: "cc".into(),
        x: "dd".into(),
        case: 1,
    };
    assert_eq!(
        WitnessFamily::new(flog.clone()).m(3).i(2).expand().unwrap(),
        "ddddccbabab"
    );
    assert_eq!(WitnessFamily::new(flog).m(0).i(0).expand().unwrap(), "ccb");
}

#[test]
fn linear_gap_stream_encodes_alpha() {
    // windows starting at u_{α_k} are members exactly when α_k = 1
    let golden = lang("a(a|b|c)*", "abc", 'b');
    let w = crate::classify::extract_witness(&golden, crate::classify::ClassId::LiLen).unwrap();
    let WitnessPattern::LinearGap { x0, u0, .. } = &w else {
        panic!("{w:?}")
    };
    let block = x0.chars().count() + u0.chars().count();
    let alpha = "1101001";
    let i = 2;
    let stream = WitnessFamily::new(w.clone()).alpha(alpha).i(i).expand().unwrap();
    let syms = golden.alphabet().encode(&stream).unwrap();
    for (k, bit) in alpha.chars().enumerate() {
        // suffix starting at u_{α_k}
        let start = k * block + x0.chars().count();
        let member = golden.accepts(&syms[start..]);
        assert_eq!(member, bit == '1', "k={k} stream={stream}");
    }
}

#[test]
fn exact_oracle_has_no_error() {
    let l = lang("(a|b)*ab(a|b)*", "ab", 'a');
    let stream = gen_stream(&StreamSpec::uniform(300, 1), &ab()).unwrap();
    let r = estimate_errors(&exact_oracle(&l, 7), &l, &stream, &TrialConfig::new(5, 0.1, 0)).unwrap();
    assert!(r.errors.iter().all(|&e| e == 0.0));
    assert_eq!(r.failure_ratio, 0.0);
    assert_eq!(r.strict_error, 0.0);
    assert_eq!(r.errors.len(), 301);
    assert_eq!(r.space_max, 7);
    for t in 0..=300 {
        assert_eq!(r.truth[t], l.accepts(&last_n(7, &stream[..t], l.pad())));
    }
}

#[test]
fn reports_are_reproducible_across_schedules() {
    let l = lang("(a|b)*a(a|b)*", "ab", 'b');
    let f = bernoulli_swa(&rev(&l), 16, 1.0 / 32.0).unwrap();
    let stream = gen_stream(&"literal:a+repeat:b:40+uniform:60:2".parse().unwrap(), &ab()).unwrap();
    let cfg = TrialConfig::new(500, 0.2, 77);
    let base = estimate_errors(&f, &l, &stream, &cfg.execution(Execution::Sequential))
        .unwrap()
        .to_json();
    for exec in [Execution::Parallel, Execution::ParallelJobs(3), Execution::Sequential] {
        assert_eq!(
            estimate_errors(&f, &l, &stream, &cfg.execution(exec))
                .unwrap()
                .to_json(),
            base
        );
    }
    let other = estimate_errors(&f, &l, &stream, &TrialConfig::new(500, 0.2, 78))
        .unwrap()
        .to_json();
    assert_ne!(other, base);
}

#[test]
fn single_deterministic_run_matches_failure_definition() {
    // T = 1: failure ratio is the count of wrong instants over m + 1
    let l = lang("a*b", "ab", 'a');
    let n = 8;
    let f = trivial_reject_swa(3, n, 0.75, &l).unwrap();
    assert_eq!(f.info().params["n0"], serde_json::json!(8));
    let stream = gen_stream(&StreamSpec::repeat("aaaaaaab", 6), &ab()).unwrap();
    let r = estimate_errors(&f, &l, &stream, &TrialConfig::new(1, 0.0, 0)).unwrap();
    let wrong = (0..=stream.len())
        .filter(|&t| l.accepts(&last_n(n, &stream[..t], l.pad())))
        .count();
    assert_eq!(r.failure_ratio, wrong as f64 / (stream.len() + 1) as f64);
    assert_eq!(r.strict_error, 1.0);
}

#[test]
fn trivial_reject_periodic_failure_ratio() {
    let l = lang("a*b", "ab", 'a');
    let q = minimize(&l).state_count();
    for n in [64usize, 128] {
        let f = trivial_reject_swa(q, n, 0.1, &l).unwrap();
        let block = format!("{}b", "a".repeat(n - 1));
        let stream = gen_stream(&StreamSpec::repeat(&block, 8), &ab()).unwrap();
        let r = estimate_errors(&f, &l, &stream, &TrialConfig::new(1, 0.0, 0)).unwrap();
        let check = verify_bounds(&r, Bound::FailureRatio(2.0 * q as f64 / n as f64));
        assert!(check.pass, "{check:?}");
        assert_eq!(check.margin, 0.0);
        // exactly the instants ending in b are members
        assert_eq!(r.failure_ratio, 8.0 / (8 * n + 1) as f64);
    }
}

#[test]
fn bernoulli_error_at_full_distance() {
    // the single a exactly n back: a member, rejected w.p. 1 - (1-β)^n
    let l = lang("(a|b)*a(a|b)*", "ab", 'b');
    let n = 32;
    let f = bernoulli_swa(&rev(&l), n, 1.0 / (2.0 * n as f64)).unwrap();
    let stream = gen_stream(
        &StreamSpec::Concat(vec![StreamSpec::literal("a"), StreamSpec::repeat("b", n - 1)]),
        &ab(),
    )
    .unwrap();
    let r = estimate_errors(&f, &l, &stream, &TrialConfig::new(10_000, 0.4, 5)).unwrap();
    let expected = 1.0 - (1.0 - 1.0 / (2.0 * n as f64)).powi(n as i32);
    assert!((r.errors[n] - expected).abs() < 0.02, "{} vs {expected}", r.errors[n]);
    assert!(verify_bounds(&r, Bound::InstantError(0.4)).pass);
    assert_eq!(r.space_max, 1);
}

fn synthetic(errors: Vec<f64>, trials: u64, randomized: bool) -> TrialReport {
    let m = errors.len() - 1;
    TrialReport {
        n: 4,
        m,
        trials,
        threshold: 1.0 / 3.0,
        seed: 0,
        truth: vec![false; m + 1],
        failure_ratio: errors.iter().filter(|&&e| e > 1.0 / 3.0).count() as f64 / (m + 1) as f64,
        errors,
        strict_error: 0.0,
        space_max: 10,
        space_mean: 10.0,
        algorithm: crate::swa::AlgorithmInfo::new("synthetic", 4, 10).randomized(randomized),
    }
}

#[test]
fn verify_bounds_examples() {
    let zero = synthetic(vec![0.0; 20], 10_000, true);
    assert!(verify_bounds(&zero, Bound::InstantError(1.0 / 3.0)).pass);
    let mut e = vec![0.1; 20];
    e[7] = 0.5;
    let bad = synthetic(e, 10_000, true);
    let c = verify_bounds(&bad, Bound::InstantError(1.0 / 3.0));
    assert!(!c.pass);
    assert!((c.margin - 0.01414).abs() < 1e-4, "{}", c.margin);
    assert!(c.slack() < 0.0);
    assert!(verify_bounds(&bad, Bound::FailureRatio(0.05)).pass);
    assert!(!verify_bounds(&bad, Bound::FailureRatio(0.04)).pass);
    assert!(verify_bounds(&bad, Bound::Space(10)).pass);
    assert!(!verify_bounds(&bad, Bound::Space(9)).pass);
    // deterministic algorithms get no margin
    let det = synthetic(vec![0.0, 1.0 / 3.0 + 1e-9], 1, false);
    assert!(!verify_bounds(&det, Bound::InstantError(1.0 / 3.0)).pass);
    let json = serde_json::to_value(c).unwrap();
    for key in ["pass", "observed", "bound", "margin"] {
        assert!(json.get(key).is_some());
    }
}

#[test]
fn loglog_pre_amplification_bound() {
    let l = lang("ab*", "ab", 'b');
    let n = 64;
    let f = loglog_suffix_free_swa(&rev(&l), n).unwrap();
    let stream = gen_stream(
        &StreamSpec::Concat(vec![StreamSpec::literal("a"), StreamSpec::repeat("b", 5 * n - 1)]),
        &ab(),
    )
    .unwrap();
    let r = estimate_errors(&f, &l, &stream, &TrialConfig::new(10_000, 0.4, 1)).unwrap();
    let c = verify_bounds(&r, Bound::InstantError(0.4));
    assert!(c.pass, "{c:?}");
}

#[test]
fn doubling_trials_does_not_flake() {
    // bound exactly at the true error at ℓ = n: each check sits 3σ above
    let l = lang("(a|b)*a(a|b)*", "ab", 'b');
    let n = 16;
    let beta = 1.0 / (2.0 * n as f64);
    let f = bernoulli_swa(&rev(&l), n, beta).unwrap();
    let stream = gen_stream(
        &StreamSpec::Concat(vec![StreamSpec::literal("a"), StreamSpec::repeat("b", n - 1)]),
        &ab(),
    )
    .unwrap();
    let e0 = 1.0 - (1.0 - beta).powi(n as i32);
    let mut flips = 0;
    for seed in 0..20 {
        let small = estimate_errors(&f, &l, &stream, &TrialConfig::new(1000, e0, seed)).unwrap();
        let large = estimate_errors(&f, &l, &stream, &TrialConfig::new(2000, e0, seed)).unwrap();
        let (a, b) = (
            verify_bounds(&small, Bound::InstantError(e0)),
            verify_bounds(&large, Bound::InstantError(e0)),
        );
        if a.pass && !b.pass {
            flips += 1;
            // any miss stays within the margin shrink
            assert!(b.observed - e0 <= a.margin, "{a:?} {b:?}");
        }
    }
    assert!(flips <= 1, "{flips}");
}

#[test]
fn negated_prefix_free_failure_ratio() {
    let a = Alphabet::from_chars("ab").unwrap();
    let l = minimize(&dfa_from_regex("a*b", &a).unwrap());
    let spec = LanguageSpec::negate(LanguageSpec::leaf(l.clone(), AtomTag::PrefixFree));
    let c = compile(&spec, Setting::DetFailure(0.2)).unwrap();
    let truth = c.truth_dfa();
    for n in [32usize, 64] {
        let f = c.factory(n).unwrap();
        for spec in [
            StreamSpec::uniform(8 * n, 3),
            StreamSpec::repeat(&format!("{}b", "a".repeat(n - 1)), 8),
        ] {
            let stream = gen_stream(&spec, &a).unwrap();
            let r = estimate_errors(&f, &truth, &stream, &TrialConfig::new(1, 0.0, 0)).unwrap();
            assert!(
                verify_bounds(&r, Bound::FailureRatio(0.2)).pass,
                "n={n} ratio={}",
                r.failure_ratio
            );
        }
    }
}

#[test]
fn csv_has_one_row_per_instant() {
    let l = lang("(a|b)*a", "ab", 'b');
    let stream = gen_stream(&StreamSpec::literal("abba"), &ab()).unwrap();
    let r = estimate_errors(&exact_oracle(&l, 2), &l, &stream, &TrialConfig::new(1, 0.1, 0)).unwrap();
    let mut buf = Vec::new();
    r.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,error,truth");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[1], "0,0.0,false");
    assert_eq!(lines[2], "1,0.0,true");
}

#[test]
fn estimate_errors_rejects_bad_inputs() {
    let l = lang("(a|b)*a", "ab", 'b');
    let f = exact_oracle(&l, 2);
    assert!(matches!(
        estimate_errors(&f, &l, &[0, 1], &TrialConfig::new(0, 0.1, 0)),
        Err(HarnessError::NoTrials)
    ));
    assert!(matches!(
        estimate_errors(&f, &l, &[0, 2], &TrialConfig::new(1, 0.1, 0)),
        Err(HarnessError::ForeignSymbol(2))
    ));
}

#[test]
fn fit_shapes_on_exact_curves() {
    let ns = powers_of_two(4, 16);
    for shape in [Shape::Constant, Shape::LogLog, Shape::Log, Shape::Linear] {
        let ys: Vec<f64> = ns.iter().map(|&n| 3.0 + 2.0 * shape.eval(n)).collect();
        let fits = fit_shapes(&ns, &ys);
        assert_eq!(best_shape(&fits, &ys), shape);
        let own = fits.iter().find(|f| f.shape == shape).unwrap();
        assert!(own.sse < 1e-6);
        if shape != Shape::Constant {
            assert!((own.slope - 2.0).abs() < 1e-6);
        }
    }
    // decreasing data never picks a growing shape
    let ys: Vec<f64> = ns.iter().map(|&n| 100.0 - (n as f64).log2()).collect();
    assert_eq!(best_shape(&fit_shapes(&ns, &ys), &ys), Shape::Constant);
}

#[test]
fn growth_shapes_of_basic_algorithms() {
    let l = lang("(a|b)*a(a|b)*", "ab", 'b');
    let r = rev(&l);
    let ns = powers_of_two(4, 12);
    let probes = ProbeSet::uniform(8, 1, 0);
    let ps = measure_space_growth(|n| Ok(path_summary_swa(&r, n, QueryMode::AtMostN)), &ab(), &ns, &probes).unwrap();
    assert_eq!(ps.best, Shape::Log);
    let b = measure_space_growth(|n| bernoulli_swa(&r, n, 1.0 / (2.0 * n as f64)), &ab(), &ns, &probes).unwrap();
    assert_eq!(b.best, Shape::Constant);
    let ex = measure_space_growth(|n| Ok(exact_oracle(&l, n)), &ab(), &ns, &probes).unwrap();
    assert_eq!(ex.best, Shape::Linear);
    assert_eq!(ex.observed_max, ns.iter().map(|&n| n as u64).collect::<Vec<_>>());
    assert!(measure_space_growth(|n| Ok(exact_oracle(&l, n)), &ab(), &[8, 4], &probes).is_err());
}

#[test]
fn probe_sets_include_witness_families() {
    let golden = lang("a(a|b)*", "ab", 'b');
    let w = crate::classify::extract_witness(&golden, crate::classify::ClassId::LiLen).unwrap();
    let probes = ProbeSet::uniform(8, 1, 0).with_families(vec![w]);
    let streams = probes.streams(&ab(), 16).unwrap();
    assert_eq!(streams.len(), 2);
    assert_eq!(gen_stream(&streams[0], &ab()).unwrap().len(), 128);
    assert!(gen_stream(&streams[1], &ab()).unwrap().len() >= 32);
}
