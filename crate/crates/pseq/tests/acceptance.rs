//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use pseq::format::parse_stream;
use pseq::spectrum::{correlation_spectrum_fft, evaluate, FFT_TOLERANCE};
use pseq_core::analysis::{
    balance_verdict, bn_convolution, correlation_spectrum_exact, difference_profile,
    is_ideal_two_level, multiplicity_profile, near_constant_check, shift_correlation_exact,
    sum_magnitude_sq, BalanceVerdict, NearConstantVerdict,
};
use pseq_core::search::{search_itla, SearchSpec};
use pseq_core::{find_primitive_poly, mseq_generate, Sequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MSEQ_PARAMS: [(u32, usize); 8] = [
    (2, 2),
    (2, 3),
    (2, 4),
    (2, 5),
    (3, 2),
    (3, 3),
    (5, 2),
    (7, 2),
];
const RANDOM_SEED: u64 = 0x5eed_2024;
const RANDOM_COUNT: usize = 100;
const RANDOM_MAX_PERIOD: usize = 10_000;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn mseq(p: u32, m: usize) -> Sequence {
    let ctx = find_primitive_poly(p, m).expect("primitive polynomial exists");
    mseq_generate(&ctx).expect("period within limits")
}

fn search(p: u32, n: usize, prune: bool) -> Vec<Sequence> {
    let spec = SearchSpec {
        prune_balance: prune,
        ..SearchSpec::new(p, n)
    };
    search_itla(&spec).expect("search within budget").sequences
}

fn constant_shift(a: &Sequence, c: u32) -> Sequence {
    a.constant_shift(0, c).expect("c below p")
}

fn m_sequences() -> Vec<Sequence> {
    MSEQ_PARAMS.iter().map(|&(p, m)| mseq(p, m)).collect()
}

/// The searches named by the search criterion, keyed by `(p, N)`.
fn listed_searches() -> BTreeMap<(u32, usize), Vec<Sequence>> {
    [(2, 3), (2, 5), (2, 7), (2, 9), (3, 8)]
        .into_iter()
        .map(|(p, n)| ((p, n), search(p, n, true)))
        .collect()
}

fn closed_under(set: &[Sequence], p: u32, constant_shifts: &[u32]) -> bool {
    let members: BTreeSet<&Sequence> = set.iter().collect();
    set.iter().all(|a| {
        members.contains(&a.cyclic_shift(1))
            && constant_shifts
                .iter()
                .all(|&c| members.contains(&constant_shift(a, c % p)))
    })
}

fn c1_mseq_family() -> Outcome {
    for ((p, m), a) in MSEQ_PARAMS.iter().zip(m_sequences()) {
        let verdict = is_ideal_two_level(&a);
        ensure(verdict.itla && !verdict.degenerate, || {
            format!("({p},{m}) fails at shift {:?}", verdict.first_failing_shift)
        })?;
        let t = u64::from(*p).pow(*m as u32 - 1);
        let balance = balance_verdict(&multiplicity_profile(&a));
        ensure(
            balance == BalanceVerdict::AlmostBalanced { exceptional: 0, t },
            || format!("({p},{m}) balance {balance:?}, want exceptional 0 and t {t}"),
        )?;
        ensure(multiplicity_profile(&a).counts()[0] == t - 1, || {
            format!("({p},{m}) zero count")
        })?;
    }
    Ok(format!("{} m-sequences", MSEQ_PARAMS.len()))
}

fn c2_sum_magnitude(searches: &BTreeMap<(u32, usize), Vec<Sequence>>) -> Outcome {
    let mut checked = 0;
    for a in m_sequences().iter().chain(searches.values().flatten()) {
        let s = sum_magnitude_sq(a);
        ensure(s.eq_int(1), || format!("{a:?}: |sum|^2 = {s}"))?;
        checked += 1;
    }
    Ok(format!("{checked} sequences"))
}

fn c3_constant_shift_family() -> Outcome {
    let mut members = 0;
    for a in m_sequences() {
        let spectrum = correlation_spectrum_exact(&a);
        for c in 0..a.p() {
            let b = constant_shift(&a, c);
            ensure(is_ideal_two_level(&b).itla, || {
                format!("{a:?} + {c} not ideal")
            })?;
            let exceptional = balance_verdict(&multiplicity_profile(&b)).exceptional();
            ensure(exceptional == Some(c), || {
                format!("{a:?} + {c}: exceptional {exceptional:?}")
            })?;
            ensure(correlation_spectrum_exact(&b) == spectrum, || {
                format!("{a:?} + {c}: spectrum changed")
            })?;
            members += 1;
        }
    }
    Ok(format!("{members} family members"))
}

/// Every ITLA sequence the suite touches, excluding period 1 where the
/// property is vacuous.
fn itla_corpus(
    searches: &BTreeMap<(u32, usize), Vec<Sequence>>,
    binary: &[Vec<Sequence>],
) -> Vec<Sequence> {
    let mut corpus: Vec<Sequence> = Vec::new();
    for a in m_sequences() {
        corpus.extend((0..a.p()).map(|c| constant_shift(&a, c)));
    }
    corpus.extend(searches.values().flatten().cloned());
    corpus.extend(binary.iter().flatten().cloned());
    corpus.sort();
    corpus.dedup();
    corpus.retain(|a| a.period() > 1);
    corpus
}

fn c4_difference_shape(corpus: &[Sequence], binary: &[Vec<Sequence>]) -> Outcome {
    for a in corpus {
        ensure(is_ideal_two_level(a).itla, || {
            format!("{a:?} in corpus is not ideal")
        })?;
        let (p, n) = (a.p() as usize, a.period());
        ensure((n + 1) % p == 0, || format!("{a:?}: N not -1 mod p"))?;
        let t = ((n + 1) / p) as u64;
        for k in 1..n {
            let d = difference_profile(a, k).expect("shift in range").d;
            ensure(d[0] == t - 1 && d[1..].iter().all(|&x| x == t), || {
                format!("{a:?} shift {k}: differences {d:?}, t {t}")
            })?;
        }
    }
    let periods: Vec<usize> = binary
        .iter()
        .filter(|found| !found.is_empty())
        .map(|found| found[0].period())
        .collect();
    ensure(periods.iter().all(|n| n % 4 == 3), || {
        format!("binary periods {periods:?}")
    })?;
    ensure(!periods.is_empty(), || "no binary periods found".into())?;
    Ok(format!(
        "{} sequences; binary periods {periods:?}",
        corpus.len()
    ))
}

/// Unpruned binary searches at periods 2..=15.
fn binary_periods() -> Vec<Vec<Sequence>> {
    (2..=15).map(|n| search(2, n, false)).collect()
}

fn c5_search_oracle(generated: &Sequence) -> Outcome {
    let found = listed_searches();
    for (&(p, n), set) in &found {
        ensure(search(p, n, false) == *set, || {
            format!("({p},{n}) pruned and unpruned differ")
        })?;
    }
    let count = |key| found[&key].len();
    ensure(count((2, 3)) == 6, || {
        format!("(2,3) found {}", count((2, 3)))
    })?;
    ensure(count((2, 5)) == 0 && count((2, 9)) == 0, || {
        "(2,5) or (2,9) nonempty".into()
    })?;
    let b7 = &found[&(2, 7)];
    ensure(!b7.is_empty() && closed_under(b7, 2, &[1]), || {
        "(2,7) empty or not closed".into()
    })?;
    let t8 = &found[&(3, 8)];
    ensure(t8.contains(generated), || {
        "(3,8) misses the m-sequence".into()
    })?;
    ensure(closed_under(t8, 3, &[1, 2]), || "(3,8) not closed".into())?;
    Ok(format!(
        "(2,7) {} sequences, (3,8) {} sequences",
        b7.len(),
        t8.len()
    ))
}

/// Direct evaluation of both circular sums followed by inspection of the
/// value counts.
fn near_constant_oracle(values: &[u64]) -> Option<(usize, u64, i8)> {
    let k = values.len();
    let sum = |step: usize| -> i64 {
        (0..k)
            .map(|n| (values[n] as i64 - values[(n + step) % k] as i64).pow(2))
            .sum()
    };
    if sum(1) != 2 || (k >= 4 && sum(2) != 2) {
        return None;
    }
    if k == 2 {
        return Some((1, values[0], if values[1] > values[0] { 1 } else { -1 }));
    }
    let mut by_value = BTreeMap::<u64, Vec<usize>>::new();
    for (i, &v) in values.iter().enumerate() {
        by_value.entry(v).or_default().push(i);
    }
    let (&base, _) = by_value.iter().find(|(_, idx)| idx.len() == k - 1)?;
    let (&odd, idx) = by_value.iter().find(|(_, idx)| idx.len() == 1)?;
    (odd.abs_diff(base) == 1).then(|| (idx[0], base, if odd > base { 1 } else { -1 }))
}

fn c6_near_constant() -> Outcome {
    ensure(near_constant_check(&[3]).is_err(), || {
        "length 1 accepted".into()
    })?;
    let (mut total, mut accepted) = (0usize, 0usize);
    for k in 2..=6u32 {
        for code in 0..6u64.pow(k) {
            let tuple: Vec<u64> = (0..k).map(|i| code / 6u64.pow(i) % 6 + 1).collect();
            let got = match near_constant_check(&tuple).map_err(|e| format!("{tuple:?}: {e}"))? {
                NearConstantVerdict::Exceptional { index, base, sign } => Some((index, base, sign)),
                NearConstantVerdict::Violated { .. } => None,
                NearConstantVerdict::NotNearConstant => {
                    return Err(format!("{tuple:?}: sums hold without an exceptional entry"))
                }
            };
            let want = near_constant_oracle(&tuple);
            ensure(got == want, || {
                format!("{tuple:?}: got {got:?}, oracle {want:?}")
            })?;
            total += 1;
            accepted += got.is_some() as usize;
        }
    }
    Ok(format!("{total} tuples, {accepted} accepted"))
}

fn c7_fft_cross_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let primes = [2u32, 3, 5, 7];
    let mut worst = 0.0f64;
    let mut longest = 0;
    for i in 0..RANDOM_COUNT {
        let p = primes[i % primes.len()];
        let n = if i < 4 {
            RANDOM_MAX_PERIOD
        } else {
            rng.gen_range(1..=RANDOM_MAX_PERIOD)
        };
        let a = Sequence::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect()).expect("valid");
        let fft = correlation_spectrum_fft(&a);
        for (k, value) in fft.iter().enumerate() {
            let exact = evaluate(&shift_correlation_exact(&a, k).expect("shift in range"));
            let dev = (value - exact).norm();
            worst = worst.max(dev);
            ensure(dev <= FFT_TOLERANCE, || {
                format!("p {p} N {n} shift {k}: deviation {dev:e}")
            })?;
        }
        longest = longest.max(n);
    }
    Ok(format!(
        "{RANDOM_COUNT} sequences up to N {longest}, max deviation {worst:.1e}"
    ))
}

fn c8_bn_identity(corpus: &[Sequence]) -> Outcome {
    for a in corpus {
        let profile = multiplicity_profile(a);
        let b = bn_convolution(&profile);
        let squares: u64 = profile.counts().iter().map(|m| m * m).sum();
        let shifts: &[usize] = if a.p() == 2 { &[1] } else { &[1, 2] };
        for &j in shifts {
            ensure(squares == b[j] + 1, || {
                format!("{a:?}: sum mu^2 {squares}, B_{j} {}", b[j])
            })?;
        }
    }
    Ok(format!("{} sequences", corpus.len()))
}

fn run_cli(args: &[&str], no_timing: bool) -> Result<Vec<u8>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pseq"));
    cmd.args(args)
        .env_remove("PSEQ_JOBS")
        .env_remove("PSEQ_NO_TIMING");
    if no_timing {
        cmd.env("PSEQ_NO_TIMING", "1");
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?} exited with {:?}", out.status.code())
    })?;
    let mut bytes = out.stdout;
    bytes.extend_from_slice(b"\0");
    bytes.extend(out.stderr);
    Ok(bytes)
}

fn without_timing(stdout_and_stderr: &[u8]) -> Result<String, String> {
    let stdout = stdout_and_stderr
        .split(|&b| b == 0)
        .next()
        .unwrap_or_default();
    let text = String::from_utf8(stdout.to_vec()).map_err(|e| e.to_string())?;
    let (mut header, records) = parse_stream(&text).map_err(|e| e.to_string())?;
    header
        .as_object_mut()
        .ok_or("header is not an object")?
        .remove("elapsed_ms");
    Ok(format!("{header}{records:?}"))
}

fn c9_determinism() -> Outcome {
    let searches: [&[&str]; 3] = [
        &["search", "--p", "3", "--N", "8"],
        &["search", "--p", "2", "--N", "7", "--canonical"],
        &["search", "--p", "2", "--N", "15"],
    ];
    for args in searches {
        let one = [args, &["--jobs", "1"]].concat();
        let eight = [args, &["--jobs", "8"]].concat();
        ensure(run_cli(&one, true)? == run_cli(&eight, true)?, || {
            format!("{args:?} differs by jobs")
        })?;
        let timed = (
            without_timing(&run_cli(&one, false)?)?,
            without_timing(&run_cli(&eight, false)?)?,
        );
        ensure(timed.0 == timed.1, || {
            format!("{args:?} differs beyond elapsed_ms")
        })?;
    }
    for args in [
        &["generate", "--p", "3", "--m", "4"][..],
        &["generate", "--p", "7", "--m", "2", "--shift-to", "3"],
    ] {
        ensure(run_cli(args, false)? == run_cli(args, false)?, || {
            format!("{args:?} not reproducible")
        })?;
    }
    Ok("search --jobs 1 vs 8 byte-identical with timing suppressed; generate reproducible".into())
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Option<Duration>,
}

fn report(criterion: Criterion, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    let over = criterion.limit.filter(|&limit| elapsed >= limit);
    let (pass, detail) = match (&outcome, over) {
        (Ok(detail), None) => (true, detail.clone()),
        (Ok(detail), Some(limit)) => (false, format!("{detail}; exceeded {limit:?}")),
        (Err(detail), _) => (false, detail.clone()),
    };
    let limit = criterion
        .limit
        .map_or_else(String::new, |l| format!(" / limit {}s", l.as_secs()));
    println!(
        "{} [{}] {}: {} ({:.3}s{})",
        if pass { "PASS" } else { "FAIL" },
        criterion.id,
        criterion.title,
        detail,
        elapsed.as_secs_f64(),
        limit,
    );
    pass
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let searches = listed_searches();
    let binary = binary_periods();
    let corpus = itla_corpus(&searches, &binary);

    let results = [
        report(
            Criterion {
                id: 1,
                title: "m-sequences are ideal and almost balanced",
                limit: secs(5),
            },
            c1_mseq_family,
        ),
        report(
            Criterion {
                id: 2,
                title: "squared magnitude of the sum is exactly 1",
                limit: None,
            },
            || c2_sum_magnitude(&searches),
        ),
        report(
            Criterion {
                id: 3,
                title: "constant-shift family",
                limit: None,
            },
            c3_constant_shift_family,
        ),
        report(
            Criterion {
                id: 4,
                title: "difference profile shape and binary periods",
                limit: None,
            },
            || c4_difference_shape(&corpus, &binary),
        ),
        report(
            Criterion {
                id: 5,
                title: "exhaustive search oracle",
                limit: secs(60),
            },
            || c5_search_oracle(&mseq(3, 2)),
        ),
        report(
            Criterion {
                id: 6,
                title: "near-constant checker vs brute force",
                limit: secs(10),
            },
            c6_near_constant,
        ),
        report(
            Criterion {
                id: 7,
                title: "FFT spectrum vs exact within 1e-6",
                limit: secs(60),
            },
            c7_fft_cross_check,
        ),
        report(
            Criterion {
                id: 8,
                title: "sum of squared multiplicities minus B_j",
                limit: None,
            },
            || c8_bn_identity(&corpus),
        ),
        report(
            Criterion {
                id: 9,
                title: "deterministic CLI output",
                limit: None,
            },
            c9_determinism,
        ),
    ];

    let failed = results.iter().filter(|&&pass| !pass).count();
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
