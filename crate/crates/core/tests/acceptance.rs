//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use common::*;
use grapheme_fis::corpus::{compute_stats, parse_corpus_str, AnnotatedWord};
use grapheme_fis::data::{self, Resources};
use grapheme_fis::fuzzy::{
    defuzzify_centroid, Antecedent, FuzzyRule, InferenceEngine, LinguisticVariable,
    MembershipFunction, Shape, DEFAULT_DEFUZZ_STEP,
};
use grapheme_fis::mapper::{enumerate_segmentations, segment, GraphemeInventory};
use grapheme_fis::predictor::{build_fis, CountPredictor, PredictorParams};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, pass: String, fail: String) -> Outcome {
    if ok {
        Ok(pass)
    } else {
        Err(fail)
    }
}

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_grapheme"));
    cmd.env_remove(data::DATA_DIR_VAR);
    cmd
}

fn sample_path() -> String {
    format!("{}/data/sample_corpus.tsv", env!("CARGO_MANIFEST_DIR"))
}

fn engine_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let mut worst: f64 = 0.0;
    for _ in 0..25 {
        let k = rng.gen_range(1..=8);
        let mut sets = Vec::new();
        let mut params = Vec::new();
        for i in 0..k {
            let peak = rng.gen_range(1.0..14.0);
            let left = peak - rng.gen_range(0.05..3.0);
            let right = peak + rng.gen_range(0.05..3.0);
            sets.push((
                format!("o{i}"),
                MembershipFunction::triangular(left, peak, right).unwrap(),
            ));
            params.push((left, peak, right));
        }
        let mut alphas: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..1.0)).collect();
        alphas[0] = alphas[0].max(0.05);

        let input = LinguisticVariable::new(
            "x",
            (0.0, 1.0),
            vec![(
                "any".into(),
                MembershipFunction::triangular(0.0, 0.5, 1.0).unwrap(),
            )],
        )
        .unwrap();
        let output = LinguisticVariable::new("y", (1.0, 14.0), sets).unwrap();
        let rules = (0..k)
            .map(|i| {
                FuzzyRule::new(
                    vec![Antecedent::new("x", "any")],
                    Antecedent::new("y", format!("o{i}")),
                )
            })
            .collect();
        let engine = InferenceEngine::new(vec![input], output, rules, DEFAULT_DEFUZZ_STEP).unwrap();
        let got = defuzzify_centroid(&engine.aggregate(&alphas).unwrap()).unwrap();
        let want = centroid(1.0, 14.0, FINE_STEP, |x| {
            params
                .iter()
                .zip(&alphas)
                .map(|(&(l, p, r), &a)| tri(x, l, p, r).min(a))
                .fold(0.0, f64::max)
        })
        .unwrap();
        worst = worst.max((got - want).abs());
    }
    let elapsed = start.elapsed();
    check(
        worst <= 1e-3 && elapsed < Duration::from_secs(5),
        format!("25 configs, max |step 0.005 - step 5e-5| = {worst:.2e}, {elapsed:.2?}"),
        format!("max deviation {worst:.3e} (limit 1e-3), {elapsed:.2?} (limit 5 s)"),
    )
}

fn membership_analytics() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let mut problems = Vec::new();
    for _ in 0..200 {
        let m = rng.gen_range(-20.0..20.0);
        let s = rng.gen_range(0.05..8.0);
        let g = MembershipFunction::gaussian(m, s).unwrap();
        if g.evaluate(m) != 1.0 {
            problems.push(format!("gaussian({m},{s}) peak {}", g.evaluate(m)));
        }
        for x in [m - s, m + s] {
            if (g.evaluate(x) - (-0.5f64).exp()).abs() > 1e-12 {
                problems.push(format!("gaussian({m},{s}) at {x}: {}", g.evaluate(x)));
            }
        }
        let (a, b) = (m, m + s);
        let t = MembershipFunction::triangular(a - s, a, b).unwrap();
        if t.evaluate(a - s) != 0.0 || t.evaluate(a) != 1.0 || t.evaluate(b) != 0.0 {
            problems.push(format!("triangular({},{a},{b}) boundaries", a - s));
        }
        let z = MembershipFunction::z_shaped(a, b).unwrap();
        let sc = MembershipFunction::s_shaped(a, b).unwrap();
        let mid = 0.5 * (a + b);
        if z.evaluate(a) != 1.0 || z.evaluate(b) != 0.0 || (z.evaluate(mid) - 0.5).abs() > 1e-12 {
            problems.push(format!(
                "z({a},{b}): {} {} {}",
                z.evaluate(a),
                z.evaluate(mid),
                z.evaluate(b)
            ));
        }
        if sc.evaluate(a) != 0.0 || sc.evaluate(b) != 1.0 || (sc.evaluate(mid) - 0.5).abs() > 1e-12
        {
            problems.push(format!(
                "s({a},{b}): {} {} {}",
                sc.evaluate(a),
                sc.evaluate(mid),
                sc.evaluate(b)
            ));
        }
    }
    let shapes = [
        MembershipFunction::gaussian(4.2, 0.82).unwrap(),
        MembershipFunction::triangular(4.5, 5.0, 5.499).unwrap(),
        MembershipFunction::z_shaped(2.0, 3.3).unwrap(),
        MembershipFunction::s_shaped(15.0, 18.0).unwrap(),
    ];
    let mut probes = 0;
    for _ in 0..10_000 {
        let x = rng.gen_range(-50.0..50.0);
        let mf = &shapes[rng.gen_range(0..shapes.len())];
        let v = mf.evaluate(x);
        probes += 1;
        if !(0.0..=1.0).contains(&v) {
            problems.push(format!("{mf:?} at {x}: {v}"));
        }
    }
    check(
        problems.is_empty(),
        format!("200 random parameter sets exact at boundaries (Z/S midpoint within 1e-12), {probes} probes in [0,1]"),
        problems.join("; "),
    )
}

fn table_round_trip() -> Outcome {
    let params = PredictorParams::parse(data::PARAMS).map_err(|e| e.to_string())?;
    let engine = build_fis(&params).map_err(|e| e.to_string())?;
    let g3 = engine.inputs()[0].set("g3").map(|m| *m.shape());
    let g5 = engine.output().set("g5").map(|m| *m.shape());
    let want_g3 = Shape::Gaussian {
        mean: 4.202,
        sigma: 0.820,
    };
    let want_g5 = Shape::Triangular {
        left: 4.5,
        peak: 5.0,
        right: 5.499,
    };
    check(
        g3 == Some(want_g3) && g5 == Some(want_g5) && engine.rules().len() == 13,
        "built; characters g3 = gaussian(4.202, 0.820), output g5 = triangular(4.5, 5, 5.499), 13 rules".into(),
        format!("characters g3 {g3:?}, output g5 {g5:?}, {} rules", engine.rules().len()),
    )
}

fn mean_triples() -> Outcome {
    let params = PredictorParams::parse(data::PARAMS).unwrap();
    let predictor = CountPredictor::new(&params).unwrap();
    let oracle = FisOracle::new(data::PARAMS);
    let mut misses = Vec::new();
    let mut disagreements = Vec::new();
    for g in 2..=12u32 {
        let row = params.rows[&g];
        let triple = [0, 1, 2].map(|f| row.features[f].mean);
        let got = predictor.predict_values(triple).unwrap();
        let (oracle_crisp, oracle_rounded) =
            round_half_up_2dp(oracle.crisp(triple, FINE_STEP).unwrap());
        if oracle_rounded != got.rounded {
            disagreements.push(format!("g={g}: engine {got}, oracle {oracle_crisp:.2}"));
        }
        if got.rounded != g {
            misses.push(format!(
                "g={g} at {triple:?} -> {got} (oracle {oracle_crisp:.2})"
            ));
        }
    }
    check(
        misses.is_empty() && disagreements.is_empty(),
        "g = 2..12 each round to g; engine and fine-grid oracle agree".into(),
        [misses, disagreements].concat().join("; "),
    )
}

fn edges() -> Outcome {
    let predictor = CountPredictor::new(&PredictorParams::parse(data::PARAMS).unwrap()).unwrap();
    let low = predictor.predict_values([1.0, 1.0, 0.0]).unwrap();
    let high = predictor.predict_values([18.0, 8.0, 10.0]).unwrap();
    check(
        low.rounded == 1 && high.rounded == 14,
        format!("(1,1,0) -> {low}; (18,8,10) -> {high}"),
        format!("(1,1,0) -> {low} (want 1); (18,8,10) -> {high} (want 14)"),
    )
}

const PIECES: &[&str] = &[
    "a", "b", "c", "e", "i", "o", "u", "y", "th", "sh", "ee", "igh", "eigh", "ough", "ck", "qu",
];

fn random_corpus(rng: &mut StdRng) -> Vec<AnnotatedWord> {
    let n = rng.gen_range(1..=50);
    (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=9);
            let gs: Vec<String> = (0..k)
                .map(|_| PIECES[rng.gen_range(0..PIECES.len())].to_string())
                .collect();
            AnnotatedWord::new(&gs.concat(), gs).unwrap()
        })
        .collect()
}

fn stats_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    for trial in 0..100 {
        let corpus = random_corpus(&mut rng);
        let plain: Vec<(String, usize)> = corpus
            .iter()
            .map(|w| (w.surface().to_string(), w.grapheme_count()))
            .collect();
        let want = naive_stats(&plain);
        let got = compute_stats(&corpus);
        let keys: Vec<usize> = got.rows.keys().copied().collect();
        if keys != want.keys().copied().collect::<Vec<_>>() {
            return Err(format!("trial {trial}: rows {keys:?}"));
        }
        for (g, (n, feats)) in &want {
            let row = &got.rows[g];
            let moments = [row.characters, row.vowels, row.consonants];
            let same = row.n == *n
                && moments
                    .iter()
                    .zip(feats)
                    .all(|(m, &(mean, sigma))| m.mean == mean && m.sigma == sigma);
            if !same {
                return Err(format!("trial {trial}, g={g}: {row:?} vs {feats:?}"));
            }
        }
    }
    let tiny = parse_corpus_str("a\ta\nan\ta|n\nthe\tth|e\n").unwrap();
    let s = compute_stats(&tiny);
    let (r1, r2) = (&s.rows[&1], &s.rows[&2]);
    check(
        r1.n == 1
            && r1.characters.mean == 1.0
            && r1.characters.sigma == 0.0
            && r2.n == 2
            && r2.characters.mean == 2.5
            && r2.characters.sigma == 0.5,
        "100 random corpora bit-identical to the two-pass oracle; 3-word example exact".into(),
        format!("3-word example: {r1:?} / {r2:?}"),
    )
}

fn segmenter_oracle() -> Outcome {
    let start = Instant::now();
    let inv_list = [
        "a", "e", "i", "g", "h", "w", "ei", "eigh", "igh", "gh", "wh", "ai",
    ];
    let inv = GraphemeInventory::from_graphemes(&inv_list).unwrap();
    let alphabet = ['a', 'e', 'i', 'g', 'h', 'w'];
    let mut words = vec![String::new()];
    let mut checked = 0usize;
    for _ in 0..6 {
        let mut next = Vec::with_capacity(words.len() * alphabet.len());
        for w in &words {
            for c in alphabet {
                let word = format!("{w}{c}");
                let all = enumerate_segmentations(&word, &inv, usize::MAX).unwrap();
                if all.truncated {
                    return Err(format!("{word}: enumeration truncated"));
                }
                let naive = all_splits(&word, &inv_list);
                let listed: Vec<Vec<String>> = all
                    .segmentations
                    .iter()
                    .map(|s| s.graphemes.clone())
                    .collect();
                if listed != naive {
                    return Err(format!("{word}: enumeration differs from brute force"));
                }
                let counts: BTreeSet<usize> = naive.iter().map(Vec::len).collect();
                for k in 1..=word.len() {
                    let s = segment(&word, k, &inv).unwrap();
                    let first = naive.iter().find(|p| p.len() == k);
                    let ok = match first {
                        Some(p) => s.exact_count_match && &s.graphemes == p,
                        None => !s.exact_count_match && counts.contains(&s.achieved_count()),
                    };
                    if !ok {
                        return Err(format!("{word}, k={k}: got {s}, first exact {first:?}"));
                    }
                    checked += 1;
                }
                next.push(word);
            }
        }
        words = next;
    }
    let elapsed = start.elapsed();
    check(
        elapsed < Duration::from_secs(10),
        format!("{checked} (word, k) pairs agree with brute force, {elapsed:.2?}"),
        format!("correct but took {elapsed:.2?} (limit 10 s)"),
    )
}

fn worked_examples() -> Outcome {
    let res = Resources::bundled().map_err(|e| e.to_string())?;
    let weigh = segment("weigh", 2, &res.inventory).unwrap();
    let heifer = segment("heifer", 4, &res.inventory).unwrap();
    let ipa = res.ipa.segment("weigh").map_err(|e| e.to_string())?;
    let first_exact = |word: &str, k: usize| {
        enumerate_segmentations(word, &res.inventory, usize::MAX)
            .unwrap()
            .segmentations
            .into_iter()
            .find(|s| s.achieved_count() == k)
            .map(|s| s.to_string())
    };
    let ok = weigh.to_string() == "w|eigh"
        && heifer.to_string() == "h|ei|f|er"
        && ipa.segmentation.to_string() == "w|eigh"
        && first_exact("weigh", 2).as_deref() == Some("w|eigh")
        && first_exact("heifer", 4).as_deref() == Some("h|ei|f|er");
    check(
        ok,
        format!(
            "weigh/2 = {weigh}, heifer/4 = {heifer}, ipa weigh = {}",
            ipa.segmentation
        ),
        format!(
            "weigh/2 = {weigh}, heifer/4 = {heifer}, ipa weigh = {}",
            ipa.segmentation
        ),
    )
}

fn run_ok(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = bin().args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "grapheme {}: {}",
            args.join(" "),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

/// `label count pct%` rows of the text report, keyed by label.
fn text_rows(block: &str) -> Vec<(String, u64, f64)> {
    block
        .lines()
        .skip(1)
        .filter_map(|l| {
            let l = l.trim_end();
            let pct = l.strip_suffix('%')?;
            let mut parts = pct
                .rsplitn(3, char::is_whitespace)
                .filter(|s| !s.is_empty());
            let pct: f64 = parts.next()?.parse().ok()?;
            let rest = parts.next()?.trim_end();
            let (label, count) = rest.rsplit_once(char::is_whitespace)?;
            Some((label.trim().to_string(), count.parse().ok()?, pct))
        })
        .collect()
}

fn end_to_end() -> Outcome {
    let path = sample_path();
    let start = Instant::now();
    let json = run_ok(&["eval", &path, "--method", "both", "--json"])?;
    let elapsed = start.elapsed();
    let text = String::from_utf8(run_ok(&["eval", &path, "--method", "both"])?).unwrap();
    let reports: Vec<Value> = serde_json::from_slice(&json).map_err(|e| e.to_string())?;
    if reports.len() != 2 {
        return Err(format!("{} reports", reports.len()));
    }
    let blocks: Vec<&str> = text.split("\n\n").collect();
    let mut problems = Vec::new();
    for (r, block) in reports.iter().zip(&blocks) {
        let u = |k: &str| r[k].as_u64().unwrap();
        let f = |k: &str| r[k].as_f64().unwrap();
        let method = r["method"].as_str().unwrap();
        if u("count_correct") + u("plus_one") + u("minus_one") + u("off_by_more") != u("n") {
            problems.push(format!("{method}: buckets do not partition"));
        }
        if f("within_one_pct") < f("count_correct_pct") {
            problems.push(format!("{method}: within-1 below correct"));
        }
        if u("exact_mapping_correct") > u("count_correct") {
            problems.push(format!("{method}: exact mapping above correct"));
        }
        let expect = [
            ("Correct Result", "count_correct"),
            ("One Greater Than Expected", "plus_one"),
            ("One Lower Than Expected", "minus_one"),
            ("Prediction Wrong By More Than 1", "off_by_more"),
            ("Exact Mapping Correct", "exact_mapping_correct"),
        ];
        let rows = text_rows(block);
        for (label, key) in expect {
            let row = rows.iter().find(|(l, _, _)| l == label);
            let pct_key = format!("{key}_pct");
            match row {
                Some((_, c, p)) if *c == u(key) && *p == f(&pct_key) => {}
                other => problems.push(format!(
                    "{method} {label}: text {other:?} vs json {}",
                    r[key]
                )),
            }
        }
    }
    let summary: Vec<String> = reports
        .iter()
        .map(|r| {
            format!(
                "{} {}% correct",
                r["method"].as_str().unwrap(),
                r["count_correct_pct"]
            )
        })
        .collect();
    if elapsed >= Duration::from_secs(2) {
        problems.push(format!("took {elapsed:.2?} (limit 2 s)"));
    }
    check(
        problems.is_empty(),
        format!(
            "n = {}, {}; partitions hold; text = json; {elapsed:.2?}",
            reports[0]["n"],
            summary.join(", ")
        ),
        problems.join("; "),
    )
}

fn determinism() -> Outcome {
    let path = sample_path();
    let commands: Vec<Vec<&str>> = vec![
        vec!["stats", &path],
        vec!["freq", &path],
        vec!["predict", "telecommunications", "--verbose"],
        vec!["segment", "weigh", "--auto"],
        vec!["segment", "heifer", "--count", "4"],
        vec!["segment", "weigh", "--all"],
        vec!["ipa-segment", "weigh"],
        vec!["eval", &path, "--method", "both"],
        vec!["eval", &path, "--method", "both", "--json"],
    ];
    for args in &commands {
        let a = run_ok(args)?;
        let b = run_ok(args)?;
        if a != b {
            return Err(format!("grapheme {} differs between runs", args.join(" ")));
        }
    }
    Ok(format!(
        "{} subcommand invocations byte-identical across two runs",
        commands.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("fuzzy engine vs fine-grid oracle", engine_oracle),
        ("membership analytics", membership_analytics),
        ("parameter table round-trip", table_round_trip),
        ("mean triples round to g", mean_triples),
        ("edge behavior", edges),
        ("stats oracle", stats_oracle),
        ("segmenter oracle", segmenter_oracle),
        ("worked examples", worked_examples),
        ("end-to-end report", end_to_end),
    ];
    let mut failed = 0;
    let mut run = |name: &str, outcome: Outcome| match outcome {
        Ok(detail) => println!("PASS  {name}: {detail}"),
        Err(detail) => {
            failed += 1;
            println!("FAIL  {name}: {detail}");
        }
    };
    for (name, f) in criteria {
        run(name, f());
    }
    run("determinism", determinism());
    println!("{} criteria, {failed} failed", criteria.len() + 1);
    if failed > 0 {
        std::process::exit(1);
    }
}
