//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the library's fuzzy or stats code.

#![allow(dead_code)]

use std::collections::BTreeMap;

pub const FINE_STEP: f64 = 5e-5;

pub fn tri(x: f64, l: f64, p: f64, r: f64) -> f64 {
    if x <= l || x >= r {
        0.0
    } else if x <= p {
        (x - l) / (p - l)
    } else {
        (r - x) / (r - p)
    }
}

pub fn gauss(x: f64, m: f64, s: f64) -> f64 {
    (-0.5 * ((x - m) / s).powi(2)).exp()
}

/// 1 below `a`, 0 above `b`, two quadratic pieces meeting at 1/2.
pub fn zmf(x: f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    if x <= a {
        1.0
    } else if x <= mid {
        1.0 - 2.0 * ((x - a) / (b - a)).powi(2)
    } else if x <= b {
        2.0 * ((x - b) / (b - a)).powi(2)
    } else {
        0.0
    }
}

pub fn smf(x: f64, a: f64, b: f64) -> f64 {
    1.0 - zmf(x, a, b)
}

/// Trapezoid-rule centroid of `f` over `[lo, hi]` at `step`.
pub fn centroid(lo: f64, hi: f64, step: f64, f: impl Fn(f64) -> f64) -> Option<f64> {
    let n = ((hi - lo) / step).round() as usize;
    let h = (hi - lo) / n as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..=n {
        let x = lo + h * i as f64;
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        let y = f(x) * w;
        num += x * y;
        den += y;
    }
    (den > 0.0).then(|| num / den)
}

/// One row of the parameter table: (mean, sigma) per feature; sigma may be absent.
pub type Row = [(f64, Option<f64>); 3];

pub fn parse_params(text: &str) -> BTreeMap<u32, Row> {
    let mut rows = BTreeMap::new();
    for line in text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
    {
        let cols: Vec<&str> = line.split('\t').collect();
        let Ok(g) = cols[0].parse::<u32>() else {
            continue; // header
        };
        let num = |i: usize| cols[i].parse::<f64>().ok();
        rows.insert(
            g,
            [
                (num(1).unwrap(), num(2)),
                (num(3).unwrap(), num(4)),
                (num(5).unwrap(), num(6)),
            ],
        );
    }
    rows
}

/// The grapheme-count system, evaluated from scratch on a fine grid.
pub struct FisOracle {
    rows: BTreeMap<u32, Row>,
}

pub const RULES: [u32; 13] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 14];

impl FisOracle {
    pub fn new(params_text: &str) -> Self {
        Self {
            rows: parse_params(params_text),
        }
    }

    pub fn membership(&self, g: u32, feature: usize, x: f64) -> f64 {
        let r = |g: u32| self.rows[&g][feature];
        match g {
            1 => zmf(x, r(1).0, r(2).0),
            14 => smf(x, r(12).0 + r(12).1.unwrap(), r(14).0),
            _ => gauss(x, r(g).0, r(g).1.unwrap()),
        }
    }

    pub fn activations(&self, features: [f64; 3]) -> Vec<f64> {
        RULES
            .iter()
            .map(|&g| {
                (0..3)
                    .map(|f| self.membership(g, f, features[f]))
                    .fold(1.0, f64::min)
            })
            .collect()
    }

    pub fn crisp(&self, features: [f64; 3], step: f64) -> Option<f64> {
        let acts = self.activations(features);
        centroid(1.0, 14.0, step, |x| {
            RULES
                .iter()
                .zip(&acts)
                .map(|(&g, &a)| {
                    let p = g as f64;
                    tri(x, p - 0.5, p, p + 0.499).min(a)
                })
                .fold(0.0, f64::max)
        })
    }
}

pub fn round_half_up_2dp(x: f64) -> (f64, u32) {
    let crisp = (x * 100.0).round() / 100.0;
    (crisp, (crisp + 0.5).floor() as u32)
}

/// (n, mean, population sigma) of each feature per grapheme count, the slow way.
pub fn naive_stats(corpus: &[(String, usize)]) -> BTreeMap<usize, (usize, [(f64, f64); 3])> {
    let mut groups: BTreeMap<usize, Vec<[f64; 3]>> = BTreeMap::new();
    for (word, g) in corpus {
        let v = word.chars().filter(|c| "aeiou".contains(*c)).count();
        let n = word.chars().count();
        groups
            .entry(*g)
            .or_default()
            .push([n as f64, v as f64, (n - v) as f64]);
    }
    groups
        .into_iter()
        .map(|(g, xs)| {
            let n = xs.len();
            let mut out = [(0.0, 0.0); 3];
            for (f, slot) in out.iter_mut().enumerate() {
                let mut sum = 0.0;
                for x in &xs {
                    sum += x[f];
                }
                let mean = sum / n as f64;
                let mut ss = 0.0;
                for x in &xs {
                    ss += (x[f] - mean) * (x[f] - mean);
                }
                *slot = (mean, (ss / n as f64).sqrt());
            }
            (g, (n, out))
        })
        .collect()
}

/// Every split of `word` into pieces from `inventory`, depth-first, longer
/// pieces first at each position.
pub fn all_splits(word: &str, inventory: &[&str]) -> Vec<Vec<String>> {
    fn go(rest: &str, inv: &[&str], path: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
        if rest.is_empty() {
            out.push(path.clone());
            return;
        }
        for len in (1..=rest.len().min(4)).rev() {
            if inv.contains(&&rest[..len]) {
                path.push(rest[..len].to_string());
                go(&rest[len..], inv, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(word, inventory, &mut Vec::new(), &mut out);
    out
}
