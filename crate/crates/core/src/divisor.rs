//! Divisor classes on `M̄_{0,n}` in the Kapranov basis `H, E_I`.
//!
//! `E_I` is indexed by subsets `I ⊆ {1..n−1}` with `1 ≤ |I| ≤ n−4`.
//! Coefficients are stored signed, exactly as they appear in the class; the
//! nonnegative magnitudes `a_I` used by the admissibility test are `−coef`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::generators::{check_torus_dims, lattice_label, lattice_points, signed_permutations};
use crate::generators::complete;
use crate::multiset::{Multiset, Vertex};

/// Largest label range handled by the subset enumeration.
const MAX_LABELS: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivisorClass {
    n: u32,
    h: i64,
    e: BTreeMap<Vec<Vertex>, i64>,
}

fn subset_key_order(a: &[Vertex], b: &[Vertex]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn mask_to_subset(mask: u32) -> Vec<Vertex> {
    (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

impl DivisorClass {
    /// The zero class on `M̄_{0,n}`.
    pub fn zero(n: u32) -> Self {
        DivisorClass {
            n,
            h: 0,
            e: BTreeMap::new(),
        }
    }

    /// `h·H + Σ coef·E_I`; zero coefficients are dropped.
    pub fn new(n: u32, h: i64, e: impl IntoIterator<Item = (Vec<Vertex>, i64)>) -> Result<Self> {
        let mut out = DivisorClass::zero(n);
        out.h = h;
        for (mut key, coef) in e {
            key.sort_unstable();
            key.dedup();
            out.check_key(&key)?;
            if coef != 0 {
                *out.e.entry(key).or_insert(0) += coef;
            }
        }
        out.e.retain(|_, c| *c != 0);
        Ok(out)
    }

    /// The class of the exceptional divisor `E_I` alone.
    pub fn exceptional(n: u32, subset: &[Vertex]) -> Result<Self> {
        DivisorClass::new(n, 0, [(subset.to_vec(), 1)])
    }

    fn check_key(&self, key: &[Vertex]) -> Result<()> {
        let max_size = self.n.saturating_sub(4) as usize;
        if key.is_empty() || key.len() > max_size {
            return Err(Error::domain(format!(
                "E_I needs 1 ≤ |I| ≤ n−4 = {max_size}, got I = {key:?}"
            )));
        }
        if key[0] == 0 || *key.last().expect("nonempty") >= self.n {
            return Err(Error::domain(format!(
                "E_I needs I ⊆ {{1..{}}}, got I = {key:?}",
                self.n.saturating_sub(1)
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn h(&self) -> i64 {
        self.h
    }

    /// Signed coefficient of `E_I` (zero when absent).
    pub fn coefficient(&self, subset: &[Vertex]) -> i64 {
        let mut key = subset.to_vec();
        key.sort_unstable();
        self.e.get(&key).copied().unwrap_or(0)
    }

    /// Nonzero `E_I` terms, ordered by `|I|` and then lexicographically.
    pub fn exceptional_terms(&self) -> Vec<(&[Vertex], i64)> {
        let mut terms: Vec<(&[Vertex], i64)> =
            self.e.iter().map(|(k, c)| (k.as_slice(), *c)).collect();
        terms.sort_by(|a, b| subset_key_order(a.0, b.0));
        terms
    }

    pub fn is_zero(&self) -> bool {
        self.h == 0 && self.e.is_empty()
    }

    /// Sum of the `E_I` coefficients over `|I| = k`.
    pub fn signature(&self, k: usize) -> Result<i64> {
        let max_size = self.n.saturating_sub(4) as usize;
        if k == 0 || k > max_size {
            return Err(Error::domain(format!(
                "signature size {k} outside 1..={max_size}"
            )));
        }
        Ok(self
            .e
            .iter()
            .filter(|(key, _)| key.len() == k)
            .map(|(_, c)| c)
            .sum())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DivisorJson::from(self)).expect("plain data")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: DivisorJson = serde_json::from_value(value.clone())?;
        let mut terms = Vec::new();
        for (key, coef) in raw.e {
            let subset = key
                .split(',')
                .map(|s| {
                    s.trim().parse::<Vertex>().map_err(|_| {
                        Error::domain(format!("bad subset key {key:?} in divisor JSON"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            terms.push((subset, coef));
        }
        DivisorClass::new(raw.n, raw.h, terms)
    }
}

#[derive(Serialize, Deserialize)]
struct DivisorJson {
    n: u32,
    #[serde(rename = "H")]
    h: i64,
    #[serde(rename = "E")]
    e: BTreeMap<String, i64>,
}

impl From<&DivisorClass> for DivisorJson {
    fn from(d: &DivisorClass) -> Self {
        DivisorJson {
            n: d.n,
            h: d.h,
            e: d
                .e
                .iter()
                .map(|(k, c)| {
                    let key = k.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
                    (key, *c)
                })
                .collect(),
        }
    }
}

fn subscript(subset: &[Vertex]) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    if subset.iter().all(|&v| v < 10) {
        subset.iter().map(|&v| DIGITS[v as usize]).collect()
    } else {
        let labels: Vec<String> = subset.iter().map(ToString::to_string).collect();
        format!("_{{{}}}", labels.join(","))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(i64, String)> = Vec::new();
        if self.h != 0 {
            terms.push((self.h, "H".to_string()));
        }
        for (key, c) in self.exceptional_terms() {
            terms.push((c, format!("E{}", subscript(key))));
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (c, name)) in terms.iter().enumerate() {
            let magnitude = c.unsigned_abs();
            let body = if magnitude == 1 {
                name.clone()
            } else {
                format!("{magnitude}{name}")
            };
            match (idx, *c < 0) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "−{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " − {body}")?,
            }
        }
        Ok(())
    }
}

fn check_label_range(n: u32) -> Result<()> {
    if n < 5 {
        return Err(Error::domain(format!("need n ≥ 5 marked points, got {n}")));
    }
    if n - 1 > MAX_LABELS {
        return Err(Error::domain(format!(
            "n − 1 = {} labels exceeds the supported {MAX_LABELS}",
            n - 1
        )));
    }
    Ok(())
}

/// Builds the class from `max_σ Σ_{i∈I} m(i∈σ)` evaluated for every `I`,
/// given a function computing that maximum for a bitmask of labels.
fn class_from_max(n: u32, degree: usize, max_hit: impl Fn(u32) -> u32) -> DivisorClass {
    let labels = n - 1;
    let max_size = (n - 4) as u32;
    let h = degree as i64 + 1;
    let mut e = BTreeMap::new();
    for mask in 1u32..(1u32 << labels) {
        if mask.count_ones() > max_size {
            continue;
        }
        let coef = -(h - i64::from(max_hit(mask)));
        if coef != 0 {
            e.insert(mask_to_subset(mask), coef);
        }
    }
    DivisorClass { n, h, e }
}

/// `D_Δ = (d+1)H − Σ_I (d+1 − max_{σ∈Δ} Σ_{i∈I} m(i∈σ)) E_I`.
pub fn divisor_of_complex(complex: &Complex, n: u32) -> Result<DivisorClass> {
    if complex.is_empty() {
        return Err(Error::domain("divisor of the empty complex is undefined"));
    }
    check_label_range(n)?;
    if let Some(&v) = complex.support().iter().find(|&&v| v >= n) {
        return Err(Error::domain(format!(
            "vertex {v} outside the label range 1..{} for n = {n}",
            n - 1
        )));
    }
    // per simplex, (label bit, multiplicity) pairs
    let simplices: Vec<Vec<(u32, u32)>> = complex
        .simplices()
        .iter()
        .map(|s| s.entries().iter().map(|&(v, m)| (1u32 << (v - 1), m)).collect())
        .collect();
    Ok(class_from_max(n, complex.degree(), |mask| {
        simplices
            .iter()
            .map(|s| s.iter().filter(|(bit, _)| mask & bit != 0).map(|(_, m)| m).sum())
            .max()
            .unwrap_or(0)
    }))
}

/// Coefficient-wise `a·D₁ + b·D₂`.
pub fn combine(a: i64, d1: &DivisorClass, b: i64, d2: &DivisorClass) -> Result<DivisorClass> {
    if d1.n != d2.n {
        return Err(Error::domain(format!(
            "cannot combine classes on M̄_0,{} and M̄_0,{}",
            d1.n, d2.n
        )));
    }
    let mut e = d1.e.clone();
    for c in e.values_mut() {
        *c *= a;
    }
    for (k, c) in &d2.e {
        *e.entry(k.clone()).or_insert(0) += b * c;
    }
    e.retain(|_, c| *c != 0);
    Ok(DivisorClass {
        n: d1.n,
        h: a * d1.h + b * d2.h,
        e,
    })
}

/// All `d`-simplices on `{1..n−1}` with `Σ_{i∈I} m(i∈σ) ≤ (d+1) − a_I` for every `I`.
pub fn admissible_simplices(class: &DivisorClass, d: usize) -> Result<Complex> {
    if class.h != d as i64 + 1 {
        return Err(Error::domain(format!(
            "degree mismatch: H coefficient {} but d + 1 = {}",
            class.h,
            d + 1
        )));
    }
    let bound = d as i64 + 1;
    let keep = complete(class.n - 1, d, false)
        .simplices()
        .iter()
        .filter(|sigma| {
            class.e.iter().all(|(key, coef)| {
                let a = -coef;
                let hits: i64 = key.iter().map(|&i| i64::from(sigma.count(i))).sum();
                hits <= bound - a
            })
        })
        .cloned()
        .collect::<Vec<Multiset>>();
    Complex::new(d, keep)
}

/// Every multiset of candidates (as sorted index lists) summing to `target`.
///
/// An empty result certifies that no decomposition exists over the candidate
/// set; the zero class decomposes as the empty sum.
pub fn decompose(target: &DivisorClass, candidates: &[DivisorClass]) -> Result<Vec<Vec<usize>>> {
    for c in candidates {
        if c.h <= 0 {
            return Err(Error::domain(format!(
                "unbounded search: candidate {c} has H coefficient {} ≤ 0",
                c.h
            )));
        }
        if c.n != target.n {
            return Err(Error::domain("candidates must share the target's n"));
        }
    }
    let monotone = candidates.iter().all(|c| c.e.values().all(|&v| v <= 0));
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(candidates[i].h), i));

    struct Dfs<'a> {
        target: &'a DivisorClass,
        candidates: &'a [DivisorClass],
        order: Vec<usize>,
        monotone: bool,
        found: BTreeSet<Vec<usize>>,
    }
    impl Dfs<'_> {
        fn overshoots(&self, partial: &DivisorClass) -> bool {
            if partial.h > self.target.h {
                return true;
            }
            self.monotone
                && partial
                    .e
                    .iter()
                    .any(|(k, &c)| c < self.target.e.get(k).copied().unwrap_or(0))
        }

        fn run(&mut self, from: usize, partial: &DivisorClass, chosen: &mut Vec<usize>) {
            if partial == self.target {
                let mut witness = chosen.clone();
                witness.sort_unstable();
                self.found.insert(witness);
            }
            if partial.h >= self.target.h {
                return;
            }
            for pos in from..self.order.len() {
                let idx = self.order[pos];
                let next = combine(1, partial, 1, &self.candidates[idx]).expect("same n");
                if self.overshoots(&next) {
                    continue;
                }
                chosen.push(idx);
                self.run(pos, &next, chosen);
                chosen.pop();
            }
        }
    }

    let mut dfs = Dfs {
        target,
        candidates,
        order,
        monotone,
        found: BTreeSet::new(),
    };
    dfs.run(0, &DivisorClass::zero(target.n), &mut Vec::new());
    Ok(dfs.found.into_iter().collect())
}

/// The closed form for the torus class: for each `I ⊆ V`, the maximum over
/// base points `b` and permutations `σ` of the number of `a ∈ I` with
/// `0 ≤ a_{σ(1)} − b_{σ(1)} ≤ … ≤ a_{σ(d)} − b_{σ(d)} ≤ 1`, differences taken
/// modulo the side lengths.
pub fn torus_divisor(dims: &[usize]) -> Result<DivisorClass> {
    check_torus_dims(dims)?;
    let d = dims.len();
    let points = lattice_points(dims);
    let n = points.len() as u32 + 1;
    check_label_range(n)?;
    let mut cells: Vec<u32> = Vec::new();
    for b in &points {
        for (perm, _) in signed_permutations(d) {
            let mut mask = 0u32;
            for a in &points {
                let diffs: Vec<usize> = (0..d)
                    .map(|t| (a[t] + dims[t] - b[t]) % dims[t])
                    .collect();
                let chain_ok = perm.iter().all(|&t| diffs[t] <= 1)
                    && perm.windows(2).all(|w| diffs[w[0]] <= diffs[w[1]]);
                if chain_ok {
                    mask |= 1 << (lattice_label(a, dims) - 1);
                }
            }
            cells.push(mask);
        }
    }
    Ok(class_from_max(n, d, |mask| {
        cells.iter().map(|c| (c & mask).count_ones()).max().unwrap_or(0)
    }))
}
