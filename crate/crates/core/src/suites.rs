//! Named self-checks over the library's headline properties, runnable from
//! the command line and from the test harness.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{simplified_bounds, size_hammersley, size_nets, size_sparse, Bound, BoundKind};
use crate::classify::{classify_grid, classify_grid_with, GridSpec, Region};
use crate::dispersion::{
    is_empty, largest_empty_box, naive_oracle, BoxD, DispersionResult, SearchConfig,
};
use crate::error::{Error, Result};
use crate::numerics::{binomial, compare_sizes, primorial, Dyadic, PrecisionPolicy, Rat};
use crate::pointset::{k_of_epsilon, sparse_cardinality, sparse_grid, Coord, Point, PointSet};

pub const SUITE_NAMES: [&str; 10] = [
    "cardinality",
    "sparse_dispersion",
    "one_dim",
    "leave_one_out",
    "admissible",
    "crossover",
    "oracle",
    "majorants",
    "regions",
    "determinism",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: Vec<Check>,
    /// Observations that do not fail the suite but contradict a stated
    /// expectation.
    pub findings: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            checks: Vec::new(),
            findings: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{mark}] {}/{}: {}", self.name, c.name, c.detail)?;
        }
        for finding in &self.findings {
            writeln!(f, "[NOTE] {}: {finding}", self.name)?;
        }
        let total = self.checks.len();
        let ok = self.checks.iter().filter(|c| c.passed).count();
        write!(
            f,
            "{}: {} ({ok}/{total} checks, {:.2}s)",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64()
        )
    }
}

/// Runs one suite by name, or all of them for `"all"`. `threads` sets the
/// worker count of the dispersion search where it is used.
pub fn run(name: &str, threads: usize) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITE_NAMES.iter().map(|n| run_one(n, threads)).collect();
    }
    Ok(vec![run_one(name, threads)?])
}

pub fn run_one(name: &str, threads: usize) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut report = match name {
        "cardinality" => cardinality()?,
        "sparse_dispersion" => sparse_dispersion(threads)?,
        "one_dim" => one_dim(threads)?,
        "leave_one_out" => leave_one_out(threads)?,
        "admissible" => admissible(threads)?,
        "crossover" => crossover()?,
        "oracle" => oracle(threads, 60, 0x5eed)?,
        "majorants" => majorants()?,
        "regions" => regions()?,
        "determinism" => determinism()?,
        other => {
            return Err(Error::domain(format!(
                "unknown suite '{other}'; expected one of {} or all",
                SUITE_NAMES.join(", ")
            )))
        }
    };
    report.elapsed = start.elapsed();
    Ok(report)
}

fn search(ps: &PointSet, threads: usize) -> Result<DispersionResult> {
    largest_empty_box(ps, &SearchConfig::default().with_threads(threads))
}

fn pow2_inv(e: u32) -> Rat {
    Rat::inv_pow2(e)
}

fn cardinality() -> Result<SuiteReport> {
    let start = Instant::now();
    let mut r = SuiteReport::new("cardinality");
    let mut bad = Vec::new();
    for k in 0..=8u32 {
        for d in 1..=6u32 {
            let formula = binomial((d + k - 1) as u64, (d - 1) as u64) << k as usize;
            let built = BigUint::from(sparse_grid(k, d)?.len());
            if built != formula || sparse_cardinality(k, d) != formula {
                bad.push(format!("(k={k}, d={d}): built {built}, formula {formula}"));
            }
        }
    }
    r.check(
        "cardinality",
        bad.is_empty(),
        if bad.is_empty() {
            "|P(k,d)| = 2^k C(d+k-1, d-1) for all k <= 8, d <= 6".to_string()
        } else {
            bad.join("; ")
        },
    );
    let secs = start.elapsed().as_secs_f64();
    r.check("runtime", secs < 30.0, format!("{secs:.2}s (limit 30s)"));
    Ok(r)
}

fn check_sparse_dispersion(
    r: &mut SuiteReport,
    k: u32,
    d: u32,
    expected: &Rat,
    threads: usize,
) -> Result<()> {
    let ps = sparse_grid(k, d)?;
    let res = search(&ps, threads)?;
    let witness_ok = res.witness.volume() == res.volume && is_empty(&res.witness, &ps)?;
    r.check(
        format!("P({k},{d})"),
        res.volume == *expected && witness_ok,
        format!(
            "volume {} (expected {expected}), witness {} empty: {witness_ok}",
            res.volume, res.witness
        ),
    );
    Ok(())
}

fn sparse_dispersion(threads: usize) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut r = SuiteReport::new("sparse_dispersion");
    for (d, kmax) in [(2u32, 6u32), (3, 4), (4, 2)] {
        for k in 0..=kmax {
            check_sparse_dispersion(&mut r, k, d, &pow2_inv(k + 1), threads)?;
            let explicit = BoxD::sparse_grid_witness(k, d as usize);
            let ps = sparse_grid(k, d)?;
            r.check(
                format!("P({k},{d}) explicit box"),
                is_empty(&explicit, &ps)? && explicit.volume() == pow2_inv(k + 1),
                format!("{explicit} is empty"),
            );
        }
    }
    let secs = start.elapsed().as_secs_f64();
    r.check("runtime", secs < 300.0, format!("{secs:.2}s (limit 300s)"));
    Ok(r)
}

fn one_dim(threads: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("one_dim");
    check_sparse_dispersion(&mut r, 0, 1, &Rat::ratio(1, 2), threads)?;
    for k in 1..=8 {
        check_sparse_dispersion(&mut r, k, 1, &pow2_inv(k), threads)?;
    }
    Ok(r)
}

fn leave_one_out(threads: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("leave_one_out");
    let ps = sparse_grid(3, 2)?;
    r.check(
        "cardinality",
        ps.len() == 32,
        format!("|P(3,2)| = {}", ps.len()),
    );
    let full = search(&ps, threads)?;
    r.check(
        "dispersion",
        full.volume == Rat::ratio(1, 16),
        format!("dispersion {}", full.volume),
    );

    let eighth = Rat::ratio(1, 8);
    let mut below = Vec::new();
    let mut equal = 0;
    for i in 0..ps.len() {
        let reduced = ps.without(i);
        let v = search(&reduced, threads)?.volume;
        match v.cmp(&eighth) {
            Ordering::Less => below.push(format!("{} -> {v}", ps.points()[i])),
            Ordering::Equal => equal += 1,
            Ordering::Greater => r.findings.push(format!(
                "removing {} gives dispersion {v} > 1/8",
                ps.points()[i]
            )),
        }
    }
    r.check(
        "leave-one-out",
        below.is_empty(),
        if below.is_empty() {
            format!("all 32 subsets have dispersion >= 1/8 ({equal} exactly 1/8)")
        } else {
            format!("below 1/8: {}", below.join("; "))
        },
    );
    Ok(r)
}

fn admissible(threads: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("admissible");
    for q in 4..=20i64 {
        let eps = Rat::ratio(1, q);
        let k = k_of_epsilon(&eps)?;
        for d in [2u32, 3] {
            let v = search(&sparse_grid(k, d)?, threads)?.volume;
            r.check(
                format!("eps=1/{q} d={d}"),
                v <= eps,
                format!("k = {k}, dispersion {v} <= 1/{q}"),
            );
        }
    }
    Ok(r)
}

fn crossover() -> Result<SuiteReport> {
    let mut r = SuiteReport::new("crossover");
    let first = (2..=60u32).find(|&d| (BigUint::one() << (6 * d as usize + 2)) < primorial(d));
    r.check(
        "2^(6d+2) < primorial",
        first == Some(54),
        format!("first d in 2..=60 with 2^(6d+2) < prod of first d-1 primes: {first:?}"),
    );
    let mut bad = Vec::new();
    for d in 2..=60u32 {
        for eps in [Rat::ratio(1, 4), Rat::ratio(1, 100)] {
            let nets = size_nets(&eps, d)?;
            let ham = size_hammersley(&eps, d)?;
            let nets_smaller = nets.as_exact().expect("exact") < ham.as_exact().expect("exact");
            if nets_smaller != (d >= 54) {
                bad.push(format!("d={d} eps={eps}"));
            }
        }
    }
    r.check(
        "size comparison",
        bad.is_empty(),
        if bad.is_empty() {
            "nets < hammersley exactly for d >= 54".into()
        } else {
            bad.join("; ")
        },
    );
    Ok(r)
}

/// Random point set with dyadic coordinates `a / 2^b`, `b <= 5`.
fn random_instance(rng: &mut ChaCha8Rng, d: usize, n: usize) -> PointSet {
    let points = (0..n)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let e = rng.gen_range(1..=5u32);
                    let a = rng.gen_range(1..(1u64 << e));
                    Coord::Dyadic(Dyadic::normalize(a, e).expect("interior dyadic"))
                })
                .collect::<Point>()
        })
        .collect();
    PointSet::new(d, points, "random").expect("interior coordinates")
}

/// Compares the pruned search with the exhaustive oracle on `count` seeded
/// random instances.
pub fn oracle(threads: usize, count: usize, seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    let mut sizes = BTreeSet::new();
    for i in 0..count {
        let d = 1 + i % 3;
        let max_n = if d == 3 { 14 } else { 40 };
        let n = rng.gen_range(1..=max_n);
        let ps = random_instance(&mut rng, d, n);
        let fast = search(&ps, threads)?;
        let slow = naive_oracle(&ps);
        let witness_ok = is_empty(&fast.witness, &ps)?;
        if fast.volume != slow || !witness_ok {
            mismatches.push(format!(
                "instance {i} (d={d}, n={}): search {} vs oracle {slow}",
                ps.len(),
                fast.volume
            ));
        }
        sizes.insert((d, ps.len()));
    }
    r.check(
        "pruned = exhaustive",
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!(
                "{count} instances, d <= 3, up to {} points, all equal",
                sizes.iter().map(|s| s.1).max().unwrap_or(0)
            )
        } else {
            mismatches.join("; ")
        },
    );
    Ok(r)
}

fn majorants() -> Result<SuiteReport> {
    let mut r = SuiteReport::new("majorants");
    let spec = GridSpec::default();
    let mut bad = Vec::new();
    for eps in spec.eps_values() {
        for &d in spec.d_values() {
            let sparse = size_sparse(eps, d)?.exact_rational().expect("exact");
            let (lin, poly) = simplified_bounds(eps, d)?;
            let lin = lin.exact_rational().expect("exact");
            let poly = poly.exact_rational().expect("exact");
            if sparse > lin || sparse > poly {
                bad.push(format!("eps={eps} d={d}"));
            }
        }
    }
    r.check(
        "sparse <= both majorants",
        bad.is_empty(),
        if bad.is_empty() {
            "holds on all 97 x 99 grid cells".into()
        } else {
            bad.join("; ")
        },
    );
    Ok(r)
}

/// Number of 4-connected components of each region in the matrix.
pub fn region_components(matrix: &[Vec<Region>]) -> [(Region, usize); 3] {
    let h = matrix.len();
    let w = matrix.first().map_or(0, Vec::len);
    let mut seen = vec![vec![false; w]; h];
    let mut counts = [
        (Region::Black, 0),
        (Region::DarkGray, 0),
        (Region::LightGray, 0),
    ];
    for y in 0..h {
        for x in 0..w {
            if seen[y][x] {
                continue;
            }
            let region = matrix[y][x];
            counts
                .iter_mut()
                .find(|c| c.0 == region)
                .expect("three regions")
                .1 += 1;
            let mut stack = vec![(y, x)];
            seen[y][x] = true;
            while let Some((cy, cx)) = stack.pop() {
                let neighbours = [
                    (cy.wrapping_sub(1), cx),
                    (cy + 1, cx),
                    (cy, cx.wrapping_sub(1)),
                    (cy, cx + 1),
                ];
                for (ny, nx) in neighbours {
                    if ny < h && nx < w && !seen[ny][nx] && matrix[ny][nx] == region {
                        seen[ny][nx] = true;
                        stack.push((ny, nx));
                    }
                }
            }
        }
    }
    counts
}

fn regions() -> Result<SuiteReport> {
    let mut r = SuiteReport::new("regions");
    let spec = GridSpec::default();
    let matrix = match classify_grid(&spec) {
        Ok(m) => m,
        Err(e) => {
            r.check("complete", false, format!("classification failed: {e}"));
            return Ok(r);
        }
    };
    r.check(
        "complete",
        true,
        format!(
            "{} x {} cells classified, no indeterminate comparisons",
            matrix.len(),
            matrix[0].len()
        ),
    );

    let present: BTreeSet<&str> = matrix.iter().flatten().map(|c| c.tag()).collect();
    r.check(
        "all regions",
        present.len() == 3,
        format!("regions present: {present:?}"),
    );

    let cell = |q: i64, d: u32| {
        let row = spec
            .eps_values()
            .iter()
            .position(|e| *e == Rat::ratio(1, q))
            .expect("grid ε");
        let col = spec
            .d_values()
            .iter()
            .position(|&x| x == d)
            .expect("grid d");
        matrix[row][col]
    };
    for (q, d, want) in [
        (4, 2, Region::Black),
        (100, 2, Region::LightGray),
        (100, 100, Region::DarkGray),
    ] {
        let got = cell(q, d);
        r.check(
            format!("(1/{q}, {d})"),
            got == want,
            format!("{got} (expected {want})"),
        );
    }

    let finer = PrecisionPolicy {
        start_bits: 512,
        max_bits: 16384,
    };
    let refined = classify_grid_with(&spec, finer)?;
    r.check(
        "precision stable",
        refined == matrix,
        "same tags with 512-bit start precision".to_string(),
    );

    let policy = PrecisionPolicy::default();
    let mut nets_wins = 0;
    for eps in spec.eps_values() {
        for &d in spec.d_values() {
            let nets = Bound::new(BoundKind::Nets, eps, d)?;
            let ham = Bound::new(BoundKind::Hammersley, eps, d)?;
            let sparse = Bound::new(BoundKind::Sparse, eps, d)?;
            if compare_sizes(&nets, &sparse, policy)? == Ordering::Less
                && compare_sizes(&ham, &sparse, policy)? != Ordering::Less
            {
                nets_wins += 1;
            }
        }
    }
    r.check(
        "nets never decisive",
        nets_wins == 0,
        format!("cells where only the net bound beats the sparse grid: {nets_wins}"),
    );

    for (col, d) in spec.d_values().iter().enumerate() {
        let column: Vec<Region> = matrix.iter().map(|row| row[col]).collect();
        if let Some(first) = column.iter().position(|&c| c == Region::LightGray) {
            let exceptions: Vec<String> = column[first..]
                .iter()
                .zip(&spec.eps_values()[first..])
                .filter(|(c, _)| **c != Region::LightGray)
                .map(|(c, e)| format!("{e}:{c}"))
                .collect();
            if !exceptions.is_empty() {
                r.findings.push(format!(
                    "d={d}: light gray from eps={} but later cells differ: {}",
                    spec.eps_values()[first],
                    exceptions.join(" ")
                ));
            }
        }
    }
    let components = region_components(&matrix);
    let summary: Vec<String> = components
        .iter()
        .map(|(reg, n)| format!("{reg}={n}"))
        .collect();
    if components.iter().any(|&(_, n)| n > 1) {
        r.findings.push(format!(
            "connected components per region: {}",
            summary.join(", ")
        ));
    }
    Ok(r)
}

fn determinism() -> Result<SuiteReport> {
    let mut r = SuiteReport::new("determinism");
    let mut inputs: Vec<PointSet> = Vec::new();
    for (d, kmax) in [(2u32, 6u32), (3, 4), (4, 2)] {
        for k in 0..=kmax {
            inputs.push(sparse_grid(k, d)?);
        }
    }
    let p32 = sparse_grid(3, 2)?;
    inputs.extend((0..p32.len()).map(|i| p32.without(i)));

    let mut differing = Vec::new();
    for ps in &inputs {
        let runs: Vec<DispersionResult> = [1, 2, 8]
            .iter()
            .map(|&t| search(ps, t))
            .collect::<Result<_>>()?;
        let same = runs
            .windows(2)
            .all(|w| w[0].volume == w[1].volume && w[0].witness == w[1].witness);
        if !same {
            differing.push(ps.label().to_string());
        }
    }
    r.check(
        "1, 2, 8 threads",
        differing.is_empty(),
        if differing.is_empty() {
            format!("{} inputs, identical volume and witness", inputs.len())
        } else {
            format!("differs on {}", differing.join("; "))
        },
    );
    Ok(r)
}
