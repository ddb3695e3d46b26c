//! Exhaustive enumeration of prime polynomials and exact root counts.
//!
//! A prime polynomial is primitive, irreducible over `Q` and has a positive
//! leading coefficient. Candidates are coefficient vectors with
//! `1 <= a_n <= Q` and `|a_i| <= Q`, enumerated in a fixed mixed-radix order
//! so that any contiguous index range is an independent shard.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{is_irreducible_small, IntPoly};
use crate::rational::{ExtRational, HalfOpenInterval};
use crate::roots::engine::{FastChain, Point};
use crate::roots::{isolate_roots, refine_with, root_in};

/// Shard count used when the caller does not choose one. The plan, and so
/// every result, is independent of the number of worker threads.
pub const DEFAULT_SHARDS: usize = 64;

/// Largest height per degree considered desk scale.
pub fn envelope_limit(n: usize) -> u64 {
    match n {
        1 => 2000,
        2 => 100,
        3 => 30,
        4 => 12,
        5 => 6,
        _ => 2,
    }
}

pub fn within_envelope(n: usize, q: u64) -> bool {
    q <= envelope_limit(n)
}

fn check_nq(n: usize, q: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if q == 0 {
        return Err(Error::InvalidArgument("height must be at least 1".into()));
    }
    if q > i64::MAX as u64 / 4 {
        return Err(Error::InvalidArgument("height too large".into()));
    }
    Ok(())
}

/// Number of candidate vectors `q (2q + 1)^n`.
pub fn vector_count(n: usize, q: u64) -> u64 {
    q * (2 * q + 1).pow(n as u32)
}

/// Coefficient vectors with a positive leading coefficient, in index order.
#[derive(Clone, Debug)]
struct Vectors {
    q: i64,
    c: Vec<i64>,
    remaining: u64,
}

impl Vectors {
    fn new(n: usize, q: u64, start: u64, end: u64) -> Self {
        let base = 2 * q + 1;
        let mut c = vec![0i64; n + 1];
        let mut idx = start;
        for slot in c.iter_mut().take(n) {
            *slot = (idx % base) as i64 - q as i64;
            idx /= base;
        }
        c[n] = idx as i64 + 1;
        Vectors {
            q: q as i64,
            c,
            remaining: end.saturating_sub(start),
        }
    }

    /// Advances to the next vector and returns it.
    fn next_vec(&mut self) -> Option<&[i64]> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        Some(&self.c)
    }

    fn advance(&mut self) {
        let n = self.c.len() - 1;
        for i in 0..n {
            if self.c[i] < self.q {
                self.c[i] += 1;
                return;
            }
            self.c[i] = -self.q;
        }
        self.c[n] += 1;
    }
}

fn for_each_vector(n: usize, q: u64, start: u64, end: u64, mut f: impl FnMut(&[i64])) {
    let mut it = Vectors::new(n, q, start, end);
    while let Some(c) = it.next_vec() {
        f(c);
        it.advance();
    }
}

fn content_i64(c: &[i64]) -> i64 {
    c.iter().fold(0i64, |g, &a| g.gcd(&a))
}

pub(crate) fn is_prime_vector(c: &[i64]) -> bool {
    content_i64(c) == 1 && is_irreducible_small(c)
}

/// `true` when `c` is its own partner under `p(x) -> (-1)^n p(-x)`.
fn self_paired(c: &[i64]) -> bool {
    let n = c.len() - 1;
    c.iter()
        .enumerate()
        .all(|(i, &a)| (n + i) % 2 == 0 || a == 0)
}

/// Of the pair `{p, (-1)^n p(-x)}`, the member whose highest coefficient of
/// index `n-1, n-3, ...` that is nonzero is positive.
fn is_canonical(c: &[i64]) -> bool {
    let n = c.len() - 1;
    for i in (0..n).rev().step_by(2) {
        if c[i] != 0 {
            return c[i] > 0;
        }
    }
    true
}

/// Contiguous split of the candidate index space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShardPlan {
    n: usize,
    q: u64,
    shards: usize,
}

impl ShardPlan {
    pub fn new(n: usize, q: u64, shards: usize) -> Result<Self> {
        check_nq(n, q)?;
        if shards == 0 {
            return Err(Error::InvalidArgument("shard count must be positive".into()));
        }
        Ok(ShardPlan { n, q, shards })
    }

    pub fn shards(&self) -> usize {
        self.shards
    }

    fn range(&self, i: usize) -> (u64, u64) {
        let total = vector_count(self.n, self.q) as u128;
        let s = self.shards as u128;
        let i = i as u128;
        ((total * i / s) as u64, (total * (i + 1) / s) as u64)
    }

    /// Prime polynomials whose candidate index falls in shard `i`.
    pub fn shard(&self, i: usize) -> PrimePolys {
        let (a, b) = self.range(i);
        PrimePolys {
            vectors: Vectors::new(self.n, self.q, a, b),
        }
    }

    /// Folds `visit` over every candidate vector, shards in parallel, merging
    /// the partial results in shard order.
    fn fold<A, I, V, M>(&self, init: I, visit: V, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync,
        V: Fn(&mut A, &[i64]) + Sync,
        M: Fn(A, A) -> A,
    {
        let parts: Vec<A> = (0..self.shards)
            .into_par_iter()
            .map(|i| {
                let (a, b) = self.range(i);
                let mut acc = init();
                for_each_vector(self.n, self.q, a, b, |c| visit(&mut acc, c));
                acc
            })
            .collect();
        parts.into_iter().fold(init(), merge)
    }
}

/// Stream of prime polynomials of one shard.
#[derive(Clone, Debug)]
pub struct PrimePolys {
    vectors: Vectors,
}

impl Iterator for PrimePolys {
    type Item = IntPoly;

    fn next(&mut self) -> Option<IntPoly> {
        loop {
            let c = self.vectors.next_vec()?.to_vec();
            self.vectors.advance();
            if is_prime_vector(&c) {
                return Some(IntPoly::from_i64(&c));
            }
        }
    }
}

/// All prime polynomials of degree `n` and height at most `q`.
pub fn enumerate_prime_polys(n: usize, q: u64) -> Result<PrimePolys> {
    Ok(ShardPlan::new(n, q, 1)?.shard(0))
}

/// Collects `f(c)` over prime vectors, in enumeration order.
pub(crate) fn collect_prime<T, F>(n: usize, q: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[i64]) -> Option<T> + Sync,
{
    collect_vectors(n, q, |c| if is_prime_vector(c) { f(c) } else { None })
}

/// Collects `f(c)` over every candidate vector, in enumeration order.
pub(crate) fn collect_vectors<T, F>(n: usize, q: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[i64]) -> Option<T> + Sync,
{
    let plan = ShardPlan::new(n, q, DEFAULT_SHARDS)?;
    Ok(plan.fold(
        Vec::new,
        |acc, c| acc.extend(f(c)),
        |mut a, b| {
            a.extend(b);
            a
        },
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusQuery {
    pub n: usize,
    pub q: u64,
    pub interval: HalfOpenInterval,
    /// Interior breakpoints splitting `interval` into bins.
    pub breakpoints: Vec<ExtRational>,
}

impl CensusQuery {
    pub fn new(n: usize, q: u64, interval: HalfOpenInterval) -> Self {
        CensusQuery {
            n,
            q,
            interval,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<ExtRational>) -> Self {
        self.breakpoints = breakpoints;
        self
    }

    pub fn bins(&self) -> Result<Vec<HalfOpenInterval>> {
        self.interval.split(&self.breakpoints)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusOptions {
    pub shards: usize,
    /// Enumerate one member of each `p(x), p(-x)` pair (degree >= 2 only).
    pub pairing: bool,
    pub count_reducible: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            shards: DEFAULT_SHARDS,
            pairing: true,
            count_reducible: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducibleCount {
    pub count: u64,
    pub convention: &'static str,
}

pub const REDUCIBLE_CONVENTION: &str =
    "integer vectors of degree n and height <= Q reducible over Q, counted with a_n >= 1 and doubled";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub q: u64,
    pub interval: HalfOpenInterval,
    pub phi: u64,
    pub by_k: BTreeMap<usize, u64>,
    pub bins: Vec<HalfOpenInterval>,
    pub per_bin: Vec<u64>,
    /// Present when the interval is the whole real line.
    pub total_a_n: Option<u64>,
    pub prime_polys: u64,
    pub reducible: Option<ReducibleCount>,
    pub shards: usize,
}

#[derive(Clone, Debug)]
struct Tally {
    phi: u64,
    by_k: Vec<u64>,
    per_bin: Vec<u64>,
    prime_polys: u64,
}

impl Tally {
    fn new(n: usize, bins: usize) -> Self {
        Tally {
            phi: 0,
            by_k: vec![0; n + 1],
            per_bin: vec![0; bins],
            prime_polys: 0,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.phi += other.phi;
        self.prime_polys += other.prime_polys;
        for (a, b) in self.by_k.iter_mut().zip(other.by_k) {
            *a += b;
        }
        for (a, b) in self.per_bin.iter_mut().zip(other.per_bin) {
            *a += b;
        }
        self
    }
}

/// Adds the roots of `chain` in each cell `(pts[j], pts[j+1]]` to
/// `counts[map(j)]`, splitting only ranges that contain roots.
fn distribute(
    chain: &FastChain,
    pts: &[Point],
    cache: &mut [Option<usize>],
    counts: &mut [u64],
    map: impl Fn(usize) -> usize + Copy,
) {
    fn v(chain: &FastChain, pts: &[Point], cache: &mut [Option<usize>], i: usize) -> usize {
        *cache[i].get_or_insert_with(|| chain.variations(&pts[i]))
    }
    let mut stack = vec![(0usize, pts.len() - 1)];
    while let Some((a, b)) = stack.pop() {
        let c = v(chain, pts, cache, a) - v(chain, pts, cache, b);
        if c == 0 {
            continue;
        }
        if b - a == 1 {
            counts[map(a)] += c as u64;
        } else {
            let m = (a + b) / 2;
            stack.push((a, m));
            stack.push((m, b));
        }
    }
}

/// Exact `Φ_n(Q, I)` with its decomposition by the number of roots per
/// polynomial and, when breakpoints are given, per bin.
pub fn phi_count(query: &CensusQuery) -> Result<CensusReport> {
    phi_count_with(query, &CensusOptions::default())
}

pub fn phi_count_with(query: &CensusQuery, opts: &CensusOptions) -> Result<CensusReport> {
    let n = query.n;
    let plan = ShardPlan::new(n, query.q, opts.shards)?;
    let bins = query.bins()?;
    let mut raw = Vec::with_capacity(bins.len() + 1);
    raw.push(query.interval.lo().clone());
    raw.extend(query.breakpoints.iter().cloned());
    raw.push(query.interval.hi().clone());
    let pts: Vec<Point> = raw.iter().map(Point::new).collect();
    let neg_pts: Vec<Point> = raw.iter().rev().map(|x| Point::new(&x.neg())).collect();
    let m = bins.len();
    let pairing = opts.pairing && n >= 2;
    let neg_inf = Point::new(&ExtRational::NegInf);
    let pos_inf = Point::new(&ExtRational::PosInf);

    let tally = plan.fold(
        || Tally::new(n, m),
        |t, c| {
            if pairing && !is_canonical(c) {
                return;
            }
            if !is_prime_vector(c) {
                return;
            }
            let partner = pairing && !self_paired(c);
            t.prime_polys += if partner { 2 } else { 1 };
            let chain = FastChain::from_i64(c);
            if chain.count(&neg_inf, &pos_inf) == 0 {
                return;
            }
            let mut cache = vec![None; m + 1];
            let mut counts = vec![0u64; m];
            distribute(&chain, &pts, &mut cache, &mut counts, |j| j);
            record(t, &counts);
            if partner {
                // Roots of the partner in (x_j, x_{j+1}] are the negatives of
                // roots of p in [-x_{j+1}, -x_j); no rational point is a root.
                let mut cache = vec![None; m + 1];
                let mut counts = vec![0u64; m];
                distribute(&chain, &neg_pts, &mut cache, &mut counts, |j| m - 1 - j);
                record(t, &counts);
            }
        },
        Tally::merge,
    );

    let by_k = (1..=n).map(|k| (k, tally.by_k[k])).collect();
    let reducible = if opts.count_reducible && n >= 2 {
        Some(ReducibleCount {
            count: count_reducible_with(n, query.q, opts.shards)?,
            convention: REDUCIBLE_CONVENTION,
        })
    } else {
        None
    };
    Ok(CensusReport {
        n,
        q: query.q,
        interval: query.interval.clone(),
        phi: tally.phi,
        by_k,
        bins,
        per_bin: tally.per_bin,
        total_a_n: query.interval.is_real_line().then_some(tally.phi),
        prime_polys: tally.prime_polys,
        reducible,
        shards: opts.shards,
    })
}

fn record(t: &mut Tally, counts: &[u64]) {
    let k: u64 = counts.iter().sum();
    if k == 0 {
        return;
    }
    t.phi += k;
    t.by_k[k as usize] += 1;
    for (a, b) in t.per_bin.iter_mut().zip(counts) {
        *a += b;
    }
}

/// Number of integer polynomials of degree `n >= 2` and height at most `q`
/// that are reducible over `Q` (see [`REDUCIBLE_CONVENTION`]).
pub fn count_reducible(n: usize, q: u64) -> Result<u64> {
    count_reducible_with(n, q, DEFAULT_SHARDS)
}

fn count_reducible_with(n: usize, q: u64, shards: usize) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidArgument("reducible count needs degree >= 2".into()));
    }
    let plan = ShardPlan::new(n, q, shards)?;
    let half = plan.fold(
        || 0u64,
        |acc, c| {
            if c[0] == 0 {
                *acc += 1;
                return;
            }
            let g = content_i64(c);
            let prim: Vec<i64> = c.iter().map(|a| a / g).collect();
            if !is_irreducible_small(&prim) {
                *acc += 1;
            }
        },
        |a, b| a + b,
    );
    Ok(2 * half)
}

/// One member of the ordered sequence of algebraic numbers.
#[derive(Clone, Debug, Serialize)]
pub struct SequenceEntry {
    /// Isolating interval of width at most `2^-40`.
    pub value: HalfOpenInterval,
    pub approx: f64,
    pub height: u64,
    pub minimal_poly: IntPoly,
}

#[derive(Clone, Debug)]
struct Located {
    entry: SequenceEntry,
    chain: FastChain,
}

fn refine_eps() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(1u64 << 40))
}

/// Exact order of two distinct roots given by isolating intervals.
fn compare_roots(a: &Located, b: &Located) -> Ordering {
    let (mut ia, mut ib) = (a.entry.value.clone(), b.entry.value.clone());
    let mut eps = refine_eps();
    loop {
        if ia.hi() <= ib.lo() {
            return Ordering::Less;
        }
        if ib.hi() <= ia.lo() {
            return Ordering::Greater;
        }
        if a.entry.minimal_poly == b.entry.minimal_poly && ia == ib {
            return Ordering::Equal;
        }
        eps = eps / BigRational::from_integer(BigInt::from(1u64 << 20));
        ia = refine_with(&a.chain, &a.entry.minimal_poly, &ia, &eps).expect("isolating");
        ib = refine_with(&b.chain, &b.entry.minimal_poly, &ib, &eps).expect("isolating");
    }
}

fn height_level(n: usize, h: u64) -> Result<Vec<Located>> {
    let polys = collect_prime(n, h, |c| {
        let height = c.iter().map(|a| a.unsigned_abs()).max().unwrap();
        (height == h).then(|| c.to_vec())
    })?;
    let eps = refine_eps();
    let mut out: Vec<Located> = polys
        .into_par_iter()
        .flat_map_iter(|c| {
            let p = IntPoly::from_i64(&c);
            let chain = FastChain::from_i64(&c);
            let isos = isolate_roots(&p).expect("prime polynomials are square-free");
            isos.into_iter()
                .map(|iso| {
                    let value = refine_with(&chain, &p, &iso, &eps).expect("isolating");
                    let (lo, hi) = value.to_f64();
                    Located {
                        entry: SequenceEntry {
                            approx: 0.5 * (lo + hi),
                            value,
                            height: h,
                            minimal_poly: p.clone(),
                        },
                        chain: chain.clone(),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort_by(compare_roots);
    Ok(out)
}

/// The first `count` real algebraic numbers of degree `n`, ordered by height
/// and then by value.
pub fn algebraic_sequence(n: usize, count: usize) -> Result<Vec<SequenceEntry>> {
    check_nq(n, 1)?;
    let mut out = Vec::with_capacity(count);
    let mut h = 1;
    while out.len() < count {
        for loc in height_level(n, h)? {
            if out.len() == count {
                break;
            }
            out.push(loc.entry);
        }
        h += 1;
    }
    Ok(out)
}

/// How many entries of `seq` lie in `interval`, decided exactly.
pub fn sequence_count_in(seq: &[SequenceEntry], interval: &HalfOpenInterval) -> usize {
    seq.iter()
        .filter(|e| {
            let chain = FastChain::from_big(e.minimal_poly.coeffs());
            root_in(&chain, &e.value, interval)
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_order_is_mixed_radix() {
        let mut seen = Vec::new();
        for_each_vector(1, 1, 0, vector_count(1, 1), |c| seen.push(c.to_vec()));
        assert_eq!(seen, vec![vec![-1, 1], vec![0, 1], vec![1, 1]]);
        let mut tail = Vec::new();
        for_each_vector(2, 2, 30, 32, |c| tail.push(c.to_vec()));
        let mut all = Vec::new();
        for_each_vector(2, 2, 0, 32, |c| all.push(c.to_vec()));
        assert_eq!(&all[30..], &tail[..]);
    }

    #[test]
    fn pairing_partition() {
        assert!(self_paired(&[-2, 0, 1]));
        assert!(!self_paired(&[-1, 1, 1]));
        assert!(is_canonical(&[-1, 1, 1]));
        assert!(!is_canonical(&[-1, -1, 1]));
        // n = 3: partner of x^3 + 2x^2 - x + 1 is x^3 - 2x^2 - x - 1.
        assert!(is_canonical(&[1, -1, 2, 1]));
        assert!(!is_canonical(&[-1, -1, -2, 1]));
    }

    #[test]
    fn small_censuses() {
        let polys: Vec<IntPoly> = enumerate_prime_polys(2, 1).unwrap().collect();
        assert_eq!(polys.len(), 5);
        assert_eq!(enumerate_prime_polys(1, 2).unwrap().count(), 7);
        let pos = HalfOpenInterval::new(ExtRational::zero(), ExtRational::PosInf).unwrap();
        assert_eq!(phi_count(&CensusQuery::new(2, 1, pos)).unwrap().phi, 2);
        let r = phi_count(&CensusQuery::new(2, 1, HalfOpenInterval::real_line())).unwrap();
        assert_eq!(r.phi, 4);
        assert_eq!(r.by_k, BTreeMap::from([(1, 0), (2, 2)]));
        assert_eq!(r.total_a_n, Some(4));
        let r = phi_count(&CensusQuery::new(1, 1, HalfOpenInterval::real_line())).unwrap();
        assert_eq!(r.phi, 3);
    }

    #[test]
    fn reducible_small() {
        assert_eq!(count_reducible(2, 1).unwrap(), 8);
        assert!(count_reducible(1, 3).is_err());
    }

    #[test]
    fn sequence_heads() {
        let s = algebraic_sequence(2, 4).unwrap();
        let v: Vec<f64> = s.iter().map(|e| e.approx).collect();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let expect = [-phi, 1.0 - phi, phi - 1.0, phi];
        for (a, b) in v.iter().zip(expect) {
            assert!((a - b).abs() < 1e-11);
        }
        let s = algebraic_sequence(1, 3).unwrap();
        let v: Vec<f64> = s.iter().map(|e| e.approx).collect();
        assert!((v[0] + 1.0).abs() < 1e-11 && v[1].abs() < 1e-11 && (v[2] - 1.0).abs() < 1e-11);
    }
}
