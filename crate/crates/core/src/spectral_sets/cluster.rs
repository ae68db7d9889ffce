//! Depth-1 and depth-2 clusters.
//!
//! A cluster with raw limit `L` and tail offsets `x_n` has level-1 items
//! `L + x_n`. With children, item `m` is a whole family: its limit is
//! `t_m = L + x_m` and, for each child template `y`, its leaves are
//! `L + x_m (1 + y_k)`. Child offsets are relative to the parent offset, which
//! keeps every family inside a ball of radius `|x_m| (1 + sup |y|)` around
//! `t_m` and makes the whole set closed.
//!
//! A map chain may be layered on top (affine, power, reciprocal); values are
//! then `F(raw value)`. Affine and reciprocal maps invert exactly, power maps
//! fall back to a search pruned by [`chain_deviation`].

use std::collections::BTreeSet;

use num::bigint::BigInt;
use num::{Integer, One, Signed, ToPrimitive, Zero};

use super::tail::{apply_maps, chain_deviation, distance_f64, PointMap, TailSpec};
use super::SpectralError;
use crate::exact::ExactComplex;

/// Offsets `y_k` of the leaves in every family of a depth-2 cluster.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChildTemplate {
    pub tail: TailSpec,
    pub removed_prefix: u64,
}

impl ChildTemplate {
    pub fn new(tail: TailSpec) -> Self {
        Self { tail, removed_prefix: 0 }
    }

    pub fn with_removed_prefix(mut self, k: u64) -> Self {
        self.removed_prefix = k;
        self
    }

    fn bound(&self) -> f64 {
        self.tail.magnitude_bound(self.removed_prefix + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cluster {
    raw_limit: ExactComplex,
    tail: TailSpec,
    removed_prefix: u64,
    children: Vec<ChildTemplate>,
    maps: Vec<PointMap>,
    limit: ExactComplex,
}

impl Cluster {
    pub fn new(limit: ExactComplex, tail: TailSpec) -> Result<Self, SpectralError> {
        Self::with_children(limit, tail, 0, Vec::new())
    }

    /// `limit + 1/n`.
    pub fn harmonic(limit: ExactComplex) -> Self {
        Self::new(limit, TailSpec::harmonic(ExactComplex::one())).expect("harmonic tail is valid")
    }

    pub fn with_children(
        limit: ExactComplex,
        tail: TailSpec,
        removed_prefix: u64,
        children: Vec<ChildTemplate>,
    ) -> Result<Self, SpectralError> {
        Self::from_parts(limit, tail, removed_prefix, children, Vec::new())
    }

    pub(crate) fn from_parts(
        raw_limit: ExactComplex,
        tail: TailSpec,
        removed_prefix: u64,
        children: Vec<ChildTemplate>,
        maps: Vec<PointMap>,
    ) -> Result<Self, SpectralError> {
        tail.validate()?;
        let minus_one = -ExactComplex::one();
        for child in &children {
            child.tail.validate()?;
            if child.tail.solve(&minus_one).is_some_and(|k| k > child.removed_prefix) {
                return Err(SpectralError::InvalidCluster(
                    "a child offset equals -1, so a leaf coincides with the cluster limit".into(),
                ));
            }
        }
        let limit = apply_maps(&maps, &raw_limit)
            .ok_or_else(|| SpectralError::UndefinedMap("map chain undefined at the limit".into()))?;
        Ok(Self { raw_limit, tail, removed_prefix, children, maps, limit })
    }

    /// Drops the first `k` level-1 items (never un-drops).
    pub fn with_removed_prefix(mut self, k: u64) -> Self {
        self.removed_prefix = self.removed_prefix.max(k);
        self
    }

    pub fn limit(&self) -> &ExactComplex {
        &self.limit
    }

    pub fn raw_limit(&self) -> &ExactComplex {
        &self.raw_limit
    }

    pub fn tail(&self) -> &TailSpec {
        &self.tail
    }

    pub fn removed_prefix(&self) -> u64 {
        self.removed_prefix
    }

    pub fn children(&self) -> &[ChildTemplate] {
        &self.children
    }

    pub fn maps(&self) -> &[PointMap] {
        &self.maps
    }

    pub fn depth(&self) -> u8 {
        if self.children.is_empty() {
            1
        } else {
            2
        }
    }

    fn child_span(&self) -> f64 {
        self.children.iter().map(ChildTemplate::bound).fold(0.0, f64::max)
    }

    fn first_item(&self) -> u64 {
        self.removed_prefix + 1
    }

    fn has_power_map(&self) -> bool {
        self.maps.iter().any(|m| matches!(m, PointMap::Power(_)))
    }

    fn map(&self, raw: &ExactComplex) -> ExactComplex {
        apply_maps(&self.maps, raw).expect("map chain is defined on every value of the cluster")
    }

    fn raw_level1(&self, n: u64) -> ExactComplex {
        &self.raw_limit + self.tail.offset(n)
    }

    /// Level-1 item `n`: a leaf for depth 1, a family limit for depth 2.
    pub fn level1_value(&self, n: u64) -> ExactComplex {
        self.map(&self.raw_level1(n))
    }

    pub fn leaf_value(&self, m: u64, template: usize, k: u64) -> ExactComplex {
        let off = self.tail.offset(m);
        let y = self.children[template].tail.offset(k);
        self.map(&(&self.raw_limit + &off + &off * &y))
    }

    /// Level-1 values for `n` in `from..to`.
    pub fn level1_values(&self, from: u64, to: u64) -> Vec<ExactComplex> {
        let from = from.max(self.first_item());
        self.tail.offsets(from, to).into_iter().map(|x| self.map(&(&self.raw_limit + x))).collect()
    }

    /// The families of a depth-2 cluster, one depth-1 cluster per template.
    pub fn family(&self, m: u64) -> Vec<Cluster> {
        let off = self.tail.offset(m);
        let raw = &self.raw_limit + &off;
        let limit = self.map(&raw);
        self.children
            .iter()
            .map(|child| Cluster {
                raw_limit: raw.clone(),
                tail: child.tail.scaled(&off),
                removed_prefix: child.removed_prefix,
                children: Vec::new(),
                maps: self.maps.clone(),
                limit: limit.clone(),
            })
            .collect()
    }

    /// The cluster of level-1 items and the limit, with leaves dropped.
    pub fn without_children(&self) -> Cluster {
        Cluster { children: Vec::new(), ..self.clone() }
    }

    fn preimages(&self, v: &ExactComplex) -> Option<Vec<ExactComplex>> {
        if self.has_power_map() {
            return None;
        }
        let mut cur = vec![v.clone()];
        for map in self.maps.iter().rev() {
            cur = cur.iter().flat_map(|u| map.invert(u).unwrap_or_default()).collect();
        }
        Some(cur)
    }

    /// Smallest `n >= from` with `pred(n)`, for a predicate that is monotone false-then-true.
    fn first_index(from: u64, pred: impl Fn(u64) -> bool) -> u64 {
        if pred(from) {
            return from;
        }
        let mut lo = from;
        let mut step = 1u64;
        let mut hi = from.saturating_add(step);
        while !pred(hi) {
            lo = hi;
            step = step.saturating_mul(2);
            hi = from.saturating_add(step);
            assert!(hi < u64::MAX / 2, "index search diverged");
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if pred(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Largest `N` such that every level-1 item beyond `N` (leaves included)
    /// lies within `rho` of the limit.
    pub(crate) fn settle_index(&self, rho: f64) -> u64 {
        let span = 1.0 + self.child_span();
        let first = Self::first_index(self.first_item(), |n| {
            chain_deviation(&self.maps, &self.raw_limit, self.tail.magnitude_bound(n) * span) < rho
        });
        first - 1
    }

    /// Indices `n` with `level1_value(n) == v`.
    pub fn level1_indices(&self, v: &ExactComplex) -> Vec<u64> {
        match self.preimages(v) {
            Some(pre) => {
                let mut out: Vec<u64> = pre
                    .iter()
                    .filter_map(|u| self.tail.solve(&(u - &self.raw_limit)))
                    .filter(|&n| n > self.removed_prefix)
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            }
            None => {
                if *v == self.limit {
                    return Vec::new();
                }
                let d = distance_f64(v, &self.limit);
                let last = Self::first_index(self.first_item(), |n| {
                    chain_deviation(&self.maps, &self.raw_limit, self.tail.magnitude_bound(n)) < d
                });
                (self.first_item()..last)
                    .zip(self.level1_values(self.first_item(), last))
                    .filter(|(_, value)| value == v)
                    .map(|(n, _)| n)
                    .collect()
            }
        }
    }

    /// Leaf coordinates `(family, template, k)` with `leaf_value == v`.
    pub fn leaf_indices(&self, v: &ExactComplex) -> Vec<(u64, usize, u64)> {
        if self.children.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        match self.preimages(v) {
            Some(pre) => {
                for u in pre {
                    let d = &u - &self.raw_limit;
                    if d.is_zero() {
                        continue;
                    }
                    let dabs = d.abs_f64();
                    for (j, child) in self.children.iter().enumerate() {
                        // a power-law parent makes the family range below
                        // unbounded as `d -> 0`; walk the leaf index instead
                        if let Some(ks) = leaf_index_candidates(&self.tail, &child.tail, &d) {
                            for k in ks.into_iter().filter(|&k| k > child.removed_prefix) {
                                let one_plus_y = ExactComplex::one() + child.tail.offset(k);
                                if one_plus_y.is_zero() {
                                    continue;
                                }
                                if let Some(m) = self.tail.solve(&(&d / &one_plus_y)) {
                                    if m >= self.first_item() {
                                        out.push((m, j, k));
                                    }
                                }
                            }
                            continue;
                        }
                        let y = child.bound();
                        let start = if y < 1.0 {
                            Self::first_index(self.first_item(), |m| {
                                self.tail.magnitude_bound(m) * (1.0 - y) <= dabs * (1.0 + 1e-5)
                            })
                        } else {
                            self.first_item()
                        };
                        let end = Self::first_index(start, |m| {
                            self.tail.magnitude_bound(m) * (1.0 + y) < dabs * (1.0 - 1e-9)
                        });
                        for (m, off) in (start..end).zip(self.tail.offsets(start, end)) {
                            let w = &d / &off - ExactComplex::one();
                            if let Some(k) = child.tail.solve(&w) {
                                if k > child.removed_prefix {
                                    out.push((m, j, k));
                                }
                            }
                        }
                    }
                }
            }
            None => {
                if *v == self.limit {
                    return Vec::new();
                }
                let d = distance_f64(v, &self.limit);
                let span = 1.0 + self.child_span();
                let last = Self::first_index(self.first_item(), |n| {
                    chain_deviation(&self.maps, &self.raw_limit, self.tail.magnitude_bound(n) * span) < d
                });
                for m in self.first_item()..last {
                    let off = self.tail.offset(m);
                    let offabs = off.abs_f64();
                    let raw_t = &self.raw_limit + &off;
                    let t = self.map(&raw_t);
                    if t == *v {
                        continue;
                    }
                    let dt = distance_f64(v, &t);
                    for (j, child) in self.children.iter().enumerate() {
                        let first = child.removed_prefix + 1;
                        let kend = Self::first_index(first, |k| {
                            chain_deviation(&self.maps, &raw_t, offabs * child.tail.magnitude_bound(k)) < dt
                        });
                        for k in first..kend {
                            let raw = &raw_t + &off * child.tail.offset(k);
                            if self.map(&raw) == *v {
                                out.push((m, j, k));
                            }
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn contains(&self, v: &ExactComplex) -> bool {
        *v == self.limit || !self.level1_indices(v).is_empty() || !self.leaf_indices(v).is_empty()
    }

    /// Whether `v` is an accumulation point of this cluster.
    pub fn acc_contains(&self, v: &ExactComplex) -> bool {
        *v == self.limit || (self.depth() == 2 && !self.level1_indices(v).is_empty())
    }

    /// The first `count` leaves in canonical order (diagonal over families and leaves).
    pub fn leaves(&self, count: usize) -> Vec<ExactComplex> {
        if self.children.is_empty() {
            let first = self.first_item();
            return self.level1_values(first, first + count as u64);
        }
        let mut out = Vec::with_capacity(count);
        let mut s = 0u64;
        while out.len() < count {
            for a in 0..=s {
                let m = self.first_item() + a;
                for (j, child) in self.children.iter().enumerate() {
                    if out.len() < count {
                        out.push(self.leaf_value(m, j, child.removed_prefix + 1 + (s - a)));
                    }
                }
            }
            s += 1;
        }
        out
    }

    /// Pulls items `removed_prefix+1..=upto` out: leaves become points,
    /// families become depth-1 clusters. Returns them with their indices,
    /// followed by the remainder.
    fn split_prefix(&self, upto: u64) -> (Vec<(u64, Piece)>, Cluster) {
        let first = self.first_item();
        let mut pieces = Vec::new();
        if upto >= first {
            if self.children.is_empty() {
                for (n, v) in (first..=upto).zip(self.level1_values(first, upto + 1)) {
                    pieces.push((n, Piece::Point(v)));
                }
            } else {
                for m in first..=upto {
                    pieces.push((m, Piece::Family(self.family(m))));
                }
            }
        }
        (pieces, self.clone().with_removed_prefix(upto))
    }

    /// This cluster with the listed level-1 items removed.
    pub(crate) fn without_items(&self, items: &BTreeSet<u64>) -> (Vec<ExactComplex>, Vec<Cluster>) {
        let Some(&upto) = items.iter().max() else {
            return (Vec::new(), vec![self.clone()]);
        };
        let (pieces, rest) = self.split_prefix(upto);
        let (mut points, mut clusters) = (Vec::new(), vec![rest]);
        for (n, piece) in pieces {
            if !items.contains(&n) {
                piece.push_into(&mut points, &mut clusters);
            }
        }
        (points, clusters)
    }

    /// Only the listed level-1 items.
    pub(crate) fn items_only(&self, items: &BTreeSet<u64>) -> (Vec<ExactComplex>, Vec<Cluster>) {
        let (mut points, mut clusters) = (Vec::new(), Vec::new());
        for &n in items {
            if n < self.first_item() {
                continue;
            }
            if self.children.is_empty() {
                points.push(self.level1_value(n));
            } else {
                clusters.extend(self.family(n));
            }
        }
        (points, clusters)
    }

    /// Removes isolated values. Values that are not leaves of this cluster are ignored.
    pub(crate) fn excise(&self, holes: &BTreeSet<ExactComplex>) -> (Vec<ExactComplex>, Vec<Cluster>) {
        let upto = if self.children.is_empty() {
            holes.iter().flat_map(|h| self.level1_indices(h)).max()
        } else {
            holes.iter().flat_map(|h| self.leaf_indices(h)).map(|(m, _, _)| m).max()
        };
        let Some(upto) = upto else {
            return (Vec::new(), vec![self.clone()]);
        };
        let (pieces, rest) = self.split_prefix(upto);
        let (mut points, mut clusters) = (Vec::new(), vec![rest]);
        for (_, piece) in pieces {
            match piece {
                Piece::Point(v) => {
                    if !holes.contains(&v) {
                        points.push(v);
                    }
                }
                Piece::Family(fams) => {
                    for fam in fams {
                        let (p, c) = fam.excise(holes);
                        points.extend(p);
                        clusters.extend(c);
                    }
                }
            }
        }
        (points, clusters)
    }

    fn push_map(&self, map: PointMap) -> Result<Cluster, SpectralError> {
        let mut maps = self.maps.clone();
        maps.push(map);
        Self::from_parts(self.raw_limit.clone(), self.tail.clone(), self.removed_prefix, self.children.clone(), maps)
    }

    /// Image under `z -> a z + b`, `a != 0`.
    pub(crate) fn affine(&self, a: &ExactComplex, b: &ExactComplex) -> Cluster {
        debug_assert!(!a.is_zero());
        if self.maps.is_empty() {
            let raw_limit = a * &self.raw_limit + b;
            return Cluster {
                limit: raw_limit.clone(),
                raw_limit,
                tail: self.tail.scaled(a),
                removed_prefix: self.removed_prefix,
                children: self.children.clone(),
                maps: Vec::new(),
            };
        }
        self.push_map(PointMap::Affine { a: a.clone(), b: b.clone() }).expect("affine maps are total")
    }

    /// Image under `z -> z^k`. Closed form survives only for unmapped depth-1 clusters at 0.
    pub(crate) fn power(&self, k: u32) -> Cluster {
        if self.maps.is_empty() && self.raw_limit.is_zero() && self.children.is_empty() {
            return Cluster {
                raw_limit: ExactComplex::zero(),
                tail: self.tail.powered(k),
                removed_prefix: self.removed_prefix,
                children: Vec::new(),
                maps: Vec::new(),
                limit: ExactComplex::zero(),
            };
        }
        self.push_map(PointMap::Power(k)).expect("power maps are total")
    }

    pub(crate) fn reciprocal(&self) -> Result<Cluster, SpectralError> {
        if self.contains(&ExactComplex::zero()) {
            return Err(SpectralError::UndefinedMap("reciprocal of a set containing 0".into()));
        }
        self.push_map(PointMap::Reciprocal)
    }

    pub(crate) fn conj(&self) -> Cluster {
        Cluster {
            raw_limit: self.raw_limit.conj(),
            tail: self.tail.conj(),
            removed_prefix: self.removed_prefix,
            children: self
                .children
                .iter()
                .map(|c| ChildTemplate { tail: c.tail.conj(), removed_prefix: c.removed_prefix })
                .collect(),
            maps: self.maps.iter().map(PointMap::conj).collect(),
            limit: self.limit.conj(),
        }
    }
}

enum Piece {
    Point(ExactComplex),
    Family(Vec<Cluster>),
}

impl Piece {
    fn push_into(self, points: &mut Vec<ExactComplex>, clusters: &mut Vec<Cluster>) {
        match self {
            Piece::Point(v) => points.push(v),
            Piece::Family(f) => clusters.extend(f),
        }
    }
}

/// Common values of two clusters. Where both have sequences converging to
/// the same point the coincidences there are not enumerated; that point is
/// reported in `shared_limits` instead.
#[derive(Debug, Default)]
pub(crate) struct Coincidences {
    pub values: BTreeSet<ExactComplex>,
    pub shared_limits: BTreeSet<ExactComplex>,
}

pub(crate) fn coincidences(y: &Cluster, z: &Cluster, out: &mut Coincidences) {
    if y.limit == z.limit {
        out.shared_limits.insert(y.limit.clone());
        return;
    }
    if z.contains(&y.limit) {
        out.values.insert(y.limit.clone());
    }
    if y.contains(&z.limit) {
        out.values.insert(z.limit.clone());
    }
    // Beyond the settle indices the two clusters live in disjoint balls.
    let rho = distance_f64(&y.limit, &z.limit) / 3.0;
    for (a, b) in [(y, z), (z, y)] {
        let last = a.settle_index(rho);
        let first = a.first_item();
        if last < first {
            continue;
        }
        if a.children.is_empty() {
            for v in a.level1_values(first, last + 1) {
                if b.contains(&v) {
                    out.values.insert(v);
                }
            }
        } else {
            for m in first..=last {
                for fam in a.family(m) {
                    coincidences(&fam, b, out);
                }
            }
        }
    }
}


/// Every `k` that can satisfy `x_m (1 + y_k) = d` for some `m`, when the
/// parent tail is a power law; `None` for geometric parents (whose family
/// range is logarithmic) and when `d` has a large unfactored prime part.
///
/// With `x_m = s / m^p`: `m^p = w (1 + y_k)`, `w = s / d`.
/// * `y_k = c / k^e`: `k^e (m^p δ - W) β = Q δ` over the Gaussian integers,
///   where `w = W / δ` and `w c = Q / β`, so `k^e` divides the content of `Q δ`.
/// * `y_k = b ρ^k`: `|m^p - w| = |w b| |ρ|^k` is at least the distance from
///   `w` to the nearest other integer, which bounds `k`.
fn leaf_index_candidates(parent: &TailSpec, child: &TailSpec, d: &ExactComplex) -> Option<Vec<u64>> {
    let TailSpec::Power { scale, .. } = parent else { return None };
    let w = scale / d;
    match child {
        TailSpec::Power { scale: c, exponent: e } => {
            let (_, delta) = gaussian_parts(&w);
            let (q, _) = gaussian_parts(&(&w * c));
            let content = q.0.gcd(&q.1) * &delta;
            let factors = small_factorization(&content)?;
            Some(power_divisors(&factors, *e))
        }
        TailSpec::Geometric { base, ratio } => {
            let gap = integer_gap(&w);
            let wb = (&w * base).abs_f64();
            let r = ratio.abs().to_f64().unwrap_or(0.0);
            if !(gap > 0.0 && wb.is_finite() && r > 0.0 && r < 1.0) {
                return None;
            }
            let kmax = ((wb / gap).ln() / (1.0 / r).ln()).max(0.0).ceil() as u64 + 2;
            Some((1..=kmax).collect())
        }
    }
}

/// `z = (a + b i) / n` with `a, b` integers and `n > 0`.
fn gaussian_parts(z: &ExactComplex) -> ((BigInt, BigInt), BigInt) {
    let n = z.re.denom().lcm(z.im.denom());
    let a = z.re.numer() * (&n / z.re.denom());
    let b = z.im.numer() * (&n / z.im.denom());
    ((a.abs(), b.abs()), n)
}

/// Lower bound on `|M - w|` over integers `M != w`.
fn integer_gap(w: &ExactComplex) -> f64 {
    if !w.im.is_zero() {
        return w.im.abs().to_f64().unwrap_or(0.0);
    }
    if w.re.is_integer() {
        return 1.0;
    }
    let frac = w.re.fract().abs();
    let frac = frac.to_f64().unwrap_or(0.0);
    frac.min(1.0 - frac) * (1.0 - 1e-12)
}

/// Trial division up to `TRIAL_LIMIT`; `None` if a cofactor with possibly
/// several large primes remains.
fn small_factorization(n: &BigInt) -> Option<Vec<(BigInt, u32)>> {
    const TRIAL_LIMIT: u64 = 1 << 16;
    let mut rest = n.abs();
    if rest.is_zero() {
        return None;
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && BigInt::from(p * p) <= rest {
        let bp = BigInt::from(p);
        let mut a = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            a += 1;
        }
        if a > 0 {
            out.push((bp, a));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        // whatever is left is prime only if no factor below its square root was skipped
        if rest > BigInt::from(TRIAL_LIMIT) * BigInt::from(TRIAL_LIMIT) {
            return None;
        }
        out.push((rest, 1));
    }
    Some(out)
}

/// All `k` with `k^e` dividing `prod p^a`.
fn power_divisors(factors: &[(BigInt, u32)], e: u32) -> Vec<u64> {
    let mut out = vec![BigInt::one()];
    for (p, a) in factors {
        let top = a / e;
        let mut next = Vec::with_capacity(out.len() * (top as usize + 1));
        for k in &out {
            let mut x = k.clone();
            for _ in 0..=top {
                next.push(x.clone());
                x *= p;
            }
        }
        out = next;
    }
    let mut ks: Vec<u64> = out.iter().filter_map(|k| k.to_u64()).collect();
    ks.sort_unstable();
    ks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn q(p: i64, d: i64) -> ExactComplex {
        ExactComplex::frac(p, d)
    }

    fn depth2() -> Cluster {
        // Families with limits 1/m, leaves 1/m + 4^-k / m.
        let child = ChildTemplate::new(TailSpec::geometric(ExactComplex::one(), ratio(1, 4)).unwrap());
        Cluster::with_children(ExactComplex::zero(), TailSpec::harmonic(ExactComplex::one()), 0, vec![child]).unwrap()
    }

    #[test]
    fn harmonic_membership() {
        let c = Cluster::harmonic(ExactComplex::zero());
        assert!(c.contains(&q(1, 7)));
        assert!(c.contains(&ExactComplex::zero()));
        assert!(!c.contains(&q(2, 7)));
        assert_eq!(c.level1_indices(&q(1, 7)), vec![7]);
        let c = c.with_removed_prefix(7);
        assert!(!c.contains(&q(1, 7)));
        assert!(c.contains(&q(1, 8)));
    }

    #[test]
    fn depth2_membership_and_acc() {
        let c = depth2();
        assert_eq!(c.depth(), 2);
        let leaf = q(1, 3) + q(1, 3 * 16);
        assert_eq!(c.leaf_indices(&leaf), vec![(3, 0, 2)]);
        assert!(c.contains(&leaf));
        assert!(!c.acc_contains(&leaf));
        assert!(c.acc_contains(&q(1, 3)));
        assert!(!c.contains(&q(2, 7)));
        assert_eq!(c.leaf_value(3, 0, 2), leaf);
    }

    #[test]
    fn rejects_leaf_on_limit() {
        let child = ChildTemplate::new(TailSpec::geometric(-ExactComplex::one() * ExactComplex::from_ints(2, 0), ratio(1, 2)).unwrap());
        assert!(Cluster::with_children(ExactComplex::zero(), TailSpec::harmonic(ExactComplex::one()), 0, vec![child]).is_err());
    }

    #[test]
    fn power_map_search_matches_forward_values() {
        let c = Cluster::harmonic(ExactComplex::one()).power(2);
        assert!(c.has_power_map());
        for n in [1u64, 2, 5, 40] {
            let v = (ExactComplex::one() + q(1, n as i64)).pow(2);
            assert_eq!(c.level1_indices(&v), vec![n]);
        }
        assert!(!c.contains(&q(5, 3)));
        let d = depth2().affine(&ExactComplex::one(), &ExactComplex::one()).power(3);
        let leaf = (ExactComplex::one() + q(1, 2) + q(1, 8)).pow(3);
        assert_eq!(d.leaf_indices(&leaf), vec![(2, 0, 1)]);
    }

    #[test]
    fn reciprocal_and_affine_chains_invert_exactly() {
        let c = Cluster::harmonic(ExactComplex::from_ints(2, 0)).reciprocal().unwrap();
        let v = (ExactComplex::from_ints(2, 0) + q(1, 9)).recip().unwrap();
        assert_eq!(c.level1_indices(&v), vec![9]);
        assert_eq!(*c.limit(), q(1, 2));
        assert!(Cluster::harmonic(ExactComplex::zero()).reciprocal().is_err());
    }

    #[test]
    fn excise_removes_only_holes() {
        let c = Cluster::harmonic(ExactComplex::zero());
        let holes: BTreeSet<_> = [q(1, 2), q(1, 4)].into_iter().collect();
        let (points, clusters) = c.excise(&holes);
        assert_eq!(points, vec![q(1, 1), q(1, 3)]);
        assert_eq!(clusters.len(), 1);
        assert!(!clusters[0].contains(&q(1, 4)));
        assert!(clusters[0].contains(&q(1, 5)));
    }

    #[test]
    fn coincidences_of_offset_harmonics() {
        let a = Cluster::harmonic(ExactComplex::zero());
        let b = Cluster::harmonic(ExactComplex::one());
        let mut out = Coincidences::default();
        coincidences(&a, &b, &mut out);
        // 1 is in both, 1/n + 1 is never 1/m for n>=1 except through 1 + 1/n = 1/m, impossible.
        let expected: BTreeSet<_> = [ExactComplex::one()].into_iter().collect();
        assert_eq!(out.values, expected);
        assert!(out.shared_limits.is_empty());
    }

    #[test]
    fn power_parent_leaves_far_out() {
        // leaves 2 + (1 + 1/k) / m^2
        let child = ChildTemplate::new(TailSpec::harmonic(ExactComplex::one()));
        let c = Cluster::with_children(q(2, 1), TailSpec::power(ExactComplex::one(), 2).unwrap(), 0, vec![child])
            .unwrap();
        let tiny = ExactComplex::real(crate::exact::ratio(1, 1) / num::pow(crate::exact::int(2), 100));
        assert!(c.leaf_indices(&(q(2, 1) - &tiny)).is_empty());
        assert!(c.leaf_indices(&(q(2, 1) + &tiny)).is_empty());
        // m^2 = 8 (k + 1) / k needs k | 8: (m, k) = (4, 1) and (3, 8)
        assert_eq!(c.leaf_indices(&(q(2, 1) + q(1, 8))), vec![(3, 0, 8), (4, 0, 1)]);
        for (m, k) in [(1, 1), (5, 7), (40, 3), (1000, 999)] {
            let v = c.leaf_value(m, 0, k);
            assert!(c.leaf_indices(&v).contains(&(m, 0, k)), "({m}, {k})");
        }
    }

    #[test]
    fn power_parent_geometric_leaves() {
        let child = ChildTemplate::new(TailSpec::geometric(q(-1, 2), ratio(1, 3)).unwrap());
        let c = Cluster::with_children(q(0, 1), TailSpec::power(ExactComplex::i(), 1).unwrap(), 1, vec![child])
            .unwrap();
        for (m, k) in [(2, 1), (7, 4), (300, 12)] {
            let v = c.leaf_value(m, 0, k);
            assert!(c.leaf_indices(&v).contains(&(m, 0, k)), "({m}, {k})");
        }
        assert!(c.leaf_indices(&c.leaf_value(1, 0, 2)).is_empty());
    }
}
