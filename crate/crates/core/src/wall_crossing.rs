//! Relative disk classes on chart regions, their intersection numbers,
//! wall transport and energies.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SyzError};
use crate::params::ParamSet;
use crate::psi::{psi, BasePoint};

/// Fraction of the smallest norm gap used as the half-width of a wall neighborhood.
pub const WALL_WIDTH_FRACTION: f64 = 0.25;

/// `beta * beta_l + delta * delta + sum_j s[j-1] * S_j`, anchored at chart `l`.
///
/// The delta slot of chart `l` is `delta_{min(l, n)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiskClass {
    pub anchor: usize,
    pub beta: i64,
    pub delta: i64,
    #[serde(rename = "S")]
    pub s: Vec<i64>,
}

impl DiskClass {
    pub fn zero(anchor: usize, n: usize) -> Self {
        DiskClass {
            anchor,
            beta: 0,
            delta: 0,
            s: vec![0; n],
        }
    }

    pub fn beta(anchor: usize, n: usize) -> Self {
        DiskClass {
            beta: 1,
            ..Self::zero(anchor, n)
        }
    }

    pub fn delta(anchor: usize, n: usize) -> Self {
        DiskClass {
            delta: 1,
            ..Self::zero(anchor, n)
        }
    }

    /// The sphere class `S_j`, `1 <= j <= n`.
    pub fn sphere(j: usize, anchor: usize, n: usize) -> Self {
        let mut c = Self::zero(anchor, n);
        c.s[j - 1] = 1;
        c
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    fn delta_index(&self) -> usize {
        self.anchor.min(self.n())
    }

    pub fn add(&self, other: &DiskClass) -> Result<DiskClass> {
        if self.anchor != other.anchor || self.n() != other.n() {
            return Err(SyzError::AnchorMismatch(format!(
                "cannot add classes anchored at {} and {}",
                self.anchor, other.anchor
            )));
        }
        Ok(DiskClass {
            anchor: self.anchor,
            beta: self.beta + other.beta,
            delta: self.delta + other.delta,
            s: self.s.iter().zip(&other.s).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, m: i64) -> DiskClass {
        DiskClass {
            anchor: self.anchor,
            beta: m * self.beta,
            delta: m * self.delta,
            s: self.s.iter().map(|x| m * x).collect(),
        }
    }

    pub fn sub(&self, other: &DiskClass) -> Result<DiskClass> {
        self.add(&other.scale(-1))
    }
}

impl fmt::Display for DiskClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut push = |c: i64, name: String| {
            if c != 0 {
                parts.push(match c {
                    1 => name,
                    -1 => format!("-{name}"),
                    _ => format!("{c}{name}"),
                });
            }
        };
        push(self.beta, format!("b{}", self.anchor));
        push(self.delta, format!("d{}", self.delta_index()));
        for (j, &c) in self.s.iter().enumerate() {
            push(c, format!("S{}", j + 1));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DivisorTag {
    Du(usize),
    Dv(usize),
    AntiCanonical,
}

impl fmt::Display for DivisorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisorTag::Du(k) => write!(f, "Du({k})"),
            DivisorTag::Dv(k) => write!(f, "Dv({k})"),
            DivisorTag::AntiCanonical => write!(f, "D"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RegionTag {
    R(usize),
    Nplus(usize),
    Nminus(usize),
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionTag::R(l) => write!(f, "R({l})"),
            RegionTag::Nplus(k) => write!(f, "N+({k})"),
            RegionTag::Nminus(k) => write!(f, "N-({k})"),
        }
    }
}

impl RegionTag {
    /// Chart indices whose region `U_l` contains this region.
    pub fn charts(self) -> Vec<usize> {
        match self {
            RegionTag::R(l) => vec![l],
            RegionTag::Nplus(k) | RegionTag::Nminus(k) => vec![k, k + 1],
        }
    }

    fn validate(self, n: usize) -> Result<()> {
        let ok = match self {
            RegionTag::R(l) => l <= n + 1,
            RegionTag::Nplus(k) | RegionTag::Nminus(k) => k <= n,
        };
        if ok {
            Ok(())
        } else {
            Err(SyzError::Precondition(format!("region {self} out of range for n = {n}")))
        }
    }

    /// Whether pairing with `d` is defined over this region.
    pub fn pairing_defined(self, d: DivisorTag) -> bool {
        !matches!(
            (self, d),
            (RegionTag::Nminus(k), DivisorTag::Du(j)) | (RegionTag::Nplus(k), DivisorTag::Dv(j)) if k == j
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WallSide {
    Plus,
    Minus,
}

fn ind(b: bool) -> i64 {
    b as i64
}

/// Pairings of the three basis kinds with a divisor, in chart `l`.
fn basis_pairings(l: usize, n: usize, d: DivisorTag) -> (i64, i64, Vec<i64>) {
    let m = l.min(n);
    match d {
        DivisorTag::AntiCanonical => (1, 0, vec![0; n]),
        DivisorTag::Du(k) => (
            0,
            ind(k == m),
            (1..=n).map(|j| ind(k == j) - ind(k + 1 == j)).collect(),
        ),
        DivisorTag::Dv(k) => (
            ind(k < l),
            -ind(k == m),
            (1..=n).map(|j| -ind(k == j) + ind(k + 1 == j)).collect(),
        ),
    }
}

fn check_divisor(d: DivisorTag, n: usize) -> Result<()> {
    match d {
        DivisorTag::Du(k) | DivisorTag::Dv(k) if k > n => Err(SyzError::IndexOutOfRange { index: k, limit: n + 1 }),
        _ => Ok(()),
    }
}

/// `beta_l + |I| delta_l - sum_{j=1}^{l} |I cap [j]| S_j`.
pub fn expand_beta(l: usize, subset: &[usize], n: usize) -> Result<DiskClass> {
    if l > n + 1 {
        return Err(SyzError::IndexOutOfRange { index: l, limit: n + 2 });
    }
    if let Some(&bad) = subset.iter().find(|&&i| i >= l) {
        return Err(SyzError::Precondition(format!("subset element {bad} not in [{l}]")));
    }
    let mut set = subset.to_vec();
    set.sort_unstable();
    set.dedup();
    let mut c = DiskClass::beta(l, n);
    c.delta = set.len() as i64;
    for j in 1..=l.min(n) {
        c.s[j - 1] = -(set.iter().filter(|&&i| i < j).count() as i64);
    }
    Ok(c)
}

pub fn intersect(c: &DiskClass, d: DivisorTag, region: RegionTag) -> Result<i64> {
    let n = c.n();
    region.validate(n)?;
    check_divisor(d, n)?;
    if !region.charts().contains(&c.anchor) {
        return Err(SyzError::AnchorMismatch(format!(
            "class anchored at {} does not live over {region}",
            c.anchor
        )));
    }
    if !region.pairing_defined(d) {
        return Err(SyzError::WallObstructed {
            divisor: d.to_string(),
            region: region.to_string(),
        });
    }
    let (pb, pd, ps) = basis_pairings(c.anchor, n, d);
    Ok(c.beta * pb + c.delta * pd + c.s.iter().zip(&ps).map(|(a, b)| a * b).sum::<i64>())
}

/// Recovers a class from its pairings over `region`, in chart `anchor`.
///
/// `beta` comes from the anticanonical target (default 1), `delta` is the
/// boundary multiple of the vanishing cycle, and the sphere coefficients are
/// propagated from both ends of the chain `m_0 = m_{n+1} = 0`.
pub fn solve_class_from_intersections(
    targets: &BTreeMap<DivisorTag, i64>,
    region: RegionTag,
    anchor: usize,
    boundary_multiple: i64,
    n: usize,
) -> Result<DiskClass> {
    region.validate(n)?;
    if !region.charts().contains(&anchor) {
        return Err(SyzError::AnchorMismatch(format!("chart {anchor} does not contain {region}")));
    }
    let beta = targets.get(&DivisorTag::AntiCanonical).copied().unwrap_or(1);
    let delta = boundary_multiple;
    // steps[k]: m_{k+1} - m_k
    let mut steps: Vec<Option<i64>> = vec![None; n + 1];
    for (&d, &t) in targets {
        check_divisor(d, n)?;
        if !region.pairing_defined(d) {
            return Err(SyzError::WallObstructed {
                divisor: d.to_string(),
                region: region.to_string(),
            });
        }
        let (pb, pd, _) = basis_pairings(anchor, n, d);
        let e = t - beta * pb - delta * pd;
        let (k, step) = match d {
            DivisorTag::Du(k) => (k, -e),
            DivisorTag::Dv(k) => (k, e),
            DivisorTag::AntiCanonical => continue,
        };
        match steps[k] {
            Some(prev) if prev != step => {
                return Err(SyzError::NoIntegralSolution(format!("Du({k}) and Dv({k}) targets disagree")));
            }
            _ => steps[k] = Some(step),
        }
    }
    let mut m: Vec<Option<i64>> = vec![None; n + 2];
    m[0] = Some(0);
    m[n + 1] = Some(0);
    loop {
        let mut changed = false;
        for k in 0..=n {
            if let Some(step) = steps[k] {
                match (m[k], m[k + 1]) {
                    (Some(a), None) => {
                        m[k + 1] = Some(a + step);
                        changed = true;
                    }
                    (None, Some(b)) => {
                        m[k] = Some(b - step);
                        changed = true;
                    }
                    (Some(a), Some(b)) if b - a != step => {
                        return Err(SyzError::NoIntegralSolution(format!(
                            "targets are inconsistent with boundary multiple {boundary_multiple}"
                        )));
                    }
                    _ => {}
                }
            }
        }
        if !changed {
            break;
        }
    }
    let s = m[1..=n]
        .iter()
        .enumerate()
        .map(|(j, v)| v.ok_or_else(|| SyzError::NoIntegralSolution(format!("S_{} is undetermined", j + 1))))
        .collect::<Result<Vec<i64>>>()?;
    Ok(DiskClass { anchor, beta, delta, s })
}

/// Every pairing of `c` defined over `region`.
pub fn intersection_row(c: &DiskClass, region: RegionTag) -> Result<BTreeMap<DivisorTag, i64>> {
    let n = c.n();
    let mut row = BTreeMap::new();
    let mut tags = vec![DivisorTag::AntiCanonical];
    for k in 0..=n {
        tags.push(DivisorTag::Du(k));
        tags.push(DivisorTag::Dv(k));
    }
    for d in tags {
        if region.pairing_defined(d) {
            row.insert(d, intersect(c, d, region)?);
        }
    }
    Ok(row)
}

/// Rewrites `c` in the adjacent chart `to` across the wall neighborhood on `side`.
pub fn monodromy_transport(c: &DiskClass, to: usize, side: WallSide) -> Result<DiskClass> {
    let n = c.n();
    let from = c.anchor;
    if to > n + 1 || (to + 1 != from && from + 1 != to) {
        return Err(SyzError::AnchorMismatch(format!("charts {from} and {to} are not adjacent")));
    }
    let minus = ind(side == WallSide::Minus);
    let mut out = c.clone();
    out.anchor = to;
    if to == from + 1 {
        // beta_l = beta_{l+1} + [minus] delta_l ; delta_l = delta_{l+1} - S_{l+1}
        let d = c.delta + c.beta * minus;
        out.delta = d;
        if to <= n {
            out.s[to - 1] -= d;
        }
    } else {
        // beta_{l+1} = beta_l - [minus] delta_l ; delta_{l+1} = delta_l + S_{l+1}
        out.delta = c.delta - c.beta * minus;
        if from <= n {
            out.s[from - 1] += c.delta;
        }
    }
    Ok(out)
}

/// Loop around the singular point over `a_l`: across `N+(l)` into chart `l+1`, back across `N-(l)`.
pub fn monodromy_loop(c: &DiskClass) -> Result<DiskClass> {
    let l = c.anchor;
    let up = monodromy_transport(c, l + 1, WallSide::Plus)?;
    monodromy_transport(&up, l, WallSide::Minus)
}

/// Matrix of a linear map on the basis `(beta, delta, S_1..S_n)`, columns are images.
pub fn class_matrix<F>(anchor: usize, n: usize, f: F) -> Result<Vec<Vec<i64>>>
where
    F: Fn(&DiskClass) -> Result<DiskClass>,
{
    let mut basis = vec![DiskClass::beta(anchor, n), DiskClass::delta(anchor, n)];
    basis.extend((1..=n).map(|j| DiskClass::sphere(j, anchor, n)));
    let images = basis.iter().map(&f).collect::<Result<Vec<_>>>()?;
    let dim = n + 2;
    let mut m = vec![vec![0; dim]; dim];
    for (col, img) in images.iter().enumerate() {
        m[0][col] = img.beta;
        m[1][col] = img.delta;
        for j in 0..n {
            m[2 + j][col] = img.s[j];
        }
    }
    Ok(m)
}

/// Chart regions on the base, for pairwise-distinct norms.
#[derive(Debug, Clone)]
pub struct Walls {
    norms: Vec<f64>,
    width: f64,
}

impl Walls {
    pub fn new(p: &ParamSet) -> Result<Self> {
        if !p.has_distinct_norms() || !p.is_norm_sorted() {
            return Err(SyzError::Precondition("wall regions need strictly increasing norms".into()));
        }
        let norms = p.norms().to_vec();
        let mut gap = norms[0];
        for w in norms.windows(2) {
            gap = gap.min(w[1] - w[0]);
        }
        Ok(Walls {
            norms,
            width: WALL_WIDTH_FRACTION * gap,
        })
    }

    pub fn n(&self) -> usize {
        self.norms.len() - 1
    }

    /// Half-width of each wall neighborhood in `r`.
    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn norm(&self, k: usize) -> f64 {
        self.norms[k]
    }

    /// Open interval `R_l` of radii.
    pub fn r_interval(&self, l: usize) -> (f64, f64) {
        let lo = if l == 0 { 0.0 } else { self.norms[l - 1] };
        let hi = self.norms.get(l).copied().unwrap_or(f64::INFINITY);
        (lo, hi)
    }

    pub fn contains(&self, region: RegionTag, q: BasePoint) -> bool {
        match region {
            RegionTag::R(l) => {
                let (lo, hi) = self.r_interval(l);
                l <= self.n() + 1 && q.r > lo && q.r < hi
            }
            RegionTag::Nplus(k) => k <= self.n() && q.s > 0.0 && (q.r - self.norms[k]).abs() < self.width,
            RegionTag::Nminus(k) => k <= self.n() && q.s < 0.0 && (q.r - self.norms[k]).abs() < self.width,
        }
    }

    /// Regions of the form `R_l`, `N+-(k)` containing `q`.
    pub fn regions_of(&self, q: BasePoint) -> Vec<RegionTag> {
        let n = self.n();
        let mut out: Vec<RegionTag> = (0..=n + 1).map(RegionTag::R).filter(|&g| self.contains(g, q)).collect();
        for k in 0..=n {
            for g in [RegionTag::Nplus(k), RegionTag::Nminus(k)] {
                if self.contains(g, q) {
                    out.push(g);
                }
            }
        }
        out
    }

    /// Whether `q` lies in `U_l = R_l + N+-(l-1) + N+-(l)`.
    pub fn in_chart(&self, q: BasePoint, l: usize) -> bool {
        self.regions_of(q).iter().any(|g| g.charts().contains(&l))
    }
}

/// Symplectic area of `c` at `q`: `beta (psi - l min(0, s)) + delta s`.
pub fn energy(c: &DiskClass, q: BasePoint, p: &ParamSet, quad_tol: f64) -> Result<f64> {
    let walls = Walls::new(p)?;
    if !walls.in_chart(q, c.anchor) {
        return Err(SyzError::OutsideRegion {
            s: q.s,
            r: q.r,
            chart: c.anchor,
        });
    }
    let mut e = c.delta as f64 * q.s;
    if c.beta != 0 {
        e += c.beta as f64 * (psi(q.s, q.r, p, quad_tol)? - c.anchor as f64 * q.s.min(0.0));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_beta_examples() {
        assert_eq!(expand_beta(2, &[], 2).unwrap(), DiskClass::beta(2, 2));
        let c = expand_beta(2, &[0, 1], 2).unwrap();
        assert_eq!((c.beta, c.delta, c.s.clone()), (1, 2, vec![-1, -2]));
        let c = expand_beta(1, &[0], 2).unwrap();
        assert_eq!((c.beta, c.delta, c.s.clone()), (1, 1, vec![-1, 0]));
        assert_eq!(c.to_string(), "b1 + d1 - S1");
    }

    #[test]
    fn sphere_pairings() {
        let s1 = DiskClass::sphere(1, 1, 2);
        assert_eq!(intersect(&s1, DivisorTag::Du(1), RegionTag::R(1)).unwrap(), 1);
        assert_eq!(intersect(&s1, DivisorTag::Du(0), RegionTag::R(1)).unwrap(), -1);
        assert_eq!(intersect(&s1, DivisorTag::Du(2), RegionTag::R(1)).unwrap(), 0);
        assert_eq!(intersect(&s1, DivisorTag::Dv(1), RegionTag::R(1)).unwrap(), -1);
    }

    #[test]
    fn delta_on_minus_wall() {
        let d = DiskClass::delta(1, 2);
        assert_eq!(intersect(&d, DivisorTag::Dv(1), RegionTag::Nminus(1)).unwrap(), -1);
        assert_eq!(intersect(&d, DivisorTag::Du(1), RegionTag::Nplus(1)).unwrap(), 1);
        assert!(matches!(
            intersect(&d, DivisorTag::Du(1), RegionTag::Nminus(1)),
            Err(SyzError::WallObstructed { .. })
        ));
        assert!(matches!(
            intersect(&d, DivisorTag::Dv(1), RegionTag::Nplus(1)),
            Err(SyzError::WallObstructed { .. })
        ));
    }

    #[test]
    fn beta_i_rows_match_table() {
        let n = 3;
        for l in 0..=n + 1 {
            for mask in 0..1u32 << l {
                let subset: Vec<usize> = (0..l).filter(|i| mask >> i & 1 == 1).collect();
                let c = expand_beta(l, &subset, n).unwrap();
                assert_eq!(intersect(&c, DivisorTag::AntiCanonical, RegionTag::R(l)).unwrap(), 1);
                for k in 0..=n {
                    let du = intersect(&c, DivisorTag::Du(k), RegionTag::R(l)).unwrap();
                    let dv = intersect(&c, DivisorTag::Dv(k), RegionTag::R(l)).unwrap();
                    assert_eq!(du, ind(subset.contains(&k)), "l={l} I={subset:?} k={k}");
                    assert_eq!(dv, ind(k < l && !subset.contains(&k)));
                }
            }
        }
    }

    #[test]
    fn solver_examples() {
        let n = 2;
        let target = expand_beta(2, &[0], n).unwrap();
        let mut du = BTreeMap::new();
        let mut dv = BTreeMap::new();
        for k in 0..=n {
            du.insert(DivisorTag::Du(k), intersect(&target, DivisorTag::Du(k), RegionTag::R(2)).unwrap());
            dv.insert(DivisorTag::Dv(k), intersect(&target, DivisorTag::Dv(k), RegionTag::R(2)).unwrap());
        }
        assert_eq!(solve_class_from_intersections(&du, RegionTag::R(2), 2, 1, n).unwrap(), target);
        assert_eq!(solve_class_from_intersections(&dv, RegionTag::R(2), 2, 1, n).unwrap(), target);
        let mut zero: BTreeMap<DivisorTag, i64> = (0..=n).map(|k| (DivisorTag::Du(k), 0)).collect();
        zero.insert(DivisorTag::AntiCanonical, 0);
        assert_eq!(
            solve_class_from_intersections(&zero, RegionTag::R(1), 1, 0, n).unwrap(),
            DiskClass::zero(1, n)
        );
        assert!(matches!(
            solve_class_from_intersections(&du, RegionTag::R(2), 2, 0, n),
            Err(SyzError::NoIntegralSolution(_))
        ));
    }

    #[test]
    fn transport_examples() {
        let n = 3;
        for l in 0..=n {
            let b = DiskClass::beta(l, n);
            assert_eq!(monodromy_transport(&b, l + 1, WallSide::Plus).unwrap(), DiskClass::beta(l + 1, n));
            assert_eq!(
                monodromy_transport(&b, l + 1, WallSide::Minus).unwrap(),
                expand_beta(l + 1, &[l], n).unwrap()
            );
            let expected = DiskClass::beta(l, n).sub(&DiskClass::delta(l, n)).unwrap();
            assert_eq!(monodromy_loop(&b).unwrap(), expected);
        }
    }

    #[test]
    fn walls_and_energy() {
        let p = ParamSet::reference_a2();
        let walls = Walls::new(&p).unwrap();
        assert_eq!(walls.width(), 0.25);
        let q = BasePoint { s: 0.1, r: 2.1 };
        assert_eq!(walls.regions_of(q), vec![RegionTag::R(2), RegionTag::Nplus(1)]);
        assert!(walls.in_chart(q, 1) && walls.in_chart(q, 2) && !walls.in_chart(q, 3));
        let q = BasePoint { s: -0.3, r: 1.9 };
        let e1 = energy(&DiskClass::beta(1, 2), q, &p, 1e-10).unwrap();
        let e2 = energy(&DiskClass::beta(2, 2), q, &p, 1e-10).unwrap();
        assert!((e1 - e2 - q.s.min(0.0)).abs() < 1e-12);
        assert_eq!(energy(&DiskClass::delta(1, 2), q, &p, 1e-10).unwrap(), q.s);
        assert!(energy(&DiskClass::beta(0, 2), q, &p, 1e-10).is_err());
    }
}
