//! Tiles and spectra in `Z_{n_1} x ... x Z_{n_d}`.
//!
//! Elements are encoded in mixed radix with the first axis most significant,
//! so encoded order is lexicographic order of the coordinate vectors.
//! Both searches look for sets `A` containing 0 whose pairwise differences
//! avoid a forbidden set, which is a fixed-size clique search:
//!
//! * complements of `Omega`: `|A| = |G| / |Omega|` and
//!   `(A - A) cap (Omega - Omega) = {0}`;
//! * spectra of `Omega`: `|A| = |Omega|` and the character sum
//!   `F(d) = sum_{x in Omega} exp(2 pi i sum_j d_j x_j / n_j)` vanishes on
//!   `A - A` minus 0.
//!
//! Each translate class is reported once, by its lexicographically smallest
//! member among the translates that contain 0.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::{modulus, turn};
use crate::numerics::seeded_rng;
use crate::{Error, Result};

/// Largest group searched exhaustively.
pub const EXHAUSTIVE_GROUP_LIMIT: usize = 4096;

/// Largest group accepted at all.
const GROUP_LIMIT: usize = 1 << 24;

/// Character sums at or below `SPECTRUM_TOLERANCE * |Omega|` count as zero.
pub const SPECTRUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Group {
    moduli: Vec<u32>,
    order: usize,
    /// `lcm(n_1, ..., n_d)`; angles are exact multiples of `2 pi / lcm`.
    lcm: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Group {
    fn new(moduli: &[u32]) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidInstance("need at least one modulus".into()));
        }
        if moduli.contains(&0) {
            return Err(Error::InvalidInstance("moduli must be positive".into()));
        }
        let mut order = 1usize;
        let mut lcm = 1u64;
        for &n in moduli {
            order = order.saturating_mul(n as usize);
            if order > GROUP_LIMIT {
                return Err(Error::InvalidInstance(alloc::format!("group order exceeds {GROUP_LIMIT}")));
            }
            lcm = lcm / gcd(lcm, u64::from(n)) * u64::from(n);
        }
        Ok(Self {
            moduli: moduli.to_vec(),
            order,
            lcm,
        })
    }

    fn dimension(&self) -> usize {
        self.moduli.len()
    }

    fn reduce(&self, x: &[i64]) -> Result<Vec<u32>> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: x.len(),
            });
        }
        Ok(x.iter()
            .zip(&self.moduli)
            .map(|(&v, &n)| v.rem_euclid(i64::from(n)) as u32)
            .collect())
    }

    fn encode(&self, x: &[u32]) -> usize {
        x.iter().zip(&self.moduli).fold(0, |acc, (&v, &n)| acc * n as usize + v as usize)
    }

    fn decode(&self, mut e: usize) -> Vec<u32> {
        let mut out = vec![0; self.dimension()];
        for j in (0..self.dimension()).rev() {
            let n = self.moduli[j] as usize;
            out[j] = (e % n) as u32;
            e /= n;
        }
        out
    }

    fn combine(&self, a: usize, b: usize, subtract: bool) -> usize {
        let mut out = 0usize;
        let mut weight = 1usize;
        let (mut a, mut b) = (a, b);
        for j in (0..self.dimension()).rev() {
            let n = self.moduli[j] as usize;
            let (x, y) = (a % n, b % n);
            let v = if subtract { (x + n - y) % n } else { (x + y) % n };
            out += v * weight;
            weight *= n;
            a /= n;
            b /= n;
        }
        out
    }

    fn add(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, false)
    }

    fn sub(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, true)
    }

    /// `sum_{x in omega} exp(2 pi i sum_j d_j x_j / n_j)`.
    fn character_sum(&self, d: usize, omega: &[usize]) -> Complex64 {
        let dd = self.decode(d);
        omega
            .iter()
            .map(|&x| {
                let xx = self.decode(x);
                let mut num = 0u64;
                for j in 0..self.dimension() {
                    let scale = self.lcm / u64::from(self.moduli[j]);
                    num = (num + u64::from(dd[j]) * u64::from(xx[j]) % u64::from(self.moduli[j]) * scale) % self.lcm;
                }
                turn(num as f64 / self.lcm as f64)
            })
            .sum()
    }
}

/// `Omega` and a candidate `A` in a finite abelian group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupInstance {
    group: Group,
    omega: Vec<usize>,
    candidate: Vec<usize>,
}

fn encode_set(group: &Group, points: &[Vec<i64>], what: &str) -> Result<Vec<usize>> {
    if points.is_empty() {
        return Err(Error::InvalidInstance(alloc::format!("{what} is empty")));
    }
    let mut out = Vec::with_capacity(points.len());
    let mut seen = BTreeSet::new();
    for p in points {
        let e = group.encode(&group.reduce(p)?);
        if !seen.insert(e) {
            return Err(Error::InvalidInstance(alloc::format!("{what} repeats an element")));
        }
        out.push(e);
    }
    Ok(out)
}

impl GroupInstance {
    /// Coordinates are reduced modulo the moduli; both sets must be nonempty
    /// and free of repeats after reduction.
    pub fn new(moduli: &[u32], omega: &[Vec<i64>], candidate: &[Vec<i64>]) -> Result<Self> {
        let group = Group::new(moduli)?;
        let omega = encode_set(&group, omega, "omega")?;
        let candidate = encode_set(&group, candidate, "candidate")?;
        Ok(Self { group, omega, candidate })
    }

    pub fn moduli(&self) -> &[u32] {
        &self.group.moduli
    }

    pub fn group_order(&self) -> usize {
        self.group.order
    }

    pub fn omega(&self) -> Vec<Vec<u32>> {
        self.omega.iter().map(|&e| self.group.decode(e)).collect()
    }

    pub fn candidate(&self) -> Vec<Vec<u32>> {
        self.candidate.iter().map(|&e| self.group.decode(e)).collect()
    }

    /// The same instance with `Omega` and `A` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            group: self.group.clone(),
            omega: self.candidate.clone(),
            candidate: self.omega.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilingCheck {
    pub tiles: bool,
    /// Multiplicity of `g = omega + a` for every group element, in encoded
    /// (lexicographic) order.
    pub coverage: Vec<u32>,
}

/// Whether every group element is `omega + a` in exactly one way.
pub fn tiles(instance: &GroupInstance) -> TilingCheck {
    let g = &instance.group;
    let mut coverage = vec![0u32; g.order];
    for &a in &instance.candidate {
        for &w in &instance.omega {
            coverage[g.add(w, a)] += 1;
        }
    }
    TilingCheck {
        tiles: coverage.iter().all(|&c| c == 1),
        coverage,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumCheck {
    pub is_spectrum: bool,
    /// `max_{a != a'} |<chi_a, chi_a'>_Omega|`.
    pub max_defect: f64,
}

/// Whether the characters indexed by `A` are an orthogonal basis of
/// functions on `Omega`: `|A| = |Omega|` and pairwise orthogonality.
pub fn is_spectrum(instance: &GroupInstance) -> SpectrumCheck {
    let g = &instance.group;
    let a = &instance.candidate;
    let mut max_defect = 0.0_f64;
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            max_defect = max_defect.max(modulus(g.character_sum(g.sub(a[i], a[j]), &instance.omega)));
        }
    }
    let tol = SPECTRUM_TOLERANCE * instance.omega.len() as f64;
    SpectrumCheck {
        is_spectrum: a.len() == instance.omega.len() && max_defect <= tol,
        max_defect,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchKind {
    Tilings,
    Spectra,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Exhaustive search gives up after this many search nodes.
    pub node_budget: u64,
    /// Greedy attempts when the search is not exhaustive.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            node_budget: 50_000_000,
            samples: 2_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub kind: SearchKind,
    /// One representative per translate class, each sorted, in
    /// lexicographic order.
    pub found: Vec<Vec<Vec<u32>>>,
    /// The list is complete.
    pub exhaustive: bool,
    /// Search nodes visited plus greedy attempts.
    pub count_examined: u64,
    /// Why the search returned early, if it did.
    pub note: Option<String>,
}

/// All complements `A` with `Omega + A = G` (one per translate class).
pub fn search_complements(moduli: &[u32], omega: &[Vec<i64>], options: &SearchOptions) -> Result<SearchResult> {
    let group = Group::new(moduli)?;
    let omega = encode_set(&group, omega, "omega")?;
    if group.order % omega.len() != 0 {
        return Ok(SearchResult {
            kind: SearchKind::Tilings,
            found: Vec::new(),
            exhaustive: true,
            count_examined: 0,
            note: Some(alloc::format!(
                "|Omega| = {} does not divide the group order {}",
                omega.len(),
                group.order
            )),
        });
    }
    let mut forbidden = vec![false; group.order];
    for &x in &omega {
        for &y in &omega {
            forbidden[group.sub(x, y)] = true;
        }
    }
    let allowed: Vec<bool> = forbidden.iter().map(|f| !f).collect();
    let size = group.order / omega.len();
    let verify = |set: &[usize]| {
        tiles(&GroupInstance {
            group: group.clone(),
            omega: omega.clone(),
            candidate: set.to_vec(),
        })
        .tiles
    };
    search(&group, &allowed, size, SearchKind::Tilings, options, verify)
}

/// All spectra `A` of `Omega` (one per translate class).
pub fn search_spectra(moduli: &[u32], omega: &[Vec<i64>], options: &SearchOptions) -> Result<SearchResult> {
    let group = Group::new(moduli)?;
    let omega = encode_set(&group, omega, "omega")?;
    let tol = SPECTRUM_TOLERANCE * omega.len() as f64;
    let allowed: Vec<bool> = (0..group.order)
        .map(|d| d != 0 && modulus(group.character_sum(d, &omega)) <= tol)
        .collect();
    let size = omega.len();
    let verify = |set: &[usize]| {
        is_spectrum(&GroupInstance {
            group: group.clone(),
            omega: omega.clone(),
            candidate: set.to_vec(),
        })
        .is_spectrum
    };
    search(&group, &allowed, size, SearchKind::Spectra, options, verify)
}

fn search(
    group: &Group,
    allowed: &[bool],
    size: usize,
    kind: SearchKind,
    options: &SearchOptions,
    verify: impl Fn(&[usize]) -> bool,
) -> Result<SearchResult> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut examined = 0u64;
    let mut note = None;
    let neighbours: Vec<usize> = (1..group.order).filter(|&v| allowed[v]).collect();

    let exhaustive = if group.order <= EXHAUSTIVE_GROUP_LIMIT {
        let mut cliques = CliqueSearch {
            group,
            allowed,
            size,
            budget: options.node_budget,
            examined: 0,
            current: vec![0],
            found: &mut found,
        };
        let complete = cliques.extend(&neighbours);
        examined += cliques.examined;
        if !complete {
            note = Some(alloc::format!("node budget {} exhausted; sampling", options.node_budget));
        }
        complete
    } else {
        note = Some(alloc::format!(
            "group order {} exceeds {EXHAUSTIVE_GROUP_LIMIT}; sampling",
            group.order
        ));
        false
    };

    if !exhaustive {
        let mut rng = seeded_rng(options.seed);
        let mut order = neighbours.clone();
        for _ in 0..options.samples {
            examined += 1;
            rng.shuffle(&mut order);
            let mut set = vec![0usize];
            for &v in &order {
                if set.len() == size {
                    break;
                }
                if set.iter().all(|&u| allowed[group.sub(v, u)]) {
                    set.push(v);
                }
            }
            if set.len() == size {
                set.sort_unstable();
                found.insert(set);
            }
        }
    }

    let mut classes: BTreeSet<Vec<usize>> = BTreeSet::new();
    for set in &found {
        if !verify(set) {
            return Err(Error::InvalidInstance("search produced a set that fails verification".into()));
        }
        classes.insert(canonical(group, set));
    }
    Ok(SearchResult {
        kind,
        found: classes
            .into_iter()
            .map(|set| set.into_iter().map(|e| group.decode(e)).collect())
            .collect(),
        exhaustive,
        count_examined: examined,
        note,
    })
}

/// Lexicographically smallest sorted `S - s`, `s in S`.
fn canonical(group: &Group, set: &[usize]) -> Vec<usize> {
    set.iter()
        .map(|&s| {
            let mut t: Vec<usize> = set.iter().map(|&x| group.sub(x, s)).collect();
            t.sort_unstable();
            t
        })
        .min()
        .unwrap_or_default()
}

struct CliqueSearch<'a> {
    group: &'a Group,
    allowed: &'a [bool],
    size: usize,
    budget: u64,
    examined: u64,
    current: Vec<usize>,
    found: &'a mut BTreeSet<Vec<usize>>,
}

impl CliqueSearch<'_> {
    /// Extends `current` by increasing vertices from `candidates`, all of
    /// which are compatible with every vertex already chosen. Returns false
    /// when the node budget runs out.
    fn extend(&mut self, candidates: &[usize]) -> bool {
        self.examined += 1;
        if self.examined > self.budget {
            return false;
        }
        if self.current.len() == self.size {
            self.found.insert(self.current.clone());
            return true;
        }
        let needed = self.size - self.current.len();
        for (i, &v) in candidates.iter().enumerate() {
            if candidates.len() - i < needed {
                break;
            }
            let next: Vec<usize> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&w| self.allowed[self.group.sub(w, v)])
                .collect();
            if next.len() + 1 < needed {
                continue;
            }
            self.current.push(v);
            let complete = self.extend(&next);
            self.current.pop();
            if !complete {
                return false;
            }
        }
        true
    }
}

/// Complement and spectrum families of a cube and its dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeReport {
    pub moduli: Vec<u32>,
    pub side: u32,
    /// Complements of `{0..side-1}^d`.
    pub tilings: SearchResult,
    /// Spectra of the dual cube `prod_j {0..n_j/side-1}`.
    pub spectra: SearchResult,
    pub equal: bool,
}

impl CubeReport {
    pub fn exhaustive(&self) -> bool {
        self.tilings.exhaustive && self.spectra.exhaustive
    }
}

/// Compares the sets that tile with the cube of side `side` against the
/// spectra of the dual cube of side `n_j / side`, the finite counterpart of
/// rescaling the unit cube: a set of translates of one cube is a spectrum of
/// the other exactly when it tiles.
pub fn cube_equivalence_check(moduli: &[u32], side: u32, options: &SearchOptions) -> Result<CubeReport> {
    Group::new(moduli)?;
    if side == 0 {
        return Err(Error::InvalidInstance("side must be positive".into()));
    }
    if let Some(&n) = moduli.iter().find(|&&n| n % side != 0) {
        return Err(Error::SideNotDividing { side, modulus: n });
    }
    let cube = box_points(&vec![side; moduli.len()]);
    let dual = box_points(&moduli.iter().map(|n| n / side).collect::<Vec<_>>());
    let tilings = search_complements(moduli, &cube, options)?;
    let spectra = search_spectra(moduli, &dual, options)?;
    let equal = tilings.found == spectra.found;
    Ok(CubeReport {
        moduli: moduli.to_vec(),
        side,
        tilings,
        spectra,
        equal,
    })
}

/// `prod_j {0, ..., sides[j] - 1}` in lexicographic order.
pub fn box_points(sides: &[u32]) -> Vec<Vec<i64>> {
    let total: usize = sides.iter().map(|&s| s as usize).product();
    (0..total)
        .map(|mut k| {
            let mut p = vec![0i64; sides.len()];
            for j in (0..sides.len()).rev() {
                p[j] = (k % sides[j] as usize) as i64;
                k /= sides[j] as usize;
            }
            p
        })
        .collect()
}
