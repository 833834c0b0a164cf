//! Fock-space sectors: enumeration, ranking and unranking.
//!
//! A basis state records one occupation number per site for the itinerant
//! species (fermions or bosons) and one excitation bit per site for the
//! qubits. States inside a sector are kept in lexicographic order of the
//! concatenated sequence `(n_1, .., n_L, σ_1, .., σ_L)`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the number of states a sector may hold.
pub const DEFAULT_STATE_CAP: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Species {
    Fermion,
    Boson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mixing {
    /// Excitation-conserving `g(a†σ + σ†a)`.
    #[serde(rename = "JC")]
    JaynesCummings,
    /// `g(a† + a)(σ† + σ)`, conserving only the excitation parity.
    Rabi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn admits(self, total: u32) -> bool {
        match self {
            Parity::Even => total % 2 == 0,
            Parity::Odd => total % 2 == 1,
        }
    }
}

/// Joint occupation record for one lattice configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FockState {
    /// Fermion or boson numbers `n_i`.
    pub occupations: Vec<u8>,
    /// Qubit excitation bits `σ_i`.
    pub qubits: Vec<u8>,
}

impl FockState {
    pub fn new(occupations: Vec<u8>, qubits: Vec<u8>) -> Self {
        debug_assert_eq!(occupations.len(), qubits.len());
        Self { occupations, qubits }
    }

    pub fn vacuum(sites: usize) -> Self {
        Self::new(vec![0; sites], vec![0; sites])
    }

    pub fn sites(&self) -> usize {
        self.occupations.len()
    }

    pub fn particle_count(&self) -> u32 {
        self.occupations.iter().map(|&n| n as u32).sum()
    }

    pub fn qubit_count(&self) -> u32 {
        self.qubits.iter().map(|&s| s as u32).sum()
    }

    /// Total excitation number `N = Σ (n_i + σ_i)`.
    pub fn excitations(&self) -> u32 {
        self.particle_count() + self.qubit_count()
    }

    /// Cyclic shift by `shift` sites: site `i` moves to site `i + shift`.
    pub fn translated(&self, shift: usize) -> Self {
        let l = self.sites();
        if l == 0 {
            return self.clone();
        }
        let shift = shift % l;
        let mut occupations = vec![0; l];
        let mut qubits = vec![0; l];
        for i in 0..l {
            occupations[(i + shift) % l] = self.occupations[i];
            qubits[(i + shift) % l] = self.qubits[i];
        }
        Self { occupations, qubits }
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for n in &self.occupations {
            write!(f, "{n}")?;
        }
        write!(f, ";")?;
        for s in &self.qubits {
            write!(f, "{s}")?;
        }
        write!(f, ">")
    }
}

/// Quantum numbers labelling a sector.
///
/// Which constraints are admissible depends on `(species, mixing)`:
///
/// | variant       | constraints                                                       |
/// |---------------|-------------------------------------------------------------------|
/// | JC, any       | `excitations` (fixed N) or `max_excitations` (union N ≤ N_max)    |
/// | Rabi, fermion | optional `parity`                                                 |
/// | Rabi, boson   | `max_excitations` (+ optional `parity`), or `max_bosons` (+ optional `qubit_pattern`) |
///
/// With a `qubit_pattern` the qubit bits are read as `σ^x` eigenvalue labels
/// `m_i = (σ^x_i + 1)/2` rather than `σ^z` occupations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SectorSpec {
    pub species: Species,
    pub mixing: Mixing,
    pub sites: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub excitations: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_excitations: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_bosons: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubit_pattern: Option<Vec<u8>>,
}

impl SectorSpec {
    fn bare(species: Species, mixing: Mixing, sites: usize) -> Self {
        Self {
            species,
            mixing,
            sites,
            excitations: None,
            parity: None,
            max_excitations: None,
            max_bosons: None,
            qubit_pattern: None,
        }
    }

    pub fn jc_fermion(sites: usize, excitations: u32) -> Self {
        Self { excitations: Some(excitations), ..Self::bare(Species::Fermion, Mixing::JaynesCummings, sites) }
    }

    pub fn jc_boson(sites: usize, excitations: u32) -> Self {
        Self { excitations: Some(excitations), ..Self::bare(Species::Boson, Mixing::JaynesCummings, sites) }
    }

    /// Union of the JC sectors with `N ≤ max_excitations`.
    pub fn jc_truncated(species: Species, sites: usize, max_excitations: u32) -> Self {
        Self { max_excitations: Some(max_excitations), ..Self::bare(species, Mixing::JaynesCummings, sites) }
    }

    pub fn rabi_fermion(sites: usize, parity: Option<Parity>) -> Self {
        Self { parity, ..Self::bare(Species::Fermion, Mixing::Rabi, sites) }
    }

    pub fn rabi_boson(sites: usize, max_excitations: u32, parity: Option<Parity>) -> Self {
        Self {
            max_excitations: Some(max_excitations),
            parity,
            ..Self::bare(Species::Boson, Mixing::Rabi, sites)
        }
    }

    /// Boson-number truncation with all qubit configurations present.
    pub fn rabi_boson_capped(sites: usize, max_bosons: u32) -> Self {
        Self { max_bosons: Some(max_bosons), ..Self::bare(Species::Boson, Mixing::Rabi, sites) }
    }

    /// Boson-number truncation at a fixed `σ^x` qubit pattern.
    pub fn rabi_boson_pattern(sites: usize, max_bosons: u32, pattern: Vec<u8>) -> Self {
        Self {
            max_bosons: Some(max_bosons),
            qubit_pattern: Some(pattern),
            ..Self::bare(Species::Boson, Mixing::Rabi, sites)
        }
    }

    /// Same sector at a different excitation number (JC only).
    pub fn with_excitations(&self, excitations: u32) -> Self {
        Self { excitations: Some(excitations), ..self.clone() }
    }

    pub fn is_pattern_sector(&self) -> bool {
        self.qubit_pattern.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSector(msg));
        if self.sites == 0 {
            return bad("sites must be positive".into());
        }
        if self.sites > 64 {
            return bad(format!("{} sites is beyond any dense workflow", self.sites));
        }
        let l = self.sites as u32;
        match (self.mixing, self.species) {
            (Mixing::JaynesCummings, species) => {
                if self.parity.is_some() || self.max_bosons.is_some() || self.qubit_pattern.is_some() {
                    return bad("JC sectors are labelled by the excitation number only".into());
                }
                match (self.excitations, self.max_excitations) {
                    (Some(n), None) => {
                        if species == Species::Fermion && n >= 2 * l && n != 0 {
                            return bad(format!("JC-fermion sector needs N < 2L, got N={n}, L={l}"));
                        }
                    }
                    (None, Some(_)) => {}
                    _ => return bad("JC sectors need exactly one of `excitations` or `max_excitations`".into()),
                }
            }
            (Mixing::Rabi, Species::Fermion) => {
                if self.excitations.is_some()
                    || self.max_excitations.is_some()
                    || self.max_bosons.is_some()
                    || self.qubit_pattern.is_some()
                {
                    return bad("Rabi-fermion sectors are labelled by parity only".into());
                }
            }
            (Mixing::Rabi, Species::Boson) => {
                if self.excitations.is_some() {
                    return bad("Rabi mixing does not conserve N; use `max_excitations`".into());
                }
                match (self.max_excitations, self.max_bosons) {
                    (Some(_), None) => {
                        if self.qubit_pattern.is_some() {
                            return bad("a qubit pattern requires the `max_bosons` truncation".into());
                        }
                    }
                    (None, Some(_)) => {
                        if self.parity.is_some() {
                            return bad("parity is not a label of the `max_bosons` truncation".into());
                        }
                        if let Some(p) = &self.qubit_pattern {
                            if p.len() != self.sites || p.iter().any(|&b| b > 1) {
                                return bad("qubit pattern must be L bits".into());
                            }
                        }
                    }
                    _ => {
                        return bad("Rabi-boson sectors need exactly one of `max_excitations` or `max_bosons`".into())
                    }
                }
            }
        }
        Ok(())
    }

    /// Closed-form sector dimension.
    pub fn analytic_dimension(&self) -> u128 {
        let l = self.sites as u64;
        match (self.mixing, self.species) {
            (Mixing::JaynesCummings, Species::Fermion) => match (self.excitations, self.max_excitations) {
                (Some(n), _) => binomial(2 * l, n as u64),
                (None, Some(m)) => (0..=m as u64).map(|n| binomial(2 * l, n)).sum(),
                _ => 0,
            },
            (Mixing::JaynesCummings, Species::Boson) => match (self.excitations, self.max_excitations) {
                (Some(n), _) => jc_boson_dimension(l, n as u64),
                (None, Some(m)) => (0..=m as u64).map(|n| jc_boson_dimension(l, n)).sum(),
                _ => 0,
            },
            (Mixing::Rabi, Species::Fermion) => match self.parity {
                Some(_) => 1u128 << (2 * l - 1),
                None => 1u128 << (2 * l),
            },
            (Mixing::Rabi, Species::Boson) => {
                if let Some(m) = self.max_excitations {
                    let counts: Vec<u128> = (0..=m as u64).map(|n| jc_boson_dimension(l, n)).collect();
                    counts
                        .iter()
                        .enumerate()
                        .filter(|(n, _)| self.parity.is_none_or(|p| p.admits(*n as u32)))
                        .map(|(_, c)| c)
                        .sum()
                } else {
                    let nb = self.max_bosons.unwrap_or(0) as u64;
                    // compositions of at most nb bosons over l sites
                    let bosons = binomial(nb + l, l as u32 as u64);
                    if self.qubit_pattern.is_some() {
                        bosons
                    } else {
                        bosons << l
                    }
                }
            }
        }
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Σ_M C(L, M)·C(N − M + L − 1, N − M) over `0 ≤ M ≤ min(N, L)`.
fn jc_boson_dimension(l: u64, n: u64) -> u128 {
    (0..=n.min(l))
        .map(|m| binomial(l, m) * binomial(n - m + l - 1, n - m))
        .sum()
}

/// Ordered enumeration of a sector together with its inverse lookup.
#[derive(Debug, Clone)]
pub struct Basis {
    spec: SectorSpec,
    states: Vec<FockState>,
    index: HashMap<FockState, usize>,
}

impl Basis {
    pub fn spec(&self) -> &SectorSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn sites(&self) -> usize {
        self.spec.sites
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn state_at(&self, k: usize) -> Result<&FockState> {
        self.states
            .get(k)
            .ok_or(Error::IndexOutOfRange { index: k, dim: self.states.len() })
    }

    pub fn index_of(&self, state: &FockState) -> Result<usize> {
        self.find(state)
            .ok_or_else(|| Error::StateNotInSector(state.to_string()))
    }

    /// Lookup that treats states outside the sector as absent.
    pub fn find(&self, state: &FockState) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn contains(&self, state: &FockState) -> bool {
        self.index.contains_key(state)
    }
}

/// Enumerate a sector with the default state cap.
pub fn enumerate_sector(spec: &SectorSpec) -> Result<Basis> {
    enumerate_sector_capped(spec, DEFAULT_STATE_CAP)
}

pub fn enumerate_sector_capped(spec: &SectorSpec, cap: usize) -> Result<Basis> {
    spec.validate()?;
    let expected = spec.analytic_dimension();
    if expected > cap as u128 {
        return Err(Error::DimensionCap { dim: expected, cap });
    }

    let mut walker = Walker::new(spec);
    walker.run();
    let states = walker.out;
    debug_assert_eq!(states.len() as u128, expected);

    let index = states
        .iter()
        .enumerate()
        .map(|(k, s)| (s.clone(), k))
        .collect();
    Ok(Basis { spec: spec.clone(), states, index })
}

/// Depth-first walk over positions `n_1..n_L, σ_1..σ_L` in ascending value
/// order, which yields states in lexicographic order.
struct Walker<'a> {
    spec: &'a SectorSpec,
    l: usize,
    occ: Vec<u8>,
    qubits: Vec<u8>,
    out: Vec<FockState>,
}

impl<'a> Walker<'a> {
    fn new(spec: &'a SectorSpec) -> Self {
        let l = spec.sites;
        Self { spec, l, occ: vec![0; l], qubits: vec![0; l], out: Vec::new() }
    }

    fn run(&mut self) {
        self.occupation(0, 0);
    }

    /// Upper bound on the total still admissible given `used` excitations.
    fn total_budget(&self, used: u32) -> Option<u32> {
        match (self.spec.excitations, self.spec.max_excitations) {
            (Some(n), _) | (None, Some(n)) => Some(n.saturating_sub(used)),
            _ => None,
        }
    }

    fn occupation(&mut self, site: usize, used: u32) {
        if site == self.l {
            self.qubit(0, used);
            return;
        }
        let mut top = match self.spec.species {
            Species::Fermion => 1,
            Species::Boson => u32::MAX,
        };
        if let Some(b) = self.total_budget(used) {
            top = top.min(b);
        }
        if let Some(nb) = self.spec.max_bosons {
            top = top.min(nb.saturating_sub(used));
        }
        for n in 0..=top {
            if self.spec.excitations.is_some() && !self.exact_reachable(site + 1, used + n) {
                continue;
            }
            self.occ[site] = n as u8;
            self.occupation(site + 1, used + n);
        }
        self.occ[site] = 0;
    }

    /// Whether the fixed total can still be met from position `next_site`
    /// in the occupation part (the qubit part adds at most L).
    fn exact_reachable(&self, next_site: usize, used: u32) -> bool {
        let n = self.spec.excitations.unwrap_or(0);
        if used > n {
            return false;
        }
        let rest_occ = (self.l - next_site) as u32;
        let cap = match self.spec.species {
            Species::Fermion => rest_occ + self.l as u32,
            Species::Boson => {
                if rest_occ > 0 {
                    u32::MAX
                } else {
                    self.l as u32
                }
            }
        };
        n - used <= cap
    }

    fn qubit(&mut self, site: usize, used: u32) {
        if site == self.l {
            if self.accept(used) {
                self.out.push(FockState::new(self.occ.clone(), self.qubits.clone()));
            }
            return;
        }
        let choices: &[u8] = match &self.spec.qubit_pattern {
            Some(p) => {
                if p[site] == 1 {
                    &[1]
                } else {
                    &[0]
                }
            }
            None => &[0, 1],
        };
        for &s in choices {
            if self.spec.qubit_pattern.is_none() {
                if let Some(b) = self.total_budget(used) {
                    if (s as u32) > b {
                        continue;
                    }
                }
                if let Some(n) = self.spec.excitations {
                    let remaining = (self.l - site - 1) as u32;
                    let after = used + s as u32;
                    if after > n || n - after > remaining {
                        continue;
                    }
                }
            }
            self.qubits[site] = s;
            self.qubit(site + 1, used + s as u32);
        }
        self.qubits[site] = 0;
    }

    fn accept(&self, total: u32) -> bool {
        if let Some(n) = self.spec.excitations {
            if total != n {
                return false;
            }
        }
        if let Some(p) = self.spec.parity {
            if !p.admits(total) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn large_sector_dimensions() {
        let jc = SectorSpec::jc_fermion(10, 5);
        assert_eq!(jc.analytic_dimension(), 15504);
        assert_eq!(enumerate_sector(&jc).unwrap().dim(), 15504);

        let rabi = SectorSpec::rabi_fermion(7, Some(Parity::Even));
        assert_eq!(enumerate_sector(&rabi).unwrap().dim(), 8192);
    }

    #[test]
    fn jc_boson_two_sites_one_excitation() {
        let b = enumerate_sector(&SectorSpec::jc_boson(2, 1)).unwrap();
        assert_eq!(b.dim(), 4);
        let expect = [
            FockState::new(vec![0, 0], vec![0, 1]),
            FockState::new(vec![0, 0], vec![1, 0]),
            FockState::new(vec![0, 1], vec![0, 0]),
            FockState::new(vec![1, 0], vec![0, 0]),
        ];
        assert_eq!(b.states(), &expect);
    }

    #[test]
    fn jc_fermion_two_sites_one_excitation() {
        let b = enumerate_sector(&SectorSpec::jc_fermion(2, 1)).unwrap();
        let got: Vec<String> = b.states().iter().map(|s| s.to_string()).collect();
        assert_eq!(got, ["|00;01>", "|00;10>", "|01;00>", "|10;00>"]);
        assert_eq!(b.state_at(0).unwrap(), &b.states()[0]);
    }

    #[test]
    fn zero_excitations_is_vacuum() {
        for spec in [
            SectorSpec::jc_fermion(5, 0),
            SectorSpec::jc_boson(4, 0),
            SectorSpec::rabi_boson(3, 0, None),
        ] {
            let b = enumerate_sector(&spec).unwrap();
            assert_eq!(b.dim(), 1);
            assert_eq!(b.states()[0], FockState::vacuum(spec.sites));
        }
    }

    #[test]
    fn rabi_fermion_parity_is_respected() {
        let even = enumerate_sector(&SectorSpec::rabi_fermion(4, Some(Parity::Even))).unwrap();
        assert!(even.states().iter().all(|s| s.excitations() % 2 == 0));
        let odd = enumerate_sector(&SectorSpec::rabi_fermion(4, Some(Parity::Odd))).unwrap();
        assert!(odd.states().iter().all(|s| s.excitations() % 2 == 1));
        assert_eq!(even.dim() + odd.dim(), 256);
    }

    #[test]
    fn inconsistent_specs_are_rejected() {
        let mut s = SectorSpec::rabi_fermion(3, None);
        s.excitations = Some(2);
        assert!(matches!(enumerate_sector(&s), Err(Error::InvalidSector(_))));

        let mut s = SectorSpec::jc_fermion(3, 2);
        s.parity = Some(Parity::Even);
        assert!(enumerate_sector(&s).is_err());

        assert!(enumerate_sector(&SectorSpec::jc_fermion(3, 6)).is_err());

        let mut s = SectorSpec::rabi_boson(3, 4, None);
        s.max_bosons = Some(2);
        assert!(enumerate_sector(&s).is_err());

        let s = SectorSpec::rabi_boson_pattern(3, 2, vec![1, 0]);
        assert!(enumerate_sector(&s).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let spec = SectorSpec::jc_fermion(10, 5);
        match enumerate_sector_capped(&spec, 1000) {
            Err(Error::DimensionCap { dim, cap }) => {
                assert_eq!(dim, 15504);
                assert_eq!(cap, 1000);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn lookup_errors() {
        let b = enumerate_sector(&SectorSpec::jc_fermion(3, 1)).unwrap();
        assert!(matches!(b.state_at(6), Err(Error::IndexOutOfRange { index: 6, dim: 6 })));
        let outside = FockState::new(vec![1, 1, 0], vec![0, 0, 0]);
        assert!(matches!(b.index_of(&outside), Err(Error::StateNotInSector(_))));
    }

    #[test]
    fn pattern_sector_fixes_qubits() {
        let b = enumerate_sector(&SectorSpec::rabi_boson_pattern(3, 2, vec![0, 1, 0])).unwrap();
        assert_eq!(b.dim(), 10);
        assert!(b.states().iter().all(|s| s.qubits == [0, 1, 0] && s.particle_count() <= 2));
    }

    #[test]
    fn translation_cycles_back() {
        let s = FockState::new(vec![2, 0, 1, 0], vec![0, 1, 1, 0]);
        assert_eq!(s.translated(1), FockState::new(vec![0, 2, 0, 1], vec![0, 0, 1, 1]));
        assert_eq!(s.translated(4), s);
    }

    /// Brute-force count: filter every configuration with per-site boson
    /// occupations below `cap`.
    fn brute_force(spec: &SectorSpec, occ_cap: u8) -> usize {
        let l = spec.sites;
        let occ_vals = match spec.species {
            Species::Fermion => 2u64,
            Species::Boson => occ_cap as u64 + 1,
        };
        let total = occ_vals.pow(l as u32) << l;
        let mut count = 0;
        for code in 0..total {
            let mut c = code;
            let mut occ = vec![0u8; l];
            let mut q = vec![0u8; l];
            for s in q.iter_mut() {
                *s = (c & 1) as u8;
                c >>= 1;
            }
            for n in occ.iter_mut() {
                *n = (c % occ_vals) as u8;
                c /= occ_vals;
            }
            let st = FockState::new(occ, q);
            let n = st.excitations();
            let ok = match (spec.mixing, spec.species) {
                (Mixing::JaynesCummings, _) => Some(n) == spec.excitations,
                (Mixing::Rabi, Species::Fermion) => spec.parity.map_or(true, |p| p.admits(n)),
                (Mixing::Rabi, Species::Boson) => {
                    n <= spec.max_excitations.unwrap() && spec.parity.map_or(true, |p| p.admits(n))
                }
            };
            if ok {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn dimensions_match_brute_force() {
        for l in 1..=5usize {
            for n in 0..(2 * l as u32) {
                let spec = SectorSpec::jc_fermion(l, n);
                assert_eq!(enumerate_sector(&spec).unwrap().dim(), brute_force(&spec, 1), "{spec:?}");
            }
            for n in 0..=4u32 {
                let spec = SectorSpec::jc_boson(l, n);
                assert_eq!(enumerate_sector(&spec).unwrap().dim(), brute_force(&spec, n as u8), "{spec:?}");
            }
            for parity in [None, Some(Parity::Even), Some(Parity::Odd)] {
                let spec = SectorSpec::rabi_fermion(l, parity);
                assert_eq!(enumerate_sector(&spec).unwrap().dim(), brute_force(&spec, 1));
            }
            if l <= 4 {
                for nmax in 0..=4u32 {
                    let spec = SectorSpec::rabi_boson(l, nmax, Some(Parity::Even));
                    assert_eq!(enumerate_sector(&spec).unwrap().dim(), brute_force(&spec, nmax as u8));
                }
            }
        }
        assert_eq!(SectorSpec::jc_fermion(6, 3).analytic_dimension(), 220);
    }

    fn arb_spec() -> impl Strategy<Value = SectorSpec> {
        prop_oneof![
            (1usize..=7).prop_flat_map(|l| (Just(l), 0..(2 * l as u32)))
                .prop_map(|(l, n)| SectorSpec::jc_fermion(l, n)),
            (1usize..=5, 0u32..=5).prop_map(|(l, n)| SectorSpec::jc_boson(l, n)),
            (1usize..=6, prop::option::of(prop_oneof![Just(Parity::Even), Just(Parity::Odd)]))
                .prop_map(|(l, p)| SectorSpec::rabi_fermion(l, p)),
            (1usize..=4, 0u32..=5).prop_map(|(l, n)| SectorSpec::rabi_boson(l, n, None)),
            (1usize..=4, 0u32..=4).prop_map(|(l, n)| SectorSpec::rabi_boson_capped(l, n)),
        ]
    }

    proptest! {
        #[test]
        fn rank_unrank_bijection(spec in arb_spec()) {
            let b = enumerate_sector(&spec).unwrap();
            prop_assert_eq!(b.dim() as u128, spec.analytic_dimension());
            for (k, s) in b.states().iter().enumerate() {
                prop_assert_eq!(b.index_of(s).unwrap(), k);
            }
            prop_assert!(b.states().windows(2).all(|w| w[0] < w[1]));
        }
    }
}
