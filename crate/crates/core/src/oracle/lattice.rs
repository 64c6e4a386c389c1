//! d-dimensional tight-binding models with rectangular domains, a hopping
//! table indexed by (orbitals, domains, displacement), and optional PRF
//! onsite disorder in one domain.
//!
//! Mode index layout: `site * orbitals + orbital`, with the site index
//! row-major in the coordinates (first axis most significant). Mode counts
//! that are not a power of two are padded with decoupled zero modes.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::prf::disorder_prf;
use super::{OracleTuple, SparseAccess};
use crate::error::{Error, Result};
use crate::linalg::ZERO;

/// Matches any domain in a hopping entry.
pub const ANY_DOMAIN: &str = "*";
/// Label of the implicit whole-lattice domain used when none are declared.
pub const WHOLE_LATTICE: &str = "all";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Open,
}

/// Axis-aligned box of sites, corners inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub label: String,
    pub lo: Vec<usize>,
    pub hi: Vec<usize>,
}

impl Domain {
    pub fn contains(&self, x: &[usize]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&xi, (&lo, &hi))| lo <= xi && xi <= hi)
    }

    fn overlaps(&self, other: &Domain) -> bool {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(other.lo.iter().zip(&other.hi))
            .all(|((&a_lo, &a_hi), (&b_lo, &b_hi))| a_lo <= b_hi && b_lo <= a_hi)
    }
}

/// One row of the hopping table g(o1, o2, D(x), D(x+t), t).
#[derive(Debug, Clone, PartialEq)]
pub struct HoppingEntry {
    pub from_orbital: usize,
    pub to_orbital: usize,
    pub from_domain: String,
    pub to_domain: String,
    pub displacement: Vec<i64>,
    pub amplitude: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Disorder {
    pub key: u64,
    pub domain: String,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    pub dims: Vec<usize>,
    pub boundary: Boundary,
    pub orbitals: usize,
    pub domains: Vec<Domain>,
    pub range: usize,
    pub hoppings: Vec<HoppingEntry>,
    pub disorder: Option<Disorder>,
}

impl LatticeSpec {
    /// Single-orbital lattice with one uniform hop along every axis.
    pub fn uniform(dims: &[usize], boundary: Boundary, hop: f64) -> Self {
        let hoppings = (0..dims.len())
            .map(|axis| {
                let mut t = vec![0; dims.len()];
                t[axis] = 1;
                HoppingEntry {
                    from_orbital: 0,
                    to_orbital: 0,
                    from_domain: ANY_DOMAIN.into(),
                    to_domain: ANY_DOMAIN.into(),
                    displacement: t,
                    amplitude: Complex64::new(hop, 0.0),
                }
            })
            .collect();
        LatticeSpec {
            dims: dims.to_vec(),
            boundary,
            orbitals: 1,
            domains: Vec::new(),
            range: 1,
            hoppings,
            disorder: None,
        }
    }

    pub fn chain(length: usize, boundary: Boundary, hop: f64) -> Self {
        Self::uniform(&[length], boundary, hop)
    }

    pub fn sites(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn modes(&self) -> usize {
        self.sites() * self.orbitals
    }

    pub fn with_onsite(mut self, energy: f64) -> Self {
        self.hoppings.push(HoppingEntry {
            from_orbital: 0,
            to_orbital: 0,
            from_domain: ANY_DOMAIN.into(),
            to_domain: ANY_DOMAIN.into(),
            displacement: vec![0; self.dims.len()],
            amplitude: Complex64::new(energy, 0.0),
        });
        self
    }

    pub fn with_disorder(mut self, key: u64, domain: &str, amplitude: f64) -> Self {
        self.disorder = Some(Disorder {
            key,
            domain: domain.into(),
            amplitude,
        });
        self
    }

    /// Site coordinates of a site index.
    pub fn site_coords(&self, mut site: usize) -> Vec<usize> {
        let mut x = vec![0; self.dims.len()];
        for axis in (0..self.dims.len()).rev() {
            x[axis] = site % self.dims[axis];
            site /= self.dims[axis];
        }
        x
    }

    pub fn site_index(&self, x: &[usize]) -> usize {
        x.iter()
            .zip(&self.dims)
            .fold(0, |acc, (&xi, &l)| acc * l + xi)
    }

    pub fn mode_index(&self, x: &[usize], orbital: usize) -> usize {
        self.site_index(x) * self.orbitals + orbital
    }

    /// Label of the domain containing `x`, or `None` outside all domains.
    pub fn domain_of(&self, x: &[usize]) -> Option<&str> {
        if self.domains.is_empty() {
            return Some(WHOLE_LATTICE);
        }
        self.domains
            .iter()
            .find(|d| d.contains(x))
            .map(|d| d.label.as_str())
    }

    /// Site reached from `x` by displacement `t`, honouring the boundary.
    pub fn shift(&self, x: &[usize], t: &[i64]) -> Option<Vec<usize>> {
        let mut y = Vec::with_capacity(x.len());
        for ((&xi, &ti), &l) in x.iter().zip(t).zip(&self.dims) {
            let raw = xi as i64 + ti;
            let l = l as i64;
            match self.boundary {
                Boundary::Periodic => y.push(raw.rem_euclid(l) as usize),
                Boundary::Open => {
                    if raw < 0 || raw >= l {
                        return None;
                    }
                    y.push(raw as usize);
                }
            }
        }
        Some(y)
    }

    /// Hopping-table lookup g(o1, o2, D1, D2, t). An entry declared for the
    /// reverse hop supplies the conjugate, so each term is stated once.
    pub fn hopping(&self, o1: usize, o2: usize, d1: &str, d2: &str, t: &[i64]) -> Complex64 {
        let matches = |pattern: &str, label: &str| pattern == ANY_DOMAIN || pattern == label;
        if let Some(e) = self.hoppings.iter().find(|e| {
            e.from_orbital == o1
                && e.to_orbital == o2
                && matches(&e.from_domain, d1)
                && matches(&e.to_domain, d2)
                && e.displacement == t
        }) {
            return e.amplitude;
        }
        let neg: Vec<i64> = t.iter().map(|v| -v).collect();
        self.hoppings
            .iter()
            .find(|e| {
                e.from_orbital == o2
                    && e.to_orbital == o1
                    && matches(&e.from_domain, d2)
                    && matches(&e.to_domain, d1)
                    && e.displacement == neg
            })
            .map(|e| e.amplitude.conj())
            .unwrap_or(ZERO)
    }

    /// Matrix element h_{(x,o1),(x+t,o2)} including the disorder override.
    pub fn element(&self, x: &[usize], o1: usize, t: &[i64], o2: usize) -> Complex64 {
        let Some(y) = self.shift(x, t) else {
            return ZERO;
        };
        let (Some(d1), Some(d2)) = (self.domain_of(x), self.domain_of(&y)) else {
            return ZERO;
        };
        if t.iter().all(|&v| v == 0) {
            if let Some(dis) = &self.disorder {
                if dis.domain == d1 {
                    return if o1 == o2 {
                        Complex64::new(disorder_prf(dis.key, x, dis.amplitude), 0.0)
                    } else {
                        ZERO
                    };
                }
            }
        }
        self.hopping(o1, o2, d1, d2, t)
    }

    /// All displacements with Manhattan length ≤ range.
    pub fn displacements(&self) -> Vec<Vec<i64>> {
        let d = self.dims.len();
        let l = self.range as i64;
        let mut out = Vec::new();
        let mut t = vec![-l; d];
        loop {
            if t.iter().map(|v| v.abs()).sum::<i64>() <= l {
                out.push(t.clone());
            }
            let mut axis = 0;
            loop {
                if axis == d {
                    return out;
                }
                t[axis] += 1;
                if t[axis] <= l {
                    break;
                }
                t[axis] = -l;
                axis += 1;
            }
        }
    }

    fn domain_labels(&self) -> Vec<String> {
        if self.domains.is_empty() {
            vec![WHOLE_LATTICE.to_string()]
        } else {
            self.domains.iter().map(|d| d.label.clone()).collect()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidLattice(msg));
        let d = self.dims.len();
        if d == 0 {
            return bad("at least one dimension is required".into());
        }
        if self.dims.iter().any(|&l| l == 0) {
            return bad("side lengths must be positive".into());
        }
        if self.orbitals == 0 {
            return bad("orbitals must be at least 1".into());
        }
        if self.boundary == Boundary::Periodic {
            if let Some(&l) = self.dims.iter().find(|&&l| l <= 2 * self.range) {
                return bad(format!(
                    "periodic side length {l} must exceed twice the hopping range {}",
                    self.range
                ));
            }
        }
        for dom in &self.domains {
            if dom.label == ANY_DOMAIN {
                return bad("`*` is reserved and cannot label a domain".into());
            }
            if dom.lo.len() != d || dom.hi.len() != d {
                return bad(format!("domain `{}` has wrong dimensionality", dom.label));
            }
            for axis in 0..d {
                if dom.lo[axis] > dom.hi[axis] || dom.hi[axis] >= self.dims[axis] {
                    return bad(format!("domain `{}` lies outside the lattice", dom.label));
                }
            }
        }
        for (a, da) in self.domains.iter().enumerate() {
            for db in &self.domains[a + 1..] {
                if da.overlaps(db) {
                    return bad(format!("domains `{}` and `{}` overlap", da.label, db.label));
                }
            }
        }
        let labels = self.domain_labels();
        let known = |l: &str| l == ANY_DOMAIN || labels.iter().any(|k| k == l);
        for e in &self.hoppings {
            if e.amplitude.norm() > 1.0 {
                return Err(Error::AmplitudeTooLarge {
                    value: e.amplitude.norm(),
                    context: format!("hop {:?}", e.displacement),
                });
            }
            if e.displacement.len() != d {
                return bad(format!(
                    "displacement {:?} has wrong dimensionality",
                    e.displacement
                ));
            }
            let len: i64 = e.displacement.iter().map(|v| v.abs()).sum();
            if len as usize > self.range {
                return bad(format!(
                    "displacement {:?} exceeds range {}",
                    e.displacement, self.range
                ));
            }
            if e.from_orbital >= self.orbitals || e.to_orbital >= self.orbitals {
                return bad("hopping orbital index out of range".into());
            }
            if !known(&e.from_domain) || !known(&e.to_domain) {
                return bad(format!(
                    "unknown domain in hop `{}` -> `{}`",
                    e.from_domain, e.to_domain
                ));
            }
        }
        if let Some(dis) = &self.disorder {
            if !labels.iter().any(|k| *k == dis.domain) {
                return bad(format!("unknown disorder domain `{}`", dis.domain));
            }
            if !(0.0..=1.0).contains(&dis.amplitude) {
                return Err(Error::AmplitudeTooLarge {
                    value: dis.amplitude,
                    context: "disorder amplitude W".into(),
                });
            }
        }
        // The forward and reverse lookups must agree for every concrete
        // domain pair, otherwise h would not be Hermitian.
        for e in &self.hoppings {
            let neg: Vec<i64> = e.displacement.iter().map(|v| -v).collect();
            for d1 in &labels {
                for d2 in &labels {
                    let fwd = self.hopping(e.from_orbital, e.to_orbital, d1, d2, &e.displacement);
                    let rev = self.hopping(e.to_orbital, e.from_orbital, d2, d1, &neg);
                    if (fwd - rev.conj()).norm() > 0.0 {
                        return bad(format!(
                            "hop {:?} between `{d1}` and `{d2}` is declared inconsistently with its reverse",
                            e.displacement
                        ));
                    }
                    let onsite =
                        e.from_orbital == e.to_orbital && e.displacement.iter().all(|&v| v == 0);
                    if onsite && fwd.im != 0.0 {
                        return bad("onsite energies must be real".into());
                    }
                }
            }
        }
        Ok(())
    }
}

struct TightBinding {
    spec: LatticeSpec,
    displacements: Vec<Vec<i64>>,
}

impl TightBinding {
    fn row_map(&self, i: usize) -> BTreeMap<usize, Complex64> {
        let mut row = BTreeMap::new();
        if i >= self.spec.modes() {
            return row;
        }
        let x = self.spec.site_coords(i / self.spec.orbitals);
        let o1 = i % self.spec.orbitals;
        for t in &self.displacements {
            let Some(y) = self.spec.shift(&x, t) else {
                continue;
            };
            for o2 in 0..self.spec.orbitals {
                let v = self.spec.element(&x, o1, t, o2);
                if v != ZERO {
                    let j = self.spec.mode_index(&y, o2);
                    *row.entry(j).or_insert(ZERO) += v;
                }
            }
        }
        row.retain(|_, v| *v != ZERO);
        row
    }
}

impl SparseAccess for TightBinding {
    fn row(&self, i: usize) -> Vec<usize> {
        self.row_map(i).into_keys().collect()
    }

    fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.row_map(i).get(&j).copied().unwrap_or(ZERO)
    }

    fn row_entries(&self, i: usize) -> Vec<(usize, Complex64)> {
        self.row_map(i).into_iter().collect()
    }

    fn describe(&self) -> String {
        format!(
            "tight-binding dims={:?} {:?} orbitals={}",
            self.spec.dims, self.spec.boundary, self.spec.orbitals
        )
    }
}

/// Oracle for the single-particle matrix of a tight-binding model.
pub fn build_tight_binding(spec: &LatticeSpec) -> Result<OracleTuple> {
    spec.validate()?;
    let access = TightBinding {
        displacements: spec.displacements(),
        spec: spec.clone(),
    };
    let modes = spec.modes();
    let mut s = 0;
    let mut max_entry: f64 = 0.0;
    for i in 0..modes {
        let row = access.row_map(i);
        s = s.max(row.len());
        for v in row.values() {
            max_entry = max_entry.max(v.norm());
        }
    }
    let n = crate::linalg::qubits_for(modes);
    Ok(OracleTuple::new(n, s, modes, max_entry, Arc::new(access)))
}
