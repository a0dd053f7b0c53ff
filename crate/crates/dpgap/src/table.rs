//! Gap tables: method dispatch, adaptive precision, plot coordinates and densities.

use crate::error::{Error, Result};
use crate::family::{make_family_with, FamilyName, FamilyOptions, FamilySpec, LatticeKind};
use crate::lax::gap_values_general;
use crate::oracle::{build_ortho_basis_covering, gap_probabilities_gram};
use crate::painleve::run_painleve;
use crate::scalar::Real;
use std::fmt;
use std::str::FromStr;

/// Route used to produce `D_s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Oracle,
    General,
    Painleve,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Oracle, Method::General, Method::Painleve];

    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::General => "general",
            Method::Painleve => "painleve",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// Parses a decimal literal or a quotient `a/b` of two literals at the working precision.
pub fn parse_real<T: Real>(s: &str) -> Option<T> {
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b) = (T::parse(a)?, T::parse(b)?);
            if b.is_zero() {
                None
            } else {
                Some(a / b)
            }
        }
        None => T::parse(s),
    }
}

/// Everything needed to rebuild a run at any precision.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub family: FamilyName,
    /// Parameter values as given, so they can be re-read at higher precision.
    pub params: Vec<(String, String)>,
    pub options: FamilyOptions,
    pub k: usize,
    pub s_max: usize,
    /// Starting precision in bits.
    pub precision: u32,
    /// Double the precision until two consecutive runs agree to `tol`.
    pub adaptive: bool,
    pub max_precision: u32,
    pub tol: f64,
}

impl RunSpec {
    pub fn new(family: FamilyName, params: &[(&str, &str)], k: usize, s_max: usize) -> Self {
        RunSpec {
            family,
            params: params.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            options: FamilyOptions::default(),
            k,
            s_max,
            precision: crate::DEFAULT_PRECISION,
            adaptive: true,
            max_precision: 8192,
            tol: 1e-20,
        }
    }

    /// The family with parameters read at the current working precision.
    pub fn build<T: Real>(&self) -> Result<FamilySpec<T>> {
        let mut vals = Vec::with_capacity(self.params.len());
        for (key, raw) in &self.params {
            let v = parse_real::<T>(raw).ok_or_else(|| Error::InvalidParameter {
                family: self.family.key().to_string(),
                name: key.clone(),
                reason: format!("cannot parse `{raw}`"),
            })?;
            vals.push((key.as_str(), v));
        }
        let f = make_family_with(self.family, &vals, self.options)?;
        self.check_range(&f)?;
        Ok(f)
    }

    fn check_range<T: Real>(&self, f: &FamilySpec<T>) -> Result<()> {
        let bad = |name: &str, reason: String| Error::InvalidParameter {
            family: self.family.key().to_string(),
            name: name.to_string(),
            reason,
        };
        if self.k == 0 {
            return Err(bad("k", "must be at least 1".to_string()));
        }
        if self.s_max < self.k {
            return Err(Error::EmptyRange { k: self.k, s_max: self.s_max });
        }
        if let Some(n) = f.n() {
            if self.k > n + 1 {
                return Err(bad("k", format!("exceeds the {} lattice points", n + 1)));
            }
            if self.s_max > n + 1 {
                return Err(bad("smax", format!("must not exceed N + 1 = {}", n + 1)));
            }
        }
        Ok(())
    }
}

/// `D_k..=D_{s_last}` by one method at the working precision.
pub fn gap_values<T: Real>(f: &FamilySpec<T>, k: usize, s_last: usize, method: Method) -> Result<Vec<T>> {
    match method {
        Method::General => gap_values_general(f, k, s_last),
        Method::Painleve => Ok(run_painleve(f, k, s_last)?.values),
        Method::Oracle => {
            if s_last < k {
                return Err(Error::EmptyRange { k, s_max: s_last });
            }
            let top = s_last.min(crate::lax::last_nontrivial(f));
            let tail = T::tolerance().powi(2);
            let basis = build_ortho_basis_covering(f, k, &tail, top + 1)?;
            let mut v = gap_probabilities_gram(&basis, k, top)?.split_off(k);
            v.resize(s_last - k + 1, T::one());
            Ok(v)
        }
    }
}

/// Result of an adaptive run.
#[derive(Debug, Clone, PartialEq)]
pub struct Converged<T> {
    /// `D_k..=D_{s_max+1}`.
    pub values: Vec<T>,
    /// Precision of `values`.
    pub precision: u32,
    /// Largest relative difference to the run at half the precision; zero if not adaptive.
    pub discrepancy: f64,
}

fn max_rel_diff<T: Real>(a: &[T], b: &[T]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| T::rel_diff(x, y).to_f64_lossy())
        .fold(0.0, f64::max)
}

fn values_at<T: Real>(spec: &RunSpec, method: Method, bits: u32) -> Result<Vec<T>> {
    T::with_precision(bits, || {
        let f = spec.build::<T>()?;
        let last = (spec.s_max + 1).min(crate::lax::last_nontrivial(&f));
        let mut v = gap_values(&f, spec.k, last, method)?;
        v.resize(spec.s_max + 2 - spec.k, T::one());
        Ok(v)
    })
}

/// Runs `method` at the starting precision and, if adaptive, keeps doubling it until two
/// consecutive runs agree to `tol`. Numerical failures also trigger a retry.
pub fn compute_adaptive<T: Real>(spec: &RunSpec, method: Method) -> Result<Converged<T>> {
    let mut bits = spec.precision;
    let first = values_at::<T>(spec, method, bits);
    if !spec.adaptive {
        return first.map(|values| Converged {
            values,
            precision: T::with_precision(bits, T::working_precision),
            discrepancy: 0.0,
        });
    }
    let mut prev = match first {
        Err(e) if !e.is_numerical() => return Err(e),
        r => r,
    };
    let mut last_gap = f64::INFINITY;
    loop {
        // machine types cannot go any further
        if T::with_precision(bits, T::working_precision) != bits {
            return prev.map(|values| Converged {
                values,
                precision: T::working_precision(),
                discrepancy: 0.0,
            });
        }
        let next_bits = bits.saturating_mul(2);
        if next_bits > spec.max_precision {
            return Err(match prev {
                Err(e) => e,
                Ok(_) => Error::PrecisionExhausted { bits, discrepancy: last_gap },
            });
        }
        let next = match values_at::<T>(spec, method, next_bits) {
            Err(e) if !e.is_numerical() => return Err(e),
            r => r,
        };
        if let (Ok(a), Ok(b)) = (&prev, &next) {
            last_gap = max_rel_diff(a, b);
            if last_gap <= spec.tol {
                return Ok(Converged {
                    values: b.clone(),
                    precision: next_bits,
                    discrepancy: last_gap,
                });
            }
        }
        prev = next;
        bits = next_bits;
    }
}

/// x-axis coordinate of the plot at lattice index `s`.
pub fn x_coord<T: Real>(f: &FamilySpec<T>, s: usize) -> T {
    let q = match f.q() {
        Some(q) => q,
        None => return T::int(s as i64),
    };
    match f.name {
        FamilyName::QKrawtchouk => {
            let n = f.n().expect("finite lattice");
            let qn = q.powi(-(n as i32)) - T::one();
            T::int(n as i64) * (q.powi(-(s as i32)) - T::one()) / qn
        }
        FamilyName::AlternativeQCharlier => q.powi(-(s as i32)),
        _ => f.pi(s),
    }
}

/// Jackson measure of the cell at `s`, so that `density · width = D_{s+1} - D_s`.
pub fn cell_width<T: Real>(f: &FamilySpec<T>, s: usize) -> T {
    let q = match f.q() {
        Some(q) => q,
        None => return T::one(),
    };
    let one_q = T::one() - q.clone();
    match f.name {
        FamilyName::QKrawtchouk => {
            let n = f.n().expect("finite lattice");
            let qn = q.powi(-(n as i32)) - T::one();
            T::int(n as i64) * q.powi(-(s as i32)) * one_q / qn
        }
        FamilyName::AlternativeQCharlier => q.powi(-(s as i32)) * one_q,
        _ => f.pi(s).abs() * one_q,
    }
}

/// Difference (linear lattice) or q-derivative (q-lattice) of `D` at `s`.
pub fn density<T: Real>(f: &FamilySpec<T>, s: usize, d_s: &T, d_next: &T) -> T {
    (d_next.clone() - d_s.clone()) / cell_width(f, s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapRow<T> {
    pub s: usize,
    pub pi: T,
    pub x_coord: T,
    pub d: T,
    pub density: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableMeta {
    pub family: FamilyName,
    pub params: Vec<(String, String)>,
    pub k: usize,
    pub precision: u32,
    pub method: Method,
    pub discrepancy: f64,
}

/// Rows `s = k..=s_max` of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct GapTable<T> {
    pub meta: TableMeta,
    pub rows: Vec<GapRow<T>>,
    /// `D_{s_max+1}`, needed for the last density.
    pub d_end: T,
}

impl<T: Real> GapTable<T> {
    /// `D_k..=D_{s_max+1}` laid out as rows for family `f`.
    pub fn from_values(f: &FamilySpec<T>, meta: TableMeta, values: &[T]) -> Self {
        let k = meta.k;
        let rows = values
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let s = k + i;
                GapRow {
                    s,
                    pi: f.pi(s),
                    x_coord: x_coord(f, s),
                    d: w[0].clone(),
                    density: density(f, s, &w[0], &w[1]),
                }
            })
            .collect();
        GapTable {
            meta,
            rows,
            d_end: values.last().cloned().unwrap_or_else(T::one),
        }
    }

    /// `Σ density · width` over the rows, i.e. `D_{s_max+1} - D_k`.
    pub fn mass(&self, f: &FamilySpec<T>) -> T {
        self.rows
            .iter()
            .fold(T::zero(), |acc, r| acc + r.density.clone() * cell_width(f, r.s))
    }

    pub fn min_density(&self) -> Option<T> {
        self.rows
            .iter()
            .map(|r| r.density.clone())
            .reduce(T::min_of)
    }

    /// True when `D` never decreases by more than `slack`.
    pub fn is_monotone(&self, slack: &T) -> bool {
        let mut ds: Vec<&T> = self.rows.iter().map(|r| &r.d).collect();
        ds.push(&self.d_end);
        ds.windows(2).all(|w| w[1].clone() - w[0].clone() >= -slack.clone())
    }

    pub fn d_values(&self) -> Vec<T> {
        self.rows.iter().map(|r| r.d.clone()).collect()
    }
}

/// Adaptive run of `method` laid out as a table at the converged precision.
pub fn gap_table<T: Real>(spec: &RunSpec, method: Method) -> Result<GapTable<T>> {
    let c = compute_adaptive::<T>(spec, method)?;
    T::with_precision(c.precision, || {
        let f = spec.build::<T>()?;
        let meta = TableMeta {
            family: spec.family,
            params: spec.params.clone(),
            k: spec.k,
            precision: c.precision,
            method,
            discrepancy: c.discrepancy,
        };
        Ok(GapTable::from_values(&f, meta, &c.values))
    })
}

/// Whether the family is on a q-lattice, i.e. densities are q-derivatives.
pub fn is_q_lattice(name: FamilyName) -> bool {
    name.lattice_kind() != LatticeKind::Linear
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::BigFloat;
    use num_traits::{One, Signed};

    #[test]
    fn fractions() {
        assert_eq!(parse_real::<f64>("1/4"), Some(0.25));
        assert_eq!(parse_real::<f64>("2.5"), Some(2.5));
        assert_eq!(parse_real::<f64>("1/0"), None);
        assert_eq!(parse_real::<f64>("x"), None);
    }

    #[test]
    fn single_row() {
        let spec = RunSpec::new(FamilyName::Charlier, &[("a", "1")], 1, 1);
        let t = gap_table::<BigFloat>(&spec, Method::General).unwrap();
        assert_eq!(t.rows.len(), 1);
        let e = (-BigFloat::one()).exp();
        assert!(BigFloat::rel_diff(&t.rows[0].d, &e).to_f64_lossy() < 1e-40);
        assert!(BigFloat::rel_diff(&t.d_end, &(e.clone() + e)).to_f64_lossy() < 1e-40);
    }

    #[test]
    fn empty_range() {
        let spec = RunSpec::new(FamilyName::Charlier, &[("a", "1")], 3, 2);
        assert!(matches!(
            gap_table::<f64>(&spec, Method::General),
            Err(Error::EmptyRange { .. })
        ));
    }

    #[test]
    fn finite_lattice_end() {
        let spec = RunSpec::new(FamilyName::Krawtchouk, &[("p", "0.3"), ("N", "10")], 2, 11);
        let t = gap_table::<BigFloat>(&spec, Method::General).unwrap();
        assert_eq!(t.d_end, BigFloat::one());
        assert!(t.is_monotone(&BigFloat::lit(1e-30)));
        let f = spec.build::<BigFloat>().unwrap();
        let m = t.mass(&f);
        assert!((m - (BigFloat::one() - t.rows[0].d.clone())).abs() < BigFloat::lit(1e-40));
    }

    #[test]
    fn adaptive_recovers_long_q_run() {
        let mut spec = RunSpec::new(FamilyName::QCharlier, &[("a", "20"), ("q", "0.96")], 6, 120);
        spec.tol = 1e-25;
        let c = compute_adaptive::<BigFloat>(&spec, Method::General).unwrap();
        assert!(c.precision > 256);
        assert!(c.discrepancy <= 1e-25);
        let o = compute_adaptive::<BigFloat>(&spec, Method::Oracle).unwrap();
        assert!(max_rel_diff(&c.values, &o.values) < 1e-20);
    }
}
