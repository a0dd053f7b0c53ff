//! `verify`: every invariant the library knows, step by step at a fixed precision.

use crate::config::RunConfig;
use crate::error::CliError;
use dpgap::lax::{check_state, init_state, last_nontrivial, step_general};
use dpgap::painleve::qp6::{js_extract, js_step, qp6_build, qp6_compat_residual, JsVars};
use dpgap::painleve::{painleve_route, run_painleve};
use dpgap::table::{gap_values, Method};
use dpgap::{BigFloat, Error, LaxState, Real};
use std::fmt::Write as _;

type B = BigFloat;

/// Worst residual of one invariant and the first step where it exceeded the threshold.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub worst: f64,
    pub worst_s: Option<usize>,
    pub first_fail: Option<usize>,
    pub note: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            name,
            worst: 0.0,
            worst_s: None,
            first_fail: None,
            note: None,
        }
    }

    fn record(&mut self, s: usize, value: f64, threshold: f64) {
        if value.is_nan() || value > self.worst {
            self.worst = value;
            self.worst_s = Some(s);
        }
        if (value.is_nan() || value > threshold) && self.first_fail.is_none() {
            self.first_fail = Some(s);
        }
    }

    fn fail_with(&mut self, s: Option<usize>, msg: String) {
        self.worst = f64::INFINITY;
        self.first_fail = Some(s.unwrap_or(0));
        self.note = Some(msg);
    }

    pub fn passed(&self) -> bool {
        self.first_fail.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub threshold: f64,
    pub checks: Vec<Check>,
    pub skipped: Option<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// Failed check with the smallest first failing step.
    pub fn first_degraded(&self) -> Option<&Check> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .min_by_key(|c| c.first_fail)
    }

    pub fn render(&self, header: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{header}");
        if let Some(why) = &self.skipped {
            let _ = writeln!(out, "{why}");
            return out;
        }
        let _ = writeln!(out, "threshold {:.3e}", self.threshold);
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            let at = c.worst_s.map(|s| format!(" at s={s}")).unwrap_or_default();
            let _ = write!(out, "{status} {:<16} worst {:.3e}{at}", c.name, c.worst);
            if let Some(s) = c.first_fail {
                let _ = write!(out, ", first failing s={s}");
            }
            if let Some(n) = &c.note {
                let _ = write!(out, " ({n})");
            }
            out.push('\n');
        }
        match self.first_degraded() {
            Some(c) => {
                let _ = writeln!(out, "first degraded: {} at s={}", c.name, c.first_fail.unwrap_or(0));
            }
            None => out.push_str("all checks passed\n"),
        }
        out
    }
}

fn lossy(x: &B) -> f64 {
    x.to_f64_lossy()
}

fn step_of(e: &Error) -> Option<usize> {
    CliError::Lib(e.clone()).step()
}

/// Agreement of two value lists starting at lattice index `k`.
fn compare(check: &mut Check, k: usize, a: &[B], b: &[B], threshold: f64) {
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        check.record(k + i, lossy(&B::rel_diff(x, y)), threshold);
    }
}

/// q-PVI relations along `states`, when the family has that form.
fn qpvi_checks(f: &dpgap::FamilySpec<B>, states: &[LaxState<B>], threshold: f64) -> Vec<Check> {
    if states.len() < 2 {
        return Vec::new();
    }
    let data = match qp6_build(f, &states[1]) {
        Ok(d) => d,
        Err(_) => return Vec::new(),
    };
    let mut compat = Check::new("qp6 compat");
    let mut extract = Check::new("js extraction");
    let mut step = Check::new("js step");
    let mut prev: Option<JsVars<B>> = None;
    for (i, st) in states.iter().enumerate().skip(1) {
        let s = st.s;
        compat.record(s, lossy(&qp6_compat_residual(f, &states[i - 1], st)), threshold);
        let t = f.pi(s);
        match js_extract(&data, st, &t) {
            Ok((v, r)) => {
                extract.record(s, lossy(&r), threshold);
                if let Some(bar) = &prev {
                    match js_step(&data, bar, &t) {
                        Ok(pred) => {
                            let d = [(&pred.y, &v.y), (&pred.z, &v.z), (&pred.w, &v.w)]
                                .iter()
                                .map(|(a, b)| lossy(&B::rel_diff(a, b)))
                                .fold(0.0, f64::max);
                            step.record(s, d, threshold);
                        }
                        Err(e) => {
                            step.fail_with(step_of(&e).or(Some(s)), e.to_string());
                            break;
                        }
                    }
                }
                prev = Some(v);
            }
            Err(e) => {
                extract.fail_with(step_of(&e).or(Some(s)), e.to_string());
                break;
            }
        }
    }
    vec![compat, extract, step]
}

/// Runs all checks at the configured precision.
pub fn verify(cfg: &RunConfig) -> Result<Report, CliError> {
    let spec = &cfg.spec;
    let threshold = spec.tol.max(2f64.powf(-(spec.precision as f64) / 2.0));
    if !spec.family.supports_linear_recurrence() {
        return Ok(Report {
            threshold,
            checks: Vec::new(),
            skipped: Some("oracle-only family; recurrence checks skipped".to_string()),
        });
    }
    B::with_precision(spec.precision, || {
        let f = spec.build::<B>()?;
        let k = spec.k;
        let s_last = spec.s_max.min(last_nontrivial(&f));

        let mut recurrence = Check::new("recurrence");
        let mut states = Vec::new();
        match init_state(&f, k) {
            Ok(st) => states.push(st),
            Err(e) => recurrence.fail_with(step_of(&e).or(Some(k)), e.to_string()),
        }
        while let Some(cur) = states.last() {
            if cur.s >= s_last {
                break;
            }
            match step_general(cur, &f) {
                Ok(next) => states.push(next),
                Err(e) => {
                    recurrence.fail_with(step_of(&e).or(Some(cur.s + 1)), e.to_string());
                    break;
                }
            }
        }

        let mut nil = Check::new("nilpotency");
        let mut trace = Check::new("trace");
        let mut det = Check::new("determinant");
        let mut compat = Check::new("compatibility");
        let mut eps = Check::new("epsilon");
        for (i, st) in states.iter().enumerate() {
            let rep = check_state(&f, st, states.get(i + 1));
            nil.record(st.s, lossy(&rep.nilpotency), threshold);
            if let Some(t) = &rep.trace {
                trace.record(st.s, lossy(t), threshold);
            }
            det.record(st.s, lossy(&rep.determinant), threshold);
            if i + 1 < states.len() {
                compat.record(st.s, lossy(&rep.compatibility), threshold);
            }
            eps.record(st.s, lossy(&rep.epsilon), threshold);
        }

        let mut checks = vec![recurrence, nil];
        if f.lattice.kind == dpgap::family::LatticeKind::Linear {
            checks.push(trace);
        }
        checks.extend([det, compat, eps]);
        checks.extend(qpvi_checks(&f, &states, threshold));

        let general = gap_values(&f, k, s_last, Method::General);
        let mut go = Check::new("general~oracle");
        match (general.as_ref(), gap_values(&f, k, s_last, Method::Oracle).as_ref()) {
            (Ok(g), Ok(o)) => compare(&mut go, k, g, o, threshold),
            (Err(e), _) | (_, Err(e)) => go.fail_with(step_of(e), e.to_string()),
        }
        checks.push(go);
        if painleve_route(f.name).is_some() {
            let mut pg = Check::new("painleve~general");
            match (general.as_ref(), run_painleve(&f, k, s_last).as_ref()) {
                (Ok(g), Ok(run)) => {
                    compare(&mut pg, k, g, &run.values, threshold);
                    if let Some(s) = run.fallback_steps.first() {
                        pg.note = Some(format!("matrix fallback at s={s}"));
                    }
                }
                (Err(e), _) | (_, Err(e)) => pg.fail_with(step_of(e), e.to_string()),
            }
            checks.push(pg);
        }
        Ok(Report {
            threshold,
            checks,
            skipped: None,
        })
    })
}
