//! Mechanical checks of the structural results about `delta` on scan data,
//! and basis constructions from ball centres.
//!
//! Checks only report. A failure on correct solver output means a defect
//! somewhere, so nothing here tries to repair the data it is given.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::dermod::{exponents, full_basis, membership, verify_saito, SaitoVerdict, SolverError};
use crate::explorer::{component_distance, membership as component_index, run_in_pool, Component, ScanResult, Window};
use crate::lattice::{downalpha, reverse_saturated_chain, saturated_chain, Multiplicity, PointClass};
use crate::poly::{form_product, saito_determinant, Arrangement, Derivation, HomogPoly};

const MAX_WITNESSES: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
}

/// Outcome of one check. `failures` counts every offending case; only the
/// first few are kept as witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub property: String,
    #[serde(flatten)]
    pub status: Status,
    pub checked: u64,
    pub failures: u64,
    pub witnesses: Vec<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn from_failures(check: &str, property: &str, checked: u64, failures: Vec<Value>) -> Self {
        let count = failures.len() as u64;
        Verdict {
            check: check.to_string(),
            property: property.to_string(),
            status: if failures.is_empty() { Status::Pass } else { Status::Fail },
            checked,
            failures: count,
            witnesses: failures.into_iter().take(MAX_WITNESSES).collect(),
            notes: Vec::new(),
        }
    }

    pub fn skipped(check: &str, property: &str, reason: impl Into<String>) -> Self {
        Verdict {
            check: check.to_string(),
            property: property.to_string(),
            status: Status::Skipped(reason.into()),
            checked: 0,
            failures: 0,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("json")
    }
}

/// Fail if any verdict failed, pass if at least one passed, else skipped.
pub fn overall(verdicts: &[Verdict]) -> Status {
    if verdicts.iter().any(Verdict::is_fail) {
        Status::Fail
    } else if verdicts.iter().any(Verdict::is_pass) {
        Status::Pass
    } else {
        Status::Skipped("no check ran".into())
    }
}

#[derive(Debug, Error)]
pub enum TheoremError {
    #[error("hypothesis violated: {clause}")]
    HypothesisViolated { clause: String },
    #[error("precondition violated: {clause}")]
    PreconditionViolated { clause: String },
    #[error("verification failed: {detail}")]
    VerificationFailed { detail: String },
    #[error("no feasible pair of centres for {kappa}; enlarge the scan")]
    NoCenterPairFound { kappa: Multiplicity },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("worker pool: {0}")]
    Pool(String),
}

fn hypothesis(clause: impl Into<String>) -> TheoremError {
    TheoremError::HypothesisViolated { clause: clause.into() }
}

fn mu_json(mu: &Multiplicity) -> Value {
    json!(mu.entries())
}

/// Minimal generators `theta_mu` on the support of a scan.
#[derive(Clone, Debug)]
pub struct ThetaTable {
    map: HashMap<Multiplicity, Derivation>,
}

impl ThetaTable {
    /// Uses the generators kept by the scan and solves the rest.
    pub fn for_scan(scan: &ScanResult, jobs: usize) -> Result<Self, TheoremError> {
        let mut map = HashMap::new();
        let mut missing = Vec::new();
        for row in scan.rows().iter().filter(|r| r.delta > 0) {
            match scan.theta(&row.mu) {
                Some(t) => {
                    map.insert(row.mu.clone(), t.clone());
                }
                None => missing.push(row.mu.clone()),
            }
        }
        let solved = ThetaTable::for_points(scan.arrangement(), &missing, jobs)?;
        map.extend(solved.map);
        Ok(ThetaTable { map })
    }

    /// Solves every point and keeps those with `delta > 0`.
    pub fn for_points(arr: &Arrangement, points: &[Multiplicity], jobs: usize) -> Result<Self, TheoremError> {
        let solved = run_in_pool(jobs, || {
            points
                .par_iter()
                .map(|mu| exponents(arr, mu).map(|r| (mu.clone(), r)))
                .collect::<Result<Vec<_>, _>>()
        })
        .map_err(TheoremError::Pool)??;
        let map = solved
            .into_iter()
            .filter(|(_, r)| r.delta > 0)
            .map(|(mu, r)| (mu, r.theta_min))
            .collect();
        Ok(ThetaTable { map })
    }

    pub fn get(&self, mu: &Multiplicity) -> Option<&Derivation> {
        self.map.get(mu)
    }

    pub fn insert(&mut self, mu: Multiplicity, theta: Derivation) {
        self.map.insert(mu, theta);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Every covering pair in the window has values differing by exactly one.
pub fn check_covering_steps(scan: &ScanResult) -> Verdict {
    let mut checked = 0;
    let mut failures = Vec::new();
    for row in scan.rows() {
        for h in 0..row.mu.len() {
            let up = row.mu.up(h);
            let Some(d) = scan.delta(&up) else { continue };
            checked += 1;
            if row.delta.abs_diff(d) != 1 {
                failures.push(json!({"mu": mu_json(&row.mu), "nu": mu_json(&up), "delta_mu": row.delta, "delta_nu": d}));
            }
        }
    }
    Verdict::from_failures("covering_steps", "covering-step", checked, failures)
}

/// No two adjacent window points both have `delta = 0`.
pub fn check_isolated_zeros(scan: &ScanResult) -> Verdict {
    let mut checked = 0;
    let mut failures = Vec::new();
    for row in scan.rows().iter().filter(|r| r.delta == 0) {
        for h in 0..row.mu.len() {
            let up = row.mu.up(h);
            let Some(d) = scan.delta(&up) else { continue };
            checked += 1;
            if d == 0 {
                failures.push(json!({"mu": mu_json(&row.mu), "nu": mu_json(&up)}));
            }
        }
    }
    Verdict::from_failures("isolated_zeros", "balanced-singletons", checked, failures)
}

/// Pointwise facts of a scan: `delta` has the parity of `|mu|`, and on a
/// cone of `H` it is positive with `d1 <= |mu| - mu_H`.
pub fn check_scan_invariants(scan: &ScanResult) -> Verdict {
    let mut failures = Vec::new();
    for row in scan.rows() {
        let size = row.mu.size();
        if row.d1 + row.d2 != size || row.d2.checked_sub(row.d1) != Some(row.delta) {
            failures.push(json!({"mu": mu_json(&row.mu), "clause": "degree sum", "d1": row.d1, "d2": row.d2}));
        }
        if row.delta % 2 != size % 2 {
            failures.push(json!({"mu": mu_json(&row.mu), "clause": "parity", "delta": row.delta}));
        }
        if let PointClass::Cone(h) = row.class {
            if row.delta == 0 || row.d1 > size - row.mu.get(h) as u64 {
                failures.push(json!({"mu": mu_json(&row.mu), "clause": "cone", "d1": row.d1, "delta": row.delta}));
            }
        }
    }
    Verdict::from_failures("scan_invariants", "pointwise", scan.len() as u64, failures)
}

/// For each certified component: a unique maximizer `c`, the component is
/// the strict ball of radius `delta(c)` around it, and every window point
/// at distance below `delta(c) + 2` has `delta = |delta(c) - d|`.
pub fn check_ball_structure(scan: &ScanResult, comps: &[Component]) -> Verdict {
    let mut checked = 0;
    let mut failures = Vec::new();
    let certified: Vec<&Component> = comps.iter().filter(|c| c.is_certified()).collect();
    for comp in certified {
        checked += 1;
        let crate::explorer::Classification::CertifiedFiniteBall {
            center,
            radius,
            maximizers,
        } = &comp.classification
        else {
            unreachable!()
        };
        if maximizers.len() > 1 {
            failures.push(json!({"component": comp.id, "clause": "unique center",
                "maximizers": maximizers.iter().map(mu_json).collect::<Vec<_>>()}));
        }
        let members: HashSet<&Multiplicity> = comp.members.iter().collect();
        for row in scan.rows() {
            let d = center.distance(&row.mu).expect("same length");
            let in_ball = d < *radius;
            if in_ball != members.contains(&row.mu) {
                failures.push(json!({"component": comp.id, "clause": "component is the ball",
                    "center": mu_json(center), "point": mu_json(&row.mu), "distance": d}));
            }
            if d < radius + 2 {
                let expected = radius.abs_diff(d);
                if row.delta != expected {
                    failures.push(json!({"component": comp.id, "clause": "distance formula",
                        "center": mu_json(center), "point": mu_json(&row.mu), "distance": d,
                        "expected": expected, "found": row.delta}));
                }
            }
        }
    }
    Verdict::from_failures("ball_structure", "ball-shape", checked, failures)
}

fn theta_of<'a>(thetas: &'a ThetaTable, mu: &Multiplicity, failures: &mut Vec<Value>) -> Option<&'a Derivation> {
    let t = thetas.get(mu);
    if t.is_none() {
        failures.push(json!({"point": mu_json(mu), "clause": "theta missing"}));
    }
    t
}

/// Along each cover inside the support, `theta` is kept when `delta` rises
/// and multiplied by the raised form when it falls; along each comparable
/// pair of a component joined by a chain inside the support,
/// `theta_nu ~ downalpha(chain) theta_mu` for both the lowest-index-first
/// chain and the reverse one.
pub fn check_basis_step_and_path(scan: &ScanResult, comps: &[Component], thetas: &ThetaTable) -> Verdict {
    let arr = scan.arrangement();
    let mut checked = 0;
    let mut failures = Vec::new();
    for row in scan.rows().iter().filter(|r| r.delta > 0) {
        for h in 0..row.mu.len() {
            let up = row.mu.up(h);
            let Some(d_up) = scan.delta(&up).filter(|&d| d > 0) else { continue };
            let (Some(t_mu), Some(t_nu)) = (theta_of(thetas, &row.mu, &mut failures), theta_of(thetas, &up, &mut failures))
            else {
                continue;
            };
            checked += 1;
            let expected = if row.delta > d_up {
                t_mu.mul_poly(&arr.forms()[h].to_poly())
            } else {
                t_mu.clone()
            };
            if !t_nu.is_proportional(&expected) {
                failures.push(json!({"clause": "step", "mu": mu_json(&row.mu), "nu": mu_json(&up),
                    "delta_mu": row.delta, "delta_nu": d_up}));
            }
        }
    }
    let pairs: Vec<(Multiplicity, Multiplicity)> = comps
        .iter()
        .flat_map(|c| {
            c.members.iter().flat_map(move |a| {
                c.members
                    .iter()
                    .filter(move |b| a != *b && a.is_below(b) && a.size() + 1 < b.size())
                    .map(move |b| (a.clone(), b.clone()))
            })
        })
        .collect();
    let in_support = |mu: &Multiplicity| scan.delta(mu).is_some_and(|d| d > 0);
    let path_results: Vec<(u64, Vec<Value>)> = pairs
        .par_iter()
        .map(|(mu, nu)| {
            let mut out = Vec::new();
            let mut n = 0;
            let (Some(t_mu), Some(t_nu)) = (thetas.get(mu), thetas.get(nu)) else {
                return (0, vec![json!({"clause": "theta missing", "mu": mu_json(mu), "nu": mu_json(nu)})]);
            };
            let mut factors: Vec<HomogPoly> = Vec::new();
            for chain in [saturated_chain(mu, nu), reverse_saturated_chain(mu, nu)] {
                let chain = chain.expect("comparable pair");
                if !chain.points().iter().all(in_support) {
                    continue;
                }
                let deltas: Vec<u64> = chain.points().iter().map(|p| scan.delta(p).expect("in window")).collect();
                let f = downalpha(arr, &chain, &deltas).expect("aligned");
                n += 1;
                if !t_nu.is_proportional(&t_mu.mul_poly(&f)) {
                    out.push(json!({"clause": "chain", "mu": mu_json(mu), "nu": mu_json(nu), "factor": f.to_string()}));
                }
                factors.push(f);
            }
            if factors.len() == 2 && !factors[0].is_proportional(&factors[1]) {
                out.push(json!({"clause": "chain independence", "mu": mu_json(mu), "nu": mu_json(nu)}));
            }
            (n, out)
        })
        .collect();
    for (n, f) in path_results {
        checked += n;
        failures.extend(f);
    }
    Verdict::from_failures("basis_step_and_path", "basis-step", checked, failures)
}

/// Generators in one component are dependent; generators of certified
/// components at distance two are independent. Exhaustive over the scan.
pub fn check_independency(comps: &[Component], thetas: &ThetaTable) -> Verdict {
    let mut jobs: Vec<(Multiplicity, Multiplicity, bool)> = Vec::new();
    for c in comps {
        for (i, a) in c.members.iter().enumerate() {
            for b in &c.members[i + 1..] {
                jobs.push((a.clone(), b.clone(), false));
            }
        }
    }
    let certified: Vec<&Component> = comps.iter().filter(|c| c.is_certified()).collect();
    let mut cross_components = 0;
    for (i, c) in certified.iter().enumerate() {
        for d in &certified[i + 1..] {
            if component_distance(c, d) == 2 {
                cross_components += 1;
                for a in &c.members {
                    for b in &d.members {
                        jobs.push((a.clone(), b.clone(), true));
                    }
                }
            }
        }
    }
    let failures: Vec<Value> = jobs
        .par_iter()
        .filter_map(|(a, b, independent)| {
            let (Some(ta), Some(tb)) = (thetas.get(a), thetas.get(b)) else {
                return Some(json!({"clause": "theta missing", "mu": mu_json(a), "nu": mu_json(b)}));
            };
            let det = saito_determinant(ta, tb);
            (det.is_zero() == *independent).then(|| {
                json!({"clause": if *independent { "cross-component pair dependent" } else { "same-component pair independent" },
                    "mu": mu_json(a), "nu": mu_json(b)})
            })
        })
        .collect();
    Verdict::from_failures("independency", "independence", jobs.len() as u64, failures)
        .with_note(format!("{cross_components} pairs of certified components at distance 2"))
}

/// `prod alpha_H^max(target_H - base_H, 0)`.
pub fn multiplier(arr: &Arrangement, base: &Multiplicity, target: &Multiplicity) -> HomogPoly {
    let exps: Vec<u32> = base
        .entries()
        .iter()
        .zip(target.entries())
        .map(|(&b, &t)| t.saturating_sub(b))
        .collect();
    form_product(arr, &exps)
}

/// A basis built from two generators, with its Saito verdict.
#[derive(Clone, Debug)]
pub struct BasisConstruction {
    pub first: Derivation,
    pub second: Derivation,
    pub alpha_mu: HomogPoly,
    pub alpha_nu: HomogPoly,
    pub saito: SaitoVerdict,
}

impl BasisConstruction {
    pub fn degrees(&self) -> (usize, usize) {
        (self.first.degree().unwrap_or(0), self.second.degree().unwrap_or(0))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "alpha_mu": self.alpha_mu.to_string(),
            "alpha_nu": self.alpha_nu.to_string(),
            "first": self.first.to_json(),
            "second": self.second.to_json(),
            "saito": serde_json::to_value(&self.saito).expect("json"),
        })
    }
}

/// `{alpha_{mu,kappa} theta_mu, alpha_{nu,kappa} theta_nu}` as a basis of
/// `D(A, kappa)`. `delta` of each endpoint is read off the degree of its
/// generator. When `owner` is given, the endpoints must lie in different
/// components; otherwise that clause is not checked.
pub fn construct_basis_between(
    arr: &Arrangement,
    mu: &Multiplicity,
    nu: &Multiplicity,
    kappa: &Multiplicity,
    theta_mu: &Derivation,
    theta_nu: &Derivation,
    owner: Option<&HashMap<Multiplicity, usize>>,
) -> Result<BasisConstruction, TheoremError> {
    let pre = |clause: String| TheoremError::PreconditionViolated { clause };
    let delta_of = |m: &Multiplicity, t: &Derivation| -> Result<u64, TheoremError> {
        let deg = t.degree().ok_or_else(|| pre(format!("generator for {m} is zero")))? as u64;
        if membership(arr, m, t).is_err() {
            return Err(pre(format!("generator for {m} is not in D(A, {m})")));
        }
        m.size()
            .checked_sub(2 * deg)
            .filter(|&d| d > 0)
            .ok_or_else(|| pre(format!("{m} is not in the support (generator degree {deg})")))
    };
    let d_mu = delta_of(mu, theta_mu)?;
    let d_nu = delta_of(nu, theta_nu)?;
    let dist = mu.distance(nu).map_err(|e| pre(e.to_string()))?;
    if d_mu + d_nu != dist {
        return Err(pre(format!("delta sum {} differs from distance {dist}", d_mu + d_nu)));
    }
    let (meet, join) = mu.meet_join(nu).map_err(|e| pre(e.to_string()))?;
    if !meet.is_below(kappa) || !kappa.is_below(&join) {
        return Err(pre(format!("{kappa} is not between {meet} and {join}")));
    }
    if let Some(owner) = owner {
        match (owner.get(mu), owner.get(nu)) {
            (Some(a), Some(b)) if a == b => return Err(pre(format!("{mu} and {nu} lie in one component"))),
            (Some(_), Some(_)) => {}
            _ => return Err(pre("endpoint outside the scanned support".into())),
        }
    }
    let alpha_mu = multiplier(arr, mu, kappa);
    let alpha_nu = multiplier(arr, nu, kappa);
    let first = theta_mu.mul_poly(&alpha_mu);
    let second = theta_nu.mul_poly(&alpha_nu);
    let saito = verify_saito(arr, kappa, &first, &second);
    if !saito.is_accept() {
        return Err(TheoremError::VerificationFailed {
            detail: format!("basis for {kappa} from {mu} and {nu} rejected: {saito:?}"),
        });
    }
    Ok(BasisConstruction {
        first,
        second,
        alpha_mu,
        alpha_nu,
        saito,
    })
}

/// A centre with its value and generator.
#[derive(Clone, Debug)]
pub struct CenterEntry {
    pub mu: Multiplicity,
    pub delta: u64,
    pub theta: Derivation,
}

/// Centres of the certified components of a scan, with their generators.
pub fn centers_index(comps: &[Component], thetas: &ThetaTable) -> Vec<CenterEntry> {
    comps
        .iter()
        .filter_map(|c| c.certified_center())
        .filter_map(|(mu, delta)| {
            thetas.get(mu).map(|t| CenterEntry {
                mu: mu.clone(),
                delta,
                theta: t.clone(),
            })
        })
        .collect()
}

/// A basis of `D(A, kappa)` from two centres `mu, nu` with
/// `delta(mu) + delta(nu) = d(mu, nu)` and `mu ^ nu <= kappa <= mu v nu`.
/// Feasible pairs are tried nearest to `kappa` first.
pub fn basis_for(
    arr: &Arrangement,
    kappa: &Multiplicity,
    centers: &[CenterEntry],
) -> Result<(BasisConstruction, Multiplicity, Multiplicity), TheoremError> {
    if kappa.classify() != PointClass::Balanced {
        return Err(TheoremError::PreconditionViolated {
            clause: format!("{kappa} is not balanced"),
        });
    }
    let mut feasible: Vec<(u64, usize, usize)> = Vec::new();
    for (i, a) in centers.iter().enumerate() {
        for (j, b) in centers.iter().enumerate().skip(i + 1) {
            let Ok(dist) = a.mu.distance(&b.mu) else { continue };
            if a.delta + b.delta != dist {
                continue;
            }
            let (meet, join) = a.mu.meet_join(&b.mu).expect("same length");
            if meet.is_below(kappa) && kappa.is_below(&join) {
                let reach = a.mu.distance(kappa).expect("same length") + b.mu.distance(kappa).expect("same length");
                feasible.push((reach, i, j));
            }
        }
    }
    feasible.sort();
    let &(_, i, j) = feasible.first().ok_or_else(|| TheoremError::NoCenterPairFound { kappa: kappa.clone() })?;
    let (a, b) = (&centers[i], &centers[j]);
    let built = construct_basis_between(arr, &a.mu, &b.mu, kappa, &a.theta, &b.theta, None)?;
    Ok((built, a.mu.clone(), b.mu.clone()))
}

/// Every basis the library can produce over a scan passes Saito's
/// criterion: `full_basis` at each point, `basis_for` at each balanced point
/// reachable from a pair of certified centres, and `construct_basis_between`
/// at the meet and join of every such pair.
pub fn check_saito_bases(
    scan: &ScanResult,
    comps: &[Component],
    thetas: &ThetaTable,
    jobs: usize,
) -> Result<Verdict, TheoremError> {
    let arr = scan.arrangement();
    let reject = |source: &str, mu: &Multiplicity, detail: String| {
        json!({"source": source, "mu": mu_json(mu), "detail": detail})
    };
    let points: Vec<Multiplicity> = scan.rows().iter().map(|r| r.mu.clone()).collect();
    let mut failures: Vec<Value> = run_in_pool(jobs, || {
        points
            .par_iter()
            .filter_map(|mu| match full_basis(arr, mu) {
                Ok((a, b)) => match verify_saito(arr, mu, &a, &b) {
                    SaitoVerdict::Accept => None,
                    SaitoVerdict::Reject(f) => Some(reject("full_basis", mu, f.to_string())),
                },
                Err(e) => Some(reject("full_basis", mu, e.to_string())),
            })
            .collect()
    })
    .map_err(TheoremError::Pool)?;
    let mut checked = points.len() as u64;

    let centers = centers_index(comps, thetas);
    let balanced: Vec<&Multiplicity> = points.iter().filter(|p| p.classify() == PointClass::Balanced).collect();
    let mut uncovered = 0;
    let built: Vec<Option<Value>> = run_in_pool(jobs, || {
        balanced
            .par_iter()
            .map(|kappa| match basis_for(arr, kappa, &centers) {
                Ok(_) => Some(None),
                Err(TheoremError::NoCenterPairFound { .. }) => None,
                Err(e) => Some(Some(reject("basis_for", kappa, e.to_string()))),
            })
            .collect::<Vec<_>>()
    })
    .map_err(TheoremError::Pool)?
    .into_iter()
    .filter_map(|r| {
        if r.is_none() {
            uncovered += 1;
        }
        r
    })
    .collect();
    checked += built.len() as u64;
    failures.extend(built.into_iter().flatten());

    for (i, a) in centers.iter().enumerate() {
        for b in &centers[i + 1..] {
            if a.mu.distance(&b.mu).ok() != Some(a.delta + b.delta) {
                continue;
            }
            let (meet, join) = a.mu.meet_join(&b.mu).expect("same length");
            for kappa in [meet, join] {
                checked += 1;
                if let Err(e) = construct_basis_between(arr, &a.mu, &b.mu, &kappa, &a.theta, &b.theta, None) {
                    failures.push(reject("construct_basis_between", &kappa, e.to_string()));
                }
            }
        }
    }
    let mut v = Verdict::from_failures("saito_bases", "saito-criterion", checked, failures);
    if uncovered > 0 {
        v = v.with_note(format!("{uncovered} balanced points have no feasible centre pair in the scan"));
    }
    Ok(v)
}

/// Candidate generators `vartheta` on a set `N` of multiplicities.
#[derive(Clone, Debug, Default)]
pub struct CandidateMap {
    entries: Vec<(Multiplicity, Derivation)>,
}

impl CandidateMap {
    pub fn new(mut entries: Vec<(Multiplicity, Derivation)>) -> Self {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        entries.dedup_by(|a, b| a.0 == b.0);
        CandidateMap { entries }
    }

    pub fn entries(&self) -> &[(Multiplicity, Derivation)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, mu: &Multiplicity) -> bool {
        self.entries.binary_search_by(|e| e.0.cmp(mu)).is_ok()
    }

    /// `|mu| - 2 deg vartheta_mu`.
    pub fn delta_prime(mu: &Multiplicity, theta: &Derivation) -> i64 {
        mu.size() as i64 - 2 * theta.degree().unwrap_or(0) as i64
    }

    /// Each `vartheta_mu` is nonzero, lies in `D(A, mu)` and has degree
    /// below `|mu|/2`; each `mu` is balanced.
    fn check_members(&self, arr: &Arrangement) -> Result<(), TheoremError> {
        for (mu, t) in &self.entries {
            if mu.classify() != PointClass::Balanced {
                return Err(hypothesis(format!("{mu} is not balanced")));
            }
            if t.is_zero() {
                return Err(hypothesis(format!("candidate at {mu} is zero")));
            }
            if let Err(f) = membership(arr, mu, t) {
                return Err(hypothesis(format!("candidate at {mu} is not in D(A, mu): line {} order {}", f.line, f.found)));
            }
            if CandidateMap::delta_prime(mu, t) <= 0 {
                return Err(hypothesis(format!("candidate at {mu} has degree {} >= |mu|/2", t.degree().unwrap_or(0))));
            }
        }
        Ok(())
    }
}

/// Connected components of a point set under covering adjacency.
fn point_components(points: &[Multiplicity]) -> Vec<Vec<Multiplicity>> {
    let set: HashSet<&Multiplicity> = points.iter().collect();
    let mut seen: HashSet<&Multiplicity> = HashSet::new();
    let mut out = Vec::new();
    for p in points {
        if seen.contains(p) {
            continue;
        }
        seen.insert(p);
        let mut comp = vec![p.clone()];
        let mut stack = vec![p.clone()];
        while let Some(q) = stack.pop() {
            for n in Window::lattice_neighbors(&q) {
                if let Some(&m) = set.get(&n) {
                    if seen.insert(m) {
                        comp.push(m.clone());
                        stack.push(m.clone());
                    }
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

fn first_large_component(points: &[Multiplicity]) -> Option<Vec<Multiplicity>> {
    point_components(points).into_iter().find(|c| c.len() > 1)
}

/// Result of a criterion evaluation: whether the independence condition
/// holds, what the trusted data says about the candidate, and whether the
/// two agree as the criterion predicts.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub verdict: Verdict,
    pub condition_holds: bool,
    pub ground_truth: Option<bool>,
}

impl CriterionReport {
    /// The criterion's equivalence held, or could not be compared.
    pub fn consistent(&self) -> bool {
        self.ground_truth.is_none_or(|g| g == self.condition_holds)
    }
}

fn finish_criterion(
    check: &str,
    property: &str,
    checked: u64,
    failures: Vec<Value>,
    ground_truth: Option<bool>,
) -> CriterionReport {
    let condition_holds = failures.is_empty();
    let mut verdict = Verdict::from_failures(check, property, checked, failures);
    match ground_truth {
        Some(g) if g != condition_holds => {
            verdict.status = Status::Fail;
            verdict.failures += 1;
            verdict.witnesses.push(json!({"clause": "equivalence broken",
                "condition_holds": condition_holds, "candidate_is_true": g}));
        }
        None => verdict.notes.push("no trusted scan: equivalence not compared".into()),
        _ => {}
    }
    CriterionReport {
        verdict,
        condition_holds,
        ground_truth,
    }
}

/// Balanced window points, taken from the trusted scan when given.
fn balanced_points(window: &Window) -> Vec<Multiplicity> {
    window.points().into_iter().filter(|p| p.classify() == PointClass::Balanced).collect()
}

/// Support criterion: with `N` inside the balanced part of `window` and no
/// two adjacent balanced points outside `N`, the candidates on different
/// components of `N` at mutual distance two are all independent exactly
/// when `N` is the balanced support. Components of `N` are taken in `N`
/// itself, with distance measured in the lattice.
pub fn certify_support(
    arr: &Arrangement,
    candidate: &CandidateMap,
    window: &Window,
    trusted: Option<&ScanResult>,
) -> Result<CriterionReport, TheoremError> {
    candidate.check_members(arr)?;
    if let Some((mu, _)) = candidate.entries().iter().find(|(mu, _)| !window.contains(mu)) {
        return Err(hypothesis(format!("{mu} lies outside the window")));
    }
    let outside: Vec<Multiplicity> = balanced_points(window).into_iter().filter(|p| !candidate.contains(p)).collect();
    if let Some(c) = first_large_component(&outside) {
        return Err(hypothesis(format!(
            "balanced points outside N have a component of size {} containing {}",
            c.len(),
            c[0]
        )));
    }
    let points: Vec<Multiplicity> = candidate.entries().iter().map(|e| e.0.clone()).collect();
    let theta: HashMap<&Multiplicity, &Derivation> = candidate.entries().iter().map(|(m, t)| (m, t)).collect();
    let comps = point_components(&points);
    let mut jobs = Vec::new();
    for (i, a) in comps.iter().enumerate() {
        for b in &comps[i + 1..] {
            let dist = a
                .iter()
                .flat_map(|x| b.iter().map(move |y| x.distance(y).expect("same length")))
                .min()
                .unwrap_or(u64::MAX);
            if dist == 2 {
                for x in a {
                    for y in b {
                        jobs.push((x, y));
                    }
                }
            }
        }
    }
    let failures: Vec<Value> = jobs
        .par_iter()
        .filter(|(x, y)| saito_determinant(theta[x], theta[y]).is_zero())
        .map(|(x, y)| json!({"clause": "dependent across components at distance 2", "mu": mu_json(x), "nu": mu_json(y)}))
        .collect();
    let ground_truth = match trusted {
        Some(scan) => {
            let mut truth = Vec::new();
            for p in balanced_points(window) {
                match scan.delta(&p) {
                    Some(d) if d > 0 => truth.push(p),
                    Some(_) => {}
                    None => return Err(hypothesis(format!("trusted scan does not cover {p}"))),
                }
            }
            Some(truth == points)
        }
        None => None,
    };
    let mut report = finish_criterion("certify_support", "support-criterion", jobs.len() as u64, failures, ground_truth);
    report
        .verdict
        .notes
        .push("components of N are taken in N; distances between them are measured in the lattice".into());
    Ok(report)
}

/// Centre criterion: with positive `delta'`, pairwise disjoint strict balls
/// `B(mu, delta'(mu))`, and no two adjacent balanced window points outside
/// their union, independence on every pair with
/// `delta'(mu) + delta'(nu) = d(mu, nu)` holds exactly when `N` is the set
/// of centres and each candidate is proportional to `theta`. Centres may
/// lie outside `window`; the trusted scan must contain every centre whose
/// ball meets the window together with its neighbours.
pub fn certify_centers(
    arr: &Arrangement,
    candidate: &CandidateMap,
    window: &Window,
    trusted: Option<&ScanResult>,
) -> Result<CriterionReport, TheoremError> {
    candidate.check_members(arr)?;
    let entries = candidate.entries();
    let dp: Vec<u64> = entries.iter().map(|(m, t)| CandidateMap::delta_prime(m, t) as u64).collect();
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            let d = entries[i].0.distance(&entries[j].0).map_err(|e| hypothesis(e.to_string()))?;
            if d + 1 < dp[i] + dp[j] {
                return Err(hypothesis(format!(
                    "balls around {} and {} overlap",
                    entries[i].0, entries[j].0
                )));
            }
        }
    }
    let uncovered: Vec<Multiplicity> = balanced_points(window)
        .into_iter()
        .filter(|p| !entries.iter().zip(&dp).any(|((c, _), &r)| c.distance(p).expect("same length") < r))
        .collect();
    if let Some(c) = first_large_component(&uncovered) {
        return Err(hypothesis(format!(
            "balanced points outside the balls have a component of size {} containing {}",
            c.len(),
            c[0]
        )));
    }
    let mut jobs = Vec::new();
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            if dp[i] + dp[j] == entries[i].0.distance(&entries[j].0).expect("same length") {
                jobs.push((i, j));
            }
        }
    }
    let failures: Vec<Value> = jobs
        .par_iter()
        .filter(|&&(i, j)| saito_determinant(&entries[i].1, &entries[j].1).is_zero())
        .map(|&(i, j)| json!({"clause": "dependent at tangent distance", "mu": mu_json(&entries[i].0), "nu": mu_json(&entries[j].0)}))
        .collect();
    let ground_truth = match trusted {
        Some(scan) => true_centers_near(scan, window).map(|truth| {
            let names: Vec<&Multiplicity> = entries.iter().map(|e| &e.0).collect();
            names == truth.iter().collect::<Vec<_>>()
                && entries.iter().all(|(m, t)| trusted_theta(scan, m).is_some_and(|th| th.is_proportional(t)))
        }),
        None => None,
    };
    let mut report = finish_criterion("certify_centers", "center-criterion", jobs.len() as u64, failures, ground_truth);
    if trusted.is_some() && report.ground_truth.is_none() {
        report.verdict.notes.push("trusted scan too small to list every centre near the window".into());
    }
    Ok(report)
}

/// The generator at `mu` kept by the scan, solved afresh when the scan was
/// loaded from disk without generators.
fn trusted_theta(scan: &ScanResult, mu: &Multiplicity) -> Option<Derivation> {
    if let Some(t) = scan.theta(mu) {
        return Some(t.clone());
    }
    exponents(scan.arrangement(), mu)
        .ok()
        .filter(|r| r.delta > 0)
        .map(|r| r.theta_min)
}

/// Centres whose strict balls meet `window`, read from a scan: balanced
/// support points all of whose neighbours are scanned and one lower.
/// `None` when some balanced support point of the window is not covered by
/// the balls found, i.e. the scan is too small.
pub fn true_centers_near(scan: &ScanResult, window: &Window) -> Option<Vec<Multiplicity>> {
    let mut centers = Vec::new();
    for row in scan.rows() {
        if row.delta == 0 || row.class != PointClass::Balanced || window.distance_to(&row.mu) >= row.delta {
            continue;
        }
        let peak = Window::lattice_neighbors(&row.mu)
            .iter()
            .all(|n| scan.delta(n).is_some_and(|d| d + 1 == row.delta));
        if peak {
            centers.push(row.mu.clone());
        }
    }
    for p in balanced_points(window) {
        let d = scan.delta(&p)?;
        if d > 0 && !centers.iter().any(|c| c.distance(&p).expect("same length") < scan.delta(c).expect("scanned")) {
            return None;
        }
    }
    centers.sort();
    Some(centers)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Classes of the relation generated by "dependent at distance two" on the
/// odd balanced points of the scan, compared with the scan's components.
pub fn reconstruct_components(
    scan: &ScanResult,
    comps: &[Component],
    thetas: &ThetaTable,
) -> (Vec<Vec<Multiplicity>>, Verdict) {
    let points: Vec<Multiplicity> = scan
        .rows()
        .iter()
        .filter(|r| r.mu.size() % 2 == 1 && r.class == PointClass::Balanced)
        .map(|r| r.mu.clone())
        .collect();
    let mut failures = Vec::new();
    let pairs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|i| (i + 1..points.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| points[i].distance(&points[j]).expect("same length") == 2)
        .collect();
    let dependent: Vec<(usize, usize)> = pairs
        .par_iter()
        .filter(|&&(i, j)| match (thetas.get(&points[i]), thetas.get(&points[j])) {
            (Some(a), Some(b)) => saito_determinant(a, b).is_zero(),
            _ => false,
        })
        .copied()
        .collect();
    for p in points.iter().filter(|p| thetas.get(p).is_none()) {
        failures.push(json!({"clause": "theta missing", "point": mu_json(p)}));
    }
    let mut uf = UnionFind((0..points.len()).collect());
    for &(i, j) in &dependent {
        uf.union(i, j);
    }
    let mut classes: HashMap<usize, Vec<Multiplicity>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        let r = uf.find(i);
        classes.entry(r).or_default().push(p.clone());
    }
    let mut classes: Vec<Vec<Multiplicity>> = classes.into_values().collect();
    classes.sort();
    let owner = component_index(comps);
    let mut class_of_component: HashMap<usize, usize> = HashMap::new();
    for (k, class) in classes.iter().enumerate() {
        let ids: HashSet<Option<&usize>> = class.iter().map(|p| owner.get(p)).collect();
        if ids.len() > 1 {
            failures.push(json!({"clause": "class spans components", "class": class.iter().map(mu_json).collect::<Vec<_>>()}));
        }
        for id in ids.into_iter().flatten() {
            if let Some(prev) = class_of_component.insert(*id, k) {
                if prev != k {
                    failures.push(json!({"clause": "component split into classes", "component": id,
                        "example": mu_json(&class[0])}));
                }
            }
        }
    }
    let verdict = Verdict::from_failures("reconstruct_components", "component-reconstruction", pairs.len() as u64, failures)
        .with_note(format!("{} odd balanced points, {} classes", points.len(), classes.len()));
    (classes, verdict)
}
