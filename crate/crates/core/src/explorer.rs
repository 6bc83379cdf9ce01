//! Sweeps of `delta` over finite windows of the multiplicity lattice, the
//! connected components of its support, and their classification.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cache::ResultCache;
use crate::cli::format::{arrangement_from_json, arrangement_to_json, FormatError};
use crate::dermod::{exponents, ExponentResult, SolverError};
use crate::lattice::{Multiplicity, PointClass, ScanBox};
use crate::poly::{Arrangement, Derivation};

pub const SCAN_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum ExplorerError {
    #[error("empty window")]
    EmptyWindow,
    #[error("window has dimension {window}, arrangement has {lines} lines")]
    DimensionMismatch { window: usize, lines: usize },
    #[error("solver failed at {mu}: {source}")]
    Solver { mu: Multiplicity, source: SolverError },
    #[error("{mu} is not a member of component {component}")]
    PointNotInComponent { mu: Multiplicity, component: usize },
    #[error("delta values {deltas:?} are not unimodal with a unique peak")]
    NotUnimodal { deltas: Vec<u64> },
    #[error("malformed scan: {0}")]
    Format(String),
    #[error(transparent)]
    Arrangement(#[from] FormatError),
    #[error("worker pool: {0}")]
    Pool(String),
}

/// The set of points a scan covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    Box(ScanBox),
    /// Points at distance at most `radius` from `center`.
    Ball { center: Multiplicity, radius: u64 },
}

impl Window {
    pub fn dim(&self) -> usize {
        match self {
            Window::Box(b) => b.dim(),
            Window::Ball { center, .. } => center.len(),
        }
    }

    pub fn contains(&self, mu: &Multiplicity) -> bool {
        match self {
            Window::Box(b) => b.contains(mu),
            Window::Ball { center, radius } => center.distance(mu).map(|d| d <= *radius).unwrap_or(false),
        }
    }

    /// Points in lexicographic order, last coordinate fastest.
    pub fn points(&self) -> Vec<Multiplicity> {
        match self {
            Window::Box(b) => b.points(),
            Window::Ball { center, radius } => {
                let bounds = center.entries().iter().map(|&m| m.saturating_add(*radius as u32)).collect();
                center.ball(radius + 1, &ScanBox::new(bounds))
            }
        }
    }

    /// Whether every point at distance at most `radius` from `mu` lies in the
    /// window.
    pub fn contains_closed_ball(&self, mu: &Multiplicity, radius: u64) -> bool {
        match self {
            Window::Box(b) => mu.entries().iter().zip(b.bounds()).all(|(&m, &bd)| m as u64 + radius <= bd as u64),
            Window::Ball { center, radius: r } => {
                center.distance(mu).map(|d| d + radius <= *r).unwrap_or(false)
            }
        }
    }

    /// Distance from `mu` to the nearest window point.
    pub fn distance_to(&self, mu: &Multiplicity) -> u64 {
        match self {
            Window::Box(b) => mu
                .entries()
                .iter()
                .zip(b.bounds())
                .map(|(&m, &bd)| m.saturating_sub(bd) as u64)
                .sum(),
            Window::Ball { center, radius } => center.distance(mu).map(|d| d.saturating_sub(*radius)).unwrap_or(u64::MAX),
        }
    }

    /// Covering neighbours of `mu` in the whole lattice, inside or outside
    /// the window.
    pub fn lattice_neighbors(mu: &Multiplicity) -> Vec<Multiplicity> {
        let mut out = Vec::with_capacity(2 * mu.len());
        for h in 0..mu.len() {
            if let Some(d) = mu.down(h) {
                out.push(d);
            }
            out.push(mu.up(h));
        }
        out
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Window::Box(b) => write!(f, "box [0,{b}]"),
            Window::Ball { center, radius } => write!(f, "closed ball ({center}) radius {radius}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub mu: Multiplicity,
    pub d1: u64,
    pub d2: u64,
    pub delta: u64,
    pub class: PointClass,
    /// Set for cone points skipped in balanced-only mode: the exponents are
    /// `(|mu| - max mu_H, max mu_H)` from the constructive bound, not a solve.
    #[serde(default)]
    pub estimated: bool,
}

impl ScanRow {
    pub fn from_result(mu: Multiplicity, r: &ExponentResult) -> Self {
        let class = mu.classify();
        ScanRow {
            mu,
            d1: r.d1 as u64,
            d2: r.d2 as u64,
            delta: r.delta as u64,
            class,
            estimated: false,
        }
    }

    fn estimated(mu: Multiplicity) -> Self {
        let top = mu.max_entry() as u64;
        let d1 = mu.size() - top;
        let class = mu.classify();
        ScanRow {
            mu,
            d1,
            d2: top,
            delta: top - d1,
            class,
            estimated: true,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ScanOptions {
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
    pub balanced_only: bool,
}

/// A complete table of exponents over a window.
#[derive(Clone, Debug)]
pub struct ScanResult {
    arrangement: Arrangement,
    arrangement_hash: String,
    window: Window,
    rows: Vec<ScanRow>,
    index: HashMap<Multiplicity, usize>,
    /// Minimal generators of solved support points; not serialized.
    thetas: HashMap<Multiplicity, Derivation>,
    /// Wall-clock time of the sweep. Kept out of the serialized form so
    /// that output is identical across runs.
    pub elapsed: Option<Duration>,
}

impl ScanResult {
    /// Builds a table from precomputed rows, which must cover the window
    /// exactly once each.
    pub fn from_rows(arr: Arrangement, window: Window, rows: Vec<ScanRow>) -> Result<Self, ExplorerError> {
        let expected = window.points();
        if rows.len() != expected.len() || rows.iter().zip(&expected).any(|(r, p)| &r.mu != p) {
            return Err(ExplorerError::Format("rows do not enumerate the window in order".into()));
        }
        let index = rows.iter().enumerate().map(|(i, r)| (r.mu.clone(), i)).collect();
        Ok(ScanResult {
            arrangement_hash: arr.canonical_hash(),
            arrangement: arr,
            window,
            rows,
            index,
            thetas: HashMap::new(),
            elapsed: None,
        })
    }

    /// `theta_mu` when the scan solved `mu` and `delta(mu) > 0`.
    pub fn theta(&self, mu: &Multiplicity) -> Option<&Derivation> {
        self.thetas.get(mu)
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn arrangement_hash(&self) -> &str {
        &self.arrangement_hash
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn rows(&self) -> &[ScanRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, mu: &Multiplicity) -> Option<&ScanRow> {
        self.index.get(mu).map(|&i| &self.rows[i])
    }

    pub fn delta(&self, mu: &Multiplicity) -> Option<u64> {
        self.row(mu).map(|r| r.delta)
    }

    /// Replaces the value at `mu`. Only meant for building corrupted tables
    /// in negative controls.
    pub fn override_delta(&mut self, mu: &Multiplicity, delta: u64) {
        if let Some(&i) = self.index.get(mu) {
            self.rows[i].delta = delta;
        }
    }

    /// Neighbours of `mu` that lie in the window.
    pub fn neighbors(&self, mu: &Multiplicity) -> Vec<Multiplicity> {
        Window::lattice_neighbors(mu)
            .into_iter()
            .filter(|n| self.index.contains_key(n))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "version": SCAN_VERSION,
            "arrangement_hash": self.arrangement_hash,
            "arrangement": arrangement_to_json(&self.arrangement),
            "window": self.window,
            "rows": self.rows,
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string(&self.to_json()).expect("json");
        s.push('\n');
        s
    }

    pub fn from_json(v: &Value) -> Result<Self, ExplorerError> {
        let bad = |m: &str| ExplorerError::Format(m.to_string());
        if v.get("version").and_then(Value::as_u64) != Some(SCAN_VERSION) {
            return Err(bad("unsupported or missing version"));
        }
        let arr = arrangement_from_json(v.get("arrangement").ok_or_else(|| bad("missing arrangement"))?)?;
        let window: Window = serde_json::from_value(v.get("window").cloned().ok_or_else(|| bad("missing window"))?)
            .map_err(|e| ExplorerError::Format(e.to_string()))?;
        let rows: Vec<ScanRow> = serde_json::from_value(v.get("rows").cloned().ok_or_else(|| bad("missing rows"))?)
            .map_err(|e| ExplorerError::Format(e.to_string()))?;
        let scan = ScanResult::from_rows(arr, window, rows)?;
        if v.get("arrangement_hash").and_then(Value::as_str) != Some(scan.arrangement_hash.as_str()) {
            return Err(bad("arrangement hash does not match the embedded arrangement"));
        }
        Ok(scan)
    }
}

/// Tabulates the exponents at every window point. The rows come out in
/// window order whatever the number of workers.
pub fn scan(
    arr: &Arrangement,
    window: &Window,
    options: &ScanOptions,
    mut cache: Option<&mut ResultCache>,
) -> Result<ScanResult, ExplorerError> {
    if window.dim() != arr.len() {
        return Err(ExplorerError::DimensionMismatch {
            window: window.dim(),
            lines: arr.len(),
        });
    }
    let points = window.points();
    if points.is_empty() {
        return Err(ExplorerError::EmptyWindow);
    }
    let start = Instant::now();
    let mut thetas = HashMap::new();
    let mut rows: Vec<Option<ScanRow>> = points
        .iter()
        .map(|mu| {
            if options.balanced_only && mu.classify() != PointClass::Balanced {
                return Some(ScanRow::estimated(mu.clone()));
            }
            let hit = cache.as_ref().and_then(|c| c.get(mu)).and_then(|e| e.to_result(arr))?;
            if hit.delta > 0 {
                thetas.insert(mu.clone(), hit.theta_min.clone());
            }
            Some(ScanRow::from_result(mu.clone(), &hit))
        })
        .collect();
    let missing: Vec<usize> = (0..points.len()).filter(|&i| rows[i].is_none()).collect();
    let solve = || {
        missing
            .par_iter()
            .map(|&i| {
                exponents(arr, &points[i]).map_err(|source| ExplorerError::Solver {
                    mu: points[i].clone(),
                    source,
                })
            })
            .collect::<Vec<_>>()
    };
    let solved = run_in_pool(options.jobs, solve).map_err(ExplorerError::Pool)?;
    for (&i, res) in missing.iter().zip(solved) {
        let res = res?;
        if let Some(c) = cache.as_deref_mut() {
            c.insert(&points[i], &res);
        }
        rows[i] = Some(ScanRow::from_result(points[i].clone(), &res));
        if res.delta > 0 {
            thetas.insert(points[i].clone(), res.theta_min);
        }
    }
    let rows = rows.into_iter().map(|r| r.expect("every point filled")).collect();
    let mut result = ScanResult::from_rows(arr.clone(), window.clone(), rows)?;
    result.thetas = thetas;
    result.elapsed = Some(start.elapsed());
    Ok(result)
}

/// Runs `f` on a pool of `jobs` threads, or on the global pool when `jobs`
/// is 0.
pub fn run_in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, String> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| e.to_string())?;
    Ok(pool.install(f))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    /// Entirely inside the window, balanced, and with the closed ball of
    /// radius `radius` around `center` inside the window. `maximizers`
    /// lists every point attaining the maximum; more than one is a defect.
    CertifiedFiniteBall {
        center: Multiplicity,
        radius: u64,
        maximizers: Vec<Multiplicity>,
    },
    /// Contains a point of the cone of this line.
    ConePortion { hyperplane: usize },
    BoundaryUndetermined { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: usize,
    /// Members in window order.
    pub members: Vec<Multiplicity>,
    pub classification: Classification,
}

impl Component {
    pub fn contains(&self, mu: &Multiplicity) -> bool {
        self.members.binary_search_by(|m| m.entries().cmp(mu.entries())).is_ok()
    }

    pub fn is_certified(&self) -> bool {
        matches!(self.classification, Classification::CertifiedFiniteBall { .. })
    }

    pub fn certified_center(&self) -> Option<(&Multiplicity, u64)> {
        match &self.classification {
            Classification::CertifiedFiniteBall { center, radius, .. } => Some((center, *radius)),
            _ => None,
        }
    }

    pub fn label(&self, arr: &Arrangement) -> String {
        match &self.classification {
            Classification::CertifiedFiniteBall { .. } => "finite-ball".into(),
            Classification::ConePortion { hyperplane } => format!("cone:{}", arr.name(*hyperplane)),
            Classification::BoundaryUndetermined { .. } => "undetermined".into(),
        }
    }
}

/// Connected components of the support of `delta` in the window, found by
/// breadth-first search over covering edges, in order of their first member.
pub fn components(scan: &ScanResult) -> Vec<Component> {
    let mut owner: HashMap<&Multiplicity, usize> = HashMap::new();
    let mut out = Vec::new();
    for row in scan.rows() {
        if row.delta == 0 || owner.contains_key(&row.mu) {
            continue;
        }
        let id = out.len();
        let mut members = vec![row.mu.clone()];
        owner.insert(&row.mu, id);
        let mut queue = VecDeque::from([row.mu.clone()]);
        while let Some(mu) = queue.pop_front() {
            for n in scan.neighbors(&mu) {
                let r = scan.row(&n).expect("neighbor in window");
                if r.delta > 0 && !owner.contains_key(&r.mu) {
                    owner.insert(&r.mu, id);
                    members.push(n.clone());
                    queue.push_back(n);
                }
            }
        }
        members.sort_by(|a, b| a.entries().cmp(b.entries()));
        let classification = classify_component(scan, &members);
        out.push(Component {
            id,
            members,
            classification,
        });
    }
    out
}

fn classify_component(scan: &ScanResult, members: &[Multiplicity]) -> Classification {
    if let Some(h) = members.iter().find_map(|m| match m.classify() {
        PointClass::Cone(h) => Some(h),
        PointClass::Balanced => None,
    }) {
        return Classification::ConePortion { hyperplane: h };
    }
    let window = scan.window();
    if let Some(m) = members
        .iter()
        .find(|m| Window::lattice_neighbors(m).iter().any(|n| !window.contains(n)))
    {
        return Classification::BoundaryUndetermined {
            reason: format!("member {m} touches the window boundary"),
        };
    }
    let top = members.iter().map(|m| scan.delta(m).expect("member")).max().expect("nonempty");
    let maximizers: Vec<Multiplicity> = members.iter().filter(|m| scan.delta(m) == Some(top)).cloned().collect();
    if let Some(m) = maximizers.iter().find(|m| !window.contains_closed_ball(m, top)) {
        return Classification::BoundaryUndetermined {
            reason: format!("closed ball of radius {top} around {m} leaves the window"),
        };
    }
    Classification::CertifiedFiniteBall {
        center: maximizers[0].clone(),
        radius: top,
        maximizers,
    }
}

/// Map from support point to component index.
pub fn membership(comps: &[Component]) -> HashMap<Multiplicity, usize> {
    comps
        .iter()
        .flat_map(|c| c.members.iter().map(move |m| (m.clone(), c.id)))
        .collect()
}

/// Smallest distance between members of two components.
pub fn component_distance(a: &Component, b: &Component) -> u64 {
    a.members
        .iter()
        .flat_map(|x| b.members.iter().map(move |y| x.distance(y).expect("same length")))
        .min()
        .unwrap_or(u64::MAX)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterReport {
    pub component: usize,
    pub center: Multiplicity,
    pub delta: u64,
    /// Present when the component has several maximizers.
    pub error: Option<String>,
}

/// The centre of every certified component. Several maximizers are
/// reported as an error entry rather than resolved.
pub fn centers(comps: &[Component]) -> Vec<CenterReport> {
    comps
        .iter()
        .filter_map(|c| match &c.classification {
            Classification::CertifiedFiniteBall {
                center,
                radius,
                maximizers,
            } => Some(CenterReport {
                component: c.id,
                center: center.clone(),
                delta: *radius,
                error: (maximizers.len() > 1).then(|| {
                    let list: Vec<String> = maximizers.iter().map(|m| format!("({m})")).collect();
                    format!("{} maximizers: {}", maximizers.len(), list.join(" "))
                }),
            }),
            _ => None,
        })
        .collect()
}

/// Members of `comp` that agree with `mu` off line `h`, ordered by the
/// multiplicity of `h`.
pub fn section(comp: &Component, mu: &Multiplicity, h: usize) -> Result<Vec<Multiplicity>, ExplorerError> {
    if !comp.contains(mu) {
        return Err(ExplorerError::PointNotInComponent {
            mu: mu.clone(),
            component: comp.id,
        });
    }
    let mut out: Vec<Multiplicity> = comp
        .members
        .iter()
        .filter(|m| (0..mu.len()).all(|j| j == h || m.get(j) == mu.get(j)))
        .cloned()
        .collect();
    out.sort_by_key(|m| m.get(h));
    Ok(out)
}

/// The unique maximizer of a unimodal sequence.
pub fn peak_element(section: &[Multiplicity], deltas: &[u64]) -> Result<Multiplicity, ExplorerError> {
    let not_unimodal = || ExplorerError::NotUnimodal { deltas: deltas.to_vec() };
    if section.is_empty() || section.len() != deltas.len() {
        return Err(not_unimodal());
    }
    let top = *deltas.iter().max().expect("nonempty");
    let peaks: Vec<usize> = (0..deltas.len()).filter(|&i| deltas[i] == top).collect();
    if peaks.len() != 1 {
        return Err(not_unimodal());
    }
    let p = peaks[0];
    let rising = deltas[..=p].windows(2).all(|w| w[0] <= w[1]);
    let falling = deltas[p..].windows(2).all(|w| w[0] >= w[1]);
    if !rising || !falling {
        return Err(not_unimodal());
    }
    Ok(section[p].clone())
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// The support of `delta` with its covering edges, one colour per
/// component, centres drawn as double circles.
pub fn to_dot(scan: &ScanResult, comps: &[Component]) -> String {
    let owner = membership(comps);
    let centers: Vec<&Multiplicity> = comps.iter().filter_map(|c| c.certified_center().map(|(m, _)| m)).collect();
    let mut out = String::from("graph support {\n  node [shape=circle, style=filled, fontsize=10];\n");
    for row in scan.rows().iter().filter(|r| r.delta > 0) {
        let id = owner[&row.mu];
        let shape = if centers.contains(&&row.mu) { "doublecircle" } else { "circle" };
        let _ = writeln!(
            out,
            "  \"{}\" [label=\"{}\\ndelta={}\", fillcolor=\"{}\", shape={}];",
            row.mu,
            row.mu,
            row.delta,
            PALETTE[id % PALETTE.len()],
            shape
        );
    }
    for row in scan.rows().iter().filter(|r| r.delta > 0) {
        for h in 0..row.mu.len() {
            let up = row.mu.up(h);
            if scan.delta(&up).is_some_and(|d| d > 0) {
                let _ = writeln!(out, "  \"{}\" -- \"{}\";", row.mu, up);
            }
        }
    }
    out.push_str("}\n");
    out
}

/// One line per window point: multiplicity, exponents, delta, component id
/// and classification (empty for points outside the support).
pub fn to_csv(scan: &ScanResult, comps: &[Component]) -> String {
    let owner = membership(comps);
    let mut out = String::from("mu,d1,d2,delta,component,classification\n");
    for row in scan.rows() {
        let (id, label) = match owner.get(&row.mu) {
            Some(&i) => (i.to_string(), comps[i].label(scan.arrangement())),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(out, "\"{}\",{},{},{},{},{}", row.mu, row.d1, row.d2, row.delta, id, label);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b2() -> Arrangement {
        Arrangement::from_int_pairs(&[(1, 0), (0, 1), (1, 1), (1, -1)]).unwrap()
    }

    fn m(v: &[u32]) -> Multiplicity {
        Multiplicity::new(v.to_vec())
    }

    fn boxed(v: &[u32]) -> Window {
        Window::Box(ScanBox::new(v.to_vec()))
    }

    #[test]
    fn b2_unit_box() {
        let s = scan(&b2(), &boxed(&[1, 1, 1, 1]), &ScanOptions::default(), None).unwrap();
        assert_eq!(s.len(), 16);
        assert_eq!(s.delta(&m(&[1, 1, 1, 1])), Some(2));
        assert_eq!(s.delta(&m(&[0, 0, 0, 0])), Some(0));
        for h in 0..4 {
            assert_eq!(s.delta(&Multiplicity::unit(4, h)), Some(1));
        }
    }

    #[test]
    fn boolean_and_a2() {
        let boolean = Arrangement::from_int_pairs(&[(1, 0), (0, 1)]).unwrap();
        let s = scan(&boolean, &boxed(&[3, 3]), &ScanOptions::default(), None).unwrap();
        for r in s.rows() {
            assert_eq!(r.delta, (r.mu.get(0) as i64 - r.mu.get(1) as i64).unsigned_abs());
        }
        let a2 = Arrangement::from_int_pairs(&[(1, 0), (0, 1), (1, 1)]).unwrap();
        let s = scan(&a2, &boxed(&[2, 2, 2]), &ScanOptions::default(), None).unwrap();
        assert_eq!(s.delta(&m(&[1, 1, 1])), Some(1));
    }

    #[test]
    fn b2_components_and_centers() {
        let s = scan(&b2(), &boxed(&[3, 3, 3, 3]), &ScanOptions::default(), None).unwrap();
        let comps = components(&s);
        let owner = membership(&comps);
        let c = &comps[owner[&m(&[1, 1, 1, 1])]];
        assert_eq!(c.members.len(), 9);
        assert_eq!(c.certified_center(), Some((&m(&[1, 1, 1, 1]), 2)));
        // (2,2,2,1) hangs off the ball around (2,2,3,1), which reaches past
        // this box
        let other = &comps[owner[&m(&[2, 2, 2, 1])]];
        assert_eq!(other.members.len(), 8);
        assert!(matches!(other.classification, Classification::BoundaryUndetermined { .. }));
        let reports = centers(&comps);
        assert!(reports.iter().all(|r| r.error.is_none()));
        assert!(reports.iter().any(|r| r.center == m(&[1, 1, 1, 1]) && r.delta == 2));

        let sec = section(c, &m(&[1, 1, 1, 1]), 0).unwrap();
        assert_eq!(sec, vec![m(&[0, 1, 1, 1]), m(&[1, 1, 1, 1]), m(&[2, 1, 1, 1])]);
        let deltas: Vec<u64> = sec.iter().map(|p| s.delta(p).unwrap()).collect();
        assert_eq!(peak_element(&sec, &deltas).unwrap(), m(&[1, 1, 1, 1]));
        assert!(matches!(
            section(other, &m(&[1, 1, 1, 1]), 0),
            Err(ExplorerError::PointNotInComponent { .. })
        ));
    }

    #[test]
    fn ball_window_certifies_the_neighbouring_ball() {
        let w = Window::Ball {
            center: m(&[2, 2, 3, 1]),
            radius: 3,
        };
        let s = scan(&b2(), &w, &ScanOptions::default(), None).unwrap();
        let comps = components(&s);
        let owner = membership(&comps);
        let c = &comps[owner[&m(&[2, 2, 2, 1])]];
        assert_eq!(c.certified_center(), Some((&m(&[2, 2, 3, 1]), 2)));
        assert_eq!(c.members.len(), 9);
        assert_eq!(section(c, &m(&[2, 2, 2, 1]), 3).unwrap(), vec![m(&[2, 2, 2, 1])]);
        let sec = section(c, &m(&[2, 2, 2, 1]), 2).unwrap();
        assert_eq!(sec, vec![m(&[2, 2, 2, 1]), m(&[2, 2, 3, 1]), m(&[2, 2, 4, 1])]);
        let deltas: Vec<u64> = sec.iter().map(|p| s.delta(p).unwrap()).collect();
        assert_eq!(deltas, vec![1, 2, 1]);
    }

    #[test]
    fn boolean_cones() {
        let boolean = Arrangement::from_int_pairs(&[(1, 0), (0, 1)]).unwrap();
        let s = scan(&boolean, &boxed(&[4, 4]), &ScanOptions::default(), None).unwrap();
        let comps = components(&s);
        let owner = membership(&comps);
        let cx = &comps[owner[&m(&[3, 1])]];
        assert_eq!(cx.classification, Classification::ConePortion { hyperplane: 0 });
        assert!(s.rows().iter().filter(|r| r.mu.get(0) > r.mu.get(1)).all(|r| cx.contains(&r.mu)));
        assert!(centers(&comps).is_empty());
        let sec = section(cx, &m(&[3, 1]), 0).unwrap();
        assert_eq!(sec, vec![m(&[2, 1]), m(&[3, 1]), m(&[4, 1])]);
    }

    #[test]
    fn peaks() {
        let pts = vec![m(&[0]), m(&[1]), m(&[2])];
        assert_eq!(peak_element(&pts, &[1, 2, 1]).unwrap(), m(&[1]));
        assert_eq!(peak_element(&pts[..1], &[3]).unwrap(), m(&[0]));
        assert!(matches!(peak_element(&pts, &[1, 0, 1]), Err(ExplorerError::NotUnimodal { .. })));
    }

    #[test]
    fn json_round_trip_and_exports() {
        let s = scan(&b2(), &boxed(&[2, 2, 2, 2]), &ScanOptions { jobs: 2, balanced_only: false }, None).unwrap();
        let text = s.to_json_string();
        let back = ScanResult::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.to_json_string(), text);
        let comps = components(&s);
        let dot = to_dot(&s, &comps);
        assert!(dot.contains("\"1,1,1,1\" [label=\"1,1,1,1\\ndelta=2\""));
        let csv = to_csv(&s, &comps);
        assert_eq!(csv.lines().count(), 82);
        assert!(csv.contains("\"1,1,1,1\",1,3,2,"));
    }

    #[test]
    fn balanced_only_estimates_cones() {
        let s = scan(&b2(), &boxed(&[3, 0, 0, 0]), &ScanOptions { jobs: 1, balanced_only: true }, None).unwrap();
        let r = s.row(&m(&[3, 0, 0, 0])).unwrap();
        assert!(r.estimated);
        assert_eq!((r.d1, r.d2, r.delta), (0, 3, 3));
        assert!(!s.row(&m(&[0, 0, 0, 0])).unwrap().estimated);
    }

    #[test]
    fn ball_window_points() {
        let w = Window::Ball {
            center: m(&[1, 1]),
            radius: 1,
        };
        assert_eq!(w.points(), vec![m(&[0, 1]), m(&[1, 0]), m(&[1, 1]), m(&[1, 2]), m(&[2, 1])]);
        assert!(w.contains_closed_ball(&m(&[1, 1]), 1));
        assert!(!w.contains_closed_ball(&m(&[1, 2]), 1));
    }
}
