//! Rank-two Coxeter arrangements, their reflection groups acting on
//! multiplicities, and exponents near constant multiplicities.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::dermod::{Solver, SolverError};
use crate::explorer::{components, run_in_pool, scan, Classification, ExplorerError, ScanOptions, Window};
use crate::field::{FieldError, FieldSpec, Scalar};
use crate::lattice::Multiplicity;
use crate::poly::{Arrangement, LinearForm, PolyError};
use crate::theorems::{check_ball_structure, Verdict};

#[derive(Debug, Error)]
pub enum CoxeterError {
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("matrix does not preserve the arrangement: {0}")]
    NotArrangementPreserving(String),
    #[error("matrix is singular")]
    Singular,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("offset sum {sum} must be below the number of lines {lines}")]
    OffsetTooLarge { sum: u64, lines: usize },
    #[error("offset makes entry {index} negative")]
    NegativeEntry { index: usize },
    #[error("no near-constant formula for type {0}")]
    Unsupported(CoxeterType),
    #[error("hypothesis violated: {clause}")]
    HypothesisViolated { clause: String },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Explorer(#[from] ExplorerError),
    #[error("worker pool: {0}")]
    Pool(String),
}

impl From<FieldError> for CoxeterError {
    fn from(e: FieldError) -> Self {
        CoxeterError::FieldMismatch(e.to_string())
    }
}

impl From<PolyError> for CoxeterError {
    fn from(e: PolyError) -> Self {
        CoxeterError::FieldMismatch(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoxeterType {
    A1A1,
    A2,
    B2,
    G2,
}

impl CoxeterType {
    /// Value of `delta` at the odd constant multiplicities, when known.
    pub fn center_delta(self) -> Option<u64> {
        match self {
            CoxeterType::B2 => Some(2),
            CoxeterType::G2 => Some(4),
            _ => None,
        }
    }

    pub fn default_field(self) -> FieldSpec {
        match self {
            CoxeterType::G2 => FieldSpec::Quadratic { d: 3 },
            _ => FieldSpec::Rational,
        }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CoxeterType::A1A1 => "A1A1",
            CoxeterType::A2 => "A2",
            CoxeterType::B2 => "B2",
            CoxeterType::G2 => "G2",
        };
        f.write_str(s)
    }
}

impl FromStr for CoxeterType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "A1A1" | "A1XA1" => Ok(CoxeterType::A1A1),
            "A2" => Ok(CoxeterType::A2),
            "B2" => Ok(CoxeterType::B2),
            "G2" => Ok(CoxeterType::G2),
            other => Err(format!("unknown type {other}; expected A1A1, A2, B2 or G2")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterSpec {
    pub kind: CoxeterType,
    pub field: FieldSpec,
}

impl CoxeterSpec {
    pub fn new(kind: CoxeterType) -> Self {
        CoxeterSpec {
            kind,
            field: kind.default_field(),
        }
    }

    pub fn with_field(kind: CoxeterType, field: FieldSpec) -> Self {
        CoxeterSpec { kind, field }
    }
}

fn sqrt3(field: &FieldSpec) -> Result<Scalar, CoxeterError> {
    match field {
        FieldSpec::Quadratic { d: 3 } => Ok(field.sqrt_d().expect("quadratic")),
        other => Err(CoxeterError::FieldMismatch(format!("G2 needs Q(sqrt(3)), got {other}"))),
    }
}

/// The arrangement of the given type, with its lines in the standard order:
/// `A1A1: x, y`; `A2: x, y, x+y`; `B2: x, y, x+y, x-y`;
/// `G2: x, x+sqrt3 y, x-sqrt3 y, y, sqrt3 x+y, sqrt3 x-y`.
pub fn coxeter_arrangement(spec: &CoxeterSpec) -> Result<Arrangement, CoxeterError> {
    let f = &spec.field;
    let i = |n: i64| f.from_i64(n);
    let (pairs, names): (Vec<(Scalar, Scalar)>, Vec<&str>) = match spec.kind {
        CoxeterType::A1A1 => (vec![(i(1), i(0)), (i(0), i(1))], vec!["x", "y"]),
        CoxeterType::A2 => (vec![(i(1), i(0)), (i(0), i(1)), (i(1), i(1))], vec!["x", "y", "x+y"]),
        CoxeterType::B2 => (
            vec![(i(1), i(0)), (i(0), i(1)), (i(1), i(1)), (i(1), i(-1))],
            vec!["x", "y", "x+y", "x-y"],
        ),
        CoxeterType::G2 => {
            let r = sqrt3(f)?;
            (
                vec![
                    (i(1), i(0)),
                    (i(1), r.clone()),
                    (i(1), -&r),
                    (i(0), i(1)),
                    (r.clone(), i(1)),
                    (r, i(-1)),
                ],
                vec!["x", "x+sqrt3*y", "x-sqrt3*y", "y", "sqrt3*x+y", "sqrt3*x-y"],
            )
        }
    };
    let forms = pairs
        .into_iter()
        .map(|(a, b)| LinearForm::new(a, b))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Arrangement::new(
        *f,
        forms,
        Some(names.into_iter().map(str::to_string).collect()),
    )?)
}

type Matrix = [[Scalar; 2]; 2];

fn invert(m: &Matrix) -> Result<Matrix, CoxeterError> {
    let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    if det.is_zero() {
        return Err(CoxeterError::Singular);
    }
    let inv = det.invert()?;
    Ok([
        [&m[1][1] * &inv, -&(&m[0][1] * &inv)],
        [-&(&m[1][0] * &inv), &m[0][0] * &inv],
    ])
}

fn multiply(a: &Matrix, b: &Matrix) -> Matrix {
    let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// An invertible linear map of the plane that permutes the lines of an
/// arrangement. `perm[i] = j` when it sends line `i` to line `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    matrix: Matrix,
    perm: Vec<usize>,
}

impl GroupElement {
    /// Validates that `matrix` maps the set of lines of `arr` onto itself.
    /// The line `ker(alpha)` goes to `ker(alpha o M^-1)`.
    pub fn new(arr: &Arrangement, matrix: [[Scalar; 2]; 2]) -> Result<Self, CoxeterError> {
        let field = arr.field();
        let matrix: Matrix = [
            [field.coerce(&matrix[0][0])?, field.coerce(&matrix[0][1])?],
            [field.coerce(&matrix[1][0])?, field.coerce(&matrix[1][1])?],
        ];
        let inv = invert(&matrix)?;
        let mut perm = Vec::with_capacity(arr.len());
        for (i, form) in arr.forms().iter().enumerate() {
            let a = &(form.a() * &inv[0][0]) + &(form.b() * &inv[1][0]);
            let b = &(form.a() * &inv[0][1]) + &(form.b() * &inv[1][1]);
            let image = LinearForm::new(a, b)?;
            let j = arr
                .forms()
                .iter()
                .position(|g| g.is_proportional(&image))
                .ok_or_else(|| CoxeterError::NotArrangementPreserving(format!("line {} maps to {image:?}", arr.name(i))))?;
            perm.push(j);
        }
        let mut seen = perm.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != perm.len() {
            return Err(CoxeterError::NotArrangementPreserving("two lines share an image".into()));
        }
        Ok(GroupElement { matrix, perm })
    }

    pub fn from_ints(arr: &Arrangement, m: [[i64; 2]; 2]) -> Result<Self, CoxeterError> {
        let f = arr.field();
        GroupElement::new(
            arr,
            [[f.from_i64(m[0][0]), f.from_i64(m[0][1])], [f.from_i64(m[1][0]), f.from_i64(m[1][1])]],
        )
    }

    pub fn identity(arr: &Arrangement) -> Self {
        GroupElement::from_ints(arr, [[1, 0], [0, 1]]).expect("identity preserves every arrangement")
    }

    pub fn matrix(&self) -> &[[Scalar; 2]; 2] {
        &self.matrix
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            matrix: multiply(&self.matrix, &other.matrix),
            perm: other.perm.iter().map(|&j| self.perm[j]).collect(),
        }
    }

    pub fn fixes_line(&self, i: usize) -> bool {
        self.perm[i] == i
    }
}

/// `(sigma mu)_{sigma H} = mu_H`.
pub fn act(sigma: &GroupElement, mu: &Multiplicity) -> Result<Multiplicity, CoxeterError> {
    if mu.len() != sigma.perm.len() {
        return Err(CoxeterError::LengthMismatch {
            expected: sigma.perm.len(),
            got: mu.len(),
        });
    }
    let mut out = vec![0; mu.len()];
    for (i, &j) in sigma.perm.iter().enumerate() {
        out[j] = mu.get(i);
    }
    Ok(Multiplicity::new(out))
}

/// The two simple reflections generating the Weyl group of the type, on the
/// arrangement returned by [`coxeter_arrangement`] for the same spec.
pub fn standard_generators(spec: &CoxeterSpec, arr: &Arrangement) -> Result<Vec<GroupElement>, CoxeterError> {
    let f = &spec.field;
    match spec.kind {
        CoxeterType::A1A1 => Ok(vec![
            GroupElement::from_ints(arr, [[-1, 0], [0, 1]])?,
            GroupElement::from_ints(arr, [[1, 0], [0, -1]])?,
        ]),
        CoxeterType::A2 => Ok(vec![
            GroupElement::from_ints(arr, [[0, 1], [1, 0]])?,
            GroupElement::from_ints(arr, [[-1, -1], [0, 1]])?,
        ]),
        CoxeterType::B2 => Ok(vec![
            GroupElement::from_ints(arr, [[-1, 0], [0, 1]])?,
            GroupElement::from_ints(arr, [[0, 1], [1, 0]])?,
        ]),
        CoxeterType::G2 => {
            let r = sqrt3(f)?;
            let half = f.from_rational(&BigRational::new(1.into(), 2.into()))?;
            let h = &r * &half;
            // reflection in the line orthogonal to (sqrt3, 1)
            let refl = [[-&half, -&h], [-&h, half.clone()]];
            Ok(vec![GroupElement::from_ints(arr, [[-1, 0], [0, 1]])?, GroupElement::new(arr, refl)?])
        }
    }
}

/// All elements generated by `generators`, identity first.
pub fn group_closure(arr: &Arrangement, generators: &[GroupElement]) -> Vec<GroupElement> {
    let mut elements = vec![GroupElement::identity(arr)];
    let mut i = 0;
    while i < elements.len() {
        for g in generators {
            let next = g.compose(&elements[i]);
            if !elements.iter().any(|e| e.matrix == next.matrix) {
                elements.push(next);
            }
        }
        i += 1;
    }
    elements
}

/// `delta(mu) = delta(sigma mu)` for every window point and generator.
pub fn check_delta_invariance(
    solver: &Solver,
    generators: &[GroupElement],
    window: &Window,
    jobs: usize,
) -> Result<Verdict, CoxeterError> {
    let points = window.points();
    let results = run_in_pool(jobs, || {
        points
            .par_iter()
            .map(|mu| -> Result<Vec<Value>, CoxeterError> {
                let d = solver.delta(mu)?;
                let mut out = Vec::new();
                for (g, sigma) in generators.iter().enumerate() {
                    let image = act(sigma, mu)?;
                    let e = solver.delta(&image)?;
                    if d != e {
                        out.push(json!({"mu": mu.entries(), "generator": g, "image": image.entries(),
                            "delta_mu": d, "delta_image": e}));
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>, _>>()
    })
    .map_err(CoxeterError::Pool)??;
    let failures = results.into_iter().flatten().collect();
    Ok(Verdict::from_failures(
        "delta_invariance",
        "delta-invariance",
        (points.len() * generators.len()) as u64,
        failures,
    ))
}

/// Which form of the hypothesis on the lower witness `kappa` to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeakHypothesis {
    /// `delta(mu) - delta(kappa) > d(mu, kappa) - 4`, mirroring the
    /// hypothesis on `nu`.
    #[default]
    Symmetric,
    /// `delta(kappa) - delta(nu) > d(kappa, nu) - 4`. Fails on the constant
    /// B2 and G2 applications.
    Printed,
}

#[derive(Clone, Debug)]
pub struct PeakCertificate {
    pub center: Multiplicity,
    pub radius: u64,
    pub hypothesis: PeakHypothesis,
    pub verdict: Verdict,
}

/// Certifies `mu` as a ball centre from a group-invariance argument:
/// no line is fixed by the whole group, `mu` is invariant, `nu` lies above
/// every cover of `mu`, `kappa` below every co-cover, and `delta` at `mu`
/// exceeds that at `nu` (and at `kappa`) by more than the distance minus 4.
pub fn symmetric_peak_certificate(
    solver: &Solver,
    generators: &[GroupElement],
    mu: &Multiplicity,
    nu: &Multiplicity,
    kappa: &Multiplicity,
    form: PeakHypothesis,
) -> Result<PeakCertificate, CoxeterError> {
    let violated = |clause: String| CoxeterError::HypothesisViolated { clause };
    let arr = solver.arrangement();
    for m in [mu, nu, kappa] {
        if m.len() != arr.len() {
            return Err(CoxeterError::LengthMismatch {
                expected: arr.len(),
                got: m.len(),
            });
        }
    }
    if let Some(h) = (0..arr.len()).find(|&h| generators.iter().all(|g| g.fixes_line(h))) {
        return Err(violated(format!("line {} is fixed by every generator", arr.name(h))));
    }
    for g in generators {
        if act(g, mu)? != *mu {
            return Err(violated(format!("{mu} is not invariant")));
        }
    }
    if let Some(h) = (0..mu.len()).find(|&h| nu.get(h) <= mu.get(h)) {
        return Err(violated(format!("{nu} does not contain the cover of {mu} along {}", arr.name(h))));
    }
    let cocovers: Vec<Multiplicity> = (0..mu.len()).filter_map(|h| mu.down(h)).collect();
    if let Some(c) = cocovers.iter().find(|c| !kappa.is_below(c)) {
        return Err(violated(format!("{kappa} is not below the co-cover {c}")));
    }
    if !kappa.is_below(mu) {
        return Err(violated(format!("{kappa} is not below {mu}")));
    }
    let (d_mu, d_nu, d_kappa) = (solver.delta(mu)? as i64, solver.delta(nu)? as i64, solver.delta(kappa)? as i64);
    if d_mu == 0 {
        return Err(violated(format!("{mu} is outside the support")));
    }
    let dist = |a: &Multiplicity, b: &Multiplicity| a.distance(b).expect("same length") as i64;
    if d_mu - d_nu <= dist(mu, nu) - 4 {
        return Err(violated(format!(
            "delta(mu) - delta(nu) = {} is not above d(mu, nu) - 4 = {}",
            d_mu - d_nu,
            dist(mu, nu) - 4
        )));
    }
    let (lhs, rhs, text) = match form {
        PeakHypothesis::Symmetric => (d_mu - d_kappa, dist(mu, kappa) - 4, "delta(mu) - delta(kappa)"),
        PeakHypothesis::Printed => (d_kappa - d_nu, dist(kappa, nu) - 4, "delta(kappa) - delta(nu)"),
    };
    if lhs <= rhs {
        return Err(violated(format!("{text} = {lhs} is not above {rhs}")));
    }
    let verdict = Verdict::from_failures("symmetric_peak", "symmetric-peak", 1, Vec::new()).with_note(format!(
        "{mu} is a centre with radius {d_mu} (kappa hypothesis: {})",
        match form {
            PeakHypothesis::Symmetric => "symmetric form",
            PeakHypothesis::Printed => "printed form",
        }
    ));
    Ok(PeakCertificate {
        center: mu.clone(),
        radius: d_mu as u64,
        hypothesis: form,
        verdict,
    })
}

/// Confirms a certificate by scanning the closed ball of radius
/// `radius + 1` around the centre: the centre's component must be certified
/// with that centre and radius and pass the ball-structure check.
pub fn verify_peak_locally(arr: &Arrangement, cert: &PeakCertificate, jobs: usize) -> Result<Verdict, CoxeterError> {
    let window = Window::Ball {
        center: cert.center.clone(),
        radius: cert.radius + 1,
    };
    let s = scan(arr, &window, &ScanOptions { jobs, balanced_only: false }, None)?;
    let comps = components(&s);
    let mut failures = Vec::new();
    let own = comps.iter().find(|c| c.contains(&cert.center));
    match own.map(|c| &c.classification) {
        Some(Classification::CertifiedFiniteBall { center, radius, .. })
            if *center == cert.center && *radius == cert.radius => {}
        other => failures.push(json!({"center": cert.center.entries(), "found": format!("{other:?}")})),
    }
    let ball = check_ball_structure(&s, &comps);
    failures.extend(ball.witnesses);
    Ok(Verdict::from_failures("symmetric_peak_local_scan", "ball-shape", s.len() as u64, failures))
}

/// All vectors of nonnegative integers of length `n` with sum at most
/// `max_sum`, in lexicographic order.
pub fn nonnegative_offsets(n: usize, max_sum: u64) -> Vec<Vec<i64>> {
    signed_offsets(n, max_sum).into_iter().filter(|v| v.iter().all(|&x| x >= 0)).collect()
}

/// All integer vectors of length `n` with `sum |i_H| <= max_l1`, in
/// lexicographic order.
pub fn signed_offsets(n: usize, max_l1: u64) -> Vec<Vec<i64>> {
    fn rec(n: usize, budget: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in -budget..=budget {
            prefix.push(v);
            rec(n, budget - v.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_l1 as i64, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NearConstantReport {
    pub kind: CoxeterType,
    pub k: u32,
    pub offset: Vec<i64>,
    pub nu: Multiplicity,
    /// From `delta(nu) = |delta_c - sum |i_H||` and `d1 + d2 = |nu|`.
    pub predicted: (u64, u64),
    /// The closed formula as printed, in its printed order.
    pub printed: (u64, u64),
    /// Whether the printed pair equals the prediction as an unordered pair.
    pub printed_matches: bool,
    pub computed: (u64, u64),
    pub matches: bool,
}

impl NearConstantReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("json")
    }
}

/// Exponents at `(2k+1, ..., 2k+1) + offset` for B2 or G2: the distance
/// prediction, the printed closed formula, and the solver's answer.
pub fn near_constant_exponents(
    solver: &Solver,
    kind: CoxeterType,
    k: u32,
    offset: &[i64],
) -> Result<NearConstantReport, CoxeterError> {
    let delta_c = kind.center_delta().ok_or(CoxeterError::Unsupported(kind))?;
    let n = solver.arrangement().len();
    if offset.len() != n {
        return Err(CoxeterError::LengthMismatch {
            expected: n,
            got: offset.len(),
        });
    }
    let sum: u64 = offset.iter().map(|v| v.unsigned_abs()).sum();
    if sum >= n as u64 {
        return Err(CoxeterError::OffsetTooLarge { sum, lines: n });
    }
    let base = 2 * k as i64 + 1;
    let entries = offset
        .iter()
        .enumerate()
        .map(|(i, &v)| u32::try_from(base + v).map_err(|_| CoxeterError::NegativeEntry { index: i }))
        .collect::<Result<Vec<_>, _>>()?;
    let nu = Multiplicity::new(entries);
    let size = nu.size();
    let d_pred = delta_c.abs_diff(sum);
    let predicted = ((size - d_pred) / 2, (size + d_pred) / 2);
    // (4k+1+s, 4k+3) for B2 and (6k+1+s, 6k+5) for G2
    let h = n as u64;
    let printed = (h * k as u64 + 1 + sum, h * k as u64 + h - 1);
    let unordered = |p: (u64, u64)| (p.0.min(p.1), p.0.max(p.1));
    let r = solver.exponents(&nu)?;
    let computed = (r.d1 as u64, r.d2 as u64);
    Ok(NearConstantReport {
        kind,
        k,
        offset: offset.to_vec(),
        nu,
        predicted,
        printed,
        printed_matches: unordered(printed) == predicted,
        computed,
        matches: computed == predicted,
    })
}

/// [`near_constant_exponents`] over many offsets in parallel, in input
/// order.
pub fn near_constant_table(
    solver: &Solver,
    kind: CoxeterType,
    k: u32,
    offsets: &[Vec<i64>],
    jobs: usize,
) -> Result<Vec<NearConstantReport>, CoxeterError> {
    run_in_pool(jobs, || {
        offsets
            .par_iter()
            .map(|i| near_constant_exponents(solver, kind, k, i))
            .collect::<Result<Vec<_>, _>>()
    })
    .map_err(CoxeterError::Pool)?
}
