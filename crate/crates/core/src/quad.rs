//! Adaptive Gauss-Kronrod quadrature and fixed Gauss-Legendre tables.
//!
//! The 7/15-point Gauss-Kronrod pair gives an embedded error estimate per
//! panel. Refinement is global: the panel with the largest estimate is
//! bisected until the summed estimate meets the budget or the panel cap is
//! reached, so error estimates stuck at the rounding floor cannot force
//! runaway subdivision. All integrands in this crate are smooth away from
//! isolated boundary layers; known layer locations can be passed as seed
//! breakpoints.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Kronrod abscissae for the 7/15 pair on [-1, 1] (positive half, descending).
const XGK15: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK15`.
const WGK15: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Embedded 7-point Gauss weights (for the odd-indexed Kronrod abscissae).
const WG7: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Gauss-Legendre 5 abscissae on [-1, 1].
pub const GL5_X: [f64; 5] = [
    -0.906179845938663992797626878299393,
    -0.538469310105683091036314420700208,
    0.0,
    0.538469310105683091036314420700208,
    0.906179845938663992797626878299393,
];

/// Gauss-Legendre 5 weights matching `GL5_X`.
pub const GL5_W: [f64; 5] = [
    0.236926885056189087514264040719917,
    0.478628670499366468041291514835638,
    0.568888888888888888888888888888889,
    0.478628670499366468041291514835638,
    0.236926885056189087514264040719917,
];

/// One Gauss-Kronrod 7/15 panel: returns (integral, error estimate, floored).
///
/// `floored` marks an estimate pinned at the 50·ε·resabs rounding bound;
/// bisection cannot reduce that bound (resabs is additive over children), so
/// such panels are final.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, bool) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = WGK15[7] * fc;
    let mut gauss = WG7[3] * fc;
    let mut resabs = WGK15[7] * fc.abs();

    let mut fv = [0.0f64; 7];
    for (j, &x) in XGK15.iter().take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let sum = f1 + f2;
        fv[j] = sum;
        kronrod += WGK15[j] * sum;
        resabs += WGK15[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG7[j / 2] * sum;
        }
    }

    // Scale the raw |K15 - G7| difference the QUADPACK way: compare against
    // the variation of f over the panel so smooth panels are not over-refined.
    let mean = kronrod * 0.5;
    let mut resasc = WGK15[7] * (fc - mean).abs();
    for (j, &sum) in fv.iter().enumerate() {
        resasc += WGK15[j] * (sum - 2.0 * mean).abs();
    }
    resasc *= half.abs();

    let integral = kronrod * half;
    let raw = ((kronrod - gauss) * half).abs();
    let mut err = raw;
    if resasc != 0.0 && err != 0.0 {
        // The power-law rescaling models how much closer the 15-point value
        // is than the embedded 7-point one; its credit is capped because it
        // turns wildly optimistic on narrow decaying tails.
        err = (resasc * 1.0f64.min((200.0 * err / resasc).powf(1.5))).max(1e-3 * raw);
    }
    let resabs = resabs * half.abs();
    let mut floored = false;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * resabs;
        if err <= floor {
            err = floor;
            floored = true;
        }
    }
    (integral, err, floored)
}

/// Hard cap on panels per integral; 4096 splits of a worst panel resolve
/// layers far below anything the effective potentials present.
const MAX_PANELS: usize = 4096;

struct Panel {
    err: f64,
    value: f64,
    a: f64,
    b: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Integrate `f` over [a, b] to relative tolerance `rel_tol`.
///
/// A first sweep over the seed panels estimates the magnitude of the
/// integral; the adaptive pass then works against the absolute tolerance
/// `rel_tol * |estimate|` (with a tiny floor so a zero integral terminates).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    integrate_with_breakpoints(f, a, b, &[], rel_tol)
}

/// Integrate with interior seed breakpoints (e.g. at known boundary layers).
///
/// Breakpoints outside (a, b) are ignored; the rest split the domain into
/// panels refined independently, so a layer much narrower than b - a does
/// not force the bisection to find it from the full interval.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    rel_tol: f64,
) -> f64 {
    let mut edges = vec![a];
    let mut pts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    pts.sort_by(|p, q| p.partial_cmp(q).expect("finite breakpoints"));
    edges.extend(pts);
    edges.push(b);

    let mut heap = BinaryHeap::with_capacity(64);
    let mut rough = 0.0;
    let mut total_err = 0.0;
    let push = |heap: &mut BinaryHeap<Panel>, total_err: &mut f64, value, err, floored, a, b| {
        // Floored estimates are final (see gk15); keep them out of both the
        // refinement queue and the termination budget.
        let err = if floored { 0.0 } else { err };
        *total_err += err;
        heap.push(Panel { err, value, a, b });
    };
    for pair in edges.windows(2) {
        let (value, err, floored) = gk15(&f, pair[0], pair[1]);
        rough += value.abs();
        push(&mut heap, &mut total_err, value, err, floored, pair[0], pair[1]);
    }
    // The Kronrod error estimate can turn optimistic right as panels resolve
    // the integrand, so the refinement budget carries a safety margin.
    let tol = (rel_tol * rough / 16.0).max(1e-300);

    while total_err > tol && heap.len() < MAX_PANELS {
        let worst = heap.pop().expect("heap is never emptied");
        if worst.err == 0.0 {
            // Every remaining panel is already converged or written off.
            heap.push(worst);
            break;
        }
        if (worst.b - worst.a).abs() <= 4.0 * f64::EPSILON * (worst.a.abs() + worst.b.abs()) {
            // Rounding-width panel: accept its value, retire its estimate.
            total_err -= worst.err;
            heap.push(Panel { err: 0.0, ..worst });
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le, lf) = gk15(&f, worst.a, mid);
        let (rv, re, rf) = gk15(&f, mid, worst.b);
        total_err -= worst.err;
        push(&mut heap, &mut total_err, lv, le, lf, worst.a, mid);
        push(&mut heap, &mut total_err, rv, re, rf, mid, worst.b);
    }
    heap.into_iter().map(|p| p.value).sum()
}

/// Integrate `g(u) * exp(-u)` over [0, inf) to relative tolerance `rel_tol`.
///
/// The weight truncates the domain at u = 50 (the discarded tail is below
/// exp(-50) ~ 2e-22 relative for bounded g, far under every tolerance used
/// here). `g` must be smooth on (0, 50]; an integrable boundary layer at
/// u = 0 is fine, the adaptive pass digs into it.
pub fn integrate_exp_weighted<G: Fn(f64) -> f64>(g: G, rel_tol: f64) -> f64 {
    // Seed a few dyadic points near zero: the integrands fed through here
    // have layers of width 2/(B L^2) or x^2 B / 2, which can sit many decades
    // below 1; seeding keeps the recursion depth modest.
    integrate_with_breakpoints(
        |u| g(u) * (-u).exp(),
        0.0,
        50.0,
        &[1e-12, 1e-9, 1e-6, 1e-3, 0.1, 1.0, 5.0],
        rel_tol,
    )
}
