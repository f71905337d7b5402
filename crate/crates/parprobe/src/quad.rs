//! Quadrature building blocks: Gauss–Legendre rules of arbitrary order and
//! adaptive 15-point Gauss–Kronrod on an interval.

/// Nodes of the 15-point Kronrod rule on [-1, 1] (positive half; rule is
/// symmetric). Standard QUADPACK abscissae.
const XGK15: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];

const WGK15: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

const WG7: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One application of the 15-point Gauss–Kronrod pair.
/// Returns (kronrod value, |kronrod - gauss| error estimate).
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = fc * WGK15[7];
    let mut gauss = fc * WG7[3];

    for j in 0..7 {
        let x = half * XGK15[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        kronrod += WGK15[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG7[j / 2] * (f1 + f2);
        }
    }
    (kronrod * half, (kronrod - gauss).abs() * half.abs())
}

/// Adaptive Gauss–Kronrod integration on [a, b].
///
/// Splits the worst panel until the summed error estimate is below
/// `tol_abs + tol_rel * |integral|` or the panel budget runs out. Returns
/// (value, error estimate).
pub fn adaptive_gk<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol_abs: f64,
    tol_rel: f64,
    max_panels: usize,
) -> (f64, f64) {
    #[derive(Debug)]
    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }
    let (v, e) = gk15(f, a, b);
    let mut panels = vec![Panel { a, b, value: v, err: e }];
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        if err <= tol_abs + tol_rel * total.abs() || panels.len() >= max_panels {
            return (total, err);
        }
        // bisect the worst panel
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .unwrap();
        let Panel { a, b, .. } = panels.swap_remove(idx);
        let m = 0.5 * (a + b);
        let (v1, e1) = gk15(f, a, m);
        let (v2, e2) = gk15(f, m, b);
        panels.push(Panel { a, b: m, value: v1, err: e1 });
        panels.push(Panel { a: m, b, value: v2, err: e2 });
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre polynomial. Accurate to machine precision for n ≲ 10⁴.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x) by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    (
        x.iter().map(|&t| c + h * t).collect(),
        w.iter().map(|&t| t * h).collect(),
    )
}

/// Fixed-order composite Gauss–Legendre over `panels` equal panels.
pub fn composite_gl<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, order: usize, panels: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let dp = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let pa = a + p as f64 * dp;
        let c = pa + 0.5 * dp;
        let h = 0.5 * dp;
        for (xi, wi) in x.iter().zip(&w) {
            total += wi * h * f(c + h * xi);
        }
    }
    total
}
