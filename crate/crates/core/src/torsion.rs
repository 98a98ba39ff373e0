//! The p-torsion function: minimiser of `F_p`, equivalently the pointwise
//! solution of `L_p τ = 1` on `V∖V₀` with `τ = 0` on `V₀`.

use crate::energy::{flux_at, functional_unchecked, VertexFunction};
use crate::error::{Error, Result};
use crate::graph::ProblemSpec;
use crate::linalg::{ProfileLdl, SymSparse};
use crate::quotient::equitable_quotient;
use crate::scalar::{cast, max_of, min_of, phi_p, to_f64, Real, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Direct solve for `p = 2`, damped Newton otherwise.
    #[default]
    Auto,
    GaussSeidel,
    Newton,
    DirectP2,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::GaussSeidel => "gauss_seidel",
            Method::Newton => "newton",
            Method::DirectP2 => "direct_p2",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions<S> {
    /// Sup-norm residual target; `None` means `1e-10 · max(1, max m)`.
    pub tol: Option<S>,
    /// Sweeps for Gauss–Seidel, steps for Newton.
    pub max_iterations: usize,
    pub method: Method,
    /// Starting point (values on `V₀` are ignored). Defaults to zero.
    pub initial: Option<Vec<S>>,
}

impl<S> Default for SolverOptions<S> {
    fn default() -> Self {
        Self {
            tol: None,
            max_iterations: 1_000_000,
            method: Method::Auto,
            initial: None,
        }
    }
}

impl<S: Real> SolverOptions<S> {
    pub fn with_tol(tol: S) -> Self {
        Self {
            tol: Some(tol),
            ..Self::default()
        }
    }

    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub(crate) fn resolved_tol(&self, spec: &ProblemSpec<S>) -> S {
        self.tol.unwrap_or_else(|| default_tol(spec))
    }
}

pub(crate) fn default_tol<S: Real>(spec: &ProblemSpec<S>) -> S {
    let max_m = spec
        .graph()
        .measures()
        .iter()
        .fold(S::one(), |a, &m| max_of(a, m));
    let floor = max_of(cast(1e-10), S::epsilon() * cast(100.0));
    floor * max_m
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorsionSolution<S> {
    pub tau: VertexFunction<S>,
    /// `‖τ‖₁^{p−1}` over `V∖V₀`.
    pub rigidity: S,
    pub residual_inf: S,
    pub iterations: usize,
    pub method: Method,
}

/// Indices of the unknowns and the linear (p = 2) operator restricted to them.
pub(crate) struct FreeSystem<S> {
    pub free: Vec<usize>,
    pub matrix: SymSparse<S>,
}

pub(crate) fn assemble_p2<S: Scalar>(spec: &ProblemSpec<S>) -> FreeSystem<S> {
    let g = spec.graph();
    let free = spec.free_indices();
    let mut pos = vec![usize::MAX; g.len()];
    for (k, &v) in free.iter().enumerate() {
        pos[v] = k;
    }
    let mut diag = Vec::with_capacity(free.len());
    let mut off = Vec::with_capacity(free.len());
    for &v in &free {
        diag.push(g.degree_at(v));
        off.push(
            g.neighbors(v)
                .iter()
                .filter(|(w, _)| pos[*w] != usize::MAX)
                .map(|(w, b)| (pos[*w], -b.clone()))
                .collect(),
        );
    }
    FreeSystem {
        free,
        matrix: SymSparse { diag, off },
    }
}

fn linear_residual<S: Scalar>(spec: &ProblemSpec<S>, tau: &[S]) -> S {
    let g = spec.graph();
    let mut worst = S::zero();
    for v in spec.free_indices() {
        let mut s = g.potential(v).clone() * tau[v].clone();
        for (w, b) in g.neighbors(v) {
            s = s + b.clone() * (tau[v].clone() - tau[*w].clone());
        }
        let r = (s / g.measure(v).clone() - S::one()).abs();
        worst = max_of(worst, r);
    }
    worst
}

/// Exact sparse solve of the `p = 2` torsion problem; works over any field,
/// so rational scalars give exact rigidities.
pub fn solve_torsion_p2<S: Scalar>(spec: &ProblemSpec<S>) -> Result<TorsionSolution<S>> {
    let two = S::one() + S::one();
    if *spec.p() != two {
        return Err(Error::UnsupportedCombination(
            "the direct solver requires p = 2".into(),
        ));
    }
    spec.check_solvable()?;
    let sys = assemble_p2(spec);
    let g = spec.graph();
    let rhs: Vec<S> = sys.free.iter().map(|&v| g.measure(v).clone()).collect();
    let mut tau = vec![S::zero(); spec.len()];
    if !sys.free.is_empty() {
        let ldl = ProfileLdl::factor(&sys.matrix).ok_or(Error::IllPosed)?;
        for (k, x) in ldl.solve(&rhs).into_iter().enumerate() {
            tau[sys.free[k]] = x;
        }
    }
    let rigidity = sys
        .free
        .iter()
        .fold(S::zero(), |a, &v| a + tau[v].clone() * g.measure(v).clone());
    let residual_inf = linear_residual(spec, &tau);
    Ok(TorsionSolution {
        tau: VertexFunction::new(tau),
        rigidity,
        residual_inf,
        iterations: 1,
        method: Method::DirectP2,
    })
}

/// `max_v |flux(v) − rhs(v)| / m(v)` over the free vertices.
pub(crate) fn residual_inf<S: Real>(spec: &ProblemSpec<S>, u: &[S], rhs: &[S], free: &[usize]) -> S {
    let g = spec.graph();
    free.iter().fold(S::zero(), |acc, &v| {
        let r = ((flux_at(spec, u, v) - rhs[v]) / *g.measure(v)).abs();
        if r.is_nan() {
            S::infinity()
        } else {
            max_of(acc, r)
        }
    })
}

/// Largest residual that rounding `u` to working precision can produce:
/// per free vertex, `Σ b |φ_p(d ± δ) − φ_p(d)| / m` with `δ` a few ulps of
/// the endpoint values.
pub(crate) fn rounding_floor<S: Real>(spec: &ProblemSpec<S>, u: &[S], free: &[usize]) -> S {
    let g = spec.graph();
    let p = *spec.p();
    let one = S::one();
    let two = one + one;
    let ulps: S = cast::<S>(16.0) * S::epsilon();
    let sensitivity = |d: S, delta: S| {
        if p < two {
            min_of((p - one) * d.abs().powf(p - two) * delta, two * delta.powf(p - one))
        } else {
            (p - one) * max_of(d.abs(), delta).powf(p - two) * delta
        }
    };
    free.iter().fold(S::zero(), |acc, &v| {
        let mut s = *g.potential(v) * sensitivity(u[v], ulps * u[v].abs());
        for &(w, b) in g.neighbors(v) {
            s = s + b * sensitivity(u[v] - u[w], ulps * (u[v].abs() + u[w].abs()));
        }
        max_of(acc, s / *g.measure(v))
    })
}

/// Stopping rule: `res ≤ tol`, or `res` has stopped improving while already
/// within what rounding of `u` alone can explain.
struct Stop<S> {
    tol: S,
    best: S,
    stalled: usize,
    patience: usize,
}

impl<S: Real> Stop<S> {
    fn new(tol: S, patience: usize) -> Self {
        Self {
            tol,
            best: S::infinity(),
            stalled: 0,
            patience,
        }
    }

    fn done(&mut self, spec: &ProblemSpec<S>, u: &[S], free: &[usize], res: S) -> bool {
        if res <= self.tol {
            return true;
        }
        if res < self.best {
            self.best = res;
            self.stalled = 0;
            return false;
        }
        self.stalled += 1;
        self.stalled >= self.patience && res <= rounding_floor(spec, u, free)
    }
}

/// Solves `Σ_w b φ_p(t − u_w) + c φ_p(t) = rhs` for `t` (strictly increasing
/// left side) by Newton steps safeguarded with bisection.
fn scalar_solve<S: Real>(spec: &ProblemSpec<S>, u: &[S], v: usize, rhs: S) -> S {
    let g = spec.graph();
    let p = *spec.p();
    let c = *g.potential(v);
    let nb = g.neighbors(v);
    let one = S::one();
    if p == one + one {
        let mut num = rhs;
        let mut den = c;
        for &(w, b) in nb {
            num = num + b * u[w];
            den = den + b;
        }
        return num / den;
    }
    let mut lo_ref = S::infinity();
    let mut hi_ref = S::neg_infinity();
    let mut total = c;
    for &(w, b) in nb {
        lo_ref = min_of(lo_ref, u[w]);
        hi_ref = max_of(hi_ref, u[w]);
        total = total + b;
    }
    if c > S::zero() {
        lo_ref = min_of(lo_ref, S::zero());
        hi_ref = max_of(hi_ref, S::zero());
    }
    let delta = (rhs.abs() / total).powf(one / (p - one));
    let mut lo = lo_ref - delta;
    let mut hi = hi_ref + delta;
    let pm2 = p - one - one;
    let eval = |t: S| -> (S, S) {
        let mut f = c * phi_p(t, p) - rhs;
        let mut df = if c > S::zero() { c * t.abs().powf(pm2) } else { S::zero() };
        for &(w, b) in nb {
            let d = t - u[w];
            f = f + b * phi_p(d, p);
            df = df + b * d.abs().powf(pm2);
        }
        (f, (p - one) * df)
    };
    let mut t = u[v];
    if !(t > lo && t < hi) {
        t = (lo + hi) / (one + one);
    }
    let eps = S::epsilon();
    for _ in 0..200 {
        let (f, df) = eval(t);
        if f.is_zero() {
            return t;
        }
        if f > S::zero() {
            hi = t;
        } else {
            lo = t;
        }
        let mut next = t - f / df;
        if !(next > lo && next < hi) || !df.is_finite() || df.is_zero() {
            next = lo + (hi - lo) / (one + one);
        }
        let scale = max_of(next.abs(), max_of(hi.abs(), lo.abs()));
        if (next - t).abs() <= eps * scale * cast(2.0) || hi - lo <= eps * scale * cast(2.0) {
            return next;
        }
        t = next;
    }
    t
}

/// General solve of `flux(v) = rhs(v)` on the free vertices, `u = 0` on `V₀`.
/// Returns `(u, residual, iterations)`.
pub(crate) fn solve_poisson<S: Real>(
    spec: &ProblemSpec<S>,
    rhs: &[S],
    tol: S,
    max_iterations: usize,
    method: Method,
    initial: Option<&[S]>,
) -> Result<(Vec<S>, S, usize)> {
    let free = spec.free_indices();
    let mut u = vec![S::zero(); spec.len()];
    if let Some(init) = initial {
        if init.len() != spec.len() {
            return Err(Error::DomainMismatch {
                expected: spec.len(),
                got: init.len(),
            });
        }
        for &v in &free {
            u[v] = init[v];
        }
    }
    match method {
        Method::Newton => newton(spec, rhs, tol, max_iterations, u, &free),
        _ => gauss_seidel(spec, rhs, tol, max_iterations, u, &free),
    }
}

fn gauss_seidel<S: Real>(
    spec: &ProblemSpec<S>,
    rhs: &[S],
    tol: S,
    max_iterations: usize,
    mut u: Vec<S>,
    free: &[usize],
) -> Result<(Vec<S>, S, usize)> {
    let mut res = residual_inf(spec, &u, rhs, free);
    let mut sweeps = 0;
    let mut stop = Stop::new(tol, 50);
    while !stop.done(spec, &u, free, res) {
        if sweeps >= max_iterations {
            return Err(Error::NoConvergence {
                iterations: sweeps,
                residual: to_f64(&res),
            });
        }
        for &v in free {
            u[v] = scalar_solve(spec, &u, v, rhs[v]);
        }
        sweeps += 1;
        res = residual_inf(spec, &u, rhs, free);
    }
    Ok((u, res, sweeps))
}

fn objective<S: Real>(spec: &ProblemSpec<S>, u: &[S], rhs: &[S], free: &[usize]) -> S {
    let linear = free.iter().fold(S::zero(), |a, &v| a + u[v] * rhs[v]);
    crate::energy::energy_unchecked(spec, u) - linear
}

/// Replaces `u` by its best multiple `s·u`; `F_p(s·u) = s^p Q_p(u) − s⟨u, rhs⟩`.
fn rescale<S: Real>(spec: &ProblemSpec<S>, u: &mut [S], rhs: &[S], free: &[usize]) {
    let p = *spec.p();
    let pq = p * crate::energy::energy_unchecked(spec, u);
    let linear = free.iter().fold(S::zero(), |a, &v| a + u[v] * rhs[v]);
    if pq > S::zero() && linear > S::zero() {
        let s = (linear / pq).powf(S::one() / (p - S::one()));
        if s.is_finite() && s > S::zero() {
            for &v in free {
                u[v] = u[v] * s;
            }
        }
    }
}

/// Damped Newton on the free unknowns with a regularised Hessian.
fn newton<S: Real>(
    spec: &ProblemSpec<S>,
    rhs: &[S],
    tol: S,
    max_iterations: usize,
    mut u: Vec<S>,
    free: &[usize],
) -> Result<(Vec<S>, S, usize)> {
    let g = spec.graph();
    let p = *spec.p();
    let one = S::one();
    let reg: S = cast(1e-12);
    let sys = assemble_p2(spec);
    if free.iter().all(|&v| u[v].is_zero()) {
        // Start from the p = 2 solution with the same right-hand side.
        let ldl = ProfileLdl::factor(&sys.matrix).ok_or(Error::IllPosed)?;
        let x = ldl.solve(&free.iter().map(|&v| rhs[v]).collect::<Vec<_>>());
        for (k, &v) in free.iter().enumerate() {
            u[v] = x[k];
        }
    }
    rescale(spec, &mut u, rhs, free);
    let mut pos = vec![usize::MAX; spec.len()];
    for (k, &v) in free.iter().enumerate() {
        pos[v] = k;
    }
    let mut res = residual_inf(spec, &u, rhs, free);
    let mut steps = 0;
    let mut stop = Stop::new(tol, 5);
    while !stop.done(spec, &u, free, res) {
        if steps >= max_iterations {
            return Err(Error::NoConvergence {
                iterations: steps,
                residual: to_f64(&res),
            });
        }
        rescale(spec, &mut u, rhs, free);
        res = residual_inf(spec, &u, rhs, free);
        let f_cur = objective(spec, &u, rhs, free);
        // Differences below `floor` are treated as `floor` in the Hessian.
        let floor = max_of(cast::<S>(1e-12), cast::<S>(1e-10) * free.iter().fold(S::zero(), |a, &v| max_of(a, u[v].abs())));
        let weight = |d: S| max_of(d.abs(), floor).powf(p - one - one) + reg;
        let mut matrix = sys.matrix.clone();
        for (k, &v) in free.iter().enumerate() {
            let mut d = if g.potential(v).is_zero() {
                S::zero()
            } else {
                *g.potential(v) * weight(u[v])
            };
            for &(w, b) in g.neighbors(v) {
                let h = b * weight(u[v] - u[w]);
                d = d + h;
                if pos[w] != usize::MAX {
                    if let Some(e) = matrix.off[k].iter_mut().find(|(j, _)| *j == pos[w]) {
                        e.1 = -h * (p - one);
                    }
                }
            }
            matrix.diag[k] = d * (p - one);
        }
        let grad: Vec<S> = free.iter().map(|&v| flux_at(spec, &u, v) - rhs[v]).collect();
        let Some(ldl) = ProfileLdl::factor(&matrix) else {
            // Pivots lost to cancellation: fall back to one coordinate sweep.
            for &v in free {
                u[v] = scalar_solve(spec, &u, v, rhs[v]);
            }
            steps += 1;
            res = residual_inf(spec, &u, rhs, free);
            continue;
        };
        let step = ldl.solve(&grad);
        let slope = grad.iter().zip(&step).fold(S::zero(), |a, (x, y)| a + *x * *y);
        let mut trial = u.clone();
        for (k, &v) in free.iter().enumerate() {
            trial[v] = u[v] - step[k];
        }
        // A full step must contract the residual; near a kink of φ_p (p < 2)
        // it can instead flip the sign of a difference and merely oscillate.
        let full_res = residual_inf(spec, &trial, rhs, free);
        if full_res < res / (one + one) {
            u = trial;
            steps += 1;
            res = full_res;
            continue;
        }
        let mut alpha = one;
        let mut accepted = false;
        for _ in 0..60 {
            for (k, &v) in free.iter().enumerate() {
                trial[v] = u[v] - alpha * step[k];
            }
            let f_new = objective(spec, &trial, rhs, free);
            if f_new < f_cur && f_new <= f_cur - cast::<S>(1e-4) * alpha * slope {
                accepted = true;
                // Keep halving while it still helps: a step across a kink
                // overshoots by a factor close to two.
                let mut best = f_new;
                loop {
                    let half = alpha / (one + one);
                    let probe: Vec<S> = (0..u.len())
                        .map(|v| if pos[v] == usize::MAX { u[v] } else { u[v] - half * step[pos[v]] })
                        .collect();
                    let f_half = objective(spec, &probe, rhs, free);
                    if f_half >= best {
                        break;
                    }
                    best = f_half;
                    alpha = half;
                    trial = probe;
                }
                break;
            }
            alpha = alpha / (one + one);
        }
        if !accepted {
            trial.clone_from(&u);
        }
        if !accepted || alpha < one {
            // Line search stalls once F_p is flat to rounding; a sweep of exact
            // coordinate solves still reduces the residual there.
            for &v in free {
                trial[v] = scalar_solve(spec, &trial, v, rhs[v]);
            }
        }
        u = trial;
        steps += 1;
        res = residual_inf(spec, &u, rhs, free);
    }
    Ok((u, res, steps))
}

/// Minimises `F_p` over functions vanishing on `V₀`.
pub fn solve_torsion<S: Real>(spec: &ProblemSpec<S>, opts: &SolverOptions<S>) -> Result<TorsionSolution<S>> {
    spec.check_solvable()?;
    let two = S::one() + S::one();
    let p = *spec.p();
    let method = match opts.method {
        Method::Auto if p == two => Method::DirectP2,
        Method::Auto => Method::Newton,
        m => m,
    };
    if method == Method::DirectP2 {
        return solve_torsion_p2(spec);
    }
    let g = spec.graph();
    let tol = opts.resolved_tol(spec);
    let q = equitable_quotient(spec);
    let qrhs = q.spec.graph().measures().to_vec();
    let init = opts.initial.as_ref().map(|u| q.restrict_pick(u));
    if let Some(u) = &opts.initial {
        if u.len() != spec.len() {
            return Err(Error::DomainMismatch {
                expected: spec.len(),
                got: u.len(),
            });
        }
    }
    let (uq, _, iterations) = solve_poisson(&q.spec, &qrhs, tol, opts.max_iterations, method, init.as_deref())?;
    let tau = q.lift(&uq);
    let residual_inf = residual_inf(spec, &tau, g.measures(), &spec.free_indices());
    let l1 = spec
        .free_indices()
        .into_iter()
        .fold(S::zero(), |a, v| a + tau[v] * *g.measure(v));
    Ok(TorsionSolution {
        tau: VertexFunction::new(tau),
        rigidity: l1.powf(p - S::one()),
        residual_inf,
        iterations,
        method,
    })
}

/// `L_p u − 1` on free vertices, zero on `V₀`.
pub fn pointwise_residual<S: Real>(spec: &ProblemSpec<S>, u: &VertexFunction<S>) -> Result<VertexFunction<S>> {
    u.check_domain(spec)?;
    let g = spec.graph();
    let mut out = vec![S::zero(); spec.len()];
    for v in spec.free_indices() {
        out[v] = flux_at(spec, u.values(), v) / *g.measure(v) - S::one();
    }
    Ok(VertexFunction::new(out))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Balance<S> {
    pub lhs: S,
    pub rhs: S,
    pub ok: bool,
}

/// Total outflow into `V₀` and the potential against `m(V∖V₀)`.
pub fn balance_check<S: Real>(spec: &ProblemSpec<S>, sol: &TorsionSolution<S>) -> Balance<S> {
    let g = spec.graph();
    let p = *spec.p();
    let tau = sol.tau.values();
    let mut lhs = S::zero();
    for v in spec.free_indices() {
        let t = phi_p(tau[v], p);
        lhs = lhs + *g.potential(v) * t;
        for &(w, b) in g.neighbors(v) {
            if spec.is_dirichlet(w) {
                lhs = lhs + b * t;
            }
        }
    }
    let rhs = spec.free_mass();
    Balance {
        lhs,
        rhs,
        ok: (lhs - rhs).abs() <= cast::<S>(1e-8) * rhs,
    }
}

/// `((p/(1−p)) F_p(τ))^{p−1}`.
pub fn rigidity_via_min<S: Real>(spec: &ProblemSpec<S>, sol: &TorsionSolution<S>) -> S {
    let p = *spec.p();
    let f = functional_unchecked(spec, sol.tau.values());
    (p / (S::one() - p) * f).powf(p - S::one())
}
