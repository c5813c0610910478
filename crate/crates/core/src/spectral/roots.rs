//! Zeros of entire functions of λ: real-axis sign scan with Brent refinement,
//! argument-principle counting on rectangles, and deflated Newton search for
//! zeros off the axis.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{creal, idx, lit, rho_of, to_f64, Cx, Real};
use crate::subspectrum::Subspectrum;

/// An analytic function of λ.
pub trait Analytic<T: Real>: Sync {
    fn value(&self, z: Cx<T>) -> Result<Cx<T>>;

    /// Value and derivative; defaults to an eight-point Cauchy-circle difference.
    fn value_and_derivative(&self, z: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
        let n = 8;
        let r = T::epsilon().powf(lit(0.25)) * (T::one() + z.norm()).sqrt();
        let mut d = creal(T::zero());
        for k in 0..n {
            let e = Cx::from_polar(T::one(), lit::<T>(2.0) * T::PI() * idx::<T>(k) / idx::<T>(n));
            d = d + self.value(z + e * r)? * e.conj();
        }
        Ok((self.value(z)?, d / (r * idx::<T>(n))))
    }
}

/// Adapter for closures.
pub struct AnalyticFn<F>(pub F);

impl<T: Real, F> Analytic<T> for AnalyticFn<F>
where
    F: Fn(Cx<T>) -> Result<Cx<T>> + Sync,
{
    fn value(&self, z: Cx<T>) -> Result<Cx<T>> {
        (self.0)(z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions<T> {
    /// Scan step in the coordinate `s = sign(λ)√|λ|`.
    pub scan_step: T,
    /// Accept a zero when `|Δ(z)| ≤ verify_tol · max_{|w−z|=δ} |Δ(w)|`.
    pub verify_tol: T,
    /// Zeros closer than `distinct_tol·(1 + |λ|)` are merged.
    pub distinct_tol: T,
    /// Maximum bisection depth of the argument-principle subdivision.
    pub max_depth: usize,
}

impl<T: Real> Default for SearchOptions<T> {
    fn default() -> Self {
        Self { scan_step: lit(0.05), verify_tol: lit(1e-6), distinct_tol: lit(1e-8), max_depth: 16 }
    }
}

#[inline]
fn s_of<T: Real>(l: T) -> T {
    if l >= T::zero() {
        l.sqrt()
    } else {
        -(-l).sqrt()
    }
}

#[inline]
fn lam_of<T: Real>(s: T) -> T {
    s * s.abs()
}

/// Brent's method on a bracketing interval with `fa·fb ≤ 0`.
fn brent<T: Real>(f: &impl Fn(T) -> Result<T>, mut a: T, mut b: T, mut fa: T, mut fb: T) -> Result<T> {
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    let two = lit::<T>(2.0);
    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if (fb > T::zero()) == (fc > T::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = two * T::epsilon() * b.abs() + T::min_positive_value();
        let xm = (c - b) / two;
        if xm.abs() <= tol || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = lit::<T>(3.0) * xm * q - (tol * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol { b + d } else { b + if xm > T::zero() { tol } else { -tol } };
        fb = f(b)?;
    }
    Ok(b)
}

/// Zeros of a real function on a real λ-window by sign changes on the `s` grid,
/// filtered by `accept`.
pub(crate) fn real_sign_change_zeros<T: Real>(
    g: &(impl Fn(T) -> Result<T> + Sync),
    window: (T, T),
    opts: &SearchOptions<T>,
    accept: impl Fn(T) -> Result<bool> + Sync,
) -> Result<Vec<T>> {
    let (s0, s1) = (s_of(window.0), s_of(window.1));
    let n = ((s1 - s0) / opts.scan_step).ceil().to_usize().unwrap_or(1).max(1);
    let ss: Vec<T> = (0..=n).map(|i| s0 + (s1 - s0) * idx::<T>(i) / idx::<T>(n)).collect();
    let vals: Vec<T> = ss.par_iter().map(|&s| g(lam_of(s))).collect::<Result<_>>()?;
    let gs = |s: T| g(lam_of(s));
    let found: Vec<Option<T>> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<Option<T>> {
            let (fa, fb) = (vals[i], vals[i + 1]);
            if fa == T::zero() {
                return Ok(Some(lam_of(ss[i])));
            }
            if fb == T::zero() {
                return Ok(if i + 1 == n { Some(lam_of(ss[n])) } else { None });
            }
            if (fa < T::zero()) == (fb < T::zero()) {
                return Ok(None);
            }
            let s = brent(&gs, ss[i], ss[i + 1], fa, fb)?;
            let l = lam_of(s);
            Ok(if accept(l)? { Some(l) } else { None })
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Local magnitude of `f` around `z` used to judge `|f(z)|`.
fn local_scale<T: Real>(f: &dyn Analytic<T>, z: Cx<T>) -> Result<T> {
    let delta = lit::<T>(1e-3) * rho_of(z).norm().max(T::one());
    let mut m = T::zero();
    for k in 0..4 {
        let e = Cx::from_polar(T::one(), T::FRAC_PI_2() * idx::<T>(k));
        m = m.max(f.value(z + e * delta)?.norm());
    }
    Ok(m)
}

/// Winding number of `f` around the rectangle `[x0, x1] × [−band, band]`.
fn winding<T: Real>(f: &dyn Analytic<T>, x0: T, x1: T, band: T, opts: &SearchOptions<T>) -> Result<i64> {
    let (s0, s1) = (s_of(x0), s_of(x1));
    let horizontal = |s: T, y: T| Cx::new(lam_of(s), y);
    let nh = ((s1 - s0) / (opts.scan_step * lit(2.0))).ceil().to_usize().unwrap_or(1).max(8);
    let mut total = T::zero();
    let mut edge = |path: &(dyn Fn(T) -> Cx<T> + Sync), n: usize| -> Result<()> {
        let ts: Vec<T> = (0..=n).map(|i| idx::<T>(i) / idx::<T>(n)).collect();
        let vals: Vec<Cx<T>> = ts.par_iter().map(|&t| f.value(path(t))).collect::<Result<_>>()?;
        let incs: Vec<T> = (0..n)
            .into_par_iter()
            .map(|i| arg_increment(f, path, ts[i], ts[i + 1], vals[i], vals[i + 1], 0))
            .collect::<Result<_>>()?;
        total = total + incs.into_iter().fold(T::zero(), |a, b| a + b);
        Ok(())
    };
    edge(&|t| horizontal(s0 + (s1 - s0) * t, -band), nh)?;
    edge(&|t| Cx::new(x1, -band + band * lit::<T>(2.0) * t), 16)?;
    edge(&|t| horizontal(s1 - (s1 - s0) * t, band), nh)?;
    edge(&|t| Cx::new(x0, band - band * lit::<T>(2.0) * t), 16)?;
    let w = total / (lit::<T>(2.0) * T::PI());
    let rounded = w.round();
    if (w - rounded).abs() > lit(0.05) {
        return Err(Error::RootLoss { lo: to_f64(x0), hi: to_f64(x1), expected: -1, found: -1 });
    }
    Ok(rounded.to_i64().unwrap_or(0))
}

fn arg_increment<T: Real>(
    f: &dyn Analytic<T>,
    path: &(dyn Fn(T) -> Cx<T> + Sync),
    ta: T,
    tb: T,
    fa: Cx<T>,
    fb: Cx<T>,
    depth: usize,
) -> Result<T> {
    let d = (fb / fa).arg();
    if d.abs() <= T::PI() / lit(4.0) || depth >= 40 {
        return Ok(d);
    }
    let tm = (ta + tb) / lit(2.0);
    let fm = f.value(path(tm))?;
    Ok(arg_increment(f, path, ta, tm, fa, fm, depth + 1)? + arg_increment(f, path, tm, tb, fm, fb, depth + 1)?)
}

/// Newton iteration on `f(z)/Π(z − r)` over the known zeros `r`.
fn deflated_newton<T: Real>(f: &dyn Analytic<T>, seed: Cx<T>, known: &[Cx<T>], max_step: T) -> Result<Option<Cx<T>>> {
    let mut z = seed;
    for _ in 0..100 {
        let (v, dv) = f.value_and_derivative(z)?;
        if v == creal(T::zero()) {
            return Ok(Some(z));
        }
        let mut q = dv / v;
        for &r in known {
            q = q - (z - r).inv();
        }
        let mut step = q.inv();
        if !(step.re.is_finite() && step.im.is_finite()) {
            return Ok(None);
        }
        if step.norm() > max_step {
            step = step * (max_step / step.norm());
        }
        z = z - step;
        if step.norm() <= lit::<T>(1e-14) * (T::one() + z.norm()) {
            for _ in 0..3 {
                let (v, dv) = f.value_and_derivative(z)?;
                if v == creal(T::zero()) || dv == creal(T::zero()) {
                    break;
                }
                z = z - v / dv;
            }
            return Ok(Some(z));
        }
    }
    Ok(None)
}

struct Search<'a, T: Real> {
    f: &'a dyn Analytic<T>,
    band: T,
    opts: SearchOptions<T>,
    known: Vec<Cx<T>>,
}

impl<T: Real> Search<'_, T> {
    fn inside(&self, z: Cx<T>, x0: T, x1: T) -> bool {
        z.re > x0 && z.re < x1 && z.im.abs() < self.band
    }

    fn count_inside(&self, x0: T, x1: T) -> i64 {
        self.known.iter().filter(|z| self.inside(**z, x0, x1)).count() as i64
    }

    fn is_new(&self, z: Cx<T>) -> bool {
        self.known.iter().all(|k| (z - *k).norm() > self.opts.distinct_tol * (T::one() + z.norm()))
    }

    /// Moves an abscissa away from known real zeros.
    fn clear_of_zeros(&self, mut x: T) -> T {
        for _ in 0..8 {
            let gap = lit::<T>(1e-3) * rho_of(creal(x)).norm().max(T::one());
            match self.known.iter().find(|z| (z.re - x).abs() < gap && z.im.abs() < self.band) {
                Some(z) => x = z.re + gap * lit(2.0),
                None => break,
            }
        }
        x
    }

    fn resolve(&mut self, x0: T, x1: T, w: i64, depth: usize) -> Result<()> {
        let deficit = w - self.count_inside(x0, x1);
        if deficit == 0 {
            return Ok(());
        }
        let loss = |found: i64| Error::RootLoss { lo: to_f64(x0), hi: to_f64(x1), expected: w, found };
        if deficit < 0 {
            return Err(loss(self.count_inside(x0, x1)));
        }
        let (s0, s1) = (s_of(x0), s_of(x1));
        if depth >= self.opts.max_depth || s1 - s0 <= lit(1.0) {
            self.local_search(x0, x1, deficit)?;
            let found = self.count_inside(x0, x1);
            return if found == w { Ok(()) } else { Err(loss(found)) };
        }
        let xm = self.clear_of_zeros(lam_of((s0 + s1) / lit(2.0)));
        if !(xm > x0 && xm < x1) {
            self.local_search(x0, x1, deficit)?;
            let found = self.count_inside(x0, x1);
            return if found == w { Ok(()) } else { Err(loss(found)) };
        }
        let wl = winding(self.f, x0, xm, self.band, &self.opts)?;
        self.resolve(x0, xm, wl, depth + 1)?;
        self.resolve(xm, x1, w - wl, depth + 1)
    }

    fn local_search(&mut self, x0: T, x1: T, mut deficit: i64) -> Result<()> {
        let (s0, s1) = (s_of(x0), s_of(x1));
        let max_step = (x1 - x0).max(self.band);
        let fracs = [0.5, 0.25, 0.75, 0.1, 0.9];
        let ims = [0.0, 0.5, -0.5, 0.85, -0.85, 0.2, -0.2];
        for &fx in &fracs {
            for &fy in &ims {
                if deficit <= 0 {
                    return Ok(());
                }
                let seed = Cx::new(lam_of(s0 + (s1 - s0) * lit(fx)), self.band * lit(fy));
                if let Some(z) = deflated_newton(self.f, seed, &self.known, max_step)? {
                    if self.inside(z, x0, x1) && self.is_new(z) {
                        self.known.push(z);
                        deficit -= 1;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Zeros of `delta` with `Re λ ∈ window` and `|Im λ| < imag_band`, at most
/// `count`, sorted by real part, ties broken by imaginary part.
///
/// Real zeros are bracketed by sign changes when `delta` is real on the axis.
/// With `imag_band > 0` the argument principle certifies the total count and
/// missing zeros are located by subdivision and deflated Newton search.
pub fn find_eigenvalues<T: Real>(
    delta: &dyn Analytic<T>,
    window: (T, T),
    imag_band: T,
    count: usize,
    opts: &SearchOptions<T>,
) -> Result<Subspectrum<T>> {
    if !(window.0 < window.1) {
        return Err(Error::InvalidInput("empty search window".into()));
    }
    let probe = [window.0, (window.0 + window.1) / lit(2.0), window.1];
    let mut real_axis = true;
    for &x in &probe {
        let v = delta.value(creal(x))?;
        if v.im.abs() > lit::<T>(1e-12) * v.norm() {
            real_axis = false;
        }
    }
    let mut known: Vec<Cx<T>> = Vec::new();
    if real_axis {
        let g = |l: T| delta.value(creal(l)).map(|v| v.re);
        let zeros = real_sign_change_zeros(&g, window, opts, |_| Ok(true))?;
        known.extend(zeros.into_iter().map(creal));
    }
    if imag_band > T::zero() {
        let mut search = Search { f: delta, band: imag_band, opts: *opts, known };
        let x0 = search.clear_of_zeros(window.0);
        let x1 = search.clear_of_zeros(window.1);
        let w = winding(delta, x0, x1, imag_band, opts)?;
        search.resolve(x0, x1, w, 0)?;
        known = search.known;
    }
    let mut verified = Vec::with_capacity(known.len());
    for z in known {
        let v = delta.value(z)?.norm();
        if v == T::zero() || v <= opts.verify_tol * local_scale(delta, z)? {
            verified.push(z);
        }
    }
    // Runs of equal real part (conjugate pairs) are ordered by Im, so the order
    // does not depend on rounding in the search.
    let cmp = |x: T, y: T| x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal);
    verified.sort_by(|a, b| cmp(a.re, b.re));
    let tie = lit::<T>(1e-9);
    let mut start = 0;
    for k in 1..=verified.len() {
        let same = k < verified.len()
            && (verified[k].re - verified[k - 1].re).abs() <= tie * (T::one() + verified[k].re.abs());
        if !same {
            verified[start..k].sort_by(|a, b| cmp(a.im, b.im));
            start = k;
        }
    }
    let mut out: Vec<Cx<T>> = Vec::with_capacity(verified.len());
    for z in verified {
        if out.iter().all(|k| (z - *k).norm() > opts.distinct_tol * (T::one() + z.norm())) {
            out.push(z);
        }
    }
    out.truncate(count);
    Ok(Subspectrum::new(out))
}

/// The first `count` zeros with `Re λ ≥ lo`, growing the window until more
/// than `count` zeros are seen.
pub fn find_first_eigenvalues<T: Real>(
    delta: &dyn Analytic<T>,
    count: usize,
    lo: T,
    imag_band: T,
    opts: &SearchOptions<T>,
) -> Result<Subspectrum<T>> {
    let mut s_hi = lit::<T>(2.0).max(idx::<T>(count) * lit(0.6) + lit(2.0));
    for _ in 0..12 {
        let hi = s_hi * s_hi;
        let found = find_eigenvalues(delta, (lo, hi), imag_band, count + 1, opts)?;
        if found.len() > count {
            return Ok(found.take(count));
        }
        s_hi = s_hi * lit(1.5);
    }
    Err(Error::RootLoss { lo: to_f64(lo), hi: to_f64(s_hi * s_hi), expected: count as i64, found: -1 })
}
