#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swdl_core::signals::GaussianChirpParams;
use swdl_core::lct::Kernel;
use swdl_core::quadrature::integrate;
use swdl_core::tfd::{covering_axes, lcf_extent, swdl_definition, time_extent};
use swdl_core::{ChirpForm, Signal, SymplecticMatrix as S, TFGrid};

pub fn six_a1() -> S {
    S::new(2.0, 2.0, -0.25, 0.25).unwrap()
}

pub fn six_a2() -> S {
    S::new(0.0, 0.5, -2.0, 1.0).unwrap()
}

pub fn gaussian() -> Signal {
    Signal::gaussian(0.0, 1.0, 0.0).unwrap()
}

pub fn gauss_exponential() -> Signal {
    Signal::gauss_exponential(0.2, 1.0, 0.0, 2.0, 0.3).unwrap()
}

pub fn gauss_chirp_m1() -> Signal {
    Signal::gauss_chirp(GaussianChirpParams::gaussian(0.0, 1.0).with_chirp(2.0, ChirpForm::M1)).unwrap()
}

pub fn test_signals() -> Vec<(&'static str, Signal)> {
    vec![("gaussian", gaussian()), ("gauss_exponential", gauss_exponential()), ("gauss_chirp_m1", gauss_chirp_m1())]
}

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let x = rng.gen_range(lo..hi);
    if rng.gen_bool(0.5) { x } else { -x }
}

/// Pairs with every entry of `A1` and `b2` bounded away from zero.
pub fn random_pairs(n: usize, seed: u64) -> Vec<(S, S)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let (a, b, c) = (signed(&mut rng, 0.4, 1.2), signed(&mut rng, 0.4, 1.2), signed(&mut rng, 0.4, 1.2));
        let d = (1.0 + b * c) / a;
        if !(0.3..=3.0).contains(&d.abs()) {
            continue;
        }
        let (a2, b2, d2) = (rng.gen_range(-1.0..1.0), signed(&mut rng, 0.3, 1.2), rng.gen_range(-1.0..1.0));
        let c2 = (a2 * d2 - 1.0) / b2;
        out.push((S::new(a, b, c, d).unwrap(), S::new(a2, b2, c2, d2).unwrap()));
    }
    out
}

pub fn matrix_sweep() -> Vec<(String, S, S)> {
    let mut v = vec![("six".to_string(), six_a1(), six_a2()), ("wd".to_string(), S::wd_a1(), S::l1())];
    for (k, (a1, a2)) in random_pairs(5, 0x5eed).into_iter().enumerate() {
        v.push((format!("random{k}"), a1, a2));
    }
    v
}

/// Definition-path grid over the full extent of `W`.
pub fn full_grid(f: &Signal, a1: &S, a2: &S, n: usize) -> TFGrid {
    let (t, u) = covering_axes(f, a1, a2, n, n).unwrap();
    swdl_definition(f, a1, a2, &t, &u).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

pub fn inner(f: &Signal, g: &Signal) -> Complex64 {
    let (a, b) = f.finite_support().unwrap();
    let (c, d) = g.finite_support().unwrap();
    integrate(a.min(c), b.max(d), 512, |t| f.eval(t) * g.eval(t).conj())
}

pub fn energy(f: &Signal) -> f64 {
    inner(f, f).re
}

/// Points inside the central part of the `W` extent.
pub fn probe_points(f: &Signal, a1: &S, a2: &S, n: usize, seed: u64) -> Vec<(f64, f64)> {
    let (t0, t1) = time_extent(f, a1).unwrap();
    let (u0, u1) = lcf_extent(f, a1, a2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let s: f64 = rng.gen_range(-0.3..0.3);
            let r: f64 = rng.gen_range(-0.3..0.3);
            (0.5 * (t0 + t1) + s * (t1 - t0), 0.5 * (u0 + u1) + r * (u1 - u0))
        })
        .collect()
}

/// `max |x − y| / max |y|` over paired samples.
pub fn rel_sup(xs: &[Complex64], ys: &[Complex64]) -> f64 {
    let scale = ys.iter().map(|y| y.norm()).fold(0.0, f64::max).max(1e-300);
    xs.iter().zip(ys).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

/// Brute-force `∫ f(b1 t + d1 ε) conj f(a1 t + c1 ε) LK^{A2}(u, ε) dε`.
pub fn brute(f: &Signal, a1: &S, a2: &S, t: f64, u: f64) -> Complex64 {
    let k = Kernel::new(a2).unwrap();
    let (lo, hi) = f.finite_support().unwrap();
    let reach = (lo.abs().max(hi.abs()) + (a1.a().abs() + a1.b().abs()) * t.abs()) / a1.c().abs().max(a1.d().abs());
    integrate(-reach, reach, 6000, |e| f.eval(a1.b() * t + a1.d() * e) * f.eval(a1.a() * t + a1.c() * e).conj() * k.eval(u, e))
}

pub fn translation_phase(a1: &S, a2: &S, u: f64, th: f64) -> Complex64 {
    let k = a1.a() - a1.b();
    Complex64::from_polar(1.0, -a2.a() * a2.c() * k * k * th * th / 2.0 + a2.c() * k * u * th)
}

pub fn modulation_phase(a1: &S, a2: &S, t: f64, u: f64, xi: f64) -> Complex64 {
    let k = a1.d() - a1.c();
    Complex64::from_polar(1.0, -a2.b() * a2.d() * k * k * xi * xi / 2.0 + a2.d() * k * u * xi - (a1.a() - a1.b()) * t * xi)
}
