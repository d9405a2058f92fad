use std::io::Write;

use swdl_core::detect::{compare_methods, fit_ridge, radon, rate_distribution};
use swdl_core::moments::{bound_report, moment_report, product_check, DECOMPOSITION_FAIL};
use swdl_core::symplectic::{impulse_residual, lfm_a2, optimal_a1, resolution_bound, superresolution_flags};
use swdl_core::tfd::{relative_l2, swdl_definition, swdl_equivalent};
use swdl_core::TFGrid;

use crate::config::{MethodTag, Resolved, RunConfig};
use crate::error::CliError;
use crate::output::{key_values, Output};

fn warn(msg: &str) {
    eprintln!("warning: {msg}");
}

fn resolve(config: &RunConfig) -> Result<Resolved, CliError> {
    let r = config.resolve()?;
    r.warnings.iter().for_each(|w| warn(w));
    Ok(r)
}

fn grid(r: &Resolved, method: MethodTag) -> Result<TFGrid, CliError> {
    Ok(match method {
        MethodTag::Equivalent => swdl_equivalent(&r.signal, &r.a1, &r.a2, &r.t, &r.u)?,
        _ => swdl_definition(&r.signal, &r.a1, &r.a2, &r.t, &r.u)?,
    })
}

fn max_abs_deviation(a: &TFGrid, b: &TFGrid) -> f64 {
    a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn tfd(config: &RunConfig, out: &mut Output) -> Result<(), CliError> {
    let r = resolve(config)?;
    let method = config.run.method;
    if method != MethodTag::Both {
        let g = grid(&r, method)?;
        out.write("tfd.csv", |b| g.write_csv(b))?;
        out.write_heatmap("tfd.pgm", |b| g.write_pgm(b))?;
        println!("grid {}x{}, peak |W| = {}", g.t.len, g.u.len, g.peak());
        return Ok(());
    }
    let d = grid(&r, MethodTag::Definition)?;
    let e = grid(&r, MethodTag::Equivalent)?;
    out.write("tfd_definition.csv", |b| d.write_csv(b))?;
    out.write("tfd_equivalent.csv", |b| e.write_csv(b))?;
    out.write_heatmap("tfd.pgm", |b| d.write_pgm(b))?;
    let rel = relative_l2(&e, &d)?;
    let max = max_abs_deviation(&e, &d);
    out.write("deviation.csv", |b| {
        key_values(b, &[("relative_l2", rel.to_string()), ("max_abs", max.to_string()), ("tolerance", config.run.tolerance.to_string())])
    })?;
    println!("relative L2 deviation between paths = {rel}");
    if !(rel <= config.run.tolerance) {
        return Err(CliError::Tolerance(format!("paths differ by {rel:e} > {:e}", config.run.tolerance)));
    }
    Ok(())
}

pub fn bounds(config: &RunConfig, out: &mut Output) -> Result<(), CliError> {
    let r = resolve(config)?;
    let class = config.class()?;
    let moments = moment_report(&r.signal, &r.a1, &r.a2, &r.t, &r.u)?;
    if moments.truncated {
        warn("|W| is not negligible at the grid edge; moments are window-relative");
    }
    out.write("moments.csv", |b| moments.write_csv(b))?;
    match product_check(&moments, &r.a1) {
        Ok(p) => {
            if p.relative_gap > DECOMPOSITION_FAIL {
                warn(&format!("direct and decomposed products differ by {:e}", p.relative_gap));
            }
            out.write("product.csv", |b| {
                key_values(
                    b,
                    &[
                        ("direct", p.direct.to_string()),
                        ("decomposed", p.decomposed.to_string()),
                        ("relative_gap", p.relative_gap.to_string()),
                        ("flagged", p.flagged.to_string()),
                    ],
                )
            })?;
        }
        Err(e) => warn(&format!("no product decomposition: {e}")),
    }
    let b = bound_report(&r.signal, class, &r.a1, &r.a2, &moments, config.bounds.tolerance)?;
    out.write("bounds.csv", |w| b.write_csv(w))?;
    print!("{b}");
    if b.slack < -config.bounds.tolerance * b.lower_bound {
        return Err(CliError::Tolerance(format!("product {} is below the bound {}", b.product, b.lower_bound)));
    }
    Ok(())
}

pub fn detect(config: &RunConfig, out: &mut Output) -> Result<(), CliError> {
    let r = resolve(config)?;
    let method = match config.run.method {
        MethodTag::Both => MethodTag::Definition,
        m => m,
    };
    let g = grid(&r, method)?;
    let map = radon(&g, &r.slopes, &r.intercepts)?;
    let rate = rate_distribution(&map, &r.a1, &r.a2, config.run.alpha_known)?;
    let ridge = fit_ridge(&g);
    out.write_heatmap("tfd.pgm", |b| g.write_pgm(b))?;
    out.write("radon.csv", |b| map.write_csv(b))?;
    out.write("rate.csv", |b| rate.write_csv(b))?;
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    out.write("summary.csv", |b| {
        key_values(
            b,
            &[
                ("peak_rate", rate.peak_rate.to_string()),
                ("peak_to_mean", rate.peak_to_mean.to_string()),
                ("peak_intercept", rate.peak_intercept.to_string()),
                ("alpha_estimate", opt(rate.alpha_estimate)),
                ("predicted_intercept", opt(rate.predicted_intercept)),
                ("ridge_slope", opt(ridge.map(|x| x.0))),
                ("ridge_intercept", opt(ridge.map(|x| x.1))),
            ],
        )
    })?;
    println!("peak_rate = {}", rate.peak_rate);
    println!("peak_to_mean = {}", rate.peak_to_mean);
    if let Some((s, c)) = ridge {
        println!("ridge: u = {s} t + {c}");
    }
    Ok(())
}

pub fn experiment(config: &RunConfig, out: &mut Output) -> Result<(), CliError> {
    let r = resolve(config)?;
    let cmp = compare_methods(&r.signal, &r.a1, &r.a2, &r.t, &r.u, &r.slopes, &r.intercepts, config.run.alpha_known)?;
    for m in &cmp.methods {
        let name = m.distribution.name().to_ascii_lowercase();
        out.write_heatmap(&format!("{name}.pgm"), |b| m.grid.write_pgm(b))?;
        out.write(&format!("{name}_rate.csv"), |b| m.rate.write_csv(b))?;
    }
    out.write("comparison.csv", |b| cmp.write_csv(b))?;
    let flags = superresolution_flags(&r.a1, &r.a2);
    let most = cmp.swdl_most_concentrated();
    out.write("flags.csv", |b| {
        key_values(
            b,
            &[
                ("beats_swd", flags.beats_swd.to_string()),
                ("beats_wdl", flags.beats_wdl.to_string()),
                ("swdl_most_concentrated", most.to_string()),
            ],
        )
    })?;
    let mut stdout = std::io::stdout().lock();
    for m in &cmp.methods {
        writeln!(stdout, "{}: peak_rate = {}, peak_to_mean = {}", m.distribution.name(), m.peak_rate, m.peak_to_mean)?;
    }
    writeln!(stdout, "beats_swd = {}, beats_wdl = {}, swdl_most_concentrated = {most}", flags.beats_swd, flags.beats_wdl)?;
    Ok(())
}

/// Optimal first matrix for `(a1, b1)` and, given `beta`, the matching
/// second matrix.
pub fn optimize(a: f64, b: f64, beta: Option<f64>, b2: f64, d2: f64) -> Result<(), CliError> {
    let a1 = optimal_a1(a, b)?;
    println!("a1 = {a1}");
    println!("c1^2 + d1^2 = {}", a1.c() * a1.c() + a1.d() * a1.d());
    if let Some(beta) = beta {
        let a2 = lfm_a2(beta, b2, d2, a, b)?;
        let flags = superresolution_flags(&a1, &a2);
        println!("a2 = {a2}");
        println!("impulse_residual = {}", impulse_residual(beta, &a1, &a2));
        println!("resolution_bound = {}", resolution_bound(&a1, &a2)?);
        println!("beats_swd = {}, beats_wdl = {}", flags.beats_swd, flags.beats_wdl);
    }
    Ok(())
}
