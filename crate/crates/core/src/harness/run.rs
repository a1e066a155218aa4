use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::harness::config::{invalid, ExperimentConfig, ExperimentKind};
use crate::harness::svg::{Plot, Series};
use crate::harness::table::{Cell, ResultTable};
use crate::matrix_io::read_bit_matrix;
use crate::network::{random_dag, NetworkSpec};
use crate::rd::{rd_encode_multi, LinearCode};
use crate::rng::{derive_seed, stream};
use crate::sparsifier::{binomial_sigma, distortion_rate, gauss_baseline, gauss_expected_density, sparsify};
use crate::syndrome::prop2::{entry_zero_frequency, random_column};
use crate::syndrome::{design_joint_code, entry_zero_prob, structured_ldpc, wyner_pipeline, JointParams};

/// Table plus the plot drawn from it.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub kind: ExperimentKind,
    pub table: ResultTable,
    pub plot: Plot,
}

/// Runs one experiment. Output depends only on the config, not on the
/// number of threads.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let (mut table, plot) = match cfg.kind() {
        ExperimentKind::DensityVsRate => density_vs_rate(cfg)?,
        ExperimentKind::DensityVsRepetitions => density_vs_repetitions(cfg)?,
        ExperimentKind::BerSweep => ber_sweep(cfg)?,
        ExperimentKind::RdGap => rd_gap(cfg)?,
        ExperimentKind::NetcodeSparsify => netcode_sparsify(cfg)?,
        ExperimentKind::Prop2Validate => prop2_validate(cfg)?,
    };
    if cfg.wall_time != Some(true) {
        if let Some(j) = table.column_index("wall_time") {
            table.columns.remove(j);
            for r in &mut table.rows {
                r.remove(j);
            }
        }
    }
    Ok(RunOutput {
        kind: cfg.kind(),
        table,
        plot,
    })
}

/// Writes the CSV and, if requested, the SVG named in the config.
pub fn run_and_write(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let out = run(cfg)?;
    if let Some(p) = &cfg.output {
        out.table.write_csv(&cfg.resolve(p))?;
    }
    if let Some(p) = &cfg.svg {
        std::fs::write(cfg.resolve(p), out.plot.render())?;
    }
    Ok(out)
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let t = Instant::now();
    let v = f()?;
    Ok((v, t.elapsed().as_secs_f64()))
}

fn full_rank_uniform(n: usize, cols: usize, seed: u64) -> BitMatrix {
    let mut r = stream(seed, &[]);
    loop {
        let a = BitMatrix::random(n, cols, &mut r);
        if a.rank() == cols {
            return a;
        }
    }
}

fn columns_for(n: usize, rate: f64) -> Result<usize> {
    let cols = (n as f64 * rate).round() as usize;
    if cols == 0 || cols > n {
        return Err(invalid("rates", format!("rate {rate} gives {cols} columns at n = {n}")));
    }
    Ok(cols)
}

fn mean(v: impl IntoIterator<Item = f64>) -> f64 {
    let (s, c) = v.into_iter().fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    s / c as f64
}

fn density_vs_rate(cfg: &ExperimentConfig) -> Result<(ResultTable, Plot)> {
    let (n, rates, trials, passes, inst, seed) = (
        cfg.n()?,
        cfg.rates()?,
        cfg.trials()?,
        cfg.passes()?,
        cfg.instances(),
        cfg.seed(),
    );
    let points: Vec<(usize, usize)> = (0..rates.len()).flat_map(|i| (0..inst).map(move |j| (i, j))).collect();
    let results = points
        .par_iter()
        .map(|&(i, j)| {
            let cols = columns_for(n, rates[i])?;
            timed(|| {
                let a = full_rank_uniform(n, cols, derive_seed(seed, &[i as u64, j as u64, 0]));
                let s = sparsify(&a, trials, passes, derive_seed(seed, &[i as u64, j as u64, 1]))?;
                Ok((s.density, gauss_baseline(&a)?.density))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = ResultTable::new(&[
        "rate",
        "n",
        "cols",
        "instances",
        "trials",
        "passes",
        "density",
        "gauss_density",
        "gauss_expected",
        "dr_bound",
        "lower_bound",
        "seed",
        "wall_time",
    ]);
    let mut ours = Vec::new();
    let mut gauss = Vec::new();
    let mut bound = Vec::new();
    for (i, &rate) in rates.iter().enumerate() {
        let chunk = &results[i * inst..(i + 1) * inst];
        let cols = columns_for(n, rate)?;
        let d = mean(chunk.iter().map(|r| r.0 .0));
        let g = mean(chunk.iter().map(|r| r.0 .1));
        let dr = distortion_rate(cols as f64 / n as f64)?;
        t.push(vec![
            rate.into(),
            n.into(),
            cols.into(),
            inst.into(),
            trials.into(),
            passes.into(),
            d.into(),
            g.into(),
            gauss_expected_density(n, n - cols).into(),
            dr.into(),
            (dr - 3.0 * binomial_sigma(dr, n * cols * inst)).into(),
            seed.into(),
            chunk.iter().map(|r| r.1).sum::<f64>().into(),
        ]);
        ours.push((rate, d));
        gauss.push((rate, g));
        bound.push((rate, dr));
    }
    let plot = Plot::new("Density after sparsification", "rate (n-k)/n", "density")
        .with(Series::new("sparsified", ours))
        .with(Series::new("Gauss", gauss))
        .with(Series::new("D(R)", bound).dashed());
    Ok((t, plot))
}

fn density_vs_repetitions(cfg: &ExperimentConfig) -> Result<(ResultTable, Plot)> {
    let (n, rates, trials, reps, inst, seed) = (
        cfg.n()?,
        cfg.rates()?,
        cfg.trials()?,
        cfg.repetitions()?,
        cfg.instances(),
        cfg.seed(),
    );
    let max_pass = *reps.last().expect("validated nonempty");
    let points: Vec<(usize, usize)> = (0..rates.len()).flat_map(|i| (0..inst).map(move |j| (i, j))).collect();
    let results = points
        .par_iter()
        .map(|&(i, j)| {
            let cols = columns_for(n, rates[i])?;
            timed(|| {
                let a = full_rank_uniform(n, cols, derive_seed(seed, &[i as u64, j as u64, 0]));
                let s = sparsify(&a, trials, max_pass, derive_seed(seed, &[i as u64, j as u64, 1]))?;
                Ok((s.pass_densities, gauss_baseline(&a)?.density))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = ResultTable::new(&[
        "rate",
        "n",
        "cols",
        "repetitions",
        "trials",
        "instances",
        "density",
        "gauss_density",
        "dr_bound",
        "lower_bound",
        "seed",
        "wall_time",
    ]);
    let mut plot = Plot::new("Density against sparsification passes", "passes", "density");
    for (i, &rate) in rates.iter().enumerate() {
        let chunk = &results[i * inst..(i + 1) * inst];
        let cols = columns_for(n, rate)?;
        let dr = distortion_rate(cols as f64 / n as f64)?;
        let g = mean(chunk.iter().map(|r| r.0 .1));
        let wall = chunk.iter().map(|r| r.1).sum::<f64>();
        let mut curve = Vec::new();
        for &rep in &reps {
            let d = mean(chunk.iter().map(|r| r.0 .0[rep - 1]));
            curve.push((rep as f64, d));
            t.push(vec![
                rate.into(),
                n.into(),
                cols.into(),
                rep.into(),
                trials.into(),
                inst.into(),
                d.into(),
                g.into(),
                dr.into(),
                (dr - 3.0 * binomial_sigma(dr, n * cols * inst)).into(),
                seed.into(),
                wall.into(),
            ]);
        }
        let (x0, x1) = (reps[0] as f64, max_pass as f64);
        plot = plot
            .with(Series::new(format!("R = {rate}"), curve))
            .with(Series::new(format!("D({rate})"), vec![(x0, dr), (x1, dr)]).dashed());
    }
    Ok((t, plot))
}

fn load_network(cfg: &ExperimentConfig) -> Result<NetworkSpec> {
    match &cfg.network {
        Some(p) => NetworkSpec::read(&cfg.resolve(p)),
        None => random_dag(
            cfg.dag_nodes.expect("validated"),
            cfg.dag_layers.expect("validated"),
            cfg.dag_edge_density.expect("validated"),
            cfg.dag_terminals.expect("validated"),
            &mut stream(cfg.seed(), &[0]),
        ),
    }
}

/// A single rate belongs to the best-connected terminal; the others get
/// it scaled by their share of the largest max-flow.
fn joint_params(cfg: &ExperimentConfig, net: &NetworkSpec) -> Result<JointParams> {
    let mut rates = cfg.rates()?;
    let terminals = net.terminals().len();
    if rates.len() == 1 {
        let flows: Vec<usize> = net.terminals().iter().map(|&t| net.maxflow(t)).collect();
        let w = flows.iter().copied().max().unwrap_or(1).max(1) as f64;
        rates = flows.iter().map(|&f| rates[0] * f as f64 / w).collect();
    }
    if rates.len() != terminals {
        return Err(invalid(
            "rates",
            format!("{} rates for {terminals} terminals", rates.len()),
        ));
    }
    Ok(JointParams {
        n: cfg.n()?,
        m: cfg.m()?,
        rates,
        lambda_policy: cfg.lambda_policy(),
        trials_per_column: cfg.trials.unwrap_or(10),
        passes: cfg.passes.unwrap_or(1),
        max_attempts: cfg.max_attempts.unwrap_or(50),
    })
}

fn ber_sweep(cfg: &ExperimentConfig) -> Result<(ResultTable, Plot)> {
    let seed = cfg.seed();
    let (ps, bits) = (cfg.p_list()?, cfg.bits()?);
    let h = if let Some(p) = &cfg.h_file {
        read_bit_matrix(&cfg.resolve(p))?
    } else if let Some(n) = cfg.structured {
        structured_ldpc(n, &mut stream(seed, &[0]))?
    } else {
        let net = load_network(cfg)?;
        let params = joint_params(cfg, &net)?;
        let design = design_joint_code(&net, &params, &mut stream(seed, &[1]))?;
        let term = match cfg.terminal {
            Some(label) => design.terminal(label)?,
            None => &design.terminals[0],
        };
        term.hbar.clone()
    };
    let n = h.rows();
    let blocks = bits.div_ceil(n as u64) as usize;
    let bp = cfg.bp_config();
    let mut t = ResultTable::new(&[
        "p",
        "bits",
        "bit_errors",
        "ber",
        "converged_fraction",
        "uncoded_ber",
        "n",
        "checks",
        "seed",
        "wall_time",
    ]);
    let mut curve = Vec::new();
    let mut uncoded = Vec::new();
    if blocks > 0 {
        let results = ps
            .par_iter()
            .enumerate()
            .map(|(i, &p)| timed(|| wyner_pipeline(&h, p, derive_seed(seed, &[2, i as u64]), blocks, &bp)))
            .collect::<Result<Vec<_>>>()?;
        for (&p, (r, wall)) in ps.iter().zip(results) {
            t.push(vec![
                p.into(),
                r.bits.into(),
                r.bit_errors.into(),
                r.ber.into(),
                r.converged_fraction().into(),
                p.into(),
                n.into(),
                h.cols().into(),
                seed.into(),
                wall.into(),
            ]);
            curve.push((p, r.ber));
            uncoded.push((p, p));
        }
    }
    let plot = Plot::new("Bit error rate after syndrome decoding", "crossover p", "BER")
        .log_y()
        .with(Series::new("decoded", curve))
        .with(Series::new("no decoding", uncoded).dashed());
    Ok((t, plot))
}

fn rd_gap(cfg: &ExperimentConfig) -> Result<(ResultTable, Plot)> {
    let (n, rates, draws, inst, seed) = (cfg.n()?, cfg.rates()?, cfg.draws()?, cfg.instances(), cfg.seed());
    let points: Vec<(usize, usize)> = (0..rates.len()).flat_map(|i| (0..inst).map(move |j| (i, j))).collect();
    // per (rate, instance): distortion for each draw count
    let results = points
        .par_iter()
        .map(|&(i, j)| {
            let dim = columns_for(n, rates[i])?;
            let mut r = stream(seed, &[i as u64, j as u64, 0]);
            let code = LinearCode::random(n, dim, &mut r)?;
            let b = crate::gf2::BitVec::random(n, &mut r);
            draws
                .iter()
                .map(|&d| {
                    let mut dr = stream(seed, &[i as u64, j as u64, 1]);
                    Ok(rd_encode_multi(&code, &b, d, &mut dr)?.distortion as f64 / n as f64)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = ResultTable::new(&[
        "n",
        "rate",
        "draws",
        "mean_norm_distortion",
        "DR_bound",
        "instances",
        "seed",
    ]);
    let mut plot = Plot::new("Distortion of randomized encoding", "draws", "normalized distortion");
    for (i, &rate) in rates.iter().enumerate() {
        let dim = columns_for(n, rate)?;
        let dr = distortion_rate(dim as f64 / n as f64)?;
        let chunk = &results[i * inst..(i + 1) * inst];
        let mut curve = Vec::new();
        for (k, &d) in draws.iter().enumerate() {
            let m = mean(chunk.iter().map(|v| v[k]));
            curve.push((d as f64, m));
            t.push(vec![
                n.into(),
                rate.into(),
                d.into(),
                m.into(),
                dr.into(),
                inst.into(),
                seed.into(),
            ]);
        }
        let (x0, x1) = (draws[0] as f64, *draws.last().unwrap() as f64);
        plot = plot
            .with(Series::new(format!("R = {rate}"), curve))
            .with(Series::new(format!("D({rate})"), vec![(x0, dr), (x1, dr)]).dashed());
    }
    Ok((t, plot))
}

/// Fraction of nonzero `m`-bit symbols, each column read top to bottom in
/// groups of `m` rows.
pub fn symbol_nonzero_fraction(a: &BitMatrix, m: usize) -> f64 {
    let groups = a.rows().div_ceil(m);
    let at = a.transpose();
    let nonzero: usize = (0..at.rows())
        .map(|j| {
            let col = at.row(j);
            (0..groups)
                .filter(|&g| (g * m..((g + 1) * m).min(a.rows())).any(|i| col.get(i)))
                .count()
        })
        .sum();
    nonzero as f64 / (groups * a.cols()) as f64
}

fn netcode_sparsify(cfg: &ExperimentConfig) -> Result<(ResultTable, Plot)> {
    let seed = cfg.seed();
    let net = load_network(cfg)?;
    let params = joint_params(cfg, &net)?;
    let (design, wall) = timed(|| design_joint_code(&net, &params, &mut stream(seed, &[1])))?;
    let m = design.code.m();
    let mut t = ResultTable::new(&[
        "terminal",
        "maxflow",
        "rate",
        "r_t",
        "symbols_nonzero_before_pct",
        "symbols_nonzero_after_pct",
        "density_before",
        "density_after",
        "gauss_density",
        "dr_bound",
        "target",
        "lower_bound_holds",
        "seed",
        "wall_time",
    ]);
    let (mut before, mut after) = (Vec::new(), Vec::new());
    for (k, (jt, tc)) in design.terminals.iter().zip(&design.code.terminals).enumerate() {
        let a = design.h.mul(&jt.b_eff)?;
        let sb = 100.0 * symbol_nonzero_fraction(&a, m);
        let sa = 100.0 * symbol_nonzero_fraction(&jt.hbar, m);
        before.push((k as f64, sb));
        after.push((k as f64, sa));
        t.push(vec![
            jt.node.into(),
            tc.maxflow.into(),
            jt.rate.into(),
            jt.r_t.into(),
            sb.into(),
            sa.into(),
            jt.density_before.into(),
            jt.density.into(),
            jt.gauss_density.into(),
            distortion_rate(jt.r_t as f64 / design.n as f64)?.into(),
            jt.target.into(),
            jt.lower_bound_holds.into(),
            seed.into(),
            Cell::Float(wall),
        ]);
    }
    let plot = Plot::new(
        &format!("Nonzero GF(2^{m}) symbols per terminal"),
        "terminal index",
        "percent nonzero",
    )
    .with(Series::new("before", before))
    .with(Series::new("after", after));
    Ok((t, plot))
}

fn prop2_validate(cfg: &ExperimentConfig) -> Result<(ResultTable, Plot)> {
    let (n, lambdas, weights, resamples, seed) =
        (cfg.n()?, cfg.lambdas()?, cfg.weights()?, cfg.resamples()?, cfg.seed());
    let points: Vec<(usize, usize)> = (0..lambdas.len())
        .flat_map(|i| (0..weights.len()).map(move |j| (i, j)))
        .collect();
    let results = points
        .par_iter()
        .map(|&(i, j)| {
            let b = random_column(n, weights[j], &mut stream(seed, &[i as u64, j as u64, 0]))?;
            entry_zero_frequency(
                n,
                lambdas[i],
                &b,
                resamples,
                derive_seed(seed, &[i as u64, j as u64, 1]),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = ResultTable::new(&[
        "n",
        "lambda",
        "l",
        "empirical_zero",
        "sigma",
        "formula",
        "within_3sigma",
        "resamples",
        "seed",
    ]);
    let mut plot = Plot::new(
        "Probability that an entry of HB is zero",
        "column weight l",
        "Pr(entry = 0)",
    );
    for (i, &lambda) in lambdas.iter().enumerate() {
        let (mut emp, mut formula) = (Vec::new(), Vec::new());
        for (j, &l) in weights.iter().enumerate() {
            let est = results[i * weights.len() + j];
            let f = entry_zero_prob(lambda, l, n);
            emp.push((l as f64, est.mean));
            formula.push((l as f64, f));
            t.push(vec![
                n.into(),
                lambda.into(),
                l.into(),
                est.mean.into(),
                est.sigma.into(),
                f.into(),
                est.within(f, 3.0).into(),
                resamples.into(),
                seed.into(),
            ]);
        }
        plot = plot
            .with(Series::new(format!("empirical, lambda = {lambda}"), emp))
            .with(Series::new(format!("formula, lambda = {lambda}"), formula).dashed());
    }
    Ok((t, plot))
}

/// Loads and runs a config file; see [`run_and_write`].
pub fn run_file(path: &std::path::Path) -> Result<RunOutput> {
    let cfg = ExperimentConfig::load(path)?;
    run_and_write(&cfg).map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        other => other,
    })
}
