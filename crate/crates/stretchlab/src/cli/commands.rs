use super::table::{format_number, heatmap, line_plot, Cell, Table};
use super::{emit, validate, Command, Format, RunConfig, Source, EXIT_OK, EXIT_VALIDATION};
use crate::eigensolver;
use crate::potentials::WaveFunction;
use crate::quantization::{solve_levels, Parity};
use crate::twod::{
    adiabaticity_margin, delta_norm_bound, delta_norm_ratio, stretched_2d_ground, ProfileShape, WaveguideProfile,
};
use crate::{Error, Result};
use rayon::prelude::*;
use std::path::PathBuf;

type Rows = Vec<Vec<Cell>>;

struct Rendered {
    table: Table,
    /// Series plotted by the svg writer: x column and y columns.
    plot: Option<(usize, Vec<usize>)>,
    heat: Option<(usize, usize, usize)>,
    companion: Option<(&'static str, Table)>,
}

pub(super) fn execute(cfg: &RunConfig) -> Result<i32> {
    let rendered = match cfg.command {
        Command::Validate => {
            let report = validate::run_checks(cfg.perturb_plateau);
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            emit(cfg.out.as_deref(), &text)?;
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("FAIL {}: observed {} (tolerance {}) {}", c.name, format_number(c.observed), format_number(c.tolerance), c.detail);
            }
            return Ok(if report.passed { EXIT_OK } else { EXIT_VALIDATION });
        }
        Command::Spectrum => spectrum(cfg)?,
        Command::Wavefunctions => wavefunctions(cfg)?,
        Command::Grid2d => grid2d(cfg)?,
        Command::Adiabatic => adiabatic(cfg)?,
    };
    write(cfg, &rendered)?;
    Ok(EXIT_OK)
}

fn render(cfg: &RunConfig, r: &Rendered, table: &Table, main: bool) -> String {
    match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
        Format::Svg if main => {
            if let Some((nx, ny, col)) = r.heat {
                heatmap(&table.title, nx, ny, &table.column(col))
            } else {
                let (xc, ys) = r.plot.clone().unwrap_or((0, vec![1]));
                let series: Vec<(String, Vec<f64>)> =
                    ys.iter().map(|&j| (table.columns[j].clone(), table.column(j))).collect();
                line_plot(&table.title, &table.column(xc), &series)
            }
        }
        Format::Svg => table.to_csv(),
    }
}

fn companion_path(out: &std::path::Path, suffix: &str, format: Format) -> PathBuf {
    let ext = match format {
        Format::Json => "json",
        _ => "csv",
    };
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}.{ext}"))
}

fn write(cfg: &RunConfig, r: &Rendered) -> Result<()> {
    emit(cfg.out.as_deref(), &render(cfg, r, &r.table, true))?;
    if let (Some((suffix, t)), Some(out)) = (&r.companion, &cfg.out) {
        emit(Some(&companion_path(out, suffix, cfg.format)), &render(cfg, r, t, false))?;
    }
    Ok(())
}

fn parity_tag(p: Option<Parity>) -> &'static str {
    match p {
        Some(Parity::Even) => "even",
        Some(Parity::Odd) => "odd",
        None => "-",
    }
}

fn level_columns(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("E{i}")).chain((0..n).map(|i| format!("P{i}"))).collect()
}

fn spectrum(cfg: &RunConfig) -> Result<Rendered> {
    let n_max = cfg.levels - 1;
    match cfg.source.as_ref().expect("spectrum has a source") {
        Source::Potential(v) => {
            let pairs = eigensolver::solve(v, n_max, cfg.resolution)?;
            let mut table = Table::new("spectrum potential", level_columns(cfg.levels));
            table.columns.push("method".into());
            let mut row: Vec<Cell> = pairs.iter().map(|p| p.energy.into()).collect();
            row.extend(pairs.iter().map(|_| Cell::from("-")));
            row.push("shooting".into());
            table.rows.push(row);
            Ok(Rendered {
                plot: Some((0, (0..cfg.levels).collect())),
                table,
                heat: None,
                companion: None,
            })
        }
        Source::Preset(p) => {
            let two = p.is_two_parameter();
            let points: Vec<(f64, f64)> = if two {
                cfg.sweep.iter().flat_map(|&a| cfg.sweep2.iter().map(move |&b| (a, b))).collect()
            } else {
                cfg.sweep.iter().map(|&a| (a, 0.0)).collect()
            };
            let rows = points
                .par_iter()
                .map(|&(l, l2)| {
                    let label = if two { format!("L1 = {l}, L2 = {l2}") } else { format!("L = {l}") };
                    let s = p.geometry(l, l2).and_then(|g| solve_levels(&g, n_max)).map_err(|e| e.at(label))?;
                    let mut row: Vec<Cell> = vec![l.into()];
                    if two {
                        row.push(l2.into());
                    }
                    row.extend(s.levels.iter().map(|lv| Cell::from(lv.energy)));
                    row.extend(s.levels.iter().map(|lv| Cell::from(parity_tag(lv.parity))));
                    row.push("quantization".into());
                    Ok(row)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut columns: Vec<String> = if two { vec!["L1".into(), "L2".into()] } else { vec!["L".into()] };
            let offset = columns.len();
            columns.extend(level_columns(cfg.levels));
            columns.push("method".into());
            let mut table = Table::new(format!("spectrum {}", p.name()), columns);
            table.rows = rows;
            Ok(Rendered {
                plot: Some((0, (offset..offset + cfg.levels).collect())),
                table,
                heat: None,
                companion: None,
            })
        }
    }
}

fn sample_columns(states: &[(f64, WaveFunction)], lo: f64, hi: f64, n: usize) -> Rows {
    (0..n)
        .map(|i| {
            let x = if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
            std::iter::once(Cell::from(x))
                .chain(states.iter().map(|(_, w)| Cell::from(w.value(x))))
                .collect()
        })
        .collect()
}

fn wavefunctions(cfg: &RunConfig) -> Result<Rendered> {
    let n_max = cfg.levels - 1;
    let (title, states, (lo, hi)) = match cfg.source.as_ref().expect("wavefunctions has a source") {
        Source::Potential(v) => {
            let pairs = eigensolver::solve(v, n_max, cfg.resolution)?;
            let states: Vec<(f64, WaveFunction)> = pairs.into_iter().map(|p| (p.energy, p.wavefunction)).collect();
            let dom = states[0].1.domain();
            ("wavefunctions potential".to_string(), states, dom)
        }
        Source::Preset(p) => {
            let (l, l2) = cfg.at;
            let label = if p.is_two_parameter() { format!("L1 = {l}, L2 = {l2}") } else { format!("L = {l}") };
            let g = p.geometry(l, l2).map_err(|e| e.at(label.clone()))?;
            let s = solve_levels(&g, n_max).map_err(|e| e.at(label.clone()))?;
            let (slo, shi) = g.potential()?.support();
            let (elo, ehi) = s
                .levels
                .iter()
                .map(|lv| lv.wavefunction.effective_domain())
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (c, d)| (a.min(c), b.max(d)));
            let states = s.levels.into_iter().map(|lv| (lv.energy, lv.wavefunction)).collect();
            (format!("wavefunctions {} {label}", p.name()), states, (slo.max(elo), shi.min(ehi)))
        }
    };
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Internal(format!("sampling window [{lo}, {hi}]")));
    }
    let energies: Vec<String> = states.iter().map(|(e, _)| format_number(*e)).collect();
    let columns = std::iter::once("x".to_string())
        .chain((0..states.len()).map(|i| format!("psi{i}")))
        .collect();
    let mut table = Table::new(format!("{title} E = [{}]", energies.join(" ")), columns);
    table.rows = sample_columns(&states, lo, hi, cfg.resolution);
    Ok(Rendered {
        plot: Some((0, (1..=states.len()).collect())),
        table,
        heat: None,
        companion: None,
    })
}

fn grid2d(cfg: &RunConfig) -> Result<Rendered> {
    let (lx, ly) = cfg.at;
    let state = stretched_2d_ground(1.0, 1.0, lx, ly)?;
    let (xe, ye) = state.extent();
    let n = cfg.resolution;
    let coord = |i: usize, end: f64| if i + 1 == n { end } else { end * i as f64 / (n - 1) as f64 };
    let rows: Vec<(Rows, Rows)> = (0..n)
        .into_par_iter()
        .map(|j| {
            let y = coord(j, ye);
            (0..n)
                .map(|i| {
                    let x = coord(i, xe);
                    let (gx, gy) = state.gradient(x, y);
                    (
                        vec![x.into(), y.into(), state.value(x, y).into(), gx.into(), gy.into()],
                        vec![x.into(), y.into(), state.potential(x, y).into()],
                    )
                })
                .unzip()
        })
        .collect();
    let title = format!("grid2d Lx = {lx}, Ly = {ly}, E = {}", format_number(state.energy));
    let mut table = Table::new(
        title.clone(),
        ["x", "y", "psi", "dpsi_dx", "dpsi_dy"].map(String::from).to_vec(),
    );
    let mut pot = Table::new(format!("{title} potential"), ["x", "y", "V"].map(String::from).to_vec());
    for (a, b) in rows {
        table.rows.extend(a);
        pot.rows.extend(b);
    }
    Ok(Rendered {
        table,
        plot: None,
        heat: Some((n, n, 2)),
        companion: Some(("potential", pot)),
    })
}

fn adiabatic(cfg: &RunConfig) -> Result<Rendered> {
    let Some(Source::Preset(p)) = cfg.source else {
        return Err(Error::InvalidParameter("adiabatic needs a waveguide preset".into()));
    };
    let seed = p.waveguide_seed()?;
    let pr = cfg.profile;
    let shape = if pr.l_in == pr.l_fin {
        ProfileShape::Constant { length: pr.l_in }
    } else {
        ProfileShape::SmoothStep {
            l_in: pr.l_in,
            l_fin: pr.l_fin,
            y_in: pr.y_in,
            y_fin: pr.y_fin,
        }
    };
    let profile = WaveguideProfile::new(shape, pr.k, &seed)?;
    let f_norm = profile.moments.p4.sqrt();
    let rows = cfg
        .sweep
        .par_iter()
        .map(|&y| {
            let (l, dl, ddl) = profile.at(y);
            let (margin, valid) = match adiabaticity_margin(&profile, y) {
                Ok(m) => (m, "true"),
                Err(Error::SlopeTooLarge(_)) => (f64::NAN, "false"),
                Err(e) => return Err(e.at(format!("y = {y}"))),
            };
            let ratio = delta_norm_ratio(&profile, &seed, y).map_err(|e| e.at(format!("y = {y}")))?;
            Ok(vec![
                y.into(),
                l.into(),
                dl.into(),
                ddl.into(),
                margin.into(),
                (ratio * f_norm).into(),
                (delta_norm_bound(&profile, y) * f_norm).into(),
                f_norm.into(),
                valid.into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let columns = ["y", "L", "dL", "ddL", "margin", "delta_norm", "delta_bound", "f_norm", "valid"]
        .map(String::from)
        .to_vec();
    let mut table = Table::new(
        format!("adiabatic {} k = {} max|dL| = {}", p.name(), pr.k, format_number(profile.max_slope())),
        columns,
    );
    table.rows = rows;
    Ok(Rendered {
        table,
        plot: Some((0, vec![1, 5, 6])),
        heat: None,
        companion: None,
    })
}
