use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use holo_core::holostate::format_f64;
use holo_core::{BargmannSpace, HoloPoly, MultiIndex, QuadratureGrid, C64};

use crate::output::{emit, Format, Table};

/// Relative error at or above which the check fails.
const TOLERANCE: f64 = 1e-7;

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(subcommand)]
    action: Action,
}

#[derive(clap::Subcommand, Debug)]
enum Action {
    /// Monomial inner products and kernel identities, exact vs quadrature.
    Check {
        /// Largest total monomial degree.
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Row {
    test: String,
    exact: C64,
    quad: C64,
    rel_err: f64,
}

pub fn run(args: Args) -> Result<ExitCode> {
    let Action::Check {
        max_degree,
        format,
        out,
    } = args.action;
    let mut rows = Vec::new();
    for t in [0.5, 1.0, 2.0] {
        let s = BargmannSpace::new(1, t)?;
        let grid = QuadratureGrid::for_space(&s);
        for a in 0..=max_degree {
            for b in [a, a + 1] {
                if b > max_degree {
                    continue;
                }
                let f = HoloPoly::monomial(1, max_degree, MultiIndex::new(vec![a]), C64::new(1.0, 0.0))?;
                let g = HoloPoly::monomial(1, max_degree, MultiIndex::new(vec![b]), C64::new(1.0, 0.0))?;
                let exact = s.inner_product(&f, &g)?;
                let quad = s.inner_product_quadrature(&f, &g, &grid)?;
                let scale = (s.norm_sq(&f)? * s.norm_sq(&g)?).sqrt();
                rows.push(Row {
                    test: format!("t={}:<z^{a}|z^{b}>", format_f64(t)),
                    exact,
                    quad,
                    rel_err: (exact - quad).norm() / scale,
                });
            }
        }
    }
    let s = BargmannSpace::new(2, 1.0)?;
    let grid = QuadratureGrid::for_space(&s);
    let f = HoloPoly::from_terms(
        2,
        3,
        [
            (MultiIndex::new(vec![0, 0]), C64::new(0.5, 0.0)),
            (MultiIndex::new(vec![1, 2]), C64::new(0.3, -1.0)),
        ],
    )?;
    let points = [[C64::new(0.6, -0.3), C64::new(-0.2, 0.7)], [C64::new(1.0, 0.0), C64::new(0.0, 0.9)]];
    for (k, z) in points.iter().enumerate() {
        let exact = f.evaluate(z)?;
        let quad = s.kernel_reproduce(&f, z, &grid)?;
        rows.push(Row {
            test: format!("reproduce:{k}"),
            exact,
            quad,
            rel_err: (exact - quad).norm() / exact.norm().max(1.0),
        });
        let w = &points[(k + 1) % points.len()];
        let exact = s.kernel_eval(z, w)?;
        let quad = s.kernel_semigroup(z, w, &grid)?;
        rows.push(Row {
            test: format!("semigroup:{k}"),
            exact,
            quad,
            rel_err: (exact - quad).norm() / exact.norm(),
        });
    }

    let mut table = Table::new(vec!["test", "exact_re", "exact_im", "quad_re", "quad_im", "rel_err"]);
    let mut failed = false;
    for r in &rows {
        failed |= r.rel_err.is_nan() || r.rel_err >= TOLERANCE;
        table.push(vec![
            r.test.clone(),
            format_f64(r.exact.re),
            format_f64(r.exact.im),
            format_f64(r.quad.re),
            format_f64(r.quad.im),
            format_f64(r.rel_err),
        ]);
    }
    emit(out.as_deref(), &table.render(format)?)?;
    if failed {
        eprintln!("error: relative error at or above {TOLERANCE:e}");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}
