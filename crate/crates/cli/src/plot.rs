//! SVG figures: drift curves, decay fits and violation tallies.

use std::path::Path;

use plotters::prelude::*;

use crate::error::{CliError, CliResult};

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Half-widths of vertical error bars.
    pub errors: Option<Vec<f64>>,
    /// Join the points with a line instead of marking them.
    pub line: bool,
}

const SIZE: (u32, u32) = (800, 520);
const PALETTE: [RGBColor; 4] = [BLUE, RED, GREEN, BLACK];

fn plot_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Plot(e.to_string())
}

fn bounds(series: &[Series]) -> Option<((f64, f64), (f64, f64))> {
    let mut pts = series.iter().flat_map(|s| {
        let errs = s
            .errors
            .clone()
            .unwrap_or_else(|| vec![0.0; s.points.len()]);
        s.points
            .iter()
            .zip(errs)
            .flat_map(|(&(x, y), e)| [(x, y - e), (x, y + e)])
            .collect::<Vec<_>>()
    });
    let first = pts.next()?;
    let (mut x0, mut x1, mut y0, mut y1) = (first.0, first.0, first.1, first.1);
    for (x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let pad = |a: f64, b: f64| {
        let w = if b > a { (b - a) * 0.05 } else { 1.0 };
        (a - w, b + w)
    };
    Some((pad(x0, x1), pad(y0, y1)))
}

/// Points and lines on linear axes.
pub fn chart(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
) -> CliResult<()> {
    let Some(((x0, x1), (y0, y1))) = bounds(series) else {
        return Ok(());
    };
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let mut c = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(x0..x1, y0..y1)
        .map_err(plot_err)?;
    c.configure_mesh()
        .x_desc(x_label)
        .y_desc(y_label)
        .draw()
        .map_err(plot_err)?;
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if s.line {
            c.draw_series(LineSeries::new(s.points.iter().copied(), color))
                .map_err(plot_err)?
                .label(s.label.as_str())
                .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], color));
        } else {
            c.draw_series(s.points.iter().map(|&p| Circle::new(p, 3, color.filled())))
                .map_err(plot_err)?
                .label(s.label.as_str())
                .legend(move |(x, y)| Circle::new((x + 8, y), 3, color.filled()));
        }
        if let Some(errs) = &s.errors {
            c.draw_series(
                s.points
                    .iter()
                    .zip(errs)
                    .map(|(&(x, y), &e)| PathElement::new(vec![(x, y - e), (x, y + e)], color)),
            )
            .map_err(plot_err)?;
        }
    }
    c.configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(plot_err)?;
    root.present().map_err(plot_err)
}

/// One bar per label.
pub fn bars(path: &Path, title: &str, y_label: &str, bars: &[(String, f64)]) -> CliResult<()> {
    if bars.is_empty() {
        return Ok(());
    }
    let top = bars.iter().map(|b| b.1).fold(1.0f64, f64::max) * 1.1;
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let names: Vec<String> = bars.iter().map(|b| b.0.clone()).collect();
    let mut c = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(0.0..bars.len() as f64, 0.0..top)
        .map_err(plot_err)?;
    c.configure_mesh()
        .disable_x_mesh()
        .x_labels(bars.len())
        .x_label_formatter(&|x| {
            let i = x.floor() as usize;
            names.get(i).cloned().unwrap_or_default()
        })
        .y_desc(y_label)
        .draw()
        .map_err(plot_err)?;
    c.draw_series(bars.iter().enumerate().map(|(i, b)| {
        let x = i as f64;
        Rectangle::new([(x + 0.15, 0.0), (x + 0.85, b.1)], BLUE.filled())
    }))
    .map_err(plot_err)?;
    root.present().map_err(plot_err)
}
