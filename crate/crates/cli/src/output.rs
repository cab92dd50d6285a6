use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use hyperepp::analytics::Table;
use plotters::prelude::*;

/// Writes `table` as CSV: header row, LF line endings, 16 significant digits.
pub fn write_csv<W: Write>(table: &Table, out: W) -> anyhow::Result<()> {
    write_rows(table, None, out)
}

pub fn emit_csv(table: &Table, path: &Path) -> anyhow::Result<()> {
    emit_rows(table, None, path)
}

/// Row names shown as a leading text column: (header, one name per row).
pub type RowNames<'a> = Option<(&'a str, &'a [String])>;

pub(crate) fn write_rows<W: Write>(table: &Table, names: RowNames, out: W) -> anyhow::Result<()> {
    if table.columns.is_empty() || table.is_empty() {
        bail!("refusing to write an empty table");
    }
    if let Some((_, n)) = names {
        if n.len() != table.rows.len() {
            bail!("{} row names for {} rows", n.len(), table.rows.len());
        }
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let header = names
        .map(|(h, _)| h.to_string())
        .into_iter()
        .chain(table.columns.iter().cloned());
    w.write_record(header)?;
    for (k, row) in table.rows.iter().enumerate() {
        let name = names.map(|(_, n)| n[k].clone());
        w.write_record(
            name.into_iter()
                .chain(row.iter().map(|v| format!("{v:.15e}"))),
        )?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn emit_rows(table: &Table, names: RowNames, path: &Path) -> anyhow::Result<()> {
    if table.columns.is_empty() || table.is_empty() {
        bail!("refusing to write an empty table");
    }
    create_parent(path)?;
    let file =
        std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    write_rows(table, names, std::io::BufWriter::new(file))
}

fn create_parent(path: &Path) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    Ok(())
}

/// Line plot of every column against the first one. Non-finite points are
/// skipped.
pub fn plot_svg(table: &Table, title: &str, path: &Path) -> anyhow::Result<()> {
    if table.rows.len() < 2 {
        bail!("a plot needs at least two rows");
    }
    let series: Vec<(&str, Vec<(f64, f64)>)> = table.columns[1..]
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let pts = table
                .rows
                .iter()
                .map(|r| (r[0], r[k + 1]))
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .collect();
            (name.as_str(), pts)
        })
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = series.iter().flat_map(|(_, p)| p.iter().copied()).unzip();
    if xs.is_empty() {
        bail!("nothing finite to plot");
    }
    let span = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    };
    let ((x0, x1), (y0, y1)) = (span(&xs), span(&ys));
    create_parent(path)?;

    let root = SVGBackend::new(path, (800, 500)).into_drawing_area();
    root.fill(&WHITE)?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(x0..x1, y0..y1)?;
    chart
        .configure_mesh()
        .x_desc(table.columns[0].as_str())
        .draw()?;
    for (k, (name, pts)) in series.into_iter().enumerate() {
        let colour = Palette99::pick(k).to_rgba();
        chart
            .draw_series(LineSeries::new(pts, colour.stroke_width(2)))?
            .label(name)
            .legend(move |(x, y)| {
                PathElement::new(vec![(x, y), (x + 18, y)], colour.stroke_width(2))
            });
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()?;
    root.present()?;
    Ok(())
}
