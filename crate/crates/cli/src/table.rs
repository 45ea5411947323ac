//! Solution tables: header `t,u,du`, one row per mesh node, shortest
//! round-trip numerals. `du` is the slope of the element to the right of the
//! node; the last row repeats the slope of the last element.

use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use impulse_varsolve::fem::{DiscreteFunction, Mesh};

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("expected header `t,u,du`, found `{0}`")]
    Header(String),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("table has {found} rows but the mesh has {expected} nodes")]
    RowCount { found: usize, expected: usize },
    #[error("row {row}: t = {found} does not match mesh node {expected}")]
    NodeMismatch {
        row: usize,
        found: f64,
        expected: f64,
    },
    #[error("row {row}: boundary value {value} is not zero")]
    Boundary { row: usize, value: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub t: f64,
    pub u: f64,
    pub du: f64,
}

pub fn rows(u: &DiscreteFunction) -> Vec<Row> {
    let nodes = u.mesh().nodes();
    let values = u.nodal_values();
    let slopes = u.slopes();
    (0..nodes.len())
        .map(|k| Row {
            t: nodes[k],
            u: values[k],
            du: slopes[k.min(slopes.len() - 1)],
        })
        .collect()
}

pub fn write_table(u: &DiscreteFunction, out: impl Write) -> Result<(), TableError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "u", "du"])?;
    for r in rows(u) {
        w.write_record([
            format!("{:?}", r.t),
            format!("{:?}", r.u),
            format!("{:?}", r.du),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_table(input: impl Read) -> Result<Vec<Row>, TableError> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != ["t", "u", "du"] {
        return Err(TableError::Header(
            header.iter().collect::<Vec<_>>().join(","),
        ));
    }
    let mut out = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = k + 1;
        let num = |i: usize| -> Result<f64, TableError> {
            let field = rec.get(i).unwrap_or("");
            field.trim().parse().map_err(|_| TableError::Row {
                row,
                message: format!("cannot parse `{field}` as a number"),
            })
        };
        out.push(Row {
            t: num(0)?,
            u: num(1)?,
            du: num(2)?,
        });
    }
    Ok(out)
}

/// Rebuilds the discrete function, requiring the `t` column to reproduce the
/// mesh nodes exactly and `u` to vanish at both ends.
pub fn function_from_rows(mesh: &Arc<Mesh>, rows: &[Row]) -> Result<DiscreteFunction, TableError> {
    let nodes = mesh.nodes();
    if rows.len() != nodes.len() {
        return Err(TableError::RowCount {
            found: rows.len(),
            expected: nodes.len(),
        });
    }
    for (k, (r, &t)) in rows.iter().zip(nodes).enumerate() {
        if r.t != t {
            return Err(TableError::NodeMismatch {
                row: k + 1,
                found: r.t,
                expected: t,
            });
        }
    }
    let last = rows.len() - 1;
    for k in [0, last] {
        if rows[k].u != 0.0 {
            return Err(TableError::Boundary {
                row: k + 1,
                value: rows[k].u,
            });
        }
    }
    Ok(DiscreteFunction::from_coeffs(
        mesh,
        rows[1..last].iter().map(|r| r.u).collect(),
    ))
}

pub fn gnuplot_script(table: &Path) -> String {
    format!(
        "set datafile separator ','\nset key autotitle columnhead\nset xlabel 't'\nplot '{}' using 1:2 with linespoints title 'u'\n",
        table.display()
    )
}
