//! Potential samples in CSV form.
//!
//! Header `x[,y],v_11,v_12r,v_12i,...,v_22,...`: coordinates, then the upper
//! triangle of a Hermitian matrix in row-major order with real diagonal
//! entries and split off-diagonal ones. Rows must cover a uniform periodic
//! grid `x_i = -L + i·2L/N`.

use std::collections::BTreeMap;
use std::io::Read;

use nalgebra::DMatrix;
use polylt::linalg::HermitianMatrix;
use polylt::{GridConfig, PotentialField};

fn column_names(m: usize) -> Vec<String> {
    let mut names = Vec::new();
    for i in 1..=m {
        for j in i..=m {
            if i == j {
                names.push(format!("v_{i}{j}"));
            } else {
                names.push(format!("v_{i}{j}r"));
                names.push(format!("v_{i}{j}i"));
            }
        }
    }
    names
}

/// Recovers `(L, N)` from sorted unique axis coordinates.
fn axis_grid(coords: &[f64]) -> Result<(f64, usize), String> {
    let n = coords.len();
    if n < 2 {
        return Err("need at least two grid points per axis".into());
    }
    let h = coords[1] - coords[0];
    let l = -coords[0];
    if h.is_nan() || h <= 0.0 || (n as f64 * h - 2.0 * l).abs() > 1e-9 * l.abs().max(1.0) {
        return Err(format!(
            "axis is not the periodic grid [-L, L): first {}, spacing {h}, {n} points",
            coords[0]
        ));
    }
    for (i, &x) in coords.iter().enumerate() {
        if (x - (-l + i as f64 * h)).abs() > 1e-9 * l.max(1.0) {
            return Err(format!("axis point {i} ({x}) is off the uniform grid"));
        }
    }
    Ok((l, n))
}

pub fn read_potential<R: Read>(reader: R) -> Result<PotentialField, String> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(str::to_string)
        .collect();
    let dim = match header.iter().take(2).map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["x", "y"] => 2,
        ["x", ..] => 1,
        _ => return Err("header must start with x or x,y".into()),
    };
    let entries = header.len() - dim;
    let m = (entries as f64).sqrt().round() as usize;
    if m == 0 || m * m != entries {
        return Err(format!("{entries} matrix columns do not form a Hermitian m x m upper triangle"));
    }
    let expected = column_names(m);
    if header[dim..] != expected[..] {
        return Err(format!("matrix columns must be {}", expected.join(",")));
    }

    let mut rows: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let nums: Vec<f64> = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| format!("row {}: cannot parse {s:?}", line + 2)))
            .collect::<Result<_, _>>()?;
        if nums.len() != header.len() {
            return Err(format!("row {} has {} fields, expected {}", line + 2, nums.len(), header.len()));
        }
        rows.push((nums[..dim].to_vec(), nums[dim..].to_vec()));
    }

    let unique = |k: usize| {
        let mut v: Vec<f64> = rows.iter().map(|r| r.0[k]).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    };
    let (l, n) = axis_grid(&unique(0))?;
    if dim == 2 {
        let (l2, n2) = axis_grid(&unique(1))?;
        if n2 != n || (l2 - l).abs() > 1e-9 * l {
            return Err("both axes must share the same grid".into());
        }
    }
    let grid = GridConfig::new(l, n, dim).map_err(|e| e.to_string())?;
    let h = grid.spacing();
    let index = |x: f64| ((x + l) / h).round() as usize;
    let mut by_site: BTreeMap<usize, HermitianMatrix> = BTreeMap::new();
    for (coords, vals) in rows {
        let site = match dim {
            1 => index(coords[0]),
            _ => index(coords[0]) * n + index(coords[1]),
        };
        let mut re = DMatrix::zeros(m, m);
        let mut im = DMatrix::zeros(m, m);
        let mut it = vals.into_iter();
        for i in 0..m {
            for j in i..m {
                if i == j {
                    re[(i, i)] = it.next().unwrap_or_default();
                } else {
                    let (a, b) = (it.next().unwrap_or_default(), it.next().unwrap_or_default());
                    re[(i, j)] = a;
                    re[(j, i)] = a;
                    im[(i, j)] = b;
                    im[(j, i)] = -b;
                }
            }
        }
        if by_site.insert(site, HermitianMatrix::from_parts(re, im)).is_some() {
            return Err(format!("duplicate grid point {coords:?}"));
        }
    }
    if by_site.len() != grid.num_sites() {
        return Err(format!("expected {} grid points, found {}", grid.num_sites(), by_site.len()));
    }
    PotentialField::new(grid, m, by_site.into_values().collect()).map_err(|e| e.to_string())
}

/// Writes a field in the same format.
#[cfg(test)]
pub fn write_potential(v: &PotentialField) -> String {
    let m = v.m();
    let mut header: Vec<String> = if v.grid().dim == 2 { vec!["x".into(), "y".into()] } else { vec!["x".into()] };
    header.extend(column_names(m));
    let mut out = header.join(",");
    out.push('\n');
    for (s, sample) in v.samples().iter().enumerate() {
        let mut fields: Vec<String> = v.grid().site(s).iter().map(|x| format!("{x}")).collect();
        for i in 0..m {
            for j in i..m {
                fields.push(format!("{}", sample.re[(i, j)]));
                if i != j {
                    fields.push(format!("{}", sample.im.as_ref().map_or(0.0, |im| im[(i, j)])));
                }
            }
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
