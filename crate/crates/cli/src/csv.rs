//! Curve CSV: `t,x,y,z` optionally followed by `x1,y1,z1,x2,y2,z2,x3,y3,z3`.
//! Floats use the shortest representation that round-trips; lines end in LF.

use std::fmt;
use std::fmt::Write as _;

use wronskia::{Grid, SampledCurve};

pub const POSITION_HEADER: [&str; 4] = ["t", "x", "y", "z"];
pub const DERIV_HEADER: [&str; 9] = ["x1", "y1", "z1", "x2", "y2", "z2", "x3", "y3", "z3"];

#[derive(Debug, Clone, PartialEq)]
pub struct CsvError {
    /// 1-based line number; 0 when the problem is not tied to a line.
    pub line: usize,
    /// 1-based column, when known.
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for CsvError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (0, _) => write!(f, "{}", self.message),
            (l, Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            (l, None) => write!(f, "line {l}: {}", self.message),
        }
    }
}

impl std::error::Error for CsvError {}

fn header(derivs: bool) -> String {
    let mut cols: Vec<&str> = POSITION_HEADER.to_vec();
    if derivs {
        cols.extend(DERIV_HEADER);
    }
    cols.join(",")
}

pub fn write_curve(c: &SampledCurve, derivs: bool) -> String {
    let mut s = header(derivs);
    s.push('\n');
    let orders = if derivs { 4 } else { 1 };
    for (i, t) in c.grid().points().iter().enumerate() {
        write!(s, "{t:?}").unwrap();
        for k in 0..orders {
            for j in 0..3 {
                write!(s, ",{:?}", c.column(k, j)[i]).unwrap();
            }
        }
        s.push('\n');
    }
    s
}

pub fn parse_curve(text: &str, provenance: &str) -> Result<SampledCurve, CsvError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, head) = lines.next().ok_or(CsvError {
        line: 0,
        column: None,
        message: "input is empty".into(),
    })?;
    let names: Vec<&str> = head.split(',').map(str::trim).collect();
    let width = if names == POSITION_HEADER {
        4
    } else if names.len() == 13 && names[..4] == POSITION_HEADER && names[4..] == DERIV_HEADER {
        13
    } else {
        return Err(CsvError {
            line: 1,
            column: None,
            message: format!("header must be '{}' or '{}'", header(false), header(true)),
        });
    };

    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); width];
    for (idx, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != width {
            return Err(CsvError {
                line: idx + 1,
                column: None,
                message: format!("expected {width} fields, found {}", fields.len()),
            });
        }
        for (j, field) in fields.iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| CsvError {
                line: idx + 1,
                column: Some(j + 1),
                message: format!("'{}' is not a number", field.trim()),
            })?;
            if !v.is_finite() {
                return Err(CsvError {
                    line: idx + 1,
                    column: Some(j + 1),
                    message: format!("{v} is not finite"),
                });
            }
            cols[j].push(v);
        }
        let n = cols[0].len();
        if n >= 2 && cols[0][n - 1] <= cols[0][n - 2] {
            return Err(CsvError {
                line: idx + 1,
                column: Some(1),
                message: "t must be strictly increasing".into(),
            });
        }
    }

    let to_err = |e: wronskia::Error| CsvError {
        line: 0,
        column: None,
        message: e.to_string(),
    };
    let mut it = cols.into_iter();
    let t = it.next().unwrap();
    let grid = Grid::from_points(t).map_err(to_err)?;
    let mut take3 =
        || -> [Vec<f64>; 3] { [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()] };
    let position = take3();
    let derivs = (width == 13).then(|| [take3(), take3(), take3()]);
    SampledCurve::new(grid, position, derivs, provenance).map_err(to_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SampledCurve {
        let g = Grid::uniform(0.0, 1.0, 9).unwrap();
        let col = |f: fn(f64) -> f64| g.points().iter().map(|&t| f(t)).collect::<Vec<_>>();
        SampledCurve::new(
            g.clone(),
            [col(|t| t.exp()), col(|t| 1.0 / 3.0 + t), col(|t| -t * 1e-7)],
            None,
            "external",
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let c = sample();
        let text = write_curve(&c, false);
        assert!(text.starts_with("t,x,y,z\n"));
        let back = parse_curve(&text, "external").unwrap();
        for j in 0..3 {
            assert_eq!(back.column(0, j), c.column(0, j));
        }
        let full = write_curve(&c, true);
        let back = parse_curve(&full, "external").unwrap();
        assert!(back.has_analytic_derivatives());
        for k in 0..4 {
            for j in 0..3 {
                assert_eq!(back.column(k, j), c.column(k, j));
            }
        }
        assert_eq!(write_curve(&back, true), full);
    }

    #[test]
    fn diagnostics_name_line_and_column() {
        let e = parse_curve("t,x,y,z\n0,1,2,3\n0.1,1,oops,3\n", "x").unwrap_err();
        assert_eq!((e.line, e.column), (3, Some(3)));
        let e = parse_curve("t,x,y\n", "x").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_curve("t,x,y,z\n0,1,2,3\n0.1,1,2\n", "x").unwrap_err();
        assert_eq!((e.line, e.column), (3, None));
        let e = parse_curve("t,x,y,z\n0,1,2,3\n0,1,2,3\n", "x").unwrap_err();
        assert!(e.message.contains("increasing"));
        assert!(parse_curve("", "x").is_err());
    }
}
