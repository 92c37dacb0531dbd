//! File formats for matrices, sweep ranges and run configurations.
//!
//! Three interchangeable matrix formats are supported:
//!
//! * CSV: a `# name rows cols` header line, then one comma-separated row
//!   per line, values printed with 17 significant digits.
//! * JSON: `{"name", "rows", "cols", "data"}` with row-major data.
//! * Matrix Market: `coordinate` layout (1-based, nonzero entries) for the
//!   sparse operators, `array` layout (column-major) for dense matrices,
//!   with the matrix name carried in a `% name` comment.
//!
//! All parsers are panic-free on arbitrary input, reject non-finite values
//! and cap the accepted matrix size.

use crate::decomposition::Decomposition;
use crate::error::ParseError;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;

/// Upper bound on rows * cols accepted by the parsers.
pub const MAX_MATRIX_ELEMENTS: usize = 1 << 20;

/// Upper bound on the number of points a sweep range may expand to.
pub const MAX_SWEEP_POINTS: usize = 100_000;

/// On-disk matrix: a name, dimensions and row-major data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl MatrixFile {
    pub fn from_dmatrix(name: &str, m: &DMatrix<f64>) -> Self {
        let mut data = Vec::with_capacity(m.nrows() * m.ncols());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                data.push(m[(r, c)]);
            }
        }
        Self {
            name: name.to_owned(),
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    fn validate(self) -> Result<Self, ParseError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(ParseError::Malformed {
                line: 1,
                reason: "matrix dimensions must be at least 1x1".to_owned(),
            });
        }
        let elements = self
            .rows
            .checked_mul(self.cols)
            .filter(|n| *n <= MAX_MATRIX_ELEMENTS)
            .ok_or(ParseError::TooLarge {
                rows: self.rows,
                cols: self.cols,
            })?;
        if self.data.len() != elements {
            return Err(ParseError::DimensionMismatch {
                rows: self.rows,
                cols: self.cols,
                actual: self.data.len(),
            });
        }
        if let Some(bad) = self.data.iter().find(|v| !v.is_finite()) {
            return Err(ParseError::Malformed {
                line: 1,
                reason: format!("non-finite value {bad}"),
            });
        }
        Ok(self)
    }
}

/// Supported serialization formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FileFormat {
    Csv,
    Json,
    MatrixMarket,
}

impl FileFormat {
    pub const ALL: [Self; 3] = [Self::Csv, Self::Json, Self::MatrixMarket];

    pub fn token(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
            Self::MatrixMarket => "matrix-market",
        }
    }
}

impl fmt::Display for FileFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for FileFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.token().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown format {s:?}, expected csv, json or matrix-market"))
    }
}

/// Matrix Market layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixMarketLayout {
    /// Dense column-major listing.
    Array,
    /// 1-based (row, col, value) triplets of the nonzero entries.
    Coordinate,
}

/// The matrices a decomposition exposes by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    /// Equilibrium matrix A.
    Equilibrium,
    /// Flexibility F.
    Flexibility,
    /// Generalized stiffness S.
    GeneralizedStiffness,
    /// Physical stiffness K.
    PhysicalStiffness,
    /// Basic stiffness K_b.
    Basic,
    /// Higher-order stiffness K_h.
    HigherOrder,
    /// Lumping matrix L.
    Lumping,
    /// Higher-order projector H.
    Projector,
    /// Diagonal mode weights W.
    Weights,
    /// Basic displacement patterns.
    BasicModes,
    /// Higher-order kernel X.
    Kernel,
    /// Weighted kernel R.
    WeightedKernel,
}

impl MatrixKind {
    pub const ALL: [Self; 12] = [
        Self::Equilibrium,
        Self::Flexibility,
        Self::GeneralizedStiffness,
        Self::PhysicalStiffness,
        Self::Basic,
        Self::HigherOrder,
        Self::Lumping,
        Self::Projector,
        Self::Weights,
        Self::BasicModes,
        Self::Kernel,
        Self::WeightedKernel,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Self::Equilibrium => "a",
            Self::Flexibility => "fbeta",
            Self::GeneralizedStiffness => "sbeta",
            Self::PhysicalStiffness => "ksigma",
            Self::Basic => "kb",
            Self::HigherOrder => "kh",
            Self::Lumping => "l",
            Self::Projector => "hh",
            Self::Weights => "w",
            Self::BasicModes => "grc",
            Self::Kernel => "x",
            Self::WeightedKernel => "r",
        }
    }

    /// The sparse operators ship in coordinate layout, the rest as arrays.
    pub fn matrix_market_layout(self) -> MatrixMarketLayout {
        match self {
            Self::Lumping | Self::Projector | Self::Weights => MatrixMarketLayout::Coordinate,
            _ => MatrixMarketLayout::Array,
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for MatrixKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.token().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!(
                    "unknown matrix {s:?}, expected one of a fbeta sbeta ksigma kb kh l hh w grc x r"
                )
            })
    }
}

/// Snapshot of one named matrix from a decomposition.
pub fn matrix_of(d: &Decomposition, kind: MatrixKind) -> MatrixFile {
    let m = match kind {
        MatrixKind::Equilibrium => &d.element.equilibrium,
        MatrixKind::Flexibility => &d.element.flexibility,
        MatrixKind::GeneralizedStiffness => &d.element.generalized_stiffness,
        MatrixKind::PhysicalStiffness => &d.element.physical_stiffness,
        MatrixKind::Basic => &d.basic.matrix,
        MatrixKind::HigherOrder => &d.higher_order,
        MatrixKind::Lumping => &d.lumping,
        MatrixKind::Projector => &d.projector,
        MatrixKind::Weights => &d.weights,
        MatrixKind::BasicModes => &d.basic_mode_matrix,
        MatrixKind::Kernel => &d.kernel,
        MatrixKind::WeightedKernel => &d.weighted_kernel,
    };
    MatrixFile::from_dmatrix(kind.token(), m)
}

fn fmt_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV with a `# name rows cols` header.
pub fn write_csv(m: &MatrixFile) -> String {
    let mut out = format!("# {} {} {}\n", m.name, m.rows, m.cols);
    for r in 0..m.rows {
        let row: Vec<String> = (0..m.cols)
            .map(|c| fmt_value(m.data[r * m.cols + c]))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Compact JSON.
pub fn write_json(m: &MatrixFile) -> String {
    let mut out = serde_json::to_string(m).expect("matrix serializes");
    out.push('\n');
    out
}

/// Matrix Market, either layout, name carried as a `%` comment.
pub fn write_matrix_market(m: &MatrixFile, layout: MatrixMarketLayout) -> String {
    let mut out = String::new();
    match layout {
        MatrixMarketLayout::Array => {
            out.push_str("%%MatrixMarket matrix array real general\n");
            out.push_str(&format!("% {}\n", m.name));
            out.push_str(&format!("{} {}\n", m.rows, m.cols));
            for c in 0..m.cols {
                for r in 0..m.rows {
                    out.push_str(&fmt_value(m.data[r * m.cols + c]));
                    out.push('\n');
                }
            }
        }
        MatrixMarketLayout::Coordinate => {
            out.push_str("%%MatrixMarket matrix coordinate real general\n");
            out.push_str(&format!("% {}\n", m.name));
            let entries: Vec<(usize, usize, f64)> = (0..m.rows)
                .flat_map(|r| {
                    (0..m.cols).filter_map(move |c| {
                        let v = m.data[r * m.cols + c];
                        (v != 0.0).then_some((r + 1, c + 1, v))
                    })
                })
                .collect();
            out.push_str(&format!("{} {} {}\n", m.rows, m.cols, entries.len()));
            for (r, c, v) in entries {
                out.push_str(&format!("{r} {c} {}\n", fmt_value(v)));
            }
        }
    }
    out
}

/// Renders in the given format; Matrix Market layout chosen by the caller
/// via the matrix kind when one applies.
pub fn render_matrix(m: &MatrixFile, format: FileFormat, layout: MatrixMarketLayout) -> String {
    match format {
        FileFormat::Csv => write_csv(m),
        FileFormat::Json => write_json(m),
        FileFormat::MatrixMarket => write_matrix_market(m, layout),
    }
}

fn utf8(bytes: &[u8]) -> Result<&str, ParseError> {
    std::str::from_utf8(bytes).map_err(|_| ParseError::NotUtf8)
}

fn parse_value(token: &str, line: usize) -> Result<f64, ParseError> {
    let v: f64 = token.trim().parse().map_err(|_| ParseError::Malformed {
        line,
        reason: format!("not a number: {token:?}"),
    })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ParseError::Malformed {
            line,
            reason: format!("non-finite value {token:?}"),
        })
    }
}

/// Parses the CSV matrix format.
pub fn parse_matrix_csv(bytes: &[u8]) -> Result<MatrixFile, ParseError> {
    let text = utf8(bytes)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(ParseError::Malformed {
        line: 1,
        reason: "empty input".to_owned(),
    })?;
    let body = header.strip_prefix('#').ok_or(ParseError::Malformed {
        line: 1,
        reason: "header must start with '#'".to_owned(),
    })?;
    let tokens: Vec<&str> = body.split_whitespace().collect();
    if tokens.len() < 3 {
        return Err(ParseError::Malformed {
            line: 1,
            reason: "header needs a name and two dimensions".to_owned(),
        });
    }
    let dims: Result<Vec<usize>, _> = tokens[tokens.len() - 2..]
        .iter()
        .map(|t| t.parse::<usize>())
        .collect();
    let dims = dims.map_err(|_| ParseError::Malformed {
        line: 1,
        reason: "dimensions must be unsigned integers".to_owned(),
    })?;
    let (rows, cols) = (dims[0], dims[1]);
    let name = tokens[..tokens.len() - 2].join(" ");
    let mut data = Vec::new();
    if rows
        .checked_mul(cols)
        .is_some_and(|n| n <= MAX_MATRIX_ELEMENTS)
    {
        data.reserve(rows * cols);
    }
    let mut seen_rows = 0usize;
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            return Err(ParseError::Malformed {
                line: line_no,
                reason: "blank line inside matrix data".to_owned(),
            });
        }
        seen_rows += 1;
        if seen_rows > rows {
            return Err(ParseError::Malformed {
                line: line_no,
                reason: "more data rows than the header announced".to_owned(),
            });
        }
        let values: Vec<&str> = line.split(',').collect();
        if values.len() != cols {
            return Err(ParseError::Malformed {
                line: line_no,
                reason: format!("expected {cols} values, found {}", values.len()),
            });
        }
        for token in values {
            data.push(parse_value(token, line_no)?);
        }
    }
    MatrixFile {
        name,
        rows,
        cols,
        data,
    }
    .validate()
}

/// Parses the JSON matrix format.
pub fn parse_matrix_json(bytes: &[u8]) -> Result<MatrixFile, ParseError> {
    utf8(bytes)?;
    let m: MatrixFile = serde_json::from_slice(bytes)?;
    m.validate()
}

/// Parses Matrix Market input in either layout.
pub fn parse_matrix_market(bytes: &[u8]) -> Result<MatrixFile, ParseError> {
    let text = utf8(bytes)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(ParseError::Malformed {
        line: 1,
        reason: "empty input".to_owned(),
    })?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    let layout = match tokens.as_slice() {
        [banner, object, layout, field, symmetry]
            if banner == "%%matrixmarket"
                && object == "matrix"
                && field == "real"
                && symmetry == "general" =>
        {
            match layout.as_str() {
                "array" => MatrixMarketLayout::Array,
                "coordinate" => MatrixMarketLayout::Coordinate,
                other => {
                    return Err(ParseError::Malformed {
                        line: 1,
                        reason: format!("unsupported layout {other:?}"),
                    })
                }
            }
        }
        _ => {
            return Err(ParseError::Malformed {
                line: 1,
                reason: "expected '%%MatrixMarket matrix <layout> real general'".to_owned(),
            })
        }
    };
    let mut name = String::from("matrix");
    let mut named = false;
    let mut size_line: Option<(usize, &str)> = None;
    for (idx, line) in lines.by_ref() {
        if let Some(comment) = line.strip_prefix('%') {
            if !named && !comment.trim().is_empty() {
                name = comment.trim().to_owned();
                named = true;
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        size_line = Some((idx + 1, line));
        break;
    }
    let (size_no, size) = size_line.ok_or(ParseError::Malformed {
        line: 1,
        reason: "missing size line".to_owned(),
    })?;
    let sizes: Result<Vec<usize>, _> = size.split_whitespace().map(str::parse).collect();
    let sizes = sizes.map_err(|_| ParseError::Malformed {
        line: size_no,
        reason: "size line must hold unsigned integers".to_owned(),
    })?;

    let mut remaining = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });

    match layout {
        MatrixMarketLayout::Array => {
            let [rows, cols] = sizes.as_slice() else {
                return Err(ParseError::Malformed {
                    line: size_no,
                    reason: "array size line must be 'rows cols'".to_owned(),
                });
            };
            let (rows, cols) = (*rows, *cols);
            if rows == 0 || cols == 0 {
                return Err(ParseError::Malformed {
                    line: size_no,
                    reason: "matrix dimensions must be at least 1x1".to_owned(),
                });
            }
            let elements = rows
                .checked_mul(cols)
                .filter(|n| *n <= MAX_MATRIX_ELEMENTS)
                .ok_or(ParseError::TooLarge { rows, cols })?;
            let mut data = vec![0.0; elements];
            let mut count = 0usize;
            for (idx, line) in remaining {
                if count >= elements {
                    return Err(ParseError::Malformed {
                        line: idx + 1,
                        reason: "more values than rows * cols".to_owned(),
                    });
                }
                let v = parse_value(line, idx + 1)?;
                let (r, c) = (count % rows, count / rows);
                data[r * cols + c] = v;
                count += 1;
            }
            if count != elements {
                return Err(ParseError::DimensionMismatch {
                    rows,
                    cols,
                    actual: count,
                });
            }
            MatrixFile {
                name,
                rows,
                cols,
                data,
            }
            .validate()
        }
        MatrixMarketLayout::Coordinate => {
            let [rows, cols, nnz] = sizes.as_slice() else {
                return Err(ParseError::Malformed {
                    line: size_no,
                    reason: "coordinate size line must be 'rows cols nnz'".to_owned(),
                });
            };
            let (rows, cols, nnz) = (*rows, *cols, *nnz);
            if rows == 0 || cols == 0 {
                return Err(ParseError::Malformed {
                    line: size_no,
                    reason: "matrix dimensions must be at least 1x1".to_owned(),
                });
            }
            let elements = rows
                .checked_mul(cols)
                .filter(|n| *n <= MAX_MATRIX_ELEMENTS)
                .ok_or(ParseError::TooLarge { rows, cols })?;
            if nnz > elements {
                return Err(ParseError::Malformed {
                    line: size_no,
                    reason: format!("nnz {nnz} exceeds rows * cols"),
                });
            }
            let mut data = vec![0.0; elements];
            let mut seen = vec![false; elements];
            let mut count = 0usize;
            for (idx, line) in remaining.by_ref() {
                let line_no = idx + 1;
                let parts: Vec<&str> = line.split_whitespace().collect();
                let [r, c, v] = parts.as_slice() else {
                    return Err(ParseError::Malformed {
                        line: line_no,
                        reason: "coordinate entry must be 'row col value'".to_owned(),
                    });
                };
                let (r, c): (usize, usize) = match (r.parse(), c.parse()) {
                    (Ok(r), Ok(c)) => (r, c),
                    _ => {
                        return Err(ParseError::Malformed {
                            line: line_no,
                            reason: "indices must be unsigned integers".to_owned(),
                        })
                    }
                };
                if r == 0 || c == 0 || r > rows || c > cols {
                    return Err(ParseError::Malformed {
                        line: line_no,
                        reason: format!("index ({r}, {c}) outside {rows}x{cols}"),
                    });
                }
                let slot = (r - 1) * cols + (c - 1);
                if seen[slot] {
                    return Err(ParseError::Malformed {
                        line: line_no,
                        reason: format!("duplicate entry at ({r}, {c})"),
                    });
                }
                seen[slot] = true;
                data[slot] = parse_value(v, line_no)?;
                count += 1;
                if count > nnz {
                    return Err(ParseError::Malformed {
                        line: line_no,
                        reason: "more entries than the size line announced".to_owned(),
                    });
                }
            }
            if count != nnz {
                return Err(ParseError::Malformed {
                    line: size_no,
                    reason: format!("expected {nnz} entries, found {count}"),
                });
            }
            MatrixFile {
                name,
                rows,
                cols,
                data,
            }
            .validate()
        }
    }
}

/// Parses any of the three formats.
pub fn parse_matrix(bytes: &[u8], format: FileFormat) -> Result<MatrixFile, ParseError> {
    match format {
        FileFormat::Csv => parse_matrix_csv(bytes),
        FileFormat::Json => parse_matrix_json(bytes),
        FileFormat::MatrixMarket => parse_matrix_market(bytes),
    }
}

/// Expands an inclusive `start:stop:step` range specification.
pub fn parse_sweep_range(spec: &str) -> Result<Vec<f64>, ParseError> {
    let fail = |reason: &str| ParseError::Range {
        spec: spec.to_owned(),
        reason: reason.to_owned(),
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(fail("expected start:stop:step"));
    };
    let parse = |t: &str| -> Result<f64, ParseError> {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| fail(&format!("not a finite number: {t:?}")))
    };
    let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
    if step <= 0.0 {
        return Err(fail("step must be positive"));
    }
    if stop < start {
        return Err(fail("stop must not be below start"));
    }
    let span = (stop - start) / step;
    if span > MAX_SWEEP_POINTS as f64 {
        return Err(fail("range expands to too many points"));
    }
    let count = (span + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// Optional run parameters loaded from a JSON config file; command-line
/// flags override any field that is present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub b: Option<f64>,
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub youngs: Option<f64>,
    #[serde(default)]
    pub poisson: Option<f64>,
    #[serde(default)]
    pub matrix: Option<String>,
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default)]
    pub plane: Option<String>,
    #[serde(default)]
    pub sweep: Option<String>,
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub curvature: Option<f64>,
    #[serde(default)]
    pub budget: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub deterministic: Option<bool>,
    #[serde(default)]
    pub output: Option<String>,
}

/// Parses a JSON run configuration.
pub fn parse_run_config(bytes: &[u8]) -> Result<RunConfig, ParseError> {
    utf8(bytes)?;
    Ok(serde_json::from_slice(bytes)?)
}

/// Writes through a sibling temporary file and renames it into place, so a
/// crash never leaves a half-written artifact at the destination.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let file_name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let mut tmp = file_name.to_owned();
    tmp.push(format!(".tmp.{}", std::process::id()));
    let tmp_path = match dir {
        Some(d) => d.join(&tmp),
        None => Path::new(&tmp).to_path_buf(),
    };
    fs::write(&tmp_path, contents)?;
    match fs::rename(&tmp_path, path) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = fs::remove_file(&tmp_path);
            Err(e)
        }
    }
}
