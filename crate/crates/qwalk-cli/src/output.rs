//! CSV emission and the human-readable summary block.
//!
//! CSV goes to the requested sink (file or standard output) with LF line
//! endings and 17-significant-digit floats, so identical configurations
//! produce byte-identical files. The summary goes to standard error so it
//! never contaminates a piped CSV stream.

use crate::CliError;
use qwalk::analysis::{MomentReport, ProbabilityDistribution};
use std::io::Write;
use std::path::Path;

pub const CSV_HEADER: &str = "m,P,P_R,P_L";

/// Renders rows `(m, P, P_R, P_L)` as the canonical CSV byte stream.
pub fn render_csv(rows: impl Iterator<Item = (i64, f64, f64, f64)>) -> String {
    let mut text = String::from(CSV_HEADER);
    text.push('\n');
    for (m, p, p_r, p_l) in rows {
        text.push_str(&format!("{m},{p:.16e},{p_r:.16e},{p_l:.16e}\n"));
    }
    text
}

/// Rows of a distribution in ascending position order.
pub fn distribution_rows(
    dist: &ProbabilityDistribution,
) -> impl Iterator<Item = (i64, f64, f64, f64)> + '_ {
    dist.iter().map(|(m, sp)| (m, sp.p, sp.p_r, sp.p_l))
}

/// Rows covering a full closed index range, zero-filled where the
/// distribution has no entry (used for ring topologies, where every site of
/// the ring is a row even when unoccupied).
pub fn padded_rows<'a>(
    dist: &'a ProbabilityDistribution,
    min: i64,
    max: i64,
) -> impl Iterator<Item = (i64, f64, f64, f64)> + 'a {
    (min..=max).map(move |m| match dist.get(m) {
        Some(sp) => (m, sp.p, sp.p_r, sp.p_l),
        None => (m, 0.0, 0.0, 0.0),
    })
}

/// Writes the CSV to the sink; files are written atomically (temp file in
/// the destination directory, then rename).
pub fn write_csv(path: Option<&Path>, csv: &str) -> Result<(), CliError> {
    match path {
        None => {
            std::io::stdout()
                .write_all(csv.as_bytes())
                .map_err(|e| CliError::Io(format!("writing CSV to stdout: {e}")))?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)
                .map_err(|e| CliError::Io(format!("creating temporary file in {}: {e}", dir.display())))?;
            tmp.write_all(csv.as_bytes())
                .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
            tmp.persist(path)
                .map_err(|e| CliError::Io(format!("renaming into {}: {e}", path.display())))?;
        }
    }
    Ok(())
}

/// Human-readable run summary, printed to standard error.
pub struct Summary {
    pub steps: u64,
    pub sites: usize,
    pub measured: MomentReport,
    pub predicted: Option<MomentReport>,
    pub tv_vs_classical: Option<f64>,
    pub extra: Vec<(String, String)>,
}

impl Summary {
    pub fn print(&self) {
        eprintln!("# summary");
        eprintln!("n                 = {}", self.steps);
        eprintln!("sites             = {}", self.sites);
        eprintln!("mean              = {:.12e}", self.measured.mean);
        eprintln!("variance          = {:.12e}", self.measured.variance);
        eprintln!("std_dev           = {:.12e}", self.measured.std_dev);
        if let Some(p) = &self.predicted {
            eprintln!("predicted_mean    = {:.12e}", p.mean);
            eprintln!("predicted_std_dev = {:.12e}", p.std_dev);
        }
        if let Some(tv) = self.tv_vs_classical {
            eprintln!("tv_vs_classical   = {:.12e}", tv);
        }
        for (key, value) in &self.extra {
            eprintln!("{key:<17} = {value}");
        }
    }
}
