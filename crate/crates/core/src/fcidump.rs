//! Reading and writing FCIDUMP integral files.
//!
//! The format is a Fortran-namelist header (`&FCI NORB=..,NELEC=..,` ...,
//! terminated by `&END` or `/`) followed by data lines `value p q r s` with
//! 1-based orbital indices. Index patterns classify each line:
//!
//! ```text
//! p q r s nonzero   two-body (pq|rs), chemists' notation, 8-fold symmetric
//! r = s = 0         one-body h_pq
//! p = q = r = s = 0 scalar core energy
//! ```
//!
//! Duplicate entries are tolerated when they agree; conflicting duplicates
//! (beyond 1e-10) are a parse error naming the offending line.

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fermion::MolecularIntegrals;

/// Tolerance for duplicate-entry agreement.
const DUPLICATE_TOL: f64 = 1e-10;

/// Parsed FCIDUMP contents: integrals plus header metadata.
#[derive(Debug, Clone)]
pub struct FcidumpData {
    pub integrals: MolecularIntegrals,
    /// NELEC header field.
    pub electron_count: usize,
    /// MS2 header field (twice the spin projection); 0 when absent.
    pub ms2: i64,
}

/// Parses FCIDUMP text.
pub fn parse_fcidump(text: &str) -> Result<FcidumpData> {
    let mut lines = text.lines().enumerate();

    // Collect header lines until the namelist terminator.
    let mut header = String::new();
    let mut terminated = false;
    for (idx, line) in lines.by_ref() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if idx == 0 && !trimmed.starts_with("&FCI") {
            return Err(Error::Parse {
                line: 1,
                message: "expected an &FCI namelist header".into(),
            });
        }
        if let Some(pos) = trimmed.find("&END").or_else(|| trimmed.find('/')) {
            header.push(' ');
            header.push_str(&trimmed[..pos]);
            terminated = true;
            break;
        }
        header.push(' ');
        header.push_str(trimmed);
    }
    if !terminated {
        return Err(Error::Parse { line: 1, message: "namelist never terminated".into() });
    }

    let norb = header_field(&header, "NORB")
        .ok_or_else(|| Error::Parse { line: 1, message: "missing NORB".into() })?;
    let nelec = header_field(&header, "NELEC")
        .ok_or_else(|| Error::Parse { line: 1, message: "missing NELEC".into() })?;
    let ms2 = header_field(&header, "MS2").unwrap_or(0);
    if norb <= 0 {
        return Err(Error::Parse { line: 1, message: format!("invalid NORB {norb}") });
    }
    if nelec < 0 || nelec > 2 * norb {
        return Err(Error::Parse { line: 1, message: format!("invalid NELEC {nelec}") });
    }
    let orbital_count = norb as usize;

    let mut integrals = MolecularIntegrals::new(orbital_count, 0.0)
        .map_err(|e| Error::Parse { line: 1, message: e.to_string() })?;
    let mut seen_one: HashSet<(usize, usize)> = HashSet::new();
    let mut seen_two: HashSet<(usize, usize, usize, usize)> = HashSet::new();
    let mut seen_core = false;

    for (idx, line) in lines {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let value: f64 = parse_token(tokens.next(), line_no, "value")?;
        let p: i64 = parse_token(tokens.next(), line_no, "index p")?;
        let q: i64 = parse_token(tokens.next(), line_no, "index q")?;
        let r: i64 = parse_token(tokens.next(), line_no, "index r")?;
        let s: i64 = parse_token(tokens.next(), line_no, "index s")?;
        if tokens.next().is_some() {
            return Err(Error::Parse { line: line_no, message: "trailing tokens".into() });
        }
        let check = |i: i64| -> Result<usize> {
            if i < 1 || i > norb {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("orbital index {i} outside 1..={norb}"),
                });
            }
            Ok((i - 1) as usize)
        };
        match (p, q, r, s) {
            (0, 0, 0, 0) => {
                if seen_core && (integrals.core_energy() - value).abs() > DUPLICATE_TOL {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!(
                            "core energy {value} conflicts with earlier {}",
                            integrals.core_energy()
                        ),
                    });
                }
                integrals.set_core_energy(value);
                seen_core = true;
            }
            (_, _, 0, 0) => {
                let (p, q) = (check(p)?, check(q)?);
                let key = (p.min(q), p.max(q));
                if !seen_one.insert(key) && (integrals.h(p, q) - value).abs() > DUPLICATE_TOL {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!(
                            "one-body entry ({},{}) = {value} conflicts with earlier {}",
                            p + 1,
                            q + 1,
                            integrals.h(p, q)
                        ),
                    });
                }
                integrals
                    .set_one_body(p, q, value)
                    .map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
            }
            _ if p != 0 && q != 0 && r != 0 && s != 0 => {
                let (p, q, r, s) = (check(p)?, check(q)?, check(r)?, check(s)?);
                let key = canonical_two_body(p, q, r, s);
                if !seen_two.insert(key) && (integrals.g(p, q, r, s) - value).abs() > DUPLICATE_TOL
                {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!(
                            "two-body entry ({},{},{},{}) = {value} conflicts with earlier {}",
                            p + 1,
                            q + 1,
                            r + 1,
                            s + 1,
                            integrals.g(p, q, r, s)
                        ),
                    });
                }
                integrals
                    .set_two_body(p, q, r, s, value)
                    .map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
            }
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unsupported index pattern {p} {q} {r} {s}"),
                });
            }
        }
    }

    Ok(FcidumpData { integrals, electron_count: nelec as usize, ms2 })
}

/// Reads and parses an FCIDUMP file.
pub fn read_fcidump(path: impl AsRef<Path>) -> Result<FcidumpData> {
    let text = std::fs::read_to_string(path)?;
    parse_fcidump(&text)
}

/// Formats integrals as FCIDUMP text (nonzero canonical entries only).
pub fn format_fcidump(data: &FcidumpData) -> String {
    let n = data.integrals.orbital_count();
    let mut out = String::new();
    out.push_str(&format!("&FCI NORB={},NELEC={},MS2={},\n", n, data.electron_count, data.ms2));
    out.push_str(" ORBSYM=");
    for _ in 0..n {
        out.push_str("1,");
    }
    out.push_str("\n ISYM=1,\n&END\n");

    let mut line = |value: f64, p: usize, q: usize, r: usize, s: usize| {
        out.push_str(&format!("{value:>24.16E} {p:>3} {q:>3} {r:>3} {s:>3}\n"));
    };
    for p in 0..n {
        for q in 0..=p {
            for r in 0..n {
                for s in 0..=r {
                    if (p * n + q) < (r * n + s) {
                        continue;
                    }
                    let value = data.integrals.g(p, q, r, s);
                    if value != 0.0 {
                        line(value, p + 1, q + 1, r + 1, s + 1);
                    }
                }
            }
        }
    }
    for p in 0..n {
        for q in 0..=p {
            let value = data.integrals.h(p, q);
            if value != 0.0 {
                line(value, p + 1, q + 1, 0, 0);
            }
        }
    }
    line(data.integrals.core_energy(), 0, 0, 0, 0);
    out
}

/// Writes integrals to a file in FCIDUMP format.
pub fn write_fcidump(data: &FcidumpData, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_fcidump(data))?;
    Ok(())
}

fn parse_token<T: std::str::FromStr>(
    token: Option<&str>,
    line_no: usize,
    what: &str,
) -> Result<T> {
    let token = token
        .ok_or_else(|| Error::Parse { line: line_no, message: format!("missing {what}") })?;
    token.parse().map_err(|_| Error::Parse {
        line: line_no,
        message: format!("cannot parse {what} from {token:?}"),
    })
}

fn header_field(header: &str, key: &str) -> Option<i64> {
    for chunk in header.split(|c: char| c == ',' || c.is_whitespace()) {
        if let Some(rest) = chunk.strip_prefix(key) {
            if let Some(value) = rest.strip_prefix('=') {
                return value.trim().parse().ok();
            }
        }
    }
    None
}

/// Smallest of the eight symmetry-equivalent index tuples.
fn canonical_two_body(p: usize, q: usize, r: usize, s: usize) -> (usize, usize, usize, usize) {
    let mut best = (p, q, r, s);
    for (a, b, c, d) in [
        (p, q, r, s),
        (q, p, r, s),
        (p, q, s, r),
        (q, p, s, r),
        (r, s, p, q),
        (s, r, p, q),
        (r, s, q, p),
        (s, r, q, p),
    ] {
        if (a, b, c, d) < best {
            best = (a, b, c, d);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "&FCI NORB=2,NELEC=2,MS2=0,\n ORBSYM=1,1,\n ISYM=1,\n&END\n\
        0.6744887663568382 1 1 1 1\n\
        0.6634680586866331 2 2 1 1\n\
        0.1812875358123322 2 1 2 1\n\
        0.6973979494693358 2 2 2 2\n\
        -1.2524635735648981 1 1 0 0\n\
        -0.4759487152209032 2 2 0 0\n\
        0.7137539936876182 0 0 0 0\n";

    #[test]
    fn parses_sample_with_symmetry_replication() {
        let data = parse_fcidump(SAMPLE).unwrap();
        assert_eq!(data.integrals.orbital_count(), 2);
        assert_eq!(data.electron_count, 2);
        assert_eq!(data.ms2, 0);
        assert!((data.integrals.core_energy() - 0.7137539936876182).abs() < 1e-15);
        assert!((data.integrals.h(0, 0) + 1.2524635735648981).abs() < 1e-15);
        assert!((data.integrals.h(0, 1)).abs() < 1e-15);
        // (21|21) fans out to all eight permutations.
        let g = 0.1812875358123322;
        assert!((data.integrals.g(1, 0, 1, 0) - g).abs() < 1e-15);
        assert!((data.integrals.g(0, 1, 1, 0) - g).abs() < 1e-15);
        assert!((data.integrals.g(1, 0, 0, 1) - g).abs() < 1e-15);
        assert!((data.integrals.g(0, 1, 0, 1) - g).abs() < 1e-15);
        // (22|11) also populates (11|22).
        assert!((data.integrals.g(0, 0, 1, 1) - 0.6634680586866331).abs() < 1e-15);
    }

    #[test]
    fn tolerates_slash_terminator_and_consistent_duplicates() {
        let text = "&FCI NORB=1,NELEC=2,\n /\n 0.5 1 1 1 1\n 0.5 1 1 1 1\n 1.0 0 0 0 0\n";
        let data = parse_fcidump(text).unwrap();
        assert!((data.integrals.g(0, 0, 0, 0) - 0.5).abs() < 1e-15);
        assert_eq!(data.ms2, 0);
    }

    #[test]
    fn conflicting_duplicate_names_line() {
        let text = "&FCI NORB=1,NELEC=2,\n&END\n 0.5 1 1 1 1\n 0.6 1 1 1 1\n";
        match parse_fcidump(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        // A symmetry image that conflicts is caught too.
        let text = "&FCI NORB=2,NELEC=2,\n&END\n 0.5 2 1 2 2\n 0.6 1 2 2 2\n";
        assert!(matches!(parse_fcidump(text), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn malformed_lines_are_rejected() {
        let missing_header = "0.5 1 1 1 1\n";
        assert!(matches!(parse_fcidump(missing_header), Err(Error::Parse { line: 1, .. })));

        let bad_value = "&FCI NORB=1,NELEC=1,\n&END\n x 1 1 1 1\n";
        assert!(matches!(parse_fcidump(bad_value), Err(Error::Parse { line: 3, .. })));

        let short_line = "&FCI NORB=1,NELEC=1,\n&END\n 0.5 1 1\n";
        assert!(matches!(parse_fcidump(short_line), Err(Error::Parse { line: 3, .. })));

        let out_of_range = "&FCI NORB=1,NELEC=1,\n&END\n 0.5 2 1 1 1\n";
        assert!(matches!(parse_fcidump(out_of_range), Err(Error::Parse { line: 3, .. })));

        let bad_pattern = "&FCI NORB=2,NELEC=1,\n&END\n 0.5 1 0 1 1\n";
        assert!(matches!(parse_fcidump(bad_pattern), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn round_trips_through_format() {
        let data = parse_fcidump(SAMPLE).unwrap();
        let text = format_fcidump(&data);
        let back = parse_fcidump(&text).unwrap();
        assert_eq!(back.electron_count, data.electron_count);
        assert!((back.integrals.core_energy() - data.integrals.core_energy()).abs() < 1e-15);
        let n = data.integrals.orbital_count();
        for p in 0..n {
            for q in 0..n {
                assert!((back.integrals.h(p, q) - data.integrals.h(p, q)).abs() < 1e-15);
                for r in 0..n {
                    for s in 0..n {
                        assert!(
                            (back.integrals.g(p, q, r, s) - data.integrals.g(p, q, r, s)).abs()
                                < 1e-15
                        );
                    }
                }
            }
        }
    }
}
