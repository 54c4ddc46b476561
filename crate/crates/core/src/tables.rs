//! Plain-text storage for quadrature rules.
//!
//! ```text
//! GAUSSTAB 1
//! N 2
//! -0.57735026918962584 1
//! 0.57735026918962584 1
//! ```
//!
//! A header line, then one block per rule: `N <n>` followed by `n` lines of
//! `<node> <weight>` with 17 significant digits, nodes ascending. Rules are
//! re-validated on load. Writes go to a temporary file in the destination
//! directory and are renamed into place.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use log::warn;

use crate::error::{Error, Result};
use crate::numfmt::format_significant;
use crate::quadrature::{gauss_rule, QuadratureRule};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "GAUSSTAB";

/// Environment variable naming the rule cache file.
pub const CACHE_ENV_VAR: &str = "CALCVERIFY_CACHE";

/// Rules keyed by point count.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RuleTable {
    rules: BTreeMap<usize, QuadratureRule>,
}

impl RuleTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts (or replaces) the rule for `rule.n()`.
    pub fn insert(&mut self, rule: QuadratureRule) {
        self.rules.insert(rule.n(), rule);
    }

    pub fn get(&self, n: usize) -> Option<&QuadratureRule> {
        self.rules.get(&n)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &QuadratureRule> {
        self.rules.values()
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{MAGIC} {FORMAT_VERSION}")?;
        for rule in self.rules.values() {
            write_block(&mut out, rule)?;
        }
        Ok(())
    }

    /// Parses table text; `origin` only labels error messages.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let malformed = |line: usize, message: String| Error::MalformedLine {
            path: origin.to_path_buf(),
            line,
            message,
        };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));

        match lines.next() {
            Some((_, header)) => {
                let mut parts = header.split_whitespace();
                if parts.next() != Some(MAGIC) {
                    return Err(malformed(
                        1,
                        format!("expected header '{MAGIC} {FORMAT_VERSION}'"),
                    ));
                }
                match (parts.next(), parts.next()) {
                    (Some(v), None) if v == FORMAT_VERSION.to_string() => {}
                    (Some(v), None) => {
                        return Err(Error::VersionMismatch {
                            path: origin.to_path_buf(),
                            found: v.to_string(),
                        })
                    }
                    _ => return Err(malformed(1, "header must be 'GAUSSTAB <version>'".into())),
                }
            }
            None => return Err(malformed(1, "empty file, expected header".into())),
        }

        let mut table = RuleTable::new();
        while let Some((line_no, line)) = lines.next() {
            let mut last_line = line_no;
            if line.is_empty() {
                continue;
            }
            let n = match line.split_whitespace().collect::<Vec<_>>()[..] {
                ["N", count] => count
                    .parse::<usize>()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| malformed(line_no, format!("invalid point count '{count}'")))?,
                _ => {
                    return Err(malformed(
                        line_no,
                        format!("expected 'N <n>', found '{line}'"),
                    ))
                }
            };
            if table.rules.contains_key(&n) {
                return Err(malformed(line_no, format!("duplicate block for n={n}")));
            }
            let mut nodes = Vec::with_capacity(n);
            let mut weights = Vec::with_capacity(n);
            for k in 0..n {
                let (row_no, row) = lines.next().ok_or_else(|| {
                    malformed(
                        last_line + 1,
                        format!(
                            "file ends inside block n={n}: {} of {n} rows missing",
                            n - k
                        ),
                    )
                })?;
                last_line = row_no;
                let parsed = match row.split_whitespace().collect::<Vec<_>>()[..] {
                    [x, w] => x.parse::<f64>().ok().zip(w.parse::<f64>().ok()),
                    _ => None,
                };
                let (x, w) = parsed.ok_or_else(|| {
                    malformed(row_no, format!("expected '<node> <weight>', found '{row}'"))
                })?;
                nodes.push(x);
                weights.push(w);
            }
            table.insert(QuadratureRule::from_parts(nodes, weights)?);
        }
        Ok(table)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| Error::io(&dir, e))?;
        self.write_to(io::BufWriter::new(tmp.as_file_mut()))
            .and_then(|_| tmp.as_file().sync_all())
            .map_err(|e| Error::io(tmp.path(), e))?;
        tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}

impl FromIterator<QuadratureRule> for RuleTable {
    fn from_iter<I: IntoIterator<Item = QuadratureRule>>(iter: I) -> Self {
        let mut t = RuleTable::new();
        for r in iter {
            t.insert(r);
        }
        t
    }
}

fn write_block<W: Write>(out: &mut W, rule: &QuadratureRule) -> io::Result<()> {
    writeln!(out, "N {}", rule.n())?;
    for (x, w) in rule.iter() {
        writeln!(
            out,
            "{} {}",
            format_significant(x, 17),
            format_significant(w, 17)
        )?;
    }
    Ok(())
}

/// Header plus a single block, as printed by `calcverify nodes`.
pub fn format_rule(rule: &QuadratureRule) -> String {
    let mut buf = Vec::new();
    RuleTable::from_iter([rule.clone()])
        .write_to(&mut buf)
        .expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("table text is ASCII")
}

/// Atomically writes `rules` to `path`.
pub fn save_tables<'a, I>(rules: I, path: &Path) -> Result<()>
where
    I: IntoIterator<Item = &'a QuadratureRule>,
{
    rules.into_iter().cloned().collect::<RuleTable>().save(path)
}

pub fn load_tables(path: &Path) -> Result<RuleTable> {
    RuleTable::load(path)
}

/// How [`get_or_build`] obtained its rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    /// Found in a valid cache file.
    Hit,
    /// Built and added to the cache (the file was missing or lacked `n`).
    Built,
    /// The cache file was unreadable as a table; it was replaced.
    Rebuilt,
}

/// Returns the `n`-point rule from the cache at `cache_path`, building and
/// storing it when absent.
pub fn get_or_build(cache_path: &Path, n: usize) -> Result<QuadratureRule> {
    get_or_build_with(cache_path, n, gauss_rule).map(|(rule, _)| rule)
}

/// [`get_or_build`] with an explicit rule builder.
pub fn get_or_build_with<B>(
    cache_path: &Path,
    n: usize,
    build: B,
) -> Result<(QuadratureRule, CacheOutcome)>
where
    B: FnOnce(usize) -> Result<QuadratureRule>,
{
    let (mut table, mut outcome) = match RuleTable::load(cache_path) {
        Ok(table) => (table, CacheOutcome::Built),
        Err(Error::Io { source, .. }) if source.kind() == io::ErrorKind::NotFound => {
            (RuleTable::new(), CacheOutcome::Built)
        }
        Err(e @ Error::Io { .. }) => return Err(e),
        Err(e) => {
            warn!(
                "rule cache {} is corrupt ({e}); rebuilding it from scratch",
                cache_path.display()
            );
            (RuleTable::new(), CacheOutcome::Rebuilt)
        }
    };
    if let Some(rule) = table.get(n) {
        outcome = CacheOutcome::Hit;
        return Ok((rule.clone(), outcome));
    }
    let rule = build(n)?;
    table.insert(rule.clone());
    table.save(cache_path)?;
    Ok((rule, outcome))
}
