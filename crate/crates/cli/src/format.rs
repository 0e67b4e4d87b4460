//! Line-oriented counts file.
//!
//! ```text
//! schmidt-counts 1
//! scenario a
//! set set1
//! shots 100000
//! repetitions 1
//! jobs 2
//! seed 7
//! device simulator
//! job 1
//! setting 1 1 24960 25012 25033 24995
//! ...
//! end
//! ```
//!
//! Scenario (a) jobs hold 16 `setting i j yy yn ny nn` lines, scenario (b)
//! jobs 64 `raw a0a1a2b0b1b2 count` lines. Blank lines and `#` comments are
//! ignored. `seed none` marks measured data; `device` takes the rest of the line.

use std::fmt::Write as _;

use schmidt_core::scenarios::{MeasurementSet, RAW_OUTCOMES_B};
use schmidt_core::stats::counts::setting_label;
use schmidt_core::stats::{CountsTable, JobCounts, SettingGrid, SETTINGS};
use schmidt_core::{Error, Result, ScenarioKind};

pub const MAGIC: &str = "schmidt-counts";
pub const VERSION: u32 = 1;

pub fn serialize(table: &CountsTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC} {VERSION}");
    let _ = writeln!(out, "scenario {}", table.kind().label());
    let _ = writeln!(out, "set {}", table.set());
    let _ = writeln!(out, "shots {}", table.shots());
    let _ = writeln!(out, "repetitions {}", table.repetitions());
    let _ = writeln!(out, "jobs {}", table.job_count());
    match table.seed() {
        Some(s) => {
            let _ = writeln!(out, "seed {s}");
        }
        None => out.push_str("seed none\n"),
    }
    let _ = writeln!(out, "device {}", table.device());
    let labels = CountsTable::raw_labels_b();
    for (k, job) in table.jobs().iter().enumerate() {
        let _ = writeln!(out, "job {}", k + 1);
        match job {
            JobCounts::A(grid) => {
                for (i, row) in grid.iter().enumerate() {
                    for (j, c) in row.iter().enumerate() {
                        let _ = writeln!(out, "setting {} {} {} {} {} {}", i + 1, j + 1, c[0], c[1], c[2], c[3]);
                    }
                }
            }
            JobCounts::B(raw) => {
                for (label, c) in labels.iter().zip(raw) {
                    let _ = writeln!(out, "raw {label} {c}");
                }
            }
        }
    }
    out.push_str("end\n");
    out
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Self {
            inner: it.peekable(),
            last: 0,
        }
    }

    fn next(&mut self) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(err(self.last + 1, "unexpected end of file")),
        }
    }

    /// Value of a `key value` header line.
    fn field(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (n, l) = self.next()?;
        match l.split_once(char::is_whitespace) {
            Some((k, v)) if k == key => Ok((n, v.trim())),
            _ if l == key => Err(err(n, format!("`{key}` needs a value"))),
            _ => Err(err(n, format!("expected `{key}`, found `{l}`"))),
        }
    }
}

fn number<T: std::str::FromStr>(line: usize, what: &str, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| err(line, format!("{what}: `{s}` is not a valid non-negative integer")))
}

fn count(line: usize, job: usize, setting: &str, s: &str) -> Result<u64> {
    if s.starts_with('-') {
        return Err(err(line, format!("job {job}, setting {setting}: negative count {s}")));
    }
    number(line, &format!("job {job}, setting {setting}"), s)
}

pub fn parse(text: &str) -> Result<CountsTable> {
    let mut lines = Lines::new(text);
    let (n, magic) = lines.next()?;
    let version = match magic.split_whitespace().collect::<Vec<_>>()[..] {
        [m, v] if m == MAGIC => number::<u32>(n, "format version", v)?,
        _ => return Err(err(n, format!("expected `{MAGIC} <version>` header"))),
    };
    if version != VERSION {
        return Err(err(n, format!("unsupported format version {version} (this build reads {VERSION})")));
    }
    let (n, scenario) = lines.field("scenario")?;
    let kind = match scenario {
        "a" => ScenarioKind::A,
        "b" => ScenarioKind::B,
        other => return Err(err(n, format!("unknown scenario `{other}`"))),
    };
    let (n, set) = lines.field("set")?;
    let set: MeasurementSet = set.parse().map_err(|e: Error| err(n, e.to_string()))?;
    let (n, shots) = lines.field("shots")?;
    let shots: u64 = number(n, "shots", shots)?;
    let (n, reps) = lines.field("repetitions")?;
    let repetitions: u64 = number(n, "repetitions", reps)?;
    let (n, jobs) = lines.field("jobs")?;
    let job_count: usize = number(n, "jobs", jobs)?;
    let (n, seed) = lines.field("seed")?;
    let seed = match seed {
        "none" => None,
        s => Some(number::<u64>(n, "seed", s)?),
    };
    let device = match lines.next()? {
        (_, "device") => String::new(),
        (n, l) => match l.split_once(char::is_whitespace) {
            Some(("device", d)) => d.trim().to_string(),
            _ => return Err(err(n, format!("expected `device`, found `{l}`"))),
        },
    };
    let labels = CountsTable::raw_labels_b();
    let mut jobs = Vec::with_capacity(job_count);
    for k in 1..=job_count {
        let (n, l) = lines.next()?;
        if l != format!("job {k}") {
            return Err(err(n, format!("expected `job {k}`, found `{l}`")));
        }
        match kind {
            ScenarioKind::A => {
                let mut grid: SettingGrid = [[[0; 4]; SETTINGS]; SETTINGS];
                for i in 0..SETTINGS {
                    for j in 0..SETTINGS {
                        let (n, l) = lines.next()?;
                        let parts: Vec<&str> = l.split_whitespace().collect();
                        let expected = [(i + 1).to_string(), (j + 1).to_string()];
                        if parts.len() != 7 || parts[0] != "setting" || parts[1] != expected[0] || parts[2] != expected[1] {
                            return Err(err(
                                n,
                                format!("expected `setting {} {} yy yn ny nn`, found `{l}`", i + 1, j + 1),
                            ));
                        }
                        let label = setting_label(i, j);
                        for (o, s) in parts[3..].iter().enumerate() {
                            grid[i][j][o] = count(n, k, &label, s)?;
                        }
                    }
                }
                jobs.push(JobCounts::A(Box::new(grid)));
            }
            ScenarioKind::B => {
                let mut raw = vec![0; RAW_OUTCOMES_B];
                for (o, label) in labels.iter().enumerate() {
                    let (n, l) = lines.next()?;
                    match l.split_whitespace().collect::<Vec<_>>()[..] {
                        ["raw", lab, c] if lab == label => raw[o] = count(n, k, label, c)?,
                        _ => return Err(err(n, format!("expected `raw {label} <count>`, found `{l}`"))),
                    }
                }
                jobs.push(JobCounts::B(raw));
            }
        }
    }
    let (n, l) = lines.next()?;
    if l != "end" {
        return Err(err(n, format!("expected `end` after {job_count} jobs, found `{l}`")));
    }
    if let Ok((n, l)) = lines.next() {
        return Err(err(n, format!("trailing content `{l}` after `end`")));
    }
    CountsTable::new(kind, set, shots, repetitions, jobs, seed, device)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL_B_HEADER: &str = "schmidt-counts 1\nscenario b\nset tetrahedron\nshots 1\nrepetitions 1\njobs 1\nseed none\ndevice lab bench 3\n";

    fn small_b() -> String {
        let mut s = SMALL_B_HEADER.to_string() + "job 1\n";
        for (k, l) in CountsTable::raw_labels_b().iter().enumerate() {
            s += &format!("raw {l} {}\n", u64::from(k == 5));
        }
        s + "end\n"
    }

    #[test]
    fn device_label_keeps_spaces() {
        let t = parse(&small_b()).unwrap();
        assert_eq!(t.device(), "lab bench 3");
        assert_eq!(t.seed(), None);
        assert_eq!(serialize(&t), small_b());
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = small_b().replace("jobs 1\n", "jobs 1   # one job\n\n# note\n");
        assert_eq!(parse(&text).unwrap(), parse(&small_b()).unwrap());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = small_b().replace("scenario b", "scenario c");
        assert_eq!(parse(&text).unwrap_err(), err(2, "unknown scenario `c`"));
        let text = small_b().replace("schmidt-counts 1", "schmidt-counts 2");
        assert!(matches!(parse(&text), Err(Error::Parse { line: 1, .. })));
        let text = small_b().replace("end\n", "");
        assert!(matches!(parse(&text), Err(Error::Parse { .. })));
        let text = small_b() + "job 2\n";
        assert!(matches!(parse(&text), Err(Error::Parse { line: 75, .. })));
    }
}
