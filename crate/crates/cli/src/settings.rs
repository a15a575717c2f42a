use std::collections::BTreeMap;
use std::fmt::Display;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

/// Resolves each option from the command line, then the config file, then
/// a built-in default, and remembers the effective values for echoing.
#[derive(Debug, Default)]
pub struct Settings {
    file: BTreeMap<String, String>,
    effective: Vec<(String, String)>,
}

fn normalize(key: &str) -> String {
    key.trim().trim_start_matches("--").replace('_', "-")
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Settings::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    /// `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut file = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key = value, got {raw:?}", i + 1))?;
            file.insert(normalize(k), v.trim().to_string());
        }
        Ok(Settings {
            file,
            effective: Vec::new(),
        })
    }

    fn file_value<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        self.file
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| anyhow!("config value for {key}: {e}"))
            })
            .transpose()
    }

    fn note<T: Display>(&mut self, key: &str, value: &T) {
        self.effective.push((key.to_string(), value.to_string()));
    }

    pub fn opt<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        let value = match flag {
            Some(v) => Some(v),
            None => self.file_value(key)?,
        };
        if let Some(v) = &value {
            self.note(key, v);
        }
        Ok(value)
    }

    pub fn or<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T::Err: Display,
    {
        let value = self.opt(key, flag)?;
        Ok(match value {
            Some(v) => v,
            None => {
                self.note(key, &default);
                default
            }
        })
    }

    pub fn req<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<T>
    where
        T::Err: Display,
    {
        match self.opt(key, flag)? {
            Some(v) => Ok(v),
            None => bail!("missing required option --{key}"),
        }
    }

    /// Records a value that was derived rather than given.
    pub fn derived<T: Display>(&mut self, key: &str, value: &T) {
        self.note(key, value);
    }

    pub fn echo<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        for (k, v) in &self.effective {
            writeln!(w, "# config.{k}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beat_defaults() {
        let mut s =
            Settings::parse("n = 12\nseed=3 # trailing comment\n\nruns_count = 5\n").unwrap();
        assert_eq!(s.or("n", Some(20usize), 1).unwrap(), 20);
        assert_eq!(s.or("seed", None, 0u64).unwrap(), 3);
        assert_eq!(s.or("alpha", None, 0.01f64).unwrap(), 0.01);
        assert_eq!(s.opt::<u64>("runs-count", None).unwrap(), Some(5));
        assert!(s.req::<u64>("budget", None).is_err());
        let mut out = Vec::new();
        s.echo(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "# config.n=20\n# config.seed=3\n# config.alpha=0.01\n# config.runs-count=5\n"
        );
    }

    #[test]
    fn malformed_lines_rejected() {
        assert!(Settings::parse("just words").is_err());
        let mut s = Settings::parse("n = many").unwrap();
        assert!(s.opt::<usize>("n", None).is_err());
    }
}
