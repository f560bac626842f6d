//! Flat `key=value` settings merged from a config file, `--set` pairs and subcommand
//! flags. Commands consume the keys they understand; whatever is left over is an error.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use lsmdg::solver::{LinearSolver, SolverConfig};

use crate::CliError;

#[derive(Debug, Default, Clone)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Reads a config file. Blank lines and lines starting with `#` are skipped.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut settings = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            settings
                .set_pair(line)
                .map_err(|e| CliError::Config(format!("{}:{}: {e}", path.display(), n + 1)))?;
        }
        Ok(settings)
    }

    /// Parses `key=value` and stores it, replacing any earlier value.
    pub fn set_pair(&mut self, pair: &str) -> Result<(), CliError> {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("expected key=value, got {pair:?}")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(CliError::Config(format!("empty key in {pair:?}")));
        }
        self.set(key, value.trim());
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: impl Display) {
        self.values.insert(key.to_string(), value.to_string());
    }

    /// Stores `value` under `key` when present.
    pub fn set_opt(&mut self, key: &str, value: Option<impl Display>) {
        if let Some(v) = value {
            self.set(key, v);
        }
    }

    pub fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        match self.values.remove(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| CliError::Config(format!("{key}={raw}: {e}"))),
        }
    }

    pub fn take_or<T: FromStr>(&mut self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: Display,
    {
        Ok(self.take(key)?.unwrap_or(default))
    }

    pub fn take_bool(&mut self, key: &str, default: bool) -> Result<bool, CliError> {
        match self.values.remove(key) {
            None => Ok(default),
            Some(raw) => match raw.to_ascii_lowercase().as_str() {
                "true" | "yes" | "on" | "1" => Ok(true),
                "false" | "no" | "off" | "0" => Ok(false),
                _ => Err(CliError::Config(format!("{key}={raw}: expected a boolean"))),
            },
        }
    }

    /// Comma-separated list.
    pub fn take_list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>, CliError>
    where
        T::Err: Display,
    {
        let Some(raw) = self.values.remove(key) else {
            return Ok(None);
        };
        let items: Result<Vec<T>, _> = raw
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|e| CliError::Config(format!("{key}={raw}: {e}"))))
            .collect();
        let items = items?;
        if items.is_empty() {
            return Err(CliError::Config(format!("{key} is empty")));
        }
        Ok(Some(items))
    }

    pub fn take_list_or<T: FromStr>(&mut self, key: &str, default: Vec<T>) -> Result<Vec<T>, CliError>
    where
        T::Err: Display,
    {
        Ok(self.take_list(key)?.unwrap_or(default))
    }

    /// Overrides solver fields from their keys.
    pub fn apply_solver(&mut self, cfg: &mut SolverConfig) -> Result<(), CliError> {
        macro_rules! field {
            ($($name:ident),*) => {$(
                if let Some(v) = self.take(stringify!($name))? {
                    cfg.$name = v;
                }
            )*};
        }
        field!(lambda_state, lambda_aux, lambda_geometry, lambda_laplacian, lambda_floor, max_iters, abs_tol, rel_tol, step_tol);
        cfg.inverse_volume_scaling = self.take_bool("inverse_volume_scaling", cfg.inverse_volume_scaling)?;
        cfg.adapt_lambda = self.take_bool("adapt_lambda", cfg.adapt_lambda)?;
        if let Some(name) = self.take::<String>("linear_solver")? {
            cfg.linear_solver = match name.as_str() {
                "cholesky" => LinearSolver::Cholesky,
                "qr" => LinearSolver::Qr,
                _ => return Err(CliError::Config(format!("linear_solver={name}: expected cholesky or qr"))),
            };
        }
        Ok(())
    }

    /// Fails on keys nobody consumed.
    pub fn finish(self, command: &str) -> Result<(), CliError> {
        if self.values.is_empty() {
            return Ok(());
        }
        let keys: Vec<&str> = self.values.keys().map(String::as_str).collect();
        Err(CliError::Config(format!("unknown or unused keys for {command}: {}", keys.join(", "))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_booleans_parse() {
        let mut s = Settings::default();
        s.set_pair("ps = 2, 3").unwrap();
        s.set_pair("moving=no").unwrap();
        assert_eq!(s.take_list::<usize>("ps").unwrap(), Some(vec![2, 3]));
        assert!(!s.take_bool("moving", true).unwrap());
        s.finish("test").unwrap();
    }

    #[test]
    fn leftovers_and_bad_values_are_config_errors() {
        let mut s = Settings::default();
        s.set("pe", "ten");
        assert!(matches!(s.take::<f64>("pe"), Err(CliError::Config(_))));
        s.set("bogus", 1);
        assert!(matches!(s.finish("test"), Err(CliError::Config(_))));
        assert!(Settings::default().set_pair("novalue").is_err());
    }

    #[test]
    fn solver_keys_override_fields() {
        let mut s = Settings::default();
        s.set("max_iters", 7);
        s.set("linear_solver", "qr");
        s.set("adapt_lambda", "false");
        let mut cfg = SolverConfig::default();
        s.apply_solver(&mut cfg).unwrap();
        assert_eq!((cfg.max_iters, cfg.linear_solver, cfg.adapt_lambda), (7, LinearSolver::Qr, false));
        s.set("linear_solver", "lu");
        assert!(s.apply_solver(&mut cfg).is_err());
    }
}
