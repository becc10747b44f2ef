// SPDX-License-Identifier: Apache-2.0

//! Named residual checks.

use serde::Serialize;

/// Which side of the threshold a check must land on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// `value < threshold` (residuals).
    Upper,
    /// `value > threshold` (margins such as a reciprocal condition number).
    Lower,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub bound: Bound,
}

impl Check {
    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::Upper => self.value < self.threshold,
            Bound::Lower => self.value > self.threshold,
        }
    }
}

/// Ordered list of named checks. Order is insertion order, which makes
/// serialized reports deterministic.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ResidualReport {
    pub checks: Vec<Check>,
}

impl ResidualReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn residual(&mut self, name: impl Into<String>, value: f64, tol: f64) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            value,
            threshold: tol,
            bound: Bound::Upper,
        });
        self
    }

    pub fn margin(&mut self, name: impl Into<String>, value: f64, threshold: f64) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            value,
            threshold,
            bound: Bound::Lower,
        });
        self
    }

    /// Records `value` under `name`, keeping the worst value when the name
    /// is already present. Used to aggregate a check over many samples.
    pub fn record_max(&mut self, name: &str, value: f64, tol: f64) -> &mut Self {
        match self.checks.iter_mut().find(|c| c.name == name) {
            Some(c) => c.value = crate::linalg::worst(c.value, value),
            None => {
                self.residual(name, value, tol);
            }
        }
        self
    }

    /// Appends every check of `other`, prefixing names with `prefix.`.
    pub fn extend_prefixed(&mut self, prefix: &str, other: &ResidualReport) {
        for c in &other.checks {
            let mut c = c.clone();
            c.name = format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Value of the named check; panics if absent. Intended for tests.
    pub fn value(&self, name: &str) -> f64 {
        self.get(name)
            .unwrap_or_else(|| panic!("no check named '{name}'"))
            .value
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Largest value among upper-bound checks.
    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.bound == Bound::Upper)
            .fold(0.0, |acc, c| crate::linalg::worst(acc, c.value))
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}

impl std::fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            let rel = match c.bound {
                Bound::Upper => "<",
                Bound::Lower => ">",
            };
            writeln!(
                f,
                "{} {:<40} {:.3e} {rel} {:.1e}",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                c.threshold
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_never_passes() {
        let mut r = ResidualReport::new();
        r.residual("a", f64::NAN, 1.0);
        assert!(!r.passed());
        let mut r = ResidualReport::new();
        r.margin("m", f64::NAN, 0.0);
        assert!(!r.passed());
    }

    #[test]
    fn empty_report_passes() {
        assert!(ResidualReport::new().passed());
    }

    #[test]
    fn margins_and_residuals() {
        let mut r = ResidualReport::new();
        r.residual("small", 1e-12, 1e-9).margin("margin", 0.5, 1e-9);
        assert!(r.passed());
        r.residual("big", 1.0, 1e-9);
        assert_eq!(r.failures().count(), 1);
        assert_eq!(r.max_residual(), 1.0);
    }
}
