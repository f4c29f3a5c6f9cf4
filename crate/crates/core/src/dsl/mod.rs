//! Metric expression language: parsing, evaluation and exact Wirtinger
//! derivatives of the entries `h_{a b-bar}(z, zb)`.

mod ast;
mod diff;
mod parser;

use std::fmt;
use std::sync::OnceLock;

pub use ast::{EvalError, Expr, Func, Var};
pub use diff::Wirtinger;
pub use parser::{parse_expr, parse_metric, ParseError, ParseErrorKind};

/// Symbolic derivative tables of every entry, up to second order.
///
/// Blocks are indexed `[derivative indices][row a][column b]`, flattened
/// row-major.
#[derive(Debug, Clone)]
pub struct JetExprs {
    n: usize,
    /// `d h_{ab} / dz^g`
    pub d1_holo: Vec<Expr>,
    /// `d h_{ab} / dzb^d`
    pub d1_anti: Vec<Expr>,
    /// `d^2 h_{ab} / dz^g dzb^d`
    pub d2_mixed: Vec<Expr>,
    /// `d^2 h_{ab} / dz^g dz^m`
    pub d2_holo: Vec<Expr>,
    /// `d^2 h_{ab} / dzb^d dzb^m`
    pub d2_anti: Vec<Expr>,
}

impl JetExprs {
    fn build(def: &MetricDefinition) -> Self {
        let n = def.n;
        let entries = &def.entries;
        let first = |w: fn(usize) -> Wirtinger| -> Vec<Expr> {
            (0..n)
                .flat_map(|g| entries.iter().map(move |e| e.derivative(w(g))))
                .collect()
        };
        let d1_holo = first(Wirtinger::Holo);
        let d1_anti = first(Wirtinger::Anti);
        // second derivatives reuse the memoized first-order trees
        let second = |base: &[Expr], w: fn(usize) -> Wirtinger| -> Vec<Expr> {
            let mut out = Vec::with_capacity(n * n * n * n);
            for g in 0..n {
                for d in 0..n {
                    for ab in 0..n * n {
                        out.push(base[g * n * n + ab].derivative(w(d)));
                    }
                }
            }
            out
        };
        let d2_mixed = second(&d1_holo, Wirtinger::Anti);
        let d2_holo = second(&d1_holo, Wirtinger::Holo);
        let d2_anti = second(&d1_anti, Wirtinger::Anti);
        Self {
            n,
            d1_holo,
            d1_anti,
            d2_mixed,
            d2_holo,
            d2_anti,
        }
    }

    pub fn d1_index(&self, g: usize, a: usize, b: usize) -> usize {
        (g * self.n + a) * self.n + b
    }

    pub fn d2_index(&self, g: usize, d: usize, a: usize, b: usize) -> usize {
        ((g * self.n + d) * self.n + a) * self.n + b
    }
}

/// A Hermitian metric given entrywise by expressions. Entry `(a, b)`
/// defines `h_{a b-bar}`.
#[derive(Debug, Clone)]
pub struct MetricDefinition {
    n: usize,
    entries: Vec<Expr>,
    name: Option<String>,
    jets: OnceLock<JetExprs>,
}

impl MetricDefinition {
    /// Builds a definition from a full `n x n` row-major grid.
    pub fn from_entries(n: usize, entries: Vec<Expr>) -> Self {
        assert_eq!(entries.len(), n * n, "expected n*n entries");
        Self {
            n,
            entries,
            name: None,
            jets: OnceLock::new(),
        }
    }

    /// Fills missing entries: the formal conjugate transpose of the mirrored
    /// entry when that one is given, the Kronecker delta otherwise.
    pub fn from_partial(n: usize, given: Vec<Option<Expr>>) -> Self {
        let entries = (0..n * n)
            .map(|k| {
                let (a, b) = (k / n, k % n);
                match (&given[k], &given[b * n + a]) {
                    (Some(e), _) => e.clone(),
                    (None, Some(mirror)) => mirror.conj(),
                    (None, None) => Expr::real(if a == b { 1.0 } else { 0.0 }),
                }
            })
            .collect();
        Self::from_entries(n, entries)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, a: usize, b: usize) -> &Expr {
        &self.entries[a * self.n + b]
    }

    pub fn entries(&self) -> &[Expr] {
        &self.entries
    }

    /// Derivative tables, computed on first use and shared afterwards.
    pub fn jet_exprs(&self) -> &JetExprs {
        self.jets.get_or_init(|| JetExprs::build(self))
    }
}

impl PartialEq for MetricDefinition {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.entries == other.entries
    }
}

/// Unparses every entry explicitly.
impl fmt::Display for MetricDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {};", self.n)?;
        for a in 0..self.n {
            for b in 0..self.n {
                writeln!(f, "h[{},{}] = {};", a + 1, b + 1, self.entry(a, b))?;
            }
        }
        Ok(())
    }
}
