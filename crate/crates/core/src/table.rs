//! Dense N-way tables over binary variables.
//!
//! Cells are stored in lexicographic order of their level combination, with the
//! first schema variable most significant. A table over `k` variables therefore
//! holds `2^k` counts; `k` is capped at [`MAX_VARIABLES`].

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Largest number of binary variables a dense table may hold (`2^24` cells).
pub const MAX_VARIABLES: usize = 24;

/// Ordered list of named binary variables. Each variable has levels `0` and `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Schema {
    names: Vec<String>,
}

impl Schema {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_VARIABLES {
            return Err(Error::TooManyVariables(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::EmptyVariableName);
            }
            if names[..i].contains(n) {
                return Err(Error::DuplicateVariable(n.clone()));
            }
        }
        Ok(Schema { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, position: usize) -> &str {
        &self.names[position]
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.position(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    /// Positions of `names`, sorted into schema order. Duplicates and unknown
    /// names are errors.
    pub fn positions<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let p = self.require(n.as_ref())?;
            if out.contains(&p) {
                return Err(Error::DuplicateVariable(n.as_ref().to_string()));
            }
            out.push(p);
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Bitmask (bit `p` set for position `p`) of a set of names.
    pub fn mask<S: AsRef<str>>(&self, names: &[S]) -> Result<u32> {
        Ok(self.positions(names)?.iter().fold(0, |m, &p| m | (1 << p)))
    }

    /// Schema restricted to the given positions (kept in schema order).
    pub fn restrict(&self, positions: &[usize]) -> Schema {
        let mut ps = positions.to_vec();
        ps.sort_unstable();
        ps.dedup();
        Schema {
            names: ps.iter().map(|&p| self.names[p].clone()).collect(),
        }
    }

    pub fn cells(&self) -> usize {
        1usize << self.names.len()
    }

    #[inline]
    fn shift(&self, position: usize) -> usize {
        self.names.len() - 1 - position
    }

    /// Level of variable `position` in cell `index`.
    #[inline]
    pub fn level(&self, index: usize, position: usize) -> u8 {
        ((index >> self.shift(position)) & 1) as u8
    }

    pub fn levels(&self, index: usize) -> Vec<u8> {
        (0..self.len()).map(|p| self.level(index, p)).collect()
    }

    pub fn index(&self, levels: &[u8]) -> usize {
        debug_assert_eq!(levels.len(), self.len());
        levels
            .iter()
            .fold(0, |acc, &l| (acc << 1) | (l as usize & 1))
    }

    /// For every cell, the index of its projection onto `positions`
    /// (sorted ascending) in the corresponding margin.
    pub fn projection(&self, positions: &[usize]) -> Vec<usize> {
        (0..self.cells())
            .map(|i| {
                positions
                    .iter()
                    .fold(0, |acc, &p| (acc << 1) | self.level(i, p) as usize)
            })
            .collect()
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names.join(","))
    }
}

/// A partial or full assignment of levels to named variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellAddress {
    assignments: Vec<(String, u8)>,
}

impl CellAddress {
    pub fn new<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u8)>,
        S: Into<String>,
    {
        let mut assignments: Vec<(String, u8)> = Vec::new();
        for (name, level) in pairs {
            let name = name.into();
            if name.is_empty() {
                return Err(Error::EmptyVariableName);
            }
            if level > 1 {
                return Err(Error::InvalidLevel {
                    variable: name,
                    level,
                });
            }
            if assignments.iter().any(|(n, _)| *n == name) {
                return Err(Error::DuplicateVariable(name));
            }
            assignments.push((name, level));
        }
        Ok(CellAddress { assignments })
    }

    pub fn empty() -> Self {
        CellAddress::default()
    }

    pub fn assignments(&self) -> &[(String, u8)] {
        &self.assignments
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<u8> {
        self.assignments
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, l)| l)
    }

    /// Resolve against a schema into `(position, level)` pairs.
    pub fn resolve(&self, schema: &Schema) -> Result<Vec<(usize, u8)>> {
        self.assignments
            .iter()
            .map(|(n, l)| Ok((schema.require(n)?, *l)))
            .collect()
    }
}

/// Parses `L=1,R=0` (whitespace around tokens ignored; empty string is the
/// empty address).
impl FromStr for CellAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, level) = part.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(alloc::format!("expected NAME=LEVEL, got `{part}`"))
            })?;
            let level = match level.trim() {
                "0" => 0,
                "1" => 1,
                other => {
                    return Err(Error::InvalidArgument(alloc::format!(
                        "level `{other}` for `{}` is not 0 or 1",
                        name.trim()
                    )))
                }
            };
            pairs.push((name.trim().to_string(), level));
        }
        CellAddress::new(pairs)
    }
}

/// Nonnegative real counts over every level combination of a [`Schema`].
///
/// Counts need not be integers: fitted tables use the same type. A table may
/// have zero total only when produced by [`ContingencyTable::condition`] on an
/// empty slice; model fitting rejects such tables.
#[derive(Clone, Debug, PartialEq)]
pub struct ContingencyTable {
    schema: Schema,
    counts: Vec<f64>,
}

/// Result of conditioning on a cell address.
#[derive(Clone, Debug, PartialEq)]
pub struct Slice {
    pub table: ContingencyTable,
    /// The selected slice has zero total.
    pub empty: bool,
}

impl ContingencyTable {
    pub fn new(schema: Schema, counts: Vec<f64>) -> Result<Self> {
        if counts.len() != schema.cells() {
            return Err(Error::CountLength {
                expected: schema.cells(),
                found: counts.len(),
            });
        }
        for (index, &value) in counts.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteCount { index });
            }
            if value < 0.0 {
                return Err(Error::NegativeCount { index, value });
            }
        }
        Ok(ContingencyTable { schema, counts })
    }

    /// Build from a function of the level vector of each cell.
    pub fn from_fn<F>(schema: Schema, mut f: F) -> Result<Self>
    where
        F: FnMut(&[u8]) -> f64,
    {
        let counts = (0..schema.cells()).map(|i| f(&schema.levels(i))).collect();
        ContingencyTable::new(schema, counts)
    }

    pub fn zeros(schema: Schema) -> Self {
        let n = schema.cells();
        ContingencyTable {
            schema,
            counts: vec![0.0; n],
        }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn into_counts(self) -> Vec<f64> {
        self.counts
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    pub fn get(&self, levels: &[u8]) -> f64 {
        self.counts[self.schema.index(levels)]
    }

    /// Count at a full address.
    pub fn cell(&self, at: &CellAddress) -> Result<f64> {
        let resolved = at.resolve(&self.schema)?;
        if resolved.len() != self.schema.len() {
            return Err(Error::PartialAddress);
        }
        let mut levels = vec![0u8; self.schema.len()];
        for (p, l) in resolved {
            levels[p] = l;
        }
        Ok(self.get(&levels))
    }

    /// Sum over every variable not in `keep`. Variable order of the result
    /// follows the schema.
    pub fn marginalize<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument(
                "marginal must keep at least one variable".into(),
            ));
        }
        let positions = self.schema.positions(keep)?;
        Ok(self.margin(&positions))
    }

    /// Margin over sorted positions. An empty position list gives the
    /// zero-variable table holding the total.
    pub fn margin(&self, positions: &[usize]) -> Self {
        let schema = self.schema.restrict(positions);
        let mut counts = vec![0.0; schema.cells()];
        for (cell, m) in self.schema.projection(positions).into_iter().enumerate() {
            counts[m] += self.counts[cell];
        }
        ContingencyTable { schema, counts }
    }

    /// Cells matching `on`, as a table over the remaining variables.
    pub fn condition(&self, on: &CellAddress) -> Result<Slice> {
        let fixed = on.resolve(&self.schema)?;
        let rest: Vec<usize> = (0..self.schema.len())
            .filter(|p| !fixed.iter().any(|(q, _)| q == p))
            .collect();
        let schema = self.schema.restrict(&rest);
        let mut counts = Vec::with_capacity(schema.cells());
        let mut levels = vec![0u8; self.schema.len()];
        for &(p, l) in &fixed {
            levels[p] = l;
        }
        for i in 0..schema.cells() {
            for (j, &p) in rest.iter().enumerate() {
                levels[p] = schema.level(i, j);
            }
            counts.push(self.get(&levels));
        }
        let table = ContingencyTable { schema, counts };
        let empty = table.total() <= 0.0;
        Ok(Slice { table, empty })
    }

    /// Same counts with the variables rearranged into `order` (a permutation
    /// of the schema names).
    pub fn reorder<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        if order.len() != self.schema.len() {
            return Err(Error::SchemaMismatch);
        }
        let perm: Vec<usize> = order
            .iter()
            .map(|n| self.schema.require(n.as_ref()))
            .collect::<Result<_>>()?;
        let schema = Schema::new(order.iter().map(|n| n.as_ref().to_string()))?;
        let mut counts = vec![0.0; self.counts.len()];
        let mut src = vec![0u8; perm.len()];
        for (i, slot) in counts.iter_mut().enumerate() {
            for (j, &p) in perm.iter().enumerate() {
                src[p] = schema.level(i, j);
            }
            *slot = self.get(&src);
        }
        Ok(ContingencyTable { schema, counts })
    }

    /// Iterate `(levels, count)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<u8>, f64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.schema.levels(i), c))
    }
}
