//! Right Følner sequences of the built-in spaces and the two diagnostics that
//! characterise them: per-coset defects and `E`-boundary ratios.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::geometry;
use crate::space::{CellSet, CellSpace, Coset, CosetSet};

/// Exact ratio of cell counts.
pub type Rational = Ratio<u64>;

/// An ℕ-indexed right Følner sequence. Members are regenerated from the index
/// on demand.
#[derive(Debug, Clone)]
pub struct FolnerSequence<'a, S: CellSpace> {
    space: &'a S,
    description: String,
}

impl<'a, S: CellSpace> FolnerSequence<'a, S> {
    /// The built-in box sequence: `[0, i)^d` on lattices and p4m, all of `M`
    /// on finite spaces.
    pub fn boxes(space: &'a S) -> Result<Self> {
        space.folner_box(1)?;
        let description = if space.kind().is_finite() {
            "whole space".to_string()
        } else {
            "corner-anchored boxes [0, i)^d".to_string()
        };
        Ok(FolnerSequence { space, description })
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn set(&self, i: usize) -> Result<CellSet<S::Cell>> {
        folner_boxes(self.space, i)
    }
}

pub fn folner_boxes<S: CellSpace>(space: &S, i: usize) -> Result<CellSet<S::Cell>> {
    let f = space.folner_box(i)?;
    if f.is_empty() {
        return Err(Error::Precondition(format!("Følner set {i} is empty")));
    }
    Ok(f)
}

/// `|F ∖ (· ⇀ c)⁻¹(F)| / |F|`: the fraction of `F` that `c` moves out of `F`.
pub fn folner_defect<S: CellSpace>(space: &S, f: &CellSet<S::Cell>, c: &Coset<S::Element>) -> Result<Rational> {
    if f.is_empty() {
        return Err(Error::Precondition("Følner defect of an empty set".into()));
    }
    let mut escaped = 0u64;
    for m in f {
        if !f.contains(&space.semi_act(m, c)?) {
            escaped += 1;
        }
    }
    Ok(Rational::new(escaped, f.len() as u64))
}

/// `|∂_E F| / |F|`.
pub fn boundary_ratio<S: CellSpace>(space: &S, f: &CellSet<S::Cell>, e: &CosetSet<S::Element>) -> Result<Rational> {
    if f.is_empty() {
        return Err(Error::Precondition("boundary ratio of an empty set".into()));
    }
    let region = geometry::margin(space, f, e)?;
    let b = geometry::boundary(space, f, e, &region)?;
    Ok(Rational::new(b.len() as u64, f.len() as u64))
}

/// One row of the `folner` diagnostic table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FolnerRow {
    pub index: usize,
    pub size: usize,
    pub defect: Rational,
    pub boundary_ratio: Rational,
}

pub fn folner_table<S: CellSpace>(
    space: &S,
    indices: impl IntoIterator<Item = usize>,
    c: &Coset<S::Element>,
    e: &CosetSet<S::Element>,
) -> Result<Vec<FolnerRow>> {
    indices
        .into_iter()
        .map(|i| {
            let f = folner_boxes(space, i)?;
            Ok(FolnerRow {
                index: i,
                size: f.len(),
                defect: folner_defect(space, &f, c)?,
                boundary_ratio: boundary_ratio(space, &f, e)?,
            })
        })
        .collect()
}

/// Smallest index in `rows` from which `value` stays strictly below
/// `threshold` through the end of the table.
pub fn settles_below(rows: &[(usize, Rational)], threshold: Rational) -> Option<usize> {
    let mut first = None;
    for (i, v) in rows {
        if *v < threshold {
            first.get_or_insert(*i);
        } else {
            first = None;
        }
    }
    first
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{Dihedral, Lattice};

    #[test]
    fn defect_of_unit_shift_on_interval() {
        let z = Lattice::<1>::new();
        let plus = z.coset(&[1]);
        for n in 1..20usize {
            let f = folner_boxes(&z, n).unwrap();
            assert_eq!(folner_defect(&z, &f, &plus).unwrap(), Rational::new(1, n as u64));
        }
        let f = folner_boxes(&z, 10).unwrap();
        assert_eq!(folner_defect(&z, &f, &z.stabiliser_coset()).unwrap(), Rational::from_integer(0));
    }

    #[test]
    fn defect_of_column_shift_on_square() {
        let z = Lattice::<2>::new();
        let east = z.coset(&[1, 0]);
        let f = folner_boxes(&z, 7).unwrap();
        assert_eq!(folner_defect(&z, &f, &east).unwrap(), Rational::new(1, 7));
    }

    #[test]
    fn finite_space_boxes_are_everything() {
        let d = Dihedral::new(5).unwrap();
        for i in 1..4 {
            assert_eq!(folner_boxes(&d, i).unwrap().len(), 5);
        }
        let f = folner_boxes(&d, 1).unwrap();
        let ring: CosetSet<_> = [0, 1, 4].iter().map(|&k| d.iota(&k)).collect();
        assert_eq!(boundary_ratio(&d, &f, &ring).unwrap(), Rational::from_integer(0));
    }

    #[test]
    fn settling_index() {
        let rows = vec![
            (1, Rational::new(1, 2)),
            (2, Rational::new(1, 20)),
            (3, Rational::new(1, 5)),
            (4, Rational::new(1, 30)),
            (5, Rational::new(1, 40)),
        ];
        assert_eq!(settles_below(&rows, Rational::new(1, 10)), Some(4));
        assert_eq!(settles_below(&rows[..3], Rational::new(1, 10)), None);
    }
}
