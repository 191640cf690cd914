//! Dense partial binary operation tables.

/// `cells[x * n + y]` is the value of the operation at `(x, y)`, `None` where undefined.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialTable {
    n: usize,
    cells: Vec<Option<usize>>,
}

impl PartialTable {
    /// Nowhere-defined table over `n` elements.
    pub fn new(n: usize) -> Self {
        PartialTable {
            n,
            cells: vec![None; n * n],
        }
    }

    pub fn from_cells(n: usize, cells: Vec<Option<usize>>) -> Self {
        assert_eq!(cells.len(), n * n);
        PartialTable { n, cells }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<usize> {
        self.cells[x * self.n + y]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: Option<usize>) {
        self.cells[x * self.n + y] = value;
    }

    pub fn is_defined(&self, x: usize, y: usize) -> bool {
        self.get(x, y).is_some()
    }

    pub fn cells(&self) -> &[Option<usize>] {
        &self.cells
    }

    /// Defined entries `(x, y, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter_map(move |(i, v)| v.map(|v| (i / self.n, i % self.n, v)))
    }

    /// The table with arguments swapped.
    pub fn transposed(&self) -> Self {
        let mut t = PartialTable::new(self.n);
        for (x, y, v) in self.entries() {
            t.set(y, x, Some(v));
        }
        t
    }

    /// Relabels through `position[old] = Some(new)`, dropping unmapped cells.
    pub(crate) fn restrict(&self, keep: &[usize]) -> Option<Self> {
        let mut position = vec![None; self.n];
        for (i, &x) in keep.iter().enumerate() {
            position[x] = Some(i);
        }
        let k = keep.len();
        let mut out = PartialTable::new(k);
        for (i, &x) in keep.iter().enumerate() {
            for (j, &y) in keep.iter().enumerate() {
                if let Some(v) = self.get(x, y) {
                    out.set(i, j, Some(position[v]?));
                }
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_and_entries() {
        let mut t = PartialTable::new(3);
        t.set(0, 2, Some(1));
        t.set(2, 2, Some(0));
        let tt = t.transposed();
        assert_eq!(tt.get(2, 0), Some(1));
        assert_eq!(tt.entries().collect::<Vec<_>>(), vec![(2, 0, 1), (2, 2, 0)]);
        assert_eq!(tt.transposed(), t);
    }

    #[test]
    fn restrict_requires_closure() {
        let mut t = PartialTable::new(3);
        t.set(0, 1, Some(2));
        assert!(t.restrict(&[0, 1]).is_none());
        let r = t.restrict(&[0, 1, 2]).unwrap();
        assert_eq!(r, t);
    }
}
