//! Dancing-links exact cover with minimum-column branching.

use std::ops::ControlFlow;

pub(crate) struct ExactCover {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    row: Vec<usize>,
    size: Vec<usize>,
    columns: usize,
    rows: usize,
}

impl ExactCover {
    /// Node 0 is the root, nodes `1..=columns` are column headers.
    pub(crate) fn new(columns: usize) -> Self {
        let n = columns + 1;
        let mut ec = ExactCover {
            left: (0..n).map(|i| if i == 0 { columns } else { i - 1 }).collect(),
            right: (0..n).map(|i| if i == columns { 0 } else { i + 1 }).collect(),
            up: (0..n).collect(),
            down: (0..n).collect(),
            col: (0..n).collect(),
            row: vec![usize::MAX; n],
            size: vec![0; n],
            columns,
            rows: 0,
        };
        if columns == 0 {
            ec.left[0] = 0;
            ec.right[0] = 0;
        }
        ec
    }

    /// Adds a row covering the given (distinct, 0-based) columns.
    pub(crate) fn add_row(&mut self, cols: &[usize]) {
        let r = self.rows;
        self.rows += 1;
        let first = self.left.len();
        let m = cols.len();
        if m == 0 {
            return;
        }
        for (i, &c) in cols.iter().enumerate() {
            debug_assert!(c < self.columns);
            let h = c + 1;
            let node = first + i;
            self.left.push(first + (i + m - 1) % m);
            self.right.push(first + (i + 1) % m);
            self.up.push(self.up[h]);
            self.down.push(h);
            self.col.push(h);
            self.row.push(r);
            let u = self.up[h];
            self.down[u] = node;
            self.up[h] = node;
            self.size[h] += 1;
        }
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    /// Calls `visit` with the row indices of each solution, in search order.
    /// Returns the number of search nodes visited.
    pub(crate) fn solve(&mut self, mut visit: impl FnMut(&[usize]) -> ControlFlow<()>) -> u64 {
        let mut partial = Vec::new();
        let mut nodes = 0;
        let _ = self.search(&mut partial, &mut visit, &mut nodes);
        nodes
    }

    fn search(
        &mut self,
        partial: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
        nodes: &mut u64,
    ) -> ControlFlow<()> {
        *nodes += 1;
        if self.right[0] == 0 {
            return visit(partial);
        }
        let mut best = self.right[0];
        let mut c = self.right[best];
        while c != 0 {
            if self.size[c] < self.size[best] {
                best = c;
            }
            c = self.right[c];
        }
        if self.size[best] == 0 {
            return ControlFlow::Continue(());
        }
        self.cover(best);
        let mut r = self.down[best];
        let mut flow = ControlFlow::Continue(());
        while r != best {
            partial.push(self.row[r]);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.col[j]);
                j = self.right[j];
            }
            flow = self.search(partial, visit, nodes);
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.col[j]);
                j = self.left[j];
            }
            partial.pop();
            if flow.is_break() {
                break;
            }
            r = self.down[r];
        }
        self.uncover(best);
        flow
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knuth_example() {
        // columns A..G
        let rows: [&[usize]; 6] = [&[2, 4, 5], &[0, 3, 6], &[1, 2, 5], &[0, 3], &[1, 6], &[3, 4, 6]];
        let mut ec = ExactCover::new(7);
        for r in rows {
            ec.add_row(r);
        }
        let mut sols = Vec::new();
        ec.solve(|s| {
            let mut s = s.to_vec();
            s.sort();
            sols.push(s);
            ControlFlow::Continue(())
        });
        assert_eq!(sols, vec![vec![0, 3, 4]]);
    }

    #[test]
    fn no_columns_has_the_empty_solution() {
        let mut ec = ExactCover::new(0);
        let mut n = 0;
        ec.solve(|s| {
            assert!(s.is_empty());
            n += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(n, 1);
    }

    #[test]
    fn counts_all_perfect_matchings_of_k4() {
        // columns = 4 vertices, rows = 6 edges; K4 has 3 perfect matchings
        let edges = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
        let mut ec = ExactCover::new(4);
        for e in edges {
            ec.add_row(&e);
        }
        let mut n = 0;
        ec.solve(|_| {
            n += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(n, 3);
    }
}
