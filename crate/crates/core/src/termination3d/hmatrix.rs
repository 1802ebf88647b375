/// Symmetric 3×3 or 4×4 projected Hessian with cached trace invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HMatrix {
    dim: usize,
    entries: [[f64; 4]; 4],
    trace: f64,
    trace_sq: f64,
    trace_cu: f64,
    det: f64,
}

impl HMatrix {
    /// Builds from the leading `dim × dim` block of `raw`, averaging
    /// `(i, j)` with `(j, i)`.
    ///
    /// Panics if `dim` is not 3 or 4.
    pub fn from_entries(dim: usize, raw: [[f64; 4]; 4]) -> Self {
        assert!(dim == 3 || dim == 4, "HMatrix dimension must be 3 or 4");
        let mut e = [[0.0; 4]; 4];
        for i in 0..dim {
            e[i][i] = raw[i][i];
            for j in 0..i {
                let s = 0.5 * (raw[i][j] + raw[j][i]);
                e[i][j] = s;
                e[j][i] = s;
            }
        }
        let trace = (0..dim).map(|i| e[i][i]).sum();
        let mut trace_sq = 0.0;
        let mut trace_cu = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                trace_sq += e[i][j] * e[j][i];
                for k in 0..dim {
                    trace_cu += e[i][j] * e[j][k] * e[k][i];
                }
            }
        }
        let det = determinant(dim, &e);
        Self { dim, entries: e, trace, trace_sq, trace_cu, det }
    }

    pub fn from_rows3(rows: [[f64; 3]; 3]) -> Self {
        let mut e = [[0.0; 4]; 4];
        for i in 0..3 {
            e[i][..3].copy_from_slice(&rows[i]);
        }
        Self::from_entries(3, e)
    }

    pub fn from_rows4(rows: [[f64; 4]; 4]) -> Self {
        Self::from_entries(4, rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.dim && j < self.dim);
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    /// `tr(H²)`
    pub fn trace_sq(&self) -> f64 {
        self.trace_sq
    }

    /// `tr(H³)`
    pub fn trace_cu(&self) -> f64 {
        self.trace_cu
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    /// `H − shift·I`
    pub fn shifted(&self, shift: f64) -> Self {
        let mut e = self.entries;
        for (i, row) in e.iter_mut().enumerate().take(self.dim) {
            row[i] -= shift;
        }
        Self::from_entries(self.dim, e)
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim {
            let radius: f64 =
                (0..self.dim).filter(|&j| j != i).map(|j| self.entries[i][j].abs()).sum();
            lo = lo.min(self.entries[i][i] - radius);
            hi = hi.max(self.entries[i][i] + radius);
        }
        (lo, hi)
    }

    pub fn is_finite(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.entries[i][j].is_finite()))
    }
}

fn determinant(dim: usize, e: &[[f64; 4]; 4]) -> f64 {
    if dim == 3 {
        return e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
            - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
            + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
    }
    // LU with partial pivoting
    let mut a = *e;
    let mut det = 1.0;
    for c in 0..dim {
        let p = (c..dim)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..dim {
            let f = a[r][c] / a[c][c];
            for k in c..dim {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn cached_invariants_match_recomputation() {
        use nalgebra::Matrix4;
        let mut r = rng::stream(5, 0);
        for _ in 0..200 {
            let m = Matrix4::from_fn(|_, _| r.gen_range(-2.0..2.0));
            let s = m + m.transpose();
            let mut raw = [[0.0; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    raw[i][j] = s[(i, j)];
                }
            }
            let h = HMatrix::from_rows4(raw);
            assert!(rel(h.trace(), s.trace()) < 1e-12);
            assert!(rel(h.trace_sq(), (s * s).trace()) < 1e-12);
            assert!(rel(h.trace_cu(), (s * s * s).trace()) < 1e-10);
            assert!(rel(h.det(), s.determinant()) < 1e-10);
        }
    }

    #[test]
    fn symmetrizes_input() {
        let h = HMatrix::from_rows3([[1.0, 2.0, 0.0], [4.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!(h.entry(0, 1), 3.0);
        assert_eq!(h.entry(1, 0), 3.0);
    }

    #[test]
    fn three_by_three_invariants() {
        let h = HMatrix::from_rows3([[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 3.0]]);
        assert_eq!(h.trace(), 6.0);
        assert_eq!(h.trace_sq(), 14.0);
        assert_eq!(h.trace_cu(), 36.0);
        assert_eq!(h.det(), 6.0);
        assert_eq!(h.gershgorin(), (1.0, 3.0));
    }
}
