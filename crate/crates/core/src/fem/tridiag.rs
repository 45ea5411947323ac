use super::mesh::Mesh;

/// Symmetric tridiagonal matrix over the interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    /// `off[k]` couples rows `k` and `k + 1`.
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    /// `int phi_j' phi_k'`.
    pub fn stiffness(mesh: &Mesh) -> Self {
        Self::assemble(mesh, |h| (1.0 / h, -1.0 / h))
    }

    /// `int phi_j phi_k`.
    pub fn mass(mesh: &Mesh) -> Self {
        Self::assemble(mesh, |h| (h / 3.0, h / 6.0))
    }

    /// `local(h)` returns the (diagonal, off-diagonal) entry of the 2x2
    /// element matrix on an element of length `h`.
    fn assemble(mesh: &Mesh, local: impl Fn(f64) -> (f64, f64)) -> Self {
        let n = mesh.interior_count();
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        for e in 0..mesh.element_count() {
            let (d, o) = local(mesh.element_len(e));
            // element e joins nodes e and e+1, i.e. interior rows e-1 and e
            if e >= 1 {
                diag[e - 1] += d;
            }
            if e < n {
                diag[e] += d;
            }
            if e >= 1 && e < n {
                off[e - 1] += o;
            }
        }
        Self { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut y = self.diag[k] * x[k];
                if k > 0 {
                    y += self.off[k - 1] * x[k - 1];
                }
                if k + 1 < n {
                    y += self.off[k] * x[k + 1];
                }
                y
            })
            .collect()
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.apply(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Thomas algorithm; the matrices built here are positive definite.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.dim();
        if n == 0 {
            return Vec::new();
        }
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        c[0] = if n > 1 {
            self.off[0] / self.diag[0]
        } else {
            0.0
        };
        d[0] = rhs[0] / self.diag[0];
        for k in 1..n {
            let denom = self.diag[k] - self.off[k - 1] * c[k - 1];
            if k + 1 < n {
                c[k] = self.off[k] / denom;
            }
            d[k] = (rhs[k] - self.off[k - 1] * d[k - 1]) / denom;
        }
        let mut x = d;
        for k in (0..n - 1).rev() {
            x[k] -= c[k] * x[k + 1];
        }
        x
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        let mut m = nalgebra::DMatrix::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = self.diag[k];
            if k + 1 < n {
                m[(k, k + 1)] = self.off[k];
                m[(k + 1, k)] = self.off[k];
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Partition;

    #[test]
    fn solve_inverts_apply() {
        let m = Mesh::build(&Partition::without_impulses(1.3), 9).unwrap();
        let k = SymTridiagonal::stiffness(&m);
        let x: Vec<f64> = (0..k.dim()).map(|i| (i as f64 * 0.7).sin()).collect();
        let y = k.apply(&x);
        let back = k.solve(&y);
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_stiffness_entries() {
        let m = Mesh::build(&Partition::without_impulses(1.0), 4).unwrap();
        let k = SymTridiagonal::stiffness(&m);
        assert_eq!(k.diag, vec![8.0, 8.0, 8.0]);
        assert_eq!(k.off, vec![-4.0, -4.0]);
    }
}
