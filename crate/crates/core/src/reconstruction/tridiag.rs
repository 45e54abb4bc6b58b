//! Scalar and 3x3-block tridiagonal solvers (forward elimination and back
//! substitution, no pivoting). Cyclic systems are reduced to a bounded system
//! on the first `n - 1` rows plus a correction for the wrap-around unknown.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Result, SolverError};

/// How the first and last rows close.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    /// `lower[0]` and `upper[n-1]` are ignored.
    Bounded,
    /// `lower[0]` multiplies `x[n-1]` and `upper[n-1]` multiplies `x[0]`.
    Cyclic,
}

/// Scalar tridiagonal system `lower[k] x[k-1] + diag[k] x[k] + upper[k] x[k+1] = rhs[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriSystem {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub closure: Closure,
}

pub fn solve_tridiagonal(system: &TriSystem, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = system.diag.len();
    check_dims(n, &[system.lower.len(), system.upper.len(), rhs.len()])?;
    let mut x = rhs.to_vec();
    let mut scratch = TriScratch::default();
    match system.closure {
        Closure::Bounded => thomas(
            &system.lower,
            &system.diag,
            &system.upper,
            &mut x,
            &mut scratch.c,
        )?,
        Closure::Cyclic => cyclic_thomas(
            &system.lower,
            &system.diag,
            &system.upper,
            &mut x,
            &mut scratch,
        )?,
    }
    Ok(x)
}

fn check_dims(n: usize, others: &[usize]) -> Result<()> {
    if n < 3 {
        return Err(SolverError::InvalidArgument(format!(
            "tridiagonal system needs at least 3 rows, got {n}"
        )));
    }
    for &m in others {
        if m != n {
            return Err(SolverError::SizeMismatch {
                expected: n,
                found: m,
            });
        }
    }
    Ok(())
}

/// Reusable buffers for the scalar solvers.
#[derive(Debug, Default, Clone)]
pub struct TriScratch {
    c: Vec<f64>,
    z: Vec<f64>,
}

/// Bounded Thomas algorithm; the solution overwrites `d`.
pub(crate) fn thomas(
    a: &[f64],
    b: &[f64],
    c: &[f64],
    d: &mut [f64],
    cp: &mut Vec<f64>,
) -> Result<()> {
    let n = d.len();
    cp.clear();
    cp.resize(n, 0.0);
    let mut prev_c = 0.0;
    let mut prev_d = 0.0;
    for k in 0..n {
        let lo = if k == 0 { 0.0 } else { a[k] };
        let piv = b[k] - lo * prev_c;
        if piv == 0.0 || !piv.is_finite() {
            return Err(SolverError::SingularPivot { index: k });
        }
        let inv = 1.0 / piv;
        prev_c = if k + 1 < n { c[k] * inv } else { 0.0 };
        prev_d = (d[k] - lo * prev_d) * inv;
        cp[k] = prev_c;
        d[k] = prev_d;
    }
    for k in (0..n - 1).rev() {
        d[k] -= cp[k] * d[k + 1];
    }
    Ok(())
}

/// Cyclic Thomas algorithm; the solution overwrites `d`.
pub(crate) fn cyclic_thomas(
    a: &[f64],
    b: &[f64],
    c: &[f64],
    d: &mut [f64],
    s: &mut TriScratch,
) -> Result<()> {
    let n = d.len();
    let m = n - 1;
    // x[k] = y[k] + z[k] * x[n-1] for k < n-1
    s.z.clear();
    s.z.resize(m, 0.0);
    s.z[0] = -a[0];
    s.z[m - 1] -= c[m - 1];
    thomas(a, b, c, &mut d[..m], &mut s.c)?;
    thomas(a, b, c, &mut s.z, &mut s.c)?;
    let piv = b[m] + a[m] * s.z[m - 1] + c[m] * s.z[0];
    if piv == 0.0 || !piv.is_finite() {
        return Err(SolverError::SingularPivot { index: m });
    }
    let last = (d[m] - a[m] * d[m - 1] - c[m] * d[0]) / piv;
    d[m] = last;
    for k in 0..m {
        d[k] += s.z[k] * last;
    }
    Ok(())
}

/// Block tridiagonal system with 3x3 blocks:
/// `lower[k] x[k-1] + diag[k] x[k] + upper[k] x[k+1] = rhs[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTriSystem {
    pub lower: Vec<Matrix3<f64>>,
    pub diag: Vec<Matrix3<f64>>,
    pub upper: Vec<Matrix3<f64>>,
    pub rhs: Vec<Vector3<f64>>,
    pub closure: Closure,
}

impl BlockTriSystem {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }
}

pub fn solve_block_tridiagonal(sys: &BlockTriSystem) -> Result<Vec<Vector3<f64>>> {
    let n = sys.diag.len();
    check_dims(n, &[sys.lower.len(), sys.upper.len(), sys.rhs.len()])?;
    let mut x = sys.rhs.clone();
    let mut solver = BlockThomas::default();
    solver.solve(&sys.lower, &sys.diag, &sys.upper, &mut x, sys.closure)?;
    Ok(x)
}

/// Block elimination with reusable factor storage.
#[derive(Debug, Default, Clone)]
pub struct BlockThomas {
    pivot_inv: Vec<M3>,
    upper_mod: Vec<M3>,
    wrap: Vec<M3>,
    x: Vec<V3>,
}

type M3 = [f64; 9];
type V3 = [f64; 3];

#[inline(always)]
fn m3(m: &Matrix3<f64>) -> M3 {
    [
        m[(0, 0)],
        m[(0, 1)],
        m[(0, 2)],
        m[(1, 0)],
        m[(1, 1)],
        m[(1, 2)],
        m[(2, 0)],
        m[(2, 1)],
        m[(2, 2)],
    ]
}

#[inline(always)]
fn mul(a: &M3, b: &M3) -> M3 {
    let mut c = [0.0; 9];
    for r in 0..3 {
        for k in 0..3 {
            c[3 * r + k] = a[3 * r] * b[k] + a[3 * r + 1] * b[3 + k] + a[3 * r + 2] * b[6 + k];
        }
    }
    c
}

#[inline(always)]
fn mulv(a: &M3, v: &V3) -> V3 {
    [
        a[0] * v[0] + a[1] * v[1] + a[2] * v[2],
        a[3] * v[0] + a[4] * v[1] + a[5] * v[2],
        a[6] * v[0] + a[7] * v[1] + a[8] * v[2],
    ]
}

#[inline(always)]
fn sub(a: &M3, b: &M3) -> M3 {
    std::array::from_fn(|k| a[k] - b[k])
}

#[inline(always)]
fn subv(a: &V3, b: &V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline(always)]
fn inv3(m: &M3) -> Option<M3> {
    let c00 = m[4] * m[8] - m[5] * m[7];
    let c01 = m[5] * m[6] - m[3] * m[8];
    let c02 = m[3] * m[7] - m[4] * m[6];
    let det = m[0] * c00 + m[1] * c01 + m[2] * c02;
    if det == 0.0 {
        return None;
    }
    let d = 1.0 / det;
    let inv = [
        c00 * d,
        (m[2] * m[7] - m[1] * m[8]) * d,
        (m[1] * m[5] - m[2] * m[4]) * d,
        c01 * d,
        (m[0] * m[8] - m[2] * m[6]) * d,
        (m[2] * m[3] - m[0] * m[5]) * d,
        c02 * d,
        (m[1] * m[6] - m[0] * m[7]) * d,
        (m[0] * m[4] - m[1] * m[3]) * d,
    ];
    inv.iter().all(|v| v.is_finite()).then_some(inv)
}

impl BlockThomas {
    pub fn solve(
        &mut self,
        lower: &[Matrix3<f64>],
        diag: &[Matrix3<f64>],
        upper: &[Matrix3<f64>],
        rhs: &mut [Vector3<f64>],
        closure: Closure,
    ) -> Result<()> {
        let n = rhs.len();
        self.x.clear();
        self.x.extend(rhs.iter().map(|v| [v[0], v[1], v[2]]));
        let mut x = std::mem::take(&mut self.x);
        let res = match closure {
            Closure::Bounded => self
                .factor(lower, diag, upper, n)
                .map(|_| self.substitute(lower, &mut x)),
            Closure::Cyclic => self.solve_cyclic(lower, diag, upper, &mut x),
        };
        for (r, v) in rhs.iter_mut().zip(&x) {
            *r = Vector3::new(v[0], v[1], v[2]);
        }
        self.x = x;
        res
    }

    fn factor(
        &mut self,
        lower: &[Matrix3<f64>],
        diag: &[Matrix3<f64>],
        upper: &[Matrix3<f64>],
        n: usize,
    ) -> Result<()> {
        self.pivot_inv.clear();
        self.upper_mod.clear();
        let mut prev = [0.0; 9];
        for k in 0..n {
            let piv = if k == 0 {
                m3(&diag[0])
            } else {
                sub(&m3(&diag[k]), &mul(&m3(&lower[k]), &prev))
            };
            let inv = inv3(&piv).ok_or(SolverError::SingularPivot { index: k })?;
            prev = if k + 1 < n {
                mul(&inv, &m3(&upper[k]))
            } else {
                [0.0; 9]
            };
            self.pivot_inv.push(inv);
            self.upper_mod.push(prev);
        }
        Ok(())
    }

    fn substitute(&self, lower: &[Matrix3<f64>], d: &mut [V3]) {
        let n = d.len();
        d[0] = mulv(&self.pivot_inv[0], &d[0]);
        for k in 1..n {
            let t = subv(&d[k], &mulv(&m3(&lower[k]), &d[k - 1]));
            d[k] = mulv(&self.pivot_inv[k], &t);
        }
        for k in (0..n - 1).rev() {
            d[k] = subv(&d[k], &mulv(&self.upper_mod[k], &d[k + 1]));
        }
    }

    fn solve_cyclic(
        &mut self,
        lower: &[Matrix3<f64>],
        diag: &[Matrix3<f64>],
        upper: &[Matrix3<f64>],
        d: &mut [V3],
    ) -> Result<()> {
        let n = d.len();
        let m = n - 1;
        self.factor(lower, diag, upper, m)?;
        self.substitute(lower, &mut d[..m]);

        let z = &mut self.wrap;
        z.clear();
        z.resize(m, [0.0; 9]);
        let neg = |a: &M3| -> M3 { std::array::from_fn(|k| -a[k]) };
        z[0] = neg(&m3(&lower[0]));
        z[m - 1] = sub(&z[m - 1], &m3(&upper[m - 1]));
        z[0] = mul(&self.pivot_inv[0], &z[0]);
        for k in 1..m {
            let t = sub(&z[k], &mul(&m3(&lower[k]), &z[k - 1]));
            z[k] = mul(&self.pivot_inv[k], &t);
        }
        for k in (0..m - 1).rev() {
            z[k] = sub(&z[k], &mul(&self.upper_mod[k], &z[k + 1]));
        }

        let piv = {
            let p = sub(&m3(&diag[m]), &neg(&mul(&m3(&lower[m]), &z[m - 1])));
            sub(&p, &neg(&mul(&m3(&upper[m]), &z[0])))
        };
        let inv = inv3(&piv).ok_or(SolverError::SingularPivot { index: m })?;
        let rhs = subv(
            &subv(&d[m], &mulv(&m3(&lower[m]), &d[m - 1])),
            &mulv(&m3(&upper[m]), &d[0]),
        );
        let last = mulv(&inv, &rhs);
        d[m] = last;
        for k in 0..m {
            let c = mulv(&z[k], &last);
            d[k] = [d[k][0] + c[0], d[k][1] + c[1], d[k][2] + c[2]];
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_scalar(sys: &TriSystem) -> DMatrix<f64> {
        let n = sys.diag.len();
        let mut m = DMatrix::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = sys.diag[k];
            if k > 0 {
                m[(k, k - 1)] = sys.lower[k];
            } else if sys.closure == Closure::Cyclic {
                m[(0, n - 1)] = sys.lower[0];
            }
            if k + 1 < n {
                m[(k, k + 1)] = sys.upper[k];
            } else if sys.closure == Closure::Cyclic {
                m[(n - 1, 0)] = sys.upper[n - 1];
            }
        }
        m
    }

    #[test]
    fn identity_returns_rhs() {
        let sys = TriSystem {
            lower: vec![0.0; 4],
            diag: vec![1.0; 4],
            upper: vec![0.0; 4],
            closure: Closure::Bounded,
        };
        let b = [1.0, -2.0, 3.5, 4.0];
        assert_eq!(solve_tridiagonal(&sys, &b).unwrap(), b.to_vec());
    }

    #[test]
    fn five_by_five_matches_dense_lu() {
        let sys = TriSystem {
            lower: vec![1.0; 5],
            diag: vec![4.0; 5],
            upper: vec![1.0; 5],
            closure: Closure::Bounded,
        };
        let b = vec![1.0; 5];
        let x = solve_tridiagonal(&sys, &b).unwrap();
        let oracle = dense_scalar(&sys)
            .lu()
            .solve(&DVector::from_vec(b))
            .unwrap();
        for k in 0..5 {
            assert!((x[k] - oracle[k]).abs() < 1e-13);
        }
    }

    #[test]
    fn cyclic_six_by_six_matches_dense_lu() {
        let sys = TriSystem {
            lower: vec![0.7, 1.0, -0.5, 0.3, 1.1, 0.2],
            diag: vec![4.0, 3.5, 5.0, 4.2, 3.9, 4.4],
            upper: vec![1.3, -0.8, 0.6, 1.0, 0.4, 0.9],
            closure: Closure::Cyclic,
        };
        let b = vec![1.0, 2.0, -1.0, 0.5, 3.0, -2.0];
        let x = solve_tridiagonal(&sys, &b).unwrap();
        let oracle = dense_scalar(&sys)
            .lu()
            .solve(&DVector::from_vec(b))
            .unwrap();
        for k in 0..6 {
            assert!((x[k] - oracle[k]).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_pivot_is_reported() {
        let sys = TriSystem {
            lower: vec![0.0, 1.0, 1.0],
            diag: vec![1.0, 1.0, 1.0],
            upper: vec![1.0, 1.0, 0.0],
            closure: Closure::Bounded,
        };
        assert_eq!(
            solve_tridiagonal(&sys, &[1.0, 1.0, 1.0]),
            Err(SolverError::SingularPivot { index: 1 })
        );
        let short = TriSystem {
            lower: vec![0.0; 2],
            diag: vec![1.0; 2],
            upper: vec![0.0; 2],
            closure: Closure::Bounded,
        };
        assert!(solve_tridiagonal(&short, &[1.0, 1.0]).is_err());
    }

    fn random_block_system(rng: &mut ChaCha8Rng, n: usize, closure: Closure) -> BlockTriSystem {
        let mut mat = |scale: f64| Matrix3::from_fn(|_, _| scale * rng.gen_range(-1.0..1.0));
        let lower: Vec<_> = (0..n).map(|_| mat(1.0)).collect();
        let upper: Vec<_> = (0..n).map(|_| mat(1.0)).collect();
        let diag: Vec<_> = (0..n)
            .map(|_| mat(1.0) + Matrix3::identity() * 8.0)
            .collect();
        let rhs = (0..n)
            .map(|_| Vector3::from_fn(|_, _| rng.gen_range(-5.0..5.0)))
            .collect();
        BlockTriSystem {
            lower,
            diag,
            upper,
            rhs,
            closure,
        }
    }

    fn dense_block(sys: &BlockTriSystem) -> (DMatrix<f64>, DVector<f64>) {
        let n = sys.len();
        let mut m = DMatrix::zeros(3 * n, 3 * n);
        let mut put = |r: usize, c: usize, b: &Matrix3<f64>| {
            for i in 0..3 {
                for j in 0..3 {
                    m[(3 * r + i, 3 * c + j)] += b[(i, j)];
                }
            }
        };
        for k in 0..n {
            put(k, k, &sys.diag[k]);
            if k > 0 {
                put(k, k - 1, &sys.lower[k]);
            } else if sys.closure == Closure::Cyclic {
                put(0, n - 1, &sys.lower[0]);
            }
            if k + 1 < n {
                put(k, k + 1, &sys.upper[k]);
            } else if sys.closure == Closure::Cyclic {
                put(n - 1, 0, &sys.upper[n - 1]);
            }
        }
        let b = DVector::from_iterator(3 * n, sys.rhs.iter().flat_map(|v| v.iter().copied()));
        (m, b)
    }

    #[test]
    fn block_identity_returns_rhs() {
        let n = 4;
        let rhs: Vec<_> = (0..n).map(|k| Vector3::new(k as f64, 1.0, -2.0)).collect();
        let sys = BlockTriSystem {
            lower: vec![Matrix3::zeros(); n],
            diag: vec![Matrix3::identity(); n],
            upper: vec![Matrix3::zeros(); n],
            rhs: rhs.clone(),
            closure: Closure::Bounded,
        };
        assert_eq!(solve_block_tridiagonal(&sys).unwrap(), rhs);
    }

    #[test]
    fn block_solver_matches_dense_lu() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for closure in [Closure::Bounded, Closure::Cyclic] {
            let sys = random_block_system(&mut rng, 4, closure);
            let x = solve_block_tridiagonal(&sys).unwrap();
            let (m, b) = dense_block(&sys);
            let oracle = m.lu().solve(&b).unwrap();
            for k in 0..4 {
                for i in 0..3 {
                    assert!((x[k][i] - oracle[3 * k + i]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn singular_block_names_row() {
        let n = 3;
        let mut diag = vec![Matrix3::identity(); n];
        diag[2] = Matrix3::zeros();
        let sys = BlockTriSystem {
            lower: vec![Matrix3::zeros(); n],
            diag,
            upper: vec![Matrix3::zeros(); n],
            rhs: vec![Vector3::zeros(); n],
            closure: Closure::Bounded,
        };
        assert_eq!(
            solve_block_tridiagonal(&sys),
            Err(SolverError::SingularPivot { index: 2 })
        );
    }
}
