//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Real spin operators in the descending-m basis: `(S_z, S_x, A)` where
/// `A = S+ − S−`, so that `S_y = −iA/2`.
pub fn spin_ops(twice: u32) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let d = twice as usize + 1;
    let s = twice as f64 / 2.0;
    let m = |i: usize| s - i as f64;
    let sz = DMatrix::from_fn(d, d, |i, j| if i == j { m(i) } else { 0.0 });
    // S+ |m⟩ = √(s(s+1) − m(m+1)) |m+1⟩, and |m+1⟩ sits one index earlier.
    let splus = DMatrix::from_fn(d, d, |i, j| {
        if i + 1 == j {
            (s * (s + 1.0) - m(j) * (m(j) + 1.0)).sqrt()
        } else {
            0.0
        }
    });
    let sminus = splus.transpose();
    let sx = (&splus + &sminus) * 0.5;
    let a = &splus - &sminus;
    (sz, sx, a)
}

/// `exp(−iβ S_y) = exp(−β A / 2)` by scaling and squaring a Taylor series.
pub fn rotation_by_expm(twice: u32, beta: f64) -> DMatrix<f64> {
    let (_, _, a) = spin_ops(twice);
    let x = a * (-beta / 2.0);
    let norm = x.abs().max().max(1e-300);
    let k = (norm.log2().ceil().max(0.0) as i32) + 4;
    let y = &x / 2f64.powi(k);
    let d = y.nrows();
    let mut term = DMatrix::<f64>::identity(d, d);
    let mut sum = term.clone();
    for n in 1..30 {
        term = &term * &y / n as f64;
        sum += &term;
    }
    for _ in 0..k {
        sum = &sum * &sum;
    }
    sum
}

fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b)
}

/// Two-particle zero-total-spin state found as the null vector of total `S²`.
pub fn singlet_by_total_spin(twice: u32) -> DVector<f64> {
    let (sz, sx, a) = spin_ops(twice);
    let d = sz.nrows();
    let id = DMatrix::<f64>::identity(d, d);
    let tz = kron(&sz, &id) + kron(&id, &sz);
    let tx = kron(&sx, &id) + kron(&id, &sx);
    let ta = kron(&a, &id) + kron(&id, &a);
    // S_y² = −A²/4 for the real antisymmetric A.
    let s2 = &tz * &tz + &tx * &tx - &ta * &ta * 0.25;
    let eig = SymmetricEigen::new(s2);
    let k = (0..d * d)
        .min_by(|&i, &j| eig.eigenvalues[i].abs().total_cmp(&eig.eigenvalues[j].abs()))
        .unwrap();
    eig.eigenvectors.column(k).into_owned()
}

/// Eigenvectors of `cos θ S_z + sin θ S_x`, ordered by descending eigenvalue.
pub fn measurement_basis(twice: u32, theta: f64) -> Vec<DVector<f64>> {
    let (sz, sx, _) = spin_ops(twice);
    let op = sz * theta.cos() + sx * theta.sin();
    let eig = SymmetricEigen::new(op);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    idx.into_iter().map(|i| eig.eigenvectors.column(i).into_owned()).collect()
}

/// Born-rule joint distribution for Alice along `theta_a` and Bob along
/// `theta_b` (both in the xz-plane), row-major over descending outcomes.
pub fn brute_force_cell(twice: u32, theta_a: f64, theta_b: f64) -> Vec<f64> {
    let psi = singlet_by_total_spin(twice);
    let ua = measurement_basis(twice, theta_a);
    let ub = measurement_basis(twice, theta_b);
    let mut out = Vec::new();
    for va in &ua {
        for vb in &ub {
            let amp = kron(&DMatrix::from_column_slice(va.len(), 1, va.as_slice()), &DMatrix::from_column_slice(vb.len(), 1, vb.as_slice()));
            let a: f64 = amp.iter().zip(psi.iter()).map(|(x, y)| x * y).sum();
            out.push(a * a);
        }
    }
    out
}

/// Minus the Pearson correlation of a joint distribution over outcomes
/// `s, s−1, …, −s`, computed directly from moments.
pub fn chi_from_probs(twice: u32, p: &[f64]) -> f64 {
    let d = twice as usize + 1;
    let m: Vec<f64> = (0..d).map(|i| twice as f64 / 2.0 - i as f64).collect();
    let (mut ea, mut eb, mut eaa, mut ebb, mut eab) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            let w = p[i * d + j];
            ea += w * m[i];
            eb += w * m[j];
            eaa += w * m[i] * m[i];
            ebb += w * m[j] * m[j];
            eab += w * m[i] * m[j];
        }
    }
    -(eab - ea * eb) / ((eaa - ea * ea) * (ebb - eb * eb)).sqrt()
}
