//! Spectral data of the monopole Laplacian on `S²` and the indicial roots
//! (exceptional weights) of the model operator `−ü + u̇ + L` on a
//! half-cylinder.
//!
//! For a line bundle of charge `m` with connection `(i m/2)(1 − cos φ) dθ`
//! on the chart away from `φ = π`, `∇*∇` has eigenvalues
//! `(l(l+2) − m²)/4`, `l = |m| + 2j`, with multiplicity `l + 1`.
//! Adding `m²/4` gives `λ_j = l(l+2)/4`, the eigenvalues of `L`, and
//! `γ² + γ − λ = 0` has roots `γ⁺ = l/2`, `γ⁻ = −1 − l/2`.

use serde::Serialize;
use thiserror::Error;

use crate::exec::Exec;

/// Relative gap below which oracle eigenvalues are grouped into one cluster.
pub const CLUSTER_GAP: f64 = 1e-3;
/// Default number of cells in the polar angle for the oracle.
pub const ORACLE_CELLS: usize = 400;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("|delta| = {delta} needs more weights than j_max = {j_max} provides")]
    InsufficientJMax { delta: f64, j_max: usize },
    #[error("oracle under-resolved: eigenvalue {value} moved by {change:.3e} under refinement")]
    ResolutionTooLow { value: f64, change: f64 },
    #[error("l_cut = {0} exceeds the supported maximum of 8")]
    CutTooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KuwabaraEntry {
    pub l: u64,
    pub eigenvalue: f64,
    pub multiplicity: u64,
}

/// `(l, (l(l+2) − m²)/4, l + 1)` for `j = 0..=j_max`.
pub fn kuwabara_eigenvalues(m: i64, j_max: usize) -> Vec<KuwabaraEntry> {
    let am = m.unsigned_abs();
    (0..=j_max as u64)
        .map(|j| {
            let l = am + 2 * j;
            let (lf, mf) = (l as f64, m as f64);
            KuwabaraEntry { l, eigenvalue: (lf * (lf + 2.0) - mf * mf) / 4.0, multiplicity: l + 1 }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightEntry {
    pub j: u64,
    pub l: u64,
    pub lambda: f64,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightSpectrum {
    pub m: i64,
    pub entries: Vec<WeightEntry>,
}

/// Eigenvalues of `L` with the exceptional weights `γ± = −1/2 ± √(1/4 + λ)`.
pub fn operator_l_spectrum(m: i64, j_max: usize) -> WeightSpectrum {
    let entries = kuwabara_eigenvalues(m, j_max)
        .into_iter()
        .enumerate()
        .map(|(j, e)| {
            let lambda = e.eigenvalue + (m * m) as f64 / 4.0;
            let root = (0.25 + lambda).sqrt();
            WeightEntry {
                j: j as u64,
                l: e.l,
                lambda,
                gamma_plus: -0.5 + root,
                gamma_minus: -0.5 - root,
                multiplicity: e.multiplicity,
            }
        })
        .collect();
    WeightSpectrum { m, entries }
}

impl WeightSpectrum {
    /// All weights `γ±` in increasing order.
    pub fn weights(&self) -> Vec<f64> {
        let mut w: Vec<f64> = self.entries.iter().flat_map(|e| [e.gamma_minus, e.gamma_plus]).collect();
        w.sort_by(f64::total_cmp);
        w
    }

    /// Writes `j l lambda gamma+ gamma- mult` as TSV.
    pub fn write_tsv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "j\tl\tlambda\tgamma+\tgamma-\tmult")?;
        for e in &self.entries {
            writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}", e.j, e.l, e.lambda, e.gamma_plus, e.gamma_minus, e.multiplicity)?;
        }
        Ok(())
    }
}

/// Open interval around the origin that contains no weight:
/// `(−1 − |m|/2, |m|/2)`.
pub fn weight_free_interval(m: i64) -> (f64, f64) {
    let h = m.unsigned_abs() as f64 / 2.0;
    (-1.0 - h, h)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExceptionalCheck {
    pub exceptional: bool,
    pub nearest: f64,
    pub distance: f64,
}

/// Whether `delta` is one of the weights `γ_j±` (within 1e-12), with the
/// nearest weight. Requires `|delta| < γ⁺_{j_max}`.
pub fn is_exceptional(delta: f64, m: i64, j_max: usize) -> Result<ExceptionalCheck, SpectralError> {
    is_exceptional_within(delta, m, j_max, 1e-12)
}

pub fn is_exceptional_within(delta: f64, m: i64, j_max: usize, tol: f64) -> Result<ExceptionalCheck, SpectralError> {
    let weights = operator_l_spectrum(m, j_max);
    let top = weights.entries.last().map(|e| e.gamma_plus).unwrap_or(0.0);
    if !(delta.abs() < top) {
        return Err(SpectralError::InsufficientJMax { delta, j_max });
    }
    let nearest = weights
        .weights()
        .into_iter()
        .min_by(|a, b| (a - delta).abs().total_cmp(&(b - delta).abs()))
        .expect("spectrum is nonempty");
    let distance = (nearest - delta).abs();
    Ok(ExceptionalCheck { exceptional: distance <= tol, nearest, distance })
}

/// Symmetric tridiagonal matrix: `diag[i]`, `off[i]` couples `i` and `i+1`.
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.diag.len() {
            let b2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            d = self.diag[i] - x - if i == 0 { 0.0 } else { b2 / d };
            if d == 0.0 {
                d = -f64::EPSILON * (self.diag[i].abs() + x.abs() + 1.0);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Eigenvalues below `cut`, ascending, by bisection.
    fn eigenvalues_below(&self, cut: f64) -> Vec<f64> {
        let n_below = self.count_below(cut);
        let lower = self
            .diag
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let l = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let r = if i < self.off.len() { self.off[i].abs() } else { 0.0 };
                d - l - r
            })
            .fold(f64::INFINITY, f64::min);
        (0..n_below)
            .map(|k| {
                let (mut lo, mut hi) = (lower, cut);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.count_below(mid) > k {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                    if hi - lo <= 1e-14 * (1.0 + hi.abs()) {
                        break;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect()
    }
}

/// Finite-volume discretisation of the Fourier mode `e^{inθ}` of `∇*∇` for
/// charge `m`:
///
/// ```text
/// −(1/sin φ)(sin φ f')' + (n + (m/2)(1 − cos φ))² / sin² φ · f
/// ```
///
/// on cell centres `φ_i = (i + ½)π/N`. Fluxes through the poles vanish
/// because `sin φ = 0` there. The weighted problem is symmetrised by
/// `g = √(sin φ) f`.
fn mode_matrix(m: i64, n: i64, cells: usize) -> Tridiagonal {
    let h = std::f64::consts::PI / cells as f64;
    let half = m as f64 / 2.0;
    let centre_sin: Vec<f64> = (0..cells).map(|i| ((i as f64 + 0.5) * h).sin()).collect();
    let face_sin = |i: usize| (i as f64 * h).sin(); // face between cells i-1 and i
    let mut diag = Vec::with_capacity(cells);
    let mut off = Vec::with_capacity(cells.saturating_sub(1));
    for i in 0..cells {
        let phi = (i as f64 + 0.5) * h;
        let s = centre_sin[i];
        let left = if i == 0 { 0.0 } else { face_sin(i) };
        let right = if i + 1 == cells { 0.0 } else { face_sin(i + 1) };
        let pot = (n as f64 + half * (1.0 - phi.cos())).powi(2) / (s * s);
        diag.push((left + right) / (h * h * s) + pot);
        if i + 1 < cells {
            off.push(-face_sin(i + 1) / (h * h * (s * centre_sin[i + 1]).sqrt()));
        }
    }
    Tridiagonal { diag, off }
}

/// Largest Kuwabara level with `l ≤ l_cut`, and the midpoint to the next
/// one, used as the oracle's eigenvalue cut-off.
fn oracle_cut(m: i64, l_cut: usize) -> f64 {
    let am = m.unsigned_abs() as usize;
    let j_top = if l_cut >= am { (l_cut - am) / 2 } else { 0 };
    let levels = kuwabara_eigenvalues(m, j_top + 1);
    0.5 * (levels[j_top].eigenvalue + levels[j_top + 1].eigenvalue)
}

fn oracle_at(m: i64, l_cut: usize, cells: usize, exec: Exec) -> Vec<f64> {
    let cut = oracle_cut(m, l_cut);
    let span = (l_cut + m.unsigned_abs() as usize + 2) as i64;
    let modes: Vec<i64> = (-span..=span).collect();
    let mut all: Vec<f64> =
        exec.map(&modes, |&n| mode_matrix(m, n, cells).eigenvalues_below(cut)).into_iter().flatten().collect();
    all.sort_by(f64::total_cmp);
    all
}

/// Lowest eigenvalues of `∇*∇` for charge `m`, all levels with `l ≤ l_cut`,
/// from the direct discretisation (with multiplicity, ascending). The
/// computation is repeated on a grid half as fine; if any eigenvalue moves by
/// more than 5% (or the counts disagree) the resolution is reported as too
/// low.
pub fn sphere_laplacian_oracle(m: i64, l_cut: usize) -> Result<Vec<f64>, SpectralError> {
    sphere_laplacian_oracle_with(m, l_cut, ORACLE_CELLS, Exec::default())
}

pub fn sphere_laplacian_oracle_with(m: i64, l_cut: usize, cells: usize, exec: Exec) -> Result<Vec<f64>, SpectralError> {
    if l_cut > 8 {
        return Err(SpectralError::CutTooLarge(l_cut));
    }
    let fine = oracle_at(m, l_cut, cells, exec);
    let coarse = oracle_at(m, l_cut, (cells / 2).max(4), exec);
    if fine.len() != coarse.len() {
        let value = fine.last().copied().unwrap_or(f64::NAN);
        return Err(SpectralError::ResolutionTooLow { value, change: f64::INFINITY });
    }
    for (f, c) in fine.iter().zip(&coarse) {
        let change = (f - c).abs();
        if change > 0.05 * f.abs().max(0.25) {
            return Err(SpectralError::ResolutionTooLow { value: *f, change });
        }
    }
    Ok(fine)
}

/// Groups ascending eigenvalues into clusters separated by a relative gap
/// larger than [`CLUSTER_GAP`]; returns `(mean, size)` per cluster.
pub fn clusters(values: &[f64]) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        let split = i == values.len() || {
            let (a, b) = (values[i - 1], values[i]);
            (b - a) > CLUSTER_GAP * a.abs().max(b.abs()).max(1.0)
        };
        if split {
            let group = &values[start..i];
            if !group.is_empty() {
                out.push((group.iter().sum::<f64>() / group.len() as f64, group.len()));
            }
            start = i;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kuwabara_examples() {
        let e = kuwabara_eigenvalues(0, 2);
        let got: Vec<_> = e.iter().map(|e| (e.l, e.eigenvalue, e.multiplicity)).collect();
        assert_eq!(got, vec![(0, 0.0, 1), (2, 2.0, 3), (4, 6.0, 5)]);
        assert_eq!(kuwabara_eigenvalues(2, 0)[0], KuwabaraEntry { l: 2, eigenvalue: 1.0, multiplicity: 3 });
        assert_eq!(kuwabara_eigenvalues(1, 0)[0], KuwabaraEntry { l: 1, eigenvalue: 0.5, multiplicity: 2 });
        assert_eq!(kuwabara_eigenvalues(-3, 4), kuwabara_eigenvalues(3, 4));
    }

    #[test]
    fn weight_examples() {
        let s = operator_l_spectrum(0, 0).entries[0];
        assert_eq!((s.lambda, s.gamma_plus, s.gamma_minus), (0.0, 0.0, -1.0));
        let s = operator_l_spectrum(1, 0).entries[0];
        assert_eq!((s.lambda, s.gamma_plus, s.gamma_minus), (0.75, 0.5, -1.5));
    }

    #[test]
    fn root_identities_are_exact() {
        for m in -6i64..=6 {
            for e in operator_l_spectrum(m, 20).entries {
                let am = m.unsigned_abs() as f64;
                assert_eq!(e.gamma_plus, e.j as f64 + am / 2.0);
                assert_eq!(e.gamma_minus, -(e.j as f64) - 1.0 - am / 2.0);
                assert_eq!(e.gamma_plus + e.gamma_minus, -1.0);
                assert_eq!(e.gamma_plus * e.gamma_minus, -e.lambda);
                assert_eq!(e.multiplicity, 2 * e.j + m.unsigned_abs() + 1);
                assert_eq!(e.gamma_plus, e.l as f64 / 2.0);
            }
        }
    }

    #[test]
    fn weight_free_interval_is_empty() {
        for m in 1i64..=6 {
            let (lo, hi) = weight_free_interval(m);
            let weights = operator_l_spectrum(m, 20).weights();
            assert!(weights.iter().all(|&w| w <= lo || w >= hi));
            for i in 1..200 {
                let d = lo + (hi - lo) * i as f64 / 200.0;
                assert!(!is_exceptional(d, m, 20).unwrap().exceptional);
            }
        }
    }

    #[test]
    fn exceptional_examples() {
        assert!(is_exceptional(0.0, 0, 5).unwrap().exceptional);
        assert!(is_exceptional(1.0, 2, 5).unwrap().exceptional);
        let c = is_exceptional(0.3, 1, 5).unwrap();
        assert!(!c.exceptional);
        assert_eq!(c.nearest, 0.5);
        assert!((c.distance - 0.2).abs() < 1e-15);
        assert!(matches!(is_exceptional(3.0, 0, 2), Err(SpectralError::InsufficientJMax { .. })));
    }

    #[test]
    fn sturm_count_on_a_known_matrix() {
        // tridiag(-1, 2, -1) of size n has eigenvalues 2 − 2cos(kπ/(n+1))
        let n = 50;
        let t = Tridiagonal { diag: vec![2.0; n], off: vec![-1.0; n - 1] };
        let ev = t.eigenvalues_below(0.5);
        for (k, e) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((e - exact).abs() < 1e-12);
        }
        assert_eq!(ev.len(), t.count_below(0.5));
    }

    #[test]
    fn oracle_matches_formula() {
        for m in 0..=3i64 {
            let values = sphere_laplacian_oracle(m, m as usize + 4).unwrap();
            let cl = clusters(&values);
            let formula = kuwabara_eigenvalues(m, 2);
            assert_eq!(cl.len(), 3, "m = {m}: {cl:?}");
            for ((mean, size), f) in cl.iter().zip(&formula) {
                let err = (mean - f.eigenvalue).abs() / f.eigenvalue.max(1.0);
                assert!(err <= 0.01, "m = {m}: {mean} vs {}", f.eigenvalue);
                assert_eq!(*size as u64, f.multiplicity, "m = {m}");
            }
        }
    }

    #[test]
    fn oracle_improves_under_refinement() {
        let exact = kuwabara_eigenvalues(1, 0)[0].eigenvalue;
        let coarse = sphere_laplacian_oracle_with(1, 1, 100, Exec::Sequential).unwrap()[0];
        let fine = sphere_laplacian_oracle_with(1, 1, 200, Exec::Sequential).unwrap()[0];
        assert!((fine - exact).abs() < (coarse - exact).abs());
    }

    #[test]
    fn oracle_reports_low_resolution() {
        assert!(matches!(
            sphere_laplacian_oracle_with(2, 8, 6, Exec::Sequential),
            Err(SpectralError::ResolutionTooLow { .. })
        ));
        assert!(matches!(sphere_laplacian_oracle(0, 9), Err(SpectralError::CutTooLarge(9))));
    }

    #[test]
    fn round_sphere_has_no_odd_levels() {
        // In this normalisation the uncharged spectrum is L(L+1) = l(l+2)/4
        // with l = 2L even; nothing sits at the odd-l values 3/4, 15/4.
        let values = sphere_laplacian_oracle(0, 4).unwrap();
        assert!(values.iter().all(|v| (v - 0.75).abs() > 0.1 && (v - 3.75).abs() > 0.1));
        assert_eq!(clusters(&values).iter().map(|c| c.1).collect::<Vec<_>>(), vec![1, 3, 5]);
    }

    #[test]
    fn tsv_layout() {
        let mut buf = Vec::new();
        operator_l_spectrum(1, 1).write_tsv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "j\tl\tlambda\tgamma+\tgamma-\tmult\n0\t1\t0.75\t0.5\t-1.5\t2\n1\t3\t3.75\t1.5\t-2.5\t4\n");
    }
}
