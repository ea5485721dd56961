//! Explicit realization of a split even central simple superalgebra as a
//! matrix superalgebra M_{n+m}(Delta) over a trivially graded division
//! algebra Delta, via a minimal graded left ideal and its commutant. The
//! resulting graded isomorphism lets witnesses built on the matrix model
//! (adjoints of hermitian superforms) be pulled back to the input algebra.

use crate::algebra::SuperAlgebra;
use crate::constructors::matrix_superalgebra;
use crate::error::{Error, Result};
use crate::fields::Scalar;
use crate::linalg::{span_rank, vec_add, vec_scale, Mat};
use crate::maps::GradedMap;

/// A graded isomorphism from an algebra onto M_{n+m}(Delta).
#[derive(Debug, Clone)]
pub struct SplitRealization {
    pub n: usize,
    pub m: usize,
    /// Trivially graded central division algebra (dim 1 or 4 here).
    pub delta: SuperAlgebra,
    pub target: SuperAlgebra,
    /// Coordinates map source -> target (column j = image of e_j).
    pub iso: Mat,
    pub iso_inv: Mat,
}

impl SplitRealization {
    /// Pulls a graded map on the target back to the source algebra.
    pub fn pull_back(&self, source: &SuperAlgebra, phi: &GradedMap) -> Result<GradedMap> {
        if phi.semilinear {
            return Err(Error::UnsupportedField);
        }
        let m = self.iso_inv.mul(&phi.matrix)?.mul(&self.iso)?;
        GradedMap::new(source, m, phi.parity, false)
    }

    /// Pushes a graded map on the source forward to the target algebra.
    pub fn push_forward(&self, phi: &GradedMap) -> Result<GradedMap> {
        if phi.semilinear {
            return Err(Error::UnsupportedField);
        }
        let m = self.iso.mul(&phi.matrix)?.mul(&self.iso_inv)?;
        GradedMap::new(&self.target, m, phi.parity, false)
    }
}

/// Parity of a homogeneous coordinate vector (None if mixed, Some(0) if
/// zero).
fn coords_parity(a: &SuperAlgebra, v: &[Scalar]) -> Option<u8> {
    let mut p: Option<u8> = None;
    for i in 0..a.dim {
        if v[i].is_zero() {
            continue;
        }
        match p {
            None => p = Some(a.parity[i]),
            Some(q) if q != a.parity[i] => return None,
            _ => {}
        }
    }
    Some(p.unwrap_or(0))
}

/// Basis of the left ideal A*x, as independent columns.
fn left_ideal_basis(a: &SuperAlgebra, x: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
    let rm = a.right_mult_matrix(x)?;
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    for j in 0..a.dim {
        let col = rm.column(j);
        let mut trial = basis.clone();
        trial.push(col.clone());
        if span_rank(&trial, a.dim, a.field)? > basis.len() {
            basis.push(col);
        }
    }
    Ok(basis)
}

/// Replaces a spanning set of a graded subspace by a homogeneous basis,
/// even vectors first.
fn homogeneous_basis(
    a: &SuperAlgebra,
    spanning: &[Vec<Scalar>],
) -> Result<(Vec<Vec<Scalar>>, Vec<u8>)> {
    let mut parts: Vec<(Vec<Scalar>, u8)> = Vec::new();
    for v in spanning {
        for t in [0u8, 1] {
            let mut p = vec![a.field.zero(); a.dim];
            let mut nonzero = false;
            for i in 0..a.dim {
                if a.parity[i] == t && !v[i].is_zero() {
                    p[i] = v[i].clone();
                    nonzero = true;
                }
            }
            if nonzero {
                parts.push((p, t));
            }
        }
    }
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    let mut parities: Vec<u8> = Vec::new();
    for t in [0u8, 1] {
        for (p, pt) in &parts {
            if *pt != t {
                continue;
            }
            let mut trial = basis.clone();
            trial.push(p.clone());
            if span_rank(&trial, a.dim, a.field)? > basis.len() {
                basis.push(p.clone());
                parities.push(t);
            }
        }
    }
    Ok((basis, parities))
}

/// Searches a minimal graded left ideal of a graded simple algebra by
/// iteratively shrinking A*x over homogeneous candidates.
fn minimal_graded_left_ideal(a: &SuperAlgebra) -> Result<(Vec<Vec<Scalar>>, Vec<u8>)> {
    // Seed: the smallest nonzero A*e_i.
    let mut best: Option<Vec<Vec<Scalar>>> = None;
    for i in 0..a.dim {
        let ideal = left_ideal_basis(a, &a.basis_coords(i))?;
        if !ideal.is_empty() && best.as_ref().is_none_or(|b| ideal.len() < b.len()) {
            best = Some(ideal);
        }
    }
    let mut current = best.ok_or(Error::EmptyShape)?;
    // Shrink: look for homogeneous z in the ideal with 0 < dim(Az) < dim.
    let mut lcg: u64 = 0x9e3779b97f4a7c15;
    'outer: loop {
        let (hbasis, _) = homogeneous_basis(a, &current)?;
        let mut candidates: Vec<Vec<Scalar>> = hbasis.clone();
        for i in 0..hbasis.len() {
            for j in (i + 1)..hbasis.len() {
                if coords_parity(a, &hbasis[i]) == coords_parity(a, &hbasis[j])
                {
                    candidates.push(vec_add(&hbasis[i], &hbasis[j])?);
                    candidates.push(vec_add(
                        &hbasis[i],
                        &vec_scale(&a.field.one().neg(), &hbasis[j])?,
                    )?);
                }
            }
        }
        // A bounded batch of deterministic pseudo-random homogeneous
        // combinations, in case no sparse candidate shrinks the ideal.
        for _ in 0..32 {
            for t in [0u8, 1] {
                let mut v = vec![a.field.zero(); a.dim];
                for h in &hbasis {
                    if coords_parity(a, h) != Some(t) {
                        continue;
                    }
                    lcg = lcg.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let c = ((lcg >> 33) % 5) as i64 - 2;
                    if c != 0 {
                        v = vec_add(&v, &vec_scale(&a.field.from_int(c), h)?)?;
                    }
                }
                if !v.iter().all(|c| c.is_zero()) {
                    candidates.push(v);
                }
            }
        }
        for z in &candidates {
            let ideal = left_ideal_basis(a, z)?;
            if !ideal.is_empty() && ideal.len() < current.len() {
                current = ideal;
                continue 'outer;
            }
        }
        break;
    }
    homogeneous_basis(a, &current)
}

/// Coordinates of ambient vectors relative to a basis given by columns.
fn coords_in_basis(basis: &[Vec<Scalar>], v: &[Scalar], a: &SuperAlgebra) -> Result<Vec<Scalar>> {
    let mut b = Mat::zeros(a.dim, basis.len(), a.field);
    for (j, col) in basis.iter().enumerate() {
        b.set_column(j, col);
    }
    b.solve(v)?
        .ok_or_else(|| Error::Internal("vector not in ideal".into()))
}

/// Realizes a split even (or trivially graded) graded simple algebra with
/// graded center F as M_{n+m}(Delta), Delta a trivially graded division
/// algebra. Fails with Unsupported when the commutant is not trivially
/// graded or the module basis search does not complete.
pub fn realize_matrix_form(a: &SuperAlgebra) -> Result<SplitRealization> {
    let (ibasis, iparity) = minimal_graded_left_ideal(a)?;
    let k = ibasis.len();
    // Left action of each algebra basis element on the ideal, in ideal
    // coordinates.
    let mut action: Vec<Mat> = Vec::with_capacity(a.dim);
    for i in 0..a.dim {
        let mut m = Mat::zeros(k, k, a.field);
        for (j, col) in ibasis.iter().enumerate() {
            let w = a.mul_coords(&a.basis_coords(i), col)?;
            m.set_column(j, &coords_in_basis(&ibasis, &w, a)?);
        }
        action.push(m);
    }
    // Commutant: operators X with X * action_i = action_i * X for all i.
    let mut sys = Mat::zeros(a.dim * k * k, k * k, a.field);
    for (i, act) in action.iter().enumerate() {
        for r in 0..k {
            for c in 0..k {
                // Row for entry (r,c) of X*act - act*X; unknown X_{pq} at
                // column p*k+q.
                for q in 0..k {
                    // X_{rq} * act_{qc}
                    let cur = sys.get(i * k * k + r * k + c, r * k + q).clone();
                    sys.set(
                        i * k * k + r * k + c,
                        r * k + q,
                        cur.add(act.get(q, c))?,
                    );
                }
                for p in 0..k {
                    // -act_{rp} * X_{pc}
                    let cur = sys.get(i * k * k + r * k + c, p * k + c).clone();
                    sys.set(
                        i * k * k + r * k + c,
                        p * k + c,
                        cur.add(&act.get(r, p).neg())?,
                    );
                }
            }
        }
    }
    // Homogeneous operator basis of the commutant.
    let mut ops: Vec<Vec<Scalar>> = Vec::new();
    for x in sys.nullspace()? {
        for s in [0u8, 1] {
            let mut part = vec![a.field.zero(); k * k];
            let mut nonzero = false;
            for r in 0..k {
                for c in 0..k {
                    if iparity[r] == iparity[c] ^ s && !x[r * k + c].is_zero() {
                        part[r * k + c] = x[r * k + c].clone();
                        nonzero = true;
                    }
                }
            }
            if !nonzero {
                continue;
            }
            if s == 1 {
                // A graded-division commutant with odd part does not fit
                // the trivially graded matrix model.
                return Err(Error::UnsupportedCenterFactorization);
            }
            let mut trial = ops.clone();
            trial.push(part.clone());
            if span_rank(&trial, k * k, a.field)? > ops.len() {
                ops.push(part);
            }
        }
    }
    let l = ops.len();
    if l == 0 || k % l != 0 || a.dim != k * k / l {
        return Err(Error::UnsupportedCenterFactorization);
    }
    // Abstract Delta from operator composition (matrix product in k x k).
    let op_mat = |v: &[Scalar]| -> Mat {
        let mut m = Mat::zeros(k, k, a.field);
        for r in 0..k {
            for c in 0..k {
                m.set(r, c, v[r * k + c].clone());
            }
        }
        m
    };
    let mut opbase = Mat::zeros(k * k, l, a.field);
    for (j, op) in ops.iter().enumerate() {
        opbase.set_column(j, op);
    }
    let expand_op = |m: &Mat| -> Result<Vec<Scalar>> {
        let flat: Vec<Scalar> = (0..k)
            .flat_map(|r| (0..k).map(move |c| m.get(r, c).clone()))
            .collect();
        opbase
            .solve(&flat)?
            .ok_or_else(|| Error::Internal("operator not in commutant".into()))
    };
    let mut constants = vec![vec![vec![a.field.zero(); l]; l]; l];
    // Delta is the opposite of the commutant: expanding (ab)v_s composes
    // the coefficient operators in reversed order.
    for s in 0..l {
        for t in 0..l {
            let prod = op_mat(&ops[t]).mul(&op_mat(&ops[s]))?;
            constants[s][t] = expand_op(&prod)?;
        }
    }
    let unit = expand_op(&Mat::identity(k, a.field))?;
    let delta = SuperAlgebra::new(a.field, vec![0; l], constants, unit, None)?;
    // Delta-module basis of the ideal: homogeneous vectors v with
    // {D_t v} jointly independent, even ones first.
    let size = k / l;
    let mut chosen: Vec<(usize, u8)> = Vec::new(); // (ideal basis index, parity)
    let mut stacked: Vec<Vec<Scalar>> = Vec::new();
    for t in [0u8, 1] {
        for (idx, &p) in iparity.iter().enumerate() {
            if p != t || chosen.len() == size {
                continue;
            }
            let mut v = vec![a.field.zero(); k];
            v[idx] = a.field.one();
            let mut trial = stacked.clone();
            for op in &ops {
                trial.push(op_mat(op).mat_vec(&v)?);
            }
            if span_rank(&trial, k, a.field)? == stacked.len() + l {
                stacked = trial;
                chosen.push((idx, t));
            }
        }
    }
    if chosen.len() != size {
        return Err(Error::UnsupportedCenterFactorization);
    }
    let n = chosen.iter().filter(|(_, t)| *t == 0).count();
    let m = size - n;
    let target = matrix_superalgebra(n, m, &delta)?;
    // Expansion basis {D_t v_r}, column order (r, t).
    let mut modbase = Mat::zeros(k, size * l, a.field);
    for (r, (idx, _)) in chosen.iter().enumerate() {
        let mut v = vec![a.field.zero(); k];
        v[*idx] = a.field.one();
        for (t, op) in ops.iter().enumerate() {
            modbase.set_column(r * l + t, &op_mat(op).mat_vec(&v)?);
        }
    }
    // iso column i: expand e_i * v_s over {D_t v_r}; entry delta_{rs} goes
    // to target index ((r*size+s)*l + t).
    let mut iso = Mat::zeros(target.dim, a.dim, a.field);
    for i in 0..a.dim {
        let mut col = vec![a.field.zero(); target.dim];
        for (s, (idx, _)) in chosen.iter().enumerate() {
            let mut v = vec![a.field.zero(); k];
            v[*idx] = a.field.one();
            let w = action[i].mat_vec(&v)?;
            let coeffs = modbase
                .solve(&w)?
                .ok_or_else(|| Error::Internal("module expansion failed".into()))?;
            for r in 0..size {
                for t in 0..l {
                    col[(r * size + s) * l + t] = coeffs[r * l + t].clone();
                }
            }
        }
        iso.set_column(i, &col);
    }
    let iso_inv = iso
        .inverse()?
        .ok_or(Error::UnsupportedCenterFactorization)?;
    // Verify: graded algebra isomorphism.
    if iso.mat_vec(&a.unit)? != target.unit {
        return Err(Error::Internal("realization does not fix the unit".into()));
    }
    for i in 0..a.dim {
        for j in 0..a.dim {
            let lhs = iso.mat_vec(&a.constants[i][j])?;
            let rhs = target.mul_coords(
                &iso.mat_vec(&a.basis_coords(i))?,
                &iso.mat_vec(&a.basis_coords(j))?,
            )?;
            if lhs != rhs {
                return Err(Error::Internal("realization is not a homomorphism".into()));
            }
        }
    }
    for j in 0..a.dim {
        for i in 0..target.dim {
            if !iso.get(i, j).is_zero() && target.parity[i] != a.parity[j] {
                return Err(Error::Internal("realization is not graded".into()));
            }
        }
    }
    Ok(SplitRealization {
        n,
        m,
        delta,
        target,
        iso,
        iso_inv,
    })
}

/// The canonical symmetric trace involution x -> trd(x) - x on a
/// 4-dimensional central simple algebra (quaternion conjugation),
/// computed basis-free from the regular trace.
pub fn quaternion_standard_involution(d: &SuperAlgebra) -> Result<GradedMap> {
    if d.dim != 4 || !d.odd_indices().is_empty() {
        return Err(Error::UnsupportedDimension);
    }
    let mut m = Mat::zeros(4, 4, d.field);
    let half = d.field.from_int(2).inv()?;
    for j in 0..4 {
        let tr = d.left_mult_matrix(&d.basis_coords(j))?.trace()?;
        let trd = tr.mul(&half)?;
        let mut col: Vec<Scalar> = d.basis_coords(j).iter().map(|c| c.neg()).collect();
        for (i, u) in d.unit.iter().enumerate() {
            col[i] = col[i].add(&trd.mul(u)?)?;
        }
        m.set_column(j, &col);
    }
    GradedMap::new(d, m, 0, false)
}

/// An invertible trace-zero element of a 4-dimensional algebra: a skew
/// element of the standard involution.
pub fn quaternion_skew_unit(d: &SuperAlgebra) -> Result<crate::algebra::Element> {
    let conj = quaternion_standard_involution(d)?;
    let mut candidates: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..4 {
        candidates.push(d.basis_coords(i));
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            candidates.push(vec_add(&d.basis_coords(i), &d.basis_coords(j))?);
        }
    }
    for c in candidates {
        // Skew part: (x - conj(x)) / 2.
        let cx = conj.apply_coords(&c)?;
        let half = d.field.from_int(2).inv()?;
        let mut skew = vec![d.field.zero(); 4];
        for i in 0..4 {
            skew[i] = c[i].add(&cx[i].neg())?.mul(&half)?;
        }
        let e = d.element(skew)?;
        if e.is_zero() {
            continue;
        }
        if d.invert_homogeneous(&e)?.is_some() {
            return Ok(e);
        }
    }
    Err(Error::NotInvertible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::*;
    use crate::fields::{q, FieldDescriptor};

    fn qq() -> FieldDescriptor {
        FieldDescriptor::Rationals
    }

    #[test]
    fn realize_matrix_superalgebra_is_isomorphism() {
        for (n, m) in [(1usize, 1usize), (2, 1), (2, 2)] {
            let a = matrix_superalgebra(n, m, &base_field(qq()).unwrap()).unwrap();
            let r = realize_matrix_form(&a).unwrap();
            assert_eq!((r.n, r.m), (n, m));
            assert_eq!(r.delta.dim, 1);
        }
    }

    #[test]
    fn realize_split_clifford() {
        // C(<1,-1>) is split even of dimension 4: M_{1+1}(Q).
        let c = clifford(&[q(1, 1), q(-1, 1)]).unwrap();
        let r = realize_matrix_form(&c).unwrap();
        assert_eq!(r.delta.dim, 1);
        assert_eq!((r.n, r.m), (1, 1));
    }

    #[test]
    fn realize_quaternionic_clifford() {
        // C(<-1,-1,-1,-1>) has even part with quaternionic factors; the
        // matrix model has a 4-dimensional division coefficient algebra.
        let c = clifford(&[q(-1, 1), q(-1, 1), q(-1, 1), q(-1, 1)]).unwrap();
        let report = c.classify_css().unwrap();
        assert!(report.is_central && report.is_graded_simple);
        let r = realize_matrix_form(&c).unwrap();
        assert_eq!(r.delta.dim, 4);
        assert_eq!(r.n + r.m, 2);
        // Delta is division: its trace-zero units exist and the standard
        // involution is an antiautomorphism of the ungraded algebra.
        let conj = quaternion_standard_involution(&r.delta).unwrap();
        assert!(crate::maps::is_superantiautomorphism(&r.delta, &conj).unwrap());
        assert!(conj.square().unwrap().is_identity());
        let d = quaternion_skew_unit(&r.delta).unwrap();
        assert_eq!(conj.apply(&d).unwrap(), d.neg());
    }

    #[test]
    fn realize_rejects_nonsplit_quaternion() {
        // <-1,-1> over Q is a graded division algebra: its minimal graded
        // left ideal is the whole algebra and the commutant has odd part.
        let g = graded_quaternion(q(-1, 1), q(-1, 1)).unwrap();
        assert!(realize_matrix_form(&g).is_err());
    }

    #[test]
    fn realize_tensor_of_quadratics() {
        // <1,1> over GF(5) is split: (uv)^2 = -1 = 4, a square mod 5.
        let f = FieldDescriptor::PrimeField(5);
        let a = graded_quaternion(f.from_int(1), f.from_int(1)).unwrap();
        let r = realize_matrix_form(&a).unwrap();
        assert_eq!(r.delta.dim, 1);
        assert_eq!((r.n, r.m), (1, 1));
    }
}
