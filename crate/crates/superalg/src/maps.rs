//! Graded linear maps and their axiom checkers: superantiautomorphisms,
//! superinvolutions, the grading automorphism, signed inner automorphisms
//! and the constructive graded Skolem-Noether solver, plus hermitian
//! superforms over division superalgebras and their adjoint
//! superinvolutions.

use crate::algebra::{Element, SuperAlgebra};
use crate::constructors::matrix_superalgebra;
use crate::error::{Error, Result};
use crate::fields::{FieldDescriptor, Scalar};
use crate::linalg::Mat;

/// A graded additive map A -> A: column j of `matrix` is the image of e_j.
/// `parity` is the degree shift; `semilinear` maps apply Galois conjugation
/// to coordinates first (only over quadratic extensions).
#[derive(Debug, Clone, PartialEq)]
pub struct GradedMap {
    pub matrix: Mat,
    pub parity: u8,
    pub semilinear: bool,
}

impl GradedMap {
    pub fn new(a: &SuperAlgebra, matrix: Mat, parity: u8, semilinear: bool) -> Result<GradedMap> {
        if matrix.rows != a.dim || matrix.cols != a.dim {
            return Err(Error::DimMismatch);
        }
        if semilinear && !matches!(a.field, FieldDescriptor::QuadraticRational(_)) {
            return Err(Error::NotAQuadraticExtension);
        }
        for j in 0..a.dim {
            for i in 0..a.dim {
                if !matrix.get(i, j).is_zero() && a.parity[i] != a.parity[j] ^ parity {
                    return Err(Error::NotHomogeneous);
                }
            }
        }
        Ok(GradedMap {
            matrix,
            parity,
            semilinear,
        })
    }

    pub fn identity(a: &SuperAlgebra) -> GradedMap {
        GradedMap {
            matrix: Mat::identity(a.dim, a.field),
            parity: 0,
            semilinear: false,
        }
    }

    pub fn apply_coords(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        let x = if self.semilinear {
            x.iter().map(|c| c.conj()).collect::<Result<Vec<_>>>()?
        } else {
            x.to_vec()
        };
        self.matrix.mat_vec(&x)
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        Ok(Element {
            parent: x.parent.clone(),
            coords: self.apply_coords(&x.coords)?,
        })
    }

    /// (self o other)(x) = self(other(x)).
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.matrix.cols != other.matrix.rows {
            return Err(Error::DimMismatch);
        }
        let inner = if self.semilinear {
            other.matrix.conj()?
        } else {
            other.matrix.clone()
        };
        Ok(GradedMap {
            matrix: self.matrix.mul(&inner)?,
            parity: self.parity ^ other.parity,
            semilinear: self.semilinear ^ other.semilinear,
        })
    }

    pub fn square(&self) -> Result<GradedMap> {
        self.compose(self)
    }

    pub fn is_bijective(&self) -> Result<bool> {
        Ok(self.matrix.inverse()?.is_some())
    }

    pub fn inverse(&self) -> Result<Option<GradedMap>> {
        let Some(inv) = self.matrix.inverse()? else {
            return Ok(None);
        };
        // For semilinear phi, phi^-1(y) = M^-1 conj(y) requires the
        // conjugated inverse matrix: phi^-1 = conj-linear with matrix
        // conj(M^-1)... check: phi(x) = M conj(x) = y => conj(x) = M^-1 y
        // => x = conj(M^-1) conj(y).
        let matrix = if self.semilinear { inv.conj()? } else { inv };
        Ok(Some(GradedMap {
            matrix,
            parity: self.parity,
            semilinear: self.semilinear,
        }))
    }

    pub fn is_identity(&self) -> bool {
        !self.semilinear && self.parity == 0 && self.matrix.is_identity()
    }
}

/// First basis pair violating the sign rule, if any.
pub type Violation = (usize, usize);

/// Checks phi(xy) = (-1)^{|x||y|} phi(y) phi(x) on all basis pairs and
/// phi(1) = 1; Ok(None) means phi is a superantiautomorphism.
pub fn superantiautomorphism_violation(
    a: &SuperAlgebra,
    phi: &GradedMap,
) -> Result<Option<Violation>> {
    if phi.parity != 0 {
        return Err(Error::NotBijective);
    }
    if !phi.is_bijective()? {
        return Err(Error::NotBijective);
    }
    if phi.apply_coords(&a.unit)? != a.unit {
        return Ok(Some((0, 0)));
    }
    for i in 0..a.dim {
        let phi_i = phi.apply_coords(&a.basis_coords(i))?;
        for j in 0..a.dim {
            let phi_j = phi.apply_coords(&a.basis_coords(j))?;
            let lhs = phi.apply_coords(&a.constants[i][j])?;
            let mut rhs = a.mul_coords(&phi_j, &phi_i)?;
            if a.parity[i] == 1 && a.parity[j] == 1 {
                rhs = rhs.iter().map(|c| c.neg()).collect();
            }
            if lhs != rhs {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

pub fn is_superantiautomorphism(a: &SuperAlgebra, phi: &GradedMap) -> Result<bool> {
    Ok(superantiautomorphism_violation(a, phi)?.is_none())
}

pub fn is_superinvolution(a: &SuperAlgebra, phi: &GradedMap) -> Result<bool> {
    Ok(is_superantiautomorphism(a, phi)? && phi.square()?.is_identity())
}

/// Checks phi(xy) = phi(x) phi(y) on all basis pairs, phi(1) = 1, bijective.
pub fn is_graded_automorphism(a: &SuperAlgebra, phi: &GradedMap) -> Result<bool> {
    if phi.parity != 0 || !phi.is_bijective()? {
        return Ok(false);
    }
    if phi.apply_coords(&a.unit)? != a.unit {
        return Ok(false);
    }
    for i in 0..a.dim {
        let phi_i = phi.apply_coords(&a.basis_coords(i))?;
        for j in 0..a.dim {
            let phi_j = phi.apply_coords(&a.basis_coords(j))?;
            let lhs = phi.apply_coords(&a.constants[i][j])?;
            if lhs != a.mul_coords(&phi_i, &phi_j)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// nu: identity on the even part, negation on the odd part.
pub fn grading_automorphism(a: &SuperAlgebra) -> GradedMap {
    let mut m = Mat::zeros(a.dim, a.dim, a.field);
    for i in 0..a.dim {
        let v = if a.parity[i] == 1 {
            a.field.one().neg()
        } else {
            a.field.one()
        };
        m.set(i, i, v);
    }
    GradedMap {
        matrix: m,
        parity: 0,
        semilinear: false,
    }
}

/// The signed inner automorphism iota_a(x) = (-1)^{|a||x|} a x a^-1.
pub fn inner_automorphism(a: &SuperAlgebra, elt: &Element) -> Result<GradedMap> {
    let Some(pa) = elt.parity()? else {
        return Err(Error::NotHomogeneous);
    };
    let Some(inv) = a.invert_homogeneous(elt)? else {
        return Err(Error::NotInvertible);
    };
    let mut m = Mat::zeros(a.dim, a.dim, a.field);
    for j in 0..a.dim {
        let mut col = a.mul_coords(
            &a.mul_coords(&elt.coords, &a.basis_coords(j))?,
            &inv.coords,
        )?;
        if pa == 1 && a.parity[j] == 1 {
            col = col.iter().map(|c| c.neg()).collect();
        }
        m.set_column(j, &col);
    }
    GradedMap::new(a, m, 0, false)
}

/// Constructive graded Skolem-Noether: finds a homogeneous invertible a
/// with phi = iota_a, normalized so the first nonzero coordinate is 1.
pub fn solve_inner(a: &SuperAlgebra, phi: &GradedMap) -> Result<Element> {
    if !is_graded_automorphism(a, phi)? {
        return Err(Error::NotInner);
    }
    for t in [0u8, 1] {
        let support: Vec<usize> = (0..a.dim).filter(|&i| a.parity[i] == t).collect();
        if support.is_empty() {
            continue;
        }
        // phi(e_j) a - (-1)^{t p_j} a e_j = 0 for all j.
        let mut sys = Mat::zeros(a.dim * a.dim, support.len(), a.field);
        for j in 0..a.dim {
            let phi_j = phi.apply_coords(&a.basis_coords(j))?;
            let lm = a.right_mult_matrix(&a.basis_coords(j))?; // col i: e_i e_j
            for (col, &i) in support.iter().enumerate() {
                // coefficient of unknown a_i in phi(e_j) e_i - sign e_i e_j
                let left = a.mul_coords(&phi_j, &a.basis_coords(i))?;
                for k in 0..a.dim {
                    let mut rhs = lm.get(k, i).clone();
                    if !(t == 1 && a.parity[j] == 1) {
                        rhs = rhs.neg();
                    }
                    sys.set(j * a.dim + k, col, left[k].add(&rhs)?);
                }
            }
        }
        for v in sys.nullspace()? {
            let mut full = vec![a.field.zero(); a.dim];
            for (col, &i) in support.iter().enumerate() {
                full[i] = v[col].clone();
            }
            let cand = a.element(full)?;
            if cand.is_zero() {
                continue;
            }
            if let Some(_inv) = a.invert_homogeneous(&cand)? {
                // Normalize: leading coordinate 1.
                let lead = cand.coords.iter().find(|c| !c.is_zero()).unwrap().clone();
                return cand.scale(&lead.inv()?);
            }
        }
    }
    Err(Error::NotInner)
}

/// The block superantiautomorphism of M_{n+m}(F):
/// (a, b; c, d) |-> (a^t, -c^t; b^t, d^t). Its square is the grading
/// automorphism, so it is a superinvolution only when m = 0.
pub fn split_superantiautomorphism(
    n: usize,
    m: usize,
    field: FieldDescriptor,
) -> Result<(SuperAlgebra, GradedMap)> {
    use crate::constructors::base_field;
    let a = matrix_superalgebra(n, m, &base_field(field)?)?;
    let size = n + m;
    let mut mat = Mat::zeros(a.dim, a.dim, field);
    for r in 0..size {
        for s in 0..size {
            let v = if r >= n && s < n {
                field.one().neg()
            } else {
                field.one()
            };
            mat.set(s * size + r, r * size + s, v);
        }
    }
    let map = GradedMap::new(&a, mat, 0, false)?;
    Ok((a, map))
}

/// A nondegenerate epsilon-hermitian superform of degree ell on a free
/// graded module over a division superalgebra with involution.
#[derive(Debug, Clone)]
pub struct HermitianSuperform {
    pub delta: SuperAlgebra,
    pub involution: GradedMap,
    /// (dim V_0, dim V_1): the first n basis vectors are even.
    pub dims: (usize, usize),
    pub eps: i8,
    pub ell: u8,
    /// gram[i][j] = h(x_i, x_j) in Delta.
    pub gram: Vec<Vec<Element>>,
}

impl HermitianSuperform {
    pub fn new(
        delta: SuperAlgebra,
        involution: GradedMap,
        dims: (usize, usize),
        eps: i8,
        ell: u8,
        gram: Vec<Vec<Element>>,
    ) -> Result<HermitianSuperform> {
        let size = dims.0 + dims.1;
        if size == 0 {
            return Err(Error::EmptyShape);
        }
        if eps != 1 && eps != -1 || ell > 1 {
            return Err(Error::Degenerate);
        }
        if gram.len() != size || gram.iter().any(|r| r.len() != size) {
            return Err(Error::DimMismatch);
        }
        let form = HermitianSuperform {
            delta,
            involution,
            dims,
            eps,
            ell,
            gram,
        };
        // Entry parities: h(x_i, x_j) in Delta_{p_i + p_j + ell}.
        for i in 0..size {
            for j in 0..size {
                let want = form.vec_parity(i) ^ form.vec_parity(j) ^ form.ell;
                let e = &form.gram[i][j];
                if !e.parent.same_parent(&form.delta) {
                    return Err(Error::ParentMismatch);
                }
                if !e.is_zero() && e.parity()? != Some(want) {
                    return Err(Error::NotHomogeneous);
                }
            }
        }
        // eps-hermitian symmetry: h(j,i) = eps (-1)^{p_i p_j} conj(h(i,j)).
        for i in 0..size {
            for j in 0..size {
                let mut rhs = form.involution.apply(&form.gram[i][j])?;
                let negate =
                    (form.eps == -1) ^ (form.vec_parity(i) == 1 && form.vec_parity(j) == 1);
                if negate {
                    rhs = rhs.neg();
                }
                if form.gram[j][i] != rhs {
                    return Err(Error::Degenerate);
                }
            }
        }
        // Nondegeneracy is checked in adjoint_superinvolution (Gram
        // invertible in the endomorphism algebra).
        Ok(form)
    }

    pub fn vec_parity(&self, i: usize) -> u8 {
        u8::from(i >= self.dims.0)
    }

    pub fn size(&self) -> usize {
        self.dims.0 + self.dims.1
    }

    /// End_Delta(V) = M_{n+m}(Delta) with the inherited grading.
    pub fn endomorphism_algebra(&self) -> Result<SuperAlgebra> {
        matrix_superalgebra(self.dims.0, self.dims.1, &self.delta)
    }

    /// Coordinates in End of the Delta-matrix with entries m[i][j].
    fn end_coords(&self, end: &SuperAlgebra, m: &[Vec<Element>]) -> Result<Vec<Scalar>> {
        let size = self.size();
        let dd = self.delta.dim;
        let mut out = vec![end.field.zero(); end.dim];
        for i in 0..size {
            for j in 0..size {
                for t in 0..dd {
                    out[(i * size + j) * dd + t] = m[i][j].coords[t].clone();
                }
            }
        }
        Ok(out)
    }

    fn end_entry(&self, coords: &[Scalar], i: usize, j: usize) -> Result<Element> {
        let size = self.size();
        let dd = self.delta.dim;
        let slice = coords[(i * size + j) * dd..(i * size + j) * dd + dd].to_vec();
        self.delta.element(slice)
    }

    /// h(x_i, v) for a module vector v = sum_k v_k x_k (v_k in Delta):
    /// via symmetry, h(x_i, v) = eps (-1)^{p_i |v|} conj(sum_k v_k G_{ki}).
    pub fn pair_basis_with(&self, i: usize, v: &[Element], v_parity: u8) -> Result<Element> {
        let mut s = self.delta.zero_element();
        for (k, vk) in v.iter().enumerate() {
            s = s.add(&vk.mul(&self.gram[k][i])?)?;
        }
        let mut out = self.involution.apply(&s)?;
        if self.eps == -1 {
            out = out.neg();
        }
        if self.vec_parity(i) == 1 && v_parity == 1 {
            out = out.neg();
        }
        Ok(out)
    }

    /// The rank-one endomorphism a |-> h(a, v) w as a Delta-matrix:
    /// row i is h(x_i, v) * w.
    pub fn rank_one_map(
        &self,
        v: &[Element],
        v_parity: u8,
        w: &[Element],
    ) -> Result<Vec<Vec<Element>>> {
        let size = self.size();
        let mut out = Vec::with_capacity(size);
        for i in 0..size {
            let hv = self.pair_basis_with(i, v, v_parity)?;
            let mut row = Vec::with_capacity(size);
            for wj in w {
                row.push(hv.mul(wj)?);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Builds End_Delta(V) and the adjoint map f |-> f* determined by
    /// h(xf, y) = (-1)^{|f||x|} h(x, y f*); the result is asserted to be a
    /// superinvolution (or a square-nu superantiautomorphism when the data
    /// only supports that).
    pub fn adjoint_map(&self) -> Result<(SuperAlgebra, GradedMap)> {
        let end = self.endomorphism_algebra()?;
        let size = self.size();
        let g = self.end_coords(&end, &self.gram)?;
        let g_elt = end.element(g.clone())?;
        // Invert G inside End (as an F-algebra element).
        let lm = end.left_mult_matrix(&g)?;
        let Some(ginv) = lm.solve(&end.unit)? else {
            return Err(Error::Degenerate);
        };
        if end.mul_coords(&ginv, &g)? != end.unit {
            return Err(Error::Degenerate);
        }
        let _ = g_elt;
        // For each basis endomorphism f: F* = H G^-1 with
        // H_{ji} = eps (-1)^{p_i p_j} conj((F G)_{ij}).
        let mut m = Mat::zeros(end.dim, end.dim, end.field);
        for col in 0..end.dim {
            let f = end.basis_coords(col);
            let fg = end.mul_coords(&f, &g)?;
            let mut h = vec![end.field.zero(); end.dim];
            for i in 0..size {
                for j in 0..size {
                    let mut e = self.involution.apply(&self.end_entry(&fg, i, j)?)?;
                    let negate = (self.eps == -1)
                        ^ (self.vec_parity(i) == 1 && self.vec_parity(j) == 1);
                    if negate {
                        e = e.neg();
                    }
                    for t in 0..self.delta.dim {
                        h[(j * size + i) * self.delta.dim + t] = e.coords[t].clone();
                    }
                }
            }
            let fstar = end.mul_coords(&h, &ginv)?;
            m.set_column(col, &fstar);
        }
        let map = GradedMap::new(&end, m, 0, false)?;
        Ok((end, map))
    }

    /// Adjoint map, required to be a superinvolution.
    pub fn adjoint_superinvolution(&self) -> Result<(SuperAlgebra, GradedMap)> {
        let (end, map) = self.adjoint_map()?;
        if !is_superinvolution(&end, &map)? {
            return Err(Error::Degenerate);
        }
        Ok((end, map))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::*;
    use crate::fields::q;

    fn qq() -> FieldDescriptor {
        FieldDescriptor::Rationals
    }

    fn m11() -> SuperAlgebra {
        matrix_superalgebra(1, 1, &base_field(qq()).unwrap()).unwrap()
    }

    /// tau on M_{1+1}: (a,b;c,d) -> (d,-b;c,a). Basis order E11,E12,E21,E22.
    fn tau_m11(a: &SuperAlgebra) -> GradedMap {
        let mut m = Mat::zeros(4, 4, qq());
        m.set(3, 0, q(1, 1)); // E11 -> E22
        m.set(1, 1, q(-1, 1)); // E12 -> -E12
        m.set(2, 2, q(1, 1)); // E21 -> E21
        m.set(0, 3, q(1, 1)); // E22 -> E11
        GradedMap::new(a, m, 0, false).unwrap()
    }

    #[test]
    fn tau_is_superinvolution() {
        let a = m11();
        let tau = tau_m11(&a);
        assert!(is_superantiautomorphism(&a, &tau).unwrap());
        assert!(is_superinvolution(&a, &tau).unwrap());
    }

    #[test]
    fn nu_is_not_anti() {
        let a = m11();
        let nu = grading_automorphism(&a);
        assert!(is_graded_automorphism(&a, &nu).unwrap());
        assert!(superantiautomorphism_violation(&a, &nu)
            .unwrap()
            .is_some());
        assert!(nu.square().unwrap().is_identity());
    }

    #[test]
    fn quadratic_sigma_with_s_squared_minus_one() {
        // Over GF(5), s = 2 has s^2 = -1; sigma(u) = su is a
        // superantiautomorphism of F<sqrt a> but never a superinvolution.
        let f = FieldDescriptor::PrimeField(5);
        let a = quadratic_graded(f.from_int(3)).unwrap();
        let mut m = Mat::identity(2, f);
        m.set(1, 1, f.from_int(2));
        let sigma = GradedMap::new(&a, m, 0, false).unwrap();
        assert!(is_superantiautomorphism(&a, &sigma).unwrap());
        assert!(!is_superinvolution(&a, &sigma).unwrap());
    }

    #[test]
    fn inner_automorphism_examples() {
        let a = m11();
        let id = inner_automorphism(&a, &a.unit_element()).unwrap();
        assert!(id.is_identity());
        // iota_z = nu for z = diag(1, -1).
        let z = a
            .element(vec![q(1, 1), q(0, 1), q(0, 1), q(-1, 1)])
            .unwrap();
        let iz = inner_automorphism(&a, &z).unwrap();
        assert_eq!(iz, grading_automorphism(&a));
        // iota_u = nu on F<sqrt a> for odd u.
        let b = quadratic_graded(q(2, 1)).unwrap();
        let iu = inner_automorphism(&b, &b.basis_element(1)).unwrap();
        assert_eq!(iu, grading_automorphism(&b));
    }

    #[test]
    fn solve_inner_roundtrip() {
        let a = matrix_superalgebra(2, 1, &base_field(qq()).unwrap()).unwrap();
        // phi = id -> a = 1.
        let sol = solve_inner(&a, &GradedMap::identity(&a)).unwrap();
        assert_eq!(sol, a.unit_element());
        // nu -> diag(1,1,-1) normalized.
        let nu = grading_automorphism(&a);
        let sol = solve_inner(&a, &nu).unwrap();
        let iz = inner_automorphism(&a, &sol).unwrap();
        assert_eq!(iz, nu);
        assert_eq!(sol.parity().unwrap(), Some(0));
        // Random-ish invertible homogeneous elements roundtrip.
        for coords in [
            vec![1, 0, 0, 0, 2, 0, 0, 0, 5],
            vec![1, 1, 0, 0, 1, 0, 0, 0, 3],
            vec![2, 0, 0, 1, 1, 0, 0, 0, 1],
        ] {
            // Even block elements of M_{2+1}: indices (r,s) with r,s < 2 or
            // r = s = 2 are even.
            let mut full = vec![q(0, 1); 9];
            let even_idx = [0usize, 1, 3, 4, 8];
            for (pos, &i) in even_idx.iter().enumerate() {
                full[i] = q(coords[pos] as i64, 1);
            }
            // Reuse the first five entries as the even block.
            let b = a.element(full).unwrap();
            if a.invert_homogeneous(&b).unwrap().is_none() {
                continue;
            }
            let phi = inner_automorphism(&a, &b).unwrap();
            let sol = solve_inner(&a, &phi).unwrap();
            assert_eq!(inner_automorphism(&a, &sol).unwrap(), phi);
        }
        // Odd case: iota of an invertible odd element in M_{1+1}.
        let c = m11();
        let u = c
            .element(vec![q(0, 1), q(1, 1), q(1, 1), q(0, 1)])
            .unwrap();
        let phi = inner_automorphism(&c, &u).unwrap();
        let sol = solve_inner(&c, &phi).unwrap();
        assert_eq!(sol.parity().unwrap(), Some(1));
        assert_eq!(inner_automorphism(&c, &sol).unwrap(), phi);
    }

    #[test]
    fn split_block_map_squares_to_nu() {
        for (n, m) in [(1usize, 1usize), (1, 2), (2, 2), (2, 3), (1, 4)] {
            let (a, phi) = split_superantiautomorphism(n, m, qq()).unwrap();
            assert!(is_superantiautomorphism(&a, &phi).unwrap());
            assert_eq!(phi.square().unwrap(), grading_automorphism(&a));
            assert!(!is_superinvolution(&a, &phi).unwrap());
        }
        // With no odd part the map is the ordinary transpose involution.
        let (a, phi) = split_superantiautomorphism(3, 0, qq()).unwrap();
        assert!(is_superinvolution(&a, &phi).unwrap());
    }

    #[test]
    fn semilinear_conjugation_on_quadratic_over_gaussians() {
        // K<sqrt i> over Q(i): x + yu |-> conj(x) + conj(y)u is a
        // semilinear superinvolution.
        let f = FieldDescriptor::QuadraticRational(-1);
        let i = f.sqrt_d().unwrap();
        let a = quadratic_graded(i).unwrap();
        let sigma = GradedMap::new(&a, Mat::identity(2, f), 0, true).unwrap();
        assert!(is_superantiautomorphism(&a, &sigma).unwrap());
        assert!(is_superinvolution(&a, &sigma).unwrap());
    }

    #[test]
    fn quadratic_maps_exhaustive_parametrization() {
        // Every parity-preserving unital graded map of F<sqrt a> fixes 1
        // and sends u to lambda*u; it is a superantiautomorphism iff
        // lambda^2 = -1 and is never a superinvolution.
        for p in [5u64, 7, 13] {
            let f = FieldDescriptor::PrimeField(p);
            for a_val in 1..p {
                let alg = match quadratic_graded(f.from_int(a_val as i64)) {
                    Ok(alg) => alg,
                    Err(_) => continue,
                };
                let mut found_anti = false;
                for lam in 0..p {
                    let mut m = Mat::identity(2, f);
                    m.set(1, 1, f.from_int(lam as i64));
                    let phi = GradedMap::new(&alg, m, 0, false).unwrap();
                    if lam == 0 {
                        assert!(matches!(
                            superantiautomorphism_violation(&alg, &phi),
                            Err(Error::NotBijective)
                        ));
                        continue;
                    }
                    let is_anti = is_superantiautomorphism(&alg, &phi).unwrap();
                    let lam2 = f.from_int((lam * lam) as i64);
                    assert_eq!(is_anti, lam2 == f.one().neg());
                    found_anti |= is_anti;
                    assert!(!is_superinvolution(&alg, &phi).unwrap());
                }
                // -1 is a square mod 5 and 13, not mod 7.
                assert_eq!(found_anti, p % 4 == 1);
            }
        }
    }

    #[test]
    fn solve_inner_random_roundtrip() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let a = matrix_superalgebra(2, 1, &base_field(qq()).unwrap()).unwrap();
        let mut rng = StdRng::seed_from_u64(17);
        let mut done = 0;
        while done < 100 {
            let t: u8 = rng.gen_range(0..2);
            let mut coords = vec![q(0, 1); a.dim];
            for i in 0..a.dim {
                if a.parity[i] == t {
                    coords[i] = q(rng.gen_range(-3..=3), 1);
                }
            }
            let b = a.element(coords).unwrap();
            if a.invert_homogeneous(&b).unwrap().is_none() {
                continue;
            }
            let phi = inner_automorphism(&a, &b).unwrap();
            let sol = solve_inner(&a, &phi).unwrap();
            // Solution agrees with b up to a scalar: same inner map.
            assert_eq!(inner_automorphism(&a, &sol).unwrap(), phi);
            assert_eq!(sol.parity().unwrap().unwrap(), t);
            done += 1;
        }
    }

    #[test]
    fn rank_one_composition_identity() {
        // h_{v,w} f = h_{v, wf} for the odd antidiagonal form.
        let delta = base_field(qq()).unwrap();
        let inv = GradedMap::identity(&delta);
        let one = delta.unit_element();
        let zero = delta.zero_element();
        let two = delta.scalar_element(&q(2, 1)).unwrap();
        let gram = vec![
            vec![zero.clone(), one.clone()],
            vec![one.clone(), zero.clone()],
        ];
        let h = HermitianSuperform::new(delta.clone(), inv, (1, 1), 1, 1, gram).unwrap();
        let end = h.endomorphism_algebra().unwrap();
        let v = vec![one.clone(), two.clone()];
        let w = vec![two.clone(), one.clone()];
        // f with Delta-matrix rows [[1,2],[0,1]]: wf computed row-wise.
        let f = vec![
            vec![one.clone(), two.clone()],
            vec![zero.clone(), one.clone()],
        ];
        // wf_j = sum_k w_k f[k][j].
        let mut wf = vec![delta.zero_element(), delta.zero_element()];
        for j in 0..2 {
            for k in 0..2 {
                wf[j] = wf[j].add(&w[k].mul(&f[k][j]).unwrap()).unwrap();
            }
        }
        // Non-homogeneous v is fine for the raw composition identity as
        // long as the same parity convention is used on both sides; use
        // homogeneous v here to stay within the form's contract.
        let v = vec![v[0].clone(), zero.clone()];
        let hvw = h.rank_one_map(&v, 0, &w).unwrap();
        let hvwf = h.rank_one_map(&v, 0, &wf).unwrap();
        let lhs = end
            .mul_coords(
                &h.end_coords(&end, &hvw).unwrap(),
                &h.end_coords(&end, &f).unwrap(),
            )
            .unwrap();
        assert_eq!(lhs, h.end_coords(&end, &hvwf).unwrap());
    }

    #[test]
    fn compose_semilinear_flags() {
        let f = FieldDescriptor::QuadraticRational(-1);
        let a = quadratic_graded(f.from_int(2)).unwrap();
        let conj = GradedMap::new(&a, Mat::identity(2, f), 0, true).unwrap();
        let sq = conj.square().unwrap();
        assert!(!sq.semilinear);
        assert!(sq.is_identity());
        // Semilinear application conjugates coordinates.
        let i_elt = a.scalar_element(&f.sqrt_d().unwrap()).unwrap();
        assert_eq!(conj.apply(&i_elt).unwrap(), i_elt.neg());
    }

    #[test]
    fn adjoint_of_odd_antidiagonal_form_is_tau() {
        // Delta = Q, trivial involution, dims (1,1), eps = 1, ell = 1,
        // Gram antidiag(1, 1): h(x1,x2) = 1 = h(x2,x1) (sign
        // eps(-1)^{x1 x2} = +1 since x1 is even).
        let delta = base_field(qq()).unwrap();
        let inv = GradedMap::identity(&delta);
        let one = delta.unit_element();
        let zero = delta.zero_element();
        let gram = vec![vec![zero.clone(), one.clone()], vec![one, zero]];
        let h = HermitianSuperform::new(delta, inv, (1, 1), 1, 1, gram).unwrap();
        let (end, star) = h.adjoint_superinvolution().unwrap();
        assert!(is_superinvolution(&end, &star).unwrap());
        // Under the canonical identification of End with M_{1+1}(Q) this is
        // E11 <-> E22, E12 -> E12, E21 -> -E21, i.e. tau composed with the
        // grading automorphism (conjugate to tau by an inner twist).
        let tau = tau_m11(&end);
        let nu = grading_automorphism(&end);
        assert_eq!(star, tau.compose(&nu).unwrap());
    }

    #[test]
    fn adjoint_of_identity_gram_on_even_module() {
        // V = V_0, Gram = I: the transpose involution on M_2(Q).
        let delta = base_field(qq()).unwrap();
        let inv = GradedMap::identity(&delta);
        let one = delta.unit_element();
        let zero = delta.zero_element();
        let gram = vec![vec![one.clone(), zero.clone()], vec![zero, one]];
        let h = HermitianSuperform::new(delta, inv, (2, 0), 1, 0, gram).unwrap();
        let (end, star) = h.adjoint_superinvolution().unwrap();
        // star(E12) = E21.
        let e12 = end.basis_coords(1);
        let img = star.apply_coords(&e12).unwrap();
        assert_eq!(img, end.basis_coords(2));
    }

    #[test]
    fn rank_one_map_properties() {
        let delta = base_field(qq()).unwrap();
        let inv = GradedMap::identity(&delta);
        let one = delta.unit_element();
        let zero = delta.zero_element();
        let gram = vec![vec![one.clone(), zero.clone()], vec![zero.clone(), one.clone()]];
        let h = HermitianSuperform::new(delta.clone(), inv, (2, 0), 1, 0, gram).unwrap();
        // v = w = x1: projection onto x1.
        let v = vec![one.clone(), zero.clone()];
        let m = h.rank_one_map(&v, 0, &v).unwrap();
        assert_eq!(m[0][0], one);
        assert!(m[0][1].is_zero());
        assert!(m[1][0].is_zero());
        assert!(m[1][1].is_zero());
    }

    #[test]
    fn rank_one_star_identity() {
        // (h_{v,w})* = eps (-1)^{(|v|+ell)(|w|+ell)} h_{w,v} for the odd
        // antidiagonal form on dims (1,1).
        let delta = base_field(qq()).unwrap();
        let inv = GradedMap::identity(&delta);
        let one = delta.unit_element();
        let zero = delta.zero_element();
        let gram = vec![
            vec![zero.clone(), one.clone()],
            vec![one.clone(), zero.clone()],
        ];
        let h = HermitianSuperform::new(delta.clone(), inv, (1, 1), 1, 1, gram).unwrap();
        let (end, star) = h.adjoint_superinvolution().unwrap();
        for (vp, v, wp, w) in [
            (0u8, vec![one.clone(), zero.clone()], 0u8, vec![one.clone(), zero.clone()]),
            (0, vec![one.clone(), zero.clone()], 1, vec![zero.clone(), one.clone()]),
            (1, vec![zero.clone(), one.clone()], 0, vec![one.clone(), zero.clone()]),
            (1, vec![zero.clone(), one.clone()], 1, vec![zero.clone(), one.clone()]),
        ] {
            let hvw = h.rank_one_map(&v, vp, &w).unwrap();
            let hwv = h.rank_one_map(&w, wp, &v).unwrap();
            let hvw_c = h.end_coords(&end, &hvw).unwrap();
            let hwv_c = h.end_coords(&end, &hwv).unwrap();
            let mut rhs = hwv_c.clone();
            let sign_neg = (h.eps == -1) ^ ((vp ^ h.ell) == 1 && (wp ^ h.ell) == 1);
            if sign_neg {
                rhs = rhs.iter().map(|c| c.neg()).collect();
            }
            assert_eq!(star.apply_coords(&hvw_c).unwrap(), rhs);
        }
    }
}
