//! Finite domains a matrix group can act on, with conversion of semilinear
//! maps to permutations. Point indices are the permutation domain; every
//! domain keeps a reverse index, and conversion fails with `DomainNotStable`
//! when a map carries a point outside the domain.

use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldSpec, ZERO};
use crate::permcore::Perm;
use super::forms::QuadForm;
use super::matrix::MatF;
use super::semilinear::SemilinearMap;
use std::collections::HashMap;
use std::sync::Arc;

pub enum Domain {
    /// One-dimensional subspaces, represented by the unique vector whose
    /// first nonzero coordinate is 1, enumerated in odometer order.
    Projective { field: Arc<FieldSpec>, dim: usize, points: Vec<Vec<FieldElem>>, index: HashMap<Vec<u32>, u16> },
    /// All nonzero vectors, indexed by their packed digits minus one.
    NonzeroVectors { field: Arc<FieldSpec>, dim: usize },
    /// Quadratic forms polarizing to a fixed Gram matrix.
    Forms { gram: Arc<MatF>, forms: Vec<QuadForm>, index: HashMap<Vec<u32>, u16> },
}

fn normalize_projective(field: &FieldSpec, v: &[FieldElem]) -> Option<Vec<FieldElem>> {
    let lead = v.iter().position(|&x| x != ZERO)?;
    let inv = field.inv(v[lead]);
    Some(v.iter().map(|&x| field.mul(x, inv)).collect())
}

fn key_of(v: &[FieldElem]) -> Vec<u32> {
    v.iter().map(|e| e.0).collect()
}

impl Domain {
    pub fn projective(field: &Arc<FieldSpec>, dim: usize) -> Domain {
        let q = field.q();
        let expect = ((q.pow(dim as u32) - 1) / (q - 1)) as usize;
        assert!(expect <= u16::MAX as usize + 1, "projective domain too large");
        let mut points = Vec::with_capacity(expect);
        let mut index = HashMap::with_capacity(expect);
        let mut v = vec![ZERO; dim];
        'odometer: loop {
            let mut i = 0;
            loop {
                if i == dim {
                    break 'odometer;
                }
                let next = v[i].0 + 1;
                if (next as u64) < q {
                    v[i] = FieldElem(next);
                    break;
                }
                v[i] = ZERO;
                i += 1;
            }
            let norm = normalize_projective(field, &v).unwrap();
            if norm == v {
                index.insert(key_of(&v), points.len() as u16);
                points.push(v.clone());
            }
        }
        assert_eq!(points.len(), expect);
        Domain::Projective { field: field.clone(), dim, points, index }
    }

    pub fn nonzero_vectors(field: &Arc<FieldSpec>, dim: usize) -> Domain {
        let q = field.q();
        let count = q.pow(dim as u32) - 1;
        assert!(count <= u16::MAX as u64 + 1, "vector domain too large");
        Domain::NonzeroVectors { field: field.clone(), dim }
    }

    pub fn quadratic_forms(gram: &Arc<MatF>) -> Result<Domain> {
        let forms = super::forms::enumerate_quadforms(gram)?;
        assert!(forms.len() <= u16::MAX as usize + 1, "form domain too large");
        let index = forms
            .iter()
            .enumerate()
            .map(|(i, f)| (f.key(), i as u16))
            .collect();
        Ok(Domain::Forms { gram: gram.clone(), forms, index })
    }

    pub fn size(&self) -> usize {
        match self {
            Domain::Projective { points, .. } => points.len(),
            Domain::NonzeroVectors { field, dim } => (field.q().pow(*dim as u32) - 1) as usize,
            Domain::Forms { forms, .. } => forms.len(),
        }
    }

    /// The representative vector of a point (projective or vector domains).
    pub fn vector_of(&self, idx: usize) -> Vec<FieldElem> {
        match self {
            Domain::Projective { points, .. } => points[idx].clone(),
            Domain::NonzeroVectors { field, dim } => {
                let q = field.q();
                let mut rest = idx as u64 + 1;
                let mut v = Vec::with_capacity(*dim);
                for _ in 0..*dim {
                    v.push(FieldElem((rest % q) as u32));
                    rest /= q;
                }
                v
            }
            Domain::Forms { .. } => panic!("form domain points are not vectors"),
        }
    }

    /// The point index of a vector, after normalization where applicable.
    pub fn index_of(&self, v: &[FieldElem]) -> Option<usize> {
        match self {
            Domain::Projective { field, index, .. } => {
                let norm = normalize_projective(field, v)?;
                index.get(&key_of(&norm)).map(|&i| i as usize)
            }
            Domain::NonzeroVectors { field, .. } => {
                let q = field.q();
                let mut packed = 0u64;
                for e in v.iter().rev() {
                    packed = packed * q + e.0 as u64;
                }
                if packed == 0 {
                    None
                } else {
                    Some((packed - 1) as usize)
                }
            }
            Domain::Forms { .. } => panic!("form domain points are not vectors"),
        }
    }

    /// Human-readable point label for reports.
    pub fn label(&self, idx: usize) -> String {
        match self {
            Domain::Forms { forms, .. } => {
                let key = forms[idx].key();
                format!("Q{key:?}")
            }
            _ => {
                let v = self.vector_of(idx);
                let parts: Vec<String> = v.iter().map(|e| e.0.to_string()).collect();
                format!("({})", parts.join(","))
            }
        }
    }

    /// Permutation induced on the domain, failing when the image of a point
    /// leaves the domain.
    pub fn perm_of(&self, g: &SemilinearMap) -> Result<Perm> {
        let n = self.size();
        let mut images = Vec::with_capacity(n);
        match self {
            Domain::Forms { forms, index, .. } => {
                for f in forms {
                    let img = f.act(g)?;
                    let &i = index.get(&img.key()).ok_or(Error::DomainNotStable)?;
                    images.push(i);
                }
            }
            _ => {
                for idx in 0..n {
                    let w = g.apply(&self.vector_of(idx));
                    let i = self.index_of(&w).ok_or(Error::DomainNotStable)?;
                    images.push(i as u16);
                }
            }
        }
        Perm::from_images(images).map_err(|_| Error::DomainNotStable)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grpzoo::forms::standard_symplectic_gram;

    fn gf(p: u32, f: u32) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::make(p, f, None).unwrap())
    }

    #[test]
    fn projective_point_counts() {
        assert_eq!(Domain::projective(&gf(2, 2), 4).size(), 85);
        assert_eq!(Domain::projective(&gf(3, 2), 2).size(), 10);
        assert_eq!(Domain::projective(&gf(2, 1), 4).size(), 15);
    }

    #[test]
    fn nonzero_vector_indexing_round_trips() {
        let d = Domain::nonzero_vectors(&gf(2, 2), 3);
        assert_eq!(d.size(), 63);
        for i in 0..63 {
            let v = d.vector_of(i);
            assert_eq!(d.index_of(&v), Some(i));
        }
    }

    #[test]
    fn matrix_to_perm_respects_composition() {
        let f = gf(2, 2);
        let d = Domain::projective(&f, 2);
        let a = SemilinearMap::linear(MatF::from_rows(&f, &[vec![1, 1], vec![0, 1]]));
        let b = SemilinearMap::new(MatF::from_rows(&f, &[vec![0, 1], vec![1, 0]]), 1);
        let pa = d.perm_of(&a).unwrap();
        let pb = d.perm_of(&b).unwrap();
        let pc = d.perm_of(&a.compose(&b)).unwrap();
        assert_eq!(pa.compose(&pb), pc);
    }

    #[test]
    fn form_domain_for_sp4_2() {
        let f = gf(2, 1);
        let gram = Arc::new(standard_symplectic_gram(&f, 2));
        let d = Domain::quadratic_forms(&gram).unwrap();
        assert_eq!(d.size(), 16);
        // a symplectic transvection permutes the forms
        let mut t = MatF::identity(&f, 4);
        t.set(1, 0, f.one());
        let p = d.perm_of(&SemilinearMap::linear(t)).unwrap();
        assert_eq!(p.degree(), 16);
    }

    #[test]
    fn scalars_act_trivially_on_projective_points() {
        let f = gf(3, 2);
        let d = Domain::projective(&f, 4);
        let z = f.generator();
        let s = SemilinearMap::linear(MatF::scalar_mat(&f, z, 4));
        assert!(d.perm_of(&s).unwrap().is_identity());
    }
}
