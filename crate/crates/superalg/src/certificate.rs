//! Versioned JSON schema for algebra specifications and decision
//! certificates. An `AlgebraSpec` describes a base field and a recipe
//! expression tree; a `CertificateDocument` echoes the input together with
//! the verdict, witness matrix, and verification trace, so a document can be
//! re-checked independently of the run that produced it.

use serde::{Deserialize, Serialize};

use crate::algebra::{ClassificationReport, Recipe, SuperAlgebra, SuperType};
use crate::constructors::{
    base_field, clifford, graded_quaternion, graded_tensor, matrix_superalgebra,
    quadratic_graded, superopposite, trivially_graded,
};
use crate::error::{Error, Result};
use crate::fields::{FieldDescriptor, Scalar};
use crate::firstkind::{Certificate, Verdict};
use crate::linalg::Mat;
use crate::maps::GradedMap;
use crate::secondkind::conjugate_superalgebra;

pub const SCHEMA_VERSION: &str = "v1";
pub const TOOL_VERSION: &str = concat!("superalg ", env!("CARGO_PKG_VERSION"));

/// Base field of an algebra specification.
#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    /// The rationals.
    Q,
    /// Q(sqrt(d)) for a squarefree integer d.
    Qsqrt(i64),
    /// GF(p) for an odd prime p.
    GF(u64),
}

impl FieldSpec {
    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            FieldSpec::Q => FieldDescriptor::Rationals,
            FieldSpec::Qsqrt(d) => FieldDescriptor::QuadraticRational(*d),
            FieldSpec::GF(p) => FieldDescriptor::PrimeField(*p),
        }
    }

    pub fn of_descriptor(f: FieldDescriptor) -> FieldSpec {
        match f {
            FieldDescriptor::Rationals => FieldSpec::Q,
            FieldDescriptor::QuadraticRational(d) => FieldSpec::Qsqrt(d),
            FieldDescriptor::PrimeField(p) => FieldSpec::GF(p),
        }
    }
}

/// Recipe expression tree; scalar entries are canonical strings parsed
/// against the declared base field ("n", "n/d", "x+y*sqrt(d)", "gf(p):r").
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum RecipeSpec {
    /// An ungraded algebra given by structure constants.
    TriviallyGraded {
        constants: Vec<Vec<Vec<String>>>,
        unit: Vec<String>,
    },
    /// F<sqrt(a)>: basis {1, u}, u odd, u^2 = a.
    Quadratic { a: String },
    /// Graded quaternions <a, b>.
    Gquat { a: String, b: String },
    /// M_{n+m} over an inner coefficient superalgebra (base field if absent).
    Matrix {
        n: usize,
        m: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        inner: Option<Box<RecipeSpec>>,
    },
    /// Graded tensor product with the Koszul sign.
    Tensor {
        left: Box<RecipeSpec>,
        right: Box<RecipeSpec>,
    },
    /// Clifford algebra of the diagonal form <coeffs>.
    Clifford { coeffs: Vec<String> },
    /// Superopposite algebra.
    Sop { inner: Box<RecipeSpec> },
    /// Conjugate algebra over a quadratic extension.
    Conj { inner: Box<RecipeSpec> },
    /// Arbitrary graded structure constants.
    Raw {
        dim: usize,
        parity: Vec<u8>,
        constants: Vec<Vec<Vec<String>>>,
        unit: Vec<String>,
    },
}

/// Marks the quadratic extension K = Q(sqrt(t)) for second-kind commands;
/// equivalent to declaring the field as Qsqrt(t) directly.
#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtensionSpec {
    pub t: i64,
}

fn default_schema() -> String {
    SCHEMA_VERSION.to_string()
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct AlgebraSpec {
    #[serde(default = "default_schema")]
    pub schema: String,
    pub field: FieldSpec,
    pub algebra: RecipeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionSpec>,
}

impl AlgebraSpec {
    /// The field the algebra actually lives over: the extension marker, when
    /// present, overrides a rational base declaration.
    pub fn effective_field(&self) -> FieldDescriptor {
        match self.extension {
            Some(ExtensionSpec { t }) => FieldDescriptor::QuadraticRational(t),
            None => self.field.descriptor(),
        }
    }

    /// Builds and validates the described superalgebra.
    pub fn build(&self) -> Result<SuperAlgebra> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::InvalidAlgebra(format!(
                "unsupported schema version {:?} (expected {:?})",
                self.schema, SCHEMA_VERSION
            )));
        }
        build_recipe(&self.algebra, self.effective_field())
    }
}

fn parse_scalar(s: &str, field: &FieldDescriptor) -> Result<Scalar> {
    Scalar::parse(s, field)
}

fn parse_table(
    table: &[Vec<Vec<String>>],
    unit: &[String],
    field: &FieldDescriptor,
) -> Result<(Vec<Vec<Vec<Scalar>>>, Vec<Scalar>)> {
    let constants = table
        .iter()
        .map(|plane| {
            plane
                .iter()
                .map(|row| row.iter().map(|s| parse_scalar(s, field)).collect())
                .collect()
        })
        .collect::<Result<Vec<Vec<Vec<Scalar>>>>>()?;
    let unit = unit
        .iter()
        .map(|s| parse_scalar(s, field))
        .collect::<Result<Vec<Scalar>>>()?;
    Ok((constants, unit))
}

fn build_recipe(r: &RecipeSpec, field: FieldDescriptor) -> Result<SuperAlgebra> {
    match r {
        RecipeSpec::TriviallyGraded { constants, unit } => {
            let (c, u) = parse_table(constants, unit, &field)?;
            trivially_graded(field, c, u)
        }
        RecipeSpec::Quadratic { a } => quadratic_graded(parse_scalar(a, &field)?),
        RecipeSpec::Gquat { a, b } => {
            graded_quaternion(parse_scalar(a, &field)?, parse_scalar(b, &field)?)
        }
        RecipeSpec::Matrix { n, m, inner } => {
            let coeff = match inner {
                Some(inner) => build_recipe(inner, field)?,
                None => base_field(field)?,
            };
            matrix_superalgebra(*n, *m, &coeff)
        }
        RecipeSpec::Tensor { left, right } => {
            let l = build_recipe(left, field)?;
            let r = build_recipe(right, field)?;
            graded_tensor(&l, &r)
        }
        RecipeSpec::Clifford { coeffs } => {
            let q = coeffs
                .iter()
                .map(|s| parse_scalar(s, &field))
                .collect::<Result<Vec<Scalar>>>()?;
            clifford(&q)
        }
        RecipeSpec::Sop { inner } => superopposite(&build_recipe(inner, field)?),
        RecipeSpec::Conj { inner } => conjugate_superalgebra(&build_recipe(inner, field)?),
        RecipeSpec::Raw {
            dim,
            parity,
            constants,
            unit,
        } => {
            if parity.len() != *dim {
                return Err(Error::InvalidAlgebra(format!(
                    "raw algebra declares dim {} but parity has length {}",
                    dim,
                    parity.len()
                )));
            }
            let (c, u) = parse_table(constants, unit, &field)?;
            SuperAlgebra::new(field, parity.clone(), c, u, None)
        }
    }
}

/// Renders an internal recipe back to its specification form; raw input has
/// no recipe and is echoed from the original spec instead.
pub fn recipe_spec_of(recipe: &Recipe, a: &SuperAlgebra) -> RecipeSpec {
    fn go(recipe: &Recipe) -> RecipeSpec {
        match recipe {
            Recipe::TriviallyGraded => RecipeSpec::Matrix {
                n: 1,
                m: 0,
                inner: None,
            },
            Recipe::QuadraticGraded { a } => RecipeSpec::Quadratic { a: a.to_string() },
            Recipe::GradedQuaternion { a, b } => RecipeSpec::Gquat {
                a: a.to_string(),
                b: b.to_string(),
            },
            Recipe::MatrixSuper { n, m, inner } => RecipeSpec::Matrix {
                n: *n,
                m: *m,
                inner: match inner.as_ref() {
                    Recipe::TriviallyGraded => None,
                    other => Some(Box::new(go(other))),
                },
            },
            Recipe::GradedTensor { left, right } => RecipeSpec::Tensor {
                left: Box::new(go(left)),
                right: Box::new(go(right)),
            },
            Recipe::Clifford { coeffs } => RecipeSpec::Clifford {
                coeffs: coeffs.iter().map(|c| c.to_string()).collect(),
            },
            Recipe::SuperOpposite(inner) => RecipeSpec::Sop {
                inner: Box::new(go(inner)),
            },
            Recipe::Conjugate(inner) => RecipeSpec::Conj {
                inner: Box::new(go(inner)),
            },
        }
    }
    match recipe {
        Recipe::TriviallyGraded => RecipeSpec::TriviallyGraded {
            constants: render_table(&a.constants),
            unit: a.unit.iter().map(|c| c.to_string()).collect(),
        },
        other => go(other),
    }
}

fn render_table(constants: &[Vec<Vec<Scalar>>]) -> Vec<Vec<Vec<String>>> {
    constants
        .iter()
        .map(|plane| {
            plane
                .iter()
                .map(|row| row.iter().map(|c| c.to_string()).collect())
                .collect()
        })
        .collect()
}

/// A graded map serialized as row-major canonical scalar strings.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct WitnessDocument {
    pub matrix: Vec<Vec<String>>,
    pub parity: u8,
    pub semilinear: bool,
}

impl WitnessDocument {
    pub fn from_map(map: &GradedMap) -> WitnessDocument {
        let m = &map.matrix;
        let matrix = (0..m.rows)
            .map(|i| (0..m.cols).map(|j| m.get(i, j).to_string()).collect())
            .collect();
        WitnessDocument {
            matrix,
            parity: map.parity,
            semilinear: map.semilinear,
        }
    }

    /// Rebuilds the map without axiom checks; callers re-verify explicitly.
    pub fn to_map(&self, a: &SuperAlgebra) -> Result<GradedMap> {
        let n = a.dim;
        if self.matrix.len() != n || self.matrix.iter().any(|row| row.len() != n) {
            return Err(Error::DimMismatch);
        }
        let mut m = Mat::zeros(n, n, a.field);
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                m.set(i, j, parse_scalar(s, &a.field)?);
            }
        }
        Ok(GradedMap {
            matrix: m,
            parity: self.parity,
            semilinear: self.semilinear,
        })
    }
}

/// Rendered classification report.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct ClassificationDocument {
    pub is_central: bool,
    pub is_graded_simple: bool,
    /// "trivially_graded", "odd", or "even".
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub square_class: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a0_summary: Option<Vec<usize>>,
}

impl ClassificationDocument {
    pub fn from_report(report: &ClassificationReport) -> ClassificationDocument {
        let (kind, square_class, split) = match &report.kind {
            SuperType::TriviallyGraded => ("trivially_graded".to_string(), None, None),
            SuperType::Odd { square_class_a, .. } => {
                ("odd".to_string(), Some(square_class_a.to_string()), None)
            }
            SuperType::Even {
                square_class_a,
                split,
                ..
            } => (
                "even".to_string(),
                Some(square_class_a.to_string()),
                Some(*split),
            ),
        };
        ClassificationDocument {
            is_central: report.is_central,
            is_graded_simple: report.is_graded_simple,
            kind,
            square_class,
            split,
            a0_summary: report.a0_summary.clone(),
        }
    }
}

/// Rendered corestriction: dimensions plus the spanning set of the fixed
/// subalgebra in tensor coordinates.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct CorDocument {
    /// F-dimension of the fixed subalgebra.
    pub dim: usize,
    /// F-dimension of its even part.
    pub even_dim: usize,
    /// Fixed-basis vectors as K-coordinates in A (x) conj(A).
    pub spanning_set: Vec<Vec<String>>,
    /// Parities of the fixed-basis vectors.
    pub parity: Vec<u8>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct CertificateDocument {
    pub schema: String,
    pub tool: String,
    pub command: String,
    pub input: AlgebraSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason_tag: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant_data: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cor: Option<CorDocument>,
    pub verification_trace: Vec<String>,
}

impl CertificateDocument {
    pub fn new(command: &str, input: &AlgebraSpec) -> CertificateDocument {
        CertificateDocument {
            schema: SCHEMA_VERSION.to_string(),
            tool: TOOL_VERSION.to_string(),
            command: command.to_string(),
            input: input.clone(),
            verdict: None,
            reason_tag: None,
            witness: None,
            invariant_data: None,
            classification: None,
            cor: None,
            verification_trace: Vec::new(),
        }
    }

    pub fn with_certificate(mut self, cert: &Certificate) -> CertificateDocument {
        self.verdict = Some(cert.verdict);
        self.reason_tag = Some(cert.reason_tag.clone());
        self.witness = cert.witness.as_ref().map(WitnessDocument::from_map);
        self.invariant_data = cert.invariant_data.as_ref().map(|s| s.to_string());
        self.verification_trace.extend(cert.trace.iter().cloned());
        self
    }
}
