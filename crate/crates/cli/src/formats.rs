//! The JSON wire formats: algebras as sparse structure constants, quivers
//! with relations, modules as labelled action matrices, and graded
//! presentations.  Coefficients travel as decimal strings ("-3/7") so that
//! rational data stays exact in transit, and serialization is canonical —
//! sparse entries sorted, zero entries dropped — so round-trips are
//! byte-stable.

use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use modspace::algebra::{path_algebra, Algebra, Arrow, PathAlgebra, QuiverPresentation};
use modspace::graded::{graded_presentation, GradedAlgebra, GradedRelation};
use modspace::matrix::Matrix;
use modspace::module::Module;
use modspace::scalar::{Field, Scalar};

/// `"Q"` or `{"Fp": p}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum FieldDto {
    Name(String),
    Fp { #[serde(rename = "Fp")] p: u64 },
}

impl FieldDto {
    pub fn to_field(&self) -> Result<Field> {
        match self {
            FieldDto::Name(s) if s == "Q" => Ok(Field::Q),
            FieldDto::Name(s) => bail!("unknown field name {s:?} (expected \"Q\" or {{\"Fp\": p}})"),
            FieldDto::Fp { p } => {
                // Validate primality through the scalar layer.
                Field::Fp(*p)
                    .parse("0")
                    .map_err(|e| anyhow!("bad field modulus: {e}"))?;
                Ok(Field::Fp(*p))
            }
        }
    }

    pub fn of(field: Field) -> FieldDto {
        match field {
            Field::Q => FieldDto::Name("Q".into()),
            Field::Fp(p) => FieldDto::Fp { p },
        }
    }
}

fn parse_coeff(field: Field, s: &str, what: &str) -> Result<Scalar> {
    field
        .parse(s)
        .map_err(|e| anyhow!("{what}: cannot read coefficient {s:?}: {e}"))
}

/// Sparse structure constants: `mul` lists `[i, j, [[k, coeff], …]]` for
/// the nonzero products only.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraDto {
    pub field: FieldDto,
    pub basis: Vec<String>,
    pub unit: Vec<String>,
    pub mul: Vec<(usize, usize, Vec<(usize, String)>)>,
}

impl AlgebraDto {
    pub fn to_algebra(&self) -> Result<Algebra> {
        let field = self.field.to_field()?;
        let n = self.basis.len();
        if self.unit.len() != n {
            bail!("unit has {} entries for a basis of {}", self.unit.len(), n);
        }
        let unit: Vec<Scalar> = self
            .unit
            .iter()
            .map(|s| parse_coeff(field, s, "unit"))
            .collect::<Result<_>>()?;
        let mut table = vec![vec![vec![field.zero(); n]; n]; n];
        for (i, j, terms) in &self.mul {
            if *i >= n || *j >= n {
                bail!("mul entry ({i}, {j}) is outside the basis");
            }
            for (k, coeff) in terms {
                if *k >= n {
                    bail!("mul entry ({i}, {j}) targets missing basis index {k}");
                }
                let c = parse_coeff(field, coeff, "mul")?;
                table[*i][*j][*k] = table[*i][*j][*k].add(&c);
            }
        }
        Algebra::new(field, self.basis.clone(), table, unit)
            .map_err(|e| anyhow!("algebra file rejected: {e}"))
    }

    pub fn of(alg: &Algebra) -> AlgebraDto {
        let n = alg.dim();
        let mut mul = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let terms: Vec<(usize, String)> = alg
                    .basis_product(i, j)
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.to_string_canonical()))
                    .collect();
                if !terms.is_empty() {
                    mul.push((i, j, terms));
                }
            }
        }
        AlgebraDto {
            field: FieldDto::of(alg.field()),
            basis: alg.labels().to_vec(),
            unit: alg.unit().iter().map(Scalar::to_string_canonical).collect(),
            mul,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ArrowDto {
    pub from: String,
    pub to: String,
    pub label: String,
}

/// A quiver with parallel-path relations; paths appear as arrow-label
/// lists, and the compiled algebra truncates paths longer than `bound`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct QuiverDto {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowDto>,
    pub relations: Vec<Vec<(Vec<String>, String)>>,
    #[serde(default)]
    pub field: Option<FieldDto>,
    pub bound: usize,
}

impl QuiverDto {
    pub fn compile(&self, default_field: Field) -> Result<PathAlgebra> {
        let field = match &self.field {
            Some(f) => f.to_field()?,
            None => default_field,
        };
        let vertex_index: BTreeMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        if vertex_index.len() != self.vertices.len() {
            bail!("duplicate vertex names");
        }
        let arrow_index: BTreeMap<&str, usize> = self
            .arrows
            .iter()
            .enumerate()
            .map(|(i, a)| (a.label.as_str(), i))
            .collect();
        if arrow_index.len() != self.arrows.len() {
            bail!("duplicate arrow labels");
        }
        let resolve_vertex = |name: &str| -> Result<usize> {
            vertex_index
                .get(name)
                .copied()
                .ok_or_else(|| anyhow!("unknown vertex {name:?}"))
        };
        let arrows: Vec<Arrow> = self
            .arrows
            .iter()
            .map(|a| {
                Ok(Arrow {
                    from: resolve_vertex(&a.from)?,
                    to: resolve_vertex(&a.to)?,
                    label: a.label.clone(),
                })
            })
            .collect::<Result<_>>()?;
        let relations: Vec<Vec<(Vec<usize>, Scalar)>> = self
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .map(|(path, coeff)| {
                        let seq: Vec<usize> = path
                            .iter()
                            .map(|l| {
                                arrow_index
                                    .get(l.as_str())
                                    .copied()
                                    .ok_or_else(|| anyhow!("relation names unknown arrow {l:?}"))
                            })
                            .collect::<Result<_>>()?;
                        Ok((seq, parse_coeff(field, coeff, "relation")?))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let q = QuiverPresentation {
            vertices: self.vertices.clone(),
            arrows,
            relations,
            bound: self.bound,
        };
        path_algebra(field, &q).map_err(|e| anyhow!("quiver rejected: {e}"))
    }
}

/// A module as one row-major action matrix per algebra basis label.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ModuleDto {
    pub algebra: String,
    pub dim: usize,
    pub action: BTreeMap<String, Vec<Vec<String>>>,
}

impl ModuleDto {
    pub fn to_module(&self, alg: &Arc<Algebra>) -> Result<Module> {
        let field = alg.field();
        let d = self.dim;
        let mut act = Vec::with_capacity(alg.dim());
        for label in alg.labels() {
            let rows = self
                .action
                .get(label)
                .ok_or_else(|| anyhow!("module file is missing the action of {label:?}"))?;
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                bail!("action of {label:?} is not a {d}x{d} matrix");
            }
            let parsed: Vec<Vec<Scalar>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|s| parse_coeff(field, s, "action"))
                        .collect::<Result<_>>()
                })
                .collect::<Result<_>>()?;
            let m = if d == 0 {
                Matrix::zero(field, 0, 0)
            } else {
                Matrix::from_rows(field, parsed).map_err(|e| anyhow!("action of {label:?}: {e}"))?
            };
            act.push(m);
        }
        if self.action.len() != alg.dim() {
            bail!(
                "module file lists {} actions for an algebra of dimension {}",
                self.action.len(),
                alg.dim()
            );
        }
        Module::new(alg.clone(), act).map_err(|e| anyhow!("module file rejected: {e}"))
    }

    pub fn of(name: &str, m: &Module) -> ModuleDto {
        let action = m
            .algebra()
            .labels()
            .iter()
            .enumerate()
            .map(|(k, label)| {
                let mat = m.action(k);
                let rows = (0..mat.rows())
                    .map(|i| {
                        (0..mat.cols())
                            .map(|j| mat[(i, j)].to_string_canonical())
                            .collect()
                    })
                    .collect();
                (label.clone(), rows)
            })
            .collect();
        ModuleDto {
            algebra: name.to_string(),
            dim: m.dim(),
            action,
        }
    }
}

/// A graded presentation: generator labels with degrees, relations as
/// weighted generator-label words, and the truncation bound.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GradedDto {
    pub field: FieldDto,
    pub basis: Vec<String>,
    pub degrees: Vec<usize>,
    pub relations: Vec<Vec<(Vec<String>, String)>>,
    pub bound: usize,
}

impl GradedDto {
    pub fn to_graded(&self) -> Result<GradedAlgebra> {
        let field = self.field.to_field()?;
        if self.basis.len() != self.degrees.len() {
            bail!(
                "{} generators but {} degrees",
                self.basis.len(),
                self.degrees.len()
            );
        }
        let gens: Vec<(&str, usize)> = self
            .basis
            .iter()
            .map(String::as_str)
            .zip(self.degrees.iter().copied())
            .collect();
        let index: BTreeMap<&str, usize> = self
            .basis
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        if index.len() != self.basis.len() {
            bail!("duplicate generator labels");
        }
        let rels: Vec<GradedRelation> = self
            .relations
            .iter()
            .map(|rel| {
                let terms = rel
                    .iter()
                    .map(|(word, coeff)| {
                        let w: Vec<usize> = word
                            .iter()
                            .map(|l| {
                                index
                                    .get(l.as_str())
                                    .copied()
                                    .ok_or_else(|| anyhow!("relation names unknown generator {l:?}"))
                            })
                            .collect::<Result<_>>()?;
                        Ok((parse_coeff(field, coeff, "relation")?, w))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(GradedRelation { terms })
            })
            .collect::<Result<_>>()?;
        graded_presentation(field, &gens, &rels, self.bound)
            .map_err(|e| anyhow!("graded file rejected: {e}"))
    }
}

/// What a parsed file contained.
pub enum Parsed {
    Algebra(Algebra, AlgebraDto),
    Quiver(PathAlgebra, QuiverDto),
    Module(ModuleDto),
    Graded(GradedAlgebra, GradedDto),
}

/// Parse any of the wire formats, deciding the kind by its distinguishing
/// key: `mul` (algebra), `arrows` (quiver), `action` (module), `degrees`
/// (graded).
pub fn parse_text(text: &str) -> Result<Parsed> {
    let value: serde_json::Value =
        serde_json::from_str(text).context("input is not well-formed JSON")?;
    let obj = value
        .as_object()
        .ok_or_else(|| anyhow!("top level must be a JSON object"))?;
    if obj.contains_key("mul") {
        let dto: AlgebraDto = serde_json::from_value(value.clone())
            .context("object has \"mul\" but is not a valid algebra file")?;
        let alg = dto.to_algebra()?;
        Ok(Parsed::Algebra(alg, dto))
    } else if obj.contains_key("arrows") {
        let dto: QuiverDto = serde_json::from_value(value.clone())
            .context("object has \"arrows\" but is not a valid quiver file")?;
        let pa = dto.compile(Field::Fp(2))?;
        Ok(Parsed::Quiver(pa, dto))
    } else if obj.contains_key("action") {
        let dto: ModuleDto = serde_json::from_value(value.clone())
            .context("object has \"action\" but is not a valid module file")?;
        Ok(Parsed::Module(dto))
    } else if obj.contains_key("degrees") {
        let dto: GradedDto = serde_json::from_value(value.clone())
            .context("object has \"degrees\" but is not a valid graded file")?;
        let g = dto.to_graded()?;
        Ok(Parsed::Graded(g, dto))
    } else {
        bail!("object has none of the distinguishing keys mul/arrows/action/degrees")
    }
}

/// Canonical serialization: struct order, sorted sparse entries, trailing
/// newline.
pub fn to_canonical_json<T: Serialize>(dto: &T) -> String {
    let mut s = serde_json::to_string_pretty(dto).expect("wire structs always serialize");
    s.push('\n');
    s
}
