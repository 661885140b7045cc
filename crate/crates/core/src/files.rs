//! JSON documents for groups, morphisms and comodules.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientSpec, Factor, GroupSpec};
use crate::error::{Error, Result};
use crate::morphisms::MorphismSpec;
use crate::poly::{Coord, Polynomial, Space};
use crate::reps::Comodule;
use crate::text::parse_poly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecFile {
    pub name: String,
    pub ambient: Vec<Factor>,
    #[serde(default)]
    pub generators: Vec<String>,
}

impl SpecFile {
    pub fn to_spec(&self) -> Result<GroupSpec> {
        let ambient = AmbientSpec::new(self.ambient.clone())?;
        let generators = self
            .generators
            .iter()
            .map(|g| parse_poly(g))
            .collect::<Result<_>>()?;
        GroupSpec::new(self.name.clone(), ambient, generators)
    }

    pub fn from_spec(spec: &GroupSpec) -> Self {
        SpecFile {
            name: spec.name.clone(),
            ambient: spec.ambient.factors().to_vec(),
            generators: spec.generators.iter().map(|g| g.to_string()).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<GroupSpec> {
        let file: SpecFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        file.to_spec()
    }
}

/// A coordinate name such as `y1`, `iy2`, `x1_2` or `idet`.
pub fn parse_coord(text: &str) -> Result<Coord> {
    let p = parse_poly(text)?;
    let vars = p.vars();
    match (p.len(), vars.iter().next()) {
        (1, Some(v))
            if vars.len() == 1
                && v.shift == 0
                && v.space == Space::Base
                && p == Polynomial::var(*v) =>
        {
            Ok(v.coord)
        }
        _ => Err(Error::InvalidSpec(format!("{text} is not a coordinate"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismFile {
    pub source: SpecFile,
    pub target: SpecFile,
    pub assignment: BTreeMap<String, String>,
}

impl MorphismFile {
    pub fn to_morphism(&self) -> Result<MorphismSpec> {
        let source = self.source.to_spec()?;
        let target = self.target.to_spec()?;
        let assignment = self
            .assignment
            .iter()
            .map(|(c, p)| Ok((parse_coord(c)?, parse_poly(p)?)))
            .collect::<Result<_>>()?;
        MorphismSpec::new(source, target, assignment)
    }

    pub fn from_json(text: &str) -> Result<MorphismSpec> {
        let file: MorphismFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        file.to_morphism()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComoduleFile {
    pub group: SpecFile,
    pub n: usize,
    pub matrix: Vec<Vec<String>>,
}

impl ComoduleFile {
    pub fn to_comodule(&self) -> Result<Comodule> {
        let group = self.group.to_spec()?;
        if self.matrix.len() != self.n {
            return Err(Error::InvalidSpec(format!(
                "matrix has {} rows, expected {}",
                self.matrix.len(),
                self.n
            )));
        }
        let matrix = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|a| parse_poly(a))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Comodule::new(group, matrix)
    }

    pub fn from_json(text: &str) -> Result<Comodule> {
        let file: ComoduleFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        file.to_comodule()
    }
}
