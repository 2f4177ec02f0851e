//! JSON interchange forms.
//!
//! All numbers are scaled integers next to an explicit `scale`; tables and
//! matrices hold alphabet values, never indices.

use serde::{Deserialize, Serialize};

use crate::alphabet::DistanceAlphabet;
use crate::error::{Error, Result};
use crate::functions::GridFunction;
use crate::monoid::FunctionSet;
use crate::spaces::{DistanceMatrix, SpaceFamily};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphabetJson {
    pub scale: u64,
    pub values: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionJson {
    pub alphabet: AlphabetJson,
    pub table: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceJson {
    pub alphabet: AlphabetJson,
    pub points: Vec<String>,
    pub matrix: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub alphabet: AlphabetJson,
    pub spaces: Vec<Vec<Vec<u64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSetJson {
    pub alphabet: AlphabetJson,
    pub functions: Vec<Vec<u64>>,
}

impl From<&DistanceAlphabet> for AlphabetJson {
    fn from(a: &DistanceAlphabet) -> Self {
        Self {
            scale: a.scale(),
            values: a.values().to_vec(),
        }
    }
}

impl TryFrom<AlphabetJson> for DistanceAlphabet {
    type Error = Error;

    fn try_from(j: AlphabetJson) -> Result<Self> {
        DistanceAlphabet::new(j.scale, j.values)
    }
}

impl From<&GridFunction> for FunctionJson {
    fn from(f: &GridFunction) -> Self {
        Self {
            alphabet: f.alphabet().into(),
            table: f.image_values(),
        }
    }
}

impl TryFrom<FunctionJson> for GridFunction {
    type Error = Error;

    fn try_from(j: FunctionJson) -> Result<Self> {
        GridFunction::from_image_values(j.alphabet.try_into()?, &j.table)
    }
}

impl From<&DistanceMatrix> for SpaceJson {
    fn from(m: &DistanceMatrix) -> Self {
        Self {
            alphabet: m.alphabet().into(),
            points: (0..m.points()).map(|i| format!("p{i}")).collect(),
            matrix: m.value_rows(),
        }
    }
}

impl TryFrom<SpaceJson> for DistanceMatrix {
    type Error = Error;

    fn try_from(j: SpaceJson) -> Result<Self> {
        if j.points.len() != j.matrix.len() {
            return Err(Error::InvalidMatrix(format!(
                "{} point labels for a {}-row matrix",
                j.points.len(),
                j.matrix.len()
            )));
        }
        let mut labels = j.points.clone();
        labels.sort();
        labels.dedup();
        if labels.len() != j.points.len() {
            return Err(Error::InvalidMatrix("duplicate point labels".into()));
        }
        DistanceMatrix::from_value_rows(j.alphabet.try_into()?, &j.matrix)
    }
}

impl From<&SpaceFamily> for FamilyJson {
    fn from(x: &SpaceFamily) -> Self {
        Self {
            alphabet: x.alphabet().into(),
            spaces: x.iter().map(DistanceMatrix::value_rows).collect(),
        }
    }
}

impl TryFrom<FamilyJson> for SpaceFamily {
    type Error = Error;

    fn try_from(j: FamilyJson) -> Result<Self> {
        let alphabet: DistanceAlphabet = j.alphabet.try_into()?;
        let spaces = j
            .spaces
            .iter()
            .map(|rows| DistanceMatrix::from_value_rows(alphabet.clone(), rows))
            .collect::<Result<Vec<_>>>()?;
        SpaceFamily::from_spaces(alphabet, spaces)
    }
}

impl From<&FunctionSet> for FunctionSetJson {
    fn from(s: &FunctionSet) -> Self {
        Self {
            alphabet: s.alphabet().into(),
            functions: s.iter().map(GridFunction::image_values).collect(),
        }
    }
}

impl TryFrom<FunctionSetJson> for FunctionSet {
    type Error = Error;

    fn try_from(j: FunctionSetJson) -> Result<Self> {
        let alphabet: DistanceAlphabet = j.alphabet.try_into()?;
        let functions = j
            .functions
            .iter()
            .map(|t| GridFunction::from_image_values(alphabet.clone(), t))
            .collect::<Result<Vec<_>>>()?;
        FunctionSet::from_functions(alphabet, functions)
    }
}

/// Parses one of the JSON forms and converts it to the domain type.
pub fn from_str<J, T>(text: &str) -> Result<T>
where
    J: for<'de> Deserialize<'de>,
    T: TryFrom<J, Error = Error>,
{
    let j: J = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    T::try_from(j)
}

pub fn to_value<J: Serialize>(j: &J) -> serde_json::Value {
    serde_json::to_value(j).expect("interchange forms always serialize")
}

pub fn function_value(f: &GridFunction) -> serde_json::Value {
    to_value(&FunctionJson::from(f))
}

pub fn space_value(m: &DistanceMatrix) -> serde_json::Value {
    to_value(&SpaceJson::from(m))
}

pub fn family_value(x: &SpaceFamily) -> serde_json::Value {
    to_value(&FamilyJson::from(x))
}

pub fn function_set_value(s: &FunctionSet) -> serde_json::Value {
    to_value(&FunctionSetJson::from(s))
}

pub fn alphabet_value(a: &DistanceAlphabet) -> serde_json::Value {
    to_value(&AlphabetJson::from(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::delhomme_space;

    #[test]
    fn function_uses_values_not_indices() {
        let a = DistanceAlphabet::parse("0,1,3").unwrap();
        let f = GridFunction::two_level_separator(&a, 1, 3, 1).unwrap();
        let text = serde_json::to_string(&FunctionJson::from(&f)).unwrap();
        assert_eq!(
            text,
            r#"{"alphabet":{"scale":1,"values":[0,1,3]},"table":[0,3,1]}"#
        );
        let back: GridFunction = from_str::<FunctionJson, _>(&text).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_schema_violations() {
        let bad_image = r#"{"alphabet":{"scale":1,"values":[0,1,2]},"table":[0,5,2]}"#;
        assert!(matches!(
            from_str::<FunctionJson, GridFunction>(bad_image),
            Err(Error::ImageOutsideAlphabet(_))
        ));
        let extra = r#"{"alphabet":{"scale":1,"values":[0,1]},"table":[0,1],"x":1}"#;
        assert!(matches!(
            from_str::<FunctionJson, GridFunction>(extra),
            Err(Error::Parse(_))
        ));
        let labels = r#"{"alphabet":{"scale":1,"values":[0,1]},"points":["a"],"matrix":[[0,1],[1,0]]}"#;
        assert!(from_str::<SpaceJson, DistanceMatrix>(labels).is_err());
    }

    #[test]
    fn space_form() {
        let a = DistanceAlphabet::parse("0,1,2").unwrap();
        let v = space_value(&delhomme_space(&a));
        assert_eq!(v["points"], serde_json::json!(["p0", "p1", "p2"]));
        assert_eq!(v["matrix"], serde_json::json!([[0, 1, 2], [1, 0, 2], [2, 2, 0]]));
    }
}
