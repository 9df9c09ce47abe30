use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    pub name: String,
    pub matrix: Vec<Vec<i64>>,
    pub translation: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SectionEntryJson {
    pub word: String,
    pub translation: Vec<String>,
}

/// On-disk description of a crystal group.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CrystalJson {
    pub name: String,
    pub dimension: usize,
    pub generators: Vec<GeneratorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<Vec<SectionEntryJson>>,
}
