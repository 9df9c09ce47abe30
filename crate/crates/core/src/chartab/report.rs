use serde::Serialize;

use super::Character;
use crate::exactnum::Cyclo;
use crate::groups::GroupRef;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ClassColumn {
    pub representative: String,
    pub size: usize,
    pub order: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CharacterRow {
    pub label: String,
    pub degree: u32,
    pub values: Vec<Cyclo>,
}

/// Serializable character table.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CharacterTableReport {
    pub classes: Vec<ClassColumn>,
    pub characters: Vec<CharacterRow>,
}

impl CharacterTableReport {
    /// `labels` defaults to `chi0, chi1, …` when `None`.
    pub fn new(group: &GroupRef, table: &[Character], labels: Option<&[String]>) -> Self {
        let classes = group
            .classes()
            .iter()
            .map(|c| ClassColumn {
                representative: group.name(c[0]).to_string(),
                size: c.len(),
                order: group.element_order(c[0]),
            })
            .collect();
        let characters = table
            .iter()
            .enumerate()
            .map(|(i, chi)| CharacterRow {
                label: labels.map_or_else(|| format!("chi{i}"), |l| l[i].clone()),
                degree: chi.degree(),
                values: chi.values().to_vec(),
            })
            .collect();
        CharacterTableReport { classes, characters }
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| |");
        for c in &self.classes {
            out.push_str(&format!(" {} ({}) |", c.representative, c.size));
        }
        out.push_str("\n|---|");
        out.push_str(&"---|".repeat(self.classes.len()));
        out.push('\n');
        for row in &self.characters {
            out.push_str(&format!("| {} |", row.label));
            for v in &row.values {
                out.push_str(&format!(" {v} |"));
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::character_table;
    use crate::groups::fixtures::cyclic;

    #[test]
    fn markdown_and_json_for_z2() {
        let g = cyclic(2);
        let t = character_table(&g).unwrap();
        let rep = CharacterTableReport::new(&g, &t, None);
        let md = rep.to_markdown();
        assert_eq!(md, "| | E (1) | g (1) |\n|---|---|---|\n| chi0 | 1 | 1 |\n| chi1 | 1 | -1 |\n");
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["classes"][1]["order"], 2);
        assert_eq!(json["characters"][1]["degree"], 1);
    }
}
