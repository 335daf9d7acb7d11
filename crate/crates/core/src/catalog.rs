//! Table schemas and integrity constraints. Every column reference in the
//! IR, normalizer, symbolic encoder, and oracle is grounded here.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SqlType {
    Int,
    Decimal,
    Bool,
    Varchar,
    Date,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ColumnDef {
    pub name: String,
    #[serde(rename = "type")]
    pub sqltype: SqlType,
    #[serde(default = "default_nullable")]
    pub nullable: bool,
}

fn default_nullable() -> bool {
    true
}

/// Foreign keys are stored for completeness but not used by any rule.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ForeignKey {
    pub columns: Vec<usize>,
    pub ref_table: String,
    pub ref_columns: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TableSchema {
    pub name: String,
    pub columns: Vec<ColumnDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primary_key: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub foreign_keys: Vec<ForeignKey>,
}

impl TableSchema {
    pub fn arity(&self) -> usize {
        self.columns.len()
    }

    /// Case-insensitive column lookup; returns the position.
    pub fn column_index(&self, name: &str) -> Option<usize> {
        let upper = name.to_uppercase();
        self.columns.iter().position(|c| c.name == upper)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Catalog {
    tables: BTreeMap<String, TableSchema>,
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("catalog parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unknown table: {0}")]
    UnknownTable(String),
}

#[derive(Serialize, Deserialize)]
struct CatalogFile {
    tables: Vec<TableSchema>,
}

impl Catalog {
    pub fn new(tables: Vec<TableSchema>) -> Result<Catalog, CatalogError> {
        let mut map = BTreeMap::new();
        for mut schema in tables {
            schema.name = schema.name.to_uppercase();
            let mut seen = std::collections::HashSet::new();
            for col in &mut schema.columns {
                col.name = col.name.to_uppercase();
                if col.name.is_empty() {
                    return Err(CatalogError::Schema(format!(
                        "table {}: empty column name",
                        schema.name
                    )));
                }
                if !seen.insert(col.name.clone()) {
                    return Err(CatalogError::Schema(format!(
                        "table {}: duplicate column {}",
                        schema.name, col.name
                    )));
                }
            }
            if let Some(pk) = &schema.primary_key {
                for &pos in pk {
                    match schema.columns.get(pos) {
                        None => {
                            return Err(CatalogError::Schema(format!(
                                "table {}: primary key position {pos} out of range",
                                schema.name
                            )))
                        }
                        Some(col) if col.nullable => {
                            return Err(CatalogError::Schema(format!(
                                "table {}: primary key column {} must be non-nullable",
                                schema.name, col.name
                            )))
                        }
                        Some(_) => {}
                    }
                }
            }
            if map.insert(schema.name.clone(), schema.clone()).is_some() {
                return Err(CatalogError::Schema(format!(
                    "duplicate table {}",
                    schema.name
                )));
            }
        }
        Ok(Catalog { tables: map })
    }

    pub fn resolve(&self, name: &str) -> Result<&TableSchema, CatalogError> {
        self.tables
            .get(&name.to_uppercase())
            .ok_or_else(|| CatalogError::UnknownTable(name.to_string()))
    }

    pub fn tables(&self) -> impl Iterator<Item = &TableSchema> {
        self.tables.values()
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }
}

/// Loads a catalog from its JSON document form.
pub fn load_catalog(source: &str) -> Result<Catalog, CatalogError> {
    let file: CatalogFile =
        serde_json::from_str(source).map_err(|e| CatalogError::Parse(e.to_string()))?;
    Catalog::new(file.tables)
}

/// Serializes a catalog back to its document form (tables in name order).
pub fn dump_catalog(catalog: &Catalog) -> String {
    let file = CatalogFile {
        tables: catalog.tables().cloned().collect(),
    };
    serde_json::to_string_pretty(&file).expect("catalog serialization is infallible")
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) const EMP_DEPT: &str = r#"{
      "tables": [
        {"name": "EMP",
         "columns": [
           {"name": "EMP_ID", "type": "int", "nullable": false},
           {"name": "SALARY", "type": "int"},
           {"name": "DEPT_ID", "type": "int"},
           {"name": "LOCATION", "type": "varchar"}],
         "primary_key": [0]},
        {"name": "DEPT",
         "columns": [
           {"name": "DEPT_ID", "type": "int"},
           {"name": "DEPT_NAME", "type": "varchar"}]}
      ]
    }"#;

    #[test]
    fn loads_the_emp_dept_catalog() {
        let cat = load_catalog(EMP_DEPT).unwrap();
        let emp = cat.resolve("EMP").unwrap();
        assert_eq!(emp.arity(), 4);
        assert_eq!(emp.primary_key, Some(vec![0]));
        assert!(!emp.columns[0].nullable);
        assert_eq!(cat.resolve("DEPT").unwrap().arity(), 2);
    }

    #[test]
    fn empty_tables_list() {
        let cat = load_catalog(r#"{"tables": []}"#).unwrap();
        assert!(cat.is_empty());
    }

    #[test]
    fn duplicate_table_names_case_insensitive() {
        let doc = r#"{"tables": [
            {"name": "emp", "columns": [{"name": "A", "type": "int"}]},
            {"name": "EMP", "columns": [{"name": "A", "type": "int"}]}
        ]}"#;
        assert!(matches!(load_catalog(doc), Err(CatalogError::Schema(_))));
    }

    #[test]
    fn resolve_is_case_insensitive() {
        let cat = load_catalog(EMP_DEPT).unwrap();
        assert_eq!(cat.resolve("dept").unwrap().arity(), 2);
        assert!(matches!(
            cat.resolve("NOPE"),
            Err(CatalogError::UnknownTable(_))
        ));
    }

    #[test]
    fn nullable_primary_key_rejected() {
        let doc = r#"{"tables": [
            {"name": "T", "columns": [{"name": "A", "type": "int", "nullable": true}],
             "primary_key": [0]}
        ]}"#;
        assert!(matches!(load_catalog(doc), Err(CatalogError::Schema(_))));
    }

    #[test]
    fn dump_then_load_round_trips() {
        let cat = load_catalog(EMP_DEPT).unwrap();
        let dumped = dump_catalog(&cat);
        let again = load_catalog(&dumped).unwrap();
        assert_eq!(cat, again);
        assert_eq!(dumped, dump_catalog(&again));
    }
}
