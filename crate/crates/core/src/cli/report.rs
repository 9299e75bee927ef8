//! Output rendering. JSON is canonical; text and CSV are views of it.

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Rows under a name, one value per header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, headers: &[&str], rows: Vec<Vec<Value>>) -> Table {
        Table { name: name.to_string(), headers: headers.iter().map(|h| h.to_string()).collect(), rows }
    }
}

/// Ordered scalar fields plus at most one table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub fields: Vec<(String, Value)>,
    pub table: Option<Table>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn field(mut self, key: &str, value: Value) -> Report {
        self.fields.push((key.to_string(), value));
        self
    }

    pub fn table(mut self, table: Table) -> Report {
        self.table = Some(table);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, v) in &self.fields {
            map.insert(k.clone(), v.clone());
        }
        if let Some(t) = &self.table {
            let rows = t.rows.iter().map(|r| Value::Array(r.clone())).collect();
            map.insert(t.name.clone(), Value::Array(rows));
        }
        Value::Object(map)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
            Format::Text => self.text(),
            Format::Csv => self.csv(),
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.fields {
            s.push_str(&format!("{k}: {}\n", scalar(v, " ")));
        }
        if let Some(t) = &self.table {
            s.push_str(&format!("{} ({}):\n", t.name, t.headers.join(" ")));
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(|v| scalar(v, " ")).collect();
                s.push_str(&cells.join(" "));
                s.push('\n');
            }
        }
        s
    }

    // A table is emitted alone; otherwise one header line and one value line.
    fn csv(&self) -> String {
        let mut records: Vec<Vec<String>> = Vec::new();
        match &self.table {
            Some(t) => {
                records.push(t.headers.clone());
                records.extend(t.rows.iter().map(|row| row.iter().map(|v| scalar(v, ";")).collect()));
            }
            None => {
                records.push(self.fields.iter().map(|(k, _)| k.clone()).collect());
                records.push(self.fields.iter().map(|(_, v)| scalar(v, ";")).collect());
            }
        }
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        for r in &records {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

fn scalar(v: &Value, sep: &str) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(|x| scalar(x, sep)).collect::<Vec<_>>().join(sep),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        Report::new().field("place", json!("P_inf")).field("gaps", json!([1, 2, 4, 7])).field("pure", Value::Null)
    }

    #[test]
    fn views() {
        let r = sample();
        assert_eq!(r.render(Format::Text), "place: P_inf\ngaps: 1 2 4 7\npure: -\n");
        assert_eq!(r.render(Format::Csv), "place,gaps,pure\nP_inf,1;2;4;7,-\n");
        let v: Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(v["gaps"], json!([1, 2, 4, 7]));
    }

    #[test]
    fn table_views() {
        let r = sample().table(Table::new("pairs", &["a", "b"], vec![vec![json!(1), json!(20)], vec![json!("x,y"), json!(3)]]));
        assert_eq!(r.render(Format::Csv), "a,b\n1,20\n\"x,y\",3\n");
        assert!(r.render(Format::Text).ends_with("pairs (a b):\n1 20\nx,y 3\n"));
        assert_eq!(r.to_json()["pairs"][0], json!([1, 20]));
    }
}
