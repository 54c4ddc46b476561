use calcverify::numfmt::format_significant;

const PLAIN_DIGITS: usize = 10;
const JSON_DIGITS: usize = 17;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Plain,
    Json,
}

#[derive(Clone, Debug)]
pub enum Value {
    Num(f64),
    Int(u64),
    Bool(bool),
    Str(String),
    Nums(Vec<f64>),
}

/// Ordered list of named fields, printed as `name: value` lines or a flat JSON object.
#[derive(Clone, Debug, Default)]
pub struct Report {
    fields: Vec<(&'static str, Value)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, name: &'static str, v: f64) -> Self {
        self.fields.push((name, Value::Num(v)));
        self
    }

    pub fn int(mut self, name: &'static str, v: usize) -> Self {
        self.fields.push((name, Value::Int(v as u64)));
        self
    }

    pub fn bool(mut self, name: &'static str, v: bool) -> Self {
        self.fields.push((name, Value::Bool(v)));
        self
    }

    pub fn str(mut self, name: &'static str, v: impl Into<String>) -> Self {
        self.fields.push((name, Value::Str(v.into())));
        self
    }

    pub fn nums(mut self, name: &'static str, v: &[f64]) -> Self {
        self.fields.push((name, Value::Nums(v.to_vec())));
        self
    }

    pub fn render(&self, mode: Mode) -> String {
        match mode {
            Mode::Plain => self.plain(),
            Mode::Json => self.json(),
        }
    }

    fn plain(&self) -> String {
        let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (name, value) in &self.fields {
            let text = match value {
                Value::Num(v) => format_significant(*v, PLAIN_DIGITS),
                Value::Int(v) => v.to_string(),
                Value::Bool(v) => v.to_string(),
                Value::Str(s) => s.clone(),
                Value::Nums(vs) => vs
                    .iter()
                    .map(|v| format_significant(*v, PLAIN_DIGITS))
                    .collect::<Vec<_>>()
                    .join(" "),
            };
            out.push_str(&format!("{name:<width$}  {text}\n"));
        }
        out
    }

    fn json(&self) -> String {
        let body: Vec<String> = self
            .fields
            .iter()
            .map(|(name, value)| format!("{}:{}", quote(name), json_value(value)))
            .collect();
        format!("{{{}}}\n", body.join(","))
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn json_number(v: f64) -> String {
    if v.is_finite() {
        format_significant(v, JSON_DIGITS)
    } else {
        "null".to_string()
    }
}

fn json_value(value: &Value) -> String {
    match value {
        Value::Num(v) => json_number(*v),
        Value::Int(v) => v.to_string(),
        Value::Bool(v) => v.to_string(),
        Value::Str(s) => quote(s),
        Value::Nums(vs) => format!(
            "[{}]",
            vs.iter()
                .map(|v| json_number(*v))
                .collect::<Vec<_>>()
                .join(",")
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_uses_ten_digits() {
        let r = Report::new().num("value", 2.0f64.sqrt()).int("n", 3);
        assert_eq!(r.render(Mode::Plain), "value  1.414213562\nn      3\n");
    }

    #[test]
    fn json_is_flat_and_precise() {
        let r = Report::new()
            .num("value", 5.0 / 9.0)
            .str("verdict", "pass \"q\"")
            .bool("converged", false)
            .num("bad", f64::NAN);
        let text = r.render(Mode::Json);
        assert_eq!(
            text,
            "{\"value\":0.55555555555555558,\"verdict\":\"pass \\\"q\\\"\",\"converged\":false,\"bad\":null}\n"
        );
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["value"].as_f64(), Some(5.0 / 9.0));
    }
}
