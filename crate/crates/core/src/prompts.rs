//! Prompt templates and `{{name}}` substitution.
//!
//! The built-in templates are compiled in from `prompts/*.txt`. A directory
//! holding any subset of those file names can override them at runtime.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("template {template} uses {{{{{name}}}}} but no value was supplied")]
    MissingVar { template: &'static str, name: String },
    #[error("template {template} has an unterminated placeholder")]
    Unterminated { template: &'static str },
    #[error("reading prompt override {path}: {source}")]
    Io { path: String, source: io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptSet {
    pub rules: String,
    pub tom: String,
    pub tom_send: String,
    pub tom_receive: String,
    pub policy: String,
    pub reflection: String,
    pub comm: String,
}

impl Default for PromptSet {
    fn default() -> Self {
        Self::builtin()
    }
}

impl PromptSet {
    pub fn builtin() -> Self {
        Self {
            rules: include_str!("../prompts/rules.txt").trim_end().to_owned(),
            tom: include_str!("../prompts/tom.txt").to_owned(),
            tom_send: include_str!("../prompts/tom_send.txt").to_owned(),
            tom_receive: include_str!("../prompts/tom_receive.txt").to_owned(),
            policy: include_str!("../prompts/policy.txt").to_owned(),
            reflection: include_str!("../prompts/reflection.txt").to_owned(),
            comm: include_str!("../prompts/comm.txt").to_owned(),
        }
    }

    /// Built-ins with every `<name>.txt` found in `dir` swapped in.
    pub fn load_dir(dir: &Path) -> Result<Self, PromptError> {
        let mut set = Self::builtin();
        let slots: [(&str, &mut String); 7] = [
            ("rules", &mut set.rules),
            ("tom", &mut set.tom),
            ("tom_send", &mut set.tom_send),
            ("tom_receive", &mut set.tom_receive),
            ("policy", &mut set.policy),
            ("reflection", &mut set.reflection),
            ("comm", &mut set.comm),
        ];
        for (name, slot) in slots {
            let path = dir.join(format!("{name}.txt"));
            match std::fs::read_to_string(&path) {
                Ok(text) => *slot = text,
                Err(e) if e.kind() == io::ErrorKind::NotFound => {}
                Err(source) => return Err(PromptError::Io { path: path.display().to_string(), source }),
            }
        }
        Ok(set)
    }
}

/// Replaces each `{{name}}` in `template` with `vars[name]`.
pub fn render(name: &'static str, template: &str, vars: &BTreeMap<&str, String>) -> Result<String, PromptError> {
    let mut out = String::with_capacity(template.len() + vars.values().map(String::len).sum::<usize>());
    let mut rest = template;
    while let Some(start) = rest.find("{{") {
        out.push_str(&rest[..start]);
        let after = &rest[start + 2..];
        let end = after.find("}}").ok_or(PromptError::Unterminated { template: name })?;
        let key = after[..end].trim();
        let value = vars.get(key).ok_or_else(|| PromptError::MissingVar { template: name, name: key.to_owned() })?;
        out.push_str(value);
        rest = &after[end + 2..];
    }
    out.push_str(rest);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(pairs: &[(&'static str, &str)]) -> BTreeMap<&'static str, String> {
        pairs.iter().map(|(k, v)| (*k, v.to_string())).collect()
    }

    #[test]
    fn substitutes_and_reports_missing() {
        let v = vars(&[("a", "1"), ("b", "two")]);
        assert_eq!(render("t", "x{{a}}y{{ b }}z", &v).unwrap(), "x1ytwoz");
        assert!(matches!(render("t", "{{c}}", &v), Err(PromptError::MissingVar { .. })));
        assert!(matches!(render("t", "{{a", &v), Err(PromptError::Unterminated { .. })));
    }

    #[test]
    fn override_dir_replaces_only_present_files() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("comm.txt"), "speak {{silence}}").unwrap();
        let set = PromptSet::load_dir(dir.path()).unwrap();
        assert_eq!(set.comm, "speak {{silence}}");
        assert_eq!(set.tom, PromptSet::builtin().tom);
    }
}
