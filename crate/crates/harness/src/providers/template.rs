use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("placeholder {{{0}}} has no value")]
    Unbound(String),
    #[error("template rendered to an empty prompt")]
    Empty,
}

/// Prompt with `{name}` placeholders. `{{` and `}}` render literal braces;
/// a brace not forming `{identifier}` is kept as is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptTemplate {
    /// Sent as the system message when non-empty.
    #[serde(default)]
    pub role_preamble: String,
    pub body_template: String,
}

/// Rendered chat prompt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedPrompt {
    pub system: Option<String>,
    pub user: String,
}

impl PromptTemplate {
    pub fn new(role_preamble: impl Into<String>, body_template: impl Into<String>) -> Self {
        Self { role_preamble: role_preamble.into(), body_template: body_template.into() }
    }

    /// Default code-generation prompt; binds `{technology}` and `{requirement}`.
    pub fn code_generation() -> Self {
        Self::new(
            "",
            "You are an expert {technology} developer. Implement the following requirement \
             completely. Output only code.\n\nRequirement: {requirement}",
        )
    }

    /// Default reverse-generation prompt; binds `{code}`.
    pub fn reverse_generation() -> Self {
        Self::new(
            "",
            "Read the following code and write the complete software requirement it \
             implements, as plain prose. Describe every feature present, and only features \
             present.\n\nCode:\n{code}",
        )
    }

    pub fn render(&self, bindings: &[(&str, &str)]) -> Result<RenderedPrompt, TemplateError> {
        let system = render_str(&self.role_preamble, bindings)?;
        let user = render_str(&self.body_template, bindings)?;
        if user.trim().is_empty() {
            return Err(TemplateError::Empty);
        }
        Ok(RenderedPrompt { system: Some(system).filter(|s| !s.trim().is_empty()), user })
    }

    /// Placeholder names used by this template, in order of appearance.
    pub fn placeholders(&self) -> Vec<String> {
        let mut names = Vec::new();
        for text in [&self.role_preamble, &self.body_template] {
            let _ = substitute(text, |name| {
                names.push(name.to_string());
                Some(String::new())
            });
        }
        names
    }
}

fn render_str(template: &str, bindings: &[(&str, &str)]) -> Result<String, TemplateError> {
    substitute(template, |name| bindings.iter().find(|(key, _)| *key == name).map(|(_, value)| value.to_string()))
}

fn is_ident(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn substitute(template: &str, mut lookup: impl FnMut(&str) -> Option<String>) -> Result<String, TemplateError> {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(pos) = rest.find(['{', '}']) {
        out.push_str(&rest[..pos]);
        let tail = &rest[pos..];
        if tail.starts_with("{{") || tail.starts_with("}}") {
            out.push_str(&tail[..1]);
            rest = &tail[2..];
            continue;
        }
        if tail.starts_with('{') {
            if let Some(end) = tail.find('}') {
                let name = &tail[1..end];
                if is_ident(name) {
                    let value = lookup(name).ok_or_else(|| TemplateError::Unbound(name.to_string()))?;
                    out.push_str(&value);
                    rest = &tail[end + 1..];
                    continue;
                }
            }
        }
        out.push_str(&tail[..1]);
        rest = &tail[1..];
    }
    out.push_str(rest);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_generation_prompt() {
        let p = PromptTemplate::code_generation()
            .render(&[("technology", "SQL"), ("requirement", "Create a user table")])
            .unwrap();
        assert_eq!(p.system, None);
        assert_eq!(
            p.user,
            "You are an expert SQL developer. Implement the following requirement completely. \
             Output only code.\n\nRequirement: Create a user table"
        );
    }

    #[test]
    fn default_reverse_prompt() {
        let p = PromptTemplate::reverse_generation().render(&[("code", "SELECT {x};")]).unwrap();
        assert!(p.user.starts_with("Read the following code and write the complete software requirement"));
        assert!(p.user.ends_with("Code:\nSELECT {x};"));
    }

    #[test]
    fn unbound_placeholder_is_an_error() {
        let err = PromptTemplate::reverse_generation().render(&[]).unwrap_err();
        assert_eq!(err, TemplateError::Unbound("code".into()));
        let t = PromptTemplate::new("You write {language}.", "{code}");
        assert_eq!(t.render(&[("code", "x")]).unwrap_err(), TemplateError::Unbound("language".into()));
    }

    #[test]
    fn escapes_and_stray_braces() {
        let t = PromptTemplate::new("", "{{literal}} {a} { not } {} {b-c} }");
        assert_eq!(t.render(&[("a", "A")]).unwrap().user, "{literal} A { not } {} {b-c} }");
    }

    #[test]
    fn preamble_becomes_system_message() {
        let t = PromptTemplate::new("You are a {technology} expert.", "Do {requirement}");
        let p = t.render(&[("technology", "React"), ("requirement", "it")]).unwrap();
        assert_eq!(p.system.as_deref(), Some("You are a React expert."));
        assert_eq!(t.placeholders(), ["technology", "requirement"]);
    }

    #[test]
    fn empty_render_is_an_error() {
        assert_eq!(PromptTemplate::new("", "{code}").render(&[("code", "  ")]), Err(TemplateError::Empty));
    }
}
