//! Writes component executions back into the field-13 syntax. Used by the
//! fixture generator; `parse(render(x)) == x` is a tested property.

use super::schema;
use super::types::{ComponentExecution, ComponentPayload, Token};

fn push_quoted(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn push_token_part(out: &mut String, part: &str) {
    let bare = !part.is_empty()
        && part.trim() == part
        && !part.contains([',', '"', '(', ')', '\\'])
        && !part.chars().any(char::is_control);
    if bare {
        out.push_str(part);
    } else {
        push_quoted(out, part);
    }
}

pub fn render_token(token: &Token) -> String {
    let mut out = String::from("(");
    match token {
        Token::Relation { entity, relation_value: v } | Token::Generalization { entity, generalization_value: v } => {
            push_token_part(&mut out, entity);
            out.push(',');
            push_token_part(&mut out, v);
        }
        Token::Geo {
            entity,
            latitude,
            longitude,
        } => {
            push_token_part(&mut out, entity);
            out.push(',');
            out.push_str(latitude.as_str());
            out.push(',');
            out.push_str(longitude.as_str());
        }
    }
    out.push(')');
    out
}

/// Encodes a payload as a `source` string in the component's sub-grammar.
pub fn render_source(payload: &ComponentPayload) -> String {
    schema::encode(payload)
}

/// One record. With `inline_scores` the record carries its own
/// `iteration=` and `prob=` when known, as on promoted rows.
pub fn render_record(e: &ComponentExecution, inline_scores: bool) -> String {
    let mut out = String::with_capacity(128 + e.source.len());
    out.push_str(e.alias.as_deref().unwrap_or(e.component.name()));
    if inline_scores {
        if let Some(i) = e.iteration {
            out.push_str(",iteration=");
            out.push_str(&i.to_string());
        }
        if let Some(p) = &e.probability {
            out.push_str(",prob=");
            out.push_str(p.as_str());
        }
    }
    out.push_str(",time=");
    out.push_str(&e.time.to_string());
    out.push_str(",token=");
    out.push_str(&render_token(&e.token));
    out.push_str(",source=");
    push_quoted(&mut out, &e.source);
    out
}

pub fn render_candidate_source(executions: &[ComponentExecution], inline_scores: bool) -> String {
    if executions.is_empty() {
        return String::new();
    }
    let mut out = String::from("[");
    for (i, e) in executions.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&render_record(e, inline_scores));
    }
    out.push(']');
    out
}
