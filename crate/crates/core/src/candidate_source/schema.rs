//! The `source` sub-grammar and the per-component payload table.
//!
//! A source string is a `;`-separated list of items, each a `,`-separated
//! list of scalars. A scalar is either bare text (trimmed, without `;`,
//! `,` or `'`) or single-quoted with `\'` and `\\` escapes. What the items
//! mean is decided by the component's row in [`SCHEMAS`].

use super::types::*;
use crate::lexical::{Date, Decimal};
use crate::rdf::Iri;

pub(crate) type Item = Vec<String>;

pub(crate) fn split_items(src: &str) -> Result<Vec<Item>, String> {
    let mut items: Vec<Item> = Vec::new();
    if src.trim().is_empty() {
        return Ok(items);
    }
    let mut fields: Item = Vec::new();
    let mut bare_empty = false;
    let mut chars = src.char_indices().peekable();
    loop {
        // one scalar
        while matches!(chars.peek(), Some((_, ' '))) {
            chars.next();
        }
        let scalar = if matches!(chars.peek(), Some((_, '\''))) {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next() {
                    None => return Err("unterminated quoted scalar".into()),
                    Some((_, '\'')) => break,
                    Some((i, '\\')) => match chars.next() {
                        Some((_, c @ ('\'' | '\\'))) => s.push(c),
                        _ => return Err(format!("invalid escape at {i}")),
                    },
                    Some((_, c)) => s.push(c),
                }
            }
            while matches!(chars.peek(), Some((_, ' '))) {
                chars.next();
            }
            s
        } else {
            let mut s = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if matches!(c, ';' | ',' | '\'') {
                    break;
                }
                s.push(c);
                chars.next();
            }
            let s = s.trim().to_owned();
            bare_empty |= fields.is_empty() && s.is_empty();
            s
        };
        fields.push(scalar);
        let end = match chars.next() {
            None => true,
            Some((_, ',')) => continue,
            Some((_, ';')) => false,
            Some((i, c)) => return Err(format!("unexpected {c:?} at {i}")),
        };
        if bare_empty && fields.len() == 1 {
            return Err("empty item".into());
        }
        bare_empty = false;
        items.push(std::mem::take(&mut fields));
        if end {
            break;
        }
    }
    Ok(items)
}

fn needs_quotes(s: &str) -> bool {
    s.is_empty() || s.trim() != s || s.contains([';', ',', '\'', '\\'])
}

pub(crate) fn push_scalar(out: &mut String, s: &str) {
    if needs_quotes(s) {
        out.push('\'');
        for c in s.chars() {
            if c == '\'' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('\'');
    } else {
        out.push_str(s);
    }
}

pub(crate) fn join_items(items: &[Item]) -> String {
    let mut out = String::new();
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        for (j, f) in item.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            push_scalar(&mut out, f);
        }
    }
    out
}

#[derive(Clone, Copy)]
pub(crate) enum Arity {
    Zero,
    One,
    AtLeastOne,
}

pub(crate) struct Schema {
    pub component: ComponentId,
    pub items: Arity,
    pub decode: fn(&[Item]) -> Result<ComponentPayload, String>,
    pub encode: fn(&ComponentPayload) -> Vec<Item>,
}

fn exact(item: &Item, n: usize) -> Result<&[String], String> {
    if item.len() == n {
        Ok(item)
    } else {
        Err(format!("expected {n} fields, found {}", item.len()))
    }
}

fn decimal(s: &str) -> Result<Decimal, String> {
    s.parse().map_err(|e: crate::lexical::LexicalError| e.to_string())
}

fn unit_decimal(s: &str) -> Result<Decimal, String> {
    let d = decimal(s)?;
    if d.is_probability() {
        Ok(d)
    } else {
        Err(format!("{s} outside [0, 1]"))
    }
}

fn count(s: &str) -> Result<u64, String> {
    s.parse().map_err(|_| format!("not a non-negative integer: {s:?}"))
}

pub(crate) fn latitude(s: &str) -> Result<Decimal, String> {
    let d = decimal(s)?;
    if d.within(&Decimal::from_int(-90), &Decimal::from_int(90)) {
        Ok(d)
    } else {
        Err(format!("latitude {s} outside [-90, 90]"))
    }
}

pub(crate) fn longitude(s: &str) -> Result<Decimal, String> {
    let d = decimal(s)?;
    if d.within(&Decimal::from_int(-180), &Decimal::from_int(180)) {
        Ok(d)
    } else {
        Err(format!("longitude {s} outside [-180, 180]"))
    }
}

fn absolute_url(s: &str) -> Result<String, String> {
    Iri::new(s).map(|_| s.to_owned()).map_err(|e| e.to_string())
}

fn non_empty(s: &str, what: &str) -> Result<String, String> {
    if s.is_empty() {
        Err(format!("{what} must not be empty"))
    } else {
        Ok(s.to_owned())
    }
}

fn optional(s: Option<&String>) -> Option<String> {
    s.filter(|v| !v.is_empty()).cloned()
}

pub(crate) static SCHEMAS: [Schema; 14] = [
    Schema {
        component: ComponentId::AliasMatcher,
        items: Arity::One,
        decode: |items| {
            let f = exact(&items[0], 1)?;
            let freebase_date: Date = f[0].parse().map_err(|e: crate::lexical::LexicalError| e.to_string())?;
            Ok(ComponentPayload::AliasMatcher { freebase_date })
        },
        encode: |p| match p {
            ComponentPayload::AliasMatcher { freebase_date } => vec![vec![freebase_date.to_string()]],
            _ => unreachable!(),
        },
    },
    Schema {
        component: ComponentId::Cmc,
        items: Arity::AtLeastOne,
        decode: |items| {
            let patterns = items
                .iter()
                .map(|it| {
                    let f = exact(it, 3)?;
                    Ok(MorphPattern {
                        name: non_empty(&f[0], "pattern name")?,
                        value: f[1].clone(),
                        score: decimal(&f[2])?,
                    })
                })
                .collect::<Result<_, String>>()?;
            Ok(ComponentPayload::Cmc { patterns })
        },
        encode: |p| match p {
            ComponentPayload::Cmc { patterns } => patterns
                .iter()
                .map(|m| vec![m.name.clone(), m.value.clone(), m.score.to_string()])
                .collect(),
            _ => unreachable!(),
        },
    },
    Schema {
        component: ComponentId::Cpl,
        items: Arity::AtLeastOne,
        decode: |items| {
            let patterns = items
                .iter()
                .map(|it| {
                    let f = exact(it, 2)?;
                    let occurrences = count(&f[1])?;
                    if occurrences == 0 {
                        return Err("pattern occurrences must be at least 1".to_owned());
                    }
                    Ok(PatternOcc {
                        pattern: non_empty(&f[0], "pattern")?,
                        occurrences,
                    })
                })
                .collect::<Result<_, String>>()?;
            Ok(ComponentPayload::Cpl { patterns })
        },
        encode: |p| match p {
            ComponentPayload::Cpl { patterns } => patterns
                .iter()
                .map(|o| vec![o.pattern.clone(), o.occurrences.to_string()])
                .collect(),
            _ => unreachable!(),
        },
    },
    Schema {
        component: ComponentId::KbManipulation,
        items: Arity::One,
        decode: |items| {
            let f = exact(&items[0], 1)?;
            Ok(ComponentPayload::KbManipulation {
                old_bug: non_empty(&f[0], "old bug")?,
            })
        },
        encode: |p| match p {
            ComponentPayload::KbManipulation { old_bug } => vec![vec![old_bug.clone()]],
            _ => unreachable!(),
        },
    },
    Schema {
        component: ComponentId::LatLong,
        items: Arity::AtLeastOne,
        decode: |items| {
            let locations = items
                .iter()
                .map(|it| {
                    let f = exact(it, 3)?;
                    Ok(GeoLocation {
                        name: non_empty(&f[0], "location name")?,
                        latitude: latitude(&f[1])?,
                        longitude: longitude(&f[2])?,
                    })
                })
                .collect::<Result<_, String>>()?;
            Ok(ComponentPayload::LatLong { locations })
        },
        encode: |p| match p {
            ComponentPayload::LatLong { locations } => locations
                .iter()
                .map(|l| vec![l.name.clone(), l.latitude.to_string(), l.longitude.to_string()])
                .collect(),
            _ => unreachable!(),
        },
    },
    Schema {
        component: ComponentId::Le,
        items: Arity::Zero,
        decode: |_| Ok(ComponentPayload::Le),
        encode: |_| Vec::new(),
    },
    Schema {
        component: ComponentId::Mbl,
        items: Arity::One,
        decode: |items| {
            let f = &items[0];
            if !(2..=5).contains(&f.len()) {
                return Err(format!("expected 2 to 5 fields, found {}", f.len()));
            }
            Ok(ComponentPayload::Mbl(MblPayload {
                promoted_entity: non_empty(&f[0], "promoted entity")?,
                promoted_entity_category: non_empty(&f[1], "promoted entity category")?,
                promoted_relation: optional(f.get(2)),
                promoted_value: optional(f.get(3)),
                promoted_value_category: optional(f.get(4)),
            }))
        },
        encode: |p| match p {
            ComponentPayload::Mbl(m) => {
                let mut item = vec![m.promoted_entity.clone(), m.promoted_entity_category.clone()];
                let rest = [&m.promoted_relation, &m.promoted_value, &m.promoted_value_category];
                let used = rest.iter().rposition(|v| v.is_some()).map_or(0, |i| i + 1);
                item.extend(rest[..used].iter().map(|v| v.as_deref().unwrap_or_default().to_owned()));
                vec![item]
            }
            _ => unreachable!(),
        },
    },
    Schema {
        component: ComponentId::Oe,
        items: Arity::AtLeastOne,
        decode: |items| {
            let pairs = items
                .iter()
                .map(|it| {
                    let f = exact(it, 2)?;
                    Ok(TextUrl {
                        text: f[0].clone(),
                        url: absolute_url(&f[1])?,
                    })
                })
                .collect::<Result<_, String>>()?;
            Ok(ComponentPayload::Oe { pairs })
        },
        encode: |p| match p {
            ComponentPayload::Oe { pairs } => pairs.iter().map(|t| vec![t.text.clone(), t.url.clone()]).collect(),
            _ => unreachable!(),
        },
    },
    Schema {
        component: ComponentId::OntologyModifier,
        items: Arity::One,
        decode: |items| {
            let f = exact(&items[0], 2)?;
            let kind = match f[0].as_str() {
                "category" => ModificationKind::Category,
                "relation" => ModificationKind::Relation,
                other => return Err(format!("modification kind must be category or relation, found {other:?}")),
            };
            Ok(ComponentPayload::OntologyModifier {
                modification: non_empty(&f[1], "modification")?,
                kind,
            })
        },
        encode: |p| match p {
            ComponentPayload::OntologyModifier { modification, kind } => {
                vec![vec![kind.as_str().to_owned(), modification.clone()]]
            }
            _ => unreachable!(),
        },
    },
    Schema {
        component: ComponentId::Pra,
        items: Arity::AtLeastOne,
        decode: |items| {
            let paths = items
                .iter()
                .map(|f| {
                    if f.len() < 3 {
                        return Err(format!("expected direction, score and relations, found {} fields", f.len()));
                    }
                    let direction = match f[0].as_str() {
                        "forward" => Direction::Forward,
                        "backward" => Direction::Backward,
                        other => return Err(format!("direction must be forward or backward, found {other:?}")),
                    };
                    let relations = f[2..]
                        .iter()
                        .map(|r| non_empty(r, "relation"))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(RelationPath {
                        direction,
                        score: decimal(&f[1])?,
                        relations,
                    })
                })
                .collect::<Result<_, String>>()?;
            Ok(ComponentPayload::Pra { paths })
        },
        encode: |p| match p {
            ComponentPayload::Pra { paths } => paths
                .iter()
                .map(|path| {
                    let mut item = vec![path.direction.as_str().to_owned(), path.score.to_string()];
                    item.extend(path.relations.iter().cloned());
                    item
                })
                .collect(),
            _ => unreachable!(),
        },
    },
    Schema {
        component: ComponentId::Rl,
        items: Arity::AtLeastOne,
        decode: |items| {
            let head = exact(&items[0], 4)?;
            let mut rule = HornRule::default();
            for it in &items[1..] {
                match it.first().map(String::as_str) {
                    Some("var") => {
                        let f = exact(it, 3)?;
                        rule.variables.push(RuleVariable {
                            variable: non_empty(&f[1], "variable")?,
                            value: f[2].clone(),
                        });
                    }
                    Some("pred") => {
                        let f = exact(it, 4)?;
                        rule.predicates.push(RulePredicate {
                            name: non_empty(&f[1], "predicate name")?,
                            first_variable: non_empty(&f[2], "variable")?,
                            second_variable: non_empty(&f[3], "variable")?,
                        });
                    }
                    other => return Err(format!("expected var or pred item, found {other:?}")),
                }
            }
            Ok(ComponentPayload::Rl {
                rule_scores: RuleScores {
                    rule,
                    accuracy: unit_decimal(&head[0])?,
                    nb_correct: count(&head[1])?,
                    nb_incorrect: count(&head[2])?,
                    nb_unknown: count(&head[3])?,
                },
            })
        },
        encode: |p| match p {
            ComponentPayload::Rl { rule_scores: r } => {
                let mut items = vec![vec![
                    r.accuracy.to_string(),
                    r.nb_correct.to_string(),
                    r.nb_incorrect.to_string(),
                    r.nb_unknown.to_string(),
                ]];
                for v in &r.rule.variables {
                    items.push(vec!["var".into(), v.variable.clone(), v.value.clone()]);
                }
                for p in &r.rule.predicates {
                    items.push(vec![
                        "pred".into(),
                        p.name.clone(),
                        p.first_variable.clone(),
                        p.second_variable.clone(),
                    ]);
                }
                items
            }
            _ => unreachable!(),
        },
    },
    Schema {
        component: ComponentId::Seal,
        items: Arity::One,
        decode: |items| {
            let f = exact(&items[0], 1)?;
            Ok(ComponentPayload::Seal {
                url: absolute_url(&f[0])?,
            })
        },
        encode: |p| match p {
            ComponentPayload::Seal { url } => vec![vec![url.clone()]],
            _ => unreachable!(),
        },
    },
    Schema {
        component: ComponentId::Semparse,
        items: Arity::One,
        decode: |items| {
            let f = exact(&items[0], 1)?;
            Ok(ComponentPayload::Semparse {
                sentence: non_empty(&f[0], "sentence")?,
            })
        },
        encode: |p| match p {
            ComponentPayload::Semparse { sentence } => vec![vec![sentence.clone()]],
            _ => unreachable!(),
        },
    },
    Schema {
        component: ComponentId::SpreadsheetEdits,
        items: Arity::One,
        decode: |items| {
            let f = exact(&items[0], 6)?;
            Ok(ComponentPayload::SpreadsheetEdits(SpreadsheetEdit {
                user: f[0].clone(),
                entity: f[1].clone(),
                relation: f[2].clone(),
                value: f[3].clone(),
                action: f[4].clone(),
                file: f[5].clone(),
            }))
        },
        encode: |p| match p {
            ComponentPayload::SpreadsheetEdits(e) => vec![vec![
                e.user.clone(),
                e.entity.clone(),
                e.relation.clone(),
                e.value.clone(),
                e.action.clone(),
                e.file.clone(),
            ]],
            _ => unreachable!(),
        },
    },
];

pub(crate) fn schema(component: ComponentId) -> &'static Schema {
    SCHEMAS
        .iter()
        .find(|s| s.component == component)
        .expect("every component has a schema")
}

pub(crate) fn decode(component: ComponentId, source: &str) -> Result<ComponentPayload, String> {
    let schema = schema(component);
    let items = split_items(source)?;
    match (schema.items, items.len()) {
        (Arity::Zero, 0) | (Arity::One, 1) => {}
        (Arity::AtLeastOne, n) if n >= 1 => {}
        (Arity::Zero, n) => return Err(format!("{component} carries no source data, found {n} items")),
        (_, n) => return Err(format!("{component} source has {n} items")),
    }
    (schema.decode)(&items)
}

pub(crate) fn encode(payload: &ComponentPayload) -> String {
    let schema = schema(payload.component());
    join_items(&(schema.encode)(payload))
}
