//! Reader and writer for the FML dialect used by the assessment knowledge
//! base: `FuzzyController / KnowledgeBase / FuzzyVariable / FuzzyTerm` with
//! trapezoid or triangle shapes, and a single Mamdani `RuleBase` of
//! conjunctive rules.

use std::fmt::Write as _;

use pfml_core::fuzzy::{Clause, FuzzyRule, FuzzySet, FuzzySystem, FuzzyVariable, Hedge, Shape, VariableKind};
use roxmltree::{Document, Node};

#[derive(Debug, thiserror::Error)]
pub enum FmlError {
    #[error("malformed XML: {0}")]
    Xml(#[from] roxmltree::Error),
    #[error("{path}: {message}")]
    At { path: String, message: String },
    #[error("invalid fuzzy system: {0}")]
    Invalid(#[from] pfml_core::Error),
}

fn at(path: &str, message: impl Into<String>) -> FmlError {
    FmlError::At {
        path: path.to_owned(),
        message: message.into(),
    }
}

fn children<'a, 'i>(node: Node<'a, 'i>) -> impl Iterator<Item = Node<'a, 'i>> {
    node.children().filter(Node::is_element)
}

fn no_text(node: Node<'_, '_>, path: &str) -> Result<(), FmlError> {
    match node.children().find(|c| c.is_text() && !c.text().unwrap_or("").trim().is_empty()) {
        Some(t) => Err(at(path, format!("unexpected text `{}`", t.text().unwrap_or("").trim()))),
        None => Ok(()),
    }
}

fn attr<'a>(node: Node<'a, '_>, name: &str, path: &str) -> Result<&'a str, FmlError> {
    node.attribute(name)
        .ok_or_else(|| at(path, format!("missing attribute `{name}`")))
}

fn number(node: Node<'_, '_>, name: &str, path: &str) -> Result<f64, FmlError> {
    let raw = attr(node, name, path)?;
    match raw.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(at(path, format!("attribute `{name}` = `{raw}` is not a finite number"))),
    }
}

fn expect_value(node: Node<'_, '_>, name: &str, allowed: &[&str], path: &str) -> Result<(), FmlError> {
    match node.attribute(name) {
        Some(v) if !allowed.iter().any(|a| a.eq_ignore_ascii_case(v)) => Err(at(
            path,
            format!("unsupported {name} `{v}` (expected {})", allowed.join(" or ")),
        )),
        _ => Ok(()),
    }
}

/// Parses a document and validates the resulting system. Errors carry the
/// element path of the offending node.
pub fn parse_fml(text: &str) -> Result<FuzzySystem, FmlError> {
    let doc = Document::parse(text)?;
    let root = doc.root_element();
    let path = root.tag_name().name().to_owned();
    if path != "FuzzyController" {
        return Err(at(&path, "root element must be FuzzyController"));
    }
    no_text(root, &path)?;
    let name = root.attribute("name").unwrap_or("").to_owned();
    let mut variables = None;
    let mut rule_base = None;
    for child in children(root) {
        let p = format!("{path}/{}", child.tag_name().name());
        match child.tag_name().name() {
            "KnowledgeBase" if variables.is_none() => variables = Some(parse_knowledge_base(child, &p)?),
            "RuleBase" if rule_base.is_none() => rule_base = Some((child, p)),
            "KnowledgeBase" | "RuleBase" => return Err(at(&p, "duplicate element")),
            other => return Err(at(&p, format!("unknown element `{other}`"))),
        }
    }
    let variables = variables.ok_or_else(|| at(&path, "missing KnowledgeBase"))?;
    let (rb_name, rules) = match rule_base {
        Some((node, p)) => parse_rule_base(node, &p, &variables)?,
        None => ("RuleBase1".to_owned(), Vec::new()),
    };
    Ok(FuzzySystem::with_rule_base_name(name, variables, rb_name, rules)?)
}

fn parse_knowledge_base(node: Node<'_, '_>, path: &str) -> Result<Vec<FuzzyVariable>, FmlError> {
    no_text(node, path)?;
    let mut out = Vec::new();
    for child in children(node) {
        let tag = child.tag_name().name();
        if tag != "FuzzyVariable" {
            return Err(at(&format!("{path}/{tag}"), format!("unknown element `{tag}`")));
        }
        let p = format!("{path}/FuzzyVariable[{}]", child.attribute("name").unwrap_or("?"));
        out.push(parse_variable(child, &p)?);
    }
    Ok(out)
}

fn parse_variable(node: Node<'_, '_>, path: &str) -> Result<FuzzyVariable, FmlError> {
    no_text(node, path)?;
    let name = attr(node, "name", path)?;
    let left = number(node, "domainleft", path)?;
    let right = number(node, "domainright", path)?;
    if left >= right {
        return Err(at(path, format!("domainleft {left} must be below domainright {right}")));
    }
    let kind = match attr(node, "type", path)? {
        t if t.eq_ignore_ascii_case("input") => VariableKind::Input,
        t if t.eq_ignore_ascii_case("output") => VariableKind::Output,
        t => return Err(at(path, format!("unknown variable type `{t}`"))),
    };
    let mut terms = Vec::new();
    for child in children(node) {
        let tag = child.tag_name().name();
        if tag != "FuzzyTerm" {
            return Err(at(&format!("{path}/{tag}"), format!("unknown element `{tag}`")));
        }
        let p = format!("{path}/FuzzyTerm[{}]", child.attribute("name").unwrap_or("?"));
        let term = parse_term(child, &p)?;
        let [bs, .., es] = term.shape.params();
        if bs < left || es > right {
            return Err(at(&p, format!("parameters [{bs}, {es}] leave the domain [{left}, {right}]")));
        }
        terms.push(term);
    }
    Ok(FuzzyVariable::new(name, (left, right), kind, terms))
}

fn parse_term(node: Node<'_, '_>, path: &str) -> Result<FuzzySet, FmlError> {
    no_text(node, path)?;
    let name = attr(node, "name", path)?;
    let hedge = match node.attribute("hedge") {
        None => Hedge::Normal,
        Some(h) if h.eq_ignore_ascii_case("normal") => Hedge::Normal,
        Some(h) => return Err(at(path, format!("unsupported hedge `{h}`"))),
    };
    let mut shapes = children(node);
    let shape_node = shapes.next().ok_or_else(|| at(path, "missing shape element"))?;
    if let Some(extra) = shapes.next() {
        return Err(at(&format!("{path}/{}", extra.tag_name().name()), "a term has exactly one shape"));
    }
    let tag = shape_node.tag_name().name();
    let p = format!("{path}/{tag}");
    no_text(shape_node, &p)?;
    let params = match tag {
        "TrapezoidShape" => [
            number(shape_node, "Param1", &p)?,
            number(shape_node, "Param2", &p)?,
            number(shape_node, "Param3", &p)?,
            number(shape_node, "Param4", &p)?,
        ],
        "TriangularShape" => {
            let c = number(shape_node, "Param2", &p)?;
            [number(shape_node, "Param1", &p)?, c, c, number(shape_node, "Param3", &p)?]
        }
        other => return Err(at(&p, format!("unknown shape element `{other}`"))),
    };
    let shape = Shape::from_params(params);
    if !shape.is_ordered() {
        return Err(at(&p, format!("parameters {params:?} are not ascending")));
    }
    Ok(FuzzySet {
        name: name.to_owned(),
        shape,
        hedge,
    })
}

fn parse_rule_base(
    node: Node<'_, '_>,
    path: &str,
    variables: &[FuzzyVariable],
) -> Result<(String, Vec<FuzzyRule>), FmlError> {
    no_text(node, path)?;
    expect_value(node, "type", &["mamdani"], path)?;
    expect_value(node, "activationMethod", &["MIN"], path)?;
    expect_value(node, "andMethod", &["MIN"], path)?;
    expect_value(node, "orMethod", &["MAX"], path)?;
    let name = node.attribute("name").unwrap_or("RuleBase1").to_owned();
    let mut rules = Vec::new();
    for child in children(node) {
        let tag = child.tag_name().name();
        if tag != "Rule" {
            return Err(at(&format!("{path}/{tag}"), format!("unknown element `{tag}`")));
        }
        let p = format!("{path}/Rule[{}]", child.attribute("name").unwrap_or("?"));
        rules.push(parse_rule(child, &p, variables)?);
    }
    Ok((name, rules))
}

fn parse_rule(node: Node<'_, '_>, path: &str, variables: &[FuzzyVariable]) -> Result<FuzzyRule, FmlError> {
    no_text(node, path)?;
    expect_value(node, "connector", &["and"], path)?;
    expect_value(node, "operator", &["MIN"], path)?;
    let name = attr(node, "name", path)?;
    let weight = if node.attribute("weight").is_some() {
        number(node, "weight", path)?
    } else {
        1.0
    };
    let mut antecedent = None;
    let mut consequent = None;
    for child in children(node) {
        let tag = child.tag_name().name();
        let p = format!("{path}/{tag}");
        let slot = match tag {
            "Antecedent" => &mut antecedent,
            "Consequent" => &mut consequent,
            other => return Err(at(&p, format!("unknown element `{other}`"))),
        };
        if slot.is_some() {
            return Err(at(&p, "duplicate element"));
        }
        *slot = Some(parse_clauses(child, &p, variables)?);
    }
    let antecedent = antecedent.ok_or_else(|| at(path, "missing Antecedent"))?;
    let mut consequent = consequent.ok_or_else(|| at(path, "missing Consequent"))?;
    if consequent.len() != 1 {
        return Err(at(path, format!("expected one consequent clause, found {}", consequent.len())));
    }
    Ok(FuzzyRule {
        weight,
        ..FuzzyRule::new(name, antecedent, consequent.remove(0))
    })
}

fn parse_clauses(node: Node<'_, '_>, path: &str, variables: &[FuzzyVariable]) -> Result<Vec<Clause>, FmlError> {
    no_text(node, path)?;
    let mut out = Vec::new();
    for (k, child) in children(node).enumerate() {
        let tag = child.tag_name().name();
        let p = format!("{path}/{tag}[{}]", k + 1);
        if tag != "Clause" {
            return Err(at(&p, format!("unknown element `{tag}`")));
        }
        no_text(child, &p)?;
        let (mut var, mut term) = (None, None);
        for part in children(child) {
            let slot = match part.tag_name().name() {
                "Variable" => &mut var,
                "Term" => &mut term,
                other => return Err(at(&format!("{p}/{other}"), format!("unknown element `{other}`"))),
            };
            *slot = Some(part.text().unwrap_or("").trim().to_owned());
        }
        let var = var.ok_or_else(|| at(&p, "missing Variable"))?;
        let term = term.ok_or_else(|| at(&p, "missing Term"))?;
        let v = variables
            .iter()
            .find(|v| v.name == var)
            .ok_or_else(|| at(&p, format!("unknown variable `{var}`")))?;
        if v.term(&term).is_none() {
            return Err(at(&p, format!("unknown term `{term}` for variable `{var}`")));
        }
        out.push(Clause::new(var, term));
    }
    Ok(out)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Writes the system in the same dialect [`parse_fml`] reads. Numbers use
/// the shortest representation that parses back to the same value.
pub fn serialize_fml(sys: &FuzzySystem) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(s, "<FuzzyController ip=\"localhost\" name=\"{}\">", escape(sys.name()));
    s.push_str("  <KnowledgeBase>\n");
    for v in sys.variables() {
        let kind = match v.kind {
            VariableKind::Input => "input",
            VariableKind::Output => "output",
        };
        let _ = writeln!(
            s,
            "    <FuzzyVariable domainleft=\"{}\" domainright=\"{}\" name=\"{}\" scale=\"\" type=\"{kind}\">",
            v.domain_left,
            v.domain_right,
            escape(&v.name)
        );
        for t in &v.terms {
            let _ = writeln!(s, "      <FuzzyTerm name=\"{}\" hedge=\"Normal\">", escape(&t.name));
            let _ = match t.shape {
                Shape::Trapezoid { bs, bc, ec, es } => writeln!(
                    s,
                    "        <TrapezoidShape Param1=\"{bs}\" Param2=\"{bc}\" Param3=\"{ec}\" Param4=\"{es}\"/>"
                ),
                Shape::Triangle { bs, c, es } => {
                    writeln!(s, "        <TriangularShape Param1=\"{bs}\" Param2=\"{c}\" Param3=\"{es}\"/>")
                }
            };
            s.push_str("      </FuzzyTerm>\n");
        }
        s.push_str("    </FuzzyVariable>\n");
    }
    s.push_str("  </KnowledgeBase>\n");
    let _ = writeln!(
        s,
        "  <RuleBase activationMethod=\"MIN\" andMethod=\"MIN\" orMethod=\"MAX\" name=\"{}\" type=\"mamdani\">",
        escape(sys.rule_base_name())
    );
    let clause = |s: &mut String, c: &Clause| {
        let _ = writeln!(
            s,
            "        <Clause><Variable>{}</Variable><Term>{}</Term></Clause>",
            escape(&c.variable),
            escape(&c.term)
        );
    };
    for r in sys.rules() {
        let _ = writeln!(
            s,
            "    <Rule name=\"{}\" connector=\"and\" weight=\"{}\" operator=\"MIN\">",
            escape(&r.name),
            r.weight
        );
        s.push_str("      <Antecedent>\n");
        for c in &r.antecedent {
            clause(&mut s, c);
        }
        s.push_str("      </Antecedent>\n      <Consequent>\n");
        clause(&mut s, &r.consequent);
        s.push_str("      </Consequent>\n    </Rule>\n");
    }
    s.push_str("  </RuleBase>\n</FuzzyController>\n");
    s
}
