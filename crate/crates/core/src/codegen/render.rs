//! Text layout of a [`GeneratedModule`].

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::model::*;
use super::RUNTIME_MODULE;

const INDENT: &str = "    ";

pub fn render_module(module: &GeneratedModule) -> String {
    let mut out = String::new();
    for line in &module.header {
        let _ = writeln!(out, "# {line}");
    }
    if !module.header.is_empty() {
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "from {RUNTIME_MODULE} import {}",
        module.imports.join(", ")
    );

    let mut blocks: Vec<String> = Vec::new();
    for v in &module.validators {
        blocks.push(validator(*v));
    }
    for class in &module.classes {
        if let Some(u) = &class.updater {
            blocks.push(updater(u));
        }
        blocks.push(render_class(class));
    }
    for block in blocks {
        out.push_str("\n\n");
        out.push_str(&block);
    }
    out
}

fn validator(v: Validator) -> String {
    let bound = match v {
        Validator::Nat => " and n >= 0",
        Validator::Int => "",
    };
    format!(
        "@pre(lambda n: isinstance(n, int) and not isinstance(n, bool){bound})\ndef {}(n):\n{INDENT}return n\n",
        v.name()
    )
}

fn updater(u: &Updater) -> String {
    let mut out = format!("def {}(self):\n", u.name);
    for (attr, value) in &u.assignments {
        let _ = writeln!(out, "{INDENT}self.{attr} = {value}");
    }
    out
}

fn params(list: &[String]) -> String {
    let mut all = String::from("self");
    for p in list {
        all.push_str(", ");
        all.push_str(p);
    }
    all
}

fn render_class(class: &GeneratedClass) -> String {
    let mut out = String::new();
    for w in &class.wrappers {
        match w {
            ClassWrapper::Invariant(expr) => {
                let _ = writeln!(out, "@inv(lambda self: {expr})");
            }
            ClassWrapper::DecorateAll(name) => {
                let _ = writeln!(out, "@decorate_all({name})");
            }
        }
    }
    let _ = writeln!(out, "class {}:", class.name);

    let mut sections: Vec<String> = Vec::new();
    if !class.attributes.is_empty() {
        let mut s = String::new();
        for a in &class.attributes {
            let _ = writeln!(s, "{INDENT}{a} = None");
        }
        sections.push(s);
    }

    let mut s = format!(
        "{INDENT}def __init__({}):\n",
        params(&class.constructor.params)
    );
    body_lines(&mut s, &class.constructor.body);
    sections.push(s);

    if !class.frozen.is_empty() {
        let names: Vec<String> = class.frozen.iter().map(|f| format!("\"{f}\"")).collect();
        // A one-element tuple needs its trailing comma.
        let tuple = if names.len() == 1 {
            format!("({},)", names[0])
        } else {
            format!("({})", names.join(", "))
        };
        let mut s = format!("{INDENT}def __setattr__(self, name, value):\n");
        let _ = writeln!(
            s,
            "{INDENT}{INDENT}if name in {tuple} and name in self.__dict__:"
        );
        let _ = writeln!(
            s,
            "{INDENT}{INDENT}{INDENT}raise FrozenConstantViolation(type(self).__name__, name)"
        );
        let _ = writeln!(s, "{INDENT}{INDENT}object.__setattr__(self, name, value)");
        sections.push(s);
    }

    for m in &class.methods {
        sections.push(method(m));
        if !m.outputs.is_empty() {
            sections.push(outputs_note(&m.name, &m.outputs));
        }
    }
    for b in &class.op_expr_bindings {
        let mut s = format!("{INDENT}def {}(self, **kwargs):\n", b.name);
        let _ = writeln!(s, "{INDENT}{INDENT}return {}(**kwargs)", b.target);
        sections.push(s);
        if !b.outputs.is_empty() {
            sections.push(outputs_note(&b.name, &b.outputs));
        }
    }

    out.push_str(&sections.join("\n"));
    out
}

fn outputs_note(name: &str, outputs: &[String]) -> String {
    let names: Vec<String> = outputs.iter().map(|o| format!("\"{o}\"")).collect();
    let tuple = if names.len() == 1 {
        format!("({},)", names[0])
    } else {
        format!("({})", names.join(", "))
    };
    format!("{INDENT}{name}.__oz_outputs__ = {tuple}\n")
}

fn body_lines(out: &mut String, lines: &[String]) {
    if lines.is_empty() {
        let _ = writeln!(out, "{INDENT}{INDENT}pass");
    }
    for line in lines {
        let _ = writeln!(out, "{INDENT}{INDENT}{line}");
    }
}

fn method(m: &GeneratedMethod) -> String {
    let mut out = String::new();
    let pre_params = params(&m.params);
    for p in &m.pre {
        let _ = writeln!(out, "{INDENT}@pre(lambda {pre_params}: {p})");
    }
    for p in &m.post {
        let kind = if p.frame { ", kind=\"frame\"" } else { "" };
        let _ = writeln!(
            out,
            "{INDENT}@post(lambda {}: {}{kind})",
            p.params.join(", "),
            p.expr
        );
    }
    let _ = writeln!(out, "{INDENT}def {}({}):", m.name, params(&m.params));
    body_lines(&mut out, &m.body);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn empty_module_is_header_and_import() {
        let m = GeneratedModule {
            header: vec!["Generated by oz2py 0.1.0. Do not edit.".into()],
            imports: vec!["pre"],
            validators: vec![],
            classes: vec![],
        };
        assert_eq!(
            render_module(&m),
            "# Generated by oz2py 0.1.0. Do not edit.\n\nfrom ozruntime import pre\n"
        );
    }

    #[test]
    fn validators_are_separated_by_two_blank_lines() {
        let m = GeneratedModule {
            header: vec![],
            imports: vec!["pre"],
            validators: vec![Validator::Nat, Validator::Int],
            classes: vec![],
        };
        let text = render_module(&m);
        assert!(text.contains("    return n\n\n\n@pre(lambda n: isinstance(n, int) and not isinstance(n, bool))\ndef Int(n):"));
        assert!(text.ends_with("return n\n"));
    }
}
