use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::{XmirDoc, XmirNode};
use crate::error::XmirError;
use crate::syntax::Meta;
use crate::value::DataKind;

#[derive(Clone, Copy, Debug)]
pub struct SerializeOptions {
    pub lines: bool,
}

impl Default for SerializeOptions {
    fn default() -> Self {
        SerializeOptions { lines: true }
    }
}

pub fn serialize_xmir(doc: &XmirDoc) -> String {
    serialize_xmir_with(doc, SerializeOptions::default())
}

pub fn serialize_xmir_with(doc: &XmirDoc, opts: SerializeOptions) -> String {
    if doc.license.is_empty() && doc.metas.is_empty() && doc.objects.is_empty() {
        return "<program/>\n".into();
    }
    let mut out = String::from("<program>\n");
    if !doc.license.is_empty() {
        out.push_str(&format!("  <license>{}</license>\n", esc(&doc.license.join("\n"))));
    }
    if !doc.metas.is_empty() {
        out.push_str("  <metas>\n");
        for m in &doc.metas {
            out.push_str(&format!("    <meta line=\"{}\"><head>{}</head>", m.line, esc(&m.head)));
            if let Some(t) = &m.tail {
                out.push_str(&format!("<tail>{}</tail>", esc(t)));
            }
            out.push_str("</meta>\n");
        }
        out.push_str("  </metas>\n");
    }
    for o in &doc.objects {
        write_node(o, 1, opts, &mut out);
    }
    out.push_str("</program>\n");
    out
}

fn esc(s: &str) -> String {
    quick_xml::escape::escape(s).into_owned()
}

fn attrs(n: &XmirNode, opts: SerializeOptions) -> String {
    let mut a: Vec<(&str, String)> = Vec::new();
    let flag = |on: bool| on.then(String::new);
    let mut push = |k: &'static str, v: Option<String>| {
        if let Some(v) = v {
            a.push((k, v));
        }
    };
    push("abstract", flag(n.empty_abstraction));
    push("as", n.tag.clone());
    push("atom", n.atom.clone());
    push("base", n.base.clone());
    push("const", flag(n.constant));
    push("copy", flag(n.copy));
    push("data", n.data.map(|d| d.as_str().to_string()));
    push("line", opts.lines.then(|| n.line.to_string()));
    push("method", flag(n.method));
    push("name", n.name.clone());
    push("ref", n.reference.map(|r| r.to_string()));
    push("spread", flag(n.spread));
    push("vararg", flag(n.vararg));
    a.iter()
        .map(|(k, v)| format!(" {k}=\"{}\"", quick_xml::escape::escape(v.as_str())))
        .collect()
}

fn write_node(n: &XmirNode, depth: usize, opts: SerializeOptions, out: &mut String) {
    let pad = "  ".repeat(depth);
    let at = attrs(n, opts);
    if n.data.is_some() {
        let payload = n.payload.as_deref().unwrap_or_default();
        out.push_str(&format!("{pad}<o{at}>{}</o>\n", esc(payload)));
    } else if n.children.is_empty() {
        out.push_str(&format!("{pad}<o{at}/>\n"));
    } else {
        out.push_str(&format!("{pad}<o{at}>\n"));
        for c in &n.children {
            write_node(c, depth + 1, opts, out);
        }
        out.push_str(&format!("{pad}</o>\n"));
    }
}

enum Frame {
    Program,
    License(String),
    Metas,
    Meta(Meta),
    Head(String),
    Tail(String),
    Object(XmirNode),
}

pub fn parse_xmir(text: &str) -> Result<XmirDoc, XmirError> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(false);
    let mut doc = XmirDoc::default();
    let mut stack: Vec<Frame> = Vec::new();
    let mut seen_root = false;
    let err = |reader: &Reader<&[u8]>, m: String| XmirError::Xml(format!("at byte {}: {m}", reader.buffer_position()));
    loop {
        let ev = reader.read_event().map_err(|e| err(&reader, e.to_string()))?;
        match ev {
            Event::Start(e) => {
                let frame = open(&e, &stack, seen_root).map_err(|m| err(&reader, m))?;
                seen_root = true;
                stack.push(frame);
            }
            Event::Empty(e) => {
                let frame = open(&e, &stack, seen_root).map_err(|m| err(&reader, m))?;
                seen_root = true;
                close(frame, &mut stack, &mut doc);
            }
            Event::End(_) => {
                let frame = stack.pop().ok_or_else(|| err(&reader, "unbalanced end tag".into()))?;
                close(frame, &mut stack, &mut doc);
            }
            Event::Text(t) => {
                let s = t.unescape().map_err(|e| err(&reader, e.to_string()))?;
                match stack.last_mut() {
                    Some(Frame::Object(n)) if n.data.is_some() => {
                        n.payload.get_or_insert_with(String::new).push_str(&s)
                    }
                    Some(Frame::License(l)) | Some(Frame::Head(l)) | Some(Frame::Tail(l)) => l.push_str(&s),
                    _ if s.trim().is_empty() => {}
                    _ => return Err(err(&reader, format!("unexpected text '{}'", s.trim()))),
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if !stack.is_empty() {
        return Err(XmirError::Xml("unexpected end of document".into()));
    }
    if !seen_root {
        return Err(XmirError::Xml("no <program> root".into()));
    }
    Ok(doc)
}

fn open(e: &BytesStart, stack: &[Frame], seen_root: bool) -> Result<Frame, String> {
    let tag = String::from_utf8_lossy(e.name().as_ref()).into_owned();
    let mut get = Vec::new();
    for a in e.attributes() {
        let a = a.map_err(|x| x.to_string())?;
        let key = String::from_utf8_lossy(a.key.as_ref()).into_owned();
        let val = a.unescape_value().map_err(|x| x.to_string())?.into_owned();
        get.push((key, val));
    }
    let attr = |k: &str| get.iter().find(|(key, _)| key == k).map(|(_, v)| v.clone());
    let parent = stack.last();
    match (tag.as_str(), parent) {
        ("program", None) if !seen_root => Ok(Frame::Program),
        ("license", Some(Frame::Program)) => Ok(Frame::License(String::new())),
        ("metas", Some(Frame::Program)) => Ok(Frame::Metas),
        ("meta", Some(Frame::Metas)) => Ok(Frame::Meta(Meta {
            head: String::new(),
            tail: None,
            line: attr("line").and_then(|l| l.parse().ok()).unwrap_or(0),
        })),
        ("head", Some(Frame::Meta(_))) => Ok(Frame::Head(String::new())),
        ("tail", Some(Frame::Meta(_))) => Ok(Frame::Tail(String::new())),
        ("o", Some(Frame::Program)) | ("o", Some(Frame::Object(_))) => {
            let mut n = XmirNode::new(0);
            for (k, v) in &get {
                match k.as_str() {
                    "abstract" => n.empty_abstraction = true,
                    "as" => n.tag = Some(v.clone()),
                    "atom" => n.atom = Some(v.clone()),
                    "base" => n.base = Some(v.clone()),
                    "const" => n.constant = true,
                    "copy" => n.copy = true,
                    "data" => {
                        n.data = Some(DataKind::from_name(v).ok_or_else(|| format!("unknown data kind '{v}'"))?)
                    }
                    "line" => n.line = v.parse().map_err(|_| format!("bad line '{v}'"))?,
                    "method" => n.method = true,
                    "name" => n.name = Some(v.clone()),
                    "ref" => n.reference = Some(v.parse().map_err(|_| format!("bad ref '{v}'"))?),
                    "spread" => n.spread = true,
                    "vararg" => n.vararg = true,
                    other => return Err(format!("unknown attribute '{other}'")),
                }
            }
            if n.data.is_some() {
                n.payload = Some(String::new());
            }
            Ok(Frame::Object(n))
        }
        _ => Err(format!("unexpected element <{tag}>")),
    }
}

fn close(frame: Frame, stack: &mut [Frame], doc: &mut XmirDoc) {
    match frame {
        Frame::Program | Frame::Metas => {}
        Frame::License(text) => doc.license = text.split('\n').map(str::to_string).collect(),
        Frame::Meta(m) => doc.metas.push(m),
        Frame::Head(h) => {
            if let Some(Frame::Meta(m)) = stack.last_mut() {
                m.head = h;
            }
        }
        Frame::Tail(t) => {
            if let Some(Frame::Meta(m)) = stack.last_mut() {
                m.tail = Some(t);
            }
        }
        Frame::Object(n) => match stack.last_mut() {
            Some(Frame::Object(p)) => p.children.push(n),
            _ => doc.objects.push(n),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_program() {
        let doc = XmirDoc::default();
        assert_eq!(serialize_xmir(&doc), "<program/>\n");
        assert_eq!(parse_xmir("<program/>").unwrap(), doc);
    }

    #[test]
    fn mismatched_tags_fail() {
        assert!(parse_xmir("<program><o></program>").is_err());
        assert!(parse_xmir("<program><o name=\"a\">").is_err());
    }
}
