use std::io::{BufRead, Read, Write};

use super::{DuplicateAtom, Registry};
use crate::eval::{Bottom, Machine, Obj, Res};
use crate::value::Value;

const EO: &str = "org.eolang";

fn bottom<T>(msg: impl Into<String>) -> Res<T> {
    Err(Bottom::new(msg))
}

fn truth(m: &mut Machine, b: bool) -> Res<Obj> {
    Ok(m.data(Value::Bool(b)))
}

fn float(v: &Value) -> Option<f64> {
    match v {
        Value::Int(i) => Some(*i as f64),
        Value::Float(f) => Some(*f),
        _ => None,
    }
}

type IntOp = fn(i64, i64) -> Option<i64>;
type FloatOp = fn(f64, f64) -> f64;

fn arith(name: &str, a: &Value, b: &Value, iop: IntOp, fop: FloatOp) -> Res<Value> {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => match iop(*x, *y) {
            Some(r) => Ok(Value::Int(r)),
            None => bottom(format!("integer overflow in {name}")),
        },
        _ => match (float(a), float(b)) {
            (Some(x), Some(y)) => Ok(Value::Float(fop(x, y))),
            _ => bottom(format!("{name} expects numbers, got {} and {}", a.kind_name(), b.kind_name())),
        },
    }
}

fn text(v: &Value) -> String {
    match v {
        Value::Str(s) => s.clone(),
        other => other.to_string(),
    }
}

pub(super) fn register_builtins(r: &mut Registry) -> Result<(), DuplicateAtom> {
    numbers(r)?;
    booleans(r)?;
    strings(r)?;
    arrays(r)?;
    io(r)?;
    control(r)?;
    Ok(())
}

fn numbers(r: &mut Registry) -> Result<(), DuplicateAtom> {
    let binary: [(&str, IntOp, FloatOp); 3] = [
        ("plus", i64::checked_add, |x, y| x + y),
        ("minus", i64::checked_sub, |x, y| x - y),
        ("times", i64::checked_mul, |x, y| x * y),
    ];
    for kind in ["int", "float"] {
        for (name, iop, fop) in binary {
            let fqn = format!("{EO}.{kind}.{name}");
            r.add(&fqn, &["other"], false, false, move |m, me| {
                let a = m.receiver_value(me)?;
                let b = m.arg_value(me, &format!("{EO}.{kind}.{name}"), 0)?;
                let v = arith(name, &a, &b, iop, fop)?;
                Ok(m.data(v))
            })?;
        }
        r.add(&format!("{EO}.{kind}.div"), &["other"], false, false, move |m, me| {
            let a = m.receiver_value(me)?;
            let b = m.arg_value(me, &format!("{EO}.{kind}.div"), 0)?;
            if float(&b) == Some(0.0) {
                return bottom("division by zero");
            }
            let v = arith("div", &a, &b, i64::checked_div, |x, y| x / y)?;
            Ok(m.data(v))
        })?;
        r.add(&format!("{EO}.{kind}.mod"), &["other"], false, false, move |m, me| {
            let a = m.receiver_value(me)?;
            let b = m.arg_value(me, &format!("{EO}.{kind}.mod"), 0)?;
            if float(&b) == Some(0.0) {
                return bottom("division by zero");
            }
            let v = arith("mod", &a, &b, i64::checked_rem, |x, y| x % y)?;
            Ok(m.data(v))
        })?;
        r.add(&format!("{EO}.{kind}.pow"), &["other"], false, false, move |m, me| {
            let a = m.receiver_value(me)?;
            let b = m.arg_value(me, &format!("{EO}.{kind}.pow"), 0)?;
            let v = match (&a, &b) {
                (Value::Int(x), Value::Int(y)) if *y >= 0 => match u32::try_from(*y).ok().and_then(|e| x.checked_pow(e)) {
                    Some(p) => Value::Int(p),
                    None => return bottom("integer overflow in pow"),
                },
                _ => match (float(&a), float(&b)) {
                    (Some(x), Some(y)) => Value::Float(x.powf(y)),
                    _ => return bottom("pow expects numbers"),
                },
            };
            Ok(m.data(v))
        })?;
        let compare: [(&str, fn(f64, f64) -> bool, fn(i64, i64) -> bool); 4] = [
            ("lt", |x, y| x < y, |x, y| x < y),
            ("lte", |x, y| x <= y, |x, y| x <= y),
            ("gt", |x, y| x > y, |x, y| x > y),
            ("gte", |x, y| x >= y, |x, y| x >= y),
        ];
        for (name, fcmp, icmp) in compare {
            let fqn = format!("{EO}.{kind}.{name}");
            r.add(&fqn, &["other"], false, false, move |m, me| {
                let a = m.receiver_value(me)?;
                let b = m.arg_value(me, &format!("{EO}.{kind}.{name}"), 0)?;
                let res = match (&a, &b) {
                    (Value::Int(x), Value::Int(y)) => icmp(*x, *y),
                    _ => match (float(&a), float(&b)) {
                        (Some(x), Some(y)) => fcmp(x, y),
                        _ => return bottom(format!("{name} expects numbers")),
                    },
                };
                truth(m, res)
            })?;
        }
        r.add(&format!("{EO}.{kind}.neg"), &[], false, false, |m, me| {
            let v = match m.receiver_value(me)? {
                Value::Int(i) => match i.checked_neg() {
                    Some(n) => Value::Int(n),
                    None => return bottom("integer overflow in neg"),
                },
                Value::Float(f) => Value::Float(-f),
                other => return bottom(format!("neg expects a number, got {}", other.kind_name())),
            };
            Ok(m.data(v))
        })?;
        r.add(&format!("{EO}.{kind}.sqrt"), &[], false, false, |m, me| {
            let v = m.receiver_value(me)?;
            match float(&v) {
                Some(x) => Ok(m.data(Value::Float(x.sqrt()))),
                None => bottom("sqrt expects a number"),
            }
        })?;
        r.add(&format!("{EO}.{kind}.as-float"), &[], false, false, |m, me| {
            let v = m.receiver_value(me)?;
            match float(&v) {
                Some(x) => Ok(m.data(Value::Float(x))),
                None => bottom("as-float expects a number"),
            }
        })?;
        r.add(&format!("{EO}.{kind}.as-int"), &[], false, false, |m, me| match m.receiver_value(me)? {
            Value::Int(i) => Ok(m.data(Value::Int(i))),
            Value::Float(f) if f.is_finite() => Ok(m.data(Value::Int(f.trunc() as i64))),
            _ => bottom("as-int expects a finite number"),
        })?;
    }
    for kind in ["int", "float", "string", "bool", "bytes"] {
        r.add(&format!("{EO}.{kind}.eq"), &["other"], false, false, move |m, me| {
            let a = m.receiver_value(me)?;
            let other = m.arg(me, &format!("{EO}.{kind}.eq"), 0)?;
            let res = match m.dataize(&other) {
                Ok(b) => a.data_eq(&b),
                Err(_) => false,
            };
            truth(m, res)
        })?;
        r.add(&format!("{EO}.{kind}.as-string"), &[], false, false, |m, me| {
            let v = m.receiver_value(me)?;
            Ok(m.data(Value::Str(text(&v))))
        })?;
        r.add(&format!("{EO}.{kind}.as-bytes"), &[], false, false, |m, me| {
            let v = m.receiver_value(me)?;
            Ok(m.data(Value::Bytes(v.as_bytes())))
        })?;
    }
    Ok(())
}

fn booleans(r: &mut Registry) -> Result<(), DuplicateAtom> {
    r.add(&format!("{EO}.bool.if"), &["left", "right"], false, false, |m, me| {
        let fqn = format!("{EO}.bool.if");
        match m.receiver_value(me)? {
            Value::Bool(true) => m.arg(me, &fqn, 0),
            Value::Bool(false) => m.arg(me, &fqn, 1),
            other => bottom(format!("if expects a bool, got {}", other.kind_name())),
        }
    })?;
    r.add(&format!("{EO}.bool.and"), &["other"], false, false, |m, me| {
        if m.receiver_value(me)? != Value::Bool(true) {
            return truth(m, false);
        }
        let b = m.arg_value(me, &format!("{EO}.bool.and"), 0)?;
        truth(m, b == Value::Bool(true))
    })?;
    r.add(&format!("{EO}.bool.or"), &["other"], false, false, |m, me| {
        if m.receiver_value(me)? == Value::Bool(true) {
            return truth(m, true);
        }
        let b = m.arg_value(me, &format!("{EO}.bool.or"), 0)?;
        truth(m, b == Value::Bool(true))
    })?;
    r.add(&format!("{EO}.bool.not"), &[], false, false, |m, me| match m.receiver_value(me)? {
        Value::Bool(b) => truth(m, !b),
        other => bottom(format!("not expects a bool, got {}", other.kind_name())),
    })?;
    r.add(&format!("{EO}.bool.while"), &["body"], false, false, |m, me| {
        let fqn = format!("{EO}.bool.while");
        let cond = m.receiver(me)?;
        let mut last = Value::Bool(false);
        let mut first = true;
        loop {
            let c = if first {
                first = false;
                m.dataize(&cond)?
            } else {
                let again = m.receiver(me)?;
                m.dataize(&again)?
            };
            match c {
                Value::Bool(true) => {}
                Value::Bool(false) => break,
                other => return bottom(format!("while expects a bool, got {}", other.kind_name())),
            }
            let body = m.arg(me, &fqn, 0)?;
            last = m.dataize(&body)?;
        }
        Ok(m.data(last))
    })?;
    Ok(())
}

fn strings(r: &mut Registry) -> Result<(), DuplicateAtom> {
    fn string(v: Value) -> Res<String> {
        match v {
            Value::Str(s) => Ok(s),
            other => bottom(format!("expected a string, got {}", other.kind_name())),
        }
    }
    r.add(&format!("{EO}.string.length"), &[], false, false, |m, me| {
        let s = string(m.receiver_value(me)?)?;
        Ok(m.data(Value::Int(s.chars().count() as i64)))
    })?;
    r.add(&format!("{EO}.string.size"), &[], false, false, |m, me| {
        let s = string(m.receiver_value(me)?)?;
        Ok(m.data(Value::Int(s.len() as i64)))
    })?;
    r.add(&format!("{EO}.string.concat"), &["other"], false, false, |m, me| {
        let mut s = string(m.receiver_value(me)?)?;
        let b = m.arg_value(me, &format!("{EO}.string.concat"), 0)?;
        s.push_str(&text(&b));
        Ok(m.data(Value::Str(s)))
    })?;
    r.add(&format!("{EO}.string.trim"), &[], false, false, |m, me| {
        let s = string(m.receiver_value(me)?)?;
        Ok(m.data(Value::Str(s.trim().to_string())))
    })?;
    r.add(&format!("{EO}.string.as-int"), &[], false, false, |m, me| {
        let s = string(m.receiver_value(me)?)?;
        match s.trim().parse::<i64>() {
            Ok(i) => Ok(m.data(Value::Int(i))),
            Err(_) => bottom(format!("'{s}' is not an integer")),
        }
    })?;
    r.add(&format!("{EO}.string.as-float"), &[], false, false, |m, me| {
        let s = string(m.receiver_value(me)?)?;
        match s.trim().parse::<f64>() {
            Ok(f) => Ok(m.data(Value::Float(f))),
            Err(_) => bottom(format!("'{s}' is not a number")),
        }
    })?;
    r.add(&format!("{EO}.txt.sprintf"), &["format", "args"], true, true, |m, me| {
        let fqn = format!("{EO}.txt.sprintf");
        let fmt = string(m.arg_value(me, &fqn, 0)?)?;
        let args = m.arg(me, &fqn, 1)?;
        let items = m.items(&args)?;
        let mut vals = Vec::new();
        for i in &items {
            vals.push(m.dataize(i)?);
        }
        let s = sprintf(&fmt, &vals)?;
        Ok(m.data(Value::Str(s)))
    })?;
    Ok(())
}

/// Java-style formatting for %s %d %f %b %x %n and %%.
pub fn sprintf(fmt: &str, args: &[Value]) -> Res<String> {
    let mut out = String::new();
    let mut next = args.iter();
    let mut chars = fmt.chars().peekable();
    while let Some(c) = chars.next() {
        if c != '%' {
            out.push(c);
            continue;
        }
        let mut precision: Option<usize> = None;
        if chars.peek() == Some(&'.') {
            chars.next();
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            precision = digits.parse().ok();
        }
        let Some(spec) = chars.next() else {
            return bottom("format ends with %");
        };
        if spec == '%' {
            out.push('%');
            continue;
        }
        if spec == 'n' {
            out.push('\n');
            continue;
        }
        let Some(v) = next.next() else {
            return bottom(format!("no argument for %{spec}"));
        };
        match (spec, v) {
            ('s', v) => out.push_str(&text(v)),
            ('d', Value::Int(i)) => out.push_str(&i.to_string()),
            ('f', v) if float(v).is_some() => {
                out.push_str(&format!("{:.*}", precision.unwrap_or(6), float(v).unwrap_or_default()))
            }
            ('b', Value::Bool(b)) => out.push_str(if *b { "true" } else { "false" }),
            ('x', Value::Int(i)) => out.push_str(&format!("{i:x}")),
            (s, v) => return bottom(format!("%{s} does not accept {}", v.kind_name())),
        }
    }
    Ok(out)
}

fn arrays(r: &mut Registry) -> Result<(), DuplicateAtom> {
    r.add(&format!("{EO}.array"), &[], false, true, |m, me| {
        let items = m.positional(me)?;
        Ok(m.array(items))
    })?;
    fn index(m: &mut Machine, me: &Obj, fqn: &str) -> Res<Obj> {
        let recv = m.receiver(me)?;
        let items = m.items(&recv)?;
        let i = match m.arg_value(me, fqn, 0)? {
            Value::Int(i) => i,
            other => return bottom(format!("index must be an int, got {}", other.kind_name())),
        };
        let at = if i < 0 { items.len() as i64 + i } else { i };
        usize::try_from(at)
            .ok()
            .and_then(|k| items.get(k).cloned())
            .ok_or_else(|| Bottom::new(format!("index {i} is out of range for {} items", items.len())))
    }
    r.add(&format!("{EO}.array.at"), &["index"], false, false, |m, me| index(m, me, &format!("{EO}.array.at")))?;
    r.add(&format!("{EO}.array.get"), &["index"], false, false, |m, me| index(m, me, &format!("{EO}.array.get")))?;
    for name in ["size", "length"] {
        r.add(&format!("{EO}.array.{name}"), &[], false, false, |m, me| {
            let recv = m.receiver(me)?;
            let n = m.items(&recv)?.len();
            Ok(m.data(Value::Int(n as i64)))
        })?;
    }
    for (name, with_index) in [("map", false), ("mapi", true)] {
        r.add(&format!("{EO}.array.{name}"), &["f"], false, false, move |m, me| {
            let recv = m.receiver(me)?;
            let items = m.items(&recv)?;
            let f = m.arg(me, &format!("{EO}.array.{name}"), 0)?;
            let mut params = m.free_attrs_of(&f);
            if params.is_empty() {
                params = vec!["α0".into(), "α1".into()];
            }
            let mut out = Vec::new();
            for (i, item) in items.into_iter().enumerate() {
                let mut binds = vec![(params[0].clone(), item)];
                if with_index {
                    let idx = m.data(Value::Int(i as i64));
                    if let Some(p) = params.get(1) {
                        binds.push((p.clone(), idx));
                    }
                }
                out.push(m.apply(&f, binds));
            }
            Ok(m.array(out))
        })?;
    }
    Ok(())
}

fn io(r: &mut Registry) -> Result<(), DuplicateAtom> {
    r.add(&format!("{EO}.io.stdout"), &["text"], false, true, |m, me| {
        let v = m.arg_value(me, &format!("{EO}.io.stdout"), 0)?;
        let s = text(&v);
        m.io.stdout
            .write_all(s.as_bytes())
            .and_then(|_| m.io.stdout.flush())
            .map_err(|e| Bottom::new(format!("cannot write: {e}")))?;
        truth(m, true)
    })?;
    r.add(&format!("{EO}.io.stdin"), &[], false, true, |m, _| {
        let mut s = String::new();
        m.io.stdin
            .read_to_string(&mut s)
            .map_err(|e| Bottom::new(format!("cannot read: {e}")))?;
        Ok(m.data(Value::Str(s)))
    })?;
    r.add(&format!("{EO}.io.stdin.next-line"), &[], false, false, |m, _| {
        let mut s = String::new();
        let n = m.io.stdin
            .read_line(&mut s)
            .map_err(|e| Bottom::new(format!("cannot read: {e}")))?;
        if n == 0 {
            return bottom("end of input");
        }
        let line = s.strip_suffix('\n').unwrap_or(&s);
        let line = line.strip_suffix('\r').unwrap_or(line).to_string();
        Ok(m.data(Value::Str(line)))
    })?;
    r.add(&format!("{EO}.io.stdin.next"), &[], false, false, |m, _| {
        let mut token = Vec::new();
        let mut byte = [0u8];
        loop {
            let n = m.io.stdin
                .read(&mut byte)
                .map_err(|e| Bottom::new(format!("cannot read: {e}")))?;
            if n == 0 {
                break;
            }
            if byte[0].is_ascii_whitespace() {
                if token.is_empty() {
                    continue;
                }
                break;
            }
            token.push(byte[0]);
        }
        if token.is_empty() {
            return bottom("end of input");
        }
        Ok(m.data(Value::Str(String::from_utf8_lossy(&token).into_owned())))
    })?;
    for (obj, method, params) in [("files", "write", &["file", "data"][..]), ("dir", "walk", &["filter"][..])] {
        let base = format!("{EO}.fs.{obj}");
        r.add(&base, &[], false, true, |_, _| bottom("file system atoms are not supported"))?;
        r.add(&format!("{base}.{method}"), params, false, false, |_, _| {
            bottom("file system atoms are not supported")
        })?;
    }
    Ok(())
}

fn control(r: &mut Registry) -> Result<(), DuplicateAtom> {
    r.add(&format!("{EO}.seq"), &["steps"], true, true, |m, me| {
        let steps = m.arg(me, &format!("{EO}.seq"), 0)?;
        let items = m.items(&steps)?;
        let mut last = Value::Bool(true);
        for i in &items {
            last = m.dataize(i)?;
        }
        Ok(m.data(last))
    })?;
    r.add(&format!("{EO}.memory"), &["init"], false, true, |m, me| {
        let key = me.key();
        if let Some(v) = m.cells.get(&key) {
            let v = v.clone();
            return Ok(m.data(v));
        }
        let v = m
            .arg_value(me, &format!("{EO}.memory"), 0)
            .map_err(|_| Bottom::new("memory is empty"))?;
        m.cells.insert(key, v.clone());
        Ok(m.data(v))
    })?;
    r.add(&format!("{EO}.memory.write"), &["x"], false, false, |m, me| {
        let cell = m.receiver(me)?;
        let v = m.arg_value(me, &format!("{EO}.memory.write"), 0)?;
        m.cells.insert(cell.key(), v);
        truth(m, true)
    })?;
    r.add(&format!("{EO}.try"), &["main", "catch", "finally"], false, true, |m, me| {
        let fqn = format!("{EO}.try");
        let body = m.arg(me, &fqn, 0)?;
        let result = match m.dataize(&body) {
            Ok(v) => Ok(v),
            Err(b) => {
                let catch = m.arg(me, &fqn, 1)?;
                let params = m.free_attrs_of(&catch);
                let e = m.data(Value::Str(b.message));
                let name = params.first().cloned().unwrap_or_else(|| "α0".into());
                let handler = m.apply(&catch, vec![(name, e)]);
                m.dataize(&handler)
            }
        };
        if let Ok(fin) = m.arg(me, &fqn, 2) {
            m.dataize(&fin)?;
        }
        let v = result?;
        Ok(m.data(v))
    })?;
    r.add(&format!("{EO}.error"), &["message"], false, true, |m, me| {
        let v = m.arg_value(me, &format!("{EO}.error"), 0)?;
        bottom(text(&v))
    })?;
    r.add(&format!("{EO}.sum"), &["x"], true, true, |m, me| {
        let xs = m.arg(me, &format!("{EO}.sum"), 0)?;
        let items = m.items(&xs)?;
        let mut acc = Value::Int(0);
        for i in &items {
            let v = m.dataize(i)?;
            acc = arith("sum", &acc, &v, i64::checked_add, |x, y| x + y)?;
        }
        Ok(m.data(acc))
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        let s = sprintf("%d is %s? %b %.2f%%", &[Value::Int(7), Value::Str("odd".into()), Value::Bool(true), Value::Float(1.5)]);
        assert_eq!(s.unwrap(), "7 is odd? true 1.50%");
        assert!(sprintf("%d", &[]).is_err());
    }
}
