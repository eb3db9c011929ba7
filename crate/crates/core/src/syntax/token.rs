//! Off-side lexer. Indentation is two spaces per level and turns into
//! TAB/UNTAB tokens; comment-only and blank lines never move the level.

use crate::error::ParseError;
use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    /// Data literal; the lexeme is the raw text.
    Data,
    /// `+name tail`, lexeme is the whole line after `+`.
    Meta,
    /// `# ...`, lexeme excludes the `#`.
    Comment,
    /// `/name` or `/?` after an abstraction.
    Slash,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Gt,
    Dot,
    Colon,
    Bang,
    Apostrophe,
    Ellipsis,
    At,
    Dollar,
    Amp,
    Caret,
    Star,
    Lt,
    Q,
    QQ,
    Eol,
    Tab,
    Untab,
    Eof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub line: usize,
    pub column: usize,
    /// Whitespace (or start of line) right before the token.
    pub spaced: bool,
}

fn is_name_char(c: char) -> bool {
    !c.is_whitespace()
        && !matches!(
            c,
            '.' | '[' | ']' | '(' | ')' | '!' | ':' | '"' | '\'' | '>' | '<' | '^' | '$' | '&'
                | '*' | '/' | '@' | '#'
        )
}

fn is_hex_upper(c: char) -> bool {
    c.is_ascii_digit() || ('A'..='F').contains(&c)
}

/// Does a data literal end here?
fn boundary(chars: &[char], i: usize) -> bool {
    i >= chars.len() || matches!(chars[i], ' ' | ')' | ']' | '.' | ':' | '(' | '>' | '\'' | '!')
}

/// Length of a bytes literal starting at `i`, if there is one.
fn bytes_len(chars: &[char], i: usize) -> Option<usize> {
    if chars.get(i) == Some(&'-') && chars.get(i + 1) == Some(&'-') {
        return boundary(chars, i + 2).then_some(2);
    }
    let pair = |k: usize| k + 1 < chars.len() && is_hex_upper(chars[k]) && is_hex_upper(chars[k + 1]);
    if !pair(i) {
        return None;
    }
    let mut j = i + 2;
    let mut groups = 1;
    while chars.get(j) == Some(&'-') && pair(j + 1) {
        j += 3;
        groups += 1;
    }
    if groups == 1 {
        if chars.get(j) == Some(&'-') && boundary(chars, j + 1) {
            return Some(3);
        }
        return None;
    }
    boundary(chars, j).then_some(j - i)
}

/// Length of a numeric literal starting at `i`.
fn number_len(chars: &[char], i: usize) -> Option<usize> {
    let mut j = i;
    if matches!(chars.get(j), Some('+') | Some('-')) {
        j += 1;
    }
    if !chars.get(j).is_some_and(|c| c.is_ascii_digit()) {
        return None;
    }
    if chars[j] == '0' && matches!(chars.get(j + 1), Some('x')) {
        let mut k = j + 2;
        while chars.get(k).is_some_and(|c| c.is_ascii_hexdigit()) {
            k += 1;
        }
        if k > j + 2 {
            return Some(k - i);
        }
    }
    while chars.get(j).is_some_and(|c| c.is_ascii_digit()) {
        j += 1;
    }
    if chars.get(j) == Some(&'.') && chars.get(j + 1).is_some_and(|c| c.is_ascii_digit()) {
        j += 1;
        while chars.get(j).is_some_and(|c| c.is_ascii_digit()) {
            j += 1;
        }
    }
    if matches!(chars.get(j), Some('e') | Some('E')) {
        let mut k = j + 1;
        if matches!(chars.get(k), Some('+') | Some('-')) {
            k += 1;
        }
        if chars.get(k).is_some_and(|c| c.is_ascii_digit()) {
            while chars.get(k).is_some_and(|c| c.is_ascii_digit()) {
                k += 1;
            }
            j = k;
        }
    }
    Some(j - i)
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut level = 0usize;
    let mut last_line = 1;
    for (idx, raw) in src.split('\n').enumerate() {
        let line_no = idx + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        if raw.trim().is_empty() {
            continue;
        }
        last_line = line_no;
        let chars: Vec<char> = raw.chars().collect();
        let mut indent = 0;
        while indent < chars.len() && (chars[indent] == ' ' || chars[indent] == '\t') {
            if chars[indent] == '\t' {
                return Err(ParseError::Indentation {
                    line: line_no,
                    column: indent + 1,
                    message: "tabs are not allowed".into(),
                });
            }
            indent += 1;
        }
        if chars[indent] == '#' {
            let text: String = chars[indent + 1..].iter().collect();
            out.push(tok(TokenKind::Comment, text, line_no, indent + 1, true));
            out.push(tok(TokenKind::Eol, String::new(), line_no, chars.len() + 1, false));
            continue;
        }
        if indent % 2 != 0 {
            return Err(ParseError::Indentation {
                line: line_no,
                column: indent + 1,
                message: format!("{indent} spaces is not a multiple of two"),
            });
        }
        let new_level = indent / 2;
        if new_level > level + 1 {
            return Err(ParseError::Indentation {
                line: line_no,
                column: indent + 1,
                message: "indented more than one level".into(),
            });
        }
        if new_level == level + 1 {
            out.push(tok(TokenKind::Tab, String::new(), line_no, 1, true));
        }
        for _ in new_level..level {
            out.push(tok(TokenKind::Untab, String::new(), line_no, 1, true));
        }
        level = new_level;
        lex_line(&chars, indent, line_no, &mut out)?;
        out.push(tok(TokenKind::Eol, String::new(), line_no, chars.len() + 1, false));
    }
    for _ in 0..level {
        out.push(tok(TokenKind::Untab, String::new(), last_line + 1, 1, true));
    }
    out.push(tok(TokenKind::Eof, String::new(), last_line + 1, 1, true));
    Ok(out)
}

fn tok(kind: TokenKind, lexeme: String, line: usize, column: usize, spaced: bool) -> Token {
    Token {
        kind,
        lexeme,
        line,
        column,
        spaced,
    }
}

fn lex_line(chars: &[char], start: usize, line: usize, out: &mut Vec<Token>) -> Result<(), ParseError> {
    let mut i = start;
    let mut spaced = true;
    if chars[i] == '+' && chars.get(i + 1).is_some_and(|c| c.is_ascii_lowercase()) {
        let text: String = chars[i + 1..].iter().collect();
        out.push(tok(TokenKind::Meta, text.trim_end().to_string(), line, i + 1, true));
        return Ok(());
    }
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == ' ' {
            spaced = true;
            i += 1;
            continue;
        }
        if c == '\t' {
            return Err(ParseError::syntax(line, col, "tab character"));
        }
        let simple = |k: TokenKind| Some((k, 1));
        let single = match c {
            '[' => simple(TokenKind::LBracket),
            ']' => simple(TokenKind::RBracket),
            '(' => simple(TokenKind::LParen),
            ')' => simple(TokenKind::RParen),
            '>' => simple(TokenKind::Gt),
            ':' => simple(TokenKind::Colon),
            '!' => simple(TokenKind::Bang),
            '\'' => simple(TokenKind::Apostrophe),
            '@' => simple(TokenKind::At),
            '$' => simple(TokenKind::Dollar),
            '&' => simple(TokenKind::Amp),
            '^' => simple(TokenKind::Caret),
            '*' => simple(TokenKind::Star),
            '<' => simple(TokenKind::Lt),
            '.' if chars.get(i + 1) == Some(&'.') && chars.get(i + 2) == Some(&'.') => {
                Some((TokenKind::Ellipsis, 3))
            }
            '.' => simple(TokenKind::Dot),
            _ => None,
        };
        if let Some((kind, len)) = single {
            let lexeme: String = chars[i..i + len].iter().collect();
            out.push(tok(kind, lexeme, line, col, spaced));
            i += len;
            spaced = false;
            continue;
        }
        if c == '#' {
            let text: String = chars[i + 1..].iter().collect();
            out.push(tok(TokenKind::Comment, text, line, col, spaced));
            return Ok(());
        }
        if c == '"' {
            let mut j = i + 1;
            let mut closed = false;
            while j < chars.len() {
                match chars[j] {
                    '\\' => j += 2,
                    '"' => {
                        closed = true;
                        break;
                    }
                    _ => j += 1,
                }
            }
            if !closed {
                return Err(ParseError::syntax(line, col, "unterminated string"));
            }
            let lexeme: String = chars[i..=j].iter().collect();
            out.push(tok(TokenKind::Data, lexeme, line, col, spaced));
            i = j + 1;
            spaced = false;
            continue;
        }
        if c == '/' {
            let rest = &chars[i + 1..];
            if rest.first() == Some(&'?') {
                out.push(tok(TokenKind::Slash, "?".into(), line, col, spaced));
                i += 2;
                spaced = false;
                continue;
            }
            let name_len = rest.iter().take_while(|c| is_name_char(**c)).count();
            let closing = rest.iter().position(|c| *c == '/');
            match closing {
                Some(p) if p < name_len || name_len == 0 || rest.get(name_len) == Some(&'/') => {
                    let mut j = i + 1 + p + 1;
                    while chars.get(j).is_some_and(|c| c.is_ascii_lowercase()) {
                        j += 1;
                    }
                    let lexeme: String = chars[i..j].iter().collect();
                    out.push(tok(TokenKind::Data, lexeme, line, col, spaced));
                    i = j;
                }
                _ if name_len > 0 => {
                    let name: String = rest[..name_len].iter().collect();
                    out.push(tok(TokenKind::Slash, name, line, col, spaced));
                    i += 1 + name_len;
                }
                _ => return Err(ParseError::syntax(line, col, "stray '/'")),
            }
            spaced = false;
            continue;
        }
        if let Some(len) = bytes_len(chars, i) {
            let lexeme: String = chars[i..i + len].iter().collect();
            out.push(tok(TokenKind::Data, lexeme, line, col, spaced));
            i += len;
            spaced = false;
            continue;
        }
        if let Some(len) = number_len(chars, i) {
            let lexeme: String = chars[i..i + len].iter().collect();
            out.push(tok(TokenKind::Data, lexeme, line, col, spaced));
            i += len;
            spaced = false;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let len = chars[i..].iter().take_while(|c| is_name_char(**c)).count();
            let lexeme: String = chars[i..i + len].iter().collect();
            let kind = match lexeme.as_str() {
                "TRUE" | "FALSE" => TokenKind::Data,
                "Q" => TokenKind::Q,
                "QQ" => TokenKind::QQ,
                _ => TokenKind::Ident,
            };
            out.push(tok(kind, lexeme, line, col, spaced));
            i += len;
            spaced = false;
            continue;
        }
        return Err(ParseError::syntax(line, col, format!("unexpected character '{c}'")));
    }
    Ok(())
}

/// Converts a data lexeme to a value.
pub fn parse_data(lexeme: &str) -> Result<Value, String> {
    match lexeme {
        "TRUE" => return Ok(Value::Bool(true)),
        "FALSE" => return Ok(Value::Bool(false)),
        "--" => return Ok(Value::Bytes(Vec::new())),
        _ => {}
    }
    if let Some(body) = lexeme.strip_prefix('"') {
        let body = body.strip_suffix('"').ok_or("unterminated string")?;
        return unescape(body).map(Value::Str);
    }
    if lexeme.starts_with('/') {
        return Ok(Value::Regex(lexeme.to_string()));
    }
    let chars: Vec<char> = lexeme.chars().collect();
    if bytes_len(&chars, 0) == Some(chars.len()) {
        let bytes = lexeme
            .split('-')
            .filter(|s| !s.is_empty())
            .map(|s| u8::from_str_radix(s, 16).map_err(|e| e.to_string()))
            .collect::<Result<Vec<u8>, String>>()?;
        return Ok(Value::Bytes(bytes));
    }
    if number_len(&chars, 0) != Some(chars.len()) {
        return Err(format!("not a data literal: {lexeme}"));
    }
    let (neg, digits) = match lexeme.as_bytes()[0] {
        b'-' => (true, &lexeme[1..]),
        b'+' => (false, &lexeme[1..]),
        _ => (false, lexeme),
    };
    if let Some(hex) = digits.strip_prefix("0x") {
        let v = i64::from_str_radix(hex, 16).map_err(|e| e.to_string())?;
        return Ok(Value::Int(if neg { -v } else { v }));
    }
    if digits.contains(['.', 'e', 'E']) {
        let v: f64 = lexeme.parse().map_err(|e: std::num::ParseFloatError| e.to_string())?;
        return Ok(Value::Float(v));
    }
    lexeme
        .parse::<i64>()
        .map(Value::Int)
        .map_err(|e| format!("{lexeme}: {e}"))
}

fn unescape(body: &str) -> Result<String, String> {
    let mut out = String::with_capacity(body.len());
    let mut it = body.chars();
    while let Some(c) = it.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match it.next() {
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some('r') => out.push('\r'),
            Some('"') => out.push('"'),
            Some('\\') => out.push('\\'),
            Some('\'') => out.push('\''),
            Some('u') => {
                let hex: String = it.by_ref().take(4).collect();
                let code = u32::from_str_radix(&hex, 16).map_err(|_| format!("bad escape \\u{hex}"))?;
                out.push(char::from_u32(code).ok_or("bad code point")?);
            }
            other => return Err(format!("bad escape \\{}", other.map(String::from).unwrap_or_default())),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn simple_abstraction() {
        use TokenKind::*;
        assert_eq!(kinds("[x] > a\n"), vec![LBracket, Ident, RBracket, Gt, Ident, Eol, Eof]);
    }

    #[test]
    fn offside() {
        use TokenKind::*;
        let k = kinds("[] > a\n  b > c\n    d\ne\n");
        assert_eq!(
            k,
            vec![
                LBracket, RBracket, Gt, Ident, Eol, Tab, Ident, Gt, Ident, Eol, Tab, Ident, Eol, Untab,
                Untab, Ident, Eol, Eof
            ]
        );
    }

    #[test]
    fn odd_indent_and_tabs_fail() {
        assert!(matches!(tokenize("a\n   b\n"), Err(ParseError::Indentation { line: 2, .. })));
        assert!(matches!(tokenize("a\n\tb\n"), Err(ParseError::Indentation { line: 2, .. })));
        assert!(matches!(tokenize("a\n    b\n"), Err(ParseError::Indentation { .. })));
    }

    #[test]
    fn literals() {
        assert_eq!(parse_data("1F-E5-77-A6").unwrap(), Value::Bytes(vec![0x1F, 0xE5, 0x77, 0xA6]));
        assert_eq!(parse_data("--").unwrap(), Value::Bytes(vec![]));
        assert_eq!(parse_data("-1024").unwrap(), Value::Int(-1024));
        assert_eq!(parse_data("0x1A7E").unwrap(), Value::Int(0x1A7E));
        assert_eq!(parse_data("2.4e-34").unwrap(), Value::Float(2.4e-34));
        assert_eq!(parse_data("\"a\\nb\"").unwrap(), Value::Str("a\nb".into()));
        assert_eq!(parse_data("TRUE").unwrap(), Value::Bool(true));
    }

    #[test]
    fn number_then_dot_method() {
        let t = tokenize("3.14.times 2").unwrap();
        assert_eq!(t[0].lexeme, "3.14");
        assert_eq!(t[1].kind, TokenKind::Dot);
        assert_eq!(t[2].lexeme, "times");
        let t = tokenize("42.<").unwrap();
        assert_eq!(t[0].lexeme, "42");
        assert_eq!(t[2].kind, TokenKind::Lt);
    }

    #[test]
    fn atom_suffix_and_regex() {
        let t = tokenize("[x] > f /float").unwrap();
        assert_eq!(t[5].kind, TokenKind::Slash);
        assert_eq!(t[5].lexeme, "float");
        let t = tokenize("x /[a-z]+/i").unwrap();
        assert_eq!(t[1].kind, TokenKind::Data);
    }
}
