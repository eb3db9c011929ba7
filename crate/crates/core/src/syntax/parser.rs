use super::ast::*;
use super::token::{parse_data, tokenize, Token, TokenKind};
use crate::error::ParseError;

pub fn parse(src: &str) -> Result<Program, ParseError> {
    let tokens = tokenize(src)?;
    let mut program = Program::default();
    let mut kept = Vec::with_capacity(tokens.len());
    let mut leading = true;
    let mut i = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        if t.kind == TokenKind::Comment {
            let own_line = kept
                .last()
                .map_or(true, |p: &Token| matches!(p.kind, TokenKind::Eol | TokenKind::Tab | TokenKind::Untab));
            let text = t.lexeme.strip_prefix(' ').unwrap_or(&t.lexeme).to_string();
            if leading {
                program.license.push(text);
            } else {
                program.comments.push((t.line, text));
            }
            if own_line && tokens.get(i + 1).is_some_and(|n| n.kind == TokenKind::Eol) {
                i += 1;
            }
            i += 1;
            continue;
        }
        leading = false;
        kept.push(t.clone());
        i += 1;
    }
    let mut p = Parser { toks: kept, pos: 0 };
    while p.peek().kind == TokenKind::Meta {
        let t = p.next();
        let mut parts = t.lexeme.splitn(2, ' ');
        let head = parts.next().unwrap_or_default().to_string();
        let tail = parts.next().map(|s| s.trim().to_string()).filter(|s| !s.is_empty());
        program.metas.push(Meta {
            head,
            tail,
            line: t.line,
        });
        p.expect(TokenKind::Eol)?;
    }
    while p.peek().kind != TokenKind::Eof {
        let (obj, tag) = p.statement()?;
        if tag.is_some() {
            return Err(p.err_at(obj.line, "a top-level object cannot carry a binding tag"));
        }
        program.objects.push(obj);
    }
    Ok(program)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

/// A line head before vertical children are known.
struct Pending {
    obj: Object,
    inverse: Option<String>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn peek_at(&self, k: usize) -> Option<&Token> {
        self.toks.get(self.pos + k)
    }

    fn next(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at(&self, kind: TokenKind) -> bool {
        self.peek().kind == kind
    }

    fn at_unspaced(&self, kind: TokenKind) -> bool {
        let t = self.peek();
        t.kind == kind && !t.spaced
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let t = self.peek();
        ParseError::syntax(t.line, t.column, message)
    }

    fn err_at(&self, line: usize, message: impl Into<String>) -> ParseError {
        ParseError::syntax(line, 1, message)
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token, ParseError> {
        if self.at(kind.clone()) {
            Ok(self.next())
        } else {
            let t = self.peek();
            Err(self.err(format!("expected {kind:?}, found {:?} '{}'", t.kind, t.lexeme)))
        }
    }

    /// One line plus its indented block and any `.method` continuation lines.
    fn statement(&mut self) -> Result<(Object, Option<String>), ParseError> {
        let (pending, mut tag) = self.line_object()?;
        let children = self.children()?;
        let mut obj = self.finish(pending, children)?;
        while self.at(TokenKind::Dot) && self.peek().spaced {
            let line = self.next().line;
            let method = self.method_name()?;
            if self.at_unspaced(TokenKind::Colon) {
                self.next();
                tag = Some(self.expect(TokenKind::Ident)?.lexeme);
            }
            let mut args = self.call_parens()?;
            let receiver = obj;
            args.extend(self.horizontal_args()?);
            let mut next = Object::new(
                Kind::DotChain {
                    receiver: Box::new(receiver),
                    method,
                    args,
                },
                line,
            );
            next.suffix = self.suffix()?;
            self.end_line()?;
            let children = self.children()?;
            obj = self.finish(
                Pending {
                    obj: next,
                    inverse: None,
                },
                children,
            )?;
        }
        Ok((obj, tag))
    }

    fn end_line(&mut self) -> Result<(), ParseError> {
        if self.at(TokenKind::Eol) {
            self.next();
            Ok(())
        } else if self.at(TokenKind::Eof) {
            Ok(())
        } else {
            let t = self.peek();
            Err(self.err(format!("unexpected '{}' at end of line", t.lexeme)))
        }
    }

    fn children(&mut self) -> Result<Vec<(Object, Option<String>)>, ParseError> {
        let mut out = Vec::new();
        if !self.at(TokenKind::Tab) {
            return Ok(out);
        }
        self.next();
        while !self.at(TokenKind::Untab) && !self.at(TokenKind::Eof) {
            out.push(self.statement()?);
        }
        if self.at(TokenKind::Untab) {
            self.next();
        }
        Ok(out)
    }

    fn finish(&self, pending: Pending, children: Vec<(Object, Option<String>)>) -> Result<Object, ParseError> {
        let Pending { mut obj, inverse } = pending;
        match &mut obj.kind {
            Kind::Abstraction { body, .. } => {
                for (child, tag) in children {
                    if tag.is_some() {
                        return Err(self.err_at(child.line, "binding tag inside an abstraction body"));
                    }
                    body.push(child);
                }
            }
            Kind::Application { args, .. } | Kind::DotChain { args, .. } => {
                args.extend(children.into_iter().map(|(value, tag)| Arg { value, tag }));
            }
            Kind::Data(_) => {
                if !children.is_empty() {
                    return Err(self.err_at(obj.line, "data cannot take arguments"));
                }
            }
        }
        if let Some(method) = inverse {
            let Kind::Application { mut args, .. } = obj.kind else {
                unreachable!("inverse heads are built as applications")
            };
            if args.is_empty() {
                return Err(self.err_at(obj.line, format!("'{method}.' needs a receiver")));
            }
            let receiver = args.remove(0).value;
            obj.kind = Kind::DotChain {
                receiver: Box::new(receiver),
                method,
                args,
            };
        }
        Ok(obj)
    }

    fn line_object(&mut self) -> Result<(Pending, Option<String>), ParseError> {
        let line = self.peek().line;
        if self.at(TokenKind::LBracket) {
            let mut obj = self.abstraction()?;
            let mut tag = None;
            if self.at_unspaced(TokenKind::Colon) {
                self.next();
                tag = Some(self.expect(TokenKind::Ident)?.lexeme);
            }
            obj.suffix = self.suffix()?;
            if self.at(TokenKind::Slash) {
                let atom = self.next().lexeme;
                if let Kind::Abstraction { atom: a, .. } = &mut obj.kind {
                    *a = Some(atom);
                }
            }
            self.end_line()?;
            return Ok((Pending { obj, inverse: None }, tag));
        }
        let mut inverse = None;
        let head = if self.at(TokenKind::Ident)
            && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Dot && !t.spaced)
            && self
                .peek_at(2)
                .map_or(true, |t| {
                    t.spaced || matches!(t.kind, TokenKind::Eol | TokenKind::Eof | TokenKind::Colon)
                })
        {
            let name = self.next().lexeme;
            self.next();
            inverse = Some(name);
            Object::new(
                Kind::Application {
                    head: Head::Name(String::new()),
                    copy: false,
                    spread: false,
                    args: Vec::new(),
                },
                line,
            )
        } else {
            self.primary_with_refs()?
        };
        let mut tag = None;
        if self.at_unspaced(TokenKind::Colon) {
            self.next();
            tag = Some(self.expect(TokenKind::Ident)?.lexeme);
        }
        let more = self.horizontal_args()?;
        let mut obj = head;
        if !more.is_empty() {
            match &mut obj.kind {
                Kind::Application { args, .. } | Kind::DotChain { args, .. } => args.extend(more),
                _ => return Err(self.err_at(line, "this object cannot take arguments")),
            }
        }
        if obj.suffix.is_none() {
            obj.suffix = self.suffix()?;
        } else if self.at(TokenKind::Gt) {
            return Err(self.err("object already named"));
        }
        self.end_line()?;
        Ok((Pending { obj, inverse }, tag))
    }

    fn abstraction(&mut self) -> Result<Object, ParseError> {
        let line = self.expect(TokenKind::LBracket)?.line;
        let mut attrs: Vec<FreeAttr> = Vec::new();
        while !self.at(TokenKind::RBracket) {
            let t = self.next();
            let name = match t.kind {
                TokenKind::Ident => t.lexeme,
                TokenKind::At => "@".into(),
                _ => return Err(ParseError::syntax(t.line, t.column, format!("bad attribute '{}'", t.lexeme))),
            };
            let vararg = if self.at_unspaced(TokenKind::Ellipsis) {
                self.next();
                true
            } else {
                false
            };
            if attrs.iter().any(|a| a.name == name) {
                return Err(ParseError::syntax(t.line, t.column, format!("duplicate attribute {name}")));
            }
            if attrs.last().is_some_and(|a| a.vararg) {
                return Err(ParseError::syntax(t.line, t.column, "vararg must be the last attribute"));
            }
            attrs.push(FreeAttr { name, vararg });
        }
        self.next();
        let mut body = Vec::new();
        while self.at(TokenKind::LParen) {
            self.next();
            let member = self.inner_object()?;
            self.expect(TokenKind::RParen)?;
            body.push(member);
        }
        Ok(Object::new(Kind::Abstraction { attrs, body, atom: None }, line))
    }

    /// Object inside parentheses: head, args and an optional suffix.
    fn inner_object(&mut self) -> Result<Object, ParseError> {
        let line = self.peek().line;
        if self.at(TokenKind::LBracket) {
            let mut obj = self.abstraction()?;
            obj.suffix = self.suffix()?;
            if self.at(TokenKind::Slash) {
                let atom = self.next().lexeme;
                if let Kind::Abstraction { atom: a, .. } = &mut obj.kind {
                    *a = Some(atom);
                }
            }
            return Ok(obj);
        }
        if self.at(TokenKind::Ident)
            && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Dot && !t.spaced)
            && self.peek_at(2).is_some_and(|t| t.spaced || t.kind == TokenKind::RParen)
        {
            let method = self.next().lexeme;
            self.next();
            let mut args = self.horizontal_args()?;
            if args.is_empty() {
                return Err(self.err(format!("'{method}.' needs a receiver")));
            }
            let receiver = args.remove(0).value;
            let mut obj = Object::new(
                Kind::DotChain {
                    receiver: Box::new(receiver),
                    method,
                    args,
                },
                line,
            );
            obj.suffix = self.suffix()?;
            return Ok(obj);
        }
        let mut obj = self.primary_with_refs()?;
        let more = self.horizontal_args()?;
        if !more.is_empty() {
            match &mut obj.kind {
                Kind::Application { args, .. } | Kind::DotChain { args, .. } => args.extend(more),
                _ => return Err(self.err_at(line, "this object cannot take arguments")),
            }
        }
        if obj.suffix.is_none() {
            obj.suffix = self.suffix()?;
        }
        Ok(obj)
    }

    fn horizontal_args(&mut self) -> Result<Vec<Arg>, ParseError> {
        let mut args = Vec::new();
        loop {
            match self.peek().kind {
                TokenKind::Eol | TokenKind::Eof | TokenKind::Gt | TokenKind::RParen | TokenKind::Slash => break,
                TokenKind::Tab | TokenKind::Untab => break,
                _ => {}
            }
            let value = self.primary_with_refs()?;
            let tag = if self.at_unspaced(TokenKind::Colon) {
                self.next();
                Some(self.expect(TokenKind::Ident)?.lexeme)
            } else {
                None
            };
            args.push(Arg { value, tag });
        }
        Ok(args)
    }

    fn call_parens(&mut self) -> Result<Vec<Arg>, ParseError> {
        if !self.at_unspaced(TokenKind::LParen) {
            return Ok(Vec::new());
        }
        self.next();
        let args = self.horizontal_args()?;
        self.expect(TokenKind::RParen)?;
        Ok(args)
    }

    fn primary_with_refs(&mut self) -> Result<Object, ParseError> {
        let mut obj = self.primary()?;
        while self.at_unspaced(TokenKind::Dot) {
            let after = self.peek_at(1);
            if after.map_or(true, |t| t.spaced) {
                return Err(self.err("dangling '.'"));
            }
            let line = self.next().line;
            let method = self.method_name()?;
            let args = self.call_parens()?;
            obj = Object::new(
                Kind::DotChain {
                    receiver: Box::new(obj),
                    method,
                    args,
                },
                line,
            );
        }
        Ok(obj)
    }

    fn method_name(&mut self) -> Result<String, ParseError> {
        let t = self.next();
        Ok(match t.kind {
            TokenKind::Ident => t.lexeme,
            TokenKind::Caret => "^".into(),
            TokenKind::At => "@".into(),
            TokenKind::Lt => "<".into(),
            _ => return Err(ParseError::syntax(t.line, t.column, format!("bad method name '{}'", t.lexeme))),
        })
    }

    fn primary(&mut self) -> Result<Object, ParseError> {
        let t = self.peek().clone();
        let app = |head: Head, copy: bool, spread: bool| Kind::Application {
            head,
            copy,
            spread,
            args: Vec::new(),
        };
        match t.kind {
            TokenKind::LParen => {
                self.next();
                let obj = self.inner_object()?;
                self.expect(TokenKind::RParen)?;
                Ok(obj)
            }
            TokenKind::LBracket => self.abstraction(),
            TokenKind::Data => {
                self.next();
                let v = parse_data(&t.lexeme).map_err(|m| ParseError::syntax(t.line, t.column, m))?;
                Ok(Object::new(Kind::Data(v), t.line))
            }
            TokenKind::Ellipsis => {
                self.next();
                let name = self.expect(TokenKind::Ident)?.lexeme;
                Ok(Object::new(app(Head::Name(name), false, true), t.line))
            }
            TokenKind::Ident => {
                self.next();
                let copy = if self.at_unspaced(TokenKind::Apostrophe) {
                    self.next();
                    true
                } else {
                    false
                };
                let args = self.call_parens()?;
                let mut obj = Object::new(app(Head::Name(t.lexeme), copy, false), t.line);
                if let Kind::Application { args: a, .. } = &mut obj.kind {
                    *a = args;
                }
                Ok(obj)
            }
            TokenKind::At
            | TokenKind::Dollar
            | TokenKind::Amp
            | TokenKind::Caret
            | TokenKind::Q
            | TokenKind::QQ
            | TokenKind::Star => {
                self.next();
                let head = Head::from_text(&t.lexeme);
                let copy = if self.at_unspaced(TokenKind::Apostrophe) {
                    self.next();
                    true
                } else {
                    false
                };
                let mut obj = Object::new(app(head, copy, false), t.line);
                let args = self.call_parens()?;
                if let Kind::Application { args: a, .. } = &mut obj.kind {
                    *a = args;
                }
                Ok(obj)
            }
            _ => Err(self.err(format!("unexpected {:?} '{}'", t.kind, t.lexeme))),
        }
    }

    fn suffix(&mut self) -> Result<Option<Suffix>, ParseError> {
        if !self.at(TokenKind::Gt) {
            return Ok(None);
        }
        self.next();
        let t = self.next();
        let name = match t.kind {
            TokenKind::Ident => t.lexeme,
            TokenKind::At => "@".into(),
            _ => return Err(ParseError::syntax(t.line, t.column, format!("bad name '{}'", t.lexeme))),
        };
        let constant = if self.at_unspaced(TokenKind::Bang) {
            self.next();
            true
        } else {
            false
        };
        Ok(Some(Suffix { name, constant }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::Value;

    fn one(src: &str) -> Object {
        let p = parse(src).unwrap();
        assert_eq!(p.objects.len(), 1, "{p:?}");
        p.objects[0].without_lines()
    }

    #[test]
    fn horizontal_and_vertical_agree() {
        let a = one("x.plus 1 > succ\n");
        let b = one("x.plus > succ\n  1\n");
        let c = one("plus. > succ\n  x\n  1\n");
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn vertical_tail() {
        let a = one("((dx.pow 2).plus (dy.pow 2)).sqrt > length\n");
        let b = one("dx.pow 2\n.plus\n  dy.pow 2\n.sqrt > length\n");
        assert_eq!(a, b);
    }

    #[test]
    fn abstraction_with_atom() {
        let o = one("[to] > distance /float\n");
        match &o.kind {
            Kind::Abstraction { attrs, atom, .. } => {
                assert_eq!(attrs[0].name, "to");
                assert_eq!(atom.as_deref(), Some("float"));
            }
            _ => panic!(),
        }
        assert_eq!(o.name(), Some("distance"));
    }

    #[test]
    fn tags_and_copies() {
        let o = one("point' 5:y 3:x > p\n");
        let Kind::Application { copy, args, .. } = o.kind else { panic!() };
        assert!(copy);
        assert_eq!(args[0].tag.as_deref(), Some("y"));
        assert_eq!(args[0].value.kind, Kind::Data(Value::Int(5)));
    }

    #[test]
    fn license_and_metas() {
        let p = parse("# MIT\n\n+package org.example\n+alias stdout org.eolang.io.stdout\n\n[] > a\n").unwrap();
        assert_eq!(p.license, vec!["MIT"]);
        assert_eq!(p.metas.len(), 2);
        assert_eq!(p.metas[1].tail.as_deref(), Some("stdout org.eolang.io.stdout"));
    }

    #[test]
    fn horizontal_anonymous_abstraction() {
        let o = one("[x] (x.plus 1 > succ) (x.minus 1 > prev)\n");
        let Kind::Abstraction { body, .. } = o.kind else { panic!() };
        assert_eq!(body.len(), 2);
        assert_eq!(body[1].name(), Some("prev"));
    }

    #[test]
    fn comment_only_block() {
        let p = parse("[] > a\n  [] > close\n    # nothing here\n  b > c\n").unwrap();
        let Kind::Abstraction { body, .. } = &p.objects[0].kind else { panic!() };
        assert_eq!(body.len(), 2);
        assert_eq!(p.comments.len(), 1);
    }

    #[test]
    fn inverse_needs_receiver() {
        assert!(parse("plus. > x\n").is_err());
    }
}
