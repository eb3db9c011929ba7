use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Program {
    /// Leading comment block.
    pub license: Vec<String>,
    pub metas: Vec<Meta>,
    pub objects: Vec<Object>,
    /// Inline comments, kept as metadata only.
    pub comments: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Meta {
    pub head: String,
    pub tail: Option<String>,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Suffix {
    /// `@` for the decoratee.
    pub name: String,
    pub constant: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FreeAttr {
    pub name: String,
    pub vararg: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Head {
    Name(String),
    /// `@`
    Phi,
    /// `$`
    This,
    /// `&`
    Home,
    /// `^`
    Parent,
    /// `Q`
    Root,
    /// `QQ`
    RootEo,
    /// `*`
    Star,
}

impl Head {
    pub fn text(&self) -> &str {
        match self {
            Head::Name(n) => n,
            Head::Phi => "@",
            Head::This => "$",
            Head::Home => "&",
            Head::Parent => "^",
            Head::Root => "Q",
            Head::RootEo => "QQ",
            Head::Star => "*",
        }
    }

    pub fn from_text(s: &str) -> Head {
        match s {
            "@" => Head::Phi,
            "$" => Head::This,
            "&" => Head::Home,
            "^" => Head::Parent,
            "Q" => Head::Root,
            "QQ" => Head::RootEo,
            "*" => Head::Star,
            n => Head::Name(n.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arg {
    pub value: Object,
    /// `:name` binding.
    pub tag: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    Abstraction {
        attrs: Vec<FreeAttr>,
        body: Vec<Object>,
        /// `/name` marker; `?` when unknown.
        atom: Option<String>,
    },
    Application {
        head: Head,
        copy: bool,
        spread: bool,
        args: Vec<Arg>,
    },
    /// `receiver.method args`; the inverse form `method. receiver args`
    /// produces the same shape.
    DotChain {
        receiver: Box<Object>,
        method: String,
        args: Vec<Arg>,
    },
    Data(Value),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Object {
    pub kind: Kind,
    pub suffix: Option<Suffix>,
    pub line: usize,
}

impl Object {
    pub fn new(kind: Kind, line: usize) -> Self {
        Object {
            kind,
            suffix: None,
            line,
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.suffix.as_ref().map(|s| s.name.as_str())
    }

    /// Same tree with every line number set to zero.
    pub fn without_lines(&self) -> Object {
        let kind = match &self.kind {
            Kind::Abstraction { attrs, body, atom } => Kind::Abstraction {
                attrs: attrs.clone(),
                body: body.iter().map(Object::without_lines).collect(),
                atom: atom.clone(),
            },
            Kind::Application {
                head,
                copy,
                spread,
                args,
            } => Kind::Application {
                head: head.clone(),
                copy: *copy,
                spread: *spread,
                args: strip_args(args),
            },
            Kind::DotChain {
                receiver,
                method,
                args,
            } => Kind::DotChain {
                receiver: Box::new(receiver.without_lines()),
                method: method.clone(),
                args: strip_args(args),
            },
            Kind::Data(v) => Kind::Data(v.clone()),
        };
        Object {
            kind,
            suffix: self.suffix.clone(),
            line: 0,
        }
    }
}

fn strip_args(args: &[Arg]) -> Vec<Arg> {
    args.iter()
        .map(|a| Arg {
            value: a.value.without_lines(),
            tag: a.tag.clone(),
        })
        .collect()
}

impl Program {
    /// Structural view: lines and inline comments dropped.
    pub fn structure(&self) -> Program {
        Program {
            license: self.license.clone(),
            metas: self
                .metas
                .iter()
                .map(|m| Meta {
                    line: 0,
                    ..m.clone()
                })
                .collect(),
            objects: self.objects.iter().map(Object::without_lines).collect(),
            comments: Vec::new(),
        }
    }
}
