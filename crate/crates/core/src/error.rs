use thiserror::Error;

/// Front-end failure with a source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: bad indentation: {message}")]
    Indentation {
        line: usize,
        column: usize,
        message: String,
    },
}

impl ParseError {
    pub fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. } | ParseError::Indentation { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XmirError {
    #[error("malformed XMIR: {0}")]
    Xml(String),
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("no such vertex v{0}")]
    NoVertex(usize),
    #[error("vertex v{0} already exists")]
    VertexExists(usize),
    #[error("attribute {attr} of v{from} is already bound to v{to}")]
    Rebind { from: usize, attr: String, to: usize },
    #[error("no edge labelled {attr} leaves v{from}")]
    NoEdge { from: usize, attr: String },
    #[error("v{0} already has a lambda")]
    AtomExists(usize),
    #[error("bad instruction '{0}'")]
    BadInstruction(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("line {line}: unknown atom {name}")]
    UnknownAtom { line: usize, name: String },
    #[error("line {line}: {name} expects {expected} arguments, got {got}")]
    Arity {
        line: usize,
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: duplicate attribute {name}")]
    DuplicateAttribute { line: usize, name: String },
    #[error("line {line}: cannot resolve {name}")]
    UnresolvableHead { line: usize, name: String },
    #[error("line {line}: {message}")]
    Unsupported { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl BuildError {
    pub fn line(&self) -> usize {
        match self {
            BuildError::UnknownAtom { line, .. }
            | BuildError::Arity { line, .. }
            | BuildError::DuplicateAttribute { line, .. }
            | BuildError::UnresolvableHead { line, .. }
            | BuildError::Unsupported { line, .. } => *line,
            BuildError::Graph(_) => 0,
        }
    }
}

/// Anything the front end (source to graph) can fail with.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Xmir(#[from] XmirError),
    #[error(transparent)]
    Build(#[from] BuildError),
}
