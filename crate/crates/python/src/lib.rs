//! Python bindings: compile EO source, inspect its XMIR and trace, run it.

use phi_machine::atoms::Registry;
use phi_machine::eval::{Io, SharedBuf};
use phi_machine::graph::{Graph, Trace as CoreTrace};
use phi_machine::pipeline::{compile, front, run_source, with_big_stack, RunError};
use phi_machine::syntax::{parse as parse_eo, print};
use phi_machine::xmir::serialize_xmir;
use phi_machine::{FrontError, Value};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyTypeError};
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyBytes, PyFloat, PyInt, PyList, PyString};

create_exception!(phi_machine_py, PhiError, PyException, "Syntax, XMIR or build error.");
create_exception!(phi_machine_py, Bottom, PyException, "Dataization failed.");

fn front_err(e: FrontError) -> PyErr {
    PhiError::new_err(e.to_string())
}

fn run_err(e: RunError) -> PyErr {
    match e {
        RunError::Bottom(b) => Bottom::new_err(b.message),
        other => PhiError::new_err(other.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Bytes(b) => PyBytes::new(py, b).into_any(),
        Value::Str(s) | Value::Regex(s) => PyString::new(py, s).into_any(),
        Value::Int(i) => i.into_pyobject(py)?.into_any(),
        Value::Float(f) => f.into_pyobject(py)?.into_any(),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Array(items) => {
            let items = items.iter().map(|i| to_py(py, i)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any()
        }
    })
}

fn from_py(o: &Bound<'_, PyAny>) -> PyResult<Value> {
    // bool before int: Python bools are ints.
    if o.is_instance_of::<PyBool>() {
        return Ok(Value::Bool(o.extract()?));
    }
    if o.is_instance_of::<PyInt>() {
        return Ok(Value::Int(o.extract()?));
    }
    if o.is_instance_of::<PyFloat>() {
        return Ok(Value::Float(o.extract()?));
    }
    if o.is_instance_of::<PyString>() {
        return Ok(Value::Str(o.extract()?));
    }
    if o.is_instance_of::<PyBytes>() {
        return Ok(Value::Bytes(o.extract()?));
    }
    if let Ok(list) = o.cast::<PyList>() {
        return Ok(Value::Array(list.iter().map(|i| from_py(&i)).collect::<PyResult<_>>()?));
    }
    Err(PyTypeError::new_err(format!("cannot pass {} to EO", o.get_type().name()?)))
}

/// Runs on a big-stack thread; returns the value and captured stdout.
pub fn run_text(src: &str, main: Option<String>, args: Vec<Value>, stdin: &str) -> Result<(Value, String), RunError> {
    let (src, stdin) = (src.to_string(), stdin.to_string());
    with_big_stack(move || {
        let buf = SharedBuf::default();
        let v = run_source(&src, &Registry::builtins(), main.as_deref(), &args, Io::scripted(&stdin, buf.clone()))?;
        Ok((v, buf.text()))
    })
}

/// Instruction trace; replays to a graph.
#[pyclass(module = "phi_machine_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Trace {
    inner: CoreTrace,
}

#[pymethods]
impl Trace {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        CoreTrace::parse(text)
            .map(|inner| Trace { inner })
            .map_err(|e| PhiError::new_err(e.to_string()))
    }

    fn instructions(&self) -> Vec<String> {
        self.inner.instructions()
    }

    fn text(&self) -> String {
        self.inner.to_text()
    }

    /// (vertices, edges) of the replayed graph.
    fn shape(&self) -> PyResult<(usize, usize)> {
        let g = Graph::from_trace(&self.inner).map_err(|e| PhiError::new_err(e.to_string()))?;
        Ok((g.vertices().count(), g.edges().count()))
    }

    fn __len__(&self) -> usize {
        self.inner.gmis.len()
    }

    fn __repr__(&self) -> String {
        format!("<Trace of {} instructions>", self.inner.gmis.len())
    }
}

/// A compiled program.
#[pyclass(module = "phi_machine_py", frozen)]
pub struct Program {
    source: String,
    canonical: String,
    xmir: String,
    trace: CoreTrace,
    warnings: Vec<String>,
}

#[pymethods]
impl Program {
    #[new]
    fn new(source: &str) -> PyResult<Self> {
        let (f, built) = compile(source, &Registry::builtins()).map_err(front_err)?;
        Ok(Program {
            source: source.to_string(),
            canonical: print(&f.ast),
            xmir: serialize_xmir(&f.xmir),
            trace: built.trace,
            warnings: f.warnings.iter().map(|d| format!("{}: {}", d.line, d.message)).collect(),
        })
    }

    #[getter]
    fn source(&self) -> &str {
        &self.source
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.warnings.clone()
    }

    fn canonical(&self) -> &str {
        &self.canonical
    }

    fn xmir(&self) -> &str {
        &self.xmir
    }

    fn trace(&self) -> Trace {
        Trace { inner: self.trace.clone() }
    }

    /// Dataizes `main`; returns (value, stdout).
    #[pyo3(signature = (main=None, args=Vec::new(), stdin=""))]
    fn run<'py>(
        &self,
        py: Python<'py>,
        main: Option<String>,
        args: Vec<Bound<'py, PyAny>>,
        stdin: &str,
    ) -> PyResult<(Bound<'py, PyAny>, String)> {
        let args = args.iter().map(from_py).collect::<PyResult<Vec<_>>>()?;
        let (v, out) = py.detach(|| run_text(&self.source, main, args, stdin)).map_err(run_err)?;
        Ok((to_py(py, &v)?, out))
    }

    fn __repr__(&self) -> String {
        format!("<Program of {} instructions>", self.trace.gmis.len())
    }
}

/// Canonical form of `source`.
#[pyfunction]
fn parse(source: &str) -> PyResult<String> {
    parse_eo(source)
        .map(|p| print(&p))
        .map_err(|e| PhiError::new_err(e.to_string()))
}

#[pyfunction]
fn ir(source: &str) -> PyResult<String> {
    front(source, &Registry::builtins())
        .map(|f| serialize_xmir(&f.xmir))
        .map_err(front_err)
}

#[pyfunction]
fn gmi(source: &str) -> PyResult<String> {
    compile(source, &Registry::builtins())
        .map(|(_, b)| b.trace.to_text())
        .map_err(front_err)
}

#[pyfunction]
#[pyo3(signature = (source, main=None, args=Vec::new(), stdin=""))]
fn run<'py>(
    py: Python<'py>,
    source: &str,
    main: Option<String>,
    args: Vec<Bound<'py, PyAny>>,
    stdin: &str,
) -> PyResult<(Bound<'py, PyAny>, String)> {
    let args = args.iter().map(from_py).collect::<PyResult<Vec<_>>>()?;
    let (v, out) = py.detach(|| run_text(source, main, args, stdin)).map_err(run_err)?;
    Ok((to_py(py, &v)?, out))
}

#[pymodule]
fn phi_machine_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Program>()?;
    m.add_class::<Trace>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(ir, m)?)?;
    m.add_function(wrap_pyfunction!(gmi, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add("PhiError", m.py().get_type::<PhiError>())?;
    m.add("Bottom", m.py().get_type::<Bottom>())?;
    Ok(())
}
