"""Smoke test for the Python bindings.

Build and install first:
    pip install maturin && maturin build -m crates/python/Cargo.toml -o dist && pip install dist/*.whl
"""

import phi_machine_py as phi

FIBO = """\
[n] > fibo
  if. > @
    n.lt 2
    n
    plus.
      fibo (n.minus 1)
      fibo (n.minus 2)
"""

BOOK = """\
[] > book2
  "0-262-16209-1" > isbn
  "Elements of Programming" > title
  memory > price
"""

p = phi.Program(FIBO)
assert p.run("fibo", [10]) == (55, ""), p.run("fibo", [10])
assert "<program" in p.xmir()
assert phi.parse(FIBO) == p.canonical()

t = p.trace()
assert t.instructions()[0] == "ADD(Phi)"
assert phi.Trace.parse(t.text()).instructions() == t.instructions()
vertices, edges = t.shape()
assert vertices > 0 and edges > 0

assert len(phi.gmi(BOOK).splitlines()) >= 13
assert phi.run('stdout "hi\\n" > main\n') == (True, "hi\n")
assert phi.run("sum 8 13 -9 > s\n") == (12, "")

try:
    phi.run("1.div 0 > r\n")
except phi.Bottom as e:
    assert "zero" in str(e)
else:
    raise AssertionError("expected Bottom")

try:
    phi.Program("[x] > a\n  ((( > b\n")
except phi.PhiError as e:
    assert ":" in str(e)
else:
    raise AssertionError("expected PhiError")

print("python smoke: ok")
