"""Surface specification language: parser, elaboration, and networks.

A spec file declares named vectors, scalars, and networks, then states
one goal formula over them:

    vector v 2
    vector x 2
    scalar eps
    scalar delta
    network N 2 2
    goal |sub(x,v)|_inf <= eps => |sub(N(x),N(v))|_inf <= delta

Formula connectives: ``=>`` (implication, right-associative), ``/\\``
and ``\\/`` (lattice), ``(*)`` and ``(+)`` (monoidal), ``~`` (negation),
and the comparisons ``<=`` / ``==`` over real expressions.  Real
expressions: number literals, scalar names, ``v[i]``, and
``|e|_inf`` (infinity norm of a vector expression).  Vector
expressions: vector names, network application ``N(x)``, binary
application ``f(x,y)``, and the built-in ``sub(a,b)`` (element-wise
difference).  Precedence, tightest first: comparisons, ``~``, the
binary connectives (left-associative, one level), ``=>``.

The infinity norm uses max of absolute differences of coordinates.

Elaboration lowers a parsed goal to the core expression language.
Named inputs (vectors and scalars) become applications of environment
functions to a dummy unit vector, so evaluation binds them late and
gradients flow through them with the dual-number carrier.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .carriers import Dual, DualCarrier, F64Carrier
from .core import (
    App,
    App2,
    Cmp,
    CmpOp,
    Expr,
    Fun2Ref,
    FunRef,
    Impl,
    IndexConst,
    And,
    LogicId,
    LogicKind,
    Lookup,
    MAnd,
    MOr,
    Not,
    Or,
    RealConst,
    VecConst,
)
from .errors import (
    ArityMismatch,
    DuplicateDeclaration,
    ParseError,
    RejectedLogic,
    UndeclaredIdentifier,
    ValidationError,
)
from .semantics import Env, carrier_aware, interpret

# ---------------------------------------------------------------------------
# Surface AST


@dataclass(frozen=True)
class RNum:
    value: float


@dataclass(frozen=True)
class RName:  # scalar reference
    name: str


@dataclass(frozen=True)
class RIndex:  # vector coordinate
    name: str
    i: int


@dataclass(frozen=True)
class VName:  # vector reference
    name: str


@dataclass(frozen=True)
class VCall:  # network / function / sub application
    name: str
    args: tuple

    def __init__(self, name, args):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class RNorm:  # |e|_inf
    arg: object


@dataclass(frozen=True)
class FCmp:
    op: str  # "le" | "eq"
    left: object
    right: object


@dataclass(frozen=True)
class FNot:
    child: object


@dataclass(frozen=True)
class FBin:
    op: str  # "and" | "or" | "mand" | "mor"
    left: object
    right: object


@dataclass(frozen=True)
class FImpl:
    left: object
    right: object


@dataclass(frozen=True)
class SpecDoc:
    vectors: Tuple[Tuple[str, int], ...]
    scalars: Tuple[str, ...]
    networks: Tuple[Tuple[str, int, int], ...]
    goal: object

    def vector_arity(self, name: str) -> int:
        return dict(self.vectors)[name]


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t]+)
      | (?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
      | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<op>\(\*\)|\(\+\)|=>|<=|==|\|_inf|/\\|\\/|[~()\[\],|])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, line: int) -> List[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1)
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        out.append(Token(kind, m.group(), line, m.start() + 1))
    return out


class _Parser:
    def __init__(self, tokens: List[Token], doc_line: int):
        self.tokens = tokens
        self.i = 0
        self.line = doc_line

    def peek(self) -> Optional[Token]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> Token:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of formula", self.line, None)
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return t

    # formula := conj ('=>' formula)?           (right-associative)
    def formula(self):
        lhs = self.conj()
        t = self.peek()
        if t is not None and t.text == "=>":
            self.next()
            return FImpl(lhs, self.formula())
        return lhs

    _BIN = {"/\\": "and", "\\/": "or", "(*)": "mand", "(+)": "mor"}

    def conj(self):
        node = self.neg()
        while True:
            t = self.peek()
            if t is None or t.text not in self._BIN:
                return node
            self.next()
            node = FBin(self._BIN[t.text], node, self.neg())

    def neg(self):
        t = self.peek()
        if t is not None and t.text == "~":
            self.next()
            return FNot(self.neg())
        return self.atom_formula()

    def atom_formula(self):
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of formula", self.line, None)
        if t.text == "(":
            self.next()
            inner = self.formula()
            self.expect(")")
            return inner
        lhs = self.real_expr()
        op = self.next()
        if op.text not in ("<=", "=="):
            raise ParseError(
                f"expected a comparison, found {op.text!r}", op.line, op.col
            )
        rhs = self.real_expr()
        return FCmp("le" if op.text == "<=" else "eq", lhs, rhs)

    def real_expr(self):
        t = self.next()
        if t.kind == "num":
            return RNum(float(t.text))
        if t.text == "|":
            arg = self.vec_expr()
            self.expect("|_inf")
            return RNorm(arg)
        if t.kind == "ident":
            nxt = self.peek()
            if nxt is not None and nxt.text == "[":
                self.next()
                idx = self.next()
                if idx.kind != "num" or "." in idx.text:
                    raise ParseError("index must be an integer", idx.line, idx.col)
                self.expect("]")
                return RIndex(t.text, int(idx.text))
            return RName(t.text)
        raise ParseError(f"expected a real expression at {t.text!r}", t.line, t.col)

    def vec_expr(self):
        t = self.next()
        if t.kind != "ident":
            raise ParseError(
                f"expected a vector expression at {t.text!r}", t.line, t.col
            )
        nxt = self.peek()
        if nxt is not None and nxt.text == "(":
            self.next()
            args = [self.vec_expr()]
            while self.peek() is not None and self.peek().text == ",":
                self.next()
                args.append(self.vec_expr())
            self.expect(")")
            return VCall(t.text, args)
        return VName(t.text)

    def done(self) -> None:
        t = self.peek()
        if t is not None:
            raise ParseError(f"trailing input {t.text!r}", t.line, t.col)


# ---------------------------------------------------------------------------
# Document parsing


def parse_formula(text: str, line: int = 1):
    p = _Parser(_tokenize(text, line), line)
    f = p.formula()
    p.done()
    return f


def parse_spec(text: str) -> SpecDoc:
    vectors: List[Tuple[str, int]] = []
    scalars: List[str] = []
    networks: List[Tuple[str, int, int]] = []
    seen: set = set()
    goal = None

    def declare(name, lineno):
        if name in seen:
            raise DuplicateDeclaration(f"{name!r} declared twice (line {lineno})")
        seen.add(name)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "vector":
            parts = rest.split()
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise ParseError("vector declaration needs: name arity", lineno, 1)
            declare(parts[0], lineno)
            vectors.append((parts[0], int(parts[1])))
        elif head == "scalar":
            parts = rest.split()
            if len(parts) != 1:
                raise ParseError("scalar declaration needs: name", lineno, 1)
            declare(parts[0], lineno)
            scalars.append(parts[0])
        elif head == "network":
            parts = rest.split()
            if len(parts) != 3 or not all(p.isdigit() for p in parts[1:]):
                raise ParseError(
                    "network declaration needs: name in-arity out-arity", lineno, 1
                )
            declare(parts[0], lineno)
            networks.append((parts[0], int(parts[1]), int(parts[2])))
        elif head == "goal":
            if goal is not None:
                raise ParseError("multiple goal lines", lineno, 1)
            goal = parse_formula(rest, lineno)
        else:
            raise ParseError(f"unknown declaration {head!r}", lineno, 1)
    if goal is None:
        raise ParseError("spec has no goal", 1, 1)
    doc = SpecDoc(tuple(vectors), tuple(scalars), tuple(networks), goal)
    _resolve(doc)
    return doc


def _resolve(doc: SpecDoc) -> None:
    """Check every identifier in the goal against the declarations."""
    vecs = dict(doc.vectors)
    nets = {n: (m, k) for n, m, k in doc.networks}
    scalars = set(doc.scalars)

    def vec_arity(e) -> int:
        if isinstance(e, VName):
            if e.name not in vecs:
                raise UndeclaredIdentifier(f"vector {e.name!r} not declared")
            return vecs[e.name]
        if isinstance(e, VCall):
            arities = [vec_arity(a) for a in e.args]
            if e.name == "sub":
                if len(arities) != 2 or arities[0] != arities[1]:
                    raise ArityMismatch("sub needs two vectors of equal arity")
                return arities[0]
            if e.name in nets:
                m, k = nets[e.name]
                if len(arities) != 1 or arities[0] != m:
                    raise ArityMismatch(
                        f"network {e.name!r} expects one vector of arity {m}"
                    )
                return k
            raise UndeclaredIdentifier(f"function {e.name!r} not declared")
        raise ValidationError(f"not a vector expression: {e!r}")

    def real(e) -> None:
        if isinstance(e, RNum):
            return
        if isinstance(e, RName):
            if e.name not in scalars:
                raise UndeclaredIdentifier(f"scalar {e.name!r} not declared")
            return
        if isinstance(e, RIndex):
            if e.name not in vecs:
                raise UndeclaredIdentifier(f"vector {e.name!r} not declared")
            if not 0 <= e.i < vecs[e.name]:
                raise ArityMismatch(
                    f"index {e.i} out of range for vector {e.name!r}"
                )
            return
        if isinstance(e, RNorm):
            vec_arity(e.arg)
            return
        raise ValidationError(f"not a real expression: {e!r}")

    def formula(f) -> None:
        if isinstance(f, FCmp):
            real(f.left)
            real(f.right)
        elif isinstance(f, FNot):
            formula(f.child)
        elif isinstance(f, FBin):
            formula(f.left)
            formula(f.right)
        elif isinstance(f, FImpl):
            formula(f.left)
            formula(f.right)
        else:
            raise ValidationError(f"not a formula: {f!r}")

    formula(doc.goal)


# ---------------------------------------------------------------------------
# Pretty printer (parse . pretty == identity on the surface AST)


def pretty_formula(f, prec: int = 0) -> str:
    # precedence levels: 0 impl, 1 binary, 2 neg, 3 atoms
    if isinstance(f, FImpl):
        s = f"{pretty_formula(f.left, 1)} => {pretty_formula(f.right, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(f, FBin):
        sym = {"and": "/\\", "or": "\\/", "mand": "(*)", "mor": "(+)"}[f.op]
        s = f"{pretty_formula(f.left, 1)} {sym} {pretty_formula(f.right, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(f, FNot):
        return f"~{pretty_formula(f.child, 2)}"
    if isinstance(f, FCmp):
        sym = "<=" if f.op == "le" else "=="
        return f"{pretty_real(f.left)} {sym} {pretty_real(f.right)}"
    raise ValidationError(f"not a formula: {f!r}")


def pretty_real(e) -> str:
    if isinstance(e, RNum):
        return repr(e.value) if e.value != int(e.value) else str(int(e.value))
    if isinstance(e, RName):
        return e.name
    if isinstance(e, RIndex):
        return f"{e.name}[{e.i}]"
    if isinstance(e, RNorm):
        return f"|{pretty_vec(e.arg)}|_inf"
    raise ValidationError(f"not a real expression: {e!r}")


def pretty_vec(e) -> str:
    if isinstance(e, VName):
        return e.name
    if isinstance(e, VCall):
        return f"{e.name}({','.join(pretty_vec(a) for a in e.args)})"
    raise ValidationError(f"not a vector expression: {e!r}")


def pretty_spec(doc: SpecDoc) -> str:
    lines = []
    for name, n in doc.vectors:
        lines.append(f"vector {name} {n}")
    for name in doc.scalars:
        lines.append(f"scalar {name}")
    for name, m, n in doc.networks:
        lines.append(f"network {name} {m} {n}")
    lines.append(f"goal {pretty_formula(doc.goal)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Elaboration into the core expression language

_UNIT = (0.0,)  # dummy argument for input slots


def _slot(name: str, n: int) -> Expr:
    """A named input realized as a unary function of a dummy vector."""
    return App(FunRef(f"in:{name}", 1, n), VecConst(_UNIT))


def elaborate(doc: SpecDoc, logic: LogicId, env: Optional[Env] = None) -> Expr:
    """Lower the goal formula to a core expression for one logic."""
    profile = logic.flag_profile
    vecs = dict(doc.vectors)
    nets = {n: (m, k) for n, m, k in doc.networks}
    if env is not None:
        for name in nets:
            if name not in env.functions:
                raise UndeclaredIdentifier(
                    f"network {name!r} not present in the environment"
                )

    def vec(e) -> Expr:
        if isinstance(e, VName):
            return _slot(e.name, vecs[e.name])
        if isinstance(e, VCall):
            args = [vec(a) for a in e.args]
            if e.name == "sub":
                n = args[0].tag.n
                return App2(Fun2Ref("sub", n, n, n), args[0], args[1])
            m, k = nets[e.name]
            return App(FunRef(e.name, m, k), args[0])
        raise ValidationError(f"not a vector expression: {e!r}")

    def real(e) -> Expr:
        if isinstance(e, RNum):
            return RealConst(e.value)
        if isinstance(e, RName):
            return Lookup(_slot(e.name, 1), IndexConst(0, 1))
        if isinstance(e, RIndex):
            return Lookup(_slot(e.name, vecs[e.name]), IndexConst(e.i, vecs[e.name]))
        if isinstance(e, RNorm):
            v = vec(e.arg)
            return Lookup(
                App(FunRef("norm_inf", v.tag.n, 1), v), IndexConst(0, 1)
            )
        raise ValidationError(f"not a real expression: {e!r}")

    def formula(f) -> Expr:
        if isinstance(f, FCmp):
            op = CmpOp.LE if f.op == "le" else CmpOp.EQ
            return Cmp(op, real(f.left), real(f.right), profile)
        if isinstance(f, FNot):
            return Not(formula(f.child))
        if isinstance(f, FImpl):
            return Impl(formula(f.left), formula(f.right))
        if isinstance(f, FBin):
            kind = {"and": And, "or": Or, "mand": MAnd, "mor": MOr}[f.op]
            return kind((formula(f.left), formula(f.right)))
        raise ValidationError(f"not a formula: {f!r}")

    return formula(doc.goal)


# ---------------------------------------------------------------------------
# Built-in environment


@carrier_aware
def _builtin_sub(a, b, c):
    return tuple(c.sub(x, y) for x, y in zip(a, b))


@carrier_aware
def _builtin_norm_inf(a, c):
    out = c.abs(a[0])
    for x in a[1:]:
        out = c.max2(out, c.abs(x))
    return (out,)


def base_env() -> Env:
    return Env(
        functions={"norm_inf": _builtin_norm_inf},
        binary_functions={"sub": _builtin_sub},
    )


def extend_env(env: Env, functions=None, binary_functions=None) -> Env:
    return Env(
        functions={**env.functions, **(functions or {})},
        binary_functions={**env.binary_functions, **(binary_functions or {})},
    )


# ---------------------------------------------------------------------------
# Networks

NET_SCHEMA_VERSION = "dlc-net/1"
_ACTIVATIONS = ("relu", "identity")


@dataclass(frozen=True)
class Layer:
    weights: tuple  # row-major, shape (out, in)
    bias: tuple
    activation: str


@dataclass(frozen=True)
class NetworkDef:
    layers: Tuple[Layer, ...]

    @property
    def in_arity(self) -> int:
        return len(self.layers[0].weights[0])

    @property
    def out_arity(self) -> int:
        return len(self.layers[-1].bias)

    def forward(self, xs, c=F64Carrier):
        vals = list(xs)
        for layer in self.layers:
            nxt = []
            for row, b in zip(layer.weights, layer.bias):
                acc = c.lift(b)
                for w, x in zip(row, vals):
                    acc = c.add(acc, c.mul(c.lift(w), x))
                if layer.activation == "relu":
                    acc = c.max2(acc, c.zero)
                nxt.append(acc)
            vals = nxt
        return tuple(vals)

    def as_env_function(self):
        @carrier_aware
        def run(xs, c):
            if len(xs) != self.in_arity:
                raise ArityMismatch(
                    f"network expects {self.in_arity} inputs, got {len(xs)}"
                )
            return self.forward(xs, c)

        return run


def network_from_json(doc: dict) -> NetworkDef:
    if not isinstance(doc, dict) or doc.get("version") != NET_SCHEMA_VERSION:
        raise ValidationError(f"expected network document {NET_SCHEMA_VERSION}")
    raw = doc.get("layers")
    if not isinstance(raw, list) or not raw:
        raise ValidationError("network needs a nonempty layer list")
    layers = []
    for item in raw:
        try:
            weights = tuple(tuple(float(w) for w in row) for row in item["weights"])
            bias = tuple(float(b) for b in item["bias"])
            activation = item["activation"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed layer: {exc}") from exc
        if activation not in _ACTIVATIONS:
            raise ValidationError(f"unknown activation {activation!r}")
        if not weights or len(weights) != len(bias):
            raise ArityMismatch("weight row count must equal bias length")
        widths = {len(row) for row in weights}
        if len(widths) != 1 or 0 in widths:
            raise ArityMismatch("weight rows must be nonempty and equal length")
        layers.append(Layer(weights, bias, activation))
    for prev, nxt in zip(layers, layers[1:]):
        if len(prev.bias) != len(nxt.weights[0]):
            raise ArityMismatch(
                f"layer output arity {len(prev.bias)} feeds layer expecting "
                f"{len(nxt.weights[0])}"
            )
    return NetworkDef(tuple(layers))


def load_network(path) -> NetworkDef:
    with open(path) as fh:
        return network_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# Input bindings


def _as_vector(name: str, value) -> Tuple[float, ...]:
    if isinstance(value, (int, float)):
        return (float(value),)
    try:
        return tuple(float(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"binding {name!r} is not numeric") from exc


def bindings_from_json(doc: dict) -> Dict[str, Tuple[float, ...]]:
    return {name: _as_vector(name, value) for name, value in doc.items()}


def bindings_from_csv(text: str) -> Dict[str, Tuple[float, ...]]:
    """One row per binding: name, value, value, ..."""
    import csv
    import io

    out = {}
    for row in csv.reader(io.StringIO(text)):
        if not row or not row[0].strip():
            continue
        name = row[0].strip()
        out[name] = _as_vector(name, [cell for cell in row[1:] if cell.strip()])
    return out


def load_bindings(path) -> Dict[str, Tuple[float, ...]]:
    with open(path) as fh:
        text = fh.read()
    if str(path).endswith(".csv"):
        return bindings_from_csv(text)
    return bindings_from_json(json.loads(text))


def _check_bindings(doc: SpecDoc, inputs: Dict[str, Sequence[float]]) -> None:
    for name, n in doc.vectors:
        if name not in inputs:
            raise ValidationError(f"vector {name!r} is unbound")
        if len(inputs[name]) != n:
            raise ArityMismatch(
                f"vector {name!r} needs {n} components, got {len(inputs[name])}"
            )
    for name in doc.scalars:
        if name not in inputs:
            raise ValidationError(f"scalar {name!r} is unbound")
        if len(inputs[name]) != 1:
            raise ArityMismatch(f"scalar {name!r} needs exactly one value")


def _bound_env(env: Env, inputs: Dict[str, Sequence[float]],
               duals: Optional[Tuple[str, int]] = None) -> Env:
    slots = {}
    for name, values in inputs.items():
        vals = tuple(float(v) for v in values)
        seed_at = duals[1] if duals is not None and duals[0] == name else None

        @carrier_aware
        def run(_arg, c, _vals=vals, _seed=seed_at):
            if _seed is not None and c is DualCarrier:
                return tuple(
                    Dual(v, 1.0 if j == _seed else 0.0)
                    for j, v in enumerate(_vals)
                )
            return tuple(c.lift(v) for v in _vals)

        slots[f"in:{name}"] = run
    return extend_env(env, functions=slots)


# ---------------------------------------------------------------------------
# Evaluation and the training demo


def eval_loss(
    logic: LogicId,
    doc: SpecDoc,
    inputs: Dict[str, Sequence[float]],
    env: Optional[Env] = None,
    carrier=F64Carrier,
    grad_wrt: Optional[str] = None,
):
    """Loss value and, optionally, its gradient for one named vector."""
    env = env if env is not None else base_env()
    _check_bindings(doc, inputs)
    expr = elaborate(doc, logic, env)
    value = interpret(logic, expr, _bound_env(env, inputs), carrier)
    gradient = None
    if grad_wrt is not None:
        if grad_wrt not in inputs:
            raise ValidationError(f"gradient target {grad_wrt!r} is unbound")
        gradient = []
        for i in range(len(inputs[grad_wrt])):
            out = interpret(
                logic, expr, _bound_env(env, inputs, (grad_wrt, i)), DualCarrier
            )
            gradient.append(out.tangent if isinstance(out, Dual) else 0.0)
        gradient = tuple(gradient)
    return value, gradient


_TRAINABLE = (LogicKind.DL2, LogicKind.PRODUCT, LogicKind.STL)


def train_demo(
    logic: LogicId,
    doc: SpecDoc,
    inputs: Dict[str, Sequence[float]],
    env: Optional[Env] = None,
    x_name: str = "x",
    center_name: str = "v",
    radius_name: str = "eps",
    steps: int = 10,
    learning_rate: float = 0.1,
) -> List[dict]:
    """Projected gradient ascent on one input vector; returns the trace.

    Each step moves ``x_name`` along the loss gradient and projects it
    back into the box of radius ``radius_name`` around ``center_name``.
    """
    if logic.kind not in _TRAINABLE:
        raise RejectedLogic(
            f"{logic.kind.value} has min/max-flat gradients; "
            "use dl2, product, or stl"
        )
    env = env if env is not None else base_env()
    bound = {k: tuple(float(x) for x in v) for k, v in inputs.items()}
    for need in (x_name, center_name, radius_name):
        if need not in bound:
            raise ValidationError(f"training demo needs a binding for {need!r}")
    center = bound[center_name]
    radius = bound[radius_name][0]
    trace = []
    for step in range(steps + 1):
        loss, grad = eval_loss(logic, doc, bound, env, grad_wrt=x_name)
        trace.append({"step": step, "loss": float(loss), "x": list(bound[x_name])})
        if step == steps:
            break
        moved = [
            xi + learning_rate * gi for xi, gi in zip(bound[x_name], grad)
        ]
        projected = tuple(
            min(max(xi, ci - radius), ci + radius)
            for xi, ci in zip(moved, center)
        )
        bound[x_name] = projected
    return trace


def load_spec(path) -> SpecDoc:
    with open(path) as fh:
        return parse_spec(fh.read())
