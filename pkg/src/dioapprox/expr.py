"""Expression DSL: parser, canonical printer, interval and jet evaluation.

Grammar (module contract):
    expr     := ['-'] term (('+'|'-') term)*
    term     := factor (('*'|'/') factor)*
    factor   := base ('^' exponent)?
    base     := number | name | '(' expr ')' | func '(' expr ')'
    func     := exp | log | sin | cos | sqrt
    exponent := signed number | '(' expr ')' | func '(' expr ')'
    names    := x, y, z or x1..xk; pi is a constant
    numbers  := decimal literals; rationals are written a/b

Non-integer exponents must fold to a constant (rational, or a square root
of a rational, kept as an exact real algebraic number) and are evaluated as
exp(c * log base), so the base must be positive on the domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ArityError, Diverged, DomainViolation, ExprSyntaxError
from .heights import RealAlgebraic
from .intervals import Interval, context_for
from .jets import Jet

_FUNCS = ("exp", "log", "sin", "cos", "sqrt")


# ---------------------------------------------------------------------------
# boxes
# ---------------------------------------------------------------------------

class Box:
    """Product of closed intervals with rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        self.lo = tuple(Fraction(v) for v in lo)
        self.hi = tuple(Fraction(v) for v in hi)
        if len(self.lo) != len(self.hi):
            raise ValueError("dimension mismatch")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError("empty box")

    @classmethod
    def unit(cls, k: int) -> "Box":
        return cls((0,) * k, (1,) * k)

    @property
    def dim(self) -> int:
        return len(self.lo)

    def __repr__(self):
        ivs = ", ".join(f"[{a}, {b}]" for a, b in zip(self.lo, self.hi))
        return f"Box({ivs})"

    def __eq__(self, other):
        return (isinstance(other, Box) and self.lo == other.lo
                and self.hi == other.hi)

    def __hash__(self):
        return hash((self.lo, self.hi))

    def midpoint(self) -> tuple[Fraction, ...]:
        return tuple((a + b) / 2 for a, b in zip(self.lo, self.hi))

    def widths(self) -> tuple[Fraction, ...]:
        return tuple(b - a for a, b in zip(self.lo, self.hi))

    def split(self, axis: int) -> tuple["Box", "Box"]:
        mid = (self.lo[axis] + self.hi[axis]) / 2
        lo2 = list(self.lo)
        hi1 = list(self.hi)
        hi1[axis] = mid
        lo2[axis] = mid
        return Box(self.lo, hi1), Box(lo2, self.hi)

    def contains_point(self, pt) -> bool:
        return all(a <= Fraction(x) <= b
                   for a, x, b in zip(self.lo, pt, self.hi))

    def intersects(self, other: "Box") -> bool:
        return all(a <= d and c <= b for a, b, c, d in
                   zip(self.lo, self.hi, other.lo, other.hi))


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class PiConst:
    pass


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: object  # int | Fraction | RealAlgebraic


@dataclass(frozen=True)
class Func:
    name: str  # exp log sin cos
    arg: object


@dataclass(frozen=True)
class Neg:
    arg: object


class ExprAST:
    """Parsed expression with a declared arity."""

    __slots__ = ("root", "arity")

    def __init__(self, root, arity: int):
        self.root = root
        self.arity = arity

    def __repr__(self):
        return f"ExprAST({print_expr(self)!r}, arity={self.arity})"

    def __eq__(self, other):
        return (isinstance(other, ExprAST) and self.arity == other.arity
                and self.root == other.root)

    def __hash__(self):
        return hash((self.root, self.arity))


# ---------------------------------------------------------------------------
# tokenizer / parser
# ---------------------------------------------------------------------------

class _Tokenizer:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0
        self.tokens = []
        self._scan()
        self.idx = 0

    def _err(self, msg, pos=None):
        pos = self.pos if pos is None else pos
        line = self.src.count("\n", 0, pos) + 1
        col = pos - (self.src.rfind("\n", 0, pos) + 1)
        raise ExprSyntaxError(msg, line, col)

    def _scan(self):
        src = self.src
        i = 0
        while i < len(src):
            c = src[i]
            if c.isspace():
                i += 1
                continue
            if c in "+-*/^()":
                self.tokens.append((c, c, i))
                i += 1
                continue
            if c.isdigit() or (c == "." and i + 1 < len(src) and src[i + 1].isdigit()):
                j = i
                seen_dot = False
                while j < len(src) and (src[j].isdigit() or (src[j] == "." and not seen_dot)):
                    seen_dot = seen_dot or src[j] == "."
                    j += 1
                self.tokens.append(("num", src[i:j], i))
                i = j
                continue
            if c.isalpha():
                j = i
                while j < len(src) and (src[j].isalnum() or src[j] == "_"):
                    j += 1
                self.tokens.append(("name", src[i:j], i))
                i = j
                continue
            self.pos = i
            self._err(f"unexpected character {c!r}")
        self.tokens.append(("eof", "", len(src)))

    def peek(self):
        return self.tokens[self.idx]

    def next(self):
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            self.pos = tok[2]
            self._err(f"expected {kind!r}, got {tok[1]!r}")
        return tok


def _var_index(name: str):
    if name in ("x", "y", "z"):
        return "xyz".index(name)
    if name.startswith("x") and name[1:].isdigit() and name[1:] != "0":
        return int(name[1:]) - 1
    return None


class _Parser:
    def __init__(self, src: str, arity):
        self.tk = _Tokenizer(src)
        self.declared_arity = arity
        self.max_index = -1

    def parse(self) -> ExprAST:
        root = self._expr()
        tok = self.tk.peek()
        if tok[0] != "eof":
            self.tk.pos = tok[2]
            self.tk._err(f"trailing input {tok[1]!r}")
        arity = self.declared_arity
        if arity is None:
            arity = self.max_index + 1 if self.max_index >= 0 else 1
        return ExprAST(root, arity)

    def _expr(self):
        if self.tk.peek()[0] == "-":
            self.tk.next()
            node = Neg(self._term())
        else:
            node = self._term()
        while self.tk.peek()[0] in ("+", "-"):
            op = self.tk.next()[0]
            node = BinOp(op, node, self._term())
        return node

    def _term(self):
        node = self._factor()
        while self.tk.peek()[0] in ("*", "/"):
            op = self.tk.next()[0]
            rhs = self._factor()
            if (op == "/" and isinstance(node, Const) and isinstance(rhs, Const)
                    and rhs.value != 0):
                # rational literals a/b fold to one exact constant
                node = Const(node.value / rhs.value)
            else:
                node = BinOp(op, node, rhs)
        return node

    def _factor(self):
        node = self._base()
        if self.tk.peek()[0] == "^":
            self.tk.next()
            exp = self._exponent()
            node = Pow(node, exp)
        return node

    def _base(self):
        kind, text, pos = self.tk.next()
        if kind == "num":
            if "." in text:
                whole, frac = text.split(".")
                val = Fraction(int(whole or 0)) + Fraction(int(frac or 0), 10 ** len(frac))
            else:
                val = Fraction(int(text))
            return Const(val)
        if kind == "(":
            node = self._expr()
            self.tk.expect(")")
            return node
        if kind == "name":
            if text == "pi":
                return PiConst()
            if text in _FUNCS:
                self.tk.expect("(")
                arg = self._expr()
                self.tk.expect(")")
                if text == "sqrt":
                    return Pow(arg, Fraction(1, 2))
                return Func(text, arg)
            idx = _var_index(text)
            if idx is None:
                self.tk.pos = pos
                self.tk._err(f"unknown name {text!r}")
            if self.declared_arity is not None and idx >= self.declared_arity:
                raise ArityError(
                    f"variable {text!r} exceeds declared arity {self.declared_arity}")
            self.max_index = max(self.max_index, idx)
            return Var(idx)
        self.tk.pos = pos
        self.tk._err(f"unexpected token {text!r}")

    def _exponent(self):
        tok = self.tk.peek()
        if tok[0] in ("-", "num") or (tok[0] == "name" and tok[1] in _FUNCS) \
                or tok[0] == "(":
            neg = False
            if tok[0] == "-":
                self.tk.next()
                neg = True
            sub = self._base()
            const = _fold_constant(sub)
            if const is None:
                self.tk.pos = tok[2]
                self.tk._err("exponent must fold to a rational or sqrt constant")
            if neg:
                const = -const if isinstance(const, Fraction) else _negate_alg(const)
            if isinstance(const, Fraction) and const.denominator == 1:
                return int(const)
            return const
        self.tk.pos = tok[2]
        self.tk._err("malformed exponent")


def _negate_alg(alg: RealAlgebraic) -> RealAlgebraic:
    coeffs = [c if i % 2 == 0 else -c for i, c in enumerate(alg.minpoly.coeffs)]
    from .heights import IntPolynomial
    return RealAlgebraic(IntPolynomial(coeffs), -alg.hi, -alg.lo, validate=False)


def _fold_constant(node):
    """Fold a subtree to Fraction or RealAlgebraic, else None."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Neg):
        v = _fold_constant(node.arg)
        if v is None:
            return None
        return -v if isinstance(v, Fraction) else _negate_alg(v)
    if isinstance(node, BinOp):
        a = _fold_constant(node.left)
        b = _fold_constant(node.right)
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            if node.op == "/" and b != 0:
                return a / b
        return None
    if isinstance(node, Pow) and node.exponent == Fraction(1, 2):
        v = _fold_constant(node.base)
        if isinstance(v, Fraction) and v > 0:
            root = RealAlgebraic.nth_root(v, 2)
            return root.as_rational() if root.is_rational() else root
    return None


def parse(source: str, arity: int | None = None) -> ExprAST:
    """Parse a DSL expression; arity inferred from variables if omitted."""
    return _Parser(source, arity).parse()


# ---------------------------------------------------------------------------
# canonical printer
# ---------------------------------------------------------------------------

def _name_for(idx: int, arity: int) -> str:
    if arity <= 3:
        return "xyz"[idx]
    return f"x{idx + 1}"


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 1, "pow": 3, "atom": 4}


def _print_node(node, arity):
    if isinstance(node, Const):
        v = node.value
        if v.denominator == 1:
            return str(v.numerator), _PREC["atom"] if v >= 0 else _PREC["neg"]
        return f"{v.numerator}/{v.denominator}", _PREC["*"]
    if isinstance(node, PiConst):
        return "pi", _PREC["atom"]
    if isinstance(node, Var):
        return _name_for(node.index, arity), _PREC["atom"]
    if isinstance(node, Neg):
        s, p = _print_node(node.arg, arity)
        if p < _PREC["*"]:
            s = f"({s})"
        return f"-{s}", _PREC["neg"]
    if isinstance(node, BinOp):
        ls, lp = _print_node(node.left, arity)
        rs, rp = _print_node(node.right, arity)
        myp = _PREC[node.op]
        if lp < myp:
            ls = f"({ls})"
        if rp < myp or (rp == myp and node.op in ("-", "/")):
            rs = f"({rs})"
        return f"{ls} {node.op} {rs}", myp
    if isinstance(node, Pow):
        bs, bp = _print_node(node.base, arity)
        if bp < _PREC["atom"]:
            bs = f"({bs})"
        e = node.exponent
        if isinstance(e, int):
            if e < 0:
                return f"{bs}^(-{-e})", _PREC["pow"]
            return f"{bs}^{e}", _PREC["pow"]
        if isinstance(e, Fraction):
            return f"{bs}^({e.numerator}/{e.denominator})", _PREC["pow"]
        # algebraic exponent: only sqrt-of-rational survives parsing
        sq = _sqrt_payload(e)
        if sq is not None:
            inner = str(sq.numerator) if sq.denominator == 1 else \
                f"{sq.numerator}/{sq.denominator}"
            return f"{bs}^sqrt({inner})", _PREC["pow"]
        raise ValueError("unprintable exponent")
    if isinstance(node, Func):
        s, _ = _print_node(node.arg, arity)
        return f"{node.name}({s})", _PREC["atom"]
    raise TypeError(f"unknown node {node!r}")


def _sqrt_payload(alg: RealAlgebraic):
    cs = alg.minpoly.coeffs
    if len(cs) == 3 and cs[1] == 0 and alg.sign() > 0:
        return Fraction(-cs[0], cs[2])
    return None


def print_expr(f: ExprAST) -> str:
    return _print_node(f.root, f.arity)[0]


# ---------------------------------------------------------------------------
# interval evaluation
# ---------------------------------------------------------------------------

def _alg_exponent_interval(e: RealAlgebraic, ctx):
    lo, hi = e.refine(Fraction(1, 2 ** (ctx.prec + 8)))
    return ctx.interval(lo, hi)


def _eval_iv(node, coords, ctx):
    if isinstance(node, Const):
        return ctx.from_fraction(node.value)
    if isinstance(node, PiConst):
        return ctx.pi()
    if isinstance(node, Var):
        return coords[node.index]
    if isinstance(node, Neg):
        return -_eval_iv(node.arg, coords, ctx)
    if isinstance(node, BinOp):
        a = _eval_iv(node.left, coords, ctx)
        b = _eval_iv(node.right, coords, ctx)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    if isinstance(node, Pow):
        base = _eval_iv(node.base, coords, ctx)
        e = node.exponent
        if isinstance(e, int):
            return base.pow_int(e)
        if isinstance(e, Fraction):
            if e.denominator == 2 and base.lo >= 0 and e > 0:
                return base.pow_int(e.numerator).sqrt()
            c = ctx.from_fraction(e)
        else:
            c = _alg_exponent_interval(e, ctx)
        return (c * base.log()).exp()
    if isinstance(node, Func):
        v = _eval_iv(node.arg, coords, ctx)
        return getattr(v, node.name)()
    raise TypeError(f"unknown node {node!r}")


def eval_interval(f: ExprAST, box: Box, precision: int = 53):
    """Certified enclosure of the range of f over the box."""
    if box.dim < f.arity:
        raise ArityError("box dimension below expression arity")
    ctx = context_for(precision)
    coords = [ctx.interval(lo, hi) for lo, hi in zip(box.lo, box.hi)]
    return _eval_iv(f.root, coords, ctx)


def eval_point(f: ExprAST, point, precision: int = 53):
    """Enclosure of f at a rational point."""
    ctx = context_for(precision)
    coords = [ctx.from_fraction(Fraction(p)) for p in point]
    return _eval_iv(f.root, coords, ctx)


# ---------------------------------------------------------------------------
# jet evaluation
# ---------------------------------------------------------------------------

def is_polynomial(f: ExprAST) -> bool:
    """True when f is a polynomial with rational coefficients."""

    def walk(node):
        if isinstance(node, (Const, Var)):
            return True
        if isinstance(node, PiConst):
            return False
        if isinstance(node, Neg):
            return walk(node.arg)
        if isinstance(node, BinOp):
            if node.op == "/":
                return walk(node.left) and isinstance(node.right, Const) \
                    and node.right.value != 0
            return walk(node.left) and walk(node.right)
        if isinstance(node, Pow):
            return isinstance(node.exponent, int) and node.exponent >= 0 \
                and walk(node.base)
        if isinstance(node, Func):
            return False
        return False

    return walk(f.root)


def _eval_jet_node(node, vars_jets, ctx, k, order):
    if isinstance(node, Const):
        v = node.value if ctx is None else ctx.from_fraction(node.value)
        return Jet.constant(k, order, v)
    if isinstance(node, PiConst):
        if ctx is None:
            raise DomainViolation("pi requires interval arithmetic")
        return Jet.constant(k, order, ctx.pi())
    if isinstance(node, Var):
        return vars_jets[node.index]
    if isinstance(node, Neg):
        return -_eval_jet_node(node.arg, vars_jets, ctx, k, order)
    if isinstance(node, BinOp):
        a = _eval_jet_node(node.left, vars_jets, ctx, k, order)
        b = _eval_jet_node(node.right, vars_jets, ctx, k, order)
        return {"+": a.__add__, "-": a.__sub__, "*": a.__mul__,
                "/": a.__truediv__}[node.op](b)
    if isinstance(node, Pow):
        base = _eval_jet_node(node.base, vars_jets, ctx, k, order)
        e = node.exponent
        if isinstance(e, int):
            return base.pow_int(e)
        if isinstance(e, Fraction):
            c = e if ctx is None else ctx.from_fraction(e)
        else:
            if ctx is None:
                raise DomainViolation("algebraic exponent requires intervals")
            c = _alg_exponent_interval(e, ctx)
        return (base.log() * c).exp()
    if isinstance(node, Func):
        v = _eval_jet_node(node.arg, vars_jets, ctx, k, order)
        return getattr(v, node.name)()
    raise TypeError(f"unknown node {node!r}")


def eval_jet(f: ExprAST, center, order: int, precision: int = 128) -> Jet:
    """Jet of f at a rational center; exact Fractions for polynomials."""
    if order > 64:
        raise ValueError("jet order capped at 64")
    k = f.arity
    center = [Fraction(c) for c in center]
    if is_polynomial(f):
        vars_jets = [Jet.variable(k, order, i, center[i]) for i in range(k)]
        return _eval_jet_node(f.root, vars_jets, None, k, order)
    ctx = context_for(precision)
    vars_jets = [Jet.variable(k, order, i, ctx.from_fraction(center[i]))
                 for i in range(k)]
    return _eval_jet_node(f.root, vars_jets, ctx, k, order)


def eval_jet_box(f: ExprAST, box: Box, order: int, precision: int = 53) -> Jet:
    """Jet with the whole box as center: coefficients enclose d^a f(x)/a!
    for every x in the box (Taylor-model style)."""
    k = f.arity
    ctx = context_for(precision)
    vars_jets = [Jet.variable(k, order, i, ctx.interval(box.lo[i], box.hi[i]))
                 for i in range(k)]
    return _eval_jet_node(f.root, vars_jets, ctx, k, order)


def derivative_bound(phis, box: Box, order: int, precision: int = 53,
                     max_depth: int = 12) -> Fraction:
    """Certified B >= 1 with |d^a phi_j| <= B on the box for all |a| <= order."""
    best = Fraction(1)

    def visit(bx: Box, depth: int):
        nonlocal best
        try:
            for phi in phis:
                jet = eval_jet_box(phi, bx, order, precision)
                for mag in jet.derivative_magnitudes().values():
                    if mag > best:
                        best = Fraction(mag)
        except DomainViolation:
            if depth >= max_depth:
                raise Diverged("derivative_bound subdivision exhausted") from None
            widths = bx.widths()
            axis = widths.index(max(widths))
            b1, b2 = bx.split(axis)
            visit(b1, depth + 1)
            visit(b2, depth + 1)

    visit(box, 0)
    return best
