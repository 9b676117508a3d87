"""Tiny arithmetic expression language over a single variable ``n``.

Used for Følner rules (``"2^n"``, ``"n+1"``, evaluated exactly on integers)
and for tau functions (``"sqrt(n)"``, ``"log(log(n+3))"``, evaluated with
mpmath).  Parsing goes through :mod:`ast` with a whitelist of node types;
``^`` is accepted as a synonym for ``**``.
"""

import ast
import operator

import mpmath

from .errors import BudgetExceededError, SpecError

MAX_INT_EXPONENT = 1 << 22

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Pow: operator.pow,
    ast.FloorDiv: operator.floordiv,
    ast.Div: operator.truediv,
    ast.Mod: operator.mod,
}

_REAL_FUNCS = {
    "log": mpmath.log,
    "ln": mpmath.log,
    "log2": lambda x: mpmath.log(x, 2),
    "log10": mpmath.log10,
    "sqrt": mpmath.sqrt,
    "exp": mpmath.exp,
}
_REAL_CONSTS = {"e": mpmath.e, "pi": mpmath.pi}


class Expr:
    """A parsed expression; ``int_value`` is exact, ``real_value`` uses mpmath."""

    def __init__(self, text, variables=("n",)):
        if isinstance(text, int):
            text = str(text)
        if not isinstance(text, str):
            raise SpecError(f"expression must be a string, got {text!r}")
        self.text = text
        self.variables = tuple(variables)
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise SpecError(f"cannot parse expression {text!r}: {exc.msg}") from None
        self._check(tree.body)
        self._tree = tree.body

    def __repr__(self):
        return f"Expr({self.text!r})"

    def __eq__(self, other):
        return isinstance(other, Expr) and other.text == self.text

    def __hash__(self):
        return hash(self.text)

    def _check(self, node):
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            self._check(node.left)
            self._check(node.right)
        elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            self._check(node.operand)
        elif isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            pass
        elif isinstance(node, ast.Name):
            if node.id not in self.variables and node.id not in _REAL_CONSTS:
                raise SpecError(f"unknown name {node.id!r} in {self.text!r}")
        elif isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            if node.func.id not in _REAL_FUNCS or node.keywords or len(node.args) != 1:
                raise SpecError(f"unsupported call {ast.unparse(node)!r} in {self.text!r}")
            self._check(node.args[0])
        else:
            raise SpecError(f"unsupported syntax {ast.unparse(node)!r} in {self.text!r}")

    @property
    def is_integer(self):
        """True when the expression uses only integer-safe constructs."""
        for node in ast.walk(self._tree):
            if isinstance(node, ast.Call):
                return False
            if isinstance(node, ast.Constant) and not isinstance(node.value, int):
                return False
            if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
                return False
            if isinstance(node, ast.Name) and node.id in _REAL_CONSTS:
                return False
        return True

    def int_value(self, **env):
        if not self.is_integer:
            raise SpecError(f"expression {self.text!r} is not integer valued")
        v = self._eval(self._tree, env, real=False)
        if not isinstance(v, int):
            raise SpecError(f"expression {self.text!r} did not give an integer")
        return v

    def real_value(self, **env):
        return self._eval(self._tree, {k: mpmath.mpf(v) for k, v in env.items()}, real=True)

    def __call__(self, **env):
        return self.int_value(**env) if self.is_integer else self.real_value(**env)

    def _eval(self, node, env, real):
        if isinstance(node, ast.BinOp):
            a = self._eval(node.left, env, real)
            b = self._eval(node.right, env, real)
            if isinstance(node.op, ast.Pow) and not real:
                if b < 0:
                    raise SpecError(f"negative exponent in integer expression {self.text!r}")
                if b > MAX_INT_EXPONENT:
                    raise BudgetExceededError(f"exponent {b} too large in {self.text!r}")
            return _BINOPS[type(node.op)](a, b)
        if isinstance(node, ast.UnaryOp):
            v = self._eval(node.operand, env, real)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Constant):
            return mpmath.mpf(node.value) if real else node.value
        if isinstance(node, ast.Name):
            if node.id in env:
                return env[node.id]
            return _REAL_CONSTS[node.id]
        if isinstance(node, ast.Call):
            return _REAL_FUNCS[node.func.id](self._eval(node.args[0], env, real))
        raise AssertionError("unreachable")


def parse_int(text):
    """Parse an integer literal such as ``"100"``, ``"10^6"``, ``"2**64+1"`` or ``"1e6"``."""
    if isinstance(text, int):
        return text
    text = str(text).strip()
    if "e" in text.lower() and text.replace("e", "").replace("E", "").replace("+", "").isdigit():
        mant, _, exp = text.lower().partition("e")
        return int(mant) * 10 ** int(exp)
    try:
        return Expr(text, variables=()).int_value()
    except SpecError as exc:
        raise SpecError(f"not an integer: {text!r}") from exc

