"""
Expression trees for analytic tails and conformal maps.

Every node evaluates vectorized over numpy arrays and carries its own
derivative rule, so a tree yields (value, derivative) in one forward pass.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Sequence, Tuple, Type
import logging

import numpy as np

from symbols.elliptic import EllipticParameters, arcsn, nome_parameters, sn_cn_dn
from utils.error_handler import AspectOverflow, SchemaError, ZeroOutsideDisk

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

Pair = Tuple[np.ndarray, np.ndarray]

ASPECT_MIN = 1e-3
ASPECT_MAX = 1e3


def complex_to_pair(value: complex) -> List[float]:
    value = complex(value)
    return [value.real, value.imag]


def pair_to_complex(value: Any) -> complex:
    """
    Parse a complex number from its [re, im] encoding (plain numbers accepted).

    Args:
        value (Any): [re, im] pair or real number

    Returns:
        complex: Parsed value

    Raises:
        SchemaError: If the value is not a number or a pair of numbers
    """
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise SchemaError(f"Expected a complex number as [re, im], got {value!r}")


class Expr(ABC):
    """Abstract base class for expression nodes."""

    op: str = ""

    def __call__(self, z: Any) -> np.ndarray:
        return self.evaluate(z)

    def evaluate(self, z: Any) -> np.ndarray:
        """
        Evaluate the expression.

        Args:
            z (Any): Complex scalar or array

        Returns:
            np.ndarray: Values with the shape of z
        """
        return self.evaluate_with_derivative(z)[0]

    def derivative(self, z: Any) -> np.ndarray:
        return self.evaluate_with_derivative(z)[1]

    @abstractmethod
    def evaluate_with_derivative(self, z: Any) -> Pair:
        """
        Evaluate the expression and its complex derivative.

        Args:
            z (Any): Complex scalar or array

        Returns:
            Pair: (values, derivatives)
        """
        pass

    @property
    def args(self) -> List["Expr"]:
        return []

    def params(self) -> Dict[str, Any]:
        return {}

    def to_dict(self) -> Dict[str, Any]:
        return {"op": self.op, "args": [a.to_dict() for a in self.args], "params": self.params()}

    @classmethod
    def from_parts(cls, args: List["Expr"], params: Dict[str, Any]) -> "Expr":
        raise NotImplementedError

    def is_zero(self) -> bool:
        return False

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.params()}, {self.args})"


def _as_array(z: Any) -> np.ndarray:
    return np.asarray(z, dtype=complex)


class Const(Expr):
    op = "const"

    def __init__(self, value: complex):
        self.value = complex(value)

    def evaluate_with_derivative(self, z: Any) -> Pair:
        z = _as_array(z)
        return np.full(z.shape, self.value, dtype=complex), np.zeros(z.shape, dtype=complex)

    def params(self) -> Dict[str, Any]:
        return {"value": complex_to_pair(self.value)}

    @classmethod
    def from_parts(cls, args, params):
        return cls(pair_to_complex(params.get("value", 0.0)))

    def is_zero(self) -> bool:
        return self.value == 0


class Identity(Expr):
    op = "z"

    def evaluate_with_derivative(self, z: Any) -> Pair:
        z = _as_array(z)
        return z.copy(), np.ones(z.shape, dtype=complex)

    @classmethod
    def from_parts(cls, args, params):
        return cls()


class Add(Expr):
    op = "add"

    def __init__(self, *terms: Expr):
        self.terms = list(terms)

    @property
    def args(self) -> List[Expr]:
        return self.terms

    def evaluate_with_derivative(self, z: Any) -> Pair:
        z = _as_array(z)
        value = np.zeros(z.shape, dtype=complex)
        slope = np.zeros(z.shape, dtype=complex)
        for term in self.terms:
            f, df = term.evaluate_with_derivative(z)
            value = value + f
            slope = slope + df
        return value, slope

    @classmethod
    def from_parts(cls, args, params):
        return cls(*args)

    def is_zero(self) -> bool:
        return all(t.is_zero() for t in self.terms)


class Mul(Expr):
    op = "mul"

    def __init__(self, *factors: Expr):
        self.factors = list(factors)

    @property
    def args(self) -> List[Expr]:
        return self.factors

    def evaluate_with_derivative(self, z: Any) -> Pair:
        z = _as_array(z)
        value = np.ones(z.shape, dtype=complex)
        slope = np.zeros(z.shape, dtype=complex)
        for factor in self.factors:
            f, df = factor.evaluate_with_derivative(z)
            slope = slope * f + value * df
            value = value * f
        return value, slope

    @classmethod
    def from_parts(cls, args, params):
        return cls(*args)

    def is_zero(self) -> bool:
        return any(f.is_zero() for f in self.factors)


class UnaryExpr(Expr):
    """A function applied to a single child expression (chain rule applied here)."""

    def __init__(self, arg: Expr):
        self.arg = arg

    @property
    def args(self) -> List[Expr]:
        return [self.arg]

    @abstractmethod
    def apply(self, f: np.ndarray) -> Pair:
        """Return (F(f), F'(f)) for the node's outer function F."""
        pass

    def evaluate_with_derivative(self, z: Any) -> Pair:
        f, df = self.arg.evaluate_with_derivative(z)
        value, outer = self.apply(f)
        return value, outer * df


class Power(UnaryExpr):
    op = "pow"

    def __init__(self, arg: Expr, n: int):
        super().__init__(arg)
        self.n = int(n)

    def apply(self, f):
        if self.n == 0:
            return np.ones_like(f), np.zeros_like(f)
        return f ** self.n, self.n * f ** (self.n - 1)

    def params(self):
        return {"n": self.n}

    @classmethod
    def from_parts(cls, args, params):
        return cls(args[0], int(params["n"]))


class Reciprocal(UnaryExpr):
    op = "reciprocal"

    def apply(self, f):
        inv = 1.0 / f
        return inv, -inv * inv

    @classmethod
    def from_parts(cls, args, params):
        return cls(args[0])


class Exp(UnaryExpr):
    op = "exp"

    def apply(self, f):
        e = np.exp(f)
        return e, e

    @classmethod
    def from_parts(cls, args, params):
        return cls(args[0])


class Log(UnaryExpr):
    op = "log"

    def apply(self, f):
        return np.log(f), 1.0 / f

    @classmethod
    def from_parts(cls, args, params):
        return cls(args[0])


class Affine(UnaryExpr):
    op = "affine"

    def __init__(self, arg: Expr, a: complex = 1.0, b: complex = 0.0):
        super().__init__(arg)
        self.a = complex(a)
        self.b = complex(b)

    def apply(self, f):
        return self.a * f + self.b, np.full(f.shape, self.a, dtype=complex)

    def params(self):
        return {"a": complex_to_pair(self.a), "b": complex_to_pair(self.b)}

    @classmethod
    def from_parts(cls, args, params):
        return cls(args[0], pair_to_complex(params.get("a", 1.0)), pair_to_complex(params.get("b", 0.0)))


class Mobius(UnaryExpr):
    op = "mobius"

    def __init__(self, arg: Expr, a: complex, b: complex, c: complex, d: complex):
        super().__init__(arg)
        self.a, self.b, self.c, self.d = (complex(a), complex(b), complex(c), complex(d))
        if self.a * self.d - self.b * self.c == 0:
            raise SchemaError("Degenerate Mobius transformation (ad - bc = 0)")

    def apply(self, f):
        den = self.c * f + self.d
        return (self.a * f + self.b) / den, (self.a * self.d - self.b * self.c) / (den * den)

    def params(self):
        return {k: complex_to_pair(getattr(self, k)) for k in ("a", "b", "c", "d")}

    @classmethod
    def from_parts(cls, args, params):
        return cls(args[0], *(pair_to_complex(params[k]) for k in ("a", "b", "c", "d")))


class Blaschke(UnaryExpr):
    op = "blaschke"

    def __init__(self, arg: Expr, zeros: Sequence[complex], unimodular: complex = 1.0):
        super().__init__(arg)
        self.zeros = [complex(a) for a in zeros]
        self.unimodular = complex(unimodular)
        bad = [a for a in self.zeros if abs(a) >= 1.0]
        if bad:
            raise ZeroOutsideDisk(f"Blaschke zeros must lie in the open unit disk: {bad}",
                                  {"zeros": [complex_to_pair(a) for a in bad]})
        if abs(abs(self.unimodular) - 1.0) > 1e-12:
            raise ZeroOutsideDisk(f"Blaschke factor must be unimodular, got |u| = {abs(self.unimodular)}")

    def apply(self, f):
        value = np.full(f.shape, self.unimodular, dtype=complex)
        slope = np.zeros(f.shape, dtype=complex)
        for a in self.zeros:
            den = 1.0 - np.conj(a) * f
            factor = (f - a) / den
            dfactor = (1.0 - abs(a) ** 2) / (den * den)
            slope = slope * factor + value * dfactor
            value = value * factor
        return value, slope

    def params(self):
        return {"zeros": [complex_to_pair(a) for a in self.zeros], "unimodular": complex_to_pair(self.unimodular)}

    @classmethod
    def from_parts(cls, args, params):
        return cls(args[0], [pair_to_complex(a) for a in params.get("zeros", [])],
                   pair_to_complex(params.get("unimodular", 1.0)))


class EllipticSn(UnaryExpr):
    op = "sn"

    def __init__(self, arg: Expr, m: float):
        super().__init__(arg)
        if not 0.0 <= m <= 1.0:
            raise SchemaError(f"Elliptic parameter must lie in [0, 1], got {m}")
        self.m = float(m)
        self._params = EllipticParameters(m=self.m, m1=1.0 - self.m, K=float("nan"), Kp=float("nan"))

    def apply(self, f):
        sn, cn, dn = sn_cn_dn(f, self._params)
        return sn, cn * dn

    def params(self):
        return {"m": self.m}

    @classmethod
    def from_parts(cls, args, params):
        return cls(args[0], float(params["m"]))


class RectangleDisk(UnaryExpr):
    """
    Conformal bijection between the centered rectangle
    {|Re| < width/2, |Im| < height/2} and the unit disk, rectangle center to 0.

    The rectangle is first turned so that its period ratio K'/K is at most 2,
    then sent to the upper half-plane by sn and to the disk by a Mobius map.
    """

    op = "rectangle_disk"

    def __init__(self, arg: Expr, width: float, height: float, inverse: bool = False):
        super().__init__(arg)
        if width <= 0 or height <= 0:
            raise SchemaError(f"Rectangle sides must be positive, got {width} x {height}")
        aspect = width / height
        if not ASPECT_MIN <= aspect <= ASPECT_MAX:
            raise AspectOverflow(f"Aspect ratio {aspect:.3g} outside [{ASPECT_MIN}, {ASPECT_MAX}]",
                                 {"width": width, "height": height})
        self.width = float(width)
        self.height = float(height)
        self.inverse = bool(inverse)
        if 2.0 * height / width <= 2.0:
            self.rotation = 1.0 + 0j
            self.elliptic = nome_parameters(2.0 * height / width)
            self.scale = 2.0 * self.elliptic.K / width
        else:
            self.rotation = -1j
            self.elliptic = nome_parameters(2.0 * width / height)
            self.scale = 2.0 * self.elliptic.K / height
        self.k = self.elliptic.k
        self.w0 = complex(sn_cn_dn(np.array([0.5j * self.elliptic.Kp]), self.elliptic)[0][0])

    def _to_u(self, zeta):
        return self.scale * self.rotation * zeta + 0.5j * self.elliptic.Kp

    def forward(self, zeta: np.ndarray) -> Pair:
        """Rectangle to disk, with derivative."""
        zeta = _as_array(zeta)
        shape = zeta.shape
        u = self._to_u(zeta.reshape(-1))
        w0, w0c = self.w0, np.conj(self.w0)
        top = u.imag > 0.5 * self.elliptic.Kp
        value = np.empty(u.shape, dtype=complex)
        slope = np.empty(u.shape, dtype=complex)
        # Lower half of the rectangle: sn stays bounded
        sn, cn, dn = sn_cn_dn(u[~top], self.elliptic)
        value[~top] = (sn - w0) / (sn - w0c)
        slope[~top] = (w0 - w0c) / (sn - w0c) ** 2 * cn * dn
        # Upper half: use 1/sn(u) = k sn(u - iK')
        sn, cn, dn = sn_cn_dn(u[top] - 1j * self.elliptic.Kp, self.elliptic)
        iw = self.k * sn
        den = 1.0 - w0c * iw
        value[top] = (1.0 - w0 * iw) / den
        slope[top] = -(w0 - w0c) * self.k * cn * dn / den ** 2
        return value.reshape(shape), (slope * self.scale * self.rotation).reshape(shape)

    def backward(self, d: np.ndarray) -> np.ndarray:
        """Disk to rectangle."""
        d = _as_array(d)
        shape = d.shape
        d = d.reshape(-1)
        w0, w0c = self.w0, np.conj(self.w0)
        num = w0 - w0c * d
        den = 1.0 - d
        near = np.abs(num) * np.sqrt(self.k) <= np.abs(den)
        u = np.empty(d.shape, dtype=complex)
        u[near] = arcsn(num[near] / den[near], self.elliptic.m, upper=True)
        u[~near] = 1j * self.elliptic.Kp + arcsn(den[~near] / (self.k * num[~near]), self.elliptic.m, upper=False)
        return ((u - 0.5j * self.elliptic.Kp) / (self.scale * self.rotation)).reshape(shape)

    def apply(self, f):
        if not self.inverse:
            return self.forward(f)
        zeta = self.backward(f)
        return zeta, 1.0 / self.forward(zeta)[1]

    def params(self):
        return {"width": self.width, "height": self.height, "inverse": self.inverse}

    @classmethod
    def from_parts(cls, args, params):
        return cls(args[0], float(params["width"]), float(params["height"]), bool(params.get("inverse", False)))


class Compose(Expr):
    op = "compose"

    def __init__(self, outer: Expr, inner: Expr):
        self.outer = outer
        self.inner = inner

    @property
    def args(self) -> List[Expr]:
        return [self.outer, self.inner]

    def evaluate_with_derivative(self, z: Any) -> Pair:
        g, dg = self.inner.evaluate_with_derivative(z)
        f, df = self.outer.evaluate_with_derivative(g)
        return f, df * dg

    @classmethod
    def from_parts(cls, args, params):
        return cls(args[0], args[1])


class ScaleArg(Expr):
    op = "scale"

    def __init__(self, arg: Expr, rho: float):
        self.arg = arg
        self.rho = float(rho)

    @property
    def args(self) -> List[Expr]:
        return [self.arg]

    def evaluate_with_derivative(self, z: Any) -> Pair:
        f, df = self.arg.evaluate_with_derivative(self.rho * _as_array(z))
        return f, self.rho * df

    def params(self):
        return {"rho": self.rho}

    @classmethod
    def from_parts(cls, args, params):
        return cls(args[0], float(params["rho"]))


NODE_TYPES: Dict[str, Type[Expr]] = {
    cls.op: cls for cls in (Const, Identity, Add, Mul, Power, Reciprocal, Compose, ScaleArg,
                            Mobius, Blaschke, Exp, Log, EllipticSn, Affine, RectangleDisk)
}


def expr_from_dict(data: Dict[str, Any]) -> Expr:
    """
    Build an expression tree from its JSON form {"op", "args", "params"}.

    Args:
        data (Dict[str, Any]): Node dictionary

    Returns:
        Expr: Expression tree

    Raises:
        SchemaError: If a node is unknown or malformed
    """
    if not isinstance(data, dict) or "op" not in data:
        raise SchemaError(f"Expression node must be an object with an 'op' field, got {data!r}")
    op = data["op"]
    if op not in NODE_TYPES:
        raise SchemaError(f"Unknown expression op '{op}'", {"known": sorted(NODE_TYPES)})
    args = [expr_from_dict(a) for a in data.get("args", [])]
    params = data.get("params", {}) or {}
    try:
        return NODE_TYPES[op].from_parts(args, params)
    except (KeyError, IndexError, TypeError, ValueError) as e:
        raise SchemaError(f"Malformed '{op}' node: {str(e)}", {"node": data}) from e


# Small builders used by presets and tests

def z() -> Expr:
    return Identity()


def const(value: complex) -> Expr:
    return Const(value)


def polynomial(coeffs: Sequence[complex], arg: Expr = None) -> Expr:
    """Polynomial sum_k coeffs[k] * arg^k as an expression tree."""
    arg = arg if arg is not None else Identity()
    terms: List[Expr] = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        if k == 0:
            terms.append(Const(c))
        elif k == 1:
            terms.append(Affine(arg, c, 0.0))
        else:
            terms.append(Affine(Power(arg, k), c, 0.0))
    return Add(*terms) if terms else Const(0.0)
