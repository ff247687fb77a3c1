"""
JSON schema for symbols, shared by the CLI and the tests.

{"poly": [[re, im], ...],
 "poles": [{"eta": [re, im], "alphas": [[re, im], ...]}, ...],
 "tail": {"op": str, "args": [...], "params": {...}},
 "analytic_radius": number}
"""
from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple
import json
import logging

from pydantic import BaseModel, Field, ValidationError, field_validator

from symbols.core import Pole, RationalPart, Symbol
from symbols.expressions import expr_from_dict
from utils.error_handler import SchemaError

# Configure logging
logging.basicConfig(level=logging.INFO,
                   format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

ComplexPair = Tuple[float, float]


class TailNode(BaseModel):
    op: str
    args: List["TailNode"] = Field(default_factory=list)
    params: Dict[str, Any] = Field(default_factory=dict)


class PoleModel(BaseModel):
    eta: ComplexPair
    alphas: List[ComplexPair] = Field(min_length=1)

    @field_validator("eta")
    @classmethod
    def eta_outside_disk(cls, value: ComplexPair) -> ComplexPair:
        if complex(*value) == 0 or abs(complex(*value)) <= 1.0:
            raise ValueError("pole eta must satisfy |eta| > 1")
        return value


class SymbolModel(BaseModel):
    poly: List[ComplexPair] = Field(default_factory=lambda: [(0.0, 0.0)])
    poles: List[PoleModel] = Field(default_factory=list)
    tail: TailNode = Field(default_factory=lambda: TailNode(op="const", params={"value": [0.0, 0.0]}))
    analytic_radius: float = Field(default=1.0, ge=1.0)


TailNode.model_rebuild()


def symbol_from_dict(data: Dict[str, Any]) -> Symbol:
    """
    Build a Symbol from its JSON dictionary.

    Args:
        data (Dict[str, Any]): Parsed JSON

    Returns:
        Symbol: The symbol

    Raises:
        SchemaError: If the document does not match the schema
    """
    try:
        model = SymbolModel.model_validate(data)
    except ValidationError as e:
        errors = [{"loc": list(err["loc"]), "msg": err["msg"]} for err in e.errors()]
        raise SchemaError(f"Symbol JSON does not match the schema ({len(errors)} errors)", {"errors": errors}) from e
    rational = RationalPart(
        tuple(complex(*c) for c in model.poly),
        tuple(Pole(complex(*p.eta), tuple(complex(*a) for a in p.alphas)) for p in model.poles),
    )
    tail = expr_from_dict(model.tail.model_dump())
    return Symbol(rational=rational, tail=tail, analytic_radius=model.analytic_radius)


def symbol_to_dict(sym: Symbol) -> Dict[str, Any]:
    return sym.to_dict()


def load_symbol(path: str) -> Symbol:
    """
    Load a symbol from a JSON file.

    Args:
        path (str): File path

    Returns:
        Symbol: The symbol

    Raises:
        SchemaError: If the file is not valid JSON or does not match the schema
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as e:
        raise SchemaError(f"Invalid JSON in {path} at line {e.lineno}, column {e.colno}: {e.msg}",
                          {"line": e.lineno, "column": e.colno}) from e
    except OSError as e:
        raise SchemaError(f"Cannot read symbol file {path}: {str(e)}") from e
    logger.info(f"Loaded symbol from {path}")
    return symbol_from_dict(data)


def save_symbol(sym: Symbol, path: Optional[str] = None) -> str:
    text = json.dumps(symbol_to_dict(sym), sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    return text
