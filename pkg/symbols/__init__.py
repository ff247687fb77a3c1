"""
Symbol representation and evaluation.
"""
from symbols.core import (AnalyticMap, Pole, RationalPart, ResolventSymbol, Symbol, evaluate,
                          evaluate_derivative, make_symbol, resolvent)
from symbols.fourier import FourierCoefficients, fourier_coefficients
from symbols.schema import load_symbol, save_symbol, symbol_from_dict, symbol_to_dict
