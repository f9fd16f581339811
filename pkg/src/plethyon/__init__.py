"""Exact plethystic and Faa di Bruno comultiplications, computed two ways."""

from .core import (
    AutFlavor,
    Generator,
    Lambda,
    Word,
    aut_order,
    factorial,
    lambda_sum,
    verschiebung,
    verschiebung_word,
    word_aut_order,
)
from .incidence import (
    FLAVORS,
    TensorElement,
    check_bialgebra_laws,
    counit,
    delta_combinatorial,
    delta_symbolic,
    enumerate_decompositions,
    get_flavor,
    product,
)
from .series import Series, generic_series, substitute_ordinary, substitute_plethystic

__version__ = "0.1.0"

__all__ = [
    "AutFlavor", "Generator", "Lambda", "Word", "aut_order", "factorial", "lambda_sum",
    "verschiebung", "verschiebung_word", "word_aut_order",
    "FLAVORS", "TensorElement", "check_bialgebra_laws", "counit", "delta_combinatorial",
    "delta_symbolic", "enumerate_decompositions", "get_flavor", "product",
    "Series", "generic_series", "substitute_ordinary", "substitute_plethystic",
]
