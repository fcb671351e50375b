"""Lengths of controlled bad sequences over normed wqo's.

Exact small-instance search for ``L_{A,g}(n)``, maximal order types of
exponential nwqo's, ordinal derivatives and the bound ``M_alpha``, and the
Hardy / length / fast-growing hierarchies used to classify the lengths.
"""

__version__ = "0.1.0"
