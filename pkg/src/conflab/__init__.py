"""conflab: a desk-scale simulation lab for 2D critical lattice models
and their continuum limits (SLE, loop soups, loop ensembles, free field).
"""

__version__ = "0.1.0"
