"""Exact homology of finite crossed modules.

Submodules:
    intlin      integer matrices, Smith normal form, chain complex homology
    groups      finite groups by multiplication table, homs, actions
    crossed     crossed modules, morphisms, coefficient actions
    simplicial  nerves, Moore complexes, homotopy groups
    bar         bar resolutions, bicomplexes, homology of crossed modules
    laws        cross-checks relating the different computations
    cli         command line interface over JSON input documents
"""

__version__ = "0.1.0"
