"""Phase-space observables of photon-added/subtracted squeezed vacuum states.

Two independent backends compute every observable: closed-form Hermite sums
(``closedform``) and a truncated Fock-space oracle (``fock``).  ``phasespace``
samples either on grids, ``metrics`` extracts tile extents and sensitivity
radii, and ``cli`` drives it all from the command line.
"""

__version__ = "0.1.0"
