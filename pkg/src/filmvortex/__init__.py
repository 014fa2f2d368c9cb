"""Boundary-vortex energetics of thin ferromagnetic films with DMI.

Library layout:

- geometry: unit-disk boundary meshes, tangent lifting, conformal charts
- renorm: renormalized vortex-interaction energy, four independent routes
- critpoints: two-vortex energy landscape, optimal pairs, classification
- boundarymin: trace-space minimization of the lifted boundary functional
- field2d: full vector functional on polar grids, global Jacobian, lifting
- corelocal: half-disk core energetics and the core constant
- dimred: stray-field Fourier energetics and thin-film regime probes
- cli: batch experiment driver
"""

__version__ = "0.1.0"
