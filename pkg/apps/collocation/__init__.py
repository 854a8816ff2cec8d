# apps/collocation/__init__.py
"""
Collocation App - Spectral grids and differential quadrature

This app handles:
- Chebyshev-Gauss-Lobatto node sets on arbitrary intervals
- 2D tensor-product grids with a fixed x-major flattening
- GDQM weighting matrices for first and higher derivatives
- Kronecker lifting of 1D matrices to full 2D operators
- The exception hierarchy shared by every numerical app

Key Modules:
- grid: Interval, Grid1D, Grid2D
- dqm: DqMatrix, Operator2D
- exceptions: BurgersError and its reason-coded subclasses
"""
