# apps/oracles/__init__.py
"""
Oracles App - Exact solutions for every benchmark case

This app handles:
- Wood's closed form for the 1D sine-wave case
- The Fourier-series solution for the 1D parabola case
- Logistic closed forms for the 2D scalar and coupled models
- Wiring each case into a ready-to-march problem object

Key Modules:
- exact: wood_exact, fourier_exact, exact_2d, exact_coupled, problem_factory
"""
