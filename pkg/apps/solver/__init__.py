# apps/solver/__init__.py
"""
Solver App - Linearly implicit BDF2 time marching

This app handles:
- Problem definitions for the 1D, 2D and coupled Burgers' models
- Constant-step time grids and the two-level BDF state
- Assembly of the implicit system with Dirichlet rows
- Dense LU solves with pivot and residual checks
- BDF1 startup and the full march with snapshot recording

Key Modules:
- problems: TimeConfig, Problem1D, Problem2D, ProblemCoupled, Solution
- stepper: assemble_1d, assemble_2d, assemble_coupled, solve_linear, march
"""
