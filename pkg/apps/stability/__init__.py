# apps/stability/__init__.py
"""
Stability App - Frozen-coefficient spectral analysis

This app handles:
- The interior operator P of the 1D model
- The block operator R of the coupled model
- Interior weighting blocks A_r and B_r
- Eigenvalue spectra with a sign verdict, and sweeps over grid sizes

Key Modules:
- spectra: assemble_p_1d, assemble_r_coupled, spectrum, stability_sweep
"""
