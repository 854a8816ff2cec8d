# apps/experiments/__init__.py
"""
Experiments App - Batch front end for the Burgers solvers

This app handles:
- Run configurations read from JSON (file or standard input)
- Validation of run and sweep settings through Django forms
- Solution snapshots, spectra and summaries written as CSV/JSON artifacts
- Reproduction of the published error tables against embedded reference data
- A run ledger recording every command invocation

Key Models:
- SimulationRun: One row per solve, stability sweep or table reproduction

Management Commands:
- solve: March one configured case and score it against its exact solution
- stability: Frozen-coefficient eigenvalue sweep over grid sizes
- reproduce: Re-run a published table and compare cell by cell
"""
