# apps/metrics/__init__.py
"""
Metrics App - Error norms and point tables

This app handles:
- L2 and Linf error norms over all grid nodes
- Error reports with a JSON-ready summary
- Barycentric evaluation of snapshots at off-grid points
- Sum-conservation drift for coupled solutions

Key Modules:
- norms: l2_error, linf_error, error_report, point_table, max_sum_drift
"""
