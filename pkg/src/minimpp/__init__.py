"""minimpp: a desk-scale columnar MPP database with a TPC-H-style benchmark harness."""

__version__ = "0.1.0"
