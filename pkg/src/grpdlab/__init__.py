"""Finite and symbolic étale groupoids, Brin-Thompson tables, convolution
algebras with reduced l^p norms, and numerical rigidity checks."""

__version__ = "0.1.0"
