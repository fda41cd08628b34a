"""Closed-form frequency-domain Green tensors for viscoelastic anisotropic media."""

__version__ = "0.1.0"
