"""Kazhdan-Lusztig bases, W-graphs and separated elements of finite Coxeter groups."""

__version__ = "0.1.0"
