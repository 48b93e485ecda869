"""Overlapping community detection by adversarial training of clique
generators and discriminators over nonnegative affiliations.
"""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version('motif-agm')
except PackageNotFoundError:
    __version__ = 'unknown'
