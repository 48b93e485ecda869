#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    Setup file for motif_agm.

    All metadata lives in setup.cfg; `python setup.py docs` builds the
    Sphinx documentation when sphinx is installed.
"""

from setuptools import setup


if __name__ == "__main__":
    setup()
