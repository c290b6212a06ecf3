"""
__main__.py - Entry point for ``python -m prohibitiongrammar_python``
"""
from prohibitiongrammar_python.cli import main

main()
