"""
RootBound command-line entry point.

Usage:
    python cli.py spectral radius --matrix tests/fixtures/j3.txt
    python cli.py bound upper --matrix c5.txt --partition pi.json
    python cli.py verify conjecture-c --n 4 --e 6 --progress
"""

from src.cli.main import main

if __name__ == "__main__":
    main()
