"""This module launches the "curvgraph" package.

Usage: python3 . [-h] [--version] COMMAND [options] [source]

Example:
    $ python3 . gen hypercube 3
    $ python3 . verify --family hypercube:3
"""

from curvgraph import curvgraph_cli

if __name__ == "__main__":
    curvgraph_cli.main()
