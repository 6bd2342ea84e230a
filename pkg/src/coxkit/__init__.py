"""coxkit: verification workbench for (4,4,4) Coxeter combinatorics,
commutator-blueprint 2-groups, the rank-2 twin building over F2, and
tree products of finite groups."""

__version__ = "0.1.0"
