"""The five reference programs used by the benchmark harness and tests.

Three are hand-written linear-algebra pipelines (a least-squares fit, a
three-round power iteration, a bidirectional product cascade) and two
are seeded random dag programs.  All matrices share one size and every
expression carries the feasible set of exactly one implementation,
taken from the operator table below:

==============  =====================================================
op              feasible tuples (out, inputs...)
==============  =====================================================
mul             left input "row", right input "col"; the kernel
                writes its result in whatever layout the caller
                asks for (one tuple per output type)
add, sub        all participants share one type (one tuple per type)
copy, mean,
normalize       output type equals input type (one tuple per type)
transpose       output type is the input type flipped (row <-> col,
                block fixed)
inv             single tuple ("row", "row")
==============  =====================================================

The exhaustive optima of these programs are pinned in fixtures.md and
guarded by regression tests; edit them only together.
"""

from __future__ import annotations

import numpy as np

from .model import (
    Expression,
    Matrix,
    Program,
    SchemaError,
    TilingAlphabet,
    TilingInstance,
    build_instance,
)

__all__ = ["op_feasible", "fixture_programs", "fixture_instances"]

MATRIX_SIDE = 100

_FLIP = {"row": "col", "col": "row", "block": "block"}
_ELEMENTWISE = ("add", "sub", "hadamard")
_PRESERVING = ("copy", "normalize", "mean", "scale")


def op_feasible(
    op: str, alphabet: TilingAlphabet, n_inputs: int
) -> tuple[tuple[str, ...], ...]:
    """Feasible tuples of the single pinned implementation of ``op``."""
    types = alphabet.types

    def need(k: int) -> None:
        if n_inputs != k:
            raise SchemaError(f"op {op!r} takes {k} input(s), got {n_inputs}")

    if op == "mul":
        need(2)
        return tuple((t, "row", "col") for t in types)
    if op in _ELEMENTWISE:
        need(2)
        return tuple((t, t, t) for t in types)
    if op in _PRESERVING:
        need(1)
        return tuple((t, t) for t in types)
    if op == "transpose":
        need(1)
        return tuple((t, _FLIP[t]) for t in types)
    if op == "inv":
        need(1)
        return (("row", "row"),)
    raise SchemaError(f"no pinned implementation for op {op!r}")


def _assemble(
    alphabet: TilingAlphabet,
    inputs: tuple[str, ...],
    steps: list[tuple[str, str, tuple[str, ...]]],
    outputs: frozenset[str],
) -> Program:
    """Build a program from (out, op, ins) steps; expression ids are the
    produced matrix names."""
    names = list(inputs) + [out for out, _, _ in steps]
    matrices = tuple(
        Matrix(name, MATRIX_SIDE, MATRIX_SIDE, output=name in outputs)
        for name in names
    )
    expressions = tuple(
        Expression(
            id=out,
            op=op,
            out=out,
            inputs=ins,
            weight=1.0,
            feasible=op_feasible(op, alphabet, len(ins)),
        )
        for out, op, ins in steps
    )
    return Program(alphabet, matrices, expressions)


def _linreg() -> Program:
    """Least-squares smoother in the dual (gram) form.

    K = X Xt is the sample gram matrix; its square is inverted and
    applied to the transposed targets, then the fit is pushed back
    through X and blended with the coefficients.
    """
    alphabet = TilingAlphabet(("row", "col", "block"))
    steps = [
        ("Xt", "transpose", ("X",)),
        ("K", "mul", ("X", "Xt")),
        ("K2", "mul", ("K", "K")),
        ("Ki", "inv", ("K2",)),
        ("Yt", "transpose", ("Y",)),
        ("B", "mul", ("Ki", "Yt")),
        ("D", "mul", ("B", "X")),
        ("E", "add", ("D", "B")),
        ("F", "normalize", ("E",)),
    ]
    return _assemble(alphabet, ("X", "Y"), steps, frozenset({"F"}))


def _pca3() -> Program:
    """Dominant eigenvector by three rounds of gram-matrix squaring.

    K -> K^2 -> K^4 -> K^8 implements the power method with three
    squarings; the trailing steps extract the eigenvector estimate,
    its rank-one component, and the deflated gram matrix.
    """
    alphabet = TilingAlphabet(("row", "col", "block"))
    steps = [
        ("mu", "mean", ("X",)),
        ("Xc", "sub", ("X", "mu")),
        ("Xct", "transpose", ("Xc",)),
        ("K", "mul", ("Xc", "Xct")),
        ("K2", "mul", ("K", "K")),
        ("K4", "mul", ("K2", "K2")),
        ("K8", "mul", ("K4", "K4")),
        ("w", "mul", ("K8", "v0")),
        ("v", "normalize", ("w",)),
        ("vt", "transpose", ("v",)),
        ("R1", "mul", ("w", "vt")),
        ("Kd", "sub", ("K", "R1")),
    ]
    return _assemble(alphabet, ("X", "v0"), steps, frozenset({"v", "Kd"}))


def _powerset() -> Program:
    """Product cascades over the inputs {A, B, C, D} in two directions
    (three chains with rotated operand roles), squared mid-products,
    and an additive combining tail."""
    alphabet = TilingAlphabet(("row", "col"))
    steps = [
        ("F1", "mul", ("A", "B")),
        ("F2", "mul", ("F1", "C")),
        ("F3", "mul", ("F2", "D")),
        ("G1", "mul", ("A", "C")),
        ("G2", "mul", ("G1", "B")),
        ("H1", "mul", ("D", "B")),
        ("H2", "mul", ("H1", "C")),
        ("H3", "mul", ("H2", "B")),
        ("Q1", "mul", ("F3", "F3")),
        ("Q2", "mul", ("G2", "G2")),
        ("P1", "mul", ("Q1", "C")),
        ("P2", "mul", ("Q2", "B")),
        ("S1", "add", ("P1", "P2")),
        ("S2", "add", ("H3", "S1")),
        ("S3", "add", ("F3", "S2")),
    ]
    return _assemble(alphabet, ("A", "B", "C", "D"), steps, frozenset({"S3"}))


def _random_dag_program(n_inputs: int, n_exprs: int, s: int, seed: int) -> Program:
    """Seeded random dag: every expression after the first reads at least
    one earlier result, so the dependency order is never an antichain."""
    alphabet = TilingAlphabet(("row", "col", "block"))
    rng = np.random.default_rng(seed)
    inputs = tuple(f"I{i}" for i in range(n_inputs))
    produced: list[str] = []
    steps: list[tuple[str, str, tuple[str, ...]]] = []
    feasibles: list[tuple[tuple[str, ...], ...]] = []
    for j in range(n_exprs):
        if produced:
            a = produced[int(rng.integers(len(produced)))]
            pool = [x for x in (*inputs, *produced) if x != a]
            b = pool[int(rng.integers(len(pool)))]
            ins = (a, b) if rng.integers(2) else (b, a)
        else:
            i, i2 = (int(x) for x in rng.choice(n_inputs, size=2, replace=False))
            ins = (inputs[i], inputs[i2])
        out = f"R{j}"
        codes = rng.choice(alphabet.tau**3, size=s, replace=False)
        feasibles.append(
            tuple(
                tuple(alphabet.types[(int(c) // alphabet.tau**p) % alphabet.tau]
                      for p in (2, 1, 0))
                for c in codes
            )
        )
        steps.append((out, "rand", ins))
        produced.append(out)
    names = list(inputs) + [out for out, _, _ in steps]
    matrices = tuple(
        Matrix(name, MATRIX_SIDE, MATRIX_SIDE, output=name == f"R{n_exprs - 1}")
        for name in names
    )
    expressions = tuple(
        Expression(id=out, op=op, out=out, inputs=ins, weight=1.0, feasible=feas)
        for (out, op, ins), feas in zip(steps, feasibles)
    )
    return Program(alphabet, matrices, expressions)


def fixture_programs() -> list[tuple[str, Program]]:
    """The five reference programs, in benchmark order."""
    return [
        ("linreg", _linreg()),
        ("pca3", _pca3()),
        ("powerset", _powerset()),
        ("rand1", _random_dag_program(4, 9, 2, 16)),
        ("rand2", _random_dag_program(5, 8, 2, 102)),
    ]


def fixture_instances() -> list[tuple[str, TilingInstance]]:
    return [(name, build_instance(p)) for name, p in fixture_programs()]
