from collections.abc import Callable
from typing import NamedTuple

import numpy as np

from src.errors import UnsupportedOperatorError
from src.misc import Observable
from src.models.qstate import (
    Derivative,
    Multiply,
    OperatorSpec,
    PhysicalParams,
    Product,
    Scaled,
    Sum,
)


class NormalTerm(NamedTuple):
    """
    coefficient * function(x) * d^order/dx^order, function None meaning 1
    """

    function: Callable[..., np.ndarray] | None
    coefficient: complex
    order: int


class Operators:
    @staticmethod
    def position(axis: int = 0, label: str = Observable.position) -> OperatorSpec:
        return Multiply(function=lambda *coordinates: coordinates[axis], label=label)

    @staticmethod
    def momentum(
        params: PhysicalParams, axis: int = 0, label: str = Observable.momentum
    ) -> OperatorSpec:
        return Derivative(axis=axis, coefficient=-1j * params.hbar, label=label)

    @staticmethod
    def momentum_squared(params: PhysicalParams, axis: int = 0) -> OperatorSpec:
        p = Operators.momentum(params, axis)
        return (p @ p).relabel("p2")

    @staticmethod
    def kinetic(params: PhysicalParams, axis: int = 0) -> OperatorSpec:
        return Scaled(
            factor=-(params.hbar**2) / (2.0 * params.mass),
            operand=Derivative(axis=axis, order=2),
            label="T",
        )

    @staticmethod
    def oscillator_hamiltonian(params: PhysicalParams) -> OperatorSpec:
        omega = params.require_omega()
        stiffness = params.mass * omega**2
        potential = Multiply(function=lambda x: 0.5 * stiffness * x**2, label="V")
        return (Operators.kinetic(params) + potential).relabel(Observable.hamiltonian)

    @staticmethod
    def free_hamiltonian_2d(params: PhysicalParams) -> OperatorSpec:
        px = Operators.momentum(params, axis=0, label="px")
        py = Operators.momentum(params, axis=1, label="py")
        kinetic = (px @ px) + (py @ py)
        return Scaled(
            factor=1.0 / (2.0 * params.mass),
            operand=kinetic,
            label=Observable.hamiltonian,
        )

    @staticmethod
    def number() -> OperatorSpec:
        # N = i d/dphi
        return Derivative(coefficient=1j, label=Observable.number)

    @staticmethod
    def phase() -> OperatorSpec:
        return Multiply(function=lambda phi: phi, label=Observable.phase)

    @staticmethod
    def energy(params: PhysicalParams) -> OperatorSpec:
        # E = i hbar d/dt
        return Derivative(coefficient=1j * params.hbar, label=Observable.energy)

    @staticmethod
    def time() -> OperatorSpec:
        return Multiply(function=lambda t: t, label=Observable.time)

    @staticmethod
    def normal_form(op: OperatorSpec) -> list[NormalTerm]:
        """
        Rewrite a one-dimensional operator as a sum of f(x)*c*d^k terms with
        k <= 2. Only trees whose multiplications already sit left of the
        derivatives reduce.
        """
        match op:
            case Multiply():
                return [NormalTerm(op.function, 1.0, 0)]
            case Derivative():
                if op.axis != 0:
                    raise UnsupportedOperatorError(
                        "out-state estimators support one-dimensional operators only"
                    )
                return [NormalTerm(None, complex(op.coefficient), op.order)]
            case Scaled():
                return [
                    term._replace(coefficient=op.factor * term.coefficient)
                    for term in Operators.normal_form(op.operand)
                ]
            case Sum():
                return [term for sub in op.terms for term in Operators.normal_form(sub)]
            case Product():
                terms = Operators.normal_form(op.factors[-1])
                for factor in reversed(op.factors[:-1]):
                    terms = [
                        Operators._compose(left, right)
                        for left in Operators.normal_form(factor)
                        for right in terms
                    ]
                return terms
        raise UnsupportedOperatorError(f"unknown operator node {type(op).__name__}")

    @staticmethod
    def _compose(left: NormalTerm, right: NormalTerm) -> NormalTerm:
        if left.order > 0 and right.function is not None:
            raise UnsupportedOperatorError(
                "a derivative acting on a multiplication is outside the supported family"
            )
        order = left.order + right.order
        if order > 2:
            raise UnsupportedOperatorError(
                f"derivative order {order} exceeds the supported second order"
            )
        if left.function is None:
            function = right.function
        elif right.function is None:
            function = left.function
        else:
            f, g = left.function, right.function

            def function(*coordinates):
                return f(*coordinates) * g(*coordinates)

        return NormalTerm(function, left.coefficient * right.coefficient, order)
