"""Finitely generated abelian groups given by presentations, and their homomorphisms.

A group is Z^n modulo the column span of a relation matrix. Elements are
integer vectors on the generators; ``reduce`` maps them to canonical
coordinates (torsion coordinates modulo their invariant factors, then free
coordinates), so two vectors name the same element iff their reductions agree.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

from graphinv.errors import InternalAssertion, check
from graphinv.services.intlinalg import (
    IntMatrix,
    SmithForm,
    Vector,
    hermite_basis,
    hstack,
    kernel_basis,
    smith_normal_form,
    solve,
)


@dataclass(frozen=True)
class FGAbelianGroup:
    generators: int
    relations: IntMatrix

    def __post_init__(self):
        check(self.relations.rows == self.generators, "relation matrix height mismatch")

    @classmethod
    def free(cls, rank: int) -> "FGAbelianGroup":
        return cls(rank, IntMatrix.zeros(rank, 0))

    @classmethod
    def zero(cls) -> "FGAbelianGroup":
        return cls.free(0)

    @classmethod
    def cyclic(cls, order: int) -> "FGAbelianGroup":
        return cls(1, IntMatrix.from_rows([[order]]))

    @cached_property
    def snf(self) -> SmithForm:
        return smith_normal_form(self.relations)

    @cached_property
    def _torsion_slots(self) -> tuple[tuple[int, int], ...]:
        return tuple((k, d) for k, d in enumerate(self.snf.diagonal) if d > 1)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for _, d in self._torsion_slots)

    @property
    def free_rank(self) -> int:
        return self.generators - self.snf.rank

    @property
    def rank(self) -> int:
        """Number of canonical coordinates (torsion then free)."""
        return len(self._torsion_slots) + self.free_rank

    @property
    def exponent(self) -> int:
        """Least common multiple of the torsion orders (1 when torsion-free)."""
        return math.lcm(1, *self.torsion)

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        return math.prod(self.torsion)

    def is_trivial(self) -> bool:
        return self.rank == 0

    def invariants(self) -> tuple[int, tuple[int, ...]]:
        return (self.free_rank, self.torsion)

    def is_isomorphic(self, other: "FGAbelianGroup") -> bool:
        return self.invariants() == other.invariants()

    def certificate_holds(self) -> bool:
        """U * R * V reproduces the diagonal form."""
        form = self.snf
        return form.U @ self.relations @ form.V == form.D

    def reduce(self, x: Sequence[int]) -> Vector:
        check(len(x) == self.generators, "element length mismatch", generators=self.generators)
        y = self.snf.U.apply(x)
        torsion = [y[k] % d for k, d in self._torsion_slots]
        free = [y[k] for k in range(self.snf.rank, self.generators)]
        return tuple(torsion + free)

    def lift(self, coordinates: Sequence[int]) -> Vector:
        """A generator vector whose reduction is ``coordinates``."""
        check(len(coordinates) == self.rank, "coordinate length mismatch")
        y = [0] * self.generators
        slots = [k for k, _ in self._torsion_slots] + list(range(self.snf.rank, self.generators))
        for k, c in zip(slots, coordinates):
            y[k] = c
        return self.snf.U_inv.apply(y)

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.reduce(x))

    def equal(self, x: Sequence[int], y: Sequence[int]) -> bool:
        return self.is_zero(tuple(a - b for a, b in zip(x, y)))

    def basis_vector(self, j: int) -> Vector:
        return tuple(int(i == j) for i in range(self.generators))

    def describe(self) -> str:
        """Human-readable form such as ``Z^2 x Z/2``."""
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " x ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by an integer matrix on generators."""

    domain: FGAbelianGroup
    codomain: FGAbelianGroup
    matrix: IntMatrix

    def __post_init__(self):
        check(
            self.matrix.rows == self.codomain.generators
            and self.matrix.cols == self.domain.generators,
            "homomorphism matrix has the wrong shape",
        )

    @classmethod
    def identity(cls, group: FGAbelianGroup) -> "GroupHom":
        return cls(group, group, IntMatrix.identity(group.generators))

    @classmethod
    def zero(cls, domain: FGAbelianGroup, codomain: FGAbelianGroup) -> "GroupHom":
        return cls(domain, codomain, IntMatrix.zeros(codomain.generators, domain.generators))

    @cached_property
    def certificate(self) -> IntMatrix:
        """F with matrix * R_domain = R_codomain * F (raises if not well defined)."""
        columns = []
        for r in (self.matrix @ self.domain.relations).columns():
            f = solve(self.codomain.relations, r)
            if f is None:
                raise InternalAssertion("homomorphism is not well defined")
            columns.append(f)
        return IntMatrix.from_columns(columns, self.codomain.relations.cols)

    @property
    def well_defined(self) -> bool:
        try:
            self.certificate
        except InternalAssertion:
            return False
        return True

    def __call__(self, x: Sequence[int]) -> Vector:
        return self.matrix.apply(x)

    def compose(self, first: "GroupHom") -> "GroupHom":
        """self after first."""
        return GroupHom(first.domain, self.codomain, self.matrix @ first.matrix)

    def equals(self, other: "GroupHom") -> bool:
        return all(
            self.codomain.equal(self(e), other(e))
            for e in (self.domain.basis_vector(j) for j in range(self.domain.generators))
        )

    def is_zero(self) -> bool:
        return all(self.codomain.is_zero(c) for c in self.matrix.columns())

    def coordinate_matrix(self) -> list[list[int]]:
        """The map in canonical coordinates of domain and codomain."""
        columns = [
            self.codomain.reduce(self(self.domain.lift(self._unit(j))))
            for j in range(self.domain.rank)
        ]
        return [[c[i] for c in columns] for i in range(self.codomain.rank)]

    def _unit(self, j: int) -> Vector:
        return tuple(int(i == j) for i in range(self.domain.rank))

    def kernel(self) -> tuple[FGAbelianGroup, IntMatrix]:
        """Kernel as a presented group with its embedding into domain generators."""
        m = self.domain.generators
        joint = hstack(self.matrix, self.codomain.relations, rows=self.codomain.generators)
        spanning = [v[:m] for v in kernel_basis(joint)]
        return subgroup_presentation(spanning, self.domain)

    def cokernel(self) -> FGAbelianGroup:
        return FGAbelianGroup(
            self.codomain.generators,
            hstack(self.matrix, self.codomain.relations, rows=self.codomain.generators),
        )

    def image_rank(self) -> int:
        return self.codomain.free_rank - self.cokernel().free_rank

    def is_injective(self) -> bool:
        return self.kernel()[0].is_trivial()

    def is_surjective(self) -> bool:
        return self.cokernel().is_trivial()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def preimage(self, y: Sequence[int]) -> Vector | None:
        """Some x with self(x) = y in the codomain, or None."""
        joint = hstack(self.matrix, self.codomain.relations, rows=self.codomain.generators)
        found = solve(joint, y)
        return None if found is None else found[: self.domain.generators]

    def inverse(self) -> "GroupHom":
        check(self.is_isomorphism(), "inverse of a non-isomorphism")
        columns = []
        for j in range(self.codomain.generators):
            x = self.preimage(self.codomain.basis_vector(j))
            check(x is not None, "isomorphism without preimage")
            columns.append(x)
        return GroupHom(self.codomain, self.domain, IntMatrix.from_columns(columns, self.domain.generators))


def subgroup_presentation(
    spanning: Sequence[Sequence[int]],
    ambient: FGAbelianGroup,
) -> tuple[FGAbelianGroup, IntMatrix]:
    """Present the subgroup spanned by ``spanning`` modulo the ambient relations.

    Every ambient relation must lie in the span. Returns the group and the
    matrix embedding its generators into the ambient generators.
    """
    m = ambient.generators
    basis = hermite_basis(spanning, m)
    embed = IntMatrix.from_columns(basis, m)
    joint = hstack(embed, ambient.relations, rows=m)
    relations = [v[: len(basis)] for v in kernel_basis(joint)]
    group = FGAbelianGroup(len(basis), IntMatrix.from_columns(relations, len(basis)))
    return group, embed


def homology(incoming: GroupHom, outgoing: GroupHom) -> tuple[FGAbelianGroup, IntMatrix]:
    """ker(outgoing) / im(incoming), with the embedding of the kernel generators."""
    check(outgoing.compose(incoming).is_zero(), "composite of consecutive maps is not zero")
    middle = outgoing.domain
    kernel, embed = outgoing.kernel()
    joint = hstack(embed, middle.relations, rows=middle.generators)
    extra = []
    for column in incoming.matrix.columns():
        z = solve(joint, column)
        check(z is not None, "image does not lie in the kernel")
        extra.append(z[: kernel.generators])
    relations = hstack(
        kernel.relations,
        IntMatrix.from_columns(extra, kernel.generators),
        rows=kernel.generators,
    )
    return FGAbelianGroup(kernel.generators, relations), embed


def express_in(embed: IntMatrix, ambient: FGAbelianGroup, x: Sequence[int]) -> Vector | None:
    """Coefficients z with embed * z = x modulo the ambient relations."""
    joint = hstack(embed, ambient.relations, rows=ambient.generators)
    found = solve(joint, x)
    return None if found is None else found[: embed.cols]
