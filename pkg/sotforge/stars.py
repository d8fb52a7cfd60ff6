"""State-over-time functions (star products).

Every state-linear family is defined by its time expansion ``id⋆ρ`` on ``A ⊗ A'``;
the star with a channel then follows as ``ℰ⋆ρ = (id_A ⊗ ℰ)(id⋆ρ)`` and the action
on a subsystem of a larger state is the linear extension of ``M ↦ ℰ⋆M``.

Families:

=================  ===========================================================
``FPStar``         ``½{ρ⊗𝟙, F}`` (Jordan product with the channel state)
``BloomStar``      ``Θ_ρ(M) = μρM + (1−μ)Mρ``
``CFamStar``       ``Θ_ρ(M) = ½{ρ,M} + ic[ρ,M]`` with real ``c``
``GFamStar``       ``Θ_ρ(M) = ρM + g([ρ,M])`` for traceless-preserving ``g``
``EtaFamily``      ``g = r·Ad_{|η⟩⟨η|}``, marginals restored through ``Ψ⁻¹``
``MeanMarginal``   the generalized time expansion built around a ``D`` operator
``LSStar``         ``(√ρ⊗𝟙)𝒟[ℰ](√ρ⊗𝟙)``, not state-linear
``XiPerturbed``    ``base + Tr[ℰ(ρ)]·Ξ``
=================  ===========================================================
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence
from typing import Any, ClassVar

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike

from sotforge.channels import Channel, apply, channel_from_superop, jamiolkowski_state
from sotforge.constants import HERMITIAN_TOL, MARGINAL_TOL, MAX_CONDITION, STATE_TOL, TP_TOL
from sotforge.errors import (
    ConditioningError,
    DimensionError,
    HermiticityError,
    StarConfigurationError,
    UnsupportedStarError,
)
from sotforge.tensor import (
    ComplexArray,
    DimsSpec,
    Operator,
    apply_local,
    as_operator,
    elementary,
    left_multiplication,
    max_abs,
    partial_trace,
    psd_sqrt,
    right_multiplication,
    swap_operator,
    vec,
)

logger = logging.getLogger(__name__)


def _fmt(x: float) -> str:
    return repr(float(x))


def traceless_projection(d: int) -> ComplexArray:
    """Superoperator of Q(X) = X − (Tr X / d)·𝟙."""
    v = vec(np.eye(d))
    return np.eye(d * d, dtype=np.complex128) - np.outer(v, v) / d


def inverse_superop(superop: ArrayLike, what: str = "superoperator") -> ComplexArray:
    """Numerical inverse, refused when the condition number exceeds ``MAX_CONDITION``."""
    s = np.asarray(superop, dtype=np.complex128)
    cond = float(np.linalg.cond(s))
    if not math.isfinite(cond) or cond > MAX_CONDITION:
        raise ConditioningError(f"Cannot invert {what}: condition number {cond:.3e} exceeds {MAX_CONDITION:.0e}")
    return scipy.linalg.inv(s)


class StarProduct(ABC):
    """A state over time function ``(ℰ, ρ) ↦ ℰ⋆ρ``.

    Subclasses provide :meth:`time_expansion`; :meth:`star` defaults to
    ``(id ⊗ ℰ)(id⋆ρ)``.
    """

    kind: ClassVar[str]
    state_linear: ClassVar[bool] = True

    @abstractmethod
    def time_expansion(self, rho: Operator) -> Operator:
        """id⋆ρ on ``A ⊗ A'``."""

    def star(self, e: Channel, rho: Operator) -> Operator:
        self._check_input(e, rho)
        return apply_local(e.superop, self.time_expansion(rho), axis=1, out_dim=e.d_out).with_dims(
            DimsSpec((e.d_in, e.d_out))
        )

    def params(self) -> dict[str, Any]:
        return {}

    def describe(self) -> dict[str, Any]:
        return {"kind": self.kind, "params": self.params(), "state_linear": self.state_linear}

    @property
    def label(self) -> str:
        return self.kind

    def supports(self, d_in: int, d_out: int) -> bool:
        return True

    def _check_input(self, e: Channel, rho: Operator) -> None:
        if rho.side != e.d_in:
            raise DimensionError(f"State of dimension {rho.side} does not match channel input {e.d_in}")
        if not self.supports(e.d_in, e.d_out):
            raise UnsupportedStarError(f"Star '{self.label}' is not defined for dimensions {e.d_in} -> {e.d_out}")

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.label})"


class RenderingStar(StarProduct):
    """State-linear star given by a state-rendering function Θ_ρ.

    ``id⋆ρ = (Θ_ρ ⊗ Φ)(F)`` where Φ is the identity unless :meth:`psi_inverse`
    returns a correction restoring the input marginal.
    """

    @abstractmethod
    def rendering(self, rho: Operator) -> ComplexArray:
        """Θ_ρ as a ``d² × d²`` superoperator."""

    def psi_inverse(self, d: int) -> ComplexArray | None:
        return None

    def time_expansion(self, rho: Operator) -> Operator:
        d = rho.side
        if not self.supports(d, d):
            raise UnsupportedStarError(f"Star '{self.label}' is not defined for dimension {d}")
        out = apply_local(self.rendering(rho), swap_operator(d), axis=0)
        correction = self.psi_inverse(d)
        if correction is not None:
            out = apply_local(correction, out, axis=1)
        return out


class FPStar(RenderingStar):
    kind = "fp"

    def rendering(self, rho: Operator) -> ComplexArray:
        return 0.5 * (left_multiplication(rho.data) + right_multiplication(rho.data))

    def time_expansion(self, rho: Operator) -> Operator:
        d = rho.side
        left = np.kron(rho.data, np.eye(d))
        swap = swap_operator(d).data
        return Operator(0.5 * (left @ swap + swap @ left), DimsSpec((d, d)))


class BloomStar(RenderingStar):
    """μ-family: μ=1 right bloom (ρM), μ=0 left bloom (Mρ), μ=½ symmetric bloom."""

    kind = "bloom"

    def __init__(self, mu: float):
        if isinstance(mu, complex) or not math.isfinite(float(mu)):
            raise StarConfigurationError(f"Bloom parameter mu must be a finite real number, got {mu!r}")
        self.mu = float(mu)

    def rendering(self, rho: Operator) -> ComplexArray:
        return self.mu * left_multiplication(rho.data) + (1.0 - self.mu) * right_multiplication(rho.data)

    def params(self) -> dict[str, Any]:
        return {"mu": self.mu}

    @property
    def label(self) -> str:
        return f"bloom:{_fmt(self.mu)}"


class CFamStar(RenderingStar):
    kind = "cfam"

    def __init__(self, c: float):
        if isinstance(c, complex):
            if c.imag != 0:
                raise StarConfigurationError(f"CFam parameter c must be real, got {c!r}")
            c = c.real
        if not math.isfinite(float(c)):
            raise StarConfigurationError(f"CFam parameter c must be finite, got {c!r}")
        self.c = float(c)

    def rendering(self, rho: Operator) -> ComplexArray:
        left, right = left_multiplication(rho.data), right_multiplication(rho.data)
        return 0.5 * (left + right) + 1j * self.c * (left - right)

    def params(self) -> dict[str, Any]:
        return {"c": self.c}

    @property
    def label(self) -> str:
        return f"cfam:{_fmt(self.c)}"


class GFamStar(RenderingStar):
    """Θ_ρ(M) = ρM + g([ρ,M]) with g normalized to g∘Q (so g(𝟙) = 0)."""

    kind = "gfam"

    def __init__(self, g: ArrayLike, *, require_traceless: bool = True):
        g = np.asarray(g.superop if isinstance(g, Channel) else g, dtype=np.complex128)
        d2 = g.shape[0]
        d = math.isqrt(d2)
        if g.ndim != 2 or g.shape != (d2, d2) or d * d != d2:
            raise StarConfigurationError(f"g must be a d²×d² superoperator, got shape {g.shape}")
        normalized = g @ traceless_projection(d)
        if require_traceless:
            leak = max_abs(vec(np.eye(d)) @ normalized)
            if leak > TP_TOL:
                raise StarConfigurationError(f"g does not map traceless operators to traceless ones (leak {leak:.3e})")
        normalized.setflags(write=False)
        self.g = normalized
        self.dim = d

    def supports(self, d_in: int, d_out: int) -> bool:
        return d_in == self.dim

    def rendering(self, rho: Operator) -> ComplexArray:
        left, right = left_multiplication(rho.data), right_multiplication(rho.data)
        return left + self.g @ (left - right)

    def params(self) -> dict[str, Any]:
        return {"dim": self.dim}

    @property
    def label(self) -> str:
        return f"gfam:d{self.dim}"


class EtaFamily(RenderingStar):
    """g = r·Ad_{|η⟩⟨η|}; satisfies (E), (P) and (QC) but neither (CC) nor (J).

    ``eta`` is either a basis index (any dimension) or a fixed vector.
    Since g does not preserve tracelessness the time expansion is
    ``(Θ_ρ ⊗ Ψ⁻¹)(F)`` with ``Ψ(X) = X − [X, Y]``, ``Y = (g†(𝟙))†``.
    """

    kind = "eta"

    def __init__(self, r: float, eta: int | ArrayLike = 0):
        if isinstance(r, complex) or not 0.0 < float(r) < 1.0:
            raise StarConfigurationError(f"Eta-family parameter r must lie in (0, 1), got {r!r}")
        self.r = float(r)
        if isinstance(eta, (int, np.integer)):
            if eta < 0:
                raise StarConfigurationError(f"Eta basis index must be >= 0, got {eta}")
            self.eta_index: int | None = int(eta)
            self.eta_vector: ComplexArray | None = None
        else:
            v = np.asarray(eta, dtype=np.complex128).reshape(-1)
            norm = float(np.linalg.norm(v))
            if norm == 0:
                raise StarConfigurationError("Eta vector must be nonzero")
            self.eta_index = None
            self.eta_vector = v / norm

    def supports(self, d_in: int, d_out: int) -> bool:
        if self.eta_vector is not None:
            return d_in == self.eta_vector.size
        return d_in > (self.eta_index or 0)

    def _eta(self, d: int) -> ComplexArray:
        if self.eta_vector is not None:
            return self.eta_vector
        return np.eye(d, dtype=np.complex128)[:, self.eta_index]

    def g_superop(self, d: int) -> ComplexArray:
        """The normalized g∘Q as a superoperator."""
        p = np.outer(self._eta(d), self._eta(d).conj())
        return self.r * np.kron(p, p.conj()) @ traceless_projection(d)

    def rendering(self, rho: Operator) -> ComplexArray:
        left, right = left_multiplication(rho.data), right_multiplication(rho.data)
        return left + self.g_superop(rho.side) @ (left - right)

    def psi_superop(self, d: int) -> ComplexArray:
        g = self.g_superop(d)
        y = (g.conj().T @ vec(np.eye(d))).reshape(d, d).conj().T
        return np.eye(d * d) - right_multiplication(y) + left_multiplication(y)

    def psi_inverse(self, d: int) -> ComplexArray:
        return inverse_superop(self.psi_superop(d), "Ψ for the eta family")

    def params(self) -> dict[str, Any]:
        eta: Any = self.eta_index if self.eta_vector is None else [[z.real, z.imag] for z in self.eta_vector]
        return {"r": self.r, "eta": eta}

    @property
    def label(self) -> str:
        if self.eta_vector is None:
            return f"eta:{_fmt(self.r)}:{self.eta_index}"
        return f"eta:{_fmt(self.r)}:vector"


class CustomRenderingStar(RenderingStar):
    kind = "rendering"

    def __init__(
        self,
        name: str,
        rendering: Callable[[Operator], ComplexArray],
        psi_inverse: Callable[[int], ComplexArray | None] | None = None,
    ):
        self.name = name
        self._rendering = rendering
        self._psi_inverse = psi_inverse

    def rendering(self, rho: Operator) -> ComplexArray:
        return np.asarray(self._rendering(rho), dtype=np.complex128)

    def psi_inverse(self, d: int) -> ComplexArray | None:
        return None if self._psi_inverse is None else self._psi_inverse(d)

    def params(self) -> dict[str, Any]:
        return {"name": self.name}

    @property
    def label(self) -> str:
        return f"rendering:{self.name}"


class MeanMarginalStar(StarProduct):
    """id⋆ρ = Tr[ρ](D − 2π⊗π) + π⊗ρ + ρ⊗π + Ξ(ρ), default D = F/d.

    Satisfies (T), (H), (E), (P) and the full-system (Ĵ) yet differs from FP
    for d ≥ 3; for qubits with Ξ = 0 it coincides with FP.
    """

    kind = "meanmarg"

    def __init__(self, xi: ArrayLike | None = None, d_operator: Operator | ArrayLike | None = None):
        self.xi: ComplexArray | None = None
        self.d_operator: Operator | None = None
        self.dim: int | None = None
        if xi is not None:
            xi = np.array(xi, dtype=np.complex128)
            d = math.isqrt(xi.shape[1]) if xi.ndim == 2 else 0
            if xi.ndim != 2 or d * d != xi.shape[1] or xi.shape[0] != d**4:
                raise StarConfigurationError(f"Ξ must be a d⁴×d² map, got shape {xi.shape}")
            self._validate_xi(xi, d)
            xi.setflags(write=False)
            self.xi, self.dim = xi, d
        if d_operator is not None:
            op = as_operator(d_operator)
            d = math.isqrt(op.side)
            if d * d != op.side or (self.dim is not None and d != self.dim):
                raise StarConfigurationError(f"D operator of side {op.side} does not fit d ⊗ d")
            op = op.with_dims((d, d))
            pi = np.eye(d) / d
            for axis in (0, 1):
                dev = max_abs(partial_trace(op, [axis]).data - pi)
                if dev > MARGINAL_TOL:
                    raise StarConfigurationError(f"D must have both partial traces π; deviation {dev:.3e}")
            self.d_operator, self.dim = op, d

    @staticmethod
    def _validate_xi(xi: ComplexArray, d: int) -> None:
        swap = swap_operator(d).data
        total = np.zeros((d * d, d * d), dtype=np.complex128)
        for i in range(d):
            for j in range(d):
                out = xi[:, i * d + j].reshape(d * d, d * d)
                if i == j:
                    total += out
                op = Operator(out, DimsSpec((d, d)))
                worst = max(
                    max_abs(partial_trace(op, [0]).data),
                    max_abs(partial_trace(op, [1]).data),
                    max_abs(swap @ out @ swap - out),
                )
                if worst > MARGINAL_TOL:
                    raise StarConfigurationError(
                        f"Ξ violates the marginal/swap conditions on |{i}⟩⟨{j}| (deviation {worst:.3e})"
                    )
        if max_abs(total) > MARGINAL_TOL:
            raise StarConfigurationError(f"Ξ(𝟙) must vanish, got max entry {max_abs(total):.3e}")

    def supports(self, d_in: int, d_out: int) -> bool:
        return self.dim is None or d_in == self.dim

    def time_expansion(self, rho: Operator) -> Operator:
        d = rho.side
        if not self.supports(d, d):
            raise UnsupportedStarError(f"Star '{self.label}' is fixed to dimension {self.dim}, got {d}")
        pi = np.eye(d) / d
        tr = np.trace(rho.data)
        d_op = self.d_operator.data if self.d_operator is not None else swap_operator(d).data / d
        out = tr * (d_op - 2 * np.kron(pi, pi)) + np.kron(pi, rho.data) + np.kron(rho.data, pi)
        if self.xi is not None:
            out = out + (self.xi @ vec(rho)).reshape(d * d, d * d)
        return Operator(out, DimsSpec((d, d)))

    def params(self) -> dict[str, Any]:
        return {"xi": self.xi is not None, "custom_d": self.d_operator is not None, "dim": self.dim}

    @property
    def label(self) -> str:
        return "meanmarg" if self.xi is None and self.d_operator is None else "meanmarg:custom"


class LSStar(StarProduct):
    """Leifer–Spekkens star ``(√ρ⊗𝟙)𝒟[ℰ](√ρ⊗𝟙)``. Defined only on states."""

    kind = "ls"
    state_linear = False

    @staticmethod
    def _root(rho: Operator) -> ComplexArray:
        if max_abs(rho.data - rho.data.conj().T) > HERMITIAN_TOL:
            raise HermiticityError("LS star needs a Hermitian positive semidefinite state")
        low = float(np.linalg.eigvalsh(0.5 * (rho.data + rho.data.conj().T)).min())
        if low < -STATE_TOL:
            raise HermiticityError(f"LS star needs a positive semidefinite state; smallest eigenvalue {low:.3e}")
        return psd_sqrt(rho).data

    def time_expansion(self, rho: Operator) -> Operator:
        d = rho.side
        root = np.kron(self._root(rho), np.eye(d))
        return Operator(root @ swap_operator(d).data @ root, DimsSpec((d, d)))

    def star(self, e: Channel, rho: Operator) -> Operator:
        self._check_input(e, rho)
        root = np.kron(self._root(rho), np.eye(e.d_out))
        return Operator(root @ jamiolkowski_state(e).data @ root, DimsSpec((e.d_in, e.d_out)))


class XiPerturbedStar(StarProduct):
    """``base⋆ + Tr[ℰ(ρ)]·Ξ`` for a fixed Ξ with vanishing partial traces.

    Bilinear and marginal-preserving, but not of the form ``(id⊗ℰ)(id⋆ρ)``.
    """

    kind = "xiperturbed"

    def __init__(self, base: StarProduct, xi: Operator, name: str = "custom"):
        if len(xi.dims) != 2:
            raise StarConfigurationError(f"Ξ must be bipartite, got dims {xi.dims.subsystem_dims}")
        for axis in (0, 1):
            dev = max_abs(partial_trace(xi, [axis]).data)
            if dev > MARGINAL_TOL:
                raise StarConfigurationError(f"Ξ must have vanishing partial traces; Tr_{axis} deviation {dev:.3e}")
        self.base = base
        self.xi = xi
        self.xi_name = name

    @property
    def state_linear(self) -> bool:  # type: ignore[override]
        return self.base.state_linear

    def supports(self, d_in: int, d_out: int) -> bool:
        return self.xi.dims.subsystem_dims == (d_in, d_out) and self.base.supports(d_in, d_out)

    def time_expansion(self, rho: Operator) -> Operator:
        d = rho.side
        if not self.supports(d, d):
            raise UnsupportedStarError(f"Star '{self.label}' only supports dims {self.xi.dims.subsystem_dims}")
        return self.base.time_expansion(rho) + self.xi * np.trace(rho.data)

    def star(self, e: Channel, rho: Operator) -> Operator:
        self._check_input(e, rho)
        return self.base.star(e, rho) + self.xi * apply(e, rho).trace()

    def params(self) -> dict[str, Any]:
        return {"base": self.base.describe(), "xi": self.xi_name, "xi_dims": list(self.xi.dims.subsystem_dims)}

    @property
    def label(self) -> str:
        return f"xiperturbed:{self.base.label}:{self.xi_name}"


# ===== Constructors =====


def fp() -> FPStar:
    return FPStar()


def ls() -> LSStar:
    return LSStar()


def bloom(mu: float) -> BloomStar:
    return BloomStar(mu)


def cfam(c: float) -> CFamStar:
    return CFamStar(c)


def mean_marginal(xi: ArrayLike | None = None, d_operator: Operator | ArrayLike | None = None) -> MeanMarginalStar:
    return MeanMarginalStar(xi, d_operator)


def make_gfam(g: ArrayLike | Channel) -> GFamStar:
    """Star with Θ_ρ(M) = ρM + g([ρ,M]).

    Raises:
        StarConfigurationError: If g does not map traceless operators to traceless operators.
    """
    star = GFamStar(g)
    logger.debug("built g-family star on dimension %d", star.dim)
    return star


def make_eta_family(r: float, eta: int | ArrayLike = 0) -> EtaFamily:
    return EtaFamily(r, eta)


def make_xi_perturbed(base: StarProduct, xi: Operator, name: str = "custom") -> XiPerturbedStar:
    """Raises StarConfigurationError if Tr_A Ξ or Tr_B Ξ is nonzero."""
    return XiPerturbedStar(base, xi, name)


def star_product_from_theta(
    name: str,
    rendering: Callable[[Operator], ComplexArray],
    psi_inverse: Callable[[int], ComplexArray | None] | None = None,
) -> CustomRenderingStar:
    """Any state-linear star from a state-rendering function (and optional Ψ⁻¹)."""
    return CustomRenderingStar(name, rendering, psi_inverse)


def xx_witness() -> Operator:
    """X⊗X on two qubits: traceless in both partial traces."""
    x = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    return Operator(np.kron(x, x), DimsSpec((2, 2)))


def bloom_g(mu: float, d: int) -> ComplexArray:
    """g = (μ−1)·id, reproducing the μ-family through :func:`make_gfam`."""
    return (mu - 1.0) * np.eye(d * d, dtype=np.complex128)


def cfam_g(c: float, d: int) -> ComplexArray:
    """g = (ic−½)·id, reproducing the c-family through :func:`make_gfam`."""
    return (1j * c - 0.5) * np.eye(d * d, dtype=np.complex128)


# ===== Engine =====


def time_expansion(s: StarProduct, rho: Operator, d: int | None = None) -> Operator:
    if d is not None and rho.side != d:
        raise DimensionError(f"State of side {rho.side} does not match dimension {d}")
    return s.time_expansion(rho)


def star(s: StarProduct, e: Channel, rho: Operator) -> Operator:
    """ℰ⋆ρ on ``A ⊗ B``."""
    return s.star(e, rho)


def _require_linear(s: StarProduct, what: str) -> None:
    if not s.state_linear:
        raise UnsupportedStarError(f"{what} needs a state-linear star; '{s.label}' is not")


def star_map(s: StarProduct, e: Channel) -> ComplexArray:
    """The linear map M ↦ ℰ⋆M as a ``(d_in d_out)² × d_in²`` matrix."""
    _require_linear(s, "The subsystem action")
    d = e.d_in
    columns = [vec(s.star(e, Operator(elementary(d, i, j)))) for i in range(d) for j in range(d)]
    return np.stack(columns, axis=1)


def star_on_subsystem(s: StarProduct, e: Channel, rho: Operator, axis: int = 0) -> Operator:
    """(ℰ⋆·) ⊗ id on subsystem ``axis`` of ``rho``; that factor is replaced by the pair ``A ⊗ B``.

    Raises:
        UnsupportedStarError: If the star is not state-linear.
    """
    _require_linear(s, "The subsystem action")
    dims = rho.dims.subsystem_dims
    n = len(dims)
    if not 0 <= axis < n:
        raise DimensionError(f"Subsystem index {axis} invalid for dims {dims}")
    if dims[axis] != e.d_in:
        raise DimensionError(f"Subsystem {axis} has dimension {dims[axis]}, channel expects {e.d_in}")
    d_a, d_b = e.d_in, e.d_out
    lin = star_map(s, e).reshape(d_a, d_b, d_a, d_b, d_a, d_a)
    tensor = rho.data.reshape(dims * 2)
    out = np.tensordot(lin, tensor, axes=([4, 5], [axis, n + axis]))
    out = np.moveaxis(out, [0, 1, 2, 3], [axis, axis + 1, n + 1 + axis, n + 2 + axis])
    new_dims = dims[:axis] + (d_a, d_b) + dims[axis + 1 :]
    side = math.prod(new_dims)
    return Operator(out.reshape(side, side), DimsSpec(new_dims))


def chain_star(s: StarProduct, es: Sequence[Channel], rho: Operator) -> Operator:
    """𝒢⋆(ℱ⋆(ℰ⋆ρ)) on ``A ⊗ B ⊗ C ⊗ …``; each step acts on the latest time slice."""
    if not es:
        raise DimensionError("chain_star needs at least one channel")
    for first, second in zip(es, es[1:]):
        if first.d_out != second.d_in:
            raise DimensionError(f"Channels do not chain: output {first.d_out} feeds input {second.d_in}")
    out = s.star(es[0], rho)
    for f in es[1:]:
        out = star_on_subsystem(s, f, out, axis=len(out.dims) - 1)
    return out


def extract_theta(s: StarProduct, rho: Operator, d: int | None = None) -> ComplexArray:
    """Θ_ρ with ``id⋆ρ = (Θ_ρ ⊗ id)(F)``, read off the time expansion."""
    _require_linear(s, "Θ extraction")
    d = rho.side if d is None else d
    t4 = time_expansion(s, rho, d).data.reshape(d, d, d, d)
    return t4.transpose(0, 2, 3, 1).reshape(d * d, d * d)


def theta_to_time_expansion(theta: ArrayLike, d: int) -> Operator:
    """(Θ ⊗ id)(F)."""
    return apply_local(np.asarray(theta, dtype=np.complex128), swap_operator(d), axis=0)


def extract_rendering(s: StarProduct, rho: Operator) -> ComplexArray:
    """Θ_ρ solving ``id⋆ρ = (Θ_ρ ⊗ id)(id⋆𝟙)``; equals :func:`extract_theta` when id⋆𝟙 = F.

    Raises:
        ConditioningError: If id⋆𝟙 is too ill-conditioned to divide out.
    """
    _require_linear(s, "Θ extraction")
    d = rho.side
    base = s.time_expansion(Operator(np.eye(d), rho.dims)).data.reshape(d, d, d, d)
    target = s.time_expansion(rho).data.reshape(d, d, d, d)
    c_mat = base.transpose(0, 2, 1, 3).reshape(d * d, d * d)
    r_mat = target.transpose(0, 2, 1, 3).reshape(d * d, d * d)
    cond = float(np.linalg.cond(c_mat))
    if not math.isfinite(cond) or cond > MAX_CONDITION:
        raise ConditioningError(f"id⋆𝟙 has condition number {cond:.3e}; state-rendering function not recoverable")
    return scipy.linalg.solve(c_mat.T, r_mat.T).T


def linear_extension(s: StarProduct, e: Channel, x: Operator | ArrayLike) -> Operator:
    """ℰ⋆X for arbitrary X via X = H₁ + iH₂ with Hermitian H₁, H₂."""
    _require_linear(s, "The linear extension")
    x = as_operator(x)
    h1 = Operator(0.5 * (x.data + x.data.conj().T), x.dims)
    h2 = Operator((x.data - x.data.conj().T) / 2j, x.dims)
    return s.star(e, h1) + s.star(e, h2) * 1j


def star_of_star_map(s: StarProduct, f: Channel, e: Channel) -> Channel:
    """The map σ ↦ ℱ⋆ℰ(σ) from A to ``B ⊗ C`` as a Channel."""
    _require_linear(s, "The star-of-star map")
    if e.d_out != f.d_in:
        raise DimensionError(f"Channels do not chain: output {e.d_out} feeds input {f.d_in}")
    d = e.d_in
    columns = [vec(s.star(f, apply(e, Operator(elementary(d, i, j))))) for i in range(d) for j in range(d)]
    return channel_from_superop(np.stack(columns, axis=1), e.in_dims, DimsSpec((f.d_in, f.d_out)))
