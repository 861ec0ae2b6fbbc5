"""Connected-sum words of four-manifolds and branched-cover arithmetic.

A :class:`FourManifoldWord` is a formal connected sum over the generators
CP2, CP2bar, S2xS2, S1xS3 plus opaque named blocks.  The sphere summand
is the identity and is never stored.  Betti numbers are read off the
counts; named blocks are opaque and block the accounting.

The invariant formulas tie a double plane to its quotients.  With X the
double cover of the plane branched along a degree-2k curve and Y the
quotient of X by the conjugation whose Arnold surface is the tracked one:

    chi(X)   = 2 chi(P) - chi(A)            sigma(X) = 2 sigma(P) - 2 k^2
    b2+(Y)   = (b2+(X) - 1) / 2             b2-(Y) = (b2-(X) + chi(XR) - 1) / 2
    sigma(X) = 2 sigma(Y) - XR.XR           chi(X) = 2 chi(Y) - chi(XR)

where XR, the real part sitting inside Y, covers the non-tracked domain
and XR.XR = -chi(XR).  The sigma convention (twice the self-intersection
of the half-class, 2 k^2) is pinned by the degree-6 values
chi(X) = 24 and sigma(X) = -16, the K3 lattice (3, 19).
"""

from __future__ import annotations


from dataclasses import dataclass, field

from .domains import (
    Orientability,
    Side,
    SurfaceDescriptor,
    TrackedScheme,
    curve_euler,
    euler_W,
)


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class FourManifoldWord:
    cp2: int = 0
    cp2bar: int = 0
    s2xs2: int = 0
    s1xs3: int = 0
    named: tuple[str, ...] = ()
    # advisory flags, not part of the word's identity
    simply_connected: bool | None = field(default=None, compare=False)
    spin: bool | None = field(default=None, compare=False)

    def __post_init__(self):
        if min(self.cp2, self.cp2bar, self.s2xs2, self.s1xs3) < 0:
            raise WordError("summand counts must be >= 0")

    @property
    def is_sphere(self) -> bool:
        return not (self.cp2 or self.cp2bar or self.s2xs2 or self.s1xs3 or self.named)

    def _require_plain(self, what: str) -> None:
        if self.named:
            raise WordError(f"{what} is not tracked through named blocks")

    @property
    def b2plus(self) -> int:
        self._require_plain("b2+")
        return self.cp2 + self.s2xs2

    @property
    def b2minus(self) -> int:
        self._require_plain("b2-")
        return self.cp2bar + self.s2xs2

    @property
    def b1(self) -> int:
        self._require_plain("b1")
        return self.s1xs3

    @property
    def sigma(self) -> int:
        self._require_plain("sigma")
        return self.cp2 - self.cp2bar

    @property
    def chi(self) -> int:
        self._require_plain("chi")
        return 2 + self.cp2 + self.cp2bar + 2 * self.s2xs2 - 2 * self.s1xs3

    def __add__(self, other: "FourManifoldWord") -> "FourManifoldWord":
        def both(a, b):
            if a is None or b is None:
                return None
            return a and b

        return FourManifoldWord(
            self.cp2 + other.cp2,
            self.cp2bar + other.cp2bar,
            self.s2xs2 + other.s2xs2,
            self.s1xs3 + other.s1xs3,
            self.named + other.named,
            both(self.simply_connected, other.simply_connected),
            both(self.spin, other.spin),
        )

    def doubled(self) -> "FourManifoldWord":
        return self + self

    def __str__(self) -> str:
        def part(name: str, n: int) -> list[str]:
            if n == 0:
                return []
            return [name if n == 1 else f"{name}^{n}"]

        parts = (
            part("CP2", self.cp2)
            + part("CP2bar", self.cp2bar)
            + part("(S2xS2)", self.s2xs2)
            + part("(S1xS3)", self.s1xs3)
            + [f"Named[{n}]" for n in self.named]
        )
        return " # ".join(parts) if parts else "S4"


S4 = FourManifoldWord(simply_connected=True, spin=True)
CP2 = FourManifoldWord(cp2=1, simply_connected=True, spin=False)
CP2BAR = FourManifoldWord(cp2bar=1, simply_connected=True, spin=False)
S2XS2 = FourManifoldWord(s2xs2=1, simply_connected=True, spin=True)
S1XS3 = FourManifoldWord(s1xs3=1, simply_connected=False)


def word(cp2=0, cp2bar=0, s2xs2=0, s1xs3=0, named=()) -> FourManifoldWord:
    sc = None if named else s1xs3 == 0
    return FourManifoldWord(cp2, cp2bar, s2xs2, s1xs3, tuple(named), sc)


def parse_word(text: str) -> FourManifoldWord:
    """Parse the serialization format; unknown tokens become named blocks."""
    text = text.strip()
    if text in ("S4", ""):
        return S4
    counts = {"CP2": 0, "CP2bar": 0, "S2xS2": 0, "S1xS3": 0}
    named: list[str] = []
    for raw in text.split("#"):
        tok = raw.strip()
        count = 1
        head, caret, tail = tok.rpartition("^")
        if caret and tail.isdigit():
            tok, count = head.strip(), int(tail)
        if tok.startswith("(") and tok.endswith(")") and tok[1:-1] in counts:
            tok = tok[1:-1]
        if tok.startswith("Named[") and tok.endswith("]"):
            tok = tok[6:-1]
        if not tok:
            raise WordError(f"bad word token {raw!r}")
        if tok in counts:
            counts[tok] += count
        elif tok == "S4":
            continue
        else:
            named.extend([tok] * count)
    return word(counts["CP2"], counts["CP2bar"], counts["S2xS2"], counts["S1xS3"], named)


# ------------------------------------------------------- double planes


@dataclass(frozen=True)
class DoublePlaneInvariants:
    chi_X: int
    sigma_X: int
    b2plus_X: int
    b2minus_X: int
    chi_XR: int
    b2plus_Y: int
    b2minus_Y: int
    sigma_Y: int
    chi_Y: int

    @property
    def pg(self) -> int:
        """Geometric genus of the cover equals b2+ of the quotient."""
        return self.b2plus_Y

    def record(self) -> dict:
        return {
            "chi_X": self.chi_X,
            "sigma_X": self.sigma_X,
            "b2plus_X": self.b2plus_X,
            "b2minus_X": self.b2minus_X,
            "chi_XR": self.chi_XR,
            "b2plus_Y": self.b2plus_Y,
            "b2minus_Y": self.b2minus_Y,
            "sigma_Y": self.sigma_Y,
            "chi_Y": self.chi_Y,
        }


def _half(n: int, what: str) -> int:
    if n % 2:
        raise WordError(f"{what} must be even, got {n}")
    return n // 2


def double_plane_invariants(t: TrackedScheme) -> DoublePlaneInvariants:
    """Numerical invariants of the double plane over a tracked scheme.

    Y is the quotient branched along the tracked Arnold surface; the real
    part inside it covers the non-tracked domain.  The two covering
    identities are recomputed as a cross-check and inconsistencies raise.
    """
    k = t.half_degree
    chi_a = curve_euler(t.degree)
    chi_x = 2 * 3 - chi_a
    sigma_x = 2 * 1 - 2 * k * k
    b2 = chi_x - 2
    b2plus_x = _half(b2 + sigma_x, "b2(X) + sigma(X)")
    b2minus_x = _half(b2 - sigma_x, "b2(X) - sigma(X)")
    chi_xr = 2 * euler_W(t, Side.NONTRACKED)
    b2plus_y = _half(b2plus_x - 1, "b2+(X) - 1")
    b2minus_y = _half(b2minus_x + chi_xr - 1, "b2-(X) + chi(XR) - 1")
    sigma_y = _half(sigma_x - chi_xr, "sigma(X) + XR.XR")
    chi_y = _half(chi_x + chi_xr, "chi(X) + chi(XR)")
    inv = DoublePlaneInvariants(
        chi_x, sigma_x, b2plus_x, b2minus_x, chi_xr,
        b2plus_y, b2minus_y, sigma_y, chi_y,
    )
    if inv.sigma_X != 2 * inv.sigma_Y - (-inv.chi_XR):
        raise WordError("signature covering identity failed")
    if inv.chi_X != 2 * inv.chi_Y - inv.chi_XR:
        raise WordError("Euler covering identity failed")
    if inv.b2plus_Y - inv.b2minus_Y != inv.sigma_Y:
        raise WordError("Betti/signature bookkeeping failed")
    return inv


@dataclass(frozen=True)
class AmbientInvariants:
    """Betti data of a simply-connected-like ambient surface (b1 = 0)."""

    b2plus: int
    b2minus: int
    sigma: int
    chi: int

    def __post_init__(self):
        if self.sigma != self.b2plus - self.b2minus:
            raise WordError("sigma must equal b2+ - b2-")
        if self.chi != 2 + self.b2plus + self.b2minus:
            raise WordError("chi must equal 2 + b2 (b1 = 0 ambient data)")


@dataclass(frozen=True)
class BranchClassData:
    """The half-class of the branch curve: self-intersection and pairing
    with the canonical class."""

    self_int: int
    k_dot_b: int


def general_cover_invariants(
    ambient: AmbientInvariants, branch: BranchClassData, chi_xr: int
) -> tuple[int, int]:
    """(b2+, b2-) of a double-cover quotient over a general ambient.

    Computed twice, through the adjunction form chi(B) = -(B+K).B and
    through the intersection form directly; a mismatch or an odd half
    raises.
    """
    d, kb = branch.self_int, branch.k_dot_b
    chi_b = -(d + kb)
    b2plus_via_chi = ambient.b2plus - _half(chi_b, "chi(B)")
    b2plus_via_int = ambient.b2plus + _half(d + kb, "(B+K).B")
    if b2plus_via_chi != b2plus_via_int:
        raise WordError("the two b2+ expressions disagree")
    b2minus_via_chi = ambient.b2minus + _half(-chi_b + chi_xr, "-chi(B) + chi(XR)") + d
    b2minus_via_int = ambient.b2minus + _half(3 * d + kb, "(3B+K).B") + _half(chi_xr, "chi(XR)")
    if b2minus_via_chi != b2minus_via_int:
        raise WordError("the two b2- expressions disagree")
    return b2plus_via_int, b2minus_via_int


# -------------------------------------------------- standard-form algebra


@dataclass(frozen=True)
class StandardSurfaceForm:
    """A standard surface in the four-sphere: a connected sum of standard
    tori and projective planes with normal numbers -2 or +2."""

    orientable: bool
    tori: int = 0
    rp2: int = 0
    rp2bar: int = 0
    components: int = 1
    note: str = ""

    def __post_init__(self):
        if self.orientable and (self.rp2 or self.rp2bar):
            raise WordError("an orientable standard surface has no crosscaps")
        if not self.orientable and self.rp2 + self.rp2bar == 0:
            raise WordError("a non-orientable standard surface needs a crosscap")

    @property
    def euler(self) -> int:
        return 2 - 2 * self.tori - self.rp2 - self.rp2bar

    def record(self) -> dict:
        return {
            "orientable": self.orientable,
            "tori": self.tori,
            "rp2": self.rp2,
            "rp2bar": self.rp2bar,
            "components": self.components,
            "note": self.note,
        }


class FormError(ValueError):
    """Arithmetically impossible standard form: signals a modeling bug."""


def predict_standard_form(
    chi_a: int,
    b2plus_y: int,
    b2minus_y: int,
    orientability: Orientability = Orientability.UNDETERMINED,
) -> tuple[StandardSurfaceForm, ...]:
    """Standard forms of a connected surface consistent with the Betti
    numbers of its double branched cover.

    Orientable: genus g tori with b2+ = b2- = g.  Non-orientable: b2+
    planes of normal number +2 and b2- of normal number -2, with total
    crosscaps 2 - chi.  With orientability undetermined, all consistent
    candidates are returned, flagged when there are two.
    """
    candidates = []
    if chi_a % 2 == 0 and chi_a <= 2:
        g = (2 - chi_a) // 2
        if b2plus_y == b2minus_y == g:
            candidates.append(StandardSurfaceForm(True, tori=g))
    p, q = b2plus_y, b2minus_y
    if p + q == 2 - chi_a and p + q >= 1 and p >= 0 and q >= 0:
        candidates.append(StandardSurfaceForm(False, rp2=p, rp2bar=q))
    if orientability is Orientability.ORIENTABLE:
        candidates = [c for c in candidates if c.orientable]
    elif orientability is Orientability.NON_ORIENTABLE:
        candidates = [c for c in candidates if not c.orientable]
    if not candidates:
        raise FormError(
            f"no standard form matches chi={chi_a}, b=({b2plus_y},{b2minus_y}), "
            f"{orientability.value}"
        )
    if len(candidates) == 2:
        candidates = [
            StandardSurfaceForm(
                c.orientable, c.tori, c.rp2, c.rp2bar, c.components,
                note="parity undetermined",
            )
            for c in candidates
        ]
    return tuple(candidates)


def branch_cover_word(
    form: StandardSurfaceForm, ambient: FourManifoldWord
) -> FourManifoldWord:
    """Double cover of an ambient word branched along a standard surface.

    Each standard torus lifts to S2xS2, each projective plane of normal
    number +2 to CP2 and of normal number -2 to CP2bar; ambient summands
    away from the branch set double; extra components add 1-handles.
    """
    if form.components < 1:
        raise WordError("branch surface needs at least one component")
    lifted = word(
        cp2=form.rp2,
        cp2bar=form.rp2bar,
        s2xs2=form.tori,
        s1xs3=form.components - 1,
    )
    return ambient.doubled() + lifted


def decomposition(
    b2plus: int, b2minus: int, spin: bool | None
) -> tuple[FourManifoldWord, ...]:
    """Connected-sum words for a simply connected manifold with the given
    Betti numbers; both candidates when the spin status is unknown."""
    if b2plus < 0 or b2minus < 0:
        raise WordError("Betti numbers must be >= 0")
    nonspin = word(cp2=b2plus, cp2bar=b2minus)
    if b2plus == 0 and b2minus == 0:
        return (S4,)
    if spin is True:
        if b2plus != b2minus:
            raise WordError("a spin decomposable manifold needs b2+ = b2-")
        return (word(s2xs2=b2plus),)
    if spin is False:
        return (nonspin,)
    if b2plus == b2minus:
        return (nonspin, word(s2xs2=b2plus))
    return (nonspin,)


def k3_classify(
    xr: tuple[SurfaceDescriptor, ...] | list[SurfaceDescriptor],
    class_vanishes: bool,
) -> FourManifoldWord:
    """Quotient of a real K3 surface from its real part.

    The real part must be S_g together with k spheres (g + k <= 11) or a
    pair of tori.  The quotient is CP2 # k CP2bar with
    k = 9 + chi(XR) / 2, except for the two spin cases: a genus-10
    component with a sphere, or a genus-9 real part whose mod-2 class
    vanishes, where it is S2xS2.
    """
    parts = tuple(xr)
    if not parts:
        raise WordError("empty real part: the quotient does not decompose")
    if any(p.orientability is not Orientability.ORIENTABLE for p in parts):
        raise WordError("a K3 real part is orientable")
    genera = sorted((p.genus for p in parts), reverse=True)
    spheres = sum(1 for g in genera if g == 0)
    big = [g for g in genera if g > 0]
    if len(big) > 1 and genera != [1, 1]:
        raise WordError(f"not a K3 real part: genera {genera}")
    if big and genera != [1, 1] and big[0] + spheres > 11:
        raise WordError(f"not a K3 real part: genera {genera}")
    chi_xr = sum(p.euler for p in parts)
    if chi_xr % 2:
        raise WordError("real part Euler characteristic must be even")
    if genera == [10, 0]:
        return word(s2xs2=1)
    if genera == [9] and class_vanishes:
        return word(s2xs2=1)
    k = 9 + chi_xr // 2
    if k < 0:
        raise WordError(f"negative blow-up count {k}")
    if k == 0:
        return CP2
    return word(cp2=1, cp2bar=k)
