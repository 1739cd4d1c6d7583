"""Local norm tests at tamely ramified conductors and the unit-norm index.

For the cyclic compositum over the quadratic field, the extension is
totally and tamely ramified at each prime above the conductor q, so a unit
is a local norm there exactly when its residue image is a p^n-th power,
i.e. when image^((q^f - 1)/p^n) = 1.  The Hasse norm theorem then makes
the least power of the fundamental unit that is a norm of a field element
equal to the lcm of the local orders.

The index computed here is the field-norm index: it divides the index of
norms of units, and the two are distinguished by the ``caveat`` flag on
reports (deciding the unit-norm index exactly would need the unit group of
the sextic compositum).
"""

from __future__ import annotations

from dataclasses import dataclass

from .cyclicext import (
    CyclicExtensionDescriptor,
    cyclic_descriptor,
    properness_report,
)
from .formclass import class_group, prime_form
from .intmath import is_prime, lcm, p_part
from .quadfield import (
    FundamentalUnit,
    QuadInteger,
    QuadraticField,
    ResidueFieldElement,
    SplittingType,
    fundamental_unit,
    reduce_mod_prime,
    split_roots,
    splitting_type,
)


class WildPrimeError(ValueError):
    """Conductor equals p (wild ramification is out of reach here)."""


class RamifiedInNError(ValueError):
    """Conductor ramifies in the quadratic field."""


class NoAdmissibleConductorError(ValueError):
    pass


@dataclass(frozen=True)
class LocalNormVerdict:
    prime_label: str
    residue_degree: int
    exponent_used: int
    power_value: ResidueFieldElement
    is_norm: bool
    local_order: int


@dataclass(frozen=True)
class NormIndexReport:
    d: int
    q: int
    p: int
    n: int
    verdicts: tuple[LocalNormVerdict, ...]
    index: int
    ratio_p_part: int
    t: int  # ramified archimedean places; always 0 for odd-degree layers
    caveat: bool  # field-norm semantics, see module docstring
    c_estimate: str  # [Z^x : Norm(units)] for the full tower: "1" or "1 or 2"


def _precheck(F: QuadraticField, desc: CyclicExtensionDescriptor) -> None:
    q = desc.q
    if q == desc.p:
        raise WildPrimeError(f"conductor {q} equals p")
    if F.disc % q == 0:
        raise RamifiedInNError(f"conductor {q} ramifies in disc {F.disc}")
    if q % 2 == 0 or F.d % q == 0:
        raise RamifiedInNError(f"conductor {q} is not admissible for d={F.d}")


def local_norm_test(
    F: QuadraticField,
    u: QuadInteger,
    desc: CyclicExtensionDescriptor,
    root: int | None = None,
) -> LocalNormVerdict:
    """Is the unit u a norm everywhere locally at the chosen prime above q?

    ``root`` selects the prime when q splits (a square root of d mod q);
    for inert q there is a single prime and root must be None.
    """
    _precheck(F, desc)
    if abs(u.norm()) != 1:
        raise ValueError("local norm test expects a unit")
    q, e = desc.q, desc.degree
    split = splitting_type(F, q) is SplittingType.SPLIT
    f = 1 if split else 2
    if not split and root is not None:
        raise ValueError("inert conductor has a single prime; root must be None")
    image = reduce_mod_prime(F, u, q, root)
    exponent = (q**f - 1) // e
    power = image**exponent
    order = power.multiplicative_order_dividing(e)
    label = f"{q}" if not split else f"{q}@root={image.root}"
    return LocalNormVerdict(
        prime_label=label,
        residue_degree=f,
        exponent_used=exponent,
        power_value=power,
        is_norm=power.is_one(),
        local_order=order,
    )


def norm_index(F: QuadraticField, desc: CyclicExtensionDescriptor) -> NormIndexReport:
    """Least k such that eps^k is a norm of a field element from the
    compositum, as the lcm of local orders at the primes above q."""
    _precheck(F, desc)
    eps = fundamental_unit(F)
    if splitting_type(F, desc.q) is SplittingType.SPLIT:
        roots = split_roots(F, desc.q)
        verdicts = tuple(local_norm_test(F, eps.value, desc, r) for r in roots)
    else:
        verdicts = (local_norm_test(F, eps.value, desc, None),)
    index = 1
    for v in verdicts:
        index = lcm(index, v.local_order)
    return NormIndexReport(
        d=F.d,
        q=desc.q,
        p=desc.p,
        n=desc.n,
        verdicts=verdicts,
        index=index,
        ratio_p_part=p_part(index, desc.p),
        t=0,
        caveat=True,
        c_estimate="1" if eps.unit_norm == -1 else "1 or 2",
    )


def cohomological_ratio(report: NormIndexReport) -> int:
    """p-part of the unit-cohomology ratio for the two tower layers; equals
    the p-part of the index (the remaining factor is prime to p)."""
    return p_part(report.index, report.p)


@dataclass(frozen=True)
class ConductorRecord:
    q: int
    proper: bool
    index: int | None


@dataclass(frozen=True)
class ClassOrderComparison:
    d: int
    ell: int
    p: int
    n: int
    class_order: int
    class_order_p_part: int
    records: tuple[ConductorRecord, ...]
    agreement: bool  # p-part of the order == index at every proper conductor
    discrepancies: tuple[tuple[int, int], ...]  # (q, index) disagreeing


def admissible_conductors(F: QuadraticField, p: int, n: int, qmax: int) -> list[int]:
    """Primes q <= qmax with q = 1 mod p^n, tame and unramified for the field."""
    e = p**n
    out = []
    q = 2
    while q <= qmax:
        if q % e == 1 and is_prime(q) and F.disc % q and q != p and q % 2:
            out.append(q)
        q += 1
    return out


def verify_class_order(
    F: QuadraticField, ell: int, p: int, n: int, qmax: int
) -> ClassOrderComparison:
    """Compare the order of the class above ell with the norm index at
    every proper conductor up to qmax."""
    if splitting_type(F, ell) is not SplittingType.SPLIT:
        raise ValueError(f"class prime {ell} must split in d={F.d}")
    group = class_group(F, "wide")
    order = group.order_of(prime_form(F, ell))
    order_p = p_part(order, p)
    records = []
    discrepancies = []
    any_proper = False
    for q in admissible_conductors(F, p, n, qmax):
        desc = cyclic_descriptor(q, p, n)
        rep = properness_report(F, desc, ell)
        if not rep.overall:
            records.append(ConductorRecord(q=q, proper=False, index=None))
            continue
        any_proper = True
        idx = norm_index(F, desc).index
        records.append(ConductorRecord(q=q, proper=True, index=idx))
        if idx != order_p:
            discrepancies.append((q, idx))
    if not any_proper:
        raise NoAdmissibleConductorError(
            f"no proper conductor <= {qmax} for d={F.d}, ell={ell}, p^n={p}^{n}"
        )
    return ClassOrderComparison(
        d=F.d,
        ell=ell,
        p=p,
        n=n,
        class_order=order,
        class_order_p_part=order_p,
        records=tuple(records),
        agreement=not discrepancies,
        discrepancies=tuple(discrepancies),
    )


@dataclass(frozen=True)
class DetectionResult:
    d: int
    p: int
    qmax: int
    witness_q: int | None
    witness_index: int | None
    conductors_checked: tuple[int, ...]


def detect_p_divisibility(F: QuadraticField, p: int, qmax: int) -> DetectionResult:
    """Scan conductors passing the inert-conductor and tower conditions and
    return the first with index > 1, as a witness that p divides the class
    number; soundness of a returned witness is what the acceptance sweep
    checks."""
    checked = []
    for q in admissible_conductors(F, p, 1, qmax):
        if (q - 1) % (p * p):  # tower condition for the degree-p layer
            continue
        if splitting_type(F, q) is not SplittingType.INERT:
            continue
        checked.append(q)
        desc = cyclic_descriptor(q, p, 1)
        report = norm_index(F, desc)
        if report.index > 1:
            return DetectionResult(
                d=F.d,
                p=p,
                qmax=qmax,
                witness_q=q,
                witness_index=report.index,
                conductors_checked=tuple(checked),
            )
    return DetectionResult(
        d=F.d,
        p=p,
        qmax=qmax,
        witness_q=None,
        witness_index=None,
        conductors_checked=tuple(checked),
    )
