"""The end-to-end decision pipeline and its report."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from functools import reduce

from .crossprime import Certification, Component, MixedUnion, intersect_multi
from .errors import SkolemError
from .lrs import LRS, CharPoly, term_at
from .numtheory import lcm
from .pnormal import (
    ElementaryPNested,
    PNormalN,
    PNormalZ,
    ProgressionZ,
    intersect_same_p,
    periodic_set,
    progression_residues,
)
from .problem import Problem
from .reduction import (
    CrtComponent,
    crt_split,
    exp_poly_sum,
    primary_split,
    split_char_poly,
    to_simple_sums,
)
from .sunit import SimpleSumEquation, fit_pnormal, solve_simple_sum

SCHEMA = "skolem-report/1"
HAS_ZERO = "HAS_ZERO"
NO_ZERO = "NO_ZERO"
UNKNOWN_BOUNDED = "UNKNOWN_BOUNDED"
FALLBACK_SCAN = 256
WITNESS_CHECK_LIMIT = 1 << 20


@dataclass
class ComponentReport:
    prime: int
    exponent: int
    component: Component | None
    notes: list[str] = field(default_factory=list)
    error: str | None = None

    def to_json(self, emit_set: bool = False) -> dict:
        out = {"prime": self.prime, "exponent": self.exponent, "notes": list(self.notes)}
        if self.component is None:
            out.update({"status": "FAILED", "error": self.error})
            return out
        out["status"] = str(self.component.cert)
        out["zero_set"] = self.component.set.describe()
        if emit_set:
            out["zero_set_json"] = self.component.set.to_json()
        return out


@dataclass
class ZeroSetReport:
    verdict: str
    witness: int | None
    witness_verified: bool
    components: list[ComponentReport]
    intersection: MixedUnion | None
    reason: str | None = None
    bounds: dict = field(default_factory=dict)
    assumptions: list[str] = field(default_factory=list)
    timing: float = 0.0
    counters: dict = field(default_factory=dict)

    def contains(self, n: int) -> bool:
        """Membership in the emitted zero-set description."""
        if self.intersection is None:
            raise ValueError("no zero-set description was produced")
        return self.intersection.contains(n)

    def to_json(self, emit_set: bool = False) -> dict:
        inter = None
        if self.intersection is not None:
            inter = {
                "status": self.intersection.status,
                "parts": [
                    {"base": c.p, "set": c.set.describe(), **({"json": c.set.to_json()} if emit_set else {})}
                    for c in self.intersection.components
                ],
                "notes": list(self.intersection.cert.notes),
            }
        return {
            "schema": SCHEMA,
            "verdict": self.verdict,
            "witness": self.witness,
            "witness_verified": self.witness_verified,
            "reason": self.reason,
            "bounds": dict(self.bounds),
            "components": [c.to_json(emit_set) for c in self.components],
            "intersection": inter,
            "assumptions": list(self.assumptions),
            "counters": dict(self.counters),
            "timing_seconds": round(self.timing, 4),
        }


# -- per-prime pipeline ---------------------------------------------------------------------


def _normalize_threshold(s: PNormalN) -> PNormalN:
    """Lower the threshold while the finite part agrees with the tail."""
    n = s.threshold
    tail_has = s.tail.contains if isinstance(s.tail, PNormalZ) else s.tail.accepts
    while n > 0 and ((n - 1) in s.finite) == tail_has(n - 1):
        n -= 1
    return PNormalN(s.p, n, frozenset(z for z in s.finite if z < n), s.tail)


def _refit(tail: PNormalZ, p: int, e: int, bound: int) -> PNormalZ:
    """Re-describe a union of nested parts by a single fit when one matches."""
    if tail.only_progressions() or len(tail.parts) < 2:
        return tail
    members = [z for z in range(bound + 1) if tail.contains(z)]
    parts, kind = fit_pnormal(members, bound, p, e)
    if kind in ("finite",) or len(parts) >= len(tail.parts):
        return tail
    new = PNormalZ(p, parts)
    # the fit must agree with the old description a little beyond the window
    if all(new.contains(z) == tail.contains(z) for z in range(bound + 1, p * bound + 1)):
        return new
    return tail


def zero_set_of_component(comp: CrtComponent, options: dict, decomposition=(), counters=None) -> tuple[Component, list[str]]:
    """Zero set of the sequence over one Z/p^e component."""
    counters = counters if counters is not None else {}
    p, e, A, alpha = comp.prime, comp.exponent, comp.ring, comp.lrs
    notes: list[str] = []
    cert = Certification()
    f = list(CharPoly.of(alpha).poly)
    split = split_char_poly(A, f)
    if split.adjoined:
        notes.append(f"adjoined roots {', '.join(split.adjoined)}")
    prim = primary_split(split.extended_ring, decomposition or None)
    counters["primary_components"] = counters.get("primary_components", 0) + len(prim)
    result: PNormalN | None = None
    for pc in prim:
        pc = pc.project(alpha)
        if not pc.primary_verified:
            notes.append(f"assumed primary: {pc.ring}")
        eps = exp_poly_sum(pc, split.roots)
        sums = to_simple_sums(eps, p, e)
        counters["simple_sums"] = counters.get("simple_sums", 0) + len(sums)
        P = sums[0].period if sums else 1
        parts = []
        any_nested = False
        for ss in sums:
            if not ss.bases:
                continue
            eq = SimpleSumEquation.from_fractions(ss.coefficients, ss.bases, p, e)
            zc = solve_simple_sum(eq, options["backend"], options["certify_bound"])
            if not zc.proven:
                cert.weaken(zc.bound, f"simple sums certified up to z <= {zc.bound}")
            for part in zc.set.parts:
                if isinstance(part, ElementaryPNested):
                    any_nested = True
                parts.append(part.affine(P, ss.q))
        if not eps.terms:
            # the sequence is eventually zero
            parts = [ProgressionZ(1, 0)]
        tail = PNormalZ(p, parts)
        if parts and tail.only_progressions():
            L = reduce(lcm, (x.modulus for x in parts), 1)
            tail = periodic_set(p, L, progression_residues(parts, L))
        if any_nested:
            tail = _refit(tail, p, e, min(P * options["certify_bound"], 1 << 14))
        start = eps.start
        head = [n for n, t in enumerate(pc.lrs.prefix(start)) if t.is_zero()]
        piece = _normalize_threshold(PNormalN(p, start, frozenset(head), tail))
        result = piece if result is None else intersect_same_p(result, piece)
    return Component(p, result, cert), notes


# -- whole problem ---------------------------------------------------------------------------


def _is_zero_everywhere(comps: list[CrtComponent], n: int) -> bool:
    return all(term_at(c.lrs, n).is_zero() for c in comps)


def decide_skolem(problem: Problem, bound: int | None = None, certify_bound: int | None = None, backend: str | None = None) -> ZeroSetReport:
    t0 = time.perf_counter()
    options = dict(problem.options)
    if bound is not None:
        options["bound"] = bound
    if certify_bound is not None:
        options["certify_bound"] = certify_bound
    if backend is not None:
        options["backend"] = backend
    bounds = {"exponent_bound": options["bound"], "certify_bound": options["certify_bound"], "backend": options["backend"]}
    comps = crt_split(problem.characteristic, problem.variables, problem.ideal, problem.coefficients, problem.initial)
    counters: dict = {"crt_components": len(comps)}
    reports: list[ComponentReport] = []
    assumptions: list[str] = []
    failure: str | None = None
    for c in comps:
        try:
            component, notes = zero_set_of_component(c, options, problem.primary_decomposition, counters)
            reports.append(ComponentReport(c.prime, c.exponent, component, notes))
            assumptions += [f"p={c.prime}: {n}" for n in notes if n.startswith("assumed")]
        except SkolemError as err:
            reports.append(ComponentReport(c.prime, c.exponent, None, error=f"{err.reason}: {err}"))
            failure = failure or f"{err.reason}: {err}"

    def finish(verdict, witness=None, verified=False, inter=None, reason=None):
        return ZeroSetReport(
            verdict, witness, verified, reports, inter, reason, bounds, assumptions, time.perf_counter() - t0, counters
        )

    if failure is not None:
        # the zero set is unknown; a directly found zero is still a sound witness
        for n in range(FALLBACK_SCAN):
            if _is_zero_everywhere(comps, n):
                return finish(HAS_ZERO, n, True, reason=failure)
        return finish(UNKNOWN_BOUNDED, reason=f"{failure}; no zero among the first {FALLBACK_SCAN} terms")

    inter = intersect_multi([r.component for r in reports], options["bound"])
    witness = inter.min_member()
    if witness is not None:
        finite = all(c.ring.is_finite for c in comps)
        if finite or witness <= WITNESS_CHECK_LIMIT:
            if _is_zero_everywhere(comps, witness):
                return finish(HAS_ZERO, witness, True, inter)
            return finish(UNKNOWN_BOUNDED, inter=inter, reason=f"predicted zero at n={witness} failed verification")
        return finish(UNKNOWN_BOUNDED, inter=inter, reason=f"predicted zero at n={witness} is too large to verify")
    if inter.cert.proven:
        return finish(NO_ZERO, inter=inter)
    return finish(UNKNOWN_BOUNDED, inter=inter, reason="no zero found; " + "; ".join(inter.cert.notes))


# -- output --------------------------------------------------------------------------------------


def emit_report(report: ZeroSetReport, fmt: str = "text", emit_zero_set: bool = False) -> str:
    if fmt == "json":
        return json.dumps(report.to_json(emit_zero_set), indent=2, sort_keys=False) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = []
    v = report.verdict
    if v == HAS_ZERO:
        lines.append(f"verdict: HAS_ZERO (witness n = {report.witness}, verified)")
    elif v == NO_ZERO:
        lines.append("verdict: NO_ZERO (proven)")
    else:
        lines.append(f"verdict: UNKNOWN_BOUNDED ({report.reason})")
    if report.reason and v != UNKNOWN_BOUNDED:
        lines.append(f"note: {report.reason}")
    for c in report.components:
        if c.component is None:
            lines.append(f"  p={c.prime} (Z/{c.prime ** c.exponent}): failed: {c.error}")
            continue
        lines.append(f"  p={c.prime} (Z/{c.prime ** c.exponent}): {c.component.set.describe()}  [{c.component.cert}]")
        for n in c.notes:
            lines.append(f"      {n}")
    if report.intersection is not None and emit_zero_set:
        lines.append(f"zero set [{report.intersection.status}]:")
        for c in report.intersection.components:
            lines.append(f"  base {c.p}: {c.set.describe()}")
    for a in report.assumptions:
        lines.append(f"assumption: {a}")
    lines.append(f"time: {report.timing:.3f}s")
    return "\n".join(lines) + "\n"
