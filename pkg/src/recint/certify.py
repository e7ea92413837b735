"""Integrality certification of recurrence specs.

certify() runs a parsed spec, profiles every term's coefficient
denominators, and reports three nested integrality levels: plain ring
membership (denominator 1), half-ring membership (power-of-2 denominators),
and lcm(1..n)-scaled membership.  For specs whose head is a single n the
half-shift analysis decides whether the power-of-2 guarantee applies; specs
with a higher power of n are handled by the plain pipeline, which divides
exactly and reports what it sees without any guarantee.

A report is flagged critical when the guarantee applies but the observed
denominators violate it: that combination would be a counterexample to the
underlying theorem, not a bug in the input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .multipoly import denom_profile
from .reclang import RecurrenceSpec, run_spec, spec_hash, to_odd_form
from .scalars import lcm_upto


@dataclass
class IntegralityReport:
    spec_hash: str
    seq_name: str
    ring_vars: tuple[str, ...]
    n_checked: int
    pipeline: str  # "odd-form" or "plain"
    theorem2_applicable: bool
    offenders: list[dict]
    reason: str
    in_ring: bool
    in_ring_half: bool
    dn_scaled_integral: bool
    v2_defects: list[int]
    per_term: list[dict]
    critical: bool

    def to_dict(self) -> dict:
        return {
            "spec_hash": self.spec_hash,
            "seq_name": self.seq_name,
            "ring_vars": list(self.ring_vars),
            "n_checked": self.n_checked,
            "pipeline": self.pipeline,
            "theorem2_applicable": self.theorem2_applicable,
            "offenders": self.offenders,
            "reason": self.reason,
            "in_ring": self.in_ring,
            "in_ring_half": self.in_ring_half,
            "dn_scaled_integral": self.dn_scaled_integral,
            "v2_defects": self.v2_defects,
            "per_term": self.per_term,
            "critical": self.critical,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def table_lines(self) -> list[str]:
        flags = (
            f"pipeline={self.pipeline} applicable={self.theorem2_applicable} "
            f"in_ring={self.in_ring} in_ring_half={self.in_ring_half} "
            f"dn_scaled={self.dn_scaled_integral} critical={self.critical}"
        )
        lines = [f"spec {self.spec_hash[:16]} seq {self.seq_name} n<={self.n_checked}", flags]
        for off in self.offenders:
            lines.append(f"  offender i={off['i']}: even part {off['even_part']}")
        if self.reason:
            lines.append(f"  note: {self.reason}")
        lines.append(f"{'n':>4} {'denominator':>16} {'v2_defect':>9}")
        for rec in self.per_term:
            lines.append(f"{rec['n']:>4} {rec['denominator']:>16} {rec['v2_defect']:>9}")
        return lines


def certify(spec: RecurrenceSpec, n: int) -> IntegralityReport:
    """Run the spec to index n and certify the denominators it produces."""
    seq = run_spec(spec, n)
    per_term = []
    defects = []
    in_ring = True
    in_half = True
    dn_ok = True
    for k, term in enumerate(seq.terms):
        prof = denom_profile(term)
        per_term.append(
            {"n": k, "denominator": prof.lcm_denominator, "v2_defect": prof.max_neg_v2}
        )
        defects.append(prof.max_neg_v2)
        if prof.lcm_denominator != 1:
            in_ring = False
        if not prof.two_adic_only:
            in_half = False
        if denom_profile(term * lcm_upto(k)).lcm_denominator != 1:
            dn_ok = False

    if spec.lead_power == 1:
        pipeline = "odd-form"
        odd = to_odd_form(spec)
        applicable = odd.applicable
        offenders = [
            {"i": i, "even_part": part.text()} for i, part in odd.offenders
        ]
        reason = odd.reason
    else:
        pipeline = "plain"
        applicable = False
        offenders = []
        reason = f"leading coefficient n^{spec.lead_power}: empirical report only"

    return IntegralityReport(
        spec_hash=spec_hash(spec),
        seq_name=spec.seq_name,
        ring_vars=spec.ring_vars,
        n_checked=n,
        pipeline=pipeline,
        theorem2_applicable=applicable,
        offenders=offenders,
        reason=reason,
        in_ring=in_ring,
        in_ring_half=in_half,
        dn_scaled_integral=dn_ok,
        v2_defects=defects,
        per_term=per_term,
        critical=applicable and not in_half,
    )
