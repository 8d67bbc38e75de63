"""
Output documents and their text / JSON renderings. Both renderings are deterministic:
terms are sorted by total degree, then by T-exponent (T1 before T2), then by descending U-power,
and JSON keys are sorted.
"""

import json
from collections.abc import Sequence
from typing import Literal

import sympy as sp
from pydantic import BaseModel, Field

from curvezeta.checks import CheckResult, CheckStatus
from curvezeta.motivic import RationalFunction, TPoly, ZetaForm
from curvezeta.parse_utils import format_multiindex
from curvezeta.series import MultiIndex, norm
from curvezeta.valuesemigroup import SemigroupData
from curvezeta.zeta import ZetaReport

OutputFormat = Literal["text", "json"]


def _variable(i: int, nvars: int) -> str:
    return "T" if nvars == 1 else f"T{i + 1}"


def _power(base: str, k: int) -> str:
    return base if k == 1 else f"{base}^{k}"


def _monomial(e: MultiIndex) -> str:
    return " ".join(_power(_variable(i, len(e)), k) for i, k in enumerate(e) if k)


def _term_order(e: MultiIndex) -> tuple:
    return (norm(e), tuple(-x for x in e))


def _join(terms: Sequence[tuple[bool, str]]) -> str:
    """(negative, body) pairs -> "a - b + c"."""
    if not terms:
        return "0"
    out = []
    for k, (negative, body) in enumerate(terms):
        if k == 0:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)


def _scaled(coeff: str, body: str) -> str:
    if not body:
        return coeff or "1"
    return f"{coeff} {body}" if coeff else body


def tpoly_text(poly: TPoly) -> str:
    terms = []
    for e, coeff in sorted(poly.items(), key=lambda item: _term_order(item[0])):
        for uexp, c in sorted(coeff.items(), key=lambda item: -item[0]):
            body = " ".join(part for part in (_power("U", uexp) if uexp else "", _monomial(e)) if part)
            terms.append((c < 0, _scaled("" if abs(c) == 1 else str(abs(c)), body)))
    return _join(terms)


def denominator_text(z: ZetaForm) -> str:
    parts = []
    for i, multiplicity in enumerate(z.denominator):
        if multiplicity:
            factor = f"(1 - U^-1 {_variable(i, z.nvars)})"
            parts.append(factor if multiplicity == 1 else f"{factor}^{multiplicity}")
    return "".join(parts)


def zetaform_text(z: ZetaForm) -> str:
    numerator = tpoly_text(z.numerator)
    denominator = denominator_text(z)
    if not denominator:
        return numerator
    return f"({numerator})/{denominator}"


def expr_text(expr: sp.Expr) -> str:
    return str(expr).replace("**", "^").replace("*", " ")


def _coefficient(coeff: sp.Expr) -> tuple[bool, str]:
    coeff = sp.expand(coeff)
    if isinstance(coeff, sp.Add):
        return False, f"({expr_text(coeff)})"
    negative = bool(coeff.could_extract_minus_sign())
    magnitude = -coeff if negative else coeff
    return negative, "" if magnitude == 1 else expr_text(magnitude)


def sympy_poly_text(terms: Sequence[tuple[MultiIndex, sp.Expr]]) -> str:
    parts = []
    for e, coeff in sorted(terms, key=lambda item: _term_order(item[0])):
        negative, scale = _coefficient(coeff)
        parts.append((negative, _scaled(scale, _monomial(e))))
    return _join(parts)


def rational_text(rf: RationalFunction) -> str:
    numerator = sympy_poly_text(rf.numerator_terms())
    if rf.denominator == 1:
        return numerator
    return f"({numerator})/({sympy_poly_text(rf.denominator_terms())})"


class ZetaFormDoc(BaseModel):
    variables: list[str]
    numerator: dict[str, dict[str, int]] = Field(description='"e1,...,ed" -> U-exponent -> coefficient')
    denominator: list[int] = Field(description="1-based variable index per factor (1 - U^-1 T_i)")
    text: str


class RationalFunctionDoc(BaseModel):
    variables: list[str]
    numerator: dict[str, str]
    denominator: dict[str, str]
    text: str


class SemigroupDoc(BaseModel):
    d: int
    conductor: list[int]
    delta: int
    gorenstein: bool
    elements: list[list[int]] = Field(description="S inside the box [0, c+1]")


class CheckDoc(BaseModel):
    name: str
    status: CheckStatus
    witness: str | None = None


class OutputDocument(BaseModel):
    command: str
    source: str | None = None
    truncation: list[int] | None = None
    semigroup: SemigroupDoc | None = None
    zeta: ZetaFormDoc | None = None
    poincare: ZetaFormDoc | None = None
    specialization: RationalFunctionDoc | None = None
    euler_specialization: RationalFunctionDoc | None = None
    monodromy: RationalFunctionDoc | None = None
    checks: list[CheckDoc] | None = None

    @property
    def failed(self) -> bool:
        return any(check.status == CheckStatus.FAIL for check in self.checks or [])


def zetaform_doc(z: ZetaForm) -> ZetaFormDoc:
    numerator = {
        format_multiindex(e): {str(uexp): c for uexp, c in coeff.items()} for e, coeff in z.numerator.items()
    }
    denominator = [i + 1 for i, m in enumerate(z.denominator) for _ in range(m)]
    return ZetaFormDoc(
        variables=[_variable(i, z.nvars) for i in range(z.nvars)],
        numerator=numerator,
        denominator=denominator,
        text=zetaform_text(z),
    )


def rational_doc(rf: RationalFunction) -> RationalFunctionDoc:
    return RationalFunctionDoc(
        variables=[str(v) for v in rf.variables],
        numerator={format_multiindex(e): expr_text(c) for e, c in rf.numerator_terms()},
        denominator={format_multiindex(e): expr_text(c) for e, c in rf.denominator_terms()},
        text=rational_text(rf),
    )


def semigroup_doc(S: SemigroupData) -> SemigroupDoc:
    return SemigroupDoc(
        d=S.d,
        conductor=list(S.conductor),
        delta=S.delta,
        gorenstein=S.is_gorenstein,
        elements=[list(n) for n in S.elements()],
    )


def check_doc(result: CheckResult) -> CheckDoc:
    return CheckDoc(name=result.name, status=result.status, witness=result.witness)


def report_doc(report: ZetaReport, command: str = "check") -> OutputDocument:
    return OutputDocument(
        command=command,
        source=report.source or None,
        truncation=list(report.truncation) if report.truncation is not None else None,
        semigroup=semigroup_doc(report.semigroup),
        zeta=zetaform_doc(report.zeta),
        poincare=zetaform_doc(report.poincare),
        euler_specialization=rational_doc(report.euler_specialization),
        monodromy=rational_doc(report.monodromy) if report.monodromy is not None else None,
        checks=[check_doc(c) for c in report.checks],
    )


def _index_text(values: Sequence[int]) -> str:
    return str(values[0]) if len(values) == 1 else f"({format_multiindex(tuple(values))})"


def render_text(doc: OutputDocument) -> str:
    lines = []
    if doc.truncation is not None:
        lines.append(f"truncation: {format_multiindex(tuple(doc.truncation))}")
    if doc.semigroup is not None:
        S = doc.semigroup
        lines.append(f"conductor: {_index_text(S.conductor)}")
        lines.append(f"delta: {S.delta}")
        lines.append(f"gorenstein: {'yes' if S.gorenstein else 'no'}")
        lines.append(f"semigroup: {', '.join(_index_text(n) for n in S.elements)}")
    if doc.zeta is not None:
        lines.append(f"Z = {doc.zeta.text}")
    if doc.poincare is not None:
        lines.append(f"P = {doc.poincare.text}")
    if doc.specialization is not None:
        lines.append(doc.specialization.text)
    if doc.euler_specialization is not None:
        lines.append(f"chi(Z) = {doc.euler_specialization.text}")
    if doc.monodromy is not None:
        lines.append(f"monodromy zeta = {doc.monodromy.text}")
    for check in doc.checks or []:
        suffix = f" ({check.witness})" if check.witness else ""
        lines.append(f"{check.name}: {check.status}{suffix}")
    return "\n".join(lines)


def render_json(doc: OutputDocument) -> str:
    return json.dumps(doc.model_dump(mode="json", exclude_none=True), sort_keys=True, indent=2)


def render(doc: OutputDocument, fmt: OutputFormat = "text") -> str:
    if fmt == "json":
        return render_json(doc)
    return render_text(doc)
