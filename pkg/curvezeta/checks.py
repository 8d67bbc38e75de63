from enum import StrEnum

from pydantic import BaseModel, Field


class CheckStatus(StrEnum):
    PASS = "pass"
    FAIL = "fail"
    NA = "n/a"
    EXPECTED_FAIL = "expected-fail"


class CheckResult(BaseModel):
    name: str
    status: CheckStatus
    witness: str | None = Field(default=None, description="First differing coefficient or violated instance")
    seconds: float | None = Field(default=None, exclude=True)

    @property
    def failed(self) -> bool:
        return self.status == CheckStatus.FAIL

    @classmethod
    def from_witness(cls, name: str, witness: str | None) -> "CheckResult":
        """No witness means the property held everywhere it was tested."""
        return cls(name=name, status=CheckStatus.PASS if witness is None else CheckStatus.FAIL, witness=witness)

    @classmethod
    def not_applicable(cls, name: str, reason: str) -> "CheckResult":
        return cls(name=name, status=CheckStatus.NA, witness=reason)


def gate_gorenstein(result: CheckResult, gorenstein: bool, expect_gorenstein: bool | None) -> CheckResult:
    """
    Re-label a Gorenstein-dependent result.
    A declared flag that contradicts the semigroup fails outright; for non-Gorenstein
    semigroups a failure is expected when declared and not judged when undeclared.
    """
    if expect_gorenstein is not None and expect_gorenstein != gorenstein:
        return result.model_copy(
            update={
                "status": CheckStatus.FAIL,
                "witness": f"input declares expect_gorenstein={str(expect_gorenstein).lower()}"
                f" but the semigroup is {'' if gorenstein else 'not '}Gorenstein",
            }
        )
    if gorenstein:
        return result
    if expect_gorenstein is None:
        return CheckResult.not_applicable(result.name, "not Gorenstein")
    if result.status == CheckStatus.FAIL:
        return result.model_copy(update={"status": CheckStatus.EXPECTED_FAIL})
    if result.status == CheckStatus.PASS:
        return result.model_copy(
            update={"status": CheckStatus.FAIL, "witness": "holds although the semigroup is not Gorenstein"}
        )
    return result
