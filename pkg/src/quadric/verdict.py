from dataclasses import dataclass, field


@dataclass(frozen=True)
class Verdict:
    """A yes/no answer carrying witnesses for the negative case.

    Truthiness follows ``ok`` so a verdict can be used directly in
    conditionals.  ``witnesses`` is empty when ``ok`` is true unless a check
    chooses to report supporting data.
    """

    ok: bool
    witnesses: tuple = ()
    reason: str = ""
    details: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return self.ok

    @classmethod
    def passed(cls, **details):
        return cls(True, (), "", details)

    @classmethod
    def failed(cls, reason, witnesses=(), **details):
        return cls(False, tuple(witnesses), reason, details)
