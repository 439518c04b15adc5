from ..const import (
    SCHEME_DETERMINISTIC,
    SCHEME_EULER_MARUYAMA,
    SCHEME_HEUN_STRATONOVICH,
    SCHEME_IMEX,
)

SCHEME_TYPES = [
    {
        "name": SCHEME_EULER_MARUYAMA,
        "form": "ito",
        "explicit": True,
        "description": "Euler-Maruyama on the Itô system",
    },
    {
        "name": SCHEME_HEUN_STRATONOVICH,
        "form": "stratonovich",
        "explicit": True,
        "description": "Heun predictor-corrector on the Stratonovich system",
    },
    {
        "name": SCHEME_IMEX,
        "form": "ito",
        "explicit": False,
        "description": "Implicit second-order term, explicit remainder, Itô form",
    },
    {
        "name": SCHEME_DETERMINISTIC,
        "form": "stratonovich",
        "explicit": True,
        "description": "Heun on the noise-free system",
    },
]

_BY_NAME = {desc["name"]: desc for desc in SCHEME_TYPES}


def scheme_description(name: str) -> dict:
    return _BY_NAME[name]


def scheme_form(name: str) -> str:
    return _BY_NAME[name]["form"]


def is_explicit(name: str) -> bool:
    return _BY_NAME[name]["explicit"]
