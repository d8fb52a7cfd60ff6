"""Star selector strings.

Grammar::

    fp | ls | bloom:<mu> | cfam:<c> | eta:<r>[:<index>] | gfam:<file>
       | meanmarg[:<xi-file>] | xiperturbed:<base>:<xi-file>

``xiperturbed:<base>:xx`` uses the built-in X⊗X witness instead of a file.
"""

from __future__ import annotations

from pathlib import Path

from sotforge.errors import SelectorError
from sotforge.serialization import load_matrix, load_operator
from sotforge.stars import (
    StarProduct,
    bloom,
    cfam,
    fp,
    ls,
    make_eta_family,
    make_gfam,
    make_xi_perturbed,
    mean_marginal,
    xx_witness,
)


def _number(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise SelectorError(f"{what} must be a number, got {text!r}") from None


def _path(text: str, base_dir: Path | None) -> Path:
    path = Path(text)
    if base_dir is not None and not path.is_absolute():
        path = base_dir / path
    if not path.exists():
        raise SelectorError(f"File {str(path)!r} named in selector does not exist")
    return path


def parse_selector(text: str, base_dir: str | Path | None = None) -> StarProduct:
    """Build the StarProduct named by a selector string.

    Raises:
        SelectorError: Unknown family, malformed parameter or missing file.
    """
    root = Path(base_dir) if base_dir is not None else None
    text = text.strip()
    head, _, rest = text.partition(":")
    head = head.lower()

    if head == "fp" and not rest:
        return fp()
    if head == "ls" and not rest:
        return ls()
    if head == "bloom":
        if not rest:
            raise SelectorError("bloom needs a parameter: bloom:<mu>")
        return bloom(_number(rest, "bloom mu"))
    if head == "cfam":
        if not rest:
            raise SelectorError("cfam needs a parameter: cfam:<c>")
        return cfam(_number(rest, "cfam c"))
    if head == "eta":
        r_text, _, index_text = rest.partition(":")
        if not r_text:
            raise SelectorError("eta needs a parameter: eta:<r>[:<index>]")
        index = 0
        if index_text:
            try:
                index = int(index_text)
            except ValueError:
                raise SelectorError(f"eta index must be an integer, got {index_text!r}") from None
        return make_eta_family(_number(r_text, "eta r"), index)
    if head == "gfam":
        if not rest:
            raise SelectorError("gfam needs a superoperator file: gfam:<file>")
        return make_gfam(load_matrix(_path(rest, root)))
    if head == "meanmarg":
        if not rest:
            return mean_marginal()
        return mean_marginal(load_matrix(_path(rest, root)))
    if head == "xiperturbed":
        base_text, sep, xi_text = rest.rpartition(":")
        if not sep or not base_text or not xi_text:
            raise SelectorError("xiperturbed needs a base and a Ξ: xiperturbed:<base>:<xi-file>")
        base = parse_selector(base_text, root)
        if xi_text.lower() == "xx":
            return make_xi_perturbed(base, xx_witness(), "xx")
        path = _path(xi_text, root)
        return make_xi_perturbed(base, load_operator(path), path.stem)
    raise SelectorError(f"Unknown star selector {text!r}")


def format_selector(s: StarProduct) -> str:
    return s.label
