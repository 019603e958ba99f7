"""Complex literals of the form ``a+bi`` / ``a-bi`` used on the command line."""

from .errors import ParameterError


def parse_complex(text):
    """Parse ``1``, ``0.5+0i``, ``-2.5e-1-3i``, ``i``, ``-i``, ``0.3+0.4i``."""
    s = text.strip().replace(" ", "").replace("j", "i")
    if not s:
        raise ParameterError("empty complex literal")
    try:
        if s.endswith("i"):
            body = s[:-1]
            if body[-1:] in ("", "+", "-"):
                body += "1"
            return complex(body + "j")
        return complex(float(s), 0.0)
    except ValueError:
        raise ParameterError(f"malformed complex literal {text!r}") from None


def format_complex(z, digits=15):
    z = complex(z)
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"
