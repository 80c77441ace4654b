"""Khovanov homology of links given by planar diagram codes.

Two independent routes compute homology: the full cube of resolutions
(:mod:`.cube`) and a crossing-by-crossing scan with delooping and Gaussian
elimination (:mod:`.scan`).  :mod:`.colored` adds symmetric-group actions on
cables and colored homology.
"""

from .colored import (
    Color,
    colored_kh,
    jw_projector_action,
    kirby_colored_unknot,
    parse_color,
    transposition_action,
    unknot_jw_dimension,
    unknot_transposition,
    unknot_word_action,
)
from .cube import (
    ChainMap,
    KhComplex,
    cube_complex,
    jones_from_bracket,
    kauffman_bracket,
    khovanov_homology,
)
from .pd import LinkDiagram, PDError, builtin, builtin_names, cable, load_pd, parse_pd, unlink
from .scan import scan_complex, scan_homology

__all__ = [
    "ChainMap",
    "Color",
    "KhComplex",
    "LinkDiagram",
    "PDError",
    "builtin",
    "builtin_names",
    "cable",
    "colored_kh",
    "cube_complex",
    "jones_from_bracket",
    "jw_projector_action",
    "kauffman_bracket",
    "khovanov_homology",
    "kirby_colored_unknot",
    "load_pd",
    "parse_color",
    "parse_pd",
    "scan_complex",
    "scan_homology",
    "transposition_action",
    "unknot_jw_dimension",
    "unknot_transposition",
    "unknot_word_action",
    "unlink",
]
