"""Covariant observables, instruments, and channels under finite groups.

Thin Python layer over the C++ core.  Matrices cross the boundary as NumPy
arrays (complex128 for operators, float64 for spectra); group elements,
points, and orbits are plain integers.

Quick start::

    import covkit as ck

    g = ck.symmetric_group(3)
    space = ck.product_action_space(g, 2)
    sys = ck.make_system(space, ck.permutation_rep(g))
    fam = ck.generate(ck.SymFamilySpec(3, ck.symfam_alpha0()))
    report = ck.classify(fam.povm)
    assert report.is_rank1 and report.is_informationally_complete
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__doc__ = __doc__ or _core_doc
