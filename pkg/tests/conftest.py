"""Shared fixtures: the worked algebras and their derived categories.

Everything heavyweight is session scoped; categories cache hom/E data
internally, so sharing them across tests keeps the whole suite fast.
"""

import pytest

from extrikit import builders, constructions as con
from extrikit import homological as hml
from extrikit import presets, reps, spec_io


@pytest.fixture(scope="session")
def ka3_alg():
    return spec_io.parse_quiver_spec(presets.ka3_line()).build()


@pytest.fixture(scope="session")
def ka3_rad2_alg():
    return spec_io.parse_quiver_spec(presets.ka3_rad2()).build()


@pytest.fixture(scope="session")
def blossom_alg():
    return spec_io.parse_quiver_spec(presets.blossom()).build()


@pytest.fixture(scope="session")
def mod_ka3(ka3_alg):
    return builders.from_module_category(ka3_alg)


@pytest.fixture(scope="session")
def slice_ka3(ka3_alg):
    return builders.hereditary_slice(ka3_alg)


@pytest.fixture(scope="session")
def tt_rad2(ka3_rad2_alg):
    return builders.two_term_category(ka3_rad2_alg)


@pytest.fixture(scope="session")
def mod_rad2(ka3_rad2_alg):
    return builders.from_module_category(ka3_rad2_alg)


SLICE_D = "1+2+3[1]"


@pytest.fixture(scope="session")
def rel_slice(slice_ka3):
    """The relative structure cutting out the shifted big projective."""
    lower, upper, both = con.relative_subfunctors(slice_ka3, [SLICE_D])
    cat = con.relative_category(slice_ka3, lower)
    return cat, lower


@pytest.fixture(scope="session")
def quot_slice(rel_slice):
    cat, _ = rel_slice
    return con.ideal_quotient_category(cat, [SLICE_D])


@pytest.fixture(scope="session")
def mod_blossom(blossom_alg):
    return builders.from_module_category(blossom_alg)


def blossom_e_members(cat):
    """Labels of the exact subcategory: no socle at the simple-projective
    vertices and no translate supported at the projective-injectives."""
    members = []
    for lab in cat.objects:
        m = cat.backend.rep_of[lab]
        if any(m.dims[v] for v in ["c", "f", "g", "h"]):
            continue
        tm = hml.ar_translate_general(m)
        if any(tm.dims[v] for v in ["a", "b", "d", "e"]):
            continue
        members.append(lab)
    return members


@pytest.fixture(scope="session")
def sub_e(mod_blossom):
    return con.restrict_extension_closed(mod_blossom, blossom_e_members(mod_blossom))


@pytest.fixture(scope="session")
def cat_eb(sub_e):
    projs, injs = sub_e.pi_objects()
    b = sorted(set(projs) & set(injs))
    return con.ideal_quotient_category(sub_e, b)


# bijection between E/B labels and module-or-shifted-projective names
EB_NAMES = {
    "3": "3", "2+3": "2/3", "2+3+d": "2", "1+2": "1/2", "1+2+e": "1",
    "1+a+b": "1/2[1]", "1+2+a+e": "2/3[1]", "2+3+d+e": "3[1]",
}


@pytest.fixture(scope="session")
def eb_names():
    return EB_NAMES
